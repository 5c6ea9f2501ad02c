//! Maps on the projective plane, stored as a sphere double cover with its
//! deck involution.
//!
//! A deck involution `tau` is a dart permutation with `tau² = id` that
//! commutes with `alpha` and reverses the rotation (`tau ∘ sigma ∘ tau =
//! sigma⁻¹`), and fixes no dart, edge, vertex or face. The quotient cells are
//! the `tau`-orbits of the cover cells; a face `f` is paired with the face of
//! `alpha(tau(d))` for any `d` in `f`.

use thiserror::Error;

use crate::canon::{canonical_labeling_with, relabel, CanonicalCode};
use crate::map::{alpha, Dart, Face, OrientedMap, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProjectiveError {
    #[error("involution has {got} entries, map has {expected} darts")]
    WrongLength { expected: usize, got: usize },
    #[error("not an involution at dart {0}")]
    NotInvolution(Dart),
    #[error("fixes dart {0}")]
    FixedDart(Dart),
    #[error("fixes the edge of dart {0}")]
    FixedEdge(Dart),
    #[error("does not commute with the edge involution at dart {0}")]
    NotEdgeCompatible(Dart),
    #[error("does not reverse the rotation at dart {0}")]
    NotOrientationReversing(Dart),
    #[error("fixes vertex {0}")]
    FixedVertex(Vertex),
    #[error("fixes face {0}")]
    FixedFace(Face),
}

/// Extends `from ↦ to` to a dart map `t` with `t ∘ sigma = sigma⁻¹ ∘ t` and
/// `t ∘ alpha = alpha ∘ t`. Returns `None` if the extension is inconsistent.
pub(crate) fn propagate_anti_automorphism(
    map: &OrientedMap,
    from: Dart,
    to: Dart,
) -> Option<Vec<Dart>> {
    let n = map.num_darts();
    let mut img = vec![usize::MAX; n];
    let mut used = vec![false; n];
    img[from] = to;
    used[to] = true;
    let mut stack = vec![from];
    while let Some(x) = stack.pop() {
        let y = img[x];
        for (xx, yy) in [(map.sigma(x), map.sigma_inv(y)), (alpha(x), alpha(y))] {
            if img[xx] == usize::MAX {
                if used[yy] {
                    return None;
                }
                img[xx] = yy;
                used[yy] = true;
                stack.push(xx);
            } else if img[xx] != yy {
                return None;
            }
        }
    }
    Some(img)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DeckInvolution {
    tau: Vec<Dart>,
}

impl DeckInvolution {
    /// Checks every deck-involution invariant against `map`.
    pub fn new(map: &OrientedMap, tau: Vec<Dart>) -> Result<Self, ProjectiveError> {
        let n = map.num_darts();
        if tau.len() != n {
            return Err(ProjectiveError::WrongLength {
                expected: n,
                got: tau.len(),
            });
        }
        for d in 0..n {
            let t = tau[d];
            if t >= n || tau[t] != d {
                return Err(ProjectiveError::NotInvolution(d));
            }
            if t == d {
                return Err(ProjectiveError::FixedDart(d));
            }
            if t == alpha(d) {
                return Err(ProjectiveError::FixedEdge(d));
            }
            if tau[alpha(d)] != alpha(t) {
                return Err(ProjectiveError::NotEdgeCompatible(d));
            }
            if tau[map.sigma(d)] != map.sigma_inv(t) {
                return Err(ProjectiveError::NotOrientationReversing(d));
            }
        }
        for v in 0..map.num_vertices() {
            if map.vertex(tau[map.vertex_start(v)]) == v {
                return Err(ProjectiveError::FixedVertex(v));
            }
        }
        for f in 0..map.num_faces() {
            if map.face(alpha(tau[map.face_start(f)])) == f {
                return Err(ProjectiveError::FixedFace(f));
            }
        }
        Ok(DeckInvolution { tau })
    }

    #[inline]
    pub fn image(&self, d: Dart) -> Dart {
        self.tau[d]
    }

    pub fn as_slice(&self) -> &[Dart] {
        &self.tau
    }
}

/// Every deck involution of `map`, found by extending `0 ↦ e` for each dart
/// `e`. By uniqueness of projective quotients the result has at most one
/// element when the map has no vertex of degree 2.
pub fn find_quotient_involutions(map: &OrientedMap) -> Vec<DeckInvolution> {
    let mut found = Vec::new();
    for e in 0..map.num_darts() {
        // Cheap necessary conditions before propagating.
        if e == 0 || e == 1 || map.degree(map.vertex(e)) != map.degree(map.vertex(0)) {
            continue;
        }
        if let Some(tau) = propagate_anti_automorphism(map, 0, e) {
            if let Ok(inv) = DeckInvolution::new(map, tau) {
                found.push(inv);
            }
        }
    }
    found
}

/// A map on the projective plane: a connected sphere cover and its deck
/// involution, with the quotient cell structure precomputed.
#[derive(Debug, Clone)]
pub struct ProjectiveMap {
    cover: OrientedMap,
    deck: DeckInvolution,
    vertex_class: Vec<usize>,
    vertex_reps: Vec<Vertex>,
    face_class: Vec<usize>,
    face_reps: Vec<Face>,
}

impl ProjectiveMap {
    pub fn new(cover: OrientedMap, deck: DeckInvolution) -> Self {
        let vertex_partner = |v: Vertex| cover.vertex(deck.image(cover.vertex_start(v)));
        let face_partner = |f: Face| cover.face(alpha(deck.image(cover.face_start(f))));
        let (vertex_class, vertex_reps) = pair_classes(cover.num_vertices(), vertex_partner);
        let (face_class, face_reps) = pair_classes(cover.num_faces(), face_partner);
        ProjectiveMap {
            cover,
            deck,
            vertex_class,
            vertex_reps,
            face_class,
            face_reps,
        }
    }

    pub fn cover(&self) -> &OrientedMap {
        &self.cover
    }

    pub fn deck(&self) -> &DeckInvolution {
        &self.deck
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_reps.len()
    }

    pub fn num_edges(&self) -> usize {
        self.cover.num_edges() / 2
    }

    pub fn num_faces(&self) -> usize {
        self.face_reps.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices() as i64 - self.num_edges() as i64 + self.num_faces() as i64
    }

    /// Quotient vertex of a cover vertex.
    pub fn vertex_class(&self, v: Vertex) -> usize {
        self.vertex_class[v]
    }

    /// Smallest cover vertex over each quotient vertex.
    pub fn vertex_reps(&self) -> &[Vertex] {
        &self.vertex_reps
    }

    pub fn face_class(&self, f: Face) -> usize {
        self.face_class[f]
    }

    pub fn face_reps(&self) -> &[Face] {
        &self.face_reps
    }

    pub fn vertex_partner(&self, v: Vertex) -> Vertex {
        self.cover.vertex(self.deck.image(self.cover.vertex_start(v)))
    }

    pub fn face_partner(&self, f: Face) -> Face {
        self.cover
            .face(alpha(self.deck.image(self.cover.face_start(f))))
    }

    /// Degree of a quotient vertex, given by a representative cover vertex.
    pub fn degree(&self, v: Vertex) -> usize {
        self.cover.degree(v)
    }

    pub fn has_degree_two_vertex(&self) -> bool {
        self.cover.degrees().contains(&2)
    }

    /// Quotient graph as a vertex count and one endpoint pair per quotient edge.
    pub fn quotient_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.num_edges());
        for e in 0..self.cover.num_edges() {
            let d = 2 * e;
            let te = self.deck.image(d) / 2;
            if e < te {
                out.push((
                    self.vertex_class[self.cover.vertex(d)],
                    self.vertex_class[self.cover.head(d)],
                ));
            }
        }
        out
    }

    /// Dual on the projective plane: the dual cover with deck `alpha ∘ tau`.
    pub fn dual(&self) -> ProjectiveMap {
        let cover = self.cover.dual();
        let tau: Vec<Dart> = (0..cover.num_darts())
            .map(|d| alpha(self.deck.image(d)))
            .collect();
        let deck = DeckInvolution::new(&cover, tau).expect("dual of a deck involution");
        ProjectiveMap::new(cover, deck)
    }
}

fn pair_classes(n: usize, partner: impl Fn(usize) -> usize) -> (Vec<usize>, Vec<usize>) {
    let mut class = vec![usize::MAX; n];
    let mut reps = Vec::with_capacity(n / 2);
    for x in 0..n {
        if class[x] == usize::MAX {
            class[x] = reps.len();
            class[partner(x)] = reps.len();
            reps.push(x);
        }
    }
    (class, reps)
}

/// Quotient of `map` by a deck involution; the involution is re-validated.
pub fn quotient(map: &OrientedMap, inv: &DeckInvolution) -> Result<ProjectiveMap, ProjectiveError> {
    let deck = DeckInvolution::new(map, inv.as_slice().to_vec())?;
    Ok(ProjectiveMap::new(map.clone(), deck))
}

pub fn lift(p: &ProjectiveMap) -> (OrientedMap, DeckInvolution) {
    (p.cover.clone(), p.deck.clone())
}

/// Canonical code of the pair (cover, deck involution).
pub fn canonical_code_projective(p: &ProjectiveMap) -> CanonicalCode {
    canonical_labeling_with(&p.cover, p.deck.as_slice()).code
}

/// Cover and deck relabelled in canonical order.
pub fn canonical_form_projective(p: &ProjectiveMap) -> ProjectiveMap {
    let labeling = canonical_labeling_with(&p.cover, p.deck.as_slice());
    let (cover, new_dart) = relabel(&p.cover, &labeling);
    let mut tau = vec![0; cover.num_darts()];
    for d in 0..new_dart.len() {
        tau[new_dart[d]] = new_dart[p.deck.image(d)];
    }
    let deck = DeckInvolution::new(&cover, tau).expect("relabelling preserves the deck");
    ProjectiveMap::new(cover, deck)
}

pub fn are_isomorphic_projective(a: &ProjectiveMap, b: &ProjectiveMap) -> bool {
    a.cover.num_darts() == b.cover.num_darts()
        && canonical_code_projective(a) == canonical_code_projective(b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum UniquenessStatus {
    /// At most one deck involution.
    Pass,
    /// Two or more deck involutions on a map satisfying the hypothesis.
    Violation,
    /// The map has a vertex of degree 2, so uniqueness is not asserted.
    Inconclusive,
}

#[derive(Debug, Clone)]
pub struct UniquenessReport {
    pub status: UniquenessStatus,
    pub involutions: Vec<DeckInvolution>,
}

pub fn verify_unique_involution(map: &OrientedMap) -> UniquenessReport {
    let involutions = find_quotient_involutions(map);
    let status = if map.degrees().contains(&2) {
        UniquenessStatus::Inconclusive
    } else if involutions.len() <= 1 {
        UniquenessStatus::Pass
    } else {
        UniquenessStatus::Violation
    };
    UniquenessReport {
        status,
        involutions,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::build_map;
    use crate::map::fixtures::*;

    /// Counts involutive graph automorphisms of a simple map that reverse every
    /// rotation and fix no vertex or edge, by trying all vertex permutations.
    /// An edge `uv` is fixed exactly when `v` is the image of `u`.
    fn brute_force_involutions(map: &OrientedMap) -> usize {
        let nv = map.num_vertices();
        let rot: Vec<Vec<Vertex>> = (0..nv)
            .map(|v| map.vertex_darts(v).map(|d| map.head(d)).collect())
            .collect();
        let mut perm: Vec<usize> = (0..nv).collect();
        let mut count = 0;
        permute(&mut perm, 0, &mut |p| {
            let ok = (0..nv).all(|v| {
                if p[v] == v || p[p[v]] != v || rot[v].contains(&p[v]) {
                    return false;
                }
                let mut img: Vec<Vertex> = rot[v].iter().map(|&w| p[w]).collect();
                img.reverse();
                let target = &rot[p[v]];
                (0..img.len()).any(|s| (0..img.len()).all(|i| img[(i + s) % img.len()] == target[i]))
            });
            if ok {
                count += 1;
            }
        });
        count
    }

    fn permute(a: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
        if k == a.len() {
            f(a);
            return;
        }
        for i in k..a.len() {
            a.swap(k, i);
            permute(a, k + 1, f);
            a.swap(k, i);
        }
    }

    #[test]
    fn cube_has_exactly_the_antipodal_involution() {
        let c = cube();
        let found = find_quotient_involutions(&c);
        assert_eq!(found.len(), 1);
        assert_eq!(brute_force_involutions(&c), 1);
        let tau = &found[0];
        // Antipodal: every vertex goes to the unique vertex at distance 3.
        for v in 0..8 {
            let w = c.vertex(tau.image(c.vertex_start(v)));
            assert!(!c.neighbors(v).contains(&w));
            assert_ne!(v, w);
        }
    }

    #[test]
    fn cube_quotient_counts() {
        let c = cube();
        let inv = find_quotient_involutions(&c).pop().unwrap();
        let p = quotient(&c, &inv).unwrap();
        assert_eq!((p.num_vertices(), p.num_edges(), p.num_faces()), (4, 6, 3));
        assert_eq!(p.euler_characteristic(), 1);
        let (cover, deck) = lift(&p);
        assert_eq!(deck, inv);
        assert_eq!(canonical_code_projective(&ProjectiveMap::new(cover, deck)), canonical_code_projective(&p));
    }

    #[test]
    fn octahedron_is_antipodal_too() {
        let o = octahedron();
        assert_eq!(find_quotient_involutions(&o).len(), 1);
        assert_eq!(brute_force_involutions(&o), 1);
    }

    #[test]
    fn invalid_involutions_rejected() {
        let c = cube();
        let n = c.num_darts();
        let id: Vec<usize> = (0..n).collect();
        assert_eq!(DeckInvolution::new(&c, id), Err(ProjectiveError::FixedDart(0)));
        let flip: Vec<usize> = (0..n).map(alpha).collect();
        assert_eq!(DeckInvolution::new(&c, flip), Err(ProjectiveError::FixedEdge(0)));
        assert!(matches!(
            DeckInvolution::new(&c, vec![0; 3]),
            Err(ProjectiveError::WrongLength { .. })
        ));
        // An orientation-preserving symmetry is not a deck involution.
        let mirror_tau = propagate_anti_automorphism(&c, 0, 0);
        assert!(mirror_tau.is_some());
        assert!(DeckInvolution::new(&c, mirror_tau.unwrap()).is_err());
    }

    #[test]
    fn two_pseudolines_cover() {
        // Four parallel edges between two vertices: lift of two crossing lines.
        let m = build_map(&[vec![0, 1, 2, 3], vec![3, 2, 1, 0]]).unwrap();
        let found = find_quotient_involutions(&m);
        assert_eq!(found.len(), 1);
        let p = quotient(&m, &found[0]).unwrap();
        assert_eq!((p.num_vertices(), p.num_edges(), p.num_faces()), (1, 2, 2));
    }

    #[test]
    fn uniqueness_report() {
        assert_eq!(verify_unique_involution(&cube()).status, UniquenessStatus::Pass);
        // A 4-cycle has degree-2 vertices.
        let square = crate::map::from_neighbor_lists(&[vec![1, 3], vec![2, 0], vec![3, 1], vec![0, 2]]).unwrap();
        let r = verify_unique_involution(&square);
        assert_eq!(r.status, UniquenessStatus::Inconclusive);
    }

    #[test]
    fn dual_of_projective_map() {
        let c = cube();
        let p = quotient(&c, &find_quotient_involutions(&c)[0]).unwrap();
        let d = p.dual();
        assert_eq!((d.num_vertices(), d.num_edges(), d.num_faces()), (3, 6, 4));
        let dd = d.dual();
        assert_eq!(canonical_code_projective(&dd), canonical_code_projective(&p));
    }
}
