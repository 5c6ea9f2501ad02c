//! Canonical codes for maps up to isomorphism and reflection.
//!
//! For every admissible root dart and both orientations the darts are
//! numbered in breadth-first order (following the rotation, then the edge
//! involution) and the map is written down as the sequence of labels of
//! `rot(x), alpha(x)` for each labelled dart `x`. The lexicographically least
//! sequence is the code. Roots are restricted to darts of lexicographically
//! least local signature, which is invariant under isomorphism and reflection.

use std::fmt;

use crate::map::{alpha, Dart, OrientedMap};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCode(Vec<u32>);

impl CanonicalCode {
    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    /// Big-endian byte form, for hashing into files or comparing across runs.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.0.iter().flat_map(|v| v.to_be_bytes()).collect()
    }
}

impl fmt::Debug for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalCode(")?;
        for (i, v) in self.0.iter().take(12).enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        if self.0.len() > 12 {
            write!(f, ",…;len={}", self.0.len())?;
        }
        write!(f, ")")
    }
}

/// A winning root: the breadth-first dart order and whether the rotation was
/// reversed.
#[derive(Debug, Clone)]
pub struct Labeling {
    pub code: CanonicalCode,
    pub order: Vec<Dart>,
    pub mirrored: bool,
}

fn root_signature(map: &OrientedMap, d: Dart) -> (usize, usize, usize, usize) {
    let f1 = map.face_degree(map.face(d));
    let f2 = map.face_degree(map.face(alpha(d)));
    (
        map.degree(map.vertex(d)),
        map.degree(map.head(d)),
        f1.min(f2),
        f1.max(f2),
    )
}

fn roots(map: &OrientedMap) -> Vec<Dart> {
    let sigs: Vec<_> = (0..map.num_darts()).map(|d| root_signature(map, d)).collect();
    let best = *sigs.iter().min().expect("map has darts");
    (0..map.num_darts()).filter(|&d| sigs[d] == best).collect()
}

/// Encodes from `start`; returns `None` unless the result is strictly less
/// than `best`. The comparison aborts at the first larger entry.
fn encode(
    map: &OrientedMap,
    start: Dart,
    mirrored: bool,
    deck: Option<&[Dart]>,
    best: Option<&[u32]>,
) -> Option<(Vec<u32>, Vec<Dart>)> {
    let n = map.num_darts();
    let mut label = vec![u32::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut code = Vec::with_capacity(2 * n + deck.map_or(0, |_| n));
    let mut less = best.is_none();
    label[start] = 0;
    order.push(start);

    let mut push = |code: &mut Vec<u32>, v: u32| -> bool {
        if !less {
            let b = best.unwrap()[code.len()];
            if v > b {
                return false;
            }
            if v < b {
                less = true;
            }
        }
        code.push(v);
        true
    };

    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        let r = if mirrored { map.sigma_inv(x) } else { map.sigma(x) };
        for y in [r, alpha(x)] {
            if label[y] == u32::MAX {
                label[y] = order.len() as u32;
                order.push(y);
            }
            if !push(&mut code, label[y]) {
                return None;
            }
        }
        i += 1;
    }
    if let Some(tau) = deck {
        for &x in &order {
            if !push(&mut code, label[tau[x]]) {
                return None;
            }
        }
    }
    less.then_some((code, order))
}

fn best_labeling(map: &OrientedMap, deck: Option<&[Dart]>) -> Labeling {
    let mut best: Option<(Vec<u32>, Vec<Dart>, bool)> = None;
    for start in roots(map) {
        for mirrored in [false, true] {
            let current = best.as_ref().map(|b| b.0.as_slice());
            if let Some((code, order)) = encode(map, start, mirrored, deck, current) {
                best = Some((code, order, mirrored));
            }
        }
    }
    let (code, order, mirrored) = best.expect("at least one root");
    Labeling {
        code: CanonicalCode(code),
        order,
        mirrored,
    }
}

pub fn canonical_labeling(map: &OrientedMap) -> Labeling {
    best_labeling(map, None)
}

/// Canonical labelling of a map together with a dart permutation that
/// commutes with the edge involution, e.g. a deck involution.
pub fn canonical_labeling_with(map: &OrientedMap, deck: &[Dart]) -> Labeling {
    best_labeling(map, Some(deck))
}

pub fn canonical_code(map: &OrientedMap) -> CanonicalCode {
    canonical_labeling(map).code
}

pub fn are_isomorphic(a: &OrientedMap, b: &OrientedMap) -> bool {
    a.num_darts() == b.num_darts()
        && a.num_vertices() == b.num_vertices()
        && canonical_code(a) == canonical_code(b)
}

/// Relabelling of `map` in a labeling's dart order: vertices and edges are
/// numbered by first appearance and each rotation starts at the first-seen
/// dart. Returns the new map and the old-to-new dart map.
pub fn relabel(map: &OrientedMap, labeling: &Labeling) -> (OrientedMap, Vec<Dart>) {
    let n = map.num_darts();
    let mut new_dart = vec![usize::MAX; n];
    let mut edges = 0;
    for &d in &labeling.order {
        if new_dart[d] == usize::MAX {
            new_dart[d] = 2 * edges;
            new_dart[alpha(d)] = 2 * edges + 1;
            edges += 1;
        }
    }
    let mut vertex_seen = vec![false; map.num_vertices()];
    let mut rotations = Vec::with_capacity(map.num_vertices());
    for &d in &labeling.order {
        let v = map.vertex(d);
        if vertex_seen[v] {
            continue;
        }
        vertex_seen[v] = true;
        let mut rot = vec![new_dart[d]];
        let step = |x: Dart| if labeling.mirrored { map.sigma_inv(x) } else { map.sigma(x) };
        let mut x = step(d);
        while x != d {
            rot.push(new_dart[x]);
            x = step(x);
        }
        rotations.push(rot);
    }
    let relabelled = OrientedMap::from_rotations(&rotations).expect("relabelling preserves validity");
    (relabelled, new_dart)
}

/// The representative of the isomorphism class of `map` used by the codecs.
pub fn canonical_form(map: &OrientedMap) -> OrientedMap {
    relabel(map, &canonical_labeling(map)).0
}

#[cfg(test)]
pub(crate) mod oracle {
    //! Brute-force isomorphism by extending a single dart assignment.
    use crate::map::{alpha, OrientedMap};

    fn extend(a: &OrientedMap, b: &OrientedMap, d0: usize, e0: usize, mirrored: bool) -> bool {
        let n = a.num_darts();
        let mut img = vec![usize::MAX; n];
        let mut used = vec![false; n];
        img[d0] = e0;
        used[e0] = true;
        let mut stack = vec![d0];
        while let Some(x) = stack.pop() {
            let y = img[x];
            let rb = if mirrored { b.sigma_inv(y) } else { b.sigma(y) };
            for (xx, yy) in [(a.sigma(x), rb), (alpha(x), alpha(y))] {
                if img[xx] == usize::MAX {
                    if used[yy] {
                        return false;
                    }
                    img[xx] = yy;
                    used[yy] = true;
                    stack.push(xx);
                } else if img[xx] != yy {
                    return false;
                }
            }
        }
        img.iter().all(|&y| y != usize::MAX)
    }

    pub fn brute_force_oriented(a: &OrientedMap, b: &OrientedMap) -> bool {
        a.num_darts() == b.num_darts() && (0..b.num_darts()).any(|e| extend(a, b, 0, e, false))
    }

    pub fn brute_force_isomorphic(a: &OrientedMap, b: &OrientedMap) -> bool {
        if a.num_darts() != b.num_darts() {
            return false;
        }
        (0..b.num_darts()).any(|e| extend(a, b, 0, e, false) || extend(a, b, 0, e, true))
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::oracle::brute_force_isomorphic;
    use super::*;
    use crate::map::fixtures::*;
    use crate::map::{build_map, from_neighbor_lists};
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};

    /// Relabels darts by a random edge permutation and random end swaps, and
    /// rotates every rotation list by a random amount.
    pub(crate) fn shuffle_map(map: &OrientedMap, seed: u64) -> OrientedMap {
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let mut edges: Vec<usize> = (0..map.num_edges()).collect();
        edges.shuffle(&mut rng);
        let mut new = vec![0; map.num_darts()];
        for (e, &target) in edges.iter().enumerate() {
            let flip = rng.gen_bool(0.5) as usize;
            new[2 * e] = 2 * target + flip;
            new[2 * e + 1] = 2 * target + (1 - flip);
        }
        let mut rotations: Vec<Vec<usize>> = map
            .rotations()
            .into_iter()
            .map(|r| {
                let mut r: Vec<usize> = r.into_iter().map(|d| new[d]).collect();
                let k = rng.gen_range(0..r.len());
                r.rotate_left(k);
                r
            })
            .collect();
        rotations.shuffle(&mut rng);
        OrientedMap::from_rotations(&rotations).unwrap()
    }

    /// Grows a random planar map by inserting edges between corners of one face
    /// or pendant edges at a corner.
    pub(crate) fn random_planar_map(edges: usize, seed: u64) -> OrientedMap {
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let mut rotations: Vec<Vec<usize>> = vec![vec![0], vec![1]];
        let mut map = OrientedMap::from_rotations(&rotations).unwrap();
        while map.num_edges() < edges {
            let d = 2 * map.num_edges();
            let c1 = rng.gen_range(0..map.num_darts());
            if rng.gen_bool(0.3) {
                // pendant edge inserted just after corner dart c1
                let v = map.vertex(c1);
                let pos = rotations[v].iter().position(|&x| x == c1).unwrap();
                rotations[v].insert(pos + 1, d);
                rotations.push(vec![d + 1]);
            } else {
                let face: Vec<usize> = map.face_from(c1).collect();
                let c2 = *face.choose(&mut rng).unwrap();
                // Corner of dart x sits between sigma_inv(x) and x; insert before x.
                for (x, nd) in [(c1, d), (c2, d + 1)] {
                    let v = map.vertex(x);
                    let pos = rotations[v].iter().position(|&y| y == x).unwrap();
                    rotations[v].insert(pos, nd);
                }
            }
            map = OrientedMap::from_rotations(&rotations).unwrap();
        }
        map
    }

    #[test]
    fn relabelled_cube_has_equal_code() {
        let c = cube();
        for seed in 0..20 {
            assert_eq!(canonical_code(&c), canonical_code(&shuffle_map(&c, seed)));
        }
    }

    #[test]
    fn cube_differs_from_octahedron() {
        assert!(!are_isomorphic(&cube(), &octahedron()));
        assert!(are_isomorphic(&cube(), &octahedron().dual()));
    }

    #[test]
    fn chiral_map_equals_mirror() {
        // A triangle with pendant edges of different lengths in clockwise
        // order is chiral; reflection must still be identified.
        let m = build_map(&[
            vec![0, 2, 3],
            vec![1, 0, 4],
            vec![2, 1],
            vec![3, 5],
            vec![5],
            vec![4, 6],
            vec![6, 7],
            vec![7],
        ])
        .unwrap();
        let mirror = m.mirror();
        assert!(!super::oracle::brute_force_oriented(&m, &mirror));
        assert_eq!(canonical_code(&m), canonical_code(&mirror));
    }

    #[test]
    fn canonical_form_is_fixed_point() {
        let c = cube();
        let f = canonical_form(&c);
        assert_eq!(canonical_code(&f), canonical_code(&c));
        assert_eq!(canonical_form(&f).rotations(), f.rotations());
        assert_eq!(
            canonical_form(&shuffle_map(&c, 7)).rotations(),
            f.rotations()
        );
    }

    #[test]
    fn small_multigraph_codes() {
        let f8 = figure_eight();
        let two_loops_digon = from_neighbor_lists(&[vec![1, 1], vec![0, 0]]).unwrap();
        assert!(!are_isomorphic(&f8, &two_loops_digon));
        assert!(are_isomorphic(&three_path(), &three_path().mirror()));
    }

    /// All sphere maps on `2e` darts with `alpha(d) = d ^ 1`, by enumerating
    /// every rotation permutation.
    fn all_sphere_maps(e: usize) -> Vec<OrientedMap> {
        let n = 2 * e;
        let mut out = Vec::new();
        let mut perm: Vec<usize> = (0..n).collect();
        permute(&mut perm, 0, &mut |p| {
            let mut seen = vec![false; n];
            let mut rotations = Vec::new();
            for s in 0..n {
                if seen[s] {
                    continue;
                }
                let mut rot = vec![];
                let mut d = s;
                while !seen[d] {
                    seen[d] = true;
                    rot.push(d);
                    d = p[d];
                }
                rotations.push(rot);
            }
            if let Ok(m) = OrientedMap::from_rotations(&rotations) {
                out.push(m);
            }
        });
        out
    }

    fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
        if k == p.len() {
            f(p);
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            permute(p, k + 1, f);
            p.swap(k, i);
        }
    }

    #[test]
    fn exhaustive_agreement_with_brute_force_small() {
        for e in 1..=4 {
            let maps = all_sphere_maps(e);
            let mut classes: Vec<(CanonicalCode, OrientedMap)> = Vec::new();
            for m in &maps {
                let code = canonical_code(m);
                match classes.iter().find(|(c, _)| *c == code) {
                    Some((_, rep)) => assert!(brute_force_isomorphic(rep, m)),
                    None => classes.push((code, m.clone())),
                }
            }
            for i in 0..classes.len() {
                for j in i + 1..classes.len() {
                    assert!(!brute_force_isomorphic(&classes[i].1, &classes[j].1));
                }
            }
            assert!(classes.len() > e, "edges = {e}: {} classes", classes.len());
        }
    }

    #[test]
    fn random_agreement_with_brute_force_up_to_eight_edges() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for e in 5..=8 {
            let maps: Vec<OrientedMap> = (0..40).map(|s| random_planar_map(e, s * 31 + e as u64)).collect();
            for _ in 0..400 {
                let a = maps.choose(&mut rng).unwrap();
                let b = if rng.gen_bool(0.5) {
                    shuffle_map(a, rng.gen())
                } else {
                    maps.choose(&mut rng).unwrap().clone()
                };
                assert_eq!(
                    canonical_code(a) == canonical_code(&b),
                    brute_force_isomorphic(a, &b)
                );
            }
        }
    }

    proptest! {
        #[test]
        fn code_invariant_under_relabelling(edges in 1usize..14, seed in any::<u64>(), shuffle in any::<u64>()) {
            let m = random_planar_map(edges, seed);
            let s = shuffle_map(&m, shuffle);
            prop_assert_eq!(canonical_code(&m), canonical_code(&s));
            prop_assert_eq!(canonical_code(&m), canonical_code(&m.mirror()));
        }

        #[test]
        fn dual_is_an_involution(edges in 1usize..14, seed in any::<u64>()) {
            let m = random_planar_map(edges, seed);
            prop_assert!(are_isomorphic(&m.dual().dual(), &m));
            prop_assert_eq!(m.dual().num_vertices(), m.num_faces());
        }
    }
}
