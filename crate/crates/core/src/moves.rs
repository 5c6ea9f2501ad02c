//! Local moves on quadrangulations: face contraction, vertex splitting, face
//! removal and face addition, on the sphere and equivariantly on the double
//! cover of a projective quadrangulation.
//!
//! Sites are darts. A contraction at dart `d0 = a→b` contracts the face of
//! `d0` (corners `a, b, c, d` in boundary order) by merging `a` and `c`. A
//! splitting at darts `(b, d)` of one vertex `v` keeps the darts from `b` to
//! `d` (counterclockwise) at `v` and moves the rest to a new vertex joined to
//! the heads of `b` and `d`. Removal and addition act on the face of a dart.

use std::fmt;

use thiserror::Error;

use crate::map::{alpha, Dart, MapError, OrientedMap, Vertex};
use crate::predicates::{is_class_q, is_class_qbar};
use crate::projective::{propagate_anti_automorphism, DeckInvolution, ProjectiveMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum MoveKind {
    Contraction,
    Splitting,
    Removal,
    Addition,
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MoveKind::Contraction => "contraction",
            MoveKind::Splitting => "splitting",
            MoveKind::Removal => "removal",
            MoveKind::Addition => "addition",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Move {
    Contract { dart: Dart },
    Split { b: Dart, d: Dart },
    Remove { dart: Dart },
    Add { dart: Dart },
}

impl Move {
    pub fn kind(&self) -> MoveKind {
        match self {
            Move::Contract { .. } => MoveKind::Contraction,
            Move::Split { .. } => MoveKind::Splitting,
            Move::Remove { .. } => MoveKind::Removal,
            Move::Add { .. } => MoveKind::Addition,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MoveDescriptor {
    pub mv: Move,
    /// Contraction with a degree-3 diagonal corner, or the splitting inverse
    /// to one.
    pub special: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum RemovalViolation {
    #[error("corners are not pairwise distinct")]
    RepeatedCorner,
    #[error("corner {vertex} has degree {degree}")]
    CornerDegree { vertex: Vertex, degree: usize },
    #[error("spoke of corner {0} ends on the face")]
    SpokeOnFace(Vertex),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("dart {0} out of range")]
    BadDart(Dart),
    #[error("face of dart {0} is not a quadrangle")]
    NotQuadrangle(Dart),
    #[error("diagonal corners coincide")]
    DiagonalLoop,
    #[error("face boundary repeats an edge")]
    DegenerateFace,
    #[error("splitting needs two distinct darts at one vertex")]
    BadSplit,
    #[error("face is not removable: {0}")]
    NotRemovable(RemovalViolation),
    #[error("map is not in the class")]
    NotInClass,
    #[error("move is not compatible with the deck involution")]
    NotEquivariant,
    #[error(transparent)]
    Map(#[from] MapError),
}

#[derive(Debug, Clone)]
pub struct MoveOutcome {
    pub map: OrientedMap,
    /// Undoes the move on `map`, up to isomorphism.
    pub inverse: MoveDescriptor,
    /// New id of each old dart, if it survived.
    pub dart_map: Vec<Option<Dart>>,
}

/// Builds a map from rotation lists over an extended dart space, dropping
/// edges that are absent and renumbering the rest in order.
fn rebuild(lists: Vec<Vec<Dart>>, total: usize, old: usize) -> Result<(OrientedMap, Vec<Option<Dart>>), MoveError> {
    let mut present = vec![false; total];
    for &d in lists.iter().flatten() {
        present[d] = true;
    }
    let mut new_id = vec![usize::MAX; total];
    let mut next = 0;
    for e in 0..total / 2 {
        if present[2 * e] && present[2 * e + 1] {
            new_id[2 * e] = next;
            new_id[2 * e + 1] = next + 1;
            next += 2;
        } else if present[2 * e] || present[2 * e + 1] {
            return Err(MoveError::Map(MapError::MalformedRotation(format!(
                "edge {e} has one dart"
            ))));
        }
    }
    let rotations: Vec<Vec<Dart>> = lists
        .into_iter()
        .map(|l| l.into_iter().map(|d| new_id[d]).collect())
        .collect();
    let map = OrientedMap::from_rotations(&rotations)?;
    let dart_map = (0..old)
        .map(|d| (new_id[d] != usize::MAX).then_some(new_id[d]))
        .collect();
    Ok((map, dart_map))
}

fn check_dart(map: &OrientedMap, d: Dart) -> Result<(), MoveError> {
    if d < map.num_darts() {
        Ok(())
    } else {
        Err(MoveError::BadDart(d))
    }
}

fn quad_darts(map: &OrientedMap, d0: Dart) -> Result<[Dart; 4], MoveError> {
    check_dart(map, d0)?;
    if map.face_degree(map.face(d0)) != 4 {
        return Err(MoveError::NotQuadrangle(d0));
    }
    let d1 = map.phi(d0);
    let d2 = map.phi(d1);
    Ok([d0, d1, d2, map.phi(d2)])
}

fn insert_after(lists: &mut [Vec<Dart>], anchor: Dart, x: Dart) {
    for l in lists.iter_mut() {
        if let Some(i) = l.iter().position(|&y| y == anchor) {
            l.insert(i + 1, x);
            return;
        }
    }
}

fn insert_before(lists: &mut [Vec<Dart>], anchor: Dart, x: Dart) {
    for l in lists.iter_mut() {
        if let Some(i) = l.iter().position(|&y| y == anchor) {
            l.insert(i, x);
            return;
        }
    }
}

/// Contracts the face of `d0` by merging its tail with the opposite corner.
pub fn contract_face(map: &OrientedMap, d0: Dart) -> Result<MoveOutcome, MoveError> {
    let [_, d1, d2, d3] = quad_darts(map, d0)?;
    let a = map.vertex(d0);
    let c = map.vertex(d2);
    if a == c {
        return Err(MoveError::DiagonalLoop);
    }
    let mut edges = [d0, d1, d2, d3].map(|d| map.edge(d));
    edges.sort_unstable();
    if edges.windows(2).any(|w| w[0] == w[1]) {
        return Err(MoveError::DegenerateFace);
    }
    let removed = [d1, alpha(d1), d2, alpha(d2)];
    let mut merged: Vec<Dart> = map.rotation_from(d0).collect();
    let c_rot: Vec<Dart> = map.rotation_from(d2).collect();
    merged.extend_from_slice(&c_rot[1..c_rot.len() - 1]);
    let mut lists = Vec::with_capacity(map.num_vertices() - 1);
    for v in 0..map.num_vertices() {
        let l: Vec<Dart> = if v == a {
            merged.clone()
        } else if v == c {
            continue;
        } else {
            map.vertex_darts(v).collect()
        };
        lists.push(l.into_iter().filter(|d| !removed.contains(d)).collect());
    }
    let special = map.degree(a) == 3 || map.degree(c) == 3;
    let (new, dart_map) = rebuild(lists, map.num_darts(), map.num_darts())?;
    let inverse = MoveDescriptor {
        mv: Move::Split {
            b: dart_map[d0].unwrap(),
            d: dart_map[alpha(d3)].unwrap(),
        },
        special,
    };
    Ok(MoveOutcome {
        map: new,
        inverse,
        dart_map,
    })
}

/// Splits the vertex of `b` and `d` into two vertices joined to the heads of
/// `b` and `d` by a new quadrangle.
pub fn split_vertex(map: &OrientedMap, b: Dart, d: Dart) -> Result<MoveOutcome, MoveError> {
    check_dart(map, b)?;
    check_dart(map, d)?;
    let v = map.vertex(b);
    if b == d || map.vertex(d) != v {
        return Err(MoveError::BadSplit);
    }
    let rot: Vec<Dart> = map.rotation_from(b).collect();
    let k = rot.iter().position(|&x| x == d).unwrap();
    let n = map.num_darts();
    let (c_to_b, b_to_c, c_to_d, d_to_c) = (n, n + 1, n + 2, n + 3);
    let mut lists: Vec<Vec<Dart>> = (0..map.num_vertices())
        .map(|u| {
            if u == v {
                rot[..=k].to_vec()
            } else {
                map.vertex_darts(u).collect()
            }
        })
        .collect();
    let mut c_list = vec![c_to_d];
    c_list.extend_from_slice(&rot[k + 1..]);
    c_list.push(c_to_b);
    lists.push(c_list);
    insert_after(&mut lists, alpha(b), b_to_c);
    insert_before(&mut lists, alpha(d), d_to_c);
    let special = k == 2 || rot.len() - k - 1 == 1;
    let (new, dart_map) = rebuild(lists, n + 4, n)?;
    let inverse = MoveDescriptor {
        mv: Move::Contract {
            dart: dart_map[b].unwrap(),
        },
        special,
    };
    Ok(MoveOutcome {
        map: new,
        inverse,
        dart_map,
    })
}

/// Checks removability of the face of `d0` and returns its corner spokes.
fn removal_spokes(map: &OrientedMap, d0: Dart) -> Result<[Dart; 4], MoveError> {
    let ds = quad_darts(map, d0)?;
    let corners = ds.map(|d| map.vertex(d));
    for i in 0..4 {
        for j in i + 1..4 {
            if corners[i] == corners[j] {
                return Err(MoveError::NotRemovable(RemovalViolation::RepeatedCorner));
            }
        }
    }
    for &x in &corners {
        if map.degree(x) != 3 {
            return Err(MoveError::NotRemovable(RemovalViolation::CornerDegree {
                vertex: x,
                degree: map.degree(x),
            }));
        }
    }
    let spokes = ds.map(|d| map.sigma(d));
    for (i, &s) in spokes.iter().enumerate() {
        if corners.contains(&map.head(s)) {
            return Err(MoveError::NotRemovable(RemovalViolation::SpokeOnFace(corners[i])));
        }
    }
    Ok(spokes)
}

/// Removes the face of `d0` together with its four degree-3 corners.
pub fn remove_face(map: &OrientedMap, d0: Dart) -> Result<MoveOutcome, MoveError> {
    let spokes = removal_spokes(map, d0)?;
    let corners: Vec<Vertex> = spokes.iter().map(|&s| map.vertex(s)).collect();
    let mut removed = vec![false; map.num_darts()];
    for &x in &corners {
        for d in map.vertex_darts(x) {
            removed[d] = true;
            removed[alpha(d)] = true;
        }
    }
    let lists: Vec<Vec<Dart>> = (0..map.num_vertices())
        .filter(|v| !corners.contains(v))
        .map(|v| map.vertex_darts(v).filter(|&d| !removed[d]).collect())
        .collect();
    // The vacated face continues counterclockwise after the first spoke.
    let mut anchor = map.sigma(alpha(spokes[0]));
    while removed[anchor] {
        anchor = map.sigma(anchor);
    }
    let (new, dart_map) = rebuild(lists, map.num_darts(), map.num_darts())?;
    let inverse = MoveDescriptor {
        mv: Move::Add {
            dart: dart_map[anchor].ok_or(MoveError::DegenerateFace)?,
        },
        special: false,
    };
    Ok(MoveOutcome {
        map: new,
        inverse,
        dart_map,
    })
}

/// Inserts a quadrangle with four degree-3 corners into the face of `e0`.
pub fn add_face(map: &OrientedMap, e0: Dart) -> Result<MoveOutcome, MoveError> {
    let es = quad_darts(map, e0)?;
    let n = map.num_darts();
    let nv = map.num_vertices();
    let mut lists: Vec<Vec<Dart>> = (0..nv).map(|u| map.vertex_darts(u).collect()).collect();
    let spoke_out = |i: usize| n + 2 * i;
    let spoke_in = |i: usize| n + 2 * i + 1;
    let ring_fwd = |i: usize| n + 8 + 2 * (i % 4);
    let ring_back = |i: usize| n + 8 + 2 * (i % 4) + 1;
    for i in 0..4 {
        lists.push(vec![ring_fwd(i), spoke_in(i), ring_back(i + 3)]);
    }
    for (i, &e) in es.iter().enumerate() {
        insert_before(&mut lists, e, spoke_out(i));
    }
    let (new, dart_map) = rebuild(lists, n + 16, n)?;
    let inverse = MoveDescriptor {
        mv: Move::Remove { dart: ring_fwd(0) },
        special: false,
    };
    Ok(MoveOutcome {
        map: new,
        inverse,
        dart_map,
    })
}

pub fn apply(map: &OrientedMap, m: &MoveDescriptor) -> Result<MoveOutcome, MoveError> {
    match m.mv {
        Move::Contract { dart } => contract_face(map, dart),
        Move::Split { b, d } => split_vertex(map, b, d),
        Move::Remove { dart } => remove_face(map, dart),
        Move::Add { dart } => add_face(map, dart),
    }
}

#[derive(Debug, Clone)]
pub struct Expansion<T> {
    pub descriptor: MoveDescriptor,
    pub result: T,
}

/// Contraction sites: both diagonals of every face.
fn contraction_sites(map: &OrientedMap, faces: impl Iterator<Item = usize>) -> Vec<Dart> {
    let mut out = Vec::new();
    for f in faces {
        let d0 = map.face_start(f);
        out.push(d0);
        out.push(map.phi(d0));
    }
    out
}

/// Special splitting sites at `v`: pairs `(x_i, x_{i+2})` of its rotation,
/// `n` of them at degree `n >= 5` and two at degree 4.
fn special_split_sites(map: &OrientedMap, v: Vertex) -> Vec<(Dart, Dart)> {
    let rot: Vec<Dart> = map.vertex_darts(v).collect();
    let n = rot.len();
    let count = match n {
        0..=3 => 0,
        4 => 2,
        _ => n,
    };
    (0..count).map(|i| (rot[i], rot[(i + 2) % n])).collect()
}

/// Every contraction and removal of `map` whose result stays in Q.
pub fn legal_reductions_q(map: &OrientedMap) -> Result<Vec<Expansion<OrientedMap>>, MoveError> {
    if !is_class_q(map) {
        return Err(MoveError::NotInClass);
    }
    let mut out = Vec::new();
    for d0 in contraction_sites(map, 0..map.num_faces()) {
        if let Ok(o) = contract_face(map, d0) {
            if is_class_q(&o.map) {
                out.push(Expansion {
                    descriptor: MoveDescriptor {
                        mv: Move::Contract { dart: d0 },
                        special: o.inverse.special,
                    },
                    result: o.map,
                });
            }
        }
    }
    for f in 0..map.num_faces() {
        let d0 = map.face_start(f);
        if let Ok(o) = remove_face(map, d0) {
            if is_class_q(&o.map) {
                out.push(Expansion {
                    descriptor: MoveDescriptor {
                        mv: Move::Remove { dart: d0 },
                        special: false,
                    },
                    result: o.map,
                });
            }
        }
    }
    Ok(out)
}

/// Special splittings and face additions of `map` whose result stays in Q.
pub fn legal_expansions_q(map: &OrientedMap) -> Result<Vec<Expansion<OrientedMap>>, MoveError> {
    if !is_class_q(map) {
        return Err(MoveError::NotInClass);
    }
    let mut out = Vec::new();
    for v in 0..map.num_vertices() {
        for (b, d) in special_split_sites(map, v) {
            if let Ok(o) = split_vertex(map, b, d) {
                if is_class_q(&o.map) {
                    out.push(Expansion {
                        descriptor: MoveDescriptor {
                            mv: Move::Split { b, d },
                            special: true,
                        },
                        result: o.map,
                    });
                }
            }
        }
    }
    for f in 0..map.num_faces() {
        let e0 = map.face_start(f);
        if let Ok(o) = add_face(map, e0) {
            if is_class_q(&o.map) {
                out.push(Expansion {
                    descriptor: MoveDescriptor {
                        mv: Move::Add { dart: e0 },
                        special: false,
                    },
                    result: o.map,
                });
            }
        }
    }
    Ok(out)
}

/// Q-minimal: no special Q-contraction and no Q-removal.
pub fn is_q_minimal(map: &OrientedMap) -> Result<bool, MoveError> {
    Ok(legal_reductions_q(map)?
        .iter()
        .all(|r| r.descriptor.mv.kind() == MoveKind::Contraction && !r.descriptor.special))
}

/// Composes two dart maps, `first` then `second`.
fn compose(first: &[Option<Dart>], second: &[Option<Dart>]) -> Vec<Option<Dart>> {
    first.iter().map(|x| x.and_then(|d| second[d])).collect()
}

/// Re-derives the deck involution after a pair of moves from a dart pair
/// that survived both.
fn transport_deck(
    p: &ProjectiveMap,
    new: OrientedMap,
    dart_map: &[Option<Dart>],
) -> Result<ProjectiveMap, MoveError> {
    let tau = p.deck();
    let seed = (0..dart_map.len())
        .find_map(|x| Some((dart_map[x]?, dart_map[tau.image(x)]?)))
        .ok_or(MoveError::NotEquivariant)?;
    let t = propagate_anti_automorphism(&new, seed.0, seed.1).ok_or(MoveError::NotEquivariant)?;
    let deck = DeckInvolution::new(&new, t).map_err(|_| MoveError::NotEquivariant)?;
    // The propagated involution must agree with the old one on survivors.
    for x in 0..dart_map.len() {
        if let (Some(y), Some(ty)) = (dart_map[x], dart_map[tau.image(x)]) {
            if deck.image(y) != ty {
                return Err(MoveError::NotEquivariant);
            }
        }
    }
    Ok(ProjectiveMap::new(new, deck))
}

#[derive(Debug, Clone)]
pub struct ProjectiveOutcome {
    pub map: ProjectiveMap,
    /// Inverse on the new cover; apply with the projective move functions.
    pub inverse: MoveDescriptor,
    pub dart_map: Vec<Option<Dart>>,
}

fn second_site(first: &MoveOutcome, d: Dart) -> Result<Dart, MoveError> {
    first.dart_map[d].ok_or(MoveError::NotEquivariant)
}

/// Contraction of the quotient face over the face of `d0`: contracts it and
/// its deck image.
pub fn contract_face_projective(p: &ProjectiveMap, d0: Dart) -> Result<ProjectiveOutcome, MoveError> {
    let cover = p.cover();
    let [_, d1, d2, d3] = quad_darts(cover, d0)?;
    let tau = p.deck();
    let first = contract_face(cover, d0)?;
    // Partner face boundary, starting at its corner over `a`.
    let partner: [Dart; 4] = [d3, d2, d1, d0].map(|d| alpha(tau.image(d)));
    let moved = partner
        .iter()
        .map(|&d| second_site(&first, d))
        .collect::<Result<Vec<_>, _>>()?;
    let m1 = &first.map;
    if (0..4).any(|i| m1.phi(moved[i]) != moved[(i + 1) % 4]) {
        return Err(MoveError::NotEquivariant);
    }
    let second = contract_face(m1, moved[0])?;
    let dart_map = compose(&first.dart_map, &second.dart_map);
    let map = transport_deck(p, second.map, &dart_map)?;
    Ok(ProjectiveOutcome {
        map,
        inverse: MoveDescriptor {
            mv: Move::Split {
                b: dart_map[d0].unwrap(),
                d: dart_map[alpha(d3)].unwrap(),
            },
            special: first.inverse.special,
        },
        dart_map,
    })
}

pub fn split_vertex_projective(p: &ProjectiveMap, b: Dart, d: Dart) -> Result<ProjectiveOutcome, MoveError> {
    let tau = p.deck();
    let first = split_vertex(p.cover(), b, d)?;
    let b2 = second_site(&first, tau.image(d))?;
    let d2 = second_site(&first, tau.image(b))?;
    let second = split_vertex(&first.map, b2, d2)?;
    let dart_map = compose(&first.dart_map, &second.dart_map);
    let map = transport_deck(p, second.map, &dart_map)?;
    Ok(ProjectiveOutcome {
        map,
        inverse: MoveDescriptor {
            mv: Move::Contract {
                dart: dart_map[b].unwrap(),
            },
            special: first.inverse.special,
        },
        dart_map,
    })
}

pub fn remove_face_projective(p: &ProjectiveMap, d0: Dart) -> Result<ProjectiveOutcome, MoveError> {
    let tau = p.deck();
    let first = remove_face(p.cover(), d0)?;
    let e = second_site(&first, alpha(tau.image(d0)))?;
    let second = remove_face(&first.map, e)?;
    let dart_map = compose(&first.dart_map, &second.dart_map);
    let map = transport_deck(p, second.map, &dart_map)?;
    // One vacated face of the cover: the face that contained the first anchor.
    let Move::Add { dart: anchor } = first.inverse.mv else {
        unreachable!()
    };
    let anchor = second.dart_map[anchor].ok_or(MoveError::NotEquivariant)?;
    Ok(ProjectiveOutcome {
        map,
        inverse: MoveDescriptor {
            mv: Move::Add { dart: anchor },
            special: false,
        },
        dart_map,
    })
}

pub fn add_face_projective(p: &ProjectiveMap, e0: Dart) -> Result<ProjectiveOutcome, MoveError> {
    let tau = p.deck();
    let first = add_face(p.cover(), e0)?;
    let e = second_site(&first, alpha(tau.image(e0)))?;
    let second = add_face(&first.map, e)?;
    let dart_map = compose(&first.dart_map, &second.dart_map);
    let map = transport_deck(p, second.map, &dart_map)?;
    let Move::Remove { dart } = first.inverse.mv else {
        unreachable!()
    };
    Ok(ProjectiveOutcome {
        map,
        inverse: MoveDescriptor {
            mv: Move::Remove {
                dart: second.dart_map[dart].unwrap(),
            },
            special: false,
        },
        dart_map,
    })
}

pub fn apply_projective(p: &ProjectiveMap, m: &MoveDescriptor) -> Result<ProjectiveOutcome, MoveError> {
    match m.mv {
        Move::Contract { dart } => contract_face_projective(p, dart),
        Move::Split { b, d } => split_vertex_projective(p, b, d),
        Move::Remove { dart } => remove_face_projective(p, dart),
        Move::Add { dart } => add_face_projective(p, dart),
    }
}

/// Legal Q̄ reductions, one site per quotient face and diagonal.
pub fn legal_reductions_qbar(p: &ProjectiveMap) -> Result<Vec<Expansion<ProjectiveMap>>, MoveError> {
    if !is_class_qbar(p) {
        return Err(MoveError::NotInClass);
    }
    let cover = p.cover();
    let mut out = Vec::new();
    for d0 in contraction_sites(cover, p.face_reps().iter().copied()) {
        if let Ok(o) = contract_face_projective(p, d0) {
            if is_class_qbar(&o.map) {
                out.push(Expansion {
                    descriptor: MoveDescriptor {
                        mv: Move::Contract { dart: d0 },
                        special: o.inverse.special,
                    },
                    result: o.map,
                });
            }
        }
    }
    for &f in p.face_reps() {
        let d0 = cover.face_start(f);
        if let Ok(o) = remove_face_projective(p, d0) {
            if is_class_qbar(&o.map) {
                out.push(Expansion {
                    descriptor: MoveDescriptor {
                        mv: Move::Remove { dart: d0 },
                        special: false,
                    },
                    result: o.map,
                });
            }
        }
    }
    Ok(out)
}

/// Legal special Q̄ splittings and Q̄ face additions, one site per quotient
/// vertex pair or face.
pub fn legal_expansions_qbar(p: &ProjectiveMap) -> Result<Vec<Expansion<ProjectiveMap>>, MoveError> {
    if !is_class_qbar(p) {
        return Err(MoveError::NotInClass);
    }
    let cover = p.cover();
    let mut out = Vec::new();
    for &v in p.vertex_reps() {
        for (b, d) in special_split_sites(cover, v) {
            if let Ok(o) = split_vertex_projective(p, b, d) {
                if is_class_qbar(&o.map) {
                    out.push(Expansion {
                        descriptor: MoveDescriptor {
                            mv: Move::Split { b, d },
                            special: true,
                        },
                        result: o.map,
                    });
                }
            }
        }
    }
    for &f in p.face_reps() {
        let e0 = cover.face_start(f);
        if let Ok(o) = add_face_projective(p, e0) {
            if is_class_qbar(&o.map) {
                out.push(Expansion {
                    descriptor: MoveDescriptor {
                        mv: Move::Add { dart: e0 },
                        special: false,
                    },
                    result: o.map,
                });
            }
        }
    }
    Ok(out)
}

pub fn is_qbar_minimal(p: &ProjectiveMap) -> Result<bool, MoveError> {
    Ok(legal_reductions_qbar(p)?
        .iter()
        .all(|r| r.descriptor.mv.kind() == MoveKind::Contraction && !r.descriptor.special))
}

/// The two obstructions to contracting a quotient face, for a cover face
/// `abcd` (with `a` the tail of `d0`) contracted at `{a, c}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContractionObstruction {
    /// The cover has an edge from `a` to the image of `c`.
    pub edge_a_c_image: bool,
    /// `b` is the image of `d` and has degree 4.
    pub b_is_d_image_of_degree_4: bool,
}

impl ContractionObstruction {
    pub fn blocks(&self) -> bool {
        self.edge_a_c_image || self.b_is_d_image_of_degree_4
    }
}

pub fn contraction_obstruction(p: &ProjectiveMap, d0: Dart) -> Result<ContractionObstruction, MoveError> {
    let cover = p.cover();
    let [_, d1, d2, d3] = quad_darts(cover, d0)?;
    let (a, b, c, d) = (cover.vertex(d0), cover.vertex(d1), cover.vertex(d2), cover.vertex(d3));
    let c_img = p.vertex_partner(c);
    Ok(ContractionObstruction {
        edge_a_c_image: cover.neighbors(a).contains(&c_img),
        b_is_d_image_of_degree_4: b == p.vertex_partner(d) && cover.degree(b) == 4,
    })
}

/// Removability of the quotient face over the face of `d0`: the cover face
/// is removable and the image corners avoid its corners and spoke ends.
pub fn quotient_face_removable(p: &ProjectiveMap, d0: Dart) -> bool {
    let cover = p.cover();
    let Ok(spokes) = removal_spokes(cover, d0) else {
        return false;
    };
    let mut near: Vec<Vertex> = spokes.iter().map(|&s| cover.vertex(s)).collect();
    near.extend(spokes.iter().map(|&s| cover.head(s)));
    spokes
        .iter()
        .all(|&s| !near.contains(&p.vertex_partner(cover.vertex(s))))
}

/// For a removable cover face: none of its four side neighbours (the face
/// itself included) is the deck image of another. Implies removability of the
/// quotient face.
pub fn neighbour_faces_disjoint_from_images(p: &ProjectiveMap, d0: Dart) -> bool {
    let cover = p.cover();
    let Ok(ds) = quad_darts(cover, d0) else {
        return false;
    };
    let mut faces = vec![cover.face(d0)];
    faces.extend(ds.iter().map(|&d| cover.face(alpha(d))));
    faces
        .iter()
        .all(|&f| !faces.contains(&p.face_partner(f)))
}

/// Face splitting on a net: the sides `e1` and `e2` of one face are pinched
/// into a new crossing, joined to the four old endpoints.
pub fn split_face_net(net: &OrientedMap, e1: Dart, e2: Dart) -> Result<(OrientedMap, Vec<Option<Dart>>), MoveError> {
    check_dart(net, e1)?;
    check_dart(net, e2)?;
    if e1 == e2 || net.face(e1) != net.face(e2) || net.edge(e1) == net.edge(e2) {
        return Err(MoveError::BadSplit);
    }
    let n = net.num_darts();
    // New edges from the crossing X to x1, y1, x2, y2; dart n + 2i leaves X.
    let replace = [(e1, n + 1), (alpha(e1), n + 3), (e2, n + 5), (alpha(e2), n + 7)];
    let mut lists: Vec<Vec<Dart>> = (0..net.num_vertices())
        .map(|v| {
            net.vertex_darts(v)
                .map(|d| replace.iter().find(|r| r.0 == d).map_or(d, |r| r.1))
                .collect()
        })
        .collect();
    lists.push(vec![n + 4, n + 2, n, n + 6]);
    rebuild(lists, n + 8, n)
}

/// Vertex surrounding on a net: a small circle around the vertex of `x`
/// crosses each of its edges once.
pub fn surround_vertex_net(net: &OrientedMap, x: Dart) -> Result<(OrientedMap, Vec<Option<Dart>>), MoveError> {
    check_dart(net, x)?;
    let v = net.vertex(x);
    let out: Vec<Dart> = net.rotation_from(x).collect();
    let k = out.len();
    let n = net.num_darts();
    // Per spoke i: the old edge now runs v→p_i, plus p_i→w_i (n + 2i) and the
    // circle arc p_i→p_{i+1} (n + 2k + 2i).
    let to_w = |i: usize| n + 2 * i;
    let arc_fwd = |i: usize| n + 2 * k + 2 * (i % k);
    let arc_back = |i: usize| n + 2 * k + 2 * (i % k) + 1;
    let mut lists: Vec<Vec<Dart>> = (0..net.num_vertices())
        .map(|u| {
            net.vertex_darts(u)
                .map(|d| match out.iter().position(|&o| alpha(o) == d && u != v) {
                    Some(i) => to_w(i) + 1,
                    None => d,
                })
                .collect()
        })
        .collect();
    for (i, &o) in out.iter().enumerate() {
        lists.push(vec![to_w(i), arc_fwd(i), alpha(o), arc_back(i + k - 1)]);
    }
    rebuild(lists, n + 4 * k, n)
}

/// Face splitting of a projective net at the face of `e1` and its image.
pub fn split_face_net_projective(p: &ProjectiveMap, e1: Dart, e2: Dart) -> Result<ProjectiveMap, MoveError> {
    let tau = p.deck();
    let (m1, map1) = split_face_net(p.cover(), e1, e2)?;
    // Sides of the partner face are `alpha(tau(e))`.
    let a = map1[alpha(tau.image(e2))].ok_or(MoveError::NotEquivariant)?;
    let b = map1[alpha(tau.image(e1))].ok_or(MoveError::NotEquivariant)?;
    let (m2, map2) = split_face_net(&m1, a, b)?;
    transport_deck(p, m2, &compose(&map1, &map2))
}

pub fn surround_vertex_net_projective(p: &ProjectiveMap, x: Dart) -> Result<ProjectiveMap, MoveError> {
    let (m1, map1) = surround_vertex_net(p.cover(), x)?;
    let y = map1[p.deck().image(x)].ok_or(MoveError::NotEquivariant)?;
    let (m2, map2) = surround_vertex_net(&m1, y)?;
    transport_deck(p, m2, &compose(&map1, &map2))
}

/// A member of Q grown from the cube by random legal expansions.
#[cfg(test)]
pub(crate) fn random_q_member(max_vertices: usize, seed: u64) -> OrientedMap {
    use rand::{rngs::StdRng, Rng, SeedableRng};
    let mut rng = StdRng::seed_from_u64(seed);
    let mut m = crate::map::fixtures::cube();
    let target = rng.gen_range(8..=max_vertices.max(8));
    while m.num_vertices() < target {
        let options: Vec<_> = legal_expansions_q(&m)
            .unwrap()
            .into_iter()
            .filter(|e| e.result.num_vertices() <= target)
            .collect();
        if options.is_empty() {
            break;
        }
        let i = rng.gen_range(0..options.len());
        m = options.into_iter().nth(i).unwrap().result;
    }
    m
}
