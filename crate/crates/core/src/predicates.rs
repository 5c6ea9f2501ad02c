//! Structural predicates on sphere maps and projective maps.

use std::collections::{HashSet, VecDeque};

use thiserror::Error;

use crate::map::{alpha, OrientedMap};
use crate::projective::ProjectiveMap;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PredicateError {
    #[error("not 4-regular (degrees {min}..{max})")]
    NotFourRegular { min: usize, max: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeProfile {
    pub min: usize,
    pub max: usize,
    /// Sorted degree multiset.
    pub degrees: Vec<usize>,
}

impl DegreeProfile {
    pub fn is_regular(&self, k: usize) -> bool {
        self.min == k && self.max == k
    }
}

pub fn degree_profile(map: &OrientedMap) -> DegreeProfile {
    let mut degrees = map.degrees().to_vec();
    degrees.sort_unstable();
    DegreeProfile {
        min: degrees[0],
        max: *degrees.last().unwrap(),
        degrees,
    }
}

/// No loops and no parallel edges.
pub fn is_simple(map: &OrientedMap) -> bool {
    let mut seen = HashSet::with_capacity(map.num_edges());
    for (u, w) in map.edge_ends() {
        if u == w || !seen.insert((u.min(w), u.max(w))) {
            return false;
        }
    }
    true
}

pub fn is_quadrangulation(map: &OrientedMap) -> bool {
    map.face_degrees().iter().all(|&k| k == 4)
}

/// Two-colouring test on a multigraph given by an edge list.
pub fn is_bipartite_graph(num_vertices: usize, edges: &[(usize, usize)]) -> bool {
    let mut adj = vec![Vec::new(); num_vertices];
    for &(u, w) in edges {
        if u == w {
            return false;
        }
        adj[u].push(w);
        adj[w].push(u);
    }
    let mut colour = vec![u8::MAX; num_vertices];
    for s in 0..num_vertices {
        if colour[s] != u8::MAX {
            continue;
        }
        colour[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if colour[w] == u8::MAX {
                    colour[w] = 1 - colour[u];
                    queue.push_back(w);
                } else if colour[w] == colour[u] {
                    return false;
                }
            }
        }
    }
    true
}

pub fn is_bipartite(map: &OrientedMap) -> bool {
    is_bipartite_graph(map.num_vertices(), &map.edge_ends())
}

pub fn is_quotient_bipartite(p: &ProjectiveMap) -> bool {
    is_bipartite_graph(p.num_vertices(), &p.quotient_edges())
}

/// Minimum number of edges whose removal disconnects the multigraph (loops
/// never count). `None` for a single vertex.
pub fn min_edge_cut_graph(num_vertices: usize, edges: &[(usize, usize)]) -> Option<usize> {
    if num_vertices < 2 {
        return None;
    }
    let n = num_vertices;
    let mut cap = vec![0i64; n * n];
    for &(u, w) in edges {
        if u != w {
            cap[u * n + w] += 1;
            cap[w * n + u] += 1;
        }
    }
    let mut best = usize::MAX;
    for t in 1..n {
        best = best.min(max_flow(n, &cap, 0, t, best));
        if best == 0 {
            break;
        }
    }
    Some(best)
}

/// Edmonds–Karp; stops early once the flow reaches `limit`.
fn max_flow(n: usize, cap: &[i64], s: usize, t: usize, limit: usize) -> usize {
    let mut residual = cap.to_vec();
    let mut flow = 0;
    let mut parent = vec![usize::MAX; n];
    while flow < limit {
        parent.iter_mut().for_each(|p| *p = usize::MAX);
        parent[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for w in 0..n {
                if parent[w] == usize::MAX && residual[u * n + w] > 0 {
                    parent[w] = u;
                    queue.push_back(w);
                }
            }
        }
        if parent[t] == usize::MAX {
            break;
        }
        let mut v = t;
        while v != s {
            let u = parent[v];
            residual[u * n + v] -= 1;
            residual[v * n + u] += 1;
            v = u;
        }
        flow += 1;
    }
    flow
}

pub fn min_edge_cut(map: &OrientedMap) -> Option<usize> {
    min_edge_cut_graph(map.num_vertices(), &map.edge_ends())
}

/// Every face boundary is a simple cycle: no vertex is visited twice.
pub fn is_two_cell_embedded(map: &OrientedMap) -> bool {
    (0..map.num_faces()).all(|f| {
        let mut seen = HashSet::new();
        map.face_darts(f).all(|d| seen.insert(map.vertex(d)))
    })
}

/// Connected with at least three vertices and no cut vertex, or a single
/// edge.
pub fn is_two_connected(map: &OrientedMap) -> bool {
    let n = map.num_vertices();
    if n <= 2 {
        return map.edge_ends().iter().all(|&(u, w)| u != w);
    }
    let mut removed = vec![false; n];
    for v in 0..n {
        removed[v] = true;
        let parts = map.components_without(&removed);
        removed[v] = false;
        if parts > 1 {
            return false;
        }
    }
    true
}

/// Simple sphere quadrangulation of minimum degree at least 3.
pub fn is_class_q(map: &OrientedMap) -> bool {
    degree_profile(map).min >= 3 && is_quadrangulation(map) && is_simple(map)
}

/// No loops and no parallel pair bounding a disk in the quotient, which is
/// the same as the cover being simple.
pub fn is_simply_embedded(p: &ProjectiveMap) -> bool {
    is_simple(p.cover())
}

pub fn is_class_qbar(p: &ProjectiveMap) -> bool {
    is_class_q(p.cover())
}

pub fn is_four_regular(map: &OrientedMap) -> Result<(), PredicateError> {
    let prof = degree_profile(map);
    if prof.is_regular(4) {
        Ok(())
    } else {
        Err(PredicateError::NotFourRegular {
            min: prof.min,
            max: prof.max,
        })
    }
}

/// A net on the sphere or the projective plane.
#[derive(Debug, Clone, Copy)]
pub enum Net<'a> {
    Sphere(&'a OrientedMap),
    Projective(&'a ProjectiveMap),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum ExceptionalNet {
    /// One vertex with two loops on the sphere.
    FigureEight,
    /// Two pseudolines crossing once on the projective plane.
    TwoLines,
}

/// Recognizes the exceptional basic nets, which fail the general criterion.
pub fn exceptional_pattern(net: Net<'_>) -> Option<ExceptionalNet> {
    match net {
        Net::Sphere(m) => {
            (m.num_vertices() == 1 && m.num_edges() == 2 && m.num_faces() == 3)
                .then_some(ExceptionalNet::FigureEight)
        }
        Net::Projective(p) => {
            let c = p.cover();
            (c.num_vertices() == 2
                && c.num_edges() == 4
                && c.face_degrees().iter().all(|&k| k == 2))
            .then_some(ExceptionalNet::TwoLines)
        }
    }
}

/// Basic net test through the dual: a 4-regular net is basic when it is an
/// exceptional pattern or its dual quadrangulation is in the class (Q on the
/// sphere, Q̄ on the projective plane).
pub fn is_basic_net(net: Net<'_>) -> Result<bool, PredicateError> {
    match net {
        Net::Sphere(m) => {
            is_four_regular(m)?;
            Ok(exceptional_pattern(net).is_some() || is_class_q(&m.dual()))
        }
        Net::Projective(p) => {
            is_four_regular(p.cover())?;
            Ok(exceptional_pattern(net).is_some() || is_class_qbar(&p.dual()))
        }
    }
}

/// Basic net test straight from the net: simple with edge connectivity at
/// least 4 on the sphere; on the projective plane, loopless dual, and the
/// cover is a basic sphere net.
pub fn is_basic_net_direct(net: Net<'_>) -> Result<bool, PredicateError> {
    match net {
        Net::Sphere(m) => {
            is_four_regular(m)?;
            if exceptional_pattern(net).is_some() {
                return Ok(true);
            }
            Ok(is_simple(m) && min_edge_cut(m).is_some_and(|k| k >= 4))
        }
        Net::Projective(p) => {
            is_four_regular(p.cover())?;
            if exceptional_pattern(net).is_some() {
                return Ok(true);
            }
            let c = p.cover();
            let dual_loopless =
                (0..c.num_darts()).all(|d| p.face_class(c.face(d)) != p.face_class(c.face(alpha(d))));
            Ok(dual_loopless && is_basic_net_direct(Net::Sphere(c))?)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum HomologyClass {
    Trivial,
    Nontrivial,
}

/// Homology class of a net on the projective plane: trivial exactly when the
/// dual quadrangulation is bipartite.
pub fn homology_class(p: &ProjectiveMap) -> Result<HomologyClass, PredicateError> {
    is_four_regular(p.cover())?;
    Ok(if is_quotient_bipartite(&p.dual()) {
        HomologyClass::Trivial
    } else {
        HomologyClass::Nontrivial
    })
}
