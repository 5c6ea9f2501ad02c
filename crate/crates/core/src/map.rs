//! Dart-based combinatorial maps on the oriented sphere.
//!
//! A map on `2E` darts is described by the vertex rotation `sigma` (next dart
//! counterclockwise around the tail vertex) and the edge involution `alpha`,
//! which is fixed to `d ^ 1`: darts `2k` and `2k + 1` are the two ends of edge
//! `k`. Faces are the orbits of `phi = sigma ∘ alpha`, so a face orbit lists
//! the darts leaving its corners in boundary order.
//!
//! Maps are immutable once built. Every constructor checks connectivity and
//! that the Euler characteristic equals 2.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

/// Index of a directed edge-end.
pub type Dart = usize;
/// Index of a vertex (an orbit of `sigma`).
pub type Vertex = usize;
/// Index of a face (an orbit of `phi`).
pub type Face = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("map has no edges")]
    Empty,
    #[error("malformed rotation: {0}")]
    MalformedRotation(String),
    #[error("map is disconnected ({components} components)")]
    Disconnected { components: usize },
    #[error("not a sphere map: Euler characteristic {chi}")]
    NotSpherical { chi: i64 },
}

#[inline]
pub fn alpha(d: Dart) -> Dart {
    d ^ 1
}

#[derive(Clone, PartialEq, Eq)]
pub struct OrientedMap {
    sigma: Vec<Dart>,
    sigma_inv: Vec<Dart>,
    vertex_of: Vec<Vertex>,
    vertex_start: Vec<Dart>,
    vertex_degree: Vec<usize>,
    face_of: Vec<Face>,
    face_start: Vec<Dart>,
    face_degree: Vec<usize>,
}

impl OrientedMap {
    /// Builds a map from per-vertex cyclic lists of darts.
    ///
    /// Vertex `i` is the `i`-th list and its rotation starts at the first
    /// listed dart; this order is preserved by [`OrientedMap::vertex_darts`].
    pub fn from_rotations(rotations: &[Vec<Dart>]) -> Result<Self, MapError> {
        let n: usize = rotations.iter().map(Vec::len).sum();
        if n == 0 {
            return Err(MapError::Empty);
        }
        if n % 2 == 1 {
            return Err(MapError::MalformedRotation(format!(
                "odd number of darts ({n})"
            )));
        }
        let mut sigma = vec![usize::MAX; n];
        let mut vertex_of = vec![usize::MAX; n];
        let mut vertex_start = Vec::with_capacity(rotations.len());
        for (v, rot) in rotations.iter().enumerate() {
            if rot.is_empty() {
                return Err(MapError::MalformedRotation(format!("vertex {v} is isolated")));
            }
            for (i, &d) in rot.iter().enumerate() {
                if d >= n {
                    return Err(MapError::MalformedRotation(format!(
                        "dart {d} out of range at vertex {v}"
                    )));
                }
                if vertex_of[d] != usize::MAX {
                    return Err(MapError::MalformedRotation(format!(
                        "dart {d} listed twice"
                    )));
                }
                vertex_of[d] = v;
                sigma[d] = rot[(i + 1) % rot.len()];
            }
            vertex_start.push(rot[0]);
        }
        Self::assemble(sigma, vertex_of, vertex_start)
    }

    fn assemble(
        sigma: Vec<Dart>,
        vertex_of: Vec<Vertex>,
        vertex_start: Vec<Dart>,
    ) -> Result<Self, MapError> {
        let n = sigma.len();
        let mut sigma_inv = vec![0; n];
        for (d, &s) in sigma.iter().enumerate() {
            sigma_inv[s] = d;
        }
        let vertex_degree = vertex_start
            .iter()
            .map(|&s| {
                let mut k = 1;
                let mut d = sigma[s];
                while d != s {
                    k += 1;
                    d = sigma[d];
                }
                k
            })
            .collect();

        let mut face_of = vec![usize::MAX; n];
        let mut face_start = Vec::new();
        let mut face_degree = Vec::new();
        for s in 0..n {
            if face_of[s] != usize::MAX {
                continue;
            }
            let f = face_start.len();
            let mut d = s;
            let mut k = 0;
            loop {
                face_of[d] = f;
                k += 1;
                d = sigma[alpha(d)];
                if d == s {
                    break;
                }
            }
            face_start.push(s);
            face_degree.push(k);
        }

        let map = OrientedMap {
            sigma,
            sigma_inv,
            vertex_of,
            vertex_start,
            vertex_degree,
            face_of,
            face_start,
            face_degree,
        };
        let components = map.count_components();
        if components != 1 {
            return Err(MapError::Disconnected { components });
        }
        let chi = map.euler_characteristic();
        if chi != 2 {
            return Err(MapError::NotSpherical { chi });
        }
        Ok(map)
    }

    fn count_components(&self) -> usize {
        let nv = self.num_vertices();
        let mut seen = vec![false; nv];
        let mut components = 0;
        for s in 0..nv {
            if seen[s] {
                continue;
            }
            components += 1;
            seen[s] = true;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for d in self.vertex_darts(v) {
                    let w = self.head(d);
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        components
    }

    pub fn num_darts(&self) -> usize {
        self.sigma.len()
    }

    pub fn num_edges(&self) -> usize {
        self.sigma.len() / 2
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_start.len()
    }

    pub fn num_faces(&self) -> usize {
        self.face_start.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices() as i64 - self.num_edges() as i64 + self.num_faces() as i64
    }

    #[inline]
    pub fn sigma(&self, d: Dart) -> Dart {
        self.sigma[d]
    }

    #[inline]
    pub fn sigma_inv(&self, d: Dart) -> Dart {
        self.sigma_inv[d]
    }

    /// Next dart along the boundary of the face containing `d`.
    #[inline]
    pub fn phi(&self, d: Dart) -> Dart {
        self.sigma[alpha(d)]
    }

    #[inline]
    pub fn phi_inv(&self, d: Dart) -> Dart {
        alpha(self.sigma_inv[d])
    }

    /// Tail vertex of `d`.
    #[inline]
    pub fn vertex(&self, d: Dart) -> Vertex {
        self.vertex_of[d]
    }

    #[inline]
    pub fn head(&self, d: Dart) -> Vertex {
        self.vertex_of[alpha(d)]
    }

    #[inline]
    pub fn face(&self, d: Dart) -> Face {
        self.face_of[d]
    }

    #[inline]
    pub fn edge(&self, d: Dart) -> usize {
        d / 2
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.vertex_degree[v]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.vertex_degree
    }

    pub fn face_degree(&self, f: Face) -> usize {
        self.face_degree[f]
    }

    pub fn face_degrees(&self) -> &[usize] {
        &self.face_degree
    }

    pub fn vertex_start(&self, v: Vertex) -> Dart {
        self.vertex_start[v]
    }

    pub fn face_start(&self, f: Face) -> Dart {
        self.face_start[f]
    }

    /// Darts leaving `v` in counterclockwise order from its stored start.
    pub fn vertex_darts(&self, v: Vertex) -> Orbit<'_> {
        Orbit::new(&self.sigma, self.vertex_start[v])
    }

    /// Darts of the orbit of `sigma` through `d`, starting at `d`.
    pub fn rotation_from(&self, d: Dart) -> Orbit<'_> {
        Orbit::new(&self.sigma, d)
    }

    /// Corner darts of face `f` in boundary order.
    pub fn face_darts(&self, f: Face) -> FaceOrbit<'_> {
        FaceOrbit {
            map: self,
            start: self.face_start[f],
            next: Some(self.face_start[f]),
        }
    }

    pub fn face_from(&self, d: Dart) -> FaceOrbit<'_> {
        FaceOrbit {
            map: self,
            start: d,
            next: Some(d),
        }
    }

    /// Neighbours of `v` in rotation order (repeated for parallel edges).
    pub fn neighbors(&self, v: Vertex) -> Vec<Vertex> {
        self.vertex_darts(v).map(|d| self.head(d)).collect()
    }

    /// Per-vertex dart rotations in stored order.
    pub fn rotations(&self) -> Vec<Vec<Dart>> {
        (0..self.num_vertices())
            .map(|v| self.vertex_darts(v).collect())
            .collect()
    }

    /// Edge endpoints `(tail of 2k, tail of 2k+1)` indexed by edge.
    pub fn edge_ends(&self) -> Vec<(Vertex, Vertex)> {
        (0..self.num_edges())
            .map(|e| (self.vertex(2 * e), self.vertex(2 * e + 1)))
            .collect()
    }

    /// The same map with the opposite orientation.
    pub fn mirror(&self) -> OrientedMap {
        let rotations: Vec<Vec<Dart>> = (0..self.num_vertices())
            .map(|v| {
                let s = self.vertex_start[v];
                let mut rot = vec![s];
                let mut d = self.sigma_inv[s];
                while d != s {
                    rot.push(d);
                    d = self.sigma_inv[d];
                }
                rot
            })
            .collect();
        OrientedMap::from_rotations(&rotations).expect("mirror of a valid map")
    }

    /// Dual map on the same darts: vertices are the faces of `self`, with
    /// rotation `phi`, and the faces of the dual are the vertices of `self`.
    pub fn dual(&self) -> OrientedMap {
        let rotations: Vec<Vec<Dart>> = (0..self.num_faces())
            .map(|f| self.face_darts(f).collect())
            .collect();
        OrientedMap::from_rotations(&rotations).expect("dual of a valid map")
    }

    /// Components of the graph after deleting the vertices in `removed`.
    pub(crate) fn components_without(&self, removed: &[bool]) -> usize {
        let nv = self.num_vertices();
        let mut seen = removed.to_vec();
        let mut components = 0;
        for s in 0..nv {
            if seen[s] {
                continue;
            }
            components += 1;
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for d in self.vertex_darts(v) {
                    let w = self.head(d);
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        components
    }
}

impl fmt::Debug for OrientedMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OrientedMap")
            .field("vertices", &self.num_vertices())
            .field("edges", &self.num_edges())
            .field("faces", &self.num_faces())
            .field("rotations", &self.rotations())
            .finish()
    }
}

/// Iterator over a `sigma` orbit.
pub struct Orbit<'a> {
    perm: &'a [Dart],
    start: Dart,
    next: Option<Dart>,
}

impl<'a> Orbit<'a> {
    fn new(perm: &'a [Dart], start: Dart) -> Self {
        Orbit {
            perm,
            start,
            next: Some(start),
        }
    }
}

impl Iterator for Orbit<'_> {
    type Item = Dart;

    fn next(&mut self) -> Option<Dart> {
        let d = self.next?;
        let n = self.perm[d];
        self.next = (n != self.start).then_some(n);
        Some(d)
    }
}

pub struct FaceOrbit<'a> {
    map: &'a OrientedMap,
    start: Dart,
    next: Option<Dart>,
}

impl Iterator for FaceOrbit<'_> {
    type Item = Dart;

    fn next(&mut self) -> Option<Dart> {
        let d = self.next?;
        let n = self.map.phi(d);
        self.next = (n != self.start).then_some(n);
        Some(d)
    }
}

/// Builds a map from per-vertex cyclic lists of edge labels.
///
/// Each label must occur exactly twice in total (twice at one vertex for a
/// loop). The first occurrence becomes dart `2k`, the second `2k + 1`, where
/// `k` is the label's index in order of first appearance.
pub fn build_map<L>(rotations: &[Vec<L>]) -> Result<OrientedMap, MapError>
where
    L: Eq + std::hash::Hash + Clone + fmt::Debug,
{
    let mut seen: HashMap<L, (usize, usize)> = HashMap::new();
    let mut next_edge = 0;
    let mut darts: Vec<Vec<Dart>> = Vec::with_capacity(rotations.len());
    for rot in rotations {
        let mut list = Vec::with_capacity(rot.len());
        for label in rot {
            let entry = seen.entry(label.clone()).or_insert_with(|| {
                next_edge += 1;
                (next_edge - 1, 0)
            });
            if entry.1 >= 2 {
                return Err(MapError::MalformedRotation(format!(
                    "edge {label:?} has more than two ends"
                )));
            }
            list.push(2 * entry.0 + entry.1);
            entry.1 += 1;
        }
        darts.push(list);
    }
    if let Some((label, _)) = seen.iter().find(|(_, &(_, k))| k != 2) {
        return Err(MapError::MalformedRotation(format!(
            "dangling edge-end {label:?}"
        )));
    }
    OrientedMap::from_rotations(&darts)
}

/// Builds a map from per-vertex cyclic neighbour lists (0-based).
///
/// The `k`-th occurrence of `w` in the list of `u` is paired with the `k`-th
/// occurrence of `u` in the list of `w`, counted from the end of that list,
/// which is the planar pairing for a pair of parallel edges. A loop at `u`
/// pairs consecutive occurrences of `u` in its own list.
pub fn from_neighbor_lists(lists: &[Vec<Vertex>]) -> Result<OrientedMap, MapError> {
    let nv = lists.len();
    for (u, list) in lists.iter().enumerate() {
        if let Some(&w) = list.iter().find(|&&w| w >= nv) {
            return Err(MapError::MalformedRotation(format!(
                "vertex {u} lists unknown neighbour {w}"
            )));
        }
    }
    let mut dart_at: Vec<Vec<Dart>> = lists.iter().map(|l| vec![usize::MAX; l.len()]).collect();
    let mut next = 0;
    for u in 0..nv {
        for w in u..nv {
            let from_u: Vec<usize> = positions(&lists[u], w);
            if u == w {
                if from_u.len() % 2 == 1 {
                    return Err(MapError::MalformedRotation(format!(
                        "vertex {u} lists itself an odd number of times"
                    )));
                }
                for pair in from_u.chunks(2) {
                    dart_at[u][pair[0]] = next;
                    dart_at[u][pair[1]] = next + 1;
                    next += 2;
                }
                continue;
            }
            let from_w: Vec<usize> = positions(&lists[w], u);
            if from_u.len() != from_w.len() {
                return Err(MapError::MalformedRotation(format!(
                    "adjacency between {u} and {w} is not symmetric"
                )));
            }
            for (i, &pu) in from_u.iter().enumerate() {
                let pw = from_w[from_w.len() - 1 - i];
                dart_at[u][pu] = next;
                dart_at[w][pw] = next + 1;
                next += 2;
            }
        }
    }
    OrientedMap::from_rotations(&dart_at)
}

fn positions(list: &[Vertex], w: Vertex) -> Vec<usize> {
    list.iter()
        .enumerate()
        .filter(|(_, &x)| x == w)
        .map(|(i, _)| i)
        .collect()
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// Cube with vertices 0..4 on the bottom square and 4..8 above them.
    pub fn cube() -> OrientedMap {
        // Planar drawing: outer square 0,1,2,3 (ccw), inner square 4,5,6,7 with i+4 inside i.
        let lists = vec![
            vec![1, 4, 3],
            vec![2, 5, 0],
            vec![3, 6, 1],
            vec![0, 7, 2],
            vec![0, 5, 7],
            vec![1, 6, 4],
            vec![2, 7, 5],
            vec![3, 4, 6],
        ];
        from_neighbor_lists(&lists).unwrap()
    }

    pub fn octahedron() -> OrientedMap {
        // Outer triangle 0,1,2; inner triangle 3,4,5 rotated.
        let lists = vec![
            vec![1, 3, 5, 2],
            vec![2, 4, 3, 0],
            vec![0, 5, 4, 1],
            vec![0, 1, 4, 5],
            vec![1, 2, 5, 3],
            vec![2, 0, 3, 4],
        ];
        from_neighbor_lists(&lists).unwrap()
    }

    pub fn single_edge() -> OrientedMap {
        build_map(&[vec![0], vec![0]]).unwrap()
    }

    pub fn three_path() -> OrientedMap {
        build_map(&[vec!['x'], vec!['x', 'y'], vec!['y']]).unwrap()
    }

    pub fn figure_eight() -> OrientedMap {
        build_map(&[vec![0, 0, 1, 1]]).unwrap()
    }
}
