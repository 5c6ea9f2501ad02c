//! Seed families, generation by closure under expansions, the sphere-to-
//! projective filter, minimal members, count tables and the generation DAG.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::canon::{canonical_code, CanonicalCode};
use crate::codec::parse_quotient_ascii;
use crate::map::{from_neighbor_lists, OrientedMap};
use crate::moves::{is_q_minimal, is_qbar_minimal, legal_expansions_q, legal_expansions_qbar, MoveKind};
use crate::predicates::{is_quadrangulation, is_quotient_bipartite};
use crate::projective::{canonical_code_projective, find_quotient_involutions, quotient, ProjectiveMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("pseudo-double wheel needs n >= 3, got {0}")]
    WheelSize(usize),
    #[error("Moebius wheel needs odd n >= 3, got {0}")]
    MoebiusSize(usize),
}

/// Hubs `0` (north) and `1` (south), rim `2..2n+2`. The north hub sees the
/// even rim vertices, the south hub the odd ones.
pub fn pseudo_double_wheel(n: usize) -> Result<OrientedMap, EnumError> {
    if n < 3 {
        return Err(EnumError::WheelSize(n));
    }
    let m = 2 * n;
    let rim = |k: usize| 2 + k % m;
    let mut lists = vec![
        (0..n).map(|i| rim(2 * i)).collect::<Vec<_>>(),
        (0..n).rev().map(|i| rim(2 * i + 1)).collect(),
    ];
    for k in 0..m {
        let (next, prev) = (rim(k + 1), rim(k + m - 1));
        lists.push(if k % 2 == 0 {
            vec![next, 0, prev]
        } else {
            vec![next, prev, 1]
        });
    }
    Ok(from_neighbor_lists(&lists).expect("wheel rotation is spherical"))
}

/// Quotient of the pseudo-double wheel by its deck involution, which exists
/// exactly for odd `n`.
pub fn moebius_wheel(n: usize) -> Result<ProjectiveMap, EnumError> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(EnumError::MoebiusSize(n));
    }
    let w = pseudo_double_wheel(n)?;
    let inv = find_quotient_involutions(&w)
        .pop()
        .expect("odd wheel has a deck involution");
    Ok(quotient(&w, &inv).expect("found involution is valid"))
}

/// Cover: a quadrangle `abcd` whose spokes end at `e, f, E, F`.
pub const G52_LINE: &str = "6 bde,afc,bEd,cFa,aFCf,beDE";

/// The projective minimal member that is not a Moebius wheel.
pub fn exceptional_seed_g52() -> ProjectiveMap {
    parse_quotient_ascii(G52_LINE).expect("frozen seed parses")
}

/// Something the closure can grow.
pub trait Member: Clone + Send + Sync {
    fn size(&self) -> usize;
    fn code(&self) -> CanonicalCode;
    /// Children with the kind of move producing each.
    fn children(&self) -> Vec<(MoveKind, Self)>;
}

impl Member for OrientedMap {
    fn size(&self) -> usize {
        self.num_vertices()
    }

    fn code(&self) -> CanonicalCode {
        canonical_code(self)
    }

    fn children(&self) -> Vec<(MoveKind, Self)> {
        legal_expansions_q(self)
            .unwrap_or_default()
            .into_iter()
            .map(|e| (e.descriptor.mv.kind(), e.result))
            .collect()
    }
}

impl Member for ProjectiveMap {
    fn size(&self) -> usize {
        self.num_vertices()
    }

    fn code(&self) -> CanonicalCode {
        canonical_code_projective(self)
    }

    fn children(&self) -> Vec<(MoveKind, Self)> {
        legal_expansions_qbar(self)
            .unwrap_or_default()
            .into_iter()
            .map(|e| (e.descriptor.mv.kind(), e.result))
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct CensusEntry<T> {
    pub code: CanonicalCode,
    pub map: T,
}

/// Isomorphism classes by size, each level sorted by canonical code.
#[derive(Debug, Clone)]
pub struct Census<T> {
    levels: BTreeMap<usize, Vec<CensusEntry<T>>>,
    index: HashMap<CanonicalCode, (usize, usize)>,
}

impl<T> Census<T> {
    pub fn count(&self, size: usize) -> usize {
        self.levels.get(&size).map_or(0, Vec::len)
    }

    pub fn level(&self, size: usize) -> &[CensusEntry<T>] {
        self.levels.get(&size).map_or(&[], Vec::as_slice)
    }

    pub fn sizes(&self) -> impl Iterator<Item = usize> + '_ {
        self.levels.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &CensusEntry<T>> {
        self.levels.values().flatten()
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn get(&self, code: &CanonicalCode) -> Option<&CensusEntry<T>> {
        self.index.get(code).map(|&(s, i)| &self.levels[&s][i])
    }

    pub fn contains(&self, code: &CanonicalCode) -> bool {
        self.index.contains_key(code)
    }
}

fn with_pool<R: Send>(jobs: usize, f: impl FnOnce() -> R + Send) -> R {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool")
        .install(f)
}

/// Levelized closure of `seeds` under `Member::children`, up to `max_size`.
pub fn closure<T: Member>(seeds: Vec<T>, max_size: usize, jobs: usize) -> Census<T> {
    let mut pending: BTreeMap<usize, HashMap<CanonicalCode, T>> = BTreeMap::new();
    for s in seeds {
        if s.size() <= max_size {
            pending.entry(s.size()).or_default().entry(s.code()).or_insert(s);
        }
    }
    let mut census = Census {
        levels: BTreeMap::new(),
        index: HashMap::new(),
    };
    with_pool(jobs, || {
        while let Some((size, bucket)) = pending.pop_first() {
            let mut level: Vec<CensusEntry<T>> = bucket
                .into_iter()
                .map(|(code, map)| CensusEntry { code, map })
                .collect();
            level.sort_by(|a, b| a.code.cmp(&b.code));
            let grown: Vec<Vec<(CanonicalCode, T)>> = level
                .par_iter()
                .map(|e| {
                    e.map
                        .children()
                        .into_iter()
                        .filter(|(_, c)| c.size() <= max_size)
                        .map(|(_, c)| (c.code(), c))
                        .collect()
                })
                .collect();
            for (code, child) in grown.into_iter().flatten() {
                let bucket = pending.entry(child.size()).or_default();
                bucket.entry(code).or_insert(child);
            }
            for (i, e) in level.iter().enumerate() {
                census.index.insert(e.code.clone(), (size, i));
            }
            census.levels.insert(size, level);
        }
    });
    census
}

pub fn sphere_seeds(max_vertices: usize) -> Vec<OrientedMap> {
    (3..)
        .take_while(|n| 2 * n + 2 <= max_vertices)
        .map(|n| pseudo_double_wheel(n).unwrap())
        .collect()
}

pub fn projective_seeds(max_vertices: usize) -> Vec<ProjectiveMap> {
    let mut seeds: Vec<ProjectiveMap> = (3..)
        .step_by(2)
        .take_while(|n| *n < max_vertices)
        .map(|n| moebius_wheel(n).unwrap())
        .collect();
    if max_vertices >= 6 {
        seeds.push(exceptional_seed_g52());
    }
    seeds
}

/// Every member of Q with at most `max_vertices` vertices.
pub fn generate_sphere_q(max_vertices: usize, jobs: usize) -> Census<OrientedMap> {
    closure(sphere_seeds(max_vertices), max_vertices, jobs)
}

/// Every member of Q̄ with at most `max_vertices` quotient vertices.
pub fn generate_projective_qbar(max_vertices: usize, jobs: usize) -> Census<ProjectiveMap> {
    closure(projective_seeds(max_vertices), max_vertices, jobs)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error("input {index}: {msg}")]
    Input { index: usize, msg: String },
    #[error("input {index}: not a quadrangulation")]
    NotQuadrangulation { index: usize },
}

/// Quotients of the input maps that admit a deck involution, each class once.
pub struct FilterPipeline<I> {
    inner: I,
    seen: HashSet<CanonicalCode>,
    queue: VecDeque<ProjectiveMap>,
    index: usize,
}

impl<I, E> Iterator for FilterPipeline<I>
where
    I: Iterator<Item = Result<OrientedMap, E>>,
    E: fmt::Display,
{
    type Item = Result<ProjectiveMap, PipelineError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            if let Some(p) = self.queue.pop_front() {
                return Some(Ok(p));
            }
            let item = self.inner.next()?;
            let index = self.index;
            self.index += 1;
            let map = match item {
                Ok(m) => m,
                Err(e) => {
                    return Some(Err(PipelineError::Input {
                        index,
                        msg: e.to_string(),
                    }))
                }
            };
            if !is_quadrangulation(&map) {
                return Some(Err(PipelineError::NotQuadrangulation { index }));
            }
            for inv in find_quotient_involutions(&map) {
                let p = ProjectiveMap::new(map.clone(), inv);
                if self.seen.insert(canonical_code_projective(&p)) {
                    self.queue.push_back(p);
                }
            }
        }
    }
}

pub fn filter_pipeline<I, E>(input: I) -> FilterPipeline<I::IntoIter>
where
    I: IntoIterator<Item = Result<OrientedMap, E>>,
{
    FilterPipeline {
        inner: input.into_iter(),
        seen: HashSet::new(),
        queue: VecDeque::new(),
        index: 0,
    }
}

/// Members of Q with no special contraction and no removal.
pub fn minimal_members_q(max_vertices: usize, jobs: usize) -> Vec<OrientedMap> {
    generate_sphere_q(max_vertices, jobs)
        .iter()
        .filter(|e| is_q_minimal(&e.map).unwrap_or(false))
        .map(|e| e.map.clone())
        .collect()
}

pub fn minimal_members_qbar(max_vertices: usize, jobs: usize) -> Vec<ProjectiveMap> {
    generate_projective_qbar(max_vertices, jobs)
        .iter()
        .filter(|e| is_qbar_minimal(&e.map).unwrap_or(false))
        .map(|e| e.map.clone())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct CountRow {
    /// Net crossings.
    pub n: usize,
    /// Quadrangulation vertices, `n + 1`.
    pub n_check: usize,
    pub qbar: usize,
    pub qbar_bip: usize,
    /// Members of Q with `2 * n_check` vertices, if computed.
    pub q_sphere: Option<usize>,
}

/// Nets with fewer than three crossings, which have no dual in Q̄: one
/// non-trivial net with no crossing and one trivial net with one crossing.
pub fn exceptional_rows() -> [CountRow; 3] {
    [(0, 1, 0), (1, 1, 1), (2, 0, 0)].map(|(n, qbar, qbar_bip)| CountRow {
        n,
        n_check: n + 1,
        qbar,
        qbar_bip,
        q_sphere: None,
    })
}

/// Rows `3..=max_n`; the sphere column is filled while `2 * n_check` is at
/// most `sphere_max_vertices`.
pub fn count_table(max_n: usize, sphere_max_vertices: usize, jobs: usize) -> Vec<CountRow> {
    let max_check = max_n + 1;
    let proj = generate_projective_qbar(max_check, jobs);
    let sphere_bound = sphere_max_vertices.min(2 * max_check);
    let sphere = (sphere_bound >= 8).then(|| generate_sphere_q(sphere_bound, jobs));
    (3..=max_n)
        .map(|n| {
            let k = n + 1;
            let level = proj.level(k);
            CountRow {
                n,
                n_check: k,
                qbar: level.len(),
                qbar_bip: level.iter().filter(|e| is_quotient_bipartite(&e.map)).count(),
                q_sphere: sphere
                    .as_ref()
                    .filter(|_| 2 * k <= sphere_bound)
                    .map(|s| s.count(2 * k)),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerationRecord {
    pub parent: CanonicalCode,
    pub child: CanonicalCode,
    pub kind: MoveKind,
    /// Number of sites of the parent giving this child.
    pub multiplicity: usize,
}

pub struct GenerationDag {
    pub census: Census<ProjectiveMap>,
    pub records: Vec<GenerationRecord>,
}

/// Parent-to-child records among members of Q̄ dual to nets with at most
/// `max_n` crossings.
pub fn generation_dag(max_n: usize, jobs: usize) -> GenerationDag {
    let max_check = max_n + 1;
    let census = generate_projective_qbar(max_check, jobs);
    let entries: Vec<&CensusEntry<ProjectiveMap>> = census.iter().collect();
    let per_parent: Vec<Vec<GenerationRecord>> = with_pool(jobs, || {
        entries
            .par_iter()
            .map(|e| {
                let mut counts: BTreeMap<(MoveKind, usize, CanonicalCode), usize> = BTreeMap::new();
                for (kind, child) in e.map.children() {
                    if child.size() <= max_check {
                        *counts.entry((kind, child.size(), child.code())).or_default() += 1;
                    }
                }
                counts
                    .into_iter()
                    .map(|((kind, _, child), multiplicity)| GenerationRecord {
                        parent: e.code.clone(),
                        child,
                        kind,
                        multiplicity,
                    })
                    .collect()
            })
            .collect()
    });
    GenerationDag {
        census,
        records: per_parent.into_iter().flatten().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::are_isomorphic;
    use crate::map::fixtures::cube;
    use crate::predicates::{degree_profile, is_class_q, is_class_qbar};

    #[test]
    fn wheels() {
        assert_eq!(pseudo_double_wheel(2).unwrap_err(), EnumError::WheelSize(2));
        assert!(are_isomorphic(&pseudo_double_wheel(3).unwrap(), &cube()));
        for n in 3..9 {
            let w = pseudo_double_wheel(n).unwrap();
            assert_eq!((w.num_vertices(), w.num_edges(), w.num_faces()), (2 * n + 2, 4 * n, 2 * n));
            assert!(is_class_q(&w));
            let mut expected = vec![3; 2 * n];
            expected.extend([n, n]);
            expected.sort_unstable();
            assert_eq!(degree_profile(&w).degrees, expected);
            assert_eq!(find_quotient_involutions(&w).len(), n % 2);
        }
    }

    #[test]
    fn moebius_wheels() {
        assert_eq!(moebius_wheel(4).unwrap_err(), EnumError::MoebiusSize(4));
        for n in [3, 5, 7, 9] {
            let p = moebius_wheel(n).unwrap();
            assert_eq!((p.num_vertices(), p.num_edges(), p.num_faces()), (n + 1, 2 * n, n));
            assert!(is_class_qbar(&p));
            let mut degs: Vec<usize> = p.vertex_reps().iter().map(|&v| p.degree(v)).collect();
            degs.sort_unstable();
            let mut expected = vec![3; n];
            expected.push(n);
            expected.sort_unstable();
            assert_eq!(degs, expected);
            assert!(are_isomorphic(p.cover(), &pseudo_double_wheel(n).unwrap()));
        }
    }

    #[test]
    fn g52_seed() {
        let g = exceptional_seed_g52();
        assert_eq!((g.num_vertices(), g.num_edges(), g.num_faces()), (6, 10, 5));
        assert!(is_class_qbar(&g));
        assert!(is_quotient_bipartite(&g));
        assert!(is_qbar_minimal(&g).unwrap());
        // The cover is not minimal on the sphere.
        assert!(!is_q_minimal(g.cover()).unwrap());
    }

    #[test]
    fn small_sphere_counts() {
        let c = generate_sphere_q(12, 1);
        let counts: Vec<usize> = (8..=12).map(|n| c.count(n)).collect();
        assert_eq!(counts[0], 1);
        assert_eq!(counts[2], 1);
        assert_eq!(counts[4], 3);
        assert!(c.iter().all(|e| is_class_q(&e.map)));
    }

    #[test]
    fn closure_is_deterministic_across_jobs() {
        let a = generate_projective_qbar(10, 1);
        let b = generate_projective_qbar(10, 3);
        let ca: Vec<_> = a.iter().map(|e| e.code.clone()).collect();
        let cb: Vec<_> = b.iter().map(|e| e.code.clone()).collect();
        assert_eq!(ca, cb);
    }

    #[test]
    fn filter_examples() {
        let input: Vec<Result<OrientedMap, String>> = vec![
            Ok(cube()),
            Ok(pseudo_double_wheel(4).unwrap()),
            Err("bad record".into()),
            Ok(cube()),
        ];
        let out: Vec<_> = filter_pipeline(input).collect();
        assert_eq!(out.len(), 2);
        assert_eq!(out[0].as_ref().unwrap().num_vertices(), 4);
        assert!(matches!(&out[1], Err(PipelineError::Input { index: 2, msg }) if msg == "bad record"));
    }

    #[test]
    fn count_rows_small() {
        let rows = count_table(5, 12, 1);
        let got: Vec<(usize, usize, Option<usize>)> = rows.iter().map(|r| (r.qbar, r.qbar_bip, r.q_sphere)).collect();
        assert_eq!(got, vec![(1, 0, Some(1)), (0, 0, Some(1)), (2, 1, Some(3))]);
    }
}
