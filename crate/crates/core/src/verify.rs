//! Property suites over generated censuses, with a serializable report.

use std::collections::BTreeSet;

use rand::{rngs::StdRng, Rng, SeedableRng};
use serde::Serialize;

use crate::canon::{canonical_code, CanonicalCode};
use crate::enumerate::{filter_pipeline, generate_projective_qbar, generate_sphere_q, Census};
use crate::map::{Dart, MapError, OrientedMap};
use crate::moves::{
    add_face, apply, apply_projective, contract_face, contract_face_projective, contraction_obstruction,
    legal_expansions_q, legal_expansions_qbar, legal_reductions_q, legal_reductions_qbar,
    neighbour_faces_disjoint_from_images, quotient_face_removable, remove_face, remove_face_projective,
    split_face_net, split_face_net_projective, split_vertex, split_vertex_projective, surround_vertex_net,
    surround_vertex_net_projective, add_face_projective,
};
use crate::predicates::{
    homology_class, is_basic_net, is_basic_net_direct, is_class_q, is_class_qbar, is_quotient_bipartite,
    is_simple, is_simply_embedded, is_two_cell_embedded, is_two_connected, min_edge_cut, HomologyClass, Net,
};
use crate::projective::{canonical_code_projective, verify_unique_involution, ProjectiveMap, UniquenessStatus};

/// Failure messages kept per suite.
const KEEP: usize = 5;

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub checked: usize,
    pub failures: usize,
    pub examples: Vec<String>,
}

impl SuiteResult {
    fn new(name: &'static str) -> Self {
        SuiteResult {
            name,
            checked: 0,
            failures: 0,
            examples: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.examples.len() < KEEP {
                self.examples.push(what());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub max_crossings: usize,
    pub sphere_max_vertices: usize,
    pub suites: Vec<SuiteResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }
}

/// Sphere members: 2-cell embedded, 2-connected, 3-edge-connected; the dual
/// net is 4-regular, simple, 4-edge-connected with even cut, and basic.
pub fn sphere_structure_suite(census: &Census<OrientedMap>) -> SuiteResult {
    let mut r = SuiteResult::new("sphere_structure");
    for (i, e) in census.iter().enumerate() {
        let g = &e.map;
        let cut = min_edge_cut(g);
        r.check(
            is_class_q(g) && is_two_cell_embedded(g) && is_two_connected(g) && cut.is_some_and(|k| k >= 3),
            || format!("member {i}: quadrangulation conditions"),
        );
        let net = g.dual();
        let net_cut = min_edge_cut(&net);
        r.check(
            net.degrees().iter().all(|&k| k == 4)
                && is_simple(&net)
                && net_cut.is_some_and(|k| k >= 4 && k % 2 == 0),
            || format!("member {i}: dual net conditions"),
        );
        r.check(
            is_basic_net(Net::Sphere(&net)) == Ok(true) && is_basic_net_direct(Net::Sphere(&net)) == Ok(true),
            || format!("member {i}: dual is not basic"),
        );
    }
    r
}

/// Projective members: simply embedded, cover in Q, the dual net basic by
/// both routes, and the bipartite tag matching the homology of the dual.
pub fn projective_structure_suite(census: &Census<ProjectiveMap>) -> SuiteResult {
    let mut r = SuiteResult::new("projective_structure");
    for (i, e) in census.iter().enumerate() {
        let p = &e.map;
        r.check(
            is_simply_embedded(p) && is_class_qbar(p) && p.euler_characteristic() == 1,
            || format!("member {i}: class conditions"),
        );
        let net = p.dual();
        r.check(
            is_basic_net(Net::Projective(&net)) == Ok(true)
                && is_basic_net_direct(Net::Projective(&net)) == Ok(true),
            || format!("member {i}: dual net is not basic"),
        );
        let trivial = homology_class(&net) == Ok(HomologyClass::Trivial);
        r.check(trivial == is_quotient_bipartite(p), || {
            format!("member {i}: bipartite tag disagrees with homology")
        });
    }
    r
}

/// At most one deck involution per sphere member.
pub fn unique_involution_suite(census: &Census<OrientedMap>) -> SuiteResult {
    let mut r = SuiteResult::new("unique_involution");
    for (i, e) in census.iter().enumerate() {
        let rep = verify_unique_involution(&e.map);
        r.check(rep.status != UniquenessStatus::Violation, || {
            format!("member {i}: {} involutions", rep.involutions.len())
        });
    }
    r
}

/// Filtering the sphere census at `2k` vertices gives the projective census
/// at `k`, as code sets.
pub fn pipeline_suite(sphere: &Census<OrientedMap>, proj: &Census<ProjectiveMap>, max_check: usize) -> SuiteResult {
    let mut r = SuiteResult::new("pipeline_cross_validation");
    for k in 4..=max_check {
        if 2 * k > sphere.sizes().max().unwrap_or(0) {
            break;
        }
        let filtered: BTreeSet<CanonicalCode> = filter_pipeline(sphere.level(2 * k).iter().map(|e| Ok::<_, MapError>(e.map.clone())))
            .filter_map(Result::ok)
            .map(|p| canonical_code_projective(&p))
            .collect();
        let direct: BTreeSet<CanonicalCode> = proj.level(k).iter().map(|e| e.code.clone()).collect();
        r.check(filtered == direct, || {
            format!("size {k}: filter gives {}, generator gives {}", filtered.len(), direct.len())
        });
    }
    r
}

/// Quotient contraction legality against its two obstructions, on every
/// cover face that contracts within Q.
pub fn contraction_obstruction_suite(census: &Census<ProjectiveMap>) -> SuiteResult {
    let mut r = SuiteResult::new("contraction_obstructions");
    for (i, e) in census.iter().enumerate() {
        let p = &e.map;
        let cover = p.cover();
        for f in 0..cover.num_faces() {
            for d0 in [cover.face_start(f), cover.phi(cover.face_start(f))] {
                let Ok(single) = contract_face(cover, d0) else {
                    continue;
                };
                if !is_class_q(&single.map) {
                    continue;
                }
                let a = cover.vertex(d0);
                let c = cover.vertex(cover.phi(cover.phi(d0)));
                let distinct = BTreeSet::from([a, c, p.vertex_partner(a), p.vertex_partner(c)]).len() == 4;
                r.check(distinct, || format!("member {i} dart {d0}: corners and images coincide"));
                let obstruction = contraction_obstruction(p, d0).unwrap();
                let legal = contract_face_projective(p, d0).is_ok_and(|o| is_class_qbar(&o.map));
                r.check(legal == !obstruction.blocks(), || {
                    format!("member {i} dart {d0}: legal {legal}, obstruction {obstruction:?}")
                });
                if single.inverse.special {
                    r.check(legal == !obstruction.edge_a_c_image, || {
                        format!("member {i} dart {d0}: special case disagrees")
                    });
                }
            }
        }
    }
    r
}

/// Removal of quotient faces: the disjointness condition implies
/// removability, and removability matches apply-and-test.
pub fn quotient_removal_suite(census: &Census<ProjectiveMap>) -> SuiteResult {
    let mut r = SuiteResult::new("removal_condition");
    for (i, e) in census.iter().enumerate() {
        let p = &e.map;
        let cover = p.cover();
        for f in 0..cover.num_faces() {
            let d0 = cover.face_start(f);
            let removable = quotient_face_removable(p, d0);
            let applied = remove_face_projective(p, d0).is_ok();
            r.check(removable == applied, || {
                format!("member {i} face {f}: predicate {removable}, applied {applied}")
            });
            if remove_face(cover, d0).is_ok() && neighbour_faces_disjoint_from_images(p, d0) {
                r.check(removable, || format!("member {i} face {f}: disjoint but not removable"));
            }
        }
    }
    r
}

/// Random legal moves followed by their inverses.
pub fn round_trip_suite(
    sphere: &Census<OrientedMap>,
    proj: &Census<ProjectiveMap>,
    trials: usize,
    seed: u64,
) -> SuiteResult {
    let mut r = SuiteResult::new("move_round_trips");
    let mut rng = StdRng::seed_from_u64(seed);
    let spheres: Vec<&OrientedMap> = sphere.iter().map(|e| &e.map).collect();
    let projs: Vec<&ProjectiveMap> = proj.iter().map(|e| &e.map).collect();
    let mut t = 0;
    while t < trials {
        if rng.gen_bool(0.5) && !spheres.is_empty() {
            let g = spheres[rng.gen_range(0..spheres.len())];
            let mut moves: Vec<_> = legal_expansions_q(g).unwrap_or_default().into_iter().map(|e| e.descriptor).collect();
            moves.extend(legal_reductions_q(g).unwrap_or_default().into_iter().map(|e| e.descriptor));
            if moves.is_empty() {
                continue;
            }
            let m = moves[rng.gen_range(0..moves.len())];
            let ok = apply(g, &m)
                .and_then(|o| apply(&o.map, &o.inverse))
                .is_ok_and(|back| canonical_code(&back.map) == canonical_code(g));
            r.check(ok, || format!("sphere move {m:?} does not invert"));
        } else if !projs.is_empty() {
            let p = projs[rng.gen_range(0..projs.len())];
            let mut moves: Vec<_> = legal_expansions_qbar(p).unwrap_or_default().into_iter().map(|e| e.descriptor).collect();
            moves.extend(legal_reductions_qbar(p).unwrap_or_default().into_iter().map(|e| e.descriptor));
            if moves.is_empty() {
                continue;
            }
            let m = moves[rng.gen_range(0..moves.len())];
            let ok = apply_projective(p, &m)
                .and_then(|o| apply_projective(&o.map, &o.inverse))
                .is_ok_and(|back| canonical_code_projective(&back.map) == canonical_code_projective(p));
            r.check(ok, || format!("projective move {m:?} does not invert"));
        }
        t += 1;
    }
    r
}

/// Every vertex splitting and face addition on a quadrangulation is dual to
/// the face splitting and vertex surrounding at the same darts of its dual
/// net.
pub fn duality_transport_suite(sphere: &Census<OrientedMap>, proj: &Census<ProjectiveMap>) -> SuiteResult {
    let mut r = SuiteResult::new("duality_transport");
    for (i, e) in sphere.iter().enumerate() {
        let g = &e.map;
        let net = g.dual();
        for v in 0..g.num_vertices() {
            let rot: Vec<Dart> = g.vertex_darts(v).collect();
            for j in 1..rot.len() {
                let quad = split_vertex(g, rot[0], rot[j]).map(|o| canonical_code(&o.map.dual()));
                let split = split_face_net(&net, rot[0], rot[j]).map(|o| canonical_code(&o.0));
                r.check(quad.is_ok() && quad == split, || format!("sphere member {i}: splitting at vertex {v}"));
            }
        }
        for f in 0..g.num_faces() {
            let e0 = g.face_start(f);
            let quad = add_face(g, e0).map(|o| canonical_code(&o.map.dual()));
            let sur = surround_vertex_net(&net, e0).map(|o| canonical_code(&o.0));
            r.check(quad.is_ok() && quad == sur, || format!("sphere member {i}: addition at face {f}"));
        }
    }
    for (i, e) in proj.iter().enumerate() {
        let p = &e.map;
        let net = p.dual();
        let cover = p.cover();
        for &v in p.vertex_reps() {
            let rot: Vec<Dart> = cover.vertex_darts(v).collect();
            for j in 1..rot.len() {
                let quad = split_vertex_projective(p, rot[0], rot[j]).map(|o| canonical_code_projective(&o.map.dual()));
                let split = split_face_net_projective(&net, rot[0], rot[j]).map(|q| canonical_code_projective(&q));
                r.check(quad == split, || format!("projective member {i}: splitting at vertex {v}"));
            }
        }
        for &f in p.face_reps() {
            let e0 = cover.face_start(f);
            let quad = add_face_projective(p, e0).map(|o| canonical_code_projective(&o.map.dual()));
            let sur = surround_vertex_net_projective(&net, e0).map(|q| canonical_code_projective(&q));
            r.check(quad.is_ok() && quad == sur, || format!("projective member {i}: addition at face {f}"));
        }
    }
    r
}

/// Codes in a census are distinct and reproduce from the stored maps.
pub fn isomorph_free_suite<T>(census: &Census<T>, code: impl Fn(&T) -> CanonicalCode, name: &'static str) -> SuiteResult {
    let mut r = SuiteResult::new(name);
    let mut seen = BTreeSet::new();
    for (i, e) in census.iter().enumerate() {
        r.check(seen.insert(e.code.clone()) && code(&e.map) == e.code, || {
            format!("member {i}: duplicate or stale code")
        });
    }
    r
}

/// Swaps two darts in the first rotation of degree at least 3. The result
/// is usually not spherical.
pub fn mutate(map: &OrientedMap) -> Result<OrientedMap, MapError> {
    let mut rots = map.rotations();
    if let Some(r) = rots.iter_mut().find(|r| r.len() >= 3) {
        r.swap(0, 1);
    }
    OrientedMap::from_rotations(&rots)
}

fn fault_suite(census: &Census<OrientedMap>) -> SuiteResult {
    let mut r = SuiteResult::new("fault_injection");
    if let Some(e) = census.iter().next() {
        match mutate(&e.map) {
            Ok(m) => r.check(is_class_q(&m), || "mutant fails the class check".into()),
            Err(err) => r.check(false, || format!("mutant rejected: {err}")),
        }
    }
    r
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub max_crossings: usize,
    /// Cap on the sphere census, which grows much faster.
    pub sphere_max_vertices: usize,
    pub round_trips: usize,
    pub inject_fault: bool,
    pub jobs: usize,
}

pub fn run_all(opts: &VerifyOptions) -> VerifyReport {
    let max_check = opts.max_crossings + 1;
    let sphere_bound = opts.sphere_max_vertices.min(2 * max_check);
    let sphere = generate_sphere_q(sphere_bound, opts.jobs);
    let proj = generate_projective_qbar(max_check, opts.jobs);
    let mut suites = vec![
        isomorph_free_suite(&sphere, canonical_code, "sphere_isomorph_free"),
        isomorph_free_suite(&proj, canonical_code_projective, "projective_isomorph_free"),
        sphere_structure_suite(&sphere),
        projective_structure_suite(&proj),
        unique_involution_suite(&sphere),
        pipeline_suite(&sphere, &proj, max_check),
        contraction_obstruction_suite(&proj),
        quotient_removal_suite(&proj),
        round_trip_suite(&sphere, &proj, opts.round_trips, 1),
        duality_transport_suite(&sphere, &proj),
    ];
    if opts.inject_fault {
        suites.push(fault_suite(&sphere));
    }
    VerifyReport {
        max_crossings: opts.max_crossings,
        sphere_max_vertices: sphere_bound,
        suites,
    }
}

/// Uniqueness of deck involutions over the sphere census.
pub fn run_unique_involution(max_vertices: usize, jobs: usize) -> SuiteResult {
    unique_involution_suite(&generate_sphere_q(max_vertices, jobs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes() {
        let report = run_all(&VerifyOptions {
            max_crossings: 6,
            sphere_max_vertices: 14,
            round_trips: 200,
            inject_fault: false,
            jobs: 1,
        });
        for s in &report.suites {
            assert!(s.passed(), "{} failed: {:?}", s.name, s.examples);
            assert!(s.checked > 0, "{} checked nothing", s.name);
        }
    }

    #[test]
    fn injected_fault_is_detected() {
        let report = run_all(&VerifyOptions {
            max_crossings: 3,
            sphere_max_vertices: 8,
            round_trips: 10,
            inject_fault: true,
            jobs: 1,
        });
        assert!(!report.passed());
        let fault = report.suites.iter().find(|s| s.name == "fault_injection").unwrap();
        assert_eq!(fault.failures, 1);
    }

    #[test]
    fn mutant_cube_is_not_spherical() {
        let c = crate::map::fixtures::cube();
        assert!(matches!(mutate(&c), Err(MapError::NotSpherical { .. })));
    }
}
