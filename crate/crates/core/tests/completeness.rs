//! Brute-force oracle for small projective members: every signed rotation
//! system on a loopless quotient multigraph, lifted to its orientation double
//! cover and kept when the lift lies in the class.

use std::collections::BTreeSet;

use basic_nets::enumerate::generate_projective_qbar;
use basic_nets::predicates::is_class_qbar;
use basic_nets::{canonical_code_projective, CanonicalCode, DeckInvolution, OrientedMap, ProjectiveMap};

/// Edge lists with `2k - 2` edges on `k` vertices, parallel edges at most
/// twice, every degree at least 3 and degrees non-increasing by label.
fn multigraphs(k: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    let mut deg = vec![0; k];
    let mut cur = Vec::new();
    grow(&pairs, 0, 2 * k - 2, &mut deg, &mut cur, &mut out);
    out
}

fn grow(
    pairs: &[(usize, usize)],
    at: usize,
    left: usize,
    deg: &mut [usize],
    cur: &mut Vec<(usize, usize)>,
    out: &mut Vec<Vec<(usize, usize)>>,
) {
    if left == 0 {
        let ok = deg.iter().all(|&d| d >= 3) && deg.windows(2).all(|w| w[0] >= w[1]);
        if ok && connected(deg.len(), cur) {
            out.push(cur.clone());
        }
        return;
    }
    if at == pairs.len() {
        return;
    }
    let (i, j) = pairs[at];
    for m in 0..=2.min(left) {
        for _ in 0..m {
            cur.push((i, j));
        }
        deg[i] += m;
        deg[j] += m;
        grow(pairs, at + 1, left - m, deg, cur, out);
        deg[i] -= m;
        deg[j] -= m;
        cur.truncate(cur.len() - m);
    }
}

fn find(p: &mut [usize], x: usize) -> usize {
    if p[x] != x {
        let r = find(p, p[x]);
        p[x] = r;
    }
    p[x]
}

fn connected(k: usize, edges: &[(usize, usize)]) -> bool {
    let mut p: Vec<usize> = (0..k).collect();
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut p, a), find(&mut p, b));
        p[ra] = rb;
    }
    let r = find(&mut p, 0);
    (0..k).all(|v| find(&mut p, v) == r)
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Cyclic orders of the quotient darts at a vertex, first dart fixed.
fn cyclic_orders(darts: &[usize]) -> Vec<Vec<usize>> {
    permutations(&darts[1..])
        .into_iter()
        .map(|mut p| {
            p.insert(0, darts[0]);
            p
        })
        .collect()
}

/// Lift of quotient dart `q = 2e + end` onto sheet `t` of its tail.
fn lift(q: usize, t: usize, flip: &[bool]) -> usize {
    let (e, end) = (q / 2, q % 2);
    let s = if end == 0 { t } else { t ^ flip[e] as usize };
    4 * e + 2 * s + end
}

/// Cover rotations: vertex `2w + t` uses the quotient order at `w`, reversed
/// on sheet 1.
fn cover_rotations(rot: &[Vec<usize>], flip: &[bool]) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(2 * rot.len());
    for r in rot {
        out.push(r.iter().map(|&q| lift(q, 0, flip)).collect());
        out.push(r.iter().rev().map(|&q| lift(q, 1, flip)).collect());
    }
    out
}

/// Cheap screen before building a map: the lift must be connected and every
/// face a quadrilateral, with the face count of a sphere.
fn quad_sphere(rots: &[Vec<usize>], darts: usize) -> bool {
    let mut next = vec![0; darts];
    let mut tail = vec![0; darts];
    for (v, r) in rots.iter().enumerate() {
        for (i, &d) in r.iter().enumerate() {
            next[d] = r[(i + 1) % r.len()];
            tail[d] = v;
        }
    }
    let mut p: Vec<usize> = (0..rots.len()).collect();
    for d in (0..darts).step_by(2) {
        let (a, b) = (find(&mut p, tail[d]), find(&mut p, tail[d ^ 1]));
        p[a] = b;
    }
    let r = find(&mut p, 0);
    if (0..rots.len()).any(|v| find(&mut p, v) != r) {
        return false;
    }
    let mut seen = vec![false; darts];
    let mut faces = 0;
    for s in 0..darts {
        if seen[s] {
            continue;
        }
        let mut d = s;
        let mut len = 0;
        while !seen[d] {
            seen[d] = true;
            len += 1;
            d = next[d ^ 1];
        }
        if len != 4 {
            return false;
        }
        faces += 1;
    }
    rots.len() + faces == darts / 2 + 2
}

fn brute_force(k: usize) -> BTreeSet<CanonicalCode> {
    let mut codes = BTreeSet::new();
    for edges in multigraphs(k) {
        let m = edges.len();
        let mut at: Vec<Vec<usize>> = vec![Vec::new(); k];
        for (e, &(a, b)) in edges.iter().enumerate() {
            at[a].push(2 * e);
            at[b].push(2 * e + 1);
        }
        // Signs along a spanning tree can be normalised away.
        let mut p: Vec<usize> = (0..k).collect();
        let mut free = Vec::new();
        for (e, &(a, b)) in edges.iter().enumerate() {
            let (ra, rb) = (find(&mut p, a), find(&mut p, b));
            if ra == rb {
                free.push(e);
            } else {
                p[ra] = rb;
            }
        }
        let orders: Vec<Vec<Vec<usize>>> = at.iter().map(|d| cyclic_orders(d)).collect();
        let mut idx = vec![0; k];
        loop {
            let rot: Vec<Vec<usize>> = (0..k).map(|v| orders[v][idx[v]].clone()).collect();
            for mask in 0..1u32 << free.len() {
                let mut flip = vec![false; m];
                for (i, &e) in free.iter().enumerate() {
                    flip[e] = mask >> i & 1 == 1;
                }
                let rots = cover_rotations(&rot, &flip);
                if !quad_sphere(&rots, 4 * m) {
                    continue;
                }
                let cover = OrientedMap::from_rotations(&rots).expect("screened cover");
                let tau: Vec<usize> = (0..4 * m).map(|d| d ^ 2).collect();
                let Ok(deck) = DeckInvolution::new(&cover, tau) else { continue };
                let pm = ProjectiveMap::new(cover, deck);
                if is_class_qbar(&pm) {
                    codes.insert(canonical_code_projective(&pm));
                }
            }
            let mut v = 0;
            while v < k {
                idx[v] += 1;
                if idx[v] < orders[v].len() {
                    break;
                }
                idx[v] = 0;
                v += 1;
            }
            if v == k {
                break;
            }
        }
    }
    codes
}

fn generated(k: usize) -> BTreeSet<CanonicalCode> {
    generate_projective_qbar(k, 1).level(k).iter().map(|e| e.code.clone()).collect()
}

#[test]
fn multigraph_enumeration_on_four_vertices() {
    // 6 edges, all degrees 3: K4, or two doubled edges joined by single ones.
    let gs = multigraphs(4);
    assert!(gs.iter().any(|g| g.iter().all(|&(a, b)| a != b) && BTreeSet::from_iter(g.iter()).len() == 6));
    assert!(gs.iter().all(|g| g.len() == 6));
}

#[test]
fn generator_is_complete_on_four_quotient_vertices() {
    let bf = brute_force(4);
    assert_eq!(bf.len(), 1);
    assert_eq!(bf, generated(4));
}

#[test]
fn generator_is_complete_on_five_quotient_vertices() {
    let bf = brute_force(5);
    assert!(bf.is_empty());
    assert_eq!(bf, generated(5));
}

#[test]
fn generator_is_complete_on_six_quotient_vertices() {
    let bf = brute_force(6);
    assert_eq!(bf, generated(6));
    assert_eq!(bf.len(), 2);
}
