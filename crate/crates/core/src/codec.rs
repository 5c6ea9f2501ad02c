//! Text and binary formats.
//!
//! Rotation lists in every format are read and written as counterclockwise
//! (`sigma`) order. `plantri` writes clockwise lists, so its maps are read as
//! their mirror images; all counts and isomorphism tests here are up to
//! reflection, so this does not change results.
//!
//! * ascii: `N list_1,...,list_N`, vertex `i` written as the `i`-th letter.
//! * planar code: optional `>>planar_code<<` header, then per map a vertex
//!   count byte and each vertex's 1-based neighbours terminated by 0.
//! * quotient ascii: `k list_a,...` for a projective map with `2k` cover
//!   vertices, where the deck involution maps `a ↦ A`, `b ↦ B`, ... and only
//!   lowercase vertices are listed. The list of an uppercase vertex is the
//!   reversed list of its lowercase partner with letter cases swapped.

use std::collections::HashMap;

use thiserror::Error;

use crate::canon::canonical_form;
use crate::enumerate::CountRow;
use crate::map::{build_map, from_neighbor_lists, Dart, MapError, OrientedMap, Vertex};
use crate::projective::{canonical_form_projective, DeckInvolution, ProjectiveError, ProjectiveMap};

pub const PLANAR_CODE_HEADER: &[u8] = b">>planar_code<<";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("byte {offset}: {msg}")]
    Parse { offset: usize, msg: String },
    #[error("invalid map: {0}")]
    Map(#[from] MapError),
    #[error("invalid deck involution: {0}")]
    Deck(#[from] ProjectiveError),
    #[error("cannot encode: {0}")]
    Unsupported(String),
}

fn parse_err(offset: usize, msg: impl Into<String>) -> CodecError {
    CodecError::Parse {
        offset,
        msg: msg.into(),
    }
}

type OffsetLists<'a> = Vec<(usize, &'a str)>;

/// Splits `N list,list,...` into the count and the lists with their byte
/// offsets.
fn split_line(line: &str) -> Result<(usize, OffsetLists<'_>), CodecError> {
    let line = line.trim_end_matches(['\n', '\r']);
    let (count, rest) = line
        .split_once(' ')
        .ok_or_else(|| parse_err(0, "expected a count and rotation lists"))?;
    let n: usize = count
        .parse()
        .map_err(|_| parse_err(0, format!("bad count {count:?}")))?;
    let mut lists = Vec::new();
    let mut offset = count.len() + 1;
    for part in rest.split(',') {
        lists.push((offset, part));
        offset += part.len() + 1;
    }
    if lists.len() != n {
        return Err(parse_err(0, format!("count {n} but {} lists", lists.len())));
    }
    Ok((n, lists))
}

fn check_symmetric(lists: &[Vec<Vertex>], offsets: &[usize]) -> Result<(), CodecError> {
    for (u, l) in lists.iter().enumerate() {
        for &w in l {
            let there = lists[w].iter().filter(|&&x| x == u).count();
            let here = l.iter().filter(|&&x| x == w).count();
            if there != here {
                return Err(parse_err(
                    offsets[u],
                    format!("adjacency of vertices {} and {} is not symmetric", u + 1, w + 1),
                ));
            }
        }
    }
    Ok(())
}

pub fn parse_ascii(line: &str) -> Result<OrientedMap, CodecError> {
    let (n, parts) = split_line(line)?;
    if n > 26 {
        return Err(parse_err(0, "more than 26 vertices"));
    }
    let mut lists = Vec::with_capacity(n);
    for &(offset, part) in &parts {
        let mut l = Vec::with_capacity(part.len());
        for (i, ch) in part.char_indices() {
            let w = (ch as usize).wrapping_sub('a' as usize);
            if !ch.is_ascii_lowercase() || w >= n {
                return Err(parse_err(offset + i, format!("unknown vertex {ch:?}")));
            }
            l.push(w);
        }
        lists.push(l);
    }
    let offsets: Vec<usize> = parts.iter().map(|p| p.0).collect();
    check_symmetric(&lists, &offsets)?;
    Ok(from_neighbor_lists(&lists)?)
}

fn letter_list(map: &OrientedMap, v: Vertex, letter: impl Fn(Vertex) -> char) -> String {
    map.vertex_darts(v).map(|d| letter(map.head(d))).collect()
}

/// Writes the map in stored vertex order.
pub fn emit_ascii_raw(map: &OrientedMap) -> Result<String, CodecError> {
    let n = map.num_vertices();
    if n > 26 {
        return Err(CodecError::Unsupported(format!("{n} vertices exceed the ascii alphabet")));
    }
    let letter = |v: Vertex| (b'a' + v as u8) as char;
    let lists: Vec<String> = (0..n).map(|v| letter_list(map, v, letter)).collect();
    Ok(format!("{n} {}", lists.join(",")))
}

/// Writes the canonical form of the map, so isomorphic maps give equal text.
pub fn emit_ascii(map: &OrientedMap) -> Result<String, CodecError> {
    emit_ascii_raw(&canonical_form(map))
}

/// Reader over a planar code byte stream; stops after the first error.
pub struct PlanarCodeReader<'a> {
    data: &'a [u8],
    pos: usize,
    failed: bool,
}

impl<'a> PlanarCodeReader<'a> {
    pub fn new(data: &'a [u8]) -> Self {
        let pos = if data.starts_with(PLANAR_CODE_HEADER) {
            PLANAR_CODE_HEADER.len()
        } else {
            0
        };
        PlanarCodeReader {
            data,
            pos,
            failed: false,
        }
    }

    fn record(&mut self) -> Result<OrientedMap, CodecError> {
        let start = self.pos;
        let n = self.data[self.pos] as usize;
        if n == 0 {
            return Err(parse_err(start, "two-byte planar code is not supported"));
        }
        self.pos += 1;
        let mut lists = Vec::with_capacity(n);
        for _ in 0..n {
            let mut l = Vec::new();
            loop {
                let Some(&b) = self.data.get(self.pos) else {
                    return Err(parse_err(self.pos, "truncated record"));
                };
                self.pos += 1;
                if b == 0 {
                    break;
                }
                if b as usize > n {
                    return Err(parse_err(self.pos - 1, format!("neighbour {b} out of range 1..={n}")));
                }
                l.push(b as usize - 1);
            }
            lists.push(l);
        }
        check_symmetric(&lists, &vec![start; n])?;
        from_neighbor_lists(&lists).map_err(|e| parse_err(start, e.to_string()))
    }
}

impl Iterator for PlanarCodeReader<'_> {
    type Item = Result<OrientedMap, CodecError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed || self.pos >= self.data.len() {
            return None;
        }
        let r = self.record();
        self.failed = r.is_err();
        Some(r)
    }
}

pub fn parse_planar_code(data: &[u8]) -> PlanarCodeReader<'_> {
    PlanarCodeReader::new(data)
}

/// Header plus one record per map, in stored vertex order.
pub fn emit_planar_code<'a>(maps: impl IntoIterator<Item = &'a OrientedMap>) -> Result<Vec<u8>, CodecError> {
    let mut out = PLANAR_CODE_HEADER.to_vec();
    for map in maps {
        write_planar_code(map, &mut out)?;
    }
    Ok(out)
}

/// Appends one record without a header.
pub fn write_planar_code(map: &OrientedMap, out: &mut Vec<u8>) -> Result<(), CodecError> {
    let n = map.num_vertices();
    if n > 255 {
        return Err(CodecError::Unsupported(format!("{n} vertices exceed one-byte planar code")));
    }
    out.push(n as u8);
    for v in 0..n {
        out.extend(map.vertex_darts(v).map(|d| map.head(d) as u8 + 1));
        out.push(0);
    }
    Ok(())
}

/// Quotient ascii of the canonical form of `p`.
pub fn emit_quotient_ascii(p: &ProjectiveMap) -> Result<String, CodecError> {
    let c = canonical_form_projective(p);
    let cover = c.cover();
    let nv = cover.num_vertices();
    if nv > 52 {
        return Err(CodecError::Unsupported(format!("{nv} cover vertices exceed the alphabet")));
    }
    let mut name = vec![' '; nv];
    let mut lower = Vec::new();
    for v in 0..nv {
        if name[v] == ' ' {
            let i = lower.len() as u8;
            name[v] = (b'a' + i) as char;
            name[c.vertex_partner(v)] = (b'A' + i) as char;
            lower.push(v);
        }
    }
    let lists: Vec<String> = lower
        .iter()
        .map(|&v| letter_list(cover, v, |w| name[w]))
        .collect();
    Ok(format!("{} {}", lower.len(), lists.join(",")))
}

pub fn parse_quotient_ascii(line: &str) -> Result<ProjectiveMap, CodecError> {
    let (k, parts) = split_line(line)?;
    if k > 26 {
        return Err(parse_err(0, "more than 26 lowercase vertices"));
    }
    // Lowercase letter i is vertex i, uppercase is vertex k + i.
    let index = |ch: char| -> Option<usize> {
        let i = ch.to_ascii_lowercase() as usize - 'a' as usize;
        (ch.is_ascii_alphabetic() && i < k).then(|| if ch.is_ascii_lowercase() { i } else { k + i })
    };
    let partner = |v: usize| if v < k { v + k } else { v - k };
    let mut lists = vec![Vec::new(); 2 * k];
    for (i, &(offset, part)) in parts.iter().enumerate() {
        for (j, ch) in part.char_indices() {
            let w = index(ch).ok_or_else(|| parse_err(offset + j, format!("unknown vertex {ch:?}")))?;
            if w == i || lists[i].contains(&w) {
                return Err(parse_err(offset + j, format!("loop or repeated neighbour {ch:?}")));
            }
            lists[i].push(w);
        }
        lists[k + i] = lists[i].iter().rev().map(|&w| partner(w)).collect();
    }
    let mut offsets: Vec<usize> = parts.iter().map(|p| p.0).collect();
    offsets.extend_from_within(..);
    check_symmetric(&lists, &offsets)?;
    let labelled: Vec<Vec<(usize, usize)>> = lists
        .iter()
        .enumerate()
        .map(|(u, l)| l.iter().map(|&w| (u.min(w), u.max(w))).collect())
        .collect();
    let cover = build_map(&labelled)?;
    let mut dart_of: HashMap<(Vertex, Vertex), Dart> = HashMap::with_capacity(cover.num_darts());
    for d in 0..cover.num_darts() {
        dart_of.insert((cover.vertex(d), cover.head(d)), d);
    }
    let tau: Vec<Dart> = (0..cover.num_darts())
        .map(|d| dart_of[&(partner(cover.vertex(d)), partner(cover.head(d)))])
        .collect();
    let deck = DeckInvolution::new(&cover, tau)?;
    Ok(ProjectiveMap::new(cover, deck))
}

pub const COUNT_CSV_HEADER: &str = "n,n_check,qbar,qbar_bip,qQ";

/// Header then one line per row; an unknown sphere count is left empty.
pub fn emit_count_csv(rows: &[CountRow]) -> String {
    let mut out = String::from(COUNT_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let q = r.q_sphere.map(|q| q.to_string()).unwrap_or_default();
        out.push_str(&format!("{},{},{},{},{}\n", r.n, r.n_check, r.qbar, r.qbar_bip, q));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::{are_isomorphic, canonical_code};
    use crate::map::fixtures::*;
    use crate::projective::{canonical_code_projective, find_quotient_involutions, quotient};
    use proptest::prelude::*;

    const SAMPLE_LINE: &str = "9 bcdef,aDg,agF,aFBH,aHI,aICD,bhic,DEg,gEF";

    #[test]
    fn ascii_round_trip() {
        let c = cube();
        let text = emit_ascii(&c).unwrap();
        let back = parse_ascii(&text).unwrap();
        assert!(are_isomorphic(&back, &c));
        assert_eq!(emit_ascii(&back).unwrap(), text);
        let raw = emit_ascii_raw(&c).unwrap();
        assert_eq!(raw, "8 bed,cfa,dgb,ahc,afh,bge,chf,deg");
        assert_eq!(emit_ascii_raw(&parse_ascii(&raw).unwrap()).unwrap(), raw);
    }

    #[test]
    fn ascii_errors() {
        let e = parse_ascii("5 bcde,aedc,abd,acbz,adb").unwrap_err();
        assert_eq!(e, parse_err(19, "unknown vertex 'z'"));
        assert!(matches!(parse_ascii("4 bcde,aedc,abd,acbe,adb"), Err(CodecError::Parse { .. })));
        assert!(matches!(parse_ascii("3 b,ac,a"), Err(CodecError::Parse { offset: 4, .. })));
        assert!(parse_ascii("nonsense").is_err());
    }

    #[test]
    fn planar_code_round_trip() {
        let maps = [cube(), octahedron()];
        let bytes = emit_planar_code(&maps).unwrap();
        let back: Vec<OrientedMap> = parse_planar_code(&bytes).collect::<Result<_, _>>().unwrap();
        assert_eq!(back.len(), 2);
        assert!(are_isomorphic(&back[0], &maps[0]) && are_isomorphic(&back[1], &maps[1]));
        assert_eq!(emit_planar_code(&back).unwrap(), bytes);
        // Header-less stream.
        let bare = &bytes[PLANAR_CODE_HEADER.len()..];
        assert_eq!(parse_planar_code(bare).count(), 2);
    }

    #[test]
    fn planar_code_errors() {
        let bytes = emit_planar_code(&[cube()]).unwrap();
        let cut = &bytes[..bytes.len() - 3];
        let errs: Vec<_> = parse_planar_code(cut).collect();
        assert_eq!(errs.len(), 1);
        assert!(matches!(errs[0], Err(CodecError::Parse { msg: ref m, .. }) if m == "truncated record"));
        let mut bad = bytes.clone();
        bad[PLANAR_CODE_HEADER.len() + 1] = 9;
        let e = parse_planar_code(&bad).next().unwrap().unwrap_err();
        assert_eq!(e, parse_err(PLANAR_CODE_HEADER.len() + 1, "neighbour 9 out of range 1..=8"));
    }

    #[test]
    fn sample_quotient_line() {
        let p = parse_quotient_ascii(SAMPLE_LINE).unwrap();
        assert_eq!(p.num_vertices(), 9);
        assert_eq!(p.cover().num_vertices(), 18);
        assert_eq!(p.euler_characteristic(), 1);
        let text = emit_quotient_ascii(&p).unwrap();
        let again = parse_quotient_ascii(&text).unwrap();
        assert_eq!(canonical_code_projective(&again), canonical_code_projective(&p));
        assert_eq!(emit_quotient_ascii(&again).unwrap(), text);
    }

    #[test]
    fn cube_quotient_line() {
        let c = cube();
        let p = quotient(&c, &find_quotient_involutions(&c)[0]).unwrap();
        let text = emit_quotient_ascii(&p).unwrap();
        assert!(text.starts_with("4 "));
        let back = parse_quotient_ascii(&text).unwrap();
        assert_eq!(canonical_code(back.cover()), canonical_code(&c));
    }

    #[test]
    fn quotient_ascii_rejects_inconsistent_involution() {
        // a's image A adjacent to a: the deck fixes an edge.
        assert!(parse_quotient_ascii("2 bAB,aBA").is_err());
        assert!(matches!(parse_quotient_ascii("2 bq,a"), Err(CodecError::Parse { offset: 3, .. })));
    }

    #[test]
    fn count_csv() {
        let rows = [
            CountRow { n: 3, n_check: 4, qbar: 1, qbar_bip: 0, q_sphere: Some(1) },
            CountRow { n: 4, n_check: 5, qbar: 0, qbar_bip: 0, q_sphere: None },
        ];
        assert_eq!(emit_count_csv(&rows), "n,n_check,qbar,qbar_bip,qQ\n3,4,1,0,1\n4,5,0,0,\n");
        assert_eq!(emit_count_csv(&[]), "n,n_check,qbar,qbar_bip,qQ\n");
    }

    proptest! {
        #[test]
        fn random_maps_round_trip_planar_code(seed in any::<u64>()) {
            let m = crate::moves::random_q_member(30, seed);
            let bytes = emit_planar_code([&m]).unwrap();
            let back = parse_planar_code(&bytes).next().unwrap().unwrap();
            prop_assert_eq!(canonical_code(&back), canonical_code(&m));
            prop_assert_eq!(emit_planar_code([&back]).unwrap(), bytes);
        }

        #[test]
        fn random_maps_round_trip_ascii(seed in any::<u64>()) {
            let m = crate::moves::random_q_member(26, seed);
            let text = emit_ascii(&m).unwrap();
            let back = parse_ascii(&text).unwrap();
            prop_assert_eq!(canonical_code(&back), canonical_code(&m));
            prop_assert_eq!(emit_ascii(&back).unwrap(), text);
        }
    }
}
