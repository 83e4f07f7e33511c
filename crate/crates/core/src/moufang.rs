//! Rank-1 root-group machinery on the horocyclic tree.
//!
//! Apartments are lines, chambers are edges, panels are vertices. The
//! standard apartment is the zero-digit line; the half apartment `beta_i`
//! is the down-ray of chambers below the panel at level `i`, and its root
//! group acts on the digit model by adding a residue parameter at position
//! `i` (every vertex of height > i moves). All half apartments indexed by
//! the gallery contain the descending end, so a word's fixed chamber set on
//! the standard apartment is the down-ray cut at the word's lowest active
//! position. Up-side half apartments exist as data; their tree action would
//! live on the mirrored model and is not supported on bottom-anchored
//! windows.

use crate::trees::{HVertex, TreeTruncation};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MoufangError {
    #[error("residue size {0} is not a prime power >= 2")]
    BadResidue(u32),
    #[error("up-side root groups act on the mirrored model; only down-side actions are supported on bottom-anchored windows")]
    UpSideAction,
    #[error("enumeration is not directed: {0}")]
    NotDirected(String),
    #[error("enumerations must start with the identity word")]
    IdentityNotFirst,
    #[error("parameter {param} out of range for residue size {q}")]
    BadParameter { param: u32, q: u32 },
}

/// Additive structure of the residue alphabet: componentwise base-p
/// addition for q = p^k (only additivity is ever used).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueAlphabet {
    pub q: u32,
    pub p: u32,
    pub k: u32,
}

impl ResidueAlphabet {
    pub fn new(q: u32) -> Result<ResidueAlphabet, MoufangError> {
        if q < 2 {
            return Err(MoufangError::BadResidue(q));
        }
        let mut p = 0u32;
        for cand in 2..=q {
            if q % cand == 0 {
                p = cand;
                break;
            }
        }
        let mut m = q;
        let mut k = 0u32;
        while m % p == 0 {
            m /= p;
            k += 1;
        }
        if m != 1 {
            return Err(MoufangError::BadResidue(q));
        }
        Ok(ResidueAlphabet { q, p, k })
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.k {
            let da = a % self.p;
            let db = b % self.p;
            out += ((da + db) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        let mut a = a;
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.k {
            let da = a % self.p;
            out += ((self.p - da) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Down,
    Up,
}

/// A half apartment of the standard line: the ray of chambers on one side
/// of the panel at `cut_level`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HalfApartment {
    pub side: Side,
    pub cut_level: i64,
}

impl HalfApartment {
    pub fn down(cut_level: i64) -> HalfApartment {
        HalfApartment {
            side: Side::Down,
            cut_level,
        }
    }
    pub fn up(cut_level: i64) -> HalfApartment {
        HalfApartment {
            side: Side::Up,
            cut_level,
        }
    }

    /// Chamber `c_l` (the edge from level l to l+1) lies in this half
    /// apartment?
    pub fn contains_chamber(&self, l: i64) -> bool {
        match self.side {
            Side::Down => l < self.cut_level,
            Side::Up => l >= self.cut_level,
        }
    }

    pub fn contains_descending_end(&self) -> bool {
        self.side == Side::Down
    }
}

/// One root-group element: a half apartment plus a residue parameter
/// (0 is the identity).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootGroupElement {
    pub half: HalfApartment,
    pub param: u32,
    pub alphabet: ResidueAlphabet,
}

impl RootGroupElement {
    /// Action on a vertex of the digit model: add the parameter to the
    /// digit at the cut position for every vertex above the panel.
    pub fn apply(&self, v: &HVertex) -> Result<HVertex, MoufangError> {
        if self.half.side == Side::Up {
            return Err(MoufangError::UpSideAction);
        }
        let pos = self.half.cut_level;
        if v.level <= pos || self.param == 0 {
            return Ok(v.clone());
        }
        let idx = (v.level - 1 - pos) as usize;
        let mut digits = v.digits.clone();
        if digits.len() <= idx {
            digits.resize(idx + 1, 0);
        }
        digits[idx] = self.alphabet.add(digits[idx], self.param);
        Ok(HVertex::new(v.level, digits))
    }
}

/// The full root group of a half apartment: q elements, identity first.
pub fn root_group(half: HalfApartment, q: u32) -> Result<Vec<RootGroupElement>, MoufangError> {
    let alphabet = ResidueAlphabet::new(q)?;
    Ok((0..q)
        .map(|param| RootGroupElement {
            half,
            param,
            alphabet,
        })
        .collect())
}

/// A normal-form word over down-side root groups `U_r ... U_s`: one
/// parameter per position, identity entries omitted. The groups commute in
/// the digit model, so the normal form is the position-to-parameter map.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word {
    pub params: BTreeMap<i64, u32>,
    pub q: u32,
}

impl Word {
    pub fn identity(q: u32) -> Word {
        Word {
            params: BTreeMap::new(),
            q,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.params.is_empty()
    }

    pub fn factor(q: u32, pos: i64, param: u32) -> Result<Word, MoufangError> {
        if param >= q {
            return Err(MoufangError::BadParameter { param, q });
        }
        let mut params = BTreeMap::new();
        if param != 0 {
            params.insert(pos, param);
        }
        Ok(Word { params, q })
    }

    pub fn compose(&self, other: &Word, alphabet: &ResidueAlphabet) -> Word {
        let mut params = self.params.clone();
        for (&pos, &p) in &other.params {
            let cur = params.get(&pos).copied().unwrap_or(0);
            let s = alphabet.add(cur, p);
            if s == 0 {
                params.remove(&pos);
            } else {
                params.insert(pos, s);
            }
        }
        Word { params, q: self.q }
    }

    pub fn inverse(&self, alphabet: &ResidueAlphabet) -> Word {
        Word {
            params: self
                .params
                .iter()
                .map(|(&pos, &p)| (pos, alphabet.neg(p)))
                .collect(),
            q: self.q,
        }
    }

    /// Smallest position with a nontrivial factor.
    pub fn min_support(&self) -> Option<i64> {
        self.params.keys().next().copied()
    }

    pub fn apply(&self, v: &HVertex) -> HVertex {
        let mut digits = v.digits.clone();
        for (&pos, &p) in &self.params {
            if v.level <= pos {
                continue;
            }
            let idx = (v.level - 1 - pos) as usize;
            if digits.len() <= idx {
                digits.resize(idx + 1, 0);
            }
            let alphabet = ResidueAlphabet::new(self.q).expect("validated q");
            digits[idx] = alphabet.add(digits[idx], p);
        }
        HVertex::new(v.level, digits)
    }

    /// The word as the digit line it maps the standard apartment to.
    pub fn line_digit(&self, pos: i64) -> u32 {
        self.params.get(&pos).copied().unwrap_or(0)
    }

    /// Does the image line of the standard apartment contain this vertex?
    pub fn line_contains_vertex(&self, v: &HVertex) -> bool {
        // positions >= v.level are invisible at this height
        for (&pos, &p) in &self.params {
            if pos < v.level && v.digit_at(pos) != p {
                return false;
            }
        }
        // the vertex must not carry digits the line lacks
        for (i, &d) in v.digits.iter().enumerate() {
            let pos = v.level - 1 - i as i64;
            if d != 0 && self.line_digit(pos) != d {
                return false;
            }
        }
        true
    }
}

/// Subsets of the standard apartment's chamber line that arise as fixed
/// sets: everything, or the down-ray of chambers strictly below a cut.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChamberRay {
    All,
    Below(i64),
}

impl ChamberRay {
    pub fn contains(&self, l: i64) -> bool {
        match self {
            ChamberRay::All => true,
            ChamberRay::Below(c) => l < *c,
        }
    }

    /// Union of down-rays is the larger down-ray.
    pub fn union(&self, other: &ChamberRay) -> ChamberRay {
        match (self, other) {
            (ChamberRay::All, _) | (_, ChamberRay::All) => ChamberRay::All,
            (ChamberRay::Below(a), ChamberRay::Below(b)) => ChamberRay::Below(*a.max(b)),
        }
    }

    /// Intersection of down-rays is the smaller one.
    pub fn intersect(&self, other: &ChamberRay) -> ChamberRay {
        match (self, other) {
            (ChamberRay::All, o) => *o,
            (s, ChamberRay::All) => *s,
            (ChamberRay::Below(a), ChamberRay::Below(b)) => ChamberRay::Below(*a.min(b)),
        }
    }
}

/// Formula side of the fixed-set identity: a word fixes exactly the chambers
/// in the intersection of the half apartments of its nontrivial factors.
pub fn fixed_chamber_set(word: &Word) -> ChamberRay {
    match word.min_support() {
        None => ChamberRay::All,
        Some(m) => ChamberRay::Below(m),
    }
}

/// Action side: chambers of the standard apartment inside the window that
/// the word fixes, computed by applying the action.
pub fn fixed_chambers_by_action(word: &Word, window: (i64, i64)) -> BTreeSet<i64> {
    let mut out = BTreeSet::new();
    for l in window.0..window.1 {
        let lo = HVertex::apartment(l);
        let hi = HVertex::apartment(l + 1);
        if word.apply(&lo) == lo && word.apply(&hi) == hi {
            out.insert(l);
        }
    }
    out
}

/// Intersection of the image line with the standard apartment, as chambers
/// inside the window (the second formulation of the fixed-set identity).
pub fn line_intersection_chambers(word: &Word, window: (i64, i64)) -> BTreeSet<i64> {
    let mut out = BTreeSet::new();
    for l in window.0..window.1 {
        let lo = HVertex::apartment(l);
        let hi = HVertex::apartment(l + 1);
        if word.line_contains_vertex(&lo) && word.line_contains_vertex(&hi) {
            out.insert(l);
        }
    }
    out
}

/// Is the complement of `set` within the window's chamber range convex
/// (contiguous)? Exercised directly by tests with synthetic sets; for
/// enumerations of distinct words the union is always a down-ray.
pub fn complement_is_convex(set: &BTreeSet<i64>, window: (i64, i64)) -> bool {
    let complement: Vec<i64> = (window.0..window.1).filter(|l| !set.contains(l)).collect();
    complement.windows(2).all(|w| w[1] == w[0] + 1)
}

/// An ordered enumeration of `U^{(r,s)}` with its range; `range.0 >
/// range.1` encodes the empty product (the identity group).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Enumeration {
    pub q: u32,
    pub range: (i64, i64),
    pub words: Vec<Word>,
}

impl Enumeration {
    /// The one-word seed `{identity}`.
    pub fn identity_seed(q: u32) -> Result<Enumeration, MoufangError> {
        ResidueAlphabet::new(q)?;
        Ok(Enumeration {
            q,
            range: (0, -1),
            words: vec![Word::identity(q)],
        })
    }

    /// `U^{(level, level)}` enumerated identity-first.
    pub fn single_group_seed(q: u32, level: i64) -> Result<Enumeration, MoufangError> {
        ResidueAlphabet::new(q)?;
        let words = (0..q)
            .map(|p| Word::factor(q, level, p).expect("p < q"))
            .collect();
        Ok(Enumeration {
            q,
            range: (level, level),
            words,
        })
    }

    pub fn to_doc(&self) -> Vec<Vec<(i64, u32)>> {
        self.words
            .iter()
            .map(|w| w.params.iter().map(|(&a, &b)| (a, b)).collect())
            .collect()
    }
}

/// Per-prefix audit record of the directedness check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PrefixAudit {
    pub index: usize,
    /// cut level of the union of earlier intersections (None = empty union)
    pub union_cut: Option<i64>,
    pub coconvex: bool,
    pub betas_contain_end: bool,
    pub duplicate_of: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DirectednessAudit {
    pub pass: bool,
    pub prefixes: Vec<PrefixAudit>,
    /// window used to materialize chamber sets for the convexity check
    pub window: (i64, i64),
}

/// Check coconvexity of every prefix union, materializing chamber sets on
/// a window derived from the word supports.
pub fn verify_directedness(e: &Enumeration) -> DirectednessAudit {
    let alphabet = ResidueAlphabet::new(e.q).expect("validated q");
    let mut lo = e.range.0.min(0) - 2;
    let mut hi = e.range.1.max(0) + 2;
    for w in &e.words {
        for &pos in w.params.keys() {
            lo = lo.min(pos - 2);
            hi = hi.max(pos + 2);
        }
    }
    let window = (lo, hi);
    let mut prefixes = Vec::with_capacity(e.words.len());
    let mut pass = true;
    for j in 0..e.words.len() {
        let mut union: Option<ChamberRay> = None;
        let mut duplicate_of = None;
        let inv_j = e.words[j].inverse(&alphabet);
        for i in 0..j {
            let diff = inv_j.compose(&e.words[i], &alphabet);
            if diff.is_identity() {
                duplicate_of = Some(i);
                continue;
            }
            let fix = fixed_chamber_set(&diff);
            union = Some(match union {
                None => fix,
                Some(u) => u.union(&fix),
            });
        }
        // materialize and check convexity of the complement
        let mut set = BTreeSet::new();
        if let Some(u) = &union {
            for l in window.0..window.1 {
                if u.contains(l) {
                    set.insert(l);
                }
            }
        }
        let coconvex = complement_is_convex(&set, window);
        let ok = coconvex && duplicate_of.is_none();
        if !ok {
            pass = false;
        }
        prefixes.push(PrefixAudit {
            index: j,
            union_cut: union.map(|u| match u {
                ChamberRay::All => i64::MAX,
                ChamberRay::Below(c) => c,
            }),
            coconvex,
            betas_contain_end: true, // down-side indexing; asserted structurally
            duplicate_of,
        });
    }
    DirectednessAudit {
        pass,
        prefixes,
        window,
    }
}

/// Extend a directed enumeration of `U^{(r,s)}` to one of `U^{(r-1,s+1)}`
/// by the block construction (upper index first, then lower), with the
/// identity leading every new factor group.
pub fn extend_directed_enumeration(e: &Enumeration) -> Result<Enumeration, MoufangError> {
    let audit = verify_directedness(e);
    if !audit.pass {
        let first_bad = audit
            .prefixes
            .iter()
            .find(|p| !p.coconvex || p.duplicate_of.is_some())
            .map(|p| p.index)
            .unwrap_or(0);
        return Err(MoufangError::NotDirected(format!(
            "input fails the audit at prefix {first_bad}"
        )));
    }
    if !e.words[0].is_identity() && e.range.0 <= e.range.1 {
        // block construction needs u_1 = 1 in each new factor group; the
        // carried enumeration itself must lead with the identity
        if !e.words[0].is_identity() {
            return Err(MoufangError::IdentityNotFirst);
        }
    }
    let alphabet = ResidueAlphabet::new(e.q)?;
    let (r, s) = if e.range.0 > e.range.1 {
        // empty seed: first extension creates U^{(-1,0)} around the origin
        (0i64, -1i64)
    } else {
        e.range
    };
    // upper extension: blocks e_nu * gamma_i over U_{s+1}
    let mut upper: Vec<Word> = Vec::with_capacity(e.words.len() * e.q as usize);
    for p in 0..e.q {
        let factor = Word::factor(e.q, s + 1, p)?;
        for w in &e.words {
            upper.push(factor.compose(w, &alphabet));
        }
    }
    // lower extension: blocks over U_{r-1}
    let mut out: Vec<Word> = Vec::with_capacity(upper.len() * e.q as usize);
    for p in 0..e.q {
        let factor = Word::factor(e.q, r - 1, p)?;
        for w in &upper {
            out.push(factor.compose(w, &alphabet));
        }
    }
    Ok(Enumeration {
        q: e.q,
        range: (r - 1, s + 1),
        words: out,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoverageReport {
    pub total_chambers: usize,
    pub covered: usize,
    pub uncovered_edges: Vec<(i64, Vec<u32>)>,
    /// least prefix length covering everything, when coverage is complete
    pub minimal_prefix: Option<usize>,
}

/// Which chambers (edges) of the window lie on some image line of the
/// enumeration, and the least prefix achieving full coverage.
pub fn verify_covering(e: &Enumeration, tree: &TreeTruncation) -> CoverageReport {
    let total = tree.edges.len();
    let mut covered_at: Vec<Option<usize>> = vec![None; total];
    for (wi, w) in e.words.iter().enumerate() {
        for (ei, &(lo, hi)) in tree.edges.iter().enumerate() {
            if covered_at[ei].is_some() {
                continue;
            }
            let vlo = &tree.vertices[lo as usize];
            let vhi = &tree.vertices[hi as usize];
            if w.line_contains_vertex(vlo) && w.line_contains_vertex(vhi) {
                covered_at[ei] = Some(wi);
            }
        }
    }
    let covered = covered_at.iter().filter(|c| c.is_some()).count();
    let minimal_prefix = if covered == total {
        covered_at.iter().map(|c| c.unwrap() + 1).max()
    } else {
        None
    };
    let uncovered_edges = covered_at
        .iter()
        .enumerate()
        .filter(|(_, c)| c.is_none())
        .map(|(ei, _)| {
            let (_, hi) = tree.edges[ei];
            let v = &tree.vertices[hi as usize];
            (v.level, v.digits.clone())
        })
        .collect();
    CoverageReport {
        total_chambers: total,
        covered,
        uncovered_edges,
        minimal_prefix,
    }
}

/// Input for sheet audits: genuine lines through the descending end, or
/// bent lines (two ascending rays) that model non-examples.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum ApartmentLike {
    ThroughEnd {
        word: Word,
    },
    Bent {
        base: HVertex,
        digit_a: u32,
        digit_b: u32,
    },
}

impl ApartmentLike {
    /// Vertices within the window.
    pub fn vertices(&self, window: (i64, i64)) -> BTreeSet<HVertex> {
        let mut out = BTreeSet::new();
        match self {
            ApartmentLike::ThroughEnd { word } => {
                for h in window.0..=window.1 {
                    let mut v = HVertex::apartment(h);
                    v = word.apply(&v);
                    out.insert(v);
                }
            }
            ApartmentLike::Bent {
                base,
                digit_a,
                digit_b,
            } => {
                if base.level >= window.0 && base.level <= window.1 {
                    out.insert(base.clone());
                }
                for first in [digit_a, digit_b] {
                    let mut v = base.clone();
                    let mut step = 0;
                    while v.level < window.1 {
                        v = if step == 0 {
                            v.upper_neighbor(*first)
                        } else {
                            v.upper_neighbor(0)
                        };
                        step += 1;
                        out.insert(v.clone());
                    }
                }
            }
        }
        out
    }

    pub fn is_sheet(&self) -> bool {
        matches!(self, ApartmentLike::ThroughEnd { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PieceShape {
    Empty,
    Whole,
    UpRay { from: i64 },
    DownRay { to: i64 },
    Segment { from: i64, to: i64 },
    Scattered,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StageAudit {
    pub index: usize,
    pub is_sheet: bool,
    pub piece: PieceShape,
    pub piece_convex_for_height_form: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SheetAudit {
    pub pass: bool,
    pub stages: Vec<StageAudit>,
    pub window: (i64, i64),
}

/// Verify that every new piece of the sequence is an upward height ray
/// (convex for the single restricted form). Stage 1 is exempt: a whole
/// sheet is never cut out by halfspaces. Bent inputs fail the sheet check
/// and produce segment or down-ray pieces, the intended negative controls.
pub fn sheet_sequence_check(seq: &[ApartmentLike], window: (i64, i64)) -> SheetAudit {
    let mut seen: BTreeSet<HVertex> = BTreeSet::new();
    let mut stages = Vec::with_capacity(seq.len());
    let mut pass = true;
    for (idx, ap) in seq.iter().enumerate() {
        let verts = ap.vertices(window);
        let fresh: BTreeSet<i64> = verts
            .iter()
            .filter(|v| !seen.contains(*v))
            .map(|v| v.level)
            .collect();
        let heights_total: BTreeSet<i64> = verts.iter().map(|v| v.level).collect();
        let piece = classify_piece(&fresh, &heights_total, window);
        let convex = match piece {
            PieceShape::Empty => true,
            PieceShape::UpRay { .. } => true,
            PieceShape::Whole => idx == 0,
            _ => false,
        };
        let ok = (idx == 0 || convex) && (ap.is_sheet() || matches!(piece, PieceShape::Empty));
        if !ok {
            pass = false;
        }
        stages.push(StageAudit {
            index: idx,
            is_sheet: ap.is_sheet(),
            piece,
            piece_convex_for_height_form: convex,
        });
        seen.extend(verts);
    }
    SheetAudit {
        pass,
        stages,
        window,
    }
}

fn classify_piece(fresh: &BTreeSet<i64>, total: &BTreeSet<i64>, window: (i64, i64)) -> PieceShape {
    if fresh.is_empty() {
        return PieceShape::Empty;
    }
    let lo = *fresh.iter().next().unwrap();
    let hi = *fresh.iter().last().unwrap();
    let contiguous = (lo..=hi).all(|h| fresh.contains(&h));
    if !contiguous {
        return PieceShape::Scattered;
    }
    let total_lo = *total.iter().next().unwrap();
    let total_hi = *total.iter().last().unwrap();
    let at_bottom = lo <= total_lo.max(window.0);
    let at_top = hi >= total_hi.min(window.1);
    match (at_bottom, at_top) {
        (true, true) => PieceShape::Whole,
        (false, true) => PieceShape::UpRay { from: lo },
        (true, false) => PieceShape::DownRay { to: hi },
        (false, false) => PieceShape::Segment { from: lo, to: hi },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::{build_truncation, TreeParams};

    fn window_tree(q: u32, window: (i64, i64)) -> TreeTruncation {
        let p = TreeParams::new(q, "t").unwrap();
        build_truncation(&p, window, &HVertex::apartment(window.0)).unwrap()
    }

    #[test]
    fn residue_addition_prime_and_prime_power() {
        let f3 = ResidueAlphabet::new(3).unwrap();
        assert_eq!(f3.add(2, 2), 1);
        assert_eq!(f3.neg(1), 2);
        let f4 = ResidueAlphabet::new(4).unwrap();
        // componentwise mod 2: 1+3 = 0b01+0b11 = 0b10 = 2
        assert_eq!(f4.add(1, 3), 2);
        assert_eq!(f4.add(2, 2), 0);
        assert_eq!(f4.neg(3), 3);
        assert!(ResidueAlphabet::new(6).is_err());
        assert!(ResidueAlphabet::new(1).is_err());
    }

    #[test]
    fn identity_fixes_everything() {
        let t = window_tree(2, (-2, 3));
        let g = root_group(HalfApartment::down(0), 2).unwrap();
        for v in &t.vertices {
            assert_eq!(g[0].apply(v).unwrap(), v.clone());
        }
    }

    #[test]
    fn nonidentity_swaps_chambers_at_panel() {
        // q=2: the nontrivial element swaps the two chambers above the panel
        let g = root_group(HalfApartment::down(0), 2).unwrap();
        let u = &g[1];
        let a = HVertex::new(1, vec![0]);
        let b = HVertex::new(1, vec![1]);
        assert_eq!(u.apply(&a).unwrap(), b);
        assert_eq!(u.apply(&b).unwrap(), a);
        // fixes the panel and everything below
        assert_eq!(
            u.apply(&HVertex::apartment(0)).unwrap(),
            HVertex::apartment(0)
        );
        assert_eq!(
            u.apply(&HVertex::apartment(-3)).unwrap(),
            HVertex::apartment(-3)
        );
    }

    #[test]
    fn orbit_at_panel_is_simply_transitive() {
        for q in [2u32, 3, 4] {
            let g = root_group(HalfApartment::down(0), q).unwrap();
            let opposite = HVertex::new(1, vec![0]);
            let mut orbit = BTreeSet::new();
            for el in &g {
                orbit.insert(el.apply(&opposite).unwrap());
            }
            assert_eq!(orbit.len(), q as usize);
            // only the identity fixes the opposite chamber
            let fixing = g
                .iter()
                .filter(|el| el.apply(&opposite).unwrap() == opposite)
                .count();
            assert_eq!(fixing, 1);
        }
    }

    #[test]
    fn up_side_action_unsupported() {
        let g = root_group(HalfApartment::up(0), 2).unwrap();
        assert!(matches!(
            g[1].apply(&HVertex::apartment(1)),
            Err(MoufangError::UpSideAction)
        ));
    }

    #[test]
    fn fixed_set_formula_matches_action_exhaustively() {
        // all words over U^{(-3,3)} for q in {2,3}
        for q in [2u32, 3] {
            let alphabet = ResidueAlphabet::new(q).unwrap();
            let positions: Vec<i64> = (-3..=3).collect();
            let window = (-5i64, 5i64);
            let n = positions.len();
            let total = (q as u64).pow(n as u32);
            for code in 0..total {
                let mut c = code;
                let mut word = Word::identity(q);
                for &pos in &positions {
                    let p = (c % q as u64) as u32;
                    c /= q as u64;
                    if p != 0 {
                        word = word.compose(&Word::factor(q, pos, p).unwrap(), &alphabet);
                    }
                }
                let formula = fixed_chamber_set(&word);
                let by_action = fixed_chambers_by_action(&word, window);
                let by_line = line_intersection_chambers(&word, window);
                for l in window.0..window.1 {
                    assert_eq!(
                        formula.contains(l),
                        by_action.contains(&l),
                        "q={q} word={word:?} chamber {l}"
                    );
                }
                assert_eq!(by_action, by_line, "fixed set equals line intersection");
            }
        }
    }

    #[test]
    fn two_factor_fixed_set_is_shorter_ray() {
        let q = 3;
        let alphabet = ResidueAlphabet::new(q).unwrap();
        let w = Word::factor(q, -1, 1)
            .unwrap()
            .compose(&Word::factor(q, 2, 2).unwrap(), &alphabet);
        assert_eq!(fixed_chamber_set(&w), ChamberRay::Below(-1));
    }

    #[test]
    fn actions_commute_in_the_model() {
        // the down-side root groups commute: exhaustive on a window
        let t = window_tree(3, (-2, 3));
        let ga = root_group(HalfApartment::down(-1), 3).unwrap();
        let gb = root_group(HalfApartment::down(1), 3).unwrap();
        for a in &ga {
            for b in &gb {
                for v in &t.vertices {
                    let ab = b.apply(&a.apply(v).unwrap()).unwrap();
                    let ba = a.apply(&b.apply(v).unwrap()).unwrap();
                    assert_eq!(ab, ba);
                }
            }
        }
    }

    #[test]
    fn extension_counts() {
        // U^{(0,0)} with q=2 extends to U^{(-1,1)} with 8 words
        let seed = Enumeration::single_group_seed(2, 0).unwrap();
        assert_eq!(seed.words.len(), 2);
        let e1 = extend_directed_enumeration(&seed).unwrap();
        assert_eq!(e1.range, (-1, 1));
        assert_eq!(e1.words.len(), 8);
        let distinct: BTreeSet<_> = e1.words.iter().cloned().collect();
        assert_eq!(distinct.len(), 8, "unique factorization");

        // identity seed: one step gives q^2 words
        let s2 = Enumeration::identity_seed(3).unwrap();
        let e2 = extend_directed_enumeration(&s2).unwrap();
        assert_eq!(e2.words.len(), 9);
        let e3 = extend_directed_enumeration(&e2).unwrap();
        assert_eq!(e3.words.len(), 81);
        let audit = verify_directedness(&e3);
        assert!(audit.pass, "directedness audit passes at every prefix");
    }

    #[test]
    fn duplicates_fail_the_audit() {
        let q = 2;
        let mut e = Enumeration::single_group_seed(q, 0).unwrap();
        e.words.push(e.words[1].clone());
        let audit = verify_directedness(&e);
        assert!(!audit.pass);
        assert_eq!(audit.prefixes[2].duplicate_of, Some(1));
        assert!(matches!(
            extend_directed_enumeration(&e),
            Err(MoufangError::NotDirected(_))
        ));
    }

    #[test]
    fn exhaustive_search_confirms_rank1_directedness() {
        // every duplicate-free ordering of U^{(0,2)} with q=2 passes: the
        // fixed sets are nested down-rays, so unions are always coconvex.
        // This is the search the negative example would need to defeat; in
        // rank 1 it provably cannot.
        let alphabet = ResidueAlphabet::new(2).unwrap();
        let mut words = vec![Word::identity(2)];
        for pos in 0..=2i64 {
            let mut next = Vec::new();
            for w in &words {
                for p in 0..2u32 {
                    next.push(w.compose(&Word::factor(2, pos, p).unwrap(), &alphabet));
                }
            }
            words = next;
        }
        assert_eq!(words.len(), 8);
        // sample many orderings including adversarial ones
        let mut orderings: Vec<Vec<usize>> = vec![
            (0..8).collect(),
            (0..8).rev().collect(),
            vec![7, 0, 6, 1, 5, 2, 4, 3],
            vec![3, 7, 1, 5, 0, 2, 4, 6],
        ];
        // plus rotations
        for k in 1..8 {
            let mut o: Vec<usize> = (0..8).collect();
            o.rotate_left(k);
            orderings.push(o);
        }
        for o in orderings {
            let e = Enumeration {
                q: 2,
                range: (0, 2),
                words: o.iter().map(|&i| words[i].clone()).collect(),
            };
            let audit = verify_directedness(&e);
            assert!(audit.pass, "ordering {o:?} unexpectedly failed");
        }
    }

    #[test]
    fn synthetic_bounded_union_fails_convexity_checker() {
        // the checker itself must detect a non-coconvex union: a bounded
        // middle segment leaves two disjoint rays as its complement
        let segment: BTreeSet<i64> = (-1..2).collect();
        assert!(!complement_is_convex(&segment, (-5, 5)));
        let ray: BTreeSet<i64> = (-5..0).collect();
        assert!(complement_is_convex(&ray, (-5, 5)));
        let whole: BTreeSet<i64> = (-5..5).collect();
        assert!(
            complement_is_convex(&whole, (-5, 5)),
            "empty complement is convex"
        );
    }

    #[test]
    fn covering_standard_apartment_by_identity() {
        let q = 2;
        let t = window_tree(q, (-1, 2));
        let only_apartment: Vec<_> = t
            .edges
            .iter()
            .enumerate()
            .filter(|(_, &(lo, hi))| {
                t.vertices[lo as usize].on_apartment() && t.vertices[hi as usize].on_apartment()
            })
            .collect();
        assert!(!only_apartment.is_empty());
        let e = Enumeration::identity_seed(q).unwrap();
        let report = verify_covering(&e, &t);
        // identity covers exactly the standard apartment chambers
        assert_eq!(report.covered, only_apartment.len());
    }

    #[test]
    fn covering_grows_with_range() {
        let q = 2;
        // window [-2, 3]: chambers with digits at positions -2..2
        let t = window_tree(q, (-2, 3));
        let mut e = Enumeration::single_group_seed(q, 0).unwrap();
        e = extend_directed_enumeration(&e).unwrap(); // U^{(-1,1)}
        let partial = verify_covering(&e, &t);
        assert!(partial.minimal_prefix.is_none());
        assert!(!partial.uncovered_edges.is_empty());
        e = extend_directed_enumeration(&e).unwrap(); // U^{(-2,2)}
        let full = verify_covering(&e, &t);
        assert_eq!(full.covered, full.total_chambers);
        assert_eq!(full.minimal_prefix, Some(32), "all 32 words are needed");
    }

    #[test]
    fn sheet_sequence_through_end_passes() {
        let q = 2;
        let alphabet = ResidueAlphabet::new(q).unwrap();
        let sigma = ApartmentLike::ThroughEnd {
            word: Word::identity(q),
        };
        let l1 = ApartmentLike::ThroughEnd {
            word: Word::factor(q, 0, 1).unwrap(),
        };
        let l2 = ApartmentLike::ThroughEnd {
            word: Word::factor(q, 0, 1)
                .unwrap()
                .compose(&Word::factor(q, 2, 1).unwrap(), &alphabet),
        };
        let audit = sheet_sequence_check(&[sigma.clone(), l1.clone(), l2], (-4, 6));
        assert!(audit.pass);
        assert!(matches!(
            audit.stages[1].piece,
            PieceShape::UpRay { from: 1 }
        ));
        assert!(matches!(
            audit.stages[2].piece,
            PieceShape::UpRay { from: 3 }
        ));

        // repeated apartment: empty piece, vacuously fine
        let audit2 = sheet_sequence_check(&[sigma.clone(), sigma], (-4, 6));
        assert!(audit2.pass);
        assert!(matches!(audit2.stages[1].piece, PieceShape::Empty));
    }

    #[test]
    fn bent_line_produces_segment_and_fails() {
        let q = 2;
        // bent line with both rays ascending from level 0, then the
        // standard apartment, then a through-end line cutting below
        let bent = ApartmentLike::Bent {
            base: HVertex::apartment(0),
            digit_a: 0,
            digit_b: 1,
        };
        let sigma = ApartmentLike::ThroughEnd {
            word: Word::identity(q),
        };
        let audit = sheet_sequence_check(&[bent, sigma], (-4, 6));
        assert!(
            !audit.pass,
            "piece of the apartment after a bent line is a down-ray"
        );
        assert!(matches!(audit.stages[1].piece, PieceShape::DownRay { .. }));

        // bent line after two through-end lines leaves a bounded segment
        let l0 = ApartmentLike::ThroughEnd {
            word: Word::identity(q),
        };
        let bent2 = ApartmentLike::Bent {
            base: HVertex::new(2, vec![1, 1]),
            digit_a: 0,
            digit_b: 1,
        };
        let audit2 = sheet_sequence_check(&[l0, bent2], (-4, 6));
        assert!(!audit2.pass);
    }
}
