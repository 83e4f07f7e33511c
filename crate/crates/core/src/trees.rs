//! Finite windows of the horocyclic model: a (q+1)-regular tree carrying an
//! integer height with one distinguished descending end. A vertex stores its
//! level and the digit word read downward from just below the level; the
//! all-zero word is the standard apartment. Each vertex has one lower
//! neighbor (drop the top digit) and q upper neighbors (prepend a digit).

use crate::rat::{self, Rat};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

pub const DEFAULT_VERTEX_CAP: u64 = 2_000_000;

#[derive(Debug, Error)]
pub enum TreeError {
    #[error("branching q must be >= 2, got {0}")]
    SmallQ(u32),
    #[error("window [{0}, {1}] is degenerate")]
    BadWindow(i64, i64),
    #[error("seed at level {seed} outside window [{lo}, {hi}]")]
    SeedOutside { seed: i64, lo: i64, hi: i64 },
    #[error("window too large: {count} vertices exceed the cap {cap}")]
    TooLarge { count: u64, cap: u64 },
    #[error("target level {target} above start level {start}")]
    TargetAbove { target: i64, start: i64 },
    #[error("vertex not in this truncation")]
    UnknownVertex,
}

/// Branching and height scaling of one tree factor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeParams {
    pub q: u32,
    /// Rational height scale (the place's degree weight), as "num/den".
    pub weight: String,
    /// Rational height offset added to every vertex height, as "num/den".
    pub offset: String,
    pub label: String,
}

impl TreeParams {
    pub fn new(q: u32, label: &str) -> Result<TreeParams, TreeError> {
        if q < 2 {
            return Err(TreeError::SmallQ(q));
        }
        Ok(TreeParams {
            q,
            weight: "1".into(),
            offset: "0".into(),
            label: label.to_string(),
        })
    }

    pub fn with_weight(mut self, w: Rat) -> TreeParams {
        self.weight = rat::format_rat(&w);
        self
    }

    pub fn with_offset(mut self, o: Rat) -> TreeParams {
        self.offset = rat::format_rat(&o);
        self
    }

    pub fn weight_rat(&self) -> Rat {
        rat::parse_rat(&self.weight).expect("stored rational")
    }

    pub fn offset_rat(&self) -> Rat {
        rat::parse_rat(&self.offset).expect("stored rational")
    }
}

/// A vertex of the horocyclic model: level plus canonical digit word
/// `(d_{level-1}, d_{level-2}, ...)`, deep zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HVertex {
    pub level: i64,
    pub digits: Vec<u32>,
}

impl HVertex {
    /// The standard-apartment vertex at a level (empty digit word).
    pub fn apartment(level: i64) -> HVertex {
        HVertex {
            level,
            digits: vec![],
        }
    }

    pub fn new(level: i64, mut digits: Vec<u32>) -> HVertex {
        while digits.last() == Some(&0) {
            digits.pop();
        }
        HVertex { level, digits }
    }

    pub fn is_canonical(&self) -> bool {
        self.digits.last() != Some(&0)
    }

    /// Digit at absolute position `pos` (position `level - 1` is the top).
    pub fn digit_at(&self, pos: i64) -> u32 {
        let top = self.level - 1;
        if pos > top {
            return 0;
        }
        let idx = (top - pos) as usize;
        self.digits.get(idx).copied().unwrap_or(0)
    }

    pub fn lower_neighbor(&self) -> HVertex {
        let digits = if self.digits.is_empty() {
            vec![]
        } else {
            self.digits[1..].to_vec()
        };
        HVertex::new(self.level - 1, digits)
    }

    pub fn upper_neighbor(&self, digit: u32) -> HVertex {
        let mut digits = Vec::with_capacity(self.digits.len() + 1);
        digits.push(digit);
        digits.extend_from_slice(&self.digits);
        HVertex::new(self.level + 1, digits)
    }

    /// Ancestor at the given level (repeated lower neighbor).
    pub fn ancestor_at(&self, level: i64) -> HVertex {
        assert!(level <= self.level);
        let drop = (self.level - level) as usize;
        let digits = if drop >= self.digits.len() {
            vec![]
        } else {
            self.digits[drop..].to_vec()
        };
        HVertex::new(level, digits)
    }

    pub fn on_apartment(&self) -> bool {
        self.digits.is_empty()
    }
}

/// A finite window of the tree: the full q-ary subtree above the seed's
/// ancestor at the window bottom.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeTruncation {
    pub params: TreeParams,
    pub window: (i64, i64),
    pub seed: HVertex,
    pub vertices: Vec<HVertex>,
    /// (lower, upper) index pairs.
    pub edges: Vec<(u32, u32)>,
    #[serde(skip)]
    index: BTreeMap<HVertex, u32>,
}

/// Deterministic vertex order: level by level, parents before children,
/// digits ascending.
pub fn build_truncation(
    params: &TreeParams,
    window: (i64, i64),
    seed: &HVertex,
) -> Result<TreeTruncation, TreeError> {
    build_truncation_capped(params, window, seed, DEFAULT_VERTEX_CAP)
}

pub fn build_truncation_capped(
    params: &TreeParams,
    window: (i64, i64),
    seed: &HVertex,
    cap: u64,
) -> Result<TreeTruncation, TreeError> {
    let (lo, hi) = window;
    if lo > hi {
        return Err(TreeError::BadWindow(lo, hi));
    }
    if seed.level < lo || seed.level > hi {
        return Err(TreeError::SeedOutside {
            seed: seed.level,
            lo,
            hi,
        });
    }
    let levels = (hi - lo) as u32;
    let q = params.q as u64;
    let mut count: u64 = 0;
    let mut pow: u64 = 1;
    for _ in 0..=levels {
        count = count.saturating_add(pow);
        pow = pow.saturating_mul(q);
        if count > cap {
            return Err(TreeError::TooLarge { count, cap });
        }
    }
    let root = seed.ancestor_at(lo);
    let mut vertices: Vec<HVertex> = vec![root.clone()];
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut frontier: Vec<u32> = vec![0];
    for _ in 0..levels {
        let mut next = Vec::with_capacity(frontier.len() * params.q as usize);
        for &vi in &frontier {
            let v = vertices[vi as usize].clone();
            for d in 0..params.q {
                let u = v.upper_neighbor(d);
                let ui = vertices.len() as u32;
                vertices.push(u);
                edges.push((vi, ui));
                next.push(ui);
            }
        }
        frontier = next;
    }
    let index: BTreeMap<HVertex, u32> = vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v.clone(), i as u32))
        .collect();
    Ok(TreeTruncation {
        params: params.clone(),
        window,
        seed: seed.clone(),
        vertices,
        edges,
        index,
    })
}

impl TreeTruncation {
    pub fn vertex_index(&self, v: &HVertex) -> Option<u32> {
        self.index.get(v).copied()
    }

    pub fn contains(&self, v: &HVertex) -> bool {
        self.index.contains_key(v)
    }

    /// Rebuild the lookup index (after deserialization).
    pub fn reindex(&mut self) {
        self.index = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i as u32))
            .collect();
    }

    /// Weighted height of a vertex: `weight * level + offset`.
    pub fn height(&self, v: &HVertex) -> Rat {
        self.params.weight_rat() * rat::rat(v.level) + self.params.offset_rat()
    }

    pub fn height_of_level(&self, level: i64) -> Rat {
        self.params.weight_rat() * rat::rat(level) + self.params.offset_rat()
    }

    /// The unique descending vertex path from `v` down to `target_level`.
    pub fn downhill_flow(&self, v: &HVertex, target_level: i64) -> Result<Vec<HVertex>, TreeError> {
        if target_level > v.level {
            return Err(TreeError::TargetAbove {
                target: target_level,
                start: v.level,
            });
        }
        if !self.contains(v) {
            return Err(TreeError::UnknownVertex);
        }
        let mut path = vec![v.clone()];
        let mut cur = v.clone();
        while cur.level > target_level {
            cur = cur.lower_neighbor();
            path.push(cur.clone());
        }
        Ok(path)
    }

    /// Descending and ascending neighbor sets present in the window, plus a
    /// flag telling whether the window cut them short.
    pub fn links(&self, v: &HVertex) -> Result<LinkReport, TreeError> {
        if !self.contains(v) {
            return Err(TreeError::UnknownVertex);
        }
        let (lo, hi) = self.window;
        let descending: Vec<HVertex> = if v.level > lo {
            vec![v.lower_neighbor()]
        } else {
            vec![]
        };
        let ascending: Vec<HVertex> = if v.level < hi {
            (0..self.params.q).map(|d| v.upper_neighbor(d)).collect()
        } else {
            vec![]
        };
        let partial = v.level == lo || v.level == hi;
        Ok(LinkReport {
            descending,
            ascending,
            partial,
        })
    }

    pub fn to_json_doc(&self) -> TreeDoc {
        TreeDoc {
            q: self.params.q,
            weight: self.params.weight.clone(),
            offset: self.params.offset.clone(),
            window: self.window,
            vertices: self
                .vertices
                .iter()
                .map(|v| VertexDoc {
                    height: v.level,
                    digits: v.digits.clone(),
                })
                .collect(),
            edges: self.edges.iter().map(|&(a, b)| vec![a, b]).collect(),
        }
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph tree {\n  rankdir=BT;\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(
                s,
                "  v{} [label=\"{}:{}\"];",
                i,
                v.level,
                v.digits
                    .iter()
                    .map(|d| d.to_string())
                    .collect::<Vec<_>>()
                    .join("")
            );
        }
        for (a, b) in &self.edges {
            let _ = writeln!(s, "  v{a} -- v{b};");
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Debug, Clone)]
pub struct LinkReport {
    pub descending: Vec<HVertex>,
    pub ascending: Vec<HVertex>,
    pub partial: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TreeDoc {
    pub q: u32,
    pub weight: String,
    pub offset: String,
    pub window: (i64, i64),
    pub vertices: Vec<VertexDoc>,
    pub edges: Vec<Vec<u32>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct VertexDoc {
    pub height: i64,
    pub digits: Vec<u32>,
}

/// Weighted height image sanity: all vertex heights lie in `weight * Z + offset`.
pub fn heights_are_discrete(t: &TreeTruncation) -> bool {
    let w = t.params.weight_rat();
    let o = t.params.offset_rat();
    t.vertices.iter().all(|v| {
        let h = t.height(v);
        let k = (h - &o) / &w;
        k.denom().is_one() || (k.numer().is_zero())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn counts_geometric() {
        let p = TreeParams::new(2, "t").unwrap();
        let t = build_truncation(&p, (0, 3), &HVertex::apartment(0)).unwrap();
        assert_eq!(t.vertices.len(), 15);
        assert_eq!(t.edges.len(), 14);

        let p3 = TreeParams::new(3, "t").unwrap();
        let t3 = build_truncation(&p3, (0, 2), &HVertex::apartment(0)).unwrap();
        assert_eq!(t3.vertices.len(), 13);

        let t0 = build_truncation(&p, (0, 0), &HVertex::apartment(0)).unwrap();
        assert_eq!(t0.vertices.len(), 1);
        assert_eq!(t0.edges.len(), 0);
    }

    #[test]
    fn seed_above_bottom_is_rerooted() {
        let p = TreeParams::new(2, "t").unwrap();
        let seed = HVertex::apartment(1);
        let t = build_truncation(&p, (0, 2), &seed).unwrap();
        assert_eq!(t.vertices.len(), 7);
        assert!(t.contains(&HVertex::apartment(0)));
    }

    #[test]
    fn cap_rejects_large_windows() {
        let p = TreeParams::new(2, "t").unwrap();
        let e = build_truncation_capped(&p, (0, 30), &HVertex::apartment(0), 1000);
        assert!(matches!(e, Err(TreeError::TooLarge { .. })));
    }

    #[test]
    fn canonical_form_and_neighbors() {
        let v = HVertex::new(2, vec![1, 0]);
        assert_eq!(v.digits, vec![1]);
        assert!(v.is_canonical());
        let low = v.lower_neighbor();
        assert_eq!(low, HVertex::apartment(1));
        let up = v.upper_neighbor(0);
        assert_eq!(up, HVertex::new(3, vec![0, 1]));
        assert_eq!(up.lower_neighbor(), v);
        assert_eq!(v.digit_at(1), 1);
        assert_eq!(v.digit_at(0), 0);
    }

    #[test]
    fn heights_weighted() {
        let p = TreeParams::new(2, "t").unwrap().with_weight(rat(2));
        let t = build_truncation(&p, (0, 3), &HVertex::apartment(0)).unwrap();
        let v = HVertex::apartment(3);
        assert_eq!(t.height(&v), rat(6));
        let lower = v.lower_neighbor();
        assert_eq!(t.height(&lower), rat(4));
        assert!(heights_are_discrete(&t));
        // per-tree rational offset shifts every height
        let po = TreeParams::new(2, "t").unwrap().with_offset(crate::rat::ratio(1, 2));
        let to = build_truncation(&po, (0, 2), &HVertex::apartment(0)).unwrap();
        assert_eq!(to.height(&HVertex::apartment(2)), crate::rat::ratio(5, 2));
        assert!(heights_are_discrete(&to));
    }

    #[test]
    fn flows_merge_at_common_prefix() {
        let p = TreeParams::new(2, "t").unwrap();
        let t = build_truncation(&p, (0, 5), &HVertex::apartment(0)).unwrap();
        // two vertices at level 5 agreeing below level 2
        let a = HVertex::new(5, vec![1, 0, 0, 1, 1]);
        let b = HVertex::new(5, vec![0, 1, 1, 1, 1]);
        assert_eq!(a.ancestor_at(2), b.ancestor_at(2));
        let fa = t.downhill_flow(&a, 2).unwrap();
        let fb = t.downhill_flow(&b, 2).unwrap();
        assert_eq!(fa.last(), fb.last());
        assert_eq!(fa.len(), 4);
        // identity flow
        let v = HVertex::apartment(2);
        assert_eq!(t.downhill_flow(&v, 2).unwrap(), vec![v.clone()]);
        assert!(t.downhill_flow(&v, 3).is_err());
        // consecutive heights decrease by one level
        for w in fa.windows(2) {
            assert_eq!(w[0].level - 1, w[1].level);
        }
    }

    #[test]
    fn links_interior_and_boundary() {
        let p = TreeParams::new(5, "t").unwrap();
        let t = build_truncation(&p, (0, 2), &HVertex::apartment(0)).unwrap();
        let mid = HVertex::apartment(1);
        let l = t.links(&mid).unwrap();
        assert_eq!(l.descending.len(), 1);
        assert_eq!(l.ascending.len(), 5);
        assert!(!l.partial);
        let top = HVertex::apartment(2);
        let lt = t.links(&top).unwrap();
        assert!(lt.partial);
        assert!(lt.ascending.is_empty());
    }

    #[test]
    fn unique_descending_end_exhaustive() {
        let p = TreeParams::new(2, "t").unwrap();
        let t = build_truncation(&p, (0, 4), &HVertex::apartment(0)).unwrap();
        // any two vertices flow together at their common ancestor level
        for a in &t.vertices {
            for b in &t.vertices {
                let mut la = a.clone();
                let mut lb = b.clone();
                let low = la.level.min(lb.level);
                la = la.ancestor_at(low);
                lb = lb.ancestor_at(low);
                let mut lvl = low;
                while la != lb {
                    la = la.lower_neighbor();
                    lb = lb.lower_neighbor();
                    lvl -= 1;
                }
                assert!(lvl >= 0, "flows must merge inside the window");
            }
        }
    }

    mod prop {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn canonical_round_trip(level in -8i64..8, digits in proptest::collection::vec(0u32..3, 0..6)) {
                let v = HVertex::new(level, digits);
                prop_assert!(v.is_canonical());
                // encode through the digit positions and rebuild
                let rebuilt: Vec<u32> = (0..v.digits.len())
                    .map(|i| v.digit_at(level - 1 - i as i64))
                    .collect();
                prop_assert_eq!(HVertex::new(level, rebuilt), v);
            }

            #[test]
            fn lower_then_upper_is_identity(level in -5i64..5, digits in proptest::collection::vec(0u32..4, 0..5)) {
                let v = HVertex::new(level, digits);
                let top = v.digit_at(level - 1);
                let down = v.lower_neighbor();
                prop_assert_eq!(down.upper_neighbor(top), v);
            }
        }
    }

    #[test]
    fn serialization_round_trip() {
        let p = TreeParams::new(2, "t").unwrap();
        let t = build_truncation(&p, (0, 2), &HVertex::apartment(0)).unwrap();
        let doc = t.to_json_doc();
        let s = serde_json::to_string(&doc).unwrap();
        let back: TreeDoc = serde_json::from_str(&s).unwrap();
        assert_eq!(back.vertices.len(), t.vertices.len());
        assert_eq!(back.edges.len(), t.edges.len());
        let dot = t.to_dot();
        assert!(dot.contains("graph tree"));
    }
}
