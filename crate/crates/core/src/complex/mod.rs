//! Products of tree windows sliced by height constraints, as polytopal
//! cell complexes with exact integer homology.
//!
//! A product cube is a tuple of factor cells (vertex or edge per tree).
//! The summed weighted height is affine on each cube; slicing levels cut
//! every cube into `Gap` pieces (between consecutive levels) and `At`
//! pieces (on a level). Boundary matrices always come from the barycentric
//! subdivision of the face poset, so orientation questions reduce to flag
//! combinatorics.

mod homology;
mod retract;
mod subdivision;
mod witness;

pub use homology::{
    build_ladder, degree0_induced_map, essential_triviality, inclusion_induced_map, rational_betti,
    reduced_homology, reduced_homology_with, translate_chain, Degree1Homology, DirectedSystem,
    EssentialTrivialityReport, HomologyOptions, HomologySummary,
};
pub use retract::{retract_transfer, RetractDiagram, RetractReport};
pub use subdivision::{Chain, Subdivision};
pub use witness::{witness_class_in_slab, witness_shrink_chain, witness_sphere, WitnessSphere};

use crate::rat::{self, Rat};
use crate::trees::{TreeError, TreeTruncation};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("factor {0} has negative weight; heights must be nondecreasing along edges")]
    NegativeWeight(usize),
    #[error("empty tree list")]
    NoFactors,
    #[error("constraint interval [{0}, {1}] is inverted or malformed")]
    BadInterval(String, String),
    #[error("insufficient slack: cell {cell} of factor {factor} reaches level {top} with window top {window_top} and slack {slack}")]
    InsufficientSlack {
        factor: usize,
        cell: String,
        top: i64,
        window_top: i64,
        slack: i64,
    },
    #[error("slabs are not family-compatible (same trees and slicing levels required); build them with build_slab_family")]
    IncompatibleSlabs,
    #[error("smaller slab's constraint range is not contained in the larger one's")]
    NotNested,
    #[error("induced maps are implemented for degrees 0 and 1; degree {0} requested")]
    UnsupportedDegree(usize),
    #[error("witness radius {radius} does not fit factor {factor}: needs window top >= {needed}, window top is {window_top}")]
    WitnessDoesNotFit {
        factor: usize,
        radius: String,
        needed: i64,
        window_top: i64,
    },
    #[error("witness base point must sit strictly below the sphere level")]
    WitnessBaseTooHigh,
    #[error("operation requires a level-set slab (single-level constraint)")]
    NotLevelSet,
    #[error("witness cell {0} is absent from the target complex")]
    MissingCell(String),
    #[error("kernel slabs model rank-1 systems only; rank {0} requested")]
    RankNotOne(usize),
    #[error("retract diagram does not commute at cell {0}")]
    NonCommuting(String),
    #[error("retract identity fails at cell {0}")]
    BadSection(String),
    #[error("directed system needs at least 2 stages, got {0}")]
    TooFewStages(usize),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// One factor of a product cube: a vertex or an edge of that factor's tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FactorCell {
    V(u32),
    E(u32),
}

impl FactorCell {
    pub fn is_edge(&self) -> bool {
        matches!(self, FactorCell::E(_))
    }
}

/// Which piece of the sliced cube: strictly between two consecutive levels,
/// or exactly on a level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CellTag {
    Gap(u16),
    At(u16),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SlabCell {
    pub cube: Vec<FactorCell>,
    pub tag: CellTag,
}

impl SlabCell {
    pub fn describe(&self) -> String {
        let parts: Vec<String> = self
            .cube
            .iter()
            .map(|f| match f {
                FactorCell::V(i) => format!("v{i}"),
                FactorCell::E(i) => format!("e{i}"),
            })
            .collect();
        let tag = match self.tag {
            CellTag::Gap(g) => format!("gap{g}"),
            CellTag::At(l) => format!("at{l}"),
        };
        format!("({}; {})", parts.join(","), tag)
    }
}

/// Height constraint defining a slab.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Constraint {
    Interval(String, String),
    Level(String),
    /// `{ h >= t }`, clipped at the top of the truncations.
    AtLeast(String),
}

impl Constraint {
    pub fn interval(a: Rat, b: Rat) -> Constraint {
        Constraint::Interval(rat::format_rat(&a), rat::format_rat(&b))
    }
    pub fn level(l: Rat) -> Constraint {
        Constraint::Level(rat::format_rat(&l))
    }
    pub fn at_least(t: Rat) -> Constraint {
        Constraint::AtLeast(rat::format_rat(&t))
    }

    fn bounds(&self, global_top: &Rat) -> Result<(Rat, Rat), ComplexError> {
        match self {
            Constraint::Interval(a, b) => {
                let av = rat::parse_rat(a)
                    .map_err(|_| ComplexError::BadInterval(a.clone(), b.clone()))?;
                let bv = rat::parse_rat(b)
                    .map_err(|_| ComplexError::BadInterval(a.clone(), b.clone()))?;
                if av > bv {
                    return Err(ComplexError::BadInterval(a.clone(), b.clone()));
                }
                Ok((av, bv))
            }
            Constraint::Level(l) => {
                let lv = rat::parse_rat(l)
                    .map_err(|_| ComplexError::BadInterval(l.clone(), l.clone()))?;
                Ok((lv.clone(), lv))
            }
            Constraint::AtLeast(t) => {
                let tv = rat::parse_rat(t)
                    .map_err(|_| ComplexError::BadInterval(t.clone(), "inf".into()))?;
                Ok((tv, global_top.clone()))
            }
        }
    }
}

/// The sliced product complex over a constraint window.
#[derive(Debug, Clone)]
pub struct SlabComplex {
    pub trees: Arc<Vec<TreeTruncation>>,
    pub weights: Vec<Rat>,
    pub offsets: Vec<Rat>,
    /// All slicing levels, sorted; shared across a family.
    pub levels: Arc<Vec<Rat>>,
    /// Indices into `levels` delimiting the active range `[a, b]`.
    pub active: (usize, usize),
    pub cells: Vec<SlabCell>,
    pub dims: Vec<u8>,
    pub index: HashMap<SlabCell, u32>,
    pub allow_boundary: bool,
    /// True when some cell touches a truncation's top window row.
    pub boundary_contact: bool,
}

impl SlabComplex {
    pub fn m(&self) -> usize {
        self.trees.len()
    }

    pub fn active_bounds(&self) -> (Rat, Rat) {
        (
            self.levels[self.active.0].clone(),
            self.levels[self.active.1].clone(),
        )
    }

    pub fn is_level_set(&self) -> bool {
        self.active.0 == self.active.1
    }

    pub fn max_dim(&self) -> usize {
        self.dims.iter().copied().max().unwrap_or(0) as usize
    }

    pub fn cells_per_dim(&self) -> Vec<usize> {
        if self.cells.is_empty() {
            return vec![];
        }
        let mut out = vec![0usize; self.max_dim() + 1];
        for &d in &self.dims {
            out[d as usize] += 1;
        }
        out
    }

    /// Reduced Euler characteristic from polytopal cell counts.
    pub fn reduced_euler(&self) -> i64 {
        let mut chi: i64 = 0;
        for &d in &self.dims {
            chi += if d % 2 == 0 { 1 } else { -1 };
        }
        chi - 1
    }

    pub(crate) fn factor_height_bounds(&self, fc: &FactorCell, factor: usize) -> (Rat, Rat) {
        factor_bounds(
            &self.trees[factor],
            &self.weights[factor],
            &self.offsets[factor],
            fc,
        )
    }

    /// h-range of a cube over the closed cell.
    pub fn cube_range(&self, cube: &[FactorCell]) -> (Rat, Rat) {
        let mut lo = Rat::zero();
        let mut hi = Rat::zero();
        for (i, fc) in cube.iter().enumerate() {
            let (l, h) = self.factor_height_bounds(fc, i);
            lo += l;
            hi += h;
        }
        (lo, hi)
    }

    /// All strict faces of a cell, as indices into `cells`.
    pub fn faces_of(&self, ci: u32) -> Vec<u32> {
        let cell = &self.cells[ci as usize];
        let mut out: Vec<u32> = Vec::new();
        let cube_faces = enumerate_cube_faces(&self.trees, &cell.cube);
        match cell.tag {
            CellTag::At(l) => {
                for f in &cube_faces {
                    if f == &cell.cube {
                        continue;
                    }
                    let cand = SlabCell {
                        cube: f.clone(),
                        tag: CellTag::At(l),
                    };
                    if let Some(&idx) = self.index.get(&cand) {
                        out.push(idx);
                    }
                }
            }
            CellTag::Gap(g) => {
                for f in &cube_faces {
                    if f != &cell.cube {
                        let cand = SlabCell {
                            cube: f.clone(),
                            tag: CellTag::Gap(g),
                        };
                        if let Some(&idx) = self.index.get(&cand) {
                            out.push(idx);
                        }
                    }
                    for l in [g, g + 1] {
                        let cand = SlabCell {
                            cube: f.clone(),
                            tag: CellTag::At(l),
                        };
                        if let Some(&idx) = self.index.get(&cand) {
                            out.push(idx);
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        debug_assert!(out
            .iter()
            .all(|&f| self.dims[f as usize] < self.dims[ci as usize]));
        out
    }
}

pub(crate) fn factor_bounds(
    tree: &TreeTruncation,
    weight: &Rat,
    offset: &Rat,
    fc: &FactorCell,
) -> (Rat, Rat) {
    match fc {
        FactorCell::V(vi) => {
            let lv = tree.vertices[*vi as usize].level;
            let h = weight * rat::rat(lv) + offset;
            (h.clone(), h)
        }
        FactorCell::E(ei) => {
            let (lo_v, hi_v) = tree.edges[*ei as usize];
            let llo = tree.vertices[lo_v as usize].level;
            let lhi = tree.vertices[hi_v as usize].level;
            let a = weight * rat::rat(llo) + offset;
            let b = weight * rat::rat(lhi) + offset;
            if a <= b {
                (a, b)
            } else {
                (b, a)
            }
        }
    }
}

pub(crate) fn enumerate_cube_faces(
    trees: &[TreeTruncation],
    cube: &[FactorCell],
) -> Vec<Vec<FactorCell>> {
    let mut options: Vec<Vec<FactorCell>> = Vec::with_capacity(cube.len());
    for (i, fc) in cube.iter().enumerate() {
        match fc {
            FactorCell::V(v) => options.push(vec![FactorCell::V(*v)]),
            FactorCell::E(e) => {
                let (lo, hi) = trees[i].edges[*e as usize];
                options.push(vec![
                    FactorCell::E(*e),
                    FactorCell::V(lo),
                    FactorCell::V(hi),
                ]);
            }
        }
    }
    let mut out = vec![Vec::new()];
    for opts in options {
        let mut next = Vec::with_capacity(out.len() * opts.len());
        for partial in &out {
            for o in &opts {
                let mut p = partial.clone();
                p.push(*o);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// Cells a cube contributes to the active window, in deterministic tag order.
pub(crate) fn emit_cells(
    cube: &[FactorCell],
    lo: &Rat,
    hi: &Rat,
    levels: &[Rat],
    active: (usize, usize),
    cells: &mut Vec<SlabCell>,
    dims: &mut Vec<u8>,
) {
    let k = cube.iter().filter(|f| f.is_edge()).count() as u8;
    let constant = lo == hi;
    let (alo, ahi) = active;
    if constant {
        for l in alo..=ahi {
            if &levels[l] == lo {
                cells.push(SlabCell {
                    cube: cube.to_vec(),
                    tag: CellTag::At(l as u16),
                });
                dims.push(k);
                return;
            }
        }
        for g in alo..ahi {
            if &levels[g] < lo && lo < &levels[g + 1] {
                cells.push(SlabCell {
                    cube: cube.to_vec(),
                    tag: CellTag::Gap(g as u16),
                });
                dims.push(k);
                return;
            }
        }
        return;
    }
    for l in alo..=ahi {
        if lo < &levels[l] && &levels[l] < hi {
            cells.push(SlabCell {
                cube: cube.to_vec(),
                tag: CellTag::At(l as u16),
            });
            dims.push(k - 1);
        }
    }
    for g in alo..ahi {
        if lo < &levels[g + 1] && &levels[g] < hi {
            cells.push(SlabCell {
                cube: cube.to_vec(),
                tag: CellTag::Gap(g as u16),
            });
            dims.push(k);
        }
    }
}

pub(crate) struct FactorCells {
    /// (cell, lo, hi, top_level) sorted by lo then cell order.
    pub list: Vec<(FactorCell, Rat, Rat, i64)>,
    pub min_lo: Rat,
    pub max_hi: Rat,
}

pub(crate) fn factor_cell_list(tree: &TreeTruncation, weight: &Rat, offset: &Rat) -> FactorCells {
    let mut list: Vec<(FactorCell, Rat, Rat, i64)> = Vec::new();
    for (vi, v) in tree.vertices.iter().enumerate() {
        let fc = FactorCell::V(vi as u32);
        let (lo, hi) = factor_bounds(tree, weight, offset, &fc);
        list.push((fc, lo, hi, v.level));
    }
    for (ei, &(_, hi_v)) in tree.edges.iter().enumerate() {
        let fc = FactorCell::E(ei as u32);
        let (lo, hi) = factor_bounds(tree, weight, offset, &fc);
        let top = tree.vertices[hi_v as usize].level;
        list.push((fc, lo, hi, top));
    }
    list.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
    let min_lo = list.iter().map(|x| x.1.clone()).min().unwrap();
    let max_hi = list.iter().map(|x| x.2.clone()).max().unwrap();
    FactorCells {
        list,
        min_lo,
        max_hi,
    }
}

/// Build a family of slabs over a shared slicing-level set (the union of
/// the constraints' endpoints). Members with nested constraints are literal
/// subcomplexes of one another.
pub fn build_slab_family(
    trees: &[TreeTruncation],
    constraints: &[Constraint],
    slack: i64,
    allow_boundary: bool,
) -> Result<Vec<SlabComplex>, ComplexError> {
    if trees.is_empty() {
        return Err(ComplexError::NoFactors);
    }
    let weights: Vec<Rat> = trees.iter().map(|t| t.params.weight_rat()).collect();
    let offsets: Vec<Rat> = trees.iter().map(|t| t.params.offset_rat()).collect();
    for (i, w) in weights.iter().enumerate() {
        if w < &Rat::zero() {
            return Err(ComplexError::NegativeWeight(i));
        }
    }
    let factor_cells: Vec<FactorCells> = trees
        .iter()
        .zip(weights.iter().zip(offsets.iter()))
        .map(|(t, (w, o))| factor_cell_list(t, w, o))
        .collect();
    let global_top: Rat = factor_cells.iter().map(|f| f.max_hi.clone()).sum();

    let mut bounds: Vec<(Rat, Rat)> = Vec::with_capacity(constraints.len());
    let mut levels: Vec<Rat> = Vec::new();
    for c in constraints {
        let (a, b) = c.bounds(&global_top)?;
        levels.push(a.clone());
        levels.push(b.clone());
        bounds.push((a, b));
    }
    levels.sort();
    levels.dedup();
    let levels = Arc::new(levels);
    let trees_arc = Arc::new(trees.to_vec());

    let mut members = Vec::with_capacity(constraints.len());
    for (ci, (a, b)) in bounds.iter().enumerate() {
        let alo = levels.iter().position(|l| l == a).unwrap();
        let ahi = levels.iter().position(|l| l == b).unwrap();
        let unclipped_top = matches!(constraints[ci], Constraint::AtLeast(_));
        let member = build_member(
            &trees_arc,
            &weights,
            &offsets,
            &factor_cells,
            &levels,
            (alo, ahi),
            slack,
            allow_boundary || unclipped_top,
        )?;
        members.push(member);
    }
    Ok(members)
}

/// Build a single slab with the default boundary policy (top slack enforced).
pub fn build_slab(
    trees: &[TreeTruncation],
    constraint: Constraint,
    slack: i64,
) -> Result<SlabComplex, ComplexError> {
    Ok(build_slab_family(trees, &[constraint], slack, false)?
        .pop()
        .unwrap())
}

/// Build a slab that is allowed to touch the truncation windows; the result
/// carries the finite-horizon contact flag.
pub fn build_slab_relaxed(
    trees: &[TreeTruncation],
    constraint: Constraint,
) -> Result<SlabComplex, ComplexError> {
    Ok(build_slab_family(trees, &[constraint], 0, true)?
        .pop()
        .unwrap())
}

struct BuildScratch {
    cube: Vec<FactorCell>,
    tops: Vec<i64>,
    cells: Vec<SlabCell>,
    dims: Vec<u8>,
    boundary_contact: bool,
    slack_offender: Option<(usize, SlabCell, i64)>,
}

#[allow(clippy::too_many_arguments)]
fn build_member(
    trees: &Arc<Vec<TreeTruncation>>,
    weights: &[Rat],
    offsets: &[Rat],
    factor_cells: &[FactorCells],
    levels: &Arc<Vec<Rat>>,
    active: (usize, usize),
    slack: i64,
    allow_boundary: bool,
) -> Result<SlabComplex, ComplexError> {
    let m = trees.len();
    let a = levels[active.0].clone();
    let b = levels[active.1].clone();

    let mut rem_min = vec![Rat::zero(); m + 1];
    let mut rem_max = vec![Rat::zero(); m + 1];
    for i in (0..m).rev() {
        rem_min[i] = &rem_min[i + 1] + &factor_cells[i].min_lo;
        rem_max[i] = &rem_max[i + 1] + &factor_cells[i].max_hi;
    }

    let mut scratch = BuildScratch {
        cube: Vec::with_capacity(m),
        tops: Vec::with_capacity(m),
        cells: Vec::new(),
        dims: Vec::new(),
        boundary_contact: false,
        slack_offender: None,
    };

    #[allow(clippy::too_many_arguments)]
    fn rec(
        i: usize,
        lo_acc: Rat,
        hi_acc: Rat,
        a: &Rat,
        b: &Rat,
        factor_cells: &[FactorCells],
        rem_min: &[Rat],
        rem_max: &[Rat],
        levels: &[Rat],
        active: (usize, usize),
        trees: &[TreeTruncation],
        slack: i64,
        allow_boundary: bool,
        s: &mut BuildScratch,
    ) {
        let m = factor_cells.len();
        if i == m {
            let before = s.cells.len();
            emit_cells(
                &s.cube,
                &lo_acc,
                &hi_acc,
                levels,
                active,
                &mut s.cells,
                &mut s.dims,
            );
            if s.cells.len() > before {
                for (f, &top) in s.tops.iter().enumerate() {
                    let wt = trees[f].window.1;
                    if top == wt {
                        s.boundary_contact = true;
                    }
                    let height_active = !trees[f].params.weight_rat().is_zero();
                    if !allow_boundary
                        && height_active
                        && top + slack > wt
                        && s.slack_offender.is_none()
                    {
                        s.slack_offender = Some((f, s.cells[before].clone(), top));
                    }
                }
            }
            return;
        }
        for (fc, lo, hi, top) in &factor_cells[i].list {
            let new_lo = &lo_acc + lo;
            if &new_lo + &rem_min[i + 1] > *b {
                break; // sorted by lo: nothing later fits either
            }
            let new_hi = &hi_acc + hi;
            if &new_hi + &rem_max[i + 1] < *a {
                continue;
            }
            s.cube.push(*fc);
            s.tops.push(*top);
            rec(
                i + 1,
                new_lo,
                new_hi,
                a,
                b,
                factor_cells,
                rem_min,
                rem_max,
                levels,
                active,
                trees,
                slack,
                allow_boundary,
                s,
            );
            s.cube.pop();
            s.tops.pop();
        }
    }
    rec(
        0,
        Rat::zero(),
        Rat::zero(),
        &a,
        &b,
        factor_cells,
        &rem_min,
        &rem_max,
        levels,
        active,
        trees,
        slack,
        allow_boundary,
        &mut scratch,
    );

    if let Some((factor, cell, top)) = scratch.slack_offender {
        return Err(ComplexError::InsufficientSlack {
            factor,
            cell: cell.describe(),
            top,
            window_top: trees[factor].window.1,
            slack,
        });
    }

    let index: HashMap<SlabCell, u32> = scratch
        .cells
        .iter()
        .enumerate()
        .map(|(i, c)| (c.clone(), i as u32))
        .collect();
    Ok(SlabComplex {
        trees: trees.clone(),
        weights: weights.to_vec(),
        offsets: offsets.to_vec(),
        levels: levels.clone(),
        active,
        cells: scratch.cells,
        dims: scratch.dims,
        index,
        allow_boundary,
        boundary_contact: scratch.boundary_contact,
    })
}

/// Compatibility check for chain-level comparisons between family members.
pub fn family_compatible(a: &SlabComplex, b: &SlabComplex) -> bool {
    (Arc::ptr_eq(&a.trees, &b.trees) || *a.trees == *b.trees)
        && (Arc::ptr_eq(&a.levels, &b.levels) || *a.levels == *b.levels)
}

/// Reduced homology of the weighted-sum level slab around zero for a rank-1
/// system: one tree per place, heights scaled by the degree weight.
///
/// Every factor descends `window_halfwidth` levels below zero. Window tops
/// are chosen so that any factor's descent to its bottom stays compensable
/// by the others: `top_i >= (width + sum_{j != i} w_j * halfwidth) / w_i`.
/// Symmetric windows clip the compensation region and produce spurious
/// components and cycles that the infinite model does not have.
pub fn kernel_slab_connectivity(
    rs: &crate::root_data::RootSystem,
    places: &[crate::root_data::PlaceSpec],
    width: Rat,
    window_halfwidth: i64,
) -> Result<HomologySummary, ComplexError> {
    use crate::trees::{build_truncation, HVertex, TreeParams};
    use num_traits::ToPrimitive;
    if rs.rank != 1 {
        return Err(ComplexError::RankNotOne(rs.rank));
    }
    let weights: Vec<Rat> = places.iter().map(|p| p.weight()).collect();
    let mut trees = Vec::with_capacity(places.len());
    for (i, p) in places.iter().enumerate() {
        let others: Rat = weights
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, w)| w * rat::rat(window_halfwidth))
            .sum();
        let top = ((&width + others) / &weights[i]).ceil().to_integer();
        let top = top.to_i64().unwrap_or(i64::MAX).max(window_halfwidth);
        let params = TreeParams::new(p.residue_size as u32, &p.label)?.with_weight(p.weight());
        let t = build_truncation(
            &params,
            (-window_halfwidth, top),
            &HVertex::apartment(-window_halfwidth),
        )?;
        trees.push(t);
    }
    let slab = build_slab_relaxed(&trees, Constraint::interval(-width.clone(), width))?;
    Ok(reduced_homology(&slab))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, ratio};
    use crate::trees::{build_truncation, HVertex, TreeParams};

    pub(crate) fn tree(q: u32, window: (i64, i64)) -> TreeTruncation {
        let p = TreeParams::new(q, "t").unwrap();
        build_truncation(&p, window, &HVertex::apartment(window.0)).unwrap()
    }

    #[test]
    fn single_tree_interval_is_subforest() {
        let t = tree(2, (0, 4));
        let slab = build_slab(&[t], Constraint::interval(rat(0), rat(2)), 2).unwrap();
        let verts = slab.dims.iter().filter(|&&d| d == 0).count();
        let edges = slab.dims.iter().filter(|&&d| d == 1).count();
        assert_eq!(verts, 7);
        assert_eq!(edges, 6);
        assert_eq!(slab.reduced_euler(), 0);
    }

    #[test]
    fn level_set_through_edges_has_no_top_cells() {
        let t1 = tree(2, (0, 4));
        let t2 = tree(2, (0, 4));
        let slab = build_slab(&[t1, t2], Constraint::level(ratio(3, 2)), 2).unwrap();
        assert!(slab.is_level_set());
        assert!(slab.max_dim() <= 1);
        assert!(!slab.cells.is_empty());
    }

    #[test]
    fn slack_violation_names_cell() {
        let t1 = tree(2, (0, 3));
        let t2 = tree(2, (0, 3));
        let r = build_slab(&[t1, t2], Constraint::interval(ratio(3, 2), ratio(7, 2)), 2);
        match r {
            Err(ComplexError::InsufficientSlack { factor, cell, .. }) => {
                assert!(cell.contains(';'));
                assert!(factor < 2);
            }
            other => panic!("expected slack violation, got {other:?}"),
        }
    }

    #[test]
    fn relaxed_build_flags_contact() {
        let t1 = tree(2, (0, 3));
        let t2 = tree(2, (0, 3));
        let slab =
            build_slab_relaxed(&[t1, t2], Constraint::interval(ratio(3, 2), ratio(7, 2))).unwrap();
        assert!(slab.boundary_contact);
    }

    #[test]
    fn faces_close_up_and_dims_drop() {
        let t1 = tree(2, (0, 5));
        let t2 = tree(2, (0, 5));
        let slab =
            build_slab(&[t1, t2], Constraint::interval(ratio(1, 2), ratio(5, 2)), 2).unwrap();
        assert!(slab.max_dim() == 2);
        for ci in 0..slab.cells.len() as u32 {
            for f in slab.faces_of(ci) {
                assert!(slab.dims[f as usize] < slab.dims[ci as usize]);
            }
        }
    }

    #[test]
    fn family_members_nest() {
        let t1 = tree(2, (0, 6));
        let t2 = tree(2, (0, 6));
        let fam = build_slab_family(
            &[t1, t2],
            &[
                Constraint::interval(rat(2), rat(3)),
                Constraint::interval(rat(1), rat(3)),
            ],
            2,
            false,
        )
        .unwrap();
        assert!(family_compatible(&fam[0], &fam[1]));
        for c in &fam[0].cells {
            assert!(
                fam[1].index.contains_key(c),
                "small slab cell missing from large"
            );
        }
    }

    #[test]
    fn zero_weight_factor_supported() {
        let t1 = tree(2, (0, 4));
        let p = TreeParams::new(2, "flat").unwrap().with_weight(rat(0));
        let t2 = build_truncation(&p, (0, 2), &HVertex::apartment(0)).unwrap();
        let slab =
            build_slab_relaxed(&[t1, t2], Constraint::interval(ratio(1, 2), ratio(5, 2))).unwrap();
        assert!(slab.cells.iter().any(|c| c.cube[1].is_edge()));
        for ci in 0..slab.cells.len() as u32 {
            for f in slab.faces_of(ci) {
                assert!(slab.dims[f as usize] < slab.dims[ci as usize]);
            }
        }
    }

    #[test]
    fn kernel_slab_rejects_higher_rank() {
        let rs = crate::root_data::build_root_system(crate::root_data::TypeLetter::A, 2).unwrap();
        let places = vec![crate::root_data::PlaceSpec::unit(0, 2)];
        assert!(matches!(
            kernel_slab_connectivity(&rs, &places, rat(1), 1),
            Err(ComplexError::RankNotOne(2))
        ));
    }

    #[test]
    fn halfspace_slab_is_connected() {
        // the upward halfspace clipped at the window stays connected
        let t1 = tree(2, (0, 4));
        let t2 = tree(2, (0, 4));
        let slab = build_slab(&[t1, t2], Constraint::at_least(ratio(3, 2)), 0).unwrap();
        assert!(
            slab.boundary_contact,
            "halfspaces reach the window top by construction"
        );
        let h = reduced_homology(&slab);
        assert_eq!(h.betti[0], 0, "halfspace slab is connected: {:?}", h.betti);
    }

    #[test]
    fn vertex_aligned_interval_euler() {
        let t1 = tree(2, (0, 5));
        let t2 = tree(2, (0, 5));
        let slab = build_slab(&[t1, t2], Constraint::interval(rat(0), rat(2)), 2).unwrap();
        let h = reduced_homology(&slab);
        assert!(h.euler_consistent);
        assert_eq!(h.betti, rational_betti(&slab));
        assert_eq!(h.betti[0], 0);
    }

    #[test]
    fn at_least_constraint_reaches_window_top() {
        let t1 = tree(2, (0, 3));
        let slab = build_slab(&[t1], Constraint::at_least(ratio(3, 2)), 0).unwrap();
        assert!(slab.boundary_contact);
        let (_, b) = slab.active_bounds();
        assert_eq!(b, rat(3));
    }
}
