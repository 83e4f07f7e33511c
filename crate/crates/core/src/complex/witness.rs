//! Witness spheres: the norm-r cycle in a product of ascending-ray line
//! pairs, expressed in the level-set slab at the base height plus r.
//!
//! The line product embeds in Euclidean space with one u-coordinate per
//! factor, so top simplices of its subdivision carry geometric orientations
//! (determinant signs of barycenters). The coherently oriented ball chain
//! has the sphere as its boundary; the annulus between two radii exhibits
//! the downhill shrink as an exact chain identity.

use super::subdivision::Chain;
use super::{
    emit_cells, factor_bounds, CellTag, ComplexError, FactorCell, SlabCell, SlabComplex,
    Subdivision,
};
use crate::rat::{self, Rat};
use crate::trees::{HVertex, TreeTruncation};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::collections::{BTreeMap, HashMap};

/// One factor's line: the two ascending rays from the base vertex, indexed
/// by the integer coordinate u in [-reach, reach].
struct Line {
    /// u -> vertex index in the truncation, for u in -reach..=reach
    vertices: BTreeMap<i64, u32>,
    /// u -> edge index covering [u, u+1]
    edges: BTreeMap<i64, u32>,
    reach: i64,
}

fn build_line(
    tree: &TreeTruncation,
    base: &HVertex,
    reach: i64,
    digit_pos: u32,
    digit_neg: u32,
) -> Result<Line, ComplexError> {
    assert_ne!(digit_pos, digit_neg, "rays must split at the base");
    let mut vertices = BTreeMap::new();
    let mut edge_by_upper: HashMap<u32, u32> = HashMap::new();
    for (ei, &(_, hi)) in tree.edges.iter().enumerate() {
        edge_by_upper.insert(hi, ei as u32);
    }
    let missing = |v: &HVertex| ComplexError::MissingCell(format!("line vertex {v:?}"));
    let bi = tree.vertex_index(base).ok_or_else(|| missing(base))?;
    vertices.insert(0i64, bi);
    let mut pos = base.clone();
    let mut neg = base.clone();
    for u in 1..=reach {
        pos = if u == 1 {
            pos.upper_neighbor(digit_pos)
        } else {
            pos.upper_neighbor(0)
        };
        neg = if u == 1 {
            neg.upper_neighbor(digit_neg)
        } else {
            neg.upper_neighbor(0)
        };
        vertices.insert(u, tree.vertex_index(&pos).ok_or_else(|| missing(&pos))?);
        vertices.insert(-u, tree.vertex_index(&neg).ok_or_else(|| missing(&neg))?);
    }
    let mut edges = BTreeMap::new();
    for u in -reach..reach {
        // the tree edge between consecutive line vertices hangs below the
        // endpoint farther from the base
        let upper = if u >= 0 {
            vertices[&(u + 1)]
        } else {
            vertices[&u]
        };
        let ei = *edge_by_upper
            .get(&upper)
            .expect("line vertices are adjacent in the tree");
        edges.insert(u, ei);
    }
    Ok(Line {
        vertices,
        edges,
        reach,
    })
}

/// A grid cell: per factor a u-vertex or a u-interval `[u, u+1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum GridCell {
    U(i64),
    I(i64),
}

/// The witness data: base point, rays, radius, and the sphere cycle as a
/// formal sum of subdivision simplices given by explicit cell chains.
pub struct WitnessSphere {
    pub base: Vec<HVertex>,
    pub radius: Rat,
    pub level: Rat,
    pub base_height: Rat,
    pub m: usize,
    /// cycle simplices: chains of slab cells (in poset order), with signs
    pub cycle: BTreeMap<Vec<SlabCell>, BigInt>,
}

struct Grid<'a> {
    trees: &'a [TreeTruncation],
    lines: Vec<Line>,
    weights: Vec<Rat>,
    offsets: Vec<Rat>,
    base: &'a [HVertex],
}

impl Grid<'_> {
    /// u-interval of a factor cell of the grid.
    fn to_factor_cell(&self, factor: usize, g: GridCell) -> FactorCell {
        match g {
            GridCell::U(u) => FactorCell::V(self.lines[factor].vertices[&u]),
            GridCell::I(u) => FactorCell::E(self.lines[factor].edges[&u]),
        }
    }

    fn u_span(&self, g: GridCell) -> (Rat, Rat) {
        match g {
            GridCell::U(u) => (rat::rat(u), rat::rat(u)),
            GridCell::I(u) => (rat::rat(u), rat::rat(u + 1)),
        }
    }

    /// barycenter (in u-space) of the piece of `cube` selected by `tag`,
    /// with levels giving the slicing heights
    fn barycenter(&self, cube: &[GridCell], tag: CellTag, levels: &[Rat]) -> Vec<Rat> {
        // affine height on the cube: h(u) = c + sum_i g_i u_i
        let m = cube.len();
        let mut grad = vec![Rat::zero(); m];
        let mut constant = Rat::zero();
        for (i, g) in cube.iter().enumerate() {
            let w = &self.weights[i];
            let tau = rat::rat(self.base[i].level);
            match g {
                GridCell::U(u) => {
                    constant += w * (tau.clone() + rat::rat(u.abs())) + &self.offsets[i];
                }
                GridCell::I(u) => {
                    // |x| is linear on [u, u+1]: h = w*(tau + sign*x), sign
                    // +1 on the positive ray and -1 on the negative one
                    let sign = if *u >= 0 { rat::rat(1) } else { rat::rat(-1) };
                    grad[i] = w * &sign;
                    constant += w * tau + &self.offsets[i];
                }
            }
        }
        // corners of the cube with their h-values
        let mut corners: Vec<(Vec<Rat>, Rat)> = vec![(Vec::new(), constant)];
        for (i, g) in cube.iter().enumerate() {
            let (lo, hi) = self.u_span(*g);
            let mut next = Vec::with_capacity(corners.len() * 2);
            for (pt, h) in corners {
                if lo == hi {
                    let mut p = pt.clone();
                    p.push(lo.clone());
                    next.push((p, h.clone() + &grad[i] * &lo));
                } else {
                    for end in [&lo, &hi] {
                        let mut p = pt.clone();
                        p.push(end.clone());
                        next.push((p.clone(), h.clone() + &grad[i] * end));
                    }
                }
            }
            corners = next;
        }
        let (plane_lo, plane_hi) = match tag {
            CellTag::At(l) => (levels[l as usize].clone(), levels[l as usize].clone()),
            CellTag::Gap(g) => (levels[g as usize].clone(), levels[g as usize + 1].clone()),
        };
        let mut pts: Vec<Vec<Rat>> = Vec::new();
        for (pt, h) in &corners {
            if *h >= plane_lo && *h <= plane_hi {
                pts.push(pt.clone());
            }
        }
        // cube-edge crossings with each bounding plane
        let n = corners.len();
        for a in 0..n {
            for b in (a + 1)..n {
                let (pa, ha) = &corners[a];
                let (pb, hb) = &corners[b];
                let diff: usize = pa.iter().zip(pb.iter()).filter(|(x, y)| x != y).count();
                if diff != 1 {
                    continue;
                }
                for plane in [&plane_lo, &plane_hi] {
                    if (ha < plane && hb > plane) || (hb < plane && ha > plane) {
                        let t = (plane - ha) / (hb - ha);
                        let p: Vec<Rat> = pa
                            .iter()
                            .zip(pb.iter())
                            .map(|(x, y)| x + (y - x) * &t)
                            .collect();
                        pts.push(p);
                    }
                }
            }
        }
        pts.sort();
        pts.dedup();
        assert!(!pts.is_empty(), "piece must be nonempty");
        let k = rat::rat(pts.len() as i64);
        let mut bary = vec![Rat::zero(); m];
        for p in &pts {
            for (i, x) in p.iter().enumerate() {
                bary[i] += x;
            }
        }
        for x in bary.iter_mut() {
            *x /= &k;
        }
        bary
    }
}

/// Construct the witness sphere of the given radius above a base point with
/// all-vertex coordinates, using the canonical ray pair (first digits 0/1).
pub fn witness_sphere(
    trees: &[TreeTruncation],
    base: &[HVertex],
    radius: Rat,
) -> Result<WitnessSphere, ComplexError> {
    assert_eq!(trees.len(), base.len());
    let m = trees.len();
    let weights: Vec<Rat> = trees.iter().map(|t| t.params.weight_rat()).collect();
    let offsets: Vec<Rat> = trees.iter().map(|t| t.params.offset_rat()).collect();
    let base_height: Rat = trees
        .iter()
        .zip(base.iter())
        .map(|(t, v)| t.height(v))
        .sum();
    let level = &base_height + &radius;

    // per-factor reach in levels: enough to pass the radius in height
    let mut lines = Vec::with_capacity(m);
    for (i, t) in trees.iter().enumerate() {
        let w = &weights[i];
        assert!(w > &Rat::zero(), "witness factors need positive weights");
        let steps = (&radius / w).ceil().to_integer();
        let reach: i64 = num_traits::ToPrimitive::to_i64(&steps).unwrap_or(i64::MAX);
        let needed = base[i].level + reach;
        if needed > t.window.1 {
            return Err(ComplexError::WitnessDoesNotFit {
                factor: i,
                radius: rat::format_rat(&radius),
                needed,
                window_top: t.window.1,
            });
        }
        if t.params.q < 2 {
            return Err(ComplexError::Tree(crate::trees::TreeError::SmallQ(
                t.params.q,
            )));
        }
        lines.push(build_line(t, &base[i], reach, 0, 1)?);
    }
    let grid = Grid {
        trees,
        lines,
        weights: weights.clone(),
        offsets: offsets.clone(),
        base,
    };
    let cycle = sphere_cycle(&grid, &base_height, &level)?;
    Ok(WitnessSphere {
        base: base.to_vec(),
        radius,
        level,
        base_height,
        m,
        cycle,
    })
}

/// All grid cubes, their slab cells over the level pair, and the oriented
/// top-simplex chain of the region `base_height <= h <= top`.
fn grid_cells_and_ball(
    grid: &Grid<'_>,
    lo_level: &Rat,
    top_level: &Rat,
) -> (
    Vec<SlabCell>,
    Vec<u8>,
    HashMap<SlabCell, u32>,
    Vec<Vec<GridCell>>,
    BTreeMap<Vec<SlabCell>, BigInt>,
) {
    let m = grid.lines.len();
    let levels = vec![lo_level.clone(), top_level.clone()];
    let active = (0usize, 1usize);
    // enumerate grid cubes
    let mut cells: Vec<SlabCell> = Vec::new();
    let mut dims: Vec<u8> = Vec::new();
    let mut grid_of_cell: Vec<Vec<GridCell>> = Vec::new();
    let mut stack: Vec<(Vec<GridCell>, Vec<FactorCell>)> = vec![(vec![], vec![])];
    for f in 0..m {
        let mut next = Vec::new();
        let line = &grid.lines[f];
        for (gc, fc) in &stack {
            for u in -line.reach..=line.reach {
                let mut g = gc.clone();
                let mut c = fc.clone();
                g.push(GridCell::U(u));
                c.push(grid.to_factor_cell(f, GridCell::U(u)));
                next.push((g, c));
                if u < line.reach {
                    let mut g2 = gc.clone();
                    let mut c2 = fc.clone();
                    g2.push(GridCell::I(u));
                    c2.push(grid.to_factor_cell(f, GridCell::I(u)));
                    next.push((g2, c2));
                }
            }
        }
        stack = next;
    }
    for (gc, cube) in &stack {
        let mut lo = Rat::zero();
        let mut hi = Rat::zero();
        for (i, fc) in cube.iter().enumerate() {
            let (l, h) = factor_bounds(&grid.trees[i], &grid.weights[i], &grid.offsets[i], fc);
            lo += l;
            hi += h;
        }
        let before = cells.len();
        emit_cells(cube, &lo, &hi, &levels, active, &mut cells, &mut dims);
        for _ in before..cells.len() {
            grid_of_cell.push(gc.clone());
        }
    }
    let index: HashMap<SlabCell, u32> = cells
        .iter()
        .enumerate()
        .map(|(i, c)| (c.clone(), i as u32))
        .collect();

    // faces inside the grid complex
    let faces_of = |ci: u32| -> Vec<u32> {
        let cell = &cells[ci as usize];
        let gcube = &grid_of_cell[ci as usize];
        // factorwise face options in grid terms
        let mut options: Vec<Vec<GridCell>> = Vec::new();
        for g in gcube.iter() {
            match g {
                GridCell::U(u) => options.push(vec![GridCell::U(*u)]),
                GridCell::I(u) => {
                    options.push(vec![GridCell::I(*u), GridCell::U(*u), GridCell::U(*u + 1)])
                }
            }
        }
        let mut cubes = vec![Vec::new()];
        for opts in options {
            let mut next = Vec::with_capacity(cubes.len() * opts.len());
            for partial in &cubes {
                for o in &opts {
                    let mut p: Vec<GridCell> = partial.clone();
                    p.push(*o);
                    next.push(p);
                }
            }
            cubes = next;
        }
        let mut out = Vec::new();
        for f in &cubes {
            let fcube: Vec<FactorCell> = f
                .iter()
                .enumerate()
                .map(|(i, g)| grid.to_factor_cell(i, *g))
                .collect();
            match cell.tag {
                CellTag::At(l) => {
                    if f != gcube {
                        if let Some(&idx) = index.get(&SlabCell {
                            cube: fcube.clone(),
                            tag: CellTag::At(l),
                        }) {
                            out.push(idx);
                        }
                    }
                }
                CellTag::Gap(g) => {
                    if f != gcube {
                        if let Some(&idx) = index.get(&SlabCell {
                            cube: fcube.clone(),
                            tag: CellTag::Gap(g),
                        }) {
                            out.push(idx);
                        }
                    }
                    for l in [g, g + 1] {
                        if let Some(&idx) = index.get(&SlabCell {
                            cube: fcube.clone(),
                            tag: CellTag::At(l),
                        }) {
                            out.push(idx);
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    };

    // all chains (as in Subdivision::build but local)
    let n = cells.len();
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_by_key(|&c| (dims[c as usize], c));
    let mut ending: Vec<Vec<Vec<u32>>> = vec![Vec::new(); n];
    let max_dim = dims.iter().copied().max().unwrap_or(0) as usize;
    let mut top_simplices: Vec<Vec<u32>> = Vec::new();
    for &c in &order {
        let mut mine: Vec<Vec<u32>> = vec![vec![c]];
        for f in faces_of(c) {
            for ch in &ending[f as usize] {
                let mut e = ch.clone();
                e.push(c);
                mine.push(e);
            }
        }
        for ch in &mine {
            if ch.len() == max_dim + 1 {
                top_simplices.push(ch.clone());
            }
        }
        ending[c as usize] = mine;
    }

    // orient top simplices geometrically and sum into the ball chain
    let mut ball: BTreeMap<Vec<SlabCell>, BigInt> = BTreeMap::new();
    for s in &top_simplices {
        let pts: Vec<Vec<Rat>> = s
            .iter()
            .map(|&ci| grid.barycenter(&grid_of_cell[ci as usize], cells[ci as usize].tag, &levels))
            .collect();
        let mat: Vec<Vec<Rat>> = (1..pts.len())
            .map(|i| {
                pts[i]
                    .iter()
                    .zip(pts[0].iter())
                    .map(|(a, b)| a - b)
                    .collect()
            })
            .collect();
        let sign = rat::det_sign(&mat);
        assert!(sign != 0, "top simplex must be nondegenerate");
        let key: Vec<SlabCell> = s.iter().map(|&ci| cells[ci as usize].clone()).collect();
        ball.insert(key, BigInt::from(sign));
    }
    (cells, dims, index, grid_of_cell, ball)
}

/// The sphere cycle at `top_level` as the boundary of the oriented ball.
fn sphere_cycle(
    grid: &Grid<'_>,
    base_height: &Rat,
    top_level: &Rat,
) -> Result<BTreeMap<Vec<SlabCell>, BigInt>, ComplexError> {
    if top_level <= base_height {
        // radius zero: a point has empty boundary
        return Ok(BTreeMap::new());
    }
    let (_cells, _dims, _index, _gc, ball) = grid_cells_and_ball(grid, base_height, top_level);
    let mut boundary: BTreeMap<Vec<SlabCell>, BigInt> = BTreeMap::new();
    for (simplex, coeff) in &ball {
        for i in 0..simplex.len() {
            let mut face: Vec<SlabCell> = Vec::with_capacity(simplex.len() - 1);
            face.extend_from_slice(&simplex[..i]);
            face.extend_from_slice(&simplex[i + 1..]);
            let sign = if i % 2 == 0 {
                coeff.clone()
            } else {
                -coeff.clone()
            };
            let e = boundary.entry(face.clone()).or_insert_with(BigInt::zero);
            *e += sign;
            if e.is_zero() {
                boundary.remove(&face);
            }
        }
    }
    // the boundary must live entirely at the top level
    let top_tag_ok = |cell: &SlabCell| matches!(cell.tag, CellTag::At(l) if l == 1);
    for (simplex, _) in &boundary {
        let top = simplex.last().expect("nonempty simplex");
        if !top_tag_ok(top) {
            return Err(ComplexError::MissingCell(format!(
                "ball boundary leaked off the sphere at {}",
                top.describe()
            )));
        }
    }
    Ok(boundary)
}

impl WitnessSphere {
    pub fn is_zero(&self) -> bool {
        self.cycle.is_empty()
    }

    /// Express the cycle in a compatible complex's subdivision.
    pub fn chain_in(&self, slab: &SlabComplex, sub: &Subdivision) -> Result<Chain, ComplexError> {
        let degree = self.m - 1;
        let mut chain = Chain::new(degree);
        for (cells, coeff) in &self.cycle {
            let mut idxs: Vec<u32> = Vec::with_capacity(cells.len());
            for cell in cells {
                // translate the level tags: the witness uses levels
                // {base, level}; the target complex may slice differently
                let retagged = self.retag(cell, slab)?;
                let Some(&ci) = slab.index.get(&retagged) else {
                    return Err(ComplexError::MissingCell(retagged.describe()));
                };
                idxs.push(ci);
            }
            let Some(si) = sub.index_of(degree, &idxs) else {
                return Err(ComplexError::MissingCell(format!("simplex {idxs:?}")));
            };
            chain.add(si, coeff.clone());
        }
        Ok(chain)
    }

    /// Map a witness cell's tag (built over levels {base_height, level})
    /// into the target complex's level vector.
    fn retag(&self, cell: &SlabCell, slab: &SlabComplex) -> Result<SlabCell, ComplexError> {
        let new_tag = match cell.tag {
            CellTag::At(1) => {
                let Some(l) = slab.levels.iter().position(|x| *x == self.level) else {
                    return Err(ComplexError::MissingCell(format!(
                        "level {} not sliced in target",
                        rat::format_rat(&self.level)
                    )));
                };
                CellTag::At(l as u16)
            }
            other => {
                return Err(ComplexError::MissingCell(format!(
                    "witness cycle cell with unexpected tag {other:?}"
                )))
            }
        };
        Ok(SlabCell {
            cube: cell.cube.clone(),
            tag: new_tag,
        })
    }

    /// Nonzero cycle + boundary vanishing inside a level-set slab whose
    /// top dimension is m-1 (no m-cells to bound against).
    pub fn verify_nontrivial(&self, slab: &SlabComplex) -> Result<bool, ComplexError> {
        if !slab.is_level_set() {
            return Err(ComplexError::NotLevelSet);
        }
        if slab.max_dim() + 1 > self.m {
            return Err(ComplexError::NotLevelSet);
        }
        if self.cycle.is_empty() {
            return Ok(false);
        }
        let sub = Subdivision::build(slab);
        let chain = self.chain_in(slab, &sub)?;
        if chain.is_zero() {
            return Ok(false);
        }
        Ok(sub.boundary_of(&chain).is_zero())
    }
}

/// The downhill image of the radius-r witness, computed as an exact chain
/// identity: subtracting the boundary of the coherently oriented annulus
/// `[level - drop, level]` from the sphere leaves exactly the smaller
/// sphere. Returns the smaller-level chain.
pub fn witness_shrink_chain(
    trees: &[TreeTruncation],
    witness: &WitnessSphere,
    drop: Rat,
) -> Result<BTreeMap<Vec<SlabCell>, BigInt>, ComplexError> {
    assert!(drop > Rat::zero() && drop < witness.radius);
    let lower = &witness.level - &drop;
    let m = witness.m;
    let weights: Vec<Rat> = trees.iter().map(|t| t.params.weight_rat()).collect();
    let offsets: Vec<Rat> = trees.iter().map(|t| t.params.offset_rat()).collect();
    let mut lines = Vec::with_capacity(m);
    for (i, t) in trees.iter().enumerate() {
        let steps = (&witness.radius / &weights[i]).ceil().to_integer();
        let reach: i64 = num_traits::ToPrimitive::to_i64(&steps).unwrap_or(i64::MAX);
        lines.push(build_line(t, &witness.base[i], reach, 0, 1)?);
    }
    let grid = Grid {
        trees,
        lines,
        weights,
        offsets,
        base: &witness.base,
    };
    // annulus [lower, level]
    let (cells, _dims, _index, gc, annulus) = grid_cells_and_ball(&grid, &lower, &witness.level);
    let _ = (cells, gc);
    let mut result: BTreeMap<Vec<SlabCell>, BigInt> = BTreeMap::new();
    // start from S_r and subtract the annulus boundary: interior faces
    // cancel, the top sphere cancels against S_r, the lower sphere remains
    for (k, v) in &witness.cycle {
        result.insert(k.clone(), v.clone());
    }
    for (simplex, coeff) in &annulus {
        for i in 0..simplex.len() {
            let mut face: Vec<SlabCell> = Vec::with_capacity(simplex.len() - 1);
            face.extend_from_slice(&simplex[..i]);
            face.extend_from_slice(&simplex[i + 1..]);
            let sign = if i % 2 == 0 {
                coeff.clone()
            } else {
                -coeff.clone()
            };
            // annulus tags: At(0) = lower level, At(1) = top level; the
            // witness cycle is tagged over {base, level}, i.e. At(1) = top
            let e = result.entry(face.clone()).or_insert_with(BigInt::zero);
            *e -= sign;
            if e.is_zero() {
                result.remove(&face);
            }
        }
    }
    // everything left must sit at the lower level (tag At(0) in annulus
    // coordinates); retag to the witness convention At(1) over
    // {base_height, lower}
    let mut retagged: BTreeMap<Vec<SlabCell>, BigInt> = BTreeMap::new();
    for (simplex, coeff) in result {
        let mut out: Vec<SlabCell> = Vec::with_capacity(simplex.len());
        for cell in &simplex {
            match cell.tag {
                CellTag::At(0) => out.push(SlabCell {
                    cube: cell.cube.clone(),
                    tag: CellTag::At(1),
                }),
                other => {
                    return Err(ComplexError::MissingCell(format!(
                        "shrink residue off the lower level: tag {other:?} at {}",
                        cell.describe()
                    )))
                }
            }
        }
        retagged.insert(out, coeff);
    }
    Ok(retagged)
}

/// Class of the witness cycle inside an interval slab containing its level
/// (degree 1 only): free and torsion coordinates.
pub fn witness_class_in_slab(
    witness: &WitnessSphere,
    slab: &SlabComplex,
) -> Result<ClassInSlab, ComplexError> {
    if witness.m != 2 {
        return Err(ComplexError::UnsupportedDegree(witness.m - 1));
    }
    let sub = Subdivision::build(slab);
    let chain = witness.chain_in(slab, &sub)?;
    let h = super::homology::Degree1Homology::build(&sub);
    let class = h.class_of(&chain);
    Ok(ClassInSlab {
        nonzero: !class.is_zero(),
        free: class.free.iter().map(|x| x.to_string()).collect(),
        torsion: class
            .torsion
            .iter()
            .map(|(r, d)| (r.to_string(), d.to_string()))
            .collect(),
    })
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct ClassInSlab {
    pub nonzero: bool,
    pub free: Vec<String>,
    pub torsion: Vec<(String, String)>,
}

#[cfg(test)]
mod tests {
    use super::super::{build_slab_family, build_slab_relaxed, Constraint};
    use super::*;
    use crate::rat::{rat, ratio};
    use crate::trees::{build_truncation, TreeParams};

    fn tree(q: u32, window: (i64, i64)) -> TreeTruncation {
        let p = TreeParams::new(q, "t").unwrap();
        build_truncation(&p, window, &HVertex::apartment(window.0)).unwrap()
    }

    #[test]
    fn diamond_witness_m2_radius2() {
        let t1 = tree(2, (0, 5));
        let t2 = tree(2, (0, 5));
        let base = [HVertex::apartment(0), HVertex::apartment(0)];
        let w = witness_sphere(&[t1.clone(), t2.clone()], &base, rat(2)).unwrap();
        assert_eq!(w.level, rat(2));
        // 8 diagonal segments, each subdivided into 2 edges
        assert_eq!(w.cycle.len(), 16);
        assert!(w.cycle.values().all(|c| c.abs() == BigInt::from(1)));

        // nonzero in the level-set complex at level 2
        let slab =
            build_slab_relaxed(&[t1.clone(), t2.clone()], Constraint::level(rat(2))).unwrap();
        assert!(w.verify_nontrivial(&slab).unwrap());
    }

    #[test]
    fn radius_zero_is_degenerate() {
        let t1 = tree(2, (0, 4));
        let t2 = tree(2, (0, 4));
        let base = [HVertex::apartment(0), HVertex::apartment(0)];
        let w = witness_sphere(&[t1.clone(), t2.clone()], &base, rat(0)).unwrap();
        assert!(w.is_zero());
        let slab = build_slab_relaxed(&[t1, t2], Constraint::level(rat(0))).unwrap();
        assert!(!w.verify_nontrivial(&slab).unwrap());
    }

    #[test]
    fn octahedron_witness_m3_radius1_is_cycle() {
        let trees = vec![tree(2, (0, 3)), tree(2, (0, 3)), tree(2, (0, 3))];
        let base = [
            HVertex::apartment(0),
            HVertex::apartment(0),
            HVertex::apartment(0),
        ];
        let w = witness_sphere(&trees, &base, rat(1)).unwrap();
        assert!(!w.is_zero());
        let slab = build_slab_relaxed(&trees, Constraint::level(rat(1))).unwrap();
        assert!(w.verify_nontrivial(&slab).unwrap());
    }

    #[test]
    fn witness_too_large_is_rejected() {
        let t1 = tree(2, (0, 2));
        let t2 = tree(2, (0, 2));
        let base = [HVertex::apartment(0), HVertex::apartment(0)];
        assert!(matches!(
            witness_sphere(&[t1, t2], &base, rat(3)),
            Err(ComplexError::WitnessDoesNotFit { .. })
        ));
    }

    #[test]
    fn shrink_identity_radius2_to_radius1() {
        let trees = vec![tree(2, (0, 5)), tree(2, (0, 5))];
        let base = [HVertex::apartment(0), HVertex::apartment(0)];
        let w2 = witness_sphere(&trees, &base, rat(2)).unwrap();
        let w1 = witness_sphere(&trees, &base, rat(1)).unwrap();
        let shrunk = witness_shrink_chain(&trees, &w2, rat(1)).unwrap();
        assert_eq!(
            shrunk, w1.cycle,
            "downhill image equals the smaller witness as chains"
        );
    }

    #[test]
    fn witness_class_nonzero_in_interval_slab() {
        let trees = vec![tree(2, (0, 6)), tree(2, (0, 6))];
        let base = [HVertex::apartment(0), HVertex::apartment(0)];
        let fam = build_slab_family(
            &trees,
            &[
                Constraint::level(rat(1)),
                Constraint::interval(rat(1), rat(3)),
            ],
            2,
            false,
        )
        .unwrap();
        let w = witness_sphere(&trees, &base, rat(1)).unwrap();
        let class = witness_class_in_slab(&w, &fam[1]).unwrap();
        assert!(class.nonzero, "witness class survives in the interval slab");
    }

    #[test]
    fn half_integer_level_witness() {
        let trees = vec![tree(2, (0, 4)), tree(2, (0, 4))];
        let base = [HVertex::apartment(0), HVertex::apartment(0)];
        let w = witness_sphere(&trees, &base, ratio(1, 2)).unwrap();
        assert!(!w.is_zero());
        let slab = build_slab_relaxed(&trees, Constraint::level(ratio(1, 2))).unwrap();
        assert!(w.verify_nontrivial(&slab).unwrap());
    }
}
