//! Barycentric subdivision of the face poset: simplices are strict chains
//! of cells, canonically ordered by cell dimension, so every boundary
//! matrix is simplicial with the standard alternating signs.

use super::SlabComplex;
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::{BTreeMap, HashMap};

/// A chain (formal integer combination) of subdivision simplices of one
/// fixed degree in one fixed complex.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Chain {
    pub degree: usize,
    pub coeffs: BTreeMap<u32, BigInt>,
}

impl Chain {
    pub fn new(degree: usize) -> Chain {
        Chain {
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn add(&mut self, simplex: u32, c: BigInt) {
        let entry = self.coeffs.entry(simplex).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&simplex);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

pub struct Subdivision {
    /// simplices[d] = list of strict cell chains of length d+1 (cell indices).
    pub simplices: Vec<Vec<Vec<u32>>>,
    /// per-dimension lookup from chain to simplex index
    pub lookup: Vec<HashMap<Vec<u32>, u32>>,
}

impl Subdivision {
    /// Enumerate every strict chain of the face poset. Chains are listed
    /// once, grouped by their top cell, in cell order.
    pub fn build(slab: &SlabComplex) -> Subdivision {
        let n = slab.cells.len();
        // strict faces, precomputed per cell
        let faces: Vec<Vec<u32>> = (0..n as u32).map(|c| slab.faces_of(c)).collect();
        // chains ending at each cell, grouped by length
        let mut ending: Vec<Vec<Vec<Vec<u32>>>> = vec![Vec::new(); n];
        // cells sorted by dimension so faces are always processed first
        let mut order: Vec<u32> = (0..n as u32).collect();
        order.sort_by_key(|&c| (slab.dims[c as usize], c));
        let max_dim = slab.max_dim();
        for &c in &order {
            let mut by_len: Vec<Vec<Vec<u32>>> = vec![Vec::new(); max_dim + 1];
            by_len[0].push(vec![c]);
            for &f in &faces[c as usize] {
                for (len_idx, chains) in ending[f as usize].iter().enumerate() {
                    for ch in chains {
                        let mut ext = ch.clone();
                        ext.push(c);
                        by_len[len_idx + 1].push(ext);
                    }
                }
            }
            ending[c as usize] = by_len;
        }
        let mut simplices: Vec<Vec<Vec<u32>>> = vec![Vec::new(); max_dim + 1];
        for &c in &order {
            for (len_idx, chains) in ending[c as usize].iter().enumerate() {
                for ch in chains {
                    simplices[len_idx].push(ch.clone());
                }
            }
        }
        let lookup: Vec<HashMap<Vec<u32>, u32>> = simplices
            .iter()
            .map(|list| {
                list.iter()
                    .enumerate()
                    .map(|(i, s)| (s.clone(), i as u32))
                    .collect()
            })
            .collect();
        Subdivision { simplices, lookup }
    }

    pub fn counts(&self) -> Vec<usize> {
        self.simplices.iter().map(|s| s.len()).collect()
    }

    pub fn top_dim(&self) -> usize {
        self.simplices.len().saturating_sub(1)
    }

    pub fn index_of(&self, degree: usize, chain: &[u32]) -> Option<u32> {
        self.lookup.get(degree)?.get(chain).copied()
    }

    /// Boundary matrix from degree `d` to `d-1`, as sparse columns
    /// (row, sign). Degree 0 gives the reduced augmentation (single row).
    pub fn boundary_columns(&self, d: usize) -> Vec<Vec<(u32, i64)>> {
        if d == 0 {
            return self.simplices[0]
                .iter()
                .map(|_| vec![(0u32, 1i64)])
                .collect();
        }
        let lower = &self.lookup[d - 1];
        self.simplices[d]
            .iter()
            .map(|s| {
                let mut col = Vec::with_capacity(s.len());
                for i in 0..s.len() {
                    let mut face: Vec<u32> = Vec::with_capacity(s.len() - 1);
                    face.extend_from_slice(&s[..i]);
                    face.extend_from_slice(&s[i + 1..]);
                    let row = *lower
                        .get(&face)
                        .expect("face of a chain is a chain of the complex");
                    col.push((row, if i % 2 == 0 { 1 } else { -1 }));
                }
                col
            })
            .collect()
    }

    /// Apply the boundary operator to a chain.
    pub fn boundary_of(&self, chain: &Chain) -> Chain {
        let mut out = Chain::new(chain.degree.saturating_sub(1));
        if chain.degree == 0 {
            return out;
        }
        let lower = &self.lookup[chain.degree - 1];
        for (&si, c) in &chain.coeffs {
            let s = &self.simplices[chain.degree][si as usize];
            for i in 0..s.len() {
                let mut face: Vec<u32> = Vec::with_capacity(s.len() - 1);
                face.extend_from_slice(&s[..i]);
                face.extend_from_slice(&s[i + 1..]);
                let row = *lower.get(&face).expect("closed complex");
                let sign = if i % 2 == 0 { c.clone() } else { -c.clone() };
                out.add(row, sign);
            }
        }
        out
    }

    /// d(d(x)) = 0 for every generator, all degrees.
    pub fn boundary_squares_to_zero(&self) -> bool {
        for d in 2..self.simplices.len() {
            for si in 0..self.simplices[d].len() as u32 {
                let mut one = Chain::new(d);
                one.add(si, BigInt::from(1));
                let b = self.boundary_of(&one);
                if !self.boundary_of(&b).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

/// A collapsed copy of the subdivision: the subset of simplices surviving
/// repeated free-face removals (homotopy equivalent, so homology agrees).
pub struct Collapsed {
    /// per dimension, the surviving simplices (as chains of cell indices)
    pub simplices: Vec<Vec<Vec<u32>>>,
}

pub fn collapse(sub: &Subdivision) -> Collapsed {
    // flat ids across dimensions
    let dims = sub.simplices.len();
    let mut offset = vec![0usize; dims + 1];
    for d in 0..dims {
        offset[d + 1] = offset[d] + sub.simplices[d].len();
    }
    let total = offset[dims];
    let flat = |d: usize, i: u32| offset[d] + i as usize;

    // codim-1 coface lists and counts
    let mut cofaces: Vec<Vec<u32>> = vec![Vec::new(); total];
    let mut cnt: Vec<u32> = vec![0; total];
    for d in 1..dims {
        for (i, s) in sub.simplices[d].iter().enumerate() {
            let fid = flat(d, i as u32) as u32;
            for k in 0..s.len() {
                let mut face: Vec<u32> = Vec::with_capacity(s.len() - 1);
                face.extend_from_slice(&s[..k]);
                face.extend_from_slice(&s[k + 1..]);
                let fi = flat(d - 1, sub.lookup[d - 1][&face]);
                cofaces[fi].push(fid);
                cnt[fi] += 1;
            }
        }
    }

    let mut alive = vec![true; total];
    let mut work: std::collections::BTreeSet<usize> = (0..total).filter(|&i| cnt[i] == 1).collect();

    let dim_of = |fid: usize| -> usize {
        let mut d = 0;
        while offset[d + 1] <= fid {
            d += 1;
        }
        d
    };

    while let Some(&tau) = work.iter().next() {
        work.remove(&tau);
        if !alive[tau] || cnt[tau] != 1 {
            continue;
        }
        let d = dim_of(tau);
        let sigma = match cofaces[tau].iter().find(|&&c| alive[c as usize]) {
            Some(&c) => c as usize,
            None => continue,
        };
        alive[tau] = false;
        alive[sigma] = false;
        // removing sigma lowers the counts of its other faces
        let sd = d + 1;
        let s = &sub.simplices[sd][sigma - offset[sd]];
        for k in 0..s.len() {
            let mut face: Vec<u32> = Vec::with_capacity(s.len() - 1);
            face.extend_from_slice(&s[..k]);
            face.extend_from_slice(&s[k + 1..]);
            let fi = flat(sd - 1, sub.lookup[sd - 1][&face]);
            if fi != tau && alive[fi] {
                cnt[fi] -= 1;
                if cnt[fi] == 1 {
                    work.insert(fi);
                }
            }
        }
        // removing tau lowers the counts of its faces
        if d >= 1 {
            let t = &sub.simplices[d][tau - offset[d]];
            for k in 0..t.len() {
                let mut face: Vec<u32> = Vec::with_capacity(t.len() - 1);
                face.extend_from_slice(&t[..k]);
                face.extend_from_slice(&t[k + 1..]);
                let fi = flat(d - 1, sub.lookup[d - 1][&face]);
                if alive[fi] {
                    cnt[fi] -= 1;
                    if cnt[fi] == 1 {
                        work.insert(fi);
                    }
                }
            }
        }
    }

    let mut out: Vec<Vec<Vec<u32>>> = vec![Vec::new(); dims];
    for d in 0..dims {
        for (i, s) in sub.simplices[d].iter().enumerate() {
            if alive[flat(d, i as u32)] {
                out[d].push(s.clone());
            }
        }
    }
    while out.len() > 1 && out.last().map(|v| v.is_empty()).unwrap_or(false) {
        out.pop();
    }
    Collapsed { simplices: out }
}

impl Collapsed {
    pub fn counts(&self) -> Vec<usize> {
        self.simplices.iter().map(|s| s.len()).collect()
    }

    pub fn boundary_columns(&self, d: usize) -> Vec<Vec<(u32, i64)>> {
        if d == 0 {
            return self.simplices[0]
                .iter()
                .map(|_| vec![(0u32, 1i64)])
                .collect();
        }
        let lower: HashMap<&[u32], u32> = self.simplices[d - 1]
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_slice(), i as u32))
            .collect();
        self.simplices[d]
            .iter()
            .map(|s| {
                let mut col = Vec::with_capacity(s.len());
                for i in 0..s.len() {
                    let mut face: Vec<u32> = Vec::with_capacity(s.len() - 1);
                    face.extend_from_slice(&s[..i]);
                    face.extend_from_slice(&s[i + 1..]);
                    // faces of surviving simplices survive: collapses remove
                    // free pairs only, and a removed face would have exposed
                    // this simplex first
                    let row = *lower
                        .get(face.as_slice())
                        .expect("collapse keeps the complex closed");
                    col.push((row, if i % 2 == 0 { 1 } else { -1 }));
                }
                col
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::super::{build_slab, Constraint};
    use super::*;
    use crate::rat::{rat, ratio};
    use crate::trees::{build_truncation, HVertex, TreeParams};

    fn tree(q: u32, window: (i64, i64)) -> crate::trees::TreeTruncation {
        let p = TreeParams::new(q, "t").unwrap();
        build_truncation(&p, window, &HVertex::apartment(window.0)).unwrap()
    }

    #[test]
    fn euler_preserved_by_subdivision_and_collapse() {
        let t1 = tree(2, (0, 5));
        let t2 = tree(2, (0, 5));
        let slab =
            build_slab(&[t1, t2], Constraint::interval(ratio(1, 2), ratio(5, 2)), 2).unwrap();
        let sub = Subdivision::build(&slab);
        let chi_cells: i64 = slab
            .dims
            .iter()
            .map(|&d| if d % 2 == 0 { 1i64 } else { -1 })
            .sum();
        let chi_sub: i64 = sub
            .counts()
            .iter()
            .enumerate()
            .map(|(d, &n)| if d % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum();
        assert_eq!(chi_cells, chi_sub);
        let col = collapse(&sub);
        let chi_col: i64 = col
            .counts()
            .iter()
            .enumerate()
            .map(|(d, &n)| if d % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum();
        assert_eq!(chi_cells, chi_col);
        assert!(col.counts().iter().sum::<usize>() <= sub.counts().iter().sum::<usize>());
    }

    #[test]
    fn boundary_squares_to_zero_everywhere() {
        let t1 = tree(2, (0, 4));
        let t2 = tree(3, (0, 3));
        let slab = build_slab(&[t1, t2], Constraint::interval(rat(1), rat(2)), 1).unwrap();
        let sub = Subdivision::build(&slab);
        assert!(sub.boundary_squares_to_zero());
    }

    #[test]
    fn single_point_complex() {
        let t1 = tree(2, (0, 2));
        let slab = build_slab(&[t1], Constraint::level(rat(0)), 2).unwrap();
        let sub = Subdivision::build(&slab);
        assert_eq!(sub.counts(), vec![1]);
    }
}
