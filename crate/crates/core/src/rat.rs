//! Exact rational scalars, vectors and small dense matrices.
//!
//! Rationals serialize as `"num/den"` strings (lowest terms, `"n"` when the
//! denominator is 1); that convention is shared by every JSON interface in
//! this crate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::str::FromStr;

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rat {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    match s.split_once('/') {
        None => BigInt::from_str(s)
            .map(BigRational::from_integer)
            .map_err(|e| format!("bad rational `{s}`: {e}")),
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|e| format!("bad numerator `{n}`: {e}"))?;
            let d =
                BigInt::from_str(d.trim()).map_err(|e| format!("bad denominator `{d}`: {e}"))?;
            if d.is_zero() {
                return Err(format!("zero denominator in `{s}`"));
            }
            Ok(BigRational::new(n, d))
        }
    }
}

pub fn format_vec(v: &[Rat]) -> Vec<String> {
    v.iter().map(format_rat).collect()
}

pub fn parse_vec(v: &[String]) -> Result<Vec<Rat>, String> {
    v.iter().map(|s| parse_rat(s)).collect()
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    assert_eq!(a.len(), b.len(), "dot: dimension mismatch");
    let mut acc = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

pub fn is_zero_vec(v: &[Rat]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn scaled(v: &[Rat], c: &Rat) -> Vec<Rat> {
    v.iter().map(|x| x * c).collect()
}

pub fn add_assign(acc: &mut [Rat], v: &[Rat], c: &Rat) {
    for (a, x) in acc.iter_mut().zip(v) {
        *a += x * c;
    }
}

/// Row-reduce `m` in place to reduced row echelon form; returns pivot columns.
pub fn rref(m: &mut Vec<Vec<Rat>>) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = &m[r][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

pub fn rank(m: &[Vec<Rat>]) -> usize {
    let mut c = m.to_vec();
    rref(&mut c).len()
}

/// Canonical rational basis of the right nullspace of `m` (ncols columns).
///
/// One basis vector per non-pivot column: 1 at the free column, pivot rows
/// back-substituted. Deterministic.
pub fn nullspace(m: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    let mut red = m.to_vec();
    let pivots = rref(&mut red);
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); ncols];
        v[free] = Rat::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -red[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Sign of the determinant of a square rational matrix: -1, 0 or 1.
pub fn det_sign(m: &[Vec<Rat>]) -> i32 {
    let n = m.len();
    let mut a = m.to_vec();
    let mut sign = 1i32;
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return 0;
        };
        if p != c {
            a.swap(c, p);
            sign = -sign;
        }
        if a[c][c].is_negative() {
            sign = -sign;
        }
        let piv = a[c][c].clone();
        for i in (c + 1)..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &piv;
            for j in c..n {
                let t = &a[c][j] * &f;
                a[i][j] -= t;
            }
        }
    }
    sign
}

/// Solve `M x = b` exactly; `None` when inconsistent. `M` need not be square.
pub fn solve(m: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut aug: Vec<Vec<Rat>> = m
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last().is_some_and(|&p| p == cols) {
        return None; // pivot in the rhs column
    }
    let mut x = vec![Rat::zero(); cols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[r][cols].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3/2", "-7", "0", "22/7", "-5/3"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
        assert_eq!(format_rat(&parse_rat("4/2").unwrap()), "2");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn nullspace_of_sum_map() {
        let m = vec![vec![rat(1), rat(1)]];
        let ns = nullspace(&m, 2);
        assert_eq!(ns.len(), 1);
        assert!(is_zero_vec(&[dot(&m[0], &ns[0])]));
    }

    #[test]
    fn solve_small() {
        let m = vec![vec![rat(2), rat(1)], vec![rat(1), rat(-1)]];
        let x = solve(&m, &[rat(5), rat(1)]).unwrap();
        assert_eq!(x, vec![rat(2), rat(1)]);
        let inconsistent = vec![vec![rat(1), rat(1)], vec![rat(1), rat(1)]];
        assert!(solve(&inconsistent, &[rat(0), rat(1)]).is_none());
    }

    #[test]
    fn det_sign_basic() {
        let id = vec![vec![rat(1), rat(0)], vec![rat(0), rat(1)]];
        assert_eq!(det_sign(&id), 1);
        let sw = vec![vec![rat(0), rat(1)], vec![rat(1), rat(0)]];
        assert_eq!(det_sign(&sw), -1);
        let sing = vec![vec![rat(1), rat(2)], vec![rat(2), rat(4)]];
        assert_eq!(det_sign(&sing), 0);
    }
}
