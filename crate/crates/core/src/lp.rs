//! Exact linear-programming feasibility over the rationals.
//!
//! Solves `{ x >= 0 : A x = b }` by a phase-I simplex with Bland's rule.
//! No tolerances exist anywhere: every comparison is exact. Infeasible
//! systems come with a Farkas certificate `y` satisfying `y^T A <= 0`
//! componentwise and `y^T b > 0`.

use crate::rat::{dot, Rat};
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone)]
pub enum LpOutcome {
    Feasible(Vec<Rat>),
    Infeasible { farkas: Vec<Rat> },
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpOutcome::Feasible(_))
    }
}

/// Decide feasibility of `A x = b, x >= 0` (`a` is row-major, `m x n`).
pub fn feasible_eq_nonneg(a: &[Vec<Rat>], b: &[Rat]) -> LpOutcome {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    assert_eq!(b.len(), m);

    // Normalize to rhs >= 0, remembering row signs.
    let mut signs = vec![Rat::one(); m];
    let mut t: Vec<Vec<Rat>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = a[i].clone();
        let mut rhs = b[i].clone();
        if rhs.is_negative() {
            signs[i] = -Rat::one();
            for x in row.iter_mut() {
                *x = -x.clone();
            }
            rhs = -rhs;
        }
        // columns: n originals, m artificials, then rhs
        let mut full = Vec::with_capacity(n + m + 1);
        full.extend(row);
        for k in 0..m {
            full.push(if k == i { Rat::one() } else { Rat::zero() });
        }
        full.push(rhs);
        t.push(full);
    }
    let ncols = n + m;
    let rhs_col = ncols;

    // Objective row: reduced costs after pricing out the artificial basis.
    let mut obj = vec![Rat::zero(); ncols + 1];
    for j in 0..n {
        let mut s = Rat::zero();
        for row in t.iter() {
            s += &row[j];
        }
        obj[j] = -s;
    }
    {
        let mut s = Rat::zero();
        for row in t.iter() {
            s += &row[rhs_col];
        }
        obj[rhs_col] = -s;
    }

    let mut basis: Vec<usize> = (n..n + m).collect();

    loop {
        // Bland: entering = smallest index with negative reduced cost.
        let Some(enter) = (0..ncols).find(|&j| obj[j].is_negative()) else {
            break;
        };
        // Ratio test; Bland tie-break on smallest basis variable.
        let mut leave: Option<(usize, Rat)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][rhs_col] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leave else {
            unreachable!(
                "phase-I objective is bounded below; entering column must have a positive entry"
            );
        };
        // Pivot.
        let piv = t[r][enter].clone();
        for x in t[r].iter_mut() {
            *x /= &piv;
        }
        for i in 0..m {
            if i != r && !t[i][enter].is_zero() {
                let f = t[i][enter].clone();
                for j in 0..=ncols {
                    let d = &t[r][j] * &f;
                    t[i][j] -= d;
                }
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for j in 0..=ncols {
                let d = &t[r][j] * &f;
                obj[j] -= d;
            }
        }
        basis[r] = enter;
    }

    let value = -obj[rhs_col].clone();
    if value.is_zero() {
        let mut x = vec![Rat::zero(); n];
        for (i, &bv) in basis.iter().enumerate() {
            if bv < n {
                x[bv] = t[i][rhs_col].clone();
            }
        }
        LpOutcome::Feasible(x)
    } else {
        // y_i = 1 - reduced cost of the i-th artificial, flipped back to the
        // original row orientation.
        let farkas: Vec<Rat> = (0..m)
            .map(|i| (Rat::one() - &obj[n + i]) * &signs[i])
            .collect();
        LpOutcome::Infeasible { farkas }
    }
}

/// Columns-as-generators convenience: is `q` a nonnegative combination of
/// `gens`? Returns coefficients or a Farkas separator `y` with
/// `y . g >= 0` for every generator and `y . q < 0`.
pub fn in_cone(gens: &[Vec<Rat>], q: &[Rat]) -> Result<Vec<Rat>, Vec<Rat>> {
    let dim = q.len();
    let a: Vec<Vec<Rat>> = (0..dim)
        .map(|d| gens.iter().map(|g| g[d].clone()).collect())
        .collect();
    match feasible_eq_nonneg(&a, q) {
        LpOutcome::Feasible(x) => Ok(x),
        LpOutcome::Infeasible { farkas } => {
            // farkas: y^T A <= 0 (per generator), y . q > 0; the separator
            // convention wants >= 0 on generators and < 0 on the query.
            let sep: Vec<Rat> = farkas.iter().map(|v| -v.clone()).collect();
            debug_assert!(gens.iter().all(|g| !dot(&sep, g).is_negative()));
            debug_assert!(dot(&sep, q).is_negative());
            Err(sep)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn simple_feasible() {
        // x1 + x2 = 2, x1 - x2 = 0 -> x = (1,1)
        let a = vec![vec![rat(1), rat(1)], vec![rat(1), rat(-1)]];
        let out = feasible_eq_nonneg(&a, &[rat(2), rat(0)]);
        match out {
            LpOutcome::Feasible(x) => {
                assert_eq!(x, vec![rat(1), rat(1)]);
            }
            _ => panic!("expected feasible"),
        }
    }

    #[test]
    fn infeasible_with_farkas() {
        // x1 + x2 = -1 has no nonnegative solution
        let a = vec![vec![rat(1), rat(1)]];
        let b = [rat(-1)];
        match feasible_eq_nonneg(&a, &b) {
            LpOutcome::Infeasible { farkas } => {
                // y^T A <= 0 and y^T b > 0
                for j in 0..2 {
                    assert!(!(&farkas[0] * &a[0][j]).is_positive());
                }
                assert!((&farkas[0] * &b[0]).is_positive());
            }
            _ => panic!("expected infeasible"),
        }
    }

    #[test]
    fn cone_membership_and_separation() {
        let gens = vec![vec![rat(1), rat(0)], vec![rat(1), rat(1)]];
        let q = vec![rat(3), rat(1)];
        let coeffs = in_cone(&gens, &q).unwrap();
        // 2*(1,0) + 1*(1,1) = (3,1)
        assert_eq!(coeffs, vec![rat(2), rat(1)]);

        let outside = vec![rat(-1), rat(0)];
        let sep = in_cone(&gens, &outside).unwrap_err();
        assert!(!dot(&sep, &gens[0]).is_negative());
        assert!(!dot(&sep, &gens[1]).is_negative());
        assert!(dot(&sep, &outside).is_negative());
    }

    #[test]
    fn degenerate_rows_terminate() {
        let a = vec![
            vec![rat(1), rat(1)],
            vec![rat(1), rat(1)],
            vec![rat(2), rat(2)],
        ];
        let out = feasible_eq_nonneg(&a, &[rat(1), rat(1), rat(2)]);
        assert!(out.is_feasible());
    }
}
