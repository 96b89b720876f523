use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{hermite_normal_form, IntMatrix};

/// `u * a * v == d` with `u`, `v` unimodular and `d` diagonal with a
/// divisibility chain of nonnegative entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub d: IntMatrix,
    /// Number of nonzero diagonal entries.
    pub rank: usize,
}

impl SmithDecomposition {
    /// The nonzero diagonal entries `d_1 | d_2 | ...`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d.get(i, i).clone()).collect()
    }
}

/// Locates the nonzero entry of smallest absolute value in the trailing
/// submatrix starting at `(t, t)`. Ties go to the lowest row, then the lowest
/// column.
fn pick_pivot(m: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..m.rows() {
        for j in t..m.cols() {
            let v = m.get(i, j);
            if v.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if m.get(bi, bj).abs() <= v.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let (rows, cols) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut rank = 0;

    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = pick_pivot(&d, t) else {
                return SmithDecomposition { u, v, d, rank };
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = d.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..rows {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = -d.get(i, t).div_floor(&pivot);
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                if !d.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = -d.get(t, j).div_floor(&pivot);
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                if !d.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }

            // Row and column t are cleared; enforce the divisibility chain.
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !d.get(i, j).is_multiple_of(&pivot)));
            if let Some(i) = offender {
                let one = BigInt::from(1);
                d.add_row_multiple(t, i, &one);
                u.add_row_multiple(t, i, &one);
                continue;
            }
            break;
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        rank += 1;
    }
    SmithDecomposition { u, v, d, rank }
}

/// Primitive basis of `{x : a * x = 0}` (for a ray matrix whose columns are
/// the ray generators this is the lattice of linear relations among rays).
/// The basis is returned in row Hermite normal form.
pub fn kernel_basis(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(a);
    let basis: Vec<Vec<BigInt>> = (snf.rank..a.cols()).map(|j| snf.v.column(j)).collect();
    if basis.is_empty() {
        return basis;
    }
    let h = hermite_normal_form(&IntMatrix::from_rows(a.cols(), &basis));
    h.h.row_vectors().into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect()
}

/// Some integer `x` with `a * x == b`, or `None` when no integer solution
/// exists.
pub fn solve_integer_system(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.rows(), b.len(), "right-hand side length must equal row count");
    let snf = smith_normal_form(a);
    let c = snf.u.mul_vec(b);
    let mut y = vec![BigInt::zero(); a.cols()];
    for (i, ci) in c.iter().enumerate() {
        if i < snf.rank {
            let di = snf.d.get(i, i);
            if !ci.is_multiple_of(di) {
                return None;
            }
            y[i] = ci / di;
        } else if !ci.is_zero() {
            return None;
        }
    }
    Some(snf.v.mul_vec(&y))
}
