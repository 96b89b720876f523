use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// `w * m == h` with `w` unimodular and `h` in row Hermite normal form:
/// echelon shape, positive pivots, entries above each pivot reduced into
/// `[0, pivot)`, zero rows last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermiteDecomposition {
    pub w: IntMatrix,
    pub h: IntMatrix,
}

impl HermiteDecomposition {
    pub fn rank(&self) -> usize {
        (0..self.h.rows()).filter(|&i| self.h.row(i).iter().any(|x| !x.is_zero())).count()
    }
}

fn combine(m: &mut [Vec<BigInt>], p: usize, i: usize, coeffs: [&BigInt; 4]) {
    let [s, t, u, v] = coeffs;
    for j in 0..m[p].len() {
        let a = &m[p][j];
        let b = &m[i][j];
        let np = s * a + t * b;
        let ni = u * a + v * b;
        m[p][j] = np;
        m[i][j] = ni;
    }
}

pub fn hermite_normal_form(m: &IntMatrix) -> HermiteDecomposition {
    let rows = m.rows();
    let cols = m.cols();
    let mut h = m.row_vectors();
    let mut w = IntMatrix::identity(rows).row_vectors();
    let mut p = 0;
    for col in 0..cols {
        if p == rows {
            break;
        }
        for i in p + 1..rows {
            if h[i][col].is_zero() {
                continue;
            }
            let a = h[p][col].clone();
            let b = h[i][col].clone();
            let eg = a.extended_gcd(&b);
            let g = eg.gcd;
            let u = -(&b / &g);
            let v = &a / &g;
            combine(&mut h, p, i, [&eg.x, &eg.y, &u, &v]);
            combine(&mut w, p, i, [&eg.x, &eg.y, &u, &v]);
        }
        if h[p][col].is_zero() {
            continue;
        }
        if h[p][col].is_negative() {
            for x in h[p].iter_mut().chain(w[p].iter_mut()) {
                *x = -&*x;
            }
        }
        for i in 0..p {
            let q = h[i][col].div_floor(&h[p][col]);
            if q.is_zero() {
                continue;
            }
            for j in 0..cols {
                let d = &q * &h[p][j];
                h[i][j] -= d;
            }
            for j in 0..rows {
                let d = &q * &w[p][j];
                w[i][j] -= d;
            }
        }
        p += 1;
    }
    HermiteDecomposition { w: IntMatrix::from_rows(rows, &w), h: IntMatrix::from_rows(cols, &h) }
}
