//! Sparse exact linear systems over Q, with equations keyed by any ordered
//! label (typically a monomial, or a component index and a monomial).

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::ring::Rational;

#[derive(Clone, Debug, Default)]
pub struct SparseSystem<K: Ord + Clone> {
    rows: BTreeMap<K, (BTreeMap<usize, Rational>, Rational)>,
}

/// An equation that reduced to `0 = residual` with `residual != 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inconsistency<K> {
    pub key: K,
    pub residual: Rational,
}

impl<K: Ord + Clone> SparseSystem<K> {
    pub fn new() -> Self {
        SparseSystem { rows: BTreeMap::new() }
    }

    /// Adds `coeff * x_unknown` to equation `key`.
    pub fn add(&mut self, key: K, unknown: usize, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let row = self.rows.entry(key).or_insert_with(|| (BTreeMap::new(), Rational::zero()));
        let slot = row.0.entry(unknown).or_insert_with(Rational::zero);
        *slot += coeff;
        if slot.is_zero() {
            row.0.remove(&unknown);
        }
    }

    /// Adds `value` to the right-hand side of equation `key`.
    pub fn set_rhs(&mut self, key: K, value: Rational) {
        let row = self.rows.entry(key).or_insert_with(|| (BTreeMap::new(), Rational::zero()));
        row.1 += value;
    }

    pub fn equations(&self) -> usize {
        self.rows.len()
    }

    /// Some solution with free unknowns set to zero, or every equation that
    /// reduced to a contradiction.
    pub fn solve(&self, unknowns: usize) -> Result<Vec<Rational>, Vec<Inconsistency<K>>> {
        let mut pivots: BTreeMap<usize, (BTreeMap<usize, Rational>, Rational)> = BTreeMap::new();
        let mut bad = Vec::new();
        for (key, (coeffs, rhs)) in &self.rows {
            let mut row = coeffs.clone();
            let mut rhs = rhs.clone();
            loop {
                let Some((&col, _)) = row.iter().next() else {
                    if !rhs.is_zero() {
                        bad.push(Inconsistency { key: key.clone(), residual: rhs.clone() });
                    }
                    break;
                };
                match pivots.get(&col) {
                    Some((prow, prhs)) => {
                        let k = row[&col].clone();
                        for (j, v) in prow {
                            let slot = row.entry(*j).or_insert_with(Rational::zero);
                            *slot -= &k * v;
                            if slot.is_zero() {
                                row.remove(j);
                            }
                        }
                        rhs -= &k * prhs;
                    }
                    None => {
                        let inv = row[&col].recip();
                        for v in row.values_mut() {
                            *v *= &inv;
                        }
                        rhs *= &inv;
                        pivots.insert(col, (row, rhs));
                        break;
                    }
                }
            }
        }
        if !bad.is_empty() {
            return Err(bad);
        }
        let mut x = vec![Rational::zero(); unknowns];
        for (&col, (row, rhs)) in pivots.iter().rev() {
            let mut v = rhs.clone();
            for (j, c) in row.range(col + 1..) {
                v -= c * &x[*j];
            }
            x[col] = v;
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64) -> Rational {
        Rational::from_integer(a.into())
    }

    #[test]
    fn solves_and_reports() {
        // x0 + x1 = 3, x1 - x2 = 1, x0 + x2 = 2
        let mut s = SparseSystem::new();
        s.add(0, 0, q(1));
        s.add(0, 1, q(1));
        s.set_rhs(0, q(3));
        s.add(1, 1, q(1));
        s.add(1, 2, q(-1));
        s.set_rhs(1, q(1));
        s.add(2, 0, q(1));
        s.add(2, 2, q(1));
        s.set_rhs(2, q(2));
        let x = s.solve(3).unwrap();
        assert_eq!(&x[0] + &x[1], q(3));
        assert_eq!(&x[1] - &x[2], q(1));
        s.set_rhs(2, q(1));
        let err = s.solve(3).unwrap_err();
        assert_eq!(err.len(), 1);
        assert_eq!(err[0].residual, q(1));
    }

    #[test]
    fn rhs_only_row_is_inconsistent() {
        let mut s: SparseSystem<u8> = SparseSystem::new();
        s.set_rhs(7, q(2));
        assert_eq!(s.solve(0).unwrap_err()[0].key, 7);
    }
}
