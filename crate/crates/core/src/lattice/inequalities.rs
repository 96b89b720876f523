//! Exact Fourier-Motzkin elimination for small systems `a . x >= b` over Q.
//!
//! Used for the grading positivity certificate and for bounding boxes of
//! divisor polytopes. Sizes are tiny (a handful of variables), so the
//! doubly-exponential worst case never matters in practice.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

type Q = BigRational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InequalitySystem {
    vars: usize,
    rows: Vec<(Vec<Q>, Q)>,
}

impl InequalitySystem {
    pub fn new(vars: usize) -> Self {
        InequalitySystem { vars, rows: Vec::new() }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    /// Adds `coeffs . x >= rhs`.
    pub fn push(&mut self, coeffs: Vec<Q>, rhs: Q) {
        assert_eq!(coeffs.len(), self.vars);
        self.rows.push((coeffs, rhs));
    }

    pub fn push_int(&mut self, coeffs: &[BigInt], rhs: &BigInt) {
        self.push(
            coeffs.iter().map(|c| Q::from_integer(c.clone())).collect(),
            Q::from_integer(rhs.clone()),
        );
    }

    fn normalized(&self) -> InequalitySystem {
        let mut seen = BTreeSet::new();
        let mut rows = Vec::new();
        for (a, b) in &self.rows {
            let scale = a.iter().find(|c| !c.is_zero()).map(|c| c.abs());
            let (a2, b2) = match scale {
                Some(s) => (a.iter().map(|c| c / &s).collect::<Vec<_>>(), b / &s),
                None => (a.clone(), b.clone()),
            };
            let key = (a2.clone(), b2.clone());
            if seen.insert(key) {
                rows.push((a2, b2));
            }
        }
        InequalitySystem { vars: self.vars, rows }
    }

    /// Projects out variable `var`; its coefficient is zero in every row of
    /// the result.
    pub fn eliminate(&self, var: usize) -> InequalitySystem {
        let mut lower = Vec::new();
        let mut upper = Vec::new();
        let mut out = InequalitySystem::new(self.vars);
        for (a, b) in &self.rows {
            if a[var].is_positive() {
                lower.push((a, b));
            } else if a[var].is_negative() {
                upper.push((a, b));
            } else {
                out.rows.push((a.clone(), b.clone()));
            }
        }
        for (al, bl) in &lower {
            for (au, bu) in &upper {
                let cl = al[var].clone();
                let cu = -au[var].clone();
                let coeffs: Vec<Q> = al.iter().zip(au.iter()).map(|(x, y)| x * &cu + y * &cl).collect();
                let rhs = *bl * &cu + *bu * &cl;
                out.rows.push((coeffs, rhs));
            }
        }
        out.normalized()
    }

    /// True when some row reads `0 >= b` with `b > 0`.
    fn has_contradiction(&self) -> bool {
        self.rows.iter().any(|(a, b)| a.iter().all(Zero::is_zero) && b.is_positive())
    }

    /// Interval of `var` over the projection of the feasible set. `Err(())`
    /// when the system is infeasible.
    #[allow(clippy::result_unit_err)]
    pub fn bounds(&self, var: usize) -> Result<(Option<Q>, Option<Q>), ()> {
        let mut sys = self.normalized();
        for v in 0..self.vars {
            if v != var {
                sys = sys.eliminate(v);
            }
        }
        if sys.has_contradiction() {
            return Err(());
        }
        let interval = interval_of(&sys, var, &vec![Q::zero(); self.vars]);
        match interval {
            Some((lo, hi)) => {
                if let (Some(l), Some(h)) = (&lo, &hi) {
                    if l > h {
                        return Err(());
                    }
                }
                Ok((lo, hi))
            }
            None => Err(()),
        }
    }

    /// Some feasible point, preferring small integers.
    pub fn feasible_point(&self) -> Option<Vec<Q>> {
        let mut stages = vec![self.normalized()];
        for v in 0..self.vars {
            let next = stages[v].eliminate(v);
            stages.push(next);
        }
        if stages[self.vars].has_contradiction() {
            return None;
        }
        let mut x = vec![Q::zero(); self.vars];
        for v in (0..self.vars).rev() {
            let (lo, hi) = interval_of(&stages[v], v, &x)?;
            x[v] = pick(lo, hi)?;
        }
        Some(x)
    }
}

/// Bounds on `var` implied by rows where every other variable is fixed by
/// `x`. Returns `None` on a contradiction among the fixed rows.
fn interval_of(sys: &InequalitySystem, var: usize, x: &[Q]) -> Option<(Option<Q>, Option<Q>)> {
    let mut lo: Option<Q> = None;
    let mut hi: Option<Q> = None;
    for (a, b) in &sys.rows {
        let mut rest = b.clone();
        for (j, c) in a.iter().enumerate() {
            if j != var && !c.is_zero() {
                rest -= c * &x[j];
            }
        }
        let c = &a[var];
        if c.is_zero() {
            if rest.is_positive() {
                return None;
            }
            continue;
        }
        let bound = &rest / c;
        if c.is_positive() {
            if lo.as_ref().is_none_or(|l| &bound > l) {
                lo = Some(bound);
            }
        } else if hi.as_ref().is_none_or(|h| &bound < h) {
            hi = Some(bound);
        }
    }
    Some((lo, hi))
}

fn pick(lo: Option<Q>, hi: Option<Q>) -> Option<Q> {
    if let (Some(l), Some(h)) = (&lo, &hi) {
        if l > h {
            return None;
        }
    }
    let zero = Q::zero();
    if let Some(l) = &lo {
        if l > &zero {
            let c = l.ceil();
            return Some(if hi.as_ref().is_none_or(|h| &c <= h) { c } else { l.clone() });
        }
    }
    if let Some(h) = &hi {
        if h < &zero {
            let f = h.floor();
            return Some(if lo.as_ref().is_none_or(|l| &f >= l) { f } else { h.clone() });
        }
    }
    Some(zero)
}
