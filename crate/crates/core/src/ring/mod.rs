//! Polynomials over Q graded by a finitely generated abelian group.

mod degree;
mod monomial;
mod parse;
mod polynomial;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use thiserror::Error;

use crate::lattice::inequalities::InequalitySystem;

pub use degree::{is_torsion_automorphism, DegreeClass};
pub use monomial::{Monomial, MonomialOrder};
pub use parse::{parse_polynomial, ParseError};
pub use polynomial::{format_rational, Polynomial};

pub type Rational = BigRational;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("variable count mismatch: {left} vs {right}")]
    VariableCountMismatch { left: usize, right: usize },
    #[error("variable index {index} out of range for {nvars} variables")]
    VariableIndexOutOfRange { index: usize, nvars: usize },
    #[error("the zero polynomial has no degree")]
    ZeroPolynomial,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("no positive grading functional exists; supply an exponent cap")]
    NoPositivityCertificate,
    #[error("degree class does not belong to the grading group")]
    ForeignDegree,
}

/// Degrees of the ring variables plus, when one exists, an integer functional
/// `c` with `c . deg(z_j) >= 1` for every variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grading {
    rank: usize,
    orders: Vec<BigInt>,
    degrees: Vec<DegreeClass>,
    positivity: Option<Vec<BigInt>>,
}

impl Grading {
    pub fn new(rank: usize, orders: Vec<BigInt>, degrees: Vec<DegreeClass>) -> Self {
        for d in &degrees {
            assert!(d.rank() == rank && d.orders() == orders.as_slice(), "degree from another group");
        }
        let positivity = positivity_certificate(rank, &degrees);
        Grading { rank, orders, degrees, positivity }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn orders(&self) -> &[BigInt] {
        &self.orders
    }

    pub fn nvars(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[DegreeClass] {
        &self.degrees
    }

    pub fn degree_of_var(&self, j: usize) -> &DegreeClass {
        &self.degrees[j]
    }

    pub fn positivity(&self) -> Option<&[BigInt]> {
        self.positivity.as_deref()
    }

    pub fn zero_degree(&self) -> DegreeClass {
        DegreeClass::zero(self.rank, &self.orders)
    }

    pub fn monomial_degree(&self, m: &Monomial) -> DegreeClass {
        assert_eq!(m.nvars(), self.nvars());
        let mut free = vec![BigInt::zero(); self.rank];
        let mut torsion = vec![BigInt::zero(); self.orders.len()];
        for (d, &e) in self.degrees.iter().zip(m.exponents()) {
            if e == 0 {
                continue;
            }
            let e = BigInt::from(e);
            for (acc, x) in free.iter_mut().zip(d.free()) {
                *acc += x * &e;
            }
            for (acc, x) in torsion.iter_mut().zip(d.torsion()) {
                *acc += x * &e;
            }
        }
        DegreeClass::new(free, torsion, self.orders.clone())
    }

    /// Common degree of all terms; `Ok(None)` when the terms disagree.
    pub fn homogeneous_degree(&self, f: &Polynomial) -> Result<Option<DegreeClass>, RingError> {
        if f.nvars() != self.nvars() {
            return Err(RingError::VariableCountMismatch { left: f.nvars(), right: self.nvars() });
        }
        let mut it = f.monomials();
        let Some(first) = it.next() else {
            return Err(RingError::ZeroPolynomial);
        };
        let d = self.monomial_degree(first);
        for m in it {
            if self.monomial_degree(m) != d {
                return Ok(None);
            }
        }
        Ok(Some(d))
    }

    /// Indices `k` (1-based) where every variable degree has a nonnegative
    /// free coordinate, so every monomial degree does too.
    pub fn nonnegative_coordinates(&self) -> Vec<usize> {
        (1..=self.rank)
            .filter(|&k| self.degrees.iter().all(|d| !d.coordinate(k).is_negative()))
            .collect()
    }

    fn check_group(&self, alpha: &DegreeClass) -> Result<(), RingError> {
        if alpha.rank() != self.rank || alpha.orders() != self.orders.as_slice() {
            return Err(RingError::ForeignDegree);
        }
        Ok(())
    }

    /// Every monomial of degree `alpha`, in ascending grevlex order.
    pub fn monomials_of_degree(&self, alpha: &DegreeClass) -> Result<Vec<Monomial>, RingError> {
        self.check_group(alpha)?;
        let c = self.positivity.as_ref().ok_or(RingError::NoPositivityCertificate)?;
        let weight = |d: &DegreeClass| -> BigInt { c.iter().zip(d.free()).map(|(a, b)| a * b).sum() };
        let weights: Vec<BigInt> = self.degrees.iter().map(weight).collect();
        let budget = weight(alpha);
        let mut out = Vec::new();
        if budget.is_negative() {
            return Ok(out);
        }
        let mut exps = vec![0u32; self.nvars()];
        self.fill(0, &budget, &weights, &mut exps, alpha, &mut out);
        out.sort();
        Ok(out)
    }

    fn fill(
        &self,
        j: usize,
        budget: &BigInt,
        weights: &[BigInt],
        exps: &mut Vec<u32>,
        alpha: &DegreeClass,
        out: &mut Vec<Monomial>,
    ) {
        let n = self.nvars();
        if j == n {
            if budget.is_zero() {
                let m = Monomial::new(exps.clone());
                if &self.monomial_degree(&m) == alpha {
                    out.push(m);
                }
            }
            return;
        }
        let w = &weights[j];
        if j + 1 == n {
            if budget.is_multiple_of(w) {
                if let Ok(e) = u32::try_from(budget / w) {
                    exps[j] = e;
                    self.fill(n, &BigInt::zero(), weights, exps, alpha, out);
                    exps[j] = 0;
                }
            }
            return;
        }
        let max = budget / w;
        let max = u32::try_from(max).expect("exponent bound fits in u32");
        for e in 0..=max {
            exps[j] = e;
            let rest = budget - w * BigInt::from(e);
            self.fill(j + 1, &rest, weights, exps, alpha, out);
        }
        exps[j] = 0;
    }

    /// Enumeration with every exponent at most `cap`; for gradings without a
    /// positivity certificate the result may be incomplete by construction.
    pub fn monomials_of_degree_capped(&self, alpha: &DegreeClass, cap: u32) -> Result<Vec<Monomial>, RingError> {
        self.check_group(alpha)?;
        let n = self.nvars();
        let mut out = Vec::new();
        let mut exps = vec![0u32; n];
        loop {
            let m = Monomial::new(exps.clone());
            if &self.monomial_degree(&m) == alpha {
                out.push(m);
            }
            let mut j = 0;
            while j < n && exps[j] == cap {
                exps[j] = 0;
                j += 1;
            }
            if j == n {
                break;
            }
            exps[j] += 1;
        }
        out.sort();
        Ok(out)
    }

    /// A random polynomial of degree `alpha` with small integer coefficients;
    /// `None` when the degree has no monomials.
    pub fn random_homogeneous<R: Rng>(&self, alpha: &DegreeClass, rng: &mut R) -> Result<Option<Polynomial>, RingError> {
        let basis = self.monomials_of_degree(alpha)?;
        if basis.is_empty() {
            return Ok(None);
        }
        let n = self.nvars();
        loop {
            let mut f = Polynomial::zero(n);
            for m in &basis {
                if rng.gen_bool(0.6) {
                    let c = rng.gen_range(-5i64..=5);
                    f.add_term(m.clone(), Rational::from_integer(c.into()));
                }
            }
            if !f.is_zero() {
                return Ok(Some(f));
            }
        }
    }
}

/// Integer functional strictly positive on every variable degree, found by
/// exact elimination and scaled to clear denominators.
fn positivity_certificate(rank: usize, degrees: &[DegreeClass]) -> Option<Vec<BigInt>> {
    if rank == 0 {
        return None;
    }
    let mut sys = InequalitySystem::new(rank);
    for d in degrees {
        sys.push_int(d.free(), &BigInt::one());
    }
    let point = sys.feasible_point()?;
    let lcm = point.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    Some(point.iter().map(|q| q.numer() * (&lcm / q.denom())).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grading(free: &[&[i64]], torsion: &[i64], orders: &[i64]) -> Grading {
        let rank = free[0].len();
        let degs = free
            .iter()
            .enumerate()
            .map(|(j, f)| {
                let t: Vec<i64> = if orders.is_empty() { vec![] } else { vec![torsion[j]] };
                DegreeClass::from_i64(f, &t, orders)
            })
            .collect();
        Grading::new(rank, orders.iter().map(|&x| x.into()).collect(), degs)
    }

    #[test]
    fn projective_plane_counts() {
        let g = grading(&[&[1], &[1], &[1]], &[], &[]);
        for (d, expected) in [(0, 1), (1, 3), (2, 6), (6, 28)] {
            let alpha = DegreeClass::from_i64(&[d], &[], &[]);
            assert_eq!(g.monomials_of_degree(&alpha).unwrap().len(), expected);
        }
        assert!(g.monomials_of_degree(&DegreeClass::from_i64(&[-1], &[], &[])).unwrap().is_empty());
    }

    #[test]
    fn weighted_line() {
        let g = grading(&[&[1], &[2]], &[], &[]);
        let ms = g.monomials_of_degree(&DegreeClass::from_i64(&[4], &[], &[])).unwrap();
        let exps: Vec<Vec<u32>> = ms.iter().map(|m| m.exponents().to_vec()).collect();
        assert_eq!(exps.len(), 3);
        for e in [vec![4, 0], vec![2, 1], vec![0, 2]] {
            assert!(exps.contains(&e));
        }
    }

    #[test]
    fn torsion_splits_classes() {
        let g = grading(&[&[1], &[1], &[1]], &[0, 2, 1], &[3]);
        let total: usize = (0..3)
            .map(|t| g.monomials_of_degree(&DegreeClass::from_i64(&[3], &[t], &[3])).unwrap().len())
            .sum();
        assert_eq!(total, 10);
        let z2z3 = Monomial::new(vec![0, 1, 1]);
        assert_eq!(g.monomial_degree(&z2z3).to_string(), "(2,[0])");
    }

    #[test]
    fn scroll_has_certificate() {
        let g = grading(&[&[1, 0], &[1, 0], &[-2, 1], &[3, 1]], &[], &[]);
        let c = g.positivity().unwrap().to_vec();
        for d in g.degrees() {
            let w: BigInt = c.iter().zip(d.free()).map(|(a, b)| a * b).sum();
            assert!(w >= BigInt::one());
        }
        assert_eq!(g.nonnegative_coordinates(), vec![2]);
    }

    #[test]
    fn no_certificate_refuses() {
        let g = grading(&[&[1], &[-1]], &[], &[]);
        assert_eq!(
            g.monomials_of_degree(&DegreeClass::from_i64(&[0], &[], &[])),
            Err(RingError::NoPositivityCertificate)
        );
        let capped = g.monomials_of_degree_capped(&DegreeClass::from_i64(&[0], &[], &[]), 3).unwrap();
        assert_eq!(capped.len(), 4);
    }

    #[test]
    fn zero_and_mixed_are_distinct() {
        let g = grading(&[&[1], &[1], &[1]], &[], &[]);
        assert_eq!(g.homogeneous_degree(&Polynomial::zero(3)), Err(RingError::ZeroPolynomial));
        let x = Polynomial::var(3, 0);
        assert_eq!(g.homogeneous_degree(&(&x + &(&x * &x))).unwrap(), None);
    }
}
