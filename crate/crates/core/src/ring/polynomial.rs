use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Monomial, MonomialOrder, Rational, RingError};

/// Sparse polynomial with exact rational coefficients. Zero coefficients are
/// never stored; terms iterate in ascending grevlex order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::from_term(Monomial::one(nvars), c)
    }

    pub fn var(nvars: usize, j: usize) -> Self {
        Self::from_term(Monomial::var(nvars, j), Rational::one())
    }

    pub fn from_term(m: Monomial, c: Rational) -> Self {
        let nvars = m.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { nvars, terms }
    }

    /// Sums repeated monomials and drops zeros.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(nvars: usize, terms: I) -> Self {
        let mut p = Polynomial::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial length must equal variable count");
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self -= c * m * other`, in place.
    pub fn sub_shifted(&mut self, other: &Polynomial, m: &Monomial, c: &Rational) {
        for (k, x) in &other.terms {
            self.add_term(k.mul(m), -(x * c));
        }
    }

    /// Removes and returns the leading term under `order`.
    pub fn pop_leading(&mut self, order: MonomialOrder) -> Option<(Monomial, Rational)> {
        match order {
            MonomialOrder::Grevlex => self.terms.pop_last(),
            MonomialOrder::Lex => {
                let m = self.terms.keys().max_by(|a, b| a.cmp_lex(b))?.clone();
                let c = self.terms.remove(&m)?;
                Some((m, c))
            }
        }
    }

    /// Leading term under `order`.
    pub fn leading_term(&self, order: MonomialOrder) -> Option<(&Monomial, &Rational)> {
        match order {
            MonomialOrder::Grevlex => self.terms.iter().next_back(),
            MonomialOrder::Lex => self.terms.iter().max_by(|a, b| a.0.cmp_lex(b.0)),
        }
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(Monomial::total_degree).max()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    fn check_same(&self, other: &Polynomial) -> Result<(), RingError> {
        if self.nvars != other.nvars {
            return Err(RingError::VariableCountMismatch { left: self.nvars, right: other.nvars });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial, RingError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial, RingError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial, RingError> {
        self.check_same(other)?;
        let mut out = Polynomial::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial { nvars: self.nvars, terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial { nvars: self.nvars, terms: self.terms.iter().map(|(k, x)| (k.mul(m), x * c)).collect() }
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut out = Polynomial::one(self.nvars);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Formal partial derivative with respect to variable `j` (0-based).
    pub fn derivative(&self, j: usize) -> Result<Polynomial, RingError> {
        if j >= self.nvars {
            return Err(RingError::VariableIndexOutOfRange { index: j, nvars: self.nvars });
        }
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exponents()[j];
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[j] -= 1;
            out.add_term(Monomial::new(exps), c * Rational::from_integer(BigInt::from(e)));
        }
        Ok(out)
    }

    pub fn gradient(&self) -> Vec<Polynomial> {
        (0..self.nvars).map(|j| self.derivative(j).expect("index in range")).collect()
    }

    /// Exact quotient `self / den`, or `None` when `den` does not divide.
    /// Division by the single divisor under grevlex; the remainder must vanish.
    pub fn divide_exact(&self, den: &Polynomial) -> Result<Option<Polynomial>, RingError> {
        self.check_same(den)?;
        let Some((lm, lc)) = den.leading_term(MonomialOrder::Grevlex) else {
            return Err(RingError::DivisionByZero);
        };
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rest = self.clone();
        let mut quotient = Polynomial::zero(self.nvars);
        while let Some((m, c)) = rest.leading_term(MonomialOrder::Grevlex) {
            if !lm.divides(m) {
                return Ok(None);
            }
            let qm = lm.quotient_of(m);
            let qc = c / &lc;
            rest = &rest - &den.mul_term(&qm, &qc);
            quotient.add_term(qm, qc);
        }
        Ok(Some(quotient))
    }

    /// Sets the listed variables to zero.
    pub fn restrict_to_zero(&self, vars: &[usize]) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| vars.iter().all(|&v| m.exponents()[v] == 0))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn eval_rational(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                for _ in 0..e {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_complex(&self, point: &[Complex64]) -> Complex64 {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
            for (x, &e) in point.iter().zip(m.exponents()) {
                t *= x.powu(e);
            }
            acc += t;
        }
        acc
    }

    /// Divides by the leading coefficient under `order`.
    pub fn monic(&self, order: MonomialOrder) -> Polynomial {
        match self.leading_term(order) {
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
            None => self.clone(),
        }
    }

    /// Canonical text: descending grevlex, integers printed without `/1`.
    pub fn to_string_with(&self, names: &[String]) -> String {
        assert_eq!(names.len(), self.nvars, "one name per variable");
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mag = c.abs();
            let mut factors = Vec::new();
            if !mag.is_one() || m.is_one() {
                factors.push(format_rational(&mag));
            }
            for (j, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names[j].clone()),
                    _ => factors.push(format!("{}^{}", names[j], e)),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }

    pub fn default_names(nvars: usize) -> Vec<String> {
        (1..=nvars).map(|i| format!("z{i}")).collect()
    }
}

pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with(&Polynomial::default_names(self.nvars)))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{}]({})", self.nvars, self)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("variable counts must agree")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("variable counts must agree")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("variable counts must agree")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}
