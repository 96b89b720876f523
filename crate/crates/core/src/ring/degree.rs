use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Element of `Z^r + Z/t_1 + ... + Z/t_m`. Residues are kept in `[0, t_i)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DegreeClass {
    free: Vec<BigInt>,
    torsion: Vec<BigInt>,
    orders: Vec<BigInt>,
}

impl DegreeClass {
    pub fn new(free: Vec<BigInt>, torsion: Vec<BigInt>, orders: Vec<BigInt>) -> Self {
        assert_eq!(torsion.len(), orders.len(), "one residue per torsion factor");
        let torsion = torsion.iter().zip(&orders).map(|(x, t)| x.mod_floor(t)).collect();
        DegreeClass { free, torsion, orders }
    }

    pub fn free_only(free: Vec<BigInt>) -> Self {
        DegreeClass { free, torsion: Vec::new(), orders: Vec::new() }
    }

    pub fn from_i64(free: &[i64], torsion: &[i64], orders: &[i64]) -> Self {
        Self::new(
            free.iter().map(|&x| x.into()).collect(),
            torsion.iter().map(|&x| x.into()).collect(),
            orders.iter().map(|&x| x.into()).collect(),
        )
    }

    pub fn zero(rank: usize, orders: &[BigInt]) -> Self {
        DegreeClass {
            free: vec![BigInt::zero(); rank],
            torsion: vec![BigInt::zero(); orders.len()],
            orders: orders.to_vec(),
        }
    }

    pub fn free(&self) -> &[BigInt] {
        &self.free
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn orders(&self) -> &[BigInt] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.free.len()
    }

    /// Free coordinate `k`, 1-based as in the usual multidegree notation.
    pub fn coordinate(&self, k: usize) -> &BigInt {
        &self.free[k - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.free.iter().chain(&self.torsion).all(Zero::is_zero)
    }

    pub fn same_group(&self, other: &DegreeClass) -> bool {
        self.free.len() == other.free.len() && self.orders == other.orders
    }

    pub fn scaled(&self, k: &BigInt) -> DegreeClass {
        DegreeClass::new(
            self.free.iter().map(|x| x * k).collect(),
            self.torsion.iter().map(|x| x * k).collect(),
            self.orders.clone(),
        )
    }

    /// Applies a torsion automorphism `x -> u*x` given per-factor unit
    /// multipliers; used to compare degrees up to relabeling of torsion.
    pub fn with_torsion_units(&self, units: &[BigInt]) -> DegreeClass {
        assert_eq!(units.len(), self.torsion.len());
        DegreeClass::new(
            self.free.clone(),
            self.torsion.iter().zip(units).map(|(x, u)| x * u).collect(),
            self.orders.clone(),
        )
    }

    /// All coordinates, free part first: the row layout used in files.
    pub fn coordinates(&self) -> Vec<BigInt> {
        self.free.iter().chain(&self.torsion).cloned().collect()
    }
}

impl Add for &DegreeClass {
    type Output = DegreeClass;
    fn add(self, rhs: &DegreeClass) -> DegreeClass {
        assert!(self.same_group(rhs), "degree classes from different groups");
        DegreeClass::new(
            self.free.iter().zip(&rhs.free).map(|(a, b)| a + b).collect(),
            self.torsion.iter().zip(&rhs.torsion).map(|(a, b)| a + b).collect(),
            self.orders.clone(),
        )
    }
}

impl Add for DegreeClass {
    type Output = DegreeClass;
    fn add(self, rhs: DegreeClass) -> DegreeClass {
        &self + &rhs
    }
}

impl Sub for &DegreeClass {
    type Output = DegreeClass;
    fn sub(self, rhs: &DegreeClass) -> DegreeClass {
        self + &(-rhs)
    }
}

impl Sub for DegreeClass {
    type Output = DegreeClass;
    fn sub(self, rhs: DegreeClass) -> DegreeClass {
        &self - &rhs
    }
}

impl Neg for &DegreeClass {
    type Output = DegreeClass;
    fn neg(self) -> DegreeClass {
        DegreeClass::new(
            self.free.iter().map(|x| -x).collect(),
            self.torsion.iter().map(|x| -x).collect(),
            self.orders.clone(),
        )
    }
}

impl Neg for DegreeClass {
    type Output = DegreeClass;
    fn neg(self) -> DegreeClass {
        -&self
    }
}

impl fmt::Display for DegreeClass {
    /// `(1,[2])` style; free coordinates then bracketed residues.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.free.iter().map(|x| x.to_string()).collect();
        parts.extend(self.torsion.iter().map(|x| format!("[{x}]")));
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for DegreeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")?;
        if !self.orders.is_empty() {
            let o: Vec<String> = self.orders.iter().map(|x| x.to_string()).collect();
            write!(f, " mod ({})", o.join(","))?;
        }
        Ok(())
    }
}

/// Torsion multipliers must be units modulo their factor.
pub fn is_torsion_automorphism(units: &[BigInt], orders: &[BigInt]) -> bool {
    units.len() == orders.len()
        && units.iter().zip(orders).all(|(u, t)| u.gcd(t) == BigInt::from(1) && !t.is_negative())
}
