//! Quasi-homogeneous vector fields on the Cox ring.

use std::ops::Add;

use num_traits::Zero;
use thiserror::Error;

use crate::linalg::SparseSystem;
use crate::model::{subsets_of_size, ToricModel};
use crate::ring::{DegreeClass, Monomial, Polynomial, RingError};

/// `X = sum_i P_i d/dz_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorField {
    pub components: Vec<Polynomial>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FoliationError {
    #[error("vector field has {got} components, model has {expected} variables")]
    ComponentCount { expected: usize, got: usize },
    #[error("all components vanish")]
    AllZero,
    #[error("component on {0} is not quasi-homogeneous")]
    NotHomogeneous(String),
    #[error("component degrees disagree: {first} gives {first_degree}, {second} gives {second_degree}")]
    Inconsistent { first: String, first_degree: DegreeClass, second: String, second_degree: DegreeClass },
    #[error(transparent)]
    Ring(#[from] RingError),
}

impl VectorField {
    pub fn new(components: Vec<Polynomial>) -> Self {
        VectorField { components }
    }

    pub fn zero(nvars: usize) -> Self {
        VectorField { components: vec![Polynomial::zero(nvars); nvars] }
    }

    pub fn nvars(&self) -> usize {
        self.components.len()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Polynomial::is_zero)
    }

    pub fn scale(&self, g: &Polynomial) -> VectorField {
        VectorField { components: self.components.iter().map(|p| p * g).collect() }
    }

    /// Components restricted to the listed variables; the others become zero.
    pub fn restricted_to(&self, subset: &[usize]) -> VectorField {
        let n = self.nvars();
        VectorField {
            components: self
                .components
                .iter()
                .enumerate()
                .map(|(j, p)| if subset.contains(&j) { p.clone() } else { Polynomial::zero(n) })
                .collect(),
        }
    }

    /// `X(f) = sum_i P_i df/dz_i`.
    pub fn apply_to(&self, f: &Polynomial) -> Result<Polynomial, FoliationError> {
        if f.nvars() != self.nvars() {
            return Err(FoliationError::ComponentCount { expected: f.nvars(), got: self.nvars() });
        }
        let mut out = Polynomial::zero(f.nvars());
        for (j, p) in self.components.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            out = &out + &(p * &f.derivative(j)?);
        }
        Ok(out)
    }
}

impl Add for &VectorField {
    type Output = VectorField;
    fn add(self, rhs: &VectorField) -> VectorField {
        assert_eq!(self.nvars(), rhs.nvars());
        VectorField { components: self.components.iter().zip(&rhs.components).map(|(a, b)| a + b).collect() }
    }
}

fn check_count(model: &ToricModel, x: &VectorField) -> Result<(), FoliationError> {
    if x.nvars() != model.nvars() {
        return Err(FoliationError::ComponentCount { expected: model.nvars(), got: x.nvars() });
    }
    Ok(())
}

/// `deg(P_i) - deg(z_i)` for every nonzero component, in variable order.
pub fn component_degrees(model: &ToricModel, x: &VectorField) -> Result<Vec<(usize, DegreeClass)>, FoliationError> {
    check_count(model, x)?;
    let mut out = Vec::new();
    for (i, p) in x.components.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let d = model
            .homogeneous_degree(p)?
            .ok_or_else(|| FoliationError::NotHomogeneous(model.variable_names()[i].clone()))?;
        out.push((i, &d - &model.degrees()[i]));
    }
    Ok(out)
}

/// Distinct candidate foliation degrees, in order of first appearance.
pub fn component_degree_candidates(model: &ToricModel, x: &VectorField) -> Result<Vec<DegreeClass>, FoliationError> {
    let mut out: Vec<DegreeClass> = Vec::new();
    for (_, d) in component_degrees(model, x)? {
        if !out.contains(&d) {
            out.push(d);
        }
    }
    Ok(out)
}

/// The common `deg(P_i) - deg(z_i)` over nonzero components.
pub fn foliation_degree(model: &ToricModel, x: &VectorField) -> Result<DegreeClass, FoliationError> {
    let comps = component_degrees(model, x)?;
    let Some((i0, d0)) = comps.first() else {
        return Err(FoliationError::AllZero);
    };
    for (i, d) in &comps[1..] {
        if d != d0 {
            let names = model.variable_names();
            return Err(FoliationError::Inconsistent {
                first: names[*i0].clone(),
                first_degree: d0.clone(),
                second: names[*i].clone(),
                second_degree: d.clone(),
            });
        }
    }
    Ok(d0.clone())
}

/// The cofactor `g` with `X(f) = g f`, or `None` if `f` is not invariant.
pub fn invariance_cofactor(x: &VectorField, f: &Polynomial) -> Result<Option<Polynomial>, FoliationError> {
    let xf = x.apply_to(f)?;
    Ok(xf.divide_exact(f)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieMembership {
    pub member: bool,
    /// `g_i` with `X = sum g_i R_i` when `member`.
    pub witness: Option<Vec<Polynomial>>,
}

/// Whether `X = sum_i g_i R_i` with each `g_i` of degree `deg(F)`.
pub fn lie_g_membership(model: &ToricModel, x: &VectorField) -> Result<LieMembership, FoliationError> {
    let d = foliation_degree(model, x)?;
    let basis = model.monomials_of_degree(&d)?;
    let n = model.nvars();
    let radial = model.radial_fields();
    let mut sys: SparseSystem<(usize, Monomial)> = SparseSystem::new();
    for (i, r) in radial.iter().enumerate() {
        for (b, m) in basis.iter().enumerate() {
            let unknown = i * basis.len() + b;
            for (j, a) in r.coefficients.iter().enumerate() {
                if !a.is_zero() {
                    sys.add((j, m.mul(&Monomial::var(n, j))), unknown, a.clone());
                }
            }
        }
    }
    for (j, p) in x.components.iter().enumerate() {
        for (m, c) in p.terms() {
            sys.set_rhs((j, m.clone()), c.clone());
        }
    }
    match sys.solve(radial.len() * basis.len()) {
        Ok(sol) => {
            let witness = (0..radial.len())
                .map(|i| {
                    Polynomial::from_terms(
                        n,
                        basis.iter().enumerate().map(|(b, m)| (m.clone(), sol[i * basis.len() + b].clone())),
                    )
                })
                .collect();
            Ok(LieMembership { member: true, witness: Some(witness) })
        }
        Err(_) => Ok(LieMembership { member: false, witness: None }),
    }
}

/// `sum_i g_i R_i` as a vector field.
pub fn radial_combination(model: &ToricModel, g: &[Polynomial]) -> VectorField {
    let mut out = VectorField::zero(model.nvars());
    for (gi, r) in g.iter().zip(model.radial_fields()) {
        out = &out + &VectorField::new(r.components()).scale(gi);
    }
    out
}

fn determinant(m: &[Vec<Polynomial>]) -> Polynomial {
    let k = m.len();
    let n = m[0][0].nvars();
    if k == 1 {
        return m[0][0].clone();
    }
    let mut acc = Polynomial::zero(n);
    for (c, entry) in m[0].iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        let minor: Vec<Vec<Polynomial>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, p)| p.clone()).collect()).collect();
        let term = entry * &determinant(&minor);
        acc = if c % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// All maximal minors of the matrix with rows `R_1, ..., R_r, X`; column
/// subsets in lexicographic order.
pub fn singular_scheme_minors(model: &ToricModel, x: &VectorField) -> Result<Vec<Polynomial>, FoliationError> {
    check_count(model, x)?;
    let mut rows: Vec<Vec<Polynomial>> = model.radial_fields().iter().map(|r| r.components()).collect();
    rows.push(x.components.clone());
    let cols: Vec<usize> = (0..model.nvars()).collect();
    Ok(subsets_of_size(&cols, rows.len())
        .into_iter()
        .map(|s| {
            let sub: Vec<Vec<Polynomial>> = rows.iter().map(|r| s.iter().map(|&j| r[j].clone()).collect()).collect();
            determinant(&sub)
        })
        .collect())
}
