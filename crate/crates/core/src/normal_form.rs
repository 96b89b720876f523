//! Koszul normal form of a vector field leaving `{f = 0}` invariant:
//! `X = sum_{j<k} P_{j,k} (f_j d/dz_k - f_k d/dz_j) + (g / theta_i) R_i`
//! where `f_j` is the partial derivative of `f` in `z_j`.

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::foliation::{foliation_degree, invariance_cofactor, FoliationError, VectorField};
use crate::linalg::SparseSystem;
use crate::model::{ModelError, ToricModel};
use crate::ring::{DegreeClass, Monomial, Polynomial, Rational, RingError};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum NormalFormError {
    #[error("hypersurface equation is not quasi-homogeneous")]
    NotHomogeneous,
    #[error("theta vanishes for radial field {index}; pick another radial index")]
    ThetaZero { index: usize },
    #[error("radial field {index} is not supported on the index set")]
    RadialNotSupported { index: usize },
    #[error("the vector field does not leave the hypersurface invariant")]
    NotInvariant,
    #[error("index set must be nonempty, sorted and within range")]
    BadIndexSet,
    #[error("linear system infeasible ({} contradictory equations): {}", residual.len(), residual.join("; "))]
    Infeasible { residual: Vec<String> },
    #[error(transparent)]
    Foliation(#[from] FoliationError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    /// Sorted variable indices; every variable for the full normal form.
    pub index_set: Vec<usize>,
    /// `P_{j,k}` for `j < k` in the index set (zero entries included).
    pub pjk: BTreeMap<(usize, usize), Polynomial>,
    pub cofactor: Polynomial,
    pub radial_index: usize,
    pub theta: Rational,
}

impl Decomposition {
    /// The vector field the decomposition describes.
    pub fn reconstruct(&self, model: &ToricModel, f: &Polynomial) -> VectorField {
        let n = model.nvars();
        let grad = f.gradient();
        let mut comps = vec![Polynomial::zero(n); n];
        for (&(j, k), p) in &self.pjk {
            if p.is_zero() {
                continue;
            }
            comps[k] = &comps[k] + &(p * &grad[j]);
            comps[j] = &comps[j] - &(p * &grad[k]);
        }
        if !self.cofactor.is_zero() {
            let scale = self.theta.recip();
            let r = &model.radial_fields()[self.radial_index];
            for (j, a) in r.coefficients.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let term = self.cofactor.mul_term(&Monomial::var(n, j), &(a * &scale));
                comps[j] = &comps[j] + &term;
            }
        }
        VectorField::new(comps)
    }

    /// Nonzero `P_{j,k}` entries.
    pub fn nonzero_pairs(&self) -> Vec<(usize, usize)> {
        self.pjk.iter().filter(|(_, p)| !p.is_zero()).map(|(&k, _)| k).collect()
    }
}

/// For each radial field, whether `R_i(f) = theta_i(deg f) f` holds exactly.
pub fn euler_check(model: &ToricModel, f: &Polynomial) -> Result<Vec<bool>, NormalFormError> {
    let alpha = model.homogeneous_degree(f)?.ok_or(NormalFormError::NotHomogeneous)?;
    let mut out = Vec::new();
    for (i, r) in model.radial_fields().iter().enumerate() {
        let lhs = VectorField::new(r.components()).apply_to(f)?;
        let theta = model.theta(i, &alpha)?;
        out.push(lhs == f.scale(&theta));
    }
    Ok(out)
}

/// `deg(F) + deg(z_j) + deg(z_k) - deg(V)`.
pub fn pair_degree(model: &ToricModel, deg_f: &DegreeClass, deg_v: &DegreeClass, j: usize, k: usize) -> DegreeClass {
    let d = model.degrees();
    &(&(deg_f + &d[j]) + &d[k]) - deg_v
}

/// First radial field supported on `subset` with nonzero theta.
pub fn choose_radial_index(model: &ToricModel, deg_v: &DegreeClass, subset: &[usize]) -> Option<usize> {
    model.radial_fields().iter().enumerate().find_map(|(i, r)| {
        let ok = r.is_supported_on(subset) && model.theta(i, deg_v).map(|t| !t.is_zero()).unwrap_or(false);
        ok.then_some(i)
    })
}

fn normalize_index_set(model: &ToricModel, index_set: Option<&[usize]>) -> Result<Vec<usize>, NormalFormError> {
    let n = model.nvars();
    let s: Vec<usize> = match index_set {
        None => (0..n).collect(),
        Some(s) => s.to_vec(),
    };
    if s.is_empty() || s.windows(2).any(|w| w[0] >= w[1]) || s.iter().any(|&j| j >= n) {
        return Err(NormalFormError::BadIndexSet);
    }
    Ok(s)
}

/// Solves for some decomposition of `X` (restricted to `index_set`) by exact
/// linear algebra; `g` is solved for as well rather than taken from the
/// division `X(f) / f`.
pub fn koszul_decompose(
    model: &ToricModel,
    f: &Polynomial,
    x: &VectorField,
    radial_index: usize,
    index_set: Option<&[usize]>,
) -> Result<Decomposition, NormalFormError> {
    let s = normalize_index_set(model, index_set)?;
    let deg_v = model.homogeneous_degree(f)?.ok_or(NormalFormError::NotHomogeneous)?;
    let theta = model.theta(radial_index, &deg_v)?;
    if theta.is_zero() {
        return Err(NormalFormError::ThetaZero { index: radial_index });
    }
    let radial = &model.radial_fields()[radial_index];
    if !radial.is_supported_on(&s) {
        return Err(NormalFormError::RadialNotSupported { index: radial_index });
    }
    let x1 = x.restricted_to(&s);
    if invariance_cofactor(&x1, f)?.is_none() {
        return Err(NormalFormError::NotInvariant);
    }
    let n = model.nvars();
    if x1.is_zero() {
        let pjk = pairs(&s).into_iter().map(|p| (p, Polynomial::zero(n))).collect();
        return Ok(Decomposition { index_set: s, pjk, cofactor: Polynomial::zero(n), radial_index, theta });
    }
    let deg_f = foliation_degree(model, &x1)?;
    let grad = f.gradient();

    let mut sys: SparseSystem<(usize, Monomial)> = SparseSystem::new();
    let mut unknowns: Vec<(Option<(usize, usize)>, Monomial)> = Vec::new();
    for (j, k) in pairs(&s) {
        let delta = pair_degree(model, &deg_f, &deg_v, j, k);
        for m in model.monomials_of_degree(&delta)? {
            let u = unknowns.len();
            for (t, c) in grad[j].terms() {
                sys.add((k, t.mul(&m)), u, c.clone());
            }
            for (t, c) in grad[k].terms() {
                sys.add((j, t.mul(&m)), u, -c.clone());
            }
            unknowns.push((Some((j, k)), m));
        }
    }
    let inv = theta.recip();
    for m in model.monomials_of_degree(&deg_f)? {
        let u = unknowns.len();
        for (j, a) in radial.coefficients.iter().enumerate() {
            if !a.is_zero() {
                sys.add((j, m.mul(&Monomial::var(n, j))), u, a * &inv);
            }
        }
        unknowns.push((None, m));
    }
    for (j, p) in x1.components.iter().enumerate() {
        for (m, c) in p.terms() {
            sys.set_rhs((j, m.clone()), c.clone());
        }
    }
    let sol = sys.solve(unknowns.len()).map_err(|bad| NormalFormError::Infeasible {
        residual: bad
            .iter()
            .map(|e| {
                let (j, m) = &e.key;
                let mono = Polynomial::from_term(m.clone(), e.residual.clone());
                format!("d/d{}: {}", model.variable_names()[*j], mono.to_string_with(model.variable_names()))
            })
            .collect(),
    })?;
    let mut pjk: BTreeMap<(usize, usize), Polynomial> = pairs(&s).into_iter().map(|p| (p, Polynomial::zero(n))).collect();
    let mut cofactor = Polynomial::zero(n);
    for ((slot, m), c) in unknowns.into_iter().zip(sol) {
        match slot {
            Some(pair) => pjk.get_mut(&pair).expect("pair present").add_term(m, c),
            None => cofactor.add_term(m, c),
        }
    }
    Ok(Decomposition { index_set: s, pjk, cofactor, radial_index, theta })
}

fn pairs(s: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (a, &j) in s.iter().enumerate() {
        for &k in &s[a + 1..] {
            out.push((j, k));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub reconstructs: bool,
    /// Pairs whose `P_{j,k}` is not of the forced degree.
    pub degree_violations: Vec<(usize, usize)>,
}

impl Verification {
    pub fn is_valid(&self) -> bool {
        self.reconstructs && self.degree_violations.is_empty()
    }
}

/// Checks the reconstruction identity on the index set and the degree law.
pub fn verify_decomposition(model: &ToricModel, f: &Polynomial, x: &VectorField, d: &Decomposition) -> Verification {
    let n = model.nvars();
    let well_formed = d.radial_index < model.radial_fields().len()
        && d.pjk.keys().all(|&(j, k)| j < k && d.index_set.contains(&j) && d.index_set.contains(&k))
        && f.nvars() == n
        && x.nvars() == n;
    if !well_formed {
        return Verification { reconstructs: false, degree_violations: Vec::new() };
    }
    let reconstructs = d.reconstruct(model, f) == x.restricted_to(&d.index_set);
    let nonzero = d.nonzero_pairs();
    let mut degree_violations = Vec::new();
    if !nonzero.is_empty() {
        let deg_v = model.homogeneous_degree(f).ok().flatten();
        let deg_f = foliation_degree(model, &x.restricted_to(&d.index_set)).ok();
        for (j, k) in nonzero {
            let ok = match (&deg_f, &deg_v) {
                (Some(df), Some(dv)) => {
                    model.homogeneous_degree(&d.pjk[&(j, k)]).ok().flatten() == Some(pair_degree(model, df, dv, j, k))
                }
                _ => false,
            };
            if !ok {
                degree_violations.push((j, k));
            }
        }
    }
    Verification { reconstructs, degree_violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ModelSource, ModelSpec};
    use crate::ring::parse_polynomial;
    use num_bigint::BigInt;

    fn plane() -> ToricModel {
        let degrees = vec![vec![BigInt::from(1)]; 3];
        ModelSpec {
            name: "plane".into(),
            dimension: 2,
            variables: ModelSpec::default_names(3),
            source: ModelSource::Presentation { degrees, torsion: vec![] },
            max_cones: None,
            display: None,
        }
        .build()
        .unwrap()
    }

    #[test]
    fn radial_field_decomposes_trivially() {
        let m = plane();
        let f = parse_polynomial("z1^3 + z2^3 + z3^3", m.variable_names()).unwrap();
        assert_eq!(euler_check(&m, &f).unwrap(), vec![true]);
        let r = VectorField::new(m.radial_fields()[0].components());
        let d = koszul_decompose(&m, &f, &r, 0, None).unwrap();
        assert!(d.nonzero_pairs().is_empty());
        assert_eq!(d.cofactor, Polynomial::constant(3, Rational::from_integer(3.into())));
        assert!(verify_decomposition(&m, &f, &r, &d).is_valid());
    }

    #[test]
    fn zero_field() {
        let m = plane();
        let f = parse_polynomial("z1^2 + z2^2 + z3^2", m.variable_names()).unwrap();
        let d = koszul_decompose(&m, &f, &VectorField::zero(3), 0, None).unwrap();
        assert!(verify_decomposition(&m, &f, &VectorField::zero(3), &d).is_valid());
    }

    #[test]
    fn rotation_of_a_conic() {
        let m = plane();
        let names = m.variable_names();
        let f = parse_polynomial("z1^2 + z2^2 + z3^2", names).unwrap();
        let x = VectorField::new(vec![
            parse_polynomial("z2", names).unwrap(),
            parse_polynomial("-z1", names).unwrap(),
            Polynomial::zero(3),
        ]);
        let d = koszul_decompose(&m, &f, &x, 0, None).unwrap();
        let v = verify_decomposition(&m, &f, &x, &d);
        assert!(v.is_valid(), "{v:?}");
        // P_{1,2} = -1/2 is forced
        assert_eq!(d.pjk[&(0, 1)], Polynomial::constant(3, Rational::new((-1).into(), 2.into())));
        let mut wrong = d.clone();
        wrong.pjk.insert((0, 1), -&d.pjk[&(0, 1)]);
        assert!(!verify_decomposition(&m, &f, &x, &wrong).reconstructs);
    }

    #[test]
    fn not_invariant_is_rejected() {
        let m = plane();
        let names = m.variable_names();
        let f = parse_polynomial("z1", names).unwrap();
        let x = VectorField::new(vec![parse_polynomial("z2", names).unwrap(), Polynomial::zero(3), Polynomial::zero(3)]);
        assert_eq!(koszul_decompose(&m, &f, &x, 0, None), Err(NormalFormError::NotInvariant));
    }
}
