//! Toric models: rays or a degree presentation, the class group grading the
//! Cox ring, radial vector fields and the irrelevant ideal.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice::inequalities::InequalitySystem;
use crate::lattice::{cokernel, pairing_matrix, smith_normal_form, solve_integer_system, AbelianGroupPresentation, IntMatrix};
use crate::ring::{DegreeClass, Grading, Monomial, Polynomial, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("expected {expected} variable names, got {got}")]
    NameCount { expected: usize, got: usize },
    #[error("duplicate variable name '{0}'")]
    DuplicateName(String),
    #[error("ray {index} has {got} coordinates, expected {expected}")]
    RayDimension { index: usize, got: usize, expected: usize },
    #[error("need at least {dimension} rays, got {got}")]
    TooFewRays { dimension: usize, got: usize },
    #[error("rays do not span the ambient space")]
    RaysDoNotSpan,
    #[error("ray {0} is not primitive")]
    NonPrimitiveRay(usize),
    #[error("degree rows have inconsistent length")]
    DegreeShape,
    #[error("free part of the degree matrix has rank {got}, expected {expected}")]
    RankDeficient { expected: usize, got: usize },
    #[error("torsion orders must be at least 2 and form a divisibility chain")]
    TorsionOrders,
    #[error("variable '{0}' has degree zero")]
    ZeroDegreeVariable(String),
    #[error("declared display degrees do not present the class group")]
    DisplayBasisRejected,
    #[error("maximal cone data missing")]
    MissingCones,
    #[error("cone refers to variable index {0} which does not exist")]
    ConeIndex(usize),
    #[error("radial index {index} out of range (model has {count})")]
    RadialIndex { index: usize, count: usize },
    #[error("degree class {0} is not realized by any monomial")]
    Unrealizable(String),
    #[error("lattice point count requires a ray-based model")]
    NotRayBased,
    #[error("divisor needs {expected} coefficients, got {got}")]
    DivisorLength { expected: usize, got: usize },
    #[error("divisor polytope is unbounded")]
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelSource {
    Rays { rays: Vec<Vec<BigInt>>, allow_nonprimitive: bool },
    /// Per-variable degree coordinates (free part then torsion residues).
    Presentation { degrees: Vec<Vec<BigInt>>, torsion: Vec<BigInt> },
}

/// Everything needed to rebuild a model; kept on the model for export.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelSpec {
    pub name: String,
    pub dimension: usize,
    pub variables: Vec<String>,
    pub source: ModelSource,
    pub max_cones: Option<Vec<Vec<usize>>>,
    /// Declared degrees of the variables in the preferred basis, ray models only.
    pub display: Option<Vec<Vec<BigInt>>>,
}

impl ModelSpec {
    pub fn default_names(count: usize) -> Vec<String> {
        (1..=count).map(|i| format!("z{i}")).collect()
    }

    pub fn build(&self) -> Result<ToricModel, ModelError> {
        match &self.source {
            ModelSource::Rays { .. } => build_from_rays(self.clone()),
            ModelSource::Presentation { .. } => build_from_presentation(self.clone()),
        }
    }
}

/// `R_i = sum_j a_{i,j} z_j d/dz_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadialField {
    pub coefficients: Vec<Rational>,
}

impl RadialField {
    pub fn components(&self) -> Vec<Polynomial> {
        let n = self.coefficients.len();
        self.coefficients.iter().enumerate().map(|(j, a)| Polynomial::var(n, j).scale(a)).collect()
    }

    pub fn is_supported_on(&self, subset: &[usize]) -> bool {
        self.coefficients.iter().enumerate().all(|(j, a)| a.is_zero() || subset.contains(&j))
    }

    pub fn all_positive(&self) -> bool {
        self.coefficients.iter().all(|a| a.is_positive())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrrelevantIdeal {
    pub generators: Vec<Monomial>,
}

impl IrrelevantIdeal {
    /// Minimal variable sets `S` with `Z = union of {z_S = 0}`: the minimal
    /// sets meeting the support of every generator.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let supports: Vec<BTreeSet<usize>> = self.generators.iter().map(|m| m.support().collect()).collect();
        let vars: BTreeSet<usize> = supports.iter().flatten().copied().collect();
        let vars: Vec<usize> = vars.into_iter().collect();
        let mut covers: Vec<Vec<usize>> = Vec::new();
        // subsets by increasing size keep only minimal ones
        for size in 0..=vars.len() {
            for subset in subsets_of_size(&vars, size) {
                let hits_all = supports.iter().all(|s| subset.iter().any(|v| s.contains(v)));
                let minimal = covers.iter().all(|c| !c.iter().all(|v| subset.contains(v)));
                if hits_all && minimal {
                    covers.push(subset);
                }
            }
        }
        covers
    }

    pub fn polynomials(&self) -> Vec<Polynomial> {
        self.generators.iter().map(|m| Polynomial::from_term(m.clone(), Rational::one())).collect()
    }
}

pub(crate) fn subsets_of_size(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(items: &[usize], size: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, size, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(items, size, 0, &mut cur, &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricModel {
    spec: ModelSpec,
    class_group: AbelianGroupPresentation,
    basis_change: IntMatrix,
    grading: Grading,
    radial: Vec<RadialField>,
}

fn check_names(spec: &ModelSpec, count: usize) -> Result<(), ModelError> {
    if spec.variables.len() != count {
        return Err(ModelError::NameCount { expected: count, got: spec.variables.len() });
    }
    let mut seen = BTreeSet::new();
    for v in &spec.variables {
        if !seen.insert(v) {
            return Err(ModelError::DuplicateName(v.clone()));
        }
    }
    if let Some(cones) = &spec.max_cones {
        for c in cones {
            if let Some(&j) = c.iter().find(|&&j| j >= count) {
                return Err(ModelError::ConeIndex(j));
            }
        }
    }
    Ok(())
}

fn degrees_from(group: &AbelianGroupPresentation) -> Vec<DegreeClass> {
    (0..group.generators())
        .map(|j| {
            let mut e = vec![BigInt::zero(); group.generators()];
            e[j] = BigInt::one();
            let (f, t) = group.image(&e);
            DegreeClass::new(f, t, group.torsion.clone())
        })
        .collect()
}

fn finish(spec: ModelSpec, class_group: AbelianGroupPresentation, basis_change: IntMatrix) -> Result<ToricModel, ModelError> {
    let degrees = degrees_from(&class_group);
    for (d, name) in degrees.iter().zip(&spec.variables) {
        if d.is_zero() {
            return Err(ModelError::ZeroDegreeVariable(name.clone()));
        }
    }
    let rank = class_group.rank;
    let radial = (0..rank)
        .map(|i| RadialField {
            coefficients: degrees.iter().map(|d| Rational::from_integer(d.free()[i].clone())).collect(),
        })
        .collect();
    let grading = Grading::new(rank, class_group.torsion.clone(), degrees);
    Ok(ToricModel { spec, class_group, basis_change, grading, radial })
}

/// Builds a model from primitive rays spanning `R^n`.
pub fn build_from_rays(spec: ModelSpec) -> Result<ToricModel, ModelError> {
    let ModelSource::Rays { rays, allow_nonprimitive } = &spec.source else {
        return build_from_presentation(spec);
    };
    let n = spec.dimension;
    if rays.len() < n {
        return Err(ModelError::TooFewRays { dimension: n, got: rays.len() });
    }
    for (i, r) in rays.iter().enumerate() {
        if r.len() != n {
            return Err(ModelError::RayDimension { index: i, got: r.len(), expected: n });
        }
        let g = r.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if !allow_nonprimitive && !g.is_one() {
            return Err(ModelError::NonPrimitiveRay(i));
        }
        if g.is_zero() {
            return Err(ModelError::NonPrimitiveRay(i));
        }
    }
    check_names(&spec, rays.len())?;
    let pairing = pairing_matrix(n, rays);
    if smith_normal_form(&pairing).rank != n {
        return Err(ModelError::RaysDoNotSpan);
    }
    let snf_group = cokernel(&pairing);
    let (group, phi) = match &spec.display {
        None => {
            let dim = snf_group.rank + snf_group.torsion.len();
            (snf_group, IntMatrix::identity(dim))
        }
        Some(declared) => {
            let dim = snf_group.rank + snf_group.torsion.len();
            if declared.len() != rays.len() || declared.iter().any(|d| d.len() != dim) {
                return Err(ModelError::DisplayBasisRejected);
            }
            let mut projector = IntMatrix::from_rows(dim, declared).transpose();
            for (i, t) in snf_group.torsion.iter().enumerate() {
                for j in 0..projector.cols() {
                    let v = projector.get(snf_group.rank + i, j).mod_floor(t);
                    projector.set(snf_group.rank + i, j, v);
                }
            }
            if !snf_group.accepts_projector(&pairing, &projector) {
                return Err(ModelError::DisplayBasisRejected);
            }
            let display = AbelianGroupPresentation {
                rank: snf_group.rank,
                torsion: snf_group.torsion.clone(),
                projector,
            };
            let phi = snf_group.change_of_basis_to(&display).ok_or(ModelError::DisplayBasisRejected)?;
            (display, phi)
        }
    };
    finish(spec, group, phi)
}

/// Builds a model from declared variable degrees and torsion orders.
pub fn build_from_presentation(spec: ModelSpec) -> Result<ToricModel, ModelError> {
    let ModelSource::Presentation { degrees, torsion } = &spec.source else {
        return build_from_rays(spec);
    };
    let m = torsion.len();
    let width = degrees.first().map_or(0, Vec::len);
    if degrees.iter().any(|d| d.len() != width) || width < m {
        return Err(ModelError::DegreeShape);
    }
    let rank = width - m;
    if torsion.iter().any(|t| t < &BigInt::from(2)) || torsion.windows(2).any(|w| !w[1].is_multiple_of(&w[0])) {
        return Err(ModelError::TorsionOrders);
    }
    check_names(&spec, degrees.len())?;
    if spec.dimension + rank != degrees.len() {
        return Err(ModelError::RankDeficient { expected: degrees.len() - spec.dimension.min(degrees.len()), got: rank });
    }
    let free: Vec<Vec<BigInt>> = degrees.iter().map(|d| d[..rank].to_vec()).collect();
    let free_rank = smith_normal_form(&IntMatrix::from_rows(rank, &free)).rank;
    if free_rank != rank {
        return Err(ModelError::RankDeficient { expected: rank, got: free_rank });
    }
    let mut projector = IntMatrix::from_rows(width, degrees).transpose();
    for (i, t) in torsion.iter().enumerate() {
        for j in 0..projector.cols() {
            let v = projector.get(rank + i, j).mod_floor(t);
            projector.set(rank + i, j, v);
        }
    }
    let group = AbelianGroupPresentation { rank, torsion: torsion.clone(), projector };
    finish(spec, group, IntMatrix::identity(width))
}

impl ToricModel {
    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn name(&self) -> &str {
        &self.spec.name
    }

    pub fn dimension(&self) -> usize {
        self.spec.dimension
    }

    pub fn nvars(&self) -> usize {
        self.spec.variables.len()
    }

    pub fn variable_names(&self) -> &[String] {
        &self.spec.variables
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.spec.variables.iter().position(|v| v == name)
    }

    pub fn rays(&self) -> Option<&[Vec<BigInt>]> {
        match &self.spec.source {
            ModelSource::Rays { rays, .. } => Some(rays),
            ModelSource::Presentation { .. } => None,
        }
    }

    pub fn max_cones(&self) -> Option<&[Vec<usize>]> {
        self.spec.max_cones.as_deref()
    }

    pub fn class_group(&self) -> &AbelianGroupPresentation {
        &self.class_group
    }

    /// Map from SNF coordinates to the display coordinates used everywhere.
    pub fn basis_change(&self) -> &IntMatrix {
        &self.basis_change
    }

    pub fn grading(&self) -> &Grading {
        &self.grading
    }

    pub fn degrees(&self) -> &[DegreeClass] {
        self.grading.degrees()
    }

    pub fn rank(&self) -> usize {
        self.class_group.rank
    }

    pub fn radial_fields(&self) -> &[RadialField] {
        &self.radial
    }

    pub fn zero_degree(&self) -> DegreeClass {
        self.grading.zero_degree()
    }

    /// Degree of the torus-invariant divisor `sum a_j D_j`.
    pub fn divisor_degree(&self, a: &[BigInt]) -> Result<DegreeClass, ModelError> {
        if a.len() != self.nvars() {
            return Err(ModelError::DivisorLength { expected: self.nvars(), got: a.len() });
        }
        let (f, t) = self.class_group.image(a);
        Ok(DegreeClass::new(f, t, self.class_group.torsion.clone()))
    }

    pub fn homogeneous_degree(&self, f: &Polynomial) -> Result<Option<DegreeClass>, crate::ring::RingError> {
        self.grading.homogeneous_degree(f)
    }

    pub fn monomials_of_degree(&self, alpha: &DegreeClass) -> Result<Vec<Monomial>, crate::ring::RingError> {
        self.grading.monomials_of_degree(alpha)
    }

    pub fn nonnegative_coordinates(&self) -> Vec<usize> {
        self.grading.nonnegative_coordinates()
    }

    /// `theta_i(alpha) = sum_j a_{i,j} m_j` for an integer representative `m`
    /// of `alpha`; `i` is 0-based.
    pub fn theta(&self, i: usize, alpha: &DegreeClass) -> Result<Rational, ModelError> {
        if i >= self.radial.len() {
            return Err(ModelError::RadialIndex { index: i, count: self.radial.len() });
        }
        if alpha.rank() != self.rank() || alpha.orders() != self.class_group.torsion.as_slice() {
            return Err(ModelError::Unrealizable(alpha.to_string()));
        }
        let x = self.representative(alpha).ok_or_else(|| ModelError::Unrealizable(alpha.to_string()))?;
        Ok(self.radial[i]
            .coefficients
            .iter()
            .zip(&x)
            .map(|(a, m)| a * Rational::from_integer(m.clone()))
            .sum())
    }

    /// Integer exponent vector (entries may be negative) of degree `alpha`.
    pub fn representative(&self, alpha: &DegreeClass) -> Option<Vec<BigInt>> {
        let p = &self.class_group.projector;
        let (rank, m, n) = (self.rank(), self.class_group.torsion.len(), self.nvars());
        let mut cols: Vec<Vec<BigInt>> = (0..n).map(|j| p.column(j)).collect();
        for (i, t) in self.class_group.torsion.iter().enumerate() {
            let mut c = vec![BigInt::zero(); rank + m];
            c[rank + i] = t.clone();
            cols.push(c);
        }
        let aug = IntMatrix::from_rows(rank + m, &cols).transpose();
        let x = solve_integer_system(&aug, &alpha.coordinates())?;
        Some(x[..n].to_vec())
    }

    pub fn irrelevant_ideal(&self) -> Result<IrrelevantIdeal, ModelError> {
        let cones = self.spec.max_cones.as_ref().ok_or(ModelError::MissingCones)?;
        let n = self.nvars();
        let generators = cones
            .iter()
            .map(|c| Monomial::new((0..n).map(|j| u32::from(!c.contains(&j))).collect()))
            .collect();
        Ok(IrrelevantIdeal { generators })
    }

    /// Number of lattice points of `{m : <m, n_j> >= -a_j}`.
    pub fn count_lattice_points(&self, a: &[BigInt]) -> Result<u64, ModelError> {
        let rays = self.rays().ok_or(ModelError::NotRayBased)?;
        if a.len() != rays.len() {
            return Err(ModelError::DivisorLength { expected: rays.len(), got: a.len() });
        }
        let n = self.dimension();
        let mut sys = InequalitySystem::new(n);
        for (r, aj) in rays.iter().zip(a) {
            sys.push_int(r, &-aj);
        }
        let mut ranges = Vec::with_capacity(n);
        for v in 0..n {
            match sys.bounds(v) {
                Err(()) => return Ok(0),
                Ok((Some(lo), Some(hi))) => ranges.push((lo.ceil().to_integer(), hi.floor().to_integer())),
                Ok(_) => return Err(ModelError::Unbounded),
            }
        }
        if ranges.iter().any(|(lo, hi)| lo > hi) {
            return Ok(0);
        }
        let mut point: Vec<BigInt> = ranges.iter().map(|(lo, _)| lo.clone()).collect();
        let mut count = 0u64;
        loop {
            let inside = rays.iter().zip(a).all(|(r, aj)| {
                let s: BigInt = r.iter().zip(&point).map(|(x, y)| x * y).sum();
                s >= -aj
            });
            if inside {
                count += 1;
            }
            let mut v = 0;
            while v < n && point[v] == ranges[v].1 {
                point[v] = ranges[v].0.clone();
                v += 1;
            }
            if v == n {
                break;
            }
            point[v] += 1;
        }
        Ok(count)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn ray_model(rays: &[&[i64]], cones: Option<Vec<Vec<usize>>>) -> Result<ToricModel, ModelError> {
        let rays = ints(rays);
        build_from_rays(ModelSpec {
            name: "test".into(),
            dimension: rays[0].len(),
            variables: ModelSpec::default_names(rays.len()),
            source: ModelSource::Rays { rays, allow_nonprimitive: false },
            max_cones: cones,
            display: None,
        })
    }

    #[test]
    fn projective_plane() {
        let m = ray_model(&[&[1, 0], &[0, 1], &[-1, -1]], Some(vec![vec![0, 1], vec![1, 2], vec![0, 2]])).unwrap();
        assert_eq!(m.class_group().to_string(), "Z");
        let d: Vec<String> = m.degrees().iter().map(|d| d.to_string()).collect();
        assert_eq!(d, ["(1)", "(1)", "(1)"]);
        assert_eq!(m.radial_fields()[0].coefficients, vec![Rational::one(); 3]);
        let z = m.irrelevant_ideal().unwrap();
        let gens: Vec<Vec<u32>> = z.generators.iter().map(|g| g.exponents().to_vec()).collect();
        assert_eq!(gens, vec![vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]);
        assert_eq!(z.components(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn rejections() {
        assert_eq!(ray_model(&[&[1, 0], &[-1, 0]], None).unwrap_err(), ModelError::RaysDoNotSpan);
        assert_eq!(ray_model(&[&[2, 0], &[0, 1], &[-1, -1]], None).unwrap_err(), ModelError::NonPrimitiveRay(0));
        // the affine line plus a projective line: z3 has degree zero
        assert!(matches!(
            ray_model(&[&[1, 0], &[-1, 0], &[0, 1]], None).unwrap_err(),
            ModelError::ZeroDegreeVariable(_)
        ));
    }

    #[test]
    fn product_of_lines() {
        let m = ray_model(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]], Some(vec![vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3]]))
            .unwrap();
        assert_eq!(m.class_group().to_string(), "Z^2");
        let z = m.irrelevant_ideal().unwrap();
        assert_eq!(z.components(), vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn surface_with_torsion_and_display_basis() {
        let rays = ints(&[&[2, -1], &[-1, 2], &[-1, -1]]);
        let spec = ModelSpec {
            name: "s".into(),
            dimension: 2,
            variables: ModelSpec::default_names(3),
            source: ModelSource::Rays { rays, allow_nonprimitive: false },
            max_cones: Some(vec![vec![0, 1], vec![1, 2], vec![0, 2]]),
            display: Some(ints(&[&[1, 0], &[1, 2], &[1, 1]])),
        };
        let m = spec.build().unwrap();
        let d: Vec<String> = m.degrees().iter().map(|d| d.to_string()).collect();
        assert_eq!(d, ["(1,[0])", "(1,[2])", "(1,[1])"]);
        let alpha = DegreeClass::from_i64(&[3], &[0], &[3]);
        assert_eq!(m.theta(0, &alpha).unwrap(), Rational::from_integer(3.into()));
        let mut bad = spec.clone();
        bad.display = Some(ints(&[&[1, 0], &[1, 1], &[1, 1]]));
        assert_eq!(bad.build().unwrap_err(), ModelError::DisplayBasisRejected);
    }

    #[test]
    fn presentation_route() {
        let spec = ModelSpec {
            name: "scroll".into(),
            dimension: 2,
            variables: ModelSpec::default_names(4),
            source: ModelSource::Presentation { degrees: ints(&[&[1, 0], &[1, 0], &[-1, 1], &[-2, 1]]), torsion: vec![] },
            max_cones: None,
            display: None,
        };
        let m = spec.build().unwrap();
        let r1: Vec<Rational> = [1, 1, -1, -2].iter().map(|&x| Rational::from_integer(x.into())).collect();
        assert_eq!(m.radial_fields()[0].coefficients, r1);
        assert_eq!(m.nonnegative_coordinates(), vec![2]);
        assert_eq!(m.count_lattice_points(&vec![BigInt::zero(); 4]), Err(ModelError::NotRayBased));
    }

    #[test]
    fn lattice_points_of_plane_divisors() {
        let m = ray_model(&[&[1, 0], &[0, 1], &[-1, -1]], None).unwrap();
        for (a, expected) in [(0, 1), (1, 3), (2, 6), (3, 10)] {
            assert_eq!(m.count_lattice_points(&[a.into(), 0.into(), 0.into()]).unwrap(), expected);
        }
    }
}
