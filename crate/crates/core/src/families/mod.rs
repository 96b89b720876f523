//! Standard toric models and the worked example fixtures.

mod fixtures;
mod params;

pub use fixtures::{
    admissible_wps2, run_fixture, CheckLine, Expected, ExpectedValue, Fixture, FixtureFamily, FixtureRegistry, FixtureRun, Origin,
};
pub use params::Params;

use num_bigint::BigInt;
use num_integer::Integer;
use thiserror::Error;

use crate::lattice::{smith_normal_form, IntMatrix};
use crate::model::{subsets_of_size, ModelError, ModelSource, ModelSpec, ToricModel};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("weights must be positive")]
    NonPositiveWeight,
    #[error("weights must have gcd 1")]
    WeightGcd,
    #[error("need at least {0} entries")]
    TooShort(usize),
    #[error("unknown fixture '{0}'")]
    UnknownFixture(String),
    #[error("parameter '{key}': {message}")]
    Parameter { key: String, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl FamilyError {
    pub(crate) fn param(key: &str, message: impl Into<String>) -> Self {
        FamilyError::Parameter { key: key.to_string(), message: message.into() }
    }
}

fn big_rows(rows: Vec<Vec<i64>>) -> Vec<Vec<BigInt>> {
    rows.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect()
}

fn list(xs: &[i64]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// `P(w_0, ..., w_n)`; rays are the images of the unit vectors in
/// `Z^{n+1} / Z w`, coordinates taken from a Smith normal form.
pub fn weighted_projective(omega: &[i64]) -> Result<ToricModel, FamilyError> {
    if omega.len() < 2 {
        return Err(FamilyError::TooShort(2));
    }
    if omega.iter().any(|&w| w < 1) {
        return Err(FamilyError::NonPositiveWeight);
    }
    if omega.iter().fold(0i64, |g, &w| g.gcd(&w)) != 1 {
        return Err(FamilyError::WeightGcd);
    }
    let n = omega.len() - 1;
    let col: Vec<Vec<i64>> = omega.iter().map(|&w| vec![w]).collect();
    let snf = smith_normal_form(&IntMatrix::from_rows(1, &col));
    let rays: Vec<Vec<BigInt>> = (0..=n).map(|i| (1..=n).map(|r| snf.u.get(r, i).clone()).collect()).collect();
    let all: Vec<usize> = (0..=n).collect();
    let spec = ModelSpec {
        name: format!("P({})", list(omega)),
        dimension: n,
        variables: (0..=n).map(|i| format!("z{i}")).collect(),
        source: ModelSource::Rays { rays, allow_nonprimitive: true },
        max_cones: Some(subsets_of_size(&all, n)),
        display: Some(omega.iter().map(|&w| vec![BigInt::from(w)]).collect()),
    };
    Ok(spec.build()?)
}

/// `P^{n_1} x ... x P^{n_r}` with variables `z{f}_{j}`, `j = 0..=n_f`.
pub fn multiprojective(ns: &[usize]) -> Result<ToricModel, FamilyError> {
    if ns.is_empty() {
        return Err(FamilyError::TooShort(1));
    }
    if ns.contains(&0) {
        return Err(FamilyError::param("n", "factor dimensions must be at least 1"));
    }
    let dim: usize = ns.iter().sum();
    let r = ns.len();
    let mut rays = Vec::new();
    let mut names = Vec::new();
    let mut display = Vec::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut offset = 0;
    for (f, &n) in ns.iter().enumerate() {
        let mut block = Vec::new();
        for j in 0..=n {
            let mut ray = vec![0i64; dim];
            if j == 0 {
                for x in &mut ray[offset..offset + n] {
                    *x = -1;
                }
            } else {
                ray[offset + j - 1] = 1;
            }
            block.push(rays.len());
            rays.push(ray);
            names.push(format!("z{}_{}", f + 1, j));
            let mut d = vec![0i64; r];
            d[f] = 1;
            display.push(d);
        }
        blocks.push(block);
        offset += n;
    }
    // one omitted variable per factor
    let mut cones: Vec<Vec<usize>> = vec![Vec::new()];
    for block in &blocks {
        let mut next = Vec::new();
        for c in &cones {
            for &skip in block {
                let mut c = c.clone();
                c.extend(block.iter().copied().filter(|&j| j != skip));
                next.push(c);
            }
        }
        cones = next;
    }
    for c in &mut cones {
        c.sort_unstable();
    }
    let label: Vec<String> = ns.iter().map(|n| format!("P^{n}")).collect();
    let spec = ModelSpec {
        name: label.join("x"),
        dimension: dim,
        variables: names,
        source: ModelSource::Rays { rays: big_rows(rays), allow_nonprimitive: false },
        max_cones: Some(cones),
        display: Some(big_rows(display)),
    };
    Ok(spec.build()?)
}

fn scroll_names(n: usize) -> Vec<String> {
    let mut names = vec!["z1_1".to_string(), "z1_2".to_string()];
    names.extend((1..=n).map(|i| format!("z2_{i}")));
    names
}

fn scroll_cones(n: usize) -> Vec<Vec<usize>> {
    let mut cones = Vec::new();
    for p in 0..2 {
        for q in 0..n {
            cones.push((0..n + 2).filter(|&j| j != p && j != q + 2).collect());
        }
    }
    cones
}

fn scroll_degrees(a: &[i64]) -> Vec<Vec<i64>> {
    let mut d = vec![vec![1, 0], vec![1, 0]];
    d.extend(a.iter().map(|&x| vec![-x, 1]));
    d
}

/// `F(a_1, ..., a_n)` from its degree presentation.
pub fn rational_scroll(a: &[i64]) -> Result<ToricModel, FamilyError> {
    if a.is_empty() {
        return Err(FamilyError::TooShort(1));
    }
    let n = a.len();
    let spec = ModelSpec {
        name: format!("F({})", list(a)),
        dimension: n,
        variables: scroll_names(n),
        source: ModelSource::Presentation { degrees: big_rows(scroll_degrees(a)), torsion: vec![] },
        max_cones: Some(scroll_cones(n)),
        display: None,
    };
    Ok(spec.build()?)
}

/// `F(a_1, ..., a_n)` from a fan, with the presentation degrees declared as
/// the display basis. Needs `n >= 2`: for `n = 1` the last variable has no ray.
pub fn rational_scroll_from_rays(a: &[i64]) -> Result<ToricModel, FamilyError> {
    if a.len() < 2 {
        return Err(FamilyError::TooShort(2));
    }
    let n = a.len();
    let last = a[n - 1];
    let mut first = vec![1i64];
    first.resize(n, 0);
    let mut second = vec![-1i64];
    second.extend(a[..n - 1].iter().map(|&x| x - last));
    let mut rays = vec![first, second];
    for i in 0..n {
        let mut r = vec![0i64; n];
        if i + 1 < n {
            r[i + 1] = 1;
        } else {
            for x in &mut r[1..] {
                *x = -1;
            }
        }
        rays.push(r);
    }
    let spec = ModelSpec {
        name: format!("F({})", list(a)),
        dimension: n,
        variables: scroll_names(n),
        source: ModelSource::Rays { rays: big_rows(rays), allow_nonprimitive: false },
        max_cones: Some(scroll_cones(n)),
        display: Some(big_rows(scroll_degrees(a))),
    };
    Ok(spec.build()?)
}

/// The fake projective plane with rays `(2,-1), (-1,2), (-1,-1)`; the torsion
/// part is displayed so that the degrees are `(1,[0]), (1,[2]), (1,[1])`.
pub fn surface_021() -> Result<ToricModel, FamilyError> {
    let spec = ModelSpec {
        name: "P_Delta(0,2,1)".into(),
        dimension: 2,
        variables: ModelSpec::default_names(3),
        source: ModelSource::Rays { rays: big_rows(vec![vec![2, -1], vec![-1, 2], vec![-1, -1]]), allow_nonprimitive: false },
        max_cones: Some(vec![vec![0, 1], vec![1, 2], vec![0, 2]]),
        display: Some(big_rows(vec![vec![1, 0], vec![1, 2], vec![1, 1]])),
    };
    Ok(spec.build()?)
}

/// Same surface from its degree presentation.
pub fn surface_021_presentation() -> Result<ToricModel, FamilyError> {
    let spec = ModelSpec {
        name: "P_Delta(0,2,1)".into(),
        dimension: 2,
        variables: ModelSpec::default_names(3),
        source: ModelSource::Presentation {
            degrees: big_rows(vec![vec![1, 0], vec![1, 2], vec![1, 1]]),
            torsion: vec![BigInt::from(3)],
        },
        max_cones: Some(vec![vec![0, 1], vec![1, 2], vec![0, 2]]),
        display: None,
    };
    Ok(spec.build()?)
}

/// Eight rays `(+-1, +-1, +-1)`; only the class group is meaningful here.
pub fn octahedron() -> Result<ToricModel, FamilyError> {
    let mut rays = Vec::new();
    for s in 0..8 {
        rays.push(vec![if s & 4 == 0 { 1 } else { -1 }, if s & 2 == 0 { 1 } else { -1 }, if s & 1 == 0 { 1 } else { -1 }]);
    }
    let spec = ModelSpec {
        name: "octahedron".into(),
        dimension: 3,
        variables: ModelSpec::default_names(8),
        source: ModelSource::Rays { rays: big_rows(rays), allow_nonprimitive: false },
        max_cones: None,
        display: None,
    };
    Ok(spec.build()?)
}
