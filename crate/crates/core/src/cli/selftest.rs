use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::families::{self, run_fixture, FixtureRegistry, Params};
use crate::groebner::buchberger;
use crate::lattice::{smith_normal_form, IntMatrix};
use crate::model::ToricModel;
use crate::normal_form::euler_check;
use crate::ring::{DegreeClass, Monomial, MonomialOrder, Polynomial, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelftestLine {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

struct Tally {
    line: SelftestLine,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally { line: SelftestLine { name, cases: 0, failures: 0, first_failure: None } }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.line.cases += 1;
        if !ok {
            self.line.failures += 1;
            if self.line.first_failure.is_none() {
                self.line.first_failure = Some(describe());
            }
        }
    }
}

fn random_matrix(rng: &mut ChaCha8Rng) -> IntMatrix {
    let rows = rng.gen_range(1..=5);
    let cols = rng.gen_range(1..=5);
    let rows: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-5..=5)).collect()).collect();
    IntMatrix::from_rows(cols, &rows)
}

fn smith_ok(a: &IntMatrix) -> bool {
    let s = smith_normal_form(a);
    let diag_ok = (0..s.d.rows()).all(|i| (0..s.d.cols()).all(|j| i == j || s.d.get(i, j).is_zero()));
    let f = s.invariant_factors();
    let chain = f.iter().all(|x| x.is_positive()) && f.windows(2).all(|w| (&w[1] % &w[0]).is_zero());
    s.u.mul(a).mul(&s.v) == s.d && s.u.is_unimodular() && s.v.is_unimodular() && diag_ok && chain
}

fn sample_models() -> Vec<ToricModel> {
    [
        families::weighted_projective(&[1, 1, 1]),
        families::weighted_projective(&[1, 1, 2]),
        families::multiprojective(&[1, 1]),
        families::rational_scroll(&[1, 1]),
        families::surface_021(),
    ]
    .into_iter()
    .map(|m| m.expect("sample models build"))
    .collect()
}

fn random_degree(model: &ToricModel, rng: &mut ChaCha8Rng) -> DegreeClass {
    let e: Vec<u32> = (0..model.nvars()).map(|_| rng.gen_range(0..=2)).collect();
    model.grading().monomial_degree(&Monomial::new(e))
}

fn random_poly(n: usize, terms: usize, rng: &mut ChaCha8Rng) -> Polynomial {
    let mut p = Polynomial::zero(n);
    for _ in 0..terms {
        let e: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=2)).collect();
        p.add_term(Monomial::new(e), Rational::from_integer(rng.gen_range(-4i64..=4).into()));
    }
    p
}

/// Runs the property checks with `cases` random instances each.
pub fn run_selftest(seed: u64, cases: usize) -> Vec<SelftestLine> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();

    let mut t = Tally::new("smith normal form");
    for _ in 0..cases {
        let a = random_matrix(&mut rng);
        t.record(smith_ok(&a), || format!("{a:?}"));
    }
    out.push(t.line);

    let models = sample_models();
    let mut t = Tally::new("euler identity");
    for _ in 0..cases {
        let m = &models[rng.gen_range(0..models.len())];
        let alpha = random_degree(m, &mut rng);
        if let Ok(Some(f)) = m.grading().random_homogeneous(&alpha, &mut rng) {
            let ok = euler_check(m, &f).map(|v| v.iter().all(|&b| b)).unwrap_or(false);
            t.record(ok, || format!("{} on {}", f.to_string_with(m.variable_names()), m.name()));
        }
    }
    out.push(t.line);

    let mut t = Tally::new("degree additivity");
    for _ in 0..cases {
        let m = &models[rng.gen_range(0..models.len())];
        let (a, b) = (random_degree(m, &mut rng), random_degree(m, &mut rng));
        let g = m.grading();
        if let (Ok(Some(p)), Ok(Some(q))) = (g.random_homogeneous(&a, &mut rng), g.random_homogeneous(&b, &mut rng)) {
            let ok = m.homogeneous_degree(&(&p * &q)).ok().flatten() == Some(&a + &b);
            t.record(ok, || format!("{a} + {b} on {}", m.name()));
        }
    }
    out.push(t.line);

    let mut t = Tally::new("exact division");
    for _ in 0..cases {
        let p = random_poly(3, 3, &mut rng);
        let mut q = random_poly(3, 2, &mut rng);
        if q.is_zero() {
            q = Polynomial::one(3);
        }
        let ok = (&p * &q).divide_exact(&q).ok().flatten() == Some(p.clone());
        t.record(ok, || format!("{p:?} / {q:?}"));
    }
    out.push(t.line);

    let mut t = Tally::new("groebner generator order");
    for _ in 0..cases {
        let gens: Vec<Polynomial> = (0..2).map(|_| random_poly(3, 2, &mut rng)).collect();
        let mut rev = gens.clone();
        rev.reverse();
        let a = buchberger(&gens, MonomialOrder::Grevlex);
        let b = buchberger(&rev, MonomialOrder::Grevlex);
        let ok = a.generators() == b.generators() && gens.iter().all(|g| a.contains(g));
        t.record(ok, || format!("{gens:?}"));
    }
    out.push(t.line);

    let mut t = Tally::new("fixture defaults");
    let registry = FixtureRegistry::standard();
    for name in registry.names() {
        let ok = registry.build(name, &Params::new()).map(|fx| run_fixture(&fx).all_pass()).unwrap_or(false);
        t.record(ok, || name.to_string());
    }
    out.push(t.line);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_is_clean() {
        for line in run_selftest(1, 5) {
            assert_eq!(line.failures, 0, "{line:?}");
        }
    }
}
