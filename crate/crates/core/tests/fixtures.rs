//! Independent oracles for the fixture values marked as derived.
//!
//! Derivatives come from complex-step evaluation, degrees from exponent sums
//! over the variable degrees, bounds from an explicit maximum over pairs and
//! Lie(G) membership from a pointwise span test.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toric_foliation::audit::AuditReport;
use toric_foliation::families::{run_fixture, ExpectedValue, Fixture, FixtureRegistry, Origin, Params};
use toric_foliation::foliation::VectorField;
use toric_foliation::normal_form::Decomposition;
use toric_foliation::ring::{DegreeClass, Monomial, Polynomial, Rational};

const STEP: f64 = 1e-30;
const TOL: f64 = 1e-9;

fn instances() -> Vec<(&'static str, Params)> {
    vec![
        ("wps2", Params::new()),
        ("wps2", Params::new().with("omega", "1,3,2,2").with("d", "6,2,3,3")),
        ("wps2", Params::new().with("omega", "1,1,1,1").with("d", "2,2,2,2").with("c", "3,-2/5")),
        ("ms2", Params::new()),
        ("ms2", Params::new().with("n", "3").with("a", "2/3,-1").with("b", "5,1/7")),
        ("tor2", Params::new()),
        ("tor2", Params::new().with("m", "6")),
        ("exa", Params::new()),
        ("exa", Params::new().with("alpha1", "2").with("alpha2", "3").with("c", "-1/2,4")),
        ("exb", Params::new()),
        ("exb", Params::new().with("alpha", "1").with("beta", "2")),
        ("exb", Params::new().with("alpha", "3").with("beta", "1")),
    ]
}

fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(0.5..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 }).collect()
}

fn eval(p: &Polynomial, x: &[f64]) -> f64 {
    let z: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    p.eval_complex(&z).re
}

/// `d f / d z_i` at a real point by the complex step.
fn partial(f: &Polynomial, x: &[f64], i: usize) -> f64 {
    let mut z: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    z[i].im = STEP;
    f.eval_complex(&z).im / STEP
}

fn close(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= TOL * scale.max(1.0)
}

fn degree_sum(fx: &Fixture, m: &Monomial) -> DegreeClass {
    let mut d = fx.model.zero_degree();
    for (j, &e) in m.exponents().iter().enumerate() {
        for _ in 0..e {
            d = &d + &fx.model.degrees()[j];
        }
    }
    d
}

/// `deg(term) - deg(z_i)` over every term of every component.
fn component_degrees(fx: &Fixture, x: &VectorField) -> BTreeSet<DegreeClass> {
    let mut out = BTreeSet::new();
    for (i, p) in x.components.iter().enumerate() {
        for (m, _) in p.terms() {
            out.insert(&degree_sum(fx, m) - &fx.model.degrees()[i]);
        }
    }
    out
}

fn hypersurface_degree(fx: &Fixture) -> DegreeClass {
    let degrees: BTreeSet<DegreeClass> = fx.hypersurface.terms().map(|(m, _)| degree_sum(fx, m)).collect();
    assert_eq!(degrees.len(), 1, "{}", fx.name);
    degrees.into_iter().next().unwrap()
}

fn cofactor_holds(fx: &Fixture, x: &VectorField, g: &Polynomial, rng: &mut ChaCha8Rng) -> bool {
    let n = fx.model.nvars();
    (0..8).all(|_| {
        let p = random_point(rng, n);
        let xf: f64 = (0..n).map(|i| eval(&x.components[i], &p) * partial(&fx.hypersurface, &p, i)).sum();
        let gf = eval(g, &p) * eval(&fx.hypersurface, &p);
        close(xf, gf, xf.abs() + gf.abs())
    })
}

/// Rank of a small rational matrix.
fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let t = &rows[i][c] / &rows[r][c];
                for j in 0..cols {
                    let v = &rows[r][j] * &t;
                    rows[i][j] -= v;
                }
            }
        }
        r += 1;
    }
    r
}

/// A member of Lie(G) lies in the span of the radial fields at every point,
/// so one point outside the span proves non-membership.
fn outside_lie_g(fx: &Fixture, rng: &mut ChaCha8Rng) -> bool {
    let n = fx.model.nvars();
    (0..5).any(|_| {
        let p: Vec<Rational> = (0..n).map(|_| Rational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=5).into())).collect();
        let mut rows: Vec<Vec<Rational>> =
            fx.model.radial_fields().iter().map(|r| r.coefficients.iter().zip(&p).map(|(a, z)| a * z).collect()).collect();
        let base = rank(rows.clone());
        rows.push(fx.field.components.iter().map(|c| c.eval_rational(&p)).collect());
        rank(rows) > base
    })
}

fn reconstructs(fx: &Fixture, d: &Decomposition, rng: &mut ChaCha8Rng) -> bool {
    let n = fx.model.nvars();
    let f = &fx.hypersurface;
    let a = &fx.model.radial_fields()[d.radial_index].coefficients;
    let theta = d.theta.to_f64().unwrap();
    (0..8).all(|_| {
        let p = random_point(rng, n);
        let grad: Vec<f64> = (0..n).map(|i| partial(f, &p, i)).collect();
        let g = eval(&d.cofactor, &p);
        (0..n).all(|i| {
            let want = if d.index_set.contains(&i) { eval(&fx.field.components[i], &p) } else { 0.0 };
            let mut got = 0.0;
            for (&(j, k), pjk) in &d.pjk {
                let v = eval(pjk, &p);
                if i == k {
                    got += v * grad[j];
                }
                if i == j {
                    got -= v * grad[k];
                }
            }
            if d.index_set.contains(&i) {
                got += g / theta * a[i].to_f64().unwrap() * p[i];
            }
            close(got, want, want.abs() + 1.0)
        })
    })
}

fn degree_law(fx: &Fixture, d: &Decomposition) -> bool {
    let restricted = VectorField {
        components: (0..fx.model.nvars())
            .map(|i| if d.index_set.contains(&i) { fx.field.components[i].clone() } else { Polynomial::zero(fx.model.nvars()) })
            .collect(),
    };
    let degs = component_degrees(fx, &restricted);
    let [deg_f] = degs.iter().collect::<Vec<_>>()[..] else { return false };
    let deg_v = hypersurface_degree(fx);
    d.pjk.iter().filter(|(_, p)| !p.is_zero()).all(|(&(j, k), p)| {
        let want = &(&(deg_f + &fx.model.degrees()[j]) + &fx.model.degrees()[k]) - &deg_v;
        p.terms().all(|(m, _)| degree_sum(fx, m) == want)
    })
}

/// `deg(F)_k + max pair` for every candidate foliation degree, and
/// `deg(V)_k`; `k` is 1-based.
fn bounds(fx: &Fixture, k: usize) -> (Vec<BigInt>, BigInt) {
    let vars: Vec<usize> = fx.options.subset.clone().unwrap_or_else(|| (0..fx.model.nvars()).collect());
    let mut best: Option<BigInt> = None;
    for (a, &i) in vars.iter().enumerate() {
        for &j in &vars[a + 1..] {
            let s = fx.model.degrees()[i].coordinate(k) + fx.model.degrees()[j].coordinate(k);
            best = Some(best.map_or(s.clone(), |b: BigInt| b.max(s)));
        }
    }
    let pair = best.unwrap();
    let bound = component_degrees(fx, &fx.field).iter().map(|d| d.coordinate(k) + &pair).collect();
    (bound, hypersurface_degree(fx).coordinate(k).clone())
}

fn slacks(fx: &Fixture, k: usize) -> Vec<BigInt> {
    let (bound, actual) = bounds(fx, k);
    bound.into_iter().map(|b| b - &actual).collect()
}

fn check_derived(fx: &Fixture, audit: &AuditReport, key: &str, value: &ExpectedValue, rng: &mut ChaCha8Rng) {
    let names = fx.model.variable_names();
    match (key, value) {
        ("cofactor", ExpectedValue::Poly(g)) => assert!(cofactor_holds(fx, &fx.field, g, rng), "{}: cofactor", fx.name),
        (k, ExpectedValue::Poly(g)) if k.starts_with("cofactor_") => {
            let part = &k["cofactor_".len()..];
            let (_, x) = fx.parts.iter().find(|(n, _)| n == part).unwrap();
            assert!(cofactor_holds(fx, x, g, rng), "{}: {k}", fx.name);
        }
        ("lie_g_member", ExpectedValue::Flag(member)) => assert_eq!(!outside_lie_g(fx, rng), *member, "{}", fx.name),
        ("decomposition_valid", ExpectedValue::Flag(valid)) => {
            let d = audit.decomposition.as_ref().expect("audit decomposition");
            assert_eq!(reconstructs(fx, d, rng) && degree_law(fx, d), *valid, "{}: decomposition", fx.name);
        }
        ("reference_decomposition_valid", ExpectedValue::Flag(valid)) => {
            let d = fx.reference_decomposition.as_ref().expect("reference decomposition");
            assert_eq!(reconstructs(fx, d, rng) && degree_law(fx, d), *valid, "{}: reference", fx.name);
        }
        (k, ExpectedValue::Int(s)) if k.starts_with("slack_k") => {
            let coord: usize = k["slack_k".len()..].parse().unwrap();
            assert_eq!(slacks(fx, coord), vec![s.clone()], "{}: {k}", fx.name);
        }
        (k, ExpectedValue::Int(b)) if k.starts_with("bound_k") => {
            let coord: usize = k["bound_k".len()..].parse().unwrap();
            assert_eq!(bounds(fx, coord).0, vec![b.clone()], "{}: {k}", fx.name);
        }
        (k, ExpectedValue::Int(a)) if k.starts_with("actual_k") => {
            let coord: usize = k["actual_k".len()..].parse().unwrap();
            assert_eq!(&bounds(fx, coord).1, a, "{}: {k}", fx.name);
        }
        ("deg_f", ExpectedValue::Text(t)) => {
            assert_eq!(t, "inconsistent");
            assert!(component_degrees(fx, &fx.field).len() > 1, "{}", fx.name);
        }
        ("deg_f_candidates", ExpectedValue::Text(t)) => {
            let listed: Vec<String> = component_degrees(fx, &fx.field).iter().map(|d| d.to_string()).collect();
            assert_eq!(&listed.join(", "), t, "{}", fx.name);
        }
        ("inequality_fails", ExpectedValue::Flag(fails)) => {
            let any_negative = (1..=fx.model.rank()).flat_map(|k| slacks(fx, k)).any(|s| s < BigInt::zero());
            assert_eq!(any_negative, *fails, "{}", fx.name);
        }
        ("verdict", ExpectedValue::Text(v)) => {
            let consistent = component_degrees(fx, &fx.field).len() == 1;
            let invariant = {
                let g = audit.cofactor.clone().unwrap_or_else(|| Polynomial::zero(fx.model.nvars()));
                audit.cofactor.is_some() && cofactor_holds(fx, &fx.field, &g, rng)
            };
            let first = if consistent && invariant && outside_lie_g(fx, rng) { "bound asserted" } else { "hypotheses violated" };
            let holds = (1..=fx.model.rank()).filter(|k| audit.eligible_k.contains(k)).flat_map(|k| slacks(fx, k)).all(|s| s >= BigInt::zero());
            let second = if holds { "inequality holds" } else { "inequality fails" };
            assert_eq!(v, &format!("{first}; {second}"), "{}", fx.name);
        }
        _ => panic!("{}: no oracle for derived value {key} = {:?} over {names:?}", fx.name, value),
    }
}

#[test]
fn derived_values_match_independent_oracles() {
    let registry = FixtureRegistry::standard();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut covered = BTreeSet::new();
    for (name, params) in instances() {
        let fx = registry.build(name, &params).unwrap();
        let run = run_fixture(&fx);
        for (key, e) in &fx.expected {
            if e.origin == Origin::Derived {
                check_derived(&fx, &run.audit, key, &e.value, &mut rng);
                covered.insert(format!("{name}:{key}"));
            }
        }
    }
    assert!(covered.len() >= 30, "{covered:?}");
}

#[test]
fn exb_cofactor_from_the_monomial_formula() {
    // f = z^e is a monomial, so X(f) / f = sum_i e_i P_i / z_i
    let registry = FixtureRegistry::standard();
    for (a, b) in [(1u32, 1u32), (2, 5), (5, 3)] {
        let fx = registry.build("exb", &Params::new().with("alpha", a.to_string()).with("beta", b.to_string())).unwrap();
        let (m, _) = fx.hypersurface.terms().next().unwrap();
        let n = fx.model.nvars();
        let mut g = Polynomial::zero(n);
        for (i, &e) in m.exponents().iter().enumerate().filter(|(_, &e)| e > 0) {
            for (t, c) in fx.field.components[i].terms() {
                let mut exps = t.exponents().to_vec();
                assert!(exps[i] > 0, "P_{i} is not divisible by z_{i}");
                exps[i] -= 1;
                g.add_term(Monomial::new(exps), c * Rational::from_integer(e.into()));
            }
        }
        let run = run_fixture(&fx);
        assert_eq!(run.audit.cofactor.as_ref(), Some(&g), "exb({a},{b})");
    }
}

#[test]
fn origin_tags_cover_every_fixture_value() {
    let registry = FixtureRegistry::standard();
    for (name, params) in instances() {
        let fx = registry.build(name, &params).unwrap();
        assert!(!fx.expected.is_empty());
        let run = run_fixture(&fx);
        assert_eq!(run.checks.len(), fx.expected.len());
        assert!(run.all_pass(), "{}", run.to_text());
    }
}
