use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::params::rational_list_text;
use super::{multiprojective, surface_021, weighted_projective, FamilyError, Params};
use crate::audit::{audit_case, AuditOptions, AuditReport, QuasiSmoothness};
use crate::foliation::{invariance_cofactor, VectorField};
use crate::groebner::{default_power_cap, regular_subsequence_check, sing_inside_irrelevant};
use crate::model::ToricModel;
use crate::normal_form::{verify_decomposition, Decomposition};
use crate::ring::{DegreeClass, Monomial, Polynomial, Rational};

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    /// Stated with the published example.
    Stated,
    /// Immediate from the definitions.
    Trivial,
    /// Worked out by hand; the test suite carries an independent oracle.
    Derived,
}

impl Origin {
    pub fn as_str(&self) -> &'static str {
        match self {
            Origin::Stated => "stated",
            Origin::Trivial => "trivial",
            Origin::Derived => "derived",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExpectedValue {
    Degree(DegreeClass),
    Poly(Polynomial),
    Flag(bool),
    Int(BigInt),
    Text(String),
}

impl ExpectedValue {
    fn render(&self, names: &[String]) -> String {
        match self {
            ExpectedValue::Degree(d) => d.to_string(),
            ExpectedValue::Poly(p) => p.to_string_with(names),
            ExpectedValue::Flag(b) => b.to_string(),
            ExpectedValue::Int(n) => n.to_string(),
            ExpectedValue::Text(t) => t.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expected {
    pub value: ExpectedValue,
    pub origin: Origin,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixture {
    pub name: String,
    pub model: ToricModel,
    pub field: VectorField,
    pub hypersurface: Polynomial,
    /// Named summands of `field` that are checked separately.
    pub parts: Vec<(String, VectorField)>,
    pub expected: BTreeMap<String, Expected>,
    /// Torsion relabeling applied to expected degrees before comparison.
    pub torsion_units: Vec<BigInt>,
    pub options: AuditOptions,
    pub reference_decomposition: Option<Decomposition>,
}

impl Fixture {
    fn new(name: String, model: ToricModel, field: VectorField, hypersurface: Polynomial) -> Self {
        let torsion_units = vec![BigInt::one(); model.class_group().torsion.len()];
        Fixture {
            name,
            model,
            field,
            hypersurface,
            parts: Vec::new(),
            expected: BTreeMap::new(),
            torsion_units,
            options: AuditOptions::default(),
            reference_decomposition: None,
        }
    }

    fn expect(&mut self, key: &str, value: ExpectedValue, origin: Origin) {
        self.expected.insert(key.to_string(), Expected { value, origin });
    }

    fn expect_comparison(&mut self, k: usize, bound: BigInt, actual: BigInt, origin: Origin) {
        let slack = &bound - &actual;
        self.expect(&format!("bound_k{k}"), ExpectedValue::Int(bound), origin);
        self.expect(&format!("actual_k{k}"), ExpectedValue::Int(actual), origin);
        self.expect(&format!("slack_k{k}"), ExpectedValue::Int(slack), Origin::Derived);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckLine {
    pub key: String,
    pub origin: Origin,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixtureRun {
    pub fixture: String,
    pub audit: AuditReport,
    pub checks: Vec<CheckLine>,
}

impl FixtureRun {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// 2 on any mismatch, otherwise the audit's own code.
    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            self.audit.exit_code()
        } else {
            2
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "fixture: {}", self.fixture);
        for c in &self.checks {
            let _ = writeln!(
                s,
                "[{}] {} ({}): expected {}, actual {}",
                if c.pass { "pass" } else { "FAIL" },
                c.key,
                c.origin.as_str(),
                c.expected,
                c.actual
            );
        }
        s.push_str(&self.audit.to_text());
        s
    }

    pub fn to_json(&self) -> Value {
        json!({
            "fixture": self.fixture,
            "checks": self.checks.iter().map(|c| json!({
                "key": c.key,
                "origin": c.origin.as_str(),
                "expected": c.expected,
                "actual": c.actual,
                "pass": c.pass,
            })).collect::<Vec<_>>(),
            "audit": self.audit.to_json(),
        })
    }
}

fn actual_value(fx: &Fixture, audit: &AuditReport, key: &str) -> ExpectedValue {
    let f = &fx.hypersurface;
    let cap = fx.options.power_cap.unwrap_or_else(|| default_power_cap(f));
    let text = |s: &str| ExpectedValue::Text(s.to_string());
    if let Some(part) = key.strip_prefix("cofactor_") {
        return match fx.parts.iter().find(|(n, _)| n == part) {
            Some((_, x)) => match invariance_cofactor(x, f) {
                Ok(Some(g)) => ExpectedValue::Poly(g),
                _ => text("not invariant"),
            },
            None => text("no such part"),
        };
    }
    for (prefix, which) in [("bound_k", 0), ("actual_k", 1), ("slack_k", 2)] {
        if let Some(k) = key.strip_prefix(prefix).and_then(|k| k.parse::<usize>().ok()) {
            return match audit.comparisons.iter().find(|c| c.k == k) {
                Some(c) => ExpectedValue::Int([&c.bound, &c.actual, &c.slack][which].clone()),
                None => text("not compared"),
            };
        }
    }
    match key {
        "deg_f" => audit.deg_f.clone().map_or_else(|| text("inconsistent"), ExpectedValue::Degree),
        "deg_f_candidates" => {
            text(&audit.deg_f_candidates.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(", "))
        }
        "deg_v" => audit.deg_v.clone().map_or_else(|| text("none"), ExpectedValue::Degree),
        "cofactor" => audit.cofactor.clone().map_or_else(|| text("not invariant"), ExpectedValue::Poly),
        "strongly_quasi_smooth" => ExpectedValue::Flag(audit.quasi_smoothness == QuasiSmoothness::Strong),
        "sing_inside_irrelevant" => text(&sing_inside_irrelevant(f, &fx.model, cap).state.to_string()),
        "regular_subsequence" => match &fx.options.subset {
            Some(s) => ExpectedValue::Flag(regular_subsequence_check(f, s).regular),
            None => text("no subset"),
        },
        "lie_g_member" => audit.lie_g_member.map_or_else(|| text("undetermined"), ExpectedValue::Flag),
        "inequality_fails" => ExpectedValue::Flag(audit.inequality_fails()),
        "verdict" => ExpectedValue::Text(audit.verdict()),
        "reference_decomposition_valid" => match &fx.reference_decomposition {
            Some(d) => ExpectedValue::Flag(verify_decomposition(&fx.model, f, &fx.field, d).is_valid()),
            None => text("no reference"),
        },
        "decomposition_valid" => match &audit.decomposition {
            Some(d) => ExpectedValue::Flag(verify_decomposition(&fx.model, f, &fx.field, d).is_valid()),
            None => text("no decomposition"),
        },
        _ => text("unknown check"),
    }
}

/// Audits the fixture and compares every expected value.
pub fn run_fixture(fx: &Fixture) -> FixtureRun {
    let audit = audit_case(&fx.model, &fx.field, &fx.hypersurface, &fx.options);
    let names = fx.model.variable_names();
    let checks = fx
        .expected
        .iter()
        .map(|(key, exp)| {
            let actual = actual_value(fx, &audit, key);
            let pass = match (&exp.value, &actual) {
                (ExpectedValue::Degree(e), ExpectedValue::Degree(a)) => &e.with_torsion_units(&fx.torsion_units) == a,
                (e, a) => e == a,
            };
            CheckLine {
                key: key.clone(),
                origin: exp.origin,
                expected: exp.value.render(names),
                actual: actual.render(names),
                pass,
            }
        })
        .collect();
    FixtureRun { fixture: fx.name.clone(), audit, checks }
}

/// A named, parameterized example; looked up by name at runtime.
pub trait FixtureFamily: Send + Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    /// `(key, description)` for every accepted parameter.
    fn parameters(&self) -> &'static [(&'static str, &'static str)];
    fn build(&self, params: &Params) -> Result<Fixture, FamilyError>;
}

pub struct FixtureRegistry {
    families: BTreeMap<&'static str, Box<dyn FixtureFamily>>,
}

impl FixtureRegistry {
    pub fn empty() -> Self {
        FixtureRegistry { families: BTreeMap::new() }
    }

    pub fn standard() -> Self {
        let mut r = FixtureRegistry::empty();
        r.register(Box::new(Wps2));
        r.register(Box::new(Ms2));
        r.register(Box::new(Tor2));
        r.register(Box::new(ExA));
        r.register(Box::new(ExB));
        r
    }

    pub fn register(&mut self, family: Box<dyn FixtureFamily>) {
        self.families.insert(family.name(), family);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.families.keys().copied().collect()
    }

    pub fn get(&self, name: &str) -> Option<&dyn FixtureFamily> {
        self.families.get(name).map(|b| b.as_ref())
    }

    pub fn build(&self, name: &str, params: &Params) -> Result<Fixture, FamilyError> {
        let family = self.get(name).ok_or_else(|| FamilyError::UnknownFixture(name.to_string()))?;
        let keys: Vec<&str> = family.parameters().iter().map(|(k, _)| *k).collect();
        params.reject_unknown(&keys)?;
        family.build(params)
    }
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn term(n: usize, c: Rational, powers: &[(usize, u32)]) -> Polynomial {
    let mut e = vec![0u32; n];
    for &(v, p) in powers {
        e[v] += p;
    }
    Polynomial::from_term(Monomial::new(e), c)
}

fn add_to(p: &mut Polynomial, t: Polynomial) {
    *p = &*p + &t;
}

fn degree(free: &[i64], torsion: &[i64], orders: &[i64]) -> ExpectedValue {
    ExpectedValue::Degree(DegreeClass::from_i64(free, torsion, orders))
}

fn positive_u32(key: &str, v: i64) -> Result<u32, FamilyError> {
    u32::try_from(v).ok().filter(|&x| x >= 1).ok_or_else(|| FamilyError::param(key, "must be a positive integer"))
}

fn nonzero(key: &str, xs: &[Rational]) -> Result<(), FamilyError> {
    if xs.iter().any(Zero::is_zero) {
        return Err(FamilyError::param(key, "coefficients must be nonzero"));
    }
    Ok(())
}

fn samples(count: usize, num: i64, den: i64) -> Vec<Rational> {
    (1..=count as i64).map(|k| Rational::new((k * num).into(), den.into())).collect()
}

struct Wps2;

impl FixtureFamily for Wps2 {
    fn name(&self) -> &'static str {
        "wps2"
    }
    fn summary(&self) -> &'static str {
        "paired Fermat terms on a weighted projective space, rotated pairwise"
    }
    fn parameters(&self) -> &'static [(&'static str, &'static str)] {
        &[
            ("omega", "weights w_0..w_n (default 1,2,1,2)"),
            ("d", "exponents with w_k d_k constant (default 4,2,4,2)"),
            ("c", "nonzero coefficients, one per pair plus one for an unpaired last variable (default 1,2,...)"),
        ]
    }
    fn build(&self, params: &Params) -> Result<Fixture, FamilyError> {
        let omega = params.int_list("omega", Some(vec![1, 2, 1, 2]))?;
        let d = params.int_list("d", Some(vec![4, 2, 4, 2]))?;
        if d.len() != omega.len() {
            return Err(FamilyError::param("d", "needs one exponent per weight"));
        }
        if omega.len() < 2 {
            return Err(FamilyError::param("omega", "needs at least two weights"));
        }
        let d: Vec<u32> = d.iter().map(|&x| positive_u32("d", x)).collect::<Result<_, _>>()?;
        let zeta = omega[0] * i64::from(d[0]);
        if omega.iter().zip(&d).any(|(&w, &e)| w * i64::from(e) != zeta) {
            return Err(FamilyError::param("d", "w_k d_k must be the same for every k"));
        }
        let pairs = omega.len() / 2;
        let xi = omega[0] + omega[1];
        if (0..pairs).any(|k| omega[2 * k] + omega[2 * k + 1] != xi) {
            return Err(FamilyError::param("omega", "w_2k + w_2k+1 must be the same for every pair"));
        }
        let model = weighted_projective(&omega)?;
        let n = model.nvars();
        let count = pairs + omega.len() % 2;
        let c = params.rational_list("c", samples(count, 1, 1))?;
        if c.len() != count {
            return Err(FamilyError::param("c", format!("needs {count} coefficients")));
        }
        nonzero("c", &c)?;

        let mut comps = vec![Polynomial::zero(n); n];
        let mut f = Polynomial::zero(n);
        for k in 0..pairs {
            let (i, j) = (2 * k, 2 * k + 1);
            add_to(&mut comps[i], term(n, q(d[j].into()), &[(j, d[j] - 1)]));
            add_to(&mut comps[j], term(n, q(-i64::from(d[i])), &[(i, d[i] - 1)]));
            add_to(&mut f, term(n, c[k].clone(), &[(i, d[i])]));
            add_to(&mut f, term(n, c[k].clone(), &[(j, d[j])]));
        }
        if omega.len() % 2 == 1 {
            let last = n - 1;
            add_to(&mut f, term(n, c[pairs].clone(), &[(last, d[last])]));
        }
        let name = format!(
            "wps2(omega={} d={} c={})",
            super::list(&omega),
            d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
            rational_list_text(&c)
        );
        let mut fx = Fixture::new(name, model, VectorField::new(comps), f);
        let mut sorted = omega.clone();
        sorted.sort_unstable();
        let max_pair = sorted[sorted.len() - 1] + sorted[sorted.len() - 2];
        fx.expect("deg_f", degree(&[zeta - xi], &[], &[]), Origin::Stated);
        fx.expect("deg_v", degree(&[zeta], &[], &[]), Origin::Stated);
        fx.expect("cofactor", ExpectedValue::Poly(Polynomial::zero(n)), Origin::Derived);
        fx.expect("strongly_quasi_smooth", ExpectedValue::Flag(true), Origin::Stated);
        fx.expect("lie_g_member", ExpectedValue::Flag(false), Origin::Derived);
        fx.expect_comparison(1, BigInt::from(zeta - xi + max_pair), BigInt::from(zeta), Origin::Stated);
        fx.expect("decomposition_valid", ExpectedValue::Flag(true), Origin::Derived);
        fx.expect("verdict", ExpectedValue::Text("bound asserted; inequality holds".into()), Origin::Derived);
        Ok(fx)
    }
}

/// `(omega, d)` pairs of the given length satisfying the constraints of
/// `wps2`: gcd 1, equal pair sums, and `w_k d_k = zeta` for `zeta` up to
/// `max_zeta`. Sorted lexicographically.
pub fn admissible_wps2(len: usize, max_weight: i64, max_zeta: i64) -> Vec<(Vec<i64>, Vec<i64>)> {
    let mut out = Vec::new();
    if len < 2 {
        return out;
    }
    let mut omega = vec![1i64; len];
    loop {
        let gcd = omega.iter().fold(0i64, |g, &w| g.gcd(&w));
        let xi = omega[0] + omega[1];
        if gcd == 1 && (0..len / 2).all(|k| omega[2 * k] + omega[2 * k + 1] == xi) {
            let lcm = omega.iter().fold(1i64, |l, &w| l.lcm(&w));
            let mut zeta = lcm;
            while zeta <= max_zeta {
                out.push((omega.clone(), omega.iter().map(|&w| zeta / w).collect()));
                zeta += lcm;
            }
        }
        let mut i = len;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if omega[i] < max_weight {
                omega[i] += 1;
                for w in &mut omega[i + 1..] {
                    *w = 1;
                }
                break;
            }
        }
    }
}

struct Ms2;

impl FixtureFamily for Ms2 {
    fn name(&self) -> &'static str {
        "ms2"
    }
    fn summary(&self) -> &'static str {
        "bilinear quadric on P^n x P^n with an invariant quadratic field"
    }
    fn parameters(&self) -> &'static [(&'static str, &'static str)] {
        &[
            ("n", "odd dimension n = 2m+1 (default 1)"),
            ("a", "m+1 rational coefficients (default 1,2,...)"),
            ("b", "m+1 rational coefficients (default 1/2,1,...)"),
        ]
    }
    fn build(&self, params: &Params) -> Result<Fixture, FamilyError> {
        let n = params.int("n", Some(1))?;
        if n < 1 || n % 2 == 0 {
            return Err(FamilyError::param("n", "must be odd and positive"));
        }
        let dim = n as usize;
        let m = (dim - 1) / 2;
        let a = params.rational_list("a", samples(m + 1, 1, 1))?;
        let b = params.rational_list("b", samples(m + 1, 1, 2))?;
        if a.len() != m + 1 || b.len() != m + 1 {
            return Err(FamilyError::param("a", format!("a and b need {} entries each", m + 1)));
        }
        if a.iter().chain(&b).all(Zero::is_zero) {
            return Err(FamilyError::param("a", "a and b cannot all vanish"));
        }
        let model = multiprojective(&[dim, dim])?;
        let nv = model.nvars();
        let z1 = |j: usize| j;
        let z2 = |j: usize| dim + 1 + j;
        let mut comps = vec![Polynomial::zero(nv); nv];
        for k in 0..=m {
            let (e, o) = (2 * k, 2 * k + 1);
            add_to(&mut comps[z1(e)], term(nv, a[k].clone(), &[(z1(e), 2), (z2(o), 1)]));
            add_to(&mut comps[z1(o)], term(nv, -a[k].clone(), &[(z1(e), 2), (z2(e), 1)]));
            add_to(&mut comps[z2(e)], term(nv, b[k].clone(), &[(z2(e), 2), (z1(o), 1)]));
            add_to(&mut comps[z2(o)], term(nv, -b[k].clone(), &[(z2(e), 2), (z1(e), 1)]));
        }
        let mut f = Polynomial::zero(nv);
        for j in 0..=dim {
            add_to(&mut f, term(nv, q(1), &[(z1(j), 1), (z2(j), 1)]));
        }
        let name = format!("ms2(n={n} a={} b={})", rational_list_text(&a), rational_list_text(&b));
        let mut fx = Fixture::new(name, model, VectorField::new(comps), f);
        fx.expect("deg_f", degree(&[1, 1], &[], &[]), Origin::Stated);
        fx.expect("deg_v", degree(&[1, 1], &[], &[]), Origin::Stated);
        fx.expect("cofactor", ExpectedValue::Poly(Polynomial::zero(nv)), Origin::Derived);
        fx.expect("strongly_quasi_smooth", ExpectedValue::Flag(true), Origin::Stated);
        fx.expect("lie_g_member", ExpectedValue::Flag(false), Origin::Derived);
        for k in 1..=2 {
            fx.expect_comparison(k, BigInt::from(3), BigInt::from(1), Origin::Stated);
        }
        fx.expect("decomposition_valid", ExpectedValue::Flag(true), Origin::Derived);
        fx.expect("verdict", ExpectedValue::Text("bound asserted; inequality holds".into()), Origin::Derived);
        Ok(fx)
    }
}

struct Tor2;

impl FixtureFamily for Tor2 {
    fn name(&self) -> &'static str {
        "tor2"
    }
    fn summary(&self) -> &'static str {
        "Fermat curve of degree m on the fake projective plane with torsion Z/3"
    }
    fn parameters(&self) -> &'static [(&'static str, &'static str)] {
        &[("m", "degree, a positive multiple of 3 (default 3)")]
    }
    fn build(&self, params: &Params) -> Result<Fixture, FamilyError> {
        let m = params.int("m", Some(3))?;
        if m < 3 || m % 3 != 0 {
            return Err(FamilyError::param("m", "must be a positive multiple of 3"));
        }
        let e = m as u32;
        let model = surface_021()?;
        let comps = vec![
            term(3, q(1), &[(1, e)]),
            &term(3, q(1), &[(0, 1), (2, e - 1)]) - &term(3, q(1), &[(0, e - 1), (1, 1)]),
            term(3, q(-1), &[(0, 1), (1, e - 1)]),
        ];
        let f = (0..3).fold(Polynomial::zero(3), |acc, j| &acc + &term(3, q(1), &[(j, e)]));
        let mut fx = Fixture::new(format!("tor2(m={m})"), model, VectorField::new(comps), f);
        let inv = Rational::new((-1).into(), m.into());
        let mut pjk = BTreeMap::new();
        pjk.insert((0, 1), term(3, inv.clone(), &[(1, 1)]));
        pjk.insert((0, 2), Polynomial::zero(3));
        pjk.insert((1, 2), term(3, inv, &[(0, 1)]));
        fx.reference_decomposition = Some(Decomposition {
            index_set: vec![0, 1, 2],
            pjk,
            cofactor: Polynomial::zero(3),
            radial_index: 0,
            theta: q(m),
        });
        fx.expect("deg_f", degree(&[m - 1], &[0], &[3]), Origin::Stated);
        fx.expect("deg_v", degree(&[m], &[0], &[3]), Origin::Stated);
        fx.expect("cofactor", ExpectedValue::Poly(Polynomial::zero(3)), Origin::Stated);
        fx.expect("strongly_quasi_smooth", ExpectedValue::Flag(true), Origin::Stated);
        fx.expect("lie_g_member", ExpectedValue::Flag(false), Origin::Derived);
        fx.expect_comparison(1, BigInt::from(m + 1), BigInt::from(m), Origin::Stated);
        fx.expect("reference_decomposition_valid", ExpectedValue::Flag(true), Origin::Stated);
        fx.expect("decomposition_valid", ExpectedValue::Flag(true), Origin::Derived);
        fx.expect("verdict", ExpectedValue::Text("bound asserted; inequality holds".into()), Origin::Derived);
        Ok(fx)
    }
}

struct ExA;

impl FixtureFamily for ExA {
    fn name(&self) -> &'static str {
        "exa"
    }
    fn summary(&self) -> &'static str {
        "quasi-smooth but not strongly quasi-smooth curve on P^1 x P^1, audited on the first factor"
    }
    fn parameters(&self) -> &'static [(&'static str, &'static str)] {
        &[
            ("alpha1", "positive exponent (default 1)"),
            ("alpha2", "positive exponent (default 2)"),
            ("c", "two nonzero coefficients c1,c2 (default 1,1)"),
        ]
    }
    fn build(&self, params: &Params) -> Result<Fixture, FamilyError> {
        let a1 = positive_u32("alpha1", params.int("alpha1", Some(1))?)?;
        let a2 = positive_u32("alpha2", params.int("alpha2", Some(2))?)?;
        let c = params.rational_list("c", vec![q(1), q(1)])?;
        if c.len() != 2 {
            return Err(FamilyError::param("c", "needs two coefficients"));
        }
        nonzero("c", &c)?;
        let al = a1 + a2;
        let (c1, c2) = (c[0].clone(), c[1].clone());
        let model = multiprojective(&[1, 1])?;
        // z1_0, z1_1, z2_0, z2_1
        let (x0, x1, y0, y1) = (0, 1, 2, 3);
        let zero = Polynomial::zero(4);
        let first = VectorField::new(vec![
            term(4, c1.clone(), &[(x0, 2), (y1, al)]),
            &term(4, -c1.clone(), &[(x0, 2), (y0, al)]) - &term(4, c1.clone(), &[(x0, 2), (y0, a1), (y1, a2)]),
            zero.clone(),
            zero.clone(),
        ]);
        let a1q = q(a1.into());
        let a2q = q(a2.into());
        let alq = q(al.into());
        let second = VectorField::new(vec![
            zero.clone(),
            zero,
            &term(4, &c2 * &a2q, &[(x0, 1), (y0, a1 + 2), (y1, a2 - 1)]) + &term(4, &c2 * &alq, &[(x1, 1), (y0, 2), (y1, al - 1)]),
            &term(4, -(&c2 * &alq), &[(x0, 1), (y0, al + 1)]) - &term(4, &c2 * &a1q, &[(x0, 1), (y0, a1 + 1), (y1, a2)]),
        ]);
        let f = &(&term(4, q(1), &[(x0, 1), (y0, al)]) + &term(4, q(1), &[(x1, 1), (y1, al)]))
            + &term(4, q(1), &[(x0, 1), (y0, a1), (y1, a2)]);
        let name = format!("exa(alpha1={a1} alpha2={a2} c={})", rational_list_text(&c));
        let mut fx = Fixture::new(name, model, &first + &second, f);
        fx.parts = vec![("x1".into(), first), ("x2".into(), second)];
        fx.options.subset = Some(vec![x0, x1]);
        let mut pjk = BTreeMap::new();
        pjk.insert((x0, x1), term(4, -c1, &[(x0, 2)]));
        fx.reference_decomposition = Some(Decomposition {
            index_set: vec![x0, x1],
            pjk,
            cofactor: Polynomial::zero(4),
            radial_index: 0,
            theta: q(1),
        });
        let ali = i64::from(al);
        fx.expect("deg_f", degree(&[1, ali], &[], &[]), Origin::Stated);
        fx.expect("deg_v", degree(&[1, ali], &[], &[]), Origin::Stated);
        fx.expect("cofactor_x1", ExpectedValue::Poly(Polynomial::zero(4)), Origin::Stated);
        fx.expect("cofactor_x2", ExpectedValue::Poly(Polynomial::zero(4)), Origin::Derived);
        fx.expect("cofactor", ExpectedValue::Poly(Polynomial::zero(4)), Origin::Derived);
        fx.expect("strongly_quasi_smooth", ExpectedValue::Flag(false), Origin::Stated);
        fx.expect("regular_subsequence", ExpectedValue::Flag(true), Origin::Stated);
        fx.expect("sing_inside_irrelevant", ExpectedValue::Text("yes".into()), Origin::Stated);
        fx.expect("lie_g_member", ExpectedValue::Flag(false), Origin::Derived);
        fx.expect_comparison(1, BigInt::from(3), BigInt::from(1), Origin::Derived);
        fx.expect_comparison(2, BigInt::from(ali), BigInt::from(ali), Origin::Derived);
        fx.expect("reference_decomposition_valid", ExpectedValue::Flag(true), Origin::Derived);
        fx.expect("decomposition_valid", ExpectedValue::Flag(true), Origin::Derived);
        fx.expect("verdict", ExpectedValue::Text("bound asserted; inequality holds".into()), Origin::Derived);
        Ok(fx)
    }
}

struct ExB;

impl FixtureFamily for ExB {
    fn name(&self) -> &'static str {
        "exb"
    }
    fn summary(&self) -> &'static str {
        "non-quasi-smooth product of coordinate lines on P^1 x P^1"
    }
    fn parameters(&self) -> &'static [(&'static str, &'static str)] {
        &[("alpha", "positive exponent (default 5)"), ("beta", "positive exponent (default 5)")]
    }
    fn build(&self, params: &Params) -> Result<Fixture, FamilyError> {
        let a = positive_u32("alpha", params.int("alpha", Some(5))?)?;
        let b = positive_u32("beta", params.int("beta", Some(5))?)?;
        let model = multiprojective(&[1, 1])?;
        let (x0, x1, y0, y1) = (0, 1, 2, 3);
        let zero = Polynomial::zero(4);
        let x = VectorField::new(vec![
            term(4, q(1), &[(x0, 1), (y1, 2)]),
            zero.clone(),
            term(4, q(1), &[(y0, 1), (x1, 2)]),
            zero,
        ]);
        let f = term(4, q(1), &[(x0, a), (y0, b)]);
        let mut fx = Fixture::new(format!("exb(alpha={a} beta={b})"), model, x, f);
        let cofactor = &term(4, q(a.into()), &[(y1, 2)]) + &term(4, q(b.into()), &[(x1, 2)]);
        let fails = a > 2 || b > 2;
        fx.expect("deg_v", degree(&[a.into(), b.into()], &[], &[]), Origin::Stated);
        fx.expect("deg_f", ExpectedValue::Text("inconsistent".into()), Origin::Derived);
        fx.expect("deg_f_candidates", ExpectedValue::Text("(0,2), (2,0)".into()), Origin::Derived);
        fx.expect("cofactor", ExpectedValue::Poly(cofactor), Origin::Derived);
        fx.expect("strongly_quasi_smooth", ExpectedValue::Flag(false), Origin::Stated);
        fx.expect("sing_inside_irrelevant", ExpectedValue::Text("no".into()), Origin::Stated);
        fx.expect("inequality_fails", ExpectedValue::Flag(fails), Origin::Derived);
        let verdict = if fails { "hypotheses violated; inequality fails" } else { "hypotheses violated; inequality holds" };
        fx.expect("verdict", ExpectedValue::Text(verdict.into()), Origin::Derived);
        Ok(fx)
    }
}
