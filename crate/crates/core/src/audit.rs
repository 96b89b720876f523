//! Poincaré-type degree bounds: hypothesis checks, bound versus actual
//! degree, and a structured verdict.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};
use thiserror::Error;

use crate::foliation::{component_degree_candidates, foliation_degree, invariance_cofactor, lie_g_membership, FoliationError, VectorField};
use crate::groebner::{default_power_cap, only_origin_check, regular_subsequence_check, sing_inside_irrelevant, TriState};
use crate::model::ToricModel;
use crate::normal_form::{choose_radial_index, koszul_decompose, Decomposition};
use crate::ring::{format_rational, DegreeClass, Polynomial};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AuditError {
    #[error("coordinate {k} is not eligible: some variable has negative degree there")]
    Ineligible { k: usize },
    #[error("coordinate {k} out of range 1..={rank}")]
    CoordinateRange { k: usize, rank: usize },
    #[error("index subset needs at least two variables")]
    SubsetTooSmall,
}

/// Largest `(deg z_i)_k + (deg z_j)_k` over pairs `i < j` from `vars`, with
/// the first maximizing pair.
fn max_pair(model: &ToricModel, k: usize, vars: &[usize]) -> Option<(BigInt, (usize, usize))> {
    let d = model.degrees();
    let mut best: Option<(BigInt, (usize, usize))> = None;
    for (a, &i) in vars.iter().enumerate() {
        for &j in &vars[a + 1..] {
            let s = d[i].coordinate(k) + d[j].coordinate(k);
            if best.as_ref().is_none_or(|(b, _)| &s > b) {
                best = Some((s, (i, j)));
            }
        }
    }
    best
}

/// `deg(F)_k + max_{i<j} (deg z_i)_k + (deg z_j)_k`, the pairs ranging over
/// `subset` when given (1-based `k`).
pub fn poincare_bound(model: &ToricModel, deg_f: &DegreeClass, k: usize, subset: Option<&[usize]>) -> Result<BigInt, AuditError> {
    if k == 0 || k > model.rank() {
        return Err(AuditError::CoordinateRange { k, rank: model.rank() });
    }
    if !model.nonnegative_coordinates().contains(&k) {
        return Err(AuditError::Ineligible { k });
    }
    let all: Vec<usize> = (0..model.nvars()).collect();
    let vars = subset.unwrap_or(&all);
    let (m, _) = max_pair(model, k, vars).ok_or(AuditError::SubsetTooSmall)?;
    Ok(deg_f.coordinate(k) + m)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AuditOptions {
    /// 0-based radial field used by the decomposition.
    pub radial_index: Option<usize>,
    /// 0-based variable indices for the subset variant of the bound.
    pub subset: Option<Vec<usize>>,
    pub power_cap: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypothesis {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuasiSmoothness {
    Strong,
    SingularLocusInIrrelevant,
    Fails,
    Inconclusive,
}

impl QuasiSmoothness {
    pub fn as_str(&self) -> &'static str {
        match self {
            QuasiSmoothness::Strong => "strong",
            QuasiSmoothness::SingularLocusInIrrelevant => "quasi-smooth with Sing(V) in Z",
            QuasiSmoothness::Fails => "fails",
            QuasiSmoothness::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    /// 1-based coordinate.
    pub k: usize,
    /// The foliation degree this comparison uses (one per candidate when
    /// component degrees disagree).
    pub deg_f: DegreeClass,
    pub bound: BigInt,
    pub actual: BigInt,
    pub slack: BigInt,
    pub sharp: bool,
    pub pair: (usize, usize),
    /// Finer bound from a nonzero decomposition entry, with its pair.
    pub pairwise: Option<(BigInt, (usize, usize))>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditReport {
    pub model: String,
    pub class_group: String,
    pub variables: Vec<String>,
    pub deg_f: Option<DegreeClass>,
    pub deg_f_candidates: Vec<DegreeClass>,
    pub deg_v: Option<DegreeClass>,
    pub eligible_k: Vec<usize>,
    pub subset: Option<Vec<usize>>,
    pub cofactor: Option<Polynomial>,
    pub lie_g_member: Option<bool>,
    pub quasi_smoothness: QuasiSmoothness,
    pub hypotheses: Vec<Hypothesis>,
    pub comparisons: Vec<Comparison>,
    pub decomposition: Option<Decomposition>,
    pub warnings: Vec<String>,
}

impl AuditReport {
    pub fn hypotheses_status(&self) -> Status {
        if self.hypotheses.iter().any(|h| h.status == Status::Fail) {
            Status::Fail
        } else if self.hypotheses.iter().any(|h| h.status == Status::Inconclusive) {
            Status::Inconclusive
        } else {
            Status::Pass
        }
    }

    pub fn inequality_fails(&self) -> bool {
        self.comparisons.iter().any(|c| c.slack < BigInt::zero())
    }

    pub fn verdict(&self) -> String {
        let first = match self.hypotheses_status() {
            Status::Pass => "bound asserted",
            Status::Fail => "hypotheses violated",
            Status::Inconclusive => "hypotheses inconclusive",
        };
        let second = if self.comparisons.is_empty() {
            "no comparison"
        } else if self.inequality_fails() {
            "inequality fails"
        } else {
            "inequality holds"
        };
        format!("{first}; {second}")
    }

    /// 0 when every hypothesis holds and so does the inequality, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.hypotheses_status() == Status::Pass && !self.inequality_fails() && !self.comparisons.is_empty() {
            0
        } else {
            2
        }
    }

    fn name(&self, j: usize) -> &str {
        &self.variables[j]
    }

    fn poly(&self, p: &Polynomial) -> String {
        p.to_string_with(&self.variables)
    }

    pub fn to_json(&self) -> Value {
        let comparisons: Vec<Value> = self
            .comparisons
            .iter()
            .map(|c| {
                json!({
                    "k": c.k,
                    "deg_f": c.deg_f.to_string(),
                    "bound": big(&c.bound),
                    "actual": big(&c.actual),
                    "slack": big(&c.slack),
                    "sharp": c.sharp,
                    "pair": [self.name(c.pair.0), self.name(c.pair.1)],
                    "pairwise_bound": c.pairwise.as_ref().map(|(b, _)| big(b)),
                    "pairwise_pair": c.pairwise.as_ref().map(|(_, (i, j))| vec![self.name(*i), self.name(*j)]),
                })
            })
            .collect();
        let decomposition = self.decomposition.as_ref().map(|d| {
            let entries: serde_json::Map<String, Value> = d
                .pjk
                .iter()
                .map(|(&(j, k), p)| (format!("{},{}", self.name(j), self.name(k)), Value::String(self.poly(p))))
                .collect();
            json!({
                "index_set": d.index_set.iter().map(|&j| self.name(j)).collect::<Vec<_>>(),
                "p": entries,
                "cofactor": self.poly(&d.cofactor),
                "radial_index": d.radial_index + 1,
                "theta": format_rational(&d.theta),
            })
        });
        json!({
            "model": self.model,
            "class_group": self.class_group,
            "deg_f": self.deg_f.as_ref().map(|d| d.to_string()).unwrap_or_else(|| "inconsistent".into()),
            "deg_f_candidates": self.deg_f_candidates.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
            "deg_v": self.deg_v.as_ref().map(|d| d.to_string()),
            "eligible_k": self.eligible_k,
            "subset": self.subset.as_ref().map(|s| s.iter().map(|&j| self.name(j)).collect::<Vec<_>>()),
            "cofactor": self.cofactor.as_ref().map(|g| self.poly(g)),
            "lie_g": self.lie_g_member.map(|m| if m { "member" } else { "not a member" }),
            "quasi_smoothness": self.quasi_smoothness.as_str(),
            "hypotheses": self.hypotheses.iter().map(|h| json!({
                "name": h.name,
                "status": h.status.as_str(),
                "detail": h.detail,
            })).collect::<Vec<_>>(),
            "comparisons": comparisons,
            "bound": self.comparisons.iter().map(|c| big(&c.bound)).collect::<Vec<_>>(),
            "actual": self.comparisons.iter().map(|c| big(&c.actual)).collect::<Vec<_>>(),
            "slack": self.comparisons.iter().map(|c| big(&c.slack)).collect::<Vec<_>>(),
            "decomposition": decomposition,
            "warnings": self.warnings,
            "verdict": self.verdict(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let opt = |d: &Option<DegreeClass>| d.as_ref().map_or("none".to_string(), |d| d.to_string());
        let _ = writeln!(s, "model: {}", self.model);
        let _ = writeln!(s, "class group: {}", self.class_group);
        match &self.deg_f {
            Some(d) => {
                let _ = writeln!(s, "deg_f: {d}");
            }
            None => {
                let c: Vec<String> = self.deg_f_candidates.iter().map(|d| d.to_string()).collect();
                let _ = writeln!(s, "deg_f: inconsistent (candidates {})", c.join(", "));
            }
        }
        let _ = writeln!(s, "deg_v: {}", opt(&self.deg_v));
        let ks: Vec<String> = self.eligible_k.iter().map(|k| k.to_string()).collect();
        let _ = writeln!(s, "eligible_k: {}", if ks.is_empty() { "none".into() } else { ks.join(", ") });
        if let Some(sub) = &self.subset {
            let names: Vec<&str> = sub.iter().map(|&j| self.name(j)).collect();
            let _ = writeln!(s, "subset: {}", names.join(", "));
        }
        let _ = writeln!(s, "cofactor: {}", self.cofactor.as_ref().map_or("none (not invariant)".into(), |g| self.poly(g)));
        let lie = match self.lie_g_member {
            Some(true) => "member",
            Some(false) => "not a member",
            None => "undetermined",
        };
        let _ = writeln!(s, "lie_g: {lie}");
        let _ = writeln!(s, "quasi-smoothness: {}", self.quasi_smoothness.as_str());
        let _ = writeln!(s, "hypotheses:");
        for h in &self.hypotheses {
            let _ = writeln!(s, "  [{}] {}: {}", h.status.as_str(), h.name, h.detail);
        }
        for c in &self.comparisons {
            let _ = write!(
                s,
                "k={} deg_f={}: bound {}, actual {}, slack {}, sharp {}, pair ({}, {})",
                c.k,
                c.deg_f,
                c.bound,
                c.actual,
                c.slack,
                if c.sharp { "yes" } else { "no" },
                self.name(c.pair.0),
                self.name(c.pair.1)
            );
            if let Some((b, (i, j))) = &c.pairwise {
                let _ = write!(s, ", pairwise bound {} via ({}, {})", b, self.name(*i), self.name(*j));
            }
            s.push('\n');
        }
        if let Some(d) = &self.decomposition {
            let _ = writeln!(
                s,
                "decomposition (radial field {}, theta {}, cofactor {}):",
                d.radial_index + 1,
                format_rational(&d.theta),
                self.poly(&d.cofactor)
            );
            for (&(j, k), p) in &d.pjk {
                let _ = writeln!(s, "  P[{},{}] = {}", self.name(j), self.name(k), self.poly(p));
            }
        }
        for w in &self.warnings {
            let _ = writeln!(s, "warning: {w}");
        }
        let _ = writeln!(s, "verdict: {}", self.verdict());
        s
    }
}

fn big(x: &BigInt) -> Value {
    match i64::try_from(x) {
        Ok(v) => Value::from(v),
        Err(_) => Value::String(x.to_string()),
    }
}

fn hyp(name: &str, status: Status, detail: impl Into<String>) -> Hypothesis {
    Hypothesis { name: name.to_string(), status, detail: detail.into() }
}

fn tri(state: TriState) -> Status {
    match state {
        TriState::Yes => Status::Pass,
        TriState::No => Status::Fail,
        TriState::Inconclusive => Status::Inconclusive,
    }
}

/// Runs every check for one (model, field, hypersurface) case. Hypothesis
/// failures are recorded in the report rather than returned as errors.
pub fn audit_case(model: &ToricModel, x: &VectorField, f: &Polynomial, options: &AuditOptions) -> AuditReport {
    let names = model.variable_names();
    let mut hypotheses = Vec::new();
    let mut warnings = Vec::new();
    let cap = options.power_cap.unwrap_or_else(|| default_power_cap(f));
    let subset = options.subset.clone();

    // hypersurface degree
    let deg_v = match model.homogeneous_degree(f) {
        Ok(Some(d)) => {
            hypotheses.push(hyp("hypersurface quasi-homogeneous", Status::Pass, format!("deg(V) = {d}")));
            Some(d)
        }
        Ok(None) => {
            hypotheses.push(hyp("hypersurface quasi-homogeneous", Status::Fail, "terms have different degrees"));
            None
        }
        Err(e) => {
            hypotheses.push(hyp("hypersurface quasi-homogeneous", Status::Fail, e.to_string()));
            None
        }
    };

    // foliation degree
    let (deg_f, deg_f_candidates) = match foliation_degree(model, x) {
        Ok(d) => {
            hypotheses.push(hyp("foliation degree consistent", Status::Pass, format!("deg(F) = {d}")));
            (Some(d.clone()), vec![d])
        }
        Err(e @ FoliationError::Inconsistent { .. }) => {
            let candidates = component_degree_candidates(model, x).unwrap_or_default();
            hypotheses.push(hyp("foliation degree consistent", Status::Fail, e.to_string()));
            warnings.push("degree-inconsistent vector field; comparisons use each component's candidate degree".to_string());
            (None, candidates)
        }
        Err(e) => {
            hypotheses.push(hyp("foliation degree consistent", Status::Fail, e.to_string()));
            (None, Vec::new())
        }
    };

    // invariance
    let cofactor = match invariance_cofactor(x, f) {
        Ok(Some(g)) => {
            hypotheses.push(hyp("invariance", Status::Pass, format!("X(f) = ({}) f", g.to_string_with(names))));
            Some(g)
        }
        Ok(None) => {
            hypotheses.push(hyp("invariance", Status::Fail, "f does not divide X(f)"));
            None
        }
        Err(e) => {
            hypotheses.push(hyp("invariance", Status::Fail, e.to_string()));
            None
        }
    };

    // Lie(G)
    let lie_g_member = if deg_f.is_some() {
        match lie_g_membership(model, x) {
            Ok(r) => {
                let status = if r.member { Status::Fail } else { Status::Pass };
                let detail = if r.member {
                    let w: Vec<String> = r.witness.unwrap_or_default().iter().map(|g| g.to_string_with(names)).collect();
                    format!("X = sum g_i R_i with g = ({})", w.join(", "))
                } else {
                    "X is not a combination of the radial fields".to_string()
                };
                hypotheses.push(hyp("X not in Lie(G)", status, detail));
                Some(r.member)
            }
            Err(e) => {
                hypotheses.push(hyp("X not in Lie(G)", Status::Inconclusive, e.to_string()));
                None
            }
        }
    } else {
        hypotheses.push(hyp("X not in Lie(G)", Status::Inconclusive, "foliation degree undefined"));
        None
    };

    // quasi-smoothness
    let partials: Vec<Polynomial> = f.gradient().into_iter().filter(|p| !p.is_zero()).collect();
    let strong = if partials.is_empty() {
        None
    } else {
        Some(only_origin_check(&partials, model, cap))
    };
    let quasi_smoothness = match &strong {
        Some(c) if c.state == TriState::Yes => QuasiSmoothness::Strong,
        _ => {
            let c = sing_inside_irrelevant(f, model, cap);
            match c.state {
                TriState::Yes => QuasiSmoothness::SingularLocusInIrrelevant,
                TriState::No => QuasiSmoothness::Fails,
                TriState::Inconclusive => QuasiSmoothness::Inconclusive,
            }
        }
    };
    match &subset {
        None => {
            let (status, detail) = match &strong {
                None => (Status::Fail, "f is constant".to_string()),
                Some(c) => (tri(c.state), c.reason.clone()),
            };
            hypotheses.push(hyp("strongly quasi-smooth", status, detail));
        }
        Some(s) => {
            let reg = regular_subsequence_check(f, s);
            let sub_names: Vec<&str> = s.iter().map(|&j| names[j].as_str()).collect();
            hypotheses.push(hyp(
                "regular subsequence",
                if reg.regular { Status::Pass } else { Status::Fail },
                format!("partials in {{{}}}: {}", sub_names.join(", "), reg.reason),
            ));
            let status = match quasi_smoothness {
                QuasiSmoothness::Strong | QuasiSmoothness::SingularLocusInIrrelevant => Status::Pass,
                QuasiSmoothness::Fails => Status::Fail,
                QuasiSmoothness::Inconclusive => Status::Inconclusive,
            };
            hypotheses.push(hyp("quasi-smooth", status, quasi_smoothness.as_str()));
            let supported = model.radial_fields().iter().any(|r| r.is_supported_on(s));
            hypotheses.push(hyp(
                "radial field supported on subset",
                if supported { Status::Pass } else { Status::Fail },
                if supported { "found" } else { "no radial field vanishes off the subset" },
            ));
            let restricted = x.restricted_to(s);
            let inv = matches!(invariance_cofactor(&restricted, f), Ok(Some(_)));
            hypotheses.push(hyp(
                "restricted field leaves V invariant",
                if inv { Status::Pass } else { Status::Fail },
                if inv { "X restricted to the subset has a cofactor" } else { "no cofactor" },
            ));
        }
    }

    // eligibility
    let eligible_k = model.nonnegative_coordinates();
    hypotheses.push(hyp(
        "nonnegative coordinate exists",
        if eligible_k.is_empty() { Status::Fail } else { Status::Pass },
        if eligible_k.is_empty() { "no coordinate is nonnegative on every variable degree".to_string() } else { String::new() },
    ));
    if let Some(h) = hypotheses.last_mut() {
        if h.detail.is_empty() {
            let ks: Vec<String> = eligible_k.iter().map(|k| k.to_string()).collect();
            h.detail = format!("k in {{{}}}", ks.join(", "));
        }
    }

    // decomposition
    let mut decomposition = None;
    if let (Some(dv), Some(_), Some(_)) = (&deg_v, &deg_f, &cofactor) {
        let all: Vec<usize> = (0..model.nvars()).collect();
        let s = subset.clone().unwrap_or(all);
        let radial = options.radial_index.or_else(|| choose_radial_index(model, dv, &s));
        match radial {
            Some(i) => match koszul_decompose(model, f, x, i, subset.as_deref()) {
                Ok(d) => decomposition = Some(d),
                Err(e) => warnings.push(format!("decomposition unavailable: {e}")),
            },
            None => warnings.push("decomposition unavailable: no radial field with nonzero theta".to_string()),
        }
    }

    // comparisons
    let mut comparisons = Vec::new();
    if let Some(dv) = &deg_v {
        let all: Vec<usize> = (0..model.nvars()).collect();
        let vars = subset.clone().unwrap_or(all);
        for &k in &eligible_k {
            for df in &deg_f_candidates {
                let Some((m, pair)) = max_pair(model, k, &vars) else {
                    continue;
                };
                let bound = df.coordinate(k) + m;
                let actual = dv.coordinate(k).clone();
                let slack = &bound - &actual;
                let pairwise = decomposition.as_ref().and_then(|d| {
                    d.nonzero_pairs()
                        .into_iter()
                        .map(|(i, j)| (df.coordinate(k) + model.degrees()[i].coordinate(k) + model.degrees()[j].coordinate(k), (i, j)))
                        .min_by(|a, b| a.0.cmp(&b.0))
                });
                comparisons.push(Comparison { k, deg_f: df.clone(), sharp: slack.is_zero(), bound, actual, slack, pair, pairwise });
            }
        }
    }

    AuditReport {
        model: model.name().to_string(),
        class_group: model.class_group().to_string(),
        variables: names.to_vec(),
        deg_f,
        deg_f_candidates,
        deg_v,
        eligible_k,
        subset,
        cofactor,
        lie_g_member,
        quasi_smoothness,
        hypotheses,
        comparisons,
        decomposition,
        warnings,
    }
}
