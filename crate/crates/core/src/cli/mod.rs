//! The `torfol` command line.

mod case;
mod selftest;

pub use case::{parse_case, CaseError, CaseFile};
pub use selftest::{run_selftest, SelftestLine};

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::audit::{audit_case, AuditOptions};
use crate::families::{self, run_fixture, FixtureRegistry, Params};
use crate::foliation::{invariance_cofactor, VectorField};
use crate::model::ToricModel;
use crate::normal_form::{choose_radial_index, koszul_decompose, verify_decomposition, NormalFormError};
use crate::ring::{format_rational, parse_polynomial, Polynomial};

#[derive(Parser, Debug)]
#[command(name = "torfol", version, about = "Exact toric class groups, invariant hypersurfaces and Poincare degree bounds")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Args, Debug, Clone)]
struct Input {
    /// Model file (a case file whose [model] section is used).
    #[arg(long, value_name = "FILE")]
    model: Option<PathBuf>,
    /// Case file with model, hypersurface, field and options.
    #[arg(long, value_name = "FILE")]
    case: Option<PathBuf>,
    /// Built-in model: octahedron, fake-plane, wps:W0,W1,..., pn:N1,N2,..., scroll:A1,...
    #[arg(long, value_name = "NAME")]
    builtin: Option<String>,
}

#[derive(Args, Debug, Clone, Default)]
struct AuditFlags {
    /// 1-based radial field used by the decomposition.
    #[arg(long, value_name = "I")]
    radial_index: Option<usize>,
    /// Index subset, as variable names or 1-based indices separated by commas.
    #[arg(long, value_name = "I1,I2,...")]
    subset: Option<String>,
    /// Largest power tried in membership tests.
    #[arg(long, value_name = "N")]
    power_cap: Option<u32>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Class group and variable degrees.
    Classgroup {
        #[command(flatten)]
        input: Input,
    },
    /// Degree of a quasi-homogeneous polynomial.
    Degree {
        #[command(flatten)]
        input: Input,
        /// Polynomial; defaults to the case hypersurface.
        #[arg(long)]
        poly: Option<String>,
    },
    /// Cofactor g with X(f) = g f.
    Invariance {
        #[command(flatten)]
        input: Input,
    },
    /// Koszul normal form of the field.
    Decompose {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        flags: AuditFlags,
    },
    /// Full hypothesis check and degree bound comparison.
    Audit {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        flags: AuditFlags,
    },
    /// Build a named example, audit it and compare every expected value.
    /// Parameters follow the name as `--key value`; `--export FILE` writes
    /// the case file.
    Fixture {
        name: Option<String>,
        /// List the registered fixtures.
        #[arg(long)]
        list: bool,
        #[arg(trailing_var_arg = true, allow_hyphen_values = true, value_name = "PARAMS")]
        params: Vec<String>,
    },
    /// Randomized property checks at small sizes.
    Selftest {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        cases: usize,
    },
}

/// Exit status and captured output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: i32, stdout: String) -> Self {
        Outcome { code, stdout, stderr: String::new() }
    }

    fn input_error(message: impl Into<String>) -> Self {
        let mut stderr = message.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Outcome { code: 1, stdout: String::new(), stderr }
    }
}

fn render(format: Format, value: &Value, text: String) -> String {
    match format {
        Format::Text => text,
        Format::Machine => {
            let mut s = serde_json::to_string_pretty(value).expect("json values serialize");
            s.push('\n');
            s
        }
    }
}

fn builtin(name: &str) -> Result<ToricModel, String> {
    let ints = |s: &str| -> Result<Vec<i64>, String> {
        s.split(',').map(|x| x.trim().parse::<i64>().map_err(|_| format!("bad integer '{x}' in builtin '{name}'"))).collect()
    };
    let model = match name.split_once(':') {
        None if name == "octahedron" => families::octahedron(),
        None if name == "fake-plane" => families::surface_021(),
        Some(("wps", w)) => families::weighted_projective(&ints(w)?),
        Some(("pn", n)) => {
            let ns = ints(n)?;
            if ns.iter().any(|&x| x < 0) {
                return Err("factor dimensions must be nonnegative".into());
            }
            families::multiprojective(&ns.iter().map(|&x| x as usize).collect::<Vec<_>>())
        }
        Some(("scroll", a)) => families::rational_scroll(&ints(a)?),
        _ => return Err(format!("unknown builtin model '{name}'")),
    };
    model.map_err(|e| e.to_string())
}

fn read(path: &PathBuf) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn located(path: &PathBuf, errors: Vec<CaseError>) -> String {
    errors.iter().map(|e| format!("{}:{}:{}: {}", path.display(), e.line, e.column, e.message)).collect::<Vec<_>>().join("\n")
}

struct Loaded {
    model: ToricModel,
    case: Option<CaseFile>,
}

fn load(input: &Input) -> Result<Loaded, String> {
    let given = [input.model.is_some(), input.case.is_some(), input.builtin.is_some()].iter().filter(|&&b| b).count();
    if given != 1 {
        return Err("give exactly one of --model, --case, --builtin".into());
    }
    if let Some(name) = &input.builtin {
        return Ok(Loaded { model: builtin(name)?, case: None });
    }
    let path = input.case.as_ref().or(input.model.as_ref()).expect("one input");
    let case = parse_case(&read(path)?).map_err(|e| located(path, e))?;
    let model = case.model.build().map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(Loaded { model, case: Some(case) })
}

fn needs_hypersurface(l: &Loaded) -> Result<Polynomial, String> {
    l.case.as_ref().and_then(|c| c.hypersurface.clone()).ok_or_else(|| "the case has no [hypersurface] section".into())
}

fn needs_field(l: &Loaded) -> Result<VectorField, String> {
    l.case.as_ref().and_then(|c| c.field.clone()).ok_or_else(|| "the case has no [field] section".into())
}

fn options(l: &Loaded, flags: &AuditFlags) -> Result<AuditOptions, String> {
    let mut o = l.case.as_ref().map(|c| c.options.clone()).unwrap_or_default();
    let names = l.model.variable_names();
    if let Some(i) = flags.radial_index {
        if i == 0 || i > l.model.radial_fields().len() {
            return Err(format!("--radial-index must be in 1..={}", l.model.radial_fields().len()));
        }
        o.radial_index = Some(i - 1);
    }
    if let Some(s) = &flags.subset {
        let mut v = Vec::new();
        for t in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let j = match names.iter().position(|n| n == t) {
                Some(j) => j,
                None => match t.parse::<usize>() {
                    Ok(j) if j >= 1 && j <= names.len() => j - 1,
                    _ => return Err(format!("--subset: undeclared variable '{t}'")),
                },
            };
            v.push(j);
        }
        v.sort_unstable();
        v.dedup();
        o.subset = Some(v);
    }
    if let Some(c) = flags.power_cap {
        o.power_cap = Some(c);
    }
    if let Some(i) = o.radial_index {
        if i >= l.model.radial_fields().len() {
            return Err(format!("radial index must be in 1..={}", l.model.radial_fields().len()));
        }
    }
    if let Some(s) = &o.subset {
        if s.len() < 2 {
            return Err("the index subset needs at least two variables".into());
        }
    }
    Ok(o)
}

fn classgroup(format: Format, l: &Loaded) -> Outcome {
    let m = &l.model;
    let names = m.variable_names();
    let mut text = String::new();
    let _ = writeln!(text, "model: {}", m.name());
    let _ = writeln!(text, "class group: {}", m.class_group());
    let _ = writeln!(text, "degrees:");
    for (n, d) in names.iter().zip(m.degrees()) {
        let _ = writeln!(text, "  {n}: {d}");
    }
    let ks: Vec<String> = m.nonnegative_coordinates().iter().map(|k| k.to_string()).collect();
    let _ = writeln!(text, "eligible_k: {}", if ks.is_empty() { "none".to_string() } else { ks.join(", ") });
    let value = json!({
        "model": m.name(),
        "class_group": m.class_group().to_string(),
        "degrees": names.iter().zip(m.degrees()).map(|(n, d)| json!({"variable": n, "degree": d.to_string()})).collect::<Vec<_>>(),
        "eligible_k": m.nonnegative_coordinates(),
    });
    Outcome::ok(0, render(format, &value, text))
}

fn degree(format: Format, l: &Loaded, poly: &Option<String>) -> Outcome {
    let names = l.model.variable_names();
    let f = match poly {
        Some(p) => match parse_polynomial(p, names) {
            Ok(f) => f,
            Err(e) => return Outcome::input_error(format!("--poly: {e}")),
        },
        None => match needs_hypersurface(l) {
            Ok(f) => f,
            Err(e) => return Outcome::input_error(e),
        },
    };
    match l.model.homogeneous_degree(&f) {
        Ok(Some(d)) => {
            let value = json!({"model": l.model.name(), "degree": d.to_string(), "homogeneous": true});
            Outcome::ok(0, render(format, &value, format!("degree: {d}\n")))
        }
        Ok(None) => {
            let value = json!({"model": l.model.name(), "degree": null, "homogeneous": false});
            Outcome::ok(2, render(format, &value, "not quasi-homogeneous\n".into()))
        }
        Err(e) => Outcome::input_error(e.to_string()),
    }
}

fn invariance(format: Format, l: &Loaded) -> Outcome {
    let (f, x) = match (needs_hypersurface(l), needs_field(l)) {
        (Ok(f), Ok(x)) => (f, x),
        (Err(e), _) | (_, Err(e)) => return Outcome::input_error(e),
    };
    let names = l.model.variable_names();
    match invariance_cofactor(&x, &f) {
        Ok(Some(g)) => {
            let g = g.to_string_with(names);
            let value = json!({"model": l.model.name(), "invariant": true, "cofactor": g});
            Outcome::ok(0, render(format, &value, format!("cofactor: {g}\n")))
        }
        Ok(None) => {
            let value = json!({"model": l.model.name(), "invariant": false, "cofactor": null});
            Outcome::ok(2, render(format, &value, "not invariant\n".into()))
        }
        Err(e) => Outcome::input_error(e.to_string()),
    }
}

fn decompose(format: Format, l: &Loaded, flags: &AuditFlags) -> Outcome {
    let (f, x) = match (needs_hypersurface(l), needs_field(l)) {
        (Ok(f), Ok(x)) => (f, x),
        (Err(e), _) | (_, Err(e)) => return Outcome::input_error(e),
    };
    let o = match options(l, flags) {
        Ok(o) => o,
        Err(e) => return Outcome::input_error(e),
    };
    let m = &l.model;
    let names = m.variable_names();
    let subset = o.subset.clone().unwrap_or_else(|| (0..m.nvars()).collect());
    let radial = match o.radial_index {
        Some(i) => i,
        None => {
            let deg_v = match m.homogeneous_degree(&f) {
                Ok(Some(d)) => d,
                _ => return Outcome::ok(2, "hypersurface equation is not quasi-homogeneous\n".into()),
            };
            match choose_radial_index(m, &deg_v, &subset) {
                Some(i) => i,
                None => return Outcome::ok(2, "no radial field with nonzero theta is supported on the index set\n".into()),
            }
        }
    };
    match koszul_decompose(m, &f, &x, radial, o.subset.as_deref()) {
        Ok(d) => {
            let v = verify_decomposition(m, &f, &x, &d);
            let mut text = String::new();
            let _ = writeln!(text, "radial field: {}", d.radial_index + 1);
            let _ = writeln!(text, "theta: {}", format_rational(&d.theta));
            let _ = writeln!(text, "cofactor: {}", d.cofactor.to_string_with(names));
            for (&(j, k), p) in &d.pjk {
                let _ = writeln!(text, "P[{},{}] = {}", names[j], names[k], p.to_string_with(names));
            }
            let _ = writeln!(text, "verified: {}", if v.is_valid() { "yes" } else { "no" });
            let p: serde_json::Map<String, Value> = d
                .pjk
                .iter()
                .map(|(&(j, k), p)| (format!("{},{}", names[j], names[k]), Value::String(p.to_string_with(names))))
                .collect();
            let value = json!({
                "model": m.name(),
                "index_set": d.index_set.iter().map(|&j| names[j].clone()).collect::<Vec<_>>(),
                "radial_index": d.radial_index + 1,
                "theta": format_rational(&d.theta),
                "cofactor": d.cofactor.to_string_with(names),
                "p": p,
                "verified": v.is_valid(),
            });
            Outcome::ok(if v.is_valid() { 0 } else { 2 }, render(format, &value, text))
        }
        Err(e @ (NormalFormError::BadIndexSet | NormalFormError::ThetaZero { .. } | NormalFormError::RadialNotSupported { .. })) => {
            Outcome::input_error(e.to_string())
        }
        Err(e) => {
            let value = json!({"model": m.name(), "error": e.to_string()});
            Outcome::ok(2, render(format, &value, format!("no decomposition: {e}\n")))
        }
    }
}

fn audit(format: Format, l: &Loaded, flags: &AuditFlags) -> Outcome {
    let (f, x) = match (needs_hypersurface(l), needs_field(l)) {
        (Ok(f), Ok(x)) => (f, x),
        (Err(e), _) | (_, Err(e)) => return Outcome::input_error(e),
    };
    let o = match options(l, flags) {
        Ok(o) => o,
        Err(e) => return Outcome::input_error(e),
    };
    let report = audit_case(&l.model, &x, &f, &o);
    Outcome::ok(report.exit_code(), render(format, &report.to_json(), report.to_text()))
}

/// `--key value` or `--key=value` pairs.
fn fixture_params(raw: &[String]) -> Result<(Params, Option<PathBuf>, Option<Format>), String> {
    let mut params = Params::new();
    let mut export = None;
    let mut format = None;
    let mut i = 0;
    while i < raw.len() {
        let Some(key) = raw[i].strip_prefix("--") else {
            return Err(format!("expected --key, got '{}'", raw[i]));
        };
        let (key, value) = match key.split_once('=') {
            Some((k, v)) => (k.to_string(), v.to_string()),
            None => {
                i += 1;
                let v = raw.get(i).ok_or_else(|| format!("--{key} needs a value"))?;
                (key.to_string(), v.clone())
            }
        };
        match key.as_str() {
            "export" => export = Some(PathBuf::from(value)),
            "format" => {
                format = Some(Format::from_str(&value, false).map_err(|_| format!("unknown format '{value}'"))?);
            }
            _ => params.set(&key, value),
        }
        i += 1;
    }
    Ok((params, export, format))
}

fn fixture(format: Format, name: &Option<String>, list: bool, raw: &[String]) -> Outcome {
    let registry = FixtureRegistry::standard();
    if list || name.is_none() {
        let mut text = String::new();
        for n in registry.names() {
            let fam = registry.get(n).expect("listed");
            let _ = writeln!(text, "{n}: {}", fam.summary());
            for (k, d) in fam.parameters() {
                let _ = writeln!(text, "  --{k}: {d}");
            }
        }
        let value = json!({"fixtures": registry.names()});
        return Outcome::ok(if list { 0 } else { 1 }, render(format, &value, text));
    }
    let name = name.as_deref().expect("checked");
    let (params, export, fmt) = match fixture_params(raw) {
        Ok(p) => p,
        Err(e) => return Outcome::input_error(e),
    };
    let format = fmt.unwrap_or(format);
    let fx = match registry.build(name, &params) {
        Ok(fx) => fx,
        Err(e) => return Outcome::input_error(e.to_string()),
    };
    let mut note = String::new();
    if let Some(path) = export {
        let case = CaseFile {
            model: fx.model.spec().clone(),
            hypersurface: Some(fx.hypersurface.clone()),
            field: Some(fx.field.clone()),
            options: fx.options.clone(),
        };
        if let Err(e) = std::fs::write(&path, case.to_text()) {
            return Outcome::input_error(format!("{}: {e}", path.display()));
        }
        note = format!("exported case to {}\n", path.display());
    }
    let run = run_fixture(&fx);
    let out = Outcome::ok(run.exit_code(), render(format, &run.to_json(), run.to_text()));
    Outcome { stderr: note, ..out }
}

fn selftest(format: Format, seed: u64, cases: usize) -> Outcome {
    let lines = run_selftest(seed, cases);
    let mut text = String::new();
    for l in &lines {
        let _ = writeln!(text, "{}: {} ({} cases){}", l.name, if l.failures == 0 { "ok" } else { "FAILED" }, l.cases, l
            .first_failure
            .as_ref()
            .map_or(String::new(), |f| format!(", first failure: {f}")));
    }
    let ok = lines.iter().all(|l| l.failures == 0);
    let value = json!({
        "seed": seed,
        "checks": lines.iter().map(|l| json!({"name": l.name, "cases": l.cases, "failures": l.failures})).collect::<Vec<_>>(),
        "ok": ok,
    });
    Outcome::ok(if ok { 0 } else { 2 }, render(format, &value, text))
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() { Outcome::input_error(text) } else { Outcome::ok(0, text) };
        }
    };
    let format = cli.format;
    let with_input = |input: &Input, f: &dyn Fn(&Loaded) -> Outcome| match load(input) {
        Ok(l) => f(&l),
        Err(e) => Outcome::input_error(e),
    };
    match &cli.command {
        Command::Classgroup { input } => with_input(input, &|l| classgroup(format, l)),
        Command::Degree { input, poly } => with_input(input, &|l| degree(format, l, poly)),
        Command::Invariance { input } => with_input(input, &|l| invariance(format, l)),
        Command::Decompose { input, flags } => with_input(input, &|l| decompose(format, l, flags)),
        Command::Audit { input, flags } => with_input(input, &|l| audit(format, l, flags)),
        Command::Fixture { name, list, params } => fixture(format, name, *list, params),
        Command::Selftest { seed, cases } => selftest(format, *seed, *cases),
    }
}
