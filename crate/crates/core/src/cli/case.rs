//! Sectioned plain-text case files.
//!
//! ```text
//! [model]
//! name = fake plane
//! dimension = 2
//! variables = z1 z2 z3
//! rays = 2 -1 | -1 2 | -1 -1
//! cones = z1 z2 | z2 z3 | z1 z3
//! display = 1 0 | 1 2 | 1 1
//!
//! [hypersurface]
//! f = z1^3 + z2^3 + z3^3
//!
//! [field]
//! z1 = z2^3
//!
//! [options]
//! radial_index = 1
//! subset = z1 z2
//! power_cap = 12
//! ```
//!
//! A presentation model uses `degrees` (free coordinates then torsion
//! residues) and `torsion` instead of `rays`. Lines starting with `#` are
//! comments.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::audit::AuditOptions;
use crate::foliation::VectorField;
use crate::model::{ModelSource, ModelSpec};
use crate::ring::{parse_polynomial, Polynomial};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for CaseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseFile {
    pub model: ModelSpec,
    pub hypersurface: Option<Polynomial>,
    pub field: Option<VectorField>,
    pub options: AuditOptions,
}

#[derive(Clone, Debug)]
struct Entry {
    line: usize,
    /// 1-based column where the value starts.
    column: usize,
    value: String,
}

const SECTIONS: [&str; 4] = ["model", "hypersurface", "field", "options"];
const MODEL_KEYS: [&str; 9] = ["name", "dimension", "variables", "rays", "allow_nonprimitive", "degrees", "torsion", "cones", "display"];

fn err(line: usize, column: usize, message: impl Into<String>) -> CaseError {
    CaseError { line, column, message: message.into() }
}

type Sections = BTreeMap<String, Vec<(String, Entry)>>;

fn split_sections(text: &str, errors: &mut Vec<CaseError>) -> Sections {
    let mut sections: Sections = BTreeMap::new();
    let mut current: Option<String> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let indent = raw.len() - raw.trim_start().len();
        if let Some(rest) = trimmed.strip_prefix('[') {
            let Some(name) = rest.strip_suffix(']') else {
                errors.push(err(line, indent + 1, "unterminated section header"));
                continue;
            };
            let name = name.trim().to_string();
            if !SECTIONS.contains(&name.as_str()) {
                errors.push(err(line, indent + 2, format!("unknown section '{name}'")));
                current = None;
                continue;
            }
            if sections.contains_key(&name) {
                errors.push(err(line, indent + 2, format!("section '{name}' appears twice")));
            }
            sections.entry(name.clone()).or_default();
            current = Some(name);
            continue;
        }
        let Some(eq) = raw.find('=') else {
            errors.push(err(line, indent + 1, "expected 'key = value'"));
            continue;
        };
        let Some(section) = &current else {
            errors.push(err(line, indent + 1, "entry outside of a section"));
            continue;
        };
        let key = raw[..eq].trim().to_string();
        let after = &raw[eq + 1..];
        let lead = after.len() - after.trim_start().len();
        let entry = Entry { line, column: eq + 2 + lead, value: after.trim().to_string() };
        let list = sections.get_mut(section).expect("section registered");
        if list.iter().any(|(k, _)| k == &key) {
            errors.push(err(line, indent + 1, format!("duplicate key '{key}'")));
            continue;
        }
        list.push((key, entry));
    }
    sections
}

fn parse_int(e: &Entry, token: &str, offset: usize) -> Result<BigInt, CaseError> {
    token.parse().map_err(|_| {
        let msg = if token.contains('.') {
            format!("'{token}' is not an integer; floats are not accepted")
        } else {
            format!("expected an integer, got '{token}'")
        };
        err(e.line, e.column + offset, msg)
    })
}

/// Whitespace- or comma-separated tokens with their byte offsets.
fn tokens(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in s.char_indices() {
        let sep = ch.is_whitespace() || ch == ',';
        match (sep, start) {
            (true, Some(b)) => {
                out.push((b, &s[b..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(b) = start {
        out.push((b, &s[b..]));
    }
    out
}

/// `a b | c d | ...` as rows of integers.
fn int_rows(e: &Entry) -> Result<Vec<Vec<BigInt>>, CaseError> {
    let mut rows = Vec::new();
    let mut offset = 0;
    for part in e.value.split('|') {
        let mut row = Vec::new();
        for (o, t) in tokens(part) {
            row.push(parse_int(e, t, offset + o)?);
        }
        rows.push(row);
        offset += part.len() + 1;
    }
    Ok(rows)
}

fn name_rows(e: &Entry, names: &[String]) -> Result<Vec<Vec<usize>>, CaseError> {
    let mut rows = Vec::new();
    let mut offset = 0;
    for part in e.value.split('|') {
        let mut row = Vec::new();
        for (o, t) in tokens(part) {
            row.push(variable_ref(e, t, offset + o, names)?);
        }
        row.sort_unstable();
        rows.push(row);
        offset += part.len() + 1;
    }
    Ok(rows)
}

/// A variable given by name or by 1-based index.
fn variable_ref(e: &Entry, token: &str, offset: usize, names: &[String]) -> Result<usize, CaseError> {
    if let Some(j) = names.iter().position(|n| n == token) {
        return Ok(j);
    }
    match token.parse::<usize>() {
        Ok(j) if j >= 1 && j <= names.len() => Ok(j - 1),
        _ => Err(err(e.line, e.column + offset, format!("undeclared variable '{token}'"))),
    }
}

fn parse_poly(e: &Entry, names: &[String]) -> Result<Polynomial, CaseError> {
    parse_polynomial(&e.value, names).map_err(|pe| err(e.line, e.column + pe.column - 1, pe.message))
}

fn keep<T>(errors: &mut Vec<CaseError>, r: Result<T, CaseError>) -> Option<T> {
    r.map_err(|x| errors.push(x)).ok()
}

fn parse_model(entries: &[(String, Entry)], errors: &mut Vec<CaseError>) -> Option<ModelSpec> {
    let get = |k: &str| entries.iter().find(|(key, _)| key == k).map(|(_, e)| e);
    for (k, e) in entries {
        if !MODEL_KEYS.contains(&k.as_str()) {
            errors.push(err(e.line, 1, format!("unknown model key '{k}'")));
        }
    }
    let start = errors.len();
    let name = get("name").map_or_else(|| "case".to_string(), |e| e.value.clone());
    let dimension = get("dimension").and_then(|e| keep(errors, parse_int(e, &e.value, 0)));
    let variables: Option<Vec<String>> = get("variables").map(|e| tokens(&e.value).into_iter().map(|(_, t)| t.to_string()).collect());
    let rays = get("rays").and_then(|e| keep(errors, int_rows(e)));
    let degrees = get("degrees").and_then(|e| keep(errors, int_rows(e)));
    let torsion = get("torsion").and_then(|e| keep(errors, tokens(&e.value).into_iter().map(|(o, t)| parse_int(e, t, o)).collect()));
    let display = get("display").and_then(|e| keep(errors, int_rows(e)));
    let allow = match get("allow_nonprimitive") {
        None => Some(false),
        Some(e) => match e.value.as_str() {
            "true" => Some(true),
            "false" => Some(false),
            _ => keep(errors, Err(err(e.line, e.column, "expected true or false"))),
        },
    };
    let missing_line = entries.first().map_or(1, |(_, e)| e.line);
    let Some(variables) = variables else {
        errors.push(err(missing_line, 1, "model needs 'variables'"));
        return None;
    };
    let cones = get("cones").and_then(|e| keep(errors, name_rows(e, &variables)));
    let Some(dimension) = dimension else {
        if get("dimension").is_none() {
            errors.push(err(missing_line, 1, "model needs 'dimension'"));
        }
        return None;
    };
    let Ok(dimension) = usize::try_from(&dimension) else {
        let e = get("dimension").expect("present");
        errors.push(err(e.line, e.column, "dimension must be nonnegative"));
        return None;
    };
    let source = match (rays, degrees, get("rays"), get("degrees")) {
        (Some(rays), None, _, None) => {
            if let Some(e) = get("torsion") {
                errors.push(err(e.line, 1, "'torsion' only applies to a degree presentation"));
            }
            ModelSource::Rays { rays, allow_nonprimitive: allow.unwrap_or(false) }
        }
        (None, Some(degrees), None, _) => ModelSource::Presentation { degrees, torsion: torsion.unwrap_or_default() },
        (_, _, Some(e), Some(_)) => {
            errors.push(err(e.line, 1, "give either 'rays' or 'degrees', not both"));
            return None;
        }
        (_, _, None, None) => {
            errors.push(err(missing_line, 1, "model needs 'rays' or 'degrees'"));
            return None;
        }
        _ => return None,
    };
    if errors.len() > start {
        return None;
    }
    Some(ModelSpec { name, dimension, variables, source, max_cones: cones, display })
}

fn parse_options(entries: &[(String, Entry)], names: &[String], errors: &mut Vec<CaseError>) -> AuditOptions {
    let mut options = AuditOptions::default();
    for (k, e) in entries {
        match k.as_str() {
            "radial_index" => match e.value.parse::<usize>() {
                Ok(i) if i >= 1 => options.radial_index = Some(i - 1),
                _ => errors.push(err(e.line, e.column, "radial_index must be a positive integer")),
            },
            "power_cap" => match e.value.parse::<u32>() {
                Ok(c) if c >= 1 => options.power_cap = Some(c),
                _ => errors.push(err(e.line, e.column, "power_cap must be a positive integer")),
            },
            "subset" => {
                let mut s = Vec::new();
                for (o, t) in tokens(&e.value) {
                    match variable_ref(e, t, o, names) {
                        Ok(j) => s.push(j),
                        Err(x) => errors.push(x),
                    }
                }
                s.sort_unstable();
                s.dedup();
                options.subset = Some(s);
            }
            _ => errors.push(err(e.line, 1, format!("unknown option '{k}'"))),
        }
    }
    options
}

/// Parses a case file, reporting every located error found.
pub fn parse_case(text: &str) -> Result<CaseFile, Vec<CaseError>> {
    parse_inner(text).map_err(|mut errors| {
        errors.sort_by_key(|e| (e.line, e.column));
        errors
    })
}

fn parse_inner(text: &str) -> Result<CaseFile, Vec<CaseError>> {
    let mut errors = Vec::new();
    let sections = split_sections(text, &mut errors);
    let Some(model_entries) = sections.get("model") else {
        errors.push(err(1, 1, "missing [model] section"));
        return Err(errors);
    };
    let Some(model) = parse_model(model_entries, &mut errors) else {
        return Err(errors);
    };
    let names = model.variables.clone();
    let n = names.len();
    let hypersurface = sections.get("hypersurface").and_then(|entries| {
        for (k, e) in entries {
            if k != "f" {
                errors.push(err(e.line, 1, format!("unknown hypersurface key '{k}' (expected 'f')")));
            }
        }
        let (_, e) = entries.iter().find(|(k, _)| k == "f")?;
        parse_poly(e, &names).map_err(|x| errors.push(x)).ok()
    });
    let field = sections.get("field").map(|entries| {
        let mut comps = vec![Polynomial::zero(n); n];
        for (k, e) in entries {
            match names.iter().position(|v| v == k) {
                Some(j) => match parse_poly(e, &names) {
                    Ok(p) => comps[j] = p,
                    Err(x) => errors.push(x),
                },
                None => errors.push(err(e.line, 1, format!("undeclared variable '{k}'"))),
            }
        }
        VectorField::new(comps)
    });
    let options = sections.get("options").map(|o| parse_options(o, &names, &mut errors)).unwrap_or_default();
    if !errors.is_empty() {
        return Err(errors);
    }
    Ok(CaseFile { model, hypersurface, field, options })
}

fn rows_text<T: fmt::Display>(rows: &[Vec<T>]) -> String {
    rows.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")).collect::<Vec<_>>().join(" | ")
}

impl CaseFile {
    /// Canonical text form; `parse_case` reads it back to an equal value.
    pub fn to_text(&self) -> String {
        let m = &self.model;
        let names = &m.variables;
        let mut out = String::new();
        out.push_str("[model]\n");
        out.push_str(&format!("name = {}\n", m.name));
        out.push_str(&format!("dimension = {}\n", m.dimension));
        out.push_str(&format!("variables = {}\n", names.join(" ")));
        match &m.source {
            ModelSource::Rays { rays, allow_nonprimitive } => {
                out.push_str(&format!("rays = {}\n", rows_text(rays)));
                if *allow_nonprimitive {
                    out.push_str("allow_nonprimitive = true\n");
                }
            }
            ModelSource::Presentation { degrees, torsion } => {
                out.push_str(&format!("degrees = {}\n", rows_text(degrees)));
                if !torsion.is_empty() {
                    out.push_str(&format!("torsion = {}\n", torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" ")));
                }
            }
        }
        if let Some(cones) = &m.max_cones {
            let named: Vec<Vec<&str>> = cones.iter().map(|c| c.iter().map(|&j| names[j].as_str()).collect()).collect();
            out.push_str(&format!("cones = {}\n", rows_text(&named)));
        }
        if let Some(d) = &m.display {
            out.push_str(&format!("display = {}\n", rows_text(d)));
        }
        if let Some(f) = &self.hypersurface {
            out.push_str(&format!("\n[hypersurface]\nf = {}\n", f.to_string_with(names)));
        }
        if let Some(x) = &self.field {
            out.push_str("\n[field]\n");
            for (j, p) in x.components.iter().enumerate() {
                if !p.is_zero() {
                    out.push_str(&format!("{} = {}\n", names[j], p.to_string_with(names)));
                }
            }
        }
        let o = &self.options;
        if o != &AuditOptions::default() {
            out.push_str("\n[options]\n");
            if let Some(i) = o.radial_index {
                out.push_str(&format!("radial_index = {}\n", i + 1));
            }
            if let Some(s) = &o.subset {
                out.push_str(&format!("subset = {}\n", s.iter().map(|&j| names[j].as_str()).collect::<Vec<_>>().join(" ")));
            }
            if let Some(c) = o.power_cap {
                out.push_str(&format!("power_cap = {c}\n"));
            }
        }
        out
    }
}
