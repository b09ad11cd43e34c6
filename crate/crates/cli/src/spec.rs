//! Problem specifications: flat `key=value` files merged with command-line
//! flags, validated into a [`ProblemSpec`].
//!
//! Per-axis keys take a `.x`, `.y` or `.z` suffix (`domain.x = 0,1`); a key
//! without suffix holds a scalar or a comma list over the axes.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::ValueEnum;
use falva_core::action::{slots_nd, SLOTS_1D, SLOTS_2D};
use falva_core::exprdsl::LagrangianExpr;
use falva_core::fracops::{OrderSet, PairConvention};
use falva_core::Complex64;

use crate::args::Flags;
use crate::CliError;

const AXES: [&str; 3] = ["x", "y", "z"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Kind {
    Deriv,
    Action,
    Residual,
    SolveIvp,
    SolveBvp,
    Minimize,
    Sweep,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Deriv => "deriv",
            Kind::Action => "action",
            Kind::Residual => "residual",
            Kind::SolveIvp => "solve-ivp",
            Kind::SolveBvp => "solve-bvp",
            Kind::Minimize => "minimize",
            Kind::Sweep => "sweep",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        <Kind as ValueEnum>::from_str(s, false).map_err(|_| CliError::validation(format!("unknown kind `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    Plain,
    Cresson,
}

/// Unvalidated keys from a spec file and flags.
#[derive(Debug, Clone, Default)]
pub struct RawSpec {
    entries: BTreeMap<String, String>,
    /// Directory relative `input`/`out` values from the file resolve against.
    base_dir: Option<PathBuf>,
}

impl RawSpec {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::validation(format!("spec line {}: expected key=value", lineno + 1)));
            };
            let key = key.trim().to_string();
            if key.is_empty() {
                return Err(CliError::validation(format!("spec line {}: empty key", lineno + 1)));
            }
            if entries.insert(key.clone(), value.trim().to_string()).is_some() {
                return Err(CliError::validation(format!("spec line {}: duplicate key `{key}`", lineno + 1)));
            }
        }
        Ok(Self { entries, base_dir: None })
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
        let mut raw = Self::parse(&text)?;
        raw.base_dir = path.parent().map(Path::to_path_buf);
        for key in ["input", "out"] {
            if let Some(v) = raw.entries.get_mut(key) {
                let p = Path::new(v.as_str());
                if p.is_relative() {
                    if let Some(dir) = &raw.base_dir {
                        *v = dir.join(p).to_string_lossy().into_owned();
                    }
                }
            }
        }
        Ok(raw)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.entries.insert(key.to_string(), value.into());
    }

    fn remove_family(&mut self, key: &str) {
        let dotted = format!("{key}.");
        self.entries.retain(|k, _| k != key && !k.starts_with(&dotted));
    }

    /// Flags win over file keys; repeated per-axis flags replace the
    /// whole family of file keys.
    pub fn merge_flags(&mut self, flags: &Flags) {
        let scalars = [
            ("lagrangian", &flags.lagrangian),
            ("alpha", &flags.alpha),
            ("beta", &flags.beta),
            ("delta", &flags.delta),
            ("chi", &flags.chi),
            ("gamma", &flags.gamma),
            ("path", &flags.path),
            ("qdot", &flags.qdot),
            ("form", &flags.form),
            ("boundary", &flags.boundary),
            ("q0", &flags.q0),
            ("v0", &flags.v0),
            ("convention", &flags.convention),
        ];
        for (key, value) in scalars {
            if let Some(v) = value {
                if matches!(key, "alpha" | "beta" | "delta" | "chi") {
                    self.remove_family(key);
                }
                self.set(key, v.clone());
            }
        }
        for (key, values) in [("domain", &flags.domain), ("n", &flags.n)] {
            if !values.is_empty() {
                self.remove_family(key);
                if values.len() == 1 {
                    self.set(key, values[0].clone());
                } else {
                    for (axis, v) in AXES.iter().zip(values) {
                        self.set(&format!("{key}.{axis}"), v.clone());
                    }
                    if values.len() > AXES.len() {
                        self.set("domain.extra", "");
                    }
                }
            }
        }
        for p in &flags.params {
            match p.split_once('=') {
                Some((name, value)) => self.set(&format!("param.{}", name.trim()), value.trim()),
                None => self.set(&format!("param.{p}"), ""),
            }
        }
        if let Some(p) = &flags.input {
            self.set("input", p.to_string_lossy());
        }
        if let Some(p) = &flags.out {
            self.set("out", p.to_string_lossy());
        }
        if flags.format.is_some() {
            self.set("format", "csv");
        }
    }
}

/// A validated problem.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub kind: Kind,
    /// Kind evaluated per alpha by a sweep.
    pub sweep_of: Option<Kind>,
    pub lagrangian: Option<LagrangianExpr>,
    /// Path expression in the coordinate names of [`coordinate_names`].
    pub path: Option<LagrangianExpr>,
    pub qdot: Option<LagrangianExpr>,
    pub input: Option<PathBuf>,
    /// Per-axis `(lower, observer)`; empty when taken from the input file.
    pub domain: Vec<(f64, f64)>,
    /// Cells per axis; empty when taken from the input file.
    pub n: Vec<usize>,
    pub alpha: Vec<f64>,
    pub beta: Option<Vec<f64>>,
    pub delta: Option<Vec<f64>>,
    pub chi: Option<Vec<f64>>,
    pub gamma: Complex64,
    pub convention: PairConvention,
    /// Explicit form; 1D defaults to plain, 2D/3D always use Cresson.
    pub form: Option<Form>,
    pub boundary: Option<(f64, f64)>,
    pub q0: Option<f64>,
    pub v0: Option<f64>,
    pub out: Option<PathBuf>,
}

/// Names of the coordinates a path expression may use.
pub fn coordinate_names(dim: usize) -> &'static [&'static str] {
    match dim {
        1 => &["tau"],
        2 => &["x", "y"],
        _ => &["x", "y", "z"],
    }
}

fn parse_f64(key: &str, s: &str) -> Result<f64, CliError> {
    let v: f64 = s.trim().parse().map_err(|_| CliError::validation(format!("{key}: `{s}` is not a number")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::validation(format!("{key}: `{s}` is not finite")))
    }
}

fn parse_list(key: &str, s: &str) -> Result<Vec<f64>, CliError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|part| parse_f64(key, part)).collect()
}

fn parse_pair(key: &str, s: &str) -> Result<(f64, f64), CliError> {
    match parse_list(key, s)?.as_slice() {
        &[a, b] => Ok((a, b)),
        _ => Err(CliError::validation(format!("{key}: expected two comma-separated numbers, got `{s}`"))),
    }
}

pub fn parse_gamma(s: &str) -> Result<Complex64, CliError> {
    let t = s.trim();
    match t {
        "i" | "+i" => return Ok(Complex64::new(0.0, 1.0)),
        "-i" => return Ok(Complex64::new(0.0, -1.0)),
        _ => {}
    }
    match *parse_list("gamma", t)?.as_slice() {
        [re] => Ok(Complex64::new(re, 0.0)),
        [re, im] => Ok(Complex64::new(re, im)),
        _ => Err(CliError::validation(format!("gamma: expected RE,IM or i or -i, got `{s}`"))),
    }
}

fn check_orders(key: &str, values: &[f64]) -> Result<(), CliError> {
    match values.iter().find(|&&v| !(v > 0.0 && v < 1.0)) {
        Some(v) => Err(CliError::validation(format!("{key}: order {v} outside (0, 1)"))),
        None => Ok(()),
    }
}

impl ProblemSpec {
    /// Scalar-or-list key, or its `.x/.y/.z` family.
    fn axis_values(raw: &RawSpec, key: &str) -> Result<Option<Vec<String>>, CliError> {
        let family: Vec<(usize, &str)> =
            AXES.iter().enumerate().filter_map(|(i, a)| raw.get(&format!("{key}.{a}")).map(|v| (i, v))).collect();
        let stray = raw
            .entries
            .keys()
            .find(|k| k.strip_prefix(key).and_then(|r| r.strip_prefix('.')).is_some_and(|a| !AXES.contains(&a)));
        if let Some(k) = stray {
            return Err(CliError::validation(format!("unknown axis key `{k}` (axes are x, y, z)")));
        }
        match (raw.get(key), family.is_empty()) {
            (Some(_), false) => Err(CliError::validation(format!("`{key}` given both as a list and per axis"))),
            (Some(v), true) => Ok(Some(vec![v.to_string()])),
            (None, true) => Ok(None),
            (None, false) => {
                if family.iter().enumerate().any(|(pos, (i, _))| pos != *i) {
                    return Err(CliError::validation(format!("`{key}` axes must start at .x without gaps")));
                }
                Ok(Some(family.into_iter().map(|(_, v)| v.to_string()).collect()))
            }
        }
    }

    fn order_list(raw: &RawSpec, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        let Some(parts) = Self::axis_values(raw, key)? else { return Ok(None) };
        let mut values = Vec::new();
        for p in &parts {
            values.extend(parse_list(key, p)?);
        }
        Ok(Some(values))
    }

    pub fn from_raw(kind: Kind, sweep_of: Option<Kind>, raw: &RawSpec) -> Result<Self, CliError> {
        if let Some(k) = raw.get("kind") {
            if k.parse::<Kind>()? != kind {
                return Err(CliError::validation(format!("spec file is for kind `{k}`, command is `{kind}`")));
            }
        }
        let sweep_of = match (kind, sweep_of, raw.get("of")) {
            (Kind::Sweep, Some(of), _) => Some(of),
            (Kind::Sweep, None, Some(of)) => Some(of.parse()?),
            (Kind::Sweep, None, None) => return Err(CliError::validation("sweep needs --of KIND")),
            (_, _, Some(_)) => return Err(CliError::validation("`of` only applies to sweep")),
            _ => None,
        };
        if matches!(sweep_of, Some(Kind::Sweep | Kind::Deriv)) {
            return Err(CliError::validation("sweep --of must be action, residual, solve-ivp, solve-bvp or minimize"));
        }
        if let Some(f) = raw.get("format") {
            if f != "csv" {
                return Err(CliError::validation(format!("format `{f}` is not supported (csv only)")));
            }
        }

        let params: Vec<(String, f64)> = raw
            .entries
            .iter()
            .filter_map(|(k, v)| k.strip_prefix("param.").map(|name| (name, v)))
            .map(|(name, v)| {
                if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                    return Err(CliError::validation(format!("param: invalid name `{name}`")));
                }
                Ok((name.to_string(), parse_f64(&format!("param.{name}"), v)?))
            })
            .collect::<Result<_, _>>()?;
        let bind = |key: &str| -> Result<Option<LagrangianExpr>, CliError> {
            let Some(src) = raw.get(key) else { return Ok(None) };
            let e = LagrangianExpr::parse(src).map_err(|e| CliError::validation(format!("{key}: {e}")))?;
            let constants: Vec<(&str, f64)> = params.iter().map(|(n, v)| (n.as_str(), *v)).collect();
            Ok(Some(e.bind_constants(&constants)))
        };

        let input = raw.get("input").map(PathBuf::from);
        let domain: Vec<(f64, f64)> = match Self::axis_values(raw, "domain")? {
            Some(parts) => parts.iter().map(|p| parse_pair("domain", p)).collect::<Result<_, _>>()?,
            None => Vec::new(),
        };
        if raw.get("domain.extra").is_some() {
            return Err(CliError::validation("at most 3 axes are supported"));
        }
        for &(lo, hi) in &domain {
            if hi <= lo {
                return Err(CliError::validation(format!("domain: observer {hi} must exceed lower bound {lo}")));
            }
        }
        let n: Vec<usize> = match Self::axis_values(raw, "n")? {
            Some(parts) => parts
                .iter()
                .flat_map(|p| p.split(','))
                .map(|s| {
                    s.trim()
                        .parse::<usize>()
                        .ok()
                        .filter(|&v| v >= 2)
                        .ok_or_else(|| CliError::validation(format!("n: `{s}` is not an integer >= 2")))
                })
                .collect::<Result<_, _>>()?,
            None => Vec::new(),
        };
        if domain.is_empty() && input.is_none() {
            return Err(CliError::validation("domain is required (--domain LO,HI per axis)"));
        }
        if n.is_empty() && input.is_none() {
            return Err(CliError::validation("n is required (--n INT)"));
        }

        let alpha = Self::order_list(raw, "alpha")?.unwrap_or_default();
        let beta = Self::order_list(raw, "beta")?;
        let delta = Self::order_list(raw, "delta")?;
        let chi = Self::order_list(raw, "chi")?;
        if kind == Kind::Sweep {
            if alpha.len() < 2 {
                return Err(CliError::validation(format!("sweep needs at least 2 alpha values, got {}", alpha.len())));
            }
        } else if alpha.is_empty() {
            return Err(CliError::validation("alpha is required"));
        }
        check_orders("alpha", &alpha)?;
        for (key, list) in [("beta", &beta), ("delta", &delta), ("chi", &chi)] {
            if let Some(l) = list {
                check_orders(key, l)?;
            }
        }
        let gamma = match raw.get("gamma") {
            Some(g) => parse_gamma(g)?,
            None => Complex64::new(0.0, -1.0),
        };
        let convention = match raw.get("convention") {
            None | Some("weight-left") => PairConvention::WeightLeft,
            Some("weight-right") => PairConvention::WeightRight,
            Some(c) => return Err(CliError::validation(format!("convention `{c}` (use weight-left or weight-right)"))),
        };
        let form = match raw.get("form") {
            None => None,
            Some("plain") => Some(Form::Plain),
            Some("cresson") => Some(Form::Cresson),
            Some(f) => return Err(CliError::validation(format!("form `{f}` (use plain or cresson)"))),
        };
        let boundary = raw.get("boundary").map(|b| parse_pair("boundary", b)).transpose()?;
        let q0 = raw.get("q0").map(|v| parse_f64("q0", v)).transpose()?;
        let v0 = raw.get("v0").map(|v| parse_f64("v0", v)).transpose()?;

        let spec = Self {
            kind,
            sweep_of,
            lagrangian: bind("lagrangian")?,
            path: bind("path")?,
            qdot: bind("qdot")?,
            input,
            domain,
            n,
            alpha,
            beta,
            delta,
            chi,
            gamma,
            convention,
            form,
            boundary,
            q0,
            v0,
            out: raw.get("out").map(PathBuf::from),
        };
        spec.validate_shape()?;
        Ok(spec)
    }

    pub fn is_cresson(&self, dim: usize) -> bool {
        dim > 1 || self.form == Some(Form::Cresson)
    }

    /// Kind that actually runs (the sweep target for sweeps).
    pub fn target(&self) -> Kind {
        self.sweep_of.unwrap_or(self.kind)
    }

    /// Number of axes from the domain, or 1 for a `tau,q` input file.
    pub fn declared_dim(&self) -> Option<usize> {
        (!self.domain.is_empty()).then_some(self.domain.len())
    }

    fn validate_shape(&self) -> Result<(), CliError> {
        let target = self.target();
        if let Some(dim) = self.declared_dim() {
            if !(1..=3).contains(&dim) {
                return Err(CliError::validation(format!("{dim} axes given, at most 3 supported")));
            }
            if !self.n.is_empty() && self.n.len() != 1 && self.n.len() != dim {
                return Err(CliError::validation(format!("n has {} entries for {dim} axes", self.n.len())));
            }
            if dim > 1 && self.form == Some(Form::Plain) {
                return Err(CliError::validation("form=plain is 1D only; 2D and 3D problems use Cresson derivatives"));
            }
            if dim > 1 && matches!(target, Kind::SolveIvp | Kind::SolveBvp | Kind::Minimize) {
                return Err(CliError::validation(format!("{target} is 1D only")));
            }
            if self.kind == Kind::Sweep && dim > 1 {
                return Err(CliError::validation("sweep is 1D only"));
            }
            if let Some(p) = &self.path {
                check_vars("path", p, coordinate_names(dim))?;
            }
        }
        if let Some(q) = &self.qdot {
            check_vars("qdot", q, &["tau"])?;
            if self.form == Some(Form::Cresson) || self.declared_dim().is_some_and(|d| d > 1) {
                return Err(CliError::validation("qdot samples only apply to the plain 1D form"));
            }
        }
        if self.path.is_some() && self.input.is_some() {
            return Err(CliError::validation("give either path or input, not both"));
        }
        match target {
            Kind::Deriv => {}
            _ if self.lagrangian.is_none() => {
                return Err(CliError::validation(format!("{target} needs a lagrangian")));
            }
            _ => {}
        }
        if matches!(target, Kind::SolveIvp | Kind::SolveBvp | Kind::Minimize) {
            if self.input.is_some() || self.path.is_some() {
                return Err(CliError::validation(format!("{target} takes no path or input")));
            }
            if self.form == Some(Form::Cresson) {
                return Err(CliError::validation(format!(
                    "{target} solves the plain weighted equation; drop form=cresson"
                )));
            }
            if self.kind != Kind::Sweep && self.alpha.len() != 1 {
                return Err(CliError::validation(format!("{target} takes a single alpha")));
            }
        }
        if target == Kind::SolveIvp && (self.q0.is_none() || self.v0.is_none()) {
            return Err(CliError::validation("solve-ivp needs q0 and v0"));
        }
        if matches!(target, Kind::SolveBvp | Kind::Minimize) && self.boundary.is_none() {
            return Err(CliError::validation(format!("{target} needs boundary=QA,QB")));
        }
        Ok(())
    }

    /// Per-axis orders for a `dim`-axis problem.
    pub fn orders(&self, dim: usize) -> Result<OrderSet, CliError> {
        let one = |key: &str, v: &Option<Vec<f64>>| -> Result<Option<f64>, CliError> {
            match v.as_deref() {
                None => Ok(None),
                Some([x]) => Ok(Some(*x)),
                Some(_) => Err(CliError::validation(format!("{key} must be a single value here"))),
            }
        };
        let spread = |key: &str, v: &[f64]| -> Result<Vec<f64>, CliError> {
            match v.len() {
                1 => Ok(vec![v[0]; dim]),
                l if l == dim => Ok(v.to_vec()),
                l => Err(CliError::validation(format!("{key} has {l} values for {dim} axes"))),
            }
        };
        let (alpha, delta) = match dim {
            1 => {
                let a = one("alpha", &Some(self.alpha.clone()))?.unwrap_or(0.5);
                if self.delta.is_some() || self.chi.is_some() {
                    return Err(CliError::validation("1D problems take alpha and beta (no delta/chi)"));
                }
                (vec![a], vec![one("beta", &self.beta)?.unwrap_or(a)])
            }
            2 => {
                let alpha = match (self.alpha.len(), one("beta", &self.beta)?) {
                    (1, beta) => vec![self.alpha[0], beta.unwrap_or(self.alpha[0])],
                    (2, None) => self.alpha.clone(),
                    (2, Some(_)) => return Err(CliError::validation("give the y order either as beta or as alpha.y")),
                    (l, _) => return Err(CliError::validation(format!("alpha has {l} values for 2 axes"))),
                };
                let delta = match (self.delta.as_deref(), one("chi", &self.chi)?) {
                    (None, chi) => vec![alpha[0], chi.unwrap_or(alpha[1])],
                    (Some([d]), chi) => vec![*d, chi.unwrap_or(alpha[1])],
                    (Some([d, c]), None) => vec![*d, *c],
                    (Some([_, _]), Some(_)) => {
                        return Err(CliError::validation("give the y companion order either as chi or as delta.y"))
                    }
                    (Some(l), _) => {
                        return Err(CliError::validation(format!("delta has {} values for 2 axes", l.len())))
                    }
                };
                (alpha, delta)
            }
            _ => {
                if self.beta.is_some() || self.chi.is_some() {
                    return Err(CliError::validation("3D problems take per-axis alpha and delta lists (no beta/chi)"));
                }
                let alpha = spread("alpha", &self.alpha)?;
                let delta = match &self.delta {
                    Some(d) => spread("delta", d)?,
                    None => alpha.clone(),
                };
                (alpha, delta)
            }
        };
        Ok(OrderSet::nd(alpha, delta, self.gamma)?.with_convention(self.convention))
    }

    /// Copy with every weight order set to `alpha` (the sweep variable).
    pub fn at_alpha(&self, alpha: f64) -> Self {
        let mut s = self.clone();
        s.kind = self.target();
        s.sweep_of = None;
        s.alpha = vec![alpha];
        s
    }

    /// Slot names the Lagrangian binds to, choosing the named 1D/2D slots
    /// when they fit and the indexed `qx1.., x1..` names otherwise.
    pub fn slot_names(&self, dim: usize) -> Result<(Vec<String>, bool), CliError> {
        let l = self.lagrangian.as_ref().ok_or_else(|| CliError::validation("a lagrangian is required"))?;
        let named: Vec<String> = match dim {
            1 => SLOTS_1D.iter().map(|s| s.to_string()).collect(),
            2 => SLOTS_2D.iter().map(|s| s.to_string()).collect(),
            _ => slots_nd(dim),
        };
        let fits = |names: &[String]| l.free_vars().iter().all(|v| names.contains(v));
        if fits(&named) {
            return Ok((named, dim == 3));
        }
        let indexed = slots_nd(dim);
        if fits(&indexed) {
            return Ok((indexed, true));
        }
        let unknown: Vec<&str> = l.free_vars().iter().filter(|v| !named.contains(v)).map(String::as_str).collect();
        Err(CliError::validation(format!(
            "lagrangian uses {} which are not {dim}D slots (allowed: {} or {})",
            unknown.join(", "),
            named.join(", "),
            indexed.join(", ")
        )))
    }
}

fn check_vars(key: &str, e: &LagrangianExpr, allowed: &[&str]) -> Result<(), CliError> {
    match e.free_vars().iter().find(|v| !allowed.contains(&v.as_str())) {
        Some(v) => Err(CliError::validation(format!(
            "{key}: unknown variable `{v}` (allowed: {}, or a --param name)",
            allowed.join(", ")
        ))),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(kind: Kind, text: &str) -> Result<ProblemSpec, CliError> {
        ProblemSpec::from_raw(kind, None, &RawSpec::parse(text).unwrap())
    }

    #[test]
    fn parse_skips_comments_and_rejects_bad_lines() {
        let raw = RawSpec::parse("# c\n\n alpha = 0.5 \nlagrangian= qdot^2/2 - q\n").unwrap();
        assert_eq!(raw.get("alpha"), Some("0.5"));
        assert_eq!(raw.get("lagrangian"), Some("qdot^2/2 - q"));
        assert!(RawSpec::parse("alpha 0.5").is_err());
        assert!(RawSpec::parse("=1").is_err());
        let e = RawSpec::parse("n = 1\nn = 2").unwrap_err();
        assert!(e.to_string().contains("line 2"));
    }

    #[test]
    fn gamma_forms() {
        assert_eq!(parse_gamma("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(parse_gamma("i").unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(parse_gamma("0.5,-2").unwrap(), Complex64::new(0.5, -2.0));
        assert!(parse_gamma("j").is_err());
    }

    #[test]
    fn two_d_orders_from_axis_keys() {
        let s = spec(
            Kind::Deriv,
            "alpha.x = 0.3\nalpha.y = 0.6\ndelta = 0.7\nchi = 0.8\ndomain.x = 0,1\ndomain.y = 0,2\nn = 8\n",
        )
        .unwrap();
        let o = s.orders(2).unwrap();
        assert_eq!(o.alphas(), &[0.3, 0.6]);
        assert_eq!(o.deltas(), &[0.7, 0.8]);

        let s = spec(Kind::Deriv, "alpha = 0.4\nbeta = 0.9\ndomain.x = 0,1\ndomain.y = 0,1\nn = 8\n").unwrap();
        let o = s.orders(2).unwrap();
        assert_eq!(o.alphas(), &[0.4, 0.9]);
        assert_eq!(o.deltas(), &[0.4, 0.9]);
    }

    #[test]
    fn orders_outside_unit_interval_are_rejected() {
        for a in ["0", "1", "-0.2", "1.5", "nan"] {
            let r = spec(Kind::Action, &format!("lagrangian = 1\nalpha = {a}\ndomain = 0,1\nn = 8\n"));
            assert_eq!(r.unwrap_err().exit_code(), 2, "{a}");
        }
    }

    #[test]
    fn sweep_needs_two_alphas_and_a_target() {
        let base = "lagrangian = 1\ndomain = 0,1\nn = 8\n";
        let raw = RawSpec::parse(&format!("{base}alpha = 0.5\n")).unwrap();
        assert!(ProblemSpec::from_raw(Kind::Sweep, Some(Kind::Action), &raw).is_err());
        let raw = RawSpec::parse(&format!("{base}alpha = 0.5,0.6\n")).unwrap();
        assert!(ProblemSpec::from_raw(Kind::Sweep, None, &raw).is_err());
        assert!(ProblemSpec::from_raw(Kind::Sweep, Some(Kind::Deriv), &raw).is_err());
        let s = ProblemSpec::from_raw(Kind::Sweep, Some(Kind::Action), &raw).unwrap();
        assert_eq!(s.target(), Kind::Action);
        let one = s.at_alpha(0.6);
        assert_eq!(one.kind, Kind::Action);
        assert_eq!(one.alpha, vec![0.6]);
    }

    #[test]
    fn flags_override_file_keys() {
        let mut raw = RawSpec::parse("alpha = 0.5\ndomain.x = 0,1\ndomain.y = 0,1\nn = 8\nlagrangian = 1\n").unwrap();
        let flags = Flags { alpha: Some("0.25".into()), domain: vec!["0,2".into()], ..Flags::default() };
        raw.merge_flags(&flags);
        assert_eq!(raw.get("alpha"), Some("0.25"));
        assert_eq!(raw.get("domain.y"), None);
        let s = ProblemSpec::from_raw(Kind::Action, None, &raw).unwrap();
        assert_eq!(s.domain, vec![(0.0, 2.0)]);
    }

    #[test]
    fn slot_family_is_chosen_from_the_lagrangian() {
        let s = spec(Kind::Action, "lagrangian = qx1^2 + x2*q\nalpha = 0.5\ndomain.x = 0,1\ndomain.y = 0,1\nn = 4\n")
            .unwrap();
        assert!(s.slot_names(2).unwrap().1);
        let s = spec(Kind::Action, "lagrangian = qx^2 + y*q\nalpha = 0.5\ndomain.x = 0,1\ndomain.y = 0,1\nn = 4\n")
            .unwrap();
        assert!(!s.slot_names(2).unwrap().1);
    }
}
