//! Parsing, validation, and canonical printing of system-definition files.
//!
//! A system file is a JSON document with sections `meta`, `domain`, `J`,
//! `P`, `S`, `params`, `bc`, and `sim`. Rational entries are written as
//! integers or strings `"p/q"`; the shorthand `"builtin": "<preset>"`
//! replaces the explicit operator sections. Floats are only permitted in
//! the `domain`, `bc`, and `sim` sections so the symbolic layer stays exact.

use bphs_core::onevar::OneVarPolyMat;
use bphs_core::matrix::RatMat;
use bphs_core::rational::{format_rational, parse_rational, Rational};
use bphs_core::sim::model::{
    builtin, BoundaryCondition, InitialProfile, Params, Preset, SystemModel,
};
use serde_json::{json, Map, Value};

use crate::CliError;

#[derive(Debug, Clone)]
pub struct SimSettings {
    pub n_cells: usize,
    pub dt: f64,
    pub t_end: f64,
    pub order: usize,
    pub initial: InitialProfile,
}

impl Default for SimSettings {
    fn default() -> Self {
        SimSettings {
            n_cells: 100,
            dt: 1e-3,
            t_end: 0.5,
            order: 2,
            initial: InitialProfile::Gaussian { center: 0.5, width: 0.1, amp: 1.0 },
        }
    }
}

/// A parsed and validated system definition. `model` is present exactly
/// when the file names a builtin preset; only preset systems can be
/// simulated, while `check` and `derive` also accept explicit operators.
#[derive(Debug, Clone)]
pub struct SystemDefinition {
    pub name: String,
    pub preset: Option<Preset>,
    pub params: Params,
    pub domain: (f64, f64),
    pub j: Option<OneVarPolyMat>,
    pub p: Option<OneVarPolyMat>,
    pub s: Option<OneVarPolyMat>,
    pub bc_a: BoundaryCondition,
    pub bc_b: BoundaryCondition,
    pub sim: SimSettings,
    pub model: Option<SystemModel>,
}

fn obj<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>, CliError> {
    v.as_object().ok_or_else(|| CliError::Parse(format!("{what} must be an object")))
}

fn rational_entry(v: &Value, what: &str) -> Result<Rational, CliError> {
    match v {
        Value::Number(n) => {
            let i = n
                .as_i64()
                .ok_or_else(|| CliError::Parse(format!("{what}: numeric rational entries must be integers, got {n}")))?;
            Ok(Rational::from_integer(i.into()))
        }
        Value::String(s) => parse_rational(s).map_err(|e| CliError::Parse(format!("{what}: {e}"))),
        other => Err(CliError::Parse(format!("{what}: expected integer or \"p/q\" string, got {other}"))),
    }
}

fn f64_entry(v: &Value, what: &str) -> Result<f64, CliError> {
    v.as_f64().ok_or_else(|| CliError::Parse(format!("{what} must be a number")))
}

fn usize_entry(v: &Value, what: &str) -> Result<usize, CliError> {
    v.as_u64()
        .map(|u| u as usize)
        .ok_or_else(|| CliError::Parse(format!("{what} must be a non-negative integer")))
}

/// One matrix: a non-ragged list of rows of rational entries.
fn parse_matrix(v: &Value, what: &str) -> Result<RatMat, CliError> {
    let rows = v
        .as_array()
        .ok_or_else(|| CliError::Parse(format!("{what} must be a list of rows")))?;
    if rows.is_empty() {
        return Err(CliError::Validation(format!("{what} has no rows")));
    }
    let mut parsed: Vec<Vec<Rational>> = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let entries = row
            .as_array()
            .ok_or_else(|| CliError::Parse(format!("{what} row {i} must be a list")))?;
        let mut r = Vec::with_capacity(entries.len());
        for (j, e) in entries.iter().enumerate() {
            r.push(rational_entry(e, &format!("{what} entry ({i},{j})"))?);
        }
        parsed.push(r);
    }
    let cols = parsed[0].len();
    if cols == 0 {
        return Err(CliError::Validation(format!("{what} has empty rows")));
    }
    if parsed.iter().any(|r| r.len() != cols) {
        return Err(CliError::Validation(format!("{what} is ragged: rows have unequal lengths")));
    }
    Ok(RatMat::from_fn(parsed.len(), cols, |i, j| parsed[i][j].clone()))
}

/// An operator section `{ "coeffs": [M0, M1, ...] }` meaning M0 + M1 s + ….
/// An empty coefficient list is the zero operator (its size is inferred
/// from the companion sections).
fn parse_operator(v: &Value, what: &str) -> Result<Option<OneVarPolyMat>, CliError> {
    let map = obj(v, what)?;
    let coeffs = map
        .get("coeffs")
        .ok_or_else(|| CliError::Parse(format!("{what} is missing \"coeffs\"")))?
        .as_array()
        .ok_or_else(|| CliError::Parse(format!("{what}.coeffs must be a list of matrices")))?;
    if coeffs.is_empty() {
        return Ok(None);
    }
    let mats: Vec<RatMat> = coeffs
        .iter()
        .enumerate()
        .map(|(k, m)| parse_matrix(m, &format!("{what}.coeffs[{k}]")))
        .collect::<Result<_, _>>()?;
    let (r, c) = (mats[0].rows(), mats[0].cols());
    if mats.iter().any(|m| m.rows() != r || m.cols() != c) {
        return Err(CliError::Validation(format!("{what}.coeffs matrices have mixed shapes")));
    }
    Ok(Some(OneVarPolyMat::new(r, c, mats)))
}

fn parse_params(v: &Value) -> Result<Params, CliError> {
    let map = obj(v, "params")?;
    let mut params = Params::default();
    for (name, val) in map {
        let r = rational_entry(val, &format!("params.{name}"))?;
        set_param(&mut params, name, r)?;
    }
    Ok(params)
}

pub fn set_param(params: &mut Params, name: &str, value: Rational) -> Result<(), CliError> {
    match name {
        "k" => params.k = value,
        "T" => params.t = value,
        "rhoA" => params.rho_a = value,
        "mu" => params.mu = value,
        other => {
            return Err(CliError::Validation(format!(
                "unknown parameter \"{other}\" (expected k, T, rhoA, mu)"
            )))
        }
    }
    Ok(())
}

fn parse_bc(v: &Value, what: &str) -> Result<BoundaryCondition, CliError> {
    let map = obj(v, what)?;
    let kind = map
        .get("type")
        .and_then(Value::as_str)
        .ok_or_else(|| CliError::Parse(format!("{what}.type must be a string")))?;
    match kind {
        "clamped" => Ok(BoundaryCondition::Clamped),
        "stress" => {
            let amp = f64_entry(
                map.get("amp").ok_or_else(|| CliError::Parse(format!("{what} stress needs \"amp\"")))?,
                &format!("{what}.amp"),
            )?;
            let freq = f64_entry(
                map.get("freq").ok_or_else(|| CliError::Parse(format!("{what} stress needs \"freq\"")))?,
                &format!("{what}.freq"),
            )?;
            Ok(BoundaryCondition::Stress { amp, freq })
        }
        other => Err(CliError::Validation(format!(
            "{what}: unknown boundary condition \"{other}\" (expected clamped or stress)"
        ))),
    }
}

fn parse_initial(v: &Value) -> Result<InitialProfile, CliError> {
    let map = obj(v, "sim.initial")?;
    let profile = map
        .get("profile")
        .and_then(Value::as_str)
        .ok_or_else(|| CliError::Parse("sim.initial.profile must be a string".into()))?;
    let get_f64 = |key: &str, default: f64| -> Result<f64, CliError> {
        match map.get(key) {
            Some(v) => f64_entry(v, &format!("sim.initial.{key}")),
            None => Ok(default),
        }
    };
    match profile {
        "zero" => Ok(InitialProfile::Zero),
        "gaussian" => Ok(InitialProfile::Gaussian {
            center: get_f64("center", 0.5)?,
            width: get_f64("width", 0.1)?,
            amp: get_f64("amp", 1.0)?,
        }),
        "sine_mode" => Ok(InitialProfile::SineMode {
            mode: match map.get("mode") {
                Some(v) => usize_entry(v, "sim.initial.mode")?,
                None => 1,
            },
            amp: get_f64("amp", 1.0)?,
        }),
        other => Err(CliError::Validation(format!(
            "unknown initial profile \"{other}\" (expected zero, gaussian, sine_mode)"
        ))),
    }
}

fn parse_sim(v: &Value) -> Result<SimSettings, CliError> {
    let map = obj(v, "sim")?;
    let mut sim = SimSettings::default();
    for (key, val) in map {
        match key.as_str() {
            "N" => sim.n_cells = usize_entry(val, "sim.N")?,
            "dt" => sim.dt = f64_entry(val, "sim.dt")?,
            "t_end" => sim.t_end = f64_entry(val, "sim.t_end")?,
            "scheme_order" => sim.order = usize_entry(val, "sim.scheme_order")?,
            "initial" => sim.initial = parse_initial(val)?,
            other => return Err(CliError::Validation(format!("unknown sim key \"{other}\""))),
        }
    }
    Ok(sim)
}

fn validate_sim(sim: &SimSettings) -> Result<(), CliError> {
    if sim.order != 2 && sim.order != 4 {
        return Err(CliError::Validation(format!(
            "sim.scheme_order must be 2 or 4, got {}",
            sim.order
        )));
    }
    if !(sim.dt > 0.0) || !sim.dt.is_finite() {
        return Err(CliError::Validation(format!("sim.dt must be positive, got {}", sim.dt)));
    }
    if !(sim.t_end > 0.0) || !sim.t_end.is_finite() {
        return Err(CliError::Validation(format!("sim.t_end must be positive, got {}", sim.t_end)));
    }
    Ok(())
}

pub fn parse_system(text: &str) -> Result<SystemDefinition, CliError> {
    let root: Value = serde_json::from_str(text)
        .map_err(|e| CliError::Parse(format!("invalid JSON at line {} column {}: {e}", e.line(), e.column())))?;
    let map = obj(&root, "system file")?;
    for key in map.keys() {
        match key.as_str() {
            "meta" | "builtin" | "domain" | "J" | "P" | "S" | "params" | "bc" | "sim" => {}
            other => return Err(CliError::Validation(format!("unknown top-level section \"{other}\""))),
        }
    }

    let name = map
        .get("meta")
        .map(|m| -> Result<String, CliError> {
            Ok(obj(m, "meta")?
                .get("name")
                .and_then(Value::as_str)
                .unwrap_or("unnamed")
                .to_string())
        })
        .transpose()?
        .unwrap_or_else(|| "unnamed".to_string());

    let params = map.get("params").map(parse_params).transpose()?.unwrap_or_default();

    let domain = match map.get("domain") {
        Some(v) => {
            let d = obj(v, "domain")?;
            let a = f64_entry(d.get("a").ok_or_else(|| CliError::Parse("domain needs \"a\"".into()))?, "domain.a")?;
            let b = f64_entry(d.get("b").ok_or_else(|| CliError::Parse("domain needs \"b\"".into()))?, "domain.b")?;
            (a, b)
        }
        None => (0.0, 1.0),
    };
    if !(domain.0 < domain.1) {
        return Err(CliError::Validation(format!(
            "domain must satisfy a < b, got a = {}, b = {}",
            domain.0, domain.1
        )));
    }

    let (bc_a, bc_b) = match map.get("bc") {
        Some(v) => {
            let b = obj(v, "bc")?;
            (
                b.get("a").map(|v| parse_bc(v, "bc.a")).transpose()?.unwrap_or(BoundaryCondition::Clamped),
                b.get("b").map(|v| parse_bc(v, "bc.b")).transpose()?.unwrap_or(BoundaryCondition::Clamped),
            )
        }
        None => (BoundaryCondition::Clamped, BoundaryCondition::Clamped),
    };

    let sim = map.get("sim").map(parse_sim).transpose()?.unwrap_or_default();
    validate_sim(&sim)?;

    if let Some(b) = map.get("builtin") {
        let preset_name = b
            .as_str()
            .ok_or_else(|| CliError::Parse("\"builtin\" must be a preset name string".into()))?;
        if map.contains_key("J") || map.contains_key("P") || map.contains_key("S") {
            return Err(CliError::Validation(
                "a builtin file must not also define explicit J, P, or S sections".into(),
            ));
        }
        return from_builtin(preset_name, name, params, domain, bc_a, bc_b, sim);
    }

    let j = map.get("J").map(|v| parse_operator(v, "J")).transpose()?.flatten();
    let p = map.get("P").map(|v| parse_operator(v, "P")).transpose()?.flatten();
    let s = map.get("S").map(|v| parse_operator(v, "S")).transpose()?.flatten();
    if p.is_some() != s.is_some() {
        return Err(CliError::Validation("P and S must be given together".into()));
    }
    // J with an empty coefficient list means the zero operator; size it from P.
    let j = match (&j, &p, map.get("J")) {
        (None, Some(p_mat), Some(_)) => Some(OneVarPolyMat::zero(p_mat.rows(), p_mat.cols())),
        _ => j,
    };
    if j.is_none() && p.is_none() {
        return Err(CliError::Validation(
            "system defines no operators: provide \"builtin\", or J and/or the pair P, S".into(),
        ));
    }
    if let (Some(j_mat), Some(p_mat)) = (&j, &p) {
        if j_mat.rows() != p_mat.rows() {
            return Err(CliError::Validation(format!(
                "J is {0}x{0} but P is {1}x{1}; state dimensions must agree",
                j_mat.rows(),
                p_mat.rows()
            )));
        }
    }

    Ok(SystemDefinition {
        name,
        preset: None,
        params,
        domain,
        j,
        p,
        s,
        bc_a,
        bc_b,
        sim,
        model: None,
    })
}

/// Expands a preset name into a full definition, running the same symbolic
/// derivation pipeline the explicit path uses.
pub fn from_builtin(
    preset_name: &str,
    name: String,
    params: Params,
    domain: (f64, f64),
    bc_a: BoundaryCondition,
    bc_b: BoundaryCondition,
    sim: SimSettings,
) -> Result<SystemDefinition, CliError> {
    let preset = Preset::parse(preset_name).ok_or_else(|| {
        CliError::Validation(format!(
            "unknown builtin preset \"{preset_name}\" (expected rod_symplectic, rod_first_order, rod_nonlocal)"
        ))
    })?;
    validate_sim(&sim)?;
    let model = builtin(preset, params.clone(), domain, bc_a, bc_b, sim.initial.clone())
        .map_err(|e| CliError::Validation(e.to_string()))?;
    Ok(SystemDefinition {
        name,
        preset: Some(preset),
        params,
        domain,
        j: Some(model.j.op().clone()),
        p: Some(model.r.p().clone()),
        s: Some(model.r.s().clone()),
        bc_a,
        bc_b,
        sim,
        model: Some(model),
    })
}

pub fn load_file(path: &std::path::Path) -> Result<SystemDefinition, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_system(&text)
}

fn matrix_value(m: &RatMat) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| {
                Value::Array(
                    (0..m.cols())
                        .map(|j| Value::String(format_rational(&m[(i, j)])))
                        .collect(),
                )
            })
            .collect(),
    )
}

pub fn operator_value(op: &OneVarPolyMat) -> Value {
    json!({ "coeffs": op.coeffs().iter().map(matrix_value).collect::<Vec<_>>() })
}

fn bc_value(bc: &BoundaryCondition) -> Value {
    match bc {
        BoundaryCondition::Clamped => json!({ "type": "clamped" }),
        BoundaryCondition::Stress { amp, freq } => json!({ "type": "stress", "amp": amp, "freq": freq }),
    }
}

fn initial_value(p: &InitialProfile) -> Value {
    match p {
        InitialProfile::Zero => json!({ "profile": "zero" }),
        InitialProfile::Gaussian { center, width, amp } => {
            json!({ "profile": "gaussian", "center": center, "width": width, "amp": amp })
        }
        InitialProfile::SineMode { mode, amp } => {
            json!({ "profile": "sine_mode", "mode": mode, "amp": amp })
        }
    }
}

/// Canonical serialization. Builtin systems keep their shorthand so the
/// printed form stays the author-level description.
pub fn print_system(def: &SystemDefinition) -> String {
    let mut root = Map::new();
    root.insert("meta".into(), json!({ "name": def.name }));
    if let Some(preset) = def.preset {
        root.insert("builtin".into(), Value::String(preset.name().into()));
    } else {
        if let Some(j) = &def.j {
            root.insert("J".into(), operator_value(j));
        }
        if let Some(p) = &def.p {
            root.insert("P".into(), operator_value(p));
        }
        if let Some(s) = &def.s {
            root.insert("S".into(), operator_value(s));
        }
    }
    root.insert("domain".into(), json!({ "a": def.domain.0, "b": def.domain.1 }));
    root.insert(
        "params".into(),
        json!({
            "k": format_rational(&def.params.k),
            "T": format_rational(&def.params.t),
            "rhoA": format_rational(&def.params.rho_a),
            "mu": format_rational(&def.params.mu),
        }),
    );
    root.insert("bc".into(), json!({ "a": bc_value(&def.bc_a), "b": bc_value(&def.bc_b) }));
    root.insert(
        "sim".into(),
        json!({
            "N": def.sim.n_cells,
            "dt": def.sim.dt,
            "t_end": def.sim.t_end,
            "scheme_order": def.sim.order,
            "initial": initial_value(&def.sim.initial),
        }),
    );
    serde_json::to_string_pretty(&Value::Object(root)).expect("serialization cannot fail") + "\n"
}

/// Canonical content of a definition, used to compare parses structurally.
pub fn canonical(def: &SystemDefinition) -> Value {
    let ops = json!({
        "J": def.j.as_ref().map(operator_value),
        "P": def.p.as_ref().map(operator_value),
        "S": def.s.as_ref().map(operator_value),
    });
    json!({
        "printed": print_system(def),
        "operators": ops,
    })
}
