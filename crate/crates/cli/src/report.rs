//! Derivation reports: the boundary structures computed from a system
//! definition, rendered as plain text or as a machine-readable JSON tree
//! whose polynomial matrices round-trip through the system-file parser.

use bphs_core::dirac::{build_stokes_dirac, DiracStructure};
use bphs_core::lagrange::{boundary_operator, check_reciprocity, LagrangeStructure};
use bphs_core::onevar::OneVarPolyMat;
use bphs_core::rank::constant_full_rank;
use bphs_core::rational::format_rational;
use bphs_core::twovar::TwoVarPolyMat;
use serde_json::{json, Value};

use crate::systemfile::{operator_value, SystemDefinition};
use crate::CliError;

pub struct DeriveReport {
    pub name: String,
    /// Classification of J together with its Stokes-Dirac data.
    pub dirac: Option<(String, DiracStructure)>,
    /// Reciprocity verdict, maximality verdict, and boundary structure of
    /// the operator pair (P, S).
    pub lagrange: Option<LagrangeData>,
}

pub struct LagrangeData {
    pub reciprocal: bool,
    pub maximal: bool,
    pub structure: LagrangeStructure,
    /// Q(s) = S~(s) P(s), the one-variable operator on the main diagonal
    /// reflection of the energy density.
    pub q: OneVarPolyMat,
}

pub fn derive(def: &SystemDefinition) -> Result<DeriveReport, CliError> {
    let dirac = match &def.j {
        Some(j) => {
            let op = bphs_core::dirac::HamiltonianOperator::new(j.clone())
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let classification = format!("{:?}", j.classify_adjointness());
            let d = build_stokes_dirac(&op).map_err(|e| CliError::Validation(e.to_string()))?;
            Some((classification, d))
        }
        None => None,
    };
    let lagrange = match (&def.p, &def.s) {
        (Some(p), Some(s)) => {
            let rep = check_reciprocity(p, s).map_err(|e| CliError::Validation(e.to_string()))?;
            if !rep.ok {
                return Err(CliError::Validation(format!(
                    "operator pair fails reciprocity: residual {}",
                    poly_text(&rep.residual)
                )));
            }
            if !constant_full_rank(&p.vstack(s)) {
                return Err(CliError::Validation(
                    "operator pair is not maximal: the stacked operator drops rank".into(),
                ));
            }
            // Builtin systems carry a gauge-fixed boundary operator; explicit
            // systems get the raw factorization.
            let structure = match &def.model {
                Some(m) => m.lagrange.clone(),
                None => {
                    let r = bphs_core::lagrange::ReciprocalOperator::new(p.clone(), s.clone())
                        .map_err(|e| CliError::Validation(e.to_string()))?;
                    boundary_operator(&r).map_err(|e| CliError::Validation(e.to_string()))?
                }
            };
            let q = structure.h.reflect_diagonal();
            Some(LagrangeData { reciprocal: true, maximal: true, structure, q })
        }
        _ => None,
    };
    Ok(DeriveReport { name: def.name.clone(), dirac, lagrange })
}

/// One entry of a one-variable polynomial matrix, e.g. "1 - 1/20*s^2".
fn entry_text(coeffs: &[String], var: impl Fn(usize) -> String) -> String {
    let mut terms: Vec<String> = Vec::new();
    for (k, c) in coeffs.iter().enumerate() {
        if c == "0" {
            continue;
        }
        let v = var(k);
        let term = if v.is_empty() { c.clone() } else if c == "1" { v } else { format!("{c}*{v}") };
        terms.push(term);
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ").replace("+ -", "- ")
    }
}

fn power(base: &str, k: usize) -> String {
    match k {
        0 => String::new(),
        1 => base.to_string(),
        _ => format!("{base}^{k}"),
    }
}

pub fn poly_text(m: &OneVarPolyMat) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| {
            let cells: Vec<String> = (0..m.cols())
                .map(|j| {
                    let coeffs: Vec<String> = m
                        .coeffs()
                        .iter()
                        .map(|c| format_rational(&c[(i, j)]))
                        .collect();
                    entry_text(&coeffs, |k| power("s", k))
                })
                .collect();
            cells.join(", ")
        })
        .collect();
    format!("[{}]", rows.join("; "))
}

pub fn twovar_text(m: &TwoVarPolyMat) -> String {
    let mut blocks: Vec<(&(usize, usize), _)> = m.blocks().collect();
    blocks.sort_by_key(|(k, _)| **k);
    let deg = blocks.iter().map(|((k, l), _)| k.max(l) + 1).max().unwrap_or(1);
    let rows: Vec<String> = (0..m.rows())
        .map(|i| {
            let cells: Vec<String> = (0..m.cols())
                .map(|j| {
                    let mut coeffs: Vec<String> = Vec::new();
                    let mut vars: Vec<String> = Vec::new();
                    for k in 0..deg {
                        for l in 0..deg {
                            coeffs.push(format_rational(&m.block(k, l)[(i, j)]));
                            let zt = power("zeta", k);
                            let et = power("eta", l);
                            vars.push(match (zt.is_empty(), et.is_empty()) {
                                (true, true) => String::new(),
                                (true, false) => et,
                                (false, true) => zt,
                                (false, false) => format!("{zt}*{et}"),
                            });
                        }
                    }
                    entry_text(&coeffs, |idx| vars[idx].clone())
                })
                .collect();
            cells.join(", ")
        })
        .collect();
    format!("[{}]", rows.join("; "))
}

fn twovar_value(m: &TwoVarPolyMat) -> Value {
    let mut blocks: Vec<(&(usize, usize), &bphs_core::matrix::RatMat)> = m.blocks().collect();
    blocks.sort_by_key(|(k, _)| **k);
    Value::Array(
        blocks
            .into_iter()
            .filter(|(_, b)| !b.is_zero())
            .map(|((k, l), b)| {
                json!({
                    "zeta_deg": k,
                    "eta_deg": l,
                    "matrix": operator_value(&OneVarPolyMat::constant(b.clone()))["coeffs"][0].clone(),
                })
            })
            .collect(),
    )
}

pub fn render_text(rep: &DeriveReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("derivation report: {}\n", rep.name));
    if let Some((class, d)) = &rep.dirac {
        out.push_str(&format!("\nhamiltonian operator J\n  adjointness: {class}\n"));
        out.push_str(&format!("  T(s) = {}\n", poly_text(&d.t)));
        out.push_str(&format!(
            "  signature: alpha = {}, beta = {}, delta = {}\n",
            d.sig.alpha,
            d.sig.beta,
            d.delta()
        ));
        let scale: Vec<String> = d.scale.iter().map(format_rational).collect();
        out.push_str(&format!("  row scaling: diag({})\n", scale.join(", ")));
    }
    if let Some(l) = &rep.lagrange {
        out.push_str("\noperator pair (P, S)\n");
        out.push_str(&format!("  reciprocity: {}\n", verdict(l.reciprocal)));
        out.push_str(&format!("  maximality: {}\n", verdict(l.maximal)));
        out.push_str(&format!("  boundary rank: p = {}\n", l.structure.p));
        out.push_str(&format!("  P_b(s) = {}\n", poly_text(&l.structure.pb)));
        out.push_str(&format!("  S_b(s) = {}\n", poly_text(&l.structure.sb)));
        out.push_str(&format!("  H(zeta, eta) = {}\n", twovar_text(&l.structure.h)));
        out.push_str(&format!("  H0(zeta, eta) = {}\n", twovar_text(&l.structure.h0)));
        out.push_str(&format!("  Q(s) = {}\n", poly_text(&l.q)));
    }
    out
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

pub fn render_tree(rep: &DeriveReport) -> String {
    let dirac = rep.dirac.as_ref().map(|(class, d)| {
        json!({
            "adjointness": class,
            "T": operator_value(&d.t),
            "alpha": d.sig.alpha,
            "beta": d.sig.beta,
            "delta": d.delta(),
            "scale": d.scale.iter().map(format_rational).collect::<Vec<_>>(),
        })
    });
    let lagrange = rep.lagrange.as_ref().map(|l| {
        json!({
            "reciprocal": l.reciprocal,
            "maximal": l.maximal,
            "p": l.structure.p,
            "P_b": operator_value(&l.structure.pb),
            "S_b": operator_value(&l.structure.sb),
            "H": twovar_value(&l.structure.h),
            "H0": twovar_value(&l.structure.h0),
            "Q": operator_value(&l.q),
        })
    });
    let root = json!({ "name": rep.name, "dirac": dirac, "lagrange": lagrange });
    serde_json::to_string_pretty(&root).expect("serialization cannot fail") + "\n"
}
