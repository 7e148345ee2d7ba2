//! The four subcommands: check, derive, simulate, study.

use std::path::Path;

use bphs_core::lagrange::check_reciprocity;
use bphs_core::rank::constant_full_rank;
use bphs_core::onevar::Adjointness;
use bphs_core::sim::audit::{balance_audit, write_csv, BalanceReport};
use bphs_core::sim::discretize::discretize;
use bphs_core::sim::step::simulate;
use bphs_core::sim::study::observed_orders;

use crate::report::{derive, poly_text, render_text, render_tree};
use crate::systemfile::SystemDefinition;
use crate::{sim_error, write_atomic, CliError};

pub enum ReportFormat {
    Text,
    Tree,
}

/// Prints one verdict line per structural invariant; Ok(()) iff all pass.
pub fn cmd_check(def: &SystemDefinition) -> Result<(), CliError> {
    let mut all_ok = true;
    let mut verdict = |name: &str, ok: bool, detail: String| {
        println!("check {name:<16} {} {detail}", if ok { "[PASS]" } else { "[FAIL]" });
        all_ok &= ok;
    };
    if let Some(j) = &def.j {
        let class = j.classify_adjointness();
        verdict(
            "skew-adjoint J",
            class == Adjointness::SkewAdjoint,
            format!("classification: {class:?}"),
        );
    }
    if let (Some(p), Some(s)) = (&def.p, &def.s) {
        let rep = check_reciprocity(p, s).map_err(|e| CliError::Validation(e.to_string()))?;
        verdict(
            "reciprocity",
            rep.ok,
            if rep.ok { "residual is zero".into() } else { format!("residual {}", poly_text(&rep.residual)) },
        );
        let maximal = constant_full_rank(&p.vstack(s));
        verdict(
            "maximality",
            maximal,
            if maximal {
                "stacked operator has constant full rank".into()
            } else {
                "stacked operator drops rank at some frequency".into()
            },
        );
    }
    if all_ok {
        Ok(())
    } else {
        Err(CliError::Validation("one or more checks failed".into()))
    }
}

pub fn cmd_derive(
    def: &SystemDefinition,
    format: ReportFormat,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let rep = derive(def)?;
    let text = render_text(&rep);
    let tree = render_tree(&rep);
    match out {
        Some(dir) => {
            let io = |e: std::io::Error| CliError::Parse(format!("cannot write report: {e}"));
            write_atomic(&dir.join("derive.txt"), text.as_bytes()).map_err(io)?;
            write_atomic(&dir.join("derive.json"), tree.as_bytes()).map_err(io)?;
            println!("wrote {} and {}", dir.join("derive.txt").display(), dir.join("derive.json").display());
        }
        None => match format {
            ReportFormat::Text => print!("{text}"),
            ReportFormat::Tree => print!("{tree}"),
        },
    }
    Ok(())
}

fn run_once(def: &SystemDefinition) -> Result<BalanceReport, CliError> {
    let model = def.model.as_ref().ok_or_else(|| {
        CliError::Validation(
            "simulation requires a builtin preset system (explicit J, P, S files support check and derive only)"
                .into(),
        )
    })?;
    let d = discretize(model, def.sim.n_cells, def.sim.order).map_err(sim_error)?;
    let steps = (def.sim.t_end / def.sim.dt).round().max(1.0) as usize;
    let traj = simulate(&d, def.sim.dt, steps).map_err(sim_error)?;
    balance_audit(&d, &traj).map_err(sim_error)
}

pub fn cmd_simulate(def: &SystemDefinition, out: &Path, tol: Option<f64>) -> Result<(), CliError> {
    let report = run_once(def)?;
    let mut csv: Vec<u8> = Vec::new();
    write_csv(&report, &mut csv).map_err(|e| CliError::Parse(format!("cannot render CSV: {e}")))?;
    let path = out.join("audit.csv");
    write_atomic(&path, &csv).map_err(|e| CliError::Parse(format!("cannot write {}: {e}", path.display())))?;
    println!("wrote {} ({} audit rows)", path.display(), report.rows.len());
    println!("max_rel_residual={:.16e}", report.max_relative);
    if let Some(tol) = tol {
        if report.max_relative > tol {
            return Err(CliError::Audit(format!(
                "max relative balance residual {:.3e} exceeds tolerance {tol:.3e}",
                report.max_relative
            )));
        }
    }
    Ok(())
}

/// Runs the 3 x 3 refinement grid {N, 2N, 4N} x {dt, dt/2, dt/4} and prints
/// the max relative balance residuals with the observed convergence orders
/// along the joint-refinement diagonal.
pub fn cmd_study(def: &SystemDefinition) -> Result<(), CliError> {
    let mut grid = vec![vec![0.0f64; 3]; 3];
    for (i, row) in grid.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let mut refined = def.clone();
            refined.sim.n_cells = def.sim.n_cells << i;
            refined.sim.dt = def.sim.dt / (1 << j) as f64;
            *cell = run_once(&refined)?.max_relative;
        }
    }
    println!("convergence study: {}", def.name);
    println!("max relative balance residual over t in (0, {}]:", def.sim.t_end);
    print!("{:>10}", "");
    for j in 0..3 {
        print!("{:>14}", format!("dt/{}", 1 << j));
    }
    println!();
    for (i, row) in grid.iter().enumerate() {
        print!("{:>10}", format!("N={}", def.sim.n_cells << i));
        for cell in row {
            print!("{:>14.4e}", cell);
        }
        println!();
    }
    let diagonal: Vec<f64> = (0..3).map(|i| grid[i][i]).collect();
    let orders = observed_orders(&diagonal);
    let rendered: Vec<String> = orders.iter().map(|o| format!("{o:.3}")).collect();
    println!("observed orders under joint refinement: [{}]", rendered.join(", "));
    Ok(())
}
