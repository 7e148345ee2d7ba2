//! Acceptance gate: one test per criterion, each printing a single
//! PASS/FAIL line (run with `cargo test --test acceptance -- --nocapture`
//! to see the lines; the test outcome itself mirrors them).

mod common;

use bphs_core::dirac::{
    boundary_port_values, build_stokes_dirac, BoundaryTrace, HamiltonianOperator,
};
use bphs_core::factor::{
    signature_reassemble, symplectic_gauge_match, symplectic_reassemble, Signature,
};
use bphs_core::lagrange::canonical_hamiltonian;
use bphs_core::matrix::RatMat;
use bphs_core::onevar::OneVarPolyMat;
use bphs_core::rational::{rat, rint};
use bphs_core::sim::audit::{balance_audit, energy_drift};
use bphs_core::sim::discretize::discretize;
use bphs_core::sim::model::{builtin, BoundaryCondition, InitialProfile, Params, Preset};
use bphs_core::sim::step::simulate;
use bphs_core::sim::study::{
    balance_convergence, cross_formulation_check, nonlocal_limit_distances, observed_orders,
};
use bphs_core::twovar::TwoVarPolyMat;

fn verdict(id: u32, name: &str, ok: bool, detail: &str) {
    let tag = if ok { "PASS" } else { "FAIL" };
    println!("criterion {id:2} [{tag}] {name}: {detail}");
    assert!(ok, "criterion {id} ({name}) failed: {detail}");
}

fn gaussian() -> InitialProfile {
    InitialProfile::Gaussian { center: 0.5, width: 0.1, amp: 1.0 }
}

fn clamped_model(preset: Preset, params: Params) -> bphs_core::sim::model::SystemModel {
    builtin(
        preset,
        params,
        (0.0, 1.0),
        BoundaryCondition::Clamped,
        BoundaryCondition::Clamped,
        gaussian(),
    )
    .unwrap()
}

#[test]
fn criterion_01_symbolic_golden_identities() {
    let mut ok = true;
    for preset in [Preset::RodSymplectic, Preset::RodFirstOrder, Preset::RodNonlocal] {
        let m = clamped_model(preset, Params::default());
        // Power-port factorization reproduces the operator's boundary form.
        let phi = &TwoVarPolyMat::from_second_var(m.j.op())
            + &TwoVarPolyMat::from_first_var(&m.j.op().transpose());
        let d = &m.dirac;
        ok &= signature_reassemble(&d.t, &d.sig, &d.scale).mul_by_sum() == phi;
        // Energy-port factorization reproduces the reciprocity skew form.
        let lb = &m.lagrange;
        ok &= symplectic_reassemble(&lb.rb(), lb.p).mul_by_sum() == m.r.skew_form();
        // The energy density's diagonal reflection is the variational
        // operator S'(-s) P(s).
        ok &= lb.h.reflect_diagonal() == &m.r.s().formal_adjoint() * m.r.p();
    }
    verdict(1, "symbolic golden identities, all presets", ok, "exact rational equality");
}

#[test]
fn criterion_02_reference_boundary_data_reproduction() {
    // Strain-gradient rod with k=2, T=3, rhoA=5, mu=1/4.
    let params = Params { k: rint(2), t: rint(3), rho_a: rint(5), mu: rat(1, 4) };
    let m = clamped_model(Preset::RodNonlocal, params);
    // Textbook boundary pair (chi = T lambda, eps = mu lambda'), as a
    // symplectically equivalent gauge of the derived one.
    let printed = OneVarPolyMat::new(
        2,
        3,
        vec![
            RatMat::from_fn(2, 3, |i, j| if (i, j) == (0, 1) { rint(3) } else { rint(0) }),
            RatMat::from_fn(2, 3, |i, j| if (i, j) == (1, 1) { rat(1, 4) } else { rint(0) }),
        ],
    );
    let equivalent = symplectic_gauge_match(&m.lagrange.rb(), &printed, 1).is_some();
    // Canonical energy density diag(k, T + T mu ze, 1/rhoA).
    let h = canonical_hamiltonian(&m.lagrange);
    let h_expect = {
        let mut quad = RatMat::zeros(3, 3);
        quad[(1, 1)] = rat(3, 4); // T mu
        TwoVarPolyMat::from_blocks(
            3,
            3,
            [((0, 0), RatMat::diag(&[rint(2), rint(3), rat(1, 5)])), ((1, 1), quad)],
        )
    };
    let h_ok = h == h_expect;

    // Displacement-momentum rod with k=2, T=3, rhoA=5.
    let params = Params { k: rint(2), t: rint(3), rho_a: rint(5), mu: rint(0) };
    let m2 = clamped_model(Preset::RodSymplectic, params);
    let printed2 = OneVarPolyMat::new(
        2,
        2,
        vec![
            RatMat::from_i64(&[&[1, 0], &[0, 0]]),
            RatMat::from_fn(2, 2, |i, j| if (i, j) == (1, 0) { rint(-3) } else { rint(0) }),
        ],
    );
    let equivalent2 = symplectic_gauge_match(&m2.lagrange.rb(), &printed2, 1).is_some();
    // Variational operator Q(s) = H(-s, s) = diag(k - T s^2, 1/rhoA).
    let q = canonical_hamiltonian(&m2.lagrange).reflect_diagonal();
    let q_expect = OneVarPolyMat::new(
        2,
        2,
        vec![
            RatMat::diag(&[rint(2), rat(1, 5)]),
            RatMat::zeros(2, 2),
            RatMat::diag(&[rint(-3), rint(0)]),
        ],
    );
    let q_ok = q == q_expect;
    let ok = equivalent && h_ok && equivalent2 && q_ok;
    verdict(
        2,
        "reference boundary operators and energy densities",
        ok,
        &format!("gauge-equiv {equivalent}/{equivalent2}, density {h_ok}, variational {q_ok}"),
    );
}

#[test]
fn criterion_03_scalar_shift_ports() {
    let j = HamiltonianOperator::new(OneVarPolyMat::s()).unwrap();
    let d = build_stokes_dirac(&j).unwrap();
    let struct_ok = d.sig == Signature { alpha: 1, beta: 0 }
        && d.scale == vec![rint(1)]
        && d.t == OneVarPolyMat::constant(RatMat::identity(1));
    let mut max_err = 0.0f64;
    for (ea, eb) in [(1.25, -0.5), (0.0, 3.0), (-2.0, -2.0)] {
        let ports = boundary_port_values(
            &d,
            &BoundaryTrace { at_a: vec![ea], at_b: vec![eb] },
        )
        .unwrap();
        let s2 = std::f64::consts::SQRT_2;
        max_err = max_err
            .max((ports.f_boundary[0] - (eb + ea) / s2).abs())
            .max((ports.e_boundary[0] - (eb - ea) / s2).abs());
    }
    let ok = struct_ok && max_err <= 1e-15;
    verdict(3, "scalar shift operator ports", ok, &format!("max port error {max_err:.2e}"));
}

#[test]
fn criterion_04_closed_system_conservation() {
    let m = clamped_model(Preset::RodFirstOrder, Params::default());
    let d = discretize(&m, 200, 2).unwrap();
    let traj = simulate(&d, 1e-3, 1000).unwrap();
    let drift = energy_drift(&d, &traj).unwrap();
    let ok = drift <= 1e-9;
    verdict(4, "clamped first-order rod conserves H", ok, &format!("relative drift {drift:.2e}"));
}

fn driven_symplectic_model() -> bphs_core::sim::model::SystemModel {
    builtin(
        Preset::RodSymplectic,
        Params { k: rint(1), t: rint(1), rho_a: rint(1), mu: rint(0) },
        (0.0, 1.0),
        BoundaryCondition::Clamped,
        BoundaryCondition::Stress { amp: 0.5, freq: 3.0 },
        InitialProfile::Zero,
    )
    .unwrap()
}

#[test]
fn criterion_05_open_system_balance_convergence() {
    let study = balance_convergence(&driven_symplectic_model(), 100, 3, 2, 0.5, 2.0).unwrap();
    let order_ok = study.orders.iter().all(|o| (o - 2.0).abs() <= 0.4);
    // Absolute residual at the finest level.
    let fine_abs = {
        let d = discretize(&driven_symplectic_model(), 400, 2).unwrap();
        let steps = 800;
        let traj = simulate(&d, 0.5 / steps as f64, steps).unwrap();
        balance_audit(&d, &traj).unwrap().max_residual
    };
    let ok = order_ok && fine_abs <= 1e-4;
    verdict(
        5,
        "driven rod balance residual",
        ok,
        &format!("orders {:?}, absolute residual at N=400 {fine_abs:.2e}", study.orders),
    );
}

#[test]
fn criterion_06_nonlocal_balance_and_negative_control() {
    let model = builtin(
        Preset::RodNonlocal,
        Params::default(), // mu = 1/20 = 0.05
        (0.0, 1.0),
        BoundaryCondition::Clamped,
        BoundaryCondition::Stress { amp: 0.5, freq: 3.0 },
        InitialProfile::Zero,
    )
    .unwrap();
    let mut residuals = Vec::new();
    let mut control = Vec::new();
    for lvl in 0..3u32 {
        let cells = 100usize << lvl;
        let steps = (2.0 * cells as f64) as usize;
        let d = discretize(&model, cells, 2).unwrap();
        let traj = simulate(&d, 0.5 / steps as f64, steps).unwrap();
        let report = balance_audit(&d, &traj).unwrap();
        residuals.push(report.max_relative);
        // Negative control: drop the energy-port boundary term from the
        // balance; the remaining mismatch should not vanish under
        // refinement.
        let without: f64 = report
            .rows
            .iter()
            .map(|r| (r.residual - r.energy_pairing).abs())
            .fold(0.0, f64::max);
        control.push(without / report.energy_scale);
    }
    let orders = observed_orders(&residuals);
    let order_ok = orders.iter().all(|o| (o - 2.0).abs() <= 0.4);
    let plateau = control.windows(2).all(|w| w[1] > w[0] / 1.5);
    let ok = order_ok && plateau;
    verdict(
        6,
        "strain-gradient rod balance with both boundary terms",
        ok,
        &format!("orders {orders:?}, control residuals {control:?}"),
    );
}

#[test]
fn criterion_07_natural_energy_balance_variant() {
    let model = driven_symplectic_model();
    let mut residuals = Vec::new();
    for lvl in 0..3u32 {
        let cells = 100usize << lvl;
        let steps = (2.0 * cells as f64) as usize;
        let d = discretize(&model, cells, 2).unwrap();
        let traj = simulate(&d, 0.5 / steps as f64, steps).unwrap();
        residuals.push(balance_audit(&d, &traj).unwrap().max_relative_h0);
    }
    let orders = observed_orders(&residuals);
    let ok = orders.iter().all(|o| (o - 2.0).abs() <= 0.4);
    verdict(
        7,
        "symmetrized-bracket balance on the natural energy",
        ok,
        &format!("orders {orders:?}"),
    );
}

#[test]
fn criterion_08_model_limits() {
    let mus = vec![rat(1, 10), rat(1, 100), rat(1, 1000)];
    let dists = nonlocal_limit_distances(
        &Params { mu: rint(0), ..Params::default() },
        &mus,
        InitialProfile::SineMode { mode: 1, amp: 1.0 },
        100,
        2,
        1e-3,
        300,
    )
    .unwrap();
    let ratios: Vec<f64> = dists.windows(2).map(|w| w[0] / w[1]).collect();
    let linear_ok = ratios.iter().all(|r| (10.0 / 3.0..=30.0).contains(r));
    let check = cross_formulation_check(&Params::default(), gaussian(), 50, 3, 2, 0.25).unwrap();
    let order_ok = check.orders.iter().all(|o| (o - 2.0).abs() <= 0.4);
    let ok = linear_ok && order_ok;
    verdict(
        8,
        "vanishing-mu limit and formulation agreement",
        ok,
        &format!("mu ratios {ratios:?}, grid orders {:?}", check.orders),
    );
}

#[test]
fn criterion_09_randomized_property_suites() {
    let mut failures = Vec::new();
    for (name, result) in [
        ("adjoint involution", common::check_adjoint_involution(200)),
        ("divisibility round trip", common::check_divisibility_round_trip(200)),
        ("factorization soundness", common::check_factorization_soundness(200)),
        ("signature congruence invariance", common::check_sylvester_stability(200)),
        (
            "degree-2 reciprocity equivalence",
            common::check_degree2_reciprocity_equivalence(200),
        ),
    ] {
        if let Err(e) = result {
            failures.push(format!("{name}: {e}"));
        }
    }
    let ok = failures.is_empty();
    let detail = if ok { "zero failures".to_string() } else { failures.join("; ") };
    verdict(9, "randomized property suites, 200 cases each", ok, &detail);
}
