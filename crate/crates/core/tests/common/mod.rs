//! Shared randomized-property checks, runnable from both the property suite
//! and the acceptance gate.

use bphs_core::factor::{
    signature_factorization, signature_reassemble, symplectic_factorization,
    symplectic_reassemble,
};
use bphs_core::lagrange::{check_reciprocity, degree2_reciprocity};
use bphs_core::matrix::RatMat;
use bphs_core::onevar::OneVarPolyMat;
use bphs_core::rational::{rat, Rational};
use bphs_core::twovar::TwoVarPolyMat;
use num_traits::Zero;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestError, TestRunner};

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-4i64..=4, 1i64..=3).prop_map(|(n, d)| rat(n, d))
}

pub fn rat_mat(rows: usize, cols: usize) -> impl Strategy<Value = RatMat> {
    proptest::collection::vec(small_rational(), rows * cols).prop_map(move |v| {
        let mut it = v.into_iter();
        RatMat::from_fn(rows, cols, |_, _| it.next().unwrap())
    })
}

pub fn poly_mat(rows: usize, cols: usize, deg: usize) -> impl Strategy<Value = OneVarPolyMat> {
    proptest::collection::vec(rat_mat(rows, cols), deg + 1)
        .prop_map(move |coeffs| OneVarPolyMat::new(rows, cols, coeffs))
}

pub fn square_poly_pair() -> impl Strategy<Value = (OneVarPolyMat, OneVarPolyMat)> {
    (1usize..=3, 0usize..=2, 0usize..=2).prop_flat_map(|(n, da, db)| {
        (poly_mat(n, n, da), poly_mat(n, n, db))
    })
}

pub fn two_var() -> impl Strategy<Value = TwoVarPolyMat> {
    (1usize..=3, 0usize..=1).prop_flat_map(|(n, deg)| {
        proptest::collection::vec(rat_mat(n, n), (deg + 1) * (deg + 1)).prop_map(move |blocks| {
            let mut it = blocks.into_iter();
            let mut entries = Vec::new();
            for k in 0..=deg {
                for l in 0..=deg {
                    entries.push(((k, l), it.next().unwrap()));
                }
            }
            TwoVarPolyMat::from_blocks(n, n, entries)
        })
    })
}

/// Swap the variables and transpose blocks.
pub fn transpose_pair(m: &TwoVarPolyMat) -> TwoVarPolyMat {
    let entries: Vec<_> = m.blocks().map(|(&(k, l), b)| ((l, k), b.transpose())).collect();
    TwoVarPolyMat::from_blocks(m.rows(), m.cols(), entries)
}

fn run<S: Strategy>(
    name: &str,
    cases: u32,
    strategy: S,
    check: impl Fn(S::Value) -> Result<(), String>,
) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    let mut runner = TestRunner::new(Config {
        cases,
        ..Config::default()
    });
    runner
        .run(&strategy, |v| {
            check(v).map_err(|m| proptest::test_runner::TestCaseError::fail(m))
        })
        .map_err(|e| match e {
            TestError::Fail(reason, value) => {
                format!("{name}: failed ({reason}) on {value:?}")
            }
            TestError::Abort(reason) => format!("{name}: aborted ({reason})"),
        })
}

/// The formal adjoint is an involution and reverses products.
pub fn check_adjoint_involution(cases: u32) -> Result<(), String> {
    run("adjoint involution", cases, square_poly_pair(), |(a, b)| {
        if a.formal_adjoint().formal_adjoint() != a {
            return Err("double adjoint differs".into());
        }
        if (&a * &b).formal_adjoint() != &b.formal_adjoint() * &a.formal_adjoint() {
            return Err("adjoint does not reverse products".into());
        }
        Ok(())
    })
}

/// Multiplying by the variable sum and dividing back is the identity, and
/// divisibility is equivalent to a vanishing anti-diagonal.
pub fn check_divisibility_round_trip(cases: u32) -> Result<(), String> {
    run("divisibility round trip", cases, two_var(), |psi| {
        let phi = psi.mul_by_sum();
        if phi.divide_by_sum().map_err(|e| e.to_string())? != psi {
            return Err("round trip changed the form".into());
        }
        if !phi.anti_diagonal().is_zero() {
            return Err("product has a nonzero anti-diagonal".into());
        }
        if psi.anti_diagonal().is_zero() != psi.divide_by_sum().is_ok() {
            return Err("divisibility disagrees with the anti-diagonal test".into());
        }
        Ok(())
    })
}

/// Both factorizations reassemble their input exactly; scales are positive
/// and the symplectic factor has an even number of rows.
pub fn check_factorization_soundness(cases: u32) -> Result<(), String> {
    run("factorization soundness", cases, two_var(), |psi| {
        let sym = &psi + &transpose_pair(&psi);
        let (t, sig, scale) = signature_factorization(&sym).map_err(|e| e.to_string())?;
        if t.rows() != sig.delta() {
            return Err("row count differs from the signature size".into());
        }
        if scale.iter().any(|s| s <= &Rational::zero()) {
            return Err("non-positive scale entry".into());
        }
        if signature_reassemble(&t, &sig, &scale) != sym {
            return Err("symmetric reassembly differs".into());
        }
        let skew = &psi - &transpose_pair(&psi);
        let (rb, p) = symplectic_factorization(&skew).map_err(|e| e.to_string())?;
        if rb.rows() != 2 * p {
            return Err("odd symplectic factor".into());
        }
        if symplectic_reassemble(&rb, p) != skew {
            return Err("skew reassembly differs".into());
        }
        Ok(())
    })
}

/// Congruence by an invertible constant matrix preserves the signature.
pub fn check_sylvester_stability(cases: u32) -> Result<(), String> {
    let strat = (two_var(), proptest::collection::vec(small_rational(), 9));
    run("signature congruence invariance", cases, strat, |(psi, cseed)| {
        let sym = &psi + &transpose_pair(&psi);
        let n = sym.cols();
        let mut it = cseed.into_iter();
        let c = RatMat::from_fn(n, n, |_, _| it.next().unwrap());
        if c.rank() != n {
            return Ok(()); // singular draw: property vacuous
        }
        let entries: Vec<_> = sym
            .blocks()
            .map(|(&(k, l), b)| ((k, l), &(&c.transpose() * b) * &c))
            .collect();
        let congruent = TwoVarPolyMat::from_blocks(n, n, entries);
        let (_, sig_a, _) = signature_factorization(&sym).map_err(|e| e.to_string())?;
        let (_, sig_b, _) = signature_factorization(&congruent).map_err(|e| e.to_string())?;
        if sig_a != sig_b {
            return Err(format!("signature changed: {sig_a:?} vs {sig_b:?}"));
        }
        Ok(())
    })
}

/// For operator pairs of degree at most two, the closed-form coefficient
/// conditions for reciprocity agree with the general divisibility test.
pub fn check_degree2_reciprocity_equivalence(cases: u32) -> Result<(), String> {
    run("degree-2 reciprocity equivalence", cases, square_poly_pair(), |(p, s)| {
        let general = check_reciprocity(&p, &s).map_err(|e| e.to_string())?.ok;
        let closed = degree2_reciprocity(&p, &s)
            .ok_or_else(|| "degree above the closed-form range".to_string())?;
        if general != closed {
            return Err(format!("general {general} vs closed-form {closed}"));
        }
        Ok(())
    })
}
