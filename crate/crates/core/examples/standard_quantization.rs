//! First quantization on a standard phase space: validate candidate complex
//! structures, then derive the unique positive-energy structure of a
//! harmonic flow and inspect what it fixes.
//!
//! Run with: cargo run --release --example standard_quantization

use nalgebra::dmatrix;
use symfock::phase_space::{
    frequency_splitting, hermitian_inner_product, mu_metric, unitarizability_check,
    validate_complex_structure, ComplexStructure, DynamicsGenerator, PhaseSpace, VALIDATION_TOL,
};
use symfock::RVector;

fn main() -> symfock::Result<()> {
    // the single-mode standard space: sigma(q, p) = 1
    let space = PhaseSpace::standard(1)?;
    println!(
        "standard space, dim {} with form\n{}",
        space.dim(),
        space.form()
    );

    // three candidates for a complex structure
    let candidates = [
        ("rotation by +90 degrees", dmatrix![0.0, -1.0; 1.0, 0.0]),
        ("rotation by -90 degrees", dmatrix![0.0, 1.0; -1.0, 0.0]),
        ("identity", dmatrix![1.0, 0.0; 0.0, 1.0]),
    ];
    for (label, op) in &candidates {
        let report = validate_complex_structure(&space, op, VALIDATION_TOL)?;
        println!("\ncandidate `{label}`: passes = {}", report.passed());
        for check in &report.checks {
            println!(
                "  {:<28} residual {:9.2e}  pass {}",
                check.name,
                check.residual,
                check.pass()
            );
        }
    }

    // the oscillator flow phi_dot = pi, pi_dot = -omega^2 phi fixes the
    // structure uniquely; compare omega = 1 and omega = 2
    for omega in [1.0f64, 2.0] {
        let a = dmatrix![0.0, 1.0; -omega * omega, 0.0];
        let gen = DynamicsGenerator::new(space.clone(), a, format!("oscillator omega={omega}"))?;
        let split = frequency_splitting(&gen)?;
        println!("\nomega = {omega}: derived J =\n{}", split.j.op());
        println!("  normal-mode frequency: {:.6}", split.frequencies[0]);
        println!("  [J, A] residual: {:.2e}", split.commutator_residual);
        println!("  metric mu = sigma(. , J .):\n{}", mu_metric(&split.j));
        let (ok, resid) = unitarizability_check(&split.j, &gen)?;
        println!("  flow unitarizable w.r.t. its own J: {ok} (residual {resid:.2e})");
    }

    // the derived structure turns the phase space into a complex line with
    // inner product (f,g)_J = sigma(f, Jg) + i sigma(f, g)
    let j = ComplexStructure::standard(space)?;
    let f = RVector::from_vec(vec![1.0, 0.0]);
    let g = RVector::from_vec(vec![0.0, 1.0]);
    println!("\n(q, q)_J = {}", hermitian_inner_product(&j, &f, &f)?);
    println!("(q, p)_J = {}", hermitian_inner_product(&j, &f, &g)?);
    Ok(())
}
