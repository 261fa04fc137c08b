//! Two quantizations of one oscillator degree of freedom: the frequency-1
//! and frequency-2 flows fix different complex structures, and each one's
//! vacuum carries quanta of the other. All the closed forms are checked
//! against dense truncated-Fock matrices.
//!
//! Run with: cargo run --release --example oscillator_pair

use nalgebra::dmatrix;
use symfock::fock_rep::{alien_number_operator, alien_vacuum_action_check, FockTruncation};
use symfock::gaussian::{
    alien_number_variance, bogoliubov_split, equivalence_verdict, mean_alien_number,
    total_mean_alien_number, two_point, weyl_expectation, FockVacuumState,
};
use symfock::phase_space::{j_from_dynamics, ComplexStructure, DynamicsGenerator, PhaseSpace};
use symfock::RVector;

fn oscillator(space: &std::sync::Arc<PhaseSpace>, omega: f64) -> symfock::Result<ComplexStructure> {
    let a = dmatrix![0.0, 1.0; -omega * omega, 0.0];
    j_from_dynamics(&DynamicsGenerator::new(
        space.clone(),
        a,
        format!("oscillator omega={omega}"),
    )?)
}

fn main() -> symfock::Result<()> {
    let space = PhaseSpace::standard(1)?;
    let j1 = oscillator(&space, 1.0)?;
    let j2 = oscillator(&space, 2.0)?;
    let state = FockVacuumState::new(j1.clone());

    println!("J1 (omega=1):\n{}", j1.op());
    println!("J2 (omega=2):\n{}", j2.op());

    let f = RVector::from_vec(vec![1.0, 0.0]);
    println!(
        "omega_J1(W(f)) = {:.9} for f = (1, 0)",
        weyl_expectation(&state, &f)?
    );
    println!(
        "two-point <Phi(q) Phi(p)> = {}",
        two_point(&state, &f, &RVector::from_vec(vec![0.0, 1.0]))?
    );

    // Bogoliubov split: a_{J2}(f) = a*_{J1}(u) + a_{J1}(v)
    let (u, v) = bogoliubov_split(&j1, &j2, &f)?;
    println!(
        "\nsplit of f = (1,0): creator arg u = ({:.3}, {:.3}), annihilator arg v = ({:.3}, {:.3})",
        u[0], u[1], v[0], v[1]
    );

    // statistics of J2-quanta in the J1-vacuum
    let f_hat = RVector::from_vec(vec![1.0 / 2.0f64.sqrt(), 0.0]);
    let mean = mean_alien_number(&state, &j2, &f_hat)?;
    let var = alien_number_variance(&state, &j2, &f_hat)?;
    let total = total_mean_alien_number(&state, &j2)?;
    println!("\nmean J2-quanta on f's ray: {mean:.6} (exact 1/8)");
    println!("variance:                  {var:.6} (exact 9/32)");
    println!("total over all modes:      {total:.6}");

    // the same numbers from dense matrices
    let t = FockTruncation::new(&j1, 48)?;
    let n2 = alien_number_operator(&t, &j2, &f_hat)?.mat;
    let vac = t.vacuum();
    let m_mat = (vac.adjoint() * &n2 * &vac)[(0, 0)].re;
    let n2vac = &n2 * &vac;
    let v_mat = (n2vac.adjoint() * &n2vac)[(0, 0)].re - m_mat * m_mat;
    println!("matrix oracle (cutoff 48): mean {m_mat:.9}, variance {v_mat:.9}");

    // acting on the vacuum creates quanta in pairs
    let action = alien_vacuum_action_check(&t, &j2, &f)?;
    println!(
        "\nN_J2(f) vacuum: scalar part {:.6}, two-quantum norm {:.6} (residual vs split {:.1e})",
        action.scalar_coefficient, action.two_quantum_norm, action.structure_residual
    );

    let report = equivalence_verdict(&j1, &j2)?;
    println!(
        "\nverdict: {:?} — total mean {:.6}, mu2-trace {:.6}, per-mode means {:?}",
        report.verdict, report.total_mean, report.trace_mu2, report.per_mode_means
    );
    Ok(())
}
