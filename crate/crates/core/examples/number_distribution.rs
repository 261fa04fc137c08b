//! Full occupation distribution of an alien number operator, computed in
//! two representations at once and compared against the dense-matrix
//! spectral decomposition. The example also shows the parity structure of
//! the squeezed vacuum and the distribution's moments.
//!
//! Run with: cargo run --release --example number_distribution

use nalgebra::dmatrix;
use symfock::fock_rep::{alien_number_operator, FockTruncation};
use symfock::gaussian::{
    alien_number_distribution, finite_subspace_tail, mean_alien_number, FockVacuumState,
};
use symfock::linalg::herm_eigen;
use symfock::phase_space::{j_from_dynamics, DynamicsGenerator, PhaseSpace};
use symfock::RVector;

fn main() -> symfock::Result<()> {
    let space = PhaseSpace::standard(1)?;
    let mk = |omega: f64| {
        let a = dmatrix![0.0, 1.0; -omega * omega, 0.0];
        j_from_dynamics(&DynamicsGenerator::new(space.clone(), a, "osc").unwrap())
    };
    let j1 = mk(1.0)?;
    let j2 = mk(2.0)?;
    let state = FockVacuumState::new(j1.clone());
    let f = RVector::from_vec(vec![1.0, 0.0]);

    let n_max = 10;
    let dist = alien_number_distribution(&state, &j2, &f, n_max)?;
    println!(
        "P(N_J2(f) = k) in the J1-vacuum (cutoff used: {}):",
        dist.cutoff
    );
    for (k, p) in dist.probabilities.iter().enumerate() {
        let bar = "#".repeat((p * 60.0).round() as usize);
        println!("  k = {k:2}: {p:11.3e} {bar}");
    }
    println!("  tail beyond {n_max}: {:.3e}", dist.tail);
    println!(
        "  cross-representation discrepancy: {:.2e}",
        dist.rep_discrepancy
    );

    let mean_from_dist: f64 = dist
        .probabilities
        .iter()
        .enumerate()
        .map(|(k, p)| k as f64 * p)
        .sum();
    println!(
        "\nmean from distribution {:.9} vs closed form {:.9}",
        mean_from_dist,
        mean_alien_number(&state, &j2, &f)?
    );

    // third, fully independent route: diagonalize the dense alien number
    // operator in the J1 representation and bin the vacuum's weights
    let t = FockTruncation::new(&j1, 64)?;
    let mu2_norm = {
        let jf = j2.apply(&f)?;
        j1.space().sigma(&f, &jf)?.sqrt()
    };
    let f_hat = &f / mu2_norm;
    let n2 = alien_number_operator(&t, &j2, &f_hat)?;
    let (vals, vecs) = herm_eigen(&n2.mat);
    let vacuum = t.vacuum();
    let mut matrix_probs = vec![0.0f64; n_max + 1];
    for i in 0..t.dim() {
        let k = vals[i].round();
        if k >= 0.0 && (k as usize) <= n_max {
            matrix_probs[k as usize] += (vecs.column(i).adjoint() * &vacuum)[(0, 0)].norm_sqr();
        }
    }
    let worst = dist
        .probabilities
        .iter()
        .zip(matrix_probs.iter())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    println!("matrix-spectral route agrees to {worst:.2e}");

    // the cumulative probabilities are what the finite-subspace tail reports
    for n in [0usize, 2, 4] {
        let p = finite_subspace_tail(&state, &j2, std::slice::from_ref(&f), n)?;
        let direct: f64 = dist.probabilities.iter().take(n + 1).sum();
        println!("P(N <= {n}) = {p:.9} (cumulative {direct:.9})");
    }
    Ok(())
}
