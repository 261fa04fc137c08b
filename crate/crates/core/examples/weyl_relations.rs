//! The truncated Fock representation in action: canonical commutation
//! relations, the Weyl multiplication law, vacuum expectations, and second
//! quantization.
//!
//! Run with: cargo run --release --example weyl_relations

use num_complex::Complex64;
use symfock::fock_rep::{dgamma, field_operator, total_number, weyl_operator, FockTruncation};
use symfock::linalg::{expi_hermitian, max_abs_c};
use symfock::phase_space::{ComplexStructure, PhaseSpace};
use symfock::{CMatrix, RVector};

fn main() -> symfock::Result<()> {
    let space = PhaseSpace::standard(2)?;
    let j = ComplexStructure::standard(space)?;
    let cutoff = 16;
    let t = FockTruncation::new(&j, cutoff)?;
    println!(
        "two modes, per-mode cutoff {cutoff}: occupation basis size {}",
        t.dim()
    );

    let f = RVector::from_vec(vec![0.5, -0.2, 0.3, 0.1]);
    let g = RVector::from_vec(vec![-0.1, 0.6, 0.2, -0.4]);

    // CCR: [Phi(f), Phi(g)] = i sigma(f, g) on the sub-cutoff sector
    let pf = field_operator(&t, &f)?.mat;
    let pg = field_operator(&t, &g)?.mat;
    let sigma_fg = j.space().sigma(&f, &g)?;
    let comm = &pf * &pg - &pg * &pf;
    let expected = CMatrix::identity(t.dim(), t.dim()) * Complex64::new(0.0, sigma_fg);
    println!(
        "CCR residual (occupation <= {}): {:.2e}",
        cutoff - 2,
        t.max_abs_on_sector(&(comm - expected), cutoff - 2)
    );

    // the Weyl multiplication law W(f) W(g) = e^{-i sigma(f,g)/2} W(f+g),
    // compared through the action on low-occupation states
    let wf = weyl_operator(&t, &f)?.mat;
    let wg = weyl_operator(&t, &g)?.mat;
    let wfg = weyl_operator(&t, &(&f + &g))?.mat;
    let phase = Complex64::new(0.0, -0.5 * sigma_fg).exp();
    println!(
        "Weyl relation residual (action on occupation <= 4): {:.2e}",
        t.max_action_on_sector(&(wf * &wg - wfg * phase), 4)
    );

    // vacuum expectation of a Weyl operator converges to the Gaussian law
    let vacuum = t.vacuum();
    let state = symfock::gaussian::FockVacuumState::new(j.clone());
    let got = (vacuum.adjoint() * weyl_operator(&t, &f)?.mat * &vacuum)[(0, 0)];
    let closed = symfock::gaussian::weyl_expectation(&state, &f)?;
    println!(
        "<vac, W(f) vac> = {:.12} (closed form {closed:.12})",
        got.re
    );

    // second quantization: dGamma(I) is the total number operator, and
    // Gamma(e^{itH}) = e^{it dGamma(H)}
    let id = CMatrix::identity(2, 2);
    let dg = dgamma(&t, &id)?;
    println!(
        "dGamma(I) vs total number operator: {:.2e}",
        max_abs_c(&(&dg.mat - total_number(&t).mat))
    );
    let h = CMatrix::from_fn(2, 2, |a, b| match (a, b) {
        (0, 0) => Complex64::new(0.7, 0.0),
        (1, 1) => Complex64::new(0.2, 0.0),
        (0, 1) => Complex64::new(0.1, 0.3),
        _ => Complex64::new(0.1, -0.3),
    });
    let u = expi_hermitian(&h);
    let gamma_u = symfock::fock_rep::gamma(&t, &u)?;
    let direct = expi_hermitian(&dgamma(&t, &h)?.mat);
    println!(
        "Gamma(e^{{iH}}) vs e^{{i dGamma(H)}}: {:.2e}",
        max_abs_c(&(&gamma_u.mat - direct))
    );
    let gv = &gamma_u.mat * t.vacuum();
    println!(
        "|<vac, Gamma(U) vac>| = {:.12} (vacuum invariance)",
        gv[0].norm()
    );
    Ok(())
}
