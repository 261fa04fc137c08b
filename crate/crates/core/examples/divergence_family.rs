//! The finite-size witness of inequivalent quantizations: refine the same
//! physical wedge geometry with more and more lattice sites and watch the
//! total alien-quanta content of the restricted inertial vacuum grow
//! without saturating. On any fixed lattice the two quantizations are
//! equivalent; the divergence of the family is what survives the limit.
//!
//! Run with: cargo run --release --example divergence_family

use symfock::gaussian::{equivalence_verdict, family_equivalence_verdict};
use symfock::models::{refinement_family, LatticeKGModel};
use symfock::phase_space::{j_from_dynamics, ComplexStructure, DynamicsGenerator, PhaseSpace};
use symfock::RMatrix;

fn main() -> symfock::Result<()> {
    // a single fixed-dimension pair is always equivalent
    let space = PhaseSpace::standard(1)?;
    let mk = |omega: f64| {
        let mut a = RMatrix::zeros(2, 2);
        a[(0, 1)] = 1.0;
        a[(1, 0)] = -omega * omega;
        j_from_dynamics(&DynamicsGenerator::new(space.clone(), a, "osc").unwrap())
    };
    let j1 = mk(1.0)?;
    let j2 = ComplexStructure::new(space.clone(), mk(2.0)?.op().clone())?;
    let single = equivalence_verdict(&j1, &j2)?;
    println!(
        "fixed pair (omega 1 vs 2): verdict {:?}, total mean {:.6}",
        single.verdict, single.total_mean
    );

    // the lattice family: fixed physical box and mass, spacing 256/L
    let base = LatticeKGModel::new(256, 1.0, 0.05, None)?;
    let sizes = [32usize, 64, 128, 256];
    println!("\nrefining the wedge geometry (physical box fixed):");
    let members = refinement_family(&base, &sizes)?;
    for (l, member) in sizes.iter().zip(members.iter()) {
        println!(
            "  L = {l:3}  (wedge dim {:3}): total alien quanta = {:.6}",
            member.dim, member.total_mean
        );
    }
    let report = family_equivalence_verdict(&members)?;
    println!("\nfamily verdict: {:?}", report.verdict);
    let increments: Vec<f64> = members
        .windows(2)
        .map(|w| w[1].total_mean - w[0].total_mean)
        .collect();
    println!("increments per refinement step: {increments:?}");
    Ok(())
}
