//! Lattice Klein-Gordon field in 1+1 dimensions with two quantizations.
//!
//! The inertial (Minkowski-style) structure comes from frequency-splitting
//! the full-line Hamiltonian flow; the boost (Rindler-style) structure from
//! splitting the wedge boost flow. The Minkowski vacuum restricted to a
//! wedge is a mixed Gaussian state whose per-boost-mode occupations
//! reproduce the thermal spectrum at inverse temperature 2 pi (the boost
//! rate is normalized to one unit of rapidity).
//!
//! Discretization: Dirichlet boundaries at both lattice ends; the boost
//! center sits on the link between `wedge_origin` and `wedge_origin + 1`,
//! so wedge sites carry half-integer distances (k + 1/2) delta and the
//! gradient term weights the link between local sites k-1 and k by its
//! midpoint distance k delta. The horizon link's midpoint is the center
//! itself, weight zero, which enforces the one-sided horizon cutoff.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaussian::FamilyMember;
use crate::linalg::{RMatrix, RVector};
use crate::phase_space::{
    frequency_splitting, mu_metric, ComplexStructure, DynamicsGenerator, PhaseSpace,
};

/// Spatial boundary condition of the lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Boundary {
    Dirichlet,
}

/// Which side of the boost center.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Wedge {
    Left,
    Right,
}

/// Lattice Klein-Gordon model: L sites, spacing delta, mass m, Dirichlet
/// walls, and a boost center on the link after `wedge_origin`.
#[derive(Debug, Clone)]
pub struct LatticeKGModel {
    sites: usize,
    spacing: f64,
    mass: f64,
    boundary: Boundary,
    wedge_origin: usize,
}

impl LatticeKGModel {
    /// Build and validate a model. `wedge_origin` defaults to `sites/2 - 1`,
    /// which makes the two wedges mirror images for even L.
    pub fn new(sites: usize, spacing: f64, mass: f64, wedge_origin: Option<usize>) -> Result<Self> {
        if sites < 8 {
            return Err(Error::InvalidArgument(format!(
                "lattice needs at least 8 sites, got {sites}"
            )));
        }
        if spacing <= 0.0 || !spacing.is_finite() {
            return Err(Error::InvalidArgument("spacing must be positive".into()));
        }
        if mass <= 0.0 || !mass.is_finite() {
            // the massless zero mode breaks the positive-energy requirement
            // of the full-line generator at finite L
            return Err(Error::InvalidArgument(
                "mass must be strictly positive (m = 0 has an infrared zero mode)".into(),
            ));
        }
        let wedge_origin = wedge_origin.unwrap_or(sites / 2 - 1);
        // each wedge needs at least 4 sites beyond the center
        if wedge_origin + 1 < 4 || sites - 1 - wedge_origin < 4 {
            return Err(Error::InvalidArgument(format!(
                "wedge origin {wedge_origin} leaves fewer than 4 sites in a wedge"
            )));
        }
        Ok(LatticeKGModel {
            sites,
            spacing,
            mass,
            boundary: Boundary::Dirichlet,
            wedge_origin,
        })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn wedge_origin(&self) -> usize {
        self.wedge_origin
    }

    /// The 2L-dimensional phase space in block layout: field values first,
    /// conjugate momenta second.
    pub fn phase_space(&self) -> Result<Arc<PhaseSpace>> {
        PhaseSpace::standard_block(self.sites)
    }

    /// Sites of a wedge, ordered by distance from the boost center.
    pub fn wedge_sites(&self, wedge: Wedge) -> Vec<usize> {
        match wedge {
            Wedge::Right => (self.wedge_origin + 1..self.sites).collect(),
            Wedge::Left => (0..=self.wedge_origin).rev().collect(),
        }
    }
}

/// Dirichlet second-difference Laplacian plus mass term:
/// Omega^2 = -Delta / delta^2 + m^2 I.
pub(crate) fn omega_squared(sites: usize, spacing: f64, mass: f64) -> RMatrix {
    let inv2 = 1.0 / (spacing * spacing);
    let mut w = RMatrix::zeros(sites, sites);
    for i in 0..sites {
        w[(i, i)] = 2.0 * inv2 + mass * mass;
        if i > 0 {
            w[(i, i - 1)] = -inv2;
        }
        if i + 1 < sites {
            w[(i, i + 1)] = -inv2;
        }
    }
    w
}

/// Generator of the inertial flow on the full lattice:
/// A (phi, pi) = (pi, -Omega^2 phi).
pub fn minkowski_generator(model: &LatticeKGModel) -> Result<DynamicsGenerator> {
    let space = model.phase_space()?;
    let l = model.sites;
    let w2 = omega_squared(l, model.spacing, model.mass);
    let mut a = RMatrix::zeros(2 * l, 2 * l);
    for i in 0..l {
        a[(i, l + i)] = 1.0;
        for j in 0..l {
            a[(l + i, j)] = -w2[(i, j)];
        }
    }
    DynamicsGenerator::new(
        space,
        a,
        format!(
            "inertial flow: L={} delta={} m={}",
            l, model.spacing, model.mass
        ),
    )
}

/// A wedge of the lattice as a phase space of its own, with the embedding
/// data needed to move vectors between the wedge and the full lattice.
#[derive(Debug, Clone)]
pub struct WedgeSubspace {
    wedge: Wedge,
    /// Lattice sites in distance order from the boost center.
    sites: Vec<usize>,
    /// Total number of lattice sites (for embedding).
    lattice_sites: usize,
    space: Arc<PhaseSpace>,
}

impl WedgeSubspace {
    pub fn wedge(&self) -> Wedge {
        self.wedge
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    /// Wedge phase space (dimension 2 |sites|, canonical block form).
    pub fn space(&self) -> &Arc<PhaseSpace> {
        &self.space
    }

    /// Indices of the wedge coordinates inside the full phase space,
    /// field components first, momenta second.
    pub fn embedding_indices(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = self.sites.clone();
        idx.extend(self.sites.iter().map(|&s| self.lattice_sites + s));
        idx
    }

    /// Embed a wedge vector into the full phase space.
    pub fn embed(&self, f: &RVector) -> Result<RVector> {
        self.space.check_vector(f)?;
        let mut out = RVector::zeros(2 * self.lattice_sites);
        for (k, &i) in self.embedding_indices().iter().enumerate() {
            out[i] = f[k];
        }
        Ok(out)
    }

    /// Restrict a full-space vector to the wedge coordinates.
    pub fn restrict(&self, f: &RVector) -> Result<RVector> {
        if f.len() != 2 * self.lattice_sites {
            return Err(Error::DimensionMismatch {
                expected: 2 * self.lattice_sites,
                got: f.len(),
            });
        }
        let idx = self.embedding_indices();
        let mut out = RVector::zeros(idx.len());
        for (k, &i) in idx.iter().enumerate() {
            out[k] = f[i];
        }
        Ok(out)
    }

    /// Restrict a full-space bilinear form to the wedge coordinates.
    pub fn restrict_form(&self, m: &RMatrix) -> RMatrix {
        let idx = self.embedding_indices();
        let w = idx.len();
        let mut out = RMatrix::zeros(w, w);
        for (a, &ia) in idx.iter().enumerate() {
            for (b, &ib) in idx.iter().enumerate() {
                out[(a, b)] = m[(ia, ib)];
            }
        }
        out
    }

    /// Site distances (k + 1/2) delta from the boost center.
    pub fn distances(&self, spacing: f64) -> Vec<f64> {
        (0..self.sites.len())
            .map(|k| (k as f64 + 0.5) * spacing)
            .collect()
    }
}

/// Coordinate projection onto the sites on one side of the boost center;
/// the restricted form is again canonical, so the wedge is a phase space in
/// its own right.
pub fn restrict_to_wedge(model: &LatticeKGModel, wedge: Wedge) -> Result<WedgeSubspace> {
    let sites = model.wedge_sites(wedge);
    if sites.is_empty() {
        return Err(Error::InvalidArgument("empty wedge".into()));
    }
    let space = PhaseSpace::standard_block(sites.len())?;
    Ok(WedgeSubspace {
        wedge,
        sites,
        lattice_sites: model.sites,
        space,
    })
}

/// Boost generator on a wedge: A (phi, pi) = (X pi, -K phi) with X the
/// diagonal of site distances and K the midpoint-weighted gradient form
/// plus m^2 X.
pub fn rindler_generator(model: &LatticeKGModel, wedge: Wedge) -> Result<DynamicsGenerator> {
    let sub = restrict_to_wedge(model, wedge)?;
    let w = sub.sites().len();
    if w < 4 {
        return Err(Error::InvalidArgument(
            "wedge has fewer than 4 sites beyond the origin".into(),
        ));
    }
    let delta = model.spacing;
    let x = sub.distances(delta);
    let inv2 = 1.0 / (delta * delta);
    let mut k_mat = RMatrix::zeros(w, w);
    // link l joins local sites l-1 and l (l = 0 is the horizon link, weight
    // zero; l = w ties the last site to the far Dirichlet wall)
    for l in 0..=w {
        let weight = l as f64 * delta;
        let (i, j) = (l as isize - 1, l);
        if i >= 0 && (i as usize) < w {
            k_mat[(i as usize, i as usize)] += weight * inv2;
        }
        if j < w {
            k_mat[(j, j)] += weight * inv2;
        }
        if i >= 0 && j < w {
            k_mat[(i as usize, j)] -= weight * inv2;
            k_mat[(j, i as usize)] -= weight * inv2;
        }
    }
    for (i, &xi) in x.iter().enumerate() {
        k_mat[(i, i)] += model.mass * model.mass * xi;
    }
    let mut a = RMatrix::zeros(2 * w, 2 * w);
    for i in 0..w {
        a[(i, w + i)] = x[i];
        for j in 0..w {
            a[(w + i, j)] = -k_mat[(i, j)];
        }
    }
    DynamicsGenerator::new(
        sub.space().clone(),
        a,
        format!(
            "boost flow ({:?} wedge): W={} delta={} m={}",
            wedge, w, model.spacing, model.mass
        ),
    )
}

/// Fraction of J f leaking outside the wedge, maximized over wedge basis
/// vectors. Strictly positive for the inertial structure (anti-locality);
/// vanishing for structures assembled from wedge-local blocks.
pub fn wedge_invariance_defect(
    j: &ComplexStructure,
    model: &LatticeKGModel,
    wedge: Wedge,
) -> Result<f64> {
    let sub = restrict_to_wedge(model, wedge)?;
    if j.dim() != 2 * model.sites {
        return Err(Error::DimensionMismatch {
            expected: 2 * model.sites,
            got: j.dim(),
        });
    }
    let inside = sub.embedding_indices();
    let mut is_inside = vec![false; 2 * model.sites];
    for &i in &inside {
        is_inside[i] = true;
    }
    let mut worst = 0.0f64;
    for &i in &inside {
        let mut e = RVector::zeros(2 * model.sites);
        e[i] = 1.0;
        let jf = j.apply(&e)?;
        let total = jf.norm();
        if total == 0.0 {
            continue;
        }
        let outside: f64 = jf
            .iter()
            .enumerate()
            .filter(|(k, _)| !is_inside[*k])
            .map(|(_, v)| v * v)
            .sum::<f64>()
            .sqrt();
        worst = worst.max(outside / total);
    }
    Ok(worst)
}

/// One row of the Unruh table: a boost eigenmode, its occupation in the
/// restricted Minkowski vacuum, and the thermal comparison.
#[derive(Debug, Clone, Serialize)]
pub struct UnruhMode {
    pub mode: usize,
    /// Boost frequency per unit rapidity.
    pub kappa: f64,
    pub mean_occupation: f64,
    /// 1 / (e^{2 pi kappa} - 1).
    pub bose_einstein: f64,
    pub abs_rel_err: f64,
    /// Probability that the mode holds at least one quantum.
    pub tail_probability: f64,
}

/// The Unruh table for one wedge plus the total over all modes.
#[derive(Debug, Clone, Serialize)]
pub struct UnruhSpectrum {
    pub modes: Vec<UnruhMode>,
    /// Total expected boost quanta in the restricted vacuum.
    pub total_mean: f64,
}

/// Bose-Einstein occupation at inverse temperature 2 pi.
pub fn bose_einstein(kappa: f64) -> f64 {
    1.0 / (2.0 * std::f64::consts::PI * kappa).exp_m1()
}

/// Restrict the Minkowski vacuum to the right wedge and compute per-mode
/// occupations of the boost quantization.
pub fn unruh_spectrum(model: &LatticeKGModel) -> Result<UnruhSpectrum> {
    unruh_spectrum_for_wedge(model, Wedge::Right)
}

/// [`unruh_spectrum`] for a chosen wedge.
pub fn unruh_spectrum_for_wedge(model: &LatticeKGModel, wedge: Wedge) -> Result<UnruhSpectrum> {
    let m_structure = crate::phase_space::j_from_dynamics(&minkowski_generator(model)?)?;
    let sub = restrict_to_wedge(model, wedge)?;
    let boost = rindler_generator(model, wedge)?;
    let split = frequency_splitting(&boost)?;
    // two-point data of the restricted vacuum: half the restricted metric
    let mu_m_w = sub.restrict_form(&mu_metric(&m_structure));
    let r = &split.j;

    let mut modes = Vec::with_capacity(split.frequencies.len());
    let mut total = 0.0;
    for (k, (kappa, f)) in split.frequencies.iter().zip(split.modes.iter()).enumerate() {
        let rf = r.apply(f)?;
        let q = (f.transpose() * &mu_m_w * f)[(0, 0)];
        let p = (rf.transpose() * &mu_m_w * &rf)[(0, 0)];
        let c = (f.transpose() * &mu_m_w * &rf)[(0, 0)];
        let mean = 0.25 * (q + p) - 0.5;
        let total_mean_contrib = mean.max(0.0);
        total += total_mean_contrib;
        let be = bose_einstein(*kappa);
        // marginal covariance of the mode pair (Phi(f), Phi(Rf))
        let det = (0.5 * q + 0.5) * (0.5 * p + 0.5) - 0.25 * c * c;
        let p_vacuum = 1.0 / det.sqrt();
        modes.push(UnruhMode {
            mode: k,
            kappa: *kappa,
            mean_occupation: mean,
            bose_einstein: be,
            abs_rel_err: (mean - be).abs() / be,
            tail_probability: (1.0 - p_vacuum).clamp(0.0, 1.0),
        });
    }
    Ok(UnruhSpectrum {
        modes,
        total_mean: total,
    })
}

/// One-parameter least-squares fit of the inverse temperature beta in
/// n(kappa) = 1/(e^{beta kappa} - 1) over modes with kappa in the given
/// band, linearized through beta kappa = ln(1 + 1/n).
pub fn fit_inverse_temperature(
    spectrum: &UnruhSpectrum,
    kappa_min: f64,
    kappa_max: f64,
) -> Option<f64> {
    let mut num = 0.0;
    let mut den = 0.0;
    let mut count = 0usize;
    for mode in &spectrum.modes {
        if mode.kappa < kappa_min || mode.kappa > kappa_max || mode.mean_occupation <= 0.0 {
            continue;
        }
        let b = (1.0 + 1.0 / mode.mean_occupation).ln();
        num += mode.kappa * b;
        den += mode.kappa * mode.kappa;
        count += 1;
    }
    (count > 0).then(|| num / den)
}

/// Symplectic (Williamson) eigenvalues of the restricted vacuum covariance
/// on a wedge; at least 1/2 by the uncertainty bound, strictly above 1/2 on
/// the modes the restriction mixes.
pub fn restricted_symplectic_spectrum(model: &LatticeKGModel, wedge: Wedge) -> Result<Vec<f64>> {
    let m_structure = crate::phase_space::j_from_dynamics(&minkowski_generator(model)?)?;
    let sub = restrict_to_wedge(model, wedge)?;
    let v = sub.restrict_form(&mu_metric(&m_structure)) * 0.5;
    let w = sub.sites().len();
    let sigma = sub.space().form().clone();
    let v_sqrt = crate::linalg::sym_sqrt_pd(&v, 1e-14, "restricted covariance")?;
    let a = &v_sqrt * sigma * &v_sqrt;
    let a2 = a.transpose() * &a;
    let (vals, _) = crate::linalg::sym_eigen(&a2);
    let mut nus: Vec<f64> = vals.iter().map(|x| x.max(0.0).sqrt()).collect();
    nus.sort_by(|x, y| y.partial_cmp(x).unwrap());
    // eigenvalues come in pairs over complex modes
    Ok(nus.into_iter().step_by(2).take(w).collect())
}

/// Prob^{restricted vacuum}(N_R(F) <= n) for the subspace spanned by the
/// first `modes` boost eigenmodes of a wedge, in the Minkowski vacuum
/// restricted to that wedge. The restriction is mixed, so the computation
/// goes through the general two-point form of the truncated-Fock tail.
pub fn restricted_subspace_tail(
    model: &LatticeKGModel,
    wedge: Wedge,
    modes: usize,
    n: usize,
    cutoff: Option<usize>,
) -> Result<f64> {
    let m_structure = crate::phase_space::j_from_dynamics(&minkowski_generator(model)?)?;
    let sub = restrict_to_wedge(model, wedge)?;
    let boost = rindler_generator(model, wedge)?;
    let split = frequency_splitting(&boost)?;
    if modes == 0 || modes > split.modes.len() {
        return Err(Error::InvalidArgument(format!(
            "wedge has {} modes, requested {modes}",
            split.modes.len()
        )));
    }
    let form = sub.restrict_form(&mu_metric(&m_structure));
    let span: Vec<RVector> = split.modes[..modes].to_vec();
    crate::gaussian::finite_subspace_tail_of_form(&form, &split.j, &span, n, cutoff)
}

/// Family of models refining the same physical geometry: spacing scales as
/// base_sites/sites so the physical box and mass are fixed while the
/// horizon resolution grows. Emits the total expected boost quanta in the
/// restricted vacuum per member.
pub fn refinement_family(base: &LatticeKGModel, sizes: &[usize]) -> Result<Vec<FamilyMember>> {
    if sizes.is_empty() {
        return Err(Error::InvalidArgument("empty family".into()));
    }
    let mut members = Vec::with_capacity(sizes.len());
    for &l in sizes {
        let delta = base.spacing * base.sites as f64 / l as f64;
        let model = LatticeKGModel::new(l, delta, base.mass, None)?;
        let spectrum = unruh_spectrum(&model)?;
        let w = model.wedge_sites(Wedge::Right).len();
        members.push(FamilyMember {
            dim: 2 * w,
            total_mean: spectrum.total_mean,
        });
    }
    Ok(members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian;
    use crate::linalg::max_abs;
    use crate::phase_space::{j_from_dynamics, validate_complex_structure};

    fn model(sites: usize, mass: f64) -> LatticeKGModel {
        LatticeKGModel::new(sites, 1.0, mass, None).unwrap()
    }

    #[test]
    fn omega_squared_two_site_hand_value() {
        let w2 = omega_squared(2, 1.0, 1.0);
        let expected = nalgebra::dmatrix![3.0, -1.0; -1.0, 3.0];
        assert!(max_abs(&(w2 - expected)) < 1e-15);
    }

    #[test]
    fn zero_mass_rejected() {
        assert!(LatticeKGModel::new(16, 1.0, 0.0, None).is_err());
    }

    #[test]
    fn minkowski_structure_is_valid() {
        let m = model(16, 0.3);
        let gen = minkowski_generator(&m).unwrap();
        let j = j_from_dynamics(&gen).unwrap();
        let report = validate_complex_structure(gen.space(), j.op(), 1e-10).unwrap();
        assert!(report.passed());
    }

    #[test]
    fn lattice_dispersion_matches_continuum_at_low_k() {
        let m = model(128, 0.05);
        let gen = minkowski_generator(&m).unwrap();
        let split = crate::phase_space::frequency_splitting(&gen).unwrap();
        // Dirichlet modes: omega_k^2 = (4/delta^2) sin^2(k pi / (2(L+1))) + m^2
        for k in 1..=4usize {
            let continuum =
                ((k as f64 * std::f64::consts::PI / 129.0).powi(2) + 0.05f64.powi(2)).sqrt();
            let got = split.frequencies[k - 1];
            assert!(
                (got - continuum).abs() / continuum < 0.01,
                "mode {k}: {got} vs {continuum}"
            );
        }
    }

    #[test]
    fn wedge_dimensions_partition_the_lattice() {
        let m = model(16, 0.2);
        let left = restrict_to_wedge(&m, Wedge::Left).unwrap();
        let right = restrict_to_wedge(&m, Wedge::Right).unwrap();
        assert_eq!(left.space().dim() + right.space().dim(), 2 * m.sites());
        // canonical sub-block passes the phase-space invariants by construction
        assert_eq!(left.space().form().nrows(), left.space().dim());
    }

    #[test]
    fn wedge_projection_kills_other_side() {
        let m = model(16, 0.2);
        let right = restrict_to_wedge(&m, Wedge::Right).unwrap();
        let left = restrict_to_wedge(&m, Wedge::Left).unwrap();
        let mut f = RVector::zeros(right.space().dim());
        f[0] = 1.0;
        f[right.sites().len()] = -2.0;
        let full = right.embed(&f).unwrap();
        let on_left = left.restrict(&full).unwrap();
        assert!(on_left.amax() == 0.0);
        let back = right.restrict(&full).unwrap();
        assert!((back - f).amax() == 0.0);
    }

    #[test]
    fn boost_generator_satisfies_invariants() {
        let m = model(32, 0.1);
        let gen = rindler_generator(&m, Wedge::Right).unwrap();
        gen.validate_positive_energy().unwrap();
        let j = j_from_dynamics(&gen).unwrap();
        let report = validate_complex_structure(gen.space(), j.op(), 1e-10).unwrap();
        assert!(report.passed());
    }

    #[test]
    fn boost_spectrum_refines_with_lattice_size() {
        let kappa1 = |sites: usize| {
            let m = model(sites, 0.05);
            let gen = rindler_generator(&m, Wedge::Right).unwrap();
            crate::phase_space::frequency_splitting(&gen)
                .unwrap()
                .frequencies[0]
        };
        let (a, b, c) = (kappa1(32), kappa1(64), kappa1(128));
        assert!(b < a && c < b, "{a} {b} {c}");
    }

    #[test]
    fn left_right_spectra_agree_for_symmetric_origin() {
        let m = model(32, 0.1);
        let fl =
            crate::phase_space::frequency_splitting(&rindler_generator(&m, Wedge::Left).unwrap())
                .unwrap();
        let fr =
            crate::phase_space::frequency_splitting(&rindler_generator(&m, Wedge::Right).unwrap())
                .unwrap();
        for (a, b) in fl.frequencies.iter().zip(fr.frequencies.iter()) {
            assert!((a - b).abs() < 1e-9);
        }
        let sl = unruh_spectrum_for_wedge(&m, Wedge::Left).unwrap();
        let sr = unruh_spectrum_for_wedge(&m, Wedge::Right).unwrap();
        for (a, b) in sl.modes.iter().zip(sr.modes.iter()) {
            assert!((a.mean_occupation - b.mean_occupation).abs() < 1e-9);
        }
    }

    #[test]
    fn wedge_built_structure_has_no_invariance_defect() {
        let m = model(16, 0.2);
        let space = m.phase_space().unwrap();
        let rl = j_from_dynamics(&rindler_generator(&m, Wedge::Left).unwrap()).unwrap();
        let rr = j_from_dynamics(&rindler_generator(&m, Wedge::Right).unwrap()).unwrap();
        let left = restrict_to_wedge(&m, Wedge::Left).unwrap();
        let right = restrict_to_wedge(&m, Wedge::Right).unwrap();
        let assembled = ComplexStructure::direct_sum(
            space,
            &[
                (&rl, &left.embedding_indices()),
                (&rr, &right.embedding_indices()),
            ],
        )
        .unwrap();
        let defect = wedge_invariance_defect(&assembled, &m, Wedge::Right).unwrap();
        assert!(defect <= 1e-10, "defect {defect}");
    }

    #[test]
    fn minkowski_structure_is_anti_local() {
        let m = model(64, 0.1);
        let j = j_from_dynamics(&minkowski_generator(&m).unwrap()).unwrap();
        let defect = wedge_invariance_defect(&j, &m, Wedge::Right).unwrap();
        assert!(defect > 0.01, "defect {defect}");
    }

    #[test]
    fn invariance_defect_decreases_with_mass() {
        let defect = |mass: f64| {
            let m = model(32, mass);
            let j = j_from_dynamics(&minkowski_generator(&m).unwrap()).unwrap();
            wedge_invariance_defect(&j, &m, Wedge::Right).unwrap()
        };
        let (a, b, c) = (defect(0.1), defect(0.5), defect(2.0));
        assert!(a > b && b > c, "{a} {b} {c}");
    }

    #[test]
    fn unruh_occupations_positive_and_decreasing() {
        let m = model(64, 0.05);
        let s = unruh_spectrum(&m).unwrap();
        assert!(!s.modes.is_empty());
        for w in s.modes.windows(2) {
            assert!(w[0].kappa < w[1].kappa);
            // monotone decrease holds down to the numerical floor of the
            // covariance quadratic forms
            if w[1].mean_occupation > 1e-6 {
                assert!(w[0].mean_occupation > w[1].mean_occupation);
            }
        }
        assert!(s.modes[0].mean_occupation > 0.0);
        assert!(s.modes[0].tail_probability > 0.0);
        assert!(s.total_mean > 0.0);
    }

    #[test]
    fn unruh_low_modes_are_thermal() {
        let m = model(64, 0.05);
        let s = unruh_spectrum(&m).unwrap();
        // the lowest mode sits around kappa ~ 0.32 and must be thermal to a
        // few percent already at this size
        assert!(s.modes[0].abs_rel_err < 0.05, "{:?}", s.modes[0]);
        let beta = fit_inverse_temperature(&s, 0.2, 1.5).unwrap();
        let two_pi = 2.0 * std::f64::consts::PI;
        assert!((beta - two_pi).abs() / two_pi < 0.05, "beta {beta}");
    }

    #[test]
    fn restricted_state_is_heisenberg_valid_and_mixed() {
        let m = model(64, 0.05);
        let nus = restricted_symplectic_spectrum(&m, Wedge::Right).unwrap();
        for nu in &nus {
            assert!(*nu >= 0.5 - 1e-9, "nu {nu}");
        }
        assert!(nus.iter().any(|nu| *nu > 0.5 + 1e-3));
    }

    #[test]
    fn refinement_family_grows() {
        let base = model(64, 0.05);
        let members = refinement_family(&base, &[16, 32, 64]).unwrap();
        assert!(members[1].total_mean > members[0].total_mean);
        assert!(members[2].total_mean > members[1].total_mean);
        let report = gaussian::family_equivalence_verdict(&members).unwrap();
        assert_eq!(report.verdict, gaussian::Verdict::DivergentFamily);
    }
}
