//! Representation-free Gaussian-state calculator.
//!
//! The vacuum state of a complex structure J is completely determined by its
//! Weyl expectations exp(-(f,f)_J/4). Everything this module computes —
//! two-point functions, the statistics of one quantization's number
//! operators in another quantization's vacuum, occupation distributions,
//! finite-subspace tails — reduces to quadratic forms in the metrics
//! mu_1, mu_2 of the two structures involved.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    exp_neg_hermitian_shifted, herm_eigen, max_abs, sym_eigen, sym_sqrt_pd, CMatrix, CVector,
    RMatrix, RVector,
};
use crate::phase_space::{hermitian_inner_product, mu_metric, ComplexStructure, PhaseSpace};

/// The abstract Fock vacuum omega_J, determined by its complex structure.
#[derive(Debug, Clone)]
pub struct FockVacuumState {
    j: ComplexStructure,
}

impl FockVacuumState {
    pub fn new(j: ComplexStructure) -> Self {
        FockVacuumState { j }
    }

    pub fn structure(&self) -> &ComplexStructure {
        &self.j
    }
}

fn check_shared_space(j1: &ComplexStructure, j2: &ComplexStructure) -> Result<()> {
    if !PhaseSpace::same_space(j1.space(), j2.space()) {
        return Err(Error::DimensionMismatch {
            expected: j1.dim(),
            got: j2.dim(),
        });
    }
    Ok(())
}

/// Vacuum expectation of a Weyl operator: omega_J(W(f)) = exp(-(f,f)_J / 4).
pub fn weyl_expectation(state: &FockVacuumState, f: &RVector) -> Result<f64> {
    let norm2 = hermitian_inner_product(&state.j, f, f)?.re;
    Ok((-norm2 / 4.0).exp())
}

/// Vacuum two-point function <Omega, Phi(f1) Phi(f2) Omega> = (f1,f2)_J / 2.
pub fn two_point(state: &FockVacuumState, f1: &RVector, f2: &RVector) -> Result<Complex64> {
    Ok(hermitian_inner_product(&state.j, f1, f2)? * 0.5)
}

/// Bogoliubov split of an alien annihilation operator:
/// a_{J2}(f) = a*_{J1}(u) + a_{J1}(v) with u = (I + J1 J2) f / 2 and
/// v = (I - J1 J2) f / 2. The creator argument u vanishes iff J2 = J1 on f.
pub fn bogoliubov_split(
    j1: &ComplexStructure,
    j2: &ComplexStructure,
    f: &RVector,
) -> Result<(RVector, RVector)> {
    check_shared_space(j1, j2)?;
    j1.space().check_vector(f)?;
    let j1j2f = j1.apply(&j2.apply(f)?)?;
    let u = (f + &j1j2f) * 0.5;
    let v = (f - &j1j2f) * 0.5;
    Ok((u, v))
}

/// The mixing operator X = -[J1, J2]_+ - 2I, positive semidefinite with
/// respect to mu_2; zero iff J1 = J2.
pub fn mixing_operator(j1: &ComplexStructure, j2: &ComplexStructure) -> Result<RMatrix> {
    check_shared_space(j1, j2)?;
    let dim = j1.dim();
    Ok(-(j1.op() * j2.op() + j2.op() * j1.op()) - RMatrix::identity(dim, dim) * 2.0)
}

/// Expected number of J2-quanta on the ray of f in the J1-vacuum:
/// mu_2(f, X f) / 4 for mu_2-normalized f.
pub fn mean_alien_number(
    state: &FockVacuumState,
    j2: &ComplexStructure,
    f: &RVector,
) -> Result<f64> {
    let j1 = &state.j;
    check_shared_space(j1, j2)?;
    j1.space().check_vector(f)?;
    let mu2 = mu_metric(j2);
    let norm2 = (f.transpose() * &mu2 * f)[(0, 0)];
    if norm2 <= 0.0 {
        return Err(Error::InvalidArgument(
            "cannot normalize the zero vector".into(),
        ));
    }
    let x = mixing_operator(j1, j2)?;
    Ok((f.transpose() * &mu2 * x * f)[(0, 0)] / (4.0 * norm2))
}

/// Total expected J2-quanta in the J1-vacuum: Tr_{mu_2}(X) / 8. The factor
/// 1/8 reflects that a mu_2-orthonormal real basis {f_k, J2 f_k} covers each
/// complex mode twice.
pub fn total_mean_alien_number(state: &FockVacuumState, j2: &ComplexStructure) -> Result<f64> {
    let x = mixing_operator(&state.j, j2)?;
    let mu2 = mu_metric(j2);
    // trace of the operator evaluated through the symmetrized mu_2 form,
    // basis-free by construction
    let form = &mu2 * &x;
    let form = (&form + form.transpose()) * 0.5;
    let solved = mu2
        .lu()
        .solve(&form)
        .ok_or_else(|| Error::InvalidArgument("mu_2 metric is singular".into()))?;
    Ok(solved.trace() / 8.0)
}

/// Covariance data of the canonical pair (Phi(f), Phi(J2 f)) in a Gaussian
/// state with real two-point form `cov(f,g) = Re<Phi(f)Phi(g)>`.
#[derive(Debug, Clone, Copy)]
struct ModeCovariance {
    qq: f64,
    pp: f64,
    qp: f64,
}

impl ModeCovariance {
    fn of_vacuum_pair(
        state: &FockVacuumState,
        j2: &ComplexStructure,
        f_normalized: &RVector,
    ) -> Result<Self> {
        let p = j2.apply(f_normalized)?;
        Ok(ModeCovariance {
            qq: two_point(state, f_normalized, f_normalized)?.re,
            pp: two_point(state, &p, &p)?.re,
            qp: two_point(state, f_normalized, &p)?.re,
        })
    }

    fn symplectic_eigenvalue(&self) -> f64 {
        (self.qq * self.pp - self.qp * self.qp).sqrt()
    }

    fn mean_occupation(&self) -> f64 {
        0.5 * (self.qq + self.pp) - 0.5
    }
}

/// Variance of the alien number operator N_{J2}(f) in the J1-vacuum, by the
/// Gaussian fourth-moment (Wick) expansion with all pairings evaluated
/// through the two-point function.
pub fn alien_number_variance(
    state: &FockVacuumState,
    j2: &ComplexStructure,
    f: &RVector,
) -> Result<f64> {
    check_shared_space(&state.j, j2)?;
    let f = mu2_normalized(j2, f)?;
    let c = ModeCovariance::of_vacuum_pair(state, j2, &f)?;
    // N = (Q^2 + P^2 - 1)/2 with [Q, P] = i;
    // Var N = (a^2 + b^2 + 2c^2)/2 - 1/4 for zero-mean Gaussian states
    Ok(0.5 * (c.qq * c.qq + c.pp * c.pp + 2.0 * c.qp * c.qp) - 0.25)
}

fn mu2_normalized(j2: &ComplexStructure, f: &RVector) -> Result<RVector> {
    j2.space().check_vector(f)?;
    let jf = j2.apply(f)?;
    let norm2 = j2.space().sigma(f, &jf)?;
    if norm2 <= 0.0 {
        return Err(Error::InvalidArgument(
            "cannot normalize the zero vector".into(),
        ));
    }
    Ok(f / norm2.sqrt())
}

/// Verdict of an equivalence diagnosis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// J1 = J2: the mixing operator vanishes.
    Identical,
    /// Distinct structures on a fixed finite-dimensional space: always
    /// unitarily equivalent, with finite alien-quanta content.
    EquivalentFinite,
    /// A family of growing dimension whose total alien-quanta content grows
    /// without bound, signalling disjointness of the limiting
    /// representations.
    DivergentFamily,
}

/// One member of a growing-dimension family: the phase-space dimension and
/// the total expected alien quanta at that size.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FamilyMember {
    pub dim: usize,
    pub total_mean: f64,
}

impl FamilyMember {
    /// Build a member from a pure vacuum pair on a shared space.
    pub fn from_pair(j1: &ComplexStructure, j2: &ComplexStructure) -> Result<Self> {
        let state = FockVacuumState::new(j1.clone());
        Ok(FamilyMember {
            dim: j1.dim(),
            total_mean: total_mean_alien_number(&state, j2)?,
        })
    }
}

/// Per-pair and per-family equivalence diagnostic.
#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    /// The mixing operator X = -(J1 J2 + J2 J1) - 2I (last pair, when available).
    pub operator_x: Option<RMatrix>,
    /// Total expected alien quanta, (1/8) Tr_{mu_2} X.
    pub total_mean: f64,
    /// Mean alien quanta per complex mode (mu_2-eigenmode decomposition).
    pub per_mode_means: Vec<f64>,
    /// mu_2-trace of X; total_mean is one eighth of this.
    pub trace_mu2: f64,
    pub verdict: Verdict,
    /// For family diagnoses, the (dimension, total) trajectory.
    pub family_totals: Option<Vec<FamilyMember>>,
}

/// Diagnose a single pair of structures on a shared space.
pub fn equivalence_verdict(
    j1: &ComplexStructure,
    j2: &ComplexStructure,
) -> Result<EquivalenceReport> {
    let x = mixing_operator(j1, j2)?;
    let mu2 = mu_metric(j2);
    let mu2_sqrt = sym_sqrt_pd(&mu2, 1e-14, "mu_2 metric")?;
    let mu2_sqrt_inv = mu2_sqrt
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::InvalidArgument("mu_2 metric is singular".into()))?;
    // mu_2-symmetric representative of X/4; eigenvalues are per-ray means
    let c = &mu2_sqrt * (&x * 0.25) * &mu2_sqrt_inv;
    let (vals, _) = sym_eigen(&c);
    let min = vals.iter().cloned().fold(f64::MAX, f64::min);
    if min < -1e-10 {
        return Err(Error::InvariantViolation {
            check: "mixing operator mu_2-positivity",
            residual: -min,
            tolerance: 1e-10,
        });
    }
    let mut sorted: Vec<f64> = vals.iter().cloned().map(|v| v.max(0.0)).collect();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    // eigenvalues pair up over complex rays; keep one per mode
    let per_mode_means: Vec<f64> = sorted.iter().step_by(2).cloned().collect();
    let trace_mu2 = sorted.iter().sum::<f64>() * 4.0;
    let total_mean = trace_mu2 / 8.0;
    let verdict = if max_abs(&x) <= 1e-10 {
        Verdict::Identical
    } else {
        Verdict::EquivalentFinite
    };
    Ok(EquivalenceReport {
        operator_x: Some(x),
        total_mean,
        per_mode_means,
        trace_mu2,
        verdict,
        family_totals: None,
    })
}

/// Minimum growth of the final step for a family to be called divergent.
pub const FAMILY_DIVERGENCE_INCREMENT: f64 = 1e-3;

/// Diagnose a family of pairs at growing dimension. The verdict is
/// `DivergentFamily` when the totals increase strictly monotonically and the
/// final increment exceeds [`FAMILY_DIVERGENCE_INCREMENT`]; finite
/// truncations can only exhibit divergence as a trend.
pub fn family_equivalence_verdict(members: &[FamilyMember]) -> Result<EquivalenceReport> {
    if members.is_empty() {
        return Err(Error::InvalidArgument("empty family".into()));
    }
    let mut monotone_dims = true;
    let mut monotone_totals = true;
    for w in members.windows(2) {
        monotone_dims &= w[1].dim > w[0].dim;
        monotone_totals &= w[1].total_mean > w[0].total_mean;
    }
    if !monotone_dims {
        return Err(Error::InvalidArgument(
            "family members must have strictly increasing dimension".into(),
        ));
    }
    let last = members.last().unwrap();
    let divergent = members.len() >= 2 && monotone_totals && {
        let prev = members[members.len() - 2].total_mean;
        last.total_mean - prev > FAMILY_DIVERGENCE_INCREMENT
    };
    Ok(EquivalenceReport {
        operator_x: None,
        total_mean: last.total_mean,
        per_mode_means: Vec::new(),
        trace_mu2: last.total_mean * 8.0,
        verdict: if divergent {
            Verdict::DivergentFamily
        } else if last.total_mean <= 1e-10 {
            Verdict::Identical
        } else {
            Verdict::EquivalentFinite
        },
        family_totals: Some(members.to_vec()),
    })
}

/// Occupation distribution of an alien number operator.
#[derive(Debug, Clone, Serialize)]
pub struct NumberDistribution {
    /// P(N = k) for k = 0..=n_max.
    pub probabilities: Vec<f64>,
    /// 1 - sum of the reported probabilities.
    pub tail: f64,
    /// Per-mode occupation cutoff at which the computation converged.
    pub cutoff: usize,
    /// Maximum discrepancy between the two representations used
    /// (a finite-dimensional uniqueness witness).
    pub rep_discrepancy: f64,
}

/// Distribution cutoff policy: start, growth, cap.
const DIST_CUTOFF_CAP: usize = 512;
const DIST_TAIL_TOL: f64 = 1e-8;
const DIST_REP_TOL: f64 = 1e-8;

/// Distribution of N_{J2}(f) in the J1-vacuum, for k = 0..=n_max, computed
/// in a truncated single-mode Fock representation. The cutoff starts at
/// n_max + 8 and doubles until the truncation deficit is below 1e-8 (cap
/// 512). The same distribution is computed in two inequivalent-looking
/// representations — the J2-number basis and the state-adapted basis — and
/// the discrepancy is checked against 1e-8.
pub fn alien_number_distribution(
    state: &FockVacuumState,
    j2: &ComplexStructure,
    f: &RVector,
    n_max: usize,
) -> Result<NumberDistribution> {
    if n_max < 1 {
        return Err(Error::InvalidArgument("n_max must be >= 1".into()));
    }
    check_shared_space(&state.j, j2)?;
    let f = mu2_normalized(j2, f)?;
    let cov = ModeCovariance::of_vacuum_pair(state, j2, &f)?;
    distribution_from_covariance(cov, n_max)
}

fn distribution_from_covariance(cov: ModeCovariance, n_max: usize) -> Result<NumberDistribution> {
    let mut cutoff = (n_max + 8).max(16);
    loop {
        let pa = number_basis_distribution(cov, cutoff);
        // the reported masses are trace-normalized, so truncation error shows
        // up as weight parked near the basis boundary, not as a norm deficit
        let deficit: f64 = pa.iter().rev().take(3).sum();
        if deficit < DIST_TAIL_TOL {
            let pb = state_basis_distribution(cov, cutoff);
            let rep_discrepancy = pa
                .iter()
                .zip(pb.iter())
                .take(n_max + 1)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0f64, f64::max);
            if rep_discrepancy > DIST_REP_TOL {
                if cutoff < DIST_CUTOFF_CAP {
                    cutoff = (cutoff * 2).min(DIST_CUTOFF_CAP);
                    continue;
                }
                return Err(Error::CrossCheckFailed {
                    check: "representation independence of the number distribution",
                    discrepancy: rep_discrepancy,
                    tolerance: DIST_REP_TOL,
                });
            }
            let probabilities: Vec<f64> = pa.iter().take(n_max + 1).cloned().collect();
            let tail = (1.0 - probabilities.iter().sum::<f64>()).max(0.0);
            return Ok(NumberDistribution {
                probabilities,
                tail,
                cutoff,
                rep_discrepancy,
            });
        }
        if cutoff >= DIST_CUTOFF_CAP {
            return Err(Error::ConvergenceFailure {
                what: "number distribution cutoff",
                achieved: deficit,
                wanted: DIST_TAIL_TOL,
            });
        }
        cutoff = (cutoff * 2).min(DIST_CUTOFF_CAP);
    }
}

/// Single-mode ladder, position and momentum matrices at a cutoff.
fn quadratures(cutoff: usize) -> (CMatrix, CMatrix) {
    let d = cutoff + 1;
    let mut a = CMatrix::zeros(d, d);
    for n in 1..d {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    let sqrt2 = 2.0f64.sqrt();
    let q = (a.adjoint() + &a) / Complex64::new(sqrt2, 0.0);
    let p = (a.adjoint() - &a) * Complex64::new(0.0, 1.0) / Complex64::new(sqrt2, 0.0);
    (q, p)
}

/// Path A: the state represented in the J2-number basis. Pure marginals
/// become squeezed-vacuum vectors, mixed ones Gaussian density operators
/// exp(-theta/2 xi^T T^{-2} xi) built from the Williamson data.
fn number_basis_distribution(cov: ModeCovariance, cutoff: usize) -> Vec<f64> {
    let nu = cov.symplectic_eigenvalue();
    let d = cutoff + 1;
    if nu <= 0.5 + 1e-11 {
        // pure squeezed vacuum annihilated by a - zeta a*
        let t = Complex64::new(0.5 * (cov.qq - cov.pp), cov.qp);
        let n = cov.mean_occupation();
        let zeta = t / (1.0 + n);
        let mut amps = vec![Complex64::new(0.0, 0.0); d];
        amps[0] = Complex64::new(1.0, 0.0);
        let mut k = 0usize;
        while k + 2 < d {
            let kk = k as f64;
            amps[k + 2] =
                amps[k] * zeta * 0.5 * ((kk + 1.0) * (kk + 2.0)).sqrt() / (kk / 2.0 + 1.0);
            k += 2;
        }
        let norm2: f64 = amps.iter().map(|x| x.norm_sqr()).sum();
        return amps.iter().map(|x| x.norm_sqr() / norm2).collect();
    }
    // mixed: Gaussian exponential with inverse-temperature-like weight theta
    let theta = ((nu + 0.5) / (nu - 0.5)).ln();
    let det = cov.qq * cov.pp - cov.qp * cov.qp;
    // T^2 = V / nu; its inverse, times theta, weights the quadratic form
    let g_qq = theta * nu * cov.pp / det;
    let g_pp = theta * nu * cov.qq / det;
    let g_qp = -theta * nu * cov.qp / det;
    let (q, p) = quadratures(cutoff);
    let mut h = (&q * &q) * Complex64::new(0.5 * g_qq, 0.0);
    h += (&p * &p) * Complex64::new(0.5 * g_pp, 0.0);
    h += (&q * &p + &p * &q) * Complex64::new(0.5 * g_qp, 0.0);
    let rho = exp_neg_hermitian_shifted(&h);
    let trace: f64 = (0..d).map(|i| rho[(i, i)].re).sum();
    (0..d).map(|i| rho[(i, i)].re / trace).collect()
}

/// Path B: the state-adapted representation, where the marginal is exactly
/// thermal and diagonal; the number operator of the (Q, P) mode is built
/// from the Williamson frame and diagonalized, and its spectral projections
/// are binned by nearest integer.
fn state_basis_distribution(cov: ModeCovariance, cutoff: usize) -> Vec<f64> {
    let nu = cov.symplectic_eigenvalue();
    let d = cutoff + 1;
    // symmetric square root T of V / nu: quadratures of the state frame map
    // to the mode frame by xi = T xi'
    let v = [[cov.qq / nu, cov.qp / nu], [cov.qp / nu, cov.pp / nu]];
    let tr = v[0][0] + v[1][1];
    let s = (tr + 2.0).sqrt(); // det(V/nu) = 1
    let t = [
        [(v[0][0] + 1.0) / s, v[0][1] / s],
        [v[1][0] / s, (v[1][1] + 1.0) / s],
    ];
    let (qp_, pp_) = quadratures(cutoff);
    let q = &qp_ * Complex64::new(t[0][0], 0.0) + &pp_ * Complex64::new(t[0][1], 0.0);
    let p = &qp_ * Complex64::new(t[1][0], 0.0) + &pp_ * Complex64::new(t[1][1], 0.0);
    let mut n_op = (&q * &q + &p * &p) * Complex64::new(0.5, 0.0);
    for i in 0..d {
        n_op[(i, i)] -= Complex64::new(0.5, 0.0);
    }
    let (vals, vecs) = herm_eigen(&n_op);
    // thermal weights of the state frame
    let q_th = if nu > 0.5 + 1e-11 {
        (nu - 0.5) / (nu + 0.5)
    } else {
        0.0
    };
    let mut weights = vec![0.0f64; d];
    let mut w = 1.0 - q_th;
    for item in weights.iter_mut() {
        *item = w;
        w *= q_th;
    }
    let mut probs = vec![0.0f64; d];
    for idx in 0..d {
        let k = vals[idx].round();
        if k < 0.0 || k as usize >= d {
            continue;
        }
        let k = k as usize;
        let col = vecs.column(idx);
        let weight: f64 = (0..d).map(|n| weights[n] * col[n].norm_sqr()).sum();
        probs[k] += weight;
    }
    probs
}

/// Prob^{omega_1}(N_{J2}(F) <= n) for the finite subspace spanned by the
/// complex rays of the given vectors, via a multi-mode truncated Fock
/// computation.
///
/// The marginal state is exactly thermal in its Williamson frame; the
/// low-occupation J2 eigenvectors are represented there by ascending ladder
/// series, so every amplitude below the per-mode cutoff is exact and the
/// only truncation error is genuinely omitted tail mass.
pub fn finite_subspace_tail(
    state: &FockVacuumState,
    j2: &ComplexStructure,
    span: &[RVector],
    n: usize,
) -> Result<f64> {
    finite_subspace_tail_with_cutoff(state, j2, span, n, None)
}

/// [`finite_subspace_tail`] with an explicit per-mode cutoff. Nested-chain
/// comparisons should pin a common cutoff so truncation bias cancels in the
/// differences.
pub fn finite_subspace_tail_with_cutoff(
    state: &FockVacuumState,
    j2: &ComplexStructure,
    span: &[RVector],
    n: usize,
    cutoff: Option<usize>,
) -> Result<f64> {
    check_shared_space(&state.j, j2)?;
    let form = mu_metric(&state.j);
    finite_subspace_tail_of_form(&form, j2, span, n, cutoff)
}

/// Occupation-bound probability of a general zero-mean Gaussian state given
/// through its two-point form: form(f,g) = 2 Re <Phi(f) Phi(g)>. For a pure
/// vacuum this is the mu-metric of its structure; for a restricted vacuum it
/// is the restricted metric, making mixed wedge states computable with the
/// same truncated-Fock machinery.
pub fn finite_subspace_tail_of_form(
    form: &RMatrix,
    j2: &ComplexStructure,
    span: &[RVector],
    n: usize,
    cutoff: Option<usize>,
) -> Result<f64> {
    if form.nrows() != j2.dim() || form.ncols() != j2.dim() {
        return Err(Error::DimensionMismatch {
            expected: j2.dim(),
            got: form.nrows().max(form.ncols()),
        });
    }
    if span.is_empty() {
        return Err(Error::InvalidArgument("empty spanning set".into()));
    }
    if span.len() > 12 {
        return Err(Error::SizeLimit {
            what: "subspace mode count",
            got: span.len(),
            cap: 12,
        });
    }
    // complex Gram-Schmidt under (.,.)_{J2} with a re-orthogonalization pass
    let mut basis: Vec<RVector> = Vec::with_capacity(span.len());
    for (idx, s) in span.iter().enumerate() {
        j2.space().check_vector(s)?;
        let mut w = s.clone();
        for _ in 0..2 {
            for g in &basis {
                let ip = hermitian_inner_product(j2, g, &w)?;
                let jg = j2.apply(g)?;
                w -= g * ip.re + jg * ip.im;
            }
        }
        let norm2 = hermitian_inner_product(j2, &w, &w)?.re;
        if norm2 <= 1e-12 {
            return Err(Error::DependentSpanningSet {
                index: idx,
                residual: norm2,
            });
        }
        basis.push(w / norm2.sqrt());
    }
    let m = basis.len();

    // covariance of the quadrature family (Q_k, P_k) = (Phi(g_k), Phi(J2 g_k))
    let mut quads: Vec<RVector> = Vec::with_capacity(2 * m);
    for g in &basis {
        quads.push(g.clone());
        quads.push(j2.apply(g)?);
    }
    let mut v = RMatrix::zeros(2 * m, 2 * m);
    for i in 0..2 * m {
        for k in 0..2 * m {
            v[(i, k)] = 0.5 * (quads[i].transpose() * form * &quads[k])[(0, 0)];
        }
    }
    let v = (&v + v.transpose()) * 0.5;

    // per-mode cutoff: honor an explicit request, otherwise the largest
    // cutoff the vector budget allows
    let cap: usize = 1 << 19;
    let budget = |c: usize| (c + 1).checked_pow(m as u32).is_some_and(|d| d <= cap);
    let cutoff = match cutoff {
        Some(c) => c,
        None => {
            let mut c = (n + 4).max(7);
            while c < 64 && budget(c + 1) {
                c += 1;
            }
            c
        }
    };
    if cutoff < n + 1 || !budget(cutoff) {
        return Err(Error::SizeLimit {
            what: "subspace occupation basis",
            got: (cutoff + 1).saturating_pow(m as u32),
            cap,
        });
    }

    // Williamson data of the marginal: V = S diag(nu_k, nu_k) S^T with S
    // symplectic. The state is exactly thermal in the Williamson frame, so
    // the computation represents the J2-adapted occupation eigenvectors
    // there: no operator exponentials, and every amplitude below the cutoff
    // is built from finitely many ascending ladder paths.
    let (s_mat, nus) = williamson(&v, m)?;
    // ladder coefficients of the J2 modes in the frame modes:
    // a_k = sum_j alpha[k][j] a'_j + beta[k][j] a'^*_j
    let i_unit = Complex64::new(0.0, 1.0);
    let mut alpha = CMatrix::zeros(m, m);
    let mut beta = CMatrix::zeros(m, m);
    for k in 0..m {
        for j in 0..m {
            let sqq = Complex64::new(s_mat[(2 * k, 2 * j)], 0.0);
            let sqp = Complex64::new(s_mat[(2 * k, 2 * j + 1)], 0.0);
            let spq = Complex64::new(s_mat[(2 * k + 1, 2 * j)], 0.0);
            let spp = Complex64::new(s_mat[(2 * k + 1, 2 * j + 1)], 0.0);
            let cq = sqq + i_unit * spq; // coefficient of Q'_j in Q_k + i P_k
            let cp = sqp + i_unit * spp; // coefficient of P'_j
            alpha[(k, j)] = (cq - i_unit * cp) * 0.5;
            beta[(k, j)] = (cq + i_unit * cp) * 0.5;
        }
    }
    let z = -(alpha
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::InvalidArgument("degenerate Bogoliubov block".into()))?
        * &beta);
    let z = (&z + z.transpose()) * Complex64::new(0.5, 0.0);

    let base = cutoff + 1;
    let dim = base.pow(m as u32);
    let strides: Vec<usize> = (0..m).map(|k| base.pow((m - 1 - k) as u32)).collect();
    let occ_of = |idx: usize, k: usize| (idx / strides[k]) % base;

    // raising a'^*_a a'^*_b applied to a vector
    let raise2 = |vsrc: &CVector, a: usize, b: usize| -> CVector {
        let mut out = CVector::zeros(dim);
        for idx in 0..dim {
            let va = vsrc[idx];
            if va.norm_sqr() == 0.0 {
                continue;
            }
            let na = occ_of(idx, a);
            if na + 1 > cutoff {
                continue;
            }
            let mid = idx + strides[a];
            let amp_a = ((na + 1) as f64).sqrt();
            let nb = occ_of(mid, b);
            if nb + 1 > cutoff {
                continue;
            }
            let amp_b = ((nb + 1) as f64).sqrt();
            out[mid + strides[b]] += va * amp_a * amp_b;
        }
        out
    };

    // |0_F> = N exp(1/2 sum z_ab a'^*_a a'^*_b) |0>: the series terminates
    // once total occupation exceeds the truncated basis
    let mut vac_f = CVector::zeros(dim);
    vac_f[0] = Complex64::new(1.0, 0.0);
    let mut term = vac_f.clone();
    let max_terms = m * cutoff / 2 + 1;
    for t in 1..=max_terms {
        let mut next = CVector::zeros(dim);
        for a in 0..m {
            for b in 0..m {
                let w = z[(a, b)] * 0.5;
                if w.norm_sqr() == 0.0 {
                    continue;
                }
                next += raise2(&term, a, b) * w;
            }
        }
        next /= Complex64::new(t as f64, 0.0);
        let norm = next.norm();
        term = next;
        vac_f += &term;
        if norm < 1e-18 {
            break;
        }
    }
    let norm = vac_f.norm();
    if !(norm.is_finite() && norm > 0.0) {
        return Err(Error::ConvergenceFailure {
            what: "alien vacuum series",
            achieved: norm,
            wanted: 1.0,
        });
    }
    vac_f /= Complex64::new(norm, 0.0);

    // J2 creation operators expressed in the frame ladder operators
    let apply_adag = |vsrc: &CVector, k: usize| -> CVector {
        let mut out = CVector::zeros(dim);
        for idx in 0..dim {
            let va = vsrc[idx];
            if va.norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..m {
                // conj(alpha) a'^* part
                let ca = alpha[(k, j)].conj();
                if ca.norm_sqr() > 0.0 {
                    let nj = occ_of(idx, j);
                    if nj < cutoff {
                        out[idx + strides[j]] += va * ca * ((nj + 1) as f64).sqrt();
                    }
                }
                // conj(beta) a' part
                let cb = beta[(k, j)].conj();
                if cb.norm_sqr() > 0.0 {
                    let nj = occ_of(idx, j);
                    if nj > 0 {
                        out[idx - strides[j]] += va * cb * (nj as f64).sqrt();
                    }
                }
            }
        }
        out
    };

    // thermal weights of the frame state
    let qs: Vec<f64> = nus
        .iter()
        .map(|nu| {
            if *nu > 0.5 + 1e-11 {
                (nu - 0.5) / (nu + 0.5)
            } else {
                0.0
            }
        })
        .collect();
    let log_q: Vec<f64> = qs
        .iter()
        .map(|q| if *q > 0.0 { q.ln() } else { f64::NEG_INFINITY })
        .collect();
    let log_norm: f64 = qs.iter().map(|q| (1.0 - q).ln()).sum();
    let weight_of = |idx: usize| -> f64 {
        let mut lw = log_norm;
        for (k, lq) in log_q.iter().enumerate() {
            let t = occ_of(idx, k);
            if t > 0 {
                if lq.is_infinite() {
                    return 0.0;
                }
                lw += t as f64 * lq;
            }
        }
        lw.exp()
    };

    // enumerate J2-occupation tuples with total <= n and accumulate
    // sum_u <u_F| rho |u_F> with rho diagonal in the frame basis
    let mut acc = 0.0f64;
    let mut tuple = vec![0usize; m];
    loop {
        let total: usize = tuple.iter().sum();
        if total <= n {
            let mut w = vac_f.clone();
            let mut fact = 1.0f64;
            for (k, &reps) in tuple.iter().enumerate() {
                for r in 0..reps {
                    w = apply_adag(&w, k);
                    fact *= (r + 1) as f64;
                }
            }
            w /= Complex64::new(fact.sqrt(), 0.0);
            let p: f64 = (0..dim)
                .map(|idx| {
                    let a2 = w[idx].norm_sqr();
                    if a2 == 0.0 {
                        0.0
                    } else {
                        weight_of(idx) * a2
                    }
                })
                .sum();
            acc += p;
        }
        // next tuple with entries <= n (higher entries cannot satisfy the bound)
        let mut k = m;
        loop {
            if k == 0 {
                return Ok(acc.clamp(0.0, 1.0));
            }
            k -= 1;
            if tuple[k] < n {
                tuple[k] += 1;
                for item in tuple.iter_mut().skip(k + 1) {
                    *item = 0;
                }
                break;
            }
            tuple[k] = 0;
        }
    }
}

/// Williamson normal form of a positive-definite covariance:
/// V = S diag(nu_1, nu_1, ..., nu_m, nu_m) S^T with S symplectic for the
/// interleaved canonical form. Returns (S, nus).
fn williamson(v: &RMatrix, modes: usize) -> Result<(RMatrix, Vec<f64>)> {
    let dim = 2 * modes;
    let mut sigma = RMatrix::zeros(dim, dim);
    for k in 0..modes {
        sigma[(2 * k, 2 * k + 1)] = 1.0;
        sigma[(2 * k + 1, 2 * k)] = -1.0;
    }
    let v_sqrt = sym_sqrt_pd(v, 1e-14, "marginal covariance")?;
    let a = &v_sqrt * &sigma * &v_sqrt; // antisymmetric
    let a = (&a - a.transpose()) * 0.5;
    let a2 = a.transpose() * &a;
    let (vals, vecs) = sym_eigen(&a2);
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&x, &y| vals[y].partial_cmp(&vals[x]).unwrap());
    // deflation: each eigenvector candidate is orthogonalized against the
    // frame built so far, which keeps degenerate eigenspaces (a pure or
    // symmetric state has many) from producing a skewed frame
    let mut frame_cols: Vec<RVector> = Vec::with_capacity(dim);
    let mut nus = Vec::with_capacity(modes);
    for &idx in &order {
        if frame_cols.len() == dim {
            break;
        }
        let nu = vals[idx].max(0.0).sqrt();
        if !(nu.is_finite() && nu > 0.0) {
            return Err(Error::InvalidArgument(
                "marginal covariance has a vanishing symplectic eigenvalue".into(),
            ));
        }
        let mut u = vecs.column(idx).clone_owned();
        for _ in 0..2 {
            for col in &frame_cols {
                let c = col.dot(&u);
                u -= col * c;
            }
        }
        let norm = u.norm();
        if norm < 1e-8 {
            continue; // consumed as a partner of an earlier mode
        }
        u /= norm;
        // partner w with u^T A w = +nu, giving the block nu * [[0,1],[-1,0]]
        let w = -(&a * &u) / nu;
        frame_cols.push(u);
        frame_cols.push(w);
        nus.push(nu);
    }
    if frame_cols.len() != dim {
        return Err(Error::InvalidArgument(
            "Williamson frame extraction failed".into(),
        ));
    }
    let mut frame = RMatrix::zeros(dim, dim);
    for (k, col) in frame_cols.iter().enumerate() {
        frame.set_column(k, col);
    }
    let mut d_inv_sqrt = RMatrix::zeros(dim, dim);
    for (k, &nu) in nus.iter().enumerate() {
        for s in 0..2 {
            d_inv_sqrt[(2 * k + s, 2 * k + s)] = 1.0 / nu.sqrt();
        }
    }
    Ok((&v_sqrt * &frame * &d_inv_sqrt, nus))
}
