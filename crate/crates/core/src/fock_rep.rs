//! Explicit truncated Fock-space representation.
//!
//! Operators are dense complex matrices in an occupation-number basis with a
//! per-mode cutoff. This module is both a production path (number
//! distributions, commutator checks) and the brute-force oracle validating
//! the closed forms in [`crate::gaussian`].
//!
//! Truncation caveat: creation and annihilation leak at the basis boundary,
//! so operator identities are only asserted on states with total occupation
//! at most `cutoff - 2`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{expi_hermitian, kron, log_unitary, max_abs_c, CMatrix, CVector, RVector};
use crate::phase_space::{hermitian_inner_product, ComplexStructure};

/// Hard cap on the number of modes.
pub const MAX_MODES: usize = 12;
/// Hard cap on the occupation-basis size (c+1)^m.
pub const MAX_BASIS: usize = 1 << 20;

/// Occupation-number-cutoff model of the Fock space over (S, J).
#[derive(Debug, Clone)]
pub struct FockTruncation {
    j: ComplexStructure,
    cutoff: usize,
    mode_basis: Vec<RVector>,
    dim: usize,
}

impl FockTruncation {
    /// Build a truncation over J with an automatically chosen
    /// (.,.)_J-orthonormal mode basis.
    pub fn new(j: &ComplexStructure, cutoff: usize) -> Result<Self> {
        let n = j.space().modes();
        let seeds: Vec<RVector> = (0..2 * n)
            .map(|k| {
                let mut v = RVector::zeros(2 * n);
                v[k] = 1.0;
                v
            })
            .collect();
        Self::with_mode_seeds(j, &seeds, cutoff)
    }

    /// Build a truncation whose first modes are the J-normalized rays of the
    /// given seed vectors (later completed from the canonical basis if they
    /// do not span).
    pub fn with_mode_seeds(j: &ComplexStructure, seeds: &[RVector], cutoff: usize) -> Result<Self> {
        if cutoff == 0 {
            return Err(Error::InvalidArgument("cutoff must be >= 1".into()));
        }
        let n = j.space().modes();
        let mut basis: Vec<RVector> = Vec::with_capacity(n);
        let push_if_independent = |basis: &mut Vec<RVector>, v: &RVector| -> Result<bool> {
            let mut w = v.clone();
            // two Gram-Schmidt passes under (.,.)_J
            for _ in 0..2 {
                for m in basis.iter() {
                    let ip = hermitian_inner_product(j, m, &w)?;
                    let jm = j.apply(m)?;
                    w -= m * ip.re + jm * ip.im;
                }
            }
            let norm2 = hermitian_inner_product(j, &w, &w)?.re;
            if norm2 > 1e-12 {
                basis.push(w / norm2.sqrt());
                Ok(true)
            } else {
                Ok(false)
            }
        };
        for s in seeds {
            j.space().check_vector(s)?;
            if basis.len() == n {
                break;
            }
            push_if_independent(&mut basis, s)?;
        }
        for k in 0..2 * n {
            if basis.len() == n {
                break;
            }
            let mut v = RVector::zeros(2 * n);
            v[k] = 1.0;
            push_if_independent(&mut basis, &v)?;
        }
        if basis.len() != n {
            return Err(Error::DependentSpanningSet {
                index: basis.len(),
                residual: 0.0,
            });
        }
        Self::from_orthonormal_modes(j.clone(), basis, cutoff)
    }

    fn from_orthonormal_modes(
        j: ComplexStructure,
        mode_basis: Vec<RVector>,
        cutoff: usize,
    ) -> Result<Self> {
        let m = mode_basis.len();
        if m > MAX_MODES {
            return Err(Error::SizeLimit {
                what: "mode count",
                got: m,
                cap: MAX_MODES,
            });
        }
        let dim = (cutoff + 1)
            .checked_pow(m as u32)
            .filter(|&d| d <= MAX_BASIS)
            .ok_or(Error::SizeLimit {
                what: "occupation basis size",
                got: usize::MAX,
                cap: MAX_BASIS,
            })?;
        Ok(FockTruncation {
            j,
            cutoff,
            mode_basis,
            dim,
        })
    }

    pub fn structure(&self) -> &ComplexStructure {
        &self.j
    }

    pub fn modes(&self) -> usize {
        self.mode_basis.len()
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Occupation-basis size (cutoff+1)^modes.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mode_basis(&self) -> &[RVector] {
        &self.mode_basis
    }

    /// Occupation tuple of a basis index (mode 0 varies slowest).
    pub fn occupation(&self, mut index: usize) -> Vec<usize> {
        let m = self.modes();
        let base = self.cutoff + 1;
        let mut occ = vec![0usize; m];
        for k in (0..m).rev() {
            occ[k] = index % base;
            index /= base;
        }
        occ
    }

    /// Basis index of an occupation tuple.
    pub fn index(&self, occ: &[usize]) -> usize {
        let base = self.cutoff + 1;
        occ.iter().fold(0, |acc, &n| acc * base + n)
    }

    /// Total occupation of a basis index.
    pub fn total_occupation(&self, index: usize) -> usize {
        self.occupation(index).iter().sum()
    }

    /// The vacuum vector (unit mass on the all-zero occupation).
    pub fn vacuum(&self) -> CVector {
        let mut v = CVector::zeros(self.dim);
        v[0] = Complex64::new(1.0, 0.0);
        v
    }

    /// Complex mode coordinates z_i = (f_i, f)_J of a phase vector, so that
    /// f = sum_i Re(z_i) f_i + Im(z_i) J f_i.
    pub fn mode_coordinates(&self, f: &RVector) -> Result<Vec<Complex64>> {
        self.j.space().check_vector(f)?;
        self.mode_basis
            .iter()
            .map(|m| hermitian_inner_product(&self.j, m, f))
            .collect()
    }

    /// Indices of basis states with total occupation <= max_total.
    pub fn sector_indices(&self, max_total: usize) -> Vec<usize> {
        (0..self.dim)
            .filter(|&i| self.total_occupation(i) <= max_total)
            .collect()
    }

    /// Maximum matrix entry over rows and columns restricted to total
    /// occupation <= max_total.
    pub fn max_abs_on_sector(&self, m: &CMatrix, max_total: usize) -> f64 {
        let idx = self.sector_indices(max_total);
        let mut worst = 0.0f64;
        for &i in &idx {
            for &j in &idx {
                worst = worst.max(m[(i, j)].norm());
            }
        }
        worst
    }

    /// Maximum 2-norm of the action of an operator on basis states with
    /// total occupation <= max_total. Exponential-type identities (Weyl
    /// products) spread states by many levels, so they are compared through
    /// their action on low sectors rather than entrywise near the boundary.
    pub fn max_action_on_sector(&self, m: &CMatrix, max_total: usize) -> f64 {
        let mut worst = 0.0f64;
        for col in 0..self.dim {
            if self.total_occupation(col) > max_total {
                continue;
            }
            let norm = m.column(col).norm();
            worst = worst.max(norm);
        }
        worst
    }

    /// Residual of Hermiticity, max-entry.
    fn herm_residual(m: &CMatrix) -> f64 {
        max_abs_c(&(m - m.adjoint()))
    }
}

/// A labelled dense operator on the truncated Fock space.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    pub label: String,
    pub mat: CMatrix,
    pub hermitian: bool,
}

impl OperatorMatrix {
    fn new(label: impl Into<String>, mat: CMatrix, hermitian: bool) -> Result<Self> {
        if hermitian {
            let resid = FockTruncation::herm_residual(&mat);
            if resid > 1e-10 {
                return Err(Error::InvariantViolation {
                    check: "operator hermiticity",
                    residual: resid,
                    tolerance: 1e-10,
                });
            }
        }
        Ok(OperatorMatrix {
            label: label.into(),
            mat,
            hermitian,
        })
    }

    pub fn adjoint(&self) -> OperatorMatrix {
        OperatorMatrix {
            label: format!("{}^*", self.label),
            mat: self.mat.adjoint(),
            hermitian: self.hermitian,
        }
    }
}

/// Single-mode lowering matrix with sqrt(n) entries.
fn lowering(cutoff: usize) -> CMatrix {
    let d = cutoff + 1;
    let mut a = CMatrix::zeros(d, d);
    for n in 1..d {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    a
}

/// Matrix of the annihilation operator a(f) = sum_i conj(z_i) a_i,
/// antilinear in f with respect to J.
pub fn annihilator(t: &FockTruncation, f: &RVector) -> Result<OperatorMatrix> {
    let z = t.mode_coordinates(f)?;
    let base = t.cutoff + 1;
    let m = t.modes();
    let mut mat = CMatrix::zeros(t.dim, t.dim);
    // a_i maps |.., n_i, ..> to sqrt(n_i) |.., n_i - 1, ..>
    for col in 0..t.dim {
        let occ = t.occupation(col);
        let mut stride = 1usize;
        for i in (0..m).rev() {
            let n_i = occ[i];
            if n_i > 0 {
                let row = col - stride;
                mat[(row, col)] += z[i].conj() * (n_i as f64).sqrt();
            }
            stride *= base;
        }
    }
    OperatorMatrix::new(format!("a({})", short_vec(f)), mat, false)
}

/// Matrix of the creation operator a*(f), the adjoint of a(f); linear in f.
pub fn creator(t: &FockTruncation, f: &RVector) -> Result<OperatorMatrix> {
    let a = annihilator(t, f)?;
    Ok(OperatorMatrix {
        label: format!("a*({})", short_vec(f)),
        mat: a.mat.adjoint(),
        hermitian: false,
    })
}

/// The Hermitian field operator Phi(f) = (a*(f) + a(f)) / sqrt(2).
pub fn field_operator(t: &FockTruncation, f: &RVector) -> Result<OperatorMatrix> {
    let a = annihilator(t, f)?;
    let phi = (&a.mat.adjoint() + &a.mat) / Complex64::new(2.0f64.sqrt(), 0.0);
    OperatorMatrix::new(format!("Phi({})", short_vec(f)), phi, true)
}

/// The unitary Weyl operator W(f) = exp(i Phi(f)).
///
/// Phi(f) is a sum of commuting single-mode generators, so the exponential
/// factorizes over modes; each factor is a small Hermitian exponential.
pub fn weyl_operator(t: &FockTruncation, f: &RVector) -> Result<OperatorMatrix> {
    let z = t.mode_coordinates(f)?;
    let a1 = lowering(t.cutoff);
    let mut w = CMatrix::identity(1, 1);
    for zi in &z {
        // per-mode generator (z a† + conj(z) a) / sqrt(2)
        let g = (a1.adjoint() * *zi + &a1 * zi.conj()) / Complex64::new(2.0f64.sqrt(), 0.0);
        let u = expi_hermitian(&g);
        w = kron(&w, &u);
    }
    OperatorMatrix::new(format!("W({})", short_vec(f)), w, false)
}

/// N(f) = a*(f) a(f), the number of quanta with wavefunction on f's ray.
pub fn number_operator(t: &FockTruncation, f: &RVector) -> Result<OperatorMatrix> {
    let a = annihilator(t, f)?;
    let n = a.mat.adjoint() * &a.mat;
    OperatorMatrix::new(format!("N({})", short_vec(f)), n, true)
}

/// The total number operator, diagonal in the occupation basis.
pub fn total_number(t: &FockTruncation) -> OperatorMatrix {
    let mut n = CMatrix::zeros(t.dim, t.dim);
    for i in 0..t.dim {
        n[(i, i)] = Complex64::new(t.total_occupation(i) as f64, 0.0);
    }
    OperatorMatrix {
        label: "N".into(),
        mat: n,
        hermitian: true,
    }
}

/// Second quantization dGamma(H) = sum_ij H_ij a*_i a_j of a one-particle
/// Hermitian operator given in the mode basis.
pub fn dgamma(t: &FockTruncation, h: &CMatrix) -> Result<OperatorMatrix> {
    let m = t.modes();
    if h.nrows() != m || h.ncols() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: h.nrows().max(h.ncols()),
        });
    }
    let resid = max_abs_c(&(h - h.adjoint()));
    if resid > 1e-10 {
        return Err(Error::InvariantViolation {
            check: "dGamma argument hermiticity",
            residual: resid,
            tolerance: 1e-10,
        });
    }
    let base = t.cutoff + 1;
    let mut out = CMatrix::zeros(t.dim, t.dim);
    // a*_i a_j |occ> = sqrt(n_j (n_i + 1 - delta_ij ... )) |occ - e_j + e_i>
    for col in 0..t.dim {
        let occ = t.occupation(col);
        let mut stride = vec![0usize; m];
        let mut s = 1usize;
        for i in (0..m).rev() {
            stride[i] = s;
            s *= base;
        }
        for j_mode in 0..m {
            let nj = occ[j_mode];
            if nj == 0 {
                continue;
            }
            for i_mode in 0..m {
                let hij = h[(i_mode, j_mode)];
                if hij.norm_sqr() == 0.0 {
                    continue;
                }
                if i_mode == j_mode {
                    out[(col, col)] += hij * (nj as f64);
                } else {
                    let ni = occ[i_mode];
                    if ni + 1 > t.cutoff {
                        continue; // truncated away
                    }
                    let row = col - stride[j_mode] + stride[i_mode];
                    let amp = ((nj as f64) * (ni as f64 + 1.0)).sqrt();
                    out[(row, col)] += hij * amp;
                }
            }
        }
    }
    OperatorMatrix::new("dGamma(H)", out, true)
}

/// Second quantization Gamma(U) of a one-particle unitary, acting as
/// U x ... x U on each particle sector; computed as exp(i dGamma(K)) with
/// U = exp(iK).
pub fn gamma(t: &FockTruncation, u: &CMatrix) -> Result<OperatorMatrix> {
    let m = t.modes();
    if u.nrows() != m || u.ncols() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: u.nrows().max(u.ncols()),
        });
    }
    let resid = max_abs_c(&(u * u.adjoint() - CMatrix::identity(m, m)));
    if resid > 1e-10 {
        return Err(Error::InvariantViolation {
            check: "Gamma argument unitarity",
            residual: resid,
            tolerance: 1e-10,
        });
    }
    let k = log_unitary(u)?;
    let dg = dgamma(t, &k)?;
    let g = expi_hermitian(&dg.mat);
    OperatorMatrix::new("Gamma(U)", g, false)
}

/// Annihilation operator of an alien structure j2, represented on this
/// truncation (built over j1) through the Bogoliubov split
/// a_{j2}(f) = a*_{j1}(u) + a_{j1}(v).
pub fn alien_annihilator(
    t: &FockTruncation,
    j2: &ComplexStructure,
    f: &RVector,
) -> Result<OperatorMatrix> {
    let (u, v) = crate::gaussian::bogoliubov_split(t.structure(), j2, f)?;
    let cu = creator(t, &u)?;
    let av = annihilator(t, &v)?;
    OperatorMatrix::new(format!("a_alien({})", short_vec(f)), cu.mat + av.mat, false)
}

/// Alien number operator N_{j2}(f) = a*_{j2}(f) a_{j2}(f) as a matrix on a
/// truncation built over a different structure.
pub fn alien_number_operator(
    t: &FockTruncation,
    j2: &ComplexStructure,
    f: &RVector,
) -> Result<OperatorMatrix> {
    let a = alien_annihilator(t, j2, f)?;
    let n = a.mat.adjoint() * &a.mat;
    OperatorMatrix::new(format!("N_alien({})", short_vec(f)), n, true)
}

/// Report of the commutator identity between finite-subspace number
/// operators of two structures.
#[derive(Debug, Clone)]
pub struct CommutatorReport {
    /// Max entry of [N_{J1}(f), N_{J2}(g)] on the sub-cutoff sector.
    pub commutator_max: f64,
    /// Max entry of the difference against the sigma-weighted anticommutator
    /// expression, on the sub-cutoff sector.
    pub residual: f64,
}

/// Compare [N_{J1}(f), N_{J2}(g)] against the sigma-weighted sum of field
/// anticommutators it must equal in any regular representation.
pub fn number_commutator_check(
    t: &FockTruncation,
    j2: &ComplexStructure,
    f: &RVector,
    g: &RVector,
) -> Result<CommutatorReport> {
    let j1 = t.structure().clone();
    let space = j1.space();
    let n1 = number_operator(t, f)?;
    let n2 = alien_number_operator(t, j2, g)?;
    let lhs = &n1.mat * &n2.mat - &n2.mat * &n1.mat;

    let j1f = j1.apply(f)?;
    let j2g = j2.apply(g)?;
    let phi = |v: &RVector| -> Result<CMatrix> { Ok(field_operator(t, v)?.mat) };
    let (p_f, p_j1f, p_g, p_j2g) = (phi(f)?, phi(&j1f)?, phi(g)?, phi(&j2g)?);
    let anti = |a: &CMatrix, b: &CMatrix| a * b + b * a;
    let mut rhs = anti(&p_f, &p_g) * Complex64::new(0.0, 0.5 * space.sigma(f, g)?);
    rhs += anti(&p_f, &p_j2g) * Complex64::new(0.0, 0.5 * space.sigma(f, &j2g)?);
    rhs += anti(&p_j1f, &p_g) * Complex64::new(0.0, 0.5 * space.sigma(&j1f, g)?);
    rhs += anti(&p_j1f, &p_j2g) * Complex64::new(0.0, 0.5 * space.sigma(&j1f, &j2g)?);

    // products of two quadratic operators move states by up to four levels
    let max_total = t.cutoff.saturating_sub(4);
    Ok(CommutatorReport {
        commutator_max: t.max_abs_on_sector(&lhs, max_total),
        residual: t.max_abs_on_sector(&(lhs - rhs), max_total),
    })
}

/// Report of the action of an alien number operator on the vacuum.
#[derive(Debug, Clone)]
pub struct AlienVacuumReport {
    /// Norm of the two-quantum component of N_{J2}(f) vacuum.
    pub two_quantum_norm: f64,
    /// Vacuum (scalar) coefficient; equals the mean alien number.
    pub scalar_coefficient: f64,
    /// Residual between the two-quantum component and the Bogoliubov
    /// prediction a*(v) a*(u) vacuum.
    pub structure_residual: f64,
}

/// Verify N_{J2}(f) vacuum = (u,u)_{J1} vacuum + a*_{J1}(v) a*_{J1}(u) vacuum,
/// with (u, v) the Bogoliubov split of f. The two-quantum component is
/// nonzero exactly when J2 differs from J1 on f's ray.
pub fn alien_vacuum_action_check(
    t: &FockTruncation,
    j2: &ComplexStructure,
    f: &RVector,
) -> Result<AlienVacuumReport> {
    let n2 = alien_number_operator(t, j2, f)?;
    let psi = &n2.mat * t.vacuum();
    let scalar = psi[0].re;

    let (u, v) = crate::gaussian::bogoliubov_split(t.structure(), j2, f)?;
    let predicted = creator(t, &v)?.mat * creator(t, &u)?.mat * t.vacuum();

    let mut two_quantum_norm2 = 0.0;
    let mut resid2 = 0.0;
    for i in 0..t.dim {
        let occ_total = t.total_occupation(i);
        if occ_total == 2 {
            two_quantum_norm2 += psi[i].norm_sqr();
            resid2 += (psi[i] - predicted[i]).norm_sqr();
        }
    }
    Ok(AlienVacuumReport {
        two_quantum_norm: two_quantum_norm2.sqrt(),
        scalar_coefficient: scalar,
        structure_residual: resid2.sqrt(),
    })
}

fn short_vec(f: &RVector) -> String {
    let shown: Vec<String> = f.iter().take(4).map(|x| format!("{x:.3}")).collect();
    if f.len() > 4 {
        format!("[{}, ..]", shown.join(", "))
    } else {
        format!("[{}]", shown.join(", "))
    }
}

/// Expectation of an operator in a (normalized) state vector.
pub fn expectation(op: &CMatrix, psi: &CVector) -> Complex64 {
    (psi.adjoint() * op * psi)[(0, 0)]
}
