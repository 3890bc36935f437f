//! Dense complex matrices at small dimension, with a two-band tolerance
//! policy for every discrete decision (orthogonality, completeness,
//! projector-ness).
//!
//! Operators here are at most ~64 dimensional, so everything is stored
//! densely in row-major order. Hermitian eigendecompositions are delegated
//! to `nalgebra`.

pub mod exact;
pub mod json;

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use exact::{Cyclotomic, ExactKet};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Tolerance used for every "is this zero?" decision.
///
/// Magnitudes `<= zero_tol` are zero, magnitudes `>= ambiguity_factor *
/// zero_tol` are nonzero, and anything in between is reported as an
/// [`Error::Ambiguity`] instead of being silently classified.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TolerancePolicy {
    pub zero_tol: f64,
    pub ambiguity_factor: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy {
            zero_tol: 1e-9,
            ambiguity_factor: 100.0,
        }
    }
}

impl TolerancePolicy {
    pub fn new(zero_tol: f64, ambiguity_factor: f64) -> Result<Self> {
        if !(zero_tol > 0.0 && zero_tol.is_finite()) {
            return Err(Error::Invalid(format!("zero_tol must be positive, got {zero_tol}")));
        }
        if !(ambiguity_factor > 1.0 && ambiguity_factor.is_finite()) {
            return Err(Error::Invalid(format!(
                "ambiguity_factor must exceed 1, got {ambiguity_factor}"
            )));
        }
        Ok(TolerancePolicy {
            zero_tol,
            ambiguity_factor,
        })
    }

    pub fn upper(&self) -> f64 {
        self.zero_tol * self.ambiguity_factor
    }

    /// Classifies `value` as zero (`true`) or nonzero (`false`).
    pub fn is_zero(&self, value: f64, context: &str) -> Result<bool> {
        let mag = value.abs();
        if mag <= self.zero_tol {
            Ok(true)
        } else if mag >= self.upper() || !mag.is_finite() {
            Ok(false)
        } else {
            Err(Error::Ambiguity {
                context: context.to_string(),
                value,
                zero_tol: self.zero_tol,
                upper: self.upper(),
            })
        }
    }

    /// `value >= 0` up to tolerance, with the same guard band below zero.
    pub fn is_nonnegative(&self, value: f64, context: &str) -> Result<bool> {
        if value >= -self.zero_tol {
            Ok(true)
        } else {
            self.is_zero(value, context)
        }
    }
}

/// Dense complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl fmt::Debug for CMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        CMat { rows, cols, data }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::dim("matrix dimensions must be positive"));
        }
        if data.len() != rows * cols {
            return Err(Error::dim(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Invalid("matrix entries must be finite".into()));
        }
        Ok(CMat { rows, cols, data })
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = CMat::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// `|a><b|`
    pub fn outer(a: &[Complex64], b: &[Complex64]) -> Self {
        CMat::from_fn(a.len(), b.len(), |r, c| a[r] * b[c].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Side length of a square matrix, or a dimension error.
    pub fn square_dim(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::dim(format!("expected square matrix, got {}x{}", self.rows, self.cols)))
        }
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    /// Entry-wise complex conjugate.
    pub fn conj(&self) -> CMat {
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> CMat {
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> CMat {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |self - other|` over entries.
    pub fn max_abs_diff(&self, other: &CMat) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn kron(&self, other: &CMat) -> CMat {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        CMat::from_fn(rows, cols, |r, c| {
            self[(r / other.rows, c / other.cols)] * other[(r % other.rows, c % other.cols)]
        })
    }

    pub fn matmul(&self, other: &CMat) -> Result<CMat> {
        if self.cols != other.rows {
            return Err(Error::dim(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = CMat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == ZERO {
                    continue;
                }
                let orow = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[r * other.cols..(r + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.cols {
            return Err(Error::dim(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        Ok((0..self.rows)
            .map(|r| {
                self.data[r * self.cols..(r + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    pub fn try_add(&self, other: &CMat) -> Result<CMat> {
        self.check_same_shape(other)?;
        Ok(CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, other: &CMat) -> Result<CMat> {
        self.check_same_shape(other)?;
        Ok(CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn add_assign_checked(&mut self, other: &CMat) -> Result<()> {
        self.check_same_shape(other)?;
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        Ok(())
    }

    fn check_same_shape(&self, other: &CMat) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            Err(Error::dim(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )))
        } else {
            Ok(())
        }
    }

    /// `max |M - M^dagger|`
    pub fn hermitian_defect(&self) -> Result<f64> {
        let n = self.square_dim()?;
        let mut worst = 0.0f64;
        for r in 0..n {
            for c in r..n {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        Ok(worst)
    }

    pub fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.rows, self.cols, |r, c| self[(r, c)])
    }

    pub fn from_nalgebra(m: &DMatrix<Complex64>) -> CMat {
        CMat::from_fn(m.nrows(), m.ncols(), |r, c| m[(r, c)])
    }

    /// Eigen-decomposition of a Hermitian matrix. Eigenvalues ascending,
    /// eigenvectors as the matching columns.
    pub fn hermitian_eigen(&self) -> Result<(Vec<f64>, Vec<Vec<Complex64>>)> {
        let n = self.square_dim()?;
        // symmetrize to strip rounding noise before handing off
        let herm = CMat::from_fn(n, n, |r, c| (self[(r, c)] + self[(c, r)].conj()) * 0.5);
        let eig = herm.to_nalgebra().symmetric_eigen();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = order
            .iter()
            .map(|&i| eig.eigenvectors.column(i).iter().copied().collect())
            .collect();
        Ok((values, vectors))
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        let n = self.square_dim()?;
        let herm = CMat::from_fn(n, n, |r, c| (self[(r, c)] + self[(c, r)].conj()) * 0.5);
        let vals = herm.to_nalgebra().symmetric_eigenvalues();
        Ok(vals.iter().copied().fold(f64::INFINITY, f64::min))
    }

    pub fn max_eigenvalue(&self) -> Result<f64> {
        let n = self.square_dim()?;
        let herm = CMat::from_fn(n, n, |r, c| (self[(r, c)] + self[(c, r)].conj()) * 0.5);
        let vals = herm.to_nalgebra().symmetric_eigenvalues();
        Ok(vals.iter().copied().fold(f64::NEG_INFINITY, f64::max))
    }
}

impl Index<(usize, usize)> for CMat {
    type Output = Complex64;
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.cols + c]
    }
}

impl Add for &CMat {
    type Output = CMat;
    fn add(self, rhs: &CMat) -> CMat {
        self.try_add(rhs).expect("shape mismatch in CMat addition")
    }
}

impl Sub for &CMat {
    type Output = CMat;
    fn sub(self, rhs: &CMat) -> CMat {
        self.try_sub(rhs).expect("shape mismatch in CMat subtraction")
    }
}

impl Mul for &CMat {
    type Output = CMat;
    fn mul(self, rhs: &CMat) -> CMat {
        self.matmul(rhs).expect("shape mismatch in CMat product")
    }
}

/// Unit vector in `C^dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    amps: Vec<Complex64>,
}

impl Ket {
    /// Normalizes `amps`; fails on the zero vector or non-finite entries.
    pub fn normalized(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::dim("ket must have positive dimension"));
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Invalid("ket entries must be finite".into()));
        }
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return Err(Error::Invalid("cannot normalize the zero vector".into()));
        }
        Ok(Ket {
            amps: amps.into_iter().map(|z| z / norm).collect(),
        })
    }

    /// Accepts `amps` only if it already has unit norm within `tol`.
    pub fn new(amps: Vec<Complex64>, tol: &TolerancePolicy) -> Result<Self> {
        let norm_sq: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if !tol.is_zero(norm_sq - 1.0, "ket normalization")? {
            return Err(Error::Invalid(format!("ket has squared norm {norm_sq}, expected 1")));
        }
        Ket::normalized(amps)
    }

    pub fn from_real(v: &[f64]) -> Result<Self> {
        Ket::normalized(v.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut amps = vec![ZERO; dim];
        amps[i] = ONE;
        Ket { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    /// `<self|other>`
    pub fn inner(&self, other: &Ket) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn projector(&self) -> CMat {
        CMat::outer(&self.amps, &self.amps)
    }

    /// Multiplies by a global phase so the first coordinate with magnitude
    /// above `tol` is real and positive.
    pub fn phase_normalized(&self, tol: f64) -> Ket {
        match self.amps.iter().find(|z| z.norm() > tol) {
            Some(z) => {
                let phase = z.conj() / z.norm();
                Ket {
                    amps: self.amps.iter().map(|a| a * phase).collect(),
                }
            }
            None => self.clone(),
        }
    }

    pub fn first_nonzero(&self, tol: f64) -> Option<usize> {
        self.amps.iter().position(|z| z.norm() > tol)
    }
}

/// `true` iff `M` is Hermitian and idempotent within `zero_tol`.
pub fn is_projector(m: &CMat, tol: &TolerancePolicy) -> Result<bool> {
    m.square_dim()?;
    let herm = m.hermitian_defect()?;
    if !tol.is_zero(herm, "projector hermiticity")? {
        return Ok(false);
    }
    let idem = (m * m).max_abs_diff(m)?;
    tol.is_zero(idem, "projector idempotence")
}

/// Hilbert-Schmidt inner product `Tr(A^dagger B)`.
pub fn hs_inner(a: &CMat, b: &CMat) -> Result<Complex64> {
    let n = a.square_dim()?;
    if b.rows() != n || b.cols() != n {
        return Err(Error::dim(format!("hs_inner of {n}x{n} and {}x{}", b.rows(), b.cols())));
    }
    Ok(a.data().iter().zip(b.data()).map(|(x, y)| x.conj() * y).sum())
}

/// Decides `Tr(A B) = 0` for Hermitian `A`, `B` under the tolerance guard.
pub fn trace_orthogonal(a: &CMat, b: &CMat, tol: &TolerancePolicy) -> Result<bool> {
    let ip = hs_inner(a, b)?;
    tol.is_zero(ip.norm(), "trace orthogonality")
}

/// Whether the operators sum to the identity within `zero_tol`. The empty
/// list never does.
pub fn sums_to_identity(ops: &[CMat], tol: &TolerancePolicy) -> Result<bool> {
    let Some(first) = ops.first() else {
        return Ok(false);
    };
    let n = first.square_dim()?;
    let mut sum = CMat::zeros(n, n);
    for op in ops {
        sum.add_assign_checked(op)?;
    }
    let dev = sum.max_abs_diff(&CMat::identity(n))?;
    tol.is_zero(dev, "completeness")
}

/// Orthonormal basis of the range of a projector.
///
/// Built by pivoted Gram-Schmidt over the columns of `P` (largest residual
/// first, lowest column index on ties), each vector phase-normalized and
/// the result sorted by first nonzero coordinate then lexicographically.
/// The output depends only on `P`.
pub fn support_basis(p: &CMat, tol: &TolerancePolicy) -> Result<Vec<Ket>> {
    if !is_projector(p, tol)? {
        return Err(Error::NotProjector("support_basis requires a projector".into()));
    }
    let n = p.square_dim()?;
    let rank_f = p.trace().re;
    let rank = rank_f.round() as usize;
    if !tol.is_zero(rank_f - rank as f64, "projector rank")? {
        return Err(Error::Integrity(format!("projector trace {rank_f} is not an integer")));
    }
    let mut residuals: Vec<Vec<Complex64>> = (0..n).map(|c| (0..n).map(|r| p[(r, c)]).collect()).collect();
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(rank);
    for _ in 0..rank {
        let (best, best_norm) = residuals
            .iter()
            .enumerate()
            .map(|(i, v)| (i, v.iter().map(|z| z.norm_sqr()).sum::<f64>()))
            .fold((0, -1.0), |acc, (i, nrm)| if nrm > acc.1 + 1e-12 { (i, nrm) } else { acc });
        if best_norm <= 1e-12 {
            return Err(Error::Integrity("projector range smaller than its trace".into()));
        }
        let mut v = residuals[best].clone();
        // second pass of orthogonalization for stability
        for b in &basis {
            let c: Complex64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= c * bi;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|z| *z /= norm);
        for r in residuals.iter_mut() {
            let c: Complex64 = v.iter().zip(r.iter()).map(|(x, y)| x.conj() * y).sum();
            for (ri, vi) in r.iter_mut().zip(&v) {
                *ri -= c * vi;
            }
        }
        basis.push(v);
    }
    let cut = tol.zero_tol.sqrt();
    let mut kets: Vec<Ket> = basis
        .into_iter()
        .map(|v| Ket { amps: v }.phase_normalized(cut))
        .collect();
    kets.sort_by(|a, b| {
        let fa = a.first_nonzero(cut).unwrap_or(n);
        let fb = b.first_nonzero(cut).unwrap_or(n);
        fa.cmp(&fb).then_with(|| lex_cmp(a.amps(), b.amps()))
    });
    Ok(kets)
}

fn lex_cmp(a: &[Complex64], b: &[Complex64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if o != std::cmp::Ordering::Equal {
            return o;
        }
    }
    std::cmp::Ordering::Equal
}

/// Canonical maximally entangled state `(1/sqrt n) sum_i |i>|i>` as a vector
/// in `C^n (x) C^n`, first factor major.
pub fn max_entangled_state(n: usize) -> Vec<Complex64> {
    let mut psi = vec![ZERO; n * n];
    let amp = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
    for i in 0..n {
        psi[i * n + i] = amp;
    }
    psi
}

/// `Tr_A((E (x) I) |psi><psi|)` for an arbitrary pure state on `C^d (x) C^d`.
pub fn partial_trace_pure(e: &CMat, psi: &[Complex64], d: usize) -> Result<CMat> {
    if e.rows() != d || e.cols() != d {
        return Err(Error::dim(format!("operator is {}x{}, state dim {d}", e.rows(), e.cols())));
    }
    if psi.len() != d * d {
        return Err(Error::dim(format!("state has {} amplitudes, expected {}", psi.len(), d * d)));
    }
    // phi = (E (x) I) psi, phi[(k, a)] = sum_l E[k, l] psi[(l, a)]
    let mut phi = vec![ZERO; d * d];
    for k in 0..d {
        for l in 0..d {
            let ekl = e[(k, l)];
            if ekl == ZERO {
                continue;
            }
            for a in 0..d {
                phi[k * d + a] += ekl * psi[l * d + a];
            }
        }
    }
    // (Tr_A |phi><psi|)[a, b] = sum_k phi[(k, a)] conj(psi[(k, b)])
    Ok(CMat::from_fn(d, d, |a, b| {
        (0..d).map(|k| phi[k * d + a] * psi[k * d + b].conj()).sum()
    }))
}

/// Bob's unnormalized conditional state `Tr_A((E (x) I) |Psi><Psi|)` for the
/// canonical maximally entangled state of local dimension `state_dim`.
/// Equals `E^T / state_dim`.
pub fn bob_residual(e: &CMat, state_dim: usize) -> Result<CMat> {
    partial_trace_pure(e, &max_entangled_state(state_dim), state_dim)
}

/// `A <= B` in the Loewner order: the smallest eigenvalue of `B - A` is at
/// least `-zero_tol`.
pub fn psd_leq(a: &CMat, b: &CMat, tol: &TolerancePolicy) -> Result<bool> {
    for (name, m) in [("left", a), ("right", b)] {
        let defect = m.hermitian_defect()?;
        if !tol.is_zero(defect, "psd_leq hermiticity")? {
            return Err(Error::NotHermitian(format!("{name} operand (defect {defect:e})")));
        }
    }
    let diff = b.try_sub(a)?;
    let lam = diff.min_eigenvalue()?;
    tol.is_nonnegative(lam, "psd_leq minimum eigenvalue")
}

/// Matrix equality within `zero_tol`, guarded.
pub fn approx_eq(a: &CMat, b: &CMat, tol: &TolerancePolicy) -> Result<bool> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Ok(false);
    }
    let d = a.max_abs_diff(b)?;
    tol.is_zero(d, "matrix equality")
}
