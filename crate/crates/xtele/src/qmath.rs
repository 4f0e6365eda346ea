//! Dense complex linear algebra for the 2x2/3x3/4x4/8x8 matrices this crate
//! works with: products, Kronecker products, Hermitian eigenvalues via cyclic
//! Jacobi, trace norm, pure-state fidelity, and partial traces.
//!
//! Conventions (shared by every module): matrices are row-major, indices are
//! 0-based in the computational basis |00>, |01>, |10>, |11>.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// `‖A − A†‖_max` tolerance for Hermiticity checks.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Eigenvalues in `[-PSD_TOL, 0)` are treated as zero; anything below fails
/// positive-semidefiniteness.
pub const PSD_TOL: f64 = 1e-10;
/// Trace-1 tolerance for density-matrix checks.
pub const TRACE_TOL: f64 = 1e-10;

const JACOBI_OFF_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Dense complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![Complex64::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = CMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds an n x n matrix from real entries given row by row.
    pub fn from_real(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        CMatrix::from_fn(r, c, |i, j| Complex64::new(rows[i][j], 0.0))
    }

    /// The Pauli matrix sigma^k for k in 1..=3, exactly the standard entries.
    pub fn pauli(k: usize) -> Self {
        let (a, b, c, d) = match k {
            1 => (
                Complex64::ZERO,
                Complex64::ONE,
                Complex64::ONE,
                Complex64::ZERO,
            ),
            2 => (
                Complex64::ZERO,
                Complex64::new(0.0, -1.0),
                Complex64::new(0.0, 1.0),
                Complex64::ZERO,
            ),
            3 => (
                Complex64::ONE,
                Complex64::ZERO,
                Complex64::ZERO,
                -Complex64::ONE,
            ),
            _ => panic!("pauli index must be 1, 2 or 3"),
        };
        CMatrix {
            rows: 2,
            cols: 2,
            data: vec![a, b, c, d],
        }
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

    pub fn adjoint(&self) -> Self {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn conj(&self) -> Self {
        CMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn add(&self, other: &CMatrix) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(x, y)| x + y)
                .collect(),
        }
    }

    pub fn sub(&self, other: &CMatrix) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(x, y)| x - y)
                .collect(),
        }
    }

    pub fn mul(&self, other: &CMatrix) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Largest |entry| of `A - A†`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.re.is_finite() && x.im.is_finite())
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Kronecker product: `(A ⊗ B)[(i*rB+k),(j*cB+l)] = A[i,j] * B[k,l]`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(a.rows * b.rows, a.cols * b.cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let aij = a[(i, j)];
            if aij == Complex64::ZERO {
                continue;
            }
            for k in 0..b.rows {
                for l in 0..b.cols {
                    out[(i * b.rows + k, j * b.cols + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Pure qubit given by Bloch angles: cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PureQubit {
    pub theta: f64,
    pub phi: f64,
}

impl PureQubit {
    pub fn new(theta: f64, phi: f64) -> Self {
        assert!(theta.is_finite() && phi.is_finite(), "Bloch angles must be finite");
        PureQubit {
            theta: theta.clamp(0.0, std::f64::consts::PI),
            phi: phi.rem_euclid(2.0 * std::f64::consts::PI),
        }
    }

    pub fn amplitudes(&self) -> [Complex64; 2] {
        let h = self.theta / 2.0;
        [
            Complex64::new(h.cos(), 0.0),
            Complex64::from_polar(h.sin(), self.phi),
        ]
    }

    pub fn projector(&self) -> CMatrix {
        let a = self.amplitudes();
        CMatrix::from_fn(2, 2, |i, j| a[i] * a[j].conj())
    }

    pub fn bloch(&self) -> [f64; 3] {
        [
            self.theta.sin() * self.phi.cos(),
            self.theta.sin() * self.phi.sin(),
            self.theta.cos(),
        ]
    }

    /// The six Bloch-axis states (+z, -z, +x, -x, +y, -y).
    pub fn octahedral() -> [PureQubit; 6] {
        use std::f64::consts::{FRAC_PI_2, PI};
        [
            PureQubit::new(0.0, 0.0),
            PureQubit::new(PI, 0.0),
            PureQubit::new(FRAC_PI_2, 0.0),
            PureQubit::new(FRAC_PI_2, PI),
            PureQubit::new(FRAC_PI_2, FRAC_PI_2),
            PureQubit::new(FRAC_PI_2, 3.0 * FRAC_PI_2),
        ]
    }
}

/// Cyclic Jacobi on a real symmetric matrix (row-major, n x n). Returns the
/// unsorted diagonal; when `vectors` is given, its columns accumulate the
/// eigenvectors of the same ordering.
fn jacobi_sym(a: &mut [f64], n: usize, mut vectors: Option<&mut [f64]>) -> Vec<f64> {
    if let Some(v) = vectors.as_deref_mut() {
        v.fill(0.0);
        for i in 0..n {
            v[i * n + i] = 1.0;
        }
    }
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += 2.0 * a[p * n + q] * a[p * n + q];
            }
        }
        if off.sqrt() <= JACOBI_OFF_TOL {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // A <- J^T A J for the (p,q) rotation
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                if let Some(v) = vectors.as_deref_mut() {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = c * vkp - s * vkq;
                        v[k * n + q] = s * vkp + c * vkq;
                    }
                }
            }
        }
    }
    (0..n).map(|i| a[i * n + i]).collect()
}

/// Real-symmetric embedding `[[Re, -Im], [Im, Re]]` of a complex matrix.
fn embed_real(m: &CMatrix) -> (Vec<f64>, usize) {
    let n = m.rows();
    let dim = 2 * n;
    let mut e = vec![0.0; dim * dim];
    for i in 0..n {
        for j in 0..n {
            let v = m[(i, j)];
            e[i * dim + j] = v.re;
            e[i * dim + (j + n)] = -v.im;
            e[(i + n) * dim + j] = v.im;
            e[(i + n) * dim + (j + n)] = v.re;
        }
    }
    (e, dim)
}

/// All eigenvalues of a Hermitian matrix, ascending.
///
/// The matrix is rejected when `‖A − A†‖_max` exceeds 1e-10. Complex input is
/// diagonalized through its doubled real-symmetric embedding; adjacent pairs
/// of the sorted doubled spectrum are averaged back into single eigenvalues.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(Error::NotHermitian { max_dev: f64::NAN });
    }
    let dev = m.hermiticity_deviation();
    if dev > HERMITICITY_TOL {
        return Err(Error::NotHermitian { max_dev: dev });
    }
    let n = m.rows();
    if m.data.iter().all(|x| x.im == 0.0) {
        let mut a: Vec<f64> = m.data.iter().map(|x| x.re).collect();
        // symmetrize away sub-tolerance asymmetry before iterating
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = 0.5 * (a[i * n + j] + a[j * n + i]);
                a[i * n + j] = avg;
                a[j * n + i] = avg;
            }
        }
        let mut vals = jacobi_sym(&mut a, n, None);
        vals.sort_by(|x, y| x.partial_cmp(y).unwrap());
        return Ok(vals);
    }
    let (mut e, dim) = embed_real(m);
    for i in 0..dim {
        for j in (i + 1)..dim {
            let avg = 0.5 * (e[i * dim + j] + e[j * dim + i]);
            e[i * dim + j] = avg;
            e[j * dim + i] = avg;
        }
    }
    let mut vals = jacobi_sym(&mut e, dim, None);
    vals.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok((0..n).map(|i| 0.5 * (vals[2 * i] + vals[2 * i + 1])).collect())
}

/// Unique PSD square root of a PSD Hermitian matrix. Eigenvalues within
/// `PSD_TOL` below zero are clamped to zero.
pub(crate) fn psd_sqrt(m: &CMatrix) -> Result<CMatrix> {
    let dev = m.hermiticity_deviation();
    if dev > HERMITICITY_TOL {
        return Err(Error::NotHermitian { max_dev: dev });
    }
    let n = m.rows();
    let (mut e, dim) = embed_real(m);
    for i in 0..dim {
        for j in (i + 1)..dim {
            let avg = 0.5 * (e[i * dim + j] + e[j * dim + i]);
            e[i * dim + j] = avg;
            e[j * dim + i] = avg;
        }
    }
    let mut vecs = vec![0.0; dim * dim];
    let vals = jacobi_sym(&mut e, dim, Some(&mut vecs));
    for &v in &vals {
        if v < -PSD_TOL {
            return Err(Error::InvalidDensity(format!(
                "matrix is not PSD: eigenvalue {v:.3e}"
            )));
        }
    }
    // sqrt(E) = Q sqrt(D) Q^T stays inside the embedding's image, so the
    // complex root can be read off the first block column.
    let roots: Vec<f64> = vals.iter().map(|&v| v.max(0.0).sqrt()).collect();
    let mut out = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut re = 0.0;
            let mut im = 0.0;
            for k in 0..dim {
                let w = roots[k] * vecs[j * dim + k];
                re += vecs[i * dim + k] * w;
                im += vecs[(i + n) * dim + k] * w;
            }
            out[(i, j)] = Complex64::new(re, im);
        }
    }
    Ok(out)
}

/// Singular values of a complex matrix, descending, via the Hermitian
/// embedding `[[0, A], [A†, 0]]` whose spectrum is `{±σ_i}`.
pub(crate) fn singular_values(m: &CMatrix) -> Vec<f64> {
    let n = m.rows();
    debug_assert!(m.is_square());
    let mut h = CMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            h[(i, j + n)] = m[(i, j)];
            h[(j + n, i)] = m[(i, j)].conj();
        }
    }
    let vals = hermitian_eigenvalues(&h).expect("embedding is Hermitian by construction");
    let mut svals: Vec<f64> = vals[n..].iter().rev().map(|&v| v.max(0.0)).collect();
    svals.sort_by(|x, y| y.partial_cmp(x).unwrap());
    svals
}

/// Trace norm `tr sqrt(T† T)`: the sum of square roots of the eigenvalues of
/// `T† T`.
pub fn trace_norm(t: &CMatrix) -> Result<f64> {
    let tt = t.adjoint().mul(t);
    let vals = hermitian_eigenvalues(&tt)?;
    Ok(vals.iter().map(|&u| u.max(0.0).sqrt()).sum())
}

fn check_density(rho: &CMatrix, dim: usize) -> Result<()> {
    if rho.rows() != dim || rho.cols() != dim {
        return Err(Error::InvalidDensity(format!(
            "expected {dim}x{dim}, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    let dev = rho.hermiticity_deviation();
    if dev > HERMITICITY_TOL {
        return Err(Error::InvalidDensity(format!(
            "not Hermitian: deviation {dev:.3e}"
        )));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
        return Err(Error::InvalidDensity(format!("trace {tr} is not 1")));
    }
    let vals = hermitian_eigenvalues(rho)?;
    if let Some(&min) = vals.first() {
        if min < -PSD_TOL {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
    }
    Ok(())
}

/// Validates a 1-qubit density matrix and returns `<psi|rho|psi>`, clamped to
/// [0,1] when within 1e-12 of either boundary.
pub fn pure_fidelity(psi: &PureQubit, rho: &CMatrix) -> Result<f64> {
    check_density(rho, 2)?;
    Ok(pure_fidelity_raw(psi, rho))
}

/// `<psi|rho|psi>` without density validation; for states valid by construction.
pub(crate) fn pure_fidelity_raw(psi: &PureQubit, rho: &CMatrix) -> f64 {
    let a = psi.amplitudes();
    let mut acc = Complex64::ZERO;
    for i in 0..2 {
        for j in 0..2 {
            acc += a[i].conj() * rho[(i, j)] * a[j];
        }
    }
    let f = acc.re;
    if (-1e-12..0.0).contains(&f) {
        return 0.0;
    }
    if f > 1.0 && f <= 1.0 + 1e-12 {
        return 1.0;
    }
    f
}

/// Partial trace over the qubits listed in `trace_out` (0 = leftmost tensor
/// factor) of a 4x4 or 8x8 density matrix.
pub fn partial_trace(rho: &CMatrix, trace_out: &[usize]) -> Result<CMatrix> {
    let dim = rho.rows();
    if !(rho.is_square() && (dim == 4 || dim == 8)) {
        return Err(Error::BadSubsystemSpec(format!(
            "expected a square 4x4 or 8x8 matrix, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    let nq = dim.trailing_zeros() as usize;
    let mut seen = [false; 3];
    for &q in trace_out {
        if q >= nq {
            return Err(Error::BadSubsystemSpec(format!(
                "qubit index {q} out of range for {nq} qubits"
            )));
        }
        if seen[q] {
            return Err(Error::BadSubsystemSpec(format!("duplicate qubit index {q}")));
        }
        seen[q] = true;
    }
    check_density(rho, dim)?;
    Ok(partial_trace_raw(rho, trace_out))
}

/// Partial trace without validity checks; for states valid by construction.
pub(crate) fn partial_trace_raw(rho: &CMatrix, trace_out: &[usize]) -> CMatrix {
    let dim = rho.rows();
    let nq = dim.trailing_zeros() as usize;
    let keep: Vec<usize> = (0..nq).filter(|q| !trace_out.contains(q)).collect();
    let kd = 1usize << keep.len();
    let td = 1usize << trace_out.len();
    // qubit q occupies bit (nq-1-q) of the row index
    let place = |bits_keep: usize, bits_tr: usize| -> usize {
        let mut idx = 0usize;
        for (pos, &q) in keep.iter().enumerate() {
            let bit = (bits_keep >> (keep.len() - 1 - pos)) & 1;
            idx |= bit << (nq - 1 - q);
        }
        for (pos, &q) in trace_out.iter().enumerate() {
            let bit = (bits_tr >> (trace_out.len() - 1 - pos)) & 1;
            idx |= bit << (nq - 1 - q);
        }
        idx
    };
    CMatrix::from_fn(kd, kd, |i, j| {
        (0..td).map(|t| rho[(place(i, t), place(j, t))]).sum()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn pauli_matrices_are_exact() {
        let x = CMatrix::pauli(1);
        assert_eq!(x[(0, 1)], Complex64::ONE);
        assert_eq!(x[(1, 0)], Complex64::ONE);
        assert_eq!(x[(0, 0)], Complex64::ZERO);
        let y = CMatrix::pauli(2);
        assert_eq!(y[(0, 1)], Complex64::new(0.0, -1.0));
        assert_eq!(y[(1, 0)], Complex64::new(0.0, 1.0));
        let z = CMatrix::pauli(3);
        assert_eq!(z[(0, 0)], Complex64::ONE);
        assert_eq!(z[(1, 1)], -Complex64::ONE);
        assert_eq!(CMatrix::identity(2)[(0, 0)], Complex64::ONE);
    }

    #[test]
    fn kron_identity_and_diagonal() {
        let i2 = CMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), CMatrix::identity(4));

        let zz = kron(&CMatrix::pauli(3), &CMatrix::pauli(3));
        for (i, want) in [1.0, -1.0, -1.0, 1.0].into_iter().enumerate() {
            assert_eq!(zz[(i, i)], Complex64::new(want, 0.0));
        }
    }

    #[test]
    fn kron_xx_flips_both_qubits() {
        let xx = kron(&CMatrix::pauli(1), &CMatrix::pauli(1));
        // |00> -> |11>
        let mut ket = CMatrix::zeros(4, 1);
        ket[(0, 0)] = Complex64::ONE;
        let out = xx.mul(&ket);
        assert_eq!(out[(3, 0)], Complex64::ONE);
        assert_eq!(out[(0, 0)], Complex64::ZERO);
    }

    #[test]
    fn eigenvalues_of_diagonal_and_pauli() {
        let d = CMatrix::from_real(&[&[1.0, 0.0, 0.0], &[0.0, 2.0, 0.0], &[0.0, 0.0, 3.0]]);
        let vals = hermitian_eigenvalues(&d).unwrap();
        for (v, want) in vals.iter().zip([1.0, 2.0, 3.0]) {
            assert_close(*v, want, 1e-12);
        }
        let vals = hermitian_eigenvalues(&CMatrix::pauli(1)).unwrap();
        assert_close(vals[0], -1.0, 1e-12);
        assert_close(vals[1], 1.0, 1e-12);
        // complex Hermitian path
        let vals = hermitian_eigenvalues(&CMatrix::pauli(2)).unwrap();
        assert_close(vals[0], -1.0, 1e-12);
        assert_close(vals[1], 1.0, 1e-12);
    }

    /// Eigenvalues must reproduce the characteristic polynomial: the power
    /// sums of the spectrum equal the traces of matrix powers.
    #[test]
    fn characteristic_power_sums_match() {
        let h3 = {
            let g = CMatrix::from_fn(3, 3, |i, j| {
                Complex64::new((i + 2 * j) as f64 * 0.3 - 0.7, (i * j) as f64 * 0.2 - 0.1)
            });
            g.add(&g.adjoint()).scale(Complex64::new(0.5, 0.0))
        };
        let h4 = {
            let g = CMatrix::from_fn(4, 4, |i, j| {
                Complex64::new(((i * 5 + j * 3) % 7) as f64 * 0.2 - 0.5, (i as f64 - j as f64) * 0.15)
            });
            g.add(&g.adjoint()).scale(Complex64::new(0.5, 0.0))
        };
        for h in [h3, h4] {
            let n = h.rows();
            let vals = hermitian_eigenvalues(&h).unwrap();
            let mut power = CMatrix::identity(n);
            for k in 1..=n {
                power = power.mul(&h);
                let from_matrix = power.trace().re;
                let from_spectrum: f64 = vals.iter().map(|v| v.powi(k as i32)).sum();
                assert_close(from_spectrum, from_matrix, 1e-9);
            }
        }
    }

    #[test]
    fn non_hermitian_is_rejected() {
        let mut m = CMatrix::identity(2);
        m[(0, 1)] = Complex64::new(1.0, 0.0);
        match hermitian_eigenvalues(&m) {
            Err(Error::NotHermitian { .. }) => {}
            other => panic!("expected NotHermitian, got {other:?}"),
        }
    }

    /// t_nm = tr(rho sigma^n x sigma^m) computed directly for |Phi+>.
    #[test]
    fn bell_correlation_eigenvalues_are_unity() {
        let inv = Complex64::new(0.5, 0.0);
        let mut rho = CMatrix::zeros(4, 4);
        rho[(0, 0)] = inv;
        rho[(0, 3)] = inv;
        rho[(3, 0)] = inv;
        rho[(3, 3)] = inv;
        let mut t = CMatrix::zeros(3, 3);
        for n in 1..=3 {
            for m in 1..=3 {
                let op = kron(&CMatrix::pauli(n), &CMatrix::pauli(m));
                t[(n - 1, m - 1)] = Complex64::new(rho.mul(&op).trace().re, 0.0);
            }
        }
        assert_close(t[(0, 0)].re, 1.0, 1e-12);
        assert_close(t[(1, 1)].re, -1.0, 1e-12);
        assert_close(t[(2, 2)].re, 1.0, 1e-12);
        let tt = t.adjoint().mul(&t);
        let vals = hermitian_eigenvalues(&tt).unwrap();
        for v in vals {
            assert_close(v, 1.0, 1e-10);
        }
    }

    #[test]
    fn trace_norm_fixtures() {
        assert_close(trace_norm(&CMatrix::zeros(3, 3)).unwrap(), 0.0, 1e-15);
        let t = CMatrix::from_real(&[&[1.0, 0.0, 0.0], &[0.0, -1.0, 0.0], &[0.0, 0.0, 1.0]]);
        assert_close(trace_norm(&t).unwrap(), 3.0, 1e-12);
        // Werner p=0.8 correlation matrix is diag(-0.8, -0.8, -0.8)
        let t = CMatrix::from_real(&[
            &[-0.8, 0.0, 0.0],
            &[0.0, -0.8, 0.0],
            &[0.0, 0.0, -0.8],
        ]);
        assert_close(trace_norm(&t).unwrap(), 2.4, 1e-12);
    }

    #[test]
    fn pure_fidelity_fixtures() {
        let zero = PureQubit::new(0.0, 0.0);
        let mut proj0 = CMatrix::zeros(2, 2);
        proj0[(0, 0)] = Complex64::ONE;
        assert_close(pure_fidelity(&zero, &proj0).unwrap(), 1.0, 1e-15);

        let mixed = CMatrix::identity(2).scale(Complex64::new(0.5, 0.0));
        assert_close(pure_fidelity(&zero, &mixed).unwrap(), 0.5, 1e-15);

        let plus = PureQubit::new(std::f64::consts::FRAC_PI_2, 0.0);
        assert_close(pure_fidelity(&plus, &proj0).unwrap(), 0.5, 1e-15);
    }

    #[test]
    fn pure_fidelity_rejects_invalid_density() {
        let zero = PureQubit::new(0.0, 0.0);
        let not_density = CMatrix::identity(2); // trace 2
        assert!(matches!(
            pure_fidelity(&zero, &not_density),
            Err(Error::InvalidDensity(_))
        ));
    }

    fn bell_phi_plus() -> CMatrix {
        let inv = Complex64::new(0.5, 0.0);
        let mut rho = CMatrix::zeros(4, 4);
        rho[(0, 0)] = inv;
        rho[(0, 3)] = inv;
        rho[(3, 0)] = inv;
        rho[(3, 3)] = inv;
        rho
    }

    #[test]
    fn partial_trace_of_bell_is_maximally_mixed() {
        let red = partial_trace(&bell_phi_plus(), &[1]).unwrap();
        assert_close(red[(0, 0)].re, 0.5, 1e-12);
        assert_close(red[(1, 1)].re, 0.5, 1e-12);
        assert_close(red[(0, 1)].norm(), 0.0, 1e-12);
    }

    #[test]
    fn partial_trace_of_product_recovers_factor() {
        let psi = PureQubit::new(1.0, 0.5);
        let rho_a = psi.projector();
        let rho_b = CMatrix::identity(2).scale(Complex64::new(0.5, 0.0));
        let prod = kron(&rho_a, &rho_b);
        let red = partial_trace(&prod, &[1]).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((red[(i, j)] - rho_a[(i, j)]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn partial_trace_of_three_qubits() {
        let mut proj0 = CMatrix::zeros(2, 2);
        proj0[(0, 0)] = Complex64::ONE;
        let rho = kron(&proj0, &bell_phi_plus());
        let red = partial_trace(&rho, &[0, 1]).unwrap();
        assert_close(red[(0, 0)].re, 0.5, 1e-12);
        assert_close(red[(1, 1)].re, 0.5, 1e-12);
        // tracing everything equals the full trace
        let all = partial_trace_raw(&rho, &[0, 1, 2]);
        assert_close(all[(0, 0)].re, 1.0, 1e-12);
    }

    #[test]
    fn partial_trace_rejects_bad_spec() {
        assert!(matches!(
            partial_trace(&bell_phi_plus(), &[2]),
            Err(Error::BadSubsystemSpec(_))
        ));
        assert!(matches!(
            partial_trace(&bell_phi_plus(), &[0, 0]),
            Err(Error::BadSubsystemSpec(_))
        ));
        assert!(matches!(
            partial_trace(&CMatrix::identity(2), &[0]),
            Err(Error::BadSubsystemSpec(_))
        ));
    }

    #[test]
    fn psd_sqrt_squares_back() {
        // a random-ish PSD Hermitian matrix: G G† normalized
        let g = CMatrix::from_fn(4, 4, |i, j| {
            Complex64::new(((i * 7 + j * 3) % 5) as f64 - 2.0, ((i + 2 * j) % 3) as f64 - 1.0)
        });
        let h = g.mul(&g.adjoint());
        let tr = h.trace().re;
        let h = h.scale(Complex64::new(1.0 / tr, 0.0));
        let r = psd_sqrt(&h).unwrap();
        let back = r.mul(&r);
        assert!(back.sub(&h).max_abs() < 1e-10);
        assert!(r.hermiticity_deviation() < 1e-10);
    }

    #[test]
    fn singular_values_match_eigen_route() {
        let t = CMatrix::from_real(&[&[0.3, -0.1, 0.0], &[0.7, 0.2, -0.4], &[0.0, 0.5, 0.1]]);
        let s = singular_values(&t);
        let direct: f64 = s.iter().sum();
        assert_close(direct, trace_norm(&t).unwrap(), 1e-10);
    }
}
