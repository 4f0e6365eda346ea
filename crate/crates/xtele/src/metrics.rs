//! Closed-form quantities for two-qubit states: the spin correlation matrix
//! and its invariants N, M, B_max; the generalized-Bell overlaps and fully
//! entangled fraction; the maximal average teleportation fidelities F1 (any
//! unitary correction) and F2 (identity-or-Pauli corrections) with their gap;
//! and the concurrence.

use crate::qmath::{self, CMatrix};
use crate::states::{bell_ket, AnyState, DenseState, XState};
use num_complex::Complex64;
use serde::Serialize;
use std::sync::OnceLock;

/// Spin correlation data: `t[n][m] = tr(rho sigma^{n+1} x sigma^{m+1})`,
/// the eigenvalues `u` of `T^T T` in descending order, and the derived
/// invariants `N = sum sqrt(u_i)`, `M = u_1 + u_2`, `B_max = 2 sqrt(M)`.
#[derive(Clone, Debug, Serialize)]
pub struct CorrelationReport {
    pub t: [[f64; 3]; 3],
    pub u: [f64; 3],
    pub n_value: f64,
    pub m_value: f64,
    pub b_max: f64,
}

/// Fidelity data: the four generalized-Bell overlaps `chi`, the fully
/// entangled fraction `fef = max chi`, `f1 = 1/2 + N/6`,
/// `f2 = 1/3 + 2 fef / 3`, their gap, and the concurrence.
#[derive(Clone, Debug, Serialize)]
pub struct FidelityReport {
    pub chi: [f64; 4],
    pub fef: f64,
    pub f1: f64,
    pub f2: f64,
    pub gap: f64,
    pub concurrence: f64,
}

/// The three predicates behind the ensemble fractions. All comparisons are
/// strict, with no tolerance slack: boundary states classify as negative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClassifyFlags {
    pub entangled: bool,
    pub violates_chsh: bool,
    pub nonclassical_teleport: bool,
}

fn sigma_kron_table() -> &'static [[CMatrix; 3]; 3] {
    static TABLE: OnceLock<[[CMatrix; 3]; 3]> = OnceLock::new();
    TABLE.get_or_init(|| {
        std::array::from_fn(|n| {
            std::array::from_fn(|m| qmath::kron(&CMatrix::pauli(n + 1), &CMatrix::pauli(m + 1)))
        })
    })
}

/// The 3x3 spin correlation matrix of a density matrix, entry by entry from
/// `tr(rho sigma^n x sigma^m)`.
pub fn correlation_matrix(rho: &CMatrix) -> [[f64; 3]; 3] {
    let table = sigma_kron_table();
    let mut t = [[0.0; 3]; 3];
    for (n, row) in table.iter().enumerate() {
        for (m, op) in row.iter().enumerate() {
            let mut acc = Complex64::ZERO;
            for i in 0..4 {
                for j in 0..4 {
                    acc += rho[(i, j)] * op[(j, i)];
                }
            }
            t[n][m] = acc.re;
        }
    }
    t
}

/// Correlation report through the eigensolver path: T from traces, u from the
/// Hermitian eigensolver applied to `T^T T`.
pub fn correlation_report(state: &AnyState) -> CorrelationReport {
    let dense = state.dense();
    let t = correlation_matrix(dense.matrix());
    let tm = CMatrix::from_real(&[&t[0], &t[1], &t[2]]);
    let mut u_vec = qmath::hermitian_eigenvalues(&tm.adjoint().mul(&tm))
        .expect("T^T T is symmetric by construction");
    u_vec.reverse();
    let u = [u_vec[0].max(0.0), u_vec[1].max(0.0), u_vec[2].max(0.0)];
    let n_value = u.iter().map(|&x| x.sqrt()).sum();
    let m_value = u[0] + u[1];
    CorrelationReport {
        t,
        u,
        n_value,
        m_value,
        b_max: 2.0 * m_value.sqrt(),
    }
}

/// Closed-form eigenvalues of `T^T T` for an X state:
/// `u_{1,2} = 4(|w| ± |z|)^2`, `u_3 = (a+d-b-c)^2`, descending.
pub fn u_closed_form(x: &XState) -> [f64; 3] {
    let w = x.w_abs();
    let z = x.z_abs();
    let u1 = 4.0 * (w + z) * (w + z);
    let u2 = 4.0 * (w - z) * (w - z);
    let u3 = {
        let s = x.a() + x.d() - x.b() - x.c();
        s * s
    };
    let mut u = [u1, u2, u3];
    u.sort_by(|p, q| q.partial_cmp(p).unwrap());
    u
}

/// Closed-form trace norm of the correlation matrix:
/// `N = 2(|w|+|z|) + 2||w|-|z|| + |a+d-b-c|`.
pub fn n_closed_form(x: &XState) -> f64 {
    let w = x.w_abs();
    let z = x.z_abs();
    2.0 * (w + z) + 2.0 * (w - z).abs() + (x.a() + x.d() - x.b() - x.c()).abs()
}

/// Closed-form `M = max{ 8(|w|^2+|z|^2), 4(|w|+|z|)^2 + (a+d-b-c)^2 }`.
pub fn m_closed_form(x: &XState) -> f64 {
    let w2 = x.w().norm_sqr();
    let z2 = x.z().norm_sqr();
    let wz = x.w_abs() + x.z_abs();
    let s = x.a() + x.d() - x.b() - x.c();
    (8.0 * (w2 + z2)).max(4.0 * wz * wz + s * s)
}

/// The four generalized-Bell overlaps of an X state at the matched phases
/// alpha = arg(w), beta = arg(z):
/// `chi_{0,3} = (a+d ± 2|w|)/2`, `chi_{1,2} = (b+c ± 2|z|)/2`.
pub fn chi_closed_form(x: &XState) -> [f64; 4] {
    let ad = x.a() + x.d();
    let bc = x.b() + x.c();
    let w = x.w_abs();
    let z = x.z_abs();
    [
        (ad + 2.0 * w) / 2.0,
        (bc + 2.0 * z) / 2.0,
        (bc - 2.0 * z) / 2.0,
        (ad - 2.0 * w) / 2.0,
    ]
}

/// Signed separability margin: positive iff the state is entangled, zero
/// exactly on the boundary.
pub(crate) fn concurrence_margin(x: &XState) -> f64 {
    let cw = x.w_abs() - (x.b() * x.c()).sqrt();
    let cz = x.z_abs() - (x.a() * x.d()).sqrt();
    cw.max(cz)
}

/// X-state concurrence: `C = 2 max{0, |w| - sqrt(bc), |z| - sqrt(ad)}`.
pub fn concurrence_x(x: &XState) -> f64 {
    (2.0 * concurrence_margin(x)).max(0.0)
}

/// Full closed-form fidelity report for an X state. `f1`, `f2`, and `gap`
/// are mutually consistent by construction: `gap = f1 - f2`.
pub fn fidelity_report(x: &XState) -> FidelityReport {
    let chi = chi_closed_form(x);
    let fef = chi.iter().copied().fold(f64::MIN, f64::max);
    let f1 = 0.5 + n_closed_form(x) / 6.0;
    let f2 = 1.0 / 3.0 + 2.0 * fef / 3.0;
    FidelityReport {
        chi,
        fef,
        f1,
        f2,
        gap: f1 - f2,
        concurrence: concurrence_x(x),
    }
}

/// Overlaps `<Psi^i|rho|Psi^i>` with the four generalized Bell projectors at
/// the given phases.
pub fn bell_overlaps(state: &DenseState, alpha: f64, beta: f64) -> [f64; 4] {
    let rho = state.matrix();
    std::array::from_fn(|i| {
        let ket = bell_ket(i, alpha, beta);
        let mut acc = Complex64::ZERO;
        for r in 0..4 {
            for c in 0..4 {
                acc += ket[r].conj() * rho[(r, c)] * ket[c];
            }
        }
        acc.re
    })
}

/// Fully entangled fraction over the generalized Bell basis: the maximum of
/// the four overlaps. Coincides with `max(chi)` for X states when
/// `alpha = arg(w)`, `beta = arg(z)`.
pub fn fef_bell_basis(state: &DenseState, alpha: f64, beta: f64) -> f64 {
    bell_overlaps(state, alpha, beta)
        .into_iter()
        .fold(f64::MIN, f64::max)
}

/// Strict classification: entangled iff C > 0, CHSH-violating iff M > 1,
/// nonclassically teleporting iff F2 > 2/3.
pub fn classify(x: &XState) -> ClassifyFlags {
    let report = fidelity_report(x);
    ClassifyFlags {
        entangled: report.concurrence > 0.0,
        violates_chsh: m_closed_form(x) > 1.0,
        nonclassical_teleport: report.f2 > 2.0 / 3.0,
    }
}
