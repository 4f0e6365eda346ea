//! Property tests for the structural invariants: linear-algebra identities,
//! closed-form/eigensolver agreement, protocol conservation laws, and the
//! oracle/closed-form equivalences, over randomized inputs with shrinking.

use num_complex::Complex64;
use proptest::prelude::*;
use rayon::prelude::*;
use xtele::metrics;
use xtele::oracles;
use xtele::qmath::{self, CMatrix, PureQubit};
use xtele::states::{sample_x_state, AnyState, EnsembleSpec, XState};

const TAU: f64 = 2.0 * std::f64::consts::PI;

fn arb_complex() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn arb_cmat2() -> impl Strategy<Value = CMatrix> {
    prop::collection::vec(arb_complex(), 4)
        .prop_map(|v| CMatrix::from_fn(2, 2, |i, j| v[i * 2 + j]))
}

fn arb_x_state() -> impl Strategy<Value = XState> {
    (
        prop::array::uniform4(1e-3..1.0f64),
        0.0..1.0f64,
        0.0..1.0f64,
        0.0..TAU,
        0.0..TAU,
    )
        .prop_map(|(e, rw, rz, pa, pb)| {
            let sum: f64 = e.iter().sum();
            let [a, b, c, d] = e.map(|v| v / sum);
            let w = Complex64::from_polar(rw * (a * d).sqrt(), pa);
            let z = Complex64::from_polar(rz * (b * c).sqrt(), pb);
            XState::new(a, b, c, d, w, z).expect("construction satisfies the bounds")
        })
}

/// A 3x3 complex unitary from a product of complex Givens rotations.
fn unitary3(angles: [f64; 6]) -> CMatrix {
    let mut u = CMatrix::identity(3);
    for (k, (p, q)) in [(0usize, 1usize), (0, 2), (1, 2)].iter().enumerate() {
        let (theta, phi) = (angles[2 * k], angles[2 * k + 1]);
        let mut g = CMatrix::identity(3);
        g[(*p, *p)] = Complex64::new(theta.cos(), 0.0);
        g[(*q, *q)] = Complex64::new(theta.cos(), 0.0);
        g[(*p, *q)] = -Complex64::from_polar(theta.sin(), phi);
        g[(*q, *p)] = Complex64::from_polar(theta.sin(), -phi);
        u = u.mul(&g);
    }
    u
}

proptest! {
    #[test]
    fn kron_is_bilinear_and_associative(
        a in arb_cmat2(),
        b in arb_cmat2(),
        c in arb_cmat2(),
        s in arb_complex(),
    ) {
        let left = qmath::kron(&a.add(&b.scale(s)), &c);
        let right = qmath::kron(&a, &c).add(&qmath::kron(&b, &c).scale(s));
        prop_assert!(left.sub(&right).max_abs() <= 1e-12);

        let left = qmath::kron(&a, &b.add(&c.scale(s)));
        let right = qmath::kron(&a, &b).add(&qmath::kron(&a, &c).scale(s));
        prop_assert!(left.sub(&right).max_abs() <= 1e-12);

        let left = qmath::kron(&qmath::kron(&a, &b), &c);
        let right = qmath::kron(&a, &qmath::kron(&b, &c));
        prop_assert!(left.sub(&right).max_abs() <= 1e-12);
    }

    #[test]
    fn eigenvalues_recover_conjugated_diagonal(
        mut d in prop::array::uniform3(-2.0..2.0f64),
        angles in prop::array::uniform6(0.0..TAU),
    ) {
        let u = unitary3(angles);
        let diag = CMatrix::from_fn(3, 3, |i, j| {
            if i == j { Complex64::new(d[i], 0.0) } else { Complex64::ZERO }
        });
        let a = u.mul(&diag).mul(&u.adjoint());
        let vals = qmath::hermitian_eigenvalues(&a).unwrap();
        d.sort_by(|x, y| x.partial_cmp(y).unwrap());
        for (got, want) in vals.iter().zip(d.iter()) {
            prop_assert!((got - want).abs() <= 1e-9, "{got} vs {want}");
        }
    }

    /// The trace norm must agree with an independent two-step route: the
    /// positive eigenvalues of the symmetric 6x6 embedding [[0, T^T], [T, 0]]
    /// are the singular values of T.
    #[test]
    fn trace_norm_matches_symmetric_embedding(t in prop::array::uniform9(-1.0..1.0f64)) {
        let tm = CMatrix::from_real(&[&t[0..3], &t[3..6], &t[6..9]]);
        let mut emb = CMatrix::zeros(6, 6);
        for i in 0..3 {
            for j in 0..3 {
                emb[(i, 3 + j)] = tm[(j, i)];
                emb[(3 + i, j)] = tm[(i, j)];
            }
        }
        let vals = qmath::hermitian_eigenvalues(&emb).unwrap();
        let independent: f64 = vals.iter().filter(|v| **v > 0.0).sum();
        let direct = qmath::trace_norm(&tm).unwrap();
        prop_assert!((direct - independent).abs() <= 1e-9, "{direct} vs {independent}");
    }

    #[test]
    fn partial_trace_composes_to_full_trace(x in arb_x_state(), psi in (0.0..std::f64::consts::PI, 0.0..TAU)) {
        let rho4 = x.to_dense().matrix().clone();
        let reduced = qmath::partial_trace(&rho4, &[0]).unwrap();
        prop_assert!((reduced.trace().re - 1.0).abs() <= 1e-12);

        let rho8 = qmath::kron(&PureQubit::new(psi.0, psi.1).projector(), &rho4);
        let bob = qmath::partial_trace(&rho8, &[0, 1]).unwrap();
        prop_assert!((bob.trace().re - 1.0).abs() <= 1e-12);
        prop_assert!(bob.hermiticity_deviation() <= 1e-12);
    }

    #[test]
    fn closed_forms_match_eigensolver_path(x in arb_x_state()) {
        let r = metrics::correlation_report(&AnyState::X(x));
        prop_assert!((metrics::n_closed_form(&x) - r.n_value).abs() <= 1e-10);
        prop_assert!((metrics::m_closed_form(&x) - r.m_value).abs() <= 1e-10);
        for (cf, eig) in metrics::u_closed_form(&x).iter().zip(r.u.iter()) {
            prop_assert!((cf - eig).abs() <= 1e-10);
        }
    }

    #[test]
    fn fidelity_invariants_hold(x in arb_x_state()) {
        let chi = metrics::chi_closed_form(&x);
        prop_assert!(!(chi[0] > 0.5 && chi[1] > 0.5));

        let fr = metrics::fidelity_report(&x);
        prop_assert!(fr.f1 >= fr.f2 - 1e-12);
        prop_assert!(fr.gap >= -1e-12 && fr.gap <= 1.0 / 9.0 + 1e-10);

        let b_max = 2.0 * metrics::m_closed_form(&x).sqrt();
        let c = fr.concurrence;
        prop_assert!(2.0 * 2.0f64.sqrt() * c <= b_max + 1e-9);
        prop_assert!(b_max <= 2.0 * (1.0 + c * c).sqrt() + 1e-9);
        prop_assert!(b_max <= 2.0 * 2.0f64.sqrt() + 1e-10);
    }

    #[test]
    fn teleport_conserves_probability(
        x in arb_x_state(),
        theta in 0.0..std::f64::consts::PI,
        phi in 0.0..TAU,
        alpha in 0.0..TAU,
        beta in 0.0..TAU,
    ) {
        let input = PureQubit::new(theta, phi);
        let (outcomes, fidelity) = oracles::teleport_once(
            &x.to_dense(),
            &input,
            (alpha, beta),
            &oracles::CorrectionScheme::standard(),
        )
        .unwrap();
        let total: f64 = outcomes.iter().map(|o| o.probability).sum();
        prop_assert!((total - 1.0).abs() <= 1e-10);
        prop_assert!((0.0..=1.0 + 1e-10).contains(&fidelity));
        for o in &outcomes {
            prop_assert!((o.bob_state.trace().re - 1.0).abs() <= 1e-10);
            prop_assert!((o.corrected_state.trace().re - 1.0).abs() <= 1e-10);
        }
    }

    /// The exact octahedral average equals the plain mean of six protocol
    /// simulations over the Bloch-axis inputs.
    #[test]
    fn octahedral_average_is_the_six_point_mean(x in arb_x_state(), alpha in 0.0..TAU, beta in 0.0..TAU) {
        let dense = x.to_dense();
        let scheme = oracles::CorrectionScheme::standard();
        let fast = oracles::average_fidelity(
            &dense,
            (alpha, beta),
            &scheme,
            oracles::Quadrature::Octahedral6,
        )
        .unwrap();
        let mut slow = 0.0;
        for input in PureQubit::octahedral() {
            slow += oracles::teleport_once(&dense, &input, (alpha, beta), &scheme).unwrap().1;
        }
        prop_assert!((fast - slow / 6.0).abs() <= 1e-12, "{fast} vs {}", slow / 6.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn best_pauli_at_matched_basis_is_f2(x in arb_x_state()) {
        let (f, _) = oracles::best_pauli_fidelity(&x.to_dense(), oracles::matched_basis(&x));
        let f2 = metrics::fidelity_report(&x).f2;
        prop_assert!((f - f2).abs() <= 1e-9, "{f} vs {f2}");
    }

    #[test]
    fn spin_flip_concurrence_matches_closed_form(x in arb_x_state()) {
        let oracle = oracles::wootters_concurrence(&x.to_dense()).unwrap();
        let closed = metrics::concurrence_x(&x);
        prop_assert!((oracle - closed).abs() <= 1e-10, "{oracle} vs {closed}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn unitary_search_dominates_pauli_search(x in arb_x_state()) {
        let dense = x.to_dense();
        let basis = oracles::matched_basis(&x);
        let (pauli, _) = oracles::best_pauli_fidelity(&dense, basis);
        let unitary = oracles::best_unitary_fidelity(&dense, basis, 4, 1e-4);
        prop_assert!(unitary >= pauli - 1e-9);
        prop_assert!(unitary <= metrics::fidelity_report(&x).f1 + 1e-6);
    }
}

/// Closed forms against the trace/eigensolver route at scale.
#[test]
fn closed_forms_agree_over_a_hundred_thousand_states() {
    let spec = EnsembleSpec::new(1, 0xC105ED).unwrap();
    let worst = (0..16u64)
        .into_par_iter()
        .map(|worker| {
            let mut rng = spec.stream(worker);
            let mut worst = 0.0f64;
            for _ in 0..6250 {
                let x = sample_x_state(&mut rng);
                let r = metrics::correlation_report(&AnyState::X(x));
                worst = worst
                    .max((metrics::n_closed_form(&x) - r.n_value).abs())
                    .max((metrics::m_closed_form(&x) - r.m_value).abs());
            }
            worst
        })
        .reduce(|| 0.0, f64::max);
    assert!(worst <= 1e-10, "worst deviation {worst}");
}

/// One full-scale deterministic pass: the closed-form inequalities that the
/// sampled campaigns rely on hold over a million states.
#[test]
fn invariants_hold_over_a_million_states() {
    let spec = EnsembleSpec::new(1, 0xA11).unwrap();
    let violations: u64 = (0..128u64)
        .into_par_iter()
        .map(|worker| {
            let mut rng = spec.stream(worker);
            let mut bad = 0u64;
            for _ in 0..7813 {
                let x = sample_x_state(&mut rng);
                let chi = metrics::chi_closed_form(&x);
                let fr = metrics::fidelity_report(&x);
                let b_max = 2.0 * metrics::m_closed_form(&x).sqrt();
                let c = fr.concurrence;
                let ok = !(chi[0] > 0.5 && chi[1] > 0.5)
                    && fr.f1 >= fr.f2 - 1e-12
                    && fr.gap >= -1e-12
                    && fr.gap <= 1.0 / 9.0 + 1e-10
                    && (metrics::m_closed_form(&x) <= 1.0 || fr.gap < 1.0 / 9.0)
                    && 2.0 * 2.0f64.sqrt() * c <= b_max + 1e-9
                    && b_max <= 2.0 * (1.0 + c * c).sqrt() + 1e-9
                    && b_max <= 2.0 * 2.0f64.sqrt() + 1e-10;
                if !ok {
                    bad += 1;
                }
            }
            bad
        })
        .sum();
    assert_eq!(violations, 0);
}
