//! X-state and dense-state data model: validation, the named states used
//! throughout the crate, JSON state files, and random sampling of the
//! X-state ensemble.

use crate::error::{CoherenceSlot, Error, Result};
use crate::qmath::{self, CMatrix};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Slack on the diagonal non-negativity and coherence bounds, absorbing
/// floating-point noise without repairing genuine violations.
const CLAMP_TOL: f64 = 1e-12;
/// Tolerance on a+b+c+d = 1.
const TRACE_TOL: f64 = 1e-10;

/// A two-qubit X state: diagonal (a, b, c, d) plus anti-diagonal coherences
/// w (the |00><11| element) and z (the |01><10| element).
///
/// Constructed only through [`XState::new`] or the named builders, so a value
/// of this type always satisfies a+b+c+d = 1, non-negative populations, and
/// |w|^2 <= ad, |z|^2 <= bc (all within tolerance).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XState {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    w: Complex64,
    z: Complex64,
}

impl XState {
    /// Validates a raw six-tuple. Populations within `1e-12` below zero are
    /// clamped to zero; larger violations are errors, never repaired.
    pub fn new(a: f64, b: f64, c: f64, d: f64, w: Complex64, z: Complex64) -> Result<Self> {
        let finite = [a, b, c, d, w.re, w.im, z.re, z.im];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidDensity("non-finite entry".into()));
        }
        let clamp = |v: f64, name: char| -> Result<f64> {
            if v < -CLAMP_TOL {
                Err(Error::NegativePopulation { name, value: v })
            } else {
                Ok(v.max(0.0))
            }
        };
        let a = clamp(a, 'a')?;
        let b = clamp(b, 'b')?;
        let c = clamp(c, 'c')?;
        let d = clamp(d, 'd')?;
        let trace = a + b + c + d;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::NonUnitTrace { trace });
        }
        if w.norm_sqr() > a * d + CLAMP_TOL {
            return Err(Error::CoherenceBoundViolated {
                which: CoherenceSlot::W,
                lhs: w.norm_sqr(),
                rhs: a * d,
            });
        }
        if z.norm_sqr() > b * c + CLAMP_TOL {
            return Err(Error::CoherenceBoundViolated {
                which: CoherenceSlot::Z,
                lhs: z.norm_sqr(),
                rhs: b * c,
            });
        }
        Ok(XState { a, b, c, d, w, z })
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn d(&self) -> f64 {
        self.d
    }
    pub fn w(&self) -> Complex64 {
        self.w
    }
    pub fn z(&self) -> Complex64 {
        self.z
    }
    pub fn w_abs(&self) -> f64 {
        self.w.norm()
    }
    pub fn z_abs(&self) -> f64 {
        self.z.norm()
    }

    /// arg(w), with the convention alpha = 0 when |w| = 0.
    pub fn alpha(&self) -> f64 {
        if self.w == Complex64::ZERO {
            0.0
        } else {
            self.w.arg()
        }
    }

    /// arg(z), with the convention beta = 0 when |z| = 0.
    pub fn beta(&self) -> f64 {
        if self.z == Complex64::ZERO {
            0.0
        } else {
            self.z.arg()
        }
    }

    /// The 4x4 density matrix in the computational basis.
    pub fn matrix(&self) -> CMatrix {
        let mut m = CMatrix::zeros(4, 4);
        m[(0, 0)] = self.a.into();
        m[(1, 1)] = self.b.into();
        m[(2, 2)] = self.c.into();
        m[(3, 3)] = self.d.into();
        m[(0, 3)] = self.w;
        m[(3, 0)] = self.w.conj();
        m[(1, 2)] = self.z;
        m[(2, 1)] = self.z.conj();
        m
    }

    pub fn to_dense(&self) -> DenseState {
        DenseState::new(self.matrix()).expect("X-state invariants guarantee a valid density matrix")
    }

    /// The Werner state p|Psi-><Psi-| + (1-p) I/4 in X form:
    /// a = d = (1-p)/4, b = c = (1+p)/4, w = 0, z = -p/2.
    pub fn werner(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::ParamOutOfRange {
                name: "p",
                value: p,
                lo: 0.0,
                hi: 1.0,
            });
        }
        XState::new(
            (1.0 - p) / 4.0,
            (1.0 + p) / 4.0,
            (1.0 + p) / 4.0,
            (1.0 - p) / 4.0,
            Complex64::ZERO,
            Complex64::new(-p / 2.0, 0.0),
        )
    }

    /// Projector onto the generalized Bell state with the given index.
    pub fn bell(index: usize, alpha: f64, beta: f64) -> Self {
        let half = 0.5;
        match index {
            0 => XState {
                a: half,
                b: 0.0,
                c: 0.0,
                d: half,
                w: Complex64::from_polar(half, alpha),
                z: Complex64::ZERO,
            },
            3 => XState {
                a: half,
                b: 0.0,
                c: 0.0,
                d: half,
                w: -Complex64::from_polar(half, alpha),
                z: Complex64::ZERO,
            },
            1 => XState {
                a: 0.0,
                b: half,
                c: half,
                d: 0.0,
                w: Complex64::ZERO,
                z: Complex64::from_polar(half, beta),
            },
            2 => XState {
                a: 0.0,
                b: half,
                c: half,
                d: 0.0,
                w: Complex64::ZERO,
                z: -Complex64::from_polar(half, beta),
            },
            _ => panic!("bell index must be 0..=3"),
        }
    }

    /// The two states that maximize the fidelity gap: the w-side has
    /// a = d = 1/6, b = c = 1/3, w = 1/6, z = 0 (saturating |w|^2 = ad);
    /// the z-side mirrors the assignment.
    pub fn extremal_gap(variant: GapVariant) -> Self {
        let sixth = 1.0 / 6.0;
        let third = 1.0 / 3.0;
        match variant {
            GapVariant::WSide => XState {
                a: sixth,
                b: third,
                c: third,
                d: sixth,
                w: Complex64::new(sixth, 0.0),
                z: Complex64::ZERO,
            },
            GapVariant::ZSide => XState {
                a: third,
                b: sixth,
                c: sixth,
                d: third,
                w: Complex64::ZERO,
                z: Complex64::new(sixth, 0.0),
            },
        }
    }
}

/// Which side of the fidelity-gap extremum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GapVariant {
    WSide,
    ZSide,
}

/// The generalized Bell kets as 4-vectors over |q1 q2>:
/// index 0,3: (|00> ± e^{-i alpha}|11>)/sqrt(2);
/// index 1,2: (|01> ± e^{-i beta}|10>)/sqrt(2).
pub fn bell_ket(index: usize, alpha: f64, beta: f64) -> [Complex64; 4] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut ket = [Complex64::ZERO; 4];
    match index {
        0 | 3 => {
            let sign = if index == 0 { 1.0 } else { -1.0 };
            ket[0] = Complex64::new(s, 0.0);
            ket[3] = Complex64::from_polar(sign * s, -alpha);
        }
        1 | 2 => {
            let sign = if index == 1 { 1.0 } else { -1.0 };
            ket[1] = Complex64::new(s, 0.0);
            ket[2] = Complex64::from_polar(sign * s, -beta);
        }
        _ => panic!("bell index must be 0..=3"),
    }
    ket
}

/// A general (not necessarily X-form) two-qubit density matrix, validated at
/// construction: Hermitian within 1e-10, unit trace within 1e-10, eigenvalues
/// above -1e-10.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    rho: CMatrix,
}

impl DenseState {
    pub fn new(rho: CMatrix) -> Result<Self> {
        if rho.rows() != 4 || rho.cols() != 4 {
            return Err(Error::InvalidDensity(format!(
                "expected 4x4, got {}x{}",
                rho.rows(),
                rho.cols()
            )));
        }
        if !rho.is_finite() {
            return Err(Error::InvalidDensity("non-finite entry".into()));
        }
        let dev = rho.hermiticity_deviation();
        if dev > qmath::HERMITICITY_TOL {
            return Err(Error::InvalidDensity(format!(
                "not Hermitian: deviation {dev:.3e}"
            )));
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > qmath::TRACE_TOL || tr.im.abs() > qmath::TRACE_TOL {
            return Err(Error::InvalidDensity(format!("trace {tr} is not 1")));
        }
        let eig = qmath::hermitian_eigenvalues(&rho)?;
        if eig[0] < -qmath::PSD_TOL {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {:.3e}",
                eig[0]
            )));
        }
        Ok(DenseState { rho })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.rho
    }

    /// tr(rho^2).
    pub fn purity(&self) -> f64 {
        self.rho.mul(&self.rho).trace().re
    }

    /// Interprets this state as an X state, failing with `NotXState` when any
    /// entry off the main diagonal and anti-diagonal exceeds 1e-12.
    pub fn to_x_state(&self) -> Result<XState> {
        let mut max_off: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                if i != j && i + j != 3 {
                    max_off = max_off.max(self.rho[(i, j)].norm());
                }
            }
        }
        if max_off > 1e-12 {
            return Err(Error::NotXState { max_off });
        }
        XState::new(
            self.rho[(0, 0)].re,
            self.rho[(1, 1)].re,
            self.rho[(2, 2)].re,
            self.rho[(3, 3)].re,
            self.rho[(0, 3)],
            self.rho[(1, 2)],
        )
    }

    /// (|00> + |01> + |10> - |11>)/2: the Bell state |Phi+> with a Hadamard
    /// applied to the second qubit. Maximally entangled but not of X form.
    pub fn hadamard_rotated_bell() -> Self {
        let sign = [1.0, 1.0, 1.0, -1.0];
        let rho = CMatrix::from_fn(4, 4, |i, j| Complex64::new(sign[i] * sign[j] * 0.25, 0.0));
        DenseState::new(rho).expect("constant construction is a valid pure state")
    }
}

/// Either kind of input state.
#[derive(Clone, Debug)]
pub enum AnyState {
    X(XState),
    Dense(DenseState),
}

impl AnyState {
    pub fn dense(&self) -> DenseState {
        match self {
            AnyState::X(x) => x.to_dense(),
            AnyState::Dense(d) => d.clone(),
        }
    }

    pub fn as_x(&self) -> Option<&XState> {
        match self {
            AnyState::X(x) => Some(x),
            AnyState::Dense(_) => None,
        }
    }
}

/// Real/imaginary parts of a complex number in state files.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ComplexParts {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexParts {
    fn from(v: Complex64) -> Self {
        ComplexParts { re: v.re, im: v.im }
    }
}

impl From<ComplexParts> for Complex64 {
    fn from(v: ComplexParts) -> Self {
        Complex64::new(v.re, v.im)
    }
}

/// On-disk JSON schema for states:
/// `{"type":"x","a":..,"b":..,"c":..,"d":..,"w":{"re":..,"im":..},"z":{..}}`
/// or `{"type":"dense","re":[[..4x4..]],"im":[[..4x4..]]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum StateFile {
    #[serde(rename = "x")]
    X {
        a: f64,
        b: f64,
        c: f64,
        d: f64,
        w: ComplexParts,
        z: ComplexParts,
    },
    #[serde(rename = "dense")]
    Dense { re: Vec<Vec<f64>>, im: Vec<Vec<f64>> },
}

impl StateFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Validates the parsed record into a usable state.
    pub fn validate(&self) -> Result<AnyState> {
        match self {
            StateFile::X { a, b, c, d, w, z } => {
                Ok(AnyState::X(XState::new(*a, *b, *c, *d, (*w).into(), (*z).into())?))
            }
            StateFile::Dense { re, im } => {
                let shape_ok = re.len() == 4
                    && im.len() == 4
                    && re.iter().all(|r| r.len() == 4)
                    && im.iter().all(|r| r.len() == 4);
                if !shape_ok {
                    return Err(Error::Parse("dense state must carry 4x4 re and im arrays".into()));
                }
                let m = CMatrix::from_fn(4, 4, |i, j| Complex64::new(re[i][j], im[i][j]));
                Ok(AnyState::Dense(DenseState::new(m)?))
            }
        }
    }

    pub fn from_x(x: &XState) -> Self {
        StateFile::X {
            a: x.a(),
            b: x.b(),
            c: x.c(),
            d: x.d(),
            w: x.w().into(),
            z: x.z().into(),
        }
    }

    pub fn from_dense(d: &DenseState) -> Self {
        let m = d.matrix();
        let re = (0..4)
            .map(|i| (0..4).map(|j| m[(i, j)].re).collect())
            .collect();
        let im = (0..4)
            .map(|i| (0..4).map(|j| m[(i, j)].im).collect())
            .collect();
        StateFile::Dense { re, im }
    }
}

/// Which sampling measure an ensemble uses. Only one is defined today; the
/// identifier is recorded in every output so alternatives can be added
/// without breaking file formats.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeasureId {
    #[serde(rename = "dirichlet-disk")]
    DirichletDisk,
}

impl MeasureId {
    pub fn as_str(&self) -> &'static str {
        match self {
            MeasureId::DirichletDisk => "dirichlet-disk",
        }
    }
}

impl std::fmt::Display for MeasureId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Parameters of a Monte Carlo run over the X-state ensemble.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub sample_count: u64,
    pub seed: u64,
    pub measure_id: MeasureId,
}

impl EnsembleSpec {
    pub fn new(sample_count: u64, seed: u64) -> Result<Self> {
        if sample_count == 0 {
            return Err(Error::ParamOutOfRange {
                name: "sample_count",
                value: 0.0,
                lo: 1.0,
                hi: f64::INFINITY,
            });
        }
        Ok(EnsembleSpec {
            sample_count,
            seed,
            measure_id: MeasureId::DirichletDisk,
        })
    }

    /// The RNG stream for one worker. Streams are derived from
    /// (seed, worker-index) through a fixed 64-bit mixing function, so
    /// results never depend on thread scheduling.
    pub fn stream(&self, worker: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(mix_stream(self.seed, worker))
    }
}

/// splitmix64 finalizer over seed + worker * golden-ratio increment.
pub(crate) fn mix_stream(seed: u64, worker: u64) -> u64 {
    let mut x = seed.wrapping_add(worker.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Draws (a,b,c,d) uniformly on the probability simplex (Dirichlet(1,1,1,1)),
/// then w and z uniformly on the complex disks of radius sqrt(ad) and
/// sqrt(bc). Every output satisfies the X-state constraints by construction,
/// saturation included.
pub fn sample_x_state(rng: &mut impl Rng) -> XState {
    let diag = sample_simplex(rng);
    let [a, b, c, d] = diag;
    let w = sample_disk(rng, (a * d).sqrt());
    let z = sample_disk(rng, (b * c).sqrt());
    XState { a, b, c, d, w, z }
}

/// Boundary-biased variant used by the verification campaigns: coherence
/// moduli drawn in [0.95, 1] of their bound, and half of the draws pushed
/// toward a simplex face.
pub(crate) fn sample_x_state_boundary(rng: &mut impl Rng) -> XState {
    let mut diag = sample_simplex(rng);
    let face: bool = rng.random::<f64>() < 0.5;
    if face {
        let k = (rng.random::<f64>() * 4.0) as usize % 4;
        let shrink: f64 = rng.random::<f64>();
        diag[k] *= shrink * shrink * shrink * shrink;
        let sum: f64 = diag.iter().sum();
        for v in &mut diag {
            *v /= sum;
        }
    }
    let [a, b, c, d] = diag;
    let rw = (a * d).sqrt() * (0.95 + 0.05 * rng.random::<f64>());
    let rz = (b * c).sqrt() * (0.95 + 0.05 * rng.random::<f64>());
    let w = Complex64::from_polar(rw, 2.0 * std::f64::consts::PI * rng.random::<f64>());
    let z = Complex64::from_polar(rz, 2.0 * std::f64::consts::PI * rng.random::<f64>());
    // saturation can overshoot the bound by one ulp; pull back inside
    let w = clamp_to_disk(w, (a * d).sqrt());
    let z = clamp_to_disk(z, (b * c).sqrt());
    XState { a, b, c, d, w, z }
}

fn clamp_to_disk(v: Complex64, r: f64) -> Complex64 {
    if v.norm_sqr() > r * r {
        Complex64::from_polar(r, v.arg())
    } else {
        v
    }
}

fn sample_simplex(rng: &mut impl Rng) -> [f64; 4] {
    let mut e = [0.0; 4];
    for v in &mut e {
        *v = -(1.0 - rng.random::<f64>()).ln();
    }
    let sum: f64 = e.iter().sum();
    e.map(|v| v / sum)
}

fn sample_disk(rng: &mut impl Rng, radius: f64) -> Complex64 {
    let r = radius * rng.random::<f64>().sqrt();
    let phi = 2.0 * std::f64::consts::PI * rng.random::<f64>();
    Complex64::from_polar(r, phi)
}
