//! The `xtele` command line: single-state analysis, family sweeps to CSV,
//! ensemble fraction estimates, proposition verification campaigns, and
//! teleportation oracle cross-checks.
//!
//! Exit codes: 0 success, 1 proposition failure, 2 parse error,
//! 3 validation error, 4 I/O error. Failures print one machine-readable
//! line on stderr whose first `:`-delimited token is the reason.

use crate::ensemble;
use crate::error::{Error, Result};
use crate::metrics::{self, ClassifyFlags, CorrelationReport, FidelityReport};
use crate::oracles::{self, CorrectionScheme, Quadrature};
use crate::states::{AnyState, EnsembleSpec, StateFile, XState};
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use std::path::{Path, PathBuf};

#[derive(Parser, Debug)]
#[command(
    name = "xtele",
    version,
    about = "Entanglement, Bell-CHSH violation and teleportation fidelity for two-qubit X states"
)]
pub struct Cli {
    /// Cap on worker threads for ensemble and oracle subcommands.
    #[arg(long, global = true, env = "XTELE_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Analyze one state file: correlation report, fidelity report, flags.
    Analyze {
        /// JSON state file (see the state schema in the README).
        state_file: PathBuf,
        /// Basis phases for the fidelity block: `auto` uses (arg w, arg z)
        /// for X states and the standard basis for dense states.
        #[arg(long, value_enum, default_value_t = BasisChoice::Auto)]
        basis: BasisChoice,
    },
    /// Sweep a one-parameter state family into a CSV table.
    Sweep {
        #[arg(long, value_enum)]
        family: Family,
        /// Parameter name: `p` (werner), `alpha` or `beta` (bell),
        /// `mix` (extremal-gap).
        #[arg(long)]
        param: String,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        /// Number of inclusive grid points (at least 2).
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        output: PathBuf,
    },
    /// Estimate the fractions P_E, P_T, P_B over the X-state ensemble.
    Ensemble {
        #[arg(long)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a verification campaign; exits 1 with counterexamples on failure.
    Verify {
        #[arg(long, value_enum)]
        prop: PropChoice,
        #[arg(long)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Hill-climb the fidelity gap from the best samples (prop 2 only).
        #[arg(long)]
        refine: bool,
    },
    /// Cross-check the teleportation oracle against the closed forms.
    Teleport {
        state_file: PathBuf,
        #[arg(long, value_enum, default_value_t = CorrectionsChoice::Pauli)]
        corrections: CorrectionsChoice,
        #[arg(long, value_enum, default_value_t = QuadratureChoice::Octa)]
        quadrature: QuadratureChoice,
        /// Sample count for `--quadrature mc`.
        #[arg(long, default_value_t = 100_000)]
        mc_n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BasisChoice {
    Auto,
    Standard,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    Werner,
    Bell,
    ExtremalGap,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PropChoice {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    #[value(name = "vw")]
    Vw,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CorrectionsChoice {
    Pauli,
    Optimal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum QuadratureChoice {
    Octa,
    Mc,
}

/// Parses the process arguments, runs the command, and returns the exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        // ignore the error when a pool already exists (e.g. under tests)
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) => 2,
        Error::Io(_) => 4,
        _ => 3,
    }
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Analyze { state_file, basis } => cmd_analyze(&state_file, basis),
        Command::Sweep {
            family,
            param,
            from,
            to,
            steps,
            output,
        } => cmd_sweep(family, &param, from, to, steps, &output),
        Command::Ensemble { samples, seed } => cmd_ensemble(samples, seed),
        Command::Verify {
            prop,
            samples,
            seed,
            refine,
        } => cmd_verify(prop, samples, seed, refine),
        Command::Teleport {
            state_file,
            corrections,
            quadrature,
            mc_n,
            seed,
        } => cmd_teleport(&state_file, corrections, quadrature, mc_n, seed),
    }
}

fn load_state(path: &Path) -> Result<AnyState> {
    let text = std::fs::read_to_string(path)?;
    StateFile::parse(&text)?.validate()
}

fn print_json<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("reports serialize")
    );
}

#[derive(Serialize)]
struct BasisReport {
    alpha: f64,
    beta: f64,
}

#[derive(Serialize)]
struct AnalyzeReport {
    state_kind: &'static str,
    basis: BasisReport,
    correlation: CorrelationReport,
    fidelity: FidelityReport,
    flags: ClassifyFlags,
    /// Classification predicates sitting exactly on their threshold; ties
    /// classify as negative.
    boundary_ties: Vec<&'static str>,
}

fn x_boundary_ties(x: &XState) -> Vec<&'static str> {
    let mut ties = Vec::new();
    if metrics::concurrence_margin(x) == 0.0 {
        ties.push("entangled");
    }
    if metrics::m_closed_form(x) == 1.0 {
        ties.push("violates_chsh");
    }
    if metrics::fidelity_report(x).f2 == 2.0 / 3.0 {
        ties.push("nonclassical_teleport");
    }
    ties
}

fn cmd_analyze(path: &Path, basis: BasisChoice) -> Result<i32> {
    let state = load_state(path)?;
    let correlation = metrics::correlation_report(&state);
    let report = match (&state, basis) {
        (AnyState::X(x), BasisChoice::Auto) => AnalyzeReport {
            state_kind: "x",
            basis: BasisReport {
                alpha: x.alpha(),
                beta: x.beta(),
            },
            fidelity: metrics::fidelity_report(x),
            flags: metrics::classify(x),
            boundary_ties: x_boundary_ties(x),
            correlation,
        },
        (AnyState::X(x), BasisChoice::Standard) => {
            // fidelity block evaluated in the standard Bell basis; the flags
            // remain the state's intrinsic classification
            let dense = x.to_dense();
            let chi = metrics::bell_overlaps(&dense, 0.0, 0.0);
            let fef = chi.into_iter().fold(f64::MIN, f64::max);
            let f1 = 0.5 + correlation.n_value / 6.0;
            let f2 = 1.0 / 3.0 + 2.0 * fef / 3.0;
            AnalyzeReport {
                state_kind: "x",
                basis: BasisReport {
                    alpha: 0.0,
                    beta: 0.0,
                },
                fidelity: FidelityReport {
                    chi,
                    fef,
                    f1,
                    f2,
                    gap: f1 - f2,
                    concurrence: metrics::concurrence_x(x),
                },
                flags: metrics::classify(x),
                boundary_ties: x_boundary_ties(x),
                correlation,
            }
        }
        (AnyState::Dense(d), _) => {
            let chi = metrics::bell_overlaps(d, 0.0, 0.0);
            let fef = chi.into_iter().fold(f64::MIN, f64::max);
            let f1 = 0.5 + correlation.n_value / 6.0;
            let f2 = 1.0 / 3.0 + 2.0 * fef / 3.0;
            let concurrence = oracles::wootters_concurrence(d)?;
            AnalyzeReport {
                state_kind: "dense",
                basis: BasisReport {
                    alpha: 0.0,
                    beta: 0.0,
                },
                fidelity: FidelityReport {
                    chi,
                    fef,
                    f1,
                    f2,
                    gap: f1 - f2,
                    concurrence,
                },
                flags: ClassifyFlags {
                    entangled: concurrence > 0.0,
                    violates_chsh: correlation.m_value > 1.0,
                    nonclassical_teleport: f2 > 2.0 / 3.0,
                },
                boundary_ties: {
                    let mut ties = Vec::new();
                    if correlation.m_value == 1.0 {
                        ties.push("violates_chsh");
                    }
                    if f2 == 2.0 / 3.0 {
                        ties.push("nonclassical_teleport");
                    }
                    ties
                },
                correlation,
            }
        }
    };
    print_json(&report);
    Ok(0)
}

fn family_state(family: Family, param: &str, value: f64) -> Result<XState> {
    match (family, param) {
        (Family::Werner, "p") => XState::werner(value),
        (Family::Bell, "alpha") => Ok(XState::bell(0, value, 0.0)),
        (Family::Bell, "beta") => Ok(XState::bell(1, 0.0, value)),
        (Family::ExtremalGap, "mix") => {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::ParamOutOfRange {
                    name: "mix",
                    value,
                    lo: 0.0,
                    hi: 1.0,
                });
            }
            let sixth = 1.0 / 6.0;
            let third = 1.0 / 3.0;
            let a = (1.0 - value) * sixth + value * third;
            let b = (1.0 - value) * third + value * sixth;
            XState::new(
                a,
                b,
                b,
                a,
                Complex64::new((1.0 - value) * sixth, 0.0),
                Complex64::new(value * sixth, 0.0),
            )
        }
        (family, param) => Err(Error::Parse(format!(
            "family {family:?} has no parameter named {param:?}"
        ))),
    }
}

fn cmd_sweep(
    family: Family,
    param: &str,
    from: f64,
    to: f64,
    steps: usize,
    output: &Path,
) -> Result<i32> {
    if steps < 2 {
        return Err(Error::Parse("steps must be at least 2".into()));
    }
    if from > to || from.is_nan() || to.is_nan() {
        return Err(Error::Parse("from must not exceed to".into()));
    }
    let family_name = match family {
        Family::Werner => "werner",
        Family::Bell => "bell",
        Family::ExtremalGap => "extremal-gap",
    };
    let mut out = String::from(
        "family,param,n_value,m_value,b_max,concurrence,f1,f2,gap,entangled,violates_chsh,nonclassical_teleport\n",
    );
    for k in 0..steps {
        let value = from + (to - from) * k as f64 / (steps - 1) as f64;
        let x = family_state(family, param, value)?;
        let m = metrics::m_closed_form(&x);
        let fr = metrics::fidelity_report(&x);
        let flags = metrics::classify(&x);
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            family_name,
            fmt_sig(value, 12),
            fmt_sig(metrics::n_closed_form(&x), 12),
            fmt_sig(m, 12),
            fmt_sig(2.0 * m.sqrt(), 12),
            fmt_sig(fr.concurrence, 12),
            fmt_sig(fr.f1, 12),
            fmt_sig(fr.f2, 12),
            fmt_sig(fr.gap, 12),
            flags.entangled as u8,
            flags.violates_chsh as u8,
            flags.nonclassical_teleport as u8,
        ));
    }
    std::fs::write(output, out)?;
    Ok(0)
}

fn cmd_ensemble(samples: u64, seed: u64) -> Result<i32> {
    let spec = EnsembleSpec::new(samples, seed)?;
    print_json(&ensemble::estimate_fractions(&spec));
    Ok(0)
}

fn cmd_verify(prop: PropChoice, samples: u64, seed: u64, refine: bool) -> Result<i32> {
    let spec = EnsembleSpec::new(samples, seed)?;
    let report = match prop {
        PropChoice::One => ensemble::verify_prop1(&spec),
        PropChoice::Two => ensemble::verify_prop2(&spec, refine),
        PropChoice::Vw => ensemble::verify_vw_bound(&spec),
    };
    print_json(&report);
    Ok(if report.passed() { 0 } else { 1 })
}

#[derive(Serialize)]
struct TeleportReport {
    basis: BasisReport,
    corrections: &'static str,
    quadrature: &'static str,
    oracle_fidelity: f64,
    closed_form_fidelity: Option<f64>,
    abs_difference: Option<f64>,
    scheme: CorrectionScheme,
}

fn cmd_teleport(
    path: &Path,
    corrections: CorrectionsChoice,
    quadrature: QuadratureChoice,
    mc_n: usize,
    seed: u64,
) -> Result<i32> {
    let state = load_state(path)?;
    let dense = state.dense();
    // the basis that realizes the closed-form optimum: sector-matched phases
    // for X states, the standard basis for dense inputs
    let basis = match state.as_x() {
        Some(x) => oracles::matched_basis(x),
        None => (0.0, 0.0),
    };
    let (exact, scheme, closed_form) = match corrections {
        CorrectionsChoice::Pauli => {
            let (f, scheme) = oracles::best_pauli_fidelity(&dense, basis);
            let closed = state.as_x().map(|x| metrics::fidelity_report(x).f2);
            (f, scheme, closed)
        }
        CorrectionsChoice::Optimal => {
            let (f, scheme) = oracles::best_unitary_fidelity_with_scheme(&dense, basis, 32, 1e-4);
            let closed = state.as_x().map(|x| metrics::fidelity_report(x).f1);
            (f, scheme, closed)
        }
    };
    let (oracle_fidelity, quad_name) = match quadrature {
        QuadratureChoice::Octa => (exact, "octahedral6"),
        QuadratureChoice::Mc => (
            oracles::average_fidelity(
                &dense,
                basis,
                &scheme,
                Quadrature::MonteCarlo { n: mc_n, seed },
            )?,
            "mc",
        ),
    };
    print_json(&TeleportReport {
        basis: BasisReport {
            alpha: basis.0,
            beta: basis.1,
        },
        corrections: match corrections {
            CorrectionsChoice::Pauli => "pauli",
            CorrectionsChoice::Optimal => "optimal",
        },
        quadrature: quad_name,
        oracle_fidelity,
        closed_form_fidelity: closed_form,
        abs_difference: closed_form.map(|c| (oracle_fidelity - c).abs()),
        scheme,
    });
    Ok(0)
}

/// Formats with at most `sig` significant digits, positional where the
/// magnitude allows, scientific otherwise, with trailing zeros trimmed.
/// Output is a pure function of the bits of `x`.
pub(crate) fn fmt_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if exp < -4 || exp >= sig as i32 {
        let s = format!("{:.*e}", sig - 1, x);
        let (mantissa, exponent) = s.split_once('e').expect("scientific format");
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{mantissa}e{exponent}")
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        let s = format!("{:.*}", decimals, x);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fmt_sig_is_g_style() {
        assert_eq!(fmt_sig(0.0, 12), "0");
        assert_eq!(fmt_sig(1.28, 12), "1.28");
        assert_eq!(fmt_sig(-1.28, 12), "-1.28");
        assert_eq!(fmt_sig(std::f64::consts::FRAC_1_SQRT_2, 12), "0.707106781187");
        assert_eq!(fmt_sig(1.0 / 3.0, 12), "0.333333333333");
        assert_eq!(fmt_sig(1e-6, 12), "1e-6");
        assert_eq!(fmt_sig(2.5e11, 12), "250000000000");
        assert_eq!(fmt_sig(2.5e14, 12), "2.5e14");
        assert_eq!(fmt_sig(1.0, 12), "1");
    }

    #[test]
    fn family_states_cover_every_parameter() {
        assert!(family_state(Family::Werner, "p", 0.5).is_ok());
        assert!(family_state(Family::Bell, "alpha", 1.0).is_ok());
        assert!(family_state(Family::Bell, "beta", -0.5).is_ok());
        let x = family_state(Family::ExtremalGap, "mix", 0.0).unwrap();
        assert_eq!(x, XState::extremal_gap(crate::states::GapVariant::WSide));
        let x = family_state(Family::ExtremalGap, "mix", 1.0).unwrap();
        assert_eq!(x, XState::extremal_gap(crate::states::GapVariant::ZSide));
        assert!(matches!(
            family_state(Family::Werner, "q", 0.5),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            family_state(Family::ExtremalGap, "mix", 1.5),
            Err(Error::ParamOutOfRange { .. })
        ));
    }

    #[test]
    fn mix_family_interpolates_validly() {
        for k in 0..=20 {
            let x = family_state(Family::ExtremalGap, "mix", k as f64 / 20.0).unwrap();
            let gap = metrics::fidelity_report(&x).gap;
            assert!(gap <= 1.0 / 9.0 + 1e-10);
        }
    }
}
