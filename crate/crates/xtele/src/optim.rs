//! Derivative-free maximization used by the oracles: deterministic
//! multi-start coordinate ascent with golden-section line searches.
//!
//! Every coordinate restriction of the objectives optimized here is a single
//! 2*pi-periodic harmonic, so a window of width at most pi contains at most
//! one interior maximum and golden section is safe on it. The bracket
//! half-width starts at pi/2 and shrinks as sweeps converge; a pattern move
//! after each sweep keeps coupled coordinates from zigzag stalls.

use crate::states::mix_stream;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const INVPHI: f64 = 0.618_033_988_749_894_9;
const MIN_BRACKET: f64 = 1e-9;
const SHRINK: f64 = 0.4;

/// Iteration budget for one start.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Budget {
    /// Maximum number of coordinate line searches.
    pub line_searches: usize,
    /// Golden-section iterations per line search.
    pub golden_iters: usize,
}

fn golden_max(mut g: impl FnMut(f64) -> f64, lo: f64, hi: f64, iters: usize) -> (f64, f64) {
    let mut a = lo;
    let mut b = hi;
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let mut fc = g(c);
    let mut fd = g(d);
    for _ in 0..iters {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INVPHI * (b - a);
            fc = g(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INVPHI * (b - a);
            fd = g(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Coordinate-wise ascent from `x`, in place. Returns the best value seen.
///
/// Each sweep runs one golden-section line search per coordinate on the
/// bracket `[x_k - h, x_k + h]`, then one pattern move along the combined
/// sweep displacement (curing the zigzag stall of plain coordinate ascent
/// on coupled coordinates). The bracket shrinks when a sweep stops paying
/// or its moves become small relative to `h`.
pub(crate) fn refine(f: &impl Fn(&[f64]) -> f64, x: &mut [f64], budget: Budget, tol: f64) -> f64 {
    let dim = x.len();
    let mut h = std::f64::consts::FRAC_PI_2;
    let mut best = f(x);
    let mut used = 0;
    while used < budget.line_searches && h > MIN_BRACKET {
        let sweep_start = x.to_vec();
        let before = best;
        let mut max_move = 0.0f64;
        for k in 0..dim {
            if used >= budget.line_searches {
                break;
            }
            used += 1;
            let xk = x[k];
            let (t, ft) = golden_max(
                |v| {
                    x[k] = v;
                    f(x)
                },
                xk - h,
                xk + h,
                budget.golden_iters,
            );
            if ft > best {
                best = ft;
                x[k] = t;
                max_move = max_move.max((t - xk).abs());
            } else {
                x[k] = xk;
            }
        }
        let dir: Vec<f64> = x.iter().zip(&sweep_start).map(|(a, b)| a - b).collect();
        if dir.iter().any(|&d| d != 0.0) {
            // rescale the direction while the accepted step keeps landing
            // near the far end, so slow ridges are crossed in one sweep
            let mut scale = 1.0;
            while used < budget.line_searches {
                used += 1;
                let base = x.to_vec();
                let (t, ft) = golden_max(
                    |s| {
                        for k in 0..dim {
                            x[k] = base[k] + s * scale * dir[k];
                        }
                        f(x)
                    },
                    -1.0,
                    8.0,
                    budget.golden_iters,
                );
                let accepted = ft > best;
                if accepted {
                    best = ft;
                    for k in 0..dim {
                        x[k] = base[k] + t * scale * dir[k];
                    }
                } else {
                    x.copy_from_slice(&base);
                }
                if !(accepted && t > 6.0 && scale < 100.0) {
                    break;
                }
                scale *= 8.0;
            }
        }
        if best - before < tol || max_move < 0.05 * h {
            h *= SHRINK;
        }
    }
    best
}

/// Multi-start maximization. The first starts come from `fixed_starts`; the
/// remainder are drawn coordinate-wise uniform in [0, 2*pi) from streams
/// derived from (`seed`, start index), so the result is reproducible and
/// independent of evaluation order. Ties resolve to the lowest start index.
pub(crate) fn multi_start_max(
    f: impl Fn(&[f64]) -> f64,
    dim: usize,
    fixed_starts: &[Vec<f64>],
    total_starts: usize,
    seed: u64,
    budget: Budget,
    tol: f64,
) -> (Vec<f64>, f64) {
    assert!(total_starts >= 1, "need at least one start");
    let mut best_x: Option<Vec<f64>> = None;
    let mut best_val = f64::NEG_INFINITY;
    for s in 0..total_starts {
        let mut x = if s < fixed_starts.len() {
            let mut v = fixed_starts[s].clone();
            v.resize(dim, 0.0);
            v
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(mix_stream(seed, s as u64));
            (0..dim)
                .map(|_| rng.random::<f64>() * 2.0 * std::f64::consts::PI)
                .collect()
        };
        let val = refine(&f, &mut x, budget, tol);
        if val > best_val {
            best_val = val;
            best_x = Some(x);
        }
    }
    (best_x.expect("at least one start"), best_val)
}
