//! Composite Gauss–Legendre quadrature on (0, ∞) and (−∞, ∞) for smooth,
//! exponentially decaying integrands.
//!
//! The infinite range is cut at a finite point Y chosen from the decay hint
//! and then pushed outward until a trailing segment of width Y/2 carries
//! less than `tol·1e-2` of absolute mass; this matters for integrands like
//! ρ(y)·Wₙ(y²)² whose polynomial factor delays the exponential decay. The
//! truncated integral is then refined by halving the panels until two
//! successive estimates agree to `tol`.
//!
//! Panels are summed in index order, so results are reproducible bit for bit.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Nodes per panel.
pub const PANEL_ORDER: usize = 32;
const MAX_HALVINGS: usize = 20;
const MAX_EXTENSIONS: usize = 80;
const INITIAL_PANELS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// Result of integrating several integrands sharing the same sample points.
#[derive(Debug, Clone, PartialEq)]
pub struct VecQuadResult {
    pub values: Vec<f64>,
    pub error_estimate: f64,
    pub evaluations: usize,
    /// Upper end of the truncated range.
    pub cutoff: f64,
}

struct GaussRule {
    nodes: [f64; PANEL_ORDER],
    weights: [f64; PANEL_ORDER],
}

fn gauss_rule() -> &'static GaussRule {
    static RULE: OnceLock<GaussRule> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = PANEL_ORDER;
        let mut nodes = [0.0; PANEL_ORDER];
        let mut weights = [0.0; PANEL_ORDER];
        for i in 0..n.div_ceil(2) {
            // Newton on Pₙ from the Chebyshev-like initial guess
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussRule { nodes, weights }
    })
}

/// Sums the rule over `panels` equal panels of [lo, hi]. Returns the
/// integral of each component and the integral of the largest |component|.
fn panel_sum<F>(f: &mut F, lo: f64, hi: f64, panels: usize, dim: usize) -> (Vec<f64>, f64)
where
    F: FnMut(f64, &mut [f64]),
{
    let rule = gauss_rule();
    let width = (hi - lo) / panels as f64;
    let mut totals = vec![0.0; dim];
    let mut abs_total = 0.0;
    let mut panel = vec![0.0; dim];
    let mut buf = vec![0.0; dim];
    for p in 0..panels {
        let a = lo + p as f64 * width;
        let half = 0.5 * width;
        let mid = a + half;
        panel.iter_mut().for_each(|v| *v = 0.0);
        let mut panel_abs = 0.0;
        for (x, w) in rule.nodes.iter().zip(rule.weights.iter()) {
            buf.iter_mut().for_each(|v| *v = 0.0);
            f(mid + half * x, &mut buf);
            let mut peak: f64 = 0.0;
            for (acc, v) in panel.iter_mut().zip(buf.iter()) {
                *acc += w * v;
                if v.is_finite() {
                    peak = peak.max(v.abs());
                } else {
                    peak = f64::NAN;
                }
            }
            panel_abs = if peak.is_nan() {
                f64::NAN
            } else {
                panel_abs + w * peak
            };
        }
        for (t, v) in totals.iter_mut().zip(panel.iter()) {
            *t += half * v;
        }
        abs_total += half * panel_abs;
    }
    (totals, abs_total)
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn check_tol(tol: f64) -> Result<()> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "tolerance must be positive, got {tol}"
        )))
    }
}

/// Panel refinement on a finite interval.
fn refine<F>(f: &mut F, lo: f64, hi: f64, dim: usize, tol: f64) -> Result<(Vec<f64>, f64, usize)>
where
    F: FnMut(f64, &mut [f64]),
{
    let mut panels = INITIAL_PANELS;
    let (mut prev, _) = panel_sum(f, lo, hi, panels, dim);
    let mut evaluations = panels * PANEL_ORDER;
    let mut delta = f64::INFINITY;
    for _ in 0..MAX_HALVINGS {
        panels *= 2;
        let (next, abs_mass) = panel_sum(f, lo, hi, panels, dim);
        evaluations += panels * PANEL_ORDER;
        if !abs_mass.is_finite() {
            return Err(Error::NonFinite("integrand"));
        }
        delta = max_abs_diff(&next, &prev);
        let rounding = 8.0 * f64::EPSILON * abs_mass;
        if delta < tol || delta <= rounding {
            return Ok((next, delta.max(rounding), evaluations));
        }
        prev = next;
    }
    Err(Error::Quadrature { tol, delta })
}

/// Pushes `start` outward (in the direction of `sign`) until the segment
/// beyond it carries negligible absolute mass.
fn find_cutoff<F>(
    f: &mut F,
    start: f64,
    sign: f64,
    dim: usize,
    tol: f64,
) -> Result<(f64, f64, usize)>
where
    F: FnMut(f64, &mut [f64]),
{
    let mut y = start;
    let mut evaluations = 0;
    for _ in 0..MAX_EXTENSIONS {
        let step = 0.5 * y;
        let (lo, hi) = if sign > 0.0 {
            (y, y + step)
        } else {
            (-y - step, -y)
        };
        let (_, tail) = panel_sum(f, lo, hi, INITIAL_PANELS, dim);
        evaluations += INITIAL_PANELS * PANEL_ORDER;
        if !tail.is_finite() {
            return Err(Error::NonFinite("integrand in tail segment"));
        }
        if tail < 1e-2 * tol {
            return Ok((y, tail, evaluations));
        }
        y += step;
    }
    Err(Error::Quadrature {
        tol,
        delta: f64::INFINITY,
    })
}

/// ∫₀^∞ of several integrands evaluated together; `f(y, out)` fills `out`.
pub fn integrate_semiaxis_vec<F>(
    mut f: F,
    dim: usize,
    tol: f64,
    decay_hint: f64,
) -> Result<VecQuadResult>
where
    F: FnMut(f64, &mut [f64]),
{
    check_tol(tol)?;
    if !(decay_hint.is_finite() && decay_hint > 0.0) {
        return Err(Error::Domain(format!(
            "decay hint must be positive, got {decay_hint}"
        )));
    }
    let start = (-(tol * 1e-2).ln() / decay_hint).max(1.0);
    let (cutoff, tail, ext_evals) = find_cutoff(&mut f, start, 1.0, dim, tol)?;
    let (values, delta, evals) = refine(&mut f, 0.0, cutoff, dim, tol)?;
    Ok(VecQuadResult {
        values,
        error_estimate: delta + tail,
        evaluations: evals + ext_evals,
        cutoff,
    })
}

/// ∫₀^∞ f(y) dy for f with roughly e^(−decay_hint·y) decay.
pub fn integrate_semiaxis<F>(f: F, tol: f64, decay_hint: f64) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
{
    let r = integrate_semiaxis_vec(|y, out: &mut [f64]| out[0] = f(y), 1, tol, decay_hint)?;
    Ok(QuadResult {
        value: r.values[0],
        error_estimate: r.error_estimate,
        evaluations: r.evaluations,
    })
}

/// ∫_{−∞}^{∞} of several integrands with Gaussian-type decay.
pub fn integrate_real_line_vec<F>(mut f: F, dim: usize, tol: f64) -> Result<VecQuadResult>
where
    F: FnMut(f64, &mut [f64]),
{
    check_tol(tol)?;
    let start = (-(tol * 1e-2).ln()).sqrt().max(1.0);
    let (right, tail_r, e1) = find_cutoff(&mut f, start, 1.0, dim, tol)?;
    let (left, tail_l, e2) = find_cutoff(&mut f, start, -1.0, dim, tol)?;
    let cutoff = right.max(left);
    let (values, delta, evals) = refine(&mut f, -cutoff, cutoff, dim, tol)?;
    Ok(VecQuadResult {
        values,
        error_estimate: delta + tail_r + tail_l,
        evaluations: evals + e1 + e2,
        cutoff,
    })
}

/// ∫_{−∞}^{∞} f(x) dx.
pub fn integrate_real_line<F>(f: F, tol: f64) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
{
    let r = integrate_real_line_vec(|x, out: &mut [f64]| out[0] = f(x), 1, tol)?;
    Ok(QuadResult {
        value: r.values[0],
        error_estimate: r.error_estimate,
        evaluations: r.evaluations,
    })
}
