//! Wilson polynomials W̃ₙ(y²; μ, ν, a, b) in the normalization
//!
//! ```text
//! W̃ₙ = (μ+a)ₙ(μ+b)ₙ / ((a+b)ₙ n!) · ₄F₃(−n, n+s−1, μ+iy, μ−iy; μ+ν, μ+a, μ+b; 1),
//! s = μ+ν+a+b,
//! ```
//!
//! evaluated both from the terminating hypergeometric sum and from the
//! three-term recursion, together with the continuous weight, the
//! orthonormal form, the generating function and the large-n asymptotics
//! that carry the scattering amplitude A(iy).

use std::f64::consts::PI;

use num_complex::Complex64;
use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::quadrature::integrate_semiaxis_vec;
use crate::special::{
    dd_div, gamma_ratio_arg, gamma_ratio_ln_abs, gamma_real, hyp2f1_series, ln_factorial,
    ln_gamma_real, ln_pochhammer, log_gamma, rgamma_real, wrap_phase, CompensatedSum, ComplexValue,
    SignedLog,
};

/// Distance from zero below which a recursion denominator counts as vanishing.
const DEGENERATE_DENOMINATOR: f64 = 1e-12;

/// Parameter regime of a Wilson system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// μ ≥ 0 with ν, a, b and all pairwise sums positive: continuum only.
    Scattering,
    /// μ < 0 with ν, a, b and all pairwise sums positive: continuum plus
    /// finitely many bound states.
    Mixed,
    /// Anything else, e.g. the images of Racah parameters (μ+ν = −N).
    Confined,
}

/// The four real parameters (μ, ν, a, b).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WilsonParams {
    pub mu: f64,
    pub nu: f64,
    pub a: f64,
    pub b: f64,
}

impl WilsonParams {
    /// Parameters of a scattering or mixed system; fails naming the first
    /// violated inequality.
    pub fn new(mu: f64, nu: f64, a: f64, b: f64) -> Result<Self> {
        let p = Self::new_unchecked(mu, nu, a, b)?;
        if let Some(violated) = p.first_violation() {
            return Err(Error::Constraint(violated));
        }
        Ok(p)
    }

    /// Finite parameters without the positivity requirements; the regime is
    /// classified on demand.
    pub fn new_unchecked(mu: f64, nu: f64, a: f64, b: f64) -> Result<Self> {
        if ![mu, nu, a, b].iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("Wilson parameters"));
        }
        Ok(Self { mu, nu, a, b })
    }

    fn first_violation(&self) -> Option<String> {
        let Self { mu, nu, a, b } = *self;
        let checks = [
            ("ν > 0", nu),
            ("a > 0", a),
            ("b > 0", b),
            ("μ+ν > 0", mu + nu),
            ("μ+a > 0", mu + a),
            ("μ+b > 0", mu + b),
            ("ν+a > 0", nu + a),
            ("ν+b > 0", nu + b),
            ("a+b > 0", a + b),
        ];
        checks
            .iter()
            .find(|(_, v)| *v <= 0.0)
            .map(|(name, v)| format!("{name} violated (value {v})"))
    }

    pub fn regime(&self) -> Regime {
        if self.first_violation().is_some() {
            Regime::Confined
        } else if self.mu >= 0.0 {
            Regime::Scattering
        } else {
            Regime::Mixed
        }
    }

    /// s = μ+ν+a+b.
    pub fn sum(&self) -> f64 {
        self.mu + self.nu + self.a + self.b
    }

    pub fn with_a_b_swapped(&self) -> Self {
        Self {
            a: self.b,
            b: self.a,
            ..*self
        }
    }
}

/// y² = −(m+μ)² at which Γ(μ+iy) hits the pole −m. Computed the same way the
/// series forms (μ+k)², so the ₄F₃ terminates exactly at k = m.
pub fn bound_state_y2(mu: f64, m: usize) -> f64 {
    let t = mu + m as f64;
    -(t * t)
}

/// W̃₀..W̃ₙ at a single y² (or their orthonormal counterparts).
#[derive(Debug, Clone, PartialEq)]
pub struct WilsonValueTable {
    pub params: WilsonParams,
    pub y_squared: f64,
    pub values: Vec<f64>,
    pub normalized: bool,
}

fn ln_series_prefactor(n: usize, p: &WilsonParams) -> Result<SignedLog> {
    let num = ln_pochhammer(p.mu + p.a, n)?.mul(ln_pochhammer(p.mu + p.b, n)?);
    let den = ln_pochhammer(p.a + p.b, n)?.mul(SignedLog::new(ln_factorial(n), 1.0));
    num.div(den)
        .ok_or_else(|| Error::Param(format!("(a+b)_{n} vanishes for a+b = {}", p.a + p.b)))
}

/// W̃ₙ(y²) from the terminating ₄F₃ sum. `y2` may be negative.
///
/// The alternating terms can exceed the result by many orders of magnitude,
/// so terms and partial sums are carried in double-double arithmetic with
/// the parameter shifts μ+k, μ+ν+k, … formed exactly.
pub fn wilson_series(n: usize, y2: f64, p: &WilsonParams) -> Result<f64> {
    if !y2.is_finite() {
        return Err(Error::NonFinite("y²"));
    }
    let nf = n as f64;
    let s = TwoFloat::from(p.mu) + p.nu + p.a + p.b;
    let mut term = TwoFloat::from(1.0);
    let mut acc = term;
    for k in 0..n {
        let kf = k as f64;
        // exact zero at y² = −(μ+k)², i.e. the bound-state arguments
        if (p.mu + kf) * (p.mu + kf) + y2 == 0.0 {
            break;
        }
        let shifted = TwoFloat::from(p.mu) + kf;
        let num = (s + (kf + nf - 1.0)) * (kf - nf) * (shifted * shifted + y2);
        let dens = [
            TwoFloat::from(p.mu) + p.nu + kf,
            TwoFloat::from(p.mu) + p.a + kf,
            TwoFloat::from(p.mu) + p.b + kf,
        ];
        if let Some(d) = dens.iter().find(|d| d.hi().abs() < DEGENERATE_DENOMINATOR) {
            return Err(Error::Param(format!(
                "4F3 denominator parameter vanishes at k = {k} (value {})",
                d.hi()
            )));
        }
        term = dd_div(term * num, dens[0] * dens[1] * dens[2] * (kf + 1.0));
        acc += term;
    }
    let pre = ln_series_prefactor(n, p)?;
    Ok(pre.value() * f64::from(acc))
}

/// W̃ₙ with an explicit complex y. Each term depends on y only through
/// (μ+k+iy)(μ+k−iy) = (μ+k)² + y², so the sum is carried in double-double
/// real and imaginary parts exactly as in [`wilson_series`], with y² formed
/// from error-free products. Agrees with [`wilson_series`] for real y² = y·y.
pub fn wilson_series_at(n: usize, y: ComplexValue, p: &WilsonParams) -> Result<ComplexValue> {
    if !(y.re.is_finite() && y.im.is_finite()) {
        return Err(Error::NonFinite("y"));
    }
    let nf = n as f64;
    let s = TwoFloat::from(p.mu) + p.nu + p.a + p.b;
    let y2_re = TwoFloat::new_mul(y.re, y.re) - TwoFloat::new_mul(y.im, y.im);
    let y2_im = TwoFloat::new_mul(y.re, y.im) * 2.0;
    let (mut term_re, mut term_im) = (TwoFloat::from(1.0), TwoFloat::from(0.0));
    let (mut acc_re, mut acc_im) = (term_re, term_im);
    for k in 0..n {
        let kf = k as f64;
        let shifted = TwoFloat::from(p.mu) + kf;
        let f_re = shifted * shifted + y2_re;
        if f_re.hi() == 0.0 && y2_im.hi() == 0.0 {
            break;
        }
        let real = (s + (kf + nf - 1.0)) * (kf - nf);
        let dens = [
            TwoFloat::from(p.mu) + p.nu + kf,
            TwoFloat::from(p.mu) + p.a + kf,
            TwoFloat::from(p.mu) + p.b + kf,
        ];
        if let Some(d) = dens.iter().find(|d| d.hi().abs() < DEGENERATE_DENOMINATOR) {
            return Err(Error::Param(format!(
                "4F3 denominator parameter vanishes at k = {k} (value {})",
                d.hi()
            )));
        }
        let scale = dd_div(real, dens[0] * dens[1] * dens[2] * (kf + 1.0));
        let (f_re, f_im) = (f_re * scale, y2_im * scale);
        (term_re, term_im) = (
            term_re * f_re - term_im * f_im,
            term_re * f_im + term_im * f_re,
        );
        acc_re += term_re;
        acc_im += term_im;
    }
    let pre = ln_series_prefactor(n, p)?.value();
    Ok(Complex64::new(f64::from(acc_re), f64::from(acc_im)) * pre)
}

/// Diagonal, lower and upper coefficients of the forward recursion at n.
struct RecursionRow {
    diag: f64,
    lower: f64,
    upper: f64,
}

fn recursion_row(n: usize, p: &WilsonParams) -> Result<RecursionRow> {
    let WilsonParams { mu, nu, a, b } = *p;
    let s = p.sum();
    let nf = n as f64;
    let d0 = 2.0 * nf + s;
    let d1 = d0 - 1.0;
    let d2 = d0 - 2.0;
    if let Some(d) = [d0, d1, d2]
        .into_iter()
        .find(|d| d.abs() < DEGENERATE_DENOMINATOR)
    {
        return Err(Error::DegenerateRecursion { n, denominator: d });
    }
    let up_part = (nf + mu + nu) * (nf + mu + a) * (nf + mu + b) * (nf + s - 1.0) / (d0 * d1);
    let down_part = nf * (nf + nu + a - 1.0) * (nf + nu + b - 1.0) * (nf + a + b - 1.0) / (d1 * d2);
    Ok(RecursionRow {
        diag: up_part + down_part - mu * mu,
        lower: (nf + mu + a - 1.0)
            * (nf + mu + b - 1.0)
            * (nf + nu + a - 1.0)
            * (nf + nu + b - 1.0)
            / (d1 * d2),
        upper: (nf + 1.0) * (nf + mu + nu) * (nf + a + b) * (nf + s - 1.0) / (d0 * d1),
    })
}

/// The first-degree polynomial W̃₁(y²).
pub fn wilson_first(y2: f64, p: &WilsonParams) -> Result<f64> {
    let WilsonParams { mu, nu, a, b } = *p;
    let den = (mu + nu) * (a + b);
    if den.abs() < DEGENERATE_DENOMINATOR || (a + b).abs() < DEGENERATE_DENOMINATOR {
        return Err(Error::Param("(μ+ν)(a+b) vanishes in the W̃₁ seed".into()));
    }
    Ok((mu + a) * (mu + b) / (a + b) - p.sum() / den * (y2 + mu * mu))
}

/// W̃₀..W̃_{n_max} at y² by forward three-term recursion.
pub fn wilson_recursion(n_max: usize, y2: f64, p: &WilsonParams) -> Result<WilsonValueTable> {
    if !y2.is_finite() {
        return Err(Error::NonFinite("y²"));
    }
    let mut values = Vec::with_capacity(n_max + 1);
    values.push(1.0);
    if n_max >= 1 {
        values.push(wilson_first(y2, p)?);
    }
    for n in 1..n_max {
        let row = recursion_row(n, p)?;
        if row.upper.abs() < DEGENERATE_DENOMINATOR {
            return Err(Error::DegenerateRecursion {
                n,
                denominator: row.upper,
            });
        }
        let next = ((row.diag - y2) * values[n] - row.lower * values[n - 1]) / row.upper;
        values.push(next);
    }
    Ok(WilsonValueTable {
        params: *p,
        y_squared: y2,
        values,
        normalized: false,
    })
}

/// ln of the squared factor turning W̃ₙ into the orthonormal Wₙ.
fn ln_norm_squared(n: usize, p: &WilsonParams) -> Result<SignedLog> {
    let WilsonParams { mu, nu, a, b } = *p;
    let s = p.sum();
    let ratio = if n == 0 {
        SignedLog::one()
    } else {
        let nf = n as f64;
        SignedLog::from_value(2.0 * nf + s - 1.0)
            .div(SignedLog::from_value(nf + s - 1.0))
            .ok_or_else(|| Error::Param(format!("n+s−1 vanishes at n = {n}")))?
    };
    let num = ratio
        .mul(ln_pochhammer(mu + nu, n)?)
        .mul(ln_pochhammer(a + b, n)?)
        .mul(ln_pochhammer(s, n)?)
        .mul(SignedLog::new(ln_factorial(n), 1.0));
    let den = ln_pochhammer(mu + a, n)?
        .mul(ln_pochhammer(mu + b, n)?)
        .mul(ln_pochhammer(nu + a, n)?)
        .mul(ln_pochhammer(nu + b, n)?);
    num.div(den)
        .ok_or_else(|| Error::Param(format!("normalization denominator vanishes at n = {n}")))
}

/// √ of the orthonormalization radicand for degree n.
pub fn wilson_norm_factor(n: usize, p: &WilsonParams) -> Result<f64> {
    let h = ln_norm_squared(n, p)?;
    if h.sign <= 0.0 {
        return Err(Error::Param(format!(
            "normalization radicand is not positive at n = {n}"
        )));
    }
    Ok((0.5 * h.ln_abs).exp())
}

/// Converts a table of W̃ₙ to the orthonormal Wₙ.
pub fn wilson_normalize(table: &WilsonValueTable) -> Result<WilsonValueTable> {
    if table.normalized {
        return Ok(table.clone());
    }
    let values = table
        .values
        .iter()
        .enumerate()
        .map(|(n, v)| Ok(v * wilson_norm_factor(n, &table.params)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(WilsonValueTable {
        values,
        normalized: true,
        ..table.clone()
    })
}

/// Normalization factors √hₙ for n = 0..=n_max.
pub fn wilson_norm_factors(n_max: usize, p: &WilsonParams) -> Result<Vec<f64>> {
    (0..=n_max).map(|n| wilson_norm_factor(n, p)).collect()
}

/// Residual of the symmetric recursion satisfied by the orthonormal Wₙ,
/// max over 1 ≤ n < n_max of |y²Wₙ − (dₙWₙ − lₙWₙ₋₁ − uₙWₙ₊₁)|, relative to
/// the largest |Wₙ| (at least 1).
pub fn normalized_recursion_residual(table: &WilsonValueTable) -> Result<f64> {
    let normalized = wilson_normalize(table)?;
    let w = &normalized.values;
    let p = &normalized.params;
    let y2 = normalized.y_squared;
    let WilsonParams { mu, nu, a, b } = *p;
    let s = p.sum();
    let scale = w.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let mut worst: f64 = 0.0;
    for n in 1..w.len().saturating_sub(1) {
        let nf = n as f64;
        let row = recursion_row(n, p)?;
        let lower = (nf
            * (nf + mu + nu - 1.0)
            * (nf + a + b - 1.0)
            * (nf + mu + a - 1.0)
            * (nf + mu + b - 1.0)
            * (nf + nu + a - 1.0)
            * (nf + nu + b - 1.0)
            * (nf + s - 2.0)
            / ((2.0 * nf + s - 3.0) * (2.0 * nf + s - 1.0)))
            .sqrt()
            / (2.0 * nf + s - 2.0);
        let upper = ((nf + 1.0)
            * (nf + mu + nu)
            * (nf + a + b)
            * (nf + mu + a)
            * (nf + mu + b)
            * (nf + nu + a)
            * (nf + nu + b)
            * (nf + s - 1.0)
            / ((2.0 * nf + s - 1.0) * (2.0 * nf + s + 1.0)))
            .sqrt()
            / (2.0 * nf + s);
        let r = y2 * w[n] - (row.diag * w[n] - lower * w[n - 1] - upper * w[n + 1]);
        worst = worst.max(r.abs() / scale);
    }
    Ok(worst)
}

/// The continuous weight ρ(y) with its constant prefactor precomputed.
#[derive(Debug, Clone, Copy)]
pub struct WilsonWeight {
    params: WilsonParams,
    ln_const: f64,
}

impl WilsonWeight {
    pub fn new(p: &WilsonParams) -> Result<Self> {
        let WilsonParams { mu, nu, a, b } = *p;
        let mut ln_const = ln_gamma_real(p.sum())?.ln_abs - (2.0 * PI).ln();
        for x in [mu + nu, a + b, mu + a, mu + b, nu + a, nu + b] {
            let g = ln_gamma_real(x).map_err(|_| {
                Error::Param(format!(
                    "gamma pole in the weight prefactor at argument {x}"
                ))
            })?;
            if g.sign < 0.0 {
                return Err(Error::Param(format!(
                    "weight prefactor is negative (Γ({x}) < 0)"
                )));
            }
            ln_const -= g.ln_abs;
        }
        Ok(Self {
            params: *p,
            ln_const,
        })
    }

    /// ln ρ(y) for y > 0.
    pub fn ln_eval(&self, y: f64) -> Result<f64> {
        let WilsonParams { mu, nu, a, b } = self.params;
        let i = Complex64::new(0.0, y);
        let ln_ratio = gamma_ratio_ln_abs(&[
            (mu + i, 1),
            (nu + i, 1),
            (a + i, 1),
            (b + i, 1),
            (2.0 * i, -1),
        ])?;
        Ok(self.ln_const + 2.0 * ln_ratio)
    }

    pub fn eval(&self, y: f64) -> Result<f64> {
        if !y.is_finite() || y < 0.0 {
            return Err(Error::Domain(format!("weight needs y ≥ 0, got {y}")));
        }
        if y == 0.0 {
            return Ok(0.0);
        }
        Ok(self.ln_eval(y)?.exp())
    }
}

/// Normalized continuous weight ρ(y).
pub fn wilson_weight(y: f64, p: &WilsonParams) -> Result<f64> {
    WilsonWeight::new(p)?.eval(y)
}

/// Gram matrix of the orthonormal Wₙ under ρ, and its distance from I.
#[derive(Debug, Clone, PartialEq)]
pub struct GramReport {
    pub matrix: Vec<Vec<f64>>,
    /// max |G − I| over all entries
    pub max_deviation: f64,
    pub max_off_diagonal: f64,
    pub max_diagonal_deviation: f64,
    pub quadrature_error: f64,
}

impl GramReport {
    pub(crate) fn from_matrix(matrix: Vec<Vec<f64>>, quadrature_error: f64) -> Self {
        let mut off: f64 = 0.0;
        let mut diag: f64 = 0.0;
        for (i, row) in matrix.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if i == j {
                    diag = diag.max((v - 1.0).abs());
                } else {
                    off = off.max(v.abs());
                }
            }
        }
        Self {
            matrix,
            max_deviation: off.max(diag),
            max_off_diagonal: off,
            max_diagonal_deviation: diag,
            quadrature_error,
        }
    }
}

/// Packed index of (i, j), i ≤ j, in the upper triangle of an order-`dim` matrix.
pub(crate) fn triangle_index(i: usize, j: usize, dim: usize) -> usize {
    i * dim - i * (i + 1) / 2 + j
}

/// Orthonormal W₀..W_{n_max} at y², from the recursion.
pub(crate) fn orthonormal_values(
    n_max: usize,
    y2: f64,
    p: &WilsonParams,
    factors: &[f64],
    out: &mut [f64],
) -> Result<()> {
    let table = wilson_recursion(n_max, y2, p)?;
    for ((o, v), f) in out.iter_mut().zip(table.values.iter()).zip(factors) {
        *o = v * f;
    }
    Ok(())
}

/// Continuous-part Gram matrix ∫ρ WₙWₘ dy, n, m ≤ n_max. Returns the
/// packed upper triangle.
pub(crate) fn continuous_gram(
    n_max: usize,
    p: &WilsonParams,
    tol: f64,
) -> Result<(Vec<Vec<f64>>, f64)> {
    let weight = WilsonWeight::new(p)?;
    let factors = wilson_norm_factors(n_max, p)?;
    let dim = n_max + 1;
    let packed = dim * (dim + 1) / 2;
    let mut w = vec![0.0; dim];
    let mut failure: Option<Error> = None;
    let result = integrate_semiaxis_vec(
        |y, out: &mut [f64]| {
            let rho = match weight.eval(y) {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    out.iter_mut().for_each(|o| *o = f64::NAN);
                    return;
                }
            };
            if let Err(e) = orthonormal_values(n_max, y * y, p, &factors, &mut w) {
                failure.get_or_insert(e);
                out.iter_mut().for_each(|o| *o = f64::NAN);
                return;
            }
            for i in 0..dim {
                for j in i..dim {
                    out[triangle_index(i, j, dim)] = rho * w[i] * w[j];
                }
            }
        },
        packed,
        tol,
        2.0 * PI,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let result = result?;
    let mut matrix = vec![vec![0.0; dim]; dim];
    for i in 0..dim {
        for j in i..dim {
            let v = result.values[triangle_index(i, j, dim)];
            matrix[i][j] = v;
            matrix[j][i] = v;
        }
    }
    Ok((matrix, result.error_estimate))
}

/// Gram matrix of W₀..W_{n_max} under the continuous weight (scattering
/// regime only).
pub fn wilson_orthogonality_matrix(n_max: usize, p: &WilsonParams, tol: f64) -> Result<GramReport> {
    if p.regime() != Regime::Scattering {
        return Err(Error::Regime(format!(
            "continuous orthogonality alone needs μ ≥ 0 (regime {:?}); use the mixed check",
            p.regime()
        )));
    }
    let (matrix, err) = continuous_gram(n_max, p, tol)?;
    Ok(GramReport::from_matrix(matrix, err))
}

/// Both sides of the generating-function identity at (y, t).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratingCheck {
    pub series: f64,
    pub closed_form: ComplexValue,
    /// |series − closed_form|
    pub residual: f64,
}

/// Compares Σ_{n ≤ n_trunc} W̃ₙ tⁿ against ₂F₁(μ+iy, ν+iy; μ+ν; t)·₂F₁(a−iy, b−iy; a+b; t).
pub fn wilson_generating_check(
    p: &WilsonParams,
    y: f64,
    t: f64,
    n_trunc: usize,
) -> Result<GeneratingCheck> {
    if !(t.abs() < 1.0) {
        return Err(Error::Domain(format!(
            "generating function needs |t| < 1, got {t}"
        )));
    }
    let table = wilson_recursion(n_trunc, y * y, p)?;
    let mut acc = CompensatedSum::new();
    let mut tp = 1.0;
    for v in &table.values {
        acc.add(v * tp);
        tp *= t;
    }
    let i = Complex64::new(0.0, y);
    let c = |x: f64| Complex64::new(x, 0.0);
    let tc = c(t);
    let left = hyp2f1_series(p.mu + i, p.nu + i, c(p.mu + p.nu), tc)?;
    let right = hyp2f1_series(p.a - i, p.b - i, c(p.a + p.b), tc)?;
    let closed_form = left * right;
    let series = acc.value();
    Ok(GeneratingCheck {
        series,
        closed_form,
        residual: (closed_form - series).norm(),
    })
}

/// Modulus and argument of A(iy) = Γ(2iy)/(Γ(μ+iy)Γ(ν+iy)Γ(a+iy)Γ(b+iy)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amplitude {
    pub magnitude: f64,
    pub phase: f64,
}

fn amplitude_terms(y: f64, p: &WilsonParams) -> [(ComplexValue, i32); 5] {
    let i = Complex64::new(0.0, y);
    [
        (2.0 * i, 1),
        (p.mu + i, -1),
        (p.nu + i, -1),
        (p.a + i, -1),
        (p.b + i, -1),
    ]
}

pub fn scattering_amplitude(y: f64, p: &WilsonParams) -> Result<Amplitude> {
    if !(y.is_finite() && y > 0.0) {
        return Err(Error::Domain(format!("amplitude needs y > 0, got {y}")));
    }
    let terms = amplitude_terms(y, p);
    Ok(Amplitude {
        magnitude: gamma_ratio_ln_abs(&terms)?.exp(),
        phase: gamma_ratio_arg(&terms)?,
    })
}

/// A(z) on the real axis, z > 0, where the bound-state roots sit
/// (z = −(m+μ) makes Γ(μ+z) = Γ(−m) infinite).
pub fn amplitude_real_axis(z: f64, p: &WilsonParams) -> Result<f64> {
    if !(z.is_finite() && z > 0.0) {
        return Err(Error::Domain(format!(
            "real-axis amplitude needs z > 0, got {z}"
        )));
    }
    Ok(gamma_real(2.0 * z)?
        * rgamma_real(p.mu + z)
        * rgamma_real(p.nu + z)
        * rgamma_real(p.a + z)
        * rgamma_real(p.b + z))
}

/// B(μ, ν, a, b) of the orthonormal asymptotics Wₙ ≈ B√(2/n)·2|A|cos(2y ln n + arg A).
pub fn asymptotic_constant(p: &WilsonParams) -> Result<f64> {
    let WilsonParams { mu, nu, a, b } = *p;
    let mut ln = -ln_gamma_real(p.sum())?.ln_abs;
    for x in [mu + nu, a + b, mu + a, mu + b, nu + a, nu + b] {
        ln += ln_gamma_real(x)?.ln_abs;
    }
    Ok((0.5 * ln).exp())
}

/// Fitted amplitude c and phase φ of n·W̃ₙ ≈ c·cos(2y ln n + φ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticFit {
    pub amplitude: f64,
    pub phase: f64,
}

impl AsymptoticFit {
    /// The amplitude the asymptotic formula predicts, 2Γ(μ+ν)Γ(a+b)|A(iy)|.
    pub fn predicted_amplitude(p: &WilsonParams, y: f64) -> Result<f64> {
        let amp = scattering_amplitude(y, p)?;
        Ok(2.0 * gamma_real(p.mu + p.nu)? * gamma_real(p.a + p.b)? * amp.magnitude)
    }
}

/// Linear least-squares fit of n·W̃ₙ on (cos 2y ln n, sin 2y ln n) over the
/// window [lo, hi].
pub fn wilson_asymptotic_fit(
    p: &WilsonParams,
    y: f64,
    window: (usize, usize),
) -> Result<AsymptoticFit> {
    let (lo, hi) = window;
    if 2 * lo < 500 || hi < 2 * lo {
        return Err(Error::Domain(format!(
            "fit window needs hi ≥ 2·lo ≥ 500, got ({lo}, {hi})"
        )));
    }
    if !y.is_finite() {
        return Err(Error::NonFinite("y"));
    }
    let table = wilson_recursion(hi, y * y, p)?;
    let (mut cc, mut cs, mut ss, mut fc, mut fs) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for n in lo..=hi {
        let theta = 2.0 * y * (n as f64).ln();
        let (sn, cn) = theta.sin_cos();
        let f = n as f64 * table.values[n];
        cc += cn * cn;
        cs += cn * sn;
        ss += sn * sn;
        fc += f * cn;
        fs += f * sn;
    }
    let det = cc * ss - cs * cs;
    if !(det > 1e-10 * cc * ss) {
        return Err(Error::FitDegenerate { det });
    }
    let c_cos = (fc * ss - fs * cs) / det;
    let c_sin = (cc * fs - cs * fc) / det;
    // c_cos·cos θ + c_sin·sin θ = A cos(θ + φ) with A cos φ = c_cos, A sin φ = −c_sin
    Ok(AsymptoticFit {
        amplitude: c_cos.hypot(c_sin),
        phase: wrap_phase((-c_sin).atan2(c_cos)),
    })
}

/// log Γ is exposed for callers that need the raw amplitude pieces.
pub fn ln_amplitude_complex(y: f64, p: &WilsonParams) -> Result<ComplexValue> {
    let mut acc = Complex64::new(0.0, 0.0);
    for (z, s) in amplitude_terms(y, p) {
        acc += f64::from(s) * log_gamma(z)?;
    }
    Ok(acc)
}
