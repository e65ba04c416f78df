//! Physical observables of the Wilson–Racah system: energy maps, the
//! scattering phase shift, bound-state spectra, the mixed
//! continuous-plus-discrete orthogonality, the configuration-space bases and
//! wavefunction synthesis.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_real_line_vec, integrate_semiaxis_vec};
use crate::racah::{racah_normalize, RacahOrthonormal, RacahParams};
use crate::special::{ln_factorial, ln_gamma_real, ln_pochhammer, ComplexValue, SignedLog};
use crate::wilson::{
    amplitude_real_axis, asymptotic_constant, bound_state_y2, continuous_gram,
    scattering_amplitude, wilson_norm_factors, wilson_recursion, wilson_series, GramReport, Regime,
    WilsonParams, WilsonWeight,
};

/// L2 remainder above which a synthesized state is flagged as truncated.
pub const TRUNCATION_WARNING: f64 = 1e-4;

/// How the polynomial argument y depends on the energy E.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MapKind {
    /// y = √(2E)/λ
    Direct,
    /// y = λ/k with E = k²/2
    Inverse,
    /// y = √ln(1 + k²/λ²) with E = k²/2
    Log,
}

/// Energy map with its inverse length scale λ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyMap {
    pub kind: MapKind,
    pub lambda: f64,
}

impl EnergyMap {
    pub fn new(kind: MapKind, lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::Constraint(format!("λ > 0 violated (λ = {lambda})")));
        }
        Ok(Self { kind, lambda })
    }

    /// y(E) for a scattering energy.
    pub fn apply(&self, energy: f64) -> Result<f64> {
        let l = self.lambda;
        match self.kind {
            MapKind::Direct if energy >= 0.0 => Ok((2.0 * energy).sqrt() / l),
            MapKind::Inverse if energy > 0.0 => Ok(l / (2.0 * energy).sqrt()),
            MapKind::Log if energy >= 0.0 => Ok((2.0 * energy / (l * l)).ln_1p().sqrt()),
            _ => Err(Error::Domain(format!(
                "energy {energy} outside the {:?} map's domain",
                self.kind
            ))),
        }
    }

    /// E(y) for y > 0 (y = 0 allowed where the map reaches the threshold).
    pub fn invert(&self, y: f64) -> Result<f64> {
        let ok = match self.kind {
            MapKind::Inverse => y > 0.0,
            _ => y >= 0.0,
        };
        if !(ok && y.is_finite()) {
            return Err(Error::Domain(format!(
                "y = {y} outside the {:?} map's range",
                self.kind
            )));
        }
        self.energy_from_y2(y * y)
    }

    /// E as a function of y², analytically continued to y² < 0, where the
    /// bound states sit.
    pub fn energy_from_y2(&self, y2: f64) -> Result<f64> {
        let l2 = self.lambda * self.lambda;
        match self.kind {
            MapKind::Direct => Ok(0.5 * l2 * y2),
            MapKind::Inverse if y2 != 0.0 => Ok(0.5 * l2 / y2),
            MapKind::Inverse => Err(Error::Domain(
                "the inverse map sends y² = 0 to infinite energy".into(),
            )),
            MapKind::Log => Ok(0.5 * l2 * y2.exp_m1()),
        }
    }
}

/// Scattering phase shift δ = arg A(iy) in (−π, π].
pub fn phase_shift(y: f64, p: &WilsonParams) -> Result<f64> {
    Ok(scattering_amplitude(y, p)?.phase)
}

/// N = ⌊−μ⌋, the largest bound-state index; 0 when μ ≥ 0.
pub fn bound_state_count(p: &WilsonParams) -> usize {
    if p.mu >= 0.0 {
        0
    } else {
        (-p.mu).floor() as usize
    }
}

/// One bound state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundState {
    pub m: usize,
    /// Root location y = −(m+μ) on the positive real axis of iy.
    pub y: f64,
    /// y² = −(m+μ)² fed to the polynomials.
    pub y_squared: f64,
    /// None where the map is singular (threshold state under the inverse map).
    pub energy: Option<f64>,
    /// m = −μ exactly: the state sits at the threshold y = 0.
    pub threshold: bool,
}

/// All bound states m = 0..N of a system with μ < 0.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundSpectrum {
    pub params: WilsonParams,
    pub map: EnergyMap,
    /// N = ⌊−μ⌋; the states are indexed 0..=N.
    pub count_index: usize,
    pub states: Vec<BoundState>,
}

impl BoundSpectrum {
    /// Number of states strictly below threshold.
    pub fn proper_count(&self) -> usize {
        self.states.iter().filter(|s| !s.threshold).count()
    }
}

pub fn bound_spectrum(p: &WilsonParams, map: &EnergyMap) -> Result<BoundSpectrum> {
    if p.mu >= 0.0 {
        return Err(Error::Regime(format!(
            "bound states need μ < 0 (μ = {}); all-positive parameters give no bound states",
            p.mu
        )));
    }
    let count_index = bound_state_count(p);
    let states = (0..=count_index)
        .map(|m| {
            let y = -(m as f64 + p.mu);
            let y_squared = bound_state_y2(p.mu, m);
            let threshold = y == 0.0;
            let energy = map.energy_from_y2(y_squared).ok();
            BoundState {
                m,
                y,
                y_squared,
                energy,
                threshold,
            }
        })
        .collect();
    Ok(BoundSpectrum {
        params: *p,
        map: *map,
        count_index,
        states,
    })
}

/// A zero of the amplitude coming from one of the gamma factors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeZero {
    /// Which parameter's gamma factor produces the zero: "mu", "nu", "a", "b".
    pub branch: &'static str,
    pub m: usize,
    /// iy = −(m + parameter) > 0
    pub y: f64,
}

/// Every positive root iy = −(m + x) for x ∈ {μ, ν, a, b} negative. Only the
/// μ branch carries a normalization in this library.
pub fn amplitude_zero_branches(p: &WilsonParams) -> Vec<AmplitudeZero> {
    let mut out = Vec::new();
    for (branch, x) in [("mu", p.mu), ("nu", p.nu), ("a", p.a), ("b", p.b)] {
        if x < 0.0 {
            for m in 0..=(-x).floor() as usize {
                let y = -(m as f64 + x);
                if y > 0.0 {
                    out.push(AmplitudeZero { branch, m, y });
                }
            }
        }
    }
    out
}

/// |A| at every bound-state root (exactly zero when the root is exact).
pub fn amplitude_at_bound_roots(spectrum: &BoundSpectrum) -> Result<Vec<f64>> {
    spectrum
        .states
        .iter()
        .filter(|s| !s.threshold)
        .map(|s| amplitude_real_axis(s.y, &spectrum.params).map(f64::abs))
        .collect()
}

/// Discrete-part weights of the mixed orthogonality, one per bound index
/// m = 0..N.
pub fn discrete_weights(p: &WilsonParams) -> Result<Vec<f64>> {
    if p.mu >= 0.0 {
        return Ok(Vec::new());
    }
    let WilsonParams { mu, nu, a, b } = *p;
    let s = p.sum();
    let g = |x: f64| -> Result<SignedLog> {
        ln_gamma_real(x).map_err(|_| Error::Param(format!("gamma pole at {x} in discrete weight")))
    };
    let constant = g(s)?
        .mul(g(nu - mu)?)
        .mul(g(a - mu)?)
        .mul(g(b - mu)?)
        .div(
            g(1.0 - 2.0 * mu)?
                .mul(g(a + b)?)
                .mul(g(a + nu)?)
                .mul(g(b + nu)?),
        )
        .ok_or_else(|| Error::Param("discrete weight constant is singular".into()))?;
    let constant = -2.0 * constant.value();
    (0..=bound_state_count(p))
        .map(|m| {
            let mut top = SignedLog::from_value(m as f64 + mu);
            for x in [2.0 * mu, mu + nu, mu + a, mu + b] {
                top = top.mul(ln_pochhammer(x, m)?);
            }
            let mut bottom = SignedLog::new(ln_factorial(m), 1.0);
            for x in [mu - nu + 1.0, mu - a + 1.0, mu - b + 1.0] {
                bottom = bottom.mul(ln_pochhammer(x, m)?);
            }
            let v = top.div(bottom).ok_or_else(|| {
                Error::Param(format!(
                    "Pochhammer pole in the discrete weight at m = {m} (μ−ν+1, μ−a+1 or μ−b+1 a non-positive integer)"
                ))
            })?;
            Ok(constant * v.value())
        })
        .collect()
}

/// Continuous, discrete and combined Gram matrices of the orthonormal Wₙ.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedOrthogonalityReport {
    pub continuous: Vec<Vec<f64>>,
    pub discrete: Vec<Vec<f64>>,
    pub discrete_weights: Vec<f64>,
    /// max |continuous + discrete − I|
    pub residual: f64,
    pub quadrature_error: f64,
}

/// Orthonormal Wₙ(y²) for n = 0..=n_max from the ₄F₃ series.
fn orthonormal_series_values(n_max: usize, y2: f64, p: &WilsonParams) -> Result<Vec<f64>> {
    let factors = wilson_norm_factors(n_max, p)?;
    (0..=n_max)
        .map(|n| Ok(factors[n] * wilson_series(n, y2, p)?))
        .collect()
}

/// Checks the continuous-plus-discrete orthogonality for n, n' ≤ n_max.
/// With μ ≥ 0 the discrete part is empty and this is the pure continuous
/// relation.
pub fn mixed_orthogonality_check(
    p: &WilsonParams,
    n_max: usize,
    tol: f64,
) -> Result<MixedOrthogonalityReport> {
    if p.regime() == Regime::Confined {
        return Err(Error::Regime(
            "continuous weight needs ν, a, b and all pairwise sums positive".into(),
        ));
    }
    let (continuous, quadrature_error) = continuous_gram(n_max, p, tol)?;
    let weights = discrete_weights(p)?;
    let dim = n_max + 1;
    let mut discrete = vec![vec![0.0; dim]; dim];
    for (m, w) in weights.iter().enumerate() {
        let v = orthonormal_series_values(n_max, bound_state_y2(p.mu, m), p)?;
        for i in 0..dim {
            for j in 0..dim {
                discrete[i][j] += w * v[i] * v[j];
            }
        }
    }
    let combined: Vec<Vec<f64>> = continuous
        .iter()
        .zip(&discrete)
        .map(|(c, d)| c.iter().zip(d).map(|(x, y)| x + y).collect())
        .collect();
    let residual = GramReport::from_matrix(combined, quadrature_error).max_deviation;
    Ok(MixedOrthogonalityReport {
        continuous,
        discrete,
        discrete_weights: weights,
        residual,
        quadrature_error,
    })
}

/// Configuration-space basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisKind {
    /// φₙ(x) ∝ e^(−λ²x²/2) Hₙ(λx) on the real line.
    Hermite1d,
    /// φₙ(r) ∝ (λr)^(ℓ+½) e^(−λr/2) Lₙ^(2ℓ+1)(λr) on r ≥ 0.
    LaguerreRadial { ell: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisSpec {
    pub kind: BasisKind,
    pub lambda: f64,
}

impl BasisSpec {
    pub fn new(kind: BasisKind, lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::Constraint(format!("λ > 0 violated (λ = {lambda})")));
        }
        Ok(Self { kind, lambda })
    }

    pub fn hermite(lambda: f64) -> Result<Self> {
        Self::new(BasisKind::Hermite1d, lambda)
    }

    pub fn laguerre(ell: u32, lambda: f64) -> Result<Self> {
        Self::new(BasisKind::LaguerreRadial { ell }, lambda)
    }
}

/// Rescale threshold keeping recurrences away from overflow; the removed
/// magnitude is carried as a logarithm.
const RESCALE: f64 = 1e150;

/// φ₀..φ_{n_max} at one coordinate, orthonormal in x (or r) for any λ.
pub fn basis_values(spec: &BasisSpec, n_max: usize, coord: f64) -> Result<Vec<f64>> {
    if !coord.is_finite() {
        return Err(Error::NonFinite("basis coordinate"));
    }
    let xi = spec.lambda * coord;
    let (mut values, ln_envelope) = match spec.kind {
        BasisKind::Hermite1d => hermite_scaled(n_max, xi),
        BasisKind::LaguerreRadial { ell } => {
            if coord < 0.0 {
                return Err(Error::Domain(format!("radial coordinate r = {coord} < 0")));
            }
            if coord == 0.0 {
                return Ok(vec![0.0; n_max + 1]);
            }
            laguerre_scaled(n_max, xi, ell)?
        }
    };
    let sqrt_lambda = spec.lambda.sqrt();
    for (v, ln) in values.iter_mut().zip(ln_envelope) {
        *v = if *v == 0.0 {
            0.0
        } else {
            sqrt_lambda * *v * ln.exp()
        };
    }
    Ok(values)
}

/// φₙ at one coordinate.
pub fn basis_eval(spec: &BasisSpec, n: usize, coord: f64) -> Result<f64> {
    Ok(basis_values(spec, n, coord)?[n])
}

/// Normalized Hermite functions of ξ as (mantissa, log scale) pairs.
fn hermite_scaled(n_max: usize, xi: f64) -> (Vec<f64>, Vec<f64>) {
    let mut vals = Vec::with_capacity(n_max + 1);
    let mut logs = Vec::with_capacity(n_max + 1);
    let mut ln_scale = -0.25 * PI.ln() - 0.5 * xi * xi;
    let (mut prev, mut cur) = (0.0, 1.0);
    vals.push(cur);
    logs.push(ln_scale);
    for n in 0..n_max {
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * xi * cur - (nf / (nf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            prev /= RESCALE;
            cur /= RESCALE;
            ln_scale += RESCALE.ln();
        }
        vals.push(cur);
        logs.push(ln_scale);
    }
    (vals, logs)
}

/// Normalized radial Laguerre functions of ξ > 0 as (mantissa, log scale).
fn laguerre_scaled(n_max: usize, xi: f64, ell: u32) -> Result<(Vec<f64>, Vec<f64>)> {
    let alpha = 2.0 * f64::from(ell) + 1.0;
    let mut ln_scale =
        (f64::from(ell) + 0.5) * xi.ln() - 0.5 * xi - 0.5 * ln_gamma_real(alpha + 1.0)?.ln_abs;
    let mut vals = Vec::with_capacity(n_max + 1);
    let mut logs = Vec::with_capacity(n_max + 1);
    let (mut prev, mut cur) = (0.0, 1.0);
    vals.push(cur);
    logs.push(ln_scale);
    for n in 0..n_max {
        let nf = n as f64;
        let next = ((2.0 * nf + alpha + 1.0 - xi) * cur - (nf * (nf + alpha)).sqrt() * prev)
            / ((nf + 1.0) * (nf + alpha + 1.0)).sqrt();
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            prev /= RESCALE;
            cur /= RESCALE;
            ln_scale += RESCALE.ln();
        }
        vals.push(cur);
        logs.push(ln_scale);
    }
    Ok((vals, logs))
}

/// Wavefunction samples on a coordinate grid.
#[derive(Debug, Clone, PartialEq)]
pub struct WavefunctionGrid {
    pub coordinates: Vec<f64>,
    /// Complex in general: the discrete weights and norms may be negative,
    /// making the coefficients imaginary.
    pub values: Vec<ComplexValue>,
    /// Number of basis terms summed.
    pub n_trunc: usize,
    /// Bound on the neglected part (0 for finite expansions).
    pub tail_estimate: f64,
    /// tail_estimate exceeds [`TRUNCATION_WARNING`].
    pub truncation_warning: bool,
}

fn expand(
    coefficients: &[ComplexValue],
    spec: &BasisSpec,
    grid: &[f64],
) -> Result<Vec<ComplexValue>> {
    let n_max = coefficients.len().saturating_sub(1);
    grid.iter()
        .map(|&x| {
            let phi = basis_values(spec, n_max, x)?;
            Ok(coefficients.iter().zip(&phi).map(|(c, f)| c * f).sum())
        })
        .collect()
}

/// ψₘ of a confined (Racah) system from precomputed orthonormal data: the
/// finite sum Σₙ √ρ(m) Rₙ(m) φₙ.
pub fn synthesize_from_orthonormal(
    o: &RacahOrthonormal,
    m: usize,
    spec: &BasisSpec,
    grid: &[f64],
) -> Result<WavefunctionGrid> {
    if m > o.params.big_n {
        return Err(Error::Domain(format!(
            "m = {m} exceeds N = {}",
            o.params.big_n
        )));
    }
    let coefficients: Vec<ComplexValue> = o.u.iter().map(|row| row[m]).collect();
    Ok(WavefunctionGrid {
        coordinates: grid.to_vec(),
        values: expand(&coefficients, spec, grid)?,
        n_trunc: coefficients.len(),
        tail_estimate: 0.0,
        truncation_warning: false,
    })
}

/// ψₘ of a confined (Racah) system.
pub fn synthesize_bound_state(
    r: &RacahParams,
    m: usize,
    spec: &BasisSpec,
    grid: &[f64],
) -> Result<WavefunctionGrid> {
    synthesize_from_orthonormal(&racah_normalize(r)?, m, spec, grid)
}

/// Expansion coefficients √ρ(y) Wₙ(y²), n < n_trunc, of a scattering state.
pub fn scattering_coefficients(p: &WilsonParams, y: f64, n_trunc: usize) -> Result<Vec<f64>> {
    if n_trunc == 0 {
        return Err(Error::Domain("n_trunc must be at least 1".into()));
    }
    let weight = WilsonWeight::new(p)?.eval(y)?;
    let factors = wilson_norm_factors(n_trunc - 1, p)?;
    let table = wilson_recursion(n_trunc - 1, y * y, p)?;
    let root = weight.sqrt();
    Ok(table
        .values
        .iter()
        .zip(&factors)
        .map(|(w, f)| root * w * f)
        .collect())
}

/// Continuum state at y, truncated to n_trunc basis terms. The sum converges
/// only conditionally; the tail estimate bounds the next dyadic block
/// n_trunc..2·n_trunc−1 by the large-n envelope of Wₙ (with 10% slack).
pub fn synthesize_scattering_state(
    p: &WilsonParams,
    y: f64,
    spec: &BasisSpec,
    grid: &[f64],
    n_trunc: usize,
) -> Result<WavefunctionGrid> {
    if !(y.is_finite() && y > 0.0) {
        return Err(Error::Domain(format!(
            "scattering state needs y > 0, got {y}"
        )));
    }
    let coefficients: Vec<ComplexValue> = scattering_coefficients(p, y, n_trunc)?
        .into_iter()
        .map(|c| Complex64::new(c, 0.0))
        .collect();
    let values = expand(&coefficients, spec, grid)?;
    let root = WilsonWeight::new(p)?.eval(y)?.sqrt();
    let envelope = 2.0 * asymptotic_constant(p)? * scattering_amplitude(y, p)?.magnitude;
    let mut tail: f64 = 0.0;
    for &x in grid {
        let phi = basis_values(spec, 2 * n_trunc - 1, x)?;
        let block: f64 = (n_trunc.max(1)..2 * n_trunc)
            .map(|n| 1.1 * envelope * (2.0 / n as f64).sqrt() * phi[n].abs())
            .sum();
        tail = tail.max(root * block);
    }
    Ok(WavefunctionGrid {
        coordinates: grid.to_vec(),
        values,
        n_trunc,
        tail_estimate: tail,
        truncation_warning: tail > TRUNCATION_WARNING,
    })
}

/// Expansion coefficients √wₘ Wₙ(−(m+μ)²), n < n_trunc, of the m-th bound
/// state of a mixed system (wₘ the discrete weight).
pub fn mixed_bound_coefficients(
    p: &WilsonParams,
    m: usize,
    n_trunc: usize,
) -> Result<Vec<ComplexValue>> {
    if n_trunc == 0 {
        return Err(Error::Domain("n_trunc must be at least 1".into()));
    }
    let weights = discrete_weights(p)?;
    let w = *weights.get(m).ok_or_else(|| {
        Error::Domain(format!(
            "m = {m} exceeds the bound-state index N = {}",
            weights.len().saturating_sub(1)
        ))
    })?;
    let root = Complex64::new(w, 0.0).sqrt();
    let factors = wilson_norm_factors(n_trunc - 1, p)?;
    let table = wilson_recursion(n_trunc - 1, bound_state_y2(p.mu, m), p)?;
    Ok(table
        .values
        .iter()
        .zip(&factors)
        .map(|(v, f)| root * (v * f))
        .collect())
}

/// Bound state m of a mixed system, truncated to n_trunc terms. The
/// coefficients have unit total norm, so the L2 norm of the neglected part
/// is exactly √(1 − Σ_{n<n_trunc} |cₙ|²).
pub fn synthesize_mixed_bound_state(
    p: &WilsonParams,
    m: usize,
    spec: &BasisSpec,
    grid: &[f64],
    n_trunc: usize,
) -> Result<WavefunctionGrid> {
    if p.regime() != Regime::Mixed {
        return Err(Error::Regime(format!(
            "mixed bound states need the mixed regime, got {:?}",
            p.regime()
        )));
    }
    let coefficients = mixed_bound_coefficients(p, m, n_trunc)?;
    let captured: f64 = coefficients.iter().map(|c| c.norm_sqr()).sum();
    let tail = (1.0 - captured).max(0.0).sqrt();
    Ok(WavefunctionGrid {
        coordinates: grid.to_vec(),
        values: expand(&coefficients, spec, grid)?,
        n_trunc,
        tail_estimate: tail,
        truncation_warning: tail > TRUNCATION_WARNING,
    })
}

/// Coordinate-space overlaps of the confined bound states.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundOverlapReport {
    /// max |∫ψₘψₘ' − δ| (bilinear, no conjugation)
    pub bilinear_deviation: f64,
    /// max |∫ψₘ*ψₘ' − δ|
    pub hermitian_deviation: f64,
    /// max |ψₘ(0)|; zero for radial bases
    pub origin_value: f64,
    pub quadrature_error: f64,
}

/// Integrates ψₘψₘ' over the basis domain for all m, m' ≤ N.
pub fn bound_state_overlaps(
    r: &RacahParams,
    spec: &BasisSpec,
    tol: f64,
) -> Result<BoundOverlapReport> {
    let o = racah_normalize(r)?;
    let size = o.size();
    let pairs: Vec<(usize, usize)> = (0..size)
        .flat_map(|i| (i..size).map(move |j| (i, j)))
        .collect();
    // per pair: Re/Im of ψᵢψⱼ and Re/Im of ψᵢ*ψⱼ
    let dim = 4 * pairs.len();
    let mut failure: Option<Error> = None;
    let mut integrand = |x: f64, out: &mut [f64]| {
        let phi = match basis_values(spec, size - 1, x) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                out.iter_mut().for_each(|o| *o = f64::NAN);
                return;
            }
        };
        let psi: Vec<ComplexValue> = (0..size)
            .map(|m| (0..size).map(|n| o.u[n][m] * phi[n]).sum())
            .collect();
        for (k, &(i, j)) in pairs.iter().enumerate() {
            let b = psi[i] * psi[j];
            let h = psi[i].conj() * psi[j];
            out[4 * k..4 * k + 4].copy_from_slice(&[b.re, b.im, h.re, h.im]);
        }
    };
    let result = match spec.kind {
        BasisKind::Hermite1d => integrate_real_line_vec(&mut integrand, dim, tol),
        BasisKind::LaguerreRadial { .. } => {
            integrate_semiaxis_vec(&mut integrand, dim, tol, 0.5 * spec.lambda)
        }
    };
    if let Some(e) = failure {
        return Err(e);
    }
    let result = result?;
    let (mut bilinear, mut hermitian): (f64, f64) = (0.0, 0.0);
    for (k, &(i, j)) in pairs.iter().enumerate() {
        let target = if i == j { 1.0 } else { 0.0 };
        let v = &result.values[4 * k..4 * k + 4];
        bilinear = bilinear.max(Complex64::new(v[0] - target, v[1]).norm());
        hermitian = hermitian.max(Complex64::new(v[2] - target, v[3]).norm());
    }
    let phi0 = basis_values(spec, size - 1, 0.0)?;
    let origin_value = (0..size)
        .map(|m| {
            (0..size)
                .map(|n| o.u[n][m] * phi0[n])
                .sum::<ComplexValue>()
                .norm()
        })
        .fold(0.0, f64::max);
    Ok(BoundOverlapReport {
        bilinear_deviation: bilinear,
        hermitian_deviation: hermitian,
        origin_value,
        quadrature_error: result.error_estimate,
    })
}
