//! Racah polynomials on the finite lattice m = 0..N,
//!
//! ```text
//! R̄ₙᴺ(m) = ₄F₃(−n, −m, n+α+β+1, m−β+γ−N; α+1, γ+1, −N; 1),
//! R̃ₙᴺ(m) = (α+1)ₙ(γ+1)ₙ / ((α+β+N+2)ₙ n!) · R̄ₙᴺ(m),
//! ```
//!
//! with δ = −(N+β+1). They are the Wilson polynomials evaluated at
//! y² = −(m+μ)² under the parameter map α = μ+a−1, γ = μ+b−1, β = ν+b−1.
//!
//! The discrete weight and the squared norms are real but need not be
//! positive for admissible parameters; orthonormal values therefore use the
//! principal complex square root, and the resulting matrix U is complex
//! orthogonal (UUᵀ = I) rather than unitary when signs alternate.

use num_complex::Complex64;
use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::special::{
    dd_div, hyp2f1_series, ln_factorial, ln_pochhammer, CompensatedSum, ComplexValue, SignedLog,
};
use crate::wilson::WilsonParams;

/// Distance from zero below which a recursion denominator counts as vanishing.
const DEGENERATE_DENOMINATOR: f64 = 1e-12;

/// Tolerance on δ + N + β + 1 when importing Wilson parameters.
const MAP_TOLERANCE: f64 = 1e-12;

/// (α, β, γ, δ, N) with δ = −(N+β+1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RacahParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    /// Largest lattice point N (the lattice has N+1 points).
    pub big_n: usize,
}

impl RacahParams {
    /// Validated parameters; δ is derived, never supplied.
    pub fn new(alpha: f64, beta: f64, gamma: f64, big_n: usize) -> Result<Self> {
        if ![alpha, beta, gamma].iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("Racah parameters"));
        }
        let nf = big_n as f64;
        if alpha <= -1.0 {
            return Err(Error::Constraint(format!("α > −1 violated (α = {alpha})")));
        }
        if gamma <= -1.0 {
            return Err(Error::Constraint(format!("γ > −1 violated (γ = {gamma})")));
        }
        if beta <= nf - 1.0 {
            return Err(Error::Constraint(format!(
                "β > N−1 violated (β = {beta}, N = {big_n})"
            )));
        }
        Ok(Self {
            alpha,
            beta,
            gamma,
            delta: -(nf + beta + 1.0),
            big_n,
        })
    }

    /// Parameters with α↔γ and β↔δ interchanged. The result still satisfies
    /// δ = −(N+β+1) but generally not the validity bounds, so it is only
    /// used to evaluate dual quantities.
    pub fn dual(&self) -> Self {
        Self {
            alpha: self.gamma,
            beta: self.delta,
            gamma: self.alpha,
            delta: self.beta,
            big_n: self.big_n,
        }
    }

    fn n_f(&self) -> f64 {
        self.big_n as f64
    }

    /// γ−β−N = γ+δ+1, the shift appearing in ω and in the lattice.
    fn lattice_shift(&self) -> f64 {
        self.gamma - self.beta - self.n_f()
    }

    fn check_index(&self, what: &str, k: usize) -> Result<()> {
        if k > self.big_n {
            return Err(Error::Domain(format!(
                "{what} = {k} exceeds N = {}",
                self.big_n
            )));
        }
        Ok(())
    }
}

/// Wilson parameters (μ, ν, a, b) → Racah parameters. Only sets with
/// μ+ν = −N, i.e. δ = μ−b = −(N+β+1), are images of Racah systems.
pub fn map_wilson_to_racah(p: &WilsonParams, big_n: usize) -> Result<RacahParams> {
    let alpha = p.mu + p.a - 1.0;
    let gamma = p.mu + p.b - 1.0;
    let beta = p.nu + p.b - 1.0;
    let delta = p.mu - p.b;
    let mismatch = delta + big_n as f64 + beta + 1.0;
    if mismatch.abs() > MAP_TOLERANCE {
        return Err(Error::Constraint(format!(
            "δ = −(N+β+1) violated: μ+ν = {} but must equal −N = −{big_n}",
            p.mu + p.nu
        )));
    }
    RacahParams::new(alpha, beta, gamma, big_n)
}

/// Racah parameters → Wilson parameters (μ, ν, a, b). The image always has
/// μ+ν = −N and is classified as the confined regime.
pub fn map_racah_to_wilson(r: &RacahParams) -> WilsonParams {
    let RacahParams {
        alpha,
        beta,
        gamma,
        delta,
        ..
    } = *r;
    WilsonParams {
        mu: 0.5 * (gamma + delta + 1.0),
        nu: beta + 0.5 * (delta - gamma + 1.0),
        a: alpha - 0.5 * (gamma + delta - 1.0),
        b: 0.5 * (gamma - delta + 1.0),
    }
}

/// Which normalization of the Racah polynomial is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RacahForm {
    /// The bare ₄F₃, R̄ₙᴺ(m).
    Bare,
    /// The ₄F₃ times (α+1)ₙ(γ+1)ₙ/((α+β+N+2)ₙ n!), R̃ₙᴺ(m).
    Tilde,
}

/// Prefactor (α+1)ₙ(γ+1)ₙ/((α+β+N+2)ₙ n!) turning R̄ₙ into R̃ₙ.
pub fn tilde_prefactor(n: usize, r: &RacahParams) -> Result<f64> {
    let num = ln_pochhammer(r.alpha + 1.0, n)?.mul(ln_pochhammer(r.gamma + 1.0, n)?);
    let den = ln_pochhammer(r.alpha + r.beta + r.n_f() + 2.0, n)?
        .mul(SignedLog::new(ln_factorial(n), 1.0));
    num.div(den)
        .map(|v| v.value())
        .ok_or_else(|| Error::Param(format!("(α+β+N+2)_{n} vanishes")))
}

/// R̄ₙᴺ(m) or R̃ₙᴺ(m) from the doubly terminating ₄F₃ sum, carried in
/// double-double arithmetic.
pub fn racah_series(n: usize, m: usize, r: &RacahParams, form: RacahForm) -> Result<f64> {
    r.check_index("n", n)?;
    r.check_index("m", m)?;
    let (nf, mf, big) = (n as f64, m as f64, r.n_f());
    let upper_n = TwoFloat::from(r.alpha) + r.beta + (nf + 1.0);
    let upper_m = TwoFloat::from(r.gamma) - r.beta + (mf - big);
    let mut term = TwoFloat::from(1.0);
    let mut acc = term;
    for k in 0..n.min(m) {
        let kf = k as f64;
        let num = (upper_n + kf) * (upper_m + kf) * ((kf - nf) * (kf - mf));
        let dens = [
            TwoFloat::from(r.alpha) + (1.0 + kf),
            TwoFloat::from(r.gamma) + (1.0 + kf),
        ];
        if let Some(d) = dens.iter().find(|d| d.hi().abs() < DEGENERATE_DENOMINATOR) {
            return Err(Error::Param(format!(
                "4F3 denominator parameter vanishes at k = {k} (value {})",
                d.hi()
            )));
        }
        term = dd_div(term * num, dens[0] * dens[1] * ((kf - big) * (kf + 1.0)));
        acc += term;
    }
    let bare = f64::from(acc);
    match form {
        RacahForm::Bare => Ok(bare),
        RacahForm::Tilde => Ok(bare * tilde_prefactor(n, r)?),
    }
}

/// R̃₀ᴺ(m)..R̃_Nᴺ(m) for fixed m by forward three-term recursion in n with
/// eigenvalue ¼(N+β−γ−2m)², seeded by R̃₀ = 1 and R̃₋₁ = 0.
pub fn racah_recursion(r: &RacahParams, m: usize) -> Result<Vec<f64>> {
    r.check_index("m", m)?;
    let RacahParams {
        alpha: al,
        beta: be,
        gamma: ga,
        ..
    } = *r;
    let big = r.n_f();
    let mf = m as f64;
    let eigen = 0.25 * (big + be - ga - 2.0 * mf).powi(2);
    let base = 0.25 * (big + be - ga).powi(2);
    let mut values = Vec::with_capacity(r.big_n + 1);
    values.push(1.0);
    for n in 0..r.big_n {
        let nf = n as f64;
        let d0 = 2.0 * nf + al + be;
        let (d1, d2) = (d0 + 1.0, d0 + 2.0);
        // d0 only enters terms carrying an explicit factor n or R̃₋₁
        let mut checks = vec![d1, d2];
        if n > 0 {
            checks.push(d0);
        }
        if let Some(d) = checks
            .into_iter()
            .find(|d| d.abs() < DEGENERATE_DENOMINATOR)
        {
            return Err(Error::DegenerateRecursion { n, denominator: d });
        }
        let up = (nf - big) * (nf + al + 1.0) * (nf + ga + 1.0) * (nf + al + be + 1.0) / (d1 * d2);
        let (down, lower) = if n == 0 {
            (0.0, 0.0)
        } else {
            (
                nf * (nf + be) * (nf + al + be - ga) * (nf + big + al + be + 1.0) / (d0 * d1),
                (nf + al) * (nf + be) * (nf + ga) * (nf + al + be - ga) / (d0 * d1),
            )
        };
        let diag = base - up - down;
        let upper =
            (nf + 1.0) * (nf - big) * (nf + al + be + 1.0) * (nf + big + al + be + 2.0) / (d1 * d2);
        if upper.abs() < DEGENERATE_DENOMINATOR {
            return Err(Error::DegenerateRecursion {
                n,
                denominator: upper,
            });
        }
        let prev = if n == 0 { 0.0 } else { values[n - 1] };
        values.push(((eigen - diag) * values[n] - lower * prev) / upper);
    }
    Ok(values)
}

/// Real Racah values indexed `values[n][m]`, n, m = 0..N.
#[derive(Debug, Clone, PartialEq)]
pub struct RacahTable {
    pub params: RacahParams,
    pub values: Vec<Vec<f64>>,
    pub form: RacahForm,
}

/// The full table, built column by column (fixed m, recursion in n).
pub fn racah_table(r: &RacahParams, form: RacahForm) -> Result<RacahTable> {
    let size = r.big_n + 1;
    let mut values = vec![vec![0.0; size]; size];
    let prefactors = match form {
        RacahForm::Tilde => vec![1.0; size],
        RacahForm::Bare => (0..size)
            .map(|n| tilde_prefactor(n, r))
            .collect::<Result<Vec<_>>>()?,
    };
    for m in 0..size {
        for (n, v) in racah_recursion(r, m)?.into_iter().enumerate() {
            values[n][m] = v / prefactors[n];
        }
    }
    Ok(RacahTable {
        params: *r,
        values,
        form,
    })
}

/// The same table from the ₄F₃ series.
pub fn racah_series_table(r: &RacahParams, form: RacahForm) -> Result<RacahTable> {
    let size = r.big_n + 1;
    let values = (0..size)
        .map(|n| (0..size).map(|m| racah_series(n, m, r, form)).collect())
        .collect::<Result<Vec<Vec<f64>>>>()?;
    Ok(RacahTable {
        params: *r,
        values,
        form,
    })
}

fn pochhammer_ratio(num: &[(f64, usize)], den: &[(f64, usize)], what: &str) -> Result<SignedLog> {
    let mut top = SignedLog::one();
    for &(a, k) in num {
        top = top.mul(ln_pochhammer(a, k)?);
    }
    let mut bottom = SignedLog::one();
    for &(a, k) in den {
        bottom = bottom.mul(ln_pochhammer(a, k)?);
    }
    top.div(bottom)
        .ok_or_else(|| Error::Param(format!("pole in {what}")))
}

fn rational(num: f64, den: f64, what: &str) -> Result<SignedLog> {
    if den == 0.0 {
        return Err(Error::Param(format!("vanishing denominator in {what}")));
    }
    Ok(SignedLog::from_value(num / den))
}

/// ωᴺ(m), the unnormalized discrete weight.
pub fn omega(m: usize, r: &RacahParams) -> Result<f64> {
    r.check_index("m", m)?;
    let RacahParams {
        alpha: al,
        beta: be,
        gamma: ga,
        ..
    } = *r;
    let big = r.n_f();
    let shift = r.lattice_shift();
    let mf = m as f64;
    let ratio = rational(2.0 * mf + shift, mf + shift, "ω")?;
    let poch = pochhammer_ratio(
        &[(-big, m), (al + 1.0, m), (ga + 1.0, m), (shift + 1.0, m)],
        &[(-be - big, m), (ga - be + 1.0, m), (ga - al - be - big, m)],
        "ω",
    )?;
    Ok(ratio
        .mul(poch)
        .mul(SignedLog::new(-ln_factorial(m), 1.0))
        .value())
}

/// ω̂ᴺ(m) as printed: the dual weight, which coincides with the squared
/// norm factor of the orthonormal polynomials.
pub fn omega_hat(m: usize, r: &RacahParams) -> Result<f64> {
    r.check_index("m", m)?;
    Ok(ln_omega_hat(m, r)?.value())
}

fn ln_omega_hat(m: usize, r: &RacahParams) -> Result<SignedLog> {
    let RacahParams {
        alpha: al,
        beta: be,
        gamma: ga,
        ..
    } = *r;
    let big = r.n_f();
    let mf = m as f64;
    let ratio = rational(2.0 * mf + al + be + 1.0, mf + al + be + 1.0, "ω̂")?;
    let poch = pochhammer_ratio(
        &[(-big, m), (al + 1.0, m), (ga + 1.0, m), (al + be + 2.0, m)],
        &[
            (be + 1.0, m),
            (al + be - ga + 1.0, m),
            (al + be + big + 2.0, m),
        ],
        "ω̂",
    )?;
    Ok(ratio.mul(poch).mul(SignedLog::new(-ln_factorial(m), 1.0)))
}

/// λᴺ in its two printed forms: in terms of (α, β, γ, N) and in terms of
/// (α, γ, δ, N).
pub fn lambda_forms(r: &RacahParams) -> Result<(f64, f64)> {
    let RacahParams {
        alpha: al,
        beta: be,
        gamma: ga,
        delta: de,
        big_n,
    } = *r;
    let big = r.n_f();
    let first = pochhammer_ratio(
        &[(-al - be - big - 1.0, big_n), (ga - be - big + 1.0, big_n)],
        &[(-be - big, big_n), (ga - al - be - big, big_n)],
        "λᴺ",
    )?;
    let second = pochhammer_ratio(
        &[(-al + de, big_n), (ga + de + 2.0, big_n)],
        &[(de + 1.0, big_n), (ga - al + de + 1.0, big_n)],
        "λᴺ",
    )?;
    Ok((first.value(), second.value()))
}

/// (λᴺ, λ̂ᴺ), where λ̂ᴺ is λᴺ with α↔γ, β↔δ.
pub fn racah_duality_constants(r: &RacahParams) -> Result<(f64, f64)> {
    let (lambda, _) = lambda_forms(r)?;
    let (lambda_hat, _) = lambda_forms(&r.dual())?;
    Ok((lambda, lambda_hat))
}

/// Normalized discrete weight ρᴺ(m) = ωᴺ(m)/λᴺ. Signed: admissible
/// parameters can give alternating signs.
pub fn racah_weight(m: usize, r: &RacahParams) -> Result<f64> {
    let (lambda, _) = lambda_forms(r)?;
    if lambda == 0.0 {
        return Err(Error::Param("λᴺ vanishes".into()));
    }
    Ok(omega(m, r)? / lambda)
}

/// ρᴺ(0..=N).
pub fn racah_weights(r: &RacahParams) -> Result<Vec<f64>> {
    (0..=r.big_n).map(|m| racah_weight(m, r)).collect()
}

/// Squared norm factors hₙ (n = 0..N) of the orthonormal polynomials.
pub fn racah_norm_squares(r: &RacahParams) -> Result<Vec<f64>> {
    (0..=r.big_n).map(|n| omega_hat(n, r)).collect()
}

/// True when every weight and every squared norm is positive, so the
/// orthonormal system is real and U is an ordinary orthogonal matrix.
pub fn is_positive_definite(r: &RacahParams) -> Result<bool> {
    Ok(racah_weights(r)?.iter().all(|&w| w > 0.0)
        && racah_norm_squares(r)?.iter().all(|&h| h > 0.0))
}

fn principal_sqrt(x: f64) -> ComplexValue {
    Complex64::new(x, 0.0).sqrt()
}

/// Orthonormal Racah polynomials Rₙᴺ(m) = √hₙ R̄ₙᴺ(m) together with
/// √ρᴺ(m) and the matrix Uₙₘ = √ρᴺ(m) Rₙᴺ(m).
#[derive(Debug, Clone, PartialEq)]
pub struct RacahOrthonormal {
    pub params: RacahParams,
    /// `values[n][m]` = Rₙᴺ(m)
    pub values: Vec<Vec<ComplexValue>>,
    pub weights: Vec<f64>,
    pub sqrt_weights: Vec<ComplexValue>,
    /// `u[n][m]` = √ρᴺ(m) Rₙᴺ(m)
    pub u: Vec<Vec<ComplexValue>>,
}

impl RacahOrthonormal {
    pub fn size(&self) -> usize {
        self.params.big_n + 1
    }

    /// True when all entries of U are real (positive weights and norms).
    pub fn is_real(&self) -> bool {
        self.u.iter().flatten().all(|z| z.im == 0.0)
    }

    /// max |Σₘ ρ(m) Rₙ(m) Rₙ'(m) − δₙₙ'|, the bilinear Gram deviation.
    pub fn gram_deviation(&self) -> f64 {
        let size = self.size();
        let mut worst: f64 = 0.0;
        for n in 0..size {
            for k in 0..size {
                let g: ComplexValue = (0..size)
                    .map(|m| self.weights[m] * self.values[n][m] * self.values[k][m])
                    .sum();
                let target = if n == k { 1.0 } else { 0.0 };
                worst = worst.max((g - target).norm());
            }
        }
        worst
    }

    /// max(|UUᵀ − I|, |UᵀU − I|).
    pub fn transpose_deviation(&self) -> f64 {
        let size = self.size();
        let mut worst: f64 = 0.0;
        for i in 0..size {
            for j in 0..size {
                let rows: ComplexValue = (0..size).map(|k| self.u[i][k] * self.u[j][k]).sum();
                let cols: ComplexValue = (0..size).map(|k| self.u[k][i] * self.u[k][j]).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst
                    .max((rows - target).norm())
                    .max((cols - target).norm());
            }
        }
        worst
    }

    /// max(|UU† − I|, |U†U − I|); small only in the positive-definite case.
    pub fn unitary_deviation(&self) -> f64 {
        let size = self.size();
        let mut worst: f64 = 0.0;
        for i in 0..size {
            for j in 0..size {
                let rows: ComplexValue =
                    (0..size).map(|k| self.u[i][k] * self.u[j][k].conj()).sum();
                let cols: ComplexValue =
                    (0..size).map(|k| self.u[k][i].conj() * self.u[k][j]).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst
                    .max((rows - target).norm())
                    .max((cols - target).norm());
            }
        }
        worst
    }
}

/// Orthonormal polynomials, weights and the matrix U.
pub fn racah_normalize(r: &RacahParams) -> Result<RacahOrthonormal> {
    let bare = racah_series_table(r, RacahForm::Bare)?;
    let weights = racah_weights(r)?;
    let norms = racah_norm_squares(r)?;
    if let Some(n) = norms.iter().position(|&h| h == 0.0 || !h.is_finite()) {
        return Err(Error::Param(format!(
            "normalization radicand vanishes or is non-finite at n = {n}"
        )));
    }
    let sqrt_weights: Vec<ComplexValue> = weights.iter().map(|&w| principal_sqrt(w)).collect();
    let values: Vec<Vec<ComplexValue>> = bare
        .values
        .iter()
        .zip(&norms)
        .map(|(row, &h)| row.iter().map(|&v| principal_sqrt(h) * v).collect())
        .collect();
    let u = values
        .iter()
        .map(|row| row.iter().zip(&sqrt_weights).map(|(v, s)| v * s).collect())
        .collect();
    Ok(RacahOrthonormal {
        params: *r,
        values,
        weights,
        sqrt_weights,
        u,
    })
}

/// Relative residuals of the discrete orthogonality relations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RacahOrthogonalityReport {
    /// Σₘ ω(m) R̄ₙ(m) R̄ₙ'(m) against the printed closed-form right-hand side.
    pub primal_residual: f64,
    /// Σₘ ω̂(m) R̄ₘ(n) R̄ₘ(n') against the printed closed-form right-hand side.
    pub dual_residual: f64,
    /// Primal sums against λᴺ/ω̂(n) and dual sums against λ̂ᴺ/ω(n).
    pub constants_residual: f64,
    /// max |ω̂(m) − ω(m)|α↔γ, β↔δ| relative.
    pub omega_hat_mismatch: f64,
    /// |first − second| printed form of λᴺ, relative.
    pub lambda_mismatch: f64,
}

/// Printed right-hand side of the primal orthogonality for n = n'.
pub fn primal_norm(n: usize, r: &RacahParams) -> Result<f64> {
    let RacahParams {
        alpha: al,
        beta: be,
        gamma: ga,
        big_n,
        ..
    } = *r;
    let big = r.n_f();
    let nf = n as f64;
    let ratio = rational(nf + al + be + 1.0, 2.0 * nf + al + be + 1.0, "primal norm")?;
    let poch = pochhammer_ratio(
        &[
            (-al - be - big - 1.0, big_n),
            (ga - be - big + 1.0, big_n),
            (be + 1.0, n),
            (al + be - ga + 1.0, n),
            (al + be + big + 2.0, n),
        ],
        &[
            (-be - big, big_n),
            (ga - al - be - big, big_n),
            (-big, n),
            (al + 1.0, n),
            (ga + 1.0, n),
            (al + be + 2.0, n),
        ],
        "primal norm",
    )?;
    Ok(ratio
        .mul(poch)
        .mul(SignedLog::new(ln_factorial(n), 1.0))
        .value())
}

/// Printed right-hand side of the dual orthogonality for n = n'.
pub fn dual_norm(n: usize, r: &RacahParams) -> Result<f64> {
    let RacahParams {
        alpha: al,
        beta: be,
        gamma: ga,
        big_n,
        ..
    } = *r;
    let big = r.n_f();
    let nf = n as f64;
    let shift = r.lattice_shift();
    let ratio = rational(nf + shift, 2.0 * nf + shift, "dual norm")?;
    let poch = pochhammer_ratio(
        &[
            (al + be + 2.0, big_n),
            (be - ga, big_n),
            (-be - big, n),
            (ga - be + 1.0, n),
            (ga - al - be - big, n),
        ],
        &[
            (be + 1.0, big_n),
            (al + be - ga + 1.0, big_n),
            (-big, n),
            (al + 1.0, n),
            (ga + 1.0, n),
            (shift + 1.0, n),
        ],
        "dual norm",
    )?;
    Ok(ratio
        .mul(poch)
        .mul(SignedLog::new(ln_factorial(n), 1.0))
        .value())
}

fn relative(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Checks both discrete orthogonality relations, their constants, and the
/// duality substitutions for ω̂ and λᴺ.
pub fn racah_orthogonality_check(r: &RacahParams) -> Result<RacahOrthogonalityReport> {
    let size = r.big_n + 1;
    let bare = racah_series_table(r, RacahForm::Bare)?.values;
    let om: Vec<f64> = (0..size).map(|m| omega(m, r)).collect::<Result<_>>()?;
    let om_hat: Vec<f64> = (0..size).map(|m| omega_hat(m, r)).collect::<Result<_>>()?;
    let primal_rhs: Vec<f64> = (0..size)
        .map(|n| primal_norm(n, r))
        .collect::<Result<_>>()?;
    let dual_rhs: Vec<f64> = (0..size).map(|n| dual_norm(n, r)).collect::<Result<_>>()?;
    let (lambda, lambda_hat) = racah_duality_constants(r)?;

    let mut primal: f64 = 0.0;
    let mut dual: f64 = 0.0;
    let mut constants: f64 = 0.0;
    for n in 0..size {
        for k in n..size {
            let p: f64 = (0..size)
                .map(|m| om[m] * bare[n][m] * bare[k][m])
                .collect::<CompensatedSum>()
                .value();
            let d: f64 = (0..size)
                .map(|m| om_hat[m] * bare[m][n] * bare[m][k])
                .collect::<CompensatedSum>()
                .value();
            let p_scale = (primal_rhs[n] * primal_rhs[k]).abs().sqrt();
            let d_scale = (dual_rhs[n] * dual_rhs[k]).abs().sqrt();
            if n == k {
                primal = primal.max(relative(p, primal_rhs[n]));
                dual = dual.max(relative(d, dual_rhs[n]));
                constants = constants
                    .max(relative(p, lambda / om_hat[n]))
                    .max(relative(d, lambda_hat / om[n]));
            } else {
                primal = primal.max(p.abs() / p_scale);
                dual = dual.max(d.abs() / d_scale);
            }
        }
    }

    let dual_params = r.dual();
    let mut omega_hat_mismatch: f64 = 0.0;
    for (m, &h) in om_hat.iter().enumerate() {
        omega_hat_mismatch = omega_hat_mismatch.max(relative(h, omega(m, &dual_params)?));
    }
    let (first, second) = lambda_forms(r)?;
    Ok(RacahOrthogonalityReport {
        primal_residual: primal,
        dual_residual: dual,
        constants_residual: constants,
        omega_hat_mismatch,
        lambda_mismatch: relative(first, second),
    })
}

/// Result of the generating-function comparison for one lattice point m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RacahGeneratingCheck {
    /// Σₙ₌₀ᴺ R̃ₙᴺ(m) tⁿ
    pub series: f64,
    /// ₂F₁(−m, −m+β−γ; −N; t) · ₂F₁(m+α+1, m+γ+1; α+β+N+2; t)
    pub closed_form: f64,
    /// |series − closed_form|; includes the O(t^{N+1}) part of the closed
    /// form beyond the lattice.
    pub residual: f64,
    /// max over n ≤ N of |R̃ₙᴺ(m) − [tⁿ] closed form|, the exact statement.
    pub coefficient_residual: f64,
}

/// Compares the finite generating sum with the product of the two ₂F₁.
pub fn racah_generating_check(r: &RacahParams, m: usize, t: f64) -> Result<RacahGeneratingCheck> {
    r.check_index("m", m)?;
    if !(t.abs() < 1.0) {
        return Err(Error::Domain(format!(
            "generating function needs |t| < 1, got {t}"
        )));
    }
    let RacahParams {
        alpha: al,
        beta: be,
        gamma: ga,
        ..
    } = *r;
    let big = r.n_f();
    let mf = m as f64;
    let values = racah_recursion(r, m)?;
    let mut acc = CompensatedSum::new();
    let mut tp = 1.0;
    for v in &values {
        acc.add(v * tp);
        tp *= t;
    }
    let c = |x: f64| Complex64::new(x, 0.0);
    let (left_a, left_b, left_c) = (-mf, -mf + be - ga, -big);
    let (right_a, right_b, right_c) = (mf + al + 1.0, mf + ga + 1.0, al + be + big + 2.0);
    let left = hyp2f1_series(c(left_a), c(left_b), c(left_c), c(t))?;
    let right = hyp2f1_series(c(right_a), c(right_b), c(right_c), c(t))?;
    let closed_form = (left * right).re;

    // Taylor coefficients of both factors up to degree N
    let coefficients = |a: f64, b: f64, cc: f64, limit: usize| -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(r.big_n + 1);
        let mut term = 1.0;
        for k in 0..=r.big_n {
            out.push(if k <= limit { term } else { 0.0 });
            let kf = k as f64;
            let den = (cc + kf) * (kf + 1.0);
            term = if den == 0.0 {
                0.0
            } else {
                term * (a + kf) * (b + kf) / den
            };
        }
        Ok(out)
    };
    let lc = coefficients(left_a, left_b, left_c, m)?;
    let rc = coefficients(right_a, right_b, right_c, r.big_n)?;
    let mut coefficient_residual: f64 = 0.0;
    for (n, v) in values.iter().enumerate() {
        let product: f64 = (0..=n).map(|j| lc[j] * rc[n - j]).sum();
        coefficient_residual = coefficient_residual.max((product - v).abs());
    }
    let series = acc.value();
    Ok(RacahGeneratingCheck {
        series,
        closed_form,
        residual: (series - closed_form).abs(),
        coefficient_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wilson::{bound_state_y2, wilson_series};

    fn fig2() -> RacahParams {
        RacahParams::new(0.7, 10.3, 0.5, 10).unwrap()
    }

    fn companion() -> RacahParams {
        RacahParams::new(0.7, 10.3, 22.0, 10).unwrap()
    }

    #[test]
    fn constraints_name_the_inequality() {
        let e = RacahParams::new(-1.0, 10.3, 0.5, 10).unwrap_err();
        assert!(e.to_string().contains("α > −1"), "{e}");
        let e = RacahParams::new(0.7, 10.3, -1.5, 10).unwrap_err();
        assert!(e.to_string().contains("γ > −1"), "{e}");
        let e = RacahParams::new(0.7, 9.0, 0.5, 10).unwrap_err();
        assert!(e.to_string().contains("β > N−1"), "{e}");
        let r = fig2();
        assert_eq!(r.delta + 10.0 + r.beta + 1.0, 0.0);
    }

    #[test]
    fn fig2_maps_to_wilson() {
        let p = map_racah_to_wilson(&fig2());
        assert!((fig2().delta + 21.3).abs() < 1e-14);
        assert!((p.mu + 9.9).abs() < 1e-13);
        assert!((p.nu + 0.1).abs() < 1e-13);
        assert!((p.a - 11.6).abs() < 1e-13);
        assert!((p.b - 11.4).abs() < 1e-13);
        assert!((p.mu + p.nu + 10.0).abs() < 1e-13);
        let back = map_wilson_to_racah(&p, 10).unwrap();
        for (x, y) in [
            (back.alpha, 0.7),
            (back.beta, 10.3),
            (back.gamma, 0.5),
            (back.delta, -21.3),
        ] {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn wilson_without_racah_image_is_rejected() {
        let p = WilsonParams::new(0.7, 0.2, 0.5, 0.3).unwrap();
        assert!(matches!(
            map_wilson_to_racah(&p, 3),
            Err(Error::Constraint(_))
        ));
    }

    #[test]
    fn trivial_entries() {
        let r = fig2();
        for k in 0..=10 {
            assert_eq!(racah_series(0, k, &r, RacahForm::Bare).unwrap(), 1.0);
            assert_eq!(racah_series(k, 0, &r, RacahForm::Bare).unwrap(), 1.0);
            assert_eq!(racah_recursion(&r, k).unwrap()[0], 1.0);
        }
        assert!(racah_series(11, 0, &r, RacahForm::Bare).is_err());
    }

    #[test]
    fn series_matches_recursion_on_full_table() {
        for r in [fig2(), companion()] {
            let a = racah_table(&r, RacahForm::Tilde).unwrap();
            let b = racah_series_table(&r, RacahForm::Tilde).unwrap();
            let worst = a
                .values
                .iter()
                .flatten()
                .zip(b.values.iter().flatten())
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            assert!(worst < 1e-11, "{worst}");
        }
        let s = racah_series(2, 1, &fig2(), RacahForm::Tilde).unwrap();
        let rec = racah_recursion(&fig2(), 1).unwrap()[2];
        assert!((s - rec).abs() < 1e-12);
    }

    #[test]
    fn racah_equals_wilson_at_lattice() {
        let r = fig2();
        let p = map_racah_to_wilson(&r);
        for n in 0..=10 {
            for m in 0..=10 {
                let w = wilson_series(n, bound_state_y2(p.mu, m), &p).unwrap();
                let t = racah_series(n, m, &r, RacahForm::Tilde).unwrap();
                assert!(
                    (w - t).abs() < 1e-9 * t.abs().max(1.0),
                    "n={n} m={m}: {w} vs {t}"
                );
            }
        }
    }

    #[test]
    fn duality_interchanges_degree_and_lattice() {
        let r = fig2();
        let d = r.dual();
        for n in 0..=10 {
            for m in 0..=10 {
                let a = racah_series(n, m, &r, RacahForm::Bare).unwrap();
                let b = racah_series(m, n, &d, RacahForm::Bare).unwrap();
                assert!((a - b).abs() < 1e-11, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn weights_sum_to_one_and_reference_values() {
        let w = racah_weights(&fig2()).unwrap();
        let total: f64 = w.iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
        // mpmath (50 digits)
        assert!((w[0] - 1.119_097_346_046_947_5).abs() < 1e-12);
        assert!((w[1] + 0.138_706_073_359_340_9).abs() < 1e-12);
        for (m, x) in w.iter().enumerate() {
            assert_eq!(x.signum(), if m % 2 == 0 { 1.0 } else { -1.0 });
        }
        let (l1, l2) = lambda_forms(&fig2()).unwrap();
        assert!((l1 - 0.893_577_313_477_114_3).abs() < 1e-12);
        assert!((l1 - l2).abs() < 1e-12);
    }

    #[test]
    fn single_point_lattice() {
        let r = RacahParams::new(0.3, 0.5, 0.2, 0).unwrap();
        assert_eq!(racah_weight(0, &r).unwrap(), 1.0);
        assert_eq!(racah_duality_constants(&r).unwrap(), (1.0, 1.0));
        let rep = racah_orthogonality_check(&r).unwrap();
        assert!(rep.primal_residual < 1e-15 && rep.dual_residual < 1e-15);
        let o = racah_normalize(&r).unwrap();
        assert!(o.gram_deviation() < 1e-15);
    }

    #[test]
    fn orthonormal_matrix_fig2_is_complex_orthogonal() {
        let o = racah_normalize(&fig2()).unwrap();
        assert!(!o.is_real());
        assert!(o.gram_deviation() < 1e-10);
        assert!(o.transpose_deviation() < 1e-10);
        assert!(!is_positive_definite(&fig2()).unwrap());
        let h0 = o.values[0][0];
        assert!(o.values[0].iter().all(|v| (v - h0).norm() < 1e-15));
    }

    #[test]
    fn orthonormal_matrix_companion_is_real_orthogonal() {
        let r = companion();
        assert!(is_positive_definite(&r).unwrap());
        let o = racah_normalize(&r).unwrap();
        assert!(o.is_real());
        assert!(o.gram_deviation() < 1e-10);
        assert!(o.unitary_deviation() < 1e-10);
    }

    #[test]
    fn orthogonality_relations_and_constants() {
        for r in [fig2(), companion()] {
            let rep = racah_orthogonality_check(&r).unwrap();
            assert!(rep.primal_residual < 1e-9, "{rep:?}");
            assert!(rep.dual_residual < 1e-9, "{rep:?}");
            assert!(rep.constants_residual < 1e-9, "{rep:?}");
            assert!(rep.omega_hat_mismatch < 1e-12, "{rep:?}");
            assert!(rep.lambda_mismatch < 1e-12, "{rep:?}");
        }
    }

    #[test]
    fn recursion_residual_on_series_table() {
        // the series table satisfies the recursion row by row
        let r = fig2();
        let t = racah_series_table(&r, RacahForm::Tilde).unwrap();
        for m in 0..=10 {
            let rec = racah_recursion(&r, m).unwrap();
            for n in 0..=10 {
                assert!((rec[n] - t.values[n][m]).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn generating_function() {
        let r = fig2();
        let g = racah_generating_check(&r, 0, 0.0).unwrap();
        assert_eq!(g.residual, 0.0);
        let g = racah_generating_check(&r, 1, 0.1).unwrap();
        assert!(g.residual < 1e-10, "{g:?}");
        for m in 0..=10 {
            let g = racah_generating_check(&r, m, 0.5).unwrap();
            assert!(g.coefficient_residual < 1e-10, "m={m} {g:?}");
        }
        assert!(racah_generating_check(&r, 0, 1.0).is_err());
    }
}
