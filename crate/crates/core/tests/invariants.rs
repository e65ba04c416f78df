//! Property-based invariants of the special functions, the Wilson family and
//! the energy maps.

use std::f64::consts::TAU;

use num_complex::Complex64;
use proptest::prelude::*;

use wilson_racah::physics::{EnergyMap, MapKind};
use wilson_racah::racah::{racah_series, RacahForm, RacahParams};
use wilson_racah::special::log_gamma;
use wilson_racah::wilson::{wilson_recursion, wilson_series, wilson_series_at, WilsonParams};

/// Admissible Wilson parameters, μ allowed down to −1.
fn wilson_params() -> impl Strategy<Value = WilsonParams> {
    (-1.0..3.0f64, 0.05..3.0f64, 0.05..3.0f64, 0.05..3.0f64)
        .prop_filter_map("pairwise sums must be positive", |(mu, nu, a, b)| {
            WilsonParams::new(mu, nu, a, b).ok()
        })
}

/// Distance of x from the nearest multiple of 2π.
fn off_lattice(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    r.min(TAU - r)
}

fn relative(x: f64, y: f64) -> f64 {
    (x - y).abs() / y.abs().max(1e-300)
}

proptest! {
    #[test]
    fn log_gamma_recurrence(re in -8.0..15.0f64, im in -15.0..15.0f64) {
        let z = Complex64::new(re, im);
        prop_assume!(z.norm() > 1e-3 && (z + 1.0).norm() > 1e-3);
        prop_assume!((re.round() - re).abs() > 1e-3 || im.abs() > 1e-3);
        let lhs = log_gamma(z + 1.0).unwrap();
        let rhs = log_gamma(z).unwrap() + z.ln();
        let scale = 1.0 + lhs.norm();
        prop_assert!((lhs.re - rhs.re).abs() < 1e-12 * scale, "{lhs} vs {rhs}");
        prop_assert!(off_lattice(lhs.im - rhs.im) < 1e-12 * scale, "{lhs} vs {rhs}");
    }

    #[test]
    fn log_gamma_conjugation(re in -8.0..15.0f64, im in 1e-3..15.0f64) {
        let z = Complex64::new(re, im);
        let a = log_gamma(z.conj()).unwrap();
        let b = log_gamma(z).unwrap().conj();
        prop_assert!((a - b).norm() < 1e-13 * (1.0 + b.norm()), "{a} vs {b}");
    }

    #[test]
    fn wilson_series_matches_recursion(p in wilson_params(), y2 in 0.0..10.0f64) {
        let table = wilson_recursion(20, y2, &p).unwrap();
        for (n, &rec) in table.values.iter().enumerate() {
            let ser = wilson_series(n, y2, &p).unwrap();
            prop_assert!(relative(rec, ser) < 1e-9, "n = {n}: {rec} vs {ser}");
        }
    }

    #[test]
    fn wilson_symmetric_in_a_and_b(p in wilson_params(), y2 in -4.0..10.0f64, n in 0usize..15) {
        let v = wilson_series(n, y2, &p).unwrap();
        let w = wilson_series(n, y2, &p.with_a_b_swapped()).unwrap();
        prop_assert!((v - w).abs() <= 1e-11 * v.abs().max(1.0), "{v} vs {w}");
    }

    #[test]
    fn wilson_even_in_y(p in wilson_params(), re in 0.0..3.0f64, im in -2.0..2.0f64, n in 0usize..12) {
        let y = Complex64::new(re, im);
        let plus = wilson_series_at(n, y, &p).unwrap();
        let minus = wilson_series_at(n, -y, &p).unwrap();
        prop_assert!((plus - minus).norm() <= 1e-10 * plus.norm().max(1.0), "{plus} vs {minus}");
        // on the real axis the complex evaluation agrees with the y² form
        let on_axis = wilson_series_at(n, Complex64::new(re, 0.0), &p).unwrap();
        let real = wilson_series(n, re * re, &p).unwrap();
        prop_assert!((on_axis.re - real).abs() <= 1e-10 * real.abs().max(1.0), "{on_axis} vs {real}");
        prop_assert!(on_axis.im.abs() <= 1e-10 * real.abs().max(1.0));
    }

    #[test]
    fn racah_bare_is_symmetric_under_duality(
        alpha in -0.9..3.0f64,
        gamma in -0.9..3.0f64,
        big_n in 0usize..8,
        extra in 0.01..3.0f64,
    ) {
        // R̄ₙ(m) with (α, β, γ, δ) equals R̄ₘ(n) with α↔γ, β↔δ
        let r = RacahParams::new(alpha, big_n as f64 - 1.0 + extra, gamma, big_n).unwrap();
        let d = r.dual();
        for n in 0..=big_n {
            for m in 0..=big_n {
                let v = racah_series(n, m, &r, RacahForm::Bare).unwrap();
                let w = racah_series(m, n, &d, RacahForm::Bare).unwrap();
                prop_assert!((v - w).abs() <= 1e-10 * v.abs().max(1.0), "({n},{m}): {v} vs {w}");
            }
        }
    }
}

fn energy_roundtrip(kind: MapKind) -> impl Fn(f64, f64) -> Result<(), TestCaseError> {
    move |energy, lambda| {
        let map = EnergyMap::new(kind, lambda).unwrap();
        let y = map.apply(energy).unwrap();
        let back = map.invert(y).unwrap();
        prop_assert!(
            relative(back, energy) < 1e-12,
            "{kind:?}: E = {energy} → y = {y} → {back}"
        );
        Ok(())
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn direct_map_roundtrip(energy in 1e-6..1e4f64, lambda in 0.1..10.0f64) {
        energy_roundtrip(MapKind::Direct)(energy, lambda)?;
    }

    #[test]
    fn inverse_map_roundtrip(energy in 1e-6..1e4f64, lambda in 0.1..10.0f64) {
        energy_roundtrip(MapKind::Inverse)(energy, lambda)?;
    }

    #[test]
    fn log_map_roundtrip(energy in 1e-6..1e4f64, lambda in 0.1..10.0f64) {
        energy_roundtrip(MapKind::Log)(energy, lambda)?;
    }
}
