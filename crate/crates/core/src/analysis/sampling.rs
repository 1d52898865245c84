//! Seeded random band-limited fields for ensembles and presets.
//!
//! Coefficients are drawn from a normal generator on the modes
//! `0 < |k| <= band` (Euclidean), with conjugate symmetry enforced so the
//! field is real and mean-free, then rescaled to a prescribed norm. The
//! circular band matches the dealiasing cutoff, so band-limited data with
//! `band <= dealias_limit` passes through nonlinear products unclipped.
//! Generation is deterministic in (grid, seed, band).

use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::spectral::{homogeneous_sobolev_norm, l2_norm, sobolev_norm, Field, Grid, Spectrum};

/// Mean-free random field with unit-variance spectral coefficients.
pub fn random_unscaled(grid: Grid, seed: u64, band: i64) -> Field {
    let n = grid.n();
    let band = band.clamp(1, grid.dealias_limit());
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut coeffs: Array2<Complex64> = Array2::zeros((n, n));
    let bin = |k: i64| -> usize {
        if k >= 0 {
            k as usize
        } else {
            (n as i64 + k) as usize
        }
    };
    // half-space k1 > 0, plus the k1 = 0, k2 > 0 line; conjugates fill the rest
    for k1 in 0..=band {
        let k2_lo = if k1 == 0 { 1 } else { -band };
        for k2 in k2_lo..=band {
            if k1 == 0 && k2 <= 0 {
                continue;
            }
            if k1 * k1 + k2 * k2 > band * band {
                continue;
            }
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            let c = Complex64::new(re, im);
            coeffs[[bin(k1), bin(k2)]] = c;
            coeffs[[bin(-k1), bin(-k2)]] = c.conj();
        }
    }
    let mut s = Spectrum::zeros(grid);
    *s.coeffs_mut() = coeffs;
    s.to_physical()
}

/// Mean-free random field with coefficients shaped like `(1 + |2 pi k|^2)^{-s/2}`,
/// i.e. a typical member of the unit `H^s` ball rather than a flat-spectrum
/// field. Low modes dominate every Sobolev norm up to order `s`, so
/// functionals of these fields are stable under grid refinement.
pub fn random_smooth(grid: Grid, seed: u64, band: i64, s: f64) -> Field {
    let f = random_unscaled(grid, seed, band);
    let mut sp = f.to_spectral();
    let weight = |k1: i64, k2: i64| {
        let w = 4.0 * std::f64::consts::PI * std::f64::consts::PI * (k1 * k1 + k2 * k2) as f64;
        (1.0 + w).powf(-s / 2.0)
    };
    let g = grid;
    for ((i, j), c) in sp.coeffs_mut().indexed_iter_mut() {
        *c *= weight(g.wavenumber(i), g.wavenumber(j));
    }
    sp.to_physical()
}

/// Random band-limited field scaled to the given `L^2` norm.
pub fn random_band_limited(grid: Grid, seed: u64, band: i64, l2: f64) -> Field {
    let f = random_unscaled(grid, seed, band);
    let norm = l2_norm(&f);
    f.scale(l2 / norm)
}

/// Random band-limited field scaled to the given inhomogeneous `H^s` norm.
pub fn random_h_scaled(grid: Grid, seed: u64, band: i64, s: f64, target: f64) -> Field {
    let f = random_unscaled(grid, seed, band);
    let norm = sobolev_norm(&f, s).expect("nonnegative exponent");
    f.scale(target / norm)
}

/// Random band-limited field scaled to the given homogeneous `H^s` seminorm.
pub fn random_homogeneous_scaled(grid: Grid, seed: u64, band: i64, s: f64, target: f64) -> Field {
    let f = random_unscaled(grid, seed, band);
    let norm = homogeneous_sobolev_norm(&f, s).expect("nonnegative exponent");
    f.scale(target / norm)
}
