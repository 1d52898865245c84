use num_complex::Complex64;

use super::{Field, SpectralError, Spectrum, VectorField};

/// Coordinate axis of the torus (1-based to match the usual `x1, x2` naming).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis2 {
    X1,
    X2,
}

/// Transform with the spatial mean subtracted first. Every operator in this
/// module that annihilates the zero mode uses this entry point: removing an
/// `O(1)` background (say `rho ~ 1`) before the FFT keeps its round-off out
/// of the nonzero modes, which matters when the remaining signal is tiny.
fn centered_spectral(f: &Field) -> Spectrum {
    let mu = f.mean();
    if mu == 0.0 {
        f.to_spectral()
    } else {
        f.map(move |v| v - mu).to_spectral()
    }
}

/// Spectral partial derivative: coefficient `k` multiplied by `i 2 pi k_axis`,
/// Nyquist modes zeroed.
pub fn derivative(f: &Field, axis: Axis2) -> Field {
    derivative_spectrum(&centered_spectral(f), axis).to_physical()
}

pub(crate) fn derivative_spectrum(s: &Spectrum, axis: Axis2) -> Spectrum {
    let g = s.grid();
    let nyq = (g.n() / 2) as i64;
    let mut out = s.clone();
    for ((i, j), c) in out.coeffs_mut().indexed_iter_mut() {
        let (k1, k2) = (g.wavenumber(i), g.wavenumber(j));
        let k = match axis {
            Axis2::X1 => k1,
            Axis2::X2 => k2,
        };
        if k1 == nyq || k2 == nyq {
            *c = Complex64::new(0.0, 0.0);
        } else {
            *c *= Complex64::new(0.0, 2.0 * std::f64::consts::PI * k as f64);
        }
    }
    out
}

pub fn gradient(f: &Field) -> VectorField {
    let s = centered_spectral(f);
    VectorField::new(
        derivative_spectrum(&s, Axis2::X1).to_physical(),
        derivative_spectrum(&s, Axis2::X2).to_physical(),
    )
}

pub fn divergence(v: &VectorField) -> Field {
    let mut dx = derivative_spectrum(&centered_spectral(&v.x), Axis2::X1);
    let dy = derivative_spectrum(&centered_spectral(&v.y), Axis2::X2);
    for (c, d) in dx.coeffs_mut().iter_mut().zip(dy.coeffs().iter()) {
        *c += d;
    }
    dx.to_physical()
}

pub fn laplacian(f: &Field) -> Field {
    centered_spectral(f)
        .map_symbol(|k1, k2| Complex64::new(-angular_sq(k1, k2), 0.0))
        .to_physical()
}

/// `Lambda^s = (-Delta)^{s/2}`, the Fourier multiplier `|2 pi k|^s`.
/// The zero mode is annihilated for every `s > 0`.
pub fn fractional_laplacian(f: &Field, s: f64) -> Result<Field, SpectralError> {
    if s < 0.0 {
        return Err(SpectralError::NegativeExponent(s));
    }
    if s == 0.0 {
        return Ok(f.clone());
    }
    Ok(centered_spectral(f)
        .map_symbol(|k1, k2| {
            if k1 == 0 && k2 == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(angular_sq(k1, k2).powf(s / 2.0), 0.0)
            }
        })
        .to_physical())
}

/// Mean-free inverse Laplacian: multiplier `-1/|2 pi k|^2`, zero mode to 0,
/// so that `Delta(Delta^{-1} f) = f - mean(f)`.
pub fn inverse_laplacian(f: &Field) -> Field {
    centered_spectral(f)
        .map_symbol(|k1, k2| {
            if k1 == 0 && k2 == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(-1.0 / angular_sq(k1, k2), 0.0)
            }
        })
        .to_physical()
}

/// Gradient-part projector `Q = grad Delta^{-1} div`:
/// `vhat -> (k . vhat / |k|^2) k` for `k != 0`, zero mode to 0.
pub fn project_q(v: &VectorField) -> VectorField {
    let g = v.grid();
    let sx = centered_spectral(&v.x);
    let sy = centered_spectral(&v.y);
    let mut ox = Spectrum::zeros(g);
    let mut oy = Spectrum::zeros(g);
    let n = g.n();
    for i in 0..n {
        let k1 = g.wavenumber(i) as f64;
        for j in 0..n {
            let k2 = g.wavenumber(j) as f64;
            let ksq = k1 * k1 + k2 * k2;
            if ksq == 0.0 {
                continue;
            }
            // Nyquist bins stand for both +-n/2, so k k^T / |k|^2 has no
            // conjugate-consistent off-diagonal sign there; zero them like
            // the derivative operators do
            if g.is_nyquist(i) || g.is_nyquist(j) {
                continue;
            }
            let dot = (k1 * sx.coeffs()[[i, j]] + k2 * sy.coeffs()[[i, j]]) / ksq;
            ox.coeffs_mut()[[i, j]] = dot * k1;
            oy.coeffs_mut()[[i, j]] = dot * k2;
        }
    }
    VectorField::new(ox.to_physical(), oy.to_physical())
}

/// Inhomogeneous Sobolev norm `( sum_k (1 + |2 pi k|^2)^s |fhat_k|^2 )^{1/2}`.
pub fn sobolev_norm(f: &Field, s: f64) -> Result<f64, SpectralError> {
    if s < 0.0 {
        return Err(SpectralError::NegativeExponent(s));
    }
    let spec = f.to_spectral();
    let g = spec.grid();
    let mut sum = 0.0;
    for ((i, j), c) in spec.coeffs().indexed_iter() {
        let w = (1.0 + angular_sq(g.wavenumber(i), g.wavenumber(j))).powf(s);
        sum += w * c.norm_sqr();
    }
    Ok(sum.sqrt())
}

/// Homogeneous variant `|| Lambda^s f ||_{L^2}` (zero mode dropped).
pub fn homogeneous_sobolev_norm(f: &Field, s: f64) -> Result<f64, SpectralError> {
    if s < 0.0 {
        return Err(SpectralError::NegativeExponent(s));
    }
    let spec = f.to_spectral();
    let g = spec.grid();
    let mut sum = 0.0;
    for ((i, j), c) in spec.coeffs().indexed_iter() {
        let (k1, k2) = (g.wavenumber(i), g.wavenumber(j));
        if k1 == 0 && k2 == 0 {
            continue;
        }
        sum += angular_sq(k1, k2).powf(s) * c.norm_sqr();
    }
    Ok(sum.sqrt())
}

/// Spectral `L^2` norm; by Plancherel this equals the physical-space
/// quadrature norm on the unit torus.
pub fn l2_norm(f: &Field) -> f64 {
    sobolev_norm(f, 0.0).expect("s = 0 is valid")
}

/// Zero every coefficient outside the 2/3-rule ball `|k| <= dealias_limit`.
/// The retained set is a subset of the per-axis 2/3 band, so quadratic
/// products stay alias-free; the circular cutoff also avoids keeping the
/// corner modes, whose Laplacian eigenvalue (twice the axis maximum) would
/// otherwise dictate the explicit stability limit.
pub fn dealias(f: &Field) -> Field {
    let mut s = f.to_spectral();
    dealias_spectrum(&mut s);
    s.to_physical()
}

pub(crate) fn dealias_spectrum(s: &mut Spectrum) {
    let g = s.grid();
    let k2max = g.dealias_limit() * g.dealias_limit();
    for ((i, j), c) in s.coeffs_mut().indexed_iter_mut() {
        let k1 = g.wavenumber(i);
        let k2 = g.wavenumber(j);
        if k1 * k1 + k2 * k2 > k2max {
            *c = Complex64::new(0.0, 0.0);
        }
    }
}

/// Pointwise product followed by 2/3-rule truncation.
pub fn multiply_dealiased(f: &Field, g: &Field) -> Field {
    dealias(&f.mul_pointwise(g))
}

#[inline]
fn angular_sq(k1: i64, k2: i64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    (two_pi * two_pi) * (k1 * k1 + k2 * k2) as f64
}
