use std::f64::consts::PI;

use super::SpectralError;

/// Uniform collocation grid on the unit torus, `n` points per axis.
///
/// Physical points are `x_j = j/n`; the discrete wavevector set is
/// `k in {-n/2+1, ..., n/2}^2` with angular wavenumbers `2 pi k`.
/// Nyquist coefficients (`k = n/2`) are zeroed after every differentiation
/// so that derivatives of real fields stay real and antisymmetric.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    n: usize,
}

impl Grid {
    pub fn new(n: usize) -> Result<Self, SpectralError> {
        if n < 8 || n % 2 != 0 {
            return Err(SpectralError::BadGridSize(n));
        }
        Ok(Grid { n })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n * self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid spacing `1/n`.
    #[inline]
    pub fn dx(&self) -> f64 {
        1.0 / self.n as f64
    }

    /// Physical coordinate of grid index `j`.
    #[inline]
    pub fn coord(&self, j: usize) -> f64 {
        j as f64 / self.n as f64
    }

    /// Integer wavenumber for FFT bin `i` (bins `0..n` map to `0..n/2, -n/2+1..-1`,
    /// with bin `n/2` being the Nyquist mode `+n/2`).
    #[inline]
    pub fn wavenumber(&self, i: usize) -> i64 {
        if i <= self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// Angular wavenumber `2 pi k` for FFT bin `i`.
    #[inline]
    pub fn angular(&self, i: usize) -> f64 {
        2.0 * PI * self.wavenumber(i) as f64
    }

    #[inline]
    pub fn is_nyquist(&self, i: usize) -> bool {
        i == self.n / 2
    }

    /// Largest retained wavenumber under the 2/3 dealiasing rule.
    ///
    /// Keeping `|k| <= floor((n-1)/3)` guarantees that aliases of products of
    /// two retained modes land entirely in the zeroed band.
    #[inline]
    pub fn dealias_limit(&self) -> i64 {
        ((self.n - 1) / 3) as i64
    }
}
