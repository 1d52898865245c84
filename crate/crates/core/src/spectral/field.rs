use ndarray::{Array2, Zip};
use num_complex::Complex64;

use super::{fft, Grid};

/// Real scalar field on the collocation grid (physical-space representation).
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid,
    values: Array2<f64>,
}

impl Field {
    pub fn zeros(grid: Grid) -> Self {
        Field {
            grid,
            values: Array2::zeros((grid.n(), grid.n())),
        }
    }

    pub fn constant(grid: Grid, c: f64) -> Self {
        Field {
            grid,
            values: Array2::from_elem((grid.n(), grid.n()), c),
        }
    }

    /// Sample `f(x1, x2)` at the grid points `x = (i/n, j/n)`.
    pub fn from_fn(grid: Grid, f: impl Fn(f64, f64) -> f64) -> Self {
        let n = grid.n();
        let values = Array2::from_shape_fn((n, n), |(i, j)| f(grid.coord(i), grid.coord(j)));
        Field { grid, values }
    }

    pub fn from_values(grid: Grid, values: Array2<f64>) -> Self {
        assert_eq!(values.dim(), (grid.n(), grid.n()));
        Field { grid, values }
    }

    #[inline]
    pub fn grid(&self) -> Grid {
        self.grid
    }

    #[inline]
    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    #[inline]
    pub fn values_mut(&mut self) -> &mut Array2<f64> {
        &mut self.values
    }

    /// Torus mean `int f dx` (unit volume), i.e. the zero-mode coefficient.
    pub fn mean(&self) -> f64 {
        self.values.sum() / self.grid.len() as f64
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Grid maximum of `|f|`, used as the discrete `L^inf` norm.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn to_spectral(&self) -> Spectrum {
        Spectrum {
            grid: self.grid,
            coeffs: fft::forward(&self.values),
        }
    }

    /// Pointwise map.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        Field {
            grid: self.grid,
            values: self.values.mapv(&f),
        }
    }

    /// `self + alpha * other`, elementwise.
    pub fn add_scaled(&self, other: &Field, alpha: f64) -> Field {
        let mut out = self.clone();
        out.add_scaled_inplace(other, alpha);
        out
    }

    pub fn add_scaled_inplace(&mut self, other: &Field, alpha: f64) {
        Zip::from(&mut self.values)
            .and(&other.values)
            .for_each(|a, &b| *a += alpha * b);
    }

    pub fn scale(&self, alpha: f64) -> Field {
        self.map(|v| alpha * v)
    }

    pub fn sub(&self, other: &Field) -> Field {
        self.add_scaled(other, -1.0)
    }

    /// Pointwise (physical-space) product, no dealiasing.
    pub fn mul_pointwise(&self, other: &Field) -> Field {
        let mut out = self.clone();
        Zip::from(&mut out.values)
            .and(&other.values)
            .for_each(|a, &b| *a *= b);
        out
    }
}

/// Fourier-coefficient representation of a real field.
#[derive(Debug, Clone)]
pub struct Spectrum {
    grid: Grid,
    coeffs: Array2<Complex64>,
}

impl Spectrum {
    pub fn zeros(grid: Grid) -> Self {
        Spectrum {
            grid,
            coeffs: Array2::zeros((grid.n(), grid.n())),
        }
    }

    #[inline]
    pub fn grid(&self) -> Grid {
        self.grid
    }

    #[inline]
    pub fn coeffs(&self) -> &Array2<Complex64> {
        &self.coeffs
    }

    #[inline]
    pub fn coeffs_mut(&mut self) -> &mut Array2<Complex64> {
        &mut self.coeffs
    }

    pub fn to_physical(&self) -> Field {
        Field {
            grid: self.grid,
            values: fft::inverse(&self.coeffs),
        }
    }

    /// Multiply every coefficient by a symbol depending on the integer
    /// wavevector `(k1, k2)`.
    pub fn map_symbol(&self, sym: impl Fn(i64, i64) -> Complex64) -> Spectrum {
        let g = self.grid;
        let mut out = self.clone();
        for ((i, j), c) in out.coeffs.indexed_iter_mut() {
            *c *= sym(g.wavenumber(i), g.wavenumber(j));
        }
        out
    }
}

/// Planar vector field `(u1, u2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    pub x: Field,
    pub y: Field,
}

impl VectorField {
    pub fn zeros(grid: Grid) -> Self {
        VectorField {
            x: Field::zeros(grid),
            y: Field::zeros(grid),
        }
    }

    pub fn new(x: Field, y: Field) -> Self {
        assert_eq!(x.grid(), y.grid());
        VectorField { x, y }
    }

    #[inline]
    pub fn grid(&self) -> Grid {
        self.x.grid()
    }

    /// Grid maximum of the Euclidean speed `|u|`.
    pub fn max_speed(&self) -> f64 {
        Zip::from(self.x.values())
            .and(self.y.values())
            .fold(0.0f64, |acc, &a, &b| acc.max((a * a + b * b).sqrt()))
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn add_scaled(&self, other: &VectorField, alpha: f64) -> VectorField {
        VectorField {
            x: self.x.add_scaled(&other.x, alpha),
            y: self.y.add_scaled(&other.y, alpha),
        }
    }

    pub fn scale(&self, alpha: f64) -> VectorField {
        VectorField {
            x: self.x.scale(alpha),
            y: self.y.scale(alpha),
        }
    }

    pub fn sub(&self, other: &VectorField) -> VectorField {
        self.add_scaled(other, -1.0)
    }
}
