//! Thin 2-D transform layer over rustfft with a per-thread plan cache.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

struct Plans {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
}

thread_local! {
    static PLAN_CACHE: RefCell<HashMap<usize, Plans>> = RefCell::new(HashMap::new());
}

fn with_plans<R>(n: usize, f: impl FnOnce(&mut Plans) -> R) -> R {
    PLAN_CACHE.with(|cache| {
        let mut cache = cache.borrow_mut();
        let plans = cache.entry(n).or_insert_with(|| {
            let mut planner = FftPlanner::new();
            let forward = planner.plan_fft_forward(n);
            let inverse = planner.plan_fft_inverse(n);
            let scratch_len = forward
                .get_inplace_scratch_len()
                .max(inverse.get_inplace_scratch_len());
            Plans {
                forward,
                inverse,
                scratch: vec![Complex64::default(); scratch_len],
            }
        });
        f(plans)
    })
}

/// In-place 2-D transform of an `n x n` complex array, rows then columns.
fn transform2(data: &mut Array2<Complex64>, forward: bool) {
    let n = data.nrows();
    with_plans(n, |plans| {
        let fft = if forward {
            plans.forward.clone()
        } else {
            plans.inverse.clone()
        };
        for mut row in data.rows_mut() {
            let slice = row.as_slice_mut().expect("row-major layout");
            fft.process_with_scratch(slice, &mut plans.scratch);
        }
        let mut col = vec![Complex64::default(); n];
        for j in 0..n {
            for i in 0..n {
                col[i] = data[[i, j]];
            }
            fft.process_with_scratch(&mut col, &mut plans.scratch);
            for i in 0..n {
                data[[i, j]] = col[i];
            }
        }
    });
}

/// Forward transform: physical values to Fourier coefficients
/// (normalized so that `f(x) = sum_k fhat_k e^{2 pi i k.x}`).
pub fn forward(values: &Array2<f64>) -> Array2<Complex64> {
    let n = values.nrows();
    let mut data = values.mapv(|v| Complex64::new(v, 0.0));
    transform2(&mut data, true);
    let scale = 1.0 / (n * n) as f64;
    data.mapv_inplace(|c| c * scale);
    data
}

/// Inverse transform: Fourier coefficients to physical values.
///
/// The imaginary part is discarded; callers maintain conjugate symmetry.
pub fn inverse(coeffs: &Array2<Complex64>) -> Array2<f64> {
    let mut data = coeffs.clone();
    transform2(&mut data, false);
    data.mapv(|c| c.re)
}
