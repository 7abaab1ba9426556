//! Type-I sine and cosine transforms built on complex FFTs.
//!
//! DST-I diagonalizes the five-point Laplacian with homogeneous Dirichlet
//! data on the interior nodes; DCT-I diagonalizes the reflected (ghost-node)
//! Neumann Laplacian on all nodes.

use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

/// Unnormalized DST-I of length `n`:
/// `y_k = sum_{m=1..n} x_m sin(pi k m / (n + 1))`, `k = 1..n`.
pub struct Dst1 {
    n: usize,
    fft: Arc<dyn Fft<f64>>,
}

impl Dst1 {
    pub fn new(n: usize, planner: &mut FftPlanner<f64>) -> Self {
        Self {
            n,
            fft: planner.plan_fft_forward(2 * (n + 1)),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Applying the transform twice multiplies by this factor.
    pub fn inverse_scale(&self) -> f64 {
        2.0 / (self.n + 1) as f64
    }

    pub fn apply(&self, data: &mut [f64], buf: &mut Vec<Complex<f64>>) {
        let n = self.n;
        let m = 2 * (n + 1);
        buf.clear();
        buf.resize(m, Complex::new(0.0, 0.0));
        for k in 0..n {
            buf[k + 1].re = data[k];
            buf[m - 1 - k].re = -data[k];
        }
        self.fft.process(buf);
        for k in 0..n {
            data[k] = -0.5 * buf[k + 1].im;
        }
    }
}

/// Unnormalized DCT-I of length `n >= 2`:
/// `y_k = x_0/2 + (-1)^k x_{n-1}/2 + sum_{m=1..n-2} x_m cos(pi k m / (n - 1))`.
pub struct Dct1 {
    n: usize,
    fft: Arc<dyn Fft<f64>>,
}

impl Dct1 {
    pub fn new(n: usize, planner: &mut FftPlanner<f64>) -> Self {
        Self {
            n,
            fft: planner.plan_fft_forward(2 * (n - 1)),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn inverse_scale(&self) -> f64 {
        2.0 / (self.n - 1) as f64
    }

    pub fn apply(&self, data: &mut [f64], buf: &mut Vec<Complex<f64>>) {
        let n = self.n;
        let m = 2 * (n - 1);
        buf.clear();
        buf.resize(m, Complex::new(0.0, 0.0));
        for k in 0..n {
            buf[k].re = data[k];
        }
        for k in 1..n - 1 {
            buf[m - k].re = data[k];
        }
        self.fft.process(buf);
        for k in 0..n {
            data[k] = 0.5 * buf[k].re;
        }
    }
}

/// Applies a 1-D transform along rows (`along_rows = true`) or columns of a
/// row-major `rows x cols` buffer.
pub(crate) fn apply_2d<F>(data: &mut [f64], rows: usize, cols: usize, along_rows: bool, mut f: F)
where
    F: FnMut(&mut [f64], &mut Vec<Complex<f64>>),
{
    let mut buf = Vec::new();
    if along_rows {
        for r in 0..rows {
            f(&mut data[r * cols..(r + 1) * cols], &mut buf);
        }
    } else {
        let mut line = vec![0.0; rows];
        for c in 0..cols {
            for r in 0..rows {
                line[r] = data[r * cols + c];
            }
            f(&mut line, &mut buf);
            for r in 0..rows {
                data[r * cols + c] = line[r];
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn dst_matches_direct_sum() {
        let mut planner = FftPlanner::new();
        let n = 11;
        let t = Dst1::new(n, &mut planner);
        let x: Vec<f64> = (0..n).map(|k| ((k * 7 + 3) % 5) as f64 - 1.3).collect();
        let mut y = x.clone();
        t.apply(&mut y, &mut Vec::new());
        for k in 1..=n {
            let direct: f64 = (1..=n)
                .map(|m| x[m - 1] * (PI * (k * m) as f64 / (n + 1) as f64).sin())
                .sum();
            assert!((direct - y[k - 1]).abs() < 1e-12);
        }
        t.apply(&mut y, &mut Vec::new());
        for k in 0..n {
            assert!((y[k] * t.inverse_scale() - x[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn dct_matches_direct_sum() {
        let mut planner = FftPlanner::new();
        let n = 10;
        let t = Dct1::new(n, &mut planner);
        let x: Vec<f64> = (0..n).map(|k| (k as f64 * 0.7).cos() + 0.1 * k as f64).collect();
        let mut y = x.clone();
        t.apply(&mut y, &mut Vec::new());
        for k in 0..n {
            let mut direct = 0.5 * x[0] + 0.5 * (-1f64).powi(k as i32) * x[n - 1];
            for m in 1..n - 1 {
                direct += x[m] * (PI * (k * m) as f64 / (n - 1) as f64).cos();
            }
            assert!((direct - y[k]).abs() < 1e-12);
        }
        t.apply(&mut y, &mut Vec::new());
        for k in 0..n {
            assert!((y[k] * t.inverse_scale() - x[k]).abs() < 1e-12);
        }
    }
}
