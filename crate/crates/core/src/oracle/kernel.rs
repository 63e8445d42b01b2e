use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::grid::Grid;

/// Diagonal of the discrete kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SelfTerm {
    /// `log(2 pi) - log h`: the trapezoidal correction for a logarithmic
    /// singularity, which makes `K w` an `O(h^2)` approximation of the
    /// potential of a smooth density.
    #[default]
    Quadrature,
    /// `3/2 - log h`: the energy of a uniform unit mass on one cell.
    UniformCell,
}

impl SelfTerm {
    pub fn value(self, h: f64) -> f64 {
        match self {
            SelfTerm::Quadrature => (2.0 * PI).ln() - h.ln(),
            SelfTerm::UniformCell => 1.5 - h.ln(),
        }
    }
}

/// `K_ij = -log|x_i - x_j|` off the diagonal on a uniform grid, applied by
/// circulant embedding and FFT.
pub struct ToeplitzKernel {
    column: Vec<f64>,
    spectrum: Vec<Complex64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for ToeplitzKernel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ToeplitzKernel").field("n", &self.column.len()).finish()
    }
}

impl ToeplitzKernel {
    pub fn new(grid: &Grid, self_term: SelfTerm) -> Self {
        let n = grid.nodes();
        let h = grid.spacing();
        let column: Vec<f64> = (0..n)
            .map(|m| if m == 0 { self_term.value(h) } else { -(m as f64 * h).ln() })
            .collect();
        let size = (2 * n).next_power_of_two();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(size);
        let inverse = planner.plan_fft_inverse(size);
        let mut spectrum = vec![Complex64::new(0.0, 0.0); size];
        for (m, &k) in column.iter().enumerate() {
            spectrum[m].re = k;
            if m > 0 {
                spectrum[size - m].re = k;
            }
        }
        forward.process(&mut spectrum);
        ToeplitzKernel { column, spectrum, forward, inverse }
    }

    pub fn len(&self) -> usize {
        self.column.len()
    }

    pub fn is_empty(&self) -> bool {
        self.column.is_empty()
    }

    /// `K_{ij}` as a function of `|i - j|`.
    pub fn column(&self) -> &[f64] {
        &self.column
    }

    /// `out = K w` by FFT.
    pub fn apply(&self, w: &[f64], out: &mut [f64]) {
        let size = self.spectrum.len();
        let mut buf = vec![Complex64::new(0.0, 0.0); size];
        for (b, &x) in buf.iter_mut().zip(w) {
            b.re = x;
        }
        self.forward.process(&mut buf);
        for (b, s) in buf.iter_mut().zip(&self.spectrum) {
            *b *= s;
        }
        self.inverse.process(&mut buf);
        let scale = 1.0 / size as f64;
        for (o, b) in out.iter_mut().zip(&buf) {
            *o = b.re * scale;
        }
    }

    fn row(&self, i: usize, w: &[f64]) -> f64 {
        w.iter()
            .enumerate()
            .map(|(j, &x)| self.column[i.abs_diff(j)] * x)
            .sum()
    }

    /// `K w` by direct summation, `O(n^2)`. Rows are distributed over the
    /// rayon pool when `parallel` is set and the feature is enabled.
    pub fn apply_direct(&self, w: &[f64], parallel: bool) -> Vec<f64> {
        let n = self.len();
        #[cfg(feature = "parallel")]
        if parallel {
            use rayon::prelude::*;
            return (0..n).into_par_iter().map(|i| self.row(i, w)).collect();
        }
        let _ = parallel;
        (0..n).map(|i| self.row(i, w)).collect()
    }
}
