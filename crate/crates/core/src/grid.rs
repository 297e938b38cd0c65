//! Periodic torus grids and complex grid functions: the discretization
//! carrier for spectral application of Lévy generators.
//!
//! A grid has N points per axis (N a power of two) on [0, L)ⁿ; its frequency
//! layout is the usual radix-2 one, ξ_k = 2πk/L with signed integer indices
//! k ∈ {0, 1, …, N/2−1, −N/2, …, −1} per axis.

use num_complex::Complex64;
use rustfft::FftPlanner;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GridError {
    #[error("points per axis must be a power of two ≥ 2, got {0}")]
    PointsNotPowerOfTwo(usize),
    #[error("period must be positive, got {0}")]
    NonpositivePeriod(f64),
    #[error("period list has {0} entries for dimension {1}")]
    PeriodDimension(usize, usize),
    #[error("grid size mismatch: {0} values for a grid of {1} points")]
    SizeMismatch(usize, usize),
    #[error("frequency index {0} out of range for {1} points per axis")]
    FrequencyOutOfRange(i64, usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TorusGrid {
    dim: usize,
    period: Vec<f64>,
    points: usize,
}

impl TorusGrid {
    pub fn new(period: Vec<f64>, points: usize) -> Result<Self, GridError> {
        let dim = period.len();
        if points < 2 || !points.is_power_of_two() {
            return Err(GridError::PointsNotPowerOfTwo(points));
        }
        for &l in &period {
            if !(l > 0.0) {
                return Err(GridError::NonpositivePeriod(l));
            }
        }
        Ok(TorusGrid {
            dim,
            period,
            points,
        })
    }

    pub fn uniform(dim: usize, period: f64, points: usize) -> Result<Self, GridError> {
        Self::new(vec![period; dim], points)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points_per_axis(&self) -> usize {
        self.points
    }

    pub fn period(&self) -> &[f64] {
        &self.period
    }

    /// Total number of grid points Nⁿ.
    pub fn len(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Volume of one grid cell, Π L_a/N.
    pub fn cell_volume(&self) -> f64 {
        self.period.iter().map(|l| l / self.points as f64).product()
    }

    fn axis_indices(&self, flat: usize) -> Vec<usize> {
        let mut idx = vec![0usize; self.dim];
        let mut rem = flat;
        for a in (0..self.dim).rev() {
            idx[a] = rem % self.points;
            rem /= self.points;
        }
        idx
    }

    /// Signed frequency multi-index k of a flat array position.
    pub fn freq_index(&self, flat: usize) -> Vec<i64> {
        self.axis_indices(flat)
            .into_iter()
            .map(|i| {
                if i < self.points / 2 {
                    i as i64
                } else {
                    i as i64 - self.points as i64
                }
            })
            .collect()
    }

    /// ξ_k = 2πk/L for the flat position's multi-index.
    pub fn frequency(&self, flat: usize) -> Vec<f64> {
        self.freq_index(flat)
            .into_iter()
            .zip(&self.period)
            .map(|(k, l)| std::f64::consts::TAU * k as f64 / l)
            .collect()
    }

    /// Grid point x_j = j·L/N.
    pub fn point(&self, flat: usize) -> Vec<f64> {
        self.axis_indices(flat)
            .into_iter()
            .zip(&self.period)
            .map(|(j, l)| j as f64 * l / self.points as f64)
            .collect()
    }

    /// Flat position of a signed frequency multi-index.
    pub fn index_of_freq(&self, k: &[i64]) -> Result<usize, GridError> {
        let n = self.points as i64;
        let mut flat = 0usize;
        for &ka in k {
            if ka < -n / 2 || ka >= n / 2 {
                return Err(GridError::FrequencyOutOfRange(ka, self.points));
            }
            let pos = if ka >= 0 { ka } else { ka + n } as usize;
            flat = flat * self.points + pos;
        }
        Ok(flat)
    }
}

/// Complex samples on a torus grid (row-major over axes).
#[derive(Debug, Clone)]
pub struct GridFunction {
    grid: TorusGrid,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(grid: TorusGrid, values: Vec<Complex64>) -> Result<Self, GridError> {
        if values.len() != grid.len() {
            return Err(GridError::SizeMismatch(values.len(), grid.len()));
        }
        Ok(GridFunction { grid, values })
    }

    pub fn from_fn(grid: TorusGrid, f: impl Fn(&[f64]) -> Complex64) -> Self {
        let values = (0..grid.len()).map(|i| f(&grid.point(i))).collect();
        GridFunction { grid, values }
    }

    pub fn constant(grid: TorusGrid, c: Complex64) -> Self {
        let values = vec![c; grid.len()];
        GridFunction { grid, values }
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    /// Unnormalized forward DFT along every axis.
    pub fn fft(&self) -> Vec<Complex64> {
        let mut data = self.values.clone();
        fft_nd(&mut data, self.grid.dim, self.grid.points, false);
        data
    }

    /// Inverse of [`GridFunction::fft`], including the 1/Nⁿ normalization.
    pub fn from_spectrum(grid: TorusGrid, mut spectrum: Vec<Complex64>) -> Result<Self, GridError> {
        if spectrum.len() != grid.len() {
            return Err(GridError::SizeMismatch(spectrum.len(), grid.len()));
        }
        fft_nd(&mut spectrum, grid.dim, grid.points, true);
        let scale = 1.0 / grid.len() as f64;
        for v in spectrum.iter_mut() {
            *v *= scale;
        }
        Ok(GridFunction {
            grid,
            values: spectrum,
        })
    }
}

/// In-place n-D radix-2 transform: 1-D FFTs along each axis in turn.
fn fft_nd(data: &mut [Complex64], dim: usize, points: usize, inverse: bool) {
    let mut planner = FftPlanner::new();
    let fft = if inverse {
        planner.plan_fft_inverse(points)
    } else {
        planner.plan_fft_forward(points)
    };
    let total = data.len();
    let mut line = vec![Complex64::ZERO; points];
    for axis in 0..dim {
        // stride between consecutive entries along `axis`
        let stride = points.pow((dim - 1 - axis) as u32);
        let block = stride * points;
        for base in 0..total / block {
            for offset in 0..stride {
                let start = base * block + offset;
                for (i, slot) in line.iter_mut().enumerate() {
                    *slot = data[start + i * stride];
                }
                fft.process(&mut line);
                for (i, v) in line.iter().enumerate() {
                    data[start + i * stride] = *v;
                }
            }
        }
    }
}
