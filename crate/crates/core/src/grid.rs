//! Periodic grids on the flat torus `(R / 2πZ)^n`.
//!
//! Grid functions are stored flat with axis 0 varying fastest. Derivatives
//! are either second-order centred differences or Fourier-spectral; the
//! trapezoid rule is used for integrals, which is spectrally accurate for
//! smooth periodic integrands.

use std::f64::consts::PI;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{CurvError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stencil {
    SecondOrder,
    Spectral,
}

/// Uniform periodic grid with `m` points per axis on the flat unit torus.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseGrid {
    n: usize,
    m: usize,
    stencil: Stencil,
}

impl BaseGrid {
    pub const MIN_POINTS: usize = 8;

    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n == 0 {
            return Err(CurvError::DimensionTooSmall {
                required: 1,
                got: 0,
            });
        }
        if m < Self::MIN_POINTS {
            return Err(CurvError::InvalidBase(format!(
                "grid needs at least {} points per axis, got {m}",
                Self::MIN_POINTS
            )));
        }
        if (m as f64).powi(n as i32) > 5.0e7 {
            return Err(CurvError::InvalidBase(format!("grid {m}^{n} is too large")));
        }
        Ok(Self {
            n,
            m,
            stencil: Stencil::SecondOrder,
        })
    }

    pub fn with_stencil(mut self, stencil: Stencil) -> Self {
        self.stencil = stencil;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn points_per_axis(&self) -> usize {
        self.m
    }

    pub fn stencil(&self) -> Stencil {
        self.stencil
    }

    pub fn len(&self) -> usize {
        self.m.pow(self.n as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.m as f64
    }

    pub fn volume(&self) -> f64 {
        (2.0 * PI).powi(self.n as i32)
    }

    /// Per-axis integer indices of a flat index.
    pub fn multi_index(&self, idx: usize) -> Vec<usize> {
        let mut rest = idx;
        (0..self.n)
            .map(|_| {
                let i = rest % self.m;
                rest /= self.m;
                i
            })
            .collect()
    }

    pub fn flat_index(&self, multi: &[usize]) -> usize {
        multi
            .iter()
            .rev()
            .fold(0, |acc, &i| acc * self.m + (i % self.m))
    }

    /// Coordinates `x_1..x_n` of grid point `idx`.
    pub fn coords(&self, idx: usize) -> Vec<f64> {
        let h = self.spacing();
        self.multi_index(idx)
            .into_iter()
            .map(|i| i as f64 * h)
            .collect()
    }

    pub fn sample(&self, mut f: impl FnMut(&[f64]) -> f64) -> Vec<f64> {
        (0..self.len()).map(|i| f(&self.coords(i))).collect()
    }

    fn stride(&self, axis: usize) -> usize {
        self.m.pow(axis as u32)
    }

    fn check_len(&self, u: &[f64]) {
        assert_eq!(u.len(), self.len(), "grid function has the wrong length");
    }

    /// Trapezoid rule over the torus.
    pub fn integrate(&self, u: &[f64]) -> f64 {
        self.check_len(u);
        u.iter().sum::<f64>() * self.spacing().powi(self.n as i32)
    }

    pub fn laplacian(&self, u: &[f64]) -> Vec<f64> {
        self.check_len(u);
        match self.stencil {
            Stencil::SecondOrder => self.laplacian_fd(u),
            Stencil::Spectral => {
                let mut out = vec![0.0; u.len()];
                if is_constant(u) {
                    return out;
                }
                for axis in 0..self.n {
                    self.spectral_axis(u, axis, 2, &mut out);
                }
                out
            }
        }
    }

    /// Partial derivatives along each axis.
    pub fn gradient(&self, u: &[f64]) -> Vec<Vec<f64>> {
        self.check_len(u);
        (0..self.n)
            .map(|axis| {
                let mut out = vec![0.0; u.len()];
                if is_constant(u) {
                    return out;
                }
                match self.stencil {
                    Stencil::SecondOrder => self.gradient_fd(u, axis, &mut out),
                    Stencil::Spectral => self.spectral_axis(u, axis, 1, &mut out),
                }
                out
            })
            .collect()
    }

    /// Pointwise flat inner product of gradients.
    pub fn grad_dot(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        let ga = self.gradient(a);
        let gb = self.gradient(b);
        (0..self.len())
            .map(|i| (0..self.n).map(|k| ga[k][i] * gb[k][i]).sum())
            .collect()
    }

    /// Fourth-order Laplacian of a function known in closed form, from the
    /// second-order stencil on this grid and on the grid with `2m` points.
    pub fn richardson_laplacian(&self, f: impl Fn(&[f64]) -> f64) -> Result<Vec<f64>> {
        let coarse = BaseGrid::new(self.n, self.m)?;
        let fine = BaseGrid::new(self.n, 2 * self.m)?;
        let lc = coarse.laplacian_fd(&coarse.sample(&f));
        let lf = fine.laplacian_fd(&fine.sample(&f));
        Ok((0..self.len())
            .map(|i| {
                let multi: Vec<usize> = self.multi_index(i).iter().map(|&k| 2 * k).collect();
                (4.0 * lf[fine.flat_index(&multi)] - lc[i]) / 3.0
            })
            .collect())
    }

    fn laplacian_fd(&self, u: &[f64]) -> Vec<f64> {
        let inv_h2 = 1.0 / self.spacing().powi(2);
        let mut out = vec![0.0; u.len()];
        for axis in 0..self.n {
            let s = self.stride(axis);
            for (i, o) in out.iter_mut().enumerate() {
                let (prev, next) = self.neighbours(i, s);
                *o += (u[next] - 2.0 * u[i] + u[prev]) * inv_h2;
            }
        }
        out
    }

    fn gradient_fd(&self, u: &[f64], axis: usize, out: &mut [f64]) {
        let s = self.stride(axis);
        let inv_2h = 0.5 / self.spacing();
        for (i, o) in out.iter_mut().enumerate() {
            let (prev, next) = self.neighbours(i, s);
            *o = (u[next] - u[prev]) * inv_2h;
        }
    }

    fn neighbours(&self, i: usize, stride: usize) -> (usize, usize) {
        let pos = (i / stride) % self.m;
        let base = i - pos * stride;
        let next = base + ((pos + 1) % self.m) * stride;
        let prev = base + ((pos + self.m - 1) % self.m) * stride;
        (prev, next)
    }

    /// Adds the `order`-th spectral derivative along `axis` into `out`.
    fn spectral_axis(&self, u: &[f64], axis: usize, order: u32, out: &mut [f64]) {
        let m = self.m;
        let s = self.stride(axis);
        let mut planner = FftPlanner::<f64>::new();
        let fwd = planner.plan_fft_forward(m);
        let inv = planner.plan_fft_inverse(m);
        let factors: Vec<Complex<f64>> = (0..m)
            .map(|j| {
                let nyquist = m.is_multiple_of(2) && j == m / 2;
                let k = if j <= m / 2 {
                    j as f64
                } else {
                    j as f64 - m as f64
                };
                match order {
                    1 if nyquist => Complex::new(0.0, 0.0),
                    1 => Complex::new(0.0, k),
                    _ => Complex::new(-k * k, 0.0),
                }
            })
            .collect();
        let mut buf = vec![Complex::new(0.0, 0.0); m];
        for start in 0..u.len() {
            if !(start / s).is_multiple_of(m) {
                continue;
            }
            for (j, b) in buf.iter_mut().enumerate() {
                *b = Complex::new(u[start + j * s], 0.0);
            }
            fwd.process(&mut buf);
            for (b, f) in buf.iter_mut().zip(&factors) {
                *b *= f;
            }
            inv.process(&mut buf);
            for (j, b) in buf.iter().enumerate() {
                out[start + j * s] += b.re / m as f64;
            }
        }
    }
}

fn is_constant(u: &[f64]) -> bool {
    u.iter().all(|&v| v == u[0])
}
