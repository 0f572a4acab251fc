//! Uniform space-time lattices and finite-difference stencils.
//!
//! Interior points use second-order centered differences. Boundary points use
//! second-order one-sided stencils; the one-sided second derivative needs four
//! points and falls back to the three-point (first-order) stencil on shorter
//! axes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Real samples on a uniform (t, x) lattice, stored row-major as `[t][x]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceTimeGrid {
    pub nt: usize,
    pub nx: usize,
    pub dt: f64,
    pub dx: f64,
    pub t0: f64,
    pub x0: f64,
    pub data: Vec<f64>,
}

impl SpaceTimeGrid {
    pub fn zeros(nt: usize, nx: usize, dt: f64, dx: f64) -> Self {
        Self {
            nt,
            nx,
            dt,
            dx,
            t0: 0.0,
            x0: 0.0,
            data: vec![0.0; nt * nx],
        }
    }

    pub fn with_origin(mut self, t0: f64, x0: f64) -> Self {
        self.t0 = t0;
        self.x0 = x0;
        self
    }

    /// Sample `f(t, x)` on the lattice with the given origin.
    pub fn from_fn(nt: usize, nx: usize, dt: f64, dx: f64, t0: f64, x0: f64, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut data = Vec::with_capacity(nt * nx);
        for i in 0..nt {
            let t = t0 + i as f64 * dt;
            for j in 0..nx {
                data.push(f(t, x0 + j as f64 * dx));
            }
        }
        Self {
            nt,
            nx,
            dt,
            dx,
            t0,
            x0,
            data,
        }
    }

    pub fn t(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.dt
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x0 + j as f64 * self.dx
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.nx + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.nx + j] = v;
    }

    pub fn same_lattice(&self, other: &Self) -> bool {
        self.nt == other.nt && self.nx == other.nx && self.dt == other.dt && self.dx == other.dx
    }

    pub fn check_same_lattice(&self, other: &Self) -> Result<()> {
        if self.same_lattice(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "{}x{} (dt {}, dx {}) vs {}x{} (dt {}, dx {})",
                self.nt, self.nx, self.dt, self.dx, other.nt, other.nx, other.dt, other.dx
            )))
        }
    }

    pub fn check_min_size(&self, min: usize) -> Result<()> {
        if self.nt < min {
            return Err(Error::GridTooSmall {
                axis: "t",
                min,
                got: self.nt,
            });
        }
        if self.nx < min {
            return Err(Error::GridTooSmall {
                axis: "x",
                min,
                got: self.nx,
            });
        }
        Ok(())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            data: self.data.iter().map(|&v| f(v)).collect(),
            ..self.clone()
        }
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.check_same_lattice(other)?;
        Ok(Self {
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
            ..self.clone()
        })
    }

    fn along_x(&self, op: fn(&[f64], f64, &mut [f64])) -> Self {
        let mut out = self.clone();
        for (src, dst) in self.data.chunks(self.nx).zip(out.data.chunks_mut(self.nx)) {
            op(src, self.dx, dst);
        }
        out
    }

    fn along_t(&self, op: fn(&[f64], f64, &mut [f64])) -> Self {
        let mut out = self.clone();
        let mut col = vec![0.0; self.nt];
        let mut res = vec![0.0; self.nt];
        for j in 0..self.nx {
            for i in 0..self.nt {
                col[i] = self.get(i, j);
            }
            op(&col, self.dt, &mut res);
            for i in 0..self.nt {
                out.set(i, j, res[i]);
            }
        }
        out
    }

    pub fn d_dx(&self) -> Result<Self> {
        self.check_axis_len(self.nx, "x", 3)?;
        Ok(self.along_x(first_derivative_into))
    }

    pub fn d_dt(&self) -> Result<Self> {
        self.check_axis_len(self.nt, "t", 3)?;
        Ok(self.along_t(first_derivative_into))
    }

    /// Fourth-order ∂/∂x (five-point centered, one-sided near the ends).
    pub fn d_dx4(&self) -> Result<Self> {
        self.check_axis_len(self.nx, "x", 5)?;
        Ok(self.along_x(first_derivative4_into))
    }

    pub fn d_dt4(&self) -> Result<Self> {
        self.check_axis_len(self.nt, "t", 5)?;
        Ok(self.along_t(first_derivative4_into))
    }

    pub fn d2_dx2(&self) -> Result<Self> {
        self.check_axis_len(self.nx, "x", 3)?;
        Ok(self.along_x(second_derivative_into))
    }

    pub fn d2_dt2(&self) -> Result<Self> {
        self.check_axis_len(self.nt, "t", 3)?;
        Ok(self.along_t(second_derivative_into))
    }

    fn check_axis_len(&self, n: usize, axis: &'static str, min: usize) -> Result<()> {
        if n < min {
            Err(Error::GridTooSmall { axis, min, got: n })
        } else {
            Ok(())
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Max |value| over points at least `margin` away from every edge.
    pub fn interior_max_abs(&self, margin: usize) -> f64 {
        let mut m = 0.0f64;
        for i in margin..self.nt.saturating_sub(margin) {
            for j in margin..self.nx.saturating_sub(margin) {
                m = m.max(self.get(i, j).abs());
            }
        }
        m
    }
}

/// Fourth-order first derivative; needs at least five samples.
pub fn first_derivative4(f: &[f64], h: f64) -> Vec<f64> {
    let mut out = vec![0.0; f.len()];
    first_derivative4_into(f, h, &mut out);
    out
}

fn first_derivative4_into(f: &[f64], h: f64, out: &mut [f64]) {
    let n = f.len();
    debug_assert!(n >= 5);
    let c = 1.0 / (12.0 * h);
    out[0] = c * (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]);
    out[1] = c * (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]);
    for i in 2..n - 2 {
        out[i] = c * (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]);
    }
    out[n - 2] = -c * (-3.0 * f[n - 1] - 10.0 * f[n - 2] + 18.0 * f[n - 3] - 6.0 * f[n - 4] + f[n - 5]);
    out[n - 1] = -c * (-25.0 * f[n - 1] + 48.0 * f[n - 2] - 36.0 * f[n - 3] + 16.0 * f[n - 4] - 3.0 * f[n - 5]);
}

/// First derivative of a uniformly sampled sequence.
pub fn first_derivative(f: &[f64], h: f64) -> Vec<f64> {
    let mut out = vec![0.0; f.len()];
    first_derivative_into(f, h, &mut out);
    out
}

/// Second derivative of a uniformly sampled sequence.
pub fn second_derivative(f: &[f64], h: f64) -> Vec<f64> {
    let mut out = vec![0.0; f.len()];
    second_derivative_into(f, h, &mut out);
    out
}

fn first_derivative_into(f: &[f64], h: f64, out: &mut [f64]) {
    let n = f.len();
    if n < 2 {
        out.iter_mut().for_each(|v| *v = 0.0);
        return;
    }
    if n == 2 {
        let d = (f[1] - f[0]) / h;
        out[0] = d;
        out[1] = d;
        return;
    }
    for i in 1..n - 1 {
        out[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    }
    out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
}

fn second_derivative_into(f: &[f64], h: f64, out: &mut [f64]) {
    let n = f.len();
    if n < 3 {
        out.iter_mut().for_each(|v| *v = 0.0);
        return;
    }
    let h2 = h * h;
    for i in 1..n - 1 {
        out[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / h2;
    }
    if n >= 4 {
        out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
        out[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
    } else {
        out[0] = out[1];
        out[n - 1] = out[n - 2];
    }
}
