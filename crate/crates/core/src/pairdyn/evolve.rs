use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Below this many points the update runs serially.
const PAR_THRESHOLD: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MassSign {
    Manifest,
    Broken,
}

impl MassSign {
    fn factor(self) -> f64 {
        match self {
            MassSign::Manifest => 1.0,
            MassSign::Broken => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Boundary {
    Periodic,
    /// Ghost points one cell outside each end are pinned to these values.
    FixedAsymptote { left: Complex64, right: Complex64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub dx: f64,
    pub dt: f64,
    pub steps: usize,
    pub m_delta: f64,
    pub g_delta: f64,
    pub sign: MassSign,
    pub boundary: Boundary,
    /// Uniform real source J.
    pub source: f64,
    /// Snapshot cadence in steps; 0 keeps only the first and last.
    pub snapshot_every: usize,
}

impl SolverConfig {
    pub fn new(dx: f64, dt: f64, steps: usize, m_delta: f64, g_delta: f64) -> Self {
        Self {
            dx,
            dt,
            steps,
            m_delta,
            g_delta,
            sign: MassSign::Manifest,
            boundary: Boundary::Periodic,
            source: 0.0,
            snapshot_every: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dx > 0.0) || !self.dx.is_finite() {
            return Err(Error::param("dx", "must be positive"));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::param("dt", "must be positive"));
        }
        if self.dt > 0.5 * self.dx {
            return Err(Error::CflViolated {
                dt: self.dt,
                limit: 0.5 * self.dx,
            });
        }
        if !(self.m_delta >= 0.0) {
            return Err(Error::param("m_delta", "must be non-negative"));
        }
        if !(self.g_delta >= 0.0) {
            return Err(Error::param("g_delta", "must be non-negative"));
        }
        Ok(())
    }
}

/// Δ and ∂_tΔ on a uniform 1d lattice, x_i = x0 + i dx.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldGrid {
    pub dx: f64,
    pub x0: f64,
    pub values: Vec<Complex64>,
    pub velocities: Vec<Complex64>,
}

impl FieldGrid {
    pub fn new(dx: f64, x0: f64, values: Vec<Complex64>, velocities: Vec<Complex64>) -> Result<Self> {
        if values.len() != velocities.len() {
            return Err(Error::GridMismatch(format!(
                "{} values vs {} velocities",
                values.len(),
                velocities.len()
            )));
        }
        if values.len() < 3 {
            return Err(Error::GridTooSmall {
                axis: "x",
                min: 3,
                got: values.len(),
            });
        }
        Ok(Self {
            dx,
            x0,
            values,
            velocities,
        })
    }

    pub fn from_fn(nx: usize, dx: f64, x0: f64, f: impl Fn(f64) -> (Complex64, Complex64)) -> Result<Self> {
        let (values, velocities) = (0..nx).map(|i| f(x0 + i as f64 * dx)).unzip();
        Self::new(dx, x0, values, velocities)
    }

    pub fn zeros(nx: usize, dx: f64) -> Result<Self> {
        Self::new(dx, 0.0, vec![Complex64::new(0.0, 0.0); nx], vec![Complex64::new(0.0, 0.0); nx])
    }

    pub fn nx(&self) -> usize {
        self.values.len()
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub step: usize,
    pub t: f64,
    pub energy: f64,
    pub charge: f64,
    pub max_abs: f64,
    pub efield_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub snapshots: Vec<(f64, FieldGrid)>,
    pub diagnostics: Vec<Diagnostics>,
}

/// Velocity-Verlet integrator holding the current state.
#[derive(Debug, Clone)]
pub struct Evolver {
    cfg: SolverConfig,
    field: FieldGrid,
    accel: Vec<Complex64>,
    step: usize,
}

impl Evolver {
    pub fn new(field: FieldGrid, cfg: SolverConfig) -> Result<Self> {
        cfg.validate()?;
        if (field.dx - cfg.dx).abs() > 1e-12 * cfg.dx {
            return Err(Error::GridMismatch(format!("grid dx {} vs config dx {}", field.dx, cfg.dx)));
        }
        let mut accel = vec![Complex64::new(0.0, 0.0); field.nx()];
        acceleration(&cfg, &field.values, &mut accel);
        Ok(Self {
            cfg,
            field,
            accel,
            step: 0,
        })
    }

    pub fn config(&self) -> &SolverConfig {
        &self.cfg
    }

    pub fn field(&self) -> &FieldGrid {
        &self.field
    }

    pub fn step_index(&self) -> usize {
        self.step
    }

    pub fn time(&self) -> f64 {
        self.step as f64 * self.cfg.dt
    }

    /// Advance one step.
    pub fn step(&mut self) -> Result<()> {
        let dt = self.cfg.dt;
        let half = 0.5 * dt;
        let n = self.field.nx();
        let FieldGrid { values, velocities, .. } = &mut self.field;
        let kick_drift = |(u, v): (&mut Complex64, &mut Complex64), a: &Complex64| {
            *v += a * half;
            *u += *v * dt;
        };
        if n >= PAR_THRESHOLD {
            values
                .par_iter_mut()
                .zip(velocities.par_iter_mut())
                .zip(self.accel.par_iter())
                .for_each(|(uv, a)| kick_drift(uv, a));
        } else {
            values.iter_mut().zip(velocities.iter_mut()).zip(self.accel.iter()).for_each(|(uv, a)| kick_drift(uv, a));
        }
        acceleration(&self.cfg, values, &mut self.accel);
        let kick = |v: &mut Complex64, a: &Complex64| *v += a * half;
        if n >= PAR_THRESHOLD {
            velocities.par_iter_mut().zip(self.accel.par_iter()).for_each(|(v, a)| kick(v, a));
        } else {
            velocities.iter_mut().zip(self.accel.iter()).for_each(|(v, a)| kick(v, a));
        }
        self.step += 1;
        if !values.iter().chain(velocities.iter()).all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite { step: self.step });
        }
        Ok(())
    }

    pub fn diagnostics(&self) -> Diagnostics {
        let (energy, charge) = energy_and_charge(&self.cfg, &self.field);
        Diagnostics {
            step: self.step,
            t: self.time(),
            energy,
            charge,
            max_abs: self.field.max_abs(),
            efield_norm: efield_norm(&self.cfg, &self.field, &self.accel),
        }
    }

    /// Run `cfg.steps` steps, recording diagnostics every step and snapshots
    /// at the configured cadence.
    pub fn run(mut self) -> Result<Trajectory> {
        let mut traj = Trajectory {
            snapshots: vec![(0.0, self.field.clone())],
            diagnostics: vec![self.diagnostics()],
        };
        for _ in 0..self.cfg.steps {
            self.step()?;
            traj.diagnostics.push(self.diagnostics());
            let every = self.cfg.snapshot_every;
            if (every > 0 && self.step % every == 0) || self.step == self.cfg.steps {
                if traj.snapshots.last().map(|s| s.0) != Some(self.time()) {
                    traj.snapshots.push((self.time(), self.field.clone()));
                }
            }
        }
        Ok(traj)
    }
}

/// Convenience wrapper: build an evolver and run it.
pub fn evolve(field: FieldGrid, cfg: SolverConfig) -> Result<Trajectory> {
    Evolver::new(field, cfg)?.run()
}

fn neighbours(cfg: &SolverConfig, u: &[Complex64], i: usize) -> (Complex64, Complex64) {
    let n = u.len();
    match cfg.boundary {
        Boundary::Periodic => (u[(i + n - 1) % n], u[(i + 1) % n]),
        Boundary::FixedAsymptote { left, right } => (
            if i == 0 { left } else { u[i - 1] },
            if i + 1 == n { right } else { u[i + 1] },
        ),
    }
}

fn acceleration(cfg: &SolverConfig, u: &[Complex64], out: &mut [Complex64]) {
    let inv_dx2 = 1.0 / (cfg.dx * cfg.dx);
    let m2 = cfg.sign.factor() * cfg.m_delta * cfg.m_delta;
    let g6 = cfg.g_delta / 6.0;
    let j = cfg.source;
    let f = |(i, a): (usize, &mut Complex64)| {
        let (l, r) = neighbours(cfg, u, i);
        let c = u[i];
        *a = (l + r - 2.0 * c) * inv_dx2 - c * (m2 + g6 * c.norm_sqr()) + j;
    };
    if u.len() >= PAR_THRESHOLD {
        out.par_iter_mut().enumerate().for_each(f);
    } else {
        out.iter_mut().enumerate().for_each(f);
    }
}

fn potential(cfg: &SolverConfig, u: Complex64) -> f64 {
    let r2 = u.norm_sqr();
    let g = cfg.g_delta;
    let m2 = cfg.m_delta * cfg.m_delta;
    let v = match cfg.sign {
        MassSign::Manifest => 0.5 * m2 * r2 + g / 24.0 * r2 * r2,
        MassSign::Broken if g > 0.0 => g / 24.0 * (r2 - 6.0 * m2 / g).powi(2),
        MassSign::Broken => -0.5 * m2 * r2,
    };
    v - cfg.source * u.re
}

/// Discrete energy (forward-difference gradient) and U(1) charge, summed in
/// index order.
fn energy_and_charge(cfg: &SolverConfig, field: &FieldGrid) -> (f64, f64) {
    let u = &field.values;
    let v = &field.velocities;
    let n = u.len();
    let dx = cfg.dx;
    let mut e = 0.0;
    let mut q = 0.0;
    for i in 0..n {
        let grad = match cfg.boundary {
            Boundary::Periodic => (u[(i + 1) % n] - u[i]) / dx,
            Boundary::FixedAsymptote { right, .. } => ((if i + 1 == n { right } else { u[i + 1] }) - u[i]) / dx,
        };
        e += 0.5 * v[i].norm_sqr() + 0.5 * grad.norm_sqr() + potential(cfg, u[i]);
        q += (u[i].conj() * v[i]).im;
    }
    if let Boundary::FixedAsymptote { left, .. } = cfg.boundary {
        e += 0.5 * ((u[0] - left) / dx).norm_sqr();
    }
    (e * dx, q * dx)
}

/// L2 norm of (∂_t² − ∂_x²)β over points where the phase is defined.
fn efield_norm(cfg: &SolverConfig, field: &FieldGrid, accel: &[Complex64]) -> f64 {
    let u = &field.values;
    let v = &field.velocities;
    let n = u.len();
    let dx = cfg.dx;
    let eps = 1e-10 * field.max_abs().max(f64::MIN_POSITIVE);
    let mut sum = 0.0;
    for i in 0..n {
        let c = u[i];
        let r2 = c.norm_sqr();
        if r2.sqrt() <= eps {
            continue;
        }
        let (l, r) = neighbours(cfg, u, i);
        let ux = (r - l) / (2.0 * dx);
        let uxx = (r + l - 2.0 * c) / (dx * dx);
        let second = |d1: Complex64, d2: Complex64| {
            let p = c.conj() * d1;
            (c.conj() * d2).im / r2 - 2.0 * p.re * p.im / (r2 * r2)
        };
        let e = second(v[i], accel[i]) - second(ux, uxx);
        sum += e * e;
    }
    (sum * dx).sqrt()
}
