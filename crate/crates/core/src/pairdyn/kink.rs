use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KinkDirection {
    /// argument m(x + t)
    Left,
    /// argument m(x − t)
    Right,
}

fn check_g(g_delta: f64) -> Result<()> {
    if !(g_delta > 0.0) {
        return Err(Error::param("g_delta", "must be positive"));
    }
    Ok(())
}

/// (m/sqrt(g/3)) tanh[m(x ± t)], evaluated as written.
pub fn kink_profile(x: f64, t: f64, m_delta: f64, g_delta: f64, dir: KinkDirection) -> Result<f64> {
    check_g(g_delta)?;
    let s = match dir {
        KinkDirection::Left => 1.0,
        KinkDirection::Right => -1.0,
    };
    Ok(m_delta / (g_delta / 3.0).sqrt() * (m_delta * (x + s * t)).tanh())
}

/// Pointwise residual of the broken-sign field equation
/// ρ_tt − ρ_xx − m²ρ + (g/6)ρ³ for the written profile. The profile depends
/// on x ± t only, so the wave operator drops out exactly.
pub fn kink_profile_residual(x: f64, t: f64, m_delta: f64, g_delta: f64, dir: KinkDirection) -> Result<f64> {
    let r = kink_profile(x, t, m_delta, g_delta, dir)?;
    Ok(-m_delta * m_delta * r + g_delta / 6.0 * r.powi(3))
}

/// s₁ (m/sqrt(g/3)) [1 + s₂ sqrt(1 + 2g C(ω² − k²)/(3m⁴))]^{1/2}
pub fn kink_asymptote(
    outer_sign: f64,
    inner_sign: f64,
    c: f64,
    omega: f64,
    k: f64,
    m_delta: f64,
    g_delta: f64,
) -> Result<f64> {
    check_g(g_delta)?;
    if m_delta == 0.0 {
        return Err(Error::param("m_delta", "must be nonzero"));
    }
    let disc = 1.0 + 2.0 * g_delta / (3.0 * m_delta.powi(4)) * c * (omega * omega - k * k);
    if disc < 0.0 {
        return Err(Error::NoRealBranch(format!("inner radicand {disc} < 0")));
    }
    let outer = 1.0 + inner_sign.signum() * disc.sqrt();
    if outer < 0.0 {
        return Err(Error::NoRealBranch(format!("outer radicand {outer} < 0")));
    }
    Ok(outer_sign.signum() * m_delta / (g_delta / 3.0).sqrt() * outer.sqrt())
}

/// Vacuum value sqrt(6) m / sqrt(g) of the broken-sign potential.
pub fn kink_vacuum(m_delta: f64, g_delta: f64) -> f64 {
    (6.0f64).sqrt() * m_delta / g_delta.sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StaticKink {
    pub x: Vec<f64>,
    pub rho: Vec<f64>,
    pub vacuum: f64,
    /// Max |discrete residual| of ρ'' + m²ρ − (g/6)ρ³ with ghost ends ±vacuum.
    pub residual: f64,
}

/// Static kink of ρ'' = −m²ρ + (g/6)ρ³ on x_i = (i − (nx−1)/2) dx, solved by
/// Newton iteration on the three-point discretization with ghost points
/// pinned to ∓sqrt(6) m/sqrt(g).
pub fn static_kink_oracle(m_delta: f64, g_delta: f64, nx: usize, dx: f64) -> Result<StaticKink> {
    check_g(g_delta)?;
    if !(m_delta > 0.0) {
        return Err(Error::param("m_delta", "must be positive"));
    }
    if nx < 3 || !(dx > 0.0) {
        return Err(Error::param("nx", "need nx ≥ 3 and dx > 0"));
    }
    let v = kink_vacuum(m_delta, g_delta);
    let m2 = m_delta * m_delta;
    let g6 = g_delta / 6.0;
    let h2 = dx * dx;
    let center = (nx as f64 - 1.0) / 2.0;
    let x: Vec<f64> = (0..nx).map(|i| (i as f64 - center) * dx).collect();
    let mut rho: Vec<f64> = x.iter().map(|&xi| v * (m_delta * xi / 2f64.sqrt()).tanh()).collect();

    let residual_of = |rho: &[f64], out: &mut [f64]| {
        for i in 0..nx {
            let l = if i == 0 { -v } else { rho[i - 1] };
            let r = if i + 1 == nx { v } else { rho[i + 1] };
            out[i] = (l - 2.0 * rho[i] + r) / h2 + m2 * rho[i] - g6 * rho[i].powi(3);
        }
    };
    let mut res = vec![0.0; nx];
    let mut diag = vec![0.0; nx];
    let mut delta = vec![0.0; nx];
    let off = 1.0 / h2;
    let tol = 1e-11 * v.max(1.0) * m2.max(1.0);
    let mut best = f64::INFINITY;
    for _ in 0..50 {
        residual_of(&rho, &mut res);
        let norm = res.iter().fold(0.0f64, |m, r| m.max(r.abs()));
        best = best.min(norm);
        if norm < tol {
            return Ok(StaticKink {
                x,
                rho,
                vacuum: v,
                residual: norm,
            });
        }
        for i in 0..nx {
            diag[i] = -2.0 / h2 + m2 - 3.0 * g6 * rho[i] * rho[i];
        }
        solve_symmetric_tridiagonal(&diag, off, &res, &mut delta);
        for i in 0..nx {
            rho[i] -= delta[i];
        }
        // the solution is odd; keep the iterate exactly so
        for i in 0..nx / 2 {
            let a = 0.5 * (rho[i] - rho[nx - 1 - i]);
            rho[i] = a;
            rho[nx - 1 - i] = -a;
        }
        if nx % 2 == 1 {
            rho[nx / 2] = 0.0;
        }
    }
    Err(Error::NotConverged {
        iterations: 50,
        best_residual: best,
    })
}

/// Thomas algorithm for a tridiagonal system with constant off-diagonal.
fn solve_symmetric_tridiagonal(diag: &[f64], off: f64, rhs: &[f64], out: &mut [f64]) {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = off / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let den = diag[i] - off * c[i - 1];
        c[i] = off / den;
        d[i] = (rhs[i] - off * d[i - 1]) / den;
    }
    out[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        out[i] = d[i] - c[i] * out[i + 1];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_examples() {
        assert_eq!(kink_profile(0.0, 0.0, 1.0, 3.0, KinkDirection::Left).unwrap(), 0.0);
        let p = kink_profile(0.4, 0.1, 1.0, 3.0, KinkDirection::Right).unwrap();
        assert!((p - 0.3f64.tanh()).abs() < 1e-15);
        assert!(kink_profile(0.0, 0.0, 1.0, 0.0, KinkDirection::Left).is_err());
    }

    #[test]
    fn printed_profile_has_nonzero_residual() {
        let r = kink_profile_residual(1.0, 0.0, 1.0, 3.0, KinkDirection::Left).unwrap();
        assert!(r.abs() > 0.1);
    }

    #[test]
    fn asymptote_outer_branch_is_vacuum() {
        let a = kink_asymptote(1.0, 1.0, 0.0, 2.0, 1.0, 1.3, 2.0).unwrap();
        assert!((a - kink_vacuum(1.3, 2.0)).abs() < 1e-14);
        assert_eq!(kink_asymptote(-1.0, -1.0, 0.0, 2.0, 1.0, 1.3, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn oracle_examples() {
        let k = static_kink_oracle(1.0, 6.0, 801, 0.02).unwrap();
        assert!((k.vacuum - 1.0).abs() < 1e-15);
        assert!(k.residual < 1e-8);
        assert!(k.rho[400].abs() < 1e-12);
        for i in 0..801 {
            assert!((k.rho[i] + k.rho[800 - i]).abs() < 1e-12);
        }
        assert!((k.rho[800] - 1.0).abs() < 1e-3);
    }
}
