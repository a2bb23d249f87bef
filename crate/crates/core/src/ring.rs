//! Regular n-gon rings of identical vortices.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::GreensChoice;
use crate::vortex::VortexConfig;

/// A regular ring: `n` vortices of strength `kappa` at chart radius `r0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RingSpec {
    pub n: usize,
    pub kappa: f64,
    pub r0: f64,
    pub lambda: f64,
    pub phase: f64,
}

impl RingSpec {
    pub fn new(n: usize, kappa: f64, r0: f64, lambda: f64) -> Result<Self> {
        let s = RingSpec {
            n,
            kappa,
            r0,
            lambda,
            phase: 0.0,
        };
        s.validate()?;
        Ok(s)
    }

    /// Unit-strength ring with `λr₀² = x`.
    pub fn from_x(n: usize, r0: f64, x: f64) -> Result<Self> {
        Self::new(n, 1.0, r0, x / (r0 * r0))
    }

    pub fn with_phase(mut self, phase: f64) -> Self {
        self.phase = phase;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidRing(format!("n must be at least 2, got {}", self.n)));
        }
        if !(self.kappa != 0.0) || !self.kappa.is_finite() {
            return Err(Error::InvalidRing("kappa must be finite and nonzero".into()));
        }
        if !(self.r0 > 0.0) || !self.r0.is_finite() {
            return Err(Error::InvalidRing("r0 must be finite and positive".into()));
        }
        if !self.lambda.is_finite() || !self.phase.is_finite() {
            return Err(Error::InvalidRing("lambda and phase must be finite".into()));
        }
        if !(self.x() > -1.0) {
            return Err(Error::ChartDomain { re: self.r0, im: 0.0 });
        }
        Ok(())
    }

    /// The effective parameter `λr₀²`.
    pub fn x(&self) -> f64 {
        self.lambda * self.r0 * self.r0
    }

    /// `σ = 1 + λr₀²`.
    pub fn sigma(&self) -> f64 {
        1.0 + self.x()
    }

    /// `σ̃ = 1 − λr₀²`.
    pub fn sigma_tilde(&self) -> f64 {
        1.0 - self.x()
    }

    /// Polar angle of vortex `j`.
    pub fn angle(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.n as f64 + self.phase
    }

    pub fn positions(&self) -> Vec<Complex64> {
        (0..self.n).map(|j| Complex64::from_polar(self.r0, self.angle(j))).collect()
    }
}

pub fn make_ring(s: &RingSpec, greens: GreensChoice) -> Result<VortexConfig> {
    s.validate()?;
    VortexConfig::new(s.lambda, s.positions(), vec![s.kappa; s.n], greens)
}

/// `−(n(n−1)κ²/8π) log(r₀²/σ²)`: the Background energy of the ring without its
/// configuration-independent constant.
pub fn ring_energy(s: &RingSpec) -> Result<f64> {
    s.validate()?;
    let n = s.n as f64;
    Ok(-(n * (n - 1.0) * s.kappa * s.kappa / (8.0 * PI)) * (s.r0 * s.r0 / (s.sigma() * s.sigma())).ln())
}

/// Angular velocity of the rigidly rotating ring.
pub fn omega0(s: &RingSpec, greens: GreensChoice) -> Result<f64> {
    s.validate()?;
    let n = s.n as f64;
    let (x, sig, r2) = (s.x(), s.sigma(), s.r0 * s.r0);
    let base = -(n - 1.0) * s.kappa / (8.0 * PI * r2);
    Ok(match greens {
        GreensChoice::Background => base * (1.0 - x * x),
        GreensChoice::PoleAtInfinity => base * sig * sig,
        GreensChoice::Antipodal => {
            // Each vortex also feels the n opposite vortices at the antipodes of
            // the ring; they form a ring of radius 1/(λr₀) rotated by π.
            let p = -x;
            let pn = p.powi(s.n as i32);
            if (1.0 - pn).abs() < 1e-14 {
                return Err(Error::AntipodalCollision { i: 0, j: s.n / 2 });
            }
            -(s.kappa * sig * sig / (8.0 * PI * r2)) * ((n - 1.0) + 2.0 * n * pn / (1.0 - pn) + 2.0 * x / sig)
        }
    })
}

/// Distance of a configuration from the nearest regular ring with the same
/// centre: the largest displacement from the best-fitting equally spaced
/// polygon `r̄ e^{i(2πj/n + φ)}`.
pub fn ring_deviation(positions: &[Complex64]) -> f64 {
    let n = positions.len();
    if n == 0 {
        return 0.0;
    }
    let r_mean = positions.iter().map(|z| z.norm()).sum::<f64>() / n as f64;
    let first: Complex64 = positions
        .iter()
        .enumerate()
        .map(|(j, z)| z * Complex64::from_polar(1.0, -2.0 * PI * j as f64 / n as f64))
        .sum();
    let phase = first.arg();
    positions
        .iter()
        .enumerate()
        .map(|(j, z)| (z - Complex64::from_polar(r_mean, 2.0 * PI * j as f64 / n as f64 + phase)).norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vortex::{gradient_zbar, hamiltonian, momentum, velocities};
    use proptest::prelude::*;

    #[test]
    fn square_positions() {
        let cfg = make_ring(&RingSpec::new(4, 1.0, 1.0, 0.0).unwrap(), GreensChoice::Background).unwrap();
        let expect = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)];
        for (z, e) in cfg.positions.iter().zip(expect) {
            assert!((z - Complex64::new(e.0, e.1)).norm() < 1e-15);
        }
    }

    #[test]
    fn ring_momentum() {
        let s = RingSpec::new(6, 0.8, 0.9, 0.4).unwrap();
        let (j, ju) = momentum(&make_ring(&s, GreensChoice::Background).unwrap()).unwrap();
        assert!(j.norm() < 1e-14);
        assert!((ju - 6.0 * 0.8 * 0.81 / s.sigma()).abs() < 1e-14);
    }

    #[test]
    fn omega_examples() {
        let s = RingSpec::new(7, 1.0, 1.0, 0.0).unwrap();
        let w = omega0(&s, GreensChoice::Background).unwrap();
        assert!((w + 3.0 / (4.0 * PI)).abs() < 1e-15);
        assert!((w + 0.238_732).abs() < 1e-6);
        for (n, k, r) in [(3usize, 1.0, 1.0), (5, -0.7, 0.4), (9, 2.0, 1.7)] {
            let s = RingSpec::new(n, k, r, 0.0).unwrap();
            let expect = -(n as f64 - 1.0) * k / (8.0 * PI * r * r);
            for g in GreensChoice::ALL {
                assert!((omega0(&s, g).unwrap() - expect).abs() < 1e-15);
            }
        }
        let tiny = RingSpec::new(5, 1.0, 1.0, 1e-9).unwrap();
        let w = omega0(&tiny, GreensChoice::Antipodal).unwrap();
        assert!((w + 4.0 / (8.0 * PI)).abs() < 1e-8);
    }

    #[test]
    fn energy_examples() {
        let s = RingSpec::new(2, 1.0, 1.0, 0.0).unwrap();
        assert_eq!(ring_energy(&s).unwrap(), 0.0);
        for l in [-0.3, 0.0, 0.5] {
            let a = RingSpec::new(5, 1.3, 0.7, l).unwrap();
            let b = RingSpec::new(5, 1.3, 1.1, l).unwrap();
            let ha = hamiltonian(&make_ring(&a, GreensChoice::Background).unwrap()).unwrap();
            let hb = hamiltonian(&make_ring(&b, GreensChoice::Background).unwrap()).unwrap();
            let d = (ha - hb) - (ring_energy(&a).unwrap() - ring_energy(&b).unwrap());
            assert!(d.abs() < 1e-13);
        }
        let c: f64 = 2.5;
        let a = RingSpec::new(6, 1.0, 1.0, 0.0).unwrap();
        let b = RingSpec::new(6, 1.0, c.sqrt(), 0.0).unwrap();
        let expect = -(30.0 / (8.0 * PI)) * c.ln();
        assert!((ring_energy(&b).unwrap() - ring_energy(&a).unwrap() - expect).abs() < 1e-14);
    }

    #[test]
    fn criticality_for_every_greens_choice() {
        for g in GreensChoice::ALL {
            for &(n, k, r, x) in &[(3usize, 1.0, 1.0, 0.2), (5, 0.6, 1.2, -0.3), (6, 1.0, 0.8, 0.5), (8, -1.4, 0.5, 0.7)] {
                let s = RingSpec::from_x(n, r, x).unwrap();
                let s = RingSpec { kappa: k, ..s };
                let w = omega0(&s, g).unwrap();
                let grad = gradient_zbar(&make_ring(&s, g).unwrap(), w).unwrap();
                let norm = grad.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt();
                assert!(norm < 1e-9, "{g:?} n={n} x={x}: {norm:e}");
                let v = velocities(&make_ring(&s, g).unwrap()).unwrap();
                for (z, u) in s.positions().iter().zip(&v) {
                    assert!((u - Complex64::new(0.0, w) * z).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn deviation_of_rotated_ring_is_zero() {
        let s = RingSpec::new(7, 1.0, 1.3, 0.0).unwrap().with_phase(0.4);
        assert!(ring_deviation(&s.positions()) < 1e-14);
        let mut p = s.positions();
        p[2] *= 1.01;
        assert!(ring_deviation(&p) > 0.01);
    }

    proptest! {
        #[test]
        fn background_omega_even_in_lambda(n in 2usize..12, r in 0.2..2.0f64, t in 0.0..0.95f64) {
            let l = t / (r * r);
            let a = omega0(&RingSpec::new(n, 1.0, r, l).unwrap(), GreensChoice::Background).unwrap();
            let b = omega0(&RingSpec::new(n, 1.0, r, -l).unwrap(), GreensChoice::Background).unwrap();
            prop_assert!((a - b).abs() <= 1e-14 * a.abs());
        }
    }
}
