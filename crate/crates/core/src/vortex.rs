//! N-vortex dynamics on M_λ.
//!
//! The Hamiltonian is `H = −(1/4π) Σ_{i<j} κ_iκ_j G(z_i; z_j)` and the flow is
//! `ż_j = i(σ_j²/κ_j) ∂H/∂z̄_j`, the sign that makes a regular ring of equal
//! vortices rotate with the angular velocity returned by [`crate::ring::omega0`].

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Warning};
use crate::geometry::{self, GreensChoice, SurfaceParam};

const COLLISION_EVAL: f64 = 1e-14;
const COLLISION_ABORT: f64 = 1e-6;
const EQUILIBRIUM_RESIDUAL: f64 = 1e-6;

/// Positions and vorticities of N point vortices on M_λ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VortexConfig {
    pub lambda: f64,
    pub positions: Vec<Complex64>,
    pub vorticities: Vec<f64>,
    pub greens: GreensChoice,
}

impl VortexConfig {
    pub fn new(
        lambda: f64,
        positions: Vec<Complex64>,
        vorticities: Vec<f64>,
        greens: GreensChoice,
    ) -> Result<Self> {
        let c = VortexConfig {
            lambda,
            positions,
            vorticities,
            greens,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn surface(&self) -> SurfaceParam {
        SurfaceParam::new(self.lambda)
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Checks lengths, finiteness, chart membership and pairwise separation.
    pub fn validate(&self) -> Result<()> {
        if self.positions.is_empty() {
            return Err(Error::InvalidConfig("no vortices".into()));
        }
        if self.positions.len() != self.vorticities.len() {
            return Err(Error::InvalidConfig(format!(
                "{} positions but {} vorticities",
                self.positions.len(),
                self.vorticities.len()
            )));
        }
        if !self.lambda.is_finite() {
            return Err(Error::InvalidConfig("lambda is not finite".into()));
        }
        let p = self.surface();
        for (i, (z, k)) in self.positions.iter().zip(&self.vorticities).enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() || !k.is_finite() {
                return Err(Error::InvalidConfig(format!("vortex {i} is not finite")));
            }
            geometry::sigma(*z, p)?;
        }
        check_separation(&self.positions, self.lambda, self.greens, COLLISION_EVAL)
    }
}

fn check_separation(pos: &[Complex64], lambda: f64, greens: GreensChoice, tol: f64) -> Result<()> {
    let p = SurfaceParam::new(lambda);
    for i in 0..pos.len() {
        for j in i + 1..pos.len() {
            if (pos[i] - pos[j]).norm() < tol {
                return Err(Error::Collision { i, j });
            }
            if greens == GreensChoice::Antipodal {
                geometry::check_antipodal(pos[i], pos[j], p)
                    .map_err(|_| Error::AntipodalCollision { i, j })?;
            }
        }
    }
    Ok(())
}

fn require_pair(c: &VortexConfig) -> Result<()> {
    c.validate()?;
    if c.len() < 2 {
        return Err(Error::InvalidConfig("at least two vortices are required".into()));
    }
    Ok(())
}

fn pair_energy(c: &VortexConfig) -> f64 {
    let p = c.surface();
    let mut h = 0.0;
    for i in 0..c.len() {
        for j in i + 1..c.len() {
            let g = geometry::greens(c.greens, c.positions[i], c.positions[j], p)
                .expect("validated configuration");
            h += c.vorticities[i] * c.vorticities[j] * g;
        }
    }
    -h / (4.0 * PI)
}

/// Energy `H` of the configuration.
pub fn hamiltonian(c: &VortexConfig) -> Result<f64> {
    require_pair(c)?;
    Ok(pair_energy(c))
}

/// Rotational momentum `Σ κ_j|z_j|²/σ_j`.
pub fn rotational_momentum(c: &VortexConfig) -> f64 {
    c.positions
        .iter()
        .zip(&c.vorticities)
        .map(|(z, k)| k * z.norm_sqr() / (1.0 + c.lambda * z.norm_sqr()))
        .sum()
}

/// `Ĥ = H − ω Σ κ_j|z_j|²/σ_j`.
pub fn augmented_hamiltonian(c: &VortexConfig, omega: f64) -> Result<f64> {
    Ok(hamiltonian(c)? - omega * rotational_momentum(c))
}

/// Total momentum `Σ κ_j (z_j/σ_j, |z_j|²/σ_j)`.
pub fn momentum(c: &VortexConfig) -> Result<(Complex64, f64)> {
    c.validate()?;
    let p = c.surface();
    let mut m = (Complex64::new(0.0, 0.0), 0.0);
    for (z, k) in c.positions.iter().zip(&c.vorticities) {
        let (a, b) = geometry::momentum_map(*z, p)?;
        m.0 += *k * a;
        m.1 += k * b;
    }
    Ok(m)
}

/// `S_j = Σ_{k≠j} κ_k ∂G(z_j;z_k)/∂z̄_j`.
fn interaction_sums(lambda: f64, greens: GreensChoice, pos: &[Complex64], kappa: &[f64]) -> Vec<Complex64> {
    let n = pos.len();
    let mut s = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        for k in 0..n {
            if k != j {
                s[j] += kappa[k] * geometry::greens_dzbar(greens, pos[j], pos[k], lambda);
            }
        }
    }
    s
}

/// Closed-form `∂Ĥ/∂z̄_j` for every vortex (`omega = 0` gives `∂H/∂z̄_j`).
pub fn gradient_zbar(c: &VortexConfig, omega: f64) -> Result<Vec<Complex64>> {
    require_pair(c)?;
    let s = interaction_sums(c.lambda, c.greens, &c.positions, &c.vorticities);
    Ok(c
        .positions
        .iter()
        .zip(&c.vorticities)
        .zip(s)
        .map(|((z, k), sj)| {
            let sig = 1.0 + c.lambda * z.norm_sqr();
            -*k * sj / (4.0 * PI) - omega * *k * z / (sig * sig)
        })
        .collect())
}

fn field(lambda: f64, greens: GreensChoice, pos: &[Complex64], kappa: &[f64], out: &mut [Complex64]) {
    let s = interaction_sums(lambda, greens, pos, kappa);
    let factor = Complex64::new(0.0, -1.0 / (4.0 * PI));
    for ((o, z), sj) in out.iter_mut().zip(pos).zip(s) {
        let sig = 1.0 + lambda * z.norm_sqr();
        *o = factor * sig * sig * sj;
    }
}

/// Vortex velocities `ż_j`.
pub fn velocities(c: &VortexConfig) -> Result<Vec<Complex64>> {
    require_pair(c)?;
    if let Some(i) = c.vorticities.iter().position(|k| *k == 0.0) {
        return Err(Error::ZeroVorticity { i });
    }
    let mut out = vec![Complex64::new(0.0, 0.0); c.len()];
    field(c.lambda, c.greens, &c.positions, &c.vorticities, &mut out);
    Ok(out)
}

/// Real Jacobian of `z ↦ ż − iωz` in coordinates `(x_1, y_1, …, x_N, y_N)`.
pub fn velocity_jacobian(c: &VortexConfig, omega: f64) -> Result<DMatrix<f64>> {
    velocities(c)?;
    let n = c.len();
    let (l, pos, kap) = (c.lambda, &c.positions, &c.vorticities);
    let s = interaction_sums(l, c.greens, pos, kap);
    let pref = Complex64::new(0.0, -1.0 / (4.0 * PI));
    let i = Complex64::new(0.0, 1.0);
    let mut jac = DMatrix::zeros(2 * n, 2 * n);
    let mut put = |j: usize, m: usize, a: Complex64, b: Complex64| {
        let dx = a + b;
        let dy = i * (a - b);
        jac[(2 * j, 2 * m)] += dx.re;
        jac[(2 * j + 1, 2 * m)] += dx.im;
        jac[(2 * j, 2 * m + 1)] += dy.re;
        jac[(2 * j + 1, 2 * m + 1)] += dy.im;
    };
    for j in 0..n {
        let zj = pos[j];
        let sig = 1.0 + l * zj.norm_sqr();
        let mut a_self = pref * 2.0 * sig * l * zj.conj() * s[j] - i * omega;
        let mut b_self = pref * 2.0 * sig * l * zj * s[j];
        for m in 0..n {
            if m == j {
                continue;
            }
            let d = geometry::greens_dzbar_jet(c.greens, zj, pos[m], l);
            a_self += pref * sig * sig * kap[m] * d[0];
            b_self += pref * sig * sig * kap[m] * d[1];
            put(j, m, pref * sig * sig * kap[m] * d[2], pref * sig * sig * kap[m] * d[3]);
        }
        put(j, j, a_self, b_self);
    }
    Ok(jac)
}

/// Eigenvalues of the linearised flow at a relative equilibrium, taken in the
/// frame rotating with the fitted angular velocity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearSpectrum {
    pub omega: f64,
    pub residual: f64,
    pub eigenvalues: Vec<Complex64>,
    pub warnings: Vec<Warning>,
}

impl LinearSpectrum {
    pub fn max_real_part(&self) -> f64 {
        self.eigenvalues.iter().map(|e| e.re).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_abs_real_part(&self) -> f64 {
        self.eigenvalues.iter().map(|e| e.re.abs()).fold(0.0, f64::max)
    }
}

/// Least-squares angular velocity `ω` with `ż ≈ iωz`, and the relative residual.
pub fn fit_rotation(c: &VortexConfig) -> Result<(f64, f64)> {
    let v = velocities(c)?;
    let i = Complex64::new(0.0, 1.0);
    let num: f64 = c.positions.iter().zip(&v).map(|(z, w)| ((i * z).conj() * w).re).sum();
    let den: f64 = c.positions.iter().map(|z| z.norm_sqr()).sum();
    let omega = if den > 0.0 { num / den } else { 0.0 };
    let scale = v.iter().map(|w| w.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let res = c
        .positions
        .iter()
        .zip(&v)
        .map(|(z, w)| (w - i * omega * z).norm())
        .fold(0.0, f64::max);
    Ok((omega, res / scale))
}

pub fn linearized_spectrum(c: &VortexConfig) -> Result<LinearSpectrum> {
    let (omega, residual) = fit_rotation(c)?;
    let mut warnings = Vec::new();
    if residual > EQUILIBRIUM_RESIDUAL {
        warnings.push(Warning::new(
            "linearized_spectrum",
            format!("configuration is not a relative equilibrium (relative residual {residual:.3e})"),
        ));
    }
    let jac = velocity_jacobian(c, omega)?;
    let mut eigenvalues: Vec<Complex64> = jac.complex_eigenvalues().iter().copied().collect();
    eigenvalues.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(LinearSpectrum {
        omega,
        residual,
        eigenvalues,
        warnings,
    })
}

/// Conserved quantities recorded along a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Invariants {
    pub h: f64,
    pub j_re: f64,
    pub j_im: f64,
    pub j_u: f64,
}

/// How an integration run ended.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Termination {
    Completed,
    /// Two vortices came closer than the abort threshold.
    CollisionApproach { i: usize, j: usize, distance: f64 },
    /// A vortex left the chart domain.
    LeftChart { i: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub lambda: f64,
    pub greens: GreensChoice,
    pub vorticities: Vec<f64>,
    pub times: Vec<f64>,
    pub states: Vec<Vec<Complex64>>,
    pub invariants: Vec<Invariants>,
    pub termination: Termination,
}

impl Trajectory {
    pub fn config_at(&self, step: usize) -> VortexConfig {
        VortexConfig {
            lambda: self.lambda,
            positions: self.states[step].clone(),
            vorticities: self.vorticities.clone(),
            greens: self.greens,
        }
    }

    pub fn completed(&self) -> bool {
        self.termination == Termination::Completed
    }

    /// Largest relative deviation of each invariant from its initial value,
    /// as `(H, J_re, J_im, J_u)`; each is scaled by `max(|initial|, |J|)` so
    /// that vanishing components are measured against the momentum magnitude.
    pub fn max_relative_drift(&self) -> [f64; 4] {
        let first = self.invariants[0];
        let jscale = (first.j_re.powi(2) + first.j_im.powi(2) + first.j_u.powi(2)).sqrt();
        let scales = [
            first.h.abs().max(f64::MIN_POSITIVE),
            first.j_re.abs().max(jscale).max(f64::MIN_POSITIVE),
            first.j_im.abs().max(jscale).max(f64::MIN_POSITIVE),
            first.j_u.abs().max(jscale).max(f64::MIN_POSITIVE),
        ];
        let mut out = [0.0f64; 4];
        for inv in &self.invariants {
            let d = [
                inv.h - first.h,
                inv.j_re - first.j_re,
                inv.j_im - first.j_im,
                inv.j_u - first.j_u,
            ];
            for k in 0..4 {
                out[k] = out[k].max(d[k].abs() / scales[k]);
            }
        }
        out
    }
}

fn invariants_of(c: &VortexConfig) -> Invariants {
    let h = pair_energy(c);
    let p = c.surface();
    let mut j = (Complex64::new(0.0, 0.0), 0.0);
    for (z, k) in c.positions.iter().zip(&c.vorticities) {
        let s = 1.0 + p.lambda * z.norm_sqr();
        j.0 += *k * z / s;
        j.1 += k * z.norm_sqr() / s;
    }
    Invariants {
        h,
        j_re: j.0.re,
        j_im: j.0.im,
        j_u: j.1,
    }
}

/// Integrates with the classical fourth-order Runge–Kutta scheme.
///
/// The step is `t_end / ceil(t_end/dt)`, so the run ends exactly at `t_end`.
/// The run stops early, returning the partial trajectory, when two vortices
/// approach within `1e−6` or a vortex leaves the chart.
pub fn integrate(c: &VortexConfig, t_end: f64, dt: f64) -> Result<Trajectory> {
    if !(dt > 0.0) || !dt.is_finite() || !(t_end > 0.0) || !t_end.is_finite() {
        return Err(Error::StepSize(format!("need t_end > 0 and dt > 0, got t_end={t_end}, dt={dt}")));
    }
    let steps = (t_end / dt - 1e-9).ceil().max(1.0);
    if steps > 1e9 {
        return Err(Error::StepSize(format!("{steps} steps requested")));
    }
    let steps = steps as usize;
    let h = t_end / steps as f64;
    velocities(c)?;
    check_separation(&c.positions, c.lambda, c.greens, COLLISION_ABORT)?;

    let n = c.len();
    let (l, g, kap) = (c.lambda, c.greens, &c.vorticities);
    let mut traj = Trajectory {
        lambda: l,
        greens: g,
        vorticities: kap.clone(),
        times: vec![0.0],
        states: vec![c.positions.clone()],
        invariants: vec![invariants_of(c)],
        termination: Termination::Completed,
    };
    let zero = Complex64::new(0.0, 0.0);
    let (mut k1, mut k2, mut k3, mut k4) = (vec![zero; n], vec![zero; n], vec![zero; n], vec![zero; n]);
    let mut tmp = vec![zero; n];
    let mut cur = c.positions.clone();
    for step in 1..=steps {
        field(l, g, &cur, kap, &mut k1);
        for i in 0..n {
            tmp[i] = cur[i] + 0.5 * h * k1[i];
        }
        field(l, g, &tmp, kap, &mut k2);
        for i in 0..n {
            tmp[i] = cur[i] + 0.5 * h * k2[i];
        }
        field(l, g, &tmp, kap, &mut k3);
        for i in 0..n {
            tmp[i] = cur[i] + h * k3[i];
        }
        field(l, g, &tmp, kap, &mut k4);
        for i in 0..n {
            cur[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if let Some(i) = cur.iter().position(|z| !(1.0 + l * z.norm_sqr() > 0.0) || !z.re.is_finite()) {
            traj.termination = Termination::LeftChart { i };
            break;
        }
        let cfg = VortexConfig {
            lambda: l,
            positions: cur.clone(),
            vorticities: kap.clone(),
            greens: g,
        };
        traj.times.push(step as f64 * h);
        traj.invariants.push(invariants_of(&cfg));
        traj.states.push(cfg.positions);
        if let Some((i, j, d)) = closest_pair(&cur) {
            if d < COLLISION_ABORT {
                traj.termination = Termination::CollisionApproach { i, j, distance: d };
                break;
            }
        }
    }
    Ok(traj)
}

fn closest_pair(pos: &[Complex64]) -> Option<(usize, usize, f64)> {
    let mut best: Option<(usize, usize, f64)> = None;
    for i in 0..pos.len() {
        for j in i + 1..pos.len() {
            let d = (pos[i] - pos[j]).norm();
            if best.is_none_or(|b| d < b.2) {
                best = Some((i, j, d));
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diff;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ring(n: usize, r: f64, lambda: f64, greens: GreensChoice) -> VortexConfig {
        let pos = (0..n)
            .map(|j| Complex64::from_polar(r, 2.0 * PI * j as f64 / n as f64))
            .collect();
        VortexConfig::new(lambda, pos, vec![1.0; n], greens).unwrap()
    }

    fn generic() -> VortexConfig {
        VortexConfig::new(
            0.3,
            vec![c(0.4, 0.1), c(-0.5, 0.35), c(0.05, -0.6)],
            vec![1.0, 0.7, -0.4],
            GreensChoice::Background,
        )
        .unwrap()
    }

    #[test]
    fn pair_energy_example() {
        let pair = VortexConfig::new(0.0, vec![c(1.0, 0.0), c(-1.0, 0.0)], vec![1.0, 1.0], GreensChoice::Background)
            .unwrap();
        let h = hamiltonian(&pair).unwrap();
        assert!((h + 4f64.ln() / (4.0 * PI)).abs() < 1e-15);
        assert!((h + 0.110_318).abs() < 1e-6);
        let mut opp = pair.clone();
        opp.vorticities = vec![1.0, -1.0];
        for l in [0.0, 0.4, -0.2] {
            let (mut a, mut b) = (pair.clone(), opp.clone());
            a.lambda = l;
            b.lambda = l;
            assert!((hamiltonian(&a).unwrap() + hamiltonian(&b).unwrap()).abs() < 1e-15);
        }
    }

    #[test]
    fn augmented_reduces_to_energy() {
        let g = generic();
        assert_eq!(augmented_hamiltonian(&g, 0.0).unwrap(), hamiltonian(&g).unwrap());
    }

    #[test]
    fn ring_velocities_rotate_rigidly() {
        for (n, omega) in [(3usize, -1.0 / (4.0 * PI)), (2, -1.0 / (8.0 * PI)), (7, -3.0 / (4.0 * PI))] {
            let cfg = ring(n, 1.0, 0.0, GreensChoice::Background);
            let v = velocities(&cfg).unwrap();
            for (z, w) in cfg.positions.iter().zip(&v) {
                assert!((w - c(0.0, omega) * z).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn errors() {
        let bad = VortexConfig::new(0.0, vec![c(0.0, 0.0), c(0.0, 0.0)], vec![1.0, 1.0], GreensChoice::Background);
        assert!(matches!(bad, Err(Error::Collision { i: 0, j: 1 })));
        let zero = VortexConfig::new(0.0, vec![c(0.0, 0.0), c(1.0, 0.0)], vec![1.0, 0.0], GreensChoice::Background)
            .unwrap();
        assert_eq!(velocities(&zero), Err(Error::ZeroVorticity { i: 1 }));
        let off = VortexConfig::new(-1.0, vec![c(0.0, 0.0), c(1.5, 0.0)], vec![1.0, 1.0], GreensChoice::Background);
        assert!(matches!(off, Err(Error::ChartDomain { .. })));
        let anti = VortexConfig::new(1.0, vec![c(1.0, 0.0), c(-1.0, 0.0)], vec![1.0, 1.0], GreensChoice::Antipodal);
        assert!(matches!(anti, Err(Error::AntipodalCollision { .. })));
        let one = VortexConfig::new(0.0, vec![c(0.0, 0.0)], vec![1.0], GreensChoice::Background).unwrap();
        assert!(hamiltonian(&one).is_err());
        assert!(integrate(&generic(), 1.0, 0.0).is_err());
    }

    /// Velocities from the closed-form gradient against differences of `H`.
    #[test]
    fn velocities_match_differentiated_energy() {
        for greens in GreensChoice::ALL {
            let mut cfg = generic();
            cfg.greens = greens;
            let v = velocities(&cfg).unwrap();
            for j in 0..cfg.len() {
                let at = |dz: Complex64| {
                    let mut q = cfg.clone();
                    q.positions[j] += dz;
                    hamiltonian(&q).unwrap()
                };
                let hx = diff::first(|t| at(c(t, 0.0)), 0.0, 1e-3, 3).value;
                let hy = diff::first(|t| at(c(0.0, t)), 0.0, 1e-3, 3).value;
                let dzbar = 0.5 * c(hx, hy);
                let z = cfg.positions[j];
                let sig = 1.0 + cfg.lambda * z.norm_sqr();
                let expect = c(0.0, sig * sig / cfg.vorticities[j]) * dzbar;
                assert!((v[j] - expect).norm() < 1e-7 * (1.0 + expect.norm()), "{greens:?}");
            }
        }
    }

    #[test]
    fn jacobian_matches_differences() {
        for greens in GreensChoice::ALL {
            let mut cfg = generic();
            cfg.greens = greens;
            let omega = 0.21;
            let jac = velocity_jacobian(&cfg, omega).unwrap();
            let n = cfg.len();
            for m in 0..n {
                for (axis, dz) in [(0, c(1.0, 0.0)), (1, c(0.0, 1.0))] {
                    for j in 0..n {
                        let comp = |t: f64, re: bool| {
                            let mut q = cfg.clone();
                            q.positions[m] += t * dz;
                            let f = velocities(&q).unwrap()[j] - c(0.0, omega) * q.positions[j];
                            if re {
                                f.re
                            } else {
                                f.im
                            }
                        };
                        let dre = diff::first(|t| comp(t, true), 0.0, 1e-3, 3).value;
                        let dim = diff::first(|t| comp(t, false), 0.0, 1e-3, 3).value;
                        assert!((jac[(2 * j, 2 * m + axis)] - dre).abs() < 1e-8, "{greens:?}");
                        assert!((jac[(2 * j + 1, 2 * m + axis)] - dim).abs() < 1e-8, "{greens:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn background_regular_far_out_on_sphere() {
        // Velocities stay bounded as a vortex is pushed towards the pole at infinity.
        let mut last = 0.0;
        for r in [1e2, 1e4, 1e6] {
            let cfg = VortexConfig::new(0.8, vec![c(0.3, 0.0), c(r, 0.0)], vec![1.0, 1.0], GreensChoice::Background)
                .unwrap();
            let v = velocities(&cfg).unwrap();
            let s = 1.0 + 0.8 * r * r;
            // Speed measured in the metric |dz|/σ.
            let speed = v[1].norm() / s;
            assert!(speed.is_finite() && speed < 1.0);
            last = speed;
        }
        assert!(last > 0.0);
    }

    #[test]
    fn conservation_over_many_steps() {
        let traj = integrate(&generic(), 10.0, 1e-3).unwrap();
        assert!(traj.completed());
        assert_eq!(traj.times.len(), 10_001);
        let drift = traj.max_relative_drift();
        for d in drift {
            assert!(d < 1e-8, "{drift:?}");
        }
    }

    #[test]
    fn collision_abort_returns_partial_trajectory() {
        // Opposite vortices on the plane translate; put a third vortex in the way.
        let cfg = VortexConfig::new(
            0.0,
            vec![c(-0.05, 0.0), c(0.05, 0.0), c(0.0, 0.3)],
            vec![1.0, -1.0, 1e-3],
            GreensChoice::PoleAtInfinity,
        )
        .unwrap();
        let traj = integrate(&cfg, 100.0, 1e-2).unwrap();
        assert!(matches!(traj.termination, Termination::CollisionApproach { .. } | Termination::Completed));
        assert_eq!(traj.times.len(), traj.states.len());
    }

    #[test]
    fn spectrum_of_stable_and_unstable_rings() {
        let s5 = linearized_spectrum(&ring(5, 1.0, 0.0, GreensChoice::Background)).unwrap();
        assert!(s5.warnings.is_empty());
        assert!(s5.max_abs_real_part() < 1e-6, "{:?}", s5.eigenvalues);
        let s8 = linearized_spectrum(&ring(8, 1.0, 0.0, GreensChoice::Background)).unwrap();
        assert!(s8.max_real_part() > 1e-3);
    }

    #[test]
    fn non_equilibrium_warns() {
        let s = linearized_spectrum(&generic()).unwrap();
        assert_eq!(s.warnings.len(), 1);
    }

    proptest! {
        #[test]
        fn rotation_equivariance(th in 0.0..6.28f64, l in -0.5..1.0f64) {
            let mut cfg = generic();
            cfg.lambda = l;
            let rot = Complex64::from_polar(1.0, th);
            let v = velocities(&cfg).unwrap();
            let mut r = cfg.clone();
            for z in &mut r.positions { *z *= rot; }
            let vr = velocities(&r).unwrap();
            for (a, b) in v.iter().zip(&vr) {
                prop_assert!((a * rot - b).norm() < 1e-12);
            }
            let h0 = hamiltonian(&cfg).unwrap();
            prop_assert!((hamiltonian(&r).unwrap() - h0).abs() < 1e-12 * (1.0 + h0.abs()));
        }
    }
}
