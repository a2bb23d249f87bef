//! Dihedral symmetry of rings, probes of degenerate critical points at
//! bifurcation values, normal forms of dihedral bifurcations and the
//! symmetry-typed perturbations of a ring.
//!
//! Probe coordinates follow [`crate::spectral`]: tangent vectors have `2n`
//! slot components `(δr_j, r₀δθ_j)` and coefficients refer to the unnormalised
//! Fourier and `V₁′` basis vectors. Higher derivatives of `Ĥ` are obtained
//! from the closed-form gradient: `d^k Ĥ(a, …, a, b)` is the `(k−1)`-th
//! derivative of `∇Ĥ(ring + t·a)` contracted with `b`, and mixed directions
//! use polarization.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diff::richardson_vec;
use crate::error::{Error, Result, Warning};
use crate::geometry::GreensChoice;
use crate::ring::{make_ring, omega0, RingSpec};
use crate::spectral::{
    eps1prime, fourier_vector, hessian_closed_form, polar_gradient, quadratic_form, slice_basis, to_polar,
    v1prime_basis, ModeKind, ModePart,
};
use crate::stability::{bifurcation_value, eps_r_slope};
use crate::vortex::VortexConfig;

// ---------------------------------------------------------------------------
// Dihedral group

/// The element `c^k` or `c^k·m` of `D_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DihedralElement {
    pub rotation_power: usize,
    pub reflected: bool,
}

impl DihedralElement {
    pub const IDENTITY: Self = DihedralElement {
        rotation_power: 0,
        reflected: false,
    };
    /// The reflection `m`.
    pub const M: Self = DihedralElement {
        rotation_power: 0,
        reflected: true,
    };
    /// The reflection `m′ = c·m`.
    pub const M_PRIME: Self = DihedralElement {
        rotation_power: 1,
        reflected: true,
    };

    pub fn rotation(k: usize) -> Self {
        DihedralElement {
            rotation_power: k,
            reflected: false,
        }
    }

    /// `self ∘ other` in `D_n`, using `m c m = c⁻¹`.
    pub fn compose(self, other: Self, n: usize) -> Self {
        let b = other.rotation_power % n;
        let shifted = if self.reflected { n - b } else { b };
        DihedralElement {
            rotation_power: (self.rotation_power + shifted) % n,
            reflected: self.reflected ^ other.reflected,
        }
    }

    /// All `2n` elements, rotations first.
    pub fn all(n: usize) -> Vec<Self> {
        let rot = (0..n).map(Self::rotation);
        let refl = (0..n).map(|k| DihedralElement {
            rotation_power: k,
            reflected: true,
        });
        rot.chain(refl).collect()
    }
}

/// Acts on a configuration of `n` identical vortices:
/// `c·(z_0, …, z_{n−1}) = (e^{2πi/n} z_{n−1}, e^{2πi/n} z_0, …)` and
/// `m·z_j = z̄_{−j}` (indices mod `n`).
pub fn act(g: DihedralElement, c: &VortexConfig) -> Result<VortexConfig> {
    let n = c.len();
    if n == 0 {
        return Ok(c.clone());
    }
    if c.vorticities.iter().any(|k| *k != c.vorticities[0]) {
        return Err(Error::UnequalVorticity);
    }
    let z = &c.positions;
    let reflected: Vec<Complex64> = if g.reflected {
        (0..n).map(|j| z[(n - j) % n].conj()).collect()
    } else {
        z.clone()
    };
    let k = g.rotation_power % n;
    let rot = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
    let positions = (0..n).map(|j| rot * reflected[(j + n - k) % n]).collect();
    Ok(VortexConfig {
        positions,
        ..c.clone()
    })
}

/// The induced action on slot-component tangent vectors at the ring.
pub fn act_on_tangent(g: DihedralElement, v: &[f64]) -> Vec<f64> {
    let n = v.len() / 2;
    let mut w = v.to_vec();
    if g.reflected {
        for j in 0..n {
            w[j] = v[(n - j) % n];
            w[n + j] = -v[n + (n - j) % n];
        }
    }
    let k = g.rotation_power % n.max(1);
    (0..2 * n)
        .map(|i| {
            let (block, j) = (i / n, i % n);
            w[block * n + (j + n - k) % n]
        })
        .collect()
}

/// A complex mode coordinate on which `D_n` acts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeCoordinate {
    R(usize),
    Theta(usize),
    /// `ζ′ = σζ_r^(1) + iσ̃ζ_θ^(1)`.
    V1Prime,
}

/// Image of a mode coefficient: `c` multiplies by `e^{−2πiℓ/n}`, `m`
/// conjugates `ζ_r` and `ζ′` and sends `ζ_θ` to `−ζ̄_θ`.
pub fn act_on_mode(g: DihedralElement, n: usize, coord: ModeCoordinate, value: Complex64) -> Complex64 {
    let (ell, odd) = match coord {
        ModeCoordinate::R(l) => (l, false),
        ModeCoordinate::Theta(l) => (l, true),
        ModeCoordinate::V1Prime => (1, false),
    };
    let mut w = value;
    if g.reflected {
        w = if odd { -w.conj() } else { w.conj() };
    }
    let k = (g.rotation_power % n) as f64;
    w * Complex64::from_polar(1.0, -2.0 * PI * ell as f64 * k / n as f64)
}

/// Slot-component tangent vector of `c` relative to the ring `s`: radial
/// offsets and `r₀` times angular offsets in `(−π, π]`.
pub fn ring_coordinates(s: &RingSpec, c: &VortexConfig) -> Result<Vec<f64>> {
    if c.len() != s.n {
        return Err(Error::InvalidConfig(format!("expected {} vortices, got {}", s.n, c.len())));
    }
    let n = s.n;
    let mut v = vec![0.0; 2 * n];
    for (j, z) in c.positions.iter().enumerate() {
        v[j] = z.norm() - s.r0;
        let d = (z * Complex64::from_polar(1.0, -s.angle(j))).arg();
        v[n + j] = s.r0 * d;
    }
    Ok(v)
}

// ---------------------------------------------------------------------------
// Derivatives of the augmented Hamiltonian at a ring

/// Base step of the probe differences, in units of `r₀`.
const BASE_STEP: f64 = 1e-2;
/// Relative Richardson disagreement above which a derivative is flagged.
const SPREAD_TOL: f64 = 1e-4;
/// Relative tolerance on `D a⁴/|a|⁴` across directions of `V_c`.
const ISOTROPY_TOL: f64 = 1e-4;
/// `|t²| ≤ EVEN_T2_TOL·|t⁴|` is required of a degenerate even ring.
pub const EVEN_T2_TOL: f64 = 1e-7;

fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, c| m.max(c.abs()))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A ring together with its angular velocity, Background Hamiltonian.
struct ProbePoint {
    s: RingSpec,
    omega: f64,
    r: Vec<f64>,
    theta: Vec<f64>,
}

impl ProbePoint {
    fn new(s: &RingSpec) -> Result<Self> {
        make_ring(s, GreensChoice::Background)?;
        Ok(ProbePoint {
            s: *s,
            omega: omega0(s, GreensChoice::Background)?,
            r: vec![s.r0; s.n],
            theta: (0..s.n).map(|j| s.angle(j)).collect(),
        })
    }

    /// Polar gradient of `Ĥ` at `ring + t·dir` (`dir` in slot components).
    fn gradient(&self, dir: &[f64], t: f64) -> Result<Vec<f64>> {
        let n = self.s.n;
        let r: Vec<f64> = (0..n).map(|j| self.r[j] + t * dir[j]).collect();
        let th: Vec<f64> = (0..n).map(|j| self.theta[j] + t * dir[n + j] / self.s.r0).collect();
        polar_gradient(&self.s, GreensChoice::Background, self.omega, &r, &th)
    }

    /// `d^order/dt^order ∇Ĥ(ring + t·dir)` at `t = 0`, with its Richardson spread.
    fn gradient_derivative(&self, dir: &[f64], order: usize) -> Result<(Vec<f64>, Vec<f64>)> {
        let h = BASE_STEP * self.s.r0 / norm_inf(dir).max(1.0);
        if !(h > 1e-300) {
            return Err(Error::StepSize("probe step underflows".into()));
        }
        match order {
            1 => richardson_vec(
                |t| {
                    let (p, m) = (self.gradient(dir, t)?, self.gradient(dir, -t)?);
                    Ok(p.iter().zip(&m).map(|(a, b)| (a - b) / (2.0 * t)).collect())
                },
                h,
                2,
            ),
            2 => {
                let g0 = self.gradient(dir, 0.0)?;
                richardson_vec(
                    |t| {
                        let (p, m) = (self.gradient(dir, t)?, self.gradient(dir, -t)?);
                        Ok((0..g0.len()).map(|i| (p[i] - 2.0 * g0[i] + m[i]) / (t * t)).collect())
                    },
                    h,
                    3,
                )
            }
            3 => richardson_vec(
                |t| {
                    let p2 = self.gradient(dir, 2.0 * t)?;
                    let p1 = self.gradient(dir, t)?;
                    let m1 = self.gradient(dir, -t)?;
                    let m2 = self.gradient(dir, -2.0 * t)?;
                    Ok((0..p1.len())
                        .map(|i| (p2[i] - 2.0 * p1[i] + 2.0 * m1[i] - m2[i]) / (2.0 * t * t * t))
                        .collect())
                },
                h,
                2,
            ),
            _ => Err(Error::Range(format!("gradient derivative of order {order} not supported"))),
        }
    }

    /// `d^{m+1}Ĥ(head…, last)` where `last` is already in polar components.
    fn multilinear(&self, head: &[&[f64]], last: &[f64]) -> Result<(f64, f64)> {
        let m = head.len();
        let contract = |dir: &[f64]| -> Result<(f64, f64)> {
            let (g, sp) = self.gradient_derivative(dir, m)?;
            let spread = sp.iter().zip(last).map(|(a, b)| (a * b).abs()).sum();
            Ok((dot(&g, last), spread))
        };
        if head.iter().all(|d| *d == head[0]) {
            return contract(head[0]);
        }
        // G(v₁, …, v_m) = Σ_{ε₁=+1} (Πε) Q(Σ εᵢvᵢ) / (2^{m−1} m!).
        let norm = f64::powi(2.0, m as i32 - 1) * (1..=m).product::<usize>() as f64;
        let (mut value, mut spread) = (0.0, 0.0);
        for signs in 0..(1usize << (m - 1)) {
            let mut dir = head[0].to_vec();
            let mut sign = 1.0;
            for (i, d) in head.iter().enumerate().skip(1) {
                let e = if signs >> (i - 1) & 1 == 1 { -1.0 } else { 1.0 };
                sign *= e;
                dir.iter_mut().zip(d.iter()).for_each(|(a, b)| *a += e * b);
            }
            let (v, sp) = contract(&dir)?;
            value += sign * v / norm;
            spread += sp / norm;
        }
        Ok((value, spread))
    }
}

/// A numerically computed mixed derivative of `Ĥ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionalDerivative {
    pub value: f64,
    /// Disagreement of the two finest Richardson extrapolants.
    pub spread: f64,
    /// Magnitude `κ²n^k Π‖dirᵢ‖_∞/(4πr₀^k)` against which small values are judged.
    pub scale: f64,
    pub warnings: Vec<Warning>,
}

/// Typical size of a `k`-th derivative of `Ĥ` along `dirs` at the ring.
pub fn derivative_scale(s: &RingSpec, dirs: &[&[f64]]) -> f64 {
    let k = dirs.len() as i32;
    let prod: f64 = dirs.iter().map(|d| norm_inf(d)).product();
    s.kappa * s.kappa * (s.n as f64).powi(k) * prod / (4.0 * PI * s.r0.powi(k))
}

fn spread_warning(source: &str, value: f64, spread: f64, scale: f64) -> Option<Warning> {
    (spread > SPREAD_TOL * value.abs().max(1e-3 * scale)).then(|| {
        Warning::new(
            source,
            format!("extrapolation disagreement {spread:.3e} for value {value:.6e}"),
        )
    })
}

/// `d^order Ĥ(dir₁, …, dir_order)` at the ring `s` (Background Hamiltonian,
/// `ω = ω₀`), for `order` in `2..=4`.
pub fn directional_derivative(order: usize, s: &RingSpec, dirs: &[&[f64]]) -> Result<DirectionalDerivative> {
    if !(2..=4).contains(&order) {
        return Err(Error::Range(format!("derivative order must be 2, 3 or 4, got {order}")));
    }
    if dirs.len() != order {
        return Err(Error::InvalidConfig(format!("{order} directions needed, got {}", dirs.len())));
    }
    if let Some(d) = dirs.iter().find(|d| d.len() != 2 * s.n) {
        return Err(Error::InvalidConfig(format!(
            "direction has {} components, expected {}",
            d.len(),
            2 * s.n
        )));
    }
    let point = ProbePoint::new(s)?;
    let last = to_polar(dirs[order - 1], s.r0);
    let (value, spread) = point.multilinear(&dirs[..order - 1], last.as_slice())?;
    let scale = derivative_scale(s, dirs);
    let warnings = spread_warning("directional_derivative", value, spread, scale).into_iter().collect();
    Ok(DirectionalDerivative {
        value,
        spread,
        scale,
        warnings,
    })
}

// ---------------------------------------------------------------------------
// Degeneracy probes

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootChoice {
    /// The root in `(−1, 1]`.
    #[default]
    Principal,
    /// Its reciprocal, the same ring seen from the antipode on the sphere.
    Reciprocal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeOptions {
    pub r0: f64,
    pub root: RootChoice,
    /// Factors `(s, t)` applied to the `V_c` and `V₁′` basis vectors.
    pub basis_scale: (f64, f64),
}

impl Default for ProbeOptions {
    fn default() -> Self {
        ProbeOptions {
            r0: 1.0,
            root: RootChoice::Principal,
            basis_scale: (1.0, 1.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    StableDegenerate,
    Inconclusive,
}

/// Taylor data of `Ĥ` along `z_j = (r₀ + (−1)^j t)e^{2πij/n}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvenData {
    pub t2_coeff: f64,
    pub t4_coeff: f64,
    /// `T = (n−2)(n³+2n²−12n+24)σ⁴ + 24(n−1)x(16x³−36x²+40x−4)`, for which
    /// the `t⁴` coefficient is `nT/(768πr₀⁴σ⁴)`.
    pub t_value: f64,
    /// The bracket with `19x³−54x²+43x−4` in place of `16x³−36x²+40x−4`,
    /// as it appears in the literature.
    pub t_printed: f64,
    pub t2_closed_form: f64,
    pub t4_closed_form: f64,
}

/// Odd-ring probe coefficients on `V_c ⊕ V₁′` with coordinates `(x, y, u, v)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OddData {
    /// `∂²Ĥ/∂u²`.
    pub beta: f64,
    /// `∂³Ĥ/∂x²∂u`.
    pub gamma: f64,
    /// `∂⁴Ĥ/∂x⁴`.
    pub delta: f64,
    /// `βδ − γ²`.
    pub discriminant: f64,
    /// `βδ − 3γ²`; positive together with `δ` iff the quartic reduced to `V_c`
    /// is positive definite.
    pub stability_margin: f64,
    /// `(δ − 3γ²/β)/24`, the coefficient of `|a|⁴` after eliminating `u`.
    pub reduced_quartic: f64,
    /// `β` from finite differences of the gradient.
    pub beta_numeric: f64,
    /// Relative spread of `D a⁴/|a|⁴` over eight directions in `V_c`.
    pub anisotropy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegeneracyReport {
    pub n: usize,
    pub x_star: f64,
    pub r0: f64,
    pub root: RootChoice,
    pub parity: Parity,
    pub even_data: Option<EvenData>,
    pub odd_data: Option<OddData>,
    pub verdict: Verdict,
    pub warnings: Vec<Warning>,
}

fn probe_root(n: usize, ell: usize, root: RootChoice) -> Result<f64> {
    let bp = bifurcation_value(n, ell)?;
    match root {
        RootChoice::Principal => Ok(bp.x),
        RootChoice::Reciprocal => bp.partner.ok_or_else(|| {
            Error::DegenerateParameter(format!(
                "n = {n}: root {} has no reciprocal partner on the sphere",
                bp.x
            ))
        }),
    }
}

fn scaled(v: Vec<f64>, k: f64) -> Vec<f64> {
    v.into_iter().map(|c| c * k).collect()
}

/// Probe of the odd ring at the bifurcation of mode `(n−1)/2`.
pub fn odd_probe(n: usize, opts: &ProbeOptions) -> Result<DegeneracyReport> {
    if n < 5 || n % 2 == 0 {
        return Err(Error::Range(format!("odd probe needs odd n >= 5, got {n}")));
    }
    let ell = (n - 1) / 2;
    let x = probe_root(n, ell, opts.root)?;
    let s = RingSpec::from_x(n, opts.r0, x)?;
    let r0 = s.r0;
    let point = ProbePoint::new(&s)?;
    let (ks, kt) = opts.basis_scale;
    let ax = scaled(fourier_vector(n, ell, ModeKind::R, ModePart::Alpha)?.components, ks);
    let ay = scaled(fourier_vector(n, ell, ModeKind::R, ModePart::Beta)?.components, ks);
    let [bu, _] = v1prime_basis(&s)?;
    let bu = scaled(bu, kt);
    let bu_polar = to_polar(&bu, r0);
    let mut warnings = Vec::new();

    let beta = quadratic_form(&hessian_closed_form(&s)?, &bu, r0);
    let expected = eps1prime(&s)?.0 * kt * kt;
    if (beta - expected).abs() > 1e-9 * expected.abs() {
        warnings.push(Warning::new(
            "odd_probe",
            format!("Hessian on V1' gives {beta:.9e}, eps1' gives {expected:.9e}"),
        ));
    }
    let (g1, _) = point.gradient_derivative(&bu, 1)?;
    let beta_numeric = dot(&g1, bu_polar.as_slice());
    if (beta_numeric - beta).abs() > 1e-6 * beta.abs() {
        warnings.push(Warning::new(
            "odd_probe",
            format!("finite-difference beta {beta_numeric:.9e} differs from {beta:.9e}"),
        ));
    }

    let (g2, sp2) = point.gradient_derivative(&ax, 2)?;
    let gamma = dot(&g2, bu_polar.as_slice());
    let gamma_spread: f64 = sp2.iter().zip(bu_polar.iter()).map(|(a, b)| (a * b).abs()).sum();
    let scale3 = derivative_scale(&s, &[&ax, &ax, &bu]);
    warnings.extend(spread_warning("odd_probe gamma", gamma, gamma_spread, scale3));

    let scale4 = derivative_scale(&s, &[&ax, &ax, &ax, &ax]);
    let mut quartics = Vec::with_capacity(8);
    for k in 0..8 {
        let phi = PI * k as f64 / 8.0;
        let a: Vec<f64> = ax.iter().zip(&ay).map(|(p, q)| phi.cos() * p + phi.sin() * q).collect();
        let a_polar = to_polar(&a, r0);
        let (g3, sp3) = point.gradient_derivative(&a, 3)?;
        let value = dot(&g3, a_polar.as_slice());
        let spread: f64 = sp3.iter().zip(a_polar.iter()).map(|(p, q)| (p * q).abs()).sum();
        warnings.extend(spread_warning("odd_probe delta", value, spread, scale4));
        quartics.push(value);
    }
    let delta = quartics[0];
    let mean = quartics.iter().sum::<f64>() / quartics.len() as f64;
    let (lo, hi) = quartics.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), q| (l.min(*q), h.max(*q)));
    let anisotropy = (hi - lo) / mean.abs();
    if !(anisotropy <= ISOTROPY_TOL) {
        return Err(Error::Anisotropy { spread: anisotropy });
    }

    let discriminant = beta * delta - gamma * gamma;
    let stability_margin = beta * delta - 3.0 * gamma * gamma;
    let verdict = if delta > 0.0 && beta > 0.0 && stability_margin > 0.0 {
        Verdict::StableDegenerate
    } else {
        Verdict::Inconclusive
    };
    Ok(DegeneracyReport {
        n,
        x_star: x,
        r0,
        root: opts.root,
        parity: Parity::Odd,
        even_data: None,
        odd_data: Some(OddData {
            beta,
            gamma,
            delta,
            discriminant,
            stability_margin,
            reduced_quartic: (delta - 3.0 * gamma * gamma / beta) / 24.0,
            beta_numeric,
            anisotropy,
        }),
        verdict,
        warnings,
    })
}

/// `T` of the even-ring quartic coefficient, `t⁴ = nT/(768πr₀⁴σ⁴)`.
pub fn even_quartic_bracket(n: usize, x: f64) -> f64 {
    let nf = n as f64;
    let sig = 1.0 + x;
    (nf - 2.0) * (nf.powi(3) + 2.0 * nf * nf - 12.0 * nf + 24.0) * sig.powi(4)
        + 24.0 * (nf - 1.0) * x * (((16.0 * x - 36.0) * x + 40.0) * x - 4.0)
}

/// The bracket as printed in the literature (`19x³−54x²+43x−4`).
pub fn even_quartic_bracket_printed(n: usize, x: f64) -> f64 {
    let nf = n as f64;
    let sig = 1.0 + x;
    (nf - 2.0) * (nf.powi(3) + 2.0 * nf * nf - 12.0 * nf + 24.0) * sig.powi(4)
        + 24.0 * (nf - 1.0) * x * (((19.0 * x - 54.0) * x + 43.0) * x - 4.0)
}

/// Published closed form of `T₁ + T₂` (sum over both bifurcation roots of the
/// printed bracket) as a function of `m = n − 2`.
pub fn printed_t_sum(m: f64) -> f64 {
    let p = [384.0, 2560.0, 4832.0, 5024.0, 10616.0, 15888.0, 10778.0, 3266.0, 177.0, 4.0];
    let poly = p.iter().rev().fold(0.0, |acc, c| acc * m + c);
    128.0 * (m + 1.0) / (m * m - 4.0 * m - 4.0).powi(4) * poly
}

/// Published closed form of `T₁·T₂` as a function of `m = n − 2`.
pub fn printed_t_product(m: f64) -> f64 {
    let p = [
        576.0, 5376.0, 15136.0, 25824.0, 57332.0, 85512.0, 39960.0, 1044.0, 7409.0, 648.0, 16.0,
    ];
    let poly = p.iter().rev().fold(0.0, |acc, c| acc * m + c);
    4096.0 * (m + 1.0).powi(2) / (m * m - 4.0 * m - 4.0).powi(4) * poly
}

/// Probe of the even ring at the bifurcation of mode `n/2`: Taylor expansion
/// of `Ĥ` along the alternating-radius curve `z_j = (r₀ + (−1)^j t)e^{2πij/n}`.
pub fn even_probe(n: usize, opts: &ProbeOptions) -> Result<DegeneracyReport> {
    if n < 4 || n % 2 == 1 {
        return Err(Error::Range(format!("even probe needs even n >= 4, got {n}")));
    }
    let x = probe_root(n, n / 2, opts.root)?;
    let s = RingSpec::from_x(n, opts.r0, x)?;
    let r0 = s.r0;
    let point = ProbePoint::new(&s)?;
    let dir = fourier_vector(n, n / 2, ModeKind::R, ModePart::Alpha)?.components;
    let h = 0.01 * 2.0 * (PI / n as f64).sin() * r0;
    // dĤ/dt along the curve is odd: 2c₂t + 4c₄t³ + …; least squares in the
    // basis (t/h)^{1,3,5,7} over the nine samples t = kh, k = −4..4.
    let ks: Vec<i32> = (-4..=4).collect();
    let mut a = DMatrix::zeros(ks.len(), 4);
    let mut b = DVector::zeros(ks.len());
    for (row, &k) in ks.iter().enumerate() {
        for p in 0..4 {
            a[(row, p)] = (k as f64).powi(2 * p as i32 + 1);
        }
        b[row] = dot(&point.gradient(&dir, k as f64 * h)?, &dir);
    }
    let coeffs = a
        .svd(true, true)
        .solve(&b, 1e-14)
        .map_err(|e| Error::InvalidConfig(format!("least-squares fit failed: {e}")))?;
    let t2 = coeffs[0] / (2.0 * h);
    let t4 = coeffs[1] / (4.0 * h.powi(3));

    let (nf, sig, st) = (n as f64, s.sigma(), s.sigma_tilde());
    let t_value = even_quartic_bracket(n, x);
    let t4_closed_form = nf * t_value / (768.0 * PI * r0.powi(4) * sig.powi(4));
    let t2_closed_form =
        nf / (32.0 * PI * r0 * r0 * sig * sig) * (-(nf - 2.0).powi(2) * sig * sig + 4.0 * (nf - 1.0) * st * st);
    let mut warnings = Vec::new();
    if (t4 - t4_closed_form).abs() > 1e-6 * t4_closed_form.abs() {
        warnings.push(Warning::new(
            "even_probe",
            format!("fitted t^4 coefficient {t4:.9e} differs from closed form {t4_closed_form:.9e}"),
        ));
    }
    let t2_small = t2.abs() <= EVEN_T2_TOL * t4.abs();
    if !t2_small {
        warnings.push(Warning::new(
            "even_probe",
            format!("t^2 coefficient {t2:.3e} does not vanish against t^4 coefficient {t4:.3e}"),
        ));
    }
    let verdict = if t4 > 0.0 && t2_small {
        Verdict::StableDegenerate
    } else {
        Verdict::Inconclusive
    };
    Ok(DegeneracyReport {
        n,
        x_star: x,
        r0,
        root: opts.root,
        parity: Parity::Even,
        even_data: Some(EvenData {
            t2_coeff: t2,
            t4_coeff: t4,
            t_value,
            t_printed: even_quartic_bracket_printed(n, x),
            t2_closed_form,
            t4_closed_form,
        }),
        odd_data: None,
        verdict,
        warnings,
    })
}

/// Even or odd probe as appropriate, at the principal root with `r₀ = 1`.
pub fn probe(n: usize, opts: &ProbeOptions) -> Result<DegeneracyReport> {
    if n % 2 == 0 {
        even_probe(n, opts)
    } else {
        odd_probe(n, opts)
    }
}

/// Probes every ring `4 ≤ n ≤ n_max` at its principal root, in parallel.
pub fn conjecture_sweep(n_max: usize) -> Result<Vec<DegeneracyReport>> {
    if n_max < 4 {
        return Err(Error::Range(format!("sweep needs n_max >= 4, got {n_max}")));
    }
    let opts = ProbeOptions::default();
    (4..=n_max).into_par_iter().map(|n| probe(n, &opts)).collect()
}

/// `dε_r^(ℓ)/dx` at the bifurcation value of mode `ℓ` (`κ = r₀ = 1`).
pub fn eigenvalue_crossing_speed(n: usize, ell: usize) -> Result<f64> {
    let bp = bifurcation_value(n, ell)?;
    Ok(eps_r_slope(n, bp.x))
}

// ---------------------------------------------------------------------------
// Normal forms

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BifurcationKind {
    Transcritical,
    Pitchfork,
}

/// `f_u = −uN + αN² + βP` with `N = x²+y²`, `P = Re(x+iy)^k`; for `k = 2`
/// the family is `−ux² + αx⁴ + βy²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalFormSpec {
    pub k: usize,
    pub alpha: f64,
    pub beta: f64,
    pub u: f64,
}

impl NormalFormSpec {
    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::Range(format!("k must be at least 2, got {}", self.k)));
        }
        if ![self.alpha, self.beta, self.u].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidConfig("normal form coefficients must be finite".into()));
        }
        if self.beta == 0.0 {
            return Err(Error::DegenerateParameter("beta = 0".into()));
        }
        if self.k == 4 && self.alpha.abs() == self.beta.abs() {
            return Err(Error::DegenerateParameter("k = 4 with |alpha| = |beta|".into()));
        }
        if (self.k == 2 || self.k >= 5) && self.alpha == 0.0 {
            return Err(Error::DegenerateParameter(format!("alpha = 0 for k = {}", self.k)));
        }
        Ok(())
    }

    pub fn kind(&self) -> BifurcationKind {
        match self.k {
            3 => BifurcationKind::Transcritical,
            4 if self.alpha.abs() < self.beta.abs() => BifurcationKind::Transcritical,
            _ => BifurcationKind::Pitchfork,
        }
    }

    pub fn value(&self, x: f64, y: f64) -> f64 {
        if self.k == 2 {
            return -self.u * x * x + self.alpha * x.powi(4) + self.beta * y * y;
        }
        let n = x * x + y * y;
        let p = Complex64::new(x, y).powu(self.k as u32).re;
        -self.u * n + self.alpha * n * n + self.beta * p
    }

    /// `[[f_xx, f_xy], [f_xy, f_yy]]`.
    pub fn hessian(&self, x: f64, y: f64) -> [[f64; 2]; 2] {
        if self.k == 2 {
            return [[-2.0 * self.u + 12.0 * self.alpha * x * x, 0.0], [0.0, 2.0 * self.beta]];
        }
        let n = x * x + y * y;
        let k = self.k as f64;
        let w = Complex64::new(x, y);
        let q = k * (k - 1.0) * w.powu(self.k as u32 - 2);
        let base = -2.0 * self.u + 4.0 * self.alpha * n;
        [
            [base + 8.0 * self.alpha * x * x + self.beta * q.re, 8.0 * self.alpha * x * y - self.beta * q.im],
            [8.0 * self.alpha * x * y - self.beta * q.im, base + 8.0 * self.alpha * y * y - self.beta * q.re],
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriticalKind {
    Minimum,
    Maximum,
    Saddle,
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub x: f64,
    pub y: f64,
    pub value: f64,
    pub kind: CriticalKind,
    /// 0 for the origin, otherwise the index of the branch type.
    pub branch: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalFormField {
    pub spec: NormalFormSpec,
    pub kind: BifurcationKind,
    pub extent: f64,
    /// Grid coordinates, shared by both axes.
    pub coords: Vec<f64>,
    /// `values[i][j] = f(coords[j], coords[i])`.
    pub values: Vec<Vec<f64>>,
    pub critical_points: Vec<CriticalPoint>,
    /// Number of distinct nontrivial branches within the window.
    pub branch_types: usize,
}

fn classify_hessian(h: [[f64; 2]; 2]) -> CriticalKind {
    let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
    let tr = h[0][0] + h[1][1];
    let size = h[0][0].abs() + h[1][1].abs() + h[0][1].abs();
    if det.abs() <= 1e-12 * size * size {
        CriticalKind::Degenerate
    } else if det < 0.0 {
        CriticalKind::Saddle
    } else if tr > 0.0 {
        CriticalKind::Minimum
    } else {
        CriticalKind::Maximum
    }
}

/// Positive roots of `g` on `(0, hi]` by sign changes on a fine grid and bisection.
fn positive_roots(g: impl Fn(f64) -> f64, hi: f64) -> Vec<f64> {
    const SAMPLES: usize = 4096;
    let mut roots = Vec::new();
    let mut prev = (hi * 1e-9, g(hi * 1e-9));
    for i in 1..=SAMPLES {
        let x = hi * i as f64 / SAMPLES as f64;
        let gx = g(x);
        if gx == 0.0 {
            roots.push(x);
        } else if prev.1 != 0.0 && prev.1.signum() != gx.signum() {
            let (mut a, mut b, ga) = (prev.0, x, prev.1);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if (g(m) > 0.0) == (ga > 0.0) {
                    a = m;
                } else {
                    b = m;
                }
            }
            roots.push(0.5 * (a + b));
        }
        prev = (x, gx);
    }
    roots
}

/// Samples `f_u` on a `resolution × resolution` grid over `[−extent, extent]²`
/// and locates its critical points in the disc of radius `extent`.
pub fn normal_form_contours(spec: &NormalFormSpec, resolution: usize, extent: f64) -> Result<NormalFormField> {
    spec.validate()?;
    if resolution < 2 {
        return Err(Error::Range(format!("grid resolution must be at least 2, got {resolution}")));
    }
    if !(extent > 0.0) || !extent.is_finite() {
        return Err(Error::Range("grid extent must be positive".into()));
    }
    let coords: Vec<f64> = (0..resolution)
        .map(|i| -extent + 2.0 * extent * i as f64 / (resolution - 1) as f64)
        .collect();
    let values = coords
        .iter()
        .map(|y| coords.iter().map(|x| spec.value(*x, *y)).collect())
        .collect();

    let point = |x: f64, y: f64, branch: usize| CriticalPoint {
        x,
        y,
        value: spec.value(x, y),
        kind: classify_hessian(spec.hessian(x, y)),
        branch,
    };
    let mut critical_points = vec![point(0.0, 0.0, 0)];
    let mut branch_types = 0;
    if spec.k == 2 {
        let x2 = spec.u / (2.0 * spec.alpha);
        if x2 > 0.0 && x2.sqrt() <= extent {
            branch_types = 1;
            critical_points.push(point(x2.sqrt(), 0.0, 1));
            critical_points.push(point(-x2.sqrt(), 0.0, 1));
        }
    } else {
        let k = spec.k as f64;
        for c in [1.0, -1.0] {
            // On the rays cos(kφ) = c, the radial equation divided by ρ.
            let radial = |r: f64| -2.0 * spec.u + 4.0 * spec.alpha * r * r + k * spec.beta * c * r.powi(spec.k as i32 - 2);
            for rho in positive_roots(radial, extent) {
                branch_types += 1;
                for m in 0..2 * spec.k {
                    if (m % 2 == 0) == (c > 0.0) {
                        let phi = PI * m as f64 / k;
                        critical_points.push(point(rho * phi.cos(), rho * phi.sin(), branch_types));
                    }
                }
            }
        }
    }
    Ok(NormalFormField {
        spec: *spec,
        kind: spec.kind(),
        extent,
        coords,
        values,
        critical_points,
        branch_types,
    })
}

/// Coefficients of the reduced function on the kernel `⟨α_r^(ℓ), β_r^(ℓ)⟩` at
/// the bifurcation value of mode `ℓ` (`r₀ = κ = 1`), obtained by eliminating
/// the rest of the slice: `f(a) = f₃(a) + f₄(a) + …` with
/// `f₄(a) = D a⁴/24 − cᵀB⁻¹c/8`, `cᵢ = C(a, a, eᵢ)`. In the coordinate
/// `w = x + iy` of `a = xα_r + yβ_r`, `f₄ = α|w|⁴ + β Re w⁴` when `k = 4`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeQuartic {
    pub n: usize,
    pub ell: usize,
    /// `n/gcd(n, ℓ)`, the order of the dihedral group acting on `V_ℓ`.
    pub k: usize,
    pub x_star: f64,
    /// `f₃` along `α_r^(ℓ)`; vanishes unless `k = 3`.
    pub cubic: f64,
    pub alpha: f64,
    pub beta: f64,
    /// `f₄(π/8) − α`, zero when the quartic has the `k = 4` form.
    pub residual: f64,
    pub kind: BifurcationKind,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Reduced cubic and quartic coefficients for mode `ℓ` with `2 ≤ ℓ < n/2`.
pub fn mode_quartic(n: usize, ell: usize) -> Result<ModeQuartic> {
    if ell < 2 || 2 * ell >= n {
        return Err(Error::Range(format!("mode {ell} must satisfy 2 <= ell < n/2 for n = {n}")));
    }
    let x = bifurcation_value(n, ell)?.x;
    let s = RingSpec::from_x(n, 1.0, x)?;
    let point = ProbePoint::new(&s)?;
    let hess = hessian_closed_form(&s)?;
    let kernel = [format!("alpha_r_{ell}"), format!("beta_r_{ell}")];
    let complement: Vec<DVector<f64>> = slice_basis(&s)?
        .into_iter()
        .filter(|v| !kernel.contains(&v.label))
        .map(|v| to_polar(&v.components, s.r0))
        .collect();
    let m = complement.len();
    let gram = DMatrix::from_fn(m, m, |i, j| complement[i].dot(&(&hess * &complement[j])));
    let lu = gram.lu();
    let ax = fourier_vector(n, ell, ModeKind::R, ModePart::Alpha)?.components;
    let ay = fourier_vector(n, ell, ModeKind::R, ModePart::Beta)?.components;
    let along = |phi: f64| -> Result<(f64, f64)> {
        let a: Vec<f64> = ax.iter().zip(&ay).map(|(p, q)| phi.cos() * p + phi.sin() * q).collect();
        let a_polar = to_polar(&a, s.r0);
        let (g2, _) = point.gradient_derivative(&a, 2)?;
        let (g3, _) = point.gradient_derivative(&a, 3)?;
        let c = DVector::from_iterator(m, complement.iter().map(|e| dot(&g2, e.as_slice())));
        let y = lu
            .solve(&c)
            .ok_or_else(|| Error::DegenerateParameter("slice Hessian is singular off the kernel".into()))?;
        let f3 = dot(&g2, a_polar.as_slice()) / 6.0;
        let f4 = dot(&g3, a_polar.as_slice()) / 24.0 - c.dot(&y) / 8.0;
        Ok((f3, f4))
    };
    let (cubic, f0) = along(0.0)?;
    let (_, f45) = along(PI / 4.0)?;
    let (_, f22) = along(PI / 8.0)?;
    let (alpha, beta) = ((f0 + f45) / 2.0, (f0 - f45) / 2.0);
    let k = n / gcd(n, ell);
    let kind = match k {
        3 => BifurcationKind::Transcritical,
        4 if alpha.abs() < beta.abs() => BifurcationKind::Transcritical,
        _ => BifurcationKind::Pitchfork,
    };
    Ok(ModeQuartic {
        n,
        ell,
        k,
        x_star: x,
        cubic,
        alpha,
        beta,
        residual: f22 - alpha,
        kind,
    })
}

// ---------------------------------------------------------------------------
// Perturbation gallery

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GalleryBranch {
    M,
    MPrime,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GalleryConfig {
    pub n: usize,
    pub ell: usize,
    pub eps: f64,
    pub branch: GalleryBranch,
    /// `φ` in `r_j = r₀ + ε cos(2πℓj/n + φ)`.
    pub phase: f64,
    /// `n/gcd(n, ℓ)`.
    pub k: usize,
    pub config: VortexConfig,
    /// The isotropy subgroup `D_{gcd(n,ℓ)}` with the branch reflection.
    pub subgroup: Vec<DihedralElement>,
    /// Largest displacement of any vortex under any subgroup element.
    pub max_symmetry_defect: f64,
}

/// Mode-`ℓ` perturbation of the ring `s` (taken with zero phase) fixed by the
/// reflection `m` or `m′`.
pub fn perturbation_gallery(s: &RingSpec, ell: usize, eps: f64, branch: GalleryBranch) -> Result<GalleryConfig> {
    s.validate()?;
    let n = s.n;
    if ell < 2 || ell > n / 2 {
        return Err(Error::Range(format!("mode {ell} outside 2..={} for n = {n}", n / 2)));
    }
    if !eps.is_finite() || eps.abs() >= s.r0 {
        return Err(Error::Range(format!("eps must satisfy |eps| < r0, got {eps}")));
    }
    let d = gcd(n, ell);
    let k = n / d;
    let phase = match branch {
        GalleryBranch::M => 0.0,
        GalleryBranch::MPrime => {
            if k % 2 == 1 {
                return Err(Error::BranchUnavailable(format!(
                    "k = {k} is odd: m and m' are conjugate for n = {n}, ell = {ell}"
                )));
            }
            if 2 * ell == n {
                return Err(Error::BranchUnavailable(format!(
                    "ell = n/2 = {ell}: the m' perturbation vanishes identically"
                )));
            }
            -PI * ell as f64 / n as f64
        }
    };
    let positions = (0..n)
        .map(|j| {
            let arg = 2.0 * PI * (ell * j) as f64 / n as f64 + phase;
            Complex64::from_polar(s.r0 + eps * arg.cos(), 2.0 * PI * j as f64 / n as f64)
        })
        .collect();
    let config = VortexConfig::new(s.lambda, positions, vec![s.kappa; n], GreensChoice::Background)?;
    let reflection_power = match branch {
        GalleryBranch::M => 0,
        GalleryBranch::MPrime => 1,
    };
    let mut subgroup: Vec<DihedralElement> = (0..d).map(|p| DihedralElement::rotation(p * k)).collect();
    subgroup.extend((0..d).map(|p| DihedralElement {
        rotation_power: (p * k + reflection_power) % n,
        reflected: true,
    }));
    let mut max_symmetry_defect: f64 = 0.0;
    for g in &subgroup {
        let image = act(*g, &config)?;
        for (a, b) in image.positions.iter().zip(&config.positions) {
            max_symmetry_defect = max_symmetry_defect.max((a - b).norm());
        }
    }
    Ok(GalleryConfig {
        n,
        ell,
        eps,
        branch,
        phase,
        k,
        config,
        subgroup,
        max_symmetry_defect,
    })
}
