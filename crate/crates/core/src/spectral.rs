//! Hessian of the augmented Hamiltonian at a regular ring and its Fourier-mode
//! decomposition.
//!
//! Tangent vectors at the ring are stored as `2n` components: slots `0..n`
//! hold `δr_j`, slots `n..2n` hold `r₀δθ_j`, i.e. a unit entry in slot `n + j`
//! is the vector `(1/r₀)∂/∂θ_j`. Hessians are matrices in the raw polar
//! coordinates `(r_0, …, r_{n−1}, θ_0, …, θ_{n−1})`; [`to_polar`] converts.
//!
//! The complex Fourier vectors are `ζ^(ℓ) = α^(ℓ) + iβ^(ℓ) = Σ_j e^{−2πiℓj/n}(·)_j`,
//! so `α` carries `cos(2πℓj/n)` and `β` carries `−sin(2πℓj/n)`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::GreensChoice;
use crate::ring::{make_ring, omega0, RingSpec};
use crate::vortex::{gradient_zbar, VortexConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeKind {
    R,
    Theta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModePart {
    Alpha,
    Beta,
}

/// Real or imaginary part of a Fourier tangent vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierVector {
    pub ell: usize,
    pub kind: ModeKind,
    pub part: ModePart,
    pub components: Vec<f64>,
}

fn check_ell(n: usize, ell: usize) -> Result<()> {
    if ell > n / 2 {
        return Err(Error::Range(format!("mode {ell} outside 0..={} for n = {n}", n / 2)));
    }
    Ok(())
}

/// `α` or `β` part of `ζ_r^(ℓ)` or `ζ_θ^(ℓ)` for an `n`-ring.
pub fn fourier_vector(n: usize, ell: usize, kind: ModeKind, part: ModePart) -> Result<FourierVector> {
    check_ell(n, ell)?;
    let mut components = vec![0.0; 2 * n];
    let offset = match kind {
        ModeKind::R => 0,
        ModeKind::Theta => n,
    };
    for j in 0..n {
        let phi = 2.0 * PI * (ell * j) as f64 / n as f64;
        components[offset + j] = match part {
            ModePart::Alpha => phi.cos(),
            ModePart::Beta => -phi.sin(),
        };
    }
    if part == ModePart::Beta && (ell == 0 || 2 * ell == n) {
        components.iter_mut().for_each(|c| *c = 0.0);
    }
    Ok(FourierVector {
        ell,
        kind,
        part,
        components,
    })
}

/// All `2n` nonzero Fourier vectors, ordered by `ℓ`, then `r` before `θ`, then
/// `α` before `β`.
pub fn fourier_basis(n: usize) -> Vec<FourierVector> {
    let mut out = Vec::with_capacity(2 * n);
    for ell in 0..=n / 2 {
        for kind in [ModeKind::R, ModeKind::Theta] {
            for part in [ModePart::Alpha, ModePart::Beta] {
                if part == ModePart::Beta && (ell == 0 || 2 * ell == n) {
                    continue;
                }
                out.push(fourier_vector(n, ell, kind, part).expect("ell in range"));
            }
        }
    }
    out
}

/// Complex mode coefficients `ζ_r^(ℓ)(v)`, `ζ_θ^(ℓ)(v)` of a tangent vector
/// for `ℓ = 0..n`.
pub fn mode_coefficients(v: &[f64]) -> (Vec<Complex64>, Vec<Complex64>) {
    let n = v.len() / 2;
    let coeff = |offset: usize, ell: usize| -> Complex64 {
        (0..n)
            .map(|j| v[offset + j] * Complex64::from_polar(1.0, -2.0 * PI * (ell * j) as f64 / n as f64))
            .sum()
    };
    ((0..n).map(|l| coeff(0, l)).collect(), (0..n).map(|l| coeff(n, l)).collect())
}

/// Converts slot components to raw polar displacements `(δr_j, δθ_j)`.
pub fn to_polar(v: &[f64], r0: f64) -> DVector<f64> {
    let n = v.len() / 2;
    DVector::from_iterator(2 * n, v.iter().enumerate().map(|(i, c)| if i < n { *c } else { c / r0 }))
}

/// `d²Ĥ(v, w)` for slot-component vectors.
pub fn bilinear_form(h: &DMatrix<f64>, v: &[f64], w: &[f64], r0: f64) -> f64 {
    let (a, b) = (to_polar(v, r0), to_polar(w, r0));
    a.dot(&(h * b))
}

pub fn quadratic_form(h: &DMatrix<f64>, v: &[f64], r0: f64) -> f64 {
    bilinear_form(h, v, v, r0)
}

/// `(n²−1)/6 − ℓ(n−ℓ)`, the value of `Σ_{j=1}^{n−1} cos(2πℓj/n)/(1−cos(2πj/n))`.
pub fn trig_identity(n: usize, ell: usize) -> Result<f64> {
    if n == 0 || ell > n {
        return Err(Error::Range(format!("need 0 <= ell <= n, got ell={ell}, n={n}")));
    }
    let (n, l) = (n as f64, ell as f64);
    Ok((n * n - 1.0) / 6.0 - l * (n - l))
}

fn diagonal_r(s: &RingSpec, greens: GreensChoice) -> Result<f64> {
    let n = s.n as f64;
    let (k2, r2, sig, sigt) = (s.kappa * s.kappa, s.r0 * s.r0, s.sigma(), s.sigma_tilde());
    match greens {
        GreensChoice::Background => {
            Ok((n - 1.0) * k2 / (24.0 * PI * r2 * sig * sig) * ((5.0 - n) * sig * sig + 6.0 * sigt * sigt))
        }
        GreensChoice::PoleAtInfinity => {
            Ok(-(n - 1.0) * k2 / (24.0 * PI * r2 * sig) * ((n - 11.0) + (n + 13.0) * s.x()))
        }
        GreensChoice::Antipodal => Err(Error::UnsupportedGreens(
            "closed-form Hessian is available for background and pole Green's functions".into(),
        )),
    }
}

/// Closed-form Hessian at the ring (Background Green's function, `ω = ω₀`).
pub fn hessian_closed_form(s: &RingSpec) -> Result<DMatrix<f64>> {
    hessian_closed_form_for(s, GreensChoice::Background)
}

/// Closed-form Hessian for the Background or PoleAtInfinity Hamiltonian.
pub fn hessian_closed_form_for(s: &RingSpec, greens: GreensChoice) -> Result<DMatrix<f64>> {
    s.validate()?;
    let n = s.n;
    let nf = n as f64;
    let k2 = s.kappa * s.kappa;
    let a = diagonal_r(s, greens)?;
    let mut h = DMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        for k in 0..n {
            if j == k {
                h[(j, j)] = a;
                h[(n + j, n + j)] = k2 * (nf * nf - 1.0) / (24.0 * PI);
            } else {
                let d = (j as isize - k as isize).rem_euclid(n as isize) as f64;
                let c = 1.0 - (2.0 * PI * d / nf).cos();
                h[(j, k)] = k2 / (4.0 * PI * s.r0 * s.r0 * c);
                h[(n + j, n + k)] = -k2 / (4.0 * PI * c);
            }
        }
    }
    Ok(h)
}

/// Gradient of `Ĥ` in polar coordinates `(r_j, θ_j)` at `r`, `theta`.
pub(crate) fn polar_gradient(
    s: &RingSpec,
    greens: GreensChoice,
    omega: f64,
    r: &[f64],
    theta: &[f64],
) -> Result<Vec<f64>> {
    let n = r.len();
    let pos: Vec<Complex64> = r.iter().zip(theta).map(|(a, t)| Complex64::from_polar(*a, *t)).collect();
    let cfg = VortexConfig::new(s.lambda, pos.clone(), vec![s.kappa; n], greens)?;
    let g = gradient_zbar(&cfg, omega)?;
    let mut out = vec![0.0; 2 * n];
    for j in 0..n {
        let gc = g[j].conj();
        out[j] = 2.0 * (gc * Complex64::from_polar(1.0, theta[j])).re;
        out[n + j] = 2.0 * (gc * Complex64::new(0.0, 1.0) * pos[j]).re;
    }
    Ok(out)
}

/// Finite-difference Hessian in polar coordinates at the ring with `ω = ω₀`:
/// central differences of the closed-form gradient, relative step `1e−4`,
/// two Richardson levels, symmetrised.
pub fn hessian_numerical(s: &RingSpec, greens: GreensChoice) -> Result<DMatrix<f64>> {
    s.validate()?;
    let n = s.n;
    let omega = omega0(s, greens)?;
    make_ring(s, greens)?;
    let r: Vec<f64> = vec![s.r0; n];
    let theta: Vec<f64> = (0..n).map(|j| s.angle(j)).collect();
    let mut h = DMatrix::zeros(2 * n, 2 * n);
    for col in 0..2 * n {
        let step = if col < n { 1e-4 * s.r0 } else { 1e-4 };
        if step < 1e-300 {
            return Err(Error::StepSize("finite-difference step underflows".into()));
        }
        let grad_at = |t: f64| -> Result<Vec<f64>> {
            let (mut rr, mut tt) = (r.clone(), theta.clone());
            if col < n {
                rr[col] += t;
            } else {
                tt[col - n] += t;
            }
            polar_gradient(s, greens, omega, &rr, &tt)
        };
        // Levels h, h/2, h/4 share one set of gradient evaluations per step.
        let mut quotients = Vec::with_capacity(3);
        for level in 0..3 {
            let t = step / f64::powi(2.0, level);
            let (gp, gm) = (grad_at(t)?, grad_at(-t)?);
            quotients.push(gp.iter().zip(&gm).map(|(a, b)| (a - b) / (2.0 * t)).collect::<Vec<_>>());
        }
        for row in 0..2 * n {
            let (d0, d1, d2) = (quotients[0][row], quotients[1][row], quotients[2][row]);
            let r1 = (4.0 * d1 - d0) / 3.0;
            let r2 = (4.0 * d2 - d1) / 3.0;
            h[(row, col)] = (16.0 * r2 - r1) / 15.0;
        }
    }
    Ok((&h + h.transpose()) * 0.5)
}

/// `(ε_r^(ℓ), ε_θ^(ℓ))` for the Background Hamiltonian.
pub fn mode_eigenvalues(s: &RingSpec, ell: usize) -> Result<(f64, f64)> {
    s.validate()?;
    check_ell(s.n, ell)?;
    let (n, l, x) = (s.n as f64, ell as f64, s.x());
    let k2 = s.kappa * s.kappa;
    let sig = s.sigma();
    let er = k2 / (4.0 * PI * s.r0 * s.r0) * (2.0 * (n - 1.0) * (1.0 + x * x) / (sig * sig) - l * (n - l));
    Ok((er, k2 * l * (n - l) / (4.0 * PI)))
}

/// `(ε_r^(ℓ), ε_θ^(ℓ))` for the PoleAtInfinity Hamiltonian.
pub fn mode_eigenvalues_alt(s: &RingSpec, ell: usize) -> Result<(f64, f64)> {
    s.validate()?;
    check_ell(s.n, ell)?;
    let (n, l, x) = (s.n as f64, ell as f64, s.x());
    let k2 = s.kappa * s.kappa;
    let er = k2 / (4.0 * PI * s.r0 * s.r0) * (2.0 * (n - 1.0) * (1.0 - x) / (1.0 + x) - l * (n - l));
    Ok((er, k2 * l * (n - l) / (4.0 * PI)))
}

fn check_equator(s: &RingSpec) -> Result<()> {
    if (s.x() - 1.0).abs() < 1e-12 {
        return Err(Error::Equator);
    }
    Ok(())
}

/// Double eigenvalue `n(n−1)κ²σ̃²/(4πr₀²)` of the Hessian on `V₁′`.
///
/// Returns the value and whether it is relevant to stability (it is not on the
/// equator, where `V₁′` leaves the slice).
pub fn eps1prime(s: &RingSpec) -> Result<(f64, bool)> {
    s.validate()?;
    let n = s.n as f64;
    let st = s.sigma_tilde();
    let v = n * (n - 1.0) * s.kappa * s.kappa * st * st / (4.0 * PI * s.r0 * s.r0);
    Ok((v, (s.x() - 1.0).abs() >= 1e-12))
}

/// `dJ` on one Fourier vector, as `(d(J_x + iJ_y), dJ_u)`.
pub fn dj_on_vector(s: &RingSpec, v: &[f64]) -> (Complex64, f64) {
    let n = s.n;
    let (sig, st) = (s.sigma(), s.sigma_tilde());
    let mut dj = Complex64::new(0.0, 0.0);
    let mut du = 0.0;
    for j in 0..n {
        let e = Complex64::from_polar(1.0, s.angle(j));
        dj += s.kappa * (e * st / (sig * sig) * v[j] + Complex64::new(0.0, 1.0) * e / sig * v[n + j]);
        du += s.kappa * 2.0 * s.r0 / (sig * sig) * v[j];
    }
    (dj, du)
}

/// One row of [`dj_on_modes`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeMomentum {
    pub ell: usize,
    pub kind: ModeKind,
    pub part: ModePart,
    pub dj: Complex64,
    pub dj_u: f64,
}

/// `dJ` evaluated on every Fourier vector.
///
/// On the complex vectors this gives `dJ ζ_r^(0) = (0, 2nκr₀/σ²)`,
/// `dJ ζ_r^(1) = (nκσ̃/σ², 0)`, `dJ ζ_θ^(1) = (inκ/σ, 0)` and zero otherwise.
pub fn dj_on_modes(s: &RingSpec) -> Result<Vec<ModeMomentum>> {
    s.validate()?;
    Ok(fourier_basis(s.n)
        .into_iter()
        .map(|f| {
            let (dj, dj_u) = dj_on_vector(s, &f.components);
            ModeMomentum {
                ell: f.ell,
                kind: f.kind,
                part: f.part,
                dj,
                dj_u,
            }
        })
        .collect())
}

/// A labelled basis vector of the symplectic slice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceVector {
    pub label: String,
    pub ell: usize,
    pub components: Vec<f64>,
}

/// The two `V₁′` basis vectors `σα_r¹ − σ̃β_θ¹` and `σβ_r¹ + σ̃α_θ¹`.
pub fn v1prime_basis(s: &RingSpec) -> Result<[Vec<f64>; 2]> {
    s.validate()?;
    let n = s.n;
    let (sig, st) = (s.sigma(), s.sigma_tilde());
    let ar = fourier_vector(n, 1, ModeKind::R, ModePart::Alpha)?.components;
    let br = fourier_vector(n, 1, ModeKind::R, ModePart::Beta)?.components;
    let at = fourier_vector(n, 1, ModeKind::Theta, ModePart::Alpha)?.components;
    let bt = fourier_vector(n, 1, ModeKind::Theta, ModePart::Beta)?.components;
    let u = ar.iter().zip(&bt).map(|(a, b)| sig * a - st * b).collect();
    let v = br.iter().zip(&at).map(|(b, a)| sig * b + st * a).collect();
    Ok([u, v])
}

/// Basis of the symplectic slice: `V₁′` first, then `V_ℓ` for ascending `ℓ ≥ 2`.
pub fn slice_basis(s: &RingSpec) -> Result<Vec<SliceVector>> {
    s.validate()?;
    check_equator(s)?;
    let n = s.n;
    let [u, v] = v1prime_basis(s)?;
    let mut out = vec![
        SliceVector {
            label: "v1prime_u".into(),
            ell: 1,
            components: u,
        },
        SliceVector {
            label: "v1prime_v".into(),
            ell: 1,
            components: v,
        },
    ];
    for f in fourier_basis(n).into_iter().filter(|f| f.ell >= 2) {
        let kind = match f.kind {
            ModeKind::R => "r",
            ModeKind::Theta => "theta",
        };
        let part = match f.part {
            ModePart::Alpha => "alpha",
            ModePart::Beta => "beta",
        };
        out.push(SliceVector {
            label: format!("{part}_{kind}_{}", f.ell),
            ell: f.ell,
            components: f.components,
        });
    }
    Ok(out)
}

/// A Hessian eigenvalue that enters the stability criterion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelevantEigenvalue {
    pub name: String,
    pub ell: usize,
    pub value: f64,
}

/// Mode eigenvalues of the Hessian at a ring.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSpectrum {
    pub n: usize,
    pub kappa: f64,
    pub r0: f64,
    pub lambda: f64,
    pub greens: GreensChoice,
    pub eps_r: Vec<f64>,
    pub eps_theta: Vec<f64>,
    /// `None` when the slice contains all of `V_1` (PoleAtInfinity off the plane).
    pub eps1prime: Option<f64>,
    pub relevant: Vec<RelevantEigenvalue>,
}

impl ModeSpectrum {
    pub fn min_relevant(&self) -> f64 {
        self.relevant.iter().map(|e| e.value).fold(f64::INFINITY, f64::min)
    }
}

pub fn mode_spectrum(s: &RingSpec, greens: GreensChoice) -> Result<ModeSpectrum> {
    s.validate()?;
    check_equator(s)?;
    let eig = |ell| match greens {
        GreensChoice::Background => mode_eigenvalues(s, ell),
        GreensChoice::PoleAtInfinity => mode_eigenvalues_alt(s, ell),
        GreensChoice::Antipodal => Err(Error::UnsupportedGreens(
            "mode eigenvalues are available for background and pole Green's functions".into(),
        )),
    };
    let mut eps_r = Vec::new();
    let mut eps_theta = Vec::new();
    for ell in 0..=s.n / 2 {
        let (a, b) = eig(ell)?;
        eps_r.push(a);
        eps_theta.push(b);
    }
    // With only rotations as symmetries the whole of V_1 stays in the slice.
    let e1p = match greens {
        GreensChoice::PoleAtInfinity if s.lambda != 0.0 => None,
        _ => Some(eps1prime(s)?.0),
    };
    let mut relevant = Vec::new();
    match e1p {
        Some(v) => relevant.push(RelevantEigenvalue {
            name: "eps1prime".into(),
            ell: 1,
            value: v,
        }),
        None if s.n >= 2 => {
            relevant.push(RelevantEigenvalue {
                name: "eps_r".into(),
                ell: 1,
                value: eps_r[1],
            });
            relevant.push(RelevantEigenvalue {
                name: "eps_theta".into(),
                ell: 1,
                value: eps_theta[1],
            });
        }
        None => {}
    }
    for ell in 2..=s.n / 2 {
        relevant.push(RelevantEigenvalue {
            name: "eps_r".into(),
            ell,
            value: eps_r[ell],
        });
        relevant.push(RelevantEigenvalue {
            name: "eps_theta".into(),
            ell,
            value: eps_theta[ell],
        });
    }
    Ok(ModeSpectrum {
        n: s.n,
        kappa: s.kappa,
        r0: s.r0,
        lambda: s.lambda,
        greens,
        eps_r,
        eps_theta,
        eps1prime: e1p,
        relevant,
    })
}

/// Eigenvalues of a symmetric matrix in ascending order.
pub fn symmetric_eigenvalues(h: &DMatrix<f64>) -> Vec<f64> {
    let mut e: Vec<f64> = h.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}
