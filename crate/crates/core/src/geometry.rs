//! The surfaces M_λ of constant curvature 4λ in the stereographic chart.
//!
//! A point of M_λ is represented by a chart coordinate `z`; the metric is
//! `|dz|²/σ²` with `σ = 1 + λ|z|²`. For λ > 0 the chart covers the sphere minus
//! the pole at infinity, for λ < 0 it is the disc `|z| < 1/√(−λ)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Curvature parameter of M_λ (Gaussian curvature is `4λ`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceParam {
    pub lambda: f64,
}

impl SurfaceParam {
    pub fn new(lambda: f64) -> Self {
        SurfaceParam { lambda }
    }

    pub fn curvature(&self) -> f64 {
        4.0 * self.lambda
    }

    /// Whether `z` lies in the chart domain `1 + λ|z|² > 0`.
    pub fn contains(&self, z: Complex64) -> bool {
        1.0 + self.lambda * z.norm_sqr() > 0.0
    }

    /// Chart radius of the domain boundary, `None` when the chart is the plane.
    pub fn domain_radius(&self) -> Option<f64> {
        (self.lambda < 0.0).then(|| 1.0 / (-self.lambda).sqrt())
    }
}

/// A point of the ambient space `ℝ³ ≅ ℂ × ℝ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmbientPoint {
    pub x: f64,
    pub y: f64,
    pub u: f64,
}

/// Which Green's function defines the interaction between vortices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GreensChoice {
    /// `log|z−w|²`: the planar kernel, singular only at the pole at infinity.
    PoleAtInfinity,
    /// `log(|z−w|²/|1+λzw̄|²)`: each vortex paired with an opposite one at its antipode.
    Antipodal,
    /// `log(|z−w|²/(σ(z)σ(w)))`: uniform background counter-vorticity.
    Background,
}

impl GreensChoice {
    pub const ALL: [GreensChoice; 3] = [
        GreensChoice::PoleAtInfinity,
        GreensChoice::Antipodal,
        GreensChoice::Background,
    ];
}

/// Conformal factor `σ(z) = 1 + λ|z|²`.
pub fn sigma(z: Complex64, p: SurfaceParam) -> Result<f64> {
    let s = 1.0 + p.lambda * z.norm_sqr();
    if s > 0.0 {
        Ok(s)
    } else {
        Err(Error::ChartDomain { re: z.re, im: z.im })
    }
}

/// Geodesic distance from the origin to the circle `|z| = r`.
pub fn geodesic_radius(r: f64, p: SurfaceParam) -> Result<f64> {
    let l = p.lambda;
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::RadiusDomain { r, lambda: l });
    }
    if l > 0.0 {
        let s = l.sqrt();
        Ok((r * s).atan() / s)
    } else if l < 0.0 {
        let s = (-l).sqrt();
        if r * s >= 1.0 {
            return Err(Error::RadiusDomain { r, lambda: l });
        }
        Ok((r * s).atanh() / s)
    } else {
        Ok(r)
    }
}

/// Inverse of [`geodesic_radius`]; on spheres restricted to the hemisphere
/// `a < π/(2√λ)`.
pub fn chart_radius(a: f64, p: SurfaceParam) -> Result<f64> {
    let l = p.lambda;
    if !(a >= 0.0) || !a.is_finite() {
        return Err(Error::RadiusDomain { r: a, lambda: l });
    }
    if l > 0.0 {
        let s = l.sqrt();
        if a * s >= std::f64::consts::FRAC_PI_2 {
            return Err(Error::RadiusDomain { r: a, lambda: l });
        }
        Ok((a * s).tan() / s)
    } else if l < 0.0 {
        let s = (-l).sqrt();
        Ok((a * s).tanh() / s)
    } else {
        Ok(a)
    }
}

/// Antipodal point `−1/(λz̄)` on the sphere.
pub fn antipode(z: Complex64, p: SurfaceParam) -> Result<Complex64> {
    if p.lambda <= 0.0 {
        return Err(Error::UnsupportedGeometry { lambda: p.lambda });
    }
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::Pole);
    }
    Ok(-1.0 / (p.lambda * z.conj()))
}

/// Inclusion of the chart into ambient space, `(z, |z|²)/σ`.
pub fn embed(z: Complex64, p: SurfaceParam) -> Result<AmbientPoint> {
    let s = sigma(z, p)?;
    Ok(AmbientPoint {
        x: z.re / s,
        y: z.im / s,
        u: z.norm_sqr() / s,
    })
}

/// `x² + y² + λu² − u`; zero exactly on M_λ.
pub fn casimir(q: AmbientPoint, p: SurfaceParam) -> f64 {
    q.x * q.x + q.y * q.y + p.lambda * q.u * q.u - q.u
}

/// Pull-backs of the three generators of the isometry algebra.
pub fn killing_fields(z: Complex64, p: SurfaceParam) -> [[f64; 2]; 3] {
    let (x, y, l) = (z.re, z.im, p.lambda);
    let d = x * x - y * y;
    [
        [l * x * y, 0.5 * (1.0 - l * d)],
        [-0.5 * (1.0 + l * d), -l * x * y],
        [-y, x],
    ]
}

/// Momentum map of a unit vortex, `(z/σ, |z|²/σ)`.
pub fn momentum_map(z: Complex64, p: SurfaceParam) -> Result<(Complex64, f64)> {
    let s = sigma(z, p)?;
    Ok((z / s, z.norm_sqr() / s))
}

const COINCIDENT: f64 = 1e-14;
const ANTIPODAL: f64 = 1e-12;

/// Green's function of the chosen kind between `z` and `w`.
pub fn greens(choice: GreensChoice, z: Complex64, w: Complex64, p: SurfaceParam) -> Result<f64> {
    let sz = sigma(z, p)?;
    let sw = sigma(w, p)?;
    let d2 = (z - w).norm_sqr();
    if d2.sqrt() < COINCIDENT {
        return Err(Error::Collision { i: 0, j: 1 });
    }
    match choice {
        GreensChoice::PoleAtInfinity => Ok(d2.ln()),
        GreensChoice::Background => Ok((d2 / (sz * sw)).ln()),
        GreensChoice::Antipodal => {
            check_antipodal(z, w, p)?;
            let q = (1.0 + p.lambda * z * w.conj()).norm_sqr();
            Ok((d2 / q).ln())
        }
    }
}

/// Errors if `z` is (numerically) the antipode of `w`.
pub(crate) fn check_antipodal(z: Complex64, w: Complex64, p: SurfaceParam) -> Result<()> {
    if p.lambda > 0.0 && w.norm_sqr() > 0.0 {
        let a = -1.0 / (p.lambda * w.conj());
        if (z - a).norm() < ANTIPODAL {
            return Err(Error::AntipodalCollision { i: 0, j: 1 });
        }
    }
    Ok(())
}

/// `∂G(z;w)/∂z̄`.
pub(crate) fn greens_dzbar(choice: GreensChoice, z: Complex64, w: Complex64, lambda: f64) -> Complex64 {
    let base = 1.0 / (z - w).conj();
    match choice {
        GreensChoice::PoleAtInfinity => base,
        GreensChoice::Background => base - lambda * z / (1.0 + lambda * z.norm_sqr()),
        GreensChoice::Antipodal => base - lambda * w / (1.0 + lambda * z.conj() * w),
    }
}

/// Wirtinger derivatives of `∂G(z;w)/∂z̄` with respect to `(z, z̄, w, w̄)`.
pub(crate) fn greens_dzbar_jet(
    choice: GreensChoice,
    z: Complex64,
    w: Complex64,
    lambda: f64,
) -> [Complex64; 4] {
    let zero = Complex64::new(0.0, 0.0);
    let inv = 1.0 / (z - w).conj();
    let i2 = inv * inv;
    let mut out = [zero, -i2, zero, i2];
    match choice {
        GreensChoice::PoleAtInfinity => {}
        GreensChoice::Background => {
            let s = 1.0 + lambda * z.norm_sqr();
            out[0] -= lambda / (s * s);
            out[1] += lambda * lambda * z * z / (s * s);
        }
        GreensChoice::Antipodal => {
            let d = 1.0 + lambda * z.conj() * w;
            out[1] += lambda * lambda * w * w / (d * d);
            out[2] -= lambda / (d * d);
        }
    }
    out
}

/// Default base step for [`laplace_beltrami`].
pub fn default_step(z: Complex64) -> f64 {
    1e-3 * z.norm().max(1.0)
}

/// Laplace–Beltrami operator `σ²(f_xx + f_yy)` by central differences with two
/// Richardson halvings.
pub fn laplace_beltrami(
    f: impl Fn(Complex64) -> f64,
    z: Complex64,
    p: SurfaceParam,
    h: f64,
) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::StepSize(format!("laplacian step must be positive, got {h}")));
    }
    let s = sigma(z, p)?;
    for dz in [
        Complex64::new(h, 0.0),
        Complex64::new(-h, 0.0),
        Complex64::new(0.0, h),
        Complex64::new(0.0, -h),
    ] {
        sigma(z + dz, p)?;
    }
    let f0 = f(z);
    let quotient = |k: f64| {
        let ex = Complex64::new(k, 0.0);
        let ey = Complex64::new(0.0, k);
        (f(z + ex) + f(z - ex) + f(z + ey) + f(z - ey) - 4.0 * f0) / (k * k)
    };
    let lap = crate::diff::richardson(quotient, h, 2).value;
    Ok(s * s * lap)
}
