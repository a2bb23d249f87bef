//! Stability of regular rings as a function of `x = λr₀²`, and the values of
//! `x` where individual modes degenerate.
//!
//! Everything here depends only on `n` and `x`; eigenvalues are normalised to
//! `κ = r₀ = 1` where a magnitude is needed.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tolerance on `ε_r` for calling a mode degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Stable,
    LinearlyUnstable,
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityVerdict {
    pub classification: Classification,
    pub failing_modes: Vec<usize>,
    pub degenerate_modes: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BifurcationPoint {
    pub n: usize,
    pub ell: usize,
    pub x: f64,
    /// Reciprocal root `1/x` on the sphere, present when `0 < x ≤ 1`.
    pub partner: Option<f64>,
}

/// `⌊n²/4⌋/(2(n−1))`, the threshold of the stability criterion.
pub fn threshold(n: usize) -> f64 {
    ((n * n / 4) as f64) / (2.0 * (n as f64 - 1.0))
}

/// `(1+x²)/(1+x)²`.
fn ratio(x: f64) -> f64 {
    (1.0 + x * x) / ((1.0 + x) * (1.0 + x))
}

/// Root in `(−1, 1]` of `(1+b²)/(1+b)² = K`, written to avoid cancellation
/// near `K = 1`. Requires `K ≥ 1/2`.
fn critical_root(k: f64) -> f64 {
    (1.0 - k) / (k + (2.0 * k - 1.0).max(0.0).sqrt())
}

/// Whether the `n`-ring with `λr₀² = x` is (Lyapunov) stable by the
/// linear criterion.
pub fn is_stable(n: usize, x: f64) -> bool {
    ratio(x) > threshold(n)
}

/// Critical value `b_n` of `λr₀²` below which the ring is stable.
pub fn b_n(n: usize) -> Result<f64> {
    if n < 4 {
        return Err(Error::Range(format!("b_n is defined for n >= 4, got {n}")));
    }
    Ok(critical_root(threshold(n)))
}

/// Value of `x` in `(−1, 1]` where `ε_r^(ℓ)` vanishes.
pub fn bifurcation_value(n: usize, ell: usize) -> Result<BifurcationPoint> {
    if ell < 2 || ell > n / 2 {
        return Err(Error::Range(format!("mode {ell} outside 2..={} for n = {n}", n / 2)));
    }
    let k = (ell * (n - ell)) as f64 / (2.0 * (n as f64 - 1.0));
    if 2.0 * k - 1.0 < 0.0 {
        return Err(Error::NoRoot { n, ell });
    }
    let x = critical_root(k);
    let partner = (x > 0.0).then(|| 1.0 / x);
    Ok(BifurcationPoint { n, ell, x, partner })
}

/// `ε_r^(ℓ)` at `κ = r₀ = 1`.
pub fn normalized_eps_r(n: usize, ell: usize, x: f64) -> f64 {
    let (nf, l) = (n as f64, ell as f64);
    (2.0 * (nf - 1.0) * ratio(x) - l * (nf - l)) / (4.0 * PI)
}

/// `dε_r^(ℓ)/dx` at `κ = r₀ = 1` (independent of `ℓ`).
pub fn eps_r_slope(n: usize, x: f64) -> f64 {
    (n as f64 - 1.0) * (x - 1.0) / (PI * (1.0 + x).powi(3))
}

fn check_x(x: f64) -> Result<()> {
    if !(x > -1.0) || !x.is_finite() {
        return Err(Error::RadiusDomain { r: x, lambda: f64::NAN });
    }
    if (x - 1.0).abs() < 1e-12 {
        return Err(Error::Equator);
    }
    Ok(())
}

/// Mode-by-mode sign analysis of the slice Hessian.
pub fn classify(n: usize, x: f64, tol: f64) -> Result<StabilityVerdict> {
    if n < 2 {
        return Err(Error::InvalidRing(format!("n must be at least 2, got {n}")));
    }
    check_x(x)?;
    let mut failing = Vec::new();
    let mut degenerate = Vec::new();
    // ε₁′ and every ε_θ^(ℓ), ℓ ≥ 1, are strictly positive off the equator.
    for ell in 2..=n / 2 {
        let e = normalized_eps_r(n, ell, x);
        if e < -tol {
            failing.push(ell);
        } else if e.abs() <= tol {
            degenerate.push(ell);
        }
    }
    let classification = if !failing.is_empty() {
        Classification::LinearlyUnstable
    } else if !degenerate.is_empty() {
        Classification::Degenerate
    } else {
        Classification::Stable
    };
    Ok(StabilityVerdict {
        classification,
        failing_modes: failing,
        degenerate_modes: degenerate,
    })
}

/// One segment of the stability diagram in the coordinate `log σ = log(1+x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RangeSegment {
    /// Lower end; `None` is `−∞`.
    pub from: Option<f64>,
    /// Upper end; `None` is `+∞`.
    pub to: Option<f64>,
    pub stable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityRange {
    pub n: usize,
    /// Breakpoints in `log σ`, ascending.
    pub breakpoints: Vec<f64>,
    pub segments: Vec<RangeSegment>,
}

/// Stable and unstable ranges of `log σ` for the `n`-ring.
pub fn stability_range(n: usize) -> Result<StabilityRange> {
    if n < 3 {
        return Err(Error::Range(format!("stability ranges need n >= 3, got {n}")));
    }
    let mut breakpoints = Vec::new();
    if n >= 4 {
        let b = b_n(n)?;
        breakpoints.push(b.ln_1p());
        if b > 0.0 {
            breakpoints.push((1.0 / b).ln_1p());
        }
    }
    let mut segments = Vec::new();
    let mut from = None;
    let mut stable = true;
    for &bp in &breakpoints {
        segments.push(RangeSegment {
            from,
            to: Some(bp),
            stable,
        });
        from = Some(bp);
        stable = !stable;
    }
    segments.push(RangeSegment { from, to: None, stable });
    Ok(StabilityRange {
        n,
        breakpoints,
        segments,
    })
}

/// Stability criterion for the PoleAtInfinity Hamiltonian:
/// `(1−x)/(1+x) > ⌊n²/4⌋/(2(n−1))`.
pub fn is_stable_alt(n: usize, x: f64) -> bool {
    (1.0 - x) / (1.0 + x) > threshold(n)
}

/// Upper end of the PoleAtInfinity stable interval `x < (1−K)/(1+K)`.
pub fn alt_critical_value(n: usize) -> f64 {
    let k = threshold(n);
    (1.0 - k) / (1.0 + k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingSpec;
    use crate::spectral::{mode_eigenvalues, mode_eigenvalues_alt};
    use proptest::prelude::*;

    #[test]
    fn square_and_hexagon_on_sphere() {
        // n = 4: K = 2/3 gives x² − 4x + 1 > 0, i.e. (x − 2)² > 3.
        let (lo, hi) = (2.0 - 3f64.sqrt(), 2.0 + 3f64.sqrt());
        for x in [-0.9, 0.0, 0.2, 0.26, 0.3, 3.7, 3.74, 10.0] {
            assert_eq!(is_stable(4, x), (x - 2.0) * (x - 2.0) > 3.0, "x={x}");
        }
        assert!(is_stable(4, lo - 1e-9) && !is_stable(4, lo + 1e-9));
        assert!(!is_stable(4, hi - 1e-9) && is_stable(4, hi + 1e-9));
        // n = 6: K = 9/10 gives x² − 18x + 1 > 0.
        let (lo, hi) = (9.0 - 80f64.sqrt(), 9.0 + 80f64.sqrt());
        assert!((b_n(6).unwrap() - lo).abs() < 1e-15);
        assert!(is_stable(6, lo - 1e-9) && !is_stable(6, lo + 1e-9));
        assert!(!is_stable(6, hi - 1e-9) && is_stable(6, hi + 1e-9));
    }

    #[test]
    fn stability_examples() {
        for x in [-0.99, -0.3, 0.0, 0.7, 0.999, 3.0] {
            assert!(is_stable(3, x));
        }
        assert!(is_stable(15, -0.8));
        assert!(!is_stable(15, -0.2));
    }

    #[test]
    fn b_n_table() {
        let table = [0.268, 0.172, 0.0557, 0.0, -0.0627, -0.101, -0.143, -0.172, -0.202, -0.225];
        for (i, want) in table.iter().enumerate() {
            assert!((b_n(i + 4).unwrap() - want).abs() <= 1e-3);
        }
        assert!((b_n(4).unwrap() - (2.0 - 3f64.sqrt())).abs() < 1e-15);
        assert_eq!(b_n(7).unwrap(), 0.0);
        assert!(b_n(3).is_err());
    }

    /// Bisection on the defining equation as an independent root finder.
    fn bisect(k: f64) -> f64 {
        let (mut lo, mut hi) = (-1.0 + 1e-12, 1.0);
        let f = |b: f64| ratio(b) - k;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(lo).signum() == f(mid).signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn closed_form_matches_bisection() {
        for n in 4..=60 {
            let b = b_n(n).unwrap();
            assert!((b - bisect(threshold(n))).abs() < 1e-12, "n={n}");
            assert!(b > -1.0 && b <= 1.0);
        }
    }

    #[test]
    fn bifurcation_tables() {
        let rows: [(usize, usize, f64); 11] = [
            (6, 3, 0.056),
            (6, 2, 0.127),
            (7, 3, 0.0),
            (7, 2, 0.101),
            (8, 4, -0.063),
            (8, 3, -0.033),
            (8, 2, 0.084),
            (9, 4, -0.101),
            (9, 3, -0.056),
            (9, 2, 0.072),
            (4, 2, 0.268),
        ];
        for (n, ell, want) in rows {
            let p = bifurcation_value(n, ell).unwrap();
            assert!((p.x - want).abs() <= 1e-3, "n={n} ell={ell}: {}", p.x);
            let s = RingSpec::from_x(n, 1.0, p.x).unwrap();
            assert!(mode_eigenvalues(&s, ell).unwrap().0.abs() < 1e-10);
            if let Some(q) = p.partner {
                let s = RingSpec::from_x(n, 1.0, q).unwrap();
                assert!(mode_eigenvalues(&s, ell).unwrap().0.abs() < 1e-10);
            }
        }
        assert!(bifurcation_value(6, 1).is_err());
        assert!(bifurcation_value(6, 4).is_err());
        // ℓ = 1 never appears, and every ℓ ≥ 2 has 2K − 1 ≥ 0.
        assert!(bifurcation_value(5, 2).is_ok());
    }

    #[test]
    fn classify_examples() {
        let v = classify(7, 0.0, DEGENERACY_TOL).unwrap();
        assert_eq!(v.classification, Classification::Degenerate);
        assert_eq!(v.degenerate_modes, vec![3]);
        assert_eq!(classify(5, 0.0, DEGENERACY_TOL).unwrap().classification, Classification::Stable);
        let v = classify(8, 0.0, DEGENERACY_TOL).unwrap();
        assert_eq!(v.classification, Classification::LinearlyUnstable);
        assert!(v.failing_modes.contains(&4));
        assert_eq!(classify(6, 1.0, DEGENERACY_TOL), Err(Error::Equator));
        let v = classify(6, 0.2, DEGENERACY_TOL).unwrap();
        assert_eq!(v.classification, Classification::LinearlyUnstable);
        assert!(v.failing_modes.contains(&3));
    }

    #[test]
    fn ranges() {
        let r = stability_range(7).unwrap();
        assert_eq!(r.breakpoints, vec![0.0]);
        let r = stability_range(4).unwrap();
        assert!((r.breakpoints[1] - (3.0 + 3f64.sqrt()).ln()).abs() < 1e-12);
        assert_eq!(r.segments.len(), 3);
        assert!(r.segments[0].stable && !r.segments[1].stable && r.segments[2].stable);
        let r = stability_range(3).unwrap();
        assert!(r.breakpoints.is_empty() && r.segments[0].stable);
        let r = stability_range(12).unwrap();
        assert!((r.breakpoints[0] + 0.226).abs() < 2e-3);
    }

    #[test]
    fn alt_criterion() {
        assert!(!is_stable_alt(7, 0.0));
        for n in 3..=30 {
            assert_eq!(is_stable_alt(n, 0.0), is_stable(n, 0.0));
        }
        for n in 4..=30 {
            let a = alt_critical_value(n);
            let b = b_n(n).unwrap();
            assert!(a <= b + 1e-15, "n={n}");
            assert_eq!(a.signum(), b.signum());
        }
        // The least alt eigenvalue changes sign exactly at the alt critical value.
        for n in 4..=12 {
            let a = alt_critical_value(n);
            for (x, sign) in [(a - 1e-6, 1.0), (a + 1e-6, -1.0)] {
                let s = RingSpec::from_x(n, 1.0, x).unwrap();
                assert_eq!(mode_eigenvalues_alt(&s, n / 2).unwrap().0.signum(), sign);
                assert_eq!(is_stable_alt(n, x), sign > 0.0);
            }
        }
    }

    #[test]
    fn crossing_slope() {
        assert!(eps_r_slope(7, 0.0) < 0.0);
        for n in 4..=20 {
            for ell in 2..=n / 2 {
                let p = bifurcation_value(n, ell).unwrap();
                let h = 1e-6;
                let fd = (normalized_eps_r(n, ell, p.x + h) - normalized_eps_r(n, ell, p.x - h)) / (2.0 * h);
                assert!((fd - eps_r_slope(n, p.x)).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn threshold_increasing() {
        for n in 3..200 {
            assert!(threshold(n + 1) > threshold(n));
        }
    }

    proptest! {
        #[test]
        fn is_stable_agrees_with_classify(n in 3usize..40, x in -0.99..3.0f64) {
            prop_assume!((x - 1.0).abs() > 1e-6);
            let v = classify(n, x, DEGENERACY_TOL).unwrap();
            prop_assume!(v.degenerate_modes.is_empty());
            prop_assert_eq!(is_stable(n, x), v.classification == Classification::Stable);
        }

        #[test]
        fn reciprocal_pairing(n in 4usize..30, ell_frac in 0.0..1.0f64) {
            let ell = 2 + ((n / 2 - 2) as f64 * ell_frac) as usize;
            let p = bifurcation_value(n, ell).unwrap();
            if p.x > 0.0 && p.x < 1.0 {
                prop_assert!(normalized_eps_r(n, ell, 1.0 / p.x).abs() < 1e-10);
            }
        }
    }
}
