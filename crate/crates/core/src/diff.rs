//! Central differences with Richardson extrapolation.

/// Result of a Richardson-extrapolated difference quotient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrapolated {
    pub value: f64,
    /// Difference between the two most refined extrapolants.
    pub spread: f64,
}

/// Extrapolates a difference quotient whose error expands in even powers of
/// the step. `quotient(h)` is evaluated at `h, h/2, ..., h/2^levels`.
pub fn richardson(quotient: impl Fn(f64) -> f64, h: f64, levels: usize) -> Extrapolated {
    let mut table: Vec<Vec<f64>> = Vec::with_capacity(levels + 1);
    for i in 0..=levels {
        let step = h / f64::powi(2.0, i as i32);
        let mut row = vec![quotient(step)];
        for j in 1..=i {
            let factor = f64::powi(4.0, j as i32);
            let prev = &table[i - 1];
            let v = row[j - 1] + (row[j - 1] - prev[j - 1]) / (factor - 1.0);
            row.push(v);
        }
        table.push(row);
    }
    let last = &table[levels];
    let value = last[levels];
    let spread = if levels == 0 {
        0.0
    } else {
        (value - table[levels - 1][levels - 1]).abs()
    };
    Extrapolated { value, spread }
}

/// Componentwise [`richardson`] for vector-valued quotients. Returns the
/// extrapolated vector and the per-component spread.
pub fn richardson_vec<E>(
    mut quotient: impl FnMut(f64) -> std::result::Result<Vec<f64>, E>,
    h: f64,
    levels: usize,
) -> std::result::Result<(Vec<f64>, Vec<f64>), E> {
    let mut prev: Vec<Vec<f64>> = Vec::new();
    for i in 0..=levels {
        let step = h / f64::powi(2.0, i as i32);
        let mut row = vec![quotient(step)?];
        for j in 1..=i {
            let factor = f64::powi(4.0, j as i32);
            let next = row[j - 1]
                .iter()
                .zip(&prev[j - 1])
                .map(|(a, b)| a + (a - b) / (factor - 1.0))
                .collect();
            row.push(next);
        }
        if i == levels {
            let value = row.pop().expect("row is nonempty");
            let spread = if levels == 0 {
                vec![0.0; value.len()]
            } else {
                value.iter().zip(&prev[levels - 1]).map(|(a, b)| (a - b).abs()).collect()
            };
            return Ok((value, spread));
        }
        prev = row;
    }
    unreachable!("loop returns at the last level")
}

/// First derivative of `f` at `x`.
pub fn first(f: impl Fn(f64) -> f64, x: f64, h: f64, levels: usize) -> Extrapolated {
    richardson(|s| (f(x + s) - f(x - s)) / (2.0 * s), h, levels)
}

/// Second derivative of `f` at `x`.
pub fn second(f: impl Fn(f64) -> f64, x: f64, h: f64, levels: usize) -> Extrapolated {
    let f0 = f(x);
    richardson(|s| (f(x + s) - 2.0 * f0 + f(x - s)) / (s * s), h, levels)
}

/// Third derivative of `f` at `x` (five-point stencil).
pub fn third(f: impl Fn(f64) -> f64, x: f64, h: f64, levels: usize) -> Extrapolated {
    richardson(
        |s| (f(x + 2.0 * s) - 2.0 * f(x + s) + 2.0 * f(x - s) - f(x - 2.0 * s)) / (2.0 * s * s * s),
        h,
        levels,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivatives_of_exp() {
        let d1 = first(f64::exp, 0.3, 0.1, 3);
        let d2 = second(f64::exp, 0.3, 0.1, 3);
        let d3 = third(f64::exp, 0.3, 0.1, 3);
        let e = 0.3f64.exp();
        assert!((d1.value - e).abs() < 1e-12);
        assert!((d2.value - e).abs() < 1e-10);
        assert!((d3.value - e).abs() < 1e-8);
        assert!(d1.spread < 1e-9);
    }

    #[test]
    fn vector_extrapolation_matches_scalar() {
        let q = |h: f64| ((1.0 + h).ln() - (1.0 - h).ln()) / (2.0 * h);
        let s = richardson(q, 0.1, 3);
        let (v, sp) = richardson_vec(|h| Ok::<_, ()>(vec![q(h), 2.0 * q(h)]), 0.1, 3).unwrap();
        assert_eq!(v[0], s.value);
        assert_eq!(sp[0], s.spread);
        assert!((v[1] - 2.0).abs() < 1e-9);
    }

    #[test]
    fn polynomial_is_exact_after_extrapolation() {
        let p = |x: f64| x.powi(5) - 3.0 * x.powi(3) + x;
        let d3 = third(p, 0.5, 0.2, 2);
        // p''' = 60x^2 - 18
        assert!((d3.value - (60.0 * 0.25 - 18.0)).abs() < 1e-9);
    }
}
