//! Closed-form quartic root extraction in the Ferrari style: depress the
//! quartic, split it through a resolvent cubic into two quadratics, then
//! apply one Newton step to recover the digits the radical formulas lose in
//! double precision.

use crate::error::{Error, Result};

/// Largest real root of the monic quartic
/// `x^4 + c3 x^3 + c2 x^2 + c1 x + c0`.
///
/// After the Newton polish the residual stays below about
/// `1e-9 * max(1, |coefficients|)` for roots of moderate size; callers with
/// blowing-up coefficient families should rescale first (see
/// [`crate::bounds`] for the shape-parameter solve, which does exactly that
/// near its singular limit).
pub fn largest_real_root(c3: f64, c2: f64, c1: f64, c0: f64) -> Result<f64> {
    for (name, v) in [("c3", c3), ("c2", c2), ("c1", c1), ("c0", c0)] {
        if !v.is_finite() {
            return Err(Error::InvalidParameter {
                name,
                value: v,
                requirement: "quartic coefficients must be finite",
            });
        }
    }

    // depress: x = z - c3/4 gives z^4 + p z^2 + q z + r
    let shift = c3 / 4.0;
    let c3_2 = c3 * c3;
    let p = c2 - 3.0 * c3_2 / 8.0;
    let q = c1 - c3 * c2 / 2.0 + c3_2 * c3 / 8.0;
    let r = c0 - c3 * c1 / 4.0 + c3_2 * c2 / 16.0 - 3.0 * c3_2 * c3_2 / 256.0;

    let mut roots: Vec<f64> = Vec::with_capacity(4);
    if q == 0.0 {
        // biquadratic: z^2 solves w^2 + p w + r = 0
        let disc = p * p - 4.0 * r;
        if disc >= 0.0 {
            let sq = disc.sqrt();
            for w in [(-p + sq) / 2.0, (-p - sq) / 2.0] {
                if w >= 0.0 {
                    roots.push(w.sqrt());
                    roots.push(-w.sqrt());
                }
            }
        }
    } else {
        // Resolvent cubic 8 m^3 + 8 p m^2 + (2 p^2 - 8 r) m - q^2 = 0. Its
        // value at m = 0 is -q^2 < 0, so the largest real root is positive
        // and sqrt(2m) opens the square.
        let (rb, rc, rd) = (p, (p * p - 4.0 * r) / 4.0, -q * q / 8.0);
        let m = polish_cubic(largest_real_root_cubic(rb, rc, rd), rb, rc, rd).max(f64::MIN_POSITIVE);
        let s = (2.0 * m).sqrt();
        let half_q_s = q / (2.0 * s);
        // (z^2 + p/2 + m)^2 = (s z - q/(2s))^2 splits into two quadratics;
        // the smaller root of each may lose digits, but the Newton polish
        // below restores them.
        for (b, c) in [(-s, p / 2.0 + m + half_q_s), (s, p / 2.0 + m - half_q_s)] {
            let disc = b * b - 4.0 * c;
            if disc >= 0.0 {
                let sq = disc.sqrt();
                roots.push((-b + sq) / 2.0);
                roots.push((-b - sq) / 2.0);
            }
        }
    }

    let scale = 1f64.max(c3.abs()).max(c2.abs()).max(c1.abs()).max(c0.abs());
    let best = roots
        .into_iter()
        .map(|z| polish_quartic(z - shift, c3, c2, c1, c0))
        .filter(|x| x.is_finite())
        .fold(None, |acc: Option<f64>, x| match acc {
            Some(a) if a >= x => Some(a),
            _ => Some(x),
        });
    // reject candidates whose residual says the branch selection went wrong
    match best {
        Some(x) if quartic_value(x, c3, c2, c1, c0).abs() <= 1e-6 * scale.max(x.abs().powi(4)) => {
            Ok(x)
        }
        _ => Err(Error::NoRealRoot),
    }
}

fn quartic_value(x: f64, c3: f64, c2: f64, c1: f64, c0: f64) -> f64 {
    (((x + c3) * x + c2) * x + c1) * x + c0
}

fn polish_quartic(x: f64, c3: f64, c2: f64, c1: f64, c0: f64) -> f64 {
    let f = quartic_value(x, c3, c2, c1, c0);
    let df = ((4.0 * x + 3.0 * c3) * x + 2.0 * c2) * x + c1;
    if df != 0.0 && f.is_finite() {
        let next = x - f / df;
        if next.is_finite() {
            return next;
        }
    }
    x
}

fn polish_cubic(x: f64, a: f64, b: f64, c: f64) -> f64 {
    let f = ((x + a) * x + b) * x + c;
    let df = (3.0 * x + 2.0 * a) * x + b;
    if df != 0.0 && f.is_finite() {
        let next = x - f / df;
        if next.is_finite() {
            return next;
        }
    }
    x
}

/// Largest real root of the monic cubic `x^3 + a x^2 + b x + c` (a cubic
/// always has one). Trigonometric form for three real roots, Cardano
/// otherwise.
pub fn largest_real_root_cubic(a: f64, b: f64, c: f64) -> f64 {
    // depress: x = w - a/3 gives w^3 + p w + q
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let shift = a / 3.0;
    let half_q = q / 2.0;
    let disc = half_q * half_q + (p / 3.0).powi(3);
    let w = if disc > 0.0 {
        // one real root; add same-signed terms so the cube root argument
        // never cancels
        let s = disc.sqrt();
        let t = if half_q <= 0.0 { -half_q + s } else { -half_q - s };
        let u = t.cbrt();
        if u != 0.0 {
            u - p / (3.0 * u)
        } else {
            (-q).cbrt()
        }
    } else if p == 0.0 {
        (-q).cbrt()
    } else {
        // three real roots: w_k = 2 sqrt(-p/3) cos((phi - 2 pi k) / 3)
        let m = 2.0 * (-p / 3.0).sqrt();
        let phi = (3.0 * q / (p * m)).clamp(-1.0, 1.0).acos();
        (0..3)
            .map(|k| m * ((phi - 2.0 * std::f64::consts::PI * k as f64) / 3.0).cos())
            .fold(f64::NEG_INFINITY, f64::max)
    };
    w - shift
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn plain_quartics() {
        // x^4 - 1
        assert_abs_diff_eq!(largest_real_root(0.0, 0.0, 0.0, -1.0).unwrap(), 1.0, epsilon = 1e-12);
        // (x - 2)^2 (x + 1)(x + 3) = x^4 - 9 x^2 + 4 x + 12
        assert_abs_diff_eq!(largest_real_root(0.0, -9.0, 4.0, 12.0).unwrap(), 2.0, epsilon = 1e-9);
        // (x - 1)(x - 2)(x - 3)(x - 4)
        assert_abs_diff_eq!(
            largest_real_root(-10.0, 35.0, -50.0, 24.0).unwrap(),
            4.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn no_real_root() {
        assert!(largest_real_root(0.0, 0.0, 0.0, 1.0).is_err());
        assert!(largest_real_root(0.0, 2.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn rejects_non_finite() {
        assert!(largest_real_root(f64::NAN, 0.0, 0.0, -1.0).is_err());
        assert!(largest_real_root(0.0, f64::INFINITY, 0.0, -1.0).is_err());
    }

    #[test]
    fn cubic_roots() {
        // (x - 1)(x - 2)(x - 3) = x^3 - 6 x^2 + 11 x - 6
        assert_abs_diff_eq!(largest_real_root_cubic(-6.0, 11.0, -6.0), 3.0, epsilon = 1e-12);
        // x^3 - 1: single real root
        assert_abs_diff_eq!(largest_real_root_cubic(0.0, 0.0, -1.0), 1.0, epsilon = 1e-12);
        // x^3 + x: roots {0}
        assert_abs_diff_eq!(largest_real_root_cubic(0.0, 1.0, 0.0), 0.0, epsilon = 1e-12);
        // x^3 - 3x^2 + 3x - 1 = (x - 1)^3
        assert_abs_diff_eq!(largest_real_root_cubic(-3.0, 3.0, -1.0), 1.0, epsilon = 1e-7);
    }

    #[test]
    fn residuals_small_on_constructed_roots() {
        // assemble (x - r1)(x - r2)(x^2 + b x + c) with a complex pair
        let cases = [
            (1.5, -2.0, 0.8, 2.0),
            (3.25, 0.5, -1.0, 10.0),
            (-0.75, -4.0, 0.0, 1.0),
        ];
        for (r1, r2, b, c) in cases {
            let c3 = -(r1 + r2) + b;
            let c2 = r1 * r2 + b * (-(r1 + r2)) + c;
            let c1 = b * r1 * r2 - c * (r1 + r2);
            let c0 = c * r1 * r2;
            let x = largest_real_root(c3, c2, c1, c0).unwrap();
            assert_abs_diff_eq!(x, f64::max(r1, r2), epsilon = 1e-9);
            let scale = 1f64.max(c3.abs()).max(c2.abs()).max(c1.abs()).max(c0.abs());
            assert!(quartic_value(x, c3, c2, c1, c0).abs() <= 1e-9 * scale);
        }
    }
}
