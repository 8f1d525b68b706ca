//! Real roots of low-degree polynomials.
//!
//! Coefficients are passed highest degree first. Quartics go through the
//! resolvent cubic (Ferrari) and every root is polished with Newton steps on
//! the original polynomial.

/// Evaluates `Σ coeffs[i] x^{n−i}` and its derivative (Horner).
pub fn eval_with_derivative(coeffs: &[f64], x: f64) -> (f64, f64) {
    let mut p = 0.0;
    let mut dp = 0.0;
    for &c in coeffs {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

pub fn eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().fold(0.0, |acc, &c| acc * x + c)
}

/// Real roots of `a x² + b x + c`, ascending. Degrades to the linear case.
pub fn solve_quadratic(a: f64, b: f64, c: f64) -> Vec<f64> {
    if a == 0.0 {
        if b == 0.0 {
            return Vec::new();
        }
        return vec![-c / b];
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        // tolerate round-off on a double root
        if disc > -1e-14 * (b * b).max((4.0 * a * c).abs()) {
            return vec![-b / (2.0 * a)];
        }
        return Vec::new();
    }
    let sq = disc.sqrt();
    // Stable form: q = −(b + sign(b)√disc)/2, roots q/a and c/q.
    let q = if b == 0.0 {
        -0.5 * sq
    } else {
        -0.5 * (b + b.signum() * sq)
    };
    let mut roots = if q == 0.0 {
        vec![0.0, 0.0]
    } else {
        vec![q / a, c / q]
    };
    roots.sort_by(f64::total_cmp);
    roots
}

/// Real roots of `a x³ + b x² + c x + d`, ascending.
pub fn solve_cubic(a: f64, b: f64, c: f64, d: f64) -> Vec<f64> {
    if a == 0.0 {
        return solve_quadratic(b, c, d);
    }
    let (b, c, d) = (b / a, c / a, d / a);
    // depressed cubic t³ + p t + q with x = t − b/3
    let shift = b / 3.0;
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
    let mut roots = if p == 0.0 && q == 0.0 {
        vec![0.0]
    } else if disc > 0.0 {
        let sq = disc.sqrt();
        let u = (-q / 2.0 + sq).cbrt();
        let v = (-q / 2.0 - sq).cbrt();
        vec![u + v]
    } else {
        // three real roots (trigonometric form)
        let r = (-p / 3.0).sqrt();
        let arg = if r == 0.0 {
            0.0
        } else {
            (-q / (2.0 * r * r * r)).clamp(-1.0, 1.0)
        };
        let phi = arg.acos();
        (0..3)
            .map(|k| 2.0 * r * ((phi + 2.0 * std::f64::consts::PI * k as f64) / 3.0).cos())
            .collect()
    };
    for t in roots.iter_mut() {
        *t -= shift;
    }
    let coeffs = [1.0, b, c, d];
    let mut roots: Vec<f64> = roots.into_iter().map(|x| polish(&coeffs, x)).collect();
    roots.sort_by(f64::total_cmp);
    roots
}

/// Real roots of `a4 x⁴ + a3 x³ + a2 x² + a1 x + a0`, ascending, duplicates
/// merged.
pub fn solve_quartic(a4: f64, a3: f64, a2: f64, a1: f64, a0: f64) -> Vec<f64> {
    if a4 == 0.0 {
        return solve_cubic(a3, a2, a1, a0);
    }
    let coeffs = [a4, a3, a2, a1, a0];
    let (b, c, d, e) = (a3 / a4, a2 / a4, a1 / a4, a0 / a4);
    if e == 0.0 {
        // x (x³ + b x² + c x + d)
        let mut roots = solve_cubic(1.0, b, c, d);
        roots.push(0.0);
        return finish(&coeffs, roots);
    }
    // depressed quartic y⁴ + p y² + q y + r, x = y − b/4
    let shift = b / 4.0;
    let b2 = b * b;
    let p = c - 3.0 * b2 / 8.0;
    let q = d - b * c / 2.0 + b2 * b / 8.0;
    let r = e - b * d / 4.0 + b2 * c / 16.0 - 3.0 * b2 * b2 / 256.0;

    let mut ys = Vec::new();
    if q.abs() <= 1e-14 * (1.0 + p.abs() + r.abs()) {
        // biquadratic
        for z in solve_quadratic(1.0, p, r) {
            if z >= 0.0 {
                let s = z.sqrt();
                ys.push(s);
                ys.push(-s);
            } else if z > -1e-12 {
                ys.push(0.0);
            }
        }
    } else {
        // resolvent cubic: m³ + p m² + (p²/4 − r) m − q²/8 = 0, pick m > 0
        let ms = solve_cubic(1.0, p, p * p / 4.0 - r, -q * q / 8.0);
        let m = ms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if m > 0.0 {
            let s = (2.0 * m).sqrt();
            let t = q / (2.0 * s);
            // y² ± s y + (p/2 + m ∓ t) = 0
            ys.extend(solve_quadratic(1.0, s, p / 2.0 + m - t));
            ys.extend(solve_quadratic(1.0, -s, p / 2.0 + m + t));
        }
    }
    let roots = ys.into_iter().map(|y| y - shift).collect();
    finish(&coeffs, roots)
}

fn finish(coeffs: &[f64], roots: Vec<f64>) -> Vec<f64> {
    let mut roots: Vec<f64> = roots
        .into_iter()
        .filter(|x| x.is_finite())
        .map(|x| polish(coeffs, x))
        .collect();
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|x, y| (*x - *y).abs() <= 1e-10 * (1.0 + y.abs()));
    roots
}

/// A few Newton steps; keeps the original point if a step makes things worse.
pub fn polish(coeffs: &[f64], mut x: f64) -> f64 {
    for _ in 0..8 {
        let (p, dp) = eval_with_derivative(coeffs, x);
        if p == 0.0 || dp == 0.0 {
            break;
        }
        let next = x - p / dp;
        if !next.is_finite() || eval(coeffs, next).abs() >= p.abs() {
            break;
        }
        x = next;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn assert_roots(got: &[f64], want: &[f64], tol: f64) {
        assert_eq!(got.len(), want.len(), "got {got:?}, want {want:?}");
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() <= tol * (1.0 + w.abs()), "got {got:?}, want {want:?}");
        }
    }

    #[test]
    fn quadratic_cases() {
        assert_roots(&solve_quadratic(1.0, -3.0, 2.0), &[1.0, 2.0], 1e-15);
        assert_roots(&solve_quadratic(1.0, 0.0, 1.0), &[], 0.0);
        assert_roots(&solve_quadratic(0.0, 2.0, -4.0), &[2.0], 1e-15);
        // small root without cancellation
        let r = solve_quadratic(1.0, -1e8, 1.0);
        assert!((r[0] - 1e-8).abs() < 1e-22);
    }

    #[test]
    fn cubic_cases() {
        assert_roots(&solve_cubic(1.0, -6.0, 11.0, -6.0), &[1.0, 2.0, 3.0], 1e-12);
        assert_roots(&solve_cubic(1.0, 0.0, 0.0, -8.0), &[2.0], 1e-14);
    }

    #[test]
    fn quartic_symmetric_example() {
        // λ⁴ + 6λ³ + 12λ² + 8λ = λ(λ + 2)³
        let roots = solve_quartic(1.0, 6.0, 12.0, 8.0, 0.0);
        assert!(roots.iter().all(|&x| x <= 1e-9));
        assert!(roots.iter().any(|&x| x.abs() < 1e-12));
        assert!(roots.iter().any(|&x| (x + 2.0).abs() < 1e-4));
    }

    #[test]
    fn quartic_four_real() {
        // (x−1)(x−2)(x+3)(x−0.5)
        let roots = solve_quartic(1.0, -0.5, -7.0, 9.5, -3.0);
        assert_roots(&roots, &[-3.0, 0.5, 1.0, 2.0], 1e-10);
    }

    #[test]
    fn quartic_no_real() {
        assert!(solve_quartic(1.0, 0.0, 2.0, 0.0, 1.0).is_empty());
    }

    proptest! {
        #[test]
        fn quartic_recovers_distinct_roots(
            r in prop::collection::vec(-5.0f64..5.0, 4),
            scale in 0.1f64..10.0,
        ) {
            let mut r = r.clone();
            r.sort_by(f64::total_cmp);
            prop_assume!(r.windows(2).all(|w| w[1] - w[0] > 0.05));
            // expand scale·Π(x − rᵢ)
            let mut c = vec![1.0];
            for &ri in &r {
                let mut next = vec![0.0; c.len() + 1];
                for (k, &ck) in c.iter().enumerate() {
                    next[k] += ck;
                    next[k + 1] -= ri * ck;
                }
                c = next;
            }
            let c: Vec<f64> = c.iter().map(|x| x * scale).collect();
            let got = solve_quartic(c[0], c[1], c[2], c[3], c[4]);
            prop_assert_eq!(got.len(), 4);
            for (g, w) in got.iter().zip(&r) {
                prop_assert!((g - w).abs() < 1e-7, "got {:?} want {:?}", got, r);
            }
        }
    }
}
