//! Real roots of cubics with real coefficients.
//!
//! Closed-form seeds (trigonometric for three real roots, Cardano otherwise)
//! followed by Newton polish on the original coefficients. The polish matters:
//! the depressed-cubic shift can lose five or six digits when the steady-state
//! coefficients span many orders of magnitude.

/// All real roots of `c3 x^3 + c2 x^2 + c1 x + c0`, repeated according to
/// multiplicity and sorted ascending. A leading coefficient of exactly zero
/// reduces the degree.
pub fn cubic_real_roots(c3: f64, c2: f64, c1: f64, c0: f64) -> Vec<f64> {
    if c3 == 0.0 {
        return quadratic_real_roots(c2, c1, c0);
    }
    let b = c2 / c3;
    let c = c1 / c3;
    let d = c0 / c3;

    // depressed cubic t^3 + p t + q, x = t - b/3
    let shift = b / 3.0;
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;

    let disc = -4.0 * p * p * p - 27.0 * q * q;
    let disc_scale = 4.0 * (p * p * p).abs() + 27.0 * q * q;
    let eps = 1e-10;

    let mut roots: Vec<f64> = if disc_scale == 0.0 || disc.abs() <= eps * disc_scale {
        // degenerate discriminant: triple root, or one single + one double
        if p.abs() <= eps * (1.0 + b * b) && q.abs() <= eps * (1.0 + b.abs().powi(3)) {
            vec![-shift, -shift, -shift]
        } else {
            let single = 3.0 * q / p - shift;
            let double = -3.0 * q / (2.0 * p) - shift;
            vec![single, double, double]
        }
    } else if disc > 0.0 {
        // three distinct real roots (trigonometric form)
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (2.0 * p)) * (-3.0 / p).sqrt();
        let theta = arg.clamp(-1.0, 1.0).acos() / 3.0;
        (0..3)
            .map(|k| m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() - shift)
            .collect()
    } else {
        // one real root (Cardano, cancellation-safe branch)
        let w = (q * q / 4.0 + p * p * p / 27.0).sqrt();
        let u3 = if q > 0.0 { -q / 2.0 - w } else { -q / 2.0 + w };
        let u = u3.cbrt();
        let v = if u == 0.0 { 0.0 } else { -p / (3.0 * u) };
        vec![u + v - shift]
    };

    let max_coeff = c3.abs().max(c2.abs()).max(c1.abs()).max(c0.abs());
    for r in &mut roots {
        *r = polish(*r, c3, c2, c1, c0, max_coeff);
    }
    roots.sort_by(f64::total_cmp);
    roots
}

fn quadratic_real_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    if a == 0.0 {
        if b == 0.0 {
            return Vec::new(); // constant: no roots (or all of R; report none)
        }
        return vec![-c / b];
    }
    let disc = b * b - 4.0 * a * c;
    let scale = b * b + 4.0 * (a * c).abs();
    if disc.abs() <= 1e-14 * scale {
        let r = -b / (2.0 * a);
        return vec![r, r];
    }
    if disc < 0.0 {
        return Vec::new();
    }
    // Numerically stable pair via the sign-matched form
    let sq = disc.sqrt();
    let q = -0.5 * (b + b.signum() * sq);
    let mut roots = if q == 0.0 { vec![0.0, 0.0] } else { vec![q / a, c / q] };
    roots.sort_by(f64::total_cmp);
    roots
}

fn eval(x: f64, c3: f64, c2: f64, c1: f64, c0: f64) -> (f64, f64) {
    let p = ((c3 * x + c2) * x + c1) * x + c0;
    let dp = (3.0 * c3 * x + 2.0 * c2) * x + c1;
    (p, dp)
}

/// Newton iterations until |p(x)| <= 1e-12 * max|c_i| * (1 + |x|^3).
fn polish(seed: f64, c3: f64, c2: f64, c1: f64, c0: f64, max_coeff: f64) -> f64 {
    let mut x = seed;
    let mut best = x;
    let mut best_val = eval(x, c3, c2, c1, c0).0.abs();
    for _ in 0..40 {
        let (p, dp) = eval(x, c3, c2, c1, c0);
        if p.abs() <= 1e-12 * max_coeff * (1.0 + x.abs().powi(3)) {
            return x;
        }
        if dp == 0.0 || !dp.is_finite() {
            break;
        }
        x -= p / dp;
        let val = eval(x, c3, c2, c1, c0).0.abs();
        if val < best_val {
            best_val = val;
            best = x;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn simple_cubics() {
        // x^3 - 1
        let r = cubic_real_roots(1.0, 0.0, 0.0, -1.0);
        assert_eq!(r.len(), 1);
        assert_relative_eq!(r[0], 1.0, max_relative = 1e-12);

        // x^3 - x
        let r = cubic_real_roots(1.0, 0.0, -1.0, 0.0);
        assert_eq!(r.len(), 3);
        for (got, want) in r.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn double_root_reported_twice() {
        // (x - 2)^2 (x - 5) = x^3 - 9 x^2 + 24 x - 20
        let r = cubic_real_roots(1.0, -9.0, 24.0, -20.0);
        assert_eq!(r.len(), 3);
        assert_relative_eq!(r[0], 2.0, max_relative = 1e-6);
        assert_relative_eq!(r[1], 2.0, max_relative = 1e-6);
        assert_relative_eq!(r[2], 5.0, max_relative = 1e-10);
    }

    #[test]
    fn degree_reduction() {
        // 0 x^3 + x^2 - 3x + 2 = (x-1)(x-2)
        let r = cubic_real_roots(0.0, 1.0, -3.0, 2.0);
        assert_eq!(r.len(), 2);
        assert_relative_eq!(r[0], 1.0, max_relative = 1e-12);
        assert_relative_eq!(r[1], 2.0, max_relative = 1e-12);
        // linear
        let r = cubic_real_roots(0.0, 0.0, 2.0, -5.0);
        assert_eq!(r, vec![2.5]);
        // negative quadratic discriminant
        assert!(cubic_real_roots(0.0, 1.0, 0.0, 1.0).is_empty());
    }

    proptest! {
        // Construct cubics from known factors; every root must be recovered
        // to the polished residual bound.
        #[test]
        fn recovers_constructed_roots(
            r1 in -50.0f64..50.0,
            r2 in -50.0f64..50.0,
            r3 in -50.0f64..50.0,
            scale in 0.1f64..10.0,
        ) {
            // clustered roots are ill-conditioned by nature; the double-root
            // path is covered by its own test
            prop_assume!((r1 - r2).abs() > 0.1 && (r1 - r3).abs() > 0.1 && (r2 - r3).abs() > 0.1);
            let c3 = scale;
            let c2 = -scale * (r1 + r2 + r3);
            let c1 = scale * (r1 * r2 + r1 * r3 + r2 * r3);
            let c0 = -scale * r1 * r2 * r3;
            let roots = cubic_real_roots(c3, c2, c1, c0);
            prop_assert_eq!(roots.len(), 3);
            let max_coeff = c3.abs().max(c2.abs()).max(c1.abs()).max(c0.abs());
            for &x in &roots {
                let p = ((c3 * x + c2) * x + c1) * x + c0;
                prop_assert!(p.abs() <= 1e-11 * max_coeff * (1.0 + x.abs().powi(3)));
            }
            // each constructed root has a match
            let mut wanted = [r1, r2, r3];
            wanted.sort_by(f64::total_cmp);
            for (got, want) in roots.iter().zip(wanted) {
                prop_assert!((got - want).abs() <= 1e-5 * (1.0 + want.abs()),
                    "got {} want {}", got, want);
            }
        }
    }
}
