//! Strict (Hurwitz) stability of small drift matrices without an eigensolver.
//!
//! The drift matrices in this project pair every operator row with its
//! conjugate, so their spectra are closed under complex conjugation and the
//! characteristic polynomial has real coefficients. Faddeev-LeVerrier supplies
//! that polynomial with nothing but matrix products and traces, and the number
//! of open-right-half-plane roots then comes from the argument principle: the
//! winding of p(i y) along a bracketing grid on the imaginary axis, refined by
//! bisection wherever the phase moves too fast to certify.
//!
//! A Routh table would be the textbook alternative, but its entries suffer
//! catastrophic cancellation once the coefficients span many decades (the
//! two-mode matrices mix rates over four orders of magnitude), and it returned
//! false verdicts exactly there. The winding count only ever evaluates the
//! polynomial, which is well-conditioned pointwise.

use num_complex::Complex64;

use crate::numkernel::ComplexMatrix;

/// Coefficients of det(lambda I - M), highest power first (monic).
pub fn characteristic_polynomial(m: &ComplexMatrix) -> Vec<Complex64> {
    assert!(m.is_square());
    let n = m.rows();
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    let mut aux = ComplexMatrix::identity(n);
    for k in 1..=n {
        aux = m.mul(&aux);
        let c = -aux.trace() / k as f64;
        for i in 0..n {
            aux[(i, i)] += c;
        }
        coeffs.push(c);
    }
    coeffs
}

/// Number of roots of a monic real polynomial (highest power first) in the
/// open right half-plane. `None` when a root sits on (or numerically
/// indistinguishable from) the imaginary axis, where the count is undefined.
pub fn unstable_root_count(coeffs: &[f64]) -> Option<usize> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return Some(0);
    }
    // Fujiwara bound on root magnitudes, tight under wide coefficient spread
    let mut bound: f64 = 0.0;
    for (k, c) in coeffs[1..].iter().enumerate() {
        let c = c.abs();
        if c > 0.0 {
            bound = bound.max(2.0 * c.powf(1.0 / (k + 1) as f64));
        }
    }
    // far enough out that each root's phase arc is close to its asymptote
    let y_max = 16.0 * bound.max(1.0);

    let eval = |y: f64| -> Complex64 {
        let s = Complex64::new(0.0, y);
        let mut acc = Complex64::new(coeffs[0], 0.0);
        for &c in &coeffs[1..] {
            acc = acc * s + c;
        }
        acc
    };

    // unwrapped phase change of p(iy) from -Y to +Y over an adaptive grid
    const INITIAL_SEGMENTS: usize = 1 << 12;
    const MAX_DEPTH: u32 = 50;
    let mut total_arg = 0.0f64;
    // stack of (y0, p(iy0), y1, p(iy1), depth), processed left to right
    let mut stack: Vec<(f64, Complex64, f64, Complex64, u32)> = Vec::new();
    let step = 2.0 * y_max / INITIAL_SEGMENTS as f64;
    let mut prev_y = -y_max;
    let mut prev_q = eval(prev_y);
    for i in 1..=INITIAL_SEGMENTS {
        let y = -y_max + step * i as f64;
        let q = eval(y);
        stack.push((prev_y, prev_q, y, q, 0));
        prev_y = y;
        prev_q = q;
    }
    stack.reverse();

    while let Some((y0, q0, y1, q1, depth)) = stack.pop() {
        if q0 == Complex64::default() || q1 == Complex64::default() {
            return None; // root on the axis
        }
        let mid = 0.5 * (y0 + y1);
        let qm = eval(mid);
        // Refine while the segment could hide winding: the phase step must be
        // far from the aliasing boundary, the endpoint magnitudes must not
        // jump (a root just inside or outside an endpoint), and the midpoint
        // must not dip below the endpoint geometric mean (roots mid-segment).
        let (m0, m1, mm) = (q0.norm_sqr(), q1.norm_sqr(), qm.norm_sqr());
        let needs_split = (q1 / q0).arg().abs() > std::f64::consts::FRAC_PI_2
            || (qm / q0).arg().abs() + (q1 / qm).arg().abs() > std::f64::consts::FRAC_PI_2
            || m0.max(m1) > 16.0 * m0.min(m1)
            || mm * mm * 16.0 < m0 * m1;
        if needs_split {
            if depth >= MAX_DEPTH || (y1 - y0) <= f64::EPSILON * y_max {
                return None; // cannot certify: treat as marginal
            }
            stack.push((mid, qm, y1, q1, depth + 1));
            stack.push((y0, q0, mid, qm, depth + 1));
        } else {
            total_arg += (qm / q0).arg() + (q1 / qm).arg();
        }
    }

    // each left-half-plane root contributes +pi to the total, each right-half
    // root -pi; solve for the right count and require a clean integer
    let count = (n as f64 * std::f64::consts::PI - total_arg) / (2.0 * std::f64::consts::PI);
    let rounded = count.round();
    if (count - rounded).abs() > 0.3 || rounded < 0.0 {
        return None;
    }
    Some(rounded as usize)
}

/// Strict stability of a drift matrix with conjugate-paired structure:
/// every eigenvalue in the open left half-plane. Marginal or uncertifiable
/// spectra count as unstable.
pub fn is_stable(m: &ComplexMatrix) -> bool {
    let coeffs = characteristic_polynomial(m);
    // conjugate pairing guarantees real coefficients; anything left is noise
    debug_assert!(coeffs.iter().all(|c| c.im.abs() <= 1e-9 * (1.0 + c.norm())));
    let real: Vec<f64> = coeffs.iter().map(|c| c.re).collect();
    matches!(unstable_root_count(&real), Some(0))
}
