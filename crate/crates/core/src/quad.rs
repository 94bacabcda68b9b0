//! Adaptive Simpson quadrature.

/// Recursion depth cap; 2^-50 of the interval is far below any useful panel.
const MAX_DEPTH: u32 = 50;

/// Integrates `f` over `[a, b]` to an absolute tolerance `tol`.
///
/// Uses the classic Richardson-corrected recursive Simpson rule. The
/// interval is first split into `initial_panels` pieces so that oscillatory
/// integrands cannot fool the first error estimate.
pub fn adaptive_simpson<F>(f: F, a: f64, b: f64, tol: f64, initial_panels: usize) -> f64
where
    F: Fn(f64) -> f64,
{
    let n = initial_panels.max(1);
    let h = (b - a) / n as f64;
    let panel_tol = tol / n as f64;
    (0..n)
        .map(|i| {
            let lo = a + h * i as f64;
            let hi = if i + 1 == n { b } else { lo + h };
            let (flo, fhi, fm) = (f(lo), f(hi), f(0.5 * (lo + hi)));
            let whole = simpson(lo, hi, flo, fm, fhi);
            recurse(&f, lo, hi, flo, fm, fhi, whole, panel_tol, MAX_DEPTH)
        })
        .sum()
}

#[inline]
fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_exact() {
        let v = adaptive_simpson(|x| x * x * x - 2.0 * x, 0.0, 2.0, 1e-12, 1);
        assert!((v - 0.0).abs() < 1e-12);
    }

    #[test]
    fn sine_cubed() {
        // ∫_0^π sin³ = 4/3
        let v = adaptive_simpson(|t: f64| t.sin().powi(3), 0.0, PI, 1e-13, 4);
        assert!((v - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn oscillatory() {
        let v = adaptive_simpson(|x: f64| (20.0 * x).cos(), 0.0, PI, 1e-12, 16);
        assert!(v.abs() < 1e-11);
    }
}
