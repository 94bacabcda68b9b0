//! Independent scalar oracles shared by the integration tests. Nothing here
//! calls into the crate's numerics.

#![allow(dead_code)]

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

pub const C: f64 = 299_792_458.0;
pub const ER: f64 = 4.32;
pub const H: f64 = 1.52e-3;

pub fn eeff(w: f64, er: f64, h: f64) -> f64 {
    let u = w / h;
    let base = (er + 1.0) / 2.0;
    let half = (er - 1.0) / 2.0;
    if u < 1.0 {
        base + half * ((1.0 + 12.0 / u).powf(-0.5) + 0.04 * (1.0 - u).powi(2))
    } else {
        base + half * (1.0 + 12.0 / u).powf(-0.5)
    }
}

pub fn z0(w: f64, er: f64, h: f64) -> f64 {
    let u = w / h;
    let e = eeff(w, er, h);
    if u <= 1.0 {
        60.0 / e.sqrt() * (8.0 / u + u / 4.0).ln()
    } else {
        120.0 * PI / (e.sqrt() * (u + 1.393 + 0.677 * (u + 1.444).ln()))
    }
}

pub fn delta_l(w: f64, e: f64, h: f64) -> f64 {
    let u = w / h;
    0.412 * h * (e + 0.3) * (u + 0.264) / ((e - 0.258) * (u + 0.8))
}

/// (W, L) from the design frequency by direct chaining.
pub fn patch_chain(f: f64, er: f64, h: f64) -> (f64, f64) {
    let w = C / (2.0 * f) * (2.0 / (er + 1.0)).sqrt();
    let e = eeff(w, er, h);
    let l = C / (2.0 * f * e.sqrt()) - 2.0 * delta_l(w, e, h);
    (w, l)
}

fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        if (a - b).abs() <= 4.0 * f64::EPSILON * a {
            break;
        }
        let m = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = m;
    }
    a
}

/// Complete elliptic integral of the first kind, modulus `k`.
pub fn ellip_k(k: f64) -> f64 {
    PI / (2.0 * agm(1.0, (1.0 - k * k).sqrt()))
}

pub fn ellip_ratio_exact(k: f64) -> f64 {
    ellip_k(k) / ellip_k((1.0 - k * k).sqrt())
}

/// Series IDC capacitance in pF using exact elliptic integrals.
pub fn idc_cs_pf(w: f64, gap: f64, l: f64, n: u32, e: f64) -> f64 {
    let k = (w * PI / (4.0 * (w + gap))).tan().powi(2);
    e * 1e-3 / (18.0 * PI) * ellip_ratio_exact(k) * f64::from(n - 1) * l * 1e6
}

pub fn idc_rs(w: f64, l: f64, n: u32, f: f64, sigma: f64) -> f64 {
    let mu0 = 4e-7 * PI;
    4.0 * l / (3.0 * w * f64::from(n)) * (PI * f * mu0 / sigma).sqrt()
}

fn trapezoid(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = 0.5 * (f(a) + f(b));
    for i in 1..n {
        s += f(a + h * i as f64);
    }
    s * h
}

fn aperture(k0: f64, w: f64, t: f64) -> f64 {
    let x = 0.5 * k0 * w * t.cos();
    let sinc = if x == 0.0 { 1.0 } else { x.sin() / x };
    (0.5 * k0 * w).powi(2) * sinc * sinc
}

/// Self conductance by a 10⁶-panel trapezoid rule.
pub fn g1_trapezoid(w: f64, f: f64) -> f64 {
    let k0 = 2.0 * PI * f / C;
    trapezoid(|t| aperture(k0, w, t) * t.sin().powi(3), 0.0, PI, 1_000_000) / (120.0 * PI * PI)
}

/// Mutual conductance by a 10⁶-panel trapezoid rule; `j0` is supplied by
/// the caller.
pub fn g12_trapezoid(w: f64, l: f64, f: f64, j0: impl Fn(f64) -> f64) -> f64 {
    let k0 = 2.0 * PI * f / C;
    trapezoid(
        |t| aperture(k0, w, t) * j0(k0 * l * t.sin()) * t.sin().powi(3),
        0.0,
        PI,
        1_000_000,
    ) / (120.0 * PI * PI)
}

/// J0(n/10) from the power series in exact integer arithmetic.
pub fn j0_exact_tenths(n: i64) -> f64 {
    // J0(x) = Σ (−1)^k (x²/4)^k / (k!)², x²/4 = n²/400
    const K: u32 = 140;
    let n2 = BigInt::from(n) * BigInt::from(n);
    let b400 = BigInt::from(400);
    let mut fact = vec![BigInt::one()];
    for k in 1..=K {
        let next = &fact[k as usize - 1] * BigInt::from(k);
        fact.push(next);
    }
    let kf = &fact[K as usize];
    let denom = num_traits::pow(b400.clone(), K as usize) * kf * kf;
    let mut num = BigInt::zero();
    let mut n_pow = BigInt::one();
    for k in 0..=K {
        let ratio = kf / &fact[k as usize];
        let term = &n_pow * num_traits::pow(b400.clone(), (K - k) as usize) * &ratio * &ratio;
        if k % 2 == 0 {
            num += term;
        } else {
            num -= term;
        }
        n_pow *= &n2;
    }
    let scale = num_traits::pow(BigInt::from(10), 40);
    let scaled = num * scale / denom;
    scaled.to_f64().unwrap() / 1e40
}

/// Input impedance of `zl` seen through a lossless line.
pub fn through_line(z0: f64, eps_eff: f64, len: f64, f: f64, zl: Complex64) -> Complex64 {
    let t = Complex64::new(0.0, (2.0 * PI * f * eps_eff.sqrt() / C * len).tan());
    z0 * (zl + z0 * t) / (z0 + zl * t)
}

pub fn gamma_db(z: Complex64, zs: f64) -> f64 {
    20.0 * ((z - zs) / (z + zs)).norm().log10()
}
