use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::C0;
use crate::error::{Error, Result};

const J: Complex64 = Complex64::new(0.0, 1.0);

/// Chain (ABCD) matrix of a two-port at a single frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoPort {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
    /// Frequency the entries were evaluated at (Hz).
    pub f: f64,
}

impl TwoPort {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64, f: f64) -> Self {
        Self { a, b, c, d, f }
    }

    pub fn identity(f: f64) -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self::new(one, zero, zero, one, f)
    }

    /// Series element of impedance `z`.
    pub fn series(z: Complex64, f: f64) -> Self {
        Self {
            b: z,
            ..Self::identity(f)
        }
    }

    /// Shunt element of admittance `y`.
    pub fn shunt(y: Complex64, f: f64) -> Self {
        Self {
            c: y,
            ..Self::identity(f)
        }
    }

    /// Lossless uniform line, `β = 2πf√εeff / c`.
    pub fn line(z0: f64, eps_eff: f64, length: f64, f: f64) -> Self {
        let bl = 2.0 * std::f64::consts::PI * f * eps_eff.sqrt() / C0 * length;
        let (s, c) = bl.sin_cos();
        Self::new(
            Complex64::new(c, 0.0),
            J * (z0 * s),
            J * (s / z0),
            Complex64::new(c, 0.0),
            f,
        )
    }

    /// Uniform line with attenuation `alpha` (Np/m).
    pub fn lossy_line(z0: f64, eps_eff: f64, alpha: f64, length: f64, f: f64) -> Self {
        let beta = 2.0 * std::f64::consts::PI * f * eps_eff.sqrt() / C0;
        let gl = Complex64::new(alpha, beta) * length;
        let (ch, sh) = (gl.cosh(), gl.sinh());
        Self::new(ch, sh * z0, sh / z0, ch, f)
    }

    /// Matrix product `self · next`; `next` sits closer to the load.
    pub fn cascade(&self, next: &TwoPort) -> Result<TwoPort> {
        if !same_frequency(self.f, next.f) {
            return Err(Error::FrequencyMismatch(self.f, next.f));
        }
        Ok(Self::new(
            self.a * next.a + self.b * next.c,
            self.a * next.b + self.b * next.d,
            self.c * next.a + self.d * next.c,
            self.c * next.b + self.d * next.d,
            self.f,
        ))
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    /// Impedance seen at port 1 with port 2 terminated in `z_load`.
    /// An infinite `z_load` is an open circuit.
    pub fn input_impedance(&self, z_load: Complex64) -> Result<Complex64> {
        let (num, den) = if z_load.re.is_infinite() || z_load.im.is_infinite() {
            (self.a, self.c)
        } else {
            (self.a * z_load + self.b, self.c * z_load + self.d)
        };
        if den.norm() == 0.0 && num.norm() > 0.0 && !num.is_nan() {
            return Ok(Complex64::new(f64::INFINITY, 0.0));
        }
        if den.norm() < 1e-300 || num.is_nan() {
            return Err(Error::Singular("input impedance is undefined".into()));
        }
        Ok(num / den)
    }

    /// S-parameters referenced to a real `z0` on both ports, `[[s11, s12], [s21, s22]]`.
    pub fn to_s(&self, z0: f64) -> Result<[[Complex64; 2]; 2]> {
        let Self { a, b, c, d, .. } = *self;
        let bz = b / z0;
        let cz = c * z0;
        let den = a + bz + cz + d;
        if den.norm() == 0.0 {
            return Err(Error::Singular("S-parameter conversion".into()));
        }
        let s11 = (a + bz - cz - d) / den;
        let s12 = 2.0 * (a * d - b * c) / den;
        let s21 = Complex64::new(2.0, 0.0) / den;
        let s22 = (-a + bz - cz + d) / den;
        Ok([[s11, s12], [s21, s22]])
    }
}

fn same_frequency(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn close(a: &TwoPort, b: &TwoPort, tol: f64) -> bool {
        [(a.a, b.a), (a.b, b.b), (a.c, b.c), (a.d, b.d)]
            .iter()
            .all(|(x, y)| (x - y).norm() <= tol * (1.0 + y.norm()))
    }

    #[test]
    fn zero_length_line_is_identity() {
        assert!(close(
            &TwoPort::line(50.0, 3.0, 0.0, 1e9),
            &TwoPort::identity(1e9),
            0.0
        ));
    }

    #[test]
    fn quarter_wave_inverts_load() {
        let f = 2.45e9;
        let e = 3.28;
        let l = C0 / (f * f64::sqrt(e)) / 4.0;
        let t = TwoPort::line(50.0, e, l, f);
        let zl = Complex64::new(225.0, 30.0);
        let zin = t.input_impedance(zl).unwrap();
        let expect = 2500.0 / zl;
        assert!((zin - expect).norm() < 1e-9);
    }

    #[test]
    fn line_scalar_oracle() {
        let (z0, e, l, f) = (50.0, 3.28, 14.72e-3, 2.45e9);
        let bl = 2.0 * std::f64::consts::PI * f * 3.28f64.sqrt() / 299_792_458.0 * l;
        let t = TwoPort::line(z0, e, l, f);
        assert_relative_eq!(t.a.re, bl.cos(), max_relative = 1e-14);
        assert_relative_eq!(t.b.im, 50.0 * bl.sin(), max_relative = 1e-14);
        assert_relative_eq!(t.c.im, bl.sin() / 50.0, max_relative = 1e-14);
        assert_eq!(t.b.re, 0.0);
    }

    #[test]
    fn cascade_identity_and_additivity() {
        let f = 3e9;
        let a = TwoPort::line(70.0, 2.5, 7e-3, f);
        let b = TwoPort::line(70.0, 2.5, 11e-3, f);
        assert!(close(&a.cascade(&TwoPort::identity(f)).unwrap(), &a, 1e-15));
        let ab = a.cascade(&b).unwrap();
        assert!(close(&ab, &TwoPort::line(70.0, 2.5, 18e-3, f), 1e-9));
    }

    #[test]
    fn cascade_rejects_mismatched_frequencies() {
        let a = TwoPort::identity(1e9);
        let b = TwoPort::identity(2e9);
        assert!(matches!(a.cascade(&b), Err(Error::FrequencyMismatch(..))));
    }

    #[test]
    fn lossy_line_reduces_to_lossless() {
        let a = TwoPort::lossy_line(50.0, 3.0, 0.0, 12e-3, 2e9);
        let b = TwoPort::line(50.0, 3.0, 12e-3, 2e9);
        assert!(close(&a, &b, 1e-12));
    }

    #[test]
    fn open_load_gives_a_over_c() {
        let t = TwoPort::line(50.0, 3.0, 10e-3, 2e9);
        let z = t
            .input_impedance(Complex64::new(f64::INFINITY, 0.0))
            .unwrap();
        assert!((z - t.a / t.c).norm() < 1e-12);
    }

    #[test]
    fn identity_s_parameters() {
        let s = TwoPort::identity(1e9).to_s(50.0).unwrap();
        assert!(s[0][0].norm() < 1e-15 && (s[1][0] - 1.0).norm() < 1e-15);
    }
}
