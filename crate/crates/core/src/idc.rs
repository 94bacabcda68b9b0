//! Interdigital capacitor: conformal-mapping capacitance, conductor loss
//! and the lumped pi equivalent (series R–C between two shunt capacitors).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::MU0;
use crate::error::{ensure_positive, Error, Result};
use crate::network::TwoPort;
use crate::substrate::{guided_wavelength, Substrate};

/// Finger layout of an interdigital capacitor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdcGeometry {
    pub finger_width: f64,
    pub gap: f64,
    pub finger_length: f64,
    /// Count entering the `(N − 1)` capacitance factor.
    pub n_fingers: u32,
    pub terminal_width: f64,
}

/// Electrical-size status of a capacitor at a given frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SizeCheck {
    Lumped,
    /// Longer than λg/8; the lumped model is getting stretched.
    Marginal,
}

impl IdcGeometry {
    /// The finger layout listed for the matched 2.45 GHz antenna.
    pub fn reference() -> Self {
        Self {
            finger_width: 1e-3,
            gap: 0.1e-3,
            finger_length: 1.717e-3,
            n_fingers: 3,
            terminal_width: 0.64e-3,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("finger_width", self.finger_width),
            ("gap", self.gap),
            ("finger_length", self.finger_length),
            ("terminal_width", self.terminal_width),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Geometry(format!("{name} must be positive, got {v}")));
            }
        }
        if self.n_fingers < 2 {
            return Err(Error::Geometry(format!(
                "at least two fingers are needed, got {}",
                self.n_fingers
            )));
        }
        Ok(())
    }

    /// Fingers must stay well below a quarter guided wavelength.
    pub fn check_electrical_size(&self, f: f64, substrate: &Substrate) -> Result<SizeCheck> {
        let lg = guided_wavelength(f, substrate)?;
        if self.finger_length >= lg / 4.0 {
            Err(Error::ModelValidity(format!(
                "finger length {:.3} mm is not small against λg/4 = {:.3} mm",
                self.finger_length * 1e3,
                lg / 4.0 * 1e3
            )))
        } else if self.finger_length > lg / 8.0 {
            Ok(SizeCheck::Marginal)
        } else {
            Ok(SizeCheck::Lumped)
        }
    }
}

/// Modulus `k = tan²(wπ / 4(w+G))` and its complement `k′ = √(1−k²)`.
pub fn geometric_modulus(finger_width: f64, gap: f64) -> Result<(f64, f64)> {
    ensure_positive("finger width", finger_width)?;
    ensure_positive("gap", gap)?;
    let k = (finger_width * PI / (4.0 * (finger_width + gap)))
        .tan()
        .powi(2);
    if !(k > 0.0 && k < 1.0) {
        return Err(Error::Geometry(format!(
            "modulus k = {k} is outside (0, 1)"
        )));
    }
    Ok((k, (1.0 - k * k).sqrt()))
}

/// `K(k)/K(k′)` from the logarithmic approximations, switching at k = 0.7.
pub fn elliptic_ratio(k: f64) -> Result<f64> {
    if !(k > 0.0 && k < 1.0) {
        return Err(Error::Domain(format!(
            "elliptic modulus must lie in (0, 1), got {k}"
        )));
    }
    if k <= 0.7 {
        let sk = (1.0 - k * k).sqrt().sqrt();
        Ok(PI / (2.0 * (1.0 + sk) / (1.0 - sk)).ln())
    } else {
        let sk = k.sqrt();
        Ok((2.0 * (1.0 + sk) / (1.0 - sk)).ln() / PI)
    }
}

/// Series capacitance in farads.
///
/// The closed form is dimensional: with the finger length in micrometres it
/// yields picofarads, so the conversion is done here and SI goes in and out.
pub fn series_capacitance(geom: &IdcGeometry, eps_eff: f64) -> Result<f64> {
    geom.validate()?;
    if !(eps_eff.is_finite() && eps_eff >= 1.0) {
        return Err(Error::Domain(format!(
            "eps_eff must be >= 1, got {eps_eff}"
        )));
    }
    let (k, _) = geometric_modulus(geom.finger_width, geom.gap)?;
    let ratio = elliptic_ratio(k)?;
    let length_um = geom.finger_length * 1e6;
    let c_pf = eps_eff * 1e-3 / (18.0 * PI) * ratio * f64::from(geom.n_fingers - 1) * length_um;
    Ok(c_pf * 1e-12)
}

/// Surface resistivity `√(πfμ0/σ)` in ohms per square.
pub fn surface_resistance(f: f64, sigma: f64) -> Result<f64> {
    ensure_positive("frequency", f)?;
    ensure_positive("conductivity", sigma)?;
    Ok((PI * f * MU0 / sigma).sqrt())
}

/// Conductor-loss resistance `4L/(3wN)·R_F`.
pub fn series_resistance(geom: &IdcGeometry, f: f64, sigma: f64) -> Result<f64> {
    geom.validate()?;
    let rf = surface_resistance(f, sigma)?;
    Ok(4.0 * geom.finger_length / (3.0 * geom.finger_width * f64::from(geom.n_fingers)) * rf)
}

/// Lumped element values of the capacitor at one frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdcLumped {
    pub c_series: f64,
    pub r_series: f64,
    pub c_shunt_1: f64,
    pub c_shunt_2: f64,
}

impl IdcLumped {
    pub fn from_geometry(
        geom: &IdcGeometry,
        eps_eff: f64,
        f: f64,
        sigma: f64,
        shunt_caps: (f64, f64),
    ) -> Result<Self> {
        let (c1, c2) = shunt_caps;
        if !(c1.is_finite() && c1 >= 0.0 && c2.is_finite() && c2 >= 0.0) {
            return Err(Error::Domain(format!(
                "shunt capacitances must be >= 0, got ({c1}, {c2})"
            )));
        }
        Ok(Self {
            c_series: series_capacitance(geom, eps_eff)?,
            r_series: series_resistance(geom, f, sigma)?,
            c_shunt_1: c1,
            c_shunt_2: c2,
        })
    }

    pub fn series_impedance(&self, f: f64) -> Complex64 {
        let w = 2.0 * PI * f;
        Complex64::new(self.r_series, -1.0 / (w * self.c_series))
    }

    /// Chain matrix of shunt C1, series (Rs + 1/jωCs), shunt C2.
    pub fn two_port(&self, f: f64) -> Result<TwoPort> {
        let w = 2.0 * PI * f;
        TwoPort::shunt(Complex64::new(0.0, w * self.c_shunt_1), f)
            .cascade(&TwoPort::series(self.series_impedance(f), f))?
            .cascade(&TwoPort::shunt(Complex64::new(0.0, w * self.c_shunt_2), f))
    }
}

/// Chain matrix of the capacitor at `f`.
pub fn idc_two_port(
    geom: &IdcGeometry,
    eps_eff: f64,
    f: f64,
    sigma: f64,
    shunt_caps: (f64, f64),
) -> Result<TwoPort> {
    ensure_positive("frequency", f)?;
    IdcLumped::from_geometry(geom, eps_eff, f, sigma, shunt_caps)?.two_port(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::substrate::effective_permittivity;
    use approx::assert_relative_eq;

    // K(k) = π / (2·AGM(1, k′))
    fn k_agm(k: f64) -> f64 {
        let (mut a, mut b) = (1.0, (1.0 - k * k).sqrt());
        for _ in 0..40 {
            let (an, bn) = ((a + b) / 2.0, (a * b).sqrt());
            a = an;
            b = bn;
        }
        PI / (2.0 * a)
    }

    fn ratio_agm(k: f64) -> f64 {
        k_agm(k) / k_agm((1.0 - k * k).sqrt())
    }

    #[test]
    fn modulus_of_reference_fingers() {
        let (k, kp) = geometric_modulus(1e-3, 0.1e-3).unwrap();
        let expect = (PI / 4.4).tan().powi(2);
        assert_relative_eq!(k, expect, max_relative = 1e-14);
        assert!((k - 0.752).abs() < 2e-3);
        assert!((kp - 0.659).abs() < 2e-3);
        assert!((k * k + kp * kp - 1.0).abs() < 1e-15);
    }

    #[test]
    fn modulus_inversion() {
        for k in [0.05, 0.3, 0.5, 0.75, 0.95] {
            let gap = 0.1e-3;
            let r = 4.0 * f64::atan(f64::sqrt(k)) / PI;
            let w = gap * (r / (1.0 - r));
            let (kk, _) = geometric_modulus(w, gap).unwrap();
            assert_relative_eq!(kk, k, max_relative = 1e-12);
        }
    }

    #[test]
    fn ratio_symmetry_point() {
        let r = elliptic_ratio(std::f64::consts::FRAC_1_SQRT_2).unwrap();
        assert!((r - 1.0).abs() < 1e-3);
    }

    #[test]
    fn ratio_reference_modulus() {
        let (k, _) = geometric_modulus(1e-3, 0.1e-3).unwrap();
        let r = elliptic_ratio(k).unwrap();
        let sk = k.sqrt();
        assert_relative_eq!(
            r,
            (2.0 * (1.0 + sk) / (1.0 - sk)).ln() / PI,
            max_relative = 1e-14
        );
        assert!((r - 1.06).abs() < 2e-3);
        assert!((r - ratio_agm(k)).abs() / r < 1e-4);
    }

    #[test]
    fn ratio_duality_and_continuity() {
        for i in 1..20 {
            let k = i as f64 / 20.0;
            let kp = (1.0 - k * k).sqrt();
            let p = elliptic_ratio(k).unwrap() * elliptic_ratio(kp).unwrap();
            assert!((p - 1.0).abs() < 1e-3, "k={k}: {p}");
        }
        let a = elliptic_ratio(0.7 - 1e-6).unwrap();
        let b = elliptic_ratio(0.7 + 1e-6).unwrap();
        assert!((a - b).abs() < 1e-3);
    }

    #[test]
    fn ratio_against_agm() {
        for i in 0..=90 {
            let k = 0.05 + i as f64 * 0.01;
            let r = elliptic_ratio(k).unwrap();
            let o = ratio_agm(k);
            assert!((r - o).abs() / o < 3e-3, "k={k}: {r} vs {o}");
        }
    }

    #[test]
    fn ratio_domain() {
        assert!(elliptic_ratio(0.0).is_err());
        assert!(elliptic_ratio(1.0).is_err());
    }

    #[test]
    fn reference_capacitance() {
        let s = Substrate::epoxy_reference();
        let e = effective_permittivity(1e-3, &s).unwrap();
        let c = series_capacitance(&IdcGeometry::reference(), e).unwrap();
        assert!((c - 0.207e-12).abs() / 0.207e-12 < 0.10, "{c}");
    }

    #[test]
    fn capacitance_scalar_oracle_and_scaling() {
        // ratio 1.059 is what the modulus for these fingers gives to 3 digits
        let mut g = IdcGeometry::reference();
        g.n_fingers = 6;
        let (k, _) = geometric_modulus(g.finger_width, g.gap).unwrap();
        let ratio = elliptic_ratio(k).unwrap();
        let expect = 3.05 * 1e-3 / (18.0 * PI) * ratio * 5.0 * 1717.0 * 1e-12;
        assert_relative_eq!(
            series_capacitance(&g, 3.05).unwrap(),
            expect,
            max_relative = 1e-12
        );
        assert!((expect * 1e12 - 3.05e-3 / (18.0 * PI) * 1.059 * 5.0 * 1717.0).abs() < 2e-3);

        let mut g2 = g;
        g2.n_fingers = 11;
        assert_relative_eq!(
            series_capacitance(&g2, 3.05).unwrap(),
            2.0 * series_capacitance(&g, 3.05).unwrap(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn capacitance_monotone() {
        let mut g = IdcGeometry::reference();
        let mut prev = 0.0;
        for i in 1..30 {
            g.finger_length = i as f64 * 0.2e-3;
            let c = series_capacitance(&g, 3.0).unwrap();
            assert!(c > prev);
            prev = c;
        }
        let mut g = IdcGeometry::reference();
        let mut prev = 0.0;
        for n in 2..12 {
            g.n_fingers = n;
            let c = series_capacitance(&g, 3.0).unwrap();
            assert!(c > prev);
            prev = c;
        }
    }

    #[test]
    fn resistance_scalar_and_scaling() {
        let g = IdcGeometry::reference();
        let r = series_resistance(&g, 2.45e9, 1.83e7).unwrap();
        let rf = (PI * 2.45e9 * 4e-7 * PI / 1.83e7).sqrt();
        assert_relative_eq!(
            r,
            4.0 * 1.717 / (3.0 * 1.0 * 3.0) * rf,
            max_relative = 1e-12
        );
        assert!((r - 0.0175).abs() / 0.0175 < 0.01);
        let r4 = series_resistance(&g, 4.0 * 2.45e9, 1.83e7).unwrap();
        assert_relative_eq!(r4, 2.0 * r, max_relative = 1e-12);
        assert!(series_resistance(&g, 2.45e9, 1e30).unwrap() < 1e-12);
    }

    #[test]
    fn two_port_limits() {
        let g = IdcGeometry::reference();
        let t = idc_two_port(&g, 3.0, 1e18, 1e30, (0.0, 0.0)).unwrap();
        assert!((t.a - 1.0).norm() < 1e-9 && t.b.norm() < 1e-3 && t.c.norm() == 0.0);
    }

    #[test]
    fn series_reactance_reference() {
        let l = IdcLumped {
            c_series: 0.207e-12,
            r_series: 0.0,
            c_shunt_1: 0.0,
            c_shunt_2: 0.0,
        };
        let x = l.series_impedance(2.45e9).im.abs();
        let expect = 1.0 / (2.0 * PI * 2.45e9 * 0.207e-12);
        assert_relative_eq!(x, expect, max_relative = 1e-14);
        assert!((x - 314.0).abs() < 1.0);
    }

    #[test]
    fn two_port_reciprocal() {
        let g = IdcGeometry::reference();
        let t = idc_two_port(&g, 3.0, 2.45e9, 1.83e7, (0.05e-12, 0.03e-12)).unwrap();
        assert!((t.det() - 1.0).norm() < 1e-12);
    }

    #[test]
    fn electrical_size() {
        let s = Substrate::epoxy_reference();
        let mut g = IdcGeometry::reference();
        assert_eq!(
            g.check_electrical_size(2.45e9, &s).unwrap(),
            SizeCheck::Lumped
        );
        g.finger_length = 10e-3;
        assert_eq!(
            g.check_electrical_size(2.45e9, &s).unwrap(),
            SizeCheck::Marginal
        );
        g.finger_length = 20e-3;
        assert!(g.check_electrical_size(2.45e9, &s).is_err());
    }

    #[test]
    fn geometry_validation() {
        let mut g = IdcGeometry::reference();
        g.n_fingers = 1;
        assert!(g.validate().is_err());
        let mut g = IdcGeometry::reference();
        g.gap = 0.0;
        assert!(series_capacitance(&g, 3.0).is_err());
    }
}
