//! Two-slot radiation model of the rectangular patch.
//!
//! The patch is treated as two radiating apertures of width `W` separated
//! by the patch length `L`. Self and mutual conductances come from the
//! far-field power integrals, evaluated with adaptive Simpson quadrature.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::{free_space_wavelength, free_space_wavenumber, ETA0};
use crate::error::{ensure_positive, Error, Result};
use crate::quad::adaptive_simpson;
use crate::special::{bessel_j0, sinc};

/// Absolute tolerance of the conductance integrals, in siemens.
pub const CONDUCTANCE_TOL: f64 = 1e-13;

const INITIAL_PANELS: usize = 8;

/// Admittance of one radiating slot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlotAdmittance {
    pub g: f64,
    pub b: f64,
}

/// Narrow-slot admittance `π·d/(λ0·η0)·[1 + j(1 − 0.636 ln(k0·ΔL))]`.
///
/// `slot_dim` is the aperture length substituted into the conductance term.
/// The formula only holds for electrically thin slots, `k0·ΔL < 1`.
pub fn slot_admittance(slot_dim: f64, delta_l: f64, f: f64) -> Result<SlotAdmittance> {
    ensure_positive("slot dimension", slot_dim)?;
    ensure_positive("slot width", delta_l)?;
    ensure_positive("frequency", f)?;
    let k0_dl = free_space_wavenumber(f) * delta_l;
    if k0_dl >= 1.0 {
        return Err(Error::ModelValidity(format!(
            "k0*dL = {k0_dl:.4} is not small; the thin-slot admittance does not apply"
        )));
    }
    let g = PI * slot_dim / (free_space_wavelength(f) * ETA0);
    Ok(SlotAdmittance {
        g,
        b: g * susceptance_factor(k0_dl),
    })
}

/// The bracket `1 − 0.636 ln(k0·ΔL)` relating slot susceptance to conductance.
pub fn susceptance_factor(k0_dl: f64) -> f64 {
    1.0 - 0.636 * k0_dl.ln()
}

/// `[sin(k0W/2·cosθ)/cosθ]²`, written through sinc so θ = π/2 needs no
/// special case (its limit is `(k0W/2)²`).
#[inline]
fn aperture_factor(half_width: f64, theta: f64) -> f64 {
    let s = half_width * sinc(half_width * theta.cos());
    s * s
}

/// Conductance of a single radiating slot of width `w`.
pub fn self_conductance(w: f64, f: f64) -> Result<f64> {
    ensure_positive("slot width W", w)?;
    ensure_positive("frequency", f)?;
    let a = 0.5 * free_space_wavenumber(f) * w;
    let scale = 120.0 * PI * PI;
    let integral = adaptive_simpson(
        |t| aperture_factor(a, t) * t.sin().powi(3),
        0.0,
        PI,
        CONDUCTANCE_TOL * scale,
        INITIAL_PANELS,
    );
    Ok(integral / scale)
}

/// Mutual conductance between the two slots of a patch of width `w` and
/// length `l`.
pub fn mutual_conductance(w: f64, l: f64, f: f64) -> Result<f64> {
    ensure_positive("slot width W", w)?;
    ensure_positive("frequency", f)?;
    if !(l.is_finite() && l >= 0.0) {
        return Err(Error::Domain(format!(
            "slot separation must be >= 0, got {l}"
        )));
    }
    let k0 = free_space_wavenumber(f);
    let a = 0.5 * k0 * w;
    let kl = k0 * l;
    let scale = 120.0 * PI * PI;
    // J0(k0 L sinθ) oscillates once k0 L grows; scale the starting panels.
    let panels = INITIAL_PANELS.max((kl / 2.0).ceil() as usize * 2);
    let integral = adaptive_simpson(
        |t| {
            let s = t.sin();
            aperture_factor(a, t) * bessel_j0(kl * s) * s * s * s
        },
        0.0,
        PI,
        CONDUCTANCE_TOL * scale,
        panels,
    );
    Ok(integral / scale)
}

/// Edge input resistance at resonance, `1 / (2(G1 + G12))`.
pub fn resonant_input_impedance(w: f64, l: f64, f: f64) -> Result<f64> {
    let g1 = self_conductance(w, f)?;
    let g12 = mutual_conductance(w, l, f)?;
    resistance_from_conductances(g1, g12)
}

pub(crate) fn resistance_from_conductances(g1: f64, g12: f64) -> Result<f64> {
    let total = g1 + g12;
    if !(total.is_finite() && total > 0.0) {
        return Err(Error::Numerical(format!(
            "G1 + G12 = {total} S is not positive"
        )));
    }
    Ok(1.0 / (2.0 * total))
}

/// Which conductance stands in for the radiation conductance `G_r` of the
/// directivity estimate.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadiationConductance {
    /// Real part of the thin-slot admittance with the patch width, `πW/(λ0η0)`.
    #[default]
    EdgeSlot,
    /// Quadrature self conductance of one slot.
    SelfIntegral,
    /// Two uncoupled slots, `2·G1`.
    DoubleSelf,
    /// Both slots with coupling, `2(G1 + G12)`.
    CoupledPair,
}

impl RadiationConductance {
    pub fn evaluate(self, w: f64, l: f64, f: f64) -> Result<f64> {
        match self {
            Self::EdgeSlot => {
                ensure_positive("slot width W", w)?;
                ensure_positive("frequency", f)?;
                Ok(PI * w / (free_space_wavelength(f) * ETA0))
            }
            Self::SelfIntegral => self_conductance(w, f),
            Self::DoubleSelf => Ok(2.0 * self_conductance(w, f)?),
            Self::CoupledPair => Ok(2.0 * (self_conductance(w, f)? + mutual_conductance(w, l, f)?)),
        }
    }
}

/// Closed-form directivity `4(k0W)² / (π·η0·G_r)` on a linear scale.
pub fn directivity_estimate(w: f64, f: f64, g_r: f64) -> Result<f64> {
    ensure_positive("patch width W", w)?;
    ensure_positive("frequency", f)?;
    if !(g_r.is_finite() && g_r > 0.0) {
        return Err(Error::Domain(format!(
            "radiation conductance must be positive, got {g_r}"
        )));
    }
    let k0w = free_space_wavenumber(f) * w;
    Ok(4.0 * k0w * k0w / (PI * ETA0 * g_r))
}

/// Returns `(gain, efficiency)` with efficiency `P_rad / P_in`.
pub fn gain_and_efficiency(directivity: f64, p_radiated: f64, p_input: f64) -> Result<(f64, f64)> {
    ensure_positive("directivity", directivity)?;
    ensure_positive("radiated power", p_radiated)?;
    ensure_positive("input power", p_input)?;
    if p_radiated > p_input {
        return Err(Error::Domain(format!(
            "radiated power {p_radiated} W exceeds input power {p_input} W"
        )));
    }
    let eff = p_radiated / p_input;
    Ok((eff * directivity, eff))
}

/// Linear power ratio to decibels.
pub fn to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiationSummary {
    pub zin_resonant: f64,
    pub g1: f64,
    pub g12: f64,
    pub directivity: f64,
    pub gain: f64,
    pub efficiency: f64,
    pub radiated_power: f64,
}

impl RadiationSummary {
    /// Evaluates the radiation figures of a `w × l` patch at `f`, given the
    /// power delivered to it and the power it radiates.
    pub fn evaluate(
        w: f64,
        l: f64,
        f: f64,
        policy: RadiationConductance,
        p_radiated: f64,
        p_input: f64,
    ) -> Result<Self> {
        let g1 = self_conductance(w, f)?;
        let g12 = mutual_conductance(w, l, f)?;
        let zin_resonant = resistance_from_conductances(g1, g12)?;
        let directivity = directivity_estimate(w, f, policy.evaluate(w, l, f)?)?;
        let (gain, efficiency) = gain_and_efficiency(directivity, p_radiated, p_input)?;
        Ok(Self {
            zin_resonant,
            g1,
            g12,
            directivity,
            gain,
            efficiency,
            radiated_power: p_radiated,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const F0: f64 = 2.45e9;

    // Brute-force trapezoid over [0, π] with the removable point patched.
    fn trapezoid(w: f64, l: f64, f: f64, n: usize) -> f64 {
        let k0 = 2.0 * PI * f / crate::constants::C0;
        let a = k0 * w / 2.0;
        let g = |t: f64| {
            let c = t.cos();
            let cfac = if c.abs() < 1e-12 {
                a * a
            } else {
                ((a * c).sin() / c).powi(2)
            };
            cfac * crate::special::bessel_j0(k0 * l * t.sin()) * t.sin().powi(3)
        };
        let h = PI / n as f64;
        let mut s = 0.5 * (g(0.0) + g(PI));
        for i in 1..n {
            s += g(i as f64 * h);
        }
        s * h / (120.0 * PI * PI)
    }

    #[test]
    fn self_conductance_matches_trapezoid_oracle() {
        let g = self_conductance(35e-3, F0).unwrap();
        let oracle = trapezoid(35e-3, 0.0, F0, 1_000_000);
        assert!((g - oracle).abs() < 1e-9, "{g} {oracle}");
    }

    #[test]
    fn mutual_matches_trapezoid_oracle() {
        let g = mutual_conductance(35e-3, 29e-3, F0).unwrap();
        let oracle = trapezoid(35e-3, 29e-3, F0, 1_000_000);
        assert!((g - oracle).abs() < 1e-9, "{g} {oracle}");
    }

    #[test]
    fn mutual_reduces_to_self_at_zero_separation() {
        let g1 = self_conductance(35e-3, F0).unwrap();
        let g12 = mutual_conductance(35e-3, 0.0, F0).unwrap();
        assert!((g1 - g12).abs() < 1e-9);
        assert!(mutual_conductance(35e-3, 1e-9, F0).unwrap() - g1 < 1e-9);
    }

    #[test]
    fn self_conductance_vanishes_for_narrow_slot() {
        let g = self_conductance(1e-7, F0).unwrap();
        assert!(g < 1e-12);
    }

    #[test]
    fn self_conductance_increasing_below_half_wave() {
        let half = free_space_wavelength(F0) / 2.0;
        let mut prev = 0.0;
        for i in 1..=40 {
            let w = half * i as f64 / 41.0;
            let g = self_conductance(w, F0).unwrap();
            assert!(g > prev);
            prev = g;
        }
    }

    #[test]
    fn mutual_bounded_by_self() {
        let g1 = self_conductance(35e-3, F0).unwrap();
        for i in 0..50 {
            let l = i as f64 * 4e-3;
            assert!(mutual_conductance(35e-3, l, F0).unwrap().abs() <= g1 + 1e-12);
        }
    }

    #[test]
    fn slot_admittance_scalar() {
        let (d, dl) = (35e-3, 0.7e-3);
        let lam = crate::constants::C0 / F0;
        let k0 = 2.0 * PI / lam;
        let g = PI * d / (lam * 376.730);
        let b = g * (1.0 - 0.636 * (k0 * dl).ln());
        let y = slot_admittance(d, dl, F0).unwrap();
        assert_relative_eq!(y.g, g, max_relative = 1e-14);
        assert_relative_eq!(y.b, b, max_relative = 1e-14);
    }

    #[test]
    fn slot_admittance_validity() {
        let k0 = free_space_wavenumber(F0);
        assert!(slot_admittance(35e-3, 1.0 / k0, F0).is_err());
        assert!(slot_admittance(35e-3, 0.99 / k0, F0).is_ok());
    }

    #[test]
    fn susceptance_factor_zero_crossing() {
        let x0 = (1.0f64 / 0.636).exp();
        assert!(susceptance_factor(x0 * 0.99) > 0.0);
        assert!(susceptance_factor(x0 * 1.01) < 0.0);
        assert!(susceptance_factor(x0).abs() < 1e-12);
    }

    #[test]
    fn zin_reciprocal_of_conductance_sum() {
        let r = resistance_from_conductances(1e-3, 1e-3).unwrap();
        let r2 = resistance_from_conductances(2e-3, 2e-3).unwrap();
        assert_relative_eq!(r, 2.0 * r2, max_relative = 1e-15);
        assert!(resistance_from_conductances(1e-3, -2e-3).is_err());
    }

    #[test]
    fn directivity_scalar_and_scaling() {
        let (w, g) = (35e-3, 2e-3);
        let k0 = 2.0 * PI * F0 / 299_792_458.0;
        let d = 4.0 * (k0 * w).powi(2) / (PI * 376.730 * g);
        assert_relative_eq!(
            directivity_estimate(w, F0, g).unwrap(),
            d,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            directivity_estimate(2.0 * w, F0, g).unwrap(),
            4.0 * d,
            max_relative = 1e-14
        );
        assert!(directivity_estimate(w, F0, 0.0).is_err());
    }

    #[test]
    fn gain_cases() {
        assert_eq!(gain_and_efficiency(4.417, 1.0, 1.0).unwrap(), (4.417, 1.0));
        let (g, e) = gain_and_efficiency(4.0, 0.5, 1.0).unwrap();
        assert_eq!((g, e), (2.0, 0.5));
        let (g, e) = gain_and_efficiency(4.417, 0.999, 1.0).unwrap();
        assert!((to_db(4.417) - to_db(g)).abs() < 0.005 && e < 1.0);
        assert!(gain_and_efficiency(4.0, 1.1, 1.0).is_err());
    }
}
