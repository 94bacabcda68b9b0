//! Closed-form microstrip physics: effective permittivity, characteristic
//! impedance, width synthesis, open-end fringing and patch dimensioning.
//!
//! Everything here works in base SI units (meters, hertz, ohms).

use serde::{Deserialize, Serialize};

use crate::constants::C0;
use crate::error::{ensure_positive, Error, Result};

/// Dielectric slab plus metallization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Substrate {
    /// Relative permittivity.
    pub epsilon_r: f64,
    /// Substrate height (m).
    pub h: f64,
    /// Dielectric loss tangent.
    pub tan_delta: f64,
    /// Metallization thickness (m).
    pub t: f64,
    /// Metal conductivity (S/m).
    pub sigma: f64,
}

impl Substrate {
    pub fn new(epsilon_r: f64, h: f64, tan_delta: f64, t: f64, sigma: f64) -> Result<Self> {
        let s = Self {
            epsilon_r,
            h,
            tan_delta,
            t,
            sigma,
        };
        s.validate()?;
        Ok(s)
    }

    /// The epoxy board used for the reference 2.45 GHz design
    /// (h = 1.52 mm, εr = 4.32, tanδ = 0.018, 35 µm copper-like metal).
    pub fn epoxy_reference() -> Self {
        Self {
            epsilon_r: 4.32,
            h: 1.52e-3,
            tan_delta: 0.018,
            t: 35e-6,
            sigma: 1.83e7,
        }
    }

    /// Checks the slab invariants. `epsilon_r == 1` is accepted so that the
    /// vacuum limit can be evaluated.
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon_r.is_finite() && self.epsilon_r >= 1.0) {
            return Err(Error::Domain(format!(
                "epsilon_r must be >= 1, got {}",
                self.epsilon_r
            )));
        }
        ensure_positive("substrate height h", self.h)?;
        ensure_positive("conductivity sigma", self.sigma)?;
        if !(self.tan_delta.is_finite() && (0.0..1.0).contains(&self.tan_delta)) {
            return Err(Error::Domain(format!(
                "tan_delta must lie in [0, 1), got {}",
                self.tan_delta
            )));
        }
        if !(self.t.is_finite() && self.t >= 0.0) {
            return Err(Error::Domain(format!(
                "metal thickness t must be >= 0, got {}",
                self.t
            )));
        }
        Ok(())
    }
}

/// Rectangular patch dimensions together with the fringing data they were
/// derived from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PatchGeometry {
    /// Radiating edge width (m).
    pub w: f64,
    /// Resonant length (m).
    pub l: f64,
    /// Open-end extension of each radiating edge (m).
    pub delta_l: f64,
    /// Design frequency (Hz).
    pub f0: f64,
}

impl PatchGeometry {
    /// Builds a patch from explicit dimensions, deriving the fringing
    /// extension from the substrate.
    pub fn from_dimensions(w: f64, l: f64, f0: f64, substrate: &Substrate) -> Result<Self> {
        ensure_positive("patch width W", w)?;
        ensure_positive("patch length L", l)?;
        ensure_positive("design frequency f0", f0)?;
        let delta_l = fringing_extension(w, substrate)?;
        Ok(Self { w, l, delta_l, f0 })
    }

    /// Electrical length `L + 2ΔL`.
    pub fn l_eff(&self) -> f64 {
        self.l + 2.0 * self.delta_l
    }
}

/// A uniform microstrip section.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MicrostripLine {
    pub w: f64,
    pub z0: f64,
    pub eps_eff: f64,
    pub length: f64,
}

impl MicrostripLine {
    pub fn new(w: f64, length: f64, substrate: &Substrate) -> Result<Self> {
        if !(length.is_finite() && length >= 0.0) {
            return Err(Error::Domain(format!(
                "line length must be >= 0, got {length}"
            )));
        }
        Ok(Self {
            w,
            z0: z0_microstrip(w, substrate)?,
            eps_eff: effective_permittivity(w, substrate)?,
            length,
        })
    }
}

/// Whether the finite metal thickness is folded into the strip width.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThicknessCorrection {
    #[default]
    Off,
    On,
}

fn check_width(w: f64, substrate: &Substrate) -> Result<()> {
    substrate.validate()?;
    ensure_positive("strip width w", w)
}

/// Quasi-static effective permittivity (Hammerstad form, both w/h regimes).
pub fn effective_permittivity(w: f64, substrate: &Substrate) -> Result<f64> {
    check_width(w, substrate)?;
    let er = substrate.epsilon_r;
    let u = w / substrate.h;
    let mut f = (1.0 + 12.0 / u).powf(-0.5);
    if u < 1.0 {
        f += 0.04 * (1.0 - u).powi(2);
    }
    Ok((er + 1.0) / 2.0 + (er - 1.0) / 2.0 * f)
}

/// Zero-thickness characteristic impedance.
pub fn z0_microstrip(w: f64, substrate: &Substrate) -> Result<f64> {
    let e_eff = effective_permittivity(w, substrate)?;
    let u = w / substrate.h;
    let z0 = if u < 1.0 {
        60.0 / e_eff.sqrt() * (8.0 / u + u / 4.0).ln()
    } else {
        120.0 * std::f64::consts::PI / e_eff.sqrt() / (u + 1.393 + 0.677 * (u + 1.444).ln())
    };
    Ok(z0)
}

/// Wheeler's closed form with the strip widened by the metal thickness.
/// Falls back to the bare width when `t == 0`.
pub fn z0_microstrip_thick(w: f64, substrate: &Substrate) -> Result<f64> {
    use std::f64::consts::{E, PI};
    check_width(w, substrate)?;
    let Substrate {
        epsilon_r: er,
        h,
        t,
        ..
    } = *substrate;

    let dw = if t > 0.0 {
        let a = (t / h).powi(2) + ((1.0 / PI) / (w / t + 1.1)).powi(2);
        t / PI * (4.0 * E / a.sqrt()).ln()
    } else {
        0.0
    };
    let w_eff = w + dw * (1.0 + 1.0 / er) / 2.0;

    let x = 4.0 * h / w_eff;
    let p = (14.0 + 8.0 / er) / 11.0;
    let a = (p * p * x * x + (1.0 + 1.0 / er) / 2.0 * PI * PI).sqrt();
    Ok(42.4 / (er + 1.0).sqrt() * (1.0 + x * (p * x + a)).ln())
}

/// Characteristic impedance under the chosen thickness model.
pub fn z0_microstrip_with(
    w: f64,
    substrate: &Substrate,
    model: ThicknessCorrection,
) -> Result<f64> {
    match model {
        ThicknessCorrection::Off => z0_microstrip(w, substrate),
        ThicknessCorrection::On => z0_microstrip_thick(w, substrate),
    }
}

/// Smallest and largest w/h ratios searched by [`synthesize_width`].
const SYNTH_MIN_RATIO: f64 = 0.02;
const SYNTH_MAX_RATIO: f64 = 200.0;
const SYNTH_TOL_OHM: f64 = 0.01;

/// Inverts [`z0_microstrip`] by bisection on the strip width.
pub fn synthesize_width(z0_target: f64, substrate: &Substrate) -> Result<f64> {
    synthesize_width_with(z0_target, substrate, ThicknessCorrection::Off)
}

pub fn synthesize_width_with(
    z0_target: f64,
    substrate: &Substrate,
    model: ThicknessCorrection,
) -> Result<f64> {
    substrate.validate()?;
    ensure_positive("target impedance", z0_target)?;
    let h = substrate.h;
    let z = |w: f64| z0_microstrip_with(w, substrate, model);

    let (mut lo, mut hi) = (SYNTH_MIN_RATIO * h, SYNTH_MAX_RATIO * h);
    let (z_max, z_min) = (z(lo)?, z(hi)?);
    if !(z_min..=z_max).contains(&z0_target) {
        return Err(Error::UnreachableImpedance {
            target: z0_target,
            min: z_min,
            max: z_max,
        });
    }

    // z0 decreases with width. The zero-thickness pair has a sub-ohm step at
    // w = h, so targets inside that step settle on the boundary.
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let zm = z(mid)?;
        if (zm - z0_target).abs() < SYNTH_TOL_OHM * 1e-4 || (hi - lo) < 1e-15 * h {
            return Ok(mid);
        }
        if zm > z0_target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Open-end length extension ΔL of a strip of width `w`.
pub fn fringing_extension(w: f64, substrate: &Substrate) -> Result<f64> {
    let e = effective_permittivity(w, substrate)?;
    let u = w / substrate.h;
    Ok(0.412 * substrate.h * (e + 0.3) * (u + 0.264) / ((e - 0.258) * (u + 0.813)))
}

/// Width and length of a patch resonating at `f0`.
pub fn patch_dimensions(f0: f64, substrate: &Substrate) -> Result<PatchGeometry> {
    substrate.validate()?;
    ensure_positive("design frequency f0", f0)?;
    let er = substrate.epsilon_r;
    let w = C0 / (2.0 * f0) * (2.0 / (er + 1.0)).sqrt();
    let e_eff = effective_permittivity(w, substrate)?;
    let delta_l = fringing_extension(w, substrate)?;
    let l = C0 / (2.0 * f0 * e_eff.sqrt()) - 2.0 * delta_l;
    if l <= 0.0 {
        return Err(Error::ModelValidity(format!(
            "fringing extension {delta_l} m consumes the whole resonant length"
        )));
    }
    Ok(PatchGeometry { w, l, delta_l, f0 })
}

/// Guided wavelength `c / (f·√εr)`, the bulk-dielectric convention used for
/// the quarter-wave feed length.
pub fn guided_wavelength(f: f64, substrate: &Substrate) -> Result<f64> {
    substrate.validate()?;
    ensure_positive("frequency", f)?;
    Ok(C0 / (f * substrate.epsilon_r.sqrt()))
}

/// Wavelength on a line with the given effective permittivity.
pub fn line_wavelength(f: f64, eps_eff: f64) -> f64 {
    C0 / (f * eps_eff.sqrt())
}
