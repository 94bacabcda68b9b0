//! One-port load models for the patch.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::sweep::SweepResult;
use super::TwoPort;
use crate::error::{ensure_positive, Error, Result};
use crate::radiation::{mutual_conductance, self_conductance, slot_admittance};
use crate::substrate::{effective_permittivity, z0_microstrip, PatchGeometry, Substrate};

/// Conductance assigned to each radiating slot in the line model.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlotConductance {
    /// `G1 + G12`, so the resonant resistance tracks `1/(2(G1+G12))`.
    #[default]
    WithMutual,
    /// `G1` alone.
    SelfOnly,
}

/// Input impedance of the patch as two slots joined by a patch-wide line.
///
/// Slot 2 is carried to slot 1 through a section of length `L` whose
/// characteristic impedance and permittivity are those of a strip of width
/// `W`, then placed in parallel with slot 1.
pub fn patch_load_two_slot(
    patch: &PatchGeometry,
    substrate: &Substrate,
    f: f64,
) -> Result<Complex64> {
    patch_load_two_slot_with(patch, substrate, f, SlotConductance::default())
}

pub fn patch_load_two_slot_with(
    patch: &PatchGeometry,
    substrate: &Substrate,
    f: f64,
    conductance: SlotConductance,
) -> Result<Complex64> {
    ensure_positive("frequency", f)?;
    let slot = slot_admittance(patch.w, patch.delta_l, f)?;
    let g = match conductance {
        SlotConductance::WithMutual => {
            self_conductance(patch.w, f)? + mutual_conductance(patch.w, patch.l, f)?
        }
        SlotConductance::SelfOnly => self_conductance(patch.w, f)?,
    };
    let y_slot = Complex64::new(g, slot.b);

    let zc = z0_microstrip(patch.w, substrate)?;
    let e_eff = effective_permittivity(patch.w, substrate)?;
    let body = TwoPort::line(zc, e_eff, patch.l, f);
    let y_far = body.input_impedance(y_slot.inv())?.inv();
    let y_in = y_slot + y_far;
    if y_in.norm() == 0.0 {
        return Err(Error::Singular("patch input admittance vanishes".into()));
    }
    Ok(y_in.inv())
}

/// Parallel RLC resonator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParallelRlc {
    pub r: f64,
    pub l: f64,
    pub c: f64,
}

impl ParallelRlc {
    /// Resonator with resistance `r`, resonance `f0` and unloaded Q `q`.
    pub fn from_resonance(r: f64, f0: f64, q: f64) -> Self {
        let w0 = 2.0 * PI * f0;
        let c = q / (w0 * r);
        Self {
            r,
            l: 1.0 / (w0 * w0 * c),
            c,
        }
    }

    pub fn impedance(&self, f: f64) -> Complex64 {
        let w = 2.0 * PI * f;
        Complex64::new(1.0 / self.r, w * self.c - 1.0 / (w * self.l)).inv()
    }

    pub fn resonance(&self) -> f64 {
        1.0 / (2.0 * PI * (self.l * self.c).sqrt())
    }

    pub fn q(&self) -> f64 {
        self.r * (self.c / self.l).sqrt()
    }
}

/// A parallel RLC fitted around a resonance of a swept impedance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RlcFit {
    pub rlc: ParallelRlc,
    pub f_resonance: f64,
}

/// Fits a parallel RLC to the first upward zero crossing of the input
/// susceptance in `sweep`.
///
/// `R = 1/G` and `f_r` come from linear interpolation at the crossing,
/// `C = (dB/df)/(4π)` from the local slope and `L = 1/((2πf_r)²C)`.
pub fn rlc_fit(sweep: &SweepResult) -> Result<RlcFit> {
    let pts = &sweep.points;
    let y: Vec<Complex64> = pts.iter().map(|p| p.zin.inv()).collect();
    for i in 0..pts.len().saturating_sub(1) {
        let (b0, b1) = (y[i].im, y[i + 1].im);
        if b0 < 0.0 && b1 >= 0.0 {
            let (f0, f1) = (pts[i].f, pts[i + 1].f);
            let t = -b0 / (b1 - b0);
            let f_r = f0 + t * (f1 - f0);
            let g = y[i].re + t * (y[i + 1].re - y[i].re);
            let slope = (b1 - b0) / (f1 - f0);
            if !(g > 0.0 && slope > 0.0) {
                return Err(Error::NoResonance(format!(
                    "crossing near {f_r:.6e} Hz is not a parallel resonance"
                )));
            }
            let c = slope / (4.0 * PI);
            let w = 2.0 * PI * f_r;
            let rlc = ParallelRlc {
                r: 1.0 / g,
                l: 1.0 / (w * w * c),
                c,
            };
            return Ok(RlcFit {
                rlc,
                f_resonance: f_r,
            });
        }
    }
    Err(Error::NoResonance(format!(
        "input susceptance never crosses zero in [{:.6e}, {:.6e}] Hz",
        sweep.f_min, sweep.f_max
    )))
}

/// Inset-feed resistance scaling `cos²(π·y0/L)` for a feed point `y0` in
/// from the radiating edge.
pub fn inset_scale(inset_depth: f64, patch_length: f64) -> f64 {
    (PI * inset_depth / patch_length).cos().powi(2)
}
