//! Two-port circuit algebra and frequency-domain analysis.

mod load;
mod sweep;
mod twoport;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{ensure_positive, Error, Result};

pub use load::{
    inset_scale, patch_load_two_slot, patch_load_two_slot_with, rlc_fit, ParallelRlc, RlcFit,
    SlotConductance,
};
pub use sweep::{
    bandwidth_at_level, bandwidth_minus_10db, linear_grid, sweep_s11, Bandwidth, DielectricLoss,
    Element, Load, Network, SweepPoint, SweepResult, MATCH_LEVEL_DB,
};
pub use twoport::TwoPort;

/// Complex impedance in ohms.
pub type ComplexImpedance = Complex64;

/// Lossless line chain matrix.
pub fn tline_two_port(z0: f64, eps_eff: f64, length: f64, f: f64) -> Result<TwoPort> {
    ensure_positive("line impedance", z0)?;
    ensure_positive("frequency", f)?;
    if !(eps_eff >= 1.0) {
        return Err(Error::Domain(format!(
            "eps_eff must be >= 1, got {eps_eff}"
        )));
    }
    if !(length.is_finite() && length >= 0.0) {
        return Err(Error::Domain(format!(
            "line length must be >= 0, got {length}"
        )));
    }
    Ok(TwoPort::line(z0, eps_eff, length, f))
}

pub fn cascade(first: &TwoPort, second: &TwoPort) -> Result<TwoPort> {
    first.cascade(second)
}

/// Series coupling capacitance followed by a shunt capacitance to ground.
pub fn gap_coupling_two_port(c_series: f64, c_shunt: f64, f: f64) -> Result<TwoPort> {
    ensure_positive("gap series capacitance", c_series)?;
    ensure_positive("frequency", f)?;
    if !(c_shunt.is_finite() && c_shunt >= 0.0) {
        return Err(Error::Domain(format!(
            "gap shunt capacitance must be >= 0, got {c_shunt}"
        )));
    }
    let w = 2.0 * PI * f;
    TwoPort::series(Complex64::new(0.0, -1.0 / (w * c_series)), f)
        .cascade(&TwoPort::shunt(Complex64::new(0.0, w * c_shunt), f))
}

/// `Γ = (Z − Zs)/(Z + Zs)`; an infinite `z` is an open circuit.
pub fn reflection_coefficient(z: Complex64, z_source: f64) -> Result<Complex64> {
    ensure_positive("source impedance", z_source)?;
    if z.re.is_infinite() || z.im.is_infinite() {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let den = z + z_source;
    if den.norm() == 0.0 {
        return Err(Error::Singular(format!("Z = -{z_source} ohm")));
    }
    Ok((z - z_source) / den)
}

/// Reflection at port 1 of `network` terminated in `load`, fed from a real
/// source impedance.
pub fn input_reflection(network: &TwoPort, load: Complex64, z_source: f64) -> Result<Complex64> {
    ensure_positive("source impedance", z_source)?;
    reflection_coefficient(network.input_impedance(load)?, z_source)
}

/// `20·log10|Γ|`.
pub fn s11_db(gamma: Complex64) -> f64 {
    20.0 * gamma.norm().log10()
}

/// Quarter-wave transformer impedance `√(Zs·ZL)`.
pub fn quarter_wave_z0(z_source: f64, z_load: f64) -> Result<f64> {
    ensure_positive("source impedance", z_source)?;
    ensure_positive("load impedance", z_load)?;
    Ok((z_source * z_load).sqrt())
}

/// Smith-chart position `(Re Γ, Im Γ)` of `z` against `z_ref`.
pub fn smith_coordinates(z: Complex64, z_ref: f64) -> Result<(f64, f64)> {
    let g = reflection_coefficient(z, z_ref)?;
    Ok((g.re, g.im))
}
