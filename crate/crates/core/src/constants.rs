//! Physical constants in SI units.

use std::f64::consts::PI;

/// Speed of light in vacuum (m/s).
pub const C0: f64 = 299_792_458.0;

/// Free-space wave impedance used throughout the radiation formulas (ohm).
pub const ETA0: f64 = 376.730;

/// Vacuum permeability (H/m).
pub const MU0: f64 = 4.0e-7 * PI;

/// Free-space wavelength at `f` hertz.
#[inline]
pub fn free_space_wavelength(f: f64) -> f64 {
    C0 / f
}

/// Free-space wavenumber at `f` hertz.
#[inline]
pub fn free_space_wavenumber(f: f64) -> f64 {
    2.0 * PI * f / C0
}
