//! Declarative feed networks and frequency sweeps.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::load::{patch_load_two_slot_with, ParallelRlc, SlotConductance};
use super::{gap_coupling_two_port, reflection_coefficient, s11_db, TwoPort};
use crate::constants::C0;
use crate::error::{ensure_positive, Error, Result};
use crate::idc::{IdcGeometry, IdcLumped};
use crate::substrate::{PatchGeometry, Substrate};

/// Dielectric loss attached to a line section.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DielectricLoss {
    pub epsilon_r: f64,
    pub tan_delta: f64,
}

impl DielectricLoss {
    /// Attenuation in Np/m of a quasi-TEM line, `k0·εr(εeff−1)tanδ / (2√εeff(εr−1))`.
    pub fn attenuation(&self, f: f64, eps_eff: f64) -> f64 {
        if self.epsilon_r <= 1.0 {
            return 0.0;
        }
        let k0 = 2.0 * PI * f / C0;
        k0 * self.epsilon_r * (eps_eff - 1.0) * self.tan_delta
            / (2.0 * eps_eff.sqrt() * (self.epsilon_r - 1.0))
    }
}

/// One two-port element of a feed chain, listed from source to load.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Element {
    Line {
        z0: f64,
        eps_eff: f64,
        length: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        loss: Option<DielectricLoss>,
    },
    Idc {
        geometry: IdcGeometry,
        eps_eff: f64,
        sigma: f64,
        shunt_caps: (f64, f64),
    },
    Gap {
        c_series: f64,
        c_shunt: f64,
    },
}

impl Element {
    pub fn two_port(&self, f: f64) -> Result<TwoPort> {
        match self {
            Element::Line {
                z0,
                eps_eff,
                length,
                loss,
            } => Ok(match loss {
                Some(l) => {
                    TwoPort::lossy_line(*z0, *eps_eff, l.attenuation(f, *eps_eff), *length, f)
                }
                None => TwoPort::line(*z0, *eps_eff, *length, f),
            }),
            Element::Idc {
                geometry,
                eps_eff,
                sigma,
                shunt_caps,
            } => IdcLumped::from_geometry(geometry, *eps_eff, f, *sigma, *shunt_caps)?.two_port(f),
            Element::Gap { c_series, c_shunt } => gap_coupling_two_port(*c_series, *c_shunt, f),
        }
    }
}

/// Termination at the far end of the chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Load {
    /// Two-slot line model of the patch, with its impedance multiplied by
    /// `scale` (1 for an edge feed, `cos²(πy0/L)` for an inset).
    TwoSlotPatch {
        patch: PatchGeometry,
        substrate: Substrate,
        #[serde(default)]
        conductance: SlotConductance,
        scale: f64,
    },
    Rlc(ParallelRlc),
    Resistor {
        r: f64,
    },
    /// Frequency-independent impedance.
    Fixed {
        z: Complex64,
    },
}

impl Load {
    pub fn edge_fed_patch(patch: PatchGeometry, substrate: Substrate) -> Self {
        Load::TwoSlotPatch {
            patch,
            substrate,
            conductance: SlotConductance::default(),
            scale: 1.0,
        }
    }

    pub fn impedance(&self, f: f64) -> Result<Complex64> {
        match self {
            Load::TwoSlotPatch {
                patch,
                substrate,
                conductance,
                scale,
            } => Ok(patch_load_two_slot_with(patch, substrate, f, *conductance)? * *scale),
            Load::Rlc(rlc) => Ok(rlc.impedance(f)),
            Load::Resistor { r } => Ok(Complex64::new(*r, 0.0)),
            Load::Fixed { z } => Ok(*z),
        }
    }
}

/// Source, feed chain and load.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Network {
    pub elements: Vec<Element>,
    pub load: Load,
    pub z_source: f64,
}

impl Network {
    pub fn new(elements: Vec<Element>, load: Load, z_source: f64) -> Self {
        Self {
            elements,
            load,
            z_source,
        }
    }

    /// The patch connected straight to the source.
    pub fn bare(patch: PatchGeometry, substrate: Substrate, z_source: f64) -> Self {
        Self::new(Vec::new(), Load::edge_fed_patch(patch, substrate), z_source)
    }

    pub fn chain_at(&self, f: f64) -> Result<TwoPort> {
        self.elements
            .iter()
            .try_fold(TwoPort::identity(f), |acc, e| acc.cascade(&e.two_port(f)?))
    }

    /// Input impedance seen by the source.
    pub fn input_impedance(&self, f: f64) -> Result<Complex64> {
        let zl = self.load.impedance(f)?;
        self.chain_at(f)?.input_impedance(zl)
    }

    pub fn evaluate(&self, f: f64) -> Result<SweepPoint> {
        let zin = self.input_impedance(f)?;
        Ok(SweepPoint {
            f,
            s11: reflection_coefficient(zin, self.z_source)?,
            zin,
        })
    }
}

/// One frequency of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub f: f64,
    pub s11: Complex64,
    pub zin: Complex64,
}

impl SweepPoint {
    pub fn s11_db(&self) -> f64 {
        s11_db(self.s11)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub points: Vec<SweepPoint>,
    pub f_min: f64,
    pub f_max: f64,
    pub n_points: usize,
    /// Reference impedance of `s11`.
    pub z_ref: f64,
}

/// `n` evenly spaced frequencies, ending exactly on `f_max`.
pub fn linear_grid(f_min: f64, f_max: f64, n: usize) -> Result<Vec<f64>> {
    ensure_positive("f_min", f_min)?;
    ensure_positive("f_max", f_max)?;
    if f_min >= f_max {
        return Err(Error::Domain(format!(
            "f_min {f_min} must be below f_max {f_max}"
        )));
    }
    if n < 2 {
        return Err(Error::Domain(format!(
            "a sweep needs at least 2 points, got {n}"
        )));
    }
    let step = (f_max - f_min) / (n - 1) as f64;
    Ok((0..n)
        .map(|i| {
            if i + 1 == n {
                f_max
            } else {
                f_min + step * i as f64
            }
        })
        .collect())
}

impl SweepResult {
    /// Sweeps an arbitrary one-port impedance.
    pub fn from_impedance<F>(zin: F, f_min: f64, f_max: f64, n: usize, z_ref: f64) -> Result<Self>
    where
        F: Fn(f64) -> Result<Complex64> + Sync,
    {
        ensure_positive("reference impedance", z_ref)?;
        let eval = |f: f64| -> Result<SweepPoint> {
            let z = zin(f)?;
            Ok(SweepPoint {
                f,
                s11: reflection_coefficient(z, z_ref)?,
                zin: z,
            })
        };
        Self::collect(eval, f_min, f_max, n, z_ref)
    }

    fn collect<E>(eval: E, f_min: f64, f_max: f64, n: usize, z_ref: f64) -> Result<Self>
    where
        E: Fn(f64) -> Result<SweepPoint> + Sync,
    {
        let grid = linear_grid(f_min, f_max, n)?;
        let with_context = |f: f64| {
            eval(f).map_err(|e| Error::AtFrequency {
                freq: f,
                source: Box::new(e),
            })
        };
        #[cfg(feature = "parallel")]
        let points = {
            use rayon::prelude::*;
            grid.into_par_iter()
                .map(with_context)
                .collect::<Result<Vec<_>>>()?
        };
        #[cfg(not(feature = "parallel"))]
        let points = grid
            .into_iter()
            .map(with_context)
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            points,
            f_min,
            f_max,
            n_points: n,
            z_ref,
        })
    }

    /// Index and value of the smallest |S11|.
    pub fn minimum(&self) -> (usize, &SweepPoint) {
        self.points
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.s11.norm().total_cmp(&b.1.s11.norm()))
            .expect("sweeps hold at least two points")
    }

    /// The sample closest to `f`.
    pub fn nearest(&self, f: f64) -> &SweepPoint {
        self.points
            .iter()
            .min_by(|a, b| (a.f - f).abs().total_cmp(&(b.f - f).abs()))
            .expect("sweeps hold at least two points")
    }
}

/// S11 sweep of `network` over `n` linearly spaced points.
pub fn sweep_s11(network: &Network, f_min: f64, f_max: f64, n: usize) -> Result<SweepResult> {
    ensure_positive("source impedance", network.z_source)?;
    SweepResult::collect(|f| network.evaluate(f), f_min, f_max, n, network.z_source)
}

/// Edges of the −10 dB band around the deepest point of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bandwidth {
    pub f_low: f64,
    pub f_high: f64,
    pub width: f64,
    /// True when the band runs into either end of the sweep.
    pub truncated: bool,
}

pub const MATCH_LEVEL_DB: f64 = -10.0;

/// Contiguous band with S11 ≤ −10 dB around the global minimum. Edges are
/// interpolated linearly in dB between neighbouring samples.
pub fn bandwidth_minus_10db(sweep: &SweepResult) -> Result<Bandwidth> {
    bandwidth_at_level(sweep, MATCH_LEVEL_DB)
}

pub fn bandwidth_at_level(sweep: &SweepResult, level_db: f64) -> Result<Bandwidth> {
    let db: Vec<f64> = sweep.points.iter().map(SweepPoint::s11_db).collect();
    let (imin, _) = sweep.minimum();
    if !(db[imin] <= level_db) {
        return Err(Error::NoBand);
    }
    let f = |i: usize| sweep.points[i].f;
    let cross = |inside: usize, outside: usize| {
        let (d_in, d_out) = (db[inside], db[outside]);
        if d_in.is_infinite() {
            return f(inside);
        }
        let t = (level_db - d_in) / (d_out - d_in);
        f(inside) + t * (f(outside) - f(inside))
    };

    let mut truncated = false;
    let mut lo = imin;
    while lo > 0 && db[lo - 1] <= level_db {
        lo -= 1;
    }
    let f_low = if lo == 0 {
        truncated = true;
        f(0)
    } else {
        cross(lo, lo - 1)
    };
    let last = db.len() - 1;
    let mut hi = imin;
    while hi < last && db[hi + 1] <= level_db {
        hi += 1;
    }
    let f_high = if hi == last {
        truncated = true;
        f(last)
    } else {
        cross(hi, hi + 1)
    };
    Ok(Bandwidth {
        f_low,
        f_high,
        width: f_high - f_low,
        truncated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matched_rlc_sweep(q: f64, n: usize) -> SweepResult {
        let rlc = ParallelRlc::from_resonance(50.0, 2.45e9, q);
        let span = 2.45e9 * 3.0 / q;
        SweepResult::from_impedance(
            |f| Ok(rlc.impedance(f)),
            2.45e9 - span,
            2.45e9 + span,
            n,
            50.0,
        )
        .unwrap()
    }

    #[test]
    fn grid_endpoints() {
        let g = linear_grid(1e9, 2e9, 3).unwrap();
        assert_eq!(g, vec![1e9, 1.5e9, 2e9]);
        assert!(linear_grid(2e9, 1e9, 3).is_err());
        assert!(linear_grid(1e9, 2e9, 1).is_err());
    }

    #[test]
    fn bandwidth_closed_form_rlc() {
        // matched parallel RLC: |Γ|² = x²/(4+x²), x = Q(f/f0 − f0/f); −10 dB at |x| = 2/3,
        // so the band is exactly 2·f0/(3Q) wide.
        for q in [10.0, 20.0, 35.0, 50.0, 75.0, 100.0] {
            let bw = bandwidth_minus_10db(&matched_rlc_sweep(q, 2001)).unwrap();
            let exact = 2.0 * 2.45e9 / (3.0 * q);
            assert!((bw.width - exact).abs() / exact < 0.02, "Q={q}");
            assert!(!bw.truncated);
        }
    }

    #[test]
    fn deeper_match_never_narrows_band() {
        let mut prev = 0.0;
        // same resonator, reflection scaled down uniformly
        let rlc = ParallelRlc::from_resonance(150.0, 2.45e9, 30.0);
        for alpha in [0.6, 0.5, 0.4, 0.3, 0.2, 0.1, 0.0] {
            let z = |f: f64| {
                let g = alpha * (rlc.impedance(f) - 50.0) / (rlc.impedance(f) + 50.0);
                Ok(50.0 * (1.0 + g) / (1.0 - g))
            };
            let s = SweepResult::from_impedance(z, 2.2e9, 2.7e9, 2001, 50.0).unwrap();
            let bw = bandwidth_minus_10db(&s).unwrap().width;
            assert!(bw >= prev);
            prev = bw;
        }
    }

    #[test]
    fn no_band_is_an_error() {
        let s = SweepResult::from_impedance(|_| Ok(Complex64::new(200.0, 0.0)), 1e9, 2e9, 11, 50.0)
            .unwrap();
        assert_eq!(bandwidth_minus_10db(&s), Err(Error::NoBand));
    }

    #[test]
    fn sweep_is_ordered_and_passive() {
        let rlc = ParallelRlc::from_resonance(120.0, 2.45e9, 25.0);
        let net = Network::new(
            vec![Element::Line {
                z0: 75.0,
                eps_eff: 3.0,
                length: 12e-3,
                loss: None,
            }],
            Load::Rlc(rlc),
            50.0,
        );
        let s = sweep_s11(&net, 2e9, 3e9, 101).unwrap();
        assert_eq!(s.points.len(), 101);
        assert!(s.points.windows(2).all(|w| w[0].f < w[1].f));
        assert!(s.points.iter().all(|p| p.s11.norm() <= 1.0 + 1e-9));
    }

    #[test]
    fn synthetic_match_minimum_at_design_frequency() {
        let rlc = ParallelRlc::from_resonance(50.0, 2.45e9, 30.0);
        let net = Network::new(Vec::new(), Load::Rlc(rlc), 50.0);
        let s = sweep_s11(&net, 2.3e9, 2.6e9, 301).unwrap();
        let (_, p) = s.minimum();
        assert!((p.f - 2.45e9).abs() <= 1e6 + 1.0);
    }

    #[test]
    fn point_failure_carries_frequency() {
        let err = SweepResult::from_impedance(
            |f| {
                if f > 1.5e9 {
                    Err(Error::Numerical("boom".into()))
                } else {
                    Ok(Complex64::new(50.0, 0.0))
                }
            },
            1e9,
            2e9,
            3,
            50.0,
        )
        .unwrap_err();
        assert!(matches!(err, Error::AtFrequency { .. }));
    }

    #[test]
    fn dielectric_loss_attenuates() {
        let loss = DielectricLoss {
            epsilon_r: 4.32,
            tan_delta: 0.018,
        };
        let a = loss.attenuation(2.45e9, 3.27);
        assert!(a > 0.0 && a < 2.0);
        let net = Network::new(
            vec![Element::Line {
                z0: 50.0,
                eps_eff: 3.27,
                length: 0.1,
                loss: Some(loss),
            }],
            Load::Fixed {
                z: Complex64::new(f64::INFINITY, 0.0),
            },
            50.0,
        );
        let p = net.evaluate(2.45e9).unwrap();
        assert!(p.s11.norm() < 1.0);
    }
}
