//! JSON configuration. Units are millimetres and gigahertz; everything is
//! converted to SI here and nowhere else.

use std::fmt;

use patchmatch::idc::IdcGeometry;
use patchmatch::matching::{InsetDimensions, MatchSpec, SweepSpec};
use patchmatch::substrate::{patch_dimensions, PatchGeometry, Substrate};
use serde::Deserialize;

const MM: f64 = 1e-3;
const GHZ: f64 = 1e9;
const PF: f64 = 1e-12;

/// A configuration problem, phrased with the offending field path.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

type Result<T> = std::result::Result<T, ConfigError>;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignConfig {
    pub substrate: Option<SubstrateBlock>,
    pub patch: Option<PatchBlock>,
    pub idc: Option<IdcBlock>,
    pub sweep: Option<SweepBlock>,
    #[serde(rename = "match")]
    pub matching: Option<MatchBlock>,
    pub inset: Option<InsetBlock>,
    pub designs: Option<Vec<DesignEntry>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubstrateBlock {
    pub epsilon_r: Option<f64>,
    pub h_mm: Option<f64>,
    pub tan_delta: Option<f64>,
    pub t_mm: Option<f64>,
    pub sigma: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatchBlock {
    pub f0_ghz: Option<f64>,
    pub w_mm: Option<f64>,
    pub l_mm: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdcBlock {
    pub finger_width_mm: Option<f64>,
    pub gap_mm: Option<f64>,
    pub terminal_width_mm: Option<f64>,
    pub finger_length_mm: Option<f64>,
    pub finger_length_bounds_mm: Option<[f64; 2]>,
    pub n_fingers: Option<u32>,
    pub n_fingers_range: Option<[u32; 2]>,
    pub shunt_c1_pf: Option<f64>,
    pub shunt_c2_pf: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepBlock {
    pub f_min_ghz: Option<f64>,
    pub f_max_ghz: Option<f64>,
    pub n_points: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatchBlock {
    pub z_source_ohm: Option<f64>,
    pub target_db: Option<f64>,
    pub feed_length_mm: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InsetBlock {
    pub patch_w_mm: Option<f64>,
    pub patch_l_mm: Option<f64>,
    pub feed_length_mm: Option<f64>,
    pub feed_width_mm: Option<f64>,
    pub slit_length_mm: Option<f64>,
    pub slit_width_mm: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DesignKind {
    Idc,
    QuarterWave,
    Inset,
    Bare,
}

impl DesignKind {
    pub fn label(self) -> &'static str {
        match self {
            Self::Idc => "idc",
            Self::QuarterWave => "quarter_wave",
            Self::Inset => "inset",
            Self::Bare => "bare",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignEntry {
    pub name: Option<String>,
    pub kind: DesignKind,
}

pub fn parse(text: &str) -> Result<DesignConfig> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        if path == "." {
            ConfigError(e.into_inner().to_string())
        } else {
            ConfigError(format!("{path}: {}", e.into_inner()))
        }
    })
}

fn required<T>(v: Option<T>, path: &str) -> Result<T> {
    v.ok_or_else(|| ConfigError(format!("{path}: missing required field")))
}

fn positive(v: f64, path: &str) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(ConfigError(format!(
            "{path}: must be a positive number, got {v}"
        )))
    }
}

fn non_negative(v: f64, path: &str) -> Result<f64> {
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(ConfigError(format!("{path}: must be >= 0, got {v}")))
    }
}

/// Settings shared by every subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct Common {
    pub substrate: Substrate,
    pub f0: f64,
    pub patch: PatchGeometry,
    pub patch_overridden: bool,
    pub z_source: f64,
    pub target_db: f64,
    pub feed_length: Option<f64>,
    pub sweep: SweepSpec,
}

impl DesignConfig {
    pub fn common(&self) -> Result<Common> {
        let sb = required(self.substrate.as_ref(), "substrate")?;
        let er = required(sb.epsilon_r, "substrate.epsilon_r")?;
        if !(er.is_finite() && er >= 1.0) {
            return Err(ConfigError(format!(
                "substrate.epsilon_r: must be >= 1, got {er}"
            )));
        }
        let h = positive(required(sb.h_mm, "substrate.h_mm")?, "substrate.h_mm")? * MM;
        let tan_delta = non_negative(sb.tan_delta.unwrap_or(0.0), "substrate.tan_delta")?;
        let t = non_negative(sb.t_mm.unwrap_or(0.035), "substrate.t_mm")? * MM;
        let sigma = positive(sb.sigma.unwrap_or(5.8e7), "substrate.sigma")?;
        let substrate = Substrate::new(er, h, tan_delta, t, sigma)
            .map_err(|e| ConfigError(format!("substrate: {e}")))?;

        let pb = required(self.patch.as_ref(), "patch")?;
        let f0 = positive(required(pb.f0_ghz, "patch.f0_ghz")?, "patch.f0_ghz")? * GHZ;
        let (patch, patch_overridden) = match (pb.w_mm, pb.l_mm) {
            (Some(w), Some(l)) => {
                let w = positive(w, "patch.w_mm")? * MM;
                let l = positive(l, "patch.l_mm")? * MM;
                let p = PatchGeometry::from_dimensions(w, l, f0, &substrate)
                    .map_err(|e| ConfigError(format!("patch: {e}")))?;
                (p, true)
            }
            (None, None) => (
                patch_dimensions(f0, &substrate).map_err(|e| ConfigError(format!("patch: {e}")))?,
                false,
            ),
            (Some(_), None) => {
                return Err(ConfigError(
                    "patch.l_mm: required when patch.w_mm is set".into(),
                ))
            }
            (None, Some(_)) => {
                return Err(ConfigError(
                    "patch.w_mm: required when patch.l_mm is set".into(),
                ))
            }
        };

        let mb = self.matching.clone().unwrap_or_default();
        let z_source = positive(mb.z_source_ohm.unwrap_or(50.0), "match.z_source_ohm")?;
        let target_db = mb.target_db.unwrap_or(-10.0);
        if !(target_db.is_finite() && target_db < 0.0) {
            return Err(ConfigError(format!(
                "match.target_db: must be negative, got {target_db}"
            )));
        }
        let feed_length = match mb.feed_length_mm {
            Some(l) => Some(non_negative(l, "match.feed_length_mm")? * MM),
            None => None,
        };

        let sweep = match &self.sweep {
            None => SweepSpec::around(f0),
            Some(s) => {
                let d = SweepSpec::around(f0);
                let f_min = s.f_min_ghz.map_or(Ok(d.f_min), |v| {
                    positive(v, "sweep.f_min_ghz").map(|v| v * GHZ)
                })?;
                let f_max = s.f_max_ghz.map_or(Ok(d.f_max), |v| {
                    positive(v, "sweep.f_max_ghz").map(|v| v * GHZ)
                })?;
                let n_points = s.n_points.unwrap_or(d.n_points);
                if n_points < 2 {
                    return Err(ConfigError(format!(
                        "sweep.n_points: must be >= 2, got {n_points}"
                    )));
                }
                if f_max <= f_min {
                    return Err(ConfigError(
                        "sweep.f_max_ghz: must exceed sweep.f_min_ghz".into(),
                    ));
                }
                SweepSpec {
                    f_min,
                    f_max,
                    n_points,
                }
            }
        };

        Ok(Common {
            substrate,
            f0,
            patch,
            patch_overridden,
            z_source,
            target_db,
            feed_length,
            sweep,
        })
    }

    /// Match search space, plus the fixed layout when both the finger count
    /// and length are pinned.
    pub fn match_spec(&self, common: &Common) -> Result<(MatchSpec, Option<IdcGeometry>)> {
        let mut spec =
            MatchSpec::new(common.f0, &common.substrate).map_err(|e| ConfigError(e.to_string()))?;
        spec.z_source = common.z_source;
        spec.target_db = common.target_db;
        spec.feed_length = common.feed_length;
        spec.sweep = common.sweep;

        let ib = self.idc.clone().unwrap_or_default();
        if let Some(v) = ib.finger_width_mm {
            spec.finger_width = positive(v, "idc.finger_width_mm")? * MM;
        }
        if let Some(v) = ib.gap_mm {
            spec.gap = positive(v, "idc.gap_mm")? * MM;
        }
        if let Some(v) = ib.terminal_width_mm {
            spec.terminal_width = non_negative(v, "idc.terminal_width_mm")? * MM;
        }
        spec.shunt_caps = (
            non_negative(ib.shunt_c1_pf.unwrap_or(0.0), "idc.shunt_c1_pf")? * PF,
            non_negative(ib.shunt_c2_pf.unwrap_or(0.0), "idc.shunt_c2_pf")? * PF,
        );
        if let Some([lo, hi]) = ib.finger_length_bounds_mm {
            let lo = positive(lo, "idc.finger_length_bounds_mm[0]")?;
            let hi = positive(hi, "idc.finger_length_bounds_mm[1]")?;
            if lo >= hi {
                return Err(ConfigError(
                    "idc.finger_length_bounds_mm: lower bound must be below upper".into(),
                ));
            }
            spec.finger_length_bounds = (lo * MM, hi * MM);
        }
        match (ib.n_fingers, ib.n_fingers_range) {
            (Some(_), Some(_)) => {
                return Err(ConfigError(
                    "idc.n_fingers_range: cannot be combined with idc.n_fingers".into(),
                ))
            }
            (Some(n), None) => {
                if n < 2 {
                    return Err(ConfigError(format!("idc.n_fingers: must be >= 2, got {n}")));
                }
                spec.n_fingers = vec![n];
            }
            (None, Some([lo, hi])) => {
                if lo < 2 || hi < lo {
                    return Err(ConfigError(format!(
                        "idc.n_fingers_range: [{lo}, {hi}] must satisfy 2 <= lo <= hi"
                    )));
                }
                spec.n_fingers = (lo..=hi).collect();
            }
            (None, None) => {}
        }
        spec.validate().map_err(|e| ConfigError(e.to_string()))?;

        let fixed = match ib.finger_length_mm {
            None => None,
            Some(l) => {
                let l = positive(l, "idc.finger_length_mm")? * MM;
                let n = ib.n_fingers.ok_or_else(|| {
                    ConfigError("idc.n_fingers: required when idc.finger_length_mm is set".into())
                })?;
                let g = IdcGeometry {
                    finger_width: spec.finger_width,
                    gap: spec.gap,
                    finger_length: l,
                    n_fingers: n,
                    terminal_width: spec.terminal_width,
                };
                g.validate().map_err(|e| ConfigError(format!("idc: {e}")))?;
                Some(g)
            }
        };
        Ok((spec, fixed))
    }

    pub fn inset_dimensions(&self) -> Result<InsetDimensions> {
        let d = InsetDimensions::reference();
        let Some(b) = &self.inset else { return Ok(d) };
        let get = |v: Option<f64>, default: f64, path: &str| {
            v.map_or(Ok(default), |v| positive(v, path).map(|v| v * MM))
        };
        Ok(InsetDimensions {
            patch_w: get(b.patch_w_mm, d.patch_w, "inset.patch_w_mm")?,
            patch_l: get(b.patch_l_mm, d.patch_l, "inset.patch_l_mm")?,
            feed_length: get(b.feed_length_mm, d.feed_length, "inset.feed_length_mm")?,
            feed_width: get(b.feed_width_mm, d.feed_width, "inset.feed_width_mm")?,
            slit_length: match b.slit_length_mm {
                Some(v) => non_negative(v, "inset.slit_length_mm")? * MM,
                None => d.slit_length,
            },
            slit_width: get(b.slit_width_mm, d.slit_width, "inset.slit_width_mm")?,
        })
    }

    /// Named designs for `compare`; at least two are required.
    pub fn designs(&self) -> Result<Vec<(String, DesignKind)>> {
        let list = required(self.designs.as_ref(), "designs")?;
        if list.len() < 2 {
            return Err(ConfigError(format!(
                "designs: at least 2 entries required, got {}",
                list.len()
            )));
        }
        Ok(list
            .iter()
            .map(|d| {
                (
                    d.name.clone().unwrap_or_else(|| d.kind.label().to_string()),
                    d.kind,
                )
            })
            .collect())
    }
}
