//! Browser bindings. Every entry point takes a JSON object of panel inputs
//! (millimetres, gigahertz) and returns a JSON string.

use patchmatch::idc::IdcGeometry;
use patchmatch::matching::{evaluate_layout, synthesize_match, MatchSpec, SweepSpec};
use patchmatch::network::{sweep_s11, Load, Network, SweepResult};
use patchmatch::radiation::RadiationConductance;
use patchmatch::report::{design_report, MatchReport};
use patchmatch::substrate::{patch_dimensions, PatchGeometry, Substrate};
use serde::{Deserialize, Serialize};
use wasm_bindgen::prelude::*;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Inputs {
    pub epsilon_r: f64,
    pub h_mm: f64,
    #[serde(default)]
    pub tan_delta: f64,
    #[serde(default = "copper")]
    pub sigma: f64,
    pub f0_ghz: f64,
    pub w_mm: Option<f64>,
    pub l_mm: Option<f64>,
    pub n_fingers: Option<u32>,
    pub finger_length_mm: Option<f64>,
    pub f_min_ghz: Option<f64>,
    pub f_max_ghz: Option<f64>,
    pub n_points: Option<usize>,
}

fn copper() -> f64 {
    5.8e7
}

#[derive(Debug, Clone, Serialize)]
pub struct CurvePoint {
    pub f_ghz: f64,
    pub s11_db: f64,
    pub gamma_re: f64,
    pub gamma_im: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepOutput {
    pub min_s11_db: f64,
    pub f_at_min_ghz: f64,
    pub curve: Vec<CurvePoint>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MatchOutput {
    pub report: MatchReport,
    pub sweep: SweepOutput,
}

type Out = Result<String, String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

struct Setup {
    substrate: Substrate,
    patch: PatchGeometry,
    f0: f64,
    sweep: SweepSpec,
}

fn setup(inputs: &Inputs) -> Result<Setup, String> {
    let substrate = Substrate::new(
        inputs.epsilon_r,
        inputs.h_mm * 1e-3,
        inputs.tan_delta,
        35e-6,
        inputs.sigma,
    )
    .map_err(err)?;
    let f0 = inputs.f0_ghz * 1e9;
    let patch = match (inputs.w_mm, inputs.l_mm) {
        (Some(w), Some(l)) => {
            PatchGeometry::from_dimensions(w * 1e-3, l * 1e-3, f0, &substrate).map_err(err)?
        }
        _ => patch_dimensions(f0, &substrate).map_err(err)?,
    };
    let mut sweep = SweepSpec::around(f0);
    if let Some(v) = inputs.f_min_ghz {
        sweep.f_min = v * 1e9;
    }
    if let Some(v) = inputs.f_max_ghz {
        sweep.f_max = v * 1e9;
    }
    if let Some(n) = inputs.n_points {
        sweep.n_points = n;
    }
    Ok(Setup {
        substrate,
        patch,
        f0,
        sweep,
    })
}

fn parse(json: &str) -> Result<Inputs, String> {
    serde_json::from_str(json).map_err(err)
}

fn curve(sweep: &SweepResult) -> SweepOutput {
    let (_, min) = sweep.minimum();
    SweepOutput {
        min_s11_db: min.s11_db(),
        f_at_min_ghz: min.f / 1e9,
        curve: sweep
            .points
            .iter()
            .map(|p| CurvePoint {
                f_ghz: p.f / 1e9,
                s11_db: p.s11_db().max(-300.0),
                gamma_re: p.s11.re,
                gamma_im: p.s11.im,
            })
            .collect(),
    }
}

pub fn design_json(json: &str) -> Out {
    let inputs = parse(json)?;
    let s = setup(&inputs)?;
    let overridden = inputs.w_mm.is_some() && inputs.l_mm.is_some();
    let r = design_report(
        s.f0,
        &s.substrate,
        50.0,
        overridden.then_some(s.patch),
        RadiationConductance::default(),
    )
    .map_err(err)?;
    serde_json::to_string(&r).map_err(err)
}

pub fn sweep_json(json: &str) -> Out {
    let inputs = parse(json)?;
    let s = setup(&inputs)?;
    let network = match (inputs.n_fingers, inputs.finger_length_mm) {
        (Some(n), Some(l)) => {
            let spec = MatchSpec {
                sweep: s.sweep,
                ..MatchSpec::new(s.f0, &s.substrate).map_err(err)?
            };
            let g = IdcGeometry {
                n_fingers: n,
                finger_length: l * 1e-3,
                ..IdcGeometry::reference()
            };
            evaluate_layout(
                &Load::edge_fed_patch(s.patch, s.substrate),
                &s.substrate,
                &spec,
                &g,
            )
            .map_err(err)?
            .network
        }
        _ => Network::bare(s.patch, s.substrate, 50.0),
    };
    let r = sweep_s11(&network, s.sweep.f_min, s.sweep.f_max, s.sweep.n_points).map_err(err)?;
    serde_json::to_string(&curve(&r)).map_err(err)
}

pub fn match_json(json: &str) -> Out {
    let inputs = parse(json)?;
    let s = setup(&inputs)?;
    let spec = MatchSpec {
        sweep: s.sweep,
        ..MatchSpec::new(s.f0, &s.substrate).map_err(err)?
    };
    let m = synthesize_match(&s.patch, &s.substrate, &spec).map_err(err)?;
    let out = MatchOutput {
        report: MatchReport::new(&m, &spec, true),
        sweep: curve(&m.sweep),
    };
    serde_json::to_string(&out).map_err(err)
}

/// Patch dimensions, line widths, resonant impedance and directivity.
#[wasm_bindgen]
pub fn design(inputs: &str) -> Result<String, JsError> {
    design_json(inputs).map_err(|e| JsError::new(&e))
}

/// S11 curve and reflection coefficients of the bare patch, or of the IDC
/// layout when `n_fingers` and `finger_length_mm` are given.
#[wasm_bindgen]
pub fn sweep(inputs: &str) -> Result<String, JsError> {
    sweep_json(inputs).map_err(|e| JsError::new(&e))
}

/// Runs the finger count/length search and returns the report and curve.
#[wasm_bindgen(js_name = matchIdc)]
pub fn match_idc(inputs: &str) -> Result<String, JsError> {
    match_json(inputs).map_err(|e| JsError::new(&e))
}
