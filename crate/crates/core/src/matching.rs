//! Automatic interdigital-capacitor matching and the reference feed designs
//! it is compared against.
//!
//! The matching chain is source → 50 Ω feed line → interdigital capacitor →
//! patch. For every allowed finger count the finger length is scanned on a
//! coarse grid and then refined by golden-section search around the best
//! grid point; the overall winner minimizes |S11| at the design frequency.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};
use crate::golden::golden_section;
use crate::idc::{IdcGeometry, IdcLumped};
use crate::network::{
    inset_scale, quarter_wave_z0, sweep_s11, Element, Load, Network, SlotConductance, SweepResult,
};
use crate::radiation::resonant_input_impedance;
use crate::substrate::{
    effective_permittivity, guided_wavelength, line_wavelength, synthesize_width, MicrostripLine,
    PatchGeometry, Substrate,
};

/// Frequency span of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub f_min: f64,
    pub f_max: f64,
    pub n_points: usize,
}

impl SweepSpec {
    /// ±10 % around `f0`.
    pub fn around(f0: f64) -> Self {
        Self {
            f_min: 0.9 * f0,
            f_max: 1.1 * f0,
            n_points: 401,
        }
    }
}

/// Search space and target of the matching synthesis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchSpec {
    pub f0: f64,
    pub z_source: f64,
    /// Inclusive finger-length range (m).
    pub finger_length_bounds: (f64, f64),
    pub n_fingers: Vec<u32>,
    pub finger_width: f64,
    pub gap: f64,
    pub terminal_width: f64,
    pub target_db: f64,
    /// Feed-line length between source and capacitor; `None` means λg/4.
    pub feed_length: Option<f64>,
    pub shunt_caps: (f64, f64),
    pub sweep: SweepSpec,
    /// Golden-section stopping width on the finger length (m).
    pub length_tol: f64,
    /// Grid points per finger count before refinement.
    pub coarse_points: usize,
}

impl MatchSpec {
    /// Finger length in [0.2 mm, λg/8], two to eight fingers, 1 mm fingers
    /// on a 0.1 mm gap, −10 dB target.
    pub fn new(f0: f64, substrate: &Substrate) -> Result<Self> {
        let lg = guided_wavelength(f0, substrate)?;
        Ok(Self {
            f0,
            z_source: 50.0,
            finger_length_bounds: (0.2e-3, lg / 8.0),
            n_fingers: (2..=8).collect(),
            finger_width: 1e-3,
            gap: 0.1e-3,
            terminal_width: 0.64e-3,
            target_db: -10.0,
            feed_length: None,
            shunt_caps: (0.0, 0.0),
            sweep: SweepSpec::around(f0),
            length_tol: 1e-6,
            coarse_points: 25,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let cfg = |m: String| Err(Error::Config(m));
        if !(self.f0.is_finite() && self.f0 > 0.0) {
            return cfg(format!("f0 must be positive, got {}", self.f0));
        }
        if !(self.z_source.is_finite() && self.z_source > 0.0) {
            return cfg(format!("z_source must be positive, got {}", self.z_source));
        }
        let (lo, hi) = self.finger_length_bounds;
        if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo < hi) {
            return cfg(format!(
                "finger length bounds ({lo}, {hi}) are empty or non-positive"
            ));
        }
        if self.n_fingers.is_empty() {
            return cfg("no finger counts allowed".into());
        }
        if let Some(n) = self.n_fingers.iter().find(|&&n| n < 2) {
            return cfg(format!("finger count {n} is below 2"));
        }
        if !(self.target_db < 0.0) {
            return cfg(format!(
                "target_db must be negative, got {}",
                self.target_db
            ));
        }
        if !(self.length_tol > 0.0) || self.coarse_points < 3 {
            return cfg("length_tol must be positive and coarse_points at least 3".into());
        }
        if let Some(l) = self.feed_length {
            if !(l.is_finite() && l >= 0.0) {
                return cfg(format!("feed length must be >= 0, got {l}"));
            }
        }
        Ok(())
    }

    fn geometry(&self, n_fingers: u32, finger_length: f64) -> IdcGeometry {
        IdcGeometry {
            finger_width: self.finger_width,
            gap: self.gap,
            finger_length,
            n_fingers,
            terminal_width: self.terminal_width,
        }
    }

    fn sorted_fingers(&self) -> Vec<u32> {
        let mut n = self.n_fingers.clone();
        n.sort_unstable();
        n.dedup();
        n
    }
}

/// One objective evaluation made during the search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub n_fingers: u32,
    pub finger_length: f64,
    pub s11_db: f64,
    /// Improved on everything evaluated before it for the same finger count.
    pub accepted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchResult {
    pub geometry: IdcGeometry,
    /// Element values at the design frequency.
    pub lumped: IdcLumped,
    pub s11_at_f0: f64,
    pub achieved: bool,
    pub network: Network,
    pub sweep: SweepResult,
    pub trace: Vec<TraceEntry>,
}

/// The 50 Ω (or `z_source`) microstrip feeding the capacitor.
pub fn feed_line(substrate: &Substrate, spec: &MatchSpec) -> Result<MicrostripLine> {
    let w = synthesize_width(spec.z_source, substrate)?;
    let length = match spec.feed_length {
        Some(l) => l,
        None => guided_wavelength(spec.f0, substrate)? / 4.0,
    };
    MicrostripLine::new(w, length, substrate)
}

fn line_element(line: &MicrostripLine) -> Element {
    Element::Line {
        z0: line.z0,
        eps_eff: line.eps_eff,
        length: line.length,
        loss: None,
    }
}

/// Feed line → capacitor → `load`.
pub fn idc_network(
    load: Load,
    substrate: &Substrate,
    spec: &MatchSpec,
    geometry: &IdcGeometry,
) -> Result<Network> {
    let feed = feed_line(substrate, spec)?;
    Ok(Network::new(
        vec![
            line_element(&feed),
            Element::Idc {
                geometry: *geometry,
                eps_eff: effective_permittivity(spec.finger_width, substrate)?,
                sigma: substrate.sigma,
                shunt_caps: spec.shunt_caps,
            },
        ],
        load,
        spec.z_source,
    ))
}

/// |S11| at f0 as a function of the capacitor layout, with the load
/// evaluated once.
struct Objective<'a> {
    spec: &'a MatchSpec,
    template: Network,
}

impl<'a> Objective<'a> {
    fn new(load: &Load, substrate: &Substrate, spec: &'a MatchSpec) -> Result<Self> {
        let z = load.impedance(spec.f0)?;
        let placeholder = spec.geometry(spec.sorted_fingers()[0], spec.finger_length_bounds.0);
        let template = idc_network(Load::Fixed { z }, substrate, spec, &placeholder)?;
        Ok(Self { spec, template })
    }

    fn eval(&self, n_fingers: u32, finger_length: f64) -> Result<f64> {
        let mut net = self.template.clone();
        if let Some(Element::Idc { geometry, .. }) = net.elements.last_mut() {
            *geometry = self.spec.geometry(n_fingers, finger_length);
        }
        Ok(net.evaluate(self.spec.f0)?.s11_db())
    }
}

struct Candidate {
    n_fingers: u32,
    best_length: f64,
    best_db: f64,
    trace: Vec<TraceEntry>,
}

fn search_fingers(obj: &Objective, n: u32) -> Result<Candidate> {
    let spec = obj.spec;
    let (lo, hi) = spec.finger_length_bounds;
    let m = spec.coarse_points;
    let mut trace: Vec<TraceEntry> = Vec::new();
    let mut best = (f64::INFINITY, lo);
    let record = |x: f64, v: f64, trace: &mut Vec<TraceEntry>, best: &mut (f64, f64)| {
        let accepted = v < best.0;
        if accepted {
            *best = (v, x);
        }
        trace.push(TraceEntry {
            n_fingers: n,
            finger_length: x,
            s11_db: v,
            accepted,
        });
    };

    let grid: Vec<f64> = (0..m)
        .map(|i| {
            if i + 1 == m {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (m - 1) as f64
            }
        })
        .collect();
    let mut i_best = 0;
    for (i, &x) in grid.iter().enumerate() {
        let v = obj.eval(n, x)?;
        if v < best.0 {
            i_best = i;
        }
        record(x, v, &mut trace, &mut best);
    }

    let a = grid[i_best.saturating_sub(1)];
    let b = grid[(i_best + 1).min(m - 1)];
    let mut failure = None;
    let (_, probes) = golden_section(
        |x| match obj.eval(n, x) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::INFINITY
            }
        },
        a,
        b,
        spec.length_tol,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    for p in probes {
        record(p.x, p.value, &mut trace, &mut best);
    }
    Ok(Candidate {
        n_fingers: n,
        best_length: best.1,
        best_db: best.0,
        trace,
    })
}

/// Objectives closer than this are treated as equal for tie-breaking.
const TIE_DB: f64 = 1e-12;

fn better(c: &Candidate, incumbent: &Candidate) -> bool {
    if c.best_db < incumbent.best_db - TIE_DB {
        return true;
    }
    if c.best_db > incumbent.best_db + TIE_DB {
        return false;
    }
    (c.n_fingers, c.best_length) < (incumbent.n_fingers, incumbent.best_length)
}

/// Tunes finger count and length to minimize |S11(f0)| for an arbitrary load.
pub fn synthesize_match_load(
    load: &Load,
    substrate: &Substrate,
    spec: &MatchSpec,
) -> Result<MatchResult> {
    spec.validate()?;
    substrate.validate()?;
    let obj = Objective::new(load, substrate, spec)?;
    let fingers = spec.sorted_fingers();

    #[cfg(feature = "parallel")]
    let candidates: Vec<Candidate> = {
        use rayon::prelude::*;
        fingers
            .par_iter()
            .map(|&n| search_fingers(&obj, n))
            .collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let candidates: Vec<Candidate> = fingers
        .iter()
        .map(|&n| search_fingers(&obj, n))
        .collect::<Result<_>>()?;

    let winner = candidates
        .iter()
        .reduce(|inc, c| if better(c, inc) { c } else { inc })
        .expect("finger set validated non-empty");

    let geometry = spec.geometry(winner.n_fingers, winner.best_length);
    let mut result = evaluate_layout(load, substrate, spec, &geometry)?;
    result.trace = candidates.into_iter().flat_map(|c| c.trace).collect();
    Ok(result)
}

/// Analyzes one capacitor layout without searching; the trace is empty.
pub fn evaluate_layout(
    load: &Load,
    substrate: &Substrate,
    spec: &MatchSpec,
    geometry: &IdcGeometry,
) -> Result<MatchResult> {
    spec.validate()?;
    let network = idc_network(load.clone(), substrate, spec, geometry)?;
    let s11_at_f0 = network.evaluate(spec.f0)?.s11_db();
    let sweep = sweep_s11(
        &network,
        spec.sweep.f_min,
        spec.sweep.f_max,
        spec.sweep.n_points,
    )?;
    let lumped = IdcLumped::from_geometry(
        geometry,
        effective_permittivity(spec.finger_width, substrate)?,
        spec.f0,
        substrate.sigma,
        spec.shunt_caps,
    )?;
    Ok(MatchResult {
        geometry: *geometry,
        lumped,
        s11_at_f0,
        achieved: s11_at_f0 <= spec.target_db,
        network,
        sweep,
        trace: Vec::new(),
    })
}

/// Checks that the patch model resonates within ±20 % of `f0`.
pub fn check_resonance_window(
    patch: &PatchGeometry,
    substrate: &Substrate,
    f0: f64,
) -> Result<f64> {
    let load = Load::edge_fed_patch(*patch, *substrate);
    let n = 81;
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..n {
        let f = f0 * (0.8 + 0.4 * i as f64 / (n - 1) as f64);
        let b = load.impedance(f)?.inv().im;
        if let Some((pf, pb)) = prev {
            if pb < 0.0 && b >= 0.0 {
                return Ok(pf + (f - pf) * (-pb / (b - pb)));
            }
        }
        prev = Some((f, b));
    }
    Err(Error::NoResonance(format!(
        "the patch model does not resonate within [{:.4e}, {:.4e}] Hz",
        0.8 * f0,
        1.2 * f0
    )))
}

/// IDC matching of an edge-fed patch.
pub fn synthesize_match(
    patch: &PatchGeometry,
    substrate: &Substrate,
    spec: &MatchSpec,
) -> Result<MatchResult> {
    spec.validate()?;
    check_resonance_window(patch, substrate, spec.f0)?;
    synthesize_match_load(&Load::edge_fed_patch(*patch, *substrate), substrate, spec)
}

/// Brute-force scan of `total_points` (finger count, finger length) pairs
/// spread evenly over the allowed counts. Returns the best layout and its
/// |S11(f0)| in dB.
pub fn exhaustive_match(
    load: &Load,
    substrate: &Substrate,
    spec: &MatchSpec,
    total_points: usize,
) -> Result<(IdcGeometry, f64)> {
    spec.validate()?;
    let obj = Objective::new(load, substrate, spec)?;
    let fingers = spec.sorted_fingers();
    let per = (total_points / fingers.len()).max(2);
    let (lo, hi) = spec.finger_length_bounds;
    let mut best: Option<(IdcGeometry, f64)> = None;
    for &n in &fingers {
        for i in 0..per {
            let x = lo + (hi - lo) * i as f64 / (per - 1) as f64;
            let v = obj.eval(n, x)?;
            if best.as_ref().is_none_or(|(_, b)| v < *b) {
                best = Some((spec.geometry(n, x), v));
            }
        }
    }
    Ok(best.expect("non-empty grid"))
}

/// Quarter-wave transformer between the source and a real load.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuarterWaveDesign {
    pub z_load: f64,
    pub line: MicrostripLine,
    /// λg/4 using the line's own effective permittivity (this is `line.length`).
    pub length_eff: f64,
    /// λg/4 using the bulk permittivity, `c/(4f√εr)`.
    pub length_bulk: f64,
}

impl QuarterWaveDesign {
    pub fn element(&self) -> Element {
        line_element(&self.line)
    }
}

/// Transformer for a real load `r_load`.
pub fn quarter_wave_for_load(
    r_load: f64,
    substrate: &Substrate,
    f0: f64,
    z_source: f64,
) -> Result<QuarterWaveDesign> {
    ensure_positive("design frequency", f0)?;
    let z0 = quarter_wave_z0(z_source, r_load)?;
    let w = synthesize_width(z0, substrate)?;
    let eps_eff = effective_permittivity(w, substrate)?;
    let length_eff = line_wavelength(f0, eps_eff) / 4.0;
    let line = MicrostripLine::new(w, length_eff, substrate)?;
    Ok(QuarterWaveDesign {
        z_load: r_load,
        line,
        length_eff,
        length_bulk: guided_wavelength(f0, substrate)? / 4.0,
    })
}

/// Transformer sized from the patch's resonant edge resistance
/// `1/(2(G1+G12))`.
pub fn quarter_wave_design(
    patch: &PatchGeometry,
    substrate: &Substrate,
    f0: f64,
    z_source: f64,
) -> Result<QuarterWaveDesign> {
    let r = resonant_input_impedance(patch.w, patch.l, f0)?;
    quarter_wave_for_load(r, substrate, f0, z_source)
}

/// Adjusts the patch length so the two-slot model resonates exactly at
/// `f0`, keeping the width.
pub fn tune_patch_length(
    patch: &PatchGeometry,
    substrate: &Substrate,
    f0: f64,
) -> Result<PatchGeometry> {
    let b = |l: f64| -> Result<f64> {
        let p = PatchGeometry { l, ..*patch };
        Ok(Load::edge_fed_patch(p, *substrate).impedance(f0)?.inv().im)
    };
    // Longer patches resonate lower: susceptance at f0 rises with L.
    let (mut lo, mut hi) = (0.8 * patch.l, 1.2 * patch.l);
    if !(b(lo)? < 0.0 && b(hi)? > 0.0) {
        return Err(Error::NoResonance(format!(
            "no patch length in [{lo:.4e}, {hi:.4e}] m resonates at {f0:.4e} Hz"
        )));
    }
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if b(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(PatchGeometry {
        l: 0.5 * (lo + hi),
        f0,
        ..*patch
    })
}

/// Dimensions of the inset-fed reference antenna.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InsetDimensions {
    pub patch_w: f64,
    pub patch_l: f64,
    pub feed_length: f64,
    pub feed_width: f64,
    pub slit_length: f64,
    pub slit_width: f64,
}

impl InsetDimensions {
    /// The slit-matched comparison antenna.
    pub fn reference() -> Self {
        Self {
            patch_w: 35e-3,
            patch_l: 30.22e-3,
            feed_length: 14.72e-3,
            feed_width: 2.9438e-3,
            slit_length: 11.14e-3,
            slit_width: 0.574e-3,
        }
    }
}

/// Inset-fed patch: a feed line into the patch impedance scaled by
/// `cos²(π·slit/L)`.
pub fn reference_inset_design(
    substrate: &Substrate,
    dims: &InsetDimensions,
    f0: f64,
    z_source: f64,
) -> Result<Network> {
    let patch = PatchGeometry::from_dimensions(dims.patch_w, dims.patch_l, f0, substrate)?;
    let feed = MicrostripLine::new(dims.feed_width, dims.feed_length, substrate)?;
    Ok(Network::new(
        vec![line_element(&feed)],
        Load::TwoSlotPatch {
            patch,
            substrate: *substrate,
            conductance: SlotConductance::default(),
            scale: inset_scale(dims.slit_length, dims.patch_l),
        },
        z_source,
    ))
}

/// A resistive load, handy for checking the optimizer on trivial targets.
pub fn resistive_load(r: f64) -> Load {
    Load::Fixed {
        z: Complex64::new(r, 0.0),
    }
}
