//! Result emission: sweep CSV, Touchstone one-port files, Smith-chart point
//! lists and the JSON design/match summaries.
//!
//! Numbers are written with Rust's shortest round-trip float formatting, so
//! every value re-parses to the identical `f64`.

use std::io::{self, BufRead, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::compare::REPORT_SCHEMA_VERSION;
use crate::error::{Error, Result};
use crate::idc::IdcGeometry;
use crate::matching::{quarter_wave_design, MatchResult, MatchSpec};
use crate::network::{bandwidth_minus_10db, smith_coordinates, SweepResult};
use crate::radiation::{
    directivity_estimate, mutual_conductance, self_conductance, slot_admittance, to_db,
    RadiationConductance,
};
use crate::substrate::{
    effective_permittivity, guided_wavelength, patch_dimensions, synthesize_width, PatchGeometry,
    Substrate,
};

pub const CSV_HEADER: &str = "freq_hz,s11_db,s11_re,s11_im,zin_re_ohm,zin_im_ohm";
pub const SMITH_HEADER: &str = "freq_hz,gamma_re,gamma_im";

pub fn write_sweep_csv<W: Write>(sweep: &SweepResult, mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for p in &sweep.points {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            p.f,
            p.s11_db(),
            p.s11.re,
            p.s11.im,
            p.zin.re,
            p.zin.im
        )?;
    }
    Ok(())
}

/// Touchstone v1 one-port, real/imaginary pairs, frequencies in hertz.
pub fn write_touchstone<W: Write>(
    sweep: &SweepResult,
    comments: &[String],
    mut out: W,
) -> io::Result<()> {
    for c in comments {
        writeln!(out, "! {c}")?;
    }
    writeln!(out, "# Hz S RI R {}", sweep.z_ref)?;
    for p in &sweep.points {
        writeln!(out, "{} {} {}", p.f, p.s11.re, p.s11.im)?;
    }
    Ok(())
}

pub fn write_smith<W: Write>(sweep: &SweepResult, mut out: W) -> io::Result<()> {
    writeln!(out, "{SMITH_HEADER}")?;
    for p in &sweep.points {
        let (x, y) = smith_coordinates(p.zin, sweep.z_ref)
            .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e.to_string()))?;
        writeln!(out, "{},{},{}", p.f, x, y)?;
    }
    Ok(())
}

/// Parsed one-port Touchstone data.
#[derive(Debug, Clone, PartialEq)]
pub struct OnePortData {
    pub z_ref: f64,
    pub points: Vec<(f64, Complex64)>,
}

/// Reads a Touchstone v1 one-port file (`RI`, `MA` or `DB` pairs, any
/// frequency unit).
pub fn read_touchstone<R: BufRead>(input: R) -> Result<OnePortData> {
    let mut unit = 1e9;
    let mut format = "MA".to_string();
    let mut z_ref = 50.0;
    let mut seen_option = false;
    let mut points = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| Error::Parse {
            line: lineno,
            message: e.to_string(),
        })?;
        let line = line.split('!').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse {
            line: lineno,
            message,
        };
        if let Some(opts) = line.strip_prefix('#') {
            if seen_option {
                continue;
            }
            seen_option = true;
            let toks: Vec<String> = opts
                .split_whitespace()
                .map(str::to_ascii_uppercase)
                .collect();
            let mut it = toks.iter();
            while let Some(t) = it.next() {
                match t.as_str() {
                    "HZ" => unit = 1.0,
                    "KHZ" => unit = 1e3,
                    "MHZ" => unit = 1e6,
                    "GHZ" => unit = 1e9,
                    "S" => {}
                    "Y" | "Z" | "G" | "H" => {
                        return Err(err(format!("parameter type {t} is not supported")))
                    }
                    "RI" | "MA" | "DB" => format = t.clone(),
                    "R" => {
                        z_ref = it
                            .next()
                            .and_then(|v| v.parse().ok())
                            .ok_or_else(|| err("missing reference resistance".into()))?;
                    }
                    other => return Err(err(format!("unknown option {other}"))),
                }
            }
            continue;
        }
        let nums = line
            .split_whitespace()
            .map(|t| t.parse::<f64>().map_err(|e| err(format!("{t}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        if nums.len() != 3 {
            return Err(err(format!(
                "expected 3 values for a one-port row, found {}",
                nums.len()
            )));
        }
        let (a, b) = (nums[1], nums[2]);
        let s = match format.as_str() {
            "RI" => Complex64::new(a, b),
            "MA" => Complex64::from_polar(a, b.to_radians()),
            _ => Complex64::from_polar(10f64.powf(a / 20.0), b.to_radians()),
        };
        points.push((nums[0] * unit, s));
    }
    Ok(OnePortData { z_ref, points })
}

/// Reads a sweep CSV written by [`write_sweep_csv`].
pub fn read_sweep_csv<R: BufRead>(input: R) -> Result<Vec<[f64; 6]>> {
    let mut rows = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line.map_err(|e| Error::Parse {
            line: i + 1,
            message: e.to_string(),
        })?;
        if i == 0 {
            if line != CSV_HEADER {
                return Err(Error::Parse {
                    line: 1,
                    message: format!("unexpected header {line:?}"),
                });
            }
            continue;
        }
        let vals = line
            .split(',')
            .map(|t| {
                t.parse::<f64>().map_err(|e| Error::Parse {
                    line: i + 1,
                    message: format!("{t}: {e}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let row: [f64; 6] = vals.try_into().map_err(|v: Vec<f64>| Error::Parse {
            line: i + 1,
            message: format!("expected 6 fields, found {}", v.len()),
        })?;
        rows.push(row);
    }
    Ok(rows)
}

/// Patch dimensions as synthesized from the design frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthesizedPatch {
    pub w_mm: f64,
    pub l_mm: f64,
    pub delta_l_mm: f64,
    pub l_eff_mm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignReport {
    pub schema_version: u32,
    pub f0_ghz: f64,
    pub substrate: Substrate,
    pub synthesized: SynthesizedPatch,
    /// Dimensions used for the impedance analysis (overrides or synthesized).
    pub analyzed_w_mm: f64,
    pub analyzed_l_mm: f64,
    pub eps_eff_patch: f64,
    pub z_source_ohm: f64,
    pub feed_width_mm: f64,
    pub eps_eff_feed: f64,
    pub lambda_g_mm: f64,
    pub quarter_wave_length_mm: f64,
    pub slot_g_s: f64,
    pub slot_b_s: f64,
    pub g1_s: f64,
    pub g12_s: f64,
    pub zin_resonant_ohm: f64,
    pub quarter_wave_z0_ohm: f64,
    pub quarter_wave_width_mm: Option<f64>,
    pub directivity_db: f64,
}

/// Design-frequency summary of a patch on `substrate`. `patch_override`
/// replaces the synthesized W and L in the impedance analysis.
pub fn design_report(
    f0: f64,
    substrate: &Substrate,
    z_source: f64,
    patch_override: Option<PatchGeometry>,
    policy: RadiationConductance,
) -> Result<DesignReport> {
    let synth = patch_dimensions(f0, substrate)?;
    let patch = patch_override.unwrap_or(synth);
    let w50 = synthesize_width(z_source, substrate)?;
    let lg = guided_wavelength(f0, substrate)?;
    let slot = slot_admittance(patch.w, patch.delta_l, f0)?;
    let g1 = self_conductance(patch.w, f0)?;
    let g12 = mutual_conductance(patch.w, patch.l, f0)?;
    let zin = crate::radiation::resistance_from_conductances(g1, g12)?;
    let qw = quarter_wave_design(&patch, substrate, f0, z_source);
    Ok(DesignReport {
        schema_version: REPORT_SCHEMA_VERSION,
        f0_ghz: f0 / 1e9,
        substrate: *substrate,
        synthesized: SynthesizedPatch {
            w_mm: synth.w * 1e3,
            l_mm: synth.l * 1e3,
            delta_l_mm: synth.delta_l * 1e3,
            l_eff_mm: synth.l_eff() * 1e3,
        },
        analyzed_w_mm: patch.w * 1e3,
        analyzed_l_mm: patch.l * 1e3,
        eps_eff_patch: effective_permittivity(patch.w, substrate)?,
        z_source_ohm: z_source,
        feed_width_mm: w50 * 1e3,
        eps_eff_feed: effective_permittivity(w50, substrate)?,
        lambda_g_mm: lg * 1e3,
        quarter_wave_length_mm: lg / 4.0 * 1e3,
        slot_g_s: slot.g,
        slot_b_s: slot.b,
        g1_s: g1,
        g12_s: g12,
        zin_resonant_ohm: zin,
        quarter_wave_z0_ohm: (z_source * zin).sqrt(),
        quarter_wave_width_mm: qw.ok().map(|q| q.line.w * 1e3),
        directivity_db: to_db(directivity_estimate(
            patch.w,
            f0,
            policy.evaluate(patch.w, patch.l, f0)?,
        )?),
    })
}

impl DesignReport {
    pub fn to_text(&self) -> String {
        let s = &self.substrate;
        let mut lines = vec![
            format!(
                "substrate: er={} h={} mm tan_delta={} t={} mm sigma={:e} S/m",
                s.epsilon_r,
                s.h * 1e3,
                s.tan_delta,
                s.t * 1e3,
                s.sigma
            ),
            format!("design frequency: {} GHz", self.f0_ghz),
            format!(
                "synthesized patch: W={:.3} mm L={:.3} mm dL={:.4} mm Leff={:.3} mm",
                self.synthesized.w_mm,
                self.synthesized.l_mm,
                self.synthesized.delta_l_mm,
                self.synthesized.l_eff_mm
            ),
            format!(
                "analyzed patch: W={:.3} mm L={:.3} mm eps_eff={:.4}",
                self.analyzed_w_mm, self.analyzed_l_mm, self.eps_eff_patch
            ),
            format!(
                "{} ohm line: w={:.4} mm eps_eff={:.4}",
                self.z_source_ohm, self.feed_width_mm, self.eps_eff_feed
            ),
            format!(
                "guided wavelength: {:.3} mm (quarter {:.3} mm)",
                self.lambda_g_mm, self.quarter_wave_length_mm
            ),
            format!(
                "slot admittance: {:.5} + j{:.5} S",
                self.slot_g_s, self.slot_b_s
            ),
            format!("G1={:.6e} S  G12={:.6e} S", self.g1_s, self.g12_s),
            format!("resonant input impedance: {:.2} ohm", self.zin_resonant_ohm),
            format!(
                "quarter-wave transformer: {:.3} ohm{}",
                self.quarter_wave_z0_ohm,
                self.quarter_wave_width_mm
                    .map_or(String::new(), |w| format!(", w={w:.4} mm"))
            ),
            format!("directivity estimate: {:.3} dB", self.directivity_db),
        ];
        lines.push(String::new());
        lines.join("\n")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExhaustiveCheck {
    pub points: usize,
    pub best_s11_db: f64,
    pub best_n_fingers: u32,
    pub best_finger_length_mm: f64,
    /// Optimizer result minus grid best (dB); ≤ 0 means the optimizer won.
    pub optimizer_minus_grid_db: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchReport {
    pub schema_version: u32,
    pub f0_ghz: f64,
    pub z_source_ohm: f64,
    pub target_db: f64,
    pub optimized: bool,
    pub n_fingers: u32,
    pub finger_length_mm: f64,
    pub finger_width_mm: f64,
    pub gap_mm: f64,
    pub cs_pf: f64,
    pub rs_ohm: f64,
    pub s11_at_f0_db: f64,
    pub achieved: bool,
    pub bandwidth_mhz: Option<f64>,
    pub evaluations: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exhaustive: Option<ExhaustiveCheck>,
}

impl MatchReport {
    pub fn new(result: &MatchResult, spec: &MatchSpec, optimized: bool) -> Self {
        let g: &IdcGeometry = &result.geometry;
        Self {
            schema_version: REPORT_SCHEMA_VERSION,
            f0_ghz: spec.f0 / 1e9,
            z_source_ohm: spec.z_source,
            target_db: spec.target_db,
            optimized,
            n_fingers: g.n_fingers,
            finger_length_mm: g.finger_length * 1e3,
            finger_width_mm: g.finger_width * 1e3,
            gap_mm: g.gap * 1e3,
            cs_pf: result.lumped.c_series * 1e12,
            rs_ohm: result.lumped.r_series,
            s11_at_f0_db: result.s11_at_f0.max(crate::compare::DB_FLOOR),
            achieved: result.achieved,
            bandwidth_mhz: bandwidth_minus_10db(&result.sweep)
                .ok()
                .map(|b| b.width / 1e6),
            evaluations: result.trace.len(),
            exhaustive: None,
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "IDC: N={} finger length={:.4} mm (w={} mm, gap={} mm){}\n\
             Cs={:.4} pF  Rs={:.5} ohm\n\
             S11(f0={} GHz)={:.3} dB target {} dB -> {}\n",
            self.n_fingers,
            self.finger_length_mm,
            self.finger_width_mm,
            self.gap_mm,
            if self.optimized { "" } else { " [fixed]" },
            self.cs_pf,
            self.rs_ohm,
            self.f0_ghz,
            self.s11_at_f0_db,
            self.target_db,
            if self.achieved {
                "achieved"
            } else {
                "not achieved"
            },
        );
        match self.bandwidth_mhz {
            Some(b) => s.push_str(&format!("-10 dB bandwidth: {b:.2} MHz\n")),
            None => s.push_str("-10 dB bandwidth: none\n"),
        }
        if let Some(x) = &self.exhaustive {
            s.push_str(&format!(
                "grid check ({} points): best {:.4} dB at N={} L={:.4} mm; optimizer - grid = {:+.4} dB\n",
                x.points, x.best_s11_db, x.best_n_fingers, x.best_finger_length_mm, x.optimizer_minus_grid_db
            ));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::ParallelRlc;

    fn sweep(n: usize) -> SweepResult {
        let rlc = ParallelRlc::from_resonance(80.0, 2.45e9, 20.0);
        SweepResult::from_impedance(|f| Ok(rlc.impedance(f)), 2.2e9, 2.7e9, n, 50.0).unwrap()
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        write_sweep_csv(&sweep(2), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(
            lines[0],
            "freq_hz,s11_db,s11_re,s11_im,zin_re_ohm,zin_im_ohm"
        );
    }

    #[test]
    fn touchstone_matches_csv() {
        let s = sweep(41);
        let (mut csv, mut ts) = (Vec::new(), Vec::new());
        write_sweep_csv(&s, &mut csv).unwrap();
        write_touchstone(&s, &["test".into()], &mut ts).unwrap();
        let text = String::from_utf8(ts.clone()).unwrap();
        assert!(text.lines().any(|l| l == "# Hz S RI R 50"));
        let rows = read_sweep_csv(csv.as_slice()).unwrap();
        let data = read_touchstone(ts.as_slice()).unwrap();
        assert_eq!(data.z_ref, 50.0);
        assert_eq!(rows.len(), data.points.len());
        for (row, (f, s11)) in rows.iter().zip(&data.points) {
            assert_eq!(row[0], *f);
            assert!((row[2] - s11.re).abs() <= 1e-12 * row[2].abs());
            assert!((row[3] - s11.im).abs() <= 1e-12 * row[3].abs());
        }
    }

    #[test]
    fn touchstone_formats() {
        let text = "! c\n# GHz S MA R 75\n1.0 0.5 90\n";
        let d = read_touchstone(text.as_bytes()).unwrap();
        assert_eq!(d.z_ref, 75.0);
        assert_eq!(d.points[0].0, 1e9);
        assert!((d.points[0].1 - Complex64::new(0.0, 0.5)).norm() < 1e-15);
        assert!(read_touchstone("# Hz S RI R 50\n1 2\n".as_bytes()).is_err());
    }

    #[test]
    fn smith_file() {
        let mut buf = Vec::new();
        write_smith(&sweep(3), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("freq_hz,gamma_re,gamma_im\n"));
        assert_eq!(text.lines().count(), 4);
    }

    #[test]
    fn design_report_anchors() {
        let s = Substrate::epoxy_reference();
        let r = design_report(2.45e9, &s, 50.0, None, RadiationConductance::default()).unwrap();
        assert!((r.synthesized.w_mm - 37.5).abs() / 37.5 < 0.01);
        assert!((r.feed_width_mm - 2.9438).abs() / 2.9438 < 0.03);
        assert!((r.lambda_g_mm - 58.91).abs() / 58.91 < 0.005);
        let json = serde_json::to_string(&r).unwrap();
        let back: DesignReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn design_report_vacuum() {
        let mut s = Substrate::epoxy_reference();
        s.epsilon_r = 1.0;
        let r = design_report(2.45e9, &s, 50.0, None, RadiationConductance::default()).unwrap();
        assert_eq!(r.eps_eff_patch, 1.0);
        assert_eq!(r.eps_eff_feed, 1.0);
    }
}
