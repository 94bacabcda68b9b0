use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use patchmatch::compare::{analyze_design, comparison_report};
use patchmatch::matching::{
    evaluate_layout, exhaustive_match, quarter_wave_design, reference_inset_design,
    synthesize_match, tune_patch_length, MatchResult,
};
use patchmatch::network::{sweep_s11, Load, Network, SweepResult};
use patchmatch::radiation::RadiationConductance;
use patchmatch::report::{
    design_report, write_smith, write_sweep_csv, write_touchstone, ExhaustiveCheck, MatchReport,
};
use patchmatch::substrate::PatchGeometry;
use serde::Serialize;

use crate::config::{Common, ConfigError, DesignConfig, DesignKind};
use crate::Format;

const EXHAUSTIVE_POINTS: usize = 10_000;

fn emit<T: Serialize>(value: &T, text: impl FnOnce() -> String, format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(value)? + "\n",
        Format::Text => text(),
    })
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut out = create(path)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()
        .with_context(|| format!("cannot write {}", path.display()))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create directory {}", dir.display()))
}

/// Writes `<stem>.csv`, `<stem>.s1p` and `<stem>_smith.csv`.
fn write_sweep_files(
    sweep: &SweepResult,
    dir: &Path,
    stem: &str,
    comments: &[String],
) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let csv = dir.join(format!("{stem}.csv"));
    let ts = dir.join(format!("{stem}.s1p"));
    let smith = dir.join(format!("{stem}_smith.csv"));
    let ctx = |p: &Path| format!("cannot write {}", p.display());

    let mut out = create(&csv)?;
    write_sweep_csv(sweep, &mut out).with_context(|| ctx(&csv))?;
    out.flush().with_context(|| ctx(&csv))?;
    let mut out = create(&ts)?;
    write_touchstone(sweep, comments, &mut out).with_context(|| ctx(&ts))?;
    out.flush().with_context(|| ctx(&ts))?;
    let mut out = create(&smith)?;
    write_smith(sweep, &mut out).with_context(|| ctx(&smith))?;
    out.flush().with_context(|| ctx(&smith))?;
    Ok(vec![csv, ts, smith])
}

fn header(common: &Common) -> Vec<String> {
    let s = &common.substrate;
    vec![
        format!("patchmatch {}", env!("CARGO_PKG_VERSION")),
        format!(
            "patch W={} mm L={} mm f0={} GHz er={} h={} mm",
            common.patch.w * 1e3,
            common.patch.l * 1e3,
            common.f0 / 1e9,
            s.epsilon_r,
            s.h * 1e3
        ),
    ]
}

pub fn design(cfg: &DesignConfig, out_dir: Option<&Path>, format: Format) -> Result<String> {
    let common = cfg.common()?;
    let patch = common.patch_overridden.then_some(common.patch);
    let report = design_report(
        common.f0,
        &common.substrate,
        common.z_source,
        patch,
        RadiationConductance::default(),
    )?;
    if let Some(dir) = out_dir {
        ensure_dir(dir)?;
        write_json(&report, &dir.join("design.json"))?;
    }
    emit(&report, || report.to_text(), format)
}

fn run_match(cfg: &DesignConfig, common: &Common) -> Result<(MatchResult, MatchReport)> {
    let (spec, fixed) = cfg.match_spec(common)?;
    let (result, optimized) = match fixed {
        Some(g) => {
            let load = Load::edge_fed_patch(common.patch, common.substrate);
            (evaluate_layout(&load, &common.substrate, &spec, &g)?, false)
        }
        None => (
            synthesize_match(&common.patch, &common.substrate, &spec)?,
            true,
        ),
    };
    Ok((result.clone(), MatchReport::new(&result, &spec, optimized)))
}

pub fn matching(
    cfg: &DesignConfig,
    out_dir: &Path,
    format: Format,
    exhaustive: bool,
) -> Result<String> {
    let common = cfg.common()?;
    let (result, mut report) = run_match(cfg, &common)?;
    if exhaustive {
        let (spec, _) = cfg.match_spec(&common)?;
        let load = Load::edge_fed_patch(common.patch, common.substrate);
        let (g, best) = exhaustive_match(&load, &common.substrate, &spec, EXHAUSTIVE_POINTS)?;
        report.exhaustive = Some(ExhaustiveCheck {
            points: EXHAUSTIVE_POINTS,
            best_s11_db: best,
            best_n_fingers: g.n_fingers,
            best_finger_length_mm: g.finger_length * 1e3,
            optimizer_minus_grid_db: result.s11_at_f0 - best,
        });
    }
    ensure_dir(out_dir)?;
    write_json(&report, &out_dir.join("match.json"))?;
    let mut comments = header(&common);
    comments.push(format!(
        "IDC N={} finger length={} mm",
        result.geometry.n_fingers,
        result.geometry.finger_length * 1e3
    ));
    write_sweep_files(&result.sweep, out_dir, "match", &comments)?;
    emit(&report, || report.to_text(), format)
}

#[derive(Serialize)]
struct SweepSummary {
    schema_version: u32,
    n_points: usize,
    f_min_hz: f64,
    f_max_hz: f64,
    min_s11_db: f64,
    f_at_min_hz: f64,
    files: Vec<String>,
}

pub fn sweep(cfg: &DesignConfig, out_dir: &Path, format: Format) -> Result<String> {
    let common = cfg.common()?;
    let network = if cfg.idc.is_some() {
        let (spec, fixed) = cfg.match_spec(&common)?;
        let g = fixed.ok_or_else(|| {
            ConfigError("idc.finger_length_mm: sweep needs an explicit capacitor layout".into())
        })?;
        patchmatch::matching::idc_network(
            Load::edge_fed_patch(common.patch, common.substrate),
            &common.substrate,
            &spec,
            &g,
        )?
    } else {
        Network::bare(common.patch, common.substrate, common.z_source)
    };
    let s = common.sweep;
    let result = sweep_s11(&network, s.f_min, s.f_max, s.n_points)?;
    let files = write_sweep_files(&result, out_dir, "sweep", &header(&common))?;
    let (_, min) = result.minimum();
    let summary = SweepSummary {
        schema_version: patchmatch::compare::REPORT_SCHEMA_VERSION,
        n_points: result.points.len(),
        f_min_hz: s.f_min,
        f_max_hz: s.f_max,
        min_s11_db: min.s11_db(),
        f_at_min_hz: min.f,
        files: files.iter().map(|p| p.display().to_string()).collect(),
    };
    emit(
        &summary,
        || {
            format!(
                "{} points, minimum {:.3} dB at {} GHz\n{}\n",
                summary.n_points,
                summary.min_s11_db,
                summary.f_at_min_hz / 1e9,
                summary.files.join("\n")
            )
        },
        format,
    )
}

fn design_network(
    cfg: &DesignConfig,
    common: &Common,
    kind: DesignKind,
) -> Result<(Network, PatchGeometry)> {
    let sub = common.substrate;
    Ok(match kind {
        DesignKind::Idc => (run_match(cfg, common)?.0.network, common.patch),
        DesignKind::QuarterWave => {
            let tuned = tune_patch_length(&common.patch, &sub, common.f0)?;
            let q = quarter_wave_design(&tuned, &sub, common.f0, common.z_source)?;
            let net = Network::new(
                vec![q.element()],
                Load::edge_fed_patch(tuned, sub),
                common.z_source,
            );
            (net, tuned)
        }
        DesignKind::Inset => {
            let dims = cfg.inset_dimensions()?;
            let net = reference_inset_design(&sub, &dims, common.f0, common.z_source)?;
            let patch =
                PatchGeometry::from_dimensions(dims.patch_w, dims.patch_l, common.f0, &sub)?;
            (net, patch)
        }
        DesignKind::Bare => (
            Network::bare(common.patch, sub, common.z_source),
            common.patch,
        ),
    })
}

pub fn compare(cfg: &DesignConfig, out_dir: &Path, format: Format) -> Result<String> {
    let designs = cfg.designs()?;
    let common = cfg.common()?;
    let mut analyzed = Vec::with_capacity(designs.len());
    for (name, kind) in &designs {
        let (net, patch) =
            design_network(cfg, &common, *kind).with_context(|| format!("design {name:?}"))?;
        let (d, _) = analyze_design(
            name,
            &net,
            &patch,
            common.f0,
            common.sweep,
            RadiationConductance::default(),
            1.0,
        )
        .with_context(|| format!("design {name:?}"))?;
        analyzed.push(d);
    }
    let report = comparison_report(analyzed);
    ensure_dir(out_dir)?;
    write_json(&report, &out_dir.join("compare.json"))?;
    let text = report.to_text();
    let path = out_dir.join("compare.txt");
    fs::write(&path, &text).with_context(|| format!("cannot write {}", path.display()))?;
    emit(&report, || text.clone(), format)
}
