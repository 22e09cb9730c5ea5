//! Subcommand bodies. Each computes its (α, n) jobs in parallel, then writes
//! files sequentially in a fixed order.

use std::fmt::Write as _;
use std::path::PathBuf;

use fracfact::ladder::{
    closed_form_energy, energy_curve, excited_state, node_locations, EnergyCurve, EnergyMode,
    DEFAULT_MAX_STATE,
};
use fracfact::operators::symbol_table;
use fracfact::spectral::{
    resolve_grid, sample, to_position, Exclusions, SampledState, UniformGrid,
};
use fracfact::LevyIndex;
use rayon::prelude::*;
use serde_json::json;

use crate::config::{Format, RunConfig};
use crate::output::{csv_string, ensure_dir, fmt_alpha, write_file};
use crate::report::{run_verification, VerificationReport};
use crate::svg::{render, LineStyle, Panel, Series};
use crate::{CliError, Result};

/// Figure abscissa range for the wavefunction panels.
pub const FIGURE_X_RANGE: f64 = 6.0;
/// Figure energy grid: `k = i / 100` for `i = 1..=400`.
pub const FIGURE_ENERGY_STEPS: usize = 400;
pub const FIGURE_ENERGY_DK: f64 = 0.01;
/// Exclusion half-width around the origin and nodes in the energy panels.
pub const FIGURE_EXCLUSION_RADIUS: f64 = 0.05;
/// The wavefunction panels double the grid's momentum range and point count
/// this many times, halving the position step each time.
pub const FIGURE_DOUBLINGS: usize = 2;

const PHASE_CONVENTION: &str =
    "real part after L2 normalization on the grid and a global phase making the largest-magnitude sample real and positive";

fn jobs(config: &RunConfig) -> Vec<(LevyIndex, usize)> {
    config
        .alphas
        .iter()
        .flat_map(|&a| config.states.iter().map(move |&n| (a, n)))
        .collect()
}

fn write_all(config: &RunConfig, files: Vec<(String, String)>) -> Result<Vec<PathBuf>> {
    ensure_dir(&config.out_dir)?;
    files
        .iter()
        .map(|(name, body)| write_file(&config.out_dir, name, body))
        .collect()
}

fn to_json(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn mode_name(mode: EnergyMode) -> &'static str {
    match mode {
        EnergyMode::Canonical => "canonical",
        EnergyMode::PaperVerbatim => "printed",
    }
}

/// L2-normalized momentum samples and their position-space transform.
pub fn state_pair(
    alpha: LevyIndex,
    n: usize,
    base: UniformGrid,
) -> Result<(SampledState, SampledState)> {
    let f = excited_state(alpha, n)?;
    let grid = resolve_grid(&f, base)?;
    let momentum = sample(&f, grid)?.normalized();
    let position = to_position(&momentum)?.normalized();
    Ok((momentum, position))
}

fn complex_rows(s: &SampledState) -> Vec<Vec<f64>> {
    s.coordinates()
        .into_iter()
        .zip(&s.values)
        .map(|(c, v)| vec![c, v.re, v.im])
        .collect()
}

pub fn states(config: &RunConfig) -> Result<Vec<PathBuf>> {
    let computed: Vec<(LevyIndex, usize, SampledState, SampledState)> = jobs(config)
        .par_iter()
        .map(|&(a, n)| state_pair(a, n, config.grid).map(|(m, p)| (a, n, m, p)))
        .collect::<Result<_>>()?;

    let mut files = Vec::new();
    for (a, n, m, p) in &computed {
        let stem = format!("state_a{}_n{n}", fmt_alpha(*a));
        if config.wants(Format::Csv, &[Format::Csv]) {
            files.push((
                format!("{stem}_momentum.csv"),
                csv_string(&["k", "re", "im"], complex_rows(m)),
            ));
            files.push((
                format!("{stem}_position.csv"),
                csv_string(&["x", "re", "im"], complex_rows(p)),
            ));
        }
        if config.wants(Format::Svg, &[Format::Csv]) {
            let fixed = p.phase_fixed();
            let points = fixed
                .coordinates()
                .into_iter()
                .zip(&fixed.values)
                .filter(|(x, _)| x.abs() <= FIGURE_X_RANGE)
                .map(|(x, v)| (x, v.re))
                .collect();
            let (color, style) = alpha_style(*a);
            let panel = Panel {
                title: format!("ψ{}(x), α = {}", subscript(*n), fmt_alpha(*a)),
                x_label: "x".into(),
                y_label: "Re ψ(x)".into(),
                series: vec![Series {
                    label: format!("α = {}", fmt_alpha(*a)),
                    color,
                    style,
                    points,
                }],
                robust_y: false,
            };
            files.push((format!("{stem}_position.svg"), render(&panel)));
        }
    }
    if config.wants(Format::Json, &[Format::Csv]) {
        let entries: Vec<_> = computed
            .iter()
            .map(|(a, n, m, p)| {
                json!({
                    "alpha": a.value(),
                    "n": n,
                    "k_max": m.grid.k_max(),
                    "points": m.grid.n_points(),
                    "dk": m.grid.dk(),
                    "dx": p.grid.dx(),
                    "normalization": "L2 on the grid",
                })
            })
            .collect();
        files.push((
            "states_meta.json".into(),
            to_json(&json!({ "states": entries })),
        ));
    }
    write_all(config, files)
}

/// `E_n(k)` on `k_i = i·k_max/points`, `i = 1..=points`, with the printed
/// formula substituted for `n = 2` when requested.
pub fn energy_samples(
    alpha: LevyIndex,
    n: usize,
    k: &[f64],
    radius: f64,
    mode: EnergyMode,
) -> Result<EnergyCurve> {
    let mut curve = energy_curve(alpha, n, k, radius)?;
    if n == 2 && mode == EnergyMode::PaperVerbatim {
        for s in &mut curve.samples {
            s.1 = closed_form_energy(alpha, 2, s.0, mode)?;
        }
    }
    Ok(curve)
}

fn e2_mode(config: &RunConfig) -> EnergyMode {
    if config.paper_verbatim_e2 {
        EnergyMode::PaperVerbatim
    } else {
        EnergyMode::Canonical
    }
}

pub fn energies(config: &RunConfig) -> Result<Vec<PathBuf>> {
    let points = config.grid.n_points();
    let k_max = config.grid.k_max();
    let k: Vec<f64> = (1..=points)
        .map(|i| i as f64 * k_max / points as f64)
        .collect();
    let radius = fracfact::ladder::default_exclusion_radius(&k);
    let mode = e2_mode(config);

    let computed: Vec<(EnergyCurve, Vec<f64>)> = jobs(config)
        .par_iter()
        .map(|&(a, n)| {
            let curve = energy_samples(a, n, &k, radius, mode)?;
            Ok((curve, node_locations(a, n)?))
        })
        .collect::<Result<_>>()?;

    let mut files = Vec::new();
    for (curve, nodes) in &computed {
        let stem = format!("energy_a{}_n{}", fmt_alpha(curve.alpha), curve.n);
        if config.wants(Format::Csv, &[Format::Csv]) {
            let rows = curve.samples.iter().map(|&(k, e)| vec![k, e]);
            files.push((format!("{stem}.csv"), csv_string(&["k", "E"], rows)));
        }
        if config.wants(Format::Svg, &[Format::Csv]) {
            let (color, style) = alpha_style(curve.alpha);
            let panel = Panel {
                title: format!("E{}(k), α = {}", subscript(curve.n), fmt_alpha(curve.alpha)),
                x_label: "k".into(),
                y_label: "E(k)".into(),
                series: vec![Series {
                    label: format!("α = {}", fmt_alpha(curve.alpha)),
                    color,
                    style,
                    points: curve.samples.clone(),
                }],
                robust_y: true,
            };
            files.push((format!("{stem}.svg"), render(&panel)));
        }
        let meta = json!({
            "alpha": curve.alpha.value(),
            "n": curve.n,
            "k_max": k_max,
            "points": points,
            "exclusion_radius": radius,
            "excluded_windows": curve.excluded_windows,
            "nodes": nodes,
            "e2_form": if curve.n == 2 { Some(mode_name(mode)) } else { None },
        });
        files.push((format!("{stem}.meta.json"), to_json(&meta)));
    }
    write_all(config, files)
}

pub fn verify(config: &RunConfig) -> Result<VerificationReport> {
    let report = run_verification(config)?;
    if config.wants(Format::Json, &[Format::Json]) {
        ensure_dir(&config.out_dir)?;
        let body = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
        write_file(&config.out_dir, "verification_report.json", &body)?;
    }
    Ok(report)
}

/// Colour and line style used for an α in every plot.
pub fn alpha_style(alpha: LevyIndex) -> (&'static str, LineStyle) {
    match alpha.value() {
        1.2 => ("#1f4fd1", LineStyle::Dashed),
        1.5 => ("#d11f1f", LineStyle::Solid),
        2.0 => ("#444444", LineStyle::Dotted),
        _ => {
            const PALETTE: [&str; 4] = ["#2a9d3f", "#8e44ad", "#e67e22", "#16a085"];
            let idx = (alpha.value() * 1000.0).round() as usize % PALETTE.len();
            (PALETTE[idx], LineStyle::DashDot)
        }
    }
}

/// Curves drawn in the figure: α = 1.2 and 1.5 unless `--alpha` replaces
/// them; `--overlay` adds α = 2 (or the `--alpha` values) on top of them.
pub fn figure_alphas(config: &RunConfig) -> Vec<LevyIndex> {
    let base = [1.2, 1.5].map(|a| LevyIndex::new(a).unwrap()).to_vec();
    if !config.overlay {
        return if config.alpha_explicit {
            config.alphas.clone()
        } else {
            base
        };
    }
    let extra = if config.alpha_explicit {
        config.alphas.clone()
    } else {
        vec![LevyIndex::CONVENTIONAL]
    };
    let mut out = base;
    for a in extra {
        if !out.contains(&a) {
            out.push(a);
        }
    }
    out
}

fn subscript(n: usize) -> String {
    const DIGITS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    n.to_string()
        .chars()
        .map(|c| DIGITS[c.to_digit(10).unwrap() as usize])
        .collect()
}

struct FigureCurves {
    alpha: LevyIndex,
    psi: Vec<Vec<(f64, f64)>>,
    energy: Vec<EnergyCurve>,
}

fn figure_curves(alpha: LevyIndex, base: UniformGrid, mode: EnergyMode) -> Result<FigureCurves> {
    let k: Vec<f64> = (1..=FIGURE_ENERGY_STEPS)
        .map(|i| i as f64 * FIGURE_ENERGY_DK)
        .collect();
    let mut psi = Vec::new();
    let mut energy = Vec::new();
    let fine = (0..FIGURE_DOUBLINGS).fold(base, |g, _| g.widened());
    for n in 0..3 {
        let (_, position) = state_pair(alpha, n, fine)?;
        let fixed = position.phase_fixed();
        psi.push(
            fixed
                .coordinates()
                .into_iter()
                .zip(&fixed.values)
                .filter(|(x, _)| x.abs() <= FIGURE_X_RANGE)
                .map(|(x, v)| (x, v.re))
                .collect(),
        );
        energy.push(energy_samples(alpha, n, &k, FIGURE_EXCLUSION_RADIUS, mode)?);
    }
    Ok(FigureCurves { alpha, psi, energy })
}

/// Six panels: `Re ψ_n(x)` for n = 0, 1, 2 (a–c) and `E_n(k)` (d–f).
pub fn figure(config: &RunConfig) -> Result<Vec<PathBuf>> {
    let alphas = figure_alphas(config);
    let mode = e2_mode(config);
    let curves: Vec<FigureCurves> = alphas
        .par_iter()
        .map(|&a| figure_curves(a, config.grid, mode))
        .collect::<Result<_>>()?;

    let series = |pick: &dyn Fn(&FigureCurves) -> Vec<(f64, f64)>| -> Vec<Series> {
        curves
            .iter()
            .map(|c| {
                let (color, style) = alpha_style(c.alpha);
                Series {
                    label: format!("α = {}", fmt_alpha(c.alpha)),
                    color,
                    style,
                    points: pick(c),
                }
            })
            .collect()
    };

    let default = [Format::Svg, Format::Csv];
    let mut files = Vec::new();
    let letters = ['a', 'b', 'c', 'd', 'e', 'f'];
    for n in 0..3 {
        let psi_panel = Panel {
            title: format!("({}) ψ{}(x)", letters[n], subscript(n)),
            x_label: "x".into(),
            y_label: format!("Re ψ{}(x)", subscript(n)),
            series: series(&|c| c.psi[n].clone()),
            robust_y: false,
        };
        let energy_panel = Panel {
            title: format!("({}) E{}(k)", letters[n + 3], subscript(n)),
            x_label: "k".into(),
            y_label: format!("E{}(k)", subscript(n)),
            series: series(&|c| c.energy[n].samples.clone()),
            robust_y: true,
        };
        if config.wants(Format::Svg, &default) {
            files.push((
                format!("figure_panel_{}.svg", letters[n]),
                render(&psi_panel),
            ));
            files.push((
                format!("figure_panel_{}.svg", letters[n + 3]),
                render(&energy_panel),
            ));
        }
    }
    if config.wants(Format::Csv, &default) {
        for c in &curves {
            let a = fmt_alpha(c.alpha);
            for n in 0..3 {
                let psi = c.psi[n].iter().map(|&(x, y)| vec![x, y]);
                files.push((
                    format!("fig_psi_n{n}_a{a}.csv"),
                    csv_string(&["x", "re"], psi),
                ));
                let e = c.energy[n].samples.iter().map(|&(k, e)| vec![k, e]);
                files.push((
                    format!("fig_energy_n{n}_a{a}.csv"),
                    csv_string(&["k", "E"], e),
                ));
            }
        }
    }
    files.sort_by(|a, b| a.0.cmp(&b.0));

    let meta = json!({
        "panels": {
            "a": "Re psi_0(x)", "b": "Re psi_1(x)", "c": "Re psi_2(x)",
            "d": "E_0(k)", "e": "E_1(k)", "f": "E_2(k)",
        },
        "wavefunction_quantity": PHASE_CONVENTION,
        "x_range": [-FIGURE_X_RANGE, FIGURE_X_RANGE],
        "position_step": (0..FIGURE_DOUBLINGS).fold(config.grid, |g, _| g.widened()).dx(),
        "energy_grid": { "dk": FIGURE_ENERGY_DK, "steps": FIGURE_ENERGY_STEPS },
        "exclusion_radius": FIGURE_EXCLUSION_RADIUS,
        "e2_form": mode_name(mode),
        "series": curves.iter().map(|c| {
            let (color, style) = alpha_style(c.alpha);
            json!({
                "alpha": c.alpha.value(),
                "color": color,
                "style": style.name(),
                "excluded_windows": c.energy.iter().map(|e| e.excluded_windows.clone()).collect::<Vec<_>>(),
            })
        }).collect::<Vec<_>>(),
    });
    files.push(("figure_meta.json".into(), to_json(&meta)));
    write_all(config, files)
}

pub fn info() -> String {
    let mut s = String::new();
    let _ = writeln!(s, "fracfact {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(s);
    let _ = writeln!(
        s,
        "Fractional oscillator H = |k|^α - d²/dk² in momentum space, 1 < α ≤ 2."
    );
    let _ = writeln!(
        s,
        "  A = i(|k|^(α/2) sgn k + d/dk),  B = i(d/dk - |k|^(α/2) sgn k)"
    );
    let _ = writeln!(
        s,
        "  H = BA + ε,  ε = (α/2)|k|^(α/2-1),  φ₀ = exp(-2|k|^(α/2+1)/(α+2)),  φₙ = Bⁿφ₀"
    );
    let _ = writeln!(s);
    let _ = writeln!(
        s,
        "Fractional symbols (position power → momentum multiplier):"
    );
    let probe = LevyIndex::new(1.5).unwrap();
    for sym in symbol_table(probe) {
        let _ = writeln!(
            s,
            "  order {}: {} {:?}",
            sym.order, sym.multiplier, sym.multiplier.parity
        );
    }
    let _ = writeln!(s, "  (shown for α = 1.5)");
    let _ = writeln!(s);
    let grid = UniformGrid::default();
    let ex = Exclusions::default();
    let _ = writeln!(s, "Conventions:");
    let _ = writeln!(
        s,
        "  ψ(x) = (2π)^(-1/2) ∫ φ(k) e^(ikx) dk, grid k_j = (j - N/2 + 1/2)Δk"
    );
    let _ = writeln!(
        s,
        "  default grid: k_max = {}, points = {}",
        grid.k_max(),
        grid.n_points()
    );
    let _ = writeln!(
        s,
        "  residual exclusions: |k| ≤ {}, ||k| - node| ≤ {}",
        ex.origin_radius, ex.node_radius
    );
    let _ = writeln!(s, "  maximum n: {DEFAULT_MAX_STATE}");
    let _ = writeln!(
        s,
        "  E₂ defaults to the form reproduced by Hφ₂/φ₂; --paper-verbatim-e2 uses the printed one"
    );
    let _ = writeln!(s, "  wavefunction plots: {PHASE_CONVENTION}");
    let _ = writeln!(s);
    let _ = writeln!(
        s,
        "Exit codes: 0 success, 1 verification failure, 2 invalid configuration, 3 I/O failure"
    );
    s
}

/// Maps a failed report onto exit code 1.
pub fn require_pass(report: &VerificationReport) -> Result<()> {
    if report.overall_pass {
        Ok(())
    } else {
        Err(CliError::VerificationFailed {
            failed: report.failed_checks,
            total: report.total_checks,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Overrides;

    #[test]
    fn figure_alpha_selection() {
        let values = |c: &RunConfig| {
            figure_alphas(c)
                .iter()
                .map(|a| a.value())
                .collect::<Vec<_>>()
        };
        let default = Overrides::default().into_config().unwrap();
        assert_eq!(values(&default), vec![1.2, 1.5]);

        let overlay = Overrides {
            overlay: Some(true),
            ..Default::default()
        }
        .into_config()
        .unwrap();
        assert_eq!(values(&overlay), vec![1.2, 1.5, 2.0]);

        let replaced = Overrides {
            alpha: Some(vec![1.3]),
            ..Default::default()
        }
        .into_config()
        .unwrap();
        assert_eq!(values(&replaced), vec![1.3]);
    }

    #[test]
    fn styles_follow_the_caption() {
        let style = |a: f64| alpha_style(LevyIndex::new(a).unwrap()).1;
        assert_eq!(style(1.2), LineStyle::Dashed);
        assert_eq!(style(1.5), LineStyle::Solid);
        assert_eq!(style(2.0), LineStyle::Dotted);
    }

    #[test]
    fn subscripts() {
        assert_eq!(subscript(0), "₀");
        assert_eq!(subscript(12), "₁₂");
    }
}
