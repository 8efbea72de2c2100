//! Data behind the four published figures.
//!
//! Figure 1 traces the zero-entanglement boundary of `√(1-β²)|0,0⟩ + β|1,1⟩`
//! in the `(γt, γ₁t)` plane. Figure 2 is the negativity of the maximally
//! entangled `α|0,1⟩ + β|1,2⟩` against time with and without interference.
//! Figures 3 and 4 trace the boundary of the mixed family in the
//! `(γt, γ₂t)` plane with `γ₁t = k·γ₂t`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use esd_core::contour::{zero_contour, SampledField};
use esd_core::dynamics::{
    evolve_mixed_analytic, negativity_phi2_closed, phi1_closed_witness, DecayRates,
};
use esd_core::family::MixedFamilyParams;
use esd_core::state::npt_witness;
use rayon::prelude::*;

use crate::format::fmt_num;

/// Samples per axis of the boundary figures.
pub const CONTOUR_GRID: usize = 256;
/// Both axes of the boundary figures span `[0, CONTOUR_EXTENT]`.
pub const CONTOUR_EXTENT: f64 = 3.0;
pub const FIG2_T_MAX: f64 = 5.0;
pub const FIG2_SAMPLES: usize = 501;

/// One generated file: name relative to the output directory and contents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FigureFile {
    pub name: String,
    pub contents: String,
}

fn axis(n: usize, hi: f64) -> Vec<f64> {
    (0..n).map(|i| hi * i as f64 / (n - 1) as f64).collect()
}

/// Evaluates `f` on the square grid, rows in parallel.
fn sample_square<F>(f: F) -> Result<SampledField>
where
    F: Fn(f64, f64) -> esd_core::Result<f64> + Sync,
{
    let xs = axis(CONTOUR_GRID, CONTOUR_EXTENT);
    let ys = xs.clone();
    let rows = ys
        .par_iter()
        .map(|&y| xs.iter().map(|&x| f(x, y)).collect::<esd_core::Result<Vec<_>>>())
        .collect::<esd_core::Result<Vec<_>>>()?;
    Ok(SampledField::new(xs, ys, rows.concat())?)
}

fn contour_csv(field: &SampledField, y_label: &str) -> (String, usize) {
    let curves = zero_contour(field);
    let mut out = format!("curve,gamma_t,{y_label}\n");
    for (i, curve) in curves.iter().enumerate() {
        for (x, y) in curve {
            let _ = writeln!(out, "{i},{},{}", fmt_num(*x), fmt_num(*y));
        }
    }
    (out, curves.len())
}

fn contour_script(id: u8, y_label: &str, curves: &[(String, String, usize)]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set xlabel 'gamma t'");
    let _ = writeln!(s, "set ylabel '{}'", y_label.replace('_', " "));
    let _ = writeln!(s, "set xrange [0:{CONTOUR_EXTENT}]");
    let _ = writeln!(s, "set yrange [0:{CONTOUR_EXTENT}]");
    let _ = writeln!(s, "set size square");
    let _ = writeln!(s, "set key outside");
    let mut plots = Vec::new();
    for (file, title, n) in curves {
        for i in 0..*n {
            let t = if i == 0 {
                format!("title '{title}'")
            } else {
                "notitle".to_string()
            };
            plots.push(format!(
                "'{file}' skip 1 using ($1=={i} ? $2 : 1/0):3 with lines lc {} {t}",
                plots_color(curves, file)
            ));
        }
    }
    if plots.is_empty() {
        let _ = writeln!(s, "# no boundary inside the plotted range");
    } else {
        let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
    }
    let _ = writeln!(s, "# figure {id}");
    s
}

fn plots_color(curves: &[(String, String, usize)], file: &str) -> usize {
    curves.iter().position(|c| c.0 == file).unwrap_or(0) + 1
}

fn figure1() -> Result<Vec<FigureFile>> {
    let mut files = Vec::new();
    let mut entries = Vec::new();
    for beta in [0.8f64, 0.9, 0.95] {
        let alpha = (1.0 - beta * beta).sqrt();
        let field = sample_square(|x, y| {
            phi1_closed_witness(alpha, beta, &DecayRates::new(x, y, 0.0)?, 1.0)
        })?;
        let (csv, n) = contour_csv(&field, "gamma1_t");
        let name = format!("fig1_beta{beta}.csv");
        entries.push((name.clone(), format!("beta = {beta}"), n));
        files.push(FigureFile { name, contents: csv });
    }
    files.push(FigureFile {
        name: "fig1.gp".into(),
        contents: contour_script(1, "gamma1_t", &entries),
    });
    Ok(files)
}

fn figure2() -> Result<Vec<FigureFile>> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut files = Vec::new();
    for (label, k) in [("k1", 1.0), ("k0", 0.0)] {
        let rates = DecayRates::with_interference(1.0, 1.0, k)?;
        let mut csv = String::from("t,negativity\n");
        for i in 0..FIG2_SAMPLES {
            let t = FIG2_T_MAX * i as f64 / (FIG2_SAMPLES - 1) as f64;
            let n = negativity_phi2_closed(h, h, &rates, t)?;
            let _ = writeln!(csv, "{},{}", fmt_num(t), fmt_num(n));
        }
        files.push(FigureFile {
            name: format!("fig2_{label}.csv"),
            contents: csv,
        });
    }
    let script = "set datafile separator ','\n\
                  set xlabel 't'\n\
                  set ylabel 'negativity'\n\
                  set xrange [0:5]\n\
                  set yrange [0:1]\n\
                  plot 'fig2_k1.csv' skip 1 using 1:2 with lines title 'k = 1', \\\n     \
                  'fig2_k0.csv' skip 1 using 1:2 with lines title 'k = 0'\n\
                  # figure 2\n";
    files.push(FigureFile {
        name: "fig2.gp".into(),
        contents: script.to_string(),
    });
    Ok(files)
}

fn mixed_figure(id: u8, b: f64, cs: [f64; 2]) -> Result<Vec<FigureFile>> {
    let mut files = Vec::new();
    let mut entries = Vec::new();
    for k in [1.0f64, 0.0] {
        for c in cs {
            let params = MixedFamilyParams::from_bc(b, c)?;
            let field = sample_square(|x, y| {
                let rates = DecayRates::new(x, k * y, y)?;
                npt_witness(&evolve_mixed_analytic(&params, &rates, 1.0)?)
            })?;
            let (csv, n) = contour_csv(&field, "gamma2_t");
            let name = format!("fig{id}_k{k}_c{c}.csv");
            entries.push((name.clone(), format!("k = {k}, c = {c}"), n));
            files.push(FigureFile { name, contents: csv });
        }
    }
    files.push(FigureFile {
        name: format!("fig{id}.gp"),
        contents: contour_script(id, "gamma2_t", &entries),
    });
    Ok(files)
}

pub fn figure_files(id: u8) -> Result<Vec<FigureFile>> {
    match id {
        1 => figure1(),
        2 => figure2(),
        3 => mixed_figure(3, 0.02, [0.15, 0.2]),
        4 => mixed_figure(4, 0.06, [0.25, 0.4]),
        _ => bail!("unknown figure id {id} (expected 1, 2, 3 or 4)"),
    }
}

pub fn write_figure(id: u8, dir: &Path) -> Result<Vec<FigureFile>> {
    let files = figure_files(id)?;
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    for f in &files {
        let path = dir.join(&f.name);
        fs::write(&path, &f.contents).with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure2_starts_at_one() {
        let files = figure_files(2).unwrap();
        let names: Vec<&str> = files.iter().map(|f| f.name.as_str()).collect();
        assert_eq!(names, ["fig2_k1.csv", "fig2_k0.csv", "fig2.gp"]);
        for f in &files[..2] {
            let first = f.contents.lines().nth(1).unwrap();
            assert_eq!(first, "0,1.00000000000");
            assert_eq!(f.contents.lines().count(), FIG2_SAMPLES + 1);
        }
    }

    #[test]
    fn unknown_figure() {
        assert!(figure_files(5).is_err());
    }
}
