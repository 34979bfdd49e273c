//! p- and h-convergence sweeps and their tables.

mod config;
mod table;

pub use config::{ExperimentConfig, MeshSpec, Method, SQUARE};
pub use table::{emit_table, format_table, parse_table, TableFormat, COLUMNS};

use std::time::Instant;

use crate::assembly::{
    assemble_c0_load, assemble_c0ipdg, assemble_ipdg, assemble_load, c0_dirichlet_values, compute_errors, solve_c0ipdg,
    BoundaryData, ErrorOptions, ErrorReport, LoadOptions, NormKind,
};
use crate::error::Result;
use crate::linalg::cholesky_solve;
use crate::mesh::Mesh;
use crate::solutions::{make_case, ManufacturedCase};
use crate::space::{build_c0_space, build_dg_space, FeSpace};

/// One line of a convergence table.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub p: usize,
    /// Largest element diameter, set for h-sweeps.
    pub h: Option<f64>,
    pub dofs: usize,
    pub errors: ErrorReport,
    pub rate_dg: Option<f64>,
    pub rate_l2: Option<f64>,
    pub t_assemble_s: f64,
    pub t_solve_s: f64,
}

/// `ln(e_{p-2}/e_p) / ln(p/(p-2))`.
pub fn p_rate(p: usize, e_prev: f64, e: f64) -> f64 {
    (e_prev / e).ln() / (p as f64 / (p - 2) as f64).ln()
}

/// `ln(e_prev/e) / ln(h_prev/h)`.
pub fn h_rate(h_prev: f64, h: f64, e_prev: f64, e: f64) -> f64 {
    (e_prev / e).ln() / (h_prev / h).ln()
}

/// Assembles, solves and measures one discretization.
pub fn run_single(cfg: &ExperimentConfig, case: &ManufacturedCase, mesh: &Mesh, p: usize) -> Result<SweepRow> {
    let quadrature = LoadOptions {
        grading_levels: cfg.grading_levels,
        ..LoadOptions::default()
    };
    let bc = BoundaryData::from_case(case);
    let pen = &cfg.penalty;
    let start = Instant::now();
    let (dofs, errors, t_assemble_s, t_solve_s) = match cfg.method {
        config::Method::Ipdg => {
            let space = build_dg_space(mesh, p)?;
            let a = assemble_ipdg(&space, pen);
            let b = assemble_load(&space, case, &bc, pen, &quadrature);
            let t_asm = start.elapsed().as_secs_f64();
            let x = cholesky_solve(&a, &b)?;
            let t_sol = start.elapsed().as_secs_f64() - t_asm;
            let opts = ErrorOptions {
                quadrature,
                norm: NormKind::Ipdg,
            };
            (
                space.ndofs(),
                compute_errors(&space, &x, case, pen, &opts),
                t_asm,
                t_sol,
            )
        }
        config::Method::C0Ipdg => {
            let space = build_c0_space(mesh, p)?;
            let a = assemble_c0ipdg(&space, pen);
            let b = assemble_c0_load(&space, case, &bc, pen, &quadrature);
            let ud = c0_dirichlet_values(&space, &bc, &case.singular_points);
            let t_asm = start.elapsed().as_secs_f64();
            let x = solve_c0ipdg(&space, &a, &b, &ud)?;
            let t_sol = start.elapsed().as_secs_f64() - t_asm;
            let opts = ErrorOptions {
                quadrature,
                norm: NormKind::C0,
            };
            (
                space.ndofs(),
                compute_errors(&space, &x, case, pen, &opts),
                t_asm,
                t_sol,
            )
        }
    };
    Ok(SweepRow {
        p,
        h: None,
        dofs,
        errors,
        rate_dg: None,
        rate_l2: None,
        t_assemble_s,
        t_solve_s,
    })
}

/// Rows for `p_min..=p_max` on the configured mesh, with rates against the
/// entry two degrees lower.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    run_sweep_with(cfg, |_| {})
}

/// [`run_sweep`], calling `progress` after each row.
pub fn run_sweep_with(cfg: &ExperimentConfig, mut progress: impl FnMut(&SweepRow)) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let case = make_case(&cfg.case)?;
    let mesh = cfg.mesh.build()?;
    let mut rows: Vec<SweepRow> = Vec::new();
    for p in cfg.p_min..=cfg.p_max {
        let mut row = run_single(cfg, &case, &mesh, p)?;
        if let Some(prev) = rows.iter().find(|r| r.p + 2 == p) {
            row.rate_dg = Some(p_rate(p, prev.errors.dg_error, row.errors.dg_error));
            row.rate_l2 = Some(p_rate(p, prev.errors.l2_error, row.errors.l2_error));
        }
        progress(&row);
        rows.push(row);
    }
    Ok(rows)
}

/// Rows for square meshes with `cfg.sizes` elements per side at degree `p_min`.
pub fn run_h_sweep(cfg: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let case = make_case(&cfg.case)?;
    let mut rows: Vec<SweepRow> = Vec::new();
    for &n in &cfg.sizes {
        let mesh = MeshSpec::Square { nx: n, ny: n }.build()?;
        let mut row = run_single(cfg, &case, &mesh, cfg.p_min)?;
        let h = mesh.max_h();
        row.h = Some(h);
        if let Some(prev) = rows.last() {
            let hp = prev.h.unwrap_or(h);
            row.rate_dg = Some(h_rate(hp, h, prev.errors.dg_error, row.errors.dg_error));
            row.rate_l2 = Some(h_rate(hp, h, prev.errors.l2_error, row.errors.l2_error));
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn fitted_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}
