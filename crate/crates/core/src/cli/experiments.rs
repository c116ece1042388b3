use rayon::prelude::*;
use serde_json::json;
use std::f64::consts::FRAC_PI_4;

use super::spec::{Experiment, ModelKind, SweepSpec};
use super::table::{Cell, Table};
use crate::dynamics::{
    bandwidth_threshold, birth_time_numeric, death_time_numeric, esb_birth_time, esd_death_time, four_mode_layout,
    jc_state, long_time, mode_edge_grid, partition_scan, scan_transition, SuddenTime, WwPropagator,
};
use crate::error::Result;
use crate::geoment::{hierarchy, relative_ge, LADDER_TOL};
use crate::measures::{concurrence_mixed, discord_pure_bipartition, discord_two_qubit, sigma_components, Model, ATOMS};
use crate::qcore::{Partition, PureState};

/// Runs the experiment named in a resolved spec on the current rayon pool.
pub fn run(spec: &SweepSpec) -> Result<Table> {
    match spec.experiment() {
        Experiment::JcEvolution => jc_evolution(spec),
        Experiment::WwEvolution => ww_evolution(spec),
        Experiment::Invariant => invariant(spec),
        Experiment::Hierarchy => hierarchy_table(spec),
        Experiment::Discord => discord_table(spec),
        Experiment::PartitionScan => scan_table(spec),
        Experiment::Age4Surface => age4_surface(spec),
    }
}

/// Evaluates `f` on every `(θ, t)` grid point in parallel; rows come back
/// in grid order.
fn grid_rows<F>(spec: &SweepSpec, f: F) -> Result<Vec<Vec<Cell>>>
where
    F: Fn(f64, f64) -> Result<Vec<Cell>> + Sync,
{
    let thetas = spec.theta_list();
    let times = spec.times();
    let nt = times.len();
    (0..thetas.len() * nt)
        .into_par_iter()
        .map(|i| {
            let (th, t) = (thetas[i / nt], times[i % nt]);
            let mut row = vec![Cell::Num(th), Cell::Num(t)];
            row.extend(f(th, t)?);
            Ok(row)
        })
        .collect()
}

fn evolution_cells(psi: &PureState) -> Result<Vec<Cell>> {
    let s = sigma_components(psi)?;
    Ok(vec![s.c_aa().into(), s.c_pp().into(), s.c4.into(), s.sigma.into()])
}

fn jc_evolution(spec: &SweepSpec) -> Result<Table> {
    let mut table = Table::new(["theta", "Jt", "C_AA", "C_PP", "C4", "Sigma"]);
    table.rows = grid_rows(spec, |th, jt| evolution_cells(&jc_state(th, jt)?))?;
    Ok(table)
}

fn sudden(t: SuddenTime, gamma: f64) -> serde_json::Value {
    match t {
        SuddenTime::At(t) => json!(t * gamma),
        SuddenTime::Never => json!("never"),
    }
}

fn ww_evolution(spec: &SweepSpec) -> Result<Table> {
    let p = spec.ww;
    let prop = WwPropagator::from_params(&p)?;
    let model = Model::WeisskopfWigner(&prop);
    let mut table = Table::new(["theta", "Gamma_t", "C_AA", "C_PP", "C4", "Sigma"]);
    table.rows = grid_rows(spec, |th, gt| evolution_cells(&model.state(th, gt / p.gamma)?))?;
    table.meta("recurrence_gamma_t", p.horizon() * p.gamma);
    for &th in spec.theta_list() {
        let key = |name: &str| format!("{name}[theta={th:.11e}]");
        table.meta(key("gamma_t_d_closed"), sudden(esd_death_time(th, p.gamma)?, p.gamma));
        table.meta(
            key("gamma_t_d_numeric"),
            sudden(death_time_numeric(th, &prop, p.gamma)?, p.gamma),
        );
        table.meta(key("gamma_t_b_closed"), sudden(esb_birth_time(th, p.gamma)?, p.gamma));
        table.meta(
            key("gamma_t_b_numeric"),
            sudden(birth_time_numeric(th, &prop, p.gamma)?, p.gamma),
        );
    }
    Ok(table)
}

fn invariant(spec: &SweepSpec) -> Result<Table> {
    let prop = match spec.model {
        ModelKind::Ww => Some(WwPropagator::from_params(&spec.ww)?),
        ModelKind::Jc => None,
    };
    let (model, scale) = match &prop {
        Some(p) => (Model::WeisskopfWigner(p), spec.ww.gamma),
        None => (Model::JaynesCummings(spec.jc), spec.jc.coupling()),
    };
    let time_col = if prop.is_some() { "Gamma_t" } else { "Jt" };
    let mut table = Table::new(["theta", time_col, "Sigma", "sin2theta", "abs_dev"]);
    table.rows = grid_rows(spec, |th, x| {
        let s = sigma_components(&model.state(th, x / scale)?)?.sigma;
        let want = (2.0 * th).sin();
        Ok(vec![s.into(), want.into(), (s - want).abs().into()])
    })?;
    let worst = table
        .column("abs_dev")
        .unwrap_or_default()
        .into_iter()
        .fold(0.0, f64::max);
    table.meta("max_abs_dev", worst);
    Ok(table)
}

fn parse_cuts(names: &[String]) -> Result<Vec<Partition>> {
    let layout = four_mode_layout();
    names.iter().map(|s| Partition::parse(s, &layout)).collect()
}

fn hierarchy_table(spec: &SweepSpec) -> Result<Table> {
    let names = spec.partitions.clone().unwrap_or_default();
    let cuts = parse_cuts(&names)?;
    let layout = four_mode_layout();
    let mut cols: Vec<String> = ["theta", "Jt", "E_AGE2", "E_AGE3", "E_AGE4"].map(String::from).to_vec();
    cols.extend(cuts.iter().map(|p| format!("E_RGE({})", p.label(&layout))));
    cols.extend(["ladder_monotone".to_string(), "converged".to_string()]);
    let mut table = Table::new(cols);
    let opts = spec.ge;
    table.rows = grid_rows(spec, |th, jt| {
        let psi = jc_state(th, jt)?;
        let h = hierarchy(&psi, &opts)?;
        let mut row: Vec<Cell> = (2..=4).map(|k| h.e_age(k).unwrap_or(f64::NAN).into()).collect();
        for p in &cuts {
            let e = match h.relative(p) {
                Some(e) => e,
                None => relative_ge(&psi, p, &opts)?.energy,
            };
            row.push(e.into());
        }
        row.push(h.is_monotone(LADDER_TOL).into());
        row.push(h.converged.into());
        Ok(row)
    })?;
    table.unconverged = table.column("converged").is_some_and(|c| c.contains(&0.0));
    Ok(table)
}

fn discord_table(spec: &SweepSpec) -> Result<Table> {
    let cuts = parse_cuts(&["A1P1|A2P2".into(), "A1A2|P1P2".into()])?;
    let opts = spec.discord;
    let mut table = Table::new([
        "theta",
        "Jt",
        "D(A1P1|A2P2)",
        "D(A1A2|P1P2)",
        "D_AA",
        "C_AA",
        "discord_converged",
    ]);
    table.rows = grid_rows(spec, |th, jt| {
        let psi = jc_state(th, jt)?;
        let rho = psi.reduced_state(&ATOMS)?;
        let d = discord_two_qubit(&rho, &opts)?;
        Ok(vec![
            discord_pure_bipartition(&psi, &cuts[0])?.into(),
            discord_pure_bipartition(&psi, &cuts[1])?.into(),
            d.value.into(),
            concurrence_mixed(&rho)?.into(),
            d.converged.into(),
        ])
    })?;
    table.unconverged = table.column("discord_converged").is_some_and(|c| c.contains(&0.0));
    Ok(table)
}

fn scan_table(spec: &SweepSpec) -> Result<Table> {
    let p = spec.ww;
    let prop = WwPropagator::from_params(&p)?;
    let t = long_time(&p, &prop)?;
    let sol = prop.solve(&[t])?;
    let gamma = p.linewidth();
    let max = (spec.scan.max_dnu * gamma).min(p.half_bandwidth);
    let grid: Vec<f64> = match spec.scan.step {
        None => mode_edge_grid(&sol.detunings, max),
        Some(step) => {
            let n = (max / (step * gamma) + 1e-9).floor() as usize;
            (1..=n).map(|i| i as f64 * step * gamma).collect()
        }
    };
    let mut table = Table::new(["theta", "dnu", "dnu_over_linewidth", "chi_sq", "chi_sq_product", "C_PP"]);
    table.meta("linewidth", gamma);
    table.meta("long_time_gamma_t", t * p.gamma);
    table.meta("xi_sq_long_time", sol.xi[0].norm_sqr());
    let thetas = spec.theta_list();
    let scans: Vec<_> = thetas
        .par_iter()
        .map(|&th| partition_scan(th, &sol, t, &grid))
        .collect::<Result<_>>()?;
    for (&th, rows) in thetas.iter().zip(&scans) {
        let key = |name: &str| format!("{name}[theta={th:.11e}]");
        if (FRAC_PI_4 - 1e-15..std::f64::consts::FRAC_PI_2).contains(&th) {
            table.meta(key("threshold_dnu_over_linewidth"), bandwidth_threshold(th)?);
        }
        let tr = scan_transition(rows).map(|d| d / gamma);
        table.meta(
            key("transition_dnu_over_linewidth"),
            tr.map_or(json!("none"), |x| json!(x)),
        );
        for r in rows {
            table.rows.push(vec![
                th.into(),
                r.delta_nu.into(),
                (r.delta_nu / gamma).into(),
                r.chi_sq.into(),
                r.product_form.into(),
                r.c_pp.into(),
            ]);
        }
    }
    Ok(table)
}

fn age4_surface(spec: &SweepSpec) -> Result<Table> {
    let full = Partition::singletons(4)?;
    let opts = spec.ge;
    let mut table = Table::new(["theta", "Jt", "E_AGE4", "converged"]);
    table.rows = grid_rows(spec, |th, jt| {
        let r = relative_ge(&jc_state(th, jt)?, &full, &opts)?;
        Ok(vec![r.energy.into(), r.converged.into()])
    })?;
    table.unconverged = table.column("converged").is_some_and(|c| c.contains(&0.0));
    Ok(table)
}
