//! The four batch runs. Each returns its tables; writing is left to the caller.

use rayon::prelude::*;
use serde_json::{json, Value};

use super::config::{
    BlockadeCheckParams, DeviationSweepParams, GateFidelityParams, JosephsonMapParams, LayoutKind,
};
use super::table::{Cell, Table};
use super::CliError;
use crate::chain::ChainSpec;
use crate::deviation::{default_t_grid, scenario_deviation, scenario_speed};
use crate::encoded::gates::cphase_rate;
use crate::encoded::{
    compile_cphase, simulate_gate, verify_blockade_cancellation, LogicalLayout, TiltMode,
};
use crate::josephson::coupling_report;
use crate::linalg::wrap_angle;

/// Tables and side files of one run.
#[derive(Debug)]
pub struct RunOutput {
    pub table: Table,
    /// (file suffix, contents) written next to the main output.
    pub extras: Vec<(&'static str, String)>,
    pub json: Value,
    /// Numerical invariants that failed; the run still emits its output.
    pub violations: Vec<String>,
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn check_finite(name: &str, values: &[f64]) -> Result<(), CliError> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(config_err(format!("{name} must be finite")));
    }
    Ok(())
}

pub fn run_deviation_sweep(p: &DeviationSweepParams) -> Result<RunOutput, CliError> {
    if p.n_min < 2 || p.n_min > p.n_max {
        return Err(config_err(format!(
            "invalid n range {}..={}",
            p.n_min, p.n_max
        )));
    }
    if p.scenarios.is_empty() || p.j2.is_empty() {
        return Err(config_err("scenario and j2 lists must be non-empty"));
    }
    check_finite("j2", &p.j2)?;
    if let Some(t) = &p.t {
        if t.is_empty() {
            return Err(config_err("t grid is empty"));
        }
        check_finite("t", t)?;
        if t.iter().any(|&x| x < 0.0) {
            return Err(config_err("t grid must be >= 0"));
        }
    } else if p.t_points == 0 {
        return Err(config_err("t_points must be >= 1"));
    }

    let mut points = Vec::new();
    let mut curves = Vec::new();
    for &sc in &p.scenarios {
        for &j2 in &p.j2 {
            for n in p.n_min.max(sc.min_qubits())..=p.n_max {
                curves.push((sc, j2, n));
                let grid =
                    p.t.clone()
                        .unwrap_or_else(|| default_t_grid(n, j2, p.t_points));
                points.extend(grid.into_iter().map(|t| (sc, n, j2, t)));
            }
        }
    }
    let results = points
        .par_iter()
        .map(|&(sc, n, j2, t)| scenario_deviation(sc, n, j2, t))
        .collect::<Result<Vec<_>, _>>()?;

    let mut table = Table::new(vec![
        "scenario",
        "n_logical",
        "j2",
        "t",
        "exact_raw",
        "exact_phase_opt",
        "lower_bound",
        "bound_dominance",
    ]);
    let mut violations = Vec::new();
    for r in &results {
        if !r.bound_holds() {
            violations.push(format!(
                "{} n={} j2={} t={}: deviation {} below bound {}",
                r.scenario, r.n_logical, r.j2, r.t, r.exact_phase_opt, r.lower_bound
            ));
        }
        table.push(vec![
            r.scenario.name().into(),
            r.n_logical.into(),
            r.j2.into(),
            r.t.into(),
            r.exact_raw.into(),
            r.exact_phase_opt.into(),
            r.lower_bound.into(),
            r.bound_holds().into(),
        ]);
    }

    let slopes = curves
        .par_iter()
        .map(|&(sc, j2, n)| scenario_speed(sc, n, j2))
        .collect::<Result<Vec<_>, _>>()?;
    let mut slope_table = Table::new(vec![
        "scenario",
        "j2",
        "n_logical",
        "slope",
        "slope_over_n",
        "bound_slope",
    ]);
    for (&(sc, j2, n), &s) in curves.iter().zip(&slopes) {
        slope_table.push(vec![
            sc.name().into(),
            j2.into(),
            n.into(),
            s.into(),
            (s / n as f64).into(),
            (j2.abs() * sc.bound_order(n) as f64).into(),
        ]);
    }
    let json = json!({ "points": table.to_json(), "slopes": slope_table.to_json() });
    Ok(RunOutput {
        table,
        extras: vec![("slopes.csv", slope_table.to_csv_string())],
        json,
        violations,
    })
}

/// Ten-spin chain with two pair-encoded qubits.
pub const GATE_CHAIN_SPINS: usize = 10;

pub fn run_gate_fidelity(p: &GateFidelityParams, naive: bool) -> Result<RunOutput, CliError> {
    if p.j2.is_empty() || p.tau.is_empty() {
        return Err(config_err("j2 and tau lists must be non-empty"));
    }
    check_finite("gate parameters", &[p.j1, p.x1])?;
    check_finite("j2", &p.j2)?;
    check_finite("tau", &p.tau)?;
    if p.tau.iter().any(|&t| t < 0.0) {
        return Err(config_err("tau must be >= 0"));
    }
    if p.j1 == 0.0 || p.x1 <= 0.0 {
        return Err(config_err("gate-fidelity needs j1 != 0 and x1 > 0"));
    }
    let mode = if naive || p.naive {
        TiltMode::Naive
    } else {
        TiltMode::Compensated
    };
    let layout = LogicalLayout::pair_encoded(2, 2)?;
    let points: Vec<(f64, f64)> =
        p.j2.iter()
            .flat_map(|&j2| p.tau.iter().map(move |&tau| (j2, tau)))
            .collect();
    let results = points
        .par_iter()
        .map(|&(j2, tau)| {
            let spec = ChainSpec::new(GATE_CHAIN_SPINS, p.j1, j2, p.x1)?;
            let sched = compile_cphase(&spec, &layout, tau, mode)?;
            let report = simulate_gate(&spec, &layout, &sched)?;
            Ok((spec, sched, report))
        })
        .collect::<crate::Result<Vec<_>>>()?;

    let mode_name = match mode {
        TiltMode::Compensated => "compensated",
        TiltMode::Naive => "naive",
    };
    let mut table = Table::new(vec![
        "j1",
        "j2",
        "x1",
        "tau",
        "mode",
        "fidelity",
        "fidelity_deficit",
        "leakage",
        "phi",
        "phi_expected",
        "phi_residual",
    ]);
    let mut schedules = Vec::new();
    for ((j2, tau), (spec, sched, r)) in points.iter().zip(&results) {
        let expected = wrap_angle(cphase_rate(spec) * tau);
        table.push(vec![
            p.j1.into(),
            (*j2).into(),
            p.x1.into(),
            (*tau).into(),
            Cell::from(mode_name),
            r.fidelity.into(),
            (1.0 - r.fidelity).into(),
            r.leakage.into(),
            r.phase_phi.into(),
            expected.into(),
            wrap_angle(r.phase_phi - expected).into(),
        ]);
        schedules.push(json!({
            "j1": p.j1, "j2": j2, "x1": p.x1, "tau": tau, "mode": mode_name,
            "schedule": sched,
        }));
    }
    let mut extras = Vec::new();
    if p.emit_schedules {
        extras.push((
            "schedules.json",
            serde_json::to_string_pretty(&schedules).expect("schedules serialize") + "\n",
        ));
    }
    let json = table.to_json();
    Ok(RunOutput {
        table,
        extras,
        json,
        violations: Vec::new(),
    })
}

pub fn run_josephson_map(p: &JosephsonMapParams) -> Result<RunOutput, CliError> {
    if p.arrays.is_empty() {
        return Err(config_err("no arrays given"));
    }
    let reports = p
        .arrays
        .par_iter()
        .map(coupling_report)
        .collect::<crate::Result<Vec<_>>>()?;
    let mut table = Table::new(vec![
        "n_boxes", "c_g", "c_j", "c_c", "epsilon", "quantity", "i", "j", "value",
    ]);
    let blank = || Cell::Text(String::new());
    for (spec, r) in p.arrays.iter().zip(&reports) {
        let mut row = |quantity: &str, i: Cell, j: Cell, value: f64| {
            table.push(vec![
                spec.n_boxes.into(),
                spec.c_g.into(),
                spec.c_j.into(),
                spec.c_c.into(),
                r.epsilon.into(),
                quantity.into(),
                i,
                j,
                value.into(),
            ]);
        };
        for (name, m) in [("capacitance", &r.capacitance), ("c_inverse", &r.c_inverse)] {
            for (i, line) in m.iter().enumerate() {
                for (j, &v) in line.iter().enumerate() {
                    row(name, (i + 1).into(), (j + 1).into(), v);
                }
            }
        }
        for (&k, &v) in &r.couplings_by_order {
            row("coupling_order", k.into(), blank(), v);
        }
        for (i, &h) in r.linear_fields.iter().enumerate() {
            row("linear_field", (i + 1).into(), blank(), h);
        }
        if let Some(d) = &r.decay {
            for (k, &ratio) in d.ratios.iter().enumerate() {
                row("decay_ratio", k.into(), blank(), ratio);
            }
            row(&format!("decay_{}", d.status()), blank(), blank(), 1.0);
        }
        row("chain_j1", blank(), blank(), r.effective_chain.j1);
        row("chain_j2", blank(), blank(), r.effective_chain.j2);
        row("residual_bound", blank(), blank(), r.residual_bound);
    }
    let json = json!(p
        .arrays
        .iter()
        .zip(&reports)
        .map(|(spec, r)| json!({
            "array": spec,
            "report": r,
            "decay_status": r.decay.as_ref().map(|d| d.status()),
        }))
        .collect::<Vec<_>>());
    Ok(RunOutput {
        table,
        extras: Vec::new(),
        json,
        violations: Vec::new(),
    })
}

pub fn run_blockade_check(p: &BlockadeCheckParams) -> Result<RunOutput, CliError> {
    if p.cases.is_empty() {
        return Err(config_err("no blockade cases given"));
    }
    let mut table = Table::new(vec![
        "layout",
        "n_logical",
        "m",
        "n_spins",
        "couplings",
        "residual",
        "cancellation",
    ]);
    for case in &p.cases {
        check_finite("couplings", &case.couplings)?;
        if case.couplings.is_empty() {
            return Err(config_err("coupling list is empty"));
        }
        let (name, layout) = match case.layout {
            LayoutKind::Pair => ("pair", LogicalLayout::pair_encoded(case.n_logical, case.m)?),
            LayoutKind::Single => {
                if case.m != 1 {
                    return Err(config_err("single-spin layouts have m = 1"));
                }
                ("single", LogicalLayout::single_spin(case.n_logical)?)
            }
        };
        let residual = verify_blockade_cancellation(&layout, &case.couplings)?;
        let couplings: Vec<String> = case
            .couplings
            .iter()
            .map(|j| Cell::Num(*j).render())
            .collect();
        table.push(vec![
            name.into(),
            case.n_logical.into(),
            case.m.into(),
            layout.n_spins.into(),
            couplings.join(";").into(),
            residual.into(),
            if residual == 0.0 { "exact" } else { "residual" }.into(),
        ]);
    }
    let json = table.to_json();
    Ok(RunOutput {
        table,
        extras: Vec::new(),
        json,
        violations: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_j2_gives_zero_deviation() {
        let p = DeviationSweepParams {
            j2: vec![0.0],
            n_max: 4,
            ..Default::default()
        };
        let out = run_deviation_sweep(&p).unwrap();
        assert!(out.violations.is_empty());
        for row in &out.table.rows {
            assert_eq!(row[4], Cell::Num(0.0));
            assert_eq!(row[5], Cell::Num(0.0));
        }
    }

    #[test]
    fn empty_grid_is_a_config_error() {
        let p = DeviationSweepParams {
            t: Some(vec![]),
            ..Default::default()
        };
        assert!(matches!(run_deviation_sweep(&p), Err(CliError::Config(_))));
        let bad = DeviationSweepParams {
            n_min: 5,
            n_max: 3,
            ..Default::default()
        };
        assert!(matches!(
            run_deviation_sweep(&bad),
            Err(CliError::Config(_))
        ));
    }

    #[test]
    fn tau_zero_is_identity_row() {
        let p = GateFidelityParams {
            tau: vec![0.0],
            ..Default::default()
        };
        let out = run_gate_fidelity(&p, false).unwrap();
        let row = &out.table.rows[0];
        match (&row[5], &row[10]) {
            (Cell::Num(f), Cell::Num(res)) => {
                assert!(*f >= 1.0 - 1e-9);
                assert!(res.abs() < 1e-8);
            }
            _ => panic!("numeric columns"),
        }
    }

    #[test]
    fn blockade_defaults() {
        let out = run_blockade_check(&BlockadeCheckParams::default()).unwrap();
        let verdicts: Vec<&Cell> = out.table.rows.iter().map(|r| &r[6]).collect();
        assert_eq!(
            verdicts,
            vec![
                &Cell::from("exact"),
                &Cell::from("exact"),
                &Cell::from("residual")
            ]
        );
    }

    #[test]
    fn josephson_regimes() {
        let out = run_josephson_map(&JosephsonMapParams::default()).unwrap();
        assert!(out
            .table
            .rows
            .iter()
            .any(|r| r[5] == Cell::from("decay_pass")));
        let mut strong = JosephsonMapParams::default();
        strong.arrays[0].c_c = 0.5;
        let out = run_josephson_map(&strong).unwrap();
        assert!(out
            .table
            .rows
            .iter()
            .any(|r| r[5] == Cell::from("decay_out_of_regime")));
    }
}
