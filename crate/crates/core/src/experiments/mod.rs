//! Named experiment presets producing CSV result tables.

mod config;
mod table;

pub use config::{parse_config, render, ExperimentConfig, Grid, Preset};
pub use table::{emit_csv, format_number, render_csv, Cell, ResultTable, SIGNIFICANT_DIGITS};

use crate::chain::{decay_fixed_point, decay_scan, run_repeater, swap, ChainConfig};
use crate::error::Result;
use crate::noise::NoiseParams;
use crate::oracle::{
    compare, simulate_bennett_round, simulate_distillation, simulate_step1_noisy,
    simulate_step1_optics, simulate_swap, Comparison,
};
use crate::purification::{
    bennett_round, ideal_round, ideal_step1, noisy_round, noisy_step1, protocol, threshold,
};
use crate::state::{embed, make_werner, DepBasisState};

/// Tolerance for closed-form versus oracle rows.
pub const ORACLE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub table: ResultTable,
    /// Oracle rows outside tolerance that are not flagged as known gaps.
    pub failures: usize,
}

/// Runs the configured preset and, when `out` is set, writes the CSV.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let noise = cfg.noise()?;
    let mut output = match cfg.preset {
        Preset::Fig3 => fig3(cfg, noise)?,
        Preset::ThresholdScan => threshold_scan(cfg)?,
        Preset::ChainScan => chain_scan(cfg, noise)?,
        Preset::DecayScan => decay(cfg, noise)?,
        Preset::OracleCheck => oracle_check(cfg, noise)?,
    };
    let mut metadata = vec![("preset".to_string(), cfg.preset.to_string())];
    for line in render(cfg).lines().skip(1) {
        if let Some((k, v)) = line.split_once('=') {
            if k != "out" {
                metadata.push((k.to_string(), v.to_string()));
            }
        }
    }
    metadata.append(&mut output.table.metadata);
    output.table.metadata = metadata;
    if let Some(path) = &cfg.out {
        emit_csv(&output.table, path)?;
    }
    Ok(output)
}

fn fig3(cfg: &ExperimentConfig, noise: NoiseParams) -> Result<ExperimentOutput> {
    let mut table = ResultTable::new(&[
        "F",
        "dep_f_out",
        "bennett_f_out",
        "dep_p_succ",
        "bennett_p_succ",
    ]);
    for f in cfg.f_grid.points() {
        let dep = noisy_round(f, noise)?;
        let ben = bennett_round(f)?;
        table.push_row(vec![
            f.into(),
            dep.f_out.into(),
            ben.f_out.into(),
            dep.p_succ.into(),
            ben.p_succ.into(),
        ])?;
    }
    table.meta("p2", "not modelled");
    Ok(ExperimentOutput { table, failures: 0 })
}

fn threshold_scan(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let mut table = ResultTable::new(&["p1", "eta", "threshold", "error"]);
    for &p1 in &cfg.p1_values {
        for &eta in &cfg.eta_values {
            let proto = protocol(&cfg.protocol, NoiseParams::new(p1, eta)?)?;
            let row = match threshold(proto.as_ref()) {
                Ok(t) => vec![p1.into(), eta.into(), t.into(), "".into()],
                Err(e) => vec![p1.into(), eta.into(), "".into(), e.to_string().into()],
            };
            table.push_row(row)?;
        }
    }
    Ok(ExperimentOutput { table, failures: 0 })
}

fn chain_scan(cfg: &ExperimentConfig, noise: NoiseParams) -> Result<ExperimentOutput> {
    let mut table = ResultTable::new(&[
        "segments",
        "rounds",
        "final_fidelity",
        "expected_cost",
        "levels",
        "error",
    ]);
    for &n in &cfg.segments {
        for &m in &cfg.rounds {
            let chain = ChainConfig::new(n, cfg.f0, m, noise)
                .with_mode(cfg.mode)
                .with_protocol(&cfg.protocol);
            let row = match run_repeater(&chain) {
                Ok(r) => vec![
                    n.into(),
                    m.into(),
                    r.final_fidelity.into(),
                    r.expected_cost.into(),
                    r.levels.into(),
                    "".into(),
                ],
                Err(e) => vec![
                    n.into(),
                    m.into(),
                    "".into(),
                    "".into(),
                    "".into(),
                    e.to_string().into(),
                ],
            };
            table.push_row(row)?;
        }
    }
    Ok(ExperimentOutput { table, failures: 0 })
}

fn decay(cfg: &ExperimentConfig, noise: NoiseParams) -> Result<ExperimentOutput> {
    let mut table = ResultTable::new(&["N", "fidelity"]);
    for (n, f) in decay_scan(cfg.n_max, cfg.f0, noise)? {
        table.push_row(vec![n.into(), f.into()])?;
    }
    table.meta(
        "fixed_point",
        format_number(decay_fixed_point(cfg.f0, noise)?),
    );
    Ok(ExperimentOutput { table, failures: 0 })
}

fn oracle_check(cfg: &ExperimentConfig, noise: NoiseParams) -> Result<ExperimentOutput> {
    let mut table = ResultTable::new(&[
        "check",
        "F",
        "analytic",
        "oracle",
        "abs_diff",
        "tolerance",
        "pass",
        "expected_gap",
    ]);
    let mut failures = 0;
    let mut push = |name: &str, f: f64, c: Comparison, expected_gap: bool| -> Result<()> {
        if !c.pass && !expected_gap {
            failures += 1;
        }
        table.push_row(vec![
            name.into(),
            f.into(),
            c.analytic.into(),
            c.oracle.into(),
            c.abs_diff.into(),
            c.tolerance.into(),
            usize::from(c.pass).into(),
            usize::from(expected_gap).into(),
        ])
    };

    let ideal = NoiseParams::ideal();
    for f in cfg.f_grid.points() {
        let werner = make_werner(f)?;
        let input = embed(&werner)?;

        let corrected = simulate_step1_optics(&input)?;
        push(
            "step1",
            f,
            compare(ideal_step1(f)?, corrected.fidelity(), ORACLE_TOLERANCE),
            false,
        )?;

        let round = ideal_round(f)?;
        let distilled = simulate_distillation(&corrected, &corrected, ideal)?;
        push(
            "distill_fidelity",
            f,
            compare(round.f_out, distilled.state.fidelity(), ORACLE_TOLERANCE),
            false,
        )?;
        push(
            "distill_success",
            f,
            compare(round.p_succ, distilled.p_succ, ORACLE_TOLERANCE),
            false,
        )?;

        let ben = bennett_round(f)?;
        let ben_oracle = simulate_bennett_round(f)?;
        push(
            "bennett_fidelity",
            f,
            compare(ben.f_out, ben_oracle.f_out, ORACLE_TOLERANCE),
            false,
        )?;
        push(
            "bennett_success",
            f,
            compare(ben.p_succ, ben_oracle.p_succ, ORACLE_TOLERANCE),
            false,
        )?;

        for (name, n) in [("swap_ideal", ideal), ("swap_noisy", noise)] {
            let closed = swap(&werner, &werner, n)?.fidelity();
            let exact = simulate_swap(&input, &input, n)?.state.fidelity();
            push(name, f, compare(closed, exact, ORACLE_TOLERANCE), false)?;
        }

        // Noisy closed forms, compared but not gated.
        let noisy_corrected = simulate_step1_noisy(&input, noise.p1())?.state;
        push(
            "noisy_step1",
            f,
            compare(
                noisy_step1(f, noise.p1())?.0,
                noisy_corrected.weight(DepBasisState::PhiPlus),
                ORACLE_TOLERANCE,
            ),
            true,
        )?;
        let noisy_distilled = simulate_distillation(&noisy_corrected, &noisy_corrected, noise)?;
        push(
            "noisy_round",
            f,
            compare(
                noisy_round(f, noise)?.f_out,
                noisy_distilled.state.fidelity(),
                ORACLE_TOLERANCE,
            ),
            true,
        )?;
        push(
            "noisy_round_ideal_limit",
            f,
            compare(
                noisy_round(f, ideal)?.f_out,
                distilled.state.fidelity(),
                ORACLE_TOLERANCE,
            ),
            true,
        )?;
    }
    table.meta("failures", failures);
    table.meta("status", if failures == 0 { "pass" } else { "fail" });
    Ok(ExperimentOutput { table, failures })
}
