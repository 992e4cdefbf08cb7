//! Dispatch from parsed arguments or scenario files to protocol runs.

use std::path::Path;

use rayon::prelude::*;

use qbalance_core::bell::werner_state;
use qbalance_core::ledger::{check_balance, check_balance_with, UsefulWorkConfig};
use qbalance_core::linalg::gates::bloch_state;
use qbalance_core::measures;
use qbalance_core::protocols::{
    bbpssw_iterate, bbpssw_step_with, distillation_report, random_transcript, send_qubit, teleport_with,
    BbpsswOptions, DistillationConfig, TeleportConfig, TrajectoryPoint,
};
use qbalance_core::qstate::{fidelity, haar_vector, seeded_rng};
use qbalance_core::LabeledState;

use crate::args::{
    BalanceSweepParams, BbpsswParams, Cli, Command, DistillParams, Format, MeasuresParams, SendParams, SweepArgs, SweepProtocol,
    TeleportParams,
};
use crate::error::{CliError, CliResult};
use crate::format::num;
use crate::report::{
    distill_row, distill_violations, BalanceReport, DistillReport, GridReport, MeasuresReport, Report, TrajectoryReport,
};
use crate::scenario;

/// Tolerance for the fast recurrence map against the full circuit.
const CIRCUIT_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub enum Job {
    Teleport(TeleportParams),
    Send(SendParams),
    Bbpssw(BbpsswParams),
    Distill(DistillParams),
    Measures(MeasuresParams),
    Sweep(SweepArgs),
    BalanceSweep(BalanceSweepParams),
}

impl From<Command> for Job {
    fn from(c: Command) -> Self {
        match c {
            Command::Teleport(p) => Job::Teleport(p),
            Command::Send(p) => Job::Send(p),
            Command::Bbpssw(p) => Job::Bbpssw(p),
            Command::Distill(p) => Job::Distill(p),
            Command::Measures(p) => Job::Measures(p),
            Command::Sweep(p) => Job::Sweep(p),
        }
    }
}

pub struct Outcome {
    pub text: String,
    pub violations: Vec<String>,
}

pub fn execute(cli: Cli) -> CliResult<Outcome> {
    let (job, seed, format) = match (cli.scenario, cli.command) {
        (Some(_), Some(_)) => {
            return Err(CliError::Input("give either a subcommand or --scenario, not both".into()));
        }
        (Some(path), None) => {
            let spec = scenario::load(&path)?;
            let base = path.parent().unwrap_or(Path::new("."));
            (spec.job(base)?, cli.seed.unwrap_or(spec.seed), cli.format.unwrap_or(spec.output))
        }
        (None, Some(cmd)) => {
            let default = if matches!(cmd, Command::Sweep(_)) { Format::Csv } else { Format::Table };
            (Job::from(cmd), cli.seed.unwrap_or(0), cli.format.unwrap_or(default))
        }
        (None, None) => return Err(CliError::Input("no subcommand given; see --help".into())),
    };
    let report = run_job(job, seed)?;
    Ok(Outcome {
        text: report.render(format),
        violations: report.violations(),
    })
}

pub fn run_job(job: Job, seed: u64) -> CliResult<Box<dyn Report>> {
    Ok(match job {
        Job::Teleport(p) => Box::new(teleport_job(&p, seed)?),
        Job::Send(p) => Box::new(send_job(&p, seed)?),
        Job::Bbpssw(p) => Box::new(trajectory(p.fidelity, p.rounds, p.twirl)?),
        Job::Distill(p) => Box::new(distill_job(&p)?),
        Job::Measures(p) => Box::new(measures_job(&p)?),
        Job::Sweep(a) => Box::new(sweep(&a)?),
        Job::BalanceSweep(p) => Box::new(balance_sweep(&p, seed)?),
    })
}

fn useful_config(subspace_dim: Option<usize>, epsilon: f64, trials: usize, seed: u64) -> UsefulWorkConfig {
    UsefulWorkConfig {
        subspace_dim,
        trials,
        epsilon,
        seed,
    }
}

fn teleport_job(p: &TeleportParams, seed: u64) -> CliResult<BalanceReport> {
    let unknown = match p.theta {
        Some(theta) => bloch_state(theta, p.phi.unwrap_or(0.0)),
        None => haar_vector(2, &mut seeded_rng(seed)),
    };
    let cfg = TeleportConfig {
        env_per_pointer: p.env_per_pointer,
    };
    let t = teleport_with(&unknown, &cfg)?;
    let ledger = check_balance_with(&t, &useful_config(p.subspace_dim, p.epsilon, p.trials, seed))?;
    let received = t.final_state().partial_trace(&[qbalance_core::protocols::teleport::BOB_HALF])?;
    let expected = LabeledState::pure(received.layout().clone(), unknown)?;
    let f = fidelity(&expected, &received)?;
    let mut extra = Vec::new();
    if f < 1.0 - 1e-9 {
        extra.push(format!("teleported state arrived with fidelity {f}"));
    }
    Ok(BalanceReport {
        protocol: t.name().to_string(),
        ledger,
        transcript: t.export(),
        output_fidelity: Some(f),
        extra_violations: extra,
    })
}

fn send_job(p: &SendParams, seed: u64) -> CliResult<BalanceReport> {
    let t = send_qubit(p.mode)?;
    let ledger = check_balance_with(&t, &useful_config(p.subspace_dim, p.epsilon, p.trials, seed))?;
    Ok(BalanceReport {
        protocol: t.name().to_string(),
        ledger,
        transcript: t.export(),
        output_fidelity: None,
        extra_violations: Vec::new(),
    })
}

fn check_initial_fidelity(f: f64) -> CliResult<()> {
    if f > 0.25 && f <= 1.0 {
        Ok(())
    } else {
        Err(CliError::Input(format!("initial fidelity {f} outside (0.25, 1]")))
    }
}

/// With the twirl on, the closed-form trajectory is re-derived round by round
/// from the full circuit. Without it only the circuit applies.
pub fn trajectory(f0: f64, rounds: usize, twirl: bool) -> CliResult<TrajectoryReport> {
    check_initial_fidelity(f0)?;
    if rounds == 0 {
        return Err(CliError::Input("at least one round is required".into()));
    }
    let opts = BbpsswOptions { twirl };
    let mut rho = werner_state(f0)?;
    let mut circuit = Vec::with_capacity(rounds);
    let mut surviving = 1.0;
    for round in 1..=rounds {
        let s = bbpssw_step_with(&rho, &opts)?;
        surviving *= s.p_keep / 2.0;
        circuit.push(TrajectoryPoint {
            round,
            fidelity: s.fidelity_next,
            p_keep: s.p_keep,
            surviving_fraction: surviving,
        });
        rho = s.rho_next;
    }
    let mut violations = Vec::new();
    let (points, deviation) = if twirl {
        let fast = bbpssw_iterate(f0, rounds)?;
        let dev = fast
            .iter()
            .zip(&circuit)
            .map(|(a, b)| (a.p_keep - b.p_keep).abs().max((a.fidelity - b.fidelity).abs()))
            .fold(0.0, f64::max);
        if dev > CIRCUIT_TOL {
            violations.push(format!("fast recurrence map deviates from the circuit by {dev:e}"));
        }
        let mut prev = f0;
        for p in &fast {
            if f0 > 0.5 && prev < 1.0 - 1e-12 && p.fidelity <= prev {
                violations.push(format!("fidelity did not increase in round {}", p.round));
            }
            prev = p.fidelity;
        }
        (fast, Some(dev))
    } else {
        (circuit, None)
    };
    Ok(TrajectoryReport {
        initial_fidelity: f0,
        twirl,
        points,
        max_circuit_deviation: deviation,
        extra_violations: violations,
    })
}

fn input_state(fidelity: f64, state: &Option<std::path::PathBuf>) -> CliResult<(String, LabeledState)> {
    match state {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            Ok((path.display().to_string(), LabeledState::from_json(&text)?))
        }
        None => Ok((format!("werner(F={})", num(fidelity)), werner_state(fidelity)?)),
    }
}

fn distill_job(p: &DistillParams) -> CliResult<DistillReport> {
    let (input, rho) = input_state(p.fidelity, &p.state)?;
    let ledger = distillation_report(
        &rho,
        &DistillationConfig {
            max_rounds: p.max_rounds,
            w_p: p.w_p,
        },
    )?;
    Ok(DistillReport { input, ledger })
}

fn measures_job(p: &MeasuresParams) -> CliResult<MeasuresReport> {
    let (input, rho) = input_state(p.fidelity, &p.state)?;
    let pair = rho.n_qubits() == 2;
    Ok(MeasuresReport {
        entropy: rho.von_neumann_entropy()?,
        concurrence: if pair { Some(measures::concurrence(&rho)?) } else { None },
        negativity: measures::negativity(&rho, p.cut)?,
        log_negativity: measures::log_negativity(&rho, p.cut)?,
        ppt: measures::is_ppt(&rho, p.cut)?,
        hashing: if pair { Some(measures::hashing_lower_bound(&rho)?) } else { None },
        record: measures::gibbs_helmholtz_with(&rho, p.cut, p.max_rounds)?,
        input,
    })
}

fn grid_values(a: &SweepArgs) -> CliResult<Vec<f64>> {
    if let Some(g) = &a.grid {
        return g
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<f64>().map_err(|_| CliError::Input(format!("grid value `{s}` is not a number"))))
            .collect();
    }
    match (a.start, a.stop, a.step) {
        (Some(start), Some(stop), Some(step)) => {
            if step.is_nan() || step <= 0.0 || !start.is_finite() || !stop.is_finite() {
                return Err(CliError::Input("grid step must be positive and bounds finite".into()));
            }
            if stop < start {
                return Ok(Vec::new());
            }
            let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
            Ok((0..n).map(|i| num(start + i as f64 * step).parse().expect("formatted float")).collect())
        }
        _ => Err(CliError::Input("give --grid or all of --start, --stop, --step".into())),
    }
}

fn as_count(name: &str, v: f64) -> CliResult<usize> {
    if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
        Ok(v as usize)
    } else {
        Err(CliError::Input(format!("`{name}` takes whole numbers, got {v}")))
    }
}

const NON_NUMERIC: [&str; 5] = ["mode", "twirl", "state", "cut", "protocol"];

fn check_param(a: &SweepArgs, allowed: &[&str]) -> CliResult<()> {
    if allowed.contains(&a.param.as_str()) {
        Ok(())
    } else if NON_NUMERIC.contains(&a.param.as_str()) {
        Err(CliError::Input(format!("parameter `{}` is not numeric", a.param)))
    } else {
        Err(CliError::Input(format!(
            "unknown parameter `{}` (expected one of {})",
            a.param,
            allowed.join(", ")
        )))
    }
}

/// One row per grid point, computed in parallel and emitted in grid order.
pub fn sweep(a: &SweepArgs) -> CliResult<GridReport> {
    let grid = grid_values(a)?;
    match a.protocol {
        SweepProtocol::Bbpssw => {
            check_param(a, &["fidelity", "rounds"])?;
            let points: Vec<(f64, usize)> = grid
                .iter()
                .map(|&v| match a.param.as_str() {
                    "rounds" => as_count("rounds", v).map(|r| (a.fidelity, r)),
                    _ => Ok((v, a.rounds)),
                })
                .collect::<CliResult<_>>()?;
            let reports: Vec<TrajectoryReport> = points
                .par_iter()
                .map(|&(f, r)| trajectory(f, r, true))
                .collect::<CliResult<_>>()?;
            let header = ["fidelity", "rounds", "fidelity_out", "p_keep", "yield"];
            let mut rows = Vec::new();
            let mut violations = Vec::new();
            for ((f, r), rep) in points.iter().zip(&reports) {
                let last = rep.points.last().expect("at least one round");
                rows.push(vec![
                    num(*f),
                    r.to_string(),
                    num(last.fidelity),
                    num(last.p_keep),
                    num(last.surviving_fraction),
                ]);
                violations.extend(rep.violations().into_iter().map(|v| format!("F = {}: {v}", num(*f))));
            }
            Ok(GridReport {
                header: header.map(String::from).to_vec(),
                rows,
                violations,
            })
        }
        SweepProtocol::DistillReport => {
            check_param(a, &["fidelity", "max_rounds", "w_p"])?;
            let points: Vec<(f64, usize, f64)> = grid
                .iter()
                .map(|&v| match a.param.as_str() {
                    "max_rounds" => as_count("max_rounds", v).map(|r| (a.fidelity, r, a.w_p)),
                    "w_p" => Ok((a.fidelity, a.max_rounds, v)),
                    _ => Ok((v, a.max_rounds, a.w_p)),
                })
                .collect::<CliResult<_>>()?;
            let ledgers: Vec<_> = points
                .par_iter()
                .map(|&(f, max_rounds, w_p)| -> CliResult<_> {
                    Ok(distillation_report(&werner_state(f)?, &DistillationConfig { max_rounds, w_p })?)
                })
                .collect::<CliResult<_>>()?;
            let mut header = vec!["fidelity".to_string(), "max_rounds".to_string()];
            header.extend(
                [
                    "e_f_single_copy",
                    "delta",
                    "e_d_estimate",
                    "e_d_upper",
                    "e_bound_estimate",
                    "e_bound_lower",
                    "e_bound_upper",
                    "w_p",
                    "rounds",
                    "yield",
                    "shape",
                    "w_u",
                ]
                .map(String::from),
            );
            let mut rows = Vec::new();
            let mut violations = Vec::new();
            for ((f, max_rounds, _), l) in points.iter().zip(&ledgers) {
                let mut row = vec![num(*f), max_rounds.to_string()];
                row.extend(distill_row("", l).into_iter().skip(1));
                rows.push(row);
                violations.extend(distill_violations(l).into_iter().map(|v| format!("F = {}: {v}", num(*f))));
            }
            Ok(GridReport { header, rows, violations })
        }
    }
}

fn balance_sweep(p: &BalanceSweepParams, seed: u64) -> CliResult<GridReport> {
    if !(1..=6).contains(&p.max_per_side) {
        return Err(CliError::Input(format!("max_per_side {} outside 1..=6", p.max_per_side)));
    }
    let ledgers: Vec<_> = (0..p.count)
        .into_par_iter()
        .map(|i| -> CliResult<_> {
            let s = seed.wrapping_add(i as u64);
            let t = random_transcript(s, p.max_per_side)?;
            let first = t.snapshots()[0].clone();
            Ok((s, first, check_balance(&t)?))
        })
        .collect::<CliResult<_>>()?;
    let header = [
        "index",
        "seed",
        "n_alice",
        "n_bob",
        "e_in",
        "w_p",
        "e_out",
        "w_l",
        "balance_residual",
        "conservation_drift",
        "second_principle_margin",
    ];
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for (i, (s, first, l)) in ledgers.iter().enumerate() {
        rows.push(vec![
            i.to_string(),
            s.to_string(),
            first.qubits_alice.to_string(),
            first.qubits_bob.to_string(),
            num(l.e_in),
            num(l.w_p),
            num(l.e_out),
            num(l.w_l),
            num(l.balance_residual),
            num(l.conservation_drift),
            num(l.second_principle_margin),
        ]);
        violations.extend(l.violations().into_iter().map(|v| format!("transcript {i}: {v}")));
    }
    Ok(GridReport {
        header: header.map(String::from).to_vec(),
        rows,
        violations,
    })
}
