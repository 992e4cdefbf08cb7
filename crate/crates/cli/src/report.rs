//! Report types and their table / JSON / CSV renderings.

use serde_json::{json, Value};

use qbalance_core::ledger::BalanceLedger;
use qbalance_core::measures::GibbsHelmholtzRecord;
use qbalance_core::protocols::{DistillationLedger, TrajectoryPoint, TranscriptExport};

use crate::args::Format;
use crate::format::{bar, columns, csv, json as to_json, num};

pub trait Report {
    fn json(&self) -> Value;
    fn csv(&self) -> String;
    fn table(&self) -> String;
    /// Failed invariants. A non-empty list turns into exit status 2.
    fn violations(&self) -> Vec<String>;

    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => to_json(self.json()),
            Format::Csv => self.csv(),
            Format::Table => self.table(),
        }
    }
}

pub struct BalanceReport {
    pub protocol: String,
    pub ledger: BalanceLedger,
    pub transcript: TranscriptExport,
    /// Fidelity of the received message, when the protocol moves one.
    pub output_fidelity: Option<f64>,
    pub extra_violations: Vec<String>,
}

const LEDGER_HEADER: [&str; 15] = [
    "protocol",
    "e_in",
    "w_p",
    "e_out",
    "w_l",
    "w_u",
    "i_a_in",
    "i_a_out",
    "i_b_in",
    "i_b_out",
    "conservation_in",
    "conservation_out",
    "balance_residual",
    "conservation_drift",
    "second_principle_margin",
];

impl Report for BalanceReport {
    fn json(&self) -> Value {
        let mut v = json!({
            "protocol": self.protocol,
            "ledger": self.ledger,
            "transcript": self.transcript,
        });
        if let Some(f) = self.output_fidelity {
            v["output_fidelity"] = json!(f);
        }
        v
    }

    fn csv(&self) -> String {
        let l = &self.ledger;
        let mut header = LEDGER_HEADER.to_vec();
        let mut row = vec![self.protocol.clone()];
        row.extend(
            [
                l.e_in,
                l.w_p,
                l.e_out,
                l.w_l,
                l.w_u,
                l.i_a_in,
                l.i_a_out,
                l.i_b_in,
                l.i_b_out,
                l.conservation_in,
                l.conservation_out,
                l.balance_residual,
                l.conservation_drift,
                l.second_principle_margin,
            ]
            .map(num),
        );
        if let Some(f) = self.output_fidelity {
            header.push("output_fidelity");
            row.push(num(f));
        }
        csv(&header, &[row])
    }

    fn table(&self) -> String {
        let l = &self.ledger;
        let mut out = format!("{}\n\n", self.protocol);
        let rows: Vec<Vec<String>> = self
            .transcript
            .snapshots
            .iter()
            .map(|s| {
                vec![
                    s.step.to_string(),
                    s.kind.clone(),
                    s.qubits_alice.to_string(),
                    s.qubits_bob.to_string(),
                    num(s.i_alice),
                    num(s.i_bob),
                    num(s.entanglement),
                    num(s.w_p),
                    num(s.w_l),
                ]
            })
            .collect();
        out += &columns(&["step", "kind", "n_A", "n_B", "I_A", "I_B", "E", "W_p", "W_l"], &rows);
        out += "\n";
        let bars: Vec<Vec<String>> = [("E_in", l.e_in), ("W_p", l.w_p), ("E_out", l.e_out), ("W_l", l.w_l), ("W_u", l.w_u)]
            .iter()
            .map(|(k, v)| vec![k.to_string(), num(*v), bar(*v)])
            .collect();
        out += &columns(&["quantity", "value", ""], &bars);
        out += &format!(
            "\nE_in + W_p = {}   E_out + W_l = {}   residual {}\n",
            num(l.e_in + l.w_p),
            num(l.e_out + l.w_l),
            num(l.balance_residual)
        );
        out += &format!(
            "I_A + I_B + 2E: {} -> {}\n",
            num(l.conservation_in),
            num(l.conservation_out)
        );
        out += &format!(
            "E_out - E_in = {} <= W_p = {}: {}\n",
            num(l.e_out - l.e_in),
            num(l.w_p),
            if l.second_principle_holds() { "holds" } else { "VIOLATED" }
        );
        if let Some(f) = self.output_fidelity {
            out += &format!("output fidelity {}\n", num(f));
        }
        out
    }

    fn violations(&self) -> Vec<String> {
        let mut v = self.ledger.violations();
        v.extend(self.extra_violations.iter().cloned());
        v
    }
}

pub struct TrajectoryReport {
    pub initial_fidelity: f64,
    pub twirl: bool,
    pub points: Vec<TrajectoryPoint>,
    /// Largest |fast map − circuit| over p_keep and fidelity, when the fast map applies.
    pub max_circuit_deviation: Option<f64>,
    pub extra_violations: Vec<String>,
}

impl Report for TrajectoryReport {
    fn json(&self) -> Value {
        json!({
            "protocol": "bbpssw",
            "initial_fidelity": self.initial_fidelity,
            "twirl": self.twirl,
            "trajectory": self.points,
            "max_circuit_deviation": self.max_circuit_deviation,
        })
    }

    fn csv(&self) -> String {
        csv(&["round", "fidelity", "p_keep", "yield"], &self.rows())
    }

    fn table(&self) -> String {
        let mut rows = self.rows();
        for (r, p) in rows.iter_mut().zip(&self.points) {
            r.push(bar(p.fidelity));
        }
        let mut out = format!("recurrence from F = {}\n\n", num(self.initial_fidelity));
        out += &columns(&["round", "fidelity", "p_keep", "yield", ""], &rows);
        if let Some(d) = self.max_circuit_deviation {
            out += &format!("\nfast map vs full circuit: max deviation {}\n", num(d));
        }
        out
    }

    fn violations(&self) -> Vec<String> {
        self.extra_violations.clone()
    }
}

impl TrajectoryReport {
    fn rows(&self) -> Vec<Vec<String>> {
        self.points
            .iter()
            .map(|p| vec![p.round.to_string(), num(p.fidelity), num(p.p_keep), num(p.surviving_fraction)])
            .collect()
    }
}

pub struct DistillReport {
    pub input: String,
    pub ledger: DistillationLedger,
}

const DISTILL_HEADER: [&str; 13] = [
    "input",
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
];

pub fn distill_row(input: &str, l: &DistillationLedger) -> Vec<String> {
    let mut row = vec![input.to_string()];
    row.extend([l.e_f, l.delta, l.e_d_estimate, l.e_d_upper, l.e_bound_estimate, l.e_bound_lower, l.e_bound_upper, l.w_p].map(num));
    row.push(l.rounds.to_string());
    row.push(num(l.yield_fraction));
    row.push(shape_name(l));
    row.push(num(l.w_u()));
    row
}

fn shape_name(l: &DistillationLedger) -> String {
    serde_json::to_value(l.shape)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

pub fn distill_violations(l: &DistillationLedger) -> Vec<String> {
    let mut v = Vec::new();
    if l.e_bound_estimate < -1e-8 {
        v.push(format!("negative bound entanglement {}", l.e_bound_estimate));
    }
    if !(0.0..=1.0).contains(&l.yield_fraction) {
        v.push(format!("yield {} outside [0, 1]", l.yield_fraction));
    }
    if l.e_d_estimate > l.e_d_upper + 1e-9 {
        v.push(format!("E_D estimate {} above its upper bound {}", l.e_d_estimate, l.e_d_upper));
    }
    v
}

impl Report for DistillReport {
    fn json(&self) -> Value {
        json!({ "input": self.input, "ledger": self.ledger, "w_u": self.ledger.w_u() })
    }

    fn csv(&self) -> String {
        csv(&DISTILL_HEADER, &[distill_row(&self.input, &self.ledger)])
    }

    fn table(&self) -> String {
        let l = &self.ledger;
        let mut out = format!("distillation balance for {}\n(E_D and E_bound are estimates)\n\n", self.input);
        let inputs = [("E_F", l.e_f), ("Delta", l.delta), ("W_p", l.w_p)];
        let outputs = [("E_D = W_u", l.e_d_estimate), ("Delta", l.delta), ("E_bound", l.e_bound_estimate)];
        let rows: Vec<Vec<String>> = inputs
            .iter()
            .map(|(k, v)| vec!["in".into(), k.to_string(), num(*v), bar(*v)])
            .chain(outputs.iter().map(|(k, v)| vec!["out".into(), k.to_string(), num(*v), bar(*v)]))
            .collect();
        out += &columns(&["", "quantity", "value", ""], &rows);
        out += &format!(
            "\nE_D in [{}, {}]   E_bound in [{}, {}]\n",
            num(l.e_d_estimate),
            num(l.e_d_upper),
            num(l.e_bound_lower),
            num(l.e_bound_upper)
        );
        out += &format!(
            "recurrence rounds {}   yield {}   shape {}\n",
            l.rounds,
            num(l.yield_fraction),
            shape_name(l)
        );
        out
    }

    fn violations(&self) -> Vec<String> {
        distill_violations(&self.ledger)
    }
}

pub struct MeasuresReport {
    pub input: String,
    pub entropy: f64,
    pub concurrence: Option<f64>,
    pub negativity: f64,
    pub log_negativity: f64,
    pub ppt: bool,
    pub hashing: Option<f64>,
    pub record: GibbsHelmholtzRecord,
}

impl MeasuresReport {
    fn pairs(&self) -> Vec<(&'static str, String)> {
        let opt = |x: Option<f64>| x.map(num).unwrap_or_default();
        let r = &self.record;
        vec![
            ("input", self.input.clone()),
            ("entropy", num(self.entropy)),
            ("concurrence", opt(self.concurrence)),
            ("negativity", num(self.negativity)),
            ("log_negativity", num(self.log_negativity)),
            ("ppt", self.ppt.to_string()),
            ("hashing", opt(self.hashing)),
            ("e_f_single_copy", num(r.e_f)),
            ("e_d_lower", num(r.e_d_lower)),
            ("e_d_upper", num(r.e_d_upper)),
            ("e_bound_lower", num(r.e_bound_lower)),
            ("e_bound_upper", num(r.e_bound_upper)),
            (
                "classification",
                serde_json::to_value(r.classification)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_string))
                    .unwrap_or_default(),
            ),
        ]
    }
}

impl Report for MeasuresReport {
    fn json(&self) -> Value {
        json!({
            "input": self.input,
            "entropy": self.entropy,
            "concurrence": self.concurrence,
            "negativity": self.negativity,
            "log_negativity": self.log_negativity,
            "ppt": self.ppt,
            "hashing": self.hashing,
            "gibbs_helmholtz": self.record,
        })
    }

    fn csv(&self) -> String {
        let p = self.pairs();
        let header: Vec<&str> = p.iter().map(|(k, _)| *k).collect();
        csv(&header, &[p.into_iter().map(|(_, v)| v).collect()])
    }

    fn table(&self) -> String {
        let rows: Vec<Vec<String>> = self.pairs().into_iter().map(|(k, v)| vec![k.to_string(), v]).collect();
        let mut out = columns(&["measure", "value"], &rows);
        let r = &self.record;
        out += &format!(
            "\nE_F = E_D + E_bound with E_D in [{}, {}]{}\n",
            num(r.e_d_lower),
            num(r.e_d_upper),
            if r.irreversible() { ", irreversible" } else { "" }
        );
        out
    }

    fn violations(&self) -> Vec<String> {
        let r = &self.record;
        let mut v = Vec::new();
        if r.e_d_lower > r.e_d_upper + 1e-9 {
            v.push(format!("E_D bracket inverted: [{}, {}]", r.e_d_lower, r.e_d_upper));
        }
        if self.ppt && r.e_d_lower != 0.0 {
            v.push("distillable entanglement claimed for a PPT state".into());
        }
        v
    }
}

/// A grid of rows with a fixed header, shared by the sweeps.
pub struct GridReport {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub violations: Vec<String>,
}

impl Report for GridReport {
    fn json(&self) -> Value {
        let cell = |c: &String| c.parse::<f64>().map_or_else(|_| json!(c), |x| json!(x));
        Value::Array(
            self.rows
                .iter()
                .map(|r| Value::Object(self.header.iter().cloned().zip(r.iter().map(cell)).collect()))
                .collect(),
        )
    }

    fn csv(&self) -> String {
        let h: Vec<&str> = self.header.iter().map(String::as_str).collect();
        csv(&h, &self.rows)
    }

    fn table(&self) -> String {
        let h: Vec<&str> = self.header.iter().map(String::as_str).collect();
        columns(&h, &self.rows)
    }

    fn violations(&self) -> Vec<String> {
        self.violations.clone()
    }
}
