use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::ExitCode;

use quditcc::ir::text::{parse_qubit_circuit, parse_qudit_program, serialize_qudit_program};
use quditcc::physical::{apply_physical_pass, TransitionGraph};
use quditcc::ququart::{compile_circuit_ququart, PairingStrategy};
use quditcc::qutrit::compile_circuit_qutrit;
use quditcc::sim::{apply_circuit, measurement_distribution, StateVector, DEFAULT_MAX_UNITARY_DIM};
use quditcc::verify::{
    format_toffoli_table, report_toffoli_scaling, verify_compilation, Status, VerifyOptions, DEFAULT_MAX_STATE_DIM,
};
use quditcc::{CompilationReport, EmbeddingMap, QubitCircuit, QuditCircuit};
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::{Backend, Pairing};

pub const MAX_DIM_VAR: &str = "QUDITCC_MAX_DIM";

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

impl From<quditcc::Error> for Failure {
    fn from(e: quditcc::Error) -> Self {
        let code = if matches!(e, quditcc::Error::BudgetExceeded { .. }) { 3 } else { 2 };
        Failure { code, message: e.to_string() }
    }
}

type CmdResult = Result<ExitCode, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn to_json(value: &impl Serialize) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes")
}

fn max_unitary_dim() -> Result<usize, Failure> {
    match std::env::var(MAX_DIM_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| Failure::usage(format!("{MAX_DIM_VAR}={v} is not a dimension"))),
        Err(_) => Ok(DEFAULT_MAX_UNITARY_DIM),
    }
}

fn load_graph(path: Option<&Path>) -> Result<Option<TransitionGraph>, Failure> {
    path.map(|p| read(p)?.parse::<TransitionGraph>().map_err(Failure::from)).transpose()
}

struct Compiled {
    circuit: QuditCircuit,
    map: EmbeddingMap,
    pairing_score: Option<usize>,
}

fn compile_qubits(
    src: &QubitCircuit,
    backend: Backend,
    pairing: Pairing,
    graph: Option<&TransitionGraph>,
) -> Result<Compiled, Failure> {
    let (circuit, map, pairing_score) = match backend {
        Backend::Qutrit => {
            let (c, map) = compile_circuit_qutrit(src)?;
            (c, map, None)
        }
        Backend::Ququart => {
            let strategy = match pairing {
                Pairing::Sequential => PairingStrategy::Sequential,
                Pairing::Greedy => PairingStrategy::Greedy,
            };
            let (c, map, plan) = compile_circuit_ququart(src, strategy)?;
            (c, map, Some(plan.score))
        }
    };
    let circuit = match graph {
        Some(g) => apply_physical_pass(&circuit, g)?,
        None => circuit,
    };
    Ok(Compiled { circuit, map, pairing_score })
}

#[derive(Serialize)]
struct CompileSummary {
    backend: &'static str,
    num_qudits: usize,
    dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pairing: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pairing_score: Option<usize>,
    physical: bool,
    #[serde(flatten)]
    report: CompilationReport,
}

impl CompileSummary {
    fn text(&self) -> String {
        let mut s = format!("backend {}\nqudits {} d={}\n", self.backend, self.num_qudits, self.dim);
        if let (Some(p), Some(score)) = (self.pairing, self.pairing_score) {
            s += &format!("pairing {p} score={score}\n");
        }
        s +=
            &format!("total {}\ntwo_qudit {}\ndepth {}\n", self.report.total, self.report.two_qudit, self.report.depth);
        for (variant, n) in &self.report.by_variant {
            s += &format!("  {variant} {n}\n");
        }
        s
    }
}

fn backend_name(b: Backend) -> &'static str {
    match b {
        Backend::Qutrit => "qutrit",
        Backend::Ququart => "ququart",
    }
}

pub fn compile(
    input: &Path,
    backend: Backend,
    pairing: Pairing,
    graph: Option<&Path>,
    out: Option<&Path>,
    json: bool,
) -> CmdResult {
    let src = parse_qubit_circuit(&read(input)?)?;
    let graph = load_graph(graph)?;
    let compiled = compile_qubits(&src, backend, pairing, graph.as_ref())?;
    let program = serialize_qudit_program(&compiled.circuit, Some(&compiled.map));
    let summary = CompileSummary {
        backend: backend_name(backend),
        num_qudits: compiled.circuit.num_qudits(),
        dim: compiled.circuit.dim(),
        pairing: compiled.pairing_score.map(|_| match pairing {
            Pairing::Sequential => "sequential",
            Pairing::Greedy => "greedy",
        }),
        pairing_score: compiled.pairing_score,
        physical: graph.is_some(),
        report: compiled.circuit.count_gates(),
    };
    let summary = if json { to_json(&summary) + "\n" } else { summary.text() };
    match out {
        Some(path) => {
            write(path, &program)?;
            print!("{summary}");
        }
        None => {
            print!("{program}");
            eprint!("{summary}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Placement assumed when a qudit file has no `map` lines.
fn default_map(dim: usize, num_qubits: usize) -> Result<EmbeddingMap, Failure> {
    match dim {
        3 => Ok(EmbeddingMap::one_per_qudit(3, num_qubits)?),
        4 => Ok(EmbeddingMap::sequential_pairs(num_qubits)),
        d => Err(Failure::usage(format!("no default qubit placement for d={d}; add `map` lines"))),
    }
}

pub fn verify(source: &Path, compiled: &Path, tol: f64, json: bool, verbose: bool) -> CmdResult {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Failure::usage(format!("--tol must be positive, got {tol}")));
    }
    let src = parse_qubit_circuit(&read(source)?)?;
    let program = parse_qudit_program(&read(compiled)?)?;
    let map = match program.embedding {
        Some(map) => map,
        None => default_map(program.circuit.dim(), src.num_qubits())?,
    };
    let opts = VerifyOptions { tol, max_unitary_dim: max_unitary_dim()?, max_state_dim: DEFAULT_MAX_STATE_DIM };
    let verdict = verify_compilation(&src, &program.circuit, &map, &opts)?;
    if json {
        println!("{}", to_json(&verdict));
    } else {
        println!("{}", verdict.status);
        if verbose {
            println!("global_phase {}", verdict.global_phase);
            println!("max_deviation {:e}", verdict.max_deviation);
            println!("leakage_max {:e}", verdict.leakage_max);
            println!("two_qudit {}", verdict.counts.two_qudit);
        }
    }
    Ok(if verdict.status == Status::Different { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

pub struct SimulateOptions {
    pub threshold: f64,
    pub shots: Option<usize>,
    pub seed: u64,
    pub json: bool,
}

fn is_qudit_program(text: &str) -> bool {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .is_some_and(|l| l.starts_with("qudits"))
}

fn digits(levels: &[usize], dim: usize) -> String {
    let parts: Vec<String> = levels.iter().map(usize::to_string).collect();
    parts.join(if dim > 10 { "," } else { "" })
}

fn bit_string(bits: usize, n: usize) -> String {
    (0..n).map(|q| if (bits >> (n - 1 - q)) & 1 == 1 { '1' } else { '0' }).collect()
}

/// Rounds away floating-point dust so listings are stable and never show `-0`.
fn tidy(x: f64) -> f64 {
    let r = (x * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn parse_basis(basis: &str, c: &QuditCircuit, map: Option<&EmbeddingMap>) -> Result<usize, Failure> {
    let malformed = || Failure::usage(format!("malformed basis string `{basis}`"));
    if let Some(map) = map {
        let n = map.num_qubits();
        if basis.len() == n && basis.chars().all(|ch| ch == '0' || ch == '1') {
            let bits = usize::from_str_radix(basis, 2).unwrap_or(0);
            return Ok(if n == 0 { 0 } else { map.register_index(bits, c.num_qudits()) });
        }
    }
    let levels: Vec<usize> = if basis.contains(',') {
        basis.split(',').map(|t| t.trim().parse().map_err(|_| malformed())).collect::<Result<_, _>>()?
    } else {
        basis.chars().map(|ch| ch.to_digit(10).map(|v| v as usize).ok_or_else(malformed)).collect::<Result<_, _>>()?
    };
    if levels.len() != c.num_qudits() || levels.iter().any(|&l| l >= c.dim()) {
        return Err(malformed());
    }
    Ok(levels.iter().fold(0, |acc, &l| acc * c.dim() + l))
}

#[derive(Serialize)]
struct AmplitudeRow {
    levels: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    qubits: Option<String>,
    re: f64,
    im: f64,
    probability: f64,
}

#[derive(Serialize)]
struct OutcomeRow {
    record: String,
    probability: f64,
}

#[derive(Serialize)]
struct SimulateOutput {
    #[serde(skip_serializing_if = "Vec::is_empty")]
    amplitudes: Vec<AmplitudeRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    outcomes: Vec<OutcomeRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    leakage: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    shots: Option<BTreeMap<String, usize>>,
}

fn sample(labels: &[String], weights: &[f64], shots: usize, seed: u64) -> Result<BTreeMap<String, usize>, Failure> {
    let dist = WeightedIndex::new(weights).map_err(|e| Failure::usage(format!("cannot sample: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = BTreeMap::new();
    for _ in 0..shots {
        *counts.entry(labels[dist.sample(&mut rng)].clone()).or_insert(0) += 1;
    }
    Ok(counts)
}

pub fn simulate(
    input: &Path,
    basis: &str,
    backend: Backend,
    pairing: Pairing,
    graph: Option<&Path>,
    opts: &SimulateOptions,
) -> CmdResult {
    let text = read(input)?;
    let graph = load_graph(graph)?;
    let (circuit, map) = if is_qudit_program(&text) {
        let program = parse_qudit_program(&text)?;
        let circuit = match &graph {
            Some(g) => apply_physical_pass(&program.circuit, g)?,
            None => program.circuit,
        };
        (circuit, program.embedding)
    } else {
        let compiled = compile_qubits(&parse_qubit_circuit(&text)?, backend, pairing, graph.as_ref())?;
        (compiled.circuit, Some(compiled.map))
    };
    let state_dim = circuit.register_dim().unwrap_or(usize::MAX);
    if state_dim > DEFAULT_MAX_STATE_DIM {
        return Err(quditcc::Error::BudgetExceeded { dim: state_dim, cap: DEFAULT_MAX_STATE_DIM }.into());
    }
    let index = parse_basis(basis, &circuit, map.as_ref())?;
    let input_state = StateVector::basis(circuit.num_qudits(), circuit.dim(), index)?;
    let d = circuit.dim();

    let mut output = SimulateOutput { amplitudes: Vec::new(), outcomes: Vec::new(), leakage: None, shots: None };
    let (labels, weights): (Vec<String>, Vec<f64>);
    if circuit.has_measurement() {
        let dist = measurement_distribution(&circuit, &input_state)?;
        output.outcomes =
            dist.iter().map(|(record, &p)| OutcomeRow { record: digits(record, d), probability: tidy(p) }).collect();
        labels = output.outcomes.iter().map(|o| o.record.clone()).collect();
        weights = dist.values().copied().collect();
    } else {
        let out = apply_circuit(&circuit, &input_state)?;
        let mut kept = 0.0;
        for (idx, a) in out.amplitudes().iter().enumerate() {
            let qubits =
                map.as_ref().and_then(|m| m.decode(idx, circuit.num_qudits()).map(|b| bit_string(b, m.num_qubits())));
            if qubits.is_some() {
                kept += a.norm_sqr();
            }
            if a.norm() > opts.threshold {
                output.amplitudes.push(AmplitudeRow {
                    levels: digits(&out.levels_of(idx), d),
                    qubits,
                    re: tidy(a.re),
                    im: tidy(a.im),
                    probability: tidy(a.norm_sqr()),
                });
            }
        }
        output.leakage = map.as_ref().map(|_| tidy((1.0 - kept).max(0.0)));
        labels = output.amplitudes.iter().map(|r| r.levels.clone()).collect();
        weights = output.amplitudes.iter().map(|r| r.probability).collect();
    }
    if let Some(shots) = opts.shots {
        output.shots = Some(sample(&labels, &weights, shots, opts.seed)?);
    }

    if opts.json {
        println!("{}", to_json(&output));
        return Ok(ExitCode::SUCCESS);
    }
    if !output.amplitudes.is_empty() {
        println!("{:<12} {:<12} {:>22} {:>12}", "levels", "qubits", "amplitude", "probability");
        for r in &output.amplitudes {
            let amp = format!("{:+.6}{:+.6}i", r.re, r.im);
            println!("{:<12} {:<12} {:>22} {:>12.6}", r.levels, r.qubits.as_deref().unwrap_or("-"), amp, r.probability);
        }
    }
    if !output.outcomes.is_empty() {
        println!("{:<16} {:>12}", "record", "probability");
        for o in &output.outcomes {
            println!("{:<16} {:>12.6}", o.record, o.probability);
        }
    }
    if let Some(leak) = output.leakage {
        println!("leakage {leak:?}");
    }
    if let Some(shots) = &output.shots {
        for (label, n) in shots {
            println!("shots {label} {n}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

pub fn report(from: usize, to: usize, json: bool) -> CmdResult {
    let rows = report_toffoli_scaling(from..=to)?;
    if json {
        println!("{}", to_json(&rows));
    } else {
        print!("{}", format_toffoli_table(&rows));
    }
    Ok(ExitCode::SUCCESS)
}
