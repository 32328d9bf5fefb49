//! Passes that restrict a qudit circuit to physically addressable operations.
//!
//! Rotations on level pairs outside the transition graph are conjugated by
//! `R_x(pi)` pulses along a shortest path. Two-qudit MS and ZZ gates are moved
//! onto the `(0,1) x (0,1)` block by permutation pulses and realized with the
//! physical MS gate plus phase corrections. Full readout becomes a sequence of
//! binary `|0>` projections with population swaps.

use std::collections::{BTreeSet, VecDeque};
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::ir::{normalize_angle, QuditCircuit, QuditGate};
use crate::sim::{gate_matrix, Matrix, Outcomes, StateVector};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionGraph {
    dim: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl TransitionGraph {
    pub fn new(dim: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidArgument(format!("graph dimension {dim} < 2")));
        }
        let mut set = BTreeSet::new();
        for (i, j) in edges {
            if i == j || i >= dim || j >= dim {
                return Err(Error::InvalidLevels(format!("edge ({i},{j}) for d={dim}")));
            }
            set.insert((i.min(j), i.max(j)));
        }
        let graph = TransitionGraph { dim, edges: set };
        if graph.distances_from(0).iter().any(Option::is_none) {
            return Err(Error::DisconnectedGraph);
        }
        Ok(graph)
    }

    pub fn complete(dim: usize) -> Result<Self> {
        Self::new(dim, (0..dim).flat_map(|i| (i + 1..dim).map(move |j| (i, j))))
    }

    /// Nearest-neighbour transitions `{01, 12, ..., (d-2)(d-1)}`.
    pub fn ladder(dim: usize) -> Result<Self> {
        Self::new(dim, (1..dim).map(|j| (j - 1, j)))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i.min(j), i.max(j)))
    }

    fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.dim).filter(move |&u| self.has_edge(u, v))
    }

    fn distances_from(&self, start: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.dim];
        dist[start] = Some(0);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            let next = dist[v].map(|x| x + 1);
            for u in self.neighbours(v) {
                if dist[u].is_none() {
                    dist[u] = next;
                    queue.push_back(u);
                }
            }
        }
        dist
    }

    /// Lexicographically smallest among the shortest paths from `from` to `to`.
    pub fn shortest_path(&self, from: usize, to: usize) -> Result<Vec<usize>> {
        if from >= self.dim || to >= self.dim {
            return Err(Error::InvalidLevels(format!("path {from}->{to} for d={}", self.dim)));
        }
        let dist = self.distances_from(to);
        let mut path = vec![from];
        let mut v = from;
        while v != to {
            let here = dist[v].ok_or(Error::DisconnectedGraph)?;
            v = self.neighbours(v).find(|&u| dist[u] == Some(here - 1)).ok_or(Error::DisconnectedGraph)?;
            path.push(v);
        }
        Ok(path)
    }
}

impl FromStr for TransitionGraph {
    type Err = Error;

    /// `d=<d>` followed by `edge <i> <j>` lines; `#` starts a comment.
    fn from_str(text: &str) -> Result<Self> {
        let mut dim = None;
        let mut edges = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |message: String| Error::Syntax { line: n + 1, message };
            if let Some(value) = line.strip_prefix("d=") {
                if dim.is_some() {
                    return Err(syntax("repeated `d=` header".into()));
                }
                dim = Some(value.trim().parse::<usize>().map_err(|e| syntax(format!("dimension: {e}")))?);
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                ["edge", i, j] => {
                    let level = |s: &str| s.parse::<usize>().map_err(|e| syntax(format!("level `{s}`: {e}")));
                    edges.push((level(i)?, level(j)?));
                }
                [other, ..] => return Err(Error::UnknownMnemonic { line: n + 1, mnemonic: other.to_string() }),
                [] => unreachable!(),
            }
        }
        let dim = dim.ok_or_else(|| Error::Syntax { line: 1, message: "missing `d=<d>` header".into() })?;
        Self::new(dim, edges)
    }
}

impl fmt::Display for TransitionGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "d={}", self.dim)?;
        for (i, j) in &self.edges {
            writeln!(f, "edge {i} {j}")?;
        }
        Ok(())
    }
}

fn pulse(qudit: usize, i: usize, j: usize, theta: f64) -> QuditGate {
    QuditGate::Rot { qudit, i: i.min(j), j: i.max(j), phi: 0.0, theta }
}

fn inverse_sequence(gates: &[QuditGate]) -> Vec<QuditGate> {
    gates.iter().rev().map(|g| g.inverse().expect("unitary gate")).collect()
}

fn check_dim(graph: &TransitionGraph, dim: usize) -> Result<()> {
    if graph.dim != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: graph.dim });
    }
    Ok(())
}

/// Rewrites one rotation onto graph edges.
///
/// Off-graph `R^{ij}` becomes `W, R^{kj}, W^dagger` where `k` is the last hop
/// before `j` and `W` is the chain of `R_x(pi)` pulses carrying `|i>` to
/// `(-i)^r |k>`; the core phase absorbs that factor.
pub fn route_rotation(g: &QuditGate, graph: &TransitionGraph) -> Result<Vec<QuditGate>> {
    let QuditGate::Rot { qudit, i, j, phi, theta } = *g else {
        return Err(Error::InvalidArgument(format!("route_rotation expects `rot`, got `{}`", g.mnemonic())));
    };
    if i >= graph.dim || j >= graph.dim {
        return Err(Error::InvalidLevels(format!("pair ({i},{j}) for d={}", graph.dim)));
    }
    if graph.has_edge(i, j) {
        return Ok(vec![g.clone()]);
    }
    let path = graph.shortest_path(i, j)?;
    let hops = path.len() - 2;
    let k = path[hops];
    let carry: Vec<QuditGate> = path[..=hops].windows(2).map(|w| pulse(qudit, w[0], w[1], PI)).collect();
    // Each pulse contributes -i, so the carried amplitude is (-i)^hops.
    let core_phi = normalize_angle(phi + FRAC_PI_2 * hops as f64);
    let core = QuditGate::Rot { qudit, i: k, j, phi: core_phi, theta }.normalized()?;
    let mut out = carry.clone();
    out.push(core);
    out.extend(inverse_sequence(&carry));
    Ok(out)
}

fn route_all(gates: Vec<QuditGate>, graph: &TransitionGraph) -> Result<Vec<QuditGate>> {
    let mut out = Vec::new();
    for g in gates {
        out.extend(route_rotation(&g, graph)?);
    }
    Ok(out)
}

/// Single-qudit pulses bringing `first -> 0` and `second -> 1`, with the
/// resulting amplitudes `<0|W|first>` and `<1|W|second>`.
fn permutation_to_01(
    qudit: usize,
    first: usize,
    second: usize,
    graph: &TransitionGraph,
) -> Result<(Vec<QuditGate>, f64)> {
    let mut swaps = Vec::new();
    if first != 0 {
        swaps.push(pulse(qudit, first, 0, PI));
    }
    let second_now = if second == 0 { first } else { second };
    if second_now != 1 {
        swaps.push(pulse(qudit, second_now, 1, PI));
    }
    let w = swaps
        .iter()
        .try_fold(Matrix::identity(graph.dim), |acc, g| gate_matrix(g, graph.dim).map(|m| m.matmul(&acc)))?;
    let (a, b) = (w[(0, first)], w[(1, second)]);
    Ok((route_all(swaps, graph)?, (b / a).arg()))
}

/// Realizes `MS^{ij,kl}_phi(chi)` with the physical `(0,1)` MS gate.
///
/// Each qudit is permuted so its pair lands on `(0, 1)`. The relative phase
/// picked up by the pulses shifts `phi` on qudit `a`; a `Ph_1` on qudit `b`
/// equalizes the two shifts. The centre is `PhysMS` followed by
/// `Ph_0(chi/2) Ph_1(chi/2)` on both qudits.
pub fn lift_ms(g: &QuditGate, graph: &TransitionGraph) -> Result<Vec<QuditGate>> {
    let QuditGate::Ms { a, b, i, j, k, l, phi, chi } = *g else {
        return Err(Error::InvalidArgument(format!("lift_ms expects `ms`, got `{}`", g.mnemonic())));
    };
    let (wa, delta_a) = permutation_to_01(a, i, j, graph)?;
    let (mut wb, delta_b) = permutation_to_01(b, k, l, graph)?;
    let offset = normalize_angle(delta_a - delta_b);
    if offset.abs() > 1e-15 {
        wb.push(QuditGate::Ph { qudit: b, level: 1, theta: offset });
    }
    let mut out = wa.clone();
    out.extend(wb.iter().cloned());
    out.push(QuditGate::PhysMs { a, b, phi: normalize_angle(phi + delta_a), chi });
    for qudit in [a, b] {
        for level in [0, 1] {
            out.push(QuditGate::Ph { qudit, level, theta: normalize_angle(chi / 2.0) });
        }
    }
    out.extend(inverse_sequence(&wb));
    out.extend(inverse_sequence(&wa));
    Ok(out)
}

/// `ZZ = (Ry(pi/2) (x) Ry(pi/2)) XX (Ry(-pi/2) (x) Ry(-pi/2))`, with the
/// `Ry` gates routed and the `XX` lifted.
fn lift_zz(g: &QuditGate, graph: &TransitionGraph) -> Result<Vec<QuditGate>> {
    let QuditGate::Zz { a, b, i, j, k, l, chi } = *g else {
        unreachable!("caller matches zz");
    };
    let ry = |theta| {
        vec![
            QuditGate::Rot { qudit: a, i, j, phi: FRAC_PI_2, theta },
            QuditGate::Rot { qudit: b, i: k, j: l, phi: FRAC_PI_2, theta },
        ]
    };
    let mut out = route_all(ry(-FRAC_PI_2), graph)?;
    out.extend(lift_ms(&QuditGate::Ms { a, b, i, j, k, l, phi: 0.0, chi }, graph)?);
    out.extend(route_all(ry(FRAC_PI_2), graph)?);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReadoutStep {
    /// Binary `|0>` projection.
    Project,
    /// Population exchange between level 0 and the given level.
    Swap(usize),
}

/// Computational-basis readout from `d - 1` binary projections.
///
/// Round `r` projects onto `|0>`; between rounds level `r` is swapped into
/// level 0. The first `P` outcome in round `r` (1-based) means level `r - 1`;
/// no `P` at all means level `d - 1`. Swaps are unconditional and undone at the
/// end, so the measured qudit is left in its observed level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReadoutPlan {
    dim: usize,
    steps: Vec<ReadoutStep>,
}

pub fn schedule_readout(dim: usize) -> Result<ReadoutPlan> {
    if dim < 2 {
        return Err(Error::InvalidArgument(format!("readout needs d >= 2, got {dim}")));
    }
    let mut steps = vec![ReadoutStep::Project];
    for r in 1..dim - 1 {
        steps.push(ReadoutStep::Swap(r));
        steps.push(ReadoutStep::Project);
    }
    steps.extend((1..dim - 1).rev().map(ReadoutStep::Swap));
    Ok(ReadoutPlan { dim, steps })
}

impl ReadoutPlan {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn steps(&self) -> &[ReadoutStep] {
        &self.steps
    }

    pub fn rounds(&self) -> usize {
        self.steps.iter().filter(|s| **s == ReadoutStep::Project).count()
    }

    /// Level from the projection record (0 = `P`, 1 = `P-perp`, one per round).
    pub fn decode(&self, record: &[usize]) -> Result<usize> {
        if record.len() != self.rounds() {
            return Err(Error::DimensionMismatch { expected: self.rounds(), found: record.len() });
        }
        Ok(record.iter().position(|&o| o == 0).unwrap_or(self.dim - 1))
    }

    /// Gate form on `qudit`, swaps routed on `graph`.
    pub fn to_gates(&self, qudit: usize, graph: &TransitionGraph) -> Result<Vec<QuditGate>> {
        check_dim(graph, self.dim)?;
        let mut out = Vec::new();
        for step in &self.steps {
            match *step {
                ReadoutStep::Project => out.push(QuditGate::NdProject { qudit }),
                ReadoutStep::Swap(r) => out.extend(route_rotation(&pulse(qudit, 0, r, PI), graph)?),
            }
        }
        Ok(out)
    }

    /// Distribution of decoded levels for a single-qudit input state.
    pub fn simulate(&self, graph: &TransitionGraph, input: &StateVector) -> Result<Vec<f64>> {
        let mut c = QuditCircuit::new(1, self.dim)?;
        c.extend(self.to_gates(0, graph)?)?;
        let outcomes: Outcomes = crate::sim::measurement_distribution(&c, input)?;
        let mut dist = vec![0.0; self.dim];
        for (record, p) in outcomes {
            dist[self.decode(&record)?] += p;
        }
        Ok(dist)
    }
}

/// Rewrites a whole circuit onto `graph`: rotations routed, `ms` and `zz`
/// lifted to `physms`, full readouts expanded into binary projections.
pub fn apply_physical_pass(c: &QuditCircuit, graph: &TransitionGraph) -> Result<QuditCircuit> {
    check_dim(graph, c.dim())?;
    let readout = schedule_readout(c.dim())?;
    let mut out = QuditCircuit::new(c.num_qudits(), c.dim())?;
    out.set_global_phase(c.global_phase());
    for g in c.gates() {
        let rewritten = match g {
            QuditGate::Rot { .. } => route_rotation(g, graph)?,
            QuditGate::Ms { .. } => lift_ms(g, graph)?,
            QuditGate::Zz { .. } => lift_zz(g, graph)?,
            QuditGate::ProjMeasure { qudit } => readout.to_gates(*qudit, graph)?,
            QuditGate::Ph { .. } | QuditGate::PhysMs { .. } | QuditGate::NdProject { .. } => vec![g.clone()],
        };
        out.extend(rewritten)?;
    }
    Ok(out)
}
