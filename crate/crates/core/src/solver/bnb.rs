//! Best-first branch-and-bound over the binary columns of a [`MilpProblem`].

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use super::simplex::{Basis, LpModel, LpOptions, LpSolution, LpStatus};
use crate::problem::MilpProblem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Branching {
    /// Branch on the binary farthest from integral; ties go to the lowest column.
    #[default]
    MostFractional,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BnbOptions {
    pub gap_rel: f64,
    pub integrality_tol: f64,
    pub feasibility_tol: f64,
    pub node_limit: usize,
    pub time_limit: Option<Duration>,
    pub branching: Branching,
}

impl Default for BnbOptions {
    fn default() -> Self {
        Self {
            gap_rel: 1e-6,
            integrality_tol: 1e-6,
            feasibility_tol: 1e-7,
            node_limit: 100_000,
            time_limit: None,
            branching: Branching::MostFractional,
        }
    }
}

impl BnbOptions {
    fn lp_options(&self) -> LpOptions {
        LpOptions {
            feasibility_tol: self.feasibility_tol,
            ..LpOptions::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MilpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// Stopped at the node limit with an incumbent.
    NodeLimit,
    /// Stopped at the time limit with an incumbent.
    TimeLimit,
    /// Stopped at a limit before any integral solution was found.
    LimitInfeasible,
    /// The root relaxation could not be solved.
    Failed,
}

impl MilpStatus {
    /// True when `x` holds an integral feasible point.
    pub fn has_solution(self) -> bool {
        matches!(self, MilpStatus::Optimal | MilpStatus::NodeLimit | MilpStatus::TimeLimit)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            MilpStatus::Optimal => "optimal",
            MilpStatus::Infeasible => "infeasible",
            MilpStatus::Unbounded => "unbounded",
            MilpStatus::NodeLimit => "node-limit",
            MilpStatus::TimeLimit => "time-limit",
            MilpStatus::LimitInfeasible => "limit-infeasible",
            MilpStatus::Failed => "failed",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MilpSolution {
    pub status: MilpStatus,
    pub x: Vec<f64>,
    /// Incumbent objective (including offset); infinite without one.
    pub objective: f64,
    /// Best proven lower bound.
    pub bound: f64,
    /// Relative gap `(objective - bound) / max(1, |objective|)`.
    pub gap: f64,
    pub nodes: usize,
    pub lp_iterations: usize,
    /// Objective of each new incumbent, in the order found.
    pub incumbent_history: Vec<f64>,
}

struct Node {
    bound: f64,
    depth: usize,
    id: usize,
    lower: Vec<f64>,
    upper: Vec<f64>,
    x: Vec<f64>,
    basis: Option<Basis>,
}

// BinaryHeap is a max-heap; invert so the smallest bound pops first, then the
// deepest node, then the oldest.
impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .bound
            .total_cmp(&self.bound)
            .then(self.depth.cmp(&other.depth))
            .then(other.id.cmp(&self.id))
    }
}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

struct Search<'a> {
    model: LpModel,
    binaries: Vec<usize>,
    opts: &'a BnbOptions,
    lp_opts: LpOptions,
    incumbent: Option<(f64, Vec<f64>)>,
    history: Vec<f64>,
    lp_iterations: usize,
}

impl Search<'_> {
    fn solve(&mut self, lower: &[f64], upper: &[f64], warm: Option<&Basis>) -> LpSolution {
        let s = self.model.solve_from(lower, upper, warm, &self.lp_opts);
        self.lp_iterations += s.iterations;
        s
    }

    fn cutoff(&self) -> f64 {
        match &self.incumbent {
            Some((obj, _)) => obj - self.opts.gap_rel * obj.abs().max(1.0),
            None => f64::INFINITY,
        }
    }

    fn branch_column(&self, x: &[f64]) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for &j in &self.binaries {
            let frac = (x[j] - x[j].round()).abs();
            if frac > self.opts.integrality_tol && best.is_none_or(|(_, f)| frac > f) {
                best = Some((j, frac));
            }
        }
        best.map(|(j, _)| j)
    }

    /// Fix binaries at their rounded values and re-solve for clean continuous values.
    fn accept(&mut self, lower: &[f64], upper: &[f64], sol: &LpSolution) {
        let (mut lo, mut up) = (lower.to_vec(), upper.to_vec());
        for &j in &self.binaries {
            let v = sol.x[j].round();
            lo[j] = v;
            up[j] = v;
        }
        let polished = self.solve(&lo, &up, sol.basis.as_ref());
        let (obj, x) = if polished.status == LpStatus::Optimal {
            (polished.objective, polished.x)
        } else {
            let mut x = sol.x.clone();
            for &j in &self.binaries {
                x[j] = x[j].round();
            }
            (sol.objective, x)
        };
        if self.incumbent.as_ref().is_none_or(|(best, _)| obj < *best) {
            self.history.push(obj);
            self.incumbent = Some((obj, x));
        }
    }
}

/// Solve `problem` to within the relative gap of `opts`.
pub fn solve_milp(problem: &MilpProblem, opts: &BnbOptions) -> MilpSolution {
    let start = Instant::now();
    let model = LpModel::new(problem);
    let mut search = Search {
        binaries: problem.binaries().collect(),
        lp_opts: opts.lp_options(),
        model,
        opts,
        incumbent: None,
        history: Vec::new(),
        lp_iterations: 0,
    };
    let mut lower = search.model.lower().to_vec();
    let mut upper = search.model.upper().to_vec();
    for &j in &search.binaries {
        lower[j] = lower[j].max(0.0).ceil();
        upper[j] = upper[j].min(1.0).floor();
    }

    let root = search.solve(&lower, &upper, None);
    let mut nodes = 1;
    let finish = |search: Search, status: MilpStatus, bound: f64, nodes: usize, fallback: Vec<f64>| {
        let (objective, x) = search.incumbent.unwrap_or((f64::INFINITY, fallback));
        let gap = if objective.is_finite() {
            ((objective - bound) / objective.abs().max(1.0)).max(0.0)
        } else {
            f64::INFINITY
        };
        MilpSolution {
            status,
            x,
            objective,
            bound: bound.min(objective),
            gap,
            nodes,
            lp_iterations: search.lp_iterations,
            incumbent_history: search.history,
        }
    };
    match root.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => return finish(search, MilpStatus::Infeasible, f64::INFINITY, nodes, root.x),
        LpStatus::Unbounded => return finish(search, MilpStatus::Unbounded, f64::NEG_INFINITY, nodes, root.x),
        LpStatus::Failed => return finish(search, MilpStatus::Failed, f64::NEG_INFINITY, nodes, root.x),
    }
    if search.branch_column(&root.x).is_none() {
        search.accept(&lower, &upper, &root);
        let bound = root.objective;
        return finish(search, MilpStatus::Optimal, bound, nodes, Vec::new());
    }

    let mut heap = BinaryHeap::new();
    let mut next_id = 1;
    heap.push(Node {
        bound: root.objective,
        depth: 0,
        id: 0,
        lower,
        upper,
        x: root.x,
        basis: root.basis,
    });
    let mut limit: Option<MilpStatus> = None;

    while let Some(node) = heap.pop() {
        if node.bound >= search.cutoff() {
            // best-first: every remaining node is at least as bad
            heap.clear();
            break;
        }
        if nodes >= opts.node_limit {
            limit = Some(MilpStatus::NodeLimit);
            heap.push(node);
            break;
        }
        if opts.time_limit.is_some_and(|t| start.elapsed() >= t) {
            limit = Some(MilpStatus::TimeLimit);
            heap.push(node);
            break;
        }
        let j = search
            .branch_column(&node.x)
            .expect("queued nodes are fractional");
        for v in [0.0, 1.0] {
            let (mut lo, mut up) = (node.lower.clone(), node.upper.clone());
            lo[j] = v;
            up[j] = v;
            let child = search.solve(&lo, &up, node.basis.as_ref());
            nodes += 1;
            if child.status != LpStatus::Optimal || child.objective >= search.cutoff() {
                continue;
            }
            if search.branch_column(&child.x).is_none() {
                search.accept(&lo, &up, &child);
            } else {
                heap.push(Node {
                    bound: child.objective,
                    depth: node.depth + 1,
                    id: next_id,
                    lower: lo,
                    upper: up,
                    x: child.x,
                    basis: child.basis,
                });
                next_id += 1;
            }
        }
    }

    let open_bound = heap.iter().map(|n| n.bound).fold(f64::INFINITY, f64::min);
    match (limit, search.incumbent.is_some()) {
        (None, true) => {
            let obj = search.incumbent.as_ref().map(|i| i.0).unwrap_or(f64::INFINITY);
            finish(search, MilpStatus::Optimal, open_bound.min(obj), nodes, Vec::new())
        }
        (None, false) => finish(search, MilpStatus::Infeasible, f64::INFINITY, nodes, Vec::new()),
        (Some(status), true) => finish(search, status, open_bound, nodes, Vec::new()),
        (Some(_), false) => finish(search, MilpStatus::LimitInfeasible, open_bound, nodes, Vec::new()),
    }
}
