//! Bounded-variable primal simplex on a revised (factored) basis.
//!
//! Rows are turned into equalities `A x - s = 0` with one logical `s_i` per
//! row carrying the row bounds, so every constraint is a column bound. Phase 1
//! minimizes the sum of bound infeasibilities of the basic variables; phase 2
//! minimizes the real objective. Ratio tests use Harris' two-pass rule, with a
//! fallback to Bland's rule after a run of degenerate pivots.

use super::lu::{BasisFactor, LuFactors};
use crate::problem::{MilpProblem, Sense};

/// Working primal tolerance for bound violations of basic variables.
const PRIMAL_TOL: f64 = 1e-9;
/// Smallest |alpha| accepted as a pivot element.
const PIVOT_TOL: f64 = 1e-9;
const REFACTOR_EVERY: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// Iteration budget exhausted or unrecoverable numerical trouble.
    Failed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpOptions {
    pub feasibility_tol: f64,
    pub optimality_tol: f64,
    /// Consecutive degenerate pivots before switching to Bland's rule.
    pub bland_after: usize,
    /// `None` picks a budget from the problem size.
    pub max_iterations: Option<usize>,
}

impl Default for LpOptions {
    fn default() -> Self {
        Self {
            feasibility_tol: 1e-7,
            optimality_tol: 1e-9,
            bland_after: 50,
            max_iterations: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Structural variable values.
    pub x: Vec<f64>,
    /// Objective including the constant offset.
    pub objective: f64,
    /// Row duals `y` (one per constraint).
    pub duals: Vec<f64>,
    /// Reduced costs `c - A^T y` of the structural variables.
    pub reduced_costs: Vec<f64>,
    pub iterations: usize,
    /// Final basis, usable to warm-start a re-solve with changed bounds.
    pub basis: Option<Basis>,
}

/// Simplex basis: the basic columns in position order and the resting bound
/// of every nonbasic column (structurals first, then one logical per row).
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    heads: Vec<usize>,
    at_upper: Vec<bool>,
}

/// Column-compressed form of a problem's rows, reusable across bound changes.
#[derive(Debug, Clone)]
pub struct LpModel {
    n: usize,
    m: usize,
    col_start: Vec<usize>,
    row_idx: Vec<usize>,
    vals: Vec<f64>,
    cost: Vec<f64>,
    col_lo: Vec<f64>,
    col_up: Vec<f64>,
    row_lo: Vec<f64>,
    row_up: Vec<f64>,
    offset: f64,
}

impl LpModel {
    pub fn new(problem: &MilpProblem) -> Self {
        let n = problem.num_variables();
        let m = problem.num_constraints();
        let mut entries: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        let mut row_lo = Vec::with_capacity(m);
        let mut row_up = Vec::with_capacity(m);
        for (i, c) in problem.constraints.iter().enumerate() {
            for &(j, a) in &c.terms {
                entries[j].push((i, a));
            }
            let (lo, up) = match c.sense {
                Sense::Le => (f64::NEG_INFINITY, c.rhs),
                Sense::Ge => (c.rhs, f64::INFINITY),
                Sense::Eq => (c.rhs, c.rhs),
            };
            row_lo.push(lo);
            row_up.push(up);
        }
        let mut col_start = vec![0];
        let mut row_idx = Vec::new();
        let mut vals = Vec::new();
        for col in &mut entries {
            col.sort_by_key(|e| e.0);
            let mut k = 0;
            while k < col.len() {
                let (i, mut v) = col[k];
                k += 1;
                while k < col.len() && col[k].0 == i {
                    v += col[k].1;
                    k += 1;
                }
                if v != 0.0 {
                    row_idx.push(i);
                    vals.push(v);
                }
            }
            col_start.push(row_idx.len());
        }
        Self {
            n,
            m,
            col_start,
            row_idx,
            vals,
            cost: problem.objective.clone(),
            col_lo: problem.variables.iter().map(|v| v.lower).collect(),
            col_up: problem.variables.iter().map(|v| v.upper).collect(),
            row_lo,
            row_up,
            offset: problem.objective_offset,
        }
    }

    pub fn num_cols(&self) -> usize {
        self.n
    }

    pub fn num_rows(&self) -> usize {
        self.m
    }

    pub fn lower(&self) -> &[f64] {
        &self.col_lo
    }

    pub fn upper(&self) -> &[f64] {
        &self.col_up
    }

    /// Solve with the problem's own variable bounds.
    pub fn solve(&self, opts: &LpOptions) -> LpSolution {
        self.solve_with_bounds(&self.col_lo, &self.col_up, opts)
    }

    /// Solve with structural bounds replaced by `lower`/`upper`.
    pub fn solve_with_bounds(&self, lower: &[f64], upper: &[f64], opts: &LpOptions) -> LpSolution {
        self.solve_from(lower, upper, None, opts)
    }

    /// Like [`solve_with_bounds`](Self::solve_with_bounds), starting from
    /// `basis` when one is given and it fits this model.
    pub fn solve_from(&self, lower: &[f64], upper: &[f64], basis: Option<&Basis>, opts: &LpOptions) -> LpSolution {
        assert_eq!(lower.len(), self.n);
        assert_eq!(upper.len(), self.n);
        if lower.iter().zip(upper).any(|(l, u)| l > u) {
            return self.trivial(LpStatus::Infeasible, lower, upper);
        }
        let mut s = Simplex::new(self, lower, upper, opts);
        if let Some(b) = basis {
            s.warm_start(b);
        }
        s.run()
    }

    fn trivial(&self, status: LpStatus, lower: &[f64], upper: &[f64]) -> LpSolution {
        let x: Vec<f64> = lower
            .iter()
            .zip(upper)
            .map(|(&l, &u)| if l.is_finite() { l } else if u.is_finite() { u } else { 0.0 })
            .collect();
        LpSolution {
            status,
            objective: self.offset + self.cost.iter().zip(&x).map(|(c, v)| c * v).sum::<f64>(),
            x,
            duals: vec![0.0; self.m],
            reduced_costs: self.cost.clone(),
            iterations: 0,
            basis: None,
        }
    }

    fn column(&self, j: usize) -> ColumnIter<'_> {
        if j < self.n {
            ColumnIter::Structural {
                rows: &self.row_idx[self.col_start[j]..self.col_start[j + 1]],
                vals: &self.vals[self.col_start[j]..self.col_start[j + 1]],
                k: 0,
            }
        } else {
            ColumnIter::Logical(Some(j - self.n))
        }
    }
}

enum ColumnIter<'a> {
    Structural { rows: &'a [usize], vals: &'a [f64], k: usize },
    Logical(Option<usize>),
}

impl Iterator for ColumnIter<'_> {
    type Item = (usize, f64);

    fn next(&mut self) -> Option<(usize, f64)> {
        match self {
            ColumnIter::Structural { rows, vals, k } => {
                let out = rows.get(*k).map(|&i| (i, vals[*k]));
                *k += 1;
                out
            }
            ColumnIter::Logical(row) => row.take().map(|i| (i, -1.0)),
        }
    }
}

/// Solve the continuous relaxation of `problem` (binaries treated as [0, 1]).
pub fn solve_lp(problem: &MilpProblem, opts: &LpOptions) -> LpSolution {
    LpModel::new(problem).solve(opts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum State {
    Basic(usize),
    AtLower,
    AtUpper,
    /// Nonbasic free variable held at zero.
    Zero,
}

enum Step {
    Flip { theta: f64 },
    Pivot { r: usize, theta: f64, to_upper: bool },
    Unbounded,
}

struct Simplex<'a> {
    model: &'a LpModel,
    opts: &'a LpOptions,
    lo: Vec<f64>,
    up: Vec<f64>,
    x: Vec<f64>,
    state: Vec<State>,
    basis: Vec<usize>,
    factor: BasisFactor,
    iterations: usize,
    degenerate_run: usize,
    cost_scale: f64,
}

impl<'a> Simplex<'a> {
    fn new(model: &'a LpModel, lower: &[f64], upper: &[f64], opts: &'a LpOptions) -> Self {
        let (n, m) = (model.n, model.m);
        let mut lo = lower.to_vec();
        let mut up = upper.to_vec();
        lo.extend_from_slice(&model.row_lo);
        up.extend_from_slice(&model.row_up);
        let mut x = vec![0.0; n + m];
        let mut state = vec![State::Zero; n + m];
        for j in 0..n {
            let (s, v) = nonbasic_start(lo[j], up[j], model.cost[j]);
            state[j] = s;
            x[j] = v;
        }
        let basis: Vec<usize> = (n..n + m).collect();
        for (r, &j) in basis.iter().enumerate() {
            state[j] = State::Basic(r);
        }
        let cost_scale = model.cost.iter().fold(1.0f64, |a, c| a.max(c.abs()));
        let identity: Vec<Vec<(usize, f64)>> = (0..m).map(|i| vec![(i, -1.0)]).collect();
        let lu = LuFactors::factor(m, &identity).expect("logical basis is nonsingular");
        let mut s = Self {
            model,
            opts,
            lo,
            up,
            x,
            state,
            basis,
            factor: BasisFactor::new(lu),
            iterations: 0,
            degenerate_run: 0,
            cost_scale,
        };
        s.compute_basic_values();
        s
    }

    /// Install `b` in place of the logical basis; keeps the cold start if
    /// the basis does not fit or cannot be factored.
    fn warm_start(&mut self, b: &Basis) {
        let total = self.model.n + self.model.m;
        if b.heads.len() != self.model.m || b.at_upper.len() != total {
            return;
        }
        let cold = (self.state.clone(), self.x.clone(), self.basis.clone());
        for j in 0..total {
            let (lo, up) = (self.lo[j], self.up[j]);
            let (st, v) = if b.at_upper[j] && up.is_finite() {
                (State::AtUpper, up)
            } else if !b.at_upper[j] && lo.is_finite() {
                (State::AtLower, lo)
            } else {
                nonbasic_start(lo, up, self.cost(j))
            };
            self.state[j] = st;
            self.x[j] = v;
        }
        for (r, &j) in b.heads.iter().enumerate() {
            if j >= total || matches!(self.state[j], State::Basic(_)) {
                (self.state, self.x, self.basis) = cold;
                return;
            }
            self.state[j] = State::Basic(r);
        }
        self.basis = b.heads.clone();
        if !self.refactor() {
            (self.state, self.x, self.basis) = cold;
            let identity: Vec<Vec<(usize, f64)>> = (0..self.model.m).map(|i| vec![(i, -1.0)]).collect();
            self.factor = BasisFactor::new(LuFactors::factor(self.model.m, &identity).expect("logical basis is nonsingular"));
            self.compute_basic_values();
        }
    }

    fn max_iterations(&self) -> usize {
        self.opts
            .max_iterations
            .unwrap_or(20_000 + 50 * (self.model.n + self.model.m))
    }

    fn run(&mut self) -> LpSolution {
        let mut rechecks = 0;
        loop {
            let status = self.iterate();
            if status != LpStatus::Optimal {
                return self.finish(status);
            }
            // Confirm on a fresh factorization before reporting optimality.
            if !self.refactor() {
                return self.finish(LpStatus::Failed);
            }
            let clean = self.max_basic_infeasibility() <= PRIMAL_TOL && self.choose_entering(false).is_none();
            if clean || rechecks >= 3 {
                let ok = self.max_basic_infeasibility() <= self.opts.feasibility_tol;
                return self.finish(if ok { LpStatus::Optimal } else { LpStatus::Failed });
            }
            rechecks += 1;
        }
    }

    /// Iterate until phase-2 optimality, infeasibility, unboundedness or budget.
    fn iterate(&mut self) -> LpStatus {
        let limit = self.max_iterations();
        loop {
            if self.iterations >= limit {
                return LpStatus::Failed;
            }
            let phase1 = self.max_basic_infeasibility() > PRIMAL_TOL;
            let bland = self.degenerate_run >= self.opts.bland_after;
            let Some((q, dir)) = self.choose_entering(bland) else {
                if phase1 {
                    if self.max_basic_infeasibility() <= self.opts.feasibility_tol {
                        // Tiny residual infeasibility with no improving column.
                        return LpStatus::Optimal;
                    }
                    return LpStatus::Infeasible;
                }
                return LpStatus::Optimal;
            };
            let alpha = self.ftran_column(q);
            let step = self.ratio_test(q, dir, &alpha, phase1, bland);
            self.iterations += 1;
            match step {
                Step::Unbounded => {
                    if phase1 {
                        // Numerical trouble; rebuild and try again.
                        if !self.refactor() {
                            return LpStatus::Failed;
                        }
                        continue;
                    }
                    return LpStatus::Unbounded;
                }
                Step::Flip { theta } => {
                    self.apply_step(q, dir, theta, &alpha);
                    self.state[q] = if dir > 0.0 { State::AtUpper } else { State::AtLower };
                    self.x[q] = if dir > 0.0 { self.up[q] } else { self.lo[q] };
                    self.degenerate_run = 0;
                }
                Step::Pivot { r, theta, to_upper } => {
                    let moved = theta * alpha.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1.0);
                    if moved <= 1e-12 {
                        self.degenerate_run += 1;
                    } else {
                        self.degenerate_run = 0;
                    }
                    self.apply_step(q, dir, theta, &alpha);
                    let leaving = self.basis[r];
                    if to_upper {
                        self.state[leaving] = State::AtUpper;
                        self.x[leaving] = self.up[leaving];
                    } else {
                        self.state[leaving] = State::AtLower;
                        self.x[leaving] = self.lo[leaving];
                    }
                    self.basis[r] = q;
                    self.state[q] = State::Basic(r);
                    self.factor.update(r, &alpha);
                    if self.factor.updates() >= REFACTOR_EVERY && !self.refactor() {
                        return LpStatus::Failed;
                    }
                }
            }
        }
    }

    fn apply_step(&mut self, q: usize, dir: f64, theta: f64, alpha: &[f64]) {
        if theta == 0.0 {
            return;
        }
        self.x[q] += dir * theta;
        for (r, &a) in alpha.iter().enumerate() {
            if a != 0.0 {
                self.x[self.basis[r]] -= dir * theta * a;
            }
        }
    }

    fn ftran_column(&self, j: usize) -> Vec<f64> {
        let mut rhs = vec![0.0; self.model.m];
        for (i, a) in self.model.column(j) {
            rhs[i] = a;
        }
        self.factor.ftran(&mut rhs)
    }

    fn infeasibility(&self, j: usize) -> f64 {
        let v = self.x[j];
        (self.lo[j] - v).max(v - self.up[j]).max(0.0)
    }

    fn max_basic_infeasibility(&self) -> f64 {
        self.basis.iter().map(|&j| self.infeasibility(j)).fold(0.0, f64::max)
    }

    /// Costs of basic variables for the current phase.
    fn basic_costs(&self, phase1: bool) -> Vec<f64> {
        self.basis
            .iter()
            .map(|&j| {
                if phase1 {
                    let v = self.x[j];
                    if v < self.lo[j] - PRIMAL_TOL {
                        -1.0
                    } else if v > self.up[j] + PRIMAL_TOL {
                        1.0
                    } else {
                        0.0
                    }
                } else {
                    self.cost(j)
                }
            })
            .collect()
    }

    fn cost(&self, j: usize) -> f64 {
        if j < self.model.n {
            self.model.cost[j]
        } else {
            0.0
        }
    }

    fn duals(&self, phase1: bool) -> Vec<f64> {
        let mut cb = self.basic_costs(phase1);
        self.factor.btran(&mut cb)
    }

    fn reduced_cost(&self, j: usize, y: &[f64], phase1: bool) -> f64 {
        let c = if phase1 { 0.0 } else { self.cost(j) };
        c - self.model.column(j).map(|(i, a)| a * y[i]).sum::<f64>()
    }

    /// Entering column and direction (+1 increase, -1 decrease).
    fn choose_entering(&self, bland: bool) -> Option<(usize, f64)> {
        let phase1 = self.max_basic_infeasibility() > PRIMAL_TOL;
        let y = self.duals(phase1);
        let tol = if phase1 {
            self.opts.optimality_tol
        } else {
            self.opts.optimality_tol * self.cost_scale
        };
        let mut best: Option<(usize, f64, f64)> = None;
        for j in 0..self.model.n + self.model.m {
            let dir = match self.state[j] {
                State::Basic(_) => continue,
                _ if self.lo[j] == self.up[j] => continue,
                State::AtLower | State::AtUpper | State::Zero => {
                    let d = self.reduced_cost(j, &y, phase1);
                    let can_up = self.state[j] != State::AtUpper;
                    let can_down = self.state[j] != State::AtLower;
                    if d < -tol && can_up {
                        (1.0, -d)
                    } else if d > tol && can_down {
                        (-1.0, d)
                    } else {
                        continue;
                    }
                }
            };
            if bland {
                return Some((j, dir.0));
            }
            if best.is_none_or(|b| dir.1 > b.2) {
                best = Some((j, dir.0, dir.1));
            }
        }
        best.map(|b| (b.0, b.1))
    }

    fn ratio_test(&self, q: usize, dir: f64, alpha: &[f64], phase1: bool, bland: bool) -> Step {
        let flip = self.up[q] - self.lo[q];
        // (position, exact ratio, relaxed ratio, |delta|, heads to upper)
        let mut cands: Vec<(usize, f64, f64, f64, bool)> = Vec::new();
        for (r, &a) in alpha.iter().enumerate() {
            let delta = -dir * a;
            if delta.abs() <= PIVOT_TOL {
                continue;
            }
            let j = self.basis[r];
            let v = self.x[j];
            let (lo, up) = (self.lo[j], self.up[j]);
            let below = v < lo - PRIMAL_TOL;
            let above = v > up + PRIMAL_TOL;
            let target = if phase1 && below {
                // moving up reaches the violated lower bound; moving down never blocks
                if delta > 0.0 {
                    Some((lo, false))
                } else {
                    None
                }
            } else if phase1 && above {
                if delta < 0.0 {
                    Some((up, true))
                } else {
                    None
                }
            } else if delta < 0.0 {
                lo.is_finite().then_some((lo, false))
            } else {
                up.is_finite().then_some((up, true))
            };
            if let Some((bound, to_upper)) = target {
                let dist = (bound - v).abs();
                let exact = if (delta > 0.0) == (bound >= v) { dist / delta.abs() } else { 0.0 };
                let relaxed = (dist + PRIMAL_TOL) / delta.abs();
                let relaxed = if (delta > 0.0) == (bound >= v) { relaxed } else { PRIMAL_TOL / delta.abs() };
                cands.push((r, exact, relaxed, delta.abs(), to_upper));
            }
        }
        if cands.is_empty() {
            return if flip.is_finite() {
                Step::Flip { theta: flip }
            } else {
                Step::Unbounded
            };
        }
        let chosen = if bland {
            let min = cands.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
            cands
                .iter()
                .filter(|c| c.1 <= min + 1e-12)
                .min_by_key(|c| self.basis[c.0])
                .copied()
                .expect("nonempty")
        } else {
            let bound = cands.iter().map(|c| c.2).fold(f64::INFINITY, f64::min);
            cands
                .iter()
                .filter(|c| c.1 <= bound)
                .max_by(|a, b| a.3.total_cmp(&b.3).then(b.0.cmp(&a.0)))
                .copied()
                .expect("the minimizer of the relaxed ratio qualifies")
        };
        let theta = chosen.1.max(0.0);
        if flip <= theta {
            return Step::Flip { theta: flip };
        }
        Step::Pivot {
            r: chosen.0,
            theta,
            to_upper: chosen.4,
        }
    }

    /// Refactor the current basis; singular columns are swapped for logicals.
    fn refactor(&mut self) -> bool {
        for _ in 0..3 {
            let cols: Vec<Vec<(usize, f64)>> = self.basis.iter().map(|&j| self.model.column(j).collect()).collect();
            match LuFactors::factor(self.model.m, &cols) {
                Ok(lu) => {
                    self.factor = BasisFactor::new(lu);
                    self.compute_basic_values();
                    return true;
                }
                Err(sing) => {
                    for (&r, &row) in sing.positions.iter().zip(&sing.rows) {
                        let out = self.basis[r];
                        let (s, v) = nonbasic_start(self.lo[out], self.up[out], self.cost(out));
                        self.state[out] = s;
                        self.x[out] = v;
                        let logical = self.model.n + row;
                        if let State::Basic(old) = self.state[logical] {
                            // logical already basic elsewhere; should not happen
                            debug_assert!(false, "logical {logical} basic at {old}");
                        }
                        self.basis[r] = logical;
                        self.state[logical] = State::Basic(r);
                    }
                }
            }
        }
        false
    }

    fn compute_basic_values(&mut self) {
        let m = self.model.m;
        let mut rhs = vec![0.0; m];
        for j in 0..self.model.n + m {
            if matches!(self.state[j], State::Basic(_)) {
                continue;
            }
            let v = self.x[j];
            if v != 0.0 {
                for (i, a) in self.model.column(j) {
                    rhs[i] -= a * v;
                }
            }
        }
        let xb = self.factor.ftran(&mut rhs);
        for (r, &j) in self.basis.iter().enumerate() {
            self.x[j] = xb[r];
        }
    }

    fn finish(&self, status: LpStatus) -> LpSolution {
        let n = self.model.n;
        let x = self.x[..n].to_vec();
        let y = self.duals(false);
        let reduced_costs = (0..n).map(|j| self.reduced_cost(j, &y, false)).collect();
        LpSolution {
            status,
            objective: self.model.offset + self.model.cost.iter().zip(&x).map(|(c, v)| c * v).sum::<f64>(),
            x,
            duals: y,
            reduced_costs,
            iterations: self.iterations,
            basis: Some(Basis {
                heads: self.basis.clone(),
                at_upper: self.state.iter().map(|s| *s == State::AtUpper).collect(),
            }),
        }
    }
}

/// Initial nonbasic position: the finite bound favoured by the cost sign.
fn nonbasic_start(lo: f64, up: f64, cost: f64) -> (State, f64) {
    match (lo.is_finite(), up.is_finite()) {
        (true, true) => {
            if cost < 0.0 {
                (State::AtUpper, up)
            } else {
                (State::AtLower, lo)
            }
        }
        (true, false) => (State::AtLower, lo),
        (false, true) => (State::AtUpper, up),
        (false, false) => (State::Zero, 0.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::VarKind;

    fn lp(vars: &[(f64, f64, f64)], rows: &[(Vec<(usize, f64)>, Sense, f64)]) -> MilpProblem {
        let mut p = MilpProblem::new();
        for (k, &(lo, up, c)) in vars.iter().enumerate() {
            let j = p.add_variable(format!("x{k}"), VarKind::Continuous, lo, up);
            p.add_cost(j, c);
        }
        for (k, (terms, sense, rhs)) in rows.iter().enumerate() {
            p.add_constraint(format!("r{k}"), terms.clone(), *sense, *rhs);
        }
        p
    }

    #[test]
    fn single_bounded_variable() {
        let p = lp(&[(0.0, 3.0, -1.0)], &[]);
        let s = solve_lp(&p, &LpOptions::default());
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.x, vec![3.0]);
        assert_eq!(s.objective, -3.0);
    }

    #[test]
    fn symmetric_vertex() {
        let inf = f64::INFINITY;
        let p = lp(&[(0.0, inf, 1.0), (0.0, inf, 1.0)], &[(vec![(0, 1.0), (1, 1.0)], Sense::Ge, 1.0)]);
        let s = solve_lp(&p, &LpOptions::default());
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective - 1.0).abs() < 1e-12);
    }

    #[test]
    fn contradictory_rows_infeasible() {
        let inf = f64::INFINITY;
        let p = lp(
            &[(-inf, inf, 0.0)],
            &[(vec![(0, 1.0)], Sense::Ge, 2.0), (vec![(0, 1.0)], Sense::Le, 1.0)],
        );
        assert_eq!(solve_lp(&p, &LpOptions::default()).status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_detected() {
        let inf = f64::INFINITY;
        let p = lp(&[(0.0, inf, -1.0), (0.0, inf, 0.0)], &[(vec![(0, 1.0), (1, -1.0)], Sense::Le, 1.0)]);
        assert_eq!(solve_lp(&p, &LpOptions::default()).status, LpStatus::Unbounded);
    }

    #[test]
    fn equality_system_with_free_variables() {
        // x + y = 4, x - y = 2, minimize 0 -> x = 3, y = 1
        let inf = f64::INFINITY;
        let p = lp(
            &[(-inf, inf, 0.0), (-inf, inf, 0.0)],
            &[(vec![(0, 1.0), (1, 1.0)], Sense::Eq, 4.0), (vec![(0, 1.0), (1, -1.0)], Sense::Eq, 2.0)],
        );
        let s = solve_lp(&p, &LpOptions::default());
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.x[0] - 3.0).abs() < 1e-12 && (s.x[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn classic_production_lp() {
        // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
        let inf = f64::INFINITY;
        let p = lp(
            &[(0.0, inf, -3.0), (0.0, inf, -5.0)],
            &[
                (vec![(0, 1.0)], Sense::Le, 4.0),
                (vec![(1, 2.0)], Sense::Le, 12.0),
                (vec![(0, 3.0), (1, 2.0)], Sense::Le, 18.0),
            ],
        );
        let s = solve_lp(&p, &LpOptions::default());
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective + 36.0).abs() < 1e-9);
        assert!((s.x[0] - 2.0).abs() < 1e-9 && (s.x[1] - 6.0).abs() < 1e-9);
        // duals of binding rows 2 and 3: y = (0, 1.5, 1) in max form
        assert!((s.duals[1] + 1.5).abs() < 1e-9);
        assert!((s.duals[2] + 1.0).abs() < 1e-9);
    }

    #[test]
    fn empty_domain_is_infeasible() {
        let p = lp(&[(1.0, 0.0, 1.0)], &[]);
        assert_eq!(solve_lp(&p, &LpOptions::default()).status, LpStatus::Infeasible);
    }

    #[test]
    fn warm_start_after_bound_change() {
        let inf = f64::INFINITY;
        let p = lp(
            &[(0.0, inf, -3.0), (0.0, inf, -5.0)],
            &[
                (vec![(0, 1.0)], Sense::Le, 4.0),
                (vec![(1, 2.0)], Sense::Le, 12.0),
                (vec![(0, 3.0), (1, 2.0)], Sense::Le, 18.0),
            ],
        );
        let model = LpModel::new(&p);
        let opts = LpOptions::default();
        let first = model.solve(&opts);
        let (lo, up) = (vec![0.0, 0.0], vec![inf, 4.0]);
        let cold = model.solve_with_bounds(&lo, &up, &opts);
        let warm = model.solve_from(&lo, &up, first.basis.as_ref(), &opts);
        assert_eq!(warm.status, LpStatus::Optimal);
        // y <= 4 -> x = 10/3, objective -30
        assert!((warm.objective + 30.0).abs() < 1e-9);
        assert!((warm.objective - cold.objective).abs() < 1e-12);
        assert!(warm.iterations <= cold.iterations);
    }

    #[test]
    fn mismatched_basis_falls_back_to_cold_start() {
        let p = lp(&[(0.0, 3.0, -1.0)], &[(vec![(0, 1.0)], Sense::Le, 2.0)]);
        let other = lp(&[(0.0, 1.0, 1.0), (0.0, 1.0, 1.0)], &[]);
        let foreign = solve_lp(&other, &LpOptions::default()).basis;
        let model = LpModel::new(&p);
        let s = model.solve_from(model.lower(), model.upper(), foreign.as_ref(), &LpOptions::default());
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.x, vec![2.0]);
    }
}
