//! Build, solve and post-process one case.

use crate::analysis::{compute_metrics, SummaryMetrics};
use crate::builder::{build, extract_solution, BuildError, BuildOptions, DispatchSchedule, PlanningModel};
use crate::model::MicrogridCase;
use crate::solver::{BackendRegistry, BnbOptions, MilpSolution, MilpStatus, SolverError};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PlanOptions {
    /// Overrides the case's PWL segment count.
    pub segments: Option<usize>,
    pub bnb: BnbOptions,
    /// Backend name; `None` defers to the environment, then the default.
    pub backend: Option<String>,
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum PlanError {
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

#[derive(Debug, Clone)]
pub struct PlanOutcome {
    pub model: PlanningModel,
    pub solution: MilpSolution,
    /// Present whenever the solver returned an integral feasible point.
    pub schedule: Option<DispatchSchedule>,
    pub metrics: Option<SummaryMetrics>,
}

impl PlanOutcome {
    pub fn status(&self) -> MilpStatus {
        self.solution.status
    }
}

pub fn plan(case: &MicrogridCase, opts: &PlanOptions) -> Result<PlanOutcome, PlanError> {
    plan_with(&BackendRegistry::new(), case, opts)
}

pub fn plan_with(registry: &BackendRegistry, case: &MicrogridCase, opts: &PlanOptions) -> Result<PlanOutcome, PlanError> {
    let backend = registry.resolve(opts.backend.as_deref())?;
    let model = build(case, &BuildOptions { segments: opts.segments })?;
    let solution = backend.solve(&model.problem, &opts.bnb);
    let (schedule, metrics) = if solution.status.has_solution() {
        let schedule = extract_solution(&model, &solution.x, solution.objective, solution.status)?;
        let metrics = compute_metrics(case, &schedule);
        (Some(schedule), Some(metrics))
    } else {
        (None, None)
    };
    Ok(PlanOutcome {
        model,
        solution,
        schedule,
        metrics,
    })
}
