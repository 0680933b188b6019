use std::collections::BTreeMap;
use std::sync::Arc;

use super::bnb::{solve_milp, BnbOptions, MilpSolution};
use super::SolverError;
use crate::problem::MilpProblem;

/// Environment variable naming the default backend.
pub const BACKEND_ENV: &str = "MECGRID_BACKEND";
pub const REFERENCE_BACKEND: &str = "reference";

pub trait MilpBackend: Send + Sync {
    fn name(&self) -> &str;
    fn solve(&self, problem: &MilpProblem, opts: &BnbOptions) -> MilpSolution;
}

/// The built-in simplex + branch-and-bound engine.
#[derive(Debug, Default, Clone, Copy)]
pub struct ReferenceBackend;

impl MilpBackend for ReferenceBackend {
    fn name(&self) -> &str {
        REFERENCE_BACKEND
    }

    fn solve(&self, problem: &MilpProblem, opts: &BnbOptions) -> MilpSolution {
        solve_milp(problem, opts)
    }
}

/// Named backends. A fresh registry holds only the reference engine.
#[derive(Clone)]
pub struct BackendRegistry {
    backends: BTreeMap<String, Arc<dyn MilpBackend>>,
    default: String,
}

impl Default for BackendRegistry {
    fn default() -> Self {
        Self::new()
    }
}

impl BackendRegistry {
    pub fn new() -> Self {
        let mut backends: BTreeMap<String, Arc<dyn MilpBackend>> = BTreeMap::new();
        backends.insert(REFERENCE_BACKEND.to_string(), Arc::new(ReferenceBackend));
        Self {
            backends,
            default: REFERENCE_BACKEND.to_string(),
        }
    }

    pub fn register(&mut self, backend: Arc<dyn MilpBackend>) {
        self.backends.insert(backend.name().to_string(), backend);
    }

    pub fn set_default(&mut self, name: &str) -> Result<(), SolverError> {
        self.get(name)?;
        self.default = name.to_string();
        Ok(())
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.backends.keys().map(String::as_str)
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn MilpBackend>, SolverError> {
        self.backends
            .get(name)
            .cloned()
            .ok_or_else(|| SolverError::UnknownBackend(name.to_string()))
    }

    /// Pick `name`, else the environment selection, else the registry default.
    pub fn resolve(&self, name: Option<&str>) -> Result<Arc<dyn MilpBackend>, SolverError> {
        if let Some(name) = name {
            return self.get(name);
        }
        match std::env::var(BACKEND_ENV) {
            Ok(env) if !env.is_empty() => self.get(&env),
            _ => self.get(&self.default),
        }
    }
}
