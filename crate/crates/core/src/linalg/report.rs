/// Outcome of an iterative solve.
#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    /// Outer iterations performed.
    pub iterations: usize,
    /// Relative residual after each outer check.
    pub residual_history: Vec<f64>,
    pub converged: bool,
    pub final_residual: f64,
}

impl SolveReport {
    pub(crate) fn new() -> Self {
        Self { iterations: 0, residual_history: Vec::new(), converged: false, final_residual: f64::INFINITY }
    }

    pub(crate) fn record(&mut self, residual: f64) {
        self.residual_history.push(residual);
        self.final_residual = residual;
    }
}
