//! Reference-solution computation and per-iteration identification
//! metrics: how many of the solution's manifolds the current iterate
//! holds, and how many it holds spuriously.

use crate::error::Error;
use crate::linalg::DenseVector;
use crate::regularizers::StructureSignature;
use crate::smooth::CompositeProblem;
use crate::solvers::{run_mfista, SolverConfig, Trace};

#[derive(Debug, Clone)]
pub struct ReferenceSolution {
    pub point: DenseVector,
    pub f_star: f64,
    /// Signature from the reference run's final prox call, never from
    /// thresholding the point.
    pub signature: StructureSignature,
    /// Last relative decrease seen; an estimate of remaining suboptimality.
    pub subopt_achieved: f64,
    /// Budget ran out before the value plateaued below target_subopt.
    pub budget_exhausted: bool,
}

/// Long monotone run used as the ground truth for suboptimality plots.
/// Deterministic given (problem, gamma, budget).
pub fn compute_reference(
    p: &CompositeProblem,
    gamma: Option<f64>,
    x0: &DenseVector,
    target_subopt: f64,
    budget: usize,
) -> Result<ReferenceSolution, Error> {
    if target_subopt <= 0.0 {
        return Err(Error::InvalidArgument(
            "target_subopt must be positive".into(),
        ));
    }
    let cfg = SolverConfig {
        gamma,
        max_prox_steps: budget,
        ..Default::default()
    };
    let trace = run_mfista(p, &cfg, x0)?;
    let f_star = trace.best_f();
    let last_decrease = last_relative_decrease(&trace);
    Ok(ReferenceSolution {
        point: trace.final_point.clone(),
        f_star,
        signature: trace.final_signature.clone(),
        subopt_achieved: last_decrease,
        budget_exhausted: last_decrease > target_subopt,
    })
}

fn last_relative_decrease(trace: &Trace) -> f64 {
    let n = trace.records.len();
    if n < 2 {
        return f64::INFINITY;
    }
    let a = trace.records[n - 2].f_value;
    let b = trace.records[n - 1].f_value;
    (a - b).abs() / (1.0 + b.abs())
}

#[derive(Debug, Clone, Copy)]
pub struct IdentificationPoint {
    pub k: usize,
    pub prox_steps: usize,
    /// |sig_k intersect sig_star|
    pub correct: usize,
    /// |sig_k minus sig_star|
    pub spurious: usize,
}

pub fn identification_series(
    trace: &Trace,
    reference: &ReferenceSolution,
) -> Vec<IdentificationPoint> {
    trace
        .records
        .iter()
        .map(|r| IdentificationPoint {
            k: r.k,
            prox_steps: r.prox_steps_cumulative,
            correct: r.signature.intersection_len(&reference.signature),
            spurious: r.signature.difference(&reference.signature).len(),
        })
        .collect()
}

#[derive(Debug, Clone, Copy)]
pub struct StabilityMetrics {
    /// Prox-step count at the first record with full correct
    /// identification and no spurious manifolds; None if never reached.
    pub first_full_identification: Option<usize>,
    /// Records after that first moment which violate full identification.
    pub holes_after_first: usize,
}

pub fn stability_metrics(
    series: &[IdentificationPoint],
    sig_star_size: usize,
) -> StabilityMetrics {
    let full = |p: &IdentificationPoint| p.correct == sig_star_size && p.spurious == 0;
    let first = series.iter().position(full);
    match first {
        None => StabilityMetrics {
            first_full_identification: None,
            holes_after_first: 0,
        },
        Some(i) => StabilityMetrics {
            first_full_identification: Some(series[i].prox_steps),
            holes_after_first: series[i + 1..].iter().filter(|p| !full(p)).count(),
        },
    }
}
