//! Inertial coefficient schedules and a numeric validator for the
//! t-sequence assumptions they must satisfy.

/// Which t-sequence drives the extrapolation coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InertiaVariant {
    /// t_{k+1} = (1 + sqrt(1 + 4 t_k^2)) / 2, t_1 = 1 (FISTA).
    Nesterov,
    /// t_k = (k + a - 1) / a, a > 2.
    ChambolleDossal { a: f64 },
    /// t_{k+1} = (p + sqrt(q + 4 t_k^2)) / 2, t_1 = 1, p in (0,1], q > 0.
    Liang { p: f64, q: f64 },
    /// alpha identically zero (degenerate, for testing and plain PG).
    Zero,
}

/// Coefficients produced by one schedule advance: alpha_{k+1} together
/// with the (t_k, t_{k+1}) pair it came from.
#[derive(Debug, Clone, Copy)]
pub struct StepCoeffs {
    pub alpha: f64,
    pub t_prev: f64,
    pub t_next: f64,
}

/// Stateful inertial schedule. Every variant starts with t = 1 at its
/// first use; the first advance therefore always returns alpha = 0.
#[derive(Debug, Clone)]
pub struct InertiaSchedule {
    variant: InertiaVariant,
    t: f64,
    k: usize,
}

impl InertiaSchedule {
    pub fn new(variant: InertiaVariant) -> Self {
        Self {
            variant,
            t: 1.0,
            k: 1,
        }
    }

    pub fn variant(&self) -> InertiaVariant {
        self.variant
    }

    pub fn t_current(&self) -> f64 {
        self.t
    }

    fn next_t(&self) -> f64 {
        match self.variant {
            InertiaVariant::Nesterov => (1.0 + (1.0 + 4.0 * self.t * self.t).sqrt()) / 2.0,
            InertiaVariant::ChambolleDossal { a } => (self.k as f64 + a) / a,
            InertiaVariant::Liang { p, q } => (p + (q + 4.0 * self.t * self.t).sqrt()) / 2.0,
            InertiaVariant::Zero => 1.0,
        }
    }

    /// Compute t_{k+1} and return alpha_{k+1} = (t_k - 1) / t_{k+1}.
    pub fn advance(&mut self) -> StepCoeffs {
        let t_prev = self.t;
        let t_next = self.next_t();
        let alpha = if matches!(self.variant, InertiaVariant::Zero) {
            0.0
        } else {
            (t_prev - 1.0) / t_next
        };
        self.t = t_next;
        self.k += 1;
        StepCoeffs {
            alpha,
            t_prev,
            t_next,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    /// Iterations k where t_{k+1}^2 - t_{k+1} > t_k^2 + a relative 1e-9 slack.
    pub recurrence_failures: Vec<usize>,
    /// Empirical C = min_k t_k / k over the horizon.
    pub growth_constant: f64,
}

impl ValidationReport {
    pub fn passes(&self) -> bool {
        self.recurrence_failures.is_empty() && self.growth_constant > 0.0
    }
}

/// Check a t-sequence over a horizon: (i) t_{k+1}^2 - t_{k+1} <= t_k^2
/// up to relative rounding slack, and (ii) report the empirical linear-growth constant.
pub fn validate_t_sequence(ts: impl IntoIterator<Item = f64>, horizon: usize) -> ValidationReport {
    assert!(horizon >= 2, "horizon must be >= 2");
    let mut failures = Vec::new();
    let mut growth = f64::INFINITY;
    let mut prev: Option<f64> = None;
    for (idx, t) in ts.into_iter().take(horizon).enumerate() {
        let k = idx + 1;
        growth = growth.min(t / k as f64);
        if let Some(tp) = prev {
            if t * t - t > tp * tp + 1e-9 * (1.0 + tp * tp) {
                failures.push(k);
            }
        }
        prev = Some(t);
    }
    ValidationReport {
        recurrence_failures: failures,
        growth_constant: growth,
    }
}

/// Convenience wrapper: validate the t-sequence a schedule generates.
pub fn validate_assumption2(variant: InertiaVariant, horizon: usize) -> ValidationReport {
    let mut s = InertiaSchedule::new(variant);
    let ts = std::iter::once(1.0).chain(std::iter::from_fn(move || Some(s.advance().t_next)));
    validate_t_sequence(ts, horizon)
}
