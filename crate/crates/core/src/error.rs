//! Error type shared by every solver path in the crate.

use thiserror::Error;

/// Failure modes of the similarity, series, shooting, and grid solvers.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violates its documented domain.
    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    /// The front does not advance: requires m + 1 > 0, i.e. k > -1 - 1/n.
    #[error("no advancing front for n = {n}, k = {k}: m + 1 = {m_plus_one:.6e} <= 0")]
    NoAdvancingFront { n: f64, k: f64, m_plus_one: f64 },

    /// Requested series order is outside 1..=MAX_ORDER.
    #[error("series order {order} outside supported range 1..={max}")]
    OrderTooLarge { order: usize, max: usize },

    /// The linear coefficient of the recurrence vanished; happens only at m = -1.
    #[error("degenerate recurrence at order {order}: linear coefficient {coeff:.3e}")]
    DegenerateRecurrence { order: usize, coeff: f64 },

    /// Series terms grew past the overflow guard; the expansion is useless at this alpha.
    #[error("series coefficient overflow at order {order}: |beta_i| alpha^i = {magnitude:.3e}")]
    CoefficientOverflow { order: usize, magnitude: f64 },

    /// The candidate profile is not positive at the origin, so no boundary flux can be read off.
    #[error("non-physical profile at alpha = {alpha:.6e}: f(0) = {f0:.6e} <= 0")]
    NonPhysicalProfile { alpha: f64, f0: f64 },

    /// A bracketing scan found no sign change; the sampled sign pattern is attached.
    #[error("no sign change in [{lo:.3e}, {hi:.3e}]; sampled signs: {signs}")]
    NoSignChange { lo: f64, hi: f64, signs: String },

    /// A bracketed root refinement stopped without meeting the residual tolerance.
    #[error("root at alpha = {alpha:.9e} kept residual {residual:.3e} above tolerance")]
    RootNotConverged { alpha: f64, residual: f64 },

    /// The profile crossed zero during inward integration; alpha is below the true root.
    #[error("integration became singular near theta = {theta:.6e}: f reached zero")]
    SingularIntegration { theta: f64 },

    /// The adaptive integrator underflowed its step size without a singularity.
    #[error("integrator step underflow at theta = {theta:.6e} (step = {step:.3e})")]
    StepFailure { theta: f64, step: f64 },

    /// The numerical front reached the right edge of the grid; the domain is too short.
    #[error("front reached the domain boundary at t = {t:.6e}; enlarge domain_length")]
    FrontEscape { t: f64 },

    /// Newton iteration failed to converge even after repeated step halving.
    #[error("Newton iteration diverged at t = {t:.6e} with dt = {dt:.3e}")]
    NewtonDivergence { t: f64, dt: f64 },

    /// The grid solution went negative beyond rounding noise.
    #[error("positivity violated at t = {t:.6e}: min u = {min_u:.3e}")]
    PositivityViolation { t: f64, min_u: f64 },

    /// Two profiles share no support interval, so no comparison grid exists.
    #[error("profiles have no overlapping support: [0, {alpha_a:.3e}] vs [0, {alpha_b:.3e}]")]
    DomainMismatch { alpha_a: f64, alpha_b: f64 },

    /// Closed-form profiles exist only for m = 1 and for nm + n + 2m = 0.
    #[error("no closed-form profile at n = {n}, m = {m}: requires m = 1 or nm + n + 2m = 0")]
    NoExactForm { n: f64, m: f64 },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
