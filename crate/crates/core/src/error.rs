//! Typed error enums, one per module. Library code never panics on bad
//! input; every fallible operation returns `Result` with one of these.

use thiserror::Error;

/// Errors from the Laurent symbol algebra.
#[derive(Debug, Error)]
pub enum SymbolError {
    #[error("block dimension mismatch: {left}x{left} vs {right}x{right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("coefficient block at ({m}, {n}) is {rows}x{cols}, expected {dim}x{dim}")]
    BadBlockShape {
        m: i64,
        n: i64,
        rows: usize,
        cols: usize,
        dim: usize,
    },

    #[error("duplicate coefficient block at ({m}, {n})")]
    DuplicateTerm { m: i64, n: i64 },

    #[error("symbol dimension must be positive")]
    ZeroDimension,
}

/// Errors from model construction and validation.
#[derive(Debug, Error)]
pub enum ModelError {
    #[error(transparent)]
    Symbol(#[from] SymbolError),

    #[error("glide compatibility violated: coefficient residual {residual:e} (must be exactly zero)")]
    IncompatibleGlide { residual: f64 },

    #[error("glide symbol does not square to the x-phase: residual {residual:e}")]
    BadGlideSquare { residual: f64 },

    #[error("spectral gap not certified: min singular value {min_singular:e} with Lipschitz margin {margin:e} at grid {grid}")]
    GapClosed {
        min_singular: f64,
        margin: f64,
        grid: usize,
    },

    #[error("edge symbol: a must be real-valued, coefficient residual {residual:e}")]
    EdgeANotReal { residual: f64 },

    #[error("edge symbol: b must satisfy conj(b_(-n-1)) = -b_n, coefficient residual {residual:e}")]
    EdgeBConstraint { residual: f64 },

    #[error("symbol in one variable expected: {axis}-degree is {degree}, must be 0")]
    UnexpectedDependence { axis: char, degree: i64 },

    #[error("scalar (1x1) symbol expected, got block dimension {dim}")]
    NotScalar { dim: usize },

    #[error("edge symbol is gapless: min of a^2 + |b|^2 on the grid is {min_gap:e}")]
    EdgeGapClosed { min_gap: f64 },

    #[error("model has no scalar generators (a, b); only models built from the general glide form can be perturbed")]
    NoGenerators,

    #[error("perturbation amplitude must be non-negative, got {amplitude}")]
    NegativeAmplitude { amplitude: f64 },

    #[error("half-dimension must be positive")]
    ZeroHalfDimension,
}

/// Errors from winding and mod-2 invariant computations.
#[derive(Debug, Error)]
pub enum InvariantError {
    #[error(transparent)]
    Symbol(#[from] SymbolError),

    #[error("loop passes through a non-invertible point: |det| = {min_abs_det:e} at parameter {at}")]
    GaplessLoop { min_abs_det: f64, at: f64 },

    #[error("{samples} samples are below the Nyquist bound {required} for this symbol")]
    SamplesBelowNyquist { samples: usize, required: usize },

    #[error("phase unwrapping failed: step exceeding pi/2 persists at {samples} samples")]
    UnwrapFailure { samples: usize },

    #[error("accumulated phase / 2*pi = {value} is not within 1e-6 of an integer")]
    NonIntegerWinding { value: f64 },

    #[error("sample count {samples} must be a power of two, at least {min}")]
    BadSampleCount { samples: usize, min: usize },

    #[error("edge-symbol gap closes on the sample grid: |zeta denominator| = {min_norm:e}")]
    EdgeGapClosed { min_norm: f64 },

    #[error("zeta equivariance violated: max |zeta(l+pi) - conj(zeta(l))| = {residual:e}")]
    EquivarianceFailure { residual: f64 },

    #[error("zeta has nonzero winding {winding}; the lift is not periodic")]
    NonzeroZetaWinding { winding: i64 },

    #[error("mu integral {value} is not within 1e-6 of an integer")]
    NonIntegerMu { value: f64 },

    #[error("winding along x disagrees between k_y = 0 ({at_zero}) and k_y = pi ({at_pi})")]
    InconsistentWinding { at_zero: i64, at_pi: i64 },

    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Errors from Toeplitz compressions and kernel counting.
#[derive(Debug, Error)]
pub enum ToeplitzError {
    #[error(transparent)]
    Symbol(#[from] SymbolError),

    #[error("cutoff {cutoff} too small: need more than twice the y-degree {y_degree}")]
    CutoffTooSmall { cutoff: usize, y_degree: usize },

    #[error("kernel count ambiguous: largest singular value below tol is {below:e}, smallest above is {above:e} (ratio {ratio:e} >= 1e-3)")]
    AmbiguousKernel { below: f64, above: f64, ratio: f64 },

    #[error("kernel dimension did not stabilize: {at_n} at cutoff {n}, {at_n2} at cutoff {n2}")]
    NotStabilized {
        n: usize,
        at_n: usize,
        n2: usize,
        at_n2: usize,
    },

    #[error("symbol is not unitary-valued at k_x = {k_x}: residual {residual:e}")]
    NotUnitary { k_x: f64, residual: f64 },

    #[error("upper/lower kernel parity mismatch at k_x = {k_x}: {upper} vs {lower}")]
    ParityMismatch { k_x: f64, upper: usize, lower: usize },

    #[error("kernel parity not constant over the k_x grid: {parities:?}")]
    ParityNotConstant { parities: Vec<usize> },

    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Errors from real-space edge lattices and zero-mode counting.
#[derive(Debug, Error)]
pub enum RealspaceError {
    #[error(transparent)]
    Symbol(#[from] SymbolError),

    #[error(transparent)]
    Model(#[from] ModelError),

    #[error("lattice Hamiltonian not Hermitian: residual {residual:e}")]
    NotHermitian { residual: f64 },

    #[error("zero-energy subspace ambiguous: largest |E| below tol is {below:e}, smallest above is {above:e} (ratio {ratio:e} >= 1e-3)")]
    AmbiguousZeroSpace { below: f64, above: f64, ratio: f64 },

    #[error("zero modes do not split cleanly by {what}: projector eigenvalue {value} is not near 0 or 1")]
    AmbiguousSplit { what: &'static str, value: f64 },

    #[error("cell count {cells} too small: need at least {required}")]
    TooFewCells { cells: usize, required: usize },

    #[error("boundary coupling is only defined for the red_plus_green chain, not {pattern}")]
    UnsupportedBoundaryCoupling { pattern: &'static str },

    #[error("correspondence check needs a glide or vertical edge, not a finite chain")]
    ChainHasNoBulk,

    #[error(transparent)]
    Toeplitz(#[from] ToeplitzError),

    #[error(transparent)]
    Invariant(#[from] InvariantError),
}

/// Errors from homotopy path construction (verification failures are
/// reported in `PathReport`, not as errors).
#[derive(Debug, Error)]
pub enum HomotopyError {
    #[error(transparent)]
    Symbol(#[from] SymbolError),

    #[error("path needs at least {required} parameter samples, got {samples}")]
    TooFewSamples { samples: usize, required: usize },

    #[error("sample count {samples} must be odd so the midpoint is sampled")]
    EvenSampleCount { samples: usize },

    #[error("path has {symbols} symbols for {t_samples} parameter samples")]
    MismatchedSamples { symbols: usize, t_samples: usize },

    #[error("path endpoint is not certified gapped: min singular value {min_singular:e}")]
    GaplessEndpoint { min_singular: f64 },

    #[error("path is empty")]
    EmptyPath,

    #[error(transparent)]
    Invariant(#[from] InvariantError),

    #[error(transparent)]
    Toeplitz(#[from] ToeplitzError),
}
