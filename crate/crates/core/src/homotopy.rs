//! Sampled homotopies between Laurent symbols.
//!
//! Two constructions are shipped: [`double_up_path`], the explicit closed-form
//! deformation carrying two stacked copies of the dimerised glide model to the
//! identity while commuting with the (doubled) glide at every parameter value,
//! and [`rotation_path`], the block-rotation joining `U ⊕ W` to `UW ⊕ 1`.
//! [`linear_path`] performs straight-line interpolation and is useful as a
//! deliberately fragile comparison: it preserves symmetry but not the gap.
//!
//! A path is stored as a uniform sampling together with the claims made about
//! it (declared endpoints, a gap bound, an optional glide block). The claims
//! are *replayed*, not trusted: [`verify_path`] re-checks symmetry, gap,
//! unitarity, continuity of the sampling, and constancy of every computable
//! index along the path, itemising each violation with the parameter value at
//! which it occurred.

use serde::Serialize;

use crate::error::HomotopyError;
use crate::error::SymbolError;
use crate::invariants::{winding_det, Axis, WindingSpec};
use crate::models::{build_glide_v, check_pg_compatibility, gap_certificate, DimerPreset, PgModel};
use crate::scalar::Scalar;
use crate::symbol::LaurentMatrix;
use crate::toeplitz::family_mod2_index;

/// Gap bound stored on the shipped trigonometric paths: every sample keeps
/// its smallest singular value above this.
pub const PATH_GAP_BOUND: f64 = 0.1;
/// Modulus-of-continuity bound: adjacent samples of a healthy path stay
/// within this coefficient distance.
pub const PATH_MAX_STEP: f64 = 0.2;
/// Tolerance on the glide-compatibility residual at each sample.
pub const PATH_COMPAT_TOL: f64 = 1e-12;
/// Tolerance on pointwise unitarity at each sample.
pub const PATH_UNITARY_TOL: f64 = 1e-10;
/// Tolerance for matching the sampled endpoints to their declarations.
pub const PATH_ENDPOINT_TOL: f64 = 1e-12;
/// Torus grid (points per axis) for the min-singular-value sweep.
const GAP_GRID: usize = 64;
/// Torus grid for the pointwise unitarity check.
const UNITARY_GRID: usize = 16;

/// A homotopy of symbols, represented by uniform parameter sampling.
///
/// The fields record both the data (samples) and the claims made about them;
/// construction via the shipped path builders guarantees the claims, while
/// [`verify_path`] re-checks them from scratch.
#[derive(Clone, Debug)]
pub struct SymbolPath<T: Scalar> {
    /// Parameter values, uniform over the declared range.
    pub t_samples: Vec<T>,
    /// Symbol at each parameter value.
    pub symbols: Vec<LaurentMatrix<T>>,
    /// Glide block the whole path is claimed to intertwine with, when the
    /// path lives in the glide-symmetric class.
    pub glide: Option<LaurentMatrix<T>>,
    /// Declared start symbol; the first sample must match it.
    pub start: LaurentMatrix<T>,
    /// Declared end symbol; the last sample must match it.
    pub end: LaurentMatrix<T>,
    /// Claimed gap bound: every sample's smallest singular value should
    /// exceed this. Zero means "no gap claim" (the verifier then flags any
    /// exact closure it finds).
    pub gap_bound: T,
    /// Human-readable tag used in reports.
    pub label: String,
}

impl<T: Scalar> SymbolPath<T> {
    /// Number of parameter samples.
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Matrix dimension of the sampled symbols (0 for an empty path).
    pub fn dim(&self) -> usize {
        self.symbols.first().map_or(0, LaurentMatrix::dim)
    }
}

/// Uniform grid 0, h, 2h, .., t_max with `count` points (count >= 2).
fn uniform_grid<T: Scalar>(count: usize, t_max: T) -> Vec<T> {
    let denom = T::from_index(count - 1);
    (0..count)
        .map(|i| t_max * (T::from_index(i) / denom))
        .collect()
}

/// The canonical glide block at the sampled dimension, provided every listed
/// symbol intertwines with it *exactly* at the coefficient level.
fn detect_glide<T: Scalar>(symbols: &[&LaurentMatrix<T>]) -> Option<LaurentMatrix<T>> {
    let dim = symbols.first()?.dim();
    if dim == 0 || dim % 2 != 0 {
        return None;
    }
    let v = build_glide_v::<T>(dim / 2);
    let exact = symbols.iter().all(|s| {
        check_pg_compatibility(&v, s)
            .map(|rep| rep.glide_residual == T::zero() && rep.square_residual == T::zero())
            .unwrap_or(false)
    });
    exact.then_some(v)
}

/// Closed-form deformation of two stacked copies of the dimerised vertical
/// model into the identity, sampled at `t_count` uniform points of
/// `[0, π/2]`.
///
/// Writing `Z` for the vertical dimer block and `V` for the glide, the
/// sample at parameter `t` is the four-factor product
///
/// ```text
/// (Z ⊕ 1) · G(t) · (1 ⊕ Z) · G(t)*,   G(t) = [cos t, -V sin t; V* sin t, cos t]
/// ```
///
/// `G(t)` is the plane rotation conjugated by `1 ⊕ V`, hence unitary (note
/// the adjoint in its lower-left corner: with `V` in both corners the factor
/// would not be unitary and the product would turn singular at `t = π/4`,
/// `k = (π, π)`). The product equals `Z ⊕ Z` at `t = 0` and collapses to
/// `(Z V Z V*) ⊕ 1 =` identity at `t = π/2` because `V Z V* = Z⁻¹`. Every
/// sample intertwines exactly with the doubled glide `V ⊕ V` and is unitary,
/// so the path stays gapped.
///
/// `t_count` must be odd (so the midpoint is sampled) and at least 3.
pub fn double_up_path<T: Scalar>(t_count: usize) -> Result<SymbolPath<T>, HomotopyError> {
    if t_count < 3 {
        return Err(HomotopyError::TooFewSamples {
            samples: t_count,
            required: 3,
        });
    }
    if t_count % 2 == 0 {
        return Err(HomotopyError::EvenSampleCount { samples: t_count });
    }
    let model = PgModel::<T>::dimer(DimerPreset::Purple);
    let z = model.u().clone();
    let v = model.v().clone();
    let eye = LaurentMatrix::identity(2);
    let v_adj = v.adjoint();
    let left = z.direct_sum(&eye);
    let right = eye.direct_sum(&z);

    let t_samples = uniform_grid(t_count, T::frac_pi_2());
    let mut symbols = Vec::with_capacity(t_count);
    for &t in &t_samples {
        let c = t.cos();
        let s = t.sin();
        let ci = eye.scale_real(c);
        let sv = v.scale_real(s);
        let sv_adj = v_adj.scale_real(s);
        let rot = LaurentMatrix::from_blocks_2x2(&ci, &sv.neg(), &sv_adj, &ci)?;
        let rot_adj = LaurentMatrix::from_blocks_2x2(&ci, &sv, &sv_adj.neg(), &ci)?;
        let sample = left.multiply(&rot)?.multiply(&right)?.multiply(&rot_adj)?;
        symbols.push(sample);
    }

    Ok(SymbolPath {
        t_samples,
        symbols,
        glide: Some(v.direct_sum(&v)),
        start: z.direct_sum(&z),
        end: LaurentMatrix::identity(4),
        gap_bound: T::lit(PATH_GAP_BOUND),
        label: "double-up".into(),
    })
}

/// Block-rotation path from `U ⊕ W` to `(U·W) ⊕ 1`, sampled at `t_count`
/// uniform points of `[0, π/2]`:
///
/// ```text
/// (U ⊕ 1) · [c, -s; s, c] · (1 ⊕ W) · [c, s; -s, c],   c = cos t, s = sin t
/// ```
///
/// Both endpoints must be gapped (certified on a torus grid); the rotation
/// blocks are constant in momentum, so every sample has smallest singular
/// value at least `σ_min(U ⊕ 1) · σ_min(1 ⊕ W)`. When `U` and `W` both
/// intertwine exactly with the canonical glide at their own dimension, the
/// doubled glide is attached to the path and the samples inherit the
/// symmetry.
pub fn rotation_path<T: Scalar>(
    u: &LaurentMatrix<T>,
    w: &LaurentMatrix<T>,
    t_count: usize,
) -> Result<SymbolPath<T>, HomotopyError> {
    if t_count < 2 {
        return Err(HomotopyError::TooFewSamples {
            samples: t_count,
            required: 2,
        });
    }
    if u.dim() != w.dim() {
        return Err(HomotopyError::Symbol(SymbolError::DimensionMismatch {
            left: u.dim(),
            right: w.dim(),
        }));
    }
    for endpoint in [u, w] {
        let cert = gap_certificate(endpoint, GAP_GRID);
        if !cert.certified {
            return Err(HomotopyError::GaplessEndpoint {
                min_singular: cert.min_singular.as_f64(),
            });
        }
    }
    let eye = LaurentMatrix::identity(u.dim());
    let left = u.direct_sum(&eye);
    let right = eye.direct_sum(w);

    let t_samples = uniform_grid(t_count, T::frac_pi_2());
    let mut symbols = Vec::with_capacity(t_count);
    for &t in &t_samples {
        let ci = eye.scale_real(t.cos());
        let si = eye.scale_real(t.sin());
        let rot = LaurentMatrix::from_blocks_2x2(&ci, &si.neg(), &si, &ci)?;
        let rot_inv = LaurentMatrix::from_blocks_2x2(&ci, &si, &si.neg(), &ci)?;
        let sample = left.multiply(&rot)?.multiply(&right)?.multiply(&rot_inv)?;
        symbols.push(sample);
    }

    let glide = detect_glide(&[u, w]).map(|v| v.direct_sum(&v));
    Ok(SymbolPath {
        t_samples,
        symbols,
        glide,
        start: u.direct_sum(w),
        end: u.multiply(w)?.direct_sum(&eye),
        gap_bound: T::lit(PATH_GAP_BOUND),
        label: "rotation".into(),
    })
}

/// Straight-line interpolation `(1-t) U + t W` on `[0, 1]`.
///
/// Symmetry survives linear combination, so the glide is attached whenever
/// both endpoints intertwine exactly with the canonical glide. The gap, by
/// contrast, has no reason to survive; the path still carries the standard
/// gap claim, because a deformation that loses the gap is not a valid
/// homotopy — [`verify_path`] then reports exactly where the claim breaks.
/// Useful as a counterexample feed for the verifier.
pub fn linear_path<T: Scalar>(
    u: &LaurentMatrix<T>,
    w: &LaurentMatrix<T>,
    t_count: usize,
) -> Result<SymbolPath<T>, HomotopyError> {
    if t_count < 2 {
        return Err(HomotopyError::TooFewSamples {
            samples: t_count,
            required: 2,
        });
    }
    if u.dim() != w.dim() {
        return Err(HomotopyError::Symbol(SymbolError::DimensionMismatch {
            left: u.dim(),
            right: w.dim(),
        }));
    }
    let t_samples = uniform_grid(t_count, T::one());
    let mut symbols = Vec::with_capacity(t_count);
    for &t in &t_samples {
        let sample = u.scale_real(T::one() - t).add(&w.scale_real(t))?;
        symbols.push(sample);
    }
    Ok(SymbolPath {
        t_samples,
        symbols,
        glide: detect_glide(&[u, w]),
        start: u.clone(),
        end: w.clone(),
        gap_bound: T::lit(PATH_GAP_BOUND),
        label: "linear".into(),
    })
}

/// Which checks [`verify_path`] runs. Continuity of the sampling and the
/// endpoint declarations are always checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PathChecks {
    /// Re-check the glide intertwining residual at every sample (skipped
    /// when the path carries no glide block).
    pub compatibility: bool,
    /// Sweep the smallest singular value of every sample over a torus grid.
    pub gap: bool,
    /// Check pointwise unitarity of every sample on a torus grid.
    pub unitary: bool,
    /// Evaluate winding numbers (and, on glide paths, the family parity) at
    /// the endpoints and three interior samples, and require constancy.
    pub index_invariance: bool,
}

impl PathChecks {
    pub fn all() -> Self {
        Self {
            compatibility: true,
            gap: true,
            unitary: true,
            index_invariance: true,
        }
    }

    pub fn none() -> Self {
        Self {
            compatibility: false,
            gap: false,
            unitary: false,
            index_invariance: false,
        }
    }
}

impl Default for PathChecks {
    fn default() -> Self {
        Self::all()
    }
}

/// Per-sample measurements; `None` fields correspond to checks that were
/// not requested (or, for the compatibility residual, to a path without a
/// glide block).
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PathSample<T: Scalar> {
    pub t: T,
    /// max-norm of `V·S - flip_ky(S)·V` at this sample.
    pub compat_residual: Option<T>,
    /// Smallest singular value over the torus grid.
    pub min_singular: Option<T>,
    /// Largest pointwise unitarity defect over the torus grid.
    pub unitary_residual: Option<T>,
    /// Coefficient distance to the previous sample (`None` on the first).
    pub step_from_previous: Option<T>,
}

/// Index values at one of the checked samples. `None` records that the
/// quantity was unavailable there: winding fails on a gapless loop, and the
/// family parity needs a glide block and a stabilised kernel.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct IndexSample<T: Scalar> {
    pub t: T,
    /// Winding of the determinant along k_x at k_y = 0.
    pub winding_x: Option<i64>,
    /// Winding of the determinant along k_y at k_x = 0.
    pub winding_y: Option<i64>,
    /// Family kernel parity of the glide model at this sample.
    pub mod2: Option<u8>,
}

/// Outcome of [`verify_path`]: per-sample measurements, index samples, and
/// an itemised list of violations (empty iff `passed`).
#[derive(Clone, Debug, Serialize)]
pub struct PathReport<T: Scalar> {
    pub label: String,
    pub checks: PathChecks,
    pub samples: Vec<PathSample<T>>,
    pub indices: Vec<IndexSample<T>>,
    /// Coefficient distance of the first sample from the declared start.
    pub endpoint_residual_start: T,
    /// Coefficient distance of the last sample from the declared end.
    pub endpoint_residual_end: T,
    /// Largest coefficient step between adjacent samples.
    pub max_step: T,
    /// Smallest singular value seen anywhere on the path (gap check only).
    pub min_gap: Option<T>,
    /// Largest glide residual seen (compatibility check on a glide path).
    pub max_compat_residual: Option<T>,
    /// Largest unitarity defect seen (unitarity check only).
    pub max_unitary_residual: Option<T>,
    /// Whether every index was constant across the checked samples.
    pub index_constant: bool,
    /// Human-readable violations, each naming the offending parameter.
    pub failures: Vec<String>,
    pub passed: bool,
}

/// Positions of the index-invariance samples: endpoints plus three interior
/// quartile points, deduplicated.
fn index_positions(len: usize) -> Vec<usize> {
    let last = len - 1;
    let mut positions = vec![0, last / 4, last / 2, 3 * last / 4, last];
    positions.sort_unstable();
    positions.dedup();
    positions
}

fn fold_max<T: Scalar>(acc: Option<T>, x: T) -> Option<T> {
    Some(match acc {
        Some(m) if m > x => m,
        _ => x,
    })
}

fn fold_min<T: Scalar>(acc: Option<T>, x: T) -> Option<T> {
    Some(match acc {
        Some(m) if m < x => m,
        _ => x,
    })
}

/// `true` when every entry equals the first one (vacuously true when empty).
/// A mixture of available and unavailable values counts as inconstant.
fn all_equal<V: PartialEq>(values: &[V]) -> bool {
    values.windows(2).all(|w| w[0] == w[1])
}

/// Family kernel parity of a path sample against the path's glide block.
fn sample_mod2<T: Scalar>(v: &LaurentMatrix<T>, s: &LaurentMatrix<T>) -> Result<u8, String> {
    let model =
        PgModel::new(v.clone(), s.clone(), "path-sample", None).map_err(|e| e.to_string())?;
    let cutoff = (4 * s.y_degree() + 4).max(16);
    let report =
        family_mod2_index(&model, 4, cutoff, T::lit(1e-8)).map_err(|e| e.to_string())?;
    Ok(report.mod2)
}

/// Re-check a sampled path from scratch.
///
/// Always checked: the sample/parameter vectors are consistent, the first and
/// last samples match the declared endpoints to [`PATH_ENDPOINT_TOL`], and
/// adjacent samples stay within [`PATH_MAX_STEP`] in coefficient distance
/// (the declared modulus of continuity of the sampling). The remaining
/// checks are selected via [`PathChecks`]. Violations never abort the scan;
/// each is itemised with the parameter value at which it occurred, and
/// `passed` reflects an empty list. Errors are reserved for malformed paths
/// (empty, or with mismatched sample vectors).
pub fn verify_path<T: Scalar>(
    path: &SymbolPath<T>,
    checks: PathChecks,
) -> Result<PathReport<T>, HomotopyError> {
    if path.symbols.is_empty() || path.t_samples.is_empty() {
        return Err(HomotopyError::EmptyPath);
    }
    if path.symbols.len() != path.t_samples.len() {
        return Err(HomotopyError::MismatchedSamples {
            symbols: path.symbols.len(),
            t_samples: path.t_samples.len(),
        });
    }
    let count = path.symbols.len();
    let mut failures: Vec<String> = Vec::new();

    let endpoint_tol = T::lit(PATH_ENDPOINT_TOL);
    let endpoint_residual_start = path.symbols[0].coeff_distance(&path.start)?;
    if endpoint_residual_start > endpoint_tol {
        failures.push(format!(
            "first sample differs from the declared start by {:.3e}",
            endpoint_residual_start.as_f64()
        ));
    }
    let endpoint_residual_end = path.symbols[count - 1].coeff_distance(&path.end)?;
    if endpoint_residual_end > endpoint_tol {
        failures.push(format!(
            "last sample differs from the declared end by {:.3e}",
            endpoint_residual_end.as_f64()
        ));
    }

    let compat_tol = T::lit(PATH_COMPAT_TOL);
    let unitary_tol = T::lit(PATH_UNITARY_TOL);
    let step_bound = T::lit(PATH_MAX_STEP);
    let mut samples = Vec::with_capacity(count);
    let mut max_step = T::zero();
    let mut min_gap: Option<T> = None;
    let mut max_compat_residual: Option<T> = None;
    let mut max_unitary_residual: Option<T> = None;

    for i in 0..count {
        let t = path.t_samples[i];
        let s = &path.symbols[i];

        let compat_residual = match &path.glide {
            Some(v) if checks.compatibility => {
                let residual = v
                    .multiply(s)?
                    .sub(&s.flip_ky().multiply(v)?)?
                    .max_norm();
                if residual > compat_tol {
                    failures.push(format!(
                        "t={:.6}: glide residual {:.3e} exceeds {:.0e}",
                        t.as_f64(),
                        residual.as_f64(),
                        PATH_COMPAT_TOL
                    ));
                }
                max_compat_residual = fold_max(max_compat_residual, residual);
                Some(residual)
            }
            _ => None,
        };

        let min_singular = if checks.gap {
            let cert = gap_certificate(s, GAP_GRID);
            if cert.min_singular <= path.gap_bound {
                failures.push(format!(
                    "t={:.6}: min singular value {:.3e} at or below the declared bound {:.3e}",
                    t.as_f64(),
                    cert.min_singular.as_f64(),
                    path.gap_bound.as_f64()
                ));
            }
            min_gap = fold_min(min_gap, cert.min_singular);
            Some(cert.min_singular)
        } else {
            None
        };

        let unitary_residual = if checks.unitary {
            let check = s.is_unitary(UNITARY_GRID, unitary_tol);
            if !check.unitary {
                failures.push(format!(
                    "t={:.6}: unitarity defect {:.3e} exceeds {:.0e}",
                    t.as_f64(),
                    check.max_residual.as_f64(),
                    PATH_UNITARY_TOL
                ));
            }
            max_unitary_residual = fold_max(max_unitary_residual, check.max_residual);
            Some(check.max_residual)
        } else {
            None
        };

        let step_from_previous = if i > 0 {
            let step = s.coeff_distance(&path.symbols[i - 1])?;
            if step > max_step {
                max_step = step;
            }
            if step >= step_bound {
                failures.push(format!(
                    "t={:.6}: coefficient step {:.3e} breaks the continuity bound {}",
                    t.as_f64(),
                    step.as_f64(),
                    PATH_MAX_STEP
                ));
            }
            Some(step)
        } else {
            None
        };

        samples.push(PathSample {
            t,
            compat_residual,
            min_singular,
            unitary_residual,
            step_from_previous,
        });
    }

    let mut indices = Vec::new();
    let mut index_constant = true;
    if checks.index_invariance {
        for position in index_positions(count) {
            let t = path.t_samples[position];
            let s = &path.symbols[position];
            let winding_x = match winding_det(s, &WindingSpec::auto(Axis::X, T::zero(), s)) {
                Ok(w) => Some(w),
                Err(e) => {
                    failures.push(format!("t={:.6}: x-winding unavailable: {e}", t.as_f64()));
                    None
                }
            };
            let winding_y = match winding_det(s, &WindingSpec::auto(Axis::Y, T::zero(), s)) {
                Ok(w) => Some(w),
                Err(e) => {
                    failures.push(format!("t={:.6}: y-winding unavailable: {e}", t.as_f64()));
                    None
                }
            };
            let mod2 = match &path.glide {
                Some(v) => match sample_mod2(v, s) {
                    Ok(parity) => Some(parity),
                    Err(message) => {
                        failures.push(format!(
                            "t={:.6}: family parity unavailable: {message}",
                            t.as_f64()
                        ));
                        None
                    }
                },
                None => None,
            };
            indices.push(IndexSample {
                t,
                winding_x,
                winding_y,
                mod2,
            });
        }
        let xs: Vec<_> = indices.iter().map(|i| i.winding_x).collect();
        let ys: Vec<_> = indices.iter().map(|i| i.winding_y).collect();
        let ms: Vec<_> = indices.iter().map(|i| i.mod2).collect();
        index_constant = all_equal(&xs) && all_equal(&ys) && all_equal(&ms);
        if !index_constant {
            failures.push("index values vary across the checked samples".into());
        }
    }

    let passed = failures.is_empty();
    Ok(PathReport {
        label: path.label.clone(),
        checks,
        samples,
        indices,
        endpoint_residual_start,
        endpoint_residual_end,
        max_step,
        min_gap,
        max_compat_residual,
        max_unitary_residual,
        index_constant,
        failures,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::HomotopyError;
    use crate::models::DimerPreset;

    type L = LaurentMatrix<f64>;

    fn purple() -> L {
        PgModel::<f64>::dimer(DimerPreset::Purple).u().clone()
    }

    fn red() -> L {
        PgModel::<f64>::dimer(DimerPreset::Red).u().clone()
    }

    fn green() -> L {
        PgModel::<f64>::dimer(DimerPreset::Green).u().clone()
    }

    #[test]
    fn double_up_endpoints_are_exact() {
        let path = double_up_path::<f64>(33).unwrap();
        assert_eq!(path.len(), 33);
        assert_eq!(path.t_samples.len(), 33);
        assert_eq!(path.dim(), 4);

        let z = purple();
        let doubled = z.direct_sum(&z);
        assert_eq!(path.start.coeff_distance(&doubled).unwrap(), 0.0);
        assert_eq!(path.symbols[0].coeff_distance(&doubled).unwrap(), 0.0);
        assert_eq!(path.end.coeff_distance(&L::identity(4)).unwrap(), 0.0);
        assert_eq!(
            path.symbols[32].coeff_distance(&L::identity(4)).unwrap(),
            0.0
        );
    }

    /// Independent closed form of the four-factor product: with
    /// D = cos²t · Z + sin²t, the sample is the block matrix
    /// [D, cs(ZV - V); -cs(ZV* - V*), D]. Every coefficient is a single
    /// product of the same atoms in both computations, so the match is
    /// exact.
    #[test]
    fn double_up_matches_the_closed_form() {
        let path = double_up_path::<f64>(33).unwrap();
        let z = purple();
        let v = build_glide_v::<f64>(1);
        let v_adj = v.adjoint();
        let eye = L::identity(2);
        for (&t, sample) in path.t_samples.iter().zip(&path.symbols) {
            let (c, s) = (t.cos(), t.sin());
            let d = z.scale_real(c * c).add(&eye.scale_real(s * s)).unwrap();
            let y_upper = z.multiply(&v).unwrap().sub(&v).unwrap().scale_real(c * s);
            let y_lower = z
                .multiply(&v_adj)
                .unwrap()
                .sub(&v_adj)
                .unwrap()
                .scale_real(c * s);
            let closed = L::from_blocks_2x2(&d, &y_upper, &y_lower.neg(), &d).unwrap();
            assert_eq!(closed.coeff_distance(sample).unwrap(), 0.0, "t = {t}");
        }
    }

    #[test]
    fn double_up_is_exactly_glide_compatible() {
        let path = double_up_path::<f64>(33).unwrap();
        let v4 = path.glide.clone().unwrap();
        for (i, sample) in path.symbols.iter().enumerate() {
            let residual = v4
                .multiply(sample)
                .unwrap()
                .sub(&sample.flip_ky().multiply(&v4).unwrap())
                .unwrap()
                .max_norm();
            assert_eq!(residual, 0.0, "sample {i}");
            // The pair must also pass full model validation (exact glide
            // square included).
            PgModel::new(v4.clone(), sample.clone(), "sample", None).unwrap();
        }
    }

    #[test]
    fn double_up_passes_every_check() {
        let path = double_up_path::<f64>(33).unwrap();
        let report = verify_path(&path, PathChecks::all()).unwrap();
        assert!(report.passed, "failures: {:?}", report.failures);
        assert_eq!(report.endpoint_residual_start, 0.0);
        assert_eq!(report.endpoint_residual_end, 0.0);
        assert_eq!(report.max_compat_residual, Some(0.0));
        assert!(report.min_gap.unwrap() > 0.9, "unitary path stays gapped");
        assert!(report.max_step < PATH_MAX_STEP);
        assert!(report.max_unitary_residual.unwrap() < 1e-12);
        assert!(report.index_constant);
        assert_eq!(report.indices.len(), 5);
        for index in &report.indices {
            assert_eq!(index.winding_x, Some(0));
            assert_eq!(index.winding_y, Some(0));
            assert_eq!(index.mod2, Some(0));
        }
    }

    #[test]
    fn rotation_with_inverse_factor_lands_on_the_identity() {
        let path = rotation_path(&red(), &green(), 33).unwrap();
        assert_eq!(
            path.start
                .coeff_distance(&red().direct_sum(&green()))
                .unwrap(),
            0.0
        );
        assert_eq!(path.end.coeff_distance(&L::identity(4)).unwrap(), 0.0);
        assert_eq!(path.symbols[0].coeff_distance(&path.start).unwrap(), 0.0);
        assert_eq!(path.symbols[32].coeff_distance(&path.end).unwrap(), 0.0);
        assert!(path.glide.is_some(), "both factors are glide-symmetric");

        let report = verify_path(&path, PathChecks::all()).unwrap();
        assert!(report.passed, "failures: {:?}", report.failures);
        assert!(report.min_gap.unwrap() > 0.9);
        assert!(report.index_constant);
        for index in &report.indices {
            assert_eq!(index.winding_x, Some(0));
            assert_eq!(index.winding_y, Some(0));
            assert_eq!(index.mod2, Some(0));
        }
    }

    #[test]
    fn rotation_of_scalar_phases_preserves_the_winding() {
        let ux = L::phase(1, 0);
        let path = rotation_path(&ux, &ux, 33).unwrap();
        assert!(path.glide.is_none(), "scalar factors carry no glide block");
        assert_eq!(
            path.end
                .coeff_distance(&L::phase(2, 0).direct_sum(&L::identity(1)))
                .unwrap(),
            0.0
        );

        let report = verify_path(&path, PathChecks::all()).unwrap();
        assert!(report.passed, "failures: {:?}", report.failures);
        assert!(report.index_constant);
        for index in &report.indices {
            assert_eq!(index.winding_x, Some(2));
            assert_eq!(index.winding_y, Some(0));
            assert_eq!(index.mod2, None);
        }
    }

    #[test]
    fn rotation_with_identity_factor_is_a_constant_endpoint_sanity_check() {
        let path = rotation_path(&red(), &L::identity(2), 33).unwrap();
        assert_eq!(path.start.coeff_distance(&path.end).unwrap(), 0.0);
        assert_eq!(path.symbols[0].coeff_distance(&path.start).unwrap(), 0.0);
        assert_eq!(path.symbols[32].coeff_distance(&path.end).unwrap(), 0.0);

        let report = verify_path(&path, PathChecks::all()).unwrap();
        assert!(report.passed, "failures: {:?}", report.failures);
    }

    #[test]
    fn linear_interpolation_is_flagged_for_gap_closure() {
        let path = linear_path(&red(), &green(), 33).unwrap();
        assert!(path.glide.is_some(), "symmetry survives interpolation");
        let checks = PathChecks {
            compatibility: true,
            gap: true,
            unitary: false,
            index_invariance: false,
        };
        let report = verify_path(&path, checks).unwrap();
        assert!(!report.passed);
        assert_eq!(report.max_compat_residual, Some(0.0));
        assert!(report.min_gap.unwrap() < 1e-12, "gap closes at k_x = π");
        assert!(
            report
                .failures
                .iter()
                .any(|f| f.contains("min singular") && f.contains("t=0.5")),
            "failures: {:?}",
            report.failures
        );
    }

    #[test]
    fn constant_path_keeps_the_odd_family_parity() {
        let model = PgModel::<f64>::dimer(DimerPreset::Purple);
        let path = SymbolPath {
            t_samples: vec![0.0, 0.5, 1.0],
            symbols: vec![model.u().clone(), model.u().clone(), model.u().clone()],
            glide: Some(model.v().clone()),
            start: model.u().clone(),
            end: model.u().clone(),
            gap_bound: 0.1,
            label: "constant".into(),
        };
        let report = verify_path(&path, PathChecks::all()).unwrap();
        assert!(report.passed, "failures: {:?}", report.failures);
        assert!(report.index_constant);
        assert_eq!(report.indices.len(), 3, "quartiles collapse on 3 samples");
        for index in &report.indices {
            assert_eq!(index.mod2, Some(1));
        }
    }

    #[test]
    fn construction_preconditions_are_enforced() {
        assert!(matches!(
            double_up_path::<f64>(1),
            Err(HomotopyError::TooFewSamples {
                samples: 1,
                required: 3
            })
        ));
        assert!(matches!(
            double_up_path::<f64>(4),
            Err(HomotopyError::EvenSampleCount { samples: 4 })
        ));
        assert!(matches!(
            rotation_path(&red(), &L::phase(1, 0), 9),
            Err(HomotopyError::Symbol(SymbolError::DimensionMismatch {
                left: 2,
                right: 1
            }))
        ));
        assert!(matches!(
            rotation_path(&red(), &L::zero(2), 9),
            Err(HomotopyError::GaplessEndpoint { .. })
        ));
        assert!(matches!(
            linear_path(&red(), &green(), 1),
            Err(HomotopyError::TooFewSamples {
                samples: 1,
                required: 2
            })
        ));
    }

    #[test]
    fn malformed_paths_are_rejected_by_the_verifier() {
        let mut path = double_up_path::<f64>(5).unwrap();
        path.t_samples.pop();
        assert!(matches!(
            verify_path(&path, PathChecks::none()),
            Err(HomotopyError::MismatchedSamples {
                symbols: 5,
                t_samples: 4
            })
        ));
        path.t_samples.clear();
        path.symbols.clear();
        assert!(matches!(
            verify_path(&path, PathChecks::none()),
            Err(HomotopyError::EmptyPath)
        ));
    }

    #[test]
    fn path_reports_serialize() {
        let path = double_up_path::<f64>(33).unwrap();
        let report = verify_path(
            &path,
            PathChecks {
                compatibility: true,
                gap: false,
                unitary: false,
                index_invariance: false,
            },
        )
        .unwrap();
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.contains("\"passed\":true"));
        assert!(json.contains("\"label\":\"double-up\""));
    }
}
