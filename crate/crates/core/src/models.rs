//! Tight-binding model constructors and validation.
//!
//! A bulk model is a pair (V, U) of 2n x 2n Laurent symbols where U is the
//! off-diagonal block of a chiral Hamiltonian H = [[0, U], [U*, 0]] and V is
//! a glide symbol satisfying, exactly at the coefficient level,
//!
//!   V(k_x) V(k_x) = e^{i k_x} 1,      V U = flip_ky(U) V.
//!
//! The general compatible form over an n-fold cell is
//!
//!   U = [[a(k), e^{i k_x} b(k_x, -k_y)], [b(k), a(k_x, -k_y)]]
//!
//! with arbitrary n x n Laurent blocks a, b; all four dimerised presets are
//! instances. Chain models (one-dimensional, two sites per cell) and the
//! reduced two-band edge symbol used by the local mod-2 invariant live here
//! as well.

use nalgebra::DMatrix;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::ModelError;
use crate::scalar::Scalar;
use crate::symbol::{max_abs_entry, min_singular_value, op_norm, LaurentMatrix, TorusPoint};

/// The four dimerised presets on the two-site glide cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DimerPreset {
    /// U_r = [[0, e^{i k_x}], [1, 0]]: horizontal dimers crossing the cell.
    Red,
    /// U_g = U_r^{-1} = [[0, 1], [e^{-i k_x}, 0]]: the reversed dimers.
    Green,
    /// U_p = diag(e^{i k_y}, e^{-i k_y}): vertical dimers in opposite
    /// directions on the two sublattice copies.
    Purple,
    /// U_b = 1: fully intra-cell pairing.
    Blank,
}

impl DimerPreset {
    pub const ALL: [DimerPreset; 4] = [
        DimerPreset::Red,
        DimerPreset::Green,
        DimerPreset::Purple,
        DimerPreset::Blank,
    ];

    pub fn label(self) -> &'static str {
        match self {
            DimerPreset::Red => "Ur",
            DimerPreset::Green => "Ug",
            DimerPreset::Purple => "Up",
            DimerPreset::Blank => "Ub",
        }
    }

    /// Scalar generators (a, b) realising the preset in the general glide
    /// form with n = 1.
    pub fn generators<T: Scalar>(self) -> (LaurentMatrix<T>, LaurentMatrix<T>) {
        let zero = LaurentMatrix::zero(1);
        let one = LaurentMatrix::identity(1);
        match self {
            DimerPreset::Red => (zero, one),
            DimerPreset::Green => (zero, LaurentMatrix::phase(-1, 0)),
            DimerPreset::Purple => (LaurentMatrix::phase(0, 1), zero),
            DimerPreset::Blank => (one, zero),
        }
    }
}

/// Chain (one-dimensional) presets: scalar symbols e^{i w k} with winding
/// w = +1, 0, -1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SshPreset {
    Red,
    Blue,
    Green,
}

impl SshPreset {
    pub fn label(self) -> &'static str {
        match self {
            SshPreset::Red => "ssh_red",
            SshPreset::Blue => "ssh_blue",
            SshPreset::Green => "ssh_green",
        }
    }
}

/// Residuals of the two defining relations, in coefficient max-norm.
/// Both are exactly zero for a compliant model.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CompatibilityReport<T: Scalar> {
    /// max-norm of V U - flip_ky(U) V.
    pub glide_residual: T,
    /// max-norm of V V - e^{i k_x} 1.
    pub square_residual: T,
}

/// Certified lower bound on the spectral gap (smallest singular value of U
/// over the torus): grid minimum minus a Lipschitz sampling margin.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct GapCertificate<T: Scalar> {
    /// Smallest singular value observed on the grid.
    pub min_singular: T,
    /// sum over terms of op-norm(C_{m,n}) * (|m| + |n|).
    pub lipschitz: T,
    /// Grid points per axis.
    pub grid: usize,
    /// min_singular - (2*pi/grid) * lipschitz; the model is certified
    /// gapped iff this is positive.
    pub lower_bound: T,
    pub certified: bool,
}

/// A glide-compatible gapped bulk model: glide symbol V, chiral
/// off-diagonal block U, both 2n x 2n. Construction validates the defining
/// relations exactly; models built via [`build_general_u`] keep their
/// scalar generators so they can be perturbed.
#[derive(Clone, Debug)]
pub struct PgModel<T: Scalar> {
    v: LaurentMatrix<T>,
    u: LaurentMatrix<T>,
    half_dim: usize,
    label: String,
    generators: Option<(LaurentMatrix<T>, LaurentMatrix<T>)>,
}

impl<T: Scalar> PgModel<T> {
    /// Validate and wrap a (V, U) pair. Both relations must hold exactly at
    /// the coefficient level (canonical forms agree bit for bit).
    pub fn new(
        v: LaurentMatrix<T>,
        u: LaurentMatrix<T>,
        label: impl Into<String>,
        generators: Option<(LaurentMatrix<T>, LaurentMatrix<T>)>,
    ) -> Result<Self, ModelError> {
        let dim = u.dim();
        if v.dim() != dim {
            return Err(ModelError::Symbol(
                crate::error::SymbolError::DimensionMismatch {
                    left: v.dim(),
                    right: dim,
                },
            ));
        }
        if dim == 0 || dim % 2 != 0 {
            return Err(ModelError::ZeroHalfDimension);
        }
        let report = check_pg_compatibility(&v, &u)?;
        if report.square_residual > T::zero() {
            return Err(ModelError::BadGlideSquare {
                residual: report.square_residual.as_f64(),
            });
        }
        if report.glide_residual > T::zero() {
            return Err(ModelError::IncompatibleGlide {
                residual: report.glide_residual.as_f64(),
            });
        }
        Ok(Self {
            v,
            u,
            half_dim: dim / 2,
            label: label.into(),
            generators,
        })
    }

    /// The dimerised preset model on the two-site cell.
    pub fn dimer(preset: DimerPreset) -> Self {
        let (a, b) = preset.generators::<T>();
        let u = build_general_u(&a, &b).expect("preset generators are scalar");
        let v = build_glide_v(1);
        Self::new(v, u, preset.label(), Some((a, b)))
            .expect("dimer presets satisfy the glide relations exactly")
    }

    pub fn v(&self) -> &LaurentMatrix<T> {
        &self.v
    }

    pub fn u(&self) -> &LaurentMatrix<T> {
        &self.u
    }

    /// n, where U is 2n x 2n.
    pub fn half_dim(&self) -> usize {
        self.half_dim
    }

    /// Block dimension of U (= 2n).
    pub fn dim(&self) -> usize {
        2 * self.half_dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn generators(&self) -> Option<&(LaurentMatrix<T>, LaurentMatrix<T>)> {
        self.generators.as_ref()
    }

    /// The chiral Hamiltonian H = [[0, U], [U*, 0]] (4n x 4n).
    pub fn chiral(&self) -> LaurentMatrix<T> {
        chiral_hamiltonian(&self.u)
    }

    /// Re-run the coefficient-level compatibility check.
    pub fn compatibility(&self) -> CompatibilityReport<T> {
        check_pg_compatibility(&self.v, &self.u).expect("dimensions validated at construction")
    }

    /// Block direct sum: (V1 + V2, U1 + U2) with labels joined. Scalar
    /// generators do not survive the interleaving, so the sum cannot be
    /// perturbed further.
    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::new(
            self.v.direct_sum(&other.v),
            self.u.direct_sum(&other.u),
            format!("{}(+){}", self.label, other.label),
            None,
        )
        .expect("direct sums of compliant models are compliant")
    }

    /// Certify the spectral gap on a `grid` x `grid` torus grid.
    pub fn certify_gap(&self, grid: usize) -> Result<GapCertificate<T>, ModelError> {
        let cert = gap_certificate(&self.u, grid);
        if cert.certified {
            Ok(cert)
        } else {
            Err(ModelError::GapClosed {
                min_singular: cert.min_singular.as_f64(),
                margin: (cert.min_singular - cert.lower_bound).as_f64(),
                grid,
            })
        }
    }
}

/// Chain model: chiral two-site cell with scalar symbol u(k_x) (no k_y
/// dependence allowed).
#[derive(Clone, Debug)]
pub struct SshModel<T: Scalar> {
    u: LaurentMatrix<T>,
    label: String,
}

impl<T: Scalar> SshModel<T> {
    pub fn new(u: LaurentMatrix<T>, label: impl Into<String>) -> Result<Self, ModelError> {
        if u.y_degree() != 0 {
            return Err(ModelError::UnexpectedDependence {
                axis: 'y',
                degree: u.y_degree() as i64,
            });
        }
        Ok(Self {
            u,
            label: label.into(),
        })
    }

    pub fn preset(p: SshPreset) -> Self {
        let u = match p {
            SshPreset::Red => LaurentMatrix::phase(1, 0),
            SshPreset::Blue => LaurentMatrix::identity(1),
            SshPreset::Green => LaurentMatrix::phase(-1, 0),
        };
        Self::new(u, p.label()).expect("presets have no k_y dependence")
    }

    pub fn u(&self) -> &LaurentMatrix<T> {
        &self.u
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn chiral(&self) -> LaurentMatrix<T> {
        chiral_hamiltonian(&self.u)
    }
}

/// Reduced two-band edge symbol H(k) = [[a, conj(b)], [b, -a]] with a
/// real-valued and b satisfying conj(b(k)) = -e^{i k} b(k), i.e.
/// conj(b_{-m-1}) = -b_m on coefficients.
#[derive(Clone, Debug)]
pub struct EdgeSymbol<T: Scalar> {
    a: LaurentMatrix<T>,
    b: LaurentMatrix<T>,
}

impl<T: Scalar> EdgeSymbol<T> {
    pub fn a(&self) -> &LaurentMatrix<T> {
        &self.a
    }

    pub fn b(&self) -> &LaurentMatrix<T> {
        &self.b
    }

    /// The 2 x 2 symbol [[a, conj(b)], [b, -a]].
    pub fn hamiltonian(&self) -> LaurentMatrix<T> {
        let conj_b = self.b.adjoint(); // scalar: pointwise conjugate
        LaurentMatrix::from_blocks_2x2(&self.a, &conj_b, &self.b, &self.a.neg())
            .expect("scalar blocks")
    }

    /// Smallest value of a(k)^2 + |b(k)|^2 on a uniform grid.
    pub fn gap_on_grid(&self, grid: usize) -> T {
        let step = T::two_pi() / T::from_index(grid.max(1));
        let mut min = T::max_value().unwrap_or_else(T::one);
        for i in 0..grid.max(1) {
            let k = TorusPoint::new(T::from_index(i) * step, T::zero());
            let av = self.a.eval(k)[(0, 0)];
            let bv = self.b.eval(k)[(0, 0)];
            let g = av.re * av.re + bv.norm_sqr();
            if g < min {
                min = g;
            }
        }
        min
    }
}

/// The normal-form glide symbol on a 2n-site cell:
/// V = [[0, e^{i k_x} I_n], [I_n, 0]]. Satisfies V V = e^{i k_x} 1 exactly.
pub fn build_glide_v<T: Scalar>(n: usize) -> LaurentMatrix<T> {
    assert!(n > 0, "glide cell must contain at least one site pair");
    let d = 2 * n;
    let mut upper = DMatrix::<Complex<T>>::zeros(d, d);
    upper
        .view_mut((0, n), (n, n))
        .copy_from(&DMatrix::identity(n, n));
    let mut lower = DMatrix::<Complex<T>>::zeros(d, d);
    lower
        .view_mut((n, 0), (n, n))
        .copy_from(&DMatrix::identity(n, n));
    LaurentMatrix::from_terms(d, [((1, 0), upper), ((0, 0), lower)])
        .expect("distinct exponents, square blocks")
}

/// The four dimerised bulk symbols, in the order red, green, purple, blank.
pub fn build_dimer_symbols<T: Scalar>() -> [LaurentMatrix<T>; 4] {
    DimerPreset::ALL.map(|p| {
        let (a, b) = p.generators::<T>();
        build_general_u(&a, &b).expect("scalar generators")
    })
}

/// Assemble the general glide-compatible chiral block from n x n Laurent
/// blocks a, b:
///
///   U = [[a, e^{i k_x} flip_ky(b)], [b, flip_ky(a)]].
///
/// Compatibility with [`build_glide_v`]`(n)` holds exactly by construction.
pub fn build_general_u<T: Scalar>(
    a: &LaurentMatrix<T>,
    b: &LaurentMatrix<T>,
) -> Result<LaurentMatrix<T>, ModelError> {
    if a.dim() != b.dim() {
        return Err(ModelError::Symbol(
            crate::error::SymbolError::DimensionMismatch {
                left: a.dim(),
                right: b.dim(),
            },
        ));
    }
    let n = a.dim();
    let ux = LaurentMatrix::monomial(1, 0, DMatrix::identity(n, n));
    let upper_right = ux.multiply(&b.flip_ky())?;
    Ok(LaurentMatrix::from_blocks_2x2(
        a,
        &upper_right,
        b,
        &a.flip_ky(),
    )?)
}

/// Coefficient-level residuals of the glide relations for a (V, U) pair.
pub fn check_pg_compatibility<T: Scalar>(
    v: &LaurentMatrix<T>,
    u: &LaurentMatrix<T>,
) -> Result<CompatibilityReport<T>, ModelError> {
    let glide_residual = v
        .multiply(u)?
        .sub(&u.flip_ky().multiply(v)?)?
        .max_norm();
    let ux_eye = LaurentMatrix::monomial(1, 0, DMatrix::identity(v.dim(), v.dim()));
    let square_residual = v.multiply(v)?.sub(&ux_eye)?.max_norm();
    Ok(CompatibilityReport {
        glide_residual,
        square_residual,
    })
}

/// The chiral Hamiltonian H = [[0, U], [U*, 0]] of an off-diagonal block U.
pub fn chiral_hamiltonian<T: Scalar>(u: &LaurentMatrix<T>) -> LaurentMatrix<T> {
    let zero = LaurentMatrix::zero(u.dim());
    LaurentMatrix::from_blocks_2x2(&zero, u, &u.adjoint(), &zero).expect("equal dimensions")
}

/// Validate scalar edge data (a, b): a real-valued, b obeying
/// conj(b_{-m-1}) = -b_m, and the symbol gapped on a 256-point grid.
pub fn build_edge_symbol<T: Scalar>(
    a: LaurentMatrix<T>,
    b: LaurentMatrix<T>,
) -> Result<EdgeSymbol<T>, ModelError> {
    for s in [&a, &b] {
        if s.dim() != 1 {
            return Err(ModelError::NotScalar { dim: s.dim() });
        }
        if s.y_degree() != 0 {
            return Err(ModelError::UnexpectedDependence {
                axis: 'y',
                degree: s.y_degree() as i64,
            });
        }
    }
    let a_residual = a.sub(&a.adjoint())?.max_norm();
    if a_residual > T::zero() {
        return Err(ModelError::EdgeANotReal {
            residual: a_residual.as_f64(),
        });
    }
    // conj(b(k)) + e^{i k} b(k) = 0 <=> shifted adjoint cancels b.
    let b_residual = b
        .adjoint()
        .multiply(&LaurentMatrix::phase(-1, 0))?
        .add(&b)?
        .max_norm();
    if b_residual > T::zero() {
        return Err(ModelError::EdgeBConstraint {
            residual: b_residual.as_f64(),
        });
    }
    let edge = EdgeSymbol { a, b };
    let min_gap = edge.gap_on_grid(256);
    if min_gap <= T::zero() {
        return Err(ModelError::EdgeGapClosed {
            min_gap: min_gap.as_f64(),
        });
    }
    Ok(edge)
}

/// Gap certificate for an arbitrary symbol (see [`GapCertificate`]).
pub fn gap_certificate<T: Scalar>(u: &LaurentMatrix<T>, grid: usize) -> GapCertificate<T> {
    let grid = grid.max(2);
    let step = T::two_pi() / T::from_index(grid);
    let lipschitz = u
        .terms()
        .map(|(&(m, n), block)| {
            op_norm(block) * T::from_index(m.unsigned_abs() as usize + n.unsigned_abs() as usize)
        })
        .fold(T::zero(), |acc, x| acc + x);
    let mut min_singular = T::max_value().unwrap_or_else(T::one);
    let nx = if u.x_degree() == 0 { 1 } else { grid };
    let ny = if u.y_degree() == 0 { 1 } else { grid };
    for ix in 0..nx {
        for iy in 0..ny {
            let k = TorusPoint::new(T::from_index(ix) * step, T::from_index(iy) * step);
            let sv = min_singular_value(&u.eval(k));
            if sv < min_singular {
                min_singular = sv;
            }
        }
    }
    let lower_bound = min_singular - step * lipschitz;
    GapCertificate {
        min_singular,
        lipschitz,
        grid,
        lower_bound,
        certified: lower_bound > T::zero(),
    }
}

/// Support window for random perturbations: exponents (m, n) with
/// |m|, |n| <= 1, in fixed iteration order for determinism.
const PERTURBATION_WINDOW: [(i64, i64); 9] = [
    (-1, -1),
    (-1, 0),
    (-1, 1),
    (0, -1),
    (0, 0),
    (0, 1),
    (1, -1),
    (1, 0),
    (1, 1),
];

/// Seeded random glide-compatible perturbation of a model built from scalar
/// generators. The perturbations delta-a, delta-b land on the exponent
/// window |m|, |n| <= 1 and are scaled so each carries total coefficient
/// mass `amplitude / 2`; the perturbed model then satisfies the glide
/// relations exactly by construction and is re-certified gapped (a closure
/// is reported as an error). Amplitude 0 returns the model unchanged,
/// coefficient for coefficient.
pub fn random_gapped_perturbation<T: Scalar>(
    m: &PgModel<T>,
    amplitude: T,
    seed: u64,
) -> Result<PgModel<T>, ModelError> {
    if amplitude < T::zero() {
        return Err(ModelError::NegativeAmplitude {
            amplitude: amplitude.as_f64(),
        });
    }
    if amplitude == T::zero() {
        return Ok(m.clone());
    }
    let (a0, b0) = m.generators().ok_or(ModelError::NoGenerators)?;
    let n = a0.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw_block = |rng: &mut ChaCha8Rng| {
        DMatrix::from_fn(n, n, |_, _| {
            // Uniform on [-1, 1]^2; drawn as f64 so the stream is identical
            // for every scalar type.
            let re = T::lit(2.0 * rng.random::<f64>() - 1.0);
            let im = T::lit(2.0 * rng.random::<f64>() - 1.0);
            Complex::new(re, im)
        })
    };
    let budget = amplitude / T::lit(2.0);
    let perturb = |rng: &mut ChaCha8Rng, base: &LaurentMatrix<T>| {
        let raw: Vec<DMatrix<Complex<T>>> =
            (0..PERTURBATION_WINDOW.len()).map(|_| draw_block(rng)).collect();
        let total: T = raw
            .iter()
            .map(max_abs_entry)
            .fold(T::zero(), |acc, x| acc + x);
        let scale = if total > T::zero() {
            budget / total
        } else {
            T::zero()
        };
        let mut out = base.clone();
        for ((mm, nn), block) in PERTURBATION_WINDOW.iter().zip(raw) {
            out.add_term_assign(*mm, *nn, &(block * Complex::new(scale, T::zero())));
        }
        out
    };
    let a = perturb(&mut rng, a0);
    let b = perturb(&mut rng, b0);
    let u = build_general_u(&a, &b)?;
    let v = build_glide_v(n);
    let model = PgModel::new(
        v,
        u,
        format!("{}~perturbed(seed={seed})", m.label()),
        Some((a, b)),
    )?;
    model.certify_gap(64)?;
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::singular_values_sorted;

    type L = LaurentMatrix<f64>;
    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    /// Hand-built coefficient maps for the four dimer symbols.
    fn expected_dimer(preset: DimerPreset) -> L {
        let e = |i: usize, j: usize| {
            let mut m = DMatrix::<C>::zeros(2, 2);
            m[(i, j)] = c(1.0, 0.0);
            m
        };
        match preset {
            // [[0, u_x], [1, 0]]
            DimerPreset::Red => {
                L::from_terms(2, [((1, 0), e(0, 1)), ((0, 0), e(1, 0))]).unwrap()
            }
            // [[0, 1], [conj(u_x), 0]]
            DimerPreset::Green => {
                L::from_terms(2, [((0, 0), e(0, 1)), ((-1, 0), e(1, 0))]).unwrap()
            }
            // diag(u_y, conj(u_y))
            DimerPreset::Purple => {
                L::from_terms(2, [((0, 1), e(0, 0)), ((0, -1), e(1, 1))]).unwrap()
            }
            DimerPreset::Blank => L::identity(2),
        }
    }

    #[test]
    fn glide_v_squares_to_x_phase() {
        for n in 1..=3 {
            let v: L = build_glide_v(n);
            let ux_eye = L::monomial(1, 0, DMatrix::identity(2 * n, 2 * n));
            let residual = v.multiply(&v).unwrap().coeff_distance(&ux_eye).unwrap();
            assert_eq!(residual, 0.0, "V*V == u_x 1 must hold exactly (n={n})");
        }
    }

    #[test]
    fn glide_v_matches_normal_form() {
        let v: L = build_glide_v(1);
        let mut upper = DMatrix::<C>::zeros(2, 2);
        upper[(0, 1)] = c(1.0, 0.0);
        let mut lower = DMatrix::<C>::zeros(2, 2);
        lower[(1, 0)] = c(1.0, 0.0);
        assert_eq!(v.term(1, 0).unwrap().clone(), upper);
        assert_eq!(v.term(0, 0).unwrap().clone(), lower);
        assert_eq!(v.term_count(), 2);
    }

    #[test]
    fn dimer_symbols_match_hand_built_coefficients() {
        for preset in DimerPreset::ALL {
            let model: PgModel<f64> = PgModel::dimer(preset);
            let expected = expected_dimer(preset);
            assert_eq!(
                model.u().clone(),
                expected,
                "general form must reproduce {} exactly",
                preset.label()
            );
            let chk = model.u().is_unitary(16, 1e-12);
            assert!(chk.unitary, "{} must be unitary", preset.label());
        }
    }

    #[test]
    fn dimer_models_satisfy_relations_exactly() {
        for preset in DimerPreset::ALL {
            let model: PgModel<f64> = PgModel::dimer(preset);
            let rep = model.compatibility();
            assert_eq!(rep.glide_residual, 0.0);
            assert_eq!(rep.square_residual, 0.0);
        }
    }

    #[test]
    fn incompatible_symbol_reports_nonzero_residual() {
        // U = u_y 1 violates the glide relation: V (u_y 1) - (conj(u_y) 1) V
        // = (u_y - conj(u_y)) V, whose coefficients have max-norm exactly 1.
        let v: L = build_glide_v(1);
        let u = L::monomial(0, 1, DMatrix::identity(2, 2));
        let rep = check_pg_compatibility(&v, &u).unwrap();
        assert_eq!(rep.glide_residual, 1.0);
        assert!(PgModel::new(v, u, "bad", None).is_err());
    }

    #[test]
    fn eval_spot_checks_on_presets() {
        let ur: PgModel<f64> = PgModel::dimer(DimerPreset::Red);
        let at0 = ur.u().eval_xy(0.0, 0.0);
        let expected = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        assert!((at0 - expected).norm() < 1e-12);

        let up: PgModel<f64> = PgModel::dimer(DimerPreset::Purple);
        let at_pi = up.u().eval_xy(0.0, std::f64::consts::PI);
        let minus_eye = DMatrix::from_diagonal_element(2, 2, c(-1.0, 0.0));
        assert!((at_pi - minus_eye).norm() < 1e-12);
    }

    #[test]
    fn chiral_hamiltonian_is_hermitian_and_flat() {
        let ur: PgModel<f64> = PgModel::dimer(DimerPreset::Red);
        let h = ur.chiral();
        assert_eq!(h.hermitian_residual(), 0.0);

        // Chirality: S H S = -H for S = diag(1, 1, -1, -1), exactly.
        let mut s_mat = DMatrix::<C>::identity(4, 4);
        s_mat[(2, 2)] = c(-1.0, 0.0);
        s_mat[(3, 3)] = c(-1.0, 0.0);
        let s = L::monomial(0, 0, s_mat);
        let anti = s
            .multiply(&h)
            .unwrap()
            .add(&h.multiply(&s).unwrap())
            .unwrap();
        assert!(anti.is_zero());

        // Spectrum at each k is plus/minus the singular values of U(k); for
        // a unitary preset that is a flat pair at 1.
        let k = TorusPoint::new(1.1, 2.3);
        let hk = h.eval(k);
        let eig = hk.symmetric_eigenvalues();
        let mut abs: Vec<f64> = eig.iter().map(|e| e.abs()).collect();
        abs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for v in abs {
            assert!((v - 1.0).abs() < 1e-12);
        }
        let sv = singular_values_sorted(&ur.u().eval(k));
        assert!((sv[0] - 1.0).abs() < 1e-12 && (sv[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn general_u_supports_block_generators() {
        // n = 2 with a = u_y I_2, b = 0 reproduces purple on a doubled cell.
        let a = L::monomial(0, 1, DMatrix::identity(2, 2));
        let b = L::zero(2);
        let u = build_general_u(&a, &b).unwrap();
        let v: L = build_glide_v(2);
        let rep = check_pg_compatibility(&v, &u).unwrap();
        assert_eq!(rep.glide_residual, 0.0);
        assert_eq!(rep.square_residual, 0.0);
    }

    #[test]
    fn direct_sum_is_compliant() {
        let up: PgModel<f64> = PgModel::dimer(DimerPreset::Purple);
        let ur: PgModel<f64> = PgModel::dimer(DimerPreset::Red);
        let s = up.direct_sum(&ur);
        assert_eq!(s.dim(), 4);
        let rep = s.compatibility();
        assert_eq!(rep.glide_residual, 0.0);
        assert_eq!(rep.square_residual, 0.0);
    }

    #[test]
    fn gap_certificate_on_purple() {
        let up: PgModel<f64> = PgModel::dimer(DimerPreset::Purple);
        let cert = up.certify_gap(64).unwrap();
        assert!((cert.min_singular - 1.0).abs() < 1e-12);
        assert!((cert.lipschitz - 2.0).abs() < 1e-12);
        assert!(cert.lower_bound > 0.75);
    }

    #[test]
    fn edge_symbol_validation() {
        // Valid: a = -1, b = 1 - conj(u_x).
        let a = L::identity(1).scale_real(-1.0);
        let b = L::identity(1).sub(&L::phase(-1, 0)).unwrap();
        let e = build_edge_symbol(a.clone(), b).unwrap();
        assert!(e.gap_on_grid(256) >= 1.0 - 1e-12);

        // b = 1 violates conj(b_{-m-1}) = -b_m.
        assert!(matches!(
            build_edge_symbol(a.clone(), L::identity(1)),
            Err(ModelError::EdgeBConstraint { .. })
        ));

        // a = u_x is not real-valued.
        assert!(matches!(
            build_edge_symbol(L::phase(1, 0), L::zero(1)),
            Err(ModelError::EdgeANotReal { .. })
        ));

        // a = 0, b = 0 is gapless.
        assert!(matches!(
            build_edge_symbol(L::zero(1), L::zero(1)),
            Err(ModelError::EdgeGapClosed { .. })
        ));
    }

    #[test]
    fn edge_hamiltonian_shape() {
        // a = 1, b = 0: H = diag(1, -1).
        let e = build_edge_symbol(L::identity(1), L::zero(1)).unwrap();
        let h = e.hamiltonian();
        let hk = h.eval_xy(0.3, 0.0);
        assert!((hk[(0, 0)] - c(1.0, 0.0)).norm() < 1e-12);
        assert!((hk[(1, 1)] - c(-1.0, 0.0)).norm() < 1e-12);
        assert_eq!(h.hermitian_residual(), 0.0);
    }

    #[test]
    fn perturbation_is_deterministic_and_compliant() {
        let up: PgModel<f64> = PgModel::dimer(DimerPreset::Purple);
        let p1 = random_gapped_perturbation(&up, 0.3, 7).unwrap();
        let p2 = random_gapped_perturbation(&up, 0.3, 7).unwrap();
        assert_eq!(p1.u().clone(), p2.u().clone(), "same seed, same model");
        let p3 = random_gapped_perturbation(&up, 0.3, 8).unwrap();
        assert!(p1.u().coeff_distance(p3.u()).unwrap() > 0.0, "seeds differ");

        let rep = p1.compatibility();
        assert_eq!(rep.glide_residual, 0.0);
        assert_eq!(rep.square_residual, 0.0);
        assert!(p1.certify_gap(64).is_ok());
        assert!(p1.u().coeff_distance(up.u()).unwrap() > 0.0);
    }

    #[test]
    fn zero_amplitude_perturbation_is_identity() {
        let up: PgModel<f64> = PgModel::dimer(DimerPreset::Purple);
        let p = random_gapped_perturbation(&up, 0.0, 42).unwrap();
        assert_eq!(p.u().clone(), up.u().clone());
        assert_eq!(p.v().clone(), up.v().clone());
    }

    #[test]
    fn oversized_perturbation_reports_gap_closure() {
        let up: PgModel<f64> = PgModel::dimer(DimerPreset::Purple);
        let mut closures = 0;
        for seed in 0..10 {
            if matches!(
                random_gapped_perturbation(&up, 10.0, seed),
                Err(ModelError::GapClosed { .. })
            ) {
                closures += 1;
            }
        }
        assert!(closures > 0, "amplitude 10 must close the gap for some seeds");
    }

    #[test]
    fn perturbation_without_generators_is_rejected() {
        let up: PgModel<f64> = PgModel::dimer(DimerPreset::Purple);
        let sum = up.direct_sum(&up);
        assert!(matches!(
            random_gapped_perturbation(&sum, 0.1, 0),
            Err(ModelError::NoGenerators)
        ));
    }

    #[test]
    fn ssh_presets() {
        let red: SshModel<f64> = SshModel::preset(SshPreset::Red);
        assert_eq!(red.u().support(), vec![(1, 0)]);
        let blue: SshModel<f64> = SshModel::preset(SshPreset::Blue);
        assert_eq!(blue.u().support(), vec![(0, 0)]);
        let green: SshModel<f64> = SshModel::preset(SshPreset::Green);
        assert_eq!(green.u().support(), vec![(-1, 0)]);
        // k_y dependence is rejected.
        assert!(SshModel::new(L::phase(0, 1), "bad").is_err());
    }
}
