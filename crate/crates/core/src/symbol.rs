//! Laurent symbol algebra over the two-torus.
//!
//! A symbol is a finitely supported family of dense complex d x d blocks
//! C_{m,n} representing the trigonometric polynomial
//!
//!   U(k) = sum_{m,n} C_{m,n} e^{i (m k_x + n k_y)},   k = (k_x, k_y).
//!
//! All higher modules manipulate these objects: pointwise products become
//! coefficient convolutions, the adjoint negates exponents and conjugates
//! blocks, and the glide conjugation k_y -> -k_y is a sign flip on n.

use std::collections::BTreeMap;

use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::SymbolError;
use crate::scalar::Scalar;

/// Coefficient blocks whose largest entry modulus falls below this after an
/// arithmetic operation are dropped from the canonical form.
pub const CANONICAL_CUTOFF: f64 = 1e-14;

/// A point on the two-torus with coordinates reduced to [0, 2*pi).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TorusPoint<T: Scalar> {
    k_x: T,
    k_y: T,
}

impl<T: Scalar> TorusPoint<T> {
    pub fn new(k_x: T, k_y: T) -> Self {
        Self {
            k_x: reduce_mod_two_pi(k_x),
            k_y: reduce_mod_two_pi(k_y),
        }
    }

    pub fn k_x(&self) -> T {
        self.k_x
    }

    pub fn k_y(&self) -> T {
        self.k_y
    }
}

fn reduce_mod_two_pi<T: Scalar>(x: T) -> T {
    let tau = T::two_pi();
    let mut y = x - (x / tau).floor() * tau;
    // Guard rounding at the seam: floor can leave y == tau or y slightly
    // negative for inputs within one ulp of a multiple of 2*pi.
    if y >= tau {
        y -= tau;
    }
    if y < T::zero() {
        y += tau;
    }
    y
}

/// Matrix-valued Laurent polynomial on the two-torus, in canonical form:
/// no all-zero blocks are stored, and arithmetic drops blocks below
/// [`CANONICAL_CUTOFF`] in max-entry modulus.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentMatrix<T: Scalar> {
    dim: usize,
    terms: BTreeMap<(i64, i64), DMatrix<Complex<T>>>,
}

impl<T: Scalar> LaurentMatrix<T> {
    /// The zero symbol of block dimension `dim`.
    pub fn zero(dim: usize) -> Self {
        assert!(dim > 0, "symbol dimension must be positive");
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    /// The constant identity symbol.
    pub fn identity(dim: usize) -> Self {
        let mut s = Self::zero(dim);
        s.add_term_assign(0, 0, &DMatrix::identity(dim, dim));
        s
    }

    /// Single-term symbol `block * e^{i(m k_x + n k_y)}`.
    pub fn monomial(m: i64, n: i64, block: DMatrix<Complex<T>>) -> Self {
        let dim = block.nrows();
        assert_eq!(dim, block.ncols(), "coefficient blocks must be square");
        let mut s = Self::zero(dim);
        s.add_term_assign(m, n, &block);
        s
    }

    /// Scalar (1x1) symbol `z * e^{i(m k_x + n k_y)}`.
    pub fn scalar_term(m: i64, n: i64, z: Complex<T>) -> Self {
        Self::monomial(m, n, DMatrix::from_element(1, 1, z))
    }

    /// Scalar phase `e^{i(m k_x + n k_y)}`.
    pub fn phase(m: i64, n: i64) -> Self {
        Self::scalar_term(m, n, Complex::new(T::one(), T::zero()))
    }

    /// Build from an explicit term list; rejects duplicate exponents and
    /// blocks of the wrong shape. Exact-zero blocks are dropped.
    pub fn from_terms(
        dim: usize,
        terms: impl IntoIterator<Item = ((i64, i64), DMatrix<Complex<T>>)>,
    ) -> Result<Self, SymbolError> {
        if dim == 0 {
            return Err(SymbolError::ZeroDimension);
        }
        let mut s = Self::zero(dim);
        for ((m, n), block) in terms {
            if block.nrows() != dim || block.ncols() != dim {
                return Err(SymbolError::BadBlockShape {
                    m,
                    n,
                    rows: block.nrows(),
                    cols: block.ncols(),
                    dim,
                });
            }
            if s.terms.contains_key(&(m, n)) {
                return Err(SymbolError::DuplicateTerm { m, n });
            }
            if max_abs_entry(&block) > T::zero() {
                s.terms.insert((m, n), block);
            }
        }
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of stored coefficient blocks.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient block at exponent (m, n), if stored.
    pub fn term(&self, m: i64, n: i64) -> Option<&DMatrix<Complex<T>>> {
        self.terms.get(&(m, n))
    }

    /// Iterate stored terms in ascending (m, n) order.
    pub fn terms(&self) -> impl Iterator<Item = (&(i64, i64), &DMatrix<Complex<T>>)> {
        self.terms.iter()
    }

    /// Exponents carrying a nonzero block, in ascending order.
    pub fn support(&self) -> Vec<(i64, i64)> {
        self.terms.keys().copied().collect()
    }

    /// max |m| over the support (0 for the zero symbol).
    pub fn x_degree(&self) -> usize {
        self.terms
            .keys()
            .map(|&(m, _)| m.unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }

    /// max |n| over the support (0 for the zero symbol).
    pub fn y_degree(&self) -> usize {
        self.terms
            .keys()
            .map(|&(_, n)| n.unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Add `block * e^{i(m k_x + n k_y)}` into the symbol, keeping canonical
    /// form (the updated slot is dropped if it falls below the cutoff).
    pub fn add_term_assign(&mut self, m: i64, n: i64, block: &DMatrix<Complex<T>>) {
        assert_eq!(block.nrows(), self.dim);
        assert_eq!(block.ncols(), self.dim);
        let slot = self
            .terms
            .entry((m, n))
            .or_insert_with(|| DMatrix::zeros(self.dim, self.dim));
        *slot += block;
        if max_abs_entry(slot) < T::lit(CANONICAL_CUTOFF) {
            self.terms.remove(&(m, n));
        }
    }

    /// Evaluate at a torus point.
    pub fn eval(&self, k: TorusPoint<T>) -> DMatrix<Complex<T>> {
        let mut out = DMatrix::zeros(self.dim, self.dim);
        for (&(m, n), block) in &self.terms {
            let theta = T::from_int(m) * k.k_x() + T::from_int(n) * k.k_y();
            let phase = Complex::new(theta.cos(), theta.sin());
            out += block * phase;
        }
        out
    }

    /// Evaluate at raw coordinates (reduced internally).
    pub fn eval_xy(&self, k_x: T, k_y: T) -> DMatrix<Complex<T>> {
        self.eval(TorusPoint::new(k_x, k_y))
    }

    /// Pointwise product: coefficient convolution. Errors on block
    /// dimension mismatch.
    pub fn multiply(&self, other: &Self) -> Result<Self, SymbolError> {
        if self.dim != other.dim {
            return Err(SymbolError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let mut out = Self::zero(self.dim);
        let mut slots: BTreeMap<(i64, i64), DMatrix<Complex<T>>> = BTreeMap::new();
        for (&(m1, n1), a) in &self.terms {
            for (&(m2, n2), b) in &other.terms {
                let key = (m1 + m2, n1 + n2);
                let prod = a * b;
                match slots.get_mut(&key) {
                    Some(slot) => *slot += prod,
                    None => {
                        slots.insert(key, prod);
                    }
                }
            }
        }
        for ((m, n), block) in slots {
            if max_abs_entry(&block) >= T::lit(CANONICAL_CUTOFF) {
                out.terms.insert((m, n), block);
            }
        }
        Ok(out)
    }

    /// Pointwise sum.
    pub fn add(&self, other: &Self) -> Result<Self, SymbolError> {
        if self.dim != other.dim {
            return Err(SymbolError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let mut out = self.clone();
        for (&(m, n), block) in &other.terms {
            out.add_term_assign(m, n, block);
        }
        Ok(out)
    }

    /// Pointwise difference `self - other`.
    pub fn sub(&self, other: &Self) -> Result<Self, SymbolError> {
        self.add(&other.neg())
    }

    /// Pointwise negation.
    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for block in out.terms.values_mut() {
            *block = -&*block;
        }
        out
    }

    /// Scale every coefficient by the complex number `z`.
    pub fn scale(&self, z: Complex<T>) -> Self {
        let mut out = Self::zero(self.dim);
        for (&(m, n), block) in &self.terms {
            let scaled = block * z;
            if max_abs_entry(&scaled) >= T::lit(CANONICAL_CUTOFF) {
                out.terms.insert((m, n), scaled);
            }
        }
        out
    }

    /// Scale by a real number.
    pub fn scale_real(&self, x: T) -> Self {
        self.scale(Complex::new(x, T::zero()))
    }

    /// Pointwise adjoint: U*(k) = sum conj(C_{m,n})^T e^{-i(m k_x + n k_y)}.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero(self.dim);
        for (&(m, n), block) in &self.terms {
            out.terms.insert((-m, -n), block.adjoint());
        }
        out
    }

    /// Substitute k_y -> -k_y (sign flip on the n exponent).
    pub fn flip_ky(&self) -> Self {
        let mut out = Self::zero(self.dim);
        for (&(m, n), block) in &self.terms {
            out.terms.insert((m, -n), block.clone());
        }
        out
    }

    /// Block direct sum with `other`: dim grows to `self.dim + other.dim`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let d1 = self.dim;
        let d = d1 + other.dim;
        let mut out = Self::zero(d);
        for (&(m, n), block) in &self.terms {
            let mut padded = DMatrix::zeros(d, d);
            padded.view_mut((0, 0), (d1, d1)).copy_from(block);
            out.terms.insert((m, n), padded);
        }
        for (&(m, n), block) in &other.terms {
            let slot = out
                .terms
                .entry((m, n))
                .or_insert_with(|| DMatrix::zeros(d, d));
            slot.view_mut((d1, d1), (other.dim, other.dim)).copy_from(block);
        }
        out
    }

    /// Assemble a 2x2 block symbol from four equal-dimension symbols.
    pub fn from_blocks_2x2(
        a11: &Self,
        a12: &Self,
        a21: &Self,
        a22: &Self,
    ) -> Result<Self, SymbolError> {
        let d = a11.dim;
        for other in [a12, a21, a22] {
            if other.dim != d {
                return Err(SymbolError::DimensionMismatch {
                    left: d,
                    right: other.dim,
                });
            }
        }
        let mut out = Self::zero(2 * d);
        let blocks = [(a11, 0, 0), (a12, 0, d), (a21, d, 0), (a22, d, d)];
        for (sym, row, col) in blocks {
            for (&(m, n), block) in &sym.terms {
                let slot = out
                    .terms
                    .entry((m, n))
                    .or_insert_with(|| DMatrix::zeros(2 * d, 2 * d));
                slot.view_mut((row, col), (d, d)).copy_from(block);
            }
        }
        // Assembled from canonical inputs, so no slot can be all-zero.
        Ok(out)
    }

    /// Largest entry modulus over all coefficient blocks (0 for the zero
    /// symbol). This is the norm used for coefficient-level residuals.
    pub fn max_norm(&self) -> T {
        self.terms
            .values()
            .map(max_abs_entry)
            .fold(T::zero(), |acc, x| if x > acc { x } else { acc })
    }

    /// Max-norm of the coefficient difference `self - other`.
    /// Exactly zero iff the canonical forms agree bit for bit.
    pub fn coeff_distance(&self, other: &Self) -> Result<T, SymbolError> {
        Ok(self.sub(other)?.max_norm())
    }

    /// Collapse the k_x dependence at a fixed numeric k_x, leaving a symbol
    /// in k_y only: C'_n = sum_m C_{m,n} e^{i m k_x}.
    pub fn fix_kx(&self, k_x: T) -> Self {
        let mut out = Self::zero(self.dim);
        for (&(m, n), block) in &self.terms {
            let theta = T::from_int(m) * k_x;
            let phase = Complex::new(theta.cos(), theta.sin());
            out.add_term_assign(0, n, &(block * phase));
        }
        out
    }

    /// Collapse the k_y dependence at a fixed numeric k_y, leaving a symbol
    /// in k_x only: C'_m = sum_n C_{m,n} e^{i n k_y}.
    pub fn fix_ky(&self, k_y: T) -> Self {
        let mut out = Self::zero(self.dim);
        for (&(m, n), block) in &self.terms {
            let theta = T::from_int(n) * k_y;
            let phase = Complex::new(theta.cos(), theta.sin());
            out.add_term_assign(m, 0, &(block * phase));
        }
        out
    }

    /// Grid check of pointwise unitarity. The residual is the largest
    /// operator norm of U(k)U*(k) - 1 over a `grid` x `grid` torus grid.
    pub fn is_unitary(&self, grid: usize, tol: T) -> UnitaryCheck<T> {
        let grid = grid.max(1);
        let step = T::two_pi() / T::from_index(grid);
        let eye = DMatrix::<Complex<T>>::identity(self.dim, self.dim);
        let mut max_residual = T::zero();
        // Skip redundant sweeps for symbols constant in one variable.
        let nx = if self.x_degree() == 0 { 1 } else { grid };
        let ny = if self.y_degree() == 0 { 1 } else { grid };
        for ix in 0..nx {
            for iy in 0..ny {
                let k = TorusPoint::new(T::from_index(ix) * step, T::from_index(iy) * step);
                let u = self.eval(k);
                let r = &u * u.adjoint() - &eye;
                let nrm = op_norm(&r);
                if nrm > max_residual {
                    max_residual = nrm;
                }
            }
        }
        UnitaryCheck {
            unitary: max_residual <= tol,
            max_residual,
            grid,
            tol,
        }
    }

    /// Coefficient-level residual of Hermiticity, `max-norm(U - U*)`.
    pub fn hermitian_residual(&self) -> T {
        self.sub(&self.adjoint())
            .expect("same dimension")
            .max_norm()
    }
}

/// Outcome of a pointwise unitarity grid check.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct UnitaryCheck<T: Scalar> {
    pub unitary: bool,
    pub max_residual: T,
    pub grid: usize,
    pub tol: T,
}

/// Largest entry modulus of a dense matrix.
pub fn max_abs_entry<T: Scalar>(m: &DMatrix<Complex<T>>) -> T {
    m.iter()
        .map(|c| c.modulus())
        .fold(T::zero(), |acc, x| if x > acc { x } else { acc })
}

/// Singular values in ascending order.
pub fn singular_values_sorted<T: Scalar>(m: &DMatrix<Complex<T>>) -> Vec<T> {
    let svd = m.clone().svd(false, false);
    let mut v: Vec<T> = svd.singular_values.iter().copied().collect();
    v.sort_by(|a, b| a.partial_cmp(b).expect("singular values are finite"));
    v
}

/// Operator (spectral) norm: the largest singular value.
pub fn op_norm<T: Scalar>(m: &DMatrix<Complex<T>>) -> T {
    singular_values_sorted(m).last().copied().unwrap_or(T::zero())
}

/// Smallest singular value.
pub fn min_singular_value<T: Scalar>(m: &DMatrix<Complex<T>>) -> T {
    singular_values_sorted(m)
        .first()
        .copied()
        .unwrap_or(T::zero())
}

// --- serialization ---------------------------------------------------------
//
// Wire schema (JSON):
//   { "dim": d, "terms": [ { "m": int, "n": int,
//                            "re": [[..d x d..]], "im": [[..d x d..]] } ] }
// Terms are emitted in ascending (m, n) order; floats survive a JSON
// round-trip bit for bit for finite values.

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermRepr<T> {
    m: i64,
    n: i64,
    re: Vec<Vec<T>>,
    im: Vec<Vec<T>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SymbolRepr<T> {
    dim: usize,
    terms: Vec<TermRepr<T>>,
}

impl<T: Scalar + Serialize> Serialize for LaurentMatrix<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let terms = self
            .terms
            .iter()
            .map(|(&(m, n), block)| TermRepr {
                m,
                n,
                re: matrix_rows(block, |c| c.re),
                im: matrix_rows(block, |c| c.im),
            })
            .collect();
        SymbolRepr {
            dim: self.dim,
            terms,
        }
        .serialize(serializer)
    }
}

impl<'de, T: Scalar + Deserialize<'de>> Deserialize<'de> for LaurentMatrix<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = SymbolRepr::<T>::deserialize(deserializer)?;
        if repr.dim == 0 {
            return Err(D::Error::custom("symbol dimension must be positive"));
        }
        let mut out = LaurentMatrix::zero(repr.dim);
        for t in repr.terms {
            let block = matrix_from_rows(repr.dim, &t.re, &t.im)
                .map_err(|msg| D::Error::custom(format!("term ({}, {}): {msg}", t.m, t.n)))?;
            if out.terms.contains_key(&(t.m, t.n)) {
                return Err(D::Error::custom(format!(
                    "duplicate coefficient block at ({}, {})",
                    t.m, t.n
                )));
            }
            // Keep tiny user-supplied blocks (canonicalization applies to
            // arithmetic, not I/O), but never store an exact zero.
            if max_abs_entry(&block) > T::zero() {
                out.terms.insert((t.m, t.n), block);
            }
        }
        Ok(out)
    }
}

fn matrix_rows<T: Scalar>(m: &DMatrix<Complex<T>>, f: impl Fn(&Complex<T>) -> T) -> Vec<Vec<T>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| f(&m[(i, j)])).collect())
        .collect()
}

fn matrix_from_rows<T: Scalar>(
    dim: usize,
    re: &[Vec<T>],
    im: &[Vec<T>],
) -> Result<DMatrix<Complex<T>>, String> {
    if re.len() != dim || im.len() != dim {
        return Err(format!("expected {dim} rows"));
    }
    for rows in [re, im] {
        if rows.iter().any(|r| r.len() != dim) {
            return Err(format!("expected {dim} columns in every row"));
        }
    }
    Ok(DMatrix::from_fn(dim, dim, |i, j| {
        Complex::new(re[i][j], im[i][j])
    }))
}
