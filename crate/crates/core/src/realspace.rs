//! Real-space edge lattices: strip truncations of bulk models at a fixed
//! conserved momentum, finite dimerised chains, zero-mode counting, and the
//! executable bulk-edge comparison.
//!
//! Conventions. A coefficient `C_delta` of a one-variable block symbol is
//! the hopping amplitude from cell `j` into cell `j + delta`. Truncating to
//! cells `0..M-1` deletes every hopping that crosses either end, so a strip
//! has two boundaries: the physical edge it stands in for (cell 0 for the
//! upper half-plane, cell M-1 for the lower) and an artificial far end.
//! Modes hugging the far end are artifacts of the strip geometry and are
//! reported separately from the physical-edge count.
//!
//! Site layout is cell-major: cell `c` occupies scalar rows
//! `c*b .. (c+1)*b` where `b = 2d` is the block dimension; the first `d`
//! rows of each cell are the black sublattice (chiral grading +1), the last
//! `d` the brown sublattice (grading -1). With the off-diagonal bulk block
//! `U`, the strip matrix couples black cell `i` to brown cell `j` by the
//! coefficient `A_{i-j}` of the transverse profile of `U`, and is exactly
//! Hermitian and exactly anticommuting with the grading by construction.

use std::collections::BTreeMap;

use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex;
use serde::Serialize;

use crate::error::RealspaceError;
use crate::invariants::vertical_edge_integer_index;
use crate::models::{PgModel, SshModel, SshPreset};
use crate::scalar::Scalar;
use crate::symbol::LaurentMatrix;
use crate::toeplitz::{family_mod2_index, KERNEL_GAP_RATIO};

/// Squared projector eigenvalues must sit within this distance of 0 or 1
/// when the zero space is split by sublattice or by strip end.
const SPLIT_GUARD: f64 = 1e-6;

/// Cell amplitudes below this floor are treated as numerically zero in
/// exponential-decay fits.
const AMPLITUDE_FLOOR: f64 = 1e-13;

/// Which edge a strip approximates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EdgeKind {
    /// Truncation transverse to y: the edge runs along the glide axis and
    /// k_x is the conserved momentum.
    Glide,
    /// Truncation transverse to x: a vertical edge with k_y conserved.
    Vertical,
    /// A finite one-dimensional chain (no conserved momentum).
    Chain,
}

/// Which half-space the strip stands in for. `Upper` is the half-space of
/// non-negative cells, with the physical edge at cell 0; `Lower` is the
/// half-space of negative cells, listed in increasing order so its physical
/// edge sits at cell M-1. The two share the same matrix; only the
/// interpretation of the ends differs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    Upper,
    Lower,
}

/// Chiral grading label of a site: `Black` spans the first half of each
/// cell block (grading +1), `Brown` the second half (grading -1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sublattice {
    Black,
    Brown,
}

/// (cell, sublattice, intra-cell index) of one scalar row of the lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SiteLabel {
    pub cell: usize,
    pub sublattice: Sublattice,
    pub intra: usize,
}

/// A dense Hermitian strip Hamiltonian at fixed conserved momentum, with
/// the metadata needed to interpret its zero modes.
#[derive(Clone, Debug)]
pub struct EdgeLattice<T: Scalar> {
    kind: EdgeKind,
    side: Side,
    momentum: T,
    cells: usize,
    block_dim: usize,
    matrix: DMatrix<Complex<T>>,
    label: String,
}

impl<T: Scalar> EdgeLattice<T> {
    fn from_profile(
        kind: EdgeKind,
        side: Side,
        momentum: T,
        cells: usize,
        profile: &BTreeMap<i64, DMatrix<Complex<T>>>,
        half: usize,
        label: String,
        tol: T,
    ) -> Result<Self, RealspaceError> {
        let matrix = assemble_strip(profile, half, cells);
        let lat = Self {
            kind,
            side,
            momentum,
            cells,
            block_dim: 2 * half,
            matrix,
            label,
        };
        let residual = lat.hermitian_residual();
        if residual > tol {
            return Err(RealspaceError::NotHermitian {
                residual: residual.as_f64(),
            });
        }
        Ok(lat)
    }

    pub fn kind(&self) -> EdgeKind {
        self.kind
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn momentum(&self) -> T {
        self.momentum
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    /// Sites per cell (2d: d black + d brown).
    pub fn block_dim(&self) -> usize {
        self.block_dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn matrix(&self) -> &DMatrix<Complex<T>> {
        &self.matrix
    }

    /// The same matrix reinterpreted as the opposite half-space truncation,
    /// moving the physical edge to the other strip end. (The two
    /// half-space truncations of a translation-invariant bulk are literally
    /// the same matrix after relabelling cells, which is why they share a
    /// spectrum: the strip is glide-balanced.)
    pub fn twin(&self) -> Self {
        let mut out = self.clone();
        out.side = match self.side {
            Side::Upper => Side::Lower,
            Side::Lower => Side::Upper,
        };
        out
    }

    /// (cell, sublattice, intra-cell index) for every scalar row.
    pub fn site_labels(&self) -> Vec<SiteLabel> {
        let half = self.block_dim / 2;
        (0..self.cells * self.block_dim)
            .map(|r| {
                let cell = r / self.block_dim;
                let off = r % self.block_dim;
                if off < half {
                    SiteLabel {
                        cell,
                        sublattice: Sublattice::Black,
                        intra: off,
                    }
                } else {
                    SiteLabel {
                        cell,
                        sublattice: Sublattice::Brown,
                        intra: off - half,
                    }
                }
            })
            .collect()
    }

    /// Max-abs of H - H*; exactly zero for lattices built here.
    pub fn hermitian_residual(&self) -> T {
        let diff = &self.matrix - self.matrix.adjoint();
        diff.iter()
            .map(|z| z.modulus())
            .fold(T::zero(), |acc, x| if x > acc { x } else { acc })
    }

    /// Max-abs of S H + H S for the sublattice grading S; exactly zero for
    /// lattices built here (every coupling is black-brown).
    pub fn grading_residual(&self) -> T {
        let signs = self.grading_signs();
        let mut max = T::zero();
        for (i, row_sign) in signs.iter().enumerate() {
            for (j, col_sign) in signs.iter().enumerate() {
                if row_sign == col_sign {
                    let v = self.matrix[(i, j)].modulus();
                    if v > max {
                        max = v;
                    }
                }
            }
        }
        max
    }

    /// +1 for black rows, -1 for brown rows.
    pub fn grading_signs(&self) -> Vec<i8> {
        self.site_labels()
            .iter()
            .map(|s| match s.sublattice {
                Sublattice::Black => 1,
                Sublattice::Brown => -1,
            })
            .collect()
    }

    /// Largest |i - j| over nonzero entries.
    pub fn bandwidth(&self) -> usize {
        let mut band = 0usize;
        for i in 0..self.matrix.nrows() {
            for j in 0..self.matrix.ncols() {
                if self.matrix[(i, j)].modulus() > T::zero() {
                    band = band.max(i.abs_diff(j));
                }
            }
        }
        band
    }

    /// All eigenvalues, sorted ascending. Chiral symmetry makes the
    /// spectrum symmetric about zero.
    pub fn spectrum(&self) -> Vec<T> {
        let eig = self.matrix.clone().symmetric_eigen();
        let mut ev: Vec<T> = eig.eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
        ev
    }

    /// Distance of cell `c` from the physical edge of this lattice.
    fn edge_distance(&self, cell: usize, far: bool) -> usize {
        let from_start = matches!(
            (self.side, far),
            (Side::Upper, false) | (Side::Lower, true)
        );
        if from_start {
            cell
        } else {
            self.cells - 1 - cell
        }
    }

    /// Row mask selecting one sublattice.
    fn sublattice_mask(&self, s: Sublattice) -> Vec<bool> {
        self.site_labels().iter().map(|l| l.sublattice == s).collect()
    }

    /// Row mask selecting cells within the near half of the strip, measured
    /// from the physical edge.
    fn near_mask(&self) -> Vec<bool> {
        self.site_labels()
            .iter()
            .map(|l| 2 * self.edge_distance(l.cell, false) < self.cells)
            .collect()
    }
}

/// Dense strip matrix over `cells` cells from a one-variable block profile
/// of the off-diagonal bulk block: black cell i couples to brown cell j by
/// `A_{i-j}`, the mirror block is its adjoint, and hoppings leaving the
/// strip are dropped.
fn assemble_strip<T: Scalar>(
    profile: &BTreeMap<i64, DMatrix<Complex<T>>>,
    half: usize,
    cells: usize,
) -> DMatrix<Complex<T>> {
    let b = 2 * half;
    let mut h = DMatrix::<Complex<T>>::zeros(cells * b, cells * b);
    for i in 0..cells {
        for (&delta, block) in profile {
            let j = i as i64 - delta;
            if j < 0 || j >= cells as i64 {
                continue;
            }
            let j = j as usize;
            h.view_mut((i * b, j * b + half), (half, half)).copy_from(block);
            h.view_mut((j * b + half, i * b), (half, half))
                .copy_from(&block.adjoint());
        }
    }
    h
}

/// One-variable coefficient profile of `u` transverse to the edge: a glide
/// edge conserves k_x and lists y-offsets, a vertical edge (or chain)
/// conserves k_y and lists x-offsets.
fn transverse_profile<T: Scalar>(
    u: &LaurentMatrix<T>,
    kind: EdgeKind,
    momentum: T,
) -> BTreeMap<i64, DMatrix<Complex<T>>> {
    match kind {
        EdgeKind::Glide => u
            .fix_kx(momentum)
            .terms()
            .map(|(&(_, n), b)| (n, b.clone()))
            .collect(),
        EdgeKind::Vertical | EdgeKind::Chain => u
            .fix_ky(momentum)
            .terms()
            .map(|(&(m, _), b)| (m, b.clone()))
            .collect(),
    }
}

/// Upper half-plane truncation of a bulk model along the glide-axis edge at
/// fixed k_x, on `cells` complete unit cells (hoppings across either strip
/// end deleted). The lower half-plane twin is [`EdgeLattice::twin`].
/// Requires `cells > 4 * y_degree(U)` (and at least 4 cells) so the two
/// strip ends cannot talk to each other through the band.
pub fn build_glide_edge<T: Scalar>(
    m: &PgModel<T>,
    k_x: T,
    cells: usize,
    tol: T,
) -> Result<EdgeLattice<T>, RealspaceError> {
    let required = (4 * m.u().y_degree() + 1).max(4);
    if cells < required {
        return Err(RealspaceError::TooFewCells { cells, required });
    }
    let profile = transverse_profile(m.u(), EdgeKind::Glide, k_x);
    EdgeLattice::from_profile(
        EdgeKind::Glide,
        Side::Upper,
        k_x,
        cells,
        &profile,
        m.dim(),
        format!("{}-glide-edge", m.label()),
        tol,
    )
}

/// Right half-plane truncation of a bulk model at a vertical edge, at fixed
/// k_y on `cells` complete unit cells. Requires
/// `cells > 4 * x_degree(U)` (and at least 4 cells).
pub fn build_vertical_edge<T: Scalar>(
    m: &PgModel<T>,
    k_y: T,
    cells: usize,
    tol: T,
) -> Result<EdgeLattice<T>, RealspaceError> {
    let required = (4 * m.u().x_degree() + 1).max(4);
    if cells < required {
        return Err(RealspaceError::TooFewCells { cells, required });
    }
    let profile = transverse_profile(m.u(), EdgeKind::Vertical, k_y);
    EdgeLattice::from_profile(
        EdgeKind::Vertical,
        Side::Upper,
        k_y,
        cells,
        &profile,
        m.dim(),
        format!("{}-vertical-edge", m.label()),
        tol,
    )
}

/// The dimerised chain scenarios on a half-line of complete unit cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SshPattern {
    /// Intra-cell pairing; a perfect ±1 spectrum with no zero modes.
    Blue,
    /// Forward dimerisation; leaves one dangling A-site at cell 0.
    Red,
    /// Backward dimerisation; leaves one dangling B-site at cell 0.
    Green,
    /// The direct sum of the red and green chains, whose two dangling
    /// modes at cell 0 can be paired by a boundary bond.
    RedPlusGreen,
}

impl SshPattern {
    pub const ALL: [SshPattern; 4] = [
        SshPattern::Blue,
        SshPattern::Red,
        SshPattern::Green,
        SshPattern::RedPlusGreen,
    ];

    pub fn label(self) -> &'static str {
        match self {
            SshPattern::Blue => "blue",
            SshPattern::Red => "red",
            SshPattern::Green => "green",
            SshPattern::RedPlusGreen => "red_plus_green",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "blue" => Some(SshPattern::Blue),
            "red" => Some(SshPattern::Red),
            "green" => Some(SshPattern::Green),
            "red_plus_green" | "red+green" => Some(SshPattern::RedPlusGreen),
            _ => None,
        }
    }
}

/// A finite dimerised chain of `cells` complete unit cells. For the
/// `red_plus_green` pattern a Hermitian boundary bond of amplitude
/// `boundary_coupling` joins the dangling A-site of the red chain to the
/// dangling B-site of the green chain at cell 0; the pair it forms has
/// spectrum exactly ±|a|. Other patterns accept only a zero coupling.
pub fn ssh_chain<T: Scalar>(
    pattern: SshPattern,
    cells: usize,
    boundary_coupling: Complex<T>,
) -> Result<EdgeLattice<T>, RealspaceError> {
    if cells < 4 {
        return Err(RealspaceError::TooFewCells { cells, required: 4 });
    }
    let a = boundary_coupling;
    let nonzero = a.norm_sqr() > T::zero();
    if nonzero && pattern != SshPattern::RedPlusGreen {
        return Err(RealspaceError::UnsupportedBoundaryCoupling {
            pattern: pattern.label(),
        });
    }
    let u: LaurentMatrix<T> = match pattern {
        SshPattern::Blue => SshModel::preset(SshPreset::Blue).u().clone(),
        SshPattern::Red => SshModel::preset(SshPreset::Red).u().clone(),
        SshPattern::Green => SshModel::preset(SshPreset::Green).u().clone(),
        SshPattern::RedPlusGreen => SshModel::preset(SshPreset::Red)
            .u()
            .direct_sum(SshModel::preset(SshPreset::Green).u()),
    };
    let profile = transverse_profile(&u, EdgeKind::Chain, T::zero());
    let mut lat = EdgeLattice::from_profile(
        EdgeKind::Chain,
        Side::Upper,
        T::zero(),
        cells,
        &profile,
        u.dim(),
        format!("ssh-{}", pattern.label()),
        T::zero(),
    )?;
    if pattern == SshPattern::RedPlusGreen {
        // Black intra 0 is the red A-site, brown intra 1 the green B-site;
        // both dangle at cell 0 and close into an exact 2x2 pair.
        let half = lat.block_dim / 2;
        let (row_a, row_b) = (0, half + 1);
        lat.matrix[(row_a, row_b)] = a;
        lat.matrix[(row_b, row_a)] = a.conj();
    }
    Ok(lat)
}

/// One zero mode after disentangling the degenerate zero space by
/// sublattice and strip end.
#[derive(Clone, Debug, Serialize)]
pub struct ZeroMode<T: Scalar> {
    pub sublattice: Sublattice,
    /// True when the mode hugs the artificial far end of the strip rather
    /// than the physical edge.
    pub far: bool,
    /// Inverse decay rate in cells from its end; 0 for a mode supported on
    /// a single cell.
    pub localization: T,
    /// Total weight on the black sublattice (brown weight is 1 minus this).
    pub black_weight: T,
    /// Norm of the mode on each cell block, indexed by absolute cell.
    pub amplitudes: Vec<T>,
}

/// Zero-mode census of a strip. `count` is the number of modes localized
/// at the physical edge that pass the exponential-decay fit; far-end
/// artifacts and fit failures are listed but never counted.
#[derive(Clone, Debug, Serialize)]
pub struct ZeroModeReport<T: Scalar> {
    pub count: usize,
    pub far_count: usize,
    /// All eigenvalues with |E| < tol, sorted ascending.
    pub energies: Vec<T>,
    /// Disentangled modes at the physical edge.
    pub modes: Vec<ZeroMode<T>>,
    /// Disentangled modes at the artificial far end.
    pub far_modes: Vec<ZeroMode<T>>,
    /// Modes failing the decay fit (localization ≥ cells/4 or growing).
    pub flagged: Vec<ZeroMode<T>>,
    pub tol: T,
    pub cells: usize,
    pub side: Side,
}

impl<T: Scalar> ZeroModeReport<T> {
    /// Physical-edge count restricted to one sublattice.
    pub fn count_by(&self, s: Sublattice) -> usize {
        self.modes.iter().filter(|m| m.sublattice == s).count()
    }

    /// Far-end count restricted to one sublattice.
    pub fn far_count_by(&self, s: Sublattice) -> usize {
        self.far_modes.iter().filter(|m| m.sublattice == s).count()
    }
}

/// Indices of eigenvalues with |E| < tol, guarded: the largest |E| kept
/// must be separated from the smallest |E| discarded by the shared
/// gap-ratio policy.
fn select_zero_indices<T: Scalar>(evals: &[T], tol: T) -> Result<Vec<usize>, RealspaceError> {
    let mut selected = Vec::new();
    let mut max_below = T::zero();
    let mut min_above: Option<T> = None;
    for (i, e) in evals.iter().enumerate() {
        let a = e.abs();
        if a < tol {
            selected.push(i);
            if a > max_below {
                max_below = a;
            }
        } else if min_above.map_or(true, |m| a < m) {
            min_above = Some(a);
        }
    }
    if let (false, Some(above)) = (selected.is_empty(), min_above) {
        let ratio = max_below / above;
        if ratio >= T::lit(KERNEL_GAP_RATIO) {
            return Err(RealspaceError::AmbiguousZeroSpace {
                below: max_below.as_f64(),
                above: above.as_f64(),
                ratio: ratio.as_f64(),
            });
        }
    }
    Ok(selected)
}

fn collect_columns<T: Scalar>(m: &DMatrix<Complex<T>>, idx: &[usize]) -> DMatrix<Complex<T>> {
    let mut out = DMatrix::<Complex<T>>::zeros(m.nrows(), idx.len());
    for (c, &i) in idx.iter().enumerate() {
        out.set_column(c, &m.column(i));
    }
    out
}

/// Split the span of orthonormal columns `z` into the part supported on
/// the masked rows and the part supported on the complement. Every squared
/// singular value of the row-restricted family must land within
/// `SPLIT_GUARD` of 0 or 1, i.e. the principal angles must be sharp.
fn split_by_rows<T: Scalar>(
    z: &DMatrix<Complex<T>>,
    mask: &[bool],
    what: &'static str,
) -> Result<(DMatrix<Complex<T>>, DMatrix<Complex<T>>), RealspaceError> {
    let k = z.ncols();
    if k == 0 {
        return Ok((z.clone(), z.clone()));
    }
    let mut restricted = z.clone();
    for (r, keep) in mask.iter().enumerate() {
        if !keep {
            restricted
                .view_mut((r, 0), (1, k))
                .fill(Complex::new(T::zero(), T::zero()));
        }
    }
    let svd = restricted.svd(false, true);
    let vt = svd.v_t.expect("requested right singular vectors");
    let mut inside = Vec::new();
    let mut outside = Vec::new();
    for (i, s) in svd.singular_values.iter().enumerate() {
        let s2 = *s * *s;
        if s2 > T::one() - T::lit(SPLIT_GUARD) {
            inside.push(i);
        } else if s2 < T::lit(SPLIT_GUARD) {
            outside.push(i);
        } else {
            return Err(RealspaceError::AmbiguousSplit {
                what,
                value: s2.as_f64(),
            });
        }
    }
    // Rotate the family so each column aligns with one part of the split;
    // rotated columns keep their full support (tails included).
    let rotated = z * vt.adjoint();
    Ok((
        collect_columns(&rotated, &inside),
        collect_columns(&rotated, &outside),
    ))
}

/// Least-squares exponential-decay fit of a distance-ordered amplitude
/// profile over the near half of the strip. Returns the localization
/// length in cells (0 for a single-cell mode), or None when the profile
/// does not decay.
fn fit_decay<T: Scalar>(profile_by_distance: &[T]) -> Option<T> {
    let window = (profile_by_distance.len() / 2)
        .max(2)
        .min(profile_by_distance.len());
    let pts: Vec<(T, T)> = profile_by_distance[..window]
        .iter()
        .enumerate()
        .filter(|(_, a)| **a > T::lit(AMPLITUDE_FLOOR))
        .map(|(i, a)| (T::from_index(i), a.ln()))
        .collect();
    match pts.len() {
        0 => None,
        1 => Some(T::zero()),
        n => {
            let nt = T::from_index(n);
            let sx = pts.iter().fold(T::zero(), |acc, p| acc + p.0);
            let sy = pts.iter().fold(T::zero(), |acc, p| acc + p.1);
            let sxx = pts.iter().fold(T::zero(), |acc, p| acc + p.0 * p.0);
            let sxy = pts.iter().fold(T::zero(), |acc, p| acc + p.0 * p.1);
            let denom = nt * sxx - sx * sx;
            let slope = (nt * sxy - sx * sy) / denom;
            if slope < T::zero() {
                Some(-T::one() / slope)
            } else {
                None
            }
        }
    }
}

/// Diagonalize a strip, pick out the zero space, and disentangle it into
/// per-sublattice, per-end modes with localization fits. The kernel of a
/// chiral Hamiltonian is grading-invariant, so the split by sublattice is
/// exact; a failure of either split is reported, never guessed through.
pub fn zero_modes<T: Scalar>(
    lat: &EdgeLattice<T>,
    tol: T,
) -> Result<ZeroModeReport<T>, RealspaceError> {
    let eig = lat.matrix.clone().symmetric_eigen();
    let evals: Vec<T> = eig.eigenvalues.iter().copied().collect();
    let zero_idx = select_zero_indices(&evals, tol)?;
    let mut energies: Vec<T> = zero_idx.iter().map(|&i| evals[i]).collect();
    energies.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    let mut report = ZeroModeReport {
        count: 0,
        far_count: 0,
        energies,
        modes: Vec::new(),
        far_modes: Vec::new(),
        flagged: Vec::new(),
        tol,
        cells: lat.cells,
        side: lat.side,
    };
    if zero_idx.is_empty() {
        return Ok(report);
    }
    let z = collect_columns(&eig.eigenvectors, &zero_idx);
    let black_mask = lat.sublattice_mask(Sublattice::Black);
    let (black_fam, brown_fam) = split_by_rows(&z, &black_mask, "sublattice")?;
    let near_mask = lat.near_mask();
    for (sub, fam) in [
        (Sublattice::Black, black_fam),
        (Sublattice::Brown, brown_fam),
    ] {
        if fam.ncols() == 0 {
            continue;
        }
        let (near_fam, far_fam) = split_by_rows(&fam, &near_mask, "edge side")?;
        for (fam, far) in [(near_fam, false), (far_fam, true)] {
            for c in 0..fam.ncols() {
                let v = fam.column(c);
                let b = lat.block_dim;
                let amplitudes: Vec<T> = (0..lat.cells)
                    .map(|cell| v.rows(cell * b, b).norm())
                    .collect();
                let black_weight = v
                    .iter()
                    .zip(black_mask.iter())
                    .filter(|(_, keep)| **keep)
                    .fold(T::zero(), |acc, (z, _)| acc + z.norm_sqr());
                let by_distance: Vec<T> = (0..lat.cells)
                    .map(|d| {
                        let from_start = matches!(
                            (lat.side, far),
                            (Side::Upper, false) | (Side::Lower, true)
                        );
                        if from_start {
                            amplitudes[d]
                        } else {
                            amplitudes[lat.cells - 1 - d]
                        }
                    })
                    .collect();
                let fit = fit_decay(&by_distance);
                let quarter = T::from_index(lat.cells) / T::lit(4.0);
                let mode = ZeroMode {
                    sublattice: sub,
                    far,
                    localization: fit.unwrap_or_else(T::zero),
                    black_weight,
                    amplitudes,
                };
                match fit {
                    Some(len) if len < quarter => {
                        if far {
                            report.far_modes.push(mode);
                        } else {
                            report.modes.push(mode);
                        }
                    }
                    _ => report.flagged.push(mode),
                }
            }
        }
    }
    report.count = report.modes.len();
    report.far_count = report.far_modes.len();
    Ok(report)
}

/// Real-space and analytic edge counts at one momentum.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CorrespondencePoint<T: Scalar> {
    pub momentum: T,
    pub upper_black: usize,
    pub upper_brown: usize,
    pub lower_black: usize,
    pub lower_brown: usize,
    pub expected_upper_black: usize,
    pub expected_upper_brown: usize,
    pub expected_lower_black: usize,
    pub expected_lower_brown: usize,
    pub agree: bool,
}

/// Executable statement of the bulk-edge correspondence: per-sublattice
/// physical-edge zero counts of both half-space truncations against the
/// analytic prediction. For a glide edge the prediction at each k_x is the
/// stabilized kernel dimension of the half-space compression of U on each
/// side (whose common parity is the family mod-2 index); for a vertical
/// edge it is the transverse winding number w, landing w modes on the black
/// sublattice of one edge and on the brown sublattice of the other.
#[derive(Clone, Debug, Serialize)]
pub struct CorrespondenceReport<T: Scalar> {
    pub label: String,
    pub kind: EdgeKind,
    pub cells: usize,
    pub cutoff: usize,
    pub tol: T,
    pub points: Vec<CorrespondencePoint<T>>,
    /// Family kernel parity (glide edges only).
    pub analytic_mod2: Option<u8>,
    /// Transverse winding number (vertical edges only).
    pub analytic_index: Option<i64>,
    pub agree: bool,
}

/// Run both sides of the bulk-edge correspondence for a gapped model over
/// a momentum grid and compare. `cells` sizes the strips, `cutoff` the
/// Toeplitz sections (unused for vertical edges).
pub fn correspondence_check<T: Scalar>(
    m: &PgModel<T>,
    edge: EdgeKind,
    grid: usize,
    cells: usize,
    cutoff: usize,
    tol: T,
) -> Result<CorrespondenceReport<T>, RealspaceError> {
    m.certify_gap(64)?;
    let grid = grid.max(1);
    match edge {
        EdgeKind::Chain => Err(RealspaceError::ChainHasNoBulk),
        EdgeKind::Glide => {
            let analytic = family_mod2_index(m, grid, cutoff, tol)?;
            let mut points = Vec::with_capacity(grid);
            let mut agree = true;
            for (i, &k_x) in analytic.kx_grid.iter().enumerate() {
                let upper = build_glide_edge(m, k_x, cells, tol)?;
                let lower = upper.twin();
                let zu = zero_modes(&upper, tol)?;
                let zl = zero_modes(&lower, tol)?;
                let p = point(
                    k_x,
                    &zu,
                    &zl,
                    (analytic.dims_upper[i], analytic.dims_upper[i]),
                    (analytic.dims_lower[i], analytic.dims_lower[i]),
                );
                agree &= p.agree;
                points.push(p);
            }
            Ok(CorrespondenceReport {
                label: m.label().to_string(),
                kind: edge,
                cells,
                cutoff,
                tol,
                points,
                analytic_mod2: Some(analytic.mod2),
                analytic_index: None,
                agree,
            })
        }
        EdgeKind::Vertical => {
            let w = vertical_edge_integer_index(m)?;
            let wp = w.max(0) as usize;
            let wm = (-w).max(0) as usize;
            let step = T::two_pi() / T::from_index(grid);
            let mut points = Vec::with_capacity(grid);
            let mut agree = true;
            for i in 0..grid {
                let k_y = T::from_index(i) * step;
                let upper = build_vertical_edge(m, k_y, cells, tol)?;
                let lower = upper.twin();
                let zu = zero_modes(&upper, tol)?;
                let zl = zero_modes(&lower, tol)?;
                let p = point(k_y, &zu, &zl, (wp, wm), (wm, wp));
                agree &= p.agree;
                points.push(p);
            }
            Ok(CorrespondenceReport {
                label: m.label().to_string(),
                kind: edge,
                cells,
                cutoff,
                tol,
                points,
                analytic_mod2: None,
                analytic_index: Some(w),
                agree,
            })
        }
    }
}

fn point<T: Scalar>(
    momentum: T,
    upper: &ZeroModeReport<T>,
    lower: &ZeroModeReport<T>,
    expected_upper: (usize, usize),
    expected_lower: (usize, usize),
) -> CorrespondencePoint<T> {
    let p = CorrespondencePoint {
        momentum,
        upper_black: upper.count_by(Sublattice::Black),
        upper_brown: upper.count_by(Sublattice::Brown),
        lower_black: lower.count_by(Sublattice::Black),
        lower_brown: lower.count_by(Sublattice::Brown),
        expected_upper_black: expected_upper.0,
        expected_upper_brown: expected_upper.1,
        expected_lower_black: expected_lower.0,
        expected_lower_brown: expected_lower.1,
        agree: false,
    };
    CorrespondencePoint {
        agree: p.upper_black == p.expected_upper_black
            && p.upper_brown == p.expected_upper_brown
            && p.lower_black == p.expected_lower_black
            && p.lower_brown == p.expected_lower_brown,
        ..p
    }
}
