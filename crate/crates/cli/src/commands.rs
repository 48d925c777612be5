//! Subcommand implementations. Every command is a pure function of its
//! validated inputs and produces a deterministic report string: a versioned
//! JSON envelope or a CSV table. All tolerances, grids, and cutoffs that
//! enter a computation are echoed in the report.

use serde::Serialize;

use glidetop::accept::{run_all, CriterionOutcome, CRITERION_COUNT};
use glidetop::error::{
    HomotopyError, InvariantError, RealspaceError, ToeplitzError,
};
use glidetop::homotopy::{
    double_up_path, rotation_path, verify_path, PathChecks, PathReport, PATH_COMPAT_TOL,
    PATH_ENDPOINT_TOL, PATH_GAP_BOUND, PATH_MAX_STEP, PATH_UNITARY_TOL,
};
use glidetop::invariants::{
    mod2_mu, vertical_edge_integer_index, winding_det, Axis, Mod2Report, WindingSpec,
};
use glidetop::models::{
    gap_certificate, random_gapped_perturbation, CompatibilityReport, DimerPreset, GapCertificate,
    PgModel,
};
use glidetop::realspace::{
    build_glide_edge, correspondence_check, ssh_chain, zero_modes, CorrespondenceReport, EdgeKind,
    SshPattern, ZeroModeReport,
};
use glidetop::report::{envelope, kernel_dims_csv, spectrum_csv, to_json_string};
use glidetop::symbol::UnitaryCheck;
use glidetop::toeplitz::{
    family_mod2_index, fredholm_index, karoubi_check, KaroubiReport, KernelReport,
};
use glidetop::{C64, EdgeSymbol64, PgModel64};

use crate::config::LoadedModel;
use crate::{Failure, Format};

/// Amplitude of the glide-compatible perturbation applied when --seed is
/// given: large enough to be visible, small enough to provably keep the
/// presets gapped.
pub const SEED_PERTURBATION_AMPLITUDE: f64 = 0.1;

/// Grid used for spectral-gap certificates in reports.
const GAP_GRID: usize = 64;

/// Residual bound for deciding whether a symbol is unitary-valued.
const UNITARY_TOL: f64 = 1e-10;

/// Sample counts for the local mod-2 invariant: start at the documented
/// default and double on unwrapping failures up to the hard cap.
const MU_SAMPLES_START: usize = 512;
const MU_SAMPLES_CAP: usize = 1 << 14;

// ---------------------------------------------------------------------------
// Error classification: knob violations exit 2, computations that fail on
// valid inputs exit 1.
// ---------------------------------------------------------------------------

fn toeplitz_failure(e: ToeplitzError) -> Failure {
    match e {
        ToeplitzError::CutoffTooSmall { .. } => Failure::Config(e.to_string()),
        other => Failure::Compute(other.to_string()),
    }
}

fn realspace_failure(e: RealspaceError) -> Failure {
    match e {
        RealspaceError::TooFewCells { .. }
        | RealspaceError::UnsupportedBoundaryCoupling { .. }
        | RealspaceError::ChainHasNoBulk => Failure::Config(e.to_string()),
        RealspaceError::Toeplitz(t) => toeplitz_failure(t),
        other => Failure::Compute(other.to_string()),
    }
}

fn homotopy_failure(e: HomotopyError) -> Failure {
    match e {
        HomotopyError::TooFewSamples { .. } | HomotopyError::EvenSampleCount { .. } => {
            Failure::Config(e.to_string())
        }
        other => Failure::Compute(other.to_string()),
    }
}

fn compute<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Compute(e.to_string())
}

fn render<P: Serialize, D: Serialize>(command: &str, params: P, data: D) -> Result<String, Failure> {
    to_json_string(&envelope(command, params, data)).map_err(Failure::Compute)
}

/// Replace a pg model by its seeded glide-compatible perturbation when a
/// seed is given; other model kinds cannot be perturbed this way.
pub fn apply_seed(
    model: LoadedModel,
    seed: Option<u64>,
) -> Result<(LoadedModel, Option<f64>), Failure> {
    match (model, seed) {
        (m, None) => Ok((m, None)),
        (LoadedModel::Pg(m), Some(s)) => {
            let perturbed = random_gapped_perturbation(&m, SEED_PERTURBATION_AMPLITUDE, s)
                .map_err(compute)?;
            Ok((LoadedModel::Pg(perturbed), Some(SEED_PERTURBATION_AMPLITUDE)))
        }
        (m, Some(_)) => Err(Failure::Config(format!(
            "--seed applies a glide-compatible bulk perturbation and needs a pg model, \
             not a {} model",
            m.kind()
        ))),
    }
}

// ---------------------------------------------------------------------------
// invariants
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct WindingEntry {
    axis: &'static str,
    fixed: f64,
    samples: usize,
    value: i64,
}

fn winding_entry(
    l: &glidetop::LaurentMatrix64,
    axis: Axis,
    fixed: f64,
) -> Result<WindingEntry, Failure> {
    let spec = WindingSpec::auto(axis, fixed, l);
    let value = winding_det(l, &spec).map_err(compute)?;
    Ok(WindingEntry {
        axis: match axis {
            Axis::X => "x",
            Axis::Y => "y",
        },
        fixed,
        samples: spec.samples,
        value,
    })
}

/// mod2_mu with sample-doubling escalation, surfacing a hard failure when
/// the cap is reached.
fn resolved_mu(e: &EdgeSymbol64) -> Result<Mod2Report<f64>, Failure> {
    let mut samples = MU_SAMPLES_START;
    loop {
        match mod2_mu(e, samples) {
            Ok(rep) => return Ok(rep),
            Err(InvariantError::UnwrapFailure { .. }) if samples < MU_SAMPLES_CAP => samples *= 2,
            Err(err) => return Err(compute(err)),
        }
    }
}

#[derive(Serialize)]
struct PgInvariantsParams<'a> {
    model: String,
    source: &'a str,
    grid: usize,
    cutoff: usize,
    tol: f64,
    gap_grid: usize,
    seed: Option<u64>,
    perturbation_amplitude: Option<f64>,
    format: &'static str,
}

#[derive(Serialize)]
struct PgInvariantsData {
    compatibility: CompatibilityReport<f64>,
    gap: GapCertificate<f64>,
    winding_x_at_ky0: WindingEntry,
    winding_y_at_kx0: WindingEntry,
    vertical_index: i64,
    mod2: u8,
    family: KernelReport<f64>,
}

#[derive(Serialize)]
struct ChainInvariantsParams<'a> {
    model: String,
    source: &'a str,
    gap_grid: usize,
    format: &'static str,
}

#[derive(Serialize)]
struct ChainInvariantsData {
    winding: WindingEntry,
    gap: GapCertificate<f64>,
    predicted_edge_modes: u64,
}

#[derive(Serialize)]
struct EdgeInvariantsParams<'a> {
    source: &'a str,
    samples_start: usize,
    samples_cap: usize,
    format: &'static str,
}

#[derive(Serialize)]
struct EdgeInvariantsData {
    mod2: u8,
    report: Mod2Report<f64>,
}

pub struct InvariantsInputs<'a> {
    pub model: LoadedModel,
    pub source: &'a str,
    pub grid: usize,
    pub cutoff: usize,
    pub tol: f64,
    pub seed: Option<u64>,
    pub format: Format,
}

pub fn invariants(inputs: InvariantsInputs<'_>) -> Result<String, Failure> {
    let (model, amplitude) = apply_seed(inputs.model, inputs.seed)?;
    match model {
        LoadedModel::Pg(m) => {
            let family =
                family_mod2_index(&m, inputs.grid, inputs.cutoff, inputs.tol)
                    .map_err(toeplitz_failure)?;
            if inputs.format == Format::Csv {
                return Ok(kernel_dims_csv(
                    &family.kx_grid,
                    &family.dims_upper,
                    &family.dims_lower,
                ));
            }
            let data = PgInvariantsData {
                compatibility: m.compatibility(),
                gap: gap_certificate(m.u(), GAP_GRID),
                winding_x_at_ky0: winding_entry(m.u(), Axis::X, 0.0)?,
                winding_y_at_kx0: winding_entry(m.u(), Axis::Y, 0.0)?,
                vertical_index: vertical_edge_integer_index(&m).map_err(compute)?,
                mod2: family.mod2,
                family,
            };
            render(
                "invariants",
                PgInvariantsParams {
                    model: m.label().to_string(),
                    source: inputs.source,
                    grid: inputs.grid,
                    cutoff: inputs.cutoff,
                    tol: inputs.tol,
                    gap_grid: GAP_GRID,
                    seed: inputs.seed,
                    perturbation_amplitude: amplitude,
                    format: inputs.format.name(),
                },
                data,
            )
        }
        LoadedModel::Ssh(m) => {
            if inputs.format == Format::Csv {
                return Err(Failure::Config(
                    "csv output for `invariants` is available for pg and edge models only"
                        .to_string(),
                ));
            }
            let winding = winding_entry(m.u(), Axis::X, 0.0)?;
            let data = ChainInvariantsData {
                predicted_edge_modes: winding.value.unsigned_abs(),
                winding,
                gap: gap_certificate(m.u(), GAP_GRID),
            };
            render(
                "invariants",
                ChainInvariantsParams {
                    model: m.label().to_string(),
                    source: inputs.source,
                    gap_grid: GAP_GRID,
                    format: inputs.format.name(),
                },
                data,
            )
        }
        LoadedModel::Edge(e) => {
            let report = resolved_mu(&e)?;
            if inputs.format == Format::Csv {
                return Ok(zeta_csv(&report));
            }
            render(
                "invariants",
                EdgeInvariantsParams {
                    source: inputs.source,
                    samples_start: MU_SAMPLES_START,
                    samples_cap: MU_SAMPLES_CAP,
                    format: inputs.format.name(),
                },
                EdgeInvariantsData {
                    mod2: report.mu,
                    report,
                },
            )
        }
    }
}

/// The sampled unit-circle trajectory of the local invariant, one row per
/// sample point.
fn zeta_csv(rep: &Mod2Report<f64>) -> String {
    let mut out = String::from("ell,zeta_re,zeta_im\n");
    let step = std::f64::consts::TAU / rep.samples as f64;
    for (j, z) in rep.zeta_samples.iter().enumerate() {
        out.push_str(&format!("{},{},{}\n", j as f64 * step, z.re, z.im));
    }
    out
}

// ---------------------------------------------------------------------------
// edge
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct EdgeParams<'a> {
    model: String,
    source: &'a str,
    grid: usize,
    cells: usize,
    cutoff: usize,
    tol: f64,
    seed: Option<u64>,
    perturbation_amplitude: Option<f64>,
    format: &'static str,
}

#[derive(Serialize)]
struct EdgeData {
    glide: CorrespondenceReport<f64>,
    vertical: CorrespondenceReport<f64>,
}

pub struct EdgeInputs<'a> {
    pub model: LoadedModel,
    pub source: &'a str,
    pub grid: usize,
    pub cells: usize,
    pub cutoff: usize,
    pub tol: f64,
    pub seed: Option<u64>,
    pub format: Format,
}

pub fn edge(inputs: EdgeInputs<'_>) -> Result<String, Failure> {
    let (model, amplitude) = apply_seed(inputs.model, inputs.seed)?;
    let m = match model {
        LoadedModel::Pg(m) => m,
        other => {
            return Err(Failure::Config(format!(
                "`edge` needs a pg bulk model, not a {} model; use `ssh` for chains",
                other.kind()
            )))
        }
    };
    let glide = correspondence_check(
        &m,
        EdgeKind::Glide,
        inputs.grid,
        inputs.cells,
        inputs.cutoff,
        inputs.tol,
    )
    .map_err(realspace_failure)?;
    if inputs.format == Format::Csv {
        // Strip spectra over the same momentum grid the checks used.
        let mut points = Vec::new();
        for p in &glide.points {
            let lat = build_glide_edge(&m, p.momentum, inputs.cells, inputs.tol)
                .map_err(realspace_failure)?;
            points.extend(lat.spectrum().into_iter().map(|e| (p.momentum, e)));
        }
        return Ok(spectrum_csv(&points));
    }
    let vertical = correspondence_check(
        &m,
        EdgeKind::Vertical,
        inputs.grid,
        inputs.cells,
        inputs.cutoff,
        inputs.tol,
    )
    .map_err(realspace_failure)?;
    render(
        "edge",
        EdgeParams {
            model: m.label().to_string(),
            source: inputs.source,
            grid: inputs.grid,
            cells: inputs.cells,
            cutoff: inputs.cutoff,
            tol: inputs.tol,
            seed: inputs.seed,
            perturbation_amplitude: amplitude,
            format: inputs.format.name(),
        },
        EdgeData { glide, vertical },
    )
}

// ---------------------------------------------------------------------------
// toeplitz
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct ToeplitzParams<'a> {
    model: String,
    source: &'a str,
    grid: usize,
    cutoff: usize,
    tol: f64,
    seed: Option<u64>,
    perturbation_amplitude: Option<f64>,
    format: &'static str,
}

#[derive(Serialize)]
struct ToeplitzData {
    family: KernelReport<f64>,
    /// Fredholm index of the plain half-space compression of U at each
    /// momentum of the family grid.
    fredholm_upper: Vec<i64>,
    /// The grading-pair identities are defined for unitary-valued symbols;
    /// gapped non-unitary models (e.g. seeded perturbations) skip them.
    unitary: UnitaryCheck<f64>,
    karoubi: Vec<KaroubiReport<f64>>,
}

pub struct ToeplitzInputs<'a> {
    pub model: LoadedModel,
    pub source: &'a str,
    pub grid: usize,
    pub cutoff: usize,
    pub tol: f64,
    pub seed: Option<u64>,
    pub format: Format,
}

pub fn toeplitz(inputs: ToeplitzInputs<'_>) -> Result<String, Failure> {
    let (model, amplitude) = apply_seed(inputs.model, inputs.seed)?;
    let m = match model {
        LoadedModel::Pg(m) => m,
        other => {
            return Err(Failure::Config(format!(
                "`toeplitz` needs a pg bulk model, not a {} model",
                other.kind()
            )))
        }
    };
    let family =
        family_mod2_index(&m, inputs.grid, inputs.cutoff, inputs.tol).map_err(toeplitz_failure)?;
    if inputs.format == Format::Csv {
        return Ok(kernel_dims_csv(
            &family.kx_grid,
            &family.dims_upper,
            &family.dims_lower,
        ));
    }
    let mut fredholm_upper = Vec::with_capacity(family.kx_grid.len());
    for &k_x in &family.kx_grid {
        fredholm_upper.push(
            fredholm_index(m.u(), k_x, inputs.cutoff, inputs.tol).map_err(toeplitz_failure)?,
        );
    }
    let unitary = m.u().is_unitary(GAP_GRID, UNITARY_TOL);
    let mut karoubi = Vec::new();
    if unitary.unitary {
        for &k_x in &family.kx_grid {
            karoubi.push(karoubi_check(&m, k_x, inputs.cutoff).map_err(toeplitz_failure)?);
        }
    }
    render(
        "toeplitz",
        ToeplitzParams {
            model: m.label().to_string(),
            source: inputs.source,
            grid: inputs.grid,
            cutoff: inputs.cutoff,
            tol: inputs.tol,
            seed: inputs.seed,
            perturbation_amplitude: amplitude,
            format: inputs.format.name(),
        },
        ToeplitzData {
            family,
            fredholm_upper,
            unitary,
            karoubi,
        },
    )
}

// ---------------------------------------------------------------------------
// homotopy
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct HomotopyParams {
    samples: usize,
    gap_bound: f64,
    max_step_bound: f64,
    compat_tol: f64,
    unitary_tol: f64,
    endpoint_tol: f64,
    format: &'static str,
}

#[derive(Serialize)]
struct HomotopyData {
    doubling: PathReport<f64>,
    rotation_red_green: PathReport<f64>,
}

pub fn homotopy(samples: usize, format: Format) -> Result<String, Failure> {
    if format == Format::Csv {
        return Err(Failure::Config(
            "`homotopy` emits json only; path reports are not tabular".to_string(),
        ));
    }
    let doubling_path = double_up_path::<f64>(samples).map_err(homotopy_failure)?;
    let doubling = verify_path(&doubling_path, PathChecks::all()).map_err(homotopy_failure)?;
    let red: PgModel64 = PgModel::dimer(DimerPreset::Red);
    let green: PgModel64 = PgModel::dimer(DimerPreset::Green);
    let rotation = rotation_path(red.u(), green.u(), samples).map_err(homotopy_failure)?;
    let rotation_red_green =
        verify_path(&rotation, PathChecks::all()).map_err(homotopy_failure)?;
    render(
        "homotopy",
        HomotopyParams {
            samples,
            gap_bound: PATH_GAP_BOUND,
            max_step_bound: PATH_MAX_STEP,
            compat_tol: PATH_COMPAT_TOL,
            unitary_tol: PATH_UNITARY_TOL,
            endpoint_tol: PATH_ENDPOINT_TOL,
            format: format.name(),
        },
        HomotopyData {
            doubling,
            rotation_red_green,
        },
    )
}

// ---------------------------------------------------------------------------
// ssh
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct SshParams {
    pattern: &'static str,
    boundary_coupling: f64,
    cells: usize,
    tol: f64,
    format: &'static str,
}

#[derive(Serialize)]
struct SshData {
    spectrum: Vec<f64>,
    zero: ZeroModeReport<f64>,
    /// Smallest positive eigenvalue (the top of the gap pair, if any).
    min_positive_level: Option<f64>,
    /// Largest negative eigenvalue (the bottom of the gap pair, if any).
    max_negative_level: Option<f64>,
}

pub fn ssh(
    pattern: &str,
    boundary_coupling: f64,
    cells: usize,
    tol: f64,
    format: Format,
) -> Result<String, Failure> {
    let pattern = SshPattern::parse(pattern).ok_or_else(|| {
        Failure::Config(format!(
            "unknown pattern {pattern:?}; valid patterns: {}",
            SshPattern::ALL
                .iter()
                .map(|p| p.label())
                .collect::<Vec<_>>()
                .join(", ")
        ))
    })?;
    let lat = ssh_chain::<f64>(pattern, cells, C64::new(boundary_coupling, 0.0))
        .map_err(realspace_failure)?;
    let spectrum = lat.spectrum();
    if format == Format::Csv {
        let mut out = String::from("index,eigenvalue\n");
        for (i, e) in spectrum.iter().enumerate() {
            out.push_str(&format!("{i},{e}\n"));
        }
        return Ok(out);
    }
    let zero = zero_modes(&lat, tol).map_err(realspace_failure)?;
    let min_positive_level = spectrum.iter().copied().filter(|&e| e > tol).reduce(f64::min);
    let max_negative_level = spectrum
        .iter()
        .copied()
        .filter(|&e| e < -tol)
        .reduce(f64::max);
    render(
        "ssh",
        SshParams {
            pattern: pattern.label(),
            boundary_coupling,
            cells,
            tol,
            format: format.name(),
        },
        SshData {
            spectrum,
            zero,
            min_positive_level,
            max_negative_level,
        },
    )
}

// ---------------------------------------------------------------------------
// accept
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct AcceptParams {
    criteria: u32,
}

/// Run the full acceptance battery: one line per criterion on stdout, the
/// structured outcomes optionally to a file. Returns the process exit code.
pub fn accept(out: Option<&std::path::Path>) -> Result<u8, Failure> {
    let outcomes: Vec<CriterionOutcome> = run_all();
    for o in &outcomes {
        println!("{}", o.line());
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    println!("passed {passed} of {CRITERION_COUNT} criteria");
    if let Some(path) = out {
        let text = render(
            "accept",
            AcceptParams {
                criteria: CRITERION_COUNT,
            },
            &outcomes,
        )?;
        std::fs::write(path, text)
            .map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(if passed as u32 == CRITERION_COUNT { 0 } else { 1 })
}
