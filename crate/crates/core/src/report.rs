//! Machine-readable output: a versioned JSON envelope shared by every
//! command, plus small CSV writers for the two plot-ready dumps (spectra and
//! zero-mode profiles).
//!
//! Everything here is deterministic: identical inputs produce byte-identical
//! output. Struct fields serialize in declaration order, floats print in
//! shortest round-trip form, and no timestamps or machine identifiers are
//! embedded.

use serde::Serialize;

use crate::scalar::Scalar;

/// Version stamp embedded in every JSON report as `"schema"`.
pub const SCHEMA_VERSION: u32 = 1;

/// The JSON envelope: schema stamp, the command that produced the data, the
/// parameters it ran with (tolerances, grids, cutoffs — auditability), and
/// the payload.
#[derive(Clone, Debug, Serialize)]
pub struct Envelope<P: Serialize, D: Serialize> {
    pub schema: u32,
    pub command: String,
    pub params: P,
    pub data: D,
}

/// Wrap a payload in the versioned envelope.
pub fn envelope<P: Serialize, D: Serialize>(
    command: impl Into<String>,
    params: P,
    data: D,
) -> Envelope<P, D> {
    Envelope {
        schema: SCHEMA_VERSION,
        command: command.into(),
        params,
        data,
    }
}

/// Serialize an envelope (or any report) as pretty JSON with a trailing
/// newline. Infallible for the report types in this crate (no maps with
/// non-string keys); errors surface only the serde message.
pub fn to_json_string<S: Serialize>(value: &S) -> Result<String, String> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| e.to_string())
}

/// CSV dump of (momentum, eigenvalue) pairs, one row per pair, with header.
pub fn spectrum_csv<T: Scalar>(points: &[(T, T)]) -> String {
    let mut out = String::from("momentum,eigenvalue\n");
    for &(momentum, eigenvalue) in points {
        out.push_str(&format!(
            "{},{}\n",
            momentum.as_f64(),
            eigenvalue.as_f64()
        ));
    }
    out
}

/// CSV dump of a zero mode's spatial profile: (cell, |amplitude|²) rows,
/// with header. `amplitudes` holds the per-cell amplitude (not squared), as
/// stored on a zero-mode record.
pub fn zero_mode_csv<T: Scalar>(amplitudes: &[T]) -> String {
    let mut out = String::from("cell,weight\n");
    for (cell, &amplitude) in amplitudes.iter().enumerate() {
        let a = amplitude.as_f64();
        out.push_str(&format!("{},{}\n", cell, a * a));
    }
    out
}

/// CSV dump of a family kernel report: (k_x, dim_upper, dim_lower) rows,
/// with header.
pub fn kernel_dims_csv<T: Scalar>(
    kx_grid: &[T],
    dims_upper: &[usize],
    dims_lower: &[usize],
) -> String {
    let mut out = String::from("k_x,dim_upper,dim_lower\n");
    for ((&k_x, &up), &low) in kx_grid.iter().zip(dims_upper).zip(dims_lower) {
        out.push_str(&format!("{},{},{}\n", k_x.as_f64(), up, low));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Params {
        grid: usize,
        tol: f64,
    }

    #[test]
    fn envelope_embeds_schema_command_and_params() {
        let env = envelope(
            "invariants",
            Params {
                grid: 8,
                tol: 1e-8,
            },
            vec![1_i64, -1],
        );
        let json = to_json_string(&env).unwrap();
        assert!(json.starts_with("{\n  \"schema\": 1,"));
        assert!(json.contains("\"command\": \"invariants\""));
        assert!(json.contains("\"grid\": 8"));
        assert!(json.contains("\"tol\": 1e-8"));
        assert!(json.ends_with("\n"));
    }

    #[test]
    fn serialization_is_deterministic() {
        let make = || envelope("edge", Params { grid: 4, tol: 0.5 }, (1, 2, 3));
        assert_eq!(
            to_json_string(&make()).unwrap(),
            to_json_string(&make()).unwrap()
        );
    }

    #[test]
    fn csv_writers_format_exactly() {
        assert_eq!(
            spectrum_csv(&[(0.0_f64, -0.5), (1.5, 0.25)]),
            "momentum,eigenvalue\n0,-0.5\n1.5,0.25\n"
        );
        assert_eq!(
            zero_mode_csv(&[1.0_f64, 0.5, 0.0]),
            "cell,weight\n0,1\n1,0.25\n2,0\n"
        );
        assert_eq!(
            kernel_dims_csv(&[0.0_f64, 3.5], &[1, 2], &[1, 0]),
            "k_x,dim_upper,dim_lower\n0,1,1\n3.5,2,0\n"
        );
    }
}
