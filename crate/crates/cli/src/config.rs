//! Model sources for the command line: built-in preset names and JSON
//! model description files. Loading failures are configuration errors
//! (exit code 2); spectral defects discovered later are computation errors.

use std::fmt;
use std::path::Path;

use serde::Deserialize;

use glidetop::models::{
    build_edge_symbol, build_general_u, build_glide_v, DimerPreset, PgModel, SshModel, SshPreset,
};
use glidetop::{EdgeSymbol64, LaurentMatrix64, PgModel64, SshModel64};

use crate::Failure;

/// A validated model together with a human-readable source tag that is
/// echoed into every report.
pub enum LoadedModel {
    Pg(PgModel64),
    Ssh(SshModel64),
    Edge(EdgeSymbol64),
}

impl LoadedModel {
    pub fn label(&self) -> String {
        match self {
            LoadedModel::Pg(m) => m.label().to_string(),
            LoadedModel::Ssh(m) => m.label().to_string(),
            LoadedModel::Edge(_) => "edge_symbol".to_string(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            LoadedModel::Pg(_) => "pg",
            LoadedModel::Ssh(_) => "ssh",
            LoadedModel::Edge(_) => "edge",
        }
    }
}

impl fmt::Display for LoadedModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.label(), self.kind())
    }
}

pub const PRESET_NAMES: [&str; 7] = [
    "Ur", "Ug", "Up", "Ub", "ssh_red", "ssh_blue", "ssh_green",
];

/// On-disk model description. Exactly one of the two shapes is accepted:
/// `{"preset": NAME}` or `{"type": "pg"|"ssh"|"edge", ...}` with the
/// fields the type needs. Unknown fields are rejected.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelConfig {
    preset: Option<String>,
    #[serde(rename = "type")]
    kind: Option<String>,
    /// Optional block size cross-check for type "pg" (must equal a.dim).
    n: Option<usize>,
    label: Option<String>,
    a: Option<LaurentMatrix64>,
    b: Option<LaurentMatrix64>,
    u: Option<LaurentMatrix64>,
}

pub fn load_preset(name: &str) -> Result<LoadedModel, Failure> {
    let dimer = |p: DimerPreset| LoadedModel::Pg(PgModel::dimer(p));
    let chain = |p: SshPreset| LoadedModel::Ssh(SshModel::preset(p));
    match name {
        "Ur" => Ok(dimer(DimerPreset::Red)),
        "Ug" => Ok(dimer(DimerPreset::Green)),
        "Up" => Ok(dimer(DimerPreset::Purple)),
        "Ub" => Ok(dimer(DimerPreset::Blank)),
        "ssh_red" => Ok(chain(SshPreset::Red)),
        "ssh_blue" => Ok(chain(SshPreset::Blue)),
        "ssh_green" => Ok(chain(SshPreset::Green)),
        other => Err(Failure::Config(format!(
            "unknown preset {other:?}; valid names: {}",
            PRESET_NAMES.join(", ")
        ))),
    }
}

pub fn load_config_file(path: &Path) -> Result<LoadedModel, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
    let cfg: ModelConfig = serde_json::from_str(&text)
        .map_err(|e| Failure::Config(format!("invalid model config {}: {e}", path.display())))?;
    build_model(cfg).map_err(|msg| Failure::Config(format!("{}: {msg}", path.display())))
}

fn build_model(cfg: ModelConfig) -> Result<LoadedModel, String> {
    if let Some(name) = &cfg.preset {
        if cfg.kind.is_some()
            || cfg.n.is_some()
            || cfg.label.is_some()
            || cfg.a.is_some()
            || cfg.b.is_some()
            || cfg.u.is_some()
        {
            return Err("a preset config must contain only the \"preset\" field".to_string());
        }
        return load_preset(name).map_err(|f| f.message().to_string());
    }
    let kind = cfg
        .kind
        .as_deref()
        .ok_or("config needs either \"preset\" or \"type\"")?;
    match kind {
        "pg" => {
            let a = cfg.a.ok_or("type \"pg\" needs the block \"a\"")?;
            let b = cfg.b.ok_or("type \"pg\" needs the block \"b\"")?;
            if cfg.u.is_some() {
                return Err("type \"pg\" takes blocks \"a\" and \"b\", not \"u\"".to_string());
            }
            if let Some(n) = cfg.n {
                if n != a.dim() {
                    return Err(format!(
                        "declared n = {n} but the blocks are {dim}x{dim}",
                        dim = a.dim()
                    ));
                }
            }
            let u = build_general_u(&a, &b).map_err(|e| e.to_string())?;
            let v = build_glide_v(a.dim());
            let label = cfg.label.unwrap_or_else(|| "custom_pg".to_string());
            let model = PgModel::new(v, u, label, Some((a, b))).map_err(|e| e.to_string())?;
            Ok(LoadedModel::Pg(model))
        }
        "ssh" => {
            let u = cfg.u.ok_or("type \"ssh\" needs the scalar symbol \"u\"")?;
            if cfg.a.is_some() || cfg.b.is_some() || cfg.n.is_some() {
                return Err("type \"ssh\" takes only the symbol \"u\"".to_string());
            }
            if u.dim() != 1 {
                return Err(format!("chain symbol must be 1x1, got {0}x{0}", u.dim()));
            }
            let label = cfg.label.unwrap_or_else(|| "custom_ssh".to_string());
            let model = SshModel::new(u, label).map_err(|e| e.to_string())?;
            Ok(LoadedModel::Ssh(model))
        }
        "edge" => {
            let a = cfg.a.ok_or("type \"edge\" needs the scalar block \"a\"")?;
            let b = cfg.b.ok_or("type \"edge\" needs the scalar block \"b\"")?;
            if cfg.u.is_some() || cfg.n.is_some() {
                return Err("type \"edge\" takes only the blocks \"a\" and \"b\"".to_string());
            }
            let symbol = build_edge_symbol(a, b).map_err(|e| e.to_string())?;
            Ok(LoadedModel::Edge(symbol))
        }
        other => Err(format!(
            "unknown model type {other:?}; expected \"pg\", \"ssh\", or \"edge\""
        )),
    }
}
