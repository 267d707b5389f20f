//! Run configuration: a single TOML file with explicit unit suffixes on every
//! physical quantity. Unknown keys are rejected with their line and column;
//! semantic failures name the offending key. The fully-resolved config has a
//! canonical serialization whose hash is embedded in every output file.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use cfspec::{
    ExchangeConstants, FieldAxis, IncludeFlags, IonSpec, PhaseBoundaries, Polarisation,
    SweepConfig,
};

pub const BUILTIN_NDGAO3: &str = include_str!("../../../configs/ndgao3.ion");

#[derive(Debug)]
pub struct ConfigError {
    pub message: String,
    pub line: Option<usize>,
    pub column: Option<usize>,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, self.column) {
            (Some(l), Some(c)) => write!(f, "line {l}, column {c}: {}", self.message),
            (Some(l), None) => write!(f, "line {l}: {}", self.message),
            _ => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

fn semantic(msg: impl Into<String>) -> ConfigError {
    ConfigError { message: msg.into(), line: None, column: None }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisToken {
    C,
    B,
}

impl From<AxisToken> for FieldAxis {
    fn from(t: AxisToken) -> Self {
        match t {
            AxisToken::C => FieldAxis::C,
            AxisToken::B => FieldAxis::B,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolToken {
    Pi,
    Sigma,
}

impl From<PolToken> for Polarisation {
    fn from(t: PolToken) -> Self {
        match t {
            PolToken::Pi => Polarisation::Pi,
            PolToken::Sigma => Polarisation::Sigma,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormatToken {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExchangeSection {
    pub j_par_k: f64,
    pub j_perp_k: f64,
    pub j_par_prime_k: f64,
    pub j_perp_prime_k: f64,
}

impl Default for ExchangeSection {
    fn default() -> Self {
        let x = ExchangeConstants::default();
        Self {
            j_par_k: x.j_par,
            j_perp_k: x.j_perp,
            j_par_prime_k: x.j_par_prime,
            j_perp_prime_k: x.j_perp_prime,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    pub field_axis: AxisToken,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field_values_t: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field_start_t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field_stop_t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field_step_t: Option<f64>,
    pub boundary_c_t: [f64; 2],
    pub boundary_b_t: f64,
    pub polarisations: Vec<PolToken>,
    pub satellite_offsets_ghz: Vec<f64>,
    pub linewidth_ghz: f64,
    pub include_main: bool,
    pub include_two_nd: bool,
    pub include_satellite: bool,
    pub include_hot_band: bool,
    pub hot_band_everywhere: bool,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            field_axis: AxisToken::C,
            field_values_t: None,
            field_start_t: None,
            field_stop_t: None,
            field_step_t: None,
            boundary_c_t: [1.1, 2.3],
            boundary_b_t: 1.72,
            polarisations: vec![PolToken::Pi, PolToken::Sigma],
            satellite_offsets_ghz: Vec::new(),
            linewidth_ghz: 1.0,
            include_main: true,
            include_two_nd: true,
            include_satellite: true,
            include_hot_band: true,
            hot_band_everywhere: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub format: FormatToken,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { format: FormatToken::Csv, path: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub ion_spec: String,
    pub deterministic: bool,
    pub exchange: ExchangeSection,
    pub sweep: SweepSection,
    pub output: OutputSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            ion_spec: "builtin:ndgao3".to_string(),
            deterministic: true,
            exchange: ExchangeSection::default(),
            sweep: SweepSection::default(),
            output: OutputSection::default(),
        }
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let prefix = &text[..offset.min(text.len())];
    let line = prefix.matches('\n').count() + 1;
    let column = prefix.rsplit('\n').next().map_or(1, |l| l.chars().count() + 1);
    (line, column)
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| {
            let (line, column) = match e.span() {
                Some(span) => {
                    let (l, c) = line_col(text, span.start);
                    (Some(l), Some(c))
                }
                None => (None, None),
            };
            ConfigError { message: e.message().to_string(), line, column }
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| semantic(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|mut e| {
            e.message = format!("{}: {}", path.display(), e.message);
            e
        })
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !self.deterministic {
            return Err(semantic("deterministic = false is not supported"));
        }
        if let Some(rest) = self.ion_spec.strip_prefix("builtin:") {
            if rest != "ndgao3" {
                return Err(semantic(format!("ion_spec: no builtin species named {rest}")));
            }
        }
        let s = &self.sweep;
        let range_keys = [
            ("sweep.field_start_t", s.field_start_t),
            ("sweep.field_stop_t", s.field_stop_t),
            ("sweep.field_step_t", s.field_step_t),
        ];
        let given = range_keys.iter().filter(|(_, v)| v.is_some()).count();
        if given != 0 && given != 3 {
            let missing: Vec<&str> =
                range_keys.iter().filter(|(_, v)| v.is_none()).map(|(k, _)| *k).collect();
            return Err(semantic(format!(
                "field range needs all of start/stop/step; missing {}",
                missing.join(", ")
            )));
        }
        if s.field_values_t.is_some() && given == 3 {
            return Err(semantic(
                "give either sweep.field_values_t or the field_start/stop/step range, not both",
            ));
        }
        if let Some(values) = &s.field_values_t {
            if values.iter().any(|v| !v.is_finite()) {
                return Err(semantic("sweep.field_values_t: values must be finite"));
            }
            if values.windows(2).any(|w| w[1] <= w[0]) {
                return Err(semantic("sweep.field_values_t: values must be strictly ascending"));
            }
        }
        if given == 3 {
            let (start, stop, step) =
                (s.field_start_t.unwrap(), s.field_stop_t.unwrap(), s.field_step_t.unwrap());
            if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
                return Err(semantic("sweep field range: values must be finite"));
            }
            if step <= 0.0 {
                return Err(semantic("sweep.field_step_t must be positive"));
            }
            if stop < start {
                return Err(semantic("sweep.field_stop_t must not be below field_start_t"));
            }
        }
        if !(s.linewidth_ghz > 0.0 && s.linewidth_ghz.is_finite()) {
            return Err(semantic("sweep.linewidth_ghz must be positive"));
        }
        if s.polarisations.is_empty() {
            return Err(semantic("sweep.polarisations must not be empty"));
        }
        let repeated = s
            .polarisations
            .iter()
            .enumerate()
            .any(|(i, p)| s.polarisations[..i].contains(p));
        if repeated {
            return Err(semantic("sweep.polarisations must not repeat"));
        }
        if s.satellite_offsets_ghz.iter().any(|v| !v.is_finite()) {
            return Err(semantic("sweep.satellite_offsets_ghz: values must be finite"));
        }
        if !(s.boundary_c_t[0] >= 0.0 && s.boundary_c_t[0] <= s.boundary_c_t[1]) {
            return Err(semantic("sweep.boundary_c_t must be ascending and non-negative"));
        }
        if s.boundary_b_t < 0.0 {
            return Err(semantic("sweep.boundary_b_t must be non-negative"));
        }
        Ok(())
    }

    /// Canonical serialization of the resolved config; identical configs give
    /// identical text.
    pub fn canonical_toml(&self) -> String {
        toml::to_string(self).expect("config serialization cannot fail")
    }

    /// First 16 hex digits of the canonical serialization's SHA-256. The
    /// output path is excluded: where a table goes does not change what it
    /// holds, so the same physics hashes the same on screen and on disk.
    pub fn hash(&self) -> String {
        let mut keyed = self.clone();
        keyed.output.path = None;
        let digest = Sha256::digest(keyed.canonical_toml().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    pub fn ion_spec(&self) -> Result<IonSpec, cfspec::CoreError> {
        if self.ion_spec == "builtin:ndgao3" {
            cfspec::parse_ion_spec(BUILTIN_NDGAO3)
        } else {
            cfspec::load_ion_spec(Path::new(&self.ion_spec))
        }
    }

    pub fn exchange(&self) -> ExchangeConstants {
        ExchangeConstants {
            j_par: self.exchange.j_par_k,
            j_perp: self.exchange.j_perp_k,
            j_par_prime: self.exchange.j_par_prime_k,
            j_perp_prime: self.exchange.j_perp_prime_k,
        }
    }

    /// The field grid, from the explicit list or the range form; empty when
    /// neither is configured.
    pub fn field_grid(&self) -> Vec<f64> {
        if let Some(values) = &self.sweep.field_values_t {
            return values.clone();
        }
        match (self.sweep.field_start_t, self.sweep.field_stop_t, self.sweep.field_step_t) {
            (Some(start), Some(stop), Some(step)) => {
                let count = ((stop - start) / step + 1.5).floor() as usize;
                (0..count).map(|i| start + i as f64 * step).collect()
            }
            _ => Vec::new(),
        }
    }

    pub fn sweep_config(&self) -> SweepConfig {
        let s = &self.sweep;
        SweepConfig {
            field_axis: s.field_axis.into(),
            field_values_t: self.field_grid(),
            boundaries: PhaseBoundaries { c: s.boundary_c_t, b: s.boundary_b_t },
            polarisations: s.polarisations.iter().map(|&p| p.into()).collect(),
            satellite_offsets_ghz: s.satellite_offsets_ghz.clone(),
            linewidth_ghz: s.linewidth_ghz,
            include: IncludeFlags {
                main: s.include_main,
                two_nd: s.include_two_nd,
                satellite: s.include_satellite,
                hot_band: s.include_hot_band,
            },
            hot_band_everywhere: s.hot_band_everywhere,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = RunConfig::parse("").unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!(cfg.ion_spec, "builtin:ndgao3");
        assert!(cfg.deterministic);
        assert_eq!(cfg.sweep.linewidth_ghz, 1.0);
        assert_eq!(cfg.sweep.boundary_c_t, [1.1, 2.3]);
        assert!(cfg.field_grid().is_empty());
    }

    #[test]
    fn unknown_key_is_rejected_with_location() {
        let e = RunConfig::parse("[exchange]\nJ_perpp = 0.1\n").unwrap_err();
        assert!(e.to_string().contains("J_perpp"), "{e}");
        assert_eq!(e.line, Some(2));
        assert!(e.column.is_some());
    }

    #[test]
    fn round_trip_is_identity() {
        let text = "\
ion_spec = \"builtin:ndgao3\"

[exchange]
j_perp_k = -0.5

[sweep]
field_axis = \"b\"
field_start_t = 0.0
field_stop_t = 2.0
field_step_t = 0.25
satellite_offsets_ghz = [-50.0, 250.0]
linewidth_ghz = 0.5

[output]
format = \"json\"
";
        let cfg = RunConfig::parse(text).unwrap();
        let serialized = cfg.canonical_toml();
        let reparsed = RunConfig::parse(&serialized).unwrap();
        assert_eq!(cfg, reparsed);
        assert_eq!(serialized, reparsed.canonical_toml());
        assert_eq!(cfg.hash(), reparsed.hash());
        assert_eq!(cfg.hash().len(), 16);
    }

    #[test]
    fn hash_tracks_content() {
        let a = RunConfig::parse("").unwrap();
        let b = RunConfig::parse("[sweep]\nlinewidth_ghz = 2.0\n").unwrap();
        assert_ne!(a.hash(), b.hash());
    }

    #[test]
    fn field_range_expansion() {
        let cfg = RunConfig::parse(
            "[sweep]\nfield_start_t = 0.0\nfield_stop_t = 3.0\nfield_step_t = 0.01\n",
        )
        .unwrap();
        let grid = cfg.field_grid();
        assert_eq!(grid.len(), 301);
        assert_eq!(grid[0], 0.0);
        assert!((grid[300] - 3.0).abs() < 1e-12);
        assert!(grid.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn semantic_errors_name_keys() {
        let partial = RunConfig::parse("[sweep]\nfield_start_t = 0.0\n").unwrap_err();
        assert!(partial.to_string().contains("field_stop_t"), "{partial}");
        let both = RunConfig::parse(
            "[sweep]\nfield_values_t = [0.0]\nfield_start_t = 0.0\nfield_stop_t = 1.0\nfield_step_t = 0.5\n",
        )
        .unwrap_err();
        assert!(both.to_string().contains("not both"), "{both}");
        let desc = RunConfig::parse("[sweep]\nfield_values_t = [1.0, 0.5]\n").unwrap_err();
        assert!(desc.to_string().contains("ascending"), "{desc}");
        let lw = RunConfig::parse("[sweep]\nlinewidth_ghz = -1.0\n").unwrap_err();
        assert!(lw.to_string().contains("linewidth"), "{lw}");
        let det = RunConfig::parse("deterministic = false\n").unwrap_err();
        assert!(det.to_string().contains("deterministic"), "{det}");
        let ion = RunConfig::parse("ion_spec = \"builtin:xe54\"\n").unwrap_err();
        assert!(ion.to_string().contains("xe54"), "{ion}");
    }

    #[test]
    fn builtin_ion_spec_parses() {
        let cfg = RunConfig::default();
        let spec = cfg.ion_spec().unwrap();
        assert_eq!(spec.name, "ndgao3");
        assert_eq!(spec.basis.manifolds().len(), 2);
    }

    #[test]
    fn exchange_maps_to_library_type() {
        let cfg = RunConfig::parse("[exchange]\nj_perp_k = -0.4\n").unwrap();
        let xc = cfg.exchange();
        assert_eq!(xc.j_perp, -0.4);
        assert_eq!(xc.j_par, 0.07);
    }
}
