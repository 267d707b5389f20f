//! Plain-text ion species files. One file fully determines an `IonSpec`:
//! basis manifolds, crystal-field coefficients, and reduced matrix elements.
//! Physical quantities carry explicit cm^-1 unit suffixes and are converted
//! to GHz on load; parse errors report the offending line.
//!
//! ```text
//! name = ndgao3
//! moment_mode = exact_ls
//!
//! [manifold]
//! label = 4I9/2
//! l = 6
//! s = 3/2
//! j = 9/2
//! centroid_cm = 0.0
//!
//! [cf_cm]
//! # k  q  re  im
//! 2 0 150.0 0.0
//!
//! [rme]
//! # bra  ket  k  value
//! 4I9/2 4I9/2 2 -0.495408419012
//! ```

use std::fs;
use std::path::Path;

use crate::angmom::half::HalfInt;
use crate::angmom::tensor::ReducedMatrixElement;
use crate::error::{CoreError, Result};
use crate::ion::basis::Manifold;
use crate::ion::{CrystalFieldParams, IonSpec, MomentMode};
use crate::units::GHZ_PER_CM;
use crate::C64;

fn err(line_no: usize, msg: impl std::fmt::Display) -> CoreError {
    CoreError::config(format!("line {line_no}: {msg}"))
}

/// "6" or odd-"n/2" angular momentum notation.
fn parse_half(s: &str, line_no: usize) -> Result<HalfInt> {
    if let Some((num, den)) = s.split_once('/') {
        if den != "2" {
            return Err(err(line_no, format!("half-integers use /2 notation, got {s}")));
        }
        let n: i32 = num
            .parse()
            .map_err(|_| err(line_no, format!("bad half-integer numerator {num}")))?;
        if n.rem_euclid(2) == 0 {
            return Err(err(line_no, format!("{s} is a whole number, write it without /2")));
        }
        Ok(HalfInt::from_twice(n))
    } else {
        let n: i32 = s
            .parse()
            .map_err(|_| err(line_no, format!("bad angular momentum value {s}")))?;
        Ok(HalfInt::from_int(n))
    }
}

fn parse_f64(s: &str, line_no: usize) -> Result<f64> {
    let v: f64 = s.parse().map_err(|_| err(line_no, format!("bad number {s}")))?;
    if !v.is_finite() {
        return Err(err(line_no, format!("non-finite number {s}")));
    }
    Ok(v)
}

#[derive(Default)]
struct ManifoldDraft {
    start_line: usize,
    label: Option<String>,
    l: Option<HalfInt>,
    s: Option<HalfInt>,
    j: Option<HalfInt>,
    centroid_cm: Option<f64>,
}

impl ManifoldDraft {
    fn finish(self) -> Result<Manifold> {
        let need = |name: &str| err(self.start_line, format!("manifold is missing key {name}"));
        Ok(Manifold {
            label: self.label.ok_or_else(|| need("label"))?,
            l: self.l.ok_or_else(|| need("l"))?,
            s: self.s.ok_or_else(|| need("s"))?,
            j: self.j.ok_or_else(|| need("j"))?,
            centroid_ghz: self.centroid_cm.ok_or_else(|| need("centroid_cm"))? * GHZ_PER_CM,
        })
    }
}

enum Section {
    Top,
    Manifold(ManifoldDraft),
    Cf,
    Rme,
}

/// Strict parse of the ion file format; every line must be a comment, a
/// section header, or a well-formed entry for the current section.
pub fn parse_ion_spec(text: &str) -> Result<IonSpec> {
    let mut name: Option<String> = None;
    let mut mode: Option<MomentMode> = None;
    let mut manifolds: Vec<Manifold> = Vec::new();
    let mut cf_raw: Vec<(u32, i32, C64)> = Vec::new();
    let mut rmes: Vec<ReducedMatrixElement> = Vec::new();
    let mut section = Section::Top;

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw_line.find('#') {
            Some(p) => &raw_line[..p],
            None => raw_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }

        if let Some(rest) = line.strip_prefix('[') {
            let header = rest
                .strip_suffix(']')
                .ok_or_else(|| err(line_no, "unterminated section header"))?;
            if let Section::Manifold(draft) = std::mem::replace(&mut section, Section::Top) {
                manifolds.push(draft.finish()?);
            }
            section = match header {
                "manifold" => {
                    Section::Manifold(ManifoldDraft { start_line: line_no, ..Default::default() })
                }
                "cf_cm" => Section::Cf,
                "rme" => Section::Rme,
                other => return Err(err(line_no, format!("unknown section [{other}]"))),
            };
            continue;
        }

        match &mut section {
            Section::Top => {
                let (key, value) = line
                    .split_once('=')
                    .ok_or_else(|| err(line_no, "expected key = value"))?;
                let (key, value) = (key.trim(), value.trim());
                match key {
                    "name" => {
                        if name.replace(value.to_string()).is_some() {
                            return Err(err(line_no, "name given twice"));
                        }
                    }
                    "moment_mode" => {
                        let m = match value {
                            "lande" => MomentMode::Lande,
                            "exact_ls" => MomentMode::ExactLs,
                            other => {
                                return Err(err(
                                    line_no,
                                    format!("moment_mode must be lande or exact_ls, got {other}"),
                                ))
                            }
                        };
                        if mode.replace(m).is_some() {
                            return Err(err(line_no, "moment_mode given twice"));
                        }
                    }
                    other => return Err(err(line_no, format!("unknown key {other}"))),
                }
            }
            Section::Manifold(draft) => {
                let (key, value) = line
                    .split_once('=')
                    .ok_or_else(|| err(line_no, "expected key = value"))?;
                let (key, value) = (key.trim(), value.trim());
                let dup = |k: &str| err(line_no, format!("manifold key {k} given twice"));
                match key {
                    "label" => {
                        if value.is_empty() {
                            return Err(err(line_no, "label must not be empty"));
                        }
                        if draft.label.replace(value.to_string()).is_some() {
                            return Err(dup("label"));
                        }
                    }
                    "l" => {
                        if draft.l.replace(parse_half(value, line_no)?).is_some() {
                            return Err(dup("l"));
                        }
                    }
                    "s" => {
                        if draft.s.replace(parse_half(value, line_no)?).is_some() {
                            return Err(dup("s"));
                        }
                    }
                    "j" => {
                        if draft.j.replace(parse_half(value, line_no)?).is_some() {
                            return Err(dup("j"));
                        }
                    }
                    "centroid_cm" => {
                        if draft.centroid_cm.replace(parse_f64(value, line_no)?).is_some() {
                            return Err(dup("centroid_cm"));
                        }
                    }
                    other => return Err(err(line_no, format!("unknown manifold key {other}"))),
                }
            }
            Section::Cf => {
                let cols: Vec<&str> = line.split_whitespace().collect();
                if cols.len() != 4 {
                    return Err(err(line_no, "cf rows are: k q re im"));
                }
                let k: u32 = cols[0]
                    .parse()
                    .map_err(|_| err(line_no, format!("bad rank {}", cols[0])))?;
                let q: i32 = cols[1]
                    .parse()
                    .map_err(|_| err(line_no, format!("bad projection {}", cols[1])))?;
                if q < 0 {
                    return Err(err(
                        line_no,
                        "give only q >= 0 rows; the -q partner is implied by Hermiticity",
                    ));
                }
                let re = parse_f64(cols[2], line_no)?;
                let im = parse_f64(cols[3], line_no)?;
                cf_raw.push((k, q, C64::new(re * GHZ_PER_CM, im * GHZ_PER_CM)));
            }
            Section::Rme => {
                let cols: Vec<&str> = line.split_whitespace().collect();
                if cols.len() != 4 {
                    return Err(err(line_no, "rme rows are: bra ket k value"));
                }
                let k: u32 = cols[2]
                    .parse()
                    .map_err(|_| err(line_no, format!("bad rank {}", cols[2])))?;
                rmes.push(ReducedMatrixElement {
                    bra: cols[0].to_string(),
                    ket: cols[1].to_string(),
                    k,
                    value: parse_f64(cols[3], line_no)?,
                });
            }
        }
    }
    if let Section::Manifold(draft) = section {
        manifolds.push(draft.finish()?);
    }

    let name = name.ok_or_else(|| CoreError::config("ion file is missing name"))?;
    let mode = mode.ok_or_else(|| CoreError::config("ion file is missing moment_mode"))?;
    if manifolds.is_empty() {
        return Err(CoreError::config("ion file defines no manifolds"));
    }
    let cf = CrystalFieldParams::new(&cf_raw)?;
    IonSpec::new(name, manifolds, cf, rmes, mode)
}

/// Read and parse an ion file, prefixing IO failures with the path.
pub fn load_ion_spec(path: &Path) -> Result<IonSpec> {
    let text = fs::read_to_string(path)
        .map_err(|e| CoreError::config(format!("cannot read {}: {e}", path.display())))?;
    parse_ion_spec(&text).map_err(|e| match e {
        CoreError::Config(msg) => CoreError::config(format!("{}: {msg}", path.display())),
        other => other,
    })
}
