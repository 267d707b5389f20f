//! Deterministic output serialization. CSV is the canonical format and JSON
//! mirrors it field for field; every file starts with the schema version and
//! the hash of the resolved configuration, and all floats are written with
//! nine significant digits so identical configs produce identical bytes.

use std::fmt::Write as _;

use cfspec::{FieldLines, LineClass, Phase, SpectrumMap, TransitionLine};

pub const SCHEMA_VERSION: u32 = 1;

/// Nine significant digits, stable across runs; negative zero is normalized.
pub fn fmt9(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.8e}")
}

fn header_comment(config_hash: &str) -> String {
    format!("# schema_version={SCHEMA_VERSION}\n# config_hash={config_hash}\n")
}

fn pair_kind_label(line: &TransitionLine) -> String {
    match line.pair_kind {
        Some(k) => k.to_string(),
        None => "none".to_string(),
    }
}

/// One line-table row as its CSV cell values.
fn line_cells(field_t: f64, l: &TransitionLine) -> [String; 8] {
    [
        fmt9(field_t),
        fmt9(l.frequency_ghz),
        l.polarisation.to_string(),
        l.class.to_string(),
        l.sublattice.to_string(),
        pair_kind_label(l),
        l.allowed.to_string(),
        l.approx.to_string(),
    ]
}

/// Marker row for a field value the model does not cover.
fn unmodeled_cells(field_t: f64) -> [String; 8] {
    [
        fmt9(field_t),
        "nan".to_string(),
        "none".to_string(),
        "unmodeled".to_string(),
        "none".to_string(),
        "none".to_string(),
        "false".to_string(),
        "false".to_string(),
    ]
}

fn table_rows(table: &[FieldLines], filter: Option<LineClass>) -> Vec<[String; 8]> {
    let mut rows = Vec::new();
    for fl in table {
        if fl.phase == Phase::Intermediate {
            rows.push(unmodeled_cells(fl.field_t));
            continue;
        }
        for l in &fl.lines {
            if filter.map_or(true, |c| l.class == c) {
                rows.push(line_cells(fl.field_t, l));
            }
        }
    }
    rows
}

const LINE_COLUMNS: [&str; 8] = [
    "field_T",
    "frequency_GHz",
    "polarisation",
    "class",
    "sublattice",
    "pair_kind",
    "allowed",
    "approx_flag",
];

pub fn line_table_csv(table: &[FieldLines], filter: Option<LineClass>, config_hash: &str) -> String {
    let mut out = header_comment(config_hash);
    out.push_str(&LINE_COLUMNS.join(","));
    out.push('\n');
    for row in table_rows(table, filter) {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn json_string(s: &str) -> String {
    // column values contain no characters needing escapes; keep it simple
    format!("\"{s}\"")
}

pub fn line_table_json(
    table: &[FieldLines],
    filter: Option<LineClass>,
    config_hash: &str,
) -> String {
    let mut out = String::new();
    let _ = write!(
        out,
        "{{\"schema_version\":{SCHEMA_VERSION},\"config_hash\":{},\"rows\":[",
        json_string(config_hash)
    );
    for (i, row) in table_rows(table, filter).iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push('{');
        for (j, (name, cell)) in LINE_COLUMNS.iter().zip(row).enumerate() {
            if j > 0 {
                out.push(',');
            }
            let quoted = matches!(j, 2..=5) || cell == "nan";
            let _ = write!(
                out,
                "{}:{}",
                json_string(name),
                if quoted { json_string(cell) } else { cell.clone() }
            );
        }
        out.push('}');
    }
    out.push_str("]}\n");
    out
}

/// Eigenvalue rows: (field, sublattice label, level index, energy).
pub type LevelRow = (f64, String, Option<(usize, f64)>);

pub fn levels_csv(rows: &[LevelRow], g_lines: &[String], config_hash: &str) -> String {
    let mut out = header_comment(config_hash);
    for g in g_lines {
        let _ = writeln!(out, "# {g}");
    }
    out.push_str("field_T,sublattice,level,energy_GHz\n");
    for (field, sub, level) in rows {
        match level {
            Some((idx, e)) => {
                let _ = writeln!(out, "{},{sub},{idx},{}", fmt9(*field), fmt9(*e));
            }
            None => {
                let _ = writeln!(out, "{},none,nan,nan", fmt9(*field));
            }
        }
    }
    out
}

pub fn levels_json(rows: &[LevelRow], g_lines: &[String], config_hash: &str) -> String {
    let mut out = String::new();
    let _ = write!(
        out,
        "{{\"schema_version\":{SCHEMA_VERSION},\"config_hash\":{},\"notes\":[",
        json_string(config_hash)
    );
    for (i, g) in g_lines.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&json_string(g));
    }
    out.push_str("],\"rows\":[");
    for (i, (field, sub, level)) in rows.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        match level {
            Some((idx, e)) => {
                let _ = write!(
                    out,
                    "{{\"field_T\":{},\"sublattice\":{},\"level\":{idx},\"energy_GHz\":{}}}",
                    fmt9(*field),
                    json_string(sub),
                    fmt9(*e)
                );
            }
            None => {
                let _ = write!(
                    out,
                    "{{\"field_T\":{},\"sublattice\":\"none\",\"level\":\"nan\",\"energy_GHz\":\"nan\"}}",
                    fmt9(*field)
                );
            }
        }
    }
    out.push_str("]}\n");
    out
}

/// Dense intensity grid: one row per field, one column per frequency.
pub fn render_csv(map: &SpectrumMap, config_hash: &str) -> String {
    let mut out = header_comment(config_hash);
    out.push_str("field_T");
    for f in &map.frequency_ghz {
        out.push(',');
        out.push_str(&fmt9(*f));
    }
    out.push('\n');
    for (field, row) in map.field_t.iter().zip(&map.intensity) {
        out.push_str(&fmt9(*field));
        for v in row {
            out.push(',');
            out.push_str(&fmt9(*v));
        }
        out.push('\n');
    }
    out
}

pub fn render_json(map: &SpectrumMap, config_hash: &str) -> String {
    let join9 = |xs: &[f64]| xs.iter().map(|&x| fmt9(x)).collect::<Vec<_>>().join(",");
    let mut out = String::new();
    let _ = write!(
        out,
        "{{\"schema_version\":{SCHEMA_VERSION},\"config_hash\":{},\"field_T\":[{}],\"frequency_GHz\":[{}],\"intensity\":[",
        json_string(config_hash),
        join9(&map.field_t),
        join9(&map.frequency_ghz)
    );
    for (i, row) in map.intensity.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "[{}]", join9(row));
    }
    out.push_str("]}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use cfspec::{
        Irrep, PairKind, Polarisation, StateSymmetry, Sublattice,
    };

    fn sample_line() -> TransitionLine {
        TransitionLine {
            frequency_ghz: 12.3456789123,
            polarisation: Polarisation::Pi,
            class: LineClass::Main,
            sublattice: Sublattice::One,
            pair_kind: None,
            allowed: true,
            approx: false,
            initial_sym: StateSymmetry::Single(Irrep::G3),
            final_sym: StateSymmetry::Single(Irrep::G4),
            mixed: false,
        }
    }

    #[test]
    fn nine_significant_digits() {
        assert_eq!(fmt9(0.0), "0.00000000e0");
        assert_eq!(fmt9(-0.0), "0.00000000e0");
        assert_eq!(fmt9(1394.7), "1.39470000e3");
        assert_eq!(fmt9(-0.0123456789), "-1.23456789e-2");
        assert_eq!(fmt9(f64::NAN), "nan");
    }

    #[test]
    fn csv_layout() {
        let table = vec![
            FieldLines { field_t: 0.0, phase: Phase::Afm, lines: vec![sample_line()] },
            FieldLines { field_t: 1.5, phase: Phase::Intermediate, lines: vec![] },
        ];
        let csv = line_table_csv(&table, None, "deadbeef00000000");
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "# schema_version=1");
        assert_eq!(lines[1], "# config_hash=deadbeef00000000");
        assert_eq!(
            lines[2],
            "field_T,frequency_GHz,polarisation,class,sublattice,pair_kind,allowed,approx_flag"
        );
        assert_eq!(lines[3], "0.00000000e0,1.23456789e1,pi,main,1,none,true,false");
        assert_eq!(lines[4], "1.50000000e0,nan,none,unmodeled,none,none,false,false");
        assert_eq!(lines.len(), 5);
    }

    #[test]
    fn class_filter() {
        let mut two_nd = sample_line();
        two_nd.class = LineClass::TwoNd;
        two_nd.pair_kind = Some(PairKind::InPlane);
        let table = vec![FieldLines {
            field_t: 0.0,
            phase: Phase::Afm,
            lines: vec![sample_line(), two_nd],
        }];
        let csv = line_table_csv(&table, Some(LineClass::TwoNd), "h");
        let body: Vec<&str> = csv.lines().skip(3).collect();
        assert_eq!(body.len(), 1);
        assert!(body[0].contains("two_nd"));
        assert!(body[0].contains("in_plane"));
    }

    #[test]
    fn json_mirrors_csv() {
        let table =
            vec![FieldLines { field_t: 0.25, phase: Phase::Afm, lines: vec![sample_line()] }];
        let json = line_table_json(&table, None, "cafe");
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed["schema_version"], 1);
        assert_eq!(parsed["config_hash"], "cafe");
        let row = &parsed["rows"][0];
        assert_eq!(row["field_T"], 0.25);
        assert_eq!(row["polarisation"], "pi");
        assert_eq!(row["pair_kind"], "none");
        assert_eq!(row["allowed"], true);
        // unmodeled marker keeps valid JSON via the quoted nan
        let marker = vec![FieldLines { field_t: 1.5, phase: Phase::Intermediate, lines: vec![] }];
        let mj = line_table_json(&marker, None, "cafe");
        let parsed: serde_json::Value = serde_json::from_str(&mj).unwrap();
        assert_eq!(parsed["rows"][0]["frequency_GHz"], "nan");
        assert_eq!(parsed["rows"][0]["class"], "unmodeled");
    }

    #[test]
    fn render_grid_layout() {
        let map = SpectrumMap {
            field_t: vec![0.0, 0.1],
            frequency_ghz: vec![-1.0, 0.0, 1.0],
            intensity: vec![vec![0.0, 0.5, 0.0], vec![0.1, 0.2, 0.3]],
        };
        let csv = render_csv(&map, "h");
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[2], "field_T,-1.00000000e0,0.00000000e0,1.00000000e0");
        assert_eq!(lines[3], "0.00000000e0,0.00000000e0,5.00000000e-1,0.00000000e0");
        assert_eq!(lines.len(), 5);
        let json = render_json(&map, "h");
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed["intensity"][1][2], 0.3);
    }

    #[test]
    fn levels_layout() {
        let rows: Vec<LevelRow> = vec![
            (0.0, "1".to_string(), Some((0, 0.0))),
            (0.0, "1".to_string(), Some((1, 57.0951))),
            (1.5, String::new(), None),
        ];
        let csv = levels_csv(&rows, &["g_ground = (2.9, 1.0, 2.9)".to_string()], "h");
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[2], "# g_ground = (2.9, 1.0, 2.9)");
        assert_eq!(lines[3], "field_T,sublattice,level,energy_GHz");
        assert_eq!(lines[4], "0.00000000e0,1,0,0.00000000e0");
        assert_eq!(lines[6], "1.50000000e0,none,nan,nan");
        let json = levels_json(&rows, &[], "h");
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed["rows"][1]["level"], 1);
    }
}
