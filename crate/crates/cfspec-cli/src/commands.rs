//! Subcommand implementations. Each returns the complete output text; the
//! caller decides where it goes.

use cfspec::{
    doublet_g_factors, line_list, phase_of, render, site_mean_fields, sweep, CoreError,
    ExchangeConstants, FieldAxis, IonSystem, LineClass, Phase, SweepConfig,
};

use crate::config::{FormatToken, RunConfig};
use crate::table;

/// Everything a command needs, derived once from the validated config.
pub struct Resolved {
    pub sys: IonSystem,
    pub xc: ExchangeConstants,
    pub sweep_cfg: SweepConfig,
    pub format: FormatToken,
    pub hash: String,
}

impl Resolved {
    pub fn new(cfg: &RunConfig) -> Result<Self, CoreError> {
        let spec = cfg.ion_spec()?;
        let sys = IonSystem::new(spec)?;
        Ok(Self {
            sys,
            xc: cfg.exchange(),
            sweep_cfg: cfg.sweep_config(),
            format: cfg.output.format,
            hash: cfg.hash(),
        })
    }

    fn applied(&self, b_t: f64) -> [f64; 3] {
        match self.sweep_cfg.field_axis {
            FieldAxis::C => [0.0, 0.0, b_t],
            FieldAxis::B => [0.0, b_t, 0.0],
        }
    }

    /// The grid for grid-driven commands; explicit --field wins.
    pub fn fields(&self, single: Option<f64>) -> Result<Vec<f64>, CoreError> {
        if let Some(b) = single {
            if !b.is_finite() {
                return Err(CoreError::config("--field must be finite"));
            }
            return Ok(vec![b]);
        }
        if self.sweep_cfg.field_values_t.is_empty() {
            return Err(CoreError::config(
                "no field grid: set sweep.field_values_t or field_start_t/stop_t/step_t, or pass --field",
            ));
        }
        Ok(self.sweep_cfg.field_values_t.clone())
    }
}

/// Explicitly requested single field in the intermediate phase is an error;
/// sweeps mark such rows instead.
fn reject_unmodeled_single(res: &Resolved, b_t: f64) -> Result<(), CoreError> {
    if phase_of(b_t, res.sweep_cfg.field_axis, &res.sweep_cfg.boundaries) == Phase::Intermediate {
        return Err(CoreError::unmodeled(format!(
            "{b_t} T along {} lies in the intermediate phase; no model applies",
            res.sweep_cfg.field_axis
        )));
    }
    Ok(())
}

/// Single-ion eigenvalues over the field grid, one block per mean-field
/// configuration, with the zero-field doublet g-factors in the header.
pub fn cmd_levels(res: &Resolved, single_field: Option<f64>) -> Result<String, CoreError> {
    if let Some(b) = single_field {
        reject_unmodeled_single(res, b)?;
    }
    let es0 = res.sys.eigensystem([0.0; 3])?;
    let z0 = res.sys.lowest_doublet(&es0, 0)?;
    let r0 = res.sys.lowest_doublet(&es0, 1)?;
    let gg = doublet_g_factors(&es0, z0, res.sys.moments())?;
    let gr = doublet_g_factors(&es0, r0, res.sys.moments())?;
    let g_lines = vec![
        format!(
            "g_ground = ({}, {}, {})",
            table::fmt9(gg.g_a),
            table::fmt9(gg.g_b),
            table::fmt9(gg.g_c)
        ),
        format!(
            "g_excited = ({}, {}, {})",
            table::fmt9(gr.g_a),
            table::fmt9(gr.g_b),
            table::fmt9(gr.g_c)
        ),
    ];

    let mut rows: Vec<table::LevelRow> = Vec::new();
    for &b in &res.fields(single_field)? {
        let phase = phase_of(b, res.sweep_cfg.field_axis, &res.sweep_cfg.boundaries);
        if phase == Phase::Intermediate {
            rows.push((b, String::new(), None));
            continue;
        }
        for (sub, mf) in site_mean_fields(phase, res.sweep_cfg.field_axis, &res.xc, &gg)? {
            let applied = res.applied(b);
            let total = [applied[0] + mf[0], applied[1] + mf[1], applied[2] + mf[2]];
            let es = res.sys.eigensystem(total)?;
            for (i, &e) in es.energies.iter().enumerate() {
                rows.push((b, sub.to_string(), Some((i, e))));
            }
        }
    }
    Ok(match res.format {
        FormatToken::Csv => table::levels_csv(&rows, &g_lines, &res.hash),
        FormatToken::Json => table::levels_json(&rows, &g_lines, &res.hash),
    })
}

fn table_for_fields(
    res: &Resolved,
    fields: &[f64],
) -> Result<Vec<cfspec::FieldLines>, CoreError> {
    fields.iter().map(|&b| line_list(b, &res.sweep_cfg, &res.sys, &res.xc)).collect()
}

/// Full line table at one field (default 0 T).
pub fn cmd_lines(res: &Resolved, field: Option<f64>) -> Result<String, CoreError> {
    let b = field.unwrap_or(0.0);
    reject_unmodeled_single(res, b)?;
    let table_rows = table_for_fields(res, &[b])?;
    Ok(serialize_table(res, &table_rows, None))
}

/// Two-ion lines only, at one field (default 0 T).
pub fn cmd_pair_lines(res: &Resolved, field: Option<f64>) -> Result<String, CoreError> {
    let b = field.unwrap_or(0.0);
    reject_unmodeled_single(res, b)?;
    let table_rows = table_for_fields(res, &[b])?;
    Ok(serialize_table(res, &table_rows, Some(LineClass::TwoNd)))
}

/// Line table over the configured grid; intermediate fields become marker rows.
pub fn cmd_sweep(res: &Resolved) -> Result<String, CoreError> {
    let fields = res.fields(None)?;
    let mut cfg = res.sweep_cfg.clone();
    cfg.field_values_t = fields;
    let table_rows = sweep(&cfg, &res.sys, &res.xc)?;
    Ok(serialize_table(res, &table_rows, None))
}

/// Dense intensity map over the configured grid.
pub fn cmd_render(res: &Resolved) -> Result<String, CoreError> {
    let fields = res.fields(None)?;
    let mut cfg = res.sweep_cfg.clone();
    cfg.field_values_t = fields;
    let table_rows = sweep(&cfg, &res.sys, &res.xc)?;
    let map = render(&table_rows, &cfg)?;
    Ok(match res.format {
        FormatToken::Csv => table::render_csv(&map, &res.hash),
        FormatToken::Json => table::render_json(&map, &res.hash),
    })
}

fn serialize_table(
    res: &Resolved,
    rows: &[cfspec::FieldLines],
    filter: Option<LineClass>,
) -> String {
    match res.format {
        FormatToken::Csv => table::line_table_csv(rows, filter, &res.hash),
        FormatToken::Json => table::line_table_json(rows, filter, &res.hash),
    }
}
