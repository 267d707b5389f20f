//! Spectral assembly: optical selection rules, magnetic phase intervals along
//! a field sweep, per-field transition line lists, and rendered intensity maps.
//!
//! Output frequencies are relative, with zero pinned to the zero-field main
//! line that is allowed in pi polarisation.

use crate::error::{CoreError, Result};
use crate::ion::{
    doublet_g_factors, single_ion_lines, DoubletG, IonSystem, Irrep, DEGENERACY_TOL_GHZ,
};
use crate::lattice::{
    exchange_tensor, mean_field_b_axis_pm, mean_field_pair_member, mean_field_single,
    ExchangeConstants, FieldAxis, PairKind, Phase,
};
use crate::pair::{build_pair, project_ion, two_nd_lines, EffectiveIon};

/// Light polarisation relative to the c axis: pi parallel, sigma perpendicular.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Polarisation {
    Pi,
    Sigma,
}

impl std::fmt::Display for Polarisation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Polarisation::Pi => "pi",
            Polarisation::Sigma => "sigma",
        })
    }
}

/// Symmetry label of a two-ion product state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairIrrep {
    G1,
    G2,
}

impl std::fmt::Display for PairIrrep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PairIrrep::G1 => "G1",
            PairIrrep::G2 => "G2",
        })
    }
}

/// Endpoint label for the selection rule, one ion or a coupled pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateSymmetry {
    Single(Irrep),
    Pair(PairIrrep),
}

/// Product of two single-ion labels: equal factors fuse to G2, unequal to G1.
pub fn pair_product(a: Irrep, b: Irrep) -> PairIrrep {
    if a == b {
        PairIrrep::G2
    } else {
        PairIrrep::G1
    }
}

/// Electric-dipole polarisation of a transition: matching labels absorb sigma,
/// crossing labels absorb pi. Both endpoints must be the same kind.
pub fn selection_rule(initial: StateSymmetry, fin: StateSymmetry) -> Result<Polarisation> {
    let same = match (initial, fin) {
        (StateSymmetry::Single(a), StateSymmetry::Single(b)) => a == b,
        (StateSymmetry::Pair(a), StateSymmetry::Pair(b)) => a == b,
        _ => {
            return Err(CoreError::argument(
                "selection rule needs two single-ion or two pair labels, not a mix",
            ))
        }
    };
    Ok(if same { Polarisation::Sigma } else { Polarisation::Pi })
}

/// Phase-transition fields in Tesla for each sweep axis. A c-axis sweep passes
/// ordered, intermediate, and polarized regions; a b-axis sweep has a single
/// transition. A boundary value itself still belongs to the lower phase.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseBoundaries {
    pub c: [f64; 2],
    pub b: f64,
}

impl Default for PhaseBoundaries {
    fn default() -> Self {
        Self { c: [1.1, 2.3], b: 1.72 }
    }
}

impl PhaseBoundaries {
    pub fn validate(&self) -> Result<()> {
        if !(self.c[0] >= 0.0 && self.c[0] <= self.c[1]) {
            return Err(CoreError::config(format!(
                "c-axis boundaries must be ascending and non-negative, got {:?}",
                self.c
            )));
        }
        if self.b < 0.0 {
            return Err(CoreError::config(format!(
                "b-axis boundary must be non-negative, got {}",
                self.b
            )));
        }
        Ok(())
    }
}

/// Magnetic phase at one field value; sign of the field is irrelevant.
pub fn phase_of(b_t: f64, axis: FieldAxis, pb: &PhaseBoundaries) -> Phase {
    let b = b_t.abs();
    match axis {
        FieldAxis::C => {
            if b <= pb.c[0] {
                Phase::Afm
            } else if b <= pb.c[1] {
                Phase::Intermediate
            } else {
                Phase::Pm
            }
        }
        FieldAxis::B => {
            if b <= pb.b {
                Phase::Afm
            } else {
                Phase::Pm
            }
        }
    }
}

/// Which line families a sweep carries.
#[derive(Clone, Copy, Debug)]
pub struct IncludeFlags {
    pub main: bool,
    pub two_nd: bool,
    pub satellite: bool,
    pub hot_band: bool,
}

impl Default for IncludeFlags {
    fn default() -> Self {
        Self { main: true, two_nd: true, satellite: true, hot_band: true }
    }
}

/// Full sweep description. Satellite rows appear only when offsets are
/// configured; hot-band rows are restricted to sigma polarisation under
/// b-axis fields unless `hot_band_everywhere` lifts the gate.
#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub field_axis: FieldAxis,
    pub field_values_t: Vec<f64>,
    pub boundaries: PhaseBoundaries,
    pub polarisations: Vec<Polarisation>,
    pub satellite_offsets_ghz: Vec<f64>,
    pub linewidth_ghz: f64,
    pub include: IncludeFlags,
    pub hot_band_everywhere: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            field_axis: FieldAxis::C,
            field_values_t: Vec::new(),
            boundaries: PhaseBoundaries::default(),
            polarisations: vec![Polarisation::Pi, Polarisation::Sigma],
            satellite_offsets_ghz: Vec::new(),
            linewidth_ghz: 1.0,
            include: IncludeFlags::default(),
            hot_band_everywhere: false,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        self.boundaries.validate()?;
        for w in self.field_values_t.windows(2) {
            if !(w[1] > w[0]) {
                return Err(CoreError::config(format!(
                    "field values must be strictly ascending, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        if self.field_values_t.iter().any(|b| !b.is_finite()) {
            return Err(CoreError::config("field values must be finite"));
        }
        if !(self.linewidth_ghz > 0.0 && self.linewidth_ghz.is_finite()) {
            return Err(CoreError::config(format!(
                "linewidth must be positive, got {}",
                self.linewidth_ghz
            )));
        }
        if self.polarisations.is_empty() {
            return Err(CoreError::config("at least one polarisation is required"));
        }
        let mut pols = self.polarisations.clone();
        pols.sort();
        pols.dedup();
        if pols.len() != self.polarisations.len() {
            return Err(CoreError::config("polarisations must be unique"));
        }
        if self.satellite_offsets_ghz.iter().any(|o| !o.is_finite()) {
            return Err(CoreError::config("satellite offsets must be finite"));
        }
        Ok(())
    }
}

/// Taxonomy of emitted lines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LineClass {
    Main,
    TwoNd,
    Satellite,
    HotBand,
}

impl std::fmt::Display for LineClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LineClass::Main => "main",
            LineClass::TwoNd => "two_nd",
            LineClass::Satellite => "satellite",
            LineClass::HotBand => "hot_band",
        })
    }
}

/// Which antiferromagnetic sublattice hosts the transition; lines identical on
/// both collapse to `Both`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sublattice {
    One,
    Two,
    Both,
}

impl std::fmt::Display for Sublattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Sublattice::One => "1",
            Sublattice::Two => "2",
            Sublattice::Both => "both",
        })
    }
}

/// One candidate absorption line at one field. `allowed` records whether the
/// polarisation matches the selection rule (or the rule is broken by state
/// mixing); disallowed rows stay in the table for inspection but carry no
/// rendered intensity. `approx` marks soft assignments: out-of-plane pair
/// rules and ambiguous pair-state identifications.
#[derive(Clone, Debug)]
pub struct TransitionLine {
    pub frequency_ghz: f64,
    pub polarisation: Polarisation,
    pub class: LineClass,
    pub sublattice: Sublattice,
    pub pair_kind: Option<PairKind>,
    pub allowed: bool,
    pub approx: bool,
    pub initial_sym: StateSymmetry,
    pub final_sym: StateSymmetry,
    pub mixed: bool,
}

/// Line list at one field value. The intermediate phase carries no model:
/// its entries keep the phase marker and an empty line list.
#[derive(Clone, Debug)]
pub struct FieldLines {
    pub field_t: f64,
    pub phase: Phase,
    pub lines: Vec<TransitionLine>,
}

/// Two lines this close in frequency with identical labels on opposite
/// sublattices are one physical line.
pub const MERGE_TOL_GHZ: f64 = 1e-6;

fn add3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn neg3(a: [f64; 3]) -> [f64; 3] {
    [-a[0], -a[1], -a[2]]
}

fn applied_field(axis: FieldAxis, b_t: f64) -> [f64; 3] {
    match axis {
        FieldAxis::C => [0.0, 0.0, b_t],
        FieldAxis::B => [0.0, b_t, 0.0],
    }
}

/// Ground-doublet g-factors and the zero-field reference frequency shared by
/// every field point of a sweep.
struct ReferenceContext {
    g: DoubletG,
    f_ref: f64,
}

impl ReferenceContext {
    fn prepare(sys: &IonSystem, xc: &ExchangeConstants) -> Result<Self> {
        let es0 = sys.eigensystem([0.0; 3])?;
        let z0 = sys.lowest_doublet(&es0, 0)?;
        let g = doublet_g_factors(&es0, z0, sys.moments())?;

        let mf = mean_field_single(xc, Phase::Afm, 1, g.g_c)?;
        let es = sys.eigensystem(mf)?;
        let z = sys.lowest_doublet(&es, 0)?;
        let r = sys.lowest_doublet(&es, 1)?;
        let mut pi_freq = Vec::new();
        for line in single_ion_lines(&es, z, r)? {
            if line.initial != z.0 {
                continue;
            }
            let (i_sym, f_sym) = (line.initial_sym, line.upper_sym);
            if i_sym.is_mixed() || f_sym.is_mixed() {
                return Err(CoreError::contract(
                    "zero-field reference states mix symmetry classes",
                ));
            }
            let i_ir = i_sym
                .dominant()
                .ok_or_else(|| CoreError::contract("zero-field reference state has no class"))?;
            let f_ir = f_sym
                .dominant()
                .ok_or_else(|| CoreError::contract("zero-field reference state has no class"))?;
            if selection_rule(StateSymmetry::Single(i_ir), StateSymmetry::Single(f_ir))?
                == Polarisation::Pi
            {
                pi_freq.push(line.frequency_ghz);
            }
        }
        if pi_freq.len() != 1 {
            return Err(CoreError::contract(format!(
                "expected exactly one pi-allowed zero-field main line, found {}",
                pi_freq.len()
            )));
        }
        Ok(Self { g, f_ref: pi_freq[0] })
    }
}

struct SingleComputation {
    sublattice: Sublattice,
    mean_field: [f64; 3],
}

fn single_computations(
    phase: Phase,
    axis: FieldAxis,
    xc: &ExchangeConstants,
    g: &DoubletG,
) -> Result<Vec<SingleComputation>> {
    Ok(match (phase, axis) {
        (Phase::Afm, _) => vec![
            SingleComputation {
                sublattice: Sublattice::One,
                mean_field: mean_field_single(xc, Phase::Afm, 1, g.g_c)?,
            },
            SingleComputation {
                sublattice: Sublattice::Two,
                mean_field: mean_field_single(xc, Phase::Afm, 2, g.g_c)?,
            },
        ],
        (Phase::Pm, FieldAxis::C) => vec![SingleComputation {
            sublattice: Sublattice::Both,
            mean_field: mean_field_single(xc, Phase::Pm, 1, g.g_c)?,
        }],
        (Phase::Pm, FieldAxis::B) => vec![SingleComputation {
            sublattice: Sublattice::Both,
            mean_field: mean_field_b_axis_pm(xc, g.g_b)?,
        }],
        (Phase::Intermediate, _) => {
            return Err(CoreError::unmodeled("no line model for the intermediate phase"))
        }
    })
}

/// Mean-field configurations carrying independent single-ion spectra in one
/// phase: each entry is the hosting sublattice and the static field its sites
/// see before the applied field is added.
pub fn site_mean_fields(
    phase: Phase,
    axis: FieldAxis,
    xc: &ExchangeConstants,
    g: &DoubletG,
) -> Result<Vec<(Sublattice, [f64; 3])>> {
    Ok(single_computations(phase, axis, xc, g)?
        .into_iter()
        .map(|c| (c.sublattice, c.mean_field))
        .collect())
}

struct PairComputation {
    sublattice: Sublattice,
    member_fields: [[f64; 3]; 2],
}

fn pair_computations(
    kind: PairKind,
    phase: Phase,
    axis: FieldAxis,
    xc: &ExchangeConstants,
    g: &DoubletG,
) -> Result<Vec<PairComputation>> {
    Ok(match (phase, axis) {
        (Phase::Afm, _) => {
            let m1 = mean_field_pair_member(xc, kind, Phase::Afm, 1, g.g_c)?;
            let m2 = mean_field_pair_member(xc, kind, Phase::Afm, 2, g.g_c)?;
            match kind {
                // members sit on opposite sublattices; swapping them mirrors
                // the pair, so one computation covers both assignments
                PairKind::InPlane => vec![PairComputation {
                    sublattice: Sublattice::Both,
                    member_fields: [m1, m2],
                }],
                // members share a sublattice; the mirrored pair lives on the
                // other one with every moment reversed
                PairKind::OutOfPlane => vec![
                    PairComputation { sublattice: Sublattice::One, member_fields: [m1, m2] },
                    PairComputation {
                        sublattice: Sublattice::Two,
                        member_fields: [neg3(m1), neg3(m2)],
                    },
                ],
            }
        }
        (Phase::Pm, FieldAxis::C) => {
            let m1 = mean_field_pair_member(xc, kind, Phase::Pm, 1, g.g_c)?;
            let m2 = mean_field_pair_member(xc, kind, Phase::Pm, 2, g.g_c)?;
            vec![PairComputation { sublattice: Sublattice::Both, member_fields: [m1, m2] }]
        }
        // the polarized transverse structure has no bond-resolved correction;
        // both members see the full site field
        (Phase::Pm, FieldAxis::B) => {
            let m = mean_field_b_axis_pm(xc, g.g_b)?;
            vec![PairComputation { sublattice: Sublattice::Both, member_fields: [m, m] }]
        }
        (Phase::Intermediate, _) => {
            return Err(CoreError::unmodeled("no pair model for the intermediate phase"))
        }
    })
}

fn project_member(sys: &IonSystem, b_total: [f64; 3]) -> Result<EffectiveIon> {
    let es = sys.eigensystem(b_total)?;
    let z = sys.lowest_doublet(&es, 0)?;
    let r = sys.lowest_doublet(&es, 1)?;
    project_ion(sys, &es, z, r)
}

fn class_rank(c: LineClass) -> u8 {
    match c {
        LineClass::Main => 0,
        LineClass::TwoNd => 1,
        LineClass::Satellite => 2,
        LineClass::HotBand => 3,
    }
}

fn subl_rank(s: Sublattice) -> u8 {
    match s {
        Sublattice::One => 0,
        Sublattice::Two => 1,
        Sublattice::Both => 2,
    }
}

fn pk_rank(p: Option<PairKind>) -> u8 {
    match p {
        None => 0,
        Some(PairKind::InPlane) => 1,
        Some(PairKind::OutOfPlane) => 2,
    }
}

fn pol_rank(p: Polarisation) -> u8 {
    match p {
        Polarisation::Pi => 0,
        Polarisation::Sigma => 1,
    }
}

fn same_labels(a: &TransitionLine, b: &TransitionLine) -> bool {
    a.class == b.class
        && a.polarisation == b.polarisation
        && a.pair_kind == b.pair_kind
        && a.allowed == b.allowed
        && a.approx == b.approx
        && a.mixed == b.mixed
}

/// Fuse rows that differ only by sublattice and sit within the merge
/// tolerance; symmetry labels of the lower-ranked row win (the two are
/// related by time reversal, which conjugates the classes). Degenerate lines
/// can put several rows per sublattice in one run, so runs are paired off by
/// count rather than adjacent-only.
fn merge_mirrored(mut rows: Vec<TransitionLine>) -> Vec<TransitionLine> {
    rows.sort_by(|a, b| {
        class_rank(a.class)
            .cmp(&class_rank(b.class))
            .then(pol_rank(a.polarisation).cmp(&pol_rank(b.polarisation)))
            .then(pk_rank(a.pair_kind).cmp(&pk_rank(b.pair_kind)))
            .then(a.allowed.cmp(&b.allowed))
            .then(a.approx.cmp(&b.approx))
            .then(a.mixed.cmp(&b.mixed))
            .then(a.frequency_ghz.total_cmp(&b.frequency_ghz))
            .then(subl_rank(a.sublattice).cmp(&subl_rank(b.sublattice)))
    });
    let mut out: Vec<TransitionLine> = Vec::with_capacity(rows.len());
    let mut i = 0;
    while i < rows.len() {
        let mut j = i + 1;
        while j < rows.len()
            && same_labels(&rows[i], &rows[j])
            && (rows[j].frequency_ghz - rows[j - 1].frequency_ghz).abs() <= MERGE_TOL_GHZ
        {
            j += 1;
        }
        let run = &rows[i..j];
        let n1 = run.iter().filter(|r| r.sublattice == Sublattice::One).count();
        let n2 = run.iter().filter(|r| r.sublattice == Sublattice::Two).count();
        let fused = n1.min(n2);
        let mut taken_one = 0;
        let mut taken_two = 0;
        for r in run {
            match r.sublattice {
                Sublattice::One if taken_one < fused => {
                    taken_one += 1;
                    let mut m = r.clone();
                    m.sublattice = Sublattice::Both;
                    out.push(m);
                }
                Sublattice::Two if taken_two < fused => {
                    taken_two += 1;
                }
                _ => out.push(r.clone()),
            }
        }
        i = j;
    }
    out.sort_by(|a, b| {
        a.frequency_ghz
            .total_cmp(&b.frequency_ghz)
            .then(class_rank(a.class).cmp(&class_rank(b.class)))
            .then(pol_rank(a.polarisation).cmp(&pol_rank(b.polarisation)))
            .then(subl_rank(a.sublattice).cmp(&subl_rank(b.sublattice)))
            .then(pk_rank(a.pair_kind).cmp(&pk_rank(b.pair_kind)))
            .then(a.allowed.cmp(&b.allowed))
    });
    out
}

/// All candidate lines at one field value. The intermediate phase returns the
/// marker entry with no lines; otherwise main, pair, satellite, and hot-band
/// families are assembled per the include flags, each polarisation row
/// carrying its selection-rule verdict.
pub fn line_list(
    b_t: f64,
    cfg: &SweepConfig,
    sys: &IonSystem,
    xc: &ExchangeConstants,
) -> Result<FieldLines> {
    cfg.validate()?;
    let phase = phase_of(b_t, cfg.field_axis, &cfg.boundaries);
    if phase == Phase::Intermediate {
        return Ok(FieldLines { field_t: b_t, phase, lines: Vec::new() });
    }
    let ctx = ReferenceContext::prepare(sys, xc)?;
    let b_applied = applied_field(cfg.field_axis, b_t);
    let mut pols = cfg.polarisations.clone();
    pols.sort();

    let mut rows: Vec<TransitionLine> = Vec::new();
    let mut main_rows: Vec<TransitionLine> = Vec::new();

    for comp in single_computations(phase, cfg.field_axis, xc, &ctx.g)? {
        let es = sys.eigensystem(add3(b_applied, comp.mean_field))?;
        let z = sys.lowest_doublet(&es, 0)?;
        let r = sys.lowest_doublet(&es, 1)?;
        let splitting = es.energies[z.1] - es.energies[z.0];
        for line in single_ion_lines(&es, z, r)? {
            let class = if line.initial == z.0 {
                LineClass::Main
            } else {
                LineClass::HotBand
            };
            if class == LineClass::HotBand
                && (!cfg.include.hot_band || splitting <= DEGENERACY_TOL_GHZ)
            {
                continue;
            }
            let initial_sym = StateSymmetry::Single(line.initial_sym.leaning());
            let final_sym = StateSymmetry::Single(line.upper_sym.leaning());
            let mixed = line.initial_sym.is_mixed()
                || line.upper_sym.is_mixed()
                || line.initial_sym.dominant().is_none()
                || line.upper_sym.dominant().is_none();
            let natural = selection_rule(initial_sym, final_sym)?;
            for &pol in &pols {
                if class == LineClass::HotBand
                    && !cfg.hot_band_everywhere
                    && !(cfg.field_axis == FieldAxis::B && pol == Polarisation::Sigma)
                {
                    continue;
                }
                let row = TransitionLine {
                    frequency_ghz: line.frequency_ghz - ctx.f_ref,
                    polarisation: pol,
                    class,
                    sublattice: comp.sublattice,
                    pair_kind: None,
                    allowed: mixed || natural == pol,
                    approx: false,
                    initial_sym,
                    final_sym,
                    mixed,
                };
                if class == LineClass::Main {
                    main_rows.push(row);
                } else {
                    rows.push(row);
                }
            }
        }
    }

    if cfg.include.two_nd {
        let tensor_g = (ctx.g.g_a, ctx.g.g_b, ctx.g.g_c);
        for kind in [PairKind::InPlane, PairKind::OutOfPlane] {
            let tensor = exchange_tensor(xc, kind, tensor_g)?;
            for comp in pair_computations(kind, phase, cfg.field_axis, xc, &ctx.g)? {
                let ion1 = project_member(sys, add3(b_applied, comp.member_fields[0]))?;
                let ion2 = project_member(sys, add3(b_applied, comp.member_fields[1]))?;
                let ps = build_pair(&ion1, &ion2, &tensor)?;
                for line in two_nd_lines(&ps)? {
                    let initial_sym = StateSymmetry::Pair(line.initial_irrep);
                    let final_sym = StateSymmetry::Pair(line.final_irrep);
                    let natural = selection_rule(initial_sym, final_sym)?;
                    for &pol in &pols {
                        rows.push(TransitionLine {
                            frequency_ghz: line.frequency_ghz - ctx.f_ref,
                            polarisation: pol,
                            class: LineClass::TwoNd,
                            sublattice: comp.sublattice,
                            pair_kind: Some(kind),
                            allowed: line.mixed || natural == pol,
                            approx: line.ambiguous || kind == PairKind::OutOfPlane,
                            initial_sym,
                            final_sym,
                            mixed: line.mixed,
                        });
                    }
                }
            }
        }
    }

    if cfg.include.satellite {
        for &offset in &cfg.satellite_offsets_ghz {
            for main in &main_rows {
                let mut sat = main.clone();
                sat.frequency_ghz += offset;
                sat.class = LineClass::Satellite;
                rows.push(sat);
            }
        }
    }
    if cfg.include.main {
        rows.append(&mut main_rows);
    }

    Ok(FieldLines { field_t: b_t, phase, lines: merge_mirrored(rows) })
}

/// Line lists over the configured field grid, in field order.
pub fn sweep(cfg: &SweepConfig, sys: &IonSystem, xc: &ExchangeConstants) -> Result<Vec<FieldLines>> {
    cfg.validate()?;
    cfg.field_values_t.iter().map(|&b| line_list(b, cfg, sys, xc)).collect()
}

/// Dense absorption map over a field sweep: rows follow `field_t`, columns the
/// uniform `frequency_ghz` grid.
#[derive(Clone, Debug)]
pub struct SpectrumMap {
    pub field_t: Vec<f64>,
    pub frequency_ghz: Vec<f64>,
    pub intensity: Vec<Vec<f64>>,
}

/// Half of the area of an untruncated Lorentzian lies within one half-width;
/// atan(12) of it within the six-linewidth window kept here.
const LORENTZ_WINDOW_HALFWIDTHS: f64 = 6.0;

fn lorentz_norm() -> f64 {
    (2.0 / std::f64::consts::PI) * (2.0 * LORENTZ_WINDOW_HALFWIDTHS).atan()
}

/// Sum of truncated unit-area Lorentzian profiles over the allowed lines.
/// Disallowed rows are skipped; approx-flagged rows enter at half weight.
/// The grid spans all allowed lines plus the truncation window at a step of
/// one twelfth of the linewidth.
pub fn render(table: &[FieldLines], cfg: &SweepConfig) -> Result<SpectrumMap> {
    cfg.validate()?;
    let lw = cfg.linewidth_ghz;
    let window = LORENTZ_WINDOW_HALFWIDTHS * lw;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for fl in table {
        for line in fl.lines.iter().filter(|l| l.allowed) {
            lo = lo.min(line.frequency_ghz);
            hi = hi.max(line.frequency_ghz);
        }
    }
    let field_t: Vec<f64> = table.iter().map(|fl| fl.field_t).collect();
    if lo > hi {
        return Ok(SpectrumMap {
            intensity: vec![Vec::new(); field_t.len()],
            field_t,
            frequency_ghz: Vec::new(),
        });
    }
    let step = lw / 12.0;
    let start = lo - window;
    let count = ((hi + window - start) / step).ceil() as usize + 1;
    let frequency_ghz: Vec<f64> = (0..count).map(|j| start + j as f64 * step).collect();
    let gamma = lw / 2.0;
    let norm = lorentz_norm();
    let profile = |x: f64| {
        if x.abs() > window {
            0.0
        } else {
            gamma / (std::f64::consts::PI * (x * x + gamma * gamma)) / norm
        }
    };
    let intensity = table
        .iter()
        .map(|fl| {
            frequency_ghz
                .iter()
                .map(|&f| {
                    fl.lines
                        .iter()
                        .filter(|l| l.allowed)
                        .map(|l| {
                            let w = if l.approx { 0.5 } else { 1.0 };
                            w * profile(f - l.frequency_ghz)
                        })
                        .sum()
                })
                .collect()
        })
        .collect();
    Ok(SpectrumMap { field_t, frequency_ghz, intensity })
}
