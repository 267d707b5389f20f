//! Magnetic structure: exchange constants, sublattice moments, mean fields,
//! and the pair exchange tensors.
//!
//! Exchange constants are in Kelvin (energy over k_B). Mean fields come out in
//! Tesla, exchange tensors in GHz per squared Bohr magneton. The ordered ground
//! structure has in-plane neighbors antiparallel and out-of-plane neighbors
//! parallel, moments along ±c.

use crate::error::{CoreError, Result};
use crate::units::{KB_GHZ_PER_K, KB_OVER_MUB_T_PER_K};

/// Nearest-neighbor exchange constants in Kelvin. `j_par` couples out-of-plane
/// neighbors (along c), `j_perp` in-plane neighbors; the primed constants are
/// the transverse (ab-plane moment component) couplings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExchangeConstants {
    pub j_par: f64,
    pub j_perp: f64,
    pub j_par_prime: f64,
    pub j_perp_prime: f64,
}

impl Default for ExchangeConstants {
    fn default() -> Self {
        Self { j_par: 0.07, j_perp: -0.65, j_par_prime: -0.1, j_perp_prime: -0.1 }
    }
}

/// Magnetic phase along a field sweep. The intermediate phase has no model;
/// operations that need a spin configuration refuse it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    Afm,
    Intermediate,
    Pm,
}

impl std::fmt::Display for Phase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Phase::Afm => "afm",
            Phase::Intermediate => "intermediate",
            Phase::Pm => "pm",
        })
    }
}

/// Which neighbor bond a coupled pair sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairKind {
    InPlane,
    OutOfPlane,
}

impl std::fmt::Display for PairKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PairKind::InPlane => "in_plane",
            PairKind::OutOfPlane => "out_of_plane",
        })
    }
}

/// Crystallographic axis of the applied field (a-axis fields are not modeled).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldAxis {
    C,
    B,
}

impl std::fmt::Display for FieldAxis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FieldAxis::C => "c",
            FieldAxis::B => "b",
        })
    }
}

/// Saturated moment directions of the two sublattices, in Bohr magnetons.
#[derive(Clone, Copy, Debug)]
pub struct SublatticeConfig {
    pub phase: Phase,
    pub field_axis: FieldAxis,
    pub moments: [[f64; 3]; 2],
}

/// Diagonal pair-coupling tensor in GHz per squared Bohr magneton.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExchangeTensor {
    pub xx: f64,
    pub yy: f64,
    pub zz: f64,
}

impl ExchangeTensor {
    pub fn diag(&self) -> [f64; 3] {
        [self.xx, self.yy, self.zz]
    }
}

fn require_modeled(phase: Phase) -> Result<()> {
    if phase == Phase::Intermediate {
        return Err(CoreError::unmodeled("the intermediate phase has no spin configuration model"));
    }
    Ok(())
}

fn check_member(member: u8) -> Result<f64> {
    match member {
        1 => Ok(1.0),
        2 => Ok(-1.0),
        _ => Err(CoreError::argument(format!("sublattice/member must be 1 or 2, got {member}"))),
    }
}

fn check_g(g: f64, name: &str) -> Result<()> {
    if g <= 0.0 {
        return Err(CoreError::config(format!("{name} must be positive, got {g}")));
    }
    Ok(())
}

/// Mean field on a lone ion from all eight ordered neighbors, along c.
/// Magnitude (2J_par ∓ 4J_perp)·(k_B/μ_B)/g_c with the minus sign in the AFM
/// phase; sublattice 2 sees the negated field there, both sublattices match
/// in the PM phase.
pub fn mean_field_single(
    xc: &ExchangeConstants,
    phase: Phase,
    sublattice: u8,
    g_c: f64,
) -> Result<[f64; 3]> {
    require_modeled(phase)?;
    check_g(g_c, "g_c")?;
    let side = check_member(sublattice)?;
    let coef = match phase {
        Phase::Afm => 2.0 * xc.j_par - 4.0 * xc.j_perp,
        Phase::Pm => 2.0 * xc.j_par + 4.0 * xc.j_perp,
        Phase::Intermediate => unreachable!(),
    };
    let sign = if phase == Phase::Afm { side } else { 1.0 };
    Ok([0.0, 0.0, sign * coef * KB_OVER_MUB_T_PER_K / g_c])
}

/// Mean field on one member of an embedded pair; the partner's bond is carved
/// out of the neighbor sum. In-plane pairs lose one in-plane bond
/// ((2J_par ∓ 3J_perp), members on opposite sublattices in the AFM phase);
/// out-of-plane pairs lose one out-of-plane bond ((J_par ∓ 4J_perp), members
/// on the same sublattice, so their fields always match).
pub fn mean_field_pair_member(
    xc: &ExchangeConstants,
    kind: PairKind,
    phase: Phase,
    member: u8,
    g_c: f64,
) -> Result<[f64; 3]> {
    require_modeled(phase)?;
    check_g(g_c, "g_c")?;
    let side = check_member(member)?;
    let afm = phase == Phase::Afm;
    let coef = match (kind, afm) {
        (PairKind::InPlane, true) => 2.0 * xc.j_par - 3.0 * xc.j_perp,
        (PairKind::InPlane, false) => 2.0 * xc.j_par + 3.0 * xc.j_perp,
        (PairKind::OutOfPlane, true) => xc.j_par - 4.0 * xc.j_perp,
        (PairKind::OutOfPlane, false) => xc.j_par + 4.0 * xc.j_perp,
    };
    let sign = if afm && kind == PairKind::InPlane { side } else { 1.0 };
    Ok([0.0, 0.0, sign * coef * KB_OVER_MUB_T_PER_K / g_c])
}

/// Mean field in the field-polarized phase with B along b: 5·J'_perp per ion
/// along b, identical on both sublattices (negative J' points it against b).
pub fn mean_field_b_axis_pm(xc: &ExchangeConstants, g_b: f64) -> Result<[f64; 3]> {
    check_g(g_b, "g_b")?;
    Ok([0.0, 5.0 * xc.j_perp_prime * KB_OVER_MUB_T_PER_K / g_b, 0.0])
}

/// Pair-coupling tensor: zz from the bond's longitudinal constant, xx and yy
/// from the matching transverse constant, each divided by the squared g-factor
/// of its axis.
pub fn exchange_tensor(
    xc: &ExchangeConstants,
    kind: PairKind,
    g: (f64, f64, f64),
) -> Result<ExchangeTensor> {
    let (g_a, g_b, g_c) = g;
    check_g(g_a, "g_a")?;
    check_g(g_b, "g_b")?;
    check_g(g_c, "g_c")?;
    let (long, trans) = match kind {
        PairKind::InPlane => (xc.j_perp, xc.j_perp_prime),
        PairKind::OutOfPlane => (xc.j_par, xc.j_par_prime),
    };
    Ok(ExchangeTensor {
        xx: trans * KB_GHZ_PER_K / (g_a * g_a),
        yy: trans * KB_GHZ_PER_K / (g_b * g_b),
        zz: long * KB_GHZ_PER_K / (g_c * g_c),
    })
}

/// Saturated sublattice moments. The AFM structure is the zero-field one for
/// either axis (no transverse-canting model); the PM phase aligns both
/// sublattices with the field axis.
pub fn sublattice_moments(
    phase: Phase,
    field_axis: FieldAxis,
    g: (f64, f64, f64),
) -> Result<SublatticeConfig> {
    require_modeled(phase)?;
    let (_, g_b, g_c) = g;
    let moments = match (phase, field_axis) {
        (Phase::Afm, _) => [[0.0, 0.0, g_c / 2.0], [0.0, 0.0, -g_c / 2.0]],
        (Phase::Pm, FieldAxis::C) => [[0.0, 0.0, g_c / 2.0], [0.0, 0.0, g_c / 2.0]],
        (Phase::Pm, FieldAxis::B) => [[0.0, g_b / 2.0, 0.0], [0.0, g_b / 2.0, 0.0]],
        (Phase::Intermediate, _) => unreachable!(),
    };
    Ok(SublatticeConfig { phase, field_axis, moments })
}
