//! Coupled two-ion systems on a truncated product space.
//!
//! Each member ion is reduced to its four working levels (lower and upper
//! ground-doublet states, then lower and upper excited-doublet states, indices
//! 0..4 in that order) with its fields already folded in. The pair Hamiltonian
//! couples the members' magnetic moments through a diagonal exchange tensor.

use nalgebra::DVector;

use crate::error::{CoreError, Result};
use crate::ion::{
    diagonalize, hermiticity_defect, matrix_scale, EigenSystem, IonSystem, IrrepWeights,
};
use crate::lattice::ExchangeTensor;
use crate::spectro::{pair_product, PairIrrep};
use crate::{C64, Matrix};

/// One ion reduced to four levels. Energies are in GHz, ascending within each
/// doublet block; moment operators are 4x4, Hermitian, in Bohr magnetons.
#[derive(Clone, Debug)]
pub struct EffectiveIon {
    pub energies: [f64; 4],
    pub moments: [Matrix; 3],
    pub sym: [IrrepWeights; 4],
}

impl EffectiveIon {
    pub fn new(energies: [f64; 4], moments: [Matrix; 3], sym: [IrrepWeights; 4]) -> Result<Self> {
        for m in &moments {
            if m.nrows() != 4 || m.ncols() != 4 {
                return Err(CoreError::argument("moment operators must be 4x4"));
            }
            if hermiticity_defect(m) > 1e-9 * matrix_scale(m).max(1.0) {
                return Err(CoreError::contract("moment operators must be Hermitian"));
            }
        }
        if energies[1] < energies[0] - 1e-9 || energies[3] < energies[2] - 1e-9 {
            return Err(CoreError::contract(
                "energies must ascend within each doublet block",
            ));
        }
        Ok(Self { energies, moments, sym })
    }
}

/// Reduce a diagonalized ion to the four levels spanned by two doublets.
/// Both index pairs must be adjacent in the eigenvalue ordering and disjoint;
/// moment operators become P mu P restricted to the selected span.
pub fn project_ion(
    sys: &IonSystem,
    es: &EigenSystem,
    ground: (usize, usize),
    excited: (usize, usize),
) -> Result<EffectiveIon> {
    if es.sym.len() != es.energies.len() {
        return Err(CoreError::contract(
            "eigensystem carries no irrep weights; produce it through IonSystem::eigensystem",
        ));
    }
    if ground.1 != ground.0 + 1 || excited.1 != excited.0 + 1 {
        return Err(CoreError::contract(
            "doublet members must be adjacent eigenstates",
        ));
    }
    if excited.0 <= ground.1 {
        return Err(CoreError::contract("doublets must be disjoint basis blocks"));
    }
    let sel = [ground.0, ground.1, excited.0, excited.1];
    if sel[3] >= es.energies.len() {
        return Err(CoreError::argument("doublet index out of range"));
    }
    let cols: Vec<DVector<C64>> = sel.iter().map(|&k| es.states.column(k).clone_owned()).collect();
    let energies = std::array::from_fn(|a| es.energies[sel[a]]);
    let moments = std::array::from_fn(|axis| {
        let op = &sys.moments()[axis];
        Matrix::from_fn(4, 4, |a, b| (cols[a].adjoint() * op * &cols[b])[(0, 0)])
    });
    let sym = std::array::from_fn(|a| es.sym[sel[a]]);
    EffectiveIon::new(energies, moments, sym)
}

/// Excitation block of one product-basis state: g means the ion sits in its
/// lowest level, e anywhere above it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairBlock {
    Gg,
    Ge,
    Eg,
    Ee,
}

/// Block of product state |i> x |j|.
pub fn product_block(i: usize, j: usize) -> PairBlock {
    match (i == 0, j == 0) {
        (true, true) => PairBlock::Gg,
        (true, false) => PairBlock::Ge,
        (false, true) => PairBlock::Eg,
        (false, false) => PairBlock::Ee,
    }
}

/// Diagonalized two-ion system. Product state |i> x |j> lives at basis index
/// 4i + j; `dominant[k]` is the product label holding the largest weight of
/// eigenstate k and `dominant_weight[k]` that weight.
#[derive(Clone, Debug)]
pub struct PairSystem {
    pub hamiltonian: Matrix,
    pub eigen: EigenSystem,
    pub blocks: [PairBlock; 16],
    pub dominant: Vec<(usize, usize)>,
    pub dominant_weight: Vec<f64>,
    pub ion1: EffectiveIon,
    pub ion2: EffectiveIon,
}

/// Couple two reduced ions: H = H1 x 1 + 1 x H2 - 2 sum_axis J_axis
/// (mu1_axis x mu2_axis). Member fields are already inside the H_i.
pub fn build_pair(
    ion1: &EffectiveIon,
    ion2: &EffectiveIon,
    j12: &ExchangeTensor,
) -> Result<PairSystem> {
    for ion in [ion1, ion2] {
        for m in &ion.moments {
            if m.nrows() != 4 || m.ncols() != 4 {
                return Err(CoreError::contract("pair members must be reduced to 4 levels"));
            }
        }
    }
    let id = Matrix::identity(4, 4);
    let diag = |e: &[f64; 4]| Matrix::from_fn(4, 4, |i, j| {
        if i == j {
            C64::new(e[i], 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let mut h = diag(&ion1.energies).kronecker(&id) + id.kronecker(&diag(&ion2.energies));
    for (axis, j_axis) in j12.diag().into_iter().enumerate() {
        if j_axis != 0.0 {
            h -= ion1.moments[axis].kronecker(&ion2.moments[axis]) * C64::new(2.0 * j_axis, 0.0);
        }
    }
    let eigen = diagonalize(&h)?;
    let mut dominant = Vec::with_capacity(16);
    let mut dominant_weight = Vec::with_capacity(16);
    for k in 0..16 {
        let col = eigen.states.column(k);
        let mut best = (0_usize, -1.0_f64);
        for idx in 0..16 {
            let w = col[idx].norm_sqr();
            if w > best.1 {
                best = (idx, w);
            }
        }
        dominant.push((best.0 / 4, best.0 % 4));
        dominant_weight.push(best.1);
    }
    let blocks = std::array::from_fn(|idx| product_block(idx / 4, idx % 4));
    Ok(PairSystem {
        hamiltonian: h,
        eigen,
        blocks,
        dominant,
        dominant_weight,
        ion1: ion1.clone(),
        ion2: ion2.clone(),
    })
}

/// Product labels reachable by one photon: an optical quantum on one member
/// plus a ground-doublet flip on the other.
pub const TWO_ND_TARGETS: [(usize, usize); 4] = [(1, 2), (1, 3), (2, 1), (3, 1)];

/// One predicted pair absorption line, frequency relative to the pair ground
/// state. `mixed` marks significant irrep leakage at either endpoint (both
/// polarisations then carry weight); `ambiguous` marks a soft assignment: the
/// target's best eigenstate holds less than half the weight, or the ground
/// state itself is not dominated by both ions' lowest levels.
#[derive(Clone, Debug)]
pub struct TwoNdLine {
    pub frequency_ghz: f64,
    pub target: (usize, usize),
    pub initial_irrep: PairIrrep,
    pub final_irrep: PairIrrep,
    pub mixed: bool,
    pub ambiguous: bool,
}

/// Simultaneous-excitation lines out of the pair ground state (the lowest
/// eigenstate), sorted by frequency. Each target label is matched to the
/// eigenstate holding the most of it. Irrep labels come from the heavier
/// class of each factor state, with `mixed` set when any involved factor
/// leaks weight across classes. Exchange can outweigh a vanishing member
/// splitting and reorganize the ground state away from the ground-ground
/// product; frequencies stay exact then, while every line is flagged
/// ambiguous because the simultaneous-excitation reading of the labels is
/// soft.
pub fn two_nd_lines(ps: &PairSystem) -> Result<Vec<TwoNdLine>> {
    let (gi, gj) = ps.dominant[0];
    let ground_soft = (gi, gj) != (0, 0) || ps.dominant_weight[0] < 0.5;
    let ground_irrep = pair_product(ps.ion1.sym[gi].leaning(), ps.ion2.sym[gj].leaning());
    let ground_mixed = ps.ion1.sym[gi].is_mixed()
        || ps.ion2.sym[gj].is_mixed()
        || ps.ion1.sym[gi].dominant().is_none()
        || ps.ion2.sym[gj].dominant().is_none();
    let mut lines = Vec::with_capacity(4);
    for (i, j) in TWO_ND_TARGETS {
        let idx = 4 * i + j;
        let mut best = (0_usize, -1.0_f64);
        for k in 0..16 {
            let w = ps.eigen.states[(idx, k)].norm_sqr();
            if w > best.1 {
                best = (k, w);
            }
        }
        let (k, weight) = best;
        let s1 = &ps.ion1.sym[i];
        let s2 = &ps.ion2.sym[j];
        lines.push(TwoNdLine {
            frequency_ghz: ps.eigen.energies[k] - ps.eigen.energies[0],
            target: (i, j),
            initial_irrep: ground_irrep,
            final_irrep: pair_product(s1.leaning(), s2.leaning()),
            mixed: ground_mixed
                || s1.is_mixed()
                || s2.is_mixed()
                || s1.dominant().is_none()
                || s2.dominant().is_none(),
            ambiguous: ground_soft || weight < 0.5,
        });
    }
    lines.sort_by(|a, b| a.frequency_ghz.total_cmp(&b.frequency_ghz));
    Ok(lines)
}
