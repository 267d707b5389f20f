//! Simulation engine for optical transition spectra of Kramers rare-earth ions in
//! magnetically ordered crystals.
//!
//! The model chain: free-ion manifolds + crystal field + Zeeman term (applied field plus
//! a phase-dependent mean field) give single-ion levels and transition lines; projecting
//! two neighbouring ions onto their lowest doublets and coupling them through an exchange
//! tensor gives the two-ion lines; `spectro` assembles everything into field sweeps and
//! broadened spectra. Energies are handled in GHz throughout, moments in units of mu_B.

pub mod angmom;
pub mod error;
pub mod ion;
pub mod ionfile;
pub mod lattice;
pub mod pair;
pub mod spectro;
#[cfg(test)]
pub(crate) mod testutil;
pub mod units;

pub use angmom::{
    half::HalfInt,
    tensor::{
        angular_momentum_matrices, lande_g, single_electron_rme, tensor_matrix_element,
        ReducedMatrixElement,
    },
    wigner::{wigner_3j, wigner_6j},
};
pub use error::{CoreError, Result};
pub use ion::{
    basis::{BasisState, IonBasis, Manifold},
    build_crystal_field, build_free_ion, build_zeeman, classify_irrep, diagonalize,
    dominant_manifold, doublet_g_factors, irrep_weights, moment_matrices, single_ion_lines,
    CrystalFieldParams, DoubletG, EigenSystem, IonSpec, IonSystem, Irrep, IrrepWeights,
    MomentMode, SingleIonLine,
};
pub use ionfile::{load_ion_spec, parse_ion_spec};
pub use lattice::{
    exchange_tensor, mean_field_b_axis_pm, mean_field_pair_member, mean_field_single,
    sublattice_moments, ExchangeConstants, ExchangeTensor, FieldAxis, PairKind, Phase,
    SublatticeConfig,
};
pub use pair::{
    build_pair, product_block, project_ion, two_nd_lines, EffectiveIon, PairBlock, PairSystem,
    TwoNdLine, TWO_ND_TARGETS,
};
pub use spectro::{
    line_list, pair_product, phase_of, render, selection_rule, site_mean_fields, sweep,
    FieldLines, IncludeFlags, LineClass, PairIrrep, PhaseBoundaries, Polarisation, SpectrumMap,
    StateSymmetry, Sublattice, SweepConfig, TransitionLine, MERGE_TOL_GHZ,
};

/// Complex scalar used for all operator matrices.
pub type C64 = num_complex::Complex<f64>;
/// Dense complex matrix over an ordered ion basis.
pub type Matrix = nalgebra::DMatrix<C64>;
