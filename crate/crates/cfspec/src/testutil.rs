//! Shared unit-test fixtures: the two-manifold Nd basis with frozen reduced
//! matrix elements and a seeded crystal-field generator.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::angmom::half::HalfInt;
use crate::angmom::tensor::ReducedMatrixElement;
use crate::ion::basis::Manifold;
use crate::ion::{CrystalFieldParams, IonSpec, IonSystem, MomentMode};
use crate::C64;

pub fn h(twice: i32) -> HalfInt {
    HalfInt::from_twice(twice)
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn man(label: &str, tl: i32, ts: i32, tj: i32, centroid: f64) -> Manifold {
    Manifold { label: label.into(), l: h(tl), s: h(ts), j: h(tj), centroid_ghz: centroid }
}

pub fn nd_manifolds() -> Vec<Manifold> {
    vec![man("4I9/2", 12, 3, 9, 0.0), man("4F3/2", 6, 3, 3, 341463.609662)]
}

pub fn nd_rmes() -> Vec<ReducedMatrixElement> {
    // f³ values computed from first principles (determinant expansion,
    // cross-checked against an independent operator-equivalent route).
    let r = |bra: &str, ket: &str, k: u32, value: f64| ReducedMatrixElement {
        bra: bra.into(),
        ket: ket.into(),
        k,
        value,
    };
    vec![
        r("4I9/2", "4I9/2", 2, -0.495408419012),
        r("4I9/2", "4I9/2", 4, -0.490396437734),
        r("4I9/2", "4I9/2", 6, -1.108409297674),
        r("4F3/2", "4F3/2", 2, 0.357770876400),
    ]
}

/// Hermitian even-q parameter set with every |entry| below `scale_ghz`.
pub fn random_cf(rng: &mut ChaCha8Rng, scale_ghz: f64) -> CrystalFieldParams {
    let mut raw = Vec::new();
    for k in [2_u32, 4, 6] {
        let mut q = 0_i32;
        while q <= k as i32 {
            let re = rng.gen_range(-scale_ghz..scale_ghz);
            let im = if q == 0 { 0.0 } else { rng.gen_range(-scale_ghz..scale_ghz) };
            raw.push((k, q, c(re, im)));
            q += 2; // even q only, matching the site symmetry
        }
    }
    CrystalFieldParams::new(&raw).unwrap()
}

pub fn nd_spec(cf: CrystalFieldParams) -> IonSpec {
    IonSpec::new("nd", nd_manifolds(), cf, nd_rmes(), MomentMode::Lande).unwrap()
}

pub fn nd_system(cf: CrystalFieldParams) -> IonSystem {
    IonSystem::new(nd_spec(cf)).unwrap()
}

/// Fixed real even-q parameter set with clean doublet gaps in both manifolds,
/// used where tests need one concrete ion rather than a random draw.
pub fn fixed_cf() -> CrystalFieldParams {
    CrystalFieldParams::new(&[
        (2, 0, c(3200.0, 0.0)),
        (2, 2, c(-1400.0, 0.0)),
        (4, 0, c(-2100.0, 0.0)),
        (4, 2, c(900.0, 0.0)),
        (4, 4, c(1700.0, 0.0)),
        (6, 0, c(1100.0, 0.0)),
        (6, 2, c(-800.0, 0.0)),
        (6, 4, c(600.0, 0.0)),
        (6, 6, c(-1500.0, 0.0)),
    ])
    .unwrap()
}
