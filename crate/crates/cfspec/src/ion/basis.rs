//! Working Hilbert space: an ordered direct sum of |manifold, M⟩ states.

use crate::angmom::half::HalfInt;
use crate::error::{CoreError, Result};

/// One (2S+1)L_J level kept in the working basis. Energies are barycentres in GHz.
#[derive(Clone, Debug)]
pub struct Manifold {
    pub label: String,
    pub l: HalfInt,
    pub s: HalfInt,
    pub j: HalfInt,
    pub centroid_ghz: f64,
}

impl Manifold {
    pub fn dim(&self) -> usize {
        (self.j.twice() + 1) as usize
    }
}

/// One basis vector |manifold, M⟩, addressed by manifold index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasisState {
    pub manifold: usize,
    pub m: HalfInt,
}

/// Ordered basis: manifolds in construction order, M descending within each
/// (index 0 of a block is M = +J). Every matrix in the crate shares this ordering.
#[derive(Clone, Debug)]
pub struct IonBasis {
    manifolds: Vec<Manifold>,
    states: Vec<BasisState>,
    offsets: Vec<usize>,
}

impl IonBasis {
    pub fn new(manifolds: Vec<Manifold>) -> Result<Self> {
        if manifolds.is_empty() {
            return Err(CoreError::config("ion basis needs at least one manifold"));
        }
        let mut min_centroid = f64::INFINITY;
        for man in &manifolds {
            if !man.l.is_integer() {
                return Err(CoreError::config(format!(
                    "manifold {}: L = {} must be an integer",
                    man.label, man.l
                )));
            }
            for (val, name) in [(man.l, "L"), (man.s, "S"), (man.j, "J")] {
                if val.twice() < 0 {
                    return Err(CoreError::config(format!(
                        "manifold {}: {name} = {val} is negative",
                        man.label
                    )));
                }
            }
            let lo = (man.l - man.s).abs();
            let hi = man.l + man.s;
            if man.j < lo || man.j > hi || (man.l.twice() + man.s.twice() + man.j.twice()) % 2 != 0
            {
                return Err(CoreError::config(format!(
                    "manifold {}: J = {} outside the L = {}, S = {} triangle",
                    man.label, man.j, man.l, man.s
                )));
            }
            if man.centroid_ghz < 0.0 {
                return Err(CoreError::config(format!(
                    "manifold {}: centroid {} GHz is negative",
                    man.label, man.centroid_ghz
                )));
            }
            min_centroid = min_centroid.min(man.centroid_ghz);
        }
        if min_centroid.abs() > 1e-9 {
            return Err(CoreError::config(format!(
                "lowest manifold centroid must sit at 0 GHz, found {min_centroid}"
            )));
        }
        for (i, a) in manifolds.iter().enumerate() {
            if manifolds[..i].iter().any(|b| b.label == a.label) {
                return Err(CoreError::config(format!("duplicate manifold label {}", a.label)));
            }
        }

        let mut states = Vec::new();
        let mut offsets = Vec::with_capacity(manifolds.len());
        for (idx, man) in manifolds.iter().enumerate() {
            offsets.push(states.len());
            let mut tm = man.j.twice();
            while tm >= -man.j.twice() {
                states.push(BasisState { manifold: idx, m: HalfInt::from_twice(tm) });
                tm -= 2;
            }
        }
        Ok(Self { manifolds, states, offsets })
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn manifolds(&self) -> &[Manifold] {
        &self.manifolds
    }

    pub fn states(&self) -> &[BasisState] {
        &self.states
    }

    pub fn offset(&self, manifold: usize) -> usize {
        self.offsets[manifold]
    }

    /// Index range of one manifold's block.
    pub fn block(&self, manifold: usize) -> std::ops::Range<usize> {
        let start = self.offsets[manifold];
        start..start + self.manifolds[manifold].dim()
    }

    pub fn index_of(&self, manifold: usize, m: HalfInt) -> Option<usize> {
        let man = self.manifolds.get(manifold)?;
        if !man.j.admits_projection(m) {
            return None;
        }
        Some(self.offsets[manifold] + ((man.j.twice() - m.twice()) / 2) as usize)
    }

    pub fn manifold_index(&self, label: &str) -> Option<usize> {
        self.manifolds.iter().position(|m| m.label == label)
    }
}
