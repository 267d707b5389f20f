//! Single-ion model: Hamiltonian assembly, diagonalization, symmetry labels,
//! doublet g-factors, and optical line extraction.

pub mod basis;

use std::collections::BTreeMap;

use nalgebra::DVector;

use crate::angmom::half::HalfInt;
use crate::angmom::tensor::{
    angular_momentum_matrices, lande_g, tensor_matrix_element, ReducedMatrixElement,
};
use crate::angmom::wigner::wigner_6j;
use crate::error::{CoreError, Result};
use crate::units::MU_B_GHZ_PER_T;
use crate::{Matrix, C64};
use basis::IonBasis;
pub use basis::Manifold;

/// Two eigenvalues within this window form one Kramers doublet.
pub const DEGENERACY_TOL_GHZ: f64 = 1e-6;
/// Minority irrep-class weight at or above this marks a state as symmetry-mixed.
pub const MIXED_WEIGHT_MIN: f64 = 0.02;

/// How the magnetic moment operator is built.
///
/// `Lande`: μ̂ = −g_J μ_B Ĵ within each manifold, no inter-manifold blocks.
/// `ExactLs`: μ̂ = −μ_B (L̂ + 2Ŝ) = −μ_B (Ĵ + Ŝ), with Ŝ coupling manifolds that
/// share (L, S) and differ in J by at most one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MomentMode {
    Lande,
    ExactLs,
}

/// Crystal-field coefficients B^k_q in GHz, k ∈ {2, 4, 6}, |q| ≤ k.
/// Construction enforces B^k_{−q} = (−1)^q · conj(B^k_q) and fills the missing
/// partner when only one of ±q is given.
#[derive(Clone, Debug, Default)]
pub struct CrystalFieldParams {
    entries: BTreeMap<(u32, i32), C64>,
}

impl CrystalFieldParams {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(raw: &[(u32, i32, C64)]) -> Result<Self> {
        let mut given: BTreeMap<(u32, i32), C64> = BTreeMap::new();
        for &(k, q, b) in raw {
            if !matches!(k, 2 | 4 | 6) {
                return Err(CoreError::config(format!("crystal-field rank k = {k} not in {{2, 4, 6}}")));
            }
            if q.unsigned_abs() > k {
                return Err(CoreError::config(format!("crystal-field |q| = {} exceeds k = {k}", q.abs())));
            }
            if given.insert((k, q), b).is_some() {
                return Err(CoreError::config(format!("crystal-field entry (k={k}, q={q}) given twice")));
            }
        }
        let mut entries = BTreeMap::new();
        for (&(k, q), &b) in &given {
            let scale = b.norm().max(1.0);
            if q == 0 && b.im.abs() > 1e-9 * scale {
                return Err(CoreError::config(format!(
                    "B^{k}_0 must be real, got imaginary part {}",
                    b.im
                )));
            }
            let partner = parity_conj(q, b);
            match given.get(&(k, -q)) {
                Some(&other) if q != 0 => {
                    if (other - partner).norm() > 1e-9 * scale {
                        return Err(CoreError::config(format!(
                            "B^{k}_{} = {other} breaks Hermiticity against B^{k}_{q} = {b}",
                            -q
                        )));
                    }
                }
                _ => {}
            }
            if b.norm() == 0.0 {
                continue;
            }
            entries.insert((k, q), b);
            entries.insert((k, -q), partner);
        }
        Ok(Self { entries })
    }

    /// All stored coefficients, both signs of q present.
    pub fn entries(&self) -> impl Iterator<Item = (u32, i32, C64)> + '_ {
        self.entries.iter().map(|(&(k, q), &b)| (k, q, b))
    }

    /// Ranks with at least one nonzero coefficient.
    pub fn ranks(&self) -> Vec<u32> {
        let mut ks: Vec<u32> = self.entries.keys().map(|&(k, _)| k).collect();
        ks.dedup();
        ks
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// (−1)^q · conj(b).
fn parity_conj(q: i32, b: C64) -> C64 {
    if q.rem_euclid(2) == 0 {
        b.conj()
    } else {
        -b.conj()
    }
}

/// Everything defining one ion species: basis manifolds, crystal-field
/// coefficients, reduced matrix elements keyed by manifold labels, moment mode.
#[derive(Clone, Debug)]
pub struct IonSpec {
    pub name: String,
    pub basis: IonBasis,
    pub cf: CrystalFieldParams,
    pub rmes: Vec<ReducedMatrixElement>,
    pub moment_mode: MomentMode,
}

impl IonSpec {
    pub fn new(
        name: impl Into<String>,
        manifolds: Vec<Manifold>,
        cf: CrystalFieldParams,
        rmes: Vec<ReducedMatrixElement>,
        moment_mode: MomentMode,
    ) -> Result<Self> {
        let basis = IonBasis::new(manifolds)?;
        for (i, r) in rmes.iter().enumerate() {
            let bra = basis
                .manifold_index(&r.bra)
                .ok_or_else(|| CoreError::config(format!("rme references unknown manifold {}", r.bra)))?;
            let ket = basis
                .manifold_index(&r.ket)
                .ok_or_else(|| CoreError::config(format!("rme references unknown manifold {}", r.ket)))?;
            let (jb, jk) = (basis.manifolds()[bra].j, basis.manifolds()[ket].j);
            let tk = 2 * r.k as i32;
            if (jb.twice() - jk.twice()).abs() > tk || jb.twice() + jk.twice() < tk {
                return Err(CoreError::config(format!(
                    "rme ({}, {}, k={}) violates the triangle rule for J = {jb}, J' = {jk}",
                    r.bra, r.ket, r.k
                )));
            }
            if rmes[..i].iter().any(|p| {
                p.k == r.k
                    && ((p.bra == r.bra && p.ket == r.ket) || (p.bra == r.ket && p.ket == r.bra))
            }) {
                return Err(CoreError::config(format!(
                    "rme ({}, {}, k={}) duplicates an earlier entry",
                    r.bra, r.ket, r.k
                )));
            }
        }
        Ok(Self { name: name.into(), basis, cf, rmes, moment_mode })
    }

    /// ⟨bra ‖ C^k ‖ ket⟩ by manifold index; a stored (ket, bra) entry is reversed
    /// with the phase (−1)^(J_ket − J_bra).
    fn rme(&self, bra: usize, ket: usize, k: u32) -> Option<f64> {
        let mans = self.basis.manifolds();
        let (lb, lk) = (&mans[bra].label, &mans[ket].label);
        for r in &self.rmes {
            if r.k != k {
                continue;
            }
            if r.bra == *lb && r.ket == *lk {
                return Some(r.value);
            }
            if r.bra == *lk && r.ket == *lb {
                let exp = (mans[ket].j.twice() - mans[bra].j.twice()) / 2;
                let sign = if exp.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                return Some(sign * r.value);
            }
        }
        None
    }
}

/// Diagonal matrix of manifold centroids over the full basis.
pub fn build_free_ion(spec: &IonSpec) -> Matrix {
    let n = spec.basis.dim();
    let mut h = Matrix::zeros(n, n);
    for (i, st) in spec.basis.states().iter().enumerate() {
        h[(i, i)] = C64::new(spec.basis.manifolds()[st.manifold].centroid_ghz, 0.0);
    }
    h
}

/// Σ_{k,q} B^k_q Ĉ^k_q over all manifold blocks with a reduced matrix element.
///
/// A rank that couples a manifold to itself (k ≤ 2J) must have an rme; missing
/// cross-manifold rmes simply leave those blocks zero (J-mixing is opt-in).
pub fn build_crystal_field(spec: &IonSpec) -> Result<Matrix> {
    let mans = spec.basis.manifolds();
    for (mi, man) in mans.iter().enumerate() {
        for k in spec.cf.ranks() {
            if k as i32 <= man.j.twice() && spec.rme(mi, mi, k).is_none() {
                return Err(CoreError::config(format!(
                    "crystal field rank {k} acts within manifold {} but no ({}, {}, {k}) rme is given",
                    man.label, man.label, man.label
                )));
            }
        }
    }
    let n = spec.basis.dim();
    let mut h = Matrix::zeros(n, n);
    for a in 0..mans.len() {
        for b in 0..mans.len() {
            let (ja, jb) = (mans[a].j, mans[b].j);
            for (k, q, bkq) in spec.cf.entries() {
                let Some(rme) = spec.rme(a, b, k) else { continue };
                for (ia, i) in spec.basis.block(a).enumerate() {
                    let ma = HalfInt::from_twice(ja.twice() - 2 * ia as i32);
                    let tm_ket = ma.twice() - 2 * q;
                    if tm_ket.abs() > jb.twice() {
                        continue;
                    }
                    let mb = HalfInt::from_twice(tm_ket);
                    let j = spec.basis.index_of(b, mb).expect("projection in range");
                    let el = tensor_matrix_element(ja, ma, jb, mb, k, q, rme)?;
                    h[(i, j)] += bkq * el;
                }
            }
        }
    }
    let defect = hermiticity_defect(&h);
    if defect > 1e-12 * matrix_scale(&h) {
        return Err(CoreError::contract(format!(
            "crystal-field matrix lost Hermiticity (defect {defect:.3e})"
        )));
    }
    Ok(h)
}

/// Magnetic moment operators (μ_a, μ_b, μ_c) in Bohr-magneton units.
pub fn moment_matrices(spec: &IonSpec) -> Result<[Matrix; 3]> {
    let n = spec.basis.dim();
    let mans = spec.basis.manifolds();
    let mut mu = [Matrix::zeros(n, n), Matrix::zeros(n, n), Matrix::zeros(n, n)];

    // Ĵ part: block diagonal in every mode; lande scales it by g_J, exact-LS adds Ŝ.
    for (mi, man) in mans.iter().enumerate() {
        let jmats = angular_momentum_matrices(man.j)?;
        let factor = match spec.moment_mode {
            MomentMode::Lande => lande_g(man.l, man.s, man.j),
            MomentMode::ExactLs => 1.0,
        };
        let off = spec.basis.offset(mi);
        for axis in 0..3 {
            for r in 0..man.dim() {
                for c in 0..man.dim() {
                    mu[axis][(off + r, off + c)] = -factor * jmats[axis][(r, c)];
                }
            }
        }
    }

    if spec.moment_mode == MomentMode::ExactLs {
        // Ŝ via Wigner-Eckart over manifold pairs sharing (L, S), ΔJ ≤ 1:
        // ⟨(LS)J'‖S‖(LS)J⟩ = (−1)^(L+S+J'+1) √((2J'+1)(2J+1)) {S J' L; J S 1} √(S(S+1)(2S+1)).
        let one = HalfInt::from_int(1);
        for (a, ma_) in mans.iter().enumerate() {
            for (b, mb_) in mans.iter().enumerate() {
                if ma_.l != mb_.l || ma_.s != mb_.s {
                    continue;
                }
                let (jp, j) = (ma_.j, mb_.j);
                if (jp.twice() - j.twice()).abs() > 2 {
                    continue;
                }
                let s = ma_.s.value();
                let six = wigner_6j(ma_.s, jp, ma_.l, j, mb_.s, one)?;
                if six == 0.0 {
                    continue;
                }
                let exp = (ma_.l.twice() + ma_.s.twice() + jp.twice()) / 2 + 1;
                let phase = if exp.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                let rme_s = phase
                    * ((jp.twice() as f64 + 1.0) * (j.twice() as f64 + 1.0)).sqrt()
                    * six
                    * (s * (s + 1.0) * (2.0 * s + 1.0)).sqrt();
                // spherical components T_q → cartesian S matrices
                let mut t = [
                    Matrix::zeros(n, n), // q = -1
                    Matrix::zeros(n, n), // q = 0
                    Matrix::zeros(n, n), // q = +1
                ];
                for (q_idx, q) in [(-1_i32), 0, 1].iter().copied().enumerate() {
                    for (ia, i) in spec.basis.block(a).enumerate() {
                        let mp = HalfInt::from_twice(jp.twice() - 2 * ia as i32);
                        let tm_ket = mp.twice() - 2 * q;
                        if tm_ket.abs() > j.twice() {
                            continue;
                        }
                        let mk = HalfInt::from_twice(tm_ket);
                        let jdx = spec.basis.index_of(b, mk).expect("projection in range");
                        let el = tensor_matrix_element(jp, mp, j, mk, 1, q, rme_s)?;
                        t[q_idx][(i, jdx)] = C64::new(el, 0.0);
                    }
                }
                let inv_sqrt2 = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                let i_sqrt2 = C64::new(0.0, std::f64::consts::FRAC_1_SQRT_2);
                let sx = (&t[0] - &t[2]) * inv_sqrt2;
                let sy = (&t[0] + &t[2]) * i_sqrt2;
                let sz = t[1].clone();
                mu[0] -= sx;
                mu[1] -= sy;
                mu[2] -= sz;
            }
        }
    }

    for m in &mu {
        let defect = hermiticity_defect(m);
        if defect > 1e-12 * matrix_scale(m) {
            return Err(CoreError::contract(format!(
                "moment operator lost Hermiticity (defect {defect:.3e})"
            )));
        }
    }
    Ok(mu)
}

/// Ĥ_Z = −B · μ̂, in GHz for B in Tesla.
pub fn build_zeeman(spec: &IonSpec, b_total_t: [f64; 3]) -> Result<Matrix> {
    let mu = moment_matrices(spec)?;
    let n = spec.basis.dim();
    let mut h = Matrix::zeros(n, n);
    for axis in 0..3 {
        if b_total_t[axis] != 0.0 {
            h += &mu[axis] * C64::new(-MU_B_GHZ_PER_T * b_total_t[axis], 0.0);
        }
    }
    Ok(h)
}

pub(crate) fn hermiticity_defect(h: &Matrix) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..h.nrows() {
        for j in i..h.ncols() {
            worst = worst.max((h[(i, j)] - h[(j, i)].conj()).norm());
        }
    }
    worst
}

pub(crate) fn matrix_scale(h: &Matrix) -> f64 {
    h.iter().fold(1.0_f64, |acc, z| acc.max(z.norm()))
}

/// Symmetry class label under the site group: states built on the M-class
/// containing +1/2 are G3, the mirrored class is G4.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Irrep {
    G3,
    G4,
}

impl std::fmt::Display for Irrep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Irrep::G3 => "G3",
            Irrep::G4 => "G4",
        })
    }
}

/// Weight of a state in each irrep class; weights sum to 1 for a normalized state.
#[derive(Clone, Copy, Debug)]
pub struct IrrepWeights {
    pub g3: f64,
    pub g4: f64,
}

impl IrrepWeights {
    /// Dominant class, or None when the weights tie to within 1e-9.
    pub fn dominant(&self) -> Option<Irrep> {
        if (self.g3 - self.g4).abs() <= 1e-9 {
            None
        } else if self.g3 > self.g4 {
            Some(Irrep::G3)
        } else {
            Some(Irrep::G4)
        }
    }

    pub fn minority(&self) -> f64 {
        self.g3.min(self.g4)
    }

    /// Enough minority weight to break polarisation selection rules.
    pub fn is_mixed(&self) -> bool {
        self.minority() >= MIXED_WEIGHT_MIN
    }

    /// Heavier class regardless of margin; ties lean G3. Use `dominant` when
    /// a tie must be surfaced instead of labeled.
    pub fn leaning(&self) -> Irrep {
        if self.g3 >= self.g4 {
            Irrep::G3
        } else {
            Irrep::G4
        }
    }
}

/// Class of one projection: true → the +1/2 class (G3), false → mirror (G4).
/// The even-q crystal field only couples M values four apart, so twice-M mod 4
/// separates the two closed classes.
fn in_g3_class(m: HalfInt) -> Result<bool> {
    match m.twice().rem_euclid(4) {
        1 => Ok(true),
        3 => Ok(false),
        _ => Err(CoreError::argument(format!(
            "irrep classes are defined for half-integer projections, got M = {m}"
        ))),
    }
}

/// Irrep-class weights of one state vector over the given basis.
pub fn irrep_weights(state: &[C64], basis: &IonBasis) -> Result<IrrepWeights> {
    if state.len() != basis.dim() {
        return Err(CoreError::argument(format!(
            "state length {} does not match basis dimension {}",
            state.len(),
            basis.dim()
        )));
    }
    let mut w = IrrepWeights { g3: 0.0, g4: 0.0 };
    for (c, st) in state.iter().zip(basis.states()) {
        let p = c.norm_sqr();
        if in_g3_class(st.m)? {
            w.g3 += p;
        } else {
            w.g4 += p;
        }
    }
    let total = w.g3 + w.g4;
    if (total - 1.0).abs() > 1e-6 {
        return Err(CoreError::argument(format!("state is not normalized (norm² = {total})")));
    }
    Ok(w)
}

/// Strict classification: errors when the two class weights tie within 1e-9
/// rather than guessing.
pub fn classify_irrep(state: &[C64], basis: &IonBasis) -> Result<Irrep> {
    let w = irrep_weights(state, basis)?;
    w.dominant().ok_or_else(|| {
        CoreError::contract(format!(
            "state is unclassifiable: irrep weights tie at {:.9} / {:.9}",
            w.g3, w.g4
        ))
    })
}

/// Eigendecomposition with ascending energies (ground shifted to 0),
/// deterministic phases, and degenerate pairs listed as doublets.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    pub energies: Vec<f64>,
    /// Absolute energy subtracted from all eigenvalues.
    pub ground_energy_ghz: f64,
    /// Columns are eigenvectors, same order as `energies`.
    pub states: Matrix,
    pub doublets: Vec<(usize, usize)>,
    /// Per-state irrep weights; empty when no ion basis was attached.
    pub sym: Vec<IrrepWeights>,
}

/// Diagonalize a Hermitian matrix. Phases are fixed per column (largest-modulus
/// component made real positive); degenerate pairs keep the solver's span here,
/// and get the symmetry-adapted rotation in `IonSystem::eigensystem` where the
/// basis is known.
pub fn diagonalize(h: &Matrix) -> Result<EigenSystem> {
    let n = h.nrows();
    if h.ncols() != n {
        return Err(CoreError::argument("matrix must be square"));
    }
    let scale = matrix_scale(h);
    if hermiticity_defect(h) > 1e-9 * scale {
        return Err(CoreError::contract("matrix is not Hermitian"));
    }
    let sym = Matrix::from_fn(n, n, |i, j| (h[(i, j)] + h[(j, i)].conj()) * 0.5);
    let eig = sym.symmetric_eigen();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let energies_abs: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut states = Matrix::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        states.set_column(k, &eig.eigenvectors.column(i));
    }

    for k in 0..n {
        let v = states.column(k).clone_owned();
        let residual = (h * &v - &v * C64::new(energies_abs[k], 0.0)).norm();
        if residual > 1e-9 * scale.max(1.0) {
            return Err(CoreError::contract(format!(
                "eigenpair {k} residual {residual:.3e} exceeds tolerance"
            )));
        }
    }
    let gram = states.adjoint() * &states;
    for i in 0..n {
        for j in 0..n {
            let expect = if i == j { 1.0 } else { 0.0 };
            if (gram[(i, j)] - C64::new(expect, 0.0)).norm() > 1e-10 {
                return Err(CoreError::contract("eigenvectors are not orthonormal"));
            }
        }
    }

    for k in 0..n {
        fix_column_phase(&mut states, k);
    }

    let ground = energies_abs.first().copied().unwrap_or(0.0);
    let energies: Vec<f64> = energies_abs.iter().map(|e| e - ground).collect();
    let mut doublets = Vec::new();
    let mut k = 0;
    while k + 1 < n {
        if energies[k + 1] - energies[k] <= DEGENERACY_TOL_GHZ {
            doublets.push((k, k + 1));
            k += 2;
        } else {
            k += 1;
        }
    }
    Ok(EigenSystem { energies, ground_energy_ghz: ground, states, doublets, sym: Vec::new() })
}

/// Multiply column k by the phase making its largest-modulus component real
/// positive; the first maximal index wins ties.
fn fix_column_phase(states: &mut Matrix, k: usize) {
    let col = states.column(k);
    let mut best = 0;
    let mut best_norm = 0.0;
    for (i, c) in col.iter().enumerate() {
        let nrm = c.norm();
        if nrm > best_norm + 1e-14 {
            best = i;
            best_norm = nrm;
        }
    }
    if best_norm == 0.0 {
        return;
    }
    let phase = states[(best, k)].conj() / C64::new(best_norm, 0.0);
    let rotated = states.column(k) * phase;
    states.set_column(k, &rotated);
}

/// One ion species with its field-independent matrices prebuilt.
#[derive(Clone, Debug)]
pub struct IonSystem {
    spec: IonSpec,
    h_static: Matrix,
    moments: [Matrix; 3],
}

impl IonSystem {
    pub fn new(spec: IonSpec) -> Result<Self> {
        let h_static = build_free_ion(&spec) + build_crystal_field(&spec)?;
        let moments = moment_matrices(&spec)?;
        Ok(Self { spec, h_static, moments })
    }

    pub fn spec(&self) -> &IonSpec {
        &self.spec
    }

    pub fn moments(&self) -> &[Matrix; 3] {
        &self.moments
    }

    pub fn dim(&self) -> usize {
        self.spec.basis.dim()
    }

    /// Ĥ_FI + Ĥ_CF − B·μ̂ for the total field (applied + mean) in Tesla.
    pub fn hamiltonian(&self, b_total_t: [f64; 3]) -> Matrix {
        let mut h = self.h_static.clone();
        for axis in 0..3 {
            if b_total_t[axis] != 0.0 {
                h += &self.moments[axis] * C64::new(-MU_B_GHZ_PER_T * b_total_t[axis], 0.0);
            }
        }
        h
    }

    /// Diagonalize at the given total field, rotate degenerate doublets onto the
    /// symmetry-adapted basis (G3-projector eigenvectors, descending G3 weight),
    /// and attach per-state irrep weights.
    pub fn eigensystem(&self, b_total_t: [f64; 3]) -> Result<EigenSystem> {
        let h = self.hamiltonian(b_total_t);
        let mut es = diagonalize(&h)?;
        for &(i, j) in &es.doublets.clone() {
            self.adapt_doublet(&mut es, i, j)?;
        }
        let mut sym = Vec::with_capacity(es.energies.len());
        for k in 0..es.energies.len() {
            let col = es.states.column(k).clone_owned();
            sym.push(irrep_weights(col.as_slice(), &self.spec.basis)?);
        }
        es.sym = sym;
        Ok(es)
    }

    /// Rotate one degenerate pair to diagonalize the G3-class projector, order
    /// the two by descending G3 weight, and re-fix phases.
    fn adapt_doublet(&self, es: &mut EigenSystem, i: usize, j: usize) -> Result<()> {
        let vi = es.states.column(i).clone_owned();
        let vj = es.states.column(j).clone_owned();
        let mask = self
            .spec
            .basis
            .states()
            .iter()
            .map(|st| in_g3_class(st.m))
            .collect::<Result<Vec<bool>>>()?;
        let proj = |v: &DVector<C64>, w: &DVector<C64>| -> C64 {
            let mut acc = C64::new(0.0, 0.0);
            for (idx, &keep) in mask.iter().enumerate() {
                if keep {
                    acc += v[idx].conj() * w[idx];
                }
            }
            acc
        };
        // 2x2 projector matrix in the doublet span, diagonalized exactly.
        let w = Matrix::from_row_slice(
            2,
            2,
            &[proj(&vi, &vi), proj(&vi, &vj), proj(&vj, &vi), proj(&vj, &vj)],
        );
        let eig = w.clone().symmetric_eigen();
        let (hi, lo) = if eig.eigenvalues[0] >= eig.eigenvalues[1] { (0, 1) } else { (1, 0) };
        let combine = |c: nalgebra::DVectorView<C64>| -> DVector<C64> { &vi * c[0] + &vj * c[1] };
        let a = combine(eig.eigenvectors.column(hi));
        let b = combine(eig.eigenvectors.column(lo));
        es.states.set_column(i, &a);
        es.states.set_column(j, &b);
        fix_column_phase(&mut es.states, i);
        fix_column_phase(&mut es.states, j);
        Ok(())
    }

    /// Indices of the two lowest eigenstates dominated by the given manifold.
    pub fn lowest_doublet(&self, es: &EigenSystem, manifold: usize) -> Result<(usize, usize)> {
        let mut found = Vec::new();
        for k in 0..es.energies.len() {
            if dominant_manifold(es, &self.spec.basis, k) == manifold {
                found.push(k);
                if found.len() == 2 {
                    return Ok((found[0], found[1]));
                }
            }
        }
        Err(CoreError::contract(format!(
            "manifold {} dominates fewer than two eigenstates",
            self.spec.basis.manifolds()[manifold].label
        )))
    }
}

/// Manifold holding the largest weight of one eigenstate.
pub fn dominant_manifold(es: &EigenSystem, basis: &IonBasis, state: usize) -> usize {
    let col = es.states.column(state);
    let mut best = (0, -1.0);
    for m in 0..basis.manifolds().len() {
        let w: f64 = basis.block(m).map(|i| col[i].norm_sqr()).sum();
        if w > best.1 {
            best = (m, w);
        }
    }
    best.0
}

/// Doublet g-factors: g_c from the diagonal moment on the symmetry-adapted
/// states, g_a and g_b from the off-diagonal (time-reversal partner) elements.
/// Moments are in Bohr-magneton units, so the g's are plain numbers.
#[derive(Clone, Copy, Debug)]
pub struct DoubletG {
    pub g_a: f64,
    pub g_b: f64,
    pub g_c: f64,
}

pub fn doublet_g_factors(
    es: &EigenSystem,
    pair: (usize, usize),
    moments: &[Matrix; 3],
) -> Result<DoubletG> {
    let (i, j) = pair;
    let n = es.energies.len();
    if i >= n || j >= n || i == j {
        return Err(CoreError::argument(format!("invalid doublet indices ({i}, {j})")));
    }
    if (es.energies[i] - es.energies[j]).abs() > DEGENERACY_TOL_GHZ {
        return Err(CoreError::contract(format!(
            "states {i} and {j} are split by {:.3e} GHz, not a degenerate doublet",
            (es.energies[i] - es.energies[j]).abs()
        )));
    }
    let psi = es.states.column(i).clone_owned();
    let bar = es.states.column(j).clone_owned();
    let elem = |op: &Matrix, l: &DVector<C64>, r: &DVector<C64>| (l.adjoint() * op * r)[(0, 0)];
    Ok(DoubletG {
        g_a: 2.0 * elem(&moments[0], &psi, &bar).norm(),
        g_b: 2.0 * elem(&moments[1], &psi, &bar).norm(),
        g_c: 2.0 * elem(&moments[2], &psi, &psi).norm(),
    })
}

/// One optical transition between a ground-doublet state and an excited-doublet
/// state, with the irrep weights of both ends.
#[derive(Clone, Debug)]
pub struct SingleIonLine {
    pub frequency_ghz: f64,
    pub initial: usize,
    pub upper: usize,
    pub initial_sym: IrrepWeights,
    pub upper_sym: IrrepWeights,
}

/// All four level-pair transitions between two doublets, sorted by
/// (initial, upper) state index.
pub fn single_ion_lines(
    es: &EigenSystem,
    ground: (usize, usize),
    excited: (usize, usize),
) -> Result<Vec<SingleIonLine>> {
    if es.sym.len() != es.energies.len() {
        return Err(CoreError::contract(
            "eigensystem carries no irrep weights; produce it through IonSystem::eigensystem",
        ));
    }
    let mut lines = Vec::with_capacity(4);
    for &g in &[ground.0, ground.1] {
        for &e in &[excited.0, excited.1] {
            lines.push(SingleIonLine {
                frequency_ghz: es.energies[e] - es.energies[g],
                initial: g,
                upper: e,
                initial_sym: es.sym[g],
                upper_sym: es.sym[e],
            });
        }
    }
    Ok(lines)
}
