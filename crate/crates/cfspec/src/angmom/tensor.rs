//! Spherical-tensor matrix elements (Wigner-Eckart), angular momentum operator matrices,
//! and Lande g factors.

use nalgebra::DMatrix;

use super::half::HalfInt;
use super::wigner::wigner_3j;
use crate::error::{CoreError, Result};
use crate::C64;

/// Reduced matrix element <bra || C^k || ket> between two labelled manifolds.
/// Many-electron values are inputs (tabulated or computed offline); only the
/// single-electron case has a closed form here, used as a validation path.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedMatrixElement {
    pub bra: String,
    pub ket: String,
    pub k: u32,
    pub value: f64,
}

/// <j' m' | C^k_q | j m> = (-1)^(j'-m') 3j(j' k j; -m' q m) <j'||C^k||j>.
pub fn tensor_matrix_element(
    j_bra: HalfInt,
    m_bra: HalfInt,
    j_ket: HalfInt,
    m_ket: HalfInt,
    k: u32,
    q: i32,
    rme: f64,
) -> Result<f64> {
    let kk = HalfInt::from_int(k as i32);
    let qq = HalfInt::from_int(q);
    let w = wigner_3j(j_bra, kk, j_ket, -m_bra, qq, m_ket)?;
    if w == 0.0 {
        return Ok(0.0);
    }
    // j' - m' is a non-negative integer for any valid (j, m) pair.
    let exp = (j_bra.twice() - m_bra.twice()) / 2;
    let phase = if exp % 2 == 0 { 1.0 } else { -1.0 };
    Ok(phase * w * rme)
}

/// <l || C^k || l'> for a single electron: (-1)^l sqrt((2l+1)(2l'+1)) 3j(l k l'; 0 0 0).
pub fn single_electron_rme(l: HalfInt, k: u32, l_ket: HalfInt) -> Result<f64> {
    if !l.is_integer() || !l_ket.is_integer() {
        return Err(CoreError::argument(format!(
            "single-electron orbital momenta must be integers, got {l} and {l_ket}"
        )));
    }
    let dim = (l.multiplicity()? * l_ket.multiplicity()?) as f64;
    let w = wigner_3j(
        l,
        HalfInt::from_int(k as i32),
        l_ket,
        HalfInt::ZERO,
        HalfInt::ZERO,
        HalfInt::ZERO,
    )?;
    let phase = if (l.twice() / 2) % 2 == 0 { 1.0 } else { -1.0 };
    Ok(phase * dim.sqrt() * w)
}

/// Jx, Jy, Jz matrices over the basis |j, m> with m descending from +j to -j.
pub fn angular_momentum_matrices(j: HalfInt) -> Result<[DMatrix<C64>; 3]> {
    let n = j.multiplicity()?;
    let jv = j.value();
    let m_of = |i: usize| jv - i as f64; // row i holds m = j - i
    let mut jz = DMatrix::<C64>::zeros(n, n);
    let mut jp = DMatrix::<C64>::zeros(n, n); // J+
    for i in 0..n {
        jz[(i, i)] = C64::new(m_of(i), 0.0);
        if i + 1 < n {
            // J+ |j, m> = sqrt(j(j+1) - m(m+1)) |j, m+1>; column i+1 has m, row i has m+1.
            let m = m_of(i + 1);
            jp[(i, i + 1)] = C64::new((jv * (jv + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
        }
    }
    let jm = jp.adjoint();
    let jx = (&jp + &jm).scale(0.5);
    let jy = (&jp - &jm) * C64::new(0.0, -0.5);
    Ok([jx, jy, jz])
}

/// Lande factor g_J = 1 + [J(J+1) + S(S+1) - L(L+1)] / [2 J(J+1)]; 0 for J = 0.
pub fn lande_g(l: HalfInt, s: HalfInt, j: HalfInt) -> f64 {
    if j == HalfInt::ZERO {
        return 0.0;
    }
    let (lv, sv, jv) = (l.value(), s.value(), j.value());
    1.0 + (jv * (jv + 1.0) + sv * (sv + 1.0) - lv * (lv + 1.0)) / (2.0 * jv * (jv + 1.0))
}
