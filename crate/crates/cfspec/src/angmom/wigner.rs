//! Wigner 3j and 6j symbols via the Racah sum formulas.
//!
//! All intermediate arithmetic is exact: the alternating sum S and the triangle/projection
//! factor R are kept as big rationals, and the value sign(S)·sqrt(S²·R) is converted to f64
//! only at the end, so results are correct to the last float digit for any argument size
//! this engine meets. Selection-rule failures return 0.0; malformed quantum numbers
//! (negative magnitudes, projections of the wrong parity) are argument errors.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::half::HalfInt;
use crate::error::{CoreError, Result};

/// n! as a big integer; n < 0 yields None (used to prune sum terms).
fn fact(n: i64) -> Option<BigInt> {
    if n < 0 {
        return None;
    }
    let mut acc = BigInt::from(1);
    for k in 2..=n {
        acc *= k;
    }
    Some(acc)
}

fn rational(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

/// (a+b-c)!(a-b+c)!(-a+b+c)!/(a+b+c+1)! as an exact rational, or None if the
/// triangle condition or integer-perimeter condition fails.
fn triangle_factor(a: HalfInt, b: HalfInt, c: HalfInt) -> Option<BigRational> {
    let (ta, tb, tc) = (a.twice() as i64, b.twice() as i64, c.twice() as i64);
    if (ta + tb + tc) % 2 != 0 {
        return None;
    }
    let x = (ta + tb - tc) / 2;
    let y = (ta - tb + tc) / 2;
    let z = (-ta + tb + tc) / 2;
    if x < 0 || y < 0 || z < 0 {
        return None;
    }
    let p = (ta + tb + tc) / 2;
    Some(rational(fact(x)? * fact(y)? * fact(z)?, fact(p + 1)?))
}

fn check_j(j: HalfInt, name: &str) -> Result<()> {
    if j.twice() < 0 {
        return Err(CoreError::argument(format!("{name} = {j} has negative magnitude")));
    }
    Ok(())
}

fn check_jm(j: HalfInt, m: HalfInt, name: &str) -> Result<()> {
    check_j(j, name)?;
    if !j.admits_projection(m) {
        return Err(CoreError::argument(format!(
            "m = {m} is not a projection of {name} = {j}"
        )));
    }
    Ok(())
}

/// Wigner 3j symbol (j1 j2 j3; m1 m2 m3).
pub fn wigner_3j(
    j1: HalfInt,
    j2: HalfInt,
    j3: HalfInt,
    m1: HalfInt,
    m2: HalfInt,
    m3: HalfInt,
) -> Result<f64> {
    check_jm(j1, m1, "j1")?;
    check_jm(j2, m2, "j2")?;
    check_jm(j3, m3, "j3")?;
    if (m1 + m2 + m3) != HalfInt::ZERO {
        return Ok(0.0);
    }
    let tri = match triangle_factor(j1, j2, j3) {
        Some(t) => t,
        None => return Ok(0.0),
    };

    // All of these are guaranteed integral by the projection parity checks.
    let jm = |j: HalfInt, m: HalfInt| ((j.twice() + m.twice()) / 2) as i64;
    let r_proj = [
        jm(j1, m1),
        jm(j1, -m1),
        jm(j2, m2),
        jm(j2, -m2),
        jm(j3, m3),
        jm(j3, -m3),
    ]
    .iter()
    .map(|&n| fact(n).expect("non-negative by projection check"))
    .product::<BigInt>();
    let r = tri * rational(r_proj, BigInt::from(1));

    // Racah sum over integer t.
    let i = |h: HalfInt| h.twice() as i64; // doubled values
    let t_min = 0_i64
        .max((i(j2) - i(j3) - i(m1)) / 2)
        .max((i(j1) - i(j3) + i(m2)) / 2);
    let t_max = ((i(j1) + i(j2) - i(j3)) / 2)
        .min((i(j1) - i(m1)) / 2)
        .min((i(j2) + i(m2)) / 2);
    let mut s = BigRational::zero();
    for t in t_min..=t_max {
        let denom = [
            fact(t),
            fact((i(j3) - i(j2) + i(m1)) / 2 + t),
            fact((i(j3) - i(j1) - i(m2)) / 2 + t),
            fact((i(j1) + i(j2) - i(j3)) / 2 - t),
            fact((i(j1) - i(m1)) / 2 - t),
            fact((i(j2) + i(m2)) / 2 - t),
        ];
        let Some(denom) = denom.into_iter().product::<Option<BigInt>>() else {
            continue;
        };
        let term = rational(BigInt::from(if t % 2 == 0 { 1 } else { -1 }), denom);
        s += term;
    }
    if s.is_zero() {
        return Ok(0.0);
    }

    let phase_exp = (i(j1) - i(j2) - i(m3)) / 2;
    let mut sign = if phase_exp.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    if s.is_negative() {
        sign = -sign;
    }
    let mag2 = (&s * &s * r).to_f64().expect("factorial ratio fits in f64");
    Ok(sign * mag2.sqrt())
}

/// Wigner 6j symbol {j1 j2 j3; j4 j5 j6}.
pub fn wigner_6j(
    j1: HalfInt,
    j2: HalfInt,
    j3: HalfInt,
    j4: HalfInt,
    j5: HalfInt,
    j6: HalfInt,
) -> Result<f64> {
    for (j, name) in [(j1, "j1"), (j2, "j2"), (j3, "j3"), (j4, "j4"), (j5, "j5"), (j6, "j6")] {
        check_j(j, name)?;
    }
    let triads = [(j1, j2, j3), (j1, j5, j6), (j4, j2, j6), (j4, j5, j3)];
    let mut r = BigRational::new(BigInt::from(1), BigInt::from(1));
    let mut perims = [0_i64; 4];
    for (k, &(a, b, c)) in triads.iter().enumerate() {
        match triangle_factor(a, b, c) {
            Some(t) => r *= t,
            None => return Ok(0.0),
        }
        perims[k] = (a.twice() + b.twice() + c.twice()) as i64 / 2;
    }
    let i = |h: HalfInt| h.twice() as i64;
    let quads = [
        (i(j1) + i(j2) + i(j4) + i(j5)) / 2,
        (i(j2) + i(j3) + i(j5) + i(j6)) / 2,
        (i(j3) + i(j1) + i(j6) + i(j4)) / 2,
    ];
    let t_min = *perims.iter().max().unwrap();
    let t_max = *quads.iter().min().unwrap();
    let mut s = BigRational::zero();
    for t in t_min..=t_max {
        let mut denom = BigInt::from(1);
        for p in perims {
            denom *= fact(t - p).expect("t >= all perimeters");
        }
        for q in quads {
            denom *= fact(q - t).expect("t <= all quads");
        }
        let num = fact(t + 1).unwrap() * if t % 2 == 0 { 1 } else { -1 };
        s += rational(num, denom);
    }
    if s.is_zero() {
        return Ok(0.0);
    }
    let sign = if s.is_negative() { -1.0 } else { 1.0 };
    let mag2 = (&s * &s * r).to_f64().expect("factorial ratio fits in f64");
    Ok(sign * mag2.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(twice: i32) -> HalfInt {
        HalfInt::from_twice(twice)
    }

    fn w3(tj: [i32; 3], tm: [i32; 3]) -> f64 {
        wigner_3j(h(tj[0]), h(tj[1]), h(tj[2]), h(tm[0]), h(tm[1]), h(tm[2])).unwrap()
    }

    fn w6(tj: [i32; 6]) -> f64 {
        wigner_6j(h(tj[0]), h(tj[1]), h(tj[2]), h(tj[3]), h(tj[4]), h(tj[5])).unwrap()
    }

    const TOL: f64 = 1e-14;

    // Reference values computed independently with sympy.physics.wigner (exact symbolic),
    // frozen here to 16 digits.
    #[test]
    fn pinned_3j_values() {
        assert!((w3([2, 2, 0], [0, 0, 0]) - (-5.773502691896257e-1)).abs() < TOL); // -1/sqrt(3)
        assert!((w3([6, 4, 6], [0, 0, 0]) - 1.9518001458970663e-1).abs() < TOL); // 2*sqrt(105)/105
        assert!((w3([9, 4, 9], [-1, 0, 1]) - (-1.5569978883230459e-1)).abs() < TOL);
        assert!((w3([9, 8, 9], [-9, 4, 5]) - 1.7739371879672478e-1).abs() < TOL);
        assert!((w3([9, 12, 3], [-7, 4, 3]) - (-3.7397879600338288e-2)).abs() < TOL);
        assert!((w3([5, 6, 7], [3, -4, 1]) - (-1.9920476822239894e-1)).abs() < TOL);
        assert!((w3([12, 12, 12], [0, 0, 0]) - (-9.3059500211290752e-2)).abs() < TOL);
        assert!((w3([8, 8, 8], [2, 4, -6]) - (-6.2329799333897144e-2)).abs() < TOL);
        assert!((w3([7, 7, 6], [5, -3, -2]) - 4.6524210519923545e-2).abs() < TOL);
    }

    #[test]
    fn three_j_selection_zeros() {
        assert_eq!(w3([2, 4, 8], [0, 0, 0]), 0.0); // triangle violated
        assert_eq!(w3([3, 4, 3], [1, 4, -3]), 0.0); // m1+m2+m3 != 0
        assert_eq!(w3([2, 2, 2], [0, 0, 0]), 0.0); // odd perimeter with all m = 0
    }

    #[test]
    fn three_j_argument_errors() {
        assert!(wigner_3j(h(-2), h(2), h(2), h(0), h(0), h(0)).is_err());
        assert!(wigner_3j(h(2), h(2), h(2), h(1), h(0), h(-1)).is_err()); // m parity
        assert!(wigner_3j(h(2), h(2), h(2), h(4), h(-2), h(-2)).is_err()); // |m| > j
    }

    #[test]
    fn pinned_6j_values() {
        assert!((w6([2, 2, 2, 0, 2, 2]) - (-1.0 / 3.0)).abs() < TOL);
        assert!((w6([2, 2, 2, 2, 2, 2]) - (1.0 / 6.0)).abs() < TOL);
        assert!((w6([4, 4, 4, 4, 4, 4]) - (-3.0 / 70.0)).abs() < TOL);
        assert!((w6([9, 2, 9, 9, 2, 9]) - (-19.0 / 198.0)).abs() < TOL);
        assert!((w6([6, 6, 6, 6, 6, 6]) - (-1.0 / 14.0)).abs() < TOL);
        assert!((w6([5, 3, 2, 1, 3, 4]) - 1.7078251276599329e-1).abs() < TOL);
        // accidental zero with valid triads:
        assert_eq!(w6([9, 4, 9, 3, 4, 3]), 0.0);
        // invalid triad (non-integer perimeter) is a plain zero, not an error:
        assert_eq!(w6([12, 9, 9, 9, 12, 3]), 0.0);
    }

    #[test]
    fn six_j_rejects_negative_j() {
        assert!(wigner_6j(h(2), h(2), h(2), h(-2), h(2), h(2)).is_err());
    }

    /// Orthogonality: sum over m1, m2 of (2 j3 + 1) 3j(...)^2 = 1 for every valid
    /// (j1, j2, j3, m3). Small grid here; the full j <= 4 grid runs in the acceptance suite.
    #[test]
    fn three_j_orthogonality_small_grid() {
        for tj1 in 0..=4 {
            for tj2 in 0..=4 {
                for tj3 in (tj1 - tj2).abs()..=(tj1 + tj2) {
                    if (tj1 + tj2 + tj3) % 2 != 0 {
                        continue;
                    }
                    for tm3 in (-tj3..=tj3).step_by(2) {
                        let mut sum = 0.0;
                        for tm1 in (-tj1..=tj1).step_by(2) {
                            let tm2 = -tm3 - tm1;
                            if tm2.abs() > tj2 {
                                continue;
                            }
                            let v = w3([tj1, tj2, tj3], [tm1, tm2, tm3]);
                            sum += (tj3 as f64 + 1.0) * v * v;
                        }
                        assert!((sum - 1.0).abs() < 1e-12, "({tj1},{tj2},{tj3},{tm3}): {sum}");
                    }
                }
            }
        }
    }

    /// Column permutations: even permutations leave the symbol unchanged, odd ones and
    /// simultaneous m -> -m multiply by (-1)^(j1+j2+j3).
    #[test]
    fn three_j_symmetries() {
        let cases = [
            ([9, 4, 9], [-1, 0, 1]),
            ([5, 6, 7], [3, -4, 1]),
            ([8, 8, 8], [2, 4, -6]),
            ([3, 2, 5], [1, 2, -3]),
        ];
        for (tj, tm) in cases {
            let v = w3(tj, tm);
            let phase = if ((tj[0] + tj[1] + tj[2]) / 2) % 2 == 0 { 1.0 } else { -1.0 };
            // even (cyclic) permutation
            let cyc = w3([tj[1], tj[2], tj[0]], [tm[1], tm[2], tm[0]]);
            assert!((cyc - v).abs() < TOL);
            // odd permutation (swap first two columns)
            let swap = w3([tj[1], tj[0], tj[2]], [tm[1], tm[0], tm[2]]);
            assert!((swap - phase * v).abs() < TOL);
            // m negation
            let neg = w3(tj, [-tm[0], -tm[1], -tm[2]]);
            assert!((neg - phase * v).abs() < TOL);
        }
    }

    /// Biedenharn-Elliott sum rule over a set of small arguments.
    #[test]
    fn six_j_biedenharn_elliott() {
        // sum_x (-1)^(phi+x) (2x+1) {a b x; c d p}{c d x; e f q}{e f x; b a r}
        //   = {p q r; e a d}{p q r; f b c},  phi = a+b+c+d+e+f+p+q+r  (doubled ints here)
        let cases = [
            [2, 2, 2, 2, 2, 2, 2, 2, 2],
            [2, 4, 2, 4, 2, 2, 4, 2, 2],
            [1, 1, 2, 1, 1, 2, 1, 1, 2],
            [3, 2, 3, 2, 3, 2, 1, 3, 1],
        ];
        for [a, b, c, d, e, f, p, q, r] in cases {
            let phi2 = a + b + c + d + e + f + p + q + r;
            if phi2 % 2 != 0 {
                continue;
            }
            let mut lhs = 0.0;
            for tx in 0..=20 {
                let t1 = w6([a, b, tx, c, d, p]);
                let t2 = w6([c, d, tx, e, f, q]);
                let t3 = w6([e, f, tx, b, a, r]);
                let term = t1 * t2 * t3;
                if term == 0.0 {
                    continue;
                }
                let sgn = if ((phi2 + tx) / 2) % 2 == 0 { 1.0 } else { -1.0 };
                lhs += sgn * (tx as f64 + 1.0) * term;
            }
            let rhs = w6([p, q, r, e, a, d]) * w6([p, q, r, f, b, c]);
            assert!((lhs - rhs).abs() < 1e-12, "case {:?}: {lhs} vs {rhs}", [a, b, c]);
        }
    }
}
