//! Acceptance gate: nine numbered end-to-end checks, each printing one PASS
//! or FAIL line. Tolerances and runtime budgets are pinned next to each
//! check; the test fails if any check does.

use std::collections::HashMap;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cfspec::units::MU_B_GHZ_PER_T;
use cfspec::{
    build_pair, doublet_g_factors, exchange_tensor, line_list, mean_field_pair_member,
    mean_field_single, project_ion, selection_rule, sweep, two_nd_lines, wigner_3j,
    CrystalFieldParams, CoreError, EffectiveIon, ExchangeConstants, ExchangeTensor, FieldAxis,
    HalfInt, IncludeFlags, IonSpec, IonSystem, Irrep, LineClass, PairIrrep, PairKind, Phase,
    PhaseBoundaries, Polarisation, StateSymmetry, SweepConfig, C64,
};

const ION_FILE: &str = include_str!("../../../configs/ndgao3.ion");

type Check = fn() -> Result<(), String>;

fn h(twice: i32) -> HalfInt {
    HalfInt::from_twice(twice)
}

fn err<T>(e: T) -> String
where
    T: std::fmt::Display,
{
    e.to_string()
}

fn ion_system() -> Result<IonSystem, String> {
    IonSystem::new(cfspec::parse_ion_spec(ION_FILE).map_err(err)?).map_err(err)
}

fn budget(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    if elapsed > limit {
        return Err(format!("{what} took {elapsed:?}, over the {limit:?} budget"));
    }
    Ok(())
}

// 1. Wigner algebra: orthogonality and symmetry identities over every valid
//    symbol with all j <= 4 (tolerance 1e-12), plus three closed forms.
//    Budget: 1 s.
fn wigner_algebra() -> Result<(), String> {
    let started = Instant::now();
    const TOL: f64 = 1e-12;

    // exact closed forms
    let a = wigner_3j(h(2), h(2), h(0), h(0), h(0), h(0)).map_err(err)?;
    if (a + 1.0 / 3.0_f64.sqrt()).abs() > 1e-15 {
        return Err(format!("closed form (1,1,0): {a}"));
    }
    let b = wigner_3j(h(2), h(4), h(8), h(0), h(0), h(0)).map_err(err)?;
    if b != 0.0 {
        return Err(format!("triangle-violating symbol is {b}, not exactly zero"));
    }
    let c = wigner_3j(h(6), h(4), h(6), h(0), h(0), h(0)).map_err(err)?;
    if (c - 2.0 * 105.0_f64.sqrt() / 105.0).abs() > 1e-15 {
        return Err(format!("closed form (3,2,3): {c}"));
    }

    // every valid symbol with j1, j2, j3 <= 4
    let mut cache: HashMap<(i32, i32, i32, i32, i32, i32), f64> = HashMap::new();
    for tj1 in 0..=8_i32 {
        for tj2 in 0..=8_i32 {
            let mut tj3 = (tj1 - tj2).abs();
            while tj3 <= (tj1 + tj2).min(8) {
                let mut tm1 = -tj1;
                while tm1 <= tj1 {
                    let mut tm2 = -tj2;
                    while tm2 <= tj2 {
                        let tm3 = -tm1 - tm2;
                        if tm3.abs() <= tj3 {
                            let v = wigner_3j(h(tj1), h(tj2), h(tj3), h(tm1), h(tm2), h(tm3))
                                .map_err(err)?;
                            cache.insert((tj1, tj2, tj3, tm1, tm2, tm3), v);
                        }
                        tm2 += 2;
                    }
                    tm1 += 2;
                }
                tj3 += 2;
            }
        }
    }

    // symmetry identities on every cached symbol: cyclic invariance, the
    // column-swap phase, and the m-negation phase
    for (&(tj1, tj2, tj3, tm1, tm2, tm3), &v) in &cache {
        let phase = if ((tj1 + tj2 + tj3) / 2) % 2 == 0 { 1.0 } else { -1.0 };
        let cyc = cache[&(tj2, tj3, tj1, tm2, tm3, tm1)];
        let swap = cache[&(tj2, tj1, tj3, tm2, tm1, tm3)];
        let neg = cache[&(tj1, tj2, tj3, -tm1, -tm2, -tm3)];
        if (cyc - v).abs() > TOL || (swap - phase * v).abs() > TOL || (neg - phase * v).abs() > TOL
        {
            return Err(format!("symmetry broken at ({tj1},{tj2},{tj3};{tm1},{tm2},{tm3})"));
        }
    }

    let get = |tj3: i32, tm1: i32, tm2: i32, tj1: i32, tj2: i32| -> f64 {
        cache.get(&(tj1, tj2, tj3, tm1, tm2, -tm1 - tm2)).copied().unwrap_or(0.0)
    };
    for tj1 in 0..=8_i32 {
        for tj2 in 0..=8_i32 {
            // completeness: fixed (j3, m3), summed over m1
            let mut tj3 = (tj1 - tj2).abs();
            while tj3 <= (tj1 + tj2).min(8) {
                let mut tm3 = -tj3;
                while tm3 <= tj3 {
                    let mut acc = 0.0;
                    let mut tm1 = -tj1;
                    while tm1 <= tj1 {
                        let tm2 = -tm3 - tm1;
                        if tm2.abs() <= tj2 {
                            let v = get(tj3, tm1, tm2, tj1, tj2);
                            acc += f64::from(tj3 + 1) * v * v;
                        }
                        tm1 += 2;
                    }
                    if (acc - 1.0).abs() > TOL {
                        return Err(format!(
                            "completeness at (2j = {tj1},{tj2},{tj3}; 2m3 = {tm3}): {acc}"
                        ));
                    }
                    tm3 += 2;
                }
                tj3 += 2;
            }
            // orthogonality: fixed m-columns, summed over j3 (restricted to
            // the j <= 4 window, which is closed here since j1 + j2 <= 8
            // never exceeds it when both are <= 2; larger sums need every
            // j3 up to j1 + j2, so only run pairs whose full range fits)
            if tj1 + tj2 > 8 {
                continue;
            }
            let mut columns = Vec::new();
            let mut tm1 = -tj1;
            while tm1 <= tj1 {
                let mut tm2 = -tj2;
                while tm2 <= tj2 {
                    columns.push((tm1, tm2));
                    tm2 += 2;
                }
                tm1 += 2;
            }
            for &(a1, a2) in &columns {
                for &(b1, b2) in &columns {
                    if a1 + a2 != b1 + b2 {
                        continue;
                    }
                    let mut acc = 0.0;
                    let mut tj3 = (tj1 - tj2).abs();
                    while tj3 <= tj1 + tj2 {
                        if (a1 + a2).abs() <= tj3 {
                            acc += f64::from(tj3 + 1)
                                * get(tj3, a1, a2, tj1, tj2)
                                * get(tj3, b1, b2, tj1, tj2);
                        }
                        tj3 += 2;
                    }
                    let want = if (a1, a2) == (b1, b2) { 1.0 } else { 0.0 };
                    if (acc - want).abs() > TOL {
                        return Err(format!(
                            "orthogonality at (2j = {tj1},{tj2}; {a1},{a2} vs {b1},{b2}): {acc}"
                        ));
                    }
                }
            }
        }
    }
    budget(started.elapsed(), Duration::from_secs(1), "wigner identities")
}

// 2. Kramers degeneracy: 100 random Hermiticity-constrained crystal-field
//    sets on the two-manifold basis, zero field; eigenvalues pair to 1e-6
//    GHz. Budget: 10 s.
fn kramers_degeneracy() -> Result<(), String> {
    let started = Instant::now();
    let spec = cfspec::parse_ion_spec(ION_FILE).map_err(err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(2026_08_18);
    for trial in 0..100 {
        let scale = rng.gen_range(500.0..30_000.0);
        let mut raw = Vec::new();
        for k in [2_u32, 4, 6] {
            for q in 0..=(k as i32) {
                let re = rng.gen_range(-scale..scale);
                let im = if q == 0 { 0.0 } else { rng.gen_range(-scale..scale) };
                raw.push((k, q, C64::new(re, im)));
            }
        }
        let cf = CrystalFieldParams::new(&raw).map_err(err)?;
        let trial_spec = IonSpec::new(
            spec.name.clone(),
            spec.basis.manifolds().to_vec(),
            cf,
            spec.rmes.clone(),
            spec.moment_mode,
        )
        .map_err(err)?;
        let sys = IonSystem::new(trial_spec).map_err(err)?;
        let es = sys.eigensystem([0.0; 3]).map_err(err)?;
        for (d, pair) in es.energies.chunks(2).enumerate() {
            let gap = (pair[1] - pair[0]).abs();
            if gap > 1e-6 {
                return Err(format!("trial {trial}, doublet {d}: split {gap} GHz"));
            }
        }
    }
    budget(started.elapsed(), Duration::from_secs(10), "100 random sets")
}

// 3. Zeeman linearity: at 1 mT along each crystal axis, both members of both
//    lowest doublets shift by -/+ g_axis * mu_B * B / 2 from doublet_g_factors,
//    to relative error 1e-3.
fn zeeman_linearity() -> Result<(), String> {
    let sys = ion_system()?;
    let es0 = sys.eigensystem([0.0; 3]).map_err(err)?;
    // energies are ground-referenced; shifts need the absolute scale back
    let abs = |es: &cfspec::EigenSystem, k: usize| es.ground_energy_ghz + es.energies[k];
    const B: f64 = 1e-3;
    for manifold in [0, 1] {
        let pair0 = sys.lowest_doublet(&es0, manifold).map_err(err)?;
        let e0 = 0.5 * (abs(&es0, pair0.0) + abs(&es0, pair0.1));
        let g = doublet_g_factors(&es0, pair0, sys.moments()).map_err(err)?;
        for (axis, g_axis) in [(0, g.g_a), (1, g.g_b), (2, g.g_c)] {
            let mut bvec = [0.0; 3];
            bvec[axis] = B;
            let es = sys.eigensystem(bvec).map_err(err)?;
            let pair = sys.lowest_doublet(&es, manifold).map_err(err)?;
            let half = g_axis * MU_B_GHZ_PER_T * B / 2.0;
            let shifts = [abs(&es, pair.0) - e0, abs(&es, pair.1) - e0];
            for (shift, want) in shifts.into_iter().zip([-half, half]) {
                if (shift - want).abs() > 1e-3 * want.abs() {
                    return Err(format!(
                        "manifold {manifold}, axis {axis}: shift {shift} vs linear {want}"
                    ));
                }
            }
        }
    }
    Ok(())
}

fn project_at(sys: &IonSystem, b: [f64; 3]) -> Result<EffectiveIon, String> {
    let es = sys.eigensystem(b).map_err(err)?;
    let z = sys.lowest_doublet(&es, 0).map_err(err)?;
    let r = sys.lowest_doublet(&es, 1).map_err(err)?;
    project_ion(sys, &es, z, r).map_err(err)
}

// 4. Decoupled pair: with a zero coupling tensor, the 16 pair eigenvalues
//    equal the sorted pairwise sums of the member levels to 1e-9 GHz, for
//    100 random field configurations.
fn decoupled_pair_sums() -> Result<(), String> {
    let sys = ion_system()?;
    let zero = ExchangeTensor { xx: 0.0, yy: 0.0, zz: 0.0 };
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for trial in 0..100 {
        let mut field = || {
            [
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ]
        };
        let ion1 = project_at(&sys, field())?;
        let ion2 = project_at(&sys, field())?;
        let ps = build_pair(&ion1, &ion2, &zero).map_err(err)?;
        let mut want: Vec<f64> = ion1
            .energies
            .iter()
            .flat_map(|&a| ion2.energies.iter().map(move |&b| a + b))
            .collect();
        want.sort_by(f64::total_cmp);
        for (k, (&got, &w)) in ps.eigen.energies.iter().zip(&want).enumerate() {
            if (got - (w - want[0])).abs() > 1e-9 {
                return Err(format!("trial {trial}, level {k}: {got} vs {}", w - want[0]));
            }
        }
    }
    Ok(())
}

// 5. Ising-pair first order: with transverse constants zeroed and the default
//    longitudinal ones, every two-ion line's exchange shift matches
//    -2 Jzz (m_i m_j - m_g m_g) to 5%, for each pair geometry whose exchange
//    scale stays at or below a tenth of the smallest doublet splitting.
fn ising_pair_first_order() -> Result<(), String> {
    let sys = ion_system()?;
    let es0 = sys.eigensystem([0.0; 3]).map_err(err)?;
    let z0 = sys.lowest_doublet(&es0, 0).map_err(err)?;
    let g = doublet_g_factors(&es0, z0, sys.moments()).map_err(err)?;
    let xc = ExchangeConstants { j_par_prime: 0.0, j_perp_prime: 0.0, ..Default::default() };
    let zero = ExchangeTensor { xx: 0.0, yy: 0.0, zz: 0.0 };

    let mut evaluated = 0;
    for kind in [PairKind::InPlane, PairKind::OutOfPlane] {
        let f1 = mean_field_pair_member(&xc, kind, Phase::Afm, 1, g.g_c).map_err(err)?;
        let f2 = mean_field_pair_member(&xc, kind, Phase::Afm, 2, g.g_c).map_err(err)?;
        let ion1 = project_at(&sys, f1)?;
        let ion2 = project_at(&sys, f2)?;
        let tensor = exchange_tensor(&xc, kind, (g.g_a, g.g_b, g.g_c)).map_err(err)?;
        if tensor.xx != 0.0 || tensor.yy != 0.0 {
            return Err("transverse exchange did not zero out".to_string());
        }
        let mz = |ion: &EffectiveIon, i: usize| ion.moments[2][(i, i)].re;

        let d_min = [&ion1, &ion2]
            .iter()
            .flat_map(|i| [i.energies[1] - i.energies[0], i.energies[3] - i.energies[2]])
            .fold(f64::INFINITY, f64::min);
        let scale = cfspec::TWO_ND_TARGETS
            .iter()
            .chain(std::iter::once(&(0, 0)))
            .map(|&(i, j)| (2.0 * tensor.zz * mz(&ion1, i) * mz(&ion2, j)).abs())
            .fold(0.0, f64::max);
        if scale > d_min / 10.0 {
            continue; // outside the perturbative premise for this geometry
        }
        evaluated += 1;

        let full = two_nd_lines(&build_pair(&ion1, &ion2, &tensor).map_err(err)?).map_err(err)?;
        let free = two_nd_lines(&build_pair(&ion1, &ion2, &zero).map_err(err)?).map_err(err)?;
        for (i, j) in cfspec::TWO_ND_TARGETS {
            let f_full = full
                .iter()
                .find(|l| l.target == (i, j))
                .ok_or("missing target in coupled lines")?
                .frequency_ghz;
            let f_free = free
                .iter()
                .find(|l| l.target == (i, j))
                .ok_or("missing target in decoupled lines")?
                .frequency_ghz;
            let got = f_full - f_free;
            let want = -2.0 * tensor.zz * (mz(&ion1, i) * mz(&ion2, j) - mz(&ion1, 0) * mz(&ion2, 0));
            if (got - want).abs() > 0.05 * want.abs() + 1e-9 {
                return Err(format!(
                    "{kind:?} target ({i},{j}): shift {got} vs first order {want}"
                ));
            }
        }
    }
    if evaluated == 0 {
        return Err("no pair geometry satisfied the perturbative premise".to_string());
    }
    Ok(())
}

fn grid_cfg(axis: FieldAxis, values: Vec<f64>) -> SweepConfig {
    SweepConfig {
        field_axis: axis,
        field_values_t: values,
        boundaries: PhaseBoundaries { c: [1.1, 2.3], b: 1.72 },
        polarisations: vec![Polarisation::Pi, Polarisation::Sigma],
        satellite_offsets_ghz: Vec::new(),
        linewidth_ghz: 1.0,
        include: IncludeFlags::default(),
        hot_band_everywhere: false,
    }
}

// 6. Selection rules: the eight transition classes map to their exact
//    polarisations, and every line emitted across a 0 to 3 T sweep in 0.01 T
//    steps agrees with the rule its own symmetry labels imply.
fn selection_rules() -> Result<(), String> {
    use Irrep::{G3, G4};
    use PairIrrep::{G1, G2};
    let table = [
        (StateSymmetry::Single(G3), StateSymmetry::Single(G3), Polarisation::Sigma),
        (StateSymmetry::Single(G4), StateSymmetry::Single(G4), Polarisation::Sigma),
        (StateSymmetry::Single(G3), StateSymmetry::Single(G4), Polarisation::Pi),
        (StateSymmetry::Single(G4), StateSymmetry::Single(G3), Polarisation::Pi),
        (StateSymmetry::Pair(G1), StateSymmetry::Pair(G1), Polarisation::Sigma),
        (StateSymmetry::Pair(G2), StateSymmetry::Pair(G2), Polarisation::Sigma),
        (StateSymmetry::Pair(G1), StateSymmetry::Pair(G2), Polarisation::Pi),
        (StateSymmetry::Pair(G2), StateSymmetry::Pair(G1), Polarisation::Pi),
    ];
    for (from, to, want) in table {
        let got = selection_rule(from, to).map_err(err)?;
        if got != want {
            return Err(format!("{from:?} -> {to:?} gave {got}, want {want}"));
        }
    }

    let sys = ion_system()?;
    let xc = ExchangeConstants::default();
    let cfg = grid_cfg(FieldAxis::C, (0..=300).map(|i| f64::from(i) * 0.01).collect());
    let table = sweep(&cfg, &sys, &xc).map_err(err)?;
    let mut rows = 0_u64;
    for fl in &table {
        for l in &fl.lines {
            let natural = selection_rule(l.initial_sym, l.final_sym).map_err(err)?;
            if l.allowed != (l.mixed || natural == l.polarisation) {
                return Err(format!(
                    "violation at {} T, {} GHz ({:?} -> {:?}, {})",
                    fl.field_t, l.frequency_ghz, l.initial_sym, l.final_sym, l.polarisation
                ));
            }
            rows += 1;
        }
    }
    if rows == 0 {
        return Err("sweep emitted no lines".to_string());
    }
    Ok(())
}

// 7. Spectrum structure with the bundled species file and default exchange
//    constants: (a) zero-field sigma-pi main splitting in 20 GHz +/- 30%;
//    (b) each zero-field two-ion line 50 GHz +/- 30% above some main line;
//    (c) the field-polarized phase emits exactly half as many main rows as
//    the ordered phase; (d) along b, the ordered phase emits one allowed
//    main line per polarisation. The full 301-point sweep stays under 1 min.
fn spectrum_structure() -> Result<(), String> {
    let sys = ion_system()?;
    let xc = ExchangeConstants::default();
    let at = |axis: FieldAxis, b: f64| -> Result<Vec<cfspec::TransitionLine>, String> {
        Ok(line_list(b, &grid_cfg(axis, Vec::new()), &sys, &xc).map_err(err)?.lines)
    };

    // (a) zero field: one allowed main per polarisation, split by ~20 GHz
    let zero = at(FieldAxis::C, 0.0)?;
    let main_freq = |pol: Polarisation| -> Result<f64, String> {
        let m: Vec<f64> = zero
            .iter()
            .filter(|l| l.class == LineClass::Main && l.allowed && l.polarisation == pol)
            .map(|l| l.frequency_ghz)
            .collect();
        if m.len() != 1 {
            return Err(format!("{} allowed {pol} main rows at zero field", m.len()));
        }
        Ok(m[0])
    };
    let split = main_freq(Polarisation::Sigma)? - main_freq(Polarisation::Pi)?;
    if !(14.0..=26.0).contains(&split) {
        return Err(format!("sigma-pi splitting {split} GHz outside 20 +/- 30%"));
    }

    // (b) zero field: every two-ion row 35 to 65 GHz above some main row
    let mains: Vec<f64> = zero
        .iter()
        .filter(|l| l.class == LineClass::Main)
        .map(|l| l.frequency_ghz)
        .collect();
    let pairs: Vec<f64> = zero
        .iter()
        .filter(|l| l.class == LineClass::TwoNd)
        .map(|l| l.frequency_ghz)
        .collect();
    if pairs.is_empty() {
        return Err("no two-ion rows at zero field".to_string());
    }
    for f in &pairs {
        let placed = mains.iter().any(|m| (35.0..=65.0).contains(&(f - m)));
        if !placed {
            return Err(format!("two-ion line at {f} GHz not 50 +/- 15 GHz above a main line"));
        }
    }

    // (c) exactly half as many main rows in the field-polarized phase
    let count_mains = |rows: &[cfspec::TransitionLine]| {
        rows.iter().filter(|l| l.class == LineClass::Main).count()
    };
    let afm = count_mains(&at(FieldAxis::C, 0.5)?);
    let pm = count_mains(&at(FieldAxis::C, 3.0)?);
    if pm == 0 || afm != 2 * pm {
        return Err(format!("main rows: ordered {afm} vs polarized {pm}, want exactly half"));
    }

    // (d) along b in the ordered phase: one allowed main line per polarisation
    let b_rows = at(FieldAxis::B, 0.5)?;
    for pol in [Polarisation::Pi, Polarisation::Sigma] {
        let n = b_rows
            .iter()
            .filter(|l| l.class == LineClass::Main && l.allowed && l.polarisation == pol)
            .count();
        if n != 1 {
            return Err(format!("{n} allowed {pol} main lines along b, want 1"));
        }
    }

    // runtime: the full sweep within one minute
    let started = Instant::now();
    let cfg = grid_cfg(FieldAxis::C, (0..=300).map(|i| f64::from(i) * 0.01).collect());
    let table = sweep(&cfg, &sys, &xc).map_err(err)?;
    if table.len() != 301 {
        return Err(format!("sweep returned {} field points", table.len()));
    }
    budget(started.elapsed(), Duration::from_secs(60), "301-point sweep")
}

// 8. Mean-field arithmetic: the single-ion and pair-member formulas against
//    independently hand-computed values for three coupling triples, with the
//    sign flip between the two phases, to 1e-12 T.
fn mean_field_arithmetic() -> Result<(), String> {
    // per triple: single AFM / single PM / pair-in AFM / pair-in PM /
    // pair-out AFM / pair-out PM, all in tesla along c
    let cases: [(f64, f64, f64, [f64; 6]); 3] = [
        (
            0.07,
            -0.65,
            2.0,
            [
                2.039558389979700,
                -1.831136364726300,
                1.555721545641450,
                -1.347299520388050,
                1.987452883666350,
                -1.883241871039650,
            ],
        ),
        (
            0.1,
            -0.5,
            2.9,
            [
                1.129380432407586,
                -0.924038535606207,
                0.872703061405862,
                -0.667361164604483,
                1.078044958207241,
                -0.975374009806552,
            ],
        ),
        (
            0.07,
            -0.65,
            3.2,
            [
                1.274723993737312,
                -1.144460227953938,
                0.972325966025906,
                -0.842062200242531,
                1.242158052291469,
                -1.177026169399781,
            ],
        ),
    ];
    const TOL: f64 = 1e-12;
    for (j_par, j_perp, g_c, want) in cases {
        let xc = ExchangeConstants { j_par, j_perp, ..Default::default() };
        let got: [Result<[f64; 3], CoreError>; 6] = [
            mean_field_single(&xc, Phase::Afm, 1, g_c),
            mean_field_single(&xc, Phase::Pm, 1, g_c),
            mean_field_pair_member(&xc, PairKind::InPlane, Phase::Afm, 1, g_c),
            mean_field_pair_member(&xc, PairKind::InPlane, Phase::Pm, 1, g_c),
            mean_field_pair_member(&xc, PairKind::OutOfPlane, Phase::Afm, 1, g_c),
            mean_field_pair_member(&xc, PairKind::OutOfPlane, Phase::Pm, 1, g_c),
        ];
        for (k, (g, w)) in got.into_iter().zip(want).enumerate() {
            let v = g.map_err(err)?;
            if v[0] != 0.0 || v[1] != 0.0 || (v[2] - w).abs() > TOL {
                return Err(format!("({j_par},{j_perp},{g_c}) case {k}: {v:?} vs {w}"));
            }
        }
        // the ordered phase mirrors sublattices; the polarized phase does not
        let s2 = mean_field_single(&xc, Phase::Afm, 2, g_c).map_err(err)?;
        if (s2[2] + want[0]).abs() > TOL {
            return Err(format!("sublattice mirror broken: {s2:?}"));
        }
        let p2 = mean_field_single(&xc, Phase::Pm, 2, g_c).map_err(err)?;
        if (p2[2] - want[1]).abs() > TOL {
            return Err(format!("polarized-phase sublattices differ: {p2:?}"));
        }
    }
    Ok(())
}

// 9. Determinism: two consecutive sweep invocations of the binary produce
//    byte-identical output.
fn byte_determinism() -> Result<(), String> {
    let dir = tempfile::tempdir().map_err(err)?;
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "[sweep]\nfield_start_t = 0.0\nfield_stop_t = 3.0\nfield_step_t = 0.05\n")
        .map_err(err)?;
    let run = || -> Result<Vec<u8>, String> {
        let out = Command::new(env!("CARGO_BIN_EXE_cfspec"))
            .args(["sweep", "--config"])
            .arg(&cfg)
            .output()
            .map_err(err)?;
        if !out.status.success() {
            return Err(format!("sweep failed: {}", String::from_utf8_lossy(&out.stderr)));
        }
        Ok(out.stdout)
    };
    let first = run()?;
    let second = run()?;
    if first.is_empty() {
        return Err("sweep produced no output".to_string());
    }
    if first != second {
        return Err("consecutive runs differ".to_string());
    }
    Ok(())
}

#[test]
fn acceptance() {
    let checks: [(&str, Check); 9] = [
        ("1 wigner_algebra", wigner_algebra),
        ("2 kramers_degeneracy", kramers_degeneracy),
        ("3 zeeman_linearity", zeeman_linearity),
        ("4 decoupled_pair_sums", decoupled_pair_sums),
        ("5 ising_pair_first_order", ising_pair_first_order),
        ("6 selection_rules", selection_rules),
        ("7 spectrum_structure", spectrum_structure),
        ("8 mean_field_arithmetic", mean_field_arithmetic),
        ("9 byte_determinism", byte_determinism),
    ];
    let mut failures = Vec::new();
    for (label, check) in checks {
        let outcome = std::panic::catch_unwind(check)
            .unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(()) => println!("PASS {label}"),
            Err(msg) => {
                println!("FAIL {label}: {msg}");
                failures.push(label);
            }
        }
    }
    assert!(failures.is_empty(), "failed: {failures:?}");
}
