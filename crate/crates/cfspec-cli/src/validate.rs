//! Built-in validation suite: fast invariant checks over every layer, run
//! against the configured ion species and exchange constants. Each check
//! prints one line; the suite passes only if every check does.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cfspec::units::MU_B_GHZ_PER_T;
use cfspec::{
    build_pair, doublet_g_factors, line_list, mean_field_pair_member, mean_field_single,
    pair_product, project_ion, render, selection_rule, wigner_3j, wigner_6j,
    CrystalFieldParams, EffectiveIon, ExchangeTensor, FieldAxis, FieldLines, HalfInt, IonSpec,
    IonSystem, Irrep, LineClass, PairIrrep, PairKind, Phase, Polarisation, StateSymmetry,
    Sublattice, SweepConfig, TransitionLine, C64,
};

use crate::commands::Resolved;

type CheckResult = Result<(), String>;

fn h(twice: i32) -> HalfInt {
    HalfInt::from_twice(twice)
}

fn wigner_closed_forms() -> CheckResult {
    // 3j(j j 0; m -m 0) = (-1)^(j-m) / sqrt(2j+1)
    for tj in 1..=4_i32 {
        let mut tm = -tj;
        while tm <= tj {
            let got = wigner_3j(h(tj), h(tj), h(0), h(tm), h(-tm), h(0))
                .map_err(|e| e.to_string())?;
            let sign = if (tj - tm) % 4 == 0 { 1.0 } else { -1.0 };
            let want = sign / ((tj + 1) as f64).sqrt();
            if (got - want).abs() > 1e-12 {
                return Err(format!("3j({tj}/2,{tj}/2,0) at 2m={tm}: {got} vs {want}"));
            }
            tm += 2;
        }
    }
    // 6j(j1 j2 j3; 0 j3 j2) = (-1)^(j1+j2+j3) / sqrt((2j2+1)(2j3+1))
    for (tj1, tj2, tj3) in [(2, 2, 2), (2, 4, 4), (4, 4, 4), (2, 3, 3), (4, 3, 3)] {
        let got = wigner_6j(h(tj1), h(tj2), h(tj3), h(0), h(tj3), h(tj2))
            .map_err(|e| e.to_string())?;
        let sign = if (tj1 + tj2 + tj3) % 4 == 0 { 1.0 } else { -1.0 };
        let want = sign / (((tj2 + 1) * (tj3 + 1)) as f64).sqrt();
        if (got - want).abs() > 1e-12 {
            return Err(format!("6j({tj1},{tj2},{tj3};0,..): {got} vs {want}"));
        }
    }
    Ok(())
}

fn wigner_orthogonality() -> CheckResult {
    // sum over j3, m3 of (2j3+1) 3j(m1 m2 m3) 3j(m1' m2' m3) = delta pairs
    for tj1 in 0..=4_i32 {
        for tj2 in 0..=4_i32 {
            let mut tm = Vec::new();
            let mut m1 = -tj1;
            while m1 <= tj1 {
                let mut m2 = -tj2;
                while m2 <= tj2 {
                    tm.push((m1, m2));
                    m2 += 2;
                }
                m1 += 2;
            }
            for &(a1, a2) in &tm {
                for &(b1, b2) in &tm {
                    let mut acc = 0.0;
                    let mut tj3 = (tj1 - tj2).abs();
                    while tj3 <= tj1 + tj2 {
                        // terms whose m3 exceeds j3 vanish identically
                        if a1 + a2 == b1 + b2 && (a1 + a2).abs() <= tj3 {
                            let w1 = wigner_3j(h(tj1), h(tj2), h(tj3), h(a1), h(a2), h(-a1 - a2))
                                .map_err(|e| e.to_string())?;
                            let w2 = wigner_3j(h(tj1), h(tj2), h(tj3), h(b1), h(b2), h(-b1 - b2))
                                .map_err(|e| e.to_string())?;
                            acc += ((tj3 + 1) as f64) * w1 * w2;
                        }
                        tj3 += 2;
                    }
                    let want = if (a1, a2) == (b1, b2) { 1.0 } else { 0.0 };
                    if (acc - want).abs() > 1e-12 {
                        return Err(format!(
                            "orthogonality (2j={tj1},{tj2}) at {a1},{a2} vs {b1},{b2}: {acc}"
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

fn random_cf(rng: &mut ChaCha8Rng, scale_ghz: f64) -> CrystalFieldParams {
    let mut raw = Vec::new();
    for k in [2_u32, 4, 6] {
        for q in 0..=(k as i32) {
            let re = rng.gen_range(-scale_ghz..scale_ghz);
            let im = if q == 0 { 0.0 } else { rng.gen_range(-scale_ghz..scale_ghz) };
            raw.push((k, q, C64::new(re, im)));
        }
    }
    CrystalFieldParams::new(&raw).expect("random parameters are well-formed")
}

fn with_cf(spec: &IonSpec, cf: CrystalFieldParams) -> Result<IonSystem, String> {
    let spec = IonSpec::new(
        spec.name.clone(),
        spec.basis.manifolds().to_vec(),
        cf,
        spec.rmes.clone(),
        spec.moment_mode,
    )
    .map_err(|e| e.to_string())?;
    IonSystem::new(spec).map_err(|e| e.to_string())
}

fn kramers_degeneracy(res: &Resolved) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..10 {
        let sys = with_cf(res.sys.spec(), random_cf(&mut rng, 3000.0))?;
        let es = sys.eigensystem([0.0; 3]).map_err(|e| e.to_string())?;
        for pair in es.energies.chunks(2) {
            let gap = pair[1] - pair[0];
            if gap.abs() > 1e-6 {
                return Err(format!("trial {trial}: doublet split by {gap} GHz"));
            }
        }
    }
    Ok(())
}

fn zeeman_linearity(res: &Resolved) -> CheckResult {
    let sys = &res.sys;
    let es0 = sys.eigensystem([0.0; 3]).map_err(|e| e.to_string())?;
    for manifold in [0, 1] {
        let pair = sys.lowest_doublet(&es0, manifold).map_err(|e| e.to_string())?;
        let g = doublet_g_factors(&es0, pair, sys.moments()).map_err(|e| e.to_string())?;
        for (axis, g_axis) in [(0, g.g_a), (1, g.g_b), (2, g.g_c)] {
            let mut b = [0.0; 3];
            b[axis] = 1e-3;
            let es = sys.eigensystem(b).map_err(|e| e.to_string())?;
            let at = sys.lowest_doublet(&es, manifold).map_err(|e| e.to_string())?;
            let split = es.energies[at.1] - es.energies[at.0];
            let want = g_axis * MU_B_GHZ_PER_T * 1e-3;
            if (split - want).abs() > 1e-3 * want.abs() {
                return Err(format!(
                    "manifold {manifold} axis {axis}: split {split} vs g prediction {want}"
                ));
            }
        }
    }
    Ok(())
}

fn project_at(sys: &IonSystem, b: [f64; 3]) -> Result<EffectiveIon, String> {
    let es = sys.eigensystem(b).map_err(|e| e.to_string())?;
    let z = sys.lowest_doublet(&es, 0).map_err(|e| e.to_string())?;
    let r = sys.lowest_doublet(&es, 1).map_err(|e| e.to_string())?;
    project_ion(sys, &es, z, r).map_err(|e| e.to_string())
}

fn decoupled_pair_sum(res: &Resolved) -> CheckResult {
    let ion1 = project_at(&res.sys, [0.02, -0.05, 0.8])?;
    let ion2 = project_at(&res.sys, [-0.1, 0.03, -0.6])?;
    let zero = ExchangeTensor { xx: 0.0, yy: 0.0, zz: 0.0 };
    let ps = build_pair(&ion1, &ion2, &zero).map_err(|e| e.to_string())?;
    let mut want: Vec<f64> = ion1
        .energies
        .iter()
        .flat_map(|&a| ion2.energies.iter().map(move |&b| a + b))
        .collect();
    want.sort_by(f64::total_cmp);
    let base = want[0];
    for (i, (&got, &w)) in ps.eigen.energies.iter().zip(&want).enumerate() {
        if (got - (w - base)).abs() > 1e-9 {
            return Err(format!("pair level {i}: {got} vs {}", w - base));
        }
    }
    Ok(())
}

fn mean_field_pins(_res: &Resolved) -> CheckResult {
    let cases = [
        (0.07, -0.65, 2.0, 2.039558389979, -1.831136364726, 1.555721545641, 1.987452883666),
        (0.1, -0.5, 2.9, 1.129380432407, -0.924038535606, 0.872703061406, 1.078044958207),
        (0.07, -0.65, 3.2, 1.274723993737, -1.144460227954, 0.972325966026, 1.242158052291),
    ];
    for (jp, jt, g, afm, pm, pin, pout) in cases {
        let xc = cfspec::ExchangeConstants {
            j_par: jp,
            j_perp: jt,
            ..cfspec::ExchangeConstants::default()
        };
        let checks = [
            (mean_field_single(&xc, Phase::Afm, 1, g), afm, "single afm"),
            (mean_field_single(&xc, Phase::Pm, 1, g), pm, "single pm"),
            (mean_field_pair_member(&xc, PairKind::InPlane, Phase::Afm, 1, g), pin, "pair in"),
            (mean_field_pair_member(&xc, PairKind::OutOfPlane, Phase::Afm, 1, g), pout, "pair out"),
        ];
        for (got, want, what) in checks {
            let v = got.map_err(|e| e.to_string())?;
            if v[0] != 0.0 || v[1] != 0.0 || (v[2] - want).abs() > 1e-9 {
                return Err(format!("{what} at ({jp},{jt},{g}): {v:?} vs {want}"));
            }
        }
        let s2 = mean_field_single(&xc, Phase::Afm, 2, g).map_err(|e| e.to_string())?;
        if (s2[2] + afm).abs() > 1e-9 {
            return Err(format!("sublattice 2 is not the mirror: {s2:?}"));
        }
    }
    Ok(())
}

fn selection_rule_table(_res: &Resolved) -> CheckResult {
    use Irrep::{G3, G4};
    use PairIrrep::{G1, G2};
    let single = [
        (G3, G3, Polarisation::Sigma),
        (G4, G4, Polarisation::Sigma),
        (G3, G4, Polarisation::Pi),
        (G4, G3, Polarisation::Pi),
    ];
    for (a, b, want) in single {
        let got = selection_rule(StateSymmetry::Single(a), StateSymmetry::Single(b))
            .map_err(|e| e.to_string())?;
        if got != want {
            return Err(format!("single {a}->{b}: {got} vs {want}"));
        }
    }
    let pair = [
        (G1, G1, Polarisation::Sigma),
        (G2, G2, Polarisation::Sigma),
        (G1, G2, Polarisation::Pi),
        (G2, G1, Polarisation::Pi),
    ];
    for (a, b, want) in pair {
        let got = selection_rule(StateSymmetry::Pair(a), StateSymmetry::Pair(b))
            .map_err(|e| e.to_string())?;
        if got != want {
            return Err(format!("pair {a}->{b}: {got} vs {want}"));
        }
    }
    if pair_product(G3, G4) != G1 || pair_product(G3, G3) != G2 {
        return Err("pair products are wrong".to_string());
    }
    Ok(())
}

/// Sweep parameters the checks share: the config's physics with every family
/// enabled and both polarisations present.
fn check_cfg(res: &Resolved) -> SweepConfig {
    SweepConfig {
        polarisations: vec![Polarisation::Pi, Polarisation::Sigma],
        include: cfspec::IncludeFlags::default(),
        field_values_t: Vec::new(),
        ..res.sweep_cfg.clone()
    }
}

fn zero_field_reference(res: &Resolved) -> CheckResult {
    let mut cfg = check_cfg(res);
    cfg.field_axis = FieldAxis::C;
    let fl = line_list(0.0, &cfg, &res.sys, &res.xc).map_err(|e| e.to_string())?;
    let mains: Vec<&TransitionLine> = fl
        .lines
        .iter()
        .filter(|l| l.class == LineClass::Main && l.allowed)
        .collect();
    let pi: Vec<_> = mains.iter().filter(|l| l.polarisation == Polarisation::Pi).collect();
    if pi.len() != 1 {
        return Err(format!("{} allowed pi mains at zero field", pi.len()));
    }
    if pi[0].frequency_ghz.abs() > 1e-9 {
        return Err(format!("pi main sits at {} GHz, not the reference", pi[0].frequency_ghz));
    }
    Ok(())
}

fn afm_field_reversal(res: &Resolved) -> CheckResult {
    let mut cfg = check_cfg(res);
    cfg.field_axis = FieldAxis::C;
    let b = 0.45 * cfg.boundaries.c[0];
    if b < 1e-6 {
        return Ok(());
    }
    let plus = line_list(b, &cfg, &res.sys, &res.xc).map_err(|e| e.to_string())?;
    let minus = line_list(-b, &cfg, &res.sys, &res.xc).map_err(|e| e.to_string())?;
    let freqs = |fl: &FieldLines, sub: Sublattice| -> Vec<f64> {
        fl.lines
            .iter()
            .filter(|l| l.class == LineClass::Main && l.sublattice == sub)
            .map(|l| l.frequency_ghz)
            .collect()
    };
    let p2 = freqs(&plus, Sublattice::Two);
    let m1 = freqs(&minus, Sublattice::One);
    if p2.is_empty() || p2.len() != m1.len() {
        return Err(format!("row mismatch: {} vs {}", p2.len(), m1.len()));
    }
    for (a, b) in p2.iter().zip(&m1) {
        if (a - b).abs() > 1e-6 {
            return Err(format!("reversal mismatch {a} vs {b}"));
        }
    }
    Ok(())
}

fn satellite_rigidity(res: &Resolved) -> CheckResult {
    let mut cfg = check_cfg(res);
    cfg.field_axis = FieldAxis::C;
    if cfg.satellite_offsets_ghz.is_empty() {
        cfg.satellite_offsets_ghz = vec![-50.0, 250.0];
    }
    for b in [0.0, 0.45 * cfg.boundaries.c[0]] {
        let fl = line_list(b, &cfg, &res.sys, &res.xc).map_err(|e| e.to_string())?;
        let mains: Vec<_> = fl.lines.iter().filter(|l| l.class == LineClass::Main).collect();
        let sats: Vec<_> =
            fl.lines.iter().filter(|l| l.class == LineClass::Satellite).collect();
        if sats.len() != mains.len() * cfg.satellite_offsets_ghz.len() {
            return Err(format!(
                "{} satellites for {} mains x {} offsets",
                sats.len(),
                mains.len(),
                cfg.satellite_offsets_ghz.len()
            ));
        }
        for m in &mains {
            for off in &cfg.satellite_offsets_ghz {
                let hit = sats.iter().any(|s| {
                    s.polarisation == m.polarisation
                        && s.sublattice == m.sublattice
                        && (s.frequency_ghz - m.frequency_ghz - off).abs() < 1e-9
                });
                if !hit {
                    return Err(format!("satellite at offset {off} is not rigid"));
                }
            }
        }
    }
    Ok(())
}

fn selection_consistency(res: &Resolved) -> CheckResult {
    let mut cfg = check_cfg(res);
    cfg.field_axis = FieldAxis::C;
    let fields = [0.0, 0.45 * cfg.boundaries.c[0], cfg.boundaries.c[1] + 0.7];
    let mut checked = 0;
    for b in fields {
        let fl = line_list(b, &cfg, &res.sys, &res.xc).map_err(|e| e.to_string())?;
        for l in &fl.lines {
            let natural =
                selection_rule(l.initial_sym, l.final_sym).map_err(|e| e.to_string())?;
            if l.allowed != (l.mixed || natural == l.polarisation) {
                return Err(format!(
                    "row at {b} T, {} GHz breaks the selection rule",
                    l.frequency_ghz
                ));
            }
            checked += 1;
        }
    }
    if checked == 0 {
        return Err("no rows to check".to_string());
    }
    Ok(())
}

fn pm_b_axis_mixing(res: &Resolved) -> CheckResult {
    let mut cfg = check_cfg(res);
    cfg.field_axis = FieldAxis::B;
    let b = cfg.boundaries.b + 0.78;
    let fl = line_list(b, &cfg, &res.sys, &res.xc).map_err(|e| e.to_string())?;
    let mixed: Vec<_> = fl
        .lines
        .iter()
        .filter(|l| l.class == LineClass::Main && l.mixed && l.allowed)
        .collect();
    if mixed.is_empty() {
        return Err(format!("no mixed main rows at {b} T along b"));
    }
    for m in &mixed {
        let twin = mixed.iter().any(|o| {
            o.polarisation != m.polarisation
                && (o.frequency_ghz - m.frequency_ghz).abs() < 1e-9
        });
        if !twin {
            return Err(format!(
                "mixed line at {} GHz lacks its opposite-polarisation twin",
                m.frequency_ghz
            ));
        }
    }
    Ok(())
}

fn intermediate_marker(res: &Resolved) -> CheckResult {
    let mut cfg = check_cfg(res);
    cfg.field_axis = FieldAxis::C;
    let [lo, hi] = cfg.boundaries.c;
    if hi <= lo {
        return Ok(());
    }
    let fl =
        line_list(0.5 * (lo + hi), &cfg, &res.sys, &res.xc).map_err(|e| e.to_string())?;
    if fl.phase != Phase::Intermediate || !fl.lines.is_empty() {
        return Err(format!("expected the empty intermediate marker, got {:?}", fl.phase));
    }
    Ok(())
}

fn render_column_area(res: &Resolved) -> CheckResult {
    let mut cfg = check_cfg(res);
    cfg.linewidth_ghz = 1.0;
    let row = |freq: f64, approx: bool| TransitionLine {
        frequency_ghz: freq,
        polarisation: Polarisation::Pi,
        class: LineClass::Main,
        sublattice: Sublattice::Both,
        pair_kind: None,
        allowed: true,
        approx,
        initial_sym: StateSymmetry::Single(Irrep::G3),
        final_sym: StateSymmetry::Single(Irrep::G4),
        mixed: false,
    };
    let table = vec![FieldLines {
        field_t: 0.0,
        phase: Phase::Afm,
        lines: vec![row(0.0, false), row(15.0, false), row(30.0, true)],
    }];
    let map = render(&table, &cfg).map_err(|e| e.to_string())?;
    let grid = &map.frequency_ghz;
    let step = grid[1] - grid[0];
    let mut area = 0.0;
    for k in 1..grid.len() {
        area += 0.5 * (map.intensity[0][k] + map.intensity[0][k - 1]) * step;
    }
    let want = 2.5;
    if (area - want).abs() > 0.01 * want {
        return Err(format!("column area {area} vs {want} (allowed + half-weight approx)"));
    }
    Ok(())
}

fn determinism(res: &Resolved) -> CheckResult {
    let mut cfg = check_cfg(res);
    cfg.field_axis = FieldAxis::C;
    cfg.field_values_t =
        vec![0.0, 0.45 * cfg.boundaries.c[0], cfg.boundaries.c[1] + 0.7];
    cfg.satellite_offsets_ghz = vec![-50.0];
    let once = cfspec::sweep(&cfg, &res.sys, &res.xc).map_err(|e| e.to_string())?;
    let twice = cfspec::sweep(&cfg, &res.sys, &res.xc).map_err(|e| e.to_string())?;
    let a = crate::table::line_table_csv(&once, None, &res.hash);
    let b = crate::table::line_table_csv(&twice, None, &res.hash);
    if a != b {
        return Err("repeated evaluation changed the serialized table".to_string());
    }
    Ok(())
}

/// Run every check; the report lists one line per check plus a summary.
pub fn run(res: &Resolved) -> (String, bool) {
    let checks: [(&str, fn(&Resolved) -> CheckResult); 13] = [
        ("wigner_closed_forms", |_| wigner_closed_forms()),
        ("wigner_orthogonality", |_| wigner_orthogonality()),
        ("kramers_degeneracy", kramers_degeneracy),
        ("zeeman_linearity", zeeman_linearity),
        ("decoupled_pair_sum", decoupled_pair_sum),
        ("mean_field_pins", mean_field_pins),
        ("selection_rule_table", selection_rule_table),
        ("zero_field_reference", zero_field_reference),
        ("afm_field_reversal", afm_field_reversal),
        ("satellite_rigidity", satellite_rigidity),
        ("selection_consistency", selection_consistency),
        ("pm_b_axis_mixing", pm_b_axis_mixing),
        ("intermediate_marker", intermediate_marker),
    ];
    let extra: [(&str, fn(&Resolved) -> CheckResult); 2] =
        [("render_column_area", render_column_area), ("determinism", determinism)];

    let mut out = String::new();
    let mut passed = 0;
    let mut failed = 0;
    for (name, check) in checks.iter().chain(extra.iter()) {
        match check(res) {
            Ok(()) => {
                passed += 1;
                out.push_str(&format!("ok   {name}\n"));
            }
            Err(msg) => {
                failed += 1;
                out.push_str(&format!("FAIL {name}: {msg}\n"));
            }
        }
    }
    out.push_str(&format!("{passed} passed, {failed} failed\n"));
    (out, failed == 0)
}
