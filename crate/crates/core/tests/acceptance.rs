//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

mod common;

use std::collections::HashSet;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use diffshift::diffset::{construct_hadamard, construct_paley, construct_singer, verify_difference_set, BentFunctionSpec};
use diffshift::dihedral::{
    make_whitebox_instance, plant_hsp, solve_dihedral_hsp, verify_hsp_generator, verify_hsp_instance, HspWitness,
};
use diffshift::hidden_shift::{
    audit_peak_probability, default_max_trials, influence, injectivize, recover_shift, required_copies,
    run_algorithm1, verify_candidate, HiddenShiftInstance,
};
use diffshift::spectrum::{singer_gauss_relation, turyn_check, GaussSums, TURYN_TOLERANCE};
use diffshift::{AbelianGroup, DifferenceSet, FiniteField, Params};

use common::{dense_algorithm1, family_instances, shifted_indicator};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn certify(moduli: Vec<usize>, elements: &[Vec<usize>]) -> Result<DifferenceSet, String> {
    let g = AbelianGroup::new(moduli).map_err(|e| e.to_string())?;
    let els = elements
        .iter()
        .map(|c| g.element(c.clone()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    verify_difference_set(&g, &els).map_err(|e| e.to_string())
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let planar = certify(vec![13], &[vec![0], vec![1], vec![3], vec![9]])?;
    ensure(planar.params() == Params::new(13, 4, 1), || format!("{:?}", planar.params()))?;

    let listed = [[1, 1, 0, 0], [1, 1, 1, 0], [1, 1, 0, 1], [0, 0, 1, 1], [1, 0, 1, 1], [0, 1, 1, 1]];
    let hadamard = certify(vec![2; 4], &listed.map(|c| c.to_vec()))?;
    ensure(hadamard.params() == Params::new(16, 6, 2), || format!("{:?}", hadamard.params()))?;

    // a + bα + cα² written as [a, b, c].
    let paley_listed = [
        [1, 0, 0],
        [0, 1, 0],
        [1, 2, 2],
        [2, 2, 0],
        [2, 1, 0],
        [0, 2, 1],
        [1, 0, 1],
        [1, 0, 2],
        [1, 1, 1],
        [0, 0, 1],
        [0, 2, 2],
        [1, 2, 1],
        [2, 2, 1],
    ];
    let paley = certify(vec![3; 3], &paley_listed.map(|c| c.to_vec()))?;
    ensure(paley.params() == Params::new(27, 13, 6), || format!("{:?}", paley.params()))?;
    let field = FiniteField::new(3, vec![2, 1, 1, 1]).map_err(|e| e.to_string())?;
    let squares = construct_paley(&field).map_err(|e| e.to_string())?;
    ensure(squares.elements() == paley.elements(), || "listed set differs from the nonzero squares".into())?;

    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("(13,4,1), (16,6,2), (27,13,6) certified in {elapsed:.2?}"))
}

fn criterion_2_and_3(instances: &[common::Named]) -> (Check, Check) {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut flat = Ok(());
    let mut normalized = Ok(());
    for inst in instances {
        let r = match turyn_check::<f64>(&inst.set, TURYN_TOLERANCE) {
            Ok(r) => r,
            Err(e) => {
                flat = Err(format!("{}: {e}", inst.label));
                break;
            }
        };
        worst = worst.max(r.max_abs_deviation);
        let k = inst.set.params().k as f64;
        if flat.is_ok() && (!r.pass || r.trivial_value.re != k || r.trivial_value.im != 0.0) {
            flat = Err(format!(
                "{}: deviation {:e}, trivial value {}",
                inst.label, r.max_abs_deviation, r.trivial_value
            ));
        }
        let p = inst.set.params();
        let mine = Ratio::new((p.v - 1) * (p.k - p.lambda) + p.k * p.k, p.v * p.k);
        if normalized.is_ok() && (mine != Ratio::from_integer(1) || p.normalization_identity() != mine) {
            normalized = Err(format!("{}: {}", inst.label, p.normalization_identity()));
        }
    }
    let elapsed = start.elapsed();
    if flat.is_ok() && elapsed > Duration::from_secs(30) {
        flat = Err(format!("took {elapsed:?}"));
    }
    (
        flat.map(|_| {
            format!(
                "{} instances with v <= 4096, max deviation {worst:.2e}, {elapsed:.2?}",
                instances.len()
            )
        }),
        normalized.map(|_| format!("identity equals 1 exactly for {} certified sets", instances.len())),
    )
}

fn sample_shifts(v: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = vec![0, rng.gen_range(0..v), rng.gen_range(0..v)];
    s.dedup();
    s
}

fn criterion_4(small: &[common::Named]) -> Check {
    let mut worst = 0.0f64;
    let mut runs = 0;
    for (i, inst) in small.iter().enumerate() {
        let g = inst.set.group();
        for s in sample_shifts(g.order(), i as u64) {
            let hs = HiddenShiftInstance::blackbox(&inst.set, &g.element_at(s)).map_err(|e| e.to_string())?;
            let run = run_algorithm1::<f64>(&hs).map_err(|e| e.to_string())?;
            let oracle = dense_algorithm1(&inst.set, &shifted_indicator(&inst.set, s));
            for (a, b) in run.state.amplitudes().iter().zip(&oracle) {
                worst = worst.max((a - b).norm());
            }
            runs += 1;
            ensure(worst < 1e-9, || format!("{} shift {s}: amplitude error {worst:e}", inst.label))?;
        }
    }
    Ok(format!(
        "{runs} runs over {} instances with v <= 256, max amplitude error {worst:.2e}",
        small.len()
    ))
}

fn exact_peak(ds: &DifferenceSet, s: usize) -> Result<(f64, usize), String> {
    let hs = HiddenShiftInstance::blackbox(ds, &ds.group().element_at(s)).map_err(|e| e.to_string())?;
    let run = run_algorithm1::<f64>(&hs).map_err(|e| e.to_string())?;
    Ok((run.peak_probability, run.peak))
}

fn criterion_5(small: &[common::Named]) -> Check {
    let mut worst = 0.0f64;
    for (i, inst) in small.iter().enumerate() {
        let v = inst.set.group().order();
        let s = sample_shifts(v, 1000 + i as u64)[1];
        let (p, peak) = exact_peak(&inst.set, s)?;
        ensure(peak == s, || format!("{}: peak at {peak}, shift {s}", inst.label))?;
        let audit = audit_peak_probability(&inst.set.params());
        let dense = dense_algorithm1(&inst.set, &shifted_indicator(&inst.set, s))[s].norm_sqr();
        worst = worst.max((p - audit).abs()).max((dense - audit).abs());
        ensure(worst < 1e-9, || format!("{}: exact {p}, oracle {dense}, audit {audit}", inst.label))?;
    }

    let mut hadamard = Vec::new();
    for n in 2..=4 {
        let ds = construct_hadamard(&BentFunctionSpec::inner_product(n).unwrap()).map_err(|e| e.to_string())?;
        hadamard.push(exact_peak(&ds, 5)?.0);
    }
    ensure(hadamard.windows(2).all(|w| w[1] > w[0]) && hadamard.iter().all(|&p| p < 1.0), || {
        format!("hadamard peaks {hadamard:?}")
    })?;

    let singer = construct_singer(2, 6).map_err(|e| e.to_string())?;
    let (p127, _) = exact_peak(&singer, 17)?;
    ensure(p127 > 0.95, || format!("(127,63,31) peak {p127}"))?;

    let mut planes = Vec::new();
    for q in [3, 5, 7, 11, 13] {
        let ds = construct_singer(q, 2).map_err(|e| e.to_string())?;
        planes.push(exact_peak(&ds, 1)?.0);
    }
    ensure(planes.windows(2).all(|w| w[1] < w[0]), || format!("plane peaks {planes:?}"))?;

    Ok(format!(
        "audit error {worst:.1e}; hadamard n=2,3,4: {:.6}, {:.6}, {:.6}; (127,63,31): {p127:.6}; planes q=3..13: {}",
        hadamard[0],
        hadamard[1],
        hadamard[2],
        planes.iter().map(|p| format!("{p:.4}")).collect::<Vec<_>>().join(", ")
    ))
}

fn criterion_6() -> Check {
    let start = Instant::now();
    let mut recovered = 0;
    let mut trials = 0;
    for seed in 0..100u64 {
        let w = make_whitebox_instance(6, seed).map_err(|e| e.to_string())?;
        let inst = w.hidden_shift_instance().map_err(|e| e.to_string())?;
        let g = inst.diffset().group();
        // β = α^e hides D - e.
        let planted = g.element_at((127 - w.exponent() as usize) % 127);
        ensure(inst.secret() == Some(&planted), || "white-box secret convention".into())?;
        let max = default_max_trials(&inst.diffset().params());
        let r = recover_shift::<f64>(&inst, max, seed).map_err(|e| e.to_string())?;
        trials += r.trials_used;
        if let Some(h) = r.recovered {
            let (full, _) = verify_candidate(&inst, &h, None).map_err(|e| e.to_string())?;
            ensure(full, || format!("seed {seed}: returned {h} fails full verification"))?;
            if h == planted {
                recovered += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(recovered >= 90, || format!("recovered {recovered}/100"))?;
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("recovered {recovered}/100 using {trials} measurements in {elapsed:.2?}"))
}

fn criterion_7() -> Check {
    let sets = [
        ("paley q=7", construct_paley(&FiniteField::prime(7).unwrap())),
        ("hadamard n=2", construct_hadamard(&BentFunctionSpec::inner_product(2).unwrap())),
        ("singer q=2 d=2", construct_singer(2, 2)),
        ("singer q=3 d=2", construct_singer(3, 2)),
    ];
    let mut checked = 0;
    for (label, ds) in sets {
        let ds = ds.map_err(|e| e.to_string())?;
        let g = ds.group();
        let p = ds.params();
        let want = Ratio::new(2 * (p.k - p.lambda), p.v);
        for v in g.elements().unwrap() {
            let got = influence(&ds, &v).map_err(|e| e.to_string())?;
            let expect = if v == g.zero() { Ratio::from_integer(0) } else { want };
            ensure(got == expect, || format!("{label}: influence at {v} is {got}, expected {expect}"))?;
            checked += 1;
        }
    }
    Ok(format!("exact equality at {checked} shifts"))
}

fn copies_oracle(v: u64) -> usize {
    let e = (2.0 * (v as f64).log2()).ceil() as usize;
    e + 6
}

fn criterion_8() -> Check {
    let bound = 1.0 / 64.0 + 0.05;
    let mut report = Vec::new();
    for ds in [
        construct_hadamard(&BentFunctionSpec::inner_product(2).unwrap()).map_err(|e| e.to_string())?,
        construct_singer(3, 2).map_err(|e| e.to_string())?,
    ] {
        let v = ds.group().order();
        let m = required_copies(v as u64) as usize;
        ensure(m == copies_oracle(v as u64), || format!("copies for {v}: {m}"))?;
        let mut bad = 0;
        for seed in 0..200u64 {
            let f = injectivize(&ds, m, seed).map_err(|e| e.to_string())?;
            let distinct: HashSet<Vec<bool>> = f.table().into_iter().collect();
            ensure((distinct.len() == v) == f.is_injective(), || "injectivity check disagrees".into())?;
            if distinct.len() < v {
                bad += 1;
            }
        }
        let frac = bad as f64 / 200.0;
        ensure(frac <= bound, || format!("v={v}: non-injective fraction {frac}"))?;
        report.push(format!("v={v}, m={m}: {bad}/200"));
    }
    Ok(report.join("; "))
}

fn criterion_9() -> Check {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut pairs = 0u64;
    for n in 2..=10usize {
        let field = FiniteField::first_irreducible(2, n).map_err(|e| e.to_string())?;
        let alpha = field.find_primitive();
        let table = GaussSums::<f64>::new(&field, &alpha).map_err(|e| e.to_string())?;
        let q = field.size();
        let target = (q as f64).sqrt();
        for mu_log in 0..q - 1 {
            for beta in 1..q - 1 {
                let gsum = table.sum_by_log(mu_log, beta).map_err(|e| e.to_string())?;
                worst = worst.max((gsum.norm() - target).abs());
                pairs += 1;
            }
        }
        ensure(worst < 1e-8, || format!("GF(2^{n}): magnitude error {worst:e}"))?;
    }
    let mut ratios = Vec::new();
    let mut variance = 0.0f64;
    for d in 2..=9 {
        let r = singer_gauss_relation::<f64>(d, 1e-8).map_err(|e| e.to_string())?;
        variance = variance.max(r.ratio_variance);
        ensure(r.max_char_sum_deviation < 1e-8, || format!("d={d}: |χ(D)| off by {:e}", r.max_char_sum_deviation))?;
        ratios.push(r.ratio);
    }
    ensure(variance < 1e-8, || format!("ratio variance {variance:e}"))?;
    Ok(format!(
        "{pairs} pairs, max magnitude error {worst:.1e}; ratio {:.6} for d=2..9, max variance {variance:.1e}; {:.2?}",
        ratios[0],
        start.elapsed()
    ))
}

fn criterion_10() -> Check {
    let planar = construct_singer(3, 2).map_err(|e| e.to_string())?;
    let cases = vec![
        ("N=7", make_whitebox_instance(2, 3).and_then(|w| w.hidden_shift_instance())),
        (
            "N=13",
            HiddenShiftInstance::blackbox(&planar, &planar.group().element(vec![5]).unwrap()),
        ),
        ("N=127", make_whitebox_instance(6, 9).and_then(|w| w.hidden_shift_instance())),
    ];
    let mut notes = Vec::new();
    for (label, inst) in cases {
        let inst = inst.map_err(|e| e.to_string())?;
        let hsp = plant_hsp(&inst, 21).map_err(|e| e.to_string())?;
        let h = hsp.hidden_generator().cloned().ok_or("no planted generator")?;
        ensure(Some(&h) == inst.secret(), || format!("{label}: planted {h} but the shift is {:?}", inst.secret()))?;
        let verdict = verify_hsp_instance(&hsp).map_err(|e| e.to_string())?;
        ensure(verdict.valid, || format!("{label}: planted instance rejected: {:?}", verdict.witness))?;
        let sol = solve_dihedral_hsp(&hsp, None, 4).map_err(|e| e.to_string())?;
        ensure(sol.recovered.as_ref() == Some(&h), || format!("{label}: solver returned {:?}", sol.recovered))?;

        let base = hsp.group().base();
        let mut rejected = 0;
        for i in 0..base.order() {
            let wrong = base.element_at(i);
            if wrong == h {
                continue;
            }
            let v = verify_hsp_generator(&hsp, &wrong).map_err(|e| e.to_string())?;
            ensure(!v.valid && v.witness.is_some(), || format!("{label}: wrong generator {wrong} accepted"))?;
            rejected += 1;
        }
        let point = 3;
        let mut flipped = hsp.values()[point].clone();
        flipped[0] = !flipped[0];
        let perturbed = hsp.clone().with_value(point, flipped);
        let v = verify_hsp_instance(&perturbed).map_err(|e| e.to_string())?;
        let hits_point = match &v.witness {
            Some(HspWitness::NotInvariant { x, xh }) => {
                [x, xh].iter().any(|e| perturbed.group().index_of(e) == point)
            }
            _ => false,
        };
        ensure(!v.valid && hits_point, || format!("{label}: perturbation not caught: {:?}", v.witness))?;
        notes.push(format!(
            "{label}: h={h}, {} measurements, {rejected} wrong generators rejected",
            sol.shift_solver.trials_used
        ));
    }
    Ok(notes.join("; "))
}

fn main() {
    let all = family_instances(4096);
    let small: Vec<common::Named> = family_instances(256);
    let (c2, c3) = criterion_2_and_3(&all);
    let results: Vec<(u32, &str, Check)> = vec![
        (1, "published examples certify", criterion_1()),
        (2, "character sums are flat", c2),
        (3, "normalization identity", c3),
        (4, "exact simulation matches dense oracle", criterion_4(&small)),
        (5, "success probabilities", criterion_5(&small)),
        (6, "shift recovery on (127,63,31)", criterion_6()),
        (7, "influences", criterion_7()),
        (8, "injectivization Monte Carlo", criterion_8()),
        (9, "Gauss sums", criterion_9()),
        (10, "dihedral round trip", criterion_10()),
    ];
    let mut failures = 0;
    for (n, name, r) in &results {
        match r {
            Ok(detail) => println!("criterion {n:>2} PASS  {name}: {detail}"),
            Err(detail) => {
                failures += 1;
                println!("criterion {n:>2} FAIL  {name}: {detail}");
            }
        }
    }
    println!("{} of {} criteria passed", results.len() - failures, results.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
