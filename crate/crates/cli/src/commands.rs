use std::fmt;
use std::fs;

use serde::Serialize;
use serde_json::{json, Value};

use diffshift::diffset::{construct_hadamard, construct_paley, construct_singer, DifferenceSetDoc};
use diffshift::dihedral::{make_whitebox_instance, plant_hsp, solve_dihedral_hsp, verify_hsp_instance};
use diffshift::experiment::{run_sweep, SingerPoint, SweepConfig};
use diffshift::hidden_shift::{
    approx_success_probability, audit_peak_probability, default_max_trials, injectivize, recover_shift,
    required_copies, run_algorithm1, HiddenShiftInstance, InjectivizedFunction,
};
use diffshift::io::{DihedralDoc, InstanceDoc, WhiteboxDoc};
use diffshift::spectrum::{gauss_magnitudes, singer_gauss_relation, turyn_check_subset, TURYN_TOLERANCE};
use diffshift::{AbelianGroup, BentFunctionSpec, DifferenceSet, Error, FiniteField, GroupElement};

use crate::{Command, Common, Family};

const DEFAULT_SAMPLES: u64 = 100;
const GAUSS_TOLERANCE: f64 = 1e-8;

pub struct Outcome {
    pub json: Value,
    pub success: bool,
}

impl Outcome {
    fn ok(json: Value) -> Self {
        Outcome { json, success: true }
    }

    fn checked(json: Value, success: bool) -> Self {
        Outcome { json, success }
    }
}

/// A usage, input or resource problem; reported on standard error with exit code 2.
#[derive(Debug)]
pub struct Failure(String);

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure(format!("malformed JSON: {e}"))
    }
}

type CmdResult = Result<Outcome, Failure>;

pub fn run(common: &Common, command: &Command) -> CmdResult {
    match command {
        Command::Construct { family } => construct(common, family),
        Command::Verify => verify(common),
        Command::Spectrum => spectrum(common),
        Command::SimulateShift {
            secret,
            max_trials,
            dump_state,
        } => simulate_shift(common, secret.as_deref(), *max_trials, *dump_state),
        Command::Injectivize { copies } => injectivize_cmd(common, *copies),
        Command::DihedralMake { d } => dihedral_make(common, *d),
        Command::DihedralSolve => dihedral_solve(common),
        Command::GaussCheck { p, n } => gauss_check(common, *p, *n),
        Command::Sweep {
            singer_q,
            singer_d,
            hadamard,
        } => sweep(common, singer_q, singer_d, hadamard),
    }
}

pub fn emit(common: &Common, json: &Value) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(json)?;
    text.push('\n');
    match &common.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_value<S: Serialize>(x: &S) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn read_input(common: &Common) -> Result<Value, Failure> {
    let path = common
        .input
        .as_ref()
        .ok_or_else(|| Failure("this command needs --in <FILE>".into()))?;
    let text = fs::read_to_string(path).map_err(|e| Failure(format!("cannot read {}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

fn has_key(v: &Value, key: &str) -> bool {
    v.as_object().is_some_and(|o| o.contains_key(key))
}

fn check_cap(common: &Common, order: u64) -> Result<(), Failure> {
    match common.cap {
        Some(cap) if order > cap as u64 => Err(Error::Resource {
            size: order as u128,
            cap,
        }
        .into()),
        _ => Ok(()),
    }
}

/// `(q^{d+1} - 1)/(q - 1)` for the cap check, saturating on overflow. Invalid
/// `q` is left for the constructor to reject.
fn singer_order(q: u64, d: u32) -> u64 {
    match (q, d.checked_add(1).and_then(|e| q.checked_pow(e))) {
        (0 | 1, _) => 0,
        (_, Some(p)) => (p - 1) / (q - 1),
        (_, None) => u64::MAX,
    }
}

fn group_from_doc(common: &Common, doc: &DifferenceSetDoc) -> Result<AbelianGroup, Failure> {
    let g = AbelianGroup::new(doc.group.moduli.clone())?;
    check_cap(common, g.order() as u64)?;
    Ok(g)
}

fn parse_secret(group: &AbelianGroup, text: &str) -> Result<GroupElement, Failure> {
    let coords = text
        .split(',')
        .map(|c| c.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure(format!("invalid --secret {text:?}: {e}")))?;
    if coords.len() == 1 && group.rank() > 1 {
        if coords[0] >= group.order() {
            return Err(Failure(format!("--secret index {} is outside the group", coords[0])));
        }
        return Ok(group.element_at(coords[0]));
    }
    Ok(group.element(coords)?)
}

fn construct(common: &Common, family: &Family) -> CmdResult {
    let ds = match family {
        Family::Paley { p, n, modulus } => {
            check_cap(common, p.checked_pow(*n as u32).unwrap_or(u64::MAX))?;
            let field = match modulus {
                Some(m) => FiniteField::new(*p, m.clone())?,
                None => FiniteField::first_irreducible(*p, *n)?,
            };
            construct_paley(&field)?
        }
        Family::Hadamard { n, bits } => {
            let spec = match (n, bits) {
                (Some(n), None) => {
                    check_cap(common, 1u64.checked_shl(2 * *n as u32).unwrap_or(u64::MAX))?;
                    BentFunctionSpec::inner_product(*n)?
                }
                (None, Some(bits)) => {
                    check_cap(common, bits.len() as u64)?;
                    BentFunctionSpec::from_bits(bits)?
                }
                _ => return Err(Failure("construct hadamard needs exactly one of --n or --bits".into())),
            };
            construct_hadamard(&spec)?
        }
        Family::Singer { q, d } => {
            check_cap(common, singer_order(*q, *d))?;
            construct_singer(*q, *d)?
        }
    };
    Ok(Outcome::ok(to_value(&ds)))
}

fn rejection(e: Error) -> Result<Value, Failure> {
    match e {
        Error::NotDifferenceSet {
            first,
            first_count,
            second,
            second_count,
        } => Ok(json!({
            "valid": false,
            "witness": {
                "first": first,
                "first_count": first_count,
                "second": second,
                "second_count": second_count,
            },
        })),
        Error::Consistency(msg) | Error::Degenerate(msg) => Ok(json!({ "valid": false, "reason": msg })),
        other => Err(other.into()),
    }
}

fn verify(common: &Common) -> CmdResult {
    let input = read_input(common)?;
    if has_key(&input, "semidirect") {
        let doc: DihedralDoc = serde_json::from_value(input)?;
        check_cap(common, 2 * doc.group.moduli.iter().product::<usize>() as u64)?;
        let inst = doc.into_instance()?;
        let verdict = verify_hsp_instance(&inst)?;
        return Ok(Outcome::checked(to_value(&verdict), verdict.valid));
    }
    if has_key(&input, "diffset") {
        let doc: InstanceDoc = serde_json::from_value(input)?;
        group_from_doc(common, &doc.diffset)?;
        return match doc.into_instance() {
            Ok(inst) => Ok(Outcome::ok(json!({
                "valid": true,
                "params": inst.diffset().params(),
                "secret": inst.secret(),
            }))),
            Err(e) => Ok(Outcome::checked(rejection(e)?, false)),
        };
    }
    let doc: DifferenceSetDoc = serde_json::from_value(input)?;
    group_from_doc(common, &doc)?;
    match DifferenceSet::from_doc(doc) {
        Ok(ds) => Ok(Outcome::ok(json!({
            "valid": true,
            "params": ds.params(),
            "family": ds.family(),
        }))),
        Err(e) => Ok(Outcome::checked(rejection(e)?, false)),
    }
}

fn spectrum(common: &Common) -> CmdResult {
    let input = read_input(common)?;
    let doc: DifferenceSetDoc = if has_key(&input, "diffset") {
        serde_json::from_value(input["diffset"].clone())?
    } else {
        serde_json::from_value(input)?
    };
    let g = group_from_doc(common, &doc)?;
    let elements = doc
        .elements
        .into_iter()
        .map(|c| g.element(c))
        .collect::<Result<Vec<_>, _>>()?;
    let tol = common.tolerance.unwrap_or(TURYN_TOLERANCE);
    let summary = turyn_check_subset::<f64>(&g, &elements, tol)?.summary();
    Ok(Outcome::checked(to_value(&summary), summary.pass))
}

fn load_instance(common: &Common, secret: Option<&str>) -> Result<HiddenShiftInstance, Failure> {
    let input = read_input(common)?;
    if has_key(&input, "diffset") {
        if secret.is_some() {
            return Err(Failure("--secret conflicts with an instance document that fixes the oracle".into()));
        }
        let doc: InstanceDoc = serde_json::from_value(input)?;
        group_from_doc(common, &doc.diffset)?;
        return Ok(doc.into_instance()?);
    }
    let doc: DifferenceSetDoc = serde_json::from_value(input)?;
    group_from_doc(common, &doc)?;
    let ds = DifferenceSet::from_doc(doc)?;
    Ok(match secret {
        Some(text) => HiddenShiftInstance::blackbox(&ds, &parse_secret(ds.group(), text)?)?,
        None => HiddenShiftInstance::blackbox_seeded(&ds, common.seed)?,
    })
}

fn simulate_shift(common: &Common, secret: Option<&str>, max_trials: Option<u64>, dump_state: bool) -> CmdResult {
    let inst = load_instance(common, secret)?;
    let ds = inst.diffset();
    let g = ds.group();
    let p = ds.params();
    let run = run_algorithm1::<f64>(&inst)?;
    let samples = common.trials.unwrap_or(DEFAULT_SAMPLES);
    let counts = run.state.sample(common.seed, samples)?;
    let target = inst.secret().map(|s| g.index_of(s)).unwrap_or(run.peak);
    let budget = max_trials.unwrap_or_else(|| default_max_trials(&p));
    let solved = recover_shift::<f64>(&inst, budget, common.seed)?;
    let approx = approx_success_probability(&p);
    let success = solved.recovered.is_some() && (inst.secret().is_none() || solved.recovered.as_ref() == inst.secret());
    let mut out = json!({
        "params": p,
        "secret": inst.secret(),
        "peak": g.element_at(run.peak),
        "exact_peak_probability": run.distribution[target],
        "off_peak_probability": run.off_peak_probability,
        "audit_peak_probability": audit_peak_probability(&p),
        "formula": format!("{}/{}", approx.numer(), approx.denom()),
        "formula_value": *approx.numer() as f64 / *approx.denom() as f64,
        "samples": samples,
        "empirical_hits": counts[target],
        "empirical_rate": (samples > 0).then(|| counts[target] as f64 / samples as f64),
        "recovery": {
            "recovered": solved.recovered,
            "trials_used": solved.trials_used,
            "max_trials": solved.max_trials,
            "quantum_queries": solved.quantum_queries,
            "verification_queries": solved.verification_queries,
            "measurements": solved.measurements,
        },
        "seed": common.seed,
        "instance": InstanceDoc::from_instance(&inst),
    });
    if dump_state {
        out["state"] = to_value(&run.state.to_pairs());
    }
    Ok(Outcome::checked(out, success))
}

fn describe(f: &InjectivizedFunction) -> Value {
    json!({
        "copies": f.copies(),
        "offsets": f.offsets(),
        "injective": f.is_injective(),
        "collision": f.collision(),
    })
}

fn injectivize_cmd(common: &Common, copies: Option<usize>) -> CmdResult {
    let input = read_input(common)?;
    let inst = if has_key(&input, "diffset") {
        let doc: InstanceDoc = serde_json::from_value(input)?;
        group_from_doc(common, &doc.diffset)?;
        doc.into_instance()?
    } else {
        let doc: DifferenceSetDoc = serde_json::from_value(input)?;
        group_from_doc(common, &doc)?;
        let ds = DifferenceSet::from_doc(doc)?;
        HiddenShiftInstance::blackbox(&ds, &ds.group().zero())?
    };
    let oracle = inst.oracle().as_oracle();
    let v = oracle.group().order() as u64;
    let m = copies.unwrap_or(required_copies(v) as usize);
    match common.trials {
        None => {
            let f = injectivize(oracle, m, common.seed)?;
            let ok = f.is_injective();
            Ok(Outcome::checked(describe(&f), ok))
        }
        Some(draws) => {
            let mut failures = 0u64;
            for i in 0..draws {
                if !injectivize(oracle, m, common.seed.wrapping_add(i))?.is_injective() {
                    failures += 1;
                }
            }
            Ok(Outcome::ok(json!({
                "group_order": v,
                "copies": m,
                "draws": draws,
                "non_injective": failures,
                "non_injective_fraction": (draws > 0).then(|| failures as f64 / draws as f64),
                "seed": common.seed,
            })))
        }
    }
}

fn dihedral_make(common: &Common, d: u32) -> CmdResult {
    let n = 1u64.checked_shl(d + 1).map(|x| x - 1).unwrap_or(u64::MAX);
    check_cap(common, n.saturating_mul(2))?;
    let wb = make_whitebox_instance(d, common.seed)?;
    let hsp = plant_hsp(&wb.hidden_shift_instance()?, common.seed)?;
    let mut doc = DihedralDoc::from_instance(&hsp);
    doc.diffset = Some(wb.diffset().to_doc());
    doc.whitebox = Some(WhiteboxDoc {
        beta: wb.beta().coeffs().to_vec(),
        exponent: Some(wb.exponent()),
    });
    Ok(Outcome::ok(to_value(&doc)))
}

fn dihedral_solve(common: &Common) -> CmdResult {
    let doc: DihedralDoc = serde_json::from_value(read_input(common)?)?;
    check_cap(common, 2 * doc.group.moduli.iter().product::<usize>() as u64)?;
    let inst = doc.into_instance()?;
    let sol = solve_dihedral_hsp(&inst, common.trials, common.seed)?;
    let planted = inst.hidden_generator();
    let matches = planted.map(|h| sol.recovered.as_ref() == Some(h));
    let success = sol.recovered.is_some() && matches != Some(false);
    Ok(Outcome::checked(
        json!({
            "recovered": sol.generator(),
            "planted": planted,
            "matches_planted": matches,
            "verdict": sol.verdict,
            "shift_trials_used": sol.shift_solver.trials_used,
            "shift_max_trials": sol.shift_solver.max_trials,
            "quantum_queries": sol.shift_solver.quantum_queries,
            "verification_queries": sol.shift_solver.verification_queries,
            "hsp_verification_queries": sol.hsp_verification_queries,
            "seed": common.seed,
        }),
        success,
    ))
}

fn gauss_check(common: &Common, p: u64, n: usize) -> CmdResult {
    check_cap(common, p.checked_pow(n as u32).unwrap_or(u64::MAX))?;
    let tol = common.tolerance.unwrap_or(GAUSS_TOLERANCE);
    let field = FiniteField::first_irreducible(p, n)?;
    let alpha = field.find_primitive();
    let mags = gauss_magnitudes::<f64>(&field, &alpha)?;
    let mut success = mags.max_abs_deviation < tol;
    let mut out = json!({
        "field": field.spec(),
        "alpha": alpha.element.coeffs(),
        "tolerance": tol,
        "magnitudes": mags,
    });
    if p == 2 && n >= 3 {
        let relation = match singer_gauss_relation::<f64>(n as u32 - 1, tol) {
            Ok(r) => json!({
                "d": r.d,
                "ratio": [r.ratio.re, r.ratio.im],
                "ratio_variance": r.ratio_variance,
                "char_sum_target": r.char_sum_target,
                "max_char_sum_deviation": r.max_char_sum_deviation,
                "gauss_target": r.gauss_target,
                "max_gauss_deviation": r.max_gauss_deviation,
                "consistent": true,
            }),
            Err(Error::Consistency(msg)) => {
                success = false;
                json!({ "consistent": false, "reason": msg })
            }
            Err(e) => return Err(e.into()),
        };
        out["singer_relation"] = relation;
    }
    Ok(Outcome::checked(out, success))
}

fn sweep(common: &Common, singer_q: &[u64], singer_d: &[u32], hadamard: &[u32]) -> CmdResult {
    let mut config = match &common.input {
        Some(_) => serde_json::from_value::<SweepConfig>(read_input(common)?)?,
        None => SweepConfig {
            trials: DEFAULT_SAMPLES,
            ..SweepConfig::default()
        },
    };
    for &q in singer_q {
        for &d in singer_d {
            config.singer.push(SingerPoint { q, d });
        }
    }
    config.hadamard.extend_from_slice(hadamard);
    if let Some(t) = common.trials {
        config.trials = t;
    }
    if common.input.is_none() {
        config.seed = common.seed;
    }
    for pt in &config.singer {
        check_cap(common, singer_order(pt.q, pt.d))?;
    }
    for &n in &config.hadamard {
        check_cap(common, 1u64.checked_shl(2 * n).unwrap_or(u64::MAX))?;
    }
    for pt in &config.paley {
        check_cap(common, pt.p.checked_pow(pt.n as u32).unwrap_or(u64::MAX))?;
    }
    let rows = run_sweep(&config);
    Ok(Outcome::ok(json!({ "config": config, "rows": rows })))
}
