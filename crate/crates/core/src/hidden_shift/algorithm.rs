use num_rational::Ratio;
use rand::distributions::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::HiddenShiftInstance;
use crate::diffset::Params;
use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::scalar::Real;
use crate::statevector::{build_diagonal, weighted, StateVector};

/// Number of oracle points compared per candidate shift.
const VERIFY_POINTS: usize = 64;

/// Exact outcome of one run of the quantum algorithm.
#[derive(Clone, Debug, PartialEq)]
pub struct Algorithm1Run<T> {
    pub state: StateVector<T>,
    pub distribution: Vec<T>,
    /// Canonical index of the most likely outcome.
    pub peak: usize,
    pub peak_probability: T,
    /// Mean probability of the remaining outcomes.
    pub off_peak_probability: T,
    /// Largest deviation of a non-peak probability from that mean.
    pub off_peak_spread: T,
}

/// Prepare the uniform superposition, query the oracle as a phase, transform,
/// apply the diagonal built from the unshifted set, transform back, measure.
pub fn run_algorithm1<T: Real>(instance: &HiddenShiftInstance) -> Result<Algorithm1Run<T>> {
    if instance.base_hidden() {
        return Err(Error::Unsupported(
            "the solver needs the unshifted difference set to be known".into(),
        ));
    }
    let ds = instance.diffset();
    let diag = build_diagonal::<T>(ds)?;
    let state = StateVector::<T>::uniform_state(ds.group())?
        .apply_membership_oracle(instance.oracle().as_oracle())?
        .apply_qft(false)
        .apply_diagonal(&diag)?
        .apply_qft(true);
    let distribution = state.measure_distribution()?;
    let peak = distribution
        .iter()
        .enumerate()
        .fold(0, |best, (i, p)| if *p > distribution[best] { i } else { best });
    let rest = distribution.len() - 1;
    let off_peak_probability = if rest == 0 {
        T::zero()
    } else {
        (T::one() - distribution[peak]) / T::from_usize(rest).expect("fits")
    };
    let off_peak_spread = distribution
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != peak)
        .fold(T::zero(), |acc, (_, p)| acc.max((*p - off_peak_probability).abs()));
    Ok(Algorithm1Run {
        peak_probability: distribution[peak],
        state,
        distribution,
        peak,
        off_peak_probability,
        off_peak_spread,
    })
}

fn audit_c0(p: &Params) -> f64 {
    let r = (p.order_parameter() as f64).sqrt();
    1.0 - 2.0 * (p.k as f64 - r) / p.v as f64
}

/// Closed form of the peak probability: `(2√(k-λ) - c₀)² / v` with
/// `c₀ = 1 - 2(k - √(k-λ))/v`.
pub fn audit_peak_probability(p: &Params) -> f64 {
    let r = (p.order_parameter() as f64).sqrt();
    (2.0 * r - audit_c0(p)).powi(2) / p.v as f64
}

/// Closed form of every non-peak probability: `c₀² / v`.
pub fn audit_off_peak_probability(p: &Params) -> f64 {
    audit_c0(p).powi(2) / p.v as f64
}

/// The heuristic `4(k-λ)/v`. It ignores the interference between the peak and
/// the residual constant term and can exceed 1.
pub fn approx_success_probability(p: &Params) -> Ratio<u64> {
    Ratio::new(4 * p.order_parameter(), p.v)
}

/// `⌈8 / p⌉` for the audited peak probability `p`.
pub fn default_max_trials(p: &Params) -> u64 {
    (8.0 / audit_peak_probability(p)).ceil().max(1.0) as u64
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverResult<T> {
    pub recovered: Option<GroupElement>,
    /// Number of measurements taken, one oracle query each.
    pub trials_used: u64,
    pub max_trials: u64,
    /// Measured outcomes in trial order (canonical indices).
    pub measurements: Vec<usize>,
    pub peak: usize,
    pub peak_probability: T,
    pub quantum_queries: u64,
    /// Classical oracle queries spent checking candidates.
    pub verification_queries: u64,
    pub distribution: Vec<T>,
}

/// Compare the oracle with the indicator of `candidate + D`.
///
/// With `rng = None`, or when the group has at most 64 elements, every point
/// is checked; otherwise 64 uniformly random points are. Returns the verdict
/// and the number of oracle queries spent.
pub fn verify_candidate(
    instance: &HiddenShiftInstance,
    candidate: &GroupElement,
    rng: Option<&mut ChaCha8Rng>,
) -> Result<(bool, u64)> {
    let ds = instance.diffset();
    let g = ds.group();
    if !g.contains(candidate) {
        return Err(Error::Structural(format!("{candidate:?} is not an element of the group")));
    }
    let c = g.index_of(candidate);
    let oracle = instance.oracle().as_oracle();
    let indicator = ds.indicator();
    let check = |x: usize| oracle.contains_index(x) == indicator[g.sub_index(x, c)];
    let v = g.order();
    match rng {
        Some(rng) if v > VERIFY_POINTS => {
            for q in 0..VERIFY_POINTS {
                if !check(rng.gen_range(0..v)) {
                    return Ok((false, q as u64 + 1));
                }
            }
            Ok((true, VERIFY_POINTS as u64))
        }
        _ => {
            for x in 0..v {
                if !check(x) {
                    return Ok((false, x as u64 + 1));
                }
            }
            Ok((true, v as u64))
        }
    }
}

/// Sample the exact output distribution until a candidate `m` or `-m`
/// passes verification. Trial `t` draws from stream `t` of a generator seeded
/// with `seed`, so results do not depend on evaluation order.
pub fn recover_shift<T: Real>(
    instance: &HiddenShiftInstance,
    max_trials: u64,
    seed: u64,
) -> Result<SolverResult<T>> {
    let run = run_algorithm1::<T>(instance)?;
    let g = instance.diffset().group();
    let sampler = weighted(&run.distribution)?;
    let mut result = SolverResult {
        recovered: None,
        trials_used: 0,
        max_trials,
        measurements: Vec::new(),
        peak: run.peak,
        peak_probability: run.peak_probability,
        quantum_queries: 0,
        verification_queries: 0,
        distribution: run.distribution.clone(),
    };
    for t in 0..max_trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(t);
        let m = sampler.sample(&mut rng);
        result.trials_used += 1;
        result.quantum_queries += 1;
        result.measurements.push(m);
        let neg = g.neg_index(m);
        let candidates = if neg == m { vec![m] } else { vec![m, neg] };
        for c in candidates {
            let cand = g.element_at(c);
            let (ok, q) = verify_candidate(instance, &cand, Some(&mut rng))?;
            result.verification_queries += q;
            if ok {
                result.recovered = Some(cand);
                return Ok(result);
            }
        }
    }
    Ok(result)
}
