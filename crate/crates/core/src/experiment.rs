//! Parameter sweeps comparing the exact peak probability with the closed-form
//! audit, the `4(k-λ)/v` heuristic and a seeded empirical rate.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::diffset::{construct_hadamard, construct_paley, construct_singer, BentFunctionSpec, DifferenceSet, Params};
use crate::error::Result;
use crate::field::FiniteField;
use crate::hidden_shift::{approx_success_probability, audit_peak_probability, run_algorithm1, HiddenShiftInstance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingerPoint {
    pub q: u64,
    pub d: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaleyPoint {
    pub p: u64,
    pub n: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepConfig {
    pub singer: Vec<SingerPoint>,
    /// `n` for the inner-product bent function on `2n` variables.
    pub hadamard: Vec<u32>,
    pub paley: Vec<PaleyPoint>,
    /// Samples per row for the empirical rate.
    pub trials: u64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub family: String,
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<Params>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub secret: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_peak_probability: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub audit_peak_probability: Option<f64>,
    /// `4(k-λ)/v` as `"num/den"`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formula: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formula_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub empirical_rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl SweepRow {
    fn failed(family: &str, label: String, err: String) -> Self {
        SweepRow {
            family: family.into(),
            label,
            params: None,
            secret: None,
            exact_peak_probability: None,
            audit_peak_probability: None,
            formula: None,
            formula_value: None,
            empirical_rate: None,
            error: Some(err),
        }
    }
}

fn measure(family: &str, label: String, ds: &DifferenceSet, trials: u64, seed: u64) -> Result<SweepRow> {
    let g = ds.group();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = g.element_at(rng.gen_range(0..g.order()));
    let inst = HiddenShiftInstance::blackbox(ds, &s)?;
    let run = run_algorithm1::<f64>(&inst)?;
    let hits = run.state.sample_with(&mut rng, trials)?[g.index_of(&s)];
    let p = ds.params();
    let approx = approx_success_probability(&p);
    Ok(SweepRow {
        family: family.into(),
        label,
        params: Some(p),
        secret: Some(s.coords().to_vec()),
        exact_peak_probability: Some(run.distribution[g.index_of(&s)]),
        audit_peak_probability: Some(audit_peak_probability(&p)),
        formula: Some(format!("{}/{}", approx.numer(), approx.denom())),
        formula_value: Some(*approx.numer() as f64 / *approx.denom() as f64),
        empirical_rate: (trials > 0).then(|| hits as f64 / trials as f64),
        error: None,
    })
}

/// One row per grid point in the order singer, hadamard, paley. Row `i` uses
/// seed `seed + i`; failures are recorded in the row.
pub fn run_sweep(config: &SweepConfig) -> Vec<SweepRow> {
    let mut jobs: Vec<(&str, String, Box<dyn Fn() -> Result<DifferenceSet>>)> = Vec::new();
    for pt in &config.singer {
        let pt = *pt;
        jobs.push((
            "singer",
            format!("q={},d={}", pt.q, pt.d),
            Box::new(move || construct_singer(pt.q, pt.d)),
        ));
    }
    for &n in &config.hadamard {
        jobs.push((
            "hadamard",
            format!("n={n}"),
            Box::new(move || construct_hadamard(&BentFunctionSpec::inner_product(n as usize)?)),
        ));
    }
    for pt in &config.paley {
        let pt = *pt;
        jobs.push((
            "paley",
            format!("p={},n={}", pt.p, pt.n),
            Box::new(move || construct_paley(&FiniteField::first_irreducible(pt.p, pt.n)?)),
        ));
    }
    jobs.into_iter()
        .enumerate()
        .map(|(i, (family, label, build))| {
            build()
                .and_then(|ds| measure(family, label.clone(), &ds, config.trials, config.seed.wrapping_add(i as u64)))
                .unwrap_or_else(|e| SweepRow::failed(family, label, e.to_string()))
        })
        .collect()
}
