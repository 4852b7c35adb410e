//! Character sums of subsets, flatness checks for difference sets and Gauss
//! sums over finite fields.
//!
//! Every sum is accumulated in a fixed order (increasing canonical index), so
//! results are reproducible bit for bit.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::diffset::{construct_singer_with, DifferenceSet};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FiniteField, PrimitiveElement};
use crate::group::{AbelianGroup, Character, CharacterTable, GroupElement};
use crate::scalar::{roots_of_unity, Real};

/// Default tolerance for flatness checks.
pub const TURYN_TOLERANCE: f64 = 1e-8;

/// `χ(D) = Σ_{d ∈ D} χ(d)`.
pub fn char_sum<T: Real>(ds: &DifferenceSet, chi: &Character) -> Result<Complex<T>> {
    let g = ds.group();
    let mut acc = Complex::new(T::zero(), T::zero());
    for d in ds.elements() {
        acc = acc + g.character_eval::<T>(chi, d)?;
    }
    Ok(acc)
}

/// `χ(S)` for every character, indexed like the group, for an arbitrary subset
/// given by canonical indices.
pub fn subset_character_sums<T: Real>(group: &AbelianGroup, indices: &[usize]) -> Result<Vec<Complex<T>>> {
    group.check_cap()?;
    let table = CharacterTable::<T>::new(group);
    Ok((0..group.order())
        .map(|c| {
            indices
                .iter()
                .fold(Complex::new(T::zero(), T::zero()), |acc, &a| acc + table.eval(c, a))
        })
        .collect())
}

pub fn character_sums<T: Real>(ds: &DifferenceSet) -> Result<Vec<Complex<T>>> {
    subset_character_sums(ds.group(), &ds.indices())
}

/// `Σ_χ |χ(S)|² / v`, which equals `|S|` for every subset.
pub fn parseval_mass<T: Real>(sums: &[Complex<T>]) -> T {
    let v = T::from_usize(sums.len()).expect("length fits");
    sums.iter().fold(T::zero(), |acc, s| acc + s.norm_sqr()) / v
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumReport<T> {
    /// `χ(D)` for every character in canonical order.
    pub values: Vec<Complex<T>>,
    pub magnitudes: Vec<T>,
    pub trivial_value: Complex<T>,
    /// `√(k - λ)`, with `λ = k(k-1)/(v-1)` taken as a real number for
    /// subsets that are not certified difference sets.
    pub target_magnitude: T,
    /// Largest `||χ(D)| - √(k-λ)|` over nontrivial characters.
    pub max_abs_deviation: T,
    pub worst_character: Option<Character>,
    pub tolerance: T,
    pub pass: bool,
}

/// JSON summary: `{"trivial_value", "target_magnitude", "max_abs_deviation", "pass"}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub trivial_value: f64,
    pub target_magnitude: f64,
    pub max_abs_deviation: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub worst_character: Option<Vec<usize>>,
}

impl<T: Real> SpectrumReport<T> {
    pub fn summary(&self) -> SpectrumSummary {
        SpectrumSummary {
            trivial_value: self.trivial_value.re.to_f64_lossy(),
            target_magnitude: self.target_magnitude.to_f64_lossy(),
            max_abs_deviation: self.max_abs_deviation.to_f64_lossy(),
            pass: self.pass,
            worst_character: self.worst_character.as_ref().map(|c| c.index().to_vec()),
        }
    }
}

/// Flatness of the character spectrum of a certified difference set.
pub fn turyn_check<T: Real>(ds: &DifferenceSet, tolerance: T) -> Result<SpectrumReport<T>> {
    turyn_check_subset(ds.group(), ds.elements(), tolerance)
}

/// Flatness check for an arbitrary subset; fails for non-difference-sets.
pub fn turyn_check_subset<T: Real>(
    group: &AbelianGroup,
    elements: &[GroupElement],
    tolerance: T,
) -> Result<SpectrumReport<T>> {
    let indices: Vec<usize> = elements
        .iter()
        .map(|e| {
            if group.contains(e) {
                Ok(group.index_of(e))
            } else {
                Err(Error::Structural(format!("{e:?} is not an element of the group")))
            }
        })
        .collect::<Result<_>>()?;
    let v = group.order() as f64;
    let k = indices.len() as f64;
    let lambda = k * (k - 1.0) / (v - 1.0);
    let target = T::from_f64_lossy((k - lambda).max(0.0).sqrt());
    let values = subset_character_sums::<T>(group, &indices)?;
    let magnitudes: Vec<T> = values.iter().map(|z| z.norm()).collect();
    let mut max_dev = T::zero();
    let mut worst = None;
    for (c, &m) in magnitudes.iter().enumerate().skip(1) {
        let dev = (m - target).abs();
        if dev > max_dev || worst.is_none() {
            max_dev = dev;
            worst = Some(c);
        }
    }
    let trivial_value = values[0];
    let trivial_ok = trivial_value.re == T::from_usize(indices.len()).expect("fits") && trivial_value.im == T::zero();
    let pass = trivial_ok && max_dev < tolerance;
    Ok(SpectrumReport {
        values,
        magnitudes,
        trivial_value,
        target_magnitude: target,
        max_abs_deviation: max_dev,
        worst_character: worst.filter(|_| !pass).map(|c| group.character_at(c)),
        tolerance,
        pass,
    })
}

/// Gauss sums `G(ψ_μ, χ_β) = Σ_{x ≠ 0} χ_β(x) ψ_μ(x)` with
/// `ψ_μ(x) = ω_p^{tr(μx)}` and `χ_β(α^i) = ω_{q-1}^{βi}`.
///
/// Precomputes `tr(α^i)` and discrete logs so that many sums over the same
/// field are cheap.
#[derive(Clone, Debug)]
pub struct GaussSums<T> {
    field: FiniteField,
    alpha: PrimitiveElement,
    traces: Vec<u64>,
    /// `logs[index_of(x)]` for nonzero `x`.
    logs: Vec<u64>,
    mult_roots: Vec<Complex<T>>,
    add_roots: Vec<Complex<T>>,
}

impl<T: Real> GaussSums<T> {
    pub fn new(field: &FiniteField, alpha: &PrimitiveElement) -> Result<Self> {
        if !field.is_primitive(&alpha.element)? {
            return Err(Error::Parameter("alpha is not primitive".into()));
        }
        let m = alpha.order;
        let mut logs = vec![u64::MAX; field.size() as usize];
        for (i, x) in field.powers(alpha).iter().enumerate() {
            logs[field.index_of(x) as usize] = i as u64;
        }
        Ok(GaussSums {
            field: field.clone(),
            alpha: alpha.clone(),
            traces: field.power_traces(alpha),
            logs,
            mult_roots: roots_of_unity(m),
            add_roots: roots_of_unity(field.characteristic()),
        })
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn alpha(&self) -> &PrimitiveElement {
        &self.alpha
    }

    /// `log_α(x)` from the precomputed table.
    pub fn log(&self, x: &FieldElement) -> Result<u64> {
        if x.is_zero() {
            return Err(Error::Domain("discrete log of zero".into()));
        }
        Ok(self.logs[self.field.index_of(x) as usize])
    }

    /// `G(ψ_μ, χ_β)` with `μ = α^{mu_log}`.
    pub fn sum_by_log(&self, mu_log: u64, beta: u64) -> Result<Complex<T>> {
        let m = self.alpha.order;
        if beta % m == 0 {
            return Err(Error::Parameter("β ≡ 0 gives the trivial multiplicative character".into()));
        }
        let beta = beta % m;
        let shift = (mu_log % m) as usize;
        let m = m as usize;
        let mut acc = Complex::new(T::zero(), T::zero());
        let mut phase = 0usize;
        for i in 0..m {
            let t = self.traces[(i + shift) % m] as usize;
            acc = acc + self.mult_roots[phase] * self.add_roots[t];
            phase += beta as usize;
            if phase >= m {
                phase -= m;
            }
        }
        Ok(acc)
    }

    pub fn sum(&self, mu: &FieldElement, beta: u64) -> Result<Complex<T>> {
        if mu.is_zero() {
            return Err(Error::Parameter("μ = 0 gives the trivial additive character".into()));
        }
        self.sum_by_log(self.log(mu)?, beta)
    }
}

/// `G(ψ_μ, χ_β)` by direct iteration over `x = α^i`.
pub fn gauss_sum<T: Real>(
    field: &FiniteField,
    alpha: &PrimitiveElement,
    mu: &FieldElement,
    beta: u64,
) -> Result<Complex<T>> {
    if mu.is_zero() {
        return Err(Error::Parameter("μ = 0 gives the trivial additive character".into()));
    }
    let m = alpha.order;
    if beta % m == 0 {
        return Err(Error::Parameter("β ≡ 0 gives the trivial multiplicative character".into()));
    }
    let p = field.characteristic();
    let mut x = field.one();
    let mut acc = Complex::new(T::zero(), T::zero());
    for i in 0..m {
        let t = field.trace(&field.mul(mu, &x)?)?;
        acc = acc + crate::scalar::root_of_unity::<T>((beta % m) * i % m, m) * crate::scalar::root_of_unity::<T>(t, p);
        x = field.mul(&x, &alpha.element)?;
    }
    Ok(acc)
}

/// Largest deviation of `|G(ψ_μ, χ_β)|` from `√q` over all nontrivial pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussMagnitudeReport {
    pub q: u64,
    pub pairs: u64,
    pub target: f64,
    pub max_abs_deviation: f64,
    /// `(log_α μ, β)` attaining the maximum.
    pub worst_pair: Option<(u64, u64)>,
}

pub fn gauss_magnitudes<T: Real>(field: &FiniteField, alpha: &PrimitiveElement) -> Result<GaussMagnitudeReport> {
    let sums = GaussSums::<T>::new(field, alpha)?;
    let m = alpha.order;
    let target = T::from_u64(field.size()).expect("fits").sqrt();
    let mut max_dev = T::zero();
    let mut worst = None;
    for mu in 0..m {
        for beta in 1..m {
            let dev = (sums.sum_by_log(mu, beta)?.norm() - target).abs();
            if worst.is_none() || dev > max_dev {
                max_dev = dev;
                worst = Some((mu, beta));
            }
        }
    }
    Ok(GaussMagnitudeReport {
        q: field.size(),
        pairs: m * (m - 1),
        target: target.to_f64_lossy(),
        max_abs_deviation: max_dev.to_f64_lossy(),
        worst_pair: worst,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaussRelationEntry<T> {
    pub beta: u64,
    pub char_sum: Complex<T>,
    pub gauss_sum: Complex<T>,
    pub ratio: Complex<T>,
}

/// Comparison of Singer character sums with Gauss sums over `GF(2^{d+1})`.
#[derive(Clone, Debug, PartialEq)]
pub struct SingerGaussReport<T> {
    pub d: u32,
    pub field: FiniteField,
    /// The primitive element fixing both the set and the multiplicative characters.
    pub alpha: FieldElement,
    pub entries: Vec<GaussRelationEntry<T>>,
    /// Mean of `G(ψ, χ_β) / χ_β(D)` over nontrivial `β`.
    pub ratio: Complex<T>,
    /// Mean of `|ratio_β - ratio|²`.
    pub ratio_variance: T,
    /// `√(k - λ) = 2^{(d-1)/2}`.
    pub char_sum_target: T,
    pub max_char_sum_deviation: T,
    /// `√q` for `q = 2^{d+1}`.
    pub gauss_target: T,
    pub max_gauss_deviation: T,
}

/// For the Singer set over `q = 2`, compute `χ_β(D)` and `G(ψ, χ_β)` (with
/// `ψ(x) = (-1)^{tr(x)}`) for every nontrivial `β` and report their ratio,
/// which must not depend on `β`.
pub fn singer_gauss_relation<T: Real>(d: u32, tolerance: f64) -> Result<SingerGaussReport<T>> {
    let field = FiniteField::first_irreducible(2, d as usize + 1)?;
    let alpha = field.find_primitive();
    let ds = construct_singer_with(&field, &alpha)?;
    let gauss = GaussSums::<T>::new(&field, &alpha)?;
    let n = ds.params().v;
    let g = ds.group();
    let sums = character_sums::<T>(&ds)?;
    let mut entries = Vec::with_capacity(n as usize - 1);
    for beta in 1..n {
        let cs = sums[g.character_index_of(&g.character(vec![beta as usize])?)];
        let gs = gauss.sum_by_log(0, beta)?;
        entries.push(GaussRelationEntry {
            beta,
            char_sum: cs,
            gauss_sum: gs,
            ratio: gs / cs,
        });
    }
    let count = T::from_usize(entries.len()).expect("fits");
    let mean = entries
        .iter()
        .fold(Complex::new(T::zero(), T::zero()), |acc, e| acc + e.ratio)
        / count;
    let variance = entries.iter().fold(T::zero(), |acc, e| acc + (e.ratio - mean).norm_sqr()) / count;
    let cs_target = T::from_u64(ds.params().order_parameter()).expect("fits").sqrt();
    let g_target = T::from_u64(field.size()).expect("fits").sqrt();
    let max_cs = entries
        .iter()
        .fold(T::zero(), |acc, e| acc.max((e.char_sum.norm() - cs_target).abs()));
    let max_g = entries
        .iter()
        .fold(T::zero(), |acc, e| acc.max((e.gauss_sum.norm() - g_target).abs()));
    if variance.to_f64_lossy() > tolerance {
        return Err(Error::Consistency(format!(
            "Gauss/character-sum ratio varies with β (variance {variance})"
        )));
    }
    Ok(SingerGaussReport {
        d,
        alpha: alpha.element.clone(),
        field,
        entries,
        ratio: mean,
        ratio_variance: variance,
        char_sum_target: cs_target,
        max_char_sum_deviation: max_cs,
        gauss_target: g_target,
        max_gauss_deviation: max_g,
    })
}
