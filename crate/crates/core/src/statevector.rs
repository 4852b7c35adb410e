//! Dense complex state vectors indexed by the canonical enumeration of a
//! finite abelian group.
//!
//! Operations take `&self` and return a new state. The basis before a forward
//! transform is the group-element basis; after it, the same positions label
//! characters (the group is self-dual under the chosen indexing).

use num_complex::Complex;
use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diffset::DifferenceSet;
use crate::error::{Error, Result};
use crate::group::AbelianGroup;
use crate::oracle::MembershipOracle;
use crate::scalar::{roots_of_unity, Real};
use crate::spectrum::character_sums;

/// Transform an arbitrary vector over `group`.
///
/// Forward: `out[χ] = v^{-1/2} Σ_a χ(a) x[a]`. Inverse: the adjoint. Each cyclic
/// factor is handled by a dense DFT along its stride.
pub fn qft_vec<T: Real>(group: &AbelianGroup, input: &[Complex<T>], inverse: bool) -> Vec<Complex<T>> {
    assert_eq!(input.len(), group.order(), "vector length must equal the group order");
    let mut data = input.to_vec();
    let mut line = Vec::new();
    let mut stride = group.order();
    for &n in group.moduli() {
        stride /= n;
        let roots = roots_of_unity::<T>(n as u64);
        let scale = T::one() / T::from_usize(n).expect("fits").sqrt();
        let block = n * stride;
        line.resize(n, Complex::new(T::zero(), T::zero()));
        for outer in (0..data.len()).step_by(block) {
            for inner in 0..stride {
                let base = outer + inner;
                for (j, slot) in line.iter_mut().enumerate() {
                    *slot = data[base + j * stride];
                }
                for k in 0..n {
                    let mut acc = Complex::new(T::zero(), T::zero());
                    for (j, x) in line.iter().enumerate() {
                        let t = (k * j) % n;
                        let w = if inverse { roots[(n - t) % n] } else { roots[t] };
                        acc = acc + w * x;
                    }
                    data[base + k * stride] = acc * scale;
                }
            }
        }
    }
    data
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T> {
    group: AbelianGroup,
    amps: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    pub fn uniform_state(group: &AbelianGroup) -> Result<Self> {
        group.check_cap()?;
        let a = T::one() / T::from_usize(group.order()).expect("fits").sqrt();
        Ok(StateVector {
            group: group.clone(),
            amps: vec![Complex::new(a, T::zero()); group.order()],
        })
    }

    /// The basis state `|index⟩`.
    pub fn basis(group: &AbelianGroup, index: usize) -> Result<Self> {
        group.check_cap()?;
        if index >= group.order() {
            return Err(Error::Structural(format!("basis index {index} out of range")));
        }
        let mut amps = vec![Complex::new(T::zero(), T::zero()); group.order()];
        amps[index] = Complex::new(T::one(), T::zero());
        Ok(StateVector {
            group: group.clone(),
            amps,
        })
    }

    /// Wrap amplitudes, rejecting wrong lengths and unnormalized vectors.
    pub fn from_amplitudes(group: &AbelianGroup, amps: Vec<Complex<T>>) -> Result<Self> {
        group.check_cap()?;
        if amps.len() != group.order() {
            return Err(Error::Structural(format!(
                "{} amplitudes for a group of order {}",
                amps.len(),
                group.order()
            )));
        }
        let s = StateVector {
            group: group.clone(),
            amps,
        };
        s.check_normalized()?;
        Ok(s)
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr())
    }

    fn check_normalized(&self) -> Result<()> {
        let n = self.norm_sqr().to_f64_lossy();
        if (n - 1.0).abs() > T::NORM_TOLERANCE {
            return Err(Error::Unnormalized(n));
        }
        Ok(())
    }

    pub fn apply_qft(&self, inverse: bool) -> Self {
        StateVector {
            group: self.group.clone(),
            amps: qft_vec(&self.group, &self.amps, inverse),
        }
    }

    /// Multiply `amps[g]` by `-1` wherever `predicate(g)` holds.
    pub fn apply_phase_oracle(&self, predicate: impl Fn(usize) -> bool) -> Self {
        let amps = self
            .amps
            .iter()
            .enumerate()
            .map(|(g, &z)| if predicate(g) { -z } else { z })
            .collect();
        StateVector {
            group: self.group.clone(),
            amps,
        }
    }

    pub fn apply_membership_oracle(&self, oracle: &dyn MembershipOracle) -> Result<Self> {
        if oracle.group() != &self.group {
            return Err(Error::Structural("oracle and state live on different groups".into()));
        }
        Ok(self.apply_phase_oracle(|g| oracle.contains_index(g)))
    }

    pub fn apply_diagonal(&self, op: &DiagonalOperator<T>) -> Result<Self> {
        if op.group != self.group {
            return Err(Error::Structural("operator and state live on different groups".into()));
        }
        let amps = self.amps.iter().zip(&op.entries).map(|(a, d)| a * d).collect();
        Ok(StateVector {
            group: self.group.clone(),
            amps,
        })
    }

    /// The state `|x⟩ ↦ |x + s⟩` for a canonical index `s`.
    pub fn translate(&self, s: usize) -> Self {
        let mut amps = vec![Complex::new(T::zero(), T::zero()); self.amps.len()];
        for (x, &z) in self.amps.iter().enumerate() {
            amps[self.group.add_index(x, s)] = z;
        }
        StateVector {
            group: self.group.clone(),
            amps,
        }
    }

    /// `p[g] = |amps[g]|²`.
    pub fn measure_distribution(&self) -> Result<Vec<T>> {
        self.check_normalized()?;
        Ok(self.amps.iter().map(|z| z.norm_sqr()).collect())
    }

    /// Draw `trials` outcomes from `rng`; returns counts per canonical index.
    pub fn sample_with<R: Rng + ?Sized>(&self, rng: &mut R, trials: u64) -> Result<Vec<u64>> {
        let dist = self.measure_distribution()?;
        let sampler = weighted(&dist)?;
        let mut counts = vec![0u64; dist.len()];
        for _ in 0..trials {
            counts[sampler.sample(rng)] += 1;
        }
        Ok(counts)
    }

    /// Seeded sampling, reproducible across runs and platforms.
    pub fn sample(&self, seed: u64, trials: u64) -> Result<Vec<u64>> {
        self.sample_with(&mut ChaCha8Rng::seed_from_u64(seed), trials)
    }

    /// `[[re, im], ...]` in canonical order.
    pub fn to_pairs(&self) -> Vec<[f64; 2]> {
        self.amps
            .iter()
            .map(|z| [z.re.to_f64_lossy(), z.im.to_f64_lossy()])
            .collect()
    }
}

pub(crate) fn weighted<T: Real>(dist: &[T]) -> Result<WeightedIndex<f64>> {
    WeightedIndex::new(dist.iter().map(|p| p.to_f64_lossy().max(0.0)))
        .map_err(|e| Error::Consistency(format!("cannot sample from distribution: {e}")))
}

/// A diagonal unitary in the character basis.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalOperator<T> {
    group: AbelianGroup,
    entries: Vec<Complex<T>>,
}

impl<T: Real> DiagonalOperator<T> {
    pub fn new(group: &AbelianGroup, entries: Vec<Complex<T>>) -> Result<Self> {
        if entries.len() != group.order() {
            return Err(Error::Structural(format!(
                "{} diagonal entries for a group of order {}",
                entries.len(),
                group.order()
            )));
        }
        if let Some((i, z)) = entries
            .iter()
            .enumerate()
            .find(|(_, z)| (z.norm().to_f64_lossy() - 1.0).abs() > T::UNIT_TOLERANCE)
        {
            return Err(Error::Consistency(format!(
                "diagonal entry {i} has modulus {}, not 1",
                z.norm()
            )));
        }
        Ok(DiagonalOperator {
            group: group.clone(),
            entries,
        })
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.entries
    }

    pub fn conjugate(&self) -> Self {
        DiagonalOperator {
            group: self.group.clone(),
            entries: self.entries.iter().map(|z| z.conj()).collect(),
        }
    }
}

/// `diag(1, conj(χ(D)) / √(k-λ) : χ ≠ χ₀)` for the unshifted set `D`.
pub fn build_diagonal<T: Real>(ds: &DifferenceSet) -> Result<DiagonalOperator<T>> {
    let p = ds.params();
    if p.k <= p.lambda {
        return Err(Error::Degenerate(format!("k = {} and λ = {} leave no phase", p.k, p.lambda)));
    }
    let scale = T::one() / T::from_u64(p.order_parameter()).expect("fits").sqrt();
    let mut entries: Vec<Complex<T>> = character_sums::<T>(ds)?
        .into_iter()
        .map(|z| z.conj() * scale)
        .collect();
    entries[0] = Complex::new(T::one(), T::zero());
    DiagonalOperator::new(ds.group(), entries)
}
