use std::collections::HashSet;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::{AbelianGroup, GroupElement};
use crate::oracle::{tabulate, MembershipOracle};

/// `Pr_x[f(x) ≠ f(x + v)]` as an exact fraction of the group order.
pub fn influence(f: &dyn MembershipOracle, v: &GroupElement) -> Result<Ratio<u64>> {
    let g = f.group();
    g.check_cap()?;
    if !g.contains(v) {
        return Err(Error::Structural(format!("{v:?} is not an element of the group")));
    }
    let vi = g.index_of(v);
    let table = tabulate(f);
    let flips = (0..g.order())
        .filter(|&x| table[x] != table[g.add_index(x, vi)])
        .count();
    Ok(Ratio::new(flips as u64, g.order() as u64))
}

/// `⌈2 log₂ |A|⌉ + 6`, computed as the least `e` with `2^e ≥ |A|²`, plus 6.
pub fn required_copies(group_order: u64) -> u32 {
    assert!(group_order >= 2, "group order must be at least 2");
    let sq = group_order as u128 * group_order as u128;
    let e = 128 - (sq - 1).leading_zeros();
    e + 6
}

/// `f_V(x) = (f(x + v₁), ..., f(x + v_m))` for a tabulated `f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InjectivizedFunction {
    group: AbelianGroup,
    base: Vec<bool>,
    offsets: Vec<usize>,
}

impl InjectivizedFunction {
    /// Explicit offsets given as canonical indices.
    pub fn with_offsets(f: &dyn MembershipOracle, offsets: Vec<usize>) -> Result<Self> {
        let g = f.group();
        g.check_cap()?;
        if offsets.is_empty() {
            return Err(Error::Parameter("at least one offset is required".into()));
        }
        if let Some(bad) = offsets.iter().find(|&&o| o >= g.order()) {
            return Err(Error::Structural(format!("offset index {bad} out of range")));
        }
        Ok(InjectivizedFunction {
            group: g.clone(),
            base: tabulate(f),
            offsets,
        })
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn base(&self) -> &[bool] {
        &self.base
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn copies(&self) -> usize {
        self.offsets.len()
    }

    pub fn evaluate(&self, x: usize) -> Vec<bool> {
        self.offsets
            .iter()
            .map(|&o| self.base[self.group.add_index(x, o)])
            .collect()
    }

    /// `f_V` at every canonical index.
    pub fn table(&self) -> Vec<Vec<bool>> {
        (0..self.group.order()).map(|x| self.evaluate(x)).collect()
    }

    /// No two group elements share a value.
    pub fn is_injective(&self) -> bool {
        let mut seen = HashSet::with_capacity(self.group.order());
        (0..self.group.order()).all(|x| seen.insert(self.evaluate(x)))
    }

    /// The first pair `x < y` with `f_V(x) = f_V(y)`.
    pub fn collision(&self) -> Option<(usize, usize)> {
        let mut seen = std::collections::HashMap::with_capacity(self.group.order());
        for x in 0..self.group.order() {
            if let Some(&y) = seen.get(&self.evaluate(x)) {
                return Some((y, x));
            }
            seen.insert(self.evaluate(x), x);
        }
        None
    }
}

/// Draw `m` offsets uniformly (with replacement) from a generator seeded with `seed`.
pub fn injectivize(f: &dyn MembershipOracle, m: usize, seed: u64) -> Result<InjectivizedFunction> {
    if m == 0 {
        return Err(Error::Parameter("injectivization needs m >= 1 copies".into()));
    }
    let v = f.group().order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let offsets = (0..m).map(|_| rng.gen_range(0..v)).collect();
    InjectivizedFunction::with_offsets(f, offsets)
}
