//! Hidden shifts of difference sets: instances, the exact simulation of the
//! quantum algorithm, shift recovery and the injectivization of hiding
//! functions.

mod algorithm;
mod injective;

pub use algorithm::{
    approx_success_probability, audit_off_peak_probability, audit_peak_probability, default_max_trials,
    recover_shift, run_algorithm1, verify_candidate, Algorithm1Run, SolverResult,
};
pub use injective::{influence, injectivize, required_copies, InjectivizedFunction};

use crate::diffset::{membership_oracle, DifferenceSet, Provenance};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FiniteField, PrimitiveElement};
use crate::group::{AbelianGroup, GroupElement};
use crate::oracle::{MembershipOracle, SetOracle};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `x ↦ [tr(α^x β) = 0]` on `Z_N`, the hiding function of a white-box Singer
/// instance with public `β`.
#[derive(Clone, Debug, PartialEq)]
pub struct WhiteBoxSinger {
    group: AbelianGroup,
    field: FiniteField,
    alpha: PrimitiveElement,
    beta: FieldElement,
    powers: Vec<FieldElement>,
}

impl WhiteBoxSinger {
    pub fn new(field: &FiniteField, alpha: &PrimitiveElement, beta: FieldElement) -> Result<Self> {
        if !field.contains(&beta) || beta.is_zero() {
            return Err(Error::Parameter("β must be a nonzero field element".into()));
        }
        if !field.is_primitive(&alpha.element)? {
            return Err(Error::Parameter("alpha is not primitive".into()));
        }
        let q = field.characteristic();
        let n = (field.size() - 1) / (q - 1);
        Ok(WhiteBoxSinger {
            group: AbelianGroup::cyclic(n as usize)?,
            field: field.clone(),
            alpha: alpha.clone(),
            beta,
            powers: field.powers(alpha),
        })
    }

    /// Rebuild the field and `α` recorded in a Singer set's provenance.
    pub fn for_singer_set(ds: &DifferenceSet, beta: FieldElement) -> Result<Self> {
        let Provenance::Singer { field, alpha, .. } = ds.provenance() else {
            return Err(Error::Parameter("white-box oracles need a Singer set with provenance".into()));
        };
        let field = FiniteField::try_from(field.clone())?;
        let alpha = field.primitive(field.element(alpha.clone())?)?;
        Self::new(&field, &alpha, beta)
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn alpha(&self) -> &PrimitiveElement {
        &self.alpha
    }

    pub fn beta(&self) -> &FieldElement {
        &self.beta
    }

    /// `tr(α^x β)`.
    pub fn trace_at(&self, x: usize) -> u64 {
        let y = self.field.mul(&self.powers[x], &self.beta).expect("elements of one field");
        self.field.trace(&y).expect("element of the field")
    }
}

impl MembershipOracle for WhiteBoxSinger {
    fn group(&self) -> &AbelianGroup {
        &self.group
    }

    fn contains_index(&self, index: usize) -> bool {
        self.trace_at(index) == 0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ShiftOracle {
    BlackBox(SetOracle),
    WhiteBoxSinger(WhiteBoxSinger),
}

impl ShiftOracle {
    pub fn as_oracle(&self) -> &dyn MembershipOracle {
        match self {
            ShiftOracle::BlackBox(o) => o,
            ShiftOracle::WhiteBoxSinger(o) => o,
        }
    }
}

/// A known difference set `D` together with a membership oracle for `s + D`.
#[derive(Clone, Debug, PartialEq)]
pub struct HiddenShiftInstance {
    diffset: DifferenceSet,
    oracle: ShiftOracle,
    /// The planted shift, when known to the harness.
    secret: Option<GroupElement>,
    /// Set when `D` itself is meant to be hidden too; the solver refuses such
    /// instances.
    base_hidden: bool,
}

impl HiddenShiftInstance {
    /// Tabulated oracle for `s + D`.
    pub fn blackbox(ds: &DifferenceSet, s: &GroupElement) -> Result<Self> {
        Ok(HiddenShiftInstance {
            diffset: ds.clone(),
            oracle: ShiftOracle::BlackBox(membership_oracle(ds, s)?),
            secret: Some(s.clone()),
            base_hidden: false,
        })
    }

    /// Tabulated oracle for `s + D` with `s` drawn uniformly from a generator
    /// seeded with `seed`.
    pub fn blackbox_seeded(ds: &DifferenceSet, seed: u64) -> Result<Self> {
        let g = ds.group();
        let s = g.element_at(ChaCha8Rng::seed_from_u64(seed).gen_range(0..g.order()));
        Self::blackbox(ds, &s)
    }

    /// An arbitrary oracle, checked against no secret.
    pub fn from_oracle(ds: &DifferenceSet, oracle: ShiftOracle) -> Result<Self> {
        if oracle.as_oracle().group() != ds.group() {
            return Err(Error::Structural("oracle and difference set live on different groups".into()));
        }
        Ok(HiddenShiftInstance {
            diffset: ds.clone(),
            oracle,
            secret: None,
            base_hidden: false,
        })
    }

    /// White-box Singer oracle `x ↦ [tr(α^x β) = 0]` for `β = α^e`.
    ///
    /// Its zero set is `D - e`, so the recorded secret is `-e`.
    pub fn whitebox_singer(ds: &DifferenceSet, exponent: u64) -> Result<Self> {
        let Provenance::Singer { field, alpha, .. } = ds.provenance() else {
            return Err(Error::Parameter("white-box oracles need a Singer set with provenance".into()));
        };
        let field = FiniteField::try_from(field.clone())?;
        let alpha = field.primitive(field.element(alpha.clone())?)?;
        let beta = field.pow(&alpha.element, exponent)?;
        let oracle = WhiteBoxSinger::new(&field, &alpha, beta)?;
        let g = ds.group();
        let e = g.element_at((exponent % g.order() as u64) as usize);
        let mut inst = Self::from_oracle(ds, ShiftOracle::WhiteBoxSinger(oracle))?;
        inst.secret = Some(g.negate(&e)?);
        Ok(inst)
    }

    pub fn with_secret(mut self, secret: Option<GroupElement>) -> Self {
        self.secret = secret;
        self
    }

    pub fn with_hidden_base(mut self, hidden: bool) -> Self {
        self.base_hidden = hidden;
        self
    }

    pub fn diffset(&self) -> &DifferenceSet {
        &self.diffset
    }

    pub fn oracle(&self) -> &ShiftOracle {
        &self.oracle
    }

    pub fn secret(&self) -> Option<&GroupElement> {
        self.secret.as_ref()
    }

    pub fn base_hidden(&self) -> bool {
        self.base_hidden
    }

    /// True iff the oracle is exactly the indicator of `s + D` for the
    /// recorded secret (exhaustive).
    pub fn is_consistent(&self) -> Result<bool> {
        match &self.secret {
            None => Ok(true),
            Some(s) => Ok(verify_candidate(self, s, None)?.0),
        }
    }
}
