//! Semidirect products `A ⋊ Z_2` with the inversion action, and hidden
//! reflection subgroups built from hidden shifts.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::diffset::{construct_singer_with, verify_difference_set, DifferenceSet};
use crate::error::{Error, Result};
use crate::field::{FiniteField, PrimitiveElement};
use crate::group::{AbelianGroup, GroupElement};
use crate::hidden_shift::{
    default_max_trials, injectivize, recover_shift, required_copies, HiddenShiftInstance, InjectivizedFunction,
    ShiftOracle, SolverResult, WhiteBoxSinger,
};
use crate::oracle::SetOracle;

/// Attempts at drawing an injective offset set before giving up.
const INJECTIVIZE_ATTEMPTS: u64 = 8;

/// `(a, t)` with `a ∈ A` and `t ∈ Z_2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SdElement {
    pub a: GroupElement,
    pub t: u8,
}

impl fmt::Display for SdElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.t)
    }
}

/// `A ⋊ Z_2` with `(a, t)(b, u) = (a + (-1)^t b, t ⊕ u)`.
///
/// Canonical index of `(a, t)` is `t·|A| + index(a)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemidirectGroup {
    base: AbelianGroup,
}

impl SemidirectGroup {
    pub fn new(base: AbelianGroup) -> Self {
        SemidirectGroup { base }
    }

    pub fn base(&self) -> &AbelianGroup {
        &self.base
    }

    pub fn order(&self) -> usize {
        2 * self.base.order()
    }

    pub fn identity(&self) -> SdElement {
        SdElement {
            a: self.base.zero(),
            t: 0,
        }
    }

    pub fn element(&self, a: GroupElement, t: u8) -> Result<SdElement> {
        if !self.base.contains(&a) || t > 1 {
            return Err(Error::Structural(format!("({a:?}, {t}) is not an element of A ⋊ Z_2")));
        }
        Ok(SdElement { a, t })
    }

    pub fn index_of(&self, x: &SdElement) -> usize {
        x.t as usize * self.base.order() + self.base.index_of(&x.a)
    }

    pub fn element_at(&self, index: usize) -> SdElement {
        let v = self.base.order();
        SdElement {
            a: self.base.element_at(index % v),
            t: (index / v) as u8,
        }
    }

    pub fn mul_index(&self, x: usize, y: usize) -> usize {
        let v = self.base.order();
        let (a, t) = (x % v, x / v);
        let (b, u) = (y % v, y / v);
        let b = if t == 1 { self.base.neg_index(b) } else { b };
        (t ^ u) * v + self.base.add_index(a, b)
    }

    pub fn inv_index(&self, x: usize) -> usize {
        let v = self.base.order();
        if x >= v {
            x
        } else {
            self.base.neg_index(x)
        }
    }

    pub fn sd_mul(&self, x: &SdElement, y: &SdElement) -> SdElement {
        self.element_at(self.mul_index(self.index_of(x), self.index_of(y)))
    }

    pub fn sd_inv(&self, x: &SdElement) -> SdElement {
        self.element_at(self.inv_index(self.index_of(x)))
    }

    /// All elements in canonical order.
    pub fn enumerate(&self) -> Result<Vec<SdElement>> {
        self.base.check_cap()?;
        Ok((0..self.order()).map(|i| self.element_at(i)).collect())
    }
}

/// A hiding function on `A ⋊ Z_2`: `F(a, 0) = f(a)`, `F(a, 1) = g(a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DihedralHspInstance {
    group: SemidirectGroup,
    /// `values[i]` is `F` at canonical index `i`.
    values: Vec<Vec<bool>>,
    /// `h` with `H = ⟨(h, 1)⟩`, when known to the harness.
    hidden_generator: Option<GroupElement>,
    /// Offsets used to injectivize, recorded for replay.
    offsets: Option<Vec<usize>>,
}

/// Why a hiding function fails to hide a given subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum HspWitness {
    /// `F(x) ≠ F(x·(h, 1))`.
    NotInvariant { x: SdElement, xh: SdElement },
    /// Two different cosets share a value.
    CosetCollision { x: SdElement, y: SdElement },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HspVerdict {
    pub valid: bool,
    pub witness: Option<HspWitness>,
}

impl DihedralHspInstance {
    pub fn new(
        group: SemidirectGroup,
        values: Vec<Vec<bool>>,
        hidden_generator: Option<GroupElement>,
        offsets: Option<Vec<usize>>,
    ) -> Result<Self> {
        group.base().check_cap()?;
        if values.len() != group.order() {
            return Err(Error::Structural(format!(
                "{} hiding values for a group of order {}",
                values.len(),
                group.order()
            )));
        }
        if let Some(h) = &hidden_generator {
            if !group.base().contains(h) {
                return Err(Error::Structural(format!("{h:?} is not an element of the base group")));
            }
        }
        Ok(DihedralHspInstance {
            group,
            values,
            hidden_generator,
            offsets,
        })
    }

    pub fn group(&self) -> &SemidirectGroup {
        &self.group
    }

    pub fn values(&self) -> &[Vec<bool>] {
        &self.values
    }

    pub fn hidden_generator(&self) -> Option<&GroupElement> {
        self.hidden_generator.as_ref()
    }

    pub fn offsets(&self) -> Option<&[usize]> {
        self.offsets.as_deref()
    }

    /// `F` at an element.
    pub fn hide(&self, x: &SdElement) -> &[bool] {
        &self.values[self.group.index_of(x)]
    }

    /// Same instance with `F` replaced at one canonical index.
    pub fn with_value(mut self, index: usize, value: Vec<bool>) -> Self {
        self.values[index] = value;
        self
    }

    pub fn with_hidden_generator(mut self, h: Option<GroupElement>) -> Self {
        self.hidden_generator = h;
        self
    }
}

/// `H = ⟨(h, 1)⟩` from a shift pair with `g(x) = f(x - h)`, both injective.
pub fn build_hsp_from_shift(
    base: &AbelianGroup,
    f: &[Vec<bool>],
    g: &[Vec<bool>],
) -> Result<DihedralHspInstance> {
    base.check_cap()?;
    let v = base.order();
    if f.len() != v || g.len() != v {
        return Err(Error::Structural("shift pair tables must cover the base group".into()));
    }
    for (name, table) in [("f", f), ("g", g)] {
        if let Some((x, y)) = first_collision(table) {
            return Err(Error::Parameter(format!(
                "{name} is not injective: indices {x} and {y} share a value"
            )));
        }
    }
    let h = (0..v)
        .find(|&x| g[x] == f[0])
        .ok_or_else(|| Error::Parameter("g is not a translate of f".into()))?;
    if (0..v).any(|a| g[base.add_index(a, h)] != f[a]) {
        return Err(Error::Parameter("g is not a translate of f".into()));
    }
    let values = f.iter().chain(g).cloned().collect();
    let inst = DihedralHspInstance::new(
        SemidirectGroup::new(base.clone()),
        values,
        Some(base.element_at(h)),
        None,
    )?;
    let verdict = verify_hsp_instance(&inst)?;
    if !verdict.valid {
        return Err(Error::Consistency(format!(
            "built instance fails verification: {:?}",
            verdict.witness
        )));
    }
    Ok(inst)
}

fn first_collision(table: &[Vec<bool>]) -> Option<(usize, usize)> {
    let mut seen = HashMap::with_capacity(table.len());
    for (x, val) in table.iter().enumerate() {
        if let Some(&y) = seen.get(val) {
            return Some((y, x));
        }
        seen.insert(val, x);
    }
    None
}

/// Exhaustive check against the recorded generator.
pub fn verify_hsp_instance(inst: &DihedralHspInstance) -> Result<HspVerdict> {
    let h = inst
        .hidden_generator()
        .ok_or_else(|| Error::Parameter("instance records no hidden generator".into()))?;
    verify_hsp_generator(inst, h)
}

/// `F` is invariant under right multiplication by `(h, 1)` and separates
/// the cosets `{x, x·(h, 1)}`.
pub fn verify_hsp_generator(inst: &DihedralHspInstance, h: &GroupElement) -> Result<HspVerdict> {
    let grp = inst.group();
    let gen = grp.index_of(&grp.element(h.clone(), 1)?);
    let mut owner: HashMap<&[bool], usize> = HashMap::with_capacity(grp.order() / 2);
    for x in 0..grp.order() {
        let xh = grp.mul_index(x, gen);
        if inst.values[x] != inst.values[xh] {
            return Ok(HspVerdict {
                valid: false,
                witness: Some(HspWitness::NotInvariant {
                    x: grp.element_at(x),
                    xh: grp.element_at(xh),
                }),
            });
        }
        let rep = x.min(xh);
        if let Some(&other) = owner.get(inst.values[x].as_slice()) {
            if other != rep {
                return Ok(HspVerdict {
                    valid: false,
                    witness: Some(HspWitness::CosetCollision {
                        x: grp.element_at(other),
                        y: grp.element_at(x),
                    }),
                });
            }
        } else {
            owner.insert(&inst.values[x], rep);
        }
    }
    Ok(HspVerdict {
        valid: true,
        witness: None,
    })
}

/// `f(x) = F(x, 0)` and `g(x) = F(x, 1)`.
pub fn extract_shift_pair(inst: &DihedralHspInstance) -> (Vec<Vec<bool>>, Vec<Vec<bool>>) {
    let v = inst.group().base().order();
    (inst.values[..v].to_vec(), inst.values[v..].to_vec())
}

/// A hidden shift over `Z_N`, `N = 2^{d+1} - 1`, published as `β = α^s`.
#[derive(Clone, Debug, PartialEq)]
pub struct WhiteBoxSingerInstance {
    d: u32,
    exponent: u64,
    diffset: DifferenceSet,
    oracle: WhiteBoxSinger,
}

impl WhiteBoxSingerInstance {
    /// Fixed exponent over the first irreducible modulus and its smallest
    /// primitive element.
    pub fn with_exponent(d: u32, exponent: u64) -> Result<Self> {
        if d < 2 {
            return Err(Error::Degenerate(format!("d = {d} gives a trivial Singer set")));
        }
        let field = FiniteField::first_irreducible(2, d as usize + 1)?;
        let alpha = field.find_primitive();
        Self::with_field(&field, &alpha, exponent)
    }

    pub fn with_field(field: &FiniteField, alpha: &PrimitiveElement, exponent: u64) -> Result<Self> {
        if field.characteristic() != 2 {
            return Err(Error::Unsupported("white-box instances are built over GF(2^{d+1})".into()));
        }
        let diffset = construct_singer_with(field, alpha)?;
        let n = diffset.group().order() as u64;
        let exponent = exponent % n;
        let beta = field.pow(&alpha.element, exponent)?;
        Ok(WhiteBoxSingerInstance {
            d: field.degree() as u32 - 1,
            exponent,
            oracle: WhiteBoxSinger::new(field, alpha, beta)?,
            diffset,
        })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    /// The secret `s` with `β = α^s`.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn modulus(&self) -> &[u64] {
        self.oracle.field().modulus()
    }

    pub fn alpha(&self) -> &PrimitiveElement {
        self.oracle.alpha()
    }

    pub fn beta(&self) -> &crate::field::FieldElement {
        self.oracle.beta()
    }

    /// The Singer set `D = {x : tr(α^x) = 0}`.
    pub fn diffset(&self) -> &DifferenceSet {
        &self.diffset
    }

    pub fn oracle(&self) -> &WhiteBoxSinger {
        &self.oracle
    }

    /// `f(x) = tr(α^x)`.
    pub fn f(&self, x: usize) -> u64 {
        self.oracle
            .field()
            .trace(&self.oracle.field().pow(&self.alpha().element, x as u64).expect("field element"))
            .expect("field element")
    }

    /// `g(x) = tr(α^x β)`.
    pub fn g(&self, x: usize) -> u64 {
        self.oracle.trace_at(x)
    }

    /// The corresponding shifted-set problem, with oracle `g`.
    pub fn hidden_shift_instance(&self) -> Result<HiddenShiftInstance> {
        HiddenShiftInstance::whitebox_singer(&self.diffset, self.exponent)
    }
}

/// Uniform secret in `Z_N` from the seed.
pub fn make_whitebox_instance(d: u32, seed: u64) -> Result<WhiteBoxSingerInstance> {
    if d < 2 {
        return Err(Error::Degenerate(format!("d = {d} gives a trivial Singer set")));
    }
    let n = (1u64 << (d + 1)) - 1;
    let s = ChaCha8Rng::seed_from_u64(seed).gen_range(0..n);
    WhiteBoxSingerInstance::with_exponent(d, s)
}

/// Injectivize the known set and the shifted oracle with the same offsets and
/// assemble the hiding function. Non-injective draws are redrawn from derived
/// seeds, up to 8 times.
pub fn plant_hsp(instance: &HiddenShiftInstance, seed: u64) -> Result<DihedralHspInstance> {
    let ds = instance.diffset();
    let m = required_copies(ds.group().order() as u64) as usize;
    for attempt in 0..INJECTIVIZE_ATTEMPTS {
        let attempt_seed = ChaCha8Rng::seed_from_u64(seed ^ attempt.wrapping_mul(0x9e37_79b9_7f4a_7c15)).gen();
        let f = injectivize(ds, m, attempt_seed)?;
        if !f.is_injective() {
            continue;
        }
        let g = InjectivizedFunction::with_offsets(instance.oracle().as_oracle(), f.offsets().to_vec())?;
        let inst = build_hsp_from_shift(ds.group(), &f.table(), &g.table())?;
        return Ok(DihedralHspInstance {
            offsets: Some(f.offsets().to_vec()),
            ..inst
        });
    }
    Err(Error::Consistency(format!(
        "no injective offset set after {INJECTIVIZE_ATTEMPTS} draws of {m} copies"
    )))
}

#[derive(Clone, Debug, PartialEq)]
pub struct DihedralSolution {
    /// `h` with `H = ⟨(h, 1)⟩`, verified exhaustively.
    pub recovered: Option<GroupElement>,
    pub verdict: Option<HspVerdict>,
    pub shift_solver: SolverResult<f64>,
    /// Hiding-function evaluations spent on the final exhaustive check.
    pub hsp_verification_queries: u64,
}

impl DihedralSolution {
    pub fn generator(&self) -> Option<SdElement> {
        self.recovered.as_ref().map(|h| SdElement { a: h.clone(), t: 1 })
    }
}

/// Read `f` and `g` off `F`, keep their first coordinates (a known set and
/// its translate), recover the shift with the quantum routine and confirm the
/// reflection subgroup on the whole group.
pub fn solve_dihedral_hsp(inst: &DihedralHspInstance, max_trials: Option<u64>, seed: u64) -> Result<DihedralSolution> {
    let base = inst.group().base();
    let (f, g) = extract_shift_pair(inst);
    if f.iter().chain(&g).any(|x| x.is_empty()) {
        return Err(Error::Structural("hiding values must have at least one coordinate".into()));
    }
    let known: Vec<GroupElement> = (0..base.order())
        .filter(|&x| f[x][0])
        .map(|x| base.element_at(x))
        .collect();
    let ds = verify_difference_set(base, &known)?;
    let shifted = SetOracle::new(base.clone(), g.iter().map(|x| x[0]).collect());
    let shift_inst = HiddenShiftInstance::from_oracle(&ds, ShiftOracle::BlackBox(shifted))?;
    let trials = max_trials.unwrap_or_else(|| default_max_trials(&ds.params()));
    let shift_solver = recover_shift::<f64>(&shift_inst, trials, seed)?;
    let mut sol = DihedralSolution {
        recovered: None,
        verdict: None,
        shift_solver,
        hsp_verification_queries: 0,
    };
    if let Some(h) = sol.shift_solver.recovered.clone() {
        let verdict = verify_hsp_generator(inst, &h)?;
        sol.hsp_verification_queries = 2 * inst.group().order() as u64;
        if verdict.valid {
            sol.recovered = Some(h);
        }
        sol.verdict = Some(verdict);
    }
    Ok(sol)
}

/// `|A|^m` for `|A| = 2^n - 1` and `m = ⌈2 log₂ |A|⌉ + 6`, next to `2^{n²}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceCount {
    pub n: u32,
    pub group_order: u64,
    pub copies: u32,
    /// Decimal string of `|A|^m`.
    pub count: String,
    pub log2_count: f64,
    pub asymptotic_log2: u64,
}

pub fn expected_instance_count(n: u32) -> Result<InstanceCount> {
    if !(2..=63).contains(&n) {
        return Err(Error::Parameter(format!("n = {n} outside 2..=63")));
    }
    let order = (1u64 << n) - 1;
    let m = required_copies(order);
    let count = BigUint::from(order).pow(m);
    Ok(InstanceCount {
        n,
        group_order: order,
        copies: m,
        count: count.to_string(),
        log2_count: m as f64 * (order as f64).log2(),
        asymptotic_log2: n as u64 * n as u64,
    })
}
