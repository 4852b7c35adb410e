//! Difference sets: certification, the Paley, Hadamard and Singer families,
//! translates and developments.
//!
//! A `(v, k, λ)`-difference set is a `k`-subset `D` of a group of order `v`
//! whose difference multiset `{x - y : x, y ∈ D}` hits every nonzero element
//! exactly `λ` times (and `0` exactly `k` times). All counting here is exact
//! integer arithmetic.

mod bent;
mod development;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{is_prime, FieldSpec, FiniteField, PrimitiveElement};
use crate::group::{AbelianGroup, GroupElement, GroupSpec};
use crate::oracle::{MembershipOracle, SetOracle};

pub use bent::{is_bent, BentFunctionSpec};
pub use development::{block_intersection, development, Development};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Params {
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
}

impl Params {
    pub fn new(v: u64, k: u64, lambda: u64) -> Self {
        Params { v, k, lambda }
    }

    /// `k - λ`, the squared magnitude of every nontrivial character sum.
    pub fn order_parameter(&self) -> u64 {
        self.k - self.lambda
    }

    /// `λ(v - 1) = k(k - 1)`.
    pub fn is_consistent(&self) -> bool {
        self.v >= 2 && self.lambda * (self.v - 1) == self.k * (self.k - 1)
    }

    /// Squared norm of the Fourier transform of `|D⟩/√k`, i.e.
    /// `((v - 1)(k - λ) + k²) / (vk)`, as an exact rational.
    pub fn normalization_identity(&self) -> Ratio<u64> {
        Ratio::new(
            (self.v - 1) * (self.k - self.lambda) + self.k * self.k,
            self.v * self.k,
        )
    }

    pub fn paley(q: u64) -> Self {
        Params::new(q, (q - 1) / 2, (q - 3) / 4)
    }

    /// Parameters of the Hadamard family on `Z_2^{2n}`.
    pub fn hadamard(n: u32) -> Self {
        Params::new(
            1 << (2 * n),
            (1 << (2 * n - 1)) - (1 << (n - 1)),
            (1 << (2 * n - 2)) - (1 << (n - 1)),
        )
    }

    pub fn singer(q: u64, d: u32) -> Self {
        let geom = |e: u32| (q.pow(e) - 1) / (q - 1);
        Params::new(geom(d + 1), geom(d), geom(d - 1))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Paley,
    Hadamard,
    Singer,
    Custom,
}

/// Enough information to rebuild a constructed set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Provenance {
    None,
    /// Nonzero squares of the given field; group coordinates are the
    /// polynomial-basis coefficients.
    Field { field: FieldSpec },
    /// Support of a bent function, truth table as a `0`/`1` string.
    Bent { truth_table: String },
    /// Trace-zero exponents in `GF(q^{d+1})` with respect to `alpha`.
    Singer {
        q: u64,
        d: u32,
        field: FieldSpec,
        alpha: Vec<u64>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferenceSet {
    group: AbelianGroup,
    /// Sorted by canonical index.
    elements: Vec<GroupElement>,
    members: Vec<bool>,
    params: Params,
    family: Family,
    provenance: Provenance,
}

impl DifferenceSet {
    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    /// Canonical indices of the members, increasing.
    pub fn indices(&self) -> Vec<usize> {
        self.elements.iter().map(|e| self.group.index_of(e)).collect()
    }

    /// Indicator over canonical indices.
    pub fn indicator(&self) -> &[bool] {
        &self.members
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        self.group.contains(x) && self.members[self.group.index_of(x)]
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    fn labelled(mut self, family: Family, provenance: Provenance) -> Self {
        self.family = family;
        self.provenance = provenance;
        self
    }

    /// Assert the closed-form parameters of a family constructor.
    fn expect_params(self, want: Params) -> Result<Self> {
        if self.params != want {
            return Err(Error::Consistency(format!(
                "constructed set has parameters {:?}, expected {want:?}",
                self.params
            )));
        }
        Ok(self)
    }

    pub fn to_doc(&self) -> DifferenceSetDoc {
        DifferenceSetDoc {
            group: self.group.spec(),
            elements: self.elements.iter().map(|e| e.coords().to_vec()).collect(),
            params: Some(self.params),
            family: Some(self.family),
            provenance: Some(self.provenance.clone()),
        }
    }

    /// Re-certify a document. Claimed parameters, when present, must match.
    pub fn from_doc(doc: DifferenceSetDoc) -> Result<Self> {
        let group = AbelianGroup::new(doc.group.moduli)?;
        let elements = doc
            .elements
            .into_iter()
            .map(|c| group.element(c))
            .collect::<Result<Vec<_>>>()?;
        let ds = verify_difference_set(&group, &elements)?;
        if let Some(claimed) = doc.params {
            if claimed != ds.params {
                return Err(Error::Consistency(format!(
                    "claimed parameters {claimed:?} but the set certifies as {:?}",
                    ds.params
                )));
            }
        }
        Ok(ds.labelled(
            doc.family.unwrap_or(Family::Custom),
            doc.provenance.unwrap_or(Provenance::None),
        ))
    }
}

/// Wire form: `{"group", "elements", "params", "family", "provenance"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferenceSetDoc {
    pub group: GroupSpec,
    pub elements: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Params>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<Family>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

impl Serialize for DifferenceSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_doc().serialize(s)
    }
}

impl<'de> Deserialize<'de> for DifferenceSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = DifferenceSetDoc::deserialize(d)?;
        DifferenceSet::from_doc(doc).map_err(serde::de::Error::custom)
    }
}

/// Difference multiplicities: `counts[i]` is the number of ordered pairs
/// `(x, y)` in the subset with `x - y` equal to the element of index `i`.
pub fn difference_counts(group: &AbelianGroup, indices: &[usize]) -> Vec<u64> {
    let mut counts = vec![0u64; group.order()];
    for &x in indices {
        for &y in indices {
            counts[group.sub_index(x, y)] += 1;
        }
    }
    counts
}

/// Certify `elements` as a difference set and return it with its parameters.
///
/// Rejection carries a witness pair of nonzero elements with different
/// coverage.
pub fn verify_difference_set(group: &AbelianGroup, elements: &[GroupElement]) -> Result<DifferenceSet> {
    group.check_cap()?;
    let v = group.order();
    let mut members = vec![false; v];
    for e in elements {
        if !group.contains(e) {
            return Err(Error::Structural(format!("{e:?} is not an element of the group")));
        }
        let i = group.index_of(e);
        if members[i] {
            return Err(Error::Parameter(format!("{e:?} is listed twice")));
        }
        members[i] = true;
    }
    let k = elements.len();
    if k < 2 {
        return Err(Error::Parameter(format!("a difference set needs k >= 2, got {k}")));
    }
    let indices: Vec<usize> = (0..v).filter(|&i| members[i]).collect();
    let counts = difference_counts(group, &indices);
    let lambda = counts[1];
    if let Some(j) = (2..v).find(|&j| counts[j] != lambda) {
        return Err(Error::NotDifferenceSet {
            first: group.element_at(1),
            first_count: lambda,
            second: group.element_at(j),
            second_count: counts[j],
        });
    }
    let params = Params::new(v as u64, k as u64, lambda);
    debug_assert!(params.is_consistent());
    Ok(DifferenceSet {
        group: group.clone(),
        elements: indices.iter().map(|&i| group.element_at(i)).collect(),
        members,
        params,
        family: Family::Custom,
        provenance: Provenance::None,
    })
}

/// Nonzero squares of GF(q), `q ≡ 3 (mod 4)`, in the additive group `Z_p^n`.
pub fn construct_paley(field: &FiniteField) -> Result<DifferenceSet> {
    let q = field.size();
    if q % 4 != 3 {
        return Err(Error::Parameter(format!("Paley sets need q ≡ 3 (mod 4), got q = {q}")));
    }
    let group = AbelianGroup::elementary(field.characteristic() as usize, field.degree())?;
    let mut members = vec![false; q as usize];
    for x in field.elements().skip(1) {
        let sq = field.mul(&x, &x)?;
        members[group_index(&group, sq.coeffs())] = true;
    }
    let elements: Vec<GroupElement> = (0..q as usize)
        .filter(|&i| members[i])
        .map(|i| group.element_at(i))
        .collect();
    Ok(verify_difference_set(&group, &elements)?
        .labelled(Family::Paley, Provenance::Field { field: field.spec() })
        .expect_params(Params::paley(q))?)
}

fn group_index(group: &AbelianGroup, coeffs: &[u64]) -> usize {
    let e = group
        .element(coeffs.iter().map(|&c| c as usize).collect())
        .expect("field coefficients are group coordinates");
    group.index_of(&e)
}

/// Support of a bent function on `Z_2^{2n}`, complemented first if needed so
/// that `k = 2^{2n-1} - 2^{n-1}`.
pub fn construct_hadamard(spec: &BentFunctionSpec) -> Result<DifferenceSet> {
    if !is_bent(spec)? {
        return Err(Error::Parameter("function is not bent".into()));
    }
    let n = (spec.arity() / 2) as u32;
    if n < 2 {
        return Err(Error::Degenerate(
            "Hadamard parameters need 2n >= 4 variables (n = 1 gives k = 1, λ = 0)".into(),
        ));
    }
    let want = Params::hadamard(n);
    let spec = if spec.weight() as u64 == want.k {
        spec.clone()
    } else {
        spec.complement()
    };
    let group = AbelianGroup::elementary(2, spec.arity())?;
    let elements: Vec<GroupElement> = spec
        .truth_table()
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| group.element_at(i))
        .collect();
    Ok(verify_difference_set(&group, &elements)?
        .labelled(
            Family::Hadamard,
            Provenance::Bent {
                truth_table: spec.to_bits(),
            },
        )
        .expect_params(want)?)
}

/// Singer set in `Z_N`, `N = (q^{d+1} - 1)/(q - 1)`, over the first
/// irreducible modulus of degree `d + 1` and its smallest primitive element.
pub fn construct_singer(q: u64, d: u32) -> Result<DifferenceSet> {
    if !is_prime(q) {
        return Err(Error::Unsupported(format!(
            "Singer sets are built for prime q only, got q = {q}"
        )));
    }
    if d < 2 {
        return Err(Error::Degenerate(format!(
            "Singer parameters for d = {d} have k = 1, λ = 0"
        )));
    }
    let field = FiniteField::first_irreducible(q, d as usize + 1)?;
    let alpha = field.find_primitive();
    construct_singer_with(&field, &alpha)
}

/// Singer set from an explicit field `GF(q^{d+1})` (q prime) and primitive
/// element: `D = {i mod N : tr(α^i) = 0, 0 <= i < N}`.
pub fn construct_singer_with(field: &FiniteField, alpha: &PrimitiveElement) -> Result<DifferenceSet> {
    let q = field.characteristic();
    let d = field.degree() as u32 - 1;
    if d < 2 {
        return Err(Error::Degenerate(format!(
            "Singer parameters for d = {d} have k = 1, λ = 0"
        )));
    }
    if !field.is_primitive(&alpha.element)? {
        return Err(Error::Parameter("alpha is not primitive".into()));
    }
    let want = Params::singer(q, d);
    let n = want.v as usize;
    let group = AbelianGroup::cyclic(n)?;
    let traces = field.power_traces(alpha);
    let elements: Vec<GroupElement> = (0..n)
        .filter(|&i| traces[i] == 0)
        .map(|i| group.element_at(i))
        .collect();
    Ok(verify_difference_set(&group, &elements)?
        .labelled(
            Family::Singer,
            Provenance::Singer {
                q,
                d,
                field: field.spec(),
                alpha: alpha.element.coeffs().to_vec(),
            },
        )
        .expect_params(want)?)
}

/// The translate `s + D`, itself a difference set with the same parameters.
pub fn shift_set(ds: &DifferenceSet, s: &GroupElement) -> Result<DifferenceSet> {
    let g = &ds.group;
    if !g.contains(s) {
        return Err(Error::Structural(format!("{s:?} is not an element of the group")));
    }
    let si = g.index_of(s);
    let mut members = vec![false; g.order()];
    for i in ds.indices() {
        members[g.add_index(i, si)] = true;
    }
    let elements = (0..g.order())
        .filter(|&i| members[i])
        .map(|i| g.element_at(i))
        .collect();
    Ok(DifferenceSet {
        group: g.clone(),
        elements,
        members,
        params: ds.params,
        family: ds.family,
        provenance: ds.provenance.clone(),
    })
}

/// Membership oracle for `s + D`.
pub fn membership_oracle(ds: &DifferenceSet, s: &GroupElement) -> Result<SetOracle> {
    let shifted = shift_set(ds, s)?;
    Ok(SetOracle::new(shifted.group, shifted.members))
}

impl MembershipOracle for DifferenceSet {
    fn group(&self) -> &AbelianGroup {
        &self.group
    }

    fn contains_index(&self, index: usize) -> bool {
        self.members[index]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize, xs: &[usize]) -> (AbelianGroup, Vec<GroupElement>) {
        let g = AbelianGroup::cyclic(n).unwrap();
        let els = xs.iter().map(|&x| g.element(vec![x]).unwrap()).collect();
        (g, els)
    }

    #[test]
    fn planar_13_4_1() {
        let (g, els) = z(13, &[0, 1, 3, 9]);
        let ds = verify_difference_set(&g, &els).unwrap();
        assert_eq!(ds.params(), Params::new(13, 4, 1));
    }

    #[test]
    fn hadamard_listed_vectors() {
        let g = AbelianGroup::elementary(2, 4).unwrap();
        let els: Vec<_> = [
            [1, 1, 0, 0],
            [1, 1, 1, 0],
            [1, 1, 0, 1],
            [0, 0, 1, 1],
            [1, 0, 1, 1],
            [0, 1, 1, 1],
        ]
        .iter()
        .map(|c| g.element(c.to_vec()).unwrap())
        .collect();
        assert_eq!(verify_difference_set(&g, &els).unwrap().params(), Params::new(16, 6, 2));
    }

    #[test]
    fn z4_pair_rejected_with_witness() {
        let (g, els) = z(4, &[0, 1]);
        match verify_difference_set(&g, &els) {
            Err(Error::NotDifferenceSet {
                first,
                first_count,
                second,
                second_count,
            }) => {
                assert_eq!((first.coords(), first_count), (&[1][..], 1));
                assert_eq!((second.coords(), second_count), (&[2][..], 0));
            }
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn malformed_inputs() {
        let (g, els) = z(7, &[1]);
        assert!(matches!(verify_difference_set(&g, &els), Err(Error::Parameter(_))));
        let (g, els) = z(7, &[1, 2, 1]);
        assert!(matches!(verify_difference_set(&g, &els), Err(Error::Parameter(_))));
    }

    #[test]
    fn paley_gf7() {
        let ds = construct_paley(&FiniteField::prime(7).unwrap()).unwrap();
        let xs: Vec<usize> = ds.elements().iter().map(|e| e.coords()[0]).collect();
        assert_eq!(xs, vec![1, 2, 4]);
        assert_eq!(ds.params(), Params::new(7, 3, 1));
        // All six ordered nonzero differences hit 1..6 once each.
        let counts = difference_counts(ds.group(), &ds.indices());
        assert_eq!(&counts[1..], &[1; 6]);
    }

    #[test]
    fn paley_needs_3_mod_4() {
        assert!(matches!(
            construct_paley(&FiniteField::prime(5).unwrap()),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn singer_gf8() {
        let field = FiniteField::new(2, vec![1, 1, 0, 1]).unwrap();
        let alpha = field.find_primitive();
        let ds = construct_singer_with(&field, &alpha).unwrap();
        let xs: Vec<usize> = ds.elements().iter().map(|e| e.coords()[0]).collect();
        assert_eq!(xs, vec![1, 2, 4]);
        assert_eq!(ds.params(), Params::new(7, 3, 1));
    }

    #[test]
    fn singer_rejects_composite_q_and_small_d() {
        assert!(matches!(construct_singer(4, 2), Err(Error::Unsupported(_))));
        assert!(matches!(construct_singer(3, 1), Err(Error::Degenerate(_))));
    }

    #[test]
    fn hadamard_complements_majority_support() {
        let f = BentFunctionSpec::inner_product(2).unwrap().complement();
        assert_eq!(f.weight(), 10);
        let ds = construct_hadamard(&f).unwrap();
        assert_eq!(ds.params(), Params::new(16, 6, 2));
    }

    #[test]
    fn hadamard_rejects_non_bent() {
        let f = BentFunctionSpec::new(4, vec![false; 16]).unwrap();
        assert!(construct_hadamard(&f).is_err());
    }

    #[test]
    fn shifts() {
        let (g, els) = z(13, &[0, 1, 3, 9]);
        let ds = verify_difference_set(&g, &els).unwrap();
        assert_eq!(shift_set(&ds, &g.zero()).unwrap(), ds);
        let s2 = shift_set(&ds, &g.element(vec![2]).unwrap()).unwrap();
        let xs: Vec<usize> = s2.elements().iter().map(|e| e.coords()[0]).collect();
        assert_eq!(xs, vec![2, 3, 5, 11]);
        assert_eq!(verify_difference_set(&g, s2.elements()).unwrap().params(), ds.params());

        let oracle = membership_oracle(&ds, &g.element(vec![2]).unwrap()).unwrap();
        for x in g.elements().unwrap() {
            assert_eq!(oracle.contains(&x), s2.contains(&x));
        }
    }

    #[test]
    fn normalization_identity_is_one() {
        for p in [Params::new(13, 4, 1), Params::new(16, 6, 2), Params::new(27, 13, 6)] {
            assert_eq!(p.normalization_identity(), Ratio::from_integer(1));
        }
    }

    #[test]
    fn doc_round_trip_and_claim_check() {
        let (g, els) = z(13, &[0, 1, 3, 9]);
        let ds = verify_difference_set(&g, &els).unwrap();
        let json = serde_json::to_string(&ds).unwrap();
        assert_eq!(
            json,
            r#"{"group":{"moduli":[13]},"elements":[[0],[1],[3],[9]],"params":{"v":13,"k":4,"lambda":1},"family":"custom","provenance":{"kind":"none"}}"#
        );
        let back: DifferenceSet = serde_json::from_str(&json).unwrap();
        assert_eq!(back, ds);
        let lie = json.replace(r#""lambda":1"#, r#""lambda":2"#);
        assert!(serde_json::from_str::<DifferenceSet>(&lie).is_err());
    }
}
