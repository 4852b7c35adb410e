//! Arithmetic in GF(p^n) in a polynomial basis.
//!
//! An element is a coefficient vector `c_0 + c_1 α + ... + c_{n-1} α^{n-1}`
//! where `α` is the class of `x` modulo the defining polynomial. Elements are
//! also addressed by an integer index reading the coefficients as base-`p`
//! digits, `c_0` least significant.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::DEFAULT_CAP;

/// JSON form of a field: `{"p": p, "n": n, "modulus": [c_0, ..., c_n]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
    pub n: usize,
    pub modulus: Vec<u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "FieldSpec", into = "FieldSpec")]
pub struct FiniteField {
    p: u64,
    n: usize,
    /// Monic, length `n + 1`, constant term first.
    modulus: Vec<u64>,
    size: u64,
    /// `tr(α^i)` for `i < n`.
    basis_traces: Vec<u64>,
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for FiniteField {}

impl TryFrom<FieldSpec> for FiniteField {
    type Error = Error;

    fn try_from(spec: FieldSpec) -> Result<Self> {
        if spec.modulus.len() != spec.n + 1 {
            return Err(Error::Parameter(format!(
                "modulus has {} coefficients, expected n + 1 = {}",
                spec.modulus.len(),
                spec.n + 1
            )));
        }
        FiniteField::new(spec.p, spec.modulus)
    }
}

impl From<FiniteField> for FieldSpec {
    fn from(f: FiniteField) -> Self {
        f.spec()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement {
    coeffs: Vec<u64>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

/// An element whose multiplicative order is exactly `p^n - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimitiveElement {
    pub element: FieldElement,
    pub order: u64,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors in increasing order, by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn checked_size(p: u64, n: usize) -> Result<u64> {
    let mut size: u128 = 1;
    for _ in 0..n {
        size *= p as u128;
        if size > DEFAULT_CAP as u128 {
            return Err(Error::Resource {
                size,
                cap: DEFAULT_CAP,
            });
        }
    }
    Ok(size as u64)
}

impl FiniteField {
    /// GF(p)[x]/(modulus). The modulus must be monic and irreducible, constant
    /// term first.
    pub fn new(p: u64, modulus: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Parameter(format!("characteristic {p} is not prime")));
        }
        if modulus.len() < 2 {
            return Err(Error::Parameter("modulus must have degree >= 1".into()));
        }
        let n = modulus.len() - 1;
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::Parameter(format!("modulus coefficients must lie in [0, {p})")));
        }
        if modulus[n] != 1 {
            return Err(Error::Parameter("modulus must be monic".into()));
        }
        let size = checked_size(p, n)?;
        if !poly::is_irreducible(&modulus, p) {
            return Err(Error::Parameter(format!("{modulus:?} is reducible over GF({p})")));
        }
        let mut field = FiniteField {
            p,
            n,
            modulus,
            size,
            basis_traces: Vec::new(),
        };
        field.basis_traces = (0..n)
            .map(|i| {
                let mut e = field.zero();
                e.coeffs[i] = 1;
                field.trace_by_frobenius(&e).coeffs[0]
            })
            .collect();
        Ok(field)
    }

    /// The prime field GF(p), presented as GF(p)[x]/(x).
    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, vec![0, 1])
    }

    /// GF(p^n) using the first irreducible monic polynomial in base-`p` order
    /// of its non-leading coefficients.
    pub fn first_irreducible(p: u64, n: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Parameter(format!("characteristic {p} is not prime")));
        }
        if n == 0 {
            return Err(Error::Parameter("extension degree must be >= 1".into()));
        }
        let size = checked_size(p, n)?;
        for idx in 0..size {
            let mut m = digits(idx, p, n);
            m.push(1);
            if poly::is_irreducible(&m, p) {
                return Self::new(p, m);
            }
        }
        unreachable!("an irreducible polynomial of every degree exists")
    }

    /// GF(p^n) with a uniformly sampled irreducible monic modulus.
    pub fn random<R: Rng + ?Sized>(p: u64, n: usize, rng: &mut R) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Parameter(format!("characteristic {p} is not prime")));
        }
        if n == 0 {
            return Err(Error::Parameter("extension degree must be >= 1".into()));
        }
        checked_size(p, n)?;
        loop {
            let mut m: Vec<u64> = (0..n).map(|_| rng.gen_range(0..p)).collect();
            m.push(1);
            if poly::is_irreducible(&m, p) {
                return Self::new(p, m);
            }
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            p: self.p,
            n: self.n,
            modulus: self.modulus.clone(),
        }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            coeffs: vec![0; self.n],
        }
    }

    pub fn one(&self) -> FieldElement {
        self.scalar(1)
    }

    /// The embedded prime-field constant `c mod p`.
    pub fn scalar(&self, c: u64) -> FieldElement {
        let mut e = self.zero();
        e.coeffs[0] = c % self.p;
        e
    }

    /// The class of `x`. In a prime field presented as GF(p)[x]/(x) this is 0.
    pub fn generator(&self) -> FieldElement {
        let mut e = self.zero();
        if self.n == 1 {
            e.coeffs[0] = (self.p - self.modulus[0]) % self.p;
        } else {
            e.coeffs[1] = 1;
        }
        e
    }

    pub fn element(&self, coeffs: Vec<u64>) -> Result<FieldElement> {
        if coeffs.len() != self.n {
            return Err(Error::Structural(format!(
                "expected {} coefficients, got {}",
                self.n,
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::Structural(format!("coefficients must lie in [0, {})", self.p)));
        }
        Ok(FieldElement { coeffs })
    }

    pub fn from_index(&self, index: u64) -> FieldElement {
        debug_assert!(index < self.size);
        FieldElement {
            coeffs: digits(index, self.p, self.n),
        }
    }

    pub fn index_of(&self, x: &FieldElement) -> u64 {
        x.coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.size).map(move |i| self.from_index(i))
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        x.coeffs.len() == self.n && x.coeffs.iter().all(|&c| c < self.p)
    }

    fn check(&self, x: &FieldElement) -> Result<()> {
        if !self.contains(x) {
            return Err(Error::Structural(format!(
                "{x:?} is not an element of GF({}^{})",
                self.p, self.n
            )));
        }
        Ok(())
    }

    pub fn add(&self, x: &FieldElement, y: &FieldElement) -> Result<FieldElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.add_unchecked(x, y))
    }

    fn add_unchecked(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let coeffs = x
            .coeffs
            .iter()
            .zip(&y.coeffs)
            .map(|(&a, &b)| (a + b) % self.p)
            .collect();
        FieldElement { coeffs }
    }

    pub fn neg(&self, x: &FieldElement) -> Result<FieldElement> {
        self.check(x)?;
        let coeffs = x.coeffs.iter().map(|&a| (self.p - a) % self.p).collect();
        Ok(FieldElement { coeffs })
    }

    pub fn sub(&self, x: &FieldElement, y: &FieldElement) -> Result<FieldElement> {
        self.add(x, &self.neg(y)?)
    }

    pub fn mul(&self, x: &FieldElement, y: &FieldElement) -> Result<FieldElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul_unchecked(x, y))
    }

    fn mul_unchecked(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let p = self.p;
        let n = self.n;
        let mut prod = vec![0u64; 2 * n - 1];
        for (i, &a) in x.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a * b) % p;
            }
        }
        // x^n ≡ -(m_0 + ... + m_{n-1} x^{n-1})
        for d in (n..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for i in 0..n {
                let t = c * self.modulus[i] % p;
                prod[d - n + i] = (prod[d - n + i] + p - t) % p;
            }
        }
        prod.truncate(n);
        FieldElement { coeffs: prod }
    }

    pub fn pow(&self, x: &FieldElement, mut e: u64) -> Result<FieldElement> {
        self.check(x)?;
        let mut base = x.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_unchecked(&acc, &base);
            }
            base = self.mul_unchecked(&base, &base);
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn inv(&self, x: &FieldElement) -> Result<FieldElement> {
        self.check(x)?;
        if x.is_zero() {
            return Err(Error::Domain("zero has no multiplicative inverse".into()));
        }
        self.pow(x, self.size - 2)
    }

    /// `x ↦ x^p`.
    pub fn frobenius(&self, x: &FieldElement) -> Result<FieldElement> {
        self.pow(x, self.p)
    }

    /// `x + x^p + ... + x^{p^{n-1}}` computed literally; the result lies in
    /// the prime subfield.
    pub fn trace_by_frobenius(&self, x: &FieldElement) -> FieldElement {
        let mut acc = self.zero();
        let mut term = x.clone();
        for _ in 0..self.n {
            acc = self.add_unchecked(&acc, &term);
            term = self.pow(&term, self.p).expect("term is a field element");
        }
        debug_assert!(acc.coeffs[1..].iter().all(|&c| c == 0));
        acc
    }

    /// Absolute trace to GF(p), as an integer in `[0, p)`.
    pub fn trace(&self, x: &FieldElement) -> Result<u64> {
        self.check(x)?;
        Ok(self.trace_unchecked(x))
    }

    fn trace_unchecked(&self, x: &FieldElement) -> u64 {
        x.coeffs
            .iter()
            .zip(&self.basis_traces)
            .fold(0, |acc, (&c, &t)| (acc + c * t) % self.p)
    }

    /// Trace to the subfield GF(p^e). Only the prime subfield (`e = 1`) is
    /// supported.
    pub fn trace_to_subfield(&self, x: &FieldElement, subfield_exponent: usize) -> Result<u64> {
        if subfield_exponent != 1 {
            return Err(Error::Unsupported(format!(
                "trace to GF(p^{subfield_exponent}); only the prime subfield is supported"
            )));
        }
        self.trace(x)
    }

    pub fn multiplicative_order(&self, x: &FieldElement) -> Result<u64> {
        self.check(x)?;
        if x.is_zero() {
            return Err(Error::Domain("zero has no multiplicative order".into()));
        }
        let group_order = self.size - 1;
        let mut order = group_order;
        for r in prime_factors(group_order) {
            while order % r == 0 && self.pow(x, order / r)? == self.one() {
                order /= r;
            }
        }
        Ok(order)
    }

    pub fn is_primitive(&self, x: &FieldElement) -> Result<bool> {
        self.check(x)?;
        if x.is_zero() {
            return Ok(false);
        }
        let group_order = self.size - 1;
        for r in prime_factors(group_order) {
            if self.pow(x, group_order / r)? == self.one() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The primitive element of smallest index.
    pub fn find_primitive(&self) -> PrimitiveElement {
        let order = self.size - 1;
        let factors = prime_factors(order);
        let one = self.one();
        for idx in 1..self.size {
            let x = self.from_index(idx);
            let ok = factors
                .iter()
                .all(|&r| self.pow(&x, order / r).expect("valid element") != one);
            if ok {
                return PrimitiveElement { element: x, order };
            }
        }
        unreachable!("the multiplicative group of a finite field is cyclic")
    }

    /// Wrap `x` as a primitive element after certifying its order.
    pub fn primitive(&self, x: FieldElement) -> Result<PrimitiveElement> {
        if !self.is_primitive(&x)? {
            return Err(Error::Parameter(format!("{x:?} is not primitive")));
        }
        Ok(PrimitiveElement {
            element: x,
            order: self.size - 1,
        })
    }

    /// Smallest `i >= 0` with `base^i = target`, by stepping through powers.
    pub fn discrete_log(&self, base: &PrimitiveElement, target: &FieldElement) -> Result<u64> {
        self.check(&base.element)?;
        self.check(target)?;
        if target.is_zero() {
            return Err(Error::Domain("discrete log of zero".into()));
        }
        let mut cur = self.one();
        for i in 0..base.order {
            if &cur == target {
                return Ok(i);
            }
            cur = self.mul_unchecked(&cur, &base.element);
        }
        Err(Error::Consistency("target not reached by a primitive element".into()))
    }

    /// `[α^0, α^1, ..., α^{q-2}]`.
    pub fn powers(&self, alpha: &PrimitiveElement) -> Vec<FieldElement> {
        let mut out = Vec::with_capacity(alpha.order as usize);
        let mut cur = self.one();
        for _ in 0..alpha.order {
            out.push(cur.clone());
            cur = self.mul_unchecked(&cur, &alpha.element);
        }
        out
    }

    /// `tr(α^i)` for `i` in `0..q-1`.
    pub fn power_traces(&self, alpha: &PrimitiveElement) -> Vec<u64> {
        let mut out = Vec::with_capacity(alpha.order as usize);
        let mut cur = self.one();
        for _ in 0..alpha.order {
            out.push(self.trace_unchecked(&cur));
            cur = self.mul_unchecked(&cur, &alpha.element);
        }
        out
    }
}

fn digits(mut idx: u64, p: u64, n: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(idx % p);
        idx /= p;
    }
    out
}

/// Dense polynomials over GF(p), constant term first, used for the
/// irreducibility test.
mod poly {
    fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn inv_mod(a: u64, p: u64) -> u64 {
        let mut acc = 1u64;
        let mut base = a % p;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc
    }

    /// Remainder of `a` modulo `m` (`m` nonzero).
    fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let m = trim(m.to_vec());
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p);
        let mut r = trim(a.to_vec());
        while r.len() > dm {
            let dr = r.len() - 1;
            let c = r[dr] * lead_inv % p;
            for i in 0..=dm {
                let t = c * m[i] % p;
                r[dr - dm + i] = (r[dr - dm + i] + p - t) % p;
            }
            r = trim(r);
        }
        r
    }

    fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        rem(&prod, m, p)
    }

    fn powmod(a: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut base = rem(a, m, p);
        let mut acc = rem(&[1], m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(&acc, &base, m, p);
            }
            base = mulmod(&base, &base, m, p);
            e >>= 1;
        }
        acc
    }

    fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// Ben-Or: `f` of degree `n` is irreducible iff `gcd(x^{p^i} - x, f) = 1`
    /// for `1 <= i <= n/2`.
    pub(super) fn is_irreducible(f: &[u64], p: u64) -> bool {
        let f = trim(f.to_vec());
        if f.len() < 2 {
            return false;
        }
        let n = f.len() - 1;
        if n == 1 {
            return true;
        }
        if f[0] == 0 {
            return false;
        }
        let x = vec![0, 1];
        let mut h = rem(&x, &f, p);
        for _ in 1..=n / 2 {
            h = powmod(&h, p, &f, p);
            let mut diff = h.clone();
            diff.resize(diff.len().max(2), 0);
            diff[1] = (diff[1] + p - 1) % p;
            let g = gcd(&f, &diff, p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }

}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf27() -> FiniteField {
        FiniteField::new(3, vec![2, 1, 1, 1]).unwrap()
    }

    fn gf8() -> FiniteField {
        FiniteField::new(2, vec![1, 1, 0, 1]).unwrap()
    }

    #[test]
    fn gf27_alpha_times_alpha_squared() {
        let f = gf27();
        let a = f.generator();
        let a2 = f.mul(&a, &a).unwrap();
        // 2α² + 2α + 1
        assert_eq!(f.mul(&a, &a2).unwrap().coeffs(), &[1, 2, 2]);
        // f(α) = 0
        let a3 = f.mul(&a, &a2).unwrap();
        let mut acc = f.add(&a3, &a2).unwrap();
        acc = f.add(&acc, &a).unwrap();
        acc = f.add(&acc, &f.scalar(2)).unwrap();
        assert!(acc.is_zero());
    }

    #[test]
    fn gf8_alpha_cubed() {
        let f = gf8();
        let a = f.generator();
        let a2 = f.mul(&a, &a).unwrap();
        assert_eq!(f.mul(&a, &a2).unwrap().coeffs(), &[1, 1, 0]);
    }

    #[test]
    fn multiplicative_identity() {
        let f = gf27();
        for x in f.elements() {
            assert_eq!(f.mul(&x, &f.one()).unwrap(), x);
        }
    }

    #[test]
    fn inverse_of_zero_is_domain_error() {
        let f = gf8();
        assert!(matches!(f.inv(&f.zero()), Err(Error::Domain(_))));
        for x in f.elements().skip(1) {
            assert_eq!(f.mul(&x, &f.inv(&x).unwrap()).unwrap(), f.one());
        }
    }

    #[test]
    fn reducible_or_malformed_modulus_rejected() {
        assert!(FiniteField::new(2, vec![1, 0, 0, 1]).is_err());
        assert!(FiniteField::new(4, vec![1, 1, 1]).is_err());
        assert!(FiniteField::new(3, vec![2, 1, 1, 2]).is_err());
    }

    #[test]
    fn traces_in_gf8() {
        let f = gf8();
        assert_eq!(f.trace(&f.zero()).unwrap(), 0);
        assert_eq!(f.trace(&f.generator()).unwrap(), 0);
        assert_eq!(f.trace(&f.one()).unwrap(), 1);
        assert!(matches!(
            f.trace_to_subfield(&f.one(), 3),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn primitive_elements() {
        let f7 = FiniteField::prime(7).unwrap();
        let g = f7.find_primitive();
        assert_eq!(g.element.coeffs(), &[3]);
        assert_eq!(g.order, 6);

        let f = gf8();
        let g = f.find_primitive();
        assert_eq!(g.element, f.generator());
        assert_eq!(f.multiplicative_order(&g.element).unwrap(), 7);

        let f4 = FiniteField::new(2, vec![1, 1, 1]).unwrap();
        let g = f4.find_primitive();
        assert_eq!(g.element, f4.generator());
        assert_eq!(g.order, 3);
    }

    #[test]
    fn discrete_logs() {
        let f = gf8();
        let g = f.find_primitive();
        assert_eq!(f.discrete_log(&g, &f.one()).unwrap(), 0);
        let a_plus_1 = f.element(vec![1, 1, 0]).unwrap();
        assert_eq!(f.discrete_log(&g, &a_plus_1).unwrap(), 3);
        assert!(matches!(f.discrete_log(&g, &f.zero()), Err(Error::Domain(_))));

        let f7 = FiniteField::prime(7).unwrap();
        let g = f7.find_primitive();
        assert_eq!(f7.discrete_log(&g, &f7.scalar(6)).unwrap(), 3);
    }

    #[test]
    fn first_irreducible_matches_known_modulus() {
        let f = FiniteField::first_irreducible(2, 3).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 0, 1]);
    }

    #[test]
    fn cap_enforced() {
        assert!(matches!(
            FiniteField::first_irreducible(2, 21),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn json_shape() {
        let f = gf8();
        assert_eq!(
            serde_json::to_string(&f).unwrap(),
            r#"{"p":2,"n":3,"modulus":[1,1,0,1]}"#
        );
        let back: FiniteField = serde_json::from_str(r#"{"p":3,"n":3,"modulus":[2,1,1,1]}"#).unwrap();
        assert_eq!(back, gf27());
    }
}
