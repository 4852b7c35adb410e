//! Finite abelian groups presented as products of cyclic groups, their
//! elements and their characters.
//!
//! Elements are enumerated in mixed-radix order with the last coordinate
//! varying fastest, so index 0 is always the identity. Characters reuse the
//! same coordinates: the character with index `(j_1, .., j_r)` maps `a` to
//! `Π exp(2πi j_i a_i / n_i)`.

use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{roots_of_unity, Real};

/// Default upper bound on the order of groups (and fields) that operations
/// are allowed to enumerate.
pub const DEFAULT_CAP: usize = 1 << 20;

/// JSON form of a group: `{"moduli": [n_1, ..., n_k]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub moduli: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "GroupSpec", into = "GroupSpec")]
pub struct AbelianGroup {
    moduli: Vec<usize>,
    strides: Vec<usize>,
    order: usize,
    cap: usize,
}

impl PartialEq for AbelianGroup {
    fn eq(&self, other: &Self) -> bool {
        self.moduli == other.moduli
    }
}

impl Eq for AbelianGroup {}

impl TryFrom<GroupSpec> for AbelianGroup {
    type Error = Error;

    fn try_from(spec: GroupSpec) -> Result<Self> {
        AbelianGroup::new(spec.moduli)
    }
}

impl From<AbelianGroup> for GroupSpec {
    fn from(g: AbelianGroup) -> Self {
        GroupSpec { moduli: g.moduli }
    }
}

/// An element of an [`AbelianGroup`], one reduced coordinate per cyclic factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement {
    coords: Vec<usize>,
}

impl GroupElement {
    pub fn coords(&self) -> &[usize] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<usize> {
        self.coords
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.len() == 1 {
            return write!(f, "{}", self.coords[0]);
        }
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// An irreducible character, identified by its index coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Character {
    index: Vec<usize>,
}

impl Character {
    pub fn index(&self) -> &[usize] {
        &self.index
    }

    pub fn is_trivial(&self) -> bool {
        self.index.iter().all(|&j| j == 0)
    }
}

impl AbelianGroup {
    pub fn new(moduli: Vec<usize>) -> Result<Self> {
        if moduli.is_empty() {
            return Err(Error::Parameter("a group needs at least one cyclic factor".into()));
        }
        if let Some(bad) = moduli.iter().find(|&&n| n < 2) {
            return Err(Error::Parameter(format!("cyclic factor of order {bad} (must be >= 2)")));
        }
        let mut order: usize = 1;
        for &n in &moduli {
            order = order
                .checked_mul(n)
                .ok_or_else(|| Error::Parameter("group order overflows usize".into()))?;
        }
        let mut strides = vec![1; moduli.len()];
        for i in (0..moduli.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * moduli[i + 1];
        }
        Ok(AbelianGroup {
            moduli,
            strides,
            order,
            cap: DEFAULT_CAP,
        })
    }

    /// The cyclic group `Z_n`.
    pub fn cyclic(n: usize) -> Result<Self> {
        Self::new(vec![n])
    }

    /// `Z_p^rank`.
    pub fn elementary(p: usize, rank: usize) -> Result<Self> {
        Self::new(vec![p; rank])
    }

    /// Replace the enumeration cap.
    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn moduli(&self) -> &[usize] {
        &self.moduli
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn spec(&self) -> GroupSpec {
        GroupSpec {
            moduli: self.moduli.clone(),
        }
    }

    /// Fails with a resource error when the order is above the cap.
    pub fn check_cap(&self) -> Result<()> {
        if self.order > self.cap {
            return Err(Error::Resource {
                size: self.order as u128,
                cap: self.cap,
            });
        }
        Ok(())
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            coords: vec![0; self.rank()],
        }
    }

    /// Build an element from already-reduced coordinates.
    pub fn element(&self, coords: Vec<usize>) -> Result<GroupElement> {
        self.check_len(coords.len())?;
        for (i, (&c, &n)) in coords.iter().zip(&self.moduli).enumerate() {
            if c >= n {
                return Err(Error::Structural(format!(
                    "coordinate {i} is {c}, outside [0, {n})"
                )));
            }
        }
        Ok(GroupElement { coords })
    }

    /// Build an element from arbitrary integers, reducing each coordinate.
    pub fn element_reduced(&self, coords: &[i64]) -> Result<GroupElement> {
        self.check_len(coords.len())?;
        let coords = coords
            .iter()
            .zip(&self.moduli)
            .map(|(&c, &n)| c.rem_euclid(n as i64) as usize)
            .collect();
        Ok(GroupElement { coords })
    }

    pub fn contains(&self, a: &GroupElement) -> bool {
        a.coords.len() == self.rank() && a.coords.iter().zip(&self.moduli).all(|(&c, &n)| c < n)
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check_member(a)?;
        self.check_member(b)?;
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .zip(&self.moduli)
            .map(|((&x, &y), &n)| (x + y) % n)
            .collect();
        Ok(GroupElement { coords })
    }

    pub fn negate(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check_member(a)?;
        let coords = a
            .coords
            .iter()
            .zip(&self.moduli)
            .map(|(&x, &n)| (n - x) % n)
            .collect();
        Ok(GroupElement { coords })
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.add(a, &self.negate(b)?)
    }

    /// Position of `a` in the canonical enumeration.
    pub fn index_of(&self, a: &GroupElement) -> usize {
        debug_assert!(self.contains(a));
        a.coords.iter().zip(&self.strides).map(|(&c, &s)| c * s).sum()
    }

    pub fn element_at(&self, index: usize) -> GroupElement {
        debug_assert!(index < self.order);
        let coords = self
            .moduli
            .iter()
            .zip(&self.strides)
            .map(|(&n, &s)| (index / s) % n)
            .collect();
        GroupElement { coords }
    }

    /// Group law on canonical indices.
    pub fn add_index(&self, i: usize, j: usize) -> usize {
        if self.rank() == 1 {
            return (i + j) % self.order;
        }
        let mut out = 0;
        for (&n, &s) in self.moduli.iter().zip(&self.strides) {
            out += (((i / s) % n + (j / s) % n) % n) * s;
        }
        out
    }

    pub fn neg_index(&self, i: usize) -> usize {
        if self.rank() == 1 {
            return (self.order - i) % self.order;
        }
        let mut out = 0;
        for (&n, &s) in self.moduli.iter().zip(&self.strides) {
            out += ((n - (i / s) % n) % n) * s;
        }
        out
    }

    pub fn sub_index(&self, i: usize, j: usize) -> usize {
        self.add_index(i, self.neg_index(j))
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> Result<Vec<GroupElement>> {
        self.check_cap()?;
        Ok((0..self.order).map(|i| self.element_at(i)).collect())
    }

    pub fn character(&self, index: Vec<usize>) -> Result<Character> {
        let e = self.element(index)?;
        Ok(Character { index: e.coords })
    }

    pub fn character_at(&self, index: usize) -> Character {
        Character {
            index: self.element_at(index).coords,
        }
    }

    pub fn character_index_of(&self, chi: &Character) -> usize {
        self.index_of(&GroupElement {
            coords: chi.index.clone(),
        })
    }

    pub fn trivial_character(&self) -> Character {
        Character {
            index: vec![0; self.rank()],
        }
    }

    /// All characters, ordered like the elements; index 0 is the trivial character.
    pub fn characters(&self) -> Result<Vec<Character>> {
        self.check_cap()?;
        Ok((0..self.order).map(|i| self.character_at(i)).collect())
    }

    /// `χ(a) = Π_i exp(2πi · index_i · a_i / n_i)`.
    pub fn character_eval<T: Real>(&self, chi: &Character, a: &GroupElement) -> Result<Complex<T>> {
        self.check_len(chi.index.len())?;
        self.check_member(a)?;
        // Sum per-factor fractions of a full turn, evaluate once.
        let mut turns = 0.0f64;
        for ((&j, &x), &n) in chi.index.iter().zip(&a.coords).zip(&self.moduli) {
            turns += ((j * x) % n) as f64 / n as f64;
        }
        let (s, c) = (std::f64::consts::TAU * turns.fract()).sin_cos();
        Ok(Complex::new(T::from_f64_lossy(c), T::from_f64_lossy(s)))
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.rank() {
            return Err(Error::Structural(format!(
                "expected {} coordinates, got {len}",
                self.rank()
            )));
        }
        Ok(())
    }

    fn check_member(&self, a: &GroupElement) -> Result<()> {
        if !self.contains(a) {
            return Err(Error::Structural(format!(
                "{a:?} is not an element of the group with moduli {:?}",
                self.moduli
            )));
        }
        Ok(())
    }
}

/// Per-factor roots of unity for fast repeated character evaluation on
/// canonical indices.
#[derive(Clone, Debug)]
pub struct CharacterTable<T> {
    group: AbelianGroup,
    roots: Vec<Vec<Complex<T>>>,
}

impl<T: Real> CharacterTable<T> {
    pub fn new(group: &AbelianGroup) -> Self {
        let roots = group.moduli.iter().map(|&n| roots_of_unity(n as u64)).collect();
        CharacterTable {
            group: group.clone(),
            roots,
        }
    }

    /// `χ_chi(a)` for canonical indices `chi` and `a`.
    pub fn eval(&self, chi: usize, a: usize) -> Complex<T> {
        let g = &self.group;
        if g.rank() == 1 {
            return self.roots[0][(chi * a) % g.order];
        }
        let mut acc = Complex::new(T::one(), T::zero());
        for (f, (&n, &s)) in g.moduli.iter().zip(&g.strides).enumerate() {
            let t = ((chi / s) % n) * ((a / s) % n) % n;
            if t != 0 {
                acc = acc * self.roots[f][t];
            }
        }
        acc
    }
}
