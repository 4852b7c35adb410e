use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A Boolean function on `Z_2^arity`, given by its truth table.
///
/// Entry `i` of the table is the value at the group element with canonical
/// index `i`, i.e. at `(x_1, ..., x_arity)` with `x_1` the most significant bit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BentFunctionSpec {
    arity: usize,
    truth_table: Vec<bool>,
}

impl BentFunctionSpec {
    pub fn new(arity: usize, truth_table: Vec<bool>) -> Result<Self> {
        if arity == 0 || arity > 20 {
            return Err(Error::Parameter(format!("arity {arity} outside 1..=20")));
        }
        if truth_table.len() != 1 << arity {
            return Err(Error::Parameter(format!(
                "truth table has {} entries, expected 2^{arity}",
                truth_table.len()
            )));
        }
        Ok(BentFunctionSpec { arity, truth_table })
    }

    /// Tabulate `f(x_1, ..., x_arity)`.
    pub fn from_fn(arity: usize, f: impl Fn(&[u8]) -> bool) -> Result<Self> {
        if arity == 0 || arity > 20 {
            return Err(Error::Parameter(format!("arity {arity} outside 1..=20")));
        }
        let mut bits = vec![0u8; arity];
        let table = (0..1usize << arity)
            .map(|i| {
                for (j, b) in bits.iter_mut().enumerate() {
                    *b = ((i >> (arity - 1 - j)) & 1) as u8;
                }
                f(&bits)
            })
            .collect();
        Self::new(arity, table)
    }

    /// `x_1 x_{n+1} ⊕ x_2 x_{n+2} ⊕ ... ⊕ x_n x_{2n}`, bent on `2n` variables.
    pub fn inner_product(n: usize) -> Result<Self> {
        Self::from_fn(2 * n, |x| (0..n).fold(0u8, |acc, i| acc ^ (x[i] & x[n + i])) == 1)
    }

    /// Parse a string of `0`/`1` characters.
    pub fn from_bits(bits: &str) -> Result<Self> {
        let table: Vec<bool> = bits
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parameter(format!("invalid truth-table symbol {other:?}"))),
            })
            .collect::<Result<_>>()?;
        if !table.len().is_power_of_two() {
            return Err(Error::Parameter("truth table length is not a power of two".into()));
        }
        Self::new(table.len().trailing_zeros() as usize, table)
    }

    pub fn to_bits(&self) -> String {
        self.truth_table.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn truth_table(&self) -> &[bool] {
        &self.truth_table
    }

    pub fn weight(&self) -> usize {
        self.truth_table.iter().filter(|&&b| b).count()
    }

    pub fn complement(&self) -> Self {
        BentFunctionSpec {
            arity: self.arity,
            truth_table: self.truth_table.iter().map(|&b| !b).collect(),
        }
    }

    /// `W(w) = Σ_x (-1)^{f(x) ⊕ <w,x>}` for every `w`, by the fast Walsh–Hadamard
    /// transform.
    pub fn walsh_spectrum(&self) -> Vec<i64> {
        let mut a: Vec<i64> = self.truth_table.iter().map(|&b| if b { -1 } else { 1 }).collect();
        let mut h = 1;
        while h < a.len() {
            for block in a.chunks_mut(2 * h) {
                let (lo, hi) = block.split_at_mut(h);
                for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                    let (s, d) = (*x + *y, *x - *y);
                    *x = s;
                    *y = d;
                }
            }
            h *= 2;
        }
        a
    }
}

/// True iff every Walsh coefficient has absolute value `2^{arity/2}`.
pub fn is_bent(spec: &BentFunctionSpec) -> Result<bool> {
    if spec.arity % 2 != 0 {
        return Err(Error::Parameter(format!(
            "bent functions need an even number of variables, got {}",
            spec.arity
        )));
    }
    let flat = 1i64 << (spec.arity / 2);
    Ok(spec.walsh_spectrum().iter().all(|w| w.abs() == flat))
}
