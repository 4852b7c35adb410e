use crate::diffset::DifferenceSet;
use crate::error::Result;
use crate::group::GroupElement;

/// Incidence matrix of the development: row `b`, column `a` is set iff
/// `a ∈ b + D` (rows and columns in canonical element order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Development {
    v: usize,
    k: u64,
    lambda: u64,
    cells: Vec<bool>,
}

impl Development {
    pub fn order(&self) -> usize {
        self.v
    }

    pub fn get(&self, block: usize, point: usize) -> bool {
        self.cells[block * self.v + point]
    }

    pub fn rows(&self) -> Vec<Vec<u8>> {
        self.cells
            .chunks(self.v)
            .map(|r| r.iter().map(|&b| b as u8).collect())
            .collect()
    }

    /// Point-by-block orientation: row `a`, column `b` set iff `a ∈ b + D`.
    pub fn transpose(&self) -> Development {
        let v = self.v;
        let mut cells = vec![false; v * v];
        for b in 0..v {
            for a in 0..v {
                cells[a * v + b] = self.cells[b * v + a];
            }
        }
        Development { cells, ..*self }
    }

    pub fn row_sums(&self) -> Vec<u64> {
        self.cells
            .chunks(self.v)
            .map(|r| r.iter().filter(|&&b| b).count() as u64)
            .collect()
    }

    pub fn column_sums(&self) -> Vec<u64> {
        (0..self.v)
            .map(|a| (0..self.v).filter(|&b| self.get(b, a)).count() as u64)
            .collect()
    }

    /// Common ones of rows `i` and `j`.
    pub fn row_intersection(&self, i: usize, j: usize) -> u64 {
        (0..self.v).filter(|&a| self.get(i, a) && self.get(j, a)).count() as u64
    }

    /// Rows and columns sum to `k`, distinct rows meet in `λ` points and
    /// distinct points lie in `λ` common blocks.
    pub fn is_symmetric_design(&self) -> bool {
        let k = self.k;
        if self.row_sums().iter().any(|&s| s != k) || self.column_sums().iter().any(|&s| s != k) {
            return false;
        }
        let t = self.transpose();
        for i in 0..self.v {
            for j in i + 1..self.v {
                if self.row_intersection(i, j) != self.lambda || t.row_intersection(i, j) != self.lambda {
                    return false;
                }
            }
        }
        true
    }
}

pub fn development(ds: &DifferenceSet) -> Result<Development> {
    let g = ds.group();
    g.check_cap()?;
    let v = g.order();
    let idx = ds.indices();
    let mut cells = vec![false; v * v];
    for b in 0..v {
        for &d in &idx {
            cells[b * v + g.add_index(b, d)] = true;
        }
    }
    let p = ds.params();
    Ok(Development {
        v,
        k: p.k,
        lambda: p.lambda,
        cells,
    })
}

/// `|D ∩ (t + D)|`.
pub fn block_intersection(ds: &DifferenceSet, t: &GroupElement) -> Result<u64> {
    let shifted = super::shift_set(ds, t)?;
    Ok(ds
        .indicator()
        .iter()
        .zip(shifted.indicator())
        .filter(|(&a, &b)| a && b)
        .count() as u64)
}
