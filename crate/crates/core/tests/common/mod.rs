//! Instance catalogue and brute-force oracles shared by the integration tests.
//! Nothing here calls the library's transforms: the oracles rebuild characters
//! from coordinates and apply dense matrices.

#![allow(dead_code)]

use diffshift::diffset::{construct_hadamard, construct_paley, construct_singer, BentFunctionSpec};
use diffshift::field::is_prime;
use diffshift::{Complex64, DifferenceSet, FiniteField};

pub struct Named {
    pub label: String,
    pub set: DifferenceSet,
}

fn prime_powers_3_mod_4(max: u64) -> Vec<(u64, usize)> {
    let mut out = Vec::new();
    for p in 3..=max {
        if !is_prime(p) {
            continue;
        }
        let mut q = p;
        let mut n = 1;
        while q <= max {
            if q % 4 == 3 {
                out.push((p, n));
            }
            q *= p;
            n += 1;
        }
    }
    out.sort_by_key(|&(p, n)| p.pow(n as u32));
    out
}

/// Paley, Hadamard and Singer instances with `v <= max_v`.
pub fn family_instances(max_v: u64) -> Vec<Named> {
    let mut out = Vec::new();
    // q = 3 gives k = 1.
    for (p, n) in prime_powers_3_mod_4(max_v).into_iter().filter(|&(p, n)| p.pow(n as u32) > 3) {
        let field = FiniteField::first_irreducible(p, n).unwrap();
        out.push(Named {
            label: format!("paley q={}", p.pow(n as u32)),
            set: construct_paley(&field).unwrap(),
        });
    }
    let mut n = 2;
    while 1u64 << (2 * n) <= max_v {
        out.push(Named {
            label: format!("hadamard n={n}"),
            set: construct_hadamard(&BentFunctionSpec::inner_product(n).unwrap()).unwrap(),
        });
        n += 1;
    }
    let mm = BentFunctionSpec::from_fn(4, |x| (x[0] & x[1]) ^ (x[2] & x[3]) ^ x[0] == 1).unwrap();
    out.push(Named {
        label: "hadamard x1x2+x3x4+x1".into(),
        set: construct_hadamard(&mm).unwrap(),
    });
    for q in 2..max_v {
        if !is_prime(q) {
            continue;
        }
        let mut d = 2u32;
        loop {
            let v = (q.pow(d + 1) - 1) / (q - 1);
            if v > max_v {
                break;
            }
            out.push(Named {
                label: format!("singer q={q} d={d}"),
                set: construct_singer(q, d).unwrap(),
            });
            d += 1;
        }
        if q * q + q + 1 > max_v {
            break;
        }
    }
    out
}

/// Mixed-radix decode, last coordinate fastest.
pub fn coords(moduli: &[usize], mut index: usize) -> Vec<usize> {
    let mut c = vec![0; moduli.len()];
    for i in (0..moduli.len()).rev() {
        c[i] = index % moduli[i];
        index /= moduli[i];
    }
    c
}

/// Dense `v × v` Fourier matrix `F[χ][a] = χ(a)/√v`.
pub struct DenseFourier {
    pub v: usize,
    pub m: Vec<Complex64>,
}

impl DenseFourier {
    pub fn new(moduli: &[usize]) -> Self {
        let v: usize = moduli.iter().product();
        let cs: Vec<Vec<usize>> = (0..v).map(|i| coords(moduli, i)).collect();
        let mut m = Vec::with_capacity(v * v);
        let norm = 1.0 / (v as f64).sqrt();
        for chi in &cs {
            for a in &cs {
                let turns: f64 = chi
                    .iter()
                    .zip(a)
                    .zip(moduli)
                    .map(|((&j, &x), &n)| ((j * x) % n) as f64 / n as f64)
                    .sum();
                m.push(Complex64::from_polar(norm, std::f64::consts::TAU * turns));
            }
        }
        DenseFourier { v, m }
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..self.v)
            .map(|r| (0..self.v).map(|c| self.m[r * self.v + c] * x[c]).sum())
            .collect()
    }

    pub fn apply_adjoint(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..self.v)
            .map(|r| (0..self.v).map(|c| self.m[c * self.v + r].conj() * x[c]).sum())
            .collect()
    }

    /// `χ(S)` for every character: `√v · F 1_S`.
    pub fn character_sums(&self, indicator: &[bool]) -> Vec<Complex64> {
        let x: Vec<Complex64> = indicator.iter().map(|&b| Complex64::new(b as u8 as f64, 0.0)).collect();
        let s = (self.v as f64).sqrt();
        self.apply(&x).into_iter().map(|z| z * s).collect()
    }
}

/// Final amplitudes of the quantum algorithm, by dense matrices only.
pub fn dense_algorithm1(ds: &DifferenceSet, shifted: &[bool]) -> Vec<Complex64> {
    let f = DenseFourier::new(ds.group().moduli());
    let v = f.v;
    let p = ds.params();
    let r = ((p.k - p.lambda) as f64).sqrt();
    let sums = f.character_sums(ds.indicator());
    let u = 1.0 / (v as f64).sqrt();
    let x: Vec<Complex64> = shifted
        .iter()
        .map(|&b| Complex64::new(if b { -u } else { u }, 0.0))
        .collect();
    let mut y = f.apply(&x);
    for (c, z) in y.iter_mut().enumerate().skip(1) {
        *z *= sums[c].conj() / r;
    }
    f.apply_adjoint(&y)
}

/// `s + D` as an indicator, computed coordinate-wise.
pub fn shifted_indicator(ds: &DifferenceSet, s: usize) -> Vec<bool> {
    let moduli = ds.group().moduli();
    let v = ds.group().order();
    let sc = coords(moduli, s);
    let encode = |c: &[usize]| c.iter().zip(moduli).fold(0, |acc, (&x, &n)| acc * n + x);
    let mut out = vec![false; v];
    for (i, &m) in ds.indicator().iter().enumerate() {
        if m {
            let c: Vec<usize> = coords(moduli, i)
                .iter()
                .zip(&sc)
                .zip(moduli)
                .map(|((&a, &b), &n)| (a + b) % n)
                .collect();
            out[encode(&c)] = true;
        }
    }
    out
}
