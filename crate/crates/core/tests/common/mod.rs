//! Independent oracles shared by the integration tests. None of these call
//! into the library's evolution code.

#![allow(dead_code)]

use std::collections::BTreeMap;

use qwalk_core::C64;

pub type Mat2 = [[C64; 2]; 2];

/// Coin-0-moves-left path sum: enumerate all 2ⁿ coin sequences from
/// `|start_coin⟩ ⊗ |0⟩`, multiplying the coin matrix elements along each path.
/// Returns the position distribution as a map.
pub fn path_sum_distribution(coin: &Mat2, start: [C64; 2], n: usize) -> BTreeMap<i64, f64> {
    let mut amps: BTreeMap<(i64, usize), C64> = BTreeMap::new();
    for (c0, a0) in start.iter().enumerate() {
        if a0.norm() == 0.0 {
            continue;
        }
        for path in 0u64..(1u64 << n) {
            let mut amp = *a0;
            let mut prev = c0;
            let mut x = 0i64;
            for k in 0..n {
                let c = ((path >> k) & 1) as usize;
                amp *= coin[c][prev];
                x += if c == 0 { -1 } else { 1 };
                prev = c;
            }
            *amps.entry((x, prev)).or_insert(C64::new(0.0, 0.0)) += amp;
        }
    }
    let mut dist = BTreeMap::new();
    for ((x, _), a) in amps {
        *dist.entry(x).or_insert(0.0) += a.norm_sqr();
    }
    dist
}

/// Walk with a projective coin measurement after every shift: a classical
/// mixture of pure branches, each tracked as a sparse map.
pub fn measured_coin_walk(coin: &Mat2, start: [C64; 2], n: usize) -> BTreeMap<i64, f64> {
    type Branch = BTreeMap<(i64, usize), C64>;
    let mut init: Branch = BTreeMap::new();
    init.insert((0, 0), start[0]);
    init.insert((0, 1), start[1]);
    let mut branches: Vec<(f64, Branch)> = vec![(1.0, init)];
    for _ in 0..n {
        let mut next = Vec::new();
        for (w, b) in branches {
            let mut moved: Branch = BTreeMap::new();
            for (&(x, c), &a) in &b {
                for out in 0..2 {
                    let dx = if out == 0 { -1 } else { 1 };
                    *moved.entry((x + dx, out)).or_insert(C64::new(0.0, 0.0)) += coin[out][c] * a;
                }
            }
            for outcome in 0..2 {
                let part: Branch = moved.iter().filter(|((_, c), _)| *c == outcome).map(|(k, v)| (*k, *v)).collect();
                let p: f64 = part.values().map(|a| a.norm_sqr()).sum();
                if p > 0.0 {
                    let s = 1.0 / p.sqrt();
                    next.push((w * p, part.into_iter().map(|(k, v)| (k, v * s)).collect()));
                }
            }
        }
        branches = next;
    }
    let mut dist = BTreeMap::new();
    for (w, b) in branches {
        for ((x, _), a) in b {
            *dist.entry(x).or_insert(0.0) += w * a.norm_sqr();
        }
    }
    dist
}

/// Deterministic xorshift stream for generating test inputs.
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        Self(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1)
    }

    pub fn next_f64(&mut self) -> f64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn signed(&mut self) -> f64 {
        2.0 * self.next_f64() - 1.0
    }
}

/// Dense `exp(−iHt)` by scaling and squaring a Taylor series.
pub fn expm_taylor(h: &[[C64; 3]; 3], t: f64) -> [[C64; 3]; 3] {
    let norm: f64 = h.iter().flatten().map(|z| z.norm()).sum::<f64>() * t.abs();
    let squarings = (norm.max(1.0).log2().ceil() as u32) + 4;
    let scale = t / f64::from(1u32 << squarings);
    let a: [[C64; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| h[i][j] * C64::new(0.0, -scale)));
    let mul = |x: &[[C64; 3]; 3], y: &[[C64; 3]; 3]| -> [[C64; 3]; 3] {
        std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|k| x[i][k] * y[k][j]).sum()))
    };
    let mut result: [[C64; 3]; 3] =
        std::array::from_fn(|i| std::array::from_fn(|j| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0)));
    let mut term = result;
    for k in 1..30 {
        term = mul(&term, &a);
        term.iter_mut().flatten().for_each(|z| *z /= k as f64);
        for i in 0..3 {
            for j in 0..3 {
                result[i][j] += term[i][j];
            }
        }
    }
    for _ in 0..squarings {
        result = mul(&result, &result);
    }
    result
}
