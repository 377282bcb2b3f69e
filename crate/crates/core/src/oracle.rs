//! Brute-force vector partition counting by dynamic programming.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::IntVector;

/// Table of partition counts for every integer point of the box [0, corner].
#[derive(Clone, Debug)]
pub struct CountTable {
    corner: Vec<usize>,
    strides: Vec<usize>,
    counts: Vec<BigInt>,
}

impl CountTable {
    /// Fills the table one vector of Δ at a time: after processing α, entry γ
    /// holds Σ_t count_previous(γ - tα). Zero vectors of Δ are skipped, since
    /// they admit no finite count.
    pub fn new(delta: &[IntVector], corner: &[usize]) -> CountTable {
        let n = corner.len();
        let mut strides = vec![1usize; n];
        for i in 1..n {
            strides[i] = strides[i - 1] * (corner[i - 1] + 1);
        }
        let size = corner.iter().map(|c| c + 1).product::<usize>();
        let mut counts = vec![BigInt::zero(); size];
        counts[0] = BigInt::one();
        for alpha in delta {
            if alpha.iter().all(|x| x.is_zero()) {
                continue;
            }
            let a: Option<Vec<usize>> = alpha.iter().map(|x| x.to_usize()).collect();
            let Some(a) = a else { continue };
            if a.iter().zip(corner).any(|(x, c)| x > c) {
                continue;
            }
            let offset: usize = a.iter().zip(&strides).map(|(x, s)| x * s).sum();
            // Increasing flat index visits γ - α before γ, so each entry
            // accumulates all multiples of α.
            let mut point = vec![0usize; n];
            for idx in 0..size {
                if point.iter().zip(&a).all(|(p, x)| p >= x) {
                    let prev = counts[idx - offset].clone();
                    counts[idx] += prev;
                }
                for j in 0..n {
                    point[j] += 1;
                    if point[j] <= corner[j] {
                        break;
                    }
                    point[j] = 0;
                }
            }
        }
        CountTable { corner: corner.to_vec(), strides, counts }
    }

    /// Count at γ; zero outside the non-negative orthant, None beyond the box.
    pub fn get(&self, gamma: &[BigInt]) -> Option<BigInt> {
        let mut idx = 0;
        for ((g, c), s) in gamma.iter().zip(&self.corner).zip(&self.strides) {
            if g.is_negative() {
                return Some(BigInt::zero());
            }
            let g = g.to_usize()?;
            if g > *c {
                return None;
            }
            idx += g * s;
        }
        Some(self.counts[idx].clone())
    }
}

/// Number of ways to write γ as a non-negative integer combination of Δ.
pub fn count_partitions(delta: &[IntVector], gamma: &[BigInt]) -> BigInt {
    if gamma.iter().any(|g| g.is_negative()) {
        return BigInt::zero();
    }
    let corner: Vec<usize> = gamma.iter().map(|g| g.to_usize().expect("coordinate fits in memory")).collect();
    CountTable::new(delta, &corner).get(gamma).expect("γ lies in its own box")
}
