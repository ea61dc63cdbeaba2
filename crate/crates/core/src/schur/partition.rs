//! Integer partitions, Young-diagram statistics and the particle/partition bijection.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::hypergeo::{factorial, falling_factorial, int, Rational};

/// Weakly decreasing positive parts; the empty partition has no parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<u64>,
}

impl Partition {
    pub fn new(mut parts: Vec<u64>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidParameter(format!("parts {parts:?} are not weakly decreasing")));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidParameter(format!("interior zero part in {parts:?}")));
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition::default()
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    /// `λ_i` with 1-based `i`, zero past the last part.
    pub fn part(&self, i: usize) -> u64 {
        if i == 0 {
            return 0;
        }
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    pub fn size(&self) -> u64 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.parts.first().copied().unwrap_or(0);
        let parts = (0..width).map(|j| self.parts.iter().filter(|&&p| p > j).count() as u64).collect();
        Partition { parts }
    }

    /// Hook length of every cell, row by row.
    pub fn hook_lengths(&self) -> Vec<Vec<u64>> {
        let conj = self.conjugate();
        self.parts
            .iter()
            .enumerate()
            .map(|(i, &row)| (0..row).map(|j| row - j + conj.parts[j as usize] - i as u64 - 1).collect())
            .collect()
    }

    fn hook_product(&self) -> BigInt {
        self.hook_lengths().into_iter().flatten().map(BigInt::from).product()
    }

    /// Number of standard Young tableaux, `|λ|! / Π hooks`.
    pub fn f_lambda(&self) -> BigInt {
        factorial(self.size()) / self.hook_product()
    }

    /// `s_λ(1^N) = Π (N + j - i)/h(i,j)`; zero once the length exceeds `N`.
    pub fn schur_at_ones(&self, n: u64) -> BigInt {
        if self.len() as u64 > n {
            return BigInt::zero();
        }
        let mut num = BigInt::one();
        for (i, &row) in self.parts.iter().enumerate() {
            for j in 0..row {
                num *= n + j - i as u64;
            }
        }
        num / self.hook_product()
    }

    /// `(1/N) Σ_i (λ_i + N - i)^{\underline{k}}`
    pub fn f_nk(&self, n: u64, k: u64) -> Result<Rational> {
        if n == 0 || self.len() as u64 > n {
            return Err(Error::InvalidParameter(format!("partition {self} has more than N = {n} parts")));
        }
        let total: Rational = (1..=n as usize)
            .map(|i| falling_factorial(&int((self.part(i) + n - i as u64) as i64), k))
            .sum();
        Ok(total / int(n as i64))
    }

    /// `x_i = λ_i + N - i`, strictly decreasing.
    pub fn to_config(&self, n: u64) -> Result<Vec<u64>> {
        if self.len() as u64 > n {
            return Err(Error::InvalidParameter(format!("partition {self} has more than N = {n} parts")));
        }
        Ok((1..=n as usize).map(|i| self.part(i) + n - i as u64).collect())
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "()");
        }
        let s: Vec<String> = self.parts.iter().map(u64::to_string).collect();
        write!(f, "({})", s.join(","))
    }
}

/// `λ_i = x_i + i - N` for a strictly decreasing configuration of `N` points.
pub fn config_to_partition(x: &[u64]) -> Result<Partition> {
    if x.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::InvalidParameter(format!("configuration {x:?} is not strictly decreasing")));
    }
    let n = x.len() as u64;
    Partition::new(x.iter().enumerate().map(|(i, &xi)| xi + i as u64 + 1 - n).collect())
}

/// Partitions of `n` with at most `max_parts` parts, in decreasing lexicographic order.
pub fn partitions_of(n: u64, max_parts: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fill(n, n, max_parts, &mut current, &mut out);
    out
}

fn fill(rest: u64, bound: u64, slots: usize, current: &mut Vec<u64>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition { parts: current.clone() });
        return;
    }
    if slots == 0 {
        return;
    }
    for p in (1..=bound.min(rest)).rev() {
        // the remaining slots must be able to hold what is left
        if p * slots as u64 >= rest {
            current.push(p);
            fill(rest - p, p, slots - 1, current, out);
            current.pop();
        }
    }
}

/// Every partition with `|λ| ≤ max_size` and at most `max_parts` parts, by size, then decreasing lexicographic.
pub fn partitions_iter(max_size: u64, max_parts: usize) -> impl Iterator<Item = Partition> {
    (0..=max_size).flat_map(move |n| partitions_of(n, max_parts))
}
