//! Exhaustive enumeration of `S_{n,r}`.
//!
//! Elements are visited in lexicographic order of `ω` (outer) and `τ` (inner).
//! Parallel folds shard on `ω`, i.e. on the value part of the one-line notation,
//! and merge shard results with a caller-supplied associative combiner.

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::perm::{check_params, ColoredPermutation};

/// Default cap on the number of elements visited by an enumeration.
pub const DEFAULT_CAP: u128 = 10_000_000;

/// `r^n · n!`.
pub fn group_order(n: usize, r: u32) -> BigUint {
    let mut acc = BigUint::from(1u32);
    for i in 1..=n {
        acc *= BigUint::from(i as u64 * r as u64);
    }
    acc
}

/// `r^n · n!` if it fits in a `u128`.
pub fn group_order_u128(n: usize, r: u32) -> Option<u128> {
    (1..=n).try_fold(1u128, |acc, i| acc.checked_mul(i as u128 * r as u128))
}

pub fn check_cap(size: Option<u128>, cap: u128) -> Result<u128> {
    match size {
        Some(s) if s <= cap => Ok(s),
        Some(s) => Err(Error::CapExceeded { size: s, cap }),
        None => Err(Error::CapExceeded { size: u128::MAX, cap }),
    }
}

/// Rearranges `v` into its lexicographic successor; false at the last permutation.
pub fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// All permutations of `0..n` (0-based one-line), lexicographic.
pub fn permutations(n: usize) -> Vec<Vec<u32>> {
    let mut cur: Vec<u32> = (0..n as u32).collect();
    let mut out = vec![cur.clone()];
    while next_permutation(&mut cur) {
        out.push(cur.clone());
    }
    out
}

/// Advances a base-`r` odometer (last digit fastest); false after wrapping to zero.
#[inline]
pub(crate) fn next_coloring(tau: &mut [u32], r: u32) -> bool {
    for t in tau.iter_mut().rev() {
        *t += 1;
        if *t < r {
            return true;
        }
        *t = 0;
    }
    false
}

/// Sequential iterator over `S_{n,r}`.
pub struct GroupIter {
    current: Option<ColoredPermutation>,
}

impl GroupIter {
    pub fn new(n: usize, r: u32) -> Result<Self> {
        Ok(GroupIter { current: Some(ColoredPermutation::identity(n, r)?) })
    }
}

impl Iterator for GroupIter {
    type Item = ColoredPermutation;

    fn next(&mut self) -> Option<ColoredPermutation> {
        let out = self.current.clone()?;
        let cur = self.current.as_mut().expect("checked above");
        let r = cur.r();
        if !next_coloring(&mut cur.tau, r) && !next_permutation(&mut cur.omega) {
            self.current = None;
        }
        Some(out)
    }
}

/// Visits every coloring of a fixed `ω`, reusing one buffer.
#[inline]
pub(crate) fn for_each_coloring(omega: &[u32], r: u32, mut f: impl FnMut(&ColoredPermutation)) {
    let mut x = ColoredPermutation::from_raw(omega.to_vec(), vec![0; omega.len()], r);
    loop {
        f(&x);
        if !next_coloring(&mut x.tau, r) {
            break;
        }
    }
}

/// Parallel fold over all of `S_{n,r}`, sharded by `ω`.
///
/// `merge` must be associative and commutative for the result to be independent
/// of scheduling (exact sums are).
pub fn fold_group<T, I, F, M>(n: usize, r: u32, cap: u128, init: I, fold: F, merge: M) -> Result<T>
where
    T: Send,
    I: Fn() -> T + Sync + Send,
    F: Fn(&mut T, &ColoredPermutation) + Sync + Send,
    M: Fn(T, T) -> T + Sync + Send,
{
    check_params(n, r)?;
    check_cap(group_order_u128(n, r), cap)?;
    let perms = permutations(n);
    Ok(perms
        .par_iter()
        .fold(&init, |mut acc, omega| {
            for_each_coloring(omega, r, |x| fold(&mut acc, x));
            acc
        })
        .reduce(&init, &merge))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn iter_counts_and_uniqueness() {
        for (n, r) in [(1, 1), (1, 3), (2, 2), (3, 2), (3, 3)] {
            let all: Vec<_> = GroupIter::new(n, r).unwrap().collect();
            assert_eq!(all.len() as u128, group_order_u128(n, r).unwrap());
            let set: HashSet<_> = all.iter().cloned().collect();
            assert_eq!(set.len(), all.len());
            let mut sorted = all.clone();
            sorted.sort_by(|a, b| (a.omega_one_line(), a.coloring()).cmp(&(b.omega_one_line(), b.coloring())));
            assert_eq!(sorted, all);
        }
    }

    #[test]
    fn fold_matches_sequential_count() {
        let total = fold_group(4, 3, DEFAULT_CAP, || 0u64, |acc, _| *acc += 1, |a, b| a + b).unwrap();
        assert_eq!(total, 1944);
        assert!(matches!(
            fold_group(4, 3, 100, || 0u64, |acc, _| *acc += 1, |a, b| a + b),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn orders() {
        assert_eq!(group_order(8, 3), BigUint::from(40320u64 * 6561));
        assert_eq!(group_order_u128(7, 3), Some(11_022_480));
        assert_eq!(permutations(4).len(), 24);
    }
}
