//! Brute-force oracles written straight from the definitions, sharing no code
//! with the library beyond constructing elements.

#![allow(dead_code)]

use colperm::ColoredPermutation;

/// `(ω, τ)` with `ω` 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Raw {
    pub omega: Vec<u32>,
    pub tau: Vec<u32>,
    pub r: u32,
}

impl Raw {
    pub fn n(&self) -> usize {
        self.omega.len()
    }

    pub fn to_perm(&self) -> ColoredPermutation {
        ColoredPermutation::new(self.omega.clone(), self.tau.clone(), self.r).unwrap()
    }

    pub fn from_perm(x: &ColoredPermutation) -> Raw {
        let n = x.n();
        Raw {
            omega: (1..=n).map(|i| x.omega(i)).collect(),
            tau: (1..=n).map(|i| x.tau(i)).collect(),
            r: x.r(),
        }
    }
}

fn perms(n: usize) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in perms(n - 1) {
        for slot in 0..=p.len() {
            let mut q = p.clone();
            q.insert(slot, n as u32);
            out.push(q);
        }
    }
    out
}

/// Every element of `S_{n,r}`, in no particular order.
pub fn group(n: usize, r: u32) -> Vec<Raw> {
    let colorings = (r as usize).pow(n as u32);
    let mut out = Vec::new();
    for omega in perms(n) {
        for code in 0..colorings {
            let mut code = code;
            let tau = (0..n)
                .map(|_| {
                    let c = (code % r as usize) as u32;
                    code /= r as usize;
                    c
                })
                .collect();
            out.push(Raw { omega: omega.clone(), tau, r });
        }
    }
    out
}

/// Descent positions: `i` is a descent when `(τ(i), ω(i)) > (τ(i+1), ω(i+1))`
/// lexicographically, with `(0, n + 1)` standing after position `n`.
pub fn descents(x: &Raw) -> Vec<u32> {
    let n = x.n();
    (1..=n)
        .filter(|&i| {
            let here = (x.tau[i - 1], x.omega[i - 1]);
            let next = if i < n { (x.tau[i], x.omega[i]) } else { (0, n as u32 + 1) };
            here > next
        })
        .map(|i| i as u32)
        .collect()
}

pub fn des(x: &Raw) -> i64 {
    descents(x).len() as i64
}

pub fn maj(x: &Raw) -> i64 {
    descents(x).iter().filter(|&&i| (i as usize) < x.n()).map(|&i| i as i64).sum()
}

pub fn col(x: &Raw) -> i64 {
    x.tau.iter().map(|&c| c as i64).sum()
}

pub fn fmaj(x: &Raw) -> i64 {
    x.r as i64 * maj(x) + col(x)
}

/// Cycle lengths grouped by cycle color, each list sorted descending.
pub fn cycle_type(x: &Raw) -> Vec<Vec<u32>> {
    let n = x.n();
    let mut seen = vec![false; n];
    let mut out = vec![Vec::new(); x.r as usize];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let (mut len, mut color, mut i) = (0u32, 0u32, start);
        while !seen[i] {
            seen[i] = true;
            len += 1;
            color = (color + x.tau[i]) % x.r;
            i = x.omega[i] as usize - 1;
        }
        out[color as usize].push(len);
    }
    for parts in &mut out {
        parts.sort_unstable_by(|a, b| b.cmp(a));
    }
    out
}

/// All subsets of `1..=n` with at most `k` elements, in increasing order.
pub fn subsets(n: u32, k: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for v in 1..=n {
        let grown: Vec<Vec<u32>> = out.iter().filter(|s| s.len() < k).map(|s| [s.as_slice(), &[v]].concat()).collect();
        out.extend(grown);
    }
    out.sort();
    out
}

/// Uniform-ish elements with `n ≤ max_n` and `r ≤ max_r`.
pub fn arb_element(max_n: usize, max_r: u32) -> impl proptest::strategy::Strategy<Value = ColoredPermutation> {
    use proptest::prelude::*;
    (1..=max_n, 1..=max_r).prop_flat_map(|(n, r)| {
        let omega = Just((1..=n as u32).collect::<Vec<u32>>()).prop_shuffle();
        let tau = proptest::collection::vec(0..r, n);
        (omega, tau).prop_map(move |(o, t)| ColoredPermutation::new(o, t, r).unwrap())
    })
}

/// Two elements of the same group.
pub fn arb_pair(max_n: usize, max_r: u32) -> impl proptest::strategy::Strategy<Value = (ColoredPermutation, ColoredPermutation)> {
    use proptest::prelude::*;
    (1..=max_n, 1..=max_r).prop_flat_map(|(n, r)| {
        let one = move || {
            (Just((1..=n as u32).collect::<Vec<u32>>()).prop_shuffle(), proptest::collection::vec(0..r, n))
                .prop_map(move |(o, t)| ColoredPermutation::new(o, t, r).unwrap())
        };
        (one(), one())
    })
}
