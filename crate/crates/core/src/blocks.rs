//! Young subgroups, blocks, the J-action and the `ColoredDescents` algorithm.
//!
//! Indices `a_1, …, a_k` generate the Young subgroup `J` spanned by the adjacent
//! transpositions `(a_i, a_i + 1)` with `a_i < n`. Its orbits on `[n]` are the
//! blocks, maximal integer intervals. `J` acts on `S_{n,r}` by conjugation with
//! uncolored permutations, which relabels cycle entries and leaves colors in place.
//!
//! [`colored_descents`] picks, inside a `J`-orbit, the element with descents at
//! the prescribed indices. Ties in its replacement step are broken by counting:
//! an occurrence receives the `(d+1)`-th smallest label of its block, where `d`
//! is the number of occurrences whose following letter is strictly larger.
//! Occurrences followed by identical letters get the same label and are split
//! apart by later iterations.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::conjugacy::{conjugate_raw, cycle_type};
use crate::error::{param, Error, Result};
use crate::perm::{write_cycles, ColoredLetter, ColoredPermutation, CycleDecomposition, TotalOrder};
use crate::stats::descent_set;

/// Consecutive intervals partitioning `[n]`, stored as 1-based inclusive bounds.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Blocks {
    n: usize,
    bounds: Vec<(u32, u32)>,
}

impl Blocks {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bounds(&self) -> &[(u32, u32)] {
        &self.bounds
    }

    pub fn len(&self) -> usize {
        self.bounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bounds.is_empty()
    }

    pub fn sizes(&self) -> impl Iterator<Item = usize> + '_ {
        self.bounds.iter().map(|&(a, b)| (b - a + 1) as usize)
    }

    /// Index of the block containing `v`.
    pub fn block_of(&self, v: u32) -> usize {
        self.bounds.partition_point(|&(_, end)| end < v)
    }

    /// Smallest element of the block containing `v`.
    pub fn block_min(&self, v: u32) -> u32 {
        self.bounds[self.block_of(v)].0
    }

    /// Size of the block containing `n`.
    pub fn last_size(&self) -> usize {
        self.sizes().last().expect("n >= 1")
    }

    /// `|J| = ∏ |B_i|!`.
    pub fn young_order(&self) -> BigUint {
        let mut acc = BigUint::one();
        for s in self.sizes() {
            for k in 2..=s {
                acc *= BigUint::from(k);
            }
        }
        acc
    }

    /// True iff the 1-based permutation `pi` maps every block to itself.
    pub fn contains(&self, pi: &[u32]) -> bool {
        pi.len() == self.n && pi.iter().enumerate().all(|(i, &p)| p >= 1 && self.block_of(i as u32 + 1) == self.block_of(p))
    }

    /// Every element of `J`, as 1-based one-line permutations.
    pub fn young_subgroup(&self) -> Vec<Vec<u32>> {
        let mut out = vec![(1..=self.n as u32).collect::<Vec<_>>()];
        for &(a, b) in &self.bounds {
            if a == b {
                continue;
            }
            let local = crate::enumerate::permutations((b - a + 1) as usize);
            out = out
                .into_iter()
                .flat_map(|pi| {
                    local.iter().map(move |sigma| {
                        let mut p = pi.clone();
                        for (t, &s) in sigma.iter().enumerate() {
                            p[(a - 1) as usize + t] = a + s;
                        }
                        p
                    })
                })
                .collect();
        }
        out
    }
}

impl fmt::Display for Blocks {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, &(a, b)) in self.bounds.iter().enumerate() {
            if idx > 0 {
                f.write_str(",")?;
            }
            let members: Vec<String> = (a..=b).map(|v| v.to_string()).collect();
            write!(f, "{{{}}}", members.join(","))?;
        }
        Ok(())
    }
}

/// Blocks of `[n]` induced by `indices`. Index `n` joins nothing.
pub fn induced_blocks(indices: &[u32], n: usize) -> Result<Blocks> {
    if n == 0 {
        return param("n must be positive");
    }
    let mut joined = vec![false; n + 1];
    for &a in indices {
        if a == 0 || a as usize > n {
            return param(format!("index {} outside [1, {}]", a, n));
        }
        if (a as usize) < n {
            joined[a as usize] = true;
        }
    }
    let mut bounds = Vec::new();
    let mut start = 1u32;
    for v in 1..=n as u32 {
        if !joined[v as usize] {
            bounds.push((start, v));
            start = v + 1;
        }
    }
    Ok(Blocks { n, bounds })
}

/// Sorted distinct indices.
pub(crate) fn dedup(indices: &[u32]) -> Vec<u32> {
    indices.iter().copied().collect::<BTreeSet<_>>().into_iter().collect()
}

/// `(π,0) x (π,0)⁻¹` for `π` in the Young subgroup of `blocks`.
pub fn j_conjugate(pi: &[u32], x: &ColoredPermutation, blocks: &Blocks) -> Result<ColoredPermutation> {
    if blocks.n() != x.n() {
        return param("blocks and element have different n");
    }
    if !blocks.contains(pi) {
        return param(format!("{:?} does not preserve the blocks {}", pi, blocks));
    }
    let g = ColoredPermutation::uncolored(pi.to_vec(), x.r())?;
    Ok(conjugate_raw(x, &g))
}

/// The `J`-orbit of `x`, sorted.
pub fn j_orbit(x: &ColoredPermutation, blocks: &Blocks) -> Result<Vec<ColoredPermutation>> {
    let mut seen = HashSet::new();
    for pi in blocks.young_subgroup() {
        seen.insert(j_conjugate(&pi, x, blocks)?);
    }
    let mut out: Vec<_> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

/// Stages of a `ColoredDescents` run. Intermediate stages may repeat values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentTrace {
    pub blocks: Blocks,
    /// The block-minimum relabeling followed by one entry per loop iteration.
    pub stages: Vec<Vec<Vec<ColoredLetter>>>,
    pub result: ColoredPermutation,
}

impl DescentTrace {
    /// One cycle-notation line per stage.
    pub fn render(&self) -> Vec<String> {
        self.stages
            .iter()
            .map(|cycles| {
                let mut s = String::new();
                write_cycles(&mut s, cycles).expect("writing to a String");
                s
            })
            .collect()
    }
}

/// The element of the `J`-orbit of `x` with descents at `indices`.
///
/// Requires every cycle of `x` to be longer than `2k`, `k` the number of distinct
/// indices. Index `n` only affects the precondition: it induces no block, and
/// the result has descents at the indices below `n`.
pub fn colored_descents(x: &ColoredPermutation, indices: &[u32]) -> Result<ColoredPermutation> {
    Ok(colored_descents_traced(&x.to_cycles(), indices)?.result)
}

/// [`colored_descents`] on a given cycle layout, recording each stage.
///
/// The layout (cycle order and rotation) is kept throughout, so the rendered
/// stages follow the input as written.
pub fn colored_descents_traced(cycles: &CycleDecomposition, indices: &[u32]) -> Result<DescentTrace> {
    let n = cycles.n();
    let r = cycles.r();
    let indices = dedup(indices);
    let blocks = induced_blocks(&indices, n)?;
    let x = ColoredPermutation::from_cycles(cycles);
    cycle_type(&x).require_no_short_cycles(2 * indices.len() as u32)?;

    let mut cur: Vec<Vec<ColoredLetter>> = cycles
        .cycles()
        .iter()
        .map(|c| c.iter().map(|l| ColoredLetter::new(blocks.block_min(l.value), l.color)).collect())
        .collect();
    let mut stages = vec![cur.clone()];

    let count_of = |cur: &[Vec<ColoredLetter>]| {
        let mut counts = vec![0u32; n + 1];
        for l in cur.iter().flatten() {
            counts[l.value as usize] += 1;
        }
        counts
    };
    let key = |l: ColoredLetter| TotalOrder::Descent.key(l.value, l.color, n, r);

    loop {
        let counts = count_of(&cur);
        let singles = counts.iter().filter(|&&c| c == 1).count();
        if singles == n {
            break;
        }
        // The largest once-occurring value whose cyclic predecessor is repeated.
        let mut pick: Option<(u32, u32)> = None;
        for cyc in &cur {
            let len = cyc.len();
            for (t, l) in cyc.iter().enumerate() {
                let pred = cyc[(t + len - 1) % len].value;
                if counts[l.value as usize] == 1 && counts[pred as usize] > 1 && pick.is_none_or(|(j, _)| l.value > j) {
                    pick = Some((l.value, pred));
                }
            }
        }
        let Some((_, pred)) = pick else {
            return Err(Error::Internal("no once-occurring value follows a repeated one".into()));
        };
        let (lo, hi) = blocks.bounds()[blocks.block_of(pred)];

        // Occurrences in the block and their followers, read before relabeling.
        let mut occ: Vec<(usize, usize, u64)> = Vec::new();
        for (ci, cyc) in cur.iter().enumerate() {
            let len = cyc.len();
            for (t, l) in cyc.iter().enumerate() {
                if (lo..=hi).contains(&l.value) {
                    occ.push((ci, t, key(cyc[(t + 1) % len])));
                }
            }
        }
        let labels: Vec<u32> = occ
            .iter()
            .map(|&(_, _, k)| lo + occ.iter().filter(|&&(_, _, other)| other > k).count() as u32)
            .collect();
        for (&(ci, t, _), &label) in occ.iter().zip(&labels) {
            cur[ci][t].value = label;
        }

        let after = count_of(&cur).iter().filter(|&&c| c == 1).count();
        if after <= singles {
            return Err(Error::Internal("relabeling made no progress".into()));
        }
        stages.push(cur.clone());
    }

    let result = ColoredPermutation::from_cycles(&CycleDecomposition::new(r, cur)?);
    Ok(DescentTrace { blocks, stages, result })
}

/// Outcome of checking the orbit structure of one class for one index set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitCheck {
    pub indices: Vec<u32>,
    pub orbits: usize,
    #[serde(with = "crate::serde_num::biguint")]
    pub young_order: BigUint,
    /// Orbits whose size differs from `|J|`.
    pub wrong_size: usize,
    /// Orbits without exactly one element having the prescribed descents.
    pub not_unique: usize,
    /// Elements for which [`colored_descents`] missed that element.
    pub algorithm_misses: usize,
}

impl OrbitCheck {
    pub fn passed(&self) -> bool {
        self.wrong_size == 0 && self.not_unique == 0 && self.algorithm_misses == 0
    }
}

/// Splits a class into `J`-orbits by brute force and checks orbit sizes, the
/// unique element with descents at the indices below `n`, and that
/// [`colored_descents`] returns it from every starting point.
pub fn check_orbits(class: &[ColoredPermutation], indices: &[u32]) -> Result<OrbitCheck> {
    let Some(first) = class.first() else {
        return param("empty class");
    };
    let n = first.n();
    let indices = dedup(indices);
    let blocks = induced_blocks(&indices, n)?;
    let targets: Vec<u32> = indices.iter().copied().filter(|&a| (a as usize) < n).collect();
    let young = blocks.young_subgroup();
    let young_order = blocks.young_order();
    let expected = young.len();

    let mut done: HashSet<ColoredPermutation> = HashSet::new();
    let mut check = OrbitCheck { indices: indices.clone(), orbits: 0, young_order, wrong_size: 0, not_unique: 0, algorithm_misses: 0 };
    for x in class {
        if done.contains(x) {
            continue;
        }
        let orbit: HashSet<ColoredPermutation> = young.iter().map(|pi| j_conjugate(pi, x, &blocks)).collect::<Result<_>>()?;
        check.orbits += 1;
        if orbit.len() != expected {
            check.wrong_size += 1;
        }
        let hits: Vec<&ColoredPermutation> = orbit
            .iter()
            .filter(|y| {
                let d = descent_set(y, &TotalOrder::Descent);
                targets.iter().all(|&a| d.contains(a))
            })
            .collect();
        if hits.len() != 1 {
            check.not_unique += 1;
        }
        for y in &orbit {
            let out = colored_descents(y, &indices)?;
            if hits.len() != 1 || &out != hits[0] {
                check.algorithm_misses += 1;
            }
        }
        done.extend(orbit);
    }
    Ok(check)
}
