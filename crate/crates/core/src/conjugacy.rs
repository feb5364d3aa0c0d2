//! Cycle types, conjugacy classes and uniform class sampling.
//!
//! Two elements of `S_{n,r}` are conjugate exactly when they have the same
//! cycle type, an r-partition recording the cycle lengths for each cycle color.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::enumerate::{group_order_u128, next_coloring, GroupIter};
use crate::error::{param, Error, Result};
use crate::perm::{check_params, ColoredPermutation};

/// An r-tuple of integer partitions `(λ^0, …, λ^{r-1})`.
///
/// Parts are stored weakly decreasing. Serializes as an array of arrays indexed by color.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<u32>>", into = "Vec<Vec<u32>>")]
pub struct RPartition {
    parts: Vec<Vec<u32>>,
}

impl RPartition {
    /// Builds an r-partition with `r = parts.len()`, sorting each partition.
    pub fn new(mut parts: Vec<Vec<u32>>) -> Result<Self> {
        if parts.is_empty() {
            return param("an r-partition needs r >= 1");
        }
        if parts.iter().flatten().any(|&p| p == 0) {
            return param("partition parts must be positive");
        }
        for p in &mut parts {
            p.sort_unstable_by(|a, b| b.cmp(a));
        }
        let rp = RPartition { parts };
        check_params(rp.n(), rp.r())?;
        Ok(rp)
    }

    /// The class of the identity: `n` fixed points of color 0.
    pub fn identity(n: usize, r: u32) -> Result<Self> {
        let mut parts = vec![Vec::new(); r as usize];
        parts[0] = vec![1; n];
        RPartition::new(parts)
    }

    /// A single `n`-cycle of the given color.
    pub fn single_cycle(n: usize, r: u32, color: u32) -> Result<Self> {
        if color >= r {
            return param(format!("color {} outside Z_{}", color, r));
        }
        let mut parts = vec![Vec::new(); r as usize];
        parts[color as usize] = vec![n as u32];
        RPartition::new(parts)
    }

    pub fn parts(&self) -> &[Vec<u32>] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.parts.iter().flatten().map(|&p| p as usize).sum()
    }

    pub fn r(&self) -> u32 {
        self.parts.len() as u32
    }

    /// Length of the shortest cycle.
    pub fn min_part(&self) -> u32 {
        self.parts.iter().flatten().copied().min().expect("n >= 1")
    }

    /// True iff every cycle is longer than `m`.
    pub fn has_no_short_cycles(&self, m: u32) -> bool {
        self.min_part() > m
    }

    /// Errors with [`Error::ShortCycles`] unless every cycle is longer than `m`.
    pub fn require_no_short_cycles(&self, m: u32) -> Result<()> {
        if self.has_no_short_cycles(m) {
            Ok(())
        } else {
            Err(Error::ShortCycles { length: self.min_part(), bound: m })
        }
    }

    /// Multiplicity of each `(length, color)` pair.
    pub fn multiplicities(&self) -> BTreeMap<(u32, u32), u32> {
        let mut m = BTreeMap::new();
        for (color, part) in self.parts.iter().enumerate() {
            for &len in part {
                *m.entry((len, color as u32)).or_insert(0) += 1;
            }
        }
        m
    }

    /// Order of the centralizer: `∏ m_{ij}! (i·r)^{m_{ij}}`.
    pub fn centralizer_order(&self) -> BigUint {
        let r = self.r() as u64;
        let mut acc = BigUint::one();
        for (&(len, _), &m) in &self.multiplicities() {
            for k in 1..=m as u64 {
                acc *= BigUint::from(k * len as u64 * r);
            }
        }
        acc
    }

    /// `|C_λ| = r^n n! / centralizer order`.
    pub fn class_size(&self) -> BigUint {
        crate::enumerate::group_order(self.n(), self.r()) / self.centralizer_order()
    }

    /// Parses `"0:[4,1]; 1:[2]"`. Colors that are not listed get the empty partition.
    pub fn parse(text: &str, r: u32) -> Result<Self> {
        let bad = |why: &str| Error::Parse(format!("r-partition {:?}: {}", text, why));
        if r == 0 {
            return param("r must be positive");
        }
        let mut parts: Vec<Option<Vec<u32>>> = vec![None; r as usize];
        for chunk in text.split(';').map(str::trim).filter(|c| !c.is_empty()) {
            let (color, list) = chunk.split_once(':').ok_or_else(|| bad("expected color:[parts]"))?;
            let color: usize = color.trim().parse().map_err(|_| bad("bad color"))?;
            if color >= r as usize {
                return Err(bad("color out of range"));
            }
            if parts[color].is_some() {
                return Err(bad("color listed twice"));
            }
            let list = list.trim();
            let inner = list
                .strip_prefix('[')
                .and_then(|l| l.strip_suffix(']'))
                .ok_or_else(|| bad("parts must be in brackets"))?;
            let values = inner
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<u32>().map_err(|_| bad("bad part")))
                .collect::<Result<Vec<_>>>()?;
            parts[color] = Some(values);
        }
        RPartition::new(parts.into_iter().map(Option::unwrap_or_default).collect())
    }
}

impl fmt::Display for RPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (color, part) in self.parts.iter().enumerate() {
            if color > 0 {
                f.write_str("; ")?;
            }
            let list: Vec<String> = part.iter().map(u32::to_string).collect();
            write!(f, "{}:[{}]", color, list.join(","))?;
        }
        Ok(())
    }
}

impl TryFrom<Vec<Vec<u32>>> for RPartition {
    type Error = Error;

    fn try_from(parts: Vec<Vec<u32>>) -> Result<Self> {
        RPartition::new(parts)
    }
}

impl From<RPartition> for Vec<Vec<u32>> {
    fn from(p: RPartition) -> Self {
        p.parts
    }
}

/// The cycle type of `x`.
pub fn cycle_type(x: &ColoredPermutation) -> RPartition {
    let n = x.n();
    let r = x.r();
    let mut parts = vec![Vec::new(); r as usize];
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let (mut len, mut color, mut i) = (0u32, 0u32, start);
        while !seen[i] {
            seen[i] = true;
            len += 1;
            color = (color + x.tau[i]) % r;
            i = x.omega[i] as usize;
        }
        parts[color as usize].push(len);
    }
    for p in &mut parts {
        p.sort_unstable_by(|a, b| b.cmp(a));
    }
    RPartition { parts }
}

/// Partitions of `m`, largest parts first, in reverse lexicographic order.
pub fn integer_partitions(m: u32) -> Vec<Vec<u32>> {
    fn rec(m: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if m == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=max.min(m)).rev() {
            cur.push(p);
            rec(m - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, m, &mut Vec::new(), &mut out);
    out
}

/// All r-partitions of `n`, each once, in a fixed order.
pub fn r_partitions(n: usize, r: u32) -> Result<Vec<RPartition>> {
    check_params(n, r)?;
    fn rec(color: usize, r: usize, left: u32, cur: &mut Vec<Vec<u32>>, out: &mut Vec<RPartition>) {
        if color == r - 1 {
            for p in integer_partitions(left) {
                cur.push(p);
                out.push(RPartition { parts: cur.clone() });
                cur.pop();
            }
            return;
        }
        for w in (0..=left).rev() {
            for p in integer_partitions(w) {
                cur.push(p);
                rec(color + 1, r, left - w, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(0, r as usize, n as u32, &mut Vec::new(), &mut out);
    Ok(out)
}

/// A fixed element of `C_λ`: consecutive values form the cycles, listed color by
/// color, with the whole cycle color carried by the cycle's smallest value.
pub fn representative(lambda: &RPartition) -> ColoredPermutation {
    let n = lambda.n();
    let mut omega = vec![0u32; n];
    let mut tau = vec![0u32; n];
    let mut start = 0usize;
    for (color, part) in lambda.parts.iter().enumerate() {
        for &len in part {
            let len = len as usize;
            for t in 0..len {
                omega[start + t] = (start + (t + 1) % len) as u32;
            }
            tau[start] = color as u32;
            start += len;
        }
    }
    ColoredPermutation::from_raw(omega, tau, lambda.r())
}

/// A conjugacy class `C_λ` of `S_{n,r}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConjugacyClass {
    pub cycle_type: RPartition,
}

impl ConjugacyClass {
    pub fn new(cycle_type: RPartition) -> Self {
        ConjugacyClass { cycle_type }
    }

    pub fn n(&self) -> usize {
        self.cycle_type.n()
    }

    pub fn r(&self) -> u32 {
        self.cycle_type.r()
    }

    pub fn contains(&self, x: &ColoredPermutation) -> bool {
        x.n() == self.n() && x.r() == self.r() && cycle_type(x) == self.cycle_type
    }

    pub fn size(&self) -> BigUint {
        self.cycle_type.class_size()
    }

    pub fn iter(&self) -> ClassIter {
        enumerate_class(&self.cycle_type)
    }
}

/// Classes of groups at most this large are enumerated by filtering the whole group.
pub const FILTER_LIMIT: u128 = 1_000_000;

/// Streams every element of `C_λ` exactly once.
///
/// Small groups (`n <= 8` and order at most [`FILTER_LIMIT`]) are scanned and
/// filtered by cycle type; everything else goes through the constructive generator.
pub fn enumerate_class(lambda: &RPartition) -> ClassIter {
    let small = lambda.n() <= 8 && group_order_u128(lambda.n(), lambda.r()).is_some_and(|s| s <= FILTER_LIMIT);
    if small {
        enumerate_class_filtered(lambda)
    } else {
        enumerate_class_constructive(lambda)
    }
}

pub fn enumerate_class_filtered(lambda: &RPartition) -> ClassIter {
    let inner = GroupIter::new(lambda.n(), lambda.r()).expect("r-partition has valid parameters");
    ClassIter::Filtered { inner, lambda: lambda.clone() }
}

pub fn enumerate_class_constructive(lambda: &RPartition) -> ClassIter {
    ClassIter::Constructive(Box::new(Constructive::new(lambda)))
}

/// Iterator returned by [`enumerate_class`].
pub enum ClassIter {
    Filtered { inner: GroupIter, lambda: RPartition },
    Constructive(Box<Constructive>),
}

impl Iterator for ClassIter {
    type Item = ColoredPermutation;

    fn next(&mut self) -> Option<ColoredPermutation> {
        match self {
            ClassIter::Filtered { inner, lambda } => inner.by_ref().find(|x| cycle_type(x) == *lambda),
            ClassIter::Constructive(c) => c.next(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Choice {
    /// Start a cycle at the smallest unused value, using slot `usize`.
    Open(usize),
    /// Append a value to the open cycle.
    Add(u32),
}

#[derive(Debug, Clone)]
struct Slot {
    len: u32,
    color: u32,
    count: u32,
}

#[derive(Debug, Clone)]
struct OpenCycle {
    members: Vec<u32>,
    len: u32,
    color: u32,
    slot: usize,
}

/// Depth-first generator for `C_λ`.
///
/// A cycle structure is built one choice at a time: each cycle starts at the
/// smallest unused value, takes a distinct `(length, color)` slot and then an
/// ordered list of further members. Every completed structure is expanded over
/// the free colors, with the cycle's minimum absorbing the color sum.
pub struct Constructive {
    n: usize,
    r: u32,
    slots: Vec<Slot>,
    used: Vec<bool>,
    cycles: Vec<OpenCycle>,
    stack: Vec<(Vec<Choice>, usize)>,
    /// Indices (0-based values) whose colors are free, and their current colors.
    free_at: Vec<usize>,
    free: Vec<u32>,
    base: Option<ColoredPermutation>,
    started: bool,
}

impl Constructive {
    fn new(lambda: &RPartition) -> Self {
        let slots = lambda
            .multiplicities()
            .into_iter()
            .map(|((len, color), count)| Slot { len, color, count })
            .collect();
        Constructive {
            n: lambda.n(),
            r: lambda.r(),
            slots,
            used: vec![false; lambda.n()],
            cycles: Vec::new(),
            stack: Vec::new(),
            free_at: Vec::new(),
            free: Vec::new(),
            base: None,
            started: false,
        }
    }

    fn options(&self) -> Vec<Choice> {
        if let Some(c) = self.cycles.last() {
            if (c.members.len() as u32) < c.len {
                return (0..self.n as u32).filter(|&v| !self.used[v as usize]).map(Choice::Add).collect();
            }
        }
        if self.used.iter().all(|&u| u) {
            return Vec::new();
        }
        (0..self.slots.len()).filter(|&s| self.slots[s].count > 0).map(Choice::Open).collect()
    }

    fn apply(&mut self, c: Choice) {
        match c {
            Choice::Open(s) => {
                let min = self.used.iter().position(|&u| !u).expect("a value is unused");
                self.used[min] = true;
                self.slots[s].count -= 1;
                let Slot { len, color, .. } = self.slots[s];
                self.cycles.push(OpenCycle { members: vec![min as u32], len, color, slot: s });
            }
            Choice::Add(v) => {
                self.used[v as usize] = true;
                self.cycles.last_mut().expect("open cycle").members.push(v);
            }
        }
    }

    fn undo(&mut self, c: Choice) {
        match c {
            Choice::Open(_) => {
                let cyc = self.cycles.pop().expect("open cycle");
                self.used[cyc.members[0] as usize] = false;
                self.slots[cyc.slot].count += 1;
            }
            Choice::Add(v) => {
                self.used[v as usize] = false;
                self.cycles.last_mut().expect("open cycle").members.pop();
            }
        }
    }

    /// Descends from the current state to the first complete structure below it.
    fn descend(&mut self) {
        loop {
            let opts = self.options();
            let Some(&first) = opts.first() else { return };
            self.apply(first);
            self.stack.push((opts, 0));
        }
    }

    /// Moves to the next complete structure; false when exhausted.
    fn backtrack(&mut self) -> bool {
        while let Some((opts, idx)) = self.stack.pop() {
            self.undo(opts[idx]);
            if idx + 1 < opts.len() {
                self.apply(opts[idx + 1]);
                self.stack.push((opts, idx + 1));
                self.descend();
                return true;
            }
        }
        false
    }

    fn load_structure(&mut self) {
        let mut omega = vec![0u32; self.n];
        self.free_at.clear();
        for c in &self.cycles {
            let l = c.members.len();
            for t in 0..l {
                omega[c.members[t] as usize] = c.members[(t + 1) % l];
            }
            self.free_at.extend(c.members[1..].iter().map(|&v| v as usize));
        }
        self.free = vec![0; self.free_at.len()];
        self.base = Some(ColoredPermutation::from_raw(omega, vec![0; self.n], self.r));
    }

    fn current(&self) -> ColoredPermutation {
        let mut x = self.base.clone().expect("structure loaded");
        for (&i, &c) in self.free_at.iter().zip(&self.free) {
            x.tau[i] = c;
        }
        for c in &self.cycles {
            let rest: u32 = c.members[1..].iter().map(|&v| x.tau[v as usize]).sum::<u32>() % self.r;
            x.tau[c.members[0] as usize] = (c.color + self.r - rest) % self.r;
        }
        x
    }
}

impl Iterator for Constructive {
    type Item = ColoredPermutation;

    fn next(&mut self) -> Option<ColoredPermutation> {
        if !self.started {
            self.started = true;
            self.descend();
            self.load_structure();
            return Some(self.current());
        }
        self.base.as_ref()?;
        if next_coloring(&mut self.free, self.r) {
            return Some(self.current());
        }
        if self.backtrack() {
            self.load_structure();
            Some(self.current())
        } else {
            self.base = None;
            None
        }
    }
}

/// A uniformly random element of `S_{n,r}`.
pub fn random_element<R: Rng + ?Sized>(rng: &mut R, n: usize, r: u32) -> ColoredPermutation {
    let mut omega: Vec<u32> = (0..n as u32).collect();
    omega.shuffle(rng);
    let tau = (0..n).map(|_| rng.gen_range(0..r)).collect();
    ColoredPermutation::from_raw(omega, tau, r)
}

/// Draws uniformly from `C_λ` as `g · x₀ · g⁻¹` with `g` uniform on `S_{n,r}`.
#[derive(Debug, Clone)]
pub struct ClassSampler {
    x0: ColoredPermutation,
    rng: ChaCha8Rng,
}

impl ClassSampler {
    /// A sampler on the ChaCha stream `stream` of `seed`.
    pub fn new(lambda: &RPartition, seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        ClassSampler { x0: representative(lambda), rng }
    }

    pub fn sample(&mut self) -> ColoredPermutation {
        let n = self.x0.n();
        let g = random_element(&mut self.rng, n, self.x0.r());
        conjugate_raw(&self.x0, &g)
    }
}

/// `g x g⁻¹`: maps `g(i)^{τ_g(i)} ↦ g(ω(i))^{τ_g(ω(i)) + τ(i) - τ_g(i)}`.
pub(crate) fn conjugate_raw(x: &ColoredPermutation, g: &ColoredPermutation) -> ColoredPermutation {
    let n = x.n();
    let r = x.r();
    let mut omega = vec![0u32; n];
    let mut tau = vec![0u32; n];
    for i in 0..n {
        let gi = g.omega[i] as usize;
        let wi = x.omega[i] as usize;
        omega[gi] = g.omega[wi];
        tau[gi] = (g.tau[wi] + x.tau[i] + r - g.tau[i]) % r;
    }
    ColoredPermutation::from_raw(omega, tau, r)
}

/// One uniform draw from `C_λ` using stream 0 of `seed`.
pub fn sample_class(lambda: &RPartition, seed: u64) -> ColoredPermutation {
    ClassSampler::new(lambda, seed, 0).sample()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{group_order, GroupIter};
    use crate::perm::CycleDecomposition;
    use std::collections::{HashMap, HashSet};

    fn example() -> ColoredPermutation {
        ColoredPermutation::new(vec![3, 8, 5, 6, 2, 1, 4, 7], vec![1, 0, 0, 1, 2, 2, 0, 1], 3).unwrap()
    }

    /// Conjugation orbits of `S_{n,r}`, by brute force.
    fn orbits(n: usize, r: u32) -> Vec<HashSet<ColoredPermutation>> {
        let all: Vec<_> = GroupIter::new(n, r).unwrap().collect();
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for x in &all {
            if seen.contains(x) {
                continue;
            }
            let orbit: HashSet<_> = all.iter().map(|g| x.conjugate_by(g).unwrap()).collect();
            seen.extend(orbit.iter().cloned());
            out.push(orbit);
        }
        out
    }

    #[test]
    fn cycle_types_from_examples() {
        assert_eq!(cycle_type(&example()), RPartition::parse("1:[8]", 3).unwrap());
        let big = CycleDecomposition::parse("(1^0 3^2 7^1 6^0)(2^1)(4^2 5^0)(8^0)(9^1)", 3).unwrap();
        let x = ColoredPermutation::from_cycles(&big);
        assert_eq!(cycle_type(&x), RPartition::new(vec![vec![1, 4], vec![1, 1], vec![2]]).unwrap());
        assert_eq!(cycle_type(&ColoredPermutation::identity(4, 3).unwrap()), RPartition::identity(4, 3).unwrap());
    }

    #[test]
    fn no_short_cycles() {
        assert!(RPartition::single_cycle(7, 2, 1).unwrap().has_no_short_cycles(6));
        let p = RPartition::new(vec![vec![1, 4], vec![1, 1], vec![2]]).unwrap();
        assert!(!p.has_no_short_cycles(1));
        assert_eq!(p.require_no_short_cycles(1), Err(Error::ShortCycles { length: 1, bound: 1 }));
        assert!(RPartition::parse("0:[]; 1:[8]; 2:[]", 3).unwrap().has_no_short_cycles(4));
    }

    #[test]
    fn text_and_json_forms() {
        let p = RPartition::parse("0:[]; 1:[8]; 2:[]", 3).unwrap();
        assert_eq!(p.to_string(), "0:[]; 1:[8]; 2:[]");
        assert_eq!(RPartition::parse(&p.to_string(), 3).unwrap(), p);
        let q = RPartition::parse("0:[1, 4]", 2).unwrap();
        assert_eq!(q.to_string(), "0:[4,1]; 1:[]");
        assert!(RPartition::parse("2:[1]", 2).is_err());
        assert!(RPartition::parse("0:[0]", 2).is_err());
        assert!(RPartition::parse("0:[1]; 0:[1]", 2).is_err());
        assert!(RPartition::parse("", 2).is_err());
    }

    #[test]
    fn r_partition_counts_match_orbits() {
        for (n, r) in [(1, 1), (2, 2), (3, 2), (2, 3), (3, 3), (4, 2), (4, 3)] {
            let parts = r_partitions(n, r).unwrap();
            let distinct: HashSet<_> = parts.iter().collect();
            assert_eq!(distinct.len(), parts.len());
            let orbs = orbits(n, r);
            assert_eq!(parts.len(), orbs.len(), "n={} r={}", n, r);
            let mut total = BigUint::from(0u32);
            for orbit in &orbs {
                let x = orbit.iter().next().unwrap();
                let lambda = cycle_type(x);
                assert!(orbit.iter().all(|y| cycle_type(y) == lambda));
                assert_eq!(lambda.class_size(), BigUint::from(orbit.len()));
                total += lambda.class_size();
            }
            assert_eq!(total, group_order(n, r));
        }
        assert_eq!(r_partitions(2, 2).unwrap().len(), 5);
        assert_eq!(r_partitions(1, 1).unwrap(), vec![RPartition::new(vec![vec![1]]).unwrap()]);
    }

    #[test]
    fn enumeration_paths_agree() {
        for (n, r) in [(1, 2), (2, 2), (3, 2), (3, 3), (4, 2), (4, 3), (5, 2)] {
            let mut by_type: HashMap<RPartition, HashSet<ColoredPermutation>> = HashMap::new();
            for x in GroupIter::new(n, r).unwrap() {
                by_type.entry(cycle_type(&x)).or_default().insert(x);
            }
            for lambda in r_partitions(n, r).unwrap() {
                let expected = &by_type[&lambda];
                for iter in [enumerate_class_filtered(&lambda), enumerate_class_constructive(&lambda)] {
                    let got: Vec<_> = iter.collect();
                    assert_eq!(got.len(), expected.len(), "{}", lambda);
                    assert_eq!(got.iter().cloned().collect::<HashSet<_>>(), *expected, "{}", lambda);
                }
            }
        }
    }

    #[test]
    fn constructive_counts_beyond_filter_range() {
        let lambda = RPartition::new(vec![vec![5, 4], vec![]]).unwrap();
        let mut count = 0u64;
        let mut seen = HashSet::new();
        for x in enumerate_class(&lambda) {
            assert_eq!(cycle_type(&x), lambda);
            seen.insert(x);
            count += 1;
        }
        assert_eq!(BigUint::from(count), lambda.class_size());
        assert_eq!(seen.len() as u64, count);
    }

    #[test]
    fn small_class_examples() {
        let id = RPartition::identity(3, 2).unwrap();
        assert_eq!(enumerate_class(&id).collect::<Vec<_>>(), vec![ColoredPermutation::identity(3, 2).unwrap()]);
        assert_eq!(id.class_size(), BigUint::one());
        let five = RPartition::single_cycle(5, 2, 0).unwrap();
        assert_eq!(BigUint::from(enumerate_class(&five).count()), five.class_size());
        let two = RPartition::single_cycle(2, 2, 1).unwrap();
        let members: HashSet<_> = enumerate_class(&two).collect();
        let brute: HashSet<_> = GroupIter::new(2, 2).unwrap().filter(|x| cycle_type(x) == two).collect();
        assert_eq!(members, brute);
    }

    #[test]
    fn representative_has_its_type() {
        for n in 1..=6 {
            for r in 1..=3 {
                for lambda in r_partitions(n, r).unwrap() {
                    assert_eq!(cycle_type(&representative(&lambda)), lambda);
                }
            }
        }
    }

    #[test]
    fn conjugate_raw_matches_group_product() {
        let all: Vec<_> = GroupIter::new(3, 3).unwrap().collect();
        for x in all.iter().step_by(7) {
            for g in &all {
                let direct = conjugate_raw(x, g);
                assert_eq!(direct, x.conjugate_by(g).unwrap());
                assert_eq!(cycle_type(&direct), cycle_type(x));
            }
        }
    }

    #[test]
    fn samples_stay_in_class_and_are_reproducible() {
        let lambda = RPartition::new(vec![vec![3], vec![2, 1]]).unwrap();
        let mut a = ClassSampler::new(&lambda, 7, 3);
        let mut b = ClassSampler::new(&lambda, 7, 3);
        for _ in 0..200 {
            let x = a.sample();
            assert_eq!(cycle_type(&x), lambda);
            assert_eq!(x, b.sample());
        }
        let id = RPartition::identity(4, 3).unwrap();
        assert!(sample_class(&id, 1).is_identity());
    }

    #[test]
    fn sampling_is_uniform() {
        // A 3-cycle of color 1 in S_{3,3}: 18 elements.
        let lambda = RPartition::single_cycle(3, 3, 1).unwrap();
        let size = 18usize;
        assert_eq!(lambda.class_size(), BigUint::from(size));
        let members: Vec<_> = enumerate_class(&lambda).collect();
        let index: HashMap<_, _> = members.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
        let draws = 100_000usize;
        let mut counts = vec![0usize; size];
        let mut sampler = ClassSampler::new(&lambda, 2024, 0);
        for _ in 0..draws {
            counts[index[&sampler.sample()]] += 1;
        }
        let expected = draws as f64 / size as f64;
        let sd = (expected * (1.0 - 1.0 / size as f64)).sqrt();
        for &c in &counts {
            assert!((c as f64 - expected).abs() < 5.0 * sd, "{:?}", counts);
        }
        let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        // 17 degrees of freedom: the 0.999 quantile is about 40.8.
        assert!(chi2 < 40.8, "chi2 = {}", chi2);
    }
}
