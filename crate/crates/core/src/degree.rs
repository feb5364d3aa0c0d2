//! Partial colored permutations and the degree of a statistic.
//!
//! A partial colored permutation `{i_1 -> j_1:c_1, …}` is satisfied by `(ω,τ)`
//! when `ω(i_h) = j_h` and `τ(i_h) = c_h` for every pair. A statistic has degree
//! at most `m` when it is a rational combination of indicators of such
//! constraints of size at most `m`. That is checked exactly, by Gaussian
//! elimination on indicator vectors indexed by the lexicographic enumeration of
//! `S_{n,r}` (`ω` outer, `τ` inner).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::conjugacy::RPartition;
use crate::enumerate::{check_cap, group_order_u128, permutations, GroupIter};
use crate::error::{param, Error, Result};
use crate::perm::{check_params, ColoredPermutation, TotalOrder};
use crate::stats::Statistic;

/// Largest group on which span membership is attempted.
pub const SPAN_CAP: u128 = 4096;

/// A set of constraints `i^0 ↦ j^c` with distinct sources and distinct targets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PartialColoredPermutation {
    /// `(source, target, color)`, sorted by source.
    pairs: Vec<(u32, u32, u32)>,
}

impl PartialColoredPermutation {
    pub fn new(mut pairs: Vec<(u32, u32, u32)>) -> Result<Self> {
        pairs.sort_unstable();
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return param(format!("source {} appears twice", w[0].0));
            }
        }
        let mut targets: Vec<u32> = pairs.iter().map(|p| p.1).collect();
        targets.sort_unstable();
        if let Some(w) = targets.windows(2).find(|w| w[0] == w[1]) {
            return param(format!("target {} appears twice", w[0]));
        }
        if pairs.iter().any(|p| p.0 == 0 || p.1 == 0) {
            return param("positions are 1-based");
        }
        Ok(PartialColoredPermutation { pairs })
    }

    pub fn empty() -> Self {
        PartialColoredPermutation { pairs: Vec::new() }
    }

    pub fn pairs(&self) -> &[(u32, u32, u32)] {
        &self.pairs
    }

    pub fn size(&self) -> usize {
        self.pairs.len()
    }

    /// Checks positions against `[n]` and colors against `Z_r`.
    pub fn check(&self, n: usize, r: u32) -> Result<()> {
        check_params(n, r)?;
        for &(i, j, c) in &self.pairs {
            if i as usize > n || j as usize > n {
                return param(format!("pair {}->{} outside [1, {}]", i, j, n));
            }
            if c >= r {
                return param(format!("color {} outside Z_{}", c, r));
            }
        }
        Ok(())
    }

    #[inline]
    pub fn satisfies(&self, x: &ColoredPermutation) -> bool {
        self.pairs.iter().all(|&(i, j, c)| x.omega[i as usize - 1] + 1 == j && x.tau[i as usize - 1] == c)
    }

    /// True when some of the arcs `i -> j` close up into a cycle.
    pub fn has_closed_cycle(&self) -> bool {
        let next: BTreeMap<u32, u32> = self.pairs.iter().map(|&(i, j, _)| (i, j)).collect();
        next.keys().any(|&start| {
            let mut cur = start;
            for _ in 0..next.len() {
                match next.get(&cur) {
                    Some(&j) if j == start => return true,
                    Some(&j) => cur = j,
                    None => return false,
                }
            }
            false
        })
    }
}

impl fmt::Display for PartialColoredPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (t, &(i, j, c)) in self.pairs.iter().enumerate() {
            if t > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}->{}:{}", i, j, c)?;
        }
        f.write_str("}")
    }
}

impl FromStr for PartialColoredPermutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("partial colored permutation {:?}", s));
        let inner = s.trim().strip_prefix('{').and_then(|t| t.strip_suffix('}')).ok_or_else(bad)?;
        let mut pairs = Vec::new();
        for item in inner.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (i, rest) = item.split_once("->").ok_or_else(bad)?;
            let (j, c) = rest.split_once(':').ok_or_else(bad)?;
            let num = |t: &str| t.trim().parse::<u32>().map_err(|_| bad());
            pairs.push((num(i)?, num(j)?, num(c)?));
        }
        PartialColoredPermutation::new(pairs)
    }
}

impl Serialize for PartialColoredPermutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PartialColoredPermutation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// `Pr_{C_λ}[(ω,τ) satisfies p]` from the closed form `1/((n-1)⋯(n-m) r^m)`.
///
/// Needs every cycle longer than `m`. Arcs that close a cycle of length at most
/// `m` cannot occur in such a class, so those constraints have probability 0.
pub fn satisfaction_prob_class(p: &PartialColoredPermutation, lambda: &RPartition) -> Result<BigRational> {
    let (n, r) = (lambda.n(), lambda.r());
    p.check(n, r)?;
    let m = p.size();
    if !lambda.has_no_short_cycles(m as u32) {
        return Err(Error::FormulaNotApplicable(format!(
            "class {} has a cycle of length {}, closed form needs all cycles longer than {}",
            lambda,
            lambda.min_part(),
            m
        )));
    }
    if p.has_closed_cycle() {
        return Ok(BigRational::zero());
    }
    let falling: BigInt = (1..=m).map(|t| BigInt::from(n - t)).product();
    Ok(BigRational::new(BigInt::one(), falling * BigInt::from(r).pow(m as u32)))
}

/// A statistic written as `Σ coef · I_p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub statistic: Statistic,
    pub n: usize,
    pub r: u32,
    /// Sorted by constraint.
    pub terms: Vec<(i64, PartialColoredPermutation)>,
}

impl Decomposition {
    pub fn eval(&self, x: &ColoredPermutation) -> i64 {
        self.terms.iter().filter(|(_, p)| p.satisfies(x)).map(|(c, _)| c).sum()
    }

    pub fn max_size(&self) -> usize {
        self.terms.iter().map(|(_, p)| p.size()).max().unwrap_or(0)
    }
}

/// Size-2 expansions of des, maj and fmaj, and the size-1 expansion of col.
///
/// A descent at `i < n` is a pair `i ↦ j_2^{c_2}`, `i+1 ↦ j_1^{c_1}` with
/// `j_1^{c_1} < j_2^{c_2}`; a descent at `n` is `n ↦ j^c` with `c > 0`.
/// Letter pairs sharing a value are skipped, as are zero coefficients.
pub fn decompose_statistic(stat: Statistic, n: usize, r: u32) -> Result<Decomposition> {
    check_params(n, r)?;
    let order = TotalOrder::Descent;
    let mut letters: Vec<(u32, u32)> = (1..=n as u32).flat_map(|v| (0..r).map(move |c| (v, c))).collect();
    letters.sort_by_key(|&(v, c)| order.key(v, c, n, r));
    let descent_pairs = |i: u32, coef: i64| {
        let mut out = Vec::new();
        for (lo, &(j1, c1)) in letters.iter().enumerate() {
            for &(j2, c2) in &letters[lo + 1..] {
                if j1 != j2 {
                    let p = PartialColoredPermutation::new(vec![(i, j2, c2), (i + 1, j1, c1)]).expect("distinct");
                    out.push((coef, p));
                }
            }
        }
        out
    };
    let single = |i: u32, coef: &dyn Fn(u32) -> i64| {
        let mut out = Vec::new();
        for j in 1..=n as u32 {
            for c in 0..r {
                if coef(c) != 0 {
                    out.push((coef(c), PartialColoredPermutation::new(vec![(i, j, c)]).expect("single pair")));
                }
            }
        }
        out
    };
    let n32 = n as u32;
    let mut terms: Vec<(i64, PartialColoredPermutation)> = match stat {
        Statistic::Des => (1..n32)
            .flat_map(|i| descent_pairs(i, 1))
            .chain(single(n32, &|c| (c > 0) as i64))
            .collect(),
        Statistic::Maj => (1..n32).flat_map(|i| descent_pairs(i, i as i64)).collect(),
        Statistic::Fmaj => (1..n32)
            .flat_map(|i| descent_pairs(i, r as i64 * i as i64))
            .chain((1..=n32).flat_map(|i| single(i, &|c| c as i64)))
            .collect(),
        Statistic::Col => (1..=n32).flat_map(|i| single(i, &|c| c as i64)).collect(),
        other => return param(format!("no stored decomposition for {}", other)),
    };
    terms.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
    Ok(Decomposition { statistic: stat, n, r, terms })
}

/// Position of `x` in the lexicographic enumeration of `S_{n,r}`.
pub fn element_index(x: &ColoredPermutation) -> usize {
    let n = x.n();
    let r = x.r() as usize;
    // Lehmer code rank of ω.
    let mut rank = 0usize;
    for i in 0..n {
        let smaller = x.omega[i + 1..].iter().filter(|&&v| v < x.omega[i]).count();
        rank = rank * (n - i) + smaller;
    }
    let mut color = 0usize;
    for &t in &x.tau {
        color = color * r + t as usize;
    }
    rank * r.pow(n as u32) + color
}

/// Values of `f` on `S_{n,r}` in enumeration order.
pub fn statistic_vector(n: usize, r: u32, f: impl Fn(&ColoredPermutation) -> i64) -> Result<Vec<i64>> {
    check_cap(group_order_u128(n, r), SPAN_CAP)?;
    Ok(GroupIter::new(n, r)?.map(|x| f(&x)).collect())
}

/// Support of `I_p` in enumeration order, sorted.
pub fn indicator_support(p: &PartialColoredPermutation, n: usize, r: u32) -> Result<Vec<usize>> {
    p.check(n, r)?;
    check_cap(group_order_u128(n, r), SPAN_CAP)?;
    let mut out = Vec::new();
    for x in GroupIter::new(n, r)? {
        if p.satisfies(&x) {
            out.push(element_index(&x));
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// All constraints of exactly size `m`, sorted.
pub fn partial_permutations(n: usize, r: u32, m: usize) -> Vec<PartialColoredPermutation> {
    let mut out = Vec::new();
    let mut sources = Vec::new();
    fn choose(start: u32, n: u32, m: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for v in start..=n {
            cur.push(v);
            choose(v + 1, n, m, cur, out);
            cur.pop();
        }
    }
    choose(1, n as u32, m, &mut Vec::new(), &mut sources);
    // Ordered distinct targets: injective maps from m slots into [n].
    let mut targets = Vec::new();
    fn arrange(n: u32, m: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for v in 1..=n {
            if !cur.contains(&v) {
                cur.push(v);
                arrange(n, m, cur, out);
                cur.pop();
            }
        }
    }
    arrange(n as u32, m, &mut Vec::new(), &mut targets);
    let colorings = (r as usize).pow(m as u32);
    for src in &sources {
        for tgt in &targets {
            for code in 0..colorings {
                let mut code = code;
                let mut pairs = Vec::with_capacity(m);
                for t in (0..m).rev() {
                    pairs.push((src[t], tgt[t], (code % r as usize) as u32));
                    code /= r as usize;
                }
                out.push(PartialColoredPermutation::new(pairs).expect("distinct sources and targets"));
            }
        }
    }
    out.sort();
    out
}

type SparseRow = Vec<(usize, BigRational)>;

/// Exact row-echelon basis of the span of indicator vectors of size-`m` constraints.
///
/// Rows are kept in semi-echelon form: each stored row has a distinct leading
/// column, normalized to 1, which is used as the pivot.
pub struct SpanBasis {
    n: usize,
    r: u32,
    m: usize,
    generators: usize,
    pivots: BTreeMap<usize, SparseRow>,
}

impl SpanBasis {
    /// Builds the basis for constraints of size `min(m, n)`. Every indicator of
    /// smaller size is a sum of indicators of that size, so the span is the
    /// same as for all sizes up to `m`.
    pub fn new(n: usize, r: u32, m: usize) -> Result<SpanBasis> {
        check_params(n, r)?;
        check_cap(group_order_u128(n, r), SPAN_CAP)?;
        let size = m.min(n);
        let constraints = partial_permutations(n, r, size);
        let perms = permutations(n);
        let dim_colors = (r as usize).pow(n as u32);
        // Assemble indicator supports in parallel, one constraint per task.
        let supports: Vec<Vec<usize>> = constraints
            .par_iter()
            .map(|p| {
                let mut support = Vec::new();
                for (rank, omega) in perms.iter().enumerate() {
                    if p.pairs.iter().any(|&(i, j, _)| omega[i as usize - 1] + 1 != j) {
                        continue;
                    }
                    crate::enumerate::for_each_coloring(omega, r, |x| {
                        if p.satisfies(x) {
                            let mut color = 0usize;
                            for &t in &x.tau {
                                color = color * r as usize + t as usize;
                            }
                            support.push(rank * dim_colors + color);
                        }
                    });
                }
                support
            })
            .collect();
        let mut basis = SpanBasis { n, r, m, generators: supports.len(), pivots: BTreeMap::new() };
        for support in supports {
            let row: BTreeMap<usize, BigRational> = support.into_iter().map(|c| (c, BigRational::one())).collect();
            basis.insert(row);
        }
        Ok(basis)
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn dimension(&self) -> usize {
        group_order_u128(self.n, self.r).expect("checked at construction") as usize
    }

    pub fn m(&self) -> usize {
        self.m
    }

    fn reduce(&self, mut v: BTreeMap<usize, BigRational>) -> BTreeMap<usize, BigRational> {
        let mut cursor = 0usize;
        loop {
            let next = v.range(cursor..).find(|(c, _)| self.pivots.contains_key(c)).map(|(c, x)| (*c, x.clone()));
            let Some((col, factor)) = next else { break };
            for (c, x) in &self.pivots[&col] {
                let entry = v.entry(*c).or_insert_with(BigRational::zero);
                *entry -= &factor * x;
                if entry.is_zero() {
                    v.remove(c);
                }
            }
            cursor = col + 1;
        }
        v
    }

    fn insert(&mut self, v: BTreeMap<usize, BigRational>) -> bool {
        let v = self.reduce(v);
        let Some((&lead, lead_val)) = v.iter().next() else { return false };
        let inv = lead_val.recip();
        let row: SparseRow = v.into_iter().map(|(c, x)| (c, x * &inv)).collect();
        self.pivots.insert(lead, row);
        true
    }

    /// True iff `values` (dense, enumeration order) lies in the span.
    pub fn contains(&self, values: &[i64]) -> bool {
        assert_eq!(values.len(), self.dimension(), "vector length must match the group order");
        let v: BTreeMap<usize, BigRational> = values
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(c, &x)| (c, BigRational::from(BigInt::from(x))))
            .collect();
        self.reduce(v).is_empty()
    }
}

/// Outcome of a span-membership degree check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeCheck {
    pub target: String,
    pub n: usize,
    pub r: u32,
    pub m: usize,
    pub generators: usize,
    pub rank: usize,
    pub dimension: usize,
    pub in_span: bool,
}

/// Checks whether `f` has degree at most `m` against a prebuilt basis.
pub fn degree_check_with(basis: &SpanBasis, target: &str, f: impl Fn(&ColoredPermutation) -> i64) -> Result<DegreeCheck> {
    let values = statistic_vector(basis.n, basis.r, f)?;
    Ok(DegreeCheck {
        target: target.to_string(),
        n: basis.n,
        r: basis.r,
        m: basis.m,
        generators: basis.generators(),
        rank: basis.rank(),
        dimension: basis.dimension(),
        in_span: basis.contains(&values),
    })
}

/// Whether `stat` has degree at most `m` on `S_{n,r}`.
pub fn degree_upper_bound_check(stat: Statistic, m: usize, n: usize, r: u32) -> Result<DegreeCheck> {
    stat.check(n, r)?;
    let basis = SpanBasis::new(n, r, m)?;
    let order = TotalOrder::Descent;
    degree_check_with(&basis, &stat.to_string(), |x| stat.eval(x, &order) as i64)
}
