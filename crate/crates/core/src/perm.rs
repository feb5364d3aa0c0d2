//! Colored permutations `(ω, τ)` in `S_{n,r} = Z_r ≀ S_n`.
//!
//! An element acts on the `rn` colored letters `i^c` by
//! `(ω, τ)(i^c) = ω(i)^{τ(i) + c}`. Everything exposed here is 1-based;
//! the one-line storage is 0-based internally.
//!
//! Text forms:
//!
//! * one-line: `3^1 8^0 5^0 6^1 2^2 1^2 4^0 7^1` (brackets and commas optional)
//! * cycles: `(3^1 5^0 2^2 8^0 7^1 4^0 6^1 1^2)`
//!
//! In cycle notation the letter following a value `i` is the image of `i^0`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};

/// A letter `value^color` of `[n]^r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ColoredLetter {
    pub value: u32,
    pub color: u32,
}

impl ColoredLetter {
    pub const fn new(value: u32, color: u32) -> Self {
        ColoredLetter { value, color }
    }

    pub fn check(&self, n: usize, r: u32) -> Result<()> {
        if self.value == 0 || self.value as usize > n {
            return param(format!("letter value {} outside [1, {}]", self.value, n));
        }
        if self.color >= r {
            return param(format!("letter color {} outside Z_{}", self.color, r));
        }
        Ok(())
    }
}

impl fmt::Display for ColoredLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.value, self.color)
    }
}

/// A total order on `[n]^r`, used to decide descents.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum TotalOrder {
    /// `1^0 < 2^0 < ... < n^0 < 1^1 < ... < n^{r-1}`.
    Descent,
    /// `1^{r-1} < ... < n^{r-1} < ... < 1^0 < ... < n^0`.
    AdinRoichman,
    /// An explicit rank table.
    Custom(CustomOrder),
}

impl Default for TotalOrder {
    fn default() -> Self {
        TotalOrder::Descent
    }
}

/// Rank table for [`TotalOrder::Custom`]: `ranks[c * n + (i - 1)]` is the rank of `i^c`,
/// a bijection onto `1..=rn`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CustomOrder {
    n: usize,
    r: u32,
    ranks: Vec<u32>,
    top_color_zero: u32,
}

impl CustomOrder {
    pub fn new(n: usize, r: u32, ranks: Vec<u32>) -> Result<Self> {
        check_params(n, r)?;
        let size = n * r as usize;
        if ranks.len() != size {
            return param(format!("custom order needs {} ranks, got {}", size, ranks.len()));
        }
        let mut seen = vec![false; size];
        for &k in &ranks {
            if k == 0 || k as usize > size || seen[k as usize - 1] {
                return param("custom ranks must be a bijection onto 1..=rn");
            }
            seen[k as usize - 1] = true;
        }
        let top_color_zero = ranks[..n].iter().copied().max().unwrap_or(0);
        Ok(CustomOrder { n, r, ranks, top_color_zero })
    }

    /// The rank table induced by an arbitrary sort key on letters.
    pub fn from_key<K: Ord>(n: usize, r: u32, key: impl Fn(ColoredLetter) -> K) -> Result<Self> {
        check_params(n, r)?;
        let mut letters: Vec<ColoredLetter> = (0..r)
            .flat_map(|c| (1..=n as u32).map(move |v| ColoredLetter::new(v, c)))
            .collect();
        letters.sort_by_key(|&l| key(l));
        let mut ranks = vec![0; n * r as usize];
        for (rank, l) in letters.iter().enumerate() {
            ranks[l.color as usize * n + l.value as usize - 1] = rank as u32 + 1;
        }
        CustomOrder::new(n, r, ranks)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> u32 {
        self.r
    }
}

impl TotalOrder {
    /// Rank of `letter` in `1..=rn`.
    pub fn rank(&self, letter: ColoredLetter, n: usize, r: u32) -> u32 {
        match self {
            TotalOrder::Descent => letter.color * n as u32 + letter.value,
            TotalOrder::AdinRoichman => (r - 1 - letter.color) * n as u32 + letter.value,
            TotalOrder::Custom(t) => {
                debug_assert!(t.n == n && t.r == r);
                t.ranks[letter.color as usize * t.n + letter.value as usize - 1]
            }
        }
    }

    /// Comparison key: twice the rank, leaving odd slots for the boundary letter.
    #[inline]
    pub(crate) fn key(&self, value: u32, color: u32, n: usize, r: u32) -> u64 {
        2 * self.rank(ColoredLetter::new(value, color), n, r) as u64
    }

    /// Key of the boundary letter `(n+1)^0`, placed directly above the highest color-0 letter.
    #[inline]
    pub(crate) fn boundary_key(&self, n: usize, r: u32) -> u64 {
        match self {
            TotalOrder::Descent => 2 * n as u64 + 1,
            TotalOrder::AdinRoichman => 2 * (n as u64 * r as u64) + 1,
            TotalOrder::Custom(t) => 2 * t.top_color_zero as u64 + 1,
        }
    }

    pub fn compare(&self, a: ColoredLetter, b: ColoredLetter, n: usize, r: u32) -> Ordering {
        self.rank(a, n, r).cmp(&self.rank(b, n, r))
    }

    pub fn check(&self, n: usize, r: u32) -> Result<()> {
        match self {
            TotalOrder::Custom(t) if t.n != n || t.r != r => param(format!(
                "custom order built for S_({},{}), used on S_({},{})",
                t.n, t.r, n, r
            )),
            _ => Ok(()),
        }
    }
}

pub(crate) fn check_params(n: usize, r: u32) -> Result<()> {
    if n == 0 {
        return param("n must be at least 1");
    }
    if r == 0 {
        return param("r must be at least 1");
    }
    Ok(())
}

/// An element `(ω, τ)` of `S_{n,r}`.
///
/// Serializes as `{"r": 3, "one_line": "3^1 8^0 …"}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "ElementRecord", try_from = "ElementRecord")]
pub struct ColoredPermutation {
    r: u32,
    /// `omega[i]` is `ω(i + 1) - 1`.
    pub(crate) omega: Vec<u32>,
    /// `tau[i]` is `τ(i + 1)`.
    pub(crate) tau: Vec<u32>,
}

impl ColoredPermutation {
    /// Builds `(ω, τ)` from the 1-based one-line `omega` and the coloring `tau`.
    pub fn new(omega: Vec<u32>, tau: Vec<u32>, r: u32) -> Result<Self> {
        let n = omega.len();
        check_params(n, r)?;
        if tau.len() != n {
            return param(format!("coloring has length {}, permutation has length {}", tau.len(), n));
        }
        let mut seen = vec![false; n];
        for &v in &omega {
            if v == 0 || v as usize > n || seen[v as usize - 1] {
                return param(format!("{:?} is not a permutation of [{}]", omega, n));
            }
            seen[v as usize - 1] = true;
        }
        if let Some(&c) = tau.iter().find(|&&c| c >= r) {
            return param(format!("color {} outside Z_{}", c, r));
        }
        Ok(ColoredPermutation { r, omega: omega.into_iter().map(|v| v - 1).collect(), tau })
    }

    /// Builds an element from its one-line letters `(ω, τ)(i^0)`, `i = 1..=n`.
    pub fn from_letters(letters: &[ColoredLetter], r: u32) -> Result<Self> {
        ColoredPermutation::new(
            letters.iter().map(|l| l.value).collect(),
            letters.iter().map(|l| l.color).collect(),
            r,
        )
    }

    pub(crate) fn from_raw(omega: Vec<u32>, tau: Vec<u32>, r: u32) -> Self {
        debug_assert_eq!(omega.len(), tau.len());
        ColoredPermutation { r, omega, tau }
    }

    pub fn identity(n: usize, r: u32) -> Result<Self> {
        check_params(n, r)?;
        Ok(ColoredPermutation { r, omega: (0..n as u32).collect(), tau: vec![0; n] })
    }

    /// `(π, 0)` for a 1-based permutation `π`.
    pub fn uncolored(pi: Vec<u32>, r: u32) -> Result<Self> {
        let n = pi.len();
        ColoredPermutation::new(pi, vec![0; n], r)
    }

    pub fn n(&self) -> usize {
        self.omega.len()
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// `ω(i)`, 1-based.
    pub fn omega(&self, i: usize) -> u32 {
        self.omega[i - 1] + 1
    }

    /// `τ(i)`, 1-based position.
    pub fn tau(&self, i: usize) -> u32 {
        self.tau[i - 1]
    }

    /// One-line notation of `ω`, 1-based.
    pub fn omega_one_line(&self) -> Vec<u32> {
        self.omega.iter().map(|v| v + 1).collect()
    }

    pub fn coloring(&self) -> &[u32] {
        &self.tau
    }

    /// The one-line letters `(ω, τ)(1^0), ..., (ω, τ)(n^0)`.
    pub fn one_line(&self) -> Vec<ColoredLetter> {
        self.omega
            .iter()
            .zip(&self.tau)
            .map(|(&w, &t)| ColoredLetter::new(w + 1, t))
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.omega.iter().enumerate().all(|(i, &w)| w as usize == i) && self.tau.iter().all(|&t| t == 0)
    }

    fn check_compatible(&self, other: &ColoredPermutation) -> Result<()> {
        if self.n() != other.n() || self.r != other.r {
            return param(format!(
                "cannot combine elements of S_({},{}) and S_({},{})",
                self.n(),
                self.r,
                other.n(),
                other.r
            ));
        }
        Ok(())
    }

    /// The product `self · other = (ω₁ω₂, (τ₁∘ω₂) + τ₂)`; `other` acts first.
    pub fn compose(&self, other: &ColoredPermutation) -> Result<ColoredPermutation> {
        self.check_compatible(other)?;
        let r = self.r;
        let (omega, tau) = other
            .omega
            .iter()
            .zip(&other.tau)
            .map(|(&w2, &t2)| (self.omega[w2 as usize], (self.tau[w2 as usize] + t2) % r))
            .unzip();
        Ok(ColoredPermutation { r, omega, tau })
    }

    pub fn inverse(&self) -> ColoredPermutation {
        let n = self.n();
        let mut omega = vec![0; n];
        let mut tau = vec![0; n];
        for (i, (&w, &t)) in self.omega.iter().zip(&self.tau).enumerate() {
            omega[w as usize] = i as u32;
            tau[w as usize] = (self.r - t) % self.r;
        }
        ColoredPermutation { r: self.r, omega, tau }
    }

    /// `g · self · g⁻¹`.
    pub fn conjugate_by(&self, g: &ColoredPermutation) -> Result<ColoredPermutation> {
        g.compose(self)?.compose(&g.inverse())
    }

    /// `(ω, τ)(i^c) = ω(i)^{τ(i)+c}`.
    pub fn act(&self, letter: ColoredLetter) -> Result<ColoredLetter> {
        letter.check(self.n(), self.r)?;
        let i = letter.value as usize - 1;
        Ok(ColoredLetter::new(self.omega[i] + 1, (self.tau[i] + letter.color) % self.r))
    }

    /// Canonical cycle notation: each cycle starts at the image of its smallest value
    /// (so that value is written last), cycles ordered by smallest value.
    pub fn to_cycles(&self) -> CycleDecomposition {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            loop {
                seen[i] = true;
                let next = self.omega[i] as usize;
                cycle.push(ColoredLetter::new(next as u32 + 1, self.tau[i]));
                i = next;
                if i == start {
                    break;
                }
            }
            cycles.push(cycle);
        }
        CycleDecomposition { n, r: self.r, cycles }
    }

    pub fn from_cycles(cycles: &CycleDecomposition) -> ColoredPermutation {
        let n = cycles.n;
        let mut omega = vec![0; n];
        let mut tau = vec![0; n];
        for cycle in &cycles.cycles {
            let len = cycle.len();
            for h in 0..len {
                let src = cycle[h].value as usize - 1;
                let img = cycle[(h + 1) % len];
                omega[src] = img.value - 1;
                tau[src] = img.color;
            }
        }
        ColoredPermutation { r: cycles.r, omega, tau }
    }

    /// Parses one-line or cycle notation; `n` is the number of letters.
    pub fn parse(text: &str, r: u32) -> Result<ColoredPermutation> {
        let t = text.trim();
        if t.starts_with('(') {
            Ok(ColoredPermutation::from_cycles(&CycleDecomposition::parse(t, r)?))
        } else {
            let body = t.trim_start_matches('[').trim_end_matches(']');
            let letters = parse_letters(body)?;
            if letters.is_empty() {
                return Err(Error::Parse("empty element".into()));
            }
            ColoredPermutation::from_letters(&letters, r)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ElementRecord {
    r: u32,
    one_line: String,
}

impl From<ColoredPermutation> for ElementRecord {
    fn from(x: ColoredPermutation) -> Self {
        ElementRecord { r: x.r, one_line: x.to_string() }
    }
}

impl TryFrom<ElementRecord> for ColoredPermutation {
    type Error = Error;

    fn try_from(rec: ElementRecord) -> Result<Self> {
        ColoredPermutation::parse(&rec.one_line, rec.r)
    }
}

impl fmt::Display for ColoredPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.one_line().iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", l)?;
        }
        Ok(())
    }
}

/// A cycle listing of an element. Any rotation and cycle order is accepted;
/// [`ColoredPermutation::to_cycles`] yields the canonical one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycleDecomposition {
    n: usize,
    r: u32,
    cycles: Vec<Vec<ColoredLetter>>,
}

impl CycleDecomposition {
    pub fn new(r: u32, cycles: Vec<Vec<ColoredLetter>>) -> Result<Self> {
        let n: usize = cycles.iter().map(Vec::len).sum();
        check_params(n, r)?;
        let mut seen = vec![false; n];
        for cycle in &cycles {
            if cycle.is_empty() {
                return Err(Error::MalformedCycles("empty cycle".into()));
            }
            for l in cycle {
                if l.value == 0 || l.value as usize > n {
                    return Err(Error::MalformedCycles(format!("value {} outside [1, {}]", l.value, n)));
                }
                if seen[l.value as usize - 1] {
                    return Err(Error::MalformedCycles(format!("value {} repeated", l.value)));
                }
                seen[l.value as usize - 1] = true;
                if l.color >= r {
                    return Err(Error::MalformedCycles(format!("color {} outside Z_{}", l.color, r)));
                }
            }
        }
        Ok(CycleDecomposition { n, r, cycles })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn cycles(&self) -> &[Vec<ColoredLetter>] {
        &self.cycles
    }

    /// Color of a cycle: the sum of its letter colors mod `r`.
    pub fn cycle_color(&self, idx: usize) -> u32 {
        self.cycles[idx].iter().map(|l| l.color).sum::<u32>() % self.r
    }

    pub fn canonical(&self) -> CycleDecomposition {
        ColoredPermutation::from_cycles(self).to_cycles()
    }

    pub fn parse(text: &str, r: u32) -> Result<CycleDecomposition> {
        let mut cycles = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("expected '(' at {:?}", rest)))?;
            let close = body
                .find(')')
                .ok_or_else(|| Error::Parse("unclosed cycle".into()))?;
            let letters = parse_letters(&body[..close])?;
            if letters.is_empty() {
                return Err(Error::MalformedCycles("empty cycle".into()));
            }
            cycles.push(letters);
            rest = body[close + 1..].trim_start();
        }
        if cycles.is_empty() {
            return Err(Error::Parse("no cycles".into()));
        }
        CycleDecomposition::new(r, cycles)
    }
}

impl fmt::Display for CycleDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_cycles(f, &self.cycles)
    }
}

pub(crate) fn write_cycles(f: &mut impl fmt::Write, cycles: &[Vec<ColoredLetter>]) -> fmt::Result {
    for cycle in cycles {
        f.write_char('(')?;
        for (i, l) in cycle.iter().enumerate() {
            if i > 0 {
                f.write_char(' ')?;
            }
            write!(f, "{}", l)?;
        }
        f.write_char(')')?;
    }
    Ok(())
}

fn parse_letters(body: &str) -> Result<Vec<ColoredLetter>> {
    body.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|tok| !tok.is_empty())
        .map(parse_letter)
        .collect()
}

fn parse_letter(tok: &str) -> Result<ColoredLetter> {
    let bad = || Error::Parse(format!("bad letter {:?}", tok));
    let (v, c) = match tok.split_once('^') {
        Some((v, c)) => (v, c.trim_start_matches('{').trim_end_matches('}')),
        None => (tok, "0"),
    };
    Ok(ColoredLetter::new(v.parse().map_err(|_| bad())?, c.parse().map_err(|_| bad())?))
}
