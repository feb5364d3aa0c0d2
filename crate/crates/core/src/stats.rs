//! Descent-type statistics on `S_{n,r}`.
//!
//! Position `i ∈ [n]` is a descent when `(ω,τ)(i^0) > (ω,τ)((i+1)^0)` in the
//! chosen total order, with the boundary letter `(n+1)^0` standing in for the
//! image of `(n+1)^0`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{param, Error, Result};
use crate::perm::{ColoredPermutation, TotalOrder};

/// Calls `f(i)` for every descent position `i` (1-based), in increasing order.
#[inline]
pub fn for_each_descent(x: &ColoredPermutation, order: &TotalOrder, mut f: impl FnMut(usize)) {
    let n = x.n();
    let r = x.r();
    let omega = &x.omega;
    let tau = &x.tau;
    let mut prev = order.key(omega[0] + 1, tau[0], n, r);
    for i in 1..n {
        let cur = order.key(omega[i] + 1, tau[i], n, r);
        if prev > cur {
            f(i);
        }
        prev = cur;
    }
    if prev > order.boundary_key(n, r) {
        f(n);
    }
}

/// The descent set, a sorted subset of `[n]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DescentSet {
    pub positions: Vec<u32>,
}

impl DescentSet {
    pub fn contains(&self, i: u32) -> bool {
        self.positions.binary_search(&i).is_ok()
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

pub fn descent_set(x: &ColoredPermutation, order: &TotalOrder) -> DescentSet {
    let mut positions = Vec::new();
    for_each_descent(x, order, |i| positions.push(i as u32));
    DescentSet { positions }
}

/// Descent positions as a bit mask, bit `i - 1` for position `i`; requires `n <= 64`.
#[inline]
pub fn descent_mask(x: &ColoredPermutation, order: &TotalOrder) -> u64 {
    debug_assert!(x.n() <= 64);
    let mut mask = 0u64;
    for_each_descent(x, order, |i| mask |= 1 << (i - 1));
    mask
}

pub fn des(x: &ColoredPermutation) -> u64 {
    des_with(x, &TotalOrder::Descent)
}

pub fn maj(x: &ColoredPermutation) -> u64 {
    maj_with(x, &TotalOrder::Descent)
}

pub fn fmaj(x: &ColoredPermutation) -> u64 {
    fmaj_with(x, &TotalOrder::Descent)
}

pub fn des_with(x: &ColoredPermutation, order: &TotalOrder) -> u64 {
    let mut d = 0;
    for_each_descent(x, order, |_| d += 1);
    d
}

/// Sum of the descent positions below `n`.
pub fn maj_with(x: &ColoredPermutation, order: &TotalOrder) -> u64 {
    let n = x.n();
    let mut m = 0;
    for_each_descent(x, order, |i| {
        if i < n {
            m += i as u64
        }
    });
    m
}

/// Sum of the colors, as integers in `0..r`.
pub fn col(x: &ColoredPermutation) -> u64 {
    x.tau.iter().map(|&c| c as u64).sum()
}

/// `r · maj + col`.
pub fn fmaj_with(x: &ColoredPermutation, order: &TotalOrder) -> u64 {
    x.r() as u64 * maj_with(x, order) + col(x)
}

/// A named statistic, serializable as `des`, `maj`, `col`, `fmaj`, `X:i` or `Y:i:c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Statistic {
    Des,
    Maj,
    Col,
    Fmaj,
    /// Indicator of a descent at position `i`.
    X(u32),
    /// Indicator of `τ(i) = c`.
    Y(u32, u32),
}

/// The descent indicator `X_i` on `S_{n,·}`.
pub fn indicator_x(i: u32, n: usize) -> Result<Statistic> {
    if i == 0 || i as usize > n {
        return param(format!("descent position {} outside [1, {}]", i, n));
    }
    Ok(Statistic::X(i))
}

/// The color indicator `Y_{i,c}` on `S_{n,r}`.
pub fn indicator_y(i: u32, c: u32, n: usize, r: u32) -> Result<Statistic> {
    if i == 0 || i as usize > n {
        return param(format!("position {} outside [1, {}]", i, n));
    }
    if c >= r {
        return param(format!("color {} outside Z_{}", c, r));
    }
    Ok(Statistic::Y(i, c))
}

impl Statistic {
    pub fn check(&self, n: usize, r: u32) -> Result<()> {
        match *self {
            Statistic::X(i) => indicator_x(i, n).map(drop),
            Statistic::Y(i, c) => indicator_y(i, c, n, r).map(drop),
            _ => Ok(()),
        }
    }

    #[inline]
    pub fn eval(&self, x: &ColoredPermutation, order: &TotalOrder) -> u64 {
        match *self {
            Statistic::Des => des_with(x, order),
            Statistic::Maj => maj_with(x, order),
            Statistic::Col => col(x),
            Statistic::Fmaj => fmaj_with(x, order),
            Statistic::X(i) => {
                let mut hit = 0;
                for_each_descent(x, order, |d| {
                    if d == i as usize {
                        hit = 1
                    }
                });
                hit
            }
            Statistic::Y(i, c) => (x.tau(i as usize) == c) as u64,
        }
    }

    /// Largest value the statistic takes on `S_{n,r}`.
    pub fn max_value(&self, n: usize, r: u32) -> u64 {
        let n = n as u64;
        let r = r as u64;
        match self {
            Statistic::Des => n,
            Statistic::Maj => n * (n - 1) / 2,
            Statistic::Col => n * (r - 1),
            Statistic::Fmaj => r * n * (n - 1) / 2 + n * (r - 1),
            Statistic::X(_) | Statistic::Y(..) => 1,
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statistic::Des => f.write_str("des"),
            Statistic::Maj => f.write_str("maj"),
            Statistic::Col => f.write_str("col"),
            Statistic::Fmaj => f.write_str("fmaj"),
            Statistic::X(i) => write!(f, "X:{}", i),
            Statistic::Y(i, c) => write!(f, "Y:{}:{}", i, c),
        }
    }
}

impl FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Statistic> {
        let bad = || Error::Parse(format!("unknown statistic {:?}", s));
        let num = |t: &str| t.parse::<u32>().map_err(|_| bad());
        let parts: Vec<&str> = s.trim().split(':').collect();
        match parts.as_slice() {
            ["des"] => Ok(Statistic::Des),
            ["maj"] => Ok(Statistic::Maj),
            ["col"] => Ok(Statistic::Col),
            ["fmaj"] => Ok(Statistic::Fmaj),
            ["X", i] => Ok(Statistic::X(num(i)?)),
            ["Y", i, c] => Ok(Statistic::Y(num(i)?, num(c)?)),
            _ => Err(bad()),
        }
    }
}

impl Serialize for Statistic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Statistic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
