//! Exact expectations and moments.
//!
//! Three independent routes compute the same numbers:
//!
//! * closed forms for products of descent indicators `X_a` and color
//!   indicators `Y_{i,c}`, expanded linearly to moments of des, maj and fmaj;
//! * exhaustive enumeration of the domain with exact integer accumulation;
//! * generating functions `Σ q^{stat(x)}` read off the same enumeration.
//!
//! Probabilities are exact rationals throughout.
//!
//! The closed form for a product `X_{a_1}⋯X_{a_j} Y_{b_1,c_1}⋯Y_{b_m,c_m}` is
//! `(1/r)^{|Y|} ∏ 1/|B_i|!` once every color factor is inside the essential set
//! and adjacent colors inside a block agree. The factorial is confirmed by
//! enumeration, e.g. `E[X_1 X_2 Y_{1,0} Y_{2,0} Y_{3,0}] = 1/48` on `S_{3,2}`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::blocks::{dedup, induced_blocks};
use crate::conjugacy::{cycle_type, enumerate_class, r_partitions, RPartition, FILTER_LIMIT};
use crate::enumerate::{check_cap, fold_group, group_order, group_order_u128, permutations};
use crate::error::{param, Error, Result};
use crate::perm::{check_params, ColoredPermutation, TotalOrder};
use crate::poly::QPolynomial;
use crate::stats::Statistic;

/// Where an expectation is taken: uniformly over a set of group elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Domain {
    /// All of `S_{n,r}`.
    Group { n: usize, r: u32 },
    /// A conjugacy class.
    Class { cycle_type: RPartition },
    /// Elements whose one-line notation carries value `i` with color `colors[i-1]`.
    ColorOrbit { r: u32, colors: Vec<u32> },
}

impl Domain {
    pub fn group(n: usize, r: u32) -> Result<Domain> {
        check_params(n, r)?;
        Ok(Domain::Group { n, r })
    }

    pub fn class(cycle_type: RPartition) -> Domain {
        Domain::Class { cycle_type }
    }

    pub fn color_orbit(colors: Vec<u32>, r: u32) -> Result<Domain> {
        check_params(colors.len(), r)?;
        if let Some(&c) = colors.iter().find(|&&c| c >= r) {
            return param(format!("color {} outside Z_{}", c, r));
        }
        Ok(Domain::ColorOrbit { r, colors })
    }

    pub fn n(&self) -> usize {
        match self {
            Domain::Group { n, .. } => *n,
            Domain::Class { cycle_type } => cycle_type.n(),
            Domain::ColorOrbit { colors, .. } => colors.len(),
        }
    }

    pub fn r(&self) -> u32 {
        match self {
            Domain::Group { r, .. } | Domain::ColorOrbit { r, .. } => *r,
            Domain::Class { cycle_type } => cycle_type.r(),
        }
    }

    pub fn size(&self) -> BigUint {
        match self {
            Domain::Group { n, r } => group_order(*n, *r),
            Domain::Class { cycle_type } => cycle_type.class_size(),
            Domain::ColorOrbit { colors, .. } => group_order(colors.len(), 1),
        }
    }

    pub fn contains(&self, x: &ColoredPermutation) -> bool {
        if x.n() != self.n() || x.r() != self.r() {
            return false;
        }
        match self {
            Domain::Group { .. } => true,
            Domain::Class { cycle_type: l } => cycle_type(x) == *l,
            Domain::ColorOrbit { colors, .. } => x.one_line().iter().all(|l| colors[l.value as usize - 1] == l.color),
        }
    }

    /// Folds over every element, in parallel where the domain allows it.
    ///
    /// Errors with [`Error::CapExceeded`] when the domain has more than `cap` elements.
    pub fn fold<T, I, F, M>(&self, cap: u128, init: I, fold: F, merge: M) -> Result<T>
    where
        T: Send,
        I: Fn() -> T + Sync + Send,
        F: Fn(&mut T, &ColoredPermutation) + Sync + Send,
        M: Fn(T, T) -> T + Sync + Send,
    {
        let size = u128::try_from(self.size()).ok();
        check_cap(size, cap)?;
        match self {
            Domain::Group { n, r } => fold_group(*n, *r, cap, init, fold, merge),
            Domain::Class { cycle_type: l } => {
                let scan = group_order_u128(l.n(), l.r()).is_some_and(|s| s <= FILTER_LIMIT.max(cap.min(64 * FILTER_LIMIT)));
                if scan {
                    fold_group(
                        l.n(),
                        l.r(),
                        u128::MAX,
                        init,
                        |acc, x| {
                            if cycle_type(x) == *l {
                                fold(acc, x)
                            }
                        },
                        merge,
                    )
                } else {
                    let mut acc = init();
                    for x in enumerate_class(l) {
                        fold(&mut acc, &x);
                    }
                    Ok(acc)
                }
            }
            Domain::ColorOrbit { r, colors } => {
                let r = *r;
                Ok(permutations(colors.len())
                    .par_iter()
                    .fold(&init, |mut acc, omega| {
                        let tau = omega.iter().map(|&v| colors[v as usize]).collect();
                        let x = ColoredPermutation::new(omega.iter().map(|v| v + 1).collect(), tau, r)
                            .expect("valid permutation and colors");
                        fold(&mut acc, &x);
                        acc
                    })
                    .reduce(&init, &merge))
            }
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Group { n, r } => write!(f, "S_{{{},{}}}", n, r),
            Domain::Class { cycle_type } => write!(f, "C[{}]", cycle_type),
            Domain::ColorOrbit { colors, .. } => {
                let c: Vec<String> = colors.iter().map(u32::to_string).collect();
                write!(f, "Omega({})", c.join(","))
            }
        }
    }
}

/// How a reported value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    Enumeration,
    GeneratingFunction,
}

/// `E[stat^k]` on a domain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentReport {
    pub statistic: Statistic,
    pub domain: Domain,
    pub k: u32,
    #[serde(with = "crate::serde_num::ratio")]
    pub value: BigRational,
    pub method: Method,
}

fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

fn inv_factorial(m: usize) -> BigRational {
    let f: BigInt = (1..=m as u64).map(BigInt::from).product();
    BigRational::new(BigInt::one(), f)
}

fn check_positions(indices: &[u32], max: usize, what: &str) -> Result<()> {
    match indices.iter().find(|&&a| a == 0 || a as usize > max) {
        Some(a) => param(format!("{} index {} outside [1, {}]", what, a, max)),
        None => Ok(()),
    }
}

/// `E[X_{a_1}⋯X_{a_k}]` over `S_{n,r}`.
///
/// `∏ 1/|B_i|!` over the induced blocks, times `((r-1)/r)^{|B_t|}` when `n` is
/// one of the indices and `B_t` is the block containing it.
pub fn expect_x_product_group(indices: &[u32], n: usize, r: u32) -> Result<BigRational> {
    check_params(n, r)?;
    check_positions(indices, n, "descent")?;
    let indices = dedup(indices);
    let blocks = induced_blocks(&indices, n)?;
    let mut value: BigRational = blocks.sizes().map(inv_factorial).product();
    if indices.last() == Some(&(n as u32)) {
        value *= ratio(r - 1, r).pow(blocks.last_size() as i32);
    }
    Ok(value)
}

/// `E[X_{a_1}⋯X_{a_k}]` over `C_λ`, equal to the group value when every cycle is
/// longer than `2k` (`k` distinct indices). Otherwise the closed form does not apply.
pub fn expect_x_product_class(indices: &[u32], lambda: &RPartition) -> Result<BigRational> {
    let k = dedup(indices).len() as u32;
    require_class(lambda, 2 * k)?;
    expect_x_product_group(indices, lambda.n(), lambda.r())
}

fn require_class(lambda: &RPartition, bound: u32) -> Result<()> {
    if lambda.has_no_short_cycles(bound) {
        Ok(())
    } else {
        Err(Error::FormulaNotApplicable(format!(
            "class {} has a cycle of length {}, closed form needs all cycles longer than {}",
            lambda,
            lambda.min_part(),
            bound
        )))
    }
}

/// `E[X_{a_1}⋯X_{a_j} Y_{b_1,c_1}⋯Y_{b_m,c_m}]` on the group or on a class.
///
/// Descent indices must lie in `[n-1]`. On a class every cycle must be longer
/// than `j + k`, with `j` distinct descent indices and `k = j + m` factors in all.
pub fn expect_xy_product(x_indices: &[u32], y_factors: &[(u32, u32)], domain: &Domain) -> Result<BigRational> {
    let n = domain.n();
    let r = domain.r();
    check_positions(x_indices, n.saturating_sub(1), "descent")?;
    check_positions(&y_factors.iter().map(|&(i, _)| i).collect::<Vec<_>>(), n, "color")?;
    if let Some(&(_, c)) = y_factors.iter().find(|&&(_, c)| c >= r) {
        return param(format!("color {} outside Z_{}", c, r));
    }
    let xs = dedup(x_indices);
    let mut ys: BTreeMap<u32, u32> = BTreeMap::new();
    for &(i, c) in y_factors {
        if let Some(&prev) = ys.get(&i) {
            if prev != c {
                return Ok(BigRational::zero());
            }
        }
        ys.insert(i, c);
    }
    match domain {
        Domain::Group { .. } => {}
        Domain::Class { cycle_type } => {
            let j = xs.len() as u32;
            require_class(cycle_type, 2 * j + ys.len() as u32)?;
        }
        Domain::ColorOrbit { .. } => {
            return Err(Error::FormulaNotApplicable("no closed form on color orbits".into()));
        }
    }

    let essential: BTreeSet<u32> = xs.iter().flat_map(|&a| [a, a + 1]).collect();
    let outside = ys.keys().filter(|i| !essential.contains(i)).count();
    let fixed: Vec<Option<u32>> = essential.iter().map(|i| ys.get(i).copied()).collect();
    let positions: Vec<u32> = essential.iter().copied().collect();

    // Expand the unconstrained essential positions over all colors.
    let free: Vec<usize> = (0..positions.len()).filter(|&t| fixed[t].is_none()).collect();
    let mut colors: Vec<u32> = fixed.iter().map(|c| c.unwrap_or(0)).collect();
    let mut total = BigRational::zero();
    loop {
        let color_at = |i: u32| colors[positions.binary_search(&i).expect("essential")];
        let mut kept = Vec::new();
        let mut possible = true;
        for &a in &xs {
            let (ca, cb) = (color_at(a), color_at(a + 1));
            if ca < cb {
                possible = false;
                break;
            }
            if ca == cb {
                kept.push(a);
            }
        }
        if possible {
            let blocks = induced_blocks(&kept, n)?;
            total += blocks.sizes().map(inv_factorial).product::<BigRational>();
        }
        let mut advanced = false;
        for &t in free.iter().rev() {
            colors[t] += 1;
            if colors[t] < r {
                advanced = true;
                break;
            }
            colors[t] = 0;
        }
        if !advanced {
            break;
        }
    }
    let per_color = ratio(1, r);
    Ok(total * per_color.pow((positions.len() + outside) as i32))
}

/// A single indicator factor in a linear expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Factor {
    X(u32),
    Y(u32, u32),
}

/// `stat` as `Σ coef · factor` with descent factors in `[n-1]`.
fn linear_form(stat: Statistic, n: usize, r: u32) -> Result<Vec<(i64, Factor)>> {
    stat.check(n, r)?;
    let n32 = n as u32;
    // A descent at n means the last color is nonzero.
    let last = |coef: i64| (1..r).map(move |c| (coef, Factor::Y(n32, c)));
    let colors = || (1..=n32).flat_map(|i| (1..r).map(move |c| (c as i64, Factor::Y(i, c))));
    Ok(match stat {
        Statistic::Des => (1..n32).map(|i| (1, Factor::X(i))).chain(last(1)).collect(),
        Statistic::Maj => (1..n32).map(|i| (i as i64, Factor::X(i))).collect(),
        Statistic::Col => colors().collect(),
        Statistic::Fmaj => (1..n32).map(|i| (r as i64 * i as i64, Factor::X(i))).chain(colors()).collect(),
        Statistic::X(i) if i == n32 => last(1).collect(),
        Statistic::X(i) => vec![(1, Factor::X(i))],
        Statistic::Y(i, c) => vec![(1, Factor::Y(i, c))],
    })
}

/// `E[stat^k]` from the indicator closed forms, on the group or a class whose
/// cycles are all longer than `2k`.
pub fn closed_form_moment(stat: Statistic, domain: &Domain, k: u32) -> Result<BigRational> {
    let n = domain.n();
    let r = domain.r();
    if let Domain::Class { cycle_type } = domain {
        require_class(cycle_type, 2 * k)?;
    }
    if matches!(domain, Domain::ColorOrbit { .. }) {
        return Err(Error::FormulaNotApplicable("no closed form on color orbits".into()));
    }
    let terms = linear_form(stat, n, r)?;
    // Collect monomials as sorted factor multisets to reuse their expectations.
    let mut monomials: HashMap<Vec<Factor>, BigInt> = HashMap::new();
    let mut idx = vec![0usize; k as usize];
    if terms.is_empty() {
        return Ok(if k == 0 { BigRational::one() } else { BigRational::zero() });
    }
    loop {
        let mut coef = BigInt::one();
        let mut factors = Vec::with_capacity(k as usize);
        for &t in &idx {
            coef *= terms[t].0;
            factors.push(terms[t].1);
        }
        factors.sort();
        factors.dedup();
        *monomials.entry(factors).or_default() += coef;
        let mut pos = idx.len();
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < terms.len() {
                break;
            }
            idx[pos] = 0;
        }
        if idx.iter().all(|&t| t == 0) {
            break;
        }
    }
    let group = Domain::Group { n, r };
    let mut total = BigRational::zero();
    for (factors, coef) in monomials {
        if coef.is_zero() {
            continue;
        }
        let xs: Vec<u32> = factors.iter().filter_map(|f| if let Factor::X(a) = f { Some(*a) } else { None }).collect();
        let ys: Vec<(u32, u32)> =
            factors.iter().filter_map(|f| if let Factor::Y(i, c) = f { Some((*i, *c)) } else { None }).collect();
        // The class hypothesis on 2k covers every monomial, so the group value applies.
        total += BigRational::from(coef) * expect_xy_product(&xs, &ys, &group)?;
    }
    Ok(total)
}

/// Exact mean of an integer-valued function over the domain.
pub fn domain_mean<F>(domain: &Domain, cap: u128, f: F) -> Result<BigRational>
where
    F: Fn(&ColoredPermutation) -> i64 + Sync + Send,
{
    let (sum, count) = domain.fold(
        cap,
        || (0i128, 0u64),
        |acc, x| {
            acc.0 += f(x) as i128;
            acc.1 += 1;
        },
        |a, b| (a.0 + b.0, a.1 + b.1),
    )?;
    Ok(BigRational::new(BigInt::from(sum), BigInt::from(count)))
}

/// Counts of each value of `stat` on the domain.
pub fn histogram(stat: Statistic, domain: &Domain, order: &TotalOrder, cap: u128) -> Result<Vec<u64>> {
    let n = domain.n();
    let r = domain.r();
    stat.check(n, r)?;
    order.check(n, r)?;
    let len = stat.max_value(n, r) as usize + 1;
    let mut hist = domain.fold(
        cap,
        || vec![0u64; len],
        |h, x| h[stat.eval(x, order) as usize] += 1,
        |mut a, b| {
            a.iter_mut().zip(b).for_each(|(s, t)| *s += t);
            a
        },
    )?;
    while hist.len() > 1 && hist.last() == Some(&0) {
        hist.pop();
    }
    Ok(hist)
}

/// `Σ_{x ∈ domain} q^{stat(x)}` under the default order.
pub fn gf_distribution(stat: Statistic, domain: &Domain, cap: u128) -> Result<QPolynomial> {
    gf_distribution_with(stat, domain, &TotalOrder::Descent, cap)
}

pub fn gf_distribution_with(stat: Statistic, domain: &Domain, order: &TotalOrder, cap: u128) -> Result<QPolynomial> {
    Ok(QPolynomial::from_u64s(&histogram(stat, domain, order, cap)?))
}

/// `E[stat^k]` for a statistic with generating function `gf`.
pub fn moment_from_gf(gf: &QPolynomial, k: u32) -> BigRational {
    let mut num = BigInt::zero();
    for (v, c) in gf.coeffs().iter().enumerate() {
        num += c * BigInt::from(v).pow(k);
    }
    BigRational::new(num, gf.eval_at_one())
}

fn moment_from_counts(counts: &[u64], k: u32) -> BigRational {
    let mut num = BigInt::zero();
    let mut den = BigInt::zero();
    for (v, &c) in counts.iter().enumerate() {
        num += BigInt::from(c) * BigInt::from(v).pow(k);
        den += c;
    }
    BigRational::new(num, den)
}

/// `E[stat^k]` by exhaustive enumeration, accumulating `stat^k` directly.
pub fn moment_enumerated(stat: Statistic, domain: &Domain, k: u32, cap: u128) -> Result<BigRational> {
    stat.check(domain.n(), domain.r())?;
    let order = TotalOrder::Descent;
    let (sum, count) = domain.fold(
        cap,
        || (BigInt::zero(), 0u64),
        |acc, x| {
            acc.0 += BigInt::from(stat.eval(x, &order)).pow(k);
            acc.1 += 1;
        },
        |a, b| (a.0 + b.0, a.1 + b.1),
    )?;
    Ok(BigRational::new(sum, BigInt::from(count)))
}

/// `E[stat^k]` by the requested method.
pub fn moment_report(stat: Statistic, domain: &Domain, k: u32, method: Method, cap: u128) -> Result<MomentReport> {
    let value = match method {
        Method::ClosedForm => closed_form_moment(stat, domain, k)?,
        Method::Enumeration => moment_enumerated(stat, domain, k, cap)?,
        Method::GeneratingFunction => moment_from_gf(&gf_distribution(stat, domain, cap)?, k),
    };
    Ok(MomentReport { statistic: stat, domain: domain.clone(), k, value, method })
}

/// Value counts of several statistics on every conjugacy class of `S_{n,r}`,
/// from a single pass over the group. Keyed by cycle type; inner vectors follow `stats`.
pub fn class_histograms(n: usize, r: u32, stats: &[Statistic], cap: u128) -> Result<BTreeMap<RPartition, Vec<Vec<u64>>>> {
    for s in stats {
        s.check(n, r)?;
    }
    let order = TotalOrder::Descent;
    let lens: Vec<usize> = stats.iter().map(|s| s.max_value(n, r) as usize + 1).collect();
    let merged = fold_group(
        n,
        r,
        cap,
        HashMap::<RPartition, Vec<Vec<u64>>>::new,
        |acc, x| {
            let entry = acc.entry(cycle_type(x)).or_insert_with(|| lens.iter().map(|&l| vec![0; l]).collect());
            for (h, s) in entry.iter_mut().zip(stats) {
                h[s.eval(x, &order) as usize] += 1;
            }
        },
        |mut a, b| {
            for (key, hists) in b {
                match a.get_mut(&key) {
                    Some(mine) => {
                        for (h, o) in mine.iter_mut().zip(hists) {
                            h.iter_mut().zip(o).for_each(|(s, t)| *s += t);
                        }
                    }
                    None => {
                        a.insert(key, hists);
                    }
                }
            }
            a
        },
    )?;
    Ok(merged.into_iter().collect())
}

/// Class moment against group moment (and, for maj, against `S_n`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentComparison {
    pub statistic: Statistic,
    pub k: u32,
    pub cycle_type: RPartition,
    /// Whether every cycle is longer than `2k`.
    pub hypothesis_holds: bool,
    #[serde(with = "crate::serde_num::ratio")]
    pub class_moment: BigRational,
    #[serde(with = "crate::serde_num::ratio")]
    pub group_moment: BigRational,
    /// `E_{S_n}[maj^k]`, present for maj.
    #[serde(with = "crate::serde_num::opt_ratio")]
    pub symmetric_moment: Option<BigRational>,
    pub equal: bool,
}

fn check_theorem_stat(stat: Statistic) -> Result<()> {
    match stat {
        Statistic::Des | Statistic::Maj | Statistic::Fmaj => Ok(()),
        other => param(format!("moment comparison is defined for des, maj and fmaj, not {}", other)),
    }
}

fn comparison(
    stat: Statistic,
    k: u32,
    lambda: &RPartition,
    class_moment: BigRational,
    group_moment: BigRational,
    symmetric_moment: Option<BigRational>,
) -> MomentComparison {
    let equal = class_moment == group_moment && symmetric_moment.as_ref().is_none_or(|s| *s == class_moment);
    MomentComparison {
        statistic: stat,
        k,
        cycle_type: lambda.clone(),
        hypothesis_holds: lambda.has_no_short_cycles(2 * k),
        class_moment,
        group_moment,
        symmetric_moment,
        equal,
    }
}

/// Compares `E_{C_λ}[stat^k]` with `E_{S_{n,r}}[stat^k]` by enumeration, with no
/// condition on the cycle type.
pub fn moment_comparison(lambda: &RPartition, k: u32, stat: Statistic, cap: u128) -> Result<MomentComparison> {
    check_theorem_stat(stat)?;
    let (n, r) = (lambda.n(), lambda.r());
    let class_moment = moment_enumerated(stat, &Domain::class(lambda.clone()), k, cap)?;
    let group_moment = moment_enumerated(stat, &Domain::group(n, r)?, k, cap)?;
    let symmetric = match stat {
        Statistic::Maj => Some(moment_enumerated(stat, &Domain::group(n, 1)?, k, cap)?),
        _ => None,
    };
    Ok(comparison(stat, k, lambda, class_moment, group_moment, symmetric))
}

/// [`moment_comparison`] on a class whose cycles are all longer than `2k`.
pub fn verify_theorem1(lambda: &RPartition, k: u32, stat: Statistic, cap: u128) -> Result<MomentComparison> {
    lambda.require_no_short_cycles(2 * k)?;
    moment_comparison(lambda, k, stat, cap)
}

/// Moment comparisons for des, maj and fmaj on every class of `S_{n,r}`, from
/// one pass over the group. Classes failing the hypothesis are included with
/// `hypothesis_holds = false`.
pub fn theorem1_sweep(n: usize, r: u32, k: u32, cap: u128) -> Result<Vec<MomentComparison>> {
    let stats = [Statistic::Des, Statistic::Maj, Statistic::Fmaj];
    let by_class = class_histograms(n, r, &stats, cap)?;
    let mut group_counts: Vec<Vec<u64>> = stats.iter().map(|s| vec![0; s.max_value(n, r) as usize + 1]).collect();
    for hists in by_class.values() {
        for (g, h) in group_counts.iter_mut().zip(hists) {
            g.iter_mut().zip(h).for_each(|(s, t)| *s += t);
        }
    }
    let symmetric = moment_enumerated(Statistic::Maj, &Domain::group(n, 1)?, k, cap)?;
    let mut out = Vec::new();
    for lambda in r_partitions(n, r)? {
        let hists = by_class.get(&lambda).ok_or_else(|| Error::Internal(format!("class {} not visited", lambda)))?;
        for (s, stat) in stats.iter().enumerate() {
            let sym = (*stat == Statistic::Maj).then(|| symmetric.clone());
            out.push(comparison(
                *stat,
                k,
                &lambda,
                moment_from_counts(&hists[s], k),
                moment_from_counts(&group_counts[s], k),
                sym,
            ));
        }
    }
    Ok(out)
}

/// Result of checking `gf(des)/(1-q)^{n+1} = Σ (ir+1)^n q^i` through a degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Eq1Report {
    pub n: usize,
    pub r: u32,
    pub truncation: usize,
    pub gf: QPolynomial,
    #[serde(with = "crate::serde_num::bigint_vec")]
    pub series: Vec<BigInt>,
    #[serde(with = "crate::serde_num::bigint_vec")]
    pub expected: Vec<BigInt>,
    pub passed: bool,
}

/// Checks the des series identity for a given generating function.
pub fn eq1_check(gf: &QPolynomial, n: usize, r: u32, truncation: usize) -> Eq1Report {
    let series = gf.series_over_one_minus_q(n as u32 + 1, truncation + 1);
    let expected: Vec<BigInt> = (0..=truncation).map(|i| BigInt::from(i as u64 * r as u64 + 1).pow(n as u32)).collect();
    let passed = series == expected;
    Eq1Report { n, r, truncation, gf: gf.clone(), series, expected, passed }
}

pub fn verify_eq1(n: usize, r: u32, truncation: usize, cap: u128) -> Result<Eq1Report> {
    if truncation < n {
        return param(format!("truncation {} is below n = {}", truncation, n));
    }
    let gf = gf_distribution(Statistic::Des, &Domain::group(n, r)?, cap)?;
    Ok(eq1_check(&gf, n, r, truncation))
}

/// Result of checking `gf(fmaj) = [r]_q [2r]_q ⋯ [nr]_q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Eq2Report {
    pub n: usize,
    pub r: u32,
    pub gf: QPolynomial,
    pub product: QPolynomial,
    pub passed: bool,
}

/// `[r]_q [2r]_q ⋯ [nr]_q`.
pub fn fmaj_product(n: usize, r: u32) -> QPolynomial {
    (1..=n as u32).fold(QPolynomial::one(), |acc, i| acc.mul(&QPolynomial::q_integer(i * r)))
}

pub fn verify_eq2(n: usize, r: u32, cap: u128) -> Result<Eq2Report> {
    let gf = gf_distribution(Statistic::Fmaj, &Domain::group(n, r)?, cap)?;
    let product = fmaj_product(n, r);
    let passed = gf == product;
    Ok(Eq2Report { n, r, gf, product, passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{GroupIter, DEFAULT_CAP};
    use crate::stats::{descent_set, Statistic};

    fn q(a: i64, b: i64) -> BigRational {
        ratio(a, b)
    }

    /// Brute-force mean of a product of indicators over the group.
    fn brute_xy(n: usize, r: u32, xs: &[u32], ys: &[(u32, u32)]) -> BigRational {
        let mut hits = 0i64;
        let mut total = 0i64;
        for x in GroupIter::new(n, r).unwrap() {
            let d = descent_set(&x, &TotalOrder::Descent);
            if xs.iter().all(|&a| d.contains(a)) && ys.iter().all(|&(i, c)| x.tau(i as usize) == c) {
                hits += 1;
            }
            total += 1;
        }
        q(hits, total)
    }

    #[test]
    fn x_product_examples() {
        assert_eq!(expect_x_product_group(&[1], 6, 3).unwrap(), q(1, 2));
        assert_eq!(expect_x_product_group(&[6], 6, 3).unwrap(), q(2, 3));
        assert_eq!(expect_x_product_group(&[1, 2, 4, 5], 5, 2).unwrap(), q(1, 48));
        assert_eq!(brute_xy(5, 2, &[1, 2, 4, 5], &[]), q(1, 48));
        assert_eq!(expect_x_product_group(&[], 4, 2).unwrap(), q(1, 1));
        assert_eq!(expect_x_product_group(&[2, 2, 1], 4, 2).unwrap(), expect_x_product_group(&[1, 2], 4, 2).unwrap());
        assert!(expect_x_product_group(&[5], 4, 2).is_err());
    }

    #[test]
    fn x_product_on_classes() {
        let five = RPartition::single_cycle(5, 2, 0).unwrap();
        assert_eq!(expect_x_product_class(&[1, 2], &five).unwrap(), q(1, 6));
        assert_eq!(expect_x_product_class(&[5], &five).unwrap(), q(1, 2));
        let id = RPartition::identity(5, 2).unwrap();
        assert!(matches!(expect_x_product_class(&[1], &id), Err(Error::FormulaNotApplicable(_))));
        let mean = domain_mean(&Domain::class(id), DEFAULT_CAP, |x| Statistic::X(1).eval(x, &TotalOrder::Descent) as i64);
        assert_eq!(mean.unwrap(), q(0, 1));
        for indices in [vec![1], vec![5], vec![2, 3], vec![1, 5]] {
            let brute = domain_mean(&Domain::class(five.clone()), DEFAULT_CAP, |x| {
                let d = descent_set(x, &TotalOrder::Descent);
                indices.iter().all(|&a| d.contains(a)) as i64
            })
            .unwrap();
            assert_eq!(expect_x_product_class(&indices, &five).unwrap(), brute, "{:?}", indices);
        }
    }

    #[test]
    fn xy_product_examples() {
        let g = |n, r| Domain::group(n, r).unwrap();
        assert_eq!(expect_xy_product(&[], &[(1, 2)], &g(4, 3)).unwrap(), q(1, 3));
        assert_eq!(expect_xy_product(&[1], &[(3, 1)], &g(5, 2)).unwrap(), q(1, 4));
        assert_eq!(expect_xy_product(&[1], &[(1, 1), (2, 1)], &g(4, 2)).unwrap(), brute_xy(4, 2, &[1], &[(1, 1), (2, 1)]));
        assert_eq!(expect_xy_product(&[1], &[(1, 0), (2, 1)], &g(3, 2)).unwrap(), q(0, 1));
        assert_eq!(expect_xy_product(&[], &[(1, 0), (1, 1)], &g(3, 2)).unwrap(), q(0, 1));
        // The factorial denominator, not the plain block size.
        let v = expect_xy_product(&[1, 2], &[(1, 0), (2, 0), (3, 0)], &g(3, 2)).unwrap();
        assert_eq!(v, q(1, 48));
        assert_eq!(brute_xy(3, 2, &[1, 2], &[(1, 0), (2, 0), (3, 0)]), q(1, 48));
        assert!(expect_xy_product(&[3], &[], &g(3, 2)).is_err());
        assert!(expect_xy_product(&[], &[(1, 2)], &g(3, 2)).is_err());
    }

    #[test]
    fn xy_products_match_brute_force_exhaustively() {
        for (n, r) in [(3usize, 2u32), (3, 3), (4, 2)] {
            let all: Vec<_> = GroupIter::new(n, r).unwrap().collect();
            let brute = |xs: &[u32], ys: &[(u32, u32)]| {
                let hits = all
                    .iter()
                    .filter(|x| {
                        let d = descent_set(x, &TotalOrder::Descent);
                        xs.iter().all(|&a| d.contains(a)) && ys.iter().all(|&(i, c)| x.tau(i as usize) == c)
                    })
                    .count();
                q(hits as i64, all.len() as i64)
            };
            let domain = Domain::group(n, r).unwrap();
            for xmask in 0u32..(1 << (n - 1)) {
                let xs: Vec<u32> = (1..n as u32).filter(|i| xmask >> (i - 1) & 1 == 1).collect();
                // Up to two color factors at any positions.
                let mut ys_list: Vec<Vec<(u32, u32)>> = vec![vec![]];
                for i in 1..=n as u32 {
                    for c in 0..r {
                        ys_list.push(vec![(i, c)]);
                        for i2 in i..=n as u32 {
                            for c2 in 0..r {
                                ys_list.push(vec![(i, c), (i2, c2)]);
                            }
                        }
                    }
                }
                for ys in ys_list {
                    assert_eq!(expect_xy_product(&xs, &ys, &domain).unwrap(), brute(&xs, &ys), "{:?} {:?}", xs, ys);
                }
            }
        }
    }

    #[test]
    fn methods_agree() {
        for n in 1..=4usize {
            for r in 1..=3u32 {
                let domain = Domain::group(n, r).unwrap();
                for stat in [Statistic::Des, Statistic::Maj, Statistic::Col, Statistic::Fmaj, Statistic::X(n as u32)] {
                    let gf = gf_distribution(stat, &domain, DEFAULT_CAP).unwrap();
                    assert_eq!(gf.eval_at_one(), BigInt::from(domain.size()));
                    for k in 0..=3 {
                        let e = moment_enumerated(stat, &domain, k, DEFAULT_CAP).unwrap();
                        assert_eq!(moment_from_gf(&gf, k), e, "{} {} k={}", stat, domain, k);
                        assert_eq!(closed_form_moment(stat, &domain, k).unwrap(), e, "{} {} k={}", stat, domain, k);
                    }
                }
            }
        }
    }

    #[test]
    fn closed_form_on_qualifying_class() {
        let lambda = RPartition::single_cycle(5, 3, 2).unwrap();
        let domain = Domain::class(lambda);
        for stat in [Statistic::Des, Statistic::Maj, Statistic::Fmaj] {
            for k in 1..=2 {
                let cf = closed_form_moment(stat, &domain, k).unwrap();
                assert_eq!(cf, moment_enumerated(stat, &domain, k, DEFAULT_CAP).unwrap());
            }
        }
        assert!(closed_form_moment(Statistic::Des, &domain, 3).is_err());
    }

    #[test]
    fn des_mean_formula() {
        let domain = Domain::group(5, 3).unwrap();
        assert_eq!(moment_enumerated(Statistic::Des, &domain, 1, DEFAULT_CAP).unwrap(), q(5 * 3 + 3 - 2, 6));
        assert_eq!(closed_form_moment(Statistic::Des, &Domain::group(8, 3).unwrap(), 1).unwrap(), q(25, 6));
        assert_eq!(moment_enumerated(Statistic::Des, &domain, 0, DEFAULT_CAP).unwrap(), q(1, 1));
    }

    #[test]
    fn color_orbit_domain() {
        let domain = Domain::color_orbit(vec![0, 2, 1], 3).unwrap();
        let members: Vec<ColoredPermutation> = GroupIter::new(3, 3).unwrap().filter(|x| domain.contains(x)).collect();
        assert_eq!(members.len(), 6);
        let gf = gf_distribution(Statistic::Maj, &domain, DEFAULT_CAP).unwrap();
        assert_eq!(gf, QPolynomial::from_u64s(&[1, 2, 2, 1]));
        assert!(Domain::color_orbit(vec![3], 3).is_err());
    }

    #[test]
    fn cap_is_enforced() {
        let domain = Domain::group(5, 2).unwrap();
        assert!(matches!(moment_enumerated(Statistic::Des, &domain, 1, 100), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn eq1_and_eq2_small() {
        let r1 = verify_eq1(1, 1, 5, DEFAULT_CAP).unwrap();
        assert!(r1.passed);
        assert_eq!(r1.series[3], BigInt::from(4));
        assert!(verify_eq1(3, 2, 10, DEFAULT_CAP).unwrap().passed);
        let mut coeffs: Vec<BigInt> = verify_eq1(3, 2, 10, DEFAULT_CAP).unwrap().gf.coeffs().to_vec();
        coeffs[1] += 1;
        assert!(!eq1_check(&QPolynomial::new(coeffs), 3, 2, 10).passed);
        assert!(verify_eq1(3, 2, 2, DEFAULT_CAP).is_err());
        for r in 1..=3 {
            let rep = verify_eq2(1, r, DEFAULT_CAP).unwrap();
            assert!(rep.passed);
            assert_eq!(rep.gf, QPolynomial::q_integer(r));
        }
        let rep = verify_eq2(2, 2, DEFAULT_CAP).unwrap();
        assert_eq!(rep.gf, QPolynomial::from_u64s(&[1, 2, 2, 2, 1]));
        assert_eq!(fmaj_product(4, 3).eval_at_one(), BigInt::from(group_order(4, 3)));
    }

    #[test]
    fn theorem1_single_cycles() {
        for r in [2, 3] {
            for c in 0..r {
                let lambda = RPartition::single_cycle(5, r, c).unwrap();
                for stat in [Statistic::Des, Statistic::Fmaj, Statistic::Maj] {
                    assert!(verify_theorem1(&lambda, 2, stat, DEFAULT_CAP).unwrap().equal);
                }
            }
        }
        let id = RPartition::identity(4, 2).unwrap();
        assert!(matches!(verify_theorem1(&id, 1, Statistic::Des, DEFAULT_CAP), Err(Error::ShortCycles { .. })));
        let cmp = moment_comparison(&id, 1, Statistic::Des, DEFAULT_CAP).unwrap();
        assert!(!cmp.equal && !cmp.hypothesis_holds);
        assert_eq!(cmp.class_moment, q(0, 1));
        assert!(moment_comparison(&id, 1, Statistic::Col, DEFAULT_CAP).is_err());
    }

    #[test]
    fn sweep_matches_single_class_runs() {
        let sweep = theorem1_sweep(4, 2, 1, DEFAULT_CAP).unwrap();
        assert_eq!(sweep.len(), 3 * r_partitions(4, 2).unwrap().len());
        for cmp in &sweep {
            let single = moment_comparison(&cmp.cycle_type, 1, cmp.statistic, DEFAULT_CAP).unwrap();
            assert_eq!(&single, cmp);
            if cmp.hypothesis_holds {
                assert!(cmp.equal, "{:?}", cmp);
            }
        }
    }

    #[test]
    fn report_json() {
        let domain = Domain::group(3, 2).unwrap();
        let rep = moment_report(Statistic::Des, &domain, 1, Method::Enumeration, DEFAULT_CAP).unwrap();
        assert_eq!(rep.value, q(3, 2));
        let cf = moment_report(Statistic::Des, &domain, 1, Method::ClosedForm, DEFAULT_CAP).unwrap();
        assert_eq!(cf.value, rep.value);
        let json = serde_json::to_string(&rep).unwrap();
        assert!(json.contains("\"value\":\"3/2\""), "{}", json);
        assert!(json.contains("\"kind\":\"group\""), "{}", json);
        assert_eq!(serde_json::from_str::<MomentReport>(&json).unwrap(), rep);
        let class = Domain::class(RPartition::single_cycle(3, 2, 1).unwrap());
        let text = serde_json::to_string(&class).unwrap();
        assert_eq!(text, r#"{"kind":"class","cycle_type":[[],[3]]}"#);
        assert_eq!(serde_json::from_str::<Domain>(&text).unwrap(), class);
    }
}
