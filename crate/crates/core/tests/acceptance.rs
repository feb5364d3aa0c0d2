//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs with `cargo test -p colperm --test acceptance`. Pass criterion names
//! (`ac3`, `ac10`, …) as arguments to run a subset. A criterion whose failure is
//! mathematically forced is reported as FAIL together with the reason; only
//! unexplained failures make the process exit nonzero.

mod common;

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use colperm::asymptotics::{mc_class_sample, theoretical_moments};
use colperm::blocks::{check_orbits, colored_descents_traced};
use colperm::conjugacy::{enumerate_class, r_partitions, RPartition};
use colperm::degree::{degree_check_with, partial_permutations, satisfaction_prob_class, SpanBasis};
use colperm::enumerate::DEFAULT_CAP;
use colperm::moments::{
    expect_x_product_group, fmaj_product, gf_distribution, moment_comparison, theorem1_sweep, verify_eq1, Domain,
};
use colperm::stats::Statistic;
use colperm::{CycleDecomposition, TotalOrder};

use common::Raw;

struct Outcome {
    pass: bool,
    detail: String,
    /// Why a failure is forced by the mathematics rather than the code.
    explained: Option<String>,
}

impl Outcome {
    fn check(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into(), explained: None }
    }
}

fn ratio(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

/// gf(fmaj) equals `[r]_q [2r]_q ⋯ [nr]_q`.
fn ac1() -> Outcome {
    let mut cases: Vec<(usize, u32)> = (1..=6).flat_map(|n| (1..=3).map(move |r| (n, r))).collect();
    cases.push((7, 2));
    let bad: Vec<String> = cases
        .iter()
        .filter(|&&(n, r)| gf_distribution(Statistic::Fmaj, &Domain::group(n, r).unwrap(), DEFAULT_CAP).unwrap() != fmaj_product(n, r))
        .map(|(n, r)| format!("S_{{{},{}}}", n, r))
        .collect();
    Outcome::check(bad.is_empty(), format!("{} groups, mismatches: {:?}", cases.len(), bad))
}

/// gf(des)/(1-q)^{n+1} has coefficients `(ir+1)^n` through degree 30.
fn ac2() -> Outcome {
    let mut bad = Vec::new();
    let mut count = 0;
    for n in 1..=5 {
        for r in 1..=4 {
            count += 1;
            if !verify_eq1(n, r, 30, DEFAULT_CAP).unwrap().passed {
                bad.push(format!("S_{{{},{}}}", n, r));
            }
        }
    }
    Outcome::check(bad.is_empty(), format!("{} groups, mismatches: {:?}", count, bad))
}

fn theorem_grid() -> Vec<(usize, u32, u32)> {
    let mut grid = Vec::new();
    for n in [5, 6, 7] {
        for k in [1, 2] {
            grid.push((n, 2, k));
        }
    }
    grid.extend([(5, 3, 1), (6, 3, 1)]);
    grid
}

/// Class moments equal group moments for the listed statistics on classes
/// with every cycle longer than `2k`.
fn theorem_check(stats: &[Statistic]) -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for (n, r, k) in theorem_grid() {
        for c in theorem1_sweep(n, r, k, DEFAULT_CAP).unwrap() {
            if !c.hypothesis_holds || !stats.contains(&c.statistic) {
                continue;
            }
            checked += 1;
            if !c.equal {
                bad.push(format!("{} k={} class {}", c.statistic, k, c.cycle_type));
            }
        }
    }
    Outcome::check(bad.is_empty(), format!("{} qualifying (class, statistic, k) cases, mismatches: {:?}", checked, bad))
}

fn ac3() -> Outcome {
    theorem_check(&[Statistic::Des, Statistic::Fmaj])
}

/// For maj the comparison also includes `E_{S_n}[maj^k]`.
fn ac4() -> Outcome {
    theorem_check(&[Statistic::Maj])
}

/// Closed form for `E[X_{a_1}⋯X_{a_k}]` on the group against brute force.
fn ac5() -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for n in 1..=5usize {
        for r in 1..=3u32 {
            let group = common::group(n, r);
            let descent_sets: Vec<Vec<u32>> = group.iter().map(common::descents).collect();
            for subset in common::subsets(n as u32, 3) {
                let hits = descent_sets.iter().filter(|d| subset.iter().all(|a| d.contains(a))).count();
                let brute = ratio(hits as i64, group.len() as i64);
                checked += 1;
                if expect_x_product_group(&subset, n, r).unwrap() != brute {
                    bad.push(format!("S_{{{},{}}} {:?}", n, r, subset));
                }
            }
        }
    }
    Outcome::check(bad.is_empty(), format!("{} index sets, mismatches: {:?}", checked, bad))
}

/// Orbit sizes, unique descent representative, and the worked trace.
fn ac6() -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for n in [5usize, 6] {
        for lambda in r_partitions(n, 2).unwrap() {
            let class: Vec<_> = enumerate_class(&lambda).collect();
            for indices in common::subsets(n as u32, 2) {
                if !lambda.has_no_short_cycles(2 * indices.len() as u32) {
                    continue;
                }
                checked += 1;
                let check = check_orbits(&class, &indices).unwrap();
                if !check.passed() {
                    bad.push(format!("n={} {} {:?}", n, lambda, indices));
                }
            }
        }
    }
    let start = CycleDecomposition::parse("(1^0 2^1 8^2 6^2 3^0 7^0 4^1 9^0 5^2)", 3).unwrap();
    let trace = colored_descents_traced(&start, &[1, 2, 4, 5]).unwrap().render();
    let displays = [
        "(1^0 1^1 8^2 4^2 1^0 7^0 4^1 9^0 4^2)",
        "(1^0 1^1 8^2 5^2 1^0 7^0 4^1 9^0 5^2)",
        "(2^0 1^1 8^2 5^2 3^0 7^0 4^1 9^0 5^2)",
        "(2^0 1^1 8^2 5^2 3^0 7^0 4^1 9^0 6^2)",
    ];
    let trace_ok = trace == displays;
    if !trace_ok {
        bad.push(format!("worked example trace {:?}", trace));
    }
    Outcome::check(bad.is_empty(), format!("{} (class, index set) cases, worked trace {}, failures: {:?}", checked, if trace_ok { "matches" } else { "differs" }, bad))
}

/// Class probabilities of size ≤ 2 constraints on single-cycle classes.
///
/// Constraints whose arcs close a cycle cannot be met in a class without
/// short cycles; those are checked to have probability 0.
fn ac7() -> Outcome {
    let mut open = 0;
    let mut closed = 0;
    let mut bad = Vec::new();
    for r in [2u32, 3] {
        let n = 5usize;
        for color in 0..r {
            let lambda = RPartition::single_cycle(n, r, color).unwrap();
            let class: Vec<Raw> = enumerate_class(&lambda).map(|x| Raw::from_perm(&x)).collect();
            for m in 0..=2 {
                let formula = (1..=m).fold(BigRational::one(), |acc, t| acc / ratio(((n - t) as i64) * r as i64, 1));
                for p in partial_permutations(n, r, m) {
                    let hits = class
                        .iter()
                        .filter(|x| p.pairs().iter().all(|&(i, j, c)| x.omega[i as usize - 1] == j && x.tau[i as usize - 1] == c))
                        .count();
                    let prob = ratio(hits as i64, class.len() as i64);
                    let expected = if p.has_closed_cycle() {
                        closed += 1;
                        BigRational::zero()
                    } else {
                        open += 1;
                        formula.clone()
                    };
                    if prob != expected || satisfaction_prob_class(&p, &lambda).unwrap() != expected {
                        bad.push(format!("r={} color={} {}", r, color, p));
                    }
                }
            }
        }
    }
    Outcome::check(
        bad.is_empty(),
        format!("{} constraints at the formula, {} closing a cycle at 0, mismatches: {:?}", open, closed, bad),
    )
}

/// Span membership for des, maj, fmaj at `m = 2` and for indicator products.
fn ac8() -> Outcome {
    let order = TotalOrder::Descent;
    let mut checked = 0;
    let mut bad = Vec::new();
    for n in 1..=4usize {
        for r in 1..=3u32 {
            let bases: Vec<SpanBasis> = (0..=n).map(|m| SpanBasis::new(n, r, m).unwrap()).collect();
            let basis = |m: usize| &bases[m.min(n)];
            for stat in [Statistic::Des, Statistic::Maj, Statistic::Fmaj] {
                checked += 1;
                if !degree_check_with(basis(2), &stat.to_string(), |x| stat.eval(x, &order) as i64).unwrap().in_span {
                    bad.push(format!("{} on S_{{{},{}}}", stat, n, r));
                }
            }
            let ys: Vec<(u32, u32)> = (1..=n as u32).flat_map(|i| (0..r).map(move |c| (i, c))).collect();
            let mut y_sets: Vec<Vec<(u32, u32)>> = vec![vec![]];
            for (s, &a) in ys.iter().enumerate() {
                y_sets.push(vec![a]);
                for &b in &ys[s + 1..] {
                    if a.0 != b.0 {
                        y_sets.push(vec![a, b]);
                    }
                }
            }
            for xs in common::subsets(n as u32 - 1, 2) {
                let ess: Vec<u32> = xs.iter().flat_map(|&a| [a, a + 1]).collect();
                for y in &y_sets {
                    let j = xs.len();
                    let k = j + y.len();
                    if k == 0 {
                        continue;
                    }
                    let mut products = vec![y.clone()];
                    // Z·Y_{i,c} for i in the essential set keeps the bound j + k.
                    for &i in &ess {
                        for c in 0..r {
                            if y.len() < 2 {
                                products.push([y.as_slice(), &[(i, c)]].concat());
                            }
                        }
                    }
                    for ys in products {
                        let f = |x: &colperm::ColoredPermutation| {
                            let on = xs.iter().all(|&a| Statistic::X(a).eval(x, &order) == 1)
                                && ys.iter().all(|&(i, c)| Statistic::Y(i, c).eval(x, &order) == 1);
                            on as i64
                        };
                        checked += 1;
                        if !degree_check_with(basis(j + k), "product", f).unwrap().in_span {
                            bad.push(format!("X{:?} Y{:?} on S_{{{},{}}}", xs, ys, n, r));
                        }
                    }
                }
            }
        }
    }
    Outcome::check(bad.is_empty(), format!("{} span checks, failures: {:?}", checked, bad))
}

/// Enumerated mean and variance against the limit-theorem formulas.
fn ac9() -> Outcome {
    let mut checked = 0;
    let mut bad: Vec<(Statistic, usize, u32, String)> = Vec::new();
    for n in 1..=5usize {
        for r in 1..=3u32 {
            let group = common::group(n, r);
            let size = group.len() as i64;
            for (stat, f) in [
                (Statistic::Des, common::des as fn(&Raw) -> i64),
                (Statistic::Maj, common::maj),
                (Statistic::Fmaj, common::fmaj),
            ] {
                let (s1, s2) = group.iter().map(f).fold((0i64, 0i64), |(a, b), v| (a + v, b + v * v));
                let mean = ratio(s1, size);
                let var = ratio(s2, size) - &mean * &mean;
                let t = theoretical_moments(stat, n, r).unwrap();
                checked += 1;
                if mean != t.mu || var != t.sigma_sq {
                    bad.push((stat, n, r, format!("{} S_{{{},{}}}: mean {} vs {}, variance {} vs {}", stat, n, r, mean, t.mu, var, t.sigma_sq)));
                }
            }
        }
    }
    let detail = format!("{} (statistic, n, r) cases, mismatches: {:?}", checked, bad.iter().map(|b| &b.3).collect::<Vec<_>>());
    let only_des_n1 = !bad.is_empty() && bad.iter().all(|(s, n, _, _)| *s == Statistic::Des && *n == 1);
    Outcome {
        pass: bad.is_empty(),
        detail,
        explained: only_des_n1.then(|| {
            "on S_{1,r} des is the indicator of τ(1) ≠ 0 with variance (r-1)/r², not 2/12; the variance formula holds from n = 2".to_string()
        }),
    }
}

/// Monte-Carlo normality on single-cycle classes.
fn ac10() -> Outcome {
    const N: u64 = 200_000;
    const SEED: u64 = 20_240_601;
    let tol_mean = 4.0 / (N as f64).sqrt();
    let tol_var = 10.0 / (N as f64).sqrt();
    let mut bad = Vec::new();
    let mut notes = Vec::new();
    for r in [2u32, 3] {
        for stat in [Statistic::Des, Statistic::Fmaj] {
            let mut ks = Vec::new();
            for n in [20usize, 60] {
                let lambda = RPartition::single_cycle(n, r, 0).unwrap();
                let s = mc_class_sample(stat, &lambda, N, SEED).unwrap();
                let zm = s.standardized_mean.unwrap();
                let zv = s.standardized_variance.unwrap();
                if zm.abs() >= tol_mean || (zv - 1.0).abs() >= tol_var {
                    bad.push(format!("{} n={} r={}: mean {:.5}, variance {:.5}", stat, n, r, zm, zv));
                }
                ks.push(s.ks_distance);
            }
            notes.push(format!("{} r={} ks(20)={:.4} ks(60)={:.4}", stat, r, ks[0], ks[1]));
            if ks[1] >= 0.05 {
                bad.push(format!("{} r={} ks(60) = {:.4}", stat, r, ks[1]));
            }
            if ks[1] >= ks[0] {
                bad.push(format!("{} r={} ks(60) >= ks(20)", stat, r));
            }
        }
    }
    Outcome::check(bad.is_empty(), format!("{}; failures: {:?}", notes.join(", "), bad))
}

/// The identity class violates the hypothesis and the harness sees it.
fn ac11() -> Outcome {
    let id = RPartition::identity(5, 2).unwrap();
    let c = moment_comparison(&id, 1, Statistic::Des, DEFAULT_CAP).unwrap();
    let pass = !c.hypothesis_holds && !c.equal && c.class_moment.is_zero() && !c.group_moment.is_zero();
    Outcome::check(pass, format!("E_C[des] = {}, E_S[des] = {}, detected inequality: {}", c.class_moment, c.group_moment, !c.equal))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("ac1", ac1),
        ("ac2", ac2),
        ("ac3", ac3),
        ("ac4", ac4),
        ("ac5", ac5),
        ("ac6", ac6),
        ("ac7", ac7),
        ("ac8", ac8),
        ("ac9", ac9),
        ("ac10", ac10),
        ("ac11", ac11),
    ];
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).map(|a| a.to_lowercase()).collect();
    let mut unexplained = 0;
    for (name, run) in criteria {
        if !filters.is_empty() && !filters.iter().any(|f| f == name) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        let verdict = if outcome.pass { "PASS" } else { "FAIL" };
        println!("{:<5} {} ({:.1}s) {}", name.to_uppercase(), verdict, secs, outcome.detail);
        if !outcome.pass {
            match &outcome.explained {
                Some(why) => println!("      expected failure: {}", why),
                None => unexplained += 1,
            }
        }
    }
    if unexplained > 0 {
        eprintln!("{} criteria failed without explanation", unexplained);
        std::process::exit(1);
    }
}
