//! Subcommand implementations.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use colperm::asymptotics::{mc_class_sample, SampleSummary};
use colperm::blocks::{check_orbits, colored_descents_traced, Blocks};
use colperm::conjugacy::{enumerate_class, r_partitions, representative, RPartition};
use colperm::degree::{degree_check_with, SpanBasis};
use colperm::enumerate::{check_cap, group_order};
use colperm::moments::{
    domain_mean, expect_x_product_group, gf_distribution_with, moment_report, theorem1_sweep, verify_eq1, verify_eq2,
    Domain, Method, MomentReport,
};
use colperm::poly::QPolynomial;
use colperm::stats::{descent_set, Statistic};
use colperm::{ColoredPermutation, CycleDecomposition, TotalOrder};

use crate::args::*;
use crate::cache::Cache;
use crate::error::{CliError, CliResult, OK, VERIFICATION_FAILED};
use crate::report::{emit, Render, Request};

pub fn run(cli: &Cli) -> CliResult<(String, u8)> {
    let request = Request { command: &cli.command, cap: cli.cap.to_string() };
    let cap = cli.cap;
    let out = match &cli.command {
        Command::Dist(a) => emit(cli.format, &request, &dist(a, cap)?),
        Command::Moments(a) => emit(cli.format, &request, &moments(a, cap)?),
        Command::Verify(a) => emit(cli.format, &request, &verify(&a.target, cap)?),
        Command::Canonicalize(a) => emit(cli.format, &request, &canonicalize(a)?),
        Command::Sample(a) => emit(cli.format, &request, &sample(a)?),
        Command::Class(a) => emit(cli.format, &request, &class(a, cap)?),
    };
    Ok(out)
}

fn describe(domain: &Domain) -> String {
    match domain {
        Domain::Group { n, r } => format!("S_{{{},{}}}", n, r),
        Domain::Class { cycle_type } => format!("class {} of S_{{{},{}}}", cycle_type, cycle_type.n(), cycle_type.r()),
        Domain::ColorOrbit { colors, .. } => format!("color orbit {:?}", colors),
    }
}

#[derive(Serialize)]
struct DistResult {
    statistic: Statistic,
    order: OrderArg,
    domain: Domain,
    size: String,
    gf: QPolynomial,
}

impl Render for DistResult {
    fn text(&self) -> String {
        format!("{} on {} ({} elements)\ngf = {}\n", self.statistic, describe(&self.domain), self.size, self.gf)
    }

    fn csv(&self) -> String {
        let mut s = String::from("degree,coefficient\n");
        for (i, c) in self.gf.coeffs().iter().enumerate() {
            let _ = writeln!(s, "{},{}", i, c);
        }
        s
    }
}

fn dist(a: &DistArgs, cap: u128) -> CliResult<DistResult> {
    let domain = a.domain.resolve()?;
    a.stat.check(domain.n(), domain.r())?;
    let descriptor = json!({ "kind": "distribution", "statistic": a.stat, "order": a.order, "domain": domain });
    let cache = Cache::from_env();
    let gf = match cache.as_ref().and_then(|c| c.load::<QPolynomial>(&descriptor)) {
        Some(gf) => gf,
        None => {
            let gf = gf_distribution_with(a.stat, &domain, &a.order.total_order(), cap)?;
            if let Some(c) = &cache {
                c.store(&descriptor, &gf);
            }
            gf
        }
    };
    Ok(DistResult { statistic: a.stat, order: a.order, size: domain.size().to_string(), domain, gf })
}

#[derive(Serialize)]
struct MomentsResult {
    reports: Vec<MomentReport>,
    /// Methods that do not apply to this domain, with the reason.
    not_applicable: Vec<(Method, String)>,
    agree: bool,
}

impl Render for MomentsResult {
    fn text(&self) -> String {
        let mut s = String::new();
        for r in &self.reports {
            let _ = writeln!(s, "E[{}^{}] on {} = {} ({:?})", r.statistic, r.k, describe(&r.domain), r.value, r.method);
        }
        for (m, why) in &self.not_applicable {
            let _ = writeln!(s, "{:?} not applicable: {}", m, why);
        }
        let _ = writeln!(s, "methods agree: {}", self.agree);
        s
    }

    fn csv(&self) -> String {
        let mut s = String::from("statistic,k,method,value\n");
        for r in &self.reports {
            let method = serde_json::to_value(r.method).expect("method serializes");
            let _ = writeln!(s, "{},{},{},{}", r.statistic, r.k, method.as_str().unwrap_or_default(), r.value);
        }
        s
    }

    fn exit_status(&self) -> u8 {
        if self.agree {
            OK
        } else {
            VERIFICATION_FAILED
        }
    }
}

fn moments(a: &MomentsArgs, cap: u128) -> CliResult<MomentsResult> {
    let domain = a.domain.resolve()?;
    a.stat.check(domain.n(), domain.r())?;
    let methods = match a.method {
        MethodArg::ClosedForm => vec![Method::ClosedForm],
        MethodArg::Enumeration => vec![Method::Enumeration],
        MethodArg::GeneratingFunction => vec![Method::GeneratingFunction],
        MethodArg::All => vec![Method::ClosedForm, Method::Enumeration, Method::GeneratingFunction],
    };
    let mut reports = Vec::new();
    let mut not_applicable = Vec::new();
    for m in methods {
        match moment_report(a.stat, &domain, a.k, m, cap) {
            Ok(r) => reports.push(r),
            Err(e @ colperm::Error::FormulaNotApplicable(_)) if a.method == MethodArg::All => {
                not_applicable.push((m, e.to_string()))
            }
            Err(e) => return Err(e.into()),
        }
    }
    let agree = reports.windows(2).all(|w| w[0].value == w[1].value);
    Ok(MomentsResult { reports, not_applicable, agree })
}

/// One checked case: its label, whether it passed, and its exact values.
#[derive(Serialize)]
struct Instance {
    label: String,
    passed: bool,
    detail: Value,
}

#[derive(Serialize)]
struct VerifyResult {
    target: &'static str,
    passed: bool,
    checked: usize,
    failed: usize,
    /// Cases outside the hypothesis, with the reason.
    skipped: Vec<String>,
    instances: Vec<Instance>,
}

impl VerifyResult {
    fn new(target: &'static str, instances: Vec<Instance>, skipped: Vec<String>) -> Self {
        let failed = instances.iter().filter(|i| !i.passed).count();
        VerifyResult { target, passed: failed == 0, checked: instances.len(), failed, skipped, instances }
    }
}

impl Render for VerifyResult {
    fn text(&self) -> String {
        let mut s = String::new();
        for i in &self.instances {
            let _ = writeln!(s, "{} {}", if i.passed { "pass" } else { "FAIL" }, i.label);
        }
        for k in &self.skipped {
            let _ = writeln!(s, "skip {}", k);
        }
        let _ = writeln!(
            s,
            "{}: {} ({} checked, {} failed, {} skipped)",
            self.target,
            if self.passed { "pass" } else { "FAIL" },
            self.checked,
            self.failed,
            self.skipped.len()
        );
        s
    }

    fn csv(&self) -> String {
        let mut s = String::from("label,passed\n");
        for i in &self.instances {
            let _ = writeln!(s, "\"{}\",{}", i.label.replace('"', "\"\""), i.passed);
        }
        s
    }

    fn exit_status(&self) -> u8 {
        if self.passed {
            OK
        } else {
            VERIFICATION_FAILED
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn ratio_string(v: &colperm::BigRational) -> String {
    v.to_string()
}

fn subsets(n: u32, k: usize) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = vec![vec![]];
    for v in 1..=n {
        let grown: Vec<Vec<u32>> = out.iter().filter(|s| s.len() < k).map(|s| [s.as_slice(), &[v]].concat()).collect();
        out.extend(grown);
    }
    out.retain(|s| !s.is_empty());
    out.sort();
    out
}

fn verify(target: &VerifyTarget, cap: u128) -> CliResult<VerifyResult> {
    let mut instances = Vec::new();
    let mut skipped = Vec::new();
    let name = match target {
        VerifyTarget::Eq1(a) => {
            for n in 1..=a.n_max {
                for r in 1..=a.r_max {
                    let report = verify_eq1(n, r, a.truncation, cap)?;
                    instances.push(Instance { label: format!("S_{{{},{}}}", n, r), passed: report.passed, detail: to_value(&report) });
                }
            }
            "eq1"
        }
        VerifyTarget::Eq2(a) => {
            for n in 1..=a.n_max {
                for r in 1..=a.r_max {
                    let report = verify_eq2(n, r, cap)?;
                    instances.push(Instance { label: format!("S_{{{},{}}}", n, r), passed: report.passed, detail: to_value(&report) });
                }
            }
            "eq2"
        }
        VerifyTarget::Theorem1(a) => {
            for c in theorem1_sweep(a.n, a.r, a.k, cap)? {
                let label = format!("{} k={} class {}", c.statistic, c.k, c.cycle_type);
                if c.hypothesis_holds {
                    instances.push(Instance { label, passed: c.equal, detail: to_value(&c) });
                } else {
                    skipped.push(format!("{}: cycle of length {} ≤ {}", label, c.cycle_type.min_part(), 2 * a.k));
                }
            }
            "theorem1"
        }
        VerifyTarget::Lemmas(a) => {
            for n in 1..=a.n_max {
                for r in 1..=a.r_max {
                    let domain = Domain::group(n, r)?;
                    for s in subsets(n as u32, a.k_max) {
                        let closed = expect_x_product_group(&s, n, r)?;
                        let f = |x: &ColoredPermutation| {
                            s.iter().all(|&i| Statistic::X(i).eval(x, &TotalOrder::Descent) == 1) as i64
                        };
                        let enumerated = domain_mean(&domain, cap, f)?;
                        instances.push(Instance {
                            label: format!("E[X{:?}] on S_{{{},{}}}", s, n, r),
                            passed: closed == enumerated,
                            detail: json!({ "closed_form": ratio_string(&closed), "enumeration": ratio_string(&enumerated) }),
                        });
                    }
                }
            }
            "lemmas"
        }
        VerifyTarget::Degree(a) => {
            for n in 1..=a.n_max {
                for r in 1..=a.r_max {
                    let basis = SpanBasis::new(n, r, 2)?;
                    for stat in [Statistic::Des, Statistic::Maj, Statistic::Fmaj] {
                        let check = degree_check_with(&basis, &stat.to_string(), |x| stat.eval(x, &TotalOrder::Descent) as i64)?;
                        instances.push(Instance {
                            label: format!("{} on S_{{{},{}}} at m = 2", stat, n, r),
                            passed: check.in_span,
                            detail: to_value(&check),
                        });
                    }
                }
            }
            "degree"
        }
        VerifyTarget::Orbits(a) => {
            check_cap(u128::try_from(group_order(a.n, a.r)).ok(), cap)?;
            for lambda in r_partitions(a.n, a.r)? {
                let mut class: Option<Vec<ColoredPermutation>> = None;
                for indices in subsets(a.n as u32, a.k as usize) {
                    let label = format!("class {} indices {:?}", lambda, indices);
                    if !lambda.has_no_short_cycles(2 * indices.len() as u32) {
                        skipped.push(format!("{}: cycle of length {} ≤ {}", label, lambda.min_part(), 2 * indices.len()));
                        continue;
                    }
                    let elements = class.get_or_insert_with(|| enumerate_class(&lambda).collect());
                    let check = check_orbits(elements, &indices)?;
                    instances.push(Instance { label, passed: check.passed(), detail: to_value(&check) });
                }
            }
            "orbits"
        }
    };
    Ok(VerifyResult::new(name, instances, skipped))
}

#[derive(Serialize)]
struct CanonicalResult {
    input: String,
    indices: Vec<u32>,
    blocks: Blocks,
    result: String,
    result_cycles: String,
    descents: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<Vec<String>>,
}

impl Render for CanonicalResult {
    fn text(&self) -> String {
        let mut s = String::new();
        if let Some(trace) = &self.trace {
            for line in trace {
                let _ = writeln!(s, "{}", line);
            }
        }
        let _ = writeln!(s, "blocks: {}", self.blocks);
        let _ = writeln!(s, "result: {}", self.result);
        let _ = writeln!(s, "cycles: {}", self.result_cycles);
        let _ = writeln!(s, "descents: {:?}", self.descents);
        s
    }

    fn csv(&self) -> String {
        let mut s = String::from("stage,cycles\n");
        for (i, line) in self.trace.iter().flatten().enumerate() {
            let _ = writeln!(s, "{},{}", i, line);
        }
        let _ = writeln!(s, "result,{}", self.result_cycles);
        s
    }
}

fn canonicalize(a: &CanonicalizeArgs) -> CliResult<CanonicalResult> {
    let text = a.element.trim();
    let cycles = if text.starts_with('(') {
        CycleDecomposition::parse(text, a.r)?
    } else {
        ColoredPermutation::parse(text, a.r)?.to_cycles()
    };
    let trace = colored_descents_traced(&cycles, &a.indices)?;
    let result = &trace.result;
    Ok(CanonicalResult {
        input: text.to_string(),
        indices: a.indices.clone(),
        blocks: trace.blocks.clone(),
        result: result.to_string(),
        result_cycles: result.to_cycles().to_string(),
        descents: descent_set(result, &TotalOrder::Descent).positions,
        trace: a.trace.then(|| trace.render()),
    })
}

#[derive(Serialize)]
struct SampleResult {
    #[serde(flatten)]
    summary: SampleSummary,
    note: &'static str,
}

impl Render for SampleResult {
    fn text(&self) -> String {
        let s = &self.summary;
        let opt = |v: Option<f64>| v.map_or("n/a".to_string(), |x| format!("{:.6}", x));
        format!(
            "{} on class {} ({} draws, seed {})\nmean {:.6} (limit {}), variance {:.6} (limit {})\n\
             standardized mean {}, standardized variance {}\nks distance {:.6} (lattice {})\n{}\n",
            s.statistic,
            s.cycle_type,
            s.count,
            s.seed,
            s.mean,
            s.theoretical.mu,
            s.variance,
            s.theoretical.sigma_sq,
            opt(s.standardized_mean),
            opt(s.standardized_variance),
            s.ks_distance,
            opt(s.ks_distance_lattice),
            self.note
        )
    }

    fn csv(&self) -> String {
        self.summary.histogram_csv()
    }
}

fn sample(a: &SampleArgs) -> CliResult<SampleResult> {
    let lambda = RPartition::parse(&a.class, a.r)?;
    let summary = mc_class_sample(a.stat, &lambda, a.samples, a.seed)?;
    if let Some(path) = &a.plot_data {
        std::fs::write(path, summary.plot_data()).map_err(|source| CliError::Io { path: path.clone(), source })?;
    }
    Ok(SampleResult {
        summary,
        note: "KS thresholds are engineering choices; the limit theorems give no rate of convergence",
    })
}

#[derive(Serialize)]
struct ClassRow {
    cycle_type: RPartition,
    size: String,
}

#[derive(Serialize)]
#[serde(untagged)]
enum ClassResult {
    One {
        cycle_type: RPartition,
        size: String,
        centralizer_order: String,
        representative: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        elements: Option<Vec<String>>,
    },
    All {
        n: usize,
        r: u32,
        group_order: String,
        classes: Vec<ClassRow>,
    },
}

impl Render for ClassResult {
    fn text(&self) -> String {
        let mut s = String::new();
        match self {
            ClassResult::One { cycle_type, size, centralizer_order, representative, elements } => {
                let _ = writeln!(s, "class {}: {} elements, centralizer order {}", cycle_type, size, centralizer_order);
                let _ = writeln!(s, "representative: {}", representative);
                for e in elements.iter().flatten() {
                    let _ = writeln!(s, "{}", e);
                }
            }
            ClassResult::All { n, r, group_order, classes } => {
                for c in classes {
                    let _ = writeln!(s, "{}  {}", c.cycle_type, c.size);
                }
                let _ = writeln!(s, "{} classes, |S_{{{},{}}}| = {}", classes.len(), n, r, group_order);
            }
        }
        s
    }

    fn csv(&self) -> String {
        match self {
            ClassResult::One { elements, .. } => {
                let mut s = String::from("element\n");
                for e in elements.iter().flatten() {
                    let _ = writeln!(s, "{}", e);
                }
                s
            }
            ClassResult::All { classes, .. } => {
                let mut s = String::from("cycle_type,size\n");
                for c in classes {
                    let _ = writeln!(s, "\"{}\",{}", c.cycle_type, c.size);
                }
                s
            }
        }
    }
}

fn class(a: &ClassArgs, cap: u128) -> CliResult<ClassResult> {
    match &a.class {
        Some(text) => {
            let lambda = RPartition::parse(text, a.r)?;
            if a.n.is_some_and(|n| n != lambda.n()) {
                return Err(CliError::Input(format!("--n does not match class {} of size {}", lambda, lambda.n())));
            }
            let elements = if a.list {
                let limit = a.limit.map_or(u128::MAX, u128::from);
                check_cap(u128::try_from(lambda.class_size()).ok().map(|s| s.min(limit)), cap)?;
                Some(enumerate_class(&lambda).take(limit.min(usize::MAX as u128) as usize).map(|x| x.to_string()).collect())
            } else {
                None
            };
            Ok(ClassResult::One {
                size: lambda.class_size().to_string(),
                centralizer_order: lambda.centralizer_order().to_string(),
                representative: representative(&lambda).to_string(),
                cycle_type: lambda,
                elements,
            })
        }
        None => {
            let n = a.n.ok_or_else(|| CliError::Input("either --n or --class is required".into()))?;
            let classes = r_partitions(n, a.r)?
                .into_iter()
                .map(|l| ClassRow { size: l.class_size().to_string(), cycle_type: l })
                .collect();
            Ok(ClassResult::All { n, r: a.r, group_order: group_order(n, a.r).to_string(), classes })
        }
    }
}
