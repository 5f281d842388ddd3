//! Acceptance criteria, one PASS/FAIL line each. Quantities that have a
//! direct formula are recomputed here from scratch rather than taken from
//! the library.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tailspace::codes::{macwilliams_tail, LinearCode};
use tailspace::constructions::{balanced_coding_tribes, coding_tribes, harper_witness, tribes};
use tailspace::influence::{max_pivotal_probability, total_pivotal};
use tailspace::verify::{
    check_kkl_ratio, check_stroock_varopoulos, check_tail_contraction, check_weak_stroock_varopoulos,
    extremal_two_point, kappa, run_sweep, CheckId, CheckReport, SweepConfig, SweepOutcome,
};
use tailspace::markov::{FiniteSpace, MarkovOperator};
use tailspace::{fwht, heat, inverse_fwht, tail_certificate, CubeFunction, Dyadic};

struct Verdict {
    ok: bool,
    detail: String,
}

impl Verdict {
    fn new() -> Self {
        Verdict { ok: true, detail: String::new() }
    }

    fn require(&mut self, cond: bool, what: impl Into<String>) {
        if !cond {
            self.ok = false;
            if !self.detail.is_empty() {
                self.detail.push_str("; ");
            }
            self.detail.push_str(&what.into());
        }
    }

    fn info(&mut self, what: impl Into<String>) {
        if self.ok {
            if !self.detail.is_empty() {
                self.detail.push_str("; ");
            }
            self.detail.push_str(&what.into());
        }
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn chi(j: usize, s: usize) -> f64 {
    if (j & s).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn naive_coefficients(values: &[f64]) -> Vec<f64> {
    let len = values.len();
    (0..len)
        .map(|s| values.iter().enumerate().map(|(j, v)| v * chi(j, s)).sum::<f64>() / len as f64)
        .collect()
}

/// `P_t f(x) = Σ_y Π_i k_t(x_i, y_i) f(y)` with the one-bit kernel.
fn naive_heat(values: &[f64], n: usize, t: f64) -> Vec<f64> {
    let same = (1.0 + (-t).exp()) / 2.0;
    let diff = (1.0 - (-t).exp()) / 2.0;
    (0..values.len())
        .map(|x| {
            values
                .iter()
                .enumerate()
                .map(|(y, v)| {
                    let d = (x ^ y).count_ones() as i32;
                    same.powi(n as i32 - d) * diff.powi(d) * v
                })
                .sum()
        })
        .collect()
}

fn lp(values: &[f64], p: f64) -> f64 {
    (values.iter().map(|v| v.abs().powf(p)).sum::<f64>() / values.len() as f64).powf(1.0 / p)
}

/// `inf_{u>1} (u^s + u^{-s}) / (u - 1/u)` by a log-grid scan and local
/// refinement.
fn kappa_oracle(p: f64) -> f64 {
    let s = p / (p - 2.0);
    let obj = |y: f64| {
        let u = y.exp();
        (u.powf(s) + u.powf(-s)) / (u - 1.0 / u)
    };
    let (mut best_y, mut best) = (0.0, f64::INFINITY);
    for i in 1..=20_000 {
        let y = i as f64 * 1e-3;
        let v = obj(y);
        if v < best {
            best = v;
            best_y = y;
        }
    }
    let (mut lo, mut hi) = (best_y - 1e-3, best_y + 1e-3);
    for _ in 0..200 {
        let a = lo + (hi - lo) / 3.0;
        let b = hi - (hi - lo) / 3.0;
        if obj(a) < obj(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    obj((lo + hi) / 2.0)
}

fn sweep(check: CheckId, cfg: &SweepConfig) -> SweepOutcome {
    run_sweep(check, cfg).unwrap_or_else(|e| panic!("{check}: {e}"))
}

fn summarize(v: &mut Verdict, o: &SweepOutcome) {
    v.require(o.passed(), format!("{} has {} violations", o.check_id, o.violations));
    let worst = o.worst.as_ref().map_or(f64::NAN, |r| r.slack);
    v.info(format!("{} {} reports worst_slack={worst:.3e}", o.check_id, o.total));
}

fn reports_named<'a>(o: &'a SweepOutcome, id: &'a str) -> impl Iterator<Item = &'a CheckReport> {
    o.reports.iter().filter(move |r| r.check_id == id)
}

fn timed(v: &mut Verdict, limit: Duration, elapsed: Duration) {
    let secs = elapsed.as_secs_f64();
    if cfg!(debug_assertions) {
        v.info(format!("{secs:.2}s unoptimized, limit {}s applies to release", limit.as_secs()));
    } else {
        v.require(elapsed < limit, format!("took {secs:.2}s, limit {}s", limit.as_secs()));
        v.info(format!("{secs:.2}s"));
    }
}

fn fwht_correctness() -> Verdict {
    let mut v = Verdict::new();
    let start = Instant::now();
    let mut r = rng(1);
    let (mut max_err, mut max_round, mut max_parseval) = (0.0f64, 0.0f64, 0.0f64);
    for n in 1..=8 {
        for _ in 0..100 {
            let values: Vec<f64> = (0..1usize << n).map(|_| r.gen_range(-1.0..1.0)).collect();
            let f = CubeFunction::real(n, values.clone()).unwrap();
            let spectrum = fwht(&f);
            let oracle = naive_coefficients(&values);
            for (a, b) in spectrum.coeffs().iter().zip(&oracle) {
                max_err = max_err.max((a - b).abs());
            }
            let back = inverse_fwht(&spectrum);
            for (a, b) in back.values().iter().zip(&values) {
                max_round = max_round.max((a - b).abs());
            }
            let second = values.iter().map(|x| x * x).sum::<f64>() / values.len() as f64;
            max_parseval = max_parseval.max((spectrum.energy() - second).abs());
        }
    }
    v.require(max_err < 1e-12, format!("max error vs naive {max_err:e}"));
    v.require(max_round < 1e-12, format!("round trip error {max_round:e}"));
    v.require(max_parseval < 1e-12, format!("Parseval error {max_parseval:e}"));
    v.info(format!("800 functions max_err={max_err:.1e} round_trip={max_round:.1e} parseval={max_parseval:.1e}"));
    timed(&mut v, Duration::from_secs(5), start.elapsed());
    v
}

fn heat_smoothing() -> Verdict {
    let mut v = Verdict::new();
    let start = Instant::now();
    let o = sweep(CheckId::HeatSmoothing, &SweepConfig::default());
    let elapsed = start.elapsed();
    summarize(&mut v, &o);
    for mode in ["base", "kappa"] {
        let n = reports_named(&o, "heat-smoothing")
            .filter(|r| r.params.get("mode").and_then(|m| m.as_str()) == Some(mode))
            .count();
        v.require(n > 0, format!("no {mode}-mode reports"));
    }
    let ps: std::collections::BTreeSet<String> = reports_named(&o, "heat-smoothing")
        .map(|r| r.params["p"].to_string())
        .collect();
    v.require(ps.len() == 6, format!("p grid has {} values", ps.len()));
    let eq = reports_named(&o, "heat-smoothing-equality").collect::<Vec<_>>();
    v.require(!eq.is_empty() && eq.iter().all(|r| r.pass && r.tol <= 1e-12), "dictator equality at p = 2");
    // dictator at p = 2 through the naive kernel
    for n in 1..=4 {
        let d = CubeFunction::dictator(n, 1).unwrap();
        for t in [0.01, 0.1, 0.5, 1.0, 2.0] {
            let evolved = naive_heat(d.values(), n, t);
            let err = (lp(&evolved, 2.0) - (-t).exp()).abs();
            v.require(err < 1e-12, format!("naive dictator norm off by {err:e} at n={n} t={t}"));
            let lib = heat(&d, t).unwrap();
            let diff = lib.values().iter().zip(&evolved).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            v.require(diff < 1e-12, format!("heat differs from naive kernel by {diff:e}"));
        }
    }
    timed(&mut v, Duration::from_secs(60), elapsed);
    v
}

fn lp_poincare() -> Verdict {
    let mut v = Verdict::new();
    let o = sweep(CheckId::LpPoincare, &SweepConfig::default());
    summarize(&mut v, &o);
    v.require(reports_named(&o, "lp-poincare-edge").count() > 0, "no edge-form reports");
    v
}

fn kappa_values() -> Verdict {
    let mut v = Verdict::new();
    let k4 = kappa(4.0).unwrap().value;
    let k6 = kappa(6.0).unwrap().value;
    v.require((k4 - 8f64.sqrt()).abs() < 1e-9, format!("kappa(4) = {k4}"));
    v.require((k6 - 2.0).abs() < 1e-9, format!("kappa(6) = {k6}"));
    let grid = [1.1, 1.25, 1.5, 1.75, 2.5, 3.0, 4.0, 5.0, 6.0, 8.0];
    let mut worst_dual = 0.0f64;
    let mut worst_oracle = 0.0f64;
    for p in grid {
        let k = kappa(p).unwrap().value;
        let kd = kappa(p / (p - 1.0)).unwrap().value;
        worst_dual = worst_dual.max((k - kd).abs());
        worst_oracle = worst_oracle.max((k - kappa_oracle(p)).abs());
        let s = (p / (p - 2.0)).abs();
        v.require(k >= s - 1e-12, format!("kappa({p}) = {k} below |s| = {s}"));
        let sq = ((p * p + 4.0 * p - 4.0) / (p * p - 4.0 * p + 4.0)).sqrt();
        v.require(k >= sq - 1e-12, format!("kappa({p}) = {k} below sqrt bound {sq}"));
    }
    v.require(worst_dual < 1e-9, format!("duality error {worst_dual:e}"));
    v.require(worst_oracle < 1e-9, format!("grid-scan oracle differs by {worst_oracle:e}"));
    v.info(format!("kappa(4)={k4:.12} kappa(6)={k6:.12} duality_err={worst_dual:.1e} oracle_err={worst_oracle:.1e}"));
    let o = sweep(CheckId::Kappa, &SweepConfig::default());
    summarize(&mut v, &o);
    v
}

fn extremal() -> Verdict {
    let mut v = Verdict::new();
    for p in [1.5, 3.0, 4.0, 6.0] {
        let e = extremal_two_point(p, 1.0).unwrap();
        // recompute both sides from the atoms
        let k = e.kappa.value;
        let (a, b) = (e.alpha, e.beta);
        let plus = a * b.powf(p / 2.0);
        let minus = b * a.powf(p / 2.0);
        let lhs = (k * k + 1.0) * (plus - minus).powi(2);
        let rhs = a * b.powf(p) + b * a.powf(p);
        let rel = (lhs - rhs).abs() / rhs;
        v.require(rel < 1e-8, format!("two-point equality at p={p} off by {rel:e}"));
        for r in &e.reports {
            v.require(r.pass && r.tol <= 1e-8, format!("{} at p={p}: slack {:e}", r.check_id, r.slack));
        }
    }
    let o = sweep(CheckId::Extremal, &SweepConfig::default());
    summarize(&mut v, &o);
    v
}

fn scalar_and_operator_sweeps() -> Verdict {
    let mut v = Verdict::new();
    let cfg = SweepConfig::default();
    for check in [
        CheckId::SplitMoments,
        CheckId::SplitPointwise,
        CheckId::MomentGap,
        CheckId::StroockVaropoulos,
        CheckId::WeakStroockVaropoulos,
        CheckId::SemigroupIncrement,
    ] {
        let o = sweep(check, &cfg);
        v.require(o.total >= 1000, format!("{check} ran only {} instances", o.total));
        summarize(&mut v, &o);
    }
    let mut r = rng(6);
    for _ in 0..100 {
        let (a, b) = (r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0));
        let rep = check_stroock_varopoulos(a, b, 2.0).unwrap();
        v.require((rep.lhs - rep.rhs).abs() <= 1e-12, format!("p = 2 pointwise at ({a}, {b}): {:e}", rep.lhs - rep.rhs));
    }
    let space = FiniteSpace::new(vec![0.1, 0.2, 0.3, 0.4], None, None).unwrap();
    let id = MarkovOperator::identity(space);
    for p in [1.1, 1.5, 3.0, 4.0] {
        let f: Vec<f64> = (0..4).map(|_| r.gen_range(-2.0..2.0)).collect();
        let rep = check_weak_stroock_varopoulos(&id, &f, p).unwrap();
        v.require((rep.lhs - rep.rhs).abs() <= 1e-12, format!("identity operator at p={p}: {:e}", rep.lhs - rep.rhs));
    }
    v
}

fn tail_contraction() -> Verdict {
    let mut v = Verdict::new();
    for n in 2..=6 {
        for k in 1..=n.min(3) {
            let w = CubeFunction::character(n, (1 << k) - 1).unwrap();
            for t in [0.01, 0.5, 2.0] {
                let r = check_tail_contraction(&w, k, 2.0, t).unwrap();
                v.require((r.lhs - r.rhs).abs() <= 1e-12, format!("eigenfunction n={n} k={k} t={t}: {:e}", r.lhs - r.rhs));
            }
        }
    }
    let o = sweep(CheckId::TailContraction, &SweepConfig::default());
    summarize(&mut v, &o);
    v
}

fn nazarov() -> Verdict {
    let mut v = Verdict::new();
    let cfg = SweepConfig {
        trials: 200,
        states_max: 8,
        p_grid: Some(vec![1.5, 2.0, 3.0, 5.0]),
        ..SweepConfig::default()
    };
    let o = sweep(CheckId::Nazarov, &cfg);
    summarize(&mut v, &o);
    let ext = o.reports.iter().filter(|r| r.check_id != "nazarov" && r.check_id != "nazarov-equality").count();
    v.require(ext > 0, "no operator-norm reports");
    v.info(format!("{ext} operator-norm reports"));
    v
}

fn talagrand() -> Verdict {
    let mut v = Verdict::new();
    let cfg = SweepConfig {
        trials: 500,
        n_max: 8,
        k_max: 3,
        ..SweepConfig::default()
    };
    let o = sweep(CheckId::Talagrand, &cfg);
    summarize(&mut v, &o);
    let closed = o.reports.iter().filter(|r| !r.params.contains_key("trial")).count();
    v.require(closed >= 32, format!("only {closed} closed-case reports"));
    let h = sweep(CheckId::Hypercontractivity, &SweepConfig::default());
    summarize(&mut v, &h);
    v
}

fn random_code(r: &mut ChaCha8Rng) -> LinearCode {
    let length = r.gen_range(1..=12);
    let rows = r.gen_range(0..=4usize.min(length));
    let gens: Vec<u32> = (0..rows).map(|_| r.gen_range(0..1u32 << length)).collect();
    LinearCode::new(length, &gens).unwrap()
}

fn coding_tribes_exactness() -> Verdict {
    let mut v = Verdict::new();
    let block = LinearCode::extended_hamming();
    // 24 bits hold three blocks of length 8
    let rec = coding_tribes(&block, 3).unwrap();
    let f = &rec.function;
    let p1 = Dyadic::pow2_neg(4);
    // P[f = -1] = (1 - p)^b, so E f = 1 - 2(1 - p)^b
    let miss = (&Dyadic::one() - &p1).pow(3);
    let mean_formula = &Dyadic::one() - &miss.mul_pow2(1);
    let mean = f.exact_mean().unwrap();
    v.require(mean == mean_formula, format!("mean {mean} vs formula {mean_formula}"));
    let max_piv = max_pivotal_probability(f).unwrap();
    v.require(max_piv <= p1.mul_pow2(1), format!("max pivotal {max_piv} above 2 P[g = 1]"));
    v.require(rec.all_hold(), "a recorded claim fails");
    v.info(format!("n={} mean={mean} max_pivotal={max_piv}", f.n()));

    let mut r = rng(10);
    let mut disagreements = 0;
    let mut comparisons = 0;
    for _ in 0..200 {
        let code = random_code(&mut r);
        let g = code.indicator01().unwrap();
        for k in 0..=code.length() {
            let by_dual = macwilliams_tail(&code, k).unwrap();
            let cert = tail_certificate(&g, k, false).unwrap();
            comparisons += 1;
            if by_dual != cert.member || !cert.exact {
                disagreements += 1;
            }
        }
    }
    v.require(disagreements == 0, format!("{disagreements} disagreements"));
    v.info(format!("200 codes, {comparisons} (code, k) pairs, 0 disagreements"));
    v
}

fn metric_f64(rec: &tailspace::constructions::ConstructionRecord, key: &str) -> f64 {
    rec.metrics[key].as_f64().unwrap_or_else(|| panic!("metric {key}"))
}

fn harper() -> Verdict {
    let mut v = Verdict::new();
    for m in [2, 3] {
        let rec = harper_witness(m, 0).unwrap();
        let f = &rec.function;
        let mean = f.exact_mean().unwrap().to_f64();
        let ratio = total_pivotal(f).unwrap().to_f64() / (mean * (1.0 / mean).log2());
        let gamma = metric_f64(&rec, "gamma");
        v.require(ratio <= gamma + 1e-12, format!("m={m}: ratio {ratio} above gamma {gamma}"));
        // exact membership at the level fixed by the code weight
        let k = rec.codes["code"].min_weight().unwrap().unwrap() as usize - 1;
        let cert = tail_certificate(f, k, false).unwrap();
        v.require(cert.exact && cert.member && k >= m as usize, format!("m={m}: not in the tail at k={k}"));
        v.info(format!("m={m} n={} ratio={ratio:.4} gamma={gamma} k={k}", f.n()));
    }
    v
}

fn balanced() -> Verdict {
    let mut v = Verdict::new();
    let rec = balanced_coding_tribes(3, 0).unwrap();
    let g = &rec.function;
    let n = g.n();
    v.require(n <= 24, format!("{n} bits"));
    v.require(g.values().iter().all(|&x| x == 1.0 || x == -1.0), "value outside {-1, 1}");
    let plus = g.values().iter().filter(|&&x| x == 1.0).count();
    v.require(2 * plus == g.len(), format!("{plus} of {} points are +1", g.len()));
    // smallest degree carrying weight, from the naive per-set sums
    let k_claim = rec.metrics["tail_k"].as_u64().unwrap() as usize;
    let cert = tail_certificate(g, k_claim, true).unwrap();
    v.require(k_claim >= 1 && cert.exact && cert.member, format!("tail k = {k_claim} not certified"));
    let max_piv = max_pivotal_probability(g).unwrap().to_f64();
    let c = metric_f64(&rec, "c_bound");
    let bound = c * (n as f64).ln() / n as f64;
    v.require(max_piv <= bound + 1e-12, format!("max pivotal {max_piv} above {bound}"));
    v.info(format!("n={n} k={k_claim} max_pivotal={max_piv:.5} bound={bound:.5}"));

    // coding tribes against plain tribes of the same size
    for (b, tb, tr) in [(2, 7, 2), (3, 7, 3)] {
        let ct = coding_tribes(&LinearCode::hamming(), b).unwrap();
        let plain = tribes(tb, tr).unwrap();
        assert_eq!(ct.function.n(), plain.n());
        let a = check_kkl_ratio(&ct.function).unwrap().ratio();
        let t = check_kkl_ratio(&plain).unwrap().ratio();
        let factor = (a / t).max(t / a);
        v.require(factor <= 4.0, format!("n={}: KKL ratios {a:.3} vs {t:.3}", plain.n()));
        v.info(format!("n={} kkl coding={a:.3} tribes={t:.3}", plain.n()));
    }
    v
}

fn run_cli(args: &[&str], cwd: &Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_tailspace"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("spawn tailspace")
}

fn determinism() -> Verdict {
    let mut v = Verdict::new();
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    for (threads, out) in [("1", "a"), ("4", "b")] {
        let o = run_cli(&["--threads", threads, "sweep", "--trials", "100", "--out-dir", out], root);
        v.require(o.status.success(), format!("sweep with {threads} threads exited {:?}", o.status.code()));
        let o = run_cli(
            &["--threads", threads, "construct", "balanced", "--m", "3", "--seed", "5", "--out", &format!("{out}.json")],
            root,
        );
        v.require(o.status.success(), format!("construct exited {:?}", o.status.code()));
    }
    let mut files = 0;
    for entry in std::fs::read_dir(root.join("a")).unwrap() {
        let name = entry.unwrap().file_name();
        if name == "manifest.json" {
            continue;
        }
        files += 1;
        let a = std::fs::read(root.join("a").join(&name)).unwrap();
        let b = std::fs::read(root.join("b").join(&name)).unwrap_or_default();
        v.require(a == b, format!("{} differs across thread counts", name.to_string_lossy()));
    }
    let a = std::fs::read(root.join("a.json")).unwrap();
    let b = std::fs::read(root.join("b.json")).unwrap();
    v.require(a == b, "construction record differs");
    for manifest in ["a/manifest.json", "a.json.manifest.json"] {
        let o = run_cli(&["rerun", manifest], root);
        let stdout = String::from_utf8_lossy(&o.stdout);
        let line = stdout.lines().find(|l| l.starts_with("reproduced")).unwrap_or("").to_string();
        v.require(o.status.success(), format!("rerun {manifest}: {line}"));
        v.info(format!("{manifest}: {line}"));
    }
    v.info(format!("{files} sweep files identical at 1 and 4 threads"));
    v
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() {
    // accept and ignore libtest flags such as --nocapture
    let filter: Option<String> = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let criteria: [Criterion; 13] = [
        ("fwht-correctness", fwht_correctness),
        ("heat-smoothing", heat_smoothing),
        ("lp-poincare", lp_poincare),
        ("kappa", kappa_values),
        ("extremal", extremal),
        ("scalar-and-operator-inequalities", scalar_and_operator_sweeps),
        ("tail-contraction", tail_contraction),
        ("nazarov", nazarov),
        ("talagrand-and-hypercontractivity", talagrand),
        ("coding-tribes-exactness", coding_tribes_exactness),
        ("harper-witness", harper),
        ("balanced-construction", balanced),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        if filter.as_deref().is_some_and(|f| !name.contains(f)) {
            continue;
        }
        let v = run();
        println!("{} criterion {:>2} {name}: {}", if v.ok { "PASS" } else { "FAIL" }, i + 1, v.detail);
        failed += usize::from(!v.ok);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
