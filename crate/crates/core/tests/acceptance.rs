//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
//!
//! Thresholds are pinned below. Those marked "pre-run" were frozen from an
//! oracle run before this file was written and are not tuned afterwards.

use std::collections::HashSet;
use std::f64::consts::SQRT_2;
use std::time::Instant;

use num_complex::Complex64;
use sumgraph::cayley::{build, codegree_stats, count_c4, count_k23, loop_count, sample_er, structure_report};
use sumgraph::dist::{
    m4_check, sample_kt_limit, sample_sc_plus_sa, spectral_to_empirical, w1_two_sample, w1_vs_law, EmpiricalMeasure,
    LimitLaw,
};
use sumgraph::expsum::{birch_table, kloosterman, kloosterman_table, salie, salie_closed_form, set_character_sum};
use sumgraph::sidon::{is_partial_symmetric_sidon, is_sidon, is_symmetric_sidon, restrict, witness_is_valid};
use sumgraph::spectrum::{
    dense_eigenvalues, normalized_spectrum, spectrum_dense_oracle, spectrum_from_characters, spectrum_from_table,
    SpectralMeasure,
};
use sumgraph::{make_b, make_field, make_k, make_kplus, make_kt, FiniteField, GroupPoint, SumSet};

const WEIL_SLACK: f64 = 1e-6;
const ORACLE_TOL: f64 = 1e-6;
const TRACE_REL_TOL: f64 = 1e-6;
const W1_AT_1117: f64 = 0.05; // pre-run: K 0.0102, B 0.0069
const M4_TOL: f64 = 0.05; // pre-run: deviation 0.0009 at p = 1117
const SALIE_TOL: f64 = 1e-9;
const DECOMP_TOL: f64 = 1e-9;
const VARIANT_W1: f64 = 0.05;
const VARIANT_SAMPLES: usize = 1_000_000;
const VARIANT_SEED: u64 = 7;
const KT_TRUNCATION: usize = 4096;
const ATOMIC_625: usize = 9; // pre-run distinct normalized values
const ATOMIC_1024: usize = 5; // pre-run distinct normalized values
const NON_ATOMIC_MIN: usize = 100;
const ER_W1: f64 = 0.1;

const FIG_PRIMES: [u64; 4] = [127, 251, 601, 1117];
const SMALL_PRIMES: [u64; 8] = [7, 11, 13, 17, 19, 23, 29, 31];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn field(p: u64, n: u32) -> FiniteField {
    make_field(p, n).expect("field")
}

/// Every spectrum built in this run is routed through here (criterion 5).
#[derive(Default)]
struct TraceLog {
    checked: usize,
    failures: Vec<String>,
}

impl TraceLog {
    fn record(&mut self, set: &SumSet, m: &SpectralMeasure) {
        self.checked += 1;
        let loops = loop_count(&build(set));
        let n = f64::from(m.q).powi(2);
        let s = set.len() as f64;
        let s1 = m.power_sum(1);
        let s2 = m.power_sum(2);
        let ok1 = s1.round() as i64 == loops as i64 && (s1 - loops as f64).abs() <= TRACE_REL_TOL * n * s;
        let ok2 = (s2 - n * s).abs() <= TRACE_REL_TOL * n * s;
        if !(ok1 && ok2 && m.mass() as f64 == n) {
            self.failures.push(format!("{} q={}: Σλ={s1} loops={loops} Σλ²={s2}", m.family, m.q));
        }
    }
}

fn table_spectrum(set: &SumSet, log: &mut TraceLog) -> SpectralMeasure {
    let f = set.field();
    let table = match set.family() {
        sumgraph::sidon::Family::Kloosterman => kloosterman_table(f),
        _ => birch_table(f),
    }
    .expect("table");
    let m = spectrum_from_table(set, &table).expect("spectrum");
    log.record(set, &m);
    m
}

fn char_spectrum(set: &SumSet, log: &mut TraceLog) -> SpectralMeasure {
    let m = spectrum_from_characters(set).expect("spectrum");
    log.record(set, &m);
    m
}

fn normalized(m: &SpectralMeasure) -> EmpiricalMeasure {
    spectral_to_empirical(&normalized_spectrum(m, true).expect("normalize"), true)
}

fn criterion_1(log: &mut TraceLog) -> Outcome {
    let mut worst = 0.0f64;
    let mut violations = 0u64;
    for p in FIG_PRIMES {
        let f = field(p, 1);
        let bound = 2.0 * (p as f64).sqrt() + WEIL_SLACK;
        for set in [make_k(&f), make_b(&f)] {
            let m = table_spectrum(&set, log);
            let top = m.max_nontrivial_abs();
            worst = worst.max(top / (p as f64).sqrt());
            // the trivial eigenvalue q - 1 is the only value allowed above the bound
            let above: u64 = m.values.iter().filter(|&&(x, _)| x.abs() > bound).map(|&(_, k)| k).sum();
            violations += above.saturating_sub(1);
        }
    }
    outcome(violations == 0, format!("max |λ|/√q = {worst:.6} (bound 2), {violations} violations"))
}

fn criterion_2() -> Outcome {
    let k_fields = [(5, 1), (7, 1), (2, 3), (3, 2), (11, 1), (13, 1), (2, 4), (5, 2), (3, 3), (31, 1), (127, 1)];
    let b_fields = [(5, 1), (7, 1), (11, 1), (13, 1), (5, 2), (127, 1)];
    let mut bad = Vec::new();
    let sets = k_fields
        .iter()
        .map(|&(p, n)| make_k(&field(p, n)))
        .chain(b_fields.iter().map(|&(p, n)| make_b(&field(p, n))));
    let mut total = 0;
    for set in sets {
        let k = count_k23(&build(&set).simple_view()).expect("count");
        total += 1;
        if k != 0 {
            bad.push(format!("{:?} {} has {k}", set.family(), set.field().label()));
        }
    }
    outcome(bad.is_empty(), format!("{total} graphs, nonzero: {bad:?}"))
}

fn criterion_3() -> Outcome {
    let mut sets = Vec::new();
    for p in SMALL_PRIMES {
        for t in [0.3, 0.5] {
            sets.push(make_kt(&field(p, 1), t).expect("kt"));
        }
    }
    for p in [7, 11, 19, 23, 31] {
        sets.push(make_kplus(&field(p, 1)).expect("kplus"));
    }
    let bad: Vec<String> = sets
        .iter()
        .filter_map(|s| {
            let c = count_c4(&build(s).simple_view()).expect("count");
            (c != 0).then(|| format!("{} p={} C4={c}", s.family().name(), s.field().p()))
        })
        .collect();
    outcome(bad.is_empty(), format!("{} graphs, nonzero: {bad:?}", sets.len()))
}

fn criterion_4(log: &mut TraceLog) -> Outcome {
    let fields = [
        (2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (11, 1), (13, 1), (2, 4), (17, 1), (19, 1),
        (23, 1), (5, 2), (3, 3), (29, 1), (31, 1),
    ];
    let mut worst = 0.0f64;
    let mut graphs = 0;
    for (p, n) in fields {
        let f = field(p, n);
        let mut sets = vec![make_k(&f), make_b(&f)];
        if n == 1 && p > 2 {
            sets.push(make_kt(&f, 0.3).expect("kt"));
            sets.push(make_kt(&f, 0.5).expect("kt"));
            if p % 4 == 3 {
                sets.push(make_kplus(&f).expect("kplus"));
            }
        }
        for set in sets.into_iter().filter(|s| !s.is_empty()) {
            let mut chars = char_spectrum(&set, log).expanded();
            chars.sort_by(f64::total_cmp);
            let dense = spectrum_dense_oracle(&build(&set)).expect("dense");
            if chars.len() != dense.len() {
                return outcome(false, format!("length mismatch at {}", f.label()));
            }
            let dev = chars.iter().zip(&dense).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            worst = worst.max(dev);
            graphs += 1;
        }
    }
    outcome(worst <= ORACLE_TOL, format!("{graphs} graphs, max elementwise deviation {worst:.2e}"))
}

fn criterion_6(log: &mut TraceLog) -> Outcome {
    let mut detail = Vec::new();
    let mut pass = true;
    for (name, make) in [("K", make_k as fn(&FiniteField) -> SumSet), ("B", make_b)] {
        let w: Vec<f64> = FIG_PRIMES
            .iter()
            .map(|&p| {
                let m = table_spectrum(&make(&field(p, 1)), log);
                w1_vs_law(&normalized(&m), &LimitLaw::Semicircle).expect("w1")
            })
            .collect();
        let decreasing = w.windows(2).all(|x| x[1] < x[0]);
        pass &= decreasing && w[3] <= W1_AT_1117;
        detail.push(format!("{name}: {}", w.iter().map(|x| format!("{x:.5}")).collect::<Vec<_>>().join(" > ")));
    }
    outcome(pass, detail.join("; "))
}

fn criterion_7() -> Outcome {
    let m127 = m4_check(&field(127, 1)).expect("m4");
    let m1117 = m4_check(&field(1117, 1)).expect("m4");
    let (d127, d1117) = ((m127 - 2.0).abs(), (m1117 - 2.0).abs());
    outcome(d1117 <= M4_TOL && d1117 < d127, format!("M4(127) = {m127:.5}, M4(1117) = {m1117:.5}"))
}

fn criterion_8() -> Outcome {
    let mut worst = 0.0f64;
    for p in [7, 11, 19, 23, 31, 43] {
        let f = field(p, 1);
        for a in f.elements() {
            for b in f.elements() {
                if a.is_zero() && b.is_zero() {
                    continue;
                }
                let d = salie(a, b, &f).expect("salie") - salie_closed_form(a, b, &f).expect("closed form");
                worst = worst.max(d.norm());
            }
        }
    }
    outcome(worst <= SALIE_TOL, format!("max |T - closed form| = {worst:.2e}"))
}

fn criterion_9() -> Outcome {
    let mut worst = 0.0f64;
    for p in [7, 11, 19, 23] {
        let f = field(p, 1);
        let set = make_kplus(&f).expect("kplus");
        for a in f.elements() {
            for b in f.elements() {
                let rhs: Complex64 = 0.5 * kloosterman(a, b, &f) + 0.5 * salie(a, b, &f).expect("salie");
                worst = worst.max((set_character_sum(&set, a, b) - rhs).norm());
            }
        }
    }
    outcome(worst <= DECOMP_TOL, format!("max deviation {worst:.2e} over all (a,b)"))
}

fn criterion_10(log: &mut TraceLog) -> (Outcome, String) {
    let kt = make_kt(&field(1009, 1), 0.5).expect("kt");
    let kt_spec = normalized(&char_spectrum(&kt, log));
    let kt_sample = sample_kt_limit(0.5, KT_TRUNCATION, VARIANT_SAMPLES, VARIANT_SEED).expect("sampler");
    let w_kt = w1_two_sample(&kt_spec, &kt_sample);

    let kp = make_kplus(&field(1019, 1)).expect("kplus");
    let kp_spec = normalized(&char_spectrum(&kp, log));
    let kp_sample = sample_sc_plus_sa(VARIANT_SAMPLES, VARIANT_SEED);
    let w_kp = w1_two_sample(&kp_spec, &kp_sample);

    // not part of the criterion: the same sample divided by √2
    let rescaled = EmpiricalMeasure::from_atoms(kp_sample.atoms().iter().map(|&(x, w)| (x / SQRT_2, w)).collect());
    let second = |e: &EmpiricalMeasure| e.weighted().map(|(x, w)| x * x * w).sum::<f64>();
    let diag = format!(
        "K_+(1019): second moments spectrum {:.4} vs sample {:.4}; W1 to sample/√2 = {:.4}",
        second(&kp_spec),
        second(&kp_sample),
        w1_two_sample(&kp_spec, &rescaled)
    );
    let o = outcome(
        w_kt <= VARIANT_W1 && w_kp <= VARIANT_W1,
        format!(
            "(a) K_1/2(1009) W1 = {w_kt:.5} [{}]; (b) K_+(1019) W1 = {w_kp:.5} [{}]",
            if w_kt <= VARIANT_W1 { "ok" } else { "over" },
            if w_kp <= VARIANT_W1 { "ok" } else { "over" }
        ),
    );
    (o, diag)
}

fn criterion_11(log: &mut TraceLog) -> Outcome {
    let s3 = structure_report(&build(&make_b(&field(3, 1))).simple_view()).expect("report").summary();
    let s9 = structure_report(&build(&make_b(&field(3, 2))).simple_view()).expect("report").summary();
    let mut distinct = |p, n| {
        let m = table_spectrum(&make_b(&field(p, n)), log);
        normalized_spectrum(&m, true).expect("normalize").distinct_count()
    };
    let (d625, d1024, d1117) = (distinct(5, 4), distinct(2, 10), distinct(1117, 1));
    let pass = s3 == "1×K_{3,3}+1×K_3"
        && s9 == "4×K_{9,9}+1×K_9"
        && d625 <= ATOMIC_625
        && d1024 <= ATOMIC_1024
        && d1117 > NON_ATOMIC_MIN;
    outcome(pass, format!("F_3: {s3}; F_9: {s9}; distinct values q=625: {d625}, 1024: {d1024}, 1117: {d1117}"))
}

fn criterion_12(log: &mut TraceLog) -> Outcome {
    let (n, p) = (961usize, 30.0 / 960.0);
    let scale = (n as f64 * p * (1.0 - p)).sqrt();
    let mut rows = Vec::new();
    let mut pass = true;
    for seed in 1..=5 {
        let g = sample_er(n, p, seed).expect("er");
        let k23 = codegree_stats(&g.graph).expect("codegree").k23();
        let mut ev = dense_eigenvalues(n, g.graph.dense_adjacency());
        ev.pop();
        let w = w1_vs_law(&EmpiricalMeasure::from_samples(ev.iter().map(|x| x / scale).collect()), &LimitLaw::Semicircle)
            .expect("w1");
        pass &= k23 > 0 && w <= ER_W1;
        rows.push(format!("seed {seed}: K23 {k23}, W1 {w:.4}"));
    }
    let set = make_k(&field(31, 1));
    let k23 = codegree_stats(&build(&set).simple_view()).expect("codegree").k23();
    let w = w1_vs_law(&normalized(&table_spectrum(&set, log)), &LimitLaw::Semicircle).expect("w1");
    pass &= k23 == 0 && w <= ER_W1;
    rows.push(format!("Gamma_K(F_31): K23 {k23}, W1 {w:.4}"));
    outcome(pass, rows.join("; "))
}

fn criterion_13() -> Outcome {
    let zero = GroupPoint::ZERO;
    let mut fields: Vec<FiniteField> = [5, 7, 11, 13, 17, 19, 23, 29, 31].iter().map(|&p| field(p, 1)).collect();
    fields.extend([(2, 3), (3, 2), (2, 4), (5, 2), (3, 3)].iter().map(|&(p, n)| field(p, n)));
    let mut bad = Vec::new();
    let mut checks = 0;
    for f in &fields {
        checks += 1;
        if !is_symmetric_sidon(&make_k(f), zero).expect("scan").holds {
            bad.push(format!("K {}", f.label()));
        }
        if f.p() >= 5 {
            checks += 1;
            if !is_symmetric_sidon(&make_b(f), zero).expect("scan").holds {
                bad.push(format!("B {}", f.label()));
            }
        }
    }
    for p in [7, 11, 19, 23, 31] {
        checks += 1;
        if !is_sidon(&make_kplus(&field(p, 1)).expect("kplus")).expect("scan").holds {
            bad.push(format!("K_+ p={p}"));
        }
    }
    for p in SMALL_PRIMES {
        for t in [0.1, 0.2, 0.25, 0.3, 0.4, 0.5] {
            checks += 1;
            if !is_sidon(&make_kt(&field(p, 1), t).expect("kt")).expect("scan").holds {
                bad.push(format!("K_{t} p={p}"));
            }
        }
    }
    // desymmetrization: a certified restriction of a partial symmetric Sidon set is Sidon
    for f in &fields {
        let half = (f.q() - 1) / 2;
        let mut sets = vec![make_k(f)];
        if f.p() >= 5 {
            sets.push(make_b(f));
        }
        if f.is_prime_field() {
            sets.push(make_kt(f, 1.0).expect("kt"));
        }
        for s in sets {
            if !is_partial_symmetric_sidon(&s, zero).expect("scan").holds {
                bad.push(format!("partial {} {}", s.family().name(), f.label()));
                continue;
            }
            let (r, cert) = restrict(&s, |pt| pt.u.0 >= 1 && pt.u.0 <= half);
            checks += 1;
            if cert && !is_sidon(&r).expect("scan").holds {
                bad.push(format!("restriction {} {}", s.family().name(), f.label()));
            }
        }
    }
    // witnesses re-verify from the raw tuple
    for f in &fields {
        let v = is_sidon(&make_k(f)).expect("scan");
        if let Some(w) = v.witness {
            checks += 1;
            let members: HashSet<GroupPoint> = make_k(f).points().iter().copied().collect();
            let sum = |x: GroupPoint, y: GroupPoint| (f.add(x.u, y.u), f.add(x.v, y.v));
            let fine = w.iter().all(|x| members.contains(x))
                && sum(w[0], w[1]) == sum(w[2], w[3])
                && w[0] != w[2]
                && w[0] != w[3]
                && witness_is_valid(f, &w, None);
            if !fine {
                bad.push(format!("witness {}", f.label()));
            }
        }
    }
    outcome(bad.is_empty(), format!("{checks} checks, failures: {bad:?}"))
}

fn main() {
    let mut log = TraceLog::default();
    let mut results: Vec<(u32, &str, Outcome, f64)> = Vec::new();
    let mut diagnostics = Vec::new();
    macro_rules! run {
        ($n:expr, $name:expr, $e:expr) => {{
            let t = Instant::now();
            let o = $e;
            let secs = t.elapsed().as_secs_f64();
            println!("criterion {:>2} {:<5} {} ({:.1}s): {}", $n, if o.pass { "PASS" } else { "FAIL" }, $name, secs, o.detail);
            results.push(($n, $name, o, secs));
        }};
    }
    println!("running acceptance criteria");
    run!(1, "weil bound", criterion_1(&mut log));
    run!(2, "K23-free", criterion_2());
    run!(3, "C4-free variants", criterion_3());
    run!(4, "spectrum oracle", criterion_4(&mut log));
    run!(6, "semicircle trend", criterion_6(&mut log));
    run!(7, "fourth moment", criterion_7());
    run!(8, "salie closed form", criterion_8());
    run!(9, "K_+ decomposition", criterion_9());
    run!(10, "variant limit laws", {
        let (o, d) = criterion_10(&mut log);
        diagnostics.push(d);
        o
    });
    run!(11, "degenerate structures", criterion_11(&mut log));
    run!(12, "indistinguishability", criterion_12(&mut log));
    run!(13, "sidon suite", criterion_13());
    run!(
        5,
        "trace identities",
        outcome(
            log.failures.is_empty() && log.checked > 0,
            format!("{} spectra, failures: {:?}", log.checked, log.failures)
        )
    );
    for d in &diagnostics {
        println!("diagnostic: {d}");
    }
    let failed: Vec<u32> = results.iter().filter(|r| !r.2.pass).map(|r| r.0).collect();
    println!(
        "acceptance: {} passed, {} failed {:?}",
        results.len() - failed.len(),
        failed.len(),
        failed
    );
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
