//! The acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. All comparisons are exact.

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use hstar::ehrhart::h_star;
use hstar::graded::koszul_betti;
use hstar::harness::{
    analyze, checks, corpus_verify, jsonl, off_lattice_witness, reference_examples, CheckTally,
    CorpusConfig, CorpusRun, Outcome, SuiteConfig, NON_IMPLICATIONS,
};
use hstar::monoid::{is_idp, is_level, spanning_report};
use hstar::oracle::h_star_by_box_scan;
use hstar::polytope::Polytope;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        passed,
        detail: detail.into(),
    }
}

fn tally(runs: &[&CorpusRun], check: &str) -> CheckTally {
    let mut t = CheckTally::default();
    for run in runs {
        if let Some(c) = run.summary.checks.get(check) {
            t.passed += c.passed;
            t.violated += c.violated;
            t.skipped += c.skipped;
        }
    }
    t
}

fn reference(name: &str) -> (Polytope, Vec<u64>) {
    let ex = reference_examples()
        .into_iter()
        .find(|e| e.name == name)
        .expect("known example");
    (ex.polytope().unwrap(), ex.hstar.clone())
}

fn degree_two_config() -> CorpusConfig {
    CorpusConfig {
        seed: 1,
        count: 500,
        dim_min: 2,
        dim_max: 4,
        entry_bound: 5,
        degree_min: Some(2),
        degree_max: Some(2),
        reference_examples: true,
        ..CorpusConfig::default()
    }
}

fn high_dim_config() -> CorpusConfig {
    CorpusConfig {
        seed: 2,
        count: 80,
        dim_min: 5,
        dim_max: 5,
        entry_bound: 3,
        degree_min: Some(3),
        ..CorpusConfig::default()
    }
}

fn polygon_config() -> CorpusConfig {
    CorpusConfig {
        seed: 3,
        count: 150,
        dim_min: 2,
        dim_max: 2,
        entry_bound: 6,
        non_simplex_percent: 40,
        vertices_min: 3,
        vertices_max: 7,
        ..CorpusConfig::default()
    }
}

fn criterion_1() -> Verdict {
    let mut bad = Vec::new();
    for name in ["reeve", "parity-4", "idp-tetrahedron", "idp-tetrahedron-2"] {
        let (p, expected) = reference(name);
        let got = h_star(&p).unwrap();
        if got.entries() != expected.as_slice() {
            bad.push(format!("{name}: {:?} != {expected:?}", got.entries()));
        }
    }
    verdict(bad.is_empty(), if bad.is_empty() { "4/4 h*-vectors match".into() } else { bad.join("; ") })
}

fn criterion_2() -> Verdict {
    let mut bad = Vec::new();
    let mut expect = |ok: bool, what: &str| {
        if !ok {
            bad.push(what.to_string());
        }
    };

    let (reeve, _) = reference("reeve");
    let h = h_star(&reeve).unwrap();
    let s = spanning_report(&reeve).unwrap();
    expect(!is_idp(&reeve).unwrap().value, "reeve not IDP");
    expect(!s.is_spanning, "reeve not spanning");
    expect(s.deg_tilde() == 0, "reeve deg P~ = 0");
    expect(is_level(&reeve).unwrap().is_level, "reeve level");
    expect(h.get(2).is_multiple_of(h.get(1) + 1), "reeve h1+1 | h2");

    let (parity, _) = reference("parity-4");
    let h = h_star(&parity).unwrap();
    expect(!h.get(2).is_multiple_of(h.get(1) + 1), "parity-4 h1+1 does not divide h2");
    expect(!spanning_report(&parity).unwrap().is_spanning, "parity-4 not spanning");
    expect(!is_idp(&parity).unwrap().value, "parity-4 not IDP");
    expect(
        off_lattice_witness(&parity, 2, &[1, 1, 1, 0]).unwrap(),
        "parity-4 witness (1,1,1,0) in 2P off the lattice",
    );

    let (t1, _) = reference("idp-tetrahedron");
    let h = h_star(&t1).unwrap();
    expect(is_idp(&t1).unwrap().value, "idp-tetrahedron IDP");
    expect(h.get(2).is_multiple_of(h.get(1) + 1), "idp-tetrahedron h1+1 | h2");

    let (t2, _) = reference("idp-tetrahedron-2");
    let h = h_star(&t2).unwrap();
    expect(is_idp(&t2).unwrap().value, "idp-tetrahedron-2 IDP");
    expect(!h.get(2).is_multiple_of(h.get(1) + 1), "idp-tetrahedron-2 h1+1 does not divide h2");
    expect(h.get(1) < h.get(2), "idp-tetrahedron-2 h1 < h2");

    let detail = if bad.is_empty() {
        "all predicate claims hold".to_string()
    } else {
        format!("failed: {}", bad.join("; "))
    };
    verdict(bad.is_empty(), detail)
}

fn criterion_3(deg2: &CorpusRun) -> Verdict {
    let mut qualifying = 0;
    let mut non_idp = 0;
    for r in deg2.records.iter().filter(|r| r.origin != "reference") {
        let h = r.hstar();
        if r.report.dim >= 2 && r.report.dim <= 4 && h[2] <= h[1] {
            qualifying += 1;
            if !r.report.idp.as_ref().unwrap().value {
                non_idp += 1;
            }
        }
    }
    let t = tally(&[deg2], checks::QUADRATIC_IDP);
    verdict(
        qualifying >= 300 && non_idp == 0 && t.violated == 0,
        format!("{qualifying} random degree-2 members with h2 <= h1, {non_idp} not IDP"),
    )
}

fn criterion_4(runs: &[&CorpusRun]) -> Verdict {
    let t = tally(runs, checks::BETTI_VANISHING);
    let (reeve, _) = reference("reeve");
    let b02 = koszul_betti(&reeve, 0, 2).unwrap();
    verdict(
        t.passed >= 30 && t.violated == 0 && b02 == 1,
        format!(
            "{} members checked, {} violations, {} beyond the size cap; beta_(0,2)(reeve) = {b02}",
            t.passed, t.violated, t.skipped
        ),
    )
}

fn criterion_5(runs: &[&CorpusRun]) -> Verdict {
    let koszul = tally(runs, checks::KOSZUL_GENERATORS);
    let mut idp_small = 0;
    let mut idp_bad = 0;
    for run in runs {
        for r in &run.records {
            let vol = r.report.ehrhart.as_ref().unwrap().volume;
            match r.outcome(checks::IDP_ORACLE) {
                Some(Outcome::Pass) if r.report.dim <= 3 && vol <= 40 => idp_small += 1,
                Some(Outcome::Violated) => idp_bad += 1,
                _ => {}
            }
        }
    }
    let mut hstar_bad = Vec::new();
    for ex in reference_examples() {
        let p = ex.polytope().unwrap();
        if h_star_by_box_scan(&p).unwrap() != h_star(&p).unwrap() {
            hstar_bad.push(ex.name);
        }
    }
    verdict(
        koszul.violated == 0 && koszul.passed > 0 && idp_small >= 100 && idp_bad == 0 && hstar_bad.is_empty(),
        format!(
            "Koszul vs sumset on {} members ({} mismatches); IDP brute force on {idp_small} members ({idp_bad} mismatches); box-scan h* on 5 references ({} mismatches)",
            koszul.passed,
            koszul.violated,
            hstar_bad.len()
        ),
    )
}

fn criterion_6(deg2: &CorpusRun) -> Verdict {
    let s = &deg2.summary;
    let random_deg2 = deg2
        .records
        .iter()
        .filter(|r| r.origin != "reference" && r.implications().degree_two)
        .count();
    let arrow_violations: usize = s.arrows.values().map(|a| a.violations).sum();
    let missing: Vec<&String> = s
        .non_implications
        .iter()
        .filter(|(_, w)| w.count == 0)
        .map(|(k, _)| k)
        .collect();
    let references = deg2.records.iter().filter(|r| r.origin == "reference").count();
    verdict(
        random_deg2 >= 500 && references == 5 && arrow_violations == 0 && missing.is_empty(),
        format!(
            "{random_deg2} random degree-2 members + {references} references, {arrow_violations} arrow violations, {}/{} non-implications witnessed{}",
            NON_IMPLICATIONS.len() - missing.len(),
            NON_IMPLICATIONS.len(),
            if missing.is_empty() { String::new() } else { format!(" (missing {missing:?})") }
        ),
    )
}

/// Simplices `conv(0, e₁, e₂, e₃, (a, b, c, v))` with `v ≤ 9` whose h*-vector
/// meets the premises of the dim-4 equal-entries statement.
fn dim4_sweep() -> (usize, CheckTally) {
    let mut found = 0;
    let mut t = CheckTally::default();
    for v in 2..=9i64 {
        for a in 0..v {
            for b in 0..v {
                for c in 0..v {
                    let p = Polytope::from_i64(&[
                        [0, 0, 0, 0],
                        [1, 0, 0, 0],
                        [0, 1, 0, 0],
                        [0, 0, 1, 0],
                        [a, b, c, v],
                    ])
                    .unwrap();
                    let h = h_star(&p).unwrap();
                    let e = h.entries();
                    if h.degree() < 3 || e[1] + e[4] < e[2] + e[3] {
                        continue;
                    }
                    found += 1;
                    let rec = analyze(format!("sweep-{v}-{a}-{b}-{c}"), "sweep", &p, &SuiteConfig::default()).unwrap();
                    match rec.outcome(checks::DIM4_EQUAL_ENTRIES) {
                        Some(Outcome::Pass) => t.passed += 1,
                        Some(Outcome::Violated) => t.violated += 1,
                        _ => t.skipped += 1,
                    }
                }
            }
        }
    }
    (found, t)
}

fn criterion_7(runs: &[&CorpusRun]) -> Verdict {
    let criterion = tally(runs, checks::SPANNING_CRITERION);
    let high = tally(runs, checks::CRITERION_HIGH_DIM);
    let mut dim4 = tally(runs, checks::DIM4_EQUAL_ENTRIES);
    let (found, sweep) = dim4_sweep();
    dim4.passed += sweep.passed;
    dim4.violated += sweep.violated;
    dim4.skipped += sweep.skipped;
    let level = tally(runs, checks::LEVEL_TILDE_DEGREE);
    verdict(
        criterion.violated == 0
            && high.passed >= 50
            && high.violated == 0
            && dim4.violated == 0
            && dim4.skipped == 0
            && level.violated == 0,
        format!(
            "spanning criterion {}/{} ok; high-dim inequality {} instances, {} violations; dim-4 equal entries {} instances ({found} from sweep), {} violations; level/deg P~ {} instances, {} violations",
            criterion.passed,
            criterion.passed + criterion.violated,
            high.passed,
            high.violated,
            dim4.passed + dim4.violated,
            dim4.violated,
            level.passed,
            level.violated
        ),
    )
}

fn criterion_8(poly: &CorpusRun, runs: &[&CorpusRun]) -> Verdict {
    let quad = tally(&[poly], checks::POLYGON_QUADRICS);
    let mut strict = 0;
    let mut equal_with_cubics = 0;
    for r in &poly.records {
        if r.outcome(checks::POLYGON_QUADRICS) != Some(Outcome::Pass) {
            continue;
        }
        let h = r.hstar();
        let counts = r.report.toric_generator_degrees.as_ref().unwrap();
        if h[2] < h[1] {
            strict += 1;
        } else if counts.get(&3).copied().unwrap_or(0) > 0 {
            equal_with_cubics += 1;
        }
    }
    let bound = tally(runs, checks::TORIC_DEGREE_BOUND);
    verdict(
        quad.passed >= 100 && quad.violated == 0 && strict > 0 && equal_with_cubics > 0 && bound.violated == 0 && bound.passed > 0,
        format!(
            "{} polygons ({strict} with h2 < h1, {equal_with_cubics} with h2 = h1 and cubic generators), {} mismatches; toric degree bound on {} members, {} violations",
            quad.passed, quad.violated, bound.passed, bound.violated
        ),
    )
}

fn criterion_9(first: &[(&CorpusConfig, &CorpusRun)]) -> Verdict {
    let mut differing = Vec::new();
    for (config, run) in first {
        let again = corpus_verify(config).unwrap();
        if jsonl(&again.records) != jsonl(&run.records) || again.summary != run.summary {
            differing.push(config.seed);
        }
    }
    verdict(
        differing.is_empty(),
        format!("{} corpora re-run, {} differ", first.len(), differing.len()),
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let deg2_config = degree_two_config();
    let high_config = high_dim_config();
    let poly_config = polygon_config();
    let deg2 = corpus_verify(&deg2_config).expect("degree-2 corpus");
    let high = corpus_verify(&high_config).expect("high-dimensional corpus");
    let poly = corpus_verify(&poly_config).expect("polygon corpus");
    let runs = [&deg2, &high, &poly];

    let results = [
        ("reference h*-vectors", criterion_1()),
        ("reference predicates", criterion_2()),
        ("degree 2 with h2 <= h1 is IDP", criterion_3(&deg2)),
        ("Betti vanishing", criterion_4(&runs)),
        ("cross-algorithm agreement", criterion_5(&runs)),
        ("degree-2 implication web", criterion_6(&deg2)),
        ("spanning and h* inequalities", criterion_7(&runs)),
        ("toric generator degrees", criterion_8(&poly, &runs)),
        (
            "determinism",
            criterion_9(&[(&deg2_config, &deg2), (&poly_config, &poly)]),
        ),
    ];

    let mut out = std::io::stdout().lock();
    let mut failures = 0;
    for (i, (title, v)) in results.iter().enumerate() {
        if !v.passed {
            failures += 1;
        }
        writeln!(
            out,
            "criterion {}: {} [{title}] {}",
            i + 1,
            if v.passed { "PASS" } else { "FAIL" },
            v.detail
        )
        .unwrap();
    }
    for run in runs {
        for r in run.violating() {
            writeln!(out, "violation in {}: {:?}", r.report.name.as_deref().unwrap_or("?"), r.violations).unwrap();
        }
    }
    writeln!(
        out,
        "acceptance: {}/{} criteria passed in {:.1}s",
        results.len() - failures,
        results.len(),
        start.elapsed().as_secs_f64()
    )
    .unwrap();
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
