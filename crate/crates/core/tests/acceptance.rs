//! Acceptance gate: one line per criterion, nonzero exit on any failure.

mod common;

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use gshift::classifier::{
    default_probes, equicontinuity_modulus, expansivity_witness, sensitivity_witness, Classifier,
    Evidence, Outcome, Property, Verdict,
};
use gshift::cli::{run, EXIT_OK};
use gshift::engine::{
    check_escape, inverse_orbit, iterates_distinct, orbit, periodic_inverse, Budgets,
    EscapeCertificate, InfinityCertificate, OrbitResult, Presentation, Word,
};
use gshift::oracle::{apply_shift, compose_tables, exhaustive_sweep, random_sweep, Lcg};
use gshift::report::{
    expansivity_record, from_json_line, sensitivity_record, EvidenceRecord, Record,
};
use gshift::verify::{verify_witness, DISTINCT_ITERATES};
use gshift::Interval;
use rand::Rng;

const SMALL: Budgets = Budgets {
    orbit: 2000,
    closure: 100,
};

/// Escape certificates met while running the other criteria.
#[derive(Default)]
struct Seen {
    certificates: Vec<(Presentation, EscapeCertificate)>,
}

impl Seen {
    fn orbit(&mut self, p: &Presentation, r: &OrbitResult) {
        if let OrbitResult::Infinite(InfinityCertificate::Escape(c)) = r {
            self.certificates.push((p.clone(), c.clone()));
        }
    }

    fn verdict(&mut self, p: &Presentation, v: &Verdict) {
        if let Evidence::Escape { certificate, .. } = &v.evidence {
            self.certificates.push((p.clone(), certificate.clone()));
        }
    }
}

struct Gate {
    failed: usize,
}

impl Gate {
    fn run(
        &mut self,
        id: u32,
        name: &str,
        limit: Duration,
        body: impl FnOnce() -> Result<String, String>,
    ) {
        let start = Instant::now();
        let result = body();
        let elapsed = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if elapsed <= limit => (true, d),
            Ok(d) => (false, format!("{d}; over time limit")),
            Err(e) => (false, e),
        };
        if !ok {
            self.failed += 1;
        }
        println!(
            "{} [{id}] {name}: {detail} ({:.2} s, limit {} s)",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
}

fn require(violations: Vec<String>, summary: String) -> Result<String, String> {
    match violations.first() {
        None => Ok(summary),
        Some(first) => Err(format!("{} violations, first: {first}", violations.len())),
    }
}

fn presentation_file(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "presentations", name]
        .iter()
        .collect();
    path.to_string_lossy().into_owned()
}

fn regression_corpus() -> Result<String, String> {
    use Outcome::{No, Yes};
    let cases = [
        (
            "absolute.gs",
            &[(Property::Equicontinuous, Yes), (Property::Distal, No)][..],
            "is equicontinuous and it is not distal",
        ),
        ("negation.gs", &[(Property::Distal, Yes)][..], "is distal"),
        (
            "square.gs",
            &[(Property::Sensitive, Yes), (Property::Expansive, No)][..],
            "is sensitive and it is not expansive",
        ),
        (
            "march.gs",
            &[(Property::Expansive, Yes)][..],
            "is expansive",
        ),
    ];
    let mut violations = Vec::new();
    for (name, expected, sentence) in cases {
        let file = presentation_file(name);
        let (code, out) = run([
            "gshift", "classify", &file, "--format", "machine", "--verify",
        ]);
        if code != EXIT_OK {
            violations.push(format!("{name}: exit {code}"));
        }
        let records: Vec<Record> = out.lines().filter_map(|l| from_json_line(l).ok()).collect();
        for &(property, outcome) in expected {
            let got = records.iter().find_map(|r| match r {
                Record::Verdict(v) if v.property == property => Some(v.outcome),
                _ => None,
            });
            if got != Some(outcome) {
                violations.push(format!("{name}: {property:?} {got:?}, want {outcome:?}"));
            }
        }
        if !records
            .iter()
            .any(|r| matches!(r, Record::Verify(v) if v.failures.is_empty()))
        {
            violations.push(format!("{name}: verification failed"));
        }
        let (_, human) = run(["gshift", "classify", &file]);
        if !human.contains(&format!("T {sentence})")) {
            violations.push(format!("{name}: missing \"{sentence}\""));
        }
    }
    require(violations, "4 presentations reproduced".into())
}

fn anti_homomorphism() -> Result<String, String> {
    let mut violations = Vec::new();
    let shape = MapShape {
        constant_rays: false,
        ..MapShape::default()
    };
    let mut r = rng(0xA11CE);
    let mut cases = 0;
    let mut attempts = 0;
    while cases < 1000 && attempts < 5000 {
        attempts += 1;
        let f = random_map(&mut r, shape);
        let g = random_map(&mut r, shape);
        let k = r.gen_range(2..=4);
        let x = random_pattern(&mut r, k, 12);
        // compositions past the degree cap are skipped, not counted
        let Ok(gf) = g.compose(&f, 4) else { continue };
        let lhs = x.shift(&g).and_then(|gx| gx.shift(&f));
        let rhs = x.shift(&gf);
        cases += 1;
        if lhs != rhs {
            violations.push(format!("f={f}, g={g}: {lhs:?} vs {rhs:?}"));
        }
    }
    if cases < 1000 {
        violations.push(format!("only {cases} pattern cases generated"));
    }
    let mut lcg = Lcg::new(7);
    for _ in 0..1000 {
        let m = 1 + lcg.below(6) as usize;
        let k = 2 + lcg.below(3) as u32;
        let f: Vec<usize> = (0..m).map(|_| lcg.below(m as u64) as usize).collect();
        let g: Vec<usize> = (0..m).map(|_| lcg.below(m as u64) as usize).collect();
        let cfg: Vec<u32> = (0..m).map(|_| lcg.below(k as u64) as u32).collect();
        let lhs = apply_shift(&f, &apply_shift(&g, &cfg));
        let rhs = apply_shift(&compose_tables(&g, &f), &cfg);
        if lhs != rhs {
            violations.push(format!("tables f={f:?} g={g:?} on {cfg:?}"));
        }
    }
    require(
        violations,
        format!("{cases} pattern cases and 1000 table cases"),
    )
}

fn oracle_sweep() -> Result<gshift::oracle::SweepSummary, String> {
    let mut summary = exhaustive_sweep(3, 2, 2).map_err(|e| e.to_string())?;
    let random = random_sweep(1, 1000, 4, 2, 2).map_err(|e| e.to_string())?;
    summary.instances += random.instances;
    summary.expansive_checks += random.expansive_checks;
    summary.modulus_checks += random.modulus_checks;
    summary.distal_checks += random.distal_checks;
    summary.disagreements.extend(random.disagreements);
    Ok(summary)
}

fn modulus_on_integers() -> Result<String, String> {
    let mut violations = Vec::new();
    let mut r = rng(0x3E2);
    let mut pairs = 0;
    for src in [ABS, NEG] {
        let p = from_src(src);
        for _ in 0..50 {
            let mut h0: Vec<i64> = (-10..=10).filter(|_| r.gen_bool(0.25)).collect();
            if h0.is_empty() {
                h0.push(r.gen_range(-10..=10));
            }
            let h = equicontinuity_modulus(&p, &h0, 1000)?;
            for _ in 0..100 {
                let k = r.gen_range(2..=4);
                let x = random_pattern(&mut r, k, 15);
                let mut y = random_pattern(&mut r, k, 15);
                for &c in &h {
                    y = y.with(c, x.get(c)).map_err(|e| e.to_string())?;
                }
                pairs += 1;
                for len in 0..=6 {
                    let word = Word::power(0, len);
                    for &c in &h0 {
                        let a = x.shifted_value(&p, &word, c).map_err(|e| e.to_string())?;
                        let b = y.shifted_value(&p, &word, c).map_err(|e| e.to_string())?;
                        if a != b {
                            violations.push(format!(
                                "{src}: H0={h0:?}, word length {len}, coordinate {c}"
                            ));
                        }
                    }
                }
            }
        }
    }
    require(violations, format!("{pairs} pattern pairs"))
}

fn finite_support_permutations(seen: &mut Seen) -> Result<String, String> {
    let mut violations = Vec::new();
    let mut r = rng(0x5EED);
    for i in 0..200 {
        let g = r.gen_range(1..=2);
        let p = Presentation::unnamed((0..g).map(|_| random_permutation(&mut r, 10)).collect());
        for w in -12..=12 {
            let fwd = orbit(&p, w, 10_000);
            let inv = inverse_orbit(&p, w, 10_000);
            seen.orbit(&p, &fwd);
            match (fwd.finite(), inv.finite()) {
                (Some(a), Some(b)) if a.point_set() == b.point_set() => {}
                _ => violations.push(format!("presentation {i}, w={w}: {fwd:?} vs {inv:?}")),
            }
        }
    }
    for i in 0..200 {
        let map = random_permutation(&mut r, 10);
        let w = r.gen_range(-12..=12);
        let Some((period, x)) = periodic_inverse(&map, w, 10_000) else {
            violations.push(format!("case {i}: no period for {w}"));
            continue;
        };
        let mut iterate = w;
        for _ in 0..period - 1 {
            iterate = map.eval(iterate).map_err(|e| e.to_string())?;
        }
        let back = map.eval(x).map_err(|e| e.to_string())?;
        if iterate != x || back != w {
            violations.push(format!("case {i}: w={w}, period {period}, x={x}"));
        }
    }
    require(
        violations,
        "200 presentations and 200 periodic inverses".into(),
    )
}

fn witnesses(seen: &mut Seen) -> Result<String, String> {
    let mut violations = Vec::new();
    let mut r = rng(0x817);
    let square = from_src(SQUARE);
    for i in 0..100 {
        let p = if i < 50 {
            square.clone()
        } else {
            random_escape_presentation(&mut r)
        };
        let v = r.gen_range(2..=10);
        let fwd = orbit(&p, v, 1000);
        seen.orbit(&p, &fwd);
        // protect v and a few of its iterates so the search has to walk
        let mut protected = vec![v];
        let mut t = v;
        for _ in 0..r.gen_range(0..3) {
            t = p.map(0).eval(t).map_err(|e| e.to_string())?;
            protected.push(t);
        }
        let k = r.gen_range(2..=4);
        let x = random_pattern(&mut r, k, 20);
        match sensitivity_witness(&p, v, &x, &protected, 1000) {
            Ok(w) => {
                if let Err(e) = w
                    .check(&p)
                    .and(verify_witness(&p, &sensitivity_record(&p, &w)))
                {
                    violations.push(format!("sensitivity {i}: {e}"));
                }
            }
            Err(e) => violations.push(format!("sensitivity {i}: {e}")),
        }
    }
    let march = from_src(MARCH);
    let h = [-1, 0, 1];
    for i in 0..100 {
        let k = r.gen_range(2..=4);
        let x = random_pattern(&mut r, k, 20);
        let y = x.flipped(r.gen_range(-30..=30));
        match expansivity_witness(&march, &h, &x, &y, 1000) {
            Ok(w) => {
                let record = expansivity_record(&march, &h, &w);
                if let Err(e) = w.check(&march, &h).and(verify_witness(&march, &record)) {
                    violations.push(format!("expansivity {i}: {e}"));
                }
            }
            Err(e) => violations.push(format!("expansivity {i}: {e}")),
        }
    }
    require(
        violations,
        "100 sensitivity and 100 expansivity witnesses".into(),
    )
}

fn coherence(seen: &mut Seen) -> Result<String, String> {
    let mut violations = Vec::new();
    let mut presentations: Vec<(Presentation, Budgets)> = CORPUS
        .iter()
        .map(|s| (from_src(s), Budgets::default()))
        .collect();
    let mut r = rng(0xC0DE);
    for _ in 0..200 {
        presentations.push((random_presentation(&mut r, MapShape::default()), SMALL));
    }
    let mut decided = 0;
    for (i, (p, budgets)) in presentations.iter().enumerate() {
        let c = Classifier::new(p, *budgets);
        let probes = default_probes(p, (-8, 8));
        let eq = c.check_equicontinuous(&probes);
        let sensitive = c.check_sensitive(&probes);
        let distal = c.check_distal(&probes);
        let expansive = c.check_expansive(2, Interval::bounded(-10, 10));
        for v in [&eq, &sensitive, &distal, &expansive] {
            seen.verdict(p, v);
        }
        if eq.outcome != Outcome::Unknown {
            decided += 1;
        }
        let mut fail = |what: &str| violations.push(format!("presentation {i}: {what}"));
        if sensitive.outcome != eq.outcome.negate() {
            fail("sensitive is not the negation of equicontinuous");
        }
        if distal.outcome == Outcome::Yes && eq.outcome != Outcome::Yes {
            fail("distal without equicontinuity");
        }
        if expansive.outcome == Outcome::Yes && sensitive.outcome != Outcome::Yes {
            fail("expansive without sensitivity");
        }
    }
    require(
        violations,
        format!("{} presentations, {decided} decided", presentations.len()),
    )
}

fn certificates(seen: &Seen) -> Result<String, String> {
    let mut violations = Vec::new();
    let mut bases = BTreeSet::new();
    for (p, cert) in &seen.certificates {
        bases.insert(cert.base);
        if let Err(e) = check_escape(cert, p) {
            violations.push(format!("base {}: {e}", cert.base));
            continue;
        }
        match iterates_distinct(cert, p, DISTINCT_ITERATES) {
            Ok(true) => {}
            Ok(false) => violations.push(format!("base {}: repeated iterate", cert.base)),
            Err(e) => violations.push(format!("base {}: {e}", cert.base)),
        }
    }
    if seen.certificates.is_empty() {
        violations.push("no certificates were produced".into());
    }
    require(
        violations,
        format!(
            "{} certificates from {} bases",
            seen.certificates.len(),
            bases.len()
        ),
    )
}

fn main() -> ExitCode {
    let mut gate = Gate { failed: 0 };
    let mut seen = Seen::default();
    let secs = Duration::from_secs;

    gate.run(1, "regression corpus", secs(5), regression_corpus);
    for name in ["absolute.gs", "negation.gs", "square.gs", "march.gs"] {
        let (_, out) = run([
            "gshift",
            "classify",
            &presentation_file(name),
            "--format",
            "machine",
        ]);
        let p = gshift::presentation_file::parse_presentation_file(
            &std::fs::read_to_string(presentation_file(name)).unwrap(),
        )
        .unwrap()
        .presentation;
        for record in out.lines().filter_map(|l| from_json_line(l).ok()) {
            if let Record::Verdict(v) = record {
                if let EvidenceRecord::Escape { certificate, .. } = v.evidence {
                    if let Ok(c) = gshift::report::escape_from_record(&p, &certificate) {
                        seen.certificates.push((p.clone(), c));
                    }
                }
            }
        }
    }

    gate.run(2, "shifts reverse composition", secs(5), anti_homomorphism);

    let mut sweep = Err("sweep did not run".to_string());
    gate.run(3, "expansivity oracle agreement", secs(120), || {
        sweep = oracle_sweep();
        let s = sweep.as_ref().map_err(Clone::clone)?;
        let bad: Vec<String> = s
            .disagreements
            .iter()
            .filter(|d| !d.starts_with("modulus"))
            .cloned()
            .collect();
        require(
            bad,
            format!(
                "{} instances, {} expansivity checks, {} distality checks",
                s.instances, s.expansive_checks, s.distal_checks
            ),
        )
    });
    gate.run(4, "equicontinuity modulus", secs(60), || {
        let s = sweep.as_ref().map_err(Clone::clone)?;
        let bad: Vec<String> = s
            .disagreements
            .iter()
            .filter(|d| d.starts_with("modulus"))
            .cloned()
            .collect();
        let finite = require(bad, format!("{} finite checks", s.modulus_checks))?;
        Ok(format!("{finite}; {}", modulus_on_integers()?))
    });

    gate.run(5, "finite orbits of permutations", secs(30), || {
        finite_support_permutations(&mut seen)
    });
    gate.run(6, "witness validity", secs(30), || witnesses(&mut seen));
    gate.run(8, "verdict coherence", secs(30), || coherence(&mut seen));
    gate.run(7, "escape certificates", secs(60), || certificates(&seen));

    if gate.failed == 0 {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} criteria failed", gate.failed);
        ExitCode::FAILURE
    }
}
