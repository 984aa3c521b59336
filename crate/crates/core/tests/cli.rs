use std::path::PathBuf;

use gshift::classifier::{Outcome, Property};
use gshift::cli::{run, EXIT_ERROR, EXIT_OK, EXIT_UNKNOWN};
use gshift::report::{from_json_line, to_json_line, OrbitStatus, Record, WitnessRecord};

fn file(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "presentations", name]
        .iter()
        .collect();
    path.to_string_lossy().into_owned()
}

fn gshift(args: &[&str]) -> (i32, String) {
    run(std::iter::once("gshift").chain(args.iter().copied()))
}

fn machine(args: &[&str]) -> (i32, Vec<Record>) {
    let mut full = args.to_vec();
    full.extend(["--format", "machine", "--verify"]);
    let (code, out) = gshift(&full);
    let records = out
        .lines()
        .map(|l| from_json_line(l).unwrap_or_else(|e| panic!("{e}: {l}")))
        .collect();
    (code, records)
}

fn verdicts(records: &[Record]) -> Vec<(Property, Outcome)> {
    records
        .iter()
        .filter_map(|r| match r {
            Record::Verdict(v) => Some((v.property, v.outcome)),
            _ => None,
        })
        .collect()
}

fn verified(records: &[Record]) -> bool {
    records
        .iter()
        .any(|r| matches!(r, Record::Verify(v) if v.failures.is_empty() && v.checked > 0))
}

#[test]
fn classify_corpus() {
    use Outcome::{No, Yes};
    use Property::*;
    let cases = [
        (
            "absolute.gs",
            [No, No, Yes, No],
            "equicontinuous-not-distal",
        ),
        ("negation.gs", [Yes, No, Yes, No], "distal"),
        ("square.gs", [No, Yes, No, No], "sensitive-not-expansive"),
        ("march.gs", [No, Yes, No, Yes], "expansive"),
        ("identity.gs", [Yes, No, Yes, No], "distal"),
    ];
    for (name, [distal, sensitive, eq, expansive], region) in cases {
        let (code, records) = machine(&["classify", &file(name)]);
        assert_eq!(code, EXIT_OK, "{name}");
        assert_eq!(
            verdicts(&records),
            vec![
                (Equicontinuous, eq),
                (Distal, distal),
                (Sensitive, sensitive),
                (Expansive, expansive)
            ],
            "{name}"
        );
        assert!(records
            .iter()
            .any(|r| matches!(r, Record::Diagram(d) if d.region == region)));
        assert!(verified(&records), "{name}");
    }
}

#[test]
fn machine_output_round_trips_and_is_deterministic() {
    let args = ["classify", &file("march.gs"), "--format", "machine"];
    let (_, first) = gshift(&args);
    let (_, second) = gshift(&args);
    assert_eq!(first, second);
    for line in first.lines() {
        let record = from_json_line(line).unwrap();
        assert_eq!(to_json_line(&record), line);
    }
}

#[test]
fn orbits() {
    let (code, records) = machine(&["orbit", &file("square.gs"), "--point", "1"]);
    assert_eq!(code, EXIT_OK);
    let Record::Orbit(o) = &records[1] else {
        panic!()
    };
    assert_eq!(o.status, OrbitStatus::Finite);
    assert_eq!(
        o.points.iter().map(|p| p.point).collect::<Vec<_>>(),
        vec![1]
    );

    let (_, records) = machine(&["orbit", &file("negation.gs"), "--point", "3", "--inverse"]);
    let Record::Orbit(o) = &records[1] else {
        panic!()
    };
    assert_eq!(
        o.points.iter().map(|p| p.point).collect::<Vec<_>>(),
        vec![-3, 3]
    );

    let (code, records) = machine(&["orbit", &file("square.gs"), "--point", "2"]);
    assert_eq!(code, EXIT_OK);
    let Record::Orbit(o) = &records[1] else {
        panic!()
    };
    assert_eq!(o.status, OrbitStatus::Infinite);
    assert!(verified(&records));

    let (code, out) = gshift(&["orbit", &file("absolute.gs"), "--point", "-5"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("finite, 2 points"), "{out}");
}

#[test]
fn witnesses() {
    let (code, records) = machine(&[
        "witness",
        &file("square.gs"),
        "sensitivity",
        "--v",
        "2",
        "--protected",
        "2,4",
    ]);
    assert_eq!(code, EXIT_OK);
    let Record::Witness(WitnessRecord::Sensitivity { beta, word, .. }) = &records[1] else {
        panic!("{records:?}")
    };
    assert_eq!((*beta, word.as_str()), (16, "phi^2"));
    assert!(verified(&records));

    for (diff, h, word) in [("5", 1, "phi^4"), ("0", 0, "id"), ("-3", -1, "phi^2")] {
        let (code, records) =
            machine(&["witness", &file("march.gs"), "expansivity", "--diff", diff]);
        assert_eq!(code, EXIT_OK);
        let Record::Witness(WitnessRecord::Expansivity {
            h: got,
            word: w,
            h_set,
            ..
        }) = &records[1]
        else {
            panic!("{records:?}")
        };
        assert_eq!(h_set, &vec![-1, 0, 1]);
        assert_eq!((*got, w.as_str()), (h, word));
        assert!(verified(&records));
    }

    let (code, _) = gshift(&[
        "witness",
        &file("square.gs"),
        "sensitivity",
        "--v",
        "1",
        "--protected",
        "1",
    ]);
    assert_eq!(code, EXIT_UNKNOWN);
}

#[test]
fn exit_codes() {
    let dir = std::env::temp_dir().join(format!("gshift-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.gs");
    std::fs::write(&bad, "generator a\npiece n>=0: n\n").unwrap();
    let (code, out) = gshift(&["classify", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_ERROR);
    assert!(out.starts_with("error:"), "{out}");

    let syntax = dir.join("syntax.gs");
    std::fs::write(&syntax, "generator a\npiece all: n ^^ 2\n").unwrap();
    let (code, out) = gshift(&["classify", syntax.to_str().unwrap()]);
    assert_eq!(code, EXIT_ERROR);
    assert!(out.contains("2:"), "{out}");

    // orbits of -2n only escape through a two-letter word
    let flip = dir.join("flip.gs");
    std::fs::write(&flip, "generator a\npiece all: -2n\n").unwrap();
    let path = flip.to_str().unwrap();
    let (code, records) = machine(&[
        "classify",
        path,
        "--budget-closure",
        "1",
        "--budget-orbit",
        "5",
    ]);
    assert_eq!(code, EXIT_UNKNOWN);
    assert_eq!(
        verdicts(&records)[0],
        (Property::Equicontinuous, Outcome::Unknown)
    );
    let (code, _) = gshift(&["classify", path]);
    assert_eq!(code, EXIT_OK);

    let (code, _) = gshift(&["classify", "/nonexistent/file.gs"]);
    assert_eq!(code, EXIT_ERROR);
    let (code, _) = gshift(&["classify", path, "--probes", "5..1"]);
    assert_eq!(code, EXIT_ERROR);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn saved_reports_can_be_rechecked() {
    let dir = std::env::temp_dir().join(format!("gshift-check-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (_, out) = gshift(&["classify", &file("march.gs"), "--format", "machine"]);
    let report = dir.join("report.jsonl");
    std::fs::write(&report, &out).unwrap();
    let (code, text) = gshift(&["check", &file("march.gs"), report.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{text}");

    // the same evidence does not hold for a different map
    let (code, text) = gshift(&["check", &file("negation.gs"), report.to_str().unwrap()]);
    assert_eq!(code, EXIT_ERROR, "{text}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn small_oracle_sweep() {
    let (code, out) = gshift(&[
        "oracle",
        "--max-m",
        "2",
        "--random",
        "20",
        "--random-m",
        "3",
    ]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("0 disagreements"));
    let (code, _) = gshift(&["oracle", "--max-m", "1", "--random", "5", "--random-m", "1"]);
    assert_eq!(code, EXIT_OK);
}
