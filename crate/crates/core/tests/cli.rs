use std::path::Path;
use std::process::{Command, Output};

use deltakit::cli::InvariantReport;

fn deltakit(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_deltakit"))
        .args(args)
        .env("DELTAKIT_CACHE_DIR", cache)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn reports(o: &Output) -> Vec<InvariantReport> {
    stdout(o)
        .lines()
        .map(|l| serde_json::from_str(l).expect("each line is a report"))
        .collect()
}

fn report<'a>(rs: &'a [InvariantReport], name: &str) -> &'a InvariantReport {
    rs.iter()
        .find(|r| r.invariant == name)
        .unwrap_or_else(|| panic!("no {name} report"))
}

fn write_examples(dir: &Path) {
    let o = deltakit(&["examples", dir.to_str().unwrap()], dir);
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn group_reports_match_known_values() {
    let cache = tempfile::tempdir().unwrap();
    let o = deltakit(&["--format", "json", "group", "5"], cache.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rs = reports(&o);
    assert_eq!(
        report(&rs, "davenport").value,
        deltakit::cli::Value::Integer(5)
    );
    let md = report(&rs, "max_delta");
    assert_eq!(md.value, deltakit::cli::Value::Integer(3));
    assert!(md.certified);
    assert!(md.anchor.is_some());
    assert_eq!(
        report(&rs, "catenary").value,
        deltakit::cli::Value::Integer(5)
    );
    assert!(report(&rs, "bounds").certified);

    let o = deltakit(&["--format", "json", "group", "2", "4"], cache.path());
    let rs = reports(&o);
    assert_eq!(
        report(&rs, "max_delta").value,
        deltakit::cli::Value::Integer(2)
    );
    assert_eq!(
        report(&rs, "catenary").value,
        deltakit::cli::Value::Integer(4)
    );

    let o = deltakit(&["--format", "json", "group", "1"], cache.path());
    let rs = reports(&o);
    assert_eq!(
        report(&rs, "delta").value,
        deltakit::cli::Value::Set(vec![])
    );
}

#[test]
fn group_refuses_large_orders_and_regions() {
    let cache = tempfile::tempdir().unwrap();
    let o = deltakit(&["group", "100"], cache.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("max-order"));
    let o = deltakit(
        &["--no-cache", "group", "7", "--limit", "1000"],
        cache.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("region"), "{}", stderr(&o));
}

#[test]
fn short_scans_are_flagged_incomplete() {
    let cache = tempfile::tempdir().unwrap();
    let o = deltakit(
        &["--format", "json", "group", "6", "--caps", "seq=4"],
        cache.path(),
    );
    assert_eq!(o.status.code(), Some(1));
    let rs = reports(&o);
    let md = report(&rs, "max_delta");
    assert_eq!(md.status, deltakit::cli::Status::Incomplete);
    assert!(!md.certified);
}

#[test]
fn tblock_order_two_case_one() {
    let dir = tempfile::tempdir().unwrap();
    write_examples(dir.path());
    let spec = dir.path().join("order2_d2_d2.json");
    let o = deltakit(
        &[
            "--format",
            "json",
            "tblock",
            "--thm33",
            spec.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rs = reports(&o);
    let md = report(&rs, "max_delta");
    assert_eq!(md.value, deltakit::cli::Value::Integer(4));
    assert!(md.certified);
    assert_eq!(
        report(&rs, "catenary").value,
        deltakit::cli::Value::Integer(6)
    );
    assert_eq!(
        report(&rs, "order_two_witness").value,
        deltakit::cli::Value::Set(vec![2, 6])
    );
    for r in &rs {
        assert_eq!(r.spec_digest.len(), 64);
        assert_eq!(r.region.seq_len_cap, Some(6));
    }
}

#[test]
fn tblock_cyclic_pair_and_trivial_group() {
    let dir = tempfile::tempdir().unwrap();
    write_examples(dir.path());
    let spec = dir.path().join("cyclic_pair_n3.json");
    let o = deltakit(
        &["--format", "json", "tblock", spec.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rs = reports(&o);
    assert_eq!(
        report(&rs, "delta").value,
        deltakit::cli::Value::Set(vec![1, 2, 3])
    );
    assert!(report(&rs, "interval").certified);

    let spec = dir.path().join("trivial_group_rank2_rank1.json");
    let o = deltakit(
        &["--format", "json", "tblock", spec.to_str().unwrap()],
        dir.path(),
    );
    let rs = reports(&o);
    assert_eq!(
        report(&rs, "delta").value,
        deltakit::cli::Value::Set(vec![1])
    );
    assert!(report(&rs, "trivial_group").certified);

    let o = deltakit(&["tblock", "--thm33", spec.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("order 2"));
}

#[test]
fn malformed_spec_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("bad.json");
    std::fs::write(
        &spec,
        "{\n  \"group\": [2],\n  \"components\": [\n    {\"rank\": \"two\"}\n  ]\n}\n",
    )
    .unwrap();
    let o = deltakit(&["tblock", spec.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 4"), "{}", stderr(&o));
}

#[test]
fn bad_flags_are_usage_errors() {
    let cache = tempfile::tempdir().unwrap();
    assert_eq!(
        deltakit(&["group", "4", "--caps", "len=3"], cache.path())
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        deltakit(&["frobnicate"], cache.path()).status.code(),
        Some(2)
    );
    assert_eq!(
        deltakit(&["--format", "yaml", "group", "3"], cache.path())
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn verify_bundled_corpus_passes() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    write_examples(&corpus);
    let o = deltakit(&["verify", corpus.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).contains("0 failed, 0 unreadable"));
}

#[test]
fn verify_flags_corrupt_and_failing_specs() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    write_examples(&corpus);
    std::fs::write(corpus.join("zz_broken.json"), "{ \"group\": [2], ").unwrap();
    let o = deltakit(&["verify", corpus.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("zz_broken"));

    let failing = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(corpus.join("cyclic_pair_n3.json")).unwrap();
    let mut spec: serde_json::Value = serde_json::from_str(&text).unwrap();
    spec["expect"]["max_delta"] = serde_json::json!(7);
    std::fs::write(failing.path().join("wrong.json"), spec.to_string()).unwrap();
    let o = deltakit(&["verify", failing.path().to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("expect.max_delta"));
}

#[test]
fn verify_empty_corpus_warns() {
    let dir = tempfile::tempdir().unwrap();
    let o = deltakit(&["verify", dir.path().to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("no spec files"));
}

#[test]
fn cache_serves_repeats_and_misses_on_new_caps() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    write_examples(dir.path());
    let spec = dir.path().join("order2_d2.json");
    let spec = spec.to_str().unwrap();
    let args = ["--format", "json", "tblock", spec];
    let first = deltakit(&args, &cache);
    assert!(first.status.success());
    let entries = std::fs::read_dir(&cache).unwrap().count();
    assert!(entries > 0);

    // Plant a recognizable value to prove the second run reads the cache.
    for e in std::fs::read_dir(&cache).unwrap() {
        let path = e.unwrap().path();
        let mut r: InvariantReport =
            serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        if r.invariant == "catenary" {
            r.runtime_ms = 987_654;
            std::fs::write(&path, serde_json::to_string(&r).unwrap()).unwrap();
        }
    }
    let second = deltakit(&args, &cache);
    assert_eq!(report(&reports(&second), "catenary").runtime_ms, 987_654);

    let other = deltakit(
        &["--format", "json", "tblock", spec, "--caps", "exp=5"],
        &cache,
    );
    assert_ne!(report(&reports(&other), "catenary").runtime_ms, 987_654);
    assert!(std::fs::read_dir(&cache).unwrap().count() > entries);

    let fresh = deltakit(&["--format", "json", "--no-cache", "tblock", spec], &cache);
    let values = |rs: Vec<InvariantReport>| {
        rs.into_iter()
            .map(|r| (r.invariant, r.value, r.status, r.certified, r.witnesses))
            .collect::<Vec<_>>()
    };
    assert_eq!(values(reports(&first)), values(reports(&fresh)));
}

#[test]
fn unwritable_cache_warns_and_continues() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "").unwrap();
    let o = deltakit(
        &[
            "--cache-dir",
            blocker.join("sub").to_str().unwrap(),
            "group",
            "3",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("not writable"));
}

#[test]
fn worker_count_does_not_change_reports() {
    let dir = tempfile::tempdir().unwrap();
    let run = |w: &str| {
        let o = deltakit(
            &[
                "--format",
                "json",
                "--no-cache",
                "--workers",
                w,
                "group",
                "2",
                "4",
            ],
            dir.path(),
        );
        reports(&o)
            .into_iter()
            .map(|r| (r.invariant, r.value, r.witnesses))
            .collect::<Vec<_>>()
    };
    assert_eq!(run("1"), run("4"));
}
