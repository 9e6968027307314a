use sharppoly::harness::{cache, compare, from_json, load, merge, persist, to_json, PersistError, RunManifest, Timing};
use sharppoly::nullsearch::{enumerate_sharp, enumerate_with_terms, SearchConfig, ShardSpec};

fn sharded(count: usize) -> SearchConfig {
    SearchConfig { shard: ShardSpec { index: 0, count }, ..Default::default() }
}

#[test]
fn d7_round_trip_is_byte_identical() {
    let report = enumerate_sharp(7, &SearchConfig::default()).unwrap();
    let manifest = RunManifest::new(vec!["enumerate".into()], serde_json::json!({"degree": 7}), &Timing::default(), true);
    let text = to_json(&report, Some(&manifest));
    let (back, m) = from_json(&text).unwrap();
    assert_eq!(m.as_ref(), Some(&manifest));
    assert_eq!(back.polynomials, report.polynomials);
    assert_eq!(back.raw_count, 4);
    assert_eq!(to_json(&back, m.as_ref()), text);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d7.json");
    persist(&path, &report, Some(&manifest)).unwrap();
    let (again, _) = load(&path).unwrap();
    assert_eq!(to_json(&again, Some(&manifest)), text);
}

#[test]
fn tampered_coefficient_fails() {
    let report = enumerate_sharp(5, &SearchConfig::default()).unwrap();
    let text = to_json(&report, None);
    // x^5 + 5x^3y + 5xy^2 + y^5: raise one 5 to 6.
    let tampered = text.replacen("\"num\": \"5\"", "\"num\": \"6\"", 1);
    assert_ne!(tampered, text);
    assert!(matches!(from_json(&tampered), Err(PersistError::Verification(_))));

    let unreduced = text.replacen("\"num\": \"5\",\n          \"den\": \"1\"", "\"num\": \"10\",\n          \"den\": \"2\"", 1);
    assert_ne!(unreduced, text);
    assert!(matches!(from_json(&unreduced), Err(PersistError::Schema(_))));

    let fp = text.replacen(&report.fingerprint, "000000000000000000000000", 1);
    assert!(matches!(from_json(&fp), Err(PersistError::Schema(_))));
}

#[test]
fn shard_fragments_merge_to_single_run() {
    for (d, n) in [(9, None), (11, None), (6, Some(5)), (3, Some(4))] {
        let run = |cfg: &SearchConfig| match n {
            None => enumerate_sharp(d, cfg).unwrap(),
            Some(n) => enumerate_with_terms(d, n, cfg).unwrap(),
        };
        let single = run(&SearchConfig::default());
        let single_text = to_json(&single, None);
        for count in [2, 3, 7] {
            let fragments: Vec<_> = (0..count)
                .map(|index| {
                    let mut cfg = sharded(count);
                    cfg.shard.index = index;
                    run(&cfg)
                })
                .collect();
            let merged = merge(&fragments).unwrap();
            assert!(compare(&merged, &single).agree());
            assert_eq!(to_json(&merged, None), single_text, "d={d} shards={count}");
        }
    }
}

#[test]
fn output_independent_of_jobs() {
    let one = enumerate_sharp(9, &SearchConfig { jobs: Some(1), ..Default::default() }).unwrap();
    let four = enumerate_sharp(9, &SearchConfig { jobs: Some(4), ..Default::default() }).unwrap();
    assert_eq!(to_json(&one, None), to_json(&four, None));
}

#[test]
fn incomplete_merge_is_flagged() {
    let mut cfg = sharded(3);
    cfg.shard.index = 1;
    let part = enumerate_sharp(7, &cfg).unwrap();
    let merged = merge(std::slice::from_ref(&part)).unwrap();
    assert!(!merged.shard_map.is_complete());
    assert!(merge(&[part.clone(), part]).is_err());
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let report = enumerate_sharp(7, &SearchConfig::default()).unwrap();
    assert!(cache::lookup(dir.path(), &report.fingerprint, report.backend).is_none());
    let path = cache::store(dir.path(), &report).unwrap();
    assert!(path.ends_with(format!("{}-nullspace.json", report.fingerprint)));
    let hit = cache::lookup(dir.path(), &report.fingerprint, report.backend).unwrap();
    assert_eq!(hit.polynomials, report.polynomials);
    std::fs::write(&path, "{}").unwrap();
    assert!(cache::lookup(dir.path(), &report.fingerprint, report.backend).is_none());
}
