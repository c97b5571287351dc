mod common;

use std::fs;
use std::sync::Arc;
use std::thread;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rv_core::dsl::{format_script, parse_script};
use rv_core::engine::SessionState;
use rv_core::store::{diff_lines, BranchStore, StoreError};

fn script_from_seed(seed: u64) -> rv_core::dsl::Script {
    parse_script(
        &common::random_script(&mut ChaCha8Rng::seed_from_u64(seed)),
        "r.rvl",
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn save_then_load_round_trips(seed in any::<u64>(), desc in "[a-zA-Z0-9 ,.()=_-]{1,40}") {
        let dir = tempfile::tempdir().unwrap();
        let store = BranchStore::new(dir.path());
        let script = script_from_seed(seed);
        let orig = store.ensure_original(&script, "r").unwrap();
        prop_assert_eq!(orig.number, 0);
        let rec = store.save_branch(&script, "r", &desc, Some(0)).unwrap();
        prop_assert_eq!(rec.number, 1);
        prop_assert_eq!(&rec.description, desc.trim());
        let (back, back_rec) = store.load_branch("r", 1).unwrap();
        prop_assert_eq!(&back, &script);
        prop_assert_eq!(back_rec, rec);
        prop_assert_eq!(format_script(&back), format_script(&script));
    }

    #[test]
    fn lineage_is_acyclic(parents in prop::collection::vec(any::<prop::sample::Index>(), 1..8)) {
        let dir = tempfile::tempdir().unwrap();
        let store = BranchStore::new(dir.path());
        let script = script_from_seed(1);
        store.ensure_original(&script, "r").unwrap();
        for (i, p) in parents.iter().enumerate() {
            // any existing branch may be the parent
            let parent = p.index(i + 1) as u32;
            let rec = store.save_branch(&script, "r", &format!("step {i}"), Some(parent)).unwrap();
            prop_assert_eq!(rec.number, i as u32 + 1);
        }
        let recs = store.list_branches("r").unwrap();
        prop_assert_eq!(recs.len(), parents.len() + 1);
        for r in &recs {
            if let Some(p) = &r.parent {
                prop_assert!(p.number < r.number);
            }
            // walking parents reaches the original
            let mut cur = r.clone();
            let mut steps = 0;
            while let Some(p) = cur.parent.clone() {
                cur = recs[p.number as usize].clone();
                steps += 1;
                prop_assert!(steps <= recs.len());
            }
            prop_assert_eq!(cur.number, 0);
        }
    }

    #[test]
    fn diff_is_mirrored_and_minimal(
        a in prop::collection::vec("[abc]", 0..12),
        b in prop::collection::vec("[abc]", 0..12),
    ) {
        let a: Vec<&str> = a.iter().map(String::as_str).collect();
        let b: Vec<&str> = b.iter().map(String::as_str).collect();
        let ab = diff_lines(&a, &b);
        let ba = diff_lines(&b, &a);
        prop_assert_eq!(ba, ab.iter().map(|e| e.mirrored()).collect::<Vec<_>>());
        prop_assert_eq!(ab.is_empty(), a == b);
        // each side's text matches its line number
        for e in &ab {
            if let (Some(l), Some(t)) = (e.left_line, &e.left) { prop_assert_eq!(a[l - 1], t.as_str()); }
            if let (Some(r), Some(t)) = (e.right_line, &e.right) { prop_assert_eq!(b[r - 1], t.as_str()); }
        }
        // untouched lines form a common subsequence of equal length on both sides
        let keep_a: Vec<&str> = (1..=a.len()).filter(|i| !ab.iter().any(|e| e.left_line == Some(*i))).map(|i| a[i - 1]).collect();
        let keep_b: Vec<&str> = (1..=b.len()).filter(|j| !ab.iter().any(|e| e.right_line == Some(*j))).map(|j| b[j - 1]).collect();
        prop_assert_eq!(keep_a, keep_b);
    }
}

#[test]
fn tampered_body_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let store = BranchStore::new(dir.path());
    store.ensure_original(&script_from_seed(3), "r").unwrap();
    let path = store.path_for("r", 0);
    let text = fs::read_to_string(&path).unwrap();
    fs::write(&path, format!("{text}print 1\n")).unwrap();
    assert!(matches!(
        store.load_branch("r", 0),
        Err(StoreError::Integrity { .. })
    ));
}

#[test]
fn concurrent_saves_get_distinct_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let store = Arc::new(BranchStore::new(dir.path()));
    let script = Arc::new(script_from_seed(4));
    store.ensure_original(&script, "r").unwrap();
    let handles: Vec<_> = (0..8)
        .map(|i| {
            let (store, script) = (Arc::clone(&store), Arc::clone(&script));
            thread::spawn(move || {
                store
                    .save_branch(&script, "r", &format!("t{i}"), Some(0))
                    .unwrap()
                    .number
            })
        })
        .collect();
    let mut nums: Vec<u32> = handles.into_iter().map(|h| h.join().unwrap()).collect();
    nums.sort_unstable();
    assert_eq!(nums, (1..=8).collect::<Vec<_>>());
}

#[test]
fn branch_file_replays_in_another_tree() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let csv = common::random_table_csv(&mut rng);
    let script = parse_script(&common::random_script(&mut rng), "r.rvl").unwrap();

    let work = tempfile::tempdir().unwrap();
    fs::write(work.path().join("t.csv"), &csv).unwrap();
    let store = BranchStore::new(work.path());
    store.ensure_original(&script, "r").unwrap();
    store.save_branch(&script, "r", "copy", Some(0)).unwrap();
    let mut here = SessionState::with_base_dir(store.load_branch("r", 1).unwrap().0, work.path());
    let _ = here.continue_run();

    // only the branch file and the data travel
    let other = tempfile::tempdir().unwrap();
    fs::write(other.path().join("t.csv"), &csv).unwrap();
    let text = fs::read_to_string(store.path_for("r", 1)).unwrap();
    fs::write(other.path().join("r.1.rvl"), &text).unwrap();
    // the header lines are comments, so the file runs as-is
    let raw = parse_script(
        &fs::read_to_string(other.path().join("r.1.rvl")).unwrap(),
        "r.1.rvl",
    )
    .unwrap();
    let mut there = SessionState::with_base_dir(raw, other.path());
    let _ = there.continue_run();
    let strip = |log: String| {
        log.lines()
            .map(|l| l.split_once(' ').unwrap().1.to_owned())
            .collect::<Vec<_>>()
    };
    assert_eq!(strip(here.rendered_log()), strip(there.rendered_log()));
}
