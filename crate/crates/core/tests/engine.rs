mod common;

use std::fs;
use std::path::{Path, PathBuf};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rv_core::dsl::parse_script;
use rv_core::engine::{EngineError, SessionState};
use rv_core::stats::column_ranges;

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn pima_session() -> SessionState {
    let text = fs::read_to_string(data_dir().join("pima.rvl")).unwrap();
    SessionState::with_base_dir(parse_script(&text, "pima.rvl").unwrap(), data_dir())
}

/// Structural equality where NaN equals NaN (degenerate fits carry NaN
/// t-stats) and source spans are ignored.
fn same_state(a: &SessionState, b: &SessionState) -> bool {
    let view = |s: &SessionState| {
        format!(
            "{:?} {:?} {:?} {:?} {:?} {:?} {:?} {:?}",
            s.next_line(),
            s.output_log(),
            s.env(),
            s.tables().collect::<Vec<_>>(),
            s.results(),
            s.inference_lines(),
            s.correction_lines(),
            s.fits()
        )
    };
    a.script() == b.script() && view(a) == view(b)
}

/// Runs through each cut in turn; errors end the run as they would in one call.
fn run_partitioned(s: &mut SessionState, cuts: &[usize]) -> Option<EngineError> {
    for &c in cuts {
        if c < s.next_line() {
            continue;
        }
        if let Err(e) = s.run_to_line(c) {
            return Some(e);
        }
    }
    None
}

#[test]
fn pima_script_prints_eight_intervals() {
    let mut s = pima_session();
    assert_eq!(s.script().len(), 13);
    assert_eq!(s.next_line(), 1);
    assert!(s.env().is_empty());
    s.continue_run().unwrap();
    assert_eq!(s.ci_results().count(), 8);
    let ci_lines: Vec<_> = s
        .output_log()
        .iter()
        .filter(|o| o.text.contains("% CI"))
        .collect();
    assert_eq!(ci_lines.len(), 8);
    assert_eq!(
        ci_lines.iter().map(|o| o.line).collect::<Vec<_>>(),
        (5..=12).collect::<Vec<_>>()
    );
    assert_eq!(s.table("pima").unwrap().nrow(), 768);
    assert_eq!(s.inference_count(), 8);
}

#[test]
fn pima_replay_is_byte_identical() {
    let mut a = pima_session();
    a.continue_run().unwrap();
    let mut b = pima_session();
    b.continue_run().unwrap();
    assert_eq!(a.rendered_log(), b.rendered_log());
    a.reset();
    a.continue_run().unwrap();
    assert_eq!(a.rendered_log(), b.rendered_log());
}

#[test]
fn bonferroni_edit_on_line_12_widens_that_interval() {
    let mut s = pima_session();
    s.continue_run().unwrap();
    let before = s.ci_results().find(|(l, _)| *l == 12).unwrap().1.clone();
    s.edit_line(
        12,
        "ci_bonf diff_means(pima.Age by pima.Diab) level 0.95 k 8",
    )
    .unwrap();
    assert_eq!(s.next_line(), 12);
    s.continue_run().unwrap();
    let after = s.ci_results().find(|(l, _)| *l == 12).unwrap().1.clone();
    assert!(after.half_width() > before.half_width());
    assert_eq!(after.estimate, before.estimate);
    assert!(s
        .output_log()
        .iter()
        .any(|o| o.line == 12 && o.text.contains("Bonferroni, k = 8")));
}

#[test]
fn cleaning_pipeline() {
    let mut s = pima_session();
    s.run_to_line(3).unwrap();
    let cleaned = ["Gluc", "BP", "Thick", "Insul", "BMI"];
    let raw = column_ranges(s.table("pima").unwrap()).unwrap();
    let zeros: Vec<usize> = cleaned
        .iter()
        .map(|c| {
            s.table("pima")
                .unwrap()
                .column(c)
                .unwrap()
                .present()
                .filter(|&v| v == 0.0)
                .count()
        })
        .collect();
    for c in cleaned {
        assert_eq!(raw.get(c).unwrap().min, 0.0, "{c}");
    }
    for (i, c) in cleaned.iter().enumerate() {
        s.edit_line(4 + i, &format!("set_missing pima.{c} where == 0"))
            .unwrap();
    }
    s.run_to_line(8).unwrap();
    let t = s.table("pima").unwrap();
    let after = column_ranges(t).unwrap();
    for (c, z) in cleaned.iter().zip(zeros) {
        assert!(after.get(c).unwrap().min > 0.0, "{c}");
        assert_eq!(t.column(c).unwrap().count_missing(), z, "{c}");
    }
}

#[test]
fn append_ranges_line() {
    let mut s = pima_session();
    s.continue_run().unwrap();
    s.edit_line(14, "print ranges(pima)").unwrap();
    let out = s.continue_run().unwrap();
    assert_eq!(out.len(), 3);
    assert!(out[0]
        .text
        .split_whitespace()
        .eq(["NPreg", "Gluc", "BP", "Thick", "Insul", "BMI", "Genet", "Age", "Diab"]));
    assert!(out[1].text.starts_with("min"));
}

#[test]
fn fifty_random_scripts_split_runs_match_full_run() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..50 {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("t.csv"), common::random_table_csv(&mut rng)).unwrap();
        let text = common::random_script(&mut rng);
        let script = parse_script(&text, "r.rvl").unwrap();
        let mut whole = SessionState::with_base_dir(script.clone(), dir.path());
        let whole_err = run_partitioned(&mut whole, &[script.len()]);
        for _ in 0..4 {
            let cuts = common::random_partition(&mut rng, script.len());
            let mut split = SessionState::with_base_dir(script.clone(), dir.path());
            let split_err = run_partitioned(&mut split, &cuts);
            assert_eq!(split_err, whole_err, "case {case}\n{text}");
            assert_eq!(
                split.rendered_log(),
                whole.rendered_log(),
                "case {case} cuts {cuts:?}\n{text}"
            );
            assert!(same_state(&split, &whole), "case {case} cuts {cuts:?}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn edit_rollback_equals_fresh_prefix_run(seed in any::<u64>(), pick in any::<prop::sample::Index>(), stmt_seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("t.csv"), common::random_table_csv(&mut rng)).unwrap();
        let text = common::random_script(&mut rng);
        let script = parse_script(&text, "r.rvl").unwrap();
        let mut s = SessionState::with_base_dir(script.clone(), dir.path());
        let _ = s.continue_run();

        let k = pick.index(script.len()) + 1;
        let replacement = common::random_script(&mut ChaCha8Rng::seed_from_u64(stmt_seed))
            .lines().nth(1).unwrap().to_owned();
        let rolled_back = s.next_line() > k;
        s.edit_line(k, &replacement).unwrap();

        let mut edited: Vec<&str> = text.lines().collect();
        edited[k - 1] = &replacement;
        let edited: String = edited.iter().map(|l| format!("{l}\n")).collect();
        let mut fresh = SessionState::with_base_dir(parse_script(&edited, "r.rvl").unwrap(), dir.path());
        if rolled_back {
            let _ = fresh.run_to_line(k - 1);
            prop_assert!(same_state(&s, &fresh), "k={} {:?}", k, replacement);
        } else {
            prop_assert_eq!(s.script(), fresh.script());
        }
    }

    #[test]
    fn set_missing_removes_every_sentinel(seed in any::<u64>(), sentinel in -2i32..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("t.csv"), common::random_table_csv(&mut rng)).unwrap();
        let text = format!("load t = csv(\"t.csv\")\nset_missing t.a where == {sentinel}");
        let mut s = SessionState::with_base_dir(parse_script(&text, "x").unwrap(), dir.path());
        s.run_to_line(1).unwrap();
        let col = s.table("t").unwrap().column("a").unwrap().clone();
        let hits = col.present().filter(|&v| v == f64::from(sentinel)).count();
        let missing_before = col.count_missing();
        s.run_to_line(2).unwrap();
        let after = s.table("t").unwrap().column("a").unwrap();
        prop_assert!(after.present().all(|v| v != f64::from(sentinel)));
        prop_assert_eq!(after.count_missing() - missing_before, hits);
    }
}
