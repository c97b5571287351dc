//! Random small tables and scripts for split-run and replay tests.
#![allow(dead_code)]

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;

/// CSV with columns a, b, c (numeric, some NA and zeros) and g (0/1).
pub fn random_table_csv<R: Rng>(rng: &mut R) -> String {
    let n = rng.gen_range(12..40);
    let mut csv = String::from("a,b,c,g\n");
    for i in 0..n {
        let g = i % 2;
        let cell = |rng: &mut R, scale: f64| -> String {
            match rng.gen_range(0..20) {
                0 => "NA".to_owned(),
                1 => "0".to_owned(),
                _ => format!("{:.3}", rng.gen_range(-1.0..1.0) * scale + g as f64),
            }
        };
        let (a, b, c) = (cell(rng, 5.0), cell(rng, 2.0), cell(rng, 10.0));
        writeln!(csv, "{a},{b},{c},{g}").unwrap();
    }
    csv
}

const COLS: [&str; 3] = ["a", "b", "c"];

fn random_stmt<R: Rng>(rng: &mut R) -> String {
    let col = *COLS.choose(rng).unwrap();
    let other = *COLS.choose(rng).unwrap();
    match rng.gen_range(0..16) {
        0 => format!("print mean(t.{col})"),
        1 => format!("print sd(t.{col})"),
        2 => format!("print median(t.{col})"),
        3 => format!("let v = t.{col}"),
        4 => "print n_missing(v)".to_owned(),
        5 => format!("set_missing t.{col} where == 0"),
        6 => format!(
            "ci diff_means(t.{col} by t.g) level 0.9{}",
            rng.gen_range(0..10)
        ),
        7 => format!(
            "ci_bonf diff_means(t.{col} by t.g) level 0.95 k {}",
            rng.gen_range(1..9)
        ),
        8 => format!("model m = lm({col} ~ {other}) on t"),
        9 => "print coef_audit(m)".to_owned(),
        10 => "print ranges(t)".to_owned(),
        11 => format!("print mad_scores(t.{col})"),
        12 => "# note".to_owned(),
        13 => String::new(),
        14 => format!("print max(t.{col})"),
        _ => "print undefined_name".to_owned(),
    }
}

/// A script that starts by loading `t.csv`; later lines may fail at run time.
pub fn random_script<R: Rng>(rng: &mut R) -> String {
    let n = rng.gen_range(1..15);
    let mut text = String::from("load t = csv(\"t.csv\")\n");
    for _ in 0..n {
        // keep failing lines rare so most scripts run to the end
        let mut s = random_stmt(rng);
        if s.contains("undefined_name") && rng.gen_bool(0.7) {
            s = "print nrow(t)".to_owned();
        }
        text.push_str(&s);
        text.push('\n');
    }
    text
}

/// Increasing cut points ending at `len`, e.g. [2, 5, 9] for len 9.
pub fn random_partition<R: Rng>(rng: &mut R, len: usize) -> Vec<usize> {
    let mut cuts: Vec<usize> = (1..len).filter(|_| rng.gen_bool(0.35)).collect();
    cuts.push(len);
    cuts
}
