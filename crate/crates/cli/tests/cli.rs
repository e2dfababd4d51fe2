//! Runs the `ahpfill` binary end to end.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ahpfill"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn complete_worked_example_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("done.csv");
    let o = run(&[
        "complete",
        data("worked_example.csv").to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let summary = stdout(&o);
    assert!(summary.starts_with("2 cells filled"), "{summary}");
    assert!(summary.contains("CR=0.0000"), "{summary}");
    assert!(summary.contains("rho(N)=0.2374"), "{summary}");
    let body = fs::read_to_string(&out).unwrap();
    assert_eq!(
        body.lines().nth(1),
        Some("1.000000,2.000000,4.000000,8.000000")
    );
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn complete_matrix_passes_through() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "full.csv", "A,B,C\n1,2,6\n1/2,1,3\n1/6,1/3,1\n");
    let first = run(&["complete", &input]);
    assert_eq!(first.status.code(), Some(0));
    assert!(stderr(&first).starts_with("0 cells filled"));
    let again = write(dir.path(), "again.csv", &stdout(&first));
    let second = run(&["complete", &again]);
    assert_eq!(stdout(&first), stdout(&second));
}

#[test]
fn disconnected_input_names_components_and_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(
        dir.path(),
        "split.csv",
        "A,B,C,D\n1,2,*,*\n1/2,1,*,*\n*,*,1,3\n*,*,1/3,1\n",
    );
    let out = dir.path().join("never.csv");
    let o = run(&["complete", &input, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("{A, B} and {C, D}"), "{}", stderr(&o));
    assert_eq!(stderr(&o).lines().count(), 1);
    assert!(!out.exists());
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.csv", "A,B\n1,x\n*,1\n");
    let o = run(&["complete", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2, column 2"), "{}", stderr(&o));

    let o = run(&["complete", dir.path().join("missing.csv").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["complete", &bad, "--mode", "sideways"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn typo_pairs_need_a_looser_tolerance() {
    let comparisons = data("tennis_comparisons.csv");
    let o = run(&["rank", comparisons.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--reciprocity-tol"));

    let o = run(&[
        "rank",
        comparisons.to_str().unwrap(),
        "--reciprocity-tol",
        "0.1",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let ranking = stdout(&o);
    let lines: Vec<&str> = ranking.lines().collect();
    assert_eq!(lines[0], "rank,label,priority");
    assert_eq!(lines.len(), 26);
    let top: Vec<&str> = lines[1..3]
        .iter()
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    assert!(
        top.contains(&"Nadal") && top.contains(&"Federer"),
        "{top:?}"
    );
    assert!(lines[1].ends_with(",0.0503") && lines[2].ends_with(",0.0503"));
    assert_eq!(lines[3], "3,Sampras,0.0467");
    assert!(stderr(&o).contains("Becker vs Kafelnikov reconciled"));
}

#[test]
fn head_to_head_single_pair() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "h2h.csv", "A,B\n,1/4\n3/4,\n");
    for transform in ["odds", "smoothed:1", "smoothed:0.5"] {
        let o = run(&[
            "rank",
            &input,
            "--kind",
            "headtohead",
            "--transform",
            transform,
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        assert_eq!(
            stdout(&o).lines().nth(1).unwrap().split(',').nth(1),
            Some("B")
        );
    }
    let o = run(&[
        "rank",
        &input,
        "--kind",
        "headtohead",
        "--transform",
        "cubic",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn head_to_head_tennis_table() {
    let o = run(&[
        "rank",
        data("tennis_headtohead.csv").to_str().unwrap(),
        "--kind",
        "headtohead",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 26);
}

#[test]
fn rank_of_consistent_matrix_follows_weights() {
    let dir = tempfile::tempdir().unwrap();
    let w = [3.0, 9.0, 1.0, 4.5, 2.0];
    let mut body = String::from("A,B,C,D,E\n");
    for i in 0..5 {
        let row: Vec<String> = (0..5)
            .map(|j| {
                if (i + j) % 4 == 1 && i != j {
                    "*".to_string()
                } else {
                    format!("{}", w[i] / w[j])
                }
            })
            .collect();
        body.push_str(&row.join(","));
        body.push('\n');
    }
    let input = write(dir.path(), "w.csv", &body);
    let o = run(&["rank", &input]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let order: Vec<String> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().to_string())
        .collect();
    assert_eq!(order, ["B", "D", "A", "E", "C"]);
}

#[test]
fn consistency_reports() {
    let dir = tempfile::tempdir().unwrap();
    let two = write(dir.path(), "two.csv", "A,B\n1,7\n1/7,1\n");
    let o = run(&["consistency", &two]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("CI=0.0000"));
    assert!(stdout(&o).trim_end().ends_with("ACCEPT"));

    // Largest root of the characteristic polynomial, found by bisection.
    let lambda: f64 = 3.01829470728963;
    let ci = (lambda - 3.0) / 2.0;
    let three = write(
        dir.path(),
        "three.csv",
        "A,B,C\n1,2,6\n1/2,1,2\n1/6,1/2,1\n",
    );
    let o = run(&["consistency", &three]);
    assert_eq!(
        stdout(&o),
        format!(
            "lambda_max={lambda:.4} CI={ci:.4} RI=0.52 CR={:.4} ACCEPT\n",
            ci / 0.52
        )
    );

    let bad = write(dir.path(), "bad.csv", "A,B,C\n1,9,1/9\n1/9,1,9\n9,1/9,1\n");
    let o = run(&["consistency", &bad]);
    assert!(stdout(&o).trim_end().ends_with("REJECT"));

    let incomplete = write(dir.path(), "inc.csv", "A,B,C\n1,2,*\n1/2,1,3\n*,1/3,1\n");
    assert_eq!(run(&["consistency", &incomplete]).status.code(), Some(2));
}

#[test]
fn dematel_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let total = dir.path().join("t.csv");
    let prom = dir.path().join("p.csv");
    let o = run(&[
        "dematel",
        data("worked_example_direct.csv").to_str().unwrap(),
        "--out",
        total.to_str().unwrap(),
        "--prominence",
        prom.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let t = fs::read_to_string(&total).unwrap();
    let t14: f64 = t
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .nth(3)
        .unwrap()
        .parse()
        .unwrap();
    assert!((t14 - 0.6742).abs() < 5e-5, "{t14}");
    let p = fs::read_to_string(&prom).unwrap();
    assert_eq!(
        p.lines().next(),
        Some("label,R,C,prominence,relation,category")
    );
    assert!(p.lines().nth(1).unwrap().ends_with(",cause"));

    let zero = write(dir.path(), "zero.csv", "A,B,C\n0,0,0\n0,0,0\n0,0,0\n");
    let o = run(&["dematel", &zero]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("identically zero"));
}

#[test]
fn balanced_overwrite_is_a_numerical_failure() {
    let dir = tempfile::tempdir().unwrap();
    let ones = write(dir.path(), "ones.csv", "A,B,C\n1,1,1\n1,1,1\n1,1,1\n");
    let o = run(&["complete", &ones, "--mode", "overwrite"]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
    let o = run(&["complete", &ones]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn bench_outputs() {
    let o = run(&["bench", "--trials", "6", "--n", "7", "--missing", "0.3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "trial,n,missing_pairs,max_log_error,kendall_tau,cr_after"
    );
    assert_eq!(lines.len(), 1 + 6 + 2);
    assert!(lines[7].starts_with("mean,7.00,6.00,"));

    let o = run(&["bench", "--trials", "3", "--timing"]);
    assert!(stdout(&o)
        .lines()
        .next()
        .unwrap()
        .ends_with(",wall_time_ms"));

    let o = run(&["bench", "--n", "4", "--missing", "0.9", "--trials", "2"]);
    assert_eq!(o.status.code(), Some(5));

    let o = run(&["bench", "--missing", "1.5"]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&[
        "bench",
        "--trials",
        "3",
        "--ladder",
        "5,10",
        "--repeats",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("n,median_wall_time_ms\n5,"));
    assert!(text.contains("# log-log slope: "));
}
