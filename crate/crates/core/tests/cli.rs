use std::process::Command;

use klsearch::harness::Report;

fn klsearch(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_klsearch"))
        .args(args)
        .output()
        .unwrap()
}

#[test]
fn csv_has_one_row_per_cell() {
    let out = klsearch(&[
        "bench", "--algo", "kls,hill", "--func", "f1", "--trials", "2",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(
        lines[0],
        "algo,func,cost_avg,cost_std,cost_min,cost_max,time_avg,time_std,trials"
    );
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("kls,f1,") && lines[1].ends_with(",2"));
}

#[test]
fn config_errors_exit_with_two() {
    for args in [
        &["bench", "--func", "f9"][..],
        &["bench", "--algo", "tabu"],
        &["bench", "--trials", "0"],
        &["bench", "--param", "temp_factor=2"],
        &["bench", "--param", "nonsense"],
        &["bench", "--format", "xml"],
        &["bench", "--config", "/nonexistent/run.cfg"],
        &["grid", "--func", "f6", "--res", "1"],
        &["frobnicate"],
    ] {
        assert_eq!(klsearch(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn unwritable_output_is_an_error() {
    let out = klsearch(&[
        "grid",
        "--func",
        "f2",
        "--res",
        "3",
        "--out",
        "/nonexistent/dir/g.csv",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let out = dir.path().join("report.json");
    std::fs::write(
        &cfg,
        "# quick run\nalgo = sa\nfunc = f2\ntrials = 4\nformat = csv\ntemp_factor = 0.9\n",
    )
    .unwrap();
    let status = klsearch(&[
        "bench",
        "--config",
        cfg.to_str().unwrap(),
        "--trials",
        "2",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ])
    .status;
    assert!(status.success());
    let report = Report::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report.trials, 2);
    assert_eq!(report.params.sa.temp_factor, 0.9);
    assert_eq!(report.cells.len(), 1);
    assert_eq!(report.cells[0].records.len(), 2);
    assert_eq!(
        report,
        Report::from_json(&report.to_json().unwrap()).unwrap()
    );
}

#[test]
fn grid_rows() {
    let out = klsearch(&["grid", "--func", "f6", "--res", "5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "x1,x2,f");
    assert_eq!(lines.len(), 26);
    assert_eq!(lines[13], "0,0,0");
}

#[test]
fn markdown_report() {
    let out = klsearch(&[
        "bench", "--algo", "all", "--func", "f1,f2", "--trials", "2", "--format", "md",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("### Results on F2"));
    assert!(text.contains("### Solution quality ranks"));
}
