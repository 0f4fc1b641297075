//! End-to-end tests driving the `morphospace` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn morphospace(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_morphospace"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn generate_checkerboard_matches_definition() {
    let dir = tempfile::tempdir().unwrap();
    let out = morphospace(
        &[
            "generate", "--kind", "ordered", "--block", "1", "--street", "1", "--size", "8",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let expected =
        "10101010\n01010101\n10101010\n01010101\n10101010\n01010101\n10101010\n01010101\n";
    assert_eq!(stdout(&out), expected);
}

#[test]
fn generate_single_particle_dla_is_center_seed() {
    let dir = tempfile::tempdir().unwrap();
    let out = morphospace(
        &[
            "generate",
            "--kind",
            "dla",
            "--particles",
            "1",
            "--size",
            "101",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 101);
    let built: Vec<(usize, usize)> = rows
        .iter()
        .enumerate()
        .flat_map(|(y, row)| {
            row.chars()
                .enumerate()
                .filter(|(_, c)| *c == '1')
                .map(move |(x, _)| (x, y))
        })
        .collect();
    assert_eq!(built, vec![(50, 50)]);
}

#[test]
fn generate_twice_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a.pgm", "b.pgm"] {
        let out = morphospace(
            &[
                "generate", "--kind", "random", "--p", "0.5", "--size", "64", "--seed", "7",
                "--out", name,
            ],
            dir.path(),
        );
        assert!(out.status.success());
    }
    let a = fs::read(dir.path().join("a.pgm")).unwrap();
    let b = fs::read(dir.path().join("b.pgm")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn measure_emits_expected_row_for_known_grids() {
    let dir = tempfile::tempdir().unwrap();
    // All-white raster: everything open.
    let pgm = format!("P2\n8 8\n255\n{}\n", "255 ".repeat(64).trim_end());
    fs::write(dir.path().join("empty.pgm"), pgm).unwrap();
    let out = morphospace(&["measure", "empty.pgm"], dir.path());
    assert!(out.status.success());
    let text = stdout(&out);
    let row = text.lines().nth(1).unwrap();
    assert!(
        row.starts_with("empty,,0.000000000,1.00000000,1.00000000,"),
        "row = {row}"
    );
}

#[test]
fn measure_hull_mode_of_lone_cell_reports_full_density() {
    let dir = tempfile::tempdir().unwrap();
    let mut rows = vec!["0".repeat(10); 10];
    rows[4].replace_range(6..7, "1");
    fs::write(dir.path().join("tiny.txt"), rows.join("\n")).unwrap();
    let out = morphospace(&["measure", "--mode", "hull", "tiny.txt"], dir.path());
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(
        text.lines()
            .nth(1)
            .unwrap()
            .starts_with("tiny,,1.00000000,"),
        "output: {text}"
    );
}

#[test]
fn measure_partial_failure_emits_good_rows_and_fails() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("ok.txt"), "0110\n1001\n0110\n1001\n").unwrap();
    let out = morphospace(&["measure", "ok.txt", "missing.txt"], dir.path());
    assert!(!out.status.success(), "missing input must fail the run");
    let text = stdout(&out);
    assert!(
        text.lines().nth(1).unwrap().starts_with("ok,"),
        "good row still emitted"
    );
    assert!(stderr(&out).contains("missing.txt"));
}

#[test]
fn measure_workers_flag_never_changes_output() {
    let dir = tempfile::tempdir().unwrap();
    let gen = morphospace(
        &[
            "generate", "--kind", "rrp", "--cells", "300", "--size", "64", "--seed", "5", "--out",
            "city.pgm",
        ],
        dir.path(),
    );
    assert!(gen.status.success());
    let one = morphospace(&["measure", "city.pgm", "--workers", "1"], dir.path());
    let eight = morphospace(&["measure", "city.pgm", "--workers", "8"], dir.path());
    assert!(one.status.success() && eight.status.success());
    assert_eq!(stdout(&one), stdout(&eight));
}

#[test]
fn measure_appends_to_dataset_file() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("g1.txt"), "0110\n1001\n0110\n1001\n").unwrap();
    fs::write(dir.path().join("g2.txt"), "1111\n0000\n1111\n0000\n").unwrap();
    let first = morphospace(&["measure", "g1.txt", "--out", "ds.csv"], dir.path());
    assert!(first.status.success());
    let second = morphospace(&["measure", "g2.txt", "--out", "ds.csv"], dir.path());
    assert!(second.status.success());
    let text = fs::read_to_string(dir.path().join("ds.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "label,category,De,iPe,I,population,source");
    assert!(lines[1].starts_with("g1,"));
    assert!(lines[2].starts_with("g2,"));
}

#[test]
fn resample_flag_changes_grid_before_measuring() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("half.txt"),
        "11000000\n11000000\n11000000\n11000000\n11000000\n11000000\n11000000\n11000000\n",
    )
    .unwrap();
    let out = morphospace(&["measure", "half.txt", "--resample", "4x4"], dir.path());
    assert!(out.status.success());
    // Left quarter built at 8x8 stays a quarter at 4x4.
    let text = stdout(&out);
    assert!(
        text.lines()
            .nth(1)
            .unwrap()
            .starts_with("half,,0.250000000,"),
        "{text}"
    );
}

#[test]
fn plot_empty_dataset_produces_three_valid_svgs() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("ds.csv"),
        "label,category,De,iPe,I,population,source\n",
    )
    .unwrap();
    let out = morphospace(&["plot", "ds.csv", "--out-dir", "plots"], dir.path());
    assert!(out.status.success());
    for name in ["de_ipe.svg", "de_i.svg", "ipe_i.svg"] {
        let svg = fs::read_to_string(dir.path().join("plots").join(name)).unwrap();
        assert!(svg.starts_with("<?xml"), "{name} is valid xml");
        assert!(svg.contains("</svg>"), "{name} closes");
    }
}

#[test]
fn plot_reports_line_number_of_malformed_row() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("bad.csv"),
        "label,category,De,iPe,I,population,source\na,,0.5,0.5,0.5,,s\nb,,bogus,0.5,0.5,,s\n",
    )
    .unwrap();
    let out = morphospace(&["plot", "bad.csv"], dir.path());
    assert!(!out.status.success());
    assert!(stderr(&out).contains("line 3"), "stderr: {}", stderr(&out));
}

#[test]
fn plot_twice_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let gen = morphospace(
        &[
            "generate",
            "--kind",
            "dispersed",
            "--spacing",
            "6",
            "--size",
            "48",
            "--measure",
            "ds.csv",
            "--out",
            "grid.txt",
        ],
        dir.path(),
    );
    assert!(gen.status.success());
    for sub in ["p1", "p2"] {
        let out = morphospace(&["plot", "ds.csv", "--out-dir", sub], dir.path());
        assert!(out.status.success());
    }
    for name in ["de_ipe.svg", "de_i.svg", "ipe_i.svg"] {
        let a = fs::read(dir.path().join("p1").join(name)).unwrap();
        let b = fs::read(dir.path().join("p2").join(name)).unwrap();
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn classify_uses_default_bands() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("ds.csv"),
        "label,category,De,iPe,I,population,source\n\
         mid,,0.450000000,0.500000000,0.300000000,,s\n\
         sparse,,0.0500000000,0.950000000,0.300000000,,s\n\
         corner,,0.950000000,0.0100000000,0.950000000,,s\n",
    )
    .unwrap();
    let out = morphospace(&["classify", "ds.csv"], dir.path());
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "mid,urban-band\nsparse,non-urban\ncorner,unoccupied\n"
    );
}

#[test]
fn classify_accepts_custom_band_table() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("ds.csv"),
        "label,category,De,iPe,I,population,source\np,,0.5,0.5,0.5,,s\n",
    )
    .unwrap();
    fs::write(
        dir.path().join("bands.json"),
        r#"[{"name":"all","de":[0.0,1.0],"ipe":[0.0,1.0],"i":[0.0,1.0]}]"#,
    )
    .unwrap();
    let out = morphospace(&["classify", "ds.csv", "--bands", "bands.json"], dir.path());
    assert!(out.status.success());
    assert_eq!(stdout(&out), "p,all\n");

    fs::write(dir.path().join("broken.json"), "{not json").unwrap();
    let bad = morphospace(
        &["classify", "ds.csv", "--bands", "broken.json"],
        dir.path(),
    );
    assert!(!bad.status.success());
}

#[test]
fn anneal_trace_is_emitted_and_monotone_under_greedy() {
    let dir = tempfile::tempdir().unwrap();
    let out = morphospace(
        &[
            "generate",
            "--kind",
            "anneal",
            "--size",
            "32",
            "--steps",
            "200",
            "--p",
            "0.4",
            "--trace",
            "trace.csv",
            "--out",
            "final.txt",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let trace = fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    let mut lines = trace.lines();
    assert_eq!(lines.next(), Some("step,H,accepted"));
    let mut last = f64::INFINITY;
    let mut rows = 0;
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 3);
        if fields[2] == "true" {
            let h: f64 = fields[1].parse().unwrap();
            assert!(h <= last, "trace H must not rise at accepted steps");
            last = h;
        }
        rows += 1;
    }
    assert_eq!(rows, 200);
}
