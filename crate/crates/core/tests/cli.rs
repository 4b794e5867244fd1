//! The command-line interface: file formats, outputs and exit codes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use oqs_market::scenario::{parse_matrix_dump, CSV_HEADER};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_oqs-market"))
}

fn packaged(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn small_config(segments: &str, output: &Path) -> String {
    format!(
        "n = 15\nx_min = -1\nx_max = 1\ndt = 0.01\nsigma = 0.4\nnu_u = 0.2\nnu_d = 0.2\n\
         segments = {segments}\ninitial = gaussian(0.2)\nrecord_stride = 10\noutput_path = {}\n",
        output.display()
    )
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn one_step_dump_has_the_golden_centre() {
    let out = bin().arg("one-step").arg(packaged("one_step.cfg")).output().unwrap();
    assert!(out.status.success());
    let rho = parse_matrix_dump(&stdout(&out)).unwrap();
    assert_eq!(rho.dim(), 21);
    assert!((rho.get(11, 11).re - 0.9968).abs() < 1e-15);
}

#[test]
fn type_two_dump_depends_on_seed() {
    let run = |seed: &str| {
        let out = bin().args(["--seed", seed, "one-step"]).arg(packaged("one_step_type2.cfg")).output().unwrap();
        assert!(out.status.success());
        stdout(&out)
    };
    assert_eq!(run("3"), run("3"));
    assert_ne!(run("3"), run("4"));
}

#[test]
fn run_writes_identical_csv_twice_and_a_final_state() {
    let dir = tempfile::tempdir().unwrap();
    let csv_a = dir.path().join("a.csv");
    let csv_b = dir.path().join("b.csv");
    let cfg_a = write_config(dir.path(), "a.cfg", &small_config("30:nonclassical, 25:classical", &csv_a));
    let cfg_b = write_config(dir.path(), "b.cfg", &small_config("30:nonclassical, 25:classical", &csv_b));
    let out = bin().arg("run").arg(&cfg_a).arg(&cfg_b).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let a = std::fs::read(&csv_a).unwrap();
    assert_eq!(a, std::fs::read(&csv_b).unwrap());
    let text = String::from_utf8(a).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    let steps: Vec<&str> = lines[1..].iter().map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(steps, ["0", "10", "20", "30", "40", "50", "55"]);
    // min_eigenvalue only on the first of every ten records
    assert!(!lines[1].ends_with(','));
    assert!(lines[2].ends_with(','));

    let dump = std::fs::read_to_string(dir.path().join("a.final_state.txt")).unwrap();
    let rho = parse_matrix_dump(&dump).unwrap();
    assert!((rho.trace().re - 1.0).abs() < 1e-12);
}

#[test]
fn zero_segment_run_prints_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let body = small_config("", Path::new("unused.csv")).replace("output_path = unused.csv\n", "");
    let cfg = write_config(dir.path(), "empty.cfg", &body);
    let out = bin().arg("run").arg(&cfg).output().unwrap();
    assert!(out.status.success());
    assert_eq!(stdout(&out), format!("{CSV_HEADER}\n"));
}

#[test]
fn config_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bad.cfg", "n = 5\nrecord_stride = 0\n");
    let out = bin().arg("run").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let missing = bin().arg("run").arg(dir.path().join("absent.cfg")).output().unwrap();
    assert_eq!(missing.status.code(), Some(1));
    let usage = bin().arg("frobnicate").output().unwrap();
    assert_eq!(usage.status.code(), Some(1));
}

#[test]
fn health_abort_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let body = small_config("5:nonclassical", &dir.path().join("x.csv")).replace("nu_d = 0.2", "nu_d = 0.05");
    let cfg = write_config(dir.path(), "asym.cfg", &body);
    let out = bin().arg("run").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("step 1"));
}

#[test]
fn oracle_prints_first_order_table() {
    let out = bin().args(["oracle", "--n", "5", "--t", "1", "--dts", "0.01,0.005"]).output().unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "dt,steps,max_error,ratio,order");
    let ratio: f64 = rows[2].split(',').nth(3).unwrap().parse().unwrap();
    assert!((ratio - 2.0).abs() < 0.2);
    let too_big = bin().args(["oracle", "--n", "13"]).output().unwrap();
    assert_eq!(too_big.status.code(), Some(1));
}

#[test]
fn analyze_reads_a_dump() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("state.txt");
    let out = bin().arg("one-step").arg(packaged("one_step.cfg")).arg("--output").arg(&dump).output().unwrap();
    assert!(out.status.success());
    let out = bin().arg("analyze").arg(&dump).args(["--x-min", "-1", "--x-max", "1"]).output().unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    let field = |key: &str| -> String {
        text.lines()
            .find_map(|l| l.strip_prefix(&format!("{key} = ")))
            .unwrap_or_else(|| panic!("no {key} in {text}"))
            .to_string()
    };
    assert_eq!(field("dim"), "21");
    let p_ent: f64 = field("p_ent").parse().unwrap();
    assert!(p_ent > 0.0 && p_ent < 1.0);
    let d2: f64 = field("d2_power").parse().unwrap();
    let a = 0.1296 * 0.01;
    assert!((d2 - (a * a + a * a / 2.0)).abs() < 1e-18);
}
