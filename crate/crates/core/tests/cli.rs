use std::process::{Command, Output};

use gk_secrecy::cli::{format_float, CSV_HEADER};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gk-secrecy"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field<'a>(line: &'a str, key: &str) -> &'a str {
    line.split_whitespace()
        .find_map(|t| t.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .unwrap_or_else(|| panic!("no {key} in {line}"))
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    lines.map(|l| l.split(',').map(str::to_string).collect()).collect()
}

const BASE: &[&str] = &["--kd", "2", "--md", "2.5", "--ke", "2", "--me", "2.5", "--snr-e-db", "15"];

#[test]
fn eval_reports_eve_variance_and_flags_the_expansion() {
    let mut args = vec!["eval"];
    args.extend_from_slice(BASE);
    args.extend_from_slice(&["--snr-d-db", "15"]);
    let o = run(&args);
    assert!(o.status.success());
    let out = stdout(&o);
    let line = out.lines().next().unwrap();
    let var: f64 = field(line, "sigma_e_sq").parse().unwrap();
    assert!((var - 1100.0).abs() < 1e-9, "{var}");
    assert_eq!(field(line, "validity_warning"), "true");
}

#[test]
fn eval_all_methods_agree_roughly() {
    let mut args = vec!["eval"];
    args.extend_from_slice(BASE);
    args.extend_from_slice(&["--snr-d-db", "20", "--method", "all", "--mc-samples", "200000"]);
    let o = run(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    let lines: Vec<_> = out.lines().collect();
    assert_eq!(lines.len(), 4);
    let exact: f64 = field(lines[1], "value").parse().unwrap();
    let mc: f64 = field(lines[3], "value").parse().unwrap();
    let se: f64 = field(lines[3], "stderr").parse().unwrap();
    assert!((exact - mc).abs() < 5.0 * se, "{exact} vs {mc} ± {se}");
}

#[test]
fn invalid_parameters_exit_with_code_two() {
    for bad in [
        vec!["eval", "--kd", "2", "--md", "2", "--ke", "2", "--me", "2", "--snr-d-db", "10", "--snr-e-db", "0", "--rs", "0"],
        vec!["eval", "--kd", "-1", "--md", "2", "--ke", "2", "--me", "2", "--snr-d-db", "10", "--snr-e-db", "0"],
        vec!["eval", "--kd", "2", "--md", "2", "--ke", "2", "--me", "2", "--snr-d-db", "10"],
        vec!["eval", "--kd", "2", "--md", "2", "--ke", "2", "--me", "2", "--snr-d-db", "10", "--snr-e-db", "0", "--method", "magic"],
        vec!["curve", "--preset", "fig1", "--snr-e-db", "0", "--start-db", "10", "--stop-db", "5"],
        vec!["curve", "--preset", "fig1", "--snr-e-db", "0", "--step-db", "0.0001", "--stop-db", "100"],
        vec!["mc", "--kd", "2", "--md", "2", "--ke", "2", "--me", "2", "--snr-d-db", "10", "--snr-e-db", "0", "--mc-samples", "10"],
        vec!["frobnicate"],
    ] {
        let o = run(&bad);
        assert_eq!(o.status.code(), Some(2), "{bad:?}");
        assert!(o.stdout.is_empty(), "{bad:?}");
    }
}

#[test]
fn fig1_preset_produces_monotone_curve() {
    let o = run(&["curve", "--preset", "fig1", "--snr-e-db", "5", "--method", "approx,exact"]);
    assert!(o.status.success());
    let rows = rows(&stdout(&o));
    assert_eq!(rows.len(), 31);
    let exact: Vec<f64> = rows.iter().map(|r| r[2].parse().unwrap()).collect();
    assert!(exact.windows(2).all(|w| w[1] <= w[0]));
    assert!(rows.iter().all(|r| r[3].is_empty() && r[4].is_empty()));
    let first: f64 = rows[0][0].parse().unwrap();
    let last: f64 = rows[30][0].parse().unwrap();
    assert_eq!((first, last), (0.0, 30.0));
}

#[test]
fn asymptotic_column_follows_the_shape_regime() {
    // Distinct main shapes: the high-SNR slope is min(k, m) = 1.5 per decade.
    let o = run(&["curve", "--preset", "fig2", "--md", "2.5", "--method", "asymptotic", "--start-db", "40", "--stop-db", "60", "--step-db", "20"]);
    assert!(o.status.success());
    let r = rows(&stdout(&o));
    let (a, b): (f64, f64) = (r[0][3].parse().unwrap(), r[1][3].parse().unwrap());
    assert!(((a / b).log10() / 2.0 - 1.5).abs() < 1e-9);

    // Equal shapes pick up the logarithmic correction, so the slope is below k.
    let o = run(&["curve", "--preset", "fig3", "--kd", "2", "--md", "2", "--method", "asymptotic,exact", "--start-db", "40", "--stop-db", "60", "--step-db", "20"]);
    assert!(o.status.success());
    let r = rows(&stdout(&o));
    let (a, b): (f64, f64) = (r[0][3].parse().unwrap(), r[1][3].parse().unwrap());
    let slope = (a / b).log10() / 2.0;
    assert!(slope < 2.0 && slope > 1.8, "{slope}");
    let exact: f64 = r[1][2].parse().unwrap();
    assert!((b / exact - 1.0).abs() < 0.1, "{b} vs {exact}");
}

#[test]
fn config_precedence_flag_over_config_over_preset_over_default() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# scenario\npreset = fig1\nsnr-e-db = 5\nkd = 3   # overrides preset\nrs = 2\nstop-db = 4\n").unwrap();
    let cfg = cfg.to_str().unwrap();

    let eval = |extra: &[&str]| {
        let mut args = vec!["eval", "--config", cfg, "--snr-d-db", "10", "--method", "exact"];
        args.extend_from_slice(extra);
        let o = run(&args);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        field(stdout(&o).lines().next().unwrap(), "value").parse::<f64>().unwrap()
    };
    let explicit = |kd: &str, rs: &str| {
        let o = run(&["eval", "--kd", kd, "--md", "2.5", "--ke", "2", "--me", "2.5", "--snr-e-db", "5", "--snr-d-db", "10", "--rs", rs, "--method", "exact"]);
        field(stdout(&o).lines().next().unwrap(), "value").parse::<f64>().unwrap()
    };

    // config beats preset (kd = 3, rs = 2), preset fills md/ke/me
    assert_eq!(eval(&[]), explicit("3", "2"));
    // flag beats config
    assert_eq!(eval(&["--kd", "1.5"]), explicit("1.5", "2"));
    assert_eq!(eval(&["--rs", "1"]), explicit("3", "1"));

    // config stop-db beats preset, preset start/step apply
    let o = run(&["curve", "--config", cfg, "--method", "approx"]);
    assert_eq!(rows(&stdout(&o)).len(), 5);
    let o = run(&["curve", "--config", cfg, "--method", "approx", "--stop-db", "2", "--step-db", "0.5"]);
    assert_eq!(rows(&stdout(&o)).len(), 5);

    // without any preset the default rate and step apply
    let bare = dir.path().join("bare.cfg");
    std::fs::write(&bare, "kd = 3\nmd = 2.5\nke = 2\nme = 2.5\nsnr-e-db = 5\n").unwrap();
    let o = run(&["eval", "--config", bare.to_str().unwrap(), "--snr-d-db", "10", "--method", "exact"]);
    let v: f64 = field(stdout(&o).lines().next().unwrap(), "value").parse().unwrap();
    assert_eq!(v, explicit("3", "1"));

    // unknown key is a usage error
    let broken = dir.path().join("broken.cfg");
    std::fs::write(&broken, "kd = 3\ncolour = blue\n").unwrap();
    let o = run(&["eval", "--config", broken.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn csv_floats_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("curve.csv");
    let o = run(&["curve", "--preset", "fig2", "--md", "0.8", "--method", "approx,exact,asymptotic", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    for row in rows(&text) {
        assert_eq!(row.len(), 8);
        for cell in &row[..7] {
            if cell.is_empty() {
                continue;
            }
            let v: f64 = cell.parse().unwrap();
            assert_eq!(&format_float(v), cell);
        }
        assert!(row[7] == "true" || row[7] == "false");
    }
}

#[test]
fn failed_run_writes_no_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("curve.csv");
    let o = run(&["curve", "--preset", "fig3", "--kd", "0.5", "--md", "0.5", "--method", "asymptotic", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn validate_forced_failure_exits_with_code_one() {
    let o = run(&["validate", "--quick", "--force-fail", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l.starts_with("[FAIL]") && l.contains(" 1 ")));
    assert!(!out.lines().any(|l| l.contains(" 2 oracle")));
}

#[test]
fn mc_is_reproducible_from_the_seed() {
    let args = ["mc", "--kd", "1.5", "--md", "1.5", "--ke", "2", "--me", "2", "--snr-d-db", "10", "--snr-e-db", "0", "--mc-samples", "100000", "--seed", "7"];
    let a = stdout(&run(&args));
    let mut w = args.to_vec();
    w.extend_from_slice(&["--workers", "3"]);
    let b = stdout(&run(&w));
    assert_eq!(a, b);
    assert!(a.contains("seed=7"));
}

#[test]
fn csv_rows_reproduce_under_re_evaluation() {
    let o = run(&["curve", "--preset", "fig1", "--snr-e-db", "0", "--method", "approx,exact", "--start-db", "3", "--stop-db", "27", "--step-db", "8"]);
    assert!(o.status.success());
    for row in rows(&stdout(&o)) {
        let o = run(&[
            "eval", "--preset", "fig1", "--snr-e-db", "0", "--method", "approx,exact", "--snr-d-db", &row[0],
        ]);
        let out = stdout(&o);
        let lines: Vec<_> = out.lines().collect();
        assert_eq!(field(lines[0], "value"), row[1]);
        assert_eq!(field(lines[1], "value"), row[2]);
        assert_eq!(field(lines[0], "sigma_e_sq"), row[6]);
    }
}
