use std::fs;
use std::process::{Command, Output};

/// Runs the binary with a whitespace-separated argument line.
fn mazer(line: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mazer"))
        .args(line.split_whitespace())
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn data_lines(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn sweep_writes_csv_to_stdout() {
    let out = mazer("sweep --k-over-kappa 0.1 --delta-over-g -0.1 --axis kappa_l --min 1 --max 10pi --steps 5");
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.starts_with("# mazer "));
    assert!(text.contains("engine=closed_form"));
    let lines = data_lines(&text);
    assert_eq!(lines[0], "kappa_l,r_a,t_a,r_b,t_b,p_em,error");
    assert_eq!(lines.len(), 6);
    let last: Vec<&str> = lines[5].split(',').collect();
    let l: f64 = last[0].parse().unwrap();
    assert!((l - 10.0 * std::f64::consts::PI).abs() < 1e-9);
    for row in &lines[1..] {
        let p_em: f64 = row.split(',').nth(5).unwrap().parse().unwrap();
        assert!((0.0..=1.0).contains(&p_em));
    }
}

#[test]
fn sweep_output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = mazer(&format!("sweep --preset fig6 --out {}", path.display()));
        assert_eq!(out.status.code(), Some(0));
    }
    let (a, b) = (fs::read(a).unwrap(), fs::read(b).unwrap());
    assert!(!a.is_empty());
    assert_eq!(a, b);
    assert!(!a.contains(&b'\r'));
}

#[test]
fn preset_flags_override() {
    let out = mazer("sweep --preset fig3 --steps 3 --out -");
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines = data_lines(&text);
    assert_eq!(lines[0], "delta_over_g,k_over_kappa,r_a,t_a,r_b,t_b,p_em,error");
    assert_eq!(lines.len(), 1 + 2 * 3);
}

#[test]
fn two_dimensional_sweep() {
    let out = mazer("sweep --k-over-kappa 0.1 --axis kappa_l --min 0 --max 40 --steps 4 --axis2 delta_over_g --min2 -1 --max2 0.01 --steps2 3");
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let lines = data_lines(&text);
    assert_eq!(lines[0], "delta_over_g,kappa_l,r_a,t_a,r_b,t_b,p_em,error");
    assert_eq!(lines.len(), 1 + 12);
}

#[test]
fn invalid_arguments_exit_2() {
    for args in [
        "sweep --axis kappa_l --min 1 --max 0 --steps 5",
        "sweep --axis kappa_l --min 0 --max 1 --steps 1",
        "sweep --axis nonsense --min 0 --max 1",
        "sweep --preset fig99",
        "sweep --preset fig6 --engine rabi --profile sine2",
        "sweep --axis kappa_l --min 0 --max 1 --k-over-kappa -1",
        "sweep --axis kappa_l --min 0 --max 1 --profile file:/nonexistent/profile.txt",
        "sweep --axis kappa_l --min zero --max 1",
        "bogus",
    ] {
        let out = mazer(args);
        assert_eq!(out.status.code(), Some(2), "{args}");
    }
}

#[test]
fn numerical_failures_exit_3() {
    // k = κn at resonance: the upper dressed wavenumber vanishes
    let out = mazer("sweep --k-over-kappa 1 --delta-over-g 0 --axis kappa_l --min 1 --max 2 --steps 4");
    assert_eq!(out.status.code(), Some(3));
    let text = stdout(&out);
    assert!(data_lines(&text)[1..].iter().all(|l| l.ends_with(",singular_kernel")));
}

#[test]
fn sampled_profile_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mode.txt");
    let mut text = String::from("# z/L  u\n");
    for i in 0..=64 {
        let s = i as f64 / 64.0;
        text.push_str(&format!("{s} {}\n", (std::f64::consts::PI * s).sin().powi(2)));
    }
    fs::write(&path, text).unwrap();
    let profile = format!("file:{}", path.display());
    let out = mazer(&format!(
        "sweep --engine oracle --profile {} --slices 128 --k-over-kappa 0.5 --axis kappa_l --min 1 --max 10 --steps 4",
        profile
    ));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("profile=sampled"));
    for row in &data_lines(&text)[1..] {
        let fields: Vec<f64> = row.split(',').take(6).map(|f| f.parse().unwrap()).collect();
        let total: f64 = fields[1..5].iter().sum();
        assert!((total - 1.0).abs() < 1e-9);
    }

    fs::write(&path, "0 1\n0.5 oops\n").unwrap();
    let out = mazer(&format!(
        "sweep --engine oracle --profile {} --axis kappa_l --min 1 --max 2",
        profile
    ));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn compare_reports_deviations() {
    let out = mazer("compare --engines closed_form,oracle --k-over-kappa 0.3 --delta-over-g -0.2 --axis kappa_l --min 0.5 --max 20 --steps 20");
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let summary = text.lines().find(|l| l.starts_with("# oracle vs closed_form")).unwrap();
    let max: f64 = summary
        .split("max_dev=")
        .nth(1)
        .unwrap()
        .split(' ')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!(max < 1e-10);
    assert_eq!(data_lines(&text)[0], "kappa_l,dev_oracle");
}

#[test]
fn peaks_table() {
    let out = mazer("peaks --k-over-kappa 0.1 --delta-over-g -0.1 --m-max 3");
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines = data_lines(&text);
    assert_eq!(
        lines[0],
        "m,predicted_kappa_l,located_kappa_l,offset,located_p_em,predicted_amplitude"
    );
    assert_eq!(lines.len(), 4);
    for row in &lines[1..] {
        let offset: f64 = row.split(',').nth(3).unwrap().parse().unwrap();
        assert!(offset.abs() < 0.1);
    }
}
