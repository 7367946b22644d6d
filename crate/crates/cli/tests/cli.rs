use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn frenet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frenet"))
        .args(args)
        .env_remove("FRENET_DEFAULT_N")
        .output()
        .expect("run frenet")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const EXAMPLE: &str = r#"{"kind":"example_helix","grid":{"a":0,"b":1,"n":4097},"params":{"phi0":1}}"#;
const SLANT: &str = r#"{"kind":"slant_helix","grid":{"a":-1,"b":1,"n":4097},"params":{"m":0.5,"fraction":"s"}}"#;
const GENERIC: &str =
    r#"{"kind":"intrinsic","grid":{"a":0.6,"b":1.6,"n":4097},"params":{"polar":"s","fraction":"s"}}"#;

fn generate(dir: &TempDir, recipe: &str, name: &str) -> PathBuf {
    let r = write(dir, &format!("{name}.json"), recipe);
    let out = dir.path().join(format!("{name}.csv"));
    let o = frenet(&["generate", "--recipe", s(&r), "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    out
}

fn analyze_json(csv: &Path) -> (i32, Value) {
    let o = frenet(&["analyze", "--in", s(csv)]);
    let v = serde_json::from_slice(&o.stdout).unwrap_or(Value::Null);
    (code(&o), v)
}

fn rows(csv: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(csv)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn helix_csv(dir: &TempDir) -> PathBuf {
    let c = std::f64::consts::FRAC_1_SQRT_2;
    let n = 4097;
    let mut t = String::from("s,x,y,z\n");
    for i in 0..n {
        let s = 10.0 * i as f64 / (n - 1) as f64;
        t += &format!("{s:.16e},{:.16e},{:.16e},{:.16e}\n", (c * s).cos(), (c * s).sin(), c * s);
    }
    write(dir, "helix.csv", &t)
}

#[test]
fn generate_example_helix_rows() {
    let dir = TempDir::new().unwrap();
    let csv = generate(&dir, EXAMPLE, "ex");
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# sigma: closed"));
    assert_eq!(lines.next(), Some("s,x,y,z,tx,ty,tz,nx,ny,nz,bx,by,bz,kappa,tau,sigma"));
    let rows = rows(&csv);
    assert_eq!(rows.len(), 4097);
    let mid = &rows[2048];
    assert_eq!(mid[0].parse::<f64>().unwrap(), 0.5);
    let kappa: f64 = mid[13].parse().unwrap();
    assert!((kappa - std::f64::consts::FRAC_PI_2).abs() < 1e-4, "{kappa}");
}

#[test]
fn generate_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = std::fs::read(generate(&dir, GENERIC, "a")).unwrap();
    let b = std::fs::read(generate(&dir, GENERIC, "b")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn n_flag_and_env_override() {
    let dir = TempDir::new().unwrap();
    let r = write(&dir, "r.json", r#"{"kind":"intrinsic","grid":{"a":0.6,"b":1.6},"params":{"polar":"s","fraction":"s"}}"#);
    let out = dir.path().join("o.csv");
    let o = frenet(&["generate", "--recipe", s(&r), "--out", s(&out), "--n", "129"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(rows(&out).len(), 129);
    let o = Command::new(env!("CARGO_BIN_EXE_frenet"))
        .args(["generate", "--recipe", s(&r), "--out", s(&out)])
        .env("FRENET_DEFAULT_N", "257")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(rows(&out).len(), 257);
}

#[test]
fn generate_then_analyze_round_trip() {
    let dir = TempDir::new().unwrap();
    let csv = generate(&dir, GENERIC, "g");
    let (c, v) = analyze_json(&csv);
    assert_eq!(c, 0, "{v}");
    assert!(v["summary"]["kappa_vs_column_max_rel"].as_f64().unwrap() <= 1e-3);
    assert!(v["summary"]["tau_vs_column_max_rel"].as_f64().unwrap() <= 1e-3);
    for check in v["checks"].as_array().unwrap() {
        assert_eq!(check["passed"], true, "{check}");
    }
}

#[test]
fn analyze_writes_json_file() {
    let dir = TempDir::new().unwrap();
    let csv = generate(&dir, GENERIC, "g");
    let json = dir.path().join("report.json");
    let o = frenet(&["analyze", "--in", s(&csv), "--json", s(&json)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["summary"]["n"], 4097);
    assert!(String::from_utf8_lossy(&o.stdout).contains("PASS unit_speed"));
}

#[test]
fn analyze_circular_helix() {
    let dir = TempDir::new().unwrap();
    let (c, v) = analyze_json(&helix_csv(&dir));
    assert_eq!(c, 0, "{v}");
    let k = v["summary"]["kappa_median"].as_f64().unwrap();
    let t = v["summary"]["tau_median"].as_f64().unwrap();
    assert!((k - 0.5).abs() <= 1e-4, "{k}");
    assert!((t - 0.5).abs() <= 1e-4, "{t}");
}

#[test]
fn analyze_slant_helix_sigma() {
    let dir = TempDir::new().unwrap();
    let csv = generate(&dir, SLANT, "slant");
    let (c, v) = analyze_json(&csv);
    assert_eq!(c, 0, "{v}");
    let sigma = v["summary"]["sigma_median"].as_f64().unwrap();
    assert!((sigma - 0.5).abs() <= 1e-3, "{sigma}");
}

#[test]
fn analyze_rejects_shuffled_rows() {
    let dir = TempDir::new().unwrap();
    let text = std::fs::read_to_string(helix_csv(&dir)).unwrap();
    let mut lines: Vec<&str> = text.lines().collect();
    lines.swap(100, 200);
    let p = write(&dir, "shuffled.csv", &lines.join("\n"));
    let o = frenet(&["analyze", "--in", s(&p)]);
    assert_eq!(code(&o), 4, "{}", stderr(&o));
    assert!(stderr(&o).contains("non-uniform"));
}

#[test]
fn analyze_fails_checks_on_corrupted_column() {
    let dir = TempDir::new().unwrap();
    let csv = generate(&dir, GENERIC, "g");
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut out = String::new();
    for (i, line) in text.lines().enumerate() {
        if i == 2000 {
            let mut f: Vec<String> = line.split(',').map(str::to_string).collect();
            let k: f64 = f[13].parse().unwrap();
            f[13] = format!("{:.16e}", 2.0 * k);
            out += &f.join(",");
        } else {
            out += line;
        }
        out.push('\n');
    }
    let p = write(&dir, "corrupt.csv", &out);
    let (c, v) = analyze_json(&p);
    assert_eq!(c, 1);
    let failed: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["kappa_vs_csv"]);
}

#[test]
fn constant_polar_angle_is_rejected() {
    let dir = TempDir::new().unwrap();
    let r = write(&dir, "c.json", r#"{"kind":"intrinsic","grid":{"a":0.6,"b":1.6,"n":257},"params":{"polar":"1","fraction":"s"}}"#);
    let o = frenet(&["generate", "--recipe", s(&r), "--out", s(&dir.path().join("c.csv"))]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("(cos phi)' < 0 violated"), "{}", stderr(&o));
    assert!(!dir.path().join("c.csv").exists());
}

#[test]
fn planar_recipe_has_no_torsion() {
    let dir = TempDir::new().unwrap();
    let csv = generate(
        &dir,
        r#"{"kind":"intrinsic","grid":{"a":0.6,"b":1.6,"n":1025},"params":{"polar":"s","fraction":"0"}}"#,
        "planar",
    );
    for row in rows(&csv) {
        let tau: f64 = row[14].parse().unwrap();
        assert!(tau.abs() <= 1e-5);
        assert!(row[3].parse::<f64>().unwrap().is_finite());
    }
}

#[test]
fn verify_example_and_slant_pass() {
    let dir = TempDir::new().unwrap();
    let ex = write(&dir, "ex.json", EXAMPLE);
    let json = dir.path().join("ex.report.json");
    let o = frenet(&["verify", "--recipe", s(&ex), "--json", s(&json)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["passed"], true);
    let names: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    for want in ["unit_speed", "kappa_closed_vs_numeric", "tau_closed_vs_numeric", "fraction_constancy"] {
        assert!(names.contains(&want), "{names:?}");
    }
    for c in v["checks"].as_array().unwrap() {
        assert!(c["value"].is_number() && c["tolerance"].is_number());
    }

    let sl = write(&dir, "slant.json", SLANT);
    let o = frenet(&["verify", "--recipe", s(&sl)]);
    assert_eq!(code(&o), 0);
    let out = String::from_utf8_lossy(&o.stdout);
    assert!(out.contains("PASS sigma_constancy"));
    assert!(out.contains("PASS sigma_value"));
}

#[test]
fn verify_corrupted_offset_reports_domain() {
    let dir = TempDir::new().unwrap();
    let r = write(
        &dir,
        "bad.json",
        r#"{"kind":"intrinsic","grid":{"a":0.6,"b":1.6,"n":257},"params":{"polar":"s","fraction":"s","inner_offset":0.9}}"#,
    );
    let json = dir.path().join("bad.report.json");
    let o = frenet(&["verify", "--recipe", s(&r), "--json", s(&json)]);
    assert_eq!(code(&o), 2);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["domain"]["valid"], false);
    assert!(v["domain"]["min_domain_margin"].as_f64().unwrap() < 0.0);
}

#[test]
fn expression_errors_exit_3() {
    let dir = TempDir::new().unwrap();
    for polar in ["s +", "foo(s)", "s * q"] {
        let r = write(
            &dir,
            "e.json",
            &format!(r#"{{"kind":"intrinsic","grid":{{"a":0.6,"b":1.6,"n":257}},"params":{{"polar":"{polar}","fraction":"s"}}}}"#),
        );
        let o = frenet(&["generate", "--recipe", s(&r), "--out", s(&dir.path().join("e.csv"))]);
        assert_eq!(code(&o), 3, "{polar}: {}", stderr(&o));
    }
}

#[test]
fn invalid_recipes_exit_2() {
    let dir = TempDir::new().unwrap();
    for recipe in [
        "not json",
        r#"{"kind":"torus","grid":{"a":0,"b":1,"n":257},"params":{}}"#,
        r#"{"kind":"intrinsic","grid":{"a":0.6,"b":1.6,"n":256},"params":{"polar":"s","fraction":"s"}}"#,
        r#"{"kind":"general_helix","grid":{"a":0,"b":1,"n":257},"params":{"phi0":1}}"#,
        r#"{"kind":"slant_helix","grid":{"a":-1,"b":1,"n":257},"params":{"m":0,"fraction":"s"}}"#,
    ] {
        let r = write(&dir, "r.json", recipe);
        let o = frenet(&["generate", "--recipe", s(&r), "--out", s(&dir.path().join("r.csv"))]);
        assert_eq!(code(&o), 2, "{recipe}: {}", stderr(&o));
    }
    let o = frenet(&["generate", "--recipe", s(&dir.path().join("missing.json")), "--out", "x.csv"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn export_obj_and_gnuplot() {
    let dir = TempDir::new().unwrap();
    let csv = generate(&dir, EXAMPLE, "ex");
    let obj = dir.path().join("ex.obj");
    let o = frenet(&["export", "--in", s(&csv), "--format", "obj", "--out", s(&obj)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = std::fs::read_to_string(&obj).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 4097);
    let l: Vec<&str> = text.lines().filter(|l| l.starts_with('l')).collect();
    assert_eq!(l.len(), 1);
    let idx: Vec<usize> = l[0].split_whitespace().skip(1).map(|t| t.parse().unwrap()).collect();
    assert_eq!(idx, (1..=4097).collect::<Vec<_>>());

    let gp = dir.path().join("ex.gp");
    let o = frenet(&["export", "--in", s(&csv), "--format", "gnuplot", "--out", s(&gp)]);
    assert_eq!(code(&o), 0);
    let script = std::fs::read_to_string(&gp).unwrap();
    let quoted: Vec<&str> = script
        .lines()
        .filter(|l| l.starts_with("plot") || l.starts_with("splot"))
        .map(|l| l.split('\'').nth(1).unwrap())
        .collect();
    assert_eq!(quoted.len(), 4);
    assert!(quoted.iter().all(|q| *q == s(&csv)));
    for col in ["kappa", "tau", "sigma"] {
        assert!(script.contains(&format!("title '{col}'")));
    }
}

#[test]
fn recipe_outputs_write_siblings() {
    let dir = TempDir::new().unwrap();
    let csv = generate(
        &dir,
        r#"{"kind":"example_helix","grid":{"a":0,"b":1,"n":257},"params":{"phi0":1},"outputs":["csv","obj","gnuplot","report"]}"#,
        "ex",
    );
    for ext in ["obj", "gp", "report.json"] {
        assert!(csv.with_extension(ext).exists(), "{ext}");
    }
}

#[test]
fn export_errors() {
    let dir = TempDir::new().unwrap();
    let csv = helix_csv(&dir);
    let o = frenet(&["export", "--in", s(&csv), "--format", "svg", "--out", s(&dir.path().join("x"))]);
    assert_eq!(code(&o), 5);
    let empty = write(&dir, "empty.csv", "");
    let o = frenet(&["export", "--in", s(&empty), "--format", "obj", "--out", s(&dir.path().join("x.obj"))]);
    assert_eq!(code(&o), 4);
    let header_only = write(&dir, "h.csv", "s,x,y,z\n");
    let o = frenet(&["analyze", "--in", s(&header_only)]);
    assert_eq!(code(&o), 4);
    let o = frenet(&["export", "--in", s(&csv), "--format", "obj", "--out", s(&dir.path().join("no/such/dir/x.obj"))]);
    assert_eq!(code(&o), 6);
}

#[test]
fn unwritable_generate_output_exits_6() {
    let dir = TempDir::new().unwrap();
    let r = write(&dir, "g.json", GENERIC);
    let o = frenet(&["generate", "--recipe", s(&r), "--out", s(dir.path())]);
    assert_eq!(code(&o), 6, "{}", stderr(&o));
}
