//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

use std::f64::consts::{FRAC_PI_2, PI};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use frenet_core::exprlang::{BinOp, Func, Node};
use frenet_core::families::{self, HelixParams, HelixSource, SlantParams};
use frenet_core::frenet::{self, FrenetApparatus};
use frenet_core::intrinsic::{IntrinsicCurve, IntrinsicSpec};
use frenet_core::numerics::integrate_frenet;
use frenet_core::{median, parse, rel_err, CurveSamples, Grid, ScalarExpr};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |m: f64, v| if v.is_nan() || m.is_nan() { f64::NAN } else { m.max(v) })
}

fn speed_deviation(c: &CurveSamples) -> f64 {
    max_of(FrenetApparatus::speed(c).unwrap().values().iter().map(|v| (v - 1.0).abs()))
}

fn example_one() -> Outcome {
    let start = Instant::now();
    let e = families::example_helix(1.0, 0.0, 1.0, 4097).unwrap();
    let c = IntrinsicCurve::new(&e.generated.spec).unwrap();
    let curve = c.synthesize().unwrap();
    let nk = frenet::numeric_kappa(&curve).unwrap();
    let nt = frenet::numeric_tau(&curve).unwrap();
    let mid = curve.grid().nearest_index(0.5);
    let (ck, ct) = (c.closed_curvature().unwrap().at(mid), c.closed_torsion().unwrap().at(mid));
    let z_err = max_of(curve.points().iter().enumerate().map(|(i, p)| {
        let s = curve.grid().s(i);
        (p.z - (PI * s).sin() / (2.0 * PI)).abs()
    }));
    let elapsed = start.elapsed().as_secs_f64();
    let closed = (ck - FRAC_PI_2).abs().max((ct - FRAC_PI_2).abs());
    let ek = rel_err(nk.at(mid), FRAC_PI_2);
    let et = nt.get(mid).map_or(f64::NAN, |t| rel_err(t, FRAC_PI_2));
    outcome(
        closed <= 1e-12 && ek <= 1e-3 && et <= 1e-3 && z_err <= 1e-6 && elapsed < 2.0,
        format!(
            "closed |k-pi/2|,|t-pi/2| {closed:.1e} <= 1e-12; numeric k {ek:.1e}, t {et:.1e} <= 1e-3; \
             z vs sin(pi s)/(2 pi) {z_err:.1e} <= 1e-6; {elapsed:.2}s < 2s"
        ),
    )
}

fn generic_spec(n: usize) -> IntrinsicSpec {
    IntrinsicSpec::new(parse("s").unwrap(), parse("s").unwrap(), Grid::new(0.6, 1.6, n).unwrap())
}

fn closed_forms() -> Outcome {
    let spec = generic_spec(4097);
    let c = IntrinsicCurve::new(&spec).unwrap();
    let curve = c.synthesize().unwrap();
    let (k, t) = (c.closed_curvature().unwrap(), c.closed_torsion().unwrap());
    let nk = frenet::numeric_kappa(&curve).unwrap();
    let nt = frenet::numeric_tau(&curve).unwrap();
    let inner = spec.grid.interior(0.05);
    let tau_at = |i: usize| nt.get(i).unwrap_or(f64::NAN);
    let ek = max_of(inner.clone().map(|i| rel_err(nk.at(i), k.at(i))));
    let et = max_of(inner.clone().map(|i| rel_err(tau_at(i), t.at(i))));
    let ef = max_of(inner.map(|i| rel_err(tau_at(i) / nk.at(i), spec.grid.s(i))));
    let speed = speed_deviation(&curve);
    outcome(
        ek <= 1e-3 && et <= 1e-3 && ef <= 1e-3 && speed <= 1e-6,
        format!("interior 90%: k {ek:.1e}, t {et:.1e}, t/k vs fraction {ef:.1e} <= 1e-3; max ||r'|-1| {speed:.1e} <= 1e-6"),
    )
}

fn lancret() -> Outcome {
    let g = families::general_helix(&HelixParams {
        phi0: 1.0,
        a: 0.0,
        b: 2.0,
        n: 4097,
        source: HelixSource::Curvature(ScalarExpr::constant(1.0)),
    })
    .unwrap();
    let curve = IntrinsicCurve::new(&g.generated.spec).unwrap().synthesize().unwrap();
    let app = FrenetApparatus::from_curve(&curve).unwrap();
    let inner = curve.grid().interior(0.02);
    let ek = max_of(inner.clone().map(|i| (app.kappa.at(i) - 1.0).abs()));
    let fractions: Vec<f64> = inner.map(|i| app.fraction.get(i).unwrap_or(f64::NAN)).collect();
    let med = median(fractions.iter().copied()).unwrap_or(f64::NAN);
    let spread = max_of(fractions.iter().map(|f| (f - med).abs()));
    let classic = match &g.classic_x {
        Some(x) => max_of(g.generated.display.points().iter().zip(x).map(|(p, x)| (p.x - x).abs())),
        None => f64::NAN,
    };
    let j = curve.grid().b();
    outcome(
        ek <= 1e-3 && spread <= 1e-3 && (med - 1.0).abs() <= 1e-3 && classic <= 1e-6,
        format!(
            "J = (0, {j:.6}]; |k-1| {ek:.1e} <= 1e-3; t/k spread {spread:.1e} <= 1e-3, median {med:.6} = 1; \
             classic form {classic:.1e} <= 1e-6"
        ),
    )
}

fn slant() -> Outcome {
    let m = 0.5;
    let sh = families::slant_helix(&SlantParams { m, fraction: parse("s").unwrap(), a: -1.0, b: 1.0, n: 4097 }).unwrap();
    let c = IntrinsicCurve::new(&sh.generated.spec).unwrap();
    let k0 = c.closed_curvature().unwrap().at(c.grid().nearest_index(0.0));
    let sigma = frenet::numeric_sigma(&c.synthesize().unwrap()).unwrap();
    let inner: Vec<f64> = c.grid().interior(0.02).map(|i| sigma.at(i)).collect();
    let med = median(inner.iter().copied()).unwrap_or(f64::NAN);
    let spread = max_of(inner.iter().map(|v| (v - med).abs()));
    outcome(
        (k0 - 2.0).abs() <= 1e-12 && spread <= 1e-3 && (med - m).abs() <= 1e-3,
        format!(
            "closed k(0) = {k0:.15}; sigma spread {spread:.1e} <= 1e-3, median {med:.6} = m = {m} \
             (displayed value 1 differs by {:.3})",
            (med - 1.0).abs()
        ),
    )
}

fn closure() -> Outcome {
    let c = IntrinsicCurve::new(&generic_spec(4097)).unwrap();
    let curve = c.synthesize().unwrap();
    let (k, t) = (c.closed_curvature().unwrap(), c.closed_torsion().unwrap());
    let Some(frame0) = c.closed_frames().unwrap()[0] else {
        return outcome(false, "no closed frame at s = a".into());
    };
    let traj = integrate_frenet(&k, &t, &frame0, curve.points()[0]).unwrap();
    let dist = traj.curve.max_distance(&curve);
    let nk = frenet::numeric_kappa(&traj.curve).unwrap();
    let nt = frenet::numeric_tau(&traj.curve).unwrap();
    let inner = k.grid().interior(0.02);
    let ek = max_of(inner.clone().map(|i| rel_err(nk.at(i), k.at(i))));
    let et = max_of(inner.map(|i| nt.get(i).map_or(f64::NAN, |v| rel_err(v, t.at(i)))));
    outcome(
        dist <= 1e-4 && ek <= 1e-4 && et <= 1e-4,
        format!("positions {dist:.1e} <= 1e-4; re-extracted k {ek:.1e}, t {et:.1e} <= 1e-4"),
    )
}

fn kappa_error(spec: &IntrinsicSpec) -> f64 {
    let c = IntrinsicCurve::new(spec).unwrap();
    let closed = c.closed_curvature().unwrap();
    let numeric = frenet::numeric_kappa(&c.synthesize().unwrap()).unwrap();
    max_of(spec.grid.interior(0.02).map(|i| rel_err(numeric.at(i), closed.at(i))))
}

fn ratios(make: impl Fn(usize) -> IntrinsicSpec) -> (f64, f64) {
    let (coarse, fine) = (make(2049), make(4097));
    let speed = |s: &IntrinsicSpec| speed_deviation(&IntrinsicCurve::new(s).unwrap().synthesize().unwrap());
    (speed(&coarse) / speed(&fine), kappa_error(&coarse) / kappa_error(&fine))
}

fn convergence() -> Outcome {
    let wobbly = |n| {
        IntrinsicSpec::new(
            parse("s + 0.004*sin(150*s)").unwrap(),
            parse("s").unwrap(),
            Grid::new(0.6, 1.6, n).unwrap(),
        )
    };
    let (rs, rk) = ratios(wobbly);
    let (gs, gk) = ratios(generic_spec);
    outcome(
        rs >= 12.0 && rk >= 12.0,
        format!(
            "polar s + 0.004 sin(150 s): speed {rs:.1}x, k {rk:.1}x >= 12x \
             (polar s, already at roundoff: speed {gs:.1}x, k {gk:.1}x)"
        ),
    )
}

fn random_node(rng: &mut StdRng, depth: u32) -> Node {
    let b = |op, x: Node, y: Node| Node::Binary(op, Box::new(x), Box::new(y));
    let call = |f, x: Node| Node::Call(f, Box::new(x));
    if depth == 0 || rng.random_bool(0.25) {
        return match rng.random_range(0..3) {
            0 => Node::Var,
            1 => Node::Pi,
            _ => Node::Num(f64::from(rng.random_range(-40i32..=40)) / 8.0),
        };
    }
    let mut sub = || random_node(rng, depth - 1);
    let (x, y) = (sub(), sub());
    match rng.random_range(0..10) {
        0 => b(BinOp::Add, x, y),
        1 => b(BinOp::Sub, x, y),
        2 => b(BinOp::Mul, x, y),
        3 => b(BinOp::Div, x, b(BinOp::Add, Node::Num(2.0), call(Func::Sin, y))),
        4 => b(BinOp::Pow, x, Node::Num(f64::from(rng.random_range(2..=3)))),
        5 => Node::Neg(Box::new(x)),
        6 => call(Func::Sin, x),
        7 => call(Func::Cos, x),
        8 => call(Func::Atan, x),
        _ => call(Func::Exp, call(Func::Sin, x)),
    }
}

fn central_difference(e: &ScalarExpr, s: f64) -> f64 {
    let h = 1e-3;
    let f = |x: f64| e.eval(x).unwrap();
    (f(s - 2.0 * h) - 8.0 * f(s - h) + 8.0 * f(s + h) - f(s + 2.0 * h)) / (12.0 * h)
}

fn parser_suite() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let (mut round, mut diff) = (0.0_f64, 0.0_f64);
    let mut reparsed = 0;
    for _ in 0..100 {
        let e = ScalarExpr::new(random_node(&mut rng, 4));
        let text = e.to_string();
        let back = match parse(&text) {
            Ok(b) => b,
            Err(err) => return outcome(false, format!("{text:?} does not parse: {err}")),
        };
        reparsed += usize::from(back.to_string() == text);
        let d = e.derive();
        for j in 0..16 {
            let s = -0.9 + 1.8 * f64::from(j) / 15.0;
            let v = e.eval(s).unwrap();
            round = round.max(rel_err(back.eval(s).unwrap(), v));
            diff = diff.max(rel_err(d.eval(s).unwrap(), central_difference(&e, s)));
        }
    }
    outcome(
        round <= 1e-12 && diff <= 1e-6 && reparsed == 100,
        format!("100 expressions, 16 points each: round trip {round:.1e} <= 1e-12 ({reparsed}/100 stable text); derivative vs FD {diff:.1e} <= 1e-6"),
    )
}

fn frenet_cli(args: &[&str]) -> (i32, Vec<u8>, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_frenet"))
        .args(args)
        .env_remove("FRENET_DEFAULT_N")
        .output()
        .expect("run frenet");
    (o.status.code().unwrap_or(-1), o.stdout, String::from_utf8_lossy(&o.stderr).into_owned())
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn cli_contract() -> Outcome {
    let dir = tempfile::TempDir::new().unwrap();
    let file = |name: &str, text: &str| {
        let path = dir.path().join(name);
        std::fs::write(&path, text).unwrap();
        path
    };
    let recipe = file(
        "generic.json",
        r#"{"kind":"intrinsic","grid":{"a":0.6,"b":1.6,"n":4097},"params":{"polar":"s","fraction":"s"}}"#,
    );
    let (csv1, csv2) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    let g1 = frenet_cli(&["generate", "--recipe", p(&recipe), "--out", p(&csv1)]).0;
    let g2 = frenet_cli(&["generate", "--recipe", p(&recipe), "--out", p(&csv2)]).0;
    let identical = g1 == 0 && g2 == 0 && std::fs::read(&csv1).unwrap() == std::fs::read(&csv2).unwrap();

    let (code, stdout, _) = frenet_cli(&["analyze", "--in", p(&csv1)]);
    let report: serde_json::Value = serde_json::from_slice(&stdout).unwrap_or_default();
    let kappa_rt = report["summary"]["kappa_vs_column_max_rel"].as_f64().unwrap_or(f64::NAN);
    let round_trip = code == 0 && kappa_rt <= 1e-3;

    let constant = file("c.json", r#"{"kind":"intrinsic","grid":{"a":0.6,"b":1.6,"n":257},"params":{"polar":"1","fraction":"s"}}"#);
    let syntax = file("e.json", r#"{"kind":"intrinsic","grid":{"a":0.6,"b":1.6,"n":257},"params":{"polar":"s +","fraction":"s"}}"#);
    let empty = file("empty.csv", "");
    let scratch = dir.path().join("scratch");
    let codes = [
        (0, frenet_cli(&["verify", "--recipe", p(&recipe)]).0),
        (1, frenet_cli(&["analyze", "--in", p(&csv1), "--tol-rel", "1e-15"]).0),
        (2, frenet_cli(&["generate", "--recipe", p(&constant), "--out", p(&scratch)]).0),
        (3, frenet_cli(&["generate", "--recipe", p(&syntax), "--out", p(&scratch)]).0),
        (4, frenet_cli(&["analyze", "--in", p(&empty)]).0),
        (5, frenet_cli(&["export", "--in", p(&csv1), "--format", "svg", "--out", p(&scratch)]).0),
        (6, frenet_cli(&["generate", "--recipe", p(&recipe), "--out", p(dir.path())]).0),
    ];
    let exits_ok = codes.iter().all(|(want, got)| want == got);
    let seen: Vec<String> = codes.iter().map(|(w, g)| if w == g { format!("{g}") } else { format!("{w}!={g}") }).collect();
    outcome(
        identical && round_trip && exits_ok,
        format!(
            "exit codes [{}]; round trip k {kappa_rt:.1e} <= 1e-3; byte-identical reruns {identical}",
            seen.join(" ")
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 example helix reproduction", example_one),
        ("2 closed forms vs sampled curve", closed_forms),
        ("3 Lancret general helix", lancret),
        ("4 slant helix sigma = m", slant),
        ("5 oracle closure", closure),
        ("6 convergence order", convergence),
        ("7 parser and derivative corpus", parser_suite),
        ("8 CLI contract", cli_contract),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let o = run();
        failed += usize::from(!o.passed);
        println!("{} {name}: {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
