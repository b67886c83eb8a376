use std::io::Write;
use std::process::{Command, Output, Stdio};

use tempfile::NamedTempFile;

const TRIANGLE: &str =
    "NET 3\nZ 1 2 0 1.7320508075688772\nZ 2 3 0 -1.7320508075688772\nZ 3 1 1 0\n";
const TANK: &str = "NET 2\nL 1 2 1\nC 1 2 1\n";

fn netlist(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn impnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_impnet"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(f: &NamedTempFile) -> &str {
    f.path().to_str().unwrap()
}

#[test]
fn impedance_of_example_triangle() {
    let f = netlist(TRIANGLE);
    for omega in ["1", "37.5"] {
        let o = impnet(&[
            "impedance",
            path(&f),
            "--omega",
            omega,
            "--pair",
            "1",
            "2",
            "--format",
            "json",
        ]);
        assert_eq!(o.status.code(), Some(0));
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["status"], "finite");
        assert!((v["z_re"].as_f64().unwrap() - 3.0).abs() < 1e-9);
        assert!((v["z_im"].as_f64().unwrap() - 3f64.sqrt()).abs() < 1e-9);
        assert!(v.get("divergent_coefficient").is_none());
    }
    let o = impnet(&["impedance", path(&f), "--freq", "50", "--pair", "1", "2"]);
    assert!(
        stdout(&o).contains("Z = 3 + 1.73205080756888j"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn resonant_tank_exits_with_two() {
    let f = netlist(TANK);
    let o = impnet(&["impedance", path(&f), "--omega", "1", "--pair", "1", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("RESONANT"));

    let o = impnet(&[
        "impedance",
        path(&f),
        "--omega",
        "1",
        "--pair",
        "1",
        "2",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "resonant");
    assert_eq!(v["resonant_mode_count"], 1);
    assert!(v["divergent_coefficient"].as_f64().unwrap() > 0.0);
}

#[test]
fn input_errors_exit_with_one() {
    let o = impnet(&[
        "impedance",
        "/nonexistent/net.txt",
        "--omega",
        "1",
        "--pair",
        "1",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());

    let f = netlist("NET 2\nR 1 2 -1\n");
    let o = impnet(&["impedance", path(&f), "--omega", "1", "--pair", "1", "2"]);
    assert_eq!(o.status.code(), Some(1));

    let f = netlist(TRIANGLE);
    let o = impnet(&[
        "impedance",
        path(&f),
        "--omega",
        "1",
        "--freq",
        "1",
        "--pair",
        "1",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let o = impnet(&["impedance", path(&f), "--omega", "1", "--pair", "1", "4"]);
    assert_eq!(o.status.code(), Some(1));
    let o = impnet(&[
        "sweep",
        path(&f),
        "--pair",
        "1",
        "2",
        "--omega-min",
        "2",
        "--omega-max",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn sweep_marks_the_resonant_row() {
    let f = netlist(TANK);
    let args = [
        "sweep",
        path(&f),
        "--pair",
        "1",
        "2",
        "--omega-min",
        "0.5",
        "--omega-max",
        "2",
        "--points",
        "3",
    ];
    let o = impnet(&args);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "omega,z_re,z_im,min_sigma,status");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].ends_with(",ok"));
    assert!(lines[2].starts_with("1.0,") && lines[2].ends_with(",resonant"));
    assert!(lines[3].ends_with(",ok"));
    // Deterministic output.
    assert_eq!(stdout(&impnet(&args)), text);
}

#[test]
fn resistor_sweep_is_real() {
    let f = netlist("NET 3\nR 1 2 1\nR 2 3 2\nR 1 3 3\n");
    let o = impnet(&[
        "sweep",
        path(&f),
        "--pair",
        "1",
        "3",
        "--points",
        "7",
        "--linear",
    ]);
    let text = stdout(&o);
    for row in text.lines().skip(1) {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols[4], "ok");
        assert!((cols[1].parse::<f64>().unwrap() - 1.5).abs() < 1e-12);
        assert!(cols[2].parse::<f64>().unwrap().abs() < 1e-12);
    }
}

#[test]
fn grid_sweep_dips_at_closed_form_frequencies() {
    let g = impnet(&["generate", "--grid", "3x2"]);
    let f = netlist(&stdout(&g));
    let o = impnet(&[
        "resonances",
        path(&f),
        "--omega-min",
        "0.2",
        "--omega-max",
        "5",
        "--format",
        "json",
    ]);
    let found: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let o = impnet(&["resonances", "--grid", "3x2", "--format", "json"]);
    let analytic: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(found["distinct_count"], analytic["distinct_count"]);
    let a = found["omegas"].as_array().unwrap();
    let b = analytic["omegas"].as_array().unwrap();
    for (x, y) in a.iter().zip(b) {
        let (x, y) = (x.as_f64().unwrap(), y.as_f64().unwrap());
        assert!((x - y).abs() <= 1e-6 * y);
    }
}

#[test]
fn generate_shapes() {
    let o = impnet(&["generate", "--ring", "4", "--z", "1,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "NET 4\nZ 1 2 1 0\nZ 2 3 1 0\nZ 3 4 1 0\nZ 4 1 1 0\n"
    );

    let o = impnet(&[
        "generate",
        "--grid",
        "6x4",
        "--inductance",
        "1",
        "--capacitance",
        "1",
    ]);
    let text = stdout(&o);
    assert!(text.starts_with("NET 24\n"));
    // 6·3 inductors along the rows and 5·4 capacitors between them.
    assert_eq!(text.lines().filter(|l| l.starts_with("L ")).count(), 18);
    assert_eq!(text.lines().filter(|l| l.starts_with("C ")).count(), 20);

    assert_eq!(
        impnet(&["generate", "--grid", "1x4"]).status.code(),
        Some(1)
    );
    assert_eq!(impnet(&["generate", "--ring", "2"]).status.code(), Some(1));

    let a = stdout(&impnet(&["generate", "--random", "8", "--seed", "5"]));
    let b = stdout(&impnet(&["generate", "--random", "8", "--seed", "5"]));
    assert_eq!(a, b);
}

#[test]
fn check_agrees_with_oracle() {
    let f = netlist(TRIANGLE);
    let o = impnet(&["check", path(&f), "--omega", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["max_deviation"].as_f64().unwrap() <= 1e-10);
    assert_eq!(v["pairs"].as_array().unwrap().len(), 3);

    let r = netlist(&stdout(&impnet(&[
        "generate", "--random", "8", "--seed", "1",
    ])));
    assert_eq!(
        impnet(&["check", path(&r), "--omega", "1"]).status.code(),
        Some(0)
    );

    let t = netlist(TANK);
    let o = impnet(&["check", path(&t), "--omega", "1", "--pair", "1", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("both resonant"));
}

#[test]
fn reads_netlist_from_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_impnet"))
        .args([
            "impedance",
            "-",
            "--omega",
            "1",
            "--pair",
            "1",
            "3",
            "--format",
            "csv",
        ])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"NET 3\nR 1 2 1\nR 2 3 2\n")
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(&row[..4], &["1", "3", "1.0", "finite"]);
    assert!((row[4].parse::<f64>().unwrap() - 3.0).abs() < 1e-12);
}
