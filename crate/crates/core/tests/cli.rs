use std::fs;
use std::path::Path;
use std::process::Command;

const REFERENCE_CONFIG: &str = "\
neighbourLocationLimit = 300
speed = 1.4
initialX = uniform
initialY = uniform
maxAreaX = 400
maxAreaY = 400
waitTime = uniform(2,5)
alpha = 0.3
noOfLocations = 21
nodeCount = 10
simDuration = 20000
seed = 7
";

fn swim(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_swim"))
        .args(args)
        .output()
        .unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("scenario.cfg");
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn listing(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    names
}

#[test]
fn run_writes_every_output_deterministically() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), REFERENCE_CONFIG);
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    for out in [&a, &b] {
        let o = swim(&["run", "--config", &cfg, "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let names = listing(&a);
    assert_eq!(
        names,
        [
            "contacts.csv",
            "contacts_per_pair_ccdf.csv",
            "duration_ccdf.csv",
            "ict_ccdf.csv",
            "locations.txt",
            "metrics.json",
            "selection.json",
            "waypoints.csv"
        ]
    );
    for name in &names {
        assert_eq!(
            fs::read(a.join(name)).unwrap(),
            fs::read(b.join(name)).unwrap(),
            "{name}"
        );
    }
    let c = tmp.path().join("c");
    let o = swim(&[
        "run",
        "--config",
        &cfg,
        "--seed",
        "8",
        "--out",
        c.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert_ne!(
        fs::read(a.join("waypoints.csv")).unwrap(),
        fs::read(c.join("waypoints.csv")).unwrap()
    );
}

#[test]
fn run_with_bad_config_writes_nothing() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        &REFERENCE_CONFIG.replace("alpha = 0.3", "alpha = 1.5"),
    );
    let out = tmp.path().join("out");
    let o = swim(&["run", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("alpha"));
    assert!(!out.exists());

    let o = swim(&[
        "run",
        "--config",
        "/no/such/file.cfg",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(!o.status.success());
    assert!(!out.exists());
}

#[test]
fn run_until_zero_has_header_only_waypoints() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), REFERENCE_CONFIG);
    let out = tmp.path().join("out");
    let o = swim(&[
        "run",
        "--config",
        &cfg,
        "--until",
        "0",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert_eq!(
        fs::read_to_string(out.join("waypoints.csv")).unwrap(),
        "time,node,x,y,event\n"
    );
}

#[test]
fn validate_reports_shape_and_classes() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), REFERENCE_CONFIG);
    let o = swim(&["validate", "--config", &cfg]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("grid: 3 rows x 7 cols"), "{text}");
    assert!(text.contains("home cell 0: 13 neighbouring, 7 visiting"));
    let o = swim(&["validate", "--config", &cfg, "--home", "1"]);
    assert!(String::from_utf8(o.stdout)
        .unwrap()
        .contains("16 neighbouring, 4 visiting"));
}

#[test]
fn sweep_orders_alpha() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), REFERENCE_CONFIG);
    let out = tmp.path().join("sweep");
    let o = swim(&[
        "sweep",
        "--config",
        &cfg,
        "--alpha",
        "0.3,0.8",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let table = fs::read_to_string(out.join("sweep.csv")).unwrap();
    assert_eq!(table, String::from_utf8(o.stdout).unwrap());
    let fractions: Vec<f64> = table
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(fractions.len(), 2);
    assert!(fractions[1] > fractions[0]);
}

#[test]
fn usage_errors_exit_nonzero() {
    assert!(!swim(&[]).status.success());
    assert!(!swim(&["run"]).status.success());
    assert!(!swim(&["frobnicate"]).status.success());
}
