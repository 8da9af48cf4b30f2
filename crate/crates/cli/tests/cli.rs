use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const PLATES: &str = "plate1.model = \"drude\"\nplate2.model = \"drude_wl\"\n";

struct Scratch(PathBuf);

impl Scratch {
    fn new(name: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("casimir-cli-{}-{name}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn file(&self, name: &str, text: &str) -> PathBuf {
        let p = self.0.join(name);
        fs::write(&p, text).unwrap();
        p
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.join(name)
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = fs::remove_dir_all(&self.0);
    }
}

fn casimir(args: &[&str], config: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_casimir"))
        .args(args)
        .arg("--config")
        .arg(config)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn ideal_pressure_is_normalized_to_one() {
    let s = Scratch::new("ideal");
    let cfg = s.file(
        "ideal.toml",
        "plate1.model = \"ideal\"\nplate2.model = \"ideal\"\ngeometry.separation_nm = 250\nconditions.temperature_k = 0.1\n",
    );
    let o = casimir(&["pressure"], &cfg);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let row = &doc["rows"][0];
    assert!(
        (row["P_norm"].as_f64().unwrap() - 1.0).abs() < 1e-3,
        "{row}"
    );
    assert_eq!(row["converged"], true);
    assert_eq!(doc["meta"]["command"], "pressure");
    assert!(doc["meta"]["numerics"]["quad_rel_tol"].is_number());
    assert_eq!(doc["meta"]["config"]["geometry"]["separation_nm"], 250.0);
}

#[test]
fn exit_codes() {
    let s = Scratch::new("exit");
    // missing separation
    let cfg = s.file("bad.toml", PLATES);
    let o = casimir(&["pressure"], &cfg);
    assert_eq!(o.status.code(), Some(2));
    assert!(
        stderr(&o).contains("geometry.separation_nm"),
        "{}",
        stderr(&o)
    );

    // syntax error carries a position
    let cfg = s.file(
        "syntax.toml",
        &format!("{PLATES}geometry.separation_nm = = 2\n"),
    );
    let o = casimir(&["pressure"], &cfg);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    // unreadable config
    let o = casimir(&["pressure"], &s.path("absent.toml"));
    assert_eq!(o.status.code(), Some(4));

    // unwritable output
    let cfg = s.file(
        "ok.toml",
        &format!("{PLATES}geometry.separation_nm = 250\nconditions.temperature_k = 3\nnumerics.max_matsubara = 20\n"),
    );
    let o = casimir(&["pressure", "--out", "/nonexistent/dir/p.json"], &cfg);
    assert_eq!(o.status.code(), Some(4));

    // Matsubara cap reached: partial result still printed
    let o = casimir(&["pressure"], &cfg);
    assert_eq!(o.status.code(), Some(3));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["rows"][0]["converged"], false);
    assert_eq!(doc["rows"][0]["n_terms"], 20);
}

#[test]
fn unknown_keys_warn_or_fail() {
    let s = Scratch::new("unknown");
    let cfg = s.file(
        "c.toml",
        &format!("{PLATES}geometry.separation_nm = 250\nconditions.temperature_k = 3\nconditions.pressure_bar = 1\n"),
    );
    let o = casimir(&["pressure", "--strict"], &cfg);
    assert_eq!(o.status.code(), Some(2));
    assert!(
        stderr(&o).contains("conditions.pressure_bar"),
        "{}",
        stderr(&o)
    );
    assert!(stderr(&o).contains("line 5"), "{}", stderr(&o));

    let o = casimir(&["pressure"], &cfg);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("conditions.pressure_bar"));
}

fn field_sweep(s: &Scratch) -> PathBuf {
    s.file(
        "sweep.toml",
        &format!(
            "{PLATES}geometry.separation_nm = 250\nconditions.temperature_k = 3\n\
             sweep.variable = \"field\"\nsweep.min = 0\nsweep.max = 100\nsweep.count = 4\n"
        ),
    )
}

#[test]
fn sweep_csv_matches_the_golden_header_and_is_deterministic() {
    let s = Scratch::new("sweep");
    let cfg = field_sweep(&s);
    let one = casimir(&["sweep", "--workers", "1"], &cfg);
    let three = casimir(&["sweep", "--workers", "3"], &cfg);
    assert_eq!(one.status.code(), Some(0), "{}", stderr(&one));
    assert_eq!(one.stdout, three.stdout);

    let text = stdout(&one);
    let golden = fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/golden/sweep_header.csv"
    ))
    .unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), golden.lines().next());
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 4);
    let mut last = 0.0;
    for r in &rows {
        assert_eq!(r.len(), 9);
        assert_eq!(r[8], "true");
        // twelve significant digits
        assert_eq!(r[5].split('e').next().unwrap().len(), 13, "{}", r[5]);
        let p_norm: f64 = r[5].parse().unwrap();
        assert!(p_norm >= last);
        last = p_norm;
        let sigma: f64 = r[6].parse().unwrap();
        assert!(sigma < 1.0);
    }
}

#[test]
fn sweep_json_has_meta_and_rows() {
    let s = Scratch::new("sweepjson");
    let cfg = field_sweep(&s);
    let out = s.path("rows.json");
    let o = casimir(
        &["sweep", "--format", "json", "--out", out.to_str().unwrap()],
        &cfg,
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(doc["meta"]["command"], "sweep");
    assert_eq!(doc["rows"].as_array().unwrap().len(), 4);
    assert_eq!(doc["rows"][3]["H_gauss"], 100.0);
}

#[test]
fn conductivity_csv() {
    let s = Scratch::new("sigma");
    let cfg = s.file(
        "c.toml",
        &format!(
            "{PLATES}geometry.separation_nm = 250\nsweep.variable = \"temperature\"\n\
             sweep.min = 0.1\nsweep.max = 10\nsweep.count = 5\nsweep.spacing = \"log\"\n"
        ),
    );
    let o = casimir(&["conductivity"], &cfg);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let golden = fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/golden/conductivity_header.csv"
    ))
    .unwrap();
    assert_eq!(text.lines().next(), golden.lines().next());
    let sigma: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    assert_eq!(sigma.len(), 5);
    for w in sigma.windows(2) {
        assert!(w[1] > w[0], "{sigma:?}");
    }
}

#[test]
fn fluctuations_write_reports_and_curves() {
    let s = Scratch::new("fluct");
    let cfg = s.file(
        "f.toml",
        "plate1.model = \"drude\"\nplate1.mfp_nm = 60\nplate2.model = \"plasma\"\n\
         geometry.separation_nm = 250\nsweep.variable = \"separation\"\nsweep.min = 250\nsweep.max = 1600\n\
         sweep.count = 4\nsweep.spacing = \"log\"\nfluctuations.curve_points = 11\n",
    );
    let out = s.path("fig7.csv");
    let o = casimir(
        &[
            "fluctuations",
            "--format",
            "csv",
            "--out",
            out.to_str().unwrap(),
        ],
        &cfg,
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let table = fs::read_to_string(&out).unwrap();
    let ratios: Vec<f64> = table
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(9).unwrap().parse().unwrap())
        .collect();
    assert_eq!(ratios.len(), 4);
    for w in ratios.windows(2) {
        assert!(w[1] < w[0], "{ratios:?}");
    }
    let curves = fs::read_to_string(s.path("fig7.distribution.csv")).unwrap();
    assert_eq!(curves.lines().count(), 1 + 4 * 11);

    let o = casimir(&["fluctuations"], &cfg);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 4);
    assert_eq!(doc["curves"].as_array().unwrap().len(), 4);
    // four separations are too few for the distance fit
    assert!(doc["fit"].is_null());
}

#[test]
fn shipped_configs_parse_strictly() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs");
    let mut seen = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("toml") {
            continue;
        }
        let text = fs::read_to_string(&path).unwrap();
        let (config, unknown) = casimir_cli::parse_config(&text, true)
            .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert!(unknown.is_empty());
        for point in config.grid() {
            config.job(point).unwrap();
        }
        seen += 1;
    }
    assert!(seen >= 5);
}
