use serde_json::Value;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/small")
}

const SERIES: [&str; 5] = ["da_price", "id_price", "wind_speed", "irradiance", "gwi"];

/// Copies the shipped fixture into a fresh directory with a config whose
/// paths are relative to it.
fn workspace(extra: &str) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for s in SERIES {
        fs::copy(
            fixture_dir().join(format!("{s}.csv")),
            dir.path().join(format!("{s}.csv")),
        )
        .unwrap();
    }
    let mut cfg = String::from("clusters = 2\nseed = 7\n");
    cfg += extra;
    cfg += "\n[inputs]\n";
    for s in SERIES {
        cfg += &format!("{s} = \"{s}.csv\"\n");
    }
    fs::write(dir.path().join("run.toml"), cfg).unwrap();
    dir
}

fn flexplan(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flexplan"))
        .arg("--config")
        .arg(dir.join("run.toml"))
        .args(args)
        .env_remove("FLEXPLAN_OUT")
        .output()
        .unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn out_arg(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

fn edit(path: &Path, f: impl Fn(&str) -> Option<String>) {
    let text = fs::read_to_string(path).unwrap();
    let lines: Vec<String> = text.lines().filter_map(f).collect();
    fs::write(path, lines.join("\n") + "\n").unwrap();
}

#[test]
fn missing_input_path_exits_2_naming_the_field() {
    let dir = workspace("");
    fs::remove_file(dir.path().join("gwi.csv")).unwrap();
    let o = flexplan(
        dir.path(),
        &["--out", &out_arg(dir.path(), "o"), "preprocess"],
    );
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("inputs.gwi"), "{}", stderr(&o));
    assert!(!dir.path().join("o").exists());

    let cfg = dir.path().join("run.toml");
    edit(&cfg, |l| {
        (!l.starts_with("id_price")).then(|| l.to_string())
    });
    let o = flexplan(dir.path(), &["cluster"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("inputs.id_price"), "{}", stderr(&o));
}

#[test]
fn bad_config_exits_2() {
    let dir = workspace("clusterz = 3");
    let o = flexplan(dir.path(), &["preprocess"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    let o = Command::new(env!("CARGO_BIN_EXE_flexplan"))
        .args(["--config", "/nonexistent.toml", "solve"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--config"));
}

fn ingest_rows(out: &Path) -> Vec<(String, String, String)> {
    let mut r = csv::Reader::from_path(out.join("ingest_report.csv")).unwrap();
    r.records()
        .map(|x| x.unwrap())
        .map(|x| (x[0].to_string(), x[1].to_string(), x[2].to_string()))
        .collect()
}

#[test]
fn malformed_row_drops_only_its_day() {
    let dir = workspace("");
    edit(&dir.path().join("id_price.csv"), |l| {
        Some(if l.starts_with("2022-06-03T10:15") {
            "2022-06-03T10:15:00+02:00,n/a".into()
        } else {
            l.to_string()
        })
    });
    let out = dir.path().join("o");
    let o = flexplan(
        dir.path(),
        &["--out", &out_arg(dir.path(), "o"), "preprocess"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(
        stderr(&o).contains("dropped day 2022-06-03"),
        "{}",
        stderr(&o)
    );
    let rows = ingest_rows(&out);
    assert_eq!(rows.iter().filter(|r| r.1 == "kept").count(), 5);
    let dropped: Vec<_> = rows.iter().filter(|r| r.1 == "dropped").collect();
    assert_eq!(dropped.len(), 1);
    assert_eq!(dropped[0].0, "2022-06-03");
    assert!(
        dropped[0].2.contains("unparseable value"),
        "{:?}",
        dropped[0]
    );
    let days: Value =
        serde_json::from_str(&fs::read_to_string(out.join("days.json")).unwrap()).unwrap();
    assert_eq!(days.as_array().unwrap().len(), 5);
}

#[test]
fn daylight_saving_day_is_dropped_as_nonstandard() {
    let dir = workspace("");
    // A spring-forward day has no local 02:00-02:45 quarter-hours.
    edit(&dir.path().join("id_price.csv"), |l| {
        (!l.starts_with("2022-06-04T02:")).then(|| l.to_string())
    });
    let o = flexplan(
        dir.path(),
        &["--out", &out_arg(dir.path(), "o"), "preprocess"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = ingest_rows(&dir.path().join("o"));
    let d = rows.iter().find(|r| r.0 == "2022-06-04").unwrap();
    assert_eq!(d.1, "dropped");
    assert!(d.2.contains("nonstandard day length"), "{d:?}");
    assert!(d.2.contains("92 steps"), "{d:?}");
}

#[test]
fn no_surviving_day_is_an_error() {
    let dir = workspace("");
    edit(&dir.path().join("gwi.csv"), |l| {
        (!l.contains("T05:")).then(|| l.to_string())
    });
    let o = flexplan(
        dir.path(),
        &["--out", &out_arg(dir.path(), "o"), "preprocess"],
    );
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("no day survived"));
    // The failed run is flagged in its manifest.
    let m: Value = serde_json::from_str(
        &fs::read_to_string(dir.path().join("o/preprocess.manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(m["complete"], Value::Bool(false));
}

#[test]
fn env_var_sets_the_output_directory() {
    let dir = workspace("out = \"from_config\"");
    let env_out = dir.path().join("from_env");
    let o = Command::new(env!("CARGO_BIN_EXE_flexplan"))
        .arg("--config")
        .arg(dir.path().join("run.toml"))
        .arg("preprocess")
        .env("FLEXPLAN_OUT", &env_out)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(env_out.join("days.json").is_file());
    assert!(!dir.path().join("from_config").exists());
    let o = flexplan(dir.path(), &["preprocess"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("from_config/days.json").is_file());
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn manifest_outputs(out: &Path, verb: &str) -> Vec<(String, Vec<u8>)> {
    let m = json(&out.join(format!("{verb}.manifest.json")));
    assert_eq!(m["complete"], Value::Bool(true));
    m["outputs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| {
            let name = f["path"].as_str().unwrap().to_string();
            let bytes = fs::read(out.join(&name)).unwrap();
            (name, bytes)
        })
        .collect()
}

#[test]
fn intraday_only_solve_is_reproducible_and_matches_golden_values() {
    let dir = workspace("market_mode = \"id_only\"");
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        let o = flexplan(dir.path(), &["--out", out.to_str().unwrap(), "solve"]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    assert_eq!(
        fs::read(a.join("solve.manifest.json")).unwrap(),
        fs::read(b.join("solve.manifest.json")).unwrap()
    );
    assert_eq!(manifest_outputs(&a, "solve"), manifest_outputs(&b, "solve"));

    let golden = json(&fixture_dir().join("golden_id_only.json"));
    let design = json(&a.join("design.json"));
    let close = |path: &[&str]| {
        let get = |v: &Value| {
            path.iter()
                .fold(v.clone(), |v, k| v[k].clone())
                .as_f64()
                .unwrap()
        };
        let (x, g) = (get(&design), get(&golden));
        assert!(
            (x - g).abs() <= 1e-9 * g.abs().max(1.0),
            "{path:?}: {x} vs golden {g}"
        );
    };
    for p in [
        &["tac"][..],
        &["gwi"],
        &["q_pv"],
        &["q_wind"],
        &["q_batt"],
        &["breakdown", "capex"],
        &["breakdown", "opex_el"],
        &["breakdown", "opex_grid"],
        &["trades", "id_purchases"],
        &["trades", "id_sales"],
    ] {
        close(p);
    }
    // The golden objective was confirmed by HiGHS on the dumped model.
    let highs = golden["highs_objective"].as_f64().unwrap();
    assert!((design["tac"].as_f64().unwrap() - highs).abs() <= 1e-9 * highs);

    // A tree read back from tree.json builds the same LP and the same design.
    let cfg = dir.path().join("run.toml");
    let text = fs::read_to_string(&cfg).unwrap();
    fs::write(
        &cfg,
        text + &format!("tree = \"{}\"\n", a.join("tree.json").display()),
    )
    .unwrap();
    let c = dir.path().join("c");
    let o = flexplan(dir.path(), &["--out", c.to_str().unwrap(), "solve"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(
        json(&a.join("solve.json"))["lp_fingerprint"],
        json(&c.join("solve.json"))["lp_fingerprint"]
    );
    assert_eq!(
        fs::read(a.join("design.json")).unwrap(),
        fs::read(c.join("design.json")).unwrap()
    );
    assert!(!c.join("tree.json").exists());
}

fn synthetic_workspace() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("run.toml"),
        "clusters = 1\nseed = 3\nout = \"o\"\n[inputs]\nsynthetic_days = 2\n",
    )
    .unwrap();
    dir
}

fn header(path: &Path) -> String {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .next()
        .unwrap()
        .to_string()
}

#[test]
fn study_verbs_write_their_tables() {
    let dir = synthetic_workspace();
    let out = dir.path().join("o");
    let run = |args: &[&str]| {
        let o = flexplan(dir.path(), args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
    };
    run(&["pareto", "--points", "3"]);
    run(&["sweep", "--parameter", "storage-hours", "--values", "0,3"]);
    run(&["heatmap", "--oversizing", "0,0.2", "--scale", "0,1"]);
    run(&["compare-markets"]);
    run(&["solve"]);
    run(&["report"]);

    assert!(header(&out.join("pareto.csv")).starts_with("point,gwi_bound,tac,gwi,q_pv"));
    let pareto = fs::read_to_string(out.join("pareto.csv")).unwrap();
    assert_eq!(pareto.lines().count(), 4);
    assert!(pareto.lines().nth(1).unwrap().starts_with("0,inf,"));
    let sweep = fs::read_to_string(out.join("sweep.csv")).unwrap();
    assert!(sweep
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("storage_hours,0.0,"));
    assert_eq!(header(&out.join("heatmap_tac.csv")), "row,col,value");
    assert_eq!(
        fs::read_to_string(out.join("heatmap_q_pv.csv"))
            .unwrap()
            .lines()
            .count(),
        5
    );
    let modes = fs::read_to_string(out.join("market_comparison.csv")).unwrap();
    assert!(modes.contains("\nid_only,") && modes.contains("\nsimultaneous,"));
    let dec = fs::read_to_string(out.join("savings_decomposition.csv")).unwrap();
    assert_eq!(dec.lines().count(), 6);
    let report = fs::read_to_string(out.join("report.md")).unwrap();
    assert!(report.contains("| TAC [EUR/a] |") && report.contains("## pareto.csv"));
}

#[test]
fn report_without_runs_fails() {
    let dir = synthetic_workspace();
    fs::create_dir(dir.path().join("o")).unwrap();
    let o = flexplan(dir.path(), &["report"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}
