//! Verbs of the command line: each runs the pipeline up to its stage and
//! writes its artifacts plus a manifest.

use crate::config::RunConfig;
use crate::error::{CliError, IngestError};
use crate::ingest::{assemble, parse_series, IngestReport, SeriesKind, WeatherModel};
use crate::output::{fmt_num, sha256_hex, to_json, ArtifactWriter, FileDigest, Manifest, Table};
use flexplan_core::lp::write_lp;
use flexplan_core::model::{build, MarketMode, ModelConfig, Objective};
use flexplan_core::scenarios::{
    deviation_std_report, scenario_tree, standardize, wcss_curve, Clustering,
};
use flexplan_core::studies::{
    capacity_heatmap, flexibility_sweep, market_mode_comparison, pareto_front,
    savings_decomposition, solve_design, DesignSummary, StudyInputs, SweepParameter, SweepSpec,
};
use flexplan_core::synthetic::{synthetic_days, SyntheticSpec};
use flexplan_core::weather::PerformanceCurve;
use flexplan_core::{ScenarioTree, QUARTERS_PER_DAY};
use serde::Serialize;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq)]
pub enum Verb {
    Preprocess,
    Cluster,
    Solve { dump_lp: bool },
    Pareto,
    Sweep,
    Heatmap,
    CompareMarkets,
    Report,
}

impl Verb {
    pub fn name(&self) -> &'static str {
        match self {
            Verb::Preprocess => "preprocess",
            Verb::Cluster => "cluster",
            Verb::Solve { .. } => "solve",
            Verb::Pareto => "pareto",
            Verb::Sweep => "sweep",
            Verb::Heatmap => "heatmap",
            Verb::CompareMarkets => "compare-markets",
            Verb::Report => "report",
        }
    }

    /// Whether the verb starts from a scenario tree rather than raw days.
    fn uses_tree(&self) -> bool {
        !matches!(self, Verb::Preprocess | Verb::Cluster | Verb::Report)
    }
}

/// Input files a verb reads, keyed by config field. Missing files are
/// reported here, before anything is written.
fn input_files(cfg: &RunConfig, verb: &Verb) -> Result<Vec<(String, PathBuf)>, CliError> {
    let inputs = &cfg.inputs;
    if *verb == Verb::Report {
        return Ok(Vec::new());
    }
    if verb.uses_tree() && inputs.tree.is_some() {
        return Ok(vec![(
            "inputs.tree".into(),
            RunConfig::existing(inputs.tree.as_ref(), "inputs.tree")?,
        )]);
    }
    if inputs.synthetic_days.is_some() {
        return Ok(Vec::new());
    }
    let mut files = Vec::new();
    for kind in SeriesKind::ALL {
        let field = kind.field();
        files.push((
            field.clone(),
            RunConfig::existing(inputs.series(kind), &field)?,
        ));
    }
    if inputs.wind_curve.is_some() {
        files.push((
            "inputs.wind_curve".into(),
            RunConfig::existing(inputs.wind_curve.as_ref(), "inputs.wind_curve")?,
        ));
    }
    Ok(files)
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|source| CliError::Read {
        path: path.into(),
        source,
    })
}

fn read_text(path: &Path) -> Result<String, CliError> {
    String::from_utf8(read(path)?).map_err(|_| CliError::Artifact {
        path: path.into(),
        message: "not UTF-8".into(),
    })
}

/// Hash of everything except file locations: the verb, the config with
/// paths removed and the content of every input file.
fn config_hash(cfg: &RunConfig, verb: &Verb, inputs: &[FileDigest]) -> String {
    let mut stripped = cfg.clone();
    stripped.out = None;
    for kind in SeriesKind::ALL {
        let p = match kind {
            SeriesKind::DaPrice => &mut stripped.inputs.da_price,
            SeriesKind::IdPrice => &mut stripped.inputs.id_price,
            SeriesKind::WindSpeed => &mut stripped.inputs.wind_speed,
            SeriesKind::Irradiance => &mut stripped.inputs.irradiance,
            SeriesKind::Gwi => &mut stripped.inputs.gwi,
        };
        *p = p.as_ref().map(|_| PathBuf::from(kind.name()));
    }
    stripped.inputs.wind_curve = stripped.inputs.wind_curve.map(|_| "wind_curve".into());
    stripped.inputs.tree = stripped.inputs.tree.map(|_| "tree".into());
    let payload =
        serde_json::to_string(&(verb.name(), &stripped, inputs)).expect("config serializes");
    sha256_hex(payload.as_bytes())
}

/// Runs one verb and writes its artifacts into `out`. On a stage failure
/// the manifest is still written, flagged incomplete.
pub fn run(cfg: &RunConfig, verb: &Verb, out: &Path) -> Result<Manifest, CliError> {
    cfg.check()?;
    let files = input_files(cfg, verb)?;
    let mut digests = Vec::with_capacity(files.len());
    let mut contents = Vec::with_capacity(files.len());
    for (field, path) in &files {
        let bytes = read(path)?;
        digests.push(FileDigest {
            path: field.clone(),
            sha256: sha256_hex(&bytes),
        });
        contents.push((field.clone(), bytes));
    }
    let hash = config_hash(cfg, verb, &digests);
    let mut w = ArtifactWriter::new(out.to_path_buf(), verb.name(), cfg.seed, hash, digests);
    let result = match verb {
        Verb::Preprocess => preprocess(cfg, &contents, &mut w),
        Verb::Cluster => cluster(cfg, &contents, &mut w),
        Verb::Solve { dump_lp } => solve(cfg, &contents, *dump_lp, &mut w),
        Verb::Pareto => pareto(cfg, &contents, &mut w),
        Verb::Sweep => sweep(cfg, &contents, &mut w),
        Verb::Heatmap => heatmap(cfg, &contents, &mut w),
        Verb::CompareMarkets => compare_markets(cfg, &contents, &mut w),
        Verb::Report => report(&mut w),
    };
    match result {
        Ok(()) => w.finish(None),
        Err(e) => {
            // The original error matters more than a failed manifest write.
            let _ = w.finish(Some(&e));
            Err(e)
        }
    }
}

type Contents = [(String, Vec<u8>)];

fn content<'a>(contents: &'a Contents, field: &str) -> Option<&'a [u8]> {
    contents
        .iter()
        .find(|(f, _)| f == field)
        .map(|(_, b)| b.as_slice())
}

fn utf8<'a>(bytes: &'a [u8], field: &str) -> Result<&'a str, CliError> {
    std::str::from_utf8(bytes).map_err(|_| {
        IngestError::Csv {
            field: field.into(),
            message: "not UTF-8".into(),
        }
        .into()
    })
}

fn ingest(cfg: &RunConfig, contents: &Contents) -> Result<IngestReport, CliError> {
    if let Some(n) = cfg.inputs.synthetic_days {
        let days = synthetic_days(&SyntheticSpec::new(n, cfg.seed));
        return Ok(IngestReport {
            days,
            dropped: Vec::new(),
            warnings: Vec::new(),
        });
    }
    let curve = match content(contents, "inputs.wind_curve") {
        Some(b) => PerformanceCurve::parse(utf8(b, "inputs.wind_curve")?).map_err(|e| {
            IngestError::Csv {
                field: "inputs.wind_curve".into(),
                message: e.to_string(),
            }
        })?,
        None => PerformanceCurve::default(),
    };
    let weather = WeatherModel {
        site: cfg.wind_site,
        curve,
        pv: cfg.pv,
    };
    let mut series = Vec::with_capacity(5);
    for kind in SeriesKind::ALL {
        let field = kind.field();
        let bytes = content(contents, &field).expect("series files are read before ingestion");
        series.push(parse_series(utf8(bytes, &field)?, kind)?);
    }
    let report = assemble(&series, &weather)?;
    for w in &report.warnings {
        log::warn!("{w}");
    }
    for d in &report.dropped {
        log::warn!("dropped day {}: {}", d.day, d.reason);
    }
    log::info!(
        "{} days kept, {} dropped",
        report.days.len(),
        report.dropped.len()
    );
    Ok(report)
}

fn ingest_table(report: &IngestReport) -> Vec<u8> {
    let mut t = Table::new(&["day", "status", "reason"]);
    let mut rows: Vec<(&str, &str, &str)> = report
        .days
        .iter()
        .map(|d| (d.day_id.as_str(), "kept", ""))
        .collect();
    rows.extend(
        report
            .dropped
            .iter()
            .map(|d| (d.day.as_str(), "dropped", d.reason.as_str())),
    );
    rows.sort_by(|a, b| a.0.cmp(b.0));
    rows.extend(report.warnings.iter().map(|w| ("", "warning", w.as_str())));
    for (d, s, r) in rows {
        t.row([d, s, r]);
    }
    t.into_bytes()
}

fn preprocess(
    cfg: &RunConfig,
    contents: &Contents,
    w: &mut ArtifactWriter,
) -> Result<(), CliError> {
    let report = ingest(cfg, contents)?;
    w.write("ingest_report.csv", &ingest_table(&report))?;
    w.write_json("days.json", &report.days)?;
    Ok(())
}

/// Serializes the tree at artifact precision and reads it back, so that a
/// tree loaded from `tree.json` later builds exactly the same model.
fn canonical_tree(tree: &ScenarioTree) -> (ScenarioTree, String) {
    let json = to_json(tree);
    let back = serde_json::from_str(&json).expect("written tree parses");
    (back, json)
}

fn load_tree(path_field: &str, bytes: &[u8]) -> Result<ScenarioTree, CliError> {
    let artifact = |message: String| CliError::Artifact {
        path: path_field.into(),
        message,
    };
    let tree: ScenarioTree = serde_json::from_slice(bytes).map_err(|e| artifact(e.to_string()))?;
    if let Some(v) = tree.violations().first() {
        return Err(artifact(v.to_string()));
    }
    Ok(tree)
}

struct Clustered {
    tree: ScenarioTree,
    json: String,
    clustering: Clustering,
    report: IngestReport,
}

fn cluster_days(cfg: &RunConfig, contents: &Contents) -> Result<Clustered, CliError> {
    let report = ingest(cfg, contents)?;
    let k = cfg.clusters;
    if k > report.days.len() {
        return Err(CliError::config(
            "clusters",
            format!("{k} clusters for {} surviving days", report.days.len()),
        ));
    }
    let (tree, clustering) = scenario_tree(&report.days, k, cfg.seed)?;
    let (tree, json) = canonical_tree(&tree);
    Ok(Clustered {
        tree,
        json,
        clustering,
        report,
    })
}

fn cluster(cfg: &RunConfig, contents: &Contents, w: &mut ArtifactWriter) -> Result<(), CliError> {
    let c = cluster_days(cfg, contents)?;
    w.write("ingest_report.csv", &ingest_table(&c.report))?;
    w.write("tree.json", c.json.as_bytes())?;

    let mut t = Table::new(&["day", "cluster", "probability"]);
    for s in &c.tree.scenarios {
        t.row([
            s.id_price.day_id.clone(),
            s.cluster_id.to_string(),
            fmt_num(s.probability),
        ]);
    }
    w.write("clusters.csv", &t.into_bytes())?;

    let dev = deviation_std_report(&c.tree);
    let mut t = Table::new(&["cluster", "deviation_std"]);
    for (i, v) in dev.per_cluster.iter().enumerate() {
        t.row([c.tree.clusters[i].cluster_id.to_string(), fmt_num(*v)]);
    }
    t.row(["average".to_string(), fmt_num(dev.average)]);
    w.write("deviation_std.csv", &t.into_bytes())?;

    let n = c.report.days.len();
    let k_max = n.min((2 * cfg.clusters).max(10));
    let ks: Vec<usize> = (1..=k_max).collect();
    let curve = wcss_curve(&standardize(&c.report.days)?, &ks, cfg.seed)?;
    let mut t = Table::new(&["k", "wcss"]);
    for (k, v) in curve {
        t.row([k.to_string(), fmt_num(v)]);
    }
    t.row(["chosen".to_string(), fmt_num(c.clustering.wcss)]);
    w.write("wcss.csv", &t.into_bytes())?;
    Ok(())
}

/// The scenario tree for a study: `inputs.tree` when set, otherwise built
/// from the raw series and written as `tree.json`.
fn study_inputs(
    cfg: &RunConfig,
    contents: &Contents,
    w: &mut ArtifactWriter,
) -> Result<StudyInputs, CliError> {
    let tree = match content(contents, "inputs.tree") {
        Some(bytes) => load_tree("inputs.tree", bytes)?,
        None => {
            let c = cluster_days(cfg, contents)?;
            w.write("tree.json", c.json.as_bytes())?;
            c.tree
        }
    };
    let mut inputs = StudyInputs::new(tree, cfg.process, cfg.econ());
    inputs.market_mode = cfg.market_mode.into();
    Ok(inputs)
}

#[derive(Serialize)]
struct SolveRecord {
    objective: Objective,
    market_mode: MarketMode,
    lp_fingerprint: String,
    n_vars: usize,
    n_rows: usize,
    iterations: usize,
    check_passed: bool,
    report: flexplan_core::lp::SolutionReport,
}

fn solve(
    cfg: &RunConfig,
    contents: &Contents,
    dump_lp: bool,
    w: &mut ArtifactWriter,
) -> Result<(), CliError> {
    let inputs = study_inputs(cfg, contents, w)?;
    let objective = cfg.objective();
    let model = build(
        &inputs.tree,
        &inputs.process,
        &inputs.econ,
        &ModelConfig::new(inputs.market_mode, objective),
    )
    .map_err(flexplan_core::studies::StudyError::from)?;
    if dump_lp {
        w.write(
            "model.lp",
            write_lp(&model.problem, "flexplan design model").as_bytes(),
        )?;
    }
    let solved = solve_design(&inputs, objective)?;
    if !solved.check_passed() {
        log::warn!("solution residual check failed: {:?}", solved.report);
    }
    let record = SolveRecord {
        objective,
        market_mode: inputs.market_mode,
        lp_fingerprint: format!("{:016x}", model.problem.fingerprint()),
        n_vars: model.problem.n_vars(),
        n_rows: model.problem.n_rows(),
        iterations: solved.iterations,
        check_passed: solved.check_passed(),
        report: solved.report,
    };
    w.write_json("design.json", &solved.result)?;
    w.write_json("solve.json", &record)?;

    let mut t = Table::new(&[
        "scenario",
        "cluster",
        "t",
        "process_power",
        "da_trade",
        "id_trade",
        "charge",
        "discharge",
        "state_of_charge",
        "product_storage",
        "pv_power",
        "wind_power",
    ]);
    for s in &solved.result.schedules {
        for q in 0..QUARTERS_PER_DAY {
            let mut row = vec![
                s.scenario_id.to_string(),
                s.cluster_id.to_string(),
                q.to_string(),
            ];
            row.extend(
                [
                    s.process_power[q],
                    s.da_trade[q / 4],
                    s.id_trade[q],
                    s.charge[q],
                    s.discharge[q],
                    s.state_of_charge[q],
                    s.product_storage[q],
                    s.pv_power[q],
                    s.wind_power[q],
                ]
                .map(fmt_num),
            );
            t.row(row);
        }
    }
    w.write("schedules.csv", &t.into_bytes())?;
    Ok(())
}

const SUMMARY_HEADER: [&str; 12] = [
    "tac",
    "gwi",
    "q_pv",
    "q_wind",
    "q_batt",
    "capex",
    "opex_el",
    "opex_grid",
    "purchases",
    "sales",
    "id_sales",
    "check_passed",
];

fn summary_cells(s: &DesignSummary) -> Vec<String> {
    let t = &s.trades;
    let mut cells: Vec<String> = [
        s.tac,
        s.gwi,
        s.q_pv,
        s.q_wind,
        s.q_batt,
        s.breakdown.capex,
        s.breakdown.opex_el,
        s.breakdown.opex_grid,
        t.total_purchases(),
        t.total_sales(),
        t.id_sales,
    ]
    .map(fmt_num)
    .to_vec();
    cells.push(s.check_passed.to_string());
    cells
}

fn header(first: &[&'static str], last: &[&'static str]) -> Vec<&'static str> {
    first
        .iter()
        .chain(SUMMARY_HEADER.iter())
        .chain(last)
        .copied()
        .collect()
}

fn pareto(cfg: &RunConfig, contents: &Contents, w: &mut ArtifactWriter) -> Result<(), CliError> {
    let inputs = study_inputs(cfg, contents, w)?;
    let front = pareto_front(&inputs, cfg.studies.pareto_points)?;
    let mut t = Table::new(&header(&["point", "gwi_bound"], &[]));
    for (i, p) in front.iter().enumerate() {
        let mut row = vec![i.to_string(), fmt_num(p.gwi_bound)];
        row.extend(summary_cells(&p.design.summary()));
        t.row(row);
    }
    w.write("pareto.csv", &t.into_bytes())?;
    Ok(())
}

fn sweep(cfg: &RunConfig, contents: &Contents, w: &mut ArtifactWriter) -> Result<(), CliError> {
    let inputs = study_inputs(cfg, contents, w)?;
    let parameter: SweepParameter = cfg.studies.sweep_parameter.into();
    let values = match &cfg.studies.sweep_values {
        Some(v) => v.clone(),
        None => parameter.default_values(&inputs.process, cfg.studies.sweep_points),
    };
    let spec = SweepSpec {
        parameter,
        values,
        tree: inputs.tree,
        process: inputs.process,
        econ: inputs.econ,
        market_mode: inputs.market_mode,
        objective: cfg.objective(),
        solve: inputs.solve,
    };
    let rows = flexibility_sweep(&spec)?;
    let mut t = Table::new(&header(
        &["parameter", "value"],
        &["tac_without_system", "savings"],
    ));
    for r in &rows {
        let mut row = vec![parameter.name().to_string(), fmt_num(r.value)];
        row.extend(summary_cells(&r.with_system));
        row.push(fmt_num(r.without_system.tac));
        row.push(fmt_num(r.savings));
        t.row(row);
    }
    w.write("sweep.csv", &t.into_bytes())?;
    Ok(())
}

fn heatmap(cfg: &RunConfig, contents: &Contents, w: &mut ArtifactWriter) -> Result<(), CliError> {
    let inputs = study_inputs(cfg, contents, w)?;
    let map = capacity_heatmap(
        &inputs,
        &cfg.studies.heatmap_oversizing,
        &cfg.studies.heatmap_scale,
    )?;
    let long = |cells: Vec<(usize, usize, f64)>| {
        let mut t = Table::new(&["row", "col", "value"]);
        for (r, c, v) in cells {
            t.row([r.to_string(), c.to_string(), fmt_num(v)]);
        }
        t.into_bytes()
    };
    let mut axes = Table::new(&["axis", "index", "value"]);
    for (i, v) in map.oversizing.iter().enumerate() {
        axes.row(["row_oversizing".to_string(), i.to_string(), fmt_num(*v)]);
    }
    for (i, v) in map.scale.iter().enumerate() {
        axes.row(["col_capacity_scale".to_string(), i.to_string(), fmt_num(*v)]);
    }
    w.write("heatmap_axes.csv", &axes.into_bytes())?;
    w.write("heatmap_tac.csv", &long(map.long(|s| s.tac)))?;
    w.write("heatmap_q_pv.csv", &long(map.long(|s| s.q_pv)))?;
    w.write("heatmap_q_wind.csv", &long(map.long(|s| s.q_wind)))?;
    w.write("heatmap_q_batt.csv", &long(map.long(|s| s.q_batt)))?;
    w.write("heatmap_additivity.csv", &long(map.additivity()))?;
    Ok(())
}

fn compare_markets(
    cfg: &RunConfig,
    contents: &Contents,
    w: &mut ArtifactWriter,
) -> Result<(), CliError> {
    let inputs = study_inputs(cfg, contents, w)?;
    let cmp = market_mode_comparison(&inputs)?;
    let mut t = Table::new(&header(&["mode"], &["savings", "relative_savings"]));
    for (name, s, saved, rel) in [
        ("id_only", &cmp.id_only, 0.0, 0.0),
        (
            "simultaneous",
            &cmp.simultaneous,
            cmp.savings,
            cmp.relative_savings,
        ),
    ] {
        let mut row = vec![name.to_string()];
        row.extend(summary_cells(s));
        row.extend([fmt_num(saved), fmt_num(rel)]);
        t.row(row);
    }
    w.write("market_comparison.csv", &t.into_bytes())?;

    let mut simultaneous = inputs.clone();
    simultaneous.market_mode = MarketMode::Simultaneous;
    let dec = savings_decomposition(&simultaneous)?;
    let mut t = Table::new(&header(&["variant"], &["savings", "relative_savings"]));
    for r in &dec.rows {
        let mut row = vec![r.variant.name().to_string()];
        row.extend(summary_cells(&r.summary));
        row.extend([fmt_num(r.savings), fmt_num(r.relative_savings)]);
        t.row(row);
    }
    w.write("savings_decomposition.csv", &t.into_bytes())?;
    w.write_json("compare_markets.json", &(&cmp, &dec))?;
    Ok(())
}

/// Artifacts summarized by `report`, in order.
const REPORT_TABLES: [&str; 7] = [
    "ingest_report.csv",
    "clusters.csv",
    "pareto.csv",
    "sweep.csv",
    "market_comparison.csv",
    "savings_decomposition.csv",
    "heatmap_axes.csv",
];

fn markdown_table(csv_bytes: &[u8]) -> Result<String, csv::Error> {
    let mut r = csv::Reader::from_reader(csv_bytes);
    let head: Vec<String> = r.headers()?.iter().map(String::from).collect();
    let mut s = format!(
        "| {} |\n|{}\n",
        head.join(" | "),
        " --- |".repeat(head.len())
    );
    for rec in r.records() {
        s += &format!("| {} |\n", rec?.iter().collect::<Vec<_>>().join(" | "));
    }
    Ok(s)
}

fn report(w: &mut ArtifactWriter) -> Result<(), CliError> {
    let dir = w.dir().to_path_buf();
    let mut manifests: Vec<Manifest> = Vec::new();
    let own = ArtifactWriter::manifest_name("report");
    let entries = std::fs::read_dir(&dir).map_err(|source| CliError::Read {
        path: dir.clone(),
        source,
    })?;
    let mut names: Vec<String> = entries
        .filter_map(|e| e.ok().and_then(|e| e.file_name().into_string().ok()))
        .filter(|n| n.ends_with(".manifest.json") && *n != own)
        .collect();
    names.sort();
    for n in &names {
        let path = dir.join(n);
        let m = serde_json::from_str(&read_text(&path)?).map_err(|e| CliError::Artifact {
            path: path.clone(),
            message: e.to_string(),
        })?;
        manifests.push(m);
    }
    if manifests.is_empty() {
        return Err(CliError::Artifact {
            path: dir,
            message: "no run manifests to report on".into(),
        });
    }

    let mut md = String::from("# flexplan report\n\n## Runs\n\n| verb | seed | config hash | complete | error |\n| --- | --- | --- | --- | --- |\n");
    for m in &manifests {
        let hash = m.config_hash.get(..12).unwrap_or(&m.config_hash);
        md += &format!(
            "| {} | {} | {hash} | {} | {} |\n",
            m.verb,
            m.seed,
            m.complete,
            m.error.as_deref().unwrap_or("")
        );
    }
    let design = dir.join("design.json");
    if design.is_file() {
        let r: flexplan_core::DesignResult =
            serde_json::from_str(&read_text(&design)?).map_err(|e| CliError::Artifact {
                path: design.clone(),
                message: e.to_string(),
            })?;
        md += "\n## Design\n\n| quantity | value |\n| --- | --- |\n";
        let b = &r.breakdown;
        let t = &r.trades;
        for (k, v) in [
            ("TAC [EUR/a]", r.tac),
            ("GWI [kgCO2/a]", r.gwi),
            ("PV [MW]", r.q_pv),
            ("wind [MW]", r.q_wind),
            ("battery [MWh]", r.q_batt),
            ("annualized investment [EUR/a]", b.capex),
            ("electricity cost [EUR/a]", b.opex_el),
            ("grid fees [EUR/a]", b.opex_grid),
            ("day-ahead purchases [MWh/a]", t.da_purchases),
            ("day-ahead sales [MWh/a]", t.da_sales),
            ("intraday purchases [MWh/a]", t.id_purchases),
            ("intraday sales [MWh/a]", t.id_sales),
        ] {
            md += &format!("| {k} | {} |\n", fmt_num(v));
        }
    }
    for name in REPORT_TABLES {
        let path = dir.join(name);
        if path.is_file() {
            let bytes = read(&path)?;
            let table = markdown_table(&bytes).map_err(|e| CliError::Artifact {
                path: path.clone(),
                message: e.to_string(),
            })?;
            md += &format!("\n## {name}\n\n{table}");
        }
    }
    w.write("report.md", md.as_bytes())?;
    print!("{md}");
    Ok(())
}
