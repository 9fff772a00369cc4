//! Subcommand implementations. Each resolves its configuration, writes its
//! artifacts under `out`, and echoes the artifact paths as JSON.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use bmst::beta::{estimate_beta_with, BetaOptions, SeriesForm};
use bmst::checks::{check_bounded_difference, hilbert_chain_bound, run_all, Corruption, LemmaId, LemmaReport};
use bmst::experiments::{
    color_split, concentration_scan, degree_scan, direct_beta, frieze_calibration, occupancy_tail_check,
    rate_statistics, scaling_scan, ExperimentPlan, ExperimentRecord, ZETA3,
};
use bmst::geometry::{sample_uniform, BipartiteInstance, MetricKind};
use bmst::io::{self, Format, InstanceMeta, TreeSummary, VERSION};
use bmst::mst::{bipartite_mst, Solver};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::config::{resolve, Common};
use crate::{Command, CommonFlags, Failure};

fn powers_of_two(lo: u32, hi: u32) -> Vec<usize> {
    (lo..=hi).map(|k| 1usize << k).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
struct InstanceConfig {
    input: Option<PathBuf>,
    n: usize,
    alpha: f64,
    d: usize,
    metric: MetricKind,
    p: f64,
    solver: Solver,
    all: bool,
    check: Vec<LemmaId>,
    corrupt: Option<Corruption>,
    #[serde(flatten)]
    common: Common,
}

impl Default for InstanceConfig {
    fn default() -> Self {
        InstanceConfig {
            input: None,
            n: 1000,
            alpha: 0.5,
            d: 2,
            metric: MetricKind::UnitCube,
            p: 1.0,
            solver: Solver::GridBoruvka,
            all: false,
            check: Vec::new(),
            corrupt: None,
            common: Common::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
struct BetaSeriesConfig {
    d: usize,
    p: f64,
    alpha: f64,
    kmax: usize,
    samples: usize,
    inner_samples: usize,
    form: SeriesForm,
    #[serde(flatten)]
    common: Common,
}

impl Default for BetaSeriesConfig {
    fn default() -> Self {
        let o = BetaOptions::new(1, 0.5, 0.5);
        BetaSeriesConfig {
            d: o.dim,
            p: o.p,
            alpha: o.alpha_r,
            kmax: o.k_max,
            samples: o.samples,
            inner_samples: o.inner_samples,
            form: o.form,
            common: Common::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
struct PlanConfig {
    d: usize,
    p: f64,
    alpha: f64,
    metric: MetricKind,
    schedule: Vec<usize>,
    trials: usize,
    timing: bool,
    #[serde(flatten)]
    common: Common,
}

impl Default for PlanConfig {
    fn default() -> Self {
        PlanConfig {
            d: 2,
            p: 1.0,
            alpha: 0.5,
            metric: MetricKind::UnitCube,
            schedule: powers_of_two(10, 15),
            trials: 20,
            timing: false,
            common: Common::default(),
        }
    }
}

impl PlanConfig {
    fn plan(&self, id: &str) -> ExperimentPlan {
        let mut plan = ExperimentPlan::new(id, self.schedule.clone(), self.d, self.p, self.alpha, self.trials, self.common.seed);
        plan.metric = self.metric;
        plan.timing = self.timing;
        plan.output = Some(self.common.out.clone());
        plan
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
struct FriezeConfig {
    n: usize,
    trials: usize,
    #[serde(flatten)]
    common: Common,
}

impl Default for FriezeConfig {
    fn default() -> Self {
        FriezeConfig { n: 200, trials: 200, common: Common::default() }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
struct TailConfig {
    n: usize,
    d: usize,
    level: u32,
    t: Vec<f64>,
    trials: usize,
    #[serde(flatten)]
    common: Common,
}

impl Default for TailConfig {
    fn default() -> Self {
        TailConfig {
            n: 10_000,
            d: 1,
            level: 6,
            t: vec![0.25, 0.5, 2.0, 4.0],
            trials: 1000,
            common: Common::default(),
        }
    }
}

#[derive(Serialize)]
struct CostRow {
    trial: usize,
    cost: f64,
}

/// Artifact paths of one run, echoed on stdout.
struct Outputs {
    dir: PathBuf,
    format: Format,
    paths: Map<String, Value>,
}

impl Outputs {
    fn new(common: &Common) -> Result<Self, Failure> {
        std::fs::create_dir_all(&common.out)?;
        Ok(Outputs { dir: common.out.clone(), format: common.format, paths: Map::new() })
    }

    fn create(&mut self, key: &str, file: &str) -> Result<BufWriter<File>, Failure> {
        let path = self.dir.join(file);
        let f = File::create(&path).map_err(|e| Failure::internal(format!("cannot create {}: {e}", path.display())))?;
        self.paths.insert(key.into(), Value::String(path.display().to_string()));
        Ok(BufWriter::new(f))
    }

    fn table<T: Serialize>(&mut self, key: &str, stem: &str, rows: &[T], header: Option<&str>) -> Result<(), Failure> {
        let file = format!("{stem}.{}", self.format.extension());
        let w = self.create(key, &file)?;
        io::write_rows(rows, self.format, header, w)?;
        Ok(())
    }

    fn json<T: Serialize>(&mut self, key: &str, file: &str, value: &T) -> Result<(), Failure> {
        let w = self.create(key, file)?;
        io::write_json(value, w)?;
        Ok(())
    }

    fn finish(mut self, command: &str, config: &impl Serialize) -> Result<(), Failure> {
        let mut effective = serde_json::to_value(config).map_err(Failure::internal)?;
        effective["command"] = Value::String(command.into());
        effective["version"] = Value::String(VERSION.into());
        self.json("effective_config", "effective_config.json", &effective)?;
        println!("{}", json!({ "outputs": self.paths }));
        Ok(())
    }
}

fn flags_value<T: Serialize>(flags: &T) -> Result<Value, Failure> {
    serde_json::to_value(flags).map_err(Failure::internal)
}

fn setup<C: Serialize + serde::de::DeserializeOwned>(
    defaults: C,
    flags: &impl Serialize,
    common: &CommonFlags,
) -> Result<C, Failure> {
    resolve(defaults, flags_value(flags)?, common.config.as_deref())
}

fn set_workers(common: &Common) -> Result<(), Failure> {
    if let Some(w) = common.workers {
        if w == 0 {
            return Err(Failure::usage("--workers must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .map_err(Failure::internal)?;
    }
    Ok(())
}

fn sidecar(path: &Path) -> PathBuf {
    path.with_extension("meta.json")
}

fn load_instance(cfg: &InstanceConfig) -> Result<BipartiteInstance, Failure> {
    match &cfg.input {
        Some(path) => {
            let meta_path = sidecar(path);
            let (metric, seed) = if meta_path.exists() {
                let meta: InstanceMeta = io::read_json(File::open(&meta_path)?)?;
                (meta.metric, meta.seed)
            } else {
                (cfg.metric, cfg.common.seed)
            };
            let f = File::open(path).map_err(|e| Failure::usage(format!("cannot open {}: {e}", path.display())))?;
            Ok(io::read_instance_csv(f, metric, seed)?)
        }
        None => {
            let (n_r, n_b) = color_split(cfg.n, cfg.alpha)?;
            Ok(sample_uniform(n_r, n_b, cfg.d, cfg.metric, cfg.common.seed)?)
        }
    }
}

fn instance_rows(inst: &BipartiteInstance) -> Vec<Map<String, Value>> {
    let mut rows = Vec::with_capacity(inst.len());
    for v in 0..inst.len() {
        let mut row = Map::new();
        row.insert("color".into(), json!(if inst.is_red(v) { "R" } else { "B" }));
        for (i, x) in inst.vertex(v).iter().enumerate() {
            row.insert(format!("x{i}"), json!(x));
        }
        rows.push(row);
    }
    rows
}

/// JSON of `value` without its raw per-trial arrays.
fn summary_of<T: Serialize>(value: &T, drop: &[&str]) -> Result<Value, Failure> {
    let mut v = serde_json::to_value(value).map_err(Failure::internal)?;
    if let Value::Object(m) = &mut v {
        for key in drop {
            m.remove(*key);
        }
    }
    Ok(v)
}

fn records_header(plan: &ExperimentPlan) -> Result<String, Failure> {
    Ok(format!("plan={} version={VERSION}", serde_json::to_string(plan).map_err(Failure::internal)?))
}

/// Runs one subcommand; the returned code is 1 when a check failed.
pub fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Gen(f) => {
            let cfg: InstanceConfig = setup(InstanceConfig::default(), &f, &f.common)?;
            set_workers(&cfg.common)?;
            let inst = load_instance(&InstanceConfig { input: None, ..cfg.clone() })?;
            let mut out = Outputs::new(&cfg.common)?;
            match cfg.common.format {
                Format::Csv => {
                    let w = out.create("instance", "instance.csv")?;
                    io::write_instance_csv(&inst, w)?;
                }
                Format::Json => out.json("instance", "instance.json", &instance_rows(&inst))?,
            }
            out.json("meta", "instance.meta.json", &InstanceMeta::of(&inst))?;
            out.finish("gen", &view(&cfg, &["input", "p", "solver", "all", "check", "corrupt"])?)?;
            Ok(0)
        }
        Command::Solve(f) => {
            let cfg: InstanceConfig = setup(InstanceConfig::default(), &f, &f.common)?;
            set_workers(&cfg.common)?;
            let inst = load_instance(&cfg)?;
            let tree = bipartite_mst(&inst, cfg.solver)?;
            let mut out = Outputs::new(&cfg.common)?;
            out.table("tree", "tree", tree.edges(), None)?;
            out.json("summary", "summary.json", &TreeSummary::of(&inst, &tree, cfg.p))?;
            out.finish("solve", &view(&cfg, &["all", "check", "corrupt"])?)?;
            Ok(0)
        }
        Command::Verify(f) => {
            let mut cfg: InstanceConfig = setup(InstanceConfig { n: 300, ..Default::default() }, &f, &f.common)?;
            cfg.check.sort_by_key(|id| *id as u8);
            cfg.check.dedup();
            set_workers(&cfg.common)?;
            let inst = load_instance(&cfg)?;
            let reports = verify(&inst, &cfg)?;
            let mut out = Outputs::new(&cfg.common)?;
            match cfg.common.format {
                Format::Csv => {
                    let w = out.create("reports", "reports.jsonl")?;
                    io::write_json_lines(&reports, w)?;
                }
                Format::Json => {
                    let lines: Vec<Value> = reports
                        .iter()
                        .map(|r| serde_json::from_str(&r.to_json_line()).map_err(Failure::internal))
                        .collect::<Result<_, _>>()?;
                    out.json("reports", "reports.json", &lines)?;
                }
            }
            out.finish("verify", &view(&cfg, &["solver"])?)?;
            let failed: Vec<&LemmaReport> = reports.iter().filter(|r| !r.passed()).collect();
            for r in &failed {
                eprintln!("FAIL {}", r.to_json_line());
            }
            Ok(if failed.is_empty() { 0 } else { 1 })
        }
        Command::BetaSeries(f) => {
            let cfg: BetaSeriesConfig = setup(BetaSeriesConfig::default(), &f, &f.common)?;
            set_workers(&cfg.common)?;
            let est = estimate_beta_with(&BetaOptions {
                dim: cfg.d,
                p: cfg.p,
                alpha_r: cfg.alpha,
                k_max: cfg.kmax,
                samples: cfg.samples,
                inner_samples: cfg.inner_samples,
                form: cfg.form,
                seed: cfg.common.seed,
            })?;
            let mut out = Outputs::new(&cfg.common)?;
            out.table("terms", "terms", &io::term_rows(&est), None)?;
            out.json("estimate", "beta.json", &est)?;
            out.finish("beta-series", &cfg)?;
            Ok(0)
        }
        Command::BetaDirect(f) => {
            let defaults = PlanConfig { d: 1, p: 0.5, trials: 50, metric: MetricKind::FlatTorus, ..Default::default() };
            let cfg: PlanConfig = setup(defaults, &f, &f.common)?;
            set_workers(&cfg.common)?;
            let r = direct_beta(cfg.d, cfg.p, cfg.alpha, &cfg.schedule, cfg.trials, cfg.common.seed)?;
            let mut out = Outputs::new(&cfg.common)?;
            let mut plan = cfg.plan("direct_beta");
            plan.metric = MetricKind::FlatTorus;
            out.table("records", "records", &r.records, Some(&records_header(&plan)?))?;
            out.table("plateau", "plateau", &r.rows, None)?;
            out.json("estimate", "direct.json", &summary_of(&r, &["records"])?)?;
            out.finish("beta-direct", &plan_view(&cfg, false)?)?;
            Ok(0)
        }
        Command::ScanDegree(f) => scan(&f, "scan_degree", PlanConfig::default(), |p| {
            let s = degree_scan(p)?;
            Ok((summary_of(&s, &["records"])?, s.records))
        }),
        Command::ScanScaling(f) => scan(&f, "scan_scaling", PlanConfig::default(), |p| {
            let s = scaling_scan(p)?;
            Ok((summary_of(&s, &["records"])?, s.records))
        }),
        Command::ScanConcentration(f) => {
            let defaults = PlanConfig { d: 3, schedule: powers_of_two(10, 14), trials: 40, ..Default::default() };
            scan(&f, "scan_concentration", defaults, |p| {
                let s = concentration_scan(p)?;
                Ok((summary_of(&s, &["records"])?, s.records))
            })
        }
        Command::ScanRates(f) => scan(&f, "scan_rates", PlanConfig::default(), |p| {
            let s = rate_statistics(p)?;
            Ok((summary_of(&s, &["records"])?, s.records))
        }),
        Command::CalibrateFrieze(f) => {
            let cfg: FriezeConfig = setup(FriezeConfig::default(), &f, &f.common)?;
            set_workers(&cfg.common)?;
            let r = frieze_calibration(cfg.n, cfg.trials, cfg.common.seed)?;
            let rows: Vec<CostRow> = r.costs.iter().enumerate().map(|(trial, &cost)| CostRow { trial, cost }).collect();
            let mut out = Outputs::new(&cfg.common)?;
            out.table("costs", "costs", &rows, None)?;
            let mut summary = summary_of(&r, &["costs"])?;
            summary["zeta3"] = json!(ZETA3);
            summary["relative_error"] = json!((r.mean - ZETA3).abs() / ZETA3);
            out.json("summary", "frieze.json", &summary)?;
            out.finish("calibrate-frieze", &cfg)?;
            Ok(0)
        }
        Command::TailCheck(f) => {
            let cfg: TailConfig = setup(TailConfig::default(), &f, &f.common)?;
            set_workers(&cfg.common)?;
            let checks = occupancy_tail_check(cfg.n, cfg.d, cfg.level, &cfg.t, cfg.trials, cfg.common.seed)?;
            let passed = checks.iter().all(|c| c.passed);
            let mut out = Outputs::new(&cfg.common)?;
            out.table("checks", "tail", &checks, None)?;
            out.json("summary", "tail_summary.json", &json!({"passed": passed, "checks": checks.len()}))?;
            out.finish("tail-check", &cfg)?;
            if !passed {
                eprintln!("FAIL occupancy tail exceeds the Chernoff bound beyond 3 sigma");
            }
            Ok(if passed { 0 } else { 1 })
        }
    }
}

fn scan(
    f: &crate::ScanFlags,
    id: &str,
    defaults: PlanConfig,
    body: impl FnOnce(&ExperimentPlan) -> Result<(Value, Vec<ExperimentRecord>), Failure>,
) -> Result<u8, Failure> {
    let cfg: PlanConfig = setup(defaults, f, &f.common)?;
    set_workers(&cfg.common)?;
    let plan = cfg.plan(id);
    let (summary, records) = body(&plan)?;
    let mut out = Outputs::new(&cfg.common)?;
    out.table("records", "records", &records, Some(&records_header(&plan)?))?;
    out.json("summary", "summary.json", &summary)?;
    out.finish(&id.replace('_', "-"), &plan_view(&cfg, true)?)?;
    Ok(0)
}

fn verify(inst: &BipartiteInstance, cfg: &InstanceConfig) -> Result<Vec<LemmaReport>, Failure> {
    let mst = bipartite_mst(inst, Solver::GridBoruvka)?;
    let tree = match cfg.corrupt {
        Some(c) => c.apply(inst, &mst)?,
        None => mst,
    };
    let wants = |id: LemmaId| cfg.check.contains(&id);
    let mut reports = run_all(inst, &tree, cfg.p)?;
    let hilbert_applies = inst.metric == MetricKind::UnitCube && inst.dim() <= 3;
    if wants(LemmaId::HilbertChain) || (cfg.all && hilbert_applies) {
        reports.push(hilbert_chain_bound(&inst.all_points(), cfg.p)?.report);
    }
    if wants(LemmaId::BoundedDifference) || (cfg.all && cfg.p <= 1.0) {
        reports.push(check_bounded_difference(inst, cfg.p, inst.seed)?);
    }
    if !cfg.check.is_empty() {
        reports.retain(|r| wants(r.lemma));
    }
    Ok(reports)
}

/// Effective config without the options a command does not read.
fn view(cfg: &InstanceConfig, drop: &[&str]) -> Result<Value, Failure> {
    summary_of(cfg, drop)
}

fn plan_view(cfg: &PlanConfig, with_metric: bool) -> Result<Value, Failure> {
    summary_of(cfg, if with_metric { &[] } else { &["metric", "timing"] })
}
