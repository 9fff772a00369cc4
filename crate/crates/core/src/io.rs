//! CSV and JSON artifacts: instances, trees, term tables, experiment
//! records, lemma reports.

use std::io::{BufRead, BufReader, Read, Write};

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::beta::BetaEstimate;
use crate::checks::LemmaReport;
use crate::error::{Error, Result};
use crate::geometry::{BipartiteInstance, MetricKind, PointSet};
use crate::mst::{SpanningTree, TreeEdge};

/// Version string written into artifact headers.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Payload encoding for tabular artifacts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    /// Array of objects with the CSV column names as keys.
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl std::fmt::Display for Format {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.extension())
    }
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::InvalidParameter(format!("unknown format {s:?}; expected csv or json"))),
        }
    }
}

/// Writes `rows` as CSV (preceded by `# header` when given) or as a JSON
/// array.
pub fn write_rows<T: Serialize, W: Write>(rows: &[T], format: Format, header: Option<&str>, mut w: W) -> Result<()> {
    match format {
        Format::Csv => {
            if let Some(h) = header {
                writeln!(w, "# {h}")?;
            }
            let mut cw = csv::Writer::from_writer(w);
            for r in rows {
                cw.serialize(r)?;
            }
            cw.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, rows)?;
            writeln!(w)?;
        }
    }
    Ok(())
}

/// Reads CSV rows written by [`write_rows`], skipping `#` lines.
pub fn read_csv_rows<T: DeserializeOwned, R: Read>(r: R) -> Result<Vec<T>> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(r);
    rdr.deserialize().map(|row| row.map_err(Error::from)).collect()
}

/// Sidecar of an instance CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceMeta {
    pub n_r: usize,
    pub n_b: usize,
    pub d: usize,
    pub metric: MetricKind,
    pub seed: u64,
}

impl InstanceMeta {
    pub fn of(inst: &BipartiteInstance) -> Self {
        InstanceMeta {
            n_r: inst.n_red(),
            n_b: inst.n_blue(),
            d: inst.dim(),
            metric: inst.metric,
            seed: inst.seed,
        }
    }
}

/// `color,x0,...,x{d-1}` with red rows first.
pub fn write_instance_csv<W: Write>(inst: &BipartiteInstance, w: W) -> Result<()> {
    let mut cw = csv::Writer::from_writer(w);
    let mut header = vec!["color".to_string()];
    header.extend((0..inst.dim()).map(|i| format!("x{i}")));
    cw.write_record(&header)?;
    for (color, set) in [("R", &inst.red), ("B", &inst.blue)] {
        for p in set.iter() {
            let mut rec = vec![color.to_string()];
            rec.extend(p.iter().map(|x| x.to_string()));
            cw.write_record(&rec)?;
        }
    }
    cw.flush()?;
    Ok(())
}

/// Parses an instance CSV; metric and seed come from the sidecar.
pub fn read_instance_csv<R: Read>(r: R, metric: MetricKind, seed: u64) -> Result<BipartiteInstance> {
    let mut rdr = csv::Reader::from_reader(r);
    let dim = rdr.headers()?.len().saturating_sub(1);
    if dim == 0 {
        return Err(Error::InvalidInstance("instance CSV has no coordinate columns".into()));
    }
    let mut red = PointSet::new(dim);
    let mut blue = PointSet::new(dim);
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let coords = rec
            .iter()
            .skip(1)
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|e| Error::InvalidInstance(format!("row {}: {e}", line + 1)))?;
        match rec.get(0) {
            Some("R") => red.push(&coords)?,
            Some("B") => blue.push(&coords)?,
            other => return Err(Error::InvalidInstance(format!("row {}: bad color {other:?}", line + 1))),
        }
    }
    BipartiteInstance::new(red, blue, metric, seed)
}

/// Writes a JSON value followed by a newline.
pub fn write_json<T: Serialize, W: Write>(value: &T, mut w: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    Ok(())
}

pub fn read_json<T: DeserializeOwned, R: Read>(r: R) -> Result<T> {
    Ok(serde_json::from_reader(r)?)
}

/// Summary written next to a tree CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeSummary {
    pub cost_p: f64,
    pub bottleneck: f64,
    pub max_degree: u32,
    pub n_r: usize,
    pub n_b: usize,
    pub d: usize,
    pub p: f64,
    pub metric: MetricKind,
    pub seed: u64,
}

impl TreeSummary {
    pub fn of(inst: &BipartiteInstance, tree: &SpanningTree, p: f64) -> Self {
        TreeSummary {
            cost_p: tree.cost(p),
            bottleneck: tree.bottleneck(),
            max_degree: tree.max_degree(),
            n_r: inst.n_red(),
            n_b: inst.n_blue(),
            d: inst.dim(),
            p,
            metric: inst.metric,
            seed: inst.seed,
        }
    }
}

/// `u,v,length`, one row per edge.
pub fn write_tree<W: Write>(tree: &SpanningTree, format: Format, w: W) -> Result<()> {
    write_rows(tree.edges(), format, None, w)
}

/// Reads a tree CSV for the given vertex count.
pub fn read_tree_csv<R: Read>(r: R, vertex_count: usize) -> Result<SpanningTree> {
    let edges: Vec<TreeEdge> = read_csv_rows(r)?;
    SpanningTree::new(vertex_count, edges)
}

/// One row of the term table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermRow {
    #[serde(rename = "k_R")]
    pub k_r: usize,
    #[serde(rename = "k_B")]
    pub k_b: usize,
    #[serde(rename = "E")]
    pub e: f64,
    pub stderr: f64,
    pub acceptance: f64,
    pub samples: usize,
}

pub fn term_rows(est: &BetaEstimate) -> Vec<TermRow> {
    est.terms
        .iter()
        .map(|t| TermRow {
            k_r: t.estimate.k_r,
            k_b: t.estimate.k_b,
            e: t.estimate.e,
            stderr: t.estimate.std_error,
            acceptance: t.estimate.acceptance_rate,
            samples: t.estimate.samples,
        })
        .collect()
}

/// One report per line.
pub fn write_json_lines<W: Write>(reports: &[LemmaReport], mut w: W) -> Result<()> {
    for r in reports {
        writeln!(w, "{}", r.to_json_line())?;
    }
    Ok(())
}

/// Header comment lines of a CSV artifact.
pub fn read_header_comments<R: Read>(r: R) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for line in BufReader::new(r).lines() {
        let line = line?;
        match line.strip_prefix('#') {
            Some(rest) => out.push(rest.trim().to_string()),
            None => break,
        }
    }
    Ok(out)
}
