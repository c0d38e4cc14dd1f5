//! Campaigns: every (dataset, method) cell of a JSON config is calibrated,
//! timed and written as one CSV row.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::str::FromStr;

use kaczmarz_core::{DatasetSpec, Family, GeneratedSystem, Method, SolverConfig};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bench::{self, Calibration, DEFAULT_EPSILON, DEFAULT_ITERATION_CAP, DEFAULT_SEEDS};
use crate::error::{Error, Result};

/// Environment variable capping the campaign worker count.
pub const THREADS_ENV: &str = "KZM_THREADS";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetEntry {
    pub family: String,
    pub m: usize,
    pub n: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_sigma: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignConfig {
    pub datasets: Vec<DatasetEntry>,
    pub methods: Vec<String>,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_seeds")]
    pub seeds: usize,
    #[serde(default = "default_cap")]
    pub iteration_cap: u64,
    pub master_seed: u64,
}

fn default_epsilon() -> f64 {
    DEFAULT_EPSILON
}

fn default_seeds() -> usize {
    DEFAULT_SEEDS
}

fn default_cap() -> u64 {
    DEFAULT_ITERATION_CAP
}

/// A config whose ids and ranges have been checked.
#[derive(Debug, Clone)]
pub struct Campaign {
    pub datasets: Vec<(DatasetSpec, usize, usize)>,
    pub methods: Vec<Method>,
    pub epsilon: f64,
    pub seeds: usize,
    pub iteration_cap: u64,
    pub master_seed: u64,
}

impl CampaignConfig {
    /// Parses JSON; errors name the offending field path.
    pub fn from_reader<R: Read>(r: R) -> Result<Self> {
        let mut de = serde_json::Deserializer::from_reader(r);
        serde_path_to_error::deserialize(&mut de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            if path == "." {
                Error::Usage(format!("config: {inner}"))
            } else {
                Error::Usage(format!("config field `{path}`: {inner}"))
            }
        })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_reader(s.as_bytes())
    }

    pub fn validate(&self) -> Result<Campaign> {
        let bad =
            |field: String, msg: String| Error::Usage(format!("config field `{field}`: {msg}"));
        let methods = self
            .methods
            .iter()
            .enumerate()
            .map(|(i, id)| {
                Method::from_str(id).map_err(|e| bad(format!("methods[{i}]"), e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(bad("epsilon".into(), "must be positive".into()));
        }
        if self.seeds == 0 {
            return Err(bad("seeds".into(), "must be at least 1".into()));
        }
        if self.iteration_cap == 0 {
            return Err(bad("iteration_cap".into(), "must be at least 1".into()));
        }
        let mut datasets = Vec::with_capacity(self.datasets.len());
        for (i, d) in self.datasets.iter().enumerate() {
            let family = Family::from_str(&d.family)
                .map_err(|e| bad(format!("datasets[{i}].family"), e.to_string()))?;
            let mut spec = DatasetSpec::new(family, d.m, d.n, d.seed);
            spec.fixed_sigma = d.fixed_sigma;
            spec.validate()
                .map_err(|e| bad(format!("datasets[{i}]"), e.to_string()))?;
            datasets.push((spec, d.m, d.n));
        }
        Ok(Campaign {
            datasets,
            methods,
            epsilon: self.epsilon,
            seeds: self.seeds,
            iteration_cap: self.iteration_cap,
            master_seed: self.master_seed,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    /// Calibration hit the iteration cap.
    NotConverged,
    /// At least one timed seed failed.
    Diverged,
    /// The cell could not be run at all.
    Error,
}

/// One cell of a campaign.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub family: String,
    pub method: Method,
    pub m: usize,
    pub n: usize,
    pub epsilon: f64,
    pub calibration: Option<Calibration>,
    pub timed: Option<bench::TimedRun>,
    pub seed_count: usize,
    pub status: Status,
    pub message: Option<String>,
}

impl BenchRecord {
    pub fn calibrated_k(&self) -> Option<u64> {
        self.calibration.as_ref().and_then(Calibration::k)
    }

    pub fn row(&self) -> CsvRow {
        let timed = self.timed.as_ref();
        CsvRow {
            family: self.family.clone(),
            method: self.method.id().to_string(),
            m: self.m,
            n: self.n,
            epsilon: self.epsilon,
            calibrated_k: self.calibrated_k(),
            seed_count: self.seed_count,
            mean_time_ns: timed.map(|t| t.mean_time_ns()),
            std_time_ns: timed.map(|t| t.std_time_ns()),
            mean_final_sq_error: timed.map(|t| t.mean_final_sq_error()),
            status: self.status,
        }
    }
}

/// The CSV schema; empty fields mean "not measured".
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub family: String,
    pub method: String,
    pub m: usize,
    pub n: usize,
    pub epsilon: f64,
    pub calibrated_k: Option<u64>,
    pub seed_count: usize,
    pub mean_time_ns: Option<f64>,
    pub std_time_ns: Option<f64>,
    pub mean_final_sq_error: Option<f64>,
    pub status: Status,
}

pub const CSV_HEADER: &str =
    "family,method,m,n,epsilon,calibrated_k,seed_count,mean_time_ns,std_time_ns,mean_final_sq_error,status";

/// Worker count: `KZM_THREADS` if set and positive, otherwise the
/// available parallelism.
pub fn worker_count() -> usize {
    let available = std::thread::available_parallelism().map_or(1, |n| n.get());
    match std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
    {
        Some(t) if t > 0 => t,
        _ => available,
    }
}

/// Generates each (family, seed) dataset once at its largest requested
/// size and crops the smaller ones from it.
fn build_datasets(c: &Campaign) -> Vec<Result<GeneratedSystem>> {
    let mut largest: BTreeMap<(Family, u64, Option<u64>), (usize, usize)> = BTreeMap::new();
    for (spec, m, n) in &c.datasets {
        let key = (spec.family, spec.seed, spec.fixed_sigma.map(f64::to_bits));
        let e = largest.entry(key).or_insert((0, 0));
        *e = (e.0.max(*m), e.1.max(*n));
    }
    let parents: BTreeMap<_, _> = largest
        .into_par_iter()
        .map(|(key, (m, n))| {
            let mut spec = DatasetSpec::new(key.0, m, n, key.1);
            spec.fixed_sigma = key.2.map(f64::from_bits);
            (key, GeneratedSystem::generate(&spec))
        })
        .collect();
    c.datasets
        .par_iter()
        .map(|(spec, m, n)| {
            let key = (spec.family, spec.seed, spec.fixed_sigma.map(f64::to_bits));
            match &parents[&key] {
                Ok(g) if (g.rows(), g.cols()) == (*m, *n) => Ok(g.clone()),
                Ok(g) => Ok(g.crop(*m, *n)?),
                Err(e) => Err(e.clone().into()),
            }
        })
        .collect()
}

fn run_cell(
    c: &Campaign,
    family: Family,
    m: usize,
    n: usize,
    g: &Result<GeneratedSystem>,
    method: Method,
) -> BenchRecord {
    let mut record = BenchRecord {
        family: family.id().to_string(),
        method,
        m,
        n,
        epsilon: c.epsilon,
        calibration: None,
        timed: None,
        seed_count: c.seeds,
        status: Status::Error,
        message: None,
    };
    let g = match g {
        Ok(g) => g,
        Err(e) => {
            record.message = Some(e.to_string());
            return record;
        }
    };
    let seeds = bench::run_seeds(c.master_seed, c.seeds);
    let template = SolverConfig::new(method, 1);
    let outcome = (|| -> Result<()> {
        let cal = bench::calibrate(
            &g.system,
            &template,
            g.reference(),
            c.epsilon,
            &seeds,
            c.iteration_cap,
        )?;
        let k = cal.k();
        record.calibration = Some(cal);
        let Some(k) = k else {
            record.status = Status::NotConverged;
            return Ok(());
        };
        let timed = bench::timed_run(&g.system, &template, g.reference(), k, &seeds)?;
        record.status = if timed.failed_seeds.is_empty() {
            Status::Ok
        } else {
            Status::Diverged
        };
        record.timed = Some(timed);
        Ok(())
    })();
    if let Err(e) = outcome {
        log::warn!("{family} {m}×{n} {method}: {e}");
        record.status = Status::Error;
        record.message = Some(e.to_string());
    }
    record
}

/// Runs every cell. Records come back in config order (datasets outer,
/// methods inner) whatever the worker count.
pub fn run_campaign(c: &Campaign, threads: usize) -> Result<Vec<BenchRecord>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Runtime(e.to_string()))?;
    Ok(pool.install(|| {
        let systems = build_datasets(c);
        let cells: Vec<(usize, Method)> = (0..c.datasets.len())
            .flat_map(|d| c.methods.iter().map(move |&m| (d, m)))
            .collect();
        cells
            .par_iter()
            .with_max_len(1)
            .map(|&(d, method)| {
                let (spec, m, n) = &c.datasets[d];
                run_cell(c, spec.family, *m, *n, &systems[d], method)
            })
            .collect()
    }))
}

pub fn write_csv<W: Write>(w: W, records: &[BenchRecord]) -> Result<()> {
    let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    out.write_record(CSV_HEADER.split(','))?;
    for r in records {
        out.serialize(r.row())?;
    }
    out.flush().map_err(|e| Error::io("<csv>", e))
}

pub fn read_csv<R: Read>(r: R) -> Result<Vec<CsvRow>> {
    let mut input = csv::Reader::from_reader(r);
    let header: Vec<String> = input.headers()?.iter().map(str::to_string).collect();
    if header.join(",") != CSV_HEADER {
        return Err(Error::Usage(format!(
            "unexpected CSV header `{}`",
            header.join(",")
        )));
    }
    input
        .deserialize()
        .map(|row| row.map_err(Error::from))
        .collect()
}

/// Methods ordered by mean time within each (family, m, n); cells without
/// a time go last.
pub fn summary_table(rows: &[CsvRow]) -> String {
    let mut groups: BTreeMap<(String, usize, usize), Vec<&CsvRow>> = BTreeMap::new();
    for r in rows {
        groups
            .entry((r.family.clone(), r.m, r.n))
            .or_default()
            .push(r);
    }
    let mut out = String::new();
    for ((family, m, n), mut cells) in groups {
        cells.sort_by(|a, b| match (a.mean_time_ns, b.mean_time_ns) {
            (Some(x), Some(y)) => x.total_cmp(&y),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => a.method.cmp(&b.method),
        });
        let _ = writeln!(out, "{family} {m}×{n}");
        let _ = writeln!(
            out,
            "  {:<12} {:>12} {:>14} {:>8} {:>14}  status",
            "method", "k", "mean time ms", "std %", "final err²"
        );
        for r in cells {
            let k = r.calibrated_k.map_or("-".to_string(), |k| k.to_string());
            let (t, pct) = match (r.mean_time_ns, r.std_time_ns) {
                (Some(t), Some(s)) => (
                    format!("{:.3}", t / 1e6),
                    if t > 0.0 {
                        format!("{:.1}", 100.0 * s / t)
                    } else {
                        "-".into()
                    },
                ),
                _ => ("-".into(), "-".into()),
            };
            let e = r
                .mean_final_sq_error
                .map_or("-".to_string(), |e| format!("{e:.3e}"));
            let status = serde_json::to_value(r.status)
                .ok()
                .and_then(|v| v.as_str().map(str::to_string))
                .unwrap_or_default();
            let _ = writeln!(
                out,
                "  {:<12} {:>12} {:>14} {:>8} {:>14}  {status}",
                r.method, k, t, pct, e
            );
        }
    }
    out
}
