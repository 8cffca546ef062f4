//! Experiment drivers. Each writes tidy rows that depend only on the manifest.

use std::path::{Path, PathBuf};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::io::{read_edgelist, FormatHint};
use super::stats::{mean, std_dev};
use crate::attachment::{default_fractions, density_sweep_with, GrowthMode, Mechanism, SweepTrace};
use crate::complexity::{complexity_report, nhc_global};
use crate::error::{Error, Result};
use crate::generators::{gen_config_with_rng, gen_er_with_rng, stream_rng, Family, ModelSpec};
use crate::graph::Graph;
use crate::theory::{nhc_global_approx_with, TheoryOptions};

/// One analysed network, in the column semantics of a network summary table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkRecord {
    pub name: String,
    pub n: usize,
    pub m: usize,
    pub d: f64,
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(rename = "R_hat")]
    pub r_hat: f64,
    pub components: usize,
    pub source_path: String,
}

impl NetworkRecord {
    pub const CSV_HEADER: &'static str = "name,n,m,d,R,R_hat,components,source_path";

    pub fn from_graph(name: &str, g: &Graph, source_path: &str) -> Self {
        let report = complexity_report(g);
        NetworkRecord {
            name: name.to_string(),
            n: report.node_count,
            m: report.edge_count,
            d: report.density,
            r: report.r,
            r_hat: report.r_hat,
            components: report.components,
            source_path: source_path.to_string(),
        }
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            csv_field(&self.name),
            self.n,
            self.m,
            self.d,
            self.r,
            self.r_hat,
            self.components,
            csv_field(&self.source_path)
        )
    }
}

pub(crate) fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn analyze_path(path: impl AsRef<Path>, hint: FormatHint) -> Result<NetworkRecord> {
    let path = path.as_ref();
    let loaded = read_edgelist(path, hint)?;
    let name = path.file_stem().map_or_else(|| "network".to_string(), |s| s.to_string_lossy().into_owned());
    Ok(NetworkRecord::from_graph(&name, &loaded.graph, &path.display().to_string()))
}

/// Analyses every regular, non-hidden file in `dir`, in file-name order.
pub fn analyze_directory(dir: impl AsRef<Path>, hint: FormatHint) -> Result<Vec<NetworkRecord>> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir.as_ref())?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .filter(|p| !p.file_name().is_some_and(|f| f.to_string_lossy().starts_with('.')))
        .collect();
    paths.sort();
    paths.par_iter().map(|p| analyze_path(p, hint)).collect()
}

/// Side-by-side rankings by `R` and by `R̂`, each descending with ties by name.
pub fn ranking_csv(records: &[NetworkRecord]) -> String {
    let order = |key: fn(&NetworkRecord) -> f64| {
        let mut v: Vec<&NetworkRecord> = records.iter().collect();
        v.sort_by(|a, b| key(b).total_cmp(&key(a)).then_with(|| a.name.cmp(&b.name)));
        v
    };
    let by_r = order(|r| r.r);
    let by_r_hat = order(|r| r.r_hat);
    let mut out = String::from("rank,R,network_by_R,R_hat,network_by_R_hat\n");
    for (i, (a, b)) in by_r.iter().zip(&by_r_hat).enumerate() {
        out.push_str(&format!("{},{},{},{},{}\n", i + 1, a.r, csv_field(&a.name), b.r_hat, csv_field(&b.name)));
    }
    out
}

fn default_families() -> Vec<Family> {
    Family::ALL.to_vec()
}

fn default_dims() -> usize {
    3
}

fn default_sigma_h() -> f64 {
    0.2
}

/// Model sweep with `n` and `d` drawn uniformly per realisation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Fig2Config {
    pub realisations: usize,
    pub n_range: (usize, usize),
    /// Upper limit applied on top of `n_range`; `None` for full scale.
    pub n_cap: Option<usize>,
    pub d_range: (f64, f64),
    pub families: Vec<Family>,
    pub dims: usize,
    pub mu: f64,
    pub sigma_h: f64,
}

impl Default for Fig2Config {
    fn default() -> Self {
        Fig2Config {
            realisations: 100,
            n_range: (50, 10_000),
            n_cap: Some(5_000),
            d_range: (0.0, 1.0),
            families: default_families(),
            dims: default_dims(),
            mu: 0.0,
            sigma_h: default_sigma_h(),
        }
    }
}

/// Theory against simulation on a grid of `(n, p)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Fig3Config {
    pub points: Vec<(usize, f64)>,
    pub seeds: usize,
    pub theory: TheoryOptions,
}

impl Default for Fig3Config {
    fn default() -> Self {
        let mut points = Vec::new();
        for &n in &[500usize, 1000, 2000, 5000] {
            for &p in &[0.002, 0.005, 0.01] {
                points.push((n, p));
            }
        }
        Fig3Config { points, seeds: 20, theory: TheoryOptions::default() }
    }
}

/// Heterogeneity sweep over RHGGs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Fig4Config {
    pub realisations: usize,
    pub n: usize,
    pub sigma_range: (f64, f64),
    pub d_range: (f64, f64),
    pub dims: usize,
    pub mu: f64,
}

impl Default for Fig4Config {
    fn default() -> Self {
        Fig4Config { realisations: 1000, n: 1000, sigma_range: (0.0, 1.0), d_range: (0.0, 1.0), dims: 3, mu: 0.0 }
    }
}

impl Fig4Config {
    pub fn desk() -> Self {
        Fig4Config { realisations: 200, ..Default::default() }
    }
}

/// Where attachment-sweep base graphs come from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepBases {
    /// `count` RHGGs with the given parameters.
    Generated { count: usize, n: usize, density: f64, sigma_h: f64, dims: usize },
    /// Edge-list files.
    Files(Vec<PathBuf>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Fig5Config {
    pub bases: SweepBases,
    pub mechanisms: Vec<Mechanism>,
    pub fractions: Vec<f64>,
    pub mode: GrowthMode,
}

impl Default for Fig5Config {
    fn default() -> Self {
        Fig5Config {
            bases: SweepBases::Generated { count: 5, n: 1000, density: 0.01, sigma_h: 0.2, dims: 3 },
            mechanisms: Mechanism::ALL.to_vec(),
            fractions: default_fractions(),
            mode: GrowthMode::Relative,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeConfig {
    pub inputs: Vec<PathBuf>,
    #[serde(default)]
    pub format: FormatHint,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "experiment", rename_all = "lowercase")]
pub enum Experiment {
    Fig2(Fig2Config),
    Fig3(Fig3Config),
    Fig4(Fig4Config),
    Fig5(Fig5Config),
    Analyze(AnalyzeConfig),
    Generate(ModelSpec),
}

impl Experiment {
    pub fn id(&self) -> &'static str {
        match self {
            Experiment::Fig2(_) => "fig2",
            Experiment::Fig3(_) => "fig3",
            Experiment::Fig4(_) => "fig4",
            Experiment::Fig5(_) => "fig5",
            Experiment::Analyze(_) => "analyze",
            Experiment::Generate(_) => "generate",
        }
    }
}

/// Everything an experiment's output depends on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(flatten)]
    pub experiment: Experiment,
}

impl RunManifest {
    pub fn new(experiment: Experiment, seed: u64) -> Self {
        RunManifest { seed, output_dir: None, experiment }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serialises")
    }

    /// SHA-256 of the compact JSON form, hex encoded.
    pub fn hash(&self) -> String {
        let compact = serde_json::to_string(self).expect("manifest serialises");
        Sha256::digest(compact.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}

// Stream layout: parameter draws use stream `r`, graphs use
// `(family_slot + 1) << 32 | r` so every family has its own sequence.
fn graph_stream(slot: u64, realisation: usize) -> u64 {
    ((slot + 1) << 32) | realisation as u64
}

fn family_slot(f: Family) -> u64 {
    match f {
        Family::Er => 0,
        Family::Rgg => 1,
        Family::Rhgg => 2,
        Family::Rhg => 3,
    }
}

fn uniform_in<R: Rng>(rng: &mut R, (lo, hi): (f64, f64)) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

/// Generates one model realisation on its own stream.
///
/// RHG realisations rewire the RHGG of the same realisation index, so each
/// RHG row is the configuration-model counterpart of an RHGG row.
fn realise(family: Family, n: usize, d: f64, cfg: &Fig2Config, seed: u64, r: usize) -> Result<Graph> {
    let spec = |f: Family| ModelSpec {
        family: f,
        dims: cfg.dims,
        mu: cfg.mu,
        sigma_h: cfg.sigma_h,
        ..ModelSpec::new(f, n, d, seed)
    };
    match family {
        Family::Er => gen_er_with_rng(n, d, &mut stream_rng(seed, graph_stream(0, r))),
        Family::Rgg | Family::Rhgg => spec(family).generate_stream(graph_stream(family_slot(family), r)),
        Family::Rhg => {
            let source = spec(Family::Rhgg).generate_stream(graph_stream(family_slot(Family::Rhgg), r))?;
            gen_config_with_rng(&source.degrees(), &mut stream_rng(seed, graph_stream(3, r)))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Fig2Row {
    pub family: Family,
    pub realisation: usize,
    pub n: usize,
    pub d: f64,
    pub measure: &'static str,
    pub value: f64,
}

pub const FIG2_MEASURES: [&str; 3] = ["nhc", "nhc_sqrtk", "nhc_sqrtk_sqrtm"];

/// Draws `(n, d)` for realisation `r`; shared by every family.
pub fn fig2_parameters(cfg: &Fig2Config, seed: u64, r: usize) -> (usize, f64) {
    let mut rng = stream_rng(seed, r as u64);
    let hi = cfg.n_cap.map_or(cfg.n_range.1, |c| cfg.n_range.1.min(c));
    let n = rng.random_range(cfg.n_range.0..=hi.max(cfg.n_range.0));
    // Top-m families need d > 0.
    let d = uniform_in(&mut rng, cfg.d_range).max(f64::MIN_POSITIVE);
    (n, d)
}

pub fn run_fig2(cfg: &Fig2Config, seed: u64) -> Result<Vec<Fig2Row>> {
    if cfg.n_range.0 < 3 || cfg.n_range.0 > cfg.n_range.1 {
        return Err(Error::InvalidParameter(format!("bad n range {:?}", cfg.n_range)));
    }
    let jobs: Vec<(usize, Family)> =
        (0..cfg.realisations).flat_map(|r| cfg.families.iter().map(move |&f| (r, f))).collect();
    let per_job: Vec<Vec<Fig2Row>> = jobs
        .par_iter()
        .map(|&(r, family)| {
            let (n, d) = fig2_parameters(cfg, seed, r);
            let g = realise(family, n, d, cfg, seed, r)?;
            let report = complexity_report(&g);
            let values = [report.r_hat, report.r_hat_sqrtk, report.r_hat_sqrtk_sqrtm];
            Ok(FIG2_MEASURES
                .iter()
                .zip(values)
                .map(|(&measure, value)| Fig2Row { family, realisation: r, n, d: g.density(), measure, value })
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(per_job.into_iter().flatten().collect())
}

pub fn fig2_csv(rows: &[Fig2Row]) -> String {
    let mut out = String::from("family,realisation,n,d,measure,value\n");
    for r in rows {
        out.push_str(&format!("{},{},{},{},{},{}\n", r.family, r.realisation, r.n, r.d, r.measure, r.value));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fig3Row {
    pub n: usize,
    pub p: f64,
    pub approx: f64,
    pub simulated_mean: f64,
    pub simulated_sd: f64,
    pub relative_error: f64,
    pub seeds: usize,
}

/// Mean and sample sd of `R̂` over `seeds` G(n, p) draws on streams `0..seeds`.
pub fn simulate_er(n: usize, p: f64, seeds: usize, seed: u64) -> Result<(f64, f64)> {
    let values: Vec<f64> = (0..seeds)
        .into_par_iter()
        .map(|s| gen_er_with_rng(n, p, &mut stream_rng(seed, s as u64)).map(|g| nhc_global(&g)))
        .collect::<Result<_>>()?;
    Ok((mean(&values), std_dev(&values)))
}

pub fn run_fig3(cfg: &Fig3Config, seed: u64) -> Result<Vec<Fig3Row>> {
    cfg.points
        .iter()
        .enumerate()
        .map(|(idx, &(n, p))| {
            let approx = nhc_global_approx_with(n, p, cfg.theory)?.global;
            // Each grid point gets its own seed family.
            let (sim_mean, sim_sd) = simulate_er(n, p, cfg.seeds, seed.wrapping_add(idx as u64))?;
            Ok(Fig3Row {
                n,
                p,
                approx,
                simulated_mean: sim_mean,
                simulated_sd: sim_sd,
                relative_error: (approx - sim_mean).abs() / sim_mean,
                seeds: cfg.seeds,
            })
        })
        .collect()
}

pub fn fig3_csv(rows: &[Fig3Row]) -> String {
    let mut out = String::from("n,p,approx,simulated_mean,simulated_sd,relative_error,seeds\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.n, r.p, r.approx, r.simulated_mean, r.simulated_sd, r.relative_error, r.seeds
        ));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fig4Row {
    pub realisation: usize,
    pub sigma_h: f64,
    pub d: f64,
    pub r_hat: f64,
    /// `(k, R̂_k)` over the degree support.
    pub profile: Vec<(usize, f64)>,
}

pub fn run_fig4(cfg: &Fig4Config, seed: u64) -> Result<Vec<Fig4Row>> {
    (0..cfg.realisations)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream_rng(seed, r as u64);
            let sigma_h = uniform_in(&mut rng, cfg.sigma_range);
            let d = uniform_in(&mut rng, cfg.d_range).max(f64::MIN_POSITIVE);
            let spec = ModelSpec { mu: cfg.mu, dims: cfg.dims, ..ModelSpec::new(Family::Rhgg, cfg.n, d, seed) }
                .with_sigma_h(sigma_h);
            let g = spec.generate_stream(graph_stream(family_slot(Family::Rhgg), r))?;
            let report = complexity_report(&g);
            Ok(Fig4Row {
                realisation: r,
                sigma_h,
                d: g.density(),
                r_hat: report.r_hat,
                profile: report.per_degree.iter().map(|(&k, t)| (k, t.r_hat)).collect(),
            })
        })
        .collect()
}

pub fn fig4_csv(rows: &[Fig4Row]) -> String {
    let mut out = String::from("realisation,sigma_h,d,r_hat\n");
    for r in rows {
        out.push_str(&format!("{},{},{},{}\n", r.realisation, r.sigma_h, r.d, r.r_hat));
    }
    out
}

pub fn fig4_profile_csv(rows: &[Fig4Row]) -> String {
    let mut out = String::from("realisation,k,r_hat_k\n");
    for r in rows {
        for (k, v) in &r.profile {
            out.push_str(&format!("{},{},{}\n", r.realisation, k, v));
        }
    }
    out
}

/// Mean of `value` within each half-open bin `[edges[i], edges[i+1])`; the
/// last bin is closed. Empty bins give `None`.
pub fn binned_means(points: &[(f64, f64)], edges: &[f64]) -> Vec<Option<f64>> {
    (0..edges.len().saturating_sub(1))
        .map(|i| {
            let last = i + 2 == edges.len();
            let inside: Vec<f64> = points
                .iter()
                .filter(|(x, _)| *x >= edges[i] && (*x < edges[i + 1] || (last && *x <= edges[i + 1])))
                .map(|&(_, v)| v)
                .collect();
            (!inside.is_empty()).then(|| mean(&inside))
        })
        .collect()
}

/// Average `R̂` per degree over all realisations.
pub fn mean_profile(rows: &[Fig4Row]) -> Vec<(usize, f64, usize)> {
    let mut acc: std::collections::BTreeMap<usize, (f64, usize)> = Default::default();
    for r in rows {
        for &(k, v) in &r.profile {
            let e = acc.entry(k).or_insert((0.0, 0));
            e.0 += v;
            e.1 += 1;
        }
    }
    acc.into_iter().map(|(k, (s, c))| (k, s / c as f64, c)).collect()
}

/// Base graphs for an attachment sweep, with names.
pub fn sweep_bases(bases: &SweepBases, seed: u64) -> Result<Vec<(String, Graph)>> {
    match bases {
        SweepBases::Generated { count, n, density, sigma_h, dims } => (0..*count)
            .into_par_iter()
            .map(|i| {
                let spec = ModelSpec::new(Family::Rhgg, *n, *density, seed).with_sigma_h(*sigma_h).with_dims(*dims);
                Ok((format!("rhgg_{i}"), spec.generate_stream(graph_stream(family_slot(Family::Rhgg), i))?))
            })
            .collect(),
        SweepBases::Files(paths) => paths
            .iter()
            .map(|p| {
                let name = p.file_stem().map_or_else(|| p.display().to_string(), |s| s.to_string_lossy().into_owned());
                Ok((name, read_edgelist(p, FormatHint::Auto)?.graph))
            })
            .collect(),
    }
}

/// Per-network traces for every mechanism, base-major then mechanism order.
pub fn run_fig5(cfg: &Fig5Config, seed: u64) -> Result<Vec<SweepTrace>> {
    let bases = sweep_bases(&cfg.bases, seed)?;
    let jobs: Vec<(usize, usize)> =
        (0..bases.len()).flat_map(|b| (0..cfg.mechanisms.len()).map(move |m| (b, m))).collect();
    jobs.par_iter()
        .map(|&(b, m)| {
            let (name, g) = &bases[b];
            // Every (base, mechanism) sweep runs on its own stream.
            let sweep_seed = seed ^ (((b as u64) << 8 | m as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            density_sweep_with(g, cfg.mechanisms[m], &cfg.fractions, sweep_seed, cfg.mode, name)
        })
        .collect()
}

/// Mean `R̂` at each fraction across bases, one trace per mechanism.
pub fn mean_traces(traces: &[SweepTrace]) -> Vec<SweepTrace> {
    let mut mechanisms: Vec<Mechanism> = traces.iter().map(|t| t.mechanism).collect();
    mechanisms.sort();
    mechanisms.dedup();
    mechanisms
        .into_iter()
        .map(|mech| {
            let group: Vec<&SweepTrace> = traces.iter().filter(|t| t.mechanism == mech).collect();
            let steps = (0..group[0].steps.len())
                .map(|i| {
                    let r: Vec<f64> = group.iter().map(|t| t.steps[i].r_hat).collect();
                    let m: Vec<f64> = group.iter().map(|t| t.steps[i].edge_count as f64).collect();
                    crate::attachment::SweepStep {
                        fraction: group[0].steps[i].fraction,
                        edge_count: mean(&m).round() as usize,
                        r_hat: mean(&r),
                    }
                })
                .collect();
            SweepTrace { mechanism: mech, base: "mean".into(), steps }
        })
        .collect()
}

pub fn fig5_csv(traces: &[SweepTrace]) -> String {
    let mut out = format!("{}\n", SweepTrace::CSV_HEADER);
    for t in traces.iter().chain(&mean_traces(traces)) {
        for row in t.csv_rows() {
            out.push_str(&row);
            out.push('\n');
        }
    }
    out
}

/// Runs a manifest and writes its CSV outputs plus a `manifest.json` sidecar
/// carrying the manifest hash. Returns the written paths.
pub fn run_manifest(manifest: &RunManifest, out_dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir)?;
    let seed = manifest.seed;
    let mut files: Vec<(String, String)> = Vec::new();
    match &manifest.experiment {
        Experiment::Fig2(cfg) => files.push(("fig2.csv".into(), fig2_csv(&run_fig2(cfg, seed)?))),
        Experiment::Fig3(cfg) => files.push(("fig3.csv".into(), fig3_csv(&run_fig3(cfg, seed)?))),
        Experiment::Fig4(cfg) => {
            let rows = run_fig4(cfg, seed)?;
            files.push(("fig4.csv".into(), fig4_csv(&rows)));
            files.push(("fig4_profile.csv".into(), fig4_profile_csv(&rows)));
        }
        Experiment::Fig5(cfg) => files.push(("fig5.csv".into(), fig5_csv(&run_fig5(cfg, seed)?))),
        Experiment::Analyze(cfg) => {
            let records: Vec<NetworkRecord> =
                cfg.inputs.iter().map(|p| analyze_path(p, cfg.format)).collect::<Result<_>>()?;
            let mut csv = format!("{}\n", NetworkRecord::CSV_HEADER);
            for r in &records {
                csv.push_str(&r.csv_row());
                csv.push('\n');
            }
            files.push(("analyze.csv".into(), csv));
        }
        Experiment::Generate(spec) => {
            let g = ModelSpec { seed, ..spec.clone() }.generate()?;
            files.push(("graph.txt".into(), super::io::edgelist_string(&g)));
        }
    }
    let sidecar = serde_json::json!({
        "experiment": manifest.experiment.id(),
        "manifest_sha256": manifest.hash(),
        "manifest": manifest,
        "outputs": files.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>(),
    });
    files.push(("manifest.json".into(), serde_json::to_string_pretty(&sidecar)? + "\n"));
    let mut written = Vec::new();
    for (name, body) in files {
        let path = out_dir.join(name);
        std::fs::write(&path, body)?;
        written.push(path);
    }
    Ok(written)
}
