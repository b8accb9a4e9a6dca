use std::fs::{self, File};
use std::io::BufReader;
use std::path::{Path, PathBuf};

use commchar_core::distribution::summarize;
use commchar_core::keywords::{prediction_curve, MetadataTable};
use commchar_core::metrics::triangle_split_analysis;
use commchar_core::slopes::Estimator;
use commchar_core::{
    aggregate_stats, build_keyword_list, clustering_coefficient, community_stats,
    detect_communities, eslope, greedy_eds, greedy_ids, islope, load_communities, load_metadata,
    predict_keywords, profile_community, write_communities, Community, CommunityStats, Criterion,
    DirectedPolicy, DomSetResult, Graph, Mode, SlopeResult,
};
use log::{info, warn};
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{OutputFormat, RunConfig, Stage};
use crate::error::CliError;

pub const TRIANGLE_THRESHOLDS: [f64; 2] = [0.6, 0.8];
pub const KEYWORD_LENGTHS: [usize; 10] = [5, 10, 15, 20, 25, 30, 35, 40, 45, 50];

#[derive(Debug, Clone, Serialize)]
pub struct WrittenFile {
    pub name: String,
    pub bytes: usize,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    stage: Stage,
    seed: u64,
    config: &'a RunConfig,
    files: &'a [WrittenFile],
}

/// Collects output files so the manifest can list them with their hashes.
struct Outputs {
    dir: PathBuf,
    format: OutputFormat,
    written: Vec<WrittenFile>,
}

impl Outputs {
    fn new(dir: &Path, format: OutputFormat) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(CliError::writing(dir))?;
        Ok(Outputs {
            dir: dir.to_owned(),
            format,
            written: Vec::new(),
        })
    }

    fn bytes(&mut self, name: &str, bytes: Vec<u8>) -> Result<(), CliError> {
        let path = self.dir.join(name);
        fs::write(&path, &bytes).map_err(CliError::writing(&path))?;
        let sha256 = Sha256::digest(&bytes)
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect();
        self.written.push(WrittenFile {
            name: name.to_owned(),
            bytes: bytes.len(),
            sha256,
        });
        Ok(())
    }

    fn table<T: Serialize>(&mut self, stem: &str, rows: &[T]) -> Result<(), CliError> {
        let name = format!("{stem}.{}", self.format.extension());
        let bytes = match self.format {
            OutputFormat::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                for row in rows {
                    w.serialize(row)
                        .map_err(|e| CliError::Invariant(format!("{name}: {e}")))?;
                }
                w.into_inner()
                    .map_err(|e| CliError::Invariant(format!("{name}: {e}")))?
            }
            OutputFormat::Json => {
                let mut v = serde_json::to_vec_pretty(rows)
                    .map_err(|e| CliError::Invariant(format!("{name}: {e}")))?;
                v.push(b'\n');
                v
            }
        };
        self.bytes(&name, bytes)
    }

    fn json_lines<T: Serialize>(&mut self, name: &str, items: &[T]) -> Result<(), CliError> {
        let mut bytes = Vec::new();
        for item in items {
            serde_json::to_writer(&mut bytes, item)
                .map_err(|e| CliError::Invariant(format!("{name}: {e}")))?;
            bytes.push(b'\n');
        }
        self.bytes(name, bytes)
    }

    fn manifest(mut self, stage: Stage, config: &RunConfig) -> Result<Vec<WrittenFile>, CliError> {
        let manifest = Manifest {
            tool: "commchar",
            version: env!("CARGO_PKG_VERSION"),
            stage,
            seed: config.estimator.seed,
            config,
            files: &self.written,
        };
        let mut bytes = serde_json::to_vec_pretty(&manifest)
            .map_err(|e| CliError::Invariant(format!("manifest: {e}")))?;
        bytes.push(b'\n');
        self.bytes("manifest.json", bytes)?;
        Ok(self.written)
    }
}

#[derive(Serialize)]
struct CommunityMetaRow<'a> {
    id: &'a str,
    size: usize,
    conductance: f64,
    connected: bool,
    seed: &'a str,
}

#[derive(Serialize)]
struct DomSetRow<'a> {
    id: &'a str,
    mode: Mode,
    criterion: String,
    size: usize,
    ratio: Option<f64>,
    members: String,
}

#[derive(Serialize)]
struct SlopeRow<'a> {
    id: &'a str,
    kind: Mode,
    closed: bool,
    subset_size: Option<usize>,
    observed: Option<f64>,
    expected: Option<f64>,
    slope: Option<f64>,
    method: Option<&'static str>,
    subsets: Option<u64>,
    samples: Option<usize>,
    std_error: Option<f64>,
}

#[derive(Serialize)]
struct TriangleSplitRow {
    threshold: f64,
    above_count: usize,
    above_mean_triangles: f64,
    at_or_below_count: usize,
    at_or_below_mean_triangles: f64,
}

#[derive(Serialize)]
struct NetworkRow {
    nodes: usize,
    edges: usize,
    components: usize,
    triangles: u64,
    connected_triples: u64,
    ncc: f64,
}

#[derive(Serialize)]
struct DistributionRow<'a> {
    variable: &'a str,
    count: usize,
    mean: f64,
    std_dev: f64,
    skewness: Option<f64>,
    excess_kurtosis: Option<f64>,
    ks_stat: Option<f64>,
    degenerate: bool,
}

#[derive(Serialize)]
struct DistributionPointRow {
    kind: &'static str,
    x: f64,
    width: Option<f64>,
    count: Option<usize>,
    fraction: Option<f64>,
}

#[derive(Serialize)]
struct KeywordListRow<'a> {
    id: &'a str,
    rank: usize,
    keyword: &'a str,
    community_count: usize,
    ids_count: usize,
}

#[derive(Serialize)]
struct KeywordReportRow<'a> {
    id: &'a str,
    prefix_len: usize,
    candidates: usize,
    skipped: usize,
    missing_metadata: usize,
    predicted_papers: usize,
}

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::reading(path)(e.into()))
}

pub fn load_graph(path: &Path) -> Result<Graph, CliError> {
    let (graph, report) = Graph::load_edge_list(open(path)?, DirectedPolicy::Symmetrize)
        .map_err(CliError::reading(path))?;
    info!(
        "{}: {} nodes, {} edges ({} self-loops dropped, {} duplicates collapsed)",
        path.display(),
        graph.node_count(),
        graph.edge_count(),
        report.self_loops_dropped,
        report.duplicates_collapsed
    );
    Ok(graph)
}

fn load_community_file(path: &Path, graph: &Graph) -> Result<Vec<Community>, CliError> {
    let communities = load_communities(open(path)?, graph).map_err(CliError::reading(path))?;
    info!("{}: {} communities", path.display(), communities.len());
    Ok(communities)
}

fn labels(graph: &Graph, nodes: &[usize]) -> String {
    nodes
        .iter()
        .map(|&v| graph.label(v))
        .collect::<Vec<_>>()
        .join(";")
}

fn domset_row<'a>(graph: &Graph, id: &'a str, r: &DomSetResult) -> DomSetRow<'a> {
    DomSetRow {
        id,
        mode: r.mode,
        criterion: r.criterion.to_string(),
        size: r.size(),
        ratio: r.achieved_ratio,
        members: labels(graph, r.set.nodes()),
    }
}

fn slope_row<'a>(id: &'a str, kind: Mode, s: Option<&SlopeResult>) -> SlopeRow<'a> {
    let Some(s) = s else {
        return SlopeRow {
            id,
            kind,
            closed: true,
            subset_size: None,
            observed: None,
            expected: None,
            slope: None,
            method: None,
            subsets: None,
            samples: None,
            std_error: None,
        };
    };
    let (method, subsets, samples) = match s.estimator {
        Estimator::Exact { subsets } => ("exact", Some(subsets), None),
        Estimator::MonteCarlo { samples, .. } => ("monte_carlo", None, Some(samples)),
    };
    SlopeRow {
        id,
        kind,
        closed: false,
        subset_size: Some(s.subset_size),
        observed: Some(s.observed_ratio),
        expected: Some(s.expected_ratio),
        slope: Some(s.slope),
        method: Some(method),
        subsets,
        samples,
        std_error: Some(s.estimator.std_error()),
    }
}

fn write_detected(
    out: &mut Outputs,
    graph: &Graph,
    config: &RunConfig,
) -> Result<Vec<Community>, CliError> {
    let detected = detect_communities(graph, &config.detect)?;
    info!("detected {} communities", detected.len());
    let communities: Vec<Community> = detected.iter().map(|d| d.community.clone()).collect();
    let mut text = Vec::new();
    write_communities(&mut text, graph, &communities)
        .map_err(|e| CliError::Invariant(format!("communities.txt: {e}")))?;
    out.bytes("communities.txt", text)?;
    let meta: Vec<CommunityMetaRow> = detected
        .iter()
        .map(|d| CommunityMetaRow {
            id: d.community.id(),
            size: d.community.len(),
            conductance: d.conductance,
            connected: d.connected,
            seed: graph.label(d.seed),
        })
        .collect();
    out.table("communities_meta", &meta)?;
    Ok(communities)
}

fn write_network(out: &mut Outputs, graph: &Graph) -> Result<f64, CliError> {
    let t = graph.count_triangles();
    let ncc = clustering_coefficient(graph);
    out.table(
        "network",
        &[NetworkRow {
            nodes: graph.node_count(),
            edges: graph.edge_count(),
            components: graph.component_count(),
            triangles: t.triangles,
            connected_triples: t.connected_triples,
            ncc,
        }],
    )?;
    Ok(ncc)
}

fn write_stats(out: &mut Outputs, stats: &[CommunityStats]) -> Result<(), CliError> {
    out.table("community_stats", stats)?;
    let split = TRIANGLE_THRESHOLDS
        .iter()
        .map(|&t| {
            let s = triangle_split_analysis(stats, t)?;
            Ok(TriangleSplitRow {
                threshold: t,
                above_count: s.above.count,
                above_mean_triangles: s.above.mean_triangles,
                at_or_below_count: s.at_or_below.count,
                at_or_below_mean_triangles: s.at_or_below.mean_triangles,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    out.table("triangle_split", &split)
}

fn write_distributions(
    out: &mut Outputs,
    variables: &[(&str, Vec<f64>)],
    bins: usize,
) -> Result<(), CliError> {
    let mut summaries = Vec::new();
    for (name, values) in variables {
        if values.len() < 2 {
            warn!("{name}: {} value(s), distribution skipped", values.len());
            continue;
        }
        let s = summarize(name, values, bins)?;
        let mut points: Vec<DistributionPointRow> = s
            .histogram
            .iter()
            .map(|b| DistributionPointRow {
                kind: "bin",
                x: b.lower,
                width: Some(b.width),
                count: Some(b.count),
                fraction: None,
            })
            .collect();
        points.extend(s.cumulative.iter().map(|c| DistributionPointRow {
            kind: "cdf",
            x: c.value,
            width: None,
            count: None,
            fraction: Some(c.fraction),
        }));
        out.table(&format!("dist_{name}"), &points)?;
        summaries.push(DistributionRow {
            variable: name,
            count: s.count,
            mean: s.mean,
            std_dev: s.std_dev,
            skewness: s.skewness,
            excess_kurtosis: s.excess_kurtosis,
            ks_stat: s.ks_stat,
            degenerate: s.is_degenerate(),
        });
    }
    out.table("distributions_summary", &summaries)
}

fn write_keywords(
    out: &mut Outputs,
    graph: &Graph,
    communities: &[Community],
    metadata_path: &Path,
    p: f64,
) -> Result<(), CliError> {
    let metadata: MetadataTable =
        load_metadata(open(metadata_path)?, graph).map_err(CliError::reading(metadata_path))?;
    let criterion = Criterion::Ratio(p);
    let lists = communities
        .par_iter()
        .map(|c| build_keyword_list(graph, c, &metadata, criterion))
        .collect::<Result<Vec<_>, _>>()?;
    let list_rows: Vec<KeywordListRow> = communities
        .iter()
        .zip(&lists)
        .flat_map(|(c, list)| {
            list.iter().enumerate().map(move |(i, e)| KeywordListRow {
                id: c.id(),
                rank: i + 1,
                keyword: &e.keyword,
                community_count: e.community_count,
                ids_count: e.ids_count,
            })
        })
        .collect();
    out.table("keyword_lists", &list_rows)?;

    let longest = *KEYWORD_LENGTHS.last().unwrap();
    let reports = communities
        .par_iter()
        .zip(&lists)
        .map(|(c, list)| predict_keywords(c, &metadata, list, longest))
        .collect::<Result<Vec<_>, _>>()?;
    let report_rows: Vec<KeywordReportRow> = reports
        .iter()
        .map(|r| KeywordReportRow {
            id: &r.community,
            prefix_len: r.prefix_len,
            candidates: r.candidates,
            skipped: r.skipped,
            missing_metadata: r.missing_metadata,
            predicted_papers: r.predicted_papers(),
        })
        .collect();
    out.table("keyword_reports", &report_rows)?;
    let papers: Vec<_> = reports.iter().flat_map(|r| &r.papers).collect();
    out.json_lines("predictions.jsonl", &papers)?;

    let curve = prediction_curve(graph, communities, &metadata, criterion, &KEYWORD_LENGTHS)?;
    out.table("keyword_curve", &curve)
}

fn report(
    out: &mut Outputs,
    graph: &Graph,
    communities: &[Community],
    config: &RunConfig,
) -> Result<(), CliError> {
    let profile_cfg = config.profile();
    let profiles = communities
        .par_iter()
        .map(|c| profile_community(graph, c, &profile_cfg))
        .collect::<Result<Vec<_>, _>>()?;

    let domsets: Vec<DomSetRow> = profiles
        .iter()
        .flat_map(|p| {
            [&p.ids_k, &p.eds_k, &p.ids_p, &p.eds_p].map(|r| domset_row(graph, p.id(), r))
        })
        .collect();
    out.table("domsets", &domsets)?;
    let slopes: Vec<SlopeRow> = profiles
        .iter()
        .flat_map(|p| {
            [
                slope_row(p.id(), Mode::Internal, Some(&p.islope)),
                slope_row(p.id(), Mode::External, p.eslope.as_ref()),
            ]
        })
        .collect();
    out.table("slopes", &slopes)?;
    let stats: Vec<CommunityStats> = profiles.iter().map(|p| p.stats.clone()).collect();
    write_stats(out, &stats)?;
    let ncc = write_network(out, graph)?;
    let summary = aggregate_stats(&profiles, ncc)?;
    out.table("summary", &[summary])?;

    let variables = [
        ("islope", profiles.iter().map(|p| p.islope.slope).collect()),
        (
            "eslope",
            profiles
                .iter()
                .filter_map(|p| p.eslope.map(|s| s.slope))
                .collect(),
        ),
        (
            "size",
            profiles.iter().map(|p| p.stats.size as f64).collect(),
        ),
        ("ccc", profiles.iter().map(|p| p.stats.ccc).collect()),
    ];
    write_distributions(out, &variables, config.bins)?;

    match &config.metadata {
        Some(path) => write_keywords(out, graph, communities, path, config.p),
        None => {
            info!("no --metadata given, keyword stage skipped");
            Ok(())
        }
    }
}

fn run_stage(stage: Stage, config: &RunConfig) -> Result<Vec<WrittenFile>, CliError> {
    let graph = load_graph(&config.graph)?;
    let mut out = Outputs::new(&config.out, config.format)?;
    let communities = match (&config.communities, stage) {
        (Some(path), s) if s != Stage::Detect => load_community_file(path, &graph)?,
        _ => write_detected(&mut out, &graph, config)?,
    };
    if stage != Stage::Detect && communities.is_empty() {
        return Err(CliError::Computation(commchar_core::Error::NoCommunities));
    }
    match stage {
        Stage::Detect => {}
        Stage::Domsets => {
            let (k, p) = (Criterion::Size(config.k), Criterion::Ratio(config.p));
            let results = communities
                .par_iter()
                .map(|c| {
                    Ok([
                        greedy_ids(&graph, c, k)?,
                        greedy_eds(&graph, c, k)?,
                        greedy_ids(&graph, c, p)?,
                        greedy_eds(&graph, c, p)?,
                    ])
                })
                .collect::<Result<Vec<_>, commchar_core::Error>>()?;
            let rows: Vec<DomSetRow> = communities
                .iter()
                .zip(&results)
                .flat_map(|(c, rs)| rs.iter().map(|r| domset_row(&graph, c.id(), r)))
                .collect();
            out.table("domsets", &rows)?;
        }
        Stage::Slopes => {
            let p = Criterion::Ratio(config.p);
            let results = communities
                .par_iter()
                .map(|c| {
                    Ok((
                        islope(&graph, c, p, &config.estimator)?,
                        eslope(&graph, c, p, &config.estimator)?,
                    ))
                })
                .collect::<Result<Vec<_>, commchar_core::Error>>()?;
            let rows: Vec<SlopeRow> = communities
                .iter()
                .zip(&results)
                .flat_map(|(c, (i, e))| {
                    [
                        slope_row(c.id(), Mode::Internal, Some(i)),
                        slope_row(c.id(), Mode::External, e.as_ref()),
                    ]
                })
                .collect();
            out.table("slopes", &rows)?;
        }
        Stage::Metrics => {
            let stats: Vec<CommunityStats> = communities
                .par_iter()
                .map(|c| community_stats(&graph, c))
                .collect();
            write_stats(&mut out, &stats)?;
            write_network(&mut out, &graph)?;
        }
        Stage::Keywords => {
            let path = config.metadata.as_deref().expect("validated");
            write_keywords(&mut out, &graph, &communities, path, config.p)?;
        }
        Stage::Report | Stage::All => report(&mut out, &graph, &communities, config)?,
    }
    out.manifest(stage, config)
}

/// Validates `config`, then runs `stage` on a pool of `config.workers`
/// threads. Files are written in a fixed order with community rows in input
/// order, so equal configurations give byte-identical outputs.
pub fn run(stage: Stage, config: &RunConfig) -> Result<Vec<WrittenFile>, CliError> {
    config.validate(stage)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| CliError::Invariant(format!("thread pool: {e}")))?;
    pool.install(|| run_stage(stage, config))
}

/// Converts a GML network into `graph.txt` and, when `attribute` is given,
/// `communities.txt` grouped by that node attribute. Isolated nodes cannot
/// be expressed in an edge list and are left out of both files.
pub fn import_gml(
    gml: &Path,
    attribute: Option<&str>,
    out_dir: &Path,
) -> Result<Vec<WrittenFile>, CliError> {
    let text = fs::read_to_string(gml).map_err(|e| CliError::reading(gml)(e.into()))?;
    let net = commchar_core::gml::parse_gml(&text).map_err(CliError::reading(gml))?;
    let graph = &net.graph;
    let isolated = (0..graph.node_count())
        .filter(|&v| graph.degree(v) == 0)
        .count();
    if isolated > 0 {
        warn!("{isolated} isolated node(s) dropped");
    }
    let mut out = Outputs::new(out_dir, OutputFormat::Csv)?;
    let mut edges = Vec::new();
    graph
        .write_edge_list(&mut edges)
        .map_err(|e| CliError::Invariant(format!("graph.txt: {e}")))?;
    out.bytes("graph.txt", edges)?;
    if let Some(attribute) = attribute {
        let communities = net
            .communities_by(attribute)
            .map_err(CliError::reading(gml))?
            .into_iter()
            .filter_map(|c| {
                let kept: Vec<usize> = c
                    .members()
                    .iter()
                    .copied()
                    .filter(|&v| graph.degree(v) > 0)
                    .collect();
                (!kept.is_empty()).then(|| Community::new(c.id(), kept, graph))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut text = Vec::new();
        write_communities(&mut text, graph, &communities)
            .map_err(|e| CliError::Invariant(format!("communities.txt: {e}")))?;
        out.bytes("communities.txt", text)?;
    }
    Ok(out.written)
}
