//! Keyword prediction from internal dominating sets.
//!
//! Keywords listed by the members of a community's internal dominating set
//! form the candidate list, ranked by how many community members list each
//! one. A member without listed keywords gets every candidate that occurs in
//! its title or abstract.
//!
//! Metadata files hold one tab-separated record per line:
//! `label<TAB>title<TAB>abstract<TAB>kw1;kw2;...`. The keyword field may be
//! empty or missing.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::io::BufRead;

use serde::Serialize;

use crate::community::Community;
use crate::domsets::{greedy_ids, Criterion};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NodeMetadata {
    pub label: String,
    pub title: String,
    #[serde(rename = "abstract")]
    pub abstract_text: String,
    /// Normalized: lowercase, trimmed, deduplicated, in listed order.
    pub keywords: Vec<String>,
}

impl NodeMetadata {
    pub fn new(label: &str, title: &str, abstract_text: &str, keywords: &[&str]) -> Self {
        let mut seen = HashSet::new();
        let keywords = keywords
            .iter()
            .map(|k| normalize_keyword(k))
            .filter(|k| !k.is_empty() && seen.insert(k.clone()))
            .collect();
        NodeMetadata {
            label: label.to_owned(),
            title: title.to_owned(),
            abstract_text: abstract_text.to_owned(),
            keywords,
        }
    }
}

/// Lowercases and collapses whitespace.
pub fn normalize_keyword(raw: &str) -> String {
    raw.split_whitespace()
        .map(str::to_lowercase)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Lowercase alphanumeric runs; everything else separates tokens.
fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

fn contains_phrase(haystack: &[String], phrase: &[String]) -> bool {
    !phrase.is_empty() && haystack.windows(phrase.len()).any(|w| w == phrase)
}

/// Metadata keyed by node index.
#[derive(Debug, Clone, Default)]
pub struct MetadataTable {
    records: HashMap<NodeId, NodeMetadata>,
}

impl MetadataTable {
    pub fn insert(&mut self, graph: &Graph, record: NodeMetadata) -> Result<()> {
        let node = graph
            .index_of(&record.label)
            .ok_or_else(|| Error::UnknownLabel(record.label.clone()))?;
        self.records.insert(node, record);
        Ok(())
    }

    pub fn get(&self, node: NodeId) -> Option<&NodeMetadata> {
        self.records.get(&node)
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

pub fn load_metadata<R: BufRead>(reader: R, graph: &Graph) -> Result<MetadataTable> {
    let mut table = MetadataTable::default();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if !(3..=4).contains(&fields.len()) {
            return Err(Error::parse(
                i + 1,
                format!(
                    "expected 3 or 4 tab-separated fields, found {}",
                    fields.len()
                ),
            ));
        }
        let label = fields[0].trim();
        let keywords: Vec<&str> = fields.get(3).map_or(Vec::new(), |k| k.split(';').collect());
        let record = NodeMetadata::new(label, fields[1], fields[2], &keywords);
        let node = graph
            .index_of(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_owned()))?;
        if table.records.contains_key(&node) {
            return Err(Error::parse(
                i + 1,
                format!("duplicate record for `{label}`"),
            ));
        }
        table.records.insert(node, record);
    }
    Ok(table)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KeywordEntry {
    pub keyword: String,
    /// Community members listing the keyword; this is the ranking key.
    pub community_count: usize,
    /// Dominating-set members listing the keyword.
    pub ids_count: usize,
}

/// Candidate keywords of a community: those listed by members of its
/// greedy internal dominating set, most popular in the community first,
/// ties in lexicographic order.
pub fn build_keyword_list(
    graph: &Graph,
    community: &Community,
    metadata: &MetadataTable,
    criterion: Criterion,
) -> Result<Vec<KeywordEntry>> {
    let ids = greedy_ids(graph, community, criterion)?;
    let mut ids_count: HashMap<&str, usize> = HashMap::new();
    for &v in ids.set.nodes() {
        for k in metadata.get(v).map_or(&[][..], |m| &m.keywords[..]) {
            *ids_count.entry(k.as_str()).or_default() += 1;
        }
    }
    let mut community_count: HashMap<&str, usize> = HashMap::new();
    for &v in community.members() {
        for k in metadata.get(v).map_or(&[][..], |m| &m.keywords[..]) {
            *community_count.entry(k.as_str()).or_default() += 1;
        }
    }
    let mut list: Vec<KeywordEntry> = ids_count
        .into_iter()
        .map(|(k, n)| KeywordEntry {
            keyword: k.to_owned(),
            community_count: community_count[k],
            ids_count: n,
        })
        .collect();
    list.sort_by(|a, b| {
        b.community_count
            .cmp(&a.community_count)
            .then_with(|| a.keyword.cmp(&b.keyword))
    });
    Ok(list)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceField {
    Title,
    Abstract,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PredictedKeyword {
    pub keyword: String,
    /// Title wins when the keyword occurs in both.
    pub field: SourceField,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PaperPrediction {
    pub community: String,
    pub label: String,
    #[serde(skip)]
    pub node: NodeId,
    /// In keyword-list order.
    pub predicted: Vec<PredictedKeyword>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PredictionReport {
    pub community: String,
    pub prefix_len: usize,
    /// Papers with at least one predicted keyword, in node order.
    pub papers: Vec<PaperPrediction>,
    /// Members with metadata but no listed keywords.
    pub candidates: usize,
    /// Candidates with neither title nor abstract.
    pub skipped: usize,
    /// Members without any metadata record.
    pub missing_metadata: usize,
}

impl PredictionReport {
    pub fn predicted_papers(&self) -> usize {
        self.papers.len()
    }
}

/// Confirms the first `prefix_len` keywords of `list` against the title and
/// abstract of every community member that lists no keywords of its own.
pub fn predict_keywords(
    community: &Community,
    metadata: &MetadataTable,
    list: &[KeywordEntry],
    prefix_len: usize,
) -> Result<PredictionReport> {
    if prefix_len == 0 {
        return Err(Error::InvalidParameter(
            "keyword prefix length must be at least 1".into(),
        ));
    }
    let phrases: Vec<(&str, Vec<String>)> = list
        .iter()
        .take(prefix_len)
        .map(|e| (e.keyword.as_str(), tokenize(&e.keyword)))
        .collect();
    let mut report = PredictionReport {
        community: community.id().to_owned(),
        prefix_len,
        papers: Vec::new(),
        candidates: 0,
        skipped: 0,
        missing_metadata: 0,
    };
    for &v in community.members() {
        let Some(meta) = metadata.get(v) else {
            report.missing_metadata += 1;
            continue;
        };
        if !meta.keywords.is_empty() {
            continue;
        }
        report.candidates += 1;
        if meta.title.trim().is_empty() && meta.abstract_text.trim().is_empty() {
            report.skipped += 1;
            continue;
        }
        let title = tokenize(&meta.title);
        let abstract_tokens = tokenize(&meta.abstract_text);
        let predicted: Vec<PredictedKeyword> = phrases
            .iter()
            .filter_map(|(kw, phrase)| {
                let field = if contains_phrase(&title, phrase) {
                    SourceField::Title
                } else if contains_phrase(&abstract_tokens, phrase) {
                    SourceField::Abstract
                } else {
                    return None;
                };
                Some(PredictedKeyword {
                    keyword: (*kw).to_owned(),
                    field,
                })
            })
            .collect();
        if !predicted.is_empty() {
            report.papers.push(PaperPrediction {
                community: community.id().to_owned(),
                label: meta.label.clone(),
                node: v,
                predicted,
            });
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CurvePoint {
    pub keyword_number: usize,
    pub predicted_papers: usize,
}

/// Distinct papers, network-wide, with at least one confirmed keyword for
/// each keyword-list length. `lengths` must be strictly ascending.
pub fn prediction_curve(
    graph: &Graph,
    communities: &[Community],
    metadata: &MetadataTable,
    criterion: Criterion,
    lengths: &[usize],
) -> Result<Vec<CurvePoint>> {
    if lengths.first() == Some(&0) || lengths.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "keyword lengths must be positive and strictly ascending".into(),
        ));
    }
    let lists = communities
        .iter()
        .map(|c| build_keyword_list(graph, c, metadata, criterion))
        .collect::<Result<Vec<_>>>()?;
    lengths
        .iter()
        .map(|&len| {
            let mut papers = BTreeSet::new();
            for (c, list) in communities.iter().zip(&lists) {
                let report = predict_keywords(c, metadata, list, len)?;
                papers.extend(report.papers.iter().map(|p| p.node));
            }
            Ok(CurvePoint {
                keyword_number: len,
                predicted_papers: papers.len(),
            })
        })
        .collect()
}
