//! Minimal reader for undirected GML networks.
//!
//! Understands `node [ id .. label .. <attr> .. ]` and
//! `edge [ source .. target .. ]` records inside a top-level `graph [ ]`.
//! Other keys are kept as node attributes or ignored.

use std::collections::{BTreeMap, HashMap};

use crate::community::Community;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Open,
    Close,
    Word(String),
    Text(String),
}

fn tokenize(input: &str) -> Result<Vec<(usize, Token)>> {
    let mut tokens = Vec::new();
    let mut chars = input.chars().peekable();
    let mut line = 1;
    while let Some(&c) = chars.peek() {
        match c {
            '\n' => {
                line += 1;
                chars.next();
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    chars.next();
                }
            }
            '[' => {
                tokens.push((line, Token::Open));
                chars.next();
            }
            ']' => {
                tokens.push((line, Token::Close));
                chars.next();
            }
            '"' => {
                let start = line;
                chars.next();
                let mut text = String::new();
                loop {
                    match chars.next() {
                        Some('"') => break,
                        Some(c) => {
                            if c == '\n' {
                                line += 1;
                            }
                            text.push(c);
                        }
                        None => return Err(Error::parse(start, "unterminated string")),
                    }
                }
                tokens.push((start, Token::Text(text)));
            }
            _ => {
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || c == '[' || c == ']' || c == '"' {
                        break;
                    }
                    word.push(c);
                    chars.next();
                }
                tokens.push((line, Token::Word(word)));
            }
        }
    }
    Ok(tokens)
}

#[derive(Debug, Clone)]
enum Value {
    Scalar(String),
    List(Vec<(String, Value)>),
}

fn parse_list(
    tokens: &[(usize, Token)],
    pos: &mut usize,
    nested: bool,
) -> Result<Vec<(String, Value)>> {
    let mut items = Vec::new();
    loop {
        let Some((line, token)) = tokens.get(*pos) else {
            if nested {
                let line = tokens.last().map_or(1, |t| t.0);
                return Err(Error::parse(line, "missing `]`"));
            }
            return Ok(items);
        };
        *pos += 1;
        let key = match token {
            Token::Close if nested => return Ok(items),
            Token::Word(w) => w.clone(),
            _ => return Err(Error::parse(*line, "expected a key")),
        };
        let value = match tokens.get(*pos) {
            Some((_, Token::Open)) => {
                *pos += 1;
                Value::List(parse_list(tokens, pos, true)?)
            }
            Some((_, Token::Word(w) | Token::Text(w))) => {
                *pos += 1;
                Value::Scalar(w.clone())
            }
            _ => return Err(Error::parse(*line, format!("key `{key}` has no value"))),
        };
        items.push((key, value));
    }
}

/// A GML network with the scalar attributes of each node.
#[derive(Debug, Clone)]
pub struct GmlNetwork {
    pub graph: Graph,
    /// Per node index: attribute name to value, `id` and `label` included.
    pub attributes: Vec<BTreeMap<String, String>>,
}

impl GmlNetwork {
    /// Groups nodes by the value of `attribute`. Community ids are the
    /// attribute values, ordered numerically when they are all integers.
    pub fn communities_by(&self, attribute: &str) -> Result<Vec<Community>> {
        let mut groups: BTreeMap<String, Vec<NodeId>> = BTreeMap::new();
        for (v, attrs) in self.attributes.iter().enumerate() {
            let value = attrs.get(attribute).ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "node `{}` has no `{attribute}` attribute",
                    self.graph.label(v)
                ))
            })?;
            groups.entry(value.clone()).or_default().push(v);
        }
        let mut keys: Vec<String> = groups.keys().cloned().collect();
        if keys.iter().all(|k| k.parse::<i64>().is_ok()) {
            keys.sort_by_key(|k| k.parse::<i64>().unwrap());
        }
        keys.into_iter()
            .map(|k| {
                let members = groups.remove(&k).unwrap();
                Community::new(k, members, &self.graph)
            })
            .collect()
    }
}

/// Parses GML text. Whitespace inside labels becomes `_` so that labels
/// survive the edge-list format; nodes without a label use their id.
pub fn parse_gml(input: &str) -> Result<GmlNetwork> {
    let tokens = tokenize(input)?;
    let mut pos = 0;
    let top = parse_list(&tokens, &mut pos, false)?;
    let graph_items = top
        .into_iter()
        .find_map(|(k, v)| match (k.as_str(), v) {
            ("graph", Value::List(items)) => Some(items),
            _ => None,
        })
        .ok_or_else(|| Error::parse(1, "no `graph [ ... ]` block"))?;

    let mut labels = Vec::new();
    let mut attributes = Vec::new();
    let mut by_id: HashMap<String, NodeId> = HashMap::new();
    let mut raw_edges = Vec::new();
    for (key, value) in graph_items {
        let Value::List(fields) = value else { continue };
        let scalars: BTreeMap<String, String> = fields
            .into_iter()
            .filter_map(|(k, v)| match v {
                Value::Scalar(s) => Some((k, s)),
                Value::List(_) => None,
            })
            .collect();
        match key.as_str() {
            "node" => {
                let id = scalars
                    .get("id")
                    .cloned()
                    .ok_or_else(|| Error::InvalidParameter("GML node without id".into()))?;
                let label = scalars.get("label").unwrap_or(&id);
                let label: String = label
                    .chars()
                    .map(|c| if c.is_whitespace() { '_' } else { c })
                    .collect();
                if by_id.insert(id.clone(), labels.len()).is_some() {
                    return Err(Error::InvalidParameter(format!(
                        "duplicate GML node id {id}"
                    )));
                }
                labels.push(label);
                attributes.push(scalars);
            }
            "edge" => {
                let end = |name: &str| {
                    scalars
                        .get(name)
                        .cloned()
                        .ok_or_else(|| Error::InvalidParameter(format!("GML edge without {name}")))
                };
                raw_edges.push((end("source")?, end("target")?));
            }
            _ => {}
        }
    }
    if labels.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let resolve = |id: &String| {
        by_id
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(format!("GML node id {id}")))
    };
    let edges = raw_edges
        .iter()
        .map(|(s, t)| Ok((resolve(s)?, resolve(t)?)))
        .collect::<Result<Vec<_>>>()?;
    let graph = Graph::with_labels(&labels, edges)?;
    Ok(GmlNetwork { graph, attributes })
}
