//! Graph serialization: edge-list, DOT and JSONL, with parsers for each so
//! every emitted graph can be read back.
//!
//! * edge-list: one `i j` arc per line, 1-based, ascending lexicographic;
//!   carries no vertex count, so parsing takes an optional explicit `n`
//!   (otherwise the largest mentioned label is used, which is exact for
//!   connected graphs).
//! * dot: a `digraph` block declaring every numeric node id plus `i -> j;`
//!   arc lines.
//! * jsonl: `{"n":N,"arcs":[[i,j],...]}`, one graph per line.

use clap::ValueEnum;
use dagchain::Dag;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    #[value(name = "edge-list")]
    EdgeList,
    Dot,
    Jsonl,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: u32,
    arcs: Vec<(u32, u32)>,
}

pub fn emit(g: &Dag, format: OutputFormat) -> String {
    match format {
        OutputFormat::EdgeList => emit_edge_list(g),
        OutputFormat::Dot => emit_dot(g),
        OutputFormat::Jsonl => emit_jsonl(g),
    }
}

/// Separator written between consecutive graphs of a multi-graph stream.
pub fn separator(format: OutputFormat) -> &'static str {
    match format {
        OutputFormat::EdgeList => "\n",
        OutputFormat::Dot | OutputFormat::Jsonl => "",
    }
}

pub fn emit_edge_list(g: &Dag) -> String {
    let mut s = String::new();
    for (i, j) in g.arcs() {
        s.push_str(&format!("{i} {j}\n"));
    }
    s
}

pub fn emit_dot(g: &Dag) -> String {
    let mut s = String::from("digraph dag {\n");
    for v in 1..=g.n() {
        s.push_str(&format!("  {v};\n"));
    }
    for (i, j) in g.arcs() {
        s.push_str(&format!("  {i} -> {j};\n"));
    }
    s.push_str("}\n");
    s
}

pub fn emit_jsonl(g: &Dag) -> String {
    let json = GraphJson { n: g.n(), arcs: g.arcs().collect() };
    let mut s = serde_json::to_string(&json).expect("graph serializes");
    s.push('\n');
    s
}

pub fn parse(text: &str, format: OutputFormat, n: Option<u32>) -> Result<Dag, String> {
    match format {
        OutputFormat::EdgeList => parse_edge_list(text, n),
        OutputFormat::Dot => parse_dot(text),
        OutputFormat::Jsonl => parse_jsonl(text),
    }
}

/// Parses `i j` lines. With `n = None` the vertex count is inferred as the
/// largest label seen (exact when the graph is connected).
pub fn parse_edge_list(text: &str, n: Option<u32>) -> Result<Dag, String> {
    let mut arcs = Vec::new();
    let mut seen_max = 0;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut f = line.split_whitespace();
        let (Some(i), Some(j), None) = (f.next(), f.next(), f.next()) else {
            return Err(format!("line {}: expected `i j`", lineno + 1));
        };
        let i: u32 = i.parse().map_err(|_| format!("line {}: bad label `{i}`", lineno + 1))?;
        let j: u32 = j.parse().map_err(|_| format!("line {}: bad label `{j}`", lineno + 1))?;
        seen_max = seen_max.max(i).max(j);
        arcs.push((i, j));
    }
    let n = n.unwrap_or(seen_max.max(2));
    Dag::from_arcs(n, arcs).map_err(|e| e.to_string())
}

/// Parses the restricted DOT dialect written by [`emit_dot`].
pub fn parse_dot(text: &str) -> Result<Dag, String> {
    const SHAPE: &str = "expected a `digraph name { ... }` block";
    let (head, rest) = text.split_once('{').ok_or(SHAPE)?;
    if head.split_whitespace().next() != Some("digraph") {
        return Err(SHAPE.into());
    }
    let (body, _) = rest.rsplit_once('}').ok_or(SHAPE)?;
    let mut n = 0u32;
    let mut arcs = Vec::new();
    for stmt in body.split(';') {
        let stmt = stmt.trim();
        if stmt.is_empty() {
            continue;
        }
        if let Some((a, b)) = stmt.split_once("->") {
            let i: u32 = a.trim().parse().map_err(|_| format!("bad arc `{stmt}`"))?;
            let j: u32 = b.trim().parse().map_err(|_| format!("bad arc `{stmt}`"))?;
            n = n.max(i).max(j);
            arcs.push((i, j));
        } else {
            let v: u32 = stmt.parse().map_err(|_| format!("bad node id `{stmt}`"))?;
            n = n.max(v);
        }
    }
    Dag::from_arcs(n.max(2), arcs).map_err(|e| e.to_string())
}

pub fn parse_jsonl(text: &str) -> Result<Dag, String> {
    let json: GraphJson = serde_json::from_str(text.trim()).map_err(|e| e.to_string())?;
    Dag::from_arcs(json.n, json.arcs).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dag(n: u32, arcs: &[(u32, u32)]) -> Dag {
        Dag::from_arcs(n, arcs.iter().copied()).unwrap()
    }

    #[test]
    fn edge_list_shape() {
        let g = dag(3, &[(2, 3), (1, 2)]);
        assert_eq!(emit_edge_list(&g), "1 2\n2 3\n");
        assert_eq!(emit_edge_list(&Dag::empty(3).unwrap()), "");
    }

    #[test]
    fn jsonl_shape() {
        assert_eq!(emit_jsonl(&Dag::empty(3).unwrap()), "{\"n\":3,\"arcs\":[]}\n");
        assert_eq!(
            emit_jsonl(&dag(3, &[(1, 3)])),
            "{\"n\":3,\"arcs\":[[1,3]]}\n"
        );
    }

    #[test]
    fn dot_shape() {
        let g = dag(2, &[(2, 1)]);
        assert_eq!(emit_dot(&g), "digraph dag {\n  1;\n  2;\n  2 -> 1;\n}\n");
    }

    #[test]
    fn round_trips() {
        let g = dag(4, &[(1, 2), (2, 4), (3, 4)]);
        for format in [OutputFormat::EdgeList, OutputFormat::Dot, OutputFormat::Jsonl] {
            let text = emit(&g, format);
            let back = parse(&text, format, Some(4)).unwrap();
            assert_eq!(back, g, "{format:?}");
        }
        // dot and jsonl carry n and round-trip isolated vertices too.
        let g = dag(5, &[(1, 2)]);
        for format in [OutputFormat::Dot, OutputFormat::Jsonl] {
            assert_eq!(parse(&emit(&g, format), format, None).unwrap(), g);
        }
    }

    #[test]
    fn edge_list_n_inference() {
        let g = parse_edge_list("1 2\n2 3\n", None).unwrap();
        assert_eq!(g.n(), 3);
        let g = parse_edge_list("1 2\n2 3\n", Some(5)).unwrap();
        assert_eq!(g.n(), 5);
        // Empty input still yields a legal two-vertex graph.
        assert_eq!(parse_edge_list("", None).unwrap(), Dag::empty(2).unwrap());
    }

    #[test]
    fn parse_errors() {
        assert!(parse_edge_list("1\n", None).is_err());
        assert!(parse_edge_list("1 2 3\n", None).is_err());
        assert!(parse_edge_list("1 2\n2 1\n", None).is_err()); // cyclic
        assert!(parse_dot("graph g { 1; }").is_err());
        assert!(parse_jsonl("{\"n\":2}").is_err());
    }
}
