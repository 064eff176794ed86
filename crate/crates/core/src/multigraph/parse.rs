use std::path::Path;

use serde::Deserialize;

use super::{GraphError, Multigraph};

#[derive(Deserialize)]
struct JsonGraph {
    vertices: Vec<String>,
    edges: Vec<JsonEdge>,
}

#[derive(Deserialize)]
struct JsonEdge {
    src: String,
    dst: String,
}

/// Parses `{"vertices":[...], "edges":[{"src":..,"dst":..}, ...]}`.
pub fn parse_json(input: &str) -> Result<Multigraph, GraphError> {
    let g: JsonGraph = serde_json::from_str(input).map_err(|e| GraphError::Parse(e.to_string()))?;
    let pairs: Vec<(String, String)> = g.edges.into_iter().map(|e| (e.src, e.dst)).collect();
    Multigraph::build(&g.vertices, &pairs)
}

/// Parses one `src dst` pair per line; `#` starts a comment.
///
/// Vertices are ordered by first appearance.
pub fn parse_text(input: &str) -> Result<Multigraph, GraphError> {
    let mut vertices: Vec<String> = Vec::new();
    let mut pairs = Vec::new();
    for (lineno, line) in input.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(GraphError::Parse(format!(
                "line {}: expected `src dst`, got {:?}",
                lineno + 1,
                line
            )));
        }
        for f in &fields {
            if !vertices.iter().any(|v| v == f) {
                vertices.push(f.to_string());
            }
        }
        pairs.push((fields[0].to_string(), fields[1].to_string()));
    }
    Multigraph::build(&vertices, &pairs)
}

/// Reads a graph file, choosing the parser by extension (`.json` or anything else as text).
pub fn read_graph(path: &Path) -> Result<Multigraph, GraphError> {
    let s = std::fs::read_to_string(path)
        .map_err(|e| GraphError::Parse(format!("{}: {}", path.display(), e)))?;
    if path.extension().is_some_and(|x| x == "json") || s.trim_start().starts_with('{') {
        parse_json(&s)
    } else {
        parse_text(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_and_text_agree() {
        let json = r#"{"vertices":["a","b","c","d"],"edges":[
            {"src":"a","dst":"b"},{"src":"a","dst":"b"},{"src":"c","dst":"d"},
            {"src":"a","dst":"b"},{"src":"c","dst":"d"}]}"#;
        let text = "# two components\na b\na b\nc d # first c-d edge\n\na b\nc d\n";
        assert_eq!(parse_json(json).unwrap(), parse_text(text).unwrap());
    }

    #[test]
    fn text_rejects_malformed_line() {
        assert!(matches!(parse_text("a b c\n"), Err(GraphError::Parse(_))));
        assert!(matches!(parse_json("{\"vertices\":[]}"), Err(GraphError::Parse(_))));
    }
}
