//! Text input: edge-list files and generator spec strings.

use super::{
    make_complete, make_complete_bipartite, make_cycle, make_path, make_random, make_star, Graph,
    GraphError, MAX_VERTICES,
};

fn parse_err(line: usize, message: impl Into<String>) -> GraphError {
    GraphError::Parse { line, message: message.into() }
}

fn parse_usize(tok: &str, line: usize, what: &str) -> Result<usize, GraphError> {
    tok.parse::<usize>().map_err(|_| parse_err(line, format!("invalid {what} {tok:?}")))
}

/// Parses the edge-list format: a header `n m`, then `m` lines `u v` with
/// 0-based vertices. Blank lines and `#` comments are skipped. Duplicate
/// edges are accepted and collapse to one.
pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing header line"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 2 {
        return Err(parse_err(hline, "header must be \"n m\""));
    }
    let n = parse_usize(toks[0], hline, "vertex count")?;
    let m = parse_usize(toks[1], hline, "edge count")?;
    if n > MAX_VERTICES {
        return Err(GraphError::TooManyVertices(n));
    }

    let mut g = Graph::empty(n)?;
    let mut seen = 0;
    for (ln, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(parse_err(ln, "edge line must be \"u v\""));
        }
        let u = parse_usize(toks[0], ln, "vertex")?;
        let v = parse_usize(toks[1], ln, "vertex")?;
        g.add_edge(u, v).map_err(|e| parse_err(ln, e.to_string()))?;
        seen += 1;
    }
    if seen != m {
        return Err(parse_err(hline, format!("header declares {m} edges, found {seen}")));
    }
    Ok(g)
}

/// Parses a generator spec such as `path:7`, `cycle:12`, `star:5`,
/// `kbip:4x4`, `complete:5` or `gnp:10:0.4:seed42`.
pub fn parse_spec(spec: &str) -> Result<Graph, GraphError> {
    let spec = spec.trim();
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |s: &str| parse_usize(s, 1, "size");
    let count = |s: &str| -> Result<usize, GraphError> {
        let n = num(s)?;
        if n > MAX_VERTICES {
            Err(GraphError::TooManyVertices(n))
        } else {
            Ok(n)
        }
    };
    match parts.as_slice() {
        ["path", n] => make_path(count(n)?),
        ["cycle", n] => make_cycle(count(n)?),
        ["complete", n] => make_complete(count(n)?),
        ["star", n] => {
            let n = num(n)?;
            if n + 1 > MAX_VERTICES {
                return Err(GraphError::TooManyVertices(n + 1));
            }
            make_star(n)
        }
        ["kbip", sides] => {
            let (a, b) = sides
                .split_once('x')
                .ok_or_else(|| parse_err(1, format!("bipartite sides {sides:?} must be AxB")))?;
            let (a, b) = (num(a)?, num(b)?);
            if a + b > MAX_VERTICES {
                return Err(GraphError::TooManyVertices(a + b));
            }
            make_complete_bipartite(a, b)
        }
        ["gnp", n, p, seed] => {
            let n = count(n)?;
            let p: f64 =
                p.parse().map_err(|_| parse_err(1, format!("invalid probability {p:?}")))?;
            let seed = seed.strip_prefix("seed").unwrap_or(seed);
            let seed: u64 =
                seed.parse().map_err(|_| parse_err(1, format!("invalid seed {seed:?}")))?;
            make_random(n, p, seed)
        }
        _ => Err(parse_err(1, format!("unrecognised graph spec {spec:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_with_comments() {
        let text = "# a path\n4 3\n0 1\n\n1 2 # middle\n2 3\n";
        let g = parse_edge_list(text).unwrap();
        assert_eq!(g.edges(), vec![(0, 1), (1, 2), (2, 3)]);
    }

    #[test]
    fn empty_graph_file() {
        let g = parse_edge_list("0 0\n").unwrap();
        assert_eq!(g.n(), 0);
    }

    #[test]
    fn edge_list_errors() {
        assert!(matches!(parse_edge_list(""), Err(GraphError::Parse { .. })));
        assert!(matches!(parse_edge_list("3 1\n0 3\n"), Err(GraphError::Parse { line: 2, .. })));
        assert!(matches!(parse_edge_list("3 2\n0 1\n"), Err(GraphError::Parse { .. })));
        assert!(matches!(parse_edge_list("3 1\n1 1\n"), Err(GraphError::Parse { .. })));
        assert!(matches!(parse_edge_list("3 x\n"), Err(GraphError::Parse { line: 1, .. })));
        assert_eq!(parse_edge_list("65 0\n"), Err(GraphError::TooManyVertices(65)));
    }

    #[test]
    fn specs() {
        assert_eq!(parse_spec("path:7").unwrap().edge_count(), 6);
        assert_eq!(parse_spec("cycle:12").unwrap().edge_count(), 12);
        assert_eq!(parse_spec("star:5").unwrap().n(), 6);
        assert_eq!(parse_spec("kbip:4x4").unwrap().edge_count(), 16);
        let g = parse_spec("gnp:10:0.4:seed42").unwrap();
        assert_eq!(g.edges(), make_random(10, 0.4, 42).unwrap().edges());
        assert_eq!(g.label(), Some("gnp:10:0.4:seed42"));
        assert_eq!(parse_spec("path:65"), Err(GraphError::TooManyVertices(65)));
        assert_eq!(parse_spec("cycle:2"), Err(GraphError::CycleTooSmall(2)));
        assert!(matches!(parse_spec("wheel:5"), Err(GraphError::Parse { .. })));
    }
}
