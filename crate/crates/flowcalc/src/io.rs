//! Plain-text file formats.
//!
//! Every format is line oriented; blank lines and `#` comments are
//! skipped. Words are comma-joined edge labels. Parsers report the first
//! offending line; writers round-trip with the parsers.
//!
//! - graph: `vertex <id>` and `edge <id> <source> <target> <label>`
//! - matrix: one whitespace-separated integer row per line
//! - section: `radius <k>`, optional `height <rational>`, center words
//! - word code: `section <file> M <k>`, then `<block> -> <word>` rules
//!   (a block is whitespace-separated return-word labels)
//! - sliding code: `radius <k>`, then `<window> -> <symbol>` rules
//! - edge weights: `edge <id> <rational>`
//! - window function: `radius <k>`, then `<word> <rational>`

use std::collections::BTreeMap;
use std::str::FromStr;

use num::{BigInt, BigRational};

use crate::block_code::SlidingBlockCode;
use crate::graph::{DirectedGraph, EdgeId};
use crate::livsic::WindowFunction;
use crate::matrix::IntMatrix;
use crate::section::CrossSection;
use crate::shift::EdgeShift;
use crate::word::Word;

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        message: message.into(),
    })
}

/// Numbered content lines: 1-based, comments and blanks removed.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_rational(s: &str, line: usize) -> Result<BigRational, ParseError> {
    BigRational::from_str(s).or_else(|_| err(line, format!("expected a rational, got {s:?}")))
}

pub fn parse_graph(text: &str) -> Result<DirectedGraph, ParseError> {
    let mut g = DirectedGraph::new();
    for (n, line) in content_lines(text) {
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.as_slice() {
            ["vertex", id] => {
                if g.vertex_by_id(id).is_some() {
                    return err(n, format!("duplicate vertex id {id:?}"));
                }
                g.add_vertex(*id);
            }
            ["edge", id, src, tgt, label] => {
                let Some(s) = g.vertex_by_id(src) else {
                    return err(n, format!("unknown source vertex {src:?}"));
                };
                let Some(t) = g.vertex_by_id(tgt) else {
                    return err(n, format!("unknown target vertex {tgt:?}"));
                };
                if g.edges().any(|(_, e)| e.id == *id) {
                    return err(n, format!("duplicate edge id {id:?}"));
                }
                if g.edge_by_label(label).is_some() {
                    return err(n, format!("duplicate edge label {label:?}"));
                }
                g.add_edge(*id, s, t, *label);
            }
            _ => return err(n, format!("expected `vertex` or `edge` line, got {line:?}")),
        }
    }
    Ok(g)
}

pub fn parse_matrix(text: &str) -> Result<IntMatrix, ParseError> {
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    let mut first_line = 0;
    for (n, line) in content_lines(text) {
        if first_line == 0 {
            first_line = n;
        }
        let mut row = Vec::new();
        for f in line.split_whitespace() {
            match BigInt::from_str(f) {
                Ok(v) => row.push(v),
                Err(_) => return err(n, format!("expected an integer, got {f:?}")),
            }
        }
        rows.push(row);
    }
    let size = rows.len();
    if rows.iter().any(|r| r.len() != size) {
        return err(first_line, "matrix must be square");
    }
    if size == 0 {
        return err(1, "empty matrix");
    }
    Ok(IntMatrix::from_rows(&rows))
}

fn parse_word(g: &DirectedGraph, s: &str, line: usize) -> Result<Word, ParseError> {
    Word::parse(g, s).map_or_else(
        || err(line, format!("unknown word {s:?}")),
        Ok,
    )
}

pub fn parse_section(g: &DirectedGraph, text: &str) -> Result<CrossSection, ParseError> {
    let mut lines = content_lines(text);
    let Some((n, first)) = lines.next() else {
        return err(1, "expected a `radius <k>` line");
    };
    let radius: usize = match first.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["radius", k] => k
            .parse()
            .or_else(|_| err(n, format!("bad radius {k:?}")))?,
        _ => return err(n, "expected a `radius <k>` line")?,
    };
    let mut height = None;
    let mut centers = std::collections::BTreeSet::new();
    for (n, line) in lines {
        if let Some(h) = line.strip_prefix("height ") {
            if height.is_some() {
                return err(n, "duplicate height line");
            }
            height = Some(parse_rational(h.trim(), n)?);
            continue;
        }
        let w = parse_word(g, line, n)?;
        if w.len() != 2 * radius + 1 {
            return err(
                n,
                format!("center {line:?} has length {}, expected {}", w.len(), 2 * radius + 1),
            );
        }
        centers.insert(w);
    }
    let mut c = CrossSection::new(radius, centers);
    if let Some(h) = height {
        c = c.with_height(h);
    }
    Ok(c)
}

pub fn write_section(g: &DirectedGraph, c: &CrossSection) -> String {
    let mut out = format!("radius {}\n", c.radius());
    if !num::Zero::is_zero(c.height()) {
        out.push_str(&format!("height {}\n", c.height()));
    }
    for w in c.centers() {
        out.push_str(&w.text(g));
        out.push('\n');
    }
    out
}

/// A parsed word-code file; labels are resolved against a return system
/// separately, since the section lives in its own file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeFile {
    pub section_path: String,
    pub m: usize,
    pub rules: Vec<CodeRule>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeRule {
    pub line: usize,
    pub block: Vec<String>,
    pub image: String,
}

pub fn parse_code_file(text: &str) -> Result<CodeFile, ParseError> {
    let mut lines = content_lines(text);
    let Some((n, first)) = lines.next() else {
        return err(1, "expected a `section <file> M <k>` header");
    };
    let (section_path, m) = match first.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["section", path, "M", k] => (
            path.to_string(),
            k.parse()
                .or_else(|_| err(n, format!("bad block radius {k:?}")))?,
        ),
        _ => return err(n, "expected a `section <file> M <k>` header")?,
    };
    let mut rules = Vec::new();
    for (n, line) in lines {
        let Some((lhs, rhs)) = line.split_once("->") else {
            return err(n, format!("expected `<block> -> <word>`, got {line:?}"));
        };
        let block: Vec<String> = lhs.split_whitespace().map(str::to_string).collect();
        if block.len() != 2 * m + 1 {
            return err(
                n,
                format!("block has {} symbols, expected {}", block.len(), 2 * m + 1),
            );
        }
        let image = rhs.trim();
        if image.is_empty() {
            return err(n, "empty image word");
        }
        rules.push(CodeRule {
            line: n,
            block,
            image: image.to_string(),
        });
    }
    Ok(CodeFile {
        section_path,
        m,
        rules,
    })
}

/// Resolves a code file's labels: blocks against the return graph and
/// images against the target alphabet.
pub fn resolve_code_rules(
    return_graph: &DirectedGraph,
    target: &EdgeShift,
    file: &CodeFile,
) -> Result<BTreeMap<Vec<EdgeId>, Word>, ParseError> {
    let mut table = BTreeMap::new();
    for rule in &file.rules {
        let mut block = Vec::new();
        for l in &rule.block {
            match return_graph.edge_by_label(l) {
                Some(e) => block.push(e),
                None => return err(rule.line, format!("unknown return word {l:?}")),
            }
        }
        let image = parse_word(target.graph(), &rule.image, rule.line)?;
        table.insert(block, image);
    }
    Ok(table)
}

pub fn write_code_file(
    section_path: &str,
    return_graph: &DirectedGraph,
    target: &DirectedGraph,
    m: usize,
    table: &BTreeMap<Vec<EdgeId>, Word>,
) -> String {
    let mut out = format!("section {section_path} M {m}\n");
    for (block, image) in table {
        let lhs: Vec<&str> = block
            .iter()
            .map(|&e| return_graph.edge(e).label.as_str())
            .collect();
        out.push_str(&format!("{} -> {}\n", lhs.join(" "), image.text(target)));
    }
    out
}

pub fn parse_sliding_code(
    source: &EdgeShift,
    target: &EdgeShift,
    text: &str,
) -> Result<SlidingBlockCode, ParseError> {
    let mut lines = content_lines(text);
    let Some((n, first)) = lines.next() else {
        return err(1, "expected a `radius <k>` line");
    };
    let radius: usize = match first.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["radius", k] => k
            .parse()
            .or_else(|_| err(n, format!("bad radius {k:?}")))?,
        _ => return err(n, "expected a `radius <k>` line")?,
    };
    let mut table = BTreeMap::new();
    let mut last = n;
    for (n, line) in lines {
        last = n;
        let Some((lhs, rhs)) = line.split_once("->") else {
            return err(n, format!("expected `<window> -> <symbol>`, got {line:?}"));
        };
        let window = parse_word(source.graph(), lhs.trim(), n)?;
        if window.len() != 2 * radius + 1 {
            return err(n, format!("window {lhs:?} does not match the radius"));
        }
        let symbol = rhs.trim();
        let Some(e) = target.graph().edge_by_label(symbol) else {
            return err(n, format!("unknown target symbol {symbol:?}"));
        };
        table.insert(window, e);
    }
    SlidingBlockCode::new(source.clone(), target.clone(), radius, table)
        .map_err(|e| ParseError {
            line: last,
            message: e.to_string(),
        })
}

/// Edge weights, one `edge <id> <rational>` line per edge; total.
pub fn parse_weights(g: &DirectedGraph, text: &str) -> Result<Vec<BigRational>, ParseError> {
    let mut weights: Vec<Option<BigRational>> = vec![None; g.edge_count()];
    for (n, line) in content_lines(text) {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let ["edge", id, value] = fields.as_slice() else {
            return err(n, format!("expected `edge <id> <rational>`, got {line:?}"));
        };
        let Some((e, _)) = g.edges().find(|(_, d)| d.id == *id) else {
            return err(n, format!("unknown edge id {id:?}"));
        };
        if weights[e.0].is_some() {
            return err(n, format!("duplicate weight for edge {id:?}"));
        }
        weights[e.0] = Some(parse_rational(value, n)?);
    }
    for (e, data) in g.edges() {
        if weights[e.0].is_none() {
            return err(0, format!("no weight for edge {:?}", data.id));
        }
    }
    Ok(weights.into_iter().map(Option::unwrap).collect())
}

pub fn write_weights(g: &DirectedGraph, weights: &[BigRational]) -> String {
    g.edges()
        .map(|(e, data)| format!("edge {} {}\n", data.id, weights[e.0]))
        .collect()
}

pub fn parse_window_function(
    g: &DirectedGraph,
    text: &str,
) -> Result<WindowFunction, ParseError> {
    let mut lines = content_lines(text);
    let Some((n, first)) = lines.next() else {
        return err(1, "expected a `radius <k>` line");
    };
    let radius: usize = match first.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["radius", k] => k
            .parse()
            .or_else(|_| err(n, format!("bad radius {k:?}")))?,
        _ => return err(n, "expected a `radius <k>` line")?,
    };
    let mut table = BTreeMap::new();
    for (n, line) in lines {
        let Some((word, value)) = line.rsplit_once(char::is_whitespace) else {
            return err(n, format!("expected `<word> <rational>`, got {line:?}"));
        };
        let w = parse_word(g, word.trim(), n)?;
        if w.len() != 2 * radius + 1 {
            return err(n, format!("word {word:?} does not match the radius"));
        }
        table.insert(w, parse_rational(value.trim(), n)?);
    }
    Ok(WindowFunction::new(radius, table))
}

pub fn write_window_function(g: &DirectedGraph, f: &WindowFunction) -> String {
    let mut out = format!("radius {}\n", f.radius());
    for (w, v) in f.table() {
        out.push_str(&format!("{} {}\n", w.text(g), v));
    }
    out
}

/// A closed word as a periodic orbit, for CLI arguments.
pub fn parse_orbit(g: &DirectedGraph, s: &str) -> Result<crate::word::PeriodicOrbit, ParseError> {
    let w = parse_word(g, s, 0)?;
    if w.is_empty() || !w.is_closed_path(g) {
        return err(0, format!("word {s:?} is not a closed path"));
    }
    Ok(crate::word::PeriodicOrbit::from_cycle(g, w.0))
}
