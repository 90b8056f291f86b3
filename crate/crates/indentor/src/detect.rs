//! Style detection and conformance checking: the built-in styles used as
//! recognizers over an existing file.

use std::collections::BTreeMap;

use crate::lexer::{tokenize, Token};
use crate::render::{first_child_cuddles, format_source, FormatError};
use crate::style::{
    builtin_style, BodyIndent, BracePlacement, CloseBracePlacement, FormatConfig, StyleSpec,
    STYLE_NAMES,
};
use crate::tree::{parse_blocks, BlockTree, HeaderKind, Node};

/// Tab stops used when measuring columns in existing files. The author's
/// editor settings are unknown, so the classic 8-column convention applies
/// regardless of the formatter's own configuration.
const MEASURE_TAB_STOP: u32 = 8;

/// Brace layout measured for one header-attached block in the original text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observation {
    pub construct: HeaderKind,
    /// Source line of the header (1-based).
    pub line: u32,
    /// Visual column of the first token on the header's line.
    pub header_col: u32,
    pub open_line: u32,
    pub open_col: u32,
    pub open_on_header_line: bool,
    /// First body node starts on the open brace's line.
    pub body_on_open_line: bool,
    /// Column of the first label child that starts its own line.
    pub first_label_col: Option<u32>,
    /// Column of the first non-label child that starts its own line.
    pub first_item_col: Option<u32>,
    /// Column of the first child of any kind on its own line.
    pub first_child_col: Option<u32>,
    pub close_col: u32,
    /// Close brace shares its line with preceding body content.
    pub close_cuddled: bool,
    /// Open and close brace on one line.
    pub one_line: bool,
    pub block_empty: bool,
    /// The tree says a brace-sharing style would put the first child on the
    /// open brace's line.
    pub cuddleable_first_child: bool,
}

/// How the open brace relates to its header, for report text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpenBraceRelation {
    SameLine,
    NextLineAtHeader,
    NextLineIndented,
}

/// How the close brace is placed, for report text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CloseBraceRelation {
    HeaderColumn,
    BraceColumn,
    BodyColumn,
    Cuddled,
    Other,
}

impl Observation {
    pub fn open_relation(&self) -> OpenBraceRelation {
        if self.open_on_header_line {
            OpenBraceRelation::SameLine
        } else if self.open_col == self.header_col {
            OpenBraceRelation::NextLineAtHeader
        } else {
            OpenBraceRelation::NextLineIndented
        }
    }

    pub fn close_relation(&self) -> CloseBraceRelation {
        if self.close_cuddled {
            CloseBraceRelation::Cuddled
        } else if self.close_col == self.header_col {
            CloseBraceRelation::HeaderColumn
        } else if !self.open_on_header_line && self.close_col == self.open_col {
            CloseBraceRelation::BraceColumn
        } else if self.first_child_col == Some(self.close_col) {
            CloseBraceRelation::BodyColumn
        } else {
            CloseBraceRelation::Other
        }
    }

    /// Indent of the first own-line body item past the measurement anchor
    /// (the own-line brace, or the header for cuddled braces).
    pub fn body_indent_delta(&self) -> Option<u32> {
        let anchor = if self.open_on_header_line {
            self.header_col
        } else {
            self.open_col
        };
        self.first_item_col.map(|c| c.saturating_sub(anchor))
    }
}

/// One mismatch: a line plus expected/found descriptions (detect mode) or
/// expected/found line text (check mode).
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Deviation {
    pub line: u32,
    pub expected: String,
    pub found: String,
}

/// The verdict for a file: the single best style, or no clear winner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Best {
    Style(&'static str),
    Ambiguous,
}

impl Best {
    pub fn as_str(&self) -> &str {
        match self {
            Best::Style(name) => name,
            Best::Ambiguous => "ambiguous",
        }
    }
}

/// Per-style match scores and deviations from the best style.
#[derive(Debug, Clone, PartialEq)]
pub struct StyleReport {
    pub scores: BTreeMap<&'static str, f64>,
    pub best: Best,
    pub observations_total: usize,
    pub deviations: Vec<Deviation>,
}

impl StyleReport {
    /// Line-oriented text form.
    pub fn render_text(&self, file: &str) -> String {
        let mut out = format!(
            "{}: best = {} ({} observation{})\n",
            file,
            self.best.as_str(),
            self.observations_total,
            if self.observations_total == 1 { "" } else { "s" }
        );
        let mut ranked: Vec<(&&str, &f64)> = self.scores.iter().collect();
        ranked.sort_by(|a, b| b.1.partial_cmp(a.1).unwrap().then(a.0.cmp(b.0)));
        for (name, score) in ranked {
            out.push_str(&format!("  {:<12} {:.2}\n", name, score));
        }
        for d in &self.deviations {
            out.push_str(&format!(
                "  line {}: expected {}; found {}\n",
                d.line, d.expected, d.found
            ));
        }
        out
    }

    /// Machine-readable form: `{"file", "scores", "best", "deviations"}`.
    pub fn to_json(&self, file: &str) -> serde_json::Value {
        let scores: serde_json::Map<String, serde_json::Value> = self
            .scores
            .iter()
            .map(|(k, v)| (k.to_string(), serde_json::json!(v)))
            .collect();
        serde_json::json!({
            "file": file,
            "scores": scores,
            "best": self.best.as_str(),
            "deviations": self.deviations,
        })
    }
}

/// Measure every header-attached block of `tree` against the original text.
pub fn observe(tree: &BlockTree, source: &str) -> Vec<Observation> {
    let lines: Vec<&str> = source.split('\n').collect();
    let mut out = Vec::new();
    observe_nodes(&tree.roots, &lines, &mut out);
    out
}

fn observe_nodes(nodes: &[Node], lines: &[&str], out: &mut Vec<Observation>) {
    for node in nodes {
        observe_node(node, lines, out, false);
    }
}

fn observe_node(node: &Node, lines: &[&str], out: &mut Vec<Observation>, cuddled_first: bool) {
    match node {
        Node::Header { kind, tokens, body, .. } => {
            if let Node::Block { .. } = body.as_ref() {
                if let Some(obs) = measure(*kind, tokens, body, lines, cuddled_first) {
                    out.push(obs);
                }
            }
            observe_node(body, lines, out, false);
        }
        Node::Block { open, children, .. } => {
            for (i, child) in children.iter().enumerate() {
                // A first child sharing the open brace's line was cuddled
                // there; its own column, not the line start, is the anchor.
                let cuddled = i == 0
                    && first_token(child).is_some_and(|t| t.line == open.line);
                observe_node(child, lines, out, cuddled);
            }
        }
        _ => {}
    }
}

fn measure(
    kind: HeaderKind,
    header: &[Token],
    body: &Node,
    lines: &[&str],
    cuddled_first: bool,
) -> Option<Observation> {
    let (open, open_comments, children, close) = match body {
        Node::Block {
            open,
            open_comments,
            children,
            close,
            ..
        } => (open, open_comments, children, close),
        _ => return None,
    };
    let head = header.first()?;
    let header_col = if cuddled_first {
        visual_col(lines, head.line, head.column)?
    } else {
        line_start_col(lines, head.line)?
    };
    let open_col = visual_col(lines, open.line, open.column)?;
    let close_col = visual_col(lines, close.line, close.column)?;
    let header_end = header.last().map_or(head.line, Token::end_line);
    let first_child_tok = children.first().and_then(first_token);
    let body_on_open_line = first_child_tok.is_some_and(|t| t.line == open.line);
    let mut first_label_col = None;
    let mut first_item_col = None;
    let mut first_child_col = None;
    for child in children {
        let Some(tok) = first_token(child) else { continue };
        if tok.line == open.line {
            continue;
        }
        let Some(start) = line_start_col(lines, tok.line) else { continue };
        let Some(col) = visual_col(lines, tok.line, tok.column) else { continue };
        if col != start {
            continue;
        }
        if first_child_col.is_none() {
            first_child_col = Some(col);
        }
        let is_label = matches!(child, Node::Label { .. });
        if is_label && first_label_col.is_none() {
            first_label_col = Some(col);
        }
        if !is_label && first_item_col.is_none() {
            first_item_col = Some(col);
        }
        if first_label_col.is_some() && first_item_col.is_some() {
            break;
        }
    }
    let close_start = line_start_col(lines, close.line)?;
    Some(Observation {
        construct: kind,
        line: head.line,
        header_col,
        open_line: open.line,
        open_col,
        open_on_header_line: open.line == header_end,
        body_on_open_line,
        first_label_col,
        first_item_col,
        first_child_col,
        close_col,
        close_cuddled: close_col != close_start,
        one_line: open.line == close.line,
        block_empty: children.is_empty(),
        cuddleable_first_child: first_child_cuddles(children, open_comments),
    })
}

fn first_token(node: &Node) -> Option<&Token> {
    match node {
        Node::Statement { tokens } | Node::Label { tokens, .. } => tokens.first(),
        Node::Comment { token } | Node::Preprocessor { token } => Some(token),
        Node::Header { tokens, body, .. } => tokens.first().or_else(|| first_token(body)),
        Node::Block { open, .. } => Some(open),
    }
}

/// Visual column (1-based, tabs at 8) of the byte column on a line.
fn visual_col(lines: &[&str], line: u32, byte_col: u32) -> Option<u32> {
    let text = lines.get(line as usize - 1)?;
    let mut col = 1u32;
    for (i, b) in text.bytes().enumerate() {
        if i + 1 >= byte_col as usize {
            break;
        }
        col = if b == b'\t' {
            (col - 1) / MEASURE_TAB_STOP * MEASURE_TAB_STOP + MEASURE_TAB_STOP + 1
        } else {
            col + 1
        };
    }
    Some(col)
}

/// Visual column of the first non-whitespace character on a line.
fn line_start_col(lines: &[&str], line: u32) -> Option<u32> {
    let text = lines.get(line as usize - 1)?;
    let mut col = 1u32;
    for b in text.bytes() {
        match b {
            b'\t' => col = (col - 1) / MEASURE_TAB_STOP * MEASURE_TAB_STOP + MEASURE_TAB_STOP + 1,
            b' ' | b'\r' => col += 1,
            _ => return Some(col),
        }
    }
    Some(col)
}

/// Does this observation match the style's layout at its default width?
pub fn consistent(obs: &Observation, style: &StyleSpec) -> bool {
    let width = style.default_indent_width;
    let placement = style.brace_for(obs.construct);
    let open_ok = match placement {
        BracePlacement::SameLine => obs.open_on_header_line,
        BracePlacement::NextLineHeaderColumn => {
            !obs.open_on_header_line && obs.open_col == obs.header_col
        }
        BracePlacement::NextLineIndented => {
            !obs.open_on_header_line
                && obs.open_col == obs.header_col + style.brace_extra_indent * width
        }
    };

    if obs.one_line {
        // A short function collapsed onto the header line, an empty block
        // whose close brace cuddles, or an own-line brace carrying both the
        // only statement and the cuddled close.
        if obs.construct == HeaderKind::FunctionDef
            && style.short_function_one_line
            && obs.open_on_header_line
        {
            return true;
        }
        if obs.block_empty {
            return open_ok && style.close_brace == CloseBracePlacement::CuddleLastStatement;
        }
        return open_ok
            && !obs.open_on_header_line
            && style.statement_on_open_brace_line
            && style.close_brace == CloseBracePlacement::CuddleLastStatement
            && obs.cuddleable_first_child
            && obs.body_on_open_line;
    }

    if !open_ok {
        return false;
    }

    let expect_body_on_open = style.statement_on_open_brace_line
        && obs.cuddleable_first_child
        && placement != BracePlacement::SameLine;
    if obs.body_on_open_line != expect_body_on_open {
        return false;
    }

    // Body indentation evidence. Anchor the brace-relative rules at the
    // open brace when it has its own line, else at the header.
    let anchor = if obs.open_on_header_line {
        obs.header_col
    } else {
        obs.open_col
    };
    let item_rule = if style.statement_on_open_brace_line {
        anchor + 2
    } else {
        match style.body_indent {
            BodyIndent::FromHeader => obs.header_col + width,
            BodyIndent::FromBrace(units) => anchor + units * width,
        }
    };
    // Labels follow per-construct conventions: case labels one unit from
    // the switch (the default scheme), access labels at the class header.
    let (expected_label, expected_item) = match obs.construct {
        HeaderKind::Switch => (obs.header_col + width, obs.header_col + 2 * width),
        HeaderKind::ClassDef => (obs.header_col, item_rule),
        _ => (item_rule, item_rule),
    };
    if let Some(col) = obs.first_label_col {
        if col != expected_label {
            return false;
        }
    }
    if let Some(col) = obs.first_item_col {
        if col != expected_item {
            return false;
        }
    }

    match style.close_brace {
        CloseBracePlacement::HeaderColumn => !obs.close_cuddled && obs.close_col == obs.header_col,
        CloseBracePlacement::BraceColumn => {
            !obs.close_cuddled && !obs.open_on_header_line && obs.close_col == obs.open_col
        }
        CloseBracePlacement::BodyColumn => {
            !obs.close_cuddled
                && obs
                    .first_child_col
                    .is_none_or(|body| obs.close_col == body)
        }
        CloseBracePlacement::CuddleLastStatement => obs.close_cuddled,
    }
}

/// Score every built-in style against the source and pick the best.
pub fn detect_style(source: &str) -> Result<StyleReport, FormatError> {
    let ts = tokenize(source, "<source>")?;
    let tree = parse_blocks(&ts)?;
    let observations = observe(&tree, source);
    Ok(report_for(&observations))
}

fn report_for(observations: &[Observation]) -> StyleReport {
    let total = observations.len();
    let mut scores = BTreeMap::new();
    let mut specs = Vec::new();
    for name in STYLE_NAMES {
        let spec = builtin_style(name).expect("builtin");
        let hits = observations.iter().filter(|o| consistent(o, &spec)).count();
        let score = if total == 0 {
            0.0
        } else {
            hits as f64 / total as f64
        };
        scores.insert(spec.name, score);
        specs.push(spec);
    }

    let mut ranked: Vec<(&'static str, f64)> = scores.iter().map(|(k, v)| (*k, *v)).collect();
    ranked.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(b.0)));
    let best = if total == 0 || (ranked.len() > 1 && ranked[0].1 == ranked[1].1) {
        Best::Ambiguous
    } else {
        Best::Style(ranked[0].0)
    };

    let deviations = match &best {
        Best::Style(name) => {
            let spec = specs.iter().find(|s| s.name == *name).expect("scored");
            observations
                .iter()
                .filter(|o| !consistent(o, spec))
                .map(|o| Deviation {
                    line: o.line,
                    expected: describe_style(spec, o.construct),
                    found: describe_observation(o),
                })
                .collect()
        }
        Best::Ambiguous => Vec::new(),
    };

    StyleReport {
        scores,
        best,
        observations_total: total,
        deviations,
    }
}

fn describe_style(style: &StyleSpec, kind: HeaderKind) -> String {
    let open = match style.brace_for(kind) {
        BracePlacement::SameLine => "open brace on the header line".to_string(),
        BracePlacement::NextLineHeaderColumn => {
            "open brace on the next line at the header column".to_string()
        }
        BracePlacement::NextLineIndented => format!(
            "open brace on the next line indented {} columns",
            style.brace_extra_indent * style.default_indent_width
        ),
    };
    let close = match style.close_brace {
        CloseBracePlacement::HeaderColumn => "close brace at the header column",
        CloseBracePlacement::BraceColumn => "close brace at the open brace column",
        CloseBracePlacement::BodyColumn => "close brace at the body column",
        CloseBracePlacement::CuddleLastStatement => "close brace cuddled to the last statement",
    };
    format!("{}, {}", open, close)
}

fn describe_observation(obs: &Observation) -> String {
    let open = match obs.open_relation() {
        OpenBraceRelation::SameLine => "open brace on the header line".to_string(),
        OpenBraceRelation::NextLineAtHeader => {
            "open brace on the next line at the header column".to_string()
        }
        OpenBraceRelation::NextLineIndented => format!(
            "open brace on the next line indented {} columns",
            obs.open_col.saturating_sub(obs.header_col)
        ),
    };
    let close = match obs.close_relation() {
        CloseBraceRelation::HeaderColumn => "close brace at the header column".to_string(),
        CloseBraceRelation::BraceColumn => "close brace at the open brace column".to_string(),
        CloseBraceRelation::BodyColumn => "close brace at the body column".to_string(),
        CloseBraceRelation::Cuddled => "close brace cuddled to the last statement".to_string(),
        CloseBraceRelation::Other => format!("close brace at column {}", obs.close_col),
    };
    format!("{}, {}", open, close)
}

/// Compare a file against one style: empty when formatting would change
/// nothing (up to line terminators), else one deviation per differing line.
pub fn check(
    source: &str,
    style: &StyleSpec,
    config: &FormatConfig,
) -> Result<Vec<Deviation>, FormatError> {
    let formatted = format_source(source, style, config)?;
    let found: Vec<&str> = source.lines().collect();
    let expected: Vec<&str> = formatted.lines().collect();
    let mut deviations = Vec::new();
    for i in 0..found.len().max(expected.len()) {
        let f = found.get(i).copied().unwrap_or("");
        let e = expected.get(i).copied().unwrap_or("");
        if f != e {
            deviations.push(Deviation {
                line: i as u32 + 1,
                expected: e.to_string(),
                found: f.to_string(),
            });
        }
    }
    Ok(deviations)
}
