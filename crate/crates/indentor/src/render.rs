//! Layout engine: turns a block tree plus a style and config into text.
//!
//! Rendering never adds or removes significant tokens, with one exception:
//! a loop body consisting only of `;` may gain a `/* null body */` comment.
//! Everything else is whitespace.

use crate::lexer::{tokenize, LexError, Token, TokenKind};
use crate::style::{
    BodyIndent, BracePlacement, CloseBracePlacement, FormatConfig, SimpleBodyPolicy, StyleSpec,
    SwitchScheme,
};
use crate::tree::{parse_blocks, BlockTree, HeaderKind, Node, ParseError};

/// Lexer or parser failure surfaced by [`format_source`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error(transparent)]
    Lex(#[from] LexError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl FormatError {
    pub fn position(&self) -> (u32, u32) {
        match self {
            FormatError::Lex(e) => e.position(),
            FormatError::Parse(e) => e.position(),
        }
    }
}

/// Tokenize, parse, and re-render a source text in one step.
pub fn format_source(
    source: &str,
    style: &StyleSpec,
    config: &FormatConfig,
) -> Result<String, FormatError> {
    let ts = tokenize(source, "<source>")?;
    let tree = parse_blocks(&ts)?;
    Ok(render(&tree, style, config))
}

/// Render a tree. The output ends in exactly one line terminator, or is
/// empty for an empty tree.
pub fn render(tree: &BlockTree, style: &StyleSpec, config: &FormatConfig) -> String {
    let mut em = Emitter {
        style,
        cfg: config,
        lines: Vec::new(),
    };
    render_seq(&mut em, &tree.roots, 0, 0, 0, true, true);
    em.finish()
}

/// Single-space respacing of a token run: no space before `;` `,` `)`, none
/// after `(`, and none between a name and its `(` unless the style says so.
pub fn respace(tokens: &[Token], style: &StyleSpec) -> String {
    let mut out = String::new();
    let mut prev: Option<&Token> = None;
    for tok in tokens {
        if let Some(p) = prev {
            if needs_space(p, tok, style) {
                out.push(' ');
            }
        }
        out.push_str(&tok.text);
        prev = Some(tok);
    }
    out
}

fn needs_space(a: &Token, b: &Token, style: &StyleSpec) -> bool {
    if a.kind == TokenKind::OpenParen {
        return false;
    }
    match b.kind {
        TokenKind::Semicolon | TokenKind::Comma | TokenKind::CloseParen => false,
        TokenKind::OpenParen if a.kind == TokenKind::Identifier => style.space_before_call_paren,
        _ => true,
    }
}

/// True when a renderer would cuddle this block's first child onto its
/// opening brace line (the layout used by brace-sharing styles). Comments
/// riding on the brace suppress it, so the child's visual column always
/// equals its logical indent. Shared with the detector so expectation and
/// behavior cannot drift apart.
pub(crate) fn first_child_cuddles(children: &[Node], open_comments: &[Token]) -> bool {
    open_comments.is_empty()
        && matches!(
            children.first(),
            Some(Node::Statement { .. }) | Some(Node::Header { .. })
        )
}

struct OutLine {
    level: usize,
    indent: u32,
    text: String,
    /// Verbatim continuation of a multi-line token; emitted without indent.
    raw: bool,
    /// More text may be appended (false after a line comment or directive).
    can_extend: bool,
}

struct Emitter<'a> {
    style: &'a StyleSpec,
    cfg: &'a FormatConfig,
    lines: Vec<OutLine>,
}

impl Emitter<'_> {
    fn open_line(&mut self, indent: u32, level: usize) {
        self.lines.push(OutLine {
            level,
            indent,
            text: String::new(),
            raw: false,
            can_extend: true,
        });
    }

    fn blank_line(&mut self) {
        self.lines.push(OutLine {
            level: 0,
            indent: 0,
            text: String::new(),
            raw: false,
            can_extend: false,
        });
    }

    /// Append to the current line; embedded newlines (inside block comments
    /// or continued directives) become verbatim continuation lines.
    fn append(&mut self, s: &str) {
        let mut parts = s.split('\n');
        if let (Some(first), Some(line)) = (parts.next(), self.lines.last_mut()) {
            line.text.push_str(first);
        }
        for part in parts {
            self.lines.push(OutLine {
                level: self.lines.last().map_or(0, |l| l.level),
                indent: 0,
                text: part.to_string(),
                raw: true,
                can_extend: true,
            });
        }
    }

    fn mark_unextendable(&mut self) {
        if let Some(line) = self.lines.last_mut() {
            line.can_extend = false;
        }
    }

    fn last_can_extend(&self) -> bool {
        self.lines.last().is_some_and(|l| l.can_extend)
    }

    fn line_width(&self) -> u32 {
        self.lines
            .last()
            .map_or(0, |l| l.indent + l.text.chars().count() as u32)
    }

    fn finish(self) -> String {
        let mut out = String::new();
        for line in &self.lines {
            let blank = line.text.is_empty() && line.indent == 0 && !line.raw;
            if self.cfg.annotate_levels && !blank {
                out.push_str(&format!("[{}] ", line.level));
            }
            if !line.raw {
                out.push_str(&indent_text(line.indent, self.cfg));
            }
            out.push_str(&line.text);
            out.push('\n');
        }
        out
    }
}

fn indent_text(cols: u32, cfg: &FormatConfig) -> String {
    if cfg.use_tabs {
        let tabs = cols / cfg.indent_width;
        let spaces = cols % cfg.indent_width;
        "\t".repeat(tabs as usize) + &" ".repeat(spaces as usize)
    } else {
        " ".repeat(cols as usize)
    }
}

/// Render a sibling sequence. `item_indent` applies to statements and
/// headers, `label_indent` to case/default/access labels; comments take the
/// indentation of the node that follows them.
fn render_seq(
    em: &mut Emitter,
    children: &[Node],
    item_indent: u32,
    label_indent: u32,
    level: usize,
    decl_ctx: bool,
    root_gaps: bool,
) {
    for (i, node) in children.iter().enumerate() {
        if root_gaps && i > 0 {
            if let (Some(prev_end), Some(start)) = (last_source_line(&children[i - 1]), first_source_line(node)) {
                if start > prev_end + 1 {
                    em.blank_line();
                }
            }
        }
        let indent = match node {
            Node::Label { .. } => label_indent,
            Node::Comment { .. } => children[i..]
                .iter()
                .find_map(|n| match n {
                    Node::Comment { .. } => None,
                    Node::Label { .. } => Some(label_indent),
                    _ => Some(item_indent),
                })
                .unwrap_or(item_indent),
            _ => item_indent,
        };
        let cuddle_else = matches!(
            node,
            Node::Header { kind: HeaderKind::Else | HeaderKind::ElseIf, .. }
        ) && i > 0
            && else_cuddles_after(&children[i - 1], em.style)
            && em.last_can_extend();
        if cuddle_else {
            em.append(" ");
            render_node(em, node, indent, level, true, decl_ctx);
        } else {
            render_node(em, node, indent, level, false, decl_ctx);
        }
    }
}

fn else_cuddles_after(prev: &Node, style: &StyleSpec) -> bool {
    style.control_brace == BracePlacement::SameLine
        && style.close_brace == CloseBracePlacement::HeaderColumn
        && matches!(
            prev,
            Node::Header {
                kind: HeaderKind::If | HeaderKind::ElseIf,
                body,
                ..
            } if matches!(body.as_ref(), Node::Block { .. })
        )
}

fn render_node(em: &mut Emitter, node: &Node, indent: u32, level: usize, join: bool, decl_ctx: bool) {
    match node {
        Node::Statement { tokens } => emit_statement(em, tokens, indent, level, join, decl_ctx),
        Node::Label { kind: _, tokens } => {
            em.open_line(indent, level);
            em.append(&label_text(tokens, em.style));
            if tokens.last().map(|t| t.kind) == Some(TokenKind::LineComment) {
                em.mark_unextendable();
            }
        }
        Node::Comment { token } => {
            em.open_line(indent, level);
            let text = token.text.clone();
            em.append(&text);
            if token.kind == TokenKind::LineComment {
                em.mark_unextendable();
            }
        }
        Node::Preprocessor { token } => {
            em.open_line(0, level);
            let text = token.text.clone();
            em.append(&text);
            em.mark_unextendable();
        }
        Node::Header {
            kind,
            tokens,
            body,
            trailer,
        } => render_header(em, *kind, tokens, body, trailer, indent, level, join),
        Node::Block { .. } => {
            render_block(em, node, None, indent, level, &[], join);
        }
    }
}

/// Label content keeps its colon attached: `case ' ':`, `default:`.
fn label_text(tokens: &[Token], style: &StyleSpec) -> String {
    let colon_at = tokens.iter().rposition(|t| t.kind == TokenKind::Colon);
    match colon_at {
        Some(idx) => {
            let mut text = respace(&tokens[..idx], style);
            text.push(':');
            for tok in &tokens[idx + 1..] {
                text.push(' ');
                text.push_str(&tok.text);
            }
            text
        }
        None => respace(tokens, style),
    }
}

#[allow(clippy::too_many_arguments)]
fn render_header(
    em: &mut Emitter,
    kind: HeaderKind,
    tokens: &[Token],
    body: &Node,
    trailer: &[Token],
    indent: u32,
    level: usize,
    join: bool,
) {
    let width = em.cfg.indent_width;

    if let Node::Block { .. } = body {
        if try_one_line_function(em, kind, tokens, body, trailer, indent, level, join) {
            return;
        }
        emit_header_line(em, kind, tokens, indent, level, join);
        render_block(em, body, Some(kind), indent, level, trailer, false);
        return;
    }

    emit_header_line(em, kind, tokens, indent, level, join);

    match body {
        Node::Statement { tokens: body_tokens } if body.is_null_body() => {
            render_null_body(em, kind, body_tokens, indent + width, level + 1);
            emit_trailer_line(em, trailer, indent, level);
        }
        Node::Statement { tokens: body_tokens } if body_tokens.is_empty() => {
            emit_trailer_line(em, trailer, indent, level);
        }
        Node::Statement { tokens: body_tokens } => {
            let same_line = em.cfg.simple_body_policy == SimpleBodyPolicy::SameLine
                && em.last_can_extend()
                && !body_tokens
                    .iter()
                    .any(|t| t.kind == TokenKind::LineComment)
                && fits_appended(em, body_tokens);
            if same_line {
                em.append(" ");
                emit_statement(em, body_tokens, indent, level, true, false);
                if !trailer.is_empty() {
                    em.append(" ");
                    em.append(&respace(trailer, em.style));
                }
            } else {
                emit_statement(em, body_tokens, indent + width, level + 1, false, false);
                emit_trailer_line(em, trailer, indent, level);
            }
        }
        other => {
            render_node(em, other, indent + width, level + 1, false, false);
            emit_trailer_line(em, trailer, indent, level);
        }
    }
}

fn fits_appended(em: &Emitter, tokens: &[Token]) -> bool {
    let text = respace(tokens, em.style);
    em.line_width() + 1 + text.chars().count() as u32 <= em.cfg.max_line_width
}

/// Emit the header tokens, wrapping an overlong function signature one
/// parameter per line at the column after its opening paren.
fn emit_header_line(
    em: &mut Emitter,
    kind: HeaderKind,
    tokens: &[Token],
    indent: u32,
    level: usize,
    join: bool,
) {
    let has_mid_line_comment = tokens
        .iter()
        .rev()
        .skip(1)
        .any(|t| t.kind == TokenKind::LineComment);
    if kind == HeaderKind::FunctionDef && !join && !has_mid_line_comment {
        let text = respace(tokens, em.style);
        if indent + text.chars().count() as u32 > em.cfg.max_line_width {
            if let Some(lines) = wrap_parameter_list(tokens, indent, em.style) {
                for (line_indent, text) in &lines {
                    em.open_line(*line_indent, level);
                    em.append(text);
                }
                return;
            }
        }
    }
    emit_respaced(em, tokens, indent, level, join);
}

/// Emit a token run, breaking after any line comment that is not the final
/// token so later tokens cannot be swallowed by it.
fn emit_respaced(em: &mut Emitter, tokens: &[Token], indent: u32, level: usize, join: bool) {
    if !join {
        em.open_line(indent, level);
    }
    let mut prev: Option<&Token> = None;
    for tok in tokens {
        if let Some(p) = prev {
            if p.kind == TokenKind::LineComment {
                em.open_line(indent, level);
            } else if needs_space(p, tok, em.style) {
                em.append(" ");
            }
        }
        let text = tok.text.clone();
        em.append(&text);
        prev = Some(tok);
    }
    if prev.map(|t| t.kind) == Some(TokenKind::LineComment) {
        em.mark_unextendable();
    }
}

fn emit_trailer_line(em: &mut Emitter, trailer: &[Token], indent: u32, level: usize) {
    if trailer.is_empty() {
        return;
    }
    emit_respaced(em, trailer, indent, level, false);
}

/// `/* null body */ ;` on its own indented line. The comment is inserted for
/// loops when configured and no comment is already present; an existing
/// comment is kept as is.
fn render_null_body(em: &mut Emitter, kind: HeaderKind, tokens: &[Token], indent: u32, level: usize) {
    let comments: Vec<&Token> = tokens
        .iter()
        .filter(|t| matches!(t.kind, TokenKind::LineComment | TokenKind::BlockComment))
        .collect();
    if comments.is_empty() {
        em.open_line(indent, level);
        if kind.is_loop() && em.cfg.null_body_comment {
            em.append("/* null body */ ;");
        } else {
            em.append(";");
        }
        return;
    }
    let mut pending_inline: Vec<&Token> = Vec::new();
    for c in &comments {
        if c.kind == TokenKind::LineComment {
            em.open_line(indent, level);
            let text = c.text.clone();
            em.append(&text);
            em.mark_unextendable();
        } else {
            pending_inline.push(c);
        }
    }
    em.open_line(indent, level);
    let mut text = String::new();
    for c in pending_inline {
        text.push_str(&c.text);
        text.push(' ');
    }
    text.push(';');
    em.append(&text);
}

/// Render `{ ... }` attached to a header (or bare when `owner` is `None`),
/// including the close brace and any do-while/class trailer.
fn render_block(
    em: &mut Emitter,
    block: &Node,
    owner: Option<HeaderKind>,
    header_indent: u32,
    level: usize,
    trailer: &[Token],
    join: bool,
) {
    let (open_comments, children, close_comments) = match block {
        Node::Block {
            open_comments,
            children,
            close_comments,
            ..
        } => (open_comments, children, close_comments),
        _ => unreachable!("render_block on non-block"),
    };
    let style = em.style;
    let width = em.cfg.indent_width;

    let mut placement = owner.map_or(BracePlacement::NextLineHeaderColumn, |k| style.brace_for(k));
    if placement == BracePlacement::SameLine && (!em.last_can_extend() || owner.is_none()) {
        placement = BracePlacement::NextLineHeaderColumn;
    }
    if owner == Some(HeaderKind::DoWhile)
        && !em.cfg.do_while_cuddle
        && placement == BracePlacement::SameLine
    {
        placement = BracePlacement::NextLineHeaderColumn;
    }
    let brace_indent = match placement {
        BracePlacement::SameLine => header_indent,
        BracePlacement::NextLineHeaderColumn => header_indent,
        BracePlacement::NextLineIndented => header_indent + style.brace_extra_indent * width,
    };
    let body_indent = if style.statement_on_open_brace_line {
        brace_indent + 2
    } else {
        match style.body_indent {
            BodyIndent::FromHeader => header_indent + width,
            BodyIndent::FromBrace(units) => brace_indent + units * width,
        }
    };
    let (label_indent, item_indent) = if owner == Some(HeaderKind::Switch) {
        let label = match em.cfg.switch_scheme {
            SwitchScheme::CasesIndented => header_indent + width,
            SwitchScheme::CasesAtSwitchColumn => header_indent,
        };
        (label, label + width)
    } else if owner == Some(HeaderKind::ClassDef) {
        (header_indent, body_indent)
    } else {
        (body_indent, body_indent)
    };
    let first_child_indent = match children.first() {
        Some(Node::Label { .. }) => label_indent,
        _ => item_indent,
    };

    // Opening brace.
    match placement {
        BracePlacement::SameLine => em.append(" {"),
        _ => {
            if join {
                em.append(" {");
            } else {
                em.open_line(brace_indent, level);
                em.append("{");
            }
        }
    }
    for c in open_comments {
        em.append(" ");
        let text = c.text.clone();
        em.append(&text);
        if c.kind == TokenKind::LineComment {
            em.mark_unextendable();
        }
    }

    let decl_ctx = owner == Some(HeaderKind::ClassDef);
    if children.is_empty() {
        if style.close_brace == CloseBracePlacement::CuddleLastStatement && em.last_can_extend() {
            em.append(" }");
        } else {
            em.open_line(close_indent(style, header_indent, brace_indent, first_child_indent), level);
            em.append("}");
        }
    } else {
        let cuddle = placement != BracePlacement::SameLine
            && style.statement_on_open_brace_line
            && first_child_cuddles(children, open_comments)
            && em.last_can_extend();
        let rest = if cuddle {
            em.append(" ");
            render_node(em, &children[0], body_indent, level + 1, true, decl_ctx);
            &children[1..]
        } else {
            &children[..]
        };
        render_seq(em, rest, item_indent, label_indent, level + 1, decl_ctx, false);
        if style.close_brace == CloseBracePlacement::CuddleLastStatement && em.last_can_extend() {
            em.append(" }");
        } else {
            em.open_line(close_indent(style, header_indent, brace_indent, first_child_indent), level);
            em.append("}");
        }
    }

    for c in close_comments {
        if em.last_can_extend() {
            em.append(" ");
            let text = c.text.clone();
            em.append(&text);
            if c.kind == TokenKind::LineComment {
                em.mark_unextendable();
            }
        } else {
            render_node(em, &Node::Comment { token: c.clone() }, header_indent, level, false, false);
        }
    }

    if !trailer.is_empty() {
        if em.last_can_extend() {
            if trailer.first().map(|t| t.kind) != Some(TokenKind::Semicolon) {
                em.append(" ");
            }
            emit_respaced_inline(em, trailer);
        } else {
            emit_respaced(em, trailer, header_indent, level, false);
        }
    }
}

fn emit_respaced_inline(em: &mut Emitter, tokens: &[Token]) {
    let text = respace(tokens, em.style);
    em.append(&text);
    if tokens.last().map(|t| t.kind) == Some(TokenKind::LineComment) {
        em.mark_unextendable();
    }
}

fn close_indent(style: &StyleSpec, header: u32, brace: u32, body: u32) -> u32 {
    match style.close_brace {
        CloseBracePlacement::HeaderColumn => header,
        CloseBracePlacement::BraceColumn => brace,
        CloseBracePlacement::BodyColumn => body,
        CloseBracePlacement::CuddleLastStatement => header,
    }
}

/// Short-function layout: `int f() { return x; }` for styles that allow it.
#[allow(clippy::too_many_arguments)]
fn try_one_line_function(
    em: &mut Emitter,
    kind: HeaderKind,
    tokens: &[Token],
    body: &Node,
    trailer: &[Token],
    indent: u32,
    level: usize,
    join: bool,
) -> bool {
    if kind != HeaderKind::FunctionDef || !em.style.short_function_one_line || join || !trailer.is_empty() {
        return false;
    }
    let (open_comments, children, close_comments) = match body {
        Node::Block {
            open_comments,
            children,
            close_comments,
            ..
        } => (open_comments, children, close_comments),
        _ => return false,
    };
    if !open_comments.is_empty() || !close_comments.is_empty() || children.len() > 1 {
        return false;
    }
    let stmt_text = match children.first() {
        None => None,
        Some(Node::Statement { tokens }) => {
            if tokens.iter().any(|t| t.kind == TokenKind::LineComment) {
                return false;
            }
            Some(respace(tokens, em.style))
        }
        Some(_) => return false,
    };
    let header = respace(tokens, em.style);
    if tokens.iter().any(|t| t.kind == TokenKind::LineComment) {
        return false;
    }
    let text = match stmt_text {
        Some(stmt) => format!("{} {{ {} }}", header, stmt),
        None => format!("{} {{ }}", header),
    };
    if indent + text.chars().count() as u32 > em.cfg.max_line_width {
        return false;
    }
    em.open_line(indent, level);
    em.append(&text);
    true
}

/// Statement layout with overflow handling: declarations wrap one parameter
/// per line; other long statements break after the last fitting top-level
/// comma, continuation one unit in.
fn emit_statement(
    em: &mut Emitter,
    tokens: &[Token],
    indent: u32,
    level: usize,
    join: bool,
    decl_ctx: bool,
) {
    if tokens.is_empty() {
        if !join {
            em.open_line(indent, level);
        }
        return;
    }
    let has_mid_line_comment = tokens
        .iter()
        .rev()
        .skip(1)
        .any(|t| t.kind == TokenKind::LineComment);
    if join || has_mid_line_comment {
        emit_respaced(em, tokens, indent, level, join);
        return;
    }
    let text = respace(tokens, em.style);
    if indent + text.chars().count() as u32 <= em.cfg.max_line_width {
        em.open_line(indent, level);
        em.append(&text);
        if tokens.last().map(|t| t.kind) == Some(TokenKind::LineComment) {
            em.mark_unextendable();
        }
        return;
    }
    if decl_ctx && is_declaration(tokens) {
        if let Some(lines) = wrap_parameter_list(tokens, indent, em.style) {
            for (line_indent, text) in lines {
                em.open_line(line_indent, level);
                em.append(&text);
            }
            return;
        }
    }
    for (line_indent, text) in wrap_at_commas(tokens, indent, em.cfg.max_line_width, em.cfg.indent_width, em.style) {
        em.open_line(line_indent, level);
        em.append(&text);
    }
    if tokens.last().map(|t| t.kind) == Some(TokenKind::LineComment) {
        em.mark_unextendable();
    }
}

/// A root- or class-level run shaped `... name(...) ;` — a declaration whose
/// overflow wraps parameter-list style.
pub(crate) fn is_declaration(tokens: &[Token]) -> bool {
    let n = tokens.len();
    n >= 4
        && tokens[n - 1].kind == TokenKind::Semicolon
        && tokens[n - 2].kind == TokenKind::CloseParen
        && tokens
            .windows(2)
            .any(|w| w[0].kind == TokenKind::Identifier && w[1].kind == TokenKind::OpenParen)
}

/// One parameter per line, each after the column of the opening paren; the
/// close paren stays on the last parameter's line. Returns `None` when there
/// is nothing to split. Applies to function definition headers and to
/// root-level declarations whose one-line form overflows.
pub fn wrap_parameter_list(
    tokens: &[Token],
    indent: u32,
    style: &StyleSpec,
) -> Option<Vec<(u32, String)>> {
    let open = tokens.iter().position(|t| t.kind == TokenKind::OpenParen)?;
    let mut depth = 0usize;
    let mut close = None;
    let mut commas = Vec::new();
    for (i, tok) in tokens.iter().enumerate().skip(open) {
        match tok.kind {
            TokenKind::OpenParen => depth += 1,
            TokenKind::CloseParen => {
                depth -= 1;
                if depth == 0 {
                    close = Some(i);
                    break;
                }
            }
            TokenKind::Comma if depth == 1 => commas.push(i),
            _ => {}
        }
    }
    close?;
    if commas.is_empty() {
        return None;
    }
    let prefix = respace(&tokens[..=open], style);
    let param_indent = indent + prefix.chars().count() as u32;
    let mut lines = Vec::with_capacity(commas.len() + 1);
    let first = format!("{}{}", prefix, respace(&tokens[open + 1..=commas[0]], style));
    lines.push((indent, first));
    for pair in commas.windows(2) {
        lines.push((param_indent, respace(&tokens[pair[0] + 1..=pair[1]], style)));
    }
    lines.push((
        param_indent,
        respace(&tokens[commas[commas.len() - 1] + 1..], style),
    ));
    Some(lines)
}

/// Break a long run after the last comma (at paren depth zero) that still
/// fits; the remainder continues one unit in.
fn wrap_at_commas(
    tokens: &[Token],
    indent: u32,
    max_width: u32,
    unit: u32,
    style: &StyleSpec,
) -> Vec<(u32, String)> {
    let mut lines = Vec::new();
    let mut rest = tokens;
    let mut at = indent;
    loop {
        let text = respace(rest, style);
        if at + text.chars().count() as u32 <= max_width {
            lines.push((at, text));
            return lines;
        }
        let mut depth = 0usize;
        let mut width = at;
        let mut best = None;
        let mut prev: Option<&Token> = None;
        for (i, tok) in rest.iter().enumerate() {
            if let Some(p) = prev {
                if needs_space(p, tok, style) {
                    width += 1;
                }
            }
            width += tok.text.chars().count() as u32;
            match tok.kind {
                TokenKind::OpenParen => depth += 1,
                TokenKind::CloseParen => depth = depth.saturating_sub(1),
                TokenKind::Comma if depth == 0 && width <= max_width && i + 1 < rest.len() => {
                    best = Some(i)
                }
                _ => {}
            }
            prev = Some(tok);
        }
        match best {
            None => {
                lines.push((at, text));
                return lines;
            }
            Some(i) => {
                lines.push((at, respace(&rest[..=i], style)));
                rest = &rest[i + 1..];
                at = indent + unit;
            }
        }
    }
}

fn first_source_line(node: &Node) -> Option<u32> {
    match node {
        Node::Statement { tokens } | Node::Label { tokens, .. } => tokens.first().map(|t| t.line),
        Node::Comment { token } | Node::Preprocessor { token } => Some(token.line),
        Node::Header { tokens, body, .. } => {
            tokens.first().map(|t| t.line).or_else(|| first_source_line(body))
        }
        Node::Block { open, .. } => Some(open.line),
    }
}

fn last_source_line(node: &Node) -> Option<u32> {
    match node {
        Node::Statement { tokens } | Node::Label { tokens, .. } => {
            tokens.last().map(Token::end_line)
        }
        Node::Comment { token } | Node::Preprocessor { token } => Some(token.end_line()),
        Node::Header { tokens, body, trailer, .. } => trailer
            .last()
            .map(Token::end_line)
            .or_else(|| last_source_line(body))
            .or_else(|| tokens.last().map(Token::end_line)),
        Node::Block { close, close_comments, .. } => Some(
            close_comments
                .last()
                .map_or(close.line, Token::end_line),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::style::builtin_style;

    fn fmt(src: &str, style_name: &str) -> String {
        let style = builtin_style(style_name).unwrap();
        let config = FormatConfig::for_style(&style);
        format_source(src, &style, &config).unwrap()
    }

    #[test]
    fn allman_while_block() {
        let out = fmt(
            "while (x == y) { Do_something(); Do_somethingelse(); }",
            "allman",
        );
        assert_eq!(
            out,
            "while (x == y)\n{\n    Do_something();\n    Do_somethingelse();\n}\n"
        );
    }

    #[test]
    fn empty_input_renders_empty() {
        assert_eq!(fmt("", "kr"), "");
    }

    #[test]
    fn whitesmiths_columns() {
        let out = fmt(
            "while (x == y) { Do_something(); Do_somethingelse(); }",
            "whitesmiths",
        );
        assert_eq!(
            out,
            "while (x == y)\n    {\n    Do_something();\n    Do_somethingelse();\n    }\n"
        );
    }

    #[test]
    fn gnu_function_and_control() {
        let out = fmt(
            "combine (char *str1, char *str2)\n{\nwhile (x == y)\n{\nDo_something ();\nDo_somethingelse ();\n}\nDo_final ();\n}\n",
            "gnu",
        );
        assert_eq!(
            out,
            "combine (char * str1, char * str2)\n{\n  while (x == y)\n    {\n      Do_something ();\n      Do_somethingelse ();\n    }\n  Do_final ();\n}\n"
        );
    }

    #[test]
    fn rendering_is_deterministic_and_whitespace_insensitive() {
        let style = builtin_style("kr").unwrap();
        let cfg = FormatConfig::for_style(&style);
        let a = format_source("if (x) {\n  y();\n}\n", &style, &cfg).unwrap();
        let b = format_source("if(x){y();}", &style, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, format_source(&a, &style, &cfg).unwrap());
    }

    #[test]
    fn plain_statement_any_style() {
        for name in crate::style::STYLE_NAMES {
            assert_eq!(fmt("count = 0;", name), "count = 0;\n", "style {}", name);
        }
    }

    #[test]
    fn one_tbs_fixpoint() {
        let src = "if (x < 0) {\n    puts(\"Negative\");\n    negative(x);\n} else {\n    puts(\"Non-negative\");\n    nonnegative(x);\n}\n";
        assert_eq!(fmt(src, "1tbs"), src);
    }

    #[test]
    fn parameter_list_wrap_at_open_paren_column() {
        let style = builtin_style("kr").unwrap();
        let mut cfg = FormatConfig::for_style(&style);
        cfg.max_line_width = 60;
        let src = "int Index_search (struct collection list[], int value_first_index, int value_last_index, key_type value_target);\n";
        let out = format_source(src, &style, &cfg).unwrap();
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "int Index_search(struct collection list [ ],");
        let paren_col = lines[0].find('(').unwrap();
        for line in &lines[1..] {
            let start = line.len() - line.trim_start().len();
            assert_eq!(start, paren_col + 1);
        }
        assert!(lines[3].ends_with(");"));
    }

    #[test]
    fn short_header_stays_on_one_line() {
        let out = fmt("int main(void) { return 0; }", "kr");
        assert_eq!(out, "int main(void)\n{\n    return 0;\n}\n");
    }

    #[test]
    fn wrap_boundary_matches_character_count() {
        let style = builtin_style("kr").unwrap();
        let src = "int f (int alpha, int beta);\n";
        // Independent width oracle: the one-line rendering.
        let rendered = "int f(int alpha, int beta);";
        for (width, expect_lines) in [
            (rendered.len() as u32, 1),
            (rendered.len() as u32 - 1, 2),
            (rendered.len() as u32 + 1, 1),
        ] {
            let mut cfg = FormatConfig::for_style(&style);
            cfg.max_line_width = width.max(20);
            let out = format_source(src, &style, &cfg).unwrap();
            assert_eq!(out.lines().count(), expect_lines, "width {}", width);
        }
    }

    #[test]
    fn stroustrup_short_functions_one_line() {
        let out = fmt(
            "class Sample {\npublic:\n    Sample(int s) : elemt(new double[s]), sz(s) { }\n    double& op(int i) { return elemt[i]; }\n};\n",
            "stroustrup",
        );
        assert_eq!(
            out,
            "class Sample {\npublic:\n    Sample(int s) : elemt(new double [ s ]), sz(s) { }\n    double & op(int i) { return elemt [ i ]; }\n};\n"
        );
    }

    #[test]
    fn null_body_comment_inserted_for_loops() {
        let out = fmt("for (i=0; i < n; i++);\nif (i >= n)\n    printf(\"x\");\n", "kr");
        assert_eq!(
            out,
            "for (i = 0; i < n; i ++)\n    /* null body */ ;\nif (i >= n)\n    printf(\"x\");\n"
        );
        // Idempotent: the comment is recognized, not duplicated.
        assert_eq!(fmt(&out, "kr"), out);
    }

    #[test]
    fn null_body_comment_can_be_disabled() {
        let style = builtin_style("kr").unwrap();
        let mut cfg = FormatConfig::for_style(&style);
        cfg.null_body_comment = false;
        let out = format_source("while (wait());", &style, &cfg).unwrap();
        assert_eq!(out, "while (wait())\n    ;\n");
    }

    #[test]
    fn do_while_cuddled() {
        let out = fmt("i = 0;\ndo {\n    i++;\n} while (i < LIST_SIZE);\n", "kr");
        assert_eq!(out, "i = 0;\ndo {\n    i ++;\n} while (i < LIST_SIZE);\n");
    }

    #[test]
    fn do_while_uncuddled_when_configured() {
        let style = builtin_style("kr").unwrap();
        let mut cfg = FormatConfig::for_style(&style);
        cfg.do_while_cuddle = false;
        let out = format_source("do {\n    i++;\n} while (i < n);\n", &style, &cfg).unwrap();
        assert_eq!(out, "do\n{\n    i ++;\n} while (i < n);\n");
    }

    #[test]
    fn simple_body_same_line_policy() {
        let style = builtin_style("kr").unwrap();
        let mut cfg = FormatConfig::for_style(&style);
        cfg.simple_body_policy = SimpleBodyPolicy::SameLine;
        let out = format_source("if (count < 0)\n    count = 0;\n", &style, &cfg).unwrap();
        assert_eq!(out, "if (count < 0) count = 0;\n");
        let out = format_source("do i++; while (i < n);", &style, &cfg).unwrap();
        assert_eq!(out, "do i ++; while (i < n);\n");
    }

    #[test]
    fn switch_schemes() {
        let src = "switch(ch) {\ncase ' ': printf(\"space\");\nbreak;\ndefault : other();\n}\n";
        let out = fmt(src, "kr");
        assert_eq!(
            out,
            "switch (ch) {\n    case ' ':\n        printf(\"space\");\n        break;\n    default:\n        other();\n}\n"
        );
        let style = builtin_style("kr").unwrap();
        let mut cfg = FormatConfig::for_style(&style);
        cfg.switch_scheme = SwitchScheme::CasesAtSwitchColumn;
        let out = format_source(src, &style, &cfg).unwrap();
        assert_eq!(
            out,
            "switch (ch) {\ncase ' ':\n    printf(\"space\");\n    break;\ndefault:\n    other();\n}\n"
        );
    }

    #[test]
    fn level_annotations() {
        let style = builtin_style("kr").unwrap();
        let mut cfg = FormatConfig::for_style(&style);
        cfg.annotate_levels = true;
        let out = format_source(
            "int main (void)\n{\n    int k;\n    for (k=1; k<=1000; k++) {\n        sum += thousandth;\n    }\n}\n",
            &style,
            &cfg,
        )
        .unwrap();
        let levels: Vec<&str> = out
            .lines()
            .map(|l| &l[..3])
            .collect();
        assert_eq!(levels, vec!["[0]", "[0]", "[1]", "[1]", "[2]", "[1]", "[0]"]);
    }

    #[test]
    fn blank_line_kept_between_root_nodes_only() {
        let src = "int a;\n\n\nint b;\nint c;\nvoid f()\n{\n    x();\n\n    y();\n}\n";
        let out = fmt(src, "kr");
        assert_eq!(
            out,
            "int a;\n\nint b;\nint c;\nvoid f()\n{\n    x();\n    y();\n}\n"
        );
    }

    #[test]
    fn preprocessor_lines_stay_at_column_one() {
        let out = fmt("void f()\n{\n#ifdef X\n    g();\n#endif\n}\n", "kr");
        assert_eq!(out, "void f()\n{\n#ifdef X\n    g();\n#endif\n}\n");
    }

    #[test]
    fn trailing_comments_stay_on_their_line() {
        let out = fmt("x = 1; /* one */\n// alone\ny = 2; // two\n", "kr");
        assert_eq!(out, "x = 1; /* one */\n// alone\ny = 2; // two\n");
    }

    #[test]
    fn horstmann_first_statement_on_brace_line() {
        let out = fmt("if (x == y)\n{ Do_something();\n  Do_somethingelse();\n}\n", "horstmann");
        assert_eq!(
            out,
            "if (x == y)\n{ Do_something();\n  Do_somethingelse();\n}\n"
        );
    }

    #[test]
    fn pico_cuddles_close_brace() {
        let out = fmt("stuff(n)\n{ x = 3 * n;\n  y = doStuff(x);\n  return y + x; }\n", "pico");
        assert_eq!(
            out,
            "stuff(n)\n{ x = 3 * n;\n  y = doStuff(x);\n  return y + x; }\n"
        );
    }

    #[test]
    fn lisp_accumulates_close_braces() {
        let out = fmt(
            "for (i = 0; i < 10; i++) {\n    if (i % 2 == 0) {\n        doSomething (i); }\n    else {\n        doSomethingElse (i); } }\n",
            "lisp",
        );
        assert_eq!(
            out,
            "for (i = 0; i < 10; i ++) {\n    if (i % 2 == 0) {\n        doSomething(i); }\n    else {\n        doSomethingElse(i); } }\n"
        );
    }

    #[test]
    fn ratliff_close_at_body_column() {
        let out = fmt(
            "for (i = 0; i < 10; i++) {\n    doSomething(i);\n}\n",
            "ratliff",
        );
        assert_eq!(out, "for (i = 0; i < 10; i ++) {\n    doSomething(i);\n    }\n");
    }

    #[test]
    fn tabs_emitted_per_unit_with_space_remainder() {
        let style = builtin_style("knf").unwrap();
        let cfg = FormatConfig::for_style(&style);
        let out = format_source("while (x == y) { Do_something(); }", &style, &cfg).unwrap();
        assert_eq!(out, "while (x == y) {\n\tDo_something();\n}\n");
    }
}
