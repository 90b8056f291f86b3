//! Block structure recovery.
//!
//! [`parse_blocks`] turns a token stream into a tree of headers, brace
//! blocks, statements, labels, comments, and preprocessor lines.
//! [`flatten`] is its inverse on significant tokens: no token is lost,
//! reordered, or invented.

use crate::lexer::{significant, Token, TokenKind, TokenStream};

/// The construct that owns a block or label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HeaderKind {
    FunctionDef,
    ClassDef,
    If,
    ElseIf,
    Else,
    While,
    For,
    DoWhile,
    Switch,
    CaseLabel,
    DefaultLabel,
    AccessLabel,
}

impl HeaderKind {
    pub fn is_label(self) -> bool {
        matches!(
            self,
            HeaderKind::CaseLabel | HeaderKind::DefaultLabel | HeaderKind::AccessLabel
        )
    }

    pub fn is_loop(self) -> bool {
        matches!(self, HeaderKind::While | HeaderKind::For | HeaderKind::DoWhile)
    }
}

/// One structural element of the tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    /// A construct header (`if (...)`, function signature, ...) and its body.
    /// `trailer` holds the `while (...);` tail of a do-while or the `;`
    /// closing a class definition.
    Header {
        kind: HeaderKind,
        tokens: Vec<Token>,
        body: Box<Node>,
        trailer: Vec<Token>,
    },
    /// A brace-delimited block. `open_comments`/`close_comments` are comments
    /// that shared a line with the corresponding brace in the source.
    Block {
        open: Token,
        open_comments: Vec<Token>,
        children: Vec<Node>,
        close: Token,
        close_comments: Vec<Token>,
    },
    /// A run of tokens ending at its semicolon (or flushed at a construct
    /// boundary). May begin or end with attached comment tokens.
    Statement { tokens: Vec<Token> },
    /// `case ...:`, `default:`, or an access label inside a class body.
    Label { kind: HeaderKind, tokens: Vec<Token> },
    /// A comment alone on its line.
    Comment { token: Token },
    /// An opaque preprocessor directive.
    Preprocessor { token: Token },
}

impl Node {
    /// True for a loop body consisting only of `;` (optionally preceded by
    /// comments): the null body of `for (...);`.
    pub fn is_null_body(&self) -> bool {
        match self {
            Node::Statement { tokens } => match tokens.split_last() {
                Some((last, rest)) => {
                    last.kind == TokenKind::Semicolon
                        && rest.iter().all(|t| {
                            matches!(t.kind, TokenKind::LineComment | TokenKind::BlockComment)
                        })
                }
                None => false,
            },
            _ => false,
        }
    }

    /// Line on which the node's last token ends, for same-line comment
    /// attachment. Zero when the node has no tokens.
    fn last_line(&self) -> u32 {
        match self {
            Node::Statement { tokens } | Node::Label { tokens, .. } => {
                tokens.last().map_or(0, Token::end_line)
            }
            Node::Comment { token } | Node::Preprocessor { token } => token.end_line(),
            Node::Header { tokens, body, trailer, .. } => trailer
                .last()
                .map(Token::end_line)
                .unwrap_or_else(|| {
                    let b = body.last_line();
                    if b == 0 {
                        tokens.last().map_or(0, Token::end_line)
                    } else {
                        b
                    }
                }),
            Node::Block { close, close_comments, .. } => close_comments
                .last()
                .map_or(close.line, Token::end_line),
        }
    }

    /// Attach a comment that shares the node's final source line. Returns
    /// false when the node cannot absorb it (the comment stays standalone).
    fn attach_trailing(&mut self, comment: Token) -> Result<(), Token> {
        match self {
            Node::Statement { tokens } | Node::Label { tokens, .. } => {
                tokens.push(comment);
                Ok(())
            }
            Node::Header { body, trailer, .. } => {
                if trailer.is_empty() {
                    body.attach_trailing(comment)
                } else {
                    trailer.push(comment);
                    Ok(())
                }
            }
            Node::Block { close_comments, .. } => {
                close_comments.push(comment);
                Ok(())
            }
            Node::Comment { .. } | Node::Preprocessor { .. } => Err(comment),
        }
    }
}

/// A parsed compilation unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockTree {
    pub roots: Vec<Node>,
    pub source_name: String,
}

/// Structural failure while pairing braces or completing a construct.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("{line}:{column}: unclosed '{{'")]
    UnbalancedBraces { line: u32, column: u32 },
    #[error("{line}:{column}: '}}' with no matching '{{'")]
    UnexpectedCloseBrace { line: u32, column: u32 },
    #[error("{line}:{column}: 'do' block is not followed by 'while'")]
    MalformedDoWhile { line: u32, column: u32 },
}

impl ParseError {
    pub fn position(&self) -> (u32, u32) {
        match *self {
            ParseError::UnbalancedBraces { line, column }
            | ParseError::UnexpectedCloseBrace { line, column }
            | ParseError::MalformedDoWhile { line, column } => (line, column),
        }
    }
}

/// Context a node list is parsed in; only class bodies change recognition
/// (access labels, method definitions).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Context {
    Root,
    ClassBody,
    Other,
}

/// Build the block tree for a token stream. Newline tokens are ignored;
/// token positions drive comment attachment.
pub fn parse_blocks(ts: &TokenStream) -> Result<BlockTree, ParseError> {
    let sig = significant(ts);
    let mut parser = Parser {
        tokens: sig.tokens,
        pos: 0,
    };
    let roots = parser.parse_nodes(Context::Root, None)?;
    Ok(BlockTree {
        roots,
        source_name: sig.source_name,
    })
}

/// Emit the tree's tokens in source order, one `{`/`}` pair per block.
pub fn flatten(tree: &BlockTree) -> TokenStream {
    let mut tokens = Vec::new();
    for node in &tree.roots {
        flatten_node(node, &mut tokens);
    }
    TokenStream {
        tokens,
        source_name: tree.source_name.clone(),
    }
}

fn flatten_node(node: &Node, out: &mut Vec<Token>) {
    match node {
        Node::Statement { tokens } | Node::Label { tokens, .. } => out.extend_from_slice(tokens),
        Node::Comment { token } | Node::Preprocessor { token } => out.push(token.clone()),
        Node::Header { tokens, body, trailer, .. } => {
            out.extend_from_slice(tokens);
            flatten_node(body, out);
            out.extend_from_slice(trailer);
        }
        Node::Block {
            open,
            open_comments,
            children,
            close,
            close_comments,
        } => {
            out.push(open.clone());
            out.extend_from_slice(open_comments);
            for child in children {
                flatten_node(child, out);
            }
            out.push(close.clone());
            out.extend_from_slice(close_comments);
        }
    }
}

/// Visit every node with its nesting level: roots are level 0, block
/// children and braceless bodies sit one level inside their header.
pub fn visit_levels<'a>(tree: &'a BlockTree, f: &mut impl FnMut(&'a Node, usize)) {
    for node in &tree.roots {
        visit_node(node, 0, f);
    }
}

fn visit_node<'a>(node: &'a Node, level: usize, f: &mut impl FnMut(&'a Node, usize)) {
    f(node, level);
    match node {
        Node::Header { body, .. } => match body.as_ref() {
            block @ Node::Block { .. } => visit_block(block, level, f),
            other => visit_node(other, level + 1, f),
        },
        Node::Block { children, .. } => {
            // Bare block: the node itself was already reported, recurse only.
            for child in children {
                visit_node(child, level + 1, f);
            }
        }
        _ => {}
    }
}

fn visit_block<'a>(block: &'a Node, header_level: usize, f: &mut impl FnMut(&'a Node, usize)) {
    f(block, header_level);
    if let Node::Block { children, .. } = block {
        for child in children {
            visit_node(child, header_level + 1, f);
        }
    }
}

/// Pre-order nesting levels, one entry per node.
pub fn depth_map(tree: &BlockTree) -> Vec<usize> {
    let mut levels = Vec::new();
    visit_levels(tree, &mut |_, level| levels.push(level));
    levels
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_at(&self, offset: usize) -> Option<&Token> {
        self.tokens.get(self.pos + offset)
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        self.pos += 1;
        t
    }

    fn at_keyword(&self, word: &str) -> bool {
        self.peek()
            .is_some_and(|t| t.kind == TokenKind::Keyword && t.text == word)
    }

    /// Parse a node sequence until EOF or, when `stop_at` is a block's open
    /// brace, until the matching close brace (not consumed).
    fn parse_nodes(&mut self, ctx: Context, stop_at: Option<&Token>) -> Result<Vec<Node>, ParseError> {
        let mut nodes = Vec::new();
        loop {
            let tok = match self.peek() {
                None => {
                    if let Some(open) = stop_at {
                        return Err(ParseError::UnbalancedBraces {
                            line: open.line,
                            column: open.column,
                        });
                    }
                    return Ok(nodes);
                }
                Some(t) => t.clone(),
            };
            match tok.kind {
                TokenKind::CloseBrace => {
                    if stop_at.is_some() {
                        return Ok(nodes);
                    }
                    return Err(ParseError::UnexpectedCloseBrace {
                        line: tok.line,
                        column: tok.column,
                    });
                }
                TokenKind::LineComment | TokenKind::BlockComment => {
                    let comment = self.bump();
                    match nodes.last_mut() {
                        Some(prev) if prev.last_line() == comment.line => {
                            if let Err(c) = prev.attach_trailing(comment) {
                                nodes.push(Node::Comment { token: c });
                            }
                        }
                        _ => nodes.push(Node::Comment { token: comment }),
                    }
                }
                TokenKind::PreprocessorLine => {
                    let token = self.bump();
                    nodes.push(Node::Preprocessor { token });
                }
                TokenKind::OpenBrace => {
                    let block = self.parse_block(Context::Other)?;
                    nodes.push(block);
                }
                _ => nodes.push(self.parse_item(ctx)?),
            }
        }
    }

    /// Parse one construct, label, or statement starting at the cursor.
    fn parse_item(&mut self, ctx: Context) -> Result<Node, ParseError> {
        let tok = self.peek().expect("parse_item at EOF").clone();
        if tok.kind == TokenKind::Keyword {
            match tok.text.as_str() {
                "if" => return self.parse_control(HeaderKind::If, ctx),
                "while" => return self.parse_control(HeaderKind::While, ctx),
                "for" => return self.parse_control(HeaderKind::For, ctx),
                "switch" => return self.parse_control(HeaderKind::Switch, ctx),
                "else" => return self.parse_else(ctx),
                "do" => return self.parse_do_while(ctx),
                "class" | "struct" => return self.parse_class(ctx),
                "case" => return self.parse_case_like(HeaderKind::CaseLabel),
                "default" => return self.parse_case_like(HeaderKind::DefaultLabel),
                _ => {}
            }
        }
        if ctx == Context::ClassBody
            && tok.kind == TokenKind::Identifier
            && matches!(tok.text.as_str(), "public" | "private" | "protected")
            && self.peek_at(1).is_some_and(|t| t.kind == TokenKind::Colon)
        {
            let ident = self.bump();
            let colon = self.bump();
            return Ok(Node::Label {
                kind: HeaderKind::AccessLabel,
                tokens: vec![ident, colon],
            });
        }
        self.collect_statement(Vec::new(), ctx)
    }

    /// `case ...:` / `default:`; if no colon appears before a structural
    /// boundary the run is kept as a plain statement.
    fn parse_case_like(&mut self, kind: HeaderKind) -> Result<Node, ParseError> {
        let mut lookahead = 0;
        let colon_at = loop {
            match self.peek_at(lookahead) {
                None => break None,
                Some(t) => match t.kind {
                    TokenKind::Colon => break Some(lookahead),
                    TokenKind::Semicolon
                    | TokenKind::OpenBrace
                    | TokenKind::CloseBrace => break None,
                    _ => lookahead += 1,
                },
            }
        };
        match colon_at {
            Some(end) => {
                let mut tokens = Vec::with_capacity(end + 1);
                for _ in 0..=end {
                    tokens.push(self.bump());
                }
                Ok(Node::Label { kind, tokens })
            }
            None => {
                let first = self.bump();
                self.collect_statement(vec![first], Context::Other)
            }
        }
    }

    /// Statement run: tokens up to and including the `;` at paren depth zero,
    /// flushed early at construct keywords and braces. At root or class level
    /// a run shaped like a signature directly before `{` becomes a function
    /// definition header.
    fn collect_statement(&mut self, initial: Vec<Token>, ctx: Context) -> Result<Node, ParseError> {
        let mut run = initial;
        let mut depth = 0usize;
        loop {
            let tok = match self.peek() {
                None => break,
                Some(t) => t.clone(),
            };
            match tok.kind {
                TokenKind::Semicolon if depth == 0 => {
                    run.push(self.bump());
                    break;
                }
                TokenKind::OpenParen => {
                    depth += 1;
                    run.push(self.bump());
                }
                TokenKind::CloseParen => {
                    depth = depth.saturating_sub(1);
                    run.push(self.bump());
                }
                TokenKind::OpenBrace if depth == 0 => {
                    if matches!(ctx, Context::Root | Context::ClassBody) && is_signature(&run) {
                        let body = self.parse_block(Context::Other)?;
                        return Ok(Node::Header {
                            kind: HeaderKind::FunctionDef,
                            tokens: run,
                            body: Box::new(body),
                            trailer: Vec::new(),
                        });
                    }
                    break;
                }
                TokenKind::CloseBrace if depth == 0 => break,
                TokenKind::Keyword if depth == 0 && is_construct_keyword(&tok.text) => break,
                _ => run.push(self.bump()),
            }
        }
        Ok(Node::Statement { tokens: run })
    }

    /// `if`/`while`/`for`/`switch`: keyword, optional parenthesized head,
    /// then the body.
    fn parse_control(&mut self, kind: HeaderKind, ctx: Context) -> Result<Node, ParseError> {
        let mut tokens = vec![self.bump()];
        self.consume_paren_group(&mut tokens);
        let (pre_comments, body) = self.parse_body_item(ctx)?;
        tokens.extend(pre_comments);
        Ok(Node::Header {
            kind,
            tokens,
            body: Box::new(body),
            trailer: Vec::new(),
        })
    }

    fn parse_else(&mut self, ctx: Context) -> Result<Node, ParseError> {
        let else_tok = self.bump();
        let mut tokens = vec![else_tok];
        let kind = if self.at_keyword("if") {
            tokens.push(self.bump());
            self.consume_paren_group(&mut tokens);
            HeaderKind::ElseIf
        } else {
            HeaderKind::Else
        };
        let (pre_comments, body) = self.parse_body_item(ctx)?;
        tokens.extend(pre_comments);
        Ok(Node::Header {
            kind,
            tokens,
            body: Box::new(body),
            trailer: Vec::new(),
        })
    }

    fn parse_do_while(&mut self, ctx: Context) -> Result<Node, ParseError> {
        let do_tok = self.bump();
        let (line, column) = (do_tok.line, do_tok.column);
        let mut tokens = vec![do_tok];
        let (pre_comments, mut body) = self.parse_body_item(ctx)?;
        tokens.extend(pre_comments);
        // Comments between the body and `while` ride on the body's tail.
        while matches!(
            self.peek().map(|t| t.kind),
            Some(TokenKind::LineComment) | Some(TokenKind::BlockComment)
        ) {
            let c = self.bump();
            if let Err(c) = body.attach_trailing(c) {
                if let Node::Statement { tokens } = &mut body {
                    tokens.push(c);
                }
            }
        }
        if !self.at_keyword("while") {
            return Err(ParseError::MalformedDoWhile { line, column });
        }
        let mut trailer = vec![self.bump()];
        self.consume_paren_group(&mut trailer);
        if self.peek().is_some_and(|t| t.kind == TokenKind::Semicolon) {
            trailer.push(self.bump());
        }
        Ok(Node::Header {
            kind: HeaderKind::DoWhile,
            tokens,
            body: Box::new(body),
            trailer,
        })
    }

    /// `class`/`struct`: a definition when a `{` appears before `;`,
    /// otherwise a plain declaration statement.
    fn parse_class(&mut self, _ctx: Context) -> Result<Node, ParseError> {
        let mut tokens = vec![self.bump()];
        let mut depth = 0usize;
        loop {
            let tok = match self.peek() {
                None => return Ok(Node::Statement { tokens }),
                Some(t) => t.clone(),
            };
            match tok.kind {
                TokenKind::OpenParen => {
                    depth += 1;
                    tokens.push(self.bump());
                }
                TokenKind::CloseParen => {
                    depth = depth.saturating_sub(1);
                    tokens.push(self.bump());
                }
                TokenKind::Semicolon if depth == 0 => {
                    tokens.push(self.bump());
                    return Ok(Node::Statement { tokens });
                }
                TokenKind::OpenBrace if depth == 0 => break,
                TokenKind::CloseBrace if depth == 0 => {
                    return Ok(Node::Statement { tokens });
                }
                _ => tokens.push(self.bump()),
            }
        }
        let body = self.parse_block(Context::ClassBody)?;
        let mut trailer = Vec::new();
        if self.peek().is_some_and(|t| t.kind == TokenKind::Semicolon) {
            trailer.push(self.bump());
        }
        Ok(Node::Header {
            kind: HeaderKind::ClassDef,
            tokens,
            body: Box::new(body),
            trailer,
        })
    }

    /// The single body of a control header: a block, a lone `;` (null body),
    /// or one nested item. Comments before a `{` are handed back to the
    /// caller's header tokens; otherwise they lead the body item.
    fn parse_body_item(&mut self, ctx: Context) -> Result<(Vec<Token>, Node), ParseError> {
        let mut comments = Vec::new();
        while matches!(
            self.peek().map(|t| t.kind),
            Some(TokenKind::LineComment) | Some(TokenKind::BlockComment)
        ) {
            comments.push(self.bump());
        }
        match self.peek().map(|t| t.kind) {
            Some(TokenKind::OpenBrace) => {
                let block = self.parse_block(if ctx == Context::ClassBody {
                    Context::ClassBody
                } else {
                    Context::Other
                })?;
                Ok((comments, block))
            }
            Some(TokenKind::Semicolon) => {
                let mut tokens = comments;
                tokens.push(self.bump());
                Ok((Vec::new(), Node::Statement { tokens }))
            }
            None | Some(TokenKind::CloseBrace) => {
                Ok((Vec::new(), Node::Statement { tokens: comments }))
            }
            Some(TokenKind::PreprocessorLine) => {
                let token = self.bump();
                Ok((comments, Node::Preprocessor { token }))
            }
            _ => {
                let mut item = match self.peek().map(|t| t.kind) {
                    Some(TokenKind::Keyword) | Some(TokenKind::Identifier) => {
                        self.parse_item(Context::Other)?
                    }
                    _ => self.collect_statement(Vec::new(), Context::Other)?,
                };
                if !comments.is_empty() {
                    match &mut item {
                        Node::Statement { tokens }
                        | Node::Label { tokens, .. }
                        | Node::Header { tokens, .. } => {
                            comments.append(tokens);
                            *tokens = comments;
                        }
                        _ => {}
                    }
                }
                Ok((Vec::new(), item))
            }
        }
    }

    fn parse_block(&mut self, child_ctx: Context) -> Result<Node, ParseError> {
        let open = self.bump();
        debug_assert_eq!(open.kind, TokenKind::OpenBrace);
        let mut open_comments = Vec::new();
        while self.peek().is_some_and(|t| {
            matches!(t.kind, TokenKind::LineComment | TokenKind::BlockComment)
                && t.line == open.line
        }) {
            open_comments.push(self.bump());
        }
        let children = self.parse_nodes(child_ctx, Some(&open))?;
        let close = self.bump();
        debug_assert_eq!(close.kind, TokenKind::CloseBrace);
        Ok(Node::Block {
            open,
            open_comments,
            children,
            close,
            close_comments: Vec::new(),
        })
    }

    /// Consume a balanced `( ... )` group into `out` if one starts here.
    fn consume_paren_group(&mut self, out: &mut Vec<Token>) {
        if !self.peek().is_some_and(|t| t.kind == TokenKind::OpenParen) {
            return;
        }
        let mut depth = 0usize;
        loop {
            let tok = match self.peek() {
                None => return,
                Some(t) => t.clone(),
            };
            match tok.kind {
                TokenKind::OpenParen => {
                    depth += 1;
                    out.push(self.bump());
                }
                TokenKind::CloseParen => {
                    depth = depth.saturating_sub(1);
                    out.push(self.bump());
                    if depth == 0 {
                        return;
                    }
                }
                _ => {
                    out.push(self.bump());
                }
            }
        }
    }
}

fn is_construct_keyword(word: &str) -> bool {
    matches!(
        word,
        "if" | "else" | "while" | "for" | "do" | "switch" | "case" | "default" | "class" | "struct"
    )
}

/// A signature run: some identifier directly followed by `(`, balanced
/// parens, and a final `)`.
fn is_signature(run: &[Token]) -> bool {
    if run.last().map(|t| t.kind) != Some(TokenKind::CloseParen) {
        return false;
    }
    run.windows(2).any(|w| {
        w[0].kind == TokenKind::Identifier && w[1].kind == TokenKind::OpenParen
    })
}
