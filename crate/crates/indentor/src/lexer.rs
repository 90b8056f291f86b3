//! Lexical analysis for C-like source.
//!
//! The tokenizer is lossless: every byte of the input is either part of a
//! token's text or inter-token whitespace that can be recovered from token
//! positions. Comments, string/char literals, and preprocessor lines are
//! single opaque tokens, so braces inside them never reach the block parser.

use std::fmt;

/// Classification of a lexical unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Identifier,
    Keyword,
    Number,
    StringLiteral,
    CharLiteral,
    Punct,
    OpenBrace,
    CloseBrace,
    OpenParen,
    CloseParen,
    Semicolon,
    Colon,
    Comma,
    LineComment,
    BlockComment,
    PreprocessorLine,
    Newline,
}

/// A single token with its exact source text and 1-based position.
///
/// `column` counts bytes from the start of the line, so positions remain
/// exact for 8-bit-clean input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub line: u32,
    pub column: u32,
}

impl Token {
    pub fn new(kind: TokenKind, text: impl Into<String>, line: u32, column: u32) -> Self {
        Token {
            kind,
            text: text.into(),
            line,
            column,
        }
    }

    /// Line on which the token's text ends (differs from `line` only for
    /// block comments and continued preprocessor lines).
    pub fn end_line(&self) -> u32 {
        self.line + self.text.bytes().filter(|&b| b == b'\n').count() as u32
    }
}

/// An ordered token sequence together with a display name for diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenStream {
    pub tokens: Vec<Token>,
    pub source_name: String,
}

/// Words treated as keywords; everything else that looks like a word is an
/// `Identifier`.
pub const KEYWORDS: &[&str] = &[
    "if", "else", "while", "for", "do", "switch", "case", "default", "class", "struct", "return",
    "break", "continue",
];

/// Multi-character operators lexed as single `Punct` tokens, longest first.
const MULTI_PUNCT: &[&str] = &[
    "<<=", ">>=", "...", "==", "!=", "<=", ">=", "&&", "||", "++", "--", "+=", "-=", "*=", "/=",
    "%=", "&=", "|=", "^=", "->", "::", "<<", ">>",
];

/// Tokenization failure, positioned at the opening delimiter.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LexError {
    #[error("{line}:{column}: unterminated string or character literal")]
    UnterminatedString { line: u32, column: u32 },
    #[error("{line}:{column}: unterminated block comment")]
    UnterminatedComment { line: u32, column: u32 },
}

impl LexError {
    pub fn position(&self) -> (u32, u32) {
        match *self {
            LexError::UnterminatedString { line, column } => (line, column),
            LexError::UnterminatedComment { line, column } => (line, column),
        }
    }
}

struct Scanner<'a> {
    src: &'a [u8],
    pos: usize,
    line: u32,
    column: u32,
    at_line_start: bool,
}

impl<'a> Scanner<'a> {
    fn new(src: &'a str) -> Self {
        Scanner {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            column: 1,
            at_line_start: true,
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<u8> {
        self.src.get(self.pos + offset).copied()
    }

    fn bump(&mut self) -> u8 {
        let b = self.src[self.pos];
        self.pos += 1;
        if b == b'\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        b
    }

    fn starts_with(&self, s: &str) -> bool {
        self.src[self.pos..].starts_with(s.as_bytes())
    }
}

/// Convert source text into a lossless token stream.
pub fn tokenize(source: &str, source_name: &str) -> Result<TokenStream, LexError> {
    let mut sc = Scanner::new(source);
    let mut tokens = Vec::new();

    while let Some(b) = sc.peek() {
        let start = sc.pos;
        let line = sc.line;
        let column = sc.column;

        match b {
            b'\n' => {
                sc.bump();
                tokens.push(Token::new(TokenKind::Newline, "\n", line, column));
                sc.at_line_start = true;
                continue;
            }
            b'\r' if sc.peek_at(1) == Some(b'\n') => {
                sc.bump();
                sc.bump();
                tokens.push(Token::new(TokenKind::Newline, "\r\n", line, column));
                sc.at_line_start = true;
                continue;
            }
            b' ' | b'\t' | b'\r' | b'\x0b' | b'\x0c' => {
                sc.bump();
                continue;
            }
            b'#' if sc.at_line_start => {
                scan_preprocessor(&mut sc);
                tokens.push(Token::new(
                    TokenKind::PreprocessorLine,
                    text(source, start, sc.pos),
                    line,
                    column,
                ));
                sc.at_line_start = false;
                continue;
            }
            _ => {}
        }
        sc.at_line_start = false;

        let kind = match b {
            b'"' | b'\'' => {
                scan_quoted(&mut sc, b)?;
                if b == b'"' {
                    TokenKind::StringLiteral
                } else {
                    TokenKind::CharLiteral
                }
            }
            b'/' if sc.peek_at(1) == Some(b'/') => {
                while let Some(c) = sc.peek() {
                    if c == b'\n' || (c == b'\r' && sc.peek_at(1) == Some(b'\n')) {
                        break;
                    }
                    sc.bump();
                }
                TokenKind::LineComment
            }
            b'/' if sc.peek_at(1) == Some(b'*') => {
                sc.bump();
                sc.bump();
                loop {
                    match sc.peek() {
                        None => return Err(LexError::UnterminatedComment { line, column }),
                        Some(b'*') if sc.peek_at(1) == Some(b'/') => {
                            sc.bump();
                            sc.bump();
                            break;
                        }
                        Some(_) => {
                            sc.bump();
                        }
                    }
                }
                TokenKind::BlockComment
            }
            b if is_ident_start(b) => {
                while sc.peek().is_some_and(is_ident_continue) {
                    sc.bump();
                }
                if KEYWORDS.contains(&text(source, start, sc.pos)) {
                    TokenKind::Keyword
                } else {
                    TokenKind::Identifier
                }
            }
            b if b.is_ascii_digit() => {
                scan_number(&mut sc);
                TokenKind::Number
            }
            _ => scan_punct(&mut sc),
        };

        tokens.push(Token::new(kind, text(source, start, sc.pos), line, column));
    }

    Ok(TokenStream {
        tokens,
        source_name: source_name.to_string(),
    })
}

/// Drop `Newline` tokens, keeping everything else (comments and preprocessor
/// lines are significant to the formatter).
pub fn significant(ts: &TokenStream) -> TokenStream {
    TokenStream {
        tokens: ts
            .tokens
            .iter()
            .filter(|t| t.kind != TokenKind::Newline)
            .cloned()
            .collect(),
        source_name: ts.source_name.clone(),
    }
}

fn text(source: &str, start: usize, end: usize) -> &str {
    &source[start..end]
}

fn is_ident_start(b: u8) -> bool {
    b.is_ascii_alphabetic() || b == b'_'
}

fn is_ident_continue(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_'
}

fn scan_preprocessor(sc: &mut Scanner) {
    // Consume to end of line; a trailing backslash continues the directive
    // onto the next line, newline included in the token text.
    loop {
        match sc.peek() {
            None => break,
            Some(b'\n') => {
                if ends_with_continuation(sc) {
                    sc.bump();
                } else {
                    break;
                }
            }
            Some(b'\r') if sc.peek_at(1) == Some(b'\n') => {
                if ends_with_continuation(sc) {
                    sc.bump();
                    sc.bump();
                } else {
                    break;
                }
            }
            Some(_) => {
                sc.bump();
            }
        }
    }
}

fn ends_with_continuation(sc: &Scanner) -> bool {
    // The byte(s) just before the newline, ignoring a CR, must be a backslash.
    let mut i = sc.pos;
    if i > 0 && sc.src[i - 1] == b'\r' {
        i -= 1;
    }
    i > 0 && sc.src[i - 1] == b'\\'
}

fn scan_quoted(sc: &mut Scanner, quote: u8) -> Result<(), LexError> {
    let line = sc.line;
    let column = sc.column;
    sc.bump();
    loop {
        match sc.peek() {
            None | Some(b'\n') => return Err(LexError::UnterminatedString { line, column }),
            Some(b'\\') => {
                sc.bump();
                if sc.peek().is_some() {
                    sc.bump();
                }
            }
            Some(c) => {
                sc.bump();
                if c == quote {
                    return Ok(());
                }
            }
        }
    }
}

fn scan_number(sc: &mut Scanner) {
    // Preprocessing-number shape: digits, letters, underscores, dots, and
    // exponent signs directly after e/E/p/P. Covers 0.001, 0x1f, 1e-3, 10UL.
    sc.bump();
    loop {
        match sc.peek() {
            Some(b) if is_ident_continue(b) || b == b'.' => {
                let exp = matches!(b, b'e' | b'E' | b'p' | b'P');
                sc.bump();
                if exp && matches!(sc.peek(), Some(b'+') | Some(b'-')) {
                    sc.bump();
                }
            }
            _ => break,
        }
    }
}

fn scan_punct(sc: &mut Scanner) -> TokenKind {
    for op in MULTI_PUNCT {
        if sc.starts_with(op) {
            for _ in 0..op.len() {
                sc.bump();
            }
            return TokenKind::Punct;
        }
    }
    let b = sc.bump();
    match b {
        b'{' => TokenKind::OpenBrace,
        b'}' => TokenKind::CloseBrace,
        b'(' => TokenKind::OpenParen,
        b')' => TokenKind::CloseParen,
        b';' => TokenKind::Semicolon,
        b':' => TokenKind::Colon,
        b',' => TokenKind::Comma,
        _ => {
            // Keep multi-byte UTF-8 characters whole so token texts stay
            // valid string slices.
            if b >= 0x80 {
                while sc.peek().is_some_and(|c| c & 0xc0 == 0x80) {
                    sc.bump();
                }
            }
            TokenKind::Punct
        }
    }
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            TokenKind::Identifier => "identifier",
            TokenKind::Keyword => "keyword",
            TokenKind::Number => "number",
            TokenKind::StringLiteral => "string literal",
            TokenKind::CharLiteral => "character literal",
            TokenKind::Punct => "punctuator",
            TokenKind::OpenBrace => "'{'",
            TokenKind::CloseBrace => "'}'",
            TokenKind::OpenParen => "'('",
            TokenKind::CloseParen => "')'",
            TokenKind::Semicolon => "';'",
            TokenKind::Colon => "':'",
            TokenKind::Comma => "','",
            TokenKind::LineComment => "line comment",
            TokenKind::BlockComment => "block comment",
            TokenKind::PreprocessorLine => "preprocessor line",
            TokenKind::Newline => "newline",
        };
        f.write_str(name)
    }
}
