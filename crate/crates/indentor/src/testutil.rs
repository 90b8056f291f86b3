//! Independent verification helpers used by the test suites. These
//! deliberately avoid the lexer/parser code paths they check.

use crate::lexer::TokenStream;

/// Assert the lossless-tokenization contract: every token's text sits at its
/// recorded position in the source, and every byte not covered by a token is
/// inter-token whitespace.
pub fn assert_lossless(source: &str, ts: &TokenStream) {
    let bytes = source.as_bytes();
    let mut line_starts = vec![0usize];
    for (i, &b) in bytes.iter().enumerate() {
        if b == b'\n' {
            line_starts.push(i + 1);
        }
    }
    let mut covered = vec![false; bytes.len()];
    for tok in &ts.tokens {
        let line_start = *line_starts
            .get(tok.line as usize - 1)
            .unwrap_or_else(|| panic!("token line {} out of range", tok.line));
        let offset = line_start + tok.column as usize - 1;
        let end = offset + tok.text.len();
        assert!(
            end <= bytes.len() && source[offset..end] == tok.text,
            "token {:?} not found at {}:{}",
            tok.text,
            tok.line,
            tok.column
        );
        for slot in &mut covered[offset..end] {
            assert!(!*slot, "overlapping tokens at byte {}", offset);
            *slot = true;
        }
    }
    for (i, &b) in bytes.iter().enumerate() {
        if !covered[i] {
            assert!(
                matches!(b, b' ' | b'\t' | b'\r' | b'\x0b' | b'\x0c'),
                "byte {:?} at offset {} is not part of any token",
                b as char,
                i
            );
        }
    }
}

/// Brute-force scan counting `{` bytes outside string/char literals,
/// comments, and preprocessor lines: the opacity oracle for the lexer.
pub fn count_structural_open_braces(source: &str) -> usize {
    #[derive(PartialEq)]
    enum State {
        Code,
        LineStart,
        Str,
        Chr,
        LineComment,
        BlockComment,
        Preprocessor,
    }
    let mut state = State::LineStart;
    let mut count = 0usize;
    let bytes = source.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match state {
            State::LineStart | State::Code => {
                let at_line_start = state == State::LineStart;
                state = State::Code;
                match b {
                    b'#' if at_line_start => state = State::Preprocessor,
                    b'{' => count += 1,
                    b'"' => state = State::Str,
                    b'\'' => state = State::Chr,
                    b'/' if bytes.get(i + 1) == Some(&b'/') => {
                        state = State::LineComment;
                        i += 1;
                    }
                    b'/' if bytes.get(i + 1) == Some(&b'*') => {
                        state = State::BlockComment;
                        i += 1;
                    }
                    b'\n' => state = State::LineStart,
                    b' ' | b'\t' | b'\r' if at_line_start => state = State::LineStart,
                    _ => {}
                }
            }
            State::Str => match b {
                b'\\' => i += 1,
                b'"' | b'\n' => state = State::Code,
                _ => {}
            },
            State::Chr => match b {
                b'\\' => i += 1,
                b'\'' | b'\n' => state = State::Code,
                _ => {}
            },
            State::LineComment => {
                if b == b'\n' {
                    state = State::LineStart;
                }
            }
            State::BlockComment => {
                if b == b'*' && bytes.get(i + 1) == Some(&b'/') {
                    state = State::Code;
                    i += 1;
                }
            }
            State::Preprocessor => {
                if b == b'\n' {
                    let continued = i > 0
                        && (bytes[i - 1] == b'\\'
                            || (bytes[i - 1] == b'\r' && i > 1 && bytes[i - 2] == b'\\'));
                    if !continued {
                        state = State::LineStart;
                    }
                }
            }
        }
        i += 1;
    }
    count
}
