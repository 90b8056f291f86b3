//! Re-indent C-like source into any of twelve named brace styles, check a
//! file against a style, or detect which style a file follows.
//!
//! The pipeline is three pure stages:
//!
//! 1. [`lexer`] — lossless tokenization; comments, literals, and
//!    preprocessor lines are opaque single tokens.
//! 2. [`tree`] — block structure recovery with a [`tree::flatten`] inverse
//!    that never loses or reorders a token.
//! 3. [`render`] — layout per a [`style::StyleSpec`] and
//!    [`style::FormatConfig`].
//!
//! [`detect`] runs the styles in reverse as recognizers, and [`cli`] wires
//! everything to the `indentor` binary.
//!
//! ```
//! use indentor::{builtin_style, format_source, FormatConfig};
//!
//! let style = builtin_style("allman").unwrap();
//! let config = FormatConfig::for_style(&style);
//! let out = format_source("while (x == y) { f(); }", &style, &config).unwrap();
//! assert_eq!(out, "while (x == y)\n{\n    f();\n}\n");
//! ```
//!
//! All of the library is safe to call concurrently on distinct inputs; there
//! is no shared mutable state.

pub mod cli;
pub mod config;
pub mod detect;
pub mod lexer;
pub mod render;
pub mod style;
pub mod tree;

#[doc(hidden)]
pub mod testutil;

pub use config::{load_config, parse_config, ConfigError, ConfigOverrides};
pub use detect::{check, detect_style, observe, Best, Deviation, Observation, StyleReport};
pub use lexer::{significant, tokenize, LexError, Token, TokenKind, TokenStream};
pub use render::{format_source, render, respace, wrap_parameter_list, FormatError};
pub use style::{
    builtin_style, BodyIndent, BracePlacement, CloseBracePlacement, FormatConfig,
    SimpleBodyPolicy, StyleSpec, SwitchScheme, UnknownStyle, STYLE_NAMES,
};
pub use tree::{depth_map, flatten, parse_blocks, visit_levels, BlockTree, HeaderKind, Node, ParseError};
