//! The built-in indentation styles and user-tunable formatting knobs.

/// Where a block's opening brace goes relative to its header.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BracePlacement {
    /// The brace ends the header line.
    SameLine,
    /// Own line, at the header's column.
    NextLineHeaderColumn,
    /// Own line, `brace_extra_indent` units past the header's column.
    NextLineIndented,
}

/// Where a block's closing brace goes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CloseBracePlacement {
    /// Column of the header's first token.
    HeaderColumn,
    /// Same column as the (indented) opening brace.
    BraceColumn,
    /// The body's indentation column.
    BodyColumn,
    /// Appended to the last statement's line.
    CuddleLastStatement,
}

/// What the body's indentation is measured from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BodyIndent {
    /// One indent unit past the header column.
    FromHeader,
    /// The given number of units past the opening brace's column.
    FromBrace(u32),
}

/// The parameter vector distinguishing the built-in styles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StyleSpec {
    pub name: &'static str,
    pub function_brace: BracePlacement,
    pub control_brace: BracePlacement,
    pub class_brace: BracePlacement,
    /// Indent units applied by `NextLineIndented`.
    pub brace_extra_indent: u32,
    pub body_indent: BodyIndent,
    pub close_brace: CloseBracePlacement,
    /// First body statement shares the opening brace's line, and the body
    /// aligns two columns past the brace (under the `{ ` prefix).
    pub statement_on_open_brace_line: bool,
    /// Functions with at most one statement render on a single line when
    /// they fit.
    pub short_function_one_line: bool,
    /// Emit a space between a name and its `(`.
    pub space_before_call_paren: bool,
    pub default_indent_width: u32,
    pub default_use_tabs: bool,
}

impl StyleSpec {
    pub fn brace_for(&self, kind: crate::tree::HeaderKind) -> BracePlacement {
        use crate::tree::HeaderKind::*;
        match kind {
            FunctionDef => self.function_brace,
            ClassDef => self.class_brace,
            _ => self.control_brace,
        }
    }
}

/// The valid style names, in the order they are documented.
pub const STYLE_NAMES: [&str; 12] = [
    "kr",
    "1tbs",
    "stroustrup",
    "allman",
    "knf",
    "whitesmiths",
    "gnu",
    "horstmann",
    "pico",
    "banner",
    "lisp",
    "ratliff",
];

/// The requested style name is not one of [`STYLE_NAMES`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown style '{name}' (valid styles: {})", STYLE_NAMES.join(", "))]
pub struct UnknownStyle {
    pub name: String,
}

/// Look up a built-in style by (case-insensitive) name.
pub fn builtin_style(name: &str) -> Result<StyleSpec, UnknownStyle> {
    let base = StyleSpec {
        name: "",
        function_brace: BracePlacement::NextLineHeaderColumn,
        control_brace: BracePlacement::SameLine,
        class_brace: BracePlacement::NextLineHeaderColumn,
        brace_extra_indent: 0,
        body_indent: BodyIndent::FromHeader,
        close_brace: CloseBracePlacement::HeaderColumn,
        statement_on_open_brace_line: false,
        short_function_one_line: false,
        space_before_call_paren: false,
        default_indent_width: 4,
        default_use_tabs: false,
    };
    let spec = match name.to_ascii_lowercase().as_str() {
        // Functions open on the next line at the header column; control
        // braces cuddle; everything closes at the header column.
        "kr" => StyleSpec { name: "kr", ..base },
        "1tbs" => StyleSpec {
            name: "1tbs",
            function_brace: BracePlacement::SameLine,
            class_brace: BracePlacement::SameLine,
            ..base
        },
        "stroustrup" => StyleSpec {
            name: "stroustrup",
            class_brace: BracePlacement::SameLine,
            short_function_one_line: true,
            ..base
        },
        "allman" => StyleSpec {
            name: "allman",
            control_brace: BracePlacement::NextLineHeaderColumn,
            ..base
        },
        "knf" => StyleSpec {
            name: "knf",
            default_indent_width: 8,
            default_use_tabs: true,
            ..base
        },
        "whitesmiths" => StyleSpec {
            name: "whitesmiths",
            function_brace: BracePlacement::NextLineIndented,
            control_brace: BracePlacement::NextLineIndented,
            class_brace: BracePlacement::NextLineIndented,
            brace_extra_indent: 1,
            body_indent: BodyIndent::FromBrace(0),
            close_brace: CloseBracePlacement::BraceColumn,
            ..base
        },
        "gnu" => StyleSpec {
            name: "gnu",
            control_brace: BracePlacement::NextLineIndented,
            class_brace: BracePlacement::NextLineIndented,
            brace_extra_indent: 1,
            body_indent: BodyIndent::FromBrace(1),
            close_brace: CloseBracePlacement::BraceColumn,
            space_before_call_paren: true,
            default_indent_width: 2,
            ..base
        },
        "horstmann" => StyleSpec {
            name: "horstmann",
            control_brace: BracePlacement::NextLineHeaderColumn,
            statement_on_open_brace_line: true,
            ..base
        },
        "pico" => StyleSpec {
            name: "pico",
            control_brace: BracePlacement::NextLineHeaderColumn,
            close_brace: CloseBracePlacement::CuddleLastStatement,
            statement_on_open_brace_line: true,
            ..base
        },
        "banner" => StyleSpec {
            name: "banner",
            function_brace: BracePlacement::SameLine,
            class_brace: BracePlacement::SameLine,
            default_indent_width: 2,
            ..base
        },
        "lisp" => StyleSpec {
            name: "lisp",
            function_brace: BracePlacement::SameLine,
            class_brace: BracePlacement::SameLine,
            close_brace: CloseBracePlacement::CuddleLastStatement,
            ..base
        },
        "ratliff" => StyleSpec {
            name: "ratliff",
            function_brace: BracePlacement::SameLine,
            class_brace: BracePlacement::SameLine,
            close_brace: CloseBracePlacement::BodyColumn,
            ..base
        },
        _ => {
            return Err(UnknownStyle {
                name: name.to_string(),
            })
        }
    };
    Ok(spec)
}

/// How a braceless single-statement body is laid out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SimpleBodyPolicy {
    /// Keep it on the header's line: `if (count < 0) count = 0;`.
    SameLine,
    /// Indent it on the next line; existing braces are kept.
    #[default]
    NextLineBraced,
}

/// Where case labels sit inside a switch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SwitchScheme {
    /// Labels align with the `switch` keyword.
    CasesAtSwitchColumn,
    /// Labels one unit in from the switch, statements one unit further.
    #[default]
    CasesIndented,
}

/// User-tunable formatting knobs. Style defaults supply `indent_width` and
/// `use_tabs` unless the user sets them explicitly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatConfig {
    pub indent_width: u32,
    pub use_tabs: bool,
    pub max_line_width: u32,
    pub simple_body_policy: SimpleBodyPolicy,
    pub switch_scheme: SwitchScheme,
    pub null_body_comment: bool,
    pub do_while_cuddle: bool,
    pub annotate_levels: bool,
}

impl Default for FormatConfig {
    fn default() -> Self {
        FormatConfig {
            indent_width: 4,
            use_tabs: false,
            max_line_width: 79,
            simple_body_policy: SimpleBodyPolicy::default(),
            switch_scheme: SwitchScheme::default(),
            null_body_comment: true,
            do_while_cuddle: true,
            annotate_levels: false,
        }
    }
}

impl FormatConfig {
    /// The defaults with `indent_width`/`use_tabs` taken from a style.
    pub fn for_style(style: &StyleSpec) -> Self {
        FormatConfig {
            indent_width: style.default_indent_width,
            use_tabs: style.default_use_tabs,
            ..FormatConfig::default()
        }
    }
}
