//! Command-line front end: format, check, and detect over files,
//! directories, or standard input.
//!
//! Exit codes: 0 success (and a clean check), 1 check found deviations,
//! 2 lexer/parser/read error in some input (the rest are still processed),
//! 3 usage or configuration error.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, ValueEnum};

use crate::config::{load_config, ConfigOverrides};
use crate::detect::{check, detect_style};
use crate::render::format_source;
use crate::style::{builtin_style, FormatConfig, SimpleBodyPolicy, StyleSpec, SwitchScheme};

/// Source file extensions picked up when an input is a directory.
const SOURCE_EXTENSIONS: [&str; 5] = ["c", "h", "cc", "cpp", "hpp"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SimpleBodyArg {
    SameLine,
    Braced,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SwitchArg {
    Aligned,
    Indented,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportArg {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "indentor",
    about = "Re-indent C-like source into a named brace style, check conformance, or detect the style in use",
    disable_version_flag = true
)]
struct Args {
    /// Style to apply (kr, 1tbs, stroustrup, allman, knf, whitesmiths, gnu,
    /// horstmann, pico, banner, lisp, ratliff)
    #[arg(long, value_name = "NAME")]
    style: Option<String>,

    /// Indent width in columns
    #[arg(long, value_name = "N")]
    indent_size: Option<u32>,

    /// Indent with tabs
    #[arg(long, conflicts_with = "use_spaces")]
    use_tabs: bool,

    /// Indent with spaces
    #[arg(long)]
    use_spaces: bool,

    /// Maximum line width
    #[arg(long, value_name = "N")]
    line_width: Option<u32>,

    /// Layout for braceless single-statement bodies
    #[arg(long, value_name = "same-line|braced")]
    simple_body: Option<SimpleBodyArg>,

    /// Case label placement inside switch blocks
    #[arg(long, value_name = "aligned|indented")]
    switch: Option<SwitchArg>,

    /// Report deviations from the style instead of rewriting
    #[arg(long)]
    check: bool,

    /// Report which style each input most resembles
    #[arg(long)]
    detect: bool,

    /// Rewrite files in place (atomic per file)
    #[arg(long)]
    in_place: bool,

    /// Prefix every output line with its nesting level
    #[arg(long)]
    show_levels: bool,

    /// Report format for check/detect output
    #[arg(long, value_name = "text|json")]
    report: Option<ReportArg>,

    /// Read settings from a key=value file
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Files or directories; standard input when omitted or "-"
    inputs: Vec<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    Format,
    Check,
    Detect,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Input {
    Stdin,
    File(PathBuf),
}

impl Input {
    fn display_name(&self) -> String {
        match self {
            Input::Stdin => "<stdin>".to_string(),
            Input::File(path) => path.display().to_string(),
        }
    }
}

/// A validated run: what to do, on which inputs, with what settings.
#[derive(Debug)]
struct Invocation {
    mode: Mode,
    inputs: Vec<Input>,
    style: StyleSpec,
    config: FormatConfig,
    in_place: bool,
    report_json: bool,
}

/// Entry point used by `main`; returns the process exit code.
pub fn run(argv: Vec<String>) -> i32 {
    let mut stdout = std::io::stdout().lock();
    let mut stderr = std::io::stderr().lock();
    run_with(argv, &mut stdout, &mut stderr)
}

fn run_with(argv: Vec<String>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let args = match Args::try_parse_from(argv) {
        Ok(args) => args,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = write!(stdout, "{}", e);
            return 0;
        }
        Err(e) => {
            let _ = write!(stderr, "{}", e);
            return 3;
        }
    };
    let invocation = match build_invocation(args) {
        Ok(inv) => inv,
        Err(message) => {
            let _ = writeln!(stderr, "indentor: {}", message);
            return 3;
        }
    };
    execute(&invocation, stdout, stderr)
}

fn build_invocation(args: Args) -> Result<Invocation, String> {
    let mode = match (args.check, args.detect) {
        (true, true) => return Err("--check and --detect are mutually exclusive".to_string()),
        (true, false) => Mode::Check,
        (false, true) => Mode::Detect,
        (false, false) => Mode::Format,
    };
    if args.show_levels && mode == Mode::Check {
        return Err("--show-levels output is not checkable; drop one of the flags".to_string());
    }
    if args.in_place && mode != Mode::Format {
        return Err("--in-place only applies when formatting".to_string());
    }

    let file_overrides = match &args.config {
        Some(path) => load_config(path)?,
        None => ConfigOverrides::default(),
    };

    let style_name = args
        .style
        .clone()
        .or_else(|| file_overrides.style.clone())
        .unwrap_or_else(|| "kr".to_string());
    let style = builtin_style(&style_name).map_err(|e| e.to_string())?;

    // Precedence: command line > config file > style defaults > globals.
    let mut config = FormatConfig::for_style(&style);
    file_overrides.apply(&mut config);
    if let Some(n) = args.indent_size {
        if n == 0 {
            return Err("--indent-size must be at least 1".to_string());
        }
        config.indent_width = n;
    }
    if args.use_tabs {
        config.use_tabs = true;
    }
    if args.use_spaces {
        config.use_tabs = false;
    }
    if let Some(n) = args.line_width {
        if n < 20 {
            return Err("--line-width must be at least 20".to_string());
        }
        config.max_line_width = n;
    }
    if let Some(p) = args.simple_body {
        config.simple_body_policy = match p {
            SimpleBodyArg::SameLine => SimpleBodyPolicy::SameLine,
            SimpleBodyArg::Braced => SimpleBodyPolicy::NextLineBraced,
        };
    }
    if let Some(s) = args.switch {
        config.switch_scheme = match s {
            SwitchArg::Aligned => SwitchScheme::CasesAtSwitchColumn,
            SwitchArg::Indented => SwitchScheme::CasesIndented,
        };
    }
    config.annotate_levels = args.show_levels;

    let mut inputs = Vec::new();
    if args.inputs.is_empty() {
        inputs.push(Input::Stdin);
    } else {
        for path in &args.inputs {
            if path.as_os_str() == "-" {
                inputs.push(Input::Stdin);
            } else if path.is_dir() {
                collect_sources(path, &mut inputs);
            } else {
                inputs.push(Input::File(path.clone()));
            }
        }
    }
    if args.in_place && inputs.contains(&Input::Stdin) {
        return Err("--in-place requires file inputs, not standard input".to_string());
    }

    Ok(Invocation {
        mode,
        inputs,
        style,
        config,
        in_place: args.in_place,
        report_json: args.report == Some(ReportArg::Json),
    })
}

/// Recursively gather source files under a directory, in sorted order.
fn collect_sources(dir: &Path, out: &mut Vec<Input>) {
    let mut entries: Vec<PathBuf> = match std::fs::read_dir(dir) {
        Ok(iter) => iter.filter_map(|e| e.ok().map(|e| e.path())).collect(),
        Err(_) => return,
    };
    entries.sort();
    for path in entries {
        if path.is_dir() {
            collect_sources(&path, out);
        } else if path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|ext| SOURCE_EXTENSIONS.contains(&ext))
        {
            out.push(Input::File(path));
        }
    }
}

fn execute(inv: &Invocation, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let mut had_error = false;
    let mut had_deviation = false;

    for input in &inv.inputs {
        let name = input.display_name();
        let source = match read_input(input) {
            Ok(text) => text,
            Err(e) => {
                let _ = writeln!(stderr, "{}: {}", name, e);
                had_error = true;
                continue;
            }
        };
        match inv.mode {
            Mode::Format => match format_source(&source, &inv.style, &inv.config) {
                Ok(formatted) => {
                    if inv.in_place {
                        if let Input::File(path) = input {
                            if let Err(e) = write_atomic(path, &formatted) {
                                let _ = writeln!(stderr, "{}: {}", name, e);
                                had_error = true;
                            }
                        }
                    } else {
                        let _ = stdout.write_all(formatted.as_bytes());
                    }
                }
                Err(e) => {
                    let (line, col) = e.position();
                    let _ = writeln!(stderr, "{}:{}:{}: {}", name, line, col, strip_position(&e));
                    had_error = true;
                }
            },
            Mode::Check => match check(&source, &inv.style, &inv.config) {
                Ok(deviations) => {
                    if !deviations.is_empty() {
                        had_deviation = true;
                        if inv.report_json {
                            let json = serde_json::json!({
                                "file": name,
                                "scores": {},
                                "best": "",
                                "deviations": deviations,
                            });
                            let _ = writeln!(stdout, "{}", json);
                        } else {
                            let _ = writeln!(
                                stdout,
                                "{}: {} line(s) deviate from style {}",
                                name,
                                deviations.len(),
                                inv.style.name
                            );
                            for d in &deviations {
                                let _ = writeln!(
                                    stdout,
                                    "  line {}: expected {:?}, found {:?}",
                                    d.line, d.expected, d.found
                                );
                            }
                        }
                    }
                }
                Err(e) => {
                    let (line, col) = e.position();
                    let _ = writeln!(stderr, "{}:{}:{}: {}", name, line, col, strip_position(&e));
                    had_error = true;
                }
            },
            Mode::Detect => match detect_style(&source) {
                Ok(report) => {
                    if inv.report_json {
                        let _ = writeln!(stdout, "{}", report.to_json(&name));
                    } else {
                        let _ = write!(stdout, "{}", report.render_text(&name));
                    }
                }
                Err(e) => {
                    let (line, col) = e.position();
                    let _ = writeln!(stderr, "{}:{}:{}: {}", name, line, col, strip_position(&e));
                    had_error = true;
                }
            },
        }
    }

    if had_error {
        2
    } else if had_deviation {
        1
    } else {
        0
    }
}

/// Error Display already carries "line:col: "; diagnostics print their own
/// position prefix, so drop the duplicate.
fn strip_position(e: &crate::render::FormatError) -> String {
    let text = e.to_string();
    match text.split_once(": ") {
        Some((prefix, rest)) if prefix.chars().all(|c| c.is_ascii_digit() || c == ':') => {
            rest.to_string()
        }
        _ => text,
    }
}

fn read_input(input: &Input) -> std::io::Result<String> {
    match input {
        Input::Stdin => {
            let mut buf = String::new();
            std::io::stdin().lock().read_to_string(&mut buf)?;
            Ok(buf)
        }
        Input::File(path) => std::fs::read_to_string(path),
    }
}

/// Write via a sibling temporary file and rename, so a failure mid-write
/// leaves the original intact.
fn write_atomic(path: &Path, content: &str) -> std::io::Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(content.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn argv(args: &[&str]) -> Vec<String> {
        std::iter::once("indentor")
            .chain(args.iter().copied())
            .map(String::from)
            .collect()
    }

    fn parse(args: &[&str]) -> Result<Invocation, String> {
        build_invocation(Args::try_parse_from(argv(args)).map_err(|e| e.to_string())?)
    }

    #[test]
    fn default_style_is_kr() {
        let inv = parse(&["x.c"]).unwrap();
        assert_eq!(inv.style.name, "kr");
        assert_eq!(inv.config.indent_width, 4);
        assert_eq!(inv.mode, Mode::Format);
    }

    #[test]
    fn style_defaults_feed_config() {
        let inv = parse(&["--style=knf", "x.c"]).unwrap();
        assert_eq!(inv.config.indent_width, 8);
        assert!(inv.config.use_tabs);
        let inv = parse(&["--style=knf", "--indent-size=4", "--use-spaces", "x.c"]).unwrap();
        assert_eq!(inv.config.indent_width, 4);
        assert!(!inv.config.use_tabs);
    }

    #[test]
    fn unknown_style_is_usage_error() {
        let err = parse(&["--style=nope", "x.c"]).unwrap_err();
        assert!(err.contains("unknown style"));
        for name in crate::style::STYLE_NAMES {
            assert!(err.contains(name));
        }
    }

    #[test]
    fn mode_conflicts_rejected() {
        assert!(parse(&["--check", "--detect", "x.c"]).is_err());
        assert!(parse(&["--check", "--show-levels", "x.c"]).is_err());
        assert!(parse(&["--in-place", "--check", "x.c"]).is_err());
        assert!(parse(&["--in-place"]).is_err());
        assert!(parse(&["--in-place", "-"]).is_err());
    }

    #[test]
    fn stdin_when_no_inputs() {
        let inv = parse(&[]).unwrap();
        assert_eq!(inv.inputs, vec![Input::Stdin]);
        let inv = parse(&["-"]).unwrap();
        assert_eq!(inv.inputs, vec![Input::Stdin]);
    }

    #[test]
    fn detect_ignores_style() {
        let inv = parse(&["--detect", "--style=gnu", "x.c"]).unwrap();
        assert_eq!(inv.mode, Mode::Detect);
    }

    #[test]
    fn double_dash_ends_flags() {
        let inv = parse(&["--", "--style=gnu"]).unwrap();
        assert_eq!(
            inv.inputs,
            vec![Input::File(PathBuf::from("--style=gnu"))]
        );
    }

    #[test]
    fn config_file_precedence() {
        let dir = tempfile::tempdir().unwrap();
        let cfg_path = dir.path().join("fmt.conf");
        std::fs::write(&cfg_path, "style=allman\nindent_size=2\n").unwrap();
        let cfg_arg = format!("--config={}", cfg_path.display());
        let inv = parse(&[&cfg_arg, "x.c"]).unwrap();
        assert_eq!(inv.style.name, "allman");
        assert_eq!(inv.config.indent_width, 2);
        // Command line wins over the file.
        let inv = parse(&[&cfg_arg, "--style=gnu", "--indent-size=3", "x.c"]).unwrap();
        assert_eq!(inv.style.name, "gnu");
        assert_eq!(inv.config.indent_width, 3);
    }

    #[test]
    fn config_file_errors_are_usage_errors() {
        let dir = tempfile::tempdir().unwrap();
        let cfg_path = dir.path().join("fmt.conf");
        std::fs::write(&cfg_path, "indent_size=zero\n").unwrap();
        let err = parse(&[&format!("--config={}", cfg_path.display()), "x.c"]).unwrap_err();
        assert!(err.contains("line 1"), "{}", err);
    }

    #[test]
    fn directory_inputs_recurse_sorted() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::create_dir(dir.path().join("sub")).unwrap();
        std::fs::write(dir.path().join("b.c"), "x;").unwrap();
        std::fs::write(dir.path().join("a.cpp"), "x;").unwrap();
        std::fs::write(dir.path().join("notes.txt"), "skip").unwrap();
        std::fs::write(dir.path().join("sub/z.h"), "x;").unwrap();
        let inv = parse(&[dir.path().to_str().unwrap()]).unwrap();
        let names: Vec<String> = inv
            .inputs
            .iter()
            .map(|i| match i {
                Input::File(p) => p.file_name().unwrap().to_string_lossy().to_string(),
                Input::Stdin => "-".to_string(),
            })
            .collect();
        assert_eq!(names, vec!["a.cpp", "b.c", "z.h"]);
    }
}
