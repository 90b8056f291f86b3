//! Flat `key=value` configuration files.

use std::path::Path;

use crate::style::{builtin_style, FormatConfig, SimpleBodyPolicy, SwitchScheme};

/// Settings read from a config file; every field is optional so command-line
/// flags and style defaults can fill the rest.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConfigOverrides {
    pub style: Option<String>,
    pub indent_width: Option<u32>,
    pub use_tabs: Option<bool>,
    pub max_line_width: Option<u32>,
    pub simple_body: Option<SimpleBodyPolicy>,
    pub switch_scheme: Option<SwitchScheme>,
    pub null_body_comment: Option<bool>,
    pub do_while_cuddle: Option<bool>,
}

impl ConfigOverrides {
    pub fn apply(&self, cfg: &mut FormatConfig) {
        if let Some(w) = self.indent_width {
            cfg.indent_width = w;
        }
        if let Some(t) = self.use_tabs {
            cfg.use_tabs = t;
        }
        if let Some(w) = self.max_line_width {
            cfg.max_line_width = w;
        }
        if let Some(p) = self.simple_body {
            cfg.simple_body_policy = p;
        }
        if let Some(s) = self.switch_scheme {
            cfg.switch_scheme = s;
        }
        if let Some(b) = self.null_body_comment {
            cfg.null_body_comment = b;
        }
        if let Some(b) = self.do_while_cuddle {
            cfg.do_while_cuddle = b;
        }
    }
}

/// A config file problem, with the offending line when applicable.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: expected key=value, got '{text}'")]
    MalformedLine { line: u32, text: String },
    #[error("line {line}: unknown key '{key}'")]
    UnknownKey { line: u32, key: String },
    #[error("line {line}: invalid value '{value}' for {key}: {reason}")]
    InvalidValue {
        line: u32,
        key: String,
        value: String,
        reason: String,
    },
}

/// Parse config text: one `key=value` per line, `#` comments, blank lines
/// ignored. Keys: style, indent_size, use_tabs, line_width, simple_body,
/// switch, null_body_comment, do_while_cuddle.
pub fn parse_config(text: &str) -> Result<ConfigOverrides, ConfigError> {
    let mut out = ConfigOverrides::default();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i as u32 + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = match line.split_once('=') {
            Some((k, v)) => (k.trim(), v.trim()),
            None => {
                return Err(ConfigError::MalformedLine {
                    line: line_no,
                    text: line.to_string(),
                })
            }
        };
        let invalid = |reason: &str| ConfigError::InvalidValue {
            line: line_no,
            key: key.to_string(),
            value: value.to_string(),
            reason: reason.to_string(),
        };
        match key {
            "style" => {
                let spec = builtin_style(value).map_err(|e| invalid(&e.to_string()))?;
                out.style = Some(spec.name.to_string());
            }
            "indent_size" => {
                let n: u32 = value.parse().map_err(|_| invalid("expected a number"))?;
                if n == 0 {
                    return Err(invalid("must be at least 1"));
                }
                out.indent_width = Some(n);
            }
            "use_tabs" => out.use_tabs = Some(parse_bool(value).ok_or_else(|| invalid("expected true or false"))?),
            "line_width" => {
                let n: u32 = value.parse().map_err(|_| invalid("expected a number"))?;
                if n < 20 {
                    return Err(invalid("must be at least 20"));
                }
                out.max_line_width = Some(n);
            }
            "simple_body" => {
                out.simple_body = Some(match value {
                    "same-line" => SimpleBodyPolicy::SameLine,
                    "braced" => SimpleBodyPolicy::NextLineBraced,
                    _ => return Err(invalid("expected same-line or braced")),
                })
            }
            "switch" => {
                out.switch_scheme = Some(match value {
                    "aligned" => SwitchScheme::CasesAtSwitchColumn,
                    "indented" => SwitchScheme::CasesIndented,
                    _ => return Err(invalid("expected aligned or indented")),
                })
            }
            "null_body_comment" => {
                out.null_body_comment =
                    Some(parse_bool(value).ok_or_else(|| invalid("expected true or false"))?)
            }
            "do_while_cuddle" => {
                out.do_while_cuddle =
                    Some(parse_bool(value).ok_or_else(|| invalid("expected true or false"))?)
            }
            _ => {
                return Err(ConfigError::UnknownKey {
                    line: line_no,
                    key: key.to_string(),
                })
            }
        }
    }
    Ok(out)
}

fn parse_bool(value: &str) -> Option<bool> {
    match value {
        "true" => Some(true),
        "false" => Some(false),
        _ => None,
    }
}

/// Read and parse a config file.
pub fn load_config(path: &Path) -> Result<ConfigOverrides, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("{}: cannot read config: {}", path.display(), e))?;
    parse_config(&text).map_err(|e| format!("{}: {}", path.display(), e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_style_key() {
        let cfg = parse_config("style=knf\n").unwrap();
        assert_eq!(cfg.style.as_deref(), Some("knf"));
        assert_eq!(cfg.indent_width, None);
    }

    #[test]
    fn explicit_indent_overrides_style_defaults() {
        let overrides = parse_config("style=knf\nindent_size=8\n").unwrap();
        let style = builtin_style(overrides.style.as_deref().unwrap()).unwrap();
        let mut cfg = FormatConfig::for_style(&style);
        overrides.apply(&mut cfg);
        assert_eq!(cfg.indent_width, 8);
        assert!(cfg.use_tabs);
    }

    #[test]
    fn invalid_number_reports_line() {
        let err = parse_config("indent_size=zero\n").unwrap_err();
        assert!(matches!(err, ConfigError::InvalidValue { line: 1, .. }));
        let err = parse_config("style=kr\n\nindent_size=0\n").unwrap_err();
        assert!(matches!(err, ConfigError::InvalidValue { line: 3, .. }));
    }

    #[test]
    fn unknown_key_is_an_error() {
        let err = parse_config("# comment\ntabwidth=4\n").unwrap_err();
        assert_eq!(
            err,
            ConfigError::UnknownKey {
                line: 2,
                key: "tabwidth".to_string()
            }
        );
    }

    #[test]
    fn comments_and_blanks_ignored() {
        let cfg = parse_config("# a comment\n\nline_width=100\nswitch=aligned\nsimple_body=same-line\nuse_tabs=false\nnull_body_comment=false\ndo_while_cuddle=true\n").unwrap();
        assert_eq!(cfg.max_line_width, Some(100));
        assert_eq!(cfg.switch_scheme, Some(SwitchScheme::CasesAtSwitchColumn));
        assert_eq!(cfg.simple_body, Some(SimpleBodyPolicy::SameLine));
        assert_eq!(cfg.use_tabs, Some(false));
        assert_eq!(cfg.null_body_comment, Some(false));
        assert_eq!(cfg.do_while_cuddle, Some(true));
    }

    #[test]
    fn narrow_line_width_rejected() {
        let err = parse_config("line_width=10\n").unwrap_err();
        assert!(matches!(err, ConfigError::InvalidValue { line: 1, .. }));
    }

    #[test]
    fn missing_equals_sign() {
        let err = parse_config("style kr\n").unwrap_err();
        assert!(matches!(err, ConfigError::MalformedLine { line: 1, .. }));
    }
}
