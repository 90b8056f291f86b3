//! The golden sample corpus and structural comparison helpers shared by the
//! integration suites.
//!
//! Twelve samples are the canonical rendering of their own style; six more
//! exercise per-construct rules. Sample content keeps to the C-like grammar
//! this tool accepts: constructor paren-initializers rather than
//! brace-initializers, call statements, balanced braces.

#![allow(dead_code)]

use indentor::{builtin_style, tokenize, significant, FormatConfig, StyleSpec, Token, TokenKind};

pub struct Figure {
    pub name: &'static str,
    /// The style whose canonical layout this sample shows, if any.
    pub style: Option<&'static str>,
    pub text: &'static str,
}

pub const KR: &str = "\
int main(int argc, char *argv[])
{
    ...
    while (x == y) {
        some();
        some_else();
        if (some_error) {
            do_correct();
        } else
            continue_as_usual();
    }
}
";

pub const OTBS: &str = "\
if (x < 0) {
    puts(\"Negative\");
    negative(x);
} else {
    puts(\"Non-negative\");
    nonnegative(x);
}
";

pub const STROUSTRUP: &str = "\
class Sample {
public:
    Sample(int s) : elemt(new double[s]), sz(s) { }
    double& op(int i) { return elemt[i]; }
};
";

pub const ALLMAN: &str = "\
while (x == y)
{
    Do_something();
    Do_somethingelse();
}
";

pub const KNF: &str = "\
while (x == y) {
\tDo_something();
\tDo_somethingelse();
}
";

pub const WHITESMITHS: &str = "\
while (x == y)
    {
    Do_something();
    Do_somethingelse();
    }
";

pub const GNU: &str = "\
combine (char *str1, char *str2)
{
  while (x == y)
    {
      Do_something ();
      Do_somethingelse ();
    }
  Do_final ();
}
";

pub const HORSTMANN: &str = "\
if (x == y)
{ Do_something();
  Do_somethingelse();
  //...
  if (y < 0)
  { printf(\"Negative\");
    negative(y);
  }
  else
  { printf(\"Non-negative\");
    nonnegative(x);
  }
}
";

pub const PICO: &str = "\
stuff(n)
{ x = 3 * n;
  y = doStuff(x);
  return y + x; }
";

pub const BANNER: &str = "\
Sample1() {
  do_something();
  do_somemorething();
}
Sample2() {
  etc();
}
";

pub const LISP: &str = "\
for (i = 0; i < 10; i++) {
    if (i % 2 == 0) {
        doSomething (i); }
    else {
        doSomethingElse (i); } }
";

pub const RATLIFF: &str = "\
for (i = 0; i < 10; i++) {
    if (i % 2 == 0) {
        doSomething(i);
        }
    else {
        doSomethingElse(i);
        }
    }
";

pub const PARAM_DECL: &str = "\
int Index_search (struct collection      list[],
                  int                   value_first_index,
                  int                   value_last_index,
                  key_type               value_target      );
";

pub const IF_ELSE_SIMPLE: &str = "\
if (temperature < 55)
    printf(\"It could be warmer...\\n\");
else
    printf(\"It could be colder...\\n\");
";

pub const SWITCH: &str = "\
switch(ch) {
    case ' ': printf(\"space.\\n\");
              break;
    case 'a':
    case 'e':
    case 'i':
    case 'o':
    case 'u': printf(\"a vowel.\\n\");
              break;
    default : printf(\" something else.\\n\");
}
";

pub const NULL_BODY: &str = "\
for (i=0; (i < Length) && (list[i] != M_SCORE); i++)
    /* null body */ ;
if (i >= Length)
    printf(\"Sorry; %d was not found.\\n\",M_SCORE);
";

pub const DO_WHILE: &str = "\
i = 0;
do {
    printf(\"Element %d is %d.\\n\",i,list[i]);
    i++;
} while (i < LIST_SIZE);
";

pub const LEVELS: &str = "\
int main (void)
{
    int    k;
    float  sum = 0, thousandth = 0.001;
    for (k=1; k<=1000; k++) {
        sum += thousandth;
        if (k% 100 == 0)
            printf(\"After %4d iterations, sum = %.10f\\n\",k,sum);
    }
}
";

/// The full corpus: twelve style samples plus six construct samples.
pub const FIGURES: [Figure; 18] = [
    Figure { name: "kr", style: Some("kr"), text: KR },
    Figure { name: "1tbs", style: Some("1tbs"), text: OTBS },
    Figure { name: "stroustrup", style: Some("stroustrup"), text: STROUSTRUP },
    Figure { name: "allman", style: Some("allman"), text: ALLMAN },
    Figure { name: "knf", style: Some("knf"), text: KNF },
    Figure { name: "whitesmiths", style: Some("whitesmiths"), text: WHITESMITHS },
    Figure { name: "gnu", style: Some("gnu"), text: GNU },
    Figure { name: "horstmann", style: Some("horstmann"), text: HORSTMANN },
    Figure { name: "pico", style: Some("pico"), text: PICO },
    Figure { name: "banner", style: Some("banner"), text: BANNER },
    Figure { name: "lisp", style: Some("lisp"), text: LISP },
    Figure { name: "ratliff", style: Some("ratliff"), text: RATLIFF },
    Figure { name: "param_decl", style: None, text: PARAM_DECL },
    Figure { name: "if_else_simple", style: None, text: IF_ELSE_SIMPLE },
    Figure { name: "switch", style: None, text: SWITCH },
    Figure { name: "null_body", style: None, text: NULL_BODY },
    Figure { name: "do_while", style: None, text: DO_WHILE },
    Figure { name: "levels", style: None, text: LEVELS },
];

pub fn style_and_defaults(name: &str) -> (StyleSpec, FormatConfig) {
    let style = builtin_style(name).expect("style name");
    let config = FormatConfig::for_style(&style);
    (style, config)
}

fn leading_whitespace(line: &str) -> &str {
    let end = line
        .find(|c: char| c != ' ' && c != '\t')
        .unwrap_or(line.len());
    &line[..end]
}

fn line_tokens(line: &str) -> Vec<(TokenKind, String)> {
    significant(&tokenize(line, "line").expect("line tokenizes"))
        .tokens
        .into_iter()
        .map(|t| (t.kind, t.text))
        .collect()
}

/// Structural comparison: identical line count, identical leading
/// whitespace per line (so every indentation column and own-line brace
/// position matches), and identical token sequence per line (so line
/// breaks fall between the same tokens, with intra-line spacing
/// normalized away).
pub fn assert_structural_match(expected: &str, actual: &str, context: &str) {
    let exp_lines: Vec<&str> = expected.lines().collect();
    let act_lines: Vec<&str> = actual.lines().collect();
    assert_eq!(
        exp_lines.len(),
        act_lines.len(),
        "{}: line count differs\nexpected:\n{}\nactual:\n{}",
        context,
        expected,
        actual
    );
    for (i, (exp, act)) in exp_lines.iter().zip(act_lines.iter()).enumerate() {
        assert_eq!(
            leading_whitespace(exp),
            leading_whitespace(act),
            "{}: indentation differs on line {}\nexpected: {:?}\nactual:   {:?}",
            context,
            i + 1,
            exp,
            act
        );
        assert_eq!(
            line_tokens(exp),
            line_tokens(act),
            "{}: tokens differ on line {}\nexpected: {:?}\nactual:   {:?}",
            context,
            i + 1,
            exp,
            act
        );
    }
}

/// Significant tokens as (kind, text) pairs, for preservation checks.
pub fn significant_pairs(source: &str) -> Vec<(TokenKind, String)> {
    significant(&tokenize(source, "sig").expect("tokenizes"))
        .tokens
        .into_iter()
        .map(|t| (t.kind, t.text))
        .collect()
}

/// Same, with inserted `/* null body */` comments removed so token
/// preservation can be asserted modulo that one whitelisted insertion.
pub fn significant_pairs_sans_null_comment(source: &str) -> Vec<(TokenKind, String)> {
    significant_pairs(source)
        .into_iter()
        .filter(|(kind, text)| {
            !(*kind == TokenKind::BlockComment && text == "/* null body */")
        })
        .collect()
}

pub fn token_kinds(tokens: &[Token]) -> Vec<TokenKind> {
    tokens.iter().map(|t| t.kind).collect()
}

/// Random well-formed C-like sources for the structural property suite:
/// nesting depth stays at or below 6 and trees stay small.
pub mod gen {
    use proptest::prelude::*;

    const IDENTS: &[&str] = &[
        "x", "y", "i", "k", "count", "sum", "list", "value", "temp", "total",
    ];
    const CALLS: &[&str] = &["f", "g", "compute", "update", "refresh", "emit"];

    fn ident() -> impl Strategy<Value = &'static str> {
        prop::sample::select(IDENTS)
    }

    pub fn statement() -> impl Strategy<Value = String> {
        prop_oneof![
            (ident(), ident(), 0..100u32).prop_map(|(a, b, n)| format!("{} = {} + {};", a, b, n)),
            (prop::sample::select(CALLS), ident()).prop_map(|(f, a)| format!("{}({});", f, a)),
            (ident(), 0..10u32).prop_map(|(a, n)| format!("{}[{}] = {};", a, n, n)),
            ident().prop_map(|a| format!("return {};", a)),
            ident().prop_map(|a| format!("{}++;", a)),
            ident().prop_map(|a| format!("/* note */ {} = 1;", a)),
        ]
    }

    fn cond() -> impl Strategy<Value = String> {
        (
            ident(),
            prop::sample::select(&["<", ">", "==", "!="] as &[&str]),
            0..100u32,
        )
            .prop_map(|(a, op, n)| format!("{} {} {}", a, op, n))
    }

    fn switch_text() -> impl Strategy<Value = String> {
        (1..4usize, statement(), statement()).prop_map(|(n, s1, s2)| {
            let mut text = "switch (x) {\n".to_string();
            for k in 0..n {
                text.push_str(&format!("case {}:\n{}\nbreak;\n", k, s1));
            }
            text.push_str(&format!("default:\n{}\n}}", s2));
            text
        })
    }

    fn item_with(braceless: bool) -> impl Strategy<Value = String> {
        statement().prop_recursive(5, 40, 4, move |inner| {
            let body = prop::collection::vec(inner.clone(), 1..4);
            let weight = u32::from(braceless);
            prop_oneof![
                2 => (cond(), body.clone())
                    .prop_map(|(c, b)| format!("if ({}) {{\n{}\n}}", c, b.join("\n"))),
                2 => (cond(), body.clone())
                    .prop_map(|(c, b)| format!("while ({}) {{ {} }}", c, b.join(" "))),
                2 => (cond(), body.clone(), body.clone()).prop_map(|(c, t, e)| format!(
                    "if ({}) {{ {} }} else {{ {} }}",
                    c,
                    t.join(" "),
                    e.join(" ")
                )),
                2 => (ident(), cond(), body.clone()).prop_map(|(i, c, b)| format!(
                    "for ({} = 0; {}; {}++) {{ {} }}",
                    i,
                    c,
                    i,
                    b.join(" ")
                )),
                2 => (body.clone(), cond())
                    .prop_map(|(b, c)| format!("do {{ {} }} while ({});", b.join(" "), c)),
                2 * weight => (cond(), statement()).prop_map(|(c, s)| format!("if ({})\n{}", c, s)),
                2 => switch_text(),
                1 => Just("/* standalone */".to_string()),
            ]
        })
    }

    pub fn item() -> impl Strategy<Value = String> {
        item_with(true)
    }

    fn source_with(braceless: bool) -> impl Strategy<Value = String> {
        prop::collection::vec(
            prop_oneof![
                3 => item_with(braceless),
                1 => (prop::sample::select(CALLS), prop::collection::vec(item_with(braceless), 1..4))
                    .prop_map(|(name, body)| format!("int {}(void)\n{{\n{}\n}}", name, body.join("\n"))),
            ],
            1..5,
        )
        .prop_map(|items| items.join("\n") + "\n")
    }

    pub fn source() -> impl Strategy<Value = String> {
        source_with(true)
    }

    /// Sources whose every body is braced, so structural depth equals brace
    /// depth everywhere.
    pub fn braced_source() -> impl Strategy<Value = String> {
        source_with(false)
    }
}
