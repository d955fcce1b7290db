//! Heuristic method-boundary extraction for Java-like sources.
//!
//! Finds method signatures by pattern (identifier + parameter list +
//! opening brace, excluding control-flow keywords), pairs braces with
//! awareness of string/char literals and comments, and returns body
//! line ranges. Bodies are opaque: anything nested inside a method
//! (anonymous or local classes) stays part of the enclosing method's
//! range. Constructors are recognized and excluded.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LanguageHint {
    #[default]
    JavaLike,
}

/// Line range of one extracted entity within a file snapshot. Ranges
/// are 1-based, inclusive, and non-overlapping within one snapshot.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntityLocator {
    pub qualified_name: String,
    pub start_line: usize,
    pub end_line: usize,
    pub file_path: String,
}

/// Extraction output plus a warning flag for best-effort results
/// (unbalanced braces, stray closers).
#[derive(Clone, Debug)]
pub struct Extraction {
    pub locators: Vec<EntityLocator>,
    pub warning: bool,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Word(String, usize),
    Sym(char, usize),
}

impl Tok {
    fn line(&self) -> usize {
        match self {
            Tok::Word(_, line) | Tok::Sym(_, line) => *line,
        }
    }
}

/// Lexer pass: strips comments and string/char literals, keeps words
/// and structural symbols with their line numbers.
fn lex(content: &str) -> Vec<Tok> {
    let mut tokens = Vec::new();
    let bytes: Vec<char> = content.chars().collect();
    let mut i = 0;
    let mut line = 1;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            '\n' => {
                line += 1;
                i += 1;
            }
            '/' if i + 1 < bytes.len() && bytes[i + 1] == '/' => {
                while i < bytes.len() && bytes[i] != '\n' {
                    i += 1;
                }
            }
            '/' if i + 1 < bytes.len() && bytes[i + 1] == '*' => {
                i += 2;
                while i + 1 < bytes.len() && !(bytes[i] == '*' && bytes[i + 1] == '/') {
                    if bytes[i] == '\n' {
                        line += 1;
                    }
                    i += 1;
                }
                if bytes[i..].is_empty() {
                    break;
                }
                i = (i + 2).min(bytes.len());
            }
            '"' | '\'' => {
                let quote = c;
                i += 1;
                while i < bytes.len() && bytes[i] != quote {
                    if bytes[i] == '\\' {
                        i += 1;
                    } else if bytes[i] == '\n' {
                        line += 1;
                    }
                    i += 1;
                }
                i += 1;
            }
            _ if c.is_whitespace() => {
                i += 1;
            }
            _ if c.is_alphanumeric() || c == '_' || c == '$' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_alphanumeric() || bytes[i] == '_' || bytes[i] == '$')
                {
                    i += 1;
                }
                tokens.push(Tok::Word(bytes[start..i].iter().collect(), line));
            }
            _ => {
                tokens.push(Tok::Sym(c, line));
                i += 1;
            }
        }
    }
    tokens
}

const MODIFIERS: &[&str] = &[
    "public",
    "protected",
    "private",
    "static",
    "final",
    "abstract",
    "native",
    "synchronized",
    "strictfp",
    "transient",
    "volatile",
    "default",
    "sealed",
];

const CONTROL_KEYWORDS: &[&str] = &[
    "if", "for", "while", "switch", "catch", "do", "else", "try", "finally", "return", "new",
    "throw", "assert", "this", "super", "synchronized",
];

const TYPE_KEYWORDS: &[&str] = &["class", "interface", "enum", "record"];

/// What a `{` at class level opens.
enum BraceKind {
    Class(String),
    Method { name: String, arity: usize },
    Constructor,
    Block,
}

fn classify_head(head: &[Tok], enclosing_class: Option<&str>) -> BraceKind {
    // Type declarations first: `record R(int x) {` is class-like even
    // though it matches the method pattern.
    let mut depth = 0i32;
    for (i, tok) in head.iter().enumerate() {
        match tok {
            Tok::Sym('(', _) => depth += 1,
            Tok::Sym(')', _) => depth -= 1,
            Tok::Word(word, _) if depth == 0 && TYPE_KEYWORDS.contains(&word.as_str()) => {
                let preceded_by_dot = i > 0 && matches!(head[i - 1], Tok::Sym('.', _));
                if preceded_by_dot {
                    continue;
                }
                if let Some(Tok::Word(name, _)) = head.get(i + 1) {
                    return BraceKind::Class(name.clone());
                }
            }
            _ => {}
        }
    }

    // Field initializers and lambdas are plain blocks.
    let mut depth = 0i32;
    for (i, tok) in head.iter().enumerate() {
        match tok {
            Tok::Sym('(', _) => depth += 1,
            Tok::Sym(')', _) => depth -= 1,
            Tok::Sym('=', _) if depth == 0 => return BraceKind::Block,
            Tok::Sym('>', _) if depth == 0 && i > 0 => {
                if matches!(head[i - 1], Tok::Sym('-', _)) {
                    return BraceKind::Block;
                }
            }
            _ => {}
        }
    }

    // Walk back over a `throws A, B` tail to the parameter-list close.
    let mut end = head.len();
    while end > 0 {
        match &head[end - 1] {
            Tok::Word(_, _) | Tok::Sym(',', _) | Tok::Sym('.', _) => end -= 1,
            _ => break,
        }
    }
    if end == 0 || !matches!(head[end - 1], Tok::Sym(')', _)) {
        return BraceKind::Block;
    }
    let close = end - 1;
    let mut depth = 0i32;
    let mut open = None;
    for i in (0..=close).rev() {
        match head[i] {
            Tok::Sym(')', _) => depth += 1,
            Tok::Sym('(', _) => {
                depth -= 1;
                if depth == 0 {
                    open = Some(i);
                    break;
                }
            }
            _ => {}
        }
    }
    let Some(open) = open else {
        return BraceKind::Block;
    };
    if open == 0 {
        return BraceKind::Block;
    }
    let Tok::Word(name, _) = &head[open - 1] else {
        return BraceKind::Block;
    };
    if CONTROL_KEYWORDS.contains(&name.as_str()) {
        return BraceKind::Block;
    }
    if open >= 2 {
        if let Tok::Word(before, _) = &head[open - 2] {
            if before == "new" {
                return BraceKind::Block;
            }
        }
    }

    // Arity: top-level commas inside the parameter list, ignoring
    // generics and array brackets.
    let params = &head[open + 1..close];
    let arity = if params.is_empty() {
        0
    } else {
        let mut commas = 0;
        let mut paren = 0i32;
        let mut angle = 0i32;
        let mut bracket = 0i32;
        for tok in params {
            match tok {
                Tok::Sym('(', _) => paren += 1,
                Tok::Sym(')', _) => paren -= 1,
                Tok::Sym('<', _) => angle += 1,
                Tok::Sym('>', _) => angle -= 1,
                Tok::Sym('[', _) => bracket += 1,
                Tok::Sym(']', _) => bracket -= 1,
                Tok::Sym(',', _) if paren == 0 && angle == 0 && bracket == 0 => commas += 1,
                _ => {}
            }
        }
        commas + 1
    };

    // Constructors: name matches the enclosing type, or there is no
    // return type between the modifiers and the name.
    if enclosing_class == Some(name.as_str()) {
        return BraceKind::Constructor;
    }
    let mut j = open - 1;
    let mut has_return_type = false;
    while j > 0 {
        j -= 1;
        match &head[j] {
            Tok::Word(word, _) if MODIFIERS.contains(&word.as_str()) => continue,
            Tok::Word(_, _) | Tok::Sym('>', _) | Tok::Sym(']', _) => {
                has_return_type = true;
                break;
            }
            Tok::Sym('@', _) => continue,
            _ => break,
        }
    }
    if !has_return_type {
        return BraceKind::Constructor;
    }

    BraceKind::Method {
        name: name.clone(),
        arity,
    }
}

/// Extract method locators from one file snapshot. Never fails: broken
/// input yields best-effort locators plus the warning flag.
pub fn extract_entities(file_path: &str, content: &str, hint: LanguageHint) -> Extraction {
    let LanguageHint::JavaLike = hint;
    let tokens = lex(content);
    let mut locators: Vec<EntityLocator> = Vec::new();
    let mut warning = false;
    // Some(name) = named type context, None = opaque block.
    let mut class_stack: Vec<Option<String>> = Vec::new();
    let mut head_start = 0;
    let mut i = 0;

    while i < tokens.len() {
        match &tokens[i] {
            Tok::Sym(';', _) => {
                head_start = i + 1;
                i += 1;
            }
            Tok::Sym('}', _) => {
                if class_stack.pop().is_none() {
                    warning = true;
                }
                head_start = i + 1;
                i += 1;
            }
            Tok::Sym('{', _) => {
                let head = &tokens[head_start..i];
                let in_named_context =
                    class_stack.is_empty() || matches!(class_stack.last(), Some(Some(_)));
                let enclosing = class_stack
                    .last()
                    .and_then(|ctx| ctx.as_deref());
                let kind = if in_named_context {
                    classify_head(head, enclosing)
                } else {
                    BraceKind::Block
                };
                match kind {
                    BraceKind::Class(name) => {
                        class_stack.push(Some(name));
                        i += 1;
                        head_start = i;
                    }
                    BraceKind::Block => {
                        class_stack.push(None);
                        i += 1;
                        head_start = i;
                    }
                    BraceKind::Method { name, arity } => {
                        // Consume the body wholesale; inner structure is
                        // never split out.
                        let start_line =
                            head.first().map(Tok::line).unwrap_or_else(|| tokens[i].line());
                        let (end_index, end_line, balanced) = skip_body(&tokens, i);
                        if !balanced {
                            warning = true;
                        }
                        let path: Vec<&str> = class_stack
                            .iter()
                            .filter_map(|ctx| ctx.as_deref())
                            .collect();
                        let qualified_name = if path.is_empty() {
                            format!("{name}/{arity}")
                        } else {
                            format!("{}.{name}/{arity}", path.join("."))
                        };
                        locators.push(EntityLocator {
                            qualified_name,
                            start_line,
                            end_line,
                            file_path: file_path.to_string(),
                        });
                        i = end_index;
                        head_start = i;
                    }
                    BraceKind::Constructor => {
                        let (end_index, _, balanced) = skip_body(&tokens, i);
                        if !balanced {
                            warning = true;
                        }
                        i = end_index;
                        head_start = i;
                    }
                }
            }
            _ => i += 1,
        }
    }

    // Locators appear in source order and bodies are opaque, so the
    // only possible overlap is a shared boundary line; clamp it away.
    let mut previous_end = 0usize;
    let mut kept = Vec::with_capacity(locators.len());
    for mut locator in locators {
        if locator.start_line <= previous_end {
            locator.start_line = previous_end + 1;
        }
        if locator.start_line > locator.end_line {
            warning = true;
            continue;
        }
        previous_end = locator.end_line;
        kept.push(locator);
    }

    Extraction {
        locators: kept,
        warning,
    }
}

/// Skip from an opening brace to its matching close. Returns the token
/// index after the close, the closing line, and whether the braces
/// balanced before EOF.
fn skip_body(tokens: &[Tok], open_index: usize) -> (usize, usize, bool) {
    let mut depth = 0i64;
    let mut i = open_index;
    while i < tokens.len() {
        match tokens[i] {
            Tok::Sym('{', _) => depth += 1,
            Tok::Sym('}', _) => {
                depth -= 1;
                if depth == 0 {
                    return (i + 1, tokens[i].line(), true);
                }
            }
            _ => {}
        }
        i += 1;
    }
    let last_line = tokens.last().map(Tok::line).unwrap_or(1);
    (tokens.len(), last_line, false)
}
