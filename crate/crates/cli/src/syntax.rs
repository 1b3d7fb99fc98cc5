//! Text syntax for literals and clauses.
//!
//! Boolean literals are written `name` / `~name`, linear literals as a
//! bracketed expression `[1*x + -2*y < 3]` / `~[1*x < 0]` with relations
//! `<`, `<=`, `=`, `>`, `>=` and rational constants `p` or `p/q`. The empty
//! clause is written `false`. Writing always uses this form; instance files
//! additionally accept a bare linear expression as a unit clause.

use std::fmt;

use mcres_core::{canonicalize, linear_literal, Atom, Clause, Literal, Rat, RawRelation, Vocab};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, col: usize, message: impl fmt::Display) -> Self {
        ParseError {
            line,
            col,
            message: message.to_string(),
        }
    }
}

pub const RESERVED: &[&str] = &["bool", "var", "false", "mode", "step", "basis", "conclusion"];

pub fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && !RESERVED.contains(&name)
        && name
            .chars()
            .next()
            .map(|c| c.is_ascii_alphabetic() || c == '_')
            .unwrap_or(false)
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// One lexical item of a clause.
#[derive(Debug, Clone)]
enum Token {
    Name { text: String, negated: bool, col: usize },
    Linear { text: String, negated: bool, col: usize },
    False { col: usize },
}

/// Splits a clause body into tokens; brackets may contain whitespace.
fn tokenize(chunk: &str, line: usize, col0: usize) -> Result<Vec<Token>, ParseError> {
    let bytes: Vec<char> = chunk.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i].is_whitespace() {
            i += 1;
            continue;
        }
        let col = col0 + i + 1;
        let mut negated = false;
        if bytes[i] == '~' || bytes[i] == '¬' {
            negated = true;
            i += 1;
            if i >= bytes.len() || bytes[i].is_whitespace() {
                return Err(ParseError::new(line, col, "dangling negation sign"));
            }
        }
        if bytes[i] == '[' {
            let start = i + 1;
            let end = (start..bytes.len())
                .find(|&j| bytes[j] == ']')
                .ok_or_else(|| ParseError::new(line, col, "unterminated '['"))?;
            let text: String = bytes[start..end].iter().collect();
            tokens.push(Token::Linear { text, negated, col });
            i = end + 1;
        } else {
            let start = i;
            while i < bytes.len() && !bytes[i].is_whitespace() {
                if bytes[i] == '[' || bytes[i] == ']' {
                    return Err(ParseError::new(line, col0 + i + 1, "unexpected bracket"));
                }
                i += 1;
            }
            let text: String = bytes[start..i].iter().collect();
            if text == "false" {
                if negated {
                    return Err(ParseError::new(line, col, "'false' cannot be negated"));
                }
                tokens.push(Token::False { col });
            } else {
                tokens.push(Token::Name { text, negated, col });
            }
        }
    }
    Ok(tokens)
}

fn parse_rational(text: &str, line: usize, col: usize) -> Result<Rat, ParseError> {
    text.trim()
        .parse::<Rat>()
        .map_err(|_| ParseError::new(line, col, format!("malformed rational '{}'", text.trim())))
}

/// Parses `c1*v1 + c2*v2 + ... REL bound` against declared variables.
pub fn parse_linear(
    text: &str,
    negated: bool,
    vocab: &Vocab,
    line: usize,
    col: usize,
) -> Result<Literal, ParseError> {
    let (rel, rel_pos, rel_len) = find_relation(text)
        .ok_or_else(|| ParseError::new(line, col, "missing relation in linear constraint"))?;
    let lhs = &text[..rel_pos];
    let rhs = &text[rel_pos + rel_len..];
    let bound = parse_rational(rhs, line, col)?;
    let mut terms = Vec::new();
    for raw_term in lhs.split('+') {
        let term = raw_term.trim();
        if term.is_empty() {
            return Err(ParseError::new(line, col, "empty term in linear expression"));
        }
        let (coeff, name) = match term.split_once('*') {
            Some((c, v)) => (parse_rational(c, line, col)?, v.trim()),
            None => {
                // bare variable, optionally with a sign
                if let Some(stripped) = term.strip_prefix('-') {
                    (-Rat::from_integer(1.into()), stripped.trim())
                } else {
                    (Rat::from_integer(1.into()), term)
                }
            }
        };
        let var = vocab
            .lookup_var(name)
            .ok_or_else(|| ParseError::new(line, col, format!("undeclared variable '{name}'")))?;
        terms.push((var, coeff));
    }
    linear_literal(terms, rel, bound, !negated)
        .map_err(|e| ParseError::new(line, col, e.to_string()))
}

fn find_relation(text: &str) -> Option<(RawRelation, usize, usize)> {
    for (op, rel) in [
        ("<=", RawRelation::Le),
        (">=", RawRelation::Ge),
        ("<", RawRelation::Lt),
        (">", RawRelation::Gt),
        ("=", RawRelation::Eq),
    ] {
        if let Some(pos) = text.find(op) {
            return Some((rel, pos, op.len()));
        }
    }
    None
}

/// Whether the text contains a relation operator outside brackets; such a
/// chunk in an instance file is a single bare linear literal.
pub fn has_toplevel_relation(chunk: &str) -> bool {
    let mut depth = 0usize;
    for c in chunk.chars() {
        match c {
            '[' => depth += 1,
            ']' => depth = depth.saturating_sub(1),
            '<' | '>' | '=' if depth == 0 => return true,
            _ => {}
        }
    }
    false
}

fn resolve_token(token: &Token, vocab: &Vocab, line: usize) -> Result<Literal, ParseError> {
    match token {
        Token::Name { text, negated, col } => {
            let atom = vocab.lookup_bool(text).ok_or_else(|| {
                ParseError::new(line, *col, format!("undeclared atom '{text}'"))
            })?;
            Ok(Literal::new(Atom::Bool(atom), !negated))
        }
        Token::Linear { text, negated, col } => parse_linear(text, *negated, vocab, line, *col),
        Token::False { col } => Err(ParseError::new(
            line,
            *col,
            "'false' only denotes the empty clause on its own",
        )),
    }
}

/// Parses a clause body made of literal tokens (the strict form used by
/// trace and proof files; `false` alone is the empty clause).
pub fn parse_clause(
    chunk: &str,
    vocab: &Vocab,
    line: usize,
    col0: usize,
) -> Result<Clause, ParseError> {
    let tokens = tokenize(chunk, line, col0)?;
    if tokens.is_empty() {
        return Err(ParseError::new(line, col0 + 1, "empty clause body"));
    }
    if let [Token::False { .. }] = tokens.as_slice() {
        return Ok(Clause::empty());
    }
    let mut lits = Vec::with_capacity(tokens.len());
    for token in &tokens {
        if matches!(token, Token::False { .. }) {
            return Err(ParseError::new(
                line,
                col0 + 1,
                "'false' only denotes the empty clause on its own",
            ));
        }
        lits.push(resolve_token(token, vocab, line)?);
    }
    Ok(canonicalize(lits))
}

/// Parses a single literal token.
pub fn parse_literal(
    chunk: &str,
    vocab: &Vocab,
    line: usize,
    col0: usize,
) -> Result<Literal, ParseError> {
    let tokens = tokenize(chunk, line, col0)?;
    match tokens.as_slice() {
        [token @ (Token::Name { .. } | Token::Linear { .. })] => resolve_token(token, vocab, line),
        _ => Err(ParseError::new(
            line,
            col0 + 1,
            "expected exactly one literal",
        )),
    }
}

/// Instance-file clause chunk: the strict token form, or a bare linear
/// expression as a unit clause when a relation occurs outside brackets.
pub fn parse_instance_clause(
    chunk: &str,
    vocab: &Vocab,
    line: usize,
    col0: usize,
) -> Result<Clause, ParseError> {
    let trimmed = chunk.trim();
    if !trimmed.contains('[') && has_toplevel_relation(trimmed) {
        let (body, negated) = match trimmed.strip_prefix(['~', '¬']) {
            Some(rest) => (rest, true),
            None => (trimmed, false),
        };
        let lit = parse_linear(body, negated, vocab, line, col0 + 1)?;
        return Ok(canonicalize([lit]));
    }
    parse_clause(chunk, vocab, line, col0)
}
