//! Instance files: atom declarations followed by clause lines.
//!
//! ```text
//! # comment
//! bool a b
//! var x y
//! a ~b [1*x + -1*y < 0]
//! 1*x < 0 ; 1*x > 1
//! ```
//!
//! `bool` and `var` lines declare Boolean atoms and theory variables; every
//! other non-empty line holds one or more clauses separated by `;`. Clause
//! syntax is described in [`crate::syntax`]; a chunk that is a bare linear
//! expression is a unit clause. Duplicate clauses are merged.

use mcres_core::{ClauseSet, Origin, Vocab};

use crate::syntax::{parse_instance_clause, valid_name, ParseError};

pub fn parse_instance(text: &str) -> Result<(Vocab, ClauseSet), ParseError> {
    let mut vocab = Vocab::new();
    let mut clauses = ClauseSet::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        };
        if line.trim().is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        match words.next() {
            Some("bool") => {
                for name in words {
                    if !valid_name(name) {
                        return Err(ParseError::new(
                            line_no,
                            raw_line.find(name).map(|p| p + 1).unwrap_or(1),
                            format!("invalid atom name '{name}'"),
                        ));
                    }
                    vocab.bool_atom(name);
                }
            }
            Some("var") => {
                for name in words {
                    if !valid_name(name) {
                        return Err(ParseError::new(
                            line_no,
                            raw_line.find(name).map(|p| p + 1).unwrap_or(1),
                            format!("invalid variable name '{name}'"),
                        ));
                    }
                    vocab.theory_var(name);
                }
            }
            _ => {
                let mut col0 = 0;
                for chunk in line.split(';') {
                    if chunk.trim().is_empty() {
                        return Err(ParseError::new(line_no, col0 + 1, "empty clause chunk"));
                    }
                    let clause = parse_instance_clause(chunk, &vocab, line_no, col0)?;
                    clauses.insert(clause, Origin::Input);
                    col0 += chunk.len() + 1;
                }
            }
        }
    }
    Ok((vocab, clauses))
}

/// Canonical instance text: declarations in id order, one clause per line in
/// set order.
pub fn write_instance(vocab: &Vocab, clauses: &ClauseSet) -> String {
    let mut out = String::from("# mcres instance v1\n");
    let bools: Vec<&str> = vocab.bools().map(|b| b.name()).collect();
    if !bools.is_empty() {
        out.push_str(&format!("bool {}\n", bools.join(" ")));
    }
    let vars: Vec<&str> = vocab.vars().map(|v| v.name()).collect();
    if !vars.is_empty() {
        out.push_str(&format!("var {}\n", vars.join(" ")));
    }
    for clause in clauses.clauses() {
        out.push_str(&clause.to_string());
        out.push('\n');
    }
    out
}
