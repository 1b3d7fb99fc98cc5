//! Trace files: one rule application per line with a running step account.
//!
//! ```text
//! # mcres trace v1
//! mode complete
//! step | decide | ~a | 1 0 1
//! step | t-conflict | [1*x <= 1] ~[1*x < 0] | 2 1 1
//! basis | ~[1*x <= 1] [1*x <= 1]
//! step | restart | 3 1 2
//! ```
//!
//! `step` lines carry the rule name, its operands in canonical clause text,
//! and the cumulative `total theory non-theory` counts, which the parser
//! verifies. `basis` lines record basis growth. The format is strict so that
//! serialize/parse/serialize is byte-identical.

use mcres_core::engine::{Record, Trace, TraceStep};
use mcres_core::theory::FeasibilityMode;
use mcres_core::translate::StepAccount;
use mcres_core::{Literal, Vocab};

use crate::syntax::{parse_clause, parse_literal, ParseError};

pub const HEADER: &str = "# mcres trace v1";

fn push_account(out: &mut String, account: &StepAccount) {
    out.push_str(&format!(
        " | {} {} {}",
        account.total, account.theory_rules, account.non_theory_rules
    ));
}

pub fn write_trace(trace: &Trace) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    out.push_str(&format!("mode {}\n", trace.mode));
    let mut account = StepAccount::default();
    for record in &trace.records {
        match record {
            Record::BasisGrow(lits) => {
                let rendered: Vec<String> = lits.iter().map(|l| l.to_string()).collect();
                out.push_str(&format!("basis | {}\n", rendered.join(" ")));
            }
            Record::Step(step) => {
                account.total += 1;
                if step.is_theory_rule() {
                    account.theory_rules += 1;
                } else {
                    account.non_theory_rules += 1;
                }
                out.push_str("step | ");
                out.push_str(step.rule_name());
                match step {
                    TraceStep::Decide { literal }
                    | TraceStep::Backjump { literal }
                    | TraceStep::TBackjumpDecide { literal } => {
                        out.push_str(&format!(" | {literal}"));
                    }
                    TraceStep::Propagate { clause, literal } => {
                        out.push_str(&format!(" | {clause} | {literal}"));
                    }
                    TraceStep::Conflict { clause }
                    | TraceStep::Forget { clause }
                    | TraceStep::Learn { clause } => {
                        out.push_str(&format!(" | {clause}"));
                    }
                    TraceStep::Resolve { pivot, resolvent } => {
                        out.push_str(&format!(" | {pivot} | {resolvent}"));
                    }
                    TraceStep::TPropagate {
                        literal,
                        explanation,
                    } => {
                        out.push_str(&format!(" | {literal} | {explanation}"));
                    }
                    TraceStep::TConflict { explanation } => {
                        out.push_str(&format!(" | {explanation}"));
                    }
                    TraceStep::TDecide { var, value } => {
                        out.push_str(&format!(" | {var} | {value}"));
                    }
                    TraceStep::Sat
                    | TraceStep::Restart
                    | TraceStep::Consume1
                    | TraceStep::Consume2
                    | TraceStep::TConsume
                    | TraceStep::Unsat => {}
                }
                push_account(&mut out, &account);
                out.push('\n');
            }
        }
    }
    out
}

fn parse_account(
    text: &str,
    line: usize,
    expected: &StepAccount,
) -> Result<(), ParseError> {
    let parts: Vec<&str> = text.split_whitespace().collect();
    let invalid = || ParseError::new(line, 1, "malformed step account");
    if parts.len() != 3 {
        return Err(invalid());
    }
    let total: usize = parts[0].parse().map_err(|_| invalid())?;
    let theory: usize = parts[1].parse().map_err(|_| invalid())?;
    let non_theory: usize = parts[2].parse().map_err(|_| invalid())?;
    if total != expected.total
        || theory != expected.theory_rules
        || non_theory != expected.non_theory_rules
    {
        return Err(ParseError::new(
            line,
            1,
            format!(
                "step account {total} {theory} {non_theory} does not match the run ({} {} {})",
                expected.total, expected.theory_rules, expected.non_theory_rules
            ),
        ));
    }
    Ok(())
}

pub fn parse_trace(text: &str, vocab: &Vocab) -> Result<Trace, ParseError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, first)) if first == HEADER => {}
        _ => return Err(ParseError::new(1, 1, format!("expected '{HEADER}'"))),
    }
    let mode = match lines.next() {
        Some((_, "mode complete")) => FeasibilityMode::Complete,
        Some((_, "mode univariate")) => FeasibilityMode::UnivariateOnly,
        _ => return Err(ParseError::new(2, 1, "expected 'mode complete' or 'mode univariate'")),
    };
    let mut records = Vec::new();
    let mut account = StepAccount::default();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let cols: Vec<&str> = line.split(" | ").collect();
        match cols.first() {
            Some(&"basis") => {
                if cols.len() != 2 {
                    return Err(ParseError::new(line_no, 1, "basis line needs one column"));
                }
                let mut lits: Vec<Literal> = Vec::new();
                for token in split_literal_tokens(cols[1]) {
                    lits.push(parse_literal(&token, vocab, line_no, 0)?);
                }
                records.push(Record::BasisGrow(lits));
            }
            Some(&"step") => {
                if cols.len() < 3 {
                    return Err(ParseError::new(line_no, 1, "malformed step line"));
                }
                let rule = cols[1];
                let operands = &cols[2..cols.len() - 1];
                let step = parse_step(rule, operands, vocab, line_no)?;
                account.total += 1;
                if step.is_theory_rule() {
                    account.theory_rules += 1;
                } else {
                    account.non_theory_rules += 1;
                }
                parse_account(cols[cols.len() - 1], line_no, &account)?;
                records.push(Record::Step(step));
            }
            _ => return Err(ParseError::new(line_no, 1, "expected 'step' or 'basis' line")),
        }
    }
    Ok(Trace { mode, records })
}

/// Splits a basis column into literal tokens (bracket-aware).
fn split_literal_tokens(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut depth = 0usize;
    for c in text.chars() {
        match c {
            '[' => {
                depth += 1;
                current.push(c);
            }
            ']' => {
                depth = depth.saturating_sub(1);
                current.push(c);
            }
            c if c.is_whitespace() && depth == 0 => {
                if !current.is_empty() {
                    tokens.push(std::mem::take(&mut current));
                }
            }
            c => current.push(c),
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

fn expect_operands(
    rule: &str,
    operands: &[&str],
    count: usize,
    line: usize,
) -> Result<(), ParseError> {
    if operands.len() != count {
        return Err(ParseError::new(
            line,
            1,
            format!("rule '{rule}' takes {count} operand column(s), found {}", operands.len()),
        ));
    }
    Ok(())
}

fn parse_step(
    rule: &str,
    operands: &[&str],
    vocab: &Vocab,
    line: usize,
) -> Result<TraceStep, ParseError> {
    let lit = |text: &str| parse_literal(text, vocab, line, 0);
    let clause = |text: &str| parse_clause(text, vocab, line, 0);
    Ok(match rule {
        "decide" => {
            expect_operands(rule, operands, 1, line)?;
            TraceStep::Decide {
                literal: lit(operands[0])?,
            }
        }
        "propagate" => {
            expect_operands(rule, operands, 2, line)?;
            TraceStep::Propagate {
                clause: clause(operands[0])?,
                literal: lit(operands[1])?,
            }
        }
        "conflict" => {
            expect_operands(rule, operands, 1, line)?;
            TraceStep::Conflict {
                clause: clause(operands[0])?,
            }
        }
        "sat" => {
            expect_operands(rule, operands, 0, line)?;
            TraceStep::Sat
        }
        "forget" => {
            expect_operands(rule, operands, 1, line)?;
            TraceStep::Forget {
                clause: clause(operands[0])?,
            }
        }
        "restart" => {
            expect_operands(rule, operands, 0, line)?;
            TraceStep::Restart
        }
        "resolve" => {
            expect_operands(rule, operands, 2, line)?;
            TraceStep::Resolve {
                pivot: lit(operands[0])?,
                resolvent: clause(operands[1])?,
            }
        }
        "consume1" => {
            expect_operands(rule, operands, 0, line)?;
            TraceStep::Consume1
        }
        "consume2" => {
            expect_operands(rule, operands, 0, line)?;
            TraceStep::Consume2
        }
        "t-consume" => {
            expect_operands(rule, operands, 0, line)?;
            TraceStep::TConsume
        }
        "backjump" => {
            expect_operands(rule, operands, 1, line)?;
            TraceStep::Backjump {
                literal: lit(operands[0])?,
            }
        }
        "unsat" => {
            expect_operands(rule, operands, 0, line)?;
            TraceStep::Unsat
        }
        "learn" => {
            expect_operands(rule, operands, 1, line)?;
            TraceStep::Learn {
                clause: clause(operands[0])?,
            }
        }
        "t-propagate" => {
            expect_operands(rule, operands, 2, line)?;
            TraceStep::TPropagate {
                literal: lit(operands[0])?,
                explanation: clause(operands[1])?,
            }
        }
        "t-decide" => {
            expect_operands(rule, operands, 2, line)?;
            let var = vocab.lookup_var(operands[0].trim()).ok_or_else(|| {
                ParseError::new(line, 1, format!("undeclared variable '{}'", operands[0]))
            })?;
            let value = operands[1].trim().parse().map_err(|_| {
                ParseError::new(line, 1, format!("malformed rational '{}'", operands[1]))
            })?;
            TraceStep::TDecide { var, value }
        }
        "t-conflict" => {
            expect_operands(rule, operands, 1, line)?;
            TraceStep::TConflict {
                explanation: clause(operands[0])?,
            }
        }
        "t-backjump-decide" => {
            expect_operands(rule, operands, 1, line)?;
            TraceStep::TBackjumpDecide {
                literal: lit(operands[0])?,
            }
        }
        other => {
            return Err(ParseError::new(
                line,
                1,
                format!("unknown rule '{other}'"),
            ))
        }
    })
}
