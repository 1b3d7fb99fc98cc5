//! Proof files: one step per line with a running step account, then the
//! conclusion index.
//!
//! ```text
//! # mcres proof v1
//! step | input | a | 0 0 0
//! step | input | ~a | 0 0 0
//! step | resolution | 0 1 | a | false | 1 0 1
//! step | theory | strong | [1*x <= 1] ~[1*x < 0] | 2 1 1
//! conclusion | 2
//! ```

use mcres_core::resstar::{Proof, ProofStep, Strength};
use mcres_core::translate::StepAccount;
use mcres_core::Vocab;

use crate::syntax::{parse_clause, parse_literal, ParseError};

pub const HEADER: &str = "# mcres proof v1";

pub fn write_proof(proof: &Proof) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    let mut account = StepAccount::default();
    for step in &proof.steps {
        match step {
            ProofStep::Input { clause } => {
                out.push_str(&format!("step | input | {clause}"));
            }
            ProofStep::Resolution {
                left,
                right,
                pivot,
                resolvent,
            } => {
                account.total += 1;
                account.non_theory_rules += 1;
                out.push_str(&format!(
                    "step | resolution | {left} {right} | {pivot} | {resolvent}"
                ));
            }
            ProofStep::TheoryDerivation { clause, strength } => {
                account.total += 1;
                account.theory_rules += 1;
                let strength = match strength {
                    Strength::Regular => "regular",
                    Strength::Strong => "strong",
                };
                out.push_str(&format!("step | theory | {strength} | {clause}"));
            }
        }
        out.push_str(&format!(
            " | {} {} {}\n",
            account.total, account.theory_rules, account.non_theory_rules
        ));
    }
    if let Some(conclusion) = proof.conclusion {
        out.push_str(&format!("conclusion | {conclusion}\n"));
    }
    out
}

pub fn parse_proof(text: &str, vocab: &Vocab) -> Result<Proof, ParseError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, first)) if first == HEADER => {}
        _ => return Err(ParseError::new(1, 1, format!("expected '{HEADER}'"))),
    }
    let mut proof = Proof::default();
    let mut account = StepAccount::default();
    let mut saw_conclusion = false;
    for (idx, line) in lines {
        let line_no = idx + 1;
        if saw_conclusion {
            return Err(ParseError::new(line_no, 1, "content after conclusion"));
        }
        let cols: Vec<&str> = line.split(" | ").collect();
        match cols.first() {
            Some(&"conclusion") => {
                if cols.len() != 2 {
                    return Err(ParseError::new(line_no, 1, "malformed conclusion line"));
                }
                let index: usize = cols[1].trim().parse().map_err(|_| {
                    ParseError::new(line_no, 1, format!("malformed index '{}'", cols[1]))
                })?;
                if index >= proof.steps.len() {
                    return Err(ParseError::new(
                        line_no,
                        1,
                        format!("conclusion index {index} out of range"),
                    ));
                }
                proof.conclusion = Some(index);
                saw_conclusion = true;
            }
            Some(&"step") => {
                if cols.len() < 3 {
                    return Err(ParseError::new(line_no, 1, "malformed step line"));
                }
                let operands = &cols[2..cols.len() - 1];
                let step = match cols[1] {
                    "input" => {
                        if operands.len() != 1 {
                            return Err(ParseError::new(line_no, 1, "input takes one column"));
                        }
                        ProofStep::Input {
                            clause: parse_clause(operands[0], vocab, line_no, 0)?,
                        }
                    }
                    "resolution" => {
                        if operands.len() != 3 {
                            return Err(ParseError::new(
                                line_no,
                                1,
                                "resolution takes three columns",
                            ));
                        }
                        let mut refs = operands[0].split_whitespace();
                        let parse_idx = |token: Option<&str>| -> Result<usize, ParseError> {
                            token
                                .and_then(|t| t.parse().ok())
                                .ok_or_else(|| {
                                    ParseError::new(line_no, 1, "malformed step reference")
                                })
                        };
                        let left = parse_idx(refs.next())?;
                        let right = parse_idx(refs.next())?;
                        if refs.next().is_some() {
                            return Err(ParseError::new(line_no, 1, "too many step references"));
                        }
                        ProofStep::Resolution {
                            left,
                            right,
                            pivot: parse_literal(operands[1], vocab, line_no, 0)?,
                            resolvent: parse_clause(operands[2], vocab, line_no, 0)?,
                        }
                    }
                    "theory" => {
                        if operands.len() != 2 {
                            return Err(ParseError::new(line_no, 1, "theory takes two columns"));
                        }
                        let strength = match operands[0] {
                            "regular" => Strength::Regular,
                            "strong" => Strength::Strong,
                            other => {
                                return Err(ParseError::new(
                                    line_no,
                                    1,
                                    format!("unknown strength '{other}'"),
                                ))
                            }
                        };
                        ProofStep::TheoryDerivation {
                            clause: parse_clause(operands[1], vocab, line_no, 0)?,
                            strength,
                        }
                    }
                    other => {
                        return Err(ParseError::new(
                            line_no,
                            1,
                            format!("unknown proof step '{other}'"),
                        ))
                    }
                };
                match &step {
                    ProofStep::Input { .. } => {}
                    ProofStep::Resolution { .. } => {
                        account.total += 1;
                        account.non_theory_rules += 1;
                    }
                    ProofStep::TheoryDerivation { .. } => {
                        account.total += 1;
                        account.theory_rules += 1;
                    }
                }
                let stated: Vec<usize> = cols[cols.len() - 1]
                    .split_whitespace()
                    .map(|t| t.parse().map_err(|_| ParseError::new(line_no, 1, "malformed step account")))
                    .collect::<Result<_, _>>()?;
                if stated != [account.total, account.theory_rules, account.non_theory_rules] {
                    return Err(ParseError::new(
                        line_no,
                        1,
                        "step account does not match the proof",
                    ));
                }
                proof.steps.push(step);
            }
            _ => {
                return Err(ParseError::new(
                    line_no,
                    1,
                    "expected 'step' or 'conclusion' line",
                ))
            }
        }
    }
    if !saw_conclusion && !proof.steps.is_empty() {
        return Err(ParseError::new(
            text.lines().count(),
            1,
            "missing conclusion line",
        ));
    }
    Ok(proof)
}

#[cfg(test)]
mod tests {
    use super::*;
    use mcres_core::engine::{solve, SolveOptions};
    use mcres_core::theory::LraTheory;
    use mcres_core::translate::mcsat_to_res;

    use crate::instance::parse_instance;

    #[test]
    fn proof_file_round_trips_byte_identically() {
        let (vocab, clauses) = parse_instance("bool a b\nvar x\na\n~a b\n1*x < 0\n~b ; 1*x > 1\n").unwrap();
        let (_, trace) = solve(
            clauses.clone(),
            LraTheory::complete(),
            &SolveOptions::default(),
        );
        let (proof, _) = mcsat_to_res(&trace, &clauses).unwrap();
        let text = write_proof(&proof);
        let parsed = parse_proof(&text, &vocab).unwrap();
        assert_eq!(parsed, proof);
        assert_eq!(write_proof(&parsed), text);
    }

    #[test]
    fn hand_written_proof_parses() {
        let (vocab, _) = parse_instance("bool a\n a\n").unwrap();
        let text = format!(
            "{HEADER}\nstep | input | a | 0 0 0\nstep | input | ~a | 0 0 0\nstep | resolution | 0 1 | a | false | 1 0 1\nconclusion | 2\n"
        );
        let proof = parse_proof(&text, &vocab).unwrap();
        assert!(proof.is_refutation());
        assert_eq!(proof.steps.len(), 3);
    }

    #[test]
    fn bad_account_is_rejected() {
        let (vocab, _) = parse_instance("bool a\n a\n").unwrap();
        let text = format!(
            "{HEADER}\nstep | input | a | 1 0 0\nconclusion | 0\n"
        );
        assert!(parse_proof(&text, &vocab).is_err());
    }

    #[test]
    fn empty_proof_round_trips() {
        let proof = Proof::default();
        let text = write_proof(&proof);
        let parsed = parse_proof(&text, &Vocab::new()).unwrap();
        assert_eq!(parsed, proof);
    }
}
