//! 3SAT formulas: DIMACS parsing, evaluation and a brute-force oracle.
//!
//! Variables are 0-based internally and 1-based in DIMACS text.

use std::fmt::{self, Write as _};

use thiserror::Error;

/// Largest variable count the brute-force oracle accepts.
pub const BRUTE_FORCE_MAX_VARS: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal { var, negated: false }
    }

    pub fn neg(var: usize) -> Self {
        Literal { var, negated: true }
    }

    pub fn eval(self, assignment: &[bool]) -> bool {
        assignment[self.var] != self.negated
    }

    fn dimacs(self) -> i64 {
        let v = self.var as i64 + 1;
        if self.negated {
            -v
        } else {
            v
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "¬x{}", self.var + 1)
        } else {
            write!(f, "x{}", self.var + 1)
        }
    }
}

pub type Clause = [Literal; 3];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SatError {
    #[error("line {line}: malformed problem line {text:?}")]
    BadHeader { line: usize, text: String },
    #[error("missing `p cnf` header")]
    MissingHeader,
    #[error("line {line}: invalid literal {token:?}")]
    BadLiteral { line: usize, token: String },
    #[error("clause {clause}: literal {literal} exceeds the declared {vars} variables")]
    VariableOutOfRange {
        clause: usize,
        literal: i64,
        vars: usize,
    },
    #[error("clause {clause} has {size} literals, expected exactly 3")]
    ClauseWidth { clause: usize, size: usize },
    #[error("clause {clause} mentions variable {var} more than once")]
    RepeatedVariable { clause: usize, var: usize },
    #[error("header declares {declared} clauses, found {found}")]
    ClauseCount { declared: usize, found: usize },
    #[error("unterminated clause at end of input")]
    Unterminated,
    #[error("assignment has {got} values for {expected} variables")]
    AssignmentLength { expected: usize, got: usize },
    #[error("brute force supports at most {BRUTE_FORCE_MAX_VARS} variables, formula has {0}")]
    TooManyVariables(usize),
}

/// A 3CNF formula whose clauses each mention three distinct variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sat3Instance {
    vars: usize,
    clauses: Vec<Clause>,
}

impl Sat3Instance {
    pub fn new(vars: usize, clauses: Vec<Clause>) -> Result<Self, SatError> {
        for (j, clause) in clauses.iter().enumerate() {
            for (k, lit) in clause.iter().enumerate() {
                if lit.var >= vars {
                    return Err(SatError::VariableOutOfRange {
                        clause: j,
                        literal: lit.dimacs(),
                        vars,
                    });
                }
                if clause[..k].iter().any(|l| l.var == lit.var) {
                    return Err(SatError::RepeatedVariable {
                        clause: j,
                        var: lit.var + 1,
                    });
                }
            }
        }
        Ok(Sat3Instance { vars, clauses })
    }

    /// The running example: (x1 ∨ ¬x3 ∨ x4) ∧ (¬x1 ∨ x2 ∨ ¬x4) ∧ (¬x2 ∨ x3 ∨ x4).
    pub fn example() -> Self {
        use Literal as L;
        Sat3Instance::new(
            4,
            vec![
                [L::pos(0), L::neg(2), L::pos(3)],
                [L::neg(0), L::pos(1), L::neg(3)],
                [L::neg(1), L::pos(2), L::pos(3)],
            ],
        )
        .expect("valid example")
    }

    /// All eight sign patterns over three variables; unsatisfiable.
    pub fn complete_unsat() -> Self {
        let clauses = (0..8u8)
            .map(|mask| {
                [0, 1, 2].map(|v| Literal {
                    var: v,
                    negated: mask & (1 << v) != 0,
                })
            })
            .collect();
        Sat3Instance::new(3, clauses).expect("valid formula")
    }

    pub fn var_count(&self) -> usize {
        self.vars
    }

    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn evaluate(&self, assignment: &[bool]) -> Result<bool, SatError> {
        if assignment.len() != self.vars {
            return Err(SatError::AssignmentLength {
                expected: self.vars,
                got: assignment.len(),
            });
        }
        Ok(self.satisfied_by(assignment))
    }

    fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|l| l.eval(assignment)))
    }

    /// Index of the first clause with no true literal, if any.
    pub fn first_falsified(&self, assignment: &[bool]) -> Option<usize> {
        self.clauses
            .iter()
            .position(|c| !c.iter().any(|l| l.eval(assignment)))
    }

    /// Satisfying assignment with the lowest binary encoding (bit `i` = variable `i`),
    /// or `None` when the formula is unsatisfiable.
    pub fn solve_brute_force(&self) -> Result<Option<Vec<bool>>, SatError> {
        Ok(self.all_solutions()?.into_iter().next())
    }

    /// Every satisfying assignment in increasing encoding order.
    pub fn all_solutions(&self) -> Result<Vec<Vec<bool>>, SatError> {
        if self.vars > BRUTE_FORCE_MAX_VARS {
            return Err(SatError::TooManyVariables(self.vars));
        }
        Ok((0u64..1 << self.vars)
            .map(|code| decode_assignment(code, self.vars))
            .filter(|a| self.satisfied_by(a))
            .collect())
    }

    pub fn parse_dimacs(text: &str) -> Result<Self, SatError> {
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut current: Vec<i64> = Vec::new();
        for (index, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let lineno = index + 1;
            if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
                continue;
            }
            if line.starts_with('p') {
                let parts: Vec<&str> = line.split_whitespace().collect();
                let parsed = match parts.as_slice() {
                    ["p", "cnf", v, c] => v.parse().ok().zip(c.parse().ok()),
                    _ => None,
                };
                if header.is_some() || parsed.is_none() {
                    return Err(SatError::BadHeader {
                        line: lineno,
                        text: line.to_owned(),
                    });
                }
                header = parsed;
                continue;
            }
            let (vars, _) = header.ok_or(SatError::MissingHeader)?;
            for token in line.split_whitespace() {
                let lit: i64 = token.parse().map_err(|_| SatError::BadLiteral {
                    line: lineno,
                    token: token.to_owned(),
                })?;
                if lit == 0 {
                    clauses.push(build_clause(clauses.len(), &current, vars)?);
                    current.clear();
                } else {
                    current.push(lit);
                }
            }
        }
        let (vars, declared) = header.ok_or(SatError::MissingHeader)?;
        if !current.is_empty() {
            return Err(SatError::Unterminated);
        }
        if declared != clauses.len() {
            return Err(SatError::ClauseCount {
                declared,
                found: clauses.len(),
            });
        }
        Sat3Instance::new(vars, clauses)
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.vars, self.clauses.len());
        for clause in &self.clauses {
            for lit in clause {
                let _ = write!(out, "{} ", lit.dimacs());
            }
            out.push_str("0\n");
        }
        out
    }
}

impl fmt::Display for Sat3Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .clauses
            .iter()
            .map(|c| format!("({} ∨ {} ∨ {})", c[0], c[1], c[2]))
            .collect();
        f.write_str(&parts.join(" ∧ "))
    }
}

pub fn decode_assignment(code: u64, vars: usize) -> Vec<bool> {
    (0..vars).map(|i| code >> i & 1 == 1).collect()
}

fn build_clause(index: usize, lits: &[i64], vars: usize) -> Result<Clause, SatError> {
    if lits.len() != 3 {
        return Err(SatError::ClauseWidth {
            clause: index,
            size: lits.len(),
        });
    }
    let mut clause = [Literal::pos(0); 3];
    for (k, &lit) in lits.iter().enumerate() {
        let var = lit.unsigned_abs() as usize;
        if var > vars {
            return Err(SatError::VariableOutOfRange {
                clause: index,
                literal: lit,
                vars,
            });
        }
        clause[k] = Literal {
            var: var - 1,
            negated: lit < 0,
        };
    }
    Ok(clause)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_running_example() {
        let text = "c example\np cnf 4 3\n1 -3 4 0\n-1 2 -4 0\n-2 3 4 0\n";
        assert_eq!(Sat3Instance::parse_dimacs(text).unwrap(), Sat3Instance::example());
    }

    #[test]
    fn rejects_bad_clauses() {
        assert_eq!(
            Sat3Instance::parse_dimacs("p cnf 2 1\n1 1 2 0\n"),
            Err(SatError::RepeatedVariable { clause: 0, var: 1 })
        );
        assert_eq!(
            Sat3Instance::parse_dimacs("p cnf 2 1\n1 2 0\n"),
            Err(SatError::ClauseWidth { clause: 0, size: 2 })
        );
        assert!(matches!(
            Sat3Instance::parse_dimacs("p dnf 3 1\n1 2 3 0\n"),
            Err(SatError::BadHeader { .. })
        ));
        assert_eq!(
            Sat3Instance::parse_dimacs("1 2 3 0\n"),
            Err(SatError::MissingHeader)
        );
        assert!(matches!(
            Sat3Instance::parse_dimacs("p cnf 3 1\n1 2 5 0\n"),
            Err(SatError::VariableOutOfRange { .. })
        ));
        assert_eq!(
            Sat3Instance::parse_dimacs("p cnf 3 2\n1 2 3 0\n"),
            Err(SatError::ClauseCount { declared: 2, found: 1 })
        );
    }

    #[test]
    fn evaluation() {
        let f = Sat3Instance::example();
        assert_eq!(f.evaluate(&[true; 4]), Ok(true));
        // x1 false, x3 true, x4 false falsifies the first clause
        assert_eq!(f.evaluate(&[false, false, true, false]), Ok(false));
        assert_eq!(f.first_falsified(&[false, false, true, false]), Some(0));
        assert!(matches!(f.evaluate(&[true]), Err(SatError::AssignmentLength { .. })));
        let empty = Sat3Instance::new(2, vec![]).unwrap();
        assert_eq!(empty.evaluate(&[false, false]), Ok(true));
    }

    #[test]
    fn brute_force_oracle() {
        let f = Sat3Instance::example();
        let a = f.solve_brute_force().unwrap().unwrap();
        assert!(f.evaluate(&a).unwrap());
        // lowest encoding: every smaller code falsifies
        let code: u64 = a.iter().enumerate().map(|(i, &b)| (b as u64) << i).sum();
        for c in 0..code {
            assert!(!f.evaluate(&decode_assignment(c, 4)).unwrap());
        }
        assert_eq!(Sat3Instance::complete_unsat().solve_brute_force(), Ok(None));
        let single = Sat3Instance::new(3, vec![[Literal::pos(0), Literal::neg(1), Literal::pos(2)]]).unwrap();
        assert!(single.solve_brute_force().unwrap().is_some());
        let big = Sat3Instance::new(25, vec![]).unwrap();
        assert_eq!(big.solve_brute_force(), Err(SatError::TooManyVariables(25)));
    }

    #[test]
    fn dimacs_round_trip() {
        let f = Sat3Instance::example();
        assert_eq!(Sat3Instance::parse_dimacs(&f.to_dimacs()).unwrap(), f);
    }
}
