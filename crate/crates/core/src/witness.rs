//! Witness files: a plain-text record of one statement evaluation's inputs,
//! written next to the report and replayable with the `replay` subcommand.
//!
//! Layout (whitespace separated, `#` starts a comment):
//!
//! ```text
//! statement THEOREM_3_3
//! r 1.5
//! matrices 2
//! 2
//! 0.5 0 0 0
//! 0 0 0.25 0
//! 2
//! ...
//! ```
//!
//! Parameter lines are optional and may appear in any order before the
//! `matrices` block. `exponents` is followed by a count and that many values.

use crate::checks::{StatementId, StatementParams};
use crate::matrix::{ComplexMatrix, TextParser};
use crate::{Error, Result};

/// A statement id, its parameters, and the concrete input matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub statement: StatementId,
    pub params: StatementParams,
    pub matrices: Vec<ComplexMatrix>,
}

impl Witness {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("statement ");
        out.push_str(self.statement.as_str());
        out.push('\n');
        let p = &self.params;
        if let Some(r) = p.r {
            out.push_str(&format!("r {r}\n"));
        }
        if let Some(v) = p.p {
            out.push_str(&format!("p {v}\n"));
        }
        if let Some(v) = p.rho {
            out.push_str(&format!("rho {v}\n"));
        }
        if let Some(v) = p.alpha {
            out.push_str(&format!("alpha {v}\n"));
        }
        if let Some(v) = p.m {
            out.push_str(&format!("m {v}\n"));
        }
        if let Some(ps) = &p.exponents {
            out.push_str(&format!("exponents {}", ps.len()));
            for v in ps {
                out.push_str(&format!(" {v}"));
            }
            out.push('\n');
        }
        if let Some(f) = &p.function {
            out.push_str(&format!("function {f}\n"));
        }
        out.push_str(&format!("matrices {}\n", self.matrices.len()));
        for m in &self.matrices {
            out.push_str(&m.to_text());
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut parser = TextParser::new(text);
        let head = parser.next_token()?;
        if head != "statement" {
            return Err(Error::Parse {
                line: 1,
                column: 1,
                message: format!("expected `statement`, got `{head}`"),
            });
        }
        let statement: StatementId = parser.next_token()?.parse()?;
        let mut params = StatementParams::default();
        let count = loop {
            match parser.next_token()? {
                "r" => params.r = Some(parser.f64_token()?),
                "p" => params.p = Some(parser.f64_token()?),
                "rho" => params.rho = Some(parser.f64_token()?),
                "alpha" => params.alpha = Some(parser.f64_token()?),
                "m" => params.m = Some(parser.usize_token()?),
                "exponents" => {
                    let k = parser.usize_token()?;
                    let mut ps = Vec::with_capacity(k);
                    for _ in 0..k {
                        ps.push(parser.f64_token()?);
                    }
                    params.exponents = Some(ps);
                }
                "function" => params.function = Some(parser.next_token()?.to_string()),
                "matrices" => break parser.usize_token()?,
                other => {
                    return Err(Error::Parse {
                        line: 0,
                        column: 0,
                        message: format!("unknown witness field `{other}`"),
                    })
                }
            }
        };
        let mut matrices = Vec::with_capacity(count);
        for _ in 0..count {
            matrices.push(parser.matrix()?);
        }
        parser.finish()?;
        Ok(Witness {
            statement,
            params,
            matrices,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn round_trip_is_exact() {
        let m = ComplexMatrix::new(
            2,
            vec![
                Complex64::new(0.1, -0.7),
                Complex64::new(1.0 / 3.0, 0.0),
                Complex64::new(-2.5e-13, 4.0),
                Complex64::new(0.0, 0.0),
            ],
        )
        .unwrap();
        let w = Witness {
            statement: StatementId::Theorem33,
            params: StatementParams {
                r: Some(1.25),
                ..Default::default()
            },
            matrices: vec![m.clone(), m],
        };
        let back = Witness::from_text(&w.to_text()).unwrap();
        assert_eq!(w, back);
    }

    #[test]
    fn exponents_and_function_round_trip() {
        let w = Witness {
            statement: StatementId::Theorem46,
            params: StatementParams {
                r: Some(2.0),
                exponents: Some(vec![2.0, 4.0, 4.0]),
                m: Some(3),
                function: Some("logshift(0.5)".into()),
                ..Default::default()
            },
            matrices: vec![ComplexMatrix::identity(1); 3],
        };
        let back = Witness::from_text(&w.to_text()).unwrap();
        assert_eq!(w, back);
    }

    #[test]
    fn rejects_unknown_field() {
        let err = Witness::from_text("statement LEMMA_4_1\nbogus 1\nmatrices 0\n").unwrap_err();
        assert!(err.to_string().contains("bogus"));
    }

    #[test]
    fn rejects_unknown_statement() {
        assert!(Witness::from_text("statement NOPE\nmatrices 0\n").is_err());
    }
}
