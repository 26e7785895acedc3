//! Recursive-descent parser for the ASCII concrete syntax.
//!
//! ```text
//! formula := iexp
//! iexp    := oexp (("->" | "<-") iexp)?
//! oexp    := aexp ("|" aexp)*
//! aexp    := uexp ("&" uexp)*
//! uexp    := ("!" | "~")* atom
//! atom    := ident | "true" | "false" | "(" formula ")"
//! ```

use super::Formula;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    True,
    False,
    LParen,
    RParen,
    Arrow,
    BackArrow,
    Or,
    And,
    Not,
    Conot,
    End,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'|' => Tok::Or,
            b'&' => Tok::And,
            b'!' => Tok::Not,
            b'~' => Tok::Conot,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            b'<' if bytes.get(i + 1) == Some(&b'-') => {
                i += 1;
                Tok::BackArrow
            }
            c if c.is_ascii_alphabetic() => {
                while i + 1 < bytes.len()
                    && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_')
                {
                    i += 1;
                }
                match &src[start..=i] {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    name => Tok::Ident(name.to_string()),
                }
            }
            _ => {
                let ch = src[start..].chars().next().unwrap();
                return Err(Error::Syntax {
                    offset: start,
                    message: format!("unexpected character `{ch}`"),
                });
            }
        };
        i += 1;
        out.push((tok, start));
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: &str) -> Result<T> {
        Err(Error::Syntax {
            offset: self.offset(),
            message: message.to_string(),
        })
    }

    fn iexp(&mut self) -> Result<Formula> {
        let mut operands = vec![self.oexp()?];
        let mut kind: Option<Tok> = None;
        while matches!(self.peek(), Tok::Arrow | Tok::BackArrow) {
            let at = self.offset();
            let op = self.bump();
            match &kind {
                Some(k) if *k != op => return Err(Error::Ambiguity { offset: at }),
                _ => kind = Some(op),
            }
            operands.push(self.oexp()?);
        }
        let mut acc = operands.pop().unwrap();
        while let Some(lhs) = operands.pop() {
            acc = match kind {
                Some(Tok::Arrow) => Formula::imp(lhs, acc),
                _ => Formula::coimp(lhs, acc),
            };
        }
        Ok(acc)
    }

    fn oexp(&mut self) -> Result<Formula> {
        let mut acc = self.aexp()?;
        while *self.peek() == Tok::Or {
            self.bump();
            acc = Formula::or(acc, self.aexp()?);
        }
        Ok(acc)
    }

    fn aexp(&mut self) -> Result<Formula> {
        let mut acc = self.uexp()?;
        while *self.peek() == Tok::And {
            self.bump();
            acc = Formula::and(acc, self.uexp()?);
        }
        Ok(acc)
    }

    fn uexp(&mut self) -> Result<Formula> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.uexp()?))
            }
            Tok::Conot => {
                self.bump();
                Ok(Formula::conot(self.uexp()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Ok(Formula::Var(name))
            }
            Tok::True => {
                self.bump();
                Ok(Formula::Top)
            }
            Tok::False => {
                self.bump();
                Ok(Formula::Bot)
            }
            Tok::LParen => {
                self.bump();
                let f = self.iexp()?;
                if *self.peek() != Tok::RParen {
                    return self.error("expected `)`");
                }
                self.bump();
                Ok(f)
            }
            Tok::End => self.error("unexpected end of input"),
            _ => self.error("expected a variable, constant or `(`"),
        }
    }
}

/// Parses a formula. Errors carry the byte offset of the offending token.
pub fn parse(text: &str) -> Result<Formula> {
    let mut parser = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let f = parser.iexp()?;
    if *parser.peek() != Tok::End {
        return parser.error("trailing input");
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Formula {
        Formula::var(s)
    }

    #[test]
    fn spec_shapes() {
        assert_eq!(parse("(p -> q) | (q -> p)").unwrap(), Formula::prelinearity());
        assert_eq!(parse("~p").unwrap(), Formula::coimp(Formula::Top, v("p")));
        assert_eq!(
            parse("p -> q -> r").unwrap(),
            Formula::imp(v("p"), Formula::imp(v("q"), v("r")))
        );
        assert_eq!(
            parse("p <- q <- r").unwrap(),
            Formula::coimp(v("p"), Formula::coimp(v("q"), v("r")))
        );
    }

    #[test]
    fn precedence() {
        assert_eq!(
            parse("p & q | r -> !s").unwrap(),
            Formula::imp(
                Formula::or(Formula::and(v("p"), v("q")), v("r")),
                Formula::not(v("s"))
            )
        );
        assert_eq!(
            parse("a | b | c").unwrap(),
            Formula::or(Formula::or(v("a"), v("b")), v("c"))
        );
        assert_eq!(parse("!~x_1").unwrap(), Formula::not(Formula::conot(v("x_1"))));
        assert_eq!(parse(" true&false ").unwrap(), Formula::and(Formula::Top, Formula::Bot));
        assert_eq!(
            parse("!( (q<-p) & (p<-q) )").unwrap(),
            Formula::chain_axiom()
        );
    }

    #[test]
    fn mixed_arrows_rejected() {
        assert_eq!(parse("p -> q <- r"), Err(Error::Ambiguity { offset: 7 }));
        assert!(parse("p -> (q <- r)").is_ok());
        assert!(parse("(p -> q) <- r").is_ok());
    }

    #[test]
    fn syntax_errors_report_offsets() {
        assert!(matches!(parse("p &"), Err(Error::Syntax { offset: 3, .. })));
        assert!(matches!(parse("(p"), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse("p q"), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse("p $ q"), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse("_p"), Err(Error::Syntax { offset: 0, .. })));
        assert!(matches!(parse(""), Err(Error::Syntax { offset: 0, .. })));
        assert!(matches!(parse("p - q"), Err(Error::Syntax { offset: 2, .. })));
    }
}
