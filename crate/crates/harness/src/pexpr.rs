//! Edge-probability expressions in the vertex count, such as `1.5*log(n)/n`.
//!
//! Grammar: numbers, the variable `n`, `+ - * / ^`, parentheses, and the
//! functions `log` / `ln` (natural), `log2` and `sqrt`. `^` binds tighter
//! than unary minus and associates to the right.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::HarnessError;

#[derive(Clone, Debug, PartialEq)]
enum Node {
    Num(f64),
    N,
    Neg(Box<Node>),
    Bin(char, Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Func {
    Ln,
    Log2,
    Sqrt,
}

/// A parsed expression together with its source text.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct PExpr {
    source: String,
    root: Node,
}

impl PExpr {
    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn eval(&self, n: usize) -> f64 {
        eval(&self.root, n as f64)
    }

    /// Evaluates and checks the result is a probability.
    pub fn probability(&self, n: usize) -> Result<f64, HarnessError> {
        let p = self.eval(n);
        if (0.0..=1.0).contains(&p) {
            Ok(p)
        } else {
            Err(HarnessError::Expr {
                expr: self.source.clone(),
                msg: format!("evaluates to {p} at n = {n}, outside [0, 1]"),
            })
        }
    }
}

fn eval(node: &Node, n: f64) -> f64 {
    match node {
        Node::Num(x) => *x,
        Node::N => n,
        Node::Neg(a) => -eval(a, n),
        Node::Bin(op, a, b) => {
            let (a, b) = (eval(a, n), eval(b, n));
            match op {
                '+' => a + b,
                '-' => a - b,
                '*' => a * b,
                '/' => a / b,
                _ => a.powf(b),
            }
        }
        Node::Call(f, a) => {
            let a = eval(a, n);
            match f {
                Func::Ln => a.ln(),
                Func::Log2 => a.log2(),
                Func::Sqrt => a.sqrt(),
            }
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, HarnessError> {
        Err(HarnessError::Expr {
            expr: self.src.to_string(),
            msg: format!("{} at offset {}", msg.into(), self.pos),
        })
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Node, HarnessError> {
        let mut lhs = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(self.term()?));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Node, HarnessError> {
        let mut lhs = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek() {
            self.pos += 1;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Node, HarnessError> {
        if self.eat('-') {
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node, HarnessError> {
        let base = self.atom()?;
        if self.eat('^') {
            return Ok(Node::Bin('^', Box::new(base), Box::new(self.unary()?)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node, HarnessError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let rest = &self.src[self.pos..];
                let mut len = rest
                    .find(|c: char| !(c.is_ascii_digit() || c == '.'))
                    .unwrap_or(rest.len());
                // Scientific notation such as 1e-3.
                if rest[len..].starts_with(['e', 'E']) {
                    let exp = &rest[len + 1..];
                    let sign = usize::from(exp.starts_with(['+', '-']));
                    let digits = exp[sign..].find(|c: char| !c.is_ascii_digit()).unwrap_or(exp.len() - sign);
                    if digits > 0 {
                        len += 1 + sign + digits;
                    }
                }
                match rest[..len].parse::<f64>() {
                    Ok(x) => {
                        self.pos += len;
                        Ok(Node::Num(x))
                    }
                    Err(_) => self.err(format!("bad number {:?}", &rest[..len])),
                }
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let rest = &self.src[self.pos..];
                let len = rest
                    .find(|c: char| !c.is_ascii_alphanumeric())
                    .unwrap_or(rest.len());
                let name = &rest[..len];
                self.pos += len;
                let func = match name {
                    "n" => return Ok(Node::N),
                    "log" | "ln" => Func::Ln,
                    "log2" => Func::Log2,
                    "sqrt" => Func::Sqrt,
                    _ => return self.err(format!("unknown name {name:?}")),
                };
                if !self.eat('(') {
                    return self.err(format!("expected '(' after {name}"));
                }
                let arg = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(Node::Call(func, Box::new(arg)))
            }
            Some(c) => self.err(format!("unexpected {c:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

impl FromStr for PExpr {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser { src: s, pos: 0 };
        let root = p.expr()?;
        if p.peek().is_some() {
            return p.err("trailing input");
        }
        Ok(PExpr {
            source: s.trim().to_string(),
            root,
        })
    }
}

impl TryFrom<String> for PExpr {
    type Error = HarnessError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<PExpr> for String {
    fn from(p: PExpr) -> String {
        p.source
    }
}

impl fmt::Display for PExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(s: &str, n: usize) -> f64 {
        s.parse::<PExpr>().unwrap().eval(n)
    }

    #[test]
    fn evaluates() {
        assert_eq!(at("1/2", 10), 0.5);
        assert_eq!(at("3/n", 300), 0.01);
        assert!((at("1.5*log(n)/n", 1024) - 1.5 * 1024f64.ln() / 1024.0).abs() < 1e-15);
        assert_eq!(at("2^3^2", 0), 512.0);
        assert_eq!(at("-2^2", 0), -4.0);
        assert_eq!(at("log2(n)", 8), 3.0);
        assert_eq!(at("1e-3 + 2E2", 0), 200.001);
        assert!((at("1/log(n)^6", 4096) - 4096f64.ln().powi(-6)).abs() < 1e-18);
        assert_eq!(at(" ( 1 + 1 ) * sqrt(n) ", 16), 8.0);
    }

    #[test]
    fn rejects() {
        for bad in ["", "1 +", "foo(2)", "log 2", "(1", "1 2", "n$"] {
            assert!(bad.parse::<PExpr>().is_err(), "{bad}");
        }
        let p: PExpr = "2/n".parse().unwrap();
        assert!(p.probability(1).is_err());
        assert_eq!(p.probability(4).unwrap(), 0.5);
    }

    #[test]
    fn serde_as_string() {
        assert!(serde_json::from_str::<PExpr>("\"c/n\"").is_err());
        let q: PExpr = serde_json::from_str("\"1/n\"").unwrap();
        assert_eq!(serde_json::to_string(&q).unwrap(), "\"1/n\"");
    }
}
