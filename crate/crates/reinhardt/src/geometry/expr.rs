//! A small expression language for exponent profiles `p̌(s)`.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' unary)?
//! atom  := number | 's' | func '(' expr ')' | '(' expr ')'
//! func  := log | exp | sqrt
//! ```

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{message} at column {position}\n  {source_text}\n  {caret}")]
pub struct ParseError {
    pub message: String,
    /// Zero-based character offset into the source.
    pub position: usize,
    pub source_text: String,
    caret: String,
}

impl ParseError {
    fn new(message: impl Into<String>, position: usize, source: &str) -> Self {
        ParseError {
            message: message.into(),
            position,
            source_text: source.to_string(),
            caret: format!("{}^", " ".repeat(position)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Log,
    Exp,
    Sqrt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr, ParseError> {
        let tokens = lex(src)?;
        let mut p = Parser { tokens, pos: 0, src };
        let e = p.expr()?;
        match p.peek() {
            Tok::End => Ok(e),
            _ => Err(ParseError::new("unexpected trailing input", p.offset(), src)),
        }
    }

    pub fn eval(&self, s: f64) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Var => s,
            Expr::Neg(e) => -e.eval(s),
            Expr::Bin(op, a, b) => {
                let (x, y) = (a.eval(s), b.eval(s));
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => x / y,
                    BinOp::Pow => x.powf(y),
                }
            }
            Expr::Call(f, e) => {
                let x = e.eval(s);
                match f {
                    Func::Log => x.ln(),
                    Func::Exp => x.exp(),
                    Func::Sqrt => x.sqrt(),
                }
            }
        }
    }

    pub fn depends_on_s(&self) -> bool {
        match self {
            Expr::Num(_) => false,
            Expr::Var => true,
            Expr::Neg(e) | Expr::Call(_, e) => e.depends_on_s(),
            Expr::Bin(_, a, b) => a.depends_on_s() || b.depends_on_s(),
        }
    }

    /// The conjugate exponent `e/(e-1)` as a new expression.
    pub fn conjugate(&self) -> Expr {
        Expr::Bin(
            BinOp::Div,
            Box::new(self.clone()),
            Box::new(Expr::Bin(BinOp::Sub, Box::new(self.clone()), Box::new(Expr::Num(1.0)))),
        )
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Var => write!(f, "s"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Bin(op, a, b) => {
                let sym = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                    BinOp::Pow => "^",
                };
                write!(f, "({a}{sym}{b})")
            }
            Expr::Call(func, e) => {
                let name = match func {
                    Func::Log => "log",
                    Func::Exp => "exp",
                    Func::Sqrt => "sqrt",
                };
                write!(f, "{name}({e})")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    End,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() || c == '.' {
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text: String = chars[start..i].iter().collect();
            let v = text
                .parse::<f64>()
                .map_err(|_| ParseError::new(format!("malformed number '{text}'"), start, src))?;
            out.push((Tok::Num(v), start));
        } else if c.is_ascii_alphabetic() {
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), start));
        } else {
            let tok = match c {
                '+' | '-' | '*' | '/' | '^' => Tok::Op(c),
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                _ => return Err(ParseError::new(format!("unexpected character '{c}'"), start, src)),
            };
            out.push((tok, start));
            i += 1;
        }
    }
    out.push((Tok::End, chars.len()));
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(Tok, usize)>,
    pos: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].0
    }

    fn offset(&self) -> usize {
        self.tokens[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.tokens[self.pos].0.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(msg, self.offset(), self.src)
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Op('+') => BinOp::Add,
                Tok::Op('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Op('*') => BinOp::Mul,
                Tok::Op('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == &Tok::Op('-') {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() == &Tok::Op('^') {
            self.bump();
            let exp = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let at = self.offset();
        match self.bump() {
            Tok::Num(v) => Ok(Expr::Num(v)),
            Tok::Ident(name) => match name.as_str() {
                "s" => Ok(Expr::Var),
                "log" | "exp" | "sqrt" => {
                    let func = match name.as_str() {
                        "log" => Func::Log,
                        "exp" => Func::Exp,
                        _ => Func::Sqrt,
                    };
                    if self.peek() != &Tok::LParen {
                        return Err(self.err(format!("expected '(' after {name}")));
                    }
                    self.bump();
                    let arg = self.expr()?;
                    self.expect_rparen()?;
                    Ok(Expr::Call(func, Box::new(arg)))
                }
                _ => Err(ParseError::new(format!("unknown identifier '{name}'"), at, self.src)),
            },
            Tok::LParen => {
                let e = self.expr()?;
                self.expect_rparen()?;
                Ok(e)
            }
            Tok::End => Err(ParseError::new("unexpected end of input", at, self.src)),
            Tok::Op(c) => Err(ParseError::new(format!("unexpected operator '{c}'"), at, self.src)),
            Tok::RParen => Err(ParseError::new("unexpected ')'", at, self.src)),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        if self.peek() == &Tok::RParen {
            self.bump();
            Ok(())
        } else {
            Err(self.err("expected ')'"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(src: &str, s: f64) -> f64 {
        Expr::parse(src).unwrap().eval(s)
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(ev("1+2*3", 0.0), 7.0);
        assert_eq!(ev("2^3^2", 0.0), 512.0);
        assert_eq!(ev("-2^2", 0.0), -4.0);
        assert_eq!(ev("2^-1", 0.0), 0.5);
        assert_eq!(ev("8/4/2", 0.0), 1.0);
        assert_eq!(ev("(1+2)*3", 0.0), 9.0);
        assert_eq!(ev("1.5e1 - s", 5.0), 10.0);
    }

    #[test]
    fn functions_and_variable() {
        let v = ev("2+1/log(10/s)", 0.5);
        assert!((v - (2.0 + 1.0 / (20f64).ln())).abs() < 1e-15);
        assert!((ev("sqrt(s)*exp(0)", 0.25) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn errors_carry_positions() {
        let e = Expr::parse("2 + * s").unwrap_err();
        assert_eq!(e.position, 4);
        assert!(e.to_string().contains("    ^"));
        assert_eq!(Expr::parse("foo(s)").unwrap_err().position, 0);
        assert_eq!(Expr::parse("log s").unwrap_err().position, 4);
        assert_eq!(Expr::parse("(s+1").unwrap_err().position, 4);
        assert_eq!(Expr::parse("s $ 2").unwrap_err().position, 2);
        assert_eq!(Expr::parse("s 2").unwrap_err().position, 2);
    }

    #[test]
    fn constant_detection() {
        assert!(!Expr::parse("4").unwrap().depends_on_s());
        assert!(!Expr::parse("2*log(3)").unwrap().depends_on_s());
        assert!(Expr::parse("2+s*0").unwrap().depends_on_s());
    }

    #[test]
    fn display_round_trips() {
        let e = Expr::parse("2+1/log(10/s)^-2").unwrap();
        let again = Expr::parse(&e.to_string()).unwrap();
        for s in [0.1, 0.5, 0.9] {
            assert_eq!(e.eval(s), again.eval(s));
        }
    }
}
