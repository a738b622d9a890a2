use std::fmt;

use super::{add, call, div, mul, neg, pow, sub, Expr, Func};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Empty,
    UnexpectedChar(char),
    UnexpectedToken(String),
    UnexpectedEnd,
    UnbalancedParenthesis,
    InvalidNumber(String),
    UnknownFunction(String),
    UnknownIdentifier(String),
    Arity {
        name: String,
        expected: usize,
        got: usize,
    },
}

/// Parse failure with a 1-based column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub column: usize,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let col = self.column;
        match &self.kind {
            ParseErrorKind::Empty => write!(f, "empty expression"),
            ParseErrorKind::UnexpectedChar(c) => {
                write!(f, "unexpected character '{c}' at column {col}")
            }
            ParseErrorKind::UnexpectedToken(tok) => {
                write!(f, "unexpected '{tok}' at column {col}")
            }
            ParseErrorKind::UnexpectedEnd => write!(f, "unexpected end of input at column {col}"),
            ParseErrorKind::UnbalancedParenthesis => {
                write!(f, "unbalanced parenthesis at column {col}")
            }
            ParseErrorKind::InvalidNumber(s) => write!(f, "invalid number '{s}' at column {col}"),
            ParseErrorKind::UnknownFunction(name) => {
                write!(f, "unknown function '{name}' at column {col}")
            }
            ParseErrorKind::UnknownIdentifier(name) => {
                write!(f, "unknown identifier '{name}' at column {col}")
            }
            ParseErrorKind::Arity {
                name,
                expected,
                got,
            } => write!(
                f,
                "function '{name}' takes {expected} argument(s), got {got} at column {col}"
            ),
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    Comma,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => v.to_string(),
            Tok::Ident(s) => s.clone(),
            Tok::Op(c) => c.to_string(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
            Tok::Comma => ",".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn err<T>(kind: ParseErrorKind, column: usize) -> Result<T, ParseError> {
    Err(ParseError { kind, column })
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            // exponent part, only if followed by digits
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
            match text.parse::<f64>() {
                Ok(v) => out.push((Tok::Num(v), col)),
                Err(_) => return err(ParseErrorKind::InvalidNumber(text), col),
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
            continue;
        }
        let tok = match c {
            '+' | '-' | '*' | '/' | '^' => Tok::Op(c),
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            _ => return err(ParseErrorKind::UnexpectedChar(c), col),
        };
        out.push((tok, col));
        i += 1;
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    max_x: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn column(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Op('+') => {
                    self.bump();
                    lhs = add(lhs, self.term()?);
                }
                Tok::Op('-') => {
                    self.bump();
                    lhs = sub(lhs, self.term()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Op('*') => {
                    self.bump();
                    lhs = mul(lhs, self.unary()?);
                }
                Tok::Op('/') => {
                    self.bump();
                    lhs = div(lhs, self.unary()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Tok::Op('-') => {
                self.bump();
                Ok(neg(self.unary()?))
            }
            Tok::Op('+') => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if let Tok::Op('^') = self.peek() {
            self.bump();
            // right-associative; the exponent may carry its own sign
            let exponent = self.unary()?;
            return Ok(pow(base, exponent));
        }
        Ok(base)
    }

    fn expect_close(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::RParen => {
                self.bump();
                Ok(())
            }
            Tok::End => err(ParseErrorKind::UnbalancedParenthesis, self.column()),
            other => err(
                ParseErrorKind::UnexpectedToken(other.describe()),
                self.column(),
            ),
        }
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let (tok, col) = self.bump();
        match tok {
            Tok::Num(v) => Ok(Expr::Const(v)),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect_close()?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                if let Tok::LParen = self.peek() {
                    self.bump();
                    let Some(func) = Func::from_name(&name) else {
                        return err(ParseErrorKind::UnknownFunction(name), col);
                    };
                    let mut args = vec![self.expr()?];
                    while let Tok::Comma = self.peek() {
                        self.bump();
                        args.push(self.expr()?);
                    }
                    self.expect_close()?;
                    if args.len() != func.arity() {
                        return err(
                            ParseErrorKind::Arity {
                                name,
                                expected: func.arity(),
                                got: args.len(),
                            },
                            col,
                        );
                    }
                    return Ok(call(func, args.pop().expect("one argument")));
                }
                self.identifier(name, col)
            }
            Tok::End => err(ParseErrorKind::UnexpectedEnd, col),
            Tok::RParen => err(ParseErrorKind::UnbalancedParenthesis, col),
            other => err(ParseErrorKind::UnexpectedToken(other.describe()), col),
        }
    }

    fn identifier(&self, name: String, col: usize) -> Result<Expr, ParseError> {
        match name.as_str() {
            "t" => return Ok(Expr::Var(0)),
            "pi" => return Ok(Expr::Const(std::f64::consts::PI)),
            "e" => return Ok(Expr::Const(std::f64::consts::E)),
            _ => {}
        }
        if let Some(idx) = name.strip_prefix('x').and_then(|s| s.parse::<usize>().ok()) {
            if (1..=self.max_x).contains(&idx) && !name[1..].starts_with('0') {
                return Ok(Expr::Var(idx));
            }
        }
        if Func::from_name(&name).is_some() {
            return err(
                ParseErrorKind::Arity {
                    name,
                    expected: 1,
                    got: 0,
                },
                col,
            );
        }
        err(ParseErrorKind::UnknownIdentifier(name), col)
    }
}

/// Parse `source`, accepting base coordinates `x1..x{max_x}`.
/// Use `max_x = 0` for profiles in `t` alone.
pub fn parse(source: &str, max_x: usize) -> Result<Expr, ParseError> {
    let toks = tokenize(source)?;
    if toks.len() == 1 {
        return err(ParseErrorKind::Empty, 1);
    }
    let mut p = Parser {
        toks,
        pos: 0,
        max_x,
    };
    let e = p.expr()?;
    match p.peek() {
        Tok::End => Ok(e),
        Tok::RParen => err(ParseErrorKind::UnbalancedParenthesis, p.column()),
        other => err(
            ParseErrorKind::UnexpectedToken(other.describe()),
            p.column(),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kind(src: &str) -> (ParseErrorKind, usize) {
        let e = parse(src, 2).unwrap_err();
        (e.kind, e.column)
    }

    #[test]
    fn unclosed_call_reports_column_after_input() {
        let e = parse("ln(t", 0).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnbalancedParenthesis);
        assert_eq!(e.column, 5);
        assert_eq!(e.to_string(), "unbalanced parenthesis at column 5");
    }

    #[test]
    fn stray_closing_parenthesis() {
        assert_eq!(kind("t)"), (ParseErrorKind::UnbalancedParenthesis, 2));
    }

    #[test]
    fn unknown_names_are_rejected() {
        assert_eq!(
            kind("tan(t)").0,
            ParseErrorKind::UnknownFunction("tan".into())
        );
        assert_eq!(
            kind("y + 1").0,
            ParseErrorKind::UnknownIdentifier("y".into())
        );
        assert_eq!(kind("x3").0, ParseErrorKind::UnknownIdentifier("x3".into()));
        assert_eq!(
            parse("x1", 0).unwrap_err().kind,
            ParseErrorKind::UnknownIdentifier("x1".into())
        );
    }

    #[test]
    fn arity_mismatch() {
        let (k, col) = kind("exp(t, 2)");
        assert_eq!(
            k,
            ParseErrorKind::Arity {
                name: "exp".into(),
                expected: 1,
                got: 2
            }
        );
        assert_eq!(col, 1);
        assert!(matches!(
            kind("2*sin").0,
            ParseErrorKind::Arity { got: 0, .. }
        ));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        assert_eq!(kind(""), (ParseErrorKind::Empty, 1));
        assert_eq!(kind("t +"), (ParseErrorKind::UnexpectedEnd, 4));
        assert_eq!(kind("t $ 2"), (ParseErrorKind::UnexpectedChar('$'), 3));
        assert_eq!(kind("t t").1, 3);
        assert_eq!(
            kind("1.2.3").0,
            ParseErrorKind::InvalidNumber("1.2.3".into())
        );
    }

    #[test]
    fn numbers_with_exponents() {
        assert_eq!(parse("1e-3", 0).unwrap(), Expr::Const(1e-3));
        assert_eq!(parse("2.5E2", 0).unwrap(), Expr::Const(250.0));
        assert_eq!(
            parse("2*e", 0).unwrap(),
            Expr::Const(2.0 * std::f64::consts::E)
        );
    }
}
