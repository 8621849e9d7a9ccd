//! Boundary-data expression grammar.
//!
//! Expressions are functions of the boundary parameter: `theta` is the angle
//! from the domain centroid (disks) or `2*pi*s` (polygons), and `s` is the
//! normalized arclength in [0, 1). Supported: numeric literals, `pi`,
//! `+ - * /`, unary minus, integer powers with `^`, `sin(...)`, `cos(...)`,
//! `abs(...)`, and parentheses.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub struct ExprError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ExprError {}

#[derive(Debug, Clone)]
pub enum Expr {
    Const(f64),
    Theta,
    ArcLength,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Abs(Box<Expr>),
}

impl Expr {
    /// Evaluate at a boundary position given by angle and normalized
    /// arclength.
    pub fn eval(&self, theta: f64, s: f64) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::Theta => theta,
            Expr::ArcLength => s,
            Expr::Add(a, b) => a.eval(theta, s) + b.eval(theta, s),
            Expr::Sub(a, b) => a.eval(theta, s) - b.eval(theta, s),
            Expr::Mul(a, b) => a.eval(theta, s) * b.eval(theta, s),
            Expr::Div(a, b) => a.eval(theta, s) / b.eval(theta, s),
            Expr::Neg(a) => -a.eval(theta, s),
            Expr::Pow(a, k) => a.eval(theta, s).powi(*k as i32),
            Expr::Sin(a) => a.eval(theta, s).sin(),
            Expr::Cos(a) => a.eval(theta, s).cos(),
            Expr::Abs(a) => a.eval(theta, s).abs(),
        }
    }
}

pub fn parse(input: &str) -> Result<Expr, ExprError> {
    let mut p = Parser {
        bytes: input.as_bytes(),
        pos: 0,
    };
    let expr = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(expr)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, message: &str) -> ExprError {
        ExprError {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(b'/') => {
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.err("expected a nonnegative integer exponent after '^'"));
            }
            let k: u32 = std::str::from_utf8(&self.bytes[start..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| self.err("exponent out of range"))?;
            return Ok(Expr::Pow(Box::new(base), k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.ident(),
            Some(_) => Err(self.err("expected a number, name or '('")),
            None => Err(self.err("unexpected end of expression")),
        }
    }

    fn number(&mut self) -> Result<Expr, ExprError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_digit()
                || self.bytes[self.pos] == b'.'
                || self.bytes[self.pos] == b'e'
                || self.bytes[self.pos] == b'E'
                || ((self.bytes[self.pos] == b'+' || self.bytes[self.pos] == b'-')
                    && self.pos > start
                    && (self.bytes[self.pos - 1] == b'e' || self.bytes[self.pos - 1] == b'E')))
        {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        text.parse::<f64>()
            .map(Expr::Const)
            .map_err(|_| ExprError {
                position: start,
                message: format!("invalid number '{}'", text),
            })
    }

    fn ident(&mut self) -> Result<Expr, ExprError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        match name {
            "pi" => Ok(Expr::Const(std::f64::consts::PI)),
            "theta" | "t" => Ok(Expr::Theta),
            "s" => Ok(Expr::ArcLength),
            "sin" | "cos" | "abs" => {
                if self.peek() != Some(b'(') {
                    return Err(self.err(&format!("expected '(' after '{}'", name)));
                }
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(match name {
                    "sin" => Expr::Sin(Box::new(inner)),
                    "cos" => Expr::Cos(Box::new(inner)),
                    _ => Expr::Abs(Box::new(inner)),
                })
            }
            other => Err(ExprError {
                position: start,
                message: format!("unknown name '{}'", other),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(src: &str, theta: f64) -> f64 {
        parse(src).unwrap().eval(theta, theta / std::f64::consts::TAU)
    }

    #[test]
    fn arithmetic_and_precedence() {
        assert_eq!(eval("1 + 2 * 3", 0.0), 7.0);
        assert_eq!(eval("(1 + 2) * 3", 0.0), 9.0);
        assert_eq!(eval("2 ^ 3 * 2", 0.0), 16.0);
        assert_eq!(eval("-2 ^ 2", 0.0), -4.0);
        assert_eq!(eval("1 / 4", 0.0), 0.25);
    }

    #[test]
    fn trig_and_variables() {
        let th = 0.7;
        assert_eq!(eval("sin(2*theta)", th), (2.0 * th).sin());
        assert_eq!(eval("cos(theta) ^ 2", th), th.cos().powi(2));
        assert!((eval("sin(pi)", 0.0)).abs() < 1e-15);
        assert_eq!(eval("s", std::f64::consts::TAU), 1.0);
        assert_eq!(eval("abs(-3)", 0.0), 3.0);
    }

    #[test]
    fn polynomial_in_theta() {
        let th = 1.3;
        assert!((eval("0.5*theta^3 - theta + 2", th) - (0.5 * th.powi(3) - th + 2.0)).abs() < 1e-15);
    }

    #[test]
    fn malformed_expressions_error_with_position() {
        for bad in ["sin(", "1 +", "foo", "2 ^ -1", "(1", "1 2"] {
            let err = parse(bad).unwrap_err();
            assert!(!err.message.is_empty(), "{}", bad);
        }
    }
}
