//! A small arithmetic expression language shared by polynomial witnesses
//! (`x2 - l*x1 - m*x1^2`) and curve matrices
//! (`diag(1, eps*(l+m), eps) + eps*E12 + l*E21 + E32`).

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::eps::{EpsMatrix, RatFunc};
use crate::error::{Error, Result};
use crate::free_algebra::{NCMatrix, NCPoly};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push((start, Tok::Num(digits.parse().expect("ascii digits"))));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((start, Tok::Ident(chars[start..i].iter().collect())));
        } else if "+-*/^(),[]".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(Error::parse(i, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
enum Expr {
    Num(BigInt),
    Ident(String, usize),
    Neg(Box<Expr>),
    Bin(char, Box<Expr>, Box<Expr>, usize),
    Pow(Box<Expr>, i64, usize),
    Call(String, Vec<Expr>, usize),
    List(Vec<Expr>, usize),
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Parser> {
        Ok(Parser {
            toks: tokenize(text)?,
            pos: 0,
            end: text.chars().count(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::parse(self.offset(), format!("expected `{c}`")))
        }
    }

    fn parse_all(mut self) -> Result<Expr> {
        let e = self.expr()?;
        if self.pos < self.toks.len() {
            return Err(Error::parse(self.offset(), "unexpected trailing input"));
        }
        Ok(e)
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let at = self.offset();
            let op = if self.eat('+') {
                '+'
            } else if self.eat('-') {
                '-'
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs), at);
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let at = self.offset();
            let op = if self.eat('*') {
                '*'
            } else if self.eat('/') {
                '/'
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs), at);
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        let at = self.offset();
        if !self.eat('^') {
            return Ok(base);
        }
        let negative = self.eat('-');
        let exp_at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let k: i64 = n.try_into().map_err(|_| Error::parse(exp_at, "exponent too large"))?;
                Ok(Expr::Pow(Box::new(base), if negative { -k } else { k }, at))
            }
            _ => Err(Error::parse(exp_at, "expected an integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Num(n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.eat('(') {
                    let args = self.list_until(')')?;
                    Ok(Expr::Call(name, args, at))
                } else {
                    Ok(Expr::Ident(name, at))
                }
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Sym('[')) => {
                self.pos += 1;
                Ok(Expr::List(self.list_until(']')?, at))
            }
            Some(_) => Err(Error::parse(at, "expected a number, name or parenthesis")),
            None => Err(Error::parse(at, "unexpected end of input")),
        }
    }

    fn list_until(&mut self, close: char) -> Result<Vec<Expr>> {
        let mut items = Vec::new();
        if self.eat(close) {
            return Ok(items);
        }
        loop {
            items.push(self.expr()?);
            if self.eat(close) {
                return Ok(items);
            }
            self.expect(',')?;
        }
    }
}

fn rational(n: &BigInt) -> Scalar {
    Scalar::Rat(BigRational::from_integer(n.clone()))
}

/// Generator index of a name `x<k>` or `x_<k>`.
fn generator(name: &str) -> Option<usize> {
    let rest = name.strip_prefix('x')?;
    let rest = rest.strip_prefix('_').unwrap_or(rest);
    let k: usize = rest.parse().ok()?;
    (k >= 1 && rest.chars().all(|c| c.is_ascii_digit())).then_some(k)
}

/// Matrix unit name `E<i><j>` or `E_<i><j>` (single-digit, 1-based).
fn matrix_unit(name: &str) -> Option<(usize, usize)> {
    let rest = name.strip_prefix('E')?;
    let rest = rest.strip_prefix('_').unwrap_or(rest);
    let d: Vec<usize> = rest
        .chars()
        .map(|c| c.to_digit(10).map(|d| d as usize))
        .collect::<Option<_>>()?;
    match d[..] {
        [i, j] if i >= 1 && j >= 1 => Some((i, j)),
        _ => None,
    }
}

fn eval_poly(e: &Expr, params: &HashMap<String, Scalar>) -> Result<NCPoly> {
    match e {
        Expr::Num(n) => Ok(NCPoly::constant(rational(n))),
        Expr::Ident(name, _) => {
            if let Some(k) = generator(name) {
                return Ok(NCPoly::var(k));
            }
            params
                .get(name)
                .map(|c| NCPoly::constant(c.clone()))
                .ok_or_else(|| Error::UnknownParameter(name.clone()))
        }
        Expr::Neg(inner) => Ok(-&eval_poly(inner, params)?),
        Expr::Bin(op, l, r, at) => {
            let a = eval_poly(l, params)?;
            let b = eval_poly(r, params)?;
            match op {
                '+' => Ok(&a + &b),
                '-' => Ok(&a - &b),
                '*' => Ok(&a * &b),
                _ => {
                    let c = b
                        .as_constant()
                        .ok_or_else(|| Error::parse(*at, "division by a non-constant polynomial"))?;
                    let inv = c.inv().map_err(|_| Error::parse(*at, "division by zero"))?;
                    Ok(a.scale(&inv))
                }
            }
        }
        Expr::Pow(base, k, at) => {
            let b = eval_poly(base, params)?;
            if *k >= 0 {
                return Ok(b.pow(*k as u32));
            }
            let c = b
                .as_constant()
                .ok_or_else(|| Error::parse(*at, "negative power of a non-constant polynomial"))?;
            let v = c.pow(*k).map_err(|_| Error::parse(*at, "negative power of zero"))?;
            Ok(NCPoly::constant(v))
        }
        Expr::Call(name, _, at) => Err(Error::parse(*at, format!("unknown function `{name}`"))),
        Expr::List(_, at) => Err(Error::parse(*at, "a list is not a polynomial")),
    }
}

/// Parse a noncommutative polynomial in `x1, x2, …` with named scalar
/// parameters.
pub fn parse_ncpoly(text: &str, params: &HashMap<String, Scalar>) -> Result<NCPoly> {
    eval_poly(&Parser::new(text)?.parse_all()?, params)
}

/// Parse a polynomial, or a matrix of polynomials written `[[f, g], [h, k]]`.
pub fn parse_ncmatrix(text: &str, params: &HashMap<String, Scalar>) -> Result<NCMatrix> {
    let e = Parser::new(text)?.parse_all()?;
    match &e {
        Expr::List(rows, at) => {
            let rows = rows
                .iter()
                .map(|r| match r {
                    Expr::List(items, _) => items.iter().map(|i| eval_poly(i, params)).collect(),
                    _ => Err(Error::parse(*at, "expected a list of rows")),
                })
                .collect::<Result<Vec<Vec<NCPoly>>>>()?;
            NCMatrix::from_rows(rows).map_err(|_| Error::parse(*at, "ragged polynomial matrix"))
        }
        _ => Ok(NCMatrix::scalar(eval_poly(&e, params)?)),
    }
}

enum Val {
    S(RatFunc),
    M(EpsMatrix),
}

struct EpsCtx<'a> {
    field: Field,
    n: usize,
    params: &'a HashMap<String, Scalar>,
}

impl EpsCtx<'_> {
    fn scalar(&self, c: &Scalar, at: usize) -> Result<RatFunc> {
        c.to_field(self.field)
            .map(RatFunc::constant)
            .map_err(|e| Error::parse(at, e.to_string()))
    }

    fn eval(&self, e: &Expr) -> Result<Val> {
        match e {
            Expr::Num(n) => Ok(Val::S(self.scalar(&rational(n), 0)?)),
            Expr::Ident(name, at) => {
                if name == "eps" {
                    return Ok(Val::S(RatFunc::eps(self.field)));
                }
                if name == "I" {
                    return Ok(Val::M(EpsMatrix::identity(self.field, self.n)));
                }
                if let Some((i, j)) = matrix_unit(name) {
                    if i > self.n || j > self.n {
                        return Err(Error::parse(
                            *at,
                            format!("{name} does not fit a {0}x{0} matrix", self.n),
                        ));
                    }
                    let mut m = EpsMatrix::zeros(self.field, self.n);
                    m.set(i - 1, j - 1, RatFunc::one(self.field));
                    return Ok(Val::M(m));
                }
                let c = self
                    .params
                    .get(name)
                    .ok_or_else(|| Error::UnknownParameter(name.clone()))?;
                Ok(Val::S(self.scalar(c, *at)?))
            }
            Expr::Neg(inner) => Ok(match self.eval(inner)? {
                Val::S(s) => Val::S(-&s),
                Val::M(m) => Val::M(m.scale(&-&RatFunc::one(self.field))),
            }),
            Expr::Bin(op, l, r, at) => {
                let a = self.eval(l)?;
                let b = self.eval(r)?;
                let at = *at;
                match (op, a, b) {
                    ('+', Val::S(x), Val::S(y)) => Ok(Val::S(&x + &y)),
                    ('-', Val::S(x), Val::S(y)) => Ok(Val::S(&x - &y)),
                    ('*', Val::S(x), Val::S(y)) => Ok(Val::S(&x * &y)),
                    ('/', Val::S(x), Val::S(y)) => x
                        .checked_div(&y)
                        .map(Val::S)
                        .map_err(|_| Error::parse(at, "division by zero")),
                    ('+', Val::M(x), Val::M(y)) => self.same_size(&x, &y, at).map(|_| Val::M(&x + &y)),
                    ('-', Val::M(x), Val::M(y)) => self.same_size(&x, &y, at).map(|_| Val::M(&x - &y)),
                    ('*', Val::M(x), Val::M(y)) => self.same_size(&x, &y, at).map(|_| Val::M(&x * &y)),
                    ('*', Val::S(s), Val::M(m)) | ('*', Val::M(m), Val::S(s)) => Ok(Val::M(m.scale(&s))),
                    ('/', Val::M(m), Val::S(s)) => {
                        let inv = s.inv().map_err(|_| Error::parse(at, "division by zero"))?;
                        Ok(Val::M(m.scale(&inv)))
                    }
                    _ => Err(Error::parse(at, format!("`{op}` cannot combine a scalar and a matrix"))),
                }
            }
            Expr::Pow(base, k, at) => match self.eval(base)? {
                Val::S(s) => s
                    .pow(*k)
                    .map(Val::S)
                    .map_err(|_| Error::parse(*at, "negative power of zero")),
                Val::M(m) if *k >= 0 => Ok(Val::M(
                    (0..*k).fold(EpsMatrix::identity(self.field, m.size()), |acc, _| &acc * &m),
                )),
                Val::M(m) => {
                    let inv = m.inverse().map_err(|e| Error::parse(*at, e.to_string()))?;
                    Ok(Val::M(
                        (0..-*k).fold(EpsMatrix::identity(self.field, m.size()), |acc, _| &acc * &inv),
                    ))
                }
            },
            Expr::Call(name, args, at) if name == "diag" => {
                let d = args
                    .iter()
                    .map(|a| match self.eval(a)? {
                        Val::S(s) => Ok(s),
                        Val::M(_) => Err(Error::parse(*at, "diag takes scalar entries")),
                    })
                    .collect::<Result<Vec<_>>>()?;
                if d.len() != self.n {
                    return Err(Error::parse(
                        *at,
                        format!("diag needs {} entries, got {}", self.n, d.len()),
                    ));
                }
                Ok(Val::M(EpsMatrix::diag(self.field, d)))
            }
            Expr::Call(name, _, at) => Err(Error::parse(*at, format!("unknown function `{name}`"))),
            Expr::List(rows, at) => {
                let k = rows.len();
                let mut entries = Vec::with_capacity(k * k);
                for r in rows {
                    let Expr::List(items, row_at) = r else {
                        return Err(Error::parse(*at, "expected a list of rows"));
                    };
                    if items.len() != k {
                        return Err(Error::parse(*row_at, "a matrix literal must be square"));
                    }
                    for item in items {
                        match self.eval(item)? {
                            Val::S(s) => entries.push(s),
                            Val::M(_) => return Err(Error::parse(*row_at, "matrix entries must be scalars")),
                        }
                    }
                }
                if k != self.n {
                    return Err(Error::parse(
                        *at,
                        format!("expected a {0}x{0} matrix, got {k}x{k}", self.n),
                    ));
                }
                Ok(Val::M(EpsMatrix::from_entries(self.field, k, entries)?))
            }
        }
    }

    fn same_size(&self, a: &EpsMatrix, b: &EpsMatrix, at: usize) -> Result<()> {
        if a.size() == b.size() {
            Ok(())
        } else {
            Err(Error::parse(at, "matrix sizes differ"))
        }
    }
}

/// Parse an `n × n` matrix whose entries are rational functions of `eps`.
/// Understands `diag(...)`, matrix units `Eij`, `I`, nested-list literals,
/// and named scalar parameters. A scalar result is read as a multiple of `I`.
pub fn parse_eps_matrix(text: &str, n: usize, field: Field, params: &HashMap<String, Scalar>) -> Result<EpsMatrix> {
    let e = Parser::new(text)?.parse_all()?;
    let ctx = EpsCtx { field, n, params };
    match ctx.eval(&e)? {
        Val::M(m) => Ok(m),
        Val::S(s) => Ok(EpsMatrix::identity(field, n).scale(&s)),
    }
}
