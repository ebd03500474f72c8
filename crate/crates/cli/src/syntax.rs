//! Lexer, parser and canonical printer of the document language.

use std::fmt;

use thiserror::Error;

/// Source position; compares equal to every other position so that
/// syntax trees compare structurally.
#[derive(Clone, Copy, Debug, Default, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl PartialEq for Pos {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{pos}: {message}")]
pub struct SyntaxError {
    pub pos: Pos,
    pub message: String,
}

fn err<T>(pos: Pos, message: impl Into<String>) -> Result<T, SyntaxError> {
    Err(SyntaxError {
        pos,
        message: message.into(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(String),
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Int(s) => write!(f, "'{s}'"),
            Tok::Sym(s) => write!(f, "'{s}'"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

const SYMBOLS: [&str; 13] = [
    "**", "(", ")", "[", "]", ",", ";", "=", "+", "-", "*", "/", "^",
];

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, SyntaxError> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let pos = Pos {
                line: ln + 1,
                col: i + 1,
            };
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((Tok::Ident(chars[start..i].iter().collect()), pos));
                continue;
            }
            if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Int(chars[start..i].iter().collect()), pos));
                continue;
            }
            let rest: String = chars[i..].iter().take(2).collect();
            match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
                Some(s) => {
                    out.push((Tok::Sym(s), pos));
                    i += s.len();
                }
                None => return err(pos, format!("unexpected character '{c}'")),
            }
        }
    }
    let end = Pos {
        line: text.lines().count() + 1,
        col: 1,
    };
    out.push((Tok::Eof, end));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(String),
    Ident(String, Pos),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Wedge(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Call(String, Vec<Arg>, Pos),
    List(Vec<Expr>, Pos),
    Tuple(Vec<Expr>, Pos),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Arg {
    pub key: Option<String>,
    pub value: Expr,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Statement {
    Chart {
        name: String,
        coords: Vec<String>,
        pos: Pos,
    },
    Decl {
        kind: String,
        name: String,
        chart: Option<String>,
        value: Expr,
        pos: Pos,
    },
    Task {
        name: String,
        args: Vec<Arg>,
        pos: Pos,
    },
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Document {
    pub statements: Vec<Statement>,
}

pub const DECL_KINDS: [&str; 13] = [
    "function",
    "form",
    "vector",
    "bivector",
    "multivector",
    "tensor",
    "structure",
    "hitchin",
    "submanifold",
    "foliation",
    "bundle",
    "span",
    "map",
];

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(t) if *t == s)
    }

    fn expect_sym(&mut self, s: &str) -> Result<(), SyntaxError> {
        if self.is_sym(s) {
            self.bump();
            Ok(())
        } else {
            err(self.pos(), format!("expected '{s}', found {}", self.peek()))
        }
    }

    fn ident(&mut self) -> Result<(String, Pos), SyntaxError> {
        match self.bump() {
            (Tok::Ident(s), p) => Ok((s, p)),
            (t, p) => err(p, format!("expected a name, found {t}")),
        }
    }

    fn keyword(&mut self, k: &str) -> Result<(), SyntaxError> {
        let (s, p) = self.ident()?;
        if s != k {
            return err(p, format!("expected '{k}', found '{s}'"));
        }
        Ok(())
    }

    fn statement(&mut self) -> Result<Statement, SyntaxError> {
        let (head, pos) = self.ident()?;
        let st = match head.as_str() {
            "chart" => {
                let (name, _) = self.ident()?;
                self.keyword("coords")?;
                let mut coords = Vec::new();
                while matches!(self.peek(), Tok::Ident(_)) {
                    coords.push(self.ident()?.0);
                }
                Statement::Chart { name, coords, pos }
            }
            "task" => {
                let (name, _) = self.ident()?;
                self.expect_sym("(")?;
                let args = self.args(")")?;
                Statement::Task { name, args, pos }
            }
            k if DECL_KINDS.contains(&k) => {
                let (name, _) = self.ident()?;
                let chart = if matches!(self.peek(), Tok::Ident(s) if s == "on") {
                    self.bump();
                    Some(self.ident()?.0)
                } else {
                    None
                };
                self.expect_sym("=")?;
                let value = self.expr()?;
                Statement::Decl {
                    kind: head,
                    name,
                    chart,
                    value,
                    pos,
                }
            }
            _ => return err(pos, format!("unknown statement '{head}'")),
        };
        self.expect_sym(";")?;
        Ok(st)
    }

    /// Arguments up to the closing symbol, which is consumed.
    fn args(&mut self, close: &str) -> Result<Vec<Arg>, SyntaxError> {
        let mut out = Vec::new();
        if self.is_sym(close) {
            self.bump();
            return Ok(out);
        }
        loop {
            let key = match (self.peek(), &self.toks.get(self.at + 1).map(|t| &t.0)) {
                (Tok::Ident(k), Some(Tok::Sym("="))) => {
                    let k = k.clone();
                    self.bump();
                    self.bump();
                    Some(k)
                }
                _ => None,
            };
            out.push(Arg {
                key,
                value: self.expr()?,
            });
            if self.is_sym(",") {
                self.bump();
                continue;
            }
            self.expect_sym(close)?;
            return Ok(out);
        }
    }

    fn expr(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.product()?;
        loop {
            if self.is_sym("+") {
                self.bump();
                lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
            } else if self.is_sym("-") {
                self.bump();
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn product(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.unary()?;
        loop {
            if self.is_sym("*") {
                self.bump();
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.is_sym("/") {
                self.bump();
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, SyntaxError> {
        if self.is_sym("-") {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.wedge()
    }

    fn wedge(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.power()?;
        while self.is_sym("^") {
            self.bump();
            lhs = Expr::Wedge(Box::new(lhs), Box::new(self.power()?));
        }
        Ok(lhs)
    }

    fn power(&mut self) -> Result<Expr, SyntaxError> {
        let base = self.atom()?;
        if self.is_sym("**") {
            self.bump();
            return match self.bump() {
                (Tok::Int(s), p) => match s.parse::<u32>() {
                    Ok(e) => Ok(Expr::Pow(Box::new(base), e)),
                    Err(_) => err(p, format!("exponent {s} is too large")),
                },
                (t, p) => err(p, format!("expected an integer exponent, found {t}")),
            };
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, SyntaxError> {
        let (t, pos) = self.bump();
        match t {
            Tok::Int(s) => Ok(Expr::Int(s)),
            Tok::Ident(s) => {
                if self.is_sym("(") {
                    self.bump();
                    Ok(Expr::Call(s, self.args(")")?, pos))
                } else {
                    Ok(Expr::Ident(s, pos))
                }
            }
            Tok::Sym("(") => {
                let first = self.expr()?;
                if self.is_sym(",") {
                    let mut items = vec![first];
                    while self.is_sym(",") {
                        self.bump();
                        items.push(self.expr()?);
                    }
                    self.expect_sym(")")?;
                    Ok(Expr::Tuple(items, pos))
                } else {
                    self.expect_sym(")")?;
                    Ok(first)
                }
            }
            Tok::Sym("[") => {
                let mut items = Vec::new();
                if !self.is_sym("]") {
                    loop {
                        items.push(self.expr()?);
                        if self.is_sym(",") {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                }
                self.expect_sym("]")?;
                Ok(Expr::List(items, pos))
            }
            t => err(pos, format!("unexpected {t}")),
        }
    }
}

pub fn parse(text: &str) -> Result<Document, SyntaxError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
    };
    let mut statements = Vec::new();
    while *p.peek() != Tok::Eof {
        statements.push(p.statement()?);
    }
    Ok(Document { statements })
}

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(..) => 3,
            Expr::Wedge(..) => 4,
            Expr::Pow(..) => 5,
            _ => 6,
        }
    }

    pub fn pos(&self) -> Option<Pos> {
        match self {
            Expr::Ident(_, p) | Expr::Call(_, _, p) | Expr::List(_, p) | Expr::Tuple(_, p) => {
                Some(*p)
            }
            Expr::Neg(e) | Expr::Pow(e, _) => e.pos(),
            Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b)
            | Expr::Div(a, b)
            | Expr::Wedge(a, b) => a.pos().or_else(|| b.pos()),
            Expr::Int(_) => None,
        }
    }
}

fn child(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if e.precedence() < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

fn join<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(s) => write!(f, "{s}"),
            Expr::Ident(s, _) => write!(f, "{s}"),
            Expr::Neg(e) => {
                write!(f, "-")?;
                child(f, e, 3)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                child(f, a, 1)?;
                write!(
                    f,
                    " {} ",
                    if matches!(self, Expr::Add(..)) {
                        "+"
                    } else {
                        "-"
                    }
                )?;
                child(f, b, 2)
            }
            Expr::Mul(a, b) | Expr::Div(a, b) => {
                child(f, a, 2)?;
                write!(
                    f,
                    "{}",
                    if matches!(self, Expr::Mul(..)) {
                        "*"
                    } else {
                        "/"
                    }
                )?;
                child(f, b, 3)
            }
            Expr::Wedge(a, b) => {
                child(f, a, 4)?;
                write!(f, "^")?;
                child(f, b, 5)
            }
            Expr::Pow(a, e) => {
                child(f, a, 6)?;
                write!(f, "**{e}")
            }
            Expr::Call(name, args, _) => {
                write!(f, "{name}(")?;
                join(f, args)?;
                write!(f, ")")
            }
            Expr::List(items, _) => {
                write!(f, "[")?;
                join(f, items)?;
                write!(f, "]")
            }
            Expr::Tuple(items, _) => {
                write!(f, "(")?;
                join(f, items)?;
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for Arg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(k) = &self.key {
            write!(f, "{k}=")?;
        }
        write!(f, "{}", self.value)
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statement::Chart { name, coords, .. } => {
                write!(f, "chart {name} coords {};", coords.join(" "))
            }
            Statement::Decl {
                kind,
                name,
                chart,
                value,
                ..
            } => {
                write!(f, "{kind} {name}")?;
                if let Some(c) = chart {
                    write!(f, " on {c}")?;
                }
                write!(f, " = {value};")
            }
            Statement::Task { name, args, .. } => {
                write!(f, "task {name}(")?;
                join(f, args)?;
                write!(f, ");")
            }
        }
    }
}

/// Canonical text: one statement per line.
impl fmt::Display for Document {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.statements {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}
