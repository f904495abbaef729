//! Lexer and parser for the surface syntax.
//!
//! ```text
//! dim d = 2;
//! clifford hadamard : Pauli -o Pauli where
//!   X => Z
//!   Z => X
//! ```
//!
//! Clauses are `pattern => expr` with an optional trailing `;`. Comments
//! run from `--` to the end of the line.

use super::types::QType;
use crate::error::{bail, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u64),
    Sym(&'static str),
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

const SYMBOLS: [&str; 17] =
    ["*.*", "**", "=>", "-o", "*", "+", "-", "(", ")", "[", "]", "<", ">", ",", ":", ";", "="];
const DOT: &str = ".";
const CARET: &str = "^";

fn lex(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start = (line, col);
        if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let text: String = chars[i..j].iter().collect();
            let n = text
                .parse()
                .map_err(|_| crate::error::err!(SyntaxError, "{}:{}: integer {text} is too large", line, col))?;
            out.push(Token { tok: Tok::Int(n), line: start.0, col: start.1 });
            col += j - i;
            i = j;
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_' || chars[j] == '\'') {
                j += 1;
            }
            out.push(Token { tok: Tok::Ident(chars[i..j].iter().collect()), line: start.0, col: start.1 });
            col += j - i;
            i = j;
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 3)].iter().collect();
        let sym = SYMBOLS
            .iter()
            .chain([&DOT, &CARET])
            .find(|s| rest.starts_with(**s))
            .copied();
        match sym {
            Some(s) => {
                out.push(Token { tok: Tok::Sym(s), line: start.0, col: start.1 });
                i += s.len();
                col += s.len();
            }
            None => bail!(SyntaxError, "{line}:{col}: unexpected character {c:?}"),
        }
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

const KEYWORDS: [&str; 13] =
    ["dim", "clifford", "where", "let", "in", "in1", "in2", "omega", "Pauli", "X", "Y", "Z", "I"];

/// Index expressions inside `P.(..)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IExpr {
    Int(u64),
    Var(String),
    Add(Box<IExpr>, Box<IExpr>),
    Sub(Box<IExpr>, Box<IExpr>),
}

/// Surface phase and module expressions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SCExpr {
    Int(u64),
    Var(String),
    Add(Box<SCExpr>, Box<SCExpr>),
    Sub(Box<SCExpr>, Box<SCExpr>),
    Mul(Box<SCExpr>, Box<SCExpr>),
    Neg(Box<SCExpr>),
    Pair(Box<SCExpr>, Box<SCExpr>),
    Omega(Box<SCExpr>, Box<SCExpr>),
}

/// Surface Pauli expressions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SExpr {
    Letter(char),
    /// `X.j`: the letter on qudit j (1-based) and identity elsewhere.
    Leaf(char, IExpr),
    Var(String),
    Pair(SCExpr, SCExpr),
    Tensor(Box<SExpr>, Box<SExpr>),
    Star(Box<SExpr>, Box<SExpr>),
    Phase(SCExpr, Box<SExpr>),
    In(u8, Box<SExpr>),
    Let(String, QType, Box<SExpr>, Box<SExpr>),
    Pow(Box<SExpr>, u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Index {
    Lit(usize),
    Var(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pattern {
    X,
    Z,
    Var(String),
    In(u8, Box<Pattern>),
    Leaf(char, Index),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub pattern: Pattern,
    pub body: SExpr,
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SDef {
    pub name: String,
    pub params: Vec<(String, QType)>,
    pub input: QType,
    pub output: QType,
    pub clauses: Vec<Clause>,
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SProgram {
    pub dim: Option<u64>,
    pub defs: Vec<SDef>,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

pub fn parse_program(src: &str) -> Result<SProgram> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    p.program()
}

/// Parse a standalone Pauli expression, as given on a command line.
pub fn parse_expr(src: &str) -> Result<SExpr> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let e = p.expr()?;
    p.expect_eof()?;
    Ok(e)
}

/// Parse a standalone Pauli type.
pub fn parse_type(src: &str) -> Result<QType> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let t = p.qtype()?;
    p.expect_eof()?;
    Ok(t)
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    fn fail<T>(&self, what: &str) -> Result<T> {
        let t = &self.toks[self.pos];
        let found = match &t.tok {
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Int(n) => n.to_string(),
            Tok::Sym(s) => format!("'{s}'"),
            Tok::Eof => "end of input".to_string(),
        };
        bail!(SyntaxError, "{}:{}: expected {what}, found {found}", t.line, t.col)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(t) if *t == s)
    }

    fn is_kw(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Ident(t) if t == s)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> Result<()> {
        if !self.eat_sym(s) {
            return self.fail(&format!("'{s}'"));
        }
        Ok(())
    }

    fn expect_kw(&mut self, s: &str) -> Result<()> {
        if !self.is_kw(s) {
            return self.fail(&format!("'{s}'"));
        }
        self.bump();
        Ok(())
    }

    fn expect_eof(&self) -> Result<()> {
        if *self.peek() != Tok::Eof {
            return self.fail("end of input");
        }
        Ok(())
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            _ => self.fail("an identifier"),
        }
    }

    fn int(&mut self) -> Result<u64> {
        match *self.peek() {
            Tok::Int(n) => {
                self.bump();
                Ok(n)
            }
            _ => self.fail("an integer"),
        }
    }

    fn program(&mut self) -> Result<SProgram> {
        let mut dim = None;
        if self.is_kw("dim") {
            self.bump();
            self.expect_kw("d")?;
            self.expect_sym("=")?;
            dim = Some(self.int()?);
            self.eat_sym(";");
        }
        let mut defs = Vec::new();
        while *self.peek() != Tok::Eof {
            defs.push(self.def()?);
        }
        Ok(SProgram { dim, defs })
    }

    fn def(&mut self) -> Result<SDef> {
        let line = self.here().0;
        self.expect_kw("clifford")?;
        let name = self.ident()?;
        let mut params = Vec::new();
        if self.eat_sym("(") {
            loop {
                let p = self.ident()?;
                self.expect_sym(":")?;
                params.push((p, self.qtype()?));
                if !self.eat_sym(",") {
                    break;
                }
            }
            self.expect_sym(")")?;
        }
        self.expect_sym(":")?;
        let input = self.qtype()?;
        self.expect_sym("-o")?;
        let output = self.qtype()?;
        self.expect_kw("where")?;
        let mut clauses = Vec::new();
        while *self.peek() != Tok::Eof && !self.is_kw("clifford") {
            let (line, col) = self.here();
            let pattern = self.pattern()?;
            self.expect_sym("=>")?;
            let body = self.expr()?;
            self.eat_sym(";");
            clauses.push(Clause { pattern, body, line, col });
        }
        if clauses.is_empty() {
            bail!(SyntaxError, "{line}:1: clifford {name} has no clauses");
        }
        Ok(SDef { name, params, input, output, clauses, line })
    }

    fn qtype(&mut self) -> Result<QType> {
        let left = self.qtype_pow()?;
        if self.eat_sym("**") {
            return Ok(QType::tensor(left, self.qtype()?));
        }
        Ok(left)
    }

    fn qtype_pow(&mut self) -> Result<QType> {
        let base = self.qtype_atom()?;
        if self.eat_sym("^") {
            let n = self.int()?;
            if base != QType::Pauli {
                // Q^n for compound Q nests copies of Q to the right
                let mut t = base.clone();
                for _ in 1..n {
                    t = QType::tensor(base.clone(), t);
                }
                if n == 0 {
                    bail!(SyntaxError, "{}: ^0 is not a type", base);
                }
                return Ok(t);
            }
            return QType::power(n as usize);
        }
        Ok(base)
    }

    fn qtype_atom(&mut self) -> Result<QType> {
        if self.eat_sym("(") {
            let t = self.qtype()?;
            self.expect_sym(")")?;
            return Ok(t);
        }
        match self.peek().clone() {
            Tok::Ident(s) if s == "Pauli" => {
                self.bump();
                Ok(QType::Pauli)
            }
            // type variables stand for a single qudit
            Tok::Ident(s) if s.starts_with(char::is_uppercase) && !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(QType::Pauli)
            }
            _ => self.fail("a type"),
        }
    }

    fn letter(&self) -> Option<char> {
        match self.peek() {
            Tok::Ident(s) if matches!(s.as_str(), "X" | "Y" | "Z" | "I") => s.chars().next(),
            _ => None,
        }
    }

    fn pattern(&mut self) -> Result<Pattern> {
        if self.eat_sym("(") {
            let p = self.pattern()?;
            self.expect_sym(")")?;
            return Ok(p);
        }
        for (kw, i) in [("in1", 1u8), ("in2", 2)] {
            if self.is_kw(kw) {
                self.bump();
                return Ok(Pattern::In(i, Box::new(self.pattern()?)));
            }
        }
        if let Some(c) = self.letter() {
            if c != 'X' && c != 'Z' {
                return self.fail("a pattern (X, Z, a variable or an injection)");
            }
            self.bump();
            if self.eat_sym(".") {
                let idx = match self.peek().clone() {
                    Tok::Int(n) if n >= 1 => {
                        self.bump();
                        Index::Lit(n as usize)
                    }
                    Tok::Ident(_) => Index::Var(self.ident()?),
                    _ => return self.fail("a qudit index (1-based) or index variable"),
                };
                return Ok(Pattern::Leaf(c, idx));
            }
            return Ok(if c == 'X' { Pattern::X } else { Pattern::Z });
        }
        Ok(Pattern::Var(self.ident()?))
    }

    pub(crate) fn expr(&mut self) -> Result<SExpr> {
        let left = self.star_expr()?;
        if self.eat_sym("**") {
            return Ok(SExpr::Tensor(Box::new(left), Box::new(self.expr()?)));
        }
        Ok(left)
    }

    fn star_expr(&mut self) -> Result<SExpr> {
        let mut left = self.prefix_expr()?;
        while self.eat_sym("*.*") {
            left = SExpr::Star(Box::new(left), Box::new(self.prefix_expr()?));
        }
        Ok(left)
    }

    fn prefix_expr(&mut self) -> Result<SExpr> {
        if self.eat_sym("<") {
            let c = self.cexpr()?;
            self.expect_sym(">")?;
            return Ok(SExpr::Phase(c, Box::new(self.prefix_expr()?)));
        }
        for (kw, i) in [("in1", 1u8), ("in2", 2)] {
            if self.is_kw(kw) {
                self.bump();
                return Ok(SExpr::In(i, Box::new(self.prefix_expr()?)));
            }
        }
        if self.is_kw("let") {
            self.bump();
            let x = self.ident()?;
            self.expect_sym(":")?;
            let t = self.qtype()?;
            self.expect_sym("=")?;
            let e = self.expr()?;
            self.expect_kw("in")?;
            let body = self.expr()?;
            return Ok(SExpr::Let(x, t, Box::new(e), Box::new(body)));
        }
        let mut e = self.atom()?;
        while self.eat_sym("^") {
            e = SExpr::Pow(Box::new(e), self.int()?);
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<SExpr> {
        if self.eat_sym("(") {
            let e = self.expr()?;
            self.expect_sym(")")?;
            return Ok(e);
        }
        if self.eat_sym("[") {
            let a = self.cexpr()?;
            self.expect_sym(",")?;
            let b = self.cexpr()?;
            self.expect_sym("]")?;
            return Ok(SExpr::Pair(a, b));
        }
        if let Some(c) = self.letter() {
            self.bump();
            if self.eat_sym(".") {
                return Ok(SExpr::Leaf(c, self.index_atom()?));
            }
            return Ok(SExpr::Letter(c));
        }
        match self.peek() {
            Tok::Ident(_) => Ok(SExpr::Var(self.ident()?)),
            _ => self.fail("a Pauli expression"),
        }
    }

    fn index_atom(&mut self) -> Result<IExpr> {
        if self.eat_sym("(") {
            let e = self.index_expr()?;
            self.expect_sym(")")?;
            return Ok(e);
        }
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(IExpr::Int(n))
            }
            Tok::Ident(_) => Ok(IExpr::Var(self.ident()?)),
            _ => self.fail("a qudit index"),
        }
    }

    fn index_expr(&mut self) -> Result<IExpr> {
        let mut left = self.index_atom()?;
        loop {
            if self.eat_sym("+") {
                left = IExpr::Add(Box::new(left), Box::new(self.index_atom()?));
            } else if self.eat_sym("-") {
                left = IExpr::Sub(Box::new(left), Box::new(self.index_atom()?));
            } else {
                return Ok(left);
            }
        }
    }

    fn cexpr(&mut self) -> Result<SCExpr> {
        let mut left = self.cterm()?;
        loop {
            if self.eat_sym("+") {
                left = SCExpr::Add(Box::new(left), Box::new(self.cterm()?));
            } else if self.eat_sym("-") {
                left = SCExpr::Sub(Box::new(left), Box::new(self.cterm()?));
            } else {
                return Ok(left);
            }
        }
    }

    fn cterm(&mut self) -> Result<SCExpr> {
        let mut left = self.cfactor()?;
        while self.eat_sym("*") {
            left = SCExpr::Mul(Box::new(left), Box::new(self.cfactor()?));
        }
        Ok(left)
    }

    fn cfactor(&mut self) -> Result<SCExpr> {
        if self.eat_sym("-") {
            return Ok(SCExpr::Neg(Box::new(self.cfactor()?)));
        }
        if self.eat_sym("(") {
            let c = self.cexpr()?;
            self.expect_sym(")")?;
            return Ok(c);
        }
        if self.eat_sym("[") {
            let a = self.cexpr()?;
            self.expect_sym(",")?;
            let b = self.cexpr()?;
            self.expect_sym("]")?;
            return Ok(SCExpr::Pair(Box::new(a), Box::new(b)));
        }
        if self.is_kw("omega") && *self.peek_at(1) == Tok::Sym("(") {
            self.bump();
            self.bump();
            let a = self.cexpr()?;
            self.expect_sym(",")?;
            let b = self.cexpr()?;
            self.expect_sym(")")?;
            return Ok(SCExpr::Omega(Box::new(a), Box::new(b)));
        }
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(SCExpr::Int(n))
            }
            Tok::Ident(_) => Ok(SCExpr::Var(self.ident()?)),
            _ => self.fail("a scalar expression"),
        }
    }
}
