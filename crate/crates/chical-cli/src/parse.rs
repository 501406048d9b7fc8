//! Recursive-descent parser for the expression grammar shared by the CLI
//! and the connection file format.
//!
//! Grammar:
//!
//! ```text
//! state   := ['-'] term (('+'|'-') term)*
//! term    := factor ('*' factor)*
//! factor  := atom ['^' uint]
//! atom    := rational | generator | '(' state ')'
//! rational:= uint ['/' uint]
//! generator := x(i,n) | p(i,n) | dx(i,n) | pd(i,n) | u(i) | du(i)
//! vfield  := ['-'] vfterm (('+'|'-') vfterm)*
//! vfterm  := [term] d(i) | term        // a bare term is a zero field
//! ```
//!
//! Rendering of any parsed value is canonical, so parse . render is the
//! identity on rendered states.

use chical_core::cartan::VectorField;
use chical_core::gaussmanin::Connection;
use chical_core::superjet::{q, qi, Generator, Kind, State};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("parse error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        pos,
        msg: msg.into(),
    })
}

/// Optional index bounds checked during parsing; violations are errors.
#[derive(Clone, Copy, Debug, Default)]
pub struct IndexBounds {
    pub fibre: Option<u32>,
    pub base: Option<u32>,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(u64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    Comma,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(v) => write!(f, "integer {v}"),
            Tok::Ident(s) => write!(f, "identifier '{s}'"),
            Tok::Plus => write!(f, "'+'"),
            Tok::Minus => write!(f, "'-'"),
            Tok::Star => write!(f, "'*'"),
            Tok::Caret => write!(f, "'^'"),
            Tok::Slash => write!(f, "'/'"),
            Tok::LParen => write!(f, "'('"),
            Tok::RParen => write!(f, "')'"),
            Tok::Comma => write!(f, "','"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Lexer<'a> {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }


    fn next(&mut self) -> Result<(usize, Tok), ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.pos >= self.src.len() {
            return Ok((start, Tok::End));
        }
        let c = self.src[self.pos];
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'/' => Tok::Slash,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'0'..=b'9' => {
                let mut v: u64 = 0;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    v = v
                        .checked_mul(10)
                        .and_then(|v| v.checked_add((self.src[self.pos] - b'0') as u64))
                        .ok_or(ParseError {
                            pos: start,
                            msg: "integer literal overflows".into(),
                        })?;
                    self.pos += 1;
                }
                return Ok((start, Tok::Int(v)));
            }
            b'a'..=b'z' => {
                let mut s = String::new();
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_lowercase() {
                    s.push(self.src[self.pos] as char);
                    self.pos += 1;
                }
                return Ok((start, Tok::Ident(s)));
            }
            other => {
                return err(start, format!("unexpected character '{}'", other as char));
            }
        };
        self.pos += 1;
        Ok((start, tok))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    lookahead: Option<(usize, Tok)>,
    bounds: IndexBounds,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, bounds: IndexBounds) -> Parser<'a> {
        Parser {
            lexer: Lexer::new(src),
            lookahead: None,
            bounds,
        }
    }

    fn peek(&mut self) -> Result<&(usize, Tok), ParseError> {
        if self.lookahead.is_none() {
            self.lookahead = Some(self.lexer.next()?);
        }
        Ok(self.lookahead.as_ref().unwrap())
    }

    fn bump(&mut self) -> Result<(usize, Tok), ParseError> {
        match self.lookahead.take() {
            Some(t) => Ok(t),
            None => self.lexer.next(),
        }
    }

    fn expect(&mut self, want: Tok) -> Result<usize, ParseError> {
        let (pos, tok) = self.bump()?;
        if tok == want {
            Ok(pos)
        } else {
            err(pos, format!("expected {want}, found {tok}"))
        }
    }

    fn expect_uint(&mut self) -> Result<(usize, u64), ParseError> {
        let (pos, tok) = self.bump()?;
        match tok {
            Tok::Int(v) => Ok((pos, v)),
            other => err(pos, format!("expected integer, found {other}")),
        }
    }

    fn check_index(&self, pos: usize, kind: Kind, index: u64) -> Result<u32, ParseError> {
        if index == 0 {
            return err(pos, "indices are positive");
        }
        let limit = match kind {
            Kind::U | Kind::Du => self.bounds.base,
            _ => self.bounds.fibre,
        };
        if let Some(max) = limit {
            if index > max as u64 {
                return err(pos, format!("index {index} out of range (max {max})"));
            }
        }
        u32::try_from(index).map_err(|_| ParseError {
            pos,
            msg: "index too large".into(),
        })
    }

    /// generator after its identifier has been consumed
    fn generator(&mut self, pos: usize, name: &str) -> Result<Generator, ParseError> {
        let kind = match name {
            "x" => Kind::X,
            "p" => Kind::Px,
            "dx" => Kind::Dx,
            "pd" => Kind::Pdx,
            "u" => Kind::U,
            "du" => Kind::Du,
            other => return err(pos, format!("unknown generator '{other}'")),
        };
        self.expect(Tok::LParen)?;
        let (ipos, index) = self.expect_uint()?;
        let index = self.check_index(ipos, kind, index)?;
        let jet = if kind.is_jet() {
            self.expect(Tok::Comma)?;
            let (jpos, jet) = self.expect_uint()?;
            u32::try_from(jet).map_err(|_| ParseError {
                pos: jpos,
                msg: "jet too large".into(),
            })?
        } else {
            0
        };
        self.expect(Tok::RParen)?;
        Ok(Generator::new(kind, index, jet))
    }

    fn atom(&mut self) -> Result<State, ParseError> {
        let (pos, tok) = self.bump()?;
        match tok {
            Tok::Int(numer) => {
                if matches!(self.peek()?.1, Tok::Slash) {
                    self.bump()?;
                    let (dpos, denom) = self.expect_uint()?;
                    if denom == 0 {
                        return err(dpos, "zero denominator");
                    }
                    Ok(State::constant(q(numer as i64, denom as i64)))
                } else {
                    Ok(State::constant(qi(numer as i64)))
                }
            }
            Tok::Ident(name) => Ok(State::generator(self.generator(pos, &name)?)),
            Tok::LParen => {
                let inner = self.state_expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            other => err(pos, format!("expected value, found {other}")),
        }
    }

    fn factor(&mut self) -> Result<State, ParseError> {
        let base = self.atom()?;
        if matches!(self.peek()?.1, Tok::Caret) {
            self.bump()?;
            let (_, e) = self.expect_uint()?;
            let mut out = State::one();
            for _ in 0..e {
                out = out.mul(&base);
            }
            return Ok(out);
        }
        Ok(base)
    }

    fn term(&mut self) -> Result<State, ParseError> {
        let mut out = self.factor()?;
        while matches!(self.peek()?.1, Tok::Star) {
            self.bump()?;
            out = out.mul(&self.factor()?);
        }
        Ok(out)
    }

    fn state_expr(&mut self) -> Result<State, ParseError> {
        let mut negate = false;
        if matches!(self.peek()?.1, Tok::Minus) {
            self.bump()?;
            negate = true;
        }
        let mut out = self.term()?;
        if negate {
            out = out.neg();
        }
        loop {
            match self.peek()?.1 {
                Tok::Plus => {
                    self.bump()?;
                    out = out.add(&self.term()?);
                }
                Tok::Minus => {
                    self.bump()?;
                    out = out.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(out)
    }

    fn end(&mut self) -> Result<(), ParseError> {
        let (pos, tok) = self.bump()?;
        if tok == Tok::End {
            Ok(())
        } else {
            err(pos, format!("trailing input: {tok}"))
        }
    }

    /// one summand of a vector field: an optional coefficient term followed
    /// by a direction d(i); returns (component index, coefficient), index 0
    /// standing for a bare zero summand.
    fn vf_term(&mut self) -> Result<(u32, State), ParseError> {
        // a leading coefficient term ends right before 'd('
        let mut coeff = State::one();
        let mut have_coeff = false;
        loop {
            let (pos, tok) = self.peek()?.clone();
            match tok {
                Tok::Ident(name) if name == "d" => {
                    self.bump()?;
                    self.expect(Tok::LParen)?;
                    let (ipos, index) = self.expect_uint()?;
                    let index = self.check_index(ipos, Kind::X, index)?;
                    self.expect(Tok::RParen)?;
                    return Ok((index, coeff));
                }
                Tok::Int(_) | Tok::Ident(_) | Tok::LParen => {
                    let f = self.term()?;
                    coeff = if have_coeff { coeff.mul(&f) } else { f };
                    have_coeff = true;
                    // optional explicit '*' between juxtaposed pieces
                    if matches!(self.peek()?.1, Tok::Star) {
                        self.bump()?;
                    }
                }
                other => {
                    if have_coeff
                        && coeff.is_zero()
                        && matches!(other, Tok::Plus | Tok::Minus | Tok::End)
                    {
                        return Ok((0, State::zero()));
                    }
                    return err(pos, format!("expected direction d(i), found {other}"));
                }
            }
        }
    }

    fn vector_field_expr(&mut self, n: usize) -> Result<VectorField, ParseError> {
        let mut components = vec![State::zero(); n];
        let mut negate = matches!(self.peek()?.1, Tok::Minus);
        if negate {
            self.bump()?;
        }
        loop {
            let pos = self.peek()?.0;
            let (index, coeff) = self.vf_term()?;
            if index as usize > n {
                return err(
                    pos,
                    format!("direction d({index}) outside chart of dimension {n}"),
                );
            }
            if index > 0 {
                let signed = if negate { coeff.neg() } else { coeff };
                components[index as usize - 1] = components[index as usize - 1].add(&signed);
            }
            match self.peek()?.1 {
                Tok::Plus => {
                    self.bump()?;
                    negate = false;
                }
                Tok::Minus => {
                    self.bump()?;
                    negate = true;
                }
                _ => break,
            }
        }
        validate_vf_components(&components)?;
        Ok(VectorField::new(components))
    }
}

fn validate_vf_components(components: &[State]) -> Result<(), ParseError> {
    for c in components {
        for (m, _) in c.terms() {
            for (g, _) in m.factors() {
                let ok = matches!(g.kind, Kind::U) || (g.kind == Kind::X && g.jet == 0);
                if !ok {
                    return err(
                        0,
                        format!("vector field coefficients may use x(i,0) and u(i) only, found {g}"),
                    );
                }
            }
        }
    }
    Ok(())
}

/// Parses a polynomial state.
pub fn parse_state(src: &str, bounds: IndexBounds) -> Result<State, ParseError> {
    let mut p = Parser::new(src, bounds);
    let s = p.state_expr()?;
    p.end()?;
    Ok(s)
}

/// Parses a vector field in an N-dimensional chart; `n` fixes the number of
/// components.
pub fn parse_vector_field(src: &str, n: usize, bounds: IndexBounds) -> Result<VectorField, ParseError> {
    let mut p = Parser::new(src, bounds);
    let f = p.vector_field_expr(n)?;
    p.end()?;
    Ok(f)
}

/// The largest direction index mentioned in a vector-field expression, used
/// to infer the chart dimension when no explicit one is given.
pub fn scan_vf_dimension(src: &str) -> Result<usize, ParseError> {
    let mut lexer = Lexer::new(src);
    let mut max = 0u64;
    let mut prev_was_d = false;
    loop {
        let (pos, tok) = lexer.next()?;
        match &tok {
            Tok::End => break,
            Tok::Ident(name) if name == "d" => prev_was_d = true,
            Tok::LParen => {}
            Tok::Int(v) if prev_was_d => {
                if *v == 0 {
                    return err(pos, "indices are positive");
                }
                max = max.max(*v);
                prev_was_d = false;
            }
            _ => prev_was_d = false,
        }
    }
    Ok(max as usize)
}

/// Connection file format:
///
/// ```text
/// M 2
/// N 2
/// xi 1 1: <state>
/// xi 1 2: <state>
/// xi 2 1: <state>
/// xi 2 2: <state>
/// ```
///
/// One line per component, "xi i j" holding the coefficient of d/dx_j in
/// the lift of d/du_i.  Rendering and parsing round-trip bit-exactly.
pub fn parse_connection(src: &str) -> Result<Connection, ParseError> {
    let mut lines = src.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (m, n) = {
        let m = expect_header(lines.next(), "M")?;
        let n = expect_header(lines.next(), "N")?;
        (m, n)
    };
    let bounds = IndexBounds {
        fibre: Some(n as u32),
        base: Some(m as u32),
    };
    let mut fields = Vec::with_capacity(m);
    let mut components: Vec<State> = Vec::with_capacity(n);
    for i in 1..=m {
        components.clear();
        for j in 1..=n {
            let (lineno, line) = lines.next().ok_or(ParseError {
                pos: 0,
                msg: format!("missing line 'xi {i} {j}: ...'"),
            })?;
            let prefix = format!("xi {i} {j}:");
            let rest = line.trim_start();
            let body = rest.strip_prefix(&prefix).ok_or(ParseError {
                pos: lineno,
                msg: format!("line {}: expected prefix '{prefix}'", lineno + 1),
            })?;
            let state = parse_state(body.trim(), bounds).map_err(|e| ParseError {
                pos: e.pos,
                msg: format!("line {}: {}", lineno + 1, e.msg),
            })?;
            components.push(state);
        }
        validate_vf_components(&components)?;
        fields.push(VectorField::new(components.clone()));
    }
    if let Some((lineno, _)) = lines.next() {
        return err(0, format!("line {}: trailing content", lineno + 1));
    }
    Ok(Connection::new(n, fields))
}

fn expect_header(line: Option<(usize, &str)>, key: &str) -> Result<usize, ParseError> {
    let (lineno, line) = line.ok_or(ParseError {
        pos: 0,
        msg: format!("missing header '{key} <count>'"),
    })?;
    let rest = line
        .trim()
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix(' '))
        .ok_or(ParseError {
            pos: lineno,
            msg: format!("line {}: expected '{key} <count>'", lineno + 1),
        })?;
    rest.trim().parse::<usize>().map_err(|_| ParseError {
        pos: lineno,
        msg: format!("line {}: malformed count '{rest}'", lineno + 1),
    })
}

/// Canonical rendering of a connection in the file format.
pub fn render_connection(c: &Connection) -> String {
    let mut out = String::new();
    out.push_str(&format!("M {}\n", c.base_dim()));
    out.push_str(&format!("N {}\n", c.fibre_dim()));
    for i in 1..=c.base_dim() {
        for j in 1..=c.fibre_dim() {
            out.push_str(&format!("xi {i} {j}: {}\n", c.xi(i).component(j)));
        }
    }
    out
}

/// Canonical rendering of a vector field in the CLI grammar.
pub fn render_vector_field(f: &VectorField) -> String {
    let mut parts = Vec::new();
    for (i, c) in f.components().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if c == &State::one() {
            parts.push(format!("d({})", i + 1));
        } else if c.num_terms() == 1 {
            parts.push(format!("{c} d({})", i + 1));
        } else {
            parts.push(format!("({c}) d({})", i + 1));
        }
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}
