use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::ast::*;
use super::lexer::{lex, Tok, Token};
use super::BUILTIN_MAPS;
use crate::error::{Error, Pos, Result};
use crate::exact::GaussRational;

struct Parser {
    toks: Vec<Token>,
    at: usize,
}

fn err<T>(pos: Pos, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { pos, msg: msg.into() })
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.at + k).min(self.toks.len() - 1)].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<Token> {
        if *self.peek() == want {
            return Ok(self.bump());
        }
        err(self.pos(), format!("expected {}, found {}", want.describe(), self.peek().describe()))
    }

    fn relation(&mut self) -> Result<Relation> {
        let lhs = self.product()?;
        self.expect(Tok::EqEq)?;
        let rhs = self.product()?;
        if *self.peek() != Tok::End {
            return err(self.pos(), format!("unexpected {} after relation", self.peek().describe()));
        }
        Ok(Relation { lhs, rhs })
    }

    fn product(&mut self) -> Result<Expr> {
        let mut fs = Vec::new();
        while !matches!(self.peek(), Tok::EqEq | Tok::RParen | Tok::End) {
            fs.push(self.factor()?);
        }
        match fs.len() {
            0 => err(self.pos(), format!("expected a factor, found {}", self.peek().describe())),
            1 => Ok(fs.pop().unwrap()),
            _ => Ok(Expr::Product(fs)),
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        let mut e = self.primary()?;
        while *self.peek() == Tok::Caret {
            let pos = self.pos();
            if *self.peek_at(1) == Tok::Minus && *self.peek_at(2) == Tok::Int(1.into()) {
                self.bump();
                self.bump();
                self.bump();
                e = Expr::Inverse(Box::new(e));
            } else if *self.peek_at(1) == Tok::LBrace {
                return err(pos, "only scalar literals can be raised to a Lie exponent");
            } else {
                return err(pos, "expected `^-1` or `^{...}`");
            }
        }
        Ok(e)
    }

    fn power_follows(&self, k: usize) -> bool {
        *self.peek_at(k) == Tok::Caret && *self.peek_at(k + 1) == Tok::LBrace
    }

    fn power_tail(&mut self, base: GaussRational, pos: Pos) -> Result<Expr> {
        self.expect(Tok::Caret)?;
        self.expect(Tok::LBrace)?;
        let exponent = self.lie()?;
        self.expect(Tok::RBrace)?;
        Ok(Expr::ScalarPower { base, exponent, span: Span(pos) })
    }

    /// Index just past the parenthesis group starting at `self.at + k`.
    fn matching_paren(&self, k: usize) -> Option<usize> {
        let mut depth = 0usize;
        let mut j = self.at + k;
        while j < self.toks.len() {
            match self.toks[j].tok {
                Tok::LParen => depth += 1,
                Tok::RParen => {
                    depth -= 1;
                    if depth == 0 {
                        return Some(j + 1 - self.at);
                    }
                }
                Tok::End => return None,
                _ => {}
            }
            j += 1;
        }
        None
    }

    /// True if the group at offset `k` contains only numbers, `i` and
    /// arithmetic, i.e. is a scalar literal.
    fn group_is_scalar(&self, k: usize, end: usize) -> bool {
        (self.at + k + 1..self.at + end - 1).all(|j| match &self.toks[j].tok {
            Tok::Name(n) => n == "i",
            Tok::Int(_) | Tok::Plus | Tok::Minus | Tok::Star | Tok::Slash | Tok::LParen | Tok::RParen => true,
            _ => false,
        })
    }

    fn primary(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(n) => {
                if self.power_follows(1) {
                    self.bump();
                    return self.power_tail(GaussRational::new(BigRational::from_integer(n), BigRational::zero()), pos);
                }
                if n == BigInt::from(1) {
                    self.bump();
                    return Ok(Expr::Unit(Span(pos)));
                }
                err(pos, format!("integer {n} must be the unit `1` or a power base"))
            }
            Tok::Name(n) if n == "i" && self.power_follows(1) => {
                self.bump();
                self.power_tail(GaussRational::i(), pos)
            }
            Tok::Name(n) => {
                self.bump();
                // `f(x)` is a call only with the parenthesis touching the name;
                // `X (Y Z)` is a product.
                let touching = self.pos() == Pos { line: pos.line, col: pos.col + n.len() };
                if *self.peek() != Tok::LParen || !touching {
                    return Ok(Expr::Named { name: n, span: Span(pos) });
                }
                self.bump();
                if BUILTIN_MAPS.contains(&n.as_str()) {
                    let arg = self.product()?;
                    self.expect(Tok::RParen)?;
                    return Ok(Expr::MapApply { map: n, arg: Box::new(arg), span: Span(pos) });
                }
                let mut args = vec![self.lie()?];
                let mut seps = Vec::new();
                loop {
                    match self.peek() {
                        Tok::Comma => seps.push(Sep::Comma),
                        Tok::Bar => seps.push(Sep::Bar),
                        _ => break,
                    }
                    self.bump();
                    args.push(self.lie()?);
                }
                self.expect(Tok::RParen)?;
                Ok(Expr::Substitute { name: n, args, seps, span: Span(pos) })
            }
            Tok::LParen => {
                let end = self.matching_paren(0).ok_or(Error::Parse { pos, msg: "unclosed `(`".into() })?;
                if self.power_follows(end) && self.group_is_scalar(0, end) {
                    self.bump();
                    let base = self.scalar()?;
                    self.expect(Tok::RParen)?;
                    return self.power_tail(base, pos);
                }
                self.bump();
                let inner = self.product()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            t => err(pos, format!("expected a factor, found {}", t.describe())),
        }
    }

    fn scalar(&mut self) -> Result<GaussRational> {
        let mut acc = self.scalar_term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.scalar_term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.scalar_term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn scalar_term(&mut self) -> Result<GaussRational> {
        let mut acc = self.scalar_factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = &acc * &self.scalar_factor()?;
                }
                Tok::Slash => {
                    let pos = self.pos();
                    self.bump();
                    let d = self.scalar_factor()?;
                    acc = acc.checked_div(&d).map_err(|_| Error::Parse { pos, msg: "division by zero".into() })?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn scalar_factor(&mut self) -> Result<GaussRational> {
        let pos = self.pos();
        match self.bump().tok {
            Tok::Minus => Ok(-self.scalar_factor()?),
            Tok::Int(n) => Ok(GaussRational::new(BigRational::from_integer(n), BigRational::zero())),
            Tok::Name(n) if n == "i" => Ok(GaussRational::i()),
            Tok::LParen => {
                let v = self.scalar()?;
                self.expect(Tok::RParen)?;
                Ok(v)
            }
            t => err(pos, format!("expected a number or `i`, found {}", t.describe())),
        }
    }

    fn lie(&mut self) -> Result<LieExpr> {
        let pos = self.pos();
        let mut terms = Vec::new();
        let mut sign = match self.peek() {
            Tok::Minus => {
                self.bump();
                -1
            }
            Tok::Plus => {
                self.bump();
                1
            }
            _ => 1,
        };
        loop {
            let mut t = self.lie_term()?;
            if sign < 0 {
                t.coeff = -t.coeff;
            }
            terms.push(t);
            sign = match self.peek() {
                Tok::Plus => 1,
                Tok::Minus => -1,
                _ => break,
            };
            self.bump();
        }
        Ok(LieExpr { terms, span: Span(pos) })
    }

    fn atom_starts(&self, k: usize) -> bool {
        match self.peek_at(k) {
            Tok::Name(n) => n != "i",
            Tok::LParen => true,
            _ => false,
        }
    }

    fn lie_term(&mut self) -> Result<LieTerm> {
        let pos = self.pos();
        let mut coeff = GaussRational::one();
        let mut explicit = false;
        if *self.peek() == Tok::LParen {
            if let Some(end) = self.matching_paren(0) {
                let follows = *self.peek_at(end) == Tok::Star || self.atom_starts(end);
                if follows && self.group_is_scalar(0, end) {
                    self.bump();
                    coeff = self.scalar()?;
                    self.expect(Tok::RParen)?;
                    explicit = true;
                    if *self.peek() == Tok::Star {
                        self.bump();
                    }
                }
            }
        }
        if let Tok::Int(n) = self.peek().clone() {
            self.bump();
            let mut r = BigRational::from_integer(n);
            if *self.peek() == Tok::Slash {
                let p = self.pos();
                self.bump();
                match self.bump().tok {
                    Tok::Int(d) if !d.is_zero() => r /= BigRational::from_integer(d),
                    _ => return err(p, "expected a nonzero denominator"),
                }
            }
            coeff = GaussRational::new(r, BigRational::zero());
            explicit = true;
            if *self.peek() == Tok::Star {
                self.bump();
            }
        }
        if matches!(self.peek(), Tok::Name(n) if n == "i") {
            self.bump();
            self.expect(Tok::Star)?;
            coeff = &coeff * &GaussRational::i();
            explicit = true;
        }
        if self.atom_starts(0) {
            let atom = match self.bump() {
                Token { tok: Tok::Name(n), pos } => LieAtom::Name(n, Span(pos)),
                _ => {
                    let inner = self.lie()?;
                    self.expect(Tok::RParen)?;
                    LieAtom::Group(inner)
                }
            };
            return Ok(LieTerm { coeff, atom });
        }
        if explicit && coeff.is_zero() {
            return Ok(LieTerm { coeff: GaussRational::one(), atom: LieAtom::Zero });
        }
        if explicit {
            return err(pos, "a Lie element has no constant term; expected a generator after the coefficient");
        }
        err(pos, format!("expected a Lie term, found {}", self.peek().describe()))
    }
}

fn parser_for(text: &str, origin: Pos) -> Result<Parser> {
    Ok(Parser { toks: lex(text, origin)?, at: 0 })
}

/// Parses one relation `expr == expr`.
pub fn parse_relation(text: &str) -> Result<Relation> {
    parse_relation_at(text, Pos { line: 1, col: 1 })
}

pub(crate) fn parse_relation_at(text: &str, origin: Pos) -> Result<Relation> {
    parser_for(text, origin)?.relation()
}

/// Parses a standalone Lie expression such as `Z - t23`.
pub fn parse_lie(text: &str) -> Result<LieExpr> {
    let mut p = parser_for(text, Pos { line: 1, col: 1 })?;
    let e = p.lie()?;
    if *p.peek() != Tok::End {
        return err(p.pos(), format!("unexpected {}", p.peek().describe()));
    }
    Ok(e)
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || "_-.@".contains(c))
}

/// Parses a catalogue: `name [(degree N, tol X)]: expr == expr` per line,
/// `#` starts a comment.
pub fn parse_catalogue(text: &str) -> Result<Vec<CatalogueEntry>> {
    let mut out: Vec<CatalogueEntry> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let colon = body
            .find(':')
            .ok_or(Error::Parse { pos: Pos { line, col: 1 }, msg: "expected `name: relation`".into() })?;
        let header = &body[..colon];
        let lead = header.len() - header.trim_start().len();
        let header = header.trim();
        let (name, attrs) = match header.find('(') {
            Some(open) => {
                let close = header.rfind(')').filter(|&c| c > open).ok_or(Error::Parse {
                    pos: Pos { line, col: lead + open + 1 },
                    msg: "unclosed attribute list".into(),
                })?;
                (header[..open].trim(), Some((&header[open + 1..close], lead + open + 2)))
            }
            None => (header, None),
        };
        if !valid_name(name) {
            return err(Pos { line, col: lead + 1 }, format!("invalid relation name `{name}`"));
        }
        if out.iter().any(|e| e.name == name) {
            return err(Pos { line, col: lead + 1 }, format!("duplicate relation name `{name}`"));
        }
        let (mut degree, mut tolerance) = (None, None);
        if let Some((attrs, col)) = attrs {
            for a in attrs.split(',') {
                let mut kv = a.split_whitespace();
                let apos = Pos { line, col };
                match (kv.next(), kv.next(), kv.next()) {
                    (Some("degree"), Some(v), None) => {
                        degree = Some(v.parse().map_err(|_| Error::Parse { pos: apos, msg: format!("bad degree `{v}`") })?)
                    }
                    (Some("tol"), Some(v), None) => {
                        let t: f64 = v.parse().map_err(|_| Error::Parse { pos: apos, msg: format!("bad tolerance `{v}`") })?;
                        if t.is_nan() || t < 0.0 {
                            return err(apos, "tolerance must be non-negative");
                        }
                        tolerance = Some(t)
                    }
                    _ => return err(apos, format!("unknown attribute `{}`", a.trim())),
                }
            }
        }
        let relation = parse_relation_at(&body[colon + 1..], Pos { line, col: colon + 2 })?;
        out.push(CatalogueEntry { name: name.to_string(), degree, tolerance, relation, line });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count_factors(e: &Expr) -> usize {
        match e {
            Expr::Product(v) => v.len(),
            _ => 1,
        }
    }

    #[test]
    fn hexagon_is_a_six_factor_product() {
        let r = parse_relation("(2/i)^{A} s2(Psi4) (2/i)^{bi} s(Psi4) (2/i)^{b1} Psi4 == 1").unwrap();
        assert_eq!(count_factors(&r.lhs), 6);
        assert!(matches!(r.rhs, Expr::Unit(_)));
        match &r.lhs {
            Expr::Product(v) => match &v[0] {
                Expr::ScalarPower { base, .. } => assert_eq!(*base, -(GaussRational::from_int(2) * GaussRational::i())),
                e => panic!("{e:?}"),
            },
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn okuda_shape() {
        let r = parse_relation("st(Psi4) == 2^{-A} Psi4^-1 2^{-b1}").unwrap();
        assert!(matches!(r.lhs, Expr::MapApply { ref map, .. } if map == "st"));
        match &r.rhs {
            Expr::Product(v) => {
                assert!(matches!(v[0], Expr::ScalarPower { .. }));
                assert!(matches!(v[1], Expr::Inverse(_)));
                assert!(matches!(v[2], Expr::ScalarPower { .. }));
            }
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn substitution_with_bar() {
        let r = parse_relation("Phi == 2^{B} Psi2(A | B, -A-B) 2^{A}").unwrap();
        match &r.rhs {
            Expr::Product(v) => match &v[1] {
                Expr::Substitute { name, args, seps, .. } => {
                    assert_eq!(name, "Psi2");
                    assert_eq!(args.len(), 3);
                    assert_eq!(seps, &vec![Sep::Bar, Sep::Comma]);
                    assert_eq!(args[2].terms.len(), 2);
                    assert_eq!(args[2].terms[0].coeff, GaussRational::from_int(-1));
                }
                e => panic!("{e:?}"),
            },
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn lie_coefficients() {
        let e = parse_lie("2B - 2(A+B) + 1/2*A + i*bi - 0").unwrap();
        assert_eq!(e.terms.len(), 5);
        assert_eq!(e.terms[1].coeff, GaussRational::from_int(-2));
        assert!(matches!(e.terms[1].atom, LieAtom::Group(_)));
        assert_eq!(e.terms[2].coeff, GaussRational::from_ratio(1, 2));
        assert_eq!(e.terms[3].coeff, GaussRational::i());
        assert!(matches!(e.terms[4].atom, LieAtom::Zero));
        let c = parse_lie("(1+i)*A").unwrap();
        assert_eq!(c.terms[0].coeff, GaussRational::one() + GaussRational::i());
        assert!(parse_lie("2").is_err());
        assert!(parse_lie("A +").is_err());
    }

    #[test]
    fn syntax_errors_have_positions() {
        match parse_relation("Psi4 ==") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, Pos { line: 1, col: 8 }),
            other => panic!("{other:?}"),
        }
        match parse_relation("A^2 == 1") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos.col, 2),
            other => panic!("{other:?}"),
        }
        assert!(parse_relation("(Psi4 == 1").is_err());
        assert!(parse_relation("3 == 1").is_err());
        assert!(parse_relation("(1/0)^{A} == 1").is_err());
        assert!(parse_relation("Psi4 == 1 1 == 1").is_err());
    }

    #[test]
    fn calls_need_an_adjacent_parenthesis() {
        let r = parse_relation("X (2/i)^{A} Y (Z W) == X(A, B)").unwrap();
        match &r.lhs {
            Expr::Product(v) => {
                assert_eq!(v.len(), 4);
                assert!(matches!(v[1], Expr::ScalarPower { .. }));
                assert!(matches!(v[3], Expr::Product(_)));
            }
            e => panic!("{e:?}"),
        }
        assert!(matches!(r.rhs, Expr::Substitute { .. }));
    }

    #[test]
    fn catalogue_lines() {
        let text = "# comment\n\nhex (degree 5, tol 1e-15): Psi4 == 1 # trailing\nokuda: st(Psi4) == 1\n";
        let c = parse_catalogue(text).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].degree, Some(5));
        assert_eq!(c[0].tolerance, Some(1e-15));
        assert_eq!(c[0].line, 3);
        assert_eq!(c[1].name, "okuda");
        match parse_catalogue("a: Psi4 ==\n") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos.line, 1),
            other => panic!("{other:?}"),
        }
        assert!(parse_catalogue("a: 1 == 1\na: 1 == 1").is_err());
        assert!(parse_catalogue("a (speed 3): 1 == 1").is_err());
        assert!(parse_catalogue("no relation here").is_err());
        assert!(parse_catalogue("").unwrap().is_empty());
    }
}
