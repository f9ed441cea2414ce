use num_bigint::BigInt;

use crate::error::{Error, Pos, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Name(String),
    Int(BigInt),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Caret,
    Plus,
    Minus,
    Star,
    Slash,
    Comma,
    Bar,
    EqEq,
    End,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Name(n) => format!("`{n}`"),
            Tok::Int(i) => format!("`{i}`"),
            Tok::End => "end of input".into(),
            t => format!("`{}`", t.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::Caret => "^",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Comma => ",",
            Tok::Bar => "|",
            Tok::EqEq => "==",
            _ => "",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

/// Tokenizes `src`; `origin` is the position of its first character.
pub fn lex(src: &str, origin: Pos) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (origin.line, origin.col);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            '^' => Some(Tok::Caret),
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            ',' => Some(Tok::Comma),
            '|' => Some(Tok::Bar),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token { tok, pos });
            i += 1;
            col += 1;
        } else if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
        } else if c.is_whitespace() {
            i += 1;
            col += 1;
        } else if c == '=' {
            if chars.get(i + 1) != Some(&'=') {
                return Err(Error::Parse { pos, msg: "expected `==`".into() });
            }
            out.push(Token { tok: Tok::EqEq, pos });
            i += 2;
            col += 2;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token { tok: Tok::Int(digits.parse().expect("ascii digits")), pos });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            out.push(Token { tok: Tok::Name(chars[start..i].iter().collect()), pos });
        } else {
            return Err(Error::Parse { pos, msg: format!("unexpected character `{c}`") });
        }
    }
    out.push(Token { tok: Tok::End, pos: Pos { line, col } });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_and_positions() {
        let t = lex("Psi4^-1 2^{b1}\n  == 1", Pos { line: 1, col: 1 }).unwrap();
        let kinds: Vec<Tok> = t.iter().map(|t| t.tok.clone()).collect();
        assert_eq!(kinds[0], Tok::Name("Psi4".into()));
        assert_eq!(kinds[1], Tok::Caret);
        assert_eq!(kinds[2], Tok::Minus);
        assert_eq!(kinds[3], Tok::Int(1.into()));
        let eq = t.iter().find(|t| t.tok == Tok::EqEq).unwrap();
        assert_eq!(eq.pos, Pos { line: 2, col: 3 });
        assert_eq!(t.last().unwrap().tok, Tok::End);
    }

    #[test]
    fn lexical_errors_carry_positions() {
        match lex("A = B", Pos { line: 3, col: 5 }) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, Pos { line: 3, col: 7 }),
            other => panic!("{other:?}"),
        }
        assert!(lex("A # B", Pos { line: 1, col: 1 }).is_err());
    }
}
