use std::fmt;

use super::SyntaxError;

/// 1-based line and column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Num(u64),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Semi,
    Comma,
    Assign,
    Dot,
    Eq,
    Lt,
    Gt,
    Tilde,
    Arrow,
    Iff,
    Amp,
    Bar,
    Plus,
    Star,
    Colon,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub pos: Pos,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TokenKind::Ident(s) => return write!(f, "`{s}`"),
            TokenKind::Num(n) => return write!(f, "`{n}`"),
            TokenKind::LParen => "(",
            TokenKind::RParen => ")",
            TokenKind::LBracket => "[",
            TokenKind::RBracket => "]",
            TokenKind::Semi => ";",
            TokenKind::Comma => ",",
            TokenKind::Assign => ":=",
            TokenKind::Dot => ".",
            TokenKind::Eq => "=",
            TokenKind::Lt => "<",
            TokenKind::Gt => ">",
            TokenKind::Tilde => "~",
            TokenKind::Arrow => "->",
            TokenKind::Iff => "<->",
            TokenKind::Amp => "&",
            TokenKind::Bar => "|",
            TokenKind::Plus => "+",
            TokenKind::Star => "*",
            TokenKind::Colon => ":",
        };
        write!(f, "`{s}`")
    }
}

/// Tokenizes `text`; positions are reported relative to `origin`.
pub fn tokenize(text: &str, origin: Pos) -> Result<Vec<Token>, SyntaxError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (origin.line.max(1), origin.col.max(1));
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        let advance = |n: usize, col: &mut usize| *col += n;
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            advance(i - start, &mut col);
            out.push(Token { kind: TokenKind::Ident(s), pos });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let n = s
                .parse::<u64>()
                .map_err(|_| SyntaxError::at(pos, format!("numeral `{s}` out of range")))?;
            advance(i - start, &mut col);
            out.push(Token { kind: TokenKind::Num(n), pos });
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 3)].iter().collect();
        let (kind, len) = if rest.starts_with("<->") {
            (TokenKind::Iff, 3)
        } else if rest.starts_with("->") {
            (TokenKind::Arrow, 2)
        } else if rest.starts_with(":=") {
            (TokenKind::Assign, 2)
        } else {
            let k = match c {
                '(' => TokenKind::LParen,
                ')' => TokenKind::RParen,
                '[' => TokenKind::LBracket,
                ']' => TokenKind::RBracket,
                ';' => TokenKind::Semi,
                ',' => TokenKind::Comma,
                '.' => TokenKind::Dot,
                '=' => TokenKind::Eq,
                '<' => TokenKind::Lt,
                '>' => TokenKind::Gt,
                '~' => TokenKind::Tilde,
                '&' => TokenKind::Amp,
                '|' => TokenKind::Bar,
                '+' => TokenKind::Plus,
                '*' => TokenKind::Star,
                ':' => TokenKind::Colon,
                _ => return Err(SyntaxError::at(pos, format!("unexpected character `{c}`"))),
            };
            (k, 1)
        };
        i += len;
        col += len;
        out.push(Token { kind, pos });
    }
    Ok(out)
}
