use super::lexer::{tokenize, Pos, Token, TokenKind};
use super::{Formula, SyntaxError, Term, MAX_NUMERAL};

const KEYWORDS: &[&str] = &["bot", "all", "exists", "Prov", "S"];

pub fn parse_formula(text: &str) -> Result<Formula, SyntaxError> {
    parse_formula_at(text, Pos { line: 1, col: 1 })
}

pub fn parse_formula_at(text: &str, origin: Pos) -> Result<Formula, SyntaxError> {
    let mut p = Parser::new(tokenize(text, origin)?, end_pos(text, origin));
    let f = p.formula()?;
    p.expect_end()?;
    Ok(f)
}

pub fn parse_term(text: &str) -> Result<Term, SyntaxError> {
    let origin = Pos { line: 1, col: 1 };
    let mut p = Parser::new(tokenize(text, origin)?, end_pos(text, origin));
    let t = p.term()?;
    p.expect_end()?;
    Ok(t)
}

pub(crate) fn end_pos(text: &str, origin: Pos) -> Pos {
    let mut pos = Pos { line: origin.line.max(1), col: origin.col.max(1) };
    for c in text.chars() {
        if c == '\n' {
            pos.line += 1;
            pos.col = 1;
        } else {
            pos.col += 1;
        }
    }
    pos
}

pub fn is_variable_name(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_lowercase())
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !KEYWORDS.contains(&s)
}

/// Recursive-descent parser over a token stream.
pub struct Parser {
    toks: Vec<Token>,
    idx: usize,
    end: Pos,
}

impl Parser {
    pub fn new(toks: Vec<Token>, end: Pos) -> Self {
        Parser { toks, idx: 0, end }
    }

    pub fn peek(&self) -> Option<&TokenKind> {
        self.toks.get(self.idx).map(|t| &t.kind)
    }

    fn peek_at(&self, k: usize) -> Option<&TokenKind> {
        self.toks.get(self.idx + k).map(|t| &t.kind)
    }

    pub fn pos(&self) -> Pos {
        self.toks.get(self.idx).map(|t| t.pos).unwrap_or(self.end)
    }

    pub fn bump(&mut self) -> Option<TokenKind> {
        let t = self.toks.get(self.idx).map(|t| t.kind.clone());
        self.idx += 1;
        t
    }

    pub fn eat(&mut self, k: &TokenKind) -> bool {
        if self.peek() == Some(k) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, k: &TokenKind) -> Result<(), SyntaxError> {
        if self.eat(k) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("expected {k}")))
        }
    }

    pub fn expect_end(&self) -> Result<(), SyntaxError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.unexpected("expected end of input")),
        }
    }

    pub fn unexpected(&self, what: &str) -> SyntaxError {
        match self.peek() {
            Some(k) => SyntaxError::at(self.pos(), format!("{what}, found {k}")),
            None => SyntaxError::at(self.pos(), format!("{what}, found end of input")),
        }
    }

    pub fn ident(&mut self) -> Result<String, SyntaxError> {
        match self.peek() {
            Some(TokenKind::Ident(s)) => {
                let s = s.clone();
                self.idx += 1;
                Ok(s)
            }
            _ => Err(self.unexpected("expected identifier")),
        }
    }

    pub fn variable(&mut self) -> Result<String, SyntaxError> {
        let pos = self.pos();
        let v = self.ident()?;
        if !is_variable_name(&v) {
            return Err(SyntaxError::at(pos, format!("`{v}` is not a variable name")));
        }
        Ok(v)
    }

    pub fn formula(&mut self) -> Result<Formula, SyntaxError> {
        let l = self.implication()?;
        if self.eat(&TokenKind::Iff) {
            let r = self.formula()?;
            return Ok(Formula::iff(l, r));
        }
        Ok(l)
    }

    fn implication(&mut self) -> Result<Formula, SyntaxError> {
        let l = self.disjunction()?;
        if self.eat(&TokenKind::Arrow) {
            let r = self.implication()?;
            return Ok(Formula::imp(l, r));
        }
        Ok(l)
    }

    fn disjunction(&mut self) -> Result<Formula, SyntaxError> {
        let mut l = self.conjunction()?;
        while self.eat(&TokenKind::Bar) {
            let r = self.conjunction()?;
            l = Formula::or(l, r);
        }
        Ok(l)
    }

    fn conjunction(&mut self) -> Result<Formula, SyntaxError> {
        let mut l = self.unary()?;
        while self.eat(&TokenKind::Amp) {
            let r = self.unary()?;
            l = Formula::and(l, r);
        }
        Ok(l)
    }

    fn unary(&mut self) -> Result<Formula, SyntaxError> {
        match self.peek() {
            Some(TokenKind::Tilde) => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Some(TokenKind::Ident(s)) if s == "all" || s == "exists" => {
                let universal = s == "all";
                self.bump();
                let v = self.variable()?;
                self.expect(&TokenKind::Dot)?;
                let body = self.formula()?;
                Ok(if universal { Formula::forall(v, body) } else { Formula::exists(v, body) })
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, SyntaxError> {
        match self.peek().cloned() {
            Some(TokenKind::Ident(s)) if s == "bot" => {
                self.bump();
                Ok(Formula::Falsum)
            }
            Some(TokenKind::Ident(s)) if s == "Prov" => {
                self.bump();
                self.provability()
            }
            Some(TokenKind::Ident(s))
                if s != "S" && self.peek_at(1) == Some(&TokenKind::LParen) =>
            {
                self.bump();
                self.bump();
                let mut args = Vec::new();
                if !self.eat(&TokenKind::RParen) {
                    loop {
                        args.push(self.term()?);
                        if self.eat(&TokenKind::RParen) {
                            break;
                        }
                        self.expect(&TokenKind::Comma)?;
                    }
                }
                Ok(Formula::Pred(s, args))
            }
            Some(TokenKind::Ident(s))
                if s.starts_with(|c: char| c.is_ascii_uppercase()) && s != "S" =>
            {
                self.bump();
                Ok(Formula::Pred(s, Vec::new()))
            }
            Some(TokenKind::LParen) => {
                let save = self.idx;
                match self.comparison() {
                    Ok(f) => Ok(f),
                    Err(term_err) => {
                        let term_idx = self.idx;
                        self.idx = save;
                        self.bump();
                        match self.formula().and_then(|f| {
                            self.expect(&TokenKind::RParen)?;
                            Ok(f)
                        }) {
                            Ok(f) => Ok(f),
                            Err(e) => {
                                // report whichever reading got further
                                if term_idx > self.idx {
                                    Err(term_err)
                                } else {
                                    Err(e)
                                }
                            }
                        }
                    }
                }
            }
            _ => self.comparison(),
        }
    }

    fn comparison(&mut self) -> Result<Formula, SyntaxError> {
        let l = self.term()?;
        let f = match self.peek() {
            Some(TokenKind::Eq) => {
                self.bump();
                Formula::Eq(l, self.term()?)
            }
            Some(TokenKind::Lt) => {
                self.bump();
                Formula::Lt(l, self.term()?)
            }
            Some(TokenKind::Gt) => {
                self.bump();
                let r = self.term()?;
                Formula::Lt(r, l)
            }
            _ => return Err(self.unexpected("expected `=`, `<` or `>`")),
        };
        Ok(f)
    }

    fn provability(&mut self) -> Result<Formula, SyntaxError> {
        let pos = self.pos();
        self.expect(&TokenKind::LBracket)?;
        let template = self.formula()?;
        let mut subst = Vec::new();
        if self.eat(&TokenKind::Semi) && self.peek() != Some(&TokenKind::RBracket) {
            loop {
                let v = self.variable()?;
                self.expect(&TokenKind::Assign)?;
                subst.push((v, self.term()?));
                if !self.eat(&TokenKind::Comma) {
                    break;
                }
            }
        }
        self.expect(&TokenKind::RBracket)?;
        Formula::boxed(template, subst).map_err(|e| SyntaxError::at(pos, e.to_string()))
    }

    pub fn term(&mut self) -> Result<Term, SyntaxError> {
        let mut l = self.product()?;
        while self.eat(&TokenKind::Plus) {
            l = Term::plus(l, self.product()?);
        }
        Ok(l)
    }

    fn product(&mut self) -> Result<Term, SyntaxError> {
        let mut l = self.primary_term()?;
        while self.eat(&TokenKind::Star) {
            l = Term::times(l, self.primary_term()?);
        }
        Ok(l)
    }

    fn primary_term(&mut self) -> Result<Term, SyntaxError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(TokenKind::Num(n)) => {
                if n > MAX_NUMERAL {
                    return Err(SyntaxError::at(pos, format!("numeral {n} exceeds {MAX_NUMERAL}")));
                }
                self.bump();
                Ok(Term::numeral(n))
            }
            Some(TokenKind::Ident(s)) if s == "S" => {
                self.bump();
                self.expect(&TokenKind::LParen)?;
                let t = self.term()?;
                self.expect(&TokenKind::RParen)?;
                Ok(Term::succ(t))
            }
            Some(TokenKind::Ident(_)) => Ok(Term::Var(self.variable()?)),
            Some(TokenKind::LParen) => {
                self.bump();
                let t = self.term()?;
                self.expect(&TokenKind::RParen)?;
                Ok(t)
            }
            _ => Err(self.unexpected("expected term")),
        }
    }
}
