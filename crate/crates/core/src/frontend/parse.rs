//! Lexer and recursive-descent parser for terms, contexts and judgements.
//!
//! An identifier followed by `(` is an application. Other identifiers are
//! classified by their first character: uppercase is an unknown, a digit is
//! a constant, lowercase is an atom unless declared as a 0-ary symbol.

use std::collections::BTreeMap;

use crate::error::ParseError;
use crate::syntax::{pair_symbol, Atom, FreshCtx, FuncSymbol, Name, Perm, Term, TermInCtx, Var, PAIR};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident { name: String, dis: u32 },
    Num(u64),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Dot,
    Hash,
    Turnstile,
    Arrow,
    Equals,
    Colon,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident { name, .. } => format!("identifier `{name}`"),
            Tok::Num(n) => format!("number `{n}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Hash => "`#`".into(),
            Tok::Turnstile => "`|-`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Equals => "`=`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub(crate) fn lex(text: &str, line: usize) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |col: usize, msg: String| ParseError { line, col, msg };
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBrack),
            ']' => Some(Tok::RBrack),
            ',' => Some(Tok::Comma),
            '.' => Some(Tok::Dot),
            '#' => Some(Tok::Hash),
            '=' => Some(Tok::Equals),
            ':' => Some(Tok::Colon),
            '⊢' => Some(Tok::Turnstile),
            '→' => Some(Tok::Arrow),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Spanned { tok, line, col });
            i += 1;
            continue;
        }
        if c == '|' && chars.get(i + 1) == Some(&'-') {
            out.push(Spanned { tok: Tok::Turnstile, line, col });
            i += 2;
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push(Spanned { tok: Tok::Arrow, line, col });
            i += 2;
            continue;
        }
        if is_ident_char(c) {
            let start = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            let name: String = chars[start..i].iter().collect();
            if name.chars().all(|d| d.is_ascii_digit()) && chars.get(i) != Some(&'\'') {
                let n = name.parse().map_err(|_| err(col, format!("number `{name}` is too large")))?;
                out.push(Spanned { tok: Tok::Num(n), line, col });
                continue;
            }
            let mut dis = 0u32;
            if chars.get(i) == Some(&'\'') {
                if chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()) {
                    i += 1;
                    let ds = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    let digits: String = chars[ds..i].iter().collect();
                    dis = digits.parse().map_err(|_| err(col, format!("disambiguator `{digits}` is too large")))?;
                } else {
                    while chars.get(i) == Some(&'\'') {
                        dis += 1;
                        i += 1;
                    }
                }
            }
            out.push(Spanned { tok: Tok::Ident { name, dis }, line, col });
            continue;
        }
        return Err(err(col, format!("unexpected character `{c}`")));
    }
    out.push(Spanned { tok: Tok::Eof, line, col: chars.len() + 1 });
    Ok(out)
}

/// Function symbols known to the parser.
#[derive(Clone, Debug, Default)]
pub struct SymbolTable {
    symbols: BTreeMap<Name, FuncSymbol>,
    /// Reject undeclared symbols.
    pub strict: bool,
}

impl SymbolTable {
    pub fn new() -> SymbolTable {
        SymbolTable::default()
    }

    pub fn from_symbols(symbols: impl IntoIterator<Item = FuncSymbol>) -> SymbolTable {
        let mut t = SymbolTable::new();
        for f in symbols {
            t.declare(f);
        }
        t
    }

    pub fn declare(&mut self, f: FuncSymbol) {
        self.symbols.insert(f.name, f);
    }

    pub fn get(&self, name: &str) -> Option<FuncSymbol> {
        self.symbols.get(&Name::new(name)).copied()
    }
}

pub(crate) struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    table: &'a SymbolTable,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(text: &str, line: usize, table: &'a SymbolTable) -> Result<Parser<'a>, ParseError> {
        Ok(Parser { toks: lex(text, line)?, pos: 0, table })
    }

    pub(crate) fn from_tokens(toks: Vec<Spanned>, table: &'a SymbolTable) -> Parser<'a> {
        Parser { toks, pos: 0, table }
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    pub(crate) fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn error_here(&self, msg: impl Into<String>) -> ParseError {
        let s = &self.toks[self.pos];
        ParseError { line: s.line, col: s.col, msg: msg.into() }
    }

    pub(crate) fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.next();
            Ok(())
        } else {
            Err(self.error_here(format!("expected {}, found {}", tok.describe(), self.peek().describe())))
        }
    }

    pub(crate) fn expect_eof(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.error_here(format!("unexpected {}", self.peek().describe())))
        }
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        match self.peek().clone() {
            Tok::Ident { name, dis } if starts_lower(&name) => {
                self.next();
                Ok(Atom::with_dis(&name, dis))
            }
            other => Err(self.error_here(format!("expected an atom, found {}", other.describe()))),
        }
    }

    fn var(&mut self) -> Result<Var, ParseError> {
        match self.peek().clone() {
            Tok::Ident { name, dis } if starts_upper(&name) => {
                self.next();
                Ok(Var { name: Name::new(&name), dis })
            }
            other => Err(self.error_here(format!("expected a variable, found {}", other.describe()))),
        }
    }

    fn symbol(&self, name: &str, arity: usize) -> Result<FuncSymbol, ParseError> {
        if name == PAIR {
            return if arity == 2 { Ok(pair_symbol()) } else { Err(self.error_here("`pair` takes 2 arguments")) };
        }
        match self.table.get(name) {
            Some(f) if f.arity == arity => Ok(f),
            Some(f) => Err(self.error_here(format!("arity mismatch: `{name}` expects {} arguments, got {arity}", f.arity))),
            None if self.table.strict => Err(self.error_here(format!("undeclared symbol `{name}`"))),
            None => Ok(FuncSymbol::new(name, arity)),
        }
    }

    pub(crate) fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::LBrack => {
                self.next();
                let a = self.atom()?;
                self.expect(Tok::RBrack)?;
                Ok(Term::abs(a, self.term()?))
            }
            Tok::LParen => {
                let p = self.perm()?;
                self.expect(Tok::Dot)?;
                let x = self.var()?;
                Ok(Term::susp(p, x))
            }
            Tok::Num(n) => {
                self.next();
                let name = n.to_string();
                Ok(Term::app(self.symbol(&name, 0)?, vec![]))
            }
            Tok::Ident { name, dis } => {
                if *self.peek_at(1) == Tok::LParen {
                    if dis != 0 {
                        return Err(self.error_here("function symbols cannot carry primes"));
                    }
                    let at = self.pos;
                    self.next();
                    self.next();
                    let mut args = Vec::new();
                    if *self.peek() != Tok::RParen {
                        args.push(self.term()?);
                        while *self.peek() == Tok::Comma {
                            self.next();
                            args.push(self.term()?);
                        }
                    }
                    self.expect(Tok::RParen)?;
                    let saved = self.pos;
                    self.pos = at;
                    let f = self.symbol(&name, args.len());
                    self.pos = saved;
                    return Ok(Term::app(f?, args));
                }
                self.next();
                if starts_upper(&name) {
                    return Ok(Term::var(Var { name: Name::new(&name), dis }));
                }
                if dis == 0 {
                    if let Some(f) = self.table.get(&name) {
                        if f.arity == 0 {
                            return Ok(Term::app(f, vec![]));
                        }
                    }
                }
                if name.starts_with(|c: char| c.is_ascii_digit()) {
                    return Ok(Term::app(self.symbol(&name, 0)?, vec![]));
                }
                Ok(Term::atom(Atom::with_dis(&name, dis)))
            }
            other => Err(self.error_here(format!("expected a term, found {}", other.describe()))),
        }
    }

    /// A non-empty product of swappings `(a b)(c d)…`.
    fn perm(&mut self) -> Result<Perm, ParseError> {
        let mut swaps = Vec::new();
        while *self.peek() == Tok::LParen {
            self.next();
            let a = self.atom()?;
            let b = self.atom()?;
            self.expect(Tok::RParen)?;
            swaps.push((a, b));
        }
        Ok(Perm::from_swaps(swaps))
    }

    /// A possibly empty context; stops before `|-` or end of input.
    pub(crate) fn context(&mut self) -> Result<FreshCtx, ParseError> {
        let mut ctx = FreshCtx::new();
        if matches!(self.peek(), Tok::Turnstile | Tok::Eof) {
            return Ok(ctx);
        }
        let mut pending = Vec::new();
        loop {
            pending.push(self.atom()?);
            match self.peek() {
                Tok::Comma => {
                    self.next();
                }
                Tok::Hash => {
                    self.next();
                    let x = match self.peek().clone() {
                        Tok::Ident { name, dis } if starts_upper(&name) && *self.peek_at(1) != Tok::LParen => {
                            self.next();
                            Var { name: Name::new(&name), dis }
                        }
                        _ => return Err(self.error_here("`#` must be followed by a variable")),
                    };
                    for a in pending.drain(..) {
                        ctx.insert(a, x);
                    }
                    if *self.peek() == Tok::Comma {
                        self.next();
                    } else {
                        return Ok(ctx);
                    }
                }
                other => {
                    let msg = format!("expected `#` or `,`, found {}", other.describe());
                    return Err(self.error_here(msg));
                }
            }
        }
    }

    /// `CTX |- t`, or a bare term.
    pub(crate) fn judgement(&mut self) -> Result<TermInCtx, ParseError> {
        if self.has_turnstile() {
            let ctx = self.context()?;
            self.expect(Tok::Turnstile)?;
            let t = self.term()?;
            Ok(TermInCtx::new(ctx, t))
        } else {
            Ok(TermInCtx::bare(self.term()?))
        }
    }

    pub(crate) fn has_turnstile(&self) -> bool {
        self.toks[self.pos..].iter().any(|s| s.tok == Tok::Turnstile)
    }
}

fn starts_upper(s: &str) -> bool {
    s.starts_with(|c: char| c.is_ascii_uppercase())
}

fn starts_lower(s: &str) -> bool {
    s.starts_with(|c: char| c.is_ascii_lowercase() || c == '_')
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    parse_term_with(text, &SymbolTable::new())
}

pub fn parse_term_with(text: &str, table: &SymbolTable) -> Result<Term, ParseError> {
    let mut p = Parser::new(text, 1, table)?;
    let t = p.term()?;
    p.expect_eof()?;
    Ok(t)
}

pub fn parse_context(text: &str) -> Result<FreshCtx, ParseError> {
    let table = SymbolTable::new();
    let mut p = Parser::new(text, 1, &table)?;
    let c = p.context()?;
    p.expect_eof()?;
    Ok(c)
}

pub fn parse_judgement(text: &str) -> Result<TermInCtx, ParseError> {
    parse_judgement_with(text, &SymbolTable::new())
}

pub fn parse_judgement_with(text: &str, table: &SymbolTable) -> Result<TermInCtx, ParseError> {
    let mut p = Parser::new(text, 1, table)?;
    let j = p.judgement()?;
    p.expect_eof()?;
    Ok(j)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suspension_and_abstraction() {
        let t = parse_term("(a b).X").unwrap();
        assert_eq!(t, Term::susp(Perm::swap(Atom::new("a"), Atom::new("b")), Var::new("X")));
        let t = parse_term("[a]f(a,X)").unwrap();
        let f = FuncSymbol::new("f", 2);
        assert_eq!(t, Term::abs(Atom::new("a"), Term::app(f, vec![Term::atom(Atom::new("a")), Term::var(Var::new("X"))])));
    }

    #[test]
    fn error_location() {
        let e = parse_term("f(").unwrap_err();
        assert_eq!((e.line, e.col), (1, 3));
    }

    #[test]
    fn contexts_with_sugar() {
        let c = parse_context("a,b,c#X, d#Y").unwrap();
        assert_eq!(c.len(), 4);
        assert!(c.contains(Atom::new("d"), Var::new("Y")));
        assert!(parse_context("a#b").is_err());
        assert!(parse_context("a#f(X)").is_err());
        assert!(parse_context("").unwrap().is_empty());
    }

    #[test]
    fn primes_and_numbered_disambiguators() {
        let t = parse_term("[c']X''").unwrap();
        assert_eq!(t, Term::abs(Atom::with_dis("c", 1), Term::var(Var { name: Name::new("X"), dis: 2 })));
        assert_eq!(parse_term("a'17").unwrap(), Term::atom(Atom::with_dis("a", 17)));
        assert_eq!(parse_term("a'17").unwrap().to_string(), "a'17");
    }

    #[test]
    fn constants_and_judgements() {
        let table = SymbolTable::from_symbols([FuncSymbol::new("e", 0)]);
        assert_eq!(parse_term_with("e", &table).unwrap(), Term::app(FuncSymbol::new("e", 0), vec![]));
        assert_eq!(parse_term("e").unwrap(), Term::atom(Atom::new("e")));
        assert!(parse_term("0").unwrap().is_ground());
        let j = parse_judgement("y#G |- lam([z]cos(z))").unwrap();
        assert_eq!(j.context.len(), 1);
        let j = parse_judgement("|- a").unwrap();
        assert!(j.context.is_empty());
        let arity = SymbolTable::from_symbols([FuncSymbol::new("f", 2)]);
        assert!(parse_term_with("f(a)", &arity).is_err());
    }
}
