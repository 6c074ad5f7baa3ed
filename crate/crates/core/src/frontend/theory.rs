//! Theory files: signature, commutative symbols, rules, axioms and options.

use std::collections::BTreeSet;
use std::fmt;

use super::parse::{lex, Parser, Spanned, SymbolTable, Tok};
use crate::equational::{Axiom, TheoryE};
use crate::error::{ParseError, TheoryError};
use crate::rewriting::{check_closed, check_closed_axiom, RewriteRule, TheoryPresentation};
use crate::syntax::{FuncSymbol, Term, PAIR};

pub const DEFAULT_E_DEPTH: usize = 2;

/// The abstract content of a theory file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoryFile {
    pub symbols: Vec<FuncSymbol>,
    pub rules: Vec<RewriteRule>,
    pub axioms: Vec<Axiom>,
    pub e_depth: Option<usize>,
}

impl TheoryFile {
    pub fn table(&self) -> SymbolTable {
        SymbolTable::from_symbols(self.symbols.iter().copied())
    }

    pub fn commutative(&self) -> BTreeSet<FuncSymbol> {
        self.symbols.iter().filter(|f| f.commutative).copied().collect()
    }

    /// Without axioms the theory is syntactic or pure commutativity; with
    /// axioms commutativity joins the bounded axiom set.
    pub fn presentation(&self) -> TheoryPresentation {
        let comm = self.commutative();
        let theory = if self.axioms.is_empty() {
            if comm.is_empty() {
                TheoryE::Empty
            } else {
                TheoryE::Commutative(comm)
            }
        } else {
            let mut axioms: Vec<Axiom> = comm.iter().map(|f| Axiom::commutativity(*f)).collect();
            axioms.extend(self.axioms.iter().cloned());
            TheoryE::AxiomSet { axioms, depth_bound: self.e_depth.unwrap_or(DEFAULT_E_DEPTH) }
        };
        TheoryPresentation::new(self.symbols.iter().copied().collect(), self.rules.clone(), theory)
    }

    /// Names of rules and axioms that fail the closedness check.
    pub fn non_closed(&self) -> Vec<String> {
        let mut out: Vec<String> = self.rules.iter().filter(|r| !check_closed(r)).map(|r| r.name.clone()).collect();
        out.extend(self.axioms.iter().filter(|a| !check_closed_axiom(a)).map(|a| a.name.clone()));
        out
    }
}

impl fmt::Display for TheoryFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.symbols {
            writeln!(f, "sig {} : {}", s.name, s.arity)?;
        }
        for s in self.symbols.iter().filter(|s| s.commutative) {
            writeln!(f, "comm {}", s.name)?;
        }
        if let Some(k) = self.e_depth {
            writeln!(f, "option e_depth = {k}")?;
        }
        for r in &self.rules {
            writeln!(f, "rule {}: {} |- {} -> {}", r.name, r.context, r.lhs, r.rhs)?;
        }
        for a in &self.axioms {
            writeln!(f, "axiom {}: {} |- {} = {}", a.name, a.context, a.left, a.right)?;
        }
        Ok(())
    }
}

fn invalid(line: usize, name: &str, msg: impl Into<String>) -> TheoryError {
    TheoryError::Invalid { line, name: name.to_string(), msg: msg.into() }
}

fn ident_or_num(p: &mut Parser<'_>) -> Result<String, ParseError> {
    match p.peek().clone() {
        Tok::Ident { name, dis: 0 } => {
            p.next();
            Ok(name)
        }
        Tok::Num(n) => {
            p.next();
            Ok(n.to_string())
        }
        _ => Err(p.error_here("expected a name")),
    }
}

fn number(p: &mut Parser<'_>) -> Result<usize, ParseError> {
    match p.peek().clone() {
        Tok::Num(n) => {
            p.next();
            usize::try_from(n).map_err(|_| p.error_here("number too large"))
        }
        _ => Err(p.error_here("expected a number")),
    }
}

/// Splits off the keyword; returns the remaining tokens.
fn keyword(line: &str, n: usize) -> Result<(String, Vec<Spanned>), ParseError> {
    let toks = lex(line, n)?;
    match &toks[0].tok {
        Tok::Ident { name, dis: 0 } => Ok((name.clone(), toks[1..].to_vec())),
        _ => Err(ParseError { line: n, col: toks[0].col, msg: "expected a declaration keyword".into() }),
    }
}

pub fn parse_theory(text: &str) -> Result<TheoryFile, TheoryError> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .collect();

    let mut file = TheoryFile { symbols: Vec::new(), rules: Vec::new(), axioms: Vec::new(), e_depth: None };
    let mut table = SymbolTable::new();
    table.strict = true;
    let mut comm_lines = Vec::new();
    let mut body_lines = Vec::new();

    for &(n, line) in &lines {
        let (kw, rest) = keyword(line, n)?;
        let mut p = Parser::from_tokens(rest, &table);
        match kw.as_str() {
            "sig" => {
                let name = ident_or_num(&mut p)?;
                p.expect(Tok::Colon)?;
                let arity = number(&mut p)?;
                p.expect_eof()?;
                if name == PAIR {
                    return Err(invalid(n, &name, "`pair` is reserved"));
                }
                if name.starts_with(|c: char| c.is_ascii_uppercase()) && arity == 0 {
                    return Err(invalid(n, &name, "uppercase constants would read as variables"));
                }
                if let Some(old) = file.symbols.iter().find(|f| f.name.as_str() == name) {
                    if old.arity != arity {
                        return Err(invalid(n, &name, "declared twice with different arities"));
                    }
                    continue;
                }
                let f = FuncSymbol::new(&name, arity);
                file.symbols.push(f);
                table.declare(f);
            }
            "comm" => comm_lines.push((n, rest_owned(&mut p))),
            "option" => {
                let key = ident_or_num(&mut p)?;
                p.expect(Tok::Equals)?;
                let k = number(&mut p)?;
                p.expect_eof()?;
                match key.as_str() {
                    "e_depth" => file.e_depth = Some(k),
                    _ => return Err(invalid(n, &key, "unknown option")),
                }
            }
            "rule" | "axiom" => body_lines.push((n, kw.clone(), rest_owned(&mut p))),
            other => {
                return Err(ParseError { line: n, col: 1, msg: format!("unknown declaration `{other}`") }.into());
            }
        }
    }

    for (n, toks) in comm_lines {
        let mut p = Parser::from_tokens(toks, &table);
        let name = ident_or_num(&mut p)?;
        p.expect_eof()?;
        let Some(i) = file.symbols.iter().position(|f| f.name.as_str() == name) else {
            return Err(invalid(n, &name, "`comm` on an undeclared symbol"));
        };
        if file.symbols[i].arity != 2 {
            return Err(invalid(n, &name, "`comm` requires a binary symbol"));
        }
        file.symbols[i].commutative = true;
    }
    let table = {
        let mut t = SymbolTable::from_symbols(file.symbols.iter().copied());
        t.strict = true;
        t
    };

    for (n, kw, toks) in body_lines {
        let mut p = Parser::from_tokens(toks, &table);
        let name = ident_or_num(&mut p)?;
        p.expect(Tok::Colon)?;
        let ctx = if p.has_turnstile() {
            let c = p.context()?;
            p.expect(Tok::Turnstile)?;
            c
        } else {
            Default::default()
        };
        let l = p.term()?;
        let sep = if kw == "rule" { Tok::Arrow } else { Tok::Equals };
        p.expect(sep)?;
        let r = p.term()?;
        p.expect_eof()?;
        for t in [&l, &r] {
            if uses_pair(t) {
                return Err(invalid(n, &name, "`pair` is reserved"));
            }
        }
        if kw == "rule" {
            let rule = RewriteRule::new(name.clone(), ctx, l, r);
            rule.well_formed().map_err(|m| invalid(n, &name, m))?;
            if file.rules.iter().any(|q| q.name == name) {
                return Err(invalid(n, &name, "duplicate rule name"));
            }
            file.rules.push(rule);
        } else {
            let ax = Axiom { name: name.clone(), context: ctx, left: l, right: r };
            if !ax.is_regular() {
                return Err(invalid(n, &name, "both sides of an axiom must have the same variables"));
            }
            if ax.context.vars().difference(&ax.left.vars()).next().is_some() {
                return Err(invalid(n, &name, "context mentions a variable not in the axiom"));
            }
            file.axioms.push(ax);
        }
    }
    Ok(file)
}

fn rest_owned(p: &mut Parser<'_>) -> Vec<Spanned> {
    let mut out = Vec::new();
    loop {
        let s = p.next();
        let end = s.tok == Tok::Eof;
        out.push(s);
        if end {
            return out;
        }
    }
}

fn uses_pair(t: &Term) -> bool {
    match t {
        Term::App(f, args) => f.name.as_str() == PAIR || args.iter().any(uses_pair),
        Term::Abs(_, b) => uses_pair(b),
        _ => false,
    }
}

/// A loaded presentation with warnings about rules or axioms that are not
/// closed.
pub struct Loaded {
    pub file: TheoryFile,
    pub presentation: TheoryPresentation,
    pub warnings: Vec<String>,
}

pub fn load_theory_str(text: &str) -> Result<Loaded, TheoryError> {
    let file = parse_theory(text)?;
    let warnings = file.non_closed().into_iter().map(|n| format!("{n} is not closed")).collect();
    let presentation = file.presentation();
    Ok(Loaded { file, presentation, warnings })
}

/// Reads a theory file from disk, falling back to the bundled theory of the
/// same name.
pub fn load_theory(path: &str) -> Result<Loaded, TheoryError> {
    match std::fs::read_to_string(path) {
        Ok(text) => load_theory_str(&text),
        Err(e) => match super::bundled::source(path) {
            Some(text) => load_theory_str(text),
            None => Err(TheoryError::Io { path: path.to_string(), source: e }),
        },
    }
}
