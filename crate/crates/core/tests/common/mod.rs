//! Generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use nomrw::equational::e_match;
use nomrw::frontend::SymbolTable;
use nomrw::rewriting::{normalize, Strategy, TheoryPresentation};
use nomrw::syntax::{Atom, FreshCtx, FuncSymbol, NameSupply, Subst, Term, TermInCtx, Var};
use nomrw::unify::TUnifProblem;
use rand::rngs::StdRng;
use rand::Rng;

// ---------------------------------------------------------------------------
// Term generation

/// A production `f(args)`; `binds[i]` marks argument `i` as an abstraction.
#[derive(Clone, Debug)]
pub struct Op {
    pub sym: FuncSymbol,
    pub binds: Vec<bool>,
}

#[derive(Clone, Debug)]
pub struct Grammar {
    pub atoms: Vec<Atom>,
    /// Atoms usable as binders (defaults to `atoms`).
    pub binders: Vec<Atom>,
    pub vars: Vec<Var>,
    pub consts: Vec<FuncSymbol>,
    pub ops: Vec<Op>,
}

impl Grammar {
    pub fn new(table: &SymbolTable, atoms: &[&str], vars: &[&str], consts: &[&str], ops: &[(&str, &[bool])]) -> Grammar {
        let sym = |n: &str| table.get(n).unwrap_or_else(|| panic!("unknown symbol {n}"));
        let atoms: Vec<Atom> = atoms.iter().map(|a| Atom::new(a)).collect();
        Grammar {
            binders: atoms.clone(),
            atoms,
            vars: vars.iter().map(|x| Var::new(x)).collect(),
            consts: consts.iter().map(|c| sym(c)).collect(),
            ops: ops.iter().map(|(n, b)| Op { sym: sym(n), binds: b.to_vec() }).collect(),
        }
    }

    pub fn ground(&self) -> Grammar {
        Grammar { vars: Vec::new(), ..self.clone() }
    }

    fn leaf(&self, rng: &mut StdRng) -> Term {
        let n = self.atoms.len() + self.vars.len() + self.consts.len();
        let mut i = rng.gen_range(0..n);
        if i < self.atoms.len() {
            return Term::atom(self.atoms[i]);
        }
        i -= self.atoms.len();
        if i < self.vars.len() {
            return Term::var(self.vars[i]);
        }
        i -= self.vars.len();
        Term::app(self.consts[i], Vec::new())
    }

    /// A random term of height at most `depth`.
    pub fn term(&self, rng: &mut StdRng, depth: usize) -> Term {
        if depth == 0 || self.ops.is_empty() || rng.gen_bool(0.25) {
            return self.leaf(rng);
        }
        let op = &self.ops[rng.gen_range(0..self.ops.len())];
        let args = op
            .binds
            .iter()
            .map(|&b| {
                let t = self.term(rng, depth - 1);
                if b {
                    Term::abs(self.binders[rng.gen_range(0..self.binders.len())], t)
                } else {
                    t
                }
            })
            .collect();
        Term::app(op.sym, args)
    }
}

pub fn grammar_for(theory: &str, table: &SymbolTable) -> Grammar {
    match theory {
        "prenex" => Grammar::new(
            table,
            &["a", "b"],
            &["P", "Q"],
            &[],
            &[("not", &[false]), ("and", &[false, false]), ("or", &[false, false]), ("forall", &[true]), ("exists", &[true])],
        ),
        "lambda" => Grammar::new(
            table,
            &["a", "b"],
            &["X", "Y"],
            &[],
            &[("lam", &[true]), ("app", &[false, false]), ("sub", &[true, false])],
        ),
        "diff" => {
            let mut g = Grammar::new(
                table,
                &["y", "z"],
                &["F", "G"],
                &["0", "1"],
                &[
                    ("plus", &[false, false]),
                    ("mult", &[false, false]),
                    ("s", &[false]),
                    ("sin", &[false]),
                    ("cos", &[false]),
                    ("diff", &[false, false]),
                    ("lam", &[true]),
                    ("sub", &[true, false]),
                ],
            );
            g.binders = vec![Atom::new("y")];
            g
        }
        "forallc" => Grammar::new(table, &["a", "b"], &["X", "Y"], &[], &[("forall", &[true]), ("R", &[false, false])]),
        "forall2" => Grammar::new(table, &["a", "b"], &["X", "Y"], &[], &[("forall", &[true])]),
        other => panic!("no grammar for {other}"),
    }
}

// ---------------------------------------------------------------------------
// Ground enumeration and the α-oracle

/// All ground terms over `f:2, g:1, c:0` and atoms `a, b, c`, grouped by size.
pub fn ground_terms_by_size(max: usize) -> Vec<Vec<Term>> {
    let f = FuncSymbol::new("f", 2);
    let g = FuncSymbol::new("g", 1);
    let c = FuncSymbol::new("c", 0);
    let atoms = [Atom::new("a"), Atom::new("b"), Atom::new("c")];
    let mut by: Vec<Vec<Term>> = vec![Vec::new(); max + 1];
    if max == 0 {
        return by;
    }
    by[1] = atoms.iter().map(|&a| Term::atom(a)).chain([Term::app(c, Vec::new())]).collect();
    for n in 2..=max {
        let mut out = Vec::new();
        for t in &by[n - 1] {
            out.push(Term::app(g, vec![t.clone()]));
            for &a in &atoms {
                out.push(Term::abs(a, t.clone()));
            }
        }
        for i in 1..n - 1 {
            for l in &by[i] {
                for r in &by[n - 1 - i] {
                    out.push(Term::app(f, vec![l.clone(), r.clone()]));
                }
            }
        }
        by[n] = out;
    }
    by
}

/// Binder-canonical form: each bound occurrence is replaced by the position
/// of its binder, free atoms keep their names.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Canon {
    Free(String),
    Bound(Vec<usize>),
    Var(String),
    Abs(Box<Canon>),
    App(String, Vec<Canon>),
}

pub fn canon(t: &Term) -> Canon {
    fn go(t: &Term, path: &mut Vec<usize>, env: &BTreeMap<Atom, Vec<usize>>) -> Canon {
        match t {
            Term::Atom(a) => match env.get(a) {
                Some(p) => Canon::Bound(p.clone()),
                None => Canon::Free(a.to_string()),
            },
            Term::Susp(p, x) => {
                assert!(p.is_id(), "oracle handles bare variables only");
                Canon::Var(x.to_string())
            }
            Term::Abs(a, body) => {
                let mut env = env.clone();
                env.insert(*a, path.clone());
                path.push(0);
                let b = go(body, path, &env);
                path.pop();
                Canon::Abs(Box::new(b))
            }
            Term::App(f, args) => {
                let mut cs = Vec::new();
                for (i, s) in args.iter().enumerate() {
                    path.push(i);
                    cs.push(go(s, path, env));
                    path.pop();
                }
                Canon::App(f.name.as_str().to_string(), cs)
            }
        }
    }
    go(t, &mut Vec::new(), &BTreeMap::new())
}

// ---------------------------------------------------------------------------
// Bounded R/E oracle for `c'#X |- forall([c']X) -> X` modulo commuting
// nested foralls.
//
// Variables are opaque, so every binder above a variable must be fresh for
// it in `delta`; the oracle panics otherwise.

fn assert_in_scope(delta: &FreshCtx, t: &Term, binders: &mut Vec<Atom>) {
    match t {
        Term::Atom(_) => {}
        Term::Susp(p, x) => {
            assert!(p.is_id());
            for &a in binders.iter() {
                assert!(delta.contains(a, *x), "binder {a} not fresh for {x}");
            }
        }
        Term::Abs(a, b) => {
            binders.push(*a);
            assert_in_scope(delta, b, binders);
            binders.pop();
        }
        Term::App(_, args) => args.iter().for_each(|s| assert_in_scope(delta, s, binders)),
    }
}

/// `a` is fresh for `t` given `delta`, by direct structural recursion.
fn oracle_fresh(delta: &FreshCtx, a: Atom, t: &Term) -> bool {
    match t {
        Term::Atom(b) => a != *b,
        Term::Susp(_, x) => delta.contains(a, *x),
        Term::Abs(b, body) => a == *b || oracle_fresh(delta, a, body),
        Term::App(_, args) => args.iter().all(|s| oracle_fresh(delta, a, s)),
    }
}

fn is_forall(t: &Term) -> Option<(Atom, &Term)> {
    match t {
        Term::App(f, args) if f.name.as_str() == "forall" => match &args[0] {
            Term::Abs(a, body) => Some((*a, body)),
            _ => None,
        },
        _ => None,
    }
}

/// Every term obtained by one rewrite at one position with `step`.
fn one_step(t: &Term, step: &impl Fn(&Term) -> Option<Term>, out: &mut Vec<Term>) {
    if let Some(u) = step(t) {
        out.push(u);
    }
    match t {
        Term::Abs(a, body) => {
            let mut inner = Vec::new();
            one_step(body, step, &mut inner);
            out.extend(inner.into_iter().map(|b| Term::abs(*a, b)));
        }
        Term::App(f, args) => {
            for i in 0..args.len() {
                let mut inner = Vec::new();
                one_step(&args[i], step, &mut inner);
                for u in inner {
                    let mut a2 = args.clone();
                    a2[i] = u;
                    out.push(Term::app(*f, a2));
                }
            }
        }
        _ => {}
    }
}

/// `forall([x]forall([y]t)) = forall([y]forall([x]t))`.
fn commute_foralls(t: &Term) -> Option<Term> {
    let (x, inner) = is_forall(t)?;
    let (y, body) = is_forall(inner)?;
    let Term::App(fa, _) = t else { unreachable!() };
    let wrap = |a: Atom, b: Term| Term::app(*fa, vec![Term::abs(a, b)]);
    Some(wrap(y, wrap(x, body.clone())))
}

/// The ∀C-class of `t`, as canonical forms with one representative each.
pub fn forallc_class(t: &Term) -> BTreeMap<Canon, Term> {
    let mut seen = BTreeMap::new();
    let mut queue = VecDeque::from([t.clone()]);
    while let Some(u) = queue.pop_front() {
        let c = canon(&u);
        if seen.contains_key(&c) {
            continue;
        }
        seen.insert(c, u.clone());
        let mut next = Vec::new();
        one_step(&u, &commute_foralls, &mut next);
        queue.extend(next);
    }
    seen
}

/// R/∀C normal form: rewrite anywhere in the class until no member of the
/// class has a step.
pub fn forallc_rewrite_nf(delta: &FreshCtx, t: &Term) -> Term {
    assert_in_scope(delta, t, &mut Vec::new());
    let elim = |u: &Term| -> Option<Term> {
        let (x, body) = is_forall(u)?;
        oracle_fresh(delta, x, body).then(|| body.clone())
    };
    let mut cur = t.clone();
    'outer: loop {
        for member in forallc_class(&cur).into_values() {
            let mut next = Vec::new();
            one_step(&member, &elim, &mut next);
            if let Some(u) = next.into_iter().next() {
                cur = u;
                continue 'outer;
            }
        }
        return cur;
    }
}

// ---------------------------------------------------------------------------
// Formulas

fn is_quantifier(t: &Term) -> bool {
    matches!(t, Term::App(f, _) if matches!(f.name.as_str(), "forall" | "exists"))
}

fn quantifier_free(t: &Term) -> bool {
    !is_quantifier(t) && t.children().iter().all(quantifier_free)
}

/// A quantifier prefix followed by a quantifier-free matrix.
pub fn is_prenex(t: &Term) -> bool {
    if is_quantifier(t) {
        match &t.children()[0] {
            Term::Abs(_, body) => is_prenex(body),
            _ => false,
        }
    } else {
        quantifier_free(t)
    }
}

pub fn quantifier_depth(t: &Term) -> usize {
    let below = t.children().iter().map(quantifier_depth).max().unwrap_or(0);
    below + usize::from(is_quantifier(t))
}

/// Every formula over atoms `a, b` with at most `max` symbols and
/// quantifier depth at most `qdepth`.
pub fn formulas(table: &SymbolTable, max: usize, qdepth: usize) -> Vec<Term> {
    let sym = |n: &str| table.get(n).unwrap();
    let (not, and, or, fa, ex) = (sym("not"), sym("and"), sym("or"), sym("forall"), sym("exists"));
    let atoms = [Atom::new("a"), Atom::new("b")];
    let mut by: Vec<Vec<Term>> = vec![Vec::new(); max + 1];
    by[1] = atoms.iter().map(|&a| Term::atom(a)).collect();
    for n in 2..=max {
        let mut out = Vec::new();
        for t in &by[n - 1] {
            out.push(Term::app(not, vec![t.clone()]));
            for q in [fa, ex] {
                for &a in &atoms {
                    out.push(Term::app(q, vec![Term::abs(a, t.clone())]));
                }
            }
        }
        for i in 1..n - 1 {
            for l in &by[i] {
                for r in &by[n - 1 - i] {
                    for c in [and, or] {
                        out.push(Term::app(c, vec![l.clone(), r.clone()]));
                    }
                }
            }
        }
        by[n] = out;
    }
    by.into_iter().flatten().filter(|t| quantifier_depth(t) <= qdepth).collect()
}

pub fn vars_of(ts: &[&Term]) -> BTreeSet<Var> {
    ts.iter().flat_map(|t| t.vars()).collect()
}

// ---------------------------------------------------------------------------
// Unification problems

/// `s` is a random ground `u` with up to two subterms cut out into fresh
/// variables, `t` the normal form of `u` (or `u` itself when normalization
/// does not finish). The returned substitution undoes the cuts.
pub fn solvable_problem(rng: &mut StdRng, pres: &TheoryPresentation, g: &Grammar) -> (TUnifProblem, Subst) {
    let u = g.ground().term(rng, 3);
    let mut s = u.clone();
    let mut sigma = Subst::id();
    let positions = u.positions();
    for k in 0..rng.gen_range(0..=2) {
        let p = &positions[rng.gen_range(0..positions.len())];
        // Positions inside an earlier cut no longer exist.
        let Ok(sub) = s.subterm_at(p) else { continue };
        if sub.is_ground() {
            let x = Var::with_dis("V", k + 1);
            sigma.insert(x, sub.clone());
            s = s.replace_at(p, Term::var(x)).unwrap();
        }
    }
    let nf = normalize(&FreshCtx::new(), &u, pres, Strategy::LeftmostInnermost, 30);
    let t = if nf.exhausted { u } else { nf.term };
    (TUnifProblem::new(TermInCtx::bare(s), TermInCtx::bare(t)), sigma)
}

fn tuple(mut ts: Vec<Term>) -> Term {
    let last = ts.pop().unwrap_or_else(|| Term::pair(Term::atom(Atom::new("unit")), Term::atom(Atom::new("unit"))));
    ts.into_iter().rev().fold(last, |acc, t| Term::pair(t, acc))
}

/// `(Γ, σ) ≤ (Γ', σ')` on `vars`: some `δ` with `Γ' ⊢ Γδ` and
/// `σδ ≈ σ'` on every variable of `vars`.
pub fn more_general(
    pres: &TheoryPresentation,
    vars: &BTreeSet<Var>,
    general: (&FreshCtx, &Subst),
    instance: (&FreshCtx, &Subst),
) -> bool {
    let pattern = tuple(vars.iter().map(|&x| general.1.image_of(x)).collect());
    let subject = tuple(vars.iter().map(|&x| instance.1.image_of(x)).collect());
    let mut supply = NameSupply::above(pattern.max_dis().max(subject.max_dis()).max(pres.max_dis()) + 1000);
    let pattern = TermInCtx::new(general.0.clone(), pattern);
    let subject = TermInCtx::new(instance.0.clone(), subject);
    e_match(&pres.theory, &pattern, &subject, &mut supply).iter().any(|m| {
        m.solution.context.iter().all(|(a, x)| instance.0.contains(a, x) || m.fresh_atoms.contains(&a))
    })
}
