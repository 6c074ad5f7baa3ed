//! Rewriting and closed rewriting modulo an equational theory.

mod normalize;

use std::collections::BTreeSet;
use std::fmt;

use crate::alpha::{check_alpha, check_fresh, settle_fresh_atoms, simplify_suspensions};
use crate::equational::{e_equal, e_match, Axiom, Solution, TheoryE};
use crate::syntax::{
    Atom, FreshCtx, FuncSymbol, NameSupply, Position, Renaming, Term, TermInCtx, Var,
};

pub(crate) use normalize::first_step;
pub use normalize::{
    check_closed, check_closed_axiom, coherence_probe, normalize, normalize_with, Normalized, ProbeError, Strategy,
};

/// `∇ ⊢ l → r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteRule {
    pub name: String,
    pub context: FreshCtx,
    pub lhs: Term,
    pub rhs: Term,
}

impl RewriteRule {
    pub fn new(name: impl Into<String>, context: FreshCtx, lhs: Term, rhs: Term) -> RewriteRule {
        RewriteRule { name: name.into(), context, lhs, rhs }
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = self.lhs.atoms();
        self.rhs.collect_atoms(&mut out);
        out.extend(self.context.atoms());
        out
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = self.lhs.vars();
        self.rhs.collect_vars(&mut out);
        out.extend(self.context.vars());
        out
    }

    pub fn max_dis(&self) -> u32 {
        self.lhs.max_dis().max(self.rhs.max_dis()).max(self.context.max_dis())
    }

    /// Checks the side conditions on variables and on the shape of `l`.
    pub fn well_formed(&self) -> Result<(), String> {
        if self.lhs.is_susp() {
            return Err("left-hand side is a variable".into());
        }
        let lv = self.lhs.vars();
        let mut extra: BTreeSet<Var> = self.rhs.vars().difference(&lv).copied().collect();
        extra.extend(self.context.vars().difference(&lv).copied());
        if let Some(x) = extra.first() {
            return Err(format!("variable {x} does not occur in the left-hand side"));
        }
        Ok(())
    }

    /// Renames the variables, and in closed mode also the atoms, to fresh
    /// ones.
    pub fn freshen(&self, mode: Mode, supply: &mut NameSupply) -> (RewriteRule, Renaming) {
        let atoms = match mode {
            Mode::Plain => BTreeSet::new(),
            Mode::Closed => self.atoms(),
        };
        let r = Renaming::fresh_for(&atoms, &self.vars(), &BTreeSet::new(), &BTreeSet::new(), supply);
        let out = RewriteRule {
            name: self.name.clone(),
            context: r.context(&self.context),
            lhs: r.term(&self.lhs),
            rhs: r.term(&self.rhs),
        };
        (out, r)
    }
}

impl fmt::Display for RewriteRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} |- {} -> {}", self.name, self.context, self.lhs, self.rhs)
    }
}

/// Rules `R` over a signature, together with the theory `E`.
#[derive(Clone, Debug)]
pub struct TheoryPresentation {
    pub signature: BTreeSet<FuncSymbol>,
    pub rules: Vec<RewriteRule>,
    pub theory: TheoryE,
}

impl TheoryPresentation {
    pub fn new(signature: BTreeSet<FuncSymbol>, rules: Vec<RewriteRule>, theory: TheoryE) -> TheoryPresentation {
        TheoryPresentation { signature, rules, theory }
    }

    pub fn max_dis(&self) -> u32 {
        self.rules.iter().map(RewriteRule::max_dis).max().unwrap_or(0).max(self.theory.max_dis())
    }

    /// The same presentation with only the named rules.
    pub fn restricted_to(&self, names: &[&str]) -> TheoryPresentation {
        TheoryPresentation {
            signature: self.signature.clone(),
            rules: self.rules.iter().filter(|r| names.contains(&r.name.as_str())).cloned().collect(),
            theory: self.theory.clone(),
        }
    }

    pub fn axioms(&self) -> &[Axiom] {
        match &self.theory {
            TheoryE::AxiomSet { axioms, .. } => axioms,
            _ => &[],
        }
    }

    pub fn equal(&self, delta: &FreshCtx, s: &Term, t: &Term) -> bool {
        e_equal(&self.theory, delta, s, t)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Plain,
    Closed,
}

/// One rewrite step `Δ ⊢ s → t`.
#[derive(Clone, Debug)]
pub struct DerivationStep {
    pub rule: String,
    pub rule_index: usize,
    pub position: Position,
    pub solution: Solution,
    pub source: Term,
    pub result: Term,
    pub closed: bool,
    /// Context of the result: the input context plus freshness facts for
    /// newly generated atoms that remain in the result.
    pub context: FreshCtx,
    /// The renamed rule instance that was applied.
    pub instance: RewriteRule,
    /// Atoms generated by this step.
    pub fresh_atoms: BTreeSet<Atom>,
}

fn supply_for(delta: &FreshCtx, s: &Term, pres: &TheoryPresentation) -> NameSupply {
    NameSupply::above(delta.max_dis().max(s.max_dis()).max(pres.max_dis()))
}

/// Every step with rule `rule_index` at `pos`.
pub fn steps_at(
    pres: &TheoryPresentation,
    delta: &FreshCtx,
    s: &Term,
    pos: &Position,
    rule_index: usize,
    mode: Mode,
    supply: &mut NameSupply,
) -> Vec<DerivationStep> {
    let Ok(sub) = s.subterm_at(pos) else {
        return Vec::new();
    };
    if sub.is_susp() {
        return Vec::new();
    }
    let rule = &pres.rules[rule_index];
    if head_clash(&pres.theory, &rule.lhs, sub) {
        return Vec::new();
    }
    supply.bump_above(delta.max_dis().max(s.max_dis()).max(pres.max_dis()));
    let (fr, ren) = rule.freshen(mode, supply);
    let junk = ren.fresh_atoms();
    let mut vars = delta.vars();
    s.collect_vars(&mut vars);
    let ext = delta.union(&FreshCtx::product(&junk, &vars));
    let pattern = TermInCtx::new(fr.context.clone(), fr.lhs.clone());
    let subject = TermInCtx::new(ext.clone(), sub.clone());
    let mut out: Vec<DerivationStep> = Vec::new();
    for m in e_match(&pres.theory, &pattern, &subject, supply) {
        let ok = m.solution.context.iter().all(|(a, x)| ext.contains(a, x) || m.fresh_atoms.contains(&a));
        if !ok {
            continue;
        }
        let mut fresh = junk.clone();
        fresh.extend(m.fresh_atoms.iter().copied());
        let full = ext.union(&m.solution.context);
        let replaced = s.replace_at(pos, m.solution.subst.apply(&fr.rhs)).expect("valid position");
        let result = simplify_suspensions(&full, &replaced);
        let context = settle_fresh_atoms(&full, &fresh, &[&result]);
        if out.iter().any(|o| o.result == result) {
            continue;
        }
        out.push(DerivationStep {
            rule: rule.name.clone(),
            rule_index,
            position: pos.clone(),
            solution: m.solution,
            source: s.clone(),
            result,
            closed: mode == Mode::Closed,
            context,
            instance: fr.clone(),
            fresh_atoms: fresh,
        });
    }
    out
}

/// Cheap rejection: outside axiom sets the head symbol is invariant.
fn head_clash(theory: &TheoryE, l: &Term, s: &Term) -> bool {
    if matches!(theory, TheoryE::AxiomSet { .. }) {
        return false;
    }
    match (l, s) {
        (Term::App(f, _), Term::App(g, _)) => f.name != g.name,
        (Term::App(..), _) | (Term::Abs(..), Term::App(..)) | (Term::Abs(..), Term::Atom(_)) => true,
        _ => false,
    }
}

fn all_steps(pres: &TheoryPresentation, delta: &FreshCtx, s: &Term, mode: Mode, supply: &mut NameSupply) -> Vec<DerivationStep> {
    let mut out = Vec::new();
    for i in 0..pres.rules.len() {
        for p in s.nonvariable_positions() {
            out.extend(steps_at(pres, delta, s, &p, i, mode, supply));
        }
    }
    out
}

/// One-step rewrites applying the rules as written (variables renamed
/// apart). Rules in order, positions in pre-order.
pub fn rewrite_steps(delta: &FreshCtx, s: &Term, pres: &TheoryPresentation) -> Vec<DerivationStep> {
    let mut supply = supply_for(delta, s, pres);
    all_steps(pres, delta, s, Mode::Plain, &mut supply)
}

/// One-step closed rewrites: each rule is freshened and its atoms are
/// assumed fresh for every variable in scope.
pub fn closed_rewrite_steps(delta: &FreshCtx, s: &Term, pres: &TheoryPresentation) -> Vec<DerivationStep> {
    let mut supply = supply_for(delta, s, pres);
    closed_rewrite_steps_with(delta, s, pres, &mut supply)
}

pub fn closed_rewrite_steps_with(
    delta: &FreshCtx,
    s: &Term,
    pres: &TheoryPresentation,
    supply: &mut NameSupply,
) -> Vec<DerivationStep> {
    all_steps(pres, delta, s, Mode::Closed, supply)
}

/// Re-checks the premises of a step: the rule instance's constraints hold,
/// the redex equals the instantiated left-hand side modulo `E`, and the
/// result is the contractum in place.
pub fn verify_step(pres: &TheoryPresentation, delta: &FreshCtx, step: &DerivationStep) -> bool {
    let ctx = delta.union(&step.context).union(&step.solution.context);
    let theta = &step.solution.subst;
    let rule = &step.instance;
    let Ok(redex) = step.source.subterm_at(&step.position) else {
        return false;
    };
    let Ok(contractum) = step.source.replace_at(&step.position, theta.apply(&rule.rhs)) else {
        return false;
    };
    rule.context.iter().all(|(a, x)| check_fresh(&ctx, a, &theta.image_of(x)))
        && e_equal(&pres.theory, &ctx, redex, &theta.apply(&rule.lhs))
        && check_alpha(&ctx, &contractum, &step.result)
}
