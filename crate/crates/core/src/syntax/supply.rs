use std::collections::{BTreeMap, BTreeSet};

use super::context::{FreshCtx, TermInCtx};
use super::name::{Atom, Var};
use super::term::Term;

/// Source of fresh disambiguators. Every name it hands out keeps the
/// original identifier and takes the next counter value, so a supply started
/// above every disambiguator in scope never collides with existing names.
#[derive(Clone, Debug)]
pub struct NameSupply {
    next: u32,
}

impl NameSupply {
    pub fn starting_at(next: u32) -> NameSupply {
        NameSupply { next: next.max(1) }
    }

    /// A supply whose names exceed `max_dis`.
    pub fn above(max_dis: u32) -> NameSupply {
        NameSupply::starting_at(max_dis + 1)
    }

    pub fn peek(&self) -> u32 {
        self.next
    }

    pub fn bump_above(&mut self, max_dis: u32) {
        self.next = self.next.max(max_dis + 1);
    }

    pub fn fresh_atom(&mut self, a: Atom) -> Atom {
        let dis = self.next;
        self.next += 1;
        Atom { name: a.name, dis }
    }

    pub fn fresh_var(&mut self, x: Var) -> Var {
        let dis = self.next;
        self.next += 1;
        Var { name: x.name, dis }
    }
}

/// Injective record of a freshening.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Renaming {
    pub atoms: BTreeMap<Atom, Atom>,
    pub vars: BTreeMap<Var, Var>,
}

impl Renaming {
    /// Fresh names for every given atom and variable, skipping anything in
    /// the avoid sets.
    pub fn fresh_for(
        atoms: &BTreeSet<Atom>,
        vars: &BTreeSet<Var>,
        avoid_atoms: &BTreeSet<Atom>,
        avoid_vars: &BTreeSet<Var>,
        supply: &mut NameSupply,
    ) -> Renaming {
        let mut r = Renaming::default();
        for &a in atoms {
            let mut b = supply.fresh_atom(a);
            while avoid_atoms.contains(&b) || atoms.contains(&b) {
                b = supply.fresh_atom(a);
            }
            r.atoms.insert(a, b);
        }
        for &x in vars {
            let mut y = supply.fresh_var(x);
            while avoid_vars.contains(&y) || vars.contains(&y) {
                y = supply.fresh_var(x);
            }
            r.vars.insert(x, y);
        }
        r
    }

    pub fn atom(&self, a: Atom) -> Atom {
        self.atoms.get(&a).copied().unwrap_or(a)
    }

    pub fn var(&self, x: Var) -> Var {
        self.vars.get(&x).copied().unwrap_or(x)
    }

    pub fn term(&self, t: &Term) -> Term {
        t.rename(&|a| self.atom(a), &|x| self.var(x))
    }

    pub fn context(&self, c: &FreshCtx) -> FreshCtx {
        c.iter().map(|(a, x)| (self.atom(a), self.var(x))).collect()
    }

    /// Atoms introduced by this renaming.
    pub fn fresh_atoms(&self) -> BTreeSet<Atom> {
        self.atoms.values().copied().collect()
    }
}

/// Replaces every atom and variable of `Δ ⊢ t` by a fresh one.
pub fn freshen_term_in_ctx(
    tic: &TermInCtx,
    avoid_atoms: &BTreeSet<Atom>,
    avoid_vars: &BTreeSet<Var>,
    supply: &mut NameSupply,
) -> (TermInCtx, Renaming) {
    let mut atoms = tic.term.atoms();
    atoms.extend(tic.context.atoms());
    let r = Renaming::fresh_for(&atoms, &tic.vars(), avoid_atoms, avoid_vars, supply);
    (TermInCtx::new(r.context(&tic.context), r.term(&tic.term)), r)
}
