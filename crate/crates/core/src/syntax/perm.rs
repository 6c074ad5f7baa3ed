use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::name::Atom;

/// A finite permutation of atoms, kept as a sequence of swappings applied
/// right to left.
///
/// Every constructor canonicalises the sequence (one block of swappings per
/// cycle, cycles ordered by their least atom), so structural equality of two
/// permutations coincides with extensional equality.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    swaps: Vec<(Atom, Atom)>,
}

impl Perm {
    pub fn id() -> Perm {
        Perm { swaps: Vec::new() }
    }

    pub fn swap(a: Atom, b: Atom) -> Perm {
        if a == b {
            Perm::id()
        } else if a < b {
            Perm { swaps: vec![(a, b)] }
        } else {
            Perm { swaps: vec![(b, a)] }
        }
    }

    /// Builds the permutation denoted by the written sequence `(a1 b1)…(an bn)`.
    pub fn from_swaps(swaps: impl IntoIterator<Item = (Atom, Atom)>) -> Perm {
        let raw: Vec<(Atom, Atom)> = swaps.into_iter().collect();
        let support: BTreeSet<Atom> = raw.iter().flat_map(|&(a, b)| [a, b]).collect();
        let map: BTreeMap<Atom, Atom> = support
            .iter()
            .map(|&a| (a, apply_raw(&raw, a)))
            .filter(|(a, b)| a != b)
            .collect();
        Perm::from_map(&map)
    }

    fn from_map(map: &BTreeMap<Atom, Atom>) -> Perm {
        let mut seen = BTreeSet::new();
        let mut swaps = Vec::new();
        for &start in map.keys() {
            if seen.contains(&start) {
                continue;
            }
            let mut cycle = vec![start];
            seen.insert(start);
            let mut cur = map[&start];
            while cur != start {
                seen.insert(cur);
                cycle.push(cur);
                cur = map[&cur];
            }
            // (c1 ck)(c1 ck-1)…(c1 c2) sends c1→c2→…→ck→c1.
            for &c in cycle[1..].iter().rev() {
                swaps.push((start, c));
            }
        }
        Perm { swaps }
    }

    pub fn swaps(&self) -> &[(Atom, Atom)] {
        &self.swaps
    }

    pub fn is_id(&self) -> bool {
        self.swaps.is_empty()
    }

    pub fn apply(&self, a: Atom) -> Atom {
        apply_raw(&self.swaps, a)
    }

    /// `self ∘ other`: applies `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        if other.is_id() {
            return self.clone();
        }
        if self.is_id() {
            return other.clone();
        }
        Perm::from_swaps(self.swaps.iter().chain(other.swaps.iter()).copied())
    }

    pub fn inverse(&self) -> Perm {
        Perm::from_swaps(self.swaps.iter().rev().copied())
    }

    /// Atoms moved by the permutation.
    pub fn domain(&self) -> BTreeSet<Atom> {
        // Canonical form mentions exactly the moved atoms.
        self.swaps.iter().flat_map(|&(a, b)| [a, b]).collect()
    }

    /// `ds(self, other) = {a | self(a) ≠ other(a)}`.
    pub fn disagreement(&self, other: &Perm) -> BTreeSet<Atom> {
        let mut support = self.domain();
        support.extend(other.domain());
        support.into_iter().filter(|&a| self.apply(a) != other.apply(a)).collect()
    }

    pub fn atoms(&self) -> impl Iterator<Item = Atom> + '_ {
        self.swaps.iter().flat_map(|&(a, b)| [a, b])
    }

    /// Renames the atoms mentioned by the permutation (conjugation by an
    /// injective renaming).
    pub fn rename(&self, f: &impl Fn(Atom) -> Atom) -> Perm {
        Perm::from_swaps(self.swaps.iter().map(|&(a, b)| (f(a), f(b))))
    }
}

fn apply_raw(swaps: &[(Atom, Atom)], mut a: Atom) -> Atom {
    for &(x, y) in swaps.iter().rev() {
        if a == x {
            a = y;
        } else if a == y {
            a = x;
        }
    }
    a
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.swaps.is_empty() {
            return f.write_str("id");
        }
        for (a, b) in &self.swaps {
            write!(f, "({a} {b})")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
