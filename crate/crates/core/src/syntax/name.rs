use std::collections::HashSet;
use std::fmt;
use std::sync::{Mutex, OnceLock};

/// Interned identifier. Comparison is by string content, so orderings are
/// stable across runs regardless of interning order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Name(&'static str);

impl Name {
    pub fn new(s: &str) -> Name {
        static TABLE: OnceLock<Mutex<HashSet<&'static str>>> = OnceLock::new();
        let mut table = TABLE.get_or_init(Default::default).lock().unwrap();
        if let Some(&interned) = table.get(s) {
            return Name(interned);
        }
        let leaked: &'static str = Box::leak(s.to_owned().into_boxed_str());
        table.insert(leaked);
        Name(leaked)
    }

    pub fn as_str(&self) -> &'static str {
        self.0
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

/// Disambiguators of 1..=3 print as primes, larger ones as `'n`.
pub(crate) fn write_disambiguated(f: &mut fmt::Formatter<'_>, name: Name, dis: u32) -> fmt::Result {
    f.write_str(name.as_str())?;
    match dis {
        0 => Ok(()),
        1..=3 => {
            for _ in 0..dis {
                f.write_str("'")?;
            }
            Ok(())
        }
        n => write!(f, "'{n}"),
    }
}

/// An object-level name. User-written atoms have disambiguator 0 unless they
/// carry primes.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub name: Name,
    pub dis: u32,
}

impl Atom {
    pub fn new(name: &str) -> Atom {
        Atom { name: Name::new(name), dis: 0 }
    }

    pub fn with_dis(name: &str, dis: u32) -> Atom {
        Atom { name: Name::new(name), dis }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_disambiguated(f, self.name, self.dis)
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A meta-level unknown.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub name: Name,
    pub dis: u32,
}

impl Var {
    pub fn new(name: &str) -> Var {
        Var { name: Name::new(name), dis: 0 }
    }

    pub fn with_dis(name: &str, dis: u32) -> Var {
        Var { name: Name::new(name), dis }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_disambiguated(f, self.name, self.dis)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_is_by_content() {
        assert_eq!(Name::new("abc"), Name::new(&String::from("abc")));
        assert_ne!(Atom::new("a"), Atom::with_dis("a", 1));
    }

    #[test]
    fn primes_and_numeric_suffix() {
        assert_eq!(Atom::with_dis("a", 2).to_string(), "a''");
        assert_eq!(Var::with_dis("X", 17).to_string(), "X'17");
    }
}
