//! Theories shipped with the crate.

pub const PRENEX: &str = include_str!("../../theories/prenex.nrs");
pub const LAMBDA: &str = include_str!("../../theories/lambda.nrs");
pub const DIFF: &str = include_str!("../../theories/diff.nrs");
pub const FORALLC: &str = include_str!("../../theories/forallc.nrs");
pub const FORALL2: &str = include_str!("../../theories/forall2.nrs");

pub const NAMES: [&str; 5] = ["prenex.nrs", "lambda.nrs", "diff.nrs", "forallc.nrs", "forall2.nrs"];

/// Source of a bundled theory, looked up by file name with or without the
/// extension or leading directories.
pub fn source(name: &str) -> Option<&'static str> {
    let base = name.rsplit(['/', '\\']).next().unwrap_or(name);
    let stem = base.strip_suffix(".nrs").unwrap_or(base);
    match stem {
        "prenex" => Some(PRENEX),
        "lambda" => Some(LAMBDA),
        "diff" => Some(DIFF),
        "forallc" => Some(FORALLC),
        "forall2" => Some(FORALL2),
        _ => None,
    }
}

/// Loads a bundled theory; panics only if the bundled text is malformed.
pub fn load(name: &str) -> super::Loaded {
    let text = source(name).unwrap_or_else(|| panic!("no bundled theory named {name}"));
    super::load_theory_str(text).unwrap_or_else(|e| panic!("bundled theory {name}: {e}"))
}
