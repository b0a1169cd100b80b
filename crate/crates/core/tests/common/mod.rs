use std::path::PathBuf;

use stratabound::{Abs, Symbol};

/// A displayed sequence: each symbol with the 1-based position its arrow
/// points to.
pub struct Display {
    pub symbols: Vec<Symbol>,
    pub targets: Vec<usize>,
}

pub fn fixture(name: &str) -> Display {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(format!("{name}.txt"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let mut symbols = Vec::new();
    let mut targets = Vec::new();
    for line in text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()) {
        let (sym, target) = line.split_once(' ').expect("symbol and target");
        symbols.push(sym.parse().expect("symbol"));
        targets.push(target.trim().parse().expect("target"));
    }
    Display { symbols, targets }
}

/// `None` when `abs` shows exactly the displayed order and arrows, otherwise
/// the first difference.
pub fn mismatch(abs: &Abs, name: &str) -> Option<String> {
    let d = fixture(name);
    if abs.sequence() != d.symbols {
        return Some(format!("{name}: order {abs}"));
    }
    let got = abs.positional_pi().one_line();
    (got != d.targets).then(|| format!("{name}: arrows {got:?}, displayed {:?}", d.targets))
}
