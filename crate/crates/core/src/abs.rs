//! Arrowed binary sequences.
//!
//! An ABS is a totally ordered finite set of symbols, each carrying a bit,
//! together with a bijection `pi` of the symbols. Symbols keep their
//! `(segment, position)` identity through every reordering, so a symbol such
//! as `0^1_4` can be followed through a whole modification.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::newton::{NewtonPolygon, Segment};
use crate::weyl::Permutation;

/// `tau^r_i`: position `i` of segment `r`, labelled `tau`.
///
/// Segment `0` is reserved for sequences built straight from a bit string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    pub segment: u32,
    pub position: u32,
    pub label: u8,
}

impl Symbol {
    pub const fn zero(segment: u32, position: u32) -> Self {
        Symbol { segment, position, label: 0 }
    }

    pub const fn one(segment: u32, position: u32) -> Self {
        Symbol { segment, position, label: 1 }
    }

    fn key(&self) -> (u32, u32) {
        (self.segment, self.position)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}_{}", self.label, self.segment, self.position)
    }
}

/// Parses `tau^r_i` or `tau:r:i`.
impl FromStr for Symbol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected a symbol like 0^1_4 or 0:1:4, got {s:?}"));
        let parts: Vec<&str> = if s.contains(':') {
            s.split(':').collect()
        } else {
            let (label, rest) = s.split_once('^').ok_or_else(bad)?;
            let (r, i) = rest.split_once('_').ok_or_else(bad)?;
            vec![label, r, i]
        };
        let [label, r, i] = parts.as_slice() else {
            return Err(bad());
        };
        let label: u8 = label.trim().parse().map_err(|_| bad())?;
        if label > 1 {
            return Err(bad());
        }
        Ok(Symbol {
            segment: r.trim().parse().map_err(|_| bad())?,
            position: i.trim().parse().map_err(|_| bad())?,
            label,
        })
    }
}

/// Serialized as `[r, i]`; the label travels separately.
impl Serialize for Symbol {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        [self.segment, self.position].serialize(serializer)
    }
}

/// A bit string `nu` in `{0,1}^h`, the type of an ABS.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinarySequence(Vec<u8>);

impl BinarySequence {
    pub fn from_bits(bits: Vec<u8>) -> Self {
        debug_assert!(bits.iter().all(|&b| b <= 1));
        BinarySequence(bits)
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn ones(&self) -> usize {
        self.0.iter().filter(|&&b| b == 1).count()
    }

    pub fn zeros(&self) -> usize {
        self.len() - self.ones()
    }

    /// All of `{0,1}^h` in lexicographic order.
    pub fn all(h: usize) -> Vec<BinarySequence> {
        assert!(h < 32, "2^{h} sequences is too many");
        (0u32..1 << h)
            .map(|k| BinarySequence((0..h).rev().map(|b| ((k >> b) & 1) as u8).collect()))
            .collect()
    }

    /// The sequences of length `h` with exactly `c` ones, lexicographic.
    pub fn all_with_ones(h: usize, c: usize) -> Vec<BinarySequence> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(h);
        fn rec(h: usize, ones_left: usize, cur: &mut Vec<u8>, out: &mut Vec<BinarySequence>) {
            if cur.len() == h {
                if ones_left == 0 {
                    out.push(BinarySequence(cur.clone()));
                }
                return;
            }
            let room = h - cur.len();
            if room > ones_left {
                cur.push(0);
                rec(h, ones_left, cur, out);
                cur.pop();
            }
            if ones_left > 0 {
                cur.push(1);
                rec(h, ones_left - 1, cur, out);
                cur.pop();
            }
        }
        if c <= h {
            rec(h, c, &mut cur, &mut out);
        }
        out
    }

    /// Number of pairs (0 before 1).
    pub fn length(&self) -> usize {
        let mut zeros = 0;
        let mut total = 0;
        for &b in &self.0 {
            if b == 0 {
                zeros += 1;
            } else {
                total += zeros;
            }
        }
        total
    }
}

impl fmt::Display for BinarySequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BinarySequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .filter(|c| !c.is_whitespace() && *c != ',')
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::Parse(format!("{c:?} is not a bit in {s:?}"))),
            })
            .collect::<Result<Vec<u8>>>()
            .map(BinarySequence)
    }
}

impl Serialize for BinarySequence {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BinarySequence {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(deserializer)?.parse().map_err(serde::de::Error::custom)
    }
}

/// The purely periodic stream `b_k = delta(pi^-k(t))`, stored as one period.
///
/// Equality and order are those of the real numbers `0.b_1 b_2 ...`, so the
/// streams `01` and `0101` compare equal.
#[derive(Debug, Clone, Serialize)]
pub struct BinaryExpansion {
    bits: Vec<u8>,
}

impl BinaryExpansion {
    pub fn from_period(bits: Vec<u8>) -> Self {
        assert!(!bits.is_empty(), "a binary expansion needs a nonempty period");
        BinaryExpansion { bits }
    }

    pub fn period(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    /// `(k, 2^p - 1)` with the value `k / (2^p - 1)`, when `p < 128`.
    pub fn as_fraction(&self) -> Option<(u128, u128)> {
        if self.period() >= 128 {
            return None;
        }
        let k = self.bits.iter().fold(0u128, |acc, &b| (acc << 1) | u128::from(b));
        Some((k, (1u128 << self.period()) - 1))
    }

    /// Approximate value, for display only.
    pub fn to_f64(&self) -> f64 {
        let p = self.period() as i32;
        let k = self.bits.iter().fold(0f64, |acc, &b| acc * 2.0 + f64::from(b));
        k / (2f64.powi(p) - 1.0)
    }
}

impl Ord for BinaryExpansion {
    fn cmp(&self, other: &Self) -> Ordering {
        // Two periodic streams agreeing on p1 + p2 bits agree forever (Fine-Wilf).
        let (p, q) = (self.period(), other.period());
        (0..p + q)
            .map(|k| self.bits[k % p].cmp(&other.bits[k % q]))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    }
}

impl PartialOrd for BinaryExpansion {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for BinaryExpansion {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other).is_eq()
    }
}

impl Eq for BinaryExpansion {}

impl fmt::Display for BinaryExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("0.(")?;
        for &b in &self.bits {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        f.write_str(")")
    }
}

/// An arrowed binary sequence `(T, Delta, Pi)`.
///
/// Symbols are stored once; `order` and `pi` refer to them by index so that
/// reorderings share the symbol table.
#[derive(Debug, Clone)]
pub struct Abs {
    symbols: Vec<Symbol>,
    // position -> symbol id
    order: Vec<usize>,
    // symbol id -> position
    pos: Vec<usize>,
    // symbol id -> symbol id
    pi: Vec<usize>,
    provenance: Option<NewtonPolygon>,
}

impl PartialEq for Abs {
    /// Same symbols in the same order with the same arrows.
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len()
            && (0..self.len()).all(|k| {
                self.symbol_at(k) == other.symbol_at(k)
                    && self.symbols[self.pi[self.order[k]]] == other.symbols[other.pi[other.order[k]]]
            })
    }
}

impl Eq for Abs {}

impl Abs {
    /// Builds an ABS from its order and its arrows `t -> pi(t)`.
    pub fn new(order: Vec<Symbol>, arrows: &[(Symbol, Symbol)]) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidAbs(msg));
        let mut index = std::collections::HashMap::new();
        for (id, s) in order.iter().enumerate() {
            if s.label > 1 {
                return invalid(format!("{s} has a label other than 0 or 1"));
            }
            if index.insert(s.key(), id).is_some() {
                return invalid(format!("symbol {s} occurs twice"));
            }
        }
        let lookup = |s: &Symbol| -> Result<usize> {
            match index.get(&s.key()) {
                Some(&id) if order[id] == *s => Ok(id),
                Some(&id) => Err(Error::InvalidAbs(format!("{s} is labelled {} in the order", order[id].label))),
                None => Err(Error::SymbolNotInSequence(*s)),
            }
        };
        let mut pi = vec![usize::MAX; order.len()];
        let mut hit = vec![false; order.len()];
        for (from, to) in arrows {
            let (f, t) = (lookup(from)?, lookup(to)?);
            if pi[f] != usize::MAX {
                return invalid(format!("{from} has two arrows"));
            }
            if hit[t] {
                return invalid(format!("{to} is hit twice"));
            }
            pi[f] = t;
            hit[t] = true;
        }
        if let Some(id) = pi.iter().position(|&t| t == usize::MAX) {
            return invalid(format!("{} has no arrow", order[id]));
        }
        let ids = (0..order.len()).collect();
        Ok(Abs::from_raw(order, ids, pi, None))
    }

    pub(crate) fn from_raw(
        symbols: Vec<Symbol>,
        order: Vec<usize>,
        pi: Vec<usize>,
        provenance: Option<NewtonPolygon>,
    ) -> Self {
        let mut pos = vec![0; order.len()];
        for (k, &id) in order.iter().enumerate() {
            pos[id] = k;
        }
        Abs { symbols, order, pos, pi, provenance }
    }

    /// Same symbols and arrows, new order (given as symbol ids).
    pub(crate) fn reordered(&self, order: Vec<usize>) -> Abs {
        Abs::from_raw(self.symbols.clone(), order, self.pi.clone(), self.provenance.clone())
    }

    /// Same symbols and order, new arrows (given as symbol ids).
    pub(crate) fn rewired(&self, pi: Vec<usize>) -> Abs {
        Abs::from_raw(self.symbols.clone(), self.order.clone(), pi, self.provenance.clone())
    }

    pub(crate) fn order_ids(&self) -> &[usize] {
        &self.order
    }

    pub(crate) fn pi_ids(&self) -> &[usize] {
        &self.pi
    }

    pub(crate) fn symbol(&self, id: usize) -> Symbol {
        self.symbols[id]
    }

    pub(crate) fn id_of(&self, s: &Symbol) -> Result<usize> {
        match self.symbols.iter().position(|t| t.key() == s.key()) {
            Some(id) if self.symbols[id] == *s => Ok(id),
            _ => Err(Error::SymbolNotInSequence(*s)),
        }
    }

    pub fn with_provenance(mut self, polygon: Option<NewtonPolygon>) -> Self {
        self.provenance = polygon;
        self
    }

    pub fn provenance(&self) -> Option<&NewtonPolygon> {
        self.provenance.as_ref()
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// The symbol at 0-based position `k`.
    pub fn symbol_at(&self, k: usize) -> Symbol {
        self.symbols[self.order[k]]
    }

    /// Symbols in order.
    pub fn sequence(&self) -> Vec<Symbol> {
        self.order.iter().map(|&id| self.symbols[id]).collect()
    }

    /// 0-based position of `s`.
    pub fn position(&self, s: &Symbol) -> Result<usize> {
        Ok(self.pos[self.id_of(s)?])
    }

    pub fn pi(&self, s: &Symbol) -> Result<Symbol> {
        Ok(self.symbols[self.pi[self.id_of(s)?]])
    }

    pub fn delta(&self, s: &Symbol) -> Result<u8> {
        Ok(self.symbols[self.id_of(s)?].label)
    }

    /// Arrows `t -> pi(t)` listed in order of `t`.
    pub fn arrows(&self) -> Vec<(Symbol, Symbol)> {
        self.order.iter().map(|&id| (self.symbols[id], self.symbols[self.pi[id]])).collect()
    }

    pub(crate) fn expansion_of_id(&self, id: usize, pi_inv: &[usize]) -> BinaryExpansion {
        let mut bits = Vec::new();
        let mut x = id;
        loop {
            x = pi_inv[x];
            bits.push(self.symbols[x].label);
            if x == id {
                break;
            }
        }
        BinaryExpansion { bits }
    }

    fn pi_inverse_ids(&self) -> Vec<usize> {
        let mut inv = vec![0; self.pi.len()];
        for (id, &t) in self.pi.iter().enumerate() {
            inv[t] = id;
        }
        inv
    }

    /// Binary expansion of every symbol, indexed by symbol id.
    pub(crate) fn expansions_by_id(&self) -> Vec<BinaryExpansion> {
        let inv = self.pi_inverse_ids();
        (0..self.symbols.len()).map(|id| self.expansion_of_id(id, &inv)).collect()
    }

    pub fn binary_expansion(&self, t: &Symbol) -> Result<BinaryExpansion> {
        let id = self.id_of(t)?;
        Ok(self.expansion_of_id(id, &self.pi_inverse_ids()))
    }

    /// Binary expansions in order.
    pub fn expansions(&self) -> Vec<BinaryExpansion> {
        let by_id = self.expansions_by_id();
        self.order.iter().map(|&id| by_id[id].clone()).collect()
    }

    /// Number of pairs `t < t'` with `delta(t) = 0` and `delta(t') = 1`.
    pub fn length(&self) -> usize {
        self.to_binary_sequence().length()
    }

    /// The labels read in order.
    pub fn to_binary_sequence(&self) -> BinarySequence {
        BinarySequence(self.order.iter().map(|&id| self.symbols[id].label).collect())
    }

    /// `Pi` as a permutation of 1-based positions.
    pub fn positional_pi(&self) -> Permutation {
        Permutation::from_zero_based(self.order.iter().map(|&id| self.pos[self.pi[id]]).collect())
    }

    /// Binary expansions never decrease along the order.
    pub fn is_b_monotone(&self) -> bool {
        self.expansions().windows(2).all(|w| w[0] <= w[1])
    }

    /// Checks that `pi` is the F/V rule of the current type, that `pi`
    /// preserves the order among symbols of equal label, and that distinct
    /// binary expansions are ordered like the symbols.
    pub fn is_admissible(&self) -> bool {
        self.admissibility_defect().is_none()
    }

    /// The first failing condition of [`Self::is_admissible`], if any.
    pub fn admissibility_defect(&self) -> Option<String> {
        let h = self.len();
        let d = self.to_binary_sequence().zeros();
        let (mut zeros, mut ones) = (0, 0);
        for k in 0..h {
            let id = self.order[k];
            let expected = if self.symbols[id].label == 0 {
                zeros += 1;
                zeros - 1
            } else {
                ones += 1;
                d + ones - 1
            };
            let actual = self.pos[self.pi[id]];
            if actual != expected {
                return Some(format!(
                    "{} at position {} maps to position {}, the F/V rule says {}",
                    self.symbols[id],
                    k + 1,
                    actual + 1,
                    expected + 1
                ));
            }
        }
        // The F/V rule already forces pi to be monotone on each label; the
        // direct pairwise check stays as a guard on the rule above.
        for a in 0..h {
            for b in a + 1..h {
                let (s, t) = (self.order[a], self.order[b]);
                if self.symbols[s].label == self.symbols[t].label
                    && self.pos[self.pi[s]] > self.pos[self.pi[t]]
                {
                    return Some(format!("pi reverses {} and {}", self.symbols[s], self.symbols[t]));
                }
            }
        }
        let b = self.expansions();
        for x in 0..h {
            for y in x + 1..h {
                if b[x] > b[y] {
                    return Some(format!(
                        "{} precedes {} but has the larger binary expansion",
                        self.symbol_at(x),
                        self.symbol_at(y)
                    ));
                }
            }
        }
        None
    }

    /// Token line, then one `k -> k'` line per arrow, 1-based.
    pub fn render_ascii(&self) -> String {
        let tokens: Vec<String> = self.sequence().iter().map(Symbol::to_string).collect();
        let mut out = tokens.join(" ");
        out.push('\n');
        let p = self.positional_pi();
        let width = self.len().to_string().len();
        for k in 1..=self.len() {
            out.push_str(&format!("{k:>width$} -> {}\n", p.apply(k)));
        }
        out
    }
}

impl fmt::Display for Abs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tokens: Vec<String> = self.sequence().iter().map(Symbol::to_string).collect();
        f.write_str(&tokens.join(" "))
    }
}

#[derive(Serialize, Deserialize)]
struct AbsRepr {
    order: Vec<[u32; 2]>,
    delta: Vec<u8>,
    pi: Vec<[[u32; 2]; 2]>,
    #[serde(default)]
    provenance: Option<NewtonPolygon>,
}

impl Serialize for Abs {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let seq = self.sequence();
        AbsRepr {
            order: seq.iter().map(|s| [s.segment, s.position]).collect(),
            delta: seq.iter().map(|s| s.label).collect(),
            pi: self
                .arrows()
                .iter()
                .map(|(a, b)| [[a.segment, a.position], [b.segment, b.position]])
                .collect(),
            provenance: self.provenance.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Abs {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = AbsRepr::deserialize(deserializer)?;
        if repr.order.len() != repr.delta.len() {
            return Err(D::Error::custom("order and delta differ in length"));
        }
        let order: Vec<Symbol> = repr
            .order
            .iter()
            .zip(&repr.delta)
            .map(|(&[r, i], &label)| Symbol { segment: r, position: i, label })
            .collect();
        let label_of = |r: u32, i: u32| {
            order.iter().find(|s| s.key() == (r, i)).map_or(0, |s| s.label)
        };
        let arrows: Vec<(Symbol, Symbol)> = repr
            .pi
            .iter()
            .map(|&[[r, i], [q, j]]| {
                (
                    Symbol { segment: r, position: i, label: label_of(r, i) },
                    Symbol { segment: q, position: j, label: label_of(q, j) },
                )
            })
            .collect();
        Abs::new(order, &arrows)
            .map(|a| a.with_provenance(repr.provenance))
            .map_err(D::Error::custom)
    }
}

/// The minimal ABS of one segment `(m, n)`, labelled as segment `id`:
/// `delta(t_i) = 1` iff `i <= m`, and `pi(t_i) = t_{i-m mod h}`.
pub fn minimal_abs_segment_with_id(id: u32, segment: Segment) -> Result<Abs> {
    let Segment { m, n } = segment;
    if !segment.is_coprime() {
        return Err(Error::CoprimalityViolation { index: id.saturating_sub(1) as usize, m, n });
    }
    let h = m + n;
    let symbols: Vec<Symbol> = (1..=h)
        .map(|i| Symbol { segment: id, position: i, label: u8::from(i <= m) })
        .collect();
    let pi = (1..=h).map(|i| ((i + h - m - 1) % h) as usize).collect();
    Ok(Abs::from_raw(symbols, (0..h as usize).collect(), pi, None))
}

pub fn minimal_abs_segment(m: u32, n: u32) -> Result<Abs> {
    let seg = Segment::new(m, n);
    minimal_abs_segment_with_id(1, seg)
        .map(|a| a.with_provenance(NewtonPolygon::new(vec![seg]).ok()))
}

/// Merges ABSs whose orders are already sorted by binary expansion into the
/// order sorted by `(b(t), segment)`. Each summand keeps its internal order.
pub fn direct_sum(parts: &[Abs]) -> Result<Abs> {
    let mut symbols = Vec::new();
    let mut pi = Vec::new();
    let mut queues = Vec::with_capacity(parts.len());
    let mut seen = HashSet::new();
    for (p, part) in parts.iter().enumerate() {
        let offset = symbols.len();
        for s in &part.symbols {
            if !seen.insert(s.key()) {
                return Err(Error::InvalidAbs(format!("symbol {s} occurs in two summands")));
            }
        }
        let b = part.expansions();
        if let Some(k) = b.windows(2).position(|w| w[0] > w[1]) {
            return Err(Error::InvalidAbs(format!(
                "summand {} is not sorted by binary expansion at {}",
                p + 1,
                part.symbol_at(k + 1)
            )));
        }
        symbols.extend_from_slice(&part.symbols);
        pi.extend(part.pi.iter().map(|&t| t + offset));
        let ids: Vec<usize> = part.order.iter().map(|&id| id + offset).collect();
        queues.push((ids, b, 0usize));
    }
    let mut order = Vec::with_capacity(symbols.len());
    loop {
        let best = queues
            .iter()
            .enumerate()
            .filter(|(_, (ids, _, head))| *head < ids.len())
            .min_by(|(p, (ids, b, head)), (q, (ids2, b2, head2))| {
                b[*head]
                    .cmp(&b2[*head2])
                    .then(symbols[ids[*head]].segment.cmp(&symbols[ids2[*head2]].segment))
                    .then(p.cmp(q))
            })
            .map(|(p, _)| p);
        let Some(p) = best else { break };
        let (ids, _, head) = &mut queues[p];
        order.push(ids[*head]);
        *head += 1;
    }
    Ok(Abs::from_raw(symbols, order, pi, None))
}

/// Minimal ABS of a polygon whose segments carry the given ids.
pub fn minimal_abs_with_ids(segments: &[(u32, Segment)]) -> Result<Abs> {
    let parts = segments
        .iter()
        .map(|&(id, seg)| minimal_abs_segment_with_id(id, seg))
        .collect::<Result<Vec<_>>>()?;
    let sum = direct_sum(&parts)?;
    // Equal expansions force equal slopes: the period word fixes (m, n).
    let seg_of = |s: Symbol| segments.iter().find(|(id, _)| *id == s.segment).map(|&(_, g)| g);
    let b = sum.expansions();
    for k in 1..sum.len() {
        if b[k - 1] == b[k] && seg_of(sum.symbol_at(k - 1)) != seg_of(sum.symbol_at(k)) {
            return Err(Error::Internal(format!(
                "{} and {} share a binary expansion across different slopes",
                sum.symbol_at(k - 1),
                sum.symbol_at(k)
            )));
        }
    }
    Ok(sum)
}

/// The minimal ABS `S` of `xi`, with segments numbered from 1.
pub fn minimal_abs(xi: &NewtonPolygon) -> Result<Abs> {
    let ids: Vec<(u32, Segment)> =
        xi.segments().iter().enumerate().map(|(k, &s)| (k as u32 + 1, s)).collect();
    Ok(minimal_abs_with_ids(&ids)?.with_provenance(Some(xi.clone())))
}

/// The admissible ABS of type `nu`: symbols `t_1..t_h` in segment 0, ordered
/// by position, with a 0 at the `k`-th zero sent to position `k` and the
/// `k`-th one sent to position `d + k`.
pub fn abs_from_binary_sequence(nu: &BinarySequence) -> Abs {
    let d = nu.zeros();
    let symbols: Vec<Symbol> = nu
        .bits()
        .iter()
        .enumerate()
        .map(|(k, &b)| Symbol { segment: 0, position: k as u32 + 1, label: b })
        .collect();
    let (mut zeros, mut ones) = (0, 0);
    let pi = nu
        .bits()
        .iter()
        .map(|&b| {
            if b == 0 {
                zeros += 1;
                zeros - 1
            } else {
                ones += 1;
                d + ones - 1
            }
        })
        .collect();
    Abs::from_raw(symbols, (0..nu.len()).collect(), pi, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::{binary_to_jw, x_element, JwContext};
    use proptest::prelude::*;

    pub(crate) fn poly(s: &str) -> NewtonPolygon {
        s.parse().unwrap()
    }

    fn sym(s: &str) -> Symbol {
        s.parse().unwrap()
    }

    const TWO_SEVEN_THREE_FIVE: &str = "1^1_1 1^1_2 0^1_3 0^1_4 0^1_5 1^2_1 1^2_2 0^1_6 0^1_7 1^2_3 0^2_4 0^2_5 0^1_8 0^1_9 0^2_6 0^2_7 0^2_8";

    #[test]
    fn segment_examples() {
        let s = minimal_abs_segment(1, 2).unwrap();
        assert_eq!(s.to_string(), "1^1_1 0^1_2 0^1_3");
        assert_eq!(s.pi(&sym("1^1_1")).unwrap(), sym("0^1_3"));
        assert_eq!(s.pi(&sym("0^1_2")).unwrap(), sym("1^1_1"));
        assert_eq!(s.pi(&sym("0^1_3")).unwrap(), sym("0^1_2"));

        let s = minimal_abs_segment(1, 0).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.pi(&sym("1^1_1")).unwrap(), sym("1^1_1"));

        let s = minimal_abs_segment(2, 7).unwrap();
        assert_eq!(s.to_binary_sequence().to_string(), "110000000");
        for i in 1..=9u32 {
            let t = s.symbol_at(i as usize - 1);
            let target = (i + 9 - 3) % 9 + 1;
            assert_eq!(s.pi(&t).unwrap().position, target);
        }
        assert!(matches!(minimal_abs_segment(2, 4), Err(Error::CoprimalityViolation { .. })));
    }

    #[test]
    fn expansion_examples() {
        let s = minimal_abs_segment(1, 2).unwrap();
        let b = s.binary_expansion(&sym("1^1_1")).unwrap();
        assert_eq!(b.period(), 3);
        // pi^-1(t_1) = t_2, pi^-2(t_1) = t_3, pi^-3(t_1) = t_1
        assert_eq!(b.bits(), &[0, 0, 1]);
        let zero = minimal_abs_segment(0, 1).unwrap();
        assert_eq!(zero.binary_expansion(&sym("0^1_1")).unwrap().as_fraction(), Some((0, 1)));
    }

    #[test]
    fn expansion_equality_is_numeric() {
        let a = BinaryExpansion::from_period(vec![0, 1]);
        let b = BinaryExpansion::from_period(vec![0, 1, 0, 1]);
        assert_eq!(a, b);
        let c = BinaryExpansion::from_period(vec![0, 1, 1]);
        assert!(a < c);
    }

    #[test]
    fn two_seven_three_five_display() {
        let s = minimal_abs(&poly("2,7+3,5")).unwrap();
        assert_eq!(s.to_string(), TWO_SEVEN_THREE_FIVE);
        assert_eq!(
            s.to_binary_sequence().to_string(),
            "11000110010000000"
        );
        // pair count straight from the display
        let bits: Vec<char> = TWO_SEVEN_THREE_FIVE.split(' ').map(|t| t.chars().next().unwrap()).collect();
        let mut count = 0;
        for a in 0..bits.len() {
            for b in a + 1..bits.len() {
                if bits[a] == '0' && bits[b] == '1' {
                    count += 1;
                }
            }
        }
        assert_eq!(s.length(), count);
        assert_eq!(count, 11);
    }

    #[test]
    fn direct_sum_matches_minimal() {
        let a = minimal_abs_segment_with_id(1, Segment::new(2, 7)).unwrap();
        let b = minimal_abs_segment_with_id(2, Segment::new(3, 5)).unwrap();
        let sum = direct_sum(&[a.clone(), b]).unwrap();
        assert_eq!(sum.to_string(), TWO_SEVEN_THREE_FIVE);
        assert_eq!(direct_sum(std::slice::from_ref(&a)).unwrap(), a);
        assert!(direct_sum(&[a.clone(), a]).is_err());
    }

    #[test]
    fn minimal_is_admissible_and_pi_is_xw() {
        for xi in NewtonPolygon::enumerate(9) {
            let s = minimal_abs(&xi).unwrap();
            assert!(s.is_admissible(), "{xi}: {:?}", s.admissibility_defect());
            assert!(s.is_b_monotone());
            let nu = s.to_binary_sequence();
            let ctx = JwContext::of_sequence(&nu);
            let w = binary_to_jw(&nu, ctx).unwrap();
            assert_eq!(s.positional_pi(), &x_element(ctx) * &w, "{xi}");
        }
    }

    #[test]
    fn forced_swap_is_not_admissible() {
        let s = minimal_abs_segment(1, 2).unwrap();
        let swapped = s.reordered(vec![0, 2, 1]);
        assert!(!swapped.is_admissible());
    }

    #[test]
    fn block_form_for_two_separated_segments() {
        // lambda_2 < 1/2 < lambda_1
        for xi in NewtonPolygon::enumerate(12) {
            let segs = xi.segments();
            if segs.len() != 2 || segs[0].n <= segs[0].m || segs[1].n >= segs[1].m {
                continue;
            }
            let (m1, n1, m2, n2) = (segs[0].m, segs[0].n, segs[1].m, segs[1].n);
            let mut expected = String::new();
            for (label, seg, count) in
                [(1, 1, m1), (0, 1, n1 - m1), (1, 2, n2), (0, 1, m1), (1, 2, m2 - n2), (0, 2, n2)]
            {
                for _ in 0..count {
                    expected.push_str(&format!("{label}{seg}"));
                }
            }
            let s = minimal_abs(&xi).unwrap();
            let got: String = s.sequence().iter().map(|t| format!("{}{}", t.label, t.segment)).collect();
            assert_eq!(got, expected, "{xi}");
        }
    }

    #[test]
    fn first_and_extreme_symbols_are_ordered_across_segments() {
        for xi in NewtonPolygon::enumerate(10) {
            let s = minimal_abs(&xi).unwrap();
            let segs = xi.segments();
            for r in 0..segs.len() {
                for q in r + 1..segs.len() {
                    let (a, b) = (segs[r], segs[q]);
                    let (r1, q1) = (r as u32 + 1, q as u32 + 1);
                    let at = |label, seg, i| s.position(&Symbol { segment: seg, position: i, label }).unwrap();
                    if a.m > 0 && b.m > 0 {
                        assert!(at(1, r1, 1) < at(1, q1, 1), "{xi}");
                    }
                    if a.n > 0 && b.n > 0 {
                        assert!(at(0, r1, a.height()) < at(0, q1, b.height()), "{xi}");
                        assert!(at(0, r1, a.m + 1) < at(0, q1, b.m + 1), "{xi}");
                    }
                }
            }
        }
    }

    #[test]
    fn curtailed_sequence_embeds() {
        // For two segments with m_i <= n_i, T(R) sits inside T(S) with the
        // same relative order, identified by (segment, position).
        for xi in NewtonPolygon::enumerate(12) {
            if xi.len() != 2 || !xi.is_curtailable() {
                continue;
            }
            let s = minimal_abs(&xi).unwrap();
            let r = minimal_abs(&xi.curtail().unwrap()).unwrap();
            let positions: Vec<usize> = r
                .sequence()
                .iter()
                .map(|t| s.position(t).expect("symbol of R in S"))
                .collect();
            assert!(positions.windows(2).all(|w| w[0] < w[1]), "{xi}");
            let ones = |a: &Abs| a.sequence().into_iter().filter(|t| t.label == 1).collect::<Vec<_>>();
            assert_eq!(ones(&r), ones(&s));
            for t in r.sequence() {
                let expected = if t.label == 0 {
                    s.pi(&t).unwrap()
                } else {
                    s.pi(&s.pi(&t).unwrap()).unwrap()
                };
                assert_eq!(r.pi(&t).unwrap(), expected, "{xi} at {t}");
            }
        }
    }

    #[test]
    fn binary_round_trip_up_to_eight() {
        for h in 1..=8 {
            for nu in BinarySequence::all(h) {
                let s = abs_from_binary_sequence(&nu);
                assert_eq!(s.to_binary_sequence(), nu);
                assert!(s.is_admissible(), "{nu}");
            }
        }
    }

    #[test]
    fn from_binary_sequence_examples() {
        let s = abs_from_binary_sequence(&"100".parse().unwrap());
        let m = minimal_abs_segment(1, 2).unwrap();
        assert_eq!(s.positional_pi(), m.positional_pi());
        let zeros = abs_from_binary_sequence(&"0000".parse().unwrap());
        assert!(zeros.positional_pi().is_identity());

        let ex = minimal_abs(&poly("2,7+3,5")).unwrap();
        let rebuilt = abs_from_binary_sequence(&ex.to_binary_sequence());
        assert_eq!(rebuilt.positional_pi(), ex.positional_pi());
    }

    #[test]
    fn json_round_trip() {
        let s = minimal_abs(&poly("2,5+3,2")).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.starts_with(r#"{"order":[[1,1],[1,2],"#));
        let back: Abs = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.provenance(), s.provenance());
    }

    #[test]
    fn new_rejects_bad_arrows() {
        let a = sym("1^1_1");
        let b = sym("0^1_2");
        assert!(Abs::new(vec![a, b], &[(a, b), (b, a)]).is_ok());
        assert!(Abs::new(vec![a, b], &[(a, b)]).is_err());
        assert!(Abs::new(vec![a, b], &[(a, b), (b, b)]).is_err());
        assert!(Abs::new(vec![a, a], &[(a, a)]).is_err());
        assert!(matches!(
            Abs::new(vec![a, b], &[(a, sym("0^2_1")), (b, a)]),
            Err(Error::SymbolNotInSequence(_))
        ));
    }

    #[test]
    fn symbol_parsing() {
        assert_eq!(sym("0^1_4"), Symbol::zero(1, 4));
        assert_eq!(sym("1:2:2"), Symbol::one(2, 2));
        assert!("2^1_1".parse::<Symbol>().is_err());
        assert!("0^1".parse::<Symbol>().is_err());
    }

    #[test]
    fn all_with_ones_counts() {
        assert_eq!(BinarySequence::all_with_ones(4, 2).len(), 6);
        assert_eq!(BinarySequence::all_with_ones(3, 0), vec!["000".parse().unwrap()]);
        let all = BinarySequence::all(5);
        for c in 0..=5 {
            let expected: Vec<_> = all.iter().filter(|s| s.ones() == c).cloned().collect();
            assert_eq!(BinarySequence::all_with_ones(5, c), expected);
        }
    }

    proptest! {
        #[test]
        fn expansion_order_matches_fractions(
            a in proptest::collection::vec(0u8..2, 1..12),
            b in proptest::collection::vec(0u8..2, 1..12),
        ) {
            let (x, y) = (BinaryExpansion::from_period(a), BinaryExpansion::from_period(b));
            let (xn, xd) = x.as_fraction().unwrap();
            let (yn, yd) = y.as_fraction().unwrap();
            prop_assert_eq!(x.cmp(&y), (xn * yd).cmp(&(yn * xd)));
        }

        #[test]
        fn length_counts_pairs(bits in proptest::collection::vec(0u8..2, 1..16)) {
            let nu = BinarySequence::from_bits(bits.clone());
            let brute = (0..bits.len())
                .flat_map(|a| (a + 1..bits.len()).map(move |b| (a, b)))
                .filter(|&(a, b)| bits[a] == 0 && bits[b] == 1)
                .count();
            prop_assert_eq!(abs_from_binary_sequence(&nu).length(), brute);
        }
    }
}
