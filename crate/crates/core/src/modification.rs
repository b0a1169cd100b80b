//! Small and full modifications of an ABS.
//!
//! A small modification swaps a `0` with a later `1`. The full modification
//! then repairs the order in two passes: construction A pushes the chain
//! `alpha_n = pi^n(0^r_i)` rightwards while the sets `A_n` are nonempty, and
//! construction B pulls `beta_n = pi^n(1^q_j)` leftwards while the sets
//! `B_n` are nonempty. Both passes move single symbols; nothing is re-sorted.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::abs::{Abs, Symbol};
use crate::error::{Error, Result};
use crate::weyl::{binary_to_jw, theta, x_element, JwContext, Permutation};

/// The pair `(0^r_i, 1^q_j)` of a small modification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "PairRepr", try_from = "PairRepr")]
pub struct SmallModPair {
    pub zero: Symbol,
    pub one: Symbol,
}

#[derive(Serialize, Deserialize)]
struct PairRepr {
    zero: [u32; 2],
    one: [u32; 2],
}

impl From<SmallModPair> for PairRepr {
    fn from(p: SmallModPair) -> Self {
        PairRepr {
            zero: [p.zero.segment, p.zero.position],
            one: [p.one.segment, p.one.position],
        }
    }
}

impl TryFrom<PairRepr> for SmallModPair {
    type Error = Error;

    fn try_from(p: PairRepr) -> Result<Self> {
        Ok(SmallModPair::new(p.zero[0], p.zero[1], p.one[0], p.one[1]))
    }
}

impl SmallModPair {
    /// `(0^r_i, 1^q_j)`.
    pub const fn new(r: u32, i: u32, q: u32, j: u32) -> Self {
        SmallModPair { zero: Symbol::zero(r, i), one: Symbol::one(q, j) }
    }

    pub fn r(&self) -> u32 {
        self.zero.segment
    }

    pub fn q(&self) -> u32 {
        self.one.segment
    }

    /// Positions `(i, j)` of the pair in `s`, checked: `0^r_i` before `1^q_j`.
    pub fn positions_in(&self, s: &Abs) -> Result<(usize, usize)> {
        if self.zero.label != 0 || self.one.label != 1 {
            return Err(Error::InvalidPair(format!("{self} must pair a 0 with a 1")));
        }
        let i = s.position(&self.zero).map_err(|e| Error::InvalidPair(e.to_string()))?;
        let j = s.position(&self.one).map_err(|e| Error::InvalidPair(e.to_string()))?;
        if i >= j {
            return Err(Error::InvalidPair(format!("{} does not precede {}", self.zero, self.one)));
        }
        Ok((i, j))
    }

    /// Every pair `0 < 1` of `s`, sorted by `(r, i, q, j)`.
    pub fn all_in(s: &Abs) -> Vec<SmallModPair> {
        let seq = s.sequence();
        let mut out = Vec::new();
        for (a, zero) in seq.iter().enumerate() {
            if zero.label != 0 {
                continue;
            }
            for one in &seq[a + 1..] {
                if one.label == 1 {
                    out.push(SmallModPair { zero: *zero, one: *one });
                }
            }
        }
        out.sort();
        out
    }
}

impl fmt::Display for SmallModPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.zero, self.one)
    }
}

/// Parses `0:r:i,1:q:j` (or `0^r_i,1^q_j`).
impl FromStr for SmallModPair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let cleaned: String = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '(' && *c != ')')
            .collect();
        let (a, b) = cleaned
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("expected 0:r:i,1:q:j, got {s:?}")))?;
        let (zero, one): (Symbol, Symbol) = (a.parse()?, b.parse()?);
        if zero.label != 0 || one.label != 1 {
            return Err(Error::InvalidPair(format!("{s:?} must name a 0 and then a 1")));
        }
        Ok(SmallModPair { zero, one })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Generic,
    NonGenericLengthDrop,
    NonGenericANeverEmpty,
    NonGenericBNeverEmpty,
}

impl Verdict {
    pub fn is_generic(self) -> bool {
        self == Verdict::Generic
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Generic => "Generic",
            Verdict::NonGenericLengthDrop => "NonGenericLengthDrop",
            Verdict::NonGenericANeverEmpty => "NonGenericANeverEmpty",
            Verdict::NonGenericBNeverEmpty => "NonGenericBNeverEmpty",
        })
    }
}

/// `S^(n)` together with the marker (`alpha_n` or `beta_n`) and the set
/// (`A_n` or `B_n`) computed on it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stage {
    pub index: usize,
    pub abs: Abs,
    pub marker: Symbol,
    pub set: Vec<Symbol>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModificationTrace {
    pub source: Abs,
    pub pair: SmallModPair,
    /// The small modification `S^(0)`.
    pub small: Abs,
    pub a_stages: Vec<Stage>,
    pub b_stages: Vec<Stage>,
    pub a: Option<usize>,
    pub b: Option<usize>,
    /// The full modification `S^(a+b)`.
    pub result: Option<Abs>,
    /// The order at which a never-empty run was detected to cycle.
    pub limit: Option<Abs>,
    pub verdict: Option<Verdict>,
}

impl ModificationTrace {
    pub fn is_generic(&self) -> bool {
        self.verdict == Some(Verdict::Generic)
    }

    /// Paper-style listing of every stage.
    pub fn render_ascii(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("S = {}\n", self.source));
        out.push_str(&format!("pair {}\n", self.pair));
        let set = |s: &[Symbol]| {
            let items: Vec<String> = s.iter().map(Symbol::to_string).collect();
            format!("{{{}}}", items.join(", "))
        };
        for st in &self.a_stages {
            out.push_str(&format!(
                "\nS^({}): alpha_{} = {}, A_{} = {}\n{}",
                st.index,
                st.index,
                st.marker,
                st.index,
                set(&st.set),
                st.abs.render_ascii()
            ));
        }
        let a = self.a.unwrap_or(0);
        for st in &self.b_stages {
            out.push_str(&format!(
                "\nS^({}): beta_{} = {}, B_{} = {}\n{}",
                a + st.index,
                st.index,
                st.marker,
                st.index,
                set(&st.set),
                st.abs.render_ascii()
            ));
        }
        let opt = |x: Option<usize>| x.map_or("-".to_string(), |v| v.to_string());
        out.push_str(&format!("\na = {}, b = {}\n", opt(self.a), opt(self.b)));
        if let Some(r) = &self.result {
            out.push_str(&format!(
                "result = {}\nlength {} -> {}\n",
                r,
                self.source.length(),
                r.length()
            ));
        }
        if let Some(v) = self.verdict {
            out.push_str(&format!("verdict {v}\n"));
        }
        out
    }
}

/// Swap the pair's positions; the arrows become `t -> sw(pi(t))`, where `sw`
/// exchanges the two symbols.
pub fn small_modification(s: &Abs, pair: SmallModPair) -> Result<Abs> {
    let (i, j) = pair.positions_in(s)?;
    Ok(swap_and_rewire(s, i, j))
}

fn swap_and_rewire(s: &Abs, i: usize, j: usize) -> Abs {
    let mut order = s.order_ids().to_vec();
    let (zi, oj) = (order[i], order[j]);
    order.swap(i, j);
    let sw = |id: usize| {
        if id == zi {
            oj
        } else if id == oj {
            zi
        } else {
            id
        }
    };
    let pi = s.pi_ids().iter().map(|&t| sw(t)).collect();
    s.rewired(pi).reordered(order)
}

/// Working copy of a sequence during constructions A and B.
struct Work {
    order: Vec<usize>,
    pos: Vec<usize>,
    pi: Vec<usize>,
    label: Vec<u8>,
    segment: Vec<u32>,
}

impl Work {
    fn new(s: &Abs) -> Self {
        let n = s.len();
        let mut pos = vec![0; n];
        for (k, &id) in s.order_ids().iter().enumerate() {
            pos[id] = k;
        }
        Work {
            order: s.order_ids().to_vec(),
            pos,
            pi: s.pi_ids().to_vec(),
            label: (0..n).map(|id| s.symbol(id).label).collect(),
            segment: (0..n).map(|id| s.symbol(id).segment).collect(),
        }
    }

    /// `pi^n(id)`.
    fn iterate(&self, id: usize, n: usize) -> usize {
        (0..n).fold(id, |x, _| self.pi[x])
    }

    /// Removes `id` and reinserts it next to `anchor` (after it when `after`).
    fn move_next_to(&mut self, id: usize, anchor: usize, after: bool) {
        if id == anchor {
            return;
        }
        self.order.remove(self.pos[id]);
        let k = self.order.iter().position(|&x| x == anchor).expect("anchor present");
        self.order.insert(if after { k + 1 } else { k }, id);
        for (k, &x) in self.order.iter().enumerate() {
            self.pos[x] = k;
        }
    }

    /// Ids satisfying `pred`, in order.
    fn select(&self, pred: impl Fn(usize) -> bool) -> Vec<usize> {
        self.order.iter().copied().filter(|&t| pred(t)).collect()
    }

    fn snapshot(&self, base: &Abs) -> Abs {
        base.reordered(self.order.clone())
    }
}

fn stage(base: &Abs, work: &Work, index: usize, marker: usize, set: &[usize]) -> Stage {
    Stage {
        index,
        abs: work.snapshot(base),
        marker: base.symbol(marker),
        set: set.iter().map(|&id| base.symbol(id)).collect(),
    }
}

/// A state of construction A or B: the order, the current marker and set.
type State = (Vec<usize>, usize, Vec<usize>);

/// The loops stop when their set empties; a recurring state proves it never
/// will. The cap is a guard against an undetected cycle.
fn step_cap(h: usize) -> usize {
    h * h + 2 * h + 4
}

/// Construction A on the small modification `s0`.
pub fn construction_a(s0: &Abs, pair: SmallModPair) -> Result<ModificationTrace> {
    let zero = s0.id_of(&pair.zero).map_err(|e| Error::InvalidPair(e.to_string()))?;
    let one = s0.id_of(&pair.one).map_err(|e| Error::InvalidPair(e.to_string()))?;
    if s0.symbol(zero).label != 0 || s0.symbol(one).label != 1 {
        return Err(Error::InvalidPair(format!("{pair} must pair a 0 with a 1")));
    }
    let (i, j) = (s0.position(&pair.one)?, s0.position(&pair.zero)?);
    if i >= j {
        return Err(Error::PreconditionViolated(format!(
            "{s0} is not the small modification by {pair}"
        )));
    }
    // Undo the swap: the small modification is an involution.
    let source = swap_and_rewire(s0, i, j);

    let mut w = Work::new(s0);
    let q = pair.q();
    let alpha = |w: &Work, n: usize| w.iterate(zero, n);
    let mut set = {
        let (a0, a1) = (alpha(&w, 0), alpha(&w, 1));
        w.select(|t| w.label[t] == 0 && w.pos[t] < w.pos[a0] && w.pos[a1] < w.pos[w.pi[t]])
    };
    let mut stages = vec![stage(s0, &w, 0, alpha(&w, 0), &set)];
    let mut seen: HashSet<State> = HashSet::new();
    let mut n = 0;
    let mut trace = ModificationTrace {
        source,
        pair,
        small: s0.clone(),
        a_stages: Vec::new(),
        b_stages: Vec::new(),
        a: None,
        b: None,
        result: None,
        limit: None,
        verdict: None,
    };
    while !set.is_empty() {
        n += 1;
        if n > step_cap(s0.len()) {
            return Err(Error::Internal(format!("construction A for {pair} did not settle")));
        }
        let t_max = *set.iter().max_by_key(|&&t| w.pos[t]).expect("nonempty");
        let an = alpha(&w, n);
        w.move_next_to(an, w.pi[t_max], true);
        let next = alpha(&w, n + 1);
        let label = w.label[an];
        set = w.select(|t| {
            w.segment[t] != q
                && w.label[t] == label
                && w.pos[t] < w.pos[an]
                && w.pos[next] < w.pos[w.pi[t]]
        });
        stages.push(stage(s0, &w, n, an, &set));
        if !seen.insert((w.order.clone(), an, set.clone())) {
            trace.a_stages = stages;
            trace.limit = Some(w.snapshot(s0));
            trace.verdict = Some(Verdict::NonGenericANeverEmpty);
            return Ok(trace);
        }
    }
    trace.a_stages = stages;
    trace.a = Some(n);
    Ok(trace)
}

/// Construction B on `S^(a)`, completing the trace.
pub fn construction_b(mut trace: ModificationTrace) -> Result<ModificationTrace> {
    let Some(a) = trace.a else {
        return Err(Error::PreconditionViolated("construction A has not vanished".into()));
    };
    let sa = trace.a_stages[a].abs.clone();
    let one = sa.id_of(&trace.pair.one)?;
    let mut w = Work::new(&sa);
    let beta = |w: &Work, n: usize| w.iterate(one, n);
    let mut set = {
        let (b0, b1) = (beta(&w, 0), beta(&w, 1));
        w.select(|t| w.label[t] == 1 && w.pos[b0] < w.pos[t] && w.pos[w.pi[t]] < w.pos[b1])
    };
    let mut stages = vec![stage(&sa, &w, 0, beta(&w, 0), &set)];
    let mut seen: HashSet<State> = HashSet::new();
    let mut n = 0;
    while !set.is_empty() {
        n += 1;
        if n > step_cap(sa.len()) {
            return Err(Error::Internal(format!("construction B for {} did not settle", trace.pair)));
        }
        let t_min = *set.iter().min_by_key(|&&t| w.pos[t]).expect("nonempty");
        let bn = beta(&w, n);
        w.move_next_to(bn, w.pi[t_min], false);
        let next = beta(&w, n + 1);
        let label = w.label[bn];
        set = w.select(|t| {
            w.label[t] == label && w.pos[bn] < w.pos[t] && w.pos[w.pi[t]] < w.pos[next]
        });
        stages.push(stage(&sa, &w, n, bn, &set));
        if !seen.insert((w.order.clone(), bn, set.clone())) {
            trace.b_stages = stages;
            trace.limit = Some(w.snapshot(&sa));
            trace.verdict = Some(Verdict::NonGenericBNeverEmpty);
            return Ok(trace);
        }
    }
    let result = w.snapshot(&sa);
    trace.verdict = Some(if result.length() + 1 == trace.source.length() {
        Verdict::Generic
    } else {
        Verdict::NonGenericLengthDrop
    });
    trace.b_stages = stages;
    trace.b = Some(n);
    trace.result = Some(result);
    Ok(trace)
}

/// Small modification followed by constructions A and B.
pub fn full_modification(s: &Abs, pair: SmallModPair) -> Result<ModificationTrace> {
    let s0 = small_modification(s, pair)?;
    let mut trace = construction_a(&s0, pair)?;
    trace.source = s.clone();
    if trace.a.is_none() {
        return Ok(trace);
    }
    construction_b(trace)
}

/// The Weyl group data of a finished trace.
///
/// With `w` the type of the source, `s` the transposition of the pair's
/// positions and `v = ws`, the reordering from `S^(0)` to the result is the
/// position permutation `epsilon`, and the result has type
/// `w' = u v theta(u^-1)` for `u = x^-1 epsilon^-1 x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeylBridge {
    pub context: JwContext,
    pub w: Permutation,
    pub s: Permutation,
    pub v: Permutation,
    /// `epsilon(z)` is the `S^(0)` position of the symbol at result position `z`.
    pub epsilon: Permutation,
    pub u: Permutation,
    pub w_prime: Permutation,
    pub pi_source: Permutation,
    pub pi_result: Permutation,
}

impl WeylBridge {
    /// `Pi(result) = epsilon^-1 Pi(S) s epsilon` on positions.
    pub fn pi_identity_holds(&self) -> bool {
        let e = &self.epsilon;
        let rhs = &(&(&e.inverse() * &self.pi_source) * &self.s) * e;
        rhs == self.pi_result
    }

    /// `epsilon` maps `{1, ..., d}` to itself.
    pub fn epsilon_stabilizes_zeros(&self) -> bool {
        self.epsilon.stabilizes_prefix(self.context.d())
    }
}

pub fn specialization_to_weyl(trace: &ModificationTrace) -> Result<WeylBridge> {
    let Some(result) = &trace.result else {
        return Err(Error::PreconditionViolated(format!(
            "the modification by {} has no result",
            trace.pair
        )));
    };
    let source = &trace.source;
    let nu = source.to_binary_sequence();
    let ctx = JwContext::of_sequence(&nu);
    let h = source.len();
    let w = binary_to_jw(&nu, ctx)?;
    let (i, j) = trace.pair.positions_in(source)?;
    let s = Permutation::transposition(h, i + 1, j + 1);
    let v = &w * &s;
    let epsilon = Permutation::from_one_line(
        &result
            .sequence()
            .iter()
            .map(|t| trace.small.position(t).map(|p| p + 1))
            .collect::<Result<Vec<_>>>()?,
    )?;
    let x = x_element(ctx);
    let u = &(&x.inverse() * &epsilon.inverse()) * &x;
    let w_prime = &(&u * &v) * &theta(&u.inverse(), ctx);
    Ok(WeylBridge {
        context: ctx,
        w,
        s,
        v,
        epsilon,
        u,
        w_prime,
        pi_source: source.positional_pi(),
        pi_result: result.positional_pi(),
    })
}
