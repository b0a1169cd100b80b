//! The symmetric group `S_h` as the Weyl group of `GL_h`.
//!
//! This module is the independent side of every cross-check: it knows nothing
//! about arrowed binary sequences and decides specializations by brute force
//! over the parabolic subgroup `W_J = S_c x S_d`.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::abs::BinarySequence;
use crate::error::{Error, Result};

/// Default cap on `c! * d!` for the existential search over `W_J`.
pub const DEFAULT_BUDGET: u128 = 1_000_000;

/// A permutation of `{1, ..., h}` in one-line notation.
///
/// Composition follows functions: `(a * b)(i) = a(b(i))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    // 0-based images
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(h: usize) -> Self {
        Permutation { images: (0..h).collect() }
    }

    /// Builds from 1-based images `w(1), ..., w(h)`.
    pub fn from_one_line(images: &[usize]) -> Result<Self> {
        let h = images.len();
        let mut seen = vec![false; h];
        let mut zero_based = Vec::with_capacity(h);
        for &x in images {
            if x == 0 || x > h || seen[x - 1] {
                return Err(Error::Parse(format!("{images:?} is not a permutation of 1..{h}")));
            }
            seen[x - 1] = true;
            zero_based.push(x - 1);
        }
        Ok(Permutation { images: zero_based })
    }

    pub(crate) fn from_zero_based(images: Vec<usize>) -> Self {
        debug_assert!({
            let mut sorted = images.clone();
            sorted.sort_unstable();
            sorted.iter().enumerate().all(|(k, &x)| k == x)
        });
        Permutation { images }
    }

    /// The transposition of the 1-based points `i` and `j`.
    pub fn transposition(h: usize, i: usize, j: usize) -> Self {
        let mut p = Self::identity(h);
        p.images.swap(i - 1, j - 1);
        p
    }

    /// 1-based one-line notation.
    pub fn one_line(&self) -> Vec<usize> {
        self.images.iter().map(|x| x + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// `w(i)` for 1-based `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1] + 1
    }

    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.len(), other.len());
        Permutation { images: other.images.iter().map(|&k| self.images[k]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (k, &x) in self.images.iter().enumerate() {
            inv[x] = k;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, &x)| k == x)
    }

    /// Number of inversions.
    pub fn coxeter_length(&self) -> usize {
        let w = &self.images;
        (0..w.len()).map(|i| (i + 1..w.len()).filter(|&j| w[i] > w[j]).count()).sum()
    }

    /// Bruhat order by the dominance criterion: `v <= w` iff for every prefix
    /// length `i` and threshold `k`, `#{a <= i : v(a) >= k} <= #{a <= i : w(a) >= k}`.
    pub fn bruhat_leq(&self, w: &Permutation) -> bool {
        let h = self.len();
        debug_assert_eq!(h, w.len());
        // counts[k] = #{a in prefix : image >= k}
        let mut mine = vec![0u32; h];
        let mut theirs = vec![0u32; h];
        for i in 0..h {
            mine[..=self.images[i]].iter_mut().for_each(|c| *c += 1);
            theirs[..=w.images[i]].iter_mut().for_each(|c| *c += 1);
            if mine.iter().zip(&theirs).any(|(a, b)| a > b) {
                return false;
            }
        }
        true
    }

    /// Stabilizes `{1, ..., k}` (and hence its complement).
    pub fn stabilizes_prefix(&self, k: usize) -> bool {
        self.images[..k].iter().all(|&x| x < k)
    }
}

impl std::ops::Mul for &Permutation {
    type Output = Permutation;

    fn mul(self, rhs: &Permutation) -> Permutation {
        self.compose(rhs)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{self}")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_line().iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_line().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let images = Vec::<usize>::deserialize(deserializer)?;
        Permutation::from_one_line(&images).map_err(serde::de::Error::custom)
    }
}

/// Heap-free lexicographic successor; returns false after the last permutation.
fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Every permutation of `{0, ..., n-1}` in lexicographic order.
pub(crate) fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut current: Vec<usize> = (0..n).collect();
    let mut out = vec![current.clone()];
    while next_permutation(&mut current) {
        out.push(current.clone());
    }
    out
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).fold(1u128, |acc, k| acc.saturating_mul(k))
}

/// `W = S_h` with the parabolic subgroup `W_J`, `J = {s_1, ..., s_{h-1}} - {s_c}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct JwContext {
    h: usize,
    c: usize,
}

impl JwContext {
    pub fn new(h: usize, c: usize) -> Result<Self> {
        if c > h {
            return Err(Error::DimensionMismatch {
                expected: format!("c <= h = {h}"),
                found: format!("c = {c}"),
            });
        }
        Ok(JwContext { h, c })
    }

    /// The context of a binary sequence: `c` counts the ones.
    pub fn of_sequence(nu: &BinarySequence) -> Self {
        JwContext { h: nu.len(), c: nu.ones() }
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn d(&self) -> usize {
        self.h - self.c
    }

    /// `|W_J| = c! d!`, saturating.
    pub fn parabolic_order(&self) -> u128 {
        factorial(self.c).saturating_mul(factorial(self.d()))
    }

    fn check_len(&self, w: &Permutation) -> Result<()> {
        if w.len() != self.h {
            return Err(Error::DimensionMismatch {
                expected: format!("h = {}", self.h),
                found: format!("permutation of length {}", w.len()),
            });
        }
        Ok(())
    }
}

/// Minimal length representative of `W_J w`: the values `1..c` and the values
/// `c+1..h` each occur at increasing positions.
pub fn is_jw(w: &Permutation, ctx: JwContext) -> bool {
    if w.len() != ctx.h {
        return false;
    }
    let inv = w.inverse();
    let c = ctx.c;
    inv.images[..c].windows(2).all(|p| p[0] < p[1])
        && inv.images[c..].windows(2).all(|p| p[0] < p[1])
}

/// All of `^J W`, lexicographic on one-line notation.
pub fn jw_elements(ctx: JwContext) -> Vec<Permutation> {
    let mut out: Vec<Permutation> = BinarySequence::all_with_ones(ctx.h, ctx.c)
        .iter()
        .map(|nu| binary_to_jw_unchecked(nu, ctx.c))
        .collect();
    out.sort();
    out
}

fn binary_to_jw_unchecked(nu: &BinarySequence, c: usize) -> Permutation {
    let mut ones = 0;
    let mut zeros = 0;
    let images = nu
        .bits()
        .iter()
        .map(|&b| {
            if b == 1 {
                ones += 1;
                ones - 1
            } else {
                zeros += 1;
                c + zeros - 1
            }
        })
        .collect();
    Permutation::from_zero_based(images)
}

/// The unique `w` in `^J W` with `nu(j) = 0` iff `w(j) > c`.
pub fn binary_to_jw(nu: &BinarySequence, ctx: JwContext) -> Result<Permutation> {
    if nu.len() != ctx.h || nu.zeros() != ctx.d() {
        return Err(Error::DimensionMismatch {
            expected: format!("h = {}, d = {}", ctx.h, ctx.d()),
            found: format!("sequence {nu} with {} zeros", nu.zeros()),
        });
    }
    Ok(binary_to_jw_unchecked(nu, ctx.c))
}

/// `nu(j) = 0` iff `w(j) > c`.
pub fn jw_to_binary(w: &Permutation, ctx: JwContext) -> Result<BinarySequence> {
    ctx.check_len(w)?;
    Ok(BinarySequence::from_bits(
        w.one_line().iter().map(|&x| u8::from(x <= ctx.c)).collect(),
    ))
}

/// `x(i) = i + d` for `i <= c`, `x(i) = i - c` otherwise.
pub fn x_element(ctx: JwContext) -> Permutation {
    let (c, d) = (ctx.c, ctx.d());
    Permutation::from_zero_based(
        (0..ctx.h).map(|i| if i < c { i + d } else { i - c }).collect(),
    )
}

/// `theta(u) = x u x^-1`.
pub fn theta(u: &Permutation, ctx: JwContext) -> Permutation {
    let x = x_element(ctx);
    &(&x * u) * &x.inverse()
}

pub fn theta_inverse(u: &Permutation, ctx: JwContext) -> Permutation {
    let x = x_element(ctx);
    &(&x.inverse() * u) * &x
}

/// `W_J = S_c x S_d`, lexicographic on one-line notation.
pub fn parabolic_elements(ctx: JwContext, budget: u128) -> Result<Vec<Permutation>> {
    let size = ctx.parabolic_order();
    if size > budget {
        return Err(Error::ContextTooLarge { size, budget });
    }
    let (c, d) = (ctx.c, ctx.d());
    let lower = all_permutations(c);
    let upper = all_permutations(d);
    let mut out = Vec::with_capacity(size as usize);
    for a in &lower {
        for b in &upper {
            let images = a.iter().copied().chain(b.iter().map(|&k| k + c)).collect();
            out.push(Permutation::from_zero_based(images));
        }
    }
    Ok(out)
}

/// The specialization order on `^J W`, decided by exhaustive search.
///
/// The table of `(u^-1, theta(u))` over `W_J` is built once and shared by
/// every query against the same context.
#[derive(Debug, Clone)]
pub struct SpecializationOracle {
    ctx: JwContext,
    // (u, u^-1, theta(u), theta(u^-1))
    table: Vec<[Permutation; 4]>,
}

impl SpecializationOracle {
    pub fn new(ctx: JwContext, budget: u128) -> Result<Self> {
        let table = parabolic_elements(ctx, budget)?
            .into_iter()
            .map(|u| {
                let u_inv = u.inverse();
                let tu = theta(&u, ctx);
                let tu_inv = theta(&u_inv, ctx);
                [u, u_inv, tu, tu_inv]
            })
            .collect();
        Ok(SpecializationOracle { ctx, table })
    }

    pub fn context(&self) -> JwContext {
        self.ctx
    }

    fn check_jw(&self, w: &Permutation) -> Result<()> {
        self.ctx.check_len(w)?;
        if !is_jw(w, self.ctx) {
            return Err(Error::PreconditionViolated(format!("{w} is not in ^J W")));
        }
        Ok(())
    }

    /// `w' ⊂ w` iff some `u` in `W_J` has `u^-1 w' theta(u) <= w`.
    pub fn specializes(&self, target: &Permutation, w: &Permutation) -> Result<bool> {
        self.check_jw(target)?;
        self.check_jw(w)?;
        Ok(self.specializes_unchecked(target, w))
    }

    fn specializes_unchecked(&self, target: &Permutation, w: &Permutation) -> bool {
        self.table.iter().any(|[_, u_inv, tu, _]| (&(u_inv * target) * tu).bruhat_leq(w))
    }

    /// Generic specializations by filtering every element of length
    /// `l(w) - 1` through [`Self::specializes`].
    pub fn generic_specializations(&self, w: &Permutation) -> Result<Vec<Permutation>> {
        self.check_jw(w)?;
        let len = w.coxeter_length();
        if len == 0 {
            return Ok(Vec::new());
        }
        Ok(jw_elements(self.ctx)
            .into_iter()
            .filter(|cand| cand.coxeter_length() == len - 1)
            .filter(|cand| self.specializes_unchecked(cand, w))
            .collect())
    }

    /// Generic specializations by closing the reflections `v = ws` with
    /// `l(v) = l(w) - 1` under `v -> u v theta(u^-1)`, intersected with `^J W`.
    pub fn generic_specializations_via_reflections(
        &self,
        w: &Permutation,
    ) -> Result<Vec<Permutation>> {
        self.check_jw(w)?;
        let h = self.ctx.h;
        let len = w.coxeter_length();
        let mut out = std::collections::BTreeSet::new();
        for i in 1..=h {
            for j in i + 1..=h {
                let v = w * &Permutation::transposition(h, i, j);
                if v.coxeter_length() + 1 != len {
                    continue;
                }
                for [u, _, _, tu_inv] in &self.table {
                    let cand = &(u * &v) * tu_inv;
                    if cand.coxeter_length() + 1 == len && is_jw(&cand, self.ctx) {
                        out.insert(cand);
                    }
                }
            }
        }
        Ok(out.into_iter().collect())
    }
}

pub fn specializes(
    target: &Permutation,
    w: &Permutation,
    ctx: JwContext,
    budget: u128,
) -> Result<bool> {
    SpecializationOracle::new(ctx, budget)?.specializes(target, w)
}

pub fn generic_specializations_oracle(
    w: &Permutation,
    ctx: JwContext,
    budget: u128,
) -> Result<Vec<Permutation>> {
    SpecializationOracle::new(ctx, budget)?.generic_specializations(w)
}
