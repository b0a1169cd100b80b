//! Newton polygons as ordered lists of coprime segments.
//!
//! A segment `(m, n)` has slope `n / (m + n)`; a polygon lists its segments
//! with non-increasing slope. Besides validation this module provides the
//! two reductions used to move between polygons, the dual (reverse and swap)
//! and the curtailment (`n -> n - m`), and the Euclidean reduction that
//! composes them until the first slope exceeds one half and the last slope
//! falls below it.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// One coprime segment `(m, n)`: `m` is the dimension of the Serre dual,
/// `n` the dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "[u32; 2]", from = "[u32; 2]")]
pub struct Segment {
    pub m: u32,
    pub n: u32,
}

impl From<Segment> for [u32; 2] {
    fn from(s: Segment) -> Self {
        [s.m, s.n]
    }
}

impl From<[u32; 2]> for Segment {
    fn from([m, n]: [u32; 2]) -> Self {
        Segment { m, n }
    }
}

impl Segment {
    pub const fn new(m: u32, n: u32) -> Self {
        Segment { m, n }
    }

    pub fn height(self) -> u32 {
        self.m + self.n
    }

    pub fn is_coprime(self) -> bool {
        gcd(self.m, self.n) == 1
    }

    /// Exact comparison of slopes `n / (m + n)`.
    pub fn cmp_slope(self, other: Segment) -> Ordering {
        let lhs = u64::from(self.n) * u64::from(other.height());
        let rhs = u64::from(other.n) * u64::from(self.height());
        lhs.cmp(&rhs)
    }

    /// Compares the slope with one half.
    pub fn cmp_half(self) -> Ordering {
        self.n.cmp(&self.m)
    }

    /// The slope as a float, for display only.
    pub fn slope(self) -> f64 {
        f64::from(self.n) / f64::from(self.height())
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.m, self.n)
    }
}

/// A single step of the Euclidean reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Reduction {
    /// Curtailment `(m, n) -> (m, n - m)`.
    C,
    /// Duality: reverse the segments and swap `m` and `n`.
    D,
}

impl fmt::Display for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reduction::C => f.write_str("C"),
            Reduction::D => f.write_str("D"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "PolygonRepr", into = "PolygonRepr")]
pub struct NewtonPolygon {
    segments: Vec<Segment>,
}

#[derive(Serialize, Deserialize)]
struct PolygonRepr {
    segments: Vec<Segment>,
}

impl TryFrom<PolygonRepr> for NewtonPolygon {
    type Error = Error;

    fn try_from(repr: PolygonRepr) -> Result<Self> {
        NewtonPolygon::new(repr.segments)
    }
}

impl From<NewtonPolygon> for PolygonRepr {
    fn from(p: NewtonPolygon) -> Self {
        PolygonRepr { segments: p.segments }
    }
}

impl NewtonPolygon {
    /// Validates coprimality and slope order.
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::EmptyPolygon);
        }
        for (index, s) in segments.iter().enumerate() {
            if !s.is_coprime() {
                return Err(Error::CoprimalityViolation { index, m: s.m, n: s.n });
            }
        }
        for (index, pair) in segments.windows(2).enumerate() {
            if pair[0].cmp_slope(pair[1]) == Ordering::Less {
                return Err(Error::SlopeOrderViolation { index: index + 1 });
            }
        }
        Ok(NewtonPolygon { segments })
    }

    pub fn from_pairs(pairs: &[(u32, u32)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(m, n)| Segment::new(m, n)).collect())
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Number of segments.
    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// `h = Σ (m_i + n_i)`.
    pub fn height(&self) -> u32 {
        self.segments.iter().map(|s| s.height()).sum()
    }

    /// `d = Σ n_i`, the number of `0`-labelled symbols.
    pub fn dimension(&self) -> u32 {
        self.segments.iter().map(|s| s.n).sum()
    }

    /// `c = Σ m_i = h - d`, the number of `1`-labelled symbols.
    pub fn codimension(&self) -> u32 {
        self.segments.iter().map(|s| s.m).sum()
    }

    pub fn first(&self) -> Segment {
        self.segments[0]
    }

    pub fn last(&self) -> Segment {
        self.segments[self.segments.len() - 1]
    }

    pub fn dual(&self) -> NewtonPolygon {
        let segments = self
            .segments
            .iter()
            .rev()
            .map(|s| Segment::new(s.n, s.m))
            .collect();
        NewtonPolygon { segments }
    }

    pub fn is_curtailable(&self) -> bool {
        self.segments.iter().all(|s| s.m <= s.n)
    }

    pub fn curtail(&self) -> Result<NewtonPolygon> {
        let mut segments = Vec::with_capacity(self.segments.len());
        for (index, s) in self.segments.iter().enumerate() {
            if s.m > s.n {
                return Err(Error::CurtailUndefined { index, m: s.m, n: s.n });
            }
            segments.push(Segment::new(s.m, s.n - s.m));
        }
        // gcd(m, n - m) = gcd(m, n) and the order of n/m - 1 follows that of n/m.
        Ok(NewtonPolygon { segments })
    }

    /// Membership in the separated class: last slope `< 1/2 <` first slope.
    pub fn is_separated(&self) -> bool {
        self.last().cmp_half() == Ordering::Less && self.first().cmp_half() == Ordering::Greater
    }

    pub fn all_slopes_equal(&self) -> bool {
        let first = self.first();
        self.segments.iter().all(|s| s.cmp_slope(first) == Ordering::Equal)
    }

    pub fn apply(&self, op: Reduction) -> Result<NewtonPolygon> {
        match op {
            Reduction::C => self.curtail(),
            Reduction::D => Ok(self.dual()),
        }
    }

    /// Applies a word of reductions left to right.
    pub fn replay(&self, word: &[Reduction]) -> Result<NewtonPolygon> {
        word.iter().try_fold(self.clone(), |p, &op| p.apply(op))
    }

    /// The Euclidean reduction into the separated class, with the word of
    /// reductions that produced it.
    ///
    /// Only the outer slopes drive the choice of step, so on polygons with
    /// more than two segments this applies the word of the outer pair to
    /// every segment. A run of consecutive `C` steps strips the common
    /// quotient of `n / m`; a `D` step then swaps quotient and remainder.
    pub fn phi(&self) -> Result<Phi> {
        if self.all_slopes_equal() {
            return Err(Error::PhiUndefined);
        }
        let mut current = self.clone();
        let mut word = Vec::new();
        while !current.is_separated() {
            let op = if current.last().cmp_half() != Ordering::Less {
                Reduction::C
            } else {
                Reduction::D
            };
            let next = current.apply(op)?;
            // Each step must stay a valid polygon.
            current = NewtonPolygon::new(next.segments).map_err(|e| {
                Error::Internal(format!("reduction step {op} left the valid polygons: {e}"))
            })?;
            word.push(op);
        }
        Ok(Phi { polygon: current, word })
    }

    /// Every valid polygon with `1 <= h <= max_height`, ordered by height and
    /// then by the segment list.
    pub fn enumerate(max_height: u32) -> Vec<NewtonPolygon> {
        let mut pool: Vec<Segment> = (0..=max_height)
            .flat_map(|m| (0..=max_height - m).map(move |n| Segment::new(m, n)))
            .filter(|s| s.height() >= 1 && s.is_coprime())
            .collect();
        // Coprime segments have pairwise distinct slopes.
        pool.sort_by(|a, b| b.cmp_slope(*a));

        fn extend(
            pool: &[Segment],
            start: usize,
            budget: u32,
            current: &mut Vec<Segment>,
            out: &mut Vec<NewtonPolygon>,
        ) {
            for (k, &s) in pool.iter().enumerate().skip(start) {
                if s.height() > budget {
                    continue;
                }
                current.push(s);
                out.push(NewtonPolygon { segments: current.clone() });
                extend(pool, k, budget - s.height(), current, out);
                current.pop();
            }
        }

        let mut out = Vec::new();
        extend(&pool, 0, max_height, &mut Vec::new(), &mut out);
        out.sort_by(|a, b| a.height().cmp(&b.height()).then_with(|| a.segments.cmp(&b.segments)));
        out
    }
}

/// Result of [`NewtonPolygon::phi`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Phi {
    pub polygon: NewtonPolygon,
    pub word: Vec<Reduction>,
}

impl fmt::Display for Phi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word: Vec<String> = self.word.iter().map(|op| op.to_string()).collect();
        write!(f, "{} via [{}]", self.polygon, word.join(","))
    }
}

impl fmt::Display for NewtonPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, s) in self.segments.iter().enumerate() {
            if k > 0 {
                f.write_str("+")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Parses the compact form `2,7+3,5`. Whitespace is ignored.
impl FromStr for NewtonPolygon {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::EmptyPolygon);
        }
        let mut segments = Vec::new();
        for part in compact.split('+') {
            let part = part.trim_start_matches('(').trim_end_matches(')');
            let (m, n) = part
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("segment {part:?} is not of the form m,n")))?;
            let m = m.parse().map_err(|_| Error::Parse(format!("bad integer {m:?}")))?;
            let n = n.parse().map_err(|_| Error::Parse(format!("bad integer {n:?}")))?;
            segments.push(Segment::new(m, n));
        }
        NewtonPolygon::new(segments)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(pairs: &[(u32, u32)]) -> NewtonPolygon {
        NewtonPolygon::from_pairs(pairs).unwrap()
    }

    #[test]
    fn validates_examples() {
        let p = poly(&[(2, 7), (3, 5)]);
        assert_eq!(p.segments()[0].cmp_slope(p.segments()[1]), Ordering::Greater);
        assert_eq!(p.height(), 17);
        assert_eq!(p.dimension(), 12);
        assert_eq!(p.codimension(), 5);
        assert!(NewtonPolygon::from_pairs(&[(1, 0)]).is_ok());
        assert_eq!(
            NewtonPolygon::from_pairs(&[(2, 4)]),
            Err(Error::CoprimalityViolation { index: 0, m: 2, n: 4 })
        );
        assert_eq!(
            NewtonPolygon::from_pairs(&[(3, 5), (2, 7)]),
            Err(Error::SlopeOrderViolation { index: 1 })
        );
        assert_eq!(NewtonPolygon::new(vec![]), Err(Error::EmptyPolygon));
        assert!(matches!(
            NewtonPolygon::from_pairs(&[(0, 0)]),
            Err(Error::CoprimalityViolation { .. })
        ));
    }

    #[test]
    fn equal_slopes_and_half_are_allowed() {
        assert!(NewtonPolygon::from_pairs(&[(1, 2), (1, 2)]).is_ok());
        assert!(NewtonPolygon::from_pairs(&[(1, 1)]).is_ok());
        assert!(!poly(&[(1, 2), (1, 1)]).is_separated());
    }

    #[test]
    fn dual_examples() {
        assert_eq!(poly(&[(2, 7), (3, 5)]).dual(), poly(&[(5, 3), (7, 2)]));
        assert_eq!(poly(&[(1, 0)]).dual(), poly(&[(0, 1)]));
    }

    #[test]
    fn curtail_examples() {
        assert_eq!(poly(&[(2, 7), (3, 5)]).curtail().unwrap(), poly(&[(2, 5), (3, 2)]));
        assert_eq!(poly(&[(1, 1)]).curtail().unwrap(), poly(&[(1, 0)]));
        assert_eq!(
            poly(&[(5, 3), (7, 2)]).curtail(),
            Err(Error::CurtailUndefined { index: 0, m: 5, n: 3 })
        );
    }

    #[test]
    fn phi_examples() {
        let phi = poly(&[(2, 7), (3, 5)]).phi().unwrap();
        assert_eq!(phi.polygon, poly(&[(2, 5), (3, 2)]));
        assert_eq!(phi.word, vec![Reduction::C]);
        assert_eq!(phi.to_string(), "(2,5)+(3,2) via [C]");

        let sep = poly(&[(2, 5), (3, 2)]);
        let phi = sep.phi().unwrap();
        assert_eq!(phi.polygon, sep);
        assert!(phi.word.is_empty());

        let phi = poly(&[(1, 3), (1, 2)]).phi().unwrap();
        assert_eq!(phi.polygon, poly(&[(0, 1), (1, 0)]));
        use Reduction::*;
        assert_eq!(phi.word, vec![C, C, D, C]);
    }

    #[test]
    fn phi_boundary_case_lands_strictly_separated() {
        // One curtailment reaches (1,1)+(1,0), whose first slope is exactly 1/2.
        let phi = poly(&[(1, 2), (1, 1)]).phi().unwrap();
        assert_eq!(phi.polygon, poly(&[(0, 1), (1, 0)]));
        assert!(phi.polygon.is_separated());
    }

    #[test]
    fn phi_undefined_for_a_single_slope() {
        assert_eq!(poly(&[(1, 2)]).phi(), Err(Error::PhiUndefined));
        assert_eq!(poly(&[(1, 1), (1, 1)]).phi(), Err(Error::PhiUndefined));
    }

    #[test]
    fn phi_on_three_segments_follows_outer_pair() {
        let xi = poly(&[(2, 7), (1, 2), (3, 5)]);
        let outer = poly(&[(2, 7), (3, 5)]);
        let phi = xi.phi().unwrap();
        assert_eq!(phi.word, outer.phi().unwrap().word);
        assert_eq!(phi.polygon, poly(&[(2, 5), (1, 1), (3, 2)]));
    }

    #[test]
    fn parse_compact_form() {
        let p: NewtonPolygon = " 2,7 + 3,5 ".parse().unwrap();
        assert_eq!(p, poly(&[(2, 7), (3, 5)]));
        assert_eq!("(2,7)+(3,5)".parse::<NewtonPolygon>().unwrap(), p);
        assert!(matches!("2;7".parse::<NewtonPolygon>(), Err(Error::Parse(_))));
        assert!(matches!("".parse::<NewtonPolygon>(), Err(Error::EmptyPolygon)));
    }

    #[test]
    fn json_shape() {
        let p = poly(&[(2, 7), (3, 5)]);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"{"segments":[[2,7],[3,5]]}"#);
        assert_eq!(serde_json::from_str::<NewtonPolygon>(&json).unwrap(), p);
        assert!(serde_json::from_str::<NewtonPolygon>(r#"{"segments":[[2,4]]}"#).is_err());
    }

    #[test]
    fn enumeration_is_complete_for_small_heights() {
        // Brute force: all sequences of coprime segments with non-increasing slope.
        fn brute(h: u32) -> usize {
            let segs: Vec<Segment> = (0..=h)
                .flat_map(|m| (0..=h).map(move |n| Segment::new(m, n)))
                .filter(|s| s.height() >= 1 && s.height() <= h && s.is_coprime())
                .collect();
            let mut count = 0;
            let mut stack: Vec<(Vec<Segment>, u32)> = vec![(vec![], 0)];
            while let Some((cur, used)) = stack.pop() {
                for &s in &segs {
                    if used + s.height() > h {
                        continue;
                    }
                    if let Some(&last) = cur.last() {
                        if last.cmp_slope(s) == Ordering::Less {
                            continue;
                        }
                    }
                    let mut next = cur.clone();
                    next.push(s);
                    count += 1;
                    stack.push((next, used + s.height()));
                }
            }
            count
        }
        for h in 1..=6 {
            let all = NewtonPolygon::enumerate(h);
            assert_eq!(all.len(), brute(h), "h = {h}");
            let mut dedup = all.clone();
            dedup.dedup();
            assert_eq!(dedup.len(), all.len());
        }
    }

    #[test]
    fn dual_and_curtail_preserve_validity_exhaustively() {
        for p in NewtonPolygon::enumerate(12) {
            let d = p.dual();
            assert!(NewtonPolygon::new(d.segments().to_vec()).is_ok());
            assert_eq!(d.dual(), p);
            if p.is_curtailable() {
                let c = p.curtail().unwrap();
                assert!(NewtonPolygon::new(c.segments().to_vec()).is_ok());
            }
        }
    }

    fn arb_polygon() -> impl Strategy<Value = NewtonPolygon> {
        prop::collection::vec((0u32..12, 0u32..12), 1..5).prop_filter_map("coprime", |pairs| {
            let mut segs: Vec<Segment> = pairs
                .into_iter()
                .map(|(m, n)| Segment::new(m, n))
                .filter(|s| s.is_coprime())
                .collect();
            segs.sort_by(|a, b| b.cmp_slope(*a));
            NewtonPolygon::new(segs).ok()
        })
    }

    proptest! {
        #[test]
        fn dual_is_an_involution(p in arb_polygon()) {
            prop_assert_eq!(p.dual().dual(), p);
        }

        #[test]
        fn curtail_drops_height_by_sum_of_m(p in arb_polygon()) {
            prop_assume!(p.is_curtailable());
            let c = p.curtail().unwrap();
            prop_assert_eq!(c.height(), p.height() - p.codimension());
        }

        #[test]
        fn phi_lands_in_separated_class_and_replays(p in arb_polygon()) {
            prop_assume!(!p.all_slopes_equal());
            let phi = p.phi().unwrap();
            prop_assert!(phi.polygon.is_separated());
            prop_assert_eq!(p.replay(&phi.word).unwrap(), phi.polygon);
        }
    }
}
