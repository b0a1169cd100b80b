//! The boundary set `B(xi)`: types of the generic specializations of the
//! minimal ABS of `xi`, and the three bijections that reduce its computation
//! to two-segment polygons.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::abs::{direct_sum, minimal_abs, minimal_abs_with_ids, Abs, BinarySequence};
use crate::error::{Error, Result};
use crate::modification::{full_modification, ModificationTrace, SmallModPair, Verdict};
use crate::newton::{NewtonPolygon, Segment};
use crate::weyl::{binary_to_jw, is_jw, jw_to_binary, JwContext, Permutation, SpecializationOracle};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Method {
    Combinatorial,
    WeylOracle,
}

/// `B(xi)` keyed by type, each type with the pairs whose full modification
/// produced it (empty for the oracle).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundarySet {
    pub polygon: NewtonPolygon,
    pub elements: BTreeMap<BinarySequence, Vec<SmallModPair>>,
    pub method: Method,
}

impl BoundarySet {
    pub fn types(&self) -> BTreeSet<BinarySequence> {
        self.elements.keys().cloned().collect()
    }

    /// Every provenance pair, sorted by `(r, i, q, j)`.
    pub fn pairs(&self) -> Vec<SmallModPair> {
        let mut out: Vec<SmallModPair> = self.elements.values().flatten().copied().collect();
        out.sort();
        out
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn render_table(&self) -> String {
        let mut out = format!("B({}) [{:?}]: {} types\n", self.polygon, self.method, self.len());
        for (nu, pairs) in &self.elements {
            let list: Vec<String> = pairs.iter().map(SmallModPair::to_string).collect();
            out.push_str(&format!("{nu}  {}\n", list.join(" ")));
        }
        out
    }
}

#[derive(Serialize)]
struct ElementRepr<'a> {
    #[serde(rename = "type")]
    nu: &'a BinarySequence,
    pairs: &'a [SmallModPair],
}

impl Serialize for BoundarySet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            polygon: &'a NewtonPolygon,
            method: Method,
            elements: Vec<ElementRepr<'a>>,
        }
        Repr {
            polygon: &self.polygon,
            method: self.method,
            elements: self
                .elements
                .iter()
                .map(|(nu, pairs)| ElementRepr { nu, pairs })
                .collect(),
        }
        .serialize(serializer)
    }
}

/// Full modifications of `s` by its pairs, in `(r, i, q, j)` order.
/// With `adjacent_only`, only pairs with `q = r + 1` are tried.
pub fn traces(s: &Abs, adjacent_only: bool) -> Result<Vec<ModificationTrace>> {
    SmallModPair::all_in(s)
        .into_par_iter()
        .filter(|p| !adjacent_only || p.q() == p.r() + 1)
        .map(|p| full_modification(s, p))
        .collect()
}

/// The generic full modifications of `s` by adjacent pairs.
pub fn generic_traces(s: &Abs) -> Result<Vec<ModificationTrace>> {
    Ok(traces(s, true)?.into_iter().filter(ModificationTrace::is_generic).collect())
}

/// The verdict of every pair, adjacent or not.
pub fn all_pair_verdicts(xi: &NewtonPolygon) -> Result<Vec<(SmallModPair, Verdict)>> {
    let s = minimal_abs(xi)?;
    traces(&s, false)?
        .into_iter()
        .map(|t| {
            let v = t.verdict.ok_or_else(|| Error::Internal(format!("{} has no verdict", t.pair)))?;
            Ok((t.pair, v))
        })
        .collect()
}

fn collect_types(traces: &[ModificationTrace]) -> BTreeMap<BinarySequence, Vec<SmallModPair>> {
    let mut elements: BTreeMap<BinarySequence, Vec<SmallModPair>> = BTreeMap::new();
    for t in traces {
        let nu = t.result.as_ref().expect("generic traces have results").to_binary_sequence();
        elements.entry(nu).or_default().push(t.pair);
    }
    elements
}

/// `B(xi)` from full modifications by adjacent pairs.
pub fn boundary_set(xi: &NewtonPolygon) -> Result<BoundarySet> {
    let s = minimal_abs(xi)?;
    Ok(BoundarySet {
        polygon: xi.clone(),
        elements: collect_types(&generic_traces(&s)?),
        method: Method::Combinatorial,
    })
}

/// `B(xi)` by brute force in the symmetric group.
pub fn boundary_set_oracle(xi: &NewtonPolygon, budget: u128) -> Result<BoundarySet> {
    let nu = minimal_abs(xi)?.to_binary_sequence();
    let ctx = JwContext::of_sequence(&nu);
    let oracle = SpecializationOracle::new(ctx, budget)?;
    let w = binary_to_jw(&nu, ctx)?;
    let elements = oracle
        .generic_specializations(&w)?
        .iter()
        .map(|w2| Ok((jw_to_binary(w2, ctx)?, Vec::new())))
        .collect::<Result<_>>()?;
    Ok(BoundarySet { polygon: xi.clone(), elements, method: Method::WeylOracle })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Fail,
}

/// One side of a verified map: a polygon and its boundary types.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Side {
    pub polygon: NewtonPolygon,
    pub types: Vec<BinarySequence>,
}

/// `lhs[summand]` type `from` is sent to `to` in `rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mapping {
    pub summand: usize,
    pub from: BinarySequence,
    pub to: BinarySequence,
}

impl Serialize for Mapping {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct From<'a> {
            summand: usize,
            #[serde(rename = "type")]
            nu: &'a BinarySequence,
        }
        (From { summand: self.summand, nu: &self.from }, &self.to).serialize(serializer)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub polygon: NewtonPolygon,
    pub lhs: Vec<Side>,
    pub rhs: Side,
    pub bijection: Vec<Mapping>,
    pub status: Status,
    pub witness: Option<String>,
}

impl VerificationReport {
    pub fn is_ok(&self) -> bool {
        self.status == Status::Ok
    }

    pub fn into_result(self) -> Result<Self> {
        match self.status {
            Status::Ok => Ok(self),
            Status::Fail => Err(Error::VerificationFailure {
                witness: self.witness.unwrap_or_else(|| "no witness recorded".into()),
            }),
        }
    }

    pub fn render_table(&self) -> String {
        let mut out = format!("{}: {:?}\n", self.polygon, self.status);
        for (k, side) in self.lhs.iter().enumerate() {
            out.push_str(&format!("  lhs[{k}] {}: {} types\n", side.polygon, side.types.len()));
        }
        out.push_str(&format!("  rhs {}: {} types\n", self.rhs.polygon, self.rhs.types.len()));
        for m in &self.bijection {
            out.push_str(&format!("  [{}] {} -> {}\n", m.summand, m.from, m.to));
        }
        if let Some(w) = &self.witness {
            out.push_str(&format!("  witness: {w}\n"));
        }
        out
    }

    /// Checks that `bijection` is a well-defined injective map onto `rhs`.
    fn finish(
        polygon: &NewtonPolygon,
        lhs: Vec<Side>,
        rhs: Side,
        bijection: Vec<Mapping>,
        mut witness: Option<String>,
    ) -> Self {
        let mut image: BTreeMap<&BinarySequence, &Mapping> = BTreeMap::new();
        let mut domain: BTreeMap<(usize, &BinarySequence), &BinarySequence> = BTreeMap::new();
        for m in &bijection {
            if witness.is_some() {
                break;
            }
            if let Some(prev) = domain.insert((m.summand, &m.from), &m.to) {
                if *prev != m.to {
                    witness = Some(format!(
                        "[{}] {} has two images {} and {}",
                        m.summand, m.from, prev, m.to
                    ));
                }
                continue;
            }
            if let Some(prev) = image.insert(&m.to, m) {
                witness = Some(format!(
                    "[{}] {} and [{}] {} both map to {}",
                    prev.summand, prev.from, m.summand, m.from, m.to
                ));
            }
        }
        if witness.is_none() {
            let domain_size: usize = lhs.iter().map(|s| s.types.len()).sum();
            if domain.len() != domain_size {
                witness = Some(format!(
                    "{} of {} source types are mapped",
                    domain.len(),
                    domain_size
                ));
            }
        }
        if witness.is_none() {
            let targets: BTreeSet<&BinarySequence> = image.keys().copied().collect();
            let expected: BTreeSet<&BinarySequence> = rhs.types.iter().collect();
            if let Some(extra) = targets.difference(&expected).next() {
                witness = Some(format!("{extra} is not in B({})", rhs.polygon));
            } else if let Some(missed) = expected.difference(&targets).next() {
                witness = Some(format!("{missed} in B({}) is not hit", rhs.polygon));
            }
        }
        VerificationReport {
            polygon: polygon.clone(),
            lhs,
            rhs,
            bijection,
            status: if witness.is_none() { Status::Ok } else { Status::Fail },
            witness,
        }
    }
}

fn side(set: &BoundarySet) -> Side {
    Side { polygon: set.polygon.clone(), types: set.types().into_iter().collect() }
}

/// The map `B(xi_i) -> B(xi)`, `w -> w_(zeta_i) + w`, over adjacent pairs of
/// segments, where `zeta_i` drops segments `i` and `i + 1`.
pub fn verify_direct_sum(xi: &NewtonPolygon) -> Result<VerificationReport> {
    let segs = xi.segments();
    let id_seg = |k: usize| (k as u32 + 1, segs[k]);
    let rhs = side(&boundary_set(xi)?);
    let mut lhs = Vec::new();
    let mut bijection = Vec::new();
    let mut witness = None;
    for i in 0..segs.len().saturating_sub(1) {
        let pair_poly = NewtonPolygon::new(vec![segs[i], segs[i + 1]])?;
        // The two-segment sequence keeps the ids it has inside xi.
        let local = minimal_abs_with_ids(&[id_seg(i), id_seg(i + 1)])?;
        let rest: Vec<(u32, Segment)> =
            (0..segs.len()).filter(|&k| k != i && k != i + 1).map(id_seg).collect();
        let zeta = if rest.is_empty() { None } else { Some(minimal_abs_with_ids(&rest)?) };
        let generic = generic_traces(&local)?;
        let mut types = BTreeSet::new();
        for t in &generic {
            let r = t.result.as_ref().expect("generic");
            let from = r.to_binary_sequence();
            let merged = match &zeta {
                Some(z) => direct_sum(&[r.clone(), z.clone()])?,
                None => r.clone(),
            };
            types.insert(from.clone());
            let to = merged.to_binary_sequence();
            if witness.is_none() && !merged.is_admissible() {
                witness = Some(format!("[{i}] {from} via {} merges to a non-admissible {to}", t.pair));
            }
            bijection.push(Mapping { summand: i, from, to });
        }
        lhs.push(Side { polygon: pair_poly, types: types.into_iter().collect() });
    }
    bijection.dedup();
    Ok(VerificationReport::finish(xi, lhs, rhs, bijection, witness))
}

/// The curtailment map `B(xi) -> B(xi^C)` for two segments with slopes at
/// least one half. A generic specialization `S'` of `S` by some pair maps to
/// the one of `R` by the same pair; the check is that both use the same
/// pairs and that `S'` restricted to the symbols of `R` is `R'`.
pub fn verify_curtailment(xi: &NewtonPolygon) -> Result<VerificationReport> {
    if xi.len() != 2 || !xi.is_curtailable() {
        return Err(Error::PreconditionViolated(format!(
            "{xi} is not two segments with slopes at least 1/2"
        )));
    }
    let curtailed = xi.curtail()?;
    let big = generic_traces(&minimal_abs(xi)?)?;
    let small = generic_traces(&minimal_abs(&curtailed)?)?;
    let lhs = vec![side(&BoundarySet {
        polygon: xi.clone(),
        elements: collect_types(&big),
        method: Method::Combinatorial,
    })];
    let rhs = side(&BoundarySet {
        polygon: curtailed.clone(),
        elements: collect_types(&small),
        method: Method::Combinatorial,
    });
    let by_pair: BTreeMap<SmallModPair, &Abs> =
        small.iter().map(|t| (t.pair, t.result.as_ref().expect("generic"))).collect();
    let mut witness = None;
    let mut bijection = Vec::new();
    if big.len() != small.len() {
        witness = Some(format!("{} generic pairs against {}", big.len(), small.len()));
    }
    for t in &big {
        let s_prime = t.result.as_ref().expect("generic");
        let Some(r_prime) = by_pair.get(&t.pair) else {
            witness.get_or_insert_with(|| format!("{} is generic only for {xi}", t.pair));
            continue;
        };
        let restricted: Vec<_> = s_prime
            .sequence()
            .into_iter()
            .filter(|s| r_prime.position(s).is_ok())
            .collect();
        if witness.is_none() && restricted != r_prime.sequence() {
            witness = Some(format!("{}: {s_prime} does not restrict to {r_prime}", t.pair));
        }
        bijection.push(Mapping {
            summand: 0,
            from: s_prime.to_binary_sequence(),
            to: r_prime.to_binary_sequence(),
        });
    }
    bijection.sort_by(|a, b| a.from.cmp(&b.from).then(a.to.cmp(&b.to)));
    bijection.dedup();
    Ok(VerificationReport::finish(xi, lhs, rhs, bijection, witness))
}

/// `w -> (i -> l - w(l - i))` with `l = h + 1`, from `^J W` to `^J' W` with
/// `c' = h - c`.
pub fn dual_type(w: &Permutation) -> Permutation {
    let l = w.len() + 1;
    let images: Vec<usize> = (1..l).map(|i| l - w.apply(l - i)).collect();
    Permutation::from_one_line(&images).expect("reversal and complement of a permutation")
}

/// The duality map `B(xi) -> B(xi^D)`.
pub fn verify_duality(xi: &NewtonPolygon) -> Result<VerificationReport> {
    let dual = xi.dual();
    let lhs_set = boundary_set(xi)?;
    let rhs = side(&boundary_set(&dual)?);
    let mut witness = None;
    let mut bijection = Vec::new();
    for nu in lhs_set.types() {
        let ctx = JwContext::of_sequence(&nu);
        let dual_ctx = JwContext::new(ctx.h(), ctx.h() - ctx.c())?;
        let w2 = dual_type(&binary_to_jw(&nu, ctx)?);
        if !is_jw(&w2, dual_ctx) {
            witness.get_or_insert_with(|| format!("the dual of {nu} leaves ^J W"));
            continue;
        }
        bijection.push(Mapping { summand: 0, from: nu, to: jw_to_binary(&w2, dual_ctx)? });
    }
    Ok(VerificationReport::finish(xi, vec![side(&lhs_set)], rhs, bijection, witness))
}

/// One polygon of a sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepEntry {
    pub polygon: NewtonPolygon,
    pub combinatorial: usize,
    pub oracle: usize,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepCensus {
    pub max_height: u32,
    pub polygons: usize,
    pub agreements: usize,
    pub entries: Vec<SweepEntry>,
}

impl SweepCensus {
    pub fn all_agree(&self) -> bool {
        self.agreements == self.polygons
    }

    pub fn disagreements(&self) -> impl Iterator<Item = &SweepEntry> {
        self.entries.iter().filter(|e| !e.agree)
    }
}

impl fmt::Display for SweepCensus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<28} {:>6} {:>6}  agree", "polygon", "comb", "oracle")?;
        for e in &self.entries {
            writeln!(
                f,
                "{:<28} {:>6} {:>6}  {}",
                e.polygon.to_string(),
                e.combinatorial,
                e.oracle,
                if e.agree { "yes" } else { "NO" }
            )?;
        }
        write!(
            f,
            "height <= {}: {}/{} polygons agree",
            self.max_height, self.agreements, self.polygons
        )
    }
}

/// Compares [`boundary_set`] with [`boundary_set_oracle`] on every polygon of
/// height at most `max_height`, in enumeration order.
pub fn oracle_sweep(max_height: u32, budget: u128) -> Result<SweepCensus> {
    let polygons = NewtonPolygon::enumerate(max_height);
    let entries = polygons
        .par_iter()
        .map(|xi| {
            let comb = boundary_set(xi)?;
            let orc = boundary_set_oracle(xi, budget)?;
            Ok(SweepEntry {
                polygon: xi.clone(),
                combinatorial: comb.len(),
                oracle: orc.len(),
                agree: comb.types() == orc.types(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let agreements = entries.iter().filter(|e| e.agree).count();
    Ok(SweepCensus { max_height, polygons: entries.len(), agreements, entries })
}
