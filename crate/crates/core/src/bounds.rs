//! Bounds on the least number of degree-2 Reeb vertices over simple Morse
//! functions, computed from manifold invariant profiles.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::handles::{self, HandleSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ring {
    Z,
    Q,
    Fp(u64),
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Z => write!(f, "Z"),
            Ring::Q => write!(f, "Q"),
            Ring::Fp(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for Ring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "Z" => Ok(Ring::Z),
            "Q" => Ok(Ring::Q),
            t => t
                .strip_prefix('F')
                .and_then(|p| p.parse().ok())
                .filter(|&p| is_prime(p))
                .map(Ring::Fp)
                .ok_or_else(|| Error::InvalidParameter(format!("unknown coefficient ring `{t}`"))),
        }
    }
}

impl Serialize for Ring {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ring {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Which homology rings the homology bound may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingSelector {
    Z,
    Q,
    AnyFp,
    Fp(u64),
}

impl RingSelector {
    pub fn matches(&self, r: &Ring) -> bool {
        match (self, r) {
            (RingSelector::Z, Ring::Z) | (RingSelector::Q, Ring::Q) | (RingSelector::AnyFp, Ring::Fp(_)) => true,
            (RingSelector::Fp(p), Ring::Fp(q)) => p == q,
            _ => false,
        }
    }
}

impl FromStr for RingSelector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "Fp" {
            return Ok(RingSelector::AnyFp);
        }
        Ok(match s.parse::<Ring>()? {
            Ring::Z => RingSelector::Z,
            Ring::Q => RingSelector::Q,
            Ring::Fp(p) => RingSelector::Fp(p),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyRanks {
    pub ring: Ring,
    /// Ranks of `H_i` for `i = 1..dim-1`.
    pub ranks: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OmegaProvenance {
    TorsionFreeRule,
    Literature,
    PresentationComputed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaLower {
    pub value: u64,
    pub provenance: OmegaProvenance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pi1Kind {
    Trivial,
    Free,
    /// Torsion-free, non-trivial and not free.
    TorsionFree,
    HasTorsion,
}

impl Pi1Kind {
    pub fn free_product(a: Pi1Kind, b: Pi1Kind) -> Pi1Kind {
        use Pi1Kind::*;
        match (a, b) {
            (Trivial, x) | (x, Trivial) => x,
            (HasTorsion, _) | (_, HasTorsion) => HasTorsion,
            (TorsionFree, _) | (_, TorsionFree) => TorsionFree,
            (Free, Free) => Free,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Summand {
    S2xS1,
    Lens { p: u64 },
    Irreducible { name: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Delta2Fact {
    #[serde(default)]
    pub lower: Option<i64>,
    #[serde(default)]
    pub upper: Option<i64>,
    pub source: String,
}

/// A handle-sequence builder whose Reeb graph realises an upper bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "builder", rename_all = "kebab-case")]
pub enum WitnessRecipe {
    Ordered { genus: u32 },
    S2xS1Sum { count: u32 },
    CircleBundle { g: u32, e: i64 },
    Canonical { k1: u32, r: u32 },
    ConnectedSum { parts: Vec<WitnessRecipe> },
}

impl WitnessRecipe {
    pub fn sequence(&self) -> Result<HandleSequence> {
        match self {
            WitnessRecipe::Ordered { genus } => Ok(handles::ordered(*genus)),
            WitnessRecipe::S2xS1Sum { count } => {
                let mut s = handles::ordered(0);
                for i in 0..*count {
                    s = if i == 0 {
                        handles::s2xs1()
                    } else {
                        handles::connected_sum(&s, &handles::s2xs1())?
                    };
                }
                Ok(s)
            }
            WitnessRecipe::CircleBundle { g, e } => handles::circle_bundle_seq(*g, *e),
            WitnessRecipe::Canonical { k1, r } => handles::canonical_sequence(*k1, *r),
            WitnessRecipe::ConnectedSum { parts } => {
                let mut it = parts.iter();
                let mut s = it
                    .next()
                    .ok_or_else(|| Error::InvalidParameter("empty connected sum".into()))?
                    .sequence()?;
                for p in it {
                    s = handles::connected_sum(&s, &p.sequence()?)?;
                }
                Ok(s)
            }
        }
    }

    pub fn delta2(&self) -> Result<usize> {
        Ok(self.sequence()?.run()?.delta2())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifoldProfile {
    pub name: String,
    pub dim: u32,
    pub orientable: bool,
    pub euler_char: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pi1_rank: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pi1_corank: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub homology_ranks: Vec<HomologyRanks>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ls_category: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heegaard_genus: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_lower: Option<OmegaLower>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pi1_kind: Option<Pi1Kind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime_summands: Option<Vec<Summand>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessRecipe>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub delta2_facts: Vec<Delta2Fact>,
    /// Source tag per field name.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub provenance: BTreeMap<String, String>,
}

const REQUIRED_FIELDS: [&str; 4] = ["name", "dim", "orientable", "euler_char"];

impl ManifoldProfile {
    pub fn new(name: impl Into<String>, dim: u32, orientable: bool, euler_char: i64) -> Self {
        ManifoldProfile {
            name: name.into(),
            dim,
            orientable,
            euler_char,
            pi1_rank: None,
            pi1_corank: None,
            homology_ranks: Vec::new(),
            ls_category: None,
            heegaard_genus: None,
            omega_lower: None,
            pi1_kind: None,
            prime_summands: None,
            witness: None,
            delta2_facts: Vec::new(),
            provenance: BTreeMap::new(),
        }
    }

    pub fn from_json(src: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(src)?;
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Json("profile must be a JSON object".into()))?;
        let missing: Vec<String> = REQUIRED_FIELDS
            .iter()
            .filter(|f| !obj.contains_key(**f))
            .map(|f| f.to_string())
            .collect();
        if !missing.is_empty() {
            return Err(Error::MissingFields(missing));
        }
        let p: ManifoldProfile = serde_json::from_value(v)?;
        p.validate()?;
        Ok(p)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("profile serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(Error::InvalidParameter("dimension must be >= 2".into()));
        }
        if let (Some(r), Some(c)) = (self.pi1_rank, self.pi1_corank) {
            if c > r {
                return Err(Error::InvalidParameter(format!("corank {c} exceeds rank {r}")));
            }
        }
        if self.dim == 3 && self.orientable && self.euler_char != 0 {
            return Err(Error::InvalidParameter("closed orientable 3-manifolds have χ = 0".into()));
        }
        if let (Some(g), Some(r)) = (self.heegaard_genus, self.pi1_rank) {
            if g < r {
                return Err(Error::InvalidParameter(format!("Heegaard genus {g} below rank {r}")));
            }
        }
        for h in &self.homology_ranks {
            if h.ranks.len() != self.dim as usize - 1 {
                return Err(Error::InvalidParameter(format!(
                    "{} homology needs {} ranks",
                    h.ring,
                    self.dim - 1
                )));
            }
        }
        Ok(())
    }

    fn tag(mut self, field: &str, source: &str) -> Self {
        self.provenance.insert(field.into(), source.into());
        self
    }

    fn closed_orientable_3(&self) -> bool {
        self.dim == 3 && self.orientable
    }

    fn summands_known(&self) -> Option<&[Summand]> {
        self.prime_summands.as_deref()
    }
}

fn need<T>(field: &str, v: Option<T>) -> Result<T> {
    v.ok_or_else(|| Error::MissingFields(vec![field.to_string()]))
}

/// `max(0, 2(rank - corank))`, for dimension at least 3.
pub fn bound_rank_corank(p: &ManifoldProfile) -> Result<i64> {
    if p.dim < 3 {
        return Err(Error::Precondition("rank bound needs dimension >= 3".into()));
    }
    let missing: Vec<String> = [("pi1_rank", p.pi1_rank), ("pi1_corank", p.pi1_corank)]
        .iter()
        .filter(|(_, v)| v.is_none())
        .map(|(f, _)| f.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingFields(missing));
    }
    let (r, c) = (p.pi1_rank.unwrap() as i64, p.pi1_corank.unwrap() as i64);
    Ok((2 * (r - c)).max(0))
}

/// `max(0, Σ rank H_i - 2·corank)` over the given ring.
pub fn bound_homology(p: &ManifoldProfile, ring: Ring) -> Result<i64> {
    let h = p
        .homology_ranks
        .iter()
        .find(|h| h.ring == ring)
        .ok_or_else(|| Error::MissingFields(vec![format!("homology_ranks[{ring}]")]))?;
    let c = need("pi1_corank", p.pi1_corank)? as i64;
    let total: i64 = h.ranks.iter().map(|&x| x as i64).sum();
    Ok((total - 2 * c).max(0))
}

/// `max(0, cat - 2·corank - 2)`.
pub fn bound_category(p: &ManifoldProfile) -> Result<i64> {
    let cat = need("ls_category", p.ls_category)? as i64;
    let c = need("pi1_corank", p.pi1_corank)? as i64;
    Ok((cat - 2 * c - 2).max(0))
}

/// Lower `max(0, 2(g - corank))` and upper `2g` from a Heegaard splitting.
pub fn bound_heegaard(p: &ManifoldProfile) -> Result<(i64, i64)> {
    if !p.closed_orientable_3() {
        return Err(Error::Precondition("Heegaard bound needs a closed orientable 3-manifold".into()));
    }
    let g = need("heegaard_genus", p.heegaard_genus)? as i64;
    let c = need("pi1_corank", p.pi1_corank)? as i64;
    Ok(((2 * (g - c)).max(0), 2 * g))
}

/// `2·Ω`, with Ω at least 2 for torsion-free groups that are neither trivial nor free.
pub fn bound_omega(p: &ManifoldProfile) -> Result<(i64, OmegaProvenance)> {
    if !p.closed_orientable_3() {
        return Err(Error::Precondition("Ω bound needs a closed orientable 3-manifold".into()));
    }
    if matches!(p.pi1_kind, Some(Pi1Kind::Free) | Some(Pi1Kind::Trivial)) {
        return Err(Error::Precondition("Ω is undefined for free fundamental groups".into()));
    }
    let rule = (p.pi1_kind == Some(Pi1Kind::TorsionFree)).then_some(OmegaLower {
        value: 2,
        provenance: OmegaProvenance::TorsionFreeRule,
    });
    let best = match (p.omega_lower, rule) {
        (Some(a), Some(b)) => Some(if b.value > a.value { b } else { a }),
        (a, b) => a.or(b),
    };
    let o = need("omega_lower", best)?;
    Ok((2 * o.value as i64, o.provenance))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Lower,
    Upper,
    Exact,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundLine {
    pub id: String,
    pub kind: BoundKind,
    pub value: i64,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Delta2Estimate {
    pub lower: i64,
    pub upper: Option<i64>,
    pub exact: bool,
    pub provenance: Vec<BoundLine>,
    /// Bounds that could not be evaluated, with the reason.
    pub skipped: Vec<(String, String)>,
}

impl Delta2Estimate {
    /// Value reported by a named bound, if it applied.
    pub fn value_of(&self, id: &str) -> Option<i64> {
        self.provenance.iter().find(|l| l.id == id).map(|l| l.value)
    }
}

impl fmt::Display for Delta2Estimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.provenance {
            let k = match l.kind {
                BoundKind::Lower => ">=",
                BoundKind::Upper => "<=",
                BoundKind::Exact => "==",
            };
            writeln!(f, "  {:<28} {k} {:<4} {}", l.id, l.value, l.note)?;
        }
        for (id, why) in &self.skipped {
            writeln!(f, "  {id:<28} skipped: {why}")?;
        }
        match (self.exact, self.upper) {
            (true, _) => write!(f, "Δ₂ = {} (exact)", self.lower),
            (false, Some(u)) => write!(f, "Δ₂ ∈ [{}, {u}]", self.lower),
            (false, None) => write!(f, "Δ₂ >= {}", self.lower),
        }
    }
}

struct Acc {
    lower: i64,
    upper: Option<i64>,
    lines: Vec<BoundLine>,
    skipped: Vec<(String, String)>,
}

impl Acc {
    fn lower(&mut self, id: &str, v: i64, note: impl Into<String>) {
        self.lower = self.lower.max(v);
        self.lines.push(BoundLine {
            id: id.into(),
            kind: BoundKind::Lower,
            value: v,
            note: note.into(),
        });
    }

    fn upper(&mut self, id: &str, v: i64, note: impl Into<String>) {
        self.upper = Some(self.upper.map_or(v, |u| u.min(v)));
        self.lines.push(BoundLine {
            id: id.into(),
            kind: BoundKind::Upper,
            value: v,
            note: note.into(),
        });
    }

    fn exact(&mut self, id: &str, v: i64, note: impl Into<String>) {
        self.lower = self.lower.max(v);
        self.upper = Some(self.upper.map_or(v, |u| u.min(v)));
        self.lines.push(BoundLine {
            id: id.into(),
            kind: BoundKind::Exact,
            value: v,
            note: note.into(),
        });
    }

    fn skip(&mut self, id: &str, e: Error) {
        self.skipped.push((id.into(), e.to_string()));
    }
}

/// Is the profile a connected sum of copies of `S² × S¹` (or `S³`)?
/// `None` when the data cannot decide.
pub fn is_s2xs1_sum(p: &ManifoldProfile) -> Option<bool> {
    if !p.closed_orientable_3() {
        return Some(false);
    }
    if let Some(s) = p.summands_known() {
        return Some(s.iter().all(|x| *x == Summand::S2xS1));
    }
    match p.pi1_kind {
        Some(Pi1Kind::Trivial | Pi1Kind::Free) => return Some(true),
        Some(Pi1Kind::TorsionFree | Pi1Kind::HasTorsion) => return Some(false),
        None => {}
    }
    if let (Some(g), Some(c)) = (p.heegaard_genus, p.pi1_corank) {
        if g == c {
            return Some(true);
        }
    }
    if let (Some(r), Some(c)) = (p.pi1_rank, p.pi1_corank) {
        if r == c {
            return Some(true);
        }
    }
    None
}

/// Is the profile `#_r S² × S¹` plus exactly one lens space? Needs summands.
pub fn is_s2xs1_sum_plus_lens(p: &ManifoldProfile) -> Option<bool> {
    if !p.closed_orientable_3() {
        return Some(false);
    }
    let s = p.summands_known()?;
    let lenses = s.iter().filter(|x| matches!(x, Summand::Lens { p } if *p >= 2)).count();
    let others = s
        .iter()
        .filter(|x| !matches!(x, Summand::S2xS1 | Summand::Lens { .. }))
        .count();
    Some(lenses == 1 && others == 0)
}

pub fn estimate(p: &ManifoldProfile) -> Delta2Estimate {
    estimate_with(p, None)
}

/// Combines every applicable bound. `ring` restricts the homology bound.
pub fn estimate_with(p: &ManifoldProfile, ring: Option<RingSelector>) -> Delta2Estimate {
    let mut a = Acc {
        lower: 0,
        upper: None,
        lines: Vec::new(),
        skipped: Vec::new(),
    };

    if p.dim == 2 {
        a.exact("surface", p.euler_char.rem_euclid(2), "χ mod 2");
    }
    match bound_rank_corank(p) {
        Ok(v) => a.lower("rank-corank", v, "2(rank - corank)"),
        Err(e) => a.skip("rank-corank", e),
    }
    let mut any_ring = false;
    for h in &p.homology_ranks {
        if ring.is_some_and(|s| !s.matches(&h.ring)) {
            continue;
        }
        any_ring = true;
        let id = format!("homology-{}", h.ring);
        match bound_homology(p, h.ring) {
            Ok(v) => a.lower(&id, v, "Σ rank H_i - 2 corank"),
            Err(e) => a.skip(&id, e),
        }
    }
    if !any_ring {
        a.skip("homology", Error::MissingFields(vec!["homology_ranks".into()]));
    }
    match bound_category(p) {
        Ok(v) => a.lower("category", v, "cat - 2 corank - 2"),
        Err(e) => a.skip("category", e),
    }
    match bound_heegaard(p) {
        Ok((lo, hi)) => {
            a.lower("heegaard", lo, "2(g - corank)");
            a.upper("heegaard-upper", hi, "2g");
        }
        Err(e) => a.skip("heegaard", e),
    }
    match bound_omega(p) {
        Ok((v, prov)) => a.lower("omega", v, format!("2Ω ({})", omega_tag(prov))),
        Err(e) => a.skip("omega", e),
    }
    if let Some(w) = &p.witness {
        match w.delta2() {
            Ok(d) => a.upper("witness", d as i64, "Reeb graph of a constructed function"),
            Err(e) => a.skip("witness", e),
        }
    }
    for f in &p.delta2_facts {
        if let Some(v) = f.lower {
            a.lower("fact", v, f.source.clone());
        }
        if let Some(v) = f.upper {
            a.upper("fact", v, f.source.clone());
        }
    }

    if p.closed_orientable_3() {
        match is_s2xs1_sum(p) {
            Some(true) => a.exact("s2xs1-sum", 0, "Δ₂ = 0 exactly for sums of S²×S¹"),
            Some(false) => {
                a.lower("not-s2xs1-sum", 1, "Δ₂ = 0 only for sums of S²×S¹");
                match is_s2xs1_sum_plus_lens(p) {
                    Some(true) => a.exact("one-lens", 2, "Δ₂ = 2 exactly for S²×S¹ sums plus one lens space"),
                    Some(false) => a.lower("not-one-lens", 3, "Δ₂ = 2 only with exactly one lens summand"),
                    None => {}
                }
            }
            None => {}
        }
        if let (Some(g), Some(c), Some(s)) = (p.heegaard_genus, p.pi1_corank, p.summands_known()) {
            if g == c + 1 && !s.iter().any(|x| matches!(x, Summand::Lens { .. })) {
                a.lower("lens-free-strict", 4, "g = corank + 1 without lens summands");
            }
        }
    }

    // parity
    let chi = p.euler_char;
    if (a.lower - chi).rem_euclid(2) == 1 {
        let v = a.lower + 1;
        a.lower("parity", v, format!("Δ₂ ≡ χ = {chi} (mod 2)"));
    }
    if let Some(u) = a.upper {
        if (u - chi).rem_euclid(2) == 1 {
            a.upper("parity", u - 1, format!("Δ₂ ≡ χ = {chi} (mod 2)"));
        }
    }
    Delta2Estimate {
        lower: a.lower,
        upper: a.upper,
        exact: a.upper == Some(a.lower),
        provenance: a.lines,
        skipped: a.skipped,
    }
}

fn omega_tag(p: OmegaProvenance) -> &'static str {
    match p {
        OmegaProvenance::TorsionFreeRule => "torsion-free rule",
        OmegaProvenance::Literature => "literature",
        OmegaProvenance::PresentationComputed => "presentation-computed",
    }
}

fn sphere_euler(n: u32) -> i64 {
    if n.is_multiple_of(2) {
        2
    } else {
        0
    }
}

fn add_opt(a: Option<u64>, b: Option<u64>) -> Option<u64> {
    Some(a? + b?)
}

/// Bound ids whose equality in both summands makes lower bounds add.
const ADDITIVE_BOUNDS: [&str; 3] = ["rank-corank", "heegaard", "homology-Z"];

pub fn connected_sum(p: &ManifoldProfile, q: &ManifoldProfile) -> Result<ManifoldProfile> {
    if p.dim != q.dim {
        return Err(Error::DimensionMismatch(p.dim, q.dim));
    }
    let n = p.dim;
    let mut s = ManifoldProfile::new(
        format!("{}#{}", p.name, q.name),
        n,
        p.orientable && q.orientable,
        p.euler_char + q.euler_char - sphere_euler(n),
    );
    s.pi1_rank = add_opt(p.pi1_rank, q.pi1_rank);
    s.pi1_corank = add_opt(p.pi1_corank, q.pi1_corank);
    s.heegaard_genus = add_opt(p.heegaard_genus, q.heegaard_genus);
    if p.orientable || q.orientable {
        for hp in &p.homology_ranks {
            if let Some(hq) = q.homology_ranks.iter().find(|h| h.ring == hp.ring) {
                s.homology_ranks.push(HomologyRanks {
                    ring: hp.ring,
                    ranks: hp.ranks.iter().zip(&hq.ranks).map(|(a, b)| a + b).collect(),
                });
            }
        }
    }
    s.pi1_kind = match (p.pi1_kind, q.pi1_kind) {
        (Some(a), Some(b)) => Some(Pi1Kind::free_product(a, b)),
        _ => None,
    };
    s.prime_summands = match (&p.prime_summands, &q.prime_summands) {
        (Some(a), Some(b)) => Some(a.iter().chain(b).cloned().collect()),
        _ => None,
    };
    s.witness = match (&p.witness, &q.witness) {
        (Some(a), Some(b)) => Some(WitnessRecipe::ConnectedSum {
            parts: vec![a.clone(), b.clone()],
        }),
        _ => None,
    };

    let (ep, eq) = (estimate(p), estimate(q));
    let upper = match (ep.upper, eq.upper) {
        (Some(a), Some(b)) => Some(a + b),
        _ => None,
    };
    let shared = ADDITIVE_BOUNDS.iter().find(|id| {
        ep.exact && eq.exact && ep.value_of(id) == Some(ep.lower) && eq.value_of(id) == Some(eq.lower)
    });
    let lower = shared.map(|_| ep.lower + eq.lower);
    if upper.is_some() || lower.is_some() {
        s.delta2_facts.push(Delta2Fact {
            lower,
            upper,
            source: match shared {
                Some(id) => format!("connected sum; both summands attain the {id} bound"),
                None => "connected sum; uppers add".into(),
            },
        });
    }
    s.provenance.insert("all".into(), "connected sum of summand profiles".into());
    Ok(s)
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

pub fn sphere(n: u32) -> ManifoldProfile {
    let mut p = ManifoldProfile::new(format!("sphere({n})"), n, true, sphere_euler(n));
    p.pi1_rank = Some(0);
    p.pi1_corank = Some(0);
    p.pi1_kind = Some(Pi1Kind::Trivial);
    p.homology_ranks = vec![HomologyRanks {
        ring: Ring::Z,
        ranks: vec![0; n as usize - 1],
    }];
    p.ls_category = Some(2);
    if n == 3 {
        p.heegaard_genus = Some(0);
        p.prime_summands = Some(vec![]);
        p.witness = Some(WitnessRecipe::Ordered { genus: 0 });
    }
    p.delta2_facts.push(Delta2Fact {
        lower: None,
        upper: Some(0),
        source: "height function with two critical points".into(),
    });
    p.tag("all", "standard")
}

pub fn real_projective(n: u32) -> ManifoldProfile {
    let chi = if n.is_multiple_of(2) { 1 } else { 0 };
    let mut p = ManifoldProfile::new(format!("rp({n})"), n, n % 2 == 1, chi);
    p.pi1_rank = Some(1);
    p.pi1_corank = Some(0);
    p.pi1_kind = Some(Pi1Kind::HasTorsion);
    let top = n as usize - 1;
    p.homology_ranks = vec![
        HomologyRanks {
            ring: Ring::Fp(2),
            ranks: vec![1; top],
        },
        HomologyRanks {
            ring: Ring::Q,
            ranks: vec![0; top],
        },
    ];
    p.ls_category = Some(n as u64 + 1);
    if n == 3 {
        p.heegaard_genus = Some(1);
        p.prime_summands = Some(vec![Summand::Lens { p: 2 }]);
        p.witness = Some(WitnessRecipe::Ordered { genus: 1 });
    }
    p.tag("all", "standard").tag("ls_category", "cup-length over F2")
}

pub fn complex_projective(n: u32) -> ManifoldProfile {
    let dim = 2 * n;
    let mut p = ManifoldProfile::new(format!("cp({n})"), dim, true, n as i64 + 1);
    p.pi1_rank = Some(0);
    p.pi1_corank = Some(0);
    p.pi1_kind = Some(Pi1Kind::Trivial);
    p.homology_ranks = vec![HomologyRanks {
        ring: Ring::Z,
        ranks: (1..dim).map(|i| u64::from(i % 2 == 0)).collect(),
    }];
    p.ls_category = Some(n as u64 + 1);
    p.tag("all", "standard").tag("ls_category", "cup-length")
}

pub fn torus(n: u32) -> ManifoldProfile {
    let mut p = ManifoldProfile::new(format!("torus({n})"), n, true, 0);
    p.pi1_rank = Some(n as u64);
    p.pi1_corank = Some(1);
    p.pi1_kind = Some(Pi1Kind::TorsionFree);
    p.homology_ranks = vec![HomologyRanks {
        ring: Ring::Z,
        ranks: (1..n as u64).map(|k| binom(n as u64, k)).collect(),
    }];
    p.ls_category = Some(n as u64 + 1);
    if n == 3 {
        p.heegaard_genus = Some(3);
        p.prime_summands = Some(vec![Summand::Irreducible { name: "T3".into() }]);
        p.witness = Some(WitnessRecipe::CircleBundle { g: 1, e: 0 });
    }
    p.tag("all", "standard").tag("pi1_corank", "abelian group onto Z")
}

/// `Σ_g × S^(n-2)`, `g >= 1`, `n >= 3`.
pub fn surface_product(g: u32, n: u32) -> Result<ManifoldProfile> {
    if g == 0 || n < 3 {
        return Err(Error::InvalidParameter("surface-product needs g >= 1 and n >= 3".into()));
    }
    if n == 3 {
        let mut p = circle_bundle(g, 0)?;
        p.name = format!("surface-product({g},3)");
        return Ok(p);
    }
    let m = n - 2;
    let surf = [1u64, 2 * g as u64, 1];
    let ranks = (1..n)
        .map(|i| {
            (0..=2u32)
                .filter(|&j| j <= i)
                .map(|j| {
                    let k = i - j;
                    let sph = u64::from(k == 0 || k == m);
                    surf[j as usize] * sph
                })
                .sum()
        })
        .collect();
    let chi = (2 - 2 * g as i64) * sphere_euler(m);
    let mut p = ManifoldProfile::new(format!("surface-product({g},{n})"), n, true, chi);
    p.pi1_rank = Some(2 * g as u64);
    p.pi1_corank = Some(g as u64);
    p.pi1_kind = Some(Pi1Kind::TorsionFree);
    p.homology_ranks = vec![HomologyRanks { ring: Ring::Z, ranks }];
    Ok(p.tag("all", "standard").tag("homology_ranks", "Künneth"))
}

pub fn orientable_surface(g: u32) -> ManifoldProfile {
    let mut p = ManifoldProfile::new(format!("surface({g})"), 2, true, 2 - 2 * g as i64);
    p.pi1_rank = Some(2 * g as u64);
    p.pi1_corank = Some(g as u64);
    p.homology_ranks = vec![HomologyRanks {
        ring: Ring::Z,
        ranks: vec![2 * g as u64],
    }];
    p.pi1_kind = Some(match g {
        0 => Pi1Kind::Trivial,
        _ => Pi1Kind::TorsionFree,
    });
    p.tag("all", "standard")
}

pub fn lens(p: u64) -> Result<ManifoldProfile> {
    if p < 2 {
        return Err(Error::InvalidParameter("lens order must be >= 2".into()));
    }
    let mut m = ManifoldProfile::new(format!("lens({p})"), 3, true, 0);
    m.pi1_rank = Some(1);
    m.pi1_corank = Some(0);
    m.pi1_kind = Some(Pi1Kind::HasTorsion);
    m.homology_ranks = vec![
        HomologyRanks {
            ring: Ring::Z,
            ranks: vec![0, 0],
        },
        HomologyRanks {
            ring: Ring::Q,
            ranks: vec![0, 0],
        },
    ];
    if is_prime(p) {
        m.homology_ranks.push(HomologyRanks {
            ring: Ring::Fp(p),
            ranks: vec![1, 1],
        });
    }
    m.ls_category = Some(4);
    m.heegaard_genus = Some(1);
    m.prime_summands = Some(vec![Summand::Lens { p }]);
    m.witness = Some(WitnessRecipe::Ordered { genus: 1 });
    Ok(m.tag("all", "standard"))
}

pub fn lens_sum(p: u64, q: u64) -> Result<ManifoldProfile> {
    let mut m = connected_sum(&lens(p)?, &lens(q)?)?;
    m.name = format!("lens-sum({p},{q})");
    Ok(m)
}

pub fn s2xs1_sum(r: u32) -> ManifoldProfile {
    let r64 = r as u64;
    let mut m = ManifoldProfile::new(format!("s2xs1-sum({r})"), 3, true, 0);
    m.pi1_rank = Some(r64);
    m.pi1_corank = Some(r64);
    m.pi1_kind = Some(if r == 0 { Pi1Kind::Trivial } else { Pi1Kind::Free });
    m.homology_ranks = vec![HomologyRanks {
        ring: Ring::Z,
        ranks: vec![r64, r64],
    }];
    m.heegaard_genus = Some(r64);
    m.prime_summands = Some(vec![Summand::S2xS1; r as usize]);
    m.witness = Some(WitnessRecipe::S2xS1Sum { count: r });
    m.tag("all", "standard")
}

pub fn s2xs1_sum_lens(r: u32, p: u64) -> Result<ManifoldProfile> {
    let mut m = connected_sum(&s2xs1_sum(r), &lens(p)?)?;
    m.name = format!("s2xs1-sum-lens({r},{p})");
    Ok(m)
}

/// Circle bundle of Euler number `e` over the closed orientable genus-`g` surface.
pub fn circle_bundle(g: u32, e: i64) -> Result<ManifoldProfile> {
    if g == 0 {
        return Err(Error::InvalidParameter("base genus must be >= 1".into()));
    }
    let g64 = g as u64;
    let unit = e.abs() == 1;
    let b1 = if e == 0 { 2 * g64 + 1 } else { 2 * g64 };
    let mut m = ManifoldProfile::new(format!("circle-bundle({g},{e})"), 3, true, 0);
    m.pi1_rank = Some(if unit { 2 * g64 } else { 2 * g64 + 1 });
    m.pi1_corank = Some(g64);
    m.pi1_kind = Some(Pi1Kind::TorsionFree);
    m.homology_ranks = vec![
        HomologyRanks {
            ring: Ring::Z,
            ranks: vec![b1, b1],
        },
        HomologyRanks {
            ring: Ring::Q,
            ranks: vec![b1, b1],
        },
    ];
    m.ls_category = Some(4);
    m.heegaard_genus = Some(if unit { 2 * g64 } else { 2 * g64 + 1 });
    m.prime_summands = Some(vec![Summand::Irreducible {
        name: format!("circle-bundle({g},{e})"),
    }]);
    m.witness = Some(WitnessRecipe::CircleBundle { g, e });
    Ok(m.tag("pi1_corank", "surjects onto the base surface group")
        .tag("heegaard_genus", "literature")
        .tag("pi1_rank", "literature")
        .tag("ls_category", "aspherical"))
}

pub fn heisenberg() -> ManifoldProfile {
    let mut m = circle_bundle(1, 1).expect("valid parameters");
    m.name = "heisenberg".into();
    m.omega_lower = Some(OmegaLower {
        value: 2,
        provenance: OmegaProvenance::Literature,
    });
    m
}

/// A closed orientable 3-manifold with the homology of `S³`, non-trivial
/// fundamental group, and Heegaard genus `g >= 2`.
pub fn homology_sphere(g: u32) -> Result<ManifoldProfile> {
    if g < 2 {
        return Err(Error::InvalidParameter("homology sphere genus must be >= 2".into()));
    }
    let mut m = ManifoldProfile::new(format!("homology-sphere({g})"), 3, true, 0);
    m.pi1_corank = Some(0);
    m.homology_ranks = vec![HomologyRanks {
        ring: Ring::Z,
        ranks: vec![0, 0],
    }];
    m.ls_category = Some(4);
    m.heegaard_genus = Some(g as u64);
    m.witness = Some(WitnessRecipe::Ordered { genus: g });
    Ok(m.tag("pi1_corank", "perfect group").tag("ls_category", "non-free fundamental group"))
}

pub fn catalog() -> Vec<ManifoldProfile> {
    let mut out = Vec::new();
    for n in 2..=8 {
        out.push(sphere(n));
        out.push(real_projective(n));
    }
    for n in 1..=8 {
        out.push(complex_projective(n));
    }
    for n in 2..=6 {
        out.push(torus(n));
    }
    for g in 0..=3 {
        out.push(orientable_surface(g));
    }
    for g in 1..=3 {
        for n in 3..=5 {
            out.push(surface_product(g, n).expect("valid"));
        }
    }
    for p in 2..=7 {
        out.push(lens(p).expect("valid"));
    }
    for (p, q) in [(2, 3), (2, 5), (3, 4), (3, 5), (2, 2)] {
        out.push(lens_sum(p, q).expect("valid"));
    }
    for r in 0..=4 {
        out.push(s2xs1_sum(r));
    }
    for r in 1..=3 {
        out.push(s2xs1_sum_lens(r, 5).expect("valid"));
    }
    for g in 1..=4 {
        for e in -5..=5 {
            out.push(circle_bundle(g, e).expect("valid"));
        }
    }
    out.push(heisenberg());
    for g in 2..=4 {
        out.push(homology_sphere(g).expect("valid"));
    }
    out
}

/// Looks up `name(args)` in the catalog families.
pub fn lookup(name: &str) -> Result<ManifoldProfile> {
    let name = name.trim();
    let unknown = || Error::UnknownProfile(name.to_string());
    let (head, args) = match name.split_once('(') {
        Some((h, rest)) => {
            let inner = rest.strip_suffix(')').ok_or_else(unknown)?;
            let args: Vec<i64> = inner
                .split(',')
                .map(|a| a.trim().parse::<i64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| unknown())?;
            (h.trim(), args)
        }
        None => (name, vec![]),
    };
    let u = |i: usize| -> Result<u32> {
        args.get(i)
            .and_then(|&v| u32::try_from(v).ok())
            .ok_or_else(unknown)
    };
    let check = |n: usize| if args.len() == n { Ok(()) } else { Err(unknown()) };
    match head {
        "heisenberg" => check(0).map(|_| heisenberg()),
        "s3" => check(0).map(|_| sphere(3)),
        "sphere" => {
            check(1)?;
            let n = u(0)?;
            if n < 2 {
                return Err(unknown());
            }
            Ok(sphere(n))
        }
        "rp" => {
            check(1)?;
            let n = u(0)?;
            if n < 2 {
                return Err(unknown());
            }
            Ok(real_projective(n))
        }
        "cp" => {
            check(1)?;
            let n = u(0)?;
            if n < 1 {
                return Err(unknown());
            }
            Ok(complex_projective(n))
        }
        "torus" => {
            check(1)?;
            let n = u(0)?;
            if n < 2 {
                return Err(unknown());
            }
            Ok(torus(n))
        }
        "surface" => check(1).and_then(|_| Ok(orientable_surface(u(0)?))),
        "surface-product" => {
            check(2)?;
            surface_product(u(0)?, u(1)?)
        }
        "lens" => {
            check(1)?;
            lens(u(0)? as u64)
        }
        "lens-sum" => {
            check(2)?;
            lens_sum(u(0)? as u64, u(1)? as u64)
        }
        "s2xs1-sum" => check(1).and_then(|_| Ok(s2xs1_sum(u(0)?))),
        "s2xs1" => check(0).map(|_| s2xs1_sum(1)),
        "s2xs1-sum-lens" => {
            check(2)?;
            s2xs1_sum_lens(u(0)?, u(1)? as u64)
        }
        "circle-bundle" => {
            check(2)?;
            circle_bundle(u(0)?, args[1])
        }
        "homology-sphere" => {
            check(1)?;
            homology_sphere(u(0)?)
        }
        _ => Err(unknown()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdditivityGap {
    pub left: String,
    pub right: String,
    pub sum_of_uppers: Option<i64>,
    /// Lower bound recomputed from the summed invariants alone.
    pub recomputed_lower: i64,
    pub gap: Option<i64>,
}

/// Compares the sum of upper bounds with the lower bound recomputed on the
/// connected sum. Reported, never asserted.
pub fn additivity_gap(p: &ManifoldProfile, q: &ManifoldProfile) -> Result<AdditivityGap> {
    let mut s = connected_sum(p, q)?;
    s.delta2_facts.clear();
    s.witness = None;
    let (ep, eq) = (estimate(p), estimate(q));
    let sum = match (ep.upper, eq.upper) {
        (Some(a), Some(b)) => Some(a + b),
        _ => None,
    };
    let lower = estimate(&s).lower;
    Ok(AdditivityGap {
        left: p.name.clone(),
        right: q.name.clone(),
        sum_of_uppers: sum,
        recomputed_lower: lower,
        gap: sum.map(|u| u - lower),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorankExcess {
    pub name: String,
    /// `Δ₂/2 + corank - g` evaluated at the lower and upper Δ₂ bounds.
    pub at_lower: i64,
    pub at_upper: Option<i64>,
}

/// Scans closed orientable 3-manifold profiles for `Δ₂/2 + corank - g`.
pub fn corank_excess_scan(profiles: &[ManifoldProfile]) -> Vec<CorankExcess> {
    profiles
        .iter()
        .filter(|p| p.closed_orientable_3())
        .filter_map(|p| {
            let (g, c) = (p.heegaard_genus? as i64, p.pi1_corank? as i64);
            let e = estimate(p);
            Some(CorankExcess {
                name: p.name.clone(),
                at_lower: e.lower / 2 + c - g,
                at_upper: e.upper.map(|u| u / 2 + c - g),
            })
        })
        .collect()
}
