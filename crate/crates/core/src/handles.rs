//! Handle-attachment scripts for simple Morse functions on closed orientable
//! 3-manifolds. Level sets are tracked as a multiset of closed orientable
//! surfaces; each event adds one vertex to the Reeb graph.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::reeb::{Census, ReebGraph};

pub type ComponentId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HandleEvent {
    /// 0-handle: a new sphere component.
    Birth,
    /// 1-handle on one component: genus + 1.
    AddGenus { target: ComponentId },
    /// 1-handle joining two components; the result keeps `first`'s id.
    Merge { first: ComponentId, second: ComponentId },
    /// 2-handle cutting a component in two; `genera.1` gets a fresh id.
    Split { target: ComponentId, genera: (u32, u32) },
    /// 2-handle along a non-separating curve: genus - 1.
    DropGenus { target: ComponentId },
    /// 3-handle capping a sphere.
    Death { target: ComponentId },
}

impl HandleEvent {
    pub fn index(&self) -> u8 {
        match self {
            HandleEvent::Birth => 0,
            HandleEvent::AddGenus { .. } | HandleEvent::Merge { .. } => 1,
            HandleEvent::Split { .. } | HandleEvent::DropGenus { .. } => 2,
            HandleEvent::Death { .. } => 3,
        }
    }
}

impl fmt::Display for HandleEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            HandleEvent::Birth => write!(f, "h0"),
            HandleEvent::AddGenus { target } => write!(f, "h1 +g @c{target}"),
            HandleEvent::Merge { first, second } => write!(f, "h1 merge @c{first} @c{second}"),
            HandleEvent::Split { target, genera } => write!(f, "h2 split @c{target} ({},{})", genera.0, genera.1),
            HandleEvent::DropGenus { target } => write!(f, "h2 -g @c{target}"),
            HandleEvent::Death { target } => write!(f, "h3 @c{target}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HandleSequence {
    pub events: Vec<HandleEvent>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
struct Component {
    genus: u32,
    /// Reeb vertex the component's current arc starts from.
    arc: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceState {
    components: BTreeMap<ComponentId, Component>,
    next_id: ComponentId,
}

impl SurfaceState {
    pub fn new() -> Self {
        SurfaceState {
            components: BTreeMap::new(),
            next_id: 1,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn genus(&self, id: ComponentId) -> Option<u32> {
        self.components.get(&id).map(|c| c.genus)
    }

    pub fn components(&self) -> impl Iterator<Item = (ComponentId, u32)> + '_ {
        self.components.iter().map(|(&id, c)| (id, c.genus))
    }

    pub fn total_genus(&self) -> u32 {
        self.components.values().map(|c| c.genus).sum()
    }

    /// Fewest events that empty this state.
    pub fn closing_cost(&self) -> usize {
        self.components.values().map(|c| c.genus as usize + 1).sum()
    }

    fn fresh(&mut self) -> ComponentId {
        let id = self.next_id;
        self.next_id += 1;
        id
    }

    fn get(&self, id: ComponentId) -> std::result::Result<Component, String> {
        self.components.get(&id).copied().ok_or_else(|| format!("no component c{id}"))
    }

    /// Applies one event whose vertex will be `vertex`; returns the in-edge
    /// sources of that vertex.
    fn apply(&mut self, e: &HandleEvent, vertex: usize) -> std::result::Result<Vec<usize>, String> {
        match *e {
            HandleEvent::Birth => {
                let id = self.fresh();
                self.components.insert(id, Component { genus: 0, arc: vertex });
                Ok(vec![])
            }
            HandleEvent::AddGenus { target } => {
                let c = self.get(target)?;
                self.components.insert(target, Component { genus: c.genus + 1, arc: vertex });
                Ok(vec![c.arc])
            }
            HandleEvent::Merge { first, second } => {
                if first == second {
                    return Err("merge needs two distinct components".into());
                }
                let a = self.get(first)?;
                let b = self.get(second)?;
                self.components.remove(&second);
                self.components.insert(
                    first,
                    Component {
                        genus: a.genus + b.genus,
                        arc: vertex,
                    },
                );
                Ok(vec![a.arc, b.arc])
            }
            HandleEvent::Split { target, genera } => {
                let c = self.get(target)?;
                if genera.0 + genera.1 != c.genus {
                    return Err(format!(
                        "partition ({},{}) does not sum to genus {} of c{target}",
                        genera.0, genera.1, c.genus
                    ));
                }
                self.components.insert(target, Component { genus: genera.0, arc: vertex });
                let id = self.fresh();
                self.components.insert(id, Component { genus: genera.1, arc: vertex });
                Ok(vec![c.arc])
            }
            HandleEvent::DropGenus { target } => {
                let c = self.get(target)?;
                if c.genus == 0 {
                    return Err(format!("c{target} has genus 0"));
                }
                self.components.insert(target, Component { genus: c.genus - 1, arc: vertex });
                Ok(vec![c.arc])
            }
            HandleEvent::Death { target } => {
                let c = self.get(target)?;
                if c.genus != 0 {
                    return Err(format!("c{target} has genus {}", c.genus));
                }
                self.components.remove(&target);
                Ok(vec![c.arc])
            }
        }
    }
}

impl fmt::Display for SurfaceState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (id, c)) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "c{id}: genus {}", c.genus)?;
        }
        write!(f, "}}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunResult {
    pub graph: ReebGraph,
    /// Handle counts by index.
    pub k: [usize; 4],
    pub closed: bool,
    pub census: Census,
    pub final_state: SurfaceState,
}

impl RunResult {
    pub fn delta2(&self) -> usize {
        self.census.delta(2)
    }

    pub fn delta3(&self) -> usize {
        self.census.delta(3)
    }

    pub fn cycle_rank(&self) -> Result<usize> {
        self.graph.cycle_rank()
    }
}

impl HandleSequence {
    pub fn new(events: Vec<HandleEvent>) -> Self {
        HandleSequence { events }
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn counts(&self) -> [usize; 4] {
        let mut k = [0; 4];
        for e in &self.events {
            k[e.index() as usize] += 1;
        }
        k
    }

    pub fn run(&self) -> Result<RunResult> {
        let mut state = SurfaceState::new();
        let mut indices = Vec::with_capacity(self.events.len());
        let mut edges = Vec::new();
        for (i, e) in self.events.iter().enumerate() {
            let snapshot = state.to_string();
            let sources = state.apply(e, i).map_err(|msg| Error::InvalidEvent {
                event: i + 1,
                msg: format!("`{e}`: {msg}"),
                state: snapshot,
            })?;
            indices.push(e.index());
            edges.extend(sources.into_iter().map(|s| (s, i)));
        }
        let closed = state.is_empty();
        let graph = if closed {
            ReebGraph::new(3, indices, edges)?
        } else {
            ReebGraph::new_open(3, indices, edges)?
        };
        let census = graph.degree_census()?;
        Ok(RunResult {
            graph,
            k: self.counts(),
            closed,
            census,
            final_state: state,
        })
    }

    /// One event per line; `#` starts a comment.
    pub fn parse(script: &str) -> Result<Self> {
        let mut events = Vec::new();
        let mut offset = 0;
        for (n, raw) in script.split_inclusive('\n').enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if !line.is_empty() {
                events.push(parse_event(line).map_err(|msg| Error::Parse {
                    pos: offset,
                    msg: format!("line {}: {msg}", n + 1),
                })?);
            }
            offset += raw.len();
        }
        Ok(HandleSequence { events })
    }

    pub fn to_script(&self) -> String {
        self.events.iter().map(|e| format!("{e}\n")).collect()
    }
}

fn parse_id(tok: &str) -> std::result::Result<ComponentId, String> {
    tok.strip_prefix("@c")
        .and_then(|d| d.parse().ok())
        .ok_or_else(|| format!("expected a component like @c1, got `{tok}`"))
}

fn parse_event(line: &str) -> std::result::Result<HandleEvent, String> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    match toks.as_slice() {
        ["h0"] => Ok(HandleEvent::Birth),
        ["h1", "+g", t] => Ok(HandleEvent::AddGenus { target: parse_id(t)? }),
        ["h1", "merge", a, b] => Ok(HandleEvent::Merge {
            first: parse_id(a)?,
            second: parse_id(b)?,
        }),
        ["h2", "-g", t] => Ok(HandleEvent::DropGenus { target: parse_id(t)? }),
        ["h2", "split", t, rest @ ..] if !rest.is_empty() => {
            let part: String = rest.concat();
            let inner = part
                .strip_prefix('(')
                .and_then(|p| p.strip_suffix(')'))
                .ok_or_else(|| format!("expected a partition like (1,1), got `{part}`"))?;
            let (a, b) = inner.split_once(',').ok_or("partition needs two genera")?;
            let g1 = a.trim().parse().map_err(|_| format!("bad genus `{a}`"))?;
            let g2 = b.trim().parse().map_err(|_| format!("bad genus `{b}`"))?;
            Ok(HandleEvent::Split {
                target: parse_id(t)?,
                genera: (g1, g2),
            })
        }
        ["h3", t] => Ok(HandleEvent::Death { target: parse_id(t)? }),
        _ => Err(format!("unrecognised event `{line}`")),
    }
}

/// Records ids as they are created so builders can refer to them.
struct Builder {
    events: Vec<HandleEvent>,
    state: SurfaceState,
}

impl Builder {
    fn new() -> Self {
        Builder {
            events: Vec::new(),
            state: SurfaceState::new(),
        }
    }

    fn push(&mut self, e: HandleEvent) -> Option<ComponentId> {
        let before = self.state.next_id;
        self.state
            .apply(&e, self.events.len())
            .expect("builder emits valid events");
        self.events.push(e);
        (self.state.next_id != before).then_some(before)
    }

    fn genus(&self, id: ComponentId) -> u32 {
        self.state.genus(id).expect("live component")
    }

    fn finish(self) -> HandleSequence {
        HandleSequence { events: self.events }
    }
}

/// 0; g genus increments; g genus decrements; 3.
pub fn ordered(g: u32) -> HandleSequence {
    let mut b = Builder::new();
    let c = b.push(HandleEvent::Birth).expect("new id");
    for _ in 0..g {
        b.push(HandleEvent::AddGenus { target: c });
    }
    for _ in 0..g {
        b.push(HandleEvent::DropGenus { target: c });
    }
    b.push(HandleEvent::Death { target: c });
    b.finish()
}

/// The two-extrema function on `S² × S¹`: a splitting 2-handle below a merging 1-handle.
pub fn s2xs1() -> HandleSequence {
    HandleSequence::new(vec![
        HandleEvent::Birth,
        HandleEvent::Split { target: 1, genera: (0, 0) },
        HandleEvent::Merge { first: 1, second: 2 },
        HandleEvent::Death { target: 1 },
    ])
}

/// Handle order for the circle bundle of Euler number `e` over the genus-`g`
/// surface. The Reeb graph does not depend on `e`.
pub fn circle_bundle_seq(g: u32, _e: i64) -> Result<HandleSequence> {
    if g == 0 {
        return Err(Error::InvalidParameter("base genus must be >= 1".into()));
    }
    let mut b = Builder::new();
    let c = b.push(HandleEvent::Birth).expect("new id");
    for _ in 0..=g {
        b.push(HandleEvent::AddGenus { target: c });
    }
    let mut pieces = Vec::new();
    for _ in 0..g {
        let gen = b.genus(c);
        pieces.push(
            b.push(HandleEvent::Split {
                target: c,
                genera: (gen - 1, 1),
            })
            .expect("new id"),
        );
    }
    for p in pieces {
        b.push(HandleEvent::Merge { first: c, second: p });
    }
    for _ in 0..=g {
        b.push(HandleEvent::DropGenus { target: c });
    }
    b.push(HandleEvent::Death { target: c });
    Ok(b.finish())
}

/// Index pattern `0, 1^(k1-r), (2,1)^r, 2^(k1-r), 3`: cycle rank `r` and
/// `Δ₂ = 2(k1 - r)`.
pub fn canonical_sequence(k1: u32, r: u32) -> Result<HandleSequence> {
    if r > k1 {
        return Err(Error::InvalidParameter(format!("r = {r} exceeds k1 = {k1}")));
    }
    let mut b = Builder::new();
    let c = b.push(HandleEvent::Birth).expect("new id");
    for _ in 0..k1 - r {
        b.push(HandleEvent::AddGenus { target: c });
    }
    for _ in 0..r {
        let gen = b.genus(c);
        let p = b
            .push(HandleEvent::Split {
                target: c,
                genera: (gen, 0),
            })
            .expect("new id");
        b.push(HandleEvent::Merge { first: c, second: p });
    }
    for _ in 0..k1 - r {
        b.push(HandleEvent::DropGenus { target: c });
    }
    b.push(HandleEvent::Death { target: c });
    Ok(b.finish())
}

/// Drops the final 3-handle of `s1` and the initial 0-handle of `s2`, gluing
/// the last sphere of `s1` to the first sphere of `s2`.
pub fn connected_sum(s1: &HandleSequence, s2: &HandleSequence) -> Result<HandleSequence> {
    let r1 = s1.run()?;
    let r2 = s2.run()?;
    if !r1.closed || !r2.closed {
        return Err(Error::Precondition("connected sum needs closed sequences".into()));
    }
    let (Some(HandleEvent::Death { .. }), Some(HandleEvent::Birth)) = (s1.events.last(), s2.events.first()) else {
        return Err(Error::Precondition(
            "first sequence must end with a 3-handle and second start with a 0-handle".into(),
        ));
    };
    let head = &s1.events[..s1.events.len() - 1];
    let mut b = Builder::new();
    for e in head {
        b.push(*e);
    }
    if b.state.component_count() != 1 {
        return Err(Error::Precondition(
            "first sequence must have a single component before its last 3-handle".into(),
        ));
    }
    let glue = b.state.components().next().expect("one component").0;
    let mut map: BTreeMap<ComponentId, ComponentId> = BTreeMap::new();
    map.insert(1, glue);
    let mut next2: ComponentId = 2;
    for e in &s2.events[1..] {
        let m = |id: ComponentId| map[&id];
        let mapped = match *e {
            HandleEvent::Birth => HandleEvent::Birth,
            HandleEvent::AddGenus { target } => HandleEvent::AddGenus { target: m(target) },
            HandleEvent::Merge { first, second } => HandleEvent::Merge {
                first: m(first),
                second: m(second),
            },
            HandleEvent::Split { target, genera } => HandleEvent::Split {
                target: m(target),
                genera,
            },
            HandleEvent::DropGenus { target } => HandleEvent::DropGenus { target: m(target) },
            HandleEvent::Death { target } => HandleEvent::Death { target: m(target) },
        };
        if let Some(new) = b.push(mapped) {
            map.insert(next2, new);
            next2 += 1;
        }
    }
    Ok(b.finish())
}

/// A random closed sequence of at most `max_events` events (at least 2)
/// whose Reeb graph is connected.
pub fn random_closed_sequence<R: Rng + ?Sized>(rng: &mut R, max_events: usize) -> HandleSequence {
    let max_events = max_events.max(2);
    let mut b = Builder::new();
    // live component -> label of its connected piece of the graph so far
    let mut piece: BTreeMap<ComponentId, usize> = BTreeMap::new();
    piece.insert(b.push(HandleEvent::Birth).expect("new id"), 0);
    let mut pieces = 1;
    loop {
        let used = b.events.len();
        let cost = b.state.closing_cost();
        if used + cost >= max_events || rng.gen_bool(0.08) {
            break;
        }
        let ids: Vec<(ComponentId, u32)> = b.state.components().collect();
        // each candidate with its change in closing cost
        let mut options: Vec<(HandleEvent, i64)> = vec![(HandleEvent::Birth, 1)];
        for &(id, g) in &ids {
            options.push((HandleEvent::AddGenus { target: id }, 1));
            let g1 = rng.gen_range(0..=g);
            options.push((
                HandleEvent::Split {
                    target: id,
                    genera: (g1, g - g1),
                },
                1,
            ));
            if g > 0 {
                options.push((HandleEvent::DropGenus { target: id }, -1));
            } else if piece.iter().any(|(&o, &p)| o != id && p == piece[&id]) {
                options.push((HandleEvent::Death { target: id }, -1));
            }
        }
        for &(a, _) in &ids {
            for &(c, _) in &ids {
                if a != c {
                    options.push((HandleEvent::Merge { first: a, second: c }, -1));
                }
            }
        }
        options.retain(|&(_, d)| (used as i64 + 1 + cost as i64 + d) <= max_events as i64);
        if options.is_empty() {
            break;
        }
        let (e, _) = options[rng.gen_range(0..options.len())];
        let created = b.push(e);
        match e {
            HandleEvent::Birth => {
                piece.insert(created.expect("new id"), pieces);
                pieces += 1;
            }
            HandleEvent::Split { target, .. } => {
                piece.insert(created.expect("new id"), piece[&target]);
            }
            HandleEvent::Merge { first, second } => {
                let (keep, gone) = (piece[&first], piece.remove(&second).expect("live"));
                piece.values_mut().filter(|p| **p == gone).for_each(|p| *p = keep);
            }
            HandleEvent::Death { target } => {
                piece.remove(&target);
            }
            _ => {}
        }
    }
    // merging first costs the same as closing each component separately
    let ids: Vec<ComponentId> = b.state.components().map(|(id, _)| id).collect();
    let root = ids[0];
    for &id in &ids[1..] {
        b.push(HandleEvent::Merge { first: root, second: id });
    }
    for _ in 0..b.genus(root) {
        b.push(HandleEvent::DropGenus { target: root });
    }
    b.push(HandleEvent::Death { target: root });
    b.finish()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    /// 1-based relator position.
    pub relator: usize,
    /// Generators the relator needs (largest support position, 1-based).
    pub need: usize,
    /// 1-handles present when the matching 2-handle is attached.
    pub available: usize,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaConsistency {
    pub k1: usize,
    pub cycle_rank: usize,
    pub windows: Vec<Window>,
    pub pass: bool,
    /// `max(1, k1 - cycle_rank)`.
    pub omega_bound: usize,
    pub omega_fixed: Option<usize>,
}

/// Checks that each relator of `p` only uses the generators whose 1-handles
/// precede the matching 2-handle in the canonical order of `seq`.
///
/// Generators correspond to 1-handles and relators to 2-handles, both in
/// canonical critical-value order.
pub fn window_omega_consistency(seq: &HandleSequence, p: &Presentation) -> Result<OmegaConsistency> {
    let run = seq.run()?;
    if !run.closed || run.k[0] != 1 || run.k[3] != 1 {
        return Err(Error::Precondition(
            "sequence must be closed with one 0-handle and one 3-handle".into(),
        ));
    }
    let (k1, k2) = (run.k[1], run.k[2]);
    if p.rank() != k1 || p.relator_count() != k2 {
        return Err(Error::Precondition(format!(
            "presentation has {} generators and {} relators; sequence has {k1} 1-handles and {k2} 2-handles",
            p.rank(),
            p.relator_count()
        )));
    }
    let canon = run.graph.canonical_form()?;
    let r = canon.cycle_rank()?;
    let mut windows = Vec::with_capacity(k2);
    let mut ones = 0;
    for &i in canon.indices() {
        match i {
            1 => ones += 1,
            2 => {
                let j = windows.len();
                let need = p.relators()[j].max_gen().map_or(0, |g| g + 1);
                windows.push(Window {
                    relator: j + 1,
                    need,
                    available: ones,
                    ok: need <= ones,
                });
            }
            _ => {}
        }
    }
    let pass = windows.iter().all(|w| w.ok);
    Ok(OmegaConsistency {
        k1,
        cycle_rank: r,
        windows,
        pass,
        omega_bound: (k1 - r).max(1),
        omega_fixed: p.omega_fixed().ok(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::circle_bundle_attaching_words;
    use crate::word::{Alphabet, Word};
    use rand::SeedableRng;

    #[test]
    fn single_events() {
        let r = HandleSequence::parse("h0\nh0\nh1 +g @c1\nh1 merge @c1 @c2").unwrap().run().unwrap();
        assert!(!r.closed);
        assert_eq!(r.final_state.genus(1), Some(1));
        assert_eq!(r.graph.degrees()[3], 2);
        let r = HandleSequence::parse("h0\nh0\nh1 +g @c1\nh1 merge @c1 @c2\nh2 -g @c1\nh3 @c1")
            .unwrap()
            .run()
            .unwrap();
        assert!(r.closed);
        assert_eq!(r.graph.degrees()[3], 3);
        let r = HandleSequence::parse("h0\nh1 +g @c1\nh1 +g @c1\nh2 split @c1 (1,1)").unwrap().run().unwrap();
        assert_eq!(r.final_state.components().collect::<Vec<_>>(), vec![(1, 1), (2, 1)]);
        assert_eq!(r.graph.indices()[3], 2);
        assert_eq!(r.final_state.closing_cost(), 4);
    }

    #[test]
    fn invalid_events_report_state() {
        let e = HandleSequence::parse("h0\nh2 -g @c1").unwrap().run().unwrap_err();
        match e {
            Error::InvalidEvent { event, state, .. } => {
                assert_eq!(event, 2);
                assert_eq!(state, "{c1: genus 0}");
            }
            e => panic!("{e:?}"),
        }
        assert!(HandleSequence::parse("h0\nh1 +g @c1\nh3 @c1").unwrap().run().is_err());
        assert!(HandleSequence::parse("h0\nh1 +g @c2").unwrap().run().is_err());
        assert!(HandleSequence::parse("h0\nh1 +g @c1\nh2 split @c1 (1,1)").unwrap().run().is_err());
        assert!(HandleSequence::parse("h4").is_err());
        assert!(HandleSequence::parse("h1 +g c1").is_err());
    }

    #[test]
    fn script_roundtrip() {
        let s = circle_bundle_seq(2, -1).unwrap();
        let text = s.to_script();
        assert!(text.contains("h2 split @c1 (2,1)"));
        assert_eq!(HandleSequence::parse(&format!("# bundle\n{text}")).unwrap(), s);
    }

    #[test]
    fn builders() {
        for g in 0..5 {
            let r = ordered(g).run().unwrap();
            assert!(r.closed);
            assert_eq!((r.delta2(), r.cycle_rank().unwrap()), (2 * g as usize, 0));
        }
        let r = s2xs1().run().unwrap();
        assert_eq!((r.delta2(), r.cycle_rank().unwrap()), (0, 1));
        assert_eq!(r.graph.index_sequence(), vec![0, 2, 1, 3]);
        for g in 1..=6u32 {
            let r = circle_bundle_seq(g, 1).unwrap().run().unwrap();
            let g = g as usize;
            assert_eq!(r.k, [1, 2 * g + 1, 2 * g + 1, 1]);
            assert_eq!(r.delta2(), 2 * g + 2);
            assert_eq!(r.delta3(), 2 * g);
            assert_eq!(r.cycle_rank().unwrap(), g);
        }
        for k1 in 0..=6 {
            for r in 0..=k1 {
                let run = canonical_sequence(k1, r).unwrap().run().unwrap();
                assert_eq!(run.delta2(), 2 * (k1 - r) as usize);
                assert_eq!(run.cycle_rank().unwrap(), r as usize);
                assert_eq!(run.graph.canonical_form().unwrap(), run.graph);
            }
        }
        assert!(canonical_sequence(2, 3).is_err());
    }

    #[test]
    fn connected_sums() {
        let s = connected_sum(&s2xs1(), &s2xs1()).unwrap();
        let r = s.run().unwrap();
        assert!(r.closed);
        assert_eq!((r.cycle_rank().unwrap(), r.delta2()), (2, 0));
        let a = circle_bundle_seq(2, 0).unwrap();
        let b = ordered(3);
        let ra = a.run().unwrap();
        let rb = b.run().unwrap();
        let rs = connected_sum(&a, &b).unwrap().run().unwrap();
        assert_eq!(rs.delta2(), ra.delta2() + rb.delta2());
        assert_eq!(rs.delta3(), ra.delta3() + rb.delta3());
        assert_eq!(rs.cycle_rank().unwrap(), ra.cycle_rank().unwrap() + rb.cycle_rank().unwrap());
    }

    #[test]
    fn random_sequences_close() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let s = random_closed_sequence(&mut rng, 40);
            assert!(s.len() <= 40);
            let r = s.run().unwrap();
            assert!(r.closed);
            assert!(r.graph.is_connected());
            assert_eq!(r.census.euler_char(), 0);
        }
    }

    #[test]
    fn omega_windows_for_bundle() {
        for g in 1..=3u32 {
            for e in [-1i64, 0, 2] {
                let (al, words) = circle_bundle_attaching_words(g as usize, e).unwrap();
                let p = Presentation::heegaard_presentation(al, words).unwrap();
                let c = window_omega_consistency(&circle_bundle_seq(g, e).unwrap(), &p).unwrap();
                assert!(c.pass, "{c:?}");
                assert_eq!(c.omega_bound, g as usize + 1);
                assert!(c.omega_fixed.unwrap() <= c.omega_bound);
            }
        }
    }

    #[test]
    fn omega_windows_vacuous_and_violated() {
        let al = Alphabet::numbered("x", 2);
        let p = Presentation::new(al.clone(), vec![Word::gen(0).mul(&Word::gen(1)), Word::gen(1)]).unwrap();
        assert!(window_omega_consistency(&ordered(2), &p).unwrap().pass);
        // first 2-handle of canonical_sequence(2, 1) sees one 1-handle
        let c = window_omega_consistency(&canonical_sequence(2, 1).unwrap(), &p).unwrap();
        assert!(!c.pass);
        assert!(!c.windows[0].ok);
        assert!(window_omega_consistency(&ordered(3), &p).is_err());
    }
}
