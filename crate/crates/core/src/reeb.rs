//! Combinatorial Reeb graphs of simple Morse functions.
//!
//! Vertices are listed in increasing critical value; each carries a Morse
//! index. Edges run from a lower vertex to a higher one and may be parallel.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::bounds::{estimate, ManifoldProfile};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphData", into = "GraphData")]
pub struct ReebGraph {
    dim: u32,
    indices: Vec<u8>,
    edges: Vec<(usize, usize)>,
    complete: bool,
}

#[derive(Serialize, Deserialize)]
struct VertexData {
    index: u8,
}

#[derive(Serialize, Deserialize)]
struct GraphData {
    dim: u32,
    vertices: Vec<VertexData>,
    edges: Vec<[usize; 2]>,
    #[serde(default = "yes", skip_serializing_if = "is_true")]
    complete: bool,
}

fn yes() -> bool {
    true
}

fn is_true(b: &bool) -> bool {
    *b
}

impl TryFrom<GraphData> for ReebGraph {
    type Error = Error;

    fn try_from(d: GraphData) -> Result<Self> {
        let indices = d.vertices.iter().map(|v| v.index).collect();
        let edges = d.edges.iter().map(|e| (e[0], e[1])).collect();
        if d.complete {
            ReebGraph::new(d.dim, indices, edges)
        } else {
            ReebGraph::new_open(d.dim, indices, edges)
        }
    }
}

impl From<ReebGraph> for GraphData {
    fn from(g: ReebGraph) -> Self {
        GraphData {
            dim: g.dim,
            vertices: g.indices.iter().map(|&index| VertexData { index }).collect(),
            edges: g.edges.iter().map(|&(u, v)| [u, v]).collect(),
            complete: g.complete,
        }
    }
}

/// Allowed (in, out) degree patterns for a vertex of the given index.
fn patterns(dim: u32, index: u8) -> Vec<(usize, usize)> {
    let n = dim as u8;
    let mut p = Vec::new();
    if index == 0 {
        p.push((0, 1));
    }
    if index == n {
        p.push((1, 0));
    }
    if index >= 1 && index < n {
        p.push((1, 1));
        if index == 1 {
            p.push((2, 1));
        }
        if index == n - 1 {
            p.push((1, 2));
        }
    }
    p
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    /// `delta[k]` = number of vertices of degree `k`.
    pub delta: Vec<usize>,
    /// `k[i]` = number of vertices of Morse index `i`.
    pub k: Vec<usize>,
    pub max_degree: usize,
}

impl Census {
    pub fn delta(&self, d: usize) -> usize {
        self.delta.get(d).copied().unwrap_or(0)
    }

    pub fn k(&self, i: usize) -> usize {
        self.k.get(i).copied().unwrap_or(0)
    }

    /// Alternating sum of index counts.
    pub fn euler_char(&self) -> i64 {
        self.k
            .iter()
            .enumerate()
            .map(|(i, &c)| if i % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiCheck {
    pub cycle_rank: i64,
    /// Twice the value predicted from extremum count and `Δ₃`.
    pub predicted_twice: i64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Realization {
    Obstructed(Vec<String>),
    NotObstructed,
    InsufficientData(Vec<String>),
}

impl ReebGraph {
    /// A complete graph: every vertex has its full set of edges.
    pub fn new(dim: u32, indices: Vec<u8>, edges: Vec<(usize, usize)>) -> Result<Self> {
        Self::build(dim, indices, edges, true)
    }

    /// A graph cut off at a regular level: upper edges may still be missing.
    pub fn new_open(dim: u32, indices: Vec<u8>, edges: Vec<(usize, usize)>) -> Result<Self> {
        Self::build(dim, indices, edges, false)
    }

    fn build(dim: u32, indices: Vec<u8>, mut edges: Vec<(usize, usize)>, complete: bool) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParameter("dimension must be >= 2".into()));
        }
        let nv = indices.len();
        for &(u, v) in &edges {
            if u >= nv || v >= nv {
                return Err(Error::InvalidGraph {
                    vertex: u.max(v),
                    msg: format!("edge ({u},{v}) references a missing vertex"),
                });
            }
            if u >= v {
                return Err(Error::InvalidGraph {
                    vertex: u,
                    msg: format!("edge ({u},{v}) does not increase"),
                });
            }
        }
        edges.sort_unstable();
        let g = ReebGraph {
            dim,
            indices,
            edges,
            complete,
        };
        let (ins, outs) = g.in_out();
        for v in 0..nv {
            let idx = g.indices[v];
            if idx as u32 > dim {
                return Err(Error::InvalidGraph {
                    vertex: v,
                    msg: format!("index {idx} exceeds dimension {dim}"),
                });
            }
            if ins[v] + outs[v] > 3 {
                return Err(Error::InvalidGraph {
                    vertex: v,
                    msg: format!("degree {} exceeds 3", ins[v] + outs[v]),
                });
            }
            let ok = patterns(dim, idx)
                .iter()
                .any(|&(i, o)| ins[v] == i && if complete { outs[v] == o } else { outs[v] <= o });
            if !ok {
                return Err(Error::InvalidGraph {
                    vertex: v,
                    msg: format!("index {idx} with in-degree {} and out-degree {}", ins[v], outs[v]),
                });
            }
        }
        Ok(g)
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn indices(&self) -> &[u8] {
        &self.indices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn vertex_count(&self) -> usize {
        self.indices.len()
    }

    fn in_out(&self) -> (Vec<usize>, Vec<usize>) {
        let mut ins = vec![0; self.indices.len()];
        let mut outs = vec![0; self.indices.len()];
        for &(u, v) in &self.edges {
            outs[u] += 1;
            ins[v] += 1;
        }
        (ins, outs)
    }

    pub fn degrees(&self) -> Vec<usize> {
        let (ins, outs) = self.in_out();
        ins.iter().zip(&outs).map(|(a, b)| a + b).collect()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.indices.len();
        if n == 0 {
            return false;
        }
        let mut uf: Vec<usize> = (0..n).collect();
        fn find(uf: &mut [usize], mut x: usize) -> usize {
            while uf[x] != x {
                uf[x] = uf[uf[x]];
                x = uf[x];
            }
            x
        }
        let mut parts = n;
        for &(u, v) in &self.edges {
            let (a, b) = (find(&mut uf, u), find(&mut uf, v));
            if a != b {
                uf[a] = b;
                parts -= 1;
            }
        }
        parts == 1
    }

    pub fn cycle_rank(&self) -> Result<usize> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(self.edges.len() + 1 - self.indices.len())
    }

    pub fn degree_census(&self) -> Result<Census> {
        let degs = self.degrees();
        let max_degree = degs.iter().copied().max().unwrap_or(0);
        let mut delta = vec![0; max_degree.max(3) + 1];
        for &d in &degs {
            delta[d] += 1;
        }
        let mut k = vec![0; self.dim as usize + 1];
        for &i in &self.indices {
            k[i as usize] += 1;
        }
        if self.dim == 3 {
            if let Some(v) = degs.iter().position(|&d| d > 3) {
                return Err(Error::InvalidGraph {
                    vertex: v,
                    msg: "degree exceeds 3".into(),
                });
            }
            if self.complete && delta[2] + delta[3] != k[1] + k[2] {
                let v = (0..degs.len())
                    .find(|&v| (degs[v] >= 2) != (1..=2).contains(&self.indices[v]))
                    .unwrap_or(0);
                return Err(Error::InvalidGraph {
                    vertex: v,
                    msg: "interior vertex count does not match index-1 and index-2 count".into(),
                });
            }
        }
        Ok(Census { delta, k, max_degree })
    }

    pub fn delta2(&self) -> usize {
        self.degrees().iter().filter(|&&d| d == 2).count()
    }

    pub fn delta3(&self) -> usize {
        self.degrees().iter().filter(|&&d| d == 3).count()
    }

    /// Compares the cycle rank with `1 - (k₀ + k_n)/2 + Δ₃/2`.
    pub fn betti_identity_check(&self) -> Result<BettiCheck> {
        let b = self.cycle_rank()? as i64;
        let c = self.degree_census()?;
        let predicted_twice = 2 - (c.k(0) + c.k(self.dim as usize)) as i64 + c.delta(3) as i64;
        Ok(BettiCheck {
            cycle_rank: b,
            predicted_twice,
            pass: 2 * b == predicted_twice,
        })
    }

    pub fn parity_check(&self, euler_char: i64) -> bool {
        (self.delta2() as i64 - euler_char).rem_euclid(2) == 0
    }

    /// Morse indices in critical-value order.
    pub fn index_sequence(&self) -> Vec<u8> {
        self.indices.clone()
    }

    /// Cancels extremum/saddle pairs until one minimum and one maximum
    /// remain. A source is cancellable when the path out of it through
    /// degree-2 vertices ends at a merge; that path's degree-2 vertices are
    /// kept and spliced onto the merge's other strands. Sinks dually.
    pub fn reduce_extrema(&self) -> Result<ReebGraph> {
        self.cycle_rank()?;
        let top = self.dim as u8;
        let mut idx = self.indices.clone();
        let mut edges = self.edges.clone();
        loop {
            let count = |idx: &[u8], i: u8| idx.iter().filter(|&&x| x == i).count();
            if count(&idx, 0) <= 1 && count(&idx, top) <= 1 {
                break;
            }
            if count(&idx, 0) > 1 {
                if let Some(next) = cancel_source(&idx, &edges) {
                    (idx, edges) = next;
                    continue;
                }
            }
            if count(&idx, top) > 1 {
                if let Some(next) = cancel_sink(&idx, &edges) {
                    (idx, edges) = next;
                    continue;
                }
            }
            return Err(Error::StuckExtrema(format!(
                "{} minima and {} maxima remain",
                count(&idx, 0),
                count(&idx, top)
            )));
        }
        ReebGraph::new(self.dim, idx, edges)
    }

    /// For dim 3 with one minimum and one maximum: moves every degree-2
    /// index-1 vertex directly above the minimum and every degree-2 index-2
    /// vertex directly below the maximum. Other vertices keep their order.
    pub fn canonical_form(&self) -> Result<ReebGraph> {
        if self.dim != 3 {
            return Err(Error::Precondition("canonical form needs dimension 3".into()));
        }
        let c = self.degree_census()?;
        if !self.complete || c.k(0) != 1 || c.k(3) != 1 {
            return Err(Error::Precondition(
                "canonical form needs a complete graph with one minimum and one maximum".into(),
            ));
        }
        self.cycle_rank()?;
        let degs = self.degrees();
        let n = self.indices.len();
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(u, v) in &self.edges {
            succ[u].push(v);
        }
        let lows = (0..n).filter(|&v| degs[v] == 2 && self.indices[v] == 1).count();
        let highs = (0..n).filter(|&v| degs[v] == 2 && self.indices[v] == 2).count();
        let kept: Vec<usize> = (0..n).filter(|&v| degs[v] != 2).collect();
        // smoothed edges between kept vertices
        let mut smooth = Vec::new();
        for &u in &kept {
            for &s in &succ[u] {
                let mut v = s;
                while degs[v] == 2 {
                    v = succ[v][0];
                }
                smooth.push((u, v));
            }
        }
        let min = kept[0];
        let max = *kept.last().expect("maximum present");
        debug_assert_eq!(self.indices[min], 0);
        debug_assert_eq!(self.indices[max], 3);
        // layout: min, lows, middle, highs, max
        let mut pos = vec![usize::MAX; n];
        let mut indices = vec![0u8];
        pos[min] = 0;
        indices.extend(std::iter::repeat_n(1, lows));
        for &v in &kept[1..kept.len() - 1] {
            pos[v] = indices.len();
            indices.push(self.indices[v]);
        }
        indices.extend(std::iter::repeat_n(2, highs));
        pos[max] = indices.len();
        indices.push(3);
        let low_ids: Vec<usize> = (1..=lows).collect();
        let high_start = pos[max] - highs;
        let high_ids: Vec<usize> = (high_start..pos[max]).collect();

        let mut edges = Vec::new();
        let mut min_out_done = false;
        let mut max_in_done = false;
        for (u, v) in smooth {
            let (mut a, b) = (pos[u], pos[v]);
            let mut path = Vec::new();
            if u == min && !min_out_done {
                min_out_done = true;
                path.extend(&low_ids);
            }
            if v == max && !max_in_done {
                max_in_done = true;
                path.extend(&high_ids);
            }
            for p in path {
                edges.push((a, p));
                a = p;
            }
            edges.push((a, b));
        }
        ReebGraph::new(3, indices, edges)
    }

    pub fn to_dot(&self) -> String {
        let degs = self.degrees();
        let mut s = String::from("digraph reeb {\n  rankdir=BT;\n");
        for (v, &i) in self.indices.iter().enumerate() {
            let _ = writeln!(s, "  v{v} [label=\"v{v}: idx={i} deg={}\"];", degs[v]);
        }
        for &(u, v) in &self.edges {
            let _ = writeln!(s, "  v{u} -> v{v};");
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serializes")
    }

    pub fn from_json(src: &str) -> Result<Self> {
        Ok(serde_json::from_str(src)?)
    }
}

type Parts = (Vec<u8>, Vec<(usize, usize)>);

fn adjacency(n: usize, edges: &[(usize, usize)]) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let mut succ = vec![Vec::new(); n];
    let mut pred = vec![Vec::new(); n];
    for &(u, v) in edges {
        succ[u].push(v);
        pred[v].push(u);
    }
    (succ, pred)
}

/// Drops `removed`, moves `chain` to sit right after (or before) `anchor`,
/// and renumbers.
fn rebuild(
    idx: &[u8],
    edges: &[(usize, usize)],
    removed: &[usize],
    chain: &[usize],
    anchor: usize,
    after: bool,
) -> Parts {
    let mut order = Vec::with_capacity(idx.len());
    for v in 0..idx.len() {
        if removed.contains(&v) || chain.contains(&v) {
            continue;
        }
        if v == anchor && !after {
            order.extend_from_slice(chain);
        }
        order.push(v);
        if v == anchor && after {
            order.extend_from_slice(chain);
        }
    }
    let mut pos = vec![usize::MAX; idx.len()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let new_idx = order.iter().map(|&v| idx[v]).collect();
    let new_edges = edges.iter().map(|&(u, v)| (pos[u], pos[v])).collect();
    (new_idx, new_edges)
}

fn cancel_source(idx: &[u8], edges: &[(usize, usize)]) -> Option<Parts> {
    let n = idx.len();
    let (succ, pred) = adjacency(n, edges);
    let deg = |v: usize| succ[v].len() + pred[v].len();
    for s in (0..n).filter(|&v| idx[v] == 0 && pred[v].is_empty()) {
        let mut chain = Vec::new();
        let mut m = succ[s][0];
        while deg(m) == 2 && succ[m].len() == 1 {
            chain.push(m);
            m = succ[m][0];
        }
        if !(pred[m].len() == 2 && succ[m].len() == 1) {
            continue;
        }
        let last = *chain.last().unwrap_or(&s);
        let mut others = pred[m].clone();
        let i = others.iter().position(|&x| x == last).expect("path enters merge");
        others.remove(i);
        let u = others[0];
        let w = succ[m][0];
        let mut kept: Vec<(usize, usize)> = edges
            .iter()
            .copied()
            .filter(|&(a, b)| a != s && b != m && a != m)
            .collect();
        match (chain.first(), chain.last()) {
            (Some(&c1), Some(&ck)) => {
                kept.push((u, c1));
                kept.push((ck, w));
            }
            _ => kept.push((u, w)),
        }
        return Some(rebuild(idx, &kept, &[s, m], &chain, u, true));
    }
    None
}

fn cancel_sink(idx: &[u8], edges: &[(usize, usize)]) -> Option<Parts> {
    let n = idx.len();
    let (succ, pred) = adjacency(n, edges);
    let deg = |v: usize| succ[v].len() + pred[v].len();
    let top = *idx.iter().max()?;
    for t in (0..n).rev().filter(|&v| idx[v] == top && succ[v].is_empty() && pred[v].len() == 1) {
        let mut chain = Vec::new();
        let mut sp = pred[t][0];
        while deg(sp) == 2 && pred[sp].len() == 1 {
            chain.push(sp);
            sp = pred[sp][0];
        }
        chain.reverse();
        if !(pred[sp].len() == 1 && succ[sp].len() == 2) {
            continue;
        }
        let first = *chain.first().unwrap_or(&t);
        let mut others = succ[sp].clone();
        let i = others.iter().position(|&x| x == first).expect("path leaves split");
        others.remove(i);
        let w = others[0];
        let u = pred[sp][0];
        let mut kept: Vec<(usize, usize)> = edges
            .iter()
            .copied()
            .filter(|&(a, b)| b != t && a != sp && b != sp)
            .collect();
        match (chain.first(), chain.last()) {
            (Some(&c1), Some(&ck)) => {
                kept.push((u, c1));
                kept.push((ck, w));
            }
            _ => kept.push((u, w)),
        }
        return Some(rebuild(idx, &kept, &[sp, t], &chain, w, false));
    }
    None
}

/// Checks a graph against what is certified about a manifold: the lower
/// bound on `Δ₂`, the corank bound on the cycle rank, and parity.
pub fn realization_obstruction(g: &ReebGraph, p: &ManifoldProfile) -> Result<Realization> {
    if g.dim != p.dim {
        return Err(Error::DimensionMismatch(g.dim, p.dim));
    }
    let c = g.degree_census()?;
    if c.max_degree > 3 {
        return Err(Error::Precondition("vertex degree exceeds 3".into()));
    }
    let d2 = c.delta(2) as i64;
    let mut reasons = Vec::new();
    let est = estimate(p);
    if d2 < est.lower {
        reasons.push(format!("Δ₂ = {d2} is below the certified lower bound {}", est.lower));
    }
    let mut missing = Vec::new();
    match p.pi1_corank {
        Some(corank) => {
            let b = g.cycle_rank()? as u64;
            if b > corank {
                reasons.push(format!("cycle rank {b} exceeds corank {corank}"));
            }
        }
        None => missing.push("pi1_corank".to_string()),
    }
    if !g.parity_check(p.euler_char) {
        reasons.push(format!("Δ₂ = {d2} has the wrong parity for χ = {}", p.euler_char));
    }
    Ok(if !reasons.is_empty() {
        Realization::Obstructed(reasons)
    } else if !missing.is_empty() {
        Realization::InsufficientData(missing)
    } else {
        Realization::NotObstructed
    })
}

/// Cycle-space rank from a spanning forest, independent of the vertex/edge count.
pub fn cycle_rank_by_spanning_tree(g: &ReebGraph) -> usize {
    let n = g.vertex_count();
    let mut adj: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        adj.entry(u).or_default().push((v, e));
        adj.entry(v).or_default().push((u, e));
    }
    let mut seen = vec![false; n];
    let mut tree_edges = vec![false; g.edges().len()];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut stack = vec![root];
        while let Some(x) = stack.pop() {
            for &(y, e) in adj.get(&x).map(Vec::as_slice).unwrap_or(&[]) {
                if !seen[y] {
                    seen[y] = true;
                    tree_edges[e] = true;
                    stack.push(y);
                }
            }
        }
    }
    tree_edges.iter().filter(|&&t| !t).count()
}
