//! Acceptance suite. Runs as a plain binary so every criterion prints one
//! PASS/FAIL line; the process exits non-zero if any criterion fails.
//!
//! Each criterion compares library output with an oracle written here from
//! scratch: words are `Vec<i8>` with letters `±(gen + 1)`.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use reebtop::bounds::{self, estimate, ManifoldProfile};
use reebtop::closure::{self, member_bounded, Certificate, ClosureQuery, ClosureVerdict};
use reebtop::handles::{self, window_omega_consistency};
use reebtop::nielsen::{is_basis, WordTuple};
use reebtop::presentation::{Presentation, DEFAULT_SEARCH_BUDGET};
use reebtop::reeb::ReebGraph;
use reebtop::snf::smith_normal_form;
use reebtop::word::{Alphabet, Word};

const SEED: u64 = 0x00ac_ce55;

const LIMIT_OMEGA: Duration = Duration::from_secs(1);
const LIMIT_SIMULATOR: Duration = Duration::from_secs(1);
const LIMIT_RANDOM_SEQUENCES: Duration = Duration::from_secs(10);
/// Criteria without a stated time bound still get a ceiling so a hang fails.
const LIMIT_DEFAULT: Duration = Duration::from_secs(120);

const RANDOM_SEQUENCES: usize = 500;
const MAX_EVENTS: usize = 40;
const PROBE_RELATORS: usize = 20;
const PROBE_SAMPLES: usize = 1000;
const SCRAMBLED_BASES: usize = 200;
const ORACLE_CASES: usize = 20;
const FAMILY_SIZE: usize = 50;

type W = Vec<i8>;

fn reduce(w: &[i8]) -> W {
    let mut out: W = Vec::with_capacity(w.len());
    for &x in w {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

fn inv(w: &[i8]) -> W {
    w.iter().rev().map(|x| -x).collect()
}

fn cat(parts: &[&[i8]]) -> W {
    reduce(&parts.concat())
}

fn to_word(w: &[i8]) -> Word {
    Word::from_signed(&w.iter().map(|&x| x as i64).collect::<Vec<_>>())
}

fn from_word(w: &Word) -> W {
    w.letters()
        .iter()
        .map(|l| if l.inv { -(l.gen as i8 + 1) } else { l.gen as i8 + 1 })
        .collect()
}

/// All reduced words of length `<= max` over `rank` generators.
fn all_words(rank: i8, max: usize) -> Vec<W> {
    let letters: Vec<i8> = (1..=rank).flat_map(|g| [g, -g]).collect();
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..max {
        let mut next = Vec::new();
        for w in &layer {
            for &l in &letters {
                if w.last() != Some(&-l) {
                    let mut v: W = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn random_reduced(rng: &mut ChaCha8Rng, rank: i8, len: usize) -> W {
    let mut w = W::new();
    while w.len() < len {
        let g = rng.gen_range(1..=rank);
        let l = if rng.gen_bool(0.5) { g } else { -g };
        if w.last() != Some(&-l) {
            w.push(l);
        }
    }
    w
}

fn cyclically_reduced(w: &[i8]) -> bool {
    reduce(w) == w && (w.len() < 2 || w[0] != -w[w.len() - 1])
}

fn exponent_vector(w: &[i8], rank: usize) -> Vec<i64> {
    let mut v = vec![0; rank];
    for &x in w {
        v[x.unsigned_abs() as usize - 1] += x.signum() as i64;
    }
    v
}

/// `v` lies in the row lattice iff appending it changes neither the rank nor
/// the product of the nonzero invariant factors.
fn lattice_contains(rows: &[Vec<i64>], v: &[i64]) -> bool {
    let key = |m: &[Vec<i64>]| {
        let s = smith_normal_form(m);
        let nz: Vec<i64> = s.factors.iter().copied().filter(|&d| d != 0).collect();
        (nz.len(), nz.iter().map(|d| d.abs() as i128).product::<i128>())
    };
    let mut ext = rows.to_vec();
    ext.push(v.to_vec());
    key(rows) == key(&ext)
}

/// Ω straight from its definition, for relators given by their supports.
fn omega_by_definition(n: usize, needs: &[usize]) -> usize {
    (1..=n)
        .find(|&om| {
            let range = (n - om).min(needs.len());
            (0..range).all(|i| needs[i] <= om + i)
        })
        .unwrap_or(n)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..=p.len() {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

/// Minimum of Ω over every generator order and every relator order.
fn omega_min_brute(p: &Presentation) -> usize {
    let n = p.rank();
    let supports: Vec<BTreeSet<usize>> = p.relators().iter().map(|r| r.support()).collect();
    let rel_perms = permutations(supports.len());
    let mut best = n;
    for gp in permutations(n) {
        let mut pos = vec![0; n];
        for (k, &g) in gp.iter().enumerate() {
            pos[g] = k + 1;
        }
        let needs: Vec<usize> = supports
            .iter()
            .map(|s| s.iter().map(|&g| pos[g]).max().unwrap_or(0))
            .collect();
        for rp in &rel_perms {
            let ordered: Vec<usize> = rp.iter().map(|&j| needs[j]).collect();
            best = best.min(omega_by_definition(n, &ordered));
        }
    }
    best
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn run(n: usize, name: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let took = start.elapsed();
    let in_time = took <= limit;
    let pass = out.pass && in_time;
    println!(
        "criterion {n:>2} {name:<34} {}  {} [{:.2?} / limit {:?}]",
        if pass { "PASS" } else { "FAIL" },
        if in_time { out.detail } else { format!("{} (too slow)", out.detail) },
        took,
        limit
    );
    pass
}

fn omega_presentations() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for g in 1..=3usize {
        for e in [-1i64, 1] {
            let p = Presentation::circle_bundle_rank2g(g, e).unwrap();
            let full = p.relators().iter().all(|r| r.support().len() == 2 * g);
            let needs: Vec<usize> = p.relators().iter().map(|r| r.max_gen().map_or(0, |m| m + 1)).collect();
            let oracle = omega_by_definition(p.rank(), &needs);
            let om = p.omega_fixed().unwrap();
            ok &= full && om == 2 * g && oracle == 2 * g;
            notes.push(format!("Ω(g={g},e={e})={om}"));
        }
    }
    for g in 1..=2usize {
        for e in [-1i64, 1] {
            let p = Presentation::circle_bundle(g, e).unwrap();
            let s = p.omega_search(DEFAULT_SEARCH_BUDGET, SEED).unwrap();
            let witness = p.reordered(&s.witness).unwrap().omega_fixed().unwrap();
            let brute = omega_min_brute(&p);
            ok &= s.omega == 2 && s.certified && witness == 2 && brute == 2;
            notes.push(format!("search(g={g},e={e})={}{}", s.omega, if s.certified { "" } else { "?" }));
        }
    }
    Outcome { pass: ok, detail: notes.join(" ") }
}

fn abelianization() -> Outcome {
    let mut bad = Vec::new();
    let mut cases = 0;
    for g in 1..=4usize {
        for e in -5..=5i64 {
            cases += 1;
            let a = Presentation::circle_bundle(g, e).unwrap().abelianize();
            let (free, tors) = match e.abs() {
                0 => (2 * g + 1, vec![]),
                1 => (2 * g, vec![]),
                m => (2 * g, vec![m]),
            };
            if a.free_rank != free || a.torsion != tors {
                bad.push(format!("g={g},e={e}:{a}"));
            }
        }
    }
    Outcome {
        pass: bad.is_empty(),
        detail: if bad.is_empty() { format!("{cases} presentations") } else { bad.join(" ") },
    }
}

struct GraphFacts {
    k: [i64; 4],
    delta: [i64; 4],
    cycle_rank: i64,
    connected: bool,
}

fn graph_facts(g: &ReebGraph) -> GraphFacts {
    let n = g.indices().len();
    let mut deg = vec![0usize; n];
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for &(u, v) in g.edges() {
        deg[u] += 1;
        deg[v] += 1;
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        parent[a] = b;
    }
    let comps = (0..n).filter(|&x| find(&mut parent, x) == x).count();
    let mut k = [0i64; 4];
    for &i in g.indices() {
        k[i as usize] += 1;
    }
    let mut delta = [0i64; 4];
    for d in deg {
        delta[d.min(3)] += 1;
    }
    GraphFacts {
        k,
        delta,
        cycle_rank: g.edges().len() as i64 - n as i64 + comps as i64,
        connected: comps == 1,
    }
}

fn simulator() -> Outcome {
    let mut bad = Vec::new();
    for g in 1..=6i64 {
        for e in [-2, -1, 0, 1, 3] {
            let r = handles::circle_bundle_seq(g as u32, e).unwrap().run().unwrap();
            let f = graph_facts(&r.graph);
            let ok = r.closed
                && f.connected
                && f.cycle_rank == g
                && f.delta[2] == 2 * g + 2
                && f.delta[3] == 2 * g
                && f.k[1] == 2 * g + 1
                && f.k[2] == 2 * g + 1;
            if !ok {
                bad.push(format!("g={g},e={e}"));
            }
        }
    }
    Outcome {
        pass: bad.is_empty(),
        detail: if bad.is_empty() { "g = 1..6".into() } else { bad.join(" ") },
    }
}

fn random_sequences() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut bad = 0;
    let mut events = 0;
    for _ in 0..RANDOM_SEQUENCES {
        let s = handles::random_closed_sequence(&mut rng, MAX_EVENTS);
        events += s.len();
        let ok = s.len() <= MAX_EVENTS
            && match s.run() {
                Ok(r) => {
                    let f = graph_facts(&r.graph);
                    r.closed
                        && f.connected
                        && 2 * f.cycle_rank == 2 - (f.k[0] + f.k[3]) + f.delta[3]
                        && f.delta[2] + f.delta[3] == f.k[1] + f.k[2]
                        && f.k[0] - f.k[1] + f.k[2] - f.k[3] == 0
                        && f.delta[2] % 2 == 0
                }
                Err(_) => false,
            };
        if !ok {
            bad += 1;
        }
    }
    Outcome {
        pass: bad == 0,
        detail: format!("{RANDOM_SEQUENCES} sequences ({events} events), seed {SEED:#x}, {bad} failing"),
    }
}

fn bounds_table() -> Outcome {
    let mut bad = Vec::new();
    let mut rows = 0;
    let mut expect = |name: String, lower: i64, upper: Option<i64>| {
        rows += 1;
        let e = estimate(&bounds::lookup(&name).unwrap());
        let ok = e.lower == lower
            && match upper {
                Some(u) => e.upper == Some(u) && e.exact == (u == lower),
                None => true,
            };
        if !ok {
            bad.push(format!("{name}: {} {:?} exact={}", e.lower, e.upper, e.exact));
        }
    };
    for n in 3..=8i64 {
        expect(format!("rp({n})"), n - 1, None);
        expect(format!("cp({n})"), n - 1, None);
    }
    for n in 3..=6u32 {
        expect(format!("torus({n})"), (1i64 << n) - 4, None);
    }
    for (p, q) in [(2, 2), (2, 3), (3, 5), (4, 7)] {
        expect(format!("lens-sum({p},{q})"), 4, None);
    }
    for g in 1..=4i64 {
        for e in -5..=5i64 {
            if e.abs() != 1 {
                expect(format!("circle-bundle({g},{e})"), 2 * g + 2, Some(2 * g + 2));
            }
        }
        for e in [-1, 1] {
            expect(format!("circle-bundle({g},{e})"), (2 * g).max(4), Some(2 * g + 2));
        }
    }
    for g in 2..=5i64 {
        expect(format!("homology-sphere({g})"), 2 * g, Some(2 * g));
    }
    expect("heisenberg".into(), 4, Some(4));
    Outcome {
        pass: bad.is_empty(),
        detail: if bad.is_empty() { format!("{rows} rows") } else { bad.join("; ") },
    }
}

fn classification() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let mut bad = Vec::new();
    let mut seen = [0usize; 3];
    for i in 0..FAMILY_SIZE {
        let mut p: ManifoldProfile = bounds::s2xs1_sum(rng.gen_range(0..=3));
        let (mut lenses, mut others) = (0, 0);
        // first ten are pure sums, the next ten have exactly one lens summand
        let extra = match i {
            0..=9 => 0,
            10..=19 => 1,
            _ => rng.gen_range(1..=3),
        };
        for _ in 0..extra {
            let pick = if i < 20 { 0 } else { rng.gen_range(0..7) };
            let q = match pick {
                0 | 1 => {
                    lenses += 1;
                    bounds::lens(rng.gen_range(2..=9)).unwrap()
                }
                2 => {
                    others += 1;
                    bounds::heisenberg()
                }
                3 => {
                    others += 1;
                    let e = [-3, -2, 0, 2, 4][rng.gen_range(0..5)];
                    bounds::circle_bundle(rng.gen_range(1..=2), e).unwrap()
                }
                4 => {
                    others += 1;
                    bounds::homology_sphere(rng.gen_range(2..=3)).unwrap()
                }
                5 => bounds::s2xs1_sum(rng.gen_range(1..=2)),
                _ => {
                    others += 1;
                    bounds::circle_bundle(1, 0).unwrap()
                }
            };
            p = bounds::connected_sum(&p, &q).unwrap();
        }
        let e = estimate(&p);
        let want0 = lenses == 0 && others == 0;
        let want2 = lenses == 1 && others == 0;
        seen[if want0 { 0 } else if want2 { 1 } else { 2 }] += 1;
        if want0 != (e.exact && e.lower == 0) || want2 != (e.exact && e.lower == 2) {
            bad.push(format!("{}: {e}", p.name));
        }
    }
    Outcome {
        pass: bad.is_empty() && seen.iter().all(|&c| c > 0),
        detail: if bad.is_empty() {
            format!("{FAMILY_SIZE} profiles: {} S²×S¹ sums, {} with one lens, {} other", seen[0], seen[1], seen[2])
        } else {
            bad.join("; ")
        },
    }
}

fn closure_vs_brute_force() -> Outcome {
    let rel: W = vec![1, 2, -1, -2];
    let rel_inv = inv(&rel);
    let conjugators = all_words(2, 2);
    let factors: HashSet<W> = conjugators
        .iter()
        .flat_map(|t| [cat(&[t, &rel, &inv(t)]), cat(&[t, &rel_inv, &inv(t)])])
        .collect();
    let mut reachable: HashSet<W> = HashSet::from([vec![]]);
    let mut layer = reachable.clone();
    for _ in 0..3 {
        let mut next = HashSet::new();
        for w in &layer {
            for f in &factors {
                next.insert(cat(&[w, f]));
            }
        }
        reachable.extend(next.iter().cloned());
        layer = next;
    }

    let lattice_rows = vec![exponent_vector(&rel, 2)];
    let relators = vec![to_word(&rel)];
    let targets = all_words(2, 6);
    let mut tally: HashMap<&str, usize> = HashMap::new();
    let mut bad = Vec::new();
    for t in &targets {
        let q = ClosureQuery::new(relators.clone(), to_word(t), 2, 3).unwrap();
        let v = member_bounded(&q);
        let brute = reachable.contains(t);
        let in_lattice = lattice_contains(&lattice_rows, &exponent_vector(t, 2));
        let ok = match &v {
            ClosureVerdict::Member(w) => {
                *tally.entry("member").or_default() += 1;
                brute && w.evaluate(&relators).map(|x| from_word(&x)) == Ok(t.clone())
            }
            ClosureVerdict::NotMember(Certificate::Abelianization) => {
                *tally.entry("abelian").or_default() += 1;
                !brute && !in_lattice
            }
            ClosureVerdict::NotMember(Certificate::Exhaustive) => false,
            ClosureVerdict::Unknown(_) => {
                *tally.entry("unknown").or_default() += 1;
                !brute && in_lattice
            }
        };
        if !ok {
            bad.push(format!("{t:?}: {v:?}"));
        }
    }
    Outcome {
        pass: bad.is_empty(),
        detail: format!(
            "{} targets: {} member, {} abelian, {} unknown{}",
            targets.len(),
            tally.get("member").unwrap_or(&0),
            tally.get("abelian").unwrap_or(&0),
            tally.get("unknown").unwrap_or(&0),
            if bad.is_empty() { String::new() } else { format!("; disagree {}", bad.len()) }
        ),
    }
}

fn support_probes() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 8);
    let mut ok = true;
    let mut found = 0;
    for i in 0..PROBE_RELATORS {
        let rank: i8 = if i % 2 == 0 { 2 } else { 3 };
        let r = loop {
            let len = rng.gen_range(1..=8);
            let w = random_reduced(&mut rng, rank, len);
            if cyclically_reduced(&w) {
                break w;
            }
        };
        let gen = (r.choose(&mut rng).unwrap().unsigned_abs() - 1) as usize;
        let rep = closure::freiheitssatz_probe(&to_word(&r), gen, rank as usize, PROBE_SAMPLES, 3, 4, SEED + i as u64)
            .unwrap();
        ok &= rep.counterexamples.is_empty() && rep.samples == PROBE_SAMPLES;
    }
    let mut corrupted_ok = true;
    for i in 0..5 {
        // relator over a, b only; the probe is pointed at c
        let r = loop {
            let len = rng.gen_range(2..=8);
            let w = random_reduced(&mut rng, 2, len);
            if cyclically_reduced(&w) {
                break w;
            }
        };
        let rep = closure::support_probe(&to_word(&r), 2, 3, PROBE_SAMPLES, 3, 4, SEED + i).unwrap();
        found += rep.counterexamples.len();
        corrupted_ok &= !rep.counterexamples.is_empty()
            && rep
                .counterexamples
                .iter()
                .all(|w| !w.is_empty() && !from_word(w).iter().any(|x| x.abs() == 3));
    }
    Outcome {
        pass: ok && corrupted_ok,
        detail: format!(
            "{PROBE_RELATORS} relators clean: {ok}; corrupted probe found {found} counterexamples"
        ),
    }
}

fn scramble(rng: &mut ChaCha8Rng, rank: usize, moves: usize) -> Vec<W> {
    let mut t: Vec<W> = (1..=rank as i8).map(|g| vec![g]).collect();
    for _ in 0..moves {
        let i = rng.gen_range(0..rank);
        let j = (i + rng.gen_range(1..rank)) % rank;
        let by = if rng.gen_bool(0.5) { t[j].clone() } else { inv(&t[j]) };
        t[i] = match rng.gen_range(0..3) {
            0 => cat(&[&t[i], &by]),
            1 => cat(&[&by, &t[i]]),
            _ => inv(&t[i]),
        };
        if rng.gen_bool(0.2) {
            t.swap(i, j);
        }
    }
    t
}

/// Folds the wedge of loops spelled by `tuple`; the subgroup is the whole free
/// group iff the result is one vertex carrying a loop for every generator.
fn stallings_full(tuple: &[W], rank: usize) -> bool {
    let mut edges: Vec<(usize, i8, usize)> = Vec::new();
    let mut next = 1;
    for w in tuple {
        let w = reduce(w);
        if w.is_empty() {
            continue;
        }
        let mut at = 0;
        for (k, &x) in w.iter().enumerate() {
            let to = if k + 1 == w.len() {
                0
            } else {
                next += 1;
                next - 1
            };
            if x > 0 {
                edges.push((at, x, to));
            } else {
                edges.push((to, -x, at));
            }
            at = to;
        }
    }
    let mut parent: Vec<usize> = (0..next).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    loop {
        let mut out: HashMap<(usize, i8), usize> = HashMap::new();
        let mut inc: HashMap<(usize, i8), usize> = HashMap::new();
        let mut merged = false;
        for &(u, l, v) in &edges {
            let (u, v) = (find(&mut parent, u), find(&mut parent, v));
            for (map, key, val) in [(&mut out, (u, l), v), (&mut inc, (v, l), u)] {
                match map.get(&key) {
                    Some(&w) if find(&mut parent, w) != find(&mut parent, val) => {
                        let (a, b) = (find(&mut parent, w), find(&mut parent, val));
                        parent[a.max(b)] = a.min(b);
                        merged = true;
                    }
                    Some(_) => {}
                    None => {
                        map.insert(key, val);
                    }
                }
            }
            if merged {
                break;
            }
        }
        if !merged {
            break;
        }
    }
    let verts: HashSet<usize> = (0..next).map(|x| find(&mut parent, x)).collect();
    let labels: HashSet<i8> = edges.iter().map(|e| e.1).collect();
    verts.len() == 1 && labels.len() == rank
}

/// Breadth-first enumeration of subgroup elements as products of at most
/// `depth` entries; reports whether every generator turned up.
fn enumeration_finds_generators(tuple: &[W], rank: usize, depth: usize) -> bool {
    let steps: Vec<W> = tuple.iter().flat_map(|w| [reduce(w), inv(w)]).collect();
    let mut seen: HashSet<W> = HashSet::from([vec![]]);
    let mut layer = vec![vec![]];
    for _ in 0..depth {
        let mut next = Vec::new();
        for w in &layer {
            for s in &steps {
                let p = cat(&[w, s]);
                if p.len() <= 12 && seen.insert(p.clone()) {
                    next.push(p);
                }
            }
        }
        layer = next;
    }
    (1..=rank as i8).all(|g| seen.contains(&vec![g]))
}

fn nielsen() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    let as_tuple = |t: &[W]| WordTuple::new(t.iter().map(|w| to_word(w)).collect());
    let mut scrambled_ok = 0;
    for _ in 0..SCRAMBLED_BASES {
        let rank = rng.gen_range(2..=4);
        let moves = rng.gen_range(1..=12);
        let t = scramble(&mut rng, rank, moves);
        if is_basis(&as_tuple(&t), rank).unwrap() {
            scrambled_ok += 1;
        }
    }
    let non_bases_ok = !is_basis(&as_tuple(&[vec![1, 1], vec![2]]), 2).unwrap()
        && !is_basis(&as_tuple(&[vec![1], vec![1]]), 2).unwrap();

    let mut oracle_bad = Vec::new();
    let mut positives = 0;
    for i in 0..ORACLE_CASES {
        let rank = 2 + i % 2;
        let t = if i < ORACLE_CASES / 2 {
            let moves = rng.gen_range(1..=3);
            scramble(&mut rng, rank, moves)
        } else {
            (0..rank)
                .map(|_| {
                    let len = rng.gen_range(1..=3);
                    random_reduced(&mut rng, rank as i8, len)
                })
                .collect()
        };
        let lib = is_basis(&as_tuple(&t), rank).unwrap();
        let folded = stallings_full(&t, rank);
        let enumerated = enumeration_finds_generators(&t, rank, 7);
        positives += lib as usize;
        if lib != folded || lib != enumerated {
            oracle_bad.push(format!("{t:?}: lib={lib} fold={folded} enum={enumerated}"));
        }
    }
    Outcome {
        pass: scrambled_ok == SCRAMBLED_BASES && non_bases_ok && oracle_bad.is_empty(),
        detail: format!(
            "{scrambled_ok}/{SCRAMBLED_BASES} scrambled bases, non-bases rejected: {non_bases_ok}, \
             oracle agrees on {}/{ORACLE_CASES} ({positives} bases){}",
            ORACLE_CASES - oracle_bad.len(),
            if oracle_bad.is_empty() { String::new() } else { format!(" {oracle_bad:?}") }
        ),
    }
}

fn omega_windows() -> Outcome {
    let mut bad = Vec::new();
    let mut cases = 0;
    for k1 in 1..=6usize {
        for r in 1..=k1 {
            let seq = handles::canonical_sequence(k1 as u32, r as u32).unwrap();
            // window of the j-th 2-handle = number of 1-handles attached before it
            let mut ones = 0;
            let mut windows = Vec::new();
            for e in &seq.events {
                match e.index() {
                    1 => ones += 1,
                    2 => windows.push(ones),
                    _ => {}
                }
            }
            let al = Alphabet::numbered("x", k1);
            let build = |widen: Option<usize>| {
                let rels = windows
                    .iter()
                    .enumerate()
                    .map(|(j, &w)| {
                        let width = w + usize::from(widen == Some(j));
                        to_word(&(1..=width as i8).collect::<Vec<_>>())
                    })
                    .collect();
                Presentation::new(al.clone(), rels).unwrap()
            };
            cases += 1;
            if !window_omega_consistency(&seq, &build(None)).unwrap().pass {
                bad.push(format!("k1={k1},r={r} respected"));
            }
            for (j, &w) in windows.iter().enumerate() {
                if w < k1 {
                    cases += 1;
                    if window_omega_consistency(&seq, &build(Some(j))).unwrap().pass {
                        bad.push(format!("k1={k1},r={r} widened {j}"));
                    }
                }
            }
        }
    }
    Outcome {
        pass: bad.is_empty(),
        detail: if bad.is_empty() { format!("{cases} presentations") } else { bad.join("; ") },
    }
}

fn main() {
    let results = [
        run(1, "omega of canonical presentations", LIMIT_OMEGA, omega_presentations),
        run(2, "abelianization", LIMIT_DEFAULT, abelianization),
        run(3, "simulator circle bundles", LIMIT_SIMULATOR, simulator),
        run(4, "random sequence identities", LIMIT_RANDOM_SEQUENCES, random_sequences),
        run(5, "bounds table", LIMIT_DEFAULT, bounds_table),
        run(6, "classification family", LIMIT_DEFAULT, classification),
        run(7, "closure oracle vs brute force", LIMIT_DEFAULT, closure_vs_brute_force),
        run(8, "support probe", LIMIT_DEFAULT, support_probes),
        run(9, "nielsen bases", LIMIT_DEFAULT, nielsen),
        run(10, "omega window mechanism", LIMIT_DEFAULT, omega_windows),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
