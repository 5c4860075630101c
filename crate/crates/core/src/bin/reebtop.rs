use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use reebtop::bounds::{self, ManifoldProfile, RingSelector};
use reebtop::closure::{self, member_bounded, ClosureQuery, ClosureVerdict};
use reebtop::handles::{self, HandleSequence};
use reebtop::nielsen::{is_basis, nielsen_reduce, WordTuple};
use reebtop::presentation::{split_top_level, Presentation, DEFAULT_SEARCH_BUDGET, DEFAULT_SEED};
use reebtop::reeb::{realization_obstruction, ReebGraph};
use reebtop::verify;
use reebtop::word::{Alphabet, Word};
use reebtop::{Error, Result};

#[derive(Parser)]
#[command(name = "reebtop", version, about = "Reeb graphs, presentations and degree-2 vertex bounds")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized procedures.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a word and show its cyclic core.
    Word {
        word: String,
        /// Comma-separated generator names (default: order of appearance).
        #[arg(long)]
        gens: Option<String>,
    },
    /// Ω of a presentation, for the given order or minimised over orders.
    Omega {
        #[command(flatten)]
        pres: PresentationArgs,
        #[arg(long)]
        search: bool,
        #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
        budget: u64,
    },
    /// Abelian invariants of a presentation.
    Abelianize {
        #[command(flatten)]
        pres: PresentationArgs,
    },
    /// Nielsen-reduce a tuple of words (entries separated by `;`).
    Nielsen {
        tuple: String,
        #[arg(long)]
        gens: Option<String>,
        /// Also decide whether the tuple is a basis of the free group of this rank.
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Bounded normal-closure membership, or a support probe with `--probe`.
    Closure {
        /// Comma-separated relators.
        #[arg(long)]
        relators: String,
        #[arg(long, required_unless_present = "probe")]
        target: Option<String>,
        #[arg(long)]
        gens: Option<String>,
        #[arg(long, default_value_t = 2)]
        radius: usize,
        #[arg(long, default_value_t = 3)]
        factors: usize,
        /// Generator whose presence the probe checks.
        #[arg(long)]
        probe: Option<String>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Replay a handle script or a named construction.
    Simulate {
        /// Script file (`-` for stdin).
        #[arg(long, conflicts_with = "builder")]
        script: Option<String>,
        #[arg(long, value_enum)]
        builder: Option<Builder>,
        #[arg(long, default_value_t = 1)]
        g: u32,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        e: i64,
        #[arg(long)]
        k1: Option<u32>,
        #[arg(long, default_value_t = 0)]
        r: u32,
        /// Print the Reeb graph as DOT.
        #[arg(long)]
        dot: bool,
        /// Print the handle script.
        #[arg(long)]
        print_script: bool,
    },
    /// Inspect a Reeb graph given as JSON.
    Reeb {
        /// JSON file (`-` for stdin).
        graph: String,
        #[arg(long)]
        dot: bool,
        #[arg(long)]
        reduce: bool,
        #[arg(long)]
        canonical: bool,
        /// Check against a catalog name or profile file.
        #[arg(long)]
        profile: Option<String>,
    },
    /// Bounds on the least number of degree-2 vertices.
    Bounds {
        #[command(subcommand)]
        action: BoundsAction,
    },
    /// List built-in manifold profiles.
    Catalog,
    /// Run the reference checks and print a pass/fail table.
    #[command(alias = "verify-paper")]
    Verify,
}

#[derive(Subcommand)]
enum BoundsAction {
    Estimate {
        /// Catalog name such as `heisenberg` or `lens(5)`, or a JSON file.
        #[arg(long)]
        profile: String,
        /// Restrict the homology bound to Z, Q, Fp or F<p>.
        #[arg(long)]
        ring: Option<String>,
    },
    /// Profile and estimate of a connected sum.
    Sum {
        #[arg(long, num_args = 2, required = true)]
        profile: Vec<String>,
    },
    /// Additivity gaps and corank excess over the catalog.
    Experiment,
}

#[derive(Clone, Copy, ValueEnum)]
enum Builder {
    Ordered,
    S2xs1,
    CircleBundle,
    Canonical,
}

#[derive(Args)]
struct PresentationArgs {
    /// `gens: a, b ; rels: ...`
    #[arg(long, required_unless_present = "family")]
    presentation: Option<String>,
    #[arg(long, value_enum, conflicts_with = "presentation")]
    family: Option<Family>,
    #[arg(long, default_value_t = 1)]
    g: usize,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    e: i64,
    #[arg(long, default_value_t = 2)]
    p: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Surface,
    CircleBundle,
    CircleBundleRank2g,
    Lens,
}

impl PresentationArgs {
    fn load(&self) -> Result<Presentation> {
        if let Some(src) = &self.presentation {
            return Presentation::parse(src);
        }
        match self.family.expect("clap enforces one source") {
            Family::Surface => Presentation::surface_group(self.g),
            Family::CircleBundle => Presentation::circle_bundle(self.g, self.e),
            Family::CircleBundleRank2g => Presentation::circle_bundle_rank2g(self.g, self.e),
            Family::Lens => Presentation::lens(self.p),
        }
    }
}

struct Output {
    text: String,
    json: Value,
    ok: bool,
}

impl Output {
    fn new(text: String, json: Value) -> Self {
        Output { text, json, ok: true }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("json"));
            } else {
                print!("{}", out.text);
                if !out.text.ends_with('\n') {
                    println!();
                }
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            if cli.json {
                println!("{}", json!({ "error": e.to_string() }));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(1)
        }
    }
}

fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map_or_else(|| "none".into(), |x| x.to_string())
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        Ok(std::io::read_to_string(std::io::stdin())?)
    } else {
        Ok(fs::read_to_string(path)?)
    }
}

fn alphabet_from(gens: &Option<String>) -> Result<Option<Alphabet>> {
    gens.as_ref()
        .map(|g| Alphabet::new(g.split(',').map(str::trim).filter(|s| !s.is_empty())))
        .transpose()
}

/// Parses words over `gens` if given, otherwise over names in order of appearance.
fn parse_words(gens: &Option<String>, srcs: &[&str]) -> Result<(Alphabet, Vec<Word>)> {
    match alphabet_from(gens)? {
        Some(al) => {
            let words = srcs.iter().map(|s| al.parse_word(s)).collect::<Result<_>>()?;
            Ok((al, words))
        }
        None => {
            let mut al = Alphabet::default();
            let words = srcs
                .iter()
                .map(|s| al.parse_word_extending(s))
                .collect::<Result<_>>()?;
            Ok((al, words))
        }
    }
}

fn load_profile(spec: &str) -> Result<ManifoldProfile> {
    match bounds::lookup(spec) {
        Ok(p) => Ok(p),
        Err(Error::UnknownProfile(_)) if std::path::Path::new(spec).exists() => {
            ManifoldProfile::from_json(&fs::read_to_string(spec)?)
        }
        Err(e) => Err(e),
    }
}

fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Word { word, gens } => {
            let (al, w) = parse_words(gens, &[word])?;
            let r = w[0].reduced();
            let (conj, core) = r.cyclic_reduce();
            let sums = r.exponent_sums(al.len());
            let text = format!(
                "reduced: {}\nlength: {}\ncyclic core: {}\nconjugator: {}\nexponent sums: {:?}\n",
                al.format(&r),
                r.len(),
                al.format(&core),
                al.format(&conj),
                sums
            );
            Ok(Output::new(
                text,
                json!({
                    "generators": al.names(),
                    "reduced": al.format(&r),
                    "length": r.len(),
                    "cyclic_core": al.format(&core),
                    "conjugator": al.format(&conj),
                    "exponent_sums": sums,
                }),
            ))
        }
        Command::Omega { pres, search, budget } => {
            let p = pres.load()?;
            if *search {
                let s = p.omega_search(*budget, cli.seed)?;
                let order: Vec<&str> = s.witness.generators.iter().map(|&g| p.alphabet().name(g)).collect();
                let text = format!(
                    "{}\n{} after {} orderings; generator order {}; seed {}\n",
                    s.omega,
                    if s.certified { "certified minimum" } else { "upper bound (budget exhausted)" },
                    s.steps,
                    order.join(","),
                    s.seed
                );
                Ok(Output::new(text, serde_json::to_value(&s)?))
            } else {
                let om = p.omega_fixed()?;
                Ok(Output::new(format!("{om}\n"), json!({ "omega": om })))
            }
        }
        Command::Abelianize { pres } => {
            let p = pres.load()?;
            let a = p.abelianize();
            Ok(Output::new(format!("{a}\n"), serde_json::to_value(&a)?))
        }
        Command::Nielsen { tuple, gens, rank } => {
            let parts: Vec<&str> = tuple.split(';').collect();
            let (al, words) = parse_words(gens, &parts)?;
            let t = WordTuple::new(words);
            let red = nielsen_reduce(&t);
            let shown: Vec<String> = red.reduced.entries().iter().map(|w| al.format(w)).collect();
            let mut text = format!("reduced: ({})\nmoves: {}\n", shown.join("; "), red.log.len());
            let mut j = json!({
                "reduced": shown,
                "moves": red.log,
            });
            if let Some(n) = rank {
                let b = is_basis(&t, *n)?;
                text.push_str(&format!("basis of F_{n}: {b}\n"));
                j["basis"] = json!(b);
            }
            Ok(Output::new(text, j))
        }
        Command::Closure {
            relators,
            target,
            gens,
            radius,
            factors,
            probe,
            samples,
        } => {
            let rel_srcs = split_top_level(relators);
            if let Some(g) = probe {
                let (al, rels) = parse_words(gens, &rel_srcs)?;
                let r = rels.first().ok_or_else(|| Error::InvalidParameter("no relator".into()))?;
                let gen = al.lookup(g).ok_or_else(|| Error::UnknownGenerator(g.clone()))?;
                let rep = closure::freiheitssatz_probe(r, gen, al.len(), *samples, *radius, *factors, cli.seed)?;
                let text = format!(
                    "{} samples, seed {}: {} counterexamples, {} trivial products skipped\n{}",
                    rep.samples,
                    rep.seed,
                    rep.counterexamples.len(),
                    rep.trivial_skipped,
                    rep.counterexamples
                        .iter()
                        .map(|w| format!("  {}\n", al.format(w)))
                        .collect::<String>()
                );
                return Ok(Output::new(text, serde_json::to_value(&rep)?));
            }
            let target = target.as_deref().expect("clap requires a target");
            let mut srcs = rel_srcs.clone();
            srcs.push(target);
            let (al, mut words) = parse_words(gens, &srcs)?;
            let t = words.pop().expect("target parsed");
            let q = ClosureQuery::new(words, t, *radius, *factors)?;
            let v = member_bounded(&q);
            let text = match &v {
                ClosureVerdict::Member(w) => format!("member\nwitness: {}\n", w.format(&al)),
                ClosureVerdict::NotMember(c) => format!("not a member ({c:?} certificate)\n"),
                ClosureVerdict::Unknown(n) => format!("unknown: {n}\n"),
            };
            Ok(Output::new(text, serde_json::to_value(&v)?))
        }
        Command::Simulate {
            script,
            builder,
            g,
            e,
            k1,
            r,
            dot,
            print_script,
        } => {
            let seq = match (script, builder) {
                (Some(path), _) => HandleSequence::parse(&read_input(path)?)?,
                (None, Some(Builder::Ordered)) => handles::ordered(*g),
                (None, Some(Builder::S2xs1)) => handles::s2xs1(),
                (None, Some(Builder::CircleBundle)) => handles::circle_bundle_seq(*g, *e)?,
                (None, Some(Builder::Canonical)) => handles::canonical_sequence(k1.unwrap_or(*g), *r)?,
                (None, None) => return Err(Error::InvalidParameter("give --script or --builder".into())),
            };
            let res = seq.run()?;
            let beta = res.graph.cycle_rank().ok();
            let summary = format!(
                "cycle_rank={} delta2={} delta3={} k={},{},{},{} closed={}",
                beta.map_or("n/a".into(), |b| b.to_string()),
                res.delta2(),
                res.delta3(),
                res.k[0],
                res.k[1],
                res.k[2],
                res.k[3],
                res.closed
            );
            let mut text = String::new();
            if *print_script {
                text.push_str(&seq.to_script());
            }
            if *dot {
                text.push_str(&format!("// {summary}\n"));
                text.push_str(&res.graph.to_dot());
            } else {
                text.push_str(&summary);
                text.push('\n');
            }
            Ok(Output::new(
                text,
                json!({
                    "cycle_rank": beta,
                    "delta2": res.delta2(),
                    "delta3": res.delta3(),
                    "k": res.k,
                    "closed": res.closed,
                    "graph": res.graph,
                    "script": seq.to_script(),
                }),
            ))
        }
        Command::Reeb {
            graph,
            dot,
            reduce,
            canonical,
            profile,
        } => {
            let mut g = ReebGraph::from_json(&read_input(graph)?)?;
            if *reduce {
                g = g.reduce_extrema()?;
            }
            if *canonical {
                g = g.canonical_form()?;
            }
            let census = g.degree_census()?;
            let betti = g.betti_identity_check()?;
            let realization = profile
                .as_ref()
                .map(|p| realization_obstruction(&g, &load_profile(p)?))
                .transpose()?;
            let mut text = if *dot {
                g.to_dot()
            } else {
                format!(
                    "cycle_rank={} delta={:?} k={:?} identity={}\nindices: {:?}\n",
                    betti.cycle_rank,
                    census.delta,
                    census.k,
                    if betti.pass { "pass" } else { "FAIL" },
                    g.index_sequence()
                )
            };
            if let Some(r) = &realization {
                text.push_str(&format!("realization: {r:?}\n"));
            }
            Ok(Output::new(
                text,
                json!({
                    "graph": g,
                    "census": census,
                    "identity": betti,
                    "realization": realization,
                }),
            ))
        }
        Command::Bounds { action } => match action {
            BoundsAction::Estimate { profile, ring } => {
                let p = load_profile(profile)?;
                let sel = ring.as_deref().map(str::parse::<RingSelector>).transpose()?;
                let e = bounds::estimate_with(&p, sel);
                Ok(Output::new(format!("{}\n{e}\n", p.name), serde_json::to_value(&e)?))
            }
            BoundsAction::Sum { profile } => {
                let a = load_profile(&profile[0])?;
                let b = load_profile(&profile[1])?;
                let s = bounds::connected_sum(&a, &b)?;
                let e = bounds::estimate(&s);
                Ok(Output::new(
                    format!("{}\n{e}\n", s.name),
                    json!({ "profile": s, "estimate": e }),
                ))
            }
            BoundsAction::Experiment => {
                let cat = bounds::catalog();
                let threes: Vec<&ManifoldProfile> = cat.iter().filter(|p| p.dim == 3 && p.orientable).collect();
                let mut gaps = Vec::new();
                for (i, a) in threes.iter().enumerate().step_by(5) {
                    for b in threes.iter().skip(i).step_by(7) {
                        gaps.push(bounds::additivity_gap(a, b)?);
                    }
                }
                let scan = bounds::corank_excess_scan(&cat);
                let mut text = String::from("additivity: sum of uppers vs recomputed lower\n");
                for g in &gaps {
                    text.push_str(&format!(
                        "  {} # {}: {} vs {} (gap {})\n",
                        g.left, g.right, opt(g.sum_of_uppers), g.recomputed_lower, opt(g.gap)
                    ));
                }
                text.push_str("Δ₂/2 + corank - g at lower/upper bound\n");
                for s in &scan {
                    text.push_str(&format!("  {}: {} / {}\n", s.name, s.at_lower, opt(s.at_upper)));
                }
                Ok(Output::new(text, json!({ "additivity": gaps, "corank_excess": scan })))
            }
        },
        Command::Catalog => {
            let cat = bounds::catalog();
            let mut text = String::new();
            for p in &cat {
                let e = bounds::estimate(p);
                let range = match (e.exact, e.upper) {
                    (true, _) => format!("= {}", e.lower),
                    (false, Some(u)) => format!("in [{}, {u}]", e.lower),
                    (false, None) => format!(">= {}", e.lower),
                };
                text.push_str(&format!("{:<26} dim {}  Δ₂ {range}\n", p.name, p.dim));
            }
            Ok(Output::new(text, serde_json::to_value(&cat)?))
        }
        Command::Verify => {
            let checks = verify::run_all(cli.seed);
            let mut text = String::new();
            for c in &checks {
                text.push_str(&format!(
                    "{:<32} {}  {}\n",
                    c.id,
                    if c.pass { "PASS" } else { "FAIL" },
                    c.detail
                ));
            }
            let ok = checks.iter().all(|c| c.pass);
            text.push_str(&format!(
                "{}/{} passed\n",
                checks.iter().filter(|c| c.pass).count(),
                checks.len()
            ));
            Ok(Output {
                text,
                json: serde_json::to_value(&checks)?,
                ok,
            })
        }
    }
}
