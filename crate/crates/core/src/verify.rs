//! Reference checks run by the `verify` command.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, estimate, ManifoldProfile, Summand};
use crate::closure::{self, member_bounded, ClosureQuery, ClosureVerdict};
use crate::handles::{self, window_omega_consistency};
use crate::nielsen::{is_basis, WordTuple};
use crate::presentation::{circle_bundle_attaching_words, Presentation, DEFAULT_SEARCH_BUDGET};
use crate::word::{Alphabet, Word};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub pass: bool,
    pub detail: String,
}

fn check(id: &str, f: impl FnOnce() -> Result<(bool, String)>) -> Check {
    match f() {
        Ok((pass, detail)) => Check {
            id: id.into(),
            pass,
            detail,
        },
        Err(e) => Check {
            id: id.into(),
            pass: false,
            detail: format!("error: {e}"),
        },
    }
}

/// Runs every reference check; the order of the result is fixed.
pub fn run_all(seed: u64) -> Vec<Check> {
    type Job = fn(u64) -> Result<(bool, String)>;
    let jobs: Vec<(&str, Job)> = vec![
        ("omega-rank-2g-presentations", omega_rank2g),
        ("omega-search-circle-bundles", omega_search_bundles),
        ("abelianization-circle-bundles", abelianization),
        ("simulator-circle-bundles", simulator_bundles),
        ("simulator-named-builders", simulator_builders),
        ("random-sequence-identities", random_identities),
        ("bounds-table", bounds_table),
        ("classification-family", classification_family),
        ("connected-sum-profiles", connected_sums),
        ("closure-oracle-examples", closure_examples),
        ("support-probe", support_probe),
        ("nielsen-bases", nielsen_bases),
        ("omega-window-mechanism", omega_windows),
        ("reeb-graph-examples", reeb_examples),
    ];
    std::thread::scope(|s| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|&(id, f)| s.spawn(move || check(id, || f(seed))))
            .collect();
        handles.into_iter().map(|h| h.join().expect("check thread")).collect()
    })
}

fn omega_rank2g(_: u64) -> Result<(bool, String)> {
    let mut ok = true;
    let mut out = Vec::new();
    for g in 1..=3 {
        for e in [-1, 1] {
            let p = Presentation::circle_bundle_rank2g(g, e)?;
            let om = p.omega_fixed()?;
            let full = p.relators().iter().all(|r| r.support().len() == 2 * g);
            ok &= om == 2 * g && full;
            out.push(format!("g={g},e={e}:Ω={om}"));
        }
    }
    Ok((ok, out.join(" ")))
}

fn omega_search_bundles(seed: u64) -> Result<(bool, String)> {
    let mut ok = true;
    let mut out = Vec::new();
    for g in 1..=2 {
        for e in [-1, 1] {
            let s = Presentation::circle_bundle(g, e)?.omega_search(DEFAULT_SEARCH_BUDGET, seed)?;
            ok &= s.omega == 2 && s.certified;
            out.push(format!("g={g},e={e}:Ω={}{}", s.omega, if s.certified { "" } else { "?" }));
        }
    }
    Ok((ok, out.join(" ")))
}

fn abelianization(_: u64) -> Result<(bool, String)> {
    let mut bad = Vec::new();
    for g in 1..=4usize {
        for e in -5..=5i64 {
            let a = Presentation::circle_bundle(g, e)?.abelianize();
            let want_free = if e == 0 { 2 * g + 1 } else { 2 * g };
            let want_tors: Vec<i64> = if e.abs() > 1 { vec![e.abs()] } else { vec![] };
            if a.free_rank != want_free || a.torsion != want_tors {
                bad.push(format!("g={g},e={e}:{a}"));
            }
        }
    }
    Ok((bad.is_empty(), if bad.is_empty() { "36 + 8 cases".into() } else { bad.join(" ") }))
}

fn simulator_bundles(_: u64) -> Result<(bool, String)> {
    let mut ok = true;
    for g in 1..=6u32 {
        let r = handles::circle_bundle_seq(g, 1)?.run()?;
        let g = g as usize;
        ok &= r.cycle_rank()? == g
            && r.delta2() == 2 * g + 2
            && r.delta3() == 2 * g
            && r.k[1] == 2 * g + 1
            && r.k[2] == 2 * g + 1;
    }
    Ok((ok, "g = 1..6".into()))
}

fn simulator_builders(_: u64) -> Result<(bool, String)> {
    let mut ok = true;
    for g in 0..=4 {
        let r = handles::ordered(g).run()?;
        ok &= r.cycle_rank()? == 0 && r.delta2() == 2 * g as usize;
    }
    let r = handles::s2xs1().run()?;
    ok &= r.cycle_rank()? == 1 && r.delta2() == 0 && r.graph.index_sequence() == [0, 2, 1, 3];
    let r = handles::connected_sum(&handles::s2xs1(), &handles::s2xs1())?.run()?;
    ok &= r.cycle_rank()? == 2 && r.delta2() == 0;
    for k1 in 0..=6 {
        for rr in 0..=k1 {
            let r = handles::canonical_sequence(k1, rr)?.run()?;
            ok &= r.delta2() == 2 * (k1 - rr) as usize && r.cycle_rank()? == rr as usize;
        }
    }
    Ok((ok, "ordered, S²×S¹, sums, canonical".into()))
}

fn random_identities(seed: u64) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = 0;
    for _ in 0..500 {
        let s = handles::random_closed_sequence(&mut rng, 40);
        let r = s.run()?;
        let b = r.graph.betti_identity_check()?;
        let c = &r.census;
        let ok = r.closed
            && b.pass
            && c.delta(2) + c.delta(3) == c.k(1) + c.k(2)
            && c.euler_char() == 0
            && r.graph.parity_check(0);
        if !ok {
            bad += 1;
        }
    }
    Ok((bad == 0, format!("500 sequences, seed {seed}, {bad} failures")))
}

fn bounds_table(_: u64) -> Result<(bool, String)> {
    let mut bad = Vec::new();
    let mut expect = |name: String, lower: i64, upper: Option<i64>| {
        let e = estimate(&bounds::lookup(&name).expect("catalog name"));
        let upper_ok = upper.is_none() || e.upper == upper;
        if e.lower != lower || !upper_ok {
            bad.push(format!("{name}: [{}, {:?}]", e.lower, e.upper));
        }
    };
    for n in 3..=8i64 {
        expect(format!("rp({n})"), n - 1, None);
        expect(format!("cp({n})"), n - 1, None);
    }
    for n in 3..=6u32 {
        expect(format!("torus({n})"), (1 << n) - 4, None);
    }
    expect("lens-sum(2,3)".into(), 4, None);
    for g in 1..=4i64 {
        for e in [-3, -2, 0, 2, 5] {
            expect(format!("circle-bundle({g},{e})"), 2 * g + 2, Some(2 * g + 2));
        }
        for e in [-1, 1] {
            expect(format!("circle-bundle({g},{e})"), (2 * g).max(4), Some(2 * g + 2));
        }
    }
    for g in 2..=4i64 {
        expect(format!("homology-sphere({g})"), 2 * g, Some(2 * g));
    }
    expect("heisenberg".into(), 4, Some(4));
    Ok((bad.is_empty(), if bad.is_empty() { "all rows".into() } else { bad.join("; ") }))
}

/// A family of connected sums mixing `S² × S¹`, lens spaces and other primes.
pub fn classification_family(seed: u64) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    for _ in 0..50 {
        let (p, lenses, others) = random_sum(&mut rng)?;
        let e = estimate(&p);
        let want0 = lenses == 0 && others == 0;
        let want2 = lenses == 1 && others == 0;
        let is0 = e.exact && e.lower == 0;
        let is2 = e.exact && e.lower == 2;
        if want0 != is0 || want2 != is2 {
            bad.push(p.name.clone());
        }
    }
    Ok((bad.is_empty(), if bad.is_empty() { "50 profiles".into() } else { bad.join(" ") }))
}

fn random_sum(rng: &mut ChaCha8Rng) -> Result<(ManifoldProfile, usize, usize)> {
    use rand::Rng;
    let r = rng.gen_range(0..=3);
    let mut p = bounds::s2xs1_sum(r);
    let (mut lenses, mut others) = (0, 0);
    for _ in 0..rng.gen_range(0..=2) {
        let q = match rng.gen_range(0..6) {
            0 | 1 => {
                lenses += 1;
                bounds::lens(rng.gen_range(2..=7))?
            }
            2 => {
                others += 1;
                bounds::heisenberg()
            }
            3 => {
                others += 1;
                bounds::circle_bundle(rng.gen_range(1..=2), rng.gen_range(-3..=3))?
            }
            4 => {
                others += 1;
                bounds::homology_sphere(rng.gen_range(2..=3))?
            }
            _ => bounds::s2xs1_sum(rng.gen_range(1..=2)),
        };
        p = bounds::connected_sum(&p, &q)?;
    }
    if let Some(s) = &p.prime_summands {
        debug_assert_eq!(s.iter().filter(|x| matches!(x, Summand::Lens { .. })).count(), lenses);
    }
    Ok((p, lenses, others))
}

fn connected_sums(_: u64) -> Result<(bool, String)> {
    let e = estimate(&bounds::connected_sum(&bounds::s2xs1_sum(1), &bounds::s2xs1_sum(1))?);
    let mut ok = e.exact && e.lower == 0;
    let e = estimate(&bounds::connected_sum(&bounds::homology_sphere(2)?, &bounds::homology_sphere(3)?)?);
    ok &= e.exact && e.lower == 10;
    let e = estimate(&bounds::connected_sum(&bounds::circle_bundle(2, 3)?, &bounds::s2xs1_sum(1))?);
    ok &= e.exact && e.lower == 6;
    let e = estimate(&bounds::s2xs1_sum_lens(3, 5)?);
    ok &= e.exact && e.lower == 2;
    Ok((ok, "S²×S¹ sums, homology spheres, bundle sums, one lens".into()))
}

fn closure_examples(_: u64) -> Result<(bool, String)> {
    let al = Alphabet::new(["a", "b"])?;
    let w = |s: &str| al.parse_word(s).map(|w| w.reduced());
    let rel = vec![w("[a,b]")?];
    let q = |t: &str, radius, factors| ClosureQuery::new(rel.clone(), w(t).expect("word"), radius, factors);
    let mut ok = member_bounded(&q("a", 1, 2)?) == ClosureVerdict::NotMember(closure::Certificate::Abelianization);
    ok &= member_bounded(&q("[a,b]^3", 0, 3)?).is_member();
    ok &= member_bounded(&q("[a^2,b]", 2, 4)?).is_member();
    Ok((ok, "three verdicts".into()))
}

fn support_probe(seed: u64) -> Result<(bool, String)> {
    let al = Alphabet::new(["a", "b"])?;
    let mut ok = true;
    let r = al.parse_word("a^2 b^2")?;
    ok &= closure::freiheitssatz_probe(&r, 1, 2, 1000, 3, 4, seed)?.counterexamples.is_empty();
    let rank2 = Presentation::circle_bundle_rank2g(1, 1)?;
    let r = &rank2.relators()[0];
    ok &= closure::freiheitssatz_probe(r, 1, 2, 1000, 3, 4, seed)?.counterexamples.is_empty();
    ok &= closure::freiheitssatz_probe(&Word::gen(0), 0, 2, 1000, 3, 4, seed)?.counterexamples.is_empty();
    let bad = closure::support_probe(&al.parse_word("a^2")?, 1, 2, 200, 2, 3, seed)?;
    ok &= !bad.counterexamples.is_empty();
    Ok((ok, format!("seed {seed}")))
}

fn nielsen_bases(seed: u64) -> Result<(bool, String)> {
    use crate::nielsen::NielsenMove;
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ok = true;
    for _ in 0..200 {
        let n = rng.gen_range(2..=4);
        let mut t = WordTuple::new((0..n).map(Word::gen).collect());
        for _ in 0..rng.gen_range(1..=8) {
            let i = rng.gen_range(0..n);
            let j = (i + rng.gen_range(1..n)) % n;
            let inverse = rng.gen();
            t.apply(&if rng.gen() {
                NielsenMove::RightMul { target: i, by: j, inverse }
            } else {
                NielsenMove::LeftMul { target: i, by: j, inverse }
            });
        }
        ok &= is_basis(&t, n)?;
    }
    let a = Word::gen(0);
    let b = Word::gen(1);
    ok &= !is_basis(&WordTuple::new(vec![a.pow(2), b]), 2)?;
    ok &= !is_basis(&WordTuple::new(vec![a.clone(), a]), 2)?;
    Ok((ok, "200 scrambled bases, 2 non-bases".into()))
}

fn omega_windows(_: u64) -> Result<(bool, String)> {
    let mut ok = true;
    for g in 1..=3usize {
        let (al, words) = circle_bundle_attaching_words(g, 2)?;
        let p = Presentation::heegaard_presentation(al, words)?;
        let c = window_omega_consistency(&handles::circle_bundle_seq(g as u32, 2)?, &p)?;
        ok &= c.pass && c.omega_bound == g + 1;
    }
    for k1 in 1..=6usize {
        for r in 1..=k1 {
            let good = window_presentation(k1, r, None)?;
            let seq = handles::canonical_sequence(k1 as u32, r as u32)?;
            ok &= window_omega_consistency(&seq, &good)?.pass;
            for i in 0..r {
                let bad = window_presentation(k1, r, Some(i))?;
                ok &= !window_omega_consistency(&seq, &bad)?.pass;
            }
        }
    }
    Ok((ok, "bundle presentations and 1 ≤ r ≤ k1 ≤ 6".into()))
}

/// Presentation on `k1` generators whose `i`-th relator (0-based, `i < r`)
/// uses exactly the first `k1 - r + i` generators, the rest all of them.
/// `violate = Some(i)` widens relator `i` by one generator.
pub fn window_presentation(k1: usize, r: usize, violate: Option<usize>) -> Result<Presentation> {
    let al = Alphabet::numbered("x", k1);
    let rels = (0..k1)
        .map(|i| {
            let mut width = if i < r { k1 - r + i } else { k1 };
            if violate == Some(i) {
                width += 1;
            }
            Word::product((0..width).map(Word::gen).collect::<Vec<_>>().iter())
        })
        .collect();
    Presentation::new(al, rels)
}

fn reeb_examples(_: u64) -> Result<(bool, String)> {
    let mut ok = true;
    for g in 1..=4u32 {
        let r = handles::circle_bundle_seq(g, -1)?.run()?;
        let canon = r.graph.canonical_form()?;
        ok &= canon.cycle_rank()? == g as usize && canon.delta2() == r.delta2();
        ok &= r.graph.reduce_extrema()? == r.graph;
        ok &= r.graph.betti_identity_check()?.pass;
    }
    let pattern = handles::canonical_sequence(4, 2)?.run()?.graph.index_sequence();
    ok &= pattern == [0, 1, 1, 2, 1, 2, 1, 2, 2, 3];
    let heis = bounds::heisenberg();
    let tree = handles::ordered(0).run()?.graph;
    ok &= matches!(
        crate::reeb::realization_obstruction(&tree, &heis)?,
        crate::reeb::Realization::Obstructed(_)
    );
    let m = handles::circle_bundle_seq(2, 3)?.run()?.graph;
    ok &= crate::reeb::realization_obstruction(&m, &bounds::circle_bundle(2, 3)?)?
        == crate::reeb::Realization::NotObstructed;
    Ok((ok, "canonical form, extrema, realization".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass() {
        for c in run_all(crate::presentation::DEFAULT_SEED) {
            assert!(c.pass, "{}: {}", c.id, c.detail);
        }
    }

    #[test]
    fn window_presentations() {
        let p = window_presentation(4, 2, None).unwrap();
        let sizes: Vec<usize> = p.relators().iter().map(|r| r.support().len()).collect();
        assert_eq!(sizes, vec![2, 3, 4, 4]);
        let p = window_presentation(4, 2, Some(0)).unwrap();
        assert_eq!(p.relators()[0].support().len(), 3);
    }
}
