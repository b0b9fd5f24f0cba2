//! Verification suites run over grid points.

use std::fmt;

use clap::ValueEnum;
use interval_garside::garside::{emit_presentation, embedding_lcm_check, matsumoto_check, Letter};
use interval_garside::homology::{Complex, DEFAULT_RECURSION_CAP};
use interval_garside::words::{cayley_distances, length};
use interval_garside::{
    generator_matrix, h2_formula, interval::balanced_max_length, lambda_power, Error, Garside,
    GroupElement, GroupParams, Interval, Method, NormalForm,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::grid::{group_pairs, Point, LATTICE_PAIR_LIMIT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Lattice,
    Length,
    Interval,
    Lcm,
    Garside,
    Matsumoto,
    Homology,
    All,
}

impl Suite {
    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
    Cap,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
            Status::Cap => "CAP ",
        })
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: Status,
    pub suite: &'static str,
    pub scope: String,
    pub detail: String,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:<9} {}: {}", self.status, self.suite, self.scope, self.detail)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub group_cap: usize,
    pub rewrite_cap: usize,
    pub seed: u64,
    pub samples: usize,
}

fn outcome(suite: &'static str, scope: impl fmt::Display, ok: bool, detail: String) -> Outcome {
    let status = if ok { Status::Pass } else { Status::Fail };
    Outcome { status, suite, scope: scope.to_string(), detail }
}

fn from_error(suite: &'static str, scope: impl fmt::Display, err: Error) -> Outcome {
    let status = match err {
        Error::CapExceeded { .. } => Status::Cap,
        _ => Status::Fail,
    };
    Outcome { status, suite, scope: scope.to_string(), detail: err.to_string() }
}

fn skip(suite: &'static str, scope: impl fmt::Display, detail: &str) -> Outcome {
    Outcome { status: Status::Skip, suite, scope: scope.to_string(), detail: detail.to_string() }
}

/// Runs `suite` over `points`; results come back in a fixed order.
pub fn run_suites(suite: Suite, points: &[Point], opts: Options) -> Vec<Outcome> {
    let mut out = Vec::new();
    let pairs = group_pairs(points);
    if suite.includes(Suite::Length) {
        let per_pair: Vec<Vec<Outcome>> =
            pairs.par_iter().map(|&(e, n)| length_suite(e, n, opts)).collect();
        out.extend(per_pair.into_iter().flatten());
    }
    if suite.includes(Suite::Interval) {
        let per_pair: Vec<Outcome> =
            pairs.par_iter().map(|&(e, n)| balanced_suite(e, n, opts)).collect();
        out.extend(per_pair);
    }
    let per_point: Vec<Vec<Outcome>> =
        points.par_iter().map(|&p| point_suites(suite, p, opts)).collect();
    out.extend(per_point.into_iter().flatten());
    out
}

fn length_suite(e: u32, n: usize, opts: Options) -> Vec<Outcome> {
    let scope = format!("e={e} n={n}");
    let params = GroupParams::new(e, n).expect("valid");
    let dist = match cayley_distances(params, opts.group_cap) {
        Ok(d) => d,
        Err(err) => return vec![from_error("length", &scope, err)],
    };
    let mismatches = dist.iter().filter(|(w, &d)| length(w) != d).count();
    let mut out = vec![outcome(
        "length",
        &scope,
        mismatches == 0,
        format!("{} elements, {mismatches} differ from the Cayley distance", dist.len()),
    )];
    let mut violations = 0;
    for (w, &d) in &dist {
        for x in params.generators() {
            let xw = w.left_mul_generator(x, params).expect("generator in range");
            if dist[&xw].abs_diff(d) != 1 {
                violations += 1;
            }
        }
    }
    out.push(outcome("length", &scope, violations == 0, format!("unit-step law, {violations} violations")));
    let top = n * (n - 1);
    let max = dist.values().copied().max().unwrap_or(0);
    let count = dist.values().filter(|&&d| d == top).count();
    let expected = (e as usize - 1).pow(n as u32 - 1);
    out.push(outcome(
        "length",
        &scope,
        max == top && count == expected,
        format!("max length {max} attained {count} times (expected {top}, {expected})"),
    ));
    out
}

fn balanced_suite(e: u32, n: usize, opts: Options) -> Outcome {
    let scope = format!("e={e} n={n}");
    let params = GroupParams::new(e, n).expect("valid");
    match balanced_max_length(params, opts.group_cap) {
        Ok(found) => outcome(
            "interval",
            scope,
            found.len() == e as usize - 1,
            format!("{} balanced elements of maximal length, all powers of λ", found.len()),
        ),
        Err(err) => from_error("interval", scope, err),
    }
}

fn point_suites(suite: Suite, p: Point, opts: Options) -> Vec<Outcome> {
    let mut out = Vec::new();
    let interval = match Interval::build(p.params(), p.k, opts.group_cap) {
        Ok(i) => i,
        Err(err) => return vec![from_error("interval", p, err)],
    };
    if suite.includes(Suite::Interval) {
        out.push(outcome(
            "interval",
            p,
            true,
            format!("|D_k| = {}; staircase set equals both divisor sets of λ^k", interval.len()),
        ));
    }
    let small_enough = interval.len().saturating_mul(interval.len()) <= LATTICE_PAIR_LIMIT;
    if suite.includes(Suite::Lattice) {
        if small_enough {
            let report = interval.verify_lattice();
            let detail = match &report.counterexample {
                None => format!("{} members, meets and joins unique on both sides", interval.len()),
                Some(v) => v.to_string(),
            };
            out.push(outcome("lattice", p, report.is_lattice(), detail));
        } else {
            out.push(skip("lattice", p, "|D_k|² above the pair limit"));
        }
    }
    let needs_garside = [Suite::Lcm, Suite::Garside, Suite::Matsumoto, Suite::Homology]
        .into_iter()
        .any(|s| suite.includes(s));
    if !needs_garside {
        return out;
    }
    if !small_enough {
        out.push(skip("garside", p, "|D_k|² above the pair limit"));
        return out;
    }
    let g = match Garside::build(interval, false) {
        Ok(g) => g,
        Err(err) => {
            out.push(from_error("garside", p, err));
            return out;
        }
    };
    if suite.includes(Suite::Lcm) {
        out.push(lcm_suite(&g, p));
    }
    if suite.includes(Suite::Garside) {
        out.push(garside_suite(&g, p, opts));
    }
    if suite.includes(Suite::Matsumoto) {
        out.push(matsumoto_suite(&g, p, opts));
    }
    if suite.includes(Suite::Homology) {
        out.extend(homology_suite(&g, p, opts));
    }
    out
}

fn lcm_suite(g: &Garside, p: Point) -> Outcome {
    let table = match g.interval().atom_lcm_table() {
        Ok(t) => t,
        Err(err) => return from_error("lcm", p, err),
    };
    let mut detail = format!("{} generator pairs, left and right joins agree", table.len());
    if p.n >= 3 {
        for i in 0..p.e {
            match embedding_lcm_check(g, i) {
                Ok(true) => {}
                Ok(false) => {
                    return outcome("lcm", p, false, format!("embedding with q1 ↦ t{i}·t{i}-k breaks an lcm"))
                }
                Err(err) => return from_error("lcm", p, err),
            }
        }
        detail.push_str(&format!("; {} embeddings preserve lcms", p.e));
    }
    outcome("lcm", p, true, detail)
}

/// A random signed word over the atoms and Δ.
pub fn random_letters(g: &Garside, rng: &mut ChaCha8Rng, max_len: usize) -> Vec<Letter> {
    let atoms = g.interval().atoms();
    let len = rng.random_range(0..=max_len);
    (0..len)
        .map(|_| {
            let roll = rng.random_range(0..20);
            let x = atoms[rng.random_range(0..atoms.len())].0;
            match roll {
                0 => Letter::Delta,
                1 => Letter::InverseDelta,
                2..=7 => Letter::InverseAtom(x),
                _ => Letter::Atom(x),
            }
        })
        .collect()
}

/// Image of a signed word in G(e,e,n).
pub fn evaluate_letters(params: GroupParams, k: u32, letters: &[Letter]) -> GroupElement {
    let delta = lambda_power(params, k as u64);
    let delta_inv = delta.inverse();
    let mut acc = params.identity();
    for &letter in letters {
        let m = match letter {
            Letter::Atom(x) | Letter::InverseAtom(x) => {
                generator_matrix(x, params).expect("atoms are generators")
            }
            Letter::Delta => delta.clone(),
            Letter::InverseDelta => delta_inv.clone(),
        };
        acc = acc.multiply(&m).expect("same group");
    }
    acc
}

fn garside_suite(g: &Garside, p: Point, opts: Options) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(
        opts.seed ^ ((p.e as u64) << 40) ^ ((p.n as u64) << 20) ^ p.k as u64,
    );
    let params = g.params();
    let spelled = |nf: &NormalForm| -> Result<NormalForm, Error> { g.normal_form_str(&g.spell(nf)) };
    for sample in 0..opts.samples {
        let letters = random_letters(g, &mut rng, 12);
        let fail = |what: &str| outcome("garside", p, false, format!("sample {sample}: {what}"));
        let nf = match g.normal_form(&letters) {
            Ok(nf) => nf,
            Err(err) => return from_error("garside", p, err),
        };
        if !g.is_normal(&nf) {
            return fail("result is not left-greedy");
        }
        match spelled(&nf) {
            Ok(again) if again == nf => {}
            Ok(_) => return fail("normalizing the spelled normal form changes it"),
            Err(err) => return from_error("garside", p, err),
        }
        if g.evaluate(&nf) != evaluate_letters(params, p.k, &letters) {
            return fail("normal form and word have different images in the group");
        }
        let mut conj = vec![Letter::InverseDelta];
        conj.extend_from_slice(&letters);
        conj.push(Letter::Delta);
        let expected = NormalForm {
            delta_power: nf.delta_power,
            factors: nf.factors.iter().map(|&f| g.tau(f)).collect(),
        };
        if g.normal_form(&conj).ok() != Some(expected) {
            return fail("conjugation by Δ does not act factorwise");
        }
        if !g.multiply(&nf, &g.inverse(&nf)).is_identity() {
            return fail("x · x⁻¹ is not the identity");
        }
    }
    let presentation = match emit_presentation(params, p.k) {
        Ok(pr) => pr,
        Err(err) => return from_error("garside", p, err),
    };
    for rel in &presentation.relations {
        let side = |w: &interval_garside::Word| {
            g.normal_form(&w.letters().iter().map(|&x| Letter::Atom(x)).collect::<Vec<_>>())
        };
        match (side(&rel.lhs), side(&rel.rhs)) {
            (Ok(a), Ok(b)) if a == b => {}
            (Ok(_), Ok(_)) => {
                return outcome("garside", p, false, format!("relation {} = {} fails", rel.lhs, rel.rhs))
            }
            (Err(err), _) | (_, Err(err)) => return from_error("garside", p, err),
        }
    }
    outcome(
        "garside",
        p,
        true,
        format!("{} random words and {} relations", opts.samples, presentation.relations.len()),
    )
}

/// Above this interval size the rewriting classes are not enumerated.
const MATSUMOTO_LIMIT: usize = 2_000;

fn matsumoto_suite(g: &Garside, p: Point, opts: Options) -> Outcome {
    let size = g.interval().len();
    if size > MATSUMOTO_LIMIT {
        return skip("matsumoto", p, "interval too large for exhaustive rewriting");
    }
    for w in 0..size {
        match matsumoto_check(g, w, opts.rewrite_cap) {
            Ok(true) => {}
            Ok(false) => {
                return outcome(
                    "matsumoto",
                    p,
                    false,
                    format!("reduced expressions of {} split into several classes", g.interval().element(w)),
                )
            }
            Err(err) => return from_error("matsumoto", p, err),
        }
    }
    outcome("matsumoto", p, true, format!("{size} members, one rewriting class each"))
}

/// Above this interval size the generic differential is not computed.
const GENERIC_LIMIT: usize = 2_000;

fn homology_suite(g: &Garside, p: Point, opts: Options) -> Vec<Outcome> {
    if p.n < 3 {
        return vec![skip("homology", p, "n = 2")];
    }
    let closed = match Complex::build(g, Method::Closed, 0) {
        Ok(c) => c,
        Err(err) => return vec![from_error("homology", p, err)],
    };
    let mut out = Vec::new();
    match (closed.homology(1), closed.homology(2)) {
        (Ok(h1), Ok(h2)) => {
            out.push(outcome("homology", p, h1.free_rank == 1 && h1.torsion.is_empty(), format!("H1 = {h1}")));
            let shortcut = closed.h2_shortcut();
            let formula = h2_formula(p.e, p.n, p.k).expect("n is 3 or 4");
            out.push(outcome(
                "homology",
                p,
                h2 == formula && h2 == shortcut,
                format!("H2 = {h2}; rank shortcut {shortcut}; closed formula {formula}"),
            ));
        }
        (Err(err), _) | (_, Err(err)) => out.push(from_error("homology", p, err)),
    }
    if g.interval().len() > GENERIC_LIMIT {
        out.push(skip("homology", p, "generic differential skipped for large intervals"));
        return out;
    }
    let cap = opts.rewrite_cap.max(DEFAULT_RECURSION_CAP);
    match Complex::build(g, Method::Generic, cap) {
        Ok(generic) => {
            let same = generic.d[1] == closed.d[1] && generic.d[2] == closed.d[2];
            out.push(outcome("homology", p, same, "generic d2, d3 against the closed forms".into()));
        }
        Err(err) => out.push(from_error("homology", p, err)),
    }
    out
}
