//! Acceptance gate: one line per criterion, then a verdict.
//!
//! Runs without the libtest harness so the lines always reach the output.
//! The process fails when the set of failing criteria differs from
//! `EXPECTED_RED`.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use interval_garside::garside::{
    embedding_lcm_check, emit_presentation, is_isomorphic_to_cp, matsumoto_check, t_cycle_components, Letter,
};
use interval_garside::homology::{differential_closed_form, differential_generic, CellBasis, Complex, DEFAULT_RECURSION_CAP};
use interval_garside::interval::in_dk;
use interval_garside::words::length;
use interval_garside::{
    enumerate_group, generator_matrix, lambda_power, AbelianGroup, Garside, Generator, GroupElement, GroupParams,
    Interval, Method, NormalForm, Side, Word,
};
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Criteria known to fail, with the reason recorded alongside the code.
/// 13: H₂ for (4,4,2) has (ℤ/2)⁴ where the closed formula predicts (ℤ/2)⁵;
/// closed-form and generic differentials agree there.
const EXPECTED_RED: &[u32] = &[13];

const CAP: usize = 1 << 20;
const SMALL_GRID: [(u32, usize); 8] = [(2, 2), (3, 2), (6, 2), (2, 3), (3, 3), (4, 3), (2, 4), (3, 4)];
const LATTICE_PAIR_LIMIT: usize = 10_000_000;
const WORDS_PER_POINT: usize = 10_000;

fn params(e: u32, n: usize) -> GroupParams {
    GroupParams::new(e, n).unwrap()
}

/// e ∈ 2..=6, n ∈ 2..=4, every k.
fn default_grid() -> Vec<(u32, usize, u32)> {
    let mut out = Vec::new();
    for e in 2..=6 {
        for n in 2..=4 {
            out.extend((1..e).map(|k| (e, n, k)));
        }
    }
    out
}

struct Structures {
    garside: HashMap<(u32, usize, u32), Garside>,
}

impl Structures {
    fn build() -> Self {
        let garside = default_grid()
            .into_par_iter()
            .map(|(e, n, k)| {
                let interval = Interval::build(params(e, n), k, CAP).unwrap();
                ((e, n, k), Garside::build(interval, false).unwrap())
            })
            .collect();
        Structures { garside }
    }

    fn get(&self, e: u32, n: usize, k: u32) -> &Garside {
        &self.garside[&(e, n, k)]
    }
}

/// Cayley-graph distances from the identity.
fn bfs(p: GroupParams) -> HashMap<GroupElement, usize> {
    let mut dist = HashMap::new();
    let id = p.identity();
    dist.insert(id.clone(), 0);
    let mut queue = VecDeque::from([id]);
    while let Some(w) = queue.pop_front() {
        let d = dist[&w];
        for x in p.generators() {
            let v = w.mul_generator(x, p).unwrap();
            if !dist.contains_key(&v) {
                dist.insert(v.clone(), d + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

type Verdict = (bool, String);

fn c01_length_oracle() -> Verdict {
    let mut checked = 0;
    for (e, n) in SMALL_GRID {
        let dist = bfs(params(e, n));
        for (w, &d) in &dist {
            if length(w) != d {
                return (false, format!("G({e},{e},{n}): ℓ({w}) = {} but distance {d}", length(w)));
            }
        }
        checked += dist.len();
    }
    (true, format!("{checked} elements"))
}

fn c02_unit_step() -> Verdict {
    let mut checked = 0;
    for (e, n) in SMALL_GRID {
        let p = params(e, n);
        for w in enumerate_group(p, CAP).unwrap() {
            let lw = length(&w);
            for x in p.generators() {
                let xw = w.left_mul_generator(x, p).unwrap();
                if length(&xw).abs_diff(lw) != 1 {
                    return (false, format!("G({e},{e},{n}): x={x}, w={w}"));
                }
                checked += 1;
            }
        }
    }
    (true, format!("{checked} (x, w) pairs"))
}

fn c03_census() -> Verdict {
    for (e, n) in SMALL_GRID {
        let lengths: Vec<usize> = enumerate_group(params(e, n), CAP).unwrap().iter().map(length).collect();
        let top = n * (n - 1);
        let max = *lengths.iter().max().unwrap();
        let count = lengths.iter().filter(|&&l| l == top).count();
        let expected = (e as usize - 1).pow(n as u32 - 1);
        if max != top || count != expected {
            return (false, format!("G({e},{e},{n}): max {max} attained {count} times"));
        }
    }
    (true, "max length n(n−1), (e−1)^(n−1) elements".into())
}

fn c04_interval_identification() -> Verdict {
    let mut points = 0;
    for (e, n) in SMALL_GRID {
        let p = params(e, n);
        let dist = bfs(p);
        for k in 1..e {
            let lam = lambda_power(p, k as u64);
            let top = dist[&lam];
            let mut left = HashSet::new();
            let mut right = HashSet::new();
            let mut stair = HashSet::new();
            for (w, &d) in &dist {
                let inv = w.inverse();
                if d + dist[&inv.multiply(&lam).unwrap()] == top {
                    left.insert(w.clone());
                }
                if d + dist[&lam.multiply(&inv).unwrap()] == top {
                    right.insert(w.clone());
                }
                if in_dk(w, k) {
                    stair.insert(w.clone());
                }
            }
            let members: HashSet<GroupElement> =
                Interval::build(p, k, CAP).unwrap().members().iter().cloned().collect();
            if left != right || left != stair || left != members {
                return (false, format!("({e},{n},{k}): |left| {} |right| {} |staircase| {}", left.len(), right.len(), stair.len()));
            }
            points += 1;
        }
    }
    (true, format!("{points} intervals"))
}

fn c05_balanced() -> Verdict {
    for (e, n) in SMALL_GRID {
        let p = params(e, n);
        let dist = bfs(p);
        let top = n * (n - 1);
        let mut balanced = HashSet::new();
        for (w, _) in dist.iter().filter(|(_, &d)| d == top) {
            let left: HashSet<&GroupElement> =
                dist.iter().filter(|(v, &d)| d + dist[&v.inverse().multiply(w).unwrap()] == top).map(|(v, _)| v).collect();
            let right: HashSet<&GroupElement> =
                dist.iter().filter(|(v, &d)| d + dist[&w.multiply(&v.inverse()).unwrap()] == top).map(|(v, _)| v).collect();
            if left == right {
                balanced.insert(w.clone());
            }
        }
        let powers: HashSet<GroupElement> = (1..e).map(|k| lambda_power(p, k as u64)).collect();
        if balanced != powers {
            return (false, format!("G({e},{e},{n}): {} balanced of maximal length", balanced.len()));
        }
    }
    (true, "balanced maximal elements are exactly λ^1 … λ^(e−1)".into())
}

fn c06_lattices(s: &Structures) -> Verdict {
    let mut checked = 0;
    let mut pairs = 0usize;
    for (e, n, k) in default_grid() {
        let interval = s.get(e, n, k).interval();
        if interval.len() * interval.len() > LATTICE_PAIR_LIMIT {
            continue;
        }
        let report = interval.verify_lattice();
        if !report.is_lattice() {
            return (false, format!("({e},{n},{k}): {:?}", report.counterexample));
        }
        checked += 1;
        pairs += interval.len() * (interval.len() + 1) / 2;
    }
    (true, format!("{checked} intervals, {pairs} pairs per order and bound"))
}

/// The expected lcm of two distinct atoms as a word.
fn expected_lcm(x: Generator, y: Generator, e: u32, k: u32) -> Vec<Generator> {
    use Generator::{S, T};
    match (x, y) {
        (S(a), S(b)) if a.abs_diff(b) == 1 => vec![x, y, x],
        (S(_), S(_)) => vec![x, y],
        (S(3), T(_)) | (T(_), S(3)) => vec![x, y, x],
        (S(_), T(_)) | (T(_), S(_)) => vec![x, y],
        (T(i), T(_)) => vec![T(i), T((i + e - k) % e)],
    }
}

fn c07_generator_lcms(s: &Structures) -> Verdict {
    let mut pairs = 0;
    for (e, n, k) in default_grid() {
        let interval = s.get(e, n, k).interval();
        let p = params(e, n);
        for (a, &(x, xi)) in interval.atoms().iter().enumerate() {
            for &(y, yi) in &interval.atoms()[a + 1..] {
                let want = Word(expected_lcm(x, y, e, k)).evaluate(p).unwrap();
                let want = interval.index_of(&want);
                let left = interval.join(Side::Left, xi, yi).ok();
                let right = interval.join(Side::Right, xi, yi).ok();
                if want.is_none() || left != want || right != want {
                    return (false, format!("({e},{n},{k}): lcm({x},{y})"));
                }
                pairs += 1;
            }
        }
    }
    (true, format!("{pairs} generator pairs, left join = right join = expected word"))
}

fn evaluate(p: GroupParams, k: u32, letters: &[Letter]) -> GroupElement {
    let delta = lambda_power(p, k as u64);
    let mut acc = p.identity();
    for &l in letters {
        let m = match l {
            Letter::Atom(x) | Letter::InverseAtom(x) => generator_matrix(x, p).unwrap(),
            Letter::Delta => delta.clone(),
            Letter::InverseDelta => delta.inverse(),
        };
        acc = acc.multiply(&m).unwrap();
    }
    acc
}

fn check_words(g: &Garside, e: u32, n: usize, k: u32) -> Result<(), String> {
    let p = params(e, n);
    let atoms: Vec<Generator> = g.interval().atoms().iter().map(|&(x, _)| x).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(((e as u64) << 32) | ((n as u64) << 16) | k as u64);
    for i in 0..WORDS_PER_POINT {
        let len = rng.random_range(0..=16);
        let letters: Vec<Letter> = (0..len)
            .map(|_| {
                let x = atoms[rng.random_range(0..atoms.len())];
                match rng.random_range(0..20) {
                    0 => Letter::Delta,
                    1 => Letter::InverseDelta,
                    2..=7 => Letter::InverseAtom(x),
                    _ => Letter::Atom(x),
                }
            })
            .collect();
        let nf = g.normal_form(&letters).map_err(|err| err.to_string())?;
        let proper = nf.factors.iter().all(|&f| f != g.identity() && f != g.delta());
        let greedy = nf.factors.windows(2).all(|w| g.is_greedy(w[0], w[1]));
        if !proper || !greedy {
            return Err(format!("word {i}: not a greedy normal form"));
        }
        if g.normal_form_str(&g.spell(&nf)).map_err(|err| err.to_string())? != nf {
            return Err(format!("word {i}: normalization is not idempotent"));
        }
        if g.evaluate(&nf) != evaluate(p, k, &letters) {
            return Err(format!("word {i}: wrong image in the group"));
        }
        let mut conj = vec![Letter::InverseDelta];
        conj.extend_from_slice(&letters);
        conj.push(Letter::Delta);
        let twisted = NormalForm { delta_power: nf.delta_power, factors: nf.factors.iter().map(|&f| g.tau(f)).collect() };
        if g.normal_form(&conj).unwrap() != twisted {
            return Err(format!("word {i}: Δ-conjugation is not factorwise τ"));
        }
    }
    for rel in emit_presentation(p, k).unwrap().relations {
        let nf = |w: &Word| g.normal_form(&w.letters().iter().map(|&x| Letter::Atom(x)).collect::<Vec<_>>()).unwrap();
        if nf(&rel.lhs) != nf(&rel.rhs) {
            return Err(format!("relation {} = {}", rel.lhs, rel.rhs));
        }
    }
    Ok(())
}

fn c08_normal_forms(s: &Structures) -> Verdict {
    let grid = default_grid();
    let failures: Vec<String> = grid
        .par_iter()
        .filter_map(|&(e, n, k)| check_words(s.get(e, n, k), e, n, k).err().map(|m| format!("({e},{n},{k}): {m}")))
        .collect();
    match failures.first() {
        Some(f) => (false, f.clone()),
        None => (true, format!("{} points × {WORDS_PER_POINT} words, plus every relation", grid.len())),
    }
}

fn c09_matsumoto() -> Verdict {
    let mut members = 0;
    for (e, n) in [(2, 2), (3, 2), (2, 3), (3, 3)] {
        for k in 1..e {
            let interval = Interval::build(params(e, n), k, CAP).unwrap();
            let g = Garside::build(interval, false).unwrap();
            for w in 0..g.interval().len() {
                match matsumoto_check(&g, w, 1_000_000) {
                    Ok(true) => members += 1,
                    other => return (false, format!("({e},{n},{k}) member {w}: {other:?}")),
                }
            }
        }
    }
    (true, format!("{members} members, one rewriting class each"))
}

fn c10_isomorphism() -> Verdict {
    for e in 2..=12u32 {
        for k in 1..e {
            let coprime = e.gcd(&k) == 1;
            let iso = is_isomorphic_to_cp(e, k, 3).unwrap().is_some();
            if iso != coprime || t_cycle_components(e, k) != e.gcd(&k) as usize {
                return (false, format!("(e,k) = ({e},{k})"));
            }
        }
    }
    (true, "e ≤ 12, every k".into())
}

/// ℤ^free × ℤ/c₁ × ⋯ in invariant-factor form, via prime powers.
fn invariant_form(free_rank: usize, cyclic: &[u64]) -> AbelianGroup {
    let mut by_prime: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for &c in cyclic {
        let (mut m, mut p) = (c, 2);
        while m > 1 {
            let mut q = 1;
            while m % p == 0 {
                m /= p;
                q *= p;
            }
            if q > 1 {
                by_prime.entry(p).or_default().push(q);
            }
            p += 1;
        }
    }
    let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
    let mut torsion = vec![1; len];
    for powers in by_prime.values_mut() {
        powers.sort_unstable();
        let offset = len - powers.len();
        for (i, q) in powers.iter().enumerate() {
            torsion[offset + i] *= q;
        }
    }
    AbelianGroup { free_rank, torsion }
}

fn formula_h2(e: u32, n: usize, k: u32) -> AbelianGroup {
    let d = e.gcd(&k);
    let mut cyclic = vec![(e / d) as u64];
    if n == 4 {
        cyclic.extend(std::iter::repeat_n(2, e.gcd(&(2 * k)) as usize));
    }
    invariant_form((d - 1) as usize, &cyclic)
}

fn c11_first_homology(s: &Structures) -> Verdict {
    let z = AbelianGroup { free_rank: 1, torsion: vec![] };
    for (e, n, k) in default_grid().into_iter().filter(|&(_, n, _)| n >= 3) {
        let h = Complex::build(s.get(e, n, k), Method::Closed, 0).and_then(|c| c.homology(1));
        if h.as_ref().ok() != Some(&z) {
            return (false, format!("({e},{n},{k}): {h:?}"));
        }
    }
    (true, "H1 = Z at every point with n ≥ 3".into())
}

fn second_homology(s: &Structures, n: usize, e_max: u32) -> Verdict {
    let mut bad = Vec::new();
    let mut points = 0;
    for e in 2..=e_max {
        for k in 1..e {
            let h = Complex::build(s.get(e, n, k), Method::Closed, 0).and_then(|c| c.homology(2)).unwrap();
            let want = formula_h2(e, n, k);
            if h != want {
                bad.push(format!("({e},{n},{k}) computed {h}, formula {want}"));
            }
            points += 1;
        }
    }
    if bad.is_empty() {
        (true, format!("{points} points match"))
    } else {
        (false, bad.join("; "))
    }
}

fn c12_h2_rank_three(s: &Structures) -> Verdict {
    let (ok, detail) = second_homology(s, 3, 6);
    let named = [((3, 1), (0, vec![3])), ((6, 2), (1, vec![3])), ((6, 3), (2, vec![2])), ((4, 2), (1, vec![2]))];
    for ((e, k), (free_rank, torsion)) in named {
        let h = Complex::build(s.get(e, 3, k), Method::Closed, 0).and_then(|c| c.homology(2)).unwrap();
        if h != (AbelianGroup { free_rank, torsion }) {
            return (false, format!("({e},3,{k}) computed {h}"));
        }
    }
    (ok, detail)
}

fn c13_h2_rank_four(s: &Structures) -> Verdict {
    second_homology(s, 4, 4)
}

fn c14_differentials(s: &Structures) -> Verdict {
    for (e, n, k) in [(3, 3, 1), (4, 3, 2), (3, 4, 1)] {
        let g = s.get(e, n, k);
        let basis = CellBasis::new(g, 3).unwrap();
        for r in [2, 3] {
            let closed = differential_closed_form(g, &basis, r).unwrap();
            let generic = differential_generic(g, &basis, r, DEFAULT_RECURSION_CAP).unwrap();
            if closed != generic {
                return (false, format!("({e},{n},{k}) d{r} differs:\n{closed}vs\n{generic}"));
            }
        }
        let d2 = differential_generic(g, &basis, 2, DEFAULT_RECURSION_CAP).unwrap();
        let d3 = differential_generic(g, &basis, 3, DEFAULT_RECURSION_CAP).unwrap();
        if !d2.mul(&d3).is_zero() {
            return (false, format!("({e},{n},{k}) d2·d3 ≠ 0"));
        }
    }
    (true, "generic = closed form, d2·d3 = 0".into())
}

fn c15_embedding(s: &Structures) -> Verdict {
    let mut checks = 0;
    for (e, n, k) in default_grid().into_iter().filter(|&(_, n, _)| n >= 3) {
        for i in 0..e {
            match embedding_lcm_check(s.get(e, n, k), i) {
                Ok(true) => checks += 1,
                other => return (false, format!("({e},{n},{k}) q1 ↦ t{i}·t(i−k): {other:?}")),
            }
        }
    }
    (true, format!("{checks} embeddings"))
}

/// Criteria with a wall-clock bound.
fn time_limit(id: u32) -> Option<Duration> {
    match id {
        1 | 12 => Some(Duration::from_secs(60)),
        6 => Some(Duration::from_secs(600)),
        _ => None,
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let s = Structures::build();
    println!("acceptance: built {} Garside structures in {:.2?}", s.garside.len(), start.elapsed());
    let criteria: Vec<(u32, &str, Box<dyn Fn() -> Verdict + '_>)> = vec![
        (1, "reduced-word length = Cayley distance", Box::new(c01_length_oracle)),
        (2, "unit-step law |ℓ(xw) − ℓ(w)| = 1", Box::new(c02_unit_step)),
        (3, "maximal-length census", Box::new(c03_census)),
        (4, "interval = left divisors = right divisors = staircase set", Box::new(c04_interval_identification)),
        (5, "balanced maximal-length elements = powers of λ", Box::new(c05_balanced)),
        (6, "both divisibility orders are lattices", Box::new(|| c06_lattices(&s))),
        (7, "generator lcm table", Box::new(|| c07_generator_lcms(&s))),
        (8, "greedy normal forms", Box::new(|| c08_normal_forms(&s))),
        (9, "Matsumoto property", Box::new(c09_matsumoto)),
        (10, "isomorphism criterion and t-cycle components", Box::new(c10_isomorphism)),
        (11, "H1 = Z", Box::new(|| c11_first_homology(&s))),
        (12, "H2 for n = 3", Box::new(|| c12_h2_rank_three(&s))),
        (13, "H2 for n = 4", Box::new(|| c13_h2_rank_four(&s))),
        (14, "generic vs closed-form differentials", Box::new(|| c14_differentials(&s))),
        (15, "embedding preserves generator lcms", Box::new(|| c15_embedding(&s))),
    ];
    let mut red = Vec::new();
    for (id, name, check) in &criteria {
        let t = Instant::now();
        let (mut ok, mut detail) = check();
        let elapsed = t.elapsed();
        if let Some(limit) = time_limit(*id) {
            if elapsed > limit {
                ok = false;
                detail = format!("{detail}; exceeded {limit:?}");
            }
        }
        let tag = if ok { "PASS" } else { "FAIL" };
        println!("criterion {id:02} {tag} {name}: {detail} [{elapsed:.2?}]");
        if !ok {
            red.push(*id);
        }
    }
    let green = criteria.len() - red.len();
    println!("acceptance: {green}/{} criteria pass; failing: {red:?}; expected failing: {EXPECTED_RED:?}", criteria.len());
    if red == EXPECTED_RED {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
