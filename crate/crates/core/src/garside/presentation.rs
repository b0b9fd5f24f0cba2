//! The monoid presentation of the interval monoid, its relation to the
//! classical presentation (k = 1), and rewriting checks built on it.

use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::Serialize;

use super::{Garside, NormalForm};
use crate::error::{Error, Result};
use crate::group::{GroupParams, Generator, Word};
use crate::interval::Side;
use crate::words::all_reduced_expressions;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationKind {
    /// `s_i s_j s_i = s_j s_i s_j` for |i − j| = 1.
    Braid,
    /// `s_i s_j = s_j s_i` for |i − j| > 1.
    Commute,
    /// `s_3 t_i s_3 = t_i s_3 t_i`.
    TwistedBraid,
    /// `s_j t_i = t_i s_j` for j ≥ 4.
    MixedCommute,
    /// `t_i t_{i-k} = t_j t_{j-k}`.
    Dual,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Relation {
    pub kind: RelationKind,
    pub lhs: Word,
    pub rhs: Word,
}

impl Relation {
    fn new(kind: RelationKind, lhs: Vec<Generator>, rhs: Vec<Generator>) -> Self {
        Relation { kind, lhs: Word(lhs), rhs: Word(rhs) }
    }

    /// The relation as an unordered pair of words.
    fn unordered(&self) -> (Word, Word) {
        if self.lhs <= self.rhs {
            (self.lhs.clone(), self.rhs.clone())
        } else {
            (self.rhs.clone(), self.lhs.clone())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Presentation {
    pub e: u32,
    pub n: usize,
    pub k: u32,
    pub generators: Vec<Generator>,
    pub relations: Vec<Relation>,
}

impl Presentation {
    pub fn count(&self, kind: RelationKind) -> usize {
        self.relations.iter().filter(|r| r.kind == kind).count()
    }

    pub fn to_text(&self) -> String {
        let gens: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        let mut out = format!("generators: {}\n", gens.join(" "));
        for r in &self.relations {
            out.push_str(&format!("{} = {}\n", r.lhs, r.rhs));
        }
        out
    }

    /// Diagram of the presentation: the s's form a path hanging off the
    /// t's, which sit on a circle joined by dashed edges for the dual relations.
    pub fn to_dot(&self) -> String {
        let e = self.e as usize;
        let mut out = format!(
            "graph presentation {{\n  label=\"B({e},{e},{}) with k={}\";\n  layout=neato;\n  node [shape=circle, width=0.3, fontsize=10];\n",
            self.n, self.k
        );
        let radius = 1.5_f64;
        for i in 0..e {
            let angle = std::f64::consts::TAU * i as f64 / e as f64;
            out.push_str(&format!(
                "  t{i} [label=\"t{i}\", pos=\"{:.3},{:.3}!\"];\n",
                radius * angle.cos(),
                radius * angle.sin()
            ));
        }
        for j in 3..=self.n {
            out.push_str(&format!(
                "  s{j} [label=\"s{j}\", pos=\"{:.3},0!\"];\n",
                radius + 1.2 * (j - 2) as f64
            ));
        }
        let mut dashed = BTreeSet::new();
        for i in 0..e {
            let j = (i + e - self.k as usize % e) % e;
            dashed.insert((i.min(j), i.max(j)));
        }
        for (a, b) in dashed {
            out.push_str(&format!("  t{a} -- t{b} [style=dashed];\n"));
        }
        if self.n >= 3 {
            for i in 0..e {
                out.push_str(&format!("  t{i} -- s3;\n"));
            }
        }
        for j in 4..=self.n {
            out.push_str(&format!("  s{} -- s{j};\n", j - 1));
        }
        out.push_str("}\n");
        out
    }
}

fn t(i: i64, e: u32) -> Generator {
    Generator::T(i.rem_euclid(e as i64) as u32)
}

fn s_relations(n: usize) -> Vec<Relation> {
    let mut out = Vec::new();
    for i in 3..=n as u32 {
        for j in i + 1..=n as u32 {
            let (si, sj) = (Generator::S(i), Generator::S(j));
            out.push(if j == i + 1 {
                Relation::new(RelationKind::Braid, vec![si, sj, si], vec![sj, si, sj])
            } else {
                Relation::new(RelationKind::Commute, vec![si, sj], vec![sj, si])
            });
        }
    }
    out
}

fn mixed_relations(e: u32, n: usize) -> Vec<Relation> {
    let mut out = Vec::new();
    if n >= 3 {
        for i in 0..e {
            let (ti, s3) = (Generator::T(i), Generator::S(3));
            out.push(Relation::new(RelationKind::TwistedBraid, vec![s3, ti, s3], vec![ti, s3, ti]));
        }
    }
    for j in 4..=n as u32 {
        for i in 0..e {
            let (ti, sj) = (Generator::T(i), Generator::S(j));
            out.push(Relation::new(RelationKind::MixedCommute, vec![sj, ti], vec![ti, sj]));
        }
    }
    out
}

/// The defining relations, with the dual relations written as
/// `t_i t_{i-k} = t_0 t_{-k}` for 1 ≤ i ≤ e−1.
pub fn emit_presentation(params: GroupParams, k: u32) -> Result<Presentation> {
    params.check_k(k)?;
    let (e, n) = (params.e(), params.n());
    let mut relations = s_relations(n);
    relations.extend(mixed_relations(e, n));
    for i in 1..e as i64 {
        relations.push(Relation::new(
            RelationKind::Dual,
            vec![t(i, e), t(i - k as i64, e)],
            vec![t(0, e), t(-(k as i64), e)],
        ));
    }
    Ok(Presentation { e, n, k, generators: params.generators(), relations })
}

/// Every instance of the defining relations, dual relations taken over all
/// pairs i ≠ j, as unordered word pairs.
fn full_relation_set(e: u32, n: usize, k: u32) -> HashSet<(Word, Word)> {
    let mut rels = s_relations(n);
    rels.extend(mixed_relations(e, n));
    for i in 0..e as i64 {
        for j in 0..e as i64 {
            if i != j {
                rels.push(Relation::new(
                    RelationKind::Dual,
                    vec![t(i, e), t(i - k as i64, e)],
                    vec![t(j, e), t(j - k as i64, e)],
                ));
            }
        }
    }
    rels.iter().map(Relation::unordered).collect()
}

/// Number of connected components of the graph on ℤ/e with edges {i, i−k}.
pub fn t_cycle_components(e: u32, k: u32) -> usize {
    let e = e as usize;
    let mut parent: Vec<usize> = (0..e).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..e {
        let j = (i + e - k as usize % e) % e;
        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
        parent[a] = b;
    }
    (0..e).filter(|&i| find(&mut parent, i) == i).count()
}

/// A generator map from the classical presentation (k = 1) onto the
/// presentation for `k`, checked to carry relations onto relations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CpWitness {
    pub images: Vec<(Generator, Generator)>,
}

impl CpWitness {
    fn apply(&self, w: &Word) -> Word {
        w.letters()
            .iter()
            .map(|x| self.images.iter().find(|(a, _)| a == x).map(|&(_, b)| b).unwrap_or(*x))
            .collect()
    }
}

/// Decides whether the monoid for `k` is isomorphic to the classical one
/// by counting the components of the dual-relation graph. When it is, the
/// map `t_i ↦ t_{(i+1)k}`, `s_j ↦ s_j` is returned after checking that it
/// is a bijection on generators and on the full relation sets.
pub fn is_isomorphic_to_cp(e: u32, k: u32, n: usize) -> Result<Option<CpWitness>> {
    let params = GroupParams::new(e, n)?;
    params.check_k(k)?;
    if t_cycle_components(e, k) != 1 {
        return Ok(None);
    }
    let mut images: Vec<(Generator, Generator)> = (0..e as i64)
        .map(|i| (Generator::T(i as u32), t((i + 1) * k as i64, e)))
        .collect();
    images.extend((3..=n as u32).map(|j| (Generator::S(j), Generator::S(j))));
    let witness = CpWitness { images };

    let targets: HashSet<Generator> = witness.images.iter().map(|&(_, b)| b).collect();
    if targets.len() != params.generators().len() {
        return Err(Error::TheoremViolation(format!(
            "generator map for e={e}, k={k} is not a bijection"
        )));
    }
    let source = full_relation_set(e, n, 1);
    let mapped: HashSet<(Word, Word)> = source
        .iter()
        .map(|(a, b)| {
            let (a, b) = (witness.apply(a), witness.apply(b));
            if a <= b {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect();
    if mapped != full_relation_set(e, n, k) || mapped.len() != source.len() {
        return Err(Error::TheoremViolation(format!(
            "generator map for e={e}, k={k} does not match the relation sets"
        )));
    }
    Ok(Some(witness))
}

/// Whether all reduced expressions of the simple `w` are connected by
/// applying defining relations inside words.
pub fn matsumoto_check(g: &Garside, w: usize, cap: usize) -> Result<bool> {
    let element = g.interval().element(w);
    let all: HashSet<Word> = all_reduced_expressions(element, cap)?.into_iter().collect();
    let presentation = emit_presentation(g.params(), g.k())?;
    let rules: Vec<(&[Generator], &[Generator])> = presentation
        .relations
        .iter()
        .flat_map(|r| [(r.lhs.letters(), r.rhs.letters()), (r.rhs.letters(), r.lhs.letters())])
        .collect();
    let start = all.iter().min().cloned().unwrap_or_default();
    let mut seen: HashSet<Word> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(word) = queue.pop_front() {
        let letters = word.letters();
        for &(from, to) in &rules {
            if from.len() > letters.len() {
                continue;
            }
            for pos in 0..=letters.len() - from.len() {
                if &letters[pos..pos + from.len()] == from {
                    let mut next = letters[..pos].to_vec();
                    next.extend_from_slice(to);
                    next.extend_from_slice(&letters[pos + from.len()..]);
                    let next = Word(next);
                    if seen.insert(next.clone()) {
                        if seen.len() > cap {
                            return Err(Error::cap("rewriting closure", seen.len() as u128, cap));
                        }
                        queue.push_back(next);
                    }
                }
            }
        }
    }
    Ok(seen == all)
}

/// Checks that the map from the Artin monoid of type B_{n-1}
/// (`q_1 ↦ t_i t_{i-k}`, `q_m ↦ s_{m+1}`) sends lcms of generators to joins
/// in the interval.
pub fn embedding_lcm_check(g: &Garside, i: u32) -> Result<bool> {
    let params = g.params();
    let (e, n, k) = (params.e(), params.n(), g.k());
    if n < 3 {
        return Err(Error::Unsupported("the embedding needs n >= 3".into()));
    }
    let image = |m: usize| -> Vec<Generator> {
        if m == 1 {
            vec![t(i as i64, e), t(i as i64 - k as i64, e)]
        } else {
            vec![Generator::S(m as u32 + 1)]
        }
    };
    let simple = |word: &[Generator]| -> Result<usize> {
        let el = Word(word.to_vec()).evaluate(params)?;
        g.interval().index_of(&el).ok_or_else(|| {
            Error::TheoremViolation(format!("{} is not simple", Word(word.to_vec())))
        })
    };
    let positive = |word: &[Generator]| -> Result<NormalForm> {
        let mut nf = NormalForm::default();
        for &x in word {
            let a = g.atom(x).expect("generator in range");
            g.push_simple(&mut nf, a);
        }
        Ok(nf)
    };
    for a in 1..n {
        for b in a + 1..n {
            let m = match (a, b) {
                (1, 2) => 4,
                _ if b == a + 1 => 3,
                _ => 2,
            };
            let mut lcm = Vec::new();
            for step in 0..m {
                lcm.extend(image(if step % 2 == 0 { a } else { b }));
            }
            let join = g.interval().join(Side::Left, simple(&image(a))?, simple(&image(b))?)?;
            if g.simple(join) != positive(&lcm)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
