//! The interval Garside monoid of `[1, λ^k]` and its group of fractions.
//!
//! Simples are members of the interval, referred to by index. Elements of
//! the group of fractions are kept only as [`NormalForm`]s `Δ^p f_1 ⋯ f_m`
//! where the factors form a left-greedy sequence of proper simples.

mod presentation;

pub use presentation::{
    embedding_lcm_check, emit_presentation, is_isomorphic_to_cp, matsumoto_check,
    t_cycle_components, CpWitness, Presentation, Relation, RelationKind,
};

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{lambda_power, ElementJson, GroupElement, GroupParams, Generator, Word};
use crate::interval::{Interval, Side};
use crate::words::reduced_expression;

/// A letter of a signed word: an atom, its inverse, or `Δ^{±1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    Atom(Generator),
    InverseAtom(Generator),
    Delta,
    InverseDelta,
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Atom(x) => write!(f, "{x}"),
            Letter::InverseAtom(x) => write!(f, "{x}^-1"),
            Letter::Delta => f.write_str("D"),
            Letter::InverseDelta => f.write_str("D^-1"),
        }
    }
}

/// Parses tokens such as `t0`, `s3^-1`, `D`, `D^-1` separated by whitespace.
pub fn parse_signed_word(s: &str, params: GroupParams) -> Result<Vec<Letter>> {
    s.split_whitespace()
        .map(|token| {
            let (body, inverse) = match token.split_once('^') {
                None => (token, false),
                Some((body, "-1")) => (body, true),
                Some(_) => {
                    return Err(Error::InvalidToken {
                        token: token.to_string(),
                        reason: "the only exponent accepted is ^-1".to_string(),
                    })
                }
            };
            if body == "D" {
                return Ok(if inverse { Letter::InverseDelta } else { Letter::Delta });
            }
            let x: Generator = body.parse().map_err(|_| Error::InvalidToken {
                token: token.to_string(),
                reason: "expected tI, sJ or D, optionally followed by ^-1".to_string(),
            })?;
            x.check(params)?;
            Ok(if inverse { Letter::InverseAtom(x) } else { Letter::Atom(x) })
        })
        .collect()
}

/// `Δ^delta_power · factors[0] ⋯ factors[m-1]` with every factor a proper
/// simple and each adjacent pair left-greedy.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct NormalForm {
    pub delta_power: i64,
    pub factors: Vec<usize>,
}

impl NormalForm {
    /// Whether the element lies in the monoid.
    pub fn is_positive(&self) -> bool {
        self.delta_power >= 0
    }

    pub fn is_identity(&self) -> bool {
        self.delta_power == 0 && self.factors.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalFormJson {
    pub delta_power: i64,
    pub factors: Vec<ElementJson>,
}

/// Garside structure on the interval `[1, λ^k]` with Garside element Δ = λ^k.
#[derive(Debug, Clone)]
pub struct Garside {
    interval: Interval,
    delta: usize,
    /// ∂(s) = s⁻¹Δ.
    left_complement: Vec<usize>,
    /// ∂'(s) = Δs⁻¹.
    right_complement: Vec<usize>,
    /// τ(s) = Δ⁻¹sΔ.
    tau: Vec<usize>,
    tau_inv: Vec<usize>,
}

impl Garside {
    /// Tabulates complements and the Garside automorphism. With `verify`
    /// set, the lattice property of both orders is checked first.
    pub fn build(interval: Interval, verify: bool) -> Result<Self> {
        if verify {
            let report = interval.verify_lattice();
            if let Some(v) = report.counterexample {
                return Err(v.into());
            }
        }
        let delta = interval.top();
        let d = interval.element(delta).clone();
        let d_inv = d.inverse();
        let size = interval.len();
        let lookup = |w: GroupElement, what: &str| {
            interval.index_of(&w).ok_or_else(|| {
                Error::TheoremViolation(format!("{what} {w} lies outside the interval"))
            })
        };
        let mut left_complement = Vec::with_capacity(size);
        let mut right_complement = Vec::with_capacity(size);
        let mut tau = Vec::with_capacity(size);
        for s in interval.members() {
            let s_inv = s.inverse();
            left_complement.push(lookup(s_inv.mul_unchecked(&d), "left complement")?);
            right_complement.push(lookup(d.mul_unchecked(&s_inv), "right complement")?);
            tau.push(lookup(d_inv.mul_unchecked(s).mul_unchecked(&d), "conjugate")?);
        }
        let mut tau_inv = vec![usize::MAX; size];
        for (s, &t) in tau.iter().enumerate() {
            if tau_inv[t] != usize::MAX {
                return Err(Error::TheoremViolation("conjugation by Δ is not injective".into()));
            }
            tau_inv[t] = s;
        }
        let top = interval.length(delta);
        for s in 0..size {
            if interval.length(s) + interval.length(left_complement[s]) != top
                || interval.length(s) + interval.length(right_complement[s]) != top
            {
                return Err(Error::TheoremViolation(format!(
                    "complement of simple {s} has the wrong length"
                )));
            }
        }
        Ok(Garside { interval, delta, left_complement, right_complement, tau, tau_inv })
    }

    pub fn interval(&self) -> &Interval {
        &self.interval
    }

    pub fn params(&self) -> GroupParams {
        self.interval.params()
    }

    pub fn k(&self) -> u32 {
        self.interval.k()
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn identity(&self) -> usize {
        self.interval.identity()
    }

    pub fn left_complement(&self, s: usize) -> usize {
        self.left_complement[s]
    }

    pub fn right_complement(&self, s: usize) -> usize {
        self.right_complement[s]
    }

    pub fn tau(&self, s: usize) -> usize {
        self.tau[s]
    }

    pub fn tau_inv(&self, s: usize) -> usize {
        self.tau_inv[s]
    }

    /// Whether conjugation by Δ fixes every simple.
    pub fn delta_is_central(&self) -> bool {
        self.tau.iter().enumerate().all(|(s, &t)| s == t)
    }

    pub fn atom(&self, x: Generator) -> Option<usize> {
        self.interval.atom(x)
    }

    /// Left gcd of two simples. The lattice property makes the last common
    /// divisor in member order the greatest one.
    fn left_meet(&self, a: usize, b: usize) -> usize {
        let da = self.interval.down_set(Side::Left, a).as_slice();
        let db = self.interval.down_set(Side::Left, b).as_slice();
        for (i, (x, y)) in da.iter().zip(db).enumerate().rev() {
            let both = x & y;
            if both != 0 {
                return i * usize::BITS as usize + (usize::BITS - 1 - both.leading_zeros()) as usize;
            }
        }
        self.identity()
    }

    /// Whether `(a, b)` is left-greedy: ∂(a) and b have no common left divisor but 1.
    pub fn is_greedy(&self, a: usize, b: usize) -> bool {
        self.left_meet(self.left_complement[a], b) == self.identity()
    }

    /// Whether `nf` is in normal form: proper factors, each pair left-greedy.
    pub fn is_normal(&self, nf: &NormalForm) -> bool {
        nf.factors.iter().all(|&f| f != self.identity() && f != self.delta)
            && nf.factors.windows(2).all(|p| self.is_greedy(p[0], p[1]))
    }

    /// Moves the largest possible part of `b` into `a`.
    pub fn normalize_pair(&self, a: usize, b: usize) -> (usize, usize) {
        let t = self.left_meet(self.left_complement[a], b);
        if t == self.identity() {
            return (a, b);
        }
        let el = |i| self.interval.element(i);
        let a2 = el(a).mul_unchecked(el(t));
        let b2 = el(t).inverse().mul_unchecked(el(b));
        let a2 = self.interval.index_of(&a2).expect("a·t is simple");
        let b2 = self.interval.index_of(&b2).expect("t⁻¹·b is simple");
        (a2, b2)
    }

    /// Normal form of a single simple.
    pub fn simple(&self, s: usize) -> NormalForm {
        let mut nf = NormalForm::default();
        self.push_simple(&mut nf, s);
        nf
    }

    /// Normal form of Δ^p.
    pub fn delta_power(&self, p: i64) -> NormalForm {
        NormalForm { delta_power: p, factors: Vec::new() }
    }

    /// Right multiplication by Δ^q: `f Δ = Δ τ(f)`.
    pub fn mul_delta(&self, nf: &mut NormalForm, q: i64) {
        nf.delta_power += q;
        let steps = q.unsigned_abs();
        let table = if q > 0 { &self.tau } else { &self.tau_inv };
        for f in nf.factors.iter_mut() {
            for _ in 0..steps {
                *f = table[*f];
            }
        }
    }

    /// Right multiplication by a simple.
    pub fn push_simple(&self, nf: &mut NormalForm, s: usize) {
        if s == self.identity() {
            return;
        }
        nf.factors.push(s);
        // Sweep right to left, stopping once a pair is left unchanged.
        let mut i = nf.factors.len() - 1;
        while i > 0 {
            let (a, b) = (nf.factors[i - 1], nf.factors[i]);
            let (a2, b2) = self.normalize_pair(a, b);
            if (a2, b2) == (a, b) {
                break;
            }
            nf.factors[i - 1] = a2;
            nf.factors[i] = b2;
            i -= 1;
        }
        if !nf.factors.windows(2).all(|p| self.is_greedy(p[0], p[1])) {
            self.settle(&mut nf.factors);
        }
        let leading = nf.factors.iter().take_while(|&&f| f == self.delta).count();
        if leading > 0 {
            nf.factors.drain(..leading);
            nf.delta_power += leading as i64;
        }
        while nf.factors.last() == Some(&self.identity()) {
            nf.factors.pop();
        }
    }

    /// Full right-to-left passes until every adjacent pair is greedy.
    fn settle(&self, factors: &mut [usize]) {
        let mut changed = true;
        while changed {
            changed = false;
            for i in (1..factors.len()).rev() {
                let (a, b) = (factors[i - 1], factors[i]);
                let (a2, b2) = self.normalize_pair(a, b);
                if (a2, b2) != (a, b) {
                    factors[i - 1] = a2;
                    factors[i] = b2;
                    changed = true;
                }
            }
        }
    }

    /// Right multiplication by one signed letter.
    pub fn push_letter(&self, nf: &mut NormalForm, letter: Letter) -> Result<()> {
        let atom = |x: Generator| {
            self.atom(x).ok_or_else(|| Error::GeneratorOutOfRange {
                generator: x.to_string(),
                e: self.params().e(),
                n: self.params().n(),
            })
        };
        match letter {
            Letter::Atom(x) => self.push_simple(nf, atom(x)?),
            // x⁻¹ = Δ⁻¹ · (Δx⁻¹)
            Letter::InverseAtom(x) => {
                let x = atom(x)?;
                self.mul_delta(nf, -1);
                self.push_simple(nf, self.right_complement[x]);
            }
            Letter::Delta => self.mul_delta(nf, 1),
            Letter::InverseDelta => self.mul_delta(nf, -1),
        }
        Ok(())
    }

    pub fn normal_form(&self, letters: &[Letter]) -> Result<NormalForm> {
        let mut nf = NormalForm::default();
        for &letter in letters {
            self.push_letter(&mut nf, letter)?;
        }
        Ok(nf)
    }

    pub fn parse(&self, word: &str) -> Result<Vec<Letter>> {
        parse_signed_word(word, self.params())
    }

    pub fn normal_form_str(&self, word: &str) -> Result<NormalForm> {
        self.normal_form(&self.parse(word)?)
    }

    /// Word problem in the group of fractions.
    pub fn words_equal(&self, w1: &str, w2: &str) -> Result<bool> {
        Ok(self.normal_form_str(w1)? == self.normal_form_str(w2)?)
    }

    /// Product of two normal forms.
    pub fn multiply(&self, a: &NormalForm, b: &NormalForm) -> NormalForm {
        let mut out = a.clone();
        self.mul_delta(&mut out, b.delta_power);
        for &f in &b.factors {
            self.push_simple(&mut out, f);
        }
        out
    }

    pub fn inverse(&self, a: &NormalForm) -> NormalForm {
        // (Δ^p f_1 ⋯ f_m)⁻¹ = f_m⁻¹ ⋯ f_1⁻¹ Δ^{-p}, with f⁻¹ = Δ⁻¹ ∂'(f).
        let mut out = NormalForm::default();
        for &f in a.factors.iter().rev() {
            self.mul_delta(&mut out, -1);
            self.push_simple(&mut out, self.right_complement[f]);
        }
        self.mul_delta(&mut out, -a.delta_power);
        out
    }

    /// `a · s⁻¹` for a simple `s`, if that element is positive.
    pub fn right_quotient(&self, a: &NormalForm, s: usize) -> Option<NormalForm> {
        let mut out = a.clone();
        self.mul_delta(&mut out, -1);
        self.push_simple(&mut out, self.right_complement[s]);
        out.is_positive().then_some(out)
    }

    /// Whether the simple `s` right-divides the positive element `a`.
    pub fn right_divides(&self, s: usize, a: &NormalForm) -> bool {
        self.right_quotient(a, s).is_some()
    }

    /// Image in G(e,e,n).
    pub fn evaluate(&self, nf: &NormalForm) -> GroupElement {
        let params = self.params();
        let e = params.e() as i64;
        let power = (nf.delta_power * self.k() as i64).rem_euclid(e) as u64;
        let mut acc = lambda_power(params, power);
        for &f in &nf.factors {
            acc = acc.mul_unchecked(self.interval.element(f));
        }
        acc
    }

    /// A positive word over the atoms for a simple.
    pub fn simple_word(&self, s: usize) -> Word {
        reduced_expression(self.interval.element(s))
    }

    /// Signed word spelling a normal form, `D` standing for Δ.
    pub fn spell(&self, nf: &NormalForm) -> String {
        let delta = if nf.delta_power >= 0 { "D" } else { "D^-1" };
        let mut parts: Vec<String> =
            (0..nf.delta_power.unsigned_abs()).map(|_| delta.to_string()).collect();
        parts.extend(nf.factors.iter().map(|&f| self.simple_word(f).to_string()));
        parts.join(" ")
    }

    pub fn to_json(&self, nf: &NormalForm) -> NormalFormJson {
        NormalFormJson {
            delta_power: nf.delta_power,
            factors: nf.factors.iter().map(|&f| self.interval.element(f).to_json()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{generator_matrix, DEFAULT_GROUP_CAP};

    fn garside(e: u32, n: usize, k: u32) -> Garside {
        let params = GroupParams::new(e, n).unwrap();
        Garside::build(Interval::build(params, k, DEFAULT_GROUP_CAP).unwrap(), true).unwrap()
    }

    #[test]
    fn complements() {
        let g = garside(3, 3, 1);
        assert_eq!(g.left_complement(g.identity()), g.delta());
        assert_eq!(g.left_complement(g.delta()), g.identity());
        assert_eq!(g.tau(g.identity()), g.identity());
        assert_eq!(g.tau(g.delta()), g.delta());
        let t1 = g.atom(Generator::T(1)).unwrap();
        let params = g.params();
        let expected = generator_matrix(Generator::T(1), params)
            .unwrap()
            .mul_unchecked(&lambda_power(params, 1));
        assert_eq!(g.interval().element(g.left_complement(t1)), &expected);
    }

    #[test]
    fn pair_normalization() {
        let g = garside(3, 2, 1);
        let t0 = g.atom(Generator::T(0)).unwrap();
        let t1 = g.atom(Generator::T(1)).unwrap();
        assert_eq!(g.normalize_pair(g.delta(), t1), (g.delta(), t1));
        assert_eq!(g.normalize_pair(t1, t0), (g.delta(), g.identity()));
        for a in 0..g.interval().len() {
            for b in 0..g.interval().len() {
                let (a2, b2) = g.normalize_pair(a, b);
                assert_eq!(g.normalize_pair(a2, b2), (a2, b2));
                assert!(g.is_greedy(a2, b2));
            }
        }
    }

    #[test]
    fn normal_form_examples() {
        let g = garside(3, 3, 1);
        assert!(g.normal_form_str("t0 t0^-1").unwrap().is_identity());
        assert!(g.words_equal("t1 t0", "t2 t1").unwrap());
        for (e, k) in [(3, 1), (4, 2), (5, 3), (6, 2)] {
            let g = garside(e, 3, k);
            let w1 = format!("t0 t{}", e - k);
            let w2 = format!("t{k} t0");
            assert!(g.words_equal(&w1, &w2).unwrap());
        }
        let g = garside(3, 2, 1);
        assert!(!g.words_equal("t0 t1", "t1 t0").unwrap());
        assert!(g.words_equal("s0", "t0").is_err());
        assert!(g.normal_form_str("t0^2").is_err());
    }

    #[test]
    fn tau_compatibility() {
        let g = garside(4, 3, 2);
        for s in 0..g.interval().len() {
            let mut nf = g.delta_power(1);
            g.push_simple(&mut nf, s);
            g.mul_delta(&mut nf, -1);
            assert_eq!(nf, g.simple(g.tau_inv(s)));
        }
    }

    #[test]
    fn inverse_and_quotients() {
        let g = garside(3, 3, 2);
        let w = g.normal_form_str("t0 s3 t1^-1 D t2 s3^-1").unwrap();
        let inv = g.inverse(&w);
        assert!(g.multiply(&w, &inv).is_identity());
        assert!(g.multiply(&inv, &w).is_identity());
        let x = g.normal_form_str("s3 t1 t0").unwrap();
        let t0 = g.atom(Generator::T(0)).unwrap();
        let s3 = g.atom(Generator::S(3)).unwrap();
        assert_eq!(g.right_quotient(&x, t0).unwrap(), g.normal_form_str("s3 t1").unwrap());
        assert!(g.right_quotient(&x, s3).is_none());
    }

    #[test]
    fn evaluation_is_sound() {
        let g = garside(4, 3, 3);
        let params = g.params();
        let word = "t0 s3 t1^-1 D t2 s3^-1 t3 t3 s3";
        let nf = g.normal_form_str(word).unwrap();
        let mut expected = params.identity();
        for letter in g.parse(word).unwrap() {
            let m = match letter {
                Letter::Atom(x) | Letter::InverseAtom(x) => generator_matrix(x, params).unwrap(),
                Letter::Delta => lambda_power(params, 3),
                Letter::InverseDelta => lambda_power(params, 3).inverse(),
            };
            expected = expected.mul_unchecked(&m);
        }
        assert_eq!(g.evaluate(&nf), expected);
        assert_eq!(g.normal_form_str(&g.spell(&nf)).unwrap(), nf);
    }

    #[test]
    fn atom_count() {
        for (e, n, k) in [(3, 3, 1), (4, 4, 2), (5, 2, 4)] {
            let g = garside(e, n, k);
            let atoms = (0..g.interval().len()).filter(|&s| g.interval().length(s) == 1).count();
            assert_eq!(atoms, e as usize + n - 2);
        }
    }
}
