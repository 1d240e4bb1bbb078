//! Degree-truncated noncommutative series with exact rational coefficients.
//!
//! A [`NCSeries`] stores the coefficients of every word of degree at most
//! `cap`. Products that would produce words above the cap drop them, which is
//! arithmetic modulo the degree filtration. Only coefficient *queries* above
//! the cap are errors.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, parse_q, Q};
use crate::words::Word;

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SeriesRepr", into = "SeriesRepr")]
pub struct NCSeries {
    m: usize,
    cap: usize,
    terms: BTreeMap<Word, Q>,
}

impl NCSeries {
    pub fn zero(m: usize, cap: usize) -> Self {
        NCSeries { m, cap, terms: BTreeMap::new() }
    }

    /// The unit series `1 = 1 e`.
    pub fn one(m: usize, cap: usize) -> Self {
        Self::constant(m, cap, Q::one())
    }

    pub fn constant(m: usize, cap: usize, c: Q) -> Self {
        let mut s = Self::zero(m, cap);
        s.add_term(Word::empty(), c);
        s
    }

    /// A single term `coeff * word`; dropped if the word exceeds the cap.
    pub fn monomial(m: usize, cap: usize, word: Word, coeff: Q) -> Result<Self> {
        word.check_alphabet(m)?;
        let mut s = Self::zero(m, cap);
        s.add_term(word, coeff);
        Ok(s)
    }

    pub fn from_terms<I>(m: usize, cap: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, Q)>,
    {
        let mut s = Self::zero(m, cap);
        for (w, c) in terms {
            w.check_alphabet(m)?;
            s.add_term(w, c);
        }
        Ok(s)
    }

    /// Convenience for tests and examples: `&[("x1.x2", 3), ...]`.
    pub fn from_pairs(m: usize, cap: usize, pairs: &[(&str, i64)]) -> Result<Self> {
        let mut terms = Vec::with_capacity(pairs.len());
        for (w, c) in pairs {
            terms.push((Word::parse(w)?, crate::rational::q(*c)));
        }
        Self::from_terms(m, cap, terms)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Q)> {
        self.terms.iter()
    }

    /// `<c, w>`; errors if `w` lies above the truncation degree.
    pub fn coefficient(&self, w: &Word) -> Result<Q> {
        if w.degree() > self.cap {
            return Err(Error::QueryBeyondCap { word: w.to_string(), cap: self.cap });
        }
        Ok(self.get(w))
    }

    /// Stored coefficient or zero, with no cap check.
    pub fn get(&self, w: &Word) -> Q {
        self.terms.get(w).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant_term(&self) -> Q {
        self.get(&Word::empty())
    }

    pub(crate) fn add_term(&mut self, w: Word, c: Q) {
        if w.degree() > self.cap || c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_same_alphabet(&self, other: &NCSeries) -> Result<()> {
        if self.m != other.m {
            return Err(Error::AlphabetMismatch { left: self.m, right: other.m });
        }
        Ok(())
    }

    /// Same terms, truncated to a (possibly smaller) cap.
    pub fn truncate(&self, cap: usize) -> NCSeries {
        let cap = cap.min(self.cap);
        let terms = self.terms.iter().filter(|(w, _)| w.degree() <= cap).map(|(w, c)| (w.clone(), c.clone())).collect();
        NCSeries { m: self.m, cap, terms }
    }

    /// Reinterprets the series at another cap. Raising the cap asserts that
    /// the missing coefficients are zero (exact polynomials).
    pub fn with_cap(&self, cap: usize) -> NCSeries {
        let mut s = self.truncate(cap);
        s.cap = cap;
        s
    }

    /// Same terms viewed over a larger alphabet.
    pub fn with_alphabet(&self, m: usize) -> Result<NCSeries> {
        if m < self.m && self.terms.keys().any(|w| w.max_letter() > m) {
            return Err(Error::AlphabetMismatch { left: self.m, right: m });
        }
        Ok(NCSeries { m, cap: self.cap, terms: self.terms.clone() })
    }

    pub fn add(&self, other: &NCSeries) -> Result<NCSeries> {
        self.check_same_alphabet(other)?;
        Ok(self.add_unchecked(other))
    }

    pub(crate) fn add_unchecked(&self, other: &NCSeries) -> NCSeries {
        let mut out = self.truncate(other.cap);
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &NCSeries) -> Result<NCSeries> {
        self.check_same_alphabet(other)?;
        Ok(self.add_unchecked(&other.neg()))
    }

    pub fn neg(&self) -> NCSeries {
        NCSeries { m: self.m, cap: self.cap, terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect() }
    }

    pub fn scale(&self, k: &Q) -> NCSeries {
        if k.is_zero() {
            return NCSeries::zero(self.m, self.cap);
        }
        NCSeries { m: self.m, cap: self.cap, terms: self.terms.iter().map(|(w, c)| (w.clone(), c * k)).collect() }
    }

    /// Concatenation product.
    pub fn concat(&self, other: &NCSeries) -> Result<NCSeries> {
        self.check_same_alphabet(other)?;
        let cap = self.cap.min(other.cap);
        let mut out = NCSeries::zero(self.m, cap);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if a.degree() + b.degree() <= cap {
                    out.add_term(a.concat(b), ca * cb);
                }
            }
        }
        Ok(out)
    }

    /// `x_i c`, keeping the cap.
    pub fn left_letter(&self, i: usize) -> NCSeries {
        let mut out = NCSeries::zero(self.m, self.cap);
        for (w, c) in &self.terms {
            if w.degree() + i <= self.cap {
                out.terms.insert(w.prepend(i), c.clone());
            }
        }
        out
    }

    /// `c x_i`, keeping the cap.
    pub fn right_letter(&self, i: usize) -> NCSeries {
        let mut out = NCSeries::zero(self.m, self.cap);
        for (w, c) in &self.terms {
            if w.degree() + i <= self.cap {
                out.terms.insert(w.append(i), c.clone());
            }
        }
        out
    }

    pub fn shuffle(&self, other: &NCSeries) -> Result<NCSeries> {
        self.check_same_alphabet(other)?;
        Ok(self.shuffle_unchecked(other))
    }

    pub(crate) fn shuffle_unchecked(&self, other: &NCSeries) -> NCSeries {
        let cap = self.cap.min(other.cap);
        self.shuffle_capped(other, cap)
    }

    /// Shuffle keeping only words of degree `<= limit` (itself `<=` both caps).
    pub(crate) fn shuffle_capped(&self, other: &NCSeries, limit: usize) -> NCSeries {
        let cap = self.cap.min(other.cap);
        let limit = limit.min(cap);
        let mut acc: HashMap<Word, Q> = HashMap::new();
        let right = by_degree(other, limit);
        for (a, ca) in &self.terms {
            if a.degree() > limit {
                break;
            }
            let room = limit - a.degree();
            for bucket in right.iter().take(room + 1) {
                for &(b, cb) in bucket {
                    let coeff = ca * cb;
                    shuffle_words(a, b, &mut |w| {
                        *acc.entry(w).or_insert_with(Q::zero) += &coeff;
                    });
                }
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        NCSeries { m: self.m, cap, terms }
    }

    /// k-fold shuffle power; `k = 0` gives the unit.
    pub fn shuffle_power(&self, k: usize) -> NCSeries {
        let mut acc = NCSeries::one(self.m, self.cap);
        for _ in 0..k {
            acc = acc.shuffle_unchecked(self);
            if acc.is_zero() {
                break;
            }
        }
        acc
    }

    /// Inverse under the shuffle product via the geometric series of the
    /// proper part: `c^{-1} = <c,e>^{-1} sum_k (c')^k` with `c' = 1 - c/<c,e>`.
    pub fn shuffle_inverse(&self) -> Result<NCSeries> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(Error::NotInvertible);
        }
        let inv0 = c0.recip();
        let proper = NCSeries::one(self.m, self.cap).add_unchecked(&self.scale(&inv0).neg());
        let mut total = NCSeries::one(self.m, self.cap);
        let mut power = NCSeries::one(self.m, self.cap);
        for _ in 0..self.cap {
            power = power.shuffle_unchecked(&proper);
            if power.is_zero() {
                break;
            }
            total = total.add_unchecked(&power);
        }
        Ok(total.scale(&inv0))
    }

    /// `c(n)`: the terms of degree exactly `n - 1`.
    pub fn graded_component(&self, n: usize) -> Result<NCSeries> {
        if n == 0 {
            return Err(Error::InvalidArgument("graded components start at n = 1".into()));
        }
        if n - 1 > self.cap {
            return Err(Error::QueryBeyondCap { word: format!("<degree {}>", n - 1), cap: self.cap });
        }
        let terms = self.terms.iter().filter(|(w, _)| w.degree() == n - 1).map(|(w, c)| (w.clone(), c.clone())).collect();
        Ok(NCSeries { m: self.m, cap: self.cap, terms })
    }

    /// First word (canonical order) where the two series differ, up to the
    /// smaller cap.
    pub fn first_difference(&self, other: &NCSeries) -> Option<(Word, Q, Q)> {
        let cap = self.cap.min(other.cap);
        let mut words: Vec<&Word> = self.terms.keys().chain(other.terms.keys()).filter(|w| w.degree() <= cap).collect();
        words.sort();
        words.dedup();
        words.into_iter().find_map(|w| {
            let (a, b) = (self.get(w), other.get(w));
            (a != b).then(|| (w.clone(), a, b))
        })
    }

    /// Equality of all coefficients up to the smaller of the two caps.
    pub fn agrees_with(&self, other: &NCSeries) -> bool {
        self.m == other.m && self.first_difference(other).is_none()
    }

    /// Largest absolute coefficient difference up to the smaller cap.
    pub fn max_abs_difference(&self, other: &NCSeries) -> Q {
        let cap = self.cap.min(other.cap);
        let mut best = Q::zero();
        for w in self.terms.keys().chain(other.terms.keys()) {
            if w.degree() <= cap {
                let d = (self.get(w) - other.get(w)).abs();
                if d > best {
                    best = d;
                }
            }
        }
        best
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(Word::degree)
    }

    /// `coeff word | coeff word | ...` in canonical order; `0` when empty.
    pub fn render_row(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms.iter().map(|(w, c)| format!("{} {}", fmt_q(c), w)).collect::<Vec<_>>().join(" | ")
    }
}

fn by_degree(s: &NCSeries, limit: usize) -> Vec<Vec<(&Word, &Q)>> {
    let mut buckets: Vec<Vec<(&Word, &Q)>> = vec![Vec::new(); limit + 1];
    for (w, c) in &s.terms {
        if w.degree() > limit {
            break;
        }
        buckets[w.degree()].push((w, c));
    }
    buckets
}

/// Calls `emit` once per interleaving of `a` and `b` (with multiplicity).
pub fn shuffle_words(a: &Word, b: &Word, emit: &mut impl FnMut(Word)) {
    let degree = a.degree() + b.degree();
    let mut buf = Vec::with_capacity(a.len() + b.len());
    interleave(a.raw(), b.raw(), &mut buf, &mut |letters| emit(Word::from_raw(letters.to_vec(), degree)));
}

fn interleave(a: &[u8], b: &[u8], buf: &mut Vec<u8>, emit: &mut impl FnMut(&[u8])) {
    if a.is_empty() || b.is_empty() {
        let n = buf.len();
        buf.extend_from_slice(a);
        buf.extend_from_slice(b);
        emit(buf);
        buf.truncate(n);
        return;
    }
    buf.push(a[0]);
    interleave(&a[1..], b, buf, emit);
    buf.pop();
    buf.push(b[0]);
    interleave(a, &b[1..], buf, emit);
    buf.pop();
}

impl fmt::Display for NCSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if w.is_empty() {
                write!(f, "{}", fmt_q(&mag))?;
            } else if mag.is_one() {
                write!(f, "{w}")?;
            } else {
                write!(f, "{} {w}", fmt_q(&mag))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for NCSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NCSeries(m={}, cap={}: {})", self.m, self.cap, self)
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    word: String,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    m: usize,
    cap: usize,
    terms: Vec<TermRepr>,
}

impl From<NCSeries> for SeriesRepr {
    fn from(s: NCSeries) -> Self {
        let terms = s.terms.iter().map(|(w, c)| TermRepr { word: w.to_string(), coeff: fmt_q(c) }).collect();
        SeriesRepr { m: s.m, cap: s.cap, terms }
    }
}

impl TryFrom<SeriesRepr> for NCSeries {
    type Error = Error;

    fn try_from(r: SeriesRepr) -> Result<Self> {
        if r.m == 0 {
            return Err(Error::InvalidArgument("alphabet size must be at least 1".into()));
        }
        let mut terms = Vec::with_capacity(r.terms.len());
        for t in r.terms {
            let w = Word::parse(&t.word)?;
            if w.degree() > r.cap {
                return Err(Error::QueryBeyondCap { word: t.word, cap: r.cap });
            }
            terms.push((w, parse_q(&t.coeff)?));
        }
        NCSeries::from_terms(r.m, r.cap, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{factorial, q};

    fn s(m: usize, cap: usize, pairs: &[(&str, i64)]) -> NCSeries {
        NCSeries::from_pairs(m, cap, pairs).unwrap()
    }

    fn w(x: &str) -> Word {
        Word::parse(x).unwrap()
    }

    fn ferfera(cap: usize) -> NCSeries {
        let terms = (0..=cap).map(|k| (Word::from_indices(&vec![1; k]), factorial(k)));
        NCSeries::from_terms(1, cap, terms).unwrap()
    }

    #[test]
    fn coefficient_access() {
        let cf = ferfera(5);
        assert_eq!(cf.coefficient(&w("x1.x1")).unwrap(), q(2));
        assert_eq!(NCSeries::zero(3, 4).coefficient(&w("x2.x1")).unwrap(), q(0));
        let ca3 = s(3, 5, &[("x1.x1.x1", 6), ("x2.x1", 3), ("x1.x2", 2), ("x3", 1)]);
        assert_eq!(ca3.coefficient(&w("x2.x1")).unwrap(), q(3));
        assert!(matches!(cf.coefficient(&w("x1.x1.x1.x1.x1.x1")), Err(Error::QueryBeyondCap { .. })));
    }

    #[test]
    fn linear_ops_and_concat() {
        let x1 = s(2, 4, &[("x1", 1)]);
        let x2 = s(2, 4, &[("x2", 1)]);
        assert_eq!(x1.concat(&x2).unwrap(), s(2, 4, &[("x1.x2", 1)]));
        assert!(x1.add(&x1.neg()).unwrap().is_zero());
        let one_plus = s(2, 4, &[("e", 1), ("x1", 1)]);
        assert_eq!(one_plus.concat(&x2).unwrap(), s(2, 4, &[("x2", 1), ("x1.x2", 1)]));
        let other = NCSeries::zero(3, 4);
        assert_eq!(x1.add(&other), Err(Error::AlphabetMismatch { left: 2, right: 3 }));
    }

    #[test]
    fn concat_truncates_to_min_cap() {
        let a = s(2, 3, &[("x2", 1)]);
        let b = s(2, 5, &[("x2", 1)]);
        let p = a.concat(&b).unwrap();
        assert_eq!(p.cap(), 3);
        assert!(p.is_zero());
    }

    #[test]
    fn shuffle_examples() {
        let xi = s(3, 6, &[("x1", 1)]);
        let xj = s(3, 6, &[("x2", 1)]);
        assert_eq!(xi.shuffle(&xj).unwrap(), s(3, 6, &[("x1.x2", 1), ("x2.x1", 1)]));
        assert_eq!(xi.shuffle(&xi).unwrap(), s(3, 6, &[("x1.x1", 2)]));
        let a = s(3, 6, &[("x1.x2", 1)]);
        let b = s(3, 6, &[("x3", 1)]);
        assert_eq!(a.shuffle(&b).unwrap(), s(3, 6, &[("x1.x2.x3", 1), ("x1.x3.x2", 1), ("x3.x1.x2", 1)]));
    }

    #[test]
    fn four_letter_shuffle_expansion() {
        // x1x2 ⧢ x3x4 = x1x2x3x4 + x3x4x1x2 + x1x3(x2 ⧢ x4) + x3x1(x2 ⧢ x4)
        let a = s(4, 10, &[("x1.x2", 1)]);
        let b = s(4, 10, &[("x3.x4", 1)]);
        let expect = s(
            4,
            10,
            &[
                ("x1.x2.x3.x4", 1),
                ("x3.x4.x1.x2", 1),
                ("x1.x3.x2.x4", 1),
                ("x1.x3.x4.x2", 1),
                ("x3.x1.x2.x4", 1),
                ("x3.x1.x4.x2", 1),
            ],
        );
        assert_eq!(a.shuffle(&b).unwrap(), expect);
    }

    #[test]
    fn shuffle_powers() {
        let x1 = s(2, 6, &[("x1", 1)]);
        assert_eq!(x1.shuffle_power(2), s(2, 6, &[("x1.x1", 2)]));
        for i in 1..=2 {
            let xi = s(2, 8, &[(&format!("x{i}"), 1)]);
            for k in 0..=4 {
                let expect = NCSeries::from_terms(2, 8, [(Word::from_indices(&vec![i; k]), factorial(k))]).unwrap();
                assert_eq!(xi.shuffle_power(k), expect);
            }
        }
        let one_x1 = s(2, 6, &[("e", 1), ("x1", 1)]);
        assert_eq!(one_x1.shuffle_power(2), s(2, 6, &[("e", 1), ("x1", 2), ("x1.x1", 2)]));
    }

    #[test]
    fn shuffle_inverse_examples() {
        let one = NCSeries::one(2, 5);
        assert_eq!(one.shuffle_inverse().unwrap(), one);
        let c = s(1, 7, &[("e", 1), ("x1", -1)]);
        let inv = c.shuffle_inverse().unwrap();
        assert_eq!(inv, ferfera(7));
        assert_eq!(inv.coefficient(&w("x1.x1")).unwrap(), q(2));
        assert_eq!(NCSeries::zero(2, 3).shuffle_inverse(), Err(Error::NotInvertible));
    }

    #[test]
    fn graded_components() {
        let cf = ferfera(6);
        assert_eq!(cf.graded_component(3).unwrap(), s(1, 6, &[("x1.x1", 2)]));
        let c = s(2, 4, &[("e", 5), ("x2", 1)]);
        assert_eq!(c.graded_component(1).unwrap(), s(2, 4, &[("e", 5)]));
        let ca3 = s(3, 5, &[("e", 1), ("x1", 1), ("x1.x1.x1", 6), ("x2.x1", 3), ("x1.x2", 2), ("x3", 1)]);
        assert_eq!(ca3.graded_component(4).unwrap(), s(3, 5, &[("x1.x1.x1", 6), ("x2.x1", 3), ("x1.x2", 2), ("x3", 1)]));
    }

    #[test]
    fn json_form() {
        let c = NCSeries::from_terms(2, 3, [(w("x1.x2"), crate::rational::qf(-3, 2)), (w("e"), q(1))]).unwrap();
        let js = serde_json::to_string(&c).unwrap();
        assert_eq!(js, r#"{"m":2,"cap":3,"terms":[{"word":"e","coeff":"1"},{"word":"x1.x2","coeff":"-3/2"}]}"#);
        let back: NCSeries = serde_json::from_str(&js).unwrap();
        assert_eq!(back, c);
        let bad = r#"{"m":2,"cap":1,"terms":[{"word":"x2","coeff":"1"}]}"#;
        assert!(serde_json::from_str::<NCSeries>(bad).is_err());
    }

    #[test]
    fn display() {
        let c = s(2, 3, &[("e", 1), ("x1", -1), ("x1.x2", 3)]);
        assert_eq!(c.to_string(), "1 - x1 + 3 x1.x2");
        assert_eq!(c.render_row(), "1 e | -1 x1 | 3 x1.x2");
    }
}
