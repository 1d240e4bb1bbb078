//! Unipotent Toeplitz series, the mixed composition product and the feedback
//! group built from it.
//!
//! A [`ToeplitzSeries`] of size `m` holds `(d_1, ..., d_{m-1})` and stands for
//! `I + sum_i d_i N^i` with `N` the nilpotent shift. The full matrix is never
//! built; products only add powers of `N`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::NCSeries;
use crate::words::Word;

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "ToeplitzRepr", into = "ToeplitzRepr")]
pub struct ToeplitzSeries {
    alphabet: usize,
    cap: usize,
    entries: Vec<NCSeries>,
}

#[derive(Serialize, Deserialize)]
struct ToeplitzRepr {
    m: usize,
    entries: Vec<NCSeries>,
}

impl From<ToeplitzSeries> for ToeplitzRepr {
    fn from(t: ToeplitzSeries) -> Self {
        ToeplitzRepr { m: t.size(), entries: t.entries }
    }
}

impl TryFrom<ToeplitzRepr> for ToeplitzSeries {
    type Error = Error;

    fn try_from(r: ToeplitzRepr) -> Result<Self> {
        if r.entries.len() + 1 != r.m {
            return Err(Error::ShapeMismatch(format!("size {} needs {} entries, got {}", r.m, r.m.saturating_sub(1), r.entries.len())));
        }
        if r.entries.is_empty() {
            return Err(Error::ShapeMismatch("empty Toeplitz series carries no alphabet".into()));
        }
        ToeplitzSeries::new(r.entries)
    }
}

impl ToeplitzSeries {
    /// Builds `I + sum d_i N^i` from `(d_1, ..., d_{m-1})`. Entries must share
    /// alphabet and cap.
    pub fn new(entries: Vec<NCSeries>) -> Result<Self> {
        let first = entries.first().ok_or_else(|| Error::ShapeMismatch("at least one entry required".into()))?;
        let (alphabet, cap) = (first.m(), first.cap());
        for e in &entries {
            if e.m() != alphabet {
                return Err(Error::AlphabetMismatch { left: alphabet, right: e.m() });
            }
            if e.cap() != cap {
                return Err(Error::ShapeMismatch(format!("entry caps differ: {} vs {}", cap, e.cap())));
            }
        }
        Ok(ToeplitzSeries { alphabet, cap, entries })
    }

    /// The unit `I`, i.e. the group identity `0_δ`. Matrix size equals the
    /// alphabet size `m`.
    pub fn identity(m: usize, cap: usize) -> Self {
        assert!(m >= 2, "Toeplitz series need m >= 2");
        ToeplitzSeries { alphabet: m, cap, entries: vec![NCSeries::zero(m, cap); m - 1] }
    }

    /// `I + d_1 N + ...` with only the first entry set.
    pub fn with_first(d1: NCSeries) -> Self {
        let (m, cap) = (d1.m(), d1.cap());
        let mut t = ToeplitzSeries::identity(m, cap);
        t.entries[0] = d1;
        t
    }

    /// Matrix size.
    pub fn size(&self) -> usize {
        self.entries.len() + 1
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn entries(&self) -> &[NCSeries] {
        &self.entries
    }

    /// `d_k` for `1 <= k <= m-1`; `k = 0` is the unit series, larger `k` zero.
    pub fn entry(&self, k: usize) -> NCSeries {
        match k {
            0 => NCSeries::one(self.alphabet, self.cap),
            k if k < self.size() => self.entries[k - 1].clone(),
            _ => NCSeries::zero(self.alphabet, self.cap),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.entries.iter().all(NCSeries::is_zero)
    }

    pub fn truncate(&self, cap: usize) -> ToeplitzSeries {
        let entries: Vec<NCSeries> = self.entries.iter().map(|e| e.truncate(cap)).collect();
        let cap = entries[0].cap();
        ToeplitzSeries { alphabet: self.alphabet, cap, entries }
    }

    fn check_shape(&self, other: &ToeplitzSeries) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch { left: self.alphabet, right: other.alphabet });
        }
        if self.size() != other.size() {
            return Err(Error::ShapeMismatch(format!("Toeplitz sizes {} and {}", self.size(), other.size())));
        }
        Ok(())
    }

    /// Equality of every entry up to the smaller cap; returns the first
    /// differing `(entry, word)` if any.
    pub fn first_difference(&self, other: &ToeplitzSeries) -> Option<(usize, Word)> {
        for k in 1..self.size().max(other.size()) {
            if let Some((w, _, _)) = self.entry(k).first_difference(&other.entry(k)) {
                return Some((k, w));
            }
        }
        None
    }
}

/// Componentwise shuffle of Toeplitz matrices: `entry_k = sum_{i+j=k} A_i ⧢ B_j`.
pub fn toeplitz_shuffle(a: &ToeplitzSeries, b: &ToeplitzSeries) -> Result<ToeplitzSeries> {
    a.check_shape(b)?;
    let cap = a.cap.min(b.cap);
    let mut entries = Vec::with_capacity(a.entries.len());
    for k in 1..a.size() {
        let mut acc = a.entry(k).add_unchecked(&b.entry(k)).truncate(cap);
        for i in 1..k {
            acc = acc.add_unchecked(&a.entries[i - 1].shuffle_unchecked(&b.entries[k - i - 1]));
        }
        entries.push(acc);
    }
    Ok(ToeplitzSeries { alphabet: a.alphabet, cap, entries })
}

/// Shuffle inverse of a unipotent Toeplitz series: `sum_{k<m} (-P)^{⧢k}` with
/// `P` the strictly upper part. Exact since `N^m = 0`.
pub fn toeplitz_shuffle_inverse(a: &ToeplitzSeries) -> ToeplitzSeries {
    let neg = ToeplitzSeries { alphabet: a.alphabet, cap: a.cap, entries: a.entries.iter().map(NCSeries::neg).collect() };
    let mut total = neg.clone();
    let mut power = neg.clone();
    for _ in 2..a.size() {
        power = strict_product(&power, &neg);
        for (t, p) in total.entries.iter_mut().zip(&power.entries) {
            *t = t.add_unchecked(p);
        }
    }
    total
}

// Product of two strictly upper Toeplitz parts (no identity term).
fn strict_product(a: &ToeplitzSeries, b: &ToeplitzSeries) -> ToeplitzSeries {
    let mut entries = vec![NCSeries::zero(a.alphabet, a.cap); a.entries.len()];
    for k in 2..a.size() {
        for i in 1..k {
            let p = a.entries[i - 1].shuffle_unchecked(&b.entries[k - i - 1]);
            entries[k - 1] = entries[k - 1].add_unchecked(&p);
        }
    }
    ToeplitzSeries { alphabet: a.alphabet, cap: a.cap, entries }
}

/// `φ_d(x_i)(e) = x_i e + sum_{j=1}^{m-i} x_{i+j} (d_j ⧢ e)`.
pub fn phi_letter(d: &ToeplitzSeries, i: usize, e: &NCSeries) -> Result<NCSeries> {
    if e.m() != d.alphabet {
        return Err(Error::AlphabetMismatch { left: e.m(), right: d.alphabet });
    }
    if i == 0 || i > e.m() {
        return Err(Error::LetterOutOfRange { letter: i, m: e.m() });
    }
    Ok(phi_letter_unchecked(d, i, &e.truncate(d.cap)))
}

fn phi_letter_unchecked(d: &ToeplitzSeries, i: usize, e: &NCSeries) -> NCSeries {
    let cap = e.cap();
    let mut out = e.left_letter(i);
    for j in 1..d.size() {
        let letter = i + j;
        if letter > e.m() || letter > cap {
            break;
        }
        let dj = &d.entries[j - 1];
        if dj.is_zero() {
            continue;
        }
        let prod = dj.shuffle_capped(e, cap - letter);
        out = out.add_unchecked(&prod.left_letter(letter));
    }
    out
}

/// Evaluates `c ∘̃ d_δ` for many `c` against one `d`, sharing the table of
/// `φ_d(η)(1)` over word suffixes.
pub struct MixedComposer<'a> {
    d: &'a ToeplitzSeries,
    memo: HashMap<Word, NCSeries>,
}

impl<'a> MixedComposer<'a> {
    pub fn new(d: &'a ToeplitzSeries) -> Self {
        MixedComposer { d, memo: HashMap::new() }
    }

    /// `φ_d(η)(1)`, truncated at the cap of `d`.
    pub fn phi_word(&mut self, w: &Word) -> NCSeries {
        if let Some(s) = self.memo.get(w) {
            return s.clone();
        }
        let s = match w.first() {
            None => NCSeries::one(self.d.alphabet, self.d.cap),
            Some(i) => {
                let inner = self.phi_word(&w.tail());
                phi_letter_unchecked(self.d, i, &inner)
            }
        };
        self.memo.insert(w.clone(), s.clone());
        s
    }

    pub fn compose(&mut self, c: &NCSeries) -> Result<NCSeries> {
        if c.m() != self.d.alphabet {
            return Err(Error::AlphabetMismatch { left: c.m(), right: self.d.alphabet });
        }
        if self.d.size() != c.m() {
            return Err(Error::ShapeMismatch(format!("Toeplitz size {} against alphabet of {} letters", self.d.size(), c.m())));
        }
        let cap = c.cap().min(self.d.cap);
        let mut out = NCSeries::zero(c.m(), cap);
        for (w, coeff) in c.terms() {
            if w.degree() > cap {
                break;
            }
            let img = self.phi_word(w).truncate(cap);
            out = out.add_unchecked(&img.scale(coeff));
        }
        Ok(out)
    }
}

/// `c ∘̃ d_δ = sum <c,η> φ_d(η)(1)`.
pub fn mixed_compose(c: &NCSeries, d: &ToeplitzSeries) -> Result<NCSeries> {
    MixedComposer::new(d).compose(c)
}

/// Componentwise `c ∘̃ d_δ` for a tuple `c`.
pub fn mixed_compose_tuple(c: &[NCSeries], d: &ToeplitzSeries) -> Result<Vec<NCSeries>> {
    let mut composer = MixedComposer::new(d);
    c.iter().map(|ci| composer.compose(ci)).collect()
}

/// `c_Toep ∘̃ d_δ`, entrywise; the identity block maps to itself.
pub fn mixed_compose_toeplitz(c: &ToeplitzSeries, d: &ToeplitzSeries) -> Result<ToeplitzSeries> {
    c.check_shape(d)?;
    let entries = mixed_compose_tuple(&c.entries, d)?;
    ToeplitzSeries::new(entries)
}

/// Right pre-Lie product: `x_i η ◁ d = x_i (η ◁ d) + sum_j x_{i+j} (d_j ⧢ η)`,
/// `e ◁ d = 0`.
pub fn pre_lie(c: &NCSeries, d: &ToeplitzSeries) -> Result<NCSeries> {
    if c.m() != d.alphabet {
        return Err(Error::AlphabetMismatch { left: c.m(), right: d.alphabet });
    }
    let cap = c.cap().min(d.cap);
    let mut memo: HashMap<Word, NCSeries> = HashMap::new();
    let mut out = NCSeries::zero(c.m(), cap);
    for (w, coeff) in c.terms() {
        if w.degree() > cap {
            break;
        }
        let img = pre_lie_word(w, d, cap, &mut memo);
        out = out.add_unchecked(&img.scale(coeff));
    }
    Ok(out)
}

fn pre_lie_word(w: &Word, d: &ToeplitzSeries, cap: usize, memo: &mut HashMap<Word, NCSeries>) -> NCSeries {
    if let Some(s) = memo.get(w) {
        return s.clone();
    }
    let m = d.alphabet;
    let s = match w.first() {
        None => NCSeries::zero(m, cap),
        Some(i) => {
            let eta = w.tail();
            let mut out = pre_lie_word(&eta, d, cap, memo).left_letter(i);
            let eta_series = NCSeries::from_terms(m, cap, [(eta, crate::rational::q(1))]).expect("subword of checked word");
            for j in 1..d.size() {
                let letter = i + j;
                if letter > m || letter + w.degree() - i > cap {
                    break;
                }
                let prod = d.entries[j - 1].shuffle_capped(&eta_series, cap - letter);
                out = out.add_unchecked(&prod.left_letter(letter));
            }
            out
        }
    };
    memo.insert(w.clone(), s.clone());
    s
}

/// `(c_δ ∘ d_δ)_Toep = (c_Toep ∘̃ d_δ) ⧢ d_Toep`.
pub fn group_product(c: &ToeplitzSeries, d: &ToeplitzSeries) -> Result<ToeplitzSeries> {
    let left = mixed_compose_toeplitz(c, d)?;
    toeplitz_shuffle(&left, d)
}

/// Inverse in the feedback group by fixed-point iteration
/// `x_Toep <- ((d_Toep ∘̃ x_δ))^{⧢-1}`, one sweep per degree plus one.
pub fn group_inverse(d: &ToeplitzSeries) -> ToeplitzSeries {
    let mut x = ToeplitzSeries::identity(d.alphabet, d.cap);
    for _ in 0..=d.cap {
        let composed = mixed_compose_toeplitz(d, &x).expect("shapes agree by construction");
        x = toeplitz_shuffle_inverse(&composed);
    }
    x
}

/// Which shuffle powers of `δ_1` fill the entries of a Toeplitz feedback law.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaPowers {
    exponents: Vec<usize>,
}

impl DeltaPowers {
    /// Entry `i` is `δ_1^{⧢ exponents[i-1]}`.
    pub fn new(exponents: Vec<usize>) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::ShapeMismatch("feedback law needs at least one entry".into()));
        }
        Ok(DeltaPowers { exponents })
    }

    /// `(δ_1, δ_1^{⧢2}, ..., δ_1^{⧢ m-1})`.
    pub fn standard(m: usize) -> Self {
        assert!(m >= 2, "Toeplitz series need m >= 2");
        DeltaPowers { exponents: (1..m).collect() }
    }

    pub fn size(&self) -> usize {
        self.exponents.len() + 1
    }

    pub fn exponents(&self) -> &[usize] {
        &self.exponents
    }
}

/// Replaces `δ_1` by `c1` in each entry: `δ_1^{⧢k} -> c1^{⧢k}`.
pub fn substitute_outputs(powers: &DeltaPowers, c1: &NCSeries) -> ToeplitzSeries {
    let entries = powers.exponents.iter().map(|&k| c1.shuffle_power(k)).collect();
    ToeplitzSeries::new(entries).expect("shuffle powers share alphabet and cap")
}

/// Closed-loop series `c @ d_Toep = c ∘̃ ((d_Toep ∘ c)^{⧢-1})_δ^{-1}` for a
/// feedback law made of shuffle powers of the first output.
pub fn feedback_product(c: &[NCSeries], powers: &DeltaPowers) -> Result<Vec<NCSeries>> {
    let first = c.first().ok_or_else(|| Error::ShapeMismatch("empty forward series".into()))?;
    if c.len() != first.m() || powers.size() != first.m() {
        return Err(Error::ShapeMismatch(format!(
            "{} components and feedback of size {} over {} letters",
            c.len(),
            powers.size(),
            first.m()
        )));
    }
    let loop_series = substitute_outputs(powers, first);
    let inv = toeplitz_shuffle_inverse(&loop_series);
    let law = group_inverse(&inv);
    mixed_compose_tuple(c, &law)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{factorial, q};

    fn s(m: usize, cap: usize, pairs: &[(&str, i64)]) -> NCSeries {
        NCSeries::from_pairs(m, cap, pairs).unwrap()
    }

    fn ferfera(m: usize, cap: usize) -> NCSeries {
        NCSeries::from_terms(m, cap, (0..=cap).map(|k| (Word::from_indices(&vec![1; k]), factorial(k)))).unwrap()
    }

    fn w(x: &str) -> Word {
        Word::parse(x).unwrap()
    }

    #[test]
    fn toeplitz_shuffle_examples() {
        let a = s(2, 4, &[("x1", 1), ("e", 2)]);
        let b = s(2, 4, &[("x2", 3)]);
        let id = ToeplitzSeries::identity(2, 4);
        let bt = ToeplitzSeries::with_first(b.clone());
        assert_eq!(toeplitz_shuffle(&id, &bt).unwrap(), bt);
        let at = ToeplitzSeries::with_first(a.clone());
        assert_eq!(toeplitz_shuffle(&at, &bt).unwrap(), ToeplitzSeries::with_first(a.add(&b).unwrap()));

        let a3 = s(3, 4, &[("x1", 1), ("x2", -1)]);
        let lhs = ToeplitzSeries::new(vec![a3.clone(), a3.shuffle_power(2)]).unwrap();
        let rhs = ToeplitzSeries::new(vec![a3.neg(), NCSeries::zero(3, 4)]).unwrap();
        assert!(toeplitz_shuffle(&lhs, &rhs).unwrap().is_identity());
    }

    #[test]
    fn toeplitz_inverse_of_ferfera_powers() {
        for m in 2..=4 {
            let cf = ferfera(m, 5);
            let t = ToeplitzSeries::new((1..m).map(|i| cf.shuffle_power(i)).collect()).unwrap();
            let inv = toeplitz_shuffle_inverse(&t);
            assert_eq!(inv, ToeplitzSeries::with_first(cf.neg()));
            assert!(toeplitz_shuffle(&t, &inv).unwrap().is_identity());
            assert_eq!(toeplitz_shuffle_inverse(&inv), t);
        }
        let id = ToeplitzSeries::identity(3, 3);
        assert_eq!(toeplitz_shuffle_inverse(&id), id);
    }

    #[test]
    fn phi_letter_examples() {
        let d = s(2, 5, &[("e", 2), ("x1", 1)]);
        let dt = ToeplitzSeries::with_first(d.clone());
        let one = NCSeries::one(2, 5);
        let got = phi_letter(&dt, 1, &one).unwrap();
        let expect = s(2, 5, &[("x1", 1)]).add(&d.left_letter(2)).unwrap();
        assert_eq!(got, expect);
        let e = s(2, 5, &[("x1", 3), ("e", 1)]);
        assert_eq!(phi_letter(&dt, 2, &e).unwrap(), e.left_letter(2));
        assert!(phi_letter(&dt, 3, &e).is_err());
    }

    #[test]
    fn phi_letter_with_abel_entries() {
        let ca = s(3, 5, &[("e", 1), ("x1", 1), ("x1.x1", 2), ("x2", 1)]);
        let dt = ToeplitzSeries::new(vec![ca.clone(), ca.shuffle_power(2)]).unwrap();
        let got = phi_letter(&dt, 1, &NCSeries::one(3, 5)).unwrap();
        let expect = s(3, 5, &[("x1", 1)]).add(&ca.left_letter(2)).unwrap().add(&ca.shuffle_power(2).left_letter(3)).unwrap();
        assert_eq!(got, expect);
    }

    #[test]
    fn compose_with_identity_is_identity() {
        let c = s(3, 5, &[("e", 1), ("x1.x2", 3), ("x3.x1", -2)]);
        assert_eq!(mixed_compose(&c, &ToeplitzSeries::identity(3, 5)).unwrap(), c);
    }

    #[test]
    fn compose_ferfera_with_abel_feedback_law() {
        let cf = ferfera(3, 3);
        let d = group_inverse(&ToeplitzSeries::with_first(cf.neg()));
        let got = mixed_compose(&cf, &d).unwrap();
        let expect = [("e", 1), ("x1", 1), ("x2", 1), ("x3", 1), ("x1.x1", 2), ("x1.x2", 2), ("x2.x1", 3), ("x3", 1)];
        for (word, c) in expect {
            assert_eq!(got.coefficient(&w(word)).unwrap(), q(c), "{word}");
        }
    }

    #[test]
    fn group_inverse_of_negative_ferfera() {
        let d = ToeplitzSeries::with_first(ferfera(3, 3).neg());
        let inv = group_inverse(&d);
        for word in ["e", "x1", "x2", "x3"] {
            assert_eq!(inv.entry(1).coefficient(&w(word)).unwrap(), q(1));
        }
        assert_eq!(inv.entry(2).coefficient(&w("e")).unwrap(), q(1));
        for word in ["x1", "x2", "x3"] {
            assert_eq!(inv.entry(2).coefficient(&w(word)).unwrap(), q(2));
        }
        assert!(group_product(&d, &inv).unwrap().is_identity());
        assert!(group_product(&inv, &d).unwrap().is_identity());
        let id = ToeplitzSeries::identity(3, 4);
        assert_eq!(group_inverse(&id), id);
    }

    #[test]
    fn pre_lie_examples() {
        let d = ToeplitzSeries::with_first(NCSeries::one(2, 4));
        assert!(pre_lie(&NCSeries::one(2, 4), &d).unwrap().is_zero());
        assert_eq!(pre_lie(&s(2, 4, &[("x1", 1)]), &d).unwrap(), s(2, 4, &[("x2", 1)]));
    }

    #[test]
    fn substitute_outputs_examples() {
        let cf = ferfera(3, 4);
        let t = substitute_outputs(&DeltaPowers::standard(3), &cf);
        assert_eq!(t.entries(), &[cf.clone(), cf.shuffle_power(2)]);
        let zero = substitute_outputs(&DeltaPowers::standard(3), &NCSeries::zero(3, 4));
        assert!(zero.is_identity());
        let one = substitute_outputs(&DeltaPowers::standard(4), &NCSeries::one(4, 4));
        assert!(one.entries().iter().all(|e| *e == NCSeries::one(4, 4)));
    }

    #[test]
    fn feedback_with_zero_forward_path() {
        let c = vec![NCSeries::zero(3, 4); 3];
        assert_eq!(feedback_product(&c, &DeltaPowers::standard(3)).unwrap(), c);
        assert!(feedback_product(&c[..2], &DeltaPowers::standard(3)).is_err());
    }

    #[test]
    fn toeplitz_json_roundtrip() {
        let t = ToeplitzSeries::new(vec![s(3, 2, &[("x1", 1)]), s(3, 2, &[("e", -2)])]).unwrap();
        let js = serde_json::to_string(&t).unwrap();
        assert!(js.starts_with(r#"{"m":3,"entries":["#));
        assert_eq!(serde_json::from_str::<ToeplitzSeries>(&js).unwrap(), t);
    }
}
