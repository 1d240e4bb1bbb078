//! Commutative polynomial rings used by the other modules.
//!
//! [`UPoly`] is a univariate polynomial in the state variable `z`; it carries
//! vector fields and output functions of one-dimensional realizations.
//! [`CPoly`] is a multivariate polynomial over an abstract, graded generator
//! set. The Hopf algebra and the classical Faà di Bruno code plug in their own
//! generator types.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::Hash;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, q, Q};

// ---------------------------------------------------------------------------
// Univariate

/// `sum_k coeffs[k] z^k`, trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct UPoly {
    coeffs: Vec<Q>,
}

impl UPoly {
    pub fn zero() -> Self {
        UPoly::default()
    }

    pub fn constant(c: Q) -> Self {
        UPoly::from_coeffs(vec![c])
    }

    pub fn one() -> Self {
        UPoly::constant(Q::one())
    }

    /// `c z^p`
    pub fn monomial(c: Q, p: usize) -> Self {
        let mut coeffs = vec![Q::zero(); p + 1];
        coeffs[p] = c;
        UPoly::from_coeffs(coeffs)
    }

    /// `z^p`
    pub fn z_pow(p: usize) -> Self {
        UPoly::monomial(Q::one(), p)
    }

    pub fn from_coeffs(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        UPoly::from_coeffs(coeffs.iter().map(|&c| q(c)).collect())
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, p: usize) -> Q {
        self.coeffs.get(p).cloned().unwrap_or_else(Q::zero)
    }

    /// Powers of `z` carrying nonzero coefficients.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(p, _)| p)
    }

    pub fn derivative(&self) -> UPoly {
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(p, c)| c * q(p as i64)).collect();
        UPoly::from_coeffs(coeffs)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &Q) -> Q {
        self.coeffs.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + crate::rational::to_f64(c))
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UPoly::from_coeffs((0..n).map(|p| self.coeff(p) + other.coeff(p)).collect())
    }

    pub fn sub(&self, other: &UPoly) -> UPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> UPoly {
        UPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, k: &Q) -> UPoly {
        UPoly::from_coeffs(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero();
        }
        let mut coeffs = vec![Q::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        UPoly::from_coeffs(coeffs)
    }

    pub fn pow(&self, k: u32) -> UPoly {
        (0..k).fold(UPoly::one(), |acc, _| acc.mul(self))
    }
}

/// `L_g h = h' g`.
pub fn lie_derivative(g: &UPoly, h: &UPoly) -> UPoly {
    h.derivative().mul(g)
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for p in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[p];
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let coeff = if mag.is_one() && p > 0 { String::new() } else { fmt_q(&mag) };
            match p {
                0 => write!(f, "{coeff}")?,
                1 => write!(f, "{coeff}z")?,
                _ => write!(f, "{coeff}z^{p}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UPoly({self})")
    }
}

// ---------------------------------------------------------------------------
// Multivariate

/// A commuting indeterminate with an integer degree.
///
/// `Ord` must sort by degree first; monomials print their factors from the
/// largest generator down.
pub trait Generator: Clone + Ord + Eq + Hash + fmt::Debug + fmt::Display {
    fn degree(&self) -> usize;

    /// Rendering of `self^e` inside a monomial.
    fn render_power(&self, e: u32) -> String {
        if e == 1 {
            self.to_string()
        } else {
            format!("{self}^{e}")
        }
    }
}

/// Product of generator powers, factors kept sorted with the largest
/// generator first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial<G> {
    factors: Vec<(G, u32)>,
}

impl<G: Generator> Monomial<G> {
    pub fn one() -> Self {
        Monomial { factors: Vec::new() }
    }

    pub fn generator(g: G) -> Self {
        Monomial { factors: vec![(g, 1)] }
    }

    pub fn from_factors<I: IntoIterator<Item = (G, u32)>>(it: I) -> Self {
        let mut m = Monomial::one();
        for (g, e) in it {
            m = m.mul(&Monomial { factors: vec![(g, e)] });
        }
        m
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[(G, u32)] {
        &self.factors
    }

    /// Number of generator factors counted with multiplicity.
    pub fn factor_count(&self) -> u32 {
        self.factors.iter().map(|(_, e)| e).sum()
    }

    pub fn degree(&self) -> usize {
        self.factors.iter().map(|(g, e)| g.degree() * *e as usize).sum()
    }

    pub fn mul(&self, other: &Monomial<G>) -> Monomial<G> {
        let mut out = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < other.factors.len() {
            let (a, ea) = &self.factors[i];
            let (b, eb) = &other.factors[j];
            match a.cmp(b) {
                std::cmp::Ordering::Greater => {
                    out.push((a.clone(), *ea));
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push((b.clone(), *eb));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a.clone(), ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.factors[i..]);
        out.extend_from_slice(&other.factors[j..]);
        Monomial { factors: out }
    }

    fn expanded(&self) -> impl Iterator<Item = &G> {
        self.factors.iter().flat_map(|(g, e)| std::iter::repeat_n(g, *e as usize))
    }

    /// The monomial with one power of `self.factors[idx]` removed.
    fn without_one(&self, idx: usize) -> Monomial<G> {
        let mut factors = self.factors.clone();
        if factors[idx].1 == 1 {
            factors.remove(idx);
        } else {
            factors[idx].1 -= 1;
        }
        Monomial { factors }
    }
}

impl<G: Generator> Ord for Monomial<G> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.factor_count()
            .cmp(&other.factor_count())
            .then_with(|| other.expanded().cmp(self.expanded()))
    }
}

impl<G: Generator> PartialOrd for Monomial<G> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl<G: Generator> fmt::Display for Monomial<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.factors.iter().map(|(g, e)| g.render_power(*e)).collect();
        f.write_str(&parts.join("·"))
    }
}

impl<G: Generator> fmt::Debug for Monomial<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Polynomial over commuting generators with exact rational coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct CPoly<G: Generator> {
    terms: BTreeMap<Monomial<G>, Q>,
}

impl<G: Generator> Default for CPoly<G> {
    fn default() -> Self {
        CPoly { terms: BTreeMap::new() }
    }
}

impl<G: Generator> CPoly<G> {
    pub fn zero() -> Self {
        CPoly::default()
    }

    pub fn one() -> Self {
        CPoly::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        CPoly::term(Monomial::one(), c)
    }

    pub fn gen(g: G) -> Self {
        CPoly::term(Monomial::generator(g), Q::one())
    }

    pub fn term(m: Monomial<G>, c: Q) -> Self {
        let mut p = CPoly::zero();
        p.add_term(m, c);
        p
    }

    pub fn add_term(&mut self, m: Monomial<G>, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
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

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial<G>, &Q)> {
        self.terms.iter()
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

    pub fn coeff(&self, m: &Monomial<G>) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    /// Coefficient of the empty monomial.
    pub fn constant_term(&self) -> Q {
        self.coeff(&Monomial::one())
    }

    pub fn add(&self, other: &CPoly<G>) -> CPoly<G> {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &CPoly<G>) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn sub(&self, other: &CPoly<G>) -> CPoly<G> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> CPoly<G> {
        CPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, k: &Q) -> CPoly<G> {
        if k.is_zero() {
            return CPoly::zero();
        }
        CPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect() }
    }

    pub fn mul(&self, other: &CPoly<G>) -> CPoly<G> {
        let mut out = CPoly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a.mul(b), ca * cb);
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial<G>) -> CPoly<G> {
        CPoly { terms: self.terms.iter().map(|(a, c)| (a.mul(m), c.clone())).collect() }
    }

    pub fn pow(&self, k: u32) -> CPoly<G> {
        (0..k).fold(CPoly::one(), |acc, _| acc.mul(self))
    }

    /// Degree of each term must equal `d`; the zero polynomial qualifies.
    pub fn is_homogeneous_of(&self, d: usize) -> bool {
        self.terms.keys().all(|m| m.degree() == d)
    }

    /// Ring morphism into the rationals. Fails on the first generator the
    /// assignment leaves unbound.
    pub fn evaluate(&self, assign: impl Fn(&G) -> Option<Q>) -> Result<Q> {
        let mut total = Q::zero();
        let mut cache: BTreeMap<&G, Q> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut val = c.clone();
            for (g, e) in m.factors() {
                let x = match cache.get(g) {
                    Some(x) => x.clone(),
                    None => {
                        let x = assign(g).ok_or_else(|| Error::UnboundGenerator(g.to_string()))?;
                        cache.insert(g, x.clone());
                        x
                    }
                };
                for _ in 0..*e {
                    val *= &x;
                }
            }
            total += val;
        }
        Ok(total)
    }

    /// Evaluation against a finite assignment table.
    pub fn substitute(&self, assignment: &BTreeMap<G, Q>) -> Result<Q> {
        self.evaluate(|g| assignment.get(g).cloned())
    }

    /// Ring morphism into another polynomial ring, generator by generator.
    pub fn compose<H: Generator>(&self, image: impl Fn(&G) -> CPoly<H>) -> CPoly<H> {
        let mut out = CPoly::zero();
        let mut cache: BTreeMap<&G, CPoly<H>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut val = CPoly::constant(c.clone());
            for (g, e) in m.factors() {
                let img = cache.entry(g).or_insert_with(|| image(g)).clone();
                for _ in 0..*e {
                    val = val.mul(&img);
                }
            }
            out.add_assign(&val);
        }
        out
    }

    /// Extends a map on generators to the derivation of the polynomial ring
    /// that agrees with it and kills constants.
    pub fn derive(&self, on_gen: &mut impl FnMut(&G) -> CPoly<G>) -> CPoly<G> {
        let mut out = CPoly::zero();
        for (m, c) in &self.terms {
            for (idx, (g, e)) in m.factors().iter().enumerate() {
                let dg = on_gen(g);
                if dg.is_zero() {
                    continue;
                }
                let rest = m.without_one(idx);
                let k = c * q(*e as i64);
                for (dm, dc) in &dg.terms {
                    out.add_term(dm.mul(&rest), &k * dc);
                }
            }
        }
        out
    }

    /// Generators that occur in some term.
    pub fn generators(&self) -> Vec<G> {
        let mut gs: Vec<G> = self.terms.keys().flat_map(|m| m.factors().iter().map(|(g, _)| g.clone())).collect();
        gs.sort();
        gs.dedup();
        gs
    }

    /// Drops terms containing `g`, i.e. substitutes `g = 0`.
    pub fn set_zero(&self, g: &G) -> CPoly<G> {
        CPoly { terms: self.terms.iter().filter(|(m, _)| m.factors().iter().all(|(h, _)| h != g)).map(|(m, c)| (m.clone(), c.clone())).collect() }
    }
}

impl<G: Generator> fmt::Display for CPoly<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write!(f, "{}", fmt_q(&mag))?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}·{m}", fmt_q(&mag))?;
            }
        }
        Ok(())
    }
}

impl<G: Generator> fmt::Debug for CPoly<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
