//! The graded connected Hopf algebra of coordinate functions `a^k_η`.
//!
//! `a^k_η` reads off `<d_k, η>` from a tuple of series. Its coproduct is
//! obtained from `Δ a^k_e` by the intertwining operators `Θ̃_{x_i}`, and the
//! antipode is available through two independent algorithms: the classical
//! convolution recursion over the reduced coproduct and the coderivation
//! recursion, which applies first-order operators to the closed-form antipode
//! of the empty-word generators.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use rand::Rng;

use crate::combinat::compositions;
use crate::compose::{group_inverse, ToeplitzSeries};
use crate::error::{Error, Result};
use crate::polyring::{CPoly, Generator, Monomial};
use crate::rational::{fmt_q, q, Q};
use crate::report::CheckReport;
use crate::series::NCSeries;
use crate::words::{enumerate_words, Word};

/// Coordinate function `a^k_η` with grade `k + deg(η)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CoordGen {
    root: usize,
    word: Word,
}

impl CoordGen {
    pub fn new(root: usize, word: Word) -> Self {
        assert!(root >= 1, "root index starts at 1");
        CoordGen { root, word }
    }

    /// `a^k_e`.
    pub fn empty(root: usize) -> Self {
        CoordGen::new(root, Word::empty())
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn grade(&self) -> usize {
        self.root + self.word.degree()
    }

    /// `θ̃_{x_i} a^k_η = a^k_{η x_i}`.
    pub fn shift(&self, i: usize) -> CoordGen {
        CoordGen { root: self.root, word: self.word.append(i) }
    }
}

impl Ord for CoordGen {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.grade(), self.root, &self.word).cmp(&(other.grade(), other.root, &other.word))
    }
}

impl PartialOrd for CoordGen {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CoordGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a[{};{}]", self.root, self.word)
    }
}

impl fmt::Debug for CoordGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Generator for CoordGen {
    fn degree(&self) -> usize {
        self.grade()
    }

    fn render_power(&self, e: u32) -> String {
        vec![self.to_string(); e as usize].join("·")
    }
}

pub type HopfElem = CPoly<CoordGen>;
pub type HopfMonomial = Monomial<CoordGen>;

pub fn gen(root: usize, word: &str) -> HopfElem {
    CPoly::gen(CoordGen::new(root, Word::parse(word).expect("valid word literal")))
}

/// Alphabet size `m` and number of root indices `m̄`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HopfContext {
    m: usize,
    mbar: usize,
}

impl HopfContext {
    /// Requires `m - 1 <= m̄ <= m`: the coproduct of `a^k_{η x_i}` involves
    /// `a^{i-j}_e` for `i - j` up to `m - 1`, so fewer roots do not close.
    pub fn new(m: usize, mbar: usize) -> Result<Self> {
        if m == 0 || mbar == 0 {
            return Err(Error::InvalidArgument("m and m̄ must be positive".into()));
        }
        if mbar > m {
            return Err(Error::InvalidArgument(format!("m̄ = {mbar} exceeds m = {m}")));
        }
        if mbar + 1 < m {
            return Err(Error::InvalidArgument(format!("m̄ = {mbar} < m - 1 = {}: the coproduct would leave the algebra", m - 1)));
        }
        Ok(HopfContext { m, mbar })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn mbar(&self) -> usize {
        self.mbar
    }

    pub fn check(&self, g: &CoordGen) -> Result<()> {
        if g.root > self.mbar {
            return Err(Error::InvalidArgument(format!("root {} exceeds m̄ = {}", g.root, self.mbar)));
        }
        g.word.check_alphabet(self.m)
    }

    /// All generators of grade `<= grade`, sorted.
    pub fn generators(&self, grade: usize) -> Vec<CoordGen> {
        let mut out = Vec::new();
        for k in 1..=self.mbar.min(grade) {
            for w in enumerate_words(self.m, grade - k) {
                out.push(CoordGen::new(k, w));
            }
        }
        out.sort();
        out
    }

    /// Generators of grade exactly `grade`.
    pub fn generators_of_grade(&self, grade: usize) -> Vec<CoordGen> {
        self.generators(grade).into_iter().filter(|g| g.grade() == grade).collect()
    }
}

// ---------------------------------------------------------------------------
// Tensors

/// Finite sum of `c · L ⊗ R` over monomial pairs, merged by pair.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Tensor {
    terms: BTreeMap<(HopfMonomial, HopfMonomial), Q>,
}

impl Tensor {
    pub fn zero() -> Self {
        Tensor::default()
    }

    pub fn unit() -> Self {
        let mut t = Tensor::zero();
        t.add_term(Monomial::one(), Monomial::one(), Q::one());
        t
    }

    /// `p ⊗ r` for polynomials.
    pub fn pure(p: &HopfElem, r: &HopfElem) -> Self {
        let mut t = Tensor::zero();
        for (a, ca) in p.terms() {
            for (b, cb) in r.terms() {
                t.add_term(a.clone(), b.clone(), ca * cb);
            }
        }
        t
    }

    pub fn add_term(&mut self, l: HopfMonomial, r: HopfMonomial, c: Q) {
        if c.is_zero() {
            return;
        }
        let key = (l, r);
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&HopfMonomial, &HopfMonomial, &Q)> {
        self.terms.iter().map(|((l, r), c)| (l, r, c))
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

    pub fn add(&self, other: &Tensor) -> Tensor {
        let mut out = self.clone();
        for ((l, r), c) in &other.terms {
            out.add_term(l.clone(), r.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Tensor) -> Tensor {
        let mut out = self.clone();
        for ((l, r), c) in &other.terms {
            out.add_term(l.clone(), r.clone(), -c);
        }
        out
    }

    pub fn mul(&self, other: &Tensor) -> Tensor {
        let mut out = Tensor::zero();
        for ((l1, r1), c1) in &self.terms {
            for ((l2, r2), c2) in &other.terms {
                out.add_term(l1.mul(l2), r1.mul(r2), c1 * c2);
            }
        }
        out
    }

    /// Applies `f ⊗ g` where `f`, `g` map monomials to polynomials.
    pub fn map(&self, mut f: impl FnMut(&HopfMonomial) -> HopfElem, mut g: impl FnMut(&HopfMonomial) -> HopfElem) -> Tensor {
        let mut out = Tensor::zero();
        for ((l, r), c) in &self.terms {
            let fl = f(l);
            if fl.is_zero() {
                continue;
            }
            let gr = g(r);
            for (a, ca) in fl.terms() {
                for (b, cb) in gr.terms() {
                    out.add_term(a.clone(), b.clone(), c * ca * cb);
                }
            }
        }
        out
    }

    /// `m ∘ (f ⊗ g)`.
    pub fn multiply_out(&self, mut f: impl FnMut(&HopfMonomial) -> HopfElem, mut g: impl FnMut(&HopfMonomial) -> HopfElem) -> HopfElem {
        let mut out = HopfElem::zero();
        for ((l, r), c) in &self.terms {
            let fl = f(l);
            if fl.is_zero() {
                continue;
            }
            out.add_assign(&fl.mul(&g(r)).scale(c));
        }
        out
    }

    /// The tensor with `x ⊗ 1` and `1 ⊗ x` removed for the given `x`.
    pub fn reduced(&self, x: &HopfElem) -> Tensor {
        let one = HopfElem::one();
        self.sub(&Tensor::pure(x, &one)).sub(&Tensor::pure(&one, x))
    }
}

fn render_monomial(m: &HopfMonomial) -> String {
    m.to_string()
}

impl fmt::Display for Tensor {
    /// One `c · left (x) right` line per term.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return writeln!(f, "0");
        }
        for ((l, r), c) in &self.terms {
            let coeff = if c.is_one() { String::new() } else { format!("{} · ", fmt_q(c)) };
            writeln!(f, "{coeff}{} (x) {}", render_monomial(l), render_monomial(r))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Three-fold tensor, used only by the coassociativity check.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct Tensor3 {
    terms: BTreeMap<(HopfMonomial, HopfMonomial, HopfMonomial), Q>,
}

impl Tensor3 {
    fn add_term(&mut self, a: HopfMonomial, b: HopfMonomial, c: HopfMonomial, k: Q) {
        if k.is_zero() {
            return;
        }
        let key = (a, b, c);
        let v = self.terms.entry(key.clone()).or_insert_with(Q::zero);
        *v += k;
        if v.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

// ---------------------------------------------------------------------------
// Shift operators

/// `θ̃_{x_i}` extended as a derivation; kills constants.
pub fn theta(p: &HopfElem, i: usize) -> HopfElem {
    p.derive(&mut |g: &CoordGen| CPoly::gen(g.shift(i)))
}

fn theta_monomial(m: &HopfMonomial, i: usize) -> HopfElem {
    theta(&CPoly::term(m.clone(), Q::one()), i)
}

fn a_e(k: usize) -> HopfMonomial {
    Monomial::generator(CoordGen::empty(k))
}

/// `Θ̃_{x_i} = θ̃_{x_i} ⊗ id + id ⊗ θ̃_{x_i} + sum_{j<i} θ̃_{x_j} ⊗ A_e^{(i-j)}`,
/// `A_e^{(k)}` being multiplication by `a^k_e`.
pub fn big_theta(t: &Tensor, i: usize) -> Tensor {
    let mut out = Tensor::zero();
    for ((l, r), c) in &t.terms {
        for (a, ca) in theta_monomial(l, i).terms() {
            out.add_term(a.clone(), r.clone(), c * ca);
        }
        for (b, cb) in theta_monomial(r, i).terms() {
            out.add_term(l.clone(), b.clone(), c * cb);
        }
        for j in 1..i {
            let shifted = theta_monomial(l, j);
            if shifted.is_zero() {
                continue;
            }
            let right = r.mul(&a_e(i - j));
            for (a, ca) in shifted.terms() {
                out.add_term(a.clone(), right.clone(), c * ca);
            }
        }
    }
    out
}

/// `Δ a^l_e = a^l_e ⊗ 1 + 1 ⊗ a^l_e + sum_{k=1}^{l-1} a^k_e ⊗ a^{l-k}_e`.
pub fn coproduct_empty(l: usize) -> Tensor {
    let mut t = Tensor::zero();
    t.add_term(a_e(l), Monomial::one(), Q::one());
    t.add_term(Monomial::one(), a_e(l), Q::one());
    for k in 1..l {
        t.add_term(a_e(k), a_e(l - k), Q::one());
    }
    t
}

/// Coproduct with a memo over generators; one instance per independent run.
#[derive(Clone, Debug)]
pub struct Coproduct {
    ctx: HopfContext,
    memo: HashMap<CoordGen, Tensor>,
}

impl Coproduct {
    pub fn new(ctx: HopfContext) -> Self {
        Coproduct { ctx, memo: HashMap::new() }
    }

    pub fn context(&self) -> HopfContext {
        self.ctx
    }

    /// `Δ a^k_η = Θ̃_η Δ a^k_e`, letters applied left to right.
    pub fn generator(&mut self, g: &CoordGen) -> Tensor {
        if let Some(t) = self.memo.get(g) {
            return t.clone();
        }
        let t = match g.word.last() {
            None => coproduct_empty(g.root),
            Some(i) => {
                let prefix = CoordGen { root: g.root, word: g.word.init() };
                big_theta(&self.generator(&prefix), i)
            }
        };
        self.memo.insert(g.clone(), t.clone());
        t
    }

    pub fn checked_generator(&mut self, g: &CoordGen) -> Result<Tensor> {
        self.ctx.check(g)?;
        Ok(self.generator(g))
    }

    pub fn monomial(&mut self, m: &HopfMonomial) -> Tensor {
        let mut out = Tensor::unit();
        for (g, e) in m.factors() {
            let dg = self.generator(g);
            for _ in 0..*e {
                out = out.mul(&dg);
            }
        }
        out
    }

    /// Multiplicative extension, `Δ 1 = 1 ⊗ 1`.
    pub fn apply(&mut self, p: &HopfElem) -> Tensor {
        let mut out = Tensor::zero();
        for (m, c) in p.terms() {
            for (l, r, k) in self.monomial(m).terms() {
                out.add_term(l.clone(), r.clone(), c * k);
            }
        }
        out
    }

    /// `Δ' a = Δ a - a ⊗ 1 - 1 ⊗ a`.
    pub fn reduced(&mut self, g: &CoordGen) -> Tensor {
        self.generator(g).reduced(&CPoly::gen(g.clone()))
    }

    /// `(Δ ⊗ id) Δ g`.
    pub fn left_iterated(&mut self, g: &CoordGen) -> Tensor3 {
        let mut out = Tensor3::default();
        for (l, r, c) in self.generator(g).terms() {
            for (a, b, k) in self.monomial(l).terms() {
                out.add_term(a.clone(), b.clone(), r.clone(), c * k);
            }
        }
        out
    }

    /// `(id ⊗ Δ) Δ g`.
    pub fn right_iterated(&mut self, g: &CoordGen) -> Tensor3 {
        let mut out = Tensor3::default();
        for (l, r, c) in self.generator(g).terms() {
            for (a, b, k) in self.monomial(r).terms() {
                out.add_term(l.clone(), a.clone(), b.clone(), c * k);
            }
        }
        out
    }
}

/// `ε`: 1 on the unit monomial, 0 elsewhere.
pub fn counit(m: &HopfMonomial) -> Q {
    if m.is_one() {
        Q::one()
    } else {
        Q::zero()
    }
}

// ---------------------------------------------------------------------------
// Antipodes

/// An antipode algorithm with its own memo table.
pub trait Antipode {
    fn name(&self) -> &'static str;

    /// `S a^k_η` for a generator of the context.
    fn generator(&mut self, g: &CoordGen) -> HopfElem;

    /// `S` extended as an algebra morphism (the algebra is commutative).
    fn apply(&mut self, p: &HopfElem) -> HopfElem {
        let mut out = HopfElem::zero();
        for (m, c) in p.terms() {
            out.add_assign(&self.monomial(m).scale(c));
        }
        out
    }

    fn monomial(&mut self, m: &HopfMonomial) -> HopfElem {
        let mut out = HopfElem::one();
        for (g, e) in m.factors() {
            let s = self.generator(g);
            for _ in 0..*e {
                out = out.mul(&s);
            }
        }
        out
    }
}

/// `S a^k_e = sum_{i=1}^{k} (-1)^i sum_{p_1+..+p_i = k} a^{p_1}_e ... a^{p_i}_e`.
pub fn antipode_empty(k: usize) -> HopfElem {
    let mut out = HopfElem::zero();
    for i in 1..=k {
        let sign = if i % 2 == 0 { q(1) } else { q(-1) };
        for ps in compositions(k, i) {
            out.add_term(Monomial::from_factors(ps.iter().map(|&p| (CoordGen::empty(p), 1))), sign.clone());
        }
    }
    out
}

/// `S a = -a - sum S(a') a''` over the reduced coproduct.
pub struct ClassicalAntipode {
    coproduct: Coproduct,
    memo: HashMap<CoordGen, HopfElem>,
}

impl ClassicalAntipode {
    pub fn new(ctx: HopfContext) -> Self {
        ClassicalAntipode { coproduct: Coproduct::new(ctx), memo: HashMap::new() }
    }
}

impl Antipode for ClassicalAntipode {
    fn name(&self) -> &'static str {
        "classical"
    }

    fn generator(&mut self, g: &CoordGen) -> HopfElem {
        if let Some(s) = self.memo.get(g) {
            return s.clone();
        }
        let reduced = self.coproduct.reduced(g);
        let mut out = CPoly::gen(g.clone()).neg();
        for (l, r, c) in reduced.terms() {
            let sl = self.monomial(l);
            out = out.sub(&sl.mul_monomial(r).scale(c));
        }
        self.memo.insert(g.clone(), out.clone());
        out
    }
}

/// `S a^k_η = Θ̃'_η (S a^k_e)` with
/// `θ̃'_{x_l} = θ̃_{x_l} + sum_{j<l} S(a^{l-j}_e) θ̃_{x_j}`.
pub struct CoderivationAntipode {
    empty: HashMap<usize, HopfElem>,
    memo: HashMap<CoordGen, HopfElem>,
}

impl CoderivationAntipode {
    pub fn new(_ctx: HopfContext) -> Self {
        CoderivationAntipode { empty: HashMap::new(), memo: HashMap::new() }
    }

    fn empty(&mut self, k: usize) -> HopfElem {
        self.empty.entry(k).or_insert_with(|| antipode_empty(k)).clone()
    }

    /// `θ̃'_{x_l}` applied to `p`.
    pub fn theta_prime(&mut self, p: &HopfElem, l: usize) -> HopfElem {
        let coeffs: Vec<HopfElem> = (1..l).map(|j| self.empty(l - j)).collect();
        p.derive(&mut |g: &CoordGen| {
            let mut out = CPoly::gen(g.shift(l));
            for j in 1..l {
                out.add_assign(&coeffs[j - 1].mul(&CPoly::gen(g.shift(j))));
            }
            out
        })
    }
}

impl Antipode for CoderivationAntipode {
    fn name(&self) -> &'static str {
        "coderivation"
    }

    fn generator(&mut self, g: &CoordGen) -> HopfElem {
        if let Some(s) = self.memo.get(g) {
            return s.clone();
        }
        let out = match g.word.last() {
            None => self.empty(g.root),
            Some(l) => {
                let prefix = CoordGen { root: g.root, word: g.word.init() };
                let inner = self.generator(&prefix);
                self.theta_prime(&inner, l)
            }
        };
        self.memo.insert(g.clone(), out.clone());
        out
    }
}

/// Which antipode algorithm to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    Classical,
    Coderivation,
}

impl Algorithm {
    pub fn build(self, ctx: HopfContext) -> Box<dyn Antipode + Send> {
        match self {
            Algorithm::Classical => Box::new(ClassicalAntipode::new(ctx)),
            Algorithm::Coderivation => Box::new(CoderivationAntipode::new(ctx)),
        }
    }
}

pub fn antipode_classical(ctx: HopfContext, g: &CoordGen) -> Result<HopfElem> {
    ctx.check(g)?;
    Ok(ClassicalAntipode::new(ctx).generator(g))
}

pub fn antipode_coderivation(ctx: HopfContext, g: &CoordGen) -> Result<HopfElem> {
    ctx.check(g)?;
    Ok(CoderivationAntipode::new(ctx).generator(g))
}

// ---------------------------------------------------------------------------
// Evaluation against series

/// Ring-morphism evaluation `a^k_η -> <d_k, η>`.
pub fn eval_coord(p: &HopfElem, d: &[NCSeries]) -> Result<Q> {
    let mut table = BTreeMap::new();
    for g in p.generators() {
        let dk = d.get(g.root - 1).ok_or_else(|| Error::ShapeMismatch(format!("{g} needs {} series, got {}", g.root, d.len())))?;
        table.insert(g.clone(), dk.coefficient(&g.word)?);
    }
    p.substitute(&table)
}

/// Compares `S(a^k_η)(d)` with `<(d^{-1})_k, η>` for every generator of grade
/// `<= cap`, the inverse taken in the feedback group.
pub fn antipode_vs_group_inverse(ctx: HopfContext, d: &ToeplitzSeries) -> Result<Option<String>> {
    if ctx.mbar + 1 != ctx.m || d.size() != ctx.m || d.alphabet() != ctx.m {
        return Err(Error::ShapeMismatch(format!("need m̄ = m - 1 and a Toeplitz series of size m = {}", ctx.m)));
    }
    let inv = group_inverse(d);
    let mut s = CoderivationAntipode::new(ctx);
    for g in ctx.generators(d.cap()) {
        let lhs = eval_coord(&s.generator(&g), d.entries())?;
        let rhs = inv.entry(g.root).coefficient(&g.word)?;
        if lhs != rhs {
            return Ok(Some(format!("{g}: antipode gives {}, group inverse gives {}", fmt_q(&lhs), fmt_q(&rhs))));
        }
    }
    Ok(None)
}

/// Small random realization with `m` vector fields and `m - 1` outputs:
/// polynomials of degree `<= 2` with coefficients in `{-2, ..., 2}`, `z_0 = 1`.
pub fn random_realization(m: usize, rng: &mut impl Rng) -> crate::abelfeed::Realization {
    let poly = |rng: &mut dyn rand::RngCore| {
        let coeffs: Vec<i64> = (0..3).map(|_| rng.gen_range(-2..=2)).collect();
        crate::polyring::UPoly::from_ints(&coeffs)
    };
    let g = (0..m).map(|_| poly(rng)).collect();
    let h = (1..m).map(|_| poly(rng)).collect();
    crate::abelfeed::Realization::new(g, q(1), h).expect("nonempty")
}

// ---------------------------------------------------------------------------
// Axiom checks

/// First generator (in grade order) where `check` fails.
fn first_failure(gens: &[CoordGen], mut check: impl FnMut(&CoordGen) -> Option<String>) -> Option<String> {
    gens.iter().find_map(|g| check(g).map(|msg| format!("{g}: {msg}")))
}

/// Coassociativity, counit, grade preservation and the antipode identities
/// `m(S ⊗ id)Δ = m(id ⊗ S)Δ = uε` on every generator of grade `<= grade`.
pub fn check_axioms(ctx: HopfContext, grade: usize) -> Vec<CheckReport> {
    let gens = ctx.generators(grade);
    let tag = format!("m={} mbar={} grade<={}", ctx.m, ctx.mbar, grade);
    let mut cop = Coproduct::new(ctx);
    let mut s = CoderivationAntipode::new(ctx);

    let coassoc = first_failure(&gens, |g| (cop.left_iterated(g) != cop.right_iterated(g)).then(|| "not coassociative".into()));
    let counit_fail = first_failure(&gens, |g| {
        let dg = cop.generator(g);
        let x = CPoly::gen(g.clone());
        let left = dg.multiply_out(|l| HopfElem::constant(counit(l)), |r| CPoly::term(r.clone(), Q::one()));
        let right = dg.multiply_out(|l| CPoly::term(l.clone(), Q::one()), |r| HopfElem::constant(counit(r)));
        (left != x || right != x).then(|| "counit law fails".into())
    });
    let grading = first_failure(&gens, |g| {
        cop.generator(g).terms().find(|(l, r, _)| l.degree() + r.degree() != g.grade()).map(|(l, r, _)| format!("term {l} (x) {r} breaks the grading"))
    });
    let antipode = first_failure(&gens, |g| {
        let dg = cop.generator(g);
        let left = dg.multiply_out(|l| s.monomial(l), |r| CPoly::term(r.clone(), Q::one()));
        let right = dg.multiply_out(|l| CPoly::term(l.clone(), Q::one()), |r| s.monomial(r));
        (!left.is_zero() || !right.is_zero()).then(|| format!("m(S⊗id)Δ = {left}, m(id⊗S)Δ = {right}"))
    });
    vec![
        CheckReport::exact(format!("coassociativity {tag}"), coassoc),
        CheckReport::exact(format!("counit {tag}"), counit_fail),
        CheckReport::exact(format!("grading {tag}"), grading),
        CheckReport::exact(format!("antipode-identity {tag}"), antipode),
    ]
}

/// `antipode_classical = antipode_coderivation` on every generator of grade
/// `<= grade`.
pub fn check_algorithm_equivalence(ctx: HopfContext, grade: usize) -> CheckReport {
    let mut a = ClassicalAntipode::new(ctx);
    let mut b = CoderivationAntipode::new(ctx);
    let gens = ctx.generators(grade);
    let fail = first_failure(&gens, |g| {
        let (x, y) = (a.generator(g), b.generator(g));
        (x != y).then(|| format!("classical {x} vs coderivation {y}"))
    });
    CheckReport::exact(format!("antipode-equivalence m={} mbar={} grade<={}", ctx.m, ctx.mbar, grade), fail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelfeed::ferfera;

    fn ctx(m: usize, mbar: usize) -> HopfContext {
        HopfContext::new(m, mbar).unwrap()
    }

    fn cg(root: usize, word: &str) -> CoordGen {
        CoordGen::new(root, Word::parse(word).unwrap())
    }

    fn tp(l: HopfElem, r: HopfElem) -> Tensor {
        Tensor::pure(&l, &r)
    }

    fn one() -> HopfElem {
        HopfElem::one()
    }

    #[test]
    fn grades_and_display() {
        assert_eq!(cg(2, "x1.x3").grade(), 6);
        assert_eq!(cg(1, "e").to_string(), "a[1;e]");
        let p = gen(1, "x2").neg().add(&gen(1, "x1").mul(&gen(1, "e")));
        assert_eq!(p.to_string(), "-a[1;x2] + a[1;x1]·a[1;e]");
        assert_eq!(gen(1, "e").pow(2).to_string(), "a[1;e]·a[1;e]");
    }

    #[test]
    fn context_bounds() {
        assert!(HopfContext::new(3, 2).is_ok());
        assert!(HopfContext::new(3, 3).is_ok());
        assert!(HopfContext::new(3, 1).is_err());
        assert!(HopfContext::new(2, 3).is_err());
        assert_eq!(ctx(2, 1).generators(2), vec![cg(1, "e"), cg(1, "x1")]);
    }

    #[test]
    fn empty_word_coproducts() {
        let prim = |k: usize| tp(gen(k, "e"), one()).add(&tp(one(), gen(k, "e")));
        assert_eq!(coproduct_empty(1), prim(1));
        assert_eq!(coproduct_empty(2), prim(2).add(&tp(gen(1, "e"), gen(1, "e"))));
        assert_eq!(coproduct_empty(3), prim(3).add(&tp(gen(1, "e"), gen(2, "e"))).add(&tp(gen(2, "e"), gen(1, "e"))));
    }

    #[test]
    fn listed_reduced_coproducts() {
        let mut c = Coproduct::new(ctx(3, 2));
        assert!(c.reduced(&cg(1, "x1")).is_zero());
        assert_eq!(c.reduced(&cg(2, "e")), tp(gen(1, "e"), gen(1, "e")));
        assert_eq!(c.reduced(&cg(2, "x1")), tp(gen(1, "x1"), gen(1, "e")).add(&tp(gen(1, "e"), gen(1, "x1"))));
        assert_eq!(c.reduced(&cg(1, "x2")), tp(gen(1, "x1"), gen(1, "e")));
        let expect = tp(gen(2, "x1"), gen(1, "e"))
            .add(&tp(gen(1, "x2"), gen(1, "e")))
            .add(&tp(gen(1, "e"), gen(1, "x2")))
            .add(&tp(gen(1, "x1"), gen(1, "e").pow(2)));
        assert_eq!(c.reduced(&cg(2, "x2")), expect);
        assert_eq!(c.reduced(&cg(1, "x3")), tp(gen(1, "x1"), gen(2, "e")).add(&tp(gen(1, "x2"), gen(1, "e"))));
        let expect = tp(gen(2, "x1"), gen(2, "e"))
            .add(&tp(gen(2, "x2"), gen(1, "e")))
            .add(&tp(gen(1, "x3"), gen(1, "e")))
            .add(&tp(gen(1, "e"), gen(1, "x3")))
            .add(&tp(gen(1, "x1"), gen(2, "e").mul(&gen(1, "e"))))
            .add(&tp(gen(1, "x2"), gen(1, "e").pow(2)));
        assert_eq!(c.reduced(&cg(2, "x3")), expect);
    }

    // Length-one words: the closed formula for Δ a^l_{x_i}.
    fn coproduct_length_one(l: usize, i: usize) -> Tensor {
        let xi = format!("x{i}");
        let mut t = tp(gen(l, &xi), one()).add(&tp(one(), gen(l, &xi)));
        for j in 1..i {
            t = t.add(&tp(gen(l, &format!("x{j}")), gen(i - j, "e")));
        }
        for k in 1..l {
            t = t.add(&tp(gen(k, &xi), gen(l - k, "e"))).add(&tp(gen(k, "e"), gen(l - k, &xi)));
            for j in 1..i {
                t = t.add(&tp(gen(k, &format!("x{j}")), gen(i - j, "e").mul(&gen(l - k, "e"))));
            }
        }
        t
    }

    // Length-two words: the closed formula for Δ a^l_{x_j x_i}.
    fn coproduct_length_two(l: usize, j: usize, i: usize) -> Tensor {
        let w = |a: usize, b: usize| format!("x{a}.x{b}");
        let x = |a: usize| format!("x{a}");
        let ae = |k: usize| gen(k, "e");
        let mut t = tp(gen(l, &w(j, i)), one()).add(&tp(one(), gen(l, &w(j, i))));
        for n in 1..j {
            t = t.add(&tp(gen(l, &w(n, i)), ae(j - n)));
            t = t.add(&tp(gen(l, &x(n)), gen(j - n, &x(i))));
        }
        for s in 1..i {
            t = t.add(&tp(gen(l, &w(j, s)), ae(i - s)));
            for n in 1..j {
                t = t.add(&tp(gen(l, &w(n, s)), ae(i - s).mul(&ae(j - n))));
            }
        }
        for k in 1..l {
            t = t.add(&tp(gen(k, &w(j, i)), ae(l - k)));
            t = t.add(&tp(gen(k, &x(i)), gen(l - k, &x(j))));
            t = t.add(&tp(gen(k, &x(j)), gen(l - k, &x(i))));
            t = t.add(&tp(gen(k, "e"), gen(l - k, &w(j, i))));
            for n in 1..j {
                t = t.add(&tp(gen(k, &w(n, i)), ae(j - n).mul(&ae(l - k))));
                t = t.add(&tp(gen(k, &x(n)), gen(j - n, &x(i)).mul(&ae(l - k))));
                t = t.add(&tp(gen(k, &x(n)), ae(j - n).mul(&gen(l - k, &x(i)))));
            }
            for s in 1..i {
                t = t.add(&tp(gen(k, &w(j, s)), ae(i - s).mul(&ae(l - k))));
                t = t.add(&tp(gen(k, &x(s)), ae(i - s).mul(&gen(l - k, &x(j)))));
                for n in 1..j {
                    t = t.add(&tp(gen(k, &w(n, s)), ae(i - s).mul(&ae(j - n)).mul(&ae(l - k))));
                }
            }
        }
        t
    }

    #[test]
    fn coproduct_matches_closed_formulas() {
        let mut c = Coproduct::new(ctx(4, 3));
        for l in 1..=3 {
            for i in 1..=4 {
                assert_eq!(c.generator(&CoordGen::new(l, Word::letter(i))), coproduct_length_one(l, i), "l={l} i={i}");
                for j in 1..=4 {
                    let g = CoordGen::new(l, Word::from_indices(&[j, i]));
                    assert_eq!(c.generator(&g), coproduct_length_two(l, j, i), "l={l} x{j}x{i}");
                }
            }
        }
    }

    #[test]
    fn listed_antipodes() {
        let c = ctx(3, 2);
        let e = |r, w| gen(r, w);
        let cases: Vec<(CoordGen, HopfElem)> = vec![
            (cg(1, "e"), e(1, "e").neg()),
            (cg(2, "e"), e(2, "e").neg().add(&e(1, "e").pow(2))),
            (cg(1, "x1"), e(1, "x1").neg()),
            (cg(1, "x2"), e(1, "x2").neg().add(&e(1, "x1").mul(&e(1, "e")))),
            (cg(2, "x1"), e(2, "x1").neg().add(&e(1, "x1").mul(&e(1, "e")).scale(&q(2)))),
            (cg(1, "x3"), e(1, "x3").neg().add(&e(1, "x2").mul(&e(1, "e"))).sub(&e(1, "x1").mul(&e(1, "e").pow(2))).add(&e(1, "x1").mul(&e(2, "e")))),
            (
                cg(2, "x2"),
                e(2, "x2")
                    .neg()
                    .add(&e(1, "x2").mul(&e(1, "e")).scale(&q(2)))
                    .sub(&e(1, "x1").mul(&e(1, "e").pow(2)).scale(&q(2)))
                    .add(&e(2, "x1").mul(&e(1, "e"))),
            ),
            (
                cg(2, "x3"),
                e(2, "x3")
                    .neg()
                    .add(&e(1, "x3").mul(&e(1, "e")).scale(&q(2)))
                    .sub(&e(1, "x2").mul(&e(1, "e").pow(2)).scale(&q(2)))
                    .add(&e(2, "x2").mul(&e(1, "e")))
                    .sub(&e(2, "x1").mul(&e(1, "e").pow(2)))
                    .add(&e(2, "x1").mul(&e(2, "e")))
                    .add(&e(1, "x1").mul(&e(1, "e").pow(3)).scale(&q(2)))
                    .sub(&e(1, "x1").mul(&e(1, "e")).mul(&e(2, "e")).scale(&q(2))),
            ),
        ];
        for (g, expect) in cases {
            assert_eq!(antipode_classical(c, &g).unwrap(), expect, "classical {g}");
            assert_eq!(antipode_coderivation(c, &g).unwrap(), expect, "coderivation {g}");
        }
    }

    #[test]
    fn worked_coderivation_examples() {
        let c = ctx(3, 3);
        let mut s = CoderivationAntipode::new(c);
        let e = |r, w| gen(r, w);
        let s3e = antipode_empty(3);
        assert_eq!(s3e, e(3, "e").neg().add(&e(1, "e").mul(&e(2, "e")).scale(&q(2))).sub(&e(1, "e").pow(3)));
        let got = s.theta_prime(&s3e, 1);
        let expect = e(3, "x1")
            .neg()
            .add(&e(1, "x1").mul(&e(2, "e")).scale(&q(2)))
            .add(&e(1, "e").mul(&e(2, "x1")).scale(&q(2)))
            .sub(&e(1, "x1").mul(&e(1, "e").pow(2)).scale(&q(3)));
        assert_eq!(got, expect);
        assert_eq!(got, antipode_classical(c, &cg(3, "x1")).unwrap());
        let got = s.theta_prime(&antipode_empty(2), 2);
        assert_eq!(got, antipode_classical(c, &cg(2, "x2")).unwrap());
    }

    #[test]
    fn algorithms_agree() {
        for (m, mbar, g) in [(2, 1, 6), (3, 2, 6), (3, 3, 5), (4, 3, 5)] {
            assert!(check_algorithm_equivalence(ctx(m, mbar), g).pass);
        }
    }

    #[test]
    fn axioms_small() {
        for (m, mbar) in [(2, 1), (3, 2)] {
            for r in check_axioms(ctx(m, mbar), 5) {
                assert!(r.pass, "{r:?}");
            }
        }
    }

    #[test]
    fn antipode_is_multiplicative_on_products() {
        let c = ctx(3, 2);
        let mut s = ClassicalAntipode::new(c);
        let a = gen(1, "x2").mul(&gen(2, "e"));
        let direct = s.apply(&a);
        let split = s.apply(&gen(1, "x2")).mul(&s.apply(&gen(2, "e")));
        assert_eq!(direct, split);
        // S is an involution on this commutative algebra
        let inner = s.generator(&cg(2, "x1.x2"));
        let twice = s.apply(&inner);
        assert_eq!(twice, gen(2, "x1.x2"));
    }

    #[test]
    fn evaluation_on_negative_ferfera() {
        let d = vec![ferfera(3, 4).neg(), NCSeries::zero(3, 4)];
        assert_eq!(eval_coord(&gen(1, "x1"), &d).unwrap(), q(-1));
        let s = antipode_classical(ctx(3, 2), &cg(1, "x3")).unwrap();
        assert_eq!(eval_coord(&s, &d).unwrap(), q(1));
        assert_eq!(eval_coord(&one(), &d).unwrap(), q(1));
        let deep = gen(1, "x1.x1.x1.x1.x1");
        assert!(matches!(eval_coord(&deep, &d), Err(Error::QueryBeyondCap { .. })));
    }

    #[test]
    fn antipode_matches_group_inverse() {
        let c = ctx(3, 2);
        let d = ToeplitzSeries::with_first(ferfera(3, 5).neg());
        assert_eq!(antipode_vs_group_inverse(c, &d).unwrap(), None);
        assert_eq!(antipode_vs_group_inverse(c, &ToeplitzSeries::identity(3, 4)).unwrap(), None);
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..3 {
            let r = random_realization(3, &mut rng);
            let d = ToeplitzSeries::new(crate::abelfeed::generate_all(&r, 4)).unwrap();
            assert_eq!(antipode_vs_group_inverse(c, &d).unwrap(), None);
        }
    }
}
