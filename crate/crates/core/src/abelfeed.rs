//! Abel generating series and the constructions that produce them: Devlin's
//! linear recursion, the feedback group inverse, the feedback product and
//! one-dimensional polynomial realizations.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::combinat::partitions;
use crate::compose::{feedback_product, group_inverse, mixed_compose, DeltaPowers, ToeplitzSeries};
use crate::error::{Error, Result};
use crate::polyring::{lie_derivative, UPoly};
use crate::rational::{factorial, fmt_q, q, Q};
use crate::report::CheckReport;
use crate::series::NCSeries;
use crate::words::Word;

/// `c_F = sum_{k <= cap} k! x_1^k` over an alphabet of `m` letters.
pub fn ferfera(m: usize, cap: usize) -> NCSeries {
    let terms = (0..=cap).map(|k| (Word::from_indices(&vec![1; k]), factorial(k)));
    NCSeries::from_terms(m.max(1), cap, terms).expect("x1 is in every alphabet")
}

fn require_m(m: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("Abel constructions need m >= 2, got {m}")));
    }
    Ok(())
}

/// Graded pieces `c(1), ..., c(cap+1)` of an Abel series together with their sum.
#[derive(Clone, Debug, PartialEq)]
pub struct DevlinTable {
    pub pieces: Vec<NCSeries>,
    pub sum: NCSeries,
}

impl DevlinTable {
    /// `c(n)` for `n >= 1`.
    pub fn piece(&self, n: usize) -> &NCSeries {
        &self.pieces[n - 1]
    }
}

/// `c(1) = 1`, `c(n) = sum_{i=1}^{m} (n-i) c(n-i) x_i`.
pub fn devlin(m: usize, cap: usize) -> Result<DevlinTable> {
    require_m(m)?;
    let mut pieces: Vec<NCSeries> = Vec::with_capacity(cap + 1);
    pieces.push(NCSeries::one(m, cap));
    for n in 2..=cap + 1 {
        let mut cn = NCSeries::zero(m, cap);
        for i in 1..=m.min(n - 1) {
            let prev = &pieces[n - i - 1];
            cn = cn.add_unchecked(&prev.right_letter(i).scale(&q((n - i) as i64)));
        }
        pieces.push(cn);
    }
    let sum = pieces.iter().fold(NCSeries::zero(m, cap), |acc, p| acc.add_unchecked(p));
    Ok(DevlinTable { pieces, sum })
}

/// `c_{A,m} = (I - c_F N)^{-1}_1`, first entry of the group inverse.
pub fn abel_via_group_inverse(m: usize, cap: usize) -> Result<NCSeries> {
    require_m(m)?;
    let d = ToeplitzSeries::with_first(ferfera(m, cap).neg());
    Ok(group_inverse(&d).entry(1))
}

/// `c_{A,m} = [c_{F,m} @ d_Toep]_1` with `d` the standard powers of `δ_1`.
pub fn abel_via_feedback(m: usize, cap: usize) -> Result<NCSeries> {
    require_m(m)?;
    let mut c = vec![NCSeries::zero(m, cap); m];
    c[0] = ferfera(m, cap);
    let out = feedback_product(&c, &DeltaPowers::standard(m))?;
    Ok(out.into_iter().next().expect("m components"))
}

/// `c_F ∘̃ (I - c_F N)^{-1}_δ`, the closed formula behind the feedback route.
pub fn abel_via_closed_formula(m: usize, cap: usize) -> Result<NCSeries> {
    require_m(m)?;
    let cf = ferfera(m, cap);
    let law = group_inverse(&ToeplitzSeries::with_first(cf.neg()));
    mixed_compose(&cf, &law)
}

/// State-space data `(g_1..g_m, z_0, h_1..h_p)` with scalar state `z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    pub g: Vec<UPoly>,
    pub z0: Q,
    pub h: Vec<UPoly>,
}

impl Realization {
    pub fn new(g: Vec<UPoly>, z0: Q, h: Vec<UPoly>) -> Result<Self> {
        if g.is_empty() {
            return Err(Error::ShapeMismatch("realization needs at least one vector field".into()));
        }
        Ok(Realization { g, z0, h })
    }

    /// `g_i = z^{i+1}`, `z_0 = 1`, `h_j = z^j`.
    pub fn abel(m: usize) -> Self {
        let g = (1..=m).map(|i| UPoly::z_pow(i + 1)).collect();
        let h = (1..m).map(UPoly::z_pow).collect();
        Realization { g, z0: q(1), h }
    }

    /// `g = (z^2, 0, ...)`, `h = (-z, 0, ...)`: realizes `(-c_F, 0, ...)`.
    pub fn negative_ferfera(m: usize) -> Self {
        let mut g = vec![UPoly::zero(); m];
        g[0] = UPoly::z_pow(2);
        let mut h = vec![UPoly::zero(); m.saturating_sub(1)];
        if let Some(h1) = h.first_mut() {
            *h1 = UPoly::z_pow(1).neg();
        }
        Realization { g, z0: q(1), h }
    }

    /// Alphabet size.
    pub fn m(&self) -> usize {
        self.g.len()
    }

    /// Parses `g1,...,gm;z0;h1,...,hp` with each polynomial given by its
    /// coefficients from the constant term up, separated by spaces, e.g.
    /// `0 0 1;1;0 -1` for `(z^2; 1; -z)`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(';').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("realization `{s}` needs three `;`-separated fields")));
        }
        let polys = |field: &str| -> Result<Vec<UPoly>> {
            if field.trim().is_empty() {
                return Ok(Vec::new());
            }
            field
                .split(',')
                .map(|p| {
                    let coeffs = p.split_whitespace().map(crate::rational::parse_q).collect::<Result<Vec<_>>>()?;
                    Ok(UPoly::from_coeffs(coeffs))
                })
                .collect()
        };
        Realization::new(polys(parts[0])?, crate::rational::parse_q(parts[1])?, polys(parts[2])?)
    }
}

impl fmt::Display for Realization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> =
            self.g.iter().map(ToString::to_string).chain([fmt_q(&self.z0)]).chain(self.h.iter().map(ToString::to_string)).collect();
        write!(f, "({})", items.join(", "))
    }
}

/// Symbolic graded pieces `P_0, ..., P_cap` for output `h`: `P_0 = h e`,
/// `P_n = sum_i (L_{g_i} P_{n-i}) x_i`. Each map sends a word of degree `n`
/// to its polynomial coefficient.
pub fn symbolic_pieces(g: &[UPoly], h: &UPoly, cap: usize) -> Vec<BTreeMap<Word, UPoly>> {
    let m = g.len();
    let mut pieces: Vec<BTreeMap<Word, UPoly>> = Vec::with_capacity(cap + 1);
    let mut p0 = BTreeMap::new();
    if !h.is_zero() {
        p0.insert(Word::empty(), h.clone());
    }
    pieces.push(p0);
    for n in 1..=cap {
        let mut pn: BTreeMap<Word, UPoly> = BTreeMap::new();
        for i in 1..=m.min(n) {
            if g[i - 1].is_zero() {
                continue;
            }
            for (w, p) in &pieces[n - i] {
                let lp = lie_derivative(&g[i - 1], p);
                if !lp.is_zero() {
                    pn.insert(w.append(i), lp);
                }
            }
        }
        pieces.push(pn);
    }
    pieces
}

/// Generating series of output `output` (1-based) up to degree `cap`:
/// `c(n) = P_{n-1}(z_0)`.
pub fn generate_from_realization(r: &Realization, output: usize, cap: usize) -> Result<NCSeries> {
    let h = output
        .checked_sub(1)
        .and_then(|k| r.h.get(k))
        .ok_or_else(|| Error::InvalidArgument(format!("output index {output} outside 1..={}", r.h.len())))?;
    Ok(series_from_output(&r.g, &r.z0, h, cap))
}

fn series_from_output(g: &[UPoly], z0: &Q, h: &UPoly, cap: usize) -> NCSeries {
    let mut out = NCSeries::zero(g.len(), cap);
    for piece in symbolic_pieces(g, h, cap) {
        for (w, p) in piece {
            out.add_term(w, p.eval(z0));
        }
    }
    out
}

/// All outputs of the realization as a tuple of series.
pub fn generate_all(r: &Realization, cap: usize) -> Vec<NCSeries> {
    r.h.iter().map(|h| series_from_output(&r.g, &r.z0, h, cap)).collect()
}

/// `h̃_j = sum_k (-1)^k k! sum_{k_1+..+k_j = k, sum i k_i = j} prod h_i^{k_i} / k_i!`,
/// the strictly upper entries of `H^{-1}` for `H = I + sum h_j N^j`.
pub fn inverse_outputs(h: &[UPoly]) -> Vec<UPoly> {
    (1..=h.len())
        .map(|j| {
            let mut acc = UPoly::zero();
            for ks in partitions(j) {
                let k: usize = ks.iter().sum();
                let mut coeff = factorial(k);
                if k % 2 == 1 {
                    coeff = -coeff;
                }
                let mut term = UPoly::one();
                for (i, &ki) in ks.iter().enumerate() {
                    if ki > 0 {
                        coeff /= factorial(ki);
                        term = term.mul(&h[i].pow(ki as u32));
                    }
                }
                acc = acc.add(&term.scale(&coeff));
            }
            acc
        })
        .collect()
}

/// Realization of the group inverse: `h̃_j` from the multinomial formula and
/// `g̃_i = g_i + sum_{j<i} g_{i-j} h̃_j`.
pub fn realization_inverse(r: &Realization) -> Result<Realization> {
    if r.h.len() + 1 != r.g.len() {
        return Err(Error::ShapeMismatch(format!("{} vector fields need {} outputs, got {}", r.g.len(), r.g.len() - 1, r.h.len())));
    }
    let ht = inverse_outputs(&r.h);
    let gt = (1..=r.g.len())
        .map(|i| (1..i).fold(r.g[i - 1].clone(), |acc, j| acc.add(&r.g[i - j - 1].mul(&ht[j - 1]))))
        .collect();
    Ok(Realization { g: gt, z0: r.z0.clone(), h: ht })
}

/// Outcome of the grading test on an inverse realization.
#[derive(Clone, Debug, PartialEq)]
pub struct GradingReport {
    /// `g_i` homogeneous of vector-field degree `i` and `h_i` of degree `i`.
    pub hypothesis: bool,
    /// `g̃_i` homogeneous of vector-field degree `i`.
    pub inverse_fields_graded: bool,
    /// Every grade-`n` symbolic coefficient of output `k` of the inverse is a
    /// single power `z^{k+n-1}`-homogeneous polynomial, and every word of
    /// `c(n)` has degree `n-1`.
    pub series_graded: bool,
    pub detail: String,
}

impl GradingReport {
    pub fn pass(&self) -> bool {
        self.series_graded
    }
}

// z^p has function degree p and vector-field degree p - 1.
fn homogeneous_power(p: &UPoly) -> Option<Option<usize>> {
    let mut support = p.support();
    match support.next() {
        None => Some(None),
        Some(first) => support.all(|s| s == first).then_some(Some(first)),
    }
}

fn is_field_of_degree(g: &UPoly, d: usize) -> bool {
    matches!(homogeneous_power(g), Some(None)) || homogeneous_power(g) == Some(Some(d + 1))
}

fn is_function_of_degree(h: &UPoly, d: usize) -> bool {
    matches!(homogeneous_power(h), Some(None)) || homogeneous_power(h) == Some(Some(d))
}

/// Checks that the inverse realization generates a graded tuple of series:
/// with `deg z = 1` (so `deg z^{i+1} = i` as a vector field), output `k`
/// must have all grade-`n` symbolic coefficients homogeneous of degree
/// `k + n - 1`. The hypothesis and the degrees of `g̃_i` are reported but do
/// not decide the verdict.
pub fn check_grading_preservation(r: &Realization, cap: usize) -> Result<GradingReport> {
    let inv = realization_inverse(r)?;
    let hypothesis = r.g.iter().enumerate().all(|(i, g)| is_field_of_degree(g, i + 1))
        && r.h.iter().enumerate().all(|(i, h)| is_function_of_degree(h, i + 1));
    let bad_field = inv.g.iter().enumerate().find(|(i, g)| !is_field_of_degree(g, i + 1));
    let inverse_fields_graded = bad_field.is_none();
    let mut detail = match bad_field {
        Some((i, g)) => format!("inverse vector field {} = {} is not homogeneous of degree {}", i + 1, g, i + 1),
        None => String::from("ok"),
    };
    let mut series_graded = true;
    'outer: for (k, h) in inv.h.iter().enumerate() {
        for (n1, piece) in symbolic_pieces(&inv.g, h, cap).iter().enumerate() {
            for (w, p) in piece {
                let expected = k + 1 + n1;
                if w.degree() != n1 || !is_function_of_degree(p, expected) {
                    series_graded = false;
                    detail = format!("output {}: coefficient of {} is {}, expected degree {}", k + 1, w, p, expected);
                    break 'outer;
                }
            }
        }
    }
    Ok(GradingReport { hypothesis, inverse_fields_graded, series_graded, detail })
}

/// Residual of `c_F ∘̃ (sum_i y^{⧢i} N^i)_δ = y`; `None` when it holds.
pub fn fixed_point_residual(m: usize, y: &NCSeries) -> Result<Option<(Word, Q, Q)>> {
    require_m(m)?;
    let law = ToeplitzSeries::new((1..m).map(|i| y.shuffle_power(i)).collect())?;
    let lhs = mixed_compose(&ferfera(m, y.cap()), &law)?;
    Ok(lhs.first_difference(y))
}

fn describe(diff: Option<(Word, Q, Q)>) -> Option<String> {
    diff.map(|(w, a, b)| format!("first discrepancy at {w}: {} vs {}", fmt_q(&a), fmt_q(&b)))
}

/// Feedback fixed point with `y` the Abel series.
pub fn verify_fixed_point(m: usize, cap: usize) -> Result<CheckReport> {
    let y = devlin(m, cap)?.sum;
    let name = format!("fixed-point m={m} cap={cap}");
    Ok(CheckReport::exact(name, describe(fixed_point_residual(m, &y)?)))
}

/// `1 + c ⧢ (sum_i x_i c^{⧢ i-1})`.
pub fn shuffle_identity_rhs(c: &NCSeries, m: usize) -> NCSeries {
    let mut inner = NCSeries::zero(c.m(), c.cap());
    for i in 1..=m {
        inner = inner.add_unchecked(&c.shuffle_power(i - 1).left_letter(i));
    }
    NCSeries::one(c.m(), c.cap()).add_unchecked(&c.shuffle_unchecked(&inner))
}

/// `1 + sum_i x_i c^{⧢ i+1}`.
pub fn direct_recursion_rhs(c: &NCSeries, m: usize) -> NCSeries {
    let mut out = NCSeries::one(c.m(), c.cap());
    for i in 1..=m {
        out = out.add_unchecked(&c.shuffle_power(i + 1).left_letter(i));
    }
    out
}

/// `c(n-1) ⧢ x_1 + sum_{i>=2} sum_{k_1+..+k_i = n-1} c(k_1) ⧢ x_i (c(k_2) ⧢ .. ⧢ c(k_i))`.
pub fn graded_corollary_rhs(table: &DevlinTable, m: usize, n: usize) -> NCSeries {
    let mm = table.sum.m();
    let cap = table.sum.cap();
    let x1 = NCSeries::from_terms(mm, cap, [(Word::letter(1), Q::one())]).expect("x1");
    let mut out = table.piece(n - 1).shuffle_unchecked(&x1);
    for i in 2..=m {
        for ks in crate::combinat::compositions(n - 1, i) {
            let mut tail = NCSeries::one(mm, cap);
            for &k in &ks[1..] {
                tail = tail.shuffle_unchecked(table.piece(k));
            }
            out = out.add_unchecked(&table.piece(ks[0]).shuffle_unchecked(&tail.left_letter(i)));
        }
    }
    out
}

/// Both shuffle equations for the Abel series plus the graded corollary.
pub fn verify_shuffle_identity(m: usize, cap: usize) -> Result<Vec<CheckReport>> {
    let table = devlin(m, cap)?;
    let c = &table.sum;
    let mut reports = vec![
        CheckReport::exact(format!("shuffle-equation m={m} cap={cap}"), describe(shuffle_identity_rhs(c, m).first_difference(c))),
        CheckReport::exact(format!("direct-recursion m={m} cap={cap}"), describe(direct_recursion_rhs(c, m).first_difference(c))),
    ];
    let mut failure = None;
    for n in 2..=cap + 1 {
        if let Some(d) = describe(graded_corollary_rhs(&table, m, n).first_difference(table.piece(n))) {
            failure = Some(format!("grade {n}: {d}"));
            break;
        }
    }
    reports.push(CheckReport::exact(format!("graded-corollary m={m} cap={cap}"), failure));
    Ok(reports)
}

/// The four constructions of `c_{A,m}`, in the order devlin, group inverse,
/// feedback, realization.
pub fn four_routes(m: usize, cap: usize) -> Result<[NCSeries; 4]> {
    let (a, (b, (c, d))) = rayon::join(
        || devlin(m, cap).map(|t| t.sum),
        || {
            rayon::join(
                || abel_via_group_inverse(m, cap),
                || rayon::join(|| abel_via_feedback(m, cap), || generate_from_realization(&Realization::abel(m), 1, cap)),
            )
        },
    );
    Ok([a?, b?, c?, d?])
}

/// Exact equality of the four constructions.
pub fn verify_four_way(m: usize, cap: usize) -> Result<CheckReport> {
    let routes = four_routes(m, cap)?;
    let names = ["devlin", "group-inverse", "feedback", "realization"];
    let mut failure = None;
    for k in 1..4 {
        if let Some(d) = describe(routes[0].first_difference(&routes[k])) {
            failure = Some(format!("{} vs {}: {}", names[0], names[k], d));
            break;
        }
    }
    Ok(CheckReport::exact(format!("fourway m={m} cap={cap}"), failure))
}

/// `L_{z^{i+1}} P_{n-i-1}(1) = (n-i) P_{n-i-1}(1)` for the Abel realization,
/// checked coefficientwise on every grade up to `cap`.
pub fn verify_lie_scaling(m: usize, cap: usize) -> Option<String> {
    let r = Realization::abel(m);
    let pieces = symbolic_pieces(&r.g, &r.h[0], cap);
    for (k, piece) in pieces.iter().enumerate() {
        for i in 1..=m {
            for (w, p) in piece {
                let lhs = lie_derivative(&r.g[i - 1], p).eval(&q(1));
                let rhs = p.eval(&q(1)) * q(k as i64 + 1);
                if lhs != rhs {
                    return Some(format!("grade {k}, word {w}, field {i}"));
                }
            }
        }
    }
    None
}

/// `true` iff every coefficient is a positive integer.
pub fn all_positive_integers(c: &NCSeries) -> bool {
    c.terms().all(|(_, v)| v.is_integer() && *v > Q::zero())
}
