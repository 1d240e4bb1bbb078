//! Classical Faà di Bruno computations: partial Bell polynomials, the
//! symbolic inverse of `I + sum h_j N^j`, the matrix `M_h` and the antipode
//! row read off from its inverse.

#![allow(clippy::needless_range_loop)]

use std::fmt;

use num_traits::Zero;

use crate::combinat::{partitions, partitions_with_parts};
use crate::error::{Error, Result};
use crate::polyring::{CPoly, Generator, Monomial};
use crate::rational::{factorial, Q};

/// Indeterminate `t_i` (Bell arguments) or `h_i`, both of degree `i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FdbSym {
    index: usize,
    name: char,
}

impl FdbSym {
    pub fn t(i: usize) -> Self {
        FdbSym { index: i, name: 't' }
    }

    pub fn h(i: usize) -> Self {
        FdbSym { index: i, name: 'h' }
    }

    pub fn index(&self) -> usize {
        self.index
    }
}

impl fmt::Display for FdbSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.name, self.index)
    }
}

impl Generator for FdbSym {
    fn degree(&self) -> usize {
        self.index
    }
}

pub type FdbPoly = CPoly<FdbSym>;
pub type PolyMatrix = Vec<Vec<FdbPoly>>;

pub fn h(i: usize) -> FdbPoly {
    CPoly::gen(FdbSym::h(i))
}

pub fn t(i: usize) -> FdbPoly {
    CPoly::gen(FdbSym::t(i))
}

/// Polynomial in the `h_i` from `(coefficient, [(i, exponent)])` pairs.
pub fn h_poly(terms: &[(i64, &[(usize, u32)])]) -> FdbPoly {
    let mut out = FdbPoly::zero();
    for (c, factors) in terms {
        out.add_term(Monomial::from_factors(factors.iter().map(|&(i, e)| (FdbSym::h(i), e))), Q::from_integer((*c).into()));
    }
    out
}

/// `B_{j,k}(t_1, ..., t_{j-k+1})
///  = sum j! / (prod k_i! (i!)^{k_i}) prod t_i^{k_i}` over partitions of `j`
/// into `k` parts.
pub fn bell(j: usize, k: usize) -> Result<FdbPoly> {
    if k == 0 || k > j {
        return Err(Error::InvalidArgument(format!("B_{{{j},{k}}} needs 1 <= k <= j")));
    }
    Ok(bell_with(j, k, &|i| t(i)))
}

// B_{j,k} with t_i replaced by `arg(i)`.
fn bell_with(j: usize, k: usize, arg: &dyn Fn(usize) -> FdbPoly) -> FdbPoly {
    let mut out = FdbPoly::zero();
    for ks in partitions_with_parts(j, k) {
        let mut coeff = factorial(j);
        let mut term = FdbPoly::one();
        for (idx, &ki) in ks.iter().enumerate() {
            if ki == 0 {
                continue;
            }
            let i = idx + 1;
            coeff /= factorial(ki) * crate::rational::pow_q(&factorial(i), ki);
            term = term.mul(&arg(i).pow(ki as u32));
        }
        out.add_assign(&term.scale(&coeff));
    }
    out
}

/// Numeric `B_{j,k}(a_1, a_2, ...)`.
pub fn bell_eval(j: usize, k: usize, a: &[Q]) -> Q {
    let mut out = Q::zero();
    for ks in partitions_with_parts(j, k) {
        let mut term = factorial(j);
        for (idx, &ki) in ks.iter().enumerate() {
            if ki == 0 {
                continue;
            }
            let i = idx + 1;
            let ai = a.get(i - 1).cloned().unwrap_or_else(Q::zero);
            term = term * crate::rational::pow_q(&(ai / factorial(i)), ki) / factorial(ki);
        }
        out += term;
    }
    out
}

/// `h̃_1, ..., h̃_{m-1}`: the entries of `(I + sum h_j N^j)^{-1}`,
/// `h̃_j = sum (-1)^k k! / (k_1! ... k_j!) h_1^{k_1} ... h_j^{k_j}`.
pub fn symbolic_toeplitz_inverse(m: usize) -> Result<Vec<FdbPoly>> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("Toeplitz inverse needs m >= 2, got {m}")));
    }
    Ok((1..m)
        .map(|j| {
            let mut out = FdbPoly::zero();
            for ks in partitions(j) {
                let k: usize = ks.iter().sum();
                let mut coeff = factorial(k);
                if k % 2 == 1 {
                    coeff = -coeff;
                }
                let factors: Vec<(FdbSym, u32)> =
                    ks.iter().enumerate().filter(|(_, &c)| c > 0).map(|(i, &c)| (FdbSym::h(i + 1), c as u32)).collect();
                for &(_, c) in &factors {
                    coeff /= factorial(c as usize);
                }
                out.add_term(Monomial::from_factors(factors), coeff);
            }
            out
        })
        .collect())
}

/// `M_h`, row `k` and column `j` (1-based) holding
/// `k!/j! B_{j,k}(h_1, 2! h_2, ..., (j-k+1)! h_{j-k+1})` for `k <= j`, zero
/// below the diagonal.
pub fn mh_matrix(n: usize) -> PolyMatrix {
    let scaled = |i: usize| h(i).scale(&factorial(i));
    (1..=n)
        .map(|k| {
            (1..=n)
                .map(|j| if k > j { FdbPoly::zero() } else { bell_with(j, k, &scaled).scale(&(factorial(k) / factorial(j))) })
                .collect()
        })
        .collect()
}

/// Substitutes `h_1 = 1` in every entry.
pub fn set_h1_one(m: &PolyMatrix) -> PolyMatrix {
    m.iter().map(|row| row.iter().map(|p| p.compose(|g: &FdbSym| if *g == FdbSym::h(1) { FdbPoly::one() } else { CPoly::gen(*g) })).collect()).collect()
}

/// Inverse of an upper unitriangular polynomial matrix by back substitution.
pub fn unitriangular_inverse(u: &PolyMatrix) -> Result<PolyMatrix> {
    let n = u.len();
    for (i, row) in u.iter().enumerate() {
        if row.len() != n || row[i] != FdbPoly::one() || row[..i].iter().any(|p| !p.is_zero()) {
            return Err(Error::InvalidArgument("matrix is not upper unitriangular".into()));
        }
    }
    let mut v = vec![vec![FdbPoly::zero(); n]; n];
    for j in 0..n {
        v[j][j] = FdbPoly::one();
        for i in (0..j).rev() {
            let mut acc = FdbPoly::zero();
            for k in i + 1..=j {
                acc.add_assign(&u[i][k].mul(&v[k][j]));
            }
            v[i][j] = acc.neg();
        }
    }
    Ok(v)
}

pub fn matmul(a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = FdbPoly::zero();
                    for k in 0..n {
                        acc.add_assign(&a[i][k].mul(&b[k][j]));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn is_identity(m: &PolyMatrix) -> bool {
    m.iter().enumerate().all(|(i, row)| row.iter().enumerate().all(|(j, p)| if i == j { *p == FdbPoly::one() } else { p.is_zero() }))
}

/// Entry `j + 1` of the top row of `M_h^{-1}` at `h_1 = 1`:
/// `sum_{k=1}^{j} (-1)^k B_{j+k,k}(0, 2! h_2, 3! h_3, ...) / (j+1)!`.
pub fn fdb_antipode_row(j: usize) -> Result<FdbPoly> {
    if j == 0 {
        return Err(Error::InvalidArgument("antipode rows start at j = 1".into()));
    }
    let arg = |i: usize| if i == 1 { FdbPoly::zero() } else { h(i).scale(&factorial(i)) };
    let mut out = FdbPoly::zero();
    for k in 1..=j {
        let b = bell_with(j + k, k, &arg);
        out.add_assign(&if k % 2 == 1 { b.neg() } else { b });
    }
    Ok(out.scale(&factorial(j + 1).recip()))
}

/// `h̃_i = sum_{k=1}^{i} (-1)^k [M_h]_{k,i}`, the alternating row vector
/// `(-1, 1, -1, ...)` applied to column `i`.
pub fn mh_alternating(i: usize) -> FdbPoly {
    let m = mh_matrix(i);
    let mut out = FdbPoly::zero();
    for k in 1..=i {
        let e = &m[k - 1][i - 1];
        out.add_assign(&if k % 2 == 1 { e.neg() } else { e.clone() });
    }
    out
}

/// Taylor coefficients of `f(h(t))` up to `order`, all series in the
/// exponential normalization `sum a_n t^n / n!`. Requires `h(0) = 0`.
pub fn fdb_series_compose(f: &[Q], h: &[Q], order: usize) -> Result<Vec<Q>> {
    if h.first().is_some_and(|a0| !a0.is_zero()) {
        return Err(Error::InvalidArgument("inner series must vanish at 0".into()));
    }
    let beta = |k: usize| f.get(k).cloned().unwrap_or_else(Q::zero);
    let alpha: Vec<Q> = (1..=order).map(|n| h.get(n).cloned().unwrap_or_else(Q::zero)).collect();
    let mut out = vec![beta(0)];
    for j in 1..=order {
        let mut acc = Q::zero();
        for k in 1..=j {
            acc += beta(k) * bell_eval(j, k, &alpha);
        }
        out.push(acc);
    }
    Ok(out)
}

/// Renders a polynomial matrix row by row, entries separated by ` | `.
pub fn render_matrix(m: &PolyMatrix) -> String {
    m.iter().map(|row| row.iter().map(ToString::to_string).collect::<Vec<_>>().join(" | ")).collect::<Vec<_>>().join("\n")
}
