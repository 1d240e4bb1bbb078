//! Named verification suites. Each suite returns a list of [`CheckReport`]s
//! in a fixed order; randomized items draw from a seeded ChaCha generator.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::abelfeed::{self, ferfera, generate_all, Realization};
use crate::compose::{group_inverse, ToeplitzSeries};
use crate::error::{Error, Result};
use crate::fdbclassical::{self as fdb, h_poly, FdbPoly};
use crate::hopf::{self, antipode_classical, antipode_coderivation, eval_coord, gen, CoordGen, HopfContext, HopfElem};
use crate::numeric::{self, Signal, QUADRATURE_TOLERANCE};
use crate::rational::{factorial, fmt_q, qf, Q};
use crate::report::CheckReport;
use crate::series::NCSeries;
use crate::words::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Fourway,
    ShuffleIdentity,
    FixedPoint,
    HopfAxioms,
    AntipodeEquiv,
    Fdb,
    NumericBridge,
    All,
}

impl Suite {
    pub const EACH: [Suite; 7] =
        [Suite::Fourway, Suite::ShuffleIdentity, Suite::FixedPoint, Suite::HopfAxioms, Suite::AntipodeEquiv, Suite::Fdb, Suite::NumericBridge];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Fourway => "fourway",
            Suite::ShuffleIdentity => "shuffle-identity",
            Suite::FixedPoint => "fixed-point",
            Suite::HopfAxioms => "hopf-axioms",
            Suite::AntipodeEquiv => "antipode-equiv",
            Suite::Fdb => "fdb",
            Suite::NumericBridge => "numeric-bridge",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .iter()
            .chain(&[Suite::All])
            .find(|x| x.name() == s)
            .copied()
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyConfig {
    pub m: usize,
    pub cap: usize,
    pub grade: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { m: 3, cap: 6, grade: 5, seed: 42 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub pass: bool,
    pub checks: Vec<CheckReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub pass: bool,
    pub suites: Vec<SuiteReport>,
}

/// Runs one suite, or all of them in declaration order.
pub fn run(suite: Suite, cfg: &VerifyConfig) -> Result<VerifyReport> {
    if cfg.m < 2 {
        return Err(Error::InvalidArgument(format!("verification needs m >= 2, got {}", cfg.m)));
    }
    let selected: Vec<Suite> = if suite == Suite::All { Suite::EACH.to_vec() } else { vec![suite] };
    let suites: Vec<SuiteReport> = selected
        .par_iter()
        .map(|&s| {
            let checks = run_suite(s, cfg);
            SuiteReport { suite: s.name().into(), pass: checks.iter().all(|c| c.pass), checks }
        })
        .collect();
    Ok(VerifyReport { config: *cfg, pass: suites.iter().all(|s| s.pass), suites })
}

fn run_suite(s: Suite, cfg: &VerifyConfig) -> Vec<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let out = match s {
        Suite::Fourway => abelfeed::verify_four_way(cfg.m, cfg.cap).map(|r| vec![r]),
        Suite::ShuffleIdentity => abelfeed::verify_shuffle_identity(cfg.m, cfg.cap),
        Suite::FixedPoint => fixed_point_suite(cfg),
        Suite::HopfAxioms => hopf_axioms_suite(cfg.grade),
        Suite::AntipodeEquiv => antipode_suite(cfg, &mut rng),
        Suite::Fdb => fdb_suite(&mut rng),
        Suite::NumericBridge => numeric_suite(&mut rng),
        Suite::All => unreachable!("expanded by run"),
    };
    out.unwrap_or_else(|e| vec![CheckReport::failed(s.name(), e.to_string())])
}

fn fixed_point_suite(cfg: &VerifyConfig) -> Result<Vec<CheckReport>> {
    let grading = abelfeed::check_grading_preservation(&Realization::abel(cfg.m), cfg.cap)?;
    Ok(vec![
        abelfeed::verify_fixed_point(cfg.m, cfg.cap)?,
        CheckReport::exact(format!("lie-scaling m={} cap={}", cfg.m, cfg.cap), abelfeed::verify_lie_scaling(cfg.m, cfg.cap)),
        CheckReport::exact(format!("inverse-grading m={} cap={}", cfg.m, cfg.cap), (!grading.pass()).then(|| grading.detail.clone())),
    ])
}

pub fn hopf_axioms_suite(grade: usize) -> Result<Vec<CheckReport>> {
    let contexts = [(2, 1), (3, 2), (4, 3)];
    let reports: Vec<Vec<CheckReport>> =
        contexts.par_iter().map(|&(m, mbar)| HopfContext::new(m, mbar).map(|ctx| hopf::check_axioms(ctx, grade))).collect::<Result<_>>()?;
    Ok(reports.into_iter().flatten().collect())
}

/// The antipodes of `H^(2)` listed in closed form, including the empty-word
/// cases up to root 3.
pub fn listed_antipodes() -> Vec<(CoordGen, HopfElem)> {
    let e = |r, w| gen(r, w);
    let a1 = || e(1, "e");
    let cg = |r, w: &str| CoordGen::new(r, Word::parse(w).expect("word"));
    vec![
        (cg(1, "e"), a1().neg()),
        (cg(2, "e"), e(2, "e").neg().add(&a1().pow(2))),
        (cg(3, "e"), e(3, "e").neg().add(&a1().mul(&e(2, "e")).scale(&two())).sub(&a1().pow(3))),
        (cg(1, "x1"), e(1, "x1").neg()),
        (cg(1, "x2"), e(1, "x2").neg().add(&e(1, "x1").mul(&a1()))),
        (cg(1, "x3"), e(1, "x3").neg().add(&e(1, "x1").mul(&e(2, "e"))).sub(&e(1, "x1").mul(&a1().pow(2))).add(&e(1, "x2").mul(&a1()))),
        (cg(2, "x1"), e(2, "x1").neg().add(&e(1, "x1").mul(&a1()).scale(&two()))),
        (
            cg(2, "x2"),
            e(2, "x2").neg().add(&e(2, "x1").mul(&a1())).sub(&e(1, "x1").mul(&a1().pow(2)).scale(&two())).add(&e(1, "x2").mul(&a1()).scale(&two())),
        ),
        (
            cg(2, "x3"),
            e(2, "x3")
                .neg()
                .add(&e(1, "x3").mul(&a1()).scale(&two()))
                .sub(&e(1, "x2").mul(&a1().pow(2)).scale(&two()))
                .add(&e(2, "x2").mul(&a1()))
                .sub(&e(2, "x1").mul(&a1().pow(2)))
                .add(&e(2, "x1").mul(&e(2, "e")))
                .sub(&e(1, "x1").mul(&a1()).mul(&e(2, "e")).scale(&two()))
                .add(&e(1, "x1").mul(&a1().pow(3)).scale(&two())),
        ),
    ]
}

fn two() -> Q {
    Q::from_integer(2.into())
}

/// Checks every listed antipode with both algorithms, then evaluates the
/// eight coordinate polynomials of roots 1 and 2 at `d = (-c_F, 0)` against
/// the group inverse of `d`.
pub fn listed_antipode_checks() -> Result<Vec<CheckReport>> {
    let ctx = HopfContext::new(3, 3)?;
    let listed = listed_antipodes();
    let mut fail = None;
    for (g, expect) in &listed {
        let (a, b) = (antipode_classical(ctx, g)?, antipode_coderivation(ctx, g)?);
        if &a != expect || &b != expect {
            fail = Some(format!("{g}: expected {expect}, classical {a}, coderivation {b}"));
            break;
        }
    }
    let cap = 4;
    let d = vec![ferfera(3, cap).neg(), NCSeries::zero(3, cap)];
    let inv = group_inverse(&ToeplitzSeries::new(d.clone())?);
    let mut eval_fail = None;
    let mut count = 0;
    for (g, p) in listed.iter().filter(|(g, _)| g.root() <= 2) {
        count += 1;
        let lhs = eval_coord(p, &d)?;
        let rhs = inv.entry(g.root()).coefficient(g.word())?;
        if lhs != rhs {
            eval_fail = Some(format!("{g}: polynomial gives {}, inverse series gives {}", fmt_q(&lhs), fmt_q(&rhs)));
            break;
        }
    }
    Ok(vec![
        CheckReport::exact(format!("listed-antipodes ({})", listed.len()), fail),
        CheckReport::exact(format!("inverse-coordinates at -c_F ({count})"), eval_fail),
    ])
}

fn antipode_suite(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<Vec<CheckReport>> {
    let ctx = HopfContext::new(cfg.m, cfg.m - 1)?;
    let mut out = vec![hopf::check_algorithm_equivalence(ctx, cfg.grade)];
    out.extend(listed_antipode_checks()?);
    let cap = cfg.cap.min(4);
    let mut fail = None;
    for k in 0..3 {
        let r = hopf::random_realization(cfg.m, rng);
        let d = ToeplitzSeries::new(generate_all(&r, cap))?;
        if let Some(msg) = hopf::antipode_vs_group_inverse(ctx, &d)? {
            fail = Some(format!("sample {k} {r}: {msg}"));
            break;
        }
    }
    out.push(CheckReport::exact(format!("antipode-vs-group-inverse m={} cap={cap} (3 seeded samples)", cfg.m), fail));
    Ok(out)
}

/// `h̃_1..h̃_3` and the displayed 5 x 5 block of `M_h^{-1}` at `h_1 = 1`.
pub fn fdb_displays() -> (Vec<FdbPoly>, Vec<Vec<FdbPoly>>) {
    let ht = vec![
        h_poly(&[(-1, &[(1, 1)])]),
        h_poly(&[(1, &[(1, 2)]), (-1, &[(2, 1)])]),
        h_poly(&[(-1, &[(3, 1)]), (2, &[(1, 1), (2, 1)]), (-1, &[(1, 3)])]),
    ];
    let one = h_poly(&[(1, &[])]);
    let zero = FdbPoly::zero();
    let inv = vec![
        vec![
            one.clone(),
            h_poly(&[(-1, &[(2, 1)])]),
            h_poly(&[(2, &[(2, 2)]), (-1, &[(3, 1)])]),
            h_poly(&[(-5, &[(2, 3)]), (5, &[(2, 1), (3, 1)]), (-1, &[(4, 1)])]),
            h_poly(&[(14, &[(2, 4)]), (-21, &[(2, 2), (3, 1)]), (3, &[(3, 2)]), (6, &[(2, 1), (4, 1)]), (-1, &[(5, 1)])]),
        ],
        vec![
            zero.clone(),
            one.clone(),
            h_poly(&[(-2, &[(2, 1)])]),
            h_poly(&[(5, &[(2, 2)]), (-2, &[(3, 1)])]),
            h_poly(&[(-14, &[(2, 3)]), (12, &[(2, 1), (3, 1)]), (-2, &[(4, 1)])]),
        ],
        vec![zero.clone(), zero.clone(), one.clone(), h_poly(&[(-3, &[(2, 1)])]), h_poly(&[(9, &[(2, 2)]), (-3, &[(3, 1)])])],
        vec![zero.clone(), zero.clone(), zero.clone(), one.clone(), h_poly(&[(-4, &[(2, 1)])])],
        vec![zero.clone(), zero.clone(), zero.clone(), zero, one],
    ];
    (ht, inv)
}

pub fn fdb_exact_checks() -> Result<Vec<CheckReport>> {
    let (ht, inv_display) = fdb_displays();
    let sym = fdb::symbolic_toeplitz_inverse(4)?;
    let ht_fail = (0..3).find(|&j| sym[j] != ht[j]).map(|j| format!("h~{}: got {}, expected {}", j + 1, sym[j], ht[j]));
    let alt_fail = (1..=6).find(|&i| fdb::mh_alternating(i) != fdb::symbolic_toeplitz_inverse(7).expect("m >= 2")[i - 1]).map(|i| format!("column {i}"));

    let inv = fdb::unitriangular_inverse(&fdb::set_h1_one(&fdb::mh_matrix(5)))?;
    let mut inv_fail = None;
    'outer: for (r, row) in inv_display.iter().enumerate() {
        for (c, expect) in row.iter().enumerate() {
            if &inv[r][c] != expect {
                inv_fail = Some(format!("entry ({}, {}): got {}, expected {}", r + 1, c + 1, inv[r][c], expect));
                break 'outer;
            }
        }
    }
    let row_fail = (1..=4).find_map(|j| {
        let got = fdb::fdb_antipode_row(j).ok()?;
        (got != inv_display[0][j]).then(|| format!("j={j}: Bell sum gives {got}"))
    });
    let ident_fail = (1..=5).find_map(|n| {
        let m = fdb::set_h1_one(&fdb::mh_matrix(n));
        let inv = fdb::unitriangular_inverse(&m).ok()?;
        (!fdb::is_identity(&fdb::matmul(&m, &inv))).then(|| format!("n={n}"))
    });
    Ok(vec![
        CheckReport::exact("fdb h~1..h~3", ht_fail),
        CheckReport::exact("fdb alternating row of M_h, i <= 6", alt_fail),
        CheckReport::exact("fdb M_h^-1 displayed block", inv_fail),
        CheckReport::exact("fdb antipode row via Bell sums, j <= 4", row_fail),
        CheckReport::exact("fdb M_h M_h^-1 = I, n <= 5", ident_fail),
    ])
}

fn fdb_suite(rng: &mut ChaCha8Rng) -> Result<Vec<CheckReport>> {
    let mut out = fdb_exact_checks()?;
    // 1/(1 + h(t)) through Faà di Bruno against the symbolic inverse entries
    let order = 6;
    let hs: Vec<Q> = (0..order).map(|_| qf(rng.gen_range(-5..=5), rng.gen_range(1..=4))).collect();
    let f: Vec<Q> = (0..=order).map(|k| if k % 2 == 0 { factorial(k) } else { -factorial(k) }).collect();
    let mut alpha = vec![Q::from_integer(0.into())];
    alpha.extend(hs.iter().enumerate().map(|(i, x)| x * factorial(i + 1)));
    let gamma = fdb::fdb_series_compose(&f, &alpha, order)?;
    let sym = fdb::symbolic_toeplitz_inverse(order + 1)?;
    let mut fail = None;
    for j in 1..=order {
        let lhs = &gamma[j] / factorial(j);
        let rhs = sym[j - 1].evaluate(|g| hs.get(g.index() - 1).cloned())?;
        if lhs != rhs {
            fail = Some(format!("j={j}: composition {} vs h~_j {}", fmt_q(&lhs), fmt_q(&rhs)));
            break;
        }
    }
    out.push(CheckReport::exact(format!("fdb reciprocal composition, order {order}, seeded h"), fail));
    Ok(out)
}

/// `u_i(t) = a_i cos(b_i t) + c_i` with seeded amplitudes, frequencies and
/// offsets.
pub fn random_trig_signal(m: usize, omega: f64, grid: usize, rng: &mut impl Rng) -> Result<Signal> {
    let params: Vec<(f64, f64, f64)> =
        (0..m).map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(0.5..2.0), rng.gen_range(-0.5..0.5))).collect();
    Signal::from_fn(m, omega, grid, |i, t| {
        let (a, b, c) = params[i - 1];
        a * (b * t).cos() + c
    })
}

pub fn numeric_bridge_checks(rng: &mut impl Rng) -> Result<Vec<CheckReport>> {
    let grid = 10_001;
    let omega = 2.0 * PI;
    let cs = Signal::cos_sin(2, omega, grid)?;
    let trig = random_trig_signal(2, 1.0, grid, rng)?;
    let d1 = numeric::shuffle_duality(&cs, 4)?;
    let d2 = numeric::shuffle_duality(&trig, 4)?;
    let mut out = vec![
        CheckReport::numeric("shuffle-duality cos-sin", d1, QUADRATURE_TOLERANCE, "|eta|+|xi| <= 4, t = 2pi"),
        CheckReport::numeric("shuffle-duality seeded trig", d2, QUADRATURE_TOLERANCE, "|eta|+|xi| <= 4, t = 1"),
    ];
    let v = random_trig_signal(3, 1.0, grid, rng)?;
    out.push(numeric::moment_check(&v, 3, QUADRATURE_TOLERANCE)?.agreement);
    out.push(numeric::center_check(&cs, &[0.05, 0.1, 0.2])?.report);
    out.push(numeric::uv_moment_equivalence(&cs, 0.1, 40, QUADRATURE_TOLERANCE)?);
    let ratio = numeric::convergence_ratio(0.5, omega, 64)?;
    out.push(CheckReport::numeric("rk4-order", (ratio - 16.0).abs(), 4.0, format!("error ratio {ratio:.3} on halving the step")));
    Ok(out)
}

fn numeric_suite(rng: &mut ChaCha8Rng) -> Result<Vec<CheckReport>> {
    numeric_bridge_checks(rng)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::EACH.iter().chain(&[Suite::All]) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), *s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn exact_suites_pass() {
        let cfg = VerifyConfig { m: 2, cap: 4, grade: 4, seed: 1 };
        for s in [Suite::Fourway, Suite::ShuffleIdentity, Suite::FixedPoint, Suite::AntipodeEquiv, Suite::Fdb] {
            let rep = run(s, &cfg).unwrap();
            assert!(rep.pass, "{}", serde_json::to_string_pretty(&rep).unwrap());
        }
    }

    #[test]
    fn fdb_checks_pass() {
        for r in fdb_exact_checks().unwrap() {
            assert!(r.pass, "{r:?}");
        }
        for r in listed_antipode_checks().unwrap() {
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn rejects_small_m() {
        assert!(run(Suite::Fourway, &VerifyConfig { m: 1, ..Default::default() }).is_err());
    }
}
