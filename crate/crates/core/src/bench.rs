//! Wall-clock comparison of the two antipode algorithms, grade by grade.

use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hopf::{Algorithm, Antipode, CoordGen, HopfContext, HopfElem};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub grade: usize,
    pub generator_count: usize,
    /// Median over repetitions.
    pub classical_ns: u128,
    pub coderivation_ns: u128,
    pub classical_min_ns: u128,
    pub coderivation_min_ns: u128,
}

pub type Builder<'a> = dyn Fn(Algorithm, HopfContext) -> Box<dyn Antipode + Send> + 'a;

fn run_all(s: &mut dyn Antipode, gens: &[CoordGen]) -> Vec<HopfElem> {
    gens.iter().map(|g| s.generator(g)).collect()
}

fn time_once(build: &Builder, alg: Algorithm, ctx: HopfContext, gens: &[CoordGen]) -> u128 {
    let mut s = build(alg, ctx);
    let start = Instant::now();
    let out = run_all(s.as_mut(), gens);
    let ns = start.elapsed().as_nanos();
    drop(out);
    ns
}

fn median(mut xs: Vec<u128>) -> u128 {
    xs.sort_unstable();
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2
    }
}

/// Times both algorithms on all generators of each grade `1..=max_grade`,
/// each repetition starting from an empty memo. Outputs are compared before
/// any timing.
pub fn bench(ctx: HopfContext, max_grade: usize, repetitions: usize) -> Result<Vec<BenchRow>> {
    bench_with(ctx, max_grade, repetitions, &|alg, ctx| alg.build(ctx))
}

pub fn bench_with(ctx: HopfContext, max_grade: usize, repetitions: usize, build: &Builder) -> Result<Vec<BenchRow>> {
    if repetitions == 0 {
        return Err(Error::InvalidArgument("repetitions must be >= 1".into()));
    }
    let mut rows = Vec::new();
    for grade in 1..=max_grade {
        let gens = ctx.generators_of_grade(grade);
        let a = run_all(build(Algorithm::Classical, ctx).as_mut(), &gens);
        let b = run_all(build(Algorithm::Coderivation, ctx).as_mut(), &gens);
        if let Some(i) = (0..gens.len()).find(|&i| a[i] != b[i]) {
            return Err(Error::AlgorithmMismatch(format!("{}: {} vs {}", gens[i], a[i], b[i])));
        }
        let mut tc = Vec::with_capacity(repetitions);
        let mut td = Vec::with_capacity(repetitions);
        for _ in 0..repetitions {
            tc.push(time_once(build, Algorithm::Classical, ctx, &gens));
            td.push(time_once(build, Algorithm::Coderivation, ctx, &gens));
        }
        rows.push(BenchRow {
            grade,
            generator_count: gens.len(),
            classical_min_ns: *tc.iter().min().unwrap_or(&0),
            coderivation_min_ns: *td.iter().min().unwrap_or(&0),
            classical_ns: median(tc),
            coderivation_ns: median(td),
        });
    }
    Ok(rows)
}

pub fn to_csv(rows: &[BenchRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::InvalidArgument(e.to_string()))
}
