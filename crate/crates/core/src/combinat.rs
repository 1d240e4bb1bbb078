//! Enumeration helpers for partitions and compositions.

/// Integer partitions of `n` as multiplicity vectors `k` of length `n`, with
/// `k[i-1]` the number of parts equal to `i`.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut k = vec![0; n];
    fill_partitions(n, n, &mut k, &mut out);
    out
}

fn fill_partitions(remaining: usize, largest: usize, k: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if remaining == 0 {
        out.push(k.clone());
        return;
    }
    for part in (1..=largest.min(remaining)).rev() {
        k[part - 1] += 1;
        fill_partitions(remaining - part, part, k, out);
        k[part - 1] -= 1;
    }
}

/// Partitions of `n` into exactly `parts` parts, as multiplicity vectors.
pub fn partitions_with_parts(n: usize, parts: usize) -> Vec<Vec<usize>> {
    partitions(n).into_iter().filter(|k| k.iter().sum::<usize>() == parts).collect()
}

/// Ordered compositions of `n` into exactly `parts` positive parts.
pub fn compositions(n: usize, parts: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(parts);
    fill_compositions(n, parts, &mut cur, &mut out);
    out
}

fn fill_compositions(n: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if parts == 0 {
        if n == 0 {
            out.push(cur.clone());
        }
        return;
    }
    if n < parts {
        return;
    }
    for first in 1..=n - (parts - 1) {
        cur.push(first);
        fill_compositions(n - first, parts - 1, cur, out);
        cur.pop();
    }
}

/// All compositions of `n` into any number of positive parts.
pub fn all_compositions(n: usize) -> Vec<Vec<usize>> {
    (1..=n).flat_map(|p| compositions(n, p)).collect()
}
