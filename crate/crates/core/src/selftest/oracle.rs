//! Independent reference computations. Nothing here calls the operations
//! under test.

use crate::calculus::{Move, MoveLog};

pub(crate) fn mu(counts: &[u64], i: usize) -> u64 {
    if i == 0 {
        return 0;
    }
    counts.get(i - 1).copied().unwrap_or(0)
}

/// Induced closed counts `(1, μ1, μ2+μ_{n-2}, …, μ1, 1)`.
pub(crate) fn induced_counts(n: usize, counts: &[u64]) -> Vec<u64> {
    (0..=n)
        .map(|i| if i == 0 || i == n { 1 } else { mu(counts, i) + mu(counts, n - i) })
        .collect()
}

pub(crate) fn alternating(xs: &[u64]) -> i64 {
    let mut total = 0i64;
    let mut sign = 1i64;
    for &x in xs {
        total += sign * x as i64;
        sign = -sign;
    }
    total
}

pub(crate) fn page_chi(counts: &[u64]) -> i64 {
    let mut full = vec![1u64];
    full.extend_from_slice(counts);
    alternating(&full)
}

pub(crate) fn open_book_chi(n: usize, counts: &[u64]) -> i64 {
    if n.is_multiple_of(2) {
        2 * page_chi(counts)
    } else {
        0
    }
}

pub(crate) fn tail_reversal(counts: &[u64]) -> Vec<u64> {
    let mut out = counts.to_vec();
    if out.len() > 1 {
        out[1..].reverse();
    }
    out
}

fn pow(e: usize) -> i64 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `(-1)^(k-1) · 2` for odd `n`, `0` for even `n`.
pub(crate) fn stabilization_delta(n: usize, k: usize) -> i64 {
    if n % 2 == 1 {
        2 * pow(k - 1)
    } else {
        0
    }
}

pub(crate) fn middle_delta(n: usize) -> i64 {
    pow((n - 1) / 2)
}

/// Count transform of a logged move on page counts over `0..n`.
fn transform(n: usize, action: &Move, counts: &[u64]) -> Option<Vec<u64>> {
    let mut c = counts.to_vec();
    let mut add = |i: usize, d: i64| -> Option<()> {
        let v = c.get_mut(i)?;
        *v = u64::try_from(*v as i64 + d).ok()?;
        Some(())
    };
    match action {
        Move::Exchange { indices, .. } => {
            for &k in indices {
                add(k, -1)?;
                add(n.checked_sub(k)?, 1)?;
            }
        }
        Move::StabilizeK { k } => {
            add(k - 1, 1)?;
            add(n - k, 1)?;
        }
        Move::StabilizeMiddle => add((n - 1) / 2, 1)?,
        Move::Pad { j } => {
            add(*j, 1)?;
            add(j + 1, 1)?;
        }
        Move::Cancel { index, .. } => {
            add(*index, -1)?;
            add(index - 1, -1)?;
        }
        Move::NormalForm => {
            let src = counts.to_vec();
            for (i, slot) in c.iter_mut().enumerate().take(n - 1).skip(2) {
                *slot = src[n - i];
            }
        }
    }
    Some(c)
}

/// Walks a log from `start`, checking the chain, each count transform and
/// the recorded Euler characteristics. Returns the final counts.
pub(crate) fn replay(n: usize, start: &[u64], log: &MoveLog) -> Result<Vec<u64>, String> {
    let mut current = start.to_vec();
    for (i, r) in log.records().iter().enumerate() {
        if r.counts_before != current {
            return Err(format!("record {i} does not chain"));
        }
        let next = transform(n, &r.action, &current).ok_or_else(|| format!("record {i}: {} not applicable", r.action))?;
        if next != r.counts_after {
            return Err(format!("record {i}: {} should give {next:?}", r.action));
        }
        if r.chi_before != alternating(&r.counts_before) || r.chi_after != alternating(&r.counts_after) {
            return Err(format!("record {i}: recorded chi disagrees with counts"));
        }
        current = next;
    }
    Ok(current)
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Determinant by cofactor expansion along the first row.
fn det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        n => (0..n)
            .filter(|&j| m[0][j] != 0)
            .map(|j| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &v)| v).collect())
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

pub(crate) fn wide(rows: Vec<Vec<i64>>) -> Vec<Vec<i128>> {
    rows.into_iter().map(|r| r.into_iter().map(i128::from).collect()).collect()
}

/// Exact product of integer matrices given as rows.
pub(crate) fn product(a: &[Vec<i128>], b: &[Vec<i128>]) -> Option<Vec<Vec<i128>>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (row.len() == inner).then(|| {
                (0..cols).map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum()).collect()
            })
        })
        .collect()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Invariant factors from gcds of `k × k` minors: `d_k = g_k / g_{k-1}`.
pub(crate) fn minor_gcd_divisors(rows: &[Vec<i64>]) -> Vec<i64> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut prev = 1i128;
    for k in 1..=r.min(c) {
        let mut g = 0i128;
        for rs in subsets(r, k) {
            for cs in subsets(c, k) {
                let m: Vec<Vec<i128>> = rs.iter().map(|&i| cs.iter().map(|&j| rows[i][j] as i128).collect()).collect();
                g = gcd(g, det(&m));
                if g == 1 {
                    break;
                }
            }
            if g == 1 {
                break;
            }
        }
        if g == 0 {
            break;
        }
        out.push((g / prev) as i64);
        prev = g;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracles_on_known_values() {
        assert_eq!(induced_counts(5, &[1, 2, 3]), vec![1, 1, 5, 5, 1, 1]);
        assert_eq!(induced_counts(3, &[1]), vec![1, 1, 1, 1]);
        assert_eq!(page_chi(&[0, 1, 0]), 2);
        assert_eq!(tail_reversal(&[1, 2, 0, 0]), vec![1, 0, 0, 2]);
        assert_eq!(minor_gcd_divisors(&[vec![2, 4], vec![6, 8]]), vec![2, 4]);
        assert_eq!(minor_gcd_divisors(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(minor_gcd_divisors(&[vec![0, 0], vec![0, 0]]), Vec::<i64>::new());
        assert_eq!(stabilization_delta(5, 3), 2);
        assert_eq!(stabilization_delta(5, 2), -2);
        assert_eq!(middle_delta(3), -1);
    }
}
