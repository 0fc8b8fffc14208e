use super::{HomologyError, IntegerMatrix};

/// `u · a · v = d` with `d` diagonal, `d_1 | d_2 | …`, and `u`, `v` unimodular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub d: IntegerMatrix,
    pub u: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl SmithForm {
    /// Non-zero diagonal entries, in order.
    pub fn divisors(&self) -> Vec<i64> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)])
            .take_while(|&x| x != 0)
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.divisors().len()
    }
}

pub fn smith_normal_form(a: &IntegerMatrix) -> Result<SmithForm, HomologyError> {
    let (rows, cols) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntegerMatrix::identity(rows);
    let mut v = IntegerMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let Some((pr, pc)) = smallest_nonzero(&d, t) else {
                return Ok(SmithForm { d, u, v });
            };
            d.swap_rows(t, pr);
            u.swap_rows(t, pr);
            d.swap_cols(t, pc);
            v.swap_cols(t, pc);

            let pivot = d[(t, t)];
            let mut cleared = true;
            for i in t + 1..rows {
                let q = nearest_quotient(d[(i, t)], pivot);
                if q != 0 {
                    d.add_row_multiple(i, t, -q)?;
                    u.add_row_multiple(i, t, -q)?;
                }
                cleared &= d[(i, t)] == 0;
            }
            for j in t + 1..cols {
                let q = nearest_quotient(d[(t, j)], pivot);
                if q != 0 {
                    d.add_col_multiple(j, t, -q)?;
                    v.add_col_multiple(j, t, -q)?;
                }
                cleared &= d[(t, j)] == 0;
            }
            if !cleared {
                continue;
            }

            // the pivot must divide the remaining block
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| d[(i, j)] % pivot != 0));
            match offender {
                Some(i) => {
                    d.add_row_multiple(t, i, 1)?;
                    u.add_row_multiple(t, i, 1)?;
                }
                None => break,
            }
        }
        if d[(t, t)] < 0 {
            d.negate_row(t)?;
            u.negate_row(t)?;
        }
    }
    Ok(SmithForm { d, u, v })
}

/// Quotient rounded to the nearest integer, so the remainder is at most half the pivot.
fn nearest_quotient(a: i64, b: i64) -> i64 {
    let (q, r) = (a / b, a % b);
    if 2 * r.unsigned_abs() > b.unsigned_abs() {
        if (r < 0) == (b < 0) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

fn smallest_nonzero(m: &IntegerMatrix, from: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, u64)> = None;
    for i in from..m.rows() {
        for j in from..m.cols() {
            let x = m[(i, j)].unsigned_abs();
            if x != 0 && best.is_none_or(|(_, _, b)| x < b) {
                best = Some((i, j, x));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}
