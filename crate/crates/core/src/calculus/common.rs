use serde::Serialize;

use super::{normal_form, pad, pad_and_exchange, stabilize_k, CalculusError, Move, MoveLog, MoveRecord, OpenBookDoc};
use crate::profile::Profile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equalized {
    pub profile: Profile,
    pub left_log: MoveLog,
    pub right_log: MoveLog,
}

fn same_n(left: usize, right: usize) -> Result<(), CalculusError> {
    if left != right {
        return Err(CalculusError::DimensionsDiffer { left, right });
    }
    Ok(())
}

fn same_chi(left: i64, right: i64) -> Result<(), CalculusError> {
    if left != right {
        return Err(CalculusError::ChiMismatch { left, right });
    }
    Ok(())
}

/// Pad positions for the ascending sweep: at each `j`, the side with fewer
/// `j`-handles gets `(j, j+1)` pairs until the counts agree.
fn equalization_plan(left: &Profile, right: &Profile) -> Vec<(Side, usize)> {
    let n = left.n();
    let mut l = left.counts().to_vec();
    let mut r = right.counts().to_vec();
    let mut plan = Vec::new();
    for j in 1..=n.saturating_sub(3) {
        while l[j - 1] != r[j - 1] {
            let (side, c) = if l[j - 1] < r[j - 1] { (Side::Left, &mut l) } else { (Side::Right, &mut r) };
            c[j - 1] += 1;
            c[j] += 1;
            plan.push((side, j));
        }
    }
    plan
}

/// Pads both profiles to a common one; the last entry follows from equal χ.
pub fn equalize_handle_counts(left: &Profile, right: &Profile) -> Result<Equalized, CalculusError> {
    same_n(left.n(), right.n())?;
    same_chi(left.euler_characteristic(), right.euler_characteristic())?;
    let mut counts = [left.page_counts(), right.page_counts()];
    let mut logs = [MoveLog::new(), MoveLog::new()];
    for (side, j) in equalization_plan(left, right) {
        let s = side as usize;
        let before = counts[s].clone();
        counts[s][j] += 1;
        counts[s][j + 1] += 1;
        logs[s].push(MoveRecord::from_counts(Move::Pad { j }, before, counts[s].clone()));
    }
    if counts[0] != counts[1] {
        return Err(CalculusError::Internal("equalization ended with different counts".into()));
    }
    let profile = Profile::from_page_counts(left.n(), &counts[0])?;
    let [left_log, right_log] = logs;
    Ok(Equalized { profile, left_log, right_log })
}

/// [`equalize_handle_counts`] carried out on documents.
pub fn equalize_documents(
    left: &OpenBookDoc,
    right: &OpenBookDoc,
) -> Result<(OpenBookDoc, OpenBookDoc, MoveLog, MoveLog), CalculusError> {
    same_n(left.n(), right.n())?;
    let (pl, pr) = (left.profile()?, right.profile()?);
    same_chi(pl.euler_characteristic(), pr.euler_characteristic())?;
    let mut docs = [left.clone(), right.clone()];
    let mut logs = [MoveLog::new(), MoveLog::new()];
    for (side, j) in equalization_plan(&pl, &pr) {
        let s = side as usize;
        let (next, log) = pad(&docs[s], j)?;
        docs[s] = next;
        logs[s].extend(log);
    }
    let [l, r] = docs;
    let [ll, rl] = logs;
    Ok((l, r, ll, rl))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommonPage {
    pub profile: Profile,
    pub left: OpenBookDoc,
    pub right: OpenBookDoc,
    pub left_log: MoveLog,
    pub right_log: MoveLog,
}

fn apply(
    doc: &mut OpenBookDoc,
    log: &mut MoveLog,
    step: impl FnOnce(&OpenBookDoc) -> Result<(OpenBookDoc, MoveLog), CalculusError>,
) -> Result<(), CalculusError> {
    let (next, l) = step(doc)?;
    *doc = next;
    log.extend(l);
    Ok(())
}

fn chi(doc: &OpenBookDoc) -> Result<i64, CalculusError> {
    Ok(doc.profile()?.euler_characteristic())
}

/// Stabilizes two open books with identity monodromy to a common page profile.
///
/// Even `n` needs equal page Euler characteristics, odd `n` equal parity.
pub fn common_page(x: &OpenBookDoc, y: &OpenBookDoc) -> Result<CommonPage, CalculusError> {
    same_n(x.n(), y.n())?;
    if !x.monodromy().is_identity() || !y.monodromy().is_identity() {
        return Err(CalculusError::NonTrivialMonodromy);
    }
    let n = x.n();
    let (cx, cy) = (chi(x)?, chi(y)?);
    let mut docs = [x.clone(), y.clone()];
    let mut logs = [MoveLog::new(), MoveLog::new()];

    if n.is_multiple_of(2) {
        same_chi(cx, cy)?;
        let (l, r, ll, rl) = equalize_documents(x, y)?;
        docs = [l, r];
        logs = [ll, rl];
        for s in 0..2 {
            apply(&mut docs[s], &mut logs[s], normal_form)?;
        }
    } else {
        if (cx - cy).rem_euclid(2) != 0 {
            return Err(CalculusError::ParityViolated { left: cx, right: cy });
        }
        for s in 0..2 {
            apply(&mut docs[s], &mut logs[s], normal_form)?;
        }
        loop {
            let (a, b) = (chi(&docs[0])?, chi(&docs[1])?);
            if a == b {
                break;
            }
            let (smaller, larger) = if a < b { (0, 1) } else { (1, 0) };
            if n >= 5 {
                apply(&mut docs[smaller], &mut logs[smaller], |d| stabilize_k(d, 3))?;
            } else {
                apply(&mut docs[larger], &mut logs[larger], |d| stabilize_k(d, 2))?;
            }
        }
        for p in 1..=n - 3 {
            loop {
                let (a, b) = (docs[0].profile()?.mu(p), docs[1].profile()?.mu(p));
                if a == b {
                    break;
                }
                let s = if a < b { 0 } else { 1 };
                apply(&mut docs[s], &mut logs[s], |d| pad_and_exchange(d, n - 1 - p))?;
            }
        }
    }

    let (pl, pr) = (docs[0].profile()?, docs[1].profile()?);
    if pl != pr {
        return Err(CalculusError::Internal(format!("common page search ended with {pl} and {pr}")));
    }
    let [left, right] = docs;
    let [left_log, right_log] = logs;
    Ok(CommonPage { profile: pl, left, right, left_log, right_log })
}
