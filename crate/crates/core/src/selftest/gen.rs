//! Seeded generators for the property suites.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calculus::{pad_canceling_pair, OpenBookDoc};
use crate::handle::HandleDecomposition;
use crate::homology::IntegerMatrix;
use crate::monodromy::MonodromySpec;
use crate::profile::Profile;
use crate::selection::{closure, Selection};

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn profile(rng: &mut ChaCha8Rng, n: usize, max: u64) -> Profile {
    let counts = (0..n - 2).map(|_| rng.gen_range(0..=max)).collect();
    Profile::new(n, counts).expect("length n - 2")
}

fn chi_of(counts: &[u64]) -> i64 {
    1 + counts
        .iter()
        .enumerate()
        .map(|(i, &c)| if (i + 1) % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum::<i64>()
}

/// Shifts the last entry of one side so that `χ(left) - χ(right) = target`.
fn match_chi(n: usize, mut left: Vec<u64>, mut right: Vec<u64>, target: i64) -> (Profile, Profile) {
    let last = n - 3;
    // χ moves by ±1 per unit of the last entry
    let s: i64 = if (n - 2).is_multiple_of(2) { 1 } else { -1 };
    let gap = chi_of(&left) - chi_of(&right) - target;
    let t = s * gap;
    if t >= 0 {
        right[last] += t as u64;
    } else {
        left[last] += (-t) as u64;
    }
    (Profile::new(n, left).expect("length"), Profile::new(n, right).expect("length"))
}

pub(crate) fn equal_chi_pair(rng: &mut ChaCha8Rng, n: usize, max: u64) -> (Profile, Profile) {
    let (a, b) = (profile(rng, n, max), profile(rng, n, max));
    match_chi(n, a.counts().to_vec(), b.counts().to_vec(), 0)
}

/// A pair meeting the common-page condition for `n`.
pub(crate) fn common_page_pair(rng: &mut ChaCha8Rng, n: usize, max: u64) -> (Profile, Profile) {
    let (a, b) = (profile(rng, n, max), profile(rng, n, max));
    let target = if n.is_multiple_of(2) { 0 } else { 2 * rng.gen_range(-2i64..=2) };
    match_chi(n, a.counts().to_vec(), b.counts().to_vec(), target)
}

/// A pair violating the common-page condition for `n`.
pub(crate) fn violating_pair(rng: &mut ChaCha8Rng, n: usize, max: u64) -> (Profile, Profile) {
    let (a, b) = (profile(rng, n, max), profile(rng, n, max));
    let target = if n.is_multiple_of(2) {
        let t = rng.gen_range(1i64..=3);
        if rng.gen_bool(0.5) {
            t
        } else {
            -t
        }
    } else {
        2 * rng.gen_range(-2i64..=2) + 1
    };
    match_chi(n, a.counts().to_vec(), b.counts().to_vec(), target)
}

/// A page with padding pairs, extra geometric dependencies and, half the
/// time, an annotated monodromy with some non-trivial handles.
pub(crate) fn document(rng: &mut ChaCha8Rng, n: usize) -> OpenBookDoc {
    let base = OpenBookDoc::natural(&profile(rng, n, 3));
    let mut page = base.page().clone();
    if n >= 4 {
        for _ in 0..rng.gen_range(0..=2) {
            let j = rng.gen_range(1..=n - 3);
            page = pad_canceling_pair(&page, j).expect("pad inside the page range");
        }
    }
    let len = page.handles().len();
    for _ in 0..rng.gen_range(0..=3) {
        if len < 3 {
            break;
        }
        let a = rng.gen_range(2..len);
        let b = rng.gen_range(1..a);
        let (from, to) = (page.handles()[a].id.clone(), page.handles()[b].id.clone());
        page.add_dependency(from, to);
    }
    let annotated = rng.gen_bool(0.5);
    let monodromy = if annotated {
        flag_some(rng, &mut page);
        MonodromySpec::annotated(None)
    } else {
        MonodromySpec::identity()
    };
    OpenBookDoc::new(n, page, monodromy).expect("generated documents are valid")
}

fn flag_some(rng: &mut ChaCha8Rng, page: &mut HandleDecomposition) {
    let ids: Vec<_> = page.handles().iter().skip(1).map(|h| h.id.clone()).collect();
    let flagged: Vec<_> = ids.into_iter().filter(|_| rng.gen_bool(0.3)).collect();
    page.set_flags(|h| !flagged.contains(&h.id));
}

/// A random valid exchangeable selection, built by greedy closure.
pub(crate) fn exchangeable_selection(rng: &mut ChaCha8Rng, doc: &OpenBookDoc) -> Selection {
    let n = doc.n();
    let page = doc.page();
    let mut candidates: Vec<_> = page
        .handles()
        .iter()
        .filter(|h| (2..n).contains(&h.index) && h.monodromy_trivial)
        .map(|h| h.id.clone())
        .collect();
    candidates.shuffle(rng);
    let mut chosen = Selection::empty();
    for c in candidates {
        if rng.gen_bool(0.4) {
            continue;
        }
        let mut ids: Vec<_> = chosen.ids().iter().cloned().collect();
        ids.push(c);
        let trial = closure(page, &Selection::new(ids));
        let ok = trial
            .ids()
            .iter()
            .all(|id| page.handle(id).is_some_and(|h| h.monodromy_trivial));
        if ok {
            chosen = trial;
        }
    }
    chosen
}

pub(crate) fn matrix(rng: &mut ChaCha8Rng, max_dim: usize, bound: i64) -> IntegerMatrix {
    let rows = rng.gen_range(1..=max_dim);
    let cols = rng.gen_range(1..=max_dim);
    // a share of low-rank and sparse inputs keeps the torsion interesting
    let density = [1.0, 0.6, 0.3][rng.gen_range(0..3)];
    let data = (0..rows * cols)
        .map(|_| if rng.gen_bool(density) { rng.gen_range(-bound..=bound) } else { 0 })
        .collect();
    IntegerMatrix::from_vec(rows, cols, data).expect("sized data")
}
