//! Matsubara sums with parallel term evaluation and a deterministic,
//! index-ordered reduction.

use rayon::prelude::*;

use crate::error::Result;

/// One Matsubara term: a vector of summands plus the absolute quadrature
/// error attached to each.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term<const N: usize> {
    pub value: [f64; N],
    pub abs_error: [f64; N],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Truncation {
    /// Stop after three consecutive terms each below `rel_tol` times the
    /// running sum in every component, then add a geometric tail.
    Adaptive { rel_tol: f64, max_terms: usize },
    /// Sum exactly this many terms (n = 0 .. count-1), no tail.
    Fixed(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumOutcome<const N: usize> {
    /// Sum including the tail estimate.
    pub sum: [f64; N],
    pub tail: [f64; N],
    /// Summed absolute quadrature errors.
    pub abs_error: [f64; N],
    pub n_terms: usize,
    pub converged: bool,
}

const STREAK: usize = 3;
const FIRST_CHUNK: usize = 64;
const MAX_CHUNK: usize = 16_384;

/// Terms n = 0 .. n_terms-1 as evaluated (unweighted), plus the truncation
/// verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct Collected<const N: usize> {
    pub terms: Vec<Term<N>>,
    /// Geometric estimate of everything past the last term.
    pub tail: [f64; N],
    pub converged: bool,
}

/// Evaluate terms until the truncation rule fires. The stop test uses the
/// running sum with the n = 0 term at half weight.
pub fn collect_matsubara<const N: usize, F>(term: F, truncation: Truncation) -> Result<Collected<N>>
where
    F: Fn(usize) -> Result<Term<N>> + Sync,
{
    collect_matsubara_bounded(term, |_| [0.0; N], truncation)
}

/// As [`collect_matsubara`], with `envelope(n)` an upper bound on the
/// magnitude of term `n`. A term only counts as negligible when its bound is
/// negligible too, which keeps terms passing through zero from ending the
/// sum early. The envelope is evaluated only for terms that are already
/// small.
pub fn collect_matsubara_bounded<const N: usize, F, E>(
    term: F,
    envelope: E,
    truncation: Truncation,
) -> Result<Collected<N>>
where
    F: Fn(usize) -> Result<Term<N>> + Sync,
    E: Fn(usize) -> [f64; N],
{
    let (rel_tol, limit) = match truncation {
        Truncation::Adaptive { rel_tol, max_terms } => (Some(rel_tol), max_terms),
        Truncation::Fixed(count) => (None, count),
    };

    let mut terms: Vec<Term<N>> = Vec::new();
    let mut sum = [0.0; N];
    let mut streak = 0;
    let mut chunk = FIRST_CHUNK;

    while terms.len() < limit {
        let next = terms.len();
        let end = (next + chunk).min(limit);
        let batch: Vec<Term<N>> = (next..end)
            .into_par_iter()
            .map(&term)
            .collect::<Result<_>>()?;
        for t in batch {
            let n = terms.len();
            terms.push(t);
            let Some(tol) = rel_tol else { continue };
            let weight = if n == 0 { 0.5 } else { 1.0 };
            for (s, v) in sum.iter_mut().zip(t.value) {
                *s += weight * v;
            }
            let below = |v: &[f64; N]| (0..N).all(|i| v[i].abs() <= tol * sum[i].abs());
            let small = below(&t.value) && below(&envelope(n));
            streak = if small { streak + 1 } else { 0 };
            if streak >= STREAK {
                let tail = tail_of(&terms);
                return Ok(Collected {
                    terms,
                    tail,
                    converged: true,
                });
            }
        }
        chunk = (chunk * 2).min(MAX_CHUNK);
    }

    let tail = if rel_tol.is_some() {
        tail_of(&terms)
    } else {
        [0.0; N]
    };
    Ok(Collected {
        terms,
        tail,
        converged: rel_tol.is_none(),
    })
}

/// Sum `term(n)` over n = 0, 1, 2, ... with the n = 0 term at half weight.
pub fn sum_matsubara<const N: usize, F>(term: F, truncation: Truncation) -> Result<SumOutcome<N>>
where
    F: Fn(usize) -> Result<Term<N>> + Sync,
{
    sum_matsubara_bounded(term, |_| [0.0; N], truncation)
}

/// Sum with a magnitude envelope; see [`collect_matsubara_bounded`].
pub fn sum_matsubara_bounded<const N: usize, F, E>(
    term: F,
    envelope: E,
    truncation: Truncation,
) -> Result<SumOutcome<N>>
where
    F: Fn(usize) -> Result<Term<N>> + Sync,
    E: Fn(usize) -> [f64; N],
{
    let collected = collect_matsubara_bounded(term, envelope, truncation)?;
    let mut sum = [0.0; N];
    let mut abs_error = [0.0; N];
    for (n, t) in collected.terms.iter().enumerate() {
        let weight = if n == 0 { 0.5 } else { 1.0 };
        for i in 0..N {
            sum[i] += weight * t.value[i];
            abs_error[i] += weight * t.abs_error[i];
        }
    }
    for (s, t) in sum.iter_mut().zip(collected.tail) {
        *s += t;
    }
    Ok(SumOutcome {
        sum,
        tail: collected.tail,
        abs_error,
        n_terms: collected.terms.len(),
        converged: collected.converged,
    })
}

fn tail_of<const N: usize>(terms: &[Term<N>]) -> [f64; N] {
    match terms {
        [.., previous, last] => geometric_tail(previous.value, last.value),
        _ => [0.0; N],
    }
}

fn geometric_tail<const N: usize>(previous: [f64; N], last: [f64; N]) -> [f64; N] {
    let mut tail = [0.0; N];
    for i in 0..N {
        if previous[i] != 0.0 {
            let ratio = last[i] / previous[i];
            if ratio > 0.0 && ratio < 1.0 {
                tail[i] = last[i] * ratio / (1.0 - ratio);
            }
        }
    }
    tail
}
