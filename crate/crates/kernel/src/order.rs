//! Permutations of prefixes on tuples of naturals.

use crate::value::{is_prefix, Value};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleOrderWitness {
    /// `permutation[i]` is the index of `ys` matched with `xs[i]`.
    pub permutation: Vec<usize>,
    pub strict_positions: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TupleOrder {
    NotRelated,
    SubsetEq(TupleOrderWitness),
    SubsetStrict(TupleOrderWitness),
}

impl TupleOrder {
    pub fn is_subset_eq(&self) -> bool {
        !matches!(self, TupleOrder::NotRelated)
    }

    pub fn is_strict(&self) -> bool {
        matches!(self, TupleOrder::SubsetStrict(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("tuple length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
}

/// Finds a permutation `pi` with `xs[i]` a prefix of `ys[pi[i]]` by
/// bipartite matching.
fn prefix_matching(xs: &[Value], ys: &[Value]) -> Option<Vec<usize>> {
    let n = xs.len();
    let adj: Vec<Vec<usize>> = xs
        .iter()
        .map(|x| (0..n).filter(|&j| is_prefix(x, &ys[j])).collect())
        .collect();
    let mut owner: Vec<Option<usize>> = vec![None; n];

    fn augment(i: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &j in &adj[i] {
            if seen[j] {
                continue;
            }
            seen[j] = true;
            let free = match owner[j] {
                None => true,
                Some(k) => augment(k, adj, seen, owner),
            };
            if free {
                owner[j] = Some(i);
                return true;
            }
        }
        false
    }

    for i in 0..n {
        let mut seen = vec![false; n];
        if !augment(i, &adj, &mut seen, &mut owner) {
            return None;
        }
    }
    let mut perm = vec![0; n];
    for (j, o) in owner.iter().enumerate() {
        perm[o.expect("perfect matching")] = j;
    }
    Some(perm)
}

pub fn tuple_order(xs: &[Value], ys: &[Value]) -> Result<TupleOrder, OrderError> {
    if xs.len() != ys.len() {
        return Err(OrderError::LengthMismatch(xs.len(), ys.len()));
    }
    let Some(permutation) = prefix_matching(xs, ys) else {
        return Ok(TupleOrder::NotRelated);
    };
    let strict_positions: Vec<usize> = (0..xs.len())
        .filter(|&i| xs[i] != ys[permutation[i]])
        .collect();
    let witness = TupleOrderWitness { permutation, strict_positions };
    if prefix_matching(ys, xs).is_some() {
        Ok(TupleOrder::SubsetEq(witness))
    } else {
        Ok(TupleOrder::SubsetStrict(witness))
    }
}

/// `xs ⊆ ys`; false on length mismatch.
pub fn subset_eq(xs: &[Value], ys: &[Value]) -> bool {
    xs.len() == ys.len() && prefix_matching(xs, ys).is_some()
}

/// `xs ⊂ ys`; false on length mismatch.
pub fn subset_strict(xs: &[Value], ys: &[Value]) -> bool {
    matches!(tuple_order(xs, ys), Ok(TupleOrder::SubsetStrict(_)))
}
