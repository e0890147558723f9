use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Strict Pareto dominance: `u` dominates `v` when u(d) > v(d) for every
/// coordinate d.
pub fn dominates(u: &[f64], v: &[f64]) -> Result<bool> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            actual: v.len(),
        });
    }
    Ok(u.iter().zip(v).all(|(a, b)| a > b))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrontResult {
    /// Indices of non-dominated vectors, ascending.
    pub members: Vec<usize>,
    /// For each dominated index, one front member that strictly dominates
    /// it. Strict dominance is transitive, so such a member always exists.
    pub dominated_by: BTreeMap<usize, usize>,
}

/// Pareto front of a set of D-dimensional vectors by pairwise scan.
pub fn pareto_front(vectors: &[Vec<f64>]) -> Result<FrontResult> {
    if vectors.is_empty() {
        return Err(Error::EmptyInput("pareto_front needs at least one vector"));
    }
    let dim = vectors[0].len();
    for v in vectors {
        if v.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: v.len(),
            });
        }
    }

    let dominated = |i: usize| -> Option<usize> {
        vectors
            .iter()
            .position(|other| other.iter().zip(&vectors[i]).all(|(a, b)| a > b))
    };

    let mut members = Vec::new();
    let mut losers = Vec::new();
    for i in 0..vectors.len() {
        match dominated(i) {
            None => members.push(i),
            Some(_) => losers.push(i),
        }
    }

    // Walk each loser up a strict-dominance chain until it ends at a front
    // member; the chain is finite because dominance is a strict order.
    let mut dominated_by = BTreeMap::new();
    for i in losers {
        let mut witness = dominated(i).expect("loser has a dominator");
        while !members.contains(&witness) {
            witness = dominated(witness).expect("dominated non-member has a dominator");
        }
        dominated_by.insert(i, witness);
    }

    Ok(FrontResult {
        members,
        dominated_by,
    })
}
