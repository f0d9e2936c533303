//! Edge flipping on a path: vertices 1..n+1, edges 1..n, and each step picks
//! edge i with probability x_i and paints both endpoints a common random
//! color. Letters are the 2n signed flips, each with probability x_i/2. The
//! kernel is the constant maps onto the reachable colorings, and the
//! stationary distribution lumps the signed move-to-front formula.

use super::{assemble_map_model, min_positive_prob, ChainBuilder, ChainModel, ChainParams};
use crate::bounds::StatisticParams;
use crate::error::{Error, Result};
use crate::ratio::{qint, Q};
use crate::transform::{Alphabet, Transformation};
use num::traits::Zero;
use std::collections::HashMap;

pub const MAX_EDGES: usize = 5;

pub struct EdgeFlip;

impl ChainBuilder for EdgeFlip {
    fn name(&self) -> &'static str {
        "edgeflip"
    }

    fn describe(&self) -> &'static str {
        "random edge flips on a path with n edges (--probs per edge; letters +i/-i)"
    }

    fn build(&self, params: &ChainParams) -> Result<ChainModel> {
        if params.poset.is_some() {
            return Err(Error::Invalid("edgeflip does not take a poset".into()));
        }
        let n = params.n.unwrap_or(2);
        build_edgeflip(n, params)
    }
}

fn build_edgeflip(n: usize, params: &ChainParams) -> Result<ChainModel> {
    if n == 0 {
        return Err(Error::Invalid("need at least one edge".into()));
    }
    if n > MAX_EDGES {
        return Err(Error::SizeCap { cap: MAX_EDGES });
    }
    let edge_probs = params.resolve_probs(n, "edgeflip")?;
    let mut labels = Vec::with_capacity(2 * n);
    let mut letter_probs = Vec::with_capacity(2 * n);
    for i in 1..=n {
        for sign in ["+", "-"] {
            labels.push(format!("{sign}{i}"));
            letter_probs.push(&edge_probs[i - 1] / qint(2));
        }
    }
    let alphabet = Alphabet::new(labels, Some(letter_probs.clone()))?;

    let vertices = n + 1;
    let num_states = 1usize << vertices;
    let state_names = (0..num_states).map(|m| config_name(m, vertices)).collect();
    let mut generators = Vec::with_capacity(2 * n);
    for i in 1..=n {
        for &one in &[true, false] {
            let table = (0..num_states)
                .map(|mask| {
                    let covered = (1 << (i - 1)) | (1 << i);
                    if one {
                        mask | covered
                    } else {
                        mask & !covered
                    }
                })
                .collect();
            generators.push(Transformation::new(table)?);
        }
    }

    let mut model = assemble_map_model("edgeflip", alphabet, generators, state_names)?;
    let by_config = lumped_stationary(&edge_probs);
    let closed = model
        .states
        .as_ref()
        .expect("map model has states")
        .kernel_values
        .iter()
        .map(|v| by_config.get(v).cloned().unwrap_or_else(Q::zero))
        .collect();
    model.closed_form = Some(closed);
    model.statistic = Some(StatisticParams {
        success: min_positive_prob(&letter_probs)?,
        level: vertices,
    });
    Ok(model)
}

fn config_name(mask: usize, vertices: usize) -> String {
    (0..vertices)
        .map(|v| if mask >> v & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// One term of the signed move-to-front formula: the signed flip sequence
/// `pi` (most recent first, `(edge, paints_one)` pairs) has weight
/// `prod_k (x_{e_k}/2) / (1 - x_{e_1} - ... - x_{e_{k-1}})`.
pub fn signed_term(edge_probs: &[Q], pi: &[(usize, bool)]) -> Q {
    let mut result = qint(1);
    let mut seen = Q::zero();
    for &(edge, _) in pi {
        let xe = &edge_probs[edge - 1];
        result *= xe / (qint(2) * (qint(1) - &seen));
        seen += xe;
    }
    result
}

/// The coloring a full signed flip sequence settles into: each vertex takes
/// the color of the most recent incident flip, which is the earliest one in
/// most-recent-first order.
pub fn lump(pi: &[(usize, bool)], vertices: usize) -> usize {
    let mut mask = 0usize;
    for v in 1..=vertices {
        for &(edge, one) in pi {
            if edge == v - 1 || edge == v {
                if one {
                    mask |= 1 << (v - 1);
                }
                break;
            }
        }
    }
    mask
}

/// All full signed flip sequences with their weights, folded onto the
/// colorings they pin down.
pub fn lumped_stationary(edge_probs: &[Q]) -> HashMap<usize, Q> {
    let n = edge_probs.len();
    let mut acc: HashMap<usize, Q> = HashMap::new();
    let mut pi: Vec<(usize, bool)> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(
        edge_probs: &[Q],
        used: &mut [bool],
        pi: &mut Vec<(usize, bool)>,
        acc: &mut HashMap<usize, Q>,
    ) {
        let n = edge_probs.len();
        if pi.len() == n {
            let mass = signed_term(edge_probs, pi);
            *acc.entry(lump(pi, n + 1)).or_insert_with(Q::zero) += mass;
            return;
        }
        for e in 1..=n {
            if used[e - 1] {
                continue;
            }
            used[e - 1] = true;
            for one in [true, false] {
                pi.push((e, one));
                rec(edge_probs, used, pi, acc);
                pi.pop();
            }
            used[e - 1] = false;
        }
    }
    rec(edge_probs, &mut used, &mut pi, &mut acc);
    acc
}
