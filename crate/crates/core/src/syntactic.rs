//! Collapsing a semigroup with zero to its coarsest quotient that still
//! distinguishes "has hit zero" from "has not": two elements are identified
//! when exactly the same two-sided contexts send them to zero. The quotient
//! preserves every absorption-time statistic once letter probabilities are
//! summed over merged generators, while the stationary profile on the
//! transient side may coarsen.

use crate::error::{Error, Result};
use crate::ratio::Q;
use crate::semigroup::{FiniteSemigroup, DEFAULT_ELEMENT_CAP};
use crate::transform::Transformation;
use std::collections::HashMap;
use std::hash::Hash;

/// Result of the quotient-at-zero construction.
#[derive(Clone, Debug)]
pub struct SyntacticQuotient {
    /// The quotient semigroup, realized faithfully by its left action on
    /// the quotient classes plus an identity point.
    pub quotient: FiniteSemigroup<Transformation>,
    /// Original node -> quotient node (root maps to root).
    pub node_map: Vec<usize>,
    /// Quotient letter labels (merged originals joined with `+`).
    pub letters: Vec<String>,
    /// Original letter index -> quotient letter index.
    pub letter_map: Vec<usize>,
    /// Congruence classes as original element nodes, indexed by class id.
    pub classes: Vec<Vec<usize>>,
}

/// Builds the quotient of `sg` by the congruence "same zero contexts".
/// Requires a zero element.
pub fn syntactic_quotient<E: Clone + Eq + Hash>(
    sg: &FiniteSemigroup<E>,
) -> Result<SyntacticQuotient> {
    let ideal = sg.minimal_ideal();
    let zero = ideal.zero_element.ok_or(Error::NoZero)?;
    let n = sg.num_nodes();
    if n.saturating_mul(n).saturating_mul(n) > 1 << 33 {
        return Err(Error::Invalid(format!(
            "semigroup with {n} nodes is too large for the context-profile scan"
        )));
    }

    // Full node product table, filled in BFS order so each entry is one
    // right step away from an already-known one.
    let mut mul = vec![vec![0usize; n]; n];
    for u in 0..n {
        mul[u][0] = u;
    }
    for v in 1..n {
        let word = sg.reduced_word(v);
        let (prefix, last) = (&word[..word.len() - 1], word[word.len() - 1]);
        let p = sg.node_of_word(prefix);
        for u in 0..n {
            mul[u][v] = sg.right_step(mul[u][p], last);
        }
    }

    // Context profile of element s: the set of pairs (x, y) with x*s*y = 0,
    // packed as a bitset over node pairs.
    let words = n.div_ceil(64);
    let mut class_of_node = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut by_profile: HashMap<Vec<u64>, usize> = HashMap::new();
    for s in 1..n {
        let mut profile = vec![0u64; n * words];
        for x in 0..n {
            let xs = mul[x][s];
            for (y, &p) in mul[xs].iter().enumerate() {
                if p == zero {
                    profile[x * words + y / 64] |= 1 << (y % 64);
                }
            }
        }
        let class = *by_profile.entry(profile).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[class].push(s);
        class_of_node[s] = class;
    }
    debug_assert_eq!(classes[class_of_node[zero]], vec![zero]);

    // Class-level product; well-defined because the profile relation is a
    // congruence (checked against representatives in debug builds).
    let k = classes.len();
    let rep: Vec<usize> = classes.iter().map(|c| c[0]).collect();
    let class_mul: Vec<Vec<usize>> = (0..k)
        .map(|c| (0..k).map(|d| class_of_node[mul[rep[c]][rep[d]]]).collect())
        .collect();
    #[cfg(debug_assertions)]
    for (c, members) in classes.iter().enumerate() {
        for &m in members {
            for d in 0..k {
                debug_assert_eq!(class_of_node[mul[m][rep[d]]], class_mul[c][d]);
                debug_assert_eq!(class_of_node[mul[rep[d]][m]], class_mul[d][c]);
            }
        }
    }

    // Quotient generators: classes of the original generators, deduplicated
    // in first-appearance order, with merged labels.
    let mut letter_map = Vec::with_capacity(sg.num_letters());
    let mut gen_classes: Vec<usize> = Vec::new();
    let mut labels: Vec<Vec<&str>> = Vec::new();
    for a in 0..sg.num_letters() {
        let class = class_of_node[sg.right_step(0, a)];
        let slot = match gen_classes.iter().position(|&g| g == class) {
            Some(i) => i,
            None => {
                gen_classes.push(class);
                labels.push(Vec::new());
                gen_classes.len() - 1
            }
        };
        labels[slot].push(&sg.letters()[a]);
        letter_map.push(slot);
    }
    let letters: Vec<String> = labels.iter().map(|ls| ls.join("+")).collect();

    // Realize the quotient by left multiplication on {identity} U classes.
    let gens: Vec<Transformation> = gen_classes
        .iter()
        .map(|&g| {
            let mut table = Vec::with_capacity(k + 1);
            table.push(g + 1);
            table.extend((0..k).map(|d| class_mul[g][d] + 1));
            Transformation::new(table).expect("left action table")
        })
        .collect();
    let quotient = crate::semigroup::generate_semigroup(
        letters.clone(),
        gens,
        sg.identity_adjoined(),
        DEFAULT_ELEMENT_CAP,
    )?;
    debug_assert_eq!(quotient.num_elements(), k);

    // Original node -> quotient node, through each class's left action.
    let mut action_to_node: HashMap<Transformation, usize> = HashMap::new();
    for node in 1..quotient.num_nodes() {
        action_to_node.insert(quotient.element(node).unwrap().clone(), node);
    }
    let node_map: Vec<usize> = (0..n)
        .map(|u| {
            if u == 0 {
                return 0;
            }
            let c = class_of_node[u];
            let mut table = Vec::with_capacity(k + 1);
            table.push(c + 1);
            table.extend((0..k).map(|d| class_mul[c][d] + 1));
            action_to_node[&Transformation::new(table).expect("left action table")]
        })
        .collect();

    Ok(SyntacticQuotient {
        quotient,
        node_map,
        letters,
        letter_map,
        classes,
    })
}

/// Result of collapsing the minimal ideal to a single element.
#[derive(Clone, Debug)]
pub struct ReesQuotient {
    /// The quotient semigroup over class ids; the collapsed kernel is its
    /// two-sided zero.
    pub quotient: FiniteSemigroup<usize>,
    /// Original node -> quotient node (root maps to root).
    pub node_map: Vec<usize>,
}

/// Collapses the whole minimal ideal of `sg` to one element, leaving every
/// transient element in its own class. The result has a two-sided zero, so
/// the context quotient applies even when the original kernel holds several
/// elements, and the transient walk is untouched: letters and transient
/// steps carry over one to one.
pub fn rees_quotient<E: Clone + Eq + Hash>(sg: &FiniteSemigroup<E>) -> Result<ReesQuotient> {
    let ideal = sg.minimal_ideal();
    let n = sg.num_nodes();
    let mut class_of_node = vec![usize::MAX; n];
    let mut rep: Vec<usize> = Vec::new();
    let mut kernel_class = None;
    for u in 1..n {
        if ideal.kernel_mask[u] {
            let class = *kernel_class.get_or_insert_with(|| {
                rep.push(u);
                rep.len() - 1
            });
            class_of_node[u] = class;
        } else {
            rep.push(u);
            class_of_node[u] = rep.len() - 1;
        }
    }

    let generators: Vec<usize> = (0..sg.num_letters())
        .map(|a| class_of_node[sg.right_step(0, a)])
        .collect();
    let quotient = crate::semigroup::generate(
        sg.letters().to_vec(),
        generators,
        |&c: &usize, &d: &usize| class_of_node[sg.node_mul(rep[c], rep[d])],
        sg.identity_adjoined(),
        DEFAULT_ELEMENT_CAP,
    )?;

    let mut class_to_node = vec![0usize; rep.len()];
    for node in 1..quotient.num_nodes() {
        class_to_node[*quotient.element(node).expect("element node")] = node;
    }
    let node_map: Vec<usize> = (0..n)
        .map(|u| {
            if u == 0 {
                0
            } else {
                class_to_node[class_of_node[u]]
            }
        })
        .collect();

    Ok(ReesQuotient { quotient, node_map })
}

/// Sums letter probabilities over merged generators.
pub fn push_probabilities(letter_map: &[usize], num_quotient_letters: usize, x: &[Q]) -> Vec<Q> {
    let mut out = vec![Q::from_integer(0.into()); num_quotient_letters];
    for (a, p) in x.iter().enumerate() {
        out[letter_map[a]] += p;
    }
    out
}
