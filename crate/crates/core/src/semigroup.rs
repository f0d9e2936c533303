//! Finite semigroup closure from generators, with the structure the
//! absorbing-chain construction needs: right Cayley edges, reduced words,
//! the minimal ideal, and a few structural predicates.
//!
//! Node indexing: node 0 is always an explicitly adjoined identity used as
//! the BFS root (it exists even when one of the generated elements happens
//! to act as an identity); nodes `1..` are the generated elements in BFS
//! discovery order, so each node's recorded word is shortest.

use crate::error::{Error, Result};
use crate::transform::Transformation;
use std::collections::HashMap;
use std::hash::Hash;

pub const DEFAULT_ELEMENT_CAP: usize = 1_000_000;

#[derive(Clone, Debug)]
pub struct FiniteSemigroup<E> {
    letters: Vec<String>,
    elements: Vec<E>,
    /// `right_step[node][letter]` = node of (element of `node`) * generator.
    right_step: Vec<Vec<usize>>,
    /// `left_step[node][letter]` = node of generator * (element of `node`).
    left_step: Vec<Vec<usize>>,
    /// Shortest generator word per node (letter indices); empty at the root.
    reduced_words: Vec<Vec<usize>>,
    identity_adjoined: bool,
}

/// Closure of `generators` under an associative product, explored by BFS
/// right multiplication from the adjoined identity.
pub fn generate<E, F>(
    labels: Vec<String>,
    generators: Vec<E>,
    mul: F,
    adjoin_identity: bool,
    cap: usize,
) -> Result<FiniteSemigroup<E>>
where
    E: Clone + Eq + Hash,
    F: Fn(&E, &E) -> E,
{
    if labels.len() != generators.len() {
        return Err(Error::Invalid(format!(
            "{} labels for {} generators",
            labels.len(),
            generators.len()
        )));
    }
    if generators.is_empty() {
        return Err(Error::Invalid("no generators".into()));
    }

    let mut index: HashMap<E, usize> = HashMap::new();
    let mut elements: Vec<E> = Vec::new();
    let mut reduced_words: Vec<Vec<usize>> = vec![Vec::new()];
    let mut right_step: Vec<Vec<usize>> = vec![Vec::new()];

    // The root's out-edges are the generators themselves.
    let mut frontier: Vec<usize> = Vec::new();
    for (a, g) in generators.iter().enumerate() {
        let node = match index.get(g) {
            Some(&n) => n,
            None => {
                elements.push(g.clone());
                let n = elements.len();
                index.insert(g.clone(), n);
                reduced_words.push(vec![a]);
                right_step.push(Vec::new());
                frontier.push(n);
                n
            }
        };
        right_step[0].push(node);
    }

    let mut head = 0;
    while head < frontier.len() {
        let node = frontier[head];
        head += 1;
        for (a, g) in generators.iter().enumerate() {
            let product = mul(&elements[node - 1], g);
            let next = match index.get(&product) {
                Some(&n) => n,
                None => {
                    if elements.len() >= cap {
                        return Err(Error::SizeCap { cap });
                    }
                    elements.push(product.clone());
                    let n = elements.len();
                    index.insert(product, n);
                    let mut w = reduced_words[node].clone();
                    w.push(a);
                    reduced_words.push(w);
                    right_step.push(Vec::new());
                    frontier.push(n);
                    n
                }
            };
            right_step[node].push(next);
        }
    }

    // Left edges: generator * element, resolved through the same index.
    let mut left_step: Vec<Vec<usize>> = vec![right_step[0].clone()];
    for e in &elements {
        let row = generators
            .iter()
            .map(|g| index[&mul(g, e)])
            .collect();
        left_step.push(row);
    }

    Ok(FiniteSemigroup {
        letters: labels,
        elements,
        right_step,
        left_step,
        reduced_words,
        identity_adjoined: adjoin_identity,
    })
}

/// Transformation-semigroup closure; the common entry point for models.
pub fn generate_semigroup(
    labels: Vec<String>,
    generators: Vec<Transformation>,
    adjoin_identity: bool,
    cap: usize,
) -> Result<FiniteSemigroup<Transformation>> {
    let degree = generators
        .first()
        .map(Transformation::degree)
        .ok_or_else(|| Error::Invalid("no generators".into()))?;
    for (g, l) in generators.iter().zip(&labels) {
        if g.degree() != degree {
            return Err(Error::DegreeMismatch {
                label: l.clone(),
                got: g.degree(),
                expected: degree,
            });
        }
    }
    generate(labels, generators, |u, a| u.compose(a), adjoin_identity, cap)
}

impl<E> FiniteSemigroup<E> {
    /// Number of generated elements (the adjoined identity not included).
    pub fn num_elements(&self) -> usize {
        self.elements.len()
    }

    /// Number of nodes including the adjoined identity root.
    pub fn num_nodes(&self) -> usize {
        self.elements.len() + 1
    }

    pub fn num_letters(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn identity_adjoined(&self) -> bool {
        self.identity_adjoined
    }

    /// Element behind a node; `None` for the root.
    pub fn element(&self, node: usize) -> Option<&E> {
        node.checked_sub(1).map(|i| &self.elements[i])
    }

    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    pub fn right_step(&self, node: usize, letter: usize) -> usize {
        self.right_step[node][letter]
    }

    pub fn left_step(&self, node: usize, letter: usize) -> usize {
        self.left_step[node][letter]
    }

    pub fn reduced_word(&self, node: usize) -> &[usize] {
        &self.reduced_words[node]
    }

    /// Product of two nodes, evaluated by walking `v`'s reduced word from `u`.
    pub fn node_mul(&self, u: usize, v: usize) -> usize {
        self.reduced_words[v]
            .iter()
            .fold(u, |n, &a| self.right_step[n][a])
    }

    /// Node reached from the root by a word (letter indices).
    pub fn node_of_word(&self, word: &[usize]) -> usize {
        word.iter().fold(0, |n, &a| self.right_step[n][a])
    }

    /// Strongly connected components of the right Cayley graph restricted to
    /// element nodes; singleton components everywhere means every element
    /// generates a distinct principal right ideal.
    pub fn is_r_trivial(&self) -> bool {
        let n = self.num_nodes();
        let succ = |u: usize| self.right_step[u].iter().copied();
        let comp = tarjan_scc(n, succ);
        let mut size = vec![0usize; n];
        for &c in &comp {
            size[c] += 1;
        }
        (1..n).all(|u| size[comp[u]] == 1)
    }

    /// Minimal two-sided ideal: the unique sink component of the graph with
    /// edges `s -> s*a` and `s -> a*s`.
    pub fn minimal_ideal(&self) -> IdealInfo {
        let n = self.num_nodes();
        let succ = |u: usize| {
            self.right_step[u]
                .iter()
                .copied()
                .chain(self.left_step[u].iter().copied())
        };
        let comp = tarjan_scc(n, succ);
        let num_comps = comp.iter().copied().max().unwrap_or(0) + 1;
        let mut has_exit = vec![false; num_comps];
        for u in 0..n {
            for v in succ(u) {
                if comp[v] != comp[u] {
                    has_exit[comp[u]] = true;
                }
            }
        }
        let sinks: Vec<usize> = (0..num_comps).filter(|&c| !has_exit[c]).collect();
        debug_assert_eq!(sinks.len(), 1, "minimal ideal must be unique");
        let sink = sinks[0];
        let kernel: Vec<usize> = (1..n).filter(|&u| comp[u] == sink).collect();
        let mut kernel_mask = vec![false; n];
        for &u in &kernel {
            kernel_mask[u] = true;
        }

        // Left zero: x*y = x for all kernel x, y.
        let is_left_zero = kernel.iter().all(|&x| {
            kernel.iter().all(|&y| self.node_mul(x, y) == x)
        });

        // A zero element must be the whole kernel and fix both products
        // against every generator.
        let zero_element = match kernel.as_slice() {
            [z] => {
                let z = *z;
                let absorbs = (0..self.num_letters()).all(|a| {
                    self.right_step[z][a] == z && self.left_step[z][a] == z
                });
                absorbs.then_some(z)
            }
            _ => None,
        };

        IdealInfo {
            kernel,
            kernel_mask,
            is_left_zero,
            zero_element,
        }
    }

    /// GraphViz rendering of the right Cayley graph. Nodes carry reduced
    /// words like `[1,4,1]`; parallel edges are merged into one labelled
    /// with every letter that realizes the step.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph cayley {\n  rankdir=TB;\n");
        for node in 0..self.num_nodes() {
            let label = self.format_node(node);
            let shape = if node == 0 { "doublecircle" } else { "circle" };
            out.push_str(&format!(
                "  n{node} [label=\"{label}\", shape={shape}];\n"
            ));
        }
        for node in 0..self.num_nodes() {
            let mut by_target: HashMap<usize, Vec<&str>> = HashMap::new();
            for (a, &t) in self.right_step[node].iter().enumerate() {
                by_target.entry(t).or_default().push(&self.letters[a]);
            }
            let mut targets: Vec<_> = by_target.into_iter().collect();
            targets.sort();
            for (t, labels) in targets {
                out.push_str(&format!(
                    "  n{node} -> n{t} [label=\"{}\"];\n",
                    labels.join(",")
                ));
            }
        }
        out.push_str("}\n");
        out
    }

    /// Reduced-word display for a node: `[]` for the root, `[1,4,1]` style
    /// otherwise.
    pub fn format_node(&self, node: usize) -> String {
        let parts: Vec<&str> = self.reduced_words[node]
            .iter()
            .map(|&a| self.letters[a].as_str())
            .collect();
        format!("[{}]", parts.join(","))
    }
}

/// Kernel of the semigroup plus the structural facts downstream code needs.
#[derive(Clone, Debug)]
pub struct IdealInfo {
    /// Nodes of the minimal ideal, ascending.
    pub kernel: Vec<usize>,
    /// Node-indexed membership mask.
    pub kernel_mask: Vec<bool>,
    /// Whether `x*y = x` holds throughout the kernel.
    pub is_left_zero: bool,
    /// The two-sided zero, when the kernel is exactly `{0}`.
    pub zero_element: Option<usize>,
}

/// Iterative Tarjan; returns the component id per vertex. Component ids are
/// assigned in reverse topological order of the condensation (sinks first).
fn tarjan_scc<I, F>(n: usize, succ: F) -> Vec<usize>
where
    I: Iterator<Item = usize>,
    F: Fn(usize) -> I,
{
    const NONE: usize = usize::MAX;
    let mut index = vec![NONE; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![NONE; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0;
    let mut next_comp = 0;

    for start in 0..n {
        if index[start] != NONE {
            continue;
        }
        // Explicit DFS: (vertex, iterator state via collected successor list, cursor).
        let mut call: Vec<(usize, Vec<usize>, usize)> = Vec::new();
        let succs: Vec<usize> = succ(start).collect();
        index[start] = next_index;
        low[start] = next_index;
        next_index += 1;
        stack.push(start);
        on_stack[start] = true;
        call.push((start, succs, 0));

        while let Some((v, vs, cursor)) = call.last_mut() {
            if *cursor < vs.len() {
                let w = vs[*cursor];
                *cursor += 1;
                if index[w] == NONE {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    let ws: Vec<usize> = succ(w).collect();
                    call.push((w, ws, 0));
                } else if on_stack[w] {
                    let v = *v;
                    low[v] = low[v].min(index[w]);
                }
            } else {
                let v = *v;
                call.pop();
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if w == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
                if let Some((p, _, _)) = call.last() {
                    let p = *p;
                    low[p] = low[p].min(low[v]);
                }
            }
        }
    }
    comp
}
