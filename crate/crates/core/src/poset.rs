//! Finite partial orders on vertices 1..n with natural labeling (every
//! relation points from a smaller label to a larger one), their linear
//! extensions, and an exhaustive corpus of small posets for regression
//! sweeps.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// JSON shape of a poset: vertex count and cover relations as 1-indexed
/// pairs `[i, j]` meaning `i` is covered by `j`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PosetSpec {
    pub n: usize,
    pub covers: Vec<(usize, usize)>,
}

/// A validated, naturally labeled partial order. `less` holds the strict
/// order as its full transitive closure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    n: usize,
    covers: Vec<(usize, usize)>,
    less: Vec<Vec<bool>>,
}

impl Poset {
    /// Validate a spec: vertices in range, no loops or duplicates, and
    /// natural labeling (`i < j` for every relation `i` below `j`). A spec
    /// that is acyclic but labeled against the order is rejected;
    /// [`suggest_natural_labels`] produces a permutation that repairs it.
    pub fn new(spec: &PosetSpec) -> Result<Self> {
        let n = spec.n;
        if n == 0 {
            return Err(Error::Invalid("poset needs at least one vertex".into()));
        }
        let mut less = vec![vec![false; n]; n];
        for &(i, j) in &spec.covers {
            if i < 1 || i > n || j < 1 || j > n {
                return Err(Error::Invalid(format!(
                    "cover ({i}, {j}) outside vertex range 1..={n}"
                )));
            }
            if i == j {
                return Err(Error::Invalid(format!("cover ({i}, {j}) is a loop")));
            }
            if i > j {
                let hint = match suggest_natural_labels(n, &spec.covers) {
                    Ok(relabel) => format!(
                        "; relabeling {} makes it natural",
                        relabel
                            .iter()
                            .enumerate()
                            .map(|(old, new)| format!("{}->{}", old + 1, new))
                            .collect::<Vec<_>>()
                            .join(", ")
                    ),
                    Err(_) => "; no relabeling can (the covers contain a cycle)".into(),
                };
                return Err(Error::Invalid(format!(
                    "cover ({i}, {j}) violates natural labeling{hint}"
                )));
            }
            if less[i - 1][j - 1] {
                return Err(Error::Invalid(format!("duplicate cover ({i}, {j})")));
            }
            less[i - 1][j - 1] = true;
        }
        // Transitive closure. Natural labeling already rules out cycles.
        for k in 0..n {
            for i in 0..n {
                if less[i][k] {
                    for j in 0..n {
                        if less[k][j] {
                            less[i][j] = true;
                        }
                    }
                }
            }
        }
        Ok(Poset {
            n,
            covers: spec.covers.clone(),
            less,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: PosetSpec = serde_json::from_str(text)?;
        Poset::new(&spec)
    }

    pub fn spec(&self) -> PosetSpec {
        PosetSpec {
            n: self.n,
            covers: self.covers.clone(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Strict order: true when vertex `a` lies below vertex `b` (1-indexed).
    pub fn precedes(&self, a: u8, b: u8) -> bool {
        self.less[a as usize - 1][b as usize - 1]
    }

    pub fn incomparable(&self, a: u8, b: u8) -> bool {
        a != b && !self.precedes(a, b) && !self.precedes(b, a)
    }

    /// All linear extensions as permutations of 1..n, in lexicographic
    /// order: each position takes the smallest currently minimal vertex
    /// first.
    pub fn linear_extensions(&self) -> Vec<Vec<u8>> {
        let mut used = vec![false; self.n];
        let mut current: Vec<u8> = Vec::with_capacity(self.n);
        let mut out = Vec::new();
        self.extend_all(&mut used, &mut current, &mut out);
        out
    }

    fn extend_all(&self, used: &mut [bool], current: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if current.len() == self.n {
            out.push(current.clone());
            return;
        }
        for v in 0..self.n {
            if used[v] {
                continue;
            }
            let minimal = (0..self.n).all(|u| used[u] || !self.less[u][v]);
            if minimal {
                used[v] = true;
                current.push(v as u8 + 1);
                self.extend_all(used, current, out);
                current.pop();
                used[v] = false;
            }
        }
    }

    /// The full antichain: no relations, every permutation is an extension.
    pub fn antichain(n: usize) -> Result<Self> {
        Poset::new(&PosetSpec { n, covers: vec![] })
    }

    /// The total order 1 < 2 < ... < n with the identity as the only
    /// extension.
    pub fn chain(n: usize) -> Result<Self> {
        Poset::new(&PosetSpec {
            n,
            covers: (1..n).map(|i| (i, i + 1)).collect(),
        })
    }
}

/// For covers that are acyclic but not naturally labeled, return a
/// relabeling `new[old-1]` (1-indexed values) under which every relation
/// points upward; errors when the covers contain a cycle.
pub fn suggest_natural_labels(n: usize, covers: &[(usize, usize)]) -> Result<Vec<usize>> {
    let mut indegree = vec![0usize; n];
    let mut after: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(i, j) in covers {
        if i < 1 || i > n || j < 1 || j > n || i == j {
            return Err(Error::Invalid(format!("bad cover ({i}, {j})")));
        }
        after[i - 1].push(j - 1);
        indegree[j - 1] += 1;
    }
    let mut relabel = vec![0usize; n];
    let mut ready: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
    let mut next = 1;
    while let Some(v) = ready.pop() {
        relabel[v] = next;
        next += 1;
        for &w in &after[v] {
            indegree[w] -= 1;
            if indegree[w] == 0 {
                ready.push(w);
            }
        }
    }
    if next <= n {
        return Err(Error::Invalid("covers contain a cycle".into()));
    }
    Ok(relabel)
}

/// Every naturally labeled poset on 1..=max_n vertices, enumerated as the
/// transitively closed strict relations inside the upper triangle.
pub fn poset_corpus(max_n: usize) -> Vec<Poset> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        let pairs: Vec<(usize, usize)> = (1..=n)
            .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
            .collect();
        for mask in 0u32..(1 << pairs.len()) {
            let chosen: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(idx, _)| mask >> idx & 1 == 1)
                .map(|(_, &p)| p)
                .collect();
            let mut rel = vec![vec![false; n]; n];
            for &(i, j) in &chosen {
                rel[i - 1][j - 1] = true;
            }
            let transitive = (0..n).all(|i| {
                (0..n).all(|k| {
                    !rel[i][k] || (0..n).all(|j| !rel[k][j] || rel[i][j])
                })
            });
            if transitive {
                out.push(
                    Poset::new(&PosetSpec {
                        n,
                        covers: chosen,
                    })
                    .expect("upper-triangular transitive relation is a valid poset"),
                );
            }
        }
    }
    out
}

/// The four-vertex running example: 1 and 2 below 4, and 2 below 3.
pub fn example_poset() -> Poset {
    Poset::new(&PosetSpec {
        n: 4,
        covers: vec![(1, 4), (2, 4), (2, 3)],
    })
    .expect("example poset is valid")
}

pub fn permutation_label(p: &[u8]) -> String {
    p.iter().map(|v| v.to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_poset_has_the_five_extensions() {
        let p = example_poset();
        let ext: Vec<String> = p.linear_extensions().iter().map(|e| permutation_label(e)).collect();
        assert_eq!(ext, vec!["1234", "1243", "2134", "2143", "2314"]);
        assert!(p.precedes(2, 3));
        assert!(p.precedes(1, 4));
        assert!(p.incomparable(1, 2));
        assert!(p.incomparable(3, 4));
        assert!(p.incomparable(1, 3));
    }

    #[test]
    fn antichain_and_chain_extensions() {
        let anti = Poset::antichain(3).unwrap();
        let ext: Vec<String> = anti
            .linear_extensions()
            .iter()
            .map(|e| permutation_label(e))
            .collect();
        assert_eq!(ext, vec!["123", "132", "213", "231", "312", "321"]);

        let chain = Poset::chain(4).unwrap();
        let ext = chain.linear_extensions();
        assert_eq!(ext, vec![vec![1, 2, 3, 4]]);
    }

    #[test]
    fn closure_derives_implied_relations() {
        let p = Poset::new(&PosetSpec {
            n: 3,
            covers: vec![(1, 2), (2, 3)],
        })
        .unwrap();
        assert!(p.precedes(1, 3));
        assert!(!p.precedes(3, 1));
    }

    #[test]
    fn rejects_unnatural_labels_with_a_suggestion() {
        let err = Poset::new(&PosetSpec {
            n: 2,
            covers: vec![(2, 1)],
        })
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("natural labeling"));
        assert!(msg.contains("relabeling"));

        let relabel = suggest_natural_labels(2, &[(2, 1)]).unwrap();
        assert_eq!(relabel, vec![2, 1]);

        let cyclic = Poset::new(&PosetSpec {
            n: 3,
            covers: vec![(1, 2), (2, 3), (3, 1)],
        });
        assert!(cyclic.is_err());
        assert!(suggest_natural_labels(3, &[(1, 2), (2, 3), (3, 1)]).is_err());
    }

    #[test]
    fn rejects_loops_duplicates_and_range_errors() {
        assert!(Poset::new(&PosetSpec {
            n: 2,
            covers: vec![(1, 1)],
        })
        .is_err());
        assert!(Poset::new(&PosetSpec {
            n: 2,
            covers: vec![(1, 2), (1, 2)],
        })
        .is_err());
        assert!(Poset::new(&PosetSpec {
            n: 2,
            covers: vec![(1, 3)],
        })
        .is_err());
        assert!(Poset::new(&PosetSpec { n: 0, covers: vec![] }).is_err());
    }

    #[test]
    fn corpus_counts_match_the_natural_poset_numbers() {
        let corpus = poset_corpus(4);
        let counts: Vec<usize> = (1..=4)
            .map(|n| corpus.iter().filter(|p| p.n() == n).count())
            .collect();
        assert_eq!(counts, vec![1, 2, 7, 40]);

        let example = example_poset();
        assert!(corpus.iter().any(|p| {
            p.n() == 4 && (1..=4).all(|a| (1..=4).all(|b| p.precedes(a, b) == example.precedes(a, b)))
        }));
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"n": 4, "covers": [[1, 4], [2, 4], [2, 3]]}"#;
        let p = Poset::from_json(text).unwrap();
        assert_eq!(p.linear_extensions().len(), 5);
        let back = serde_json::to_string(&p.spec()).unwrap();
        let again = Poset::from_json(&back).unwrap();
        assert_eq!(p, again);
    }
}
