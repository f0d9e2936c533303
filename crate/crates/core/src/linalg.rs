//! Dense exact linear algebra over the rationals.
//!
//! Everything here is sized for desk-scale systems (a few hundred unknowns).
//! Solving `(I - Q)X = B` gets a fast path when the off-diagonal support of
//! `Q` is acyclic, which covers the R-trivial semigroups where transient
//! states only ever move "down" (plus self-loops); otherwise plain Gaussian
//! elimination with exact pivoting is used.

use crate::error::{Error, Result};
use crate::ratio::Q;
use num::{One, Zero};

pub type Matrix = Vec<Vec<Q>>;

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![Q::zero(); cols]; rows]
}

pub fn identity(n: usize) -> Matrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Q::one();
    }
    m
}

/// `a * v` for a column vector `v`.
pub fn transpose(a: &Matrix) -> Matrix {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut out = zeros(cols, rows);
    for (i, row) in a.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            out[j][i] = v.clone();
        }
    }
    out
}

pub fn mat_vec(a: &Matrix, v: &[Q]) -> Vec<Q> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

/// `v * a` for a row vector `v`.
pub fn vec_mat(v: &[Q], a: &Matrix) -> Vec<Q> {
    let cols = a.first().map_or(0, Vec::len);
    let mut out = vec![Q::zero(); cols];
    for (vi, row) in v.iter().zip(a) {
        if vi.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(row) {
            *o += vi * x;
        }
    }
    out
}

/// Solves `A X = B` by Gaussian elimination. `B` is given and returned as a
/// list of columns. Fails on singular `A`.
pub fn gauss_solve(a: &Matrix, b: &[Vec<Q>]) -> Result<Vec<Vec<Q>>> {
    let n = a.len();
    let k = b.len();
    let mut aug: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            let mut row = a[i].clone();
            row.extend(b.iter().map(|col| col[i].clone()));
            row
        })
        .collect();

    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !aug[r][col].is_zero())
            .ok_or_else(|| Error::Invalid("singular linear system".into()))?;
        aug.swap(col, pivot);
        let inv = aug[col][col].recip();
        for x in aug[col][col..].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !aug[r][col].is_zero() {
                let factor = std::mem::replace(&mut aug[r][col], Q::zero());
                let (head, tail) = aug.split_at_mut(col.max(r));
                let (src, dst) = if col < r {
                    (&head[col], &mut tail[0])
                } else {
                    (&tail[0], &mut head[r])
                };
                for (d, s) in dst[col + 1..].iter_mut().zip(&src[col + 1..]) {
                    if !s.is_zero() {
                        *d -= &factor * s;
                    }
                }
            }
        }
    }

    Ok((0..k)
        .map(|j| (0..n).map(|i| aug[i][n + j].clone()).collect())
        .collect())
}

/// Solves `(I - Q) X = B` where `Q[i][j]` is the weight of the move `i -> j`.
/// `B` is a list of right-hand-side columns.
pub fn solve_i_minus_q(q: &Matrix, b: &[Vec<Q>]) -> Result<Vec<Vec<Q>>> {
    let n = q.len();
    if let Some(order) = off_diagonal_topo_order(q) {
        // Back-substitution: x_i = (b_i + sum_{j != i} q_ij x_j) / (1 - q_ii).
        let mut out = vec![vec![Q::zero(); n]; b.len()];
        for (col, rhs) in b.iter().enumerate() {
            for &i in order.iter().rev() {
                let mut acc = rhs[i].clone();
                for (j, w) in q[i].iter().enumerate() {
                    if j != i && !w.is_zero() {
                        acc += w * &out[col][j];
                    }
                }
                let diag = Q::one() - &q[i][i];
                if diag.is_zero() {
                    return Err(Error::Invalid(
                        "self-loop with probability 1; state never leaves".into(),
                    ));
                }
                out[col][i] = acc / diag;
            }
        }
        return Ok(out);
    }
    let mut a = identity(n);
    for (i, row) in a.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x -= &q[i][j];
        }
    }
    gauss_solve(&a, b)
}

/// Topological order of the off-diagonal support of `q`, or `None` if cyclic.
/// Successors come after their predecessors.
fn off_diagonal_topo_order(q: &Matrix) -> Option<Vec<usize>> {
    let n = q.len();
    let mut indeg = vec![0usize; n];
    for (i, row) in q.iter().enumerate() {
        for (j, w) in row.iter().enumerate() {
            if i != j && !w.is_zero() {
                indeg[j] += 1;
            }
        }
    }
    let mut stack: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(i) = stack.pop() {
        order.push(i);
        for (j, w) in q[i].iter().enumerate() {
            if i != j && !w.is_zero() {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    stack.push(j);
                }
            }
        }
    }
    (order.len() == n).then_some(order)
}

/// Basis of the right nullspace of `a` (columns `v` with `a v = 0`).
pub fn nullspace(a: &Matrix) -> Vec<Vec<Q>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Matrix = a.to_vec();
    let mut pivot_of_col = vec![None; cols];
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][col].recip();
        for x in m[rank].iter_mut() {
            *x *= &inv;
        }
        for r in 0..rows {
            if r != rank && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                let pivot_row = m[rank].clone();
                for (x, pv) in m[r].iter_mut().zip(&pivot_row) {
                    *x -= &factor * pv;
                }
            }
        }
        pivot_of_col[col] = Some(rank);
        rank += 1;
    }

    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![Q::zero(); cols];
        v[free] = Q::one();
        for (col, pivot) in pivot_of_col.iter().enumerate() {
            if let Some(r) = pivot {
                v[col] = -m[*r][free].clone();
            }
        }
        basis.push(v);
    }
    basis
}
