//! Multivariate formal power series over exact rationals, truncated at a
//! total degree. One variable per alphabet letter; the coefficient of a
//! monomial is the probability mass of the words with that letter count, so
//! grading by total degree recovers the distribution of word length.

use crate::error::{Error, Result};
use crate::ratio::Q;
use num::traits::{One, Zero};
use std::collections::BTreeMap;

pub const DEFAULT_SERIES_DEGREE: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    num_vars: usize,
    cap: usize,
    /// Exponent vector -> coefficient; zero coefficients are not stored.
    terms: BTreeMap<Vec<u32>, Q>,
}

fn total_degree(exp: &[u32]) -> usize {
    exp.iter().map(|&e| e as usize).sum()
}

impl TruncatedSeries {
    pub fn zero(num_vars: usize, cap: usize) -> Self {
        TruncatedSeries {
            num_vars,
            cap,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, cap: usize, c: Q) -> Self {
        let mut s = Self::zero(num_vars, cap);
        if !c.is_zero() {
            s.terms.insert(vec![0; num_vars], c);
        }
        s
    }

    pub fn one(num_vars: usize, cap: usize) -> Self {
        Self::constant(num_vars, cap, Q::one())
    }

    /// The series of a single letter.
    pub fn variable(num_vars: usize, cap: usize, v: usize) -> Self {
        assert!(v < num_vars, "variable {v} out of range");
        let mut s = Self::zero(num_vars, cap);
        if cap >= 1 {
            let mut exp = vec![0u32; num_vars];
            exp[v] = 1;
            s.terms.insert(exp, Q::one());
        }
        s
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, exp: &[u32]) -> Q {
        self.terms.get(exp).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant_term(&self) -> Q {
        self.coefficient(&vec![0; self.num_vars])
    }

    /// Smallest total degree with a nonzero coefficient.
    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().map(|e| total_degree(e)).min()
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.num_vars != other.num_vars || self.cap != other.cap {
            return Err(Error::Invalid(format!(
                "series mismatch: {} vars at degree {} vs {} vars at degree {}",
                self.num_vars, self.cap, other.num_vars, other.cap
            )));
        }
        Ok(())
    }

    fn insert_term(&mut self, exp: Vec<u32>, c: Q) {
        if total_degree(&exp) > self.cap || c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (exp, c) in &other.terms {
            out.insert_term(exp.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (exp, c) in &other.terms {
            out.insert_term(exp.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.num_vars, self.cap);
        }
        let mut out = self.clone();
        for coeff in out.terms.values_mut() {
            *coeff *= c;
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.num_vars, self.cap);
        for (ea, ca) in &self.terms {
            let da = total_degree(ea);
            for (eb, cb) in &other.terms {
                if da + total_degree(eb) > self.cap {
                    continue;
                }
                let exp: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.insert_term(exp, ca * cb);
            }
        }
        Ok(out)
    }

    /// `1 / (1 - self)`, defined when the constant term is zero. Built layer
    /// by layer from `g_d = sum_k u_k g_{d-k}`.
    pub fn geometric(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::Invalid(
                "geometric series needs a zero constant term".into(),
            ));
        }
        let mut u_layers: Vec<Vec<(&Vec<u32>, &Q)>> = vec![Vec::new(); self.cap + 1];
        for (exp, c) in &self.terms {
            u_layers[total_degree(exp)].push((exp, c));
        }
        let mut g_layers: Vec<Vec<(Vec<u32>, Q)>> = vec![Vec::new(); self.cap + 1];
        g_layers[0].push((vec![0; self.num_vars], Q::one()));
        let mut out = Self::one(self.num_vars, self.cap);
        for d in 1..=self.cap {
            let mut layer: BTreeMap<Vec<u32>, Q> = BTreeMap::new();
            for k in 1..=d {
                for (eu, cu) in &u_layers[k] {
                    for (eg, cg) in &g_layers[d - k] {
                        let exp: Vec<u32> =
                            eu.iter().zip(eg).map(|(x, y)| x + y).collect();
                        let entry = layer.entry(exp).or_insert_with(Q::zero);
                        *entry += *cu * cg;
                    }
                }
            }
            for (exp, c) in layer {
                if c.is_zero() {
                    continue;
                }
                g_layers[d].push((exp.clone(), c.clone()));
                out.insert_term(exp, c);
            }
        }
        Ok(out)
    }

    /// Weights every monomial by its total degree; applied to a mass series
    /// graded by word length, evaluation yields the length expectation.
    pub fn cauchy_euler(&self) -> Self {
        let mut out = Self::zero(self.num_vars, self.cap);
        for (exp, c) in &self.terms {
            let d = total_degree(exp);
            if d == 0 {
                continue;
            }
            out.terms
                .insert(exp.clone(), c * Q::from_integer(d.into()));
        }
        out
    }

    pub fn evaluate(&self, x: &[Q]) -> Q {
        assert_eq!(x.len(), self.num_vars, "evaluation point arity");
        let mut acc = Q::zero();
        for (exp, c) in &self.terms {
            let mut term = c.clone();
            for (v, &e) in exp.iter().enumerate() {
                for _ in 0..e {
                    term *= &x[v];
                }
            }
            acc += term;
        }
        acc
    }

    /// Evaluation split by total degree: entry `t` is the sum of the degree-t
    /// monomials at `x`.
    pub fn evaluate_by_degree(&self, x: &[Q]) -> Vec<Q> {
        assert_eq!(x.len(), self.num_vars, "evaluation point arity");
        let mut acc = vec![Q::zero(); self.cap + 1];
        for (exp, c) in &self.terms {
            let mut term = c.clone();
            for (v, &e) in exp.iter().enumerate() {
                for _ in 0..e {
                    term *= &x[v];
                }
            }
            acc[total_degree(exp)] += term;
        }
        acc
    }

    /// Rendering with letter names, ordered by total degree then
    /// lexicographically, like `1/2 b + 1/4 a b + ...`.
    pub fn render(&self, labels: &[String]) -> String {
        assert_eq!(labels.len(), self.num_vars, "label arity");
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut keyed: Vec<(&Vec<u32>, &Q)> = self.terms.iter().collect();
        keyed.sort_by_key(|(exp, _)| (total_degree(exp), (*exp).clone()));
        let mut parts = Vec::with_capacity(keyed.len());
        for (exp, c) in keyed {
            let mut factors = Vec::new();
            if !c.is_one() || total_degree(exp) == 0 {
                factors.push(crate::ratio::fmt_q(c));
            }
            for (v, &e) in exp.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(labels[v].clone()),
                    _ => factors.push(format!("{}^{}", labels[v], e)),
                }
            }
            parts.push(factors.join(" "));
        }
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::{qint, qr};

    fn x(v: usize) -> TruncatedSeries {
        TruncatedSeries::variable(2, 8, v)
    }

    #[test]
    fn arithmetic_and_truncation() {
        let a = x(0);
        let b = x(1);
        let s = a.add(&b).unwrap();
        let p = s.mul(&s).unwrap();
        // (a+b)^2 = a^2 + 2ab + b^2
        assert_eq!(p.coefficient(&[2, 0]), qint(1));
        assert_eq!(p.coefficient(&[1, 1]), qint(2));
        assert_eq!(p.coefficient(&[0, 2]), qint(1));
        // Ninth power of (a+b) truncates away entirely at cap 8.
        let mut pow = TruncatedSeries::one(2, 8);
        for _ in 0..9 {
            pow = pow.mul(&s).unwrap();
        }
        assert!(pow.is_zero());
    }

    #[test]
    fn geometric_inverts_one_minus_u() {
        let u = x(0).add(&x(1).mul(&x(1)).unwrap()).unwrap();
        let g = u.geometric().unwrap();
        let check = TruncatedSeries::one(2, 8)
            .sub(&u)
            .unwrap()
            .mul(&g)
            .unwrap();
        assert_eq!(check, TruncatedSeries::one(2, 8));
        // Coefficient of a^2 b^2 in 1/(1-a-b^2): words over {a, bb} with two
        // of each letter block arranged freely: C(3,1) = 3.
        assert_eq!(g.coefficient(&[2, 2]), qint(3));
    }

    #[test]
    fn geometric_rejects_nonzero_constant_term() {
        let u = TruncatedSeries::one(2, 8);
        assert!(u.geometric().is_err());
    }

    #[test]
    fn cauchy_euler_weights_by_degree() {
        let s = x(0).add(&x(0).mul(&x(1)).unwrap()).unwrap();
        let ce = s.cauchy_euler();
        assert_eq!(ce.coefficient(&[1, 0]), qint(1));
        assert_eq!(ce.coefficient(&[1, 1]), qint(2));
    }

    #[test]
    fn degree_graded_evaluation_sums_to_full_evaluation() {
        let g = x(0).add(&x(1)).unwrap().geometric().unwrap();
        let pt = vec![qr(1, 3), qr(1, 4)];
        let by_deg = g.evaluate_by_degree(&pt);
        // 1/(1-a-b) truncated: sum of (a+b)^t for t <= 8.
        assert_eq!(by_deg[0], qint(1));
        assert_eq!(by_deg[1], qr(7, 12));
        assert_eq!(by_deg[2], qr(49, 144));
        let total: Q = by_deg.iter().cloned().sum();
        assert_eq!(total, g.evaluate(&pt));
    }

    #[test]
    fn rendering_orders_by_degree() {
        let s = x(1)
            .add(&x(0).mul(&x(0)).unwrap().scale(&qr(1, 2)))
            .unwrap();
        let out = s.render(&["a".into(), "b".into()]);
        assert_eq!(out, "b + 1/2 a^2");
    }
}
