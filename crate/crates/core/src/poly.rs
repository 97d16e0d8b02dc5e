//! Sparse multivariate polynomials over an exact ring.
//!
//! This is the substrate of the symbolic identity engine: an identity such as
//! flexibility holds for all elements exactly when its defect polynomial in
//! generic coordinates is the zero polynomial. Terms are kept canonical (no
//! zero coefficients, variables sorted), so the zero test is an emptiness
//! test.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::ring::{Ring, Scalar};

/// A sparse multivariate polynomial with exact coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiPoly {
    ring: Ring,
    /// Sorted variable names; exponent vectors are aligned to this list.
    vars: Vec<String>,
    terms: BTreeMap<Vec<u16>, Scalar>,
}

impl MultiPoly {
    pub fn zero(ring: &Ring) -> MultiPoly {
        MultiPoly { ring: ring.clone(), vars: Vec::new(), terms: BTreeMap::new() }
    }

    pub fn constant(value: &Scalar) -> MultiPoly {
        let mut terms = BTreeMap::new();
        if !value.is_zero() {
            terms.insert(Vec::new(), value.clone());
        }
        MultiPoly { ring: value.ring().clone(), vars: Vec::new(), terms }
    }

    pub fn variable(ring: &Ring, name: &str) -> MultiPoly {
        let mut terms = BTreeMap::new();
        terms.insert(vec![1], ring.one());
        MultiPoly { ring: ring.clone(), vars: vec![name.to_string()], terms }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn variables(&self) -> &[String] {
        &self.vars
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Iterates terms as (exponent-by-variable map, coefficient).
    pub fn terms(&self) -> impl Iterator<Item = (BTreeMap<&str, u16>, &Scalar)> {
        self.terms.iter().map(move |(exps, coeff)| {
            let named = self
                .vars
                .iter()
                .zip(exps.iter())
                .filter(|(_, e)| **e > 0)
                .map(|(v, e)| (v.as_str(), *e))
                .collect();
            (named, coeff)
        })
    }

    fn assert_same_ring(&self, other: &Ring) {
        assert!(self.ring == *other, "polynomial ring mismatch: {} vs {}", self.ring, other);
    }

    /// Drops variables that no term uses, so representations are canonical
    /// and equality is structural.
    fn prune(mut self) -> MultiPoly {
        let used: Vec<bool> = (0..self.vars.len())
            .map(|i| self.terms.keys().any(|e| e[i] > 0))
            .collect();
        if used.iter().all(|u| *u) {
            return self;
        }
        let vars: Vec<String> = self
            .vars
            .iter()
            .zip(used.iter())
            .filter(|(_, u)| **u)
            .map(|(v, _)| v.clone())
            .collect();
        let terms = std::mem::take(&mut self.terms)
            .into_iter()
            .map(|(exps, coeff)| {
                let e: Vec<u16> = exps
                    .iter()
                    .zip(used.iter())
                    .filter(|(_, u)| **u)
                    .map(|(x, _)| *x)
                    .collect();
                (e, coeff)
            })
            .collect();
        MultiPoly { ring: self.ring.clone(), vars, terms }
    }

    /// Remaps both polynomials onto the union of their variable lists.
    fn aligned(&self, other: &MultiPoly) -> (MultiPoly, MultiPoly) {
        if self.vars == other.vars {
            return (self.clone(), other.clone());
        }
        let mut union: Vec<String> = self.vars.clone();
        for v in &other.vars {
            if !union.contains(v) {
                union.push(v.clone());
            }
        }
        union.sort();
        (self.remap(&union), other.remap(&union))
    }

    fn remap(&self, vars: &[String]) -> MultiPoly {
        if self.vars == vars {
            return self.clone();
        }
        let positions: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|u| u == v).expect("remap target must cover vars"))
            .collect();
        let mut terms = BTreeMap::new();
        for (exps, coeff) in &self.terms {
            let mut new_exps = vec![0u16; vars.len()];
            for (i, e) in exps.iter().enumerate() {
                new_exps[positions[i]] = *e;
            }
            terms.insert(new_exps, coeff.clone());
        }
        MultiPoly { ring: self.ring.clone(), vars: vars.to_vec(), terms }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        self.assert_same_ring(&other.ring);
        let (mut a, b) = self.aligned(other);
        for (exps, coeff) in b.terms {
            match a.terms.get_mut(&exps) {
                Some(existing) => {
                    let sum = existing.add(&coeff);
                    if sum.is_zero() {
                        a.terms.remove(&exps);
                    } else {
                        *existing = sum;
                    }
                }
                None => {
                    a.terms.insert(exps, coeff);
                }
            }
        }
        a.prune()
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MultiPoly {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect();
        MultiPoly { ring: self.ring.clone(), vars: self.vars.clone(), terms }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        self.assert_same_ring(&other.ring);
        let (a, b) = self.aligned(other);
        let mut terms: BTreeMap<Vec<u16>, Scalar> = BTreeMap::new();
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let exps: Vec<u16> = ea.iter().zip(eb.iter()).map(|(x, y)| x + y).collect();
                let prod = ca.mul(cb);
                if prod.is_zero() {
                    continue;
                }
                match terms.get_mut(&exps) {
                    Some(existing) => {
                        let sum = existing.add(&prod);
                        if sum.is_zero() {
                            terms.remove(&exps);
                        } else {
                            *existing = sum;
                        }
                    }
                    None => {
                        terms.insert(exps, prod);
                    }
                }
            }
        }
        MultiPoly { ring: a.ring, vars: a.vars, terms }.prune()
    }

    pub fn scale(&self, s: &Scalar) -> MultiPoly {
        self.assert_same_ring(s.ring());
        if s.is_zero() {
            return MultiPoly::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), c.mul(s))).collect();
        MultiPoly { ring: self.ring.clone(), vars: self.vars.clone(), terms }
    }

    /// Evaluates at the given assignment; unassigned variables default to 0.
    pub fn eval(&self, assignment: &BTreeMap<String, Scalar>) -> Scalar {
        let mut acc = self.ring.zero();
        'term: for (exps, coeff) in &self.terms {
            let mut value = coeff.clone();
            for (var, e) in self.vars.iter().zip(exps.iter()) {
                if *e == 0 {
                    continue;
                }
                let x = match assignment.get(var) {
                    Some(x) => x.clone(),
                    None => continue 'term,
                };
                for _ in 0..*e {
                    value = value.mul(&x);
                }
                if value.is_zero() {
                    continue 'term;
                }
            }
            acc = acc.add(&value);
        }
        acc
    }

    /// Partial evaluation of a single variable.
    pub fn eval_var(&self, var: &str, value: &Scalar) -> MultiPoly {
        let Some(pos) = self.vars.iter().position(|v| v == var) else {
            return self.clone();
        };
        let mut out = MultiPoly {
            ring: self.ring.clone(),
            vars: self.vars.clone(),
            terms: BTreeMap::new(),
        };
        for (exps, coeff) in &self.terms {
            let mut c = coeff.clone();
            for _ in 0..exps[pos] {
                c = c.mul(value);
            }
            if c.is_zero() {
                continue;
            }
            let mut e = exps.clone();
            e[pos] = 0;
            match out.terms.get_mut(&e) {
                Some(existing) => {
                    let sum = existing.add(&c);
                    if sum.is_zero() {
                        out.terms.remove(&e);
                    } else {
                        *existing = sum;
                    }
                }
                None => {
                    out.terms.insert(e, c);
                }
            }
        }
        out.prune()
    }

    /// The lexicographically first term: (variable, exponent) pairs and its
    /// coefficient. `None` for the zero polynomial.
    pub fn leading_term(&self) -> Option<(Vec<(String, u16)>, Scalar)> {
        self.terms.iter().next().map(|(exps, coeff)| {
            let named = self
                .vars
                .iter()
                .zip(exps.iter())
                .filter(|(_, e)| **e > 0)
                .map(|(v, e)| (v.clone(), *e))
                .collect();
            (named, coeff.clone())
        })
    }

    /// Coefficient of the monomial given as (variable, exponent) pairs.
    pub fn coefficient(&self, monomial: &[(&str, u16)]) -> Scalar {
        let mut exps = vec![0u16; self.vars.len()];
        for (var, e) in monomial {
            match self.vars.iter().position(|v| v == var) {
                Some(pos) => exps[pos] = *e,
                None => {
                    if *e > 0 {
                        return self.ring.zero();
                    }
                }
            }
        }
        self.terms.get(&exps).cloned().unwrap_or_else(|| self.ring.zero())
    }

    /// Total degree monomial-wise maximum; 0 for constants and zero.
    pub fn total_degree(&self) -> u16 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn checked_add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_ring(other.ring())?;
        Ok(self.add(other))
    }

    pub fn checked_mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_ring(other.ring())?;
        Ok(self.mul(other))
    }

    pub fn checked_scale(&self, s: &Scalar) -> Result<MultiPoly> {
        self.check_ring(s.ring())?;
        Ok(self.scale(s))
    }

    fn check_ring(&self, other: &Ring) -> Result<()> {
        if self.ring == *other {
            Ok(())
        } else {
            Err(Error::RingMismatch(self.ring.to_string(), other.to_string()))
        }
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exps, coeff) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{coeff}")?;
            for (var, e) in self.vars.iter().zip(exps.iter()) {
                match e {
                    0 => {}
                    1 => write!(f, "*{var}")?,
                    _ => write!(f, "*{var}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(name: &str) -> MultiPoly {
        MultiPoly::variable(&Ring::Rationals, name)
    }

    #[test]
    fn difference_of_squares() {
        let (x, y) = (var("x"), var("y"));
        let prod = x.add(&y).mul(&x.sub(&y));
        let expected = x.mul(&x).sub(&y.mul(&y));
        assert_eq!(prod, expected);
    }

    #[test]
    fn cancellation_gives_zero() {
        let x = var("x");
        assert!(x.add(&x.neg()).is_zero());
        assert!(x.sub(&x).is_zero());
    }

    #[test]
    fn modular_coefficients_fold() {
        // (x+3)(x+4) = x^2 + 7x + 12 = x^2 + 5 over F_7
        let f7 = Ring::prime_field(7).unwrap();
        let x = MultiPoly::variable(&f7, "x");
        let p = x.add(&MultiPoly::constant(&f7.from_i64(3)));
        let q = x.add(&MultiPoly::constant(&f7.from_i64(4)));
        let prod = p.mul(&q);
        let expected = x.mul(&x).add(&MultiPoly::constant(&f7.from_i64(5)));
        assert_eq!(prod, expected);
    }

    #[test]
    fn formal_not_functional_zero() {
        // x^2 over F_3 vanishes nowhere... is nonzero as a formal polynomial
        // even where the induced function would collapse.
        let f3 = Ring::prime_field(3).unwrap();
        let x = MultiPoly::variable(&f3, "x");
        assert!(!x.mul(&x).is_zero());
    }

    #[test]
    fn disjoint_variable_merge() {
        let x = var("x");
        let y = var("y");
        let p = x.mul(&y);
        assert_eq!(p.variables(), &["x".to_string(), "y".to_string()]);
        assert_eq!(p.coefficient(&[("x", 1), ("y", 1)]), Ring::Rationals.one());
    }

    #[test]
    fn eval_matches_structure() {
        let (x, y) = (var("x"), var("y"));
        let p = x.mul(&x).add(&y.scale(&Ring::Rationals.from_i64(3)));
        let mut at = BTreeMap::new();
        at.insert("x".to_string(), Ring::Rationals.from_i64(2));
        at.insert("y".to_string(), Ring::Rationals.from_i64(-1));
        assert_eq!(p.eval(&at), Ring::Rationals.from_i64(1));
    }

    #[test]
    fn ring_mismatch_checked() {
        let x = var("x");
        let f7 = Ring::prime_field(7).unwrap();
        let y = MultiPoly::variable(&f7, "y");
        assert!(x.checked_add(&y).is_err());
    }
}
