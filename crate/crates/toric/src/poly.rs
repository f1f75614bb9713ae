//! Multivariate polynomials with exact rational coefficients.
//!
//! Used three ways: monomial bookkeeping for graded ring presentations, the
//! integrands of the fibered intersection identity, and exact integration
//! over simplices. Monomials are exponent vectors ordered graded-lex.

use std::collections::BTreeMap;

use num::{One, Zero};

use crate::linalg::Rat;

/// An exponent vector. Ordering is graded-lexicographic: total degree first,
/// then lexicographic with the first variable heaviest.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(num_vars: usize) -> Self {
        Monomial(vec![0; num_vars])
    }

    pub fn variable(num_vars: usize, index: usize) -> Self {
        let mut e = vec![0; num_vars];
        e[index] = 1;
        Monomial(e)
    }

    pub fn squarefree(num_vars: usize, support: &[usize]) -> Self {
        let mut e = vec![0; num_vars];
        for &i in support {
            e[i] = 1;
        }
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// All monomials of the given total degree in `num_vars` variables,
    /// listed in descending graded-lex order.
    pub fn all_of_degree(num_vars: usize, degree: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        if num_vars == 0 {
            if degree == 0 {
                out.push(Monomial(vec![]));
            }
            return out;
        }
        let mut current = vec![0u32; num_vars];
        fn rec(pos: usize, remaining: u32, current: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if pos + 1 == current.len() {
                current[pos] = remaining;
                out.push(Monomial(current.clone()));
                current[pos] = 0;
                return;
            }
            for e in (0..=remaining).rev() {
                current[pos] = e;
                rec(pos + 1, remaining - e, current, out);
            }
            current[pos] = 0;
        }
        rec(0, degree, &mut current, &mut out);
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A finitely supported monomial-coefficient map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    num_vars: usize,
    terms: BTreeMap<Monomial, Rat>,
}

impl Polynomial {
    pub fn zero(num_vars: usize) -> Self {
        Polynomial {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, c: Rat) -> Self {
        let mut p = Polynomial::zero(num_vars);
        p.add_term(Monomial::one(num_vars), c);
        p
    }

    pub fn one(num_vars: usize) -> Self {
        Polynomial::constant(num_vars, Rat::one())
    }

    pub fn monomial(num_vars: usize, m: Monomial, c: Rat) -> Self {
        let mut p = Polynomial::zero(num_vars);
        p.add_term(m, c);
        p
    }

    /// The linear form sum_i coeffs[i] * x_i.
    pub fn linear_form(coeffs: &[Rat]) -> Self {
        let mut p = Polynomial::zero(coeffs.len());
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::variable(coeffs.len(), i), c.clone());
        }
        p
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        debug_assert_eq!(m.0.len(), self.num_vars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.num_vars, other.num_vars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.num_vars);
        }
        Polynomial {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v * c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.num_vars, other.num_vars);
        let mut out = Polynomial::zero(self.num_vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, exponent: u32) -> Polynomial {
        let mut out = Polynomial::one(self.num_vars);
        for _ in 0..exponent {
            out = out.mul(self);
        }
        out
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        debug_assert_eq!(point.len(), self.num_vars);
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (e, x) in m.0.iter().zip(point) {
                for _ in 0..*e {
                    term *= x;
                }
            }
            acc += term;
        }
        acc
    }

    /// Substitute each variable x_i by the polynomial `images[i]` (all in a
    /// common target variable set).
    pub fn substitute(&self, images: &[Polynomial], target_vars: usize) -> Polynomial {
        debug_assert_eq!(images.len(), self.num_vars);
        let mut out = Polynomial::zero(target_vars);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(target_vars, c.clone());
            for (i, e) in m.0.iter().enumerate() {
                if *e > 0 {
                    term = term.mul(&images[i].pow(*e));
                }
            }
            out = out.add(&term);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, rat_frac};

    #[test]
    fn monomial_order_is_graded_lex() {
        let m = |e: &[u32]| Monomial(e.to_vec());
        assert!(m(&[2, 0]) > m(&[1, 1]));
        assert!(m(&[1, 1]) > m(&[0, 2]));
        assert!(m(&[0, 2]) > m(&[1, 0]));
        let all = Monomial::all_of_degree(2, 2);
        assert_eq!(all, vec![m(&[2, 0]), m(&[1, 1]), m(&[0, 2])]);
        assert_eq!(Monomial::all_of_degree(3, 2).len(), 6);
        assert_eq!(Monomial::all_of_degree(0, 0), vec![Monomial(vec![])]);
        assert!(Monomial::all_of_degree(0, 1).is_empty());
    }

    #[test]
    fn arithmetic_and_substitution() {
        // (x + y)^2 = x^2 + 2xy + y^2
        let p = Polynomial::linear_form(&[rat(1), rat(1)]).pow(2);
        assert_eq!(p.coefficient(&Monomial(vec![2, 0])), rat(1));
        assert_eq!(p.coefficient(&Monomial(vec![1, 1])), rat(2));
        assert_eq!(p.coefficient(&Monomial(vec![0, 2])), rat(1));
        assert_eq!(p.eval(&[rat_frac(1, 2), rat_frac(1, 2)]), rat(1));

        // Substitute x = t, y = 1 - t: (x + y)^2 = 1 identically.
        let t = Polynomial::linear_form(&[rat(1)]);
        let one_minus_t = Polynomial::constant(1, rat(1)).add(&t.scale(&rat(-1)));
        let q = p.substitute(&[t, one_minus_t], 1);
        assert_eq!(q, Polynomial::one(1));
    }
}
