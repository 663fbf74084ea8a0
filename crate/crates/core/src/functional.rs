//! Linear functionals over rank vectors, read as inequalities `e·x ≥ 0`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::ground::{GroundSet, Subset};
use crate::num::{primitive_from_rationals, Rational};
use crate::perm::Permutation;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearFunctional {
    ground: GroundSet,
    coeff: BTreeMap<Subset, Rational>,
}

impl LinearFunctional {
    pub fn zero(ground: GroundSet) -> LinearFunctional {
        LinearFunctional {
            ground,
            coeff: BTreeMap::new(),
        }
    }

    pub fn from_terms<I: IntoIterator<Item = (Subset, Rational)>>(
        ground: GroundSet,
        terms: I,
    ) -> LinearFunctional {
        let mut e = LinearFunctional::zero(ground);
        for (s, c) in terms {
            e.add_term(s, c);
        }
        e
    }

    /// Build from a dense coefficient vector (index = mask − 1).
    pub fn from_dense(ground: GroundSet, v: &[Rational]) -> Result<LinearFunctional> {
        if v.len() != ground.dim() {
            return Err(Error::Invalid("dense functional has wrong length".into()));
        }
        Ok(LinearFunctional::from_terms(
            ground,
            v.iter()
                .enumerate()
                .map(|(i, c)| (Subset::from_index(i), c.clone())),
        ))
    }

    pub fn from_ints(ground: GroundSet, v: &[BigInt]) -> Result<LinearFunctional> {
        let r: Vec<Rational> = v.iter().map(|x| Rational::from_integer(x.clone())).collect();
        LinearFunctional::from_dense(ground, &r)
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    /// Add `c·x(s)`; terms on the empty set vanish.
    pub fn add_term(&mut self, s: Subset, c: Rational) {
        if s.is_empty() || c.is_zero() {
            return;
        }
        let e = self.coeff.entry(s).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.coeff.remove(&s);
        }
    }

    pub fn coeff(&self, s: Subset) -> Rational {
        self.coeff.get(&s).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (Subset, &Rational)> {
        self.coeff.iter().map(|(s, c)| (*s, c))
    }

    pub fn support_len(&self) -> usize {
        self.coeff.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_empty()
    }

    pub fn dense(&self) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.ground.dim()];
        for (s, c) in &self.coeff {
            v[s.index()] = c.clone();
        }
        v
    }

    pub fn add(&self, other: &LinearFunctional) -> Result<LinearFunctional> {
        if self.ground != other.ground {
            return Err(Error::GroundMismatch);
        }
        let mut e = self.clone();
        for (s, c) in &other.coeff {
            e.add_term(*s, c.clone());
        }
        Ok(e)
    }

    pub fn sub(&self, other: &LinearFunctional) -> Result<LinearFunctional> {
        self.add(&other.scaled(&-Rational::from_integer(1.into())))
    }

    pub fn scaled(&self, k: &Rational) -> LinearFunctional {
        LinearFunctional::from_terms(
            self.ground.clone(),
            self.coeff.iter().map(|(s, c)| (*s, c * k)),
        )
    }

    pub fn neg(&self) -> LinearFunctional {
        self.scaled(&Rational::from_integer((-1).into()))
    }

    /// Primitive integer coefficient vector with the user's sign kept.
    pub fn primitive(&self) -> LinearFunctional {
        let ints = primitive_from_rationals(&self.dense());
        LinearFunctional::from_ints(self.ground.clone(), &ints).expect("same length")
    }

    /// Dense primitive integer vector, used as a dedup key for rays (the
    /// sign of an inequality is meaningful, so no reorientation here).
    pub fn key(&self) -> Vec<BigInt> {
        primitive_from_rationals(&self.dense())
    }

    /// True if `self = λ·other` for some λ > 0.
    pub fn is_positive_multiple_of(&self, other: &LinearFunctional) -> bool {
        self.ground == other.ground && !self.is_zero() && self.key() == other.key()
    }

    pub fn apply_permutation(&self, sigma: &Permutation) -> Result<LinearFunctional> {
        if sigma.len() != self.ground.len() {
            return Err(Error::Invalid("permutation size differs from ground".into()));
        }
        Ok(LinearFunctional::from_terms(
            self.ground.clone(),
            self.coeff.iter().map(|(s, c)| (sigma.apply(*s), c.clone())),
        ))
    }

    /// Value on the r-vector of element `i`: sum of coefficients over subsets containing `i`.
    pub fn dot_r(&self, i: usize) -> Rational {
        self.coeff
            .iter()
            .filter(|(s, _)| s.contains(i))
            .map(|(_, c)| c.clone())
            .sum()
    }

    pub fn is_balanced(&self) -> bool {
        (0..self.ground.len()).all(|i| self.dot_r(i).is_zero())
    }

    /// Same coefficients over another ground set of equal size.
    pub fn relabeled(&self, ground: GroundSet) -> Result<LinearFunctional> {
        if ground.len() != self.ground.len() {
            return Err(Error::GroundMismatch);
        }
        Ok(LinearFunctional {
            ground,
            coeff: self.coeff.clone(),
        })
    }

    /// Human-readable `+2 ab -1 abc` form.
    pub fn pretty(&self) -> String {
        if self.coeff.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (s, c) in &self.coeff {
            let sign = if c.is_negative() { '-' } else { '+' };
            out.push_str(&format!("{sign}{} {} ", c.abs(), self.ground.display(*s)));
        }
        out.trim_end().to_string()
    }
}

impl fmt::Display for LinearFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::write_functional(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{rat, ratio};

    #[test]
    fn add_cancels() {
        let g = GroundSet::letters(2).unwrap();
        let e = LinearFunctional::from_terms(g.clone(), [(Subset(3), rat(1)), (Subset(2), rat(-1))]);
        let z = e.sub(&e).unwrap();
        assert!(z.is_zero());
        assert_eq!(e.coeff(Subset(3)), rat(1));
    }

    #[test]
    fn primitive_keeps_sign() {
        let g = GroundSet::letters(2).unwrap();
        let e = LinearFunctional::from_terms(
            g,
            [(Subset(1), ratio(-1, 2)), (Subset(3), ratio(3, 4))],
        );
        let p = e.primitive();
        assert_eq!(p.coeff(Subset(1)), rat(-2));
        assert_eq!(p.coeff(Subset(3)), rat(3));
        assert!(e.is_positive_multiple_of(&p));
        assert!(!e.is_positive_multiple_of(&p.neg()));
    }
}
