//! Polymatroid rank vectors and information measures.

use std::fmt;
use std::ops::{Add, Sub};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::functional::LinearFunctional;
use crate::ground::{GroundSet, Subset};
use crate::num::{rat, Rational};
use crate::shannon::{shannon_instances, ShannonInstance};

/// A set function over the non-empty subsets of a ground set, with f(∅)=0.
pub trait SetFunction {
    type Value: Clone + Zero + Add<Output = Self::Value> + Sub<Output = Self::Value>;

    fn ground(&self) -> &GroundSet;
    /// Value on a subset; zero on the empty set.
    fn at(&self, s: Subset) -> Self::Value;

    /// f(A‖B) = f(AB) − f(B)
    fn cond(&self, a: Subset, b: Subset) -> Self::Value {
        self.at(a | b) - self.at(b)
    }

    /// f(A,B) = f(A) + f(B) − f(AB)
    fn mutual(&self, a: Subset, b: Subset) -> Self::Value {
        self.at(a) + self.at(b) - self.at(a | b)
    }

    /// f(A,B‖C) = f(AC) + f(BC) − f(C) − f(ABC)
    fn cond_mutual(&self, a: Subset, b: Subset, c: Subset) -> Self::Value {
        self.at(a | c) + self.at(b | c) - self.at(c) - self.at(a | b | c)
    }

    /// Ingleton expression with singletons a,b,c,d.
    fn ingleton(&self, a: usize, b: usize, c: usize, d: usize) -> Self::Value {
        let s = Subset::singleton;
        self.cond_mutual(s(a), s(b), s(c)) + self.cond_mutual(s(a), s(b), s(d))
            + self.mutual(s(c), s(d))
            - self.mutual(s(a), s(b))
    }
}

/// Dense rational rank vector indexed by non-empty subsets.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polymatroid {
    ground: GroundSet,
    rank: Vec<Rational>,
}

impl Polymatroid {
    pub fn new(ground: GroundSet, rank: Vec<Rational>) -> Result<Polymatroid> {
        if rank.len() != ground.dim() {
            return Err(Error::Invalid(format!(
                "rank vector has {} entries, expected {}",
                rank.len(),
                ground.dim()
            )));
        }
        Ok(Polymatroid { ground, rank })
    }

    pub fn from_fn<F: FnMut(Subset) -> Rational>(ground: GroundSet, mut f: F) -> Polymatroid {
        let rank = ground.nonempty_subsets().map(&mut f).collect();
        Polymatroid { ground, rank }
    }

    pub fn from_ints(ground: GroundSet, ranks: &[i64]) -> Result<Polymatroid> {
        Polymatroid::new(ground, ranks.iter().map(|&x| rat(x)).collect())
    }

    pub fn zero(ground: GroundSet) -> Polymatroid {
        let rank = vec![Rational::zero(); ground.dim()];
        Polymatroid { ground, rank }
    }

    pub fn ranks(&self) -> &[Rational] {
        &self.rank
    }

    pub fn rank(&self, s: Subset) -> Rational {
        self.at(s)
    }

    /// Rank by subset name, e.g. `"acd"`.
    pub fn rank_of(&self, name: &str) -> Result<Rational> {
        Ok(self.at(self.ground.parse_subset(name)?))
    }

    pub fn set(&mut self, s: Subset, v: Rational) {
        self.rank[s.index()] = v;
    }

    pub fn len(&self) -> usize {
        self.ground.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ground.is_empty()
    }

    /// First violated basic inequality, if any.
    pub fn violated_shannon(&self) -> Option<ShannonInstance> {
        let n = self.ground.len();
        shannon_instances(n).into_iter().find(|s| s.eval(self).is_negative())
    }

    pub fn is_polymatroid(&self) -> bool {
        if self.ground.len() < 2 {
            return self.rank.iter().all(|x| !x.is_negative());
        }
        self.violated_shannon().is_none()
    }

    pub fn check_polymatroid(&self) -> Result<()> {
        match self.violated_shannon() {
            Some(s) if self.ground.len() >= 2 => Err(Error::NotPolymatroid(format!(
                "violates {}",
                s.tag(&self.ground)
            ))),
            _ if self.ground.len() < 2 && self.rank.iter().any(|x| x.is_negative()) => {
                Err(Error::NotPolymatroid("negative rank".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn is_integer(&self) -> bool {
        self.rank.iter().all(|x| x.is_integer())
    }

    /// A matroid: integer polymatroid with singleton ranks at most one.
    pub fn is_matroid(&self) -> bool {
        self.is_integer()
            && self.is_polymatroid()
            && (0..self.len()).all(|i| self.at(Subset::singleton(i)) <= rat(1))
    }

    pub fn dot(&self, e: &LinearFunctional) -> Result<Rational> {
        if e.ground() != &self.ground {
            return Err(Error::GroundMismatch);
        }
        Ok(e.coeffs().map(|(s, c)| c * &self.rank[s.index()]).sum())
    }

    /// Copy with a different labelling of the same size.
    pub fn relabeled(&self, ground: GroundSet) -> Result<Polymatroid> {
        if ground.len() != self.ground.len() {
            return Err(Error::GroundMismatch);
        }
        Polymatroid::new(ground, self.rank.clone())
    }

    pub fn into_parts(self) -> (GroundSet, Vec<Rational>) {
        (self.ground, self.rank)
    }
}

impl SetFunction for Polymatroid {
    type Value = Rational;

    fn ground(&self) -> &GroundSet {
        &self.ground
    }

    fn at(&self, s: Subset) -> Rational {
        if s.is_empty() {
            Rational::zero()
        } else {
            self.rank[s.index()].clone()
        }
    }
}

impl fmt::Display for Polymatroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::write_polymatroid(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shannon::{r_vector, u_vector, vamos_vector};

    #[test]
    fn measures_on_r_n() {
        let g = GroundSet::letters(2).unwrap();
        let r = r_vector(&g, g.full()).unwrap();
        assert_eq!(r.mutual(Subset(1), Subset(2)), rat(1));
    }

    #[test]
    fn polymatroid_checks() {
        let g = GroundSet::letters(3).unwrap();
        assert!(u_vector(&g).unwrap().is_polymatroid());
        let g2 = GroundSet::letters(2).unwrap();
        let bad = Polymatroid::from_ints(g2, &[1, 0, 0]).unwrap();
        let w = bad.violated_shannon().unwrap();
        assert!(matches!(w, ShannonInstance::Monotone { .. }));
        let g4 = GroundSet::letters(4).unwrap();
        assert!(vamos_vector(&g4, Subset(0b1100)).unwrap().is_polymatroid());
    }
}
