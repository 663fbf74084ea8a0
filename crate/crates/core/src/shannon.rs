//! Basic Shannon inequalities, balancing, and standard rank vectors.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::functional::LinearFunctional;
use crate::ground::{GroundSet, Subset};
use crate::num::{rat, Rational};
use crate::poly::{Polymatroid, SetFunction};

/// One basic inequality.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum ShannonInstance {
    /// x(N) − x(N∖i) ≥ 0
    Monotone { n: usize, i: usize },
    /// x(aK) + x(bK) − x(K) − x(abK) ≥ 0
    Submodular { a: usize, b: usize, k: Subset },
}

impl ShannonInstance {
    /// Sparse terms of the functional.
    pub fn terms(&self) -> Vec<(Subset, i64)> {
        match *self {
            ShannonInstance::Monotone { n, i } => {
                let full = Subset(((1u64 << n) - 1) as u32);
                let rest = full.without(i);
                let mut t = vec![(full, 1)];
                if !rest.is_empty() {
                    t.push((rest, -1));
                }
                t
            }
            ShannonInstance::Submodular { a, b, k } => {
                let mut t = vec![(k.with(a), 1), (k.with(b), 1), (k.with(a).with(b), -1)];
                if !k.is_empty() {
                    t.push((k, -1));
                }
                t
            }
        }
    }

    pub fn functional(&self, ground: &GroundSet) -> LinearFunctional {
        LinearFunctional::from_terms(
            ground.clone(),
            self.terms().into_iter().map(|(s, c)| (s, rat(c))),
        )
    }

    pub fn eval<F: SetFunction>(&self, f: &F) -> F::Value {
        let mut pos = F::Value::zero();
        let mut neg = F::Value::zero();
        for (s, c) in self.terms() {
            if c > 0 {
                pos = pos + f.at(s);
            } else {
                neg = neg + f.at(s);
            }
        }
        pos - neg
    }

    /// Provenance tag such as `mono(a)` or `sub(a,b|cd)`.
    pub fn tag(&self, ground: &GroundSet) -> String {
        match *self {
            ShannonInstance::Monotone { i, .. } => format!("mono({})", ground.label(i)),
            ShannonInstance::Submodular { a, b, k } if k.is_empty() => {
                format!("sub({},{})", ground.label(a), ground.label(b))
            }
            ShannonInstance::Submodular { a, b, k } => format!(
                "sub({},{}|{})",
                ground.label(a),
                ground.label(b),
                ground.display(k)
            ),
        }
    }

    pub fn is_submodular(&self) -> bool {
        matches!(self, ShannonInstance::Submodular { .. })
    }
}

/// All submodularity instances on `n` elements, ordered by pair then K mask.
pub fn submodular_instances(n: usize) -> Vec<ShannonInstance> {
    let full = Subset(((1u64 << n) - 1) as u32);
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let rest = full.without(a).without(b);
            for k in rest.subsets() {
                out.push(ShannonInstance::Submodular { a, b, k });
            }
        }
    }
    out
}

/// Monotonicity instances followed by submodularity instances.
pub fn shannon_instances(n: usize) -> Vec<ShannonInstance> {
    let mut out: Vec<ShannonInstance> = (0..n).map(|i| ShannonInstance::Monotone { n, i }).collect();
    out.extend(submodular_instances(n));
    out
}

/// Number of basic inequalities, `n + C(n,2)·2^(n−2)`.
pub fn shannon_count(n: usize) -> usize {
    if n < 2 {
        return n;
    }
    n + n * (n - 1) / 2 * (1 << (n - 2))
}

pub fn shannon_basic(ground: &GroundSet) -> Result<Vec<LinearFunctional>> {
    if ground.len() < 2 {
        return Err(Error::TooFewElements);
    }
    Ok(shannon_instances(ground.len())
        .iter()
        .map(|s| s.functional(ground))
        .collect())
}

/// `r_J(A) = 1` if A meets J, else 0.
pub fn r_vector(ground: &GroundSet, j: Subset) -> Result<Polymatroid> {
    if j.is_empty() {
        return Err(Error::EmptySubset);
    }
    if !j.is_subset_of(ground.full()) {
        return Err(Error::OutOfGround(format!("{:#b}", j.0)));
    }
    Ok(Polymatroid::from_fn(ground.clone(), |a| {
        if a.meets(j) {
            Rational::one()
        } else {
            Rational::zero()
        }
    }))
}

/// `u(J) = min{|J|, 2}`.
pub fn u_vector(ground: &GroundSet) -> Result<Polymatroid> {
    if ground.len() < 2 {
        return Err(Error::TooFewElements);
    }
    Ok(Polymatroid::from_fn(ground.clone(), |a| rat(a.len().min(2) as i64)))
}

/// Free (modular) vector: rank equals cardinality.
pub fn free_vector(ground: &GroundSet) -> Polymatroid {
    Polymatroid::from_fn(ground.clone(), |a| rat(a.len() as i64))
}

/// The Vámos-type vector on four elements with the given special pair.
pub fn vamos_vector(ground: &GroundSet, pair: Subset) -> Result<Polymatroid> {
    if ground.len() != 4 {
        return Err(Error::Invalid("the Vámos vector needs exactly four elements".into()));
    }
    if pair.len() != 2 || !pair.is_subset_of(ground.full()) {
        return Err(Error::Invalid("the special set must be a pair".into()));
    }
    Ok(Polymatroid::from_fn(ground.clone(), |a| {
        if a == pair {
            rat(4)
        } else {
            rat((a.len() as i64 + 1).min(4))
        }
    }))
}

/// Decomposition of a functional into a balanced part and monotonicity terms.
#[derive(Clone, Debug, PartialEq)]
pub struct Balanced {
    pub residual: LinearFunctional,
    /// Weight of the monotonicity inequality of each element.
    pub mu: Vec<Rational>,
    /// Set when some weight is negative (the input cannot be a valid inequality).
    pub negative_weight: bool,
}

pub fn balance(e: &LinearFunctional) -> Balanced {
    let g = e.ground().clone();
    let n = g.len();
    let mu: Vec<Rational> = (0..n).map(|i| e.dot_r(i)).collect();
    let mut residual = e.clone();
    for (i, m) in mu.iter().enumerate() {
        if m.is_zero() {
            continue;
        }
        let s = ShannonInstance::Monotone { n, i }.functional(&g);
        residual = residual.sub(&s.scaled(m)).expect("same ground");
    }
    let negative_weight = mu.iter().any(|m| m.is_negative());
    Balanced {
        residual,
        mu,
        negative_weight,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_formula() {
        for n in 2..=6 {
            assert_eq!(shannon_instances(n).len(), shannon_count(n));
        }
        assert_eq!(shannon_count(4), 28);
        assert!(shannon_basic(&GroundSet::letters(1).unwrap()).is_err());
    }

    #[test]
    fn r_vector_order() {
        let g = GroundSet::letters(2).unwrap();
        let r = r_vector(&g, Subset(1)).unwrap();
        assert_eq!(r.ranks(), &[rat(1), rat(0), rat(1)]);
        let r = r_vector(&g, Subset(3)).unwrap();
        assert_eq!(r.ranks(), &[rat(1), rat(1), rat(1)]);
    }

    #[test]
    fn vamos_values() {
        let g = GroundSet::letters(4).unwrap();
        let v = vamos_vector(&g, g.parse_subset("cd").unwrap()).unwrap();
        assert_eq!(v.rank_of("cd").unwrap(), rat(4));
        assert_eq!(v.rank_of("ab").unwrap(), rat(3));
        assert_eq!(v.rank_of("abc").unwrap(), rat(4));
        assert_eq!(v.ingleton(0, 1, 2, 3), rat(-1));
    }

    #[test]
    fn balance_of_entropy_term() {
        let g = GroundSet::letters(2).unwrap();
        let e = LinearFunctional::from_terms(g.clone(), [(Subset(1), rat(1))]);
        let b = balance(&e);
        assert_eq!(b.mu, vec![rat(1), rat(0)]);
        // H(a) − H(ab) + H(b) = I(a,b)
        let expect = LinearFunctional::from_terms(
            g,
            [(Subset(1), rat(1)), (Subset(2), rat(1)), (Subset(3), rat(-1))],
        );
        assert_eq!(b.residual, expect);
        assert!(b.residual.is_balanced());
    }
}
