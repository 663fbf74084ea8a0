//! Permutations of ground-set elements and their action on subsets.

use crate::error::{Error, Result};
use crate::ground::{GroundSet, Subset};
use crate::poly::Polymatroid;

/// A total permutation: element `i` goes to `image[i]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Permutation> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &j in &image {
            if j >= n || seen[j] {
                return Err(Error::Invalid("not a permutation".into()));
            }
            seen[j] = true;
        }
        Ok(Permutation { image })
    }

    pub fn identity(n: usize) -> Permutation {
        Permutation {
            image: (0..n).collect(),
        }
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Permutation {
        let mut image: Vec<usize> = (0..n).collect();
        image.swap(a, b);
        Permutation { image }
    }

    /// Cyclic shift of all elements: `i ↦ i+1 mod n`.
    pub fn cycle(n: usize) -> Permutation {
        Permutation {
            image: (0..n).map(|i| (i + 1) % n).collect(),
        }
    }

    /// Permutation given by label pairs `x->y` (missing labels are fixed).
    pub fn from_label_pairs(ground: &GroundSet, pairs: &[(&str, &str)]) -> Result<Permutation> {
        let mut image: Vec<usize> = (0..ground.len()).collect();
        for (x, y) in pairs {
            image[ground.element(x)?] = ground.element(y)?;
        }
        Permutation::new(image)
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn apply_elem(&self, i: usize) -> usize {
        self.image[i]
    }

    pub fn apply(&self, s: Subset) -> Subset {
        Subset::from_elements(s.elements().map(|i| self.image[i]))
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.image.len()];
        for (i, &j) in self.image.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { image: inv }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            image: other.image.iter().map(|&j| self.image[j]).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &j)| i == j)
    }
}

/// An injective map from some elements to elements.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PartialPermutation {
    mapping: Vec<Option<usize>>,
}

impl PartialPermutation {
    pub fn new(mapping: Vec<Option<usize>>) -> Result<PartialPermutation> {
        let mut seen = std::collections::HashSet::new();
        for j in mapping.iter().flatten() {
            if !seen.insert(*j) {
                return Err(Error::Invalid("partial permutation not injective".into()));
            }
        }
        Ok(PartialPermutation { mapping })
    }

    pub fn domain(&self) -> Subset {
        Subset::from_elements(
            self.mapping
                .iter()
                .enumerate()
                .filter(|(_, m)| m.is_some())
                .map(|(i, _)| i),
        )
    }

    pub fn get(&self, i: usize) -> Option<usize> {
        self.mapping.get(i).copied().flatten()
    }

    /// Image of a subset inside the domain.
    pub fn apply(&self, s: Subset) -> Option<Subset> {
        s.elements()
            .map(|i| self.get(i))
            .collect::<Option<Vec<_>>>()
            .map(Subset::from_elements)
    }

    pub fn to_total(&self) -> Option<Permutation> {
        let image: Option<Vec<usize>> = self.mapping.iter().copied().collect();
        Permutation::new(image?).ok()
    }
}

/// `result(σ(A)) = f(A)`, i.e. `result(A) = f(σ⁻¹(A))`.
pub fn permute_polymatroid(f: &Polymatroid, sigma: &Permutation) -> Result<Polymatroid> {
    use crate::poly::SetFunction;
    if sigma.len() != f.len() {
        return Err(Error::Invalid("permutation size differs from ground".into()));
    }
    let inv = sigma.inverse();
    Ok(Polymatroid::from_fn(f.ground().clone(), |a| f.at(inv.apply(a))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_compose() {
        let p = Permutation::new(vec![2, 0, 1]).unwrap();
        assert!(p.compose(&p.inverse()).is_identity());
        assert_eq!(p.apply(Subset(0b001)), Subset(0b100));
        assert!(Permutation::new(vec![0, 0]).is_err());
    }
}
