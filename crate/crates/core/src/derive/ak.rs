//! Ahlswede-Körner style partial rank maps and the linear gadget encoding them.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::ground::{GroundSet, Subset};
use crate::lp::{ConstraintSystem, SparseVec};
use crate::num::{rat, Rational};
use crate::poly::{Polymatroid, SetFunction};

use super::{push_shannon_rows, DerivedSystem, SymmetryState};

/// Values on some subsets of a ground set; `None` where undefined.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialRanks {
    ground: GroundSet,
    values: Vec<Option<Rational>>,
}

impl PartialRanks {
    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn get(&self, s: Subset) -> Option<&Rational> {
        self.values[s.0 as usize].as_ref()
    }

    /// Non-empty subsets where a value is defined.
    pub fn domain(&self) -> Vec<Subset> {
        self.ground.nonempty_subsets().filter(|&s| self.get(s).is_some()).collect()
    }

    /// Largest deviation from `h` (indexed like rank vectors) on the domain.
    pub fn max_deviation(&self, h: &[f64]) -> f64 {
        self.domain()
            .into_iter()
            .map(|s| {
                let v: f64 = num_traits::ToPrimitive::to_f64(self.get(s).expect("in domain")).unwrap_or(f64::NAN);
                (v - h[s.index()]).abs()
            })
            .fold(0.0, f64::max)
    }
}

fn check_partition(ground: &GroundSet, parts: &[Subset]) -> Result<()> {
    let mut seen = Subset(0);
    for &p in parts {
        if p.meets(seen) {
            return Err(Error::Invalid("the parts overlap".into()));
        }
        seen = seen | p;
    }
    if seen != ground.full() {
        return Err(Error::Invalid("the parts do not cover the ground set".into()));
    }
    Ok(())
}

/// `f(A)` off `z`, `f(A) − f(z‖Y)` for `z ∈ A ⊆ Yz`, undefined elsewhere.
pub fn ak2_apply(f: &Polymatroid, x: Subset, y: Subset, z: usize) -> Result<PartialRanks> {
    let zs = Subset::singleton(z);
    check_partition(f.ground(), &[x, y, zs])?;
    let shift = f.cond(zs, y);
    let mut values = vec![Some(rat(0)); 1 << f.len()];
    for s in f.ground().nonempty_subsets() {
        values[s.0 as usize] = if !s.contains(z) {
            Some(f.at(s))
        } else if s.is_subset_of(y | zs) {
            Some(f.at(s) - &shift)
        } else {
            None
        };
    }
    Ok(PartialRanks {
        ground: f.ground().clone(),
        values,
    })
}

/// `f(A)` off `Z`, `min{f(A), f(AZ) − f(Z‖Y)}` for `A ⊆ YZ`, undefined elsewhere.
pub fn akz_apply(f: &Polymatroid, x: Subset, y: Subset, z: Subset) -> Result<PartialRanks> {
    if z.is_empty() {
        return Err(Error::EmptySubset);
    }
    check_partition(f.ground(), &[x, y, z])?;
    let shift = f.cond(z, y);
    let mut values = vec![Some(rat(0)); 1 << f.len()];
    for s in f.ground().nonempty_subsets() {
        values[s.0 as usize] = if !s.meets(z) {
            Some(f.at(s))
        } else if s.is_subset_of(y | z) {
            let alt = f.at(s | z) - &shift;
            Some(std::cmp::min(f.at(s), alt))
        } else {
            None
        };
    }
    Ok(PartialRanks {
        ground: f.ground().clone(),
        values,
    })
}

/// Subsets on which the two maps disagree (in value or definedness), with
/// both values.
pub fn ak_divergence(
    f: &Polymatroid,
    x: Subset,
    y: Subset,
    z: usize,
) -> Result<Vec<(Subset, Option<Rational>, Option<Rational>)>> {
    let one = ak2_apply(f, x, y, z)?;
    let other = akz_apply(f, x, y, Subset::singleton(z))?;
    Ok(f.ground()
        .nonempty_subsets()
        .filter(|&s| one.get(s) != other.get(s))
        .map(|s| (s, one.get(s).cloned(), other.get(s).cloned()))
        .collect())
}

/// The linear content of the two-point construction: variables for `f` on
/// every subset plus the unknown values of the transformed function on
/// subsets containing `z` and meeting `X`. Rows are the basic inequalities
/// of both functions, the transformed one written through its known values.
pub fn ak2_gadget(ground: &GroundSet, x: Subset, y: Subset, z: usize) -> Result<DerivedSystem> {
    let zs = Subset::singleton(z);
    check_partition(ground, &[x, y, zs])?;
    let size = 1usize << ground.len();
    let dim = ground.dim();
    let mut vars: Vec<String> = ground.nonempty_subsets().map(|s| ground.display(s)).collect();
    let unit = |j: usize| vec![(j, rat(1))];
    let direct: Vec<SparseVec> = (0..size)
        .map(|s| if s == 0 { Vec::new() } else { unit(s - 1) })
        .collect();
    let mut star: Vec<SparseVec> = vec![Vec::new(); size];
    for s in ground.nonempty_subsets() {
        star[s.0 as usize] = if !s.contains(z) {
            direct[s.0 as usize].clone()
        } else if s.is_subset_of(y | zs) {
            // f(A) − f(Yz) + f(Y)
            let mut e = direct[s.0 as usize].clone();
            e.push(((y | zs).index(), rat(-1)));
            if !y.is_empty() {
                e.push((y.index(), rat(1)));
            }
            crate::lp::normalize_sparse(e)
        } else {
            vars.push(format!("{}*", ground.display(s)));
            unit(vars.len() - 1)
        };
    }
    let mut sys = ConstraintSystem::new(vars);
    sys.main = dim;
    let mut seen = HashSet::new();
    push_shannon_rows(&mut sys, ground, &direct, false, &|_| false, &mut seen);
    let before = sys.rows.len();
    push_shannon_rows(&mut sys, ground, &star, false, &|_| false, &mut seen);
    for row in &mut sys.rows[before..] {
        row.tag = format!("{}*", row.tag);
    }
    Ok(DerivedSystem {
        sys,
        ground: ground.clone(),
        base: ground.clone(),
        main_masks: ground.nonempty_subsets().collect(),
        exprs: direct,
        classes: dim,
        symmetry: SymmetryState::default(),
        notes: vec![format!(
            "transformed at {} over {}",
            ground.label(z),
            ground.display(y)
        )],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::InfoExpr;
    use crate::lp::{implies, Implication};
    use crate::ops::tighten_at;
    use crate::shannon::vamos_vector;

    fn g5() -> GroundSet {
        GroundSet::new(&["a", "b", "c", "d", "z"]).unwrap()
    }

    #[test]
    fn empty_x_is_tightening() {
        let g = GroundSet::letters(4).unwrap();
        let v = vamos_vector(&g, g.parse_subset("cd").unwrap()).unwrap();
        let f = Polymatroid::from_fn(g.clone(), |s| v.at(s) + rat(s.contains(1) as i64));
        let m = ak2_apply(&f, Subset(0), g.full().without(1), 1).unwrap();
        let t = tighten_at(&f, 1).unwrap();
        assert_eq!(m.domain().len(), 15);
        for s in m.domain() {
            assert_eq!(m.get(s).unwrap(), &t.at(s));
        }
    }

    #[test]
    fn singleton_z_maps_agree() {
        let g = GroundSet::letters(4).unwrap();
        let v = vamos_vector(&g, g.parse_subset("cd").unwrap()).unwrap();
        let x = g.parse_subset("d").unwrap();
        let y = g.parse_subset("ab").unwrap();
        assert!(ak_divergence(&v, x, y, 2).unwrap().is_empty());
        assert!(ak2_apply(&v, x, y, 2).unwrap().get(g.parse_subset("cd").unwrap()).is_none());
        assert!(ak2_apply(&v, x, x, 2).is_err());
    }

    #[test]
    fn gadget_gives_mmrv_pair() {
        let g = g5();
        let d = ak2_gadget(&g, g.parse_subset("cd").unwrap(), g.parse_subset("ab").unwrap(), 4).unwrap();
        assert_eq!(d.sys.nvars() - d.sys.main, 12);
        for text in ["[a,b,c,d] + (a,b|z) + (a,z|b) + (b,z|a)", "[a,c,b,d] + (a,b|z) + (a,z|b) + (b,z|a)"] {
            let e = InfoExpr::parse(&g, text).unwrap().to_functional();
            let t = d.target(&e).unwrap();
            match implies(&d.sys, &t) {
                Implication::Yes(c) => assert!(c.proves(&d.sys, &t)),
                Implication::No(_) => panic!("{text} not derived"),
            }
        }
    }
}
