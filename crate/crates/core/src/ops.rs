//! Polymatroid operations: minors, factors, sums, extensions, tightening.

use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ground::{GroundSet, Subset};
use crate::num::{rat, Rational};
use crate::poly::{Polymatroid, SetFunction};
use crate::shannon::r_vector;

/// A partition of the ground set into labelled blocks.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EquivalenceRelation {
    blocks: Vec<(Subset, String)>,
}

impl EquivalenceRelation {
    pub fn new(ground: &GroundSet, blocks: Vec<(Subset, String)>) -> Result<EquivalenceRelation> {
        let mut seen = Subset::EMPTY;
        for (b, _) in &blocks {
            if b.is_empty() || b.meets(seen) {
                return Err(Error::Invalid("blocks must be non-empty and disjoint".into()));
            }
            seen = seen | *b;
        }
        if seen != ground.full() {
            return Err(Error::Invalid("blocks must cover the ground set".into()));
        }
        Ok(EquivalenceRelation { blocks })
    }

    pub fn identity(ground: &GroundSet) -> EquivalenceRelation {
        EquivalenceRelation {
            blocks: (0..ground.len())
                .map(|i| (Subset::singleton(i), ground.label(i).to_string()))
                .collect(),
        }
    }

    /// Merge one set into a block labelled `label`; the block sits where its
    /// first element was.
    pub fn merging(ground: &GroundSet, set: Subset, label: &str) -> Result<EquivalenceRelation> {
        let first = set.elements().next().ok_or(Error::EmptySubset)?;
        let blocks = (0..ground.len())
            .filter(|&i| !set.contains(i) || i == first)
            .map(|i| {
                if i == first {
                    (set, label.to_string())
                } else {
                    (Subset::singleton(i), ground.label(i).to_string())
                }
            })
            .collect();
        EquivalenceRelation::new(ground, blocks)
    }

    pub fn blocks(&self) -> &[(Subset, String)] {
        &self.blocks
    }
}

/// `result(T) = f(∪_{i∈T} blocks[i])` on a ground set with one element per block.
pub fn pullback(f: &Polymatroid, ground: GroundSet, blocks: &[Subset]) -> Polymatroid {
    debug_assert_eq!(ground.len(), blocks.len());
    Polymatroid::from_fn(ground, |t| {
        f.at(t.elements().fold(Subset::EMPTY, |acc, i| acc | blocks[i]))
    })
}

pub fn restrict(f: &Polymatroid, m: Subset) -> Result<Polymatroid> {
    if m.is_empty() {
        return Err(Error::EmptySubset);
    }
    if !m.is_subset_of(f.ground().full()) {
        return Err(Error::OutOfGround(format!("{:#b}", m.0)));
    }
    let ground = f.ground().restricted(m)?;
    let blocks: Vec<Subset> = m.elements().map(Subset::singleton).collect();
    Ok(pullback(f, ground, &blocks))
}

pub fn delete(f: &Polymatroid, k: Subset) -> Result<Polymatroid> {
    restrict(f, f.ground().full() - k)
}

/// `A ↦ f(AK) − f(K)` on `N∖K`.
pub fn contract(f: &Polymatroid, k: Subset) -> Result<Polymatroid> {
    let full = f.ground().full();
    if k.is_empty() || k == full {
        return Err(Error::Invalid("contraction set must be proper and non-empty".into()));
    }
    if !k.is_subset_of(full) {
        return Err(Error::OutOfGround(format!("{:#b}", k.0)));
    }
    let rest = full - k;
    let ground = f.ground().restricted(rest)?;
    let idx: Vec<usize> = rest.elements().collect();
    let fk = f.at(k);
    Ok(Polymatroid::from_fn(ground, |t| {
        let a = Subset::from_elements(t.elements().map(|i| idx[i]));
        f.at(a | k) - &fk
    }))
}

pub fn factor(f: &Polymatroid, rel: &EquivalenceRelation) -> Result<Polymatroid> {
    EquivalenceRelation::new(f.ground(), rel.blocks.clone())?;
    let labels: Vec<&str> = rel.blocks.iter().map(|(_, l)| l.as_str()).collect();
    let ground = GroundSet::new(&labels)?;
    let blocks: Vec<Subset> = rel.blocks.iter().map(|(b, _)| *b).collect();
    Ok(pullback(f, ground, &blocks))
}

pub fn sum(f: &Polymatroid, g: &Polymatroid) -> Result<Polymatroid> {
    if f.ground() != g.ground() {
        return Err(Error::GroundMismatch);
    }
    Ok(Polymatroid::from_fn(f.ground().clone(), |a| f.at(a) + g.at(a)))
}

pub fn scale(lambda: &Rational, f: &Polymatroid) -> Result<Polymatroid> {
    if lambda.is_negative() {
        return Err(Error::Invalid("scale factor must be non-negative".into()));
    }
    Ok(Polymatroid::from_fn(f.ground().clone(), |a| lambda * f.at(a)))
}

/// `A ↦ f(A∩N) + g(A∩M)` on the disjoint union `NM`.
pub fn direct_sum(f: &Polymatroid, g: &Polymatroid) -> Result<Polymatroid> {
    let ground = f.ground().extended(g.ground().labels())?;
    let n = f.len();
    let low = f.ground().full();
    Ok(Polymatroid::from_fn(ground, |a| {
        f.at(a & low) + g.at(Subset(a.0 >> n))
    }))
}

/// Add `a′` parallel to `a`: `f(a′A) = f(aA)`.
pub fn parallel_extend(f: &Polymatroid, a: usize, label: &str) -> Result<Polymatroid> {
    let ground = f.ground().extended(&[label])?;
    let mut blocks: Vec<Subset> = (0..f.len()).map(Subset::singleton).collect();
    blocks.push(Subset::singleton(a));
    Ok(pullback(f, ground, &blocks))
}

/// Private information of each element, `f(z‖N∖z)`.
pub fn private_info(f: &Polymatroid) -> Vec<Rational> {
    let full = f.ground().full();
    (0..f.len()).map(|z| f.cond(Subset::singleton(z), full.without(z))).collect()
}

/// `f − f(z‖N∖z)·r_z`.
pub fn tighten_at(f: &Polymatroid, z: usize) -> Result<Polymatroid> {
    f.check_polymatroid()?;
    Ok(tighten_at_unchecked(f, z))
}

fn tighten_at_unchecked(f: &Polymatroid, z: usize) -> Polymatroid {
    let full = f.ground().full();
    let lambda = f.cond(Subset::singleton(z), full.without(z));
    Polymatroid::from_fn(f.ground().clone(), |a| {
        if a.contains(z) {
            f.at(a) - &lambda
        } else {
            f.at(a)
        }
    })
}

pub fn tighten(f: &Polymatroid) -> Result<Polymatroid> {
    Ok(modular_decomposition(f)?.0)
}

/// `f = tight + Σ λ_z r_z` with `λ_z = f(z‖N∖z) ≥ 0`.
pub fn modular_decomposition(f: &Polymatroid) -> Result<(Polymatroid, Vec<Rational>)> {
    f.check_polymatroid()?;
    let lambda = private_info(f);
    let mut g = f.clone();
    for z in 0..f.len() {
        g = tighten_at_unchecked(&g, z);
    }
    Ok((g, lambda))
}

/// Rebuild `tight + Σ λ_z r_z`.
pub fn recompose(tight: &Polymatroid, lambda: &[Rational]) -> Result<Polymatroid> {
    let mut f = tight.clone();
    for (z, l) in lambda.iter().enumerate() {
        let r = r_vector(tight.ground(), Subset::singleton(z))?;
        f = sum(&f, &scale(&l.abs(), &r)?)?;
        if l.is_negative() {
            return Err(Error::Invalid("negative modular weight".into()));
        }
    }
    Ok(f)
}

/// One-point extension by `z′`: `f′(Az′) = min{f(A)+α, f(AZ)}`.
pub fn principal_extension(f: &Polymatroid, z: Subset, alpha: &Rational, label: &str) -> Result<Polymatroid> {
    if z.is_empty() {
        return Err(Error::EmptySubset);
    }
    if alpha.is_negative() {
        return Err(Error::Invalid("α must be non-negative".into()));
    }
    let ground = f.ground().extended(&[label])?;
    let n = f.len();
    let low = f.ground().full();
    Ok(Polymatroid::from_fn(ground, |a| {
        let old = a & low;
        if a.contains(n) {
            let x = f.at(old) + alpha;
            let y = f.at(old | z);
            if x < y {
                x
            } else {
                y
            }
        } else {
            f.at(old)
        }
    }))
}

/// `A ↦ min{f(A), α + f(A‖Z)}`.
pub fn gak(f: &Polymatroid, z: Subset, alpha: &Rational) -> Result<Polymatroid> {
    if alpha.is_negative() {
        return Err(Error::Invalid("α must be non-negative".into()));
    }
    let fz = f.at(z);
    Ok(Polymatroid::from_fn(f.ground().clone(), |a| {
        let x = f.at(a);
        let y = alpha + f.at(a | z) - &fz;
        if x < y {
            x
        } else {
            y
        }
    }))
}

/// The same map computed as a principal extension by `f(Z)−α` followed by
/// contracting the new point (or `f` itself when `α ≥ f(Z)`).
pub fn gak_via_extension(f: &Polymatroid, z: Subset, alpha: &Rational) -> Result<Polymatroid> {
    let fz = f.at(z);
    if *alpha >= fz {
        return Ok(f.clone());
    }
    let beta = fz - alpha;
    let label = fresh_label(f.ground(), "z");
    let ext = principal_extension(f, z, &beta, &label)?;
    contract(&ext, Subset::singleton(f.len()))
}

pub(crate) fn fresh_label(g: &GroundSet, stem: &str) -> String {
    (0..)
        .map(|i| format!("{stem}{i}"))
        .find(|l| g.index_of(l).is_none())
        .expect("unbounded")
}

/// Split `a` into two elements of ranks `α0`, `α1` labelled `l0`, `l1`,
/// placed where `a` was.
pub fn split_labeled(
    f: &Polymatroid,
    a: usize,
    alpha0: &Rational,
    alpha1: &Rational,
    l0: &str,
    l1: &str,
) -> Result<Polymatroid> {
    let fa = f.at(Subset::singleton(a));
    if alpha0.is_negative() || alpha1.is_negative() || alpha0 + alpha1 != fa {
        return Err(Error::Invalid(format!(
            "split weights must be non-negative and sum to f(a) = {fa}"
        )));
    }
    let t0 = fresh_label(f.ground(), "split_tmp_");
    let f1 = principal_extension(f, Subset::singleton(a), alpha0, &t0)?;
    let t1 = fresh_label(f1.ground(), "split_tmp_");
    let f2 = principal_extension(&f1, Subset::singleton(a), alpha1, &t1)?;
    let n = f.len();
    let mut labels: Vec<String> = Vec::new();
    let mut blocks: Vec<Subset> = Vec::new();
    for i in 0..n {
        if i == a {
            labels.push(l0.to_string());
            blocks.push(Subset::singleton(n));
            labels.push(l1.to_string());
            blocks.push(Subset::singleton(n + 1));
        } else {
            labels.push(f.ground().label(i).to_string());
            blocks.push(Subset::singleton(i));
        }
    }
    let ground = GroundSet::new(&labels)?;
    Ok(pullback(&f2, ground, &blocks))
}

/// Split `a` into `a_0`, `a_1`.
pub fn split(f: &Polymatroid, a: usize, alpha0: &Rational, alpha1: &Rational) -> Result<Polymatroid> {
    let base = f.ground().label(a);
    split_labeled(f, a, alpha0, alpha1, &format!("{base}_0"), &format!("{base}_1"))
}

/// A matroid together with the relation that factors it back.
#[derive(Clone, Debug)]
pub struct Expansion {
    pub matroid: Polymatroid,
    pub merge: EquivalenceRelation,
}

/// Split every singleton of rank `r ≥ 2` into `r` unit-rank elements
/// `a_1..a_r`, left to right.
pub fn helgason_expand(f: &Polymatroid) -> Result<Expansion> {
    if !f.is_integer() {
        return Err(Error::Invalid("integer ranks required".into()));
    }
    f.check_polymatroid()?;
    let mut cur = f.clone();
    let mut groups: Vec<(Vec<usize>, String)> = Vec::new();
    let mut pos = 0;
    for i in 0..f.len() {
        let label = f.ground().label(i).to_string();
        let r = f
            .at(Subset::singleton(i))
            .to_integer()
            .to_usize()
            .ok_or_else(|| Error::Invalid("rank too large".into()))?;
        if r < 2 {
            groups.push((vec![pos], label));
            pos += 1;
            continue;
        }
        for k in 1..r {
            let here = pos + k - 1;
            let rest = rat((r - k) as i64);
            cur = split_labeled(
                &cur,
                here,
                &rat(1),
                &rest,
                &format!("{label}_{k}"),
                &format!("{label}_{}", k + 1),
            )?;
        }
        groups.push(((pos..pos + r).collect(), label));
        pos += r;
    }
    let blocks = groups
        .into_iter()
        .map(|(idx, l)| (Subset::from_elements(idx), l))
        .collect();
    let merge = EquivalenceRelation::new(cur.ground(), blocks)?;
    Ok(Expansion {
        matroid: cur,
        merge,
    })
}

pub fn is_flat(f: &Polymatroid, a: Subset) -> bool {
    let fa = f.at(a);
    (0..f.len())
        .filter(|&x| !a.contains(x))
        .all(|x| f.at(a.with(x)) > fa)
}

pub fn closure_of(f: &Polymatroid, a: Subset) -> Subset {
    let mut cur = a;
    loop {
        let fc = f.at(cur);
        let next = (0..f.len())
            .filter(|&x| !cur.contains(x))
            .filter(|&x| f.at(cur.with(x)) == fc)
            .fold(cur, |s, x| s.with(x));
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

pub fn is_modular_pair(f: &Polymatroid, a: Subset, b: Subset) -> bool {
    (f.at(a) + f.at(b) - f.at(a | b) - f.at(a & b)).is_zero()
}
