//! Cheap conditions under which a copy step cannot help, and explicit copies
//! for those cases.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ground::{GroundSet, Subset};
use crate::linear::copy_violation;
use crate::num::Rational;
use crate::ops::{closure_of, modular_decomposition};
use crate::poly::{Polymatroid, SetFunction};

use super::CopyStep;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Advisory {
    /// Every polymatroid has such a copy.
    AlwaysUseless { over_size: usize },
    /// The over set is modular in the target, so the target has a copy.
    UselessForTarget,
    /// Copying over the closure is at least as strong.
    EnlargeOverSet { closure: Subset },
    /// The copied set is determined by the over set; a parallel extension is a copy.
    ParallelSuffices,
}

impl Advisory {
    pub fn code(&self) -> &'static str {
        match self {
            Advisory::AlwaysUseless { .. } => "ALWAYS_USELESS",
            Advisory::UselessForTarget => "USELESS_FOR_TARGET",
            Advisory::EnlargeOverSet { .. } => "ENLARGE_OVER_SET",
            Advisory::ParallelSuffices => "PARALLEL_SUFFICES",
        }
    }

    pub fn describe(&self, ground: &GroundSet) -> String {
        match self {
            Advisory::AlwaysUseless { over_size } => {
                format!("{}: over set of size {over_size}; every polymatroid has this copy", self.code())
            }
            Advisory::UselessForTarget => format!("{}: over set is modular in the target", self.code()),
            Advisory::EnlargeOverSet { closure } => {
                format!("{}: copy over the closure {} instead", self.code(), ground.display(*closure))
            }
            Advisory::ParallelSuffices => {
                format!("{}: copied set is determined by the over set", self.code())
            }
        }
    }
}

impl fmt::Display for Advisory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

fn is_modular_set(f: &Polymatroid, d: Subset) -> bool {
    let sum: Rational = d.elements().map(|i| f.at(Subset::singleton(i))).sum();
    f.at(d) == sum
}

/// Advisories for one step on `ground`, optionally against a target `f`.
pub fn precheck(step: &CopyStep, ground: &GroundSet, f: Option<&Polymatroid>) -> Vec<Advisory> {
    let d = step.over;
    let a = step.copied_set();
    let mut out = Vec::new();
    if d.len() <= 1 || d.len() + 1 == ground.len() {
        out.push(Advisory::AlwaysUseless { over_size: d.len() });
    }
    if let Some(f) = f {
        if is_modular_set(f, d) {
            out.push(Advisory::UselessForTarget);
        }
        let cl = closure_of(f, d);
        if !(cl - d - a).is_empty() {
            out.push(Advisory::EnlargeOverSet { closure: cl - a });
        }
        if f.cond(a, d).is_zero() {
            out.push(Advisory::ParallelSuffices);
        }
    }
    out
}

/// Copied elements in increasing order with their names, the layout expected
/// by the copy checks.
fn sorted_step(step: &CopyStep) -> (Vec<usize>, Vec<String>) {
    let mut pairs: Vec<(usize, String)> = step.copied.iter().copied().zip(step.names.iter().cloned()).collect();
    pairs.sort();
    pairs.into_iter().unzip()
}

fn check(f: &Polymatroid, g: Polymatroid, a: Subset, d: Subset) -> Result<Polymatroid> {
    g.check_polymatroid()?;
    match copy_violation(f, &g, a, d) {
        None => Ok(g),
        Some(why) => Err(Error::Failed(format!("constructed copy is invalid: {why}"))),
    }
}

fn direct_copy(f: &Polymatroid, step: &CopyStep) -> Option<Polymatroid> {
    let (elems, names) = sorted_step(step);
    let n = f.len();
    let a = step.copied_set();
    let d = step.over;
    let ground = f.ground().extended(&names).ok()?;
    let twins = Subset(((1u64 << (n + elems.len())) - 1) as u32) - f.ground().full();
    // original element behind each twin
    let back = |s: Subset| Subset::from_elements(s.elements().map(|i| elems[i - n]));
    let split = |s: Subset| (s & f.ground().full(), back(s & twins));

    if f.cond(a, d).is_zero() {
        return Some(Polymatroid::from_fn(ground, |s| {
            let (orig, copy) = split(s);
            f.at(orig | copy)
        }));
    }
    if is_modular_set(f, d) {
        return Some(Polymatroid::from_fn(ground, |s| {
            let (orig, j) = split(s);
            let i = orig - d;
            let k = orig & d;
            if j.is_empty() {
                return f.at(orig);
            }
            (d - k)
                .subsets()
                .map(|extra| {
                    let l = k | extra;
                    f.at(i | l) + f.at(j | l) - f.at(l)
                })
                .min()
                .expect("non-empty range")
        }));
    }
    if d.len() + 1 == n {
        let z = (f.ground().full() - d).elements().next()?;
        let lambda = f.cond(Subset::singleton(z), d);
        return Some(Polymatroid::from_fn(ground, |s| {
            let (orig, copy) = split(s);
            // tight part with the twin parallel to z, then both shifts added back
            let merged = orig | copy;
            let mut v = f.at(merged);
            if merged.contains(z) {
                v -= &lambda;
            }
            if orig.contains(z) {
                v += &lambda;
            }
            if !copy.is_empty() {
                v += &lambda;
            }
            v
        }));
    }
    None
}

/// Moves a copy of one polymatroid to a copy of `f + Σ λ_z r_z` by adding
/// `λ_z r_{z′}` on the twins as well.
fn shift_copy(g: &Polymatroid, lambda: &[Rational], step: &CopyStep, sign: i64) -> Polymatroid {
    let (elems, _) = sorted_step(step);
    let n = lambda.len();
    let k = Rational::from_integer(sign.into());
    Polymatroid::from_fn(g.ground().clone(), |s| {
        let mut v = g.at(s);
        for (z, l) in lambda.iter().enumerate() {
            if s.contains(z) {
                v += &k * l;
            }
        }
        for (j, &z) in elems.iter().enumerate() {
            if s.contains(n + j) {
                v += &k * &lambda[z];
            }
        }
        v
    })
}

/// A copy of `f` for `step` built from a precondition that guarantees one.
/// When no precondition holds for `f` itself, the tight part is tried and the
/// result shifted back.
pub fn explicit_copy(f: &Polymatroid, step: &CopyStep) -> Result<Polymatroid> {
    f.check_polymatroid()?;
    let a = step.copied_set();
    if a.meets(step.over) || !(a | step.over).is_subset_of(f.ground().full()) {
        return Err(Error::Invalid("copy step does not fit the polymatroid".into()));
    }
    if let Some(g) = direct_copy(f, step) {
        return check(f, g, a, step.over);
    }
    let (tight, lambda) = modular_decomposition(f)?;
    if let Some(g) = direct_copy(&tight, step) {
        let g = check(&tight, g, a, step.over)?;
        return check(f, shift_copy(&g, &lambda, step, 1), a, step.over);
    }
    Err(Error::Failed(
        "no precondition guarantees a copy for this step".into(),
    ))
}

/// The copy of the tight part obtained from a copy of `f`.
pub fn tighten_copy(f: &Polymatroid, g: &Polymatroid, step: &CopyStep) -> Result<Polymatroid> {
    let (tight, lambda) = modular_decomposition(f)?;
    check(&tight, shift_copy(g, &lambda, step, -1), step.copied_set(), step.over)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::tighten;
    use crate::shannon::vamos_vector;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn step(g: &GroundSet, a: &str, d: &str) -> CopyStep {
        let copied = g.parse_elements(a).unwrap();
        let names = copied.iter().map(|&i| format!("{}'", g.label(i))).collect();
        CopyStep {
            copied,
            over: g.parse_subset(d).unwrap(),
            names,
        }
    }

    fn vcd() -> Polymatroid {
        let g = GroundSet::letters(4).unwrap();
        vamos_vector(&g, g.parse_subset("cd").unwrap()).unwrap()
    }

    // sum of random r_J vectors: a polymatroid with varied structure
    fn random_poly(rng: &mut ChaCha8Rng, n: usize) -> Polymatroid {
        let g = GroundSet::letters(n).unwrap();
        let terms: Vec<(Subset, i64)> = (0..6)
            .map(|_| (Subset(rng.gen_range(1..1u32 << n)), rng.gen_range(0..3)))
            .collect();
        Polymatroid::from_fn(g, |s| {
            terms
                .iter()
                .filter(|(j, _)| s.meets(*j))
                .map(|(_, c)| Rational::from_integer((*c).into()))
                .sum()
        })
    }

    #[test]
    fn vamos_advisories() {
        let v = vcd();
        let g = v.ground().clone();
        let adv = precheck(&step(&g, "ab", "cd"), &g, Some(&v));
        assert!(adv.contains(&Advisory::UselessForTarget));
        let adv = precheck(&step(&g, "b", "a"), &g, None);
        assert_eq!(adv, vec![Advisory::AlwaysUseless { over_size: 1 }]);
        // over cd the closure is everything
        let adv = precheck(&step(&g, "a", "cd"), &g, Some(&v));
        assert!(adv.contains(&Advisory::EnlargeOverSet {
            closure: g.parse_subset("bcd").unwrap()
        }));
        assert!(precheck(&step(&g, "c", "ab"), &g, Some(&v)).is_empty());
    }

    #[test]
    fn vamos_big_over_set() {
        let v = vcd();
        let g = v.ground().clone();
        let c = explicit_copy(&v, &step(&g, "a", "bcd")).unwrap();
        assert_eq!(c.len(), 5);
        assert!(explicit_copy(&v, &step(&g, "c", "ab")).is_err());
    }

    #[test]
    fn modular_and_parallel() {
        let v = vcd();
        let g = v.ground().clone();
        explicit_copy(&v, &step(&g, "ab", "cd")).unwrap();
        let par = Polymatroid::from_fn(g.clone(), |s| Rational::from_integer((s.len().min(1) as i64).into()));
        let adv = precheck(&step(&g, "a", "bc"), &g, Some(&par));
        assert!(adv.contains(&Advisory::ParallelSuffices));
        explicit_copy(&par, &step(&g, "a", "bc")).unwrap();
    }

    #[test]
    fn tightening_oblivious() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let n = rng.gen_range(3..5);
            let f = random_poly(&mut rng, n);
            let g = f.ground().clone();
            let d = Subset(rng.gen_range(1..(1u32 << n) - 1));
            let rest = g.full() - d;
            let a = Subset::from_elements(rest.elements().filter(|_| rng.gen_bool(0.7)));
            let a = if a.is_empty() { Subset::singleton(rest.elements().next().unwrap()) } else { a };
            let s = step(&g, &g.name(a), &g.name(d));
            let t = tighten(&f).unwrap();
            let cf = explicit_copy(&f, &s);
            let ct = explicit_copy(&t, &s);
            assert_eq!(cf.is_ok(), ct.is_ok());
            // the shift back down is only guaranteed when no over element has private information
            let lambda = crate::ops::private_info(&f);
            if let Ok(c) = cf {
                if d.elements().all(|z| lambda[z].is_zero()) {
                    tighten_copy(&f, &c, &s).unwrap();
                }
            }
        }
    }

    #[test]
    fn shift_down_can_fail_over_private_elements() {
        let g = GroundSet::letters(3).unwrap();
        let f = Polymatroid::from_ints(g.clone(), &[4, 5, 6, 4, 6, 5, 6]).unwrap();
        let s = step(&g, "bc", "a");
        let c = explicit_copy(&f, &s).unwrap();
        assert!(tighten_copy(&f, &c, &s).is_err());
        assert!(explicit_copy(&tighten(&f).unwrap(), &s).is_ok());
    }
}
