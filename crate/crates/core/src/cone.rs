//! Extreme rays of polyhedral cones by double description, and the
//! consequence cone of a constraint system with auxiliary columns.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::functional::LinearFunctional;
use crate::ground::{GroundSet, Subset};
use crate::lp::{implies, solve_standard, ConstraintSystem, Implication, Relation, SparseVec, Standard};
use crate::num::{dot_int, make_primitive, null_space, primitive_from_rationals, Rational};
use crate::perm::Permutation;

/// Primitive integer rays of a pointed cone, sorted and without repeats.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct RayList {
    pub dim: usize,
    pub rays: Vec<Vec<BigInt>>,
}

impl RayList {
    pub fn new(dim: usize, rays: Vec<Vec<BigInt>>) -> RayList {
        let set: BTreeSet<Vec<BigInt>> = rays.into_iter().map(make_primitive).collect();
        RayList {
            dim,
            rays: set.into_iter().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn functional(&self, ground: &GroundSet, i: usize) -> Result<LinearFunctional> {
        LinearFunctional::from_ints(ground.clone(), &self.rays[i])
    }

    pub fn functionals(&self, ground: &GroundSet) -> Result<Vec<LinearFunctional>> {
        (0..self.len()).map(|i| self.functional(ground, i)).collect()
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct DdOptions {
    pub max_rays: Option<usize>,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Bits {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn contains_all(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & b == *b)
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &word)| {
            (0..64).filter(move |b| word >> b & 1 == 1).map(move |b| w * 64 + b)
        })
    }
}

#[derive(Clone, Debug)]
struct Ray {
    t: Vec<BigInt>,
    zero: Bits,
}

const PRIME: u64 = (1 << 61) - 1;

fn residue(x: &BigInt) -> u64 {
    let p = BigInt::from(PRIME);
    let mut r = x % &p;
    if r.is_negative() {
        r += &p;
    }
    r.to_u64().unwrap_or(0)
}

fn mul_mod(a: u64, b: u64) -> u64 {
    // Mersenne reduction
    let x = a as u128 * b as u128;
    let lo = (x as u64) & PRIME;
    let hi = (x >> 61) as u64;
    let r = lo + hi;
    let r = (r & PRIME) + (r >> 61);
    if r >= PRIME { r - PRIME } else { r }
}

fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a);
        }
        a = mul_mod(a, a);
        e >>= 1;
    }
    r
}

/// Does the mod-p rank of the selected rows reach `target`?
fn reaches_rank(rows: &[Vec<u64>], sel: &Bits, target: usize) -> bool {
    if target == 0 {
        return true;
    }
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::with_capacity(target);
    for i in sel.ones() {
        let mut v = rows[i].clone();
        for (pc, b) in &basis {
            let f = v[*pc];
            if f != 0 {
                for (x, y) in v.iter_mut().zip(b) {
                    let d = *x + PRIME - mul_mod(f, *y);
                    *x = if d >= PRIME { d - PRIME } else { d };
                }
            }
        }
        if let Some(pc) = v.iter().position(|&x| x != 0) {
            let inv = pow_mod(v[pc], PRIME - 2);
            for x in v.iter_mut() {
                *x = mul_mod(*x, inv);
            }
            basis.push((pc, v));
            if basis.len() == target {
                return true;
            }
        }
    }
    false
}

/// True when every square minor of at most `dim` rows is smaller than the
/// prime in absolute value (Hadamard's bound), so a minor vanishing mod p
/// vanishes over Q and the modular rank is the rational rank.
fn hadamard_below_prime(rows: &[Vec<BigInt>], dim: usize) -> bool {
    let mut logs: Vec<f64> = rows
        .iter()
        .map(|r| {
            let sq: f64 = r.iter().map(|x| x.to_f64().unwrap_or(f64::INFINITY).powi(2)).sum();
            0.5 * sq.max(1.0).log2()
        })
        .collect();
    logs.sort_by(|a, b| b.total_cmp(a));
    let bound: f64 = logs.iter().take(dim).sum();
    // margin for float rounding in the logarithms
    bound < 60.0
}

fn combine(s: &BigInt, x: &[BigInt], t: &BigInt, y: &[BigInt]) -> Vec<BigInt> {
    make_primitive(x.iter().zip(y).map(|(a, b)| s * a - t * b).collect())
}

/// Double description on `{t : row·t ≥ 0}` in dimension `dim`, inserting
/// rows in `order`. Returns primitive rays and a lineality basis.
fn dd_core(dim: usize, rows: &[Vec<BigInt>], order: &[usize], opts: DdOptions) -> Result<(Vec<Vec<BigInt>>, Vec<Vec<BigInt>>)> {
    let m = rows.len();
    let rows_mod: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(residue).collect()).collect();
    let rank_is_exact = hadamard_below_prime(rows, dim);
    let mut lin: Vec<Vec<BigInt>> = (0..dim)
        .map(|j| (0..dim).map(|k| BigInt::from((j == k) as i32)).collect())
        .collect();
    let mut rays: Vec<Ray> = Vec::new();
    let mut done = Bits::new(m);
    for &i in order {
        let a = &rows[i];
        if a.iter().all(|x| x.is_zero()) {
            for r in rays.iter_mut() {
                r.zero.set(i);
            }
            done.set(i);
            continue;
        }
        if let Some(k) = lin.iter().position(|l| !dot_int(a, l).is_zero()) {
            let mut l = lin.remove(k);
            let mut s = dot_int(a, &l);
            if s.is_negative() {
                l.iter_mut().for_each(|x| *x = -&*x);
                s = -s;
            }
            for v in lin.iter_mut() {
                let sv = dot_int(a, v);
                if !sv.is_zero() {
                    *v = combine(&s, v, &sv, &l);
                }
            }
            for r in rays.iter_mut() {
                let sr = dot_int(a, &r.t);
                if !sr.is_zero() {
                    r.t = combine(&s, &r.t, &sr, &l);
                }
                r.zero.set(i);
            }
            rays.push(Ray {
                t: l,
                zero: done.clone(),
            });
        } else {
            let vals: Vec<BigInt> = rays.iter().map(|r| dot_int(a, &r.t)).collect();
            let pos: Vec<usize> = (0..rays.len()).filter(|&j| vals[j].is_positive()).collect();
            let neg: Vec<usize> = (0..rays.len()).filter(|&j| vals[j].is_negative()).collect();
            let free = dim - lin.len();
            let target = free.saturating_sub(2);
            let snapshot = &rays;
            let (rows_mod, vals_ref, neg_ref) = (&rows_mod, &vals, &neg);
            let fresh: Vec<Ray> = pos
                .par_iter()
                .flat_map_iter(|&p| {
                    neg_ref.iter().filter_map(move |&q| {
                        let z = snapshot[p].zero.and(&snapshot[q].zero);
                        if z.count() < target {
                            return None;
                        }
                        let adjacent = reaches_rank(rows_mod, &z, target)
                            || !rank_is_exact && !snapshot
                                .iter()
                                .enumerate()
                                .any(|(j, r)| j != p && j != q && r.zero.contains_all(&z));
                        if !adjacent {
                            return None;
                        }
                        let mut zero = z;
                        zero.set(i);
                        let t = combine(&vals_ref[p], &snapshot[q].t, &vals_ref[q], &snapshot[p].t);
                        Some(Ray { t, zero })
                    })
                })
                .collect();
            let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + fresh.len());
            for (j, mut r) in rays.into_iter().enumerate() {
                if vals[j].is_negative() {
                    continue;
                }
                if vals[j].is_zero() {
                    r.zero.set(i);
                }
                next.push(r);
            }
            next.extend(fresh);
            rays = next;
            if let Some(cap) = opts.max_rays {
                if rays.len() > cap {
                    return Err(Error::Cap(format!("more than {cap} intermediate rays")));
                }
            }
        }
        done.set(i);
    }
    Ok((rays.into_iter().map(|r| r.t).collect(), lin))
}

/// Generators of a possibly non-pointed cone: extreme rays (modulo the
/// lineality space) and a basis of the lineality space.
#[derive(Clone, Debug, PartialEq)]
pub struct Generators {
    pub rays: Vec<Vec<BigInt>>,
    pub lineality: Vec<Vec<BigInt>>,
}

/// Generators of `{x ∈ R^dim : a·x ≥ 0 (a ∈ ineqs), b·x = 0 (b ∈ eqs)}`.
pub fn dd_generators(
    dim: usize,
    ineqs: &[Vec<Rational>],
    eqs: &[Vec<Rational>],
    opts: DdOptions,
) -> Result<Generators> {
    if let Some(r) = ineqs.iter().chain(eqs).find(|r| r.len() != dim) {
        return Err(Error::Invalid(format!("row of length {} in dimension {dim}", r.len())));
    }
    let basis: Vec<Vec<BigInt>> = if eqs.is_empty() {
        (0..dim)
            .map(|j| (0..dim).map(|k| BigInt::from((j == k) as i32)).collect())
            .collect()
    } else {
        null_space(eqs, dim).iter().map(|v| primitive_from_rationals(v)).collect()
    };
    let sub = basis.len();
    let rows: Vec<Vec<BigInt>> = ineqs
        .iter()
        .map(|a| {
            let a = primitive_from_rationals(a);
            make_primitive(basis.iter().map(|w| dot_int(&a, w)).collect())
        })
        .collect();
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by_key(|&i| (rows[i].iter().filter(|x| !x.is_zero()).count(), i));
    let (t_rays, t_lin) = dd_core(sub, &rows, &order, opts)?;
    let lift = |t: Vec<BigInt>| {
        let mut x = vec![BigInt::zero(); dim];
        for (tj, w) in t.iter().zip(&basis) {
            if tj.is_zero() {
                continue;
            }
            for (xk, wk) in x.iter_mut().zip(w) {
                *xk += tj * wk;
            }
        }
        make_primitive(x)
    };
    Ok(Generators {
        rays: t_rays.into_iter().map(lift).collect(),
        lineality: t_lin.into_iter().map(lift).collect(),
    })
}

/// Extreme rays of `{x ∈ R^dim : a·x ≥ 0 (a ∈ ineqs), b·x = 0 (b ∈ eqs)}`;
/// the cone must be pointed.
pub fn dd_rays_dense(
    dim: usize,
    ineqs: &[Vec<Rational>],
    eqs: &[Vec<Rational>],
    opts: DdOptions,
) -> Result<RayList> {
    let g = dd_generators(dim, ineqs, eqs, opts)?;
    if !g.lineality.is_empty() {
        return Err(Error::NotPointed(g.lineality.len()));
    }
    Ok(RayList::new(dim, g.rays))
}

/// Extreme rays of the cone cut out by functionals over one ground set.
pub fn dd_rays(ineqs: &[LinearFunctional], eqs: &[LinearFunctional], opts: DdOptions) -> Result<RayList> {
    let Some(first) = ineqs.first().or(eqs.first()) else {
        return Err(Error::Invalid("no constraints".into()));
    };
    let g = first.ground();
    if ineqs.iter().chain(eqs).any(|e| e.ground() != g) {
        return Err(Error::GroundMismatch);
    }
    let dense = |v: &[LinearFunctional]| v.iter().map(|e| e.dense()).collect::<Vec<_>>();
    dd_rays_dense(g.dim(), &dense(ineqs), &dense(eqs), opts)
}

/// Extreme rays of the basic-inequality cone on a ground set.
pub fn shannon_rays(ground: &GroundSet, opts: DdOptions) -> Result<RayList> {
    let ineqs = crate::shannon::shannon_basic(ground)?;
    dd_rays(&ineqs, &[], opts)
}

#[derive(Clone, Debug)]
pub struct ConsequenceCone {
    pub rays: RayList,
    /// Generators enumerated before reduction to main coordinates.
    pub intermediate: usize,
    /// Dimension of the space of valid equalities among main variables; each
    /// such equality appears in `rays` with both signs.
    pub equalities: usize,
}

fn dense_rows(sys: &ConstraintSystem) -> Result<(Vec<Vec<Rational>>, Vec<Vec<Rational>>)> {
    let n = sys.nvars();
    let mut ineqs = Vec::new();
    let mut eqs = Vec::new();
    for row in &sys.rows {
        if !row.rhs.is_zero() {
            return Err(Error::Invalid(format!("row `{}` is not homogeneous", row.tag)));
        }
        let mut v = vec![Rational::zero(); n];
        for (j, c) in &row.coeffs {
            v[*j] = c.clone();
        }
        match row.rel {
            Relation::Geq => ineqs.push(v),
            Relation::Eq => eqs.push(v),
        }
    }
    Ok((ineqs, eqs))
}

/// The main-variable inequalities implied by a homogeneous system: the
/// feasible cone is enumerated, its generators are cut to the main
/// coordinates, and the dual of their span gives the consequences.
pub fn consequence_cone(sys: &ConstraintSystem, opts: DdOptions) -> Result<ConsequenceCone> {
    let main = sys.main;
    let (ineqs, eqs) = dense_rows(sys)?;
    let feasible = dd_generators(sys.nvars(), &ineqs, &eqs, opts)?;
    let cut = |v: &Vec<BigInt>| -> Option<Vec<Rational>> {
        let head = &v[..main];
        head.iter()
            .any(|x| !x.is_zero())
            .then(|| head.iter().map(|x| Rational::from_integer(x.clone())).collect())
    };
    let mut dual_ineqs: Vec<Vec<Rational>> = feasible.rays.iter().filter_map(cut).collect();
    let dual_eqs: Vec<Vec<Rational>> = feasible.lineality.iter().filter_map(cut).collect();
    dual_ineqs.sort();
    dual_ineqs.dedup();
    let dual = dd_generators(main, &dual_ineqs, &dual_eqs, opts)?;
    let equalities = dual.lineality.len();
    let mut rays = dual.rays;
    for l in dual.lineality {
        rays.push(l.iter().map(|x| -x).collect());
        rays.push(l);
    }
    Ok(ConsequenceCone {
        rays: RayList::new(main, rays),
        intermediate: feasible.rays.len() + feasible.lineality.len(),
        equalities,
    })
}

/// Extreme rays of `{hP : hQ = 0, h ≥ 0}` where `P` holds the main columns
/// of the system and `Q` the auxiliary ones, reduced by LP redundancy tests.
pub fn consequence_cone_multipliers(sys: &ConstraintSystem, opts: DdOptions) -> Result<ConsequenceCone> {
    let main = sys.main;
    let aux = sys.nvars() - main;
    let mut pool: Vec<Vec<BigInt>> = Vec::new();
    let mut p_rows: Vec<Vec<Rational>> = Vec::new();
    let mut q_rows: Vec<Vec<Rational>> = Vec::new();
    for row in &sys.rows {
        if !row.rhs.is_zero() {
            return Err(Error::Invalid(format!("row `{}` is not homogeneous", row.tag)));
        }
        let mut p = vec![Rational::zero(); main];
        let mut q = vec![Rational::zero(); aux];
        for (j, c) in &row.coeffs {
            if *j < main {
                p[*j] = c.clone();
            } else {
                q[*j - main] = c.clone();
            }
        }
        let signs: &[bool] = if row.rel == Relation::Eq { &[false, true] } else { &[false] };
        for &flip in signs {
            let (p, q) = if flip {
                (p.iter().map(|x| -x).collect(), q.iter().map(|x| -x).collect())
            } else {
                (p.clone(), q.clone())
            };
            if q.iter().all(|x| x.is_zero()) {
                pool.push(primitive_from_rationals(&p));
            } else {
                p_rows.push(p);
                q_rows.push(q);
            }
        }
    }
    let m = p_rows.len();
    let mut images = pool;
    let mut intermediate = 0;
    if m > 0 {
        let unit: Vec<Vec<Rational>> = (0..m)
            .map(|i| (0..m).map(|k| Rational::from_integer(BigInt::from((i == k) as i32))).collect())
            .collect();
        let eqs: Vec<Vec<Rational>> = (0..aux)
            .map(|c| q_rows.iter().map(|q| q[c].clone()).collect())
            .filter(|col: &Vec<Rational>| col.iter().any(|x| !x.is_zero()))
            .collect();
        let h = dd_rays_dense(m, &unit, &eqs, opts)?;
        intermediate = h.len();
        for ray in &h.rays {
            let mut img = vec![Rational::zero(); main];
            for (hi, p) in ray.iter().zip(&p_rows) {
                if hi.is_zero() {
                    continue;
                }
                let hi = Rational::from_integer(hi.clone());
                for (x, c) in img.iter_mut().zip(p) {
                    if !c.is_zero() {
                        *x += &hi * c;
                    }
                }
            }
            images.push(primitive_from_rationals(&img));
        }
    }
    let set: BTreeSet<Vec<BigInt>> = images
        .into_iter()
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .collect();
    let distinct: Vec<Vec<BigInt>> = set.into_iter().collect();
    let kept = extreme_subset(main, &distinct);
    Ok(ConsequenceCone {
        rays: RayList::new(main, kept),
        intermediate,
        equalities: 0,
    })
}

fn to_sparse(v: &[BigInt]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(j, x)| (j, Rational::from_integer(x.clone())))
        .collect()
}

/// Is `target` in the cone generated by `gens`?
pub fn in_cone(dim: usize, gens: &[SparseVec], target: &SparseVec) -> bool {
    let mut b = vec![Rational::zero(); dim];
    for (j, c) in target {
        b[*j] = c.clone();
    }
    matches!(solve_standard(dim, gens, &b, None), Standard::Optimal(_))
}

/// Generators that are not non-negative combinations of the others.
fn extreme_subset(dim: usize, gens: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let sparse: Vec<SparseVec> = gens.iter().map(|g| to_sparse(g)).collect();
    let pointed = {
        // Σλ = 1, Σλ g = 0 has no solution
        let cols: Vec<SparseVec> = sparse
            .iter()
            .map(|s| {
                let mut c = s.clone();
                c.push((dim, Rational::from_integer(1.into())));
                c
            })
            .collect();
        let mut b = vec![Rational::zero(); dim + 1];
        b[dim] = Rational::from_integer(1.into());
        gens.is_empty() || !matches!(solve_standard(dim + 1, &cols, &b, None), Standard::Optimal(_))
    };
    if pointed {
        let redundant: Vec<bool> = (0..gens.len())
            .into_par_iter()
            .map(|i| {
                let others: Vec<SparseVec> = sparse
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, s)| s.clone())
                    .collect();
                in_cone(dim, &others, &sparse[i])
            })
            .collect();
        gens.iter()
            .zip(redundant)
            .filter(|(_, r)| !r)
            .map(|(g, _)| g.clone())
            .collect()
    } else {
        let mut keep = vec![true; gens.len()];
        for i in 0..gens.len() {
            let others: Vec<SparseVec> = (0..gens.len())
                .filter(|&j| j != i && keep[j])
                .map(|j| sparse[j].clone())
                .collect();
            if in_cone(dim, &others, &sparse[i]) {
                keep[i] = false;
            }
        }
        gens.iter()
            .zip(keep)
            .filter(|(_, k)| *k)
            .map(|(g, _)| g.clone())
            .collect()
    }
}

/// Drops rays that are consequences of the basic inequalities on `ground`.
pub fn filter_shannon(rays: &RayList, ground: &GroundSet) -> RayList {
    let sys = ConstraintSystem::shannon(ground);
    let keep: Vec<bool> = rays
        .rays
        .par_iter()
        .map(|r| matches!(implies(&sys, &to_sparse(r)), Implication::No(_)))
        .collect();
    RayList {
        dim: rays.dim,
        rays: rays
            .rays
            .iter()
            .zip(keep)
            .filter(|(_, k)| *k)
            .map(|(r, _)| r.clone())
            .collect(),
    }
}

/// Image of a subset-indexed vector under an element permutation.
pub fn permute_vector(v: &[BigInt], sigma: &Permutation) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); v.len()];
    for (i, x) in v.iter().enumerate() {
        out[sigma.apply(Subset::from_index(i)).index()] = x.clone();
    }
    out
}

/// Transposition and long cycle generating the full symmetric group.
pub fn symmetric_group(n: usize) -> Vec<Permutation> {
    if n < 2 {
        return Vec::new();
    }
    vec![Permutation::transposition(n, 0, 1), Permutation::cycle(n)]
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OrbitClass {
    /// Lexicographically least member of the orbit.
    pub representative: Vec<BigInt>,
    pub orbit_size: usize,
    /// How many input rays fell into this class.
    pub members: usize,
}

pub fn orbit(v: &[BigInt], generators: &[Permutation]) -> BTreeSet<Vec<BigInt>> {
    let mut seen: HashSet<Vec<BigInt>> = HashSet::new();
    let mut queue = VecDeque::from([v.to_vec()]);
    seen.insert(v.to_vec());
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = permute_vector(&x, g);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen.into_iter().collect()
}

/// Groups rays into orbits of the group generated by `generators`.
pub fn orbit_dedup(rays: &RayList, generators: &[Permutation]) -> Vec<OrbitClass> {
    let reps: Vec<(Vec<BigInt>, usize)> = rays
        .rays
        .par_iter()
        .map(|r| {
            let o = orbit(r, generators);
            let size = o.len();
            (o.into_iter().next().unwrap_or_default(), size)
        })
        .collect();
    let mut classes: BTreeMap<Vec<BigInt>, OrbitClass> = BTreeMap::new();
    for (rep, size) in reps {
        classes
            .entry(rep.clone())
            .or_insert(OrbitClass {
                representative: rep,
                orbit_size: size,
                members: 0,
            })
            .members += 1;
    }
    classes.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::Row;
    use crate::num::{rat, rank};
    use crate::shannon::{r_vector, u_vector};

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn rats(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    /// Every rank-(d−1) subset of rows; keep null directions satisfying all rows.
    fn brute(dim: usize, rows: &[Vec<Rational>]) -> BTreeSet<Vec<BigInt>> {
        let mut out = BTreeSet::new();
        for mask in 1u32..(1 << rows.len()) {
            let sel: Vec<Vec<Rational>> = (0..rows.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| rows[i].clone())
                .collect();
            if rank(&sel) != dim - 1 {
                continue;
            }
            let ns = null_space(&sel, dim);
            for sign in [1, -1] {
                let v: Vec<Rational> = ns[0].iter().map(|x| x * rat(sign)).collect();
                let ok = rows
                    .iter()
                    .all(|r| r.iter().zip(&v).map(|(a, b)| a * b).sum::<Rational>() >= rat(0));
                if ok {
                    out.insert(primitive_from_rationals(&v));
                }
            }
        }
        out
    }

    #[test]
    fn orthant() {
        let rows: Vec<Vec<Rational>> = vec![rats(&[1, 0, 0]), rats(&[0, 1, 0]), rats(&[0, 0, 1])];
        let r = dd_rays_dense(3, &rows, &[], DdOptions::default()).unwrap();
        assert_eq!(r.rays, vec![ints(&[0, 0, 1]), ints(&[0, 1, 0]), ints(&[1, 0, 0])]);
    }

    #[test]
    fn half_space_is_not_pointed() {
        let rows = vec![rats(&[1, 1])];
        assert_eq!(dd_rays_dense(2, &rows, &[], DdOptions::default()), Err(Error::NotPointed(1)));
    }

    #[test]
    fn pyramid_with_equality() {
        // square pyramid cone cut by a plane through the apex
        let rows = vec![rats(&[1, 0, 1]), rats(&[-1, 0, 1]), rats(&[0, 1, 1]), rats(&[0, -1, 1])];
        let all = dd_rays_dense(3, &rows, &[], DdOptions::default()).unwrap();
        assert_eq!(all.len(), 4);
        assert_eq!(all.rays.iter().cloned().collect::<BTreeSet<_>>(), brute(3, &rows));
        let cut = dd_rays_dense(3, &rows, &[rats(&[1, 0, 0])], DdOptions::default()).unwrap();
        assert_eq!(cut.rays, vec![ints(&[0, -1, 1]), ints(&[0, 1, 1])]);
    }

    #[test]
    fn gamma_three() {
        let g = GroundSet::letters(3).unwrap();
        let rays = shannon_rays(&g, DdOptions::default()).unwrap();
        assert_eq!(rays.len(), 8);
        let mut expect: Vec<Vec<BigInt>> = (1..8u32)
            .map(|j| primitive_from_rationals(r_vector(&g, Subset(j)).unwrap().ranks()))
            .collect();
        expect.push(primitive_from_rationals(u_vector(&g).unwrap().ranks()));
        expect.sort();
        assert_eq!(rays.rays, expect);
        assert_eq!(orbit_dedup(&rays, &symmetric_group(3)).len(), 4);
        assert_eq!(orbit_dedup(&rays, &[]).len(), 8);
    }

    #[test]
    fn consequences_of_projection() {
        // x0 − y ≥ 0, y − x1 ≥ 0 eliminate y to x0 − x1 ≥ 0
        let mut sys = ConstraintSystem::new(vec!["x0".into(), "x1".into(), "y".into()]);
        sys.main = 2;
        sys.push(Row::new(vec![(0, rat(1)), (2, rat(-1))], Relation::Geq, "r0")).unwrap();
        sys.push(Row::new(vec![(2, rat(1)), (1, rat(-1))], Relation::Geq, "r1")).unwrap();
        sys.push(Row::new(vec![(1, rat(1))], Relation::Geq, "r2")).unwrap();
        sys.push(Row::new(vec![(0, rat(2)), (1, rat(-2))], Relation::Geq, "r3")).unwrap();
        let c = consequence_cone(&sys, DdOptions::default()).unwrap();
        assert_eq!(c.rays.rays, vec![ints(&[0, 1]), ints(&[1, -1])]);
        let m = consequence_cone_multipliers(&sys, DdOptions::default()).unwrap();
        assert_eq!(m.rays, c.rays);
    }

    fn same_cone(dim: usize, a: &RayList, b: &RayList) -> bool {
        let sa: Vec<SparseVec> = a.rays.iter().map(|r| to_sparse(r)).collect();
        let sb: Vec<SparseVec> = b.rays.iter().map(|r| to_sparse(r)).collect();
        a.rays.iter().all(|r| in_cone(dim, &sb, &to_sparse(r))) && b.rays.iter().all(|r| in_cone(dim, &sa, &to_sparse(r)))
    }

    #[test]
    fn both_consequence_routes_agree() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let main = rng.gen_range(2..4);
            let nv = main + rng.gen_range(1..3);
            let mut sys = ConstraintSystem::new((0..nv).map(|j| format!("x{j}")).collect());
            sys.main = main;
            for k in 0..rng.gen_range(3..8) {
                let coeffs = (0..nv).map(|j| (j, rat(rng.gen_range(-2..3)))).filter(|(_, c)| *c != rat(0)).collect();
                let rel = if rng.gen_bool(0.2) { Relation::Eq } else { Relation::Geq };
                sys.push(Row::new(coeffs, rel, format!("r{k}"))).unwrap();
            }
            let a = consequence_cone(&sys, DdOptions::default()).unwrap();
            let b = consequence_cone_multipliers(&sys, DdOptions::default()).unwrap();
            assert!(same_cone(main, &a.rays, &b.rays), "{:?} vs {:?}", a.rays, b.rays);
            for r in &a.rays.rays {
                assert!(matches!(implies(&sys, &to_sparse(r)), Implication::Yes(_)));
            }
        }
    }

    #[test]
    fn shannon_filter_keeps_only_new() {
        let g = GroundSet::letters(2).unwrap();
        let rays = RayList::new(3, vec![ints(&[1, 1, -1]), ints(&[-1, 0, 1]), ints(&[1, 0, 0])]);
        assert!(filter_shannon(&rays, &g).is_empty());
        let bad = RayList::new(3, vec![ints(&[-1, 0, 0])]);
        assert_eq!(filter_shannon(&bad, &g).len(), 1);
    }
}
