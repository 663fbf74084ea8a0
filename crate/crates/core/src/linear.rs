//! Linear polymatroids over prime fields.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{parse_err, Error, Result};
use crate::ground::{GroundSet, Subset};
use crate::num::{rat, Rational};
use crate::ops::principal_extension;
use crate::poly::{Polymatroid, SetFunction};
use crate::text::content_lines;

/// Vectors over GF(p), one list per element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearRep {
    prime: u64,
    dim: usize,
    ground: GroundSet,
    vectors: Vec<Vec<Vec<u64>>>,
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut r, mut e, mut b) = (1u64, p - 2, a % p);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Row-reduce in place; returns the independent rows (echelon form).
fn echelon(rows: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    for r in rows {
        if let Some(v) = reduce(&basis, r.clone(), p) {
            basis.push(v);
        }
    }
    basis.into_iter().map(|(_, v)| v).collect()
}

/// Reduce `v` against pivoted basis rows; returns the new pivoted row if `v`
/// is independent of them.
fn reduce(basis: &[(usize, Vec<u64>)], mut v: Vec<u64>, p: u64) -> Option<(usize, Vec<u64>)> {
    for (piv, b) in basis {
        let c = v[*piv];
        if c != 0 {
            for (x, y) in v.iter_mut().zip(b) {
                *x = (*x + p - c * y % p) % p;
            }
        }
    }
    let piv = v.iter().position(|&x| x != 0)?;
    let inv = inv_mod(v[piv], p);
    for x in v.iter_mut() {
        *x = *x * inv % p;
    }
    Some((piv, v))
}

fn rank_mod(rows: &[Vec<u64>], p: u64) -> usize {
    echelon(rows, p).len()
}

/// Coordinates of `v` in terms of independent `basis` rows, if it lies in their span.
fn coordinates(basis: &[Vec<u64>], v: &[u64], p: u64) -> Option<Vec<u64>> {
    let k = basis.len();
    let d = v.len();
    // augmented system: columns are basis vectors, rows are coordinates
    let mut m: Vec<Vec<u64>> = (0..d)
        .map(|r| {
            let mut row: Vec<u64> = basis.iter().map(|b| b[r]).collect();
            row.push(v[r]);
            row
        })
        .collect();
    let mut piv_cols = Vec::new();
    let mut row = 0;
    for col in 0..k {
        let Some(pr) = (row..d).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(row, pr);
        let inv = inv_mod(m[row][col], p);
        for x in m[row].iter_mut() {
            *x = *x * inv % p;
        }
        let prow = m[row].clone();
        for (r, line) in m.iter_mut().enumerate() {
            if r != row && line[col] != 0 {
                let c = line[col];
                for (x, y) in line.iter_mut().zip(&prow) {
                    *x = (*x + p - c * y % p) % p;
                }
            }
        }
        piv_cols.push(col);
        row += 1;
    }
    if m[row..].iter().any(|line| line[k] != 0) {
        return None;
    }
    let mut x = vec![0u64; k];
    for (r, &c) in piv_cols.iter().enumerate() {
        x[c] = m[r][k];
    }
    Some(x)
}

impl LinearRep {
    pub fn new(prime: u64, dim: usize, ground: GroundSet, vectors: Vec<Vec<Vec<u64>>>) -> Result<LinearRep> {
        if !is_prime(prime) || prime >= 1 << 31 {
            return Err(Error::Invalid(format!("{prime} is not a supported prime")));
        }
        if vectors.len() != ground.len() {
            return Err(Error::Invalid("one vector list per element".into()));
        }
        for (i, vs) in vectors.iter().enumerate() {
            if vs.iter().any(|v| v.len() != dim || v.iter().any(|&x| x >= prime)) {
                return Err(Error::Invalid(format!(
                    "vectors of `{}` must have {dim} entries below {prime}",
                    ground.label(i)
                )));
            }
            if rank_mod(vs, prime) != vs.len() {
                return Err(Error::Invalid(format!(
                    "vectors of `{}` are linearly dependent",
                    ground.label(i)
                )));
            }
        }
        Ok(LinearRep {
            prime,
            dim,
            ground,
            vectors,
        })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn vectors(&self, i: usize) -> &[Vec<u64>] {
        &self.vectors[i]
    }

    fn collect(&self, a: Subset) -> Vec<Vec<u64>> {
        a.elements().flat_map(|i| self.vectors[i].iter().cloned()).collect()
    }

    pub fn rank_of(&self, a: Subset) -> usize {
        rank_mod(&self.collect(a), self.prime)
    }

    pub fn to_polymatroid(&self) -> Polymatroid {
        Polymatroid::from_fn(self.ground.clone(), |a| rat(self.rank_of(a) as i64))
    }

    fn with_element(&self, label: &str, vs: Vec<Vec<u64>>) -> Result<LinearRep> {
        let ground = self.ground.extended(&[label])?;
        let mut vectors = self.vectors.clone();
        vectors.push(vs);
        LinearRep::new(self.prime, self.dim, ground, vectors)
    }

    /// New element spanning `span(V_A) ∩ span(V_B)`.
    pub fn common_info_extend(&self, a: Subset, b: Subset, label: &str) -> Result<LinearRep> {
        let p = self.prime;
        let ba = echelon(&self.collect(a), p);
        let bb = echelon(&self.collect(b), p);
        // solve Σ x_i a_i − Σ y_j b_j = 0; each solution gives Σ x_i a_i in the intersection
        let cols: Vec<Vec<u64>> = ba
            .iter()
            .cloned()
            .chain(bb.iter().map(|v| v.iter().map(|&x| (p - x) % p).collect()))
            .collect();
        let nvars = cols.len();
        let rows: Vec<Vec<u64>> = (0..self.dim)
            .map(|r| cols.iter().map(|c| c[r]).collect())
            .collect();
        let kernel = null_space_mod(&rows, nvars, p);
        let inter: Vec<Vec<u64>> = kernel
            .iter()
            .map(|x| {
                (0..self.dim)
                    .map(|r| ba.iter().zip(x).map(|(v, c)| v[r] * c % p).sum::<u64>() % p)
                    .collect()
            })
            .collect();
        self.with_element(label, echelon(&inter, p))
    }

    /// Append `α` random vectors of `span(V_Z)` realising the principal
    /// extension; each candidate is verified on every subset.
    pub fn generic_principal_extension(
        &self,
        z: Subset,
        alpha: usize,
        label: &str,
        seed: u64,
    ) -> Result<LinearRep> {
        const ATTEMPTS: usize = 200;
        let p = self.prime;
        let span = echelon(&self.collect(z), p);
        if alpha > span.len() {
            return Err(Error::Invalid(format!(
                "α = {alpha} exceeds dim span(V_Z) = {}",
                span.len()
            )));
        }
        let target = principal_extension(&self.to_polymatroid(), z, &rat(alpha as i64), label)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..ATTEMPTS {
            let vs: Vec<Vec<u64>> = (0..alpha)
                .map(|_| {
                    let coef: Vec<u64> = span.iter().map(|_| rng.gen_range(0..p)).collect();
                    (0..self.dim)
                        .map(|r| span.iter().zip(&coef).map(|(v, c)| v[r] * c % p).sum::<u64>() % p)
                        .collect()
                })
                .collect();
            if rank_mod(&vs, p) != alpha {
                continue;
            }
            let cand = self.with_element(label, vs)?;
            if cand.to_polymatroid() == target {
                return Ok(cand);
            }
        }
        Err(Error::Failed(format!(
            "no generic extension found in {ATTEMPTS} attempts over GF({p}); use a larger prime"
        )))
    }

    /// Representation of an `A`-copy over `D`: the copy of each vector keeps
    /// its `span(V_D)` component and moves the complementary component to
    /// fresh coordinates. Copies are labelled with a `'` suffix.
    pub fn linear_copy(&self, a: Subset, d: Subset) -> Result<LinearRep> {
        if a.is_empty() || a.meets(d) {
            return Err(Error::Invalid("copied set must be non-empty and disjoint from D".into()));
        }
        let p = self.prime;
        let bd = echelon(&self.collect(d), p);
        let k = bd.len();
        let mut basis = bd.clone();
        let mut piv: Vec<(usize, Vec<u64>)> = Vec::new();
        for v in &bd {
            piv.push(reduce(&piv, v.clone(), p).expect("independent"));
        }
        for v in self.collect(self.ground.full()) {
            if let Some(r) = reduce(&piv, v.clone(), p) {
                piv.push(r);
                basis.push(v);
            }
        }
        let l = basis.len() - k;
        let new_dim = 2 * l + k;
        let express = |v: &Vec<u64>, copy: bool| -> Vec<u64> {
            let c = coordinates(&basis, v, p).expect("vector lies in the span");
            let mut out = vec![0u64; new_dim];
            out[..k].copy_from_slice(&c[..k]);
            let off = if copy { k + l } else { k };
            out[off..off + l].copy_from_slice(&c[k..]);
            out
        };
        let mut vectors: Vec<Vec<Vec<u64>>> = self
            .vectors
            .iter()
            .map(|vs| vs.iter().map(|v| express(v, false)).collect())
            .collect();
        let mut labels: Vec<String> = self.ground.labels().to_vec();
        for i in a.elements() {
            vectors.push(self.vectors[i].iter().map(|v| express(v, true)).collect());
            labels.push(format!("{}'", self.ground.label(i)));
        }
        LinearRep::new(p, new_dim, GroundSet::new(&labels)?, vectors)
    }

    /// Random representation: each element gets up to `max_vecs` random
    /// vectors, dependent ones dropped.
    pub fn random<R: Rng>(rng: &mut R, prime: u64, dim: usize, n: usize, max_vecs: usize) -> LinearRep {
        let ground = GroundSet::letters(n).expect("small ground");
        let vectors = (0..n)
            .map(|_| {
                let count = rng.gen_range(0..=max_vecs);
                let raw: Vec<Vec<u64>> = (0..count)
                    .map(|_| (0..dim).map(|_| rng.gen_range(0..prime)).collect())
                    .collect();
                let mut kept: Vec<Vec<u64>> = Vec::new();
                for v in raw {
                    let mut trial = kept.clone();
                    trial.push(v.clone());
                    if rank_mod(&trial, prime) == trial.len() {
                        kept.push(v);
                    }
                }
                kept
            })
            .collect();
        LinearRep::new(prime, dim, ground, vectors).expect("valid by construction")
    }
}

fn null_space_mod(rows: &[Vec<u64>], ncols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut m: Vec<Vec<u64>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, pr);
        let inv = inv_mod(m[r][c], p);
        for x in m[r].iter_mut() {
            *x = *x * inv % p;
        }
        let prow = m[r].clone();
        for (i, line) in m.iter_mut().enumerate() {
            if i != r && line[c] != 0 {
                let f = line[c];
                for (x, y) in line.iter_mut().zip(&prow) {
                    *x = (*x + p - f * y % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![0u64; ncols];
            v[f] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - m[i][f]) % p;
            }
            v
        })
        .collect()
}

/// The six Ingleton values `[a,b,c,d]`, one per choice of the pair `{a,b}`.
pub fn ingleton_all<F: SetFunction>(f: &F) -> Result<Vec<F::Value>> {
    if f.ground().len() != 4 {
        return Err(Error::Invalid("Ingleton instances need exactly four elements".into()));
    }
    let mut out = Vec::with_capacity(6);
    for a in 0..4 {
        for b in a + 1..4 {
            let rest: Vec<usize> = (0..4).filter(|&x| x != a && x != b).collect();
            out.push(f.ingleton(a, b, rest[0], rest[1]));
        }
    }
    Ok(out)
}

/// Checks of the three copy conditions: extension, isomorphism of `A′D`
/// with `AD`, and `f*(A′N) = f(A‖D) + f(N)`.
pub fn is_copy(f: &Polymatroid, g: &Polymatroid, a: Subset, d: Subset) -> bool {
    copy_violation(f, g, a, d).is_none()
}

/// First failed copy condition, described.
pub fn copy_violation(f: &Polymatroid, g: &Polymatroid, a: Subset, d: Subset) -> Option<String> {
    let n = f.len();
    let acount = a.len();
    if g.len() != n + acount {
        return Some("copy has the wrong number of elements".into());
    }
    for s in f.ground().nonempty_subsets() {
        if g.at(s) != f.at(s) {
            return Some(format!("differs from the original on {}", f.ground().name(s)));
        }
    }
    // copy j of A's i-th element is n + j
    let aelems: Vec<usize> = a.elements().collect();
    let to_copy = |s: Subset| -> Subset {
        Subset::from_elements(s.elements().map(|i| {
            let j = aelems.iter().position(|&x| x == i).expect("element of A");
            n + j
        }))
    };
    for j in a.subsets() {
        for k in d.subsets() {
            if (j | k).is_empty() {
                continue;
            }
            if g.at(to_copy(j) | k) != f.at(j | k) {
                return Some(format!(
                    "isomorphism fails on {}",
                    f.ground().name(j | k)
                ));
            }
        }
    }
    let copies = Subset(((1u64 << (n + acount)) - 1) as u32) - f.ground().full();
    let lhs = g.at(copies | f.ground().full());
    let rhs: Rational = f.cond(a, d) + f.at(f.ground().full());
    if lhs != rhs {
        return Some("conditional independence fails".into());
    }
    None
}

pub fn parse_rep(text: &str) -> Result<LinearRep> {
    let mut prime = None;
    let mut dim = None;
    let mut labels: Vec<String> = Vec::new();
    let mut vecs: Vec<(usize, String, Vec<u64>)> = Vec::new();
    for (ln, line) in content_lines(text) {
        if let Some(r) = line.strip_prefix("prime:") {
            prime = Some(r.trim().parse::<u64>().map_err(|_| parse_err(ln, "bad prime"))?);
        } else if let Some(r) = line.strip_prefix("dim:") {
            dim = Some(r.trim().parse::<usize>().map_err(|_| parse_err(ln, "bad dimension"))?);
        } else if let Some(r) = line.strip_prefix("base:") {
            labels = r.split_whitespace().map(str::to_string).collect();
        } else if let Some(r) = line.strip_prefix("vec") {
            let toks: Vec<&str> = r.split_whitespace().collect();
            let (name, vals) = toks.split_first().ok_or_else(|| parse_err(ln, "missing element"))?;
            let vals = vals
                .iter()
                .map(|t| t.parse::<u64>().map_err(|_| parse_err(ln, format!("bad entry `{t}`"))))
                .collect::<Result<Vec<u64>>>()?;
            if !labels.iter().any(|l| l == name) {
                labels.push(name.to_string());
            }
            vecs.push((ln, name.to_string(), vals));
        } else {
            return Err(parse_err(ln, format!("unexpected line `{line}`")));
        }
    }
    let prime = prime.ok_or_else(|| parse_err(1, "missing `prime:`"))?;
    let dim = dim.ok_or_else(|| parse_err(1, "missing `dim:`"))?;
    let ground = GroundSet::new(&labels).map_err(|e| parse_err(1, e.to_string()))?;
    let mut vectors = vec![Vec::new(); ground.len()];
    for (ln, name, v) in vecs {
        if v.len() != dim {
            return Err(parse_err(ln, format!("expected {dim} entries")));
        }
        vectors[ground.index_of(&name).expect("registered")].push(v);
    }
    LinearRep::new(prime, dim, ground, vectors).map_err(|e| parse_err(0, e.to_string()))
}

pub fn write_rep(rep: &LinearRep) -> String {
    let mut out = format!("prime: {}\ndim: {}\nbase: {}\n", rep.prime, rep.dim, rep.ground);
    for (i, vs) in rep.vectors.iter().enumerate() {
        for v in vs {
            let vals: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            out.push_str(&format!("vec {} {}\n", rep.ground.label(i), vals.join(" ")));
        }
    }
    out
}
