//! Finite joint distributions and their entropy profiles (bits, `f64`).

use crate::error::{parse_err, Error, Result};
use crate::ground::{GroundSet, Subset};
use crate::linear::LinearRep;
use crate::poly::{Polymatroid, SetFunction};
use crate::shannon::shannon_instances;
use crate::text::{content_lines, parse_base};

/// Default tolerance for profile comparisons.
pub const PROFILE_TOL: f64 = 1e-9;
/// Default tolerance for the total mass.
pub const MASS_TOL: f64 = 1e-12;
/// Default cap on the number of table cells.
pub const DEFAULT_MAX_CELLS: usize = 1 << 24;

/// Dense joint probability table; element 0 is the fastest-varying coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct JointDistribution {
    ground: GroundSet,
    alphabets: Vec<usize>,
    mass: Vec<f64>,
}

fn cells(alphabets: &[usize], cap: usize) -> Result<usize> {
    let mut total: usize = 1;
    for &k in alphabets {
        total = total
            .checked_mul(k)
            .filter(|&t| t <= cap)
            .ok_or_else(|| Error::Cap(format!("distribution table exceeds {cap} cells")))?;
    }
    Ok(total)
}

impl JointDistribution {
    pub fn new(ground: GroundSet, alphabets: Vec<usize>, mass: Vec<f64>) -> Result<JointDistribution> {
        if alphabets.len() != ground.len() || alphabets.iter().any(|&k| k == 0) {
            return Err(Error::Invalid("one positive alphabet size per element".into()));
        }
        let total = cells(&alphabets, usize::MAX)?;
        if mass.len() != total {
            return Err(Error::Invalid("mass table has wrong size".into()));
        }
        if mass.iter().any(|&m| !(m >= 0.0)) {
            return Err(Error::Invalid("masses must be non-negative".into()));
        }
        let s: f64 = mass.iter().sum();
        if (s - 1.0).abs() > MASS_TOL * (1.0 + mass.len() as f64).sqrt().max(1.0) {
            return Err(Error::Invalid(format!("masses sum to {s}, not 1")));
        }
        Ok(JointDistribution {
            ground,
            alphabets,
            mass,
        })
    }

    /// Build from `(tuple, mass)` entries; missing tuples get mass 0.
    pub fn from_entries(
        ground: GroundSet,
        alphabets: Vec<usize>,
        entries: &[(Vec<usize>, f64)],
    ) -> Result<JointDistribution> {
        let total = cells(&alphabets, DEFAULT_MAX_CELLS)?;
        let mut mass = vec![0.0; total];
        for (t, p) in entries {
            let idx = encode(&alphabets, t)?;
            mass[idx] += p;
        }
        JointDistribution::new(ground, alphabets, mass)
    }

    /// Distribution of a function of a uniform variable over `count` outcomes.
    pub fn uniform_image<F: FnMut(usize) -> Vec<usize>>(
        ground: GroundSet,
        alphabets: Vec<usize>,
        count: usize,
        mut f: F,
    ) -> Result<JointDistribution> {
        let total = cells(&alphabets, DEFAULT_MAX_CELLS)?;
        let mut mass = vec![0.0; total];
        let p = 1.0 / count as f64;
        for w in 0..count {
            let idx = encode(&alphabets, &f(w))?;
            mass[idx] += p;
        }
        JointDistribution::new(ground, alphabets, mass)
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn alphabets(&self) -> &[usize] {
        &self.alphabets
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    /// Marginal masses over the elements of `a`, indexed like a table on `a`.
    fn marginal_table(&self, a: Subset) -> Vec<f64> {
        let elems: Vec<usize> = a.elements().collect();
        let size: usize = elems.iter().map(|&i| self.alphabets[i]).product();
        let mut out = vec![0.0; size];
        let n = self.alphabets.len();
        let mut digits = vec![0usize; n];
        let mut strides = vec![0usize; n];
        let mut s = 1;
        for &i in &elems {
            strides[i] = s;
            s *= self.alphabets[i];
        }
        let mut idx = 0usize;
        for &m in &self.mass {
            out[idx] += m;
            // odometer increment over the full table, tracking the marginal index
            for i in 0..n {
                digits[i] += 1;
                idx += strides[i];
                if digits[i] < self.alphabets[i] {
                    break;
                }
                idx -= strides[i] * digits[i];
                digits[i] = 0;
            }
        }
        out
    }

    pub fn entropy_of(&self, a: Subset) -> f64 {
        if a.is_empty() {
            return 0.0;
        }
        entropy(&self.marginal_table(a))
    }

    pub fn marginal(&self, a: Subset) -> Result<JointDistribution> {
        if a.is_empty() {
            return Err(Error::EmptySubset);
        }
        let ground = self.ground.restricted(a)?;
        let alphabets = a.elements().map(|i| self.alphabets[i]).collect();
        JointDistribution::new(ground, alphabets, self.marginal_table(a))
    }

    pub fn profile(&self) -> EntropyProfile {
        let h = self
            .ground
            .nonempty_subsets()
            .map(|a| self.entropy_of(a))
            .collect();
        EntropyProfile {
            ground: self.ground.clone(),
            h,
        }
    }

    /// Symbols of each element in the cell with flat index `idx`.
    pub fn decode(&self, mut idx: usize) -> Vec<usize> {
        self.alphabets
            .iter()
            .map(|&k| {
                let d = idx % k;
                idx /= k;
                d
            })
            .collect()
    }
}

fn encode(alphabets: &[usize], t: &[usize]) -> Result<usize> {
    if t.len() != alphabets.len() {
        return Err(Error::Invalid("tuple length differs from ground size".into()));
    }
    let mut idx = 0;
    let mut stride = 1;
    for (&x, &k) in t.iter().zip(alphabets) {
        if x >= k {
            return Err(Error::Invalid(format!("symbol {x} outside alphabet of size {k}")));
        }
        idx += x * stride;
        stride *= k;
    }
    Ok(idx)
}

fn entropy(p: &[f64]) -> f64 {
    -p.iter().filter(|&&x| x > 0.0).map(|&x| x * x.log2()).sum::<f64>()
}

/// Binary entropy in bits.
pub fn binary_entropy(p: f64) -> f64 {
    entropy(&[p, 1.0 - p])
}

/// Entropies of all non-empty subsets, in bits.
#[derive(Clone, Debug, PartialEq)]
pub struct EntropyProfile {
    ground: GroundSet,
    h: Vec<f64>,
}

impl EntropyProfile {
    pub fn new(ground: GroundSet, h: Vec<f64>) -> Result<EntropyProfile> {
        if h.len() != ground.dim() {
            return Err(Error::Invalid("profile has wrong length".into()));
        }
        Ok(EntropyProfile { ground, h })
    }

    pub fn values(&self) -> &[f64] {
        &self.h
    }

    /// Largest basic-inequality violation (0 when all hold).
    pub fn shannon_violation(&self) -> f64 {
        shannon_instances(self.ground.len())
            .iter()
            .map(|s| -s.eval(self))
            .fold(0.0, f64::max)
    }

    pub fn satisfies_shannon(&self, tol: f64) -> bool {
        self.ground.len() < 2 || self.shannon_violation() <= tol
    }

    /// Max |h(A) − factor·f(A)| over all subsets.
    pub fn distance_to(&self, f: &Polymatroid, factor: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.h
            .iter()
            .zip(f.ranks())
            .map(|(x, r)| (x - factor * r.to_f64().unwrap_or(f64::NAN)).abs())
            .fold(0.0, f64::max)
    }

    pub fn distance(&self, other: &EntropyProfile) -> f64 {
        self.h
            .iter()
            .zip(&other.h)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    pub fn scaled(&self, k: f64) -> EntropyProfile {
        EntropyProfile {
            ground: self.ground.clone(),
            h: self.h.iter().map(|x| x * k).collect(),
        }
    }

    pub fn add(&self, other: &EntropyProfile) -> Result<EntropyProfile> {
        if self.ground != other.ground {
            return Err(Error::GroundMismatch);
        }
        Ok(EntropyProfile {
            ground: self.ground.clone(),
            h: self.h.iter().zip(&other.h).map(|(x, y)| x + y).collect(),
        })
    }

    /// `A ↦ h(AK) − h(K)` on `N∖K`.
    pub fn contract(&self, k: Subset) -> Result<EntropyProfile> {
        let rest = self.ground.full() - k;
        if k.is_empty() || rest.is_empty() {
            return Err(Error::Invalid("contraction set must be proper and non-empty".into()));
        }
        let ground = self.ground.restricted(rest)?;
        let idx: Vec<usize> = rest.elements().collect();
        let hk = self.at(k);
        let h = ground
            .nonempty_subsets()
            .map(|t| self.at(Subset::from_elements(t.elements().map(|i| idx[i])) | k) - hk)
            .collect();
        Ok(EntropyProfile { ground, h })
    }

    pub fn restrict(&self, m: Subset) -> Result<EntropyProfile> {
        let ground = self.ground.restricted(m)?;
        let idx: Vec<usize> = m.elements().collect();
        let h = ground
            .nonempty_subsets()
            .map(|t| self.at(Subset::from_elements(t.elements().map(|i| idx[i]))))
            .collect();
        Ok(EntropyProfile { ground, h })
    }

    /// Every element's private information `h(z‖N∖z)` removed.
    pub fn tightened(&self) -> EntropyProfile {
        let full = self.ground.full();
        let lambda: Vec<f64> = (0..self.ground.len())
            .map(|z| self.at(full) - self.at(full.without(z)))
            .collect();
        let h = self
            .ground
            .nonempty_subsets()
            .map(|s| self.at(s) - s.elements().map(|z| lambda[z]).sum::<f64>())
            .collect();
        EntropyProfile {
            ground: self.ground.clone(),
            h,
        }
    }

    /// Polymatroid text format with decimal values.
    pub fn to_text(&self) -> String {
        let g = &self.ground;
        let mut out = format!("base: {g}\n");
        for (i, v) in self.h.iter().enumerate() {
            let s = Subset::from_index(i);
            let name = if g.single_char_labels() {
                g.name(s)
            } else {
                g.display(s)
            };
            let v = if v.abs() < 1e-15 { 0.0 } else { *v };
            out.push_str(&format!("{name} {v:.12}\n"));
        }
        out
    }
}

impl SetFunction for EntropyProfile {
    type Value = f64;

    fn ground(&self) -> &GroundSet {
        &self.ground
    }

    fn at(&self, s: Subset) -> f64 {
        if s.is_empty() {
            0.0
        } else {
            self.h[s.index()]
        }
    }
}

/// Product distribution: element `i` takes the pair of symbols.
pub fn independent_join(d: &JointDistribution, e: &JointDistribution) -> Result<JointDistribution> {
    join_capped(d, e, DEFAULT_MAX_CELLS)
}

fn join_capped(d: &JointDistribution, e: &JointDistribution, cap: usize) -> Result<JointDistribution> {
    if d.ground != e.ground {
        return Err(Error::GroundMismatch);
    }
    let alphabets: Vec<usize> = d.alphabets.iter().zip(&e.alphabets).map(|(x, y)| x * y).collect();
    let total = cells(&alphabets, cap)?;
    let mut mass = vec![0.0; total];
    for (i, &p) in d.mass.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        let ti = d.decode(i);
        for (j, &q) in e.mass.iter().enumerate() {
            if q == 0.0 {
                continue;
            }
            let tj = e.decode(j);
            let t: Vec<usize> = ti
                .iter()
                .zip(&tj)
                .zip(&d.alphabets)
                .map(|((x, y), k)| x + k * y)
                .collect();
            mass[encode(&alphabets, &t)?] += p * q;
        }
    }
    JointDistribution::new(d.ground.clone(), alphabets, mass)
}

/// `n` i.i.d. copies, each element taking the `n`-tuple of its symbols.
pub fn tensor_power(d: &JointDistribution, n: usize) -> Result<JointDistribution> {
    tensor_power_capped(d, n, DEFAULT_MAX_CELLS)
}

pub fn tensor_power_capped(d: &JointDistribution, n: usize, cap: usize) -> Result<JointDistribution> {
    if n == 0 {
        return Err(Error::Invalid("power must be at least 1".into()));
    }
    let pow: Vec<usize> = d
        .alphabets
        .iter()
        .map(|&k| k.checked_pow(n as u32).unwrap_or(usize::MAX))
        .collect();
    cells(&pow, cap)?;
    let mut out = d.clone();
    for _ in 1..n {
        out = join_capped(&out, d, cap)?;
    }
    Ok(out)
}

/// Slices of a distribution conditioned on the values of `K`.
#[derive(Clone, Debug)]
pub struct Conditioned {
    pub slices: Vec<(f64, JointDistribution)>,
    pub averaged: EntropyProfile,
}

pub fn condition_on(d: &JointDistribution, k: Subset) -> Result<Conditioned> {
    let full = d.ground.full();
    let rest = full - k;
    if k.is_empty() || rest.is_empty() || !k.is_subset_of(full) {
        return Err(Error::Invalid("conditioning set must be proper and non-empty".into()));
    }
    let ground = d.ground.restricted(rest)?;
    let kel: Vec<usize> = k.elements().collect();
    let rel: Vec<usize> = rest.elements().collect();
    let ralpha: Vec<usize> = rel.iter().map(|&i| d.alphabets[i]).collect();
    let rsize: usize = ralpha.iter().product();
    let mut groups: std::collections::BTreeMap<Vec<usize>, Vec<f64>> = Default::default();
    for (i, &p) in d.mass.iter().enumerate() {
        let t = d.decode(i);
        let key: Vec<usize> = kel.iter().map(|&j| t[j]).collect();
        let sub: Vec<usize> = rel.iter().map(|&j| t[j]).collect();
        let slot = groups.entry(key).or_insert_with(|| vec![0.0; rsize]);
        slot[encode(&ralpha, &sub)?] += p;
    }
    let mut slices = Vec::new();
    let mut avg = vec![0.0; ground.dim()];
    for (_, table) in groups {
        let w: f64 = table.iter().sum();
        if w <= 0.0 {
            continue;
        }
        let dist = JointDistribution::new(
            ground.clone(),
            ralpha.clone(),
            table.iter().map(|x| x / w).collect(),
        )?;
        for (a, v) in dist.profile().h.iter().enumerate() {
            avg[a] += w * v;
        }
        slices.push((w, dist));
    }
    Ok(Conditioned {
        slices,
        averaged: EntropyProfile { ground, h: avg },
    })
}

/// Keep `d` with probability `p`; otherwise every element takes a fresh symbol.
pub fn dilute(d: &JointDistribution, p: f64) -> Result<JointDistribution> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Invalid("p must lie in [0,1]".into()));
    }
    let alphabets: Vec<usize> = d.alphabets.iter().map(|k| k + 1).collect();
    let total = cells(&alphabets, DEFAULT_MAX_CELLS)?;
    let mut mass = vec![0.0; total];
    for (i, &m) in d.mass.iter().enumerate() {
        if m > 0.0 {
            mass[encode(&alphabets, &d.decode(i))?] += p * m;
        }
    }
    let fresh: Vec<usize> = d.alphabets.clone();
    mass[encode(&alphabets, &fresh)?] += 1.0 - p;
    JointDistribution::new(d.ground.clone(), alphabets, mass)
}

/// Every marginal is uniform on its support.
pub fn is_quasi_uniform(d: &JointDistribution) -> bool {
    d.ground.nonempty_subsets().all(|a| {
        let t = d.marginal_table(a);
        let pos: Vec<f64> = t.into_iter().filter(|&x| x > MASS_TOL).collect();
        pos.windows(2).all(|w| (w[0] - w[1]).abs() <= MASS_TOL)
    })
}

/// A finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
}

impl FiniteGroup {
    pub fn new(table: Vec<Vec<usize>>, identity: usize) -> Result<FiniteGroup> {
        let m = table.len();
        if m == 0 || table.iter().any(|r| r.len() != m || r.iter().any(|&x| x >= m)) {
            return Err(Error::Invalid("group table must be square over 0..m".into()));
        }
        if identity >= m || (0..m).any(|x| table[identity][x] != x || table[x][identity] != x) {
            return Err(Error::Invalid("bad identity".into()));
        }
        for x in 0..m {
            if !(0..m).any(|y| table[x][y] == identity) {
                return Err(Error::Invalid(format!("element {x} has no inverse")));
            }
        }
        if m <= 64 {
            for x in 0..m {
                for y in 0..m {
                    for z in 0..m {
                        if table[table[x][y]][z] != table[x][table[y][z]] {
                            return Err(Error::Invalid("table is not associative".into()));
                        }
                    }
                }
            }
        }
        Ok(FiniteGroup { table, identity })
    }

    pub fn cyclic(m: usize) -> FiniteGroup {
        let table = (0..m).map(|x| (0..m).map(|y| (x + y) % m).collect()).collect();
        FiniteGroup { table, identity: 0 }
    }

    /// Direct product; the pair `(x, y)` has index `x + |G|·y`.
    pub fn product(g: &FiniteGroup, h: &FiniteGroup) -> FiniteGroup {
        let (m, k) = (g.order(), h.order());
        let table = (0..m * k)
            .map(|a| {
                (0..m * k)
                    .map(|b| g.table[a % m][b % m] + m * h.table[a / m][b / m])
                    .collect()
            })
            .collect();
        FiniteGroup {
            table,
            identity: g.identity + m * h.identity,
        }
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x][y]
    }

    pub fn is_subgroup(&self, s: &[usize]) -> bool {
        let set: std::collections::HashSet<usize> = s.iter().copied().collect();
        set.contains(&self.identity)
            && s.iter().all(|&x| x < self.order())
            && s.iter().all(|&x| s.iter().all(|&y| set.contains(&self.mul(x, y))))
    }

    /// Left coset `gS` as a sorted element list.
    fn coset(&self, g: usize, s: &[usize]) -> Vec<usize> {
        let mut c: Vec<usize> = s.iter().map(|&h| self.mul(g, h)).collect();
        c.sort_unstable();
        c.dedup();
        c
    }
}

/// Uniform `g` in `G`, element `i` takes the coset `gG_i`.
pub fn from_groups(
    ground: GroundSet,
    group: &FiniteGroup,
    subgroups: &[Vec<usize>],
) -> Result<JointDistribution> {
    if subgroups.len() != ground.len() {
        return Err(Error::Invalid("one subgroup per element".into()));
    }
    if let Some(bad) = subgroups.iter().position(|s| !group.is_subgroup(s)) {
        return Err(Error::Invalid(format!("entry {bad} is not a subgroup")));
    }
    let m = group.order();
    let mut labels: Vec<std::collections::BTreeMap<Vec<usize>, usize>> = vec![Default::default(); subgroups.len()];
    let mut symbol = vec![vec![0usize; m]; subgroups.len()];
    for (i, s) in subgroups.iter().enumerate() {
        for g in 0..m {
            let c = group.coset(g, s);
            let next = labels[i].len();
            symbol[i][g] = *labels[i].entry(c).or_insert(next);
        }
    }
    let alphabets: Vec<usize> = labels.iter().map(|l| l.len()).collect();
    JointDistribution::uniform_image(ground, alphabets, m, |g| {
        symbol.iter().map(|row| row[g]).collect()
    })
}

/// Uniform `x ∈ GF(p)^d`, element `i` takes the scalar products with `V_i`.
pub fn from_linear_rep(rep: &LinearRep) -> Result<JointDistribution> {
    from_linear_rep_capped(rep, DEFAULT_MAX_CELLS)
}

pub fn from_linear_rep_capped(rep: &LinearRep, cap: usize) -> Result<JointDistribution> {
    let p = rep.prime() as usize;
    let d = rep.dim();
    let count = p
        .checked_pow(d as u32)
        .filter(|&c| c <= cap)
        .ok_or_else(|| Error::Cap(format!("{p}^{d} sample points exceed {cap}")))?;
    let alphabets: Vec<usize> = (0..rep.ground().len())
        .map(|i| p.pow(rep.vectors(i).len() as u32))
        .collect();
    cells(&alphabets, cap)?;
    JointDistribution::uniform_image(rep.ground().clone(), alphabets, count, |mut w| {
        let x: Vec<u64> = (0..d)
            .map(|_| {
                let v = (w % p) as u64;
                w /= p;
                v
            })
            .collect();
        (0..rep.ground().len())
            .map(|i| {
                rep.vectors(i).iter().rev().fold(0usize, |acc, v| {
                    let s = v.iter().zip(&x).map(|(a, b)| a * b).sum::<u64>() % p as u64;
                    acc * p + s as usize
                })
            })
            .collect()
    })
}

/// `a, b` uniform mod `n`, `c` chosen so that `a + b + c ≡ 0`.
pub fn mod_n_sum(n: usize) -> Result<JointDistribution> {
    if n == 0 {
        return Err(Error::Invalid("modulus must be positive".into()));
    }
    let g = GroundSet::letters(3)?;
    JointDistribution::uniform_image(g, vec![n; 3], n * n, |w| {
        let (a, b) = (w % n, w / n);
        vec![a, b, (2 * n - a - b) % n]
    })
}

/// `c, d` independent bits, `a = max(c,d)`, `b = min(c,d)`.
pub fn ringing_bells() -> JointDistribution {
    let g = GroundSet::letters(4).expect("four letters");
    JointDistribution::uniform_image(g, vec![2; 4], 4, |w| {
        let (c, d) = (w % 2, w / 2);
        vec![c.max(d), c.min(d), c, d]
    })
    .expect("valid table")
}

/// All elements constant.
pub fn constant(n: usize) -> Result<JointDistribution> {
    JointDistribution::new(GroundSet::letters(n)?, vec![1; n], vec![1.0])
}

/// `k` independent uniform bits.
pub fn uniform_bits(k: usize) -> Result<JointDistribution> {
    let g = GroundSet::letters(k)?;
    JointDistribution::uniform_image(g, vec![2; k], 1 << k, |w| (0..k).map(|i| w >> i & 1).collect())
}

/// `a, b` uniform mod 3, `c = a + b` or `c = a − b` by a fair coin.
pub fn mod3_pm() -> JointDistribution {
    let g = GroundSet::letters(3).expect("three letters");
    JointDistribution::uniform_image(g, vec![3; 3], 18, |w| {
        let (a, b, s) = (w % 3, w / 3 % 3, w / 9);
        let c = if s == 0 { (a + b) % 3 } else { (a + 3 - b) % 3 };
        vec![a, b, c]
    })
    .expect("valid table")
}

/// A fair bit `d` choosing between the mod-2 and mod-4 sum triples on `abc`.
pub fn mixture_example() -> JointDistribution {
    let g = GroundSet::letters(4).expect("four letters");
    let mut entries = Vec::new();
    for (d, n) in [(0usize, 2usize), (1, 4)] {
        for a in 0..n {
            for b in 0..n {
                let c = (2 * n - a - b) % n;
                entries.push((vec![a, b, c, d], 0.5 / (n * n) as f64));
            }
        }
    }
    JointDistribution::from_entries(g, vec![4, 4, 4, 2], &entries).expect("valid table")
}

/// Four bits: `a, b, d` each own one, and all of `a, b, c, d` share the fourth.
pub fn ak2_vamos_witness() -> JointDistribution {
    let g = GroundSet::letters(4).expect("four letters");
    JointDistribution::uniform_image(g, vec![4, 4, 2, 4], 16, |w| {
        let (x1, x2, x3, s) = (w & 1, w >> 1 & 1, w >> 2 & 1, w >> 3 & 1);
        vec![x1 + 2 * s, x2 + 2 * s, s, x3 + 2 * s]
    })
    .expect("valid table")
}

/// Parse the distribution text format.
pub fn parse_distribution(text: &str) -> Result<JointDistribution> {
    let mut lines = content_lines(text);
    let (ln, head) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let ground = parse_base(ln, head)?;
    let (ln, al) = lines
        .next()
        .ok_or_else(|| parse_err(ln, "missing `alphabets:` line"))?;
    let alphabets: Vec<usize> = al
        .strip_prefix("alphabets:")
        .ok_or_else(|| parse_err(ln, "expected `alphabets:`"))?
        .split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|_| parse_err(ln, format!("bad size `{t}`"))))
        .collect::<Result<_>>()?;
    if alphabets.len() != ground.len() || alphabets.contains(&0) {
        return Err(parse_err(ln, "need one positive alphabet size per element"));
    }
    let total = cells(&alphabets, DEFAULT_MAX_CELLS).map_err(|e| parse_err(ln, e.to_string()))?;
    let mut mass = vec![0.0; total];
    for (ln, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.first() != Some(&"mass") || toks.len() != ground.len() + 2 {
            return Err(parse_err(ln, "expected `mass <t1> .. <tn> <p>`"));
        }
        let t: Vec<usize> = toks[1..=ground.len()]
            .iter()
            .map(|x| x.parse::<usize>().map_err(|_| parse_err(ln, format!("bad symbol `{x}`"))))
            .collect::<Result<_>>()?;
        let p: f64 = toks[ground.len() + 1]
            .parse()
            .map_err(|_| parse_err(ln, "bad probability"))?;
        let idx = encode(&alphabets, &t).map_err(|e| parse_err(ln, e.to_string()))?;
        mass[idx] += p;
    }
    JointDistribution::new(ground, alphabets, mass).map_err(|e| parse_err(0, e.to_string()))
}

pub fn write_distribution(d: &JointDistribution) -> String {
    let mut out = format!("base: {}\nalphabets:", d.ground);
    for k in &d.alphabets {
        out.push_str(&format!(" {k}"));
    }
    out.push('\n');
    for (i, &p) in d.mass.iter().enumerate() {
        if p > 0.0 {
            let t: Vec<String> = d.decode(i).iter().map(|x| x.to_string()).collect();
            out.push_str(&format!("mass {} {p}\n", t.join(" ")));
        }
    }
    out
}
