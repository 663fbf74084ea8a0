//! Maximum-entropy systems: a fixed family of subsets and the conditional
//! independences forced by 3-partitions separating it.
//!
//! ```text
//! base: a b c d z
//! indep: cd,z|ab
//! ```
//! or `fix: abcd, abz`. The generalized form marks instances of a base
//! polymatroid inside a bigger ground:
//! ```text
//! base: a b c d
//! map: a1->a b1->b c1->c d1->d c2->c d2->d
//! transversal: a1 b1 c1 d1
//! transversal: a1 b1 c2 d2
//! ```

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_traits::Zero;

use crate::error::{parse_err, Error, Result};
use crate::ground::{GroundSet, Subset};
use crate::lp::{ConstraintSystem, Relation, SparseVec};
use crate::num::rat;
use crate::poly::{Polymatroid, SetFunction};
use crate::shannon::ShannonInstance;
use crate::text::{content_lines, parse_base};

use super::{push_shannon_rows, DerivedSystem, SymmetryState};

/// A 3-partition `⟨X,Y‖D⟩` with `X`, `Y` non-empty; stored with `X < Y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    pub x: Subset,
    pub y: Subset,
    pub d: Subset,
}

impl Partition {
    pub fn new(x: Subset, y: Subset, d: Subset) -> Result<Partition> {
        if x.is_empty() || y.is_empty() {
            return Err(Error::Invalid("both sides of a 3-partition must be non-empty".into()));
        }
        if x.meets(y) || x.meets(d) || y.meets(d) {
            return Err(Error::Invalid("parts of a 3-partition must be disjoint".into()));
        }
        let (x, y) = if x.0 < y.0 { (x, y) } else { (y, x) };
        Ok(Partition { x, y, d })
    }

    pub fn separates(&self, s: Subset) -> bool {
        s.is_subset_of(self.x | self.d) || s.is_subset_of(self.y | self.d)
    }

    /// Whether the basic inequality `(a,b‖K)` is one of the terms that
    /// vanish under this independence.
    pub fn kills(&self, inst: &ShannonInstance) -> bool {
        match *inst {
            ShannonInstance::Submodular { a, b, k } => {
                self.d.is_subset_of(k)
                    && ((self.x.contains(a) && self.y.contains(b)) || (self.x.contains(b) && self.y.contains(a)))
            }
            ShannonInstance::Monotone { .. } => false,
        }
    }

    pub fn display(&self, g: &GroundSet) -> String {
        format!("{},{}|{}", g.name(self.x), g.name(self.y), if self.d.is_empty() { String::new() } else { g.name(self.d) })
    }

    /// `g(X,Y‖D)`
    pub fn value<F: SetFunction>(&self, f: &F) -> F::Value {
        f.cond_mutual(self.x, self.y, self.d)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{:#b},{:#b}‖{:#b}⟩", self.x.0, self.y.0, self.d.0)
    }
}

/// All 3-partitions of an `n`-element ground separating every member of `family`.
pub fn partitions_separating(n: usize, family: &[Subset]) -> Vec<Partition> {
    let full = Subset(((1u64 << n) - 1) as u32);
    let mut out = Vec::new();
    for d in full.subsets() {
        let rest = full - d;
        for x in rest.subsets() {
            let y = rest - x;
            if x.is_empty() || y.is_empty() || x.0 > y.0 {
                continue;
            }
            let p = Partition { x, y, d };
            if family.iter().all(|&s| p.separates(s)) {
                out.push(p);
            }
        }
    }
    out.sort();
    out
}

/// Non-empty subsets separated by every partition.
pub fn subsets_separated_by(n: usize, parts: &[Partition]) -> Vec<Subset> {
    (1..1u32 << n)
        .map(Subset)
        .filter(|&s| parts.iter().all(|p| p.separates(s)))
        .collect()
}

#[derive(Clone, Debug)]
pub struct MaxeSpec {
    pub ground: GroundSet,
    /// Closed family of fixed subsets.
    pub family: Vec<Subset>,
    /// Closed set of separating partitions.
    pub partitions: Vec<Partition>,
    /// Impose the vanishing terms as equalities rather than sign-flipped rows.
    pub exact_independence: bool,
}

impl MaxeSpec {
    pub fn from_family(ground: GroundSet, family: &[Subset]) -> MaxeSpec {
        let p = partitions_separating(ground.len(), family);
        let f = subsets_separated_by(ground.len(), &p);
        MaxeSpec {
            ground,
            family: f,
            partitions: p,
            exact_independence: false,
        }
    }

    pub fn from_partitions(ground: GroundSet, parts: &[Partition]) -> MaxeSpec {
        let f = subsets_separated_by(ground.len(), parts);
        MaxeSpec::from_family(ground, &f)
    }
}

pub fn parse_maxe_spec(text: &str) -> Result<MaxeSpec> {
    let mut lines = content_lines(text);
    let (ln, head) = lines.next().ok_or_else(|| parse_err(1, "empty specification"))?;
    let ground = parse_base(ln, head)?;
    let mut family = Vec::new();
    let mut parts = Vec::new();
    for (ln, line) in lines {
        let err = |e: Error| parse_err(ln, e.to_string());
        if let Some(rest) = line.strip_prefix("fix:") {
            for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                family.push(ground.parse_subset(item).map_err(err)?);
            }
        } else if let Some(rest) = line.strip_prefix("indep:") {
            let (xy, d) = rest
                .split_once('|')
                .ok_or_else(|| parse_err(ln, "expected `X,Y|D`"))?;
            let (x, y) = xy
                .split_once(',')
                .ok_or_else(|| parse_err(ln, "expected `X,Y|D`"))?;
            let p = Partition::new(
                ground.parse_subset(x.trim()).map_err(err)?,
                ground.parse_subset(y.trim()).map_err(err)?,
                ground.parse_subset(d.trim()).map_err(err)?,
            )
            .map_err(err)?;
            if (p.x | p.y | p.d) != ground.full() {
                return Err(parse_err(ln, "the parts must cover the ground set"));
            }
            parts.push(p);
        } else {
            return Err(parse_err(ln, format!("unknown line `{line}`")));
        }
    }
    match (family.is_empty(), parts.is_empty()) {
        (false, true) => Ok(MaxeSpec::from_family(ground, &family)),
        (true, false) => Ok(MaxeSpec::from_partitions(ground, &parts)),
        (false, false) => Err(parse_err(ln, "give either `fix:` or `indep:` lines, not both")),
        (true, true) => Err(parse_err(ln, "no `fix:` or `indep:` lines")),
    }
}

fn flip_rows_to_eq(sys: &mut ConstraintSystem) {
    for row in &mut sys.rows {
        if row.tag.starts_with('-') {
            row.rel = Relation::Eq;
        }
    }
}

/// Main variables are the fixed family, the rest are auxiliary; rows are the
/// submodularity instances, negated when they vanish under a partition.
pub fn build_maxe_system(spec: &MaxeSpec) -> Result<DerivedSystem> {
    let g = &spec.ground;
    let n = g.len();
    let fixed: HashSet<Subset> = spec.family.iter().copied().collect();
    let mut order: Vec<Subset> = spec.family.clone();
    order.sort();
    order.extend(g.nonempty_subsets().filter(|s| !fixed.contains(s)));
    let mut exprs: Vec<SparseVec> = vec![Vec::new(); 1 << n];
    for (j, s) in order.iter().enumerate() {
        exprs[s.0 as usize] = vec![(j, rat(1))];
    }
    let mut sys = ConstraintSystem::new(order.iter().map(|&s| g.display(s)).collect());
    sys.main = spec.family.len();
    let parts = &spec.partitions;
    let mut seen = HashSet::new();
    push_shannon_rows(&mut sys, g, &exprs, true, &|inst| parts.iter().any(|p| p.kills(inst)), &mut seen);
    if spec.exact_independence {
        flip_rows_to_eq(&mut sys);
    }
    let mut main_masks = spec.family.clone();
    main_masks.sort();
    Ok(DerivedSystem {
        sys,
        ground: g.clone(),
        base: g.clone(),
        main_masks,
        exprs,
        classes: g.dim(),
        symmetry: SymmetryState::default(),
        notes: parts.iter().map(|p| format!("independence {}", p.display(g))).collect(),
    })
}

#[derive(Clone, Debug)]
pub struct GmaxeSpec {
    pub base: GroundSet,
    pub big: GroundSet,
    /// Image in the base of each element of the big ground.
    pub phi: Vec<usize>,
    pub transversals: Vec<Subset>,
    pub exact_independence: bool,
}

impl GmaxeSpec {
    pub fn new(base: GroundSet, big: GroundSet, phi: Vec<usize>, transversals: Vec<Subset>) -> Result<GmaxeSpec> {
        if phi.len() != big.len() {
            return Err(Error::Invalid("the map must be total on the big ground".into()));
        }
        if let Some(&i) = phi.iter().find(|&&i| i >= base.len()) {
            return Err(Error::OutOfGround(i.to_string()));
        }
        let image = Subset::from_elements(phi.iter().copied());
        if image != base.full() {
            return Err(Error::Invalid("the map must be onto the base".into()));
        }
        for &t in &transversals {
            if t.len() != base.len() || Subset::from_elements(t.elements().map(|i| phi[i])) != base.full() {
                return Err(Error::Invalid(format!("{} is not a transversal", big.display(t))));
            }
        }
        if transversals.is_empty() {
            return Err(Error::Invalid("no transversals".into()));
        }
        Ok(GmaxeSpec {
            base,
            big,
            phi,
            transversals,
            exact_independence: false,
        })
    }

    pub fn image(&self, s: Subset) -> Subset {
        Subset::from_elements(s.elements().map(|i| self.phi[i]))
    }

    pub fn in_transversal(&self, s: Subset) -> bool {
        self.transversals.iter().any(|&t| s.is_subset_of(t))
    }

    pub fn separating(&self) -> Vec<Partition> {
        partitions_separating(self.big.len(), &self.transversals)
    }

    /// Transversals sharing one common core and otherwise disjoint.
    pub fn is_sunflower(&self) -> bool {
        let ts = &self.transversals;
        if ts.len() < 2 {
            return false;
        }
        let core = ts[0] & ts[1];
        ts.iter().enumerate().all(|(i, &s)| ts[i + 1..].iter().all(|&t| s & t == core))
    }
}

pub fn parse_gmaxe_spec(text: &str) -> Result<GmaxeSpec> {
    let mut lines = content_lines(text);
    let (ln, head) = lines.next().ok_or_else(|| parse_err(1, "empty specification"))?;
    let base = parse_base(ln, head)?;
    let mut labels: Vec<String> = Vec::new();
    let mut phi = Vec::new();
    let mut trans_text: Vec<(usize, String)> = Vec::new();
    for (ln, line) in lines {
        if let Some(rest) = line.strip_prefix("map:") {
            for pair in rest.split_whitespace() {
                let (from, to) = pair
                    .split_once("->")
                    .ok_or_else(|| parse_err(ln, format!("expected `x->y`, got `{pair}`")))?;
                labels.push(from.to_string());
                phi.push(base.element(to).map_err(|e| parse_err(ln, e.to_string()))?);
            }
        } else if let Some(rest) = line.strip_prefix("transversal:") {
            trans_text.push((ln, rest.trim().to_string()));
        } else {
            return Err(parse_err(ln, format!("unknown line `{line}`")));
        }
    }
    let big = GroundSet::new(&labels).map_err(|e| parse_err(ln, e.to_string()))?;
    let mut transversals = Vec::new();
    for (ln, t) in &trans_text {
        transversals.push(big.parse_subset(t).map_err(|e| parse_err(*ln, e.to_string()))?);
    }
    GmaxeSpec::new(base, big, phi, transversals).map_err(|e| parse_err(ln, e.to_string()))
}

/// Variables are the subsets of the big ground; subsets of a transversal are
/// glued to the base subset they map to.
pub fn build_gmaxe_system(spec: &GmaxeSpec) -> Result<DerivedSystem> {
    let m = &spec.big;
    let size = 1usize << m.len();
    let dim0 = spec.base.dim();
    let mut vars: Vec<String> = spec.base.nonempty_subsets().map(|s| spec.base.display(s)).collect();
    let mut exprs: Vec<SparseVec> = vec![Vec::new(); size];
    let mut classes = 0;
    for s in 1..size {
        let s = Subset(s as u32);
        exprs[s.0 as usize] = if spec.in_transversal(s) {
            vec![(spec.image(s).index(), rat(1))]
        } else {
            classes += 1;
            vars.push(m.display(s));
            vec![(vars.len() - 1, rat(1))]
        };
    }
    let parts = spec.separating();
    // a row vanishes when some separating partition has D = K exactly
    let mut by_over: HashMap<Subset, Vec<Partition>> = HashMap::new();
    for p in &parts {
        by_over.entry(p.d).or_default().push(*p);
    }
    let kills = |inst: &ShannonInstance| match *inst {
        ShannonInstance::Submodular { k, .. } => by_over
            .get(&k)
            .is_some_and(|ps| ps.iter().any(|p| p.kills(inst))),
        ShannonInstance::Monotone { .. } => false,
    };
    let mut sys = ConstraintSystem::new(vars);
    sys.main = dim0;
    let mut seen = HashSet::new();
    push_shannon_rows(&mut sys, m, &exprs, true, &kills, &mut seen);
    if spec.exact_independence {
        flip_rows_to_eq(&mut sys);
    }
    let mut notes = vec![format!("{} separating 3-partitions", parts.len())];
    if spec.is_sunflower() {
        notes.push("book extension".to_string());
    }
    Ok(DerivedSystem {
        sys,
        ground: m.clone(),
        base: spec.base.clone(),
        main_masks: spec.base.nonempty_subsets().collect(),
        exprs,
        classes: classes + dim0,
        symmetry: SymmetryState::default(),
        notes,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum No4 {
    /// Every separating partition has an over part of size at least three.
    /// Carries the explicit extension of the target when one was supplied.
    Useless { witness: Option<Polymatroid> },
    PotentiallyUseful { partition: Partition },
}

/// Decides whether a four-element instance can produce anything, and builds
/// the extension of a Vámos-type target when it cannot.
pub fn no4_check(spec: &GmaxeSpec, target: Option<&Polymatroid>) -> Result<No4> {
    if spec.base.len() != 4 {
        return Err(Error::Invalid("the base must have four elements".into()));
    }
    let parts = spec.separating();
    if let Some(p) = parts.iter().find(|p| p.d.len() < 3) {
        return Ok(No4::PotentiallyUseful { partition: *p });
    }
    let Some(v) = target else {
        return Ok(No4::Useless { witness: None });
    };
    if v.ground() != &spec.base {
        return Err(Error::GroundMismatch);
    }
    let top = v.at(spec.base.full());
    let g = Polymatroid::from_fn(spec.big.clone(), |s| {
        if s.len() == 1 || spec.in_transversal(s) {
            v.at(spec.image(s))
        } else {
            top.clone()
        }
    });
    g.check_polymatroid()?;
    for &t in &spec.transversals {
        if let Some(s) = t.subsets().find(|&s| g.at(s) != v.at(spec.image(s))) {
            return Err(Error::Failed(format!(
                "extension differs from the target on {}",
                spec.big.display(s)
            )));
        }
    }
    if let Some(p) = parts.iter().find(|p| !p.value(&g).is_zero()) {
        return Err(Error::Failed(format!(
            "extension violates the independence {}",
            p.display(&spec.big)
        )));
    }
    Ok(No4::Useless { witness: Some(g) })
}
