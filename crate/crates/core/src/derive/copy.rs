//! Iterated copy steps and their reduced constraint systems.
//!
//! ```text
//! base: a1 b1 c1 d1
//! c2 d2 = c1 d1 : a1 b1;
//! a2 c3 c4 = a1 c1 c2 : b1 d1 d2
//! ```
//! A step `A : D` names the copies by appending a prime; `: D` alone copies
//! everything outside `D`. `extra: <expr>` adds an inequality on the ground
//! reached so far.

use std::collections::{HashMap, HashSet};

use crate::error::{parse_err, Error, Result};
use crate::expr::InfoExpr;
use crate::functional::LinearFunctional;
use crate::ground::{GroundSet, Subset};
use crate::lp::{normalize_sparse, ConstraintSystem, Relation, Row, SparseVec};
use crate::num::Rational;
use crate::perm::Permutation;
use crate::text::{content_lines, parse_base};

use super::{push_shannon_rows, rewrite, DerivedSystem};

/// One copy step: the elements of `copied` get fresh twins named `names`,
/// conditionally independent of the rest over `over`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CopyStep {
    pub copied: Vec<usize>,
    pub over: Subset,
    pub names: Vec<String>,
}

impl CopyStep {
    pub fn copied_set(&self) -> Subset {
        Subset::from_elements(self.copied.iter().copied())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CopyFlags {
    /// Accept `: D` steps as full copies.
    pub full_copy_expansion: bool,
    /// Use the swap of originals and copies as a symmetry of full copies.
    pub use_canonical_symmetry: bool,
    /// Also use the swap for partial copies. This is a stronger assumption.
    pub symmetric_acopy: bool,
    pub inherit_symmetries: bool,
    /// Submodularity rows only.
    pub balanced: bool,
}

impl Default for CopyFlags {
    fn default() -> CopyFlags {
        CopyFlags {
            full_copy_expansion: true,
            use_canonical_symmetry: true,
            symmetric_acopy: false,
            inherit_symmetries: true,
            balanced: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CopySequence {
    pub ground0: GroundSet,
    pub steps: Vec<CopyStep>,
    pub flags: CopyFlags,
    /// Additional inequalities, each on the ground after the given number of steps.
    pub extra: Vec<(usize, LinearFunctional)>,
}

/// Symmetry generators, each a permutation of a prefix of the final ground.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SymmetryState {
    pub generators: Vec<Permutation>,
}

impl SymmetryState {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Orbits of the non-empty subsets of an `n`-element ground.
    pub fn orbit_count(&self, n: usize) -> usize {
        let mut uf = UnionFind::new(1 << n);
        for g in &self.generators {
            merge_under(&mut uf, g);
        }
        (1..1usize << n).filter(|&s| uf.find(s) == s).count()
    }
}

impl CopySequence {
    pub fn new(ground0: GroundSet, flags: CopyFlags) -> CopySequence {
        CopySequence {
            ground0,
            steps: Vec::new(),
            flags,
            extra: Vec::new(),
        }
    }

    /// Ground after the first `k` steps.
    pub fn ground_after(&self, k: usize) -> Result<GroundSet> {
        let mut g = self.ground0.clone();
        for step in &self.steps[..k] {
            g = g.extended(&step.names)?;
        }
        Ok(g)
    }

    pub fn final_ground(&self) -> Result<GroundSet> {
        self.ground_after(self.steps.len())
    }

    /// Appends a step copying `copied` over `over`; copies are named with a
    /// prime suffix unless `names` is given.
    pub fn push_step(&mut self, copied: Vec<usize>, over: Subset, names: Option<Vec<String>>) -> Result<()> {
        let g = self.final_ground()?;
        if copied.is_empty() {
            return Err(Error::Invalid("a copy step needs at least one copied element".into()));
        }
        if let Some(&i) = copied.iter().find(|&&i| i >= g.len()) {
            return Err(Error::OutOfGround(i.to_string()));
        }
        if !over.is_subset_of(g.full()) {
            return Err(Error::OutOfGround(format!("{:?}", over)));
        }
        let a = Subset::from_elements(copied.iter().copied());
        if a.len() != copied.len() {
            return Err(Error::Invalid("repeated copied element".into()));
        }
        if a.meets(over) {
            return Err(Error::Invalid(format!(
                "copied set {} meets the over set {}",
                g.display(a),
                g.display(over)
            )));
        }
        let names = match names {
            Some(n) => n,
            None => {
                let mut taken: Vec<String> = g.labels().to_vec();
                copied
                    .iter()
                    .map(|&i| {
                        let mut l = format!("{}'", g.label(i));
                        while taken.contains(&l) {
                            l.push('\'');
                        }
                        taken.push(l.clone());
                        l
                    })
                    .collect()
            }
        };
        if names.len() != copied.len() {
            return Err(Error::Invalid(format!(
                "{} new names for {} copied elements",
                names.len(),
                copied.len()
            )));
        }
        g.extended(&names)?;
        self.steps.push(CopyStep { copied, over, names });
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("base: {}\n", self.ground0.labels().join(" "));
        let mut g = self.ground0.clone();
        let mut extras = self.extra.iter().peekable();
        for (k, step) in self.steps.iter().enumerate() {
            while let Some((_, e)) = extras.next_if(|(at, _)| *at == k) {
                out.push_str(&format!("extra: {}\n", e));
            }
            let old: Vec<&str> = step.copied.iter().map(|&i| g.label(i)).collect();
            let over: Vec<&str> = step.over.elements().map(|i| g.label(i)).collect();
            out.push_str(&format!("{} = {} : {}\n", step.names.join(" "), old.join(" "), over.join(" ")));
            g = g.extended(&step.names).expect("validated step");
        }
        for (_, e) in extras {
            out.push_str(&format!("extra: {}\n", e));
        }
        out
    }
}

/// Splits names written without spaces, e.g. `c2d2` or `c'`: a letter followed
/// by digits, primes and underscores.
fn split_names(text: &str) -> Vec<String> {
    let words: Vec<&str> = text.split(|c: char| c.is_whitespace() || c == ',').filter(|w| !w.is_empty()).collect();
    if words.len() > 1 {
        return words.iter().map(|w| w.to_string()).collect();
    }
    let mut out: Vec<String> = Vec::new();
    for c in text.trim().chars() {
        if c.is_ascii_digit() || c == '\'' || c == '_' {
            if let Some(last) = out.last_mut() {
                last.push(c);
                continue;
            }
        }
        out.push(c.to_string());
    }
    out
}

pub fn parse_copy_spec(text: &str, flags: CopyFlags) -> Result<CopySequence> {
    let mut lines = content_lines(text);
    let (ln, head) = lines.next().ok_or_else(|| parse_err(1, "empty copy specification"))?;
    let ground = parse_base(ln, head)?;
    let mut seq = CopySequence::new(ground, flags);
    for (ln, line) in lines {
        for stmt in line.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            parse_statement(&mut seq, stmt).map_err(|e| match e {
                Error::Parse { .. } => e,
                other => parse_err(ln, other.to_string()),
            })?;
        }
    }
    if seq.steps.is_empty() {
        return Err(parse_err(ln, "no copy steps"));
    }
    Ok(seq)
}

fn parse_statement(seq: &mut CopySequence, stmt: &str) -> Result<()> {
    let g = seq.final_ground()?;
    if let Some(rest) = stmt.strip_prefix("extra:") {
        let e = InfoExpr::parse(&g, rest.trim())?.to_functional();
        seq.extra.push((seq.steps.len(), e));
        return Ok(());
    }
    let (lhs, over) = stmt
        .split_once(':')
        .ok_or_else(|| Error::Invalid(format!("expected `A : D` in `{stmt}`")))?;
    let over = g.parse_subset(over.trim())?;
    let (names, old) = match lhs.split_once('=') {
        Some((new, old)) => (Some(split_names(new)), old.trim()),
        None => (None, lhs.trim()),
    };
    let copied = if old.is_empty() {
        if !seq.flags.full_copy_expansion {
            return Err(Error::Invalid("full-copy shorthand `: D` is disabled".into()));
        }
        (g.full() - over).elements().collect()
    } else {
        g.parse_elements(old)?
    };
    seq.push_step(copied, over, names)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    // the smaller root wins, so roots are class minima
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

fn merge_under(uf: &mut UnionFind, g: &Permutation) {
    for s in 1..1u32 << g.len() {
        uf.union(s as usize, g.apply(Subset(s)).0 as usize);
    }
}

/// `f*(J′KD) = f(J′D) + f(KD) − f(D)`
#[derive(Clone, Copy, Debug)]
struct CiRule {
    step: usize,
    whole: Subset,
    left: Subset,
    right: Subset,
    over: Subset,
}

impl CiRule {
    fn image(&self, g: &Permutation) -> CiRule {
        CiRule {
            step: self.step,
            whole: g.apply(self.whole),
            left: g.apply(self.left),
            right: g.apply(self.right),
            over: g.apply(self.over),
        }
    }

    fn residual(&self, exprs: &[SparseVec]) -> SparseVec {
        rewrite(
            exprs,
            &[(self.whole, 1), (self.left, -1), (self.right, -1), (self.over, 1)],
        )
    }
}

/// Builds the reduced system of an iterated copy sequence.
pub fn build_copy_system(seq: &CopySequence) -> Result<DerivedSystem> {
    let flags = &seq.flags;
    let mut g = seq.ground0.clone();
    let mut gens: Vec<Permutation> = Vec::new();
    let mut iso: Vec<(Subset, Subset)> = Vec::new();
    let mut rules: Vec<CiRule> = Vec::new();
    let mut step_rows: Vec<(usize, [(Subset, i64); 4])> = Vec::new();
    let mut notes = Vec::new();

    for (t, step) in seq.steps.iter().enumerate() {
        let n = g.len();
        let a = step.copied_set();
        let d = step.over;
        let e = g.full() - d;
        let twin = |i: usize| n + step.copied.iter().position(|&x| x == i).expect("copied element");
        let to_copy = |s: Subset| Subset::from_elements(s.elements().map(|i| if a.contains(i) { twin(i) } else { i }));
        let twins = Subset::from_elements(n..n + a.len());

        for s in (a | d).subsets().filter(|s| s.meets(a)) {
            iso.push((s, to_copy(s)));
        }
        for j in a.subsets().filter(|j| !j.is_empty()) {
            for k in e.subsets().filter(|k| !k.is_empty()) {
                rules.push(CiRule {
                    step: t,
                    whole: to_copy(j) | k | d,
                    left: to_copy(j) | d,
                    right: k | d,
                    over: d,
                });
            }
        }
        step_rows.push((t, [(twins | g.full(), 1), (a | d, -1), (d, 1), (g.full(), -1)]));

        let mut fresh = Vec::new();
        if flags.inherit_symmetries {
            for s in gens.iter().filter(|s| s.len() == n) {
                if s.apply(d) != d || s.apply(a) != a {
                    continue;
                }
                let mut image: Vec<usize> = s.image().to_vec();
                image.extend(step.copied.iter().map(|&i| twin(s.apply_elem(i))));
                fresh.push(Permutation::new(image)?);
            }
        }
        let full = a == e;
        if (full && flags.use_canonical_symmetry) || (!full && flags.symmetric_acopy) {
            let mut image: Vec<usize> = (0..n + a.len()).collect();
            for &i in &step.copied {
                image[i] = twin(i);
                image[twin(i)] = i;
            }
            fresh.push(Permutation::new(image)?);
            if !full {
                notes.push(format!(
                    "warning: step {} assumes a symmetric partial copy, a stronger hypothesis",
                    t + 1
                ));
            }
        }
        gens.extend(fresh);
        g = g.extended(&step.names)?;
    }

    let nf = g.len();
    let size = 1usize << nf;
    let mut uf = UnionFind::new(size);
    for s in &gens {
        merge_under(&mut uf, s);
    }
    for (x, y) in &iso {
        uf.union(x.0 as usize, y.0 as usize);
    }
    let root: Vec<usize> = (0..size).map(|s| uf.find(s)).collect();
    let classes = (1..size).filter(|&s| root[s] == s).count();

    let dim0 = seq.ground0.dim();
    let mut class_expr: HashMap<usize, SparseVec> = HashMap::new();
    let mut eq_rows: Vec<(SparseVec, String)> = Vec::new();
    let var = |j: usize| vec![(j, Rational::from_integer(1.into()))];
    for s in 1..=dim0 {
        match class_expr.get(&root[s]) {
            Some(e) => {
                let mut row = e.clone();
                row.push((s - 1, Rational::from_integer((-1).into())));
                eq_rows.push((normalize_sparse(row), format!("sym({})", g.display(Subset(s as u32)))));
            }
            None => {
                class_expr.insert(root[s], var(s - 1));
            }
        }
    }

    let mut rule_of: HashMap<usize, usize> = HashMap::new();
    for (i, r) in rules.iter().enumerate() {
        rule_of.entry(root[r.whole.0 as usize]).or_insert(i);
    }
    let mut order: Vec<usize> = (1..size).collect();
    order.sort_by_key(|&s| (s.count_ones(), s));
    let mut vars: Vec<String> = (1..=dim0).map(|s| g.display(Subset(s as u32))).collect();
    let mut exprs: Vec<SparseVec> = vec![Vec::new(); size];
    let mut used_rule = vec![false; rules.len()];
    for &s in &order {
        let r = root[s];
        if let Some(e) = class_expr.get(&r) {
            exprs[s] = e.clone();
            continue;
        }
        let e = match rule_of.get(&r) {
            Some(&i) => {
                used_rule[i] = true;
                let rule = rules[i];
                rewrite(&exprs, &[(rule.left, 1), (rule.right, 1), (rule.over, -1)])
            }
            None => {
                vars.push(g.display(Subset(s as u32)));
                var(vars.len() - 1)
            }
        };
        class_expr.insert(r, e.clone());
        exprs[s] = e;
    }

    let mut sys = ConstraintSystem::new(vars);
    sys.main = dim0;
    let mut seen: HashSet<SparseVec> = HashSet::new();
    push_shannon_rows(&mut sys, &g, &exprs, flags.balanced, &|_| false, &mut seen);

    let mut push_eq = |sys: &mut ConstraintSystem, coeffs: SparseVec, tag: String| {
        if coeffs.is_empty() {
            return;
        }
        let neg = normalize_sparse(coeffs.iter().map(|(j, c)| (*j, -c)).collect());
        if seen.contains(&coeffs) && seen.contains(&neg) {
            return;
        }
        seen.insert(coeffs.clone());
        seen.insert(neg);
        sys.rows.push(Row::new(coeffs, Relation::Eq, tag));
    };
    for (coeffs, tag) in eq_rows {
        push_eq(&mut sys, coeffs, tag);
    }
    for (i, rule) in rules.iter().enumerate() {
        if !used_rule[i] {
            let tag = format!("copy{}:ci({})", rule.step + 1, g.display(rule.whole));
            push_eq(&mut sys, rule.residual(&exprs), tag);
        }
    }
    for s in &gens {
        let bound = 1u32 << s.len();
        for rule in rules.iter().filter(|r| r.whole.0 < bound) {
            let img = rule.image(s);
            let tag = format!("copy{}:ci({})", rule.step + 1, g.display(img.whole));
            push_eq(&mut sys, img.residual(&exprs), tag);
        }
    }
    for (t, terms) in &step_rows {
        push_eq(&mut sys, rewrite(&exprs, terms), format!("copy{}:independence", t + 1));
    }
    for (k, e) in &seq.extra {
        let mut acc = Vec::new();
        for (s, c) in e.coeffs() {
            acc.extend(exprs[s.0 as usize].iter().map(|(j, x)| (*j, x * c)));
        }
        let coeffs = normalize_sparse(acc);
        if !coeffs.is_empty() {
            sys.rows.push(Row::new(coeffs, Relation::Geq, format!("extra@{k}")));
        }
    }

    Ok(DerivedSystem {
        sys,
        ground: g,
        base: seq.ground0.clone(),
        main_masks: (1..=dim0).map(|s| Subset(s as u32)).collect(),
        exprs,
        classes,
        symmetry: SymmetryState { generators: gens },
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{feasible, implies, Feasibility, Implication};
    use crate::shannon::vamos_vector;

    const ZY_SPEC: &str = "base: a b c d\nc' = c : a b\n";

    fn zy() -> LinearFunctional {
        let g = GroundSet::letters(4).unwrap();
        InfoExpr::parse(&g, "[a,b,c,d] + (a,b|c) + (a,c|b) + (b,c|a)")
            .unwrap()
            .to_functional()
    }

    #[test]
    fn names_split() {
        assert_eq!(split_names("c2d2"), vec!["c2", "d2"]);
        assert_eq!(split_names("c'"), vec!["c'"]);
        assert_eq!(split_names("x y"), vec!["x", "y"]);
        assert_eq!(split_names("a2c3c4"), vec!["a2", "c3", "c4"]);
    }

    #[test]
    fn parse_round_trip() {
        let seq = parse_copy_spec(ZY_SPEC, CopyFlags::default()).unwrap();
        assert_eq!(seq.final_ground().unwrap().labels(), ["a", "b", "c", "d", "c'"]);
        let again = parse_copy_spec(&seq.to_text(), CopyFlags::default()).unwrap();
        assert_eq!(again.steps, seq.steps);
    }

    #[test]
    fn malformed_specs() {
        assert!(parse_copy_spec("base: a b\n", CopyFlags::default()).is_err());
        assert!(parse_copy_spec("base: a b c\na : a b\n", CopyFlags::default()).is_err());
        assert!(parse_copy_spec("base: a b c\nx y = a : b\n", CopyFlags::default()).is_err());
        assert!(parse_copy_spec("base: a b c\nb' = a : c\n", CopyFlags::default()).is_ok());
    }

    #[test]
    fn vamos_single_step() {
        let seq = parse_copy_spec(ZY_SPEC, CopyFlags::default()).unwrap();
        let d = build_copy_system(&seq).unwrap();
        assert_eq!(d.sys.nvars() - d.sys.main, 9);
        assert!(d.symmetry.is_empty());
        let v = vamos_vector(&d.base, d.base.parse_subset("cd").unwrap()).unwrap();
        let reduced = d.with_main_fixed(&v).unwrap();
        assert_eq!(reduced.nvars(), 9);
        match feasible(&reduced, None, None) {
            Feasibility::Infeasible(cert) => assert!(cert.refutes(&reduced)),
            other => panic!("expected infeasible, got {other}"),
        }
    }

    #[test]
    fn zy_implied() {
        let seq = parse_copy_spec(ZY_SPEC, CopyFlags::default()).unwrap();
        let d = build_copy_system(&seq).unwrap();
        let t = d.target(&zy()).unwrap();
        match implies(&d.sys, &t) {
            Implication::Yes(cert) => assert!(cert.proves(&d.sys, &t)),
            Implication::No(_) => panic!("ZY not derived"),
        }
    }

    #[test]
    fn full_copy_symmetry_counts() {
        let text = "base: a1 b1 c1 d1\nc2d2 = c1d1 : a1b1; a2c3c4 = a1c1c2 : b1d1d2\nb2c5c6c7c8 = b1c1c2c3c4 : a1a2d1d2\n";
        let seq = parse_copy_spec(text, CopyFlags::default()).unwrap();
        assert_eq!(seq.final_ground().unwrap().len(), 14);
        let d = build_copy_system(&seq).unwrap();
        assert_eq!(d.classes, 2351);
        // π1, π1*, π2, π1**, π2*, π3
        assert_eq!(d.symmetry.len(), 6);
    }

    #[test]
    fn shorthand_full_copy() {
        let seq = parse_copy_spec("base: a b c d\n: a b\n", CopyFlags::default()).unwrap();
        assert_eq!(seq.steps[0].names, vec!["c'", "d'"]);
        let d = build_copy_system(&seq).unwrap();
        assert_eq!(d.symmetry.len(), 1);
        let t = d.target(&zy()).unwrap();
        assert!(matches!(implies(&d.sys, &t), Implication::Yes(_)));
    }
}
