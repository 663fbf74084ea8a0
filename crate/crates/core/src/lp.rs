//! Exact rational linear programming with Farkas certificates.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::functional::LinearFunctional;
use crate::ground::GroundSet;
use crate::num::Rational;
use crate::shannon::{shannon_instances, ShannonInstance};

/// Sparse vector as sorted `(index, value)` pairs without zeros.
pub type SparseVec = Vec<(usize, Rational)>;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Relation {
    /// `coeffs·x ≥ rhs`
    Geq,
    /// `coeffs·x = rhs`
    Eq,
}

#[derive(Clone, PartialEq, Debug)]
pub struct Row {
    pub coeffs: SparseVec,
    pub rel: Relation,
    pub rhs: Rational,
    pub tag: String,
}

impl Row {
    pub fn new(coeffs: SparseVec, rel: Relation, tag: impl Into<String>) -> Row {
        Row {
            coeffs: normalize_sparse(coeffs),
            rel,
            rhs: Rational::zero(),
            tag: tag.into(),
        }
    }

    pub fn with_rhs(mut self, rhs: Rational) -> Row {
        self.rhs = rhs;
        self
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.coeffs.iter().map(|(j, c)| c * &x[*j]).sum()
    }

    pub fn holds(&self, x: &[Rational]) -> bool {
        let v = self.eval(x);
        match self.rel {
            Relation::Geq => v >= self.rhs,
            Relation::Eq => v == self.rhs,
        }
    }
}

/// Sort by index, merge duplicates and drop zeros.
pub fn normalize_sparse(mut v: SparseVec) -> SparseVec {
    v.sort_by_key(|(j, _)| *j);
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (j, c) in v {
        match out.last_mut() {
            Some((k, d)) if *k == j => *d += c,
            _ => out.push((j, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

/// Rows over labelled variables. The first `main` variables are the main
/// (kept) coordinates, the rest are auxiliary.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct ConstraintSystem {
    pub vars: Vec<String>,
    pub rows: Vec<Row>,
    pub main: usize,
}

impl ConstraintSystem {
    pub fn new(vars: Vec<String>) -> ConstraintSystem {
        let main = vars.len();
        ConstraintSystem {
            vars,
            rows: Vec::new(),
            main,
        }
    }

    pub fn push(&mut self, row: Row) -> Result<()> {
        if let Some((j, _)) = row.coeffs.iter().find(|(j, _)| *j >= self.vars.len()) {
            return Err(Error::Invalid(format!("row `{}` uses undeclared variable {j}", row.tag)));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Basic inequalities of a ground set over variables named by subsets.
    pub fn shannon(ground: &GroundSet) -> ConstraintSystem {
        let vars: Vec<String> = ground.nonempty_subsets().map(|s| ground.display(s)).collect();
        let mut sys = ConstraintSystem::new(vars);
        for inst in shannon_instances(ground.len()) {
            sys.rows.push(shannon_row(&inst, ground));
        }
        sys
    }

    /// Dense target over the variables of a system whose variables are the
    /// subsets of `e`'s ground set in mask order.
    pub fn target_from(&self, e: &LinearFunctional) -> Result<SparseVec> {
        if e.ground().dim() > self.vars.len() {
            return Err(Error::GroundMismatch);
        }
        Ok(e.coeffs().map(|(s, c)| (s.index(), c.clone())).collect())
    }

    pub fn all_hold(&self, x: &[Rational]) -> bool {
        self.rows.iter().all(|r| r.holds(x))
    }
}

pub fn shannon_row(inst: &ShannonInstance, ground: &GroundSet) -> Row {
    Row::new(
        inst.terms()
            .into_iter()
            .map(|(s, c)| (s.index(), Rational::from_integer(c.into())))
            .collect(),
        Relation::Geq,
        inst.tag(ground),
    )
}

/// Row multipliers: `≥ 0` on inequality rows, free on equality rows.
#[derive(Clone, PartialEq, Debug)]
pub struct FarkasCertificate {
    pub multipliers: Vec<(usize, Rational)>,
}

impl FarkasCertificate {
    /// `Σ multiplier·row` over the system's variables.
    pub fn combination(&self, sys: &ConstraintSystem) -> (SparseVec, Rational) {
        let mut acc: SparseVec = Vec::new();
        let mut rhs = Rational::zero();
        for (i, m) in &self.multipliers {
            let row = &sys.rows[*i];
            acc.extend(row.coeffs.iter().map(|(j, c)| (*j, c * m)));
            rhs += &row.rhs * m;
        }
        (normalize_sparse(acc), rhs)
    }

    fn signs_ok(&self, sys: &ConstraintSystem) -> bool {
        self.multipliers.iter().all(|(i, m)| {
            *i < sys.rows.len() && (sys.rows[*i].rel == Relation::Eq || !m.is_negative())
        })
    }

    /// Exact check that the rows combine to `target` (homogeneous rows).
    pub fn proves(&self, sys: &ConstraintSystem, target: &SparseVec) -> bool {
        let (acc, _) = self.combination(sys);
        self.signs_ok(sys) && acc == normalize_sparse(target.clone())
    }

    /// Exact check of an infeasibility proof: rows combine to `0 ≥ positive`.
    pub fn refutes(&self, sys: &ConstraintSystem) -> bool {
        let (acc, rhs) = self.combination(sys);
        self.signs_ok(sys) && acc.is_empty() && rhs.is_positive()
    }

    /// Certificate text: one `tag weight` line per row, then `check: OK`
    /// or `check: FAILED`.
    pub fn render(&self, sys: &ConstraintSystem, ok: bool) -> String {
        let mut out = String::new();
        for (i, m) in &self.multipliers {
            out.push_str(&format!("{} {}\n", sys.rows[*i].tag, m));
        }
        out.push_str(if ok { "check: OK\n" } else { "check: FAILED\n" });
        out
    }
}

#[derive(Clone, PartialEq, Debug)]
pub enum Implication {
    Yes(FarkasCertificate),
    /// A point satisfying the system on which the target is negative.
    No(Vec<Rational>),
}

#[derive(Clone, PartialEq, Debug)]
pub enum Feasibility {
    Feasible(Vec<Rational>),
    Infeasible(FarkasCertificate),
    Unbounded,
}

impl fmt::Display for Feasibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Feasibility::Feasible(_) => write!(f, "feasible"),
            Feasibility::Infeasible(_) => write!(f, "infeasible"),
            Feasibility::Unbounded => write!(f, "unbounded"),
        }
    }
}

/// Outcome of `min c·z, Az = b, z ≥ 0`.
#[derive(Clone, PartialEq, Debug)]
pub enum Standard {
    Optimal(Vec<Rational>),
    /// `w` with `wA ≥ 0` and `w·b < 0`.
    Infeasible(Vec<Rational>),
    Unbounded,
}

/// Dense two-phase simplex with Bland's rule. `cols` are the sparse columns of `A`.
pub fn solve_standard(m: usize, cols: &[SparseVec], b: &[Rational], cost: Option<&[Rational]>) -> Standard {
    let n = cols.len();
    let width = n + m;
    let sign: Vec<bool> = b.iter().map(|x| x.is_negative()).collect();
    let mut t: Vec<Vec<Rational>> = vec![vec![Rational::zero(); width + 1]; m];
    for (j, col) in cols.iter().enumerate() {
        for (i, v) in col {
            t[*i][j] = if sign[*i] { -v.clone() } else { v.clone() };
        }
    }
    for i in 0..m {
        t[i][n + i] = Rational::one();
        t[i][width] = b[i].abs();
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    // phase one: minimise the sum of artificials
    let mut r = vec![Rational::zero(); width + 1];
    for j in n..width {
        r[j] = Rational::one();
    }
    for row in &t {
        for (k, v) in row.iter().enumerate() {
            if !v.is_zero() {
                r[k] -= v;
            }
        }
    }
    for j in n..width {
        r[j] = Rational::zero();
    }
    let allowed = |_: usize| true;
    run(&mut t, &mut r, &mut basis, width, &allowed);
    // r[width] holds −(phase one objective)
    let phase1 = -r[width].clone();
    if phase1.is_positive() {
        // y_i = 1 − r_{n+i}; w = −S·y
        let w: Vec<Rational> = (0..m)
            .map(|i| {
                let y = Rational::one() - &r[n + i];
                if sign[i] {
                    y
                } else {
                    -y
                }
            })
            .collect();
        return Standard::Infeasible(w);
    }
    // drive artificials out of the basis
    let mut live = vec![true; m];
    for i in 0..m {
        if basis[i] >= n {
            match (0..n).find(|&j| !t[i][j].is_zero()) {
                Some(j) => pivot(&mut t, &mut r, &mut basis, i, j, width),
                None => live[i] = false,
            }
        }
    }
    if let Some(c) = cost {
        let mut r2 = vec![Rational::zero(); width + 1];
        r2[..n].clone_from_slice(c);
        for i in 0..m {
            if !live[i] {
                continue;
            }
            let cb = if basis[i] < n { c[basis[i]].clone() } else { Rational::zero() };
            if cb.is_zero() {
                continue;
            }
            for k in 0..=width {
                if !t[i][k].is_zero() {
                    let d = &cb * &t[i][k];
                    r2[k] -= d;
                }
            }
        }
        let structural = |j: usize| j < n;
        if !run_masked(&mut t, &mut r2, &mut basis, width, &structural, &live) {
            return Standard::Unbounded;
        }
    }
    let mut x = vec![Rational::zero(); n];
    for i in 0..m {
        if live[i] && basis[i] < n {
            x[basis[i]] = t[i][width].clone();
        }
    }
    Standard::Optimal(x)
}

fn pivot(t: &mut [Vec<Rational>], r: &mut [Rational], basis: &mut [usize], p: usize, q: usize, width: usize) {
    let inv = t[p][q].recip();
    for v in t[p].iter_mut() {
        if !v.is_zero() {
            *v *= &inv;
        }
    }
    let prow = t[p].clone();
    let nz: Vec<usize> = (0..=width).filter(|&k| !prow[k].is_zero()).collect();
    for (i, row) in t.iter_mut().enumerate() {
        if i == p || row[q].is_zero() {
            continue;
        }
        let f = row[q].clone();
        for &k in &nz {
            let d = &f * &prow[k];
            row[k] -= d;
        }
    }
    if !r[q].is_zero() {
        let f = r[q].clone();
        for &k in &nz {
            let d = &f * &prow[k];
            r[k] -= d;
        }
    }
    basis[p] = q;
}

fn run(t: &mut [Vec<Rational>], r: &mut [Rational], basis: &mut [usize], width: usize, allowed: &dyn Fn(usize) -> bool) -> bool {
    let live = vec![true; t.len()];
    run_masked(t, r, basis, width, allowed, &live)
}

/// Bland's rule iterations; false if unbounded.
fn run_masked(
    t: &mut [Vec<Rational>],
    r: &mut [Rational],
    basis: &mut [usize],
    width: usize,
    allowed: &dyn Fn(usize) -> bool,
    live: &[bool],
) -> bool {
    loop {
        let Some(q) = (0..width).find(|&j| allowed(j) && r[j].is_negative()) else {
            return true;
        };
        let mut best: Option<(usize, Rational)> = None;
        for i in 0..t.len() {
            if !live[i] || !t[i][q].is_positive() {
                continue;
            }
            let ratio = &t[i][width] / &t[i][q];
            best = match best {
                None => Some((i, ratio)),
                Some((bi, br)) => {
                    if ratio < br || (ratio == br && basis[i] < basis[bi]) {
                        Some((i, ratio))
                    } else {
                        Some((bi, br))
                    }
                }
            };
        }
        let Some((p, _)) = best else {
            return false;
        };
        pivot(t, r, basis, p, q, width);
    }
}

/// Is `target` a combination of the rows (non-negative on inequalities)?
/// Only the homogeneous parts of rows are used.
pub fn implies(sys: &ConstraintSystem, target: &SparseVec) -> Implication {
    let mut cols: Vec<SparseVec> = Vec::new();
    let mut owner: Vec<(usize, bool)> = Vec::new();
    for (i, row) in sys.rows.iter().enumerate() {
        cols.push(row.coeffs.clone());
        owner.push((i, false));
        if row.rel == Relation::Eq {
            cols.push(row.coeffs.iter().map(|(j, c)| (*j, -c.clone())).collect());
            owner.push((i, true));
        }
    }
    let m = sys.nvars();
    let mut b = vec![Rational::zero(); m];
    for (j, c) in target {
        b[*j] += c;
    }
    match solve_standard(m, &cols, &b, None) {
        Standard::Optimal(z) => {
            let mut mult = vec![Rational::zero(); sys.rows.len()];
            for (k, v) in z.into_iter().enumerate() {
                let (i, neg) = owner[k];
                if neg {
                    mult[i] -= v;
                } else {
                    mult[i] += v;
                }
            }
            Implication::Yes(FarkasCertificate {
                multipliers: mult
                    .into_iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .collect(),
            })
        }
        Standard::Infeasible(w) => Implication::No(w),
        Standard::Unbounded => unreachable!("no objective in feasibility phase"),
    }
}

/// Feasibility of `rows ∧ normalization·x ≥ 1` (when given), optionally
/// minimising `objective·x`.
pub fn feasible(
    sys: &ConstraintSystem,
    objective: Option<&SparseVec>,
    normalization: Option<&SparseVec>,
) -> Feasibility {
    let mut full = sys.clone();
    if let Some(g) = normalization {
        full.rows.push(Row::new(g.clone(), Relation::Geq, "normalization").with_rhs(Rational::one()));
    }
    let nv = full.nvars();
    let m = full.rows.len();
    // columns: x⁺ (nv), x⁻ (nv), one surplus per inequality row
    let mut cols: Vec<SparseVec> = vec![Vec::new(); 2 * nv];
    let mut surplus_of = Vec::new();
    for (i, row) in full.rows.iter().enumerate() {
        for (j, c) in &row.coeffs {
            cols[*j].push((i, c.clone()));
            cols[nv + *j].push((i, -c.clone()));
        }
        if row.rel == Relation::Geq {
            surplus_of.push(i);
            cols.push(vec![(i, -Rational::one())]);
        }
    }
    let b: Vec<Rational> = full.rows.iter().map(|r| r.rhs.clone()).collect();
    let cost: Option<Vec<Rational>> = objective.map(|o| {
        let mut c = vec![Rational::zero(); cols.len()];
        for (j, v) in o {
            c[*j] = v.clone();
            c[nv + *j] = -v.clone();
        }
        c
    });
    match solve_standard(m, &cols, &b, cost.as_deref()) {
        Standard::Optimal(z) => Feasibility::Feasible((0..nv).map(|j| &z[j] - &z[nv + j]).collect()),
        Standard::Infeasible(w) => {
            let multipliers = w
                .into_iter()
                .enumerate()
                .map(|(i, v)| (i, -v))
                .filter(|(_, v)| !v.is_zero())
                .collect();
            Feasibility::Infeasible(FarkasCertificate { multipliers })
        }
        Standard::Unbounded => Feasibility::Unbounded,
    }
}

/// Same as [`feasible`] but returns the system used (normalization row
/// appended), so certificates can be checked and printed against it.
pub fn feasible_with_system(
    sys: &ConstraintSystem,
    objective: Option<&SparseVec>,
    normalization: Option<&SparseVec>,
) -> (ConstraintSystem, Feasibility) {
    let mut full = sys.clone();
    if let Some(g) = normalization {
        full.rows.push(Row::new(g.clone(), Relation::Geq, "normalization").with_rhs(Rational::one()));
    }
    let res = feasible(&full, objective, None);
    (full, res)
}

/// Non-negative weights on basic inequalities summing to `e`, minimising the
/// total weight.
pub fn shannon_decompose(
    e: &LinearFunctional,
    basis: Option<&[ShannonInstance]>,
) -> Result<Vec<(ShannonInstance, Rational)>> {
    let g = e.ground();
    if g.len() < 2 {
        return Err(Error::TooFewElements);
    }
    let all;
    let basis = match basis {
        Some(b) => b,
        None => {
            all = shannon_instances(g.len());
            &all
        }
    };
    let cols: Vec<SparseVec> = basis
        .iter()
        .map(|s| {
            s.terms()
                .into_iter()
                .map(|(m, c)| (m.index(), Rational::from_integer(c.into())))
                .collect()
        })
        .collect();
    let b = e.dense();
    let cost = vec![Rational::one(); cols.len()];
    match solve_standard(g.dim(), &cols, &b, Some(&cost)) {
        Standard::Optimal(z) => Ok(basis
            .iter()
            .zip(z)
            .filter(|(_, w)| !w.is_zero())
            .map(|(s, w)| (*s, w))
            .collect()),
        Standard::Infeasible(_) => Err(Error::Failed("not a non-negative combination of basic inequalities".into())),
        Standard::Unbounded => Err(Error::Failed("unbounded decomposition objective".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::InfoExpr;
    use crate::num::{rat, ratio};
    use crate::shannon::vamos_vector;

    fn sv(v: &[(usize, i64)]) -> SparseVec {
        v.iter().map(|(j, c)| (*j, rat(*c))).collect()
    }

    #[test]
    fn empty_system_feasible() {
        let sys = ConstraintSystem::new(vec!["x".into()]);
        assert_eq!(feasible(&sys, None, None), Feasibility::Feasible(vec![rat(0)]));
    }

    #[test]
    fn normalized_cone_infeasible() {
        let mut sys = ConstraintSystem::new(vec!["x".into()]);
        sys.push(Row::new(sv(&[(0, 1)]), Relation::Geq, "x>=0")).unwrap();
        let (full, res) = feasible_with_system(&sys, None, Some(&sv(&[(0, -1)])));
        match res {
            Feasibility::Infeasible(c) => assert!(c.refutes(&full)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn optimum_and_unbounded() {
        let mut sys = ConstraintSystem::new(vec!["x".into(), "y".into()]);
        sys.push(Row::new(sv(&[(0, 1), (1, 1)]), Relation::Geq, "s").with_rhs(rat(2))).unwrap();
        sys.push(Row::new(sv(&[(0, 1)]), Relation::Geq, "x")).unwrap();
        sys.push(Row::new(sv(&[(1, 1)]), Relation::Geq, "y")).unwrap();
        sys.push(Row::new(sv(&[(0, 1), (1, -1)]), Relation::Eq, "eq").with_rhs(ratio(1, 2))).unwrap();
        match feasible(&sys, Some(&sv(&[(0, 1), (1, 2)])), None) {
            Feasibility::Feasible(x) => {
                assert_eq!(x, vec![ratio(5, 4), ratio(3, 4)]);
                assert!(sys.all_hold(&x));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(feasible(&sys, Some(&sv(&[(0, -1)])), None), Feasibility::Unbounded);
    }

    #[test]
    fn basic_inequality_is_implied() {
        let g = GroundSet::letters(3).unwrap();
        let sys = ConstraintSystem::shannon(&g);
        let inst = shannon_instances(3)[5];
        let t = sys.target_from(&inst.functional(&g)).unwrap();
        match implies(&sys, &t) {
            Implication::Yes(c) => assert!(c.proves(&sys, &t)),
            Implication::No(_) => panic!("basic inequality not implied"),
        }
    }

    #[test]
    fn zhang_yeung_not_shannon() {
        let g = GroundSet::letters(4).unwrap();
        let sys = ConstraintSystem::shannon(&g);
        let zy = InfoExpr::parse(&g, "[a,b,c,d] + (a,b|c) + (a,c|b) + (b,c|a)").unwrap().to_functional();
        let t = sys.target_from(&zy).unwrap();
        match implies(&sys, &t) {
            Implication::No(x) => {
                assert!(sys.all_hold(&x));
                let val: Rational = t.iter().map(|(j, c)| c * &x[*j]).sum();
                assert!(val.is_negative());
            }
            Implication::Yes(_) => panic!("ZY is not Shannon"),
        }
        assert!(shannon_decompose(&zy, None).is_err());
        let v = vamos_vector(&g, g.parse_subset("cd").unwrap()).unwrap();
        assert!(v.dot(&zy).unwrap().is_negative());
    }

    #[test]
    fn decompose_single_instance() {
        let g = GroundSet::letters(3).unwrap();
        let inst = shannon_instances(3)[4];
        let d = shannon_decompose(&inst.functional(&g), None).unwrap();
        assert_eq!(d, vec![(inst, rat(1))]);
    }
}
