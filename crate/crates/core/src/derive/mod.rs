//! Constraint systems for copy steps, maximum-entropy instances and the
//! Ahlswede-Körner gadget.

mod ak;
mod copy;
mod maxe;
mod precheck;

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::Zero;

pub use ak::{ak2_apply, ak2_gadget, ak_divergence, akz_apply, PartialRanks};
pub use copy::{build_copy_system, parse_copy_spec, CopyFlags, CopySequence, CopyStep, SymmetryState};
pub use maxe::{
    build_gmaxe_system, build_maxe_system, no4_check, parse_gmaxe_spec, parse_maxe_spec, partitions_separating,
    subsets_separated_by, GmaxeSpec, MaxeSpec, No4, Partition,
};
pub use precheck::{explicit_copy, precheck, tighten_copy, Advisory};

use crate::cone::{consequence_cone, filter_shannon, ConsequenceCone, DdOptions, RayList};
use crate::error::{Error, Result};
use crate::functional::LinearFunctional;
use crate::ground::{GroundSet, Subset};
use crate::lp::{normalize_sparse, ConstraintSystem, Relation, Row, SparseVec};
use crate::num::Rational;
use crate::poly::{Polymatroid, SetFunction};
use crate::shannon::{shannon_instances, submodular_instances, ShannonInstance};

/// A constraint system over the subsets of a large ground set whose main
/// variables are values on subsets of a base ground set.
#[derive(Clone, Debug)]
pub struct DerivedSystem {
    pub sys: ConstraintSystem,
    /// Ground set of the extension.
    pub ground: GroundSet,
    /// Ground set of the main variables.
    pub base: GroundSet,
    /// Base subset of each main variable.
    pub main_masks: Vec<Subset>,
    /// Expression of every subset of `ground` (indexed by mask) over the variables.
    pub exprs: Vec<SparseVec>,
    /// Number of subset classes after merging equal variables.
    pub classes: usize,
    pub symmetry: SymmetryState,
    pub notes: Vec<String>,
}

impl DerivedSystem {
    pub fn main_index(&self, s: Subset) -> Option<usize> {
        self.main_masks.iter().position(|&m| m == s)
    }

    /// A functional over the base as a target over the main variables.
    pub fn target(&self, e: &LinearFunctional) -> Result<SparseVec> {
        if e.ground() != &self.base {
            return Err(Error::GroundMismatch);
        }
        let mut out = Vec::new();
        for (s, c) in e.coeffs() {
            let j = self.main_index(s).ok_or_else(|| {
                Error::Invalid(format!("subset {} is not a main variable", self.base.display(s)))
            })?;
            out.push((j, c.clone()));
        }
        Ok(normalize_sparse(out))
    }

    /// Main-variable vector as a functional over the base.
    pub fn main_functional(&self, v: &[BigInt]) -> LinearFunctional {
        LinearFunctional::from_terms(
            self.base.clone(),
            self.main_masks
                .iter()
                .zip(v)
                .filter(|(_, x)| !x.is_zero())
                .map(|(&s, x)| (s, Rational::from_integer(x.clone()))),
        )
    }

    /// The system with main variables replaced by the values of `f`; only
    /// auxiliary variables remain.
    pub fn with_main_fixed(&self, f: &Polymatroid) -> Result<ConstraintSystem> {
        if f.ground() != &self.base {
            return Err(Error::GroundMismatch);
        }
        let main = self.sys.main;
        let mut out = ConstraintSystem::new(self.sys.vars[main..].to_vec());
        for row in &self.sys.rows {
            let mut rhs = row.rhs.clone();
            let mut coeffs = Vec::new();
            for (j, c) in &row.coeffs {
                if *j < main {
                    rhs -= c * f.rank(self.main_masks[*j]);
                } else {
                    coeffs.push((*j - main, c.clone()));
                }
            }
            out.rows.push(Row::new(coeffs, row.rel, row.tag.clone()).with_rhs(rhs));
        }
        Ok(out)
    }

    pub fn consequences(&self, opts: DdOptions) -> Result<ConsequenceCone> {
        consequence_cone(&self.sys, opts)
    }

    /// Rays over the main variables as rays over all subsets of the base.
    pub fn base_rays(&self, rays: &RayList) -> RayList {
        let out = rays
            .rays
            .iter()
            .map(|r| {
                let mut v = vec![BigInt::zero(); self.base.dim()];
                for (s, x) in self.main_masks.iter().zip(r) {
                    v[s.index()] = x.clone();
                }
                v
            })
            .collect();
        RayList::new(self.base.dim(), out)
    }

    /// Consequences over the base that do not follow from the basic inequalities.
    pub fn new_inequalities(&self, opts: DdOptions) -> Result<Vec<LinearFunctional>> {
        let cone = self.consequences(opts)?;
        filter_shannon(&self.base_rays(&cone.rays), &self.base).functionals(&self.base)
    }
}

fn sparse_add(acc: &mut SparseVec, v: &SparseVec, k: i64) {
    let k = Rational::from_integer(k.into());
    acc.extend(v.iter().map(|(j, c)| (*j, c * &k)));
}

/// Rewrites basic inequalities on `n` elements through `exprs` into rows,
/// skipping zero and repeated rows. `negate` marks rows to flip.
pub(crate) fn push_shannon_rows(
    sys: &mut ConstraintSystem,
    ground: &GroundSet,
    exprs: &[SparseVec],
    balanced: bool,
    negate: &dyn Fn(&ShannonInstance) -> bool,
    seen: &mut HashSet<SparseVec>,
) {
    let n = ground.len();
    let list = if balanced {
        submodular_instances(n)
    } else {
        shannon_instances(n)
    };
    for inst in list {
        let flip = negate(&inst);
        let mut acc = Vec::new();
        for (s, c) in inst.terms() {
            sparse_add(&mut acc, &exprs[s.0 as usize], if flip { -c } else { c });
        }
        let coeffs = normalize_sparse(acc);
        if coeffs.is_empty() || !seen.insert(coeffs.clone()) {
            continue;
        }
        let tag = if flip {
            format!("-{}", inst.tag(ground))
        } else {
            inst.tag(ground)
        };
        sys.rows.push(Row::new(coeffs, Relation::Geq, tag));
    }
}

/// Expression of a linear combination of subset values.
pub(crate) fn rewrite(exprs: &[SparseVec], terms: &[(Subset, i64)]) -> SparseVec {
    let mut acc = Vec::new();
    for (s, c) in terms {
        if !s.is_empty() {
            sparse_add(&mut acc, &exprs[s.0 as usize], *c);
        }
    }
    normalize_sparse(acc)
}
