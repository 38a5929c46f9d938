use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arith::finmod::{identity, mat_mul_i, reduce_rows, FinAb, IMat};
use crate::error::{Error, Result};
use crate::groups::FiniteGroup;

pub const GMODULE_SCHEMA_VERSION: u32 = 1;

/// A finite abelian group Z/d_1 + ... + Z/d_r with a left G-action, stored
/// as one integer matrix (column convention, rows reduced mod d_i) per group
/// element.
#[derive(Clone, Debug)]
pub struct GModule {
    group: Arc<FiniteGroup>,
    module: FinAb,
    gens: Vec<usize>,
    action: Vec<IMat>,
}

impl PartialEq for GModule {
    fn eq(&self, o: &Self) -> bool {
        *self.group == *o.group && self.module == o.module && self.action == o.action
    }
}

/// File form: matrices for generators only, keyed by element index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GModuleFile {
    pub schema_version: u32,
    #[serde(default)]
    pub group: Option<String>,
    pub invariant_factors: Vec<u64>,
    pub action: BTreeMap<usize, IMat>,
}

impl GModule {
    /// Extend generator matrices to the group and check the relations.
    pub fn from_generators(group: &Arc<FiniteGroup>, invariants: Vec<u64>, gens: &[usize], mats: &[IMat]) -> Result<Self> {
        if invariants.contains(&0) {
            return Err(Error::Invalid("invariant factor 0: the module must be finite".into()));
        }
        if gens.len() != mats.len() {
            return Err(Error::Invalid("one matrix per generator required".into()));
        }
        if let Some(&g) = gens.iter().find(|&&g| g >= group.order()) {
            return Err(Error::Invalid(format!("generator {g} is not an element of {}", group.name())));
        }
        let module = FinAb::new(invariants);
        let mut mats = mats.to_vec();
        for (k, m) in mats.iter_mut().enumerate() {
            if !module.is_endomorphism(m) {
                return Err(Error::Invalid(format!(
                    "matrix for generator {} is not a {}x{} endomorphism of the module",
                    gens[k],
                    module.rank(),
                    module.rank()
                )));
            }
            reduce_rows(m, &module.invariants);
        }
        let tree = group.word_tree(gens)?;
        let mut action: Vec<Option<IMat>> = vec![None; group.order()];
        action[0] = Some(reduced(&identity(module.rank()), &module));
        for x in FiniteGroup::tree_order(&tree) {
            if let Some((i, h)) = tree[x] {
                let prev = action[h].as_ref().expect("tree order");
                action[x] = Some(reduced(&mat_mul_i(&mats[i], prev), &module));
            }
        }
        let m = GModule {
            group: group.clone(),
            module,
            gens: gens.to_vec(),
            action: action.into_iter().map(|a| a.expect("tree spans the group")).collect(),
        };
        m.check_relations()?;
        Ok(m)
    }

    /// Build from matrices for every element; checks the relations.
    pub(crate) fn from_all(group: &Arc<FiniteGroup>, module: FinAb, gens: Vec<usize>, mut action: Vec<IMat>) -> Result<Self> {
        for a in action.iter_mut() {
            reduce_rows(a, &module.invariants);
        }
        let m = GModule {
            group: group.clone(),
            module,
            gens,
            action,
        };
        m.check_relations()?;
        Ok(m)
    }

    fn check_relations(&self) -> Result<()> {
        let g = &self.group;
        let id = reduced(&identity(self.rank()), &self.module);
        if self.action[0] != id {
            return Err(Error::Invalid("identity does not act trivially".into()));
        }
        for &s in &self.gens {
            for h in 0..g.order() {
                if reduced(&mat_mul_i(&self.action[s], &self.action[h]), &self.module) != self.action[g.mul(s, h)] {
                    return Err(Error::Invalid("action matrices do not satisfy the group relations".into()));
                }
            }
        }
        Ok(())
    }

    pub fn trivial(group: &Arc<FiniteGroup>, invariants: Vec<u64>) -> Result<Self> {
        let gens = group.generators();
        let id = identity(invariants.len());
        let mats = vec![id; gens.len()];
        Self::from_generators(group, invariants, &gens, &mats)
    }

    /// The free module (Z/n)[G] with basis the group elements.
    pub fn regular(group: &Arc<FiniteGroup>, n: u64) -> Result<Self> {
        Self::permutation(group, n, &[0])
    }

    /// The permutation module (Z/n)[G/H] on left cosets of the subgroup H.
    pub fn permutation(group: &Arc<FiniteGroup>, n: u64, sub: &[usize]) -> Result<Self> {
        let sub = group.closure(sub);
        let reps = group.coset_reps(&sub);
        let coset = |x: usize| -> usize {
            let c = sub.iter().map(|&h| group.mul(x, h)).min().expect("nonempty subgroup");
            reps.binary_search(&c).expect("least element is a representative")
        };
        let k = reps.len();
        let gens = group.generators();
        let mats: Vec<IMat> = gens
            .iter()
            .map(|&s| {
                let mut a = vec![vec![0i64; k]; k];
                for (j, &r) in reps.iter().enumerate() {
                    a[coset(group.mul(s, r))][j] = 1;
                }
                a
            })
            .collect();
        Self::from_generators(group, vec![n; k], &gens, &mats)
    }

    /// Z/n with each generator acting by the given unit.
    pub fn cyclic(group: &Arc<FiniteGroup>, n: u64, gens: &[usize], units: &[i64]) -> Result<Self> {
        let mats: Vec<IMat> = units.iter().map(|&u| vec![vec![u]]).collect();
        Self::from_generators(group, vec![n], gens, &mats)
    }

    pub fn direct_sum(&self, o: &Self) -> Result<Self> {
        if *self.group != *o.group {
            return Err(Error::Invalid("modules for different groups".into()));
        }
        let (r, s) = (self.rank(), o.rank());
        let mut inv = self.module.invariants.clone();
        inv.extend(&o.module.invariants);
        let action = self
            .action
            .iter()
            .zip(&o.action)
            .map(|(a, b)| {
                let mut m = vec![vec![0i64; r + s]; r + s];
                for i in 0..r {
                    m[i][..r].copy_from_slice(&a[i]);
                }
                for i in 0..s {
                    m[r + i][r..].copy_from_slice(&b[i]);
                }
                m
            })
            .collect();
        Self::from_all(&self.group, FinAb::new(inv), self.gens.clone(), action)
    }

    pub fn from_file(group: &Arc<FiniteGroup>, f: &GModuleFile) -> Result<Self> {
        if f.schema_version != GMODULE_SCHEMA_VERSION {
            return Err(Error::Schema(format!(
                "G-module schema_version {} (expected {GMODULE_SCHEMA_VERSION})",
                f.schema_version
            )));
        }
        let gens: Vec<usize> = f.action.keys().copied().collect();
        let mats: Vec<IMat> = f.action.values().cloned().collect();
        Self::from_generators(group, f.invariant_factors.clone(), &gens, &mats)
    }

    pub fn to_file(&self) -> GModuleFile {
        GModuleFile {
            schema_version: GMODULE_SCHEMA_VERSION,
            group: Some(self.group.name().to_string()),
            invariant_factors: self.module.invariants.clone(),
            action: self.gens.iter().map(|&g| (g, self.action[g].clone())).collect(),
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn abelian(&self) -> &FinAb {
        &self.module
    }

    pub fn invariants(&self) -> &[u64] {
        &self.module.invariants
    }

    pub fn rank(&self) -> usize {
        self.module.rank()
    }

    pub fn order(&self) -> u128 {
        self.module.order()
    }

    pub fn generators(&self) -> &[usize] {
        &self.gens
    }

    pub fn action(&self, g: usize) -> &IMat {
        &self.action[g]
    }

    pub fn apply(&self, g: usize, x: &[i64]) -> Vec<i64> {
        self.module.apply(&self.action[g], x)
    }

    /// All elements; small modules only.
    pub fn elements(&self) -> Vec<Vec<i64>> {
        self.module.elements()
    }

    /// Is `f` (rows indexed by the target) a G-equivariant homomorphism self -> to?
    pub fn is_hom(&self, to: &GModule, f: &IMat) -> bool {
        if f.len() != to.rank() || f.iter().any(|r| r.len() != self.rank()) {
            return false;
        }
        let well_defined = (0..self.rank()).all(|j| {
            (0..to.rank()).all(|i| (self.invariants()[j] as i128 * f[i][j] as i128).rem_euclid(to.invariants()[i] as i128) == 0)
        });
        let red = |m: IMat| {
            let mut m = m;
            reduce_rows(&mut m, to.invariants());
            m
        };
        well_defined
            && self
                .gens
                .iter()
                .all(|&s| red(mat_mul_i(f, &self.action[s])) == red(mat_mul_i(&to.action[s], f)))
    }
}

fn reduced(a: &IMat, m: &FinAb) -> IMat {
    let mut a = a.clone();
    reduce_rows(&mut a, &m.invariants);
    a
}
