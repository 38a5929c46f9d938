use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::CyclotomicElement;
use crate::error::{Error, Result};
use crate::groups::FiniteGroup;
use crate::lvalues::{unit_generators, DirichletCharacter, LValueTable, Provider};

/// An abelian Gal(K/Q) as a quotient of (Z/f)^*: the image of each of
/// `unit_generators(f)` (a -> Frobenius at a).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirichletLink {
    pub modulus: u64,
    pub unit_images: Vec<usize>,
}

impl DirichletLink {
    fn check(&self, g: &FiniteGroup) -> Result<Vec<(u64, u64)>> {
        let gens = unit_generators(self.modulus);
        if gens.len() != self.unit_images.len() {
            return Err(Error::Invalid(format!(
                "(Z/{})^* has {} generators, {} images given",
                self.modulus,
                gens.len(),
                self.unit_images.len()
            )));
        }
        if !g.is_abelian() {
            return Err(Error::Invalid("a Dirichlet link needs an abelian group".into()));
        }
        for (&x, &(a, o)) in self.unit_images.iter().zip(&gens) {
            if x >= g.order() || o % g.elem_order(x) as u64 != 0 {
                return Err(Error::Invalid(format!("image of {a} mod {} has the wrong order", self.modulus)));
            }
        }
        if g.closure(&self.unit_images).len() != g.order() {
            return Err(Error::Invalid("the images do not generate the group".into()));
        }
        Ok(gens)
    }

    /// The Dirichlet character chi o link, as a character mod f.
    pub fn dirichlet(&self, chi: &crate::groups::Character) -> Result<DirichletCharacter> {
        let gens = self.check(chi.group())?;
        let exps = self
            .unit_images
            .iter()
            .zip(&gens)
            .map(|(&x, &(_, o))| {
                let v = chi.value(x).simplify();
                (0..o)
                    .find(|&e| CyclotomicElement::zeta_pow(o, e as i64) == v)
                    .ok_or_else(|| Error::Invalid("character value is not a root of unity of the right order".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        DirichletCharacter::new(self.modulus, &exps)
    }

    /// L(0, chi) = L(0, primitive Dirichlet character) for every nontrivial chi.
    pub fn table(&self, g: &Arc<FiniteGroup>) -> Result<LValueTable> {
        let mut t = LValueTable::new(g);
        for (i, chi) in g.irreducibles().iter().enumerate() {
            if chi.is_trivial() {
                continue;
            }
            let v = self.dirichlet(chi)?.primitive().l_at_0()?;
            t.insert(i, v, Provider::Bernoulli)?;
        }
        Ok(t)
    }
}
