//! Finite G-modules and their chi-twists M[chi] = T (x) M, on which g acts by
//! t (x) m -> t g^-1 (x) g(m). Cohomology in degrees 0..2, Tate groups in
//! degrees -1 and 0, the truncated Euler characteristic h(mu, chi), and the
//! two annihilation lemmas (transfer to O (x) M, trace descent to M).

mod cohom;
mod module;

use num_traits::ToPrimitive;

use crate::arith::finmod::{papply, FinAb, IMat, PMat, SubQuo};
use crate::centre::{projector, GroupRingElement};
use crate::cyclotomic::{element_matrix, inverse_different, tables, CycloIdeal, CyclotomicElement};
use crate::error::{Error, Result};
use crate::groups::{realize, Character, MatrixRep};

use cohom::{locals, sylow, Acting, Local};

pub use cohom::FiniteOModule;
pub use module::{GModule, GModuleFile, GMODULE_SCHEMA_VERSION};

type Part = (SubQuo, PMat);

/// Z-matrix of multiplication by a on the power basis 1, zeta, ... of Z[zeta_m].
pub fn multiplication_matrix(m: u64, a: &CyclotomicElement) -> Result<IMat> {
    let a = embed_into(m, a)?;
    if !a.is_integral() {
        return Err(Error::Invalid(format!("{a} is not integral")));
    }
    let deg = tables(m).degree;
    let mut out = vec![vec![0i64; deg]; deg];
    for c in 0..deg {
        let col = &a * &CyclotomicElement::zeta_pow(m, c as i64);
        for (r, v) in col.numerators().iter().enumerate() {
            out[r][c] = v.to_i64().ok_or_else(|| Error::Unsupported("coefficient overflow".into()))?;
        }
    }
    Ok(out)
}

fn embed_into(m: u64, a: &CyclotomicElement) -> Result<CyclotomicElement> {
    let a = a.simplify();
    if m % a.conductor() != 0 {
        return Err(Error::Invalid(format!("{a} does not lie in Q(zeta_{m})")));
    }
    Ok(a.embed(m))
}

/// M[chi] as a G-module over Z, with the matrix of zeta_m giving its
/// O-structure. Coordinate (i, c, s) is t_i zeta^c (x) e_s.
#[derive(Clone, Debug)]
pub struct TwistedModule {
    chi: Character,
    rep: MatrixRep,
    degree: usize,
    base: GModule,
    module: GModule,
    zeta: IMat,
}

/// Build M[chi] from a realization of chi (the monomial one when none is given).
pub fn build_twist(chi: &Character, m: &GModule, rep: Option<&MatrixRep>) -> Result<TwistedModule> {
    if **chi.group() != **m.group() {
        return Err(Error::Invalid("character and module belong to different groups".into()));
    }
    let rep = match rep {
        Some(r) => r.clone(),
        None => realize(chi)?,
    };
    if !rep.affords(chi) {
        return Err(Error::Invalid("realization does not afford the character".into()));
    }
    let g = m.group();
    let cond = rep.conductor;
    let deg = tables(cond).degree;
    let (d, r) = (rep.dim, m.rank());
    let size = d * deg * r;
    let idx = |i: usize, c: usize, s: usize| (i * deg + c) * r + s;
    let mut invariants = Vec::with_capacity(size);
    for _ in 0..d * deg {
        invariants.extend_from_slice(m.invariants());
    }
    let mut action = Vec::with_capacity(g.order());
    for x in 0..g.order() {
        let rho = rep.matrix(g.inv(x));
        let a = m.action(x);
        let mut out = vec![vec![0i64; size]; size];
        for i in 0..d {
            for j in 0..d {
                if rho[i][j].is_zero() {
                    continue;
                }
                // t_i g^-1 = sum_j rho(g^-1)_ij t_j
                let mult = multiplication_matrix(cond, &rho[i][j])?;
                for c in 0..deg {
                    for c2 in 0..deg {
                        let k = mult[c2][c];
                        if k == 0 {
                            continue;
                        }
                        for s in 0..r {
                            for u in 0..r {
                                let v = (k as i128 * a[u][s] as i128).rem_euclid(m.invariants()[u] as i128);
                                let cell = &mut out[idx(j, c2, u)][idx(i, c, s)];
                                *cell = ((*cell as i128 + v) % m.invariants()[u] as i128) as i64;
                            }
                        }
                    }
                }
            }
        }
        action.push(out);
    }
    let module = GModule::from_all(g, FinAb::new(invariants), m.generators().to_vec(), action)?;
    let zm = multiplication_matrix(cond, &CyclotomicElement::zeta(cond))?;
    let mut zeta = vec![vec![0i64; size]; size];
    for i in 0..d {
        for c in 0..deg {
            for c2 in 0..deg {
                for s in 0..r {
                    zeta[idx(i, c2, s)][idx(i, c, s)] = zm[c2][c];
                }
            }
        }
    }
    Ok(TwistedModule {
        chi: chi.clone(),
        rep,
        degree: deg,
        base: m.clone(),
        module,
        zeta,
    })
}

/// t(M, chi): M_chi -> M^chi induced by the norm, with kernel and cokernel.
#[derive(Clone, Debug)]
pub struct NormMap {
    pub source: FiniteOModule,
    pub target: FiniteOModule,
    pub kernel: FiniteOModule,
    pub cokernel: FiniteOModule,
}

impl NormMap {
    pub fn is_bijective(&self) -> bool {
        self.kernel.is_trivial() && self.cokernel.is_trivial()
    }
}

impl TwistedModule {
    /// M itself, as the twist by the trivial character.
    pub fn untwisted(m: &GModule) -> Result<Self> {
        build_twist(&m.group().trivial_character(), m, None)
    }

    pub fn character(&self) -> &Character {
        &self.chi
    }

    pub fn rep(&self) -> &MatrixRep {
        &self.rep
    }

    pub fn conductor(&self) -> u64 {
        self.rep.conductor
    }

    pub fn base(&self) -> &GModule {
        &self.base
    }

    /// M[chi] as a G-module over Z.
    pub fn module(&self) -> &GModule {
        &self.module
    }

    pub fn zeta(&self) -> &IMat {
        &self.zeta
    }

    pub fn index(&self, i: usize, c: usize, s: usize) -> usize {
        (i * self.degree + c) * self.base.rank() + s
    }

    fn locals(&self) -> Vec<Local> {
        locals(&self.module, &self.zeta)
    }

    fn whole(&self) -> Acting<'_> {
        Acting::new(self.module.group(), self.module.generators().to_vec())
    }

    fn collect(&self, f: impl Fn(&Local, &Acting) -> Part) -> FiniteOModule {
        let act = self.whole();
        FiniteOModule::new(self.conductor(), self.locals().iter().map(|l| f(l, &act)).collect())
    }

    /// M^chi = H^0(G, M[chi]).
    pub fn invariants(&self) -> FiniteOModule {
        self.collect(|l, a| (l.h0(a), l.zeta.clone()))
    }

    /// M_chi = M[chi] / I_G M[chi].
    pub fn coinvariants(&self) -> FiniteOModule {
        self.collect(|l, a| (l.coinvariants(a), l.zeta.clone()))
    }

    pub fn norm_map(&self) -> NormMap {
        NormMap {
            source: self.coinvariants(),
            target: self.invariants(),
            kernel: self.collect(|l, a| (l.tate_minus1(a), l.zeta.clone())),
            cokernel: self.collect(|l, a| (l.tate0(a), l.zeta.clone())),
        }
    }

    pub fn cohomology(&self, i: usize) -> Result<FiniteOModule> {
        match i {
            0 => Ok(self.invariants()),
            1 => Ok(self.collect(|l, a| l.h1(a))),
            2 => Ok(self.collect(|l, a| l.h2(a))),
            _ => Err(Error::Unsupported(format!("cohomology in degree {i}"))),
        }
    }

    /// Tate cohomology in degrees -1 and 0.
    pub fn tate(&self, i: i32) -> Result<FiniteOModule> {
        match i {
            -1 => Ok(self.collect(|l, a| (l.tate_minus1(a), l.zeta.clone()))),
            0 => Ok(self.collect(|l, a| (l.tate0(a), l.zeta.clone()))),
            _ => Err(Error::Unsupported(format!("Tate cohomology in degree {i}"))),
        }
    }

    /// Cohomological triviality: Tate H^0 and H^1 vanish on every Sylow subgroup.
    pub fn is_cohomologically_trivial(&self) -> bool {
        let g = self.module.group();
        let n = g.order() as u64;
        self.locals().iter().filter(|l| n % l.ring.p == 0).all(|l| {
            let p_sub = sylow(g, l.ring.p);
            let act = Acting::new(g, g.subgroup_generators(&p_sub));
            l.tate0(&act).is_trivial() && l.h1(&act).0.is_trivial()
        })
    }

    /// Some element of M[chi]^G not killed by x, if there is one.
    pub fn annihilation_witness(&self, x: &CyclotomicElement) -> Result<Option<Vec<i64>>> {
        let x = embed_into(self.conductor(), x)?;
        if !x.is_integral() {
            return Err(Error::Invalid(format!("{x} is not integral")));
        }
        let act = self.whole();
        for l in self.locals() {
            let h0 = l.h0(&act);
            let xm = element_matrix(&l.ring, &x, &l.zeta);
            for v in h0.top.generators() {
                if !h0.bottom.contains(&papply(&l.ring, &xm, &v)) {
                    return Ok(Some(l.lift(&v, self.module.rank())));
                }
            }
        }
        Ok(None)
    }

    /// Integer matrix of Norm_G = sum_g g.
    pub fn norm_matrix(&self) -> IMat {
        let k = self.module.rank();
        let mut acc = vec![vec![0i64; k]; k];
        for g in 0..self.module.group().order() {
            for (r, row) in self.module.action(g).iter().enumerate() {
                for (c, v) in row.iter().enumerate() {
                    acc[r][c] = (acc[r][c] + v) % self.module.invariants()[r] as i64;
                }
            }
        }
        acc
    }

    /// 1 (x) f : M[chi] -> M'[chi] for a G-homomorphism f : M -> M'.
    pub fn twist_map(&self, target: &TwistedModule, f: &IMat) -> Result<IMat> {
        if self.rep != target.rep {
            return Err(Error::Invalid("twists use different realizations".into()));
        }
        if !self.base.is_hom(&target.base, f) {
            return Err(Error::Invalid("not a G-homomorphism".into()));
        }
        let (r, r2) = (self.base.rank(), target.base.rank());
        let blocks = self.rep.dim * self.degree;
        let mut out = vec![vec![0i64; blocks * r]; blocks * r2];
        for b in 0..blocks {
            for u in 0..r2 {
                for s in 0..r {
                    out[b * r2 + u][b * r + s] = f[u][s];
                }
            }
        }
        Ok(out)
    }
}

/// prod_{i=0..2} Fit(H^i(G, mu[chi]))^{(-1)^i}, with the orders of the H^i.
#[derive(Clone, Debug)]
pub struct EulerCharacteristic {
    pub ideal: CycloIdeal,
    pub conductor: u64,
    pub orders: [u128; 3],
    pub cohomologically_trivial: bool,
}

pub fn h_mu_chi(mu: &GModule, chi: &Character, rep: Option<&MatrixRep>) -> Result<EulerCharacteristic> {
    if mu.invariants().iter().filter(|&&d| d > 1).count() > 1 {
        return Err(Error::Invalid("mu must be cyclic".into()));
    }
    let t = build_twist(chi, mu, rep)?;
    let h: Vec<FiniteOModule> = (0..3).map(|i| t.cohomology(i)).collect::<Result<_>>()?;
    let f0 = h[0].fitting_ideal()?;
    let ideal = f0.mul(&h[1].fitting_ideal()?.inverse()?).mul(&h[2].fitting_ideal()?);
    let ct = t.is_cohomologically_trivial();
    if ct && (ideal != f0 || !h[1].is_trivial() || !h[2].is_trivial()) {
        return Err(Error::Inconsistent(
            "cohomologically trivial module with nonvanishing H^1 or H^2".into(),
        ));
    }
    Ok(EulerCharacteristic {
        ideal,
        conductor: t.conductor(),
        orders: [h[0].order(), h[1].order(), h[2].order()],
        cohomologically_trivial: ct,
    })
}

/// Integer matrix of a on O (x) M, O = Z[zeta_m], coordinate (c, s) at c * rank + s.
pub fn scalar_extension_action(a: &GroupRingElement, m: &GModule, conductor: u64) -> Result<IMat> {
    let deg = tables(conductor).degree;
    let r = m.rank();
    let inv = m.invariants();
    let mut acc = vec![vec![0i128; deg * r]; deg * r];
    for (x, c) in a.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mult = multiplication_matrix(conductor, c)?;
        let ax = m.action(x);
        for c1 in 0..deg {
            for c2 in 0..deg {
                let k = mult[c2][c1] as i128;
                if k == 0 {
                    continue;
                }
                for s in 0..r {
                    for u in 0..r {
                        let cell = &mut acc[c2 * r + u][c1 * r + s];
                        *cell = (*cell + k * ax[u][s] as i128).rem_euclid(inv[u] as i128);
                    }
                }
            }
        }
    }
    Ok(acc
        .into_iter()
        .map(|row| row.into_iter().map(|v| v as i64).collect())
        .collect())
}

/// A basis vector of O (x) M not killed by a, if any.
pub fn annihilation_failure(a: &GroupRingElement, m: &GModule, conductor: u64) -> Result<Option<Vec<i64>>> {
    let act = scalar_extension_action(a, m, conductor)?;
    let n = act.len();
    Ok((0..n)
        .find(|&j| act.iter().any(|row| row[j] != 0))
        .map(|j| (0..n).map(|i| i64::from(i == j)).collect()))
}

fn realization(chi: &Character, rep: Option<&MatrixRep>) -> Result<MatrixRep> {
    match rep {
        Some(r) => Ok(r.clone()),
        None => realize(chi),
    }
}

/// x . pr_chi, after checking that x annihilates M[chi]^G; the result is
/// verified to annihilate O (x) M.
pub fn annihilator_transfer(
    x: &CyclotomicElement,
    chi: &Character,
    m: &GModule,
    rep: Option<&MatrixRep>,
) -> Result<GroupRingElement> {
    let rep = realization(chi, rep)?;
    let t = build_twist(chi, m, Some(&rep))?;
    if let Some(w) = t.annihilation_witness(x)? {
        return Err(Error::Precondition(format!(
            "{x} does not annihilate M[chi]^G: witness {w:?}"
        )));
    }
    let out = projector(chi).scale(&embed_into(rep.conductor, x)?);
    if let Some(w) = annihilation_failure(&out, m, rep.conductor)? {
        return Err(Error::Inconsistent(format!("x.pr_chi does not annihilate O (x) M at {w:?}")));
    }
    Ok(out)
}

/// sum over Gal(E/Q) of (y x pr_chi)^omega, E = Q(zeta_m) for the realization
/// conductor m. Requires y in the inverse different and x.pr_chi annihilating
/// O (x) M; the integral result is verified to annihilate M.
pub fn trace_descent(
    x: &CyclotomicElement,
    y: &CyclotomicElement,
    chi: &Character,
    m: &GModule,
    rep: Option<&MatrixRep>,
) -> Result<GroupRingElement> {
    let rep = realization(chi, rep)?;
    let n = rep.conductor;
    let y = embed_into(n, y)?;
    if !inverse_different(n).contains(&y) {
        return Err(Error::Invalid(format!("{y} is not in the inverse different of Q(zeta_{n})")));
    }
    let x = embed_into(n, x)?;
    let pr = projector(chi).scale(&x);
    if let Some(w) = annihilation_failure(&pr, m, n)? {
        return Err(Error::Precondition(format!("x.pr_chi does not annihilate O (x) M: witness {w:?}")));
    }
    let yx = &y * &x;
    let g = chi.group();
    let coeffs: Vec<CyclotomicElement> = (0..g.order())
        .map(|h| {
            let c = (&yx * &embed_into(n, chi.value(g.inv(h)))?).embed(n);
            Ok(CyclotomicElement::from_rational(1, &c.trace()))
        })
        .collect::<Result<_>>()?;
    if let Some(c) = coeffs.iter().find(|c| !c.is_integral()) {
        return Err(Error::Inconsistent(format!("trace {c} is not an integer")));
    }
    let out = GroupRingElement::new(g, coeffs)?;
    if let Some(w) = annihilation_failure(&out, m, 1)? {
        return Err(Error::Inconsistent(format!("descended element does not annihilate M at {w:?}")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
