use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::int::lcm_u64;
use crate::cyclotomic::CyclotomicElement;
use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 512;

/// A finite group given by its multiplication table. Element 0 is the identity.
pub struct FiniteGroup {
    name: String,
    n: usize,
    mul: Vec<u32>,
    inv: Vec<usize>,
    orders: Vec<usize>,
    exponent: u64,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    pub(crate) table: OnceLock<Vec<Vec<CyclotomicElement>>>,
    subgroups: OnceLock<Vec<Vec<usize>>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.name, self.n)
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, o: &Self) -> bool {
        self.mul == o.mul
    }
}

impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Build from a Cayley table, validating the group axioms. The identity is
    /// moved to index 0 if necessary.
    pub fn from_cayley(name: &str, table: &[Vec<usize>]) -> Result<Arc<Self>> {
        let n = table.len();
        if n == 0 {
            return Err(Error::Invalid("empty Cayley table".into()));
        }
        if n > MAX_ORDER {
            return Err(Error::Invalid(format!("order {n} exceeds the cap {MAX_ORDER}")));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Invalid(format!("row {i} has length {}", row.len())));
            }
            let mut seen = vec![false; n];
            for &x in row {
                if x >= n || seen[x] {
                    return Err(Error::Invalid(format!("row {i} is not a permutation")));
                }
                seen[x] = true;
            }
        }
        for j in 0..n {
            let mut seen = vec![false; n];
            for row in table {
                if seen[row[j]] {
                    return Err(Error::Invalid(format!("column {j} is not a permutation")));
                }
                seen[row[j]] = true;
            }
        }
        let e = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::Invalid("no two-sided identity".into()))?;
        // relabel so that the identity is 0
        let relabel = |x: usize| {
            if x == e {
                0
            } else if x == 0 {
                e
            } else {
                x
            }
        };
        let mut mul = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[relabel(a) * n + relabel(b)] = relabel(table[a][b]) as u32;
            }
        }
        let check = |a: usize, b: usize, c: usize| {
            let ab = mul[a * n + b] as usize;
            let bc = mul[b * n + c] as usize;
            mul[ab * n + c] == mul[a * n + bc]
        };
        if n <= 64 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if !check(a, b, c) {
                            return Err(Error::Invalid(format!("not associative at ({a},{b},{c})")));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            for _ in 0..200_000 {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if !check(a, b, c) {
                    return Err(Error::Invalid(format!("not associative at ({a},{b},{c})")));
                }
            }
        }
        Ok(Arc::new(Self::build(name, n, mul)))
    }

    /// Build from permutations of {0, .., m-1}; elements are sorted
    /// lexicographically, so the identity comes first. Products compose
    /// right to left: (g h)(x) = g(h(x)).
    pub fn from_permutations(name: &str, gens: &[Vec<usize>]) -> Result<Arc<Self>> {
        let m = gens.first().map_or(1, |g| g.len());
        for g in gens {
            let mut seen = vec![false; m];
            if g.len() != m || g.iter().any(|&x| x >= m || std::mem::replace(&mut seen[x], true)) {
                return Err(Error::Invalid("generator is not a permutation of a common set".into()));
            }
        }
        let id: Vec<usize> = (0..m).collect();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        seen.insert(id.clone());
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y: Vec<usize> = x.iter().map(|&i| g[i]).collect();
                if seen.insert(y.clone()) {
                    if seen.len() > MAX_ORDER {
                        return Err(Error::Invalid(format!("group exceeds the cap {MAX_ORDER}")));
                    }
                    queue.push_back(y);
                }
            }
        }
        let elems: Vec<Vec<usize>> = seen.into_iter().collect();
        let index: HashMap<&Vec<usize>, usize> =
            elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let n = elems.len();
        let mut mul = vec![0u32; n * n];
        for (a, pa) in elems.iter().enumerate() {
            for (b, pb) in elems.iter().enumerate() {
                let c: Vec<usize> = pb.iter().map(|&i| pa[i]).collect();
                mul[a * n + b] = index[&c] as u32;
            }
        }
        Ok(Arc::new(Self::build(name, n, mul)))
    }

    fn build(name: &str, n: usize, mul: Vec<u32>) -> Self {
        let mut inv = vec![0usize; n];
        for a in 0..n {
            for b in 0..n {
                if mul[a * n + b] == 0 {
                    inv[a] = b;
                    break;
                }
            }
        }
        let mut orders = vec![1usize; n];
        for (a, o) in orders.iter_mut().enumerate() {
            let mut x = a;
            while x != 0 {
                x = mul[x * n + a] as usize;
                *o += 1;
            }
        }
        let exponent = orders.iter().fold(1u64, |acc, &o| lcm_u64(acc, o as u64));
        let mut class_of = vec![usize::MAX; n];
        let mut raw: Vec<Vec<usize>> = Vec::new();
        for a in 0..n {
            if class_of[a] != usize::MAX {
                continue;
            }
            let mut cl: Vec<usize> = (0..n)
                .map(|g| mul[mul[g * n + a] as usize * n + inv[g]] as usize)
                .collect();
            cl.sort_unstable();
            cl.dedup();
            for &x in &cl {
                class_of[x] = raw.len();
            }
            raw.push(cl);
        }
        raw.sort_by_key(|c| (orders[c[0]], c[0]));
        for (i, c) in raw.iter().enumerate() {
            for &x in c {
                class_of[x] = i;
            }
        }
        FiniteGroup {
            name: name.to_string(),
            n,
            mul,
            inv,
            orders,
            exponent,
            classes: raw,
            class_of,
            table: OnceLock::new(),
            subgroups: OnceLock::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let o = self.orders[a] as i64;
        let k = k.rem_euclid(o);
        let mut x = 0;
        for _ in 0..k {
            x = self.mul(x, a);
        }
        x
    }

    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn elem_order(&self, a: usize) -> usize {
        self.orders[a]
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, a: usize) -> usize {
        self.class_of[a]
    }

    pub fn class_rep(&self, c: usize) -> usize {
        self.classes[c][0]
    }

    pub fn class_size(&self, c: usize) -> usize {
        self.classes[c].len()
    }

    pub fn cayley(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|a| (0..self.n).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    pub fn is_abelian(&self) -> bool {
        self.classes.len() == self.n
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.n).filter(|&z| self.classes[self.class_of[z]].len() == 1).collect()
    }

    pub fn central_involutions(&self) -> Vec<usize> {
        self.center().into_iter().filter(|&z| self.orders[z] == 2).collect()
    }

    pub fn commutes(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    /// Subgroup generated by `gens`, as a sorted element list.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut out = vec![0];
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    pub fn is_subgroup(&self, elems: &[usize]) -> bool {
        if elems.is_empty() || !elems.contains(&0) {
            return false;
        }
        let set: HashSet<usize> = elems.iter().copied().collect();
        elems
            .iter()
            .all(|&a| elems.iter().all(|&b| set.contains(&self.mul(a, self.inv(b)))))
    }

    pub fn is_normal(&self, elems: &[usize]) -> bool {
        let set: HashSet<usize> = elems.iter().copied().collect();
        (0..self.n).all(|g| elems.iter().all(|&h| set.contains(&self.conj(g, h))))
    }

    /// A generating set chosen greedily in index order.
    pub fn generators(&self) -> Vec<usize> {
        self.subgroup_generators(&(0..self.n).collect::<Vec<_>>())
    }

    /// Greedy generating set of a subgroup, preferring elements of large order.
    pub fn subgroup_generators(&self, elems: &[usize]) -> Vec<usize> {
        let mut sorted: Vec<usize> = elems.to_vec();
        sorted.sort_by_key(|&x| (std::cmp::Reverse(self.orders[x]), x));
        let mut gens = Vec::new();
        let mut span = vec![0usize];
        for x in sorted {
            if span.binary_search(&x).is_err() {
                gens.push(x);
                span = self.closure(&gens);
                if span.len() == elems.len() {
                    break;
                }
            }
        }
        gens
    }

    /// All subgroups, sorted by (order, elements).
    pub fn subgroups(&self) -> &[Vec<usize>] {
        self.subgroups.get_or_init(|| {
            let mut cyclic: Vec<Vec<usize>> = (0..self.n).map(|g| self.closure(&[g])).collect();
            cyclic.sort();
            cyclic.dedup();
            let mut all: HashSet<Vec<usize>> = cyclic.iter().cloned().collect();
            let mut queue: VecDeque<Vec<usize>> = cyclic.iter().cloned().collect();
            let cyc_gens: Vec<usize> = cyclic
                .iter()
                .map(|c| *c.iter().find(|&&x| self.closure(&[x]) == *c).unwrap())
                .collect();
            while let Some(h) = queue.pop_front() {
                let hg = self.subgroup_generators(&h);
                for &g in &cyc_gens {
                    if h.binary_search(&g).is_ok() {
                        continue;
                    }
                    let mut gens = hg.clone();
                    gens.push(g);
                    let k = self.closure(&gens);
                    if all.insert(k.clone()) {
                        queue.push_back(k);
                    }
                }
            }
            let mut v: Vec<Vec<usize>> = all.into_iter().collect();
            v.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
            v
        })
    }

    /// The subgroup on `elems` as a group in its own right, with the
    /// embedding (new index -> old index). Elements keep their relative order.
    pub fn subgroup(self: &Arc<Self>, elems: &[usize]) -> Result<Subgroup> {
        let mut elems = elems.to_vec();
        elems.sort_unstable();
        elems.dedup();
        if !self.is_subgroup(&elems) {
            return Err(Error::Invalid("elements do not form a subgroup".into()));
        }
        let pos: HashMap<usize, usize> = elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let table: Vec<Vec<usize>> = elems
            .iter()
            .map(|&a| elems.iter().map(|&b| pos[&self.mul(a, b)]).collect())
            .collect();
        let name = format!("{}<{}>", self.name, elems.len());
        let group = Self::from_cayley(&name, &table)?;
        Ok(Subgroup {
            parent: self.clone(),
            group,
            elements: elems,
        })
    }

    /// Quotient by a normal subgroup. Cosets are numbered by their least
    /// element, so the identity coset is 0.
    pub fn quotient(self: &Arc<Self>, normal: &[usize]) -> Result<Quotient> {
        if !self.is_subgroup(normal) || !self.is_normal(normal) {
            return Err(Error::Invalid("not a normal subgroup".into()));
        }
        let mut proj = vec![usize::MAX; self.n];
        let mut reps = Vec::new();
        for g in 0..self.n {
            if proj[g] != usize::MAX {
                continue;
            }
            for &h in normal {
                proj[self.mul(g, h)] = reps.len();
            }
            reps.push(g);
        }
        let table: Vec<Vec<usize>> = reps
            .iter()
            .map(|&a| reps.iter().map(|&b| proj[self.mul(a, b)]).collect())
            .collect();
        let group = Self::from_cayley(&format!("{}/{}", self.name, normal.len()), &table)?;
        let mut kernel = normal.to_vec();
        kernel.sort_unstable();
        Ok(Quotient {
            parent: self.clone(),
            group,
            proj,
            reps,
            kernel,
        })
    }

    /// Left coset representatives of a subgroup (least element of each coset).
    pub fn coset_reps(&self, sub: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        let mut reps = Vec::new();
        for g in 0..self.n {
            if seen[g] {
                continue;
            }
            reps.push(g);
            for &h in sub {
                seen[self.mul(g, h)] = true;
            }
        }
        reps
    }

    /// Breadth-first spanning tree of the Cayley graph for `gens`: entry g is
    /// Some((i, h)) with g = gens[i] * h and h discovered earlier; None for
    /// the identity.
    pub fn word_tree(&self, gens: &[usize]) -> Result<Vec<Option<(usize, usize)>>> {
        let mut tree = vec![None; self.n];
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(h) = queue.pop_front() {
            for (i, &s) in gens.iter().enumerate() {
                let g = self.mul(s, h);
                if !seen[g] {
                    seen[g] = true;
                    tree[g] = Some((i, h));
                    queue.push_back(g);
                }
            }
        }
        if seen.iter().any(|&b| !b) {
            return Err(Error::Invalid("elements do not generate the group".into()));
        }
        Ok(tree)
    }

    /// Elements in the order they were discovered by `word_tree`.
    pub fn tree_order(tree: &[Option<(usize, usize)>]) -> Vec<usize> {
        let mut depth = vec![usize::MAX; tree.len()];
        fn d(g: usize, tree: &[Option<(usize, usize)>], depth: &mut [usize]) -> usize {
            if depth[g] != usize::MAX {
                return depth[g];
            }
            let v = match tree[g] {
                None => 0,
                Some((_, h)) => d(h, tree, depth) + 1,
            };
            depth[g] = v;
            v
        }
        let mut order: Vec<usize> = (0..tree.len()).collect();
        order.sort_by_key(|&g| (d(g, tree, &mut depth), g));
        order
    }

    /// Class of g^k.
    pub fn power_class(&self, c: usize, k: i64) -> usize {
        self.class_of(self.pow(self.class_rep(c), k))
    }

    /// Class of the inverses of class c.
    pub fn inverse_class(&self, c: usize) -> usize {
        self.class_of(self.inv(self.class_rep(c)))
    }

    /// Direct product, with elements ordered as (a, b) -> a * |B| + b.
    pub fn direct_product(a: &Arc<Self>, b: &Arc<Self>) -> Result<Arc<Self>> {
        let (na, nb) = (a.n, b.n);
        let table: Vec<Vec<usize>> = (0..na * nb)
            .map(|x| {
                (0..na * nb)
                    .map(|y| a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb))
                    .collect()
            })
            .collect();
        Self::from_cayley(&format!("{}x{}", a.name, b.name), &table)
    }

    pub fn cyclic(n: usize) -> Arc<Self> {
        let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_cayley(&format!("C{n}"), &table).expect("cyclic group")
    }
}

#[derive(Clone, Debug)]
pub struct Subgroup {
    pub parent: Arc<FiniteGroup>,
    pub group: Arc<FiniteGroup>,
    /// Sorted parent indices; element i of `group` is `elements[i]`.
    pub elements: Vec<usize>,
}

impl Subgroup {
    pub fn index(&self) -> usize {
        self.parent.order() / self.elements.len()
    }

    pub fn local_index(&self, g: usize) -> Option<usize> {
        self.elements.binary_search(&g).ok()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.local_index(g).is_some()
    }

    pub fn is_normal(&self) -> bool {
        self.parent.is_normal(&self.elements)
    }
}

#[derive(Clone, Debug)]
pub struct Quotient {
    pub parent: Arc<FiniteGroup>,
    pub group: Arc<FiniteGroup>,
    pub proj: Vec<usize>,
    pub reps: Vec<usize>,
    pub kernel: Vec<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> Arc<FiniteGroup> {
        FiniteGroup::from_permutations("S3", &[vec![1, 0, 2], vec![1, 2, 0]]).unwrap()
    }

    #[test]
    fn s3_structure() {
        let g = s3();
        assert_eq!(g.order(), 6);
        assert_eq!(g.num_classes(), 3);
        let sizes: Vec<usize> = (0..3).map(|c| g.class_size(c)).collect();
        assert_eq!(sizes, vec![1, 3, 2]);
        assert_eq!(g.exponent(), 6);
        assert_eq!(g.subgroups().len(), 6);
        let a3 = g.closure(&[g.class_rep(2)]);
        let q = g.quotient(&a3).unwrap();
        assert_eq!(q.group.order(), 2);
        assert!(g.center() == vec![0]);
    }

    #[test]
    fn cayley_validation() {
        assert!(FiniteGroup::from_cayley("bad", &[vec![0, 1], vec![1, 1]]).is_err());
        // identity not at 0 gets relabelled
        let g = FiniteGroup::from_cayley("C2", &[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(g.mul(0, 1), 1);
        // non-associative loop of order 5
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(FiniteGroup::from_cayley("loop", &t).is_err());
    }

    #[test]
    fn products_and_subgroups() {
        let c2 = FiniteGroup::cyclic(2);
        let c4 = FiniteGroup::cyclic(4);
        let g = FiniteGroup::direct_product(&c2, &c4).unwrap();
        assert!(g.is_abelian());
        assert_eq!(g.exponent(), 4);
        // C2 x C4 has 8 subgroups
        assert_eq!(g.subgroups().len(), 8);
        let h = g.subgroup(&g.closure(&[1])).unwrap();
        assert_eq!(h.group.order(), 4);
    }
}
