//! Finite permutation groups, fully enumerated.
//!
//! A [`FiniteGroup`] stores every element together with its multiplication
//! table. Element order is fixed by breadth-first closure over generator
//! words, and every "pick a representative" rule below takes the least
//! element index, so all derived data is reproducible.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub const DEFAULT_SIZE_CAP: usize = 2000;

/// A bijection of `0..n`, stored as the image of each point.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.images)
    }
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::NonPermutation { degree: n, images });
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// Builds a permutation of degree `n` from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        for c in cycles {
            for (k, &a) in c.iter().enumerate() {
                let b = c[(k + 1) % c.len()];
                if a >= n || b >= n {
                    return Err(Error::BadParameters(format!(
                        "cycle point out of range 0..{n}"
                    )));
                }
                images[a] = b;
            }
        }
        Permutation::new(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }
}

/// A finite group of permutations with its full multiplication table.
///
/// Element 0 is the identity. The product `a * b` is the composition
/// `a ∘ b` (apply `b` first).
#[derive(Clone)]
pub struct FiniteGroup {
    name: String,
    degree: usize,
    elements: Vec<Permutation>,
    mul: Vec<u32>,
    inv: Vec<usize>,
    generators: Vec<usize>,
    index: HashMap<Permutation, usize>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.name, self.order())
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements && self.generators == other.generators
    }
}
impl Eq for FiniteGroup {}

pub fn generate_group(
    degree: usize,
    generators: &[Permutation],
    name: &str,
) -> Result<FiniteGroup> {
    generate_group_with_cap(degree, generators, name, DEFAULT_SIZE_CAP)
}

pub fn generate_group_with_cap(
    degree: usize,
    generators: &[Permutation],
    name: &str,
    cap: usize,
) -> Result<FiniteGroup> {
    for g in generators {
        if g.degree() != degree {
            return Err(Error::NonPermutation {
                degree,
                images: g.images.clone(),
            });
        }
    }
    let id = Permutation::identity(degree);
    let mut elements = vec![id.clone()];
    let mut index = HashMap::from([(id, 0usize)]);
    let mut next = 0;
    while next < elements.len() {
        let x = elements[next].clone();
        for s in generators {
            let y = x.compose(s);
            if !index.contains_key(&y) {
                if elements.len() == cap {
                    return Err(Error::GroupTooLarge { cap });
                }
                index.insert(y.clone(), elements.len());
                elements.push(y);
            }
        }
        next += 1;
    }
    let gen_idx: Vec<usize> = generators.iter().map(|g| index[g]).collect();
    Ok(FiniteGroup::from_parts(
        name, degree, elements, index, gen_idx,
    ))
}

impl FiniteGroup {
    fn from_parts(
        name: &str,
        degree: usize,
        elements: Vec<Permutation>,
        index: HashMap<Permutation, usize>,
        generators: Vec<usize>,
    ) -> FiniteGroup {
        let n = elements.len();
        let mut mul = vec![0u32; n * n];
        for (a, pa) in elements.iter().enumerate() {
            for (b, pb) in elements.iter().enumerate() {
                mul[a * n + b] = index[&pa.compose(pb)] as u32;
            }
        }
        let inv = (0..n)
            .map(|a| {
                (0..n)
                    .find(|&b| mul[a * n + b] == 0)
                    .expect("group has inverses")
            })
            .collect();
        FiniteGroup {
            name: name.to_string(),
            degree,
            elements,
            mul,
            inv,
            generators,
            index,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn order(&self) -> usize {
        self.elements.len()
    }
    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }
    pub fn element(&self, i: usize) -> &Permutation {
        &self.elements[i]
    }
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }
    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order() + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// `g h g^{-1}`.
    pub fn conj(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inv(g))
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn pow(&self, a: usize, mut e: usize) -> usize {
        let (mut acc, mut base) = (0, a);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (a + 1..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_p_group(&self, p: u32) -> bool {
        p_part(self.order(), p) == self.order()
    }

    /// Renames the group; contents are unchanged.
    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    /// Checks associativity, identity, inverses and closure of the table.
    pub fn verify_table(&self) -> bool {
        let n = self.order();
        let ident = (0..n).all(|a| self.mul(0, a) == a && self.mul(a, 0) == a);
        let assoc = (0..n).all(|a| {
            (0..n).all(|b| {
                let ab = self.mul(a, b);
                (0..n).all(|c| self.mul(ab, c) == self.mul(a, self.mul(b, c)))
            })
        });
        let inv = (0..n).all(|a| self.mul(a, self.inv(a)) == 0);
        ident && assoc && inv
    }
}

/// Largest power of `p` dividing `n`.
pub fn p_part(mut n: usize, p: u32) -> usize {
    let p = p as usize;
    let mut out = 1;
    while n > 0 && n % p == 0 {
        n /= p;
        out *= p;
    }
    out
}

/// Distinct prime divisors of `n`, ascending.
pub fn prime_divisors(mut n: usize) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d as u32);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n as u32);
    }
    out
}

/// A subgroup of a parent group, held as a sorted set of element indices.
#[derive(Clone)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    members: Vec<usize>,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subgroup(order {} of {}: {:?})",
            self.order(),
            self.parent.name(),
            self.members
        )
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}
impl Eq for Subgroup {}

impl Subgroup {
    /// Wraps a member set that is already known to be a subgroup.
    pub fn from_members(parent: &Arc<FiniteGroup>, mut members: Vec<usize>) -> Subgroup {
        members.sort_unstable();
        members.dedup();
        Subgroup {
            parent: Arc::clone(parent),
            members,
        }
    }

    pub fn whole(parent: &Arc<FiniteGroup>) -> Subgroup {
        Subgroup {
            parent: Arc::clone(parent),
            members: (0..parent.order()).collect(),
        }
    }

    pub fn trivial(parent: &Arc<FiniteGroup>) -> Subgroup {
        Subgroup {
            parent: Arc::clone(parent),
            members: vec![0],
        }
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }
    pub fn members(&self) -> &[usize] {
        &self.members
    }
    pub fn order(&self) -> usize {
        self.members.len()
    }
    pub fn index(&self) -> usize {
        self.parent.order() / self.order()
    }
    pub fn contains(&self, g: usize) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    /// Position of a parent element inside `members`.
    pub fn local_index(&self, g: usize) -> Option<usize> {
        self.members.binary_search(&g).ok()
    }

    pub fn is_closed(&self) -> bool {
        let g = &self.parent;
        self.contains(0)
            && self.members.iter().all(|&a| self.contains(g.inv(a)))
            && self
                .members
                .iter()
                .all(|&a| self.members.iter().all(|&b| self.contains(g.mul(a, b))))
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.parent;
        self.members
            .iter()
            .all(|&a| self.members.iter().all(|&b| g.mul(a, b) == g.mul(b, a)))
    }

    pub fn is_cyclic(&self) -> bool {
        let n = self.order();
        self.members
            .iter()
            .any(|&a| self.parent.element_order(a) == n)
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&a| other.contains(a))
    }

    /// The subgroup as a group in its own right; element `k` of the result
    /// is `members()[k]`.
    pub fn as_group(&self) -> Arc<FiniteGroup> {
        let g = &self.parent;
        let elements: Vec<Permutation> =
            self.members.iter().map(|&m| g.element(m).clone()).collect();
        let index: HashMap<Permutation, usize> = elements
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        // greedy generating set in member order
        let mut gens = Vec::new();
        let mut span = vec![0usize];
        let mut in_span = vec![false; g.order()];
        in_span[0] = true;
        for (k, &m) in self.members.iter().enumerate() {
            if in_span[m] {
                continue;
            }
            gens.push(k);
            let seeds: Vec<usize> = gens.iter().map(|&i| self.members[i]).collect();
            span = closure(g, &seeds);
            in_span.iter_mut().for_each(|x| *x = false);
            for &s in &span {
                in_span[s] = true;
            }
        }
        debug_assert_eq!(span.len(), self.order());
        let name = format!("{}<{}>", g.name(), self.order());
        Arc::new(FiniteGroup::from_parts(
            &name,
            g.degree(),
            elements,
            index,
            gens,
        ))
    }
}

fn closure(g: &FiniteGroup, seeds: &[usize]) -> Vec<usize> {
    let mut inside = vec![false; g.order()];
    inside[0] = true;
    let mut members = vec![0usize];
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for &s in seeds {
            let y = g.mul(x, s);
            if !inside[y] {
                inside[y] = true;
                members.push(y);
                queue.push_back(y);
            }
        }
    }
    members.sort_unstable();
    members
}

pub fn subgroup_closure(g: &Arc<FiniteGroup>, seeds: &[usize]) -> Subgroup {
    Subgroup {
        parent: Arc::clone(g),
        members: closure(g, seeds),
    }
}

pub fn center(g: &Arc<FiniteGroup>) -> Subgroup {
    let n = g.order();
    let members = (0..n)
        .filter(|&a| (0..n).all(|b| g.mul(a, b) == g.mul(b, a)))
        .collect();
    Subgroup {
        parent: Arc::clone(g),
        members,
    }
}

pub fn centralizer(g: &Arc<FiniteGroup>, h: &Subgroup) -> Subgroup {
    let members = (0..g.order())
        .filter(|&a| h.members().iter().all(|&b| g.mul(a, b) == g.mul(b, a)))
        .collect();
    Subgroup {
        parent: Arc::clone(g),
        members,
    }
}

pub fn normalizer(g: &Arc<FiniteGroup>, h: &Subgroup) -> Subgroup {
    let members = (0..g.order())
        .filter(|&a| h.members().iter().all(|&x| h.contains(g.conj(a, x))))
        .collect();
    Subgroup {
        parent: Arc::clone(g),
        members,
    }
}

pub fn is_normal(g: &Arc<FiniteGroup>, h: &Subgroup) -> bool {
    normalizer(g, h).order() == g.order()
}

/// `g H g^{-1}`.
pub fn conjugate_subgroup(h: &Subgroup, g: usize) -> Subgroup {
    let parent = h.parent();
    let members = h.members().iter().map(|&x| parent.conj(g, x)).collect();
    Subgroup::from_members(parent, members)
}

pub fn intersection(a: &Subgroup, b: &Subgroup) -> Subgroup {
    let members = a
        .members()
        .iter()
        .copied()
        .filter(|&x| b.contains(x))
        .collect();
    Subgroup {
        parent: Arc::clone(a.parent()),
        members,
    }
}

/// A Sylow `p`-subgroup, grown from the least-index element of order `p`
/// by repeatedly adjoining the least-index element of the normalizer
/// whose `p`-th power falls back into the current subgroup.
pub fn sylow(g: &Arc<FiniteGroup>, p: u32) -> Subgroup {
    let target = p_part(g.order(), p);
    let mut cur = Subgroup::trivial(g);
    while cur.order() < target {
        let n = normalizer(g, &cur);
        let x = n
            .members()
            .iter()
            .copied()
            .find(|&x| !cur.contains(x) && cur.contains(g.pow(x, p as usize)))
            .expect("a p-subgroup below Sylow order has a p-element in its normalizer quotient");
        let mut seeds = cur.members().to_vec();
        seeds.push(x);
        cur = subgroup_closure(g, &seeds);
    }
    cur
}

/// All elementary abelian `p`-subgroups of rank at least one, sorted by
/// order and then by member set.
pub fn elementary_abelian_subgroups(g: &Arc<FiniteGroup>, p: u32) -> Vec<Subgroup> {
    let p_elems: Vec<usize> = (1..g.order())
        .filter(|&a| g.element_order(a) == p as usize)
        .collect();
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut frontier: Vec<Vec<usize>> = Vec::new();
    for &a in &p_elems {
        let s = closure(g, &[a]);
        if found.insert(s.clone()) {
            frontier.push(s);
        }
    }
    while let Some(e) = frontier.pop() {
        for &x in &p_elems {
            if e.binary_search(&x).is_ok() || e.iter().any(|&y| g.mul(x, y) != g.mul(y, x)) {
                continue;
            }
            let mut seeds = e.clone();
            seeds.push(x);
            let s = closure(g, &seeds);
            if found.insert(s.clone()) {
                frontier.push(s);
            }
        }
    }
    let mut out: Vec<Vec<usize>> = found.into_iter().collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out.into_iter()
        .map(|m| Subgroup {
            parent: Arc::clone(g),
            members: m,
        })
        .collect()
}

pub fn p_rank(g: &Arc<FiniteGroup>, p: u32) -> usize {
    elementary_abelian_subgroups(g, p)
        .iter()
        .map(|e| log_base(e.order(), p))
        .max()
        .unwrap_or(0)
}

pub(crate) fn log_base(mut n: usize, p: u32) -> usize {
    let mut k = 0;
    while n > 1 {
        n /= p as usize;
        k += 1;
    }
    k
}

/// One representative per left coset `gH`, each the least index in its
/// coset, listed in increasing order.
pub fn coset_representatives(g: &Arc<FiniteGroup>, h: &Subgroup) -> Vec<usize> {
    let mut seen = vec![false; g.order()];
    let mut reps = Vec::new();
    for x in 0..g.order() {
        if seen[x] {
            continue;
        }
        reps.push(x);
        for &m in h.members() {
            seen[g.mul(x, m)] = true;
        }
    }
    reps
}

/// One representative per right coset `Hg`, least index first.
pub fn right_coset_representatives(g: &Arc<FiniteGroup>, h: &Subgroup) -> Vec<usize> {
    let mut seen = vec![false; g.order()];
    let mut reps = Vec::new();
    for x in 0..g.order() {
        if seen[x] {
            continue;
        }
        reps.push(x);
        for &m in h.members() {
            seen[g.mul(m, x)] = true;
        }
    }
    reps
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleCosetDecomposition {
    pub reps: Vec<usize>,
    pub blocks: Vec<Vec<usize>>,
}

/// Partition of `G` into double cosets `H g K` with least-index representatives.
pub fn double_cosets(g: &Arc<FiniteGroup>, h: &Subgroup, k: &Subgroup) -> DoubleCosetDecomposition {
    let mut seen = vec![false; g.order()];
    let mut reps = Vec::new();
    let mut blocks = Vec::new();
    for x in 0..g.order() {
        if seen[x] {
            continue;
        }
        let mut block = BTreeSet::new();
        for &a in h.members() {
            let ax = g.mul(a, x);
            for &b in k.members() {
                block.insert(g.mul(ax, b));
            }
        }
        for &y in &block {
            seen[y] = true;
        }
        reps.push(x);
        blocks.push(block.into_iter().collect());
    }
    DoubleCosetDecomposition { reps, blocks }
}

/// Every subgroup of `G`, sorted by order and then member set.
///
/// Built as iterated joins of cyclic subgroups; meant for groups of a few
/// hundred elements at most.
pub fn all_subgroups(g: &Arc<FiniteGroup>) -> Vec<Subgroup> {
    let mut cyclic: BTreeSet<Vec<usize>> = BTreeSet::new();
    for a in 0..g.order() {
        cyclic.insert(closure(g, &[a]));
    }
    let cyclic: Vec<Vec<usize>> = cyclic.into_iter().collect();
    let cyclic_gens: Vec<usize> = cyclic
        .iter()
        .map(|c| {
            *c.iter()
                .find(|&&a| g.element_order(a) == c.len())
                .expect("cyclic")
        })
        .collect();
    let mut found: BTreeSet<Vec<usize>> = cyclic.iter().cloned().collect();
    let mut frontier: Vec<Vec<usize>> = cyclic.clone();
    while let Some(s) = frontier.pop() {
        let mut inside = vec![false; g.order()];
        for &x in &s {
            inside[x] = true;
        }
        for &c in &cyclic_gens {
            if inside[c] {
                continue;
            }
            let mut seeds = s.clone();
            seeds.push(c);
            let j = closure(g, &seeds);
            if found.insert(j.clone()) {
                frontier.push(j);
            }
        }
    }
    let mut out: Vec<Vec<usize>> = found.into_iter().collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out.into_iter()
        .map(|m| Subgroup {
            parent: Arc::clone(g),
            members: m,
        })
        .collect()
}

/// Index-`p` subgroups of a `p`-group (its maximal subgroups).
pub fn maximal_subgroups(g: &Arc<FiniteGroup>, p: u32) -> Vec<Subgroup> {
    let target = g.order() / p as usize;
    all_subgroups(g)
        .into_iter()
        .filter(|s| s.order() == target)
        .collect()
}

pub fn is_elementary_abelian(g: &FiniteGroup, p: u32) -> bool {
    g.is_abelian() && (1..g.order()).all(|a| g.element_order(a) == p as usize)
}

/// Brute-force isomorphism search: images of the generators of `a`
/// inside `b`, or `None`. Returns the full element map on success.
pub fn find_isomorphism(a: &FiniteGroup, b: &FiniteGroup) -> Option<Vec<usize>> {
    if a.order() != b.order() {
        return None;
    }
    let gens = a.generators();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&x| {
            let o = a.element_order(x);
            (0..b.order())
                .filter(|&y| b.element_order(y) == o)
                .collect()
        })
        .collect();
    let mut choice = vec![0usize; gens.len()];
    loop {
        let imgs: Vec<usize> = choice
            .iter()
            .zip(&candidates)
            .map(|(&c, cs)| cs[c])
            .collect();
        if let Some(map) = extend_hom(a, b, &imgs) {
            return Some(map);
        }
        // odometer
        let mut k = 0;
        loop {
            if k == choice.len() {
                return None;
            }
            choice[k] += 1;
            if choice[k] < candidates[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

fn extend_hom(a: &FiniteGroup, b: &FiniteGroup, imgs: &[usize]) -> Option<Vec<usize>> {
    let n = a.order();
    let mut map = vec![usize::MAX; n];
    map[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for (&s, &t) in a.generators().iter().zip(imgs) {
            let y = a.mul(x, s);
            let fy = b.mul(map[x], t);
            if map[y] == usize::MAX {
                map[y] = fy;
                queue.push_back(y);
            } else if map[y] != fy {
                return None;
            }
        }
    }
    let mut hit = vec![false; n];
    for &m in &map {
        if m == usize::MAX || hit[m] {
            return None;
        }
        hit[m] = true;
    }
    let hom = (0..n).all(|x| (0..n).all(|y| map[a.mul(x, y)] == b.mul(map[x], map[y])));
    hom.then_some(map)
}
