//! Subset calculus: sumsets, t-fold sumsets, sum-free and (k,l)-free
//! predicates, stabilizers, the Kneser identity, and subgroup enumeration.

use crate::bits::BitVec;
use crate::group::{Automorphism, Group, Hom, DEFAULT_ENUMERATION_BOUND};
use crate::{Error, Result};
use std::collections::HashSet;
use std::sync::Arc;

/// A set of group elements as a fixed-width bit vector over the element index.
#[derive(Clone, PartialEq, Eq)]
pub struct Subset {
    group: Arc<Group>,
    bits: BitVec,
}

impl std::fmt::Debug for Subset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subset({}; {})", self.group.spec_string(), self.format())
    }
}

impl Subset {
    pub fn empty(group: &Arc<Group>) -> Subset {
        Subset {
            bits: BitVec::zeros(group.order() as usize),
            group: group.clone(),
        }
    }

    pub fn full(group: &Arc<Group>) -> Subset {
        Subset {
            bits: BitVec::ones(group.order() as usize),
            group: group.clone(),
        }
    }

    pub fn from_indices(group: &Arc<Group>, indices: &[usize]) -> Result<Subset> {
        let mut s = Subset::empty(group);
        for &i in indices {
            if i >= group.order() as usize {
                return Err(Error::InvalidElement(format!(
                    "index {i} out of range for group of order {}",
                    group.order()
                )));
            }
            s.bits.set(i);
        }
        Ok(s)
    }

    pub fn from_bits(group: &Arc<Group>, bits: BitVec) -> Subset {
        assert_eq!(bits.len(), group.order() as usize);
        Subset {
            group: group.clone(),
            bits,
        }
    }

    /// Parse a subset literal: comma-separated element tuples such as
    /// `"(0,2),(1,2)"`, or bare residues `"3,4"` for cyclic groups. The empty
    /// string denotes the empty set.
    pub fn parse(group: &Arc<Group>, s: &str) -> Result<Subset> {
        let mut out = Subset::empty(group);
        let s = s.trim();
        if s.is_empty() {
            return Ok(out);
        }
        let mut depth = 0usize;
        let mut token = String::new();
        let mut tokens = Vec::new();
        for ch in s.chars() {
            match ch {
                '(' => {
                    depth += 1;
                    token.push(ch);
                }
                ')' => {
                    depth = depth.checked_sub(1).ok_or_else(|| {
                        Error::InvalidArgument(format!("unbalanced parentheses in {s:?}"))
                    })?;
                    token.push(ch);
                }
                ',' if depth == 0 => {
                    tokens.push(std::mem::take(&mut token));
                }
                _ => token.push(ch),
            }
        }
        if depth != 0 {
            return Err(Error::InvalidArgument(format!(
                "unbalanced parentheses in {s:?}"
            )));
        }
        tokens.push(token);
        for tok in tokens {
            let tok = tok.trim();
            if tok.is_empty() {
                return Err(Error::InvalidArgument(format!("empty element in {s:?}")));
            }
            let coords: Vec<u64> = if let Some(inner) =
                tok.strip_prefix('(').and_then(|t| t.strip_suffix(')'))
            {
                let inner = inner.trim();
                if inner.is_empty() {
                    vec![]
                } else {
                    inner
                        .split(',')
                        .map(|p| {
                            p.trim().parse().map_err(|_| {
                                Error::InvalidArgument(format!("bad coordinate {p:?} in {tok:?}"))
                            })
                        })
                        .collect::<Result<_>>()?
                }
            } else {
                if group.rank() != 1 {
                    return Err(Error::InvalidArgument(format!(
                        "bare residue {tok:?} only allowed for cyclic groups"
                    )));
                }
                vec![tok
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("bad residue {tok:?}")))?]
            };
            out.bits.set(group.index_of(&coords)?);
        }
        Ok(out)
    }

    /// Literal form accepted back by [`Subset::parse`].
    pub fn format(&self) -> String {
        let parts: Vec<String> = self
            .indices()
            .into_iter()
            .map(|i| {
                let coords = self.group.coords_of(i);
                if self.group.rank() == 1 {
                    coords[0].to_string()
                } else {
                    format!(
                        "({})",
                        coords
                            .iter()
                            .map(|c| c.to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    )
                }
            })
            .collect();
        parts.join(",")
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn bits(&self) -> &BitVec {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.count()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn contains(&self, idx: usize) -> bool {
        self.bits.get(idx)
    }

    pub fn insert(&mut self, idx: usize) {
        self.bits.set(idx);
    }

    pub fn remove(&mut self, idx: usize) {
        self.bits.clear(idx);
    }

    pub fn indices(&self) -> Vec<usize> {
        self.bits.iter_ones().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter_ones()
    }

    fn check_same_group(&self, other: &Subset) -> Result<()> {
        if self.group == other.group {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    pub fn union(&self, other: &Subset) -> Result<Subset> {
        self.check_same_group(other)?;
        let mut out = self.clone();
        out.bits.union_with(&other.bits);
        Ok(out)
    }

    pub fn intersect(&self, other: &Subset) -> Result<Subset> {
        self.check_same_group(other)?;
        let mut out = self.clone();
        out.bits.intersect_with(&other.bits);
        Ok(out)
    }

    pub fn minus(&self, other: &Subset) -> Result<Subset> {
        self.check_same_group(other)?;
        let mut out = self.clone();
        out.bits.subtract(&other.bits);
        Ok(out)
    }

    pub fn complement(&self) -> Subset {
        let mut out = self.clone();
        out.bits.invert();
        out
    }

    pub fn is_subset_of(&self, other: &Subset) -> Result<bool> {
        self.check_same_group(other)?;
        Ok(self.bits.is_subset_of(&other.bits))
    }

    pub fn is_disjoint(&self, other: &Subset) -> Result<bool> {
        self.check_same_group(other)?;
        Ok(self.bits.is_disjoint(&other.bits))
    }

    /// `a + A` for a single element index.
    pub fn translate(&self, a: usize) -> Subset {
        let g = &self.group;
        let mut out = Subset::empty(g);
        for x in self.iter() {
            out.bits.set(g.add(a, x));
        }
        out
    }

    /// `-A`.
    pub fn negated(&self) -> Subset {
        let g = &self.group;
        let mut out = Subset::empty(g);
        for x in self.iter() {
            out.bits.set(g.neg(x));
        }
        out
    }

    /// `{t*a : a in A}`.
    pub fn scaled(&self, t: u64) -> Subset {
        let g = &self.group;
        let mut out = Subset::empty(g);
        for x in self.iter() {
            out.bits.set(g.scalar_mul(t, x));
        }
        out
    }

    pub fn apply_automorphism(&self, auto: &Automorphism) -> Subset {
        assert_eq!(auto.group(), &self.group);
        let mut out = Subset::empty(&self.group);
        for x in self.iter() {
            out.bits.set(auto.apply(x));
        }
        out
    }

    /// Image `h(A)` as a subset of `Z/dZ`.
    pub fn image_under(&self, h: &Hom) -> Result<Subset> {
        if h.source() != &self.group {
            return Err(Error::GroupMismatch);
        }
        let mut out = Subset::empty(h.target());
        for x in self.iter() {
            out.bits.set(h.apply(x) as usize);
        }
        Ok(out)
    }

    /// Sumset `{a + b : a in A, b in B}`.
    pub fn sumset(&self, other: &Subset) -> Result<Subset> {
        self.check_same_group(other)?;
        let g = &self.group;
        let mut out = Subset::empty(g);
        for a in self.iter() {
            for b in other.iter() {
                out.bits.set(g.add(a, b));
            }
        }
        Ok(out)
    }

    /// `t`-fold iterated sumset, `t >= 1`.
    pub fn t_fold(&self, t: u64) -> Result<Subset> {
        if t == 0 {
            return Err(Error::InvalidArgument(
                "t-fold sumset requires t >= 1".into(),
            ));
        }
        let mut acc = self.clone();
        for _ in 1..t {
            acc = acc.sumset(self)?;
        }
        Ok(acc)
    }

    /// True iff `(A + A)` misses `A` entirely.
    pub fn is_sum_free(&self) -> bool {
        let g = &self.group;
        for a in self.iter() {
            for b in self.iter() {
                if b > a {
                    break;
                }
                if self.contains(g.add(a, b)) {
                    return false;
                }
            }
        }
        true
    }

    /// True iff `kA` and `lA` are disjoint; requires `k > l >= 1`.
    pub fn is_kl_free(&self, k: u64, l: u64) -> Result<bool> {
        if !(k > l && l >= 1) {
            return Err(Error::InvalidArgument(format!(
                "(k,l)-freeness requires k > l >= 1, got ({k},{l})"
            )));
        }
        if self.is_empty() {
            return Ok(true);
        }
        let lf = self.t_fold(l)?;
        let mut kf = lf.clone();
        for _ in l..k {
            kf = kf.sumset(self)?;
        }
        kf.is_disjoint(&lf)
    }

    /// Elements whose insertion would break sum-freeness: `(A+A) ∪ (A−A) ∪
    /// {y : 2y ∈ A} ∪ {0}`. For sum-free `A`, `x ∉ A` extends `A` iff
    /// `x` is outside this set.
    pub fn blocked_extensions(&self) -> Subset {
        let g = &self.group;
        let mut out = Subset::empty(g);
        out.bits.set(0);
        for a in self.iter() {
            for b in self.iter() {
                if b > a {
                    break;
                }
                out.bits.set(g.add(a, b));
            }
            for b in self.iter() {
                out.bits.set(g.sub(a, b));
            }
        }
        for y in g.elements() {
            if self.contains(g.add(y, y)) {
                out.bits.set(y);
            }
        }
        out
    }

    /// True iff no single element can be added while staying sum-free.
    /// Errors with [`Error::NotSumFree`] when the input itself is not.
    pub fn is_maximal_sum_free(&self) -> Result<bool> {
        if !self.is_sum_free() {
            return Err(Error::NotSumFree);
        }
        let blocked = self.blocked_extensions().union(self)?;
        Ok(blocked.len() == self.group.order() as usize)
    }

    /// The period subgroup `H(A) = {g : g + A = A}`. Always a subgroup; `A`
    /// is a union of its cosets when nonempty. `stabilizer(∅) = G` under the
    /// largest-subgroup reading.
    pub fn stabilizer(&self) -> Subset {
        let g = &self.group;
        if self.is_empty() {
            return Subset::full(g);
        }
        let members = self.indices();
        let mut out = Subset::empty(g);
        'candidates: for h in g.elements() {
            for &a in &members {
                if !self.contains(g.add(h, a)) {
                    continue 'candidates;
                }
            }
            out.bits.set(h);
        }
        out
    }
}

/// Preimage `h^{-1}(B)` of a subset of the target cyclic group; requires a
/// surjective `h` so the density is preserved exactly.
pub fn preimage(h: &Hom, b: &Subset) -> Result<Subset> {
    if !h.is_surjective() {
        return Err(Error::InvalidArgument(
            "preimage requires a surjective homomorphism".into(),
        ));
    }
    if b.group() != h.target() {
        return Err(Error::GroupMismatch);
    }
    let g = h.source();
    let mut out = Subset::empty(g);
    for x in g.elements() {
        if b.contains(h.apply(x) as usize) {
            out.insert(x);
        }
    }
    Ok(out)
}

/// Kernel of a homomorphism as a subset of the source.
pub fn kernel(h: &Hom) -> Subset {
    let g = h.source();
    let mut out = Subset::empty(g);
    for x in g.elements() {
        if h.apply(x) == 0 {
            out.insert(x);
        }
    }
    out
}

/// Report of the Kneser identity for one pair `(C, B)`:
/// with `F = H(C + B)`, whenever `|C+B| < |C| + |B|` both
/// `|C+B| = |C+F| + |B+F| - |F|` and `|F| >= |C| + |B| - |C+B|` must hold.
#[derive(Debug, Clone)]
pub struct KneserReport {
    pub c_size: usize,
    pub b_size: usize,
    pub sum_size: usize,
    pub f_size: usize,
    pub c_plus_f: usize,
    pub b_plus_f: usize,
    pub stabilizer: Subset,
    pub identity_holds: bool,
    pub bound_holds: bool,
}

impl KneserReport {
    /// The premise under which the identity is asserted.
    pub fn premise(&self) -> bool {
        self.sum_size < self.c_size + self.b_size
    }
}

pub fn kneser_check(c: &Subset, b: &Subset) -> Result<KneserReport> {
    if c.is_empty() || b.is_empty() {
        return Err(Error::InvalidArgument(
            "Kneser check requires nonempty operands".into(),
        ));
    }
    let sum = c.sumset(b)?;
    let f = sum.stabilizer();
    let c_plus_f = c.sumset(&f)?.len();
    let b_plus_f = b.sumset(&f)?.len();
    let report = KneserReport {
        c_size: c.len(),
        b_size: b.len(),
        sum_size: sum.len(),
        f_size: f.len(),
        c_plus_f,
        b_plus_f,
        identity_holds: sum.len() + f.len() == c_plus_f + b_plus_f,
        bound_holds: f.len() + sum.len() >= c.len() + b.len(),
        stabilizer: f,
    };
    Ok(report)
}

/// Folklore filling lemma: when both densities exceed 1/2, the sumset is the
/// whole group. Errors when the density precondition fails.
pub fn fill_lemma_check(c: &Subset, b: &Subset) -> Result<bool> {
    if c.group() != b.group() {
        return Err(Error::GroupMismatch);
    }
    let n = c.group().order() as usize;
    let min = c.len().min(b.len());
    if 2 * min <= n {
        return Err(Error::InvalidArgument(format!(
            "filling lemma requires min(|C|,|B|) > n/2; got {min} with n = {n}"
        )));
    }
    Ok(c.sumset(b)?.len() == n)
}

/// Subgroup generated by a set of element indices.
pub fn generated_subgroup(g: &Arc<Group>, gens: &[usize]) -> Subset {
    let mut h = Subset::empty(g);
    h.insert(0);
    for &x in gens {
        let ord = g.element_order(x);
        let mut grown = Subset::empty(g);
        for t in 0..ord {
            let shift = g.scalar_mul(t, x);
            grown = grown.union(&h.translate(shift)).expect("same group");
        }
        h = grown;
    }
    h
}

/// True iff the subset contains 0 and is closed under addition (hence a
/// subgroup, finiteness giving inverses).
pub fn is_subgroup(s: &Subset) -> bool {
    if !s.contains(0) {
        return false;
    }
    let g = s.group();
    let members = s.indices();
    for &a in &members {
        for &b in &members {
            if !s.contains(g.add(a, b)) {
                return false;
            }
        }
    }
    true
}

/// All subgroups, deduplicated and sorted by size then canonical bits.
pub fn enumerate_subgroups(g: &Arc<Group>) -> Result<Vec<Subset>> {
    enumerate_subgroups_bounded(g, DEFAULT_ENUMERATION_BOUND)
}

pub fn enumerate_subgroups_bounded(g: &Arc<Group>, bound: u64) -> Result<Vec<Subset>> {
    if g.order() > bound {
        return Err(Error::BoundExceeded {
            order: g.order(),
            bound,
        });
    }
    let trivial = generated_subgroup(g, &[]);
    let mut seen: HashSet<BitVec> = HashSet::new();
    seen.insert(trivial.bits().clone());
    let mut queue = vec![trivial];
    let mut out: Vec<Subset> = Vec::new();
    while let Some(h) = queue.pop() {
        for x in g.elements() {
            if h.contains(x) {
                continue;
            }
            let mut gens = h.indices();
            gens.push(x);
            let grown = generated_subgroup(g, &gens);
            if seen.insert(grown.bits().clone()) {
                queue.push(grown);
            }
        }
        out.push(h);
    }
    out.sort_by(|a, b| {
        a.len()
            .cmp(&b.len())
            .then_with(|| a.indices().cmp(&b.indices()))
    });
    Ok(out)
}

/// A splitting `G = S ⊕ C` with `C` cyclic of exponent order, carried by the
/// projection `f : G -> Z/mZ` whose kernel is `S`; `c_gen` generates `C` and
/// maps to 1.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub f: Hom,
    pub s: Subset,
    pub c_gen: usize,
}

impl Decomposition {
    /// The element `g^{-1}(p(j))` of `C`, i.e. `j * c_gen`.
    pub fn c_of(&self, residue: u64) -> usize {
        self.f.source().scalar_mul(residue, self.c_gen)
    }
}

/// Decomposition along a given surjection onto `Z/mZ` (m the exponent):
/// `S = ker f` and `C` generated by the least element mapping to 1.
pub fn decompose_along(f: &Hom) -> Result<Decomposition> {
    let g = f.source();
    if f.modulus() != g.exponent() {
        return Err(Error::InvalidArgument(format!(
            "decomposition needs a surjection onto Z/{}Z, got modulus {}",
            g.exponent(),
            f.modulus()
        )));
    }
    if !f.is_surjective() {
        return Err(Error::InvalidArgument(
            "decomposition requires a surjective homomorphism".into(),
        ));
    }
    let c_gen = if f.modulus() == 1 {
        0
    } else {
        g.elements()
            .find(|&x| f.apply(x) == 1)
            .expect("surjective hom attains 1")
    };
    Ok(Decomposition {
        s: kernel(f),
        f: f.clone(),
        c_gen,
    })
}

/// Canonical projection of `g` onto `Z/mZ`: the highest-index factor of
/// order `m` when one exists, otherwise coefficients assembled per prime
/// power so the map is surjective.
pub fn canonical_projection(g: &Arc<Group>) -> Hom {
    let m = g.exponent();
    let r = g.rank();
    let mut coeffs = vec![0u64; r];
    if let Some(j) = (0..r).rev().find(|&j| g.moduli()[j] == m) {
        if m > 1 {
            coeffs[j] = 1;
        }
    } else {
        // No single factor attains the exponent: for each prime power
        // p^a || m pick a factor carrying it and add m / p^a to its
        // coefficient. The gcd with m of the assembled vector is 1.
        let mut rem = m;
        let mut p = 2;
        while p * p <= rem {
            if rem.is_multiple_of(p) {
                let mut pa = 1;
                while rem.is_multiple_of(p) {
                    rem /= p;
                    pa *= p;
                }
                let j = (0..r)
                    .find(|&j| g.moduli()[j].is_multiple_of(pa))
                    .expect("lcm factor must appear");
                coeffs[j] = (coeffs[j] + m / pa) % m;
            }
            p += 1;
        }
        if rem > 1 {
            let pa = rem;
            let j = (0..r)
                .find(|&j| g.moduli()[j].is_multiple_of(pa))
                .expect("lcm factor must appear");
            coeffs[j] = (coeffs[j] + m / pa) % m;
        }
    }
    Hom::new(g.clone(), m, coeffs).expect("canonical projection is well-defined")
}

/// Canonical decomposition `G = S ⊕ C`; for cyclic groups `S` is trivial.
pub fn decompose(g: &Arc<Group>) -> Decomposition {
    decompose_along(&canonical_projection(g)).expect("canonical projection decomposes")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(m: u64) -> Arc<Group> {
        Group::new(vec![m]).unwrap()
    }

    fn set(g: &Arc<Group>, s: &str) -> Subset {
        Subset::parse(g, s).unwrap()
    }

    #[test]
    fn sumset_examples() {
        let g = cyclic(7);
        assert_eq!(set(&g, "1").sumset(&set(&g, "2")).unwrap(), set(&g, "3"));
        assert_eq!(
            set(&g, "3,4").sumset(&set(&g, "3,4")).unwrap(),
            set(&g, "6,0,1")
        );
        let empty = Subset::empty(&g);
        assert!(set(&g, "3,4").sumset(&empty).unwrap().is_empty());
    }

    #[test]
    fn t_fold_examples() {
        let g = cyclic(11);
        assert_eq!(set(&g, "3").t_fold(2).unwrap(), set(&g, "6"));
        let g7 = cyclic(7);
        assert_eq!(set(&g7, "1").t_fold(3).unwrap(), set(&g7, "3"));
        assert!(set(&g, "3").t_fold(0).is_err());

        // Oracle: expand all 4-term sums of {8,9,10} mod 11 directly.
        let a = [8u64, 9, 10];
        let mut expected = std::collections::BTreeSet::new();
        for &x in &a {
            for &y in &a {
                for &z in &a {
                    for &w in &a {
                        expected.insert((x + y + z + w) % 11);
                    }
                }
            }
        }
        let by_fold: std::collections::BTreeSet<u64> = set(&g, "8,9,10")
            .t_fold(4)
            .unwrap()
            .indices()
            .into_iter()
            .map(|i| i as u64)
            .collect();
        assert_eq!(by_fold, expected);
        assert_eq!(
            expected,
            [10u64, 0, 1, 2, 3, 4, 5, 6, 7].into_iter().collect()
        );
    }

    #[test]
    fn sum_free_examples() {
        let g = cyclic(7);
        assert!(Subset::empty(&g).is_sum_free());
        assert!(set(&g, "3,4").is_sum_free());
        assert!(!set(&g, "1,2").is_sum_free());
    }

    #[test]
    fn kl_free_examples() {
        let g5 = cyclic(5);
        assert!(set(&g5, "2,3").is_kl_free(2, 1).unwrap());
        let g7 = cyclic(7);
        for s in ["3,4", "1,2", "2,5", "0,1,2"] {
            assert_eq!(
                set(&g7, s).is_kl_free(2, 1).unwrap(),
                set(&g7, s).is_sum_free()
            );
        }
        assert!(!Subset::full(&g7).is_kl_free(2, 1).unwrap());
        assert!(set(&g7, "1").is_kl_free(1, 1).is_err());
    }

    #[test]
    fn maximality_examples() {
        let g3 = cyclic(3);
        assert!(set(&g3, "1").is_maximal_sum_free().unwrap());
        let g7 = cyclic(7);
        assert!(set(&g7, "3,4").is_maximal_sum_free().unwrap());
        assert!(!set(&g7, "3").is_maximal_sum_free().unwrap());
        assert!(set(&g7, "1,2").is_maximal_sum_free().is_err());
    }

    #[test]
    fn maximality_against_exhaustive_extension() {
        let g = cyclic(13);
        for s in ["5,6,7,8", "4,6,7,9", "1", "3,4"] {
            let a = set(&g, s);
            if !a.is_sum_free() {
                continue;
            }
            let brute = g.elements().filter(|&x| !a.contains(x)).all(|x| {
                let mut ext = a.clone();
                ext.insert(x);
                !ext.is_sum_free()
            });
            assert_eq!(a.is_maximal_sum_free().unwrap(), brute, "set {s}");
        }
    }

    #[test]
    fn stabilizer_examples() {
        let g = cyclic(7);
        assert_eq!(Subset::full(&g).stabilizer(), Subset::full(&g));
        assert_eq!(set(&g, "3").stabilizer(), set(&g, "0"));
        assert_eq!(Subset::empty(&g).stabilizer(), Subset::full(&g));
        let gg = Group::new(vec![7, 7]).unwrap();
        let line = Subset::from_indices(
            &gg,
            &(0..7)
                .map(|t| gg.index_of(&[t, 0]).unwrap())
                .collect::<Vec<_>>(),
        )
        .unwrap();
        assert_eq!(line.stabilizer(), line);
    }

    #[test]
    fn stabilizer_is_largest_fixing_subgroup() {
        let g = cyclic(12);
        let a = set(&g, "1,2,7,8"); // union of two cosets of {0,6}
        let st = a.stabilizer();
        assert!(is_subgroup(&st));
        assert_eq!(st, set(&g, "0,6"));
        for h in enumerate_subgroups(&g).unwrap() {
            let fixes = h.iter().all(|x| a.translate(x) == a);
            assert_eq!(fixes, h.is_subset_of(&st).unwrap());
        }
    }

    #[test]
    fn kneser_examples() {
        let g = cyclic(7);
        let r = kneser_check(&set(&g, "0"), &set(&g, "0")).unwrap();
        assert!(r.premise() && r.identity_holds && r.bound_holds);
        assert_eq!((r.sum_size, r.f_size), (1, 1));

        let full = Subset::full(&g);
        let r = kneser_check(&full, &full).unwrap();
        assert!(r.identity_holds);
        assert_eq!(r.f_size, 7);

        let gg = Group::new(vec![7, 7]).unwrap();
        let line = Subset::from_indices(
            &gg,
            &(0..7)
                .map(|t| gg.index_of(&[t, 0]).unwrap())
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let r = kneser_check(&line, &line).unwrap();
        assert!(r.premise() && r.identity_holds && r.bound_holds);
        assert_eq!((r.sum_size, r.f_size), (7, 7));

        assert!(kneser_check(&Subset::empty(&g), &full).is_err());
    }

    #[test]
    fn fill_lemma_examples() {
        let g = cyclic(13);
        let c = set(&g, "0,1,2,3,4,5,6");
        assert!(fill_lemma_check(&c, &c).unwrap());
        let g4 = cyclic(4);
        let half = set(&g4, "0,1");
        assert!(fill_lemma_check(&half, &half).is_err());
    }

    #[test]
    fn subgroup_counts() {
        assert_eq!(enumerate_subgroups(&cyclic(7)).unwrap().len(), 2);
        assert_eq!(enumerate_subgroups(&cyclic(49)).unwrap().len(), 3);
        // Oracle: subgroups of a rank-2 elementary abelian p-group: p + 3.
        let gg = Group::new(vec![7, 7]).unwrap();
        assert_eq!(enumerate_subgroups(&gg).unwrap().len(), 7 + 3);
    }

    #[test]
    fn subgroup_sizes_divide_order() {
        for spec in ["12", "2x4", "3x9", "7x7", "2x2x2"] {
            let g = Group::parse(spec).unwrap();
            for h in enumerate_subgroups(&g).unwrap() {
                assert!(is_subgroup(&h));
                assert_eq!(g.order() as usize % h.len(), 0, "group {spec}");
            }
        }
    }

    #[test]
    fn decompose_examples() {
        let gg = Group::new(vec![7, 7]).unwrap();
        let d = decompose(&gg);
        assert_eq!(d.s.len(), 7);
        assert_eq!(d.f.coeffs(), &[0, 1]);
        assert_eq!(gg.coords_of(d.c_gen), vec![0, 1]);

        let g91 = cyclic(91);
        let d = decompose(&g91);
        assert_eq!(d.s.len(), 1);
        assert_eq!(d.c_gen, 1);

        let g749 = Group::new(vec![7, 49]).unwrap();
        let d = decompose(&g749);
        assert_eq!(d.s.len(), 7);
        assert_eq!(d.f.modulus(), 49);

        // No factor attains the exponent: assembled by prime powers.
        let g713 = Group::new(vec![7, 13]).unwrap();
        let d = decompose(&g713);
        assert_eq!(d.f.modulus(), 91);
        assert!(d.f.is_surjective());
        assert_eq!(d.s.len(), 1);
        assert_eq!(g713.element_order(d.c_gen), 91);
    }

    #[test]
    fn preimage_examples() {
        let gg = Group::new(vec![7, 7]).unwrap();
        let h = Hom::new(gg.clone(), 7, vec![0, 1]).unwrap();
        let b = set(&Group::new(vec![7]).unwrap(), "3,4");
        let a = preimage(&h, &b).unwrap();
        assert_eq!(a.len(), 14);
        assert!(a.is_sum_free());

        let empty = Subset::empty(&Group::new(vec![7]).unwrap());
        assert!(preimage(&h, &empty).unwrap().is_empty());

        let g = cyclic(7);
        let id = Hom::new(g.clone(), 7, vec![1]).unwrap();
        assert_eq!(preimage(&id, &set(&g, "3,4")).unwrap(), set(&g, "3,4"));

        let zero = Hom::new(gg.clone(), 7, vec![0, 0]);
        assert!(zero.is_ok());
        assert!(preimage(&zero.unwrap(), &b).is_err());
    }

    #[test]
    fn parse_rejects_malformed_literals() {
        let gg = Group::new(vec![7, 7]).unwrap();
        assert!(Subset::parse(&gg, "(0,2),(1,2)").is_ok());
        assert!(Subset::parse(&gg, "3,4").is_err());
        assert!(Subset::parse(&gg, "(0,2),(1").is_err());
        assert!(Subset::parse(&gg, "(9,2)").is_err());
        let g = cyclic(7);
        assert_eq!(set(&g, " 3 , 4 ").indices(), vec![3, 4]);
        let roundtrip = set(&g, "3,4");
        assert_eq!(Subset::parse(&g, &roundtrip.format()).unwrap(), roundtrip);
    }
}
