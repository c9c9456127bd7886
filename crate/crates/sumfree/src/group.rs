//! Finite abelian groups as ordered lists of cyclic factor moduli.
//!
//! Elements are handled through their mixed-radix row-major index in
//! `[0, n)`; coordinate vectors are converted at the boundary. Two groups are
//! the "same group" exactly when their (sorted) factor lists match; no
//! isomorphism testing is performed.

use crate::{Error, Result};
use std::sync::{Arc, OnceLock};

/// Largest group order for which a flat addition table is cached.
const ADD_TABLE_LIMIT: u64 = 4096;

/// Default order bound for automorphism and subgroup enumeration.
pub const DEFAULT_ENUMERATION_BOUND: u64 = 2500;

/// A finite abelian group `Z/c1 x Z/c2 x ... x Z/cr`, canonicalized so the
/// moduli are sorted ascending and never equal to 1. The empty list is the
/// trivial group.
pub struct Group {
    moduli: Vec<u64>,
    strides: Vec<u64>,
    order: u64,
    exponent: u64,
    add_table: OnceLock<Vec<u16>>,
    neg_table: OnceLock<Vec<u16>>,
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        self.moduli == other.moduli
    }
}
impl Eq for Group {}

impl std::fmt::Debug for Group {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Group({})", self.spec_string())
    }
}

impl Group {
    /// Build a group from factor moduli, each at least 2. The list is sorted
    /// into canonical ascending order.
    pub fn new(mut moduli: Vec<u64>) -> Result<Arc<Group>> {
        if moduli.iter().any(|&m| m < 2) {
            return Err(Error::InvalidArgument(
                "factor moduli must all be at least 2".into(),
            ));
        }
        moduli.sort_unstable();
        let mut order: u64 = 1;
        let mut exponent: u64 = 1;
        for &m in &moduli {
            order = order
                .checked_mul(m)
                .ok_or_else(|| Error::InvalidArgument("group order overflows u64".into()))?;
            exponent = num::integer::lcm(exponent, m);
        }
        if order > u32::MAX as u64 {
            return Err(Error::InvalidArgument(format!(
                "group order {order} too large for explicit element indexing"
            )));
        }
        let r = moduli.len();
        let mut strides = vec![1u64; r];
        for i in (0..r.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * moduli[i + 1];
        }
        Ok(Arc::new(Group {
            moduli,
            strides,
            order,
            exponent,
            add_table: OnceLock::new(),
            neg_table: OnceLock::new(),
        }))
    }

    /// The trivial group (order 1, exponent 1, single element 0).
    pub fn trivial() -> Arc<Group> {
        Group::new(vec![]).expect("trivial group always valid")
    }

    /// Parse a spec string like `"7x7"`, `"13"`, or `"7x49"`.
    pub fn parse(s: &str) -> Result<Arc<Group>> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::InvalidArgument("empty group spec".into()));
        }
        let mut moduli = Vec::new();
        for part in s.split('x') {
            let m: u64 = part.trim().parse().map_err(|_| {
                Error::InvalidArgument(format!("bad modulus {part:?} in group spec {s:?}"))
            })?;
            if m < 2 {
                return Err(Error::InvalidArgument(format!(
                    "modulus {m} in group spec {s:?} must be at least 2"
                )));
            }
            moduli.push(m);
        }
        Group::new(moduli)
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    /// Order `n` of the group.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Exponent `m`: the lcm of the factor moduli (1 for the trivial group).
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// Canonical string form, `"c1xc2x...xcr"`.
    pub fn spec_string(&self) -> String {
        if self.moduli.is_empty() {
            "1".to_string()
        } else {
            self.moduli
                .iter()
                .map(|m| m.to_string())
                .collect::<Vec<_>>()
                .join("x")
        }
    }

    /// Mixed-radix index of a coordinate vector.
    pub fn index_of(&self, coords: &[u64]) -> Result<usize> {
        if coords.len() != self.moduli.len() {
            return Err(Error::InvalidElement(format!(
                "expected {} coordinates, got {}",
                self.moduli.len(),
                coords.len()
            )));
        }
        let mut idx = 0u64;
        for (i, (&c, &m)) in coords.iter().zip(&self.moduli).enumerate() {
            if c >= m {
                return Err(Error::InvalidElement(format!(
                    "coordinate {c} out of range for factor {i} (modulus {m})"
                )));
            }
            idx += c * self.strides[i];
        }
        Ok(idx as usize)
    }

    /// Coordinate vector of an element index.
    pub fn coords_of(&self, idx: usize) -> Vec<u64> {
        debug_assert!((idx as u64) < self.order);
        let idx = idx as u64;
        self.moduli
            .iter()
            .zip(&self.strides)
            .map(|(&m, &s)| (idx / s) % m)
            .collect()
    }

    fn add_uncached(&self, a: usize, b: usize) -> usize {
        let (a, b) = (a as u64, b as u64);
        let mut idx = 0u64;
        for (&m, &s) in self.moduli.iter().zip(&self.strides) {
            let ca = (a / s) % m;
            let cb = (b / s) % m;
            let mut c = ca + cb;
            if c >= m {
                c -= m;
            }
            idx += c * s;
        }
        idx as usize
    }

    /// Coordinate-wise sum of two element indices.
    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        let n = self.order as usize;
        debug_assert!(a < n && b < n);
        if self.order <= ADD_TABLE_LIMIT {
            let table = self.add_table.get_or_init(|| {
                let mut t = vec![0u16; n * n];
                for x in 0..n {
                    for y in x..n {
                        let s = self.add_uncached(x, y) as u16;
                        t[x * n + y] = s;
                        t[y * n + x] = s;
                    }
                }
                t
            });
            table[a * n + b] as usize
        } else {
            self.add_uncached(a, b)
        }
    }

    /// Additive inverse of an element index.
    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        let n = self.order as usize;
        debug_assert!(a < n);
        if self.order <= ADD_TABLE_LIMIT {
            let table = self.neg_table.get_or_init(|| {
                (0..n)
                    .map(|x| {
                        let x = x as u64;
                        let mut idx = 0u64;
                        for (&m, &s) in self.moduli.iter().zip(&self.strides) {
                            let c = (x / s) % m;
                            idx += ((m - c) % m) * s;
                        }
                        idx as u16
                    })
                    .collect()
            });
            table[a] as usize
        } else {
            let a = a as u64;
            let mut idx = 0u64;
            for (&m, &s) in self.moduli.iter().zip(&self.strides) {
                let c = (a / s) % m;
                idx += ((m - c) % m) * s;
            }
            idx as usize
        }
    }

    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// `t`-fold self-sum of an element (t = 0 gives the identity).
    pub fn scalar_mul(&self, t: u64, a: usize) -> usize {
        let a = a as u64;
        let mut idx = 0u64;
        for (&m, &s) in self.moduli.iter().zip(&self.strides) {
            let c = (a / s) % m;
            idx += (c * (t % m) % m) * s;
        }
        idx as usize
    }

    /// Order of an element: lcm over factors of `m_i / gcd(m_i, c_i)`.
    pub fn element_order(&self, a: usize) -> u64 {
        let a = a as u64;
        let mut ord = 1u64;
        for (&m, &s) in self.moduli.iter().zip(&self.strides) {
            let c = (a / s) % m;
            ord = num::integer::lcm(ord, m / num::integer::gcd(m, c));
        }
        ord
    }

    pub fn zero(&self) -> usize {
        0
    }

    /// All element indices.
    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order as usize
    }
}

/// Sorted list of divisors of `x` (x >= 1).
pub fn divisors(x: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= x {
        if x.is_multiple_of(d) {
            small.push(d);
            if d != x / d {
                large.push(x / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// A homomorphism `G -> Z/dZ`, given by one coefficient per cyclic factor.
///
/// Well-definedness requires `factor_moduli[i] * coeffs[i] = 0 (mod d)` for
/// every factor; this is checked at construction. The same representation
/// carries projections, special directions, and classification maps.
#[derive(Clone)]
pub struct Hom {
    source: Arc<Group>,
    target: Arc<Group>,
    modulus: u64,
    coeffs: Vec<u64>,
}

impl PartialEq for Hom {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source && self.modulus == other.modulus && self.coeffs == other.coeffs
    }
}
impl Eq for Hom {}

impl std::fmt::Debug for Hom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Hom({} -> Z/{}, coeffs {:?})",
            self.source.spec_string(),
            self.modulus,
            self.coeffs
        )
    }
}

impl Hom {
    pub fn new(source: Arc<Group>, modulus: u64, coeffs: Vec<u64>) -> Result<Hom> {
        if modulus < 1 {
            return Err(Error::InvalidArgument("hom modulus must be >= 1".into()));
        }
        if coeffs.len() != source.rank() {
            return Err(Error::InvalidArgument(format!(
                "expected {} coefficients, got {}",
                source.rank(),
                coeffs.len()
            )));
        }
        for (i, (&c, &m)) in coeffs.iter().zip(source.moduli()).enumerate() {
            if c >= modulus {
                return Err(Error::InvalidArgument(format!(
                    "coefficient {c} at factor {i} not reduced mod {modulus}"
                )));
            }
            if !((m % modulus) * c).is_multiple_of(modulus) {
                return Err(Error::InvalidArgument(format!(
                    "coefficient {c} at factor {i} does not define a hom: {m}*{c} != 0 mod {modulus}"
                )));
            }
        }
        let target = if modulus == 1 {
            Group::trivial()
        } else {
            Group::new(vec![modulus])?
        };
        Ok(Hom {
            source,
            target,
            modulus,
            coeffs,
        })
    }

    pub fn source(&self) -> &Arc<Group> {
        &self.source
    }

    /// Target group `Z/dZ` (the trivial group when d = 1).
    pub fn target(&self) -> &Arc<Group> {
        &self.target
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Value on an element index, as a residue in `[0, d)`.
    pub fn apply(&self, idx: usize) -> u64 {
        let idx = idx as u64;
        let mut acc = 0u64;
        for ((&m, &s), &c) in self
            .source
            .moduli()
            .iter()
            .zip(&self.source.strides)
            .zip(&self.coeffs)
        {
            acc = (acc + ((idx / s) % m) % self.modulus * c) % self.modulus;
        }
        acc
    }

    /// Surjective iff `gcd(d, c_1, ..., c_r) = 1`.
    pub fn is_surjective(&self) -> bool {
        let mut g = self.modulus;
        for &c in &self.coeffs {
            g = num::integer::gcd(g, c);
        }
        g == 1
    }

    /// The unique integer lift of a residue into `[0, d)`.
    pub fn lift(&self, i: u64) -> u64 {
        debug_assert!(i < self.modulus.max(1));
        i
    }

    /// The hom `x -> c * f(x)`; surjective whenever `gcd(c, d) = 1`.
    pub fn scaled(&self, c: u64) -> Hom {
        let coeffs = self
            .coeffs
            .iter()
            .map(|&a| a * (c % self.modulus) % self.modulus)
            .collect();
        Hom {
            source: self.source.clone(),
            target: self.target.clone(),
            modulus: self.modulus,
            coeffs,
        }
    }
}

/// All well-defined surjective homomorphisms `g -> Z/dZ` in lexicographic
/// coefficient order. Empty iff `d` does not divide the exponent (for d > 1);
/// for d = 1 the unique zero map is returned.
pub fn enumerate_surjective_homs(g: &Arc<Group>, d: u64) -> Vec<Hom> {
    assert!(d >= 1, "modulus must be >= 1");
    let r = g.rank();
    // Valid coefficients per factor: multiples of d / gcd(d, m_i).
    let steps: Vec<u64> = g
        .moduli()
        .iter()
        .map(|&m| d / num::integer::gcd(d, m))
        .collect();
    let counts: Vec<u64> = g
        .moduli()
        .iter()
        .map(|&m| num::integer::gcd(d, m))
        .collect();
    let mut out = Vec::new();
    let mut idx = vec![0u64; r];
    loop {
        let coeffs: Vec<u64> = idx.iter().zip(&steps).map(|(&i, &s)| i * s).collect();
        let mut gc = d;
        for &c in &coeffs {
            gc = num::integer::gcd(gc, c);
        }
        if gc == 1 {
            out.push(
                Hom::new(g.clone(), d, coeffs).expect("constructed coefficients are well-defined"),
            );
        }
        // odometer, last coordinate fastest => lexicographic ascending
        let mut i = r;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < counts[i] {
                break;
            }
            idx[i] = 0;
        }
        if r == 0 {
            return out;
        }
    }
}

/// An invertible endomorphism, stored as a coefficient matrix: column `j` is
/// the coordinate vector of the image of generator `e_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    group: Arc<Group>,
    matrix: Vec<Vec<u64>>, // matrix[t][j]: coordinate t of image of e_j
}

impl Automorphism {
    pub fn identity(g: &Arc<Group>) -> Automorphism {
        let r = g.rank();
        let matrix = (0..r)
            .map(|t| (0..r).map(|j| u64::from(t == j)).collect())
            .collect();
        Automorphism {
            group: g.clone(),
            matrix,
        }
    }

    /// Multiplication by `c`; an automorphism whenever `gcd(c, exponent) = 1`.
    pub fn scalar(g: &Arc<Group>, c: u64) -> Automorphism {
        let r = g.rank();
        let matrix = (0..r)
            .map(|t| {
                (0..r)
                    .map(|j| if t == j { c % g.moduli()[t] } else { 0 })
                    .collect()
            })
            .collect();
        Automorphism {
            group: g.clone(),
            matrix,
        }
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn matrix(&self) -> &[Vec<u64>] {
        &self.matrix
    }

    pub fn apply(&self, idx: usize) -> usize {
        let g = &self.group;
        let coords = g.coords_of(idx);
        let r = g.rank();
        let mut out = vec![0u64; r];
        for (t, row) in self.matrix.iter().enumerate() {
            let m = g.moduli()[t];
            let mut acc = 0u64;
            for (j, &c) in coords.iter().enumerate() {
                acc = (acc + c % m * (row[j] % m)) % m;
            }
            out[t] = acc;
        }
        g.index_of(&out).expect("image coordinates in range")
    }

    /// The induced permutation of element indices.
    pub fn permutation(&self) -> Vec<usize> {
        self.group.elements().map(|x| self.apply(x)).collect()
    }
}

/// All automorphisms of `g`, as coefficient matrices. Brute-forces generator
/// images with a bijectivity check; beware that the count grows very fast with
/// rank even for small orders.
pub fn enumerate_automorphisms(g: &Arc<Group>) -> Result<Vec<Automorphism>> {
    enumerate_automorphisms_bounded(g, DEFAULT_ENUMERATION_BOUND)
}

pub fn enumerate_automorphisms_bounded(g: &Arc<Group>, bound: u64) -> Result<Vec<Automorphism>> {
    if g.order() > bound {
        return Err(Error::BoundExceeded {
            order: g.order(),
            bound,
        });
    }
    let n = g.order() as usize;
    let r = g.rank();
    if r == 0 {
        return Ok(vec![Automorphism::identity(g)]);
    }
    // Candidate images for generator e_j: elements whose order divides m_j.
    let candidates: Vec<Vec<usize>> = g
        .moduli()
        .iter()
        .map(|&m| {
            g.elements()
                .filter(|&x| m % g.element_order(x) == 0)
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; r];
    let mut seen = vec![0u32; n];
    let mut stamp = 0u32;
    loop {
        let cols: Vec<usize> = (0..r).map(|j| candidates[j][choice[j]]).collect();
        // The induced index map; bijective iff it hits every index once.
        stamp += 1;
        let mut bijective = true;
        'outer: for x in 0..n {
            let coords = g.coords_of(x);
            let mut img = 0usize;
            for (j, &c) in coords.iter().enumerate() {
                img = g.add(img, g.scalar_mul(c, cols[j]));
            }
            if seen[img] == stamp {
                bijective = false;
                break 'outer;
            }
            seen[img] = stamp;
        }
        if bijective {
            let matrix: Vec<Vec<u64>> = (0..r)
                .map(|t| (0..r).map(|j| g.coords_of(cols[j])[t]).collect())
                .collect();
            out.push(Automorphism {
                group: g.clone(),
                matrix,
            });
        }
        let mut i = r;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < candidates[i].len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modular_addition_cyclic() {
        let g = Group::new(vec![7]).unwrap();
        assert_eq!(g.add(3, 5), 1);
        assert_eq!(g.add(3, 0), 3);
        assert_eq!(g.neg(3), 4);
    }

    #[test]
    fn componentwise_addition() {
        let g = Group::new(vec![7, 7]).unwrap();
        let x = g.index_of(&[3, 4]).unwrap();
        let y = g.index_of(&[5, 4]).unwrap();
        assert_eq!(g.coords_of(g.add(x, y)), vec![1, 1]);
    }

    #[test]
    fn scalar_mul_and_order() {
        let g = Group::new(vec![13]).unwrap();
        assert_eq!(g.scalar_mul(2, 4), 8);
        assert_eq!(g.scalar_mul(0, 5), 0);
        assert_eq!(g.element_order(0), 1);
        assert_eq!(g.element_order(1), 13);
        let h = Group::new(vec![7, 49]).unwrap();
        assert_eq!(h.exponent(), 49);
        assert_eq!(h.order(), 343);
    }

    #[test]
    fn canonical_form_sorts_and_rejects_units() {
        let g = Group::new(vec![49, 7]).unwrap();
        assert_eq!(g.moduli(), &[7, 49]);
        assert!(Group::new(vec![1, 7]).is_err());
        assert!(Group::parse("7x0").is_err());
        assert_eq!(Group::parse("7x7").unwrap().order(), 49);
    }

    #[test]
    fn index_roundtrip() {
        let g = Group::new(vec![3, 4, 5]).unwrap();
        for idx in g.elements() {
            assert_eq!(g.index_of(&g.coords_of(idx)).unwrap(), idx);
        }
        assert!(g.index_of(&[3, 0, 0]).is_err());
        assert!(g.index_of(&[0, 0]).is_err());
    }

    #[test]
    fn surjective_hom_counts() {
        let g = Group::new(vec![7]).unwrap();
        let homs = enumerate_surjective_homs(&g, 7);
        assert_eq!(homs.len(), 6);
        assert_eq!(
            homs.iter().map(|h| h.coeffs()[0]).collect::<Vec<_>>(),
            vec![1, 2, 3, 4, 5, 6]
        );
        assert!(enumerate_surjective_homs(&g, 3).is_empty());

        // Oracle: count coefficient pairs (c1, c2) != (0, 0) directly.
        let gg = Group::new(vec![7, 7]).unwrap();
        let mut expected = 0;
        for c1 in 0..7u64 {
            for c2 in 0..7u64 {
                if num::integer::gcd(num::integer::gcd(7, c1), c2) == 1 {
                    expected += 1;
                }
            }
        }
        assert_eq!(expected, 48);
        assert_eq!(enumerate_surjective_homs(&gg, 7).len(), expected);
    }

    #[test]
    fn hom_nonempty_iff_divides_exponent() {
        for spec in ["7", "7x7", "7x49", "10", "2x6"] {
            let g = Group::parse(spec).unwrap();
            let m = g.exponent();
            for d in 1..=m {
                let nonempty = !enumerate_surjective_homs(&g, d).is_empty();
                assert_eq!(nonempty, m.is_multiple_of(d), "group {spec}, d = {d}");
            }
        }
    }

    #[test]
    fn hom_additivity_small_groups() {
        for spec in ["7", "9", "2x4", "3x3"] {
            let g = Group::parse(spec).unwrap();
            for d in divisors(g.exponent()) {
                for h in enumerate_surjective_homs(&g, d) {
                    for x in g.elements() {
                        for y in g.elements() {
                            let lhs = h.apply(g.add(x, y));
                            let rhs = (h.apply(x) + h.apply(y)) % d.max(1);
                            assert_eq!(lhs, rhs);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn automorphism_counts() {
        let g = Group::new(vec![7]).unwrap();
        assert_eq!(enumerate_automorphisms(&g).unwrap().len(), 6);
        assert_eq!(enumerate_automorphisms(&Group::trivial()).unwrap().len(), 1);
        // Oracle: |GL_2(F_7)| = (49 - 1)(49 - 7).
        let gg = Group::new(vec![7, 7]).unwrap();
        assert_eq!(
            enumerate_automorphisms(&gg).unwrap().len(),
            (49 - 1) * (49 - 7)
        );
    }

    #[test]
    fn automorphisms_are_invertible() {
        let g = Group::new(vec![3, 9]).unwrap();
        let autos = enumerate_automorphisms(&g).unwrap();
        let n = g.order() as usize;
        for a in &autos {
            let perm = a.permutation();
            let mut inv = vec![0usize; n];
            let mut hit = vec![false; n];
            for (x, &y) in perm.iter().enumerate() {
                assert!(!hit[y], "not a permutation");
                hit[y] = true;
                inv[y] = x;
            }
            for x in 0..n {
                assert_eq!(inv[perm[x]], x);
            }
        }
    }

    #[test]
    fn divisor_list() {
        assert_eq!(divisors(91), vec![1, 7, 13, 91]);
        assert_eq!(divisors(1), vec![1]);
    }

    #[test]
    fn residue_lifts() {
        let g = Group::new(vec![7]).unwrap();
        let id = Hom::new(g, 7, vec![1]).unwrap();
        assert_eq!(id.lift(5), 5);
        assert_eq!(id.lift(0), 0);
        // reduction happens before lifting: p(9) = 2 in Z/7
        assert_eq!(id.lift(9 % 7), 2);
        let g13 = Group::new(vec![13]).unwrap();
        let id13 = Hom::new(g13, 13, vec![1]).unwrap();
        assert_eq!(id13.lift(0), 0);
    }
}
