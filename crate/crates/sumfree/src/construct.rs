//! The named extremal families: interval sets `B_d`, the `H/T/M/I` interval
//! blocks, homomorphism preimages, the coset-patterned exceptional sets, the
//! maximum-set templates, a (k,1)-free example, and the maximal-but-not-maximum
//! 13-element set in (Z/7Z)^2.

use crate::density::{group_type, GroupType};
use crate::group::{divisors, Group, Hom};
use crate::subset::{decompose_along, is_subgroup, preimage, Decomposition, Subset};
use crate::{Error, Result};
use std::sync::Arc;

/// The interval blocks of `Z/dZ` at `l = (d-1)/6`:
/// `H = {l+1..2l}`, `M = {2l+1..4l}`, `T = {4l+1..5l}`, `I = H ∪ M ∪ T`.
///
/// `I` splits into `2l` disjoint pairs `(i, 2i)` with `i ∈ H ∪ T` and
/// `2i ∈ M`; `M` equals the interval set `B_d`.
#[derive(Debug, Clone)]
pub struct IntervalFamily {
    pub d: u64,
    pub l: u64,
    pub h: Subset,
    pub m: Subset,
    pub t: Subset,
    pub i: Subset,
}

impl IntervalFamily {
    /// The pairs `(i, 2i)` tiling `I`, one per element of `H ∪ T`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let g = self.h.group();
        self.h
            .iter()
            .chain(self.t.iter())
            .map(|i| (i, g.scalar_mul(2, i)))
            .collect()
    }
}

/// The sum-free interval set `B_d ⊂ Z/dZ`: residues of the integers in
/// `(d/3, 2d/3]`. Its size is `floor((d-2)/3) + 1` for `d >= 2`.
pub fn interval_set(d: u64) -> Subset {
    let g = if d == 1 {
        Group::trivial()
    } else {
        Group::new(vec![d]).expect("d >= 2")
    };
    let mut out = Subset::empty(&g);
    // integers t with d < 3t and 3t <= 2d
    let lo = d / 3 + 1;
    let hi = 2 * d / 3;
    for t in lo..=hi {
        out.insert((t % d.max(1)) as usize);
    }
    out
}

/// The four interval blocks for `d = 1 mod 6`, `d >= 7`.
pub fn interval_family(d: u64) -> Result<IntervalFamily> {
    if d % 6 != 1 || d < 7 {
        return Err(Error::InvalidArgument(format!(
            "interval family requires d = 1 mod 6 and d >= 7, got {d}"
        )));
    }
    let l = (d - 1) / 6;
    let g = Group::new(vec![d])?;
    let range = |a: u64, b: u64| -> Subset {
        let mut s = Subset::empty(&g);
        for t in a..=b {
            s.insert((t % d) as usize);
        }
        s
    };
    let h = range(l + 1, 2 * l);
    let m = range(2 * l + 1, 4 * l);
    let t = range(4 * l + 1, 5 * l);
    let i = h.union(&m)?.union(&t)?;
    Ok(IntervalFamily { d, l, h, m, t, i })
}

/// Parameters for the two coset-patterned exceptional constructions: a
/// splitting `G = S ⊕ C`, a proper subgroup `J` of `S`, a base point `b ∈ S`,
/// and the variant (1 or 2). `J = S` is rejected: the non-preimage property
/// rests on `|H(A)| < |S|`, and the boundary case degenerates outside the
/// verified families.
#[derive(Debug, Clone)]
pub struct ExamParams {
    pub dec: Decomposition,
    pub j: Subset,
    pub b: usize,
    pub variant: u8,
}

impl ExamParams {
    pub fn new(dec: Decomposition, j: Subset, b: usize, variant: u8) -> Result<ExamParams> {
        let g = dec.f.source();
        if j.group() != g {
            return Err(Error::GroupMismatch);
        }
        if !is_subgroup(&j) || !j.is_subset_of(&dec.s)? {
            return Err(Error::InvalidArgument(
                "J must be a subgroup contained in S".into(),
            ));
        }
        if j == dec.s {
            return Err(Error::InvalidArgument(
                "J must be a proper subgroup of S".into(),
            ));
        }
        if !dec.s.contains(b) {
            return Err(Error::InvalidArgument("b must belong to S".into()));
        }
        if !(variant == 1 || variant == 2) {
            return Err(Error::InvalidArgument(format!(
                "variant must be 1 or 2, got {variant}"
            )));
        }
        Ok(ExamParams { dec, j, b, variant })
    }
}

/// Union of `D ⊕ g^{-1}p({residues})`: the copies of `D ⊂ S` sitting over the
/// listed residues of the cyclic quotient.
fn layers(dec: &Decomposition, d: &Subset, residues: impl Iterator<Item = u64>) -> Subset {
    let g = dec.f.source();
    let m = dec.f.modulus();
    let mut out = Subset::empty(g);
    for r in residues {
        let shift = dec.c_of(r % m);
        out = out.union(&d.translate(shift)).expect("same group");
    }
    out
}

/// One of the two exceptional sum-free sets of full density in a non-cyclic
/// type III group. Both have density `mu(G)`, stabilizer exactly `J`, and are
/// not contained in any preimage of a sum-free subset of a cyclic quotient.
pub fn exam_set(params: &ExamParams) -> Result<Subset> {
    let dec = &params.dec;
    let g = dec.f.source();
    match group_type(g)? {
        GroupType::TypeIII { .. } => {}
        t => {
            return Err(Error::InvalidArgument(format!(
                "exceptional construction requires a type III group, got type {}",
                t.tag()
            )))
        }
    }
    if dec.s.len() <= 1 {
        return Err(Error::InvalidArgument(
            "exceptional construction requires a non-cyclic group (nontrivial S)".into(),
        ));
    }
    let k = (dec.f.modulus() - 1) / 6;
    let s = &dec.s;
    let j = &params.j;
    let b = params.b;
    let j_plus = |t: usize| j.translate(t);
    let comp = |d: &Subset| s.minus(d).expect("same group"); // complement inside S
    let neg_b = g.neg(b);
    let two_b = g.add(b, b);
    let neg_two_b = g.neg(two_b);

    let set = match params.variant {
        1 => {
            // (J+b)⊕{2k} ∪ S⊕{2k+1..4k-1} ∪ (J+2b)^c⊕{4k}
            let a1 = layers(dec, &j_plus(b), std::iter::once(2 * k));
            let a2 = layers(dec, s, 2 * k + 1..=4 * k - 1);
            let a3 = layers(dec, &comp(&j_plus(two_b)), std::iter::once(4 * k));
            a1.union(&a2)?.union(&a3)?
        }
        2 => {
            // (J+b)⊕{2k} ∪ (J-2b)^c⊕{2k+1} ∪ S⊕{2k+2..4k-1}
            //   ∪ (J+2b)^c⊕{4k} ∪ (J-b)⊕{4k+1}
            let a1 = layers(dec, &j_plus(b), std::iter::once(2 * k));
            let a2 = layers(dec, &comp(&j_plus(neg_two_b)), std::iter::once(2 * k + 1));
            let a3 = layers(dec, s, 2 * k + 2..=4 * k - 1);
            let a4 = layers(dec, &comp(&j_plus(two_b)), std::iter::once(4 * k));
            let a5 = layers(dec, &j_plus(neg_b), std::iter::once(4 * k + 1));
            a1.union(&a2)?.union(&a3)?.union(&a4)?.union(&a5)?
        }
        _ => unreachable!("validated in ExamParams::new"),
    };
    Ok(set)
}

/// Re-materialize one of the three maximum-set templates along a surjection
/// `f : G -> Z/mZ` with `S = ker f`:
///
/// 1. `f^{-1}p{2k+1..4k}` (J, b ignored);
/// 2. `(J+b)⊕g^{-1}{2k} ∪ f^{-1}p{2k+1..4k-1} ∪ (J+2b)^c⊕g^{-1}{4k}`,
///    optionally negated;
/// 3. the five-piece union with wings at `2k, 2k+1, 4k, 4k+1`.
pub fn maxch_template(f: &Hom, j: &Subset, b: usize, variant: u8, negated: bool) -> Result<Subset> {
    let g = f.source();
    match group_type(g)? {
        GroupType::TypeIII { .. } => {}
        t => {
            return Err(Error::InvalidArgument(format!(
                "maximum templates require a type III group, got type {}",
                t.tag()
            )))
        }
    }
    let dec = decompose_along(f)?;
    if j.group() != g || !is_subgroup(j) || !j.is_subset_of(&dec.s)? {
        return Err(Error::InvalidArgument(
            "J must be a subgroup of ker f".into(),
        ));
    }
    if !dec.s.contains(b) {
        return Err(Error::InvalidArgument("b must belong to ker f".into()));
    }
    let k = (f.modulus() - 1) / 6;
    let s = &dec.s;
    let comp = |d: &Subset| s.minus(d).expect("same group");
    let neg_b = g.neg(b);
    let two_b = g.add(b, b);
    let neg_two_b = g.neg(two_b);
    let set = match variant {
        1 => layers(&dec, s, 2 * k + 1..=4 * k),
        2 => {
            let a1 = layers(&dec, &j.translate(b), std::iter::once(2 * k));
            let a2 = layers(&dec, s, 2 * k + 1..=4 * k - 1);
            let a3 = layers(&dec, &comp(&j.translate(two_b)), std::iter::once(4 * k));
            a1.union(&a2)?.union(&a3)?
        }
        3 => {
            let a1 = layers(&dec, s, 2 * k + 2..=4 * k - 1);
            let a2 = layers(&dec, &j.translate(b), std::iter::once(2 * k));
            let a3 = layers(&dec, &comp(&j.translate(two_b)), std::iter::once(4 * k));
            let a4 = layers(&dec, &j.translate(neg_b), std::iter::once(4 * k + 1));
            let a5 = layers(
                &dec,
                &comp(&j.translate(neg_two_b)),
                std::iter::once(2 * k + 1),
            );
            a1.union(&a2)?.union(&a3)?.union(&a4)?.union(&a5)?
        }
        _ => {
            return Err(Error::InvalidArgument(format!(
                "template variant must be 1..=3, got {variant}"
            )))
        }
    };
    Ok(if negated { set.negated() } else { set })
}

/// A (k,1)-free set of the conjectured extremal density `(q+1)/m` in a
/// non-cyclic group, with `q = floor((m-2)/(k+1))` and `x` solving
/// `(k-1)x = 1 + q (mod m)`:
/// `A = (J ⊕ {x}) ∪ (S ⊕ {x+1..x+q}) ∪ (J^c ⊕ {x+q+1})`.
/// Its stabilizer is `J`, so it is not a preimage from a cyclic quotient.
pub fn kl_example(g: &Arc<Group>, k: u64, j: &Subset) -> Result<Subset> {
    let m = g.exponent();
    if k < 2 {
        return Err(Error::InvalidArgument("k must be at least 2".into()));
    }
    if num::integer::gcd(g.order(), k - 1) != 1 {
        return Err(Error::InvalidArgument(format!(
            "requires gcd(n, k-1) = 1; n = {}, k = {k}",
            g.order()
        )));
    }
    for d in divisors(m) {
        if d > 1 && d % (k + 1) != 1 {
            return Err(Error::InvalidArgument(format!(
                "requires every divisor of m = 1 mod (k+1); divisor {d} fails"
            )));
        }
    }
    let dec = crate::subset::decompose(g);
    if dec.s.len() <= 1 {
        return Err(Error::InvalidArgument(
            "requires a non-cyclic group (nontrivial S)".into(),
        ));
    }
    if j.group() != g || !is_subgroup(j) || !j.is_subset_of(&dec.s)? {
        return Err(Error::InvalidArgument(
            "J must be a subgroup contained in S".into(),
        ));
    }
    if *j == dec.s {
        return Err(Error::InvalidArgument(
            "J must be a proper subgroup of S".into(),
        ));
    }
    let q = (m - 2) / (k + 1);
    // solve (k-1) x = 1 + q mod m; gcd(k-1, m) = 1 so the inverse exists
    let x = {
        let a = (k - 1) % m;
        let target = (1 + q) % m;
        (0..m)
            .find(|&x| a * x % m == target)
            .ok_or_else(|| Error::TheoremViolation("no solution for x despite gcd = 1".into()))?
    };
    let s = &dec.s;
    let jc = s.minus(j)?;
    let a1 = layers(&dec, j, std::iter::once(x));
    let a2 = layers(&dec, s, x + 1..=x + q);
    let a3 = layers(&dec, &jc, std::iter::once(x + q + 1));
    a1.union(&a2)?.union(&a3)
}

/// The 13-element maximal (but not maximum) sum-free subset of (Z/7Z)^2:
/// the full fiber over 3 of the second-coordinate projection, the points
/// (0,2) and (1,2), and the fiber over 4 minus (0,4), (1,4), (2,4).
pub fn maximal_example_49() -> Subset {
    let g = Group::new(vec![7, 7]).expect("7x7 valid");
    let pi2 = Hom::new(g.clone(), 7, vec![0, 1]).expect("projection well-defined");
    let z7 = pi2.target().clone();
    let fiber3 = preimage(&pi2, &Subset::from_indices(&z7, &[3]).unwrap()).unwrap();
    let fiber4 = preimage(&pi2, &Subset::from_indices(&z7, &[4]).unwrap()).unwrap();
    let extra = Subset::from_indices(
        &g,
        &[g.index_of(&[0, 2]).unwrap(), g.index_of(&[1, 2]).unwrap()],
    )
    .unwrap();
    let removed = Subset::from_indices(
        &g,
        &[
            g.index_of(&[0, 4]).unwrap(),
            g.index_of(&[1, 4]).unwrap(),
            g.index_of(&[2, 4]).unwrap(),
        ],
    )
    .unwrap();
    fiber3
        .union(&extra)
        .unwrap()
        .union(&fiber4.minus(&removed).unwrap())
        .unwrap()
}
