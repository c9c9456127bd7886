//! Exact-rational density formulas: the extremal sum-free density `mu(G)`,
//! the group-type taxonomy, and the `lambda_{k,l}` formula.
//!
//! Every quantity here is an exact `Ratio<i64>`; classification thresholds
//! such as 1/2 are compared exactly, never through floats.

use crate::group::{divisors, Group};
use crate::subset::Subset;
use crate::{Error, Result};
use num::rational::Ratio;
use std::sync::Arc;

/// Exact rational, reduced, positive denominator.
pub type Frac = Ratio<i64>;

pub fn frac(num: i64, den: i64) -> Frac {
    Ratio::new(num, den)
}

/// Render as `"p/q"` with the denominator always present.
pub fn frac_str(f: Frac) -> String {
    format!("{}/{}", f.numer(), f.denom())
}

/// Density `|A| / |G|`.
pub fn alpha(a: &Subset) -> Frac {
    frac(a.len() as i64, a.group().order() as i64)
}

/// Taxonomy of nontrivial finite abelian groups by the residues mod 3 of the
/// prime divisors of the order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupType {
    /// Some prime divisor is 2 mod 3; `p` is the least such.
    TypeI { p: u64 },
    /// No prime divisor is 2 mod 3, but 3 divides the order.
    TypeII,
    /// Every divisor of the order is 1 mod 3. Then every divisor of the
    /// exponent m is 1 mod 6 and `k = (m - 1) / 6` is an integer.
    TypeIII { k: u64 },
}

impl GroupType {
    pub fn tag(&self) -> &'static str {
        match self {
            GroupType::TypeI { .. } => "I",
            GroupType::TypeII => "II",
            GroupType::TypeIII { .. } => "III",
        }
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Group type of a nontrivial group; the trivial group has no type.
pub fn group_type(g: &Arc<Group>) -> Result<GroupType> {
    if g.order() < 2 {
        return Err(Error::InvalidArgument(
            "group type is undefined for the trivial group".into(),
        ));
    }
    let primes = prime_factors(g.order());
    if let Some(&p) = primes.iter().find(|&&p| p % 3 == 2) {
        // primes ascending, so the first hit is the least
        return Ok(GroupType::TypeI { p });
    }
    if g.order().is_multiple_of(3) {
        return Ok(GroupType::TypeII);
    }
    let m = g.exponent();
    debug_assert_eq!(m % 6, 1, "type III forces m = 1 mod 6");
    Ok(GroupType::TypeIII { k: (m - 1) / 6 })
}

/// `k = (m - 1) / 6` for a type III group.
pub fn type_three_k(g: &Arc<Group>) -> Result<u64> {
    match group_type(g)? {
        GroupType::TypeIII { k } => Ok(k),
        t => Err(Error::InvalidArgument(format!(
            "expected a type III group, got type {}",
            t.tag()
        ))),
    }
}

/// Density of a largest sum-free subset:
/// `mu(G) = max_{d | m} (floor((d - 2) / 3) + 1) / d`.
///
/// The bracket is floor division, so d = 1 contributes 0 and the trivial
/// group gets 0.
pub fn mu(g: &Arc<Group>) -> Frac {
    divisors(g.exponent())
        .into_iter()
        .map(|d| frac((d as i64 - 2).div_euclid(3) + 1, d as i64))
        .max()
        .expect("divisor list never empty")
}

/// The taxonomy closed forms for `mu`, computed independently of the divisor
/// maximum: 1/3 + 1/(3p) for type I(p), 1/3 for type II, 1/3 - 1/(3m) for
/// type III.
pub fn mu_closed_form(g: &Arc<Group>) -> Result<Frac> {
    Ok(match group_type(g)? {
        GroupType::TypeI { p } => frac(1, 3) + frac(1, 3 * p as i64),
        GroupType::TypeII => frac(1, 3),
        GroupType::TypeIII { .. } => frac(1, 3) - frac(1, 3 * g.exponent() as i64),
    })
}

/// Conjectured density of a largest (k,l)-free subset:
/// `lambda_{k,l} = max_{d | m} (floor((d - 2) / (k + l)) + 1) / d`,
/// subject to `k > l >= 1` and `gcd(n, k - l) = 1`.
pub fn lambda_conjecture(g: &Arc<Group>, k: u64, l: u64) -> Result<Frac> {
    if !(k > l && l >= 1) {
        return Err(Error::InvalidArgument(format!(
            "lambda requires k > l >= 1, got ({k},{l})"
        )));
    }
    if num::integer::gcd(g.order().max(1), k - l) != 1 {
        return Err(Error::InvalidArgument(format!(
            "lambda requires gcd(n, k-l) = 1; n = {}, k-l = {}",
            g.order(),
            k - l
        )));
    }
    let s = (k + l) as i64;
    Ok(divisors(g.exponent())
        .into_iter()
        .map(|d| frac((d as i64 - 2).div_euclid(s) + 1, d as i64))
        .max()
        .expect("divisor list never empty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subset::Subset;

    fn g(spec: &str) -> Arc<Group> {
        Group::parse(spec).unwrap()
    }

    #[test]
    fn alpha_examples() {
        let g7 = g("7");
        assert_eq!(alpha(&Subset::parse(&g7, "3,4").unwrap()), frac(2, 7));
        assert_eq!(alpha(&Subset::empty(&g7)), frac(0, 1));
        let gg = g("7x7");
        let mut s = Subset::empty(&gg);
        for i in 0..14 {
            s.insert(i);
        }
        assert_eq!(alpha(&s), frac(2, 7));
    }

    #[test]
    fn mu_examples() {
        assert_eq!(mu(&g("7")), frac(2, 7));
        assert_eq!(mu(&g("5")), frac(2, 5));
        assert_eq!(mu(&g("3")), frac(1, 3));
        assert_eq!(mu(&g("7x7")), frac(2, 7));
        assert_eq!(mu(&Group::trivial()), frac(0, 1));
    }

    #[test]
    fn type_examples() {
        assert_eq!(group_type(&g("10")).unwrap(), GroupType::TypeI { p: 2 });
        assert_eq!(group_type(&g("9")).unwrap(), GroupType::TypeII);
        assert_eq!(group_type(&g("91")).unwrap(), GroupType::TypeIII { k: 15 });
        assert!(group_type(&Group::trivial()).is_err());
    }

    #[test]
    fn mu_matches_taxonomy_up_to_200() {
        // Two independent routes onto the same value, for every group with
        // order at most 200 (one representative per factor list).
        for spec in [
            "2", "3", "4", "5", "7", "9", "10", "13", "19", "25", "31", "49", "91", "121", "133",
            "169", "2x2", "3x3", "7x7", "2x4", "3x9", "5x5", "7x13", "2x2x2", "11x11", "13x13",
            "7x49", "2x3x5", "4x4",
        ] {
            let gr = g(spec);
            if gr.order() > 400 {
                continue;
            }
            assert_eq!(mu(&gr), mu_closed_form(&gr).unwrap(), "group {spec}");
            let prod = mu(&gr) * frac(gr.order() as i64, 1);
            assert!(prod.is_integer(), "mu * n not integral for {spec}");
        }
    }

    #[test]
    fn type_three_divisors_are_one_mod_six() {
        for spec in ["7", "13", "19", "49", "91", "7x7", "7x49", "13x13"] {
            let gr = g(spec);
            assert!(matches!(
                group_type(&gr).unwrap(),
                GroupType::TypeIII { .. }
            ));
            for d in divisors(gr.exponent()) {
                if d > 1 {
                    assert_eq!(d % 6, 1, "divisor {d} of exponent of {spec}");
                }
            }
        }
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_conjecture(&g("7"), 2, 1).unwrap(), frac(2, 7));
        assert_eq!(lambda_conjecture(&g("11"), 4, 1).unwrap(), frac(2, 11));
        assert_eq!(lambda_conjecture(&g("13"), 3, 2).unwrap(), frac(3, 13));
        // (2,1) always agrees with mu
        for spec in ["2", "7", "10", "9", "7x7", "91"] {
            let gr = g(spec);
            assert_eq!(lambda_conjecture(&gr, 2, 1).unwrap(), mu(&gr), "{spec}");
        }
        // gcd violation
        assert!(lambda_conjecture(&g("4"), 3, 1).is_err());
        assert!(lambda_conjecture(&g("7"), 1, 1).is_err());
    }
}
