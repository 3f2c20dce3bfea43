//! Middle homology `H_{n-1}` of a link.
//!
//! The free rank comes from the Milnor–Orlik alternating sum over all
//! `2^{n+1}` index subsets; the torsion from Orlik's inductive gcd procedure.
//! Everything is exact: integers are arbitrary precision and the `k` values
//! are rationals, so the threshold tests `k >= j` never see rounding.
//!
//! Subsets of `{0, ..., n}` are bitmasks. They are visited in increasing
//! popcount and then increasing numeric order, so every proper subset of a
//! mask is finished before the mask itself.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::link::{FractionalWeights, PolynomialClass, WeightedLink};

/// Largest `n + 1` accepted by the subset enumerations.
pub const MAX_VARIABLES: usize = 22;

/// Whether the torsion algorithm is a theorem for this input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Applicability {
    /// Links of real dimension 3 or 5.
    ProvenLowDimension,
    ProvenBp,
    ProvenOr,
    Conjectural,
}

impl Applicability {
    pub fn for_link(link: &WeightedLink, class: PolynomialClass) -> Self {
        match (link.n(), class) {
            (2 | 3, _) => Applicability::ProvenLowDimension,
            (_, PolynomialClass::Bp) => Applicability::ProvenBp,
            (_, PolynomialClass::Or) => Applicability::ProvenOr,
            _ => Applicability::Conjectural,
        }
    }

    pub fn is_proven(self) -> bool {
        self != Applicability::Conjectural
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyGroup {
    pub betti: BigUint,
    /// `d_1, d_2, ...` with `d_{j+1} | d_j`, entries equal to one removed.
    pub torsion: Vec<BigUint>,
    pub applicability: Applicability,
}

impl HomologyGroup {
    /// Torsion split into prime powers, sorted ascending.
    pub fn prime_powers(&self) -> Vec<BigUint> {
        let mut out: Vec<BigUint> = self
            .torsion
            .iter()
            .flat_map(|d| {
                factorize(d)
                    .into_iter()
                    .map(|(p, e)| num_traits::pow(p, e as usize))
            })
            .collect();
        out.sort();
        out
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// `Z/d1 ⊕ Z/d2 ⊕ ...`, or `0` when there is no torsion.
    pub fn torsion_string(&self) -> String {
        if self.torsion.is_empty() {
            "0".to_string()
        } else {
            self.torsion
                .iter()
                .map(|d| format!("Z/{d}"))
                .collect::<Vec<_>>()
                .join(" ⊕ ")
        }
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "b={} torsion={} [{}]",
            self.betti,
            self.torsion_string(),
            if self.applicability.is_proven() {
                "proven"
            } else {
                "conjectural"
            }
        )
    }
}

/// The `c` and `k` values of Orlik's procedure, indexed by subset bitmask.
#[derive(Debug, Clone)]
pub struct OrlikTable {
    n: usize,
    /// `None` only for the full index set, which is never needed.
    c: Vec<Option<BigUint>>,
    k: Vec<BigRational>,
}

impl OrlikTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn c(&self, mask: usize) -> Option<&BigUint> {
        self.c.get(mask).and_then(Option::as_ref)
    }

    pub fn k(&self, mask: usize) -> &BigRational {
        &self.k[mask]
    }

    /// Masks in the order the table was built.
    pub fn subsets(&self) -> Vec<usize> {
        subset_order(self.n + 1)
    }
}

/// All masks over `len` bits ordered by popcount, then value.
pub fn subset_order(len: usize) -> Vec<usize> {
    let mut masks: Vec<usize> = (0..1usize << len).collect();
    masks.sort_by_key(|&m| (m.count_ones(), m));
    masks
}

pub fn mask_indices(mask: usize) -> Vec<usize> {
    (0..usize::BITS as usize)
        .filter(|i| mask >> i & 1 == 1)
        .collect()
}

fn check_size(fw: &FractionalWeights) -> Result<()> {
    if fw.len() > MAX_VARIABLES {
        return Err(Error::Domain(format!(
            "{} variables exceed the subset enumeration limit of {MAX_VARIABLES}",
            fw.len()
        )));
    }
    Ok(())
}

/// `Π (u_i / v_i) / lcm(u_i)` over the subset; 1 for the empty set.
fn subset_terms(fw: &FractionalWeights) -> Vec<BigRational> {
    let len = fw.len();
    let mut terms = Vec::with_capacity(1 << len);
    terms.push(BigRational::one());
    // Build each mask from the mask without its top bit, carrying the
    // running product and lcm.
    let mut products = vec![BigRational::one()];
    let mut lcms = vec![BigUint::one()];
    for mask in 1usize..1 << len {
        let top = usize::BITS as usize - 1 - mask.leading_zeros() as usize;
        let rest = mask & !(1 << top);
        let product = &products[rest]
            * BigRational::new(
                BigInt::from(fw.u[top].clone()),
                BigInt::from(fw.v[top].clone()),
            );
        let lcm = lcms[rest].lcm(&fw.u[top]);
        terms.push(&product / BigRational::from_integer(BigInt::from(lcm.clone())));
        products.push(product);
        lcms.push(lcm);
    }
    terms
}

fn sign(exponent: usize) -> BigRational {
    if exponent.is_multiple_of(2) {
        BigRational::one()
    } else {
        -BigRational::one()
    }
}

/// `b_{n-1}` by the alternating subset sum.
pub fn betti_number(fw: &FractionalWeights) -> Result<BigUint> {
    check_size(fw)?;
    let len = fw.len();
    let terms = subset_terms(fw);
    let sum: BigRational = terms
        .iter()
        .enumerate()
        .map(|(mask, t)| sign(len - mask.count_ones() as usize) * t)
        .sum();
    if !sum.is_integer() || sum.is_negative() {
        return Err(Error::NonIntegralBetti(sum.to_string()));
    }
    Ok(sum.to_integer().to_biguint().expect("non-negative"))
}

/// Builds the `c` and `k` tables.
///
/// `c_∅ = gcd(u)`, and for a nonempty proper subset `S` the gcd of the `u`
/// outside `S` divided by the product of `c` over the proper subsets of `S`.
/// `k_S = ε_{n-s+1} Σ_{T ⊆ S} (-1)^{s-t} term(T)`, where the sum runs over
/// every subset of `S`, `S` itself included.
pub fn orlik_table(fw: &FractionalWeights) -> Result<OrlikTable> {
    check_size(fw)?;
    let len = fw.len();
    let n = len - 1;
    let full = (1usize << len) - 1;
    let terms = subset_terms(fw);
    let mut c: Vec<Option<BigUint>> = vec![None; 1 << len];
    let mut k = vec![BigRational::zero(); 1 << len];

    for mask in subset_order(len) {
        let s = mask.count_ones() as usize;
        // ε vanishes when n - s + 1 is even.
        if (n + 1 - s) % 2 == 1 {
            let mut total = BigRational::zero();
            for_each_submask(mask, |sub| {
                total += sign(s - sub.count_ones() as usize) * &terms[sub];
            });
            k[mask] = total;
        }

        if mask == full {
            continue;
        }
        let numerator = (0..len)
            .filter(|i| mask >> i & 1 == 0)
            .fold(BigUint::zero(), |g, i| g.gcd(&fw.u[i]));
        let mut denominator = BigUint::one();
        for_each_submask(mask, |sub| {
            if sub != mask {
                denominator *= c[sub].as_ref().expect("proper subsets come first");
            }
        });
        let (q, r) = numerator.div_rem(&denominator);
        if !r.is_zero() || q.is_zero() {
            return Err(Error::OrlikDivision {
                subset: mask_indices(mask),
                numerator: numerator.to_string(),
                denominator: denominator.to_string(),
            });
        }
        c[mask] = Some(q);
    }
    Ok(OrlikTable { n, c, k })
}

fn for_each_submask(mask: usize, mut f: impl FnMut(usize)) {
    let mut sub = mask;
    loop {
        f(sub);
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & mask;
    }
}

/// Longest torsion list `torsion` will build.
pub const MAX_TORSION_FACTORS: usize = 1 << 20;

/// `d_j = Π_{k_S >= j} c_S` for `j = 1..=floor(max k)`, ones removed.
///
/// Only subsets with `c_S > 1` can change a product, so `d_j` is a step
/// function of `j` that jumps at `floor(k_S)` for those subsets.
pub fn torsion(table: &OrlikTable) -> Result<Vec<BigUint>> {
    let mut steps: Vec<(BigInt, &BigUint)> = table
        .k
        .iter()
        .zip(&table.c)
        .filter_map(|(k, c)| {
            let c = c.as_ref()?;
            let floor = k.floor().to_integer();
            (!c.is_one() && floor.is_positive()).then_some((floor, c))
        })
        .collect();
    steps.sort_by(|a, b| b.0.cmp(&a.0));
    let Some((top, _)) = steps.first() else {
        return Ok(Vec::new());
    };
    let top = top
        .to_usize()
        .filter(|&r| r <= MAX_TORSION_FACTORS)
        .ok_or_else(|| {
            Error::Domain(format!(
                "torsion has {top} invariant factors, more than the limit {MAX_TORSION_FACTORS}"
            ))
        })?;
    let mut out = Vec::with_capacity(top);
    let mut product = BigUint::one();
    let mut i = 0;
    // Walk j downward, multiplying in each subset once j reaches floor(k_S).
    let mut rev = Vec::with_capacity(top);
    for j in (1..=top).rev() {
        while i < steps.len() && steps[i].0 >= BigInt::from(j) {
            product *= steps[i].1;
            i += 1;
        }
        rev.push(product.clone());
    }
    out.extend(rev.into_iter().rev());
    Ok(out)
}

/// Betti number and torsion of `H_{n-1}`.
pub fn homology(link: &WeightedLink, class: PolynomialClass) -> Result<HomologyGroup> {
    let fw = link.fractional_weights();
    let betti = betti_number(&fw)?;
    let table = orlik_table(&fw)?;
    let torsion = torsion(&table)?;
    debug_assert!(torsion.windows(2).all(|p| (&p[0] % &p[1]).is_zero()));
    Ok(HomologyGroup {
        betti,
        torsion,
        applicability: Applicability::for_link(link, class),
    })
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(value: &BigUint) -> Vec<(BigUint, u32)> {
    let mut out = Vec::new();
    let mut rest = value.clone();
    let mut p = BigUint::from(2u8);
    while &p * &p <= rest {
        let mut e = 0;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += if p == BigUint::from(2u8) { 1u8 } else { 2u8 };
    }
    if rest > BigUint::one() {
        out.push((rest, 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::link::BPExponents;

    fn ints(v: &[BigUint]) -> Vec<u64> {
        v.iter().map(|x| x.to_u64().unwrap()).collect()
    }

    fn hom(w: &[u64], d: u64) -> HomologyGroup {
        homology(
            &WeightedLink::from_u64(w, d).unwrap(),
            PolynomialClass::Generic,
        )
        .unwrap()
    }

    #[test]
    fn betti_examples() {
        let b = |w: &[u64], d| {
            betti_number(&WeightedLink::from_u64(w, d).unwrap().fractional_weights())
                .unwrap()
                .to_u64()
                .unwrap()
        };
        assert_eq!(b(&[1, 1, 1, 1, 3], 6), 104);
        assert_eq!(b(&[1, 1, 1, 4, 6], 12), 222);
        assert_eq!(b(&[15, 10, 6], 30), 0);
        assert_eq!(b(&[1, 1, 1, 1, 1], 3), 10);
    }

    #[test]
    fn fermat_cubic_table() {
        let fw = WeightedLink::from_u64(&[1; 5], 3).unwrap().fractional_weights();
        let table = orlik_table(&fw).unwrap();
        assert_eq!(table.c(0).unwrap(), &BigUint::from(3u8));
        for mask in 1..31 {
            assert!(table.c(mask).unwrap().is_one(), "mask {mask}");
        }
        assert!(table.c(31).is_none());
        assert_eq!(ints(&torsion(&table).unwrap()), vec![3]);
    }

    #[test]
    fn unit_u_gives_trivial_table() {
        // d = 1 makes every u_i = 1.
        let fw = WeightedLink::from_u64(&[1, 1, 1, 1], 1).unwrap().fractional_weights();
        let table = orlik_table(&fw).unwrap();
        for mask in 0..15 {
            assert!(table.c(mask).unwrap().is_one());
        }
        assert!(torsion(&table).unwrap().is_empty());
    }

    #[test]
    fn k_vanishes_on_even_parity() {
        let fw = WeightedLink::from_u64(&[1, 2, 3, 3, 4], 12)
            .unwrap()
            .fractional_weights();
        let table = orlik_table(&fw).unwrap();
        let n = table.n();
        for mask in table.subsets() {
            let s = mask.count_ones() as usize;
            if (n + 1 - s).is_multiple_of(2) {
                assert!(table.k(mask).is_zero());
            }
        }
    }

    #[test]
    fn torsion_examples() {
        assert_eq!(ints(&hom(&[1; 5], 4).torsion), vec![4]);
        assert!(hom(&[1, 1, 1, 4, 6], 12).torsion.is_empty());
        assert_eq!(ints(&hom(&[1, 1, 1, 1, 3], 6).torsion), vec![2]);

        let a = BPExponents::from_u64(&[16, 4, 4, 4, 4]).unwrap();
        let h = homology(&a.to_link(), PolynomialClass::Bp).unwrap();
        let mut expected = vec![16];
        expected.extend([4; 20]);
        assert_eq!(ints(&h.torsion), expected);
        assert_eq!(h.betti, BigUint::from(60u8));
    }

    #[test]
    fn homology_examples() {
        let h = homology(
            &BPExponents::from_u64(&[3; 5]).unwrap().to_link(),
            PolynomialClass::Bp,
        )
        .unwrap();
        assert_eq!(h.betti, BigUint::from(10u8));
        assert_eq!(ints(&h.torsion), vec![3]);
        assert_eq!(h.applicability, Applicability::ProvenBp);
        assert_eq!(h.to_string(), "b=10 torsion=Z/3 [proven]");

        let h = hom(&[1, 3, 3, 3], 6);
        assert_eq!(h.betti, BigUint::one());
        assert!(h.torsion.is_empty());
        assert_eq!(h.applicability, Applicability::ProvenLowDimension);

        let h = homology(
            &BPExponents::from_u64(&[2, 3, 11]).unwrap().to_link(),
            PolynomialClass::Bp,
        )
        .unwrap();
        assert!(h.betti.is_zero() && h.torsion.is_empty());
        assert_eq!(h.to_string(), "b=0 torsion=0 [proven]");

        assert_eq!(
            hom(&[1, 1, 1, 1, 3], 6).applicability,
            Applicability::Conjectural
        );
    }

    #[test]
    fn prime_powers_split_mixed_orders() {
        let h = hom(&[1, 2, 3, 3, 4], 12);
        assert_eq!(ints(&h.torsion), vec![6, 6, 3]);
        assert_eq!(ints(&h.prime_powers()), vec![2, 2, 3, 3, 3]);
    }

    #[test]
    fn factorize_small() {
        let f = factorize(&BigUint::from(360u32));
        let f: Vec<(u64, u32)> = f.into_iter().map(|(p, e)| (p.to_u64().unwrap(), e)).collect();
        assert_eq!(f, vec![(2, 3), (3, 2), (5, 1)]);
        assert!(factorize(&BigUint::one()).is_empty());
        assert_eq!(factorize(&BigUint::from(97u8)).len(), 1);
    }

    #[test]
    fn oversized_input_is_a_domain_error() {
        let link = WeightedLink::from_u64(&[1; 30], 2).unwrap();
        assert!(matches!(
            betti_number(&link.fractional_weights()),
            Err(Error::Domain(_))
        ));
    }
}
