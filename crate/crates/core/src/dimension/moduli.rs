//! Monomial counts and the moduli dimension of a link.
//!
//! `h^0(P(w), O(k))` is modelled as the number of monomials of weighted
//! degree `k`, i.e. non-negative solutions of `Σ w_i m_i = k`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::link::WeightedLink;

/// Degrees above this are refused by the dynamic program.
pub const MAX_DEGREE: usize = 2_000_000;

/// Number of non-negative integer solutions of `Σ w_i m_i = k`.
pub fn count_monomials(weights: &[u64], k: usize) -> BigUint {
    let mut ways = vec![BigUint::zero(); k + 1];
    ways[0] = BigUint::from(1u8);
    for &w in weights {
        let w = w as usize;
        if w == 0 || w > k {
            continue;
        }
        for t in w..=k {
            let prev = ways[t - w].clone();
            ways[t] += prev;
        }
    }
    ways.swap_remove(k)
}

/// Published moduli counts for cross-checking, keyed by `(weights, degree)`.
const REFERENCE_VALUES: &[(&[u64], u64, i64)] = &[(&[1, 1, 1, 4, 6], 12, 266)];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuliReport {
    /// `h^0(O(d))`.
    pub h0_degree: BigUint,
    /// `Σ_i h^0(O(w_i))`.
    pub h0_weights: BigUint,
    /// `2·(h0_degree - h0_weights)`.
    pub value: BigInt,
    /// Literature value for this presentation, when one is on record.
    pub reference: Option<i64>,
}

impl ModuliReport {
    /// A negative count means the monomial model broke down for this input.
    pub fn is_negative(&self) -> bool {
        self.value < BigInt::zero()
    }

    pub fn delta(&self) -> Option<BigInt> {
        self.reference.map(|r| &self.value - BigInt::from(r))
    }
}

impl fmt::Display for ModuliReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "moduli={} h0(d)={} sum_h0(w_i)={}",
            self.value, self.h0_degree, self.h0_weights
        )?;
        if let (Some(r), Some(delta)) = (self.reference, self.delta()) {
            write!(f, " reference={r} delta={delta}")?;
        }
        Ok(())
    }
}

fn small(v: &BigUint, what: &str) -> Result<usize> {
    v.to_usize()
        .filter(|&x| x <= MAX_DEGREE)
        .ok_or_else(|| Error::Domain(format!("{what} {v} is too large for monomial counting")))
}

/// `2·(h^0(O(d)) - Σ_i h^0(O(w_i)))` under the monomial-count model.
pub fn moduli_dimension(link: &WeightedLink) -> Result<ModuliReport> {
    let weights = link
        .weights()
        .iter()
        .map(|w| small(w, "weight").map(|x| x as u64))
        .collect::<Result<Vec<u64>>>()?;
    let degree = small(link.degree(), "degree")?;
    Ok(moduli_from_weights(&weights, degree))
}

/// Same count for a bare weight list, without the link validity checks.
pub fn moduli_from_weights(weights: &[u64], degree: usize) -> ModuliReport {
    let h0_degree = count_monomials(weights, degree);
    let h0_weights: BigUint = weights
        .iter()
        .map(|&w| count_monomials(weights, w as usize))
        .sum();
    let value = 2 * (BigInt::from(h0_degree.clone()) - BigInt::from(h0_weights.clone()));
    let reference = REFERENCE_VALUES
        .iter()
        .find(|(w, d, _)| *w == weights && *d as usize == degree)
        .map(|(_, _, r)| *r);
    ModuliReport {
        h0_degree,
        h0_weights,
        value,
        reference,
    }
}
