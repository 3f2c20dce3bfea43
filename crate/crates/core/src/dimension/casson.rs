//! Casson invariant of Brieskorn homology spheres `L(a0, a1, a2)` as one
//! eighth of the Milnor fiber signature, the signature being a lattice point
//! count over the box `0 < k_i < a_i`.

use num_integer::Integer;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Pairwise coprime exponents, each at least 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CassonInput {
    a: [u64; 3],
}

impl CassonInput {
    pub fn new(a0: u64, a1: u64, a2: u64) -> Result<Self> {
        let a = [a0, a1, a2];
        if a.iter().any(|&x| x < 2) {
            return Err(Error::Domain("Casson exponents must be at least 2".into()));
        }
        if a0.gcd(&a1) != 1 || a0.gcd(&a2) != 1 || a1.gcd(&a2) != 1 {
            return Err(Error::Domain(format!(
                "({a0},{a1},{a2}) is not pairwise relatively prime"
            )));
        }
        Ok(CassonInput { a })
    }

    pub fn exponents(&self) -> [u64; 3] {
        self.a
    }
}

/// `σ⁺ - σ⁻`, counting `(k0,k1,k2)` by whether `Σ k_i/a_i mod 2` lies in
/// `(0,1)` or `(1,2)`.
pub fn milnor_signature(input: &CassonInput) -> i64 {
    let [a0, a1, a2] = input.a.map(u128::from);
    let l = a0 * a1 * a2;
    let (c0, c1, c2) = (a1 * a2, a0 * a2, a0 * a1);
    (1..a0)
        .into_par_iter()
        .map(|k0| {
            let mut tau = 0i64;
            for k1 in 1..a1 {
                for k2 in 1..a2 {
                    let r = (k0 * c0 + k1 * c1 + k2 * c2) % (2 * l);
                    if r > 0 && r < l {
                        tau += 1;
                    } else if r > l {
                        tau -= 1;
                    }
                }
            }
            tau
        })
        .sum()
}

pub fn casson(input: &CassonInput) -> Result<i64> {
    let tau = milnor_signature(input);
    if tau % 8 != 0 {
        return Err(Error::SignatureNotDivisible(tau));
    }
    Ok(tau / 8)
}
