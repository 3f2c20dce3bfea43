//! Tight contact structures on lens spaces `L(p, q)`.

use num_integer::Integer;

use crate::error::{Error, Result};

/// Expansion `-p/q = r_0 - 1/(r_1 - 1/(... - 1/r_k))` with every `r_i <= -2`.
pub fn negative_continued_fraction(p: u64, q: u64) -> Result<Vec<i64>> {
    check(p, q)?;
    let (mut p, mut q) = (p, q);
    let mut out = Vec::new();
    while q != 0 {
        let c = p.div_ceil(q);
        out.push(-(c as i64));
        (p, q) = (q, c * q - p);
    }
    Ok(out)
}

/// `|(r_0 + 1)(r_1 + 1)...(r_k + 1)|`.
pub fn tight_contact_count(p: u64, q: u64) -> Result<u128> {
    Ok(negative_continued_fraction(p, q)?
        .iter()
        .map(|r| (r + 1).unsigned_abs() as u128)
        .product())
}

fn check(p: u64, q: u64) -> Result<()> {
    if !(p > q && q > 0) || p.gcd(&q) != 1 {
        return Err(Error::Domain(format!(
            "lens space L({p},{q}) needs p > q > 0 and gcd(p, q) = 1"
        )));
    }
    Ok(())
}
