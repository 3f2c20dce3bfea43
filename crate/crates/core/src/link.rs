//! Weighted links, Brieskorn–Pham exponents and fractional weights.
//!
//! A link is presented by a weight vector `w = (w_0, ..., w_n)` and a degree
//! `d`. Nothing here checks that some polynomial of that weight and degree
//! actually has an isolated singularity at the origin; callers are trusted to
//! pass genuine presentations.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sign of the index `|w| - d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrichotomyType {
    Positive,
    Negative,
    Null,
}

impl fmt::Display for TrichotomyType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TrichotomyType::Positive => "positive",
            TrichotomyType::Negative => "negative",
            TrichotomyType::Null => "null",
        })
    }
}

/// The `(w, d)` presentation of a link of real dimension `2n - 1`.
///
/// Weights keep their input order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightedLink {
    weights: Vec<BigUint>,
    degree: BigUint,
}

impl WeightedLink {
    pub fn new(weights: Vec<BigUint>, degree: BigUint) -> Result<Self> {
        if weights.len() < 3 {
            return Err(Error::InvalidDimension(weights.len()));
        }
        if weights.iter().any(Zero::is_zero) {
            return Err(Error::InvalidLink("weights must be positive".into()));
        }
        if degree.is_zero() {
            return Err(Error::InvalidLink("degree must be positive".into()));
        }
        Ok(WeightedLink { weights, degree })
    }

    pub fn from_u64(weights: &[u64], degree: u64) -> Result<Self> {
        Self::new(
            weights.iter().map(|&w| BigUint::from(w)).collect(),
            BigUint::from(degree),
        )
    }

    pub fn weights(&self) -> &[BigUint] {
        &self.weights
    }

    pub fn degree(&self) -> &BigUint {
        &self.degree
    }

    /// `n`: the ambient space is `C^{n+1}`.
    pub fn n(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn weight_sum(&self) -> BigUint {
        self.weights.iter().sum()
    }

    /// `I = |w| - d`.
    pub fn index(&self) -> BigInt {
        BigInt::from(self.weight_sum()) - BigInt::from(self.degree.clone())
    }

    pub fn min_weight(&self) -> &BigUint {
        self.weights.iter().min().expect("at least three weights")
    }

    pub fn classify_type(&self) -> TrichotomyType {
        let index = self.index();
        if index.is_positive() {
            TrichotomyType::Positive
        } else if index.is_negative() {
            TrichotomyType::Negative
        } else {
            TrichotomyType::Null
        }
    }

    pub fn fractional_weights(&self) -> FractionalWeights {
        let (u, v) = self
            .weights
            .iter()
            .map(|w| {
                let g = self.degree.gcd(w);
                (&self.degree / &g, w / &g)
            })
            .unzip();
        FractionalWeights { u, v }
    }

    /// Key used to deduplicate catalog entries: sorted weights plus degree.
    pub fn canonical_key(&self) -> String {
        let mut sorted = self.weights.clone();
        sorted.sort();
        format!("w={} d={}", join(&sorted), self.degree)
    }
}

impl fmt::Display for WeightedLink {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w={} d={}", join(&self.weights), self.degree)
    }
}

/// Exponents of a Brieskorn–Pham polynomial `z_0^{a_0} + ... + z_n^{a_n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BPExponents {
    exponents: Vec<BigUint>,
}

impl BPExponents {
    pub fn new(exponents: Vec<BigUint>) -> Result<Self> {
        if exponents.len() < 3 {
            return Err(Error::InvalidDimension(exponents.len()));
        }
        if exponents.iter().any(|a| *a < BigUint::from(2u8)) {
            return Err(Error::InvalidLink("BP exponents must be at least 2".into()));
        }
        Ok(BPExponents { exponents })
    }

    pub fn from_u64(exponents: &[u64]) -> Result<Self> {
        Self::new(exponents.iter().map(|&a| BigUint::from(a)).collect())
    }

    pub fn exponents(&self) -> &[BigUint] {
        &self.exponents
    }

    pub fn n(&self) -> usize {
        self.exponents.len() - 1
    }

    pub fn degree(&self) -> BigUint {
        self.exponents
            .iter()
            .fold(BigUint::one(), |acc, a| acc.lcm(a))
    }

    /// `d = lcm(a)`, `w_i = d / a_i`.
    pub fn to_link(&self) -> WeightedLink {
        let d = self.degree();
        let weights = self.exponents.iter().map(|a| &d / a).collect();
        WeightedLink { weights, degree: d }
    }

    /// `Σ 1/a_i` as an exact rational.
    pub fn reciprocal_sum(&self) -> BigRational {
        self.exponents
            .iter()
            .map(|a| BigRational::new(BigInt::one(), BigInt::from(a.clone())))
            .sum()
    }

    pub fn pairwise_coprime(&self) -> bool {
        let a = &self.exponents;
        (0..a.len()).all(|i| ((i + 1)..a.len()).all(|j| a[i].gcd(&a[j]).is_one()))
    }
}

impl fmt::Display for BPExponents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "bp={}", join(&self.exponents))
    }
}

/// Reduced pairs `d / w_i = u_i / v_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalWeights {
    pub u: Vec<BigUint>,
    pub v: Vec<BigUint>,
}

impl FractionalWeights {
    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }
}

/// Which polynomial class a link came from; decides whether the torsion
/// algorithm is a theorem for it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolynomialClass {
    /// Brieskorn–Pham.
    Bp,
    /// Orlik–Randell chain type `z_0^{a_0} + z_0 z_1^{a_1} + ... + z_{n-1} z_n^{a_n}`.
    Or,
    #[default]
    Generic,
}

impl FromStr for PolynomialClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bp" => Ok(PolynomialClass::Bp),
            "or" => Ok(PolynomialClass::Or),
            "generic" => Ok(PolynomialClass::Generic),
            other => Err(Error::Parse(format!("unknown polynomial class `{other}`"))),
        }
    }
}

/// A link as the user wrote it: either `w=... d=...` or `bp=...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Presentation {
    Weighted(WeightedLink),
    Bp(BPExponents),
}

impl Presentation {
    pub fn link(&self) -> WeightedLink {
        match self {
            Presentation::Weighted(l) => l.clone(),
            Presentation::Bp(a) => a.to_link(),
        }
    }

    pub fn bp(&self) -> Option<&BPExponents> {
        match self {
            Presentation::Bp(a) => Some(a),
            Presentation::Weighted(_) => None,
        }
    }

    pub fn class(&self) -> PolynomialClass {
        match self {
            Presentation::Bp(_) => PolynomialClass::Bp,
            Presentation::Weighted(_) => PolynomialClass::Generic,
        }
    }

    pub fn canonical_key(&self) -> String {
        self.link().canonical_key()
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Presentation::Weighted(l) => l.fmt(f),
            Presentation::Bp(a) => a.fmt(f),
        }
    }
}

fn parse_list(value: &str) -> Result<Vec<BigUint>> {
    value
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<BigUint>()
                .map_err(|_| Error::Parse(format!("`{tok}` is not a non-negative integer")))
        })
        .collect()
}

impl FromStr for Presentation {
    type Err = Error;

    /// Parses `w=1,1,1,4,6 d=12` or `bp=2,3,5`.
    fn from_str(s: &str) -> Result<Self> {
        let mut weights = None;
        let mut degree = None;
        let mut bp = None;
        for token in s.split_whitespace() {
            let (key, value) = token
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got `{token}`")))?;
            match key {
                "w" => weights = Some(parse_list(value)?),
                "d" => {
                    degree = Some(
                        value
                            .parse::<BigUint>()
                            .map_err(|_| Error::Parse(format!("bad degree `{value}`")))?,
                    )
                }
                "bp" => bp = Some(parse_list(value)?),
                other => return Err(Error::Parse(format!("unknown key `{other}`"))),
            }
        }
        match (weights, degree, bp) {
            (None, None, Some(a)) => Ok(Presentation::Bp(BPExponents::new(a)?)),
            (Some(w), Some(d), None) => Ok(Presentation::Weighted(WeightedLink::new(w, d)?)),
            _ => Err(Error::Parse(
                "expected either `w=<list> d=<int>` or `bp=<list>`".into(),
            )),
        }
    }
}

pub(crate) fn join(values: &[BigUint]) -> String {
    values
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}
