//! Sasaki–Einstein existence and obstruction tests for links.
//!
//! All inequalities are strict and evaluated in exact rationals; equality is
//! never treated as satisfying a bound.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::link::{BPExponents, TrichotomyType, WeightedLink};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeStatus {
    Exists,
    Obstructed,
    Unknown,
    /// Negative or null link: every Reeb field in its one-dimensional Sasaki
    /// cone carries an η-Einstein metric, and Sasaki–Einstein does not apply.
    EtaEinstein,
}

impl fmt::Display for SeStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeStatus::Exists => "exists",
            SeStatus::Obstructed => "obstructed",
            SeStatus::Unknown => "unknown",
            SeStatus::EtaEinstein => "eta-einstein",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    Lichnerowicz,
    CrudeKlt,
    BpKlt,
    GhigiKollar,
    None,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Lichnerowicz => "lichnerowicz",
            Rule::CrudeKlt => "crude_klt",
            Rule::BpKlt => "bp_klt",
            Rule::GhigiKollar => "ghigi_kollar",
            Rule::None => "none",
        })
    }
}

/// Outcome of the sharp test for pairwise coprime BP exponents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GhigiKollar {
    Exists,
    NotExists,
    NotApplicable,
}

/// What the inequalities say about a link.
///
/// `margin` is the slack of the deciding inequality, positive when it holds:
///
/// * `lichnerowicz`: `I - n·min w`
/// * `crude_klt`: `n/(n-1)·min_{i<j} w_i w_j - I·d`
/// * `bp_klt`, `ghigi_kollar`: the smaller slack of the two-sided window
///   (non-positive when the sharp test says no)
/// * `unknown`: the Lichnerowicz slack, which is non-positive
/// * η-Einstein branch: the index `I` itself
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExistenceVerdict {
    pub kind: TrichotomyType,
    pub status: SeStatus,
    pub rule: Rule,
    pub margin: BigRational,
}

impl fmt::Display for ExistenceVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "type={} status={} rule={} margin={}",
            self.kind,
            self.status,
            self.rule,
            format_rational(&self.margin)
        )
    }
}

/// `p/q`, always with an explicit denominator.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn int(v: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(v.clone()))
}

fn ratio(numer: usize, denom: usize) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

/// `I - n·min w`.
pub fn lichnerowicz_margin(link: &WeightedLink) -> BigRational {
    let bound = BigInt::from(link.n()) * BigInt::from(link.min_weight().clone());
    BigRational::from_integer(link.index() - bound)
}

/// True iff the link is positive and `I > n·min_i w_i`.
pub fn lichnerowicz_obstruction(link: &WeightedLink) -> bool {
    link.index().is_positive() && lichnerowicz_margin(link).is_positive()
}

/// `n/(n-1)·min_{i<j} w_i w_j - I·d`.
pub fn crude_klt_margin(link: &WeightedLink) -> BigRational {
    let w = link.weights();
    let n = link.n();
    let min_pair = (0..w.len())
        .flat_map(|i| ((i + 1)..w.len()).map(move |j| &w[i] * &w[j]))
        .min()
        .expect("at least two weights");
    ratio(n, n - 1) * int(&min_pair)
        - BigRational::from_integer(link.index() * BigInt::from(link.degree().clone()))
}

/// Sufficient condition `I·d < n/(n-1)·min_{i<j} w_i w_j` for positive links.
/// Always false for non-positive links.
pub fn crude_klt(link: &WeightedLink) -> bool {
    link.index().is_positive() && crude_klt_margin(link).is_positive()
}

/// `b_j = gcd(a_j, lcm{a_i : i != j})`.
pub fn bp_b_values(a: &BPExponents) -> Vec<BigUint> {
    let e = a.exponents();
    (0..e.len())
        .map(|j| {
            let c = e
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != j)
                .fold(BigUint::one(), |acc, (_, x)| acc.lcm(x));
            e[j].gcd(&c)
        })
        .collect()
}

/// Slack of `Σ 1/a_i < 1 + n/(n-1)·min{1/a_i, 1/(b_j b_k)}`.
fn bp_klt_upper_margin(a: &BPExponents) -> BigRational {
    let e = a.exponents();
    let b = bp_b_values(a);
    let n = a.n();
    let min_a = e
        .iter()
        .map(|x| BigRational::new(BigInt::one(), BigInt::from(x.clone())))
        .min()
        .expect("nonempty");
    let min_b = (0..b.len())
        .flat_map(|j| ((j + 1)..b.len()).map(move |k| (j, k)))
        .map(|(j, k)| BigRational::new(BigInt::one(), BigInt::from(&b[j] * &b[k])))
        .min()
        .expect("at least two exponents");
    let bound = BigRational::one() + ratio(n, n - 1) * min_a.min(min_b);
    bound - a.reciprocal_sum()
}

fn require_positive(a: &BPExponents) -> Result<BigRational> {
    let lower = a.reciprocal_sum() - BigRational::one();
    if !lower.is_positive() {
        return Err(Error::Domain(format!(
            "{a} is not positive: Σ1/a_i = {}",
            format_rational(&a.reciprocal_sum())
        )));
    }
    Ok(lower)
}

/// Two-sided klt window for BP links. Errors unless `Σ 1/a_i > 1`.
pub fn bp_klt_window(a: &BPExponents) -> Result<bool> {
    Ok(bp_klt_window_margin(a)?.is_positive())
}

pub fn bp_klt_window_margin(a: &BPExponents) -> Result<BigRational> {
    let lower = require_positive(a)?;
    Ok(lower.min(bp_klt_upper_margin(a)))
}

/// Slack of `1 < Σ 1/a_i < 1 + n·min 1/a_i`, smaller side.
pub fn ghigi_kollar_margin(a: &BPExponents) -> BigRational {
    let sum = a.reciprocal_sum();
    let max_a = a.exponents().iter().max().expect("nonempty");
    let upper = BigRational::one()
        + BigRational::new(BigInt::from(a.n()), BigInt::from(max_a.clone()))
        - &sum;
    (sum - BigRational::one()).min(upper)
}

/// Sharp test, applicable only to pairwise coprime exponents.
pub fn ghigi_kollar(a: &BPExponents) -> GhigiKollar {
    if !a.pairwise_coprime() {
        GhigiKollar::NotApplicable
    } else if ghigi_kollar_margin(a).is_positive() {
        GhigiKollar::Exists
    } else {
        GhigiKollar::NotExists
    }
}

/// Combines the tests. Negative and null links go to the η-Einstein branch;
/// otherwise the sharp test decides when it applies, then the obstruction,
/// then the two sufficient conditions.
pub fn verdict(link: &WeightedLink, source: Option<&BPExponents>) -> ExistenceVerdict {
    let kind = link.classify_type();
    if kind != TrichotomyType::Positive {
        return ExistenceVerdict {
            kind,
            status: SeStatus::EtaEinstein,
            rule: Rule::None,
            margin: BigRational::from_integer(link.index()),
        };
    }
    let make = |status, rule, margin| ExistenceVerdict {
        kind,
        status,
        rule,
        margin,
    };

    if let Some(a) = source {
        match ghigi_kollar(a) {
            GhigiKollar::Exists => {
                return make(SeStatus::Exists, Rule::GhigiKollar, ghigi_kollar_margin(a))
            }
            GhigiKollar::NotExists => {
                return make(
                    SeStatus::Obstructed,
                    Rule::GhigiKollar,
                    ghigi_kollar_margin(a),
                )
            }
            GhigiKollar::NotApplicable => {}
        }
    }

    let lich = lichnerowicz_margin(link);
    if lich.is_positive() {
        return make(SeStatus::Obstructed, Rule::Lichnerowicz, lich);
    }
    let crude = crude_klt_margin(link);
    if crude.is_positive() {
        return make(SeStatus::Exists, Rule::CrudeKlt, crude);
    }
    if let Some(a) = source {
        if let Ok(m) = bp_klt_window_margin(a) {
            if m.is_positive() {
                return make(SeStatus::Exists, Rule::BpKlt, m);
            }
        }
    }
    make(SeStatus::Unknown, Rule::None, lich)
}
