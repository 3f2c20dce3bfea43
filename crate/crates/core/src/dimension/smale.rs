//! Simply connected spin 5-manifolds in Smale's normal form
//! `k M_∞ # M_{m_1} # ... # M_{m_r}`, and the table of which of them carry
//! Sasaki–Einstein metrics.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::homology::{factorize, HomologyGroup};

/// `k` copies of `S^2 × S^3` plus `M_m` summands with `m_1 | m_2 | ...`.
/// `k = 0` with no summands is `S^5`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SmaleManifold {
    pub k: u64,
    pub m_list: Vec<u64>,
}

impl SmaleManifold {
    pub fn new(k: u64, mut m_list: Vec<u64>) -> Result<Self> {
        m_list.sort_unstable();
        if m_list.iter().any(|&m| m < 2) {
            return Err(Error::Domain("M_m summands need m >= 2".into()));
        }
        if m_list.windows(2).any(|p| p[1] % p[0] != 0) {
            return Err(Error::Domain(format!(
                "torsion orders {m_list:?} do not form a divisibility chain"
            )));
        }
        Ok(SmaleManifold { k, m_list })
    }

    pub fn is_sphere(&self) -> bool {
        self.k == 0 && self.m_list.is_empty()
    }
}

impl fmt::Display for SmaleManifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_sphere() {
            return f.write_str("S^5");
        }
        let mut parts = Vec::new();
        match self.k {
            0 => {}
            1 => parts.push("M_∞".to_string()),
            k => parts.push(format!("{k}M_∞")),
        }
        let mut i = 0;
        while i < self.m_list.len() {
            let m = self.m_list[i];
            let run = self.m_list[i..].iter().take_while(|&&x| x == m).count();
            parts.push(if run == 1 {
                format!("M_{m}")
            } else {
                format!("{run}M_{m}")
            });
            i += run;
        }
        f.write_str(&parts.join(" # "))
    }
}

/// Reads off the Smale form of `H_2` of a 5-dimensional link: `k` is the
/// Betti number, and the torsion must split as `(Z/m)^2` blocks.
pub fn smale_name(h: &HomologyGroup) -> Result<SmaleManifold> {
    let k = h
        .betti
        .to_u64()
        .ok_or_else(|| Error::Domain(format!("Betti number {} too large", h.betti)))?;

    // prime -> (exponent -> multiplicity)
    let mut by_prime: BTreeMap<u64, BTreeMap<u32, usize>> = BTreeMap::new();
    for d in &h.torsion {
        for (p, e) in factorize(d) {
            let p = p
                .to_u64()
                .ok_or_else(|| Error::Domain(format!("torsion prime {p} too large")))?;
            *by_prime.entry(p).or_default().entry(e).or_default() += 1;
        }
    }

    // Halve the multiplicities, then assemble invariant factors: the j-th
    // largest power of every prime goes into the j-th largest factor.
    let mut halves: Vec<Vec<u64>> = Vec::new();
    for (p, exps) in &by_prime {
        let mut powers = Vec::new();
        for (&e, &mult) in exps {
            if mult % 2 != 0 {
                return Err(Error::NotSmaleForm {
                    prime_power: format!("{p}^{e}"),
                    multiplicity: mult,
                });
            }
            powers.extend(std::iter::repeat_n(p.pow(e), mult / 2));
        }
        powers.sort_unstable_by(|a, b| b.cmp(a));
        halves.push(powers);
    }
    let count = halves.iter().map(Vec::len).max().unwrap_or(0);
    let m_list = (0..count)
        .map(|j| halves.iter().filter_map(|pw| pw.get(j)).product())
        .collect();
    SmaleManifold::new(k, m_list)
}

/// Where a manifold sits in the Sasaki–Einstein table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Table1Status {
    /// Listed, and its condition holds.
    Yes,
    /// Not listed: no Sasaki–Einstein metric.
    No,
    /// Listed, but the stated condition fails for these parameters, so the
    /// table does not settle the question.
    ConditionNotMet(&'static str),
    /// Listed with no condition given.
    Unresolved,
}

impl fmt::Display for Table1Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Table1Status::Yes => f.write_str("yes"),
            Table1Status::No => f.write_str("no"),
            Table1Status::ConditionNotMet(c) => write!(f, "unresolved (condition `{c}` fails)"),
            Table1Status::Unresolved => f.write_str("unresolved (no condition listed)"),
        }
    }
}

/// One row: a family of manifolds and the condition for a Sasaki–Einstein
/// metric. `condition = None` is an empty cell.
pub struct Table1Row {
    pub family: &'static str,
    pub matches: fn(&SmaleManifold) -> bool,
    pub condition_text: &'static str,
    pub condition: Option<fn(&SmaleManifold) -> bool>,
}

fn single_m(m: &SmaleManifold) -> Option<u64> {
    match m.m_list.as_slice() {
        [x] => Some(*x),
        _ => None,
    }
}

fn k_with_single_m_above_2(m: &SmaleManifold, k: u64) -> bool {
    m.k == k && single_m(m).is_some_and(|x| x > 2)
}

fn m_greater(m: &SmaleManifold, bound: u64) -> bool {
    single_m(m).is_some_and(|x| x > bound)
}

fn all_m_equal(m: &SmaleManifold, value: u64, count: usize) -> bool {
    m.m_list.len() == count && m.m_list.iter().all(|&x| x == value)
}

pub static TABLE1: &[Table1Row] = &[
    Table1Row {
        family: "kM_∞, k >= 0",
        matches: |m| m.m_list.is_empty(),
        condition_text: "any k",
        condition: Some(|_| true),
    },
    Table1Row {
        family: "8M_∞ # M_m, m > 2",
        matches: |m| k_with_single_m_above_2(m, 8),
        condition_text: "m > 4",
        condition: Some(|m| m_greater(m, 4)),
    },
    Table1Row {
        family: "7M_∞ # M_m, m > 2",
        matches: |m| k_with_single_m_above_2(m, 7),
        condition_text: "m > 2",
        condition: Some(|m| m_greater(m, 2)),
    },
    Table1Row {
        family: "6M_∞ # M_m, m > 2",
        matches: |m| k_with_single_m_above_2(m, 6),
        condition_text: "m > 2",
        condition: Some(|m| m_greater(m, 2)),
    },
    Table1Row {
        family: "5M_∞ # M_m, m > 2",
        matches: |m| k_with_single_m_above_2(m, 5),
        condition_text: "m > 11",
        condition: Some(|m| m_greater(m, 11)),
    },
    Table1Row {
        family: "4M_∞ # M_m, m > 2",
        matches: |m| k_with_single_m_above_2(m, 4),
        condition_text: "m > 4",
        condition: Some(|m| m_greater(m, 4)),
    },
    Table1Row {
        family: "3M_∞ # M_m, m > 2",
        matches: |m| k_with_single_m_above_2(m, 3),
        condition_text: "m = 7, 9 or m > 10",
        condition: Some(|m| single_m(m).is_some_and(|x| x == 7 || x == 9 || x > 10)),
    },
    Table1Row {
        family: "2M_∞ # M_m, m > 2",
        matches: |m| k_with_single_m_above_2(m, 2),
        condition_text: "m > 11",
        condition: Some(|m| m_greater(m, 11)),
    },
    Table1Row {
        family: "M_∞ # M_m, m > 2",
        matches: |m| k_with_single_m_above_2(m, 1),
        condition_text: "m > 11",
        condition: Some(|m| m_greater(m, 11)),
    },
    Table1Row {
        family: "M_m, m > 2",
        matches: |m| k_with_single_m_above_2(m, 0),
        condition_text: "m > 2",
        condition: Some(|m| m_greater(m, 2)),
    },
    Table1Row {
        family: "2M_5, 2M_4, 4M_3, M_∞ # 2M_4",
        matches: |m| {
            (m.k == 0
                && (all_m_equal(m, 5, 2) || all_m_equal(m, 4, 2) || all_m_equal(m, 3, 4)))
                || (m.k == 1 && all_m_equal(m, 4, 2))
        },
        condition_text: "yes",
        condition: Some(|_| true),
    },
    Table1Row {
        family: "kM_∞ # 2M_3",
        matches: |m| all_m_equal(m, 3, 2),
        condition_text: "k = 0",
        condition: Some(|m| m.k == 0),
    },
    Table1Row {
        family: "kM_∞ # 3M_3, k >= 0",
        matches: |m| all_m_equal(m, 3, 3),
        condition_text: "k = 0",
        condition: Some(|m| m.k == 0),
    },
    Table1Row {
        family: "kM_∞ # nM_2, k >= 0, n > 0",
        matches: |m| !m.m_list.is_empty() && m.m_list.iter().all(|&x| x == 2),
        condition_text: "(k, n) = (0, 1) or (1, n), n > 0",
        condition: Some(|m| (m.k == 0 && m.m_list.len() == 1) || m.k == 1),
    },
    Table1Row {
        family: "kM_∞ # M_m, k > 8, 2 < m < 12",
        matches: |m| m.k > 8 && single_m(m).is_some_and(|x| x > 2 && x < 12),
        condition_text: "",
        condition: None,
    },
];

pub fn table1_lookup(m: &SmaleManifold) -> Table1Status {
    match TABLE1.iter().find(|row| (row.matches)(m)) {
        None => Table1Status::No,
        Some(row) => match row.condition {
            None => Table1Status::Unresolved,
            Some(cond) if cond(m) => Table1Status::Yes,
            Some(_) => Table1Status::ConditionNotMet(row.condition_text),
        },
    }
}
