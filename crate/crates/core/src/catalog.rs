//! Batch enumeration of Brieskorn–Pham families and a line-delimited JSON
//! catalog of computed records.
//!
//! A catalog file starts with a header line
//! `{"format":"sasaki-catalog","version":1}` followed by one record per line.
//! Files are only ever appended to, and a record whose canonical key is
//! already present is skipped.

use std::collections::HashSet;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dimension::{casson, moduli_dimension, smale_name, table1_lookup, CassonInput};
use crate::error::{Error, Result};
use crate::existence::{format_rational, verdict, Rule, SeStatus};
use crate::homology::{homology, Applicability, MAX_VARIABLES};
use crate::link::{BPExponents, Presentation, TrichotomyType};

pub const CATALOG_FORMAT: &str = "sasaki-catalog";
pub const CATALOG_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Largest number of tuples `enumerate_bp` agrees to walk.
pub const MAX_ENUMERATION: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct Header {
    format: String,
    version: u32,
}

impl Header {
    fn current() -> Self {
        Header {
            format: CATALOG_FORMAT.to_string(),
            version: CATALOG_VERSION,
        }
    }
}

/// Everything the pipeline knows about one link. Big integers are stored as
/// decimal strings so records survive any JSON reader.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogRecord {
    pub key: String,
    pub presentation: String,
    pub n: usize,
    #[serde(rename = "type")]
    pub kind: TrichotomyType,
    pub betti: Option<String>,
    pub torsion: Option<Vec<String>>,
    pub applicability: Option<Applicability>,
    pub status: Option<SeStatus>,
    pub rule: Option<Rule>,
    pub margin: Option<String>,
    pub smale: Option<String>,
    pub table1: Option<String>,
    pub casson: Option<i64>,
    pub moduli: Option<String>,
    pub moduli_reference: Option<i64>,
    pub errors: Vec<String>,
    pub tool_version: String,
    pub timestamp: Option<u64>,
}

impl CatalogRecord {
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("records always serialize")
    }

    pub fn from_line(line: &str) -> Result<Self> {
        serde_json::from_str(line).map_err(|e| Error::Parse(format!("catalog record: {e}")))
    }

    pub fn has_errors(&self) -> bool {
        !self.errors.is_empty()
    }

    pub fn stamped(mut self) -> Self {
        self.timestamp = Some(
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        );
        self
    }

    /// An otherwise empty record carrying a single error.
    fn failed(p: &Presentation, message: String) -> Self {
        let link = p.link();
        CatalogRecord {
            key: link.canonical_key(),
            presentation: p.to_string(),
            n: link.n(),
            kind: link.classify_type(),
            betti: None,
            torsion: None,
            applicability: None,
            status: None,
            rule: None,
            margin: None,
            smale: None,
            table1: None,
            casson: None,
            moduli: None,
            moduli_reference: None,
            errors: vec![message],
            tool_version: TOOL_VERSION.to_string(),
            timestamp: None,
        }
    }
}

fn note(errors: &mut Vec<String>, stage: &str, e: &Error) {
    errors.push(format!("{stage}: {e}"));
}

/// Runs every applicable computation on one presentation. Failures of a
/// stage are recorded in `errors` and do not stop later stages.
pub fn run_pipeline(p: &Presentation) -> CatalogRecord {
    let link = p.link();
    let mut rec = CatalogRecord::failed(p, String::new());
    rec.errors.clear();

    let h = homology(&link, p.class());
    match &h {
        Ok(h) => {
            rec.betti = Some(h.betti.to_string());
            rec.torsion = Some(h.torsion.iter().map(ToString::to_string).collect());
            rec.applicability = Some(h.applicability);
        }
        Err(e) => note(&mut rec.errors, "homology", e),
    }

    let v = verdict(&link, p.bp());
    rec.status = Some(v.status);
    rec.rule = Some(v.rule);
    rec.margin = Some(format_rational(&v.margin));

    if link.n() == 2 {
        if let Some(a) = p.bp().filter(|a| a.pairwise_coprime()) {
            let small: Option<Vec<u64>> = a.exponents().iter().map(ToPrimitive::to_u64).collect();
            match small.ok_or_else(|| Error::Domain("exponent too large".into())) {
                Ok(e) => match CassonInput::new(e[0], e[1], e[2]).and_then(|c| casson(&c)) {
                    Ok(l) => rec.casson = Some(l),
                    Err(e) => note(&mut rec.errors, "casson", &e),
                },
                Err(e) => note(&mut rec.errors, "casson", &e),
            }
        }
    }

    if link.n() == 3 {
        if let Ok(h) = &h {
            match smale_name(h) {
                Ok(m) => {
                    rec.table1 = Some(table1_lookup(&m).to_string());
                    rec.smale = Some(m.to_string());
                }
                Err(e) => note(&mut rec.errors, "smale", &e),
            }
        }
    }

    match moduli_dimension(&link) {
        Ok(m) => {
            rec.moduli = Some(m.value.to_string());
            rec.moduli_reference = m.reference;
        }
        Err(e) => note(&mut rec.errors, "moduli", &e),
    }
    rec
}

fn panic_message(payload: &(dyn std::any::Any + Send)) -> String {
    payload
        .downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| payload.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "unknown panic".into())
}

/// Runs `f` over `items` on `jobs` worker threads. Output order matches input
/// order; a panicking item becomes a record with an `internal` error.
pub fn run_batch_with<F>(items: &[Presentation], jobs: usize, f: F) -> Result<Vec<CatalogRecord>>
where
    F: Fn(&Presentation) -> CatalogRecord + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    Ok(pool.install(|| {
        items
            .par_iter()
            .map(|p| {
                catch_unwind(AssertUnwindSafe(|| f(p))).unwrap_or_else(|payload| {
                    CatalogRecord::failed(p, format!("internal: {}", panic_message(&*payload)))
                })
            })
            .collect()
    }))
}

pub fn run_batch(items: &[Presentation], jobs: usize) -> Result<Vec<CatalogRecord>> {
    run_batch_with(items, jobs, run_pipeline)
}

/// Records keyed by canonical link, in insertion order.
#[derive(Debug, Default, Clone)]
pub struct Catalog {
    records: Vec<CatalogRecord>,
    keys: HashSet<String>,
}

impl Catalog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn records(&self) -> &[CatalogRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn contains(&self, key: &str) -> bool {
        self.keys.contains(key)
    }

    /// Returns false when a record with the same key is already present.
    pub fn insert(&mut self, rec: CatalogRecord) -> bool {
        if !self.keys.insert(rec.key.clone()) {
            return false;
        }
        self.records.push(rec);
        true
    }

    pub fn read(reader: impl BufRead) -> Result<Self> {
        let mut lines = reader.lines();
        let header = match lines.next() {
            None => return Ok(Self::new()),
            Some(line) => line.map_err(io_err)?,
        };
        let header: Header = serde_json::from_str(&header)
            .map_err(|e| Error::Parse(format!("catalog header: {e}")))?;
        if header.format != CATALOG_FORMAT || header.version != CATALOG_VERSION {
            return Err(Error::Parse(format!(
                "unsupported catalog {} version {}",
                header.format, header.version
            )));
        }
        let mut cat = Self::new();
        for line in lines {
            let line = line.map_err(io_err)?;
            if !line.trim().is_empty() {
                cat.insert(CatalogRecord::from_line(&line)?);
            }
        }
        Ok(cat)
    }

    /// A missing file is an empty catalog.
    pub fn load(path: &Path) -> Result<Self> {
        match File::open(path) {
            Ok(f) => Self::read(BufReader::new(f)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(Self::new()),
            Err(e) => Err(io_err(e)),
        }
    }

    pub fn write(&self, mut out: impl Write) -> Result<()> {
        writeln!(out, "{}", header_line()).map_err(io_err)?;
        for r in &self.records {
            writeln!(out, "{}", r.to_line()).map_err(io_err)?;
        }
        Ok(())
    }

    /// Appends the records whose keys are new to the file at `path`, writing
    /// the header first if the file is new. Returns how many were written.
    pub fn append_to_file(path: &Path, records: &[CatalogRecord]) -> Result<usize> {
        let mut existing = Self::load(path)?;
        let fresh = !path.exists() || std::fs::metadata(path).map_err(io_err)?.len() == 0;
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(io_err)?;
        if fresh {
            writeln!(file, "{}", header_line()).map_err(io_err)?;
        }
        let mut written = 0;
        for r in records {
            if existing.insert(r.clone()) {
                writeln!(file, "{}", r.to_line()).map_err(io_err)?;
                written += 1;
            }
        }
        Ok(written)
    }
}

fn header_line() -> String {
    serde_json::to_string(&Header::current()).expect("header serializes")
}

fn io_err(e: std::io::Error) -> Error {
    Error::Domain(format!("i/o: {e}"))
}

pub const TABLE_COLUMNS: [&str; 14] = [
    "presentation",
    "n",
    "type",
    "betti",
    "torsion",
    "applicability",
    "status",
    "rule",
    "margin",
    "smale",
    "table1",
    "casson",
    "moduli",
    "errors",
];

fn table_row(r: &CatalogRecord) -> Vec<String> {
    fn opt<T: ToString>(v: &Option<T>) -> String {
        v.as_ref().map(ToString::to_string).unwrap_or_default()
    }
    let torsion = r.torsion.as_ref().map(|t| {
        if t.is_empty() {
            "0".to_string()
        } else {
            t.iter().map(|d| format!("Z/{d}")).collect::<Vec<_>>().join(" + ")
        }
    });
    let applicability = r.applicability.map(|a| {
        if a.is_proven() {
            "proven"
        } else {
            "conjectural"
        }
    });
    vec![
        r.presentation.clone(),
        r.n.to_string(),
        r.kind.to_string(),
        opt(&r.betti),
        opt(&torsion),
        opt(&applicability),
        opt(&r.status),
        opt(&r.rule),
        opt(&r.margin),
        opt(&r.smale),
        opt(&r.table1),
        opt(&r.casson),
        opt(&r.moduli),
        r.errors.join("; "),
    ]
}

/// Delimiter-separated table, one row per record, with a header row.
pub fn export_table(records: &[CatalogRecord], delimiter: u8) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .delimiter(delimiter)
        .from_writer(Vec::new());
    let fail = |e: csv::Error| Error::Internal(format!("table export: {e}"));
    w.write_record(TABLE_COLUMNS).map_err(fail)?;
    for r in records {
        w.write_record(table_row(r)).map_err(fail)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Internal(format!("table export: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BpFilters {
    pub trichotomy: Option<TrichotomyType>,
    #[serde(default)]
    pub pairwise_coprime: bool,
    pub status: Option<SeStatus>,
}

impl BpFilters {
    fn accepts(&self, a: &BPExponents) -> bool {
        if self.pairwise_coprime && !a.pairwise_coprime() {
            return false;
        }
        let link = a.to_link();
        if let Some(t) = self.trichotomy {
            if link.classify_type() != t {
                return false;
            }
        }
        if let Some(s) = self.status {
            if verdict(&link, Some(a)).status != s {
                return false;
            }
        }
        true
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BpBounds {
    pub max_exponent: u64,
    pub length: usize,
    #[serde(default)]
    pub filters: BpFilters,
}

fn binomial(n: u64, k: u64) -> BigUint {
    let mut out = BigUint::one();
    for i in 0..k {
        out = out * (n - i) / (i + 1);
    }
    out
}

/// Nondecreasing tuples `2 <= a_0 <= ... <= a_n <= max_exponent` in
/// lexicographic order, passed through the filters.
pub fn enumerate_bp(bounds: &BpBounds) -> Result<BpEnumeration> {
    let len = bounds.length;
    if !(3..=MAX_VARIABLES).contains(&len) {
        return Err(Error::Domain(format!(
            "length must be between 3 and {MAX_VARIABLES}, got {len}"
        )));
    }
    if bounds.max_exponent < 2 {
        return Err(Error::Domain("max_exponent must be at least 2".into()));
    }
    // Multisets of size len from max-1 values.
    let count = binomial(bounds.max_exponent - 2 + len as u64, len as u64);
    if count > BigUint::from(MAX_ENUMERATION) {
        return Err(Error::Domain(format!(
            "bounds would enumerate {count} tuples, more than the limit {MAX_ENUMERATION}"
        )));
    }
    Ok(BpEnumeration {
        current: Some(vec![2; len]),
        max: bounds.max_exponent,
        filters: bounds.filters.clone(),
    })
}

pub struct BpEnumeration {
    current: Option<Vec<u64>>,
    max: u64,
    filters: BpFilters,
}

impl BpEnumeration {
    fn advance(&mut self) -> Option<Vec<u64>> {
        let cur = self.current.take()?;
        let mut next = cur.clone();
        if let Some(i) = next.iter().rposition(|&x| x < self.max) {
            let v = next[i] + 1;
            for x in &mut next[i..] {
                *x = v;
            }
            self.current = Some(next);
        }
        Some(cur)
    }
}

impl Iterator for BpEnumeration {
    type Item = BPExponents;

    fn next(&mut self) -> Option<BPExponents> {
        while let Some(t) = self.advance() {
            let a = BPExponents::from_u64(&t).expect("exponents are at least 2");
            if self.filters.accepts(&a) {
                return Some(a);
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bp(a: &[u64]) -> Presentation {
        Presentation::Bp(BPExponents::from_u64(a).unwrap())
    }

    fn tuples(b: &BpBounds) -> Vec<Vec<u64>> {
        enumerate_bp(b)
            .unwrap()
            .map(|a| a.exponents().iter().map(|x| x.to_u64().unwrap()).collect())
            .collect()
    }

    #[test]
    fn small_enumeration_order() {
        let b = BpBounds {
            max_exponent: 4,
            length: 3,
            filters: BpFilters::default(),
        };
        let expected: Vec<Vec<u64>> = vec![
            vec![2, 2, 2],
            vec![2, 2, 3],
            vec![2, 2, 4],
            vec![2, 3, 3],
            vec![2, 3, 4],
            vec![2, 4, 4],
            vec![3, 3, 3],
            vec![3, 3, 4],
            vec![3, 4, 4],
            vec![4, 4, 4],
        ];
        assert_eq!(tuples(&b), expected);
    }

    #[test]
    fn enumeration_count_is_multiset_count() {
        for max in 2..7u64 {
            for len in 3..6usize {
                let b = BpBounds {
                    max_exponent: max,
                    length: len,
                    filters: BpFilters::default(),
                };
                let n = tuples(&b).len();
                assert_eq!(BigUint::from(n), binomial(max - 2 + len as u64, len as u64));
            }
        }
    }

    #[test]
    fn coprime_filter() {
        let b = BpBounds {
            max_exponent: 5,
            length: 3,
            filters: BpFilters {
                pairwise_coprime: true,
                ..Default::default()
            },
        };
        let t = tuples(&b);
        assert!(t.contains(&vec![2, 3, 5]));
        assert!(!t.contains(&vec![2, 2, 3]));
    }

    #[test]
    fn overflow_guard() {
        let b = BpBounds {
            max_exponent: 1000,
            length: 10,
            filters: BpFilters::default(),
        };
        assert!(enumerate_bp(&b).is_err());
        let b = BpBounds {
            max_exponent: 5,
            length: 2,
            filters: BpFilters::default(),
        };
        assert!(enumerate_bp(&b).is_err());
    }

    #[test]
    fn poincare_sphere_record() {
        let r = run_pipeline(&bp(&[2, 3, 5]));
        assert_eq!(r.betti.as_deref(), Some("0"));
        assert_eq!(r.torsion, Some(vec![]));
        assert_eq!(r.casson, Some(-1));
        assert!(r.errors.is_empty(), "{:?}", r.errors);
    }

    #[test]
    fn record_line_round_trip() {
        let r = run_pipeline(&"w=1,1,1,4,6 d=12".parse().unwrap()).stamped();
        let back = CatalogRecord::from_line(&r.to_line()).unwrap();
        assert_eq!(back, r);
        assert_eq!(r.moduli.as_deref(), Some("254"));
        assert_eq!(r.moduli_reference, Some(266));
    }

    #[test]
    fn dedupe_by_key() {
        let mut c = Catalog::new();
        assert!(c.insert(run_pipeline(&bp(&[2, 3, 5]))));
        // bp=2,3,5 and w=15,10,6 d=30 are the same link.
        assert!(!c.insert(run_pipeline(&"w=15,10,6 d=30".parse().unwrap())));
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn table_export_has_header_and_rows() {
        let recs = vec![run_pipeline(&bp(&[3, 3, 3, 3, 3]))];
        let t = export_table(&recs, b'\t').unwrap();
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].starts_with("presentation\tn\ttype"));
        assert!(lines[1].contains("\t10\tZ/3\t"));
    }
}
