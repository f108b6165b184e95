//! CSV loaders for trade flows, patent records, concordance tables and
//! index panels.
//!
//! Every file is UTF-8, comma separated, with a header row. LF and CRLF
//! line endings are both accepted and an empty cell means missing.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs::File;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::model::{prune, AxisKind, IndexPanel, Pruned, RawIncidence, ValuedMatrix};

pub const TRADE_HEADER: [&str; 4] = ["year", "country", "product_code", "value"];
pub const PATENT_HEADER: [&str; 5] = ["year", "patent_id", "class", "country", "share"];
pub const CONCORDANCE_HEADER: [&str; 2] = ["source_code", "target_code"];

/// Tolerance on the inventor shares of one patent summing to 1.
pub const SHARE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Counting {
    /// Each patent is split across countries by inventor share.
    #[default]
    Fractional,
    /// Each country with at least one inventor counts the patent once.
    Integer,
}

impl fmt::Display for Counting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Counting::Fractional => "fractional",
            Counting::Integer => "integer",
        })
    }
}

impl FromStr for Counting {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "fractional" => Ok(Counting::Fractional),
            "integer" => Ok(Counting::Integer),
            other => Err(format!("unknown counting mode `{other}`")),
        }
    }
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn csv_reader<R: Read>(reader: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader)
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    Error::parse(line, e.to_string())
}

fn check_header<R: Read>(rdr: &mut csv::Reader<R>, want: &[&str]) -> Result<()> {
    let got = rdr.headers().map_err(csv_error)?;
    let got: Vec<&str> = got.iter().map(|h| h.trim_start_matches('\u{feff}')).collect();
    if got != want {
        return Err(Error::parse(1, format!("expected header `{}`, found `{}`", want.join(","), got.join(","))));
    }
    Ok(())
}

/// Records with their line numbers, each checked for `width` fields.
fn records<R: Read>(rdr: &mut csv::Reader<R>, width: usize) -> impl Iterator<Item = Result<(u64, csv::StringRecord)>> + '_ {
    rdr.records().map(move |r| {
        let r = r.map_err(csv_error)?;
        let line = r.position().map_or(0, |p| p.line());
        if r.len() != width {
            return Err(Error::parse(line, format!("expected {width} fields, found {}", r.len())));
        }
        Ok((line, r))
    })
}

fn field<'a>(r: &'a csv::StringRecord, i: usize, name: &str, line: u64) -> Result<&'a str> {
    let v = &r[i];
    if v.is_empty() {
        return Err(Error::parse(line, format!("missing {name}")));
    }
    Ok(v)
}

fn number(s: &str, name: &str, line: u64) -> Result<f64> {
    let v: f64 = s.parse().map_err(|_| Error::parse(line, format!("{name} `{s}` is not a number")))?;
    if !v.is_finite() {
        return Err(Error::parse(line, format!("{name} `{s}` is not finite")));
    }
    Ok(v)
}

fn year(s: &str, line: u64) -> Result<i32> {
    s.parse().map_err(|_| Error::parse(line, format!("year `{s}` is not an integer")))
}

fn to_matrix(cells: BTreeMap<(String, String), f64>, axes: (AxisKind, AxisKind)) -> Result<ValuedMatrix> {
    let rows: Vec<String> = cells.keys().map(|(r, _)| r.clone()).collect::<BTreeSet<_>>().into_iter().collect();
    let cols: Vec<String> = cells.keys().map(|(_, c)| c.clone()).collect::<BTreeSet<_>>().into_iter().collect();
    let ri: BTreeMap<&str, usize> = rows.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    let ci: BTreeMap<&str, usize> = cols.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    let mut values = DMatrix::zeros(rows.len(), cols.len());
    for ((r, c), v) in &cells {
        values[(ri[r.as_str()], ci[c.as_str()])] = *v;
    }
    ValuedMatrix::new(rows, cols, values, axes)
}

/// Country by product export values for one year.
///
/// Product codes are cut to their first `digits` characters and values
/// falling on the same (country, code) cell are summed. Rows for other
/// years are ignored.
pub fn read_trade<R: Read>(reader: R, for_year: i32, digits: usize) -> Result<ValuedMatrix> {
    if digits == 0 {
        return Err(Error::parse(0, "digit level must be positive"));
    }
    let mut rdr = csv_reader(reader);
    check_header(&mut rdr, &TRADE_HEADER)?;
    let mut cells: BTreeMap<(String, String), f64> = BTreeMap::new();
    let mut seen = false;
    for rec in records(&mut rdr, TRADE_HEADER.len()) {
        let (line, r) = rec?;
        let y = year(field(&r, 0, "year", line)?, line)?;
        let country = field(&r, 1, "country", line)?;
        let code = field(&r, 2, "product code", line)?;
        let value = number(field(&r, 3, "value", line)?, "value", line)?;
        if value < 0.0 {
            return Err(Error::parse(line, format!("negative value {value}")));
        }
        if code.chars().count() < digits {
            return Err(Error::parse(line, format!("product code `{code}` is shorter than {digits} digits")));
        }
        if y != for_year {
            continue;
        }
        seen = true;
        let code: String = code.chars().take(digits).collect();
        *cells.entry((country.to_string(), code)).or_default() += value;
    }
    if !seen {
        return Err(Error::UnknownYear(for_year));
    }
    to_matrix(cells, (AxisKind::Country, AxisKind::Product))
}

pub fn load_trade(path: impl AsRef<Path>, year: i32, digits: usize) -> Result<ValuedMatrix> {
    read_trade(open(path.as_ref())?, year, digits)
}

/// Country by technology class patent counts for one year.
///
/// Each row is one inventor country's share of one (patent, class)
/// assignment. A patent listed under several classes counts fully in each.
/// The shares of every assignment in the file must sum to 1.
pub fn read_patents<R: Read>(reader: R, for_year: i32, counting: Counting) -> Result<ValuedMatrix> {
    let mut rdr = csv_reader(reader);
    check_header(&mut rdr, &PATENT_HEADER)?;
    // (patent, class) -> country -> share, for the requested year.
    let mut assignments: BTreeMap<(String, String), BTreeMap<String, f64>> = BTreeMap::new();
    let mut share_sums: BTreeMap<(String, String), f64> = BTreeMap::new();
    for rec in records(&mut rdr, PATENT_HEADER.len()) {
        let (line, r) = rec?;
        let y = year(field(&r, 0, "year", line)?, line)?;
        let patent = field(&r, 1, "patent id", line)?;
        let class = field(&r, 2, "class", line)?;
        let country = field(&r, 3, "inventor country", line)?;
        let share = number(field(&r, 4, "share", line)?, "share", line)?;
        if share <= 0.0 {
            return Err(Error::parse(line, format!("share {share} is not positive")));
        }
        let key = (patent.to_string(), class.to_string());
        *share_sums.entry(key.clone()).or_default() += share;
        if y == for_year {
            *assignments.entry(key).or_default().entry(country.to_string()).or_default() += share;
        }
    }
    for ((patent, class), sum) in share_sums {
        if (sum - 1.0).abs() > SHARE_TOL {
            return Err(Error::BadShares { patent, class, sum });
        }
    }
    if assignments.is_empty() {
        return Err(Error::UnknownYear(for_year));
    }
    let mut cells: BTreeMap<(String, String), f64> = BTreeMap::new();
    for ((_, class), countries) in assignments {
        for (country, share) in countries {
            let credit = match counting {
                Counting::Fractional => share,
                Counting::Integer => 1.0,
            };
            *cells.entry((country, class.clone())).or_default() += credit;
        }
    }
    to_matrix(cells, (AxisKind::Country, AxisKind::Technology))
}

pub fn load_patents(path: impl AsRef<Path>, year: i32, counting: Counting) -> Result<ValuedMatrix> {
    read_patents(open(path.as_ref())?, year, counting)
}

/// A 0/1 correspondence between two classification schemes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcordanceTable {
    pub source_scheme: String,
    pub target_scheme: String,
    pub pairs: BTreeSet<(String, String)>,
}

impl ConcordanceTable {
    pub fn new(
        source_scheme: impl Into<String>,
        target_scheme: impl Into<String>,
        pairs: impl IntoIterator<Item = (String, String)>,
    ) -> Self {
        ConcordanceTable {
            source_scheme: source_scheme.into(),
            target_scheme: target_scheme.into(),
            pairs: pairs.into_iter().collect(),
        }
    }

    /// Cuts every target code to its first `len` characters.
    pub fn truncate_targets(&self, len: usize) -> Self {
        let pairs = self.pairs.iter().map(|(s, t)| (s.clone(), t.chars().take(len).collect()));
        ConcordanceTable::new(self.source_scheme.clone(), self.target_scheme.clone(), pairs)
    }

    /// Cuts every source code to its first `len` characters.
    pub fn truncate_sources(&self, len: usize) -> Self {
        let pairs = self.pairs.iter().map(|(s, t)| (s.chars().take(len).collect(), t.clone()));
        ConcordanceTable::new(self.source_scheme.clone(), self.target_scheme.clone(), pairs)
    }
}

pub fn read_concordance<R: Read>(reader: R, source_scheme: &str, target_scheme: &str) -> Result<ConcordanceTable> {
    let mut rdr = csv_reader(reader);
    check_header(&mut rdr, &CONCORDANCE_HEADER)?;
    let mut pairs = BTreeSet::new();
    for rec in records(&mut rdr, CONCORDANCE_HEADER.len()) {
        let (line, r) = rec?;
        let s = field(&r, 0, "source code", line)?;
        let t = field(&r, 1, "target code", line)?;
        pairs.insert((s.to_string(), t.to_string()));
    }
    Ok(ConcordanceTable::new(source_scheme, target_scheme, pairs))
}

pub fn load_concordance(path: impl AsRef<Path>, source_scheme: &str, target_scheme: &str) -> Result<ConcordanceTable> {
    read_concordance(open(path.as_ref())?, source_scheme, target_scheme)
}

/// Relational composition: `(s, u)` is kept iff a path `s → … → u` runs
/// through every table in order.
pub fn chain_concordances(tables: &[ConcordanceTable]) -> Result<ConcordanceTable> {
    let (first, rest) = tables.split_first().ok_or(Error::EmptyChain)?;
    let mut acc = first.clone();
    for next in rest {
        if acc.target_scheme != next.source_scheme {
            return Err(Error::SchemeMismatch {
                left: acc.target_scheme.clone(),
                right: next.source_scheme.clone(),
            });
        }
        let mut by_source: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for (s, t) in &next.pairs {
            by_source.entry(s.as_str()).or_default().push(t.as_str());
        }
        let pairs: BTreeSet<(String, String)> = acc
            .pairs
            .iter()
            .flat_map(|(s, mid)| {
                by_source
                    .get(mid.as_str())
                    .into_iter()
                    .flatten()
                    .map(move |t| (s.clone(), t.to_string()))
            })
            .collect();
        acc = ConcordanceTable {
            source_scheme: acc.source_scheme,
            target_scheme: next.target_scheme.clone(),
            pairs,
        };
    }
    Ok(acc)
}

/// Which side of a concordance pair indexes the rows of the incidence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    SourceIsRow,
    SourceIsCol,
}

/// 0/1 matrix over the given labels with a 1 wherever the table links the
/// row and column codes, then pruned.
pub fn concordance_to_incidence(
    table: &ConcordanceTable,
    row_labels: &[String],
    col_labels: &[String],
    orientation: Orientation,
    axes: (AxisKind, AxisKind),
) -> Result<Pruned> {
    if row_labels.is_empty() || col_labels.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    let values = DMatrix::from_fn(row_labels.len(), col_labels.len(), |i, j| {
        let (r, c) = (row_labels[i].clone(), col_labels[j].clone());
        let pair = match orientation {
            Orientation::SourceIsRow => (r, c),
            Orientation::SourceIsCol => (c, r),
        };
        if table.pairs.contains(&pair) {
            1.0
        } else {
            0.0
        }
    });
    prune(&RawIncidence::new(row_labels.to_vec(), col_labels.to_vec(), values, axes)?)
}

/// Entity by year panel with header `entity,<year>,<year>,…`.
pub fn read_panel<R: Read>(reader: R, kind: &str) -> Result<IndexPanel> {
    let mut rdr = csv_reader(reader);
    let header = rdr.headers().map_err(csv_error)?.clone();
    if header.get(0).map(|h| h.trim_start_matches('\u{feff}')) != Some("entity") {
        return Err(Error::parse(1, "panel header must start with `entity`"));
    }
    let years = header
        .iter()
        .skip(1)
        .map(|h| year(h, 1))
        .collect::<Result<Vec<i32>>>()?;
    if years.is_empty() {
        return Err(Error::parse(1, "panel header has no year columns"));
    }
    let mut entities = Vec::new();
    let mut cells = Vec::new();
    let mut seen = BTreeSet::new();
    for rec in records(&mut rdr, years.len() + 1) {
        let (line, r) = rec?;
        let entity = field(&r, 0, "entity", line)?.to_string();
        if !seen.insert(entity.clone()) {
            return Err(Error::DuplicateEntity(entity));
        }
        let row = r
            .iter()
            .skip(1)
            .map(|c| if c.is_empty() { Ok(None) } else { number(c, "cell", line).map(Some) })
            .collect::<Result<Vec<_>>>()?;
        entities.push(entity);
        cells.push(row);
    }
    IndexPanel::new(kind, entities, years, cells)
}

pub fn load_panel(path: impl AsRef<Path>, kind: &str) -> Result<IndexPanel> {
    read_panel(open(path.as_ref())?, kind)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn trade(body: &str, y: i32, d: usize) -> Result<ValuedMatrix> {
        read_trade(format!("year,country,product_code,value\n{body}").as_bytes(), y, d)
    }

    fn cell(m: &ValuedMatrix, r: &str, c: &str) -> f64 {
        let i = m.row_labels().iter().position(|l| l == r).unwrap();
        let j = m.col_labels().iter().position(|l| l == c).unwrap();
        m.values()[(i, j)]
    }

    #[test]
    fn trade_truncates_and_sums() {
        let m = trade("2010,USA,7843,5\n2010,USA,7849,2.5\n2010,DEU,7810,1\n2011,USA,7843,9\n", 2010, 3).unwrap();
        assert_eq!(m.col_labels(), &["781", "784"]);
        assert_eq!(cell(&m, "USA", "784"), 7.5);
        let m2 = trade("2010,USA,7843,5\n2010,USA,7849,2.5\n2010,DEU,7810,1\n", 2010, 2).unwrap();
        assert_eq!(m2.col_labels(), &["78"]);
        assert_eq!(cell(&m2, "USA", "78"), 7.5);
    }

    #[test]
    fn trade_errors() {
        assert!(matches!(trade("2010,USA,7843,-1\n", 2010, 3), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(trade("2010,USA,7843,5\n2010,DEU,78,1\n", 2010, 3), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(trade("2010,USA,7843,abc\n", 2010, 3), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(trade("2010,USA,7843\n", 2010, 3), Err(Error::Parse { line: 2, .. })));
        assert_eq!(trade("2010,USA,7843,5\n", 2012, 3).unwrap_err(), Error::UnknownYear(2012));
        assert!(matches!(
            read_trade("yr,country,product_code,value\n".as_bytes(), 2010, 3),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn trade_accepts_crlf() {
        let m = read_trade("year,country,product_code,value\r\n2010,USA,7843,5\r\n".as_bytes(), 2010, 3).unwrap();
        assert_eq!(cell(&m, "USA", "784"), 5.0);
    }

    fn patents(body: &str, c: Counting) -> Result<ValuedMatrix> {
        read_patents(format!("year,patent_id,class,country,share\n{body}").as_bytes(), 2010, c)
    }

    #[test]
    fn inventor_shares() {
        let third = 1.0 / 3.0;
        let body = format!("2010,P1,G06,US,{third}\n2010,P1,G06,US,{third}\n2010,P1,G06,DE,{third}\n");
        let f = patents(&body, Counting::Fractional).unwrap();
        assert!((cell(&f, "US", "G06") - 2.0 / 3.0).abs() < 1e-12);
        assert!((cell(&f, "DE", "G06") - 1.0 / 3.0).abs() < 1e-12);
        let i = patents(&body, Counting::Integer).unwrap();
        assert_eq!(cell(&i, "US", "G06"), 1.0);
        assert_eq!(cell(&i, "DE", "G06"), 1.0);
    }

    /// Five patents tallied by hand.
    ///
    /// P1 G06: US 0.5, DE 0.5. P2 G06 and H04: JP 1. P3 H04: US 0.25,
    /// JP 0.75. P4 A61: DE 1. P5 G06 and A61: US 0.2, DE 0.8.
    const FIVE: &str = "\
2010,P1,G06,US,0.5
2010,P1,G06,DE,0.5
2010,P2,G06,JP,1
2010,P2,H04,JP,1
2010,P3,H04,US,0.25
2010,P3,H04,JP,0.75
2010,P4,A61,DE,1
2010,P5,G06,US,0.2
2010,P5,G06,DE,0.8
2010,P5,A61,US,0.2
2010,P5,A61,DE,0.8
";

    #[test]
    fn five_patent_fractional_tally() {
        let m = patents(FIVE, Counting::Fractional).unwrap();
        assert_eq!(m.row_labels(), &["DE", "JP", "US"]);
        assert_eq!(m.col_labels(), &["A61", "G06", "H04"]);
        let want = [[1.8, 1.3, 0.0], [0.0, 1.0, 1.75], [0.2, 0.7, 0.25]];
        for (i, row) in want.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                assert!((m.values()[(i, j)] - v).abs() < 1e-12, "({i},{j})");
            }
        }
        // Seven (patent, class) assignments.
        assert!((m.values().sum() - 7.0).abs() < 1e-9);
    }

    #[test]
    fn five_patent_integer_tally() {
        let m = patents(FIVE, Counting::Integer).unwrap();
        let want = [[2.0, 2.0, 0.0], [0.0, 1.0, 2.0], [1.0, 2.0, 1.0]];
        for (i, row) in want.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                assert_eq!(m.values()[(i, j)], *v, "({i},{j})");
            }
        }
    }

    #[test]
    fn patent_errors() {
        assert!(matches!(
            patents("2010,P1,G06,US,0.5\n2010,P1,G06,DE,0.4\n", Counting::Fractional),
            Err(Error::BadShares { .. })
        ));
        assert!(matches!(patents("2010,P1,G06,,1\n", Counting::Integer), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(patents("2010,P1,G06,US,0\n", Counting::Integer), Err(Error::Parse { .. })));
        assert_eq!(patents("2011,P1,G06,US,1\n", Counting::Integer).unwrap_err(), Error::UnknownYear(2010));
    }

    fn table(src: &str, tgt: &str, pairs: &[(&str, &str)]) -> ConcordanceTable {
        ConcordanceTable::new(src, tgt, pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())))
    }

    #[test]
    fn chaining() {
        let a = table("ipc", "nace", &[("t1", "n1")]);
        let b = table("nace", "sitc", &[("n1", "p1"), ("n1", "p2")]);
        assert_eq!(chain_concordances(&[a.clone(), b.clone()]).unwrap(), table("ipc", "sitc", &[("t1", "p1"), ("t1", "p2")]));
        let empty = table("nace", "isic", &[]);
        let c = table("isic", "sitc", &[("i1", "p1")]);
        assert!(chain_concordances(&[a.clone(), empty, c]).unwrap().pairs.is_empty());
        assert_eq!(chain_concordances(std::slice::from_ref(&a)).unwrap(), a);
        assert!(matches!(chain_concordances(&[b, a]), Err(Error::SchemeMismatch { .. })));
        assert_eq!(chain_concordances(&[]).unwrap_err(), Error::EmptyChain);
    }

    #[test]
    fn concordance_file() {
        let t = read_concordance("source_code,target_code\nG06,26\nG06,26\nH04,27\n".as_bytes(), "ipc", "nace").unwrap();
        assert_eq!(t.pairs.len(), 2);
        assert!(matches!(
            read_concordance("source_code,target_code\nG06,\n".as_bytes(), "ipc", "nace"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert_eq!(t.truncate_targets(1).pairs.len(), 2);
        assert_eq!(table("a", "b", &[("x1", "p"), ("x2", "p")]).truncate_sources(1).pairs.len(), 1);
    }

    fn labels(l: &[&str]) -> Vec<String> {
        l.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn incidence_from_concordance() {
        let axes = (AxisKind::Product, AxisKind::Technology);
        let full = table("t", "p", &[("t1", "p1"), ("t1", "p2"), ("t2", "p1"), ("t2", "p2")]);
        let m = concordance_to_incidence(&full, &labels(&["p1", "p2"]), &labels(&["t1", "t2"]), Orientation::SourceIsCol, axes).unwrap();
        assert_eq!(m.matrix.ones(), 4);

        let one = table("t", "p", &[("t1", "p1")]);
        let m = concordance_to_incidence(&one, &labels(&["p1", "p2"]), &labels(&["t1", "t2"]), Orientation::SourceIsCol, axes).unwrap();
        assert_eq!(m.matrix.row_labels(), &["p1"]);
        assert_eq!(m.matrix.col_labels(), &["t1"]);
        assert_eq!(m.removed_rows, vec!["p2"]);
        assert_eq!(m.removed_cols, vec!["t2"]);

        let empty = table("t", "p", &[]);
        assert_eq!(
            concordance_to_incidence(&empty, &labels(&["p1"]), &labels(&["t1"]), Orientation::SourceIsCol, axes).unwrap_err(),
            Error::EmptyMatrix
        );
    }

    #[test]
    fn panel_parsing() {
        let p = read_panel("entity,2000,2001\n\"Korea, Republic of\",1.5,\nJapan,-0.2,3\n".as_bytes(), "eci").unwrap();
        assert_eq!(p.years(), &[2000, 2001]);
        assert_eq!(p.value("Korea, Republic of", 2000), Some(1.5));
        assert_eq!(p.value("Korea, Republic of", 2001), None);
        assert_eq!(p.value("Japan", 2001), Some(3.0));
    }

    #[test]
    fn panel_errors() {
        assert!(matches!(read_panel("entity,2000,2001\nA,1\n".as_bytes(), "x"), Err(Error::Parse { line: 2, .. })));
        assert_eq!(
            read_panel("entity,2000\nA,1\nA,2\n".as_bytes(), "x").unwrap_err(),
            Error::DuplicateEntity("A".into())
        );
        assert!(matches!(read_panel("country,2000\nA,1\n".as_bytes(), "x"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(read_panel("entity,2000\nA,x\n".as_bytes(), "x"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn bundled_appendix_panels() {
        let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/appendix");
        let eci = load_panel(format!("{dir}/eci.csv"), "eci").unwrap();
        assert_eq!(eci.entities().len(), 45);
        assert_eq!(eci.years().len(), 15);
        assert_eq!(eci.value("United States", 2014), Some(-0.23));
        let patci = load_panel(format!("{dir}/patci.csv"), "patci").unwrap();
        assert_eq!(patci.value("Japan", 2000), Some(3.10));
    }

    proptest! {
        #[test]
        fn trade_total_is_digit_invariant(rows in prop::collection::vec((0usize..4, 1000u32..9999, 0.0f64..1e6), 1..30)) {
            let body: String = rows.iter().map(|(c, p, v)| format!("2010,C{c},{p},{v}\n")).collect();
            let want: f64 = rows.iter().map(|r| r.2).sum();
            for d in [2, 3, 4] {
                let m = trade(&body, 2010, d).unwrap();
                prop_assert!((m.values().sum() - want).abs() <= 1e-9 * want.max(1.0));
            }
        }

        #[test]
        fn fractional_total_counts_assignments(patents_spec in prop::collection::vec((1usize..4, 1usize..3), 1..15)) {
            let mut body = String::new();
            let mut assignments = 0;
            for (p, (inventors, classes)) in patents_spec.iter().enumerate() {
                for class in 0..*classes {
                    assignments += 1;
                    for k in 0..*inventors {
                        let share = 1.0 / *inventors as f64;
                        body.push_str(&format!("2010,P{p},K{class},C{},{share}\n", (p + k) % 5));
                    }
                }
            }
            let m = read_patents(format!("year,patent_id,class,country,share\n{body}").as_bytes(), 2010, Counting::Fractional).unwrap();
            prop_assert!((m.values().sum() - assignments as f64).abs() < 1e-9);
        }

        #[test]
        fn chaining_is_associative(
            ab in prop::collection::btree_set((0u8..4, 0u8..4), 0..10),
            bc in prop::collection::btree_set((0u8..4, 0u8..4), 0..10),
            cd in prop::collection::btree_set((0u8..4, 0u8..4), 0..10),
        ) {
            let mk = |s: &str, t: &str, set: &BTreeSet<(u8, u8)>| {
                ConcordanceTable::new(s, t, set.iter().map(|(x, y)| (x.to_string(), y.to_string())))
            };
            let (a, b, c) = (mk("A", "B", &ab), mk("B", "C", &bc), mk("C", "D", &cd));
            let left = chain_concordances(&[chain_concordances(&[a.clone(), b.clone()]).unwrap(), c.clone()]).unwrap();
            let right = chain_concordances(&[a, chain_concordances(&[b, c]).unwrap()]).unwrap();
            prop_assert_eq!(left, right);
        }
    }
}
