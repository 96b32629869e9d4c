//! Study tables in delimited text.
//!
//! Header-driven: columns may appear in any order, `id`, `r_orig` and
//! `n_orig` are required, and `r_rep`, `n_rep`, `df1`, `df2`, `sign` and
//! `one_df_flag` are optional. Empty cells, `NA` and `NaN` (any case) mean
//! missing. Rows that break a field invariant are skipped with one warning
//! each; structural problems with the file are errors.

use std::collections::HashSet;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use repcheck_core::stats::median;
use repcheck_core::{Correlation, Sign, StudyRecord};

#[derive(Debug, thiserror::Error)]
pub enum DatasetError {
    #[error("cannot read `{path}`")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("`{path}`: {message}")]
    Format { path: String, message: String },
    #[error("`{path}`: malformed delimited text")]
    Csv {
        path: String,
        #[source]
        source: csv::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TableFormat {
    #[default]
    Csv,
    Tsv,
}

impl TableFormat {
    pub fn delimiter(self) -> u8 {
        match self {
            TableFormat::Csv => b',',
            TableFormat::Tsv => b'\t',
        }
    }

    /// `.tsv` and `.tab` files are tab separated, everything else comma.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("tsv") || ext.eq_ignore_ascii_case("tab") => {
                TableFormat::Tsv
            }
            _ => TableFormat::Csv,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseWarning {
    /// 1-based line in the source file.
    pub line: u64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyTable {
    pub records: Vec<StudyRecord>,
    pub source_path: String,
    pub parse_warnings: Vec<ParseWarning>,
}

pub const COLUMNS: [&str; 9] = [
    "id",
    "r_orig",
    "n_orig",
    "r_rep",
    "n_rep",
    "df1",
    "df2",
    "sign",
    "one_df_flag",
];
const REQUIRED: [&str; 3] = ["id", "r_orig", "n_orig"];

fn is_missing(cell: &str) -> bool {
    cell.is_empty() || cell.eq_ignore_ascii_case("na") || cell.eq_ignore_ascii_case("nan")
}

fn parse_correlation(name: &str, cell: &str) -> Result<Option<Correlation>, String> {
    if is_missing(cell) {
        return Ok(None);
    }
    let r: f64 = cell
        .parse()
        .map_err(|_| format!("{name} = `{cell}` is not a number"))?;
    Correlation::checked(r)
        .map(Some)
        .map_err(|_| format!("{name} = {cell} violates -1 < r < 1 (|r| must not exceed 1 - 1e-12)"))
}

fn parse_count(name: &str, cell: &str, min: u32) -> Result<Option<u32>, String> {
    if is_missing(cell) {
        return Ok(None);
    }
    let n: u32 = cell
        .parse()
        .map_err(|_| format!("{name} = `{cell}` is not a nonnegative integer"))?;
    if n < min {
        return Err(format!("{name} = {n} must be at least {min}"));
    }
    Ok(Some(n))
}

fn parse_sign(cell: &str) -> Result<Option<Sign>, String> {
    match cell {
        c if is_missing(c) => Ok(None),
        "1" | "+1" | "+" => Ok(Some(Sign::Positive)),
        "-1" | "-" => Ok(Some(Sign::Negative)),
        other => Err(format!("sign = `{other}` must be +1 or -1")),
    }
}

fn parse_flag(cell: &str) -> Result<bool, String> {
    if is_missing(cell) {
        return Ok(false);
    }
    match cell.to_ascii_lowercase().as_str() {
        "true" | "t" | "1" | "yes" => Ok(true),
        "false" | "f" | "0" | "no" => Ok(false),
        _ => Err(format!("one_df_flag = `{cell}` is not a boolean")),
    }
}

struct Columns {
    index: [Option<usize>; 9],
}

impl Columns {
    fn cell<'a>(&self, row: &'a csv::StringRecord, col: usize) -> &'a str {
        self.index[col]
            .and_then(|i| row.get(i))
            .unwrap_or("")
            .trim()
    }
}

fn parse_row(cols: &Columns, row: &csv::StringRecord) -> Result<StudyRecord, String> {
    let id = cols.cell(row, 0);
    if id.is_empty() {
        return Err("empty id".into());
    }
    let mut rec = StudyRecord::new(id);
    rec.r_orig = parse_correlation("r_orig", cols.cell(row, 1))?;
    rec.n_orig = parse_count("n_orig", cols.cell(row, 2), 4)?;
    rec.r_rep = parse_correlation("r_rep", cols.cell(row, 3))?;
    rec.n_rep = parse_count("n_rep", cols.cell(row, 4), 4)?;
    rec.df1 = parse_count("df1", cols.cell(row, 5), 1)?;
    rec.df2 = parse_count("df2", cols.cell(row, 6), 1)?;
    rec.sign = parse_sign(cols.cell(row, 7))?;
    rec.one_df = parse_flag(cols.cell(row, 8))?;
    rec.validate().map_err(|e| e.to_string())?;
    Ok(rec)
}

/// Parse a study table from any reader. `source` names it in messages.
pub fn read_studies<R: Read>(
    reader: R,
    format: TableFormat,
    source: &str,
) -> Result<StudyTable, DatasetError> {
    let format_err = |message: String| DatasetError::Format {
        path: source.to_string(),
        message,
    };
    let csv_err = |source_err: csv::Error| DatasetError::Csv {
        path: source.to_string(),
        source: source_err,
    };

    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(format.delimiter())
        .flexible(true)
        .from_reader(reader);
    let headers = rdr.headers().map_err(csv_err)?.clone();
    let mut index = [None; 9];
    for (i, h) in headers.iter().enumerate() {
        if let Some(col) = COLUMNS.iter().position(|c| *c == h.trim()) {
            if index[col].is_some() {
                return Err(format_err(format!(
                    "column `{}` appears twice",
                    COLUMNS[col]
                )));
            }
            index[col] = Some(i);
        }
    }
    let missing: Vec<&str> = REQUIRED
        .iter()
        .zip(&index)
        .filter(|(_, i)| i.is_none())
        .map(|(name, _)| *name)
        .collect();
    if !missing.is_empty() {
        return Err(format_err(format!(
            "missing required column(s): {}",
            missing.join(", ")
        )));
    }
    let cols = Columns { index };

    let mut records = Vec::new();
    let mut warnings = Vec::new();
    let mut seen = HashSet::new();
    for row in rdr.records() {
        let row = row.map_err(csv_err)?;
        let line = row.position().map_or(0, |p| p.line());
        if row.len() != headers.len() {
            warnings.push(ParseWarning {
                line,
                message: format!("expected {} fields, found {}", headers.len(), row.len()),
            });
            continue;
        }
        match parse_row(&cols, &row) {
            Ok(rec) => {
                if !seen.insert(rec.id.clone()) {
                    return Err(format_err(format!(
                        "line {line}: duplicate id `{}`",
                        rec.id
                    )));
                }
                records.push(rec);
            }
            Err(message) => warnings.push(ParseWarning { line, message }),
        }
    }
    Ok(StudyTable {
        records,
        source_path: source.to_string(),
        parse_warnings: warnings,
    })
}

pub fn load_studies(path: &Path, format: TableFormat) -> Result<StudyTable, DatasetError> {
    let display = path.display().to_string();
    let file = File::open(path).map_err(|source| DatasetError::Io {
        path: display.clone(),
        source,
    })?;
    read_studies(file, format, &display)
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "NA".to_string(), |v| v.to_string())
}

/// Write records with every column; missing values become `NA`.
pub fn write_studies<W: Write>(
    records: &[StudyRecord],
    writer: W,
    format: TableFormat,
) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .delimiter(format.delimiter())
        .from_writer(writer);
    w.write_record(COLUMNS)?;
    for r in records {
        w.write_record([
            r.id.clone(),
            opt(r.r_orig.map(Correlation::get)),
            opt(r.n_orig),
            opt(r.r_rep.map(Correlation::get)),
            opt(r.n_rep),
            opt(r.df1),
            opt(r.df2),
            opt(r.sign.map(|s| s.as_i8())),
            r.one_df.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ColumnCount {
    pub present: usize,
    pub missing: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableSummary {
    pub n_records: usize,
    /// Same order as [`COLUMNS`], without `id` and `one_df_flag`.
    pub columns: Vec<(&'static str, ColumnCount)>,
    pub one_df: usize,
    pub median_n_orig: Option<f64>,
    pub median_r_orig: Option<f64>,
}

pub fn summarize(table: &StudyTable) -> TableSummary {
    let recs = &table.records;
    let count = |f: &dyn Fn(&StudyRecord) -> bool| {
        let present = recs.iter().filter(|r| f(r)).count();
        ColumnCount {
            present,
            missing: recs.len() - present,
        }
    };
    let n_origs: Vec<f64> = recs
        .iter()
        .filter_map(|r| r.n_orig)
        .map(f64::from)
        .collect();
    let r_origs: Vec<f64> = recs
        .iter()
        .filter_map(|r| r.r_orig)
        .map(Correlation::get)
        .collect();
    TableSummary {
        n_records: recs.len(),
        columns: vec![
            ("r_orig", count(&|r| r.r_orig.is_some())),
            ("n_orig", count(&|r| r.n_orig.is_some())),
            ("r_rep", count(&|r| r.r_rep.is_some())),
            ("n_rep", count(&|r| r.n_rep.is_some())),
            ("df1", count(&|r| r.df1.is_some())),
            ("df2", count(&|r| r.df2.is_some())),
            ("sign", count(&|r| r.sign.is_some())),
        ],
        one_df: recs.iter().filter(|r| r.one_df).count(),
        median_n_orig: median(&n_origs),
        median_r_orig: median(&r_origs),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<StudyTable, DatasetError> {
        read_studies(text.as_bytes(), TableFormat::Csv, "mem")
    }

    #[test]
    fn well_formed_rows() {
        let t = parse(
            "id,r_orig,n_orig,r_rep,n_rep\n\
             a,0.3,50,0.2,60\n\
             b,-0.1,40,NA,\n\
             c,0.5,NaN,0.45,100\n",
        )
        .unwrap();
        assert_eq!(t.records.len(), 3);
        assert!(t.parse_warnings.is_empty());
        assert_eq!(t.records[1].r_rep, None);
        assert_eq!(t.records[1].n_rep, None);
        assert_eq!(t.records[2].n_orig, None);
        assert_eq!(t.records[0].sign, None);
        assert!(!t.records[0].one_df);
    }

    #[test]
    fn column_order_is_free() {
        let t = parse("n_orig,one_df_flag,id,r_orig\n30,TRUE,x,0.2\n").unwrap();
        assert_eq!(t.records[0].n_orig, Some(30));
        assert!(t.records[0].one_df);
    }

    #[test]
    fn boundary_correlation_is_skipped_with_warning() {
        let t = parse("id,r_orig,n_orig\na,1.0,50\nb,0.3,50\n").unwrap();
        assert_eq!(t.records.len(), 1);
        assert_eq!(t.parse_warnings.len(), 1);
        assert_eq!(t.parse_warnings[0].line, 2);
        assert!(t.parse_warnings[0].message.contains("r_orig"));
        assert!(t.parse_warnings[0].message.contains("-1 < r < 1"));
    }

    #[test]
    fn bad_rows_each_warn_once() {
        let t = parse(
            "id,r_orig,n_orig,n_rep,sign,one_df_flag,df1\n\
             a,0.3,3,50,,,\n\
             b,0.3,50.5,50,,,\n\
             c,abc,50,50,,,\n\
             d,0.3,50,50,2,,\n\
             e,0.3,50,50,,maybe,\n\
             f,0.3,50,50,,true,2\n\
             ,0.3,50,50,,,\n\
             g,0.3,50\n\
             h,0.3,50,50,-1,1,1\n",
        )
        .unwrap();
        assert_eq!(t.records.len(), 1);
        assert_eq!(t.records[0].sign, Some(Sign::Negative));
        assert_eq!(t.parse_warnings.len(), 8);
        let lines: Vec<u64> = t.parse_warnings.iter().map(|w| w.line).collect();
        assert_eq!(lines, vec![2, 3, 4, 5, 6, 7, 8, 9]);
    }

    #[test]
    fn structural_errors() {
        assert!(matches!(
            parse("id,r_orig\na,0.3\n"),
            Err(DatasetError::Format { .. })
        ));
        match parse("id,r_orig,n_orig\na,0.3,50\na,0.2,40\n") {
            Err(DatasetError::Format { message, .. }) => {
                assert!(message.contains("duplicate id `a`"))
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            load_studies(Path::new("/nonexistent/table.csv"), TableFormat::Csv),
            Err(DatasetError::Io { .. })
        ));
    }

    #[test]
    fn tsv_input() {
        let t = read_studies(
            "id\tr_orig\tn_orig\nq\t0.25\t33\n".as_bytes(),
            TableFormat::Tsv,
            "mem",
        )
        .unwrap();
        assert_eq!(t.records[0].n_orig, Some(33));
        assert_eq!(TableFormat::from_path(Path::new("x.TSV")), TableFormat::Tsv);
        assert_eq!(TableFormat::from_path(Path::new("x.csv")), TableFormat::Csv);
    }

    #[test]
    fn summary_medians() {
        let empty = summarize(&parse("id,r_orig,n_orig\n").unwrap());
        assert_eq!(empty.n_records, 0);
        assert_eq!(empty.median_n_orig, None);
        assert_eq!(empty.median_r_orig, None);
        assert!(empty
            .columns
            .iter()
            .all(|(_, c)| c.present == 0 && c.missing == 0));

        let s = summarize(&parse("id,r_orig,n_orig\na,0.1,20\nb,0.4,50\nc,NA,90\n").unwrap());
        assert_eq!(s.median_n_orig, Some(50.0));
        assert_eq!(s.median_r_orig, Some(0.25));
        assert_eq!(
            s.columns[0].1,
            ColumnCount {
                present: 2,
                missing: 1
            }
        );
    }
}
