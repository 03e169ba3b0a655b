//! CSV formats. Every float is written with 17 significant digits so a
//! write/read round trip reproduces the value bit for bit.

use std::fmt::Display;
use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use topomap_core::persistence::PersistenceDiagram0;
use topomap_core::placement::MergeRecord;
use topomap_core::{
    mst_from_precomputed, EdgeKey, MetricKind, PointCloud, ProbeAnnotation, SortedMst, Vec2,
    VerificationReport,
};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{path}: row {row}, column {column}: {value:?} is not a finite number")]
    NotNumeric { path: PathBuf, row: u64, column: usize, value: String },
    #[error("{path}: row {row} has {got} fields, expected {expected}")]
    Ragged { path: PathBuf, row: u64, expected: usize, got: usize },
    #[error("{path}: no data rows")]
    Empty { path: PathBuf },
    #[error("{path}: label column {column} does not exist in rows of {width} fields")]
    LabelColumn { path: PathBuf, column: usize, width: usize },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
    #[error("{path}: {source}")]
    Data { path: PathBuf, source: topomap_core::Error },
}

pub type Result<T> = std::result::Result<T, IoError>;

/// Formats a float with 17 significant digits; infinities as `inf`/`-inf`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvOptions {
    pub delimiter: u8,
    /// `None` detects a header: the first row is one when none of its data
    /// fields parses as a number.
    pub has_header: Option<bool>,
    /// Zero-based column holding a class label, excluded from coordinates.
    pub label_column: Option<usize>,
}

impl Default for CsvOptions {
    fn default() -> Self {
        Self { delimiter: b',', has_header: None, label_column: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedCloud {
    pub cloud: PointCloud,
    pub labels: Option<Vec<String>>,
    pub header: Option<Vec<String>>,
}

fn reader_builder(delimiter: u8) -> csv::ReaderBuilder {
    let mut b = csv::ReaderBuilder::new();
    b.delimiter(delimiter).has_headers(false).flexible(true).comment(Some(b'#')).trim(csv::Trim::All);
    b
}

fn parse_field(path: &Path, row: u64, column: usize, raw: &str) -> Result<f64> {
    match raw.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(IoError::NotNumeric { path: path.into(), row, column: column + 1, value: raw.into() }),
    }
}

/// Reads a numeric table. `path` only labels error messages.
pub fn parse_csv<R: Read>(
    input: R,
    path: &Path,
    options: &CsvOptions,
    metric: MetricKind,
) -> Result<LoadedCloud> {
    let mut reader = reader_builder(options.delimiter).from_reader(input);
    let mut coords = Vec::new();
    let mut labels = options.label_column.map(|_| Vec::new());
    let mut header = None;
    let mut width = None;
    let mut first = true;
    for record in reader.records() {
        let record = record.map_err(|source| IoError::Csv { path: path.into(), source })?;
        let row = record.position().map_or(0, |p| p.line());
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if let Some(col) = options.label_column {
            if col >= record.len() {
                return Err(IoError::LabelColumn { path: path.into(), column: col, width: record.len() });
            }
        }
        let data_fields = || record.iter().enumerate().filter(|(i, _)| Some(*i) != options.label_column);
        if first {
            first = false;
            let is_header = options
                .has_header
                .unwrap_or_else(|| data_fields().all(|(_, f)| f.parse::<f64>().is_err()));
            if is_header {
                header = Some(record.iter().map(String::from).collect());
                width = Some(record.len());
                continue;
            }
        }
        let expected = *width.get_or_insert(record.len());
        if record.len() != expected {
            return Err(IoError::Ragged { path: path.into(), row, expected, got: record.len() });
        }
        for (i, field) in data_fields() {
            coords.push(parse_field(path, row, i, field)?);
        }
        if let (Some(labels), Some(col)) = (labels.as_mut(), options.label_column) {
            labels.push(record[col].to_string());
        }
    }
    let Some(width) = width else {
        return Err(IoError::Empty { path: path.into() });
    };
    let d = width - usize::from(options.label_column.is_some());
    if coords.is_empty() {
        return Err(IoError::Empty { path: path.into() });
    }
    let cloud =
        PointCloud::new(coords, d, metric).map_err(|source| IoError::Data { path: path.into(), source })?;
    Ok(LoadedCloud { cloud, labels, header })
}

pub fn load_csv(path: &Path, options: &CsvOptions, metric: MetricKind) -> Result<LoadedCloud> {
    let file = File::open(path).map_err(|source| IoError::Io { path: path.into(), source })?;
    parse_csv(io::BufReader::new(file), path, options, metric)
}

/// Reads a plain numeric table of exactly `columns` columns with an
/// optional header.
fn load_table(path: &Path, columns: usize) -> Result<Vec<Vec<f64>>> {
    let options = CsvOptions::default();
    let loaded = load_csv(path, &options, MetricKind::Euclidean)?;
    if loaded.cloud.dim() != columns {
        return Err(IoError::Format {
            path: path.into(),
            message: format!("expected {columns} columns, found {}", loaded.cloud.dim()),
        });
    }
    Ok((0..loaded.cloud.len()).map(|i| loaded.cloud.point(i).to_vec()).collect())
}

pub fn load_layout(path: &Path) -> Result<Vec<Vec2>> {
    Ok(load_table(path, 2)?.into_iter().map(|r| Vec2::new(r[0], r[1])).collect())
}

/// Reads an `a,b,length` edge list and rebuilds the sorted tree over `n`
/// points, rejecting anything that is not a spanning tree.
pub fn load_mst(path: &Path, n: usize) -> Result<SortedMst> {
    let rows = match load_table(path, 3) {
        Err(IoError::Empty { .. }) => Vec::new(),
        other => other?,
    };
    let mut edges = Vec::with_capacity(rows.len());
    for (i, r) in rows.iter().enumerate() {
        let index = |x: f64| {
            if x >= 0.0 && x.fract() == 0.0 && x < usize::MAX as f64 {
                Ok(x as usize)
            } else {
                Err(IoError::Format { path: path.into(), message: format!("row {}: {x} is not a point index", i + 1) })
            }
        };
        edges.push(EdgeKey::new(index(r[0])?, index(r[1])?, r[2]));
    }
    mst_from_precomputed(n, &edges).map_err(|source| IoError::Data { path: path.into(), source })
}

fn write_row<W: Write, T: Display>(w: &mut W, fields: &[T]) -> io::Result<()> {
    let mut first = true;
    for f in fields {
        if !first {
            w.write_all(b",")?;
        }
        first = false;
        write!(w, "{f}")?;
    }
    w.write_all(b"\n")
}

/// Synthetic or loaded points as `x0,...,x{d-1}[,label]`.
pub fn write_points<W: Write, L: Display>(w: &mut W, cloud: &PointCloud, labels: Option<&[L]>) -> io::Result<()> {
    let mut head: Vec<String> = (0..cloud.dim()).map(|j| format!("x{j}")).collect();
    if labels.is_some() {
        head.push("label".into());
    }
    write_row(w, &head)?;
    for i in 0..cloud.len() {
        let mut row: Vec<String> = cloud.point(i).iter().map(|&x| fmt_f64(x)).collect();
        if let Some(labels) = labels {
            row.push(labels[i].to_string());
        }
        write_row(w, &row)?;
    }
    Ok(())
}

pub fn write_layout<W: Write>(w: &mut W, coords: &[Vec2]) -> io::Result<()> {
    write_row(w, &["x", "y"])?;
    for p in coords {
        write_row(w, &[fmt_f64(p.x), fmt_f64(p.y)])?;
    }
    Ok(())
}

/// `birth,death,creator,edge_a,edge_b`; the essential class has death
/// `inf` and empty edge fields.
pub fn write_diagram<W: Write>(w: &mut W, pd: &PersistenceDiagram0) -> io::Result<()> {
    write_row(w, &["birth", "death", "creator", "edge_a", "edge_b"])?;
    for p in pd.pairs() {
        let (a, b) = p.destroyer_edge.map_or((String::new(), String::new()), |e| (e.a.to_string(), e.b.to_string()));
        write_row(w, &[fmt_f64(p.birth), fmt_f64(p.death), p.creator.to_string(), a, b])?;
    }
    Ok(())
}

pub fn write_labels<W: Write>(w: &mut W, labels: &[usize]) -> io::Result<()> {
    write_row(w, &["point", "label"])?;
    for (i, l) in labels.iter().enumerate() {
        write_row(w, &[i, *l])?;
    }
    Ok(())
}

pub fn write_mst<W: Write>(w: &mut W, mst: &SortedMst) -> io::Result<()> {
    write_row(w, &["a", "b", "length"])?;
    for e in mst.edges() {
        write_row(w, &[e.a.to_string(), e.b.to_string(), fmt_f64(e.length)])?;
    }
    Ok(())
}

pub fn write_merge_log<W: Write>(w: &mut W, log: &[MergeRecord]) -> io::Result<()> {
    write_row(w, &["edge_a", "edge_b", "length", "achieved_gap", "size_a", "size_b"])?;
    for m in log {
        write_row(
            w,
            &[
                m.edge.a.to_string(),
                m.edge.b.to_string(),
                fmt_f64(m.edge.length),
                fmt_f64(m.achieved_gap),
                m.size_a.to_string(),
                m.size_b.to_string(),
            ],
        )?;
    }
    Ok(())
}

/// `point,label,x,y`, with an empty label outside the reported components.
pub fn write_probe_points<W: Write>(w: &mut W, probe: &ProbeAnnotation) -> io::Result<()> {
    write_row(w, &["point", "label", "x", "y"])?;
    for (i, (label, p)) in probe.labels.iter().zip(&probe.coords).enumerate() {
        let label = label.map_or(String::new(), |l| l.to_string());
        write_row(w, &[i.to_string(), label, fmt_f64(p.x), fmt_f64(p.y)])?;
    }
    Ok(())
}

pub fn write_probe_components<W: Write>(w: &mut W, probe: &ProbeAnnotation) -> io::Result<()> {
    write_row(w, &["label", "size", "fragmentation"])?;
    for c in &probe.components {
        write_row(w, &[c.label.to_string(), c.size.to_string(), fmt_f64(c.fragmentation)])?;
    }
    Ok(())
}

fn report_fields(report: &VerificationReport) -> [(&'static str, String); 7] {
    [
        ("pd_equal", report.pd_equal.to_string()),
        ("tolerance", fmt_f64(report.tolerance)),
        ("edge_length_max_abs_error", fmt_f64(report.edge_length_max_abs_error)),
        ("edge_length_max_rel_error", fmt_f64(report.edge_length_max_rel_error)),
        ("lengths_within_tolerance", report.lengths_within_tolerance.to_string()),
        ("partitions_identical", report.partitions_identical.to_string()),
        ("first_divergent_k", report.first_divergent_k.map_or("none".into(), |k| k.to_string())),
    ]
}

pub fn write_report_text<W: Write>(w: &mut W, report: &VerificationReport) -> io::Result<()> {
    for (k, v) in report_fields(report) {
        writeln!(w, "{k}={v}")?;
    }
    Ok(())
}

pub fn write_report_csv<W: Write>(w: &mut W, report: &VerificationReport) -> io::Result<()> {
    let fields = report_fields(report);
    write_row(w, &fields.iter().map(|f| f.0).collect::<Vec<_>>())?;
    write_row(w, &fields.iter().map(|f| f.1.as_str()).collect::<Vec<_>>())
}

/// Output file that only appears at `path` once [`AtomicFile::commit`]
/// succeeds. Dropping it uncommitted leaves nothing behind.
pub struct AtomicFile {
    path: PathBuf,
    writer: BufWriter<tempfile::NamedTempFile>,
}

impl AtomicFile {
    pub fn create(path: &Path) -> Result<Self> {
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p,
            _ => Path::new("."),
        };
        let tmp = tempfile::NamedTempFile::new_in(dir).map_err(|source| IoError::Io { path: path.into(), source })?;
        Ok(Self { path: path.into(), writer: BufWriter::new(tmp) })
    }

    pub fn writer(&mut self) -> &mut impl Write {
        &mut self.writer
    }

    pub fn commit(self) -> Result<()> {
        let path = self.path;
        let tmp = self.writer.into_inner().map_err(|e| IoError::Io { path: path.clone(), source: e.into_error() })?;
        tmp.as_file().sync_all().map_err(|source| IoError::Io { path: path.clone(), source })?;
        tmp.persist(&path).map_err(|e| IoError::Io { path, source: e.error })?;
        Ok(())
    }
}

/// Renders into memory and then writes `path` atomically.
pub fn write_file_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let mut f = AtomicFile::create(path)?;
    f.writer().write_all(contents).map_err(|source| IoError::Io { path: path.into(), source })?;
    f.commit()
}

/// Runs a writer callback against an in-memory buffer.
pub fn to_bytes(f: impl FnOnce(&mut Vec<u8>) -> io::Result<()>) -> Vec<u8> {
    let mut buf = Vec::new();
    f(&mut buf).expect("writing to memory cannot fail");
    buf
}
