//! Fixed-schema CSV output.
//!
//! Every file starts with a `#`-prefixed schema line carrying the schema tag,
//! the command name, and the audit trail (seed, tolerances, optimizer
//! defaults), then a header row, then data rows. Floats are printed with 17
//! significant digits so round-trips are lossless.

/// One CSV cell.
#[derive(Debug, Clone)]
pub enum Cell {
    Int(i64),
    Uint(u64),
    Float(f64),
    Str(String),
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Uint(v as u64)
    }
}
impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Uint(v)
    }
}
impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}
impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Str(v.to_string())
    }
}
impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Str(v)
    }
}

/// 17 significant digits; infinities print as `inf`/`-inf`.
pub fn format_float(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else if v.is_nan() {
        "nan".into()
    } else {
        format!("{v:.16e}")
    }
}

/// Parse a float written by [`format_float`].
pub fn parse_float(s: &str) -> Option<f64> {
    match s {
        "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        "nan" => Some(f64::NAN),
        other => other.parse().ok(),
    }
}

pub struct CsvBuilder {
    text: String,
}

impl CsvBuilder {
    pub fn new(command: &str, meta: &[(&str, String)]) -> Self {
        let mut line = format!("# mcmetric-csv v1 command={command}");
        for (k, v) in meta {
            line.push_str(&format!(" {k}={v}"));
        }
        line.push('\n');
        Self { text: line }
    }

    pub fn header(&mut self, cols: &[&str]) {
        self.text.push_str(&cols.join(","));
        self.text.push('\n');
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        let fields: Vec<String> = cells
            .into_iter()
            .map(|c| match c {
                Cell::Int(v) => v.to_string(),
                Cell::Uint(v) => v.to_string(),
                Cell::Float(v) => format_float(v),
                Cell::Str(v) => v,
            })
            .collect();
        self.text.push_str(&fields.join(","));
        self.text.push('\n');
    }

    pub fn finish(self) -> String {
        self.text
    }
}
