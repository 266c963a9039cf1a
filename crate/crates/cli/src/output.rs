use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Plain,
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub enum Cell {
    Int(u128),
    Signed(i64),
    Float(f64),
    Bool(bool),
}

impl Cell {
    fn text(&self) -> String {
        match *self {
            Cell::Int(x) => x.to_string(),
            Cell::Signed(x) => x.to_string(),
            Cell::Float(x) => format_float(x),
            Cell::Bool(x) => x.to_string(),
        }
    }

    fn json(&self) -> Value {
        match *self {
            Cell::Int(x) => match u64::try_from(x) {
                Ok(x) => Value::from(x),
                // serde_json without arbitrary_precision has no u128 Number
                Err(_) => Value::String(x.to_string()),
            },
            Cell::Signed(x) => Value::from(x),
            // round-trip through the printed digits so every format carries the same value
            Cell::Float(x) => format_float(x)
                .parse::<f64>()
                .ok()
                .and_then(Number::from_f64)
                .map_or(Value::Null, Value::Number),
            Cell::Bool(x) => Value::Bool(x),
        }
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x as u128)
    }
}
impl From<u128> for Cell {
    fn from(x: u128) -> Self {
        Cell::Int(x)
    }
}
impl From<i64> for Cell {
    fn from(x: i64) -> Self {
        Cell::Signed(x)
    }
}
impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}
impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

/// 12 significant digits, trailing zeros trimmed, at least one decimal.
pub fn format_float(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x:?}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        trim_fraction(&s)
    } else {
        let s = format!("{x:.11e}");
        let (mantissa, exponent) = s.split_once('e').expect("exponent form");
        format!("{}e{exponent}", trim_fraction(mantissa))
    }
}

fn trim_fraction(s: &str) -> String {
    if !s.contains('.') {
        return format!("{s}.0");
    }
    let t = s.trim_end_matches('0');
    if t.ends_with('.') {
        format!("{t}0")
    } else {
        t.to_string()
    }
}

/// Writes records and tables in one of the three formats.
///
/// JSON output is one object per line.
pub struct Emitter<W: Write> {
    out: W,
    format: OutputFormat,
    columns: Vec<&'static str>,
}

impl<W: Write> Emitter<W> {
    pub fn new(out: W, format: OutputFormat) -> Self {
        Emitter {
            out,
            format,
            columns: Vec::new(),
        }
    }

    fn object(fields: &[(&str, Cell)]) -> Value {
        Value::Object(
            fields
                .iter()
                .map(|(k, v)| (k.to_string(), v.json()))
                .collect::<Map<_, _>>(),
        )
    }

    /// A single record.
    pub fn record(&mut self, fields: &[(&'static str, Cell)]) -> io::Result<()> {
        match self.format {
            OutputFormat::Plain => {
                let line: Vec<String> = fields.iter().map(|(k, v)| format!("{k}={}", v.text())).collect();
                writeln!(self.out, "{}", line.join(" "))
            }
            OutputFormat::Csv => {
                let keys: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
                let values: Vec<String> = fields.iter().map(|(_, v)| v.text()).collect();
                writeln!(self.out, "{}", keys.join(","))?;
                writeln!(self.out, "{}", values.join(","))
            }
            OutputFormat::Json => writeln!(self.out, "{}", Self::object(fields)),
        }
    }

    pub fn header(&mut self, columns: &[&'static str]) -> io::Result<()> {
        self.columns = columns.to_vec();
        match self.format {
            OutputFormat::Plain => writeln!(self.out, "{}", columns.join(" ")),
            OutputFormat::Csv => writeln!(self.out, "{}", columns.join(",")),
            OutputFormat::Json => Ok(()),
        }
    }

    pub fn row(&mut self, cells: &[Cell]) -> io::Result<()> {
        debug_assert_eq!(cells.len(), self.columns.len());
        match self.format {
            OutputFormat::Plain | OutputFormat::Csv => {
                let sep = if self.format == OutputFormat::Csv { "," } else { " " };
                let values: Vec<String> = cells.iter().map(Cell::text).collect();
                writeln!(self.out, "{}", values.join(sep))
            }
            OutputFormat::Json => {
                let fields: Vec<(&str, Cell)> = self.columns.iter().copied().zip(cells.iter().cloned()).collect();
                writeln!(self.out, "{}", Self::object(&fields))
            }
        }
    }

    /// Summary after a table. In CSV it is a `#` comment line so the table
    /// itself stays numeric.
    pub fn footer(&mut self, fields: &[(&'static str, Cell)]) -> io::Result<()> {
        let pairs: Vec<String> = fields.iter().map(|(k, v)| format!("{k}={}", v.text())).collect();
        match self.format {
            OutputFormat::Plain => writeln!(self.out, "final {}", pairs.join(" ")),
            OutputFormat::Csv => writeln!(self.out, "# final,{}", pairs.join(",")),
            OutputFormat::Json => {
                let mut m = Map::new();
                m.insert("footer".into(), Self::object(fields));
                writeln!(self.out, "{}", Value::Object(m))
            }
        }
    }

    pub fn flush(&mut self) -> io::Result<()> {
        self.out.flush()
    }
}
