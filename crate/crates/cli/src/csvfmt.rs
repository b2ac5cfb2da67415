//! CSV output: LF line endings, '.' decimals, scientific notation outside
//! `[1e-6, 1e6)` in magnitude.

use crate::CliError;

pub fn fmt_num(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || !v.is_finite() || (1e-6..1e6).contains(&a) {
        // Display is the shortest round-trip representation
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub fn fmt_fixed5(v: f64) -> String {
    format!("{v:.5}")
}

pub struct CsvOut {
    w: csv::Writer<Vec<u8>>,
}

impl CsvOut {
    pub fn new() -> Self {
        let w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .flexible(false)
            .from_writer(Vec::new());
        Self { w }
    }

    pub fn record<I, T>(&mut self, fields: I) -> Result<(), CliError>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<[u8]>,
    {
        self.w.write_record(fields).map_err(|e| CliError::Io(e.to_string()))
    }

    pub fn finish(self) -> Result<String, CliError> {
        let bytes = self.w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
    }
}

impl Default for CsvOut {
    fn default() -> Self {
        Self::new()
    }
}
