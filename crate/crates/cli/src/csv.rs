//! The output CSV dialect: rectangular numeric tables, comma-separated,
//! newline-terminated rows, header always emitted, every cell rendered in
//! scientific notation with 12 significant digits. Missing values render
//! as `nan`.

/// A rectangular numeric table.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.header.len(), "ragged CSV row");
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| sci12(x)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut lines = text.lines();
        let header: Vec<String> = lines
            .next()
            .ok_or("empty CSV input")?
            .split(',')
            .map(|s| s.to_string())
            .collect();
        let mut rows = Vec::new();
        for (k, line) in lines.enumerate() {
            if line.is_empty() {
                continue;
            }
            let row: Result<Vec<f64>, String> = line
                .split(',')
                .map(|cell| {
                    cell.parse::<f64>()
                        .map_err(|e| format!("row {}: bad cell {cell:?}: {e}", k + 1))
                })
                .collect();
            let row = row?;
            if row.len() != header.len() {
                return Err(format!("row {}: expected {} cells", k + 1, header.len()));
            }
            rows.push(row);
        }
        Ok(Self { header, rows })
    }
}

/// Scientific notation with 12 significant digits and a signed two-digit
/// exponent, e.g. `2.82094791774e-01`. Deterministic and locale-free.
pub fn sci12(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if x == 0.0 {
        return "0.00000000000e+00".to_string();
    }
    let s = format!("{x:.11e}");
    let (mantissa, exp) = s.split_once('e').expect("exponential format");
    let e: i32 = exp.parse().expect("integer exponent");
    format!("{mantissa}e{}{:02}", if e < 0 { "-" } else { "+" }, e.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sci12_formats() {
        assert_eq!(sci12(0.0), "0.00000000000e+00");
        assert_eq!(sci12(-0.0), "0.00000000000e+00");
        assert_eq!(sci12(1.0), "1.00000000000e+00");
        assert_eq!(sci12(-2.5), "-2.50000000000e+00");
        assert_eq!(sci12(0.28209479177387814), "2.82094791774e-01");
        assert_eq!(sci12(1.5e-40), "1.50000000000e-40");
        assert_eq!(sci12(6.022e23), "6.02200000000e+23");
        assert_eq!(sci12(f64::NAN), "nan");
    }

    #[test]
    fn render_parse_round_trip_is_exact() {
        let mut t = CsvTable::new(&["a", "b", "c"]);
        t.push(vec![1.0, -2.5e-7, f64::NAN]);
        t.push(vec![0.0, 12345.6789, 1e-300]);
        let text = t.render();
        let back = CsvTable::parse(&text).unwrap();
        assert_eq!(back.render(), text);
        assert_eq!(back.header, t.header);
    }

    #[test]
    fn parse_rejects_ragged_rows() {
        assert!(CsvTable::parse("a,b\n1.0\n").is_err());
        assert!(CsvTable::parse("a,b\n1.0,x\n").is_err());
    }
}
