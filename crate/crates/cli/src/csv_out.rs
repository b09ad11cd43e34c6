//! Fixed-format CSV: `{:.16e}` numbers (17 significant digits), `.` as the
//! decimal separator, LF line endings, `#` comment lines before the column
//! header.

use std::fmt::Write as _;

use falva_core::Complex64;

pub const SCHEMA_VERSION: u32 = 1;

pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Default)]
pub struct CsvTable {
    text: String,
}

impl CsvTable {
    /// Starts a table with the version line
    /// `# falva <version> csv-schema=<n> kind=<kind> <extra...>`.
    pub fn new(kind: &str, extra: &[(&str, String)]) -> Self {
        let mut text = format!("# falva {} csv-schema={SCHEMA_VERSION} kind={kind}", env!("CARGO_PKG_VERSION"));
        for (k, v) in extra {
            let _ = write!(text, " {k}={v}");
        }
        text.push('\n');
        Self { text }
    }

    pub fn comment(&mut self, key: &str, value: impl AsRef<str>) -> &mut Self {
        let _ = writeln!(self.text, "# {key}={}", value.as_ref());
        self
    }

    pub fn columns(&mut self, names: &[&str]) -> &mut Self {
        self.text.push_str(&names.join(","));
        self.text.push('\n');
        self
    }

    pub fn row(&mut self, cells: &[String]) -> &mut Self {
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
        self
    }

    pub fn into_string(self) -> String {
        self.text
    }
}

pub fn complex_cells(z: Complex64) -> [String; 2] {
    [num(z.re), num(z.im)]
}

pub fn list(values: &[f64]) -> String {
    values.iter().map(|&v| num(v)).collect::<Vec<_>>().join(";")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(num(0.1), "1.0000000000000001e-1");
        assert_eq!(num(1.0), "1.0000000000000000e0");
        assert_eq!(num(-2.5e-300), "-2.5000000000000000e-300");
        let back: f64 = num(std::f64::consts::PI).parse().unwrap();
        assert_eq!(back, std::f64::consts::PI);
    }

    #[test]
    fn layout() {
        let mut t = CsvTable::new("action", &[("order-pair", "forward=(alpha,delta)".into())]);
        t.comment("observer", "1").columns(&["a", "b"]).row(&["1".into(), "2".into()]);
        let s = t.into_string();
        assert!(s.starts_with("# falva "));
        assert!(s.ends_with("a,b\n1,2\n"));
        assert!(!s.contains('\r'));
    }

    proptest::proptest! {
        #[test]
        fn cells_round_trip_bit_for_bit(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
            let back: f64 = num(x).parse().unwrap();
            proptest::prop_assert_eq!(back.to_bits(), x.to_bits());
        }
    }
}
