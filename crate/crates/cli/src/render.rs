//! Output formats shared by every subcommand.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use umbral_lab::Rat;

use crate::Format;

/// A rectangular table of preformatted cells.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text(),
            Format::Csv => self.csv(),
            Format::Json => self.json(),
            Format::Markdown => self.markdown(),
        }
    }

    fn text(&self) -> String {
        let mut widths: Vec<usize> = self.header.iter().map(String::len).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let line = |cells: &[String]| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect();
            padded.join("  ")
        };
        let mut out = line(&self.header) + "\n";
        for row in &self.rows {
            out += &line(row);
            out.push('\n');
        }
        out
    }

    fn csv(&self) -> String {
        let mut out = self.header.iter().map(|c| csv_cell(c)).collect::<Vec<_>>().join(",") + "\n";
        for row in &self.rows {
            out += &row.iter().map(|c| csv_cell(c)).collect::<Vec<_>>().join(",");
            out.push('\n');
        }
        out
    }

    fn markdown(&self) -> String {
        let mut out = format!("| {} |\n", self.header.join(" | "));
        out += &format!("|{}\n", "---|".repeat(self.header.len()));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| c.replace('|', "\\|")).collect();
            out += &format!("| {} |\n", cells.join(" | "));
        }
        out
    }

    fn json(&self) -> String {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj = self
                    .header
                    .iter()
                    .zip(row)
                    .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
                    .collect();
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::to_string_pretty(&rows).expect("table serializes") + "\n"
    }
}

fn csv_cell(cell: &str) -> String {
    if cell.contains([',', '"', '\n']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

/// `p/q`, or `p` when `q = 1`.
pub fn rat(value: &Rat) -> String {
    value.to_string()
}

/// Decimal approximation rounded half away from zero to `digits` places.
pub fn approx(value: &Rat, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let num: BigInt = value.numer().abs() * &scale * 2 + value.denom();
    let (rounded, _) = num.div_rem(&(value.denom() * 2));
    let (int_part, frac_part) = rounded.div_rem(&scale);
    let sign = if value.is_negative() && !rounded.is_zero() { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part:0>digits$}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rationals_print_exactly() {
        assert_eq!(rat(&r(10, 4)), "5/2");
        assert_eq!(rat(&r(6, 2)), "3");
        assert_eq!(rat(&r(-1, 3)), "-1/3");
    }

    #[test]
    fn approximations_round() {
        assert_eq!(approx(&r(5, 2), 3), "2.500");
        assert_eq!(approx(&r(26, 9), 4), "2.8889");
        assert_eq!(approx(&r(-2, 3), 2), "-0.67");
        assert_eq!(approx(&r(1, 200), 2), "0.01");
        assert_eq!(approx(&r(-1, 1000), 2), "0.00");
        assert_eq!(approx(&r(7, 2), 0), "4");
    }

    #[test]
    fn csv_has_header_and_lf() {
        let mut t = Table::new(["n", "value"]);
        t.push(vec!["1".into(), "a,b".into()]);
        assert_eq!(t.render(Format::Csv), "n,value\n1,\"a,b\"\n");
    }

    #[test]
    fn markdown_and_json() {
        let mut t = Table::new(["n", "xi"]);
        t.push(vec!["2".into(), "5/2".into()]);
        assert_eq!(t.render(Format::Markdown), "| n | xi |\n|---|---|\n| 2 | 5/2 |\n");
        let parsed: serde_json::Value = serde_json::from_str(&t.render(Format::Json)).unwrap();
        assert_eq!(parsed[0]["xi"], "5/2");
    }
}
