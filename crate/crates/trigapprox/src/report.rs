use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Aggregate over asserted rows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    /// Largest `lhs / rhs` over rows with `rhs > 0`.
    pub worst_ratio: f64,
}

impl Default for Summary {
    fn default() -> Self {
        Summary { pass: 0, fail: 0, worst_ratio: 0.0 }
    }
}

impl Summary {
    pub fn record(&mut self, ok: bool, lhs: f64, rhs: f64) {
        if ok {
            self.pass += 1;
        } else {
            self.fail += 1;
        }
        if rhs > 0.0 {
            self.worst_ratio = self.worst_ratio.max(lhs / rhs);
        }
    }

    pub fn merge(mut self, o: Summary) -> Summary {
        self.pass += o.pass;
        self.fail += o.fail;
        self.worst_ratio = self.worst_ratio.max(o.worst_ratio);
        self
    }

    pub fn ok(&self) -> bool {
        self.fail == 0
    }
}

pub fn write_csv<T: Serialize, W: Write>(out: W, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv_file<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    write_csv(std::io::BufWriter::new(std::fs::File::create(path)?), rows)
}

pub fn write_json_file<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let f = std::io::BufWriter::new(std::fs::File::create(path)?);
    serde_json::to_writer_pretty(f, value)?;
    Ok(())
}

/// Gnuplot script plotting columns `ys` against `x` from a CSV with a header row.
pub fn plot_script(csv_path: &Path, x: &str, ys: &[&str]) -> String {
    let mut s = String::new();
    s.push_str("set datafile separator ','\n");
    s.push_str("set key autotitle columnhead\n");
    s.push_str(&format!("set xlabel '{x}'\n"));
    s.push_str("set logscale y\n");
    let file = csv_path.display();
    let parts: Vec<String> = ys
        .iter()
        .map(|y| format!("'{file}' using (column('{x}')):(column('{y}')) with lines title '{y}'"))
        .collect();
    s.push_str(&format!("plot {}\n", parts.join(", \\\n     ")));
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_merge() {
        let mut a = Summary::default();
        a.record(true, 1.0, 2.0);
        let mut b = Summary::default();
        b.record(false, 3.0, 2.0);
        b.record(true, 0.0, 0.0);
        let m = a.merge(b);
        assert_eq!((m.pass, m.fail), (2, 1));
        assert_eq!(m.worst_ratio, 1.5);
        assert!(!m.ok());
    }

    #[test]
    fn script_mentions_columns() {
        let s = plot_script(Path::new("out.csv"), "x", &["lhs", "thm1"]);
        assert!(s.contains("column('lhs')") && s.contains("'out.csv'"));
    }
}
