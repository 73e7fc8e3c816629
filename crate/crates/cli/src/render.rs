//! Aligned plain-text rendering of an [`Output`].

use std::fmt::Write;

use crate::report::{Output, Table, Value};

pub fn format_value(v: &Value) -> String {
    match v {
        Value::Number(n) => {
            if n.fract() == 0.0 && n.abs() < 1e15 {
                format!("{n:.0}")
            } else {
                format!("{n}")
            }
        }
        Value::Text(t) => t.clone(),
        Value::Bool(b) => if *b { "yes" } else { "no" }.to_string(),
    }
}

pub fn table(t: &Table) -> String {
    let cols = t.headers.len();
    let mut widths: Vec<usize> = t.headers.iter().map(|h| h.chars().count()).collect();
    for row in &t.rows {
        for (i, cell) in row.iter().enumerate().take(cols) {
            widths[i] = widths[i].max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| -> String {
        let parts: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        parts.join("  ").trim_end().to_string()
    };
    let mut out = String::new();
    if !t.title.is_empty() {
        let _ = writeln!(out, "{}", t.title);
    }
    let _ = writeln!(out, "{}", line(&t.headers));
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    let _ = writeln!(out, "{}", line(&rule));
    for row in &t.rows {
        let _ = writeln!(out, "{}", line(row));
    }
    out
}

/// Tables first, then every finding, then violations.
pub fn text(o: &Output) -> String {
    let mut out = String::new();
    for t in &o.tables {
        out.push_str(&table(t));
        out.push('\n');
    }
    let mut findings = Table::new(format!("{} findings", o.report.command), &["key", "value", "unit"]);
    for f in &o.report.findings {
        findings.row(vec![f.key.clone(), format_value(&f.value), f.unit.clone()]);
    }
    if !findings.rows.is_empty() {
        out.push_str(&table(&findings));
    }
    if o.report.violations.is_empty() {
        out.push_str("\nno violations\n");
    } else {
        out.push_str("\nviolations:\n");
        for v in &o.report.violations {
            let _ = writeln!(out, "  {v}");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn columns_align() {
        let mut t = Table::new("", &["a", "bb"]);
        t.row(vec!["long".into(), "x".into()]);
        assert_eq!(table(&t), "a     bb\n----  --\nlong  x\n");
    }

    #[test]
    fn integral_numbers_lose_the_point() {
        assert_eq!(format_value(&Value::Number(743.0)), "743");
        assert_eq!(format_value(&Value::Number(0.96)), "0.96");
    }
}
