use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

use super::SweepRow;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TableFormat {
    #[default]
    Csv,
    Markdown,
}

impl FromStr for TableFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(TableFormat::Csv),
            "markdown" | "md" => Ok(TableFormat::Markdown),
            _ => Err(Error::Config(format!("unknown format `{s}` (csv, markdown)"))),
        }
    }
}

pub const COLUMNS: [&str; 9] = [
    "p",
    "dofs",
    "dg_error",
    "rate_dg",
    "l2_error",
    "rate_l2",
    "t_assemble_s",
    "t_solve_s",
    "dg_error_interior",
];

fn sci(v: f64) -> String {
    format!("{v:.2e}")
}

fn rate(r: Option<f64>) -> String {
    r.map(|v| format!("{v:.2}")).unwrap_or_default()
}

fn cells(row: &SweepRow) -> [String; 9] {
    let first = match row.h {
        Some(h) => format!("{h:.4}"),
        None => row.p.to_string(),
    };
    [
        first,
        row.dofs.to_string(),
        sci(row.errors.dg_error),
        rate(row.rate_dg),
        sci(row.errors.l2_error),
        rate(row.rate_l2),
        format!("{:.3}", row.t_assemble_s),
        format!("{:.3}", row.t_solve_s),
        sci(row.errors.dg_error_interior),
    ]
}

fn header(rows: &[SweepRow]) -> Vec<&'static str> {
    let mut h = COLUMNS.to_vec();
    if rows.first().is_some_and(|r| r.h.is_some()) {
        h[0] = "h";
    }
    h
}

/// Renders the rows; the first column is `h` for h-sweeps.
pub fn format_table(rows: &[SweepRow], format: TableFormat) -> String {
    let head = header(rows);
    let mut out = String::new();
    match format {
        TableFormat::Csv => {
            out.push_str(&head.join(","));
            out.push('\n');
            for r in rows {
                out.push_str(&cells(r).join(","));
                out.push('\n');
            }
        }
        TableFormat::Markdown => {
            let _ = writeln!(out, "| {} |", head.join(" | "));
            let _ = writeln!(out, "|{}", "---|".repeat(head.len()));
            for r in rows {
                let _ = writeln!(out, "| {} |", cells(r).join(" | "));
            }
        }
    }
    out
}

/// Writes the table to `path`.
pub fn emit_table(rows: &[SweepRow], format: TableFormat, path: &Path) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::precondition("no rows to write"));
    }
    std::fs::write(path, format_table(rows, format)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Cell values of a rendered table, header excluded.
pub fn parse_table(text: &str, format: TableFormat) -> Vec<Vec<String>> {
    let lines = text.lines().skip(match format {
        TableFormat::Csv => 1,
        TableFormat::Markdown => 2,
    });
    lines
        .map(|l| match format {
            TableFormat::Csv => l.split(',').map(str::to_string).collect(),
            TableFormat::Markdown => l
                .trim()
                .trim_matches('|')
                .split('|')
                .map(|c| c.trim().to_string())
                .collect(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::ErrorReport;

    fn row(p: usize, dg: f64, rate_dg: Option<f64>) -> SweepRow {
        SweepRow {
            p,
            h: None,
            dofs: 4 * (p + 1) * (p + 1),
            errors: ErrorReport {
                dg_error: dg,
                l2_error: dg / 10.0,
                dg_error_interior: dg / 2.0,
                ..Default::default()
            },
            rate_dg,
            rate_l2: rate_dg,
            t_assemble_s: 0.5,
            t_solve_s: 0.25,
        }
    }

    #[test]
    fn single_row_has_no_rate() {
        let t = format_table(&[row(2, 14.6, None)], TableFormat::Csv);
        let lines: Vec<_> = t.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].starts_with("p,dofs,dg_error,rate_dg,l2_error,rate_l2,t_assemble_s,t_solve_s"));
        assert_eq!(lines[1], "2,36,1.46e1,,1.46e0,,0.500,0.250,7.30e0");
    }

    #[test]
    fn markdown_matches_csv() {
        let rows = [row(2, 14.6, None), row(4, 5.07, Some(1.52))];
        let csv = parse_table(&format_table(&rows, TableFormat::Csv), TableFormat::Csv);
        let md = parse_table(&format_table(&rows, TableFormat::Markdown), TableFormat::Markdown);
        assert_eq!(csv, md);
        assert_eq!(csv[1][3], "1.52");
    }

    #[test]
    fn unwritable_path_is_an_error() {
        let err = emit_table(
            &[row(2, 1.0, None)],
            TableFormat::Csv,
            Path::new("/nonexistent/dir/t.csv"),
        );
        assert!(matches!(err, Err(Error::Io { .. })));
    }
}
