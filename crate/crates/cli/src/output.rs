//! CSV rendering and the optional SVG line plot.

use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Bool(bool),
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Cell {
        Cell::Text(s.into())
    }

    fn render(&self) -> String {
        match self {
            Cell::Num(x) if x.is_nan() => "nan".into(),
            Cell::Num(x) if x.is_infinite() => if *x > 0.0 { "inf" } else { "-inf" }.into(),
            Cell::Num(x) => format!("{x:.11e}"),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn number(&self) -> Option<f64> {
        match *self {
            Cell::Num(x) if x.is_finite() => Some(x),
            Cell::Int(n) => Some(n as f64),
            _ => None,
        }
    }
}

pub const STATUS_OK: &str = "ok";
pub const STATUS_FAILED: &str = "nonconverged";

/// Column names, rows and the columns an SVG plot should use.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub x_column: usize,
    pub y_column: usize,
    /// Rows with equal text in this column form one plotted line.
    pub series_column: Option<usize>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>, x_column: usize, y_column: usize) -> Table {
        Table { columns, rows: Vec::new(), x_column, y_column, series_column: None }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn to_csv(&self, preamble: &[String]) -> String {
        let mut out = String::new();
        for line in preamble {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// A plain line plot of `y_column` against `x_column`.
    pub fn to_svg(&self, title: &str) -> String {
        const W: f64 = 720.0;
        const H: f64 = 440.0;
        const M: f64 = 70.0;
        let mut series: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
        for row in &self.rows {
            let (Some(x), Some(y)) = (row[self.x_column].number(), row[self.y_column].number()) else {
                continue;
            };
            let name = self.series_column.map(|c| row[c].render()).unwrap_or_default();
            match series.iter_mut().find(|s| s.0 == name) {
                Some(s) => s.1.push((x, y)),
                None => series.push((name, vec![(x, y)])),
            }
        }
        let points = series.iter().flat_map(|s| s.1.iter());
        let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for &(x, y) in points {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if x1 <= x0 {
            x1 = x0 + 1.0;
        }
        if y1 <= y0 {
            y1 = y0 + 1.0;
        }
        let px = |x: f64| M + (x - x0) / (x1 - x0) * (W - 2.0 * M);
        let py = |y: f64| H - M - (y - y0) / (y1 - y0) * (H - 2.0 * M);

        let colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
        let mut svg = String::new();
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(svg, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
            W / 2.0,
            escape(title)
        );
        let _ =
            writeln!(svg, r#"<path d="M{M} {} H{} M{M} {} V{M}" stroke="black" fill="none"/>"#, H - M, W - M, H - M);
        let _ = writeln!(svg, r#"<text x="{M}" y="{}" text-anchor="start">{x0:.4e}</text>"#, H - M + 18.0);
        let _ = writeln!(svg, r#"<text x="{}" y="{}" text-anchor="end">{x1:.4e}</text>"#, W - M, H - M + 18.0);
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            W / 2.0,
            H - 20.0,
            self.columns[self.x_column]
        );
        let _ = writeln!(svg, r#"<text x="{}" y="{}" text-anchor="end">{y0:.4e}</text>"#, M - 4.0, H - M);
        let _ = writeln!(svg, r#"<text x="{}" y="{}" text-anchor="end">{y1:.4e}</text>"#, M - 4.0, M + 4.0);
        let _ = writeln!(
            svg,
            r#"<text x="16" y="{}" transform="rotate(-90 16 {})" text-anchor="middle">{}</text>"#,
            H / 2.0,
            H / 2.0,
            self.columns[self.y_column]
        );
        for (i, (name, pts)) in series.iter().enumerate() {
            let color = colors[i % colors.len()];
            let path: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
            let _ = writeln!(
                svg,
                r#"<polyline points="{}" stroke="{color}" stroke-width="1.5" fill="none"/>"#,
                path.join(" ")
            );
            for &(x, y) in pts {
                let _ = writeln!(svg, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}"/>"#, px(x), py(y));
            }
            if !name.is_empty() {
                let _ = writeln!(
                    svg,
                    r#"<text x="{}" y="{}" fill="{color}">{}</text>"#,
                    W - M + 6.0,
                    M + 16.0 * i as f64,
                    escape(name)
                );
            }
        }
        svg.push_str("</svg>\n");
        svg
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
