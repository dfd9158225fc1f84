//! Standalone SVG plots. Each embeds the plotted data as CSV inside
//! `<metadata>`, so a figure can be checked without re-running anything.

use std::fmt::Write as _;

const W: f64 = 640.0;
const H: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn open(out: &mut String, title: &str, data_csv: &str) {
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(out, "<title>{}</title>", escape(title)).unwrap();
    writeln!(out, "<metadata><data format=\"csv\"><![CDATA[\n{data_csv}]]></data></metadata>").unwrap();
    writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#).unwrap();
    writeln!(
        out,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        W / 2.0,
        escape(title)
    )
    .unwrap();
}

fn close(out: &mut String) {
    out.push_str("</svg>\n");
}

/// Extracts the CSV embedded by these plots.
pub fn embedded_data(svg: &str) -> Option<&str> {
    let start = svg.find("<![CDATA[\n")? + "<![CDATA[\n".len();
    let end = svg[start..].find("]]>")? + start;
    Some(&svg[start..end])
}

struct Scale {
    lo: f64,
    hi: f64,
    a: f64,
    b: f64,
}

impl Scale {
    fn new(lo: f64, hi: f64, a: f64, b: f64) -> Self {
        let (lo, hi) = if hi > lo { (lo, hi) } else { (lo - 0.5, lo + 0.5) };
        Scale { lo, hi, a, b }
    }

    fn at(&self, v: f64) -> f64 {
        self.a + (v - self.lo) / (self.hi - self.lo) * (self.b - self.a)
    }
}

fn axis_y(out: &mut String, y: &Scale, label: &str) {
    for i in 0..=4 {
        let v = y.lo + (y.hi - y.lo) * i as f64 / 4.0;
        let py = y.at(v);
        writeln!(
            out,
            r##"<line x1="{LEFT}" x2="{}" y1="{py:.2}" y2="{py:.2}" stroke="#ddd"/><text x="{}" y="{:.2}" text-anchor="end">{v:.3}</text>"##,
            W - RIGHT,
            LEFT - 6.0,
            py + 4.0
        )
        .unwrap();
    }
    writeln!(
        out,
        r#"<text transform="translate(16 {}) rotate(-90)" text-anchor="middle">{}</text>"#,
        (TOP + H - BOTTOM) / 2.0,
        escape(label)
    )
    .unwrap();
}

/// Linear-interpolated quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// One box (quartiles, median, min–max whiskers) per group.
pub fn boxplot(title: &str, y_label: &str, groups: &[(String, Vec<f64>)]) -> String {
    let mut data = String::from("group,value\n");
    for (g, vs) in groups {
        for v in vs {
            writeln!(data, "{g},{v}").unwrap();
        }
    }
    let mut out = String::new();
    open(&mut out, title, &data);
    let all: Vec<f64> = groups.iter().flat_map(|(_, v)| v.iter().copied()).collect();
    let lo = all.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = all.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let y = Scale::new(if lo.is_finite() { lo } else { 0.0 }, if hi.is_finite() { hi } else { 1.0 }, H - BOTTOM, TOP);
    axis_y(&mut out, &y, y_label);
    let slot = (W - LEFT - RIGHT) / groups.len().max(1) as f64;
    for (i, (g, vs)) in groups.iter().enumerate() {
        let cx = LEFT + slot * (i as f64 + 0.5);
        writeln!(out, r#"<text x="{cx:.2}" y="{}" text-anchor="middle">{}</text>"#, H - BOTTOM + 18.0, escape(g)).unwrap();
        if vs.is_empty() {
            continue;
        }
        let mut s = vs.clone();
        s.sort_by(f64::total_cmp);
        let [q0, q1, q2, q3, q4] = [0.0, 0.25, 0.5, 0.75, 1.0].map(|q| y.at(quantile(&s, q)));
        let half = slot * 0.25;
        writeln!(
            out,
            r##"<g stroke="#333" fill="none"><line x1="{cx:.2}" x2="{cx:.2}" y1="{q0:.2}" y2="{q4:.2}"/><rect x="{:.2}" y="{q3:.2}" width="{:.2}" height="{:.2}" fill="#9ecae1"/><line x1="{:.2}" x2="{:.2}" y1="{q2:.2}" y2="{q2:.2}" stroke-width="2"/></g>"##,
            cx - half,
            2.0 * half,
            (q1 - q3).max(0.5),
            cx - half,
            cx + half
        )
        .unwrap();
    }
    close(&mut out);
    out
}

/// Annotated matrix of values over labelled rows and columns.
pub fn heatmap(title: &str, labels: &[String], values: &[Vec<f64>]) -> String {
    let mut data = String::from("row,col,value\n");
    for (i, row) in values.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            writeln!(data, "{},{},{v}", labels[i], labels[j]).unwrap();
        }
    }
    let mut out = String::new();
    open(&mut out, title, &data);
    let n = labels.len().max(1) as f64;
    let side = ((W - LEFT - RIGHT).min(H - TOP - BOTTOM)) / n;
    let flat: Vec<f64> = values.iter().flatten().copied().collect();
    let lo = flat.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = flat.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let c = Scale::new(if lo.is_finite() { lo } else { 0.0 }, if hi.is_finite() { hi } else { 1.0 }, 0.0, 1.0);
    for (i, row) in values.iter().enumerate() {
        let py = TOP + side * i as f64;
        writeln!(out, r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#, LEFT - 6.0, py + side / 2.0 + 4.0, escape(&labels[i])).unwrap();
        for (j, &v) in row.iter().enumerate() {
            let px = LEFT + side * j as f64;
            let t = c.at(v);
            let shade = (255.0 - 200.0 * t).round() as u8;
            writeln!(
                out,
                r##"<rect x="{px:.2}" y="{py:.2}" width="{side:.2}" height="{side:.2}" fill="rgb({shade},{shade},255)" stroke="white"/><text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="10">{v:.3}</text>"##,
                px + side / 2.0,
                py + side / 2.0 + 4.0
            )
            .unwrap();
        }
    }
    for (j, l) in labels.iter().enumerate() {
        writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            LEFT + side * (j as f64 + 0.5),
            TOP + side * n + 16.0,
            escape(l)
        )
        .unwrap();
    }
    close(&mut out);
    out
}

/// Points with axis labels and a free-text annotation.
pub fn scatter(title: &str, x_label: &str, y_label: &str, points: &[(f64, f64)], note: &str) -> String {
    let mut data = format!("{x_label},{y_label}\n");
    for (x, y) in points {
        writeln!(data, "{x},{y}").unwrap();
    }
    let mut out = String::new();
    open(&mut out, title, &data);
    let bounds = |f: fn(&(f64, f64)) -> f64| {
        let lo = points.iter().map(f).fold(f64::INFINITY, f64::min);
        let hi = points.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
        if lo.is_finite() {
            (lo, hi)
        } else {
            (0.0, 1.0)
        }
    };
    let (x0, x1) = bounds(|p| p.0);
    let (y0, y1) = bounds(|p| p.1);
    let xs = Scale::new(x0, x1, LEFT + 10.0, W - RIGHT - 10.0);
    let ys = Scale::new(y0, y1, H - BOTTOM, TOP);
    axis_y(&mut out, &ys, y_label);
    for i in 0..=4 {
        let v = xs.lo + (xs.hi - xs.lo) * i as f64 / 4.0;
        writeln!(out, r#"<text x="{:.2}" y="{}" text-anchor="middle">{v:.3}</text>"#, xs.at(v), H - BOTTOM + 18.0).unwrap();
    }
    writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, (LEFT + W - RIGHT) / 2.0, H - 14.0, escape(x_label)).unwrap();
    for (x, y) in points {
        writeln!(out, r##"<circle cx="{:.2}" cy="{:.2}" r="3" fill="#3182bd" fill-opacity="0.6"/>"##, xs.at(*x), ys.at(*y)).unwrap();
    }
    writeln!(out, r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#, W - RIGHT - 6.0, TOP + 14.0, escape(note)).unwrap();
    close(&mut out);
    out
}
