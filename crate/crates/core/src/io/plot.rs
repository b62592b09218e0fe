//! MS-Plot exports: point table as CSV and a static SVG scatter of
//! `|MO|` against `VO`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::detectors::{DetectionResult, MsPoint};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlotFormat {
    Csv,
    Svg,
}

fn points(result: &DetectionResult) -> Result<&[MsPoint]> {
    match result.ms_points.as_deref() {
        Some(p) if !p.is_empty() => Ok(p),
        _ => Err(Error::NoPoints),
    }
}

/// `frame,norm_mo,vo,srmd,label`, floats in shortest round-trip form.
pub fn msplot_csv(result: &DetectionResult) -> Result<String> {
    let pts = points(result)?;
    let mut out = String::from("frame,norm_mo,vo,srmd,label\n");
    for (i, p) in pts.iter().enumerate() {
        writeln!(
            out,
            "{},{:?},{:?},{:?},{}",
            p.frame, p.norm_mo, p.vo, result.scores[i], result.labels[i] as u8
        )
        .expect("writing to a String");
    }
    Ok(out)
}

/// Parse a CSV written by [`msplot_csv`] into points, scores and labels.
pub fn parse_msplot_csv(text: &str) -> Result<(Vec<MsPoint>, Vec<f64>, Vec<bool>)> {
    let mut lines = text.lines();
    let bad = |line: usize, why: &str| Error::InvalidParameter(format!("MS-Plot CSV line {line}: {why}"));
    if lines.next() != Some("frame,norm_mo,vo,srmd,label") {
        return Err(bad(1, "unexpected header"));
    }
    let (mut pts, mut scores, mut labels) = (Vec::new(), Vec::new(), Vec::new());
    for (k, line) in lines.enumerate() {
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 5 {
            return Err(bad(k + 2, "expected 5 fields"));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad(k + 2, "bad number"));
        pts.push(MsPoint {
            frame: f[0].parse().map_err(|_| bad(k + 2, "bad frame"))?,
            norm_mo: num(f[1])?,
            vo: num(f[2])?,
        });
        scores.push(num(f[3])?);
        labels.push(match f[4] {
            "0" => false,
            "1" => true,
            _ => return Err(bad(k + 2, "label must be 0 or 1")),
        });
    }
    Ok((pts, scores, labels))
}

fn extent(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, hi + 0.5)
    }
}

pub fn msplot_svg(result: &DetectionResult, title: &str) -> Result<String> {
    let pts = points(result)?;
    let (w, h, m) = (640.0, 480.0, 60.0);
    let (x0, x1) = extent(pts.iter().map(|p| p.norm_mo));
    let (y0, y1) = extent(pts.iter().map(|p| p.vo));
    let sx = |x: f64| m + (x - x0) / (x1 - x0) * (w - 2.0 * m);
    let sy = |y: f64| h - m - (y - y0) / (y1 - y0) * (h - 2.0 * m);
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    )
    .unwrap();
    s.push_str(
        "<style>.normal{fill:#4477aa;fill-opacity:0.6}.anomaly{fill:#cc3311}\
         .axis{stroke:#000}text{font-family:sans-serif;font-size:13px}</style>\n",
    );
    writeln!(s, r#"<text x="{}" y="24" text-anchor="middle">{}</text>"#, w / 2.0, escape(title)).unwrap();
    writeln!(s, r#"<line class="axis" x1="{m}" y1="{}" x2="{}" y2="{}"/>"#, h - m, w - m, h - m).unwrap();
    writeln!(s, r#"<line class="axis" x1="{m}" y1="{m}" x2="{m}" y2="{}"/>"#, h - m).unwrap();
    writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">|MO|</text>"#, w / 2.0, h - 20.0).unwrap();
    writeln!(
        s,
        r#"<text x="18" y="{}" text-anchor="middle" transform="rotate(-90 18 {})">VO</text>"#,
        h / 2.0,
        h / 2.0
    )
    .unwrap();
    for (label, x) in [(x0, m), (x1, w - m)] {
        writeln!(s, r#"<text x="{x}" y="{}" text-anchor="middle">{label:.3}</text>"#, h - m + 16.0).unwrap();
    }
    for (label, y) in [(y0, h - m), (y1, m)] {
        writeln!(s, r#"<text x="{}" y="{y}" text-anchor="end">{label:.3}</text>"#, m - 6.0).unwrap();
    }
    for (p, &flag) in pts.iter().zip(&result.labels) {
        let class = if flag { "anomaly" } else { "normal" };
        writeln!(
            s,
            r#"<circle class="{class}" cx="{:.2}" cy="{:.2}" r="3"><title>frame {}</title></circle>"#,
            sx(p.norm_mo),
            sy(p.vo),
            p.frame
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn export_msplot(result: &DetectionResult, path: &Path, format: PlotFormat) -> Result<()> {
    let body = match format {
        PlotFormat::Csv => msplot_csv(result)?,
        PlotFormat::Svg => {
            let title = path.file_stem().and_then(|s| s.to_str()).unwrap_or("MS-Plot");
            msplot_svg(result, title)?
        }
    };
    fs::write(path, body).map_err(|e| Error::io(format!("writing {}", path.display()), e))
}
