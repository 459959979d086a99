//! CSV, Markdown and HTML renderings of the summary tables.

use std::fmt::Write as _;
use std::str::FromStr;

use revkano_core::eval::{GoldFeature, MatchResult};
use revkano_core::kano::KanoBucket;
use revkano_core::summary::{display_scaled, EntityTable, OverallTable, SentimentBar};
use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Md,
    Html,
}

impl Format {
    pub const ALL: [Format; 3] = [Format::Csv, Format::Md, Format::Html];

    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Md => "md",
            Format::Html => "html",
        }
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "md" | "markdown" => Ok(Format::Md),
            "html" => Ok(Format::Html),
            _ => Err(Error::Usage(format!("unknown format `{s}` (expected csv, md or html)"))),
        }
    }
}

const UNASSIGNED: &str = "Unassigned";

pub fn score(x: f64) -> String {
    format!("{x:.3}")
}

pub fn bar_text(bar: SentimentBar) -> String {
    bar.fraction().map(|f| format!("{f:.2}")).unwrap_or_default()
}

/// Green share of the bar as a whole percentage.
pub fn bar_percent(fraction: f64) -> u32 {
    (fraction * 100.0).round() as u32
}

fn bucket_name(b: Option<KanoBucket>) -> &'static str {
    b.map_or("unassigned", KanoBucket::as_str)
}

fn bucket_heading(b: Option<KanoBucket>) -> &'static str {
    b.map_or(UNASSIGNED, KanoBucket::heading)
}

fn csv_bytes(rows: impl IntoIterator<Item = Vec<String>>) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new()
        .flexible(true)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

pub fn overall_csv(table: &OverallTable) -> Vec<u8> {
    let header = ["bucket", "category_id", "label", "positive", "negative", "bar"]
        .map(String::from)
        .to_vec();
    csv_bytes(std::iter::once(header).chain(table.rows.iter().map(|r| {
        vec![
            bucket_name(r.bucket).to_string(),
            r.category_id.clone(),
            r.label.clone(),
            score(r.positive),
            score(r.negative),
            bar_text(r.bar),
        ]
    })))
}

pub fn entity_csv(table: &EntityTable) -> Vec<u8> {
    let mut header: Vec<String> = ["bucket", "category_id", "label"].map(String::from).to_vec();
    for e in &table.entities {
        header.push(format!("{e} positive"));
        header.push(format!("{e} negative"));
    }
    csv_bytes(std::iter::once(header).chain(table.rows.iter().map(|r| {
        let mut row = vec![bucket_name(r.bucket).to_string(), r.category_id.clone(), r.label.clone()];
        for cell in &r.cells {
            match cell.map(display_scaled) {
                Some(s) => {
                    row.push(score(s.positive));
                    row.push(score(s.negative));
                }
                None => row.extend([String::new(), String::new()]),
            }
        }
        row
    })))
}

fn md_escape(s: &str) -> String {
    s.replace('|', "\\|")
}

/// Heading shown on the first row of each bucket group, blank after.
fn group_labels<'a>(buckets: impl Iterator<Item = Option<KanoBucket>> + 'a) -> impl Iterator<Item = &'static str> + 'a {
    let mut prev: Option<Option<KanoBucket>> = None;
    buckets.map(move |b| {
        let label = if prev == Some(b) { "" } else { bucket_heading(b) };
        prev = Some(b);
        label
    })
}

pub fn overall_md(table: &OverallTable) -> String {
    let mut out = String::new();
    out.push_str("| Bucket | Aspects | Positive Score | Negative Score | Colour Bar |\n");
    out.push_str("|---|---|---:|---:|---:|\n");
    for (r, heading) in table.rows.iter().zip(group_labels(table.rows.iter().map(|r| r.bucket))) {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} |",
            heading,
            md_escape(&r.label),
            score(r.positive),
            score(r.negative),
            bar_text(r.bar)
        );
    }
    out
}

pub fn entity_md(table: &EntityTable) -> String {
    let mut out = String::from("| Bucket | Aspects |");
    for e in &table.entities {
        let _ = write!(out, " {0} + | {0} - |", md_escape(e));
    }
    out.push_str("\n|---|---|");
    out.push_str(&"---:|".repeat(table.entities.len() * 2));
    out.push('\n');
    for (r, heading) in table.rows.iter().zip(group_labels(table.rows.iter().map(|r| r.bucket))) {
        let _ = write!(out, "| {} | {} |", heading, md_escape(&r.label));
        for cell in &r.cells {
            match cell.map(display_scaled) {
                Some(s) => {
                    let _ = write!(out, " {} | {} |", score(s.positive), score(s.negative));
                }
                None => out.push_str("  |  |"),
            }
        }
        out.push('\n');
    }
    out
}

/// Both tables plus any warnings, as one Markdown document.
pub fn report_md(overall: &OverallTable, entities: &EntityTable) -> String {
    let mut out = String::from("# Aspect sentiment report\n\n## Overall sentiment score per aspect category\n\n");
    out.push_str(&overall_md(overall));
    out.push_str("\n## Per-entity scores (per review, x10^-4)\n\n");
    out.push_str(&entity_md(entities));
    if !overall.warnings.is_empty() {
        out.push_str("\n## Warnings\n\n");
        for w in &overall.warnings {
            let _ = writeln!(out, "- {w}");
        }
    }
    out
}

pub fn html_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            c => out.push(c),
        }
    }
    out
}

const GREEN: &str = "#2e7d32";
const RED: &str = "#c62828";

pub fn bar_html(bar: SentimentBar) -> String {
    match bar.fraction() {
        None => String::new(),
        Some(f) => {
            let green = bar_percent(f);
            format!(
                "<div style=\"display:flex;width:120px;height:12px;border:1px solid #999\">\
                 <div style=\"width:{green}%;background:{GREEN}\"></div>\
                 <div style=\"width:{}%;background:{RED}\"></div></div> {}",
                100 - green,
                bar_text(bar)
            )
        }
    }
}

const STYLE: &str = "body{font-family:sans-serif;margin:2em}\
table{border-collapse:collapse;margin-bottom:2em}\
th,td{border:1px solid #ccc;padding:4px 8px}\
td.num{text-align:right;font-variant-numeric:tabular-nums}\
td.bar{white-space:nowrap}td.bar div{display:inline-block;vertical-align:middle}";

fn group_cell(heading: &str, span: usize) -> String {
    if heading.is_empty() {
        String::new()
    } else {
        format!("<th rowspan=\"{span}\">{}</th>", html_escape(heading))
    }
}

fn group_spans(buckets: &[Option<KanoBucket>]) -> Vec<usize> {
    buckets
        .iter()
        .enumerate()
        .map(|(i, b)| buckets[i..].iter().take_while(|x| *x == b).count())
        .collect()
}

pub fn overall_html(table: &OverallTable) -> String {
    let buckets: Vec<_> = table.rows.iter().map(|r| r.bucket).collect();
    let spans = group_spans(&buckets);
    let mut out = String::from(
        "<table>\n<tr><th>Bucket</th><th>Aspects</th><th>Positive Score</th><th>Negative Score</th><th>Colour Bar</th></tr>\n",
    );
    for ((r, heading), span) in table.rows.iter().zip(group_labels(buckets.iter().copied())).zip(spans) {
        let _ = writeln!(
            out,
            "<tr>{}<td>{}</td><td class=\"num\">{}</td><td class=\"num\">{}</td><td class=\"bar\">{}</td></tr>",
            group_cell(heading, span),
            html_escape(&r.label),
            score(r.positive),
            score(r.negative),
            bar_html(r.bar)
        );
    }
    out.push_str("</table>\n");
    out
}

pub fn entity_html(table: &EntityTable) -> String {
    let buckets: Vec<_> = table.rows.iter().map(|r| r.bucket).collect();
    let spans = group_spans(&buckets);
    let mut out = String::from("<table>\n<tr><th rowspan=\"2\">Bucket</th><th rowspan=\"2\">Aspects</th>");
    for e in &table.entities {
        let _ = write!(out, "<th colspan=\"2\">{}</th>", html_escape(e));
    }
    out.push_str("</tr>\n<tr>");
    out.push_str(&"<th>+</th><th>-</th>".repeat(table.entities.len()));
    out.push_str("</tr>\n");
    for ((r, heading), span) in table.rows.iter().zip(group_labels(buckets.iter().copied())).zip(spans) {
        let _ = write!(out, "<tr>{}<td>{}</td>", group_cell(heading, span), html_escape(&r.label));
        for cell in &r.cells {
            match cell.map(display_scaled) {
                Some(s) => {
                    let _ = write!(
                        out,
                        "<td class=\"num\">{}</td><td class=\"num\">{}</td>",
                        score(s.positive),
                        score(s.negative)
                    );
                }
                None => out.push_str("<td></td><td></td>"),
            }
        }
        out.push_str("</tr>\n");
    }
    out.push_str("</table>\n");
    out
}

pub fn report_html(overall: &OverallTable, entities: &EntityTable) -> String {
    let mut out = format!(
        "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n\
         <title>Aspect sentiment report</title>\n<style>{STYLE}</style>\n</head>\n<body>\n\
         <h1>Aspect sentiment report</h1>\n<h2>Overall sentiment score per aspect category</h2>\n"
    );
    out.push_str(&overall_html(overall));
    out.push_str("<h2>Per-entity scores (per review, &times;10<sup>-4</sup>)</h2>\n");
    out.push_str(&entity_html(entities));
    if !overall.warnings.is_empty() {
        out.push_str("<h2>Warnings</h2>\n<ul>\n");
        for w in &overall.warnings {
            let _ = writeln!(out, "<li>{}</li>", html_escape(w));
        }
        out.push_str("</ul>\n");
    }
    out.push_str("</body>\n</html>\n");
    out
}

/// Everything the evaluation table shows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalSummary {
    pub entities: Vec<String>,
    pub gold: Vec<GoldFeature>,
    pub matches: MatchResult,
    /// Per entity in `entities` order; `None` when no gold feature is offered.
    pub recall: Vec<Option<f64>>,
    pub overall_recall: Option<f64>,
    pub true_positives: usize,
    pub false_positives: usize,
    pub precision: Option<f64>,
}

pub fn percent(x: Option<f64>) -> String {
    x.map(|v| format!("{:.2}%", v * 100.0)).unwrap_or_default()
}

fn eval_rows(s: &EvalSummary) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    let mut header = vec!["Listed Aspects".to_string()];
    header.extend(s.entities.iter().cloned());
    header.push("Extracted Aspects".into());
    rows.push(header);
    for g in &s.gold {
        let mut row = vec![g.name.clone()];
        for e in &s.entities {
            row.push(if g.offered_by.contains(e) { "Y".into() } else { String::new() });
        }
        row.push(s.matches.extracted_for(&g.name).join(", "));
        rows.push(row);
    }
    let mut recall = vec!["Recall".to_string()];
    recall.extend(s.recall.iter().map(|r| percent(*r)));
    recall.push(percent(s.overall_recall));
    rows.push(recall);
    rows
}

pub fn eval_csv(s: &EvalSummary) -> Vec<u8> {
    let mut rows = eval_rows(s);
    rows.push(vec![
        "Precision".into(),
        format!("{}/({}+{})", s.true_positives, s.true_positives, s.false_positives),
        percent(s.precision),
    ]);
    csv_bytes(rows)
}

pub fn eval_md(s: &EvalSummary) -> String {
    let rows = eval_rows(s);
    let mut out = String::new();
    for (i, row) in rows.iter().enumerate() {
        out.push('|');
        for cell in row {
            let _ = write!(out, " {} |", md_escape(cell));
        }
        out.push('\n');
        if i == 0 {
            out.push('|');
            out.push_str(&"---|".repeat(row.len()));
            out.push('\n');
        }
    }
    let _ = writeln!(
        out,
        "\nprecision = {tp}/({tp}+{fp}) = {}",
        percent(s.precision),
        tp = s.true_positives,
        fp = s.false_positives
    );
    out
}

pub fn eval_html(s: &EvalSummary) -> String {
    let rows = eval_rows(s);
    let mut out = format!(
        "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n\
         <title>Extraction evaluation</title>\n<style>{STYLE}</style>\n</head>\n<body>\n<table>\n"
    );
    for (i, row) in rows.iter().enumerate() {
        let tag = if i == 0 { "th" } else { "td" };
        out.push_str("<tr>");
        for cell in row {
            let _ = write!(out, "<{tag}>{}</{tag}>", html_escape(cell));
        }
        out.push_str("</tr>\n");
    }
    let _ = writeln!(
        out,
        "</table>\n<p>precision = {tp}/({tp}+{fp}) = {}</p>\n</body>\n</html>",
        percent(s.precision),
        tp = s.true_positives,
        fp = s.false_positives
    );
    out
}
