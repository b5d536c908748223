use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::metrics::{EvalResult, PerFrame};
use crate::error::Result;
use crate::harness::Split;
use crate::pipelines::Variant;

/// One `(variant, split)` cell of a report, with full-precision values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub variant: String,
    pub split: Split,
    pub m_iou: f64,
    pub f_score: f64,
    pub beta_sq: f64,
    pub per_frame: Vec<PerFrame>,
}

/// Results keyed by variant name, then split.
pub type ResultTable = BTreeMap<String, BTreeMap<Split, EvalResult>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Report {
    pub entries: Vec<ReportEntry>,
}

/// Known variants appear in this order; anything else follows alphabetically.
const ROW_ORDER: [Variant; 3] = [Variant::AtGdinoSam, Variant::SamBind, Variant::OwodBind];

fn row_rank(name: &str) -> usize {
    ROW_ORDER
        .iter()
        .position(|v| v.display_name() == name)
        .unwrap_or(ROW_ORDER.len())
}

/// Flattens a result table into report rows.
pub fn report_table(results: &ResultTable) -> Report {
    let mut names: Vec<&String> = results.keys().collect();
    names.sort_by(|a, b| row_rank(a).cmp(&row_rank(b)).then_with(|| a.cmp(b)));
    let entries = names
        .into_iter()
        .flat_map(|name| {
            results[name].iter().map(move |(split, r)| ReportEntry {
                variant: name.clone(),
                split: *split,
                m_iou: r.m_iou,
                f_score: r.f_score,
                beta_sq: r.beta_sq,
                per_frame: r.per_frame.clone(),
            })
        })
        .collect();
    Report { entries }
}

const CELL: usize = 9;

impl Report {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Fixed-width table: one row per variant, columns S4 and MS3, each with
    /// mIoU and F-score rounded to two decimals. Missing cells print `-`.
    pub fn render_text(&self) -> String {
        let mut rows: Vec<&str> = Vec::new();
        for e in &self.entries {
            if !rows.contains(&e.variant.as_str()) {
                rows.push(&e.variant);
            }
        }
        let name_w = rows.iter().map(|r| r.len()).chain([8]).max().unwrap_or(8) + 2;
        let group_w = 2 * CELL;

        let mut out = String::new();
        let _ = write!(out, "{:<name_w$}", "Approach");
        for split in Split::ALL {
            let _ = write!(out, "{:<group_w$}", split.dir_name());
        }
        out = out.trim_end().to_string();
        out.push('\n');
        let _ = write!(out, "{:<name_w$}", "");
        for _ in Split::ALL {
            let _ = write!(out, "{:<CELL$}{:<CELL$}", "M_IOU", "F_score");
        }
        out = out.trim_end().to_string();
        out.push('\n');
        out.push_str(&"-".repeat(name_w + group_w * Split::ALL.len() - 2));
        out.push('\n');

        for name in rows {
            let mut line = format!("{name:<name_w$}");
            for split in Split::ALL {
                match self.entries.iter().find(|e| e.variant == name && e.split == split) {
                    Some(e) => {
                        let _ = write!(line, "{:<CELL$}{:<CELL$}", format!("{:.2}", e.m_iou), format!("{:.2}", e.f_score));
                    }
                    None => {
                        let _ = write!(line, "{:<CELL$}{:<CELL$}", "-", "-");
                    }
                }
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn result(m_iou: f64, f_score: f64) -> EvalResult {
        EvalResult {
            m_iou,
            f_score,
            beta_sq: 0.3,
            per_frame: vec![],
        }
    }

    fn normalized(line: &str) -> String {
        line.split_whitespace().collect::<Vec<_>>().join(" ")
    }

    #[test]
    fn single_cell_is_one_row() {
        let mut t = ResultTable::new();
        t.entry("OWOD-BIND".into()).or_default().insert(Split::S4, result(1.0, 1.0));
        let text = report_table(&t).render_text();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(normalized(lines[3]), "OWOD-BIND 1.00 1.00 - -");
    }

    #[test]
    fn table_layout_matches_reference_rows() {
        let mut t = ResultTable::new();
        let mut put = |name: &str, s4: (f64, f64), ms3: (f64, f64)| {
            let e = t.entry(name.to_string()).or_default();
            e.insert(Split::S4, result(s4.0, s4.1));
            e.insert(Split::MS3, result(ms3.0, ms3.1));
        };
        put("OWOD-BIND", (0.58, 0.67), (0.34, 0.44));
        put("AT-GDINO-SAM", (0.38, 0.46), (0.25, 0.29));
        put("SAM-BIND", (0.42, 0.51), (0.28, 0.36));
        let text = report_table(&t).render_text();
        let lines: Vec<_> = text.lines().map(normalized).collect();
        assert_eq!(lines[0], "Approach S4 MS3");
        assert_eq!(lines[1], "M_IOU F_score M_IOU F_score");
        assert_eq!(lines[3], "AT-GDINO-SAM 0.38 0.46 0.25 0.29");
        assert_eq!(lines[4], "SAM-BIND 0.42 0.51 0.28 0.36");
        assert_eq!(lines[5], "OWOD-BIND 0.58 0.67 0.34 0.44");
    }

    #[test]
    fn json_round_trips() {
        let mut t = ResultTable::new();
        let mut r = result(0.123456789, 0.987654321);
        r.per_frame.push(PerFrame {
            frame_id: "v/1".into(),
            iou: 0.1,
            precision: 0.2,
            recall: 0.3,
            f: 0.4,
        });
        t.entry("custom".into()).or_default().insert(Split::MS3, r);
        let report = report_table(&t);
        let back = Report::from_json(&report.to_json().unwrap()).unwrap();
        assert_eq!(back, report);
        assert!(report.to_json().unwrap().contains("\"split\": \"MS3\""));
    }
}
