//! On-disk record formats: canonical JSON with a config-echo header, plus
//! CSV and Markdown projections of classification and verification runs.

use fqmzv::{ClassificationRecord, Result, ResultSet, VerificationReport};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub tool: String,
    pub q: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u8>>,
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordFile {
    pub header: Header,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub classifications: Vec<ClassificationRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub verifications: Vec<VerificationReport>,
}

pub fn tool_version() -> String {
    format!("fqmzv {}", env!("CARGO_PKG_VERSION"))
}

/// Canonical form: pretty JSON with keys sorted at every level.
pub fn canonical_json(file: &RecordFile) -> Result<String> {
    let value = serde_json::to_value(file)?;
    Ok(serde_json::to_string_pretty(&value)? + "\n")
}

pub fn parse_json(text: &str) -> Result<RecordFile> {
    Ok(serde_json::from_str(text)?)
}

fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

fn dash_joined(entries: &[u32]) -> String {
    entries
        .iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join("-")
}

pub fn csv_classifications(records: &[ClassificationRecord]) -> String {
    let mut out =
        String::from("tuple,weight,depth,status,ratio,covered_by_theorem,precision,heuristic,note\n");
    for r in records {
        let ratio = r.ratio.as_ref().map(|x| x.render()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            dash_joined(r.tuple.entries()),
            r.weight,
            r.depth,
            r.status,
            csv_field(&ratio),
            r.covered_by_theorem,
            r.precision_used,
            r.heuristic,
            csv_field(r.note.as_deref().unwrap_or_default()),
        ));
    }
    out
}

pub fn params_echo(report_params: &std::collections::BTreeMap<String, i64>) -> String {
    report_params
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn csv_verifications(reports: &[VerificationReport]) -> String {
    let mut out = String::from(
        "family,params,tuple,coefficient,zeta_arg,residual_valuation,precision,pass,heuristic\n",
    );
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.case.family,
            csv_field(&params_echo(&r.case.params)),
            dash_joined(r.case.lhs_tuple.entries()),
            csv_field(&r.case.rhs_coefficient.render()),
            r.case.rhs_zeta_arg,
            r.residual_valuation,
            r.precision,
            r.pass,
            r.heuristic,
        ));
    }
    out
}

fn md_row(cells: &[String]) -> String {
    format!("| {} |\n", cells.join(" | "))
}

/// Detected tuples laid out in fixed-width rows with the * convention,
/// followed by the weight summary and conjecture-conformance tables.
pub fn md_search_report(results: &ResultSet) -> String {
    let cfg = &results.config;
    let mut out = format!(
        "# search: q = {}, depth {}, weight <= {}{}{}\n\n",
        results.q,
        cfg.depth,
        cfg.max_weight,
        if cfg.restricted { ", restricted" } else { "" },
        if cfg.primitive_only {
            ", primitive only"
        } else {
            ""
        },
    );
    let detected: Vec<&ClassificationRecord> = results
        .records
        .iter()
        .filter(|r| r.status.detected())
        .collect();
    out.push_str(&format!(
        "{} of {} tuples detected (* = covered by a proven family)\n\n",
        detected.len(),
        results.records.len()
    ));
    if !detected.is_empty() {
        let columns = (9usize.saturating_sub(cfg.depth)).clamp(3, 7);
        out.push_str(&md_row(&vec![String::new(); columns]));
        out.push_str(&md_row(&vec!["---".to_string(); columns]));
        for chunk in detected.chunks(columns) {
            let mut cells: Vec<String> = chunk
                .iter()
                .map(|r| {
                    format!(
                        "{}{}",
                        r.tuple,
                        if r.covered_by_theorem { "*" } else { "" }
                    )
                })
                .collect();
            cells.resize(columns, String::new());
            out.push_str(&md_row(&cells));
        }
        out.push('\n');
    }
    out.push_str("## weight summary\n\n");
    out.push_str("| q | depth | eulerian weights | zeta-like weights |\n");
    out.push_str("| --- | --- | --- | --- |\n");
    let join = |ws: &[u32]| {
        ws.iter()
            .map(|w| w.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    };
    out.push_str(&md_row(&[
        results.summary.q.to_string(),
        results.summary.depth.to_string(),
        join(&results.summary.eulerian_weights),
        join(&results.summary.zeta_like_weights),
    ]));
    if !results.summary.conformance.is_empty() {
        out.push_str("\n## conjecture conformance\n\n");
        out.push_str("| predicate | holds | details |\n");
        out.push_str("| --- | --- | --- |\n");
        for check in &results.summary.conformance {
            out.push_str(&md_row(&[
                check.predicate.clone(),
                if check.holds { "yes" } else { "no" }.to_string(),
                check.details.clone(),
            ]));
        }
    }
    out
}
