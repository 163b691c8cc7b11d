//! Report rendering: the fixed-width comparison table and the ROC CSV.

use std::io::Write;
use std::path::Path;

use detect_core::metrics::RocPoint;
use detect_core::pipeline::ModelRow;
use detect_core::Result;

/// `fpr,tpr,threshold` per line; the sentinel point above every score
/// writes its threshold as `inf`.
pub fn write_roc_csv(path: impl AsRef<Path>, points: &[RocPoint]) -> Result<()> {
    let mut file = std::fs::File::create(path)?;
    writeln!(file, "fpr,tpr,threshold")?;
    for point in points {
        match point.threshold {
            Some(t) => writeln!(file, "{},{},{}", point.fpr, point.tpr, t)?,
            None => writeln!(file, "{},{},inf", point.fpr, point.tpr)?,
        }
    }
    Ok(())
}

fn fmt_metric(value: Option<f64>) -> String {
    match value {
        Some(v) => format!("{v:.4}"),
        None => "-".to_string(),
    }
}

/// Render rows as an aligned text table. Durations are deliberately left
/// out so the table is identical across reruns of the same seed.
pub fn render_table(rows: &[ModelRow]) -> String {
    let mut out = String::new();
    let header = format!(
        "{:<20} {:>9} {:>9} {:>9} {:>9} {:>9} {:>9}  {}\n",
        "model", "accuracy", "precision", "recall", "f1", "mcc", "auc", "status"
    );
    out.push_str(&header);
    out.push_str(&"-".repeat(header.len().saturating_sub(1)));
    out.push('\n');
    for row in rows {
        let m = row.metrics.as_ref();
        out.push_str(&format!(
            "{:<20} {:>9} {:>9} {:>9} {:>9} {:>9} {:>9}  {}\n",
            row.model,
            fmt_metric(m.map(|m| m.accuracy)),
            fmt_metric(m.map(|m| m.precision)),
            fmt_metric(m.map(|m| m.recall)),
            fmt_metric(m.map(|m| m.f1)),
            fmt_metric(m.map(|m| m.mcc)),
            fmt_metric(m.map(|m| m.auc)),
            row.status
        ));
    }
    out
}

/// FNV-1a over a string, as hex; used to stamp reports with a config hash.
pub fn fnv1a_hex(payload: &str) -> String {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in payload.as_bytes() {
        hash ^= *byte as u64;
        hash = hash.wrapping_mul(0x100_0000_01b3);
    }
    format!("{hash:016x}")
}
