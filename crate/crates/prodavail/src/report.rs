use std::fmt::Write as _;
use std::io::{self, Write};
use std::time::{SystemTime, UNIX_EPOCH};

use prodavail_core::indicators::IndicatorTable;
use prodavail_core::{BatchStats, Model};
use serde::{Deserialize, Serialize};

use crate::io::model_digest;

/// Everything needed to reproduce a report from its model file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunParameters {
    pub runs: u32,
    pub seed: u64,
    pub bucket_hours: f64,
    pub zero_logistics: bool,
    pub freeze_clocks_during_shutdown: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    /// Seconds since the Unix epoch; the only field that differs between
    /// two reproductions.
    pub generated_at: u64,
    /// SHA-256 of the model as given, before any scenario transform.
    pub model_digest: String,
    pub parameters: RunParameters,
    pub stats: BatchStats,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub indicators: Option<IndicatorTable>,
}

impl Report {
    pub fn new(model: &Model, parameters: RunParameters, stats: BatchStats) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            generated_at: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
            model_digest: model_digest(model),
            parameters,
            stats,
            indicators: None,
        }
    }

    pub fn with_indicators(mut self, table: IndicatorTable) -> Self {
        self.indicators = Some(table);
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Plain-text summary with percentages to two decimals.
    pub fn summary(&self) -> String {
        let p = &self.parameters;
        let s = &self.stats;
        let mut out = String::new();
        let _ = writeln!(out, "model digest   {}", self.model_digest);
        let _ = writeln!(
            out,
            "runs {}  seed {}  bucket {} h{}",
            p.runs,
            p.seed,
            p.bucket_hours,
            if p.zero_logistics { "  (zero logistics)" } else { "" }
        );
        let _ = writeln!(out, "mean PA        {}", pct(s.mean_pa));
        let _ = writeln!(out, "std dev        {}", pct(s.std_pa));
        let _ = writeln!(out, "std error      {}", pct(s.sem_pa));
        if let Some(t) = &self.indicators {
            let width = t.rows.iter().map(|r| r.subsystem.name.len()).max().unwrap_or(0).max(9);
            let _ = writeln!(out);
            let _ = writeln!(out, "{:<width$}  {:>11}  {:>12}", "subsystem", "criticality", "contribution");
            for r in &t.rows {
                let _ = writeln!(
                    out,
                    "{:<width$}  {:>11}  {:>12}",
                    r.subsystem.name,
                    pct(r.criticality),
                    pct(r.contribution)
                );
            }
        }
        out
    }
}

fn pct(x: f64) -> String {
    format!("{:.2}%", 100.0 * x)
}

/// Writes the availability profile as `bucket_start_hours,mean_throughput`.
pub fn write_profile_csv<W: Write>(stats: &BatchStats, mut w: W) -> io::Result<()> {
    writeln!(w, "bucket_start_hours,mean_throughput")?;
    for (b, v) in stats.profile.iter().enumerate() {
        writeln!(w, "{},{}", stats.bucket_start(b), v)?;
    }
    w.flush()
}
