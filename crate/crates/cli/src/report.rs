//! Run reports: deterministic result lines on stdout, diagnostics on
//! stderr. The polynomial line is byte-identical across methods and runs.

use interlace_core::recursion::TreeStats;
use std::time::Duration;

#[derive(Debug, Default)]
pub struct RunReport {
    /// Result lines, printed to stdout in order (polynomial first).
    pub stdout_lines: Vec<String>,
    pub method: &'static str,
    pub elapsed: Option<Duration>,
    pub tree_stats: Option<TreeStats>,
}

impl RunReport {
    pub fn emit(&self) {
        for line in &self.stdout_lines {
            println!("{line}");
        }
        let mut diag = format!("method={}", self.method);
        if let Some(elapsed) = self.elapsed {
            diag.push_str(&format!(" time_ms={:.3}", elapsed.as_secs_f64() * 1e3));
        }
        if let Some(stats) = &self.tree_stats {
            diag.push_str(&format!(
                " nodes={} leaves={} active={}",
                stats.total_nodes, stats.leaves, stats.active_nodes
            ));
        }
        eprintln!("{diag}");
    }
}
