//! Graph files and report emission.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Serialize;
use serde_json::Value;
use vdb_core::graph::{decode_graph6, encode_graph6, parse_edge_list, write_edge_list};
use vdb_core::Graph;

use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GraphFormat {
    G6,
    Edges,
}

impl GraphFormat {
    fn from_extension(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()? {
            "g6" => Some(GraphFormat::G6),
            "edges" => Some(GraphFormat::Edges),
            _ => None,
        }
    }
}

pub fn read_graph(path: &Path, format: Option<GraphFormat>) -> Result<Graph, Failure> {
    let format = format
        .or_else(|| GraphFormat::from_extension(path))
        .ok_or_else(|| Failure::input(format!("{}: cannot tell the format; use --format g6|edges", path.display())))?;
    let text = fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    match format {
        GraphFormat::G6 => {
            let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
            let first = lines
                .next()
                .ok_or_else(|| Failure::input(format!("{}: no graph6 record", path.display())))?;
            if lines.next().is_some() {
                return Err(Failure::input(format!("{}: expected a single graph6 record", path.display())));
            }
            decode_graph6(first.as_bytes()).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
        }
        GraphFormat::Edges => parse_edge_list(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display()))),
    }
}

pub fn render_graph(g: &Graph, format: GraphFormat) -> String {
    match format {
        GraphFormat::G6 => format!("{}\n", encode_graph6(g)),
        GraphFormat::Edges => write_edge_list(g),
    }
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

/// Flags shared by every subcommand.
#[derive(Args, Clone, Debug)]
pub struct OutputArgs {
    /// Print the JSON report on standard output instead of the summary.
    #[arg(long)]
    pub json: bool,
    /// Indent JSON output.
    #[arg(long)]
    pub pretty: bool,
    /// Also write the JSON report to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Fields that depend on the run rather than its inputs; dropped from report
/// files so identical flags give identical bytes.
const VOLATILE: [&str; 2] = ["elapsed_seconds", "resumed_subtrees"];

fn strip_volatile(value: &mut Value) {
    match value {
        Value::Object(map) => {
            for key in VOLATILE {
                map.remove(key);
            }
            map.values_mut().for_each(strip_volatile);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_volatile),
        _ => {}
    }
}

impl OutputArgs {
    fn render(&self, value: &Value) -> String {
        let text = if self.pretty {
            serde_json::to_string_pretty(value)
        } else {
            serde_json::to_string(value)
        };
        text.expect("JSON values serialize")
    }

    /// Emits `report` as JSON (standard output with `--json`, the `--out`
    /// file when given) and otherwise prints `summary`.
    pub fn emit(&self, report: &impl Serialize, summary: &str) -> Result<(), Failure> {
        let value = serde_json::to_value(report).map_err(|e| Failure::input(e.to_string()))?;
        if let Some(path) = &self.out {
            let mut stable = value.clone();
            strip_volatile(&mut stable);
            write_file(path, &(self.render(&stable) + "\n"))?;
        }
        if self.json {
            println!("{}", self.render(&value));
        } else {
            print!("{summary}");
        }
        Ok(())
    }
}
