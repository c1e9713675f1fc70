use std::fs;
use std::io::Read;
use std::path::Path;

use clap::ValueEnum;
use spectral_gap::graph::parse_edge_list;
use spectral_gap::Graph;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    /// graph6 if the first byte is printable non-digit, edge list if it is a digit.
    Auto,
    Graph6,
    Edges,
}

pub fn read_text(path: Option<&Path>) -> Result<String, CliError> {
    let mut text = String::new();
    match path {
        Some(p) => text = fs::read_to_string(p).map_err(|e| CliError::Io(p.display().to_string(), e))?,
        None => {
            std::io::stdin().read_to_string(&mut text).map_err(|e| CliError::Io("stdin".into(), e))?;
        }
    }
    Ok(text)
}

fn detect(text: &str) -> Result<InputFormat, CliError> {
    let text = text.trim_start();
    match text.strip_prefix(">>graph6<<").unwrap_or(text).bytes().next() {
        Some(b) if b.is_ascii_digit() => Ok(InputFormat::Edges),
        Some(63..=126) => Ok(InputFormat::Graph6),
        Some(b) => Err(CliError::Usage(format!("cannot tell the input format from leading byte {b:#04x}"))),
        None => Err(CliError::Usage("empty input".into())),
    }
}

fn graph6_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().map(|l| l.trim().strip_prefix(">>graph6<<").unwrap_or(l.trim())).filter(|l| !l.is_empty())
}

/// Every graph in `text`: one per line for graph6, exactly one for an edge list.
pub fn parse_graphs(text: &str, format: InputFormat) -> Result<Vec<Graph>, CliError> {
    let format = match format {
        InputFormat::Auto => detect(text)?,
        f => f,
    };
    match format {
        InputFormat::Edges => Ok(vec![parse_edge_list(text)?]),
        _ => {
            let graphs = graph6_lines(text).map(Graph::from_graph6).collect::<Result<Vec<_>, _>>()?;
            if graphs.is_empty() {
                return Err(CliError::Usage("no graphs in input".into()));
            }
            Ok(graphs)
        }
    }
}

pub fn parse_single(text: &str, format: InputFormat) -> Result<Graph, CliError> {
    let mut graphs = parse_graphs(text, format)?;
    if graphs.len() != 1 {
        return Err(CliError::Usage(format!("expected one graph, found {}", graphs.len())));
    }
    Ok(graphs.remove(0))
}
