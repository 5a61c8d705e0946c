use std::io::{self, Write};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

/// One output record: its JSON form plus the cells shown in table mode.
pub struct Record {
    pub json: Value,
    pub cells: Vec<(String, String)>,
}

impl Record {
    pub fn new(json: impl Serialize) -> Result<Self, CliError> {
        let json = serde_json::to_value(json).map_err(|e| CliError::json("output", e))?;
        Ok(Self { json, cells: Vec::new() })
    }

    pub fn cell(mut self, name: impl Into<String>, value: impl ToString) -> Self {
        self.cells.push((name.into(), value.to_string()));
        self
    }
}

/// Trailing record of a search.
#[derive(Serialize)]
pub struct Summary<C: Serialize> {
    pub count: usize,
    pub caps: C,
    pub cap_hit: bool,
    pub interrupted: bool,
    pub elapsed: f64,
}

pub struct Emitter {
    format: Format,
    rows: Vec<Record>,
    out: io::StdoutLock<'static>,
}

impl Emitter {
    pub fn new(format: Format) -> Self {
        Self { format, rows: Vec::new(), out: io::stdout().lock() }
    }

    pub fn emit(&mut self, r: Record) -> Result<(), CliError> {
        match self.format {
            Format::Json => self.line(&r.json.to_string()),
            Format::Table => {
                self.rows.push(r);
                Ok(())
            }
        }
    }

    pub fn summary<C: Serialize>(&mut self, s: &Summary<C>) -> Result<(), CliError> {
        self.flush_table(true)?;
        match self.format {
            Format::Json => {
                let v = serde_json::to_value(s).map_err(|e| CliError::json("summary", e))?;
                self.line(&v.to_string())
            }
            Format::Table => {
                let caps = serde_json::to_string(&s.caps).map_err(|e| CliError::json("summary", e))?;
                let mut text = format!("# {} result(s), caps {caps}, {:.3}s", s.count, s.elapsed);
                if s.cap_hit {
                    text.push_str(", cap hit: results may be incomplete");
                }
                if s.interrupted {
                    text.push_str(", interrupted");
                }
                self.line(&text)
            }
        }
    }

    pub fn finish(mut self) -> Result<(), CliError> {
        self.flush_table(false)?;
        self.out.flush().or_else(ignore_broken_pipe)
    }

    fn line(&mut self, s: &str) -> Result<(), CliError> {
        writeln!(self.out, "{s}").or_else(ignore_broken_pipe)
    }

    fn flush_table(&mut self, as_columns: bool) -> Result<(), CliError> {
        let rows = std::mem::take(&mut self.rows);
        let text = match rows.as_slice() {
            [] => return Ok(()),
            [one] if !as_columns => key_values(one),
            many => columns(many),
        };
        self.line(text.trim_end())
    }
}

fn ignore_broken_pipe(e: io::Error) -> Result<(), CliError> {
    if e.kind() == io::ErrorKind::BrokenPipe {
        Ok(())
    } else {
        Err(CliError::Io { what: "stdout".into(), source: e })
    }
}

fn width(s: &str) -> usize {
    s.chars().count()
}

fn pad(s: &str, w: usize) -> String {
    format!("{s}{}", " ".repeat(w.saturating_sub(width(s))))
}

fn key_values(r: &Record) -> String {
    let w = r.cells.iter().map(|(k, _)| width(k)).max().unwrap_or(0);
    r.cells.iter().map(|(k, v)| format!("{}  {v}\n", pad(k, w))).collect()
}

fn columns(rows: &[Record]) -> String {
    let heads: Vec<&str> = rows[0].cells.iter().map(|(k, _)| k.as_str()).collect();
    let mut widths: Vec<usize> = heads.iter().map(|h| width(h)).collect();
    for r in rows {
        for (w, (_, v)) in widths.iter_mut().zip(&r.cells) {
            *w = (*w).max(width(v));
        }
    }
    let line = |cells: Vec<&str>| {
        let body: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| pad(c, *w)).collect();
        format!("{}\n", body.join("  ").trim_end())
    };
    let mut s = line(heads.clone());
    for r in rows {
        s.push_str(&line(r.cells.iter().map(|(_, v)| v.as_str()).collect()));
    }
    s
}
