use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context};
use serde::Serialize;

use crate::args::Format;

/// Process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    InputError = 1,
    NoCycleTime = 2,
    Indeterminate = 3,
    /// A `reproduce` scenario ran but at least one check failed.
    ChecksFailed = 4,
}

impl Status {
    pub fn code(self) -> i32 {
        self as i32
    }
}

/// A finished command: the report in every format it supports.
#[derive(Debug)]
pub struct Outcome {
    pub json: String,
    pub text: String,
    pub csv: Option<String>,
    pub status: Status,
}

impl Outcome {
    pub fn new<R: Serialize>(report: &R, text: String, status: Status) -> anyhow::Result<Self> {
        let mut json = serde_json::to_string_pretty(report)?;
        json.push('\n');
        Ok(Self {
            json,
            text,
            csv: None,
            status,
        })
    }

    pub fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }

    pub fn render(&self, format: Format) -> anyhow::Result<&str> {
        Ok(match format {
            Format::Json => &self.json,
            Format::Text => &self.text,
            Format::Csv => match &self.csv {
                Some(csv) => csv,
                None => bail!("csv output is only available for simulate"),
            },
        })
    }

    pub fn emit(&self, format: Format, output: Option<&Path>) -> anyhow::Result<()> {
        let body = self.render(format)?;
        match output {
            Some(path) => {
                std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))
            }
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(body.as_bytes())?;
                out.flush()?;
                Ok(())
            }
        }
    }
}
