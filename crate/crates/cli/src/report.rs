//! Report envelope and output formats.

use serde::Serialize;

use crate::args::{Command, Format};
use crate::error::OK;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// A command result that can be printed in every output format.
pub trait Render: Serialize {
    fn text(&self) -> String;
    fn csv(&self) -> String;
    fn exit_status(&self) -> u8 {
        OK
    }
}

/// The parsed request, echoed into every report.
#[derive(Serialize)]
pub struct Request<'a> {
    #[serde(flatten)]
    pub command: &'a Command,
    pub cap: String,
}

#[derive(Serialize)]
struct Envelope<'a, T> {
    tool: &'static str,
    version: &'static str,
    request: &'a Request<'a>,
    result: &'a T,
}

/// Renders `result` and returns it with the process exit status.
pub fn emit<T: Render>(format: Format, request: &Request<'_>, result: &T) -> (String, u8) {
    let echo = serde_json::to_string(request).expect("requests serialize");
    let body = match format {
        Format::Json => {
            let envelope = Envelope { tool: "colperm", version: VERSION, request, result };
            let mut s = serde_json::to_string_pretty(&envelope).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Text => format!("colperm {}\nrequest: {}\n{}", VERSION, echo, result.text()),
        Format::Csv => format!("# colperm {}\n# request: {}\n{}", VERSION, echo, result.csv()),
    };
    (body, result.exit_status())
}
