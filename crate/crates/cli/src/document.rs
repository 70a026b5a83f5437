use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

use crate::args::Invocation;

pub const TOOL: &str = "tubed";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'a Invocation,
    n: Option<u32>,
    result: &'a T,
}

/// A rendered output document, ready to be written out.
pub struct Document(String);

impl Document {
    pub fn json<T: Serialize>(inv: &Invocation, result: &T) -> Document {
        let env = Envelope {
            tool: TOOL,
            version: VERSION,
            command: inv,
            n: inv.n,
            result,
        };
        let mut body = serde_json::to_string(&env).expect("records serialize");
        body.push('\n');
        Document(body)
    }

    /// Non-JSON formats carry the provenance in a leading comment line.
    pub fn commented(inv: &Invocation, marker: &str, body: &str) -> Document {
        let mut out = String::new();
        writeln!(out, "{marker} {TOOL} {VERSION} {}", inv.echo()).unwrap();
        out.push_str(body);
        if !body.ends_with('\n') {
            out.push('\n');
        }
        Document(out)
    }

    pub fn text(inv: &Invocation, lines: &[String]) -> Document {
        Document::commented(inv, "#", &lines.join("\n"))
    }

    pub fn write(&self, output: Option<&Path>) -> io::Result<()> {
        match output {
            Some(path) => fs::write(path, &self.0),
            None => {
                let mut stdout = io::stdout().lock();
                stdout.write_all(self.0.as_bytes())?;
                stdout.flush()
            }
        }
    }
}
