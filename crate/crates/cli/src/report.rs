use detpol_core::covering::Certification;
use detpol_core::Config;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    True,
    False,
    Unknown,
}

impl Verdict {
    pub fn of(b: bool) -> Verdict {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }

    pub fn exit_code(self) -> u8 {
        match self {
            Verdict::True => 0,
            Verdict::False => 1,
            Verdict::Unknown => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::True => "true",
            Verdict::False => "false",
            Verdict::Unknown => "unknown",
        }
    }
}

/// One JSON line per invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: Vec<String>,
    pub verdict: Option<Verdict>,
    pub certification: Option<Certification>,
    pub witnesses: Vec<String>,
    pub details: serde_json::Value,
    pub config: Config,
    pub elapsed_ms: f64,
}

impl Report {
    pub fn new(command: Vec<String>, config: Config) -> Report {
        Report {
            schema_version: SCHEMA_VERSION,
            command,
            verdict: None,
            certification: None,
            witnesses: Vec::new(),
            details: serde_json::Value::Null,
            config,
            elapsed_ms: 0.0,
        }
    }
}
