use serde::{Deserialize, Serialize};
use serde_json::Value;
use sqfree_core::certificate::Certificate;

/// Outcome class, mapped onto the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// Verified or found: exit 0.
    Ok,
    /// Refuted or not found: exit 1.
    Refuted,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Refuted => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub input: Value,
    pub status: Status,
    pub result: Value,
    pub certificates: Vec<Certificate>,
    pub timing_ms: u64,
    pub version: String,
}

/// What a command produces before timing and echo fields are attached.
pub struct Outcome {
    pub status: Status,
    pub result: Value,
    pub certificates: Vec<Certificate>,
}

impl Outcome {
    pub fn new(status: Status, result: impl Serialize) -> anyhow::Result<Self> {
        Ok(Self { status, result: serde_json::to_value(result)?, certificates: Vec::new() })
    }

    pub fn with_certificates(mut self, certs: Vec<Certificate>) -> Self {
        self.certificates = certs;
        self
    }
}
