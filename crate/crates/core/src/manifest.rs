//! Run manifests: the self-describing envelope every CLI report carries.
//!
//! A rendered report is a flat key-value header (schema, tool version,
//! command, parameters, seeds, input hashes, content hash, timestamps)
//! followed by a blank line and the command-specific body. Everything
//! except the two timestamp lines is covered by the content hash, so
//! re-running the same command on the same inputs reproduces the report
//! byte-for-byte up to timestamps — and provably so, because the hashes
//! match.

use std::fmt::Write as _;
use std::time::{SystemTime, UNIX_EPOCH};

use sha2::{Digest, Sha256};

/// Pinned report schema identifier.
pub const SCHEMA: &str = "report/v1";

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for b in digest {
        write!(out, "{b:02x}").expect("string write");
    }
    out
}

#[derive(Clone, Debug)]
pub struct RunManifest {
    command: String,
    parameters: Vec<(String, String)>,
    seeds: Vec<String>,
    input_hashes: Vec<(String, String)>,
    started_unix: u64,
}

fn now_unix() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

impl RunManifest {
    /// Starts a manifest for `command`, recording the start time.
    pub fn new(command: &str) -> RunManifest {
        RunManifest {
            command: command.to_string(),
            parameters: Vec::new(),
            seeds: Vec::new(),
            input_hashes: Vec::new(),
            started_unix: now_unix(),
        }
    }

    /// Records one command parameter; emission order is insertion order.
    pub fn parameter(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.parameters.push((key.to_string(), value.to_string()));
        self
    }

    /// Records a seed (an RNG seed or a seeded starting point).
    pub fn seed(&mut self, value: impl ToString) -> &mut Self {
        self.seeds.push(value.to_string());
        self
    }

    /// Records the SHA-256 of an input the run consumed.
    pub fn input_bytes(&mut self, name: &str, bytes: &[u8]) -> &mut Self {
        self.input_hashes.push((name.to_string(), sha256_hex(bytes)));
        self
    }

    /// Hash-covered header lines (no timestamps).
    fn header(&self) -> String {
        let mut out = String::new();
        writeln!(out, "schema {SCHEMA}").expect("string write");
        writeln!(out, "tool intersquare {}", env!("CARGO_PKG_VERSION")).expect("string write");
        writeln!(out, "command {}", self.command).expect("string write");
        for (k, v) in &self.parameters {
            writeln!(out, "param {k} {v}").expect("string write");
        }
        for s in &self.seeds {
            writeln!(out, "seed {s}").expect("string write");
        }
        for (name, hash) in &self.input_hashes {
            writeln!(out, "input {name} sha256:{hash}").expect("string write");
        }
        out
    }

    /// SHA-256 over header plus body — the timestamp-free content.
    pub fn content_hash(&self, body: &str) -> String {
        sha256_hex(format!("{}\n{body}", self.header()).as_bytes())
    }

    /// Full report document: header (with content hash and timestamps),
    /// blank line, body.
    pub fn render(&self, body: &str) -> String {
        let mut out = self.header();
        writeln!(out, "content_sha256 {}", self.content_hash(body)).expect("string write");
        writeln!(out, "started_unix {}", self.started_unix).expect("string write");
        writeln!(out, "finished_unix {}", now_unix()).expect("string write");
        out.push('\n');
        out.push_str(body);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> RunManifest {
        let mut m = RunManifest::new("bound");
        m.parameter("N", "10000000000000000000000000000000")
            .parameter("k1", 8.0)
            .seed("8,3.17,0.06,3.33");
        m
    }

    #[test]
    fn sha256_of_empty_input_matches_the_published_value() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn content_hash_ignores_timestamps() {
        let a = sample();
        std::thread::sleep(std::time::Duration::from_millis(5));
        let b = sample();
        assert_eq!(a.content_hash("body\n"), b.content_hash("body\n"));
        assert_ne!(a.content_hash("body\n"), a.content_hash("other\n"));
    }

    #[test]
    fn render_layout_is_header_blank_body() {
        let m = sample();
        let text = m.render("margin 1 2 anchor\n");
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "schema report/v1");
        assert_eq!(
            lines.next().unwrap(),
            format!("tool intersquare {}", env!("CARGO_PKG_VERSION"))
        );
        assert_eq!(lines.next().unwrap(), "command bound");
        assert!(text.contains("\nparam N 10000000000000000000000000000000\n"));
        assert!(text.contains("\nseed 8,3.17,0.06,3.33\n"));
        assert!(text.contains("\ncontent_sha256 "));
        assert!(text.ends_with("\n\nmargin 1 2 anchor\n") || text.contains("\n\nmargin 1 2 anchor\n"));
        // the hash line matches a fresh computation
        let hash = m.content_hash("margin 1 2 anchor\n");
        assert!(text.contains(&format!("content_sha256 {hash}")));
    }

    #[test]
    fn input_hashes_change_the_content_hash() {
        let mut a = sample();
        let base = a.content_hash("x\n");
        a.input_bytes("checkpoint", b"1 1025 1 1 1 2\n");
        assert_ne!(a.content_hash("x\n"), base);
    }
}
