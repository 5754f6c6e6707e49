//! Deterministic text reports: the command echo, input digests, seeds, body
//! lines and one verdict per check. Wall-clock timing is left out so that
//! identical invocations give identical bytes.

use std::fmt::Write;

use sha2::{Digest, Sha256};

/// Outcome of one check with the evidence behind it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub certificate: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<(String, String)>,
    pub seeds: Vec<(String, u64)>,
    pub body: Vec<String>,
    pub verdicts: Vec<Verdict>,
}

pub fn sha256_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report { command: command.into(), ..Report::default() }
    }

    /// Records an input by the digest of its canonical text.
    pub fn input(&mut self, name: &str, canonical: &str) {
        self.inputs.push((name.to_string(), sha256_hex(canonical)));
    }

    pub fn seed(&mut self, name: &str, seed: u64) {
        self.seeds.push((name.to_string(), seed));
    }

    pub fn line(&mut self, line: impl Into<String>) {
        self.body.push(line.into());
    }

    /// Adds body lines from a block of text.
    pub fn text(&mut self, text: &str) {
        self.body.extend(text.lines().map(str::to_string));
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool, certificate: impl Into<String>) -> bool {
        self.verdicts.push(Verdict { name: name.into(), pass, certificate: certificate.into() });
        pass
    }

    /// Appends everything from another report except its command line.
    pub fn absorb(&mut self, other: Report) {
        for i in other.inputs {
            if !self.inputs.contains(&i) {
                self.inputs.push(i);
            }
        }
        self.seeds.extend(other.seeds);
        self.body.extend(other.body);
        self.verdicts.extend(other.verdicts);
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| !v.pass)
    }

    /// `0` when every verdict passes, `1` otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        for (name, digest) in &self.inputs {
            let _ = writeln!(out, "input: {name} sha256={digest}");
        }
        for (name, seed) in &self.seeds {
            let _ = writeln!(out, "seed: {name}={seed}");
        }
        for l in &self.body {
            let _ = writeln!(out, "{l}");
        }
        for v in &self.verdicts {
            let _ = writeln!(out, "{} {}: {}", if v.pass { "PASS" } else { "FAIL" }, v.name, v.certificate);
        }
        if !self.verdicts.is_empty() {
            let ok = self.verdicts.iter().filter(|v| v.pass).count();
            let _ = writeln!(out, "result: {} ({ok}/{} checks)", if self.passed() { "pass" } else { "fail" }, self.verdicts.len());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_of_empty_text() {
        assert_eq!(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    }

    #[test]
    fn render_is_stable() {
        let mut r = Report::new("stratum verify demo");
        r.input("x", "dim 0\n");
        r.seed("demo", 7);
        r.line("hello");
        r.check("one", true, "ok");
        r.check("two", false, "counterexample");
        let text = r.render();
        assert_eq!(text, r.clone().render());
        assert!(text.contains("seed: demo=7\n"));
        assert!(text.ends_with("FAIL two: counterexample\nresult: fail (1/2 checks)\n"));
        assert_eq!(r.exit_code(), 1);
    }
}
