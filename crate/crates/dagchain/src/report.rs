//! Structured check reports: human-readable text and key=value output.

use std::fmt;

/// Outcome of one verification check, as an ordered list of fields plus a
/// pass/fail verdict.
#[derive(Debug, Clone)]
pub struct Report {
    pub check: String,
    fields: Vec<(String, String)>,
    pub pass: bool,
}

impl Report {
    pub fn new(check: impl Into<String>) -> Self {
        Report { check: check.into(), fields: Vec::new(), pass: true }
    }

    pub fn field(&mut self, key: impl Into<String>, value: impl fmt::Display) -> &mut Self {
        self.fields.push((key.into(), value.to_string()));
        self
    }

    pub fn fail(&mut self) -> &mut Self {
        self.pass = false;
        self
    }

    pub fn set_pass(&mut self, pass: bool) -> &mut Self {
        self.pass = self.pass && pass;
        self
    }

    pub fn fields(&self) -> &[(String, String)] {
        &self.fields
    }

    /// `key=value` lines; keys are lowercased with spaces replaced by `_`.
    pub fn kv(&self) -> String {
        let mut s = format!("check={}\n", self.check);
        for (k, v) in &self.fields {
            s.push_str(&format!("{}={}\n", k.to_lowercase().replace(' ', "_"), v));
        }
        s.push_str(&format!("result={}\n", if self.pass { "pass" } else { "fail" }));
        s
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "check: {}", self.check)?;
        for (k, v) in &self.fields {
            writeln!(f, "{k}: {v}")?;
        }
        write!(f, "result: {}", if self.pass { "PASS" } else { "FAIL" })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_text_and_kv() {
        let mut r = Report::new("symmetry");
        r.field("n", 3).field("state count", 18);
        assert_eq!(r.to_string(), "check: symmetry\nn: 3\nstate count: 18\nresult: PASS");
        assert_eq!(r.kv(), "check=symmetry\nn=3\nstate_count=18\nresult=pass\n");
        r.fail();
        assert!(r.to_string().ends_with("FAIL"));
    }
}
