use serde::Serialize;
use sha2::{Digest, Sha256};

/// One labelled line of a certificate, e.g. `J[t]` / `-1/2*q[t]^2 - 1/2*q^2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Entry {
    pub key: String,
    pub value: String,
}

/// Deterministic record of one command: identical inputs give identical
/// bytes in both renderings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub command: String,
    pub model: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subject: Option<String>,
    /// `sha256:` of the command line arguments and the model bytes.
    pub inputs: String,
    pub verdict: String,
    /// Whether the verdict is the positive one (exit code 0).
    pub ok: bool,
    pub details: Vec<Entry>,
    pub currents: Vec<Entry>,
    pub residuals: Vec<Entry>,
}

impl Certificate {
    pub fn new(command: &str, model: &str, inputs: String) -> Self {
        Certificate {
            command: command.to_string(),
            model: model.to_string(),
            subject: None,
            inputs,
            verdict: String::new(),
            ok: true,
            details: Vec::new(),
            currents: Vec::new(),
            residuals: Vec::new(),
        }
    }

    pub fn detail(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.details.push(Entry {
            key: key.into(),
            value: value.into(),
        });
    }

    pub fn current(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.currents.push(Entry {
            key: key.into(),
            value: value.into(),
        });
    }

    pub fn residual(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.residuals.push(Entry {
            key: key.into(),
            value: value.into(),
        });
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("command: {}\nmodel: {}\n", self.command, self.model);
        if let Some(s) = &self.subject {
            out += &format!("subject: {s}\n");
        }
        out += &format!("inputs: {}\nverdict: {}\n", self.inputs, self.verdict);
        for e in self.details.iter().chain(&self.currents).chain(&self.residuals) {
            out += &format!("{} = {}\n", e.key, e.value);
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes") + "\n"
    }
}

/// Digest over length-prefixed parts, so `["ab", "c"]` and `["a", "bc"]` differ.
pub fn digest(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    let hex: String = h.finalize().iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_separates_parts() {
        assert_ne!(digest(&[b"ab", b"c"]), digest(&[b"a", b"bc"]));
        assert_eq!(digest(&[b"x"]), digest(&[b"x"]));
    }

    #[test]
    fn text_layout() {
        let mut c = Certificate::new("el", "demo", "sha256:00".into());
        c.verdict = "derived".into();
        c.detail("delta[q]", "0");
        assert_eq!(
            c.to_text(),
            "command: el\nmodel: demo\ninputs: sha256:00\nverdict: derived\ndelta[q] = 0\n"
        );
        assert!(c.to_json().starts_with("{\"command\":\"el\""));
    }
}
