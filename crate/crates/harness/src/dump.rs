//! Fixture dumps and the code description printed by `dump-code`.
//!
//! A fixture is a block of `key = value` lines followed by the sections
//! `[V]` and `[U]`, each holding a subspace in the row dump format of
//! [`Subspace::to_dump`]. Lines starting with `#` are comments.

use std::fmt::Write as _;

use lsc_core::{LayeredCode, Subspace};

use crate::HarnessError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixture {
    /// Header entries in file order.
    pub entries: Vec<(String, String)>,
    pub transmitted: Subspace,
    pub received: Subspace,
}

impl Fixture {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        let mut s = String::from("# lsc fixture\n");
        for (k, v) in &self.entries {
            let _ = writeln!(s, "{k} = {v}");
        }
        s.push_str("[V]\n");
        s.push_str(&self.transmitted.to_dump());
        s.push_str("[U]\n");
        s.push_str(&self.received.to_dump());
        s
    }

    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let err = |line: usize, message: &str| HarnessError::Fixture {
            line,
            message: message.into(),
        };
        let mut entries = Vec::new();
        let mut section: Option<&str> = None;
        let mut v_text = String::new();
        let mut u_text = String::new();
        let mut v_line = 0;
        let mut u_line = 0;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            match line {
                "[V]" => {
                    section = Some("V");
                    v_line = i + 1;
                    continue;
                }
                "[U]" => {
                    section = Some("U");
                    u_line = i + 1;
                    continue;
                }
                _ => {}
            }
            match section {
                None => {
                    let (k, v) = line
                        .split_once('=')
                        .ok_or_else(|| err(i + 1, "expected `key = value`"))?;
                    entries.push((k.trim().to_string(), v.trim().to_string()));
                }
                Some("V") => {
                    v_text.push_str(line);
                    v_text.push('\n');
                }
                Some(_) => {
                    u_text.push_str(line);
                    u_text.push('\n');
                }
            }
        }
        if v_line == 0 || u_line == 0 {
            return Err(err(text.lines().count().max(1), "missing [V] or [U] section"));
        }
        let sub = |t: &str, at: usize| {
            Subspace::from_dump(t).map_err(|e| err(at, &format!("bad subspace: {e}")))
        };
        Ok(Fixture {
            entries,
            transmitted: sub(&v_text, v_line)?,
            received: sub(&u_text, u_line)?,
        })
    }
}

fn digits(coords: &[u32]) -> String {
    coords.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

/// Layer layout as `n:k;n:k;…`.
pub fn layout_string(code: &LayeredCode) -> String {
    code.layout()
        .iter()
        .map(|(n, k)| format!("{n}:{k}"))
        .collect::<Vec<_>>()
        .join(";")
}

/// Field and code header entries shared by every fixture.
pub fn code_entries(code: &LayeredCode) -> Vec<(String, String)> {
    let p = code.params();
    vec![
        ("q".into(), p.q().to_string()),
        ("m".into(), p.m().to_string()),
        ("modulus".into(), digits(p.modulus())),
        ("layers".into(), layout_string(code)),
    ]
}

/// Human-readable description of the code, one `key = value` per line.
/// Column ranges are 1-based.
pub fn describe_code(code: &LayeredCode) -> String {
    let mut s = String::from("# lsc code\n");
    for (k, v) in code_entries(code) {
        let _ = writeln!(s, "{k} = {v}");
    }
    let _ = writeln!(s, "total_n = {}", code.total_n());
    let _ = writeln!(s, "ambient = {}", code.ambient_dim());
    let _ = writeln!(s, "min_distance = {}", code.min_distance());
    for (l, layer) in code.layers().iter().enumerate() {
        let start = code.offset(l) + 1;
        let points: Vec<String> = layer
            .inner()
            .eval_points()
            .iter()
            .map(|g| g.coords().iter().map(|c| c.to_string()).collect::<String>())
            .collect();
        let _ = writeln!(
            s,
            "layer.{} = n={} k={} identity={}..{} rank_distance={} subspace_distance={} eval_points={}",
            l + 1,
            layer.n(),
            layer.k(),
            start,
            start + layer.n() - 1,
            layer.inner().min_rank_distance(),
            layer.min_subspace_distance(),
            points.join(";")
        );
    }
    let _ = writeln!(s, "payload = {}..{}", code.total_n() + 1, code.ambient_dim());
    s
}
