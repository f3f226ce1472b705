use std::collections::BTreeMap;
use std::fmt::Write;

use sha2::{Digest, Sha256};

pub const SIGN_CONVENTION: &str = "koszul-h1: total d = d' + (-1)^h d'', cone d(b,a) = (db + fa, -da)";

/// A fixed-column table, rendered aligned or as TSV.
pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    pub fn render(&self, tsv: bool) -> String {
        let mut out = String::new();
        if tsv {
            out.push_str(&self.header.join("\t"));
            out.push('\n');
            for r in &self.rows {
                out.push_str(&r.join("\t"));
                out.push('\n');
            }
            return out;
        }
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
        for r in &self.rows {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |cells: Vec<&str>| {
            let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
            padded.join("  ").trim_end().to_string() + "\n"
        };
        out.push_str(&line(self.header.clone()));
        for r in &self.rows {
            out.push_str(&line(r.iter().map(String::as_str).collect()));
        }
        out
    }
}

/// Accumulates the body of a report; notes are prefixed with `#` in TSV.
pub struct Report {
    pub tsv: bool,
    body: String,
    verdicts: Vec<(String, bool)>,
}

impl Report {
    pub fn new(tsv: bool) -> Self {
        Report { tsv, body: String::new(), verdicts: Vec::new() }
    }

    pub fn note(&mut self, s: impl AsRef<str>) {
        for line in s.as_ref().lines() {
            if self.tsv {
                let _ = writeln!(self.body, "# {line}");
            } else {
                let _ = writeln!(self.body, "{line}");
            }
        }
    }

    pub fn blank(&mut self) {
        if !self.tsv {
            self.body.push('\n');
        }
    }

    pub fn table(&mut self, t: &Table) {
        self.body.push_str(&t.render(self.tsv));
    }

    pub fn verdict(&mut self, name: impl Into<String>, pass: bool) {
        self.verdicts.push((name.into(), pass));
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|(_, p)| *p)
    }

    pub fn finish(mut self, input_hash: &str) -> String {
        if !self.verdicts.is_empty() {
            self.blank();
            let lines: Vec<String> =
                self.verdicts.iter().map(|(n, p)| format!("verdict {n}: {}", if *p { "pass" } else { "FAIL" })).collect();
            self.note(lines.join("\n"));
        }
        self.blank();
        let footer = format!(
            "input sha256: {input_hash}\nengine: limitcoh {}\nsign convention: {SIGN_CONVENTION}\nmonodromy normalized for the uniformizer p; other choices rescale N by a rational constant (--rescale)",
            env!("CARGO_PKG_VERSION")
        );
        self.note(footer);
        self.body
    }
}

pub fn sha256_hex(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    hex::encode(h.finalize())
}

pub fn weight_list(w: &BTreeMap<i64, usize>) -> String {
    let items: Vec<String> = w
        .iter()
        .map(|(&k, &m)| if m == 1 { k.to_string() } else { format!("{k}^{m}") })
        .collect();
    format!("{{{}}}", items.join(","))
}
