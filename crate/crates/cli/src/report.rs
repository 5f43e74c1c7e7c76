//! Canonical-text report assembly: ordered named sections, plain text and
//! JSON rendering, and the whitespace-insensitive golden comparison.

use serde_json::{Map, Value};

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub sections: Vec<(String, Vec<String>)>,
}

impl Report {
    pub fn section(&mut self, name: &str) -> &mut Vec<String> {
        self.sections.push((name.to_string(), Vec::new()));
        &mut self.sections.last_mut().unwrap().1
    }

    pub fn push_line(&mut self, line: String) {
        self.sections
            .last_mut()
            .expect("a section must be opened first")
            .1
            .push(line);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (name, lines) in &self.sections {
            out.push_str(&format!("== {name} ==\n"));
            for l in lines {
                out.push_str(l);
                out.push('\n');
            }
            out.push('\n');
        }
        out
    }

    pub fn render_sections(&self, names: &[&str]) -> String {
        let mut out = String::new();
        for (name, lines) in &self.sections {
            if !names.contains(&name.as_str()) {
                continue;
            }
            out.push_str(&format!("== {name} ==\n"));
            for l in lines {
                out.push_str(l);
                out.push('\n');
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        let mut order = Vec::new();
        for (name, lines) in &self.sections {
            order.push(Value::String(name.clone()));
            map.insert(
                name.clone(),
                Value::Array(lines.iter().map(|l| Value::String(l.clone())).collect()),
            );
        }
        let mut root = Map::new();
        root.insert("sections".into(), Value::Array(order));
        root.insert("content".into(), Value::Object(map));
        Value::Object(root)
    }
}

/// Whitespace-insensitive, token-order-sensitive comparison. Returns the
/// first diverging token with context on mismatch.
pub fn diff_golden(actual: &str, golden: &str) -> Result<(), String> {
    let a: Vec<&str> = actual.split_whitespace().collect();
    let g: Vec<&str> = golden.split_whitespace().collect();
    let n = a.len().min(g.len());
    for i in 0..n {
        if a[i] != g[i] {
            let lo = i.saturating_sub(5);
            return Err(format!(
                "first divergence at token {}: got `{}`, expected `{}` (context: ...{} | ...{})",
                i,
                a[i],
                g[i],
                a[lo..=i].join(" "),
                g[lo..=i].join(" ")
            ));
        }
    }
    if a.len() != g.len() {
        return Err(format!(
            "length mismatch: report has {} tokens, golden has {}",
            a.len(),
            g.len()
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diff_is_whitespace_insensitive() {
        assert!(diff_golden("a  b\n c", "a b c").is_ok());
        let err = diff_golden("a b d", "a b c").unwrap_err();
        assert!(err.contains("token 2"));
        assert!(diff_golden("a b", "a b c").is_err());
    }
}
