//! Built-in scenarios with known answers.

use std::fmt::Write as _;

use crate::error::{Error, Result};

use super::scenario::Scenario;

/// Scenario sources shipped with the crate, by name.
pub const BUILTIN: &[(&str, &str)] = &[
    ("line-ends", include_str!("../../scenarios/line-ends.toml")),
    ("z2-ends", include_str!("../../scenarios/z2-ends.toml")),
    ("f2-tree", include_str!("../../scenarios/f2-tree.toml")),
    ("punctured-torus", include_str!("../../scenarios/punctured-torus.toml")),
    ("three-punctured-sphere", include_str!("../../scenarios/three-punctured-sphere.toml")),
    ("f2-a-cusped", include_str!("../../scenarios/f2-a-cusped.toml")),
    ("f2-a-local", include_str!("../../scenarios/f2-a-local.toml")),
    ("line-local", include_str!("../../scenarios/line-local.toml")),
    ("cylinder-triangle", include_str!("../../scenarios/cylinder-triangle.toml")),
    ("horoball-path", include_str!("../../scenarios/horoball-path.toml")),
];

pub fn registry() -> Vec<Scenario> {
    BUILTIN.iter().map(|(_, text)| Scenario::parse(text).expect("built-in scenarios parse")).collect()
}

pub fn builtin(name: &str) -> Result<Scenario> {
    let (_, text) = BUILTIN
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::Unknown(format!("no built-in scenario named {name:?}")))?;
    Scenario::parse(text)
}

/// A path to a scenario file, or the name of a built-in one.
pub fn resolve(arg: &str) -> Result<Scenario> {
    let path = std::path::Path::new(arg);
    if path.exists() {
        Scenario::from_file(path)
    } else {
        builtin(arg)
    }
}

/// Registry dump: one block per scenario with its expectations and provenance.
pub fn list_examples() -> String {
    let mut out = String::new();
    for s in registry() {
        let _ = writeln!(out, "{}: {}", s.name, s.description);
        match &s.expected {
            None => {
                let _ = writeln!(out, "  (no known answer)");
            }
            Some(k) => {
                for (deg, c) in &k.pro {
                    let _ = writeln!(out, "  pro[{deg}] = {c}");
                }
                if let Some(e) = &k.ends {
                    let _ = writeln!(out, "  ends = {e}");
                }
                if let Some(d) = k.dimension {
                    let _ = writeln!(out, "  dimension = {d}");
                }
                if let Some(v) = k.local_vanishes {
                    let _ = writeln!(out, "  local_vanishes = {v}");
                }
                if let Some(v) = k.regularity {
                    let _ = writeln!(out, "  regularity = {v}");
                }
                let _ = writeln!(out, "  provenance: {}", k.provenance);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_is_well_formed() {
        let r = registry();
        assert!(r.len() >= 6);
        for (s, (name, _)) in r.iter().zip(BUILTIN) {
            assert_eq!(s.name, *name);
        }
        assert!(list_examples().matches("provenance:").count() >= 6);
        assert!(builtin("nope").is_err());
    }
}
