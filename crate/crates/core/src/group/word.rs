//! Letters and words over a named generating set.

use std::fmt;

use crate::error::{Error, Result};

/// A generator or its inverse. Ordered `a < A < b < B < ...`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: u16,
    pub inv: bool,
}

impl Letter {
    pub fn new(gen: usize, inv: bool) -> Self {
        Letter { gen: gen as u16, inv }
    }

    pub fn inverse(self) -> Self {
        Letter { gen: self.gen, inv: !self.inv }
    }

    /// Signed exponent contribution: +1 or -1.
    pub fn sign(self) -> i64 {
        if self.inv {
            -1
        } else {
            1
        }
    }
}

/// A word in the generators. Not necessarily reduced.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn letter(gen: usize, inv: bool) -> Self {
        Word(vec![Letter::new(gen, inv)])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Concatenation without reduction.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut v = Vec::with_capacity(base.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            v.extend_from_slice(&base.0);
        }
        Word(v)
    }

    /// Cancels adjacent inverse pairs.
    pub fn free_reduce(&self) -> Word {
        Word(free_reduce(&self.0))
    }

    /// Signed letter counts per generator.
    pub fn exponent_sums(&self, gens: usize) -> Vec<i64> {
        let mut e = vec![0; gens];
        for l in &self.0 {
            e[l.gen as usize] += l.sign();
        }
        e
    }

    /// Shortlex comparison key.
    pub fn shortlex_key(&self) -> (usize, &[Letter]) {
        (self.0.len(), &self.0)
    }

    /// Parses a word. Accepts whitespace-separated tokens (`a`, `a^-1`,
    /// `a⁻¹`, `A` for single-letter names) or, when every generator name is
    /// one character, a compact string such as `abAB`. `1` and the empty
    /// string denote the identity.
    pub fn parse(text: &str, names: &[String]) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() || text == "1" {
            return Ok(Word::identity());
        }
        let single = names.iter().all(|n| n.chars().count() == 1);
        let tokens: Vec<String> = if text.contains(char::is_whitespace) || !single {
            text.split_whitespace().map(str::to_string).collect()
        } else {
            let mut toks: Vec<String> = Vec::new();
            for c in text.chars() {
                match c {
                    '⁻' | '¹' | '^' | '-' | '1' if !toks.is_empty() => toks.last_mut().unwrap().push(c),
                    _ => toks.push(c.to_string()),
                }
            }
            toks
        };
        let mut out = Vec::new();
        for tok in tokens {
            out.push(parse_token(&tok, names)?);
        }
        Ok(Word(out))
    }

    /// Renders the word with the given generator names.
    pub fn render(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        let compact = names.iter().all(|n| n.len() == 1 && n.chars().all(|c| c.is_ascii_lowercase()));
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|l| {
                let name = &names[l.gen as usize];
                match (l.inv, compact) {
                    (false, _) => name.clone(),
                    (true, true) => name.to_ascii_uppercase(),
                    (true, false) => format!("{name}^-1"),
                }
            })
            .collect();
        parts.join(if compact { "" } else { " " })
    }
}

fn parse_token(tok: &str, names: &[String]) -> Result<Letter> {
    let bad = || Error::Input(format!("unknown generator {tok:?}"));
    for suffix in ["^-1", "⁻¹"] {
        if let Some(stem) = tok.strip_suffix(suffix) {
            let g = names.iter().position(|n| n == stem).ok_or_else(bad)?;
            return Ok(Letter::new(g, true));
        }
    }
    if let Some(g) = names.iter().position(|n| n == tok) {
        return Ok(Letter::new(g, false));
    }
    let lower = tok.to_ascii_lowercase();
    if tok.chars().count() == 1 && lower != tok {
        if let Some(g) = names.iter().position(|n| *n == lower) {
            return Ok(Letter::new(g, true));
        }
    }
    Err(bad())
}

pub(crate) fn free_reduce(letters: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
    for &l in letters {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Default names `a, b, c, ...` for `n` generators.
pub fn default_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| if i < 26 { ((b'a' + i as u8) as char).to_string() } else { format!("x{i}") })
        .collect()
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens = self.0.iter().map(|l| l.gen as usize + 1).max().unwrap_or(0);
        f.write_str(&self.render(&default_names(gens)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        let names = default_names(2);
        let w = Word::parse("a a^-1 b", &names).unwrap();
        assert_eq!(w.len(), 3);
        assert_eq!(Word::parse("aAb", &names).unwrap(), w);
        assert_eq!(Word::parse("a a⁻¹ b", &names).unwrap(), w);
        assert_eq!(w.free_reduce().render(&names), "b");
        assert_eq!(Word::parse("1", &names).unwrap(), Word::identity());
        assert!(Word::parse("c", &names).is_err());
    }

    #[test]
    fn render_long_names() {
        let names = vec!["x1".to_string(), "y1".to_string()];
        let w = Word::parse("x1 y1^-1", &names).unwrap();
        assert_eq!(w.render(&names), "x1 y1^-1");
        assert_eq!(Word::parse(&w.render(&names), &names).unwrap(), w);
    }

    #[test]
    fn inverse_and_pow() {
        let names = default_names(2);
        let u = Word::parse("abAB", &names).unwrap();
        assert!(u.concat(&u.inverse()).free_reduce().is_empty());
        assert_eq!(u.pow(-2).len(), 8);
        assert_eq!(u.exponent_sums(2), vec![0, 0]);
    }
}
