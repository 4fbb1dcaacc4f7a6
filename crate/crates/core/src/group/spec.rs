//! Group presentations with decidable normal forms.

use crate::error::{Error, Result};

use super::surface::Surface;
use super::word::{default_names, Letter, Word};

/// Factor of a free product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factor {
    Free(usize),
    FreeAbelian(usize),
}

impl Factor {
    pub fn rank(self) -> usize {
        match self {
            Factor::Free(r) | Factor::FreeAbelian(r) => r,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupKind {
    Free(usize),
    FreeAbelian(usize),
    /// Closed orientable surface of genus at least 2.
    Surface(usize),
    FreeProduct(Vec<Factor>),
    /// Anything else; kept so that configurations can name it and fail cleanly.
    Presented,
}

/// A group given by generators, relators and a normal-form procedure.
#[derive(Clone, Debug)]
pub struct GroupSpec {
    pub kind: GroupKind,
    pub names: Vec<String>,
    pub relators: Vec<Word>,
    factor_of: Vec<usize>,
    surface: Option<Surface>,
}

impl GroupSpec {
    pub fn free(rank: usize) -> Self {
        Self::build(GroupKind::Free(rank), default_names(rank)).expect("free group")
    }

    pub fn free_abelian(rank: usize) -> Self {
        Self::build(GroupKind::FreeAbelian(rank), default_names(rank)).expect("free abelian group")
    }

    pub fn surface(genus: usize) -> Result<Self> {
        Self::build(GroupKind::Surface(genus), default_names(2 * genus))
    }

    pub fn free_product(factors: Vec<Factor>) -> Result<Self> {
        let n = factors.iter().map(|f| f.rank()).sum();
        Self::build(GroupKind::FreeProduct(factors), default_names(n))
    }

    /// Builds a spec with explicit generator names.
    pub fn build(kind: GroupKind, names: Vec<String>) -> Result<Self> {
        let expected = match &kind {
            GroupKind::Free(r) | GroupKind::FreeAbelian(r) => *r,
            GroupKind::Surface(g) => {
                if *g < 2 {
                    return Err(Error::Input("surface groups need genus at least 2".into()));
                }
                2 * g
            }
            GroupKind::FreeProduct(fs) => fs.iter().map(|f| f.rank()).sum(),
            GroupKind::Presented => names.len(),
        };
        if names.len() != expected {
            return Err(Error::Input(format!("expected {expected} generator names, got {}", names.len())));
        }
        if names.iter().any(|n| n.is_empty() || n == "1" || n.contains(char::is_whitespace)) {
            return Err(Error::Input("invalid generator name".into()));
        }
        let factor_of = match &kind {
            GroupKind::FreeProduct(fs) => fs.iter().enumerate().flat_map(|(i, f)| std::iter::repeat_n(i, f.rank())).collect(),
            _ => vec![0; expected],
        };
        let (relators, surface) = match &kind {
            GroupKind::Surface(g) => {
                let s = Surface::new(*g);
                (vec![s.relator().clone()], Some(s))
            }
            GroupKind::FreeAbelian(r) => {
                let mut rels = Vec::new();
                for i in 0..*r {
                    for j in i + 1..*r {
                        let (a, b) = (Letter::new(i, false), Letter::new(j, false));
                        rels.push(Word(vec![a, b, a.inverse(), b.inverse()]));
                    }
                }
                (rels, None)
            }
            _ => (Vec::new(), None),
        };
        Ok(GroupSpec { kind, names, relators, factor_of, surface })
    }

    pub fn generator_count(&self) -> usize {
        self.names.len()
    }

    /// Factor index of a generator (0 unless the group is a free product).
    pub fn factor_of(&self, gen: usize) -> usize {
        self.factor_of[gen]
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        Word::parse(text, &self.names)
    }

    pub fn render(&self, w: &Word) -> String {
        w.render(&self.names)
    }

    /// All letters in shortlex order.
    pub fn letters(&self) -> Vec<Letter> {
        (0..self.generator_count()).flat_map(|g| [Letter::new(g, false), Letter::new(g, true)]).collect()
    }

    fn check(&self, w: &Word) -> Result<()> {
        match w.0.iter().find(|l| l.gen as usize >= self.generator_count()) {
            Some(l) => Err(Error::Input(format!("generator index {} out of range", l.gen))),
            None => Ok(()),
        }
    }

    /// Canonical representative of the element represented by `w`.
    pub fn normal_form(&self, w: &Word) -> Result<Word> {
        self.check(w)?;
        match &self.kind {
            GroupKind::Free(_) => Ok(w.free_reduce()),
            GroupKind::FreeAbelian(r) => Ok(abelian_word(&w.exponent_sums(*r), 0)),
            GroupKind::Surface(_) => Ok(self.surface.as_ref().expect("surface data").normal_form(w)),
            GroupKind::FreeProduct(fs) => Ok(self.free_product_nf(fs, w)),
            GroupKind::Presented => Err(Error::NoNormalForm("no normal form available for a general presentation".into())),
        }
    }

    /// Normal form of `u * v`.
    pub fn multiply(&self, u: &Word, v: &Word) -> Result<Word> {
        self.normal_form(&u.concat(v))
    }

    pub fn is_identity(&self, w: &Word) -> Result<bool> {
        Ok(self.normal_form(w)?.is_empty())
    }

    /// Word length of the element (length of its normal form).
    pub fn length(&self, w: &Word) -> Result<usize> {
        Ok(self.normal_form(w)?.len())
    }

    /// Exponent vector for free abelian groups.
    pub fn exponents(&self, w: &Word) -> Vec<i64> {
        w.exponent_sums(self.generator_count())
    }

    fn free_product_nf(&self, factors: &[Factor], w: &Word) -> Word {
        let offsets: Vec<usize> = factors
            .iter()
            .scan(0, |acc, f| {
                let o = *acc;
                *acc += f.rank();
                Some(o)
            })
            .collect();
        // syllables: (factor, letters) for free factors, (factor, exponents) for abelian ones
        enum Syl {
            Free(usize, Vec<Letter>),
            Abelian(usize, Vec<i64>),
        }
        let mut stack: Vec<Syl> = Vec::new();
        for &l in &w.0 {
            let f = self.factor_of[l.gen as usize];
            let merged = match stack.last_mut() {
                Some(Syl::Free(tf, letters)) if *tf == f => {
                    if letters.last() == Some(&l.inverse()) {
                        letters.pop();
                    } else {
                        letters.push(l);
                    }
                    letters.is_empty()
                }
                Some(Syl::Abelian(tf, e)) if *tf == f => {
                    e[l.gen as usize - offsets[f]] += l.sign();
                    e.iter().all(|&x| x == 0)
                }
                _ => {
                    stack.push(match factors[f] {
                        Factor::Free(_) => Syl::Free(f, vec![l]),
                        Factor::FreeAbelian(r) => {
                            let mut e = vec![0; r];
                            e[l.gen as usize - offsets[f]] += l.sign();
                            Syl::Abelian(f, e)
                        }
                    });
                    false
                }
            };
            if merged {
                stack.pop();
            }
        }
        let mut out = Vec::new();
        for s in stack {
            match s {
                Syl::Free(_, letters) => out.extend(letters),
                Syl::Abelian(f, e) => out.extend(abelian_word(&e, offsets[f]).0),
            }
        }
        Word(out)
    }
}

/// `x_0^{e_0} x_1^{e_1} ...` starting at generator `offset`.
pub(crate) fn abelian_word(e: &[i64], offset: usize) -> Word {
    let mut out = Vec::new();
    for (i, &x) in e.iter().enumerate() {
        let l = Letter::new(offset + i, x < 0);
        out.extend(std::iter::repeat_n(l, x.unsigned_abs() as usize));
    }
    Word(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_and_abelian_examples() {
        let f2 = GroupSpec::free(2);
        let w = f2.parse_word("a a^-1 b").unwrap();
        assert_eq!(f2.render(&f2.normal_form(&w).unwrap()), "b");
        let z2 = GroupSpec::free_abelian(2);
        let w = z2.parse_word("a b a b^-1").unwrap();
        assert_eq!(z2.render(&z2.normal_form(&w).unwrap()), "aa");
    }

    #[test]
    fn free_product_merges_syllables() {
        let g = GroupSpec::free_product(vec![Factor::Free(1), Factor::FreeAbelian(2)]).unwrap();
        // a (b c B) ... inside the abelian factor b c B = c
        let w = g.parse_word("a b c B A a c").unwrap();
        assert_eq!(g.render(&g.normal_form(&w).unwrap()), "acc");
        let w = g.parse_word("a b B a").unwrap();
        assert_eq!(g.render(&g.normal_form(&w).unwrap()), "aa");
        let w = g.parse_word("c b").unwrap();
        assert_eq!(g.render(&g.normal_form(&w).unwrap()), "bc");
    }

    #[test]
    fn presented_has_no_normal_form() {
        let g = GroupSpec::build(GroupKind::Presented, default_names(2)).unwrap();
        assert!(matches!(g.normal_form(&Word::identity()), Err(Error::NoNormalForm(_))));
    }

    #[test]
    fn out_of_range_letter() {
        let f2 = GroupSpec::free(2);
        assert!(f2.normal_form(&Word::letter(5, false)).is_err());
    }
}
