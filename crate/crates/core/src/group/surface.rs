//! Closed orientable surface groups: Dehn's algorithm and shortlex geodesics.

use super::word::{free_reduce, Letter, Word};

#[derive(Clone, Debug)]
pub(crate) struct Surface {
    genus: usize,
    relator: Word,
    /// Cyclic permutations of the relator and its inverse.
    cyclic: Vec<Vec<Letter>>,
}

impl Surface {
    pub(crate) fn new(genus: usize) -> Self {
        let mut r = Vec::with_capacity(4 * genus);
        for i in 0..genus {
            let (a, b) = (Letter::new(2 * i, false), Letter::new(2 * i + 1, false));
            r.extend([a, b, a.inverse(), b.inverse()]);
        }
        let relator = Word(r);
        let mut cyclic = Vec::new();
        for base in [relator.0.clone(), relator.inverse().0] {
            for s in 0..base.len() {
                let mut c = base[s..].to_vec();
                c.extend_from_slice(&base[..s]);
                cyclic.push(c);
            }
        }
        Surface { genus, relator, cyclic }
    }

    pub(crate) fn relator(&self) -> &Word {
        &self.relator
    }

    /// Replaces any subword longer than half a relator by the shorter
    /// complement until none remains. Empty output iff the input is trivial.
    pub(crate) fn dehn(&self, letters: &[Letter]) -> Vec<Letter> {
        let half = 2 * self.genus;
        let mut w = free_reduce(letters);
        'outer: loop {
            for i in 0..w.len() {
                for c in &self.cyclic {
                    let m = w[i..].iter().zip(c).take_while(|(x, y)| x == y).count();
                    if m > half {
                        let replacement: Vec<Letter> = c[m..].iter().rev().map(|l| l.inverse()).collect();
                        let mut next = w[..i].to_vec();
                        next.extend(replacement);
                        next.extend_from_slice(&w[i + m..]);
                        w = free_reduce(&next);
                        continue 'outer;
                    }
                }
            }
            return w;
        }
    }

    /// A word is a candidate prefix of a shortlex-least geodesic only if it
    /// has no relator piece of more than half length and no half piece whose
    /// replacement would be shortlex smaller.
    fn admissible_suffix(&self, w: &[Letter]) -> bool {
        let half = 2 * self.genus;
        if w.len() < half {
            return true;
        }
        for c in &self.cyclic {
            // only pieces ending at the last letter need checking
            for len in half..=w.len().min(4 * self.genus) {
                let start = w.len() - len;
                if w[start..] != c[..len] {
                    continue;
                }
                if len > half {
                    return false;
                }
                let replacement: Vec<Letter> = c[len..].iter().rev().map(|l| l.inverse()).collect();
                if replacement.as_slice() < &w[start..] {
                    return false;
                }
            }
        }
        true
    }

    /// Shortlex-least geodesic representative.
    pub(crate) fn normal_form(&self, w: &Word) -> Word {
        let d = self.dehn(&w.0);
        if d.is_empty() {
            return Word::identity();
        }
        let gens = 2 * self.genus;
        let target = Word(d.clone()).exponent_sums(gens);
        let lb: usize = target.iter().map(|x| x.unsigned_abs() as usize).sum();
        let target_inv: Vec<Letter> = d.iter().rev().map(|l| l.inverse()).collect();
        let mut len = lb;
        while len <= d.len() {
            let mut prefix = Vec::with_capacity(len);
            let mut sums = vec![0i64; gens];
            if self.search(&mut prefix, &mut sums, &target, len, &target_inv) {
                return Word(prefix);
            }
            len += 2;
        }
        Word(d)
    }

    fn search(&self, prefix: &mut Vec<Letter>, sums: &mut [i64], target: &[i64], len: usize, target_inv: &[Letter]) -> bool {
        let remaining = len - prefix.len();
        let gap: usize = sums.iter().zip(target).map(|(s, t)| (t - s).unsigned_abs() as usize).sum();
        if gap > remaining {
            return false;
        }
        if remaining == 0 {
            let mut probe = prefix.clone();
            probe.extend_from_slice(target_inv);
            return self.dehn(&probe).is_empty();
        }
        for g in 0..2 * self.genus {
            for inv in [false, true] {
                let l = Letter::new(g, inv);
                if prefix.last() == Some(&l.inverse()) {
                    continue;
                }
                prefix.push(l);
                if self.admissible_suffix(prefix) {
                    sums[g] += l.sign();
                    if self.search(prefix, sums, target, len, target_inv) {
                        return true;
                    }
                    sums[g] -= l.sign();
                }
                prefix.pop();
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::word::default_names;

    #[test]
    fn relator_is_trivial() {
        let s = Surface::new(2);
        assert!(s.dehn(&s.relator().0).is_empty());
        assert!(s.normal_form(s.relator()).is_empty());
        let names = default_names(4);
        // dcDC = abAB and the latter is shortlex smaller
        let w = Word::parse("dcDC", &names).unwrap();
        assert_eq!(s.normal_form(&w).render(&names), "abAB");
    }

    #[test]
    fn normal_form_is_idempotent_and_geodesic() {
        let s = Surface::new(2);
        let names = default_names(4);
        for text in ["abcd", "abABc", "DCdcb", "aab", "abAB"] {
            let w = Word::parse(text, &names).unwrap();
            let n = s.normal_form(&w);
            assert_eq!(s.normal_form(&n), n);
            assert!(n.len() <= w.len());
            let mut probe = n.0.clone();
            probe.extend(w.inverse().0);
            assert!(s.dehn(&probe).is_empty());
        }
    }
}
