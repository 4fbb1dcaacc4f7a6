//! Peripheral subgroups, coset traces and induced peripheral structures.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::error::{Error, Result};

use super::ball::CayleyBall;
use super::spec::{abelian_word, Factor, GroupKind, GroupSpec};
use super::word::{Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Peripheral {
    pub name: String,
    pub generators: Vec<Word>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PeripheralSpec {
    pub subgroups: Vec<Peripheral>,
}

impl PeripheralSpec {
    pub fn empty() -> Self {
        Self::default()
    }

    /// One subgroup per generator list, named `P0, P1, ...`.
    pub fn from_generators(spec: &GroupSpec, subgroups: &[&[&str]]) -> Result<Self> {
        let mut out = Vec::new();
        for (i, gens) in subgroups.iter().enumerate() {
            let generators = gens.iter().map(|g| spec.parse_word(g).and_then(|w| spec.normal_form(&w))).collect::<Result<Vec<_>>>()?;
            out.push(Peripheral { name: format!("P{i}"), generators });
        }
        Ok(PeripheralSpec { subgroups: out })
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }
}

/// How membership in a peripheral subgroup is decided.
#[derive(Clone, Debug)]
pub enum Shape {
    /// Generated by a set of basis letters of a free factor, or by a whole factor.
    Letters(Vec<bool>),
    /// Infinite cyclic, generated by `u` (in normal form).
    Cyclic(Word),
    /// Sublattice of a free abelian group, with a basis in Hermite form.
    Lattice { basis: Vec<Vec<i64>>, hermite: Vec<Vec<i64>> },
}

/// A peripheral subgroup together with its membership procedure.
#[derive(Clone, Debug)]
pub struct PeripheralModel {
    pub index: usize,
    pub name: String,
    pub shape: Shape,
}

impl PeripheralModel {
    pub fn new(spec: &GroupSpec, index: usize, p: &Peripheral) -> Result<Self> {
        let shape = shape_of(spec, p)?;
        let model = PeripheralModel { index, name: p.name.clone(), shape };
        // properness: some generator of G lies outside P
        let key_e = model.coset_key(spec, &Word::identity())?;
        let mut proper = false;
        for g in 0..spec.generator_count() {
            if model.coset_key(spec, &Word::letter(g, false))? != key_e {
                proper = true;
                break;
            }
        }
        if !proper {
            return Err(Error::Input(format!("peripheral subgroup {} is not proper", p.name)));
        }
        Ok(model)
    }

    /// Generator of an infinite cyclic peripheral subgroup.
    pub fn cyclic_generator(&self) -> Option<Word> {
        match &self.shape {
            Shape::Cyclic(u) => Some(u.clone()),
            Shape::Letters(mask) if mask.iter().filter(|&&m| m).count() == 1 => {
                mask.iter().position(|&m| m).map(|g| Word::letter(g, false))
            }
            _ => None,
        }
    }

    /// Canonical representative of the left coset `vP`.
    pub fn coset_key(&self, spec: &GroupSpec, v: &Word) -> Result<Word> {
        let v = spec.normal_form(v)?;
        match &self.shape {
            Shape::Letters(mask) => {
                let mut letters = v.0;
                while letters.last().is_some_and(|l| mask[l.gen as usize]) {
                    letters.pop();
                }
                Ok(Word(letters))
            }
            Shape::Cyclic(u) => {
                let window = cyclic_window(spec, &v, u);
                let mut best = v.clone();
                for k in -window..=window {
                    let c = spec.multiply(&v, &u.pow(k))?;
                    if c.shortlex_key() < best.shortlex_key() {
                        best = c;
                    }
                }
                Ok(best)
            }
            Shape::Lattice { hermite, .. } => {
                let mut e = spec.exponents(&v);
                reduce_mod_lattice(&mut e, hermite);
                Ok(abelian_word(&e, 0))
            }
        }
    }

    /// Distance in the peripheral word metric between `v` and `w`, or `None`
    /// when they lie in different cosets.
    pub fn internal_distance(&self, spec: &GroupSpec, v: &Word, w: &Word) -> Result<Option<u64>> {
        let h = spec.normal_form(&v.inverse().concat(w))?;
        match &self.shape {
            Shape::Letters(mask) => Ok(h.0.iter().all(|l| mask[l.gen as usize]).then_some(h.len() as u64)),
            Shape::Cyclic(u) => {
                let window = cyclic_window(spec, &h, u);
                for k in 0..=window {
                    for s in [k, -k] {
                        if spec.normal_form(&u.pow(s))? == h {
                            return Ok(Some(k as u64));
                        }
                    }
                }
                Ok(None)
            }
            Shape::Lattice { basis, .. } => Ok(lattice_coordinates(basis, &spec.exponents(&h)).map(|c| c.iter().map(|x| x.unsigned_abs()).sum())),
        }
    }

    /// Whether `w` lies in the subgroup.
    pub fn contains(&self, spec: &GroupSpec, w: &Word) -> Result<bool> {
        Ok(self.internal_distance(spec, &Word::identity(), w)?.is_some())
    }
}

fn cyclic_window(spec: &GroupSpec, v: &Word, u: &Word) -> i64 {
    let scale = if matches!(spec.kind, GroupKind::Surface(_)) { 4 } else { 2 };
    (scale * (v.len() + u.len()) + 2) as i64
}

fn shape_of(spec: &GroupSpec, p: &Peripheral) -> Result<Shape> {
    if p.generators.is_empty() {
        return Err(Error::Input(format!("peripheral subgroup {} has no generators", p.name)));
    }
    let gens: Vec<Word> = p.generators.iter().map(|g| spec.normal_form(g)).collect::<Result<_>>()?;
    if gens.iter().any(Word::is_empty) {
        return Err(Error::Input(format!("peripheral subgroup {} has a trivial generator", p.name)));
    }
    match &spec.kind {
        GroupKind::FreeAbelian(_) => {
            let basis: Vec<Vec<i64>> = gens.iter().map(|g| spec.exponents(g)).collect();
            let hermite = hermite_rows(&basis);
            if hermite.len() != basis.len() {
                return Err(Error::UnsupportedPeripheral(format!("{}: generators are linearly dependent", p.name)));
            }
            Ok(Shape::Lattice { basis, hermite })
        }
        GroupKind::Free(_) | GroupKind::FreeProduct(_) => {
            let single: Option<Vec<Letter>> = gens.iter().map(|g| (g.len() == 1).then(|| g.0[0])).collect();
            if let Some(letters) = single {
                let mut mask = vec![false; spec.generator_count()];
                for l in &letters {
                    mask[l.gen as usize] = true;
                }
                if letters_shape_ok(spec, &mask) {
                    return Ok(Shape::Letters(mask));
                }
            }
            if gens.len() == 1 {
                return Ok(Shape::Cyclic(gens[0].clone()));
            }
            Err(Error::UnsupportedPeripheral(format!("{}: membership undecidable for this subgroup shape", p.name)))
        }
        GroupKind::Surface(_) if gens.len() == 1 => Ok(Shape::Cyclic(gens[0].clone())),
        _ => Err(Error::UnsupportedPeripheral(format!("{}: membership undecidable for this subgroup shape", p.name))),
    }
}

/// Letter sets are valid when they lie in one free factor, or fill a whole factor.
fn letters_shape_ok(spec: &GroupSpec, mask: &[bool]) -> bool {
    match &spec.kind {
        GroupKind::Free(_) => true,
        GroupKind::FreeProduct(fs) => {
            let used: Vec<usize> = (0..mask.len()).filter(|&g| mask[g]).map(|g| spec.factor_of(g)).collect();
            let f = used[0];
            if used.iter().any(|&x| x != f) {
                return false;
            }
            let whole = (0..mask.len()).filter(|&g| spec.factor_of(g) == f).all(|g| mask[g]);
            whole || matches!(fs[f], Factor::Free(_))
        }
        _ => false,
    }
}

/// Row-style Hermite normal form (nonzero rows only, positive pivots).
pub(crate) fn hermite_rows(rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut out: Vec<Vec<i64>> = Vec::new();
    for c in 0..cols {
        // gcd-combine all remaining rows on column c
        loop {
            let nz: Vec<usize> = (0..m.len()).filter(|&r| m[r][c] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz.iter().min_by_key(|&&r| m[r][c].abs()).unwrap();
            for &r in &nz {
                if r != p {
                    let q = m[r][c].div_euclid(m[p][c]);
                    let prow = m[p].clone();
                    for (x, y) in m[r].iter_mut().zip(&prow) {
                        *x -= q * y;
                    }
                }
            }
        }
        if let Some(r) = (0..m.len()).find(|&r| m[r][c] != 0) {
            let mut row = m.remove(r);
            if row[c] < 0 {
                row.iter_mut().for_each(|x| *x = -*x);
            }
            // reduce earlier pivot rows above this pivot
            for prev in out.iter_mut() {
                let q = prev[c].div_euclid(row[c]);
                for (x, y) in prev.iter_mut().zip(&row) {
                    *x -= q * y;
                }
            }
            out.push(row);
        }
    }
    out
}

/// Reduces `e` to the canonical representative of `e + L`.
pub(crate) fn reduce_mod_lattice(e: &mut [i64], hermite: &[Vec<i64>]) {
    for row in hermite {
        let c = row.iter().position(|&x| x != 0).expect("nonzero row");
        let q = e[c].div_euclid(row[c]);
        for (x, y) in e.iter_mut().zip(row) {
            *x -= q * y;
        }
    }
}

/// Integer coordinates of `e` in the (independent) `basis`, if any.
fn lattice_coordinates(basis: &[Vec<i64>], e: &[i64]) -> Option<Vec<i64>> {
    use crate::homology::matrix::Matrix;
    use num_traits::ToPrimitive;
    // solve basis^T x = e by integer elimination via the Smith form
    let n = e.len();
    let k = basis.len();
    let mut a = Matrix::<i64>::zeros(n, k);
    for (j, b) in basis.iter().enumerate() {
        for i in 0..n {
            a.set(i, j, b[i]);
        }
    }
    let f = crate::homology::smith_normal_form(&a);
    let eb: Vec<num_bigint::BigInt> = e.iter().map(|&x| x.into()).collect();
    let y = f.u.mul_vec(&eb)?;
    let mut z = vec![num_bigint::BigInt::from(0); k];
    for (i, yi) in y.iter().enumerate() {
        if i < f.rank {
            let d = f.s.get(i, i);
            if yi % d != num_bigint::BigInt::from(0) {
                return None;
            }
            z[i] = yi / d;
        } else if *yi != num_bigint::BigInt::from(0) {
            return None;
        }
    }
    let x = f.v.mul_vec(&z)?;
    x.iter().map(|v| v.to_i64()).collect()
}

/// Ball vertices of one left coset of one peripheral subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTrace {
    pub peripheral: usize,
    /// Canonical coset representative.
    pub key: Word,
    /// Ball vertex ids, sorted.
    pub members: Vec<usize>,
    /// Connected under unit steps of the peripheral word metric.
    pub connected: bool,
}

/// Partitions ball vertices into coset traces for every peripheral subgroup.
pub fn peripheral_cosets(spec: &GroupSpec, per: &PeripheralSpec, ball: &CayleyBall) -> Result<Vec<CosetTrace>> {
    let mut out = Vec::new();
    for (pi, p) in per.subgroups.iter().enumerate() {
        let model = PeripheralModel::new(spec, pi, p)?;
        let mut classes: BTreeMap<(usize, Vec<Letter>), Vec<usize>> = BTreeMap::new();
        for (v, w) in ball.words.iter().enumerate() {
            let key = model.coset_key(spec, w)?;
            classes.entry((key.len(), key.0)).or_default().push(v);
        }
        for ((_, key), members) in classes {
            let connected = trace_connected(spec, &model, ball, &members)?;
            out.push(CosetTrace { peripheral: pi, key: Word(key), members, connected });
        }
    }
    Ok(out)
}

fn trace_connected(spec: &GroupSpec, model: &PeripheralModel, ball: &CayleyBall, members: &[usize]) -> Result<bool> {
    let mut seen = vec![false; members.len()];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(i) = queue.pop_front() {
        for j in 0..members.len() {
            if !seen[j] && model.internal_distance(spec, &ball.words[members[i]], &ball.words[members[j]])? == Some(1) {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    Ok(seen.into_iter().all(|s| s))
}

/// Right action of the generators on the cosets `H\G` of a finite-index subgroup,
/// with `H` the stabilizer of point 0.
#[derive(Clone, Debug)]
pub struct CosetTable {
    /// `perm[g][i]` = image of point `i` under generator `g`.
    pub perm: Vec<Vec<usize>>,
}

impl CosetTable {
    pub fn new(spec: &GroupSpec, perm: Vec<Vec<usize>>) -> Result<Self> {
        if perm.len() != spec.generator_count() {
            return Err(Error::Input("one permutation per generator expected".into()));
        }
        let m = perm.first().map_or(0, Vec::len);
        for p in &perm {
            let mut seen = vec![false; m];
            if p.len() != m || p.iter().any(|&x| x >= m || std::mem::replace(&mut seen[x], true)) {
                return Err(Error::Input("coset table entries must be permutations of one point set".into()));
            }
        }
        if m == 0 {
            return Err(Error::Input("empty coset table".into()));
        }
        Ok(CosetTable { perm })
    }

    /// Coset table of the kernel of a homomorphism to `Z/n` given by generator images.
    pub fn cyclic_quotient(spec: &GroupSpec, n: usize, images: &[usize]) -> Result<Self> {
        let perm = images.iter().map(|&k| (0..n).map(|i| (i + k) % n).collect()).collect();
        Self::new(spec, perm)
    }

    pub fn index(&self) -> usize {
        self.perm[0].len()
    }

    pub fn act(&self, point: usize, w: &Word) -> usize {
        w.0.iter().fold(point, |p, l| {
            let perm = &self.perm[l.gen as usize];
            if l.inv {
                perm.iter().position(|&x| x == p).expect("permutation")
            } else {
                perm[p]
            }
        })
    }
}

/// Peripheral structure induced on a finite-index subgroup.
#[derive(Clone, Debug)]
pub struct InducedPeripheral {
    pub parent: usize,
    /// Double coset representative `d`.
    pub conjugator: Word,
    /// Generators of `H ∩ d P d^{-1}`.
    pub generators: Vec<Word>,
}

/// For every `P_i` and every double coset `H d P_i`, generators of `H ∩ d P_i d^{-1}`.
pub fn induced_peripheral(spec: &GroupSpec, table: &CosetTable, per: &PeripheralSpec) -> Result<Vec<InducedPeripheral>> {
    let m = table.index();
    // shortlex-least transversal of H\G by breadth-first search from point 0
    let mut rep: Vec<Option<Word>> = vec![None; m];
    rep[0] = Some(Word::identity());
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for l in spec.letters() {
            let j = table.act(i, &Word(vec![l]));
            if rep[j].is_none() {
                let w = rep[i].as_ref().unwrap().concat(&Word(vec![l]));
                rep[j] = Some(spec.normal_form(&w)?);
                queue.push_back(j);
            }
        }
    }
    let mut out = Vec::new();
    for (pi, p) in per.subgroups.iter().enumerate() {
        let mut orbit_of = vec![usize::MAX; m];
        for start in 0..m {
            if orbit_of[start] != usize::MAX || rep[start].is_none() {
                continue;
            }
            // Schreier transversal of the P-orbit of `start`
            let mut tr: HashMap<usize, Word> = HashMap::from([(start, Word::identity())]);
            orbit_of[start] = start;
            let mut q = VecDeque::from([start]);
            let mut order = vec![start];
            while let Some(i) = q.pop_front() {
                for g in &p.generators {
                    for h in [g.clone(), g.inverse()] {
                        let j = table.act(i, &h);
                        if !tr.contains_key(&j) {
                            let w = tr[&i].concat(&h);
                            tr.insert(j, w);
                            orbit_of[j] = start;
                            q.push_back(j);
                            order.push(j);
                        }
                    }
                }
            }
            let d = rep[start].clone().unwrap();
            let mut gens: Vec<Word> = Vec::new();
            for &i in &order {
                for g in &p.generators {
                    let j = table.act(i, g);
                    let s = tr[&i].concat(g).concat(&tr[&j].inverse());
                    let conj = spec.normal_form(&d.concat(&s).concat(&d.inverse()))?;
                    if !conj.is_empty() && !gens.contains(&conj) && !gens.contains(&conj.inverse()) {
                        gens.push(conj);
                    }
                }
            }
            out.push(InducedPeripheral { parent: pi, conjugator: d, generators: gens });
        }
    }
    Ok(out)
}
