//! Finitely generated abelian groups, subquotients and induced maps.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::{IntMatrix, Matrix, Scalar};
use super::snf::smith_generic;
use crate::error::{Error, Result};

/// `Z^rank + Z/d_1 + ... + Z/d_m` with `d_1 | d_2 | ...`, each `d_i > 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup { rank, torsion: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Number of generators in the canonical presentation.
    pub fn generators(&self) -> usize {
        self.rank + self.torsion.len()
    }

    pub(crate) fn from_divisors(rank: usize, divisors: &[BigInt]) -> Result<Self> {
        let torsion = divisors
            .iter()
            .filter(|d| !d.is_one())
            .map(|d| d.to_u64().ok_or_else(|| Error::Overflow("torsion coefficient".into())))
            .collect::<Result<Vec<_>>>()?;
        Ok(AbelianGroup { rank, torsion })
    }

    /// Moduli per coordinate: 0 for free coordinates, then the torsion orders.
    pub fn moduli(&self) -> Vec<BigInt> {
        std::iter::repeat_n(BigInt::from(0), self.rank).chain(self.torsion.iter().map(|&d| BigInt::from(d))).collect()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t: Vec<String> = self.torsion.iter().map(u64::to_string).collect();
        write!(f, "{}; {}", self.rank, t.join(","))
    }
}

impl FromStr for AbelianGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Input(format!("malformed group description {s:?}"));
        let (r, t) = s.split_once(';').ok_or_else(bad)?;
        let rank = r.trim().parse().map_err(|_| bad())?;
        let torsion = t
            .split(',')
            .map(str::trim)
            .filter(|x| !x.is_empty())
            .map(|x| x.parse::<u64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        if torsion.iter().any(|&d| d < 2) || torsion.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(bad());
        }
        Ok(AbelianGroup { rank, torsion })
    }
}

/// `ker(out) / im(in)` with explicit generators and a coordinate projector.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub group: AbelianGroup,
    /// Columns are representative cycles/cocycles (free first, then torsion).
    pub generators: Matrix<BigInt>,
    /// Maps an element of `ker(out)` to its coordinates.
    pub projector: Matrix<BigInt>,
    moduli: Vec<BigInt>,
}

fn subquotient_generic<T: Scalar>(d_in: &Matrix<T>, d_out: &Matrix<T>) -> Option<Subquotient> {
    let n = d_out.cols();
    let f1 = smith_generic(d_out, true)?;
    let r = f1.rank;
    let z = n - r;
    let tail: Vec<usize> = (r..n).collect();
    let all_n: Vec<usize> = (0..n).collect();
    let kernel = f1.v.select(&all_n, &tail);
    let coords = f1.v_inv.select(&tail, &all_n);
    let m = coords.checked_mul(d_in)?;
    let f2 = smith_generic(&m, true)?;
    let s = f2.rank;
    let mut free = Vec::new();
    let mut tors = Vec::new();
    for i in 0..z {
        if i >= s {
            free.push(i);
        } else if !f2.s.get(i, i).to_bigint().is_one() {
            tors.push(i);
        }
    }
    let picked: Vec<usize> = free.iter().chain(tors.iter()).copied().collect();
    let proj_full = f2.u.checked_mul(&coords)?;
    let gens_full = kernel.checked_mul(&f2.u_inv)?;
    let projector = proj_full.select(&picked, &all_n).to_big();
    let generators = gens_full.select(&all_n, &picked).to_big();
    let divisors: Vec<BigInt> = tors.iter().map(|&i| f2.s.get(i, i).to_bigint()).collect();
    let group = AbelianGroup::from_divisors(free.len(), &divisors).ok()?;
    let moduli = group.moduli();
    Some(Subquotient { group, generators, projector, moduli })
}

impl Subquotient {
    /// Computes `ker(d_out) / im(d_in)`; `d_in: C' -> C`, `d_out: C -> C''`.
    pub fn compute(d_in: &IntMatrix, d_out: &IntMatrix) -> Result<Subquotient> {
        assert_eq!(d_in.rows(), d_out.cols(), "composable maps expected");
        if let Some(sq) = subquotient_generic(d_in, d_out) {
            return Ok(sq);
        }
        subquotient_generic(&d_in.to_big(), &d_out.to_big()).ok_or_else(|| Error::Overflow("subquotient".into()))
    }

    pub fn ambient_dim(&self) -> usize {
        self.projector.cols()
    }

    /// Coordinates of the class of `c` (which must lie in `ker(out)`).
    pub fn coordinates(&self, c: &[BigInt]) -> Vec<BigInt> {
        let raw = self.projector.mul_vec(c).expect("BigInt product");
        reduce(raw, &self.moduli)
    }

    pub fn moduli(&self) -> &[BigInt] {
        &self.moduli
    }
}

fn reduce(mut v: Vec<BigInt>, moduli: &[BigInt]) -> Vec<BigInt> {
    for (x, m) in v.iter_mut().zip(moduli) {
        if !Zero::is_zero(m) {
            *x = Scalar::rem_euclid(x, m).expect("nonzero modulus");
        }
    }
    v
}

/// A homomorphism between abelian groups in canonical coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedMap {
    pub source: AbelianGroup,
    pub target: AbelianGroup,
    pub matrix: Matrix<BigInt>,
}

impl InducedMap {
    /// Map induced by a (co)chain map `f`, applied to source generators.
    pub fn from_chain_map(source: &Subquotient, target: &Subquotient, f: impl Fn(&[BigInt]) -> Vec<BigInt>) -> Self {
        let g = source.group.generators();
        let mut matrix = Matrix::zeros(target.group.generators(), g);
        for j in 0..g {
            let image = f(&source.generators.column(j));
            for (i, v) in target.coordinates(&image).into_iter().enumerate() {
                matrix.set(i, j, v);
            }
        }
        InducedMap { source: source.group.clone(), target: target.group.clone(), matrix }
    }

    pub fn identity(group: &AbelianGroup) -> Self {
        InducedMap { source: group.clone(), target: group.clone(), matrix: Matrix::identity(group.generators()) }
    }

    pub fn zero(source: &AbelianGroup, target: &AbelianGroup) -> Self {
        InducedMap { source: source.clone(), target: target.clone(), matrix: Matrix::zeros(target.generators(), source.generators()) }
    }

    /// `other ∘ self`
    pub fn then(&self, other: &InducedMap) -> InducedMap {
        assert_eq!(self.target, other.source, "maps do not compose");
        let m = other.matrix.checked_mul(&self.matrix).expect("BigInt product");
        let moduli = other.target.moduli();
        let rows: Vec<Vec<BigInt>> = (0..m.cols()).map(|j| reduce(m.column(j), &moduli)).collect();
        let mut matrix = Matrix::zeros(m.rows(), m.cols());
        for (j, col) in rows.into_iter().enumerate() {
            for (i, v) in col.into_iter().enumerate() {
                matrix.set(i, j, v);
            }
        }
        InducedMap { source: self.source.clone(), target: other.target.clone(), matrix }
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// Isomorphism type of the image subgroup.
    pub fn image(&self) -> AbelianGroup {
        let rel = relation_matrix(&self.target);
        let gens = self.matrix.hcat(&rel);
        quotient_structure(&gens, &rel)
    }

    pub fn kernel_lattice(&self) -> Matrix<BigInt> {
        let rel = relation_matrix(&self.target);
        let combined = self.matrix.hcat(&rel);
        let ker = integer_kernel(&combined);
        let m = self.source.generators();
        let rows: Vec<usize> = (0..m).collect();
        let cols: Vec<usize> = (0..ker.cols()).collect();
        ker.select(&rows, &cols)
    }
}

/// Columns `d_i e_i` for the torsion coordinates of `g`.
pub fn relation_matrix(g: &AbelianGroup) -> Matrix<BigInt> {
    let n = g.generators();
    let mut m = Matrix::zeros(n, g.torsion.len());
    for (j, &d) in g.torsion.iter().enumerate() {
        m.set(g.rank + j, j, BigInt::from(d));
    }
    m
}

/// Basis (as columns) of the integer kernel of `a`.
pub fn integer_kernel(a: &Matrix<BigInt>) -> Matrix<BigInt> {
    let f = smith_generic(a, true).expect("BigInt reduction cannot overflow");
    let n = a.cols();
    let rows: Vec<usize> = (0..n).collect();
    let tail: Vec<usize> = (f.rank..n).collect();
    f.v.select(&rows, &tail)
}

/// Whether `x` lies in the lattice spanned by the columns of `gens`.
pub fn lattice_contains(gens: &Matrix<BigInt>, x: &[BigInt]) -> bool {
    if gens.cols() == 0 {
        return x.iter().all(Zero::is_zero);
    }
    let f = smith_generic(gens, true).expect("BigInt reduction cannot overflow");
    let y = f.u.mul_vec(x).expect("BigInt product");
    y.iter().enumerate().all(|(i, yi)| if i < f.rank { Scalar::divides(f.s.get(i, i), yi) } else { Zero::is_zero(yi) })
}

/// Structure of `span(l) / span(b)` where `span(b) ⊆ span(l)`.
pub fn quotient_structure(l: &Matrix<BigInt>, b: &Matrix<BigInt>) -> AbelianGroup {
    if l.cols() == 0 {
        return AbelianGroup::trivial();
    }
    let f = smith_generic(l, true).expect("BigInt reduction cannot overflow");
    let r = f.rank;
    let ub = f.u.checked_mul(b).expect("BigInt product");
    let mut c = Matrix::zeros(r, b.cols());
    for i in 0..r {
        let s = f.s.get(i, i);
        for j in 0..b.cols() {
            let v = ub.get(i, j);
            debug_assert!(s.divides(v), "sublattice not contained");
            c.set(i, j, v / s);
        }
    }
    let g = smith_generic(&c, false).expect("BigInt reduction cannot overflow");
    let divisors = g.diagonal();
    AbelianGroup::from_divisors(r - g.rank, &divisors).expect("torsion fits in u64")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_parse() {
        let g = AbelianGroup { rank: 2, torsion: vec![2, 6] };
        assert_eq!(g.to_string(), "2; 2,6");
        assert_eq!("2; 2,6".parse::<AbelianGroup>().unwrap(), g);
        assert_eq!("0; ".parse::<AbelianGroup>().unwrap(), AbelianGroup::trivial());
        assert!("1; 2,3".parse::<AbelianGroup>().is_err());
    }

    #[test]
    fn quotient_of_lattices() {
        // Z^2 / <(2,0),(0,3)> = Z/6
        let l = IntMatrix::identity(2).to_big();
        let b = Matrix::from_rows(vec![vec![2i64, 0], vec![0, 3]]).to_big();
        assert_eq!(quotient_structure(&l, &b), AbelianGroup { rank: 0, torsion: vec![6] });
    }

    #[test]
    fn kernel_and_membership() {
        let a = Matrix::from_rows(vec![vec![1i64, 1, 0]]).to_big();
        let k = integer_kernel(&a);
        assert_eq!(k.cols(), 2);
        assert!(lattice_contains(&k, &[BigInt::from(1), BigInt::from(-1), BigInt::from(5)]));
        assert!(!lattice_contains(&k, &[BigInt::from(1), BigInt::from(0), BigInt::from(0)]));
    }
}
