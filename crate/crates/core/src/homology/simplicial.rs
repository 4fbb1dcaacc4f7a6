//! Finite ordered simplicial complexes.

use std::collections::HashMap;

use super::matrix::IntMatrix;
use super::sparse::SparseMatrix;
use crate::error::{Error, Result};

/// A simplex as a strictly increasing vertex tuple.
pub type Simplex = Vec<usize>;

/// Downward-closed finite simplicial complex over vertex ids `0..n`.
///
/// Boundary signs follow the sorted vertex order: the face omitting the
/// `i`-th vertex carries sign `(-1)^i`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SimplicialComplex {
    by_dim: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
}

impl SimplicialComplex {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds the closure of the given simplices.
    pub fn from_simplices<I, S>(simplices: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[usize]>,
    {
        let mut k = Self::new();
        for s in simplices {
            k.add_simplex(s.as_ref());
        }
        k
    }

    /// Inserts a simplex together with all of its faces. Returns its index.
    pub fn add_simplex(&mut self, vertices: &[usize]) -> usize {
        let mut s: Simplex = vertices.to_vec();
        s.sort_unstable();
        s.dedup();
        assert!(!s.is_empty(), "empty simplex");
        self.insert_closed(s)
    }

    fn insert_closed(&mut self, s: Simplex) -> usize {
        let d = s.len() - 1;
        while self.by_dim.len() <= d {
            self.by_dim.push(Vec::new());
            self.index.push(HashMap::new());
        }
        if let Some(&i) = self.index[d].get(&s) {
            return i;
        }
        if d > 0 {
            for skip in 0..s.len() {
                let face: Simplex = s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
                self.insert_closed(face);
            }
        }
        let i = self.by_dim[d].len();
        self.index[d].insert(s.clone(), i);
        self.by_dim[d].push(s);
        i
    }

    /// Top dimension, or `None` when empty.
    pub fn dim(&self) -> Option<usize> {
        self.by_dim.iter().rposition(|v| !v.is_empty())
    }

    pub fn simplices(&self, d: usize) -> &[Simplex] {
        self.by_dim.get(d).map_or(&[], Vec::as_slice)
    }

    pub fn count(&self, d: usize) -> usize {
        self.simplices(d).len()
    }

    pub fn total(&self) -> usize {
        self.by_dim.iter().map(Vec::len).sum()
    }

    pub fn index_of(&self, s: &[usize]) -> Option<usize> {
        self.index.get(s.len().checked_sub(1)?)?.get(s).copied()
    }

    pub fn contains(&self, s: &[usize]) -> bool {
        self.index_of(s).is_some()
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.simplices(0).iter().map(|s| s[0])
    }

    /// Largest vertex id plus one.
    pub fn vertex_bound(&self) -> usize {
        self.vertices().max().map_or(0, |v| v + 1)
    }

    /// Boundary matrix `C_d -> C_{d-1}` (rows: (d-1)-simplices).
    pub fn boundary_matrix(&self, d: usize) -> IntMatrix {
        let rows = if d == 0 { 0 } else { self.count(d - 1) };
        let mut m = IntMatrix::zeros(rows, self.count(d));
        if d == 0 {
            return m;
        }
        for (j, s) in self.simplices(d).iter().enumerate() {
            for (_, sign, face) in faces(s) {
                let r = self.index_of(&face).expect("downward closed");
                m.set(r, j, sign);
            }
        }
        m
    }

    /// True when every face of every simplex of `self` is present.
    pub fn is_closed(&self) -> bool {
        self.by_dim.iter().flatten().all(|s| s.len() == 1 || faces(s).all(|(_, _, f)| self.contains(&f)))
    }

    /// Checks that `sub` is a subcomplex of `self`.
    pub fn check_subcomplex(&self, sub: &SimplicialComplex) -> Result<()> {
        if !sub.is_closed() {
            return Err(Error::NotSubcomplex("not downward closed".into()));
        }
        for s in sub.by_dim.iter().flatten() {
            if !self.contains(s) {
                return Err(Error::NotSubcomplex(format!("simplex {s:?} is not in the ambient complex")));
            }
        }
        Ok(())
    }

    /// Full subcomplex spanned by vertices satisfying `keep`.
    pub fn full_subcomplex(&self, keep: impl Fn(usize) -> bool) -> SimplicialComplex {
        let mut k = SimplicialComplex::new();
        for s in self.by_dim.iter().flatten() {
            if s.iter().all(|&v| keep(v)) {
                k.add_simplex(s);
            }
        }
        k
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.by_dim.iter().enumerate().map(|(d, v)| if d % 2 == 0 { v.len() as i64 } else { -(v.len() as i64) }).sum()
    }

    /// One sorted vertex tuple per line.
    pub fn to_simplex_list(&self, label: impl Fn(usize) -> String) -> String {
        let mut out = String::new();
        for s in self.by_dim.iter().flatten() {
            let parts: Vec<String> = s.iter().map(|&v| label(v)).collect();
            out.push_str(&parts.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the output of [`Self::to_simplex_list`] with numeric labels.
    pub fn from_simplex_list(text: &str) -> Result<SimplicialComplex> {
        let mut k = SimplicialComplex::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let vs = line
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|e| Error::Parse { line: ln + 1, msg: e.to_string() }))
                .collect::<Result<Vec<_>>>()?;
            k.add_simplex(&vs);
        }
        Ok(k)
    }
}

/// Faces of a sorted simplex: `(omitted position, sign, face)`.
pub fn faces(s: &[usize]) -> impl Iterator<Item = (usize, i64, Simplex)> + '_ {
    (0..s.len()).map(move |skip| {
        let face: Simplex = s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
        (skip, if skip % 2 == 0 { 1 } else { -1 }, face)
    })
}

/// A chain complex `... -> C_k -> C_{k-1} -> ...` given by boundary matrices.
///
/// `boundary[k]` has shape `dims[k-1] x dims[k]`; `boundary[0]` is `0 x dims[0]`.
/// Cohomology is computed from the transposes.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub dims: Vec<usize>,
    pub boundary: Vec<IntMatrix>,
    /// Basis labels per degree (simplices for simplicial complexes).
    pub basis: Vec<Vec<Simplex>>,
}

impl ChainComplex {
    pub fn of_complex(k: &SimplicialComplex) -> Self {
        let top = k.dim().map_or(0, |d| d + 1);
        let dims: Vec<usize> = (0..top).map(|d| k.count(d)).collect();
        let boundary = (0..top).map(|d| k.boundary_matrix(d)).collect();
        let basis = (0..top).map(|d| k.simplices(d).to_vec()).collect();
        ChainComplex { dims, boundary, basis }
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn dim_at(&self, k: usize) -> usize {
        self.dims.get(k).copied().unwrap_or(0)
    }

    /// `∂_k`, with zero matrices outside the stored range.
    pub fn d(&self, k: usize) -> IntMatrix {
        if k == 0 || k >= self.len() {
            let rows = if k == 0 { 0 } else { self.dim_at(k - 1) };
            IntMatrix::zeros(rows, self.dim_at(k))
        } else {
            self.boundary[k].clone()
        }
    }

    /// Checks `∂_{k} ∘ ∂_{k+1} = 0` for every k.
    pub fn is_complex(&self) -> bool {
        (1..self.len()).all(|k| self.d(k).checked_mul(&self.d(k + 1)).is_some_and(|m| m.is_zero()))
    }
}

/// Sparse coboundary `δ^k: C^k -> C^{k+1}` restricted to a set of simplices.
///
/// `rows` are (k+1)-simplex indices, `cols` k-simplex indices, both into `k`.
pub fn sparse_coboundary(k: &SimplicialComplex, deg: usize, cols: &[usize], rows: &[usize]) -> SparseMatrix {
    let mut col_pos: HashMap<usize, usize> = HashMap::with_capacity(cols.len());
    for (j, &c) in cols.iter().enumerate() {
        col_pos.insert(c, j);
    }
    let mut m = SparseMatrix::new(rows.len(), cols.len());
    for (i, &r) in rows.iter().enumerate() {
        let s = &k.simplices(deg + 1)[r];
        for (_, sign, face) in faces(s) {
            let fi = k.index_of(&face).expect("downward closed");
            if let Some(&j) = col_pos.get(&fi) {
                m.add(i, j, sign);
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_and_boundary() {
        let k = SimplicialComplex::from_simplices([[0, 1, 2]]);
        assert_eq!((k.count(0), k.count(1), k.count(2)), (3, 3, 1));
        let c = ChainComplex::of_complex(&k);
        assert!(c.is_complex());
        assert_eq!(k.euler_characteristic(), 1);
    }

    #[test]
    fn simplex_list_round_trip() {
        let k = SimplicialComplex::from_simplices([vec![0, 1, 2], vec![2, 3]]);
        let text = k.to_simplex_list(|v| v.to_string());
        assert_eq!(SimplicialComplex::from_simplex_list(&text).unwrap(), k);
    }

    #[test]
    fn subcomplex_check() {
        let k = SimplicialComplex::from_simplices([[0, 1, 2]]);
        let f = SimplicialComplex::from_simplices([[0, 1]]);
        assert!(k.check_subcomplex(&f).is_ok());
        let g = SimplicialComplex::from_simplices([[0, 3]]);
        assert!(k.check_subcomplex(&g).is_err());
    }
}
