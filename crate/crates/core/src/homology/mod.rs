//! Exact integer (co)homology of finite complexes and pairs.

pub mod groups;
pub mod matrix;
pub mod simplicial;
pub mod snf;
pub mod sparse;

use std::collections::HashMap;

use num_bigint::BigInt;

pub use groups::{AbelianGroup, InducedMap, Subquotient};
pub use matrix::{IntMatrix, Matrix, Scalar};
pub use simplicial::{ChainComplex, Simplex, SimplicialComplex};
pub use snf::{smith_normal_form, SmithForm};
pub use sparse::{eliminate, Elimination, SparseMatrix};

use crate::error::Result;

fn group_from_ranks(dim: usize, rank_a: &Elimination, rank_b: &Elimination, torsion: &[BigInt]) -> Result<AbelianGroup> {
    AbelianGroup::from_divisors(dim - rank_a.rank - rank_b.rank, torsion)
}

/// `H_k` of a chain complex.
pub fn homology(c: &ChainComplex, k: usize) -> Result<AbelianGroup> {
    let dk = eliminate(&SparseMatrix::from_dense(&c.d(k)))?;
    let dk1 = eliminate(&SparseMatrix::from_dense(&c.d(k + 1)))?;
    group_from_ranks(c.dim_at(k), &dk, &dk1, &dk1.torsion)
}

/// `H^k` of the dual cochain complex (transposed boundaries).
pub fn cohomology(c: &ChainComplex, k: usize) -> Result<AbelianGroup> {
    let dk = eliminate(&SparseMatrix::from_dense(&c.d(k)))?;
    let dk1 = eliminate(&SparseMatrix::from_dense(&c.d(k + 1)))?;
    group_from_ranks(c.dim_at(k), &dk, &dk1, &dk.torsion)
}

/// `H_k` with explicit cycle representatives.
pub fn homology_subquotient(c: &ChainComplex, k: usize) -> Result<Subquotient> {
    Subquotient::compute(&c.d(k + 1), &c.d(k))
}

/// `H^k` with explicit cocycle representatives.
pub fn cohomology_subquotient(c: &ChainComplex, k: usize) -> Result<Subquotient> {
    Subquotient::compute(&c.d(k).transpose(), &c.d(k + 1).transpose())
}

/// Relative complex of the pair `(X, F)`: basis the simplices of `X` not in `F`.
///
/// Stored as the relative chain complex; [`cohomology`] of the result is
/// `H^k(X, F)`, the compactly supported cohomology of `X \ F`.
pub fn relative_cochain_complex(x: &SimplicialComplex, f: &SimplicialComplex) -> Result<ChainComplex> {
    x.check_subcomplex(f)?;
    let top = x.dim().map_or(0, |d| d + 1);
    let basis: Vec<Vec<Simplex>> =
        (0..top).map(|d| x.simplices(d).iter().filter(|s| !f.contains(s)).cloned().collect()).collect();
    let pos: Vec<HashMap<&Simplex, usize>> =
        basis.iter().map(|b| b.iter().enumerate().map(|(i, s)| (s, i)).collect()).collect();
    let mut boundary = Vec::with_capacity(top);
    for d in 0..top {
        let rows = if d == 0 { 0 } else { basis[d - 1].len() };
        let mut m = IntMatrix::zeros(rows, basis[d].len());
        if d > 0 {
            for (j, s) in basis[d].iter().enumerate() {
                for (_, sign, face) in simplicial::faces(s) {
                    if let Some(&i) = pos[d - 1].get(&face) {
                        m.set(i, j, sign);
                    }
                }
            }
        }
        boundary.push(m);
    }
    let dims = basis.iter().map(Vec::len).collect();
    Ok(ChainComplex { dims, boundary, basis })
}

/// Map `H^k(X, F) -> H^k(X, F')` induced by `C^*(X, F) ⊆ C^*(X, F')`, `F' ⊆ F`.
pub fn induced_map(x: &SimplicialComplex, f: &SimplicialComplex, f_prime: &SimplicialComplex, k: usize) -> Result<InducedMap> {
    f.check_subcomplex(f_prime)?;
    let src = relative_cochain_complex(x, f)?;
    let tgt = relative_cochain_complex(x, f_prime)?;
    let a = cohomology_subquotient(&src, k)?;
    let b = cohomology_subquotient(&tgt, k)?;
    Ok(extension_by_zero(&src, &tgt, k, &a, &b))
}

/// Extension by zero between relative complexes sharing an ambient complex.
pub(crate) fn extension_by_zero(src: &ChainComplex, tgt: &ChainComplex, k: usize, a: &Subquotient, b: &Subquotient) -> InducedMap {
    let empty = Vec::new();
    let tb = tgt.basis.get(k).unwrap_or(&empty);
    let index: HashMap<&Simplex, usize> = tb.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let targets: Vec<usize> = src.basis.get(k).unwrap_or(&empty).iter().map(|s| index[s]).collect();
    InducedMap::from_chain_map(a, b, |c| {
        let mut out = vec![BigInt::from(0); tb.len()];
        for (v, &t) in c.iter().zip(&targets) {
            out[t] = v.clone();
        }
        out
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hollow_triangle() -> SimplicialComplex {
        SimplicialComplex::from_simplices([[0, 1], [1, 2], [0, 2]])
    }

    fn rp2() -> SimplicialComplex {
        SimplicialComplex::from_simplices([
            [0, 1, 2],
            [0, 2, 3],
            [0, 3, 4],
            [0, 4, 5],
            [0, 1, 5],
            [1, 2, 4],
            [2, 3, 5],
            [1, 3, 4],
            [1, 3, 5],
            [2, 4, 5],
        ])
    }

    #[test]
    fn circle_and_sphere() {
        let c = ChainComplex::of_complex(&hollow_triangle());
        assert_eq!(homology(&c, 0).unwrap(), AbelianGroup::free(1));
        assert_eq!(homology(&c, 1).unwrap(), AbelianGroup::free(1));
        let s2 = SimplicialComplex::from_simplices([[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]);
        let c = ChainComplex::of_complex(&s2);
        assert_eq!(homology(&c, 2).unwrap(), AbelianGroup::free(1));
        assert_eq!(homology(&c, 1).unwrap(), AbelianGroup::trivial());
    }

    #[test]
    fn projective_plane() {
        let k = rp2();
        assert_eq!(k.euler_characteristic(), 1);
        let c = ChainComplex::of_complex(&k);
        assert_eq!(homology(&c, 1).unwrap(), AbelianGroup { rank: 0, torsion: vec![2] });
        assert_eq!(homology(&c, 2).unwrap(), AbelianGroup::trivial());
        assert_eq!(cohomology(&c, 2).unwrap(), AbelianGroup { rank: 0, torsion: vec![2] });
        assert_eq!(cohomology(&c, 1).unwrap(), AbelianGroup::trivial());
        assert_eq!(homology_subquotient(&c, 1).unwrap().group, homology(&c, 1).unwrap());
        assert_eq!(cohomology_subquotient(&c, 2).unwrap().group, cohomology(&c, 2).unwrap());
    }

    #[test]
    fn relative_examples() {
        let x = hollow_triangle();
        let rel = relative_cochain_complex(&x, &x).unwrap();
        assert!((0..3).all(|k| cohomology(&rel, k).unwrap().is_trivial()));

        let edge = SimplicialComplex::from_simplices([[0, 1]]);
        let pt = SimplicialComplex::from_simplices([[0]]);
        let rel = relative_cochain_complex(&edge, &pt).unwrap();
        assert_eq!(rel.dims, vec![1, 1]);
        assert!(cohomology(&rel, 0).unwrap().is_trivial());
        assert!(cohomology(&rel, 1).unwrap().is_trivial());

        let rel = relative_cochain_complex(&x, &pt).unwrap();
        assert_eq!(cohomology(&rel, 1).unwrap(), AbelianGroup::free(1));

        let bad = SimplicialComplex::from_simplices([[0, 7]]);
        assert!(relative_cochain_complex(&x, &bad).is_err());
    }

    #[test]
    fn induced_examples() {
        let x = hollow_triangle();
        let pt = SimplicialComplex::from_simplices([[0]]);
        let empty = SimplicialComplex::new();
        let id = induced_map(&x, &pt, &pt, 1).unwrap();
        assert_eq!(id, InducedMap::identity(&AbelianGroup::free(1)));
        let m = induced_map(&x, &pt, &empty, 1).unwrap();
        assert_eq!(m.matrix.get(0, 0).magnitude(), &1u32.into());

        let seg = SimplicialComplex::from_simplices([[0, 1], [1, 2], [2, 3], [3, 4]]);
        let ends = SimplicialComplex::from_simplices([[0], [4]]);
        let m = induced_map(&seg, &ends, &empty, 1).unwrap();
        assert_eq!(m.source, AbelianGroup::free(1));
        assert_eq!(m.target, AbelianGroup::trivial());
    }

    #[test]
    fn composition_of_inclusions() {
        let seg = SimplicialComplex::from_simplices([[0, 1], [1, 2], [2, 3], [3, 4], [0, 4]]);
        let big = SimplicialComplex::from_simplices([vec![0], vec![2], vec![3]]);
        let mid = SimplicialComplex::from_simplices([vec![0], vec![3]]);
        let small = SimplicialComplex::from_simplices([vec![0]]);
        for k in 0..2 {
            let ab = induced_map(&seg, &big, &mid, k).unwrap();
            let bc = induced_map(&seg, &mid, &small, k).unwrap();
            let ac = induced_map(&seg, &big, &small, k).unwrap();
            assert_eq!(ab.then(&bc), ac);
        }
    }
}
