#![allow(dead_code)]

use cuspcohom::homology::IntMatrix;
use cuspcohom::SimplicialComplex;
use rand::seq::SliceRandom;
use rand::Rng;

/// Closure of random triangles and edges on a few vertices, at most `cap` simplices.
pub fn random_complex(rng: &mut impl Rng, cap: usize) -> SimplicialComplex {
    let n = rng.gen_range(3..=7);
    let mut k = SimplicialComplex::new();
    for _ in 0..rng.gen_range(1..=8) {
        let mut vs: Vec<usize> = (0..n).collect();
        vs.shuffle(rng);
        let size = rng.gen_range(1..=3);
        let mut trial = k.clone();
        trial.add_simplex(&vs[..size]);
        if trial.total() <= cap {
            k = trial;
        }
    }
    k
}

/// Closure of a random subset of the maximal-ish simplices of `x`.
pub fn random_subcomplex(rng: &mut impl Rng, x: &SimplicialComplex) -> SimplicialComplex {
    let mut f = SimplicialComplex::new();
    for d in 0..=x.dim().unwrap_or(0) {
        for s in x.simplices(d) {
            if rng.gen_bool(0.3) {
                f.add_simplex(s);
            }
        }
    }
    f
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> IntMatrix {
    IntMatrix::from_rows((0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-9..=9)).collect()).collect())
}
