//! Ends, the boundary dimension estimate and the local homology probe.

use std::collections::BTreeSet;
use std::fmt;

use crate::cusped::ComplexTruncation;
use crate::error::{Error, Result};
use crate::homology::{eliminate, simplicial::faces, AbelianGroup, SimplicialComplex, SparseMatrix};
use crate::metric::{neighborhood_v, HalfInt, Metric};
use crate::rips::rips_complex;

use super::pro::{Classification, ProVerdict};

/// Components of `{level >= n}` that reach the truncation boundary.
///
/// Needs `n` at most the safe radius, where every such component of the
/// ideal complement is seen exactly once.
pub fn count_ends(x: &ComplexTruncation, n: u32) -> Result<usize> {
    let safe = x.safe_radius();
    if n > safe {
        return Err(Error::Guard { requested: n, safe });
    }
    let levels = x.levels();
    let g = x.skeleton();
    let (comp, count) = g.components_where(|v| levels[v] >= n);
    let reaching: BTreeSet<usize> = (0..g.len()).filter(|&v| levels[v] >= n && !x.interior[v]).map(|v| comp[v]).collect();
    debug_assert!(reaching.len() <= count);
    Ok(reaching.len())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EndsVerdict {
    /// The count settled at this value over the last three radii.
    Ends(usize),
    Growing,
    Inconclusive,
}

impl fmt::Display for EndsVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EndsVerdict::Ends(1) => write!(f, "1 end"),
            EndsVerdict::Ends(k) => write!(f, "{k} ends"),
            EndsVerdict::Growing => write!(f, "growing"),
            EndsVerdict::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

pub fn ends_verdict(counts: &[usize]) -> EndsVerdict {
    if counts.len() < 3 {
        return EndsVerdict::Inconclusive;
    }
    let tail = &counts[counts.len() - 3..];
    if tail.iter().all(|&c| c == tail[0]) {
        EndsVerdict::Ends(tail[0])
    } else if counts.windows(2).all(|w| w[0] < w[1]) {
        EndsVerdict::Growing
    } else {
        EndsVerdict::Inconclusive
    }
}

/// Boundary dimension read off the top nonvanishing degree.
///
/// Always conditional: the identity used assumes the group's own
/// cohomological dimension is below that of the pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimEstimate {
    /// `-1` for an empty boundary.
    pub value: i64,
    pub top_degree: Option<usize>,
    pub conditional: bool,
}

pub fn boundary_dim_estimate(verdicts: &[(usize, ProVerdict)]) -> Result<DimEstimate> {
    let mut sorted: Vec<&(usize, ProVerdict)> = verdicts.iter().collect();
    sorted.sort_by_key(|(d, _)| std::cmp::Reverse(*d));
    for (deg, v) in sorted {
        match &v.classification {
            Classification::ProTrivial => continue,
            Classification::Inconclusive(why) => {
                return Err(Error::Input(format!("degree {deg} is inconclusive ({why}); no estimate")));
            }
            _ => return Ok(DimEstimate { value: *deg as i64 - 1, top_degree: Some(*deg), conditional: true }),
        }
    }
    Ok(DimEstimate { value: -1, top_degree: None, conditional: true })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalHomologyReport {
    pub n_outer: u32,
    pub n_inner: u32,
    pub d: u32,
    /// `2 n_outer + C + 4 delta`.
    pub threshold: HalfInt,
    pub compliant: bool,
    pub inner_points: usize,
    pub outer_points: usize,
    /// Reduced `H_0` ranks (inner, outer).
    pub reduced_h0: (usize, usize),
    /// `H_1` (inner, outer), free ranks only.
    pub h1: (usize, usize),
    pub h0_map_zero: bool,
    pub h1_map_zero: bool,
}

impl LocalHomologyReport {
    pub fn vanishes(&self) -> bool {
        self.h0_map_zero && self.h1_map_zero
    }
}

fn sparse_boundary(k: &SimplicialComplex, deg: usize, rows: &[usize]) -> SparseMatrix {
    // rows: (deg-1)-simplex indices to keep, in order; columns: all deg-simplices
    let n_cols = if k.dim().is_some_and(|d| d >= deg) { k.count(deg) } else { 0 };
    let pos: std::collections::HashMap<usize, usize> = rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let mut m = SparseMatrix::new(rows.len(), n_cols);
    for j in 0..n_cols {
        for (_, sign, face) in faces(&k.simplices(deg)[j]) {
            if let Some(&i) = pos.get(&k.index_of(&face).expect("downward closed")) {
                m.add(i, j, sign);
            }
        }
    }
    m
}

fn h1_rank(k: &SimplicialComplex) -> Result<usize> {
    let n1 = if k.dim().is_some_and(|d| d >= 1) { k.count(1) } else { 0 };
    let all0: Vec<usize> = (0..k.count(0)).collect();
    let all1: Vec<usize> = (0..n1).collect();
    let d1 = eliminate(&sparse_boundary(k, 1, &all0))?.rank;
    let d2 = eliminate(&sparse_boundary(k, 2, &all1))?.rank;
    Ok(n1 - d1 - d2)
}

/// Induced maps on reduced `H_0` and `H_1` of the Rips complexes spanned by
/// `V(z, n_inner) ⊆ V(z, n_outer)`.
///
/// `H_1` is compared over the rationals: the map vanishes iff every cycle
/// of the inner complex bounds rationally in the outer one.
#[allow(clippy::too_many_arguments)]
pub fn local_homology_probe(
    metric: &Metric,
    target: usize,
    basepoint: usize,
    n_outer: u32,
    n_inner: u32,
    d: u32,
    c: u32,
    delta: HalfInt,
    max_simplices: usize,
) -> Result<LocalHomologyReport> {
    if n_inner < n_outer {
        return Err(Error::Input("the inner threshold must be at least the outer one".into()));
    }
    let outer = neighborhood_v(metric, target, basepoint, n_outer)?;
    let inner = neighborhood_v(metric, target, basepoint, n_inner)?;
    if inner.is_empty() {
        return Err(Error::Input(format!("V(z, {n_inner}) is empty; probe inconclusive")));
    }
    let rips = rips_complex(metric, &outer, d, 2, max_simplices)?;
    let inner_local: BTreeSet<usize> = inner.iter().map(|&v| rips.local(v).expect("nested neighbourhoods")).collect();
    let small = rips.complex.full_subcomplex(|v| inner_local.contains(&v));
    let big = &rips.complex;

    let g = {
        let mut g = crate::graph::Graph::new();
        for v in 0..rips.points.len() {
            g.add_vertex(v.to_string(), 0);
        }
        for e in big.simplices(1) {
            g.add_edge(e[0], e[1]);
        }
        g
    };
    let (comp_big, n_big) = g.components_where(|_| true);
    let (_, n_small) = g.components_where(|v| inner_local.contains(&v));
    let hit: BTreeSet<usize> = inner_local.iter().map(|&v| comp_big[v]).collect();
    let h0_map_zero = hit.len() == 1;

    // rank of H_1(small) -> H_1(big) = dim Z_small - dim(Z_small ∩ B_big)
    let z_small = {
        let n1 = if small.dim().is_some_and(|d| d >= 1) { small.count(1) } else { 0 };
        let all0: Vec<usize> = (0..small.count(0)).collect();
        n1 - eliminate(&sparse_boundary(&small, 1, &all0))?.rank
    };
    let h1_map_zero = if z_small == 0 {
        true
    } else {
        let n1 = big.count(1);
        let all1: Vec<usize> = (0..n1).collect();
        let d2 = sparse_boundary(big, 2, &all1);
        let rank_d2 = eliminate(&d2)?.rank;
        let outside: Vec<usize> = (0..n1).filter(|&e| !big.simplices(1)[e].iter().all(|v| inner_local.contains(v))).collect();
        let leaking = eliminate(&d2.select_rows(&outside))?.rank;
        z_small == rank_d2 - leaking
    };
    let threshold = HalfInt::from_int(2 * n_outer as i64 + c as i64) + HalfInt(4 * delta.0);
    Ok(LocalHomologyReport {
        n_outer,
        n_inner,
        d,
        threshold,
        compliant: HalfInt::from_int(n_inner as i64) >= threshold,
        inner_points: inner.len(),
        outer_points: outer.len(),
        reduced_h0: (n_small - 1, n_big - 1),
        h1: (h1_rank(&small)?, h1_rank(big)?),
        h0_map_zero,
        h1_map_zero,
    })
}

/// Reduced homology group of a graph-like complex in degree 0, for reports.
pub fn reduced_h0(components: usize) -> AbelianGroup {
    AbelianGroup::free(components.saturating_sub(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cusped::{build_cusped_graph, cayley_complex};
    use crate::group::{GroupSpec, PeripheralSpec};
    use crate::metric::BoundaryProxy;

    #[test]
    fn ends_of_small_groups() {
        let z = cayley_complex(&GroupSpec::free(1), 6).unwrap();
        let z2 = cayley_complex(&GroupSpec::free_abelian(2), 6).unwrap();
        let f2 = cayley_complex(&GroupSpec::free(2), 6).unwrap();
        let counts = |x: &ComplexTruncation| (1..=5).map(|n| count_ends(x, n).unwrap()).collect::<Vec<_>>();
        assert_eq!(counts(&z), vec![2; 5]);
        assert_eq!(counts(&z2), vec![1; 5]);
        let f = counts(&f2);
        assert_eq!(f, (1..=5u32).map(|n| 4 * 3usize.pow(n - 1)).collect::<Vec<_>>());
        assert_eq!(ends_verdict(&counts(&z)), EndsVerdict::Ends(2));
        assert_eq!(ends_verdict(&f), EndsVerdict::Growing);
        assert!(count_ends(&z, 7).is_err());
    }

    fn verdict(c: Classification) -> ProVerdict {
        ProVerdict { classification: c, stage_ranks: vec![], window_images: vec![], window: 3 }
    }

    #[test]
    fn dimension_estimates() {
        let line = [(0, verdict(Classification::ProTrivial)), (1, verdict(Classification::Stable { rank: 1, torsion: vec![] }))];
        assert_eq!(boundary_dim_estimate(&line).unwrap().value, 0);
        let surface = [
            (0, verdict(Classification::ProTrivial)),
            (1, verdict(Classification::ProTrivial)),
            (2, verdict(Classification::Stable { rank: 1, torsion: vec![] })),
        ];
        assert_eq!(boundary_dim_estimate(&surface).unwrap().value, 1);
        let bad = [(0, verdict(Classification::ProTrivial)), (1, verdict(Classification::Inconclusive("x".into())))];
        assert!(boundary_dim_estimate(&bad).is_err());
    }

    #[test]
    fn line_probe_vanishes() {
        let z = GroupSpec::free(1);
        let g = build_cusped_graph(&z, &PeripheralSpec::empty(), 12, 0).unwrap();
        let m = Metric::new(&g.graph);
        let t = BoundaryProxy::conical(&g, z.parse_word("a").unwrap()).target(&g, &z).unwrap();
        let r = local_homology_probe(&m, t, g.basepoint, 2, 4, 2, 0, HalfInt::ZERO, 100_000).unwrap();
        assert!(r.compliant);
        assert!(r.vanishes());
        assert_eq!(r.reduced_h0, (0, 0));
    }
}
