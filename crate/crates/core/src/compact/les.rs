//! Exactness check for the long exact sequence of a finite pair.
//!
//! `... -> H_c^i(X \ F) -> H^i(X) -> H^i(F) -> H_c^{i+1}(X \ F) -> ...`
//! with `H_c^i(X \ F) = H^i(X, F)`.

use num_bigint::BigInt;

use crate::error::Result;
use crate::homology::groups::{lattice_contains, relation_matrix};
use crate::homology::{
    cohomology_subquotient, extension_by_zero, relative_cochain_complex, AbelianGroup, ChainComplex, InducedMap,
    SimplicialComplex,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LesSlot {
    /// For example `H^1(X)`.
    pub label: String,
    pub group: AbelianGroup,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LesReport {
    pub slots: Vec<LesSlot>,
    /// Maps between consecutive slots.
    pub maps: Vec<InducedMap>,
}

impl LesReport {
    pub fn is_exact(&self) -> bool {
        self.slots.iter().all(|s| s.exact)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.slots.iter().filter(|s| !s.exact).map(|s| s.label.as_str()).collect()
    }
}

/// Exactness at the middle of `a -f-> b -g-> c`, as lattices in `b`'s coordinates.
pub fn exact_at(f: &InducedMap, g: &InducedMap) -> bool {
    if !f.then(g).is_zero() {
        return false;
    }
    let span = f.matrix.hcat(&relation_matrix(&g.source));
    let ker = g.kernel_lattice();
    (0..ker.cols()).all(|j| lattice_contains(&span, &ker.column(j)))
}

pub fn les_check(x: &SimplicialComplex, f: &SimplicialComplex) -> Result<LesReport> {
    let rel = relative_cochain_complex(x, f)?;
    let abs = relative_cochain_complex(x, &SimplicialComplex::new())?;
    let sub = ChainComplex::of_complex(f);
    let top = x.dim().map_or(0, |d| d + 1);
    let mut groups = Vec::new();
    let mut labels = Vec::new();
    let mut maps = Vec::new();
    let zero = BigInt::from(0);
    for i in 0..=top {
        let hr = cohomology_subquotient(&rel, i)?;
        let hx = cohomology_subquotient(&abs, i)?;
        let hf = cohomology_subquotient(&sub, i)?;
        let hr_next = cohomology_subquotient(&rel, i + 1)?;
        maps.push(extension_by_zero(&rel, &abs, i, &hr, &hx));
        let f_basis = sub.basis.get(i).cloned().unwrap_or_default();
        let positions: Vec<usize> = f_basis.iter().map(|s| x.index_of(s).expect("subcomplex simplex")).collect();
        maps.push(InducedMap::from_chain_map(&hx, &hf, |c| positions.iter().map(|&p| c[p].clone()).collect()));
        // connecting map: extend by zero to X, apply δ, read off simplices outside F
        let delta = abs.d(i + 1).transpose().to_big();
        let rel_next = rel.basis.get(i + 1).cloned().unwrap_or_default();
        let next_positions: Vec<usize> = rel_next.iter().map(|s| x.index_of(s).expect("simplex of X")).collect();
        let width = abs.dim_at(i);
        maps.push(InducedMap::from_chain_map(&hf, &hr_next, |c| {
            let mut ext = vec![zero.clone(); width];
            for (v, &p) in c.iter().zip(&positions) {
                ext[p] = v.clone();
            }
            let image = delta.mul_vec(&ext).expect("BigInt product");
            next_positions.iter().map(|&p| image[p].clone()).collect()
        }));
        groups.extend([hr.group, hx.group, hf.group]);
        labels.extend([format!("H_c^{i}(U)"), format!("H^{i}(X)"), format!("H^{i}(F)")]);
    }
    // the final connecting map lands in a trivial degree
    maps.pop();
    let n = groups.len();
    let trivial = AbelianGroup::trivial();
    let slots = (0..n)
        .map(|s| {
            let incoming = if s == 0 { InducedMap::zero(&trivial, &groups[0]) } else { maps[s - 1].clone() };
            let outgoing = if s + 1 < n { maps[s].clone() } else { InducedMap::zero(&groups[s], &trivial) };
            LesSlot { label: labels[s].clone(), group: groups[s].clone(), exact: exact_at(&incoming, &outgoing) }
        })
        .collect();
    Ok(LesReport { slots, maps })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_subcomplex_gives_isomorphisms() {
        let x = SimplicialComplex::from_simplices([[0, 1, 2]]);
        let r = les_check(&x, &x).unwrap();
        assert!(r.is_exact());
        assert!(r.slots.iter().filter(|s| s.label.starts_with("H_c")).all(|s| s.group.is_trivial()));
    }

    #[test]
    fn edge_rel_endpoint() {
        let x = SimplicialComplex::from_simplices([[0, 1]]);
        let f = SimplicialComplex::from_simplices([[0]]);
        let r = les_check(&x, &f).unwrap();
        assert!(r.is_exact());
        let groups: Vec<String> = r.slots.iter().map(|s| s.group.to_string()).collect();
        assert_eq!(&groups[..4], &["0; ", "1; ", "1; ", "0; "]);
    }

    #[test]
    fn hollow_triangle_rel_vertex() {
        let x = SimplicialComplex::from_simplices([[0, 1], [1, 2], [0, 2]]);
        let f = SimplicialComplex::from_simplices([[0]]);
        let r = les_check(&x, &f).unwrap();
        assert!(r.is_exact());
        let z = AbelianGroup::free(1);
        let g: Vec<&AbelianGroup> = r.slots.iter().map(|s| &s.group).collect();
        // H_c^0(U)=0, H^0(X)=Z, H^0(F)=Z, H_c^1(U)=Z, H^1(X)=Z, H^1(F)=0
        assert_eq!(g[..6], [&AbelianGroup::trivial(), &z, &z, &z, &z, &AbelianGroup::trivial()]);
        assert!(r.maps[2].is_zero());
        assert_eq!(r.maps[3].image(), z);
    }

    #[test]
    fn projective_plane_pair_with_torsion() {
        let x = SimplicialComplex::from_simplices([
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
        ]);
        let f = SimplicialComplex::from_simplices([[0, 1], [1, 2], [0, 2]]);
        assert!(les_check(&x, &f).unwrap().is_exact());
    }
}
