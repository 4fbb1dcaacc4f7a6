//! Truncated simplicial cusped complexes and other finite models of
//! locally finite complexes.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::graph::{Graph, UNREACHABLE};
use crate::group::{cayley_ball, CayleyBall, GroupKind, GroupSpec, PeripheralModel, PeripheralSpec, Word};
use crate::homology::SimplicialComplex;

use super::graph::DepthMode;

/// A finite piece of a locally finite complex.
///
/// `interior[v]` means the full star of `v` in the ideal complex is present.
/// Exhaustion levels are BFS distances from the basepoint unless explicit
/// heights are supplied.
#[derive(Clone, Debug)]
pub struct ComplexTruncation {
    pub complex: SimplicialComplex,
    pub labels: Vec<String>,
    pub depth: Vec<u32>,
    pub interior: Vec<bool>,
    pub basepoint: usize,
    pub heights: Option<Vec<u32>>,
}

impl ComplexTruncation {
    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    /// 1-skeleton as a graph.
    pub fn skeleton(&self) -> Graph {
        let mut g = Graph::new();
        for (i, l) in self.labels.iter().enumerate() {
            g.add_vertex(l.clone(), self.depth[i]);
        }
        for e in self.complex.simplices(1) {
            g.add_edge(e[0], e[1]);
        }
        g
    }

    /// Exhaustion level of every vertex.
    pub fn levels(&self) -> Vec<u32> {
        match &self.heights {
            Some(h) => h.clone(),
            None => self.skeleton().bfs(self.basepoint),
        }
    }

    /// Largest `n` such that every vertex of level `< n` is interior.
    pub fn safe_radius(&self) -> u32 {
        let levels = self.levels();
        (0..self.vertex_count()).filter(|&v| !self.interior[v]).map(|v| levels[v]).min().unwrap_or(UNREACHABLE)
    }

    pub fn truncate_by_depth(&self, j: u32, mode: DepthMode) -> SimplicialComplex {
        self.complex.full_subcomplex(|v| mode.holds(self.depth[v], j))
    }

    /// Sorted simplex tuples using vertex labels.
    pub fn to_simplex_list(&self) -> String {
        let mut out = String::new();
        for (i, l) in self.labels.iter().enumerate() {
            out.push_str(&format!("# {i} {} {l}\n", self.depth[i]));
        }
        out.push_str(&self.complex.to_simplex_list(|v| v.to_string()));
        out
    }

    /// 1-dimensional complex of a graph.
    pub fn from_graph(g: &Graph, interior: Vec<bool>, basepoint: usize) -> Self {
        let mut complex = SimplicialComplex::new();
        for v in 0..g.len() {
            complex.add_simplex(&[v]);
        }
        for (u, v) in g.edges() {
            complex.add_simplex(&[u, v]);
        }
        ComplexTruncation {
            complex,
            labels: (0..g.len()).map(|v| g.label(v).to_string()).collect(),
            depth: (0..g.len()).map(|v| g.depth(v)).collect(),
            interior,
            basepoint,
            heights: None,
        }
    }
}

/// Cayley ball as a 1-complex; vertices on the outer sphere are not interior.
pub fn cayley_complex(spec: &GroupSpec, r: usize) -> Result<ComplexTruncation> {
    let ball = cayley_ball(spec, r)?;
    let interior = (0..ball.len()).map(|v| ball.norm(v) < r).collect();
    Ok(ComplexTruncation::from_graph(&ball.graph, interior, ball.identity()))
}

/// Ray `0 - 1 - ... - len` based at 0.
pub fn ray_complex(len: usize) -> ComplexTruncation {
    let mut g = Graph::new();
    for i in 0..=len {
        g.add_vertex(i.to_string(), 0);
    }
    for i in 1..=len {
        g.add_edge(i - 1, i);
    }
    let interior = (0..=len).map(|i| i < len).collect();
    ComplexTruncation::from_graph(&g, interior, 0)
}

/// `K x [0, t]` with the standard prism triangulation, exhausted by height.
///
/// Vertex `(v, s)` has id `s * n + v`; the prism over a simplex
/// `v_0 < ... < v_k` is split into the simplices
/// `(v_0,s) .. (v_i,s) (v_i,s+1) .. (v_k,s+1)`.
pub fn prism_cylinder(k: &SimplicialComplex, t: u32) -> ComplexTruncation {
    let n = k.vertex_bound();
    let id = |v: usize, s: u32| s as usize * n + v;
    let mut complex = SimplicialComplex::new();
    for s in 0..=t {
        for v in k.vertices() {
            complex.add_simplex(&[id(v, s)]);
        }
    }
    let top = k.dim().unwrap_or(0);
    for d in 0..=top {
        for simplex in k.simplices(d) {
            for s in 0..t {
                for i in 0..simplex.len() {
                    let mut cell: Vec<usize> = simplex[..=i].iter().map(|&v| id(v, s)).collect();
                    cell.extend(simplex[i..].iter().map(|&v| id(v, s + 1)));
                    complex.add_simplex(&cell);
                }
            }
        }
    }
    let total = n * (t as usize + 1);
    let present: BTreeSet<usize> = k.vertices().collect();
    let mut labels = Vec::with_capacity(total);
    let mut heights = Vec::with_capacity(total);
    let mut interior = Vec::with_capacity(total);
    for s in 0..=t {
        for v in 0..n {
            labels.push(if present.contains(&v) { format!("{v}@{s}") } else { format!("unused{v}@{s}") });
            heights.push(s);
            interior.push(s < t);
        }
    }
    ComplexTruncation { complex, labels, depth: vec![0; total], interior, basepoint: 0, heights: Some(heights) }
}

/// One strip of a cusped complex.
#[derive(Clone, Debug)]
pub struct Strip {
    pub peripheral: usize,
    pub key: Word,
    /// Tree vertex ids along the coset line, in the direction of the generator.
    pub path: Vec<usize>,
}

/// Truncated cusped complex of a free group relative to cyclic subgroups.
#[derive(Clone, Debug)]
pub struct CuspedComplex {
    pub truncation: ComplexTruncation,
    pub radius: usize,
    pub depth_cap: u32,
    pub strips: Vec<Strip>,
    pub tree_vertices: usize,
}

impl CuspedComplex {
    pub fn complex(&self) -> &SimplicialComplex {
        &self.truncation.complex
    }
}

/// Tree ball of radius `r` with a triangulated strip `[0, t] x line` over the
/// line of every peripheral coset meeting the ball.
pub fn build_cusped_complex(spec: &GroupSpec, per: &PeripheralSpec, r: usize, t: u32) -> Result<CuspedComplex> {
    if !matches!(spec.kind, GroupKind::Free(_)) {
        return Err(Error::UnsupportedShape("cusped complexes need a free ambient group".into()));
    }
    let mut gens = Vec::new();
    for (i, p) in per.subgroups.iter().enumerate() {
        let model = PeripheralModel::new(spec, i, p)?;
        let u = model
            .cyclic_generator()
            .ok_or_else(|| Error::UnsupportedShape(format!("{} is not cyclic", p.name)))?;
        let l = u.letters();
        if l.first().map(|x| x.inverse()) == l.last().copied() {
            return Err(Error::UnsupportedShape(format!("generator of {} is not cyclically reduced", p.name)));
        }
        gens.push((model, u));
    }
    let ball = cayley_ball(spec, r)?;
    let mut strips = Vec::new();
    for (pi, (model, u)) in gens.iter().enumerate() {
        strips.extend(coset_lines(spec, &ball, pi, model, u)?);
    }
    let n0 = ball.len();
    let mut complex = SimplicialComplex::new();
    let mut labels: Vec<String> = ball.words.iter().map(|w| spec.render(w)).collect();
    let mut depth = vec![0u32; n0];
    let mut interior: Vec<bool> = (0..n0).map(|v| ball.norm(v) < r).collect();
    for v in 0..n0 {
        complex.add_simplex(&[v]);
    }
    for (a, b) in ball.graph.edges() {
        complex.add_simplex(&[a, b]);
    }
    for strip in &strips {
        let name = &gens[strip.peripheral].0.name;
        let key = spec.render(&strip.key);
        let len = strip.path.len();
        // grid[t][j]
        let mut grid: Vec<Vec<usize>> = vec![strip.path.clone()];
        for level in 1..=t {
            let row = strip
                .path
                .iter()
                .enumerate()
                .map(|(j, &b)| {
                    labels.push(format!("d{level}:{name}:{key}:{}", labels[b]));
                    depth.push(level);
                    interior.push(level < t && j > 0 && j + 1 < len);
                    labels.len() - 1
                })
                .collect();
            grid.push(row);
        }
        for level in 0..t as usize {
            for j in 0..len - 1 {
                let (a, b) = (grid[level][j], grid[level][j + 1]);
                let (c, d) = (grid[level + 1][j], grid[level + 1][j + 1]);
                complex.add_simplex(&[a, b, d]);
                complex.add_simplex(&[a, c, d]);
            }
        }
    }
    let truncation = ComplexTruncation { complex, labels, depth, interior, basepoint: ball.identity(), heights: None };
    Ok(CuspedComplex { truncation, radius: r, depth_cap: t, strips, tree_vertices: n0 })
}

/// Segments (with at least two vertices) of coset lines `g u^k p_i` inside the ball.
fn coset_lines(spec: &GroupSpec, ball: &CayleyBall, pi: usize, model: &PeripheralModel, u: &Word) -> Result<Vec<Strip>> {
    let l = u.len();
    let prefixes: Vec<Word> = (0..l).map(|i| Word(u.letters()[..i].to_vec())).collect();
    let at = |anchor: &Word, s: i64| -> Result<Word> {
        let k = s.div_euclid(l as i64);
        let i = s.rem_euclid(l as i64) as usize;
        spec.normal_form(&anchor.concat(&u.pow(k)).concat(&prefixes[i]))
    };
    let mut seen: HashMap<Word, ()> = HashMap::new();
    let mut out = Vec::new();
    for (v, w) in ball.words.iter().enumerate() {
        for (i, p) in prefixes.iter().enumerate() {
            let anchor = spec.normal_form(&w.concat(&p.inverse()))?;
            let key = model.coset_key(spec, &anchor)?;
            if seen.insert(key.clone(), ()).is_some() {
                continue;
            }
            let mut lo = i as i64;
            while ball.vertex(&at(&anchor, lo - 1)?).is_some() {
                lo -= 1;
            }
            let mut hi = i as i64;
            while ball.vertex(&at(&anchor, hi + 1)?).is_some() {
                hi += 1;
            }
            if hi == lo {
                continue;
            }
            let path = (lo..=hi).map(|s| Ok(ball.vertex(&at(&anchor, s)?).expect("inside the ball"))).collect::<Result<Vec<_>>>()?;
            debug_assert!(path.contains(&v));
            out.push(Strip { peripheral: pi, key, path });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_peripherals_gives_tree() {
        let f2 = GroupSpec::free(2);
        let c = build_cusped_complex(&f2, &PeripheralSpec::empty(), 3, 2).unwrap();
        assert_eq!(c.complex().count(2), 0);
        assert_eq!(c.complex().count(0), 53);
    }

    #[test]
    fn single_strip_over_a() {
        let f2 = GroupSpec::free(2);
        let per = PeripheralSpec::from_generators(&f2, &[&["a"]]).unwrap();
        let c = build_cusped_complex(&f2, &per, 1, 1).unwrap();
        assert_eq!(c.strips.len(), 1);
        assert_eq!(c.complex().count(0), 5 + 3);
        assert_eq!(c.complex().count(2), 4);
    }

    #[test]
    fn commutator_strips() {
        let f2 = GroupSpec::free(2);
        let per = PeripheralSpec::from_generators(&f2, &[&["abAB"]]).unwrap();
        let c = build_cusped_complex(&f2, &per, 4, 1).unwrap();
        let e = c.strips.iter().find(|s| s.key.is_empty()).unwrap();
        assert_eq!(e.path.len(), 9);
        let edges: usize = c.strips.iter().map(|s| s.path.len() - 1).sum();
        assert_eq!(c.complex().count(2), 2 * edges);
        let c3 = build_cusped_complex(&f2, &per, 4, 3).unwrap();
        assert_eq!(c3.complex().count(2), 2 * edges * 3);
    }

    #[test]
    fn strips_are_surfaces_away_from_the_cut() {
        // every interior edge of the punctured-torus complex lies in exactly two triangles
        let f2 = GroupSpec::free(2);
        let per = PeripheralSpec::from_generators(&f2, &[&["abAB"]]).unwrap();
        let c = build_cusped_complex(&f2, &per, 4, 4).unwrap();
        let k = c.complex();
        let mut count: HashMap<Vec<usize>, usize> = HashMap::new();
        for tri in k.simplices(2) {
            for skip in 0..3 {
                let e: Vec<usize> = (0..3).filter(|&i| i != skip).map(|i| tri[i]).collect();
                *count.entry(e).or_default() += 1;
            }
        }
        for e in k.simplices(1) {
            if e.iter().all(|&v| c.truncation.interior[v]) {
                assert_eq!(count.get(e).copied().unwrap_or(0), 2, "edge {e:?}");
            }
        }
    }

    #[test]
    fn unsupported_shapes() {
        let z2 = GroupSpec::free_abelian(2);
        let per = PeripheralSpec::from_generators(&z2, &[&["a"]]).unwrap();
        assert!(matches!(build_cusped_complex(&z2, &per, 2, 1), Err(Error::UnsupportedShape(_))));
        let f2 = GroupSpec::free(2);
        let per = PeripheralSpec::from_generators(&f2, &[&["abA"]]).unwrap();
        assert!(matches!(build_cusped_complex(&f2, &per, 2, 1), Err(Error::UnsupportedShape(_))));
    }

    #[test]
    fn prism_counts() {
        let tri = SimplicialComplex::from_simplices([[0, 1], [1, 2], [0, 2]]);
        let c = prism_cylinder(&tri, 3);
        assert_eq!(c.complex.count(0), 12);
        assert_eq!(c.complex.count(2), 3 * 2 * 3);
        assert_eq!(c.complex.euler_characteristic(), 0);
        assert_eq!(c.safe_radius(), 3);
    }

    #[test]
    fn safe_radius_of_balls() {
        let f2 = GroupSpec::free(2);
        assert_eq!(cayley_complex(&f2, 4).unwrap().safe_radius(), 4);
        assert_eq!(ray_complex(6).safe_radius(), 6);
    }
}
