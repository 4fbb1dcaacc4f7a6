//! Finite balls in Cayley graphs.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::Graph;

use super::spec::GroupSpec;
use super::word::Word;

/// Default vertex cap for ball enumeration.
pub const DEFAULT_VERTEX_CAP: usize = 2_000_000;

/// Induced subgraph of the Cayley graph on elements of length at most `radius`.
#[derive(Clone, Debug)]
pub struct CayleyBall {
    pub radius: usize,
    pub graph: Graph,
    /// Normal form of each vertex.
    pub words: Vec<Word>,
    index: HashMap<Word, usize>,
}

impl CayleyBall {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Vertex id of an element given in normal form.
    pub fn vertex(&self, nf: &Word) -> Option<usize> {
        self.index.get(nf).copied()
    }

    pub fn identity(&self) -> usize {
        0
    }

    /// Word length of a vertex.
    pub fn norm(&self, v: usize) -> usize {
        self.words[v].len()
    }
}

/// Enumerates the ball of the given radius breadth first.
pub fn cayley_ball(spec: &GroupSpec, radius: usize) -> Result<CayleyBall> {
    cayley_ball_capped(spec, radius, DEFAULT_VERTEX_CAP)
}

pub fn cayley_ball_capped(spec: &GroupSpec, radius: usize, cap: usize) -> Result<CayleyBall> {
    let letters = spec.letters();
    let mut graph = Graph::new();
    let mut words = vec![Word::identity()];
    let mut index = HashMap::from([(Word::identity(), 0usize)]);
    graph.add_vertex(spec.render(&Word::identity()), 0);
    let mut frontier = vec![0usize];
    for _ in 0..radius {
        let mut next = Vec::new();
        for &v in &frontier {
            for &l in &letters {
                let w = spec.multiply(&words[v], &Word(vec![l]))?;
                if index.contains_key(&w) || w.len() < words[v].len() {
                    continue;
                }
                if words.len() >= cap {
                    return Err(Error::Resource { what: "Cayley ball vertices".into(), count: words.len() + 1, cap });
                }
                let id = graph.add_vertex(spec.render(&w), 0);
                debug_assert_eq!(id, words.len());
                index.insert(w.clone(), id);
                words.push(w);
                next.push(id);
            }
        }
        frontier = next;
    }
    // induced edges, including those between vertices on the outer sphere
    for v in 0..words.len() {
        for &l in &letters {
            if l.inv {
                continue;
            }
            let w = spec.multiply(&words[v], &Word(vec![l]))?;
            if let Some(&u) = index.get(&w) {
                graph.add_edge(v, u);
            }
        }
    }
    Ok(CayleyBall { radius, graph, words, index })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_balls() {
        let z = GroupSpec::free(1);
        let b = cayley_ball(&z, 2).unwrap();
        assert_eq!(b.len(), 5);
        assert_eq!(b.graph.edge_count(), 4);
        let f2 = GroupSpec::free(2);
        let b = cayley_ball(&f2, 1).unwrap();
        assert_eq!((b.len(), b.graph.edge_count()), (5, 4));
        assert_eq!(b.graph.neighbors(0).len(), 4);
        let z2 = GroupSpec::free_abelian(2);
        assert_eq!(cayley_ball(&z2, 2).unwrap().len(), 13);
    }

    #[test]
    fn growth_formulas() {
        let f2 = GroupSpec::free(2);
        let z = GroupSpec::free(1);
        for r in 0..=6usize {
            assert_eq!(cayley_ball(&f2, r).unwrap().len(), 2 * 3usize.pow(r as u32) - 1);
            assert_eq!(cayley_ball(&z, r).unwrap().len(), 2 * r + 1);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let f2 = GroupSpec::free(2);
        assert!(matches!(cayley_ball_capped(&f2, 5, 100), Err(Error::Resource { .. })));
    }

    #[test]
    fn surface_ball_is_connected() {
        let s = GroupSpec::surface(2).unwrap();
        let b = cayley_ball(&s, 2).unwrap();
        // no relations shorter than 8: the 2-ball of a genus-2 surface group is a tree ball
        assert_eq!(b.len(), 1 + 8 + 8 * 7);
        assert!(b.graph.is_connected());
    }
}
