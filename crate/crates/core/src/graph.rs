//! Finite labeled unit-edge graphs with depth annotations.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};

/// Distance value used for unreachable vertices.
pub const UNREACHABLE: u32 = u32::MAX;

/// Undirected simple graph; every vertex carries a label and a depth.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    depths: Vec<u32>,
    adj: Vec<Vec<usize>>,
    index: HashMap<String, usize>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a vertex or returns the existing one with this label.
    pub fn add_vertex(&mut self, label: impl Into<String>, depth: u32) -> usize {
        let label = label.into();
        if let Some(&i) = self.index.get(&label) {
            return i;
        }
        let i = self.labels.len();
        self.index.insert(label.clone(), i);
        self.labels.push(label);
        self.depths.push(depth);
        self.adj.push(Vec::new());
        i
    }

    /// Inserts the edge `{u, v}`; returns false for loops and duplicates.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        if u == v || self.adj[u].contains(&v) {
            return false;
        }
        self.adj[u].push(v);
        self.adj[v].push(u);
        true
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(&v)
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn depth(&self, v: usize) -> u32 {
        self.depths[v]
    }

    pub fn find(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<(usize, usize)> =
            self.adj.iter().enumerate().flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v))).collect();
        e.sort_unstable();
        e
    }

    /// BFS distances from `src`; [`UNREACHABLE`] elsewhere.
    pub fn bfs(&self, src: usize) -> Vec<u32> {
        self.bfs_multi(&[src])
    }

    pub fn bfs_multi(&self, sources: &[usize]) -> Vec<u32> {
        let mut dist = vec![UNREACHABLE; self.len()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s] != 0 {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if dist[v] == UNREACHABLE {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Component id per vertex, restricted to vertices where `keep` holds
    /// (`usize::MAX` for the others). Returns the ids and the component count.
    pub fn components_where(&self, keep: impl Fn(usize) -> bool) -> (Vec<usize>, usize) {
        let mut comp = vec![usize::MAX; self.len()];
        let mut count = 0;
        for s in 0..self.len() {
            if comp[s] != usize::MAX || !keep(s) {
                continue;
            }
            comp[s] = count;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &v in &self.adj[u] {
                    if comp[v] == usize::MAX && keep(v) {
                        comp[v] = count;
                        stack.push(v);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    pub fn is_connected(&self) -> bool {
        self.components_where(|_| true).1 <= 1
    }

    /// Induced subgraph on vertices where `keep` holds, with the old ids.
    pub fn induced(&self, keep: impl Fn(usize) -> bool) -> (Graph, Vec<usize>) {
        let mut g = Graph::new();
        let mut old = Vec::new();
        let mut new_id = vec![usize::MAX; self.len()];
        for v in 0..self.len() {
            if keep(v) {
                new_id[v] = g.add_vertex(self.labels[v].clone(), self.depths[v]);
                old.push(v);
            }
        }
        for (u, v) in self.edges() {
            if new_id[u] != usize::MAX && new_id[v] != usize::MAX {
                g.add_edge(new_id[u], new_id[v]);
            }
        }
        (g, old)
    }

    /// Vertex table (`v id depth label`) followed by sorted edges (`e u v`).
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (i, l) in self.labels.iter().enumerate() {
            out.push_str(&format!("v {i} {} {l}\n", self.depths[i]));
        }
        for (u, v) in self.edges() {
            out.push_str(&format!("e {u} {v}\n"));
        }
        out
    }

    pub fn from_edge_list(text: &str) -> Result<Graph> {
        let mut g = Graph::new();
        let mut ids: HashMap<usize, usize> = HashMap::new();
        for (ln, line) in text.lines().enumerate() {
            let err = |msg: &str| Error::Parse { line: ln + 1, msg: msg.to_string() };
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.splitn(4, ' ');
            match parts.next() {
                Some("v") => {
                    let id: usize = parts.next().and_then(|x| x.parse().ok()).ok_or_else(|| err("bad vertex id"))?;
                    let depth: u32 = parts.next().and_then(|x| x.parse().ok()).ok_or_else(|| err("bad depth"))?;
                    let label = parts.next().ok_or_else(|| err("missing label"))?;
                    if g.find(label).is_some() {
                        return Err(err("duplicate label"));
                    }
                    ids.insert(id, g.add_vertex(label, depth));
                }
                Some("e") => {
                    let mut end = || -> Result<usize> {
                        let raw: usize = parts.next().and_then(|x| x.parse().ok()).ok_or_else(|| err("bad edge endpoint"))?;
                        ids.get(&raw).copied().ok_or_else(|| err("unknown vertex"))
                    };
                    let (u, v) = (end()?, end()?);
                    g.add_edge(u, v);
                }
                _ => return Err(err("expected a 'v' or 'e' record")),
            }
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        let mut g = Graph::new();
        for i in 0..n {
            g.add_vertex(format!("p{i}"), 0);
        }
        for i in 1..n {
            g.add_edge(i - 1, i);
        }
        g
    }

    #[test]
    fn bfs_and_components() {
        let g = path(5);
        assert_eq!(g.bfs(0), vec![0, 1, 2, 3, 4]);
        let (_, c) = g.components_where(|v| v != 2);
        assert_eq!(c, 2);
        assert!(g.is_connected());
    }

    #[test]
    fn edge_list_round_trip() {
        let mut g = path(4);
        let x = g.add_vertex("deep one", 3);
        g.add_edge(x, 0);
        let h = Graph::from_edge_list(&g.to_edge_list()).unwrap();
        assert_eq!(h.to_edge_list(), g.to_edge_list());
        assert!(Graph::from_edge_list("x 1 2").is_err());
    }
}
