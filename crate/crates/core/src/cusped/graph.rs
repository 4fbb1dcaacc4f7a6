//! Combinatorial horoballs and cusped graphs.

use crate::error::{Error, Result};
use crate::graph::{Graph, UNREACHABLE};
use crate::group::{cayley_ball, peripheral_cosets, CayleyBall, CosetTrace, GroupSpec, PeripheralModel, PeripheralSpec};

/// Where a vertex sits: its depth, horoball (if any) and base vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DepthVertex {
    pub depth: u32,
    /// Index of the coset trace whose horoball contains the vertex (`None` at depth 0).
    pub coset: Option<usize>,
    /// Base vertex id (ball vertex for cusped graphs, base-graph vertex for horoballs).
    pub base: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    Cayley,
    Vertical,
    Horizontal,
}

/// Comparison used by [`CuspedGraph::truncate_by_depth`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DepthMode {
    Le,
    Lt,
    Eq,
    Ge,
    Gt,
}

impl DepthMode {
    pub fn holds(self, depth: u32, j: u32) -> bool {
        match self {
            DepthMode::Le => depth <= j,
            DepthMode::Lt => depth < j,
            DepthMode::Eq => depth == j,
            DepthMode::Ge => depth >= j,
            DepthMode::Gt => depth > j,
        }
    }
}

/// Locally finite unit-edge graph with depth labels.
#[derive(Clone, Debug)]
pub struct CuspedGraph {
    pub graph: Graph,
    pub vertices: Vec<DepthVertex>,
    pub radius: usize,
    pub depth_cap: u32,
    pub traces: Vec<CosetTrace>,
    /// Non-fatal construction notes (disconnected traces).
    pub warnings: Vec<String>,
    pub basepoint: usize,
    /// True for standalone horoballs, where depth-0 edges are horizontal.
    standalone: bool,
}

impl CuspedGraph {
    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    pub fn depth(&self, v: usize) -> u32 {
        self.vertices[v].depth
    }

    /// Classifies an edge; panics if the pair is not an edge of a known type.
    pub fn edge_kind(&self, u: usize, v: usize) -> EdgeKind {
        let (a, b) = (self.vertices[u], self.vertices[v]);
        if a.depth == 0 && b.depth == 0 && !self.standalone {
            EdgeKind::Cayley
        } else if a.base == b.base && a.depth.abs_diff(b.depth) == 1 {
            EdgeKind::Vertical
        } else if a.depth == b.depth {
            EdgeKind::Horizontal
        } else {
            panic!("edge {u}-{v} fits no edge type")
        }
    }

    /// Induced subgraph on vertices whose depth satisfies `mode` against `j`.
    pub fn truncate_by_depth(&self, j: u32, mode: DepthMode) -> Result<(Graph, Vec<usize>)> {
        if j > self.depth_cap {
            return Err(Error::Input(format!("depth {j} exceeds the cap {}", self.depth_cap)));
        }
        Ok(self.graph.induced(|v| mode.holds(self.vertices[v].depth, j)))
    }
}

fn horoball_label(base: &str, depth: u32) -> String {
    if depth == 0 {
        base.to_string()
    } else {
        format!("d{depth}:{base}")
    }
}

/// Horoball of depth `t` over a finite connected graph.
pub fn build_horoball(base: &Graph, t: u32) -> Result<CuspedGraph> {
    if base.is_empty() || !base.is_connected() {
        return Err(Error::Input("horoball base must be a nonempty connected graph".into()));
    }
    let n = base.len();
    let dist: Vec<Vec<u32>> = (0..n).map(|v| base.bfs(v)).collect();
    let mut graph = Graph::new();
    let mut vertices = Vec::new();
    for depth in 0..=t {
        for v in 0..n {
            graph.add_vertex(horoball_label(base.label(v), depth), depth);
            vertices.push(DepthVertex { depth, coset: Some(0), base: v });
        }
    }
    let id = |depth: u32, v: usize| depth as usize * n + v;
    for depth in 0..=t {
        let reach = 1u64 << depth.min(62);
        for v in 0..n {
            if depth < t {
                graph.add_edge(id(depth, v), id(depth + 1, v));
            }
            for w in v + 1..n {
                if dist[v][w] as u64 <= reach {
                    graph.add_edge(id(depth, v), id(depth, w));
                }
            }
        }
    }
    let g = CuspedGraph { graph, vertices, radius: 0, depth_cap: t, traces: Vec::new(), warnings: Vec::new(), basepoint: 0, standalone: true };
    debug_assert!(g.graph.edges().iter().all(|&(u, v)| {
        g.edge_kind(u, v);
        true
    }));
    Ok(g)
}

/// Cayley ball of radius `r` with a depth-`t` horoball glued to every coset trace.
pub fn build_cusped_graph(spec: &GroupSpec, per: &PeripheralSpec, r: usize, t: u32) -> Result<CuspedGraph> {
    let ball = cayley_ball(spec, r)?;
    build_cusped_graph_on(spec, per, &ball, t)
}

pub fn build_cusped_graph_on(spec: &GroupSpec, per: &PeripheralSpec, ball: &CayleyBall, t: u32) -> Result<CuspedGraph> {
    let traces = peripheral_cosets(spec, per, ball)?;
    let models: Vec<PeripheralModel> =
        per.subgroups.iter().enumerate().map(|(i, p)| PeripheralModel::new(spec, i, p)).collect::<Result<_>>()?;
    let mut graph = ball.graph.clone();
    let mut vertices: Vec<DepthVertex> = (0..ball.len()).map(|v| DepthVertex { depth: 0, coset: None, base: v }).collect();
    let mut warnings = Vec::new();
    for (ci, trace) in traces.iter().enumerate() {
        let model = &models[trace.peripheral];
        if !trace.connected {
            warnings.push(format!(
                "coset {} of {} is disconnected inside the ball; glued anyway",
                spec.render(&trace.key),
                model.name
            ));
        }
        let m = trace.members.len();
        let mut dist = vec![vec![0u64; m]; m];
        for i in 0..m {
            for j in i + 1..m {
                let d = model
                    .internal_distance(spec, &ball.words[trace.members[i]], &ball.words[trace.members[j]])?
                    .ok_or_else(|| Error::Input("coset trace members in different cosets".into()))?;
                dist[i][j] = d;
                dist[j][i] = d;
            }
        }
        let key = spec.render(&trace.key);
        let mut level: Vec<usize> = trace.members.clone();
        for depth in 0..=t {
            if depth > 0 {
                let next: Vec<usize> = trace
                    .members
                    .iter()
                    .map(|&b| {
                        let label = format!("d{depth}:{}:{key}:{}", model.name, graph.label(b));
                        let id = graph.add_vertex(label, depth);
                        vertices.push(DepthVertex { depth, coset: Some(ci), base: b });
                        id
                    })
                    .collect();
                for (&lo, &hi) in level.iter().zip(&next) {
                    graph.add_edge(lo, hi);
                }
                level = next;
            }
            let reach = 1u64 << depth.min(62);
            for i in 0..m {
                for j in i + 1..m {
                    if dist[i][j] <= reach {
                        graph.add_edge(level[i], level[j]);
                    }
                }
            }
        }
    }
    let g = CuspedGraph {
        graph,
        vertices,
        radius: ball.radius,
        depth_cap: t,
        traces,
        warnings,
        basepoint: ball.identity(),
        standalone: false,
    };
    debug_assert!(g.graph.edges().iter().all(|&(u, v)| {
        g.edge_kind(u, v);
        true
    }));
    Ok(g)
}

/// BFS distances in the graph from the basepoint.
pub fn distances_from_basepoint(g: &CuspedGraph) -> Vec<u32> {
    let d = g.graph.bfs(g.basepoint);
    debug_assert!(d.iter().all(|&x| x != UNREACHABLE));
    d
}
