//! Graph metrics, Gromov products, hyperbolicity estimates and boundary
//! neighbourhoods on finite graphs.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cusped::CuspedGraph;
use crate::error::{Error, Result};
use crate::graph::{Graph, UNREACHABLE};
use crate::group::{GroupSpec, Word};

/// A number of the form `k/2`, stored as `k`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(pub i64);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);

    pub fn from_int(n: i64) -> Self {
        HalfInt(2 * n)
    }

    pub fn twice(self) -> i64 {
        self.0
    }

    pub fn floor(self) -> i64 {
        self.0.div_euclid(2)
    }

    pub fn ceil(self) -> i64 {
        -(-self.0).div_euclid(2)
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl std::ops::Add for HalfInt {
    type Output = HalfInt;
    fn add(self, o: HalfInt) -> HalfInt {
        HalfInt(self.0 + o.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            let sign = if self.0 < 0 { "-" } else { "" };
            write!(f, "{sign}{}.5", self.0.unsigned_abs() / 2)
        }
    }
}

/// Shortest-path metric of a graph with cached BFS rows.
///
/// Safe to share across threads; rows are computed on demand.
pub struct Metric<'g> {
    graph: &'g Graph,
    rows: RwLock<HashMap<usize, Arc<Vec<u32>>>>,
}

impl<'g> Metric<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        Metric { graph, rows: RwLock::new(HashMap::new()) }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    /// Computes every BFS row up front, in parallel.
    pub fn warm_all(&self) {
        let missing: Vec<usize> = {
            let rows = self.rows.read().unwrap();
            (0..self.graph.len()).filter(|v| !rows.contains_key(v)).collect()
        };
        let fresh: Vec<(usize, Arc<Vec<u32>>)> =
            missing.into_par_iter().map(|v| (v, Arc::new(self.graph.bfs(v)))).collect();
        self.rows.write().unwrap().extend(fresh);
    }

    pub fn row(&self, v: usize) -> Arc<Vec<u32>> {
        if let Some(r) = self.rows.read().unwrap().get(&v) {
            return r.clone();
        }
        let r = Arc::new(self.graph.bfs(v));
        self.rows.write().unwrap().entry(v).or_insert(r).clone()
    }

    pub fn dist(&self, u: usize, v: usize) -> Result<u32> {
        match self.row(u)[v] {
            UNREACHABLE => Err(Error::Disconnected(format!(
                "{} and {} lie in different components",
                self.graph.label(u),
                self.graph.label(v)
            ))),
            d => Ok(d),
        }
    }

    /// `<x|y>_z = (d(z,x) + d(z,y) - d(x,y)) / 2`.
    pub fn gromov_product(&self, x: usize, y: usize, z: usize) -> Result<HalfInt> {
        let zx = self.dist(z, x)? as i64;
        let zy = self.dist(z, y)? as i64;
        let xy = self.dist(x, y)? as i64;
        Ok(HalfInt(zx + zy - xy))
    }

    /// The canonical geodesic between `x` and `y`, listed from `x`.
    ///
    /// The path is built from the smaller vertex id by always stepping to the
    /// neighbour with the least label, so `geodesic(y, x)` is its reverse.
    pub fn geodesic(&self, x: usize, y: usize) -> Result<Vec<usize>> {
        let (from, to) = if x <= y { (x, y) } else { (y, x) };
        let row = self.row(to);
        let mut d = self.dist(to, from)?;
        let mut path = vec![from];
        let mut cur = from;
        while d > 0 {
            cur = *self
                .graph
                .neighbors(cur)
                .iter()
                .filter(|&&w| row[w] == d - 1)
                .min_by(|&&a, &&b| self.graph.label(a).cmp(self.graph.label(b)).then(a.cmp(&b)))
                .expect("BFS layer has a predecessor");
            path.push(cur);
            d -= 1;
        }
        if x > y {
            path.reverse();
        }
        Ok(path)
    }

    pub fn dist_to_set(&self, z: usize, set: &[usize]) -> Result<u32> {
        let row = self.row(z);
        set.iter()
            .map(|&v| row[v])
            .min()
            .filter(|&d| d != UNREACHABLE)
            .ok_or_else(|| Error::Disconnected(format!("{} cannot reach the set", self.graph.label(z))))
    }

    /// Largest fibre distance in the comparison tripod of the triangle `xyz`.
    ///
    /// At each corner the two incident sides are walked in step; all integer
    /// times up to the ceiling of the corner's Gromov product are checked.
    pub fn thin_defect(&self, x: usize, y: usize, z: usize) -> Result<u32> {
        let mut worst = 0;
        for (c, a, b) in [(x, y, z), (y, z, x), (z, x, y)] {
            let p = self.geodesic(c, a)?;
            let q = self.geodesic(c, b)?;
            let reach = self.gromov_product(a, b, c)?.ceil() as usize;
            for t in 0..=reach {
                worst = worst.max(self.dist(p[t], q[t])?);
            }
        }
        Ok(worst)
    }

    /// Four-point defect: half the gap between the two largest pair sums.
    pub fn four_point_defect(&self, q: [usize; 4]) -> Result<HalfInt> {
        let d = |i: usize, j: usize| self.dist(q[i], q[j]).map(|v| v as i64);
        let mut sums = [d(0, 1)? + d(2, 3)?, d(0, 2)? + d(1, 3)?, d(0, 3)? + d(1, 2)?];
        sums.sort_unstable();
        Ok(HalfInt(sums[2] - sums[1]))
    }
}

/// Hyperbolicity estimates over a set of sampled configurations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaReport {
    pub delta_thin: HalfInt,
    pub delta_four_point: HalfInt,
    pub triangles: usize,
    pub quadruples: usize,
    pub exhaustive: bool,
}

impl DeltaReport {
    /// Flat `key=value` record.
    pub fn to_record(&self) -> String {
        format!(
            "delta_thin={}\ndelta_four_point={}\ntriangles={}\nquadruples={}\nexhaustive={}\n",
            self.delta_thin, self.delta_four_point, self.triangles, self.quadruples, self.exhaustive
        )
    }
}

fn binom(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

fn all_subsets<const K: usize>(n: usize) -> Vec<[usize; K]> {
    let mut out = Vec::new();
    let mut cur = [0usize; K];
    fn rec<const K: usize>(n: usize, start: usize, depth: usize, cur: &mut [usize; K], out: &mut Vec<[usize; K]>) {
        if depth == K {
            out.push(*cur);
            return;
        }
        for v in start..n {
            cur[depth] = v;
            rec(n, v + 1, depth + 1, cur, out);
        }
    }
    if n >= K {
        rec(n, 0, 0, &mut cur, &mut out);
    }
    out
}

fn sampled<const K: usize>(n: usize, samples: usize, rng: &mut ChaCha8Rng) -> Vec<[usize; K]> {
    (0..samples).map(|_| std::array::from_fn(|_| rng.gen_range(0..n))).collect()
}

/// Estimates δ both ways. Uses every triangle and quadruple when there are at
/// most `samples` of them, otherwise `samples` seeded random draws of each.
pub fn delta_estimate(graph: &Graph, samples: usize, seed: u64) -> Result<DeltaReport> {
    if samples == 0 {
        return Err(Error::Input("at least one sample is required".into()));
    }
    if !graph.is_connected() {
        return Err(Error::Disconnected("delta estimate needs a connected graph".into()));
    }
    let n = graph.len();
    let metric = Metric::new(graph);
    if n <= 4096 {
        metric.warm_all();
    }
    let exhaustive = binom(n, 4) <= samples as u128 && binom(n, 3) <= samples as u128;
    let (tri, quad): (Vec<[usize; 3]>, Vec<[usize; 4]>) = if exhaustive {
        (all_subsets::<3>(n), all_subsets::<4>(n))
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = sampled::<3>(n, samples, &mut rng);
        (t, sampled::<4>(n, samples, &mut rng))
    };
    let thin = tri
        .par_iter()
        .map(|&[x, y, z]| metric.thin_defect(x, y, z))
        .try_reduce(|| 0, |a, b| Ok(a.max(b)))?;
    let four = quad
        .par_iter()
        .map(|&q| metric.four_point_defect(q))
        .try_reduce(|| HalfInt::ZERO, |a, b| Ok(a.max(b)))?;
    Ok(DeltaReport {
        delta_thin: HalfInt::from_int(thin as i64),
        delta_four_point: four,
        triangles: tri.len(),
        quadruples: quad.len(),
        exhaustive,
    })
}

/// Finite stand-in for a boundary point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProxyKind {
    /// The parabolic point of a horoball, by coset trace index.
    Parabolic { coset: usize },
    /// The endpoint of the ray `1, u, u^2, ...`.
    Conical { period: Word },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryProxy {
    pub kind: ProxyKind,
    pub basepoint: usize,
}

impl BoundaryProxy {
    pub fn parabolic(g: &CuspedGraph, coset: usize) -> Self {
        BoundaryProxy { kind: ProxyKind::Parabolic { coset }, basepoint: g.basepoint }
    }

    pub fn conical(g: &CuspedGraph, period: Word) -> Self {
        BoundaryProxy { kind: ProxyKind::Conical { period }, basepoint: g.basepoint }
    }

    /// The vertex standing in for the boundary point.
    ///
    /// Parabolic: the deepest vertex of the horoball, nearest the basepoint.
    /// Conical: the last vertex of the periodic ray still inside the graph.
    pub fn target(&self, g: &CuspedGraph, spec: &GroupSpec) -> Result<usize> {
        match &self.kind {
            ProxyKind::Parabolic { coset } => {
                if *coset >= g.traces.len() {
                    return Err(Error::Unknown(format!("coset {coset} (only {} registered)", g.traces.len())));
                }
                let from = g.graph.bfs(self.basepoint);
                (0..g.len())
                    .filter(|&v| g.vertices[v].coset == Some(*coset))
                    .min_by(|&a, &b| {
                        g.depth(b)
                            .cmp(&g.depth(a))
                            .then(from[a].cmp(&from[b]))
                            .then(g.graph.label(a).cmp(g.graph.label(b)))
                    })
                    .ok_or_else(|| Error::Unknown(format!("coset {coset} has no vertices")))
            }
            ProxyKind::Conical { period } => {
                let u = spec.normal_form(period)?;
                if u.is_empty() {
                    return Err(Error::Input("conical proxy needs a nontrivial period".into()));
                }
                let mut cur = spec.normal_form(&Word::identity())?;
                let mut last = None;
                'walk: for _ in 0..=g.len() {
                    for l in &u.0 {
                        cur = spec.multiply(&cur, &Word(vec![*l]))?;
                        match g.graph.find(&spec.render(&cur)) {
                            Some(v) if g.depth(v) == 0 => last = Some(v),
                            _ => break 'walk,
                        }
                    }
                }
                last.ok_or_else(|| Error::Input("the periodic ray leaves the graph at once".into()))
            }
        }
    }
}

/// `{y : <y|target>_basepoint >= n}`, sorted by vertex id.
pub fn neighborhood_v(metric: &Metric, target: usize, basepoint: usize, n: u32) -> Result<Vec<usize>> {
    let from_base = metric.row(basepoint);
    let from_target = metric.row(target);
    let bz = metric.dist(basepoint, target)? as i64;
    let mut out = Vec::new();
    for y in 0..metric.graph().len() {
        if from_base[y] == UNREACHABLE {
            continue;
        }
        let twice = from_base[y] as i64 + bz - from_target[y] as i64;
        if twice >= 2 * n as i64 {
            out.push(y);
        }
    }
    Ok(out)
}

/// Size of the symmetric difference between `V(z, n)` for the proxy target and
/// for the vertex one step closer to the basepoint along the geodesic.
pub fn proxy_sensitivity(metric: &Metric, target: usize, basepoint: usize, n: u32) -> Result<usize> {
    let path = metric.geodesic(target, basepoint)?;
    let Some(&shallower) = path.get(1) else { return Ok(0) };
    let a = neighborhood_v(metric, target, basepoint, n)?;
    let b = neighborhood_v(metric, shallower, basepoint, n)?;
    let both = a.iter().filter(|v| b.binary_search(v).is_ok()).count();
    Ok(a.len() + b.len() - 2 * both)
}

/// Sorted labels of a vertex set.
pub fn label_list(graph: &Graph, set: &[usize]) -> Vec<String> {
    let mut l: Vec<String> = set.iter().map(|&v| graph.label(v).to_string()).collect();
    l.sort();
    l
}
