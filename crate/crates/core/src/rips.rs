//! Rips complexes over finite vertex sets and the contraction toward a basepoint.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::homology::SimplicialComplex;
use crate::metric::{HalfInt, Metric};

/// Default cap on the number of Rips simplices.
pub const DEFAULT_SIMPLEX_CAP: usize = 2_000_000;

/// All cliques of at most `cap + 1` points with pairwise distance at most `d`.
///
/// Vertex `i` of `complex` is the graph vertex `points[i]`.
#[derive(Clone, Debug)]
pub struct RipsComplex {
    pub points: Vec<usize>,
    pub d: u32,
    pub cap: usize,
    pub complex: SimplicialComplex,
}

impl RipsComplex {
    /// Local index of a graph vertex.
    pub fn local(&self, v: usize) -> Option<usize> {
        self.points.binary_search(&v).ok()
    }

    /// Whether a set of graph vertices spans a simplex.
    pub fn spans(&self, vertices: &[usize]) -> bool {
        let local: Option<Vec<usize>> = vertices.iter().map(|&v| self.local(v)).collect();
        local.is_some_and(|l| self.complex.contains(&l))
    }

    pub fn to_simplex_list(&self, metric: &Metric) -> String {
        self.complex.to_simplex_list(|i| metric.graph().label(self.points[i]).to_string())
    }
}

pub fn rips_complex(metric: &Metric, points: &[usize], d: u32, cap: usize, max_simplices: usize) -> Result<RipsComplex> {
    if d == 0 {
        return Err(Error::Input("the Rips parameter must be positive".into()));
    }
    let mut points = points.to_vec();
    points.sort_unstable();
    points.dedup();
    let n = points.len();
    let up: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let row = metric.row(points[i]);
            (i + 1..n).filter(|&j| row[points[j]] <= d).collect()
        })
        .collect();
    let count = AtomicUsize::new(0);
    let over = |extra: usize| count.fetch_add(extra, Ordering::Relaxed) + extra > max_simplices;
    let chunks: Vec<Vec<Vec<usize>>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut out = vec![vec![i]];
            let mut stack = vec![(vec![i], up[i].clone())];
            while let Some((clique, cand)) = stack.pop() {
                if clique.len() > cap {
                    continue;
                }
                for (k, &j) in cand.iter().enumerate() {
                    let mut next = clique.clone();
                    next.push(j);
                    let rest: Vec<usize> = cand[k + 1..].iter().copied().filter(|x| up[j].binary_search(x).is_ok()).collect();
                    out.push(next.clone());
                    stack.push((next, rest));
                }
                if over(0) {
                    break;
                }
            }
            if over(out.len()) {
                return Err(());
            }
            Ok(out)
        })
        .collect::<std::result::Result<_, ()>>()
        .map_err(|_| Error::Resource { what: "Rips simplices".into(), count: count.load(Ordering::Relaxed), cap: max_simplices })?;
    let mut all: Vec<Vec<usize>> = chunks.into_iter().flatten().collect();
    all.sort_unstable_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let mut complex = SimplicialComplex::new();
    for s in &all {
        complex.add_simplex(s);
    }
    Ok(RipsComplex { points, d, cap, complex })
}

/// One elementary step: `pushed` is replaced by `replacement`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Move {
    pub pushed: usize,
    pub replacement: usize,
    pub from_distance: u32,
    pub to_distance: u32,
    /// Simplices containing the pushed vertex at the time of the move.
    pub swept: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionTrace {
    pub basepoint: usize,
    /// The input complex, in graph vertex ids.
    pub original: Vec<Vec<usize>>,
    pub moves: Vec<Move>,
    /// Image of the input after the last move; every vertex is within `d` of the basepoint.
    pub final_simplices: Vec<Vec<usize>>,
    pub d: u32,
    /// `C + delta`.
    pub slack: HalfInt,
    pub warnings: Vec<String>,
}

impl ContractionTrace {
    /// Positions taken by an original vertex, starting with itself.
    pub fn route(&self, v: usize) -> Vec<usize> {
        let mut route = vec![v];
        let mut cur = v;
        for m in &self.moves {
            if m.pushed == cur {
                cur = m.replacement;
                route.push(cur);
            }
        }
        route
    }

    /// One line per move: pushed, replacement, both distances, simplices swept.
    pub fn to_log(&self, metric: &Metric) -> String {
        let g = metric.graph();
        let mut out = String::new();
        for m in &self.moves {
            out.push_str(&format!(
                "move {} -> {} dist {} -> {} swept {}\n",
                g.label(m.pushed),
                g.label(m.replacement),
                m.from_distance,
                m.to_distance,
                m.swept.len()
            ));
        }
        out
    }
}

fn normalized(simplices: impl IntoIterator<Item = Vec<usize>>) -> Vec<Vec<usize>> {
    let set: BTreeSet<Vec<usize>> = simplices
        .into_iter()
        .map(|mut s| {
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect();
    set.into_iter().collect()
}

/// Pushes the farthest vertex of `l` a step of `d / 2` toward `x0` until all
/// vertices are within `d` of it.
///
/// `l` lists simplices by graph vertex id; each must span a simplex of `rips`.
/// `c` is the density constant of the point set and `delta` the measured
/// thinness constant; the pair only feeds the slack and the precondition warning.
pub fn contract_to_basepoint(
    metric: &Metric,
    rips: &RipsComplex,
    l: &[Vec<usize>],
    x0: usize,
    c: u32,
    delta: HalfInt,
) -> Result<ContractionTrace> {
    for s in l {
        if !rips.spans(s) {
            return Err(Error::NotSubcomplex(format!("{s:?} is not a Rips simplex")));
        }
    }
    contract_in_point_set(metric, &rips.points, rips.d, l, x0, c, delta)
}

/// [`contract_to_basepoint`] without materializing the Rips complex: `points`
/// must be sorted and `l` is checked only for pairwise distances.
pub fn contract_in_point_set(
    metric: &Metric,
    points: &[usize],
    d: u32,
    l: &[Vec<usize>],
    x0: usize,
    c: u32,
    delta: HalfInt,
) -> Result<ContractionTrace> {
    let g = metric.graph();
    if points.binary_search(&x0).is_err() {
        return Err(Error::Unknown(format!("basepoint {} is not a Rips vertex", g.label(x0))));
    }
    for s in l {
        for (i, &u) in s.iter().enumerate() {
            if points.binary_search(&u).is_err() {
                return Err(Error::NotSubcomplex(format!("{} is not a Rips vertex", g.label(u))));
            }
            for &v in &s[i + 1..] {
                if metric.dist(u, v)? > d {
                    return Err(Error::NotSubcomplex(format!("{s:?} has diameter above {d}")));
                }
            }
        }
    }
    let mut warnings = Vec::new();
    if HalfInt::from_int(d as i64) < HalfInt(4 * delta.0) + HalfInt::from_int(6 * c as i64) {
        warnings.push(format!("D = {d} is below 4*delta + 6*C = {}", HalfInt(4 * delta.0) + HalfInt::from_int(6 * c as i64)));
    }
    let from_base = metric.row(x0);
    let original = normalized(l.iter().cloned());
    let mut current = original.clone();
    let mut moves = Vec::new();
    loop {
        let verts: BTreeSet<usize> = current.iter().flatten().copied().collect();
        let Some(&v) = verts.iter().max_by(|&&a, &&b| from_base[a].cmp(&from_base[b]).then(g.label(b).cmp(g.label(a))))
        else {
            break;
        };
        let dv = metric.dist(x0, v)?;
        if dv <= d {
            break;
        }
        let path = metric.geodesic(x0, v)?;
        let y = path[(dv - d / 2) as usize];
        let near = metric.row(y);
        let v1 = *points
            .iter()
            .min_by(|&&a, &&b| near[a].cmp(&near[b]).then(g.label(a).cmp(g.label(b))))
            .expect("nonempty point set");
        if near[v1] > c {
            return Err(Error::Input(format!("no point within {c} of {}; the point set is not {c}-dense", g.label(y))));
        }
        let to = metric.dist(x0, v1)?;
        let fail = |w: usize, dist: u32| Error::Contraction {
            pushed: g.label(v).to_string(),
            replacement: g.label(v1).to_string(),
            neighbor: g.label(w).to_string(),
            distance: dist,
        };
        if to >= dv {
            return Err(fail(x0, to));
        }
        let swept: Vec<Vec<usize>> = current.iter().filter(|s| s.contains(&v)).cloned().collect();
        let rep = metric.row(v1);
        for &w in swept.iter().flatten() {
            if w != v && rep[w] > d {
                return Err(fail(w, rep[w]));
            }
        }
        current = normalized(current.into_iter().map(|s| s.into_iter().map(|u| if u == v { v1 } else { u }).collect()));
        moves.push(Move { pushed: v, replacement: v1, from_distance: dv, to_distance: to, swept });
    }
    Ok(ContractionTrace {
        basepoint: x0,
        original,
        moves,
        final_simplices: current,
        d,
        slack: HalfInt::from_int(c as i64) + delta,
        warnings,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullReport {
    pub ok: bool,
    /// Largest distance from an intermediate vertex to the nearest chosen geodesic.
    pub worst: u32,
    pub offender: Option<usize>,
    pub bound: HalfInt,
}

/// Checks that every intermediate vertex lies within `C + delta` of a chosen
/// geodesic from the basepoint to some original vertex.
pub fn hull_check(metric: &Metric, trace: &ContractionTrace) -> Result<HullReport> {
    let originals: BTreeSet<usize> = trace.original.iter().flatten().copied().collect();
    let hull: Vec<usize> = {
        let mut h = Vec::new();
        for &u in &originals {
            h.extend(metric.geodesic(trace.basepoint, u)?);
        }
        h.sort_unstable();
        h.dedup();
        h
    };
    let mut worst = 0;
    let mut offender = None;
    for m in &trace.moves {
        let dist = metric.dist_to_set(m.replacement, &hull)?;
        if dist > worst || offender.is_none() && dist > 0 {
            worst = dist;
            offender = Some(m.replacement);
        }
    }
    let ok = HalfInt::from_int(worst as i64) <= trace.slack;
    Ok(HullReport { ok, worst, offender: if worst > 0 { offender } else { None }, bound: trace.slack })
}
