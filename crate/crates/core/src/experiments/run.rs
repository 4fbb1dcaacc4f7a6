//! Running scenarios, checking them against their known answers, and
//! exporting the spaces they describe.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::compact::{
    boundary_dim_estimate, count_ends, ends_verdict, hc_pro_system, local_homology_probe, pro_classify,
    regularity::{boundary_of, coboundary_of_dual},
    regularity_probe, LocalHomologyReport, ProbeMode, RegularityReport, DEFAULT_WINDOW,
};
use crate::error::{Error, Result};
use crate::homology::simplicial::faces;
use crate::homology::SimplicialComplex;
use crate::metric::{delta_estimate, BoundaryProxy, DeltaReport, Metric};

use super::scenario::{BuiltSpace, Scenario};

pub const DEFAULT_DELTA_SAMPLES: usize = 20_000;
pub const DEFAULT_MAX_SIMPLICES: usize = 3_000_000;

#[derive(Clone, Debug)]
pub struct RunOptions {
    /// Overrides the scenario seed.
    pub seed: Option<u64>,
    pub max_simplices: usize,
    /// Replaces the schedule by radii `1..=stages`.
    pub stages: Option<u32>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { seed: None, max_simplices: DEFAULT_MAX_SIMPLICES, stages: None }
    }
}

/// One comparison against the known answer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
}

impl Check {
    pub fn ok(&self) -> bool {
        self.expected == self.actual
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunReport {
    pub scenario: String,
    /// Output files as `(file name, contents)`, in a fixed order.
    pub files: Vec<(String, String)>,
    pub checks: Vec<Check>,
}

impl RunReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(Check::ok)
    }

    pub fn exit_status(&self) -> i32 {
        if self.ok() {
            0
        } else {
            1
        }
    }

    /// Human-readable comparison, mismatches first marked with `-`/`+`.
    pub fn diff(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            if c.ok() {
                let _ = writeln!(out, "  ok   {}: {}", c.name, c.actual);
            } else {
                let _ = writeln!(out, "  FAIL {}\n    - expected {}\n    + actual   {}", c.name, c.expected, c.actual);
            }
        }
        out
    }

    /// Writes every file into `dir`. Each file goes to a temporary name first
    /// and is renamed into place, so readers never see partial output.
    pub fn write_to(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        let io = |e: std::io::Error| Error::Input(format!("{}: {e}", dir.display()));
        std::fs::create_dir_all(dir).map_err(io)?;
        let mut written = Vec::new();
        for (name, contents) in &self.files {
            let path = dir.join(name);
            let tmp = dir.join(format!(".{name}.partial"));
            std::fs::write(&tmp, contents).map_err(io)?;
            std::fs::rename(&tmp, &path).map_err(io)?;
            written.push(path);
        }
        Ok(written)
    }
}

/// Flat `key=value` record of a local homology probe.
pub fn local_record(r: &LocalHomologyReport) -> String {
    format!(
        "n_outer={}\nn_inner={}\nd={}\nthreshold={}\ncompliant={}\ninner_points={}\nouter_points={}\nreduced_h0_inner={}\nreduced_h0_outer={}\nh1_inner={}\nh1_outer={}\nh0_map_zero={}\nh1_map_zero={}\nvanishes={}\n",
        r.n_outer,
        r.n_inner,
        r.d,
        r.threshold,
        r.compliant,
        r.inner_points,
        r.outer_points,
        r.reduced_h0.0,
        r.reduced_h0.1,
        r.h1.0,
        r.h1.1,
        r.h0_map_zero,
        r.h1_map_zero,
        r.vanishes()
    )
}

fn prepared(scenario: &Scenario, opts: &RunOptions) -> Result<(Scenario, BuiltSpace)> {
    let mut s = scenario.clone();
    if let Some(n) = opts.stages {
        s.set_stages(n)?;
    }
    if let Some(seed) = opts.seed {
        s.space.seed = seed;
    }
    s.check_depth_guard()?;
    let space = s.build_space()?;
    s.check_schedule_guard(&space)?;
    Ok((s, space))
}

/// Runs the delta estimate of a scenario's metric graph.
pub fn run_delta(scenario: &Scenario, opts: &RunOptions) -> Result<DeltaReport> {
    let (s, space) = prepared(scenario, opts)?;
    delta_estimate(&space.metric_graph(), s.tasks.delta.unwrap_or(DEFAULT_DELTA_SAMPLES), s.space.seed)
}

/// Regularity probes along the strip of the identity coset of the first
/// peripheral, at depths `3..=T-2`.
pub fn regularity_suite(scenario: &Scenario, space: &BuiltSpace) -> Result<Vec<(u32, RegularityReport)>> {
    let x = space.truncation().ok_or_else(|| Error::Input("regularity probes need a complex".into()))?;
    let k = &x.complex;
    let t_cap = scenario.depth();
    let skeleton = x.skeleton();
    let mut out = Vec::new();
    for t in 3..=t_cap.saturating_sub(2) {
        let find = |level: u32| {
            let label = format!("d{level}:P0:1:1");
            x.labels.iter().position(|l| *l == label).ok_or(Error::Unknown(label))
        };
        let (v, up) = (find(t)?, find(t + 1)?);
        let vertex = k.index_of(&[v]).expect("vertex");
        let edge = k.index_of(&[v.min(up), v.max(up)]).ok_or_else(|| Error::Unknown("vertical strip edge".into()))?;
        let triangle = (0..k.count(2)).find(|&i| k.simplices(2)[i].contains(&v) && k.simplices(2)[i].contains(&up));
        let triangle = triangle.ok_or_else(|| Error::Unknown("strip triangle".into()))?;
        out.push((t, regularity_probe(x, ProbeMode::Cochain, 1, &coboundary_of_dual(k, 0, vertex))?));
        out.push((t, regularity_probe(x, ProbeMode::Cochain, 2, &coboundary_of_dual(k, 1, edge))?));
        out.push((t, regularity_probe(x, ProbeMode::Chain, 0, &boundary_of(k, 1, &[(edge, 1)]))?));
        out.push((t, regularity_probe(x, ProbeMode::Chain, 1, &boundary_of(k, 2, &[(triangle, 1)]))?));
        // two triangles three steps apart along the strip row: the primitive
        // has to bridge the gap
        let prefix = format!("d{t}:P0:1:");
        let dist = skeleton.bfs(v);
        let far = (0..x.vertex_count())
            .filter(|&w| x.labels[w].starts_with(&prefix) && dist[w] == 3 && x.interior[w])
            .min_by(|&a, &b| x.labels[a].cmp(&x.labels[b]));
        if let Some(w) = far {
            let base = &x.labels[w][prefix.len()..];
            let label = format!("d{}:P0:1:{base}", t + 1);
            let w_up = x.labels.iter().position(|l| *l == label).ok_or(Error::Unknown(label))?;
            let other = (0..k.count(2)).find(|&i| k.simplices(2)[i].contains(&w) && k.simplices(2)[i].contains(&w_up));
            if let Some(other) = other.filter(|&o| k.simplices(2)[o].iter().all(|&u| x.interior[u])) {
                let sign = -relative_orientation(k, triangle, other, |u| x.labels[u].starts_with(&prefix) || x.labels[u].starts_with(&format!("d{}:P0:1:", t + 1)))
                    .ok_or_else(|| Error::Unknown("strip triangles are not connected".into()))?;
                out.push((t, regularity_probe(x, ProbeMode::Cochain, 2, &[(triangle, 1), (other, sign)])?));
            }
        }
    }
    Ok(out)
}

/// Sign `e` such that `a` and `e * b` are coherently oriented, propagated
/// through triangles on the allowed vertices that share edges.
fn relative_orientation(k: &SimplicialComplex, a: usize, b: usize, allowed: impl Fn(usize) -> bool) -> Option<i64> {
    let tris: Vec<usize> = (0..k.count(2)).filter(|&i| k.simplices(2)[i].iter().all(|&v| allowed(v))).collect();
    let mut by_edge: HashMap<usize, Vec<(usize, i64)>> = HashMap::new();
    for &tri in &tris {
        for (_, sign, face) in faces(&k.simplices(2)[tri]) {
            by_edge.entry(k.index_of(&face).expect("downward closed")).or_default().push((tri, sign));
        }
    }
    let mut orient: HashMap<usize, i64> = HashMap::from([(a, 1)]);
    let mut queue = VecDeque::from([a]);
    while let Some(tri) = queue.pop_front() {
        let o = orient[&tri];
        for (_, sign, face) in faces(&k.simplices(2)[tri]) {
            for &(next, next_sign) in &by_edge[&k.index_of(&face).expect("downward closed")] {
                if next != tri && !orient.contains_key(&next) {
                    // coherent: opposite induced orientations on the shared edge
                    orient.insert(next, -o * sign * next_sign);
                    queue.push_back(next);
                }
            }
        }
    }
    orient.get(&b).copied()
}

/// Local homology probe towards the parabolic point of the identity coset of
/// the first peripheral, or along the first generator when there is none.
pub fn local_probe(scenario: &Scenario, space: &BuiltSpace, max_simplices: usize) -> Result<(DeltaReport, LocalHomologyReport)> {
    let task = scenario.tasks.local.as_ref().ok_or_else(|| Error::Input("scenario has no [tasks.local] block".into()))?;
    let g = match space {
        BuiltSpace::Graph(g) | BuiltSpace::Complex { graph: Some(g), .. } => g,
        _ => return Err(Error::Input("local probes need a cusped graph".into())),
    };
    let delta = delta_estimate(&g.graph, scenario.tasks.delta.unwrap_or(DEFAULT_DELTA_SAMPLES), scenario.space.seed)?;
    let proxy = match g.traces.iter().position(|t| t.key.is_empty()) {
        Some(coset) => BoundaryProxy::parabolic(g, coset),
        None => {
            let a = crate::group::Word::letter(0, false);
            BoundaryProxy::conical(g, a)
        }
    };
    let target = proxy.target(g, &scenario.group)?;
    let metric = Metric::new(&g.graph);
    let report = local_homology_probe(
        &metric,
        target,
        g.basepoint,
        task.outer,
        task.inner,
        task.rips,
        task.c,
        delta.delta_four_point,
        max_simplices,
    )?;
    Ok((delta, report))
}

/// Executes every task of the scenario and compares with its known answer.
pub fn run_scenario(scenario: &Scenario, opts: &RunOptions) -> Result<RunReport> {
    let (s, space) = prepared(scenario, opts)?;
    let name = &s.name;
    let mut report = RunReport { scenario: name.clone(), ..Default::default() };
    let mut records = String::new();
    let expected = s.expected.clone();
    let mut checks = Vec::new();
    let mut check = |label: String, want: Option<String>, got: String| {
        if let Some(want) = want {
            checks.push(Check { name: label, expected: want, actual: got });
        }
    };

    if let (Some(x), Some(schedule)) = (space.truncation(), s.schedule()) {
        let systems = s
            .tasks
            .pro_system
            .par_iter()
            .map(|&k| hc_pro_system(x, k, &schedule).map(|p| (k, p)))
            .collect::<Result<Vec<_>>>()?;
        let mut verdicts = Vec::new();
        for (k, p) in &systems {
            let v = pro_classify(p, DEFAULT_WINDOW);
            report.files.push((format!("{name}-h{k}.csv"), p.to_csv()));
            let _ = writeln!(records, "[pro degree={k}]\nverdict={}\n", v.classification);
            check(
                format!("pro[{k}]"),
                expected.as_ref().and_then(|e| e.pro.get(k)).map(|c| c.to_string()),
                v.classification.to_string(),
            );
            verdicts.push((*k, v));
        }
        if s.tasks.dimension {
            let actual = match boundary_dim_estimate(&verdicts) {
                Ok(d) => d.value.to_string(),
                Err(e) => format!("no estimate ({e})"),
            };
            let _ = writeln!(records, "[dimension]\nestimate={actual}\nconditional=true\n");
            check("dimension".into(), expected.as_ref().and_then(|e| e.dimension).map(|d| d.to_string()), actual);
        }
        if s.tasks.ends {
            let counts = schedule.radii.iter().map(|&n| count_ends(x, n)).collect::<Result<Vec<_>>>()?;
            let mut csv = String::from("radius,ends\n");
            for (n, c) in schedule.radii.iter().zip(&counts) {
                let _ = writeln!(csv, "{n},{c}");
            }
            report.files.push((format!("{name}-ends.csv"), csv));
            let verdict = ends_verdict(&counts).to_string();
            let _ = writeln!(records, "[ends]\nverdict={verdict}\n");
            check("ends".into(), expected.as_ref().and_then(|e| e.ends.clone()), verdict);
        }
    }
    if s.tasks.regularity {
        let probes = regularity_suite(&s, &space)?;
        let all = probes.iter().all(|(_, r)| r.found);
        let m = probes.iter().filter_map(|(_, r)| r.primitive_radius).max().unwrap_or(0);
        for (t, r) in &probes {
            let _ = writeln!(records, "[regularity depth={t}]\n{}", r.to_record());
        }
        let _ = writeln!(records, "[regularity summary]\nall_found={all}\nmeasured_m={m}\n");
        check("regularity".into(), expected.as_ref().and_then(|e| e.regularity).map(|b| b.to_string()), all.to_string());
    }
    if let Some(samples) = s.tasks.delta {
        if s.tasks.local.is_none() {
            let d = delta_estimate(&space.metric_graph(), samples, s.space.seed)?;
            let _ = writeln!(records, "[delta]\n{}", d.to_record());
        }
    }
    if s.tasks.local.is_some() {
        let (d, r) = local_probe(&s, &space, opts.max_simplices)?;
        let _ = writeln!(records, "[delta]\n{}", d.to_record());
        let _ = writeln!(records, "[local]\n{}", local_record(&r));
        check(
            "local_vanishes".into(),
            expected.as_ref().and_then(|e| e.local_vanishes).map(|b| b.to_string()),
            r.vanishes().to_string(),
        );
    }
    report.checks = checks;
    if !records.is_empty() {
        report.files.push((format!("{name}-records.txt"), records));
    }
    Ok(report)
}

/// Export formats for built spaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    EdgeList,
    SimplexList,
    SparseMatrix,
}

impl std::str::FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edge-list" => Ok(ExportFormat::EdgeList),
            "simplex-list" => Ok(ExportFormat::SimplexList),
            "sparse-matrix" => Ok(ExportFormat::SparseMatrix),
            other => Err(Error::Input(format!("unknown export format {other:?} (edge-list, simplex-list, sparse-matrix)"))),
        }
    }
}

/// Serialises the scenario's space. Builds only; no guards or tasks run.
pub fn export_space(scenario: &Scenario, format: ExportFormat) -> Result<String> {
    let space = scenario.build_space()?;
    match format {
        ExportFormat::EdgeList => Ok(space.metric_graph().to_edge_list()),
        ExportFormat::SimplexList => match space.truncation() {
            Some(x) => Ok(x.to_simplex_list()),
            None => Err(Error::Input("simplex-list export needs a complex space kind".into())),
        },
        ExportFormat::SparseMatrix => {
            let k = match space.truncation() {
                Some(x) => x.complex.clone(),
                None => crate::cusped::ComplexTruncation::from_graph(&space.metric_graph(), vec![], 0).complex,
            };
            let mut out = String::new();
            for d in 1..=k.dim().unwrap_or(0) {
                let _ = writeln!(out, "# boundary {d}\n# {} {}", k.count(d - 1), k.count(d));
                for (j, s) in k.simplices(d).iter().enumerate() {
                    let mut entries: Vec<(usize, i64)> =
                        faces(s).map(|(_, sign, f)| (k.index_of(&f).expect("downward closed"), sign)).collect();
                    entries.sort_unstable();
                    for (i, sign) in entries {
                        let _ = writeln!(out, "{i} {j} {sign}");
                    }
                }
            }
            Ok(out)
        }
    }
}
