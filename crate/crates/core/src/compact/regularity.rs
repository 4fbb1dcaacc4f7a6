//! Local (co)boundary filling: does a (co)boundary supported near a region
//! bound a (co)chain supported nearby?

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::cusped::ComplexTruncation;
use crate::error::{Error, Result};
use crate::graph::UNREACHABLE;
use crate::homology::{eliminate, smith_normal_form, IntMatrix, SimplicialComplex, SparseMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbeMode {
    /// Solve `δd = c` for a cochain `c`.
    Cochain,
    /// Solve `∂d = c` for a chain `c`.
    Chain,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityReport {
    pub mode: ProbeMode,
    /// Degree of the target.
    pub degree: usize,
    /// Diameter of the target's vertex support in the 1-skeleton.
    pub target_radius: u32,
    pub found: bool,
    /// First region radius at which a primitive exists.
    pub region_radius: Option<u32>,
    /// Largest distance from the target's support to a vertex of the primitive's support.
    pub primitive_radius: Option<u32>,
    /// Primitive as `(simplex index, coefficient)` pairs.
    pub primitive: Vec<(usize, BigInt)>,
    /// Region radius at which escalation stopped, when no primitive was found.
    pub radius_exceeded: Option<u32>,
}

impl RegularityReport {
    /// Flat `key=value` record.
    pub fn to_record(&self) -> String {
        let opt = |v: Option<u32>| v.map_or_else(|| "-".to_string(), |x| x.to_string());
        format!(
            "mode={}\ndegree={}\ntarget_radius={}\nfound={}\nregion_radius={}\nprimitive_radius={}\nprimitive_terms={}\nradius_exceeded={}\n",
            match self.mode {
                ProbeMode::Cochain => "cochain",
                ProbeMode::Chain => "chain",
            },
            self.degree,
            self.target_radius,
            self.found,
            opt(self.region_radius),
            opt(self.primitive_radius),
            self.primitive.len(),
            opt(self.radius_exceeded)
        )
    }
}

/// Integer solution of `a x = b`, if one exists.
pub fn solve_integer(a: &IntMatrix, b: &[i64]) -> Option<Vec<BigInt>> {
    let f = smith_normal_form(a);
    let bb: Vec<BigInt> = b.iter().map(|&v| BigInt::from(v)).collect();
    let y = f.u.mul_vec(&bb)?;
    let mut z = vec![BigInt::zero(); a.cols()];
    for (i, yi) in y.iter().enumerate() {
        if i < f.rank {
            let s = f.s.get(i, i);
            if !(yi % s).is_zero() {
                return None;
            }
            z[i] = yi / s;
        } else if !yi.is_zero() {
            return None;
        }
    }
    f.v.mul_vec(&z)
}

/// Incidences between degree `lo` and degree `lo + 1`, with signs.
struct Incidence {
    /// For each `lo+1` simplex, its faces.
    faces: Vec<Vec<(usize, i64)>>,
    /// For each `lo` simplex, its cofaces.
    cofaces: Vec<Vec<(usize, i64)>>,
}

fn incidence(k: &SimplicialComplex, lo: usize) -> Incidence {
    let n_lo = if k.dim().is_some_and(|d| d >= lo) { k.count(lo) } else { 0 };
    let n_hi = if k.dim().is_some_and(|d| d > lo) { k.count(lo + 1) } else { 0 };
    let mut faces = vec![Vec::new(); n_hi];
    let mut cofaces = vec![Vec::new(); n_lo];
    if n_hi == 0 {
        return Incidence { faces, cofaces };
    }
    for (j, s) in k.simplices(lo + 1).iter().enumerate() {
        for (_, sign, face) in crate::homology::simplicial::faces(s) {
            let i = k.index_of(&face).expect("downward closed");
            faces[j].push((i, sign));
            cofaces[i].push((j, sign));
        }
    }
    Incidence { faces, cofaces }
}

/// The linear system for the probe: columns are candidate primitive simplices,
/// rows the target-degree simplices they touch.
struct System {
    matrix: SparseMatrix,
    rhs: Vec<i64>,
}

fn build_system(inc: &Incidence, mode: ProbeMode, cols: &[usize], target: &HashMap<usize, i64>) -> System {
    let touch = |c: usize| -> &[(usize, i64)] {
        match mode {
            ProbeMode::Cochain => &inc.cofaces[c],
            ProbeMode::Chain => &inc.faces[c],
        }
    };
    let mut row_set: BTreeSet<usize> = target.keys().copied().collect();
    for &c in cols {
        row_set.extend(touch(c).iter().map(|e| e.0));
    }
    let rows: Vec<usize> = row_set.into_iter().collect();
    let pos: HashMap<usize, usize> = rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let mut matrix = SparseMatrix::new(rows.len(), cols.len());
    for (j, &c) in cols.iter().enumerate() {
        for &(r, sign) in touch(c) {
            matrix.add(pos[&r], j, sign);
        }
    }
    let rhs = rows.iter().map(|r| target.get(r).copied().unwrap_or(0)).collect();
    System { matrix, rhs }
}

/// Whether `rhs` lies in the integer column span of `m`.
fn in_integer_span(m: &SparseMatrix, rhs: &[i64]) -> Result<bool> {
    let base = eliminate(m)?;
    let ext = eliminate(&m.with_column(rhs))?;
    let prod = |t: &[BigInt]| t.iter().product::<BigInt>();
    Ok(base.rank == ext.rank && prod(&base.torsion) == prod(&ext.torsion))
}

/// Searches for a primitive of `c` supported within growing combinatorial
/// neighbourhoods of `c`'s support, up to the truncation's interior.
///
/// `c` lists `(simplex index, coefficient)` pairs in degree `degree`. The
/// target must be closed. A primitive found locally is verified exactly and
/// witnesses that the target bounds; when none is found the whole interior is
/// checked, and a target that bounds nowhere is rejected as a nonzero class.
pub fn regularity_probe(x: &ComplexTruncation, mode: ProbeMode, degree: usize, c: &[(usize, i64)]) -> Result<RegularityReport> {
    let k = &x.complex;
    let mut target: HashMap<usize, i64> = HashMap::new();
    for &(s, v) in c {
        *target.entry(s).or_insert(0) += v;
    }
    target.retain(|_, v| *v != 0);
    let mut report = RegularityReport {
        mode,
        degree,
        target_radius: 0,
        found: true,
        region_radius: Some(0),
        primitive_radius: Some(0),
        primitive: Vec::new(),
        radius_exceeded: None,
    };
    if target.is_empty() {
        return Ok(report);
    }
    let prim_deg = match mode {
        ProbeMode::Cochain => degree.checked_sub(1).ok_or_else(|| Error::Input("degree-0 cochains have no primitive".into()))?,
        ProbeMode::Chain => degree + 1,
    };
    if k.dim().is_none_or(|d| d < degree) || target.keys().any(|&s| s >= k.count(degree)) {
        return Err(Error::Input("target simplex index out of range".into()));
    }
    let support_vertices: BTreeSet<usize> = target.keys().flat_map(|&s| k.simplices(degree)[s].iter().copied()).collect();
    if support_vertices.iter().any(|&v| !x.interior[v]) {
        return Err(Error::Input("target touches the truncation boundary".into()));
    }
    let skeleton = x.skeleton();
    let seeds: Vec<usize> = support_vertices.iter().copied().collect();
    report.target_radius = seeds.iter().map(|&v| {
        let d = skeleton.bfs(v);
        seeds.iter().map(|&w| d[w]).max().unwrap_or(0)
    }).max().unwrap_or(0);
    let dist = skeleton.bfs_multi(&seeds);

    // closedness of the target
    let mut image: HashMap<usize, i64> = HashMap::new();
    if !(mode == ProbeMode::Chain && degree == 0) {
        let closing = match mode {
            ProbeMode::Cochain => incidence(k, degree),
            ProbeMode::Chain => incidence(k, degree - 1),
        };
        for (&s, &v) in &target {
            let touched = match mode {
                ProbeMode::Cochain => &closing.cofaces[s],
                ProbeMode::Chain => &closing.faces[s],
            };
            for &(r, sign) in touched {
                *image.entry(r).or_insert(0) += sign * v;
            }
        }
    }
    if image.values().any(|&v| v != 0) {
        return Err(Error::Input(format!("target is not a {}", if mode == ProbeMode::Cochain { "cocycle" } else { "cycle" })));
    }

    let (lo, inc) = match mode {
        ProbeMode::Cochain => (prim_deg, incidence(k, prim_deg)),
        ProbeMode::Chain => (degree, incidence(k, degree)),
    };
    debug_assert_eq!(lo + 1, prim_deg.max(degree));
    let candidates: Vec<usize> = if k.dim().is_some_and(|d| d >= prim_deg) {
        (0..k.count(prim_deg)).filter(|&s| k.simplices(prim_deg)[s].iter().all(|&v| x.interior[v])).collect()
    } else {
        Vec::new()
    };
    let reach = |s: usize| k.simplices(prim_deg)[s].iter().map(|&v| dist[v]).max().unwrap_or(UNREACHABLE);
    let limit = (0..skeleton.len()).filter(|&v| !x.interior[v]).map(|v| dist[v]).min().unwrap_or(UNREACHABLE);
    let max_reach = candidates.iter().map(|&s| reach(s)).filter(|&r| r != UNREACHABLE).max().unwrap_or(0);
    for r in 0..=max_reach.min(limit) {
        let cols: Vec<usize> = candidates.iter().copied().filter(|&s| reach(s) <= r).collect();
        let sys = build_system(&inc, mode, &cols, &target);
        let Some(sol) = solve_integer(&sys.matrix.to_dense(), &sys.rhs) else { continue };
        let primitive: Vec<(usize, BigInt)> = cols.iter().zip(sol).filter(|(_, v)| !v.is_zero()).map(|(&s, v)| (s, v)).collect();
        // exact verification on every touched row
        let mut check: HashMap<usize, BigInt> = HashMap::new();
        for (s, v) in &primitive {
            let touched = match mode {
                ProbeMode::Cochain => &inc.cofaces[*s],
                ProbeMode::Chain => &inc.faces[*s],
            };
            for &(row, sign) in touched {
                *check.entry(row).or_insert_with(BigInt::zero) += v * sign;
            }
        }
        let rows: BTreeSet<usize> = check.keys().chain(target.keys()).copied().collect();
        let exact = rows.iter().all(|row| {
            check.get(row).cloned().unwrap_or_default() == BigInt::from(target.get(row).copied().unwrap_or(0))
        });
        if !exact {
            return Err(Error::Input("primitive failed exact verification".into()));
        }
        report.region_radius = Some(r);
        report.primitive_radius = Some(primitive.iter().map(|(s, _)| reach(*s)).max().unwrap_or(0));
        report.primitive = primitive;
        return Ok(report);
    }
    // no local primitive: certify that the target bounds at all before blaming the radius
    let global = build_system(&inc, mode, &candidates, &target);
    if !in_integer_span(&global.matrix, &global.rhs)? {
        return Err(Error::Input(format!(
            "target is closed but not a {} in the interior: its class is nonzero",
            if mode == ProbeMode::Cochain { "coboundary" } else { "boundary" }
        )));
    }
    report.found = false;
    report.region_radius = None;
    report.primitive_radius = None;
    report.radius_exceeded = Some(limit);
    Ok(report)
}

/// Sparse vector helper: the coboundary of the dual of one simplex.
pub fn coboundary_of_dual(k: &SimplicialComplex, degree: usize, simplex: usize) -> Vec<(usize, i64)> {
    incidence(k, degree).cofaces[simplex].clone()
}

/// Sparse vector helper: the boundary of a chain.
pub fn boundary_of(k: &SimplicialComplex, degree: usize, chain: &[(usize, i64)]) -> Vec<(usize, i64)> {
    let mut out: HashMap<usize, i64> = HashMap::new();
    for &(s, v) in chain {
        for (_, sign, face) in crate::homology::simplicial::faces(&k.simplices(degree)[s]) {
            *out.entry(k.index_of(&face).expect("downward closed")).or_insert(0) += sign * v;
        }
    }
    let mut v: Vec<(usize, i64)> = out.into_iter().filter(|e| e.1 != 0).collect();
    v.sort_unstable();
    v
}
