//! Exhaustion pro-systems `H^k(X, L_n)` and their classification.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::cusped::ComplexTruncation;
use crate::error::{Error, Result};
use crate::homology::{
    cohomology_subquotient, eliminate, extension_by_zero, relative_cochain_complex, simplicial::sparse_coboundary,
    AbelianGroup, InducedMap, SimplicialComplex, SparseMatrix,
};

/// Stages whose three cochain groups together stay below this size also get
/// explicit induced maps, which pins down torsion in images.
pub const DENSE_LIMIT: usize = 400;

/// Default number of connecting maps a stability verdict must cover.
pub const DEFAULT_WINDOW: usize = 3;

/// Radii `n_1 < n_2 < ...` of the exhaustion.
///
/// Stage `n` is the pair `(X, L_n)` with `L_n` the full subcomplex on vertices
/// of level at least `n`, so its cochains live on simplices meeting level `< n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExhaustionSchedule {
    pub radii: Vec<u32>,
}

impl ExhaustionSchedule {
    pub fn new(radii: Vec<u32>) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::Input("empty exhaustion schedule".into()));
        }
        if radii.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Input(format!("radii must increase strictly: {radii:?}")));
        }
        Ok(ExhaustionSchedule { radii })
    }

    /// Radii `lo, lo+1, ..., hi`.
    pub fn range(lo: u32, hi: u32) -> Result<Self> {
        Self::new((lo..=hi).collect())
    }

    pub fn max(&self) -> u32 {
        *self.radii.last().expect("nonempty")
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }
}

/// Direct system of stage groups with the ranks of all composite images.
#[derive(Clone, Debug)]
pub struct ProSystem {
    pub degree: usize,
    pub radii: Vec<u32>,
    pub stages: Vec<AbelianGroup>,
    /// `images[i][j]` (for `j >= i`) is the rank of the image of stage `i` in stage `j`.
    pub images: Vec<Vec<usize>>,
    /// Connecting maps `stage i -> stage i+1`, present when all stages are small.
    pub maps: Option<Vec<InducedMap>>,
}

impl ProSystem {
    /// Composite map `stage i -> stage j`, if explicit maps are available.
    pub fn composite(&self, i: usize, j: usize) -> Option<InducedMap> {
        let maps = self.maps.as_ref()?;
        let mut m = InducedMap::identity(&self.stages[i]);
        for step in &maps[i..j] {
            m = m.then(step);
        }
        Some(m)
    }

    /// One row per stage: `stage_radius,rank,torsion,image_rank_next`.
    ///
    /// Torsion coefficients are separated by `;`; the last stage has no image rank.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("stage_radius,rank,torsion,image_rank_next\n");
        for (i, g) in self.stages.iter().enumerate() {
            let torsion: Vec<String> = g.torsion.iter().map(u64::to_string).collect();
            let next = if i + 1 < self.stages.len() { self.images[i][i + 1].to_string() } else { String::new() };
            out.push_str(&format!("{},{},{},{}\n", self.radii[i], g.rank, torsion.join(";"), next));
        }
        out
    }
}

struct StageData {
    group: AbelianGroup,
    /// Rank of `δ^{k-1}` on the stage.
    rank_in: usize,
}

fn min_levels(k: &SimplicialComplex, deg: usize, levels: &[u32]) -> Vec<u32> {
    if k.dim().is_none_or(|d| d < deg) {
        return Vec::new();
    }
    k.simplices(deg).iter().map(|s| s.iter().map(|&v| levels[v]).min().expect("nonempty simplex")).collect()
}

fn support(min_level: &[u32], n: u32) -> Vec<usize> {
    (0..min_level.len()).filter(|&i| min_level[i] < n).collect()
}

fn coboundary(k: &SimplicialComplex, deg: Option<usize>, cols: &[usize], rows: &[usize]) -> SparseMatrix {
    match deg {
        Some(d) if !cols.is_empty() && !rows.is_empty() => sparse_coboundary(k, d, cols, rows),
        _ => SparseMatrix::new(rows.len(), cols.len()),
    }
}

/// The system `n -> H^k(X, L_n)` over the schedule, with inclusion-induced maps.
///
/// Refuses schedules reaching past the truncation's safe radius, since
/// stages beyond it would see the artificial boundary.
pub fn hc_pro_system(x: &ComplexTruncation, k: usize, schedule: &ExhaustionSchedule) -> Result<ProSystem> {
    let safe = x.safe_radius();
    if schedule.max() > safe {
        return Err(Error::Guard { requested: schedule.max(), safe });
    }
    let levels = x.levels();
    let cx = &x.complex;
    let lv_below = if k > 0 { min_levels(cx, k - 1, &levels) } else { Vec::new() };
    let lv_at = min_levels(cx, k, &levels);
    let lv_above = min_levels(cx, k + 1, &levels);
    let below_deg = k.checked_sub(1);
    let supports: Vec<[Vec<usize>; 3]> =
        schedule.radii.iter().map(|&n| [support(&lv_below, n), support(&lv_at, n), support(&lv_above, n)]).collect();
    let data: Vec<StageData> = supports
        .par_iter()
        .map(|[below, at, above]| {
            let d_in = eliminate(&coboundary(cx, below_deg, below, at))?;
            let d_out = eliminate(&coboundary(cx, Some(k), at, above))?;
            let group = AbelianGroup::from_divisors(at.len() - d_in.rank - d_out.rank, &d_in.torsion)?;
            Ok(StageData { group, rank_in: d_in.rank })
        })
        .collect::<Result<_>>()?;
    let m = data.len();
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
    let pair_ranks: Vec<usize> = pairs
        .par_iter()
        .map(|&(i, j)| {
            // kernel of H_i -> H_j is (B_j ∩ C_i) / B_i
            let [below, at_j, _] = &supports[j];
            let at_i = &supports[i][1];
            let outside: Vec<usize> =
                at_j.iter().enumerate().filter(|(_, s)| at_i.binary_search(s).is_err()).map(|(p, _)| p).collect();
            let a_j = coboundary(cx, below_deg, below, at_j);
            let leaking = eliminate(&a_j.select_rows(&outside))?.rank;
            let kernel = data[j].rank_in - leaking - data[i].rank_in;
            Ok(data[i].group.rank - kernel)
        })
        .collect::<Result<_>>()?;
    let mut images = vec![vec![0usize; m]; m];
    for i in 0..m {
        images[i][i] = data[i].group.rank;
    }
    for (&(i, j), &r) in pairs.iter().zip(&pair_ranks) {
        images[i][j] = r;
    }
    let size = |s: &[Vec<usize>; 3]| s.iter().map(Vec::len).sum::<usize>();
    let maps = if supports.last().is_some_and(|s| size(s) <= DENSE_LIMIT) {
        Some(dense_maps(x, k, schedule, &levels)?)
    } else {
        None
    };
    let stages = data.into_iter().map(|d| d.group).collect();
    Ok(ProSystem { degree: k, radii: schedule.radii.clone(), stages, images, maps })
}

fn dense_maps(x: &ComplexTruncation, k: usize, schedule: &ExhaustionSchedule, levels: &[u32]) -> Result<Vec<InducedMap>> {
    let rel: Vec<_> = schedule
        .radii
        .par_iter()
        .map(|&n| {
            let l = x.complex.full_subcomplex(|v| levels[v] >= n);
            let c = relative_cochain_complex(&x.complex, &l)?;
            let h = cohomology_subquotient(&c, k)?;
            Ok((c, h))
        })
        .collect::<Result<_>>()?;
    Ok(rel.windows(2).map(|w| extension_by_zero(&w[0].0, &w[1].0, k, &w[0].1, &w[1].1)).collect())
}

/// Finite-window verdict on a pro-system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    ProTrivial,
    Stable { rank: usize, torsion: Vec<u64> },
    Growing,
    Inconclusive(String),
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::ProTrivial => write!(f, "pro-trivial"),
            Classification::Stable { rank, torsion } if torsion.is_empty() => write!(f, "stable({rank})"),
            Classification::Stable { rank, torsion } => {
                let t: Vec<String> = torsion.iter().map(u64::to_string).collect();
                write!(f, "stable({rank}; {})", t.join(","))
            }
            Classification::Growing => write!(f, "growing"),
            Classification::Inconclusive(why) => write!(f, "inconclusive({why})"),
        }
    }
}

impl FromStr for Classification {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "pro-trivial" => return Ok(Classification::ProTrivial),
            "growing" => return Ok(Classification::Growing),
            _ => {}
        }
        if let Some(inner) = s.strip_prefix("stable(").and_then(|r| r.strip_suffix(')')) {
            let g: AbelianGroup = if inner.contains(';') { inner.parse()? } else { format!("{inner};").parse()? };
            return Ok(Classification::Stable { rank: g.rank, torsion: g.torsion });
        }
        if let Some(inner) = s.strip_prefix("inconclusive(").and_then(|r| r.strip_suffix(')')) {
            return Ok(Classification::Inconclusive(inner.to_string()));
        }
        Err(Error::Input(format!("unknown verdict {s:?}")))
    }
}

/// A classification plus the evidence behind it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProVerdict {
    pub classification: Classification,
    pub stage_ranks: Vec<usize>,
    /// `(from radius, to radius, image rank)` for every composite in the window.
    pub window_images: Vec<(u32, u32, usize)>,
    pub window: usize,
}

impl fmt::Display for ProVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.classification)
    }
}

/// Classifies over the last `window` connecting maps.
///
/// Pro-trivial when every composite in the window vanishes; stable when all
/// composites have the same nonzero image; growing when the images of the
/// consecutive maps strictly increase in rank.
pub fn pro_classify(p: &ProSystem, window: usize) -> ProVerdict {
    let m = p.stages.len();
    let stage_ranks = p.stages.iter().map(|g| g.rank).collect();
    let verdict = |classification, window_images| ProVerdict { classification, stage_ranks, window_images, window };
    if window == 0 || m < window + 1 || m < 4 {
        let why = format!("{m} stages, need at least {}", (window + 1).max(4));
        return verdict(Classification::Inconclusive(why), Vec::new());
    }
    let w: Vec<usize> = (m - window - 1..m).collect();
    let pairs: Vec<(usize, usize)> = w.iter().flat_map(|&i| w.iter().filter(move |&&j| j > i).map(move |&j| (i, j))).collect();
    let window_images: Vec<(u32, u32, usize)> = pairs.iter().map(|&(i, j)| (p.radii[i], p.radii[j], p.images[i][j])).collect();
    let composites: Option<Vec<InducedMap>> = pairs.iter().map(|&(i, j)| p.composite(i, j)).collect();
    let all_zero = match &composites {
        Some(c) => c.iter().all(InducedMap::is_zero),
        None => {
            if pairs.iter().any(|&(i, j)| p.images[i][j] > 0) {
                false
            } else if w.iter().any(|&i| !p.stages[i].torsion.is_empty()) {
                return verdict(Classification::Inconclusive("torsion images unknown".into()), window_images);
            } else {
                true
            }
        }
    };
    if all_zero {
        return verdict(Classification::ProTrivial, window_images);
    }
    let r = p.images[pairs[0].0][pairs[0].1];
    if r > 0 && pairs.iter().all(|&(i, j)| p.images[i][j] == r) {
        let torsion = match &composites {
            Some(c) => {
                let types: Vec<AbelianGroup> = c.iter().map(InducedMap::image).collect();
                if types.iter().all(|t| *t == types[0]) {
                    Some(types[0].torsion.clone())
                } else {
                    None
                }
            }
            None if w.iter().all(|&i| p.stages[i].torsion.is_empty()) => Some(Vec::new()),
            None => None,
        };
        return match torsion {
            Some(torsion) => verdict(Classification::Stable { rank: r, torsion }, window_images),
            None => verdict(Classification::Inconclusive("image torsion varies or is unknown".into()), window_images),
        };
    }
    let steps: Vec<usize> = w.windows(2).map(|s| p.images[s[0]][s[1]]).collect();
    if steps.windows(2).all(|s| s[0] < s[1]) {
        return verdict(Classification::Growing, window_images);
    }
    verdict(Classification::Inconclusive(format!("consecutive image ranks {steps:?}")), window_images)
}

/// Pro-systems of the half-open cylinder `K x [0, t)` in every degree up to `dim K + 1`.
pub fn cylinder_vanishing_test(k: &SimplicialComplex, t: u32, schedule: &ExhaustionSchedule) -> Result<Vec<(usize, ProVerdict)>> {
    let cyl = crate::cusped::prism_cylinder(k, t);
    let top = k.dim().unwrap_or(0) + 1;
    (0..=top)
        .map(|deg| {
            let p = hc_pro_system(&cyl, deg, schedule)?;
            Ok((deg, pro_classify(&p, DEFAULT_WINDOW)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cusped::{cayley_complex, ray_complex};
    use crate::group::GroupSpec;

    #[test]
    fn schedule_validation() {
        assert!(ExhaustionSchedule::new(vec![]).is_err());
        assert!(ExhaustionSchedule::new(vec![2, 2]).is_err());
        assert_eq!(ExhaustionSchedule::range(1, 3).unwrap().radii, vec![1, 2, 3]);
    }

    #[test]
    fn line_is_stable_in_degree_one() {
        let line = cayley_complex(&GroupSpec::free(1), 8).unwrap();
        let s = ExhaustionSchedule::range(1, 6).unwrap();
        let p1 = hc_pro_system(&line, 1, &s).unwrap();
        assert!(p1.stages.iter().all(|g| *g == AbelianGroup::free(1)));
        assert!(p1.maps.is_some());
        assert_eq!(pro_classify(&p1, 3).classification, Classification::Stable { rank: 1, torsion: vec![] });
        let p0 = hc_pro_system(&line, 0, &s).unwrap();
        assert_eq!(pro_classify(&p0, 3).classification, Classification::ProTrivial);
    }

    #[test]
    fn ray_is_pro_trivial() {
        let ray = ray_complex(8);
        let s = ExhaustionSchedule::range(1, 6).unwrap();
        for k in 0..2 {
            let p = hc_pro_system(&ray, k, &s).unwrap();
            assert!(p.stages.iter().all(AbelianGroup::is_trivial));
            assert_eq!(pro_classify(&p, 3).classification, Classification::ProTrivial);
        }
    }

    #[test]
    fn tree_grows() {
        let tree = cayley_complex(&GroupSpec::free(2), 6).unwrap();
        let s = ExhaustionSchedule::range(1, 5).unwrap();
        let p = hc_pro_system(&tree, 1, &s).unwrap();
        let ranks: Vec<usize> = p.stages.iter().map(|g| g.rank).collect();
        assert_eq!(ranks, vec![3, 11, 35, 107, 323]);
        assert_eq!(p.images[0][4], 3);
        assert_eq!(pro_classify(&p, 3).classification, Classification::Growing);
    }

    #[test]
    fn guard_refuses_deep_schedules() {
        let line = cayley_complex(&GroupSpec::free(1), 4).unwrap();
        let s = ExhaustionSchedule::range(1, 6).unwrap();
        assert_eq!(hc_pro_system(&line, 1, &s).unwrap_err(), Error::Guard { requested: 6, safe: 4 });
    }

    #[test]
    fn too_few_stages() {
        let line = cayley_complex(&GroupSpec::free(1), 6).unwrap();
        let p = hc_pro_system(&line, 1, &ExhaustionSchedule::range(1, 3).unwrap()).unwrap();
        assert!(matches!(pro_classify(&p, 3).classification, Classification::Inconclusive(_)));
    }

    #[test]
    fn verdict_text_round_trips() {
        for v in [
            Classification::ProTrivial,
            Classification::Growing,
            Classification::Stable { rank: 1, torsion: vec![] },
            Classification::Stable { rank: 2, torsion: vec![2, 4] },
        ] {
            assert_eq!(v.to_string().parse::<Classification>().unwrap(), v);
        }
    }

    #[test]
    fn cylinders_vanish() {
        let s = ExhaustionSchedule::range(1, 5).unwrap();
        let point = SimplicialComplex::from_simplices([[0]]);
        let two = SimplicialComplex::from_simplices([[0], [1]]);
        let tri = SimplicialComplex::from_simplices([[0, 1], [1, 2], [0, 2]]);
        for k in [point, two, tri] {
            for (deg, v) in cylinder_vanishing_test(&k, 6, &s).unwrap() {
                assert_eq!(v.classification, Classification::ProTrivial, "degree {deg}");
            }
        }
    }
}
