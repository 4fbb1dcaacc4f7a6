//! Declarative scenario files.
//!
//! A scenario is a TOML document with the sections `[group]`,
//! `[peripherals]`, `[space]`, `[tasks]` and an optional `[expected]`
//! known-answer block. Every error carries the line it refers to.

use std::collections::BTreeMap;
use std::ops::Range;

use serde::Deserialize;
use toml::Spanned;

use crate::compact::{Classification, ExhaustionSchedule};
use crate::cusped::{
    build_cusped_complex, build_cusped_graph, build_horoball, cayley_complex, prism_cylinder, ComplexTruncation, CuspedGraph,
};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::group::{cayley_ball, Factor, GroupKind, GroupSpec, Peripheral, PeripheralSpec};
use crate::homology::SimplicialComplex;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSection {
    pub kind: Spanned<String>,
    /// Rank for free and free abelian groups, genus for surfaces.
    pub rank: Option<usize>,
    /// Free product factors such as `"free:1"` or `"free-abelian:2"`.
    #[serde(default)]
    pub factors: Vec<String>,
    pub names: Option<Vec<String>>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeripheralSection {
    /// One list of generator words per subgroup.
    #[serde(default)]
    pub subgroups: Vec<Vec<String>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpaceKind {
    CuspedGraph,
    CuspedComplex,
    CayleyOnly,
    Horoball,
    Cylinder,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSection {
    pub kind: Spanned<SpaceKind>,
    /// Cayley ball radius `R`.
    pub radius: Option<Spanned<usize>>,
    /// Horoball depth cap `T`, also the cylinder height.
    pub depth: Option<Spanned<u32>>,
    /// Rips scale `D`.
    pub rips: Option<u32>,
    #[serde(default = "default_dim_cap")]
    pub dim_cap: usize,
    pub schedule: Option<Spanned<Vec<u32>>>,
    #[serde(default)]
    pub seed: u64,
    /// Cylinder base as a list of maximal simplices.
    pub base: Option<Vec<Vec<usize>>>,
    /// Horoball base: a path with this many vertices.
    pub base_path: Option<usize>,
}

fn default_dim_cap() -> usize {
    2
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalTask {
    pub outer: u32,
    pub inner: u32,
    pub rips: u32,
    #[serde(default)]
    pub c: u32,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskSection {
    /// Degrees whose compactly supported pro-system is computed.
    #[serde(default)]
    pub pro_system: Vec<usize>,
    #[serde(default)]
    pub ends: bool,
    #[serde(default)]
    pub dimension: bool,
    /// Sample budget for the delta estimate.
    pub delta: Option<usize>,
    #[serde(default)]
    pub regularity: bool,
    pub local: Option<LocalTask>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedSection {
    pub provenance: Option<String>,
    /// Degree to verdict text, e.g. `"2" = "stable(1)"`.
    #[serde(default)]
    pub pro: BTreeMap<String, Spanned<String>>,
    pub ends: Option<String>,
    pub dimension: Option<i64>,
    pub local_vanishes: Option<bool>,
    pub regularity: Option<bool>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    name: String,
    #[serde(default)]
    description: String,
    group: Spanned<GroupSection>,
    peripherals: Option<Spanned<PeripheralSection>>,
    space: Spanned<SpaceSection>,
    #[serde(default)]
    tasks: TaskSection,
    expected: Option<Spanned<ExpectedSection>>,
}

/// Expected answers with the reason they are believed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnownAnswer {
    pub label: String,
    pub pro: BTreeMap<usize, Classification>,
    pub ends: Option<String>,
    pub dimension: Option<i64>,
    pub local_vanishes: Option<bool>,
    pub regularity: Option<bool>,
    pub provenance: String,
}

/// A parsed and validated scenario.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub description: String,
    pub group: GroupSpec,
    pub peripherals: PeripheralSpec,
    pub space: SpaceSection,
    pub tasks: TaskSection,
    pub expected: Option<KnownAnswer>,
    source: String,
    depth_line: usize,
    schedule_line: usize,
}

/// The space a scenario describes, built and ready for tasks.
#[derive(Clone, Debug)]
pub enum BuiltSpace {
    Graph(CuspedGraph),
    Complex { truncation: ComplexTruncation, graph: Option<CuspedGraph> },
}

impl BuiltSpace {
    pub fn truncation(&self) -> Option<&ComplexTruncation> {
        match self {
            BuiltSpace::Complex { truncation, .. } => Some(truncation),
            BuiltSpace::Graph(_) => None,
        }
    }

    /// The metric graph used by delta and local probes.
    pub fn metric_graph(&self) -> Graph {
        match self {
            BuiltSpace::Graph(g) => g.graph.clone(),
            BuiltSpace::Complex { graph: Some(g), .. } => g.graph.clone(),
            BuiltSpace::Complex { truncation, .. } => truncation.skeleton(),
        }
    }
}

fn line_of(text: &str, span: Range<usize>) -> usize {
    text[..span.start.min(text.len())].matches('\n').count() + 1
}

fn parse_factor(s: &str) -> Option<Factor> {
    let (kind, rank) = s.split_once(':')?;
    let rank = rank.trim().parse().ok()?;
    match kind.trim() {
        "free" => Some(Factor::Free(rank)),
        "free-abelian" => Some(Factor::FreeAbelian(rank)),
        _ => None,
    }
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Scenario> {
        let raw: RawScenario = toml::from_str(text).map_err(|e| Error::Parse {
            line: e.span().map_or(1, |s| line_of(text, s)),
            msg: e.message().trim().to_string(),
        })?;
        let at = |span: Range<usize>, msg: String| Error::Parse { line: line_of(text, span), msg };

        let g = raw.group.get_ref();
        let need_rank = || g.rank.ok_or_else(|| at(raw.group.span(), "group.rank is required for this kind".into()));
        let kind = match g.kind.get_ref().as_str() {
            "free" => GroupKind::Free(need_rank()?),
            "free-abelian" => GroupKind::FreeAbelian(need_rank()?),
            "surface" => GroupKind::Surface(need_rank()?),
            "free-product" => {
                let factors = g
                    .factors
                    .iter()
                    .map(|f| parse_factor(f).ok_or_else(|| at(raw.group.span(), format!("bad factor {f:?}"))))
                    .collect::<Result<Vec<_>>>()?;
                GroupKind::FreeProduct(factors)
            }
            other => return Err(at(g.kind.span(), format!("unknown group kind {other:?}"))),
        };
        let n_gens = match &kind {
            GroupKind::Free(r) | GroupKind::FreeAbelian(r) => *r,
            GroupKind::Surface(genus) => 2 * genus,
            GroupKind::FreeProduct(f) => f.iter().map(|x| x.rank()).sum(),
            GroupKind::Presented => 0,
        };
        let names = g.names.clone().unwrap_or_else(|| crate::group::word::default_names(n_gens));
        let group = GroupSpec::build(kind, names).map_err(|e| at(raw.group.span(), e.to_string()))?;

        let mut subgroups = Vec::new();
        if let Some(per) = &raw.peripherals {
            for (i, gens) in per.get_ref().subgroups.iter().enumerate() {
                let generators = gens
                    .iter()
                    .map(|w| group.parse_word(w).and_then(|w| group.normal_form(&w)))
                    .collect::<Result<Vec<_>>>()
                    .map_err(|e| at(per.span(), e.to_string()))?;
                subgroups.push(Peripheral { name: format!("P{i}"), generators });
            }
        }
        let peripherals = PeripheralSpec { subgroups };

        let space = raw.space.get_ref().clone();
        let space_err = |msg: &str| at(raw.space.span(), msg.to_string());
        match *space.kind.get_ref() {
            SpaceKind::CuspedGraph | SpaceKind::CuspedComplex | SpaceKind::CayleyOnly if space.radius.is_none() => {
                return Err(space_err("space.radius is required"));
            }
            SpaceKind::CuspedGraph | SpaceKind::CuspedComplex | SpaceKind::Horoball | SpaceKind::Cylinder
                if space.depth.is_none() =>
            {
                return Err(space_err("space.depth is required"));
            }
            SpaceKind::Horoball if space.base_path.is_none_or(|n| n == 0) => {
                return Err(space_err("space.base_path must be a positive vertex count"));
            }
            SpaceKind::Cylinder if space.base.is_none() => return Err(space_err("space.base is required for cylinders")),
            _ => {}
        }
        if let Some(s) = &space.schedule {
            ExhaustionSchedule::new(s.get_ref().clone()).map_err(|e| at(s.span(), e.to_string()))?;
        }
        let tasks = raw.tasks.clone();
        if (!tasks.pro_system.is_empty() || tasks.ends) && space.schedule.is_none() {
            return Err(space_err("space.schedule is required by pro_system and ends tasks"));
        }
        let complex_kind = matches!(*space.kind.get_ref(), SpaceKind::CuspedComplex | SpaceKind::CayleyOnly | SpaceKind::Cylinder);
        if (!tasks.pro_system.is_empty() || tasks.ends || tasks.regularity) && !complex_kind {
            return Err(space_err("pro_system, ends and regularity need a complex space kind"));
        }
        if tasks.regularity && *space.kind.get_ref() != SpaceKind::CuspedComplex {
            return Err(space_err("regularity probes need a cusped-complex space"));
        }
        if tasks.dimension && tasks.pro_system.is_empty() {
            return Err(space_err("the dimension task needs pro_system degrees"));
        }

        let expected = match &raw.expected {
            None => None,
            Some(e) => {
                let ex = e.get_ref();
                let provenance = ex
                    .provenance
                    .clone()
                    .filter(|p| !p.trim().is_empty())
                    .ok_or_else(|| at(e.span(), "every expectation needs a provenance note".into()))?;
                let mut pro = BTreeMap::new();
                for (deg, verdict) in &ex.pro {
                    let d: usize = deg.parse().map_err(|_| at(verdict.span(), format!("degree {deg:?} is not a number")))?;
                    let c: Classification = verdict.get_ref().parse().map_err(|e: Error| at(verdict.span(), e.to_string()))?;
                    pro.insert(d, c);
                }
                Some(KnownAnswer {
                    label: raw.name.clone(),
                    pro,
                    ends: ex.ends.clone(),
                    dimension: ex.dimension,
                    local_vanishes: ex.local_vanishes,
                    regularity: ex.regularity,
                    provenance,
                })
            }
        };
        let depth_line = space.depth.as_ref().map_or(line_of(text, raw.space.span()), |d| line_of(text, d.span()));
        let schedule_line = space.schedule.as_ref().map_or(line_of(text, raw.space.span()), |s| line_of(text, s.span()));
        Ok(Scenario {
            name: raw.name,
            description: raw.description,
            group,
            peripherals,
            space,
            tasks,
            expected,
            source: text.to_string(),
            depth_line,
            schedule_line,
        })
    }

    pub fn from_file(path: &std::path::Path) -> Result<Scenario> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
        Scenario::parse(&text)
    }

    /// The text the scenario was parsed from.
    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn kind(&self) -> SpaceKind {
        *self.space.kind.get_ref()
    }

    pub fn radius(&self) -> usize {
        self.space.radius.as_ref().map_or(0, |r| *r.get_ref())
    }

    pub fn depth(&self) -> u32 {
        self.space.depth.as_ref().map_or(0, |d| *d.get_ref())
    }

    pub fn schedule(&self) -> Option<ExhaustionSchedule> {
        self.space.schedule.as_ref().map(|s| ExhaustionSchedule::new(s.get_ref().clone()).expect("validated on parse"))
    }

    /// Replaces the schedule by radii `1..=stages`.
    pub fn set_stages(&mut self, stages: u32) -> Result<()> {
        let radii: Vec<u32> = (1..=stages).collect();
        ExhaustionSchedule::new(radii.clone())?;
        let span = self.space.schedule.as_ref().map_or(0..0, |s| s.span());
        self.space.schedule = Some(Spanned::new(span, radii));
        Ok(())
    }

    /// Depth guard for cusped spaces: `T >= ceil(log2(2R)) + 2`, so that
    /// geodesics between ball vertices never reach the horoball floor.
    pub fn check_depth_guard(&self) -> Result<()> {
        if !matches!(self.kind(), SpaceKind::CuspedGraph | SpaceKind::CuspedComplex) || self.peripherals.is_empty() {
            return Ok(());
        }
        let need = (2 * self.radius().max(1)).next_power_of_two().trailing_zeros() + 2;
        if self.depth() < need {
            return Err(Error::Parse {
                line: self.depth_line,
                msg: format!("depth {} is below the guard ceil(log2(2R)) + 2 = {need}", self.depth()),
            });
        }
        Ok(())
    }

    /// Schedule guard, checked against the built space.
    pub fn check_schedule_guard(&self, space: &BuiltSpace) -> Result<()> {
        let (Some(schedule), Some(x)) = (self.schedule(), space.truncation()) else { return Ok(()) };
        let safe = x.safe_radius();
        if schedule.max() > safe {
            return Err(Error::Parse {
                line: self.schedule_line,
                msg: Error::Guard { requested: schedule.max(), safe }.to_string(),
            });
        }
        Ok(())
    }

    pub fn build_space(&self) -> Result<BuiltSpace> {
        let (r, t) = (self.radius(), self.depth());
        Ok(match self.kind() {
            SpaceKind::CuspedGraph => BuiltSpace::Graph(build_cusped_graph(&self.group, &self.peripherals, r, t)?),
            SpaceKind::Horoball => {
                let n = self.space.base_path.expect("validated on parse");
                let mut base = Graph::new();
                for i in 0..n {
                    base.add_vertex(i.to_string(), 0);
                }
                for i in 1..n {
                    base.add_edge(i - 1, i);
                }
                BuiltSpace::Graph(build_horoball(&base, t)?)
            }
            SpaceKind::CayleyOnly => {
                let truncation = cayley_complex(&self.group, r)?;
                let graph = if self.tasks.delta.is_some() || self.tasks.local.is_some() {
                    Some(build_cusped_graph(&self.group, &PeripheralSpec::empty(), r, 0)?)
                } else {
                    None
                };
                BuiltSpace::Complex { truncation, graph }
            }
            SpaceKind::CuspedComplex => {
                let c = build_cusped_complex(&self.group, &self.peripherals, r, t)?;
                BuiltSpace::Complex { truncation: c.truncation, graph: None }
            }
            SpaceKind::Cylinder => {
                let base = SimplicialComplex::from_simplices(self.space.base.clone().expect("validated on parse"));
                BuiltSpace::Complex { truncation: prism_cylinder(&base, t), graph: None }
            }
        })
    }

    /// Full Cayley ball size, for quick reports.
    pub fn ball_size(&self) -> Result<usize> {
        Ok(cayley_ball(&self.group, self.radius())?.len())
    }
}
