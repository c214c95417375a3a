//! Command implementations and report types for the `symdelta` binary.
//!
//! Every command produces a serializable report; `main` only parses flags,
//! configures the thread pool and prints.

pub mod render;
pub mod selftest;

use std::path::Path;

use serde::{Deserialize, Serialize};
use symdelta::homology::HomologyGroup;
use symdelta::permgroup::{closure, contains_transposition, parse_generators, PermGroup};
use symdelta::spherequotient::{build, orbit_counts, SubdivisionLevel};
use symdelta::stablegraphs::{edge_group_with_cap, enumerate, enumerate_with_max_edges, in_bm, GraphFile, StableGraph};
use symdelta::{spectral, Error};

/// Failure of a command, mapped onto distinct exit codes.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("cannot read {path}: {reason}")]
    Io { path: String, reason: String },
    #[error("{0}")]
    Usage(String),
    #[error("{failed} self-test case(s) failed")]
    SelftestFailed { failed: usize },
}

pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_SELFTEST: i32 = 4;
pub const EXIT_INCONSISTENT: i32 = 5;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e {
                Error::GroupTooLarge { .. } | Error::TooLarge(_) => EXIT_BUDGET,
                Error::NonzeroComposite { .. } | Error::LevelDisagreement { .. } | Error::SkeletonOutsideSubcomplex => {
                    EXIT_INCONSISTENT
                }
                _ => EXIT_INPUT,
            },
            CliError::Io { .. } | CliError::Usage(_) => EXIT_INPUT,
            CliError::SelftestFailed { .. } => EXIT_SELFTEST,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Where the acting group came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupInfo {
    /// `"generators"` or `"graph"`.
    pub source: String,
    pub order: usize,
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphereQuotientReport {
    pub p: usize,
    pub level: u8,
    pub group: GroupInfo,
    /// True when a transposition made the build unnecessary.
    pub shortcut: bool,
    /// Orbit counts per simplex dimension; empty when the shortcut was taken.
    pub orbit_counts: Vec<usize>,
    /// Whether the other subdivision level was computed and agreed.
    pub cross_checked: bool,
    /// Reduced homology of `S^{p-1}/G` in degrees `0..p`.
    pub reduced_homology: Vec<HomologyGroup>,
}

/// Input for `sphere-quotient`: explicit generators on `p + 1` points, or the
/// edge symmetries of a graph.
pub enum GroupInput<'a> {
    Generators { p: usize, text: &'a str },
    GraphFile(&'a Path),
}

pub struct SphereQuotientArgs<'a> {
    pub input: GroupInput<'a>,
    pub level: SubdivisionLevel,
    pub shortcut: bool,
    pub cross_check: bool,
    pub group_cap: usize,
}

pub fn read_graph(path: &Path) -> CliResult<StableGraph> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        reason: e.to_string(),
    })?;
    Ok(StableGraph::from_json(&text)?)
}

fn generator_strings(group: &PermGroup) -> Vec<String> {
    group.generators().iter().map(|g| g.to_string()).collect()
}

pub fn sphere_quotient(args: SphereQuotientArgs<'_>) -> CliResult<SphereQuotientReport> {
    let (p, group, info) = match args.input {
        GroupInput::Generators { p, text } => {
            if p < 1 {
                return Err(Error::InvalidDimension(p).into());
            }
            let gens = parse_generators(text, p + 1)?;
            let group = closure(&gens, p + 1, args.group_cap)?;
            let info = GroupInfo {
                source: "generators".into(),
                order: group.order(),
                generators: generator_strings(&group),
                graph: None,
            };
            (p, group, info)
        }
        GroupInput::GraphFile(path) => {
            let graph = read_graph(path)?;
            let group = edge_group_with_cap(&graph, args.group_cap)?;
            let p = graph.cell_dimension();
            if p < 1 {
                return Err(CliError::Usage("the graph needs at least two edges".into()));
            }
            let info = GroupInfo {
                source: "graph".into(),
                order: group.order(),
                generators: generator_strings(&group),
                graph: Some(graph.to_file()),
            };
            (p, group, info)
        }
    };
    let level = args.level;
    if args.shortcut && contains_transposition(&group) {
        log::info!("group contains a transposition; quotient is contractible");
        return Ok(SphereQuotientReport {
            p,
            level: level.as_u8(),
            group: info,
            shortcut: true,
            orbit_counts: Vec::new(),
            cross_checked: false,
            reduced_homology: vec![HomologyGroup::zero(); p],
        });
    }
    let complex = build(p, &group, level)?;
    let counts = orbit_counts(&complex);
    let homology = complex.reduced_homology()?;
    drop(complex);
    if args.cross_check {
        let other = match level {
            SubdivisionLevel::Once => SubdivisionLevel::Twice,
            SubdivisionLevel::Twice => SubdivisionLevel::Once,
        };
        let second = build(p, &group, other)?.reduced_homology()?;
        for (degree, (a, b)) in homology.iter().zip(&second).enumerate() {
            if a != b {
                let (l1, l2) = if level == SubdivisionLevel::Once { (a, b) } else { (b, a) };
                return Err(Error::LevelDisagreement {
                    degree,
                    level1: l1.to_string(),
                    level2: l2.to_string(),
                }
                .into());
            }
        }
    }
    Ok(SphereQuotientReport {
        p,
        level: level.as_u8(),
        group: info,
        shortcut: false,
        orbit_counts: counts,
        cross_checked: args.cross_check,
        reduced_homology: homology,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphEntry {
    pub id: usize,
    pub edges: usize,
    pub vertices: usize,
    pub in_bm: bool,
    pub graph: GraphFile,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationReport {
    pub g: u32,
    pub n: u32,
    pub count: usize,
    pub non_bm: usize,
    pub graphs: Vec<GraphEntry>,
}

pub fn graphs_enumerate(g: u32, n: u32, max_edges: Option<usize>, only_non_bm: bool) -> CliResult<EnumerationReport> {
    let all = match max_edges {
        Some(m) => enumerate_with_max_edges(g, n, m)?,
        None => enumerate(g, n)?,
    };
    let count = all.len();
    let entries: Vec<GraphEntry> = all
        .iter()
        .enumerate()
        .map(|(id, graph)| GraphEntry {
            id,
            edges: graph.num_edges(),
            vertices: graph.num_vertices(),
            in_bm: in_bm(graph),
            graph: graph.to_file(),
        })
        .collect();
    let non_bm = entries.iter().filter(|e| !e.in_bm).count();
    let graphs = entries.into_iter().filter(|e| !only_non_bm || !e.in_bm).collect();
    Ok(EnumerationReport {
        g,
        n,
        count,
        non_bm,
        graphs,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkeletonReport {
    pub g: u32,
    pub n: u32,
    pub graphs_checked: usize,
    pub one_skeleton_in_bm: bool,
}

pub fn check_skeleton(g: u32, n: u32) -> CliResult<SkeletonReport> {
    let graphs_checked = enumerate_with_max_edges(g, n, 2)?.len();
    Ok(SkeletonReport {
        g,
        n,
        graphs_checked,
        one_skeleton_in_bm: spectral::check_one_skeleton(g, n)?,
    })
}

pub fn delta(g: u32, n: u32, options: spectral::DeltaOptions) -> CliResult<spectral::DeltaReport> {
    Ok(spectral::delta(g, n, options)?)
}
