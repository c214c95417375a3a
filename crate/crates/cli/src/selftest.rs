//! Known-answer cases and small property checks run by `symdelta selftest`.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use symdelta::homology::{reduced_sphere_quotient_homology, HomologyGroup, SphereQuotientOptions};
use symdelta::permgroup::{closure, parse_generators, PermGroup, DEFAULT_GROUP_CAP};
use symdelta::spectral::{self, DeltaOptions};
use symdelta::spherequotient::SubdivisionLevel;
use symdelta::stablegraphs::{check_stable_type, named, StableGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    pub name: String,
    pub status: Status,
    pub seconds: f64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub cases: Vec<CaseResult>,
}

#[derive(Clone, Copy, Debug)]
pub struct SelftestOptions {
    /// Skip the sphere quotients with `p ≥ 7` and the genus-4 pipeline.
    pub quick: bool,
    /// Also compare subdivision levels 1 and 2 for every `p ≤ 5` test group.
    pub level_check: bool,
    /// Cases not started within this budget are skipped.
    pub budget: Duration,
}

type Check = Box<dyn Fn() -> Result<(), String>>;

struct Case {
    name: String,
    heavy: bool,
    run: Check,
}

fn case(name: impl Into<String>, heavy: bool, run: impl Fn() -> Result<(), String> + 'static) -> Case {
    Case {
        name: name.into(),
        heavy,
        run: Box::new(run),
    }
}

fn group(p: usize, gens: &str) -> Result<PermGroup, String> {
    let gens = parse_generators(gens, p + 1).map_err(|e| e.to_string())?;
    closure(&gens, p + 1, DEFAULT_GROUP_CAP).map_err(|e| e.to_string())
}

fn quotient(p: usize, g: &PermGroup, level: SubdivisionLevel, shortcut: bool) -> Result<Vec<HomologyGroup>, String> {
    reduced_sphere_quotient_homology(p, g, SphereQuotientOptions { level, shortcut }).map_err(|e| e.to_string())
}

/// Checks that `h` is zero except for the listed degrees.
fn expect(h: &[HomologyGroup], nonzero: &[(usize, HomologyGroup)]) -> Result<(), String> {
    let want: BTreeMap<usize, &HomologyGroup> = nonzero.iter().map(|(k, g)| (*k, g)).collect();
    for (k, got) in h.iter().enumerate() {
        let zero = HomologyGroup::zero();
        let w = want.get(&k).copied().unwrap_or(&zero);
        if got != w {
            return Err(format!("H̃_{k} = {got}, expected {w}"));
        }
    }
    Ok(())
}

fn known_quotient(p: usize, gens: &'static str, nonzero: Vec<(usize, HomologyGroup)>) -> impl Fn() -> Result<(), String> {
    move || expect(&quotient(p, &group(p, gens)?, SubdivisionLevel::Once, true)?, &nonzero)
}

fn graph_quotient(graph: fn() -> StableGraph, nonzero: Vec<(usize, HomologyGroup)>) -> impl Fn() -> Result<(), String> {
    move || {
        let g = graph();
        let grp = g.edge_group().map_err(|e| e.to_string())?;
        expect(&quotient(g.cell_dimension(), &grp, SubdivisionLevel::Once, true)?, &nonzero)
    }
}

/// The fixed-vertex quotient is the unreduced suspension of the smaller one.
fn suspension(p: usize, gens: &'static str) -> impl Fn() -> Result<(), String> {
    move || {
        let small = quotient(p, &group(p, gens)?, SubdivisionLevel::Once, true)?;
        let big = quotient(p + 1, &group(p + 1, gens)?, SubdivisionLevel::Once, true)?;
        if big[0].is_zero() && big[1..] == small[..] {
            Ok(())
        } else {
            Err(format!("{small:?} does not shift to {big:?}"))
        }
    }
}

fn level_agreement(p: usize, gens: &'static str) -> impl Fn() -> Result<(), String> {
    move || {
        let g = group(p, gens)?;
        let a = quotient(p, &g, SubdivisionLevel::Once, false)?;
        let b = quotient(p, &g, SubdivisionLevel::Twice, false)?;
        if a == b {
            Ok(())
        } else {
            Err(format!("level 1 {a:?} vs level 2 {b:?}"))
        }
    }
}

fn z() -> HomologyGroup {
    HomologyGroup::free(1)
}

fn t(d: u64) -> HomologyGroup {
    HomologyGroup::torsion(&[d])
}

/// Groups with `p ≤ 5` used by the level agreement checks.
pub const LEVEL_CHECK_GROUPS: &[(usize, &str)] = &[
    (1, "()"),
    (2, "()"),
    (2, "(0 1 2)"),
    (3, "(0 1 2 3)"),
    (3, "(0 1)(2 3)"),
    (3, "(0 1 2)"),
    (4, "(0 1 2 3)"),
    (4, "(0 1 2 3 4)"),
    (4, "(0 1)(2 3)"),
    (5, "(0 1)(2 3)(4 5)"),
    (5, "(0 1 2)(3 4 5)"),
];

fn cases(options: SelftestOptions) -> Vec<Case> {
    let mut v = vec![
        case("real projective plane: ∂Δ³/⟨(0 1 2 3)⟩", false, known_quotient(3, "(0 1 2 3)", vec![(1, t(2))])),
        case(
            "suspended projective plane: ∂Δ⁴/⟨(0 1 2 3)⟩",
            false,
            known_quotient(4, "(0 1 2 3)", vec![(2, t(2))]),
        ),
        case("suspension shift: ⟨(0 1 2 3)⟩ on Δ³ vs Δ⁴", false, suspension(3, "(0 1 2 3)")),
        case(
            "join with a circle: ∂Δ⁵/⟨(0 1)(2 3)(4 5)⟩",
            false,
            known_quotient(5, "(0 1)(2 3)(4 5)", vec![(3, t(2))]),
        ),
        case("suspension shift: ⟨(0 1)(2 3)(4 5)⟩ on Δ⁵ vs Δ⁶", false, suspension(5, "(0 1)(2 3)(4 5)")),
    ];
    for p in 1..=6 {
        v.push(case(format!("sphere: ∂Δ^{p} with trivial group"), false, known_quotient(p, "()", vec![(p - 1, z())])));
    }
    for (p, gens) in [(2, "(0 1)"), (3, "(0 1)"), (4, "(0 1),(2 3 4)"), (5, "(0 1 2 3 4 5),(0 1)"), (5, "(2 3)(0 1)(4 5),(4 5)")] {
        v.push(case(format!("reflection: ∂Δ^{p}/⟨{gens}⟩ is acyclic"), false, move || {
            expect(&quotient(p, &group(p, gens)?, SubdivisionLevel::Once, false)?, &[])
        }));
    }
    v.push(case("K₄: S⁴/𝔖₄ has the homology of S⁴", false, graph_quotient(named::complete_k4, vec![(4, z())])));
    v.push(case(
        "pyramid: S⁶/Aut",
        true,
        graph_quotient(named::square_pyramid, vec![(4, t(4)), (5, t(2))]),
    ));
    v.push(case(
        "K₃,₃: S⁷/Aut",
        true,
        graph_quotient(named::complete_bipartite_k33, vec![(4, t(3)), (5, t(4)), (6, t(2))]),
    ));
    v.push(case(
        "prism: S⁷/Aut",
        true,
        graph_quotient(named::triangular_prism, vec![(5, t(2)), (6, t(2))]),
    ));
    v.push(case("edge group orders 24, 8, 12, 72", false, || {
        let orders: Vec<usize> = [
            named::complete_k4(),
            named::square_pyramid(),
            named::triangular_prism(),
            named::complete_bipartite_k33(),
        ]
        .iter()
        .map(|g| g.edge_group().map(|x| x.order()))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
        if orders == [24, 8, 12, 72] {
            Ok(())
        } else {
            Err(format!("orders {orders:?}"))
        }
    }));
    v.push(case("cells outside bm: 0, 1, 3 for genus 2, 3, 4", false, || {
        let counts: Vec<usize> = (2..=4)
            .map(|g| spectral::relative_cells(g, 0).map(|c| c.len()))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        if counts == [0, 1, 3] {
            Ok(())
        } else {
            Err(format!("counts {counts:?}"))
        }
    }));
    v.push(case("1-skeleton inside bm for g ≤ 4, n ≤ 2", false, || {
        for g in 1..=4 {
            for n in 0..=2 {
                if check_stable_type(g, n).is_err() {
                    continue;
                }
                if !spectral::check_one_skeleton(g, n).map_err(|e| e.to_string())? {
                    return Err(format!("fails for ({g}, {n})"));
                }
            }
        }
        Ok(())
    }));
    v.push(case("Δ₂: all reduced homology zero", false, || {
        let r = spectral::delta(2, 0, DeltaOptions::default()).map_err(|e| e.to_string())?;
        if r.relative_cells.is_empty() && r.certified.zero == [0, 1, 2] {
            Ok(())
        } else {
            Err(format!("{:?}", r.certified))
        }
    }));
    v.push(case("Δ₃: H̃₅ = ℤ, all else zero", false, || {
        let r = spectral::delta(3, 0, DeltaOptions::default()).map_err(|e| e.to_string())?;
        let c = &r.certified;
        if c.exact == BTreeMap::from([(5, z())]) && c.zero == [0, 1, 2, 3, 4] {
            Ok(())
        } else {
            Err(format!("{c:?}"))
        }
    }));
    v.push(case("Δ₄: 3-torsion in H̃₅, 2-torsion in H̃₆ and H̃₇", true, || {
        let r = spectral::delta(4, 0, DeltaOptions::default()).map_err(|e| e.to_string())?;
        let c = &r.certified;
        let want = BTreeMap::from([(5, vec![3]), (6, vec![2]), (7, vec![2])]);
        if c.torsion == want && c.zero == [0, 1, 2, 3, 4, 8] {
            Ok(())
        } else {
            Err(format!("{c:?}"))
        }
    }));
    if options.level_check {
        for &(p, gens) in LEVEL_CHECK_GROUPS {
            v.push(case(format!("levels 1 and 2 agree: ∂Δ^{p}/⟨{gens}⟩"), false, level_agreement(p, gens)));
        }
        v.push(case("levels 1 and 2 agree: K₄", false, || {
            let g = named::complete_k4();
            let grp = g.edge_group().map_err(|e| e.to_string())?;
            let a = quotient(5, &grp, SubdivisionLevel::Once, false)?;
            let b = quotient(5, &grp, SubdivisionLevel::Twice, false)?;
            if a == b {
                Ok(())
            } else {
                Err(format!("{a:?} vs {b:?}"))
            }
        }));
    }
    v
}

pub fn run(options: SelftestOptions) -> SelftestReport {
    let start = Instant::now();
    let mut results = Vec::new();
    for c in cases(options) {
        let skip = if c.heavy && options.quick {
            Some("skipped by --quick")
        } else if start.elapsed() > options.budget {
            Some("time budget exhausted")
        } else {
            None
        };
        if let Some(why) = skip {
            results.push(CaseResult {
                name: c.name,
                status: Status::Skip,
                seconds: 0.0,
                detail: why.into(),
            });
            continue;
        }
        log::info!("self-test: {}", c.name);
        let t = Instant::now();
        let outcome = (c.run)();
        let seconds = t.elapsed().as_secs_f64();
        let (status, detail) = match outcome {
            Ok(()) => (Status::Pass, String::new()),
            Err(e) => (Status::Fail, e),
        };
        results.push(CaseResult {
            name: c.name,
            status,
            seconds,
            detail,
        });
    }
    let count = |s: Status| results.iter().filter(|r| r.status == s).count();
    SelftestReport {
        passed: count(Status::Pass),
        failed: count(Status::Fail),
        skipped: count(Status::Skip),
        cases: results,
    }
}
