//! Acceptance suite: one PASS/FAIL line per criterion. All comparisons are
//! exact (integral homology, counts, group orders); tolerance is zero.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symdelta::homology::{reduced_sphere_quotient_homology, smith_diagonal, SphereQuotientOptions};
use symdelta::permgroup::{closure, parse_generators, PermGroup, DEFAULT_GROUP_CAP};
use symdelta::spectral::{self, check_one_skeleton, relative_cells, DeltaOptions};
use symdelta::spherequotient::{build, orbit_counts, SubdivisionLevel};
use symdelta::stablegraphs::{check_stable_type, enumerate, in_bm, named, StableGraph};
use symdelta::{BoundaryMatrix, HomologyGroup};

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome);

const TOLERANCE: &str = "exact";

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn z() -> HomologyGroup {
    HomologyGroup::free(1)
}

fn t(d: u64) -> HomologyGroup {
    HomologyGroup::torsion(&[d])
}

fn with_nonzero(len: usize, nonzero: &[(usize, HomologyGroup)]) -> Vec<HomologyGroup> {
    let mut v = vec![HomologyGroup::zero(); len];
    for (k, g) in nonzero {
        v[*k] = g.clone();
    }
    v
}

fn graph_quotient(graph: &StableGraph) -> Result<Vec<HomologyGroup>, String> {
    let g = graph.edge_group().map_err(|e| e.to_string())?;
    reduced_sphere_quotient_homology(graph.cell_dimension(), &g, SphereQuotientOptions::default()).map_err(|e| e.to_string())
}

fn group(p: usize, gens: &str) -> PermGroup {
    closure(&parse_generators(gens, p + 1).unwrap(), p + 1, DEFAULT_GROUP_CAP).unwrap()
}

fn sorted(groups: &[HomologyGroup]) -> Vec<HomologyGroup> {
    let mut v = groups.to_vec();
    v.sort_by_key(|g| (g.rank, g.invariant_factors.clone()));
    v
}

fn criterion_1() -> Outcome {
    let cases = [
        ("pyramid", named::square_pyramid(), with_nonzero(7, &[(4, t(4)), (5, t(2))])),
        ("prism", named::triangular_prism(), with_nonzero(8, &[(5, t(2)), (6, t(2))])),
        ("K33", named::complete_bipartite_k33(), with_nonzero(8, &[(4, t(3)), (5, t(4)), (6, t(2))])),
    ];
    let mut notes = Vec::new();
    for (name, graph, expected) in cases {
        let start = Instant::now();
        let h = graph_quotient(&graph)?;
        ensure(h == expected, || format!("{name}: got {h:?}"))?;
        notes.push(format!("{name} {:.1}s", start.elapsed().as_secs_f64()));
    }
    Ok(notes.join(", "))
}

fn criterion_2() -> Outcome {
    let cells = relative_cells(3, 0).map_err(|e| e.to_string())?;
    ensure(cells.len() == 1 && cells[0].graph.is_isomorphic(&named::complete_k4()), || {
        format!("{} relative cells", cells.len())
    })?;
    let h = graph_quotient(&named::complete_k4())?;
    ensure(h == with_nonzero(5, &[(4, z())]), || format!("S⁴/𝔖₄: {h:?}"))?;
    let r = spectral::delta(3, 0, DeltaOptions::default()).map_err(|e| e.to_string())?;
    let c = &r.certified;
    ensure(c.exact == BTreeMap::from([(5, z())]), || format!("exact {:?}", c.exact))?;
    ensure(c.zero == [0, 1, 2, 3, 4] && c.undetermined.is_empty() && c.torsion.is_empty(), || format!("{c:?}"))?;
    Ok("relative cells {K4}, H̃5 = ℤ, zero in degrees 0-4".into())
}

fn criterion_3() -> Outcome {
    let r = spectral::delta(4, 0, DeltaOptions::default()).map_err(|e| e.to_string())?;
    let page: BTreeMap<(usize, i64), Vec<HomologyGroup>> = r.e1.iter().map(|e| ((e.p, e.q), sorted(&e.groups))).collect();
    let expected: BTreeMap<(usize, i64), Vec<HomologyGroup>> = [
        ((0, 0), vec![z()]),
        ((7, -2), vec![t(4)]),
        ((7, -1), vec![t(2)]),
        ((8, -3), vec![t(3)]),
        ((8, -2), vec![t(2), t(4)]),
        ((8, -1), vec![t(2), t(2)]),
    ]
    .into_iter()
    .collect();
    ensure(page == expected, || format!("E1 page {page:?}"))?;
    let c = &r.certified;
    let torsion = BTreeMap::from([(5, vec![3]), (6, vec![2]), (7, vec![2])]);
    ensure(c.torsion == torsion, || format!("torsion {:?}", c.torsion))?;
    ensure(c.zero == [0, 1, 2, 3, 4, 8], || format!("zero {:?}", c.zero))?;
    Ok("E1 page exact; 3-torsion in H̃5, 2-torsion in H̃6 and H̃7; zero for k ∉ {5,6,7}".into())
}

fn criterion_4() -> Outcome {
    let r = spectral::delta(2, 0, DeltaOptions::default()).map_err(|e| e.to_string())?;
    ensure(r.relative_cells.is_empty(), || "relative cells present".into())?;
    ensure(r.certified.zero == [0, 1, 2] && r.certified.undetermined.is_empty(), || {
        format!("{:?}", r.certified)
    })?;
    Ok("no relative cells; H̃0..H̃2 certified zero".into())
}

fn criterion_5() -> Outcome {
    let opts = SphereQuotientOptions::default();
    let rp2 = reduced_sphere_quotient_homology(3, &group(3, "(0 1 2 3)"), opts).map_err(|e| e.to_string())?;
    ensure(rp2 == with_nonzero(3, &[(1, t(2))]), || format!("∂Δ³/C4: {rp2:?}"))?;
    let susp = reduced_sphere_quotient_homology(4, &group(4, "(0 1 2 3)"), opts).map_err(|e| e.to_string())?;
    ensure(susp == with_nonzero(4, &[(2, t(2))]), || format!("∂Δ⁴/C4: {susp:?}"))?;
    ensure(susp[0].is_zero() && susp[1..] == rp2[..], || "not a degree shift".into())?;
    Ok("H1(ℝP²) = ℤ/2, H2 = 0; suspension has H̃2 = ℤ/2 (shift by one)".into())
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut built = 0;
    // (a) and (b) on random groups, both subdivision levels where small
    for _ in 0..40 {
        let p = rng.gen_range(1..=6);
        let g = common::random_subgroup(&mut rng, p + 1);
        let levels: &[SubdivisionLevel] = if p <= 4 {
            &[SubdivisionLevel::Once, SubdivisionLevel::Twice]
        } else {
            &[SubdivisionLevel::Once]
        };
        for &level in levels {
            let cx = build(p, &g, level).map_err(|e| e.to_string())?;
            cx.check_boundary_squared().map_err(|e| format!("(a) {e}"))?;
            let h = cx.reduced_homology().map_err(|e| e.to_string())?;
            let counts = orbit_counts(&cx);
            let chi: i64 = counts.iter().enumerate().map(|(k, &c)| (-1i64).pow(k as u32) * c as i64).sum();
            let ranks: i64 = h.iter().enumerate().map(|(k, g)| (-1i64).pow(k as u32) * g.rank as i64).sum();
            ensure(chi - 1 == ranks, || format!("(b) p = {p}, counts {counts:?}, homology {h:?}"))?;
            built += 1;
        }
    }
    // (c)
    let no_shortcut = |level| SphereQuotientOptions { level, shortcut: false };
    for i in 0..100 {
        let p = 1 + i % 6;
        let g = common::random_subgroup_with_transposition(&mut rng, p + 1);
        let h = reduced_sphere_quotient_homology(p, &g, no_shortcut(SubdivisionLevel::Once)).map_err(|e| e.to_string())?;
        ensure(h.iter().all(HomologyGroup::is_zero), || format!("(c) p = {p}: {h:?}"))?;
    }
    // (d): fixed test groups plus random ones
    let mut level_cases: Vec<(usize, PermGroup)> = [
        (3, "(0 1 2 3)"),
        (4, "(0 1 2 3)"),
        (5, "(0 1)(2 3)(4 5)"),
        (5, "(0 1 2)(3 4 5)"),
        (3, "(0 1)(2 3)"),
    ]
    .iter()
    .map(|&(p, s)| (p, group(p, s)))
    .collect();
    level_cases.push((5, named::complete_k4().edge_group().unwrap()));
    for i in 0..25 {
        let p = 1 + i % 5;
        level_cases.push((p, common::random_subgroup(&mut rng, p + 1)));
    }
    for (p, g) in &level_cases {
        let a = reduced_sphere_quotient_homology(*p, g, no_shortcut(SubdivisionLevel::Once)).map_err(|e| e.to_string())?;
        let b = reduced_sphere_quotient_homology(*p, g, no_shortcut(SubdivisionLevel::Twice)).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("(d) p = {p}: level 1 {a:?}, level 2 {b:?}"))?;
    }
    // (e)
    for _ in 0..500 {
        let data = common::random_matrix(&mut rng, 6, 9);
        let m = BoundaryMatrix::from_dense(&data).unwrap();
        ensure(smith_diagonal(&m) == common::determinantal_diagonal(&data), || format!("(e) {data:?}"))?;
    }
    Ok(format!(
        "(a,b) {built} complexes, (c) 100 groups, (d) {} groups, (e) 500 matrices",
        level_cases.len()
    ))
}

fn criterion_7() -> Outcome {
    let counts: Vec<usize> = (2..=4)
        .map(|g| relative_cells(g, 0).map(|c| c.len()))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    ensure(counts == [0, 1, 3], || format!("non-bm counts {counts:?}"))?;
    let mut types = 0;
    for g in 1..=4 {
        for n in 0..=2 {
            if check_stable_type(g, n).is_err() {
                continue;
            }
            types += 1;
            ensure(check_one_skeleton(g, n).map_err(|e| e.to_string())?, || format!("skeleton ({g}, {n})"))?;
            for graph in enumerate(g, n).map_err(|e| e.to_string())?.iter().filter(|x| in_bm(x) && x.num_edges() >= 2) {
                for e in 0..graph.num_edges() {
                    let c = graph.contract(e).map_err(|e| e.to_string())?;
                    ensure(in_bm(&c), || format!("bm closure ({g}, {n}): {} edge {e}", graph.to_json()))?;
                }
            }
        }
    }
    for (name, graph, frozen) in [
        ("K4", named::complete_k4(), 24),
        ("pyramid", named::square_pyramid(), 8),
        ("prism", named::triangular_prism(), 12),
        ("K33", named::complete_bipartite_k33(), 72),
    ] {
        let oracle = common::brute_force_edge_group_order(&graph);
        let order = graph.edge_group().map_err(|e| e.to_string())?.order();
        ensure(oracle == frozen && order == frozen, || format!("{name}: oracle {oracle}, computed {order}"))?;
    }
    Ok(format!("non-bm 0/1/3; skeleton and bm closure for {types} types; |Aut| 24/8/12/72"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        (1, "sphere-quotient table", criterion_1),
        (2, "Δ3 pipeline", criterion_2),
        (3, "Δ4 pipeline", criterion_3),
        (4, "Δ2 pipeline", criterion_4),
        (5, "examples regression", criterion_5),
        (6, "property suite", criterion_6),
        (7, "combinatorial checks", criterion_7),
    ];
    let mut failed = 0;
    for (id, name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(note) => println!("criterion {id} [PRIMARY] {name}: PASS (tolerance {TOLERANCE}; {secs:.1}s) {note}"),
            Err(why) => {
                failed += 1;
                println!("criterion {id} [PRIMARY] {name}: FAIL (tolerance {TOLERANCE}; {secs:.1}s) {why}");
            }
        }
    }
    println!("acceptance: {} of 7 criteria passed", 7 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
