//! Human-readable tables. Homology is printed as `H̃₄ = ℤ/4ℤ`.

use std::fmt::Write;

use symdelta::spectral::DeltaReport;
use symdelta::stablegraphs::GraphFile;

use crate::selftest::{SelftestReport, Status};
use crate::{EnumerationReport, SkeletonReport, SphereQuotientReport};

pub fn subscript(n: i64) -> String {
    const DIGITS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    let mut s: String = n.unsigned_abs().to_string().chars().map(|c| DIGITS[c as usize - '0' as usize]).collect();
    if n < 0 {
        s.insert(0, '₋');
    }
    s
}

fn describe_graph(g: &GraphFile) -> String {
    let weights: Vec<u32> = g.vertices.iter().map(|v| v.weight).collect();
    let edges: Vec<String> = g.edges.iter().map(|[a, b]| format!("{a}-{b}")).collect();
    let mut s = format!("weights {weights:?}, edges [{}]", edges.join(" "));
    if !g.markings.is_empty() {
        let _ = write!(s, ", markings {:?}", g.markings);
    }
    s
}

pub fn sphere_quotient(r: &SphereQuotientReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "S^{}/G, |G| = {} ({} {}), subdivision level {}",
        r.p.saturating_sub(1),
        r.group.order,
        r.group.source,
        if r.group.generators.is_empty() { "()".to_string() } else { r.group.generators.join(", ") },
        r.level
    );
    if r.shortcut {
        let _ = writeln!(s, "group contains a transposition: quotient is contractible");
    } else {
        let _ = writeln!(s, "orbit counts {:?}", r.orbit_counts);
    }
    if r.cross_checked {
        let _ = writeln!(s, "levels 1 and 2 agree");
    }
    for (k, h) in r.reduced_homology.iter().enumerate() {
        let _ = writeln!(s, "H̃{} = {h}", subscript(k as i64));
    }
    s
}

pub fn enumeration(r: &EnumerationReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "stable graphs of type ({}, {}): {} ({} outside bm)", r.g, r.n, r.count, r.non_bm);
    for e in &r.graphs {
        let _ = writeln!(
            s,
            "#{:<5} E={} V={} {}  {}",
            e.id,
            e.edges,
            e.vertices,
            if e.in_bm { "bm " } else { "rel" },
            describe_graph(&e.graph)
        );
    }
    s
}

pub fn skeleton(r: &SkeletonReport) -> String {
    format!(
        "({}, {}): {} graphs with at most 2 edges; 1-skeleton {} the bm subcomplex\n",
        r.g,
        r.n,
        r.graphs_checked,
        if r.one_skeleton_in_bm { "lies in" } else { "is NOT contained in" }
    )
}

pub fn delta(r: &DeltaReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "Δ_{{{},{}}}: {} cell(s) outside bm", r.g, r.n, r.relative_cells.len());
    for c in &r.relative_cells {
        let _ = writeln!(s, "  cell {}: p = {}, |G| = {}, {}", c.id, c.p, c.group_order, describe_graph(&c.graph));
    }
    let _ = writeln!(s, "E₁ page, nonzero entries:");
    for e in &r.e1 {
        let groups: Vec<String> = e.groups.iter().map(|g| g.to_string()).collect();
        let _ = writeln!(s, "  E₁^{{{},{}}} = {}", e.p, e.q, groups.join(" ⊕ "));
    }
    let c = &r.certified;
    let _ = writeln!(s, "certified:");
    let zero: Vec<String> = c.zero.iter().map(|k| k.to_string()).collect();
    let _ = writeln!(s, "  H̃ₖ = 0 for k ∈ {{{}}}", zero.join(", "));
    for (k, h) in &c.exact {
        let _ = writeln!(s, "  H̃{} = {h}", subscript(*k as i64));
    }
    for (k, primes) in &c.torsion {
        for ell in primes {
            let exp = c
                .certificates
                .iter()
                .find(|x| x.degree == *k && x.prime == *ell)
                .map_or(1, |x| x.exponent);
            let _ = writeln!(s, "  H̃{} contains {ell}-torsion ({ell}-part of order ≥ {ell}^{exp})", subscript(*k as i64));
        }
    }
    for (k, rank) in c.free_rank_at_least.iter().filter(|(k, _)| !c.exact.contains_key(k)) {
        let _ = writeln!(s, "  H̃{} has free rank ≥ {rank}", subscript(*k as i64));
    }
    if !c.undetermined.is_empty() {
        let und: Vec<String> = c.undetermined.iter().map(|k| k.to_string()).collect();
        let _ = writeln!(s, "  undetermined: k ∈ {{{}}}", und.join(", "));
    }
    for cert in &c.certificates {
        let _ = writeln!(s, "certificate for {}-torsion in H̃{}:", cert.prime, subscript(cert.degree as i64));
        for step in &cert.steps {
            let _ = writeln!(s, "    {step}");
        }
    }
    s
}

pub fn selftest(r: &SelftestReport) -> String {
    let mut s = String::new();
    for c in &r.cases {
        let tag = match c.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        };
        let _ = write!(s, "{tag} {} ({:.2}s)", c.name, c.seconds);
        if !c.detail.is_empty() {
            let _ = write!(s, ": {}", c.detail);
        }
        s.push('\n');
    }
    let _ = writeln!(s, "{} passed, {} failed, {} skipped", r.passed, r.failed, r.skipped);
    s
}
