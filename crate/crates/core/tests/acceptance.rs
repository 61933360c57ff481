//! Acceptance suite. Runs each criterion in turn, prints one PASS/FAIL line
//! per criterion and exits non-zero if any failed.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use weid::cm::{depth_monomial, is_cm_reisner, CmOptions};
use weid::criteria;
use weid::decompose::symbolic_power;
use weid::graph::WeightedGraph;
use weid::harness::sweep::{InstanceRecord, SweepReport};
use weid::harness::{generate, sweep_instances, Family, Instance, OracleChoice, SweepSpec};
use weid::{Monomial, MonomialIdeal, Ring};

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(failures: &[String], summary: String) -> Self {
        let mut detail = summary;
        for f in failures.iter().take(5) {
            detail.push_str("\n    ");
            detail.push_str(f);
        }
        if failures.len() > 5 {
            detail.push_str(&format!("\n    ... and {} more", failures.len() - 5));
        }
        Outcome { pass: failures.is_empty(), detail }
    }
}

/// Sweeps run by earlier criteria, reused by the decomposition and
/// metamorphic criteria.
#[derive(Default)]
struct Sweeps {
    reports: Vec<(&'static str, SweepReport)>,
}

impl Sweeps {
    fn run(&mut self, name: &'static str, spec: &SweepSpec, instances: &[Instance]) -> &SweepReport {
        let report = sweep_instances(spec, instances).expect("sweep");
        self.reports.push((name, report));
        &self.reports.last().unwrap().1
    }
}

fn spec(family: Family, max_weight: u32, max_power: u32, oracle: OracleChoice) -> SweepSpec {
    let mut s = SweepSpec::new(family);
    s.params.max_weight = max_weight;
    s.max_power = max_power;
    s.oracle = oracle;
    s
}

fn sweep_failures(report: &SweepReport) -> Vec<String> {
    let mut out: Vec<String> = report
        .discrepancies
        .iter()
        .map(|d| format!("instance {} {} n={:?}: {}", d.instance, d.kind, d.n, d.detail))
        .collect();
    if report.summary.required_budget_failures > 0 {
        out.push(format!("{} depth verdicts ran out of budget", report.summary.required_budget_failures));
    }
    out
}

fn verdicts(rec: &InstanceRecord) -> Vec<(u32, Option<bool>)> {
    rec.powers.iter().map(|p| (p.n, p.is_cm)).collect()
}

/// (k, p, q): middle weight and the two pendant weights of a path on four vertices.
fn path3_weights(g: &WeightedGraph) -> (u32, u32, u32) {
    let mut k = 0;
    let mut pendants = Vec::new();
    for (u, v, w) in g.edges() {
        if g.degree(u) == 2 && g.degree(v) == 2 {
            k = w;
        } else {
            pendants.push(w);
        }
    }
    assert!(k > 0 && pendants.len() == 2, "not a path on four vertices");
    (k, pendants[0], pendants[1])
}

fn path3_equivalence(sweeps: &mut Sweeps) -> Outcome {
    let s = spec(Family::Path3, 4, 3, OracleChoice::Both);
    let instances = generate(Family::Path3, &s.params).unwrap();
    let report = sweeps.run("path3", &s, &instances);
    let mut failures = sweep_failures(report);
    let mut good = 0;
    for (inst, rec) in instances.iter().zip(&report.instances) {
        let (k, p, q) = path3_weights(&inst.graph);
        let predicted = p.min(q) >= 2 * k;
        let v = verdicts(rec);
        if v.iter().any(|(_, c)| c.is_none()) {
            failures.push(format!("k={k} p={p} q={q}: undecided verdict {v:?}"));
            continue;
        }
        let all_cm = v.iter().all(|(_, c)| *c == Some(true));
        let late_failure = v.iter().any(|(n, c)| (2..=3).contains(n) && *c == Some(false));
        if all_cm != predicted || (!predicted && !late_failure) {
            failures.push(format!("k={k} p={p} q={q}: verdicts {v:?}"));
        }
        good += usize::from(predicted);
    }
    let summary = format!("{} instances, {good} with min(p,q) >= 2k", instances.len());
    Outcome::new(&failures, summary)
}

fn square_equivalence(sweeps: &mut Sweeps) -> Outcome {
    let mut s = spec(Family::VwcEnum, 3, 2, OracleChoice::Depth);
    s.params.min_t = 1;
    s.params.max_t = 3;
    let instances = generate(Family::VwcEnum, &s.params).unwrap();
    let report = sweeps.run("vwc-enum", &s, &instances);
    let mut failures = sweep_failures(report);
    let mut holds = 0;
    for (inst, rec) in instances.iter().zip(&report.instances) {
        let Some(labeling) = &inst.labeling else {
            failures.push(format!("instance {} has no labeling", rec.index));
            continue;
        };
        if !inst.graph.is_very_well_covered().unwrap() {
            failures.push(format!("instance {} is not very well-covered", rec.index));
        }
        let predicted = criteria::square_cm_criterion(&inst.graph, labeling).unwrap().holds;
        let oracle = rec.powers.iter().find(|p| p.n == 2).and_then(|p| p.is_cm);
        if oracle != Some(predicted) {
            failures.push(format!("instance {}: criterion {predicted}, oracle {oracle:?}", rec.index));
        }
        holds += usize::from(predicted);
    }
    let summary = format!("{} weighted graphs, {holds} with CM square", instances.len());
    Outcome::new(&failures, summary)
}

fn star_forward(sweeps: &mut Sweeps) -> Outcome {
    let s = spec(Family::StarCore, 5, 3, OracleChoice::Both);
    let all = generate(Family::StarCore, &s.params).unwrap();
    let total = all.len();
    let instances: Vec<Instance> = all
        .into_iter()
        .filter(|i| {
            let m = i.matching.as_ref().expect("star instances carry their matching");
            criteria::star_all_n(&i.graph, m).unwrap().holds
        })
        .collect();
    let report = sweeps.run("star-core", &s, &instances);
    let mut failures = sweep_failures(report);
    if instances.is_empty() {
        failures.push("no instance satisfies the conditions".into());
    }
    for rec in &report.instances {
        for p in &rec.powers {
            if p.is_cm != Some(true) || !p.unmixed {
                failures.push(format!(
                    "instance {} n={}: cm {:?}, unmixed {}",
                    rec.index, p.n, p.is_cm, p.unmixed
                ));
            }
        }
    }
    let summary = format!("{} of {total} star instances satisfy the conditions", instances.len());
    Outcome::new(&failures, summary)
}

fn pqr_witness() -> Outcome {
    let g = WeightedGraph::from_edges(
        &["a", "b", "c", "x", "y", "z"],
        &[("a", "b", 1), ("b", "c", 1), ("a", "x", 2), ("b", "y", 2), ("c", "z", 2)],
    )
    .unwrap();
    let mut failures = Vec::new();
    let n0 = criteria::dif_non_cm_threshold(&g).unwrap();
    if n0 != 4 {
        failures.push(format!("threshold {n0}, expected 4"));
    }
    let ideal = g.edge_ideal().unwrap().power(4).unwrap();
    match depth_monomial(&ideal, &CmOptions::default()) {
        Ok(v) if !v.is_cm => {}
        Ok(v) => failures.push(format!("depth route reports CM at n=4 (depth {:?}, dim {})", v.depth, v.dim)),
        Err(e) => failures.push(format!("depth route failed: {e}")),
    }
    Outcome::new(&failures, format!("threshold {n0}, n=4 checked"))
}

fn complete_core(sweeps: &mut Sweeps) -> Outcome {
    let s = spec(Family::CompleteCore, 3, 2, OracleChoice::Both);
    let instances = generate(Family::CompleteCore, &s.params).unwrap();
    let report = sweeps.run("complete-core", &s, &instances);
    let mut failures = sweep_failures(report);
    let mut unit_pendant = 0;
    for (inst, rec) in instances.iter().zip(&report.instances) {
        let m = inst.matching.as_ref().expect("complete-core instances carry their matching");
        let predicted = criteria::complete_core_all_n(&inst.graph, m).unwrap().holds;
        let v = verdicts(rec);
        let all_cm = v.iter().all(|(_, c)| *c == Some(true));
        if v.iter().any(|(_, c)| c.is_none()) || all_cm != predicted {
            failures.push(format!("instance {}: predicate {predicted}, verdicts {v:?}", rec.index));
        }
        if (0..m.t()).any(|i| m.pendant_weight(&inst.graph, i) == 1) {
            unit_pendant += 1;
            if !v.contains(&(2, Some(false))) {
                failures.push(format!("instance {} has a unit pendant but verdicts {v:?}", rec.index));
            }
        }
    }
    let summary = format!("{} instances, {unit_pendant} with a unit pendant", instances.len());
    Outcome::new(&failures, summary)
}

fn random_ideal(rng: &mut ChaCha8Rng) -> MonomialIdeal {
    let nvars = rng.gen_range(1..=5);
    let names: Vec<String> = (1..=nvars).map(|i| format!("x{i}")).collect();
    let ring = Ring::new(&names).unwrap();
    let ngens = rng.gen_range(1..=5);
    let gens = (0..ngens)
        .map(|_| loop {
            let exps: Vec<u32> = (0..nvars).map(|_| rng.gen_range(0..=3)).collect();
            if exps.iter().any(|&e| e > 0) {
                break Monomial::from_exponents(exps);
            }
        })
        .collect();
    MonomialIdeal::new(ring, gens).unwrap()
}

fn oracle_agreement() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let options = CmOptions::default();
    let mut failures = Vec::new();
    let mut cm = 0;
    for case in 0..200 {
        let ideal = random_ideal(&mut rng);
        let gens: Vec<String> = ideal.generators().iter().map(|g| g.display(ideal.ring()).to_string()).collect();
        match (is_cm_reisner(&ideal, &options), depth_monomial(&ideal, &options)) {
            (Ok(a), Ok(b)) if a.is_cm == b.is_cm => cm += usize::from(a.is_cm),
            (Ok(a), Ok(b)) => failures.push(format!("case {case} {gens:?}: reisner {}, depth {}", a.is_cm, b.is_cm)),
            (a, b) => failures.push(format!("case {case} {gens:?}: {:?} / {:?}", a.err(), b.err())),
        }
    }
    Outcome::new(&failures, format!("200 ideals, {cm} Cohen-Macaulay"))
}

fn decomposition_soundness(sweeps: &Sweeps) -> Outcome {
    let mut failures = Vec::new();
    let mut ideals = 0;
    for (name, report) in &sweeps.reports {
        ideals += report.summary.powers_checked;
        for d in &report.discrepancies {
            if d.kind == "decomposition" || d.kind == "vertex-covers" {
                failures.push(format!("{name} instance {} n={:?}: {}", d.instance, d.n, d.detail));
            }
        }
    }
    if ideals == 0 {
        failures.push("no sweep ideals were checked".into());
    }
    Outcome::new(&failures, format!("{ideals} ideals across {} sweeps", sweeps.reports.len()))
}

fn symbolic_identity() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for k in 1..=4u32 {
        for p in 1..=4u32 {
            for q in 1..=4u32 {
                if p.min(q) < 2 * k {
                    continue;
                }
                let g = WeightedGraph::from_edges(
                    &["a", "b", "x", "y"],
                    &[("a", "b", k), ("a", "x", p), ("b", "y", q)],
                )
                .unwrap();
                let ideal = g.edge_ideal().unwrap();
                for n in 1..=3 {
                    let power = ideal.power(n).unwrap();
                    let symbolic = symbolic_power(&ideal, n).unwrap();
                    if power != symbolic {
                        failures.push(format!("k={k} p={p} q={q} n={n}: power differs from symbolic power"));
                    }
                    checked += 1;
                }
            }
        }
    }
    Outcome::new(&failures, format!("{checked} (instance, n) pairs"))
}

fn metamorphic(sweeps: &Sweeps) -> Outcome {
    let mut failures = Vec::new();
    let mut checks = 0;
    for (name, report) in &sweeps.reports {
        checks += report.summary.metamorphic_checks;
        for d in &report.discrepancies {
            if d.kind.starts_with("metamorphic:") {
                failures.push(format!("{name} instance {} {} n={:?}: {}", d.instance, d.kind, d.n, d.detail));
            }
        }
    }
    // Trees exercise the pendant and deletion relations beyond the fixed families.
    let mut s = spec(Family::Tree, 3, 2, OracleChoice::Depth);
    s.params.max_t = 4;
    s.params.samples = 60;
    s.params.seed = 7;
    let instances = generate(Family::Tree, &s.params).unwrap();
    let report = sweep_instances(&s, &instances).unwrap();
    checks += report.summary.metamorphic_checks;
    for d in &report.discrepancies {
        if d.kind.starts_with("metamorphic:") {
            failures.push(format!("tree instance {} {} n={:?}: {}", d.instance, d.kind, d.n, d.detail));
        }
    }
    if checks == 0 {
        failures.push("no metamorphic checks ran".into());
    }
    Outcome::new(&failures, format!("{checks} relation checks"))
}

fn main() -> ExitCode {
    let mut sweeps = Sweeps::default();
    let mut all_pass = true;
    let mut report = |id: u32, name: &str, run: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let o = run();
        let secs = start.elapsed().as_secs_f64();
        all_pass &= o.pass;
        println!("{} {id} {name} ({secs:.1}s): {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    };
    report(1, "path3 equivalence", &mut || path3_equivalence(&mut sweeps));
    report(2, "square equivalence on very well-covered graphs", &mut || square_equivalence(&mut sweeps));
    report(3, "star cores are CM and unmixed", &mut || star_forward(&mut sweeps));
    report(4, "pqr caterpillar fails at n=4", &mut pqr_witness);
    report(5, "complete cores", &mut || complete_core(&mut sweeps));
    report(6, "Reisner and depth routes agree", &mut oracle_agreement);
    report(7, "decomposition soundness", &mut || decomposition_soundness(&sweeps));
    report(8, "symbolic power identity on path3", &mut symbolic_identity);
    report(9, "metamorphic relations", &mut || metamorphic(&sweeps));
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
