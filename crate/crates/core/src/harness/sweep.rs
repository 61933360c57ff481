//! Oracle-versus-criteria sweeps over generated families.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cm::{self, CmOptions, CmVerdict, Method};
use crate::criteria::{self, CriterionReport, PnBound};
use crate::decompose;
use crate::error::{Error, Result};
use crate::graph::{self, GraphJson, PendantMatching, VwcLabeling, WeightedGraph};
use crate::harness::generate::{generate, Family, GenParams, Instance};
use crate::homology::FieldConfig;
use crate::monomial::{MonomialIdeal, VarSet};

/// Which oracles a sweep runs. The depth route always decides; the Reisner
/// route is a cross-check within its own budget.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleChoice {
    Depth,
    Both,
}

impl FromStr for OracleChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "depth" => Ok(OracleChoice::Depth),
            "both" => Ok(OracleChoice::Both),
            _ => Err(Error::Invalid(format!("unknown oracle choice {s:?}, expected depth or both"))),
        }
    }
}

impl fmt::Display for OracleChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OracleChoice::Depth => "depth",
            OracleChoice::Both => "both",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub family: Family,
    pub params: GenParams,
    pub max_power: u32,
    pub oracle: OracleChoice,
    pub field: FieldConfig,
    pub face_budget: u64,
    pub monomial_budget: u64,
    /// Face budget of the Reisner cross-check.
    pub reisner_budget: u64,
    pub metamorphic: bool,
    /// Record wall-clock times (makes reports differ between runs).
    pub timings: bool,
}

impl SweepSpec {
    pub fn new(family: Family) -> Self {
        SweepSpec {
            family,
            params: GenParams::default(),
            max_power: 3,
            oracle: OracleChoice::Both,
            field: FieldConfig::Rationals,
            face_budget: cm::DEFAULT_FACE_BUDGET,
            monomial_budget: cm::DEFAULT_MONOMIAL_BUDGET,
            reisner_budget: 1 << 20,
            metamorphic: true,
            timings: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.max_power == 0 {
            return Err(Error::Invalid("the power cap must be positive".into()));
        }
        if self.face_budget == 0 || self.monomial_budget == 0 || self.reisner_budget == 0 {
            return Err(Error::Invalid("budgets must be positive".into()));
        }
        Ok(())
    }

    pub(crate) fn depth_options(&self) -> CmOptions {
        CmOptions {
            field: self.field,
            face_budget: self.face_budget,
            monomial_budget: self.monomial_budget,
            ..CmOptions::default()
        }
    }

    pub(crate) fn reisner_options(&self) -> CmOptions {
        CmOptions { face_budget: self.reisner_budget, ..self.depth_options() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunStatus {
    Cm,
    NotCm,
    Budget,
    Error,
}

/// One oracle run, as recorded in reports.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleRun {
    pub method: Method,
    pub status: RunStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<BTreeMap<String, u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<f64>,
}

impl OracleRun {
    pub fn is_cm(&self) -> Option<bool> {
        match self.status {
            RunStatus::Cm => Some(true),
            RunStatus::NotCm => Some(false),
            _ => None,
        }
    }

    pub(crate) fn run(ideal: &MonomialIdeal, method: Method, options: &CmOptions, timed: bool) -> Self {
        let start = Instant::now();
        let result = cm::check_cm(ideal, method, options);
        let millis = timed.then(|| start.elapsed().as_secs_f64() * 1e3);
        OracleRun::from_result(ideal, method, result, millis)
    }

    fn from_result(ideal: &MonomialIdeal, method: Method, result: Result<CmVerdict>, millis: Option<f64>) -> Self {
        match result {
            Ok(v) => OracleRun {
                method,
                status: if v.is_cm { RunStatus::Cm } else { RunStatus::NotCm },
                depth: v.depth,
                dim: Some(v.dim),
                witness: v.witness.as_ref().map(|w| w.to_map(ideal.ring())),
                detail: v.failure,
                millis,
            },
            Err(e) => OracleRun {
                method,
                status: if e.is_budget() { RunStatus::Budget } else { RunStatus::Error },
                depth: None,
                dim: None,
                witness: None,
                detail: Some(e.to_string()),
                millis,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PowerRecord {
    pub n: u32,
    pub depth: OracleRun,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reisner: Option<OracleRun>,
    /// The verdict used for comparisons (depth route, else Reisner).
    pub is_cm: Option<bool>,
    pub unmixed: bool,
}

/// A prediction derived from a criterion: `I^n` is (not) Cohen-Macaulay.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Expectation {
    pub source: String,
    pub n: u32,
    pub cm: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InstanceRecord {
    pub index: usize,
    pub graph: GraphJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labeling: Option<Vec<(String, String)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matching: Option<Vec<(String, String)>>,
    pub criteria: Vec<CriterionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pn_bound: Option<PnBound>,
    pub expectations: Vec<Expectation>,
    pub powers: Vec<PowerRecord>,
    pub metamorphic_checks: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub budget_skips: Vec<String>,
    /// One-way criteria whose predicted failure did not show up for `n ≤ N`.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub unwitnessed: Vec<String>,
    #[serde(skip)]
    pub required_budget_failures: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Discrepancy {
    pub instance: usize,
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    pub detail: String,
    pub graph: GraphJson,
    /// Both oracle transcripts for `I^n` (re-runnable with `check-cm`).
    pub transcripts: Vec<OracleRun>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub holds: usize,
    pub fails: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SweepSummary {
    pub instances: usize,
    pub powers_checked: usize,
    pub cm: usize,
    pub not_cm: usize,
    pub reisner_confirmed: usize,
    pub discrepancies: usize,
    pub budget_skips: usize,
    pub required_budget_failures: usize,
    pub unwitnessed: usize,
    pub metamorphic_checks: usize,
    pub criteria: BTreeMap<String, Tally>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub spec: SweepSpec,
    pub summary: SweepSummary,
    pub discrepancies: Vec<Discrepancy>,
    pub instances: Vec<InstanceRecord>,
}

impl SweepReport {
    /// 0 when clean, 2 when a discrepancy was found, 3 when a required
    /// (depth-route) verdict ran out of budget.
    pub fn exit_code(&self) -> i32 {
        if !self.discrepancies.is_empty() {
            2
        } else if self.summary.required_budget_failures > 0 {
            3
        } else {
            0
        }
    }
}

pub fn sweep(spec: &SweepSpec) -> Result<SweepReport> {
    spec.validate()?;
    let instances = generate(spec.family, &spec.params)?;
    sweep_instances(spec, &instances)
}

/// Evaluates the given instances in parallel and merges them in input order.
pub fn sweep_instances(spec: &SweepSpec, instances: &[Instance]) -> Result<SweepReport> {
    spec.validate()?;
    let results: Vec<(InstanceRecord, Vec<Discrepancy>)> = instances
        .par_iter()
        .enumerate()
        .map(|(i, inst)| evaluate_instance(i, inst, spec))
        .collect::<Result<_>>()?;
    let mut summary = SweepSummary { instances: results.len(), ..SweepSummary::default() };
    let mut records = Vec::with_capacity(results.len());
    let mut discrepancies = Vec::new();
    for (rec, disc) in results {
        summary.powers_checked += rec.powers.len();
        for p in &rec.powers {
            match p.is_cm {
                Some(true) => summary.cm += 1,
                Some(false) => summary.not_cm += 1,
                None => {}
            }
            if p.reisner.as_ref().and_then(OracleRun::is_cm).is_some() {
                summary.reisner_confirmed += 1;
            }
        }
        summary.budget_skips += rec.budget_skips.len();
        summary.required_budget_failures += rec.required_budget_failures;
        summary.unwitnessed += rec.unwitnessed.len();
        summary.metamorphic_checks += rec.metamorphic_checks;
        for c in &rec.criteria {
            let t = summary.criteria.entry(c.theorem.clone()).or_default();
            if c.holds {
                t.holds += 1;
            } else {
                t.fails += 1;
            }
        }
        discrepancies.extend(disc);
        records.push(rec);
    }
    summary.discrepancies = discrepancies.len();
    Ok(SweepReport { spec: spec.clone(), summary, discrepancies, instances: records })
}

/// The (*) labeling to use: the generated one, else a search on graphs that
/// are very well-covered.
pub(crate) fn vwc_labeling(inst: &Instance) -> Option<VwcLabeling> {
    if let Some(l) = &inst.labeling {
        return Some(l.clone());
    }
    let g = &inst.graph;
    if g.len() > graph::MAX_VWC_VERTICES || !g.is_very_well_covered().unwrap_or(false) {
        return None;
    }
    graph::find_vwc_labeling(g)
}

fn pendant(inst: &Instance) -> Option<PendantMatching> {
    inst.matching
        .clone()
        .or_else(|| graph::pendant_matching(&inst.graph))
        .filter(|m| m.validate(&inst.graph).is_ok())
}

/// Criteria that apply to the instance, with the verdict predictions they make.
pub(crate) struct Predictions {
    pub reports: Vec<CriterionReport>,
    pub pn: Option<PnBound>,
    pub expectations: Vec<Expectation>,
    /// Criteria that predict non-CM for some unspecified `n`.
    pub eventually_not_cm: Vec<String>,
    /// Star criterion holds: every power is unmixed.
    pub unmixed_chain: bool,
}

pub(crate) fn predictions(inst: &Instance, max_power: u32) -> Result<Predictions> {
    let g = &inst.graph;
    let mut p = Predictions {
        reports: Vec::new(),
        pn: None,
        expectations: Vec::new(),
        eventually_not_cm: Vec::new(),
        unmixed_chain: false,
    };
    let all_n = 1..=max_power;
    let expect = |p: &mut Predictions, source: &str, ns: &mut dyn Iterator<Item = u32>, cm: bool| {
        for n in ns {
            p.expectations.push(Expectation { source: source.into(), n, cm });
        }
    };

    if let Some(l) = vwc_labeling(inst) {
        let sq = criteria::square_cm_criterion(g, &l)?;
        if max_power >= 2 {
            expect(&mut p, "square-cm", &mut std::iter::once(2), sq.holds);
        }
        p.reports.push(sq);
        let mut best = 0;
        for ell in 1..=max_power {
            if criteria::power_ell_criterion(g, &l, ell)?.holds {
                best = ell;
            } else {
                break;
            }
        }
        if best > 0 {
            let rep = criteria::power_ell_criterion(g, &l, best)?;
            expect(&mut p, &format!("power-ell-cm:{best}"), &mut (1..=best), true);
            p.reports.push(CriterionReport { theorem: format!("power-ell-cm:{best}"), ..rep });
        }
    }

    let matching = pendant(inst);
    if let Some(m) = &matching {
        let k = criteria::pn_bound(g, m)?;
        p.pn = Some(k);
        expect(&mut p, "pendant-bound", &mut all_n.clone().filter(|&n| k.covers(n as u64)), true);
    }

    if g.len() == 4 && g.edge_count() == 3 && g.is_tree() && (0..4).any(|v| g.degree(v) == 2) {
        if let Ok(rep) = criteria::path3_all_n(g) {
            if rep.holds {
                expect(&mut p, "path3-all-powers", &mut all_n.clone(), true);
            } else {
                expect(&mut p, "path3-all-powers", &mut all_n.clone().filter(|&n| n >= 2), false);
            }
            p.reports.push(rep);
        }
    }

    if let Some(m) = &matching {
        let core = graph::core(g, m)?;
        if g.is_tree() {
            let rep = criteria::tree_necessary(g, m)?;
            if !rep.holds {
                p.eventually_not_cm.push(rep.theorem.clone());
            }
            p.reports.push(rep);
        }
        if core.len() >= 2 && g.is_tree() && graph::is_star(&core) {
            let rep = criteria::star_all_n(g, m)?;
            if rep.holds {
                expect(&mut p, "star-core-all-powers", &mut all_n.clone(), true);
                p.unmixed_chain = true;
            } else {
                p.eventually_not_cm.push(rep.theorem.clone());
            }
            p.reports.push(rep);
        }
        let unit_core = core.edges().iter().all(|e| e.2 == 1);
        if core.len() >= 2 && core.is_complete() && unit_core && g.is_connected() {
            let rep = criteria::complete_core_all_n(g, m)?;
            if rep.holds {
                expect(&mut p, "complete-core-all-powers", &mut all_n.clone(), true);
            } else {
                expect(&mut p, "complete-core-all-powers", &mut all_n.clone().filter(|&n| n >= 2), false);
            }
            p.reports.push(rep);
        }
        if let Ok(n0) = criteria::dif_non_cm_threshold(g) {
            let lo = u32::try_from(n0).unwrap_or(u32::MAX);
            expect(&mut p, &format!("equal-core-weights:n0={n0}"), &mut all_n.clone().filter(|&n| n >= lo), false);
        }
    }
    Ok(p)
}

fn evaluate_instance(index: usize, inst: &Instance, spec: &SweepSpec) -> Result<(InstanceRecord, Vec<Discrepancy>)> {
    let g = &inst.graph;
    let base = g.edge_ideal()?;
    let pred = predictions(inst, spec.max_power)?;
    let depth_opts = spec.depth_options();
    let reisner_opts = spec.reisner_options();
    let mut rec = InstanceRecord {
        index,
        graph: g.to_json(),
        labeling: vwc_labeling(inst).map(|l| l.to_names(g)),
        matching: pendant(inst).map(|m| m.to_names(g)),
        criteria: pred.reports.clone(),
        pn_bound: pred.pn,
        expectations: pred.expectations.clone(),
        powers: Vec::new(),
        metamorphic_checks: 0,
        budget_skips: Vec::new(),
        unwitnessed: Vec::new(),
        required_budget_failures: 0,
    };
    let mut disc = Vec::new();
    let push = |disc: &mut Vec<Discrepancy>, kind: &str, n: Option<u32>, detail: String, runs: Vec<OracleRun>| {
        disc.push(Discrepancy {
            instance: index,
            kind: kind.into(),
            n,
            detail,
            graph: g.to_json(),
            transcripts: runs,
        });
    };

    // Associated primes of the squarefree edge ideal are the minimal vertex covers.
    let mut ass: Vec<u128> = decompose::associated_primes(&base.radical())?.into_iter().map(|s| s.0).collect();
    ass.sort_unstable();
    let mut covers: Vec<u128> = g.minimal_vertex_covers().into_iter().map(|c| c as u128).collect();
    covers.sort_unstable();
    if ass != covers {
        push(&mut disc, "vertex-covers", None, format!("Ass = {ass:?}, covers = {covers:?}"), Vec::new());
    }

    for n in 1..=spec.max_power {
        let ideal = base.power(n)?;
        let depth = OracleRun::run(&ideal, Method::Depth, &depth_opts, spec.timings);
        if depth.status == RunStatus::Error {
            return Err(Error::Domain(format!(
                "depth route failed on instance {index} at n = {n}: {}",
                depth.detail.clone().unwrap_or_default()
            )));
        }
        if depth.status == RunStatus::Budget {
            rec.budget_skips.push(format!("depth n={n}: {}", depth.detail.clone().unwrap_or_default()));
            rec.required_budget_failures += 1;
        }
        let reisner = (spec.oracle == OracleChoice::Both).then(|| {
            OracleRun::run(&ideal, Method::Reisner, &reisner_opts, spec.timings)
        });
        if let Some(r) = &reisner {
            if r.status == RunStatus::Budget {
                rec.budget_skips.push(format!("reisner n={n}"));
            }
            if r.status == RunStatus::Error {
                push(&mut disc, "oracle-error", Some(n), r.detail.clone().unwrap_or_default(), vec![depth.clone(), r.clone()]);
            }
        }
        let transcripts = || -> Vec<OracleRun> { std::iter::once(depth.clone()).chain(reisner.clone()).collect() };
        let a = depth.is_cm();
        let b = reisner.as_ref().and_then(OracleRun::is_cm);
        if let (Some(x), Some(y)) = (a, b) {
            if x != y {
                push(&mut disc, "oracle-disagreement", Some(n), format!("depth says {x}, reisner says {y}"), transcripts());
            }
        }
        let is_cm = a.or(b);

        let decomposition = decompose::primary_decomposition(&ideal)?;
        let rebuilt = MonomialIdeal::intersect_all(decomposition.components().iter().map(|c| &c.ideal))?;
        if rebuilt != ideal {
            push(&mut disc, "decomposition", Some(n), format!("components intersect to {rebuilt}"), Vec::new());
        }
        let heights: Vec<usize> = decomposition.primes().iter().map(|p| p.len()).collect();
        let unmixed = heights.iter().all(|&h| h == heights[0]);
        if unmixed != decompose::is_unmixed(&ideal)? {
            push(&mut disc, "decomposition", Some(n), "unmixedness disagrees with the primes".into(), Vec::new());
        }
        if is_cm == Some(true) && !unmixed {
            push(&mut disc, "cm-not-unmixed", Some(n), "Cohen-Macaulay power with mixed primes".into(), transcripts());
        }
        if unmixed && decompose::minimal_primes(&base)?.iter().all(|p| p.len() == heights[0]) {
            let symbolic = decompose::symbolic_power(&base, n)?;
            if symbolic != ideal {
                push(&mut disc, "symbolic-power", Some(n), format!("unmixed power differs from symbolic power {symbolic}"), Vec::new());
            }
        }
        if pred.unmixed_chain && !unmixed {
            push(&mut disc, "unmixed-chain", Some(n), "star criterion holds but the power is mixed".into(), transcripts());
        }
        if let Some(v) = is_cm {
            for e in pred.expectations.iter().filter(|e| e.n == n && e.cm != v) {
                push(
                    &mut disc,
                    "criterion",
                    Some(n),
                    format!("{} predicts cm = {}, oracles say {v}", e.source, e.cm),
                    transcripts(),
                );
            }
        }
        if spec.metamorphic {
            metamorphic(g, inst, &base, &ideal, n, is_cm, unmixed, spec, &mut rec, &mut |kind, detail| {
                push(&mut disc, kind, Some(n), detail, transcripts())
            })?;
        }

        rec.powers.push(PowerRecord { n, depth, reisner, is_cm, unmixed });
    }

    if rec.powers.iter().all(|p| p.is_cm != Some(false)) {
        rec.unwitnessed = pred.eventually_not_cm.clone();
    }
    Ok((rec, disc))
}

/// Pendant deletion (unmixed and CM inherited, pendant weight dominates),
/// pair deletion for unmixed squares, and localization at single vertices.
#[allow(clippy::too_many_arguments)]
fn metamorphic(
    g: &WeightedGraph,
    inst: &Instance,
    base: &MonomialIdeal,
    ideal: &MonomialIdeal,
    n: u32,
    is_cm: Option<bool>,
    unmixed: bool,
    spec: &SweepSpec,
    rec: &mut InstanceRecord,
    report: &mut dyn FnMut(&str, String),
) -> Result<()> {
    let opts = spec.depth_options();
    let sub_power = |h: &WeightedGraph| -> Result<Option<MonomialIdeal>> {
        if h.edge_count() == 0 {
            return Ok(None);
        }
        Ok(Some(h.edge_ideal()?.power(n)?))
    };
    let check_cm = |rec: &mut InstanceRecord, j: &MonomialIdeal, what: &str| -> Option<bool> {
        match cm::depth_monomial(j, &opts) {
            Ok(v) => Some(v.is_cm),
            Err(e) => {
                rec.budget_skips.push(format!("{what} n={n}: {e}"));
                None
            }
        }
    };

    let mut done_x: Vec<usize> = Vec::new();
    for y in g.leaves() {
        let x = g.neighbor_list(y)[0];
        if done_x.contains(&x) {
            continue;
        }
        done_x.push(x);
        if unmixed {
            rec.metamorphic_checks += 1;
            let wxy = g.weight(x, y).unwrap();
            if let Some(z) = g.neighbor_list(x).into_iter().find(|&z| g.weight(x, z).unwrap() > wxy) {
                report(
                    "metamorphic:pendant-weight",
                    format!("unmixed power but w({}{}) < w({}{})", g.name(x), g.name(y), g.name(x), g.name(z)),
                );
            }
        }
        let h = g.remove_vertices(&[x])?;
        let Some(j) = sub_power(&h)? else { continue };
        if unmixed {
            rec.metamorphic_checks += 1;
            if !decompose::is_unmixed(&j)? {
                report("metamorphic:delete-unmixed", format!("deleting {} loses unmixedness", g.name(x)));
            }
        }
        if is_cm == Some(true) {
            rec.metamorphic_checks += 1;
            if check_cm(rec, &j, "delete") == Some(false) {
                report("metamorphic:delete-cm", format!("deleting {} loses Cohen-Macaulayness", g.name(x)));
            }
        }
    }

    if n == 2 && unmixed {
        if let Some(l) = vwc_labeling(inst) {
            for (k, &(x, y)) in l.pairs.iter().enumerate() {
                let h = g.remove_vertices(&[x, y])?;
                if let Some(j) = sub_power(&h)? {
                    rec.metamorphic_checks += 1;
                    if !decompose::is_unmixed(&j)? {
                        report("metamorphic:reduce-pair", format!("deleting pair {} loses unmixedness of the square", k + 1));
                    }
                }
            }
        }
    }

    for v in 0..g.len() {
        let w = VarSet::singleton(v);
        let local = ideal.localize(w)?;
        rec.metamorphic_checks += 1;
        if local != base.localize(w)?.power(n)? {
            report("metamorphic:localize-power", format!("localizing at {} does not commute with the power", g.name(v)));
        }
        if is_cm == Some(true) && local.is_proper() && !local.is_zero() {
            rec.metamorphic_checks += 1;
            if check_cm(rec, &local, "localize") == Some(false) {
                report("metamorphic:localize-cm", format!("localizing at {} loses Cohen-Macaulayness", g.name(v)));
            }
        }
    }
    Ok(())
}
