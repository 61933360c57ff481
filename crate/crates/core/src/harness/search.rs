//! Counterexample searches for the two open statements: the square plus
//! unmixedness characterization on very well-covered graphs, and the
//! converse of the necessary conditions for trees.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::cm::Method;
use crate::criteria;
use crate::decompose;
use crate::error::{Error, Result};
use crate::graph::{self, GraphJson};
use crate::harness::generate::{generate, Instance};
use crate::harness::sweep::{vwc_labeling, OracleRun, SweepSpec};
use crate::monomial::MonomialIdeal;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Conjecture {
    /// For `n ≥ 2`: `I^n` CM iff `I^2` CM and `I^n` unmixed.
    VwcSquare,
    /// The necessary tree conditions are also sufficient.
    TreeConverse,
}

impl FromStr for Conjecture {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vwc-square" => Ok(Conjecture::VwcSquare),
            "tree-converse" => Ok(Conjecture::TreeConverse),
            _ => Err(Error::Invalid(format!(
                "unknown conjecture {s:?}, expected vwc-square or tree-converse"
            ))),
        }
    }
}

impl fmt::Display for Conjecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Conjecture::VwcSquare => "vwc-square",
            Conjecture::TreeConverse => "tree-converse",
        })
    }
}

/// Both oracle runs on one power.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub n: u32,
    pub depth: OracleRun,
    pub reisner: OracleRun,
}

impl Certificate {
    fn new(base: &MonomialIdeal, n: u32, spec: &SweepSpec) -> Result<Self> {
        let ideal = base.power(n)?;
        Ok(Certificate {
            n,
            depth: OracleRun::run(&ideal, Method::Depth, &spec.depth_options(), spec.timings),
            reisner: OracleRun::run(&ideal, Method::Reisner, &spec.reisner_options(), spec.timings),
        })
    }

    /// The common verdict, when both routes finished and agree.
    pub fn agreed(&self) -> Option<bool> {
        match (self.depth.is_cm(), self.reisner.is_cm()) {
            (Some(a), Some(b)) if a == b => Some(a),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Hit {
    pub instance: usize,
    pub n: u32,
    pub detail: String,
    pub graph: GraphJson,
    pub certificates: Vec<Certificate>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchReport {
    pub conjecture: Conjecture,
    pub spec: SweepSpec,
    pub examined: usize,
    /// Instances outside the conjecture's hypotheses.
    pub skipped: usize,
    /// Counterexamples confirmed by both oracles.
    pub hits: Vec<Hit>,
    /// Candidates the Reisner route could not confirm within budget, or on
    /// which the two routes disagree.
    pub unverified: Vec<Hit>,
    pub budget_skips: usize,
}

impl SearchReport {
    /// 2 when a confirmed counterexample or an oracle disagreement exists,
    /// 3 when a candidate could not be decided, else 0.
    pub fn exit_code(&self) -> i32 {
        let disagreement = self
            .unverified
            .iter()
            .flat_map(|h| &h.certificates)
            .any(|c| matches!((c.depth.is_cm(), c.reisner.is_cm()), (Some(a), Some(b)) if a != b));
        if !self.hits.is_empty() || disagreement {
            2
        } else if !self.unverified.is_empty() || self.budget_skips > 0 {
            3
        } else {
            0
        }
    }
}

enum Outcome {
    Skipped,
    Clean { budget: usize },
    Candidate { hit: Hit, budget: usize },
}

pub fn search_conjecture(which: Conjecture, spec: &SweepSpec) -> Result<SearchReport> {
    spec.validate()?;
    let instances = generate(spec.family, &spec.params)?;
    let outcomes: Vec<Outcome> = instances
        .par_iter()
        .enumerate()
        .map(|(i, inst)| match which {
            Conjecture::VwcSquare => vwc_square(i, inst, spec),
            Conjecture::TreeConverse => tree_converse(i, inst, spec),
        })
        .collect::<Result<_>>()?;
    let mut report = SearchReport {
        conjecture: which,
        spec: spec.clone(),
        examined: outcomes.len(),
        skipped: 0,
        hits: Vec::new(),
        unverified: Vec::new(),
        budget_skips: 0,
    };
    for o in outcomes {
        match o {
            Outcome::Skipped => report.skipped += 1,
            Outcome::Clean { budget } => report.budget_skips += budget,
            Outcome::Candidate { hit, budget } => {
                report.budget_skips += budget;
                if hit.certificates.iter().all(|c| c.agreed().is_some()) {
                    report.hits.push(hit);
                } else {
                    report.unverified.push(hit);
                }
            }
        }
    }
    Ok(report)
}

fn depth_verdict(base: &MonomialIdeal, n: u32, spec: &SweepSpec) -> Result<Option<bool>> {
    let ideal = base.power(n)?;
    Ok(OracleRun::run(&ideal, Method::Depth, &spec.depth_options(), false).is_cm())
}

fn vwc_square(index: usize, inst: &Instance, spec: &SweepSpec) -> Result<Outcome> {
    let g = &inst.graph;
    if vwc_labeling(inst).is_none() {
        return Ok(Outcome::Skipped);
    }
    let base = g.edge_ideal()?;
    let mut budget = 0;
    let Some(square) = depth_verdict(&base, 2, spec)? else {
        return Ok(Outcome::Clean { budget: 1 });
    };
    for n in 2..=spec.max_power {
        let unmixed = decompose::is_unmixed(&base.power(n)?)?;
        let Some(cm) = depth_verdict(&base, n, spec)? else {
            budget += 1;
            continue;
        };
        if (square && unmixed) != cm {
            let mut certificates = vec![Certificate::new(&base, 2, spec)?];
            if n != 2 {
                certificates.push(Certificate::new(&base, n, spec)?);
            }
            let hit = Hit {
                instance: index,
                n,
                detail: format!("square cm = {square}, power unmixed = {unmixed}, power cm = {cm}"),
                graph: g.to_json(),
                certificates,
            };
            return Ok(Outcome::Candidate { hit, budget });
        }
    }
    Ok(Outcome::Clean { budget })
}

fn tree_converse(index: usize, inst: &Instance, spec: &SweepSpec) -> Result<Outcome> {
    let g = &inst.graph;
    let matching = inst.matching.clone().or_else(|| graph::pendant_matching(g));
    let Some(m) = matching.filter(|m| g.is_tree() && m.validate(g).is_ok()) else {
        return Ok(Outcome::Skipped);
    };
    if !criteria::tree_necessary(g, &m)?.holds {
        return Ok(Outcome::Skipped);
    }
    let base = g.edge_ideal()?;
    let mut budget = 0;
    for n in 1..=spec.max_power {
        match depth_verdict(&base, n, spec)? {
            None => budget += 1,
            Some(true) => {}
            Some(false) => {
                let hit = Hit {
                    instance: index,
                    n,
                    detail: "necessary tree conditions hold but the power is not Cohen-Macaulay".into(),
                    graph: g.to_json(),
                    certificates: vec![Certificate::new(&base, n, spec)?],
                };
                return Ok(Outcome::Candidate { hit, budget });
            }
        }
    }
    Ok(Outcome::Clean { budget })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::generate::Family;

    #[test]
    fn no_tree_converse_hits_on_small_stars() {
        let mut spec = SweepSpec::new(Family::StarCore);
        spec.params.max_weight = 3;
        spec.max_power = 2;
        let r = search_conjecture(Conjecture::TreeConverse, &spec).unwrap();
        assert!(r.hits.is_empty(), "{:#?}", r.hits);
        assert!(r.skipped < r.examined);
    }

    #[test]
    fn no_vwc_square_hits_on_paths() {
        let mut spec = SweepSpec::new(Family::Path3);
        spec.params.max_weight = 3;
        let r = search_conjecture(Conjecture::VwcSquare, &spec).unwrap();
        assert!(r.hits.is_empty(), "{:#?}", r.hits);
        assert_eq!(r.skipped, 0);
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn names_parse() {
        assert_eq!("vwc-square".parse::<Conjecture>().unwrap(), Conjecture::VwcSquare);
        assert_eq!(Conjecture::TreeConverse.to_string(), "tree-converse");
        assert!("other".parse::<Conjecture>().is_err());
    }
}
