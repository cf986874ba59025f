//! Verification scenarios and their report output.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use hktlab_core::liealg::{duality_checks, param_a, stem_checks, su3_checks, su3_structure, su5_checks};
use hktlab_core::properties::cross_oracle;
use hktlab_core::quaternionic::{eq2_checks, stereo_checks};
use hktlab_core::report::timed;
use hktlab_core::sample::Sampler;
use hktlab_core::twistor::{flat_twistor_checks, injectivity_checks, section5_checks};
use hktlab_core::{Report, Scalar, Status, VarTable};

use crate::lex::ParseError;
use crate::scalar::parse_scalar;

pub const SCENARIOS: &[&str] = &["su3", "su5", "stem", "stereo", "eq2", "duality", "flat-twistor", "section5", "injectivity", "all"];

const CROSS_ORACLE_SAMPLES: usize = 10;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("unknown scenario {0:?}; expected one of {}", SCENARIOS.join(", "))]
    UnknownScenario(String),
    #[error("--a: {0}")]
    Parameter(ParseError),
    #[error("{0}")]
    Invalid(String),
}

/// Command-line parameters; `None` selects the scenario default.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Params {
    pub m: Option<usize>,
    pub ell: Option<usize>,
    pub a: Option<String>,
    pub chart: Option<u8>,
    pub seed: Option<u64>,
}

impl Params {
    /// `a` as a real scalar; formal when not given.
    fn a(&self) -> Result<Scalar, InputError> {
        let Some(text) = &self.a else {
            return Ok(Scalar::var(&param_a()));
        };
        let mut vars = VarTable::new();
        vars.insert(param_a());
        let a = parse_scalar(text, &vars).map_err(InputError::Parameter)?;
        if a.conj() != a {
            return Err(InputError::Invalid(format!("--a must be real, got {a}")));
        }
        Ok(a)
    }

    fn validate(&self) -> Result<(), InputError> {
        if self.m == Some(0) {
            return Err(InputError::Invalid("--m must be at least 1".into()));
        }
        if let Some(l) = self.ell {
            if l > 2 {
                return Err(InputError::Invalid(format!("--ell must be 0, 1 or 2, got {l}")));
            }
        }
        if let Some(c) = self.chart {
            if c != 1 && c != 2 {
                return Err(InputError::Invalid(format!("--chart must be 1 or 2, got {c}")));
            }
        }
        Ok(())
    }
}

/// Seeded agreement of the two Schouten brackets on the SU(3) context.
fn su3_cross_oracle(a: &Scalar, seed: u64) -> hktlab_core::Result<Vec<Report>> {
    let ctx = su3_structure(a, false)?;
    let mut sampler = Sampler::new(seed);
    let id = "su3.cross_oracle";
    Ok(vec![match cross_oracle(&ctx, &mut sampler, CROSS_ORACLE_SAMPLES) {
        Ok(()) => Report::new(id, Status::Pass, "coordinate".into(), "leibniz".into(), None),
        Err(w) => Report::new(id, Status::Fail, "coordinate".into(), "leibniz".into(), Some(w)),
    }])
}

type Job = Box<dyn FnOnce() -> Vec<Report> + Send>;

fn jobs(name: &str, p: &Params) -> Result<Vec<Job>, InputError> {
    let mut out: Vec<Job> = Vec::new();
    match name {
        "su3" => {
            let a = p.a()?;
            let b = a.clone();
            let seed = p.seed.unwrap_or(0);
            out.push(Box::new(move || timed("su3", || su3_checks(&a))));
            out.push(Box::new(move || timed("su3.cross_oracle", || su3_cross_oracle(&b, seed))));
        }
        "su5" => {
            let a = p.a()?;
            out.push(Box::new(move || timed("su5", || su5_checks(&a))));
        }
        "stem" => out.push(Box::new(|| timed("stem", stem_checks))),
        "stereo" => out.push(Box::new(|| timed("stereo", stereo_checks))),
        "eq2" => {
            let ms = p.m.map(|m| vec![m]).unwrap_or_else(|| vec![1, 2]);
            for m in ms {
                out.push(Box::new(move || timed(&format!("eq2.m{m}"), || eq2_checks(m))));
            }
        }
        "duality" => {
            let a = p.a()?;
            out.push(Box::new(move || timed("duality", || duality_checks(&a))));
        }
        "flat-twistor" => {
            let m = p.m.unwrap_or(1);
            out.push(Box::new(move || timed(&format!("flat.m{m}"), || flat_twistor_checks(m))));
        }
        "section5" => {
            let m = p.m.unwrap_or(1);
            out.push(Box::new(move || timed(&format!("section5.m{m}"), || section5_checks(m))));
        }
        "injectivity" => {
            let m = p.m.unwrap_or(1);
            let ells = p.ell.map(|l| vec![l]).unwrap_or_else(|| vec![0, 1, 2]);
            out.push(Box::new(move || timed(&format!("injectivity.m{m}"), || injectivity_checks(m, &ells))));
        }
        "all" => {
            for s in SCENARIOS.iter().filter(|s| **s != "all") {
                out.extend(jobs(s, p)?);
            }
        }
        other => return Err(InputError::UnknownScenario(other.to_string())),
    }
    Ok(out)
}

/// Runs a scenario; reports are sorted by check id.
pub fn run_scenario(name: &str, p: &Params) -> Result<Vec<Report>, InputError> {
    p.validate()?;
    let jobs = jobs(name, p)?;
    let mut reports: Vec<Report> = jobs.into_par_iter().flat_map_iter(|job| job()).collect();
    if let Some(c) = p.chart {
        let other = if c == 1 { "chart2" } else { "chart1" };
        reports.retain(|r| !r.check_id.split('.').any(|part| part == other));
    }
    reports.sort_by(|x, y| x.check_id.cmp(&y.check_id));
    Ok(reports)
}

pub fn all_ok(reports: &[Report]) -> bool {
    reports.iter().all(|r| r.passed())
}

#[derive(Serialize)]
struct JsonOutput<'a> {
    version: &'static str,
    scenario: &'a str,
    params: &'a Params,
    reports: Vec<Report>,
}

/// The machine report; `elapsed` is zeroed unless `timings` is set so that
/// repeated runs give identical bytes.
pub fn render_json(scenario: &str, p: &Params, reports: &[Report], timings: bool) -> String {
    let reports = reports.iter().cloned().map(|r| if timings { r } else { r.with_elapsed(0.0) }).collect();
    let out = JsonOutput { version: env!("CARGO_PKG_VERSION"), scenario, params: p, reports };
    serde_json::to_string_pretty(&out).expect("reports serialize") + "\n"
}

fn paint(text: &str, status: Status, color: bool) -> String {
    if !color {
        return text.to_string();
    }
    let code = match status {
        Status::Pass => "32",
        Status::DiscrepancyNoted => "33",
        Status::Fail | Status::Error => "31",
    };
    format!("\x1b[{code}m{text}\x1b[0m")
}

/// One line per report and a summary line. `verbose` adds both sides.
pub fn render_text(reports: &[Report], color: bool, verbose: bool) -> String {
    let mut out = String::new();
    for r in reports {
        let tag = paint(&format!("{:<17}", r.status.to_string()), r.status, color);
        out.push_str(&format!("{tag} {}\n", r.check_id));
        if let Some(w) = &r.witness {
            out.push_str(&format!("    witness: {w}\n"));
        }
        if verbose {
            out.push_str(&format!("    lhs: {}\n    rhs: {}\n", r.lhs, r.rhs));
        }
    }
    let count = |s: Status| reports.iter().filter(|r| r.status == s).count();
    out.push_str(&format!(
        "{} checks: {} pass, {} discrepancy_noted, {} fail, {} error\n",
        reports.len(),
        count(Status::Pass),
        count(Status::DiscrepancyNoted),
        count(Status::Fail),
        count(Status::Error)
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameters_are_validated() {
        let bad = |p: Params| run_scenario("stem", &p).is_err();
        assert!(bad(Params { ell: Some(3), ..Params::default() }));
        assert!(bad(Params { chart: Some(3), ..Params::default() }));
        assert!(bad(Params { m: Some(0), ..Params::default() }));
        assert!(run_scenario("su3", &Params { a: Some("i".into()), ..Params::default() }).is_err());
        assert!(run_scenario("su3", &Params { a: Some("b".into()), ..Params::default() }).is_err());
        assert!(matches!(run_scenario("nope", &Params::default()), Err(InputError::UnknownScenario(_))));
    }

    #[test]
    fn stem_reports_are_sorted_and_deterministic() {
        let p = Params::default();
        let r = run_scenario("stem", &p).unwrap();
        assert!(all_ok(&r));
        assert!(r.windows(2).all(|w| w[0].check_id <= w[1].check_id));
        assert_eq!(render_json("stem", &p, &r, false), render_json("stem", &p, &run_scenario("stem", &p).unwrap(), false));
    }
}
