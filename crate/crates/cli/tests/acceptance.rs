//! One line per acceptance criterion. Criteria 1–9 run the `hktlab` binary;
//! criterion 10 runs the property suites in-process.

use std::process::Command;
use std::time::{Duration, Instant};

use serde_json::Value;

use hktlab::ctxfile::shipped_context;
use hktlab::{parse_context, parse_expr, print_expr, Element};
use hktlab_core::exterior::{Covectors, Vectors};
use hktlab_core::properties::{cross_oracle, d_squared, frame_change_invariance, invert_round_trip, projector_algebra};
use hktlab_core::sample::Sampler;
use hktlab_core::twistor::{Chart, TwistorContext};
use hktlab_core::FrameContext;

type Check = Result<(), String>;

struct Run {
    code: i32,
    elapsed: Duration,
    reports: Vec<Value>,
}

impl Run {
    fn report(&self, id: &str) -> Result<&Value, String> {
        self.reports.iter().find(|r| r["check_id"] == id).ok_or_else(|| format!("no report {id}"))
    }

    fn status(&self, id: &str) -> Result<String, String> {
        Ok(self.report(id)?["status"].as_str().unwrap_or_default().to_string())
    }

    fn expect(&self, id: &str, status: &str) -> Check {
        let got = self.status(id)?;
        if got == status {
            Ok(())
        } else {
            Err(format!("{id}: {got}, expected {status}"))
        }
    }

    fn expect_ok(&self, id: &str) -> Check {
        match self.status(id)?.as_str() {
            "pass" | "discrepancy_noted" => Ok(()),
            s => Err(format!("{id}: {s}")),
        }
    }

    fn expect_prefix_pass(&self, prefix: &str) -> Check {
        let matching: Vec<&Value> = self.reports.iter().filter(|r| r["check_id"].as_str().unwrap_or("").starts_with(prefix)).collect();
        if matching.is_empty() {
            return Err(format!("no reports under {prefix}"));
        }
        for r in matching {
            if r["status"] != "pass" {
                return Err(format!("{}: {}", r["check_id"], r["status"]));
            }
        }
        Ok(())
    }

    fn no_failures(&self) -> Check {
        match self.reports.iter().find(|r| r["status"] == "fail" || r["status"] == "error") {
            Some(r) => Err(format!("{} is {}: {}", r["check_id"], r["status"], r["witness"])),
            None => Ok(()),
        }
    }

    fn exit(&self, code: i32) -> Check {
        if self.code == code {
            Ok(())
        } else {
            Err(format!("exit code {}, expected {code}", self.code))
        }
    }

    fn within(&self, limit: Duration) -> Check {
        if self.elapsed < limit {
            Ok(())
        } else {
            Err(format!("took {:?}, limit {limit:?}", self.elapsed))
        }
    }
}

fn verify(args: &[&str]) -> Result<Run, String> {
    let dir = std::env::temp_dir().join(format!("hktlab-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let json = dir.join(format!("{}.json", args.join("_").replace(['-', ' '], "")));
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_hktlab"))
        .arg("verify")
        .args(args)
        .arg("--json")
        .arg(&json)
        .env("HKTLAB_COLOR", "0")
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let text = std::fs::read_to_string(&json).map_err(|e| format!("no JSON report: {e}"))?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let reports = doc["reports"].as_array().cloned().ok_or("JSON without reports")?;
    Ok(Run { code: out.status.code().unwrap_or(-1), elapsed, reports })
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn criterion_1() -> Check {
    let r = verify(&["su3"])?;
    r.exit(0)?;
    for id in [
        "su3.printed.e12e23_e12e23.coordinate",
        "su3.printed.e12e23_e12e23.leibniz",
        "su3.printed.cartan_e13_e12e23.coordinate",
        "su3.printed.cartan_e13_e12e23.leibniz",
        "su3.poisson.bracket",
        "su3.poisson.bracket_leibniz",
        "su3.poisson.type_purity",
    ] {
        r.expect(id, "pass")?;
    }
    r.within(secs(1))
}

fn criterion_2() -> Check {
    let r = verify(&["su3", "--a", "0"])?;
    r.exit(1)?;
    r.expect("su3.poisson.bracket", "pass")?;
    r.expect("su3.poisson.type_purity", "fail")?;
    let witness = r.report("su3.poisson.type_purity")?["witness"].as_str().unwrap_or("").to_string();
    if !(witness.contains("A^") || witness.contains("B^")) {
        return Err(format!("type-purity witness without a Cartan factor: {witness}"));
    }
    r.within(secs(1))
}

fn criterion_3() -> Check {
    let r = verify(&["su5"])?;
    r.exit(0)?;
    for id in ["su5.bracket.p1_p1", "su5.bracket.p2_p2", "su5.bracket.p1_p2"] {
        r.expect(id, "pass")?;
    }
    r.within(secs(10))
}

fn criterion_4() -> Check {
    let r = verify(&["stereo"])?;
    r.exit(0)?;
    for id in ["stereo.st_i", "stereo.st_minus_1", "stereo.unit_norm", "stereo.frame_orthogonal", "stereo.frame_determinant"] {
        r.expect(id, "pass")?;
    }
    r.within(secs(1))
}

fn criterion_5() -> Check {
    let r = verify(&["eq2"])?;
    r.exit(0)?;
    for m in [1, 2] {
        r.expect(&format!("eq2.m{m}.expansion"), "pass")?;
        r.expect(&format!("eq2.m{m}.part20"), "pass")?;
    }
    r.no_failures()?;
    r.within(secs(10))
}

fn criterion_6() -> Check {
    let r = verify(&["duality"])?;
    r.exit(0)?;
    r.expect_prefix_pass("duality.family.")?;
    r.expect_prefix_pass("duality.perturbed.")?;
    r.within(secs(10))
}

fn criterion_7() -> Check {
    let r = verify(&["flat-twistor", "--m", "2"])?;
    r.exit(0)?;
    r.no_failures()?;
    r.expect_prefix_pass("flat.round_trip.")?;
    r.expect_prefix_pass("flat.w_fields.")?;
    r.expect_prefix_pass("flat.family.")?;
    r.expect_prefix_pass("flat.p_vanishes.")?;
    r.expect_ok("flat.del_lambdab")?;
    r.expect_ok("flat.del_zetab")?;
    for id in ["flat.w_commute", "flat.p_from_p_i"] {
        r.expect(id, "pass")?;
    }
    r.within(secs(30))
}

fn criterion_8() -> Check {
    let r = verify(&["section5", "--m", "1"])?;
    r.exit(0)?;
    r.no_failures()?;
    for id in ["section5.bracket_z1", "section5.bracket_w1", "section5.bracket_p", "section5.df", "section5.bracket_p_20"] {
        r.expect(id, "pass")?;
    }
    r.within(secs(10))
}

fn criterion_9() -> Check {
    for (m, dim) in [("1", 3), ("2", 10)] {
        let r = verify(&["injectivity", "--m", m])?;
        r.exit(0)?;
        r.no_failures()?;
        r.expect("injectivity.hminus_dimension", "pass")?;
        for ell in 0..3 {
            let id = format!("injectivity.rank.l{ell}");
            r.expect(&id, "pass")?;
            let lhs = r.report(&id)?["lhs"].as_str().unwrap_or("").to_string();
            if !lhs.starts_with(&format!("rank {dim};")) || !lhs.contains("nonzero minor") {
                return Err(format!("{id} at m = {m}: {lhs}"));
            }
        }
        for id in ["injectivity.image.a", "injectivity.image.b", "injectivity.image.c"] {
            r.expect(id, "pass")?;
        }
        for r in r.reports.iter().filter(|r| r["check_id"].as_str().unwrap_or("").starts_with("injectivity.display.")) {
            if r["status"] != "pass" && r["status"] != "discrepancy_noted" {
                return Err(format!("{}: {}", r["check_id"], r["status"]));
            }
        }
        r.within(secs(60))?;
    }
    Ok(())
}

fn shipped_contexts() -> Result<Vec<FrameContext>, String> {
    let mut out = Vec::new();
    for name in ["su3", "sl2", "abelian2"] {
        let path = format!("{}/fixtures/{name}.ctx", env!("CARGO_MANIFEST_DIR"));
        let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
        out.push(parse_context(&text).map_err(|e| format!("{path}: {e}"))?);
    }
    out.push(TwistorContext::new(1, Chart::Two).map_err(|e| e.to_string())?.ctx);
    Ok(out)
}

fn parser_round_trip(ctx: &FrameContext, sampler: &mut Sampler, count: usize) -> Check {
    for t in 0..count {
        let e = if t % 2 == 0 {
            Element::Vector(sampler.in_context::<Vectors>(ctx, t % 4, 3))
        } else {
            Element::Form(sampler.in_context::<Covectors>(ctx, t % 4, 3))
        };
        let text = print_expr(&e);
        if parse_expr(&text, ctx).map_err(|err| format!("{text}: {err}"))? != e {
            return Err(format!("{text} does not round trip"));
        }
    }
    Ok(())
}

fn criterion_10() -> Check {
    let mut sampler = Sampler::new(10);
    let contexts = shipped_contexts()?;
    for ctx in &contexts {
        let name = ctx.name().to_string();
        let tag = |e: String| format!("{name}: {e}");
        cross_oracle(ctx, &mut sampler, 100).map_err(tag)?;
        d_squared(ctx, &mut sampler, 12).map_err(tag)?;
        frame_change_invariance(ctx, &mut sampler, 2).map_err(tag)?;
        invert_round_trip(ctx, None, &mut sampler, if ctx.dim() % 2 == 0 { 4 } else { 0 }).map_err(tag)?;
        parser_round_trip(ctx, &mut sampler, 100).map_err(tag)?;
    }
    let su3 = shipped_context("su3").unwrap().map_err(|e| e.to_string())?;
    let i = su3.structure(0).ok_or("su3 without I")?;
    projector_algebra(&su3, i, &mut sampler, 6)?;
    invert_round_trip(&su3, Some(i), &mut sampler, 4)?;
    let tw = TwistorContext::new(1, Chart::Two).map_err(|e| e.to_string())?;
    let op = tw.complex_structure().map_err(|e| e.to_string())?;
    projector_algebra(&tw.ctx, &op, &mut sampler, 6)
}

fn main() {
    let criteria: [(usize, fn() -> Check); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let mut failed = Vec::new();
    for (n, check) in criteria {
        match check() {
            Ok(()) => println!("criterion {n}: PASS"),
            Err(e) => {
                println!("criterion {n}: FAIL ({e})");
                failed.push(n);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
}
