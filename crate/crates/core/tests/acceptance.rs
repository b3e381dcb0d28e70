//! Acceptance criteria 1-8, one line each. Exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use limrb_core::check::CheckResult;
use limrb_core::{run_suite, Mode, Report, SuiteConfig};

const KERNEL_SAMPLES: usize = 500;
const KERNEL_LIMIT: Duration = Duration::from_secs(10);
const TRANSPORTED_LIMIT: Duration = Duration::from_secs(5);
const DESCENT_SAMPLES: usize = 100;
const BRAID_SAMPLES: usize = 200;
const NOVIKOV_SAMPLES: usize = 100;
const LIE_FIXTURES: usize = 50;
const ODE_RESIDUAL: f64 = 1e-6;
const ODE_STEP: f64 = 1.0 / 1024.0;
const ODE_CONVERGENCE: f64 = 12.0;
const ODE_LIMIT: Duration = Duration::from_secs(60);

struct Outcome {
    ok: bool,
    note: String,
}

fn outcome(ok: bool, note: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        note: note.into(),
    }
}

fn run(suite: &str, samples: usize, mode: Mode) -> Result<(Report, Duration), String> {
    let cfg = SuiteConfig {
        samples,
        mode,
        ..SuiteConfig::new(suite)
    };
    let t = Instant::now();
    let r = run_suite(&cfg).map_err(|e| format!("{suite}: {e}"))?;
    Ok((r, t.elapsed()))
}

/// Every named check exists and passes.
fn all_pass(r: &Report, names: &[&str]) -> Result<(), String> {
    for n in names {
        match r.find(n) {
            Some(c) if c.passed() => {}
            Some(c) => return Err(format!("{n}: {:?} {}", c.status, failure(c))),
            None => return Err(format!("{n}: missing")),
        }
    }
    Ok(())
}

fn failure(c: &CheckResult) -> String {
    c.first_failure()
        .map(|f| format!("at {} ({})", f.name, f.detail))
        .unwrap_or_default()
}

fn zero_tolerance(r: &Report) -> Result<(), String> {
    if !r.passed() {
        let c = r.checks.iter().find(|c| !c.passed()).unwrap();
        return Err(format!("{} {}", c.name, failure(c)));
    }
    Ok(())
}

fn criterion_1() -> Result<Outcome, String> {
    let (r, t) = run("exact-kernel", KERNEL_SAMPLES, Mode::Random)?;
    zero_tolerance(&r)?;
    for dim in [3, 4] {
        all_pass(
            &r,
            &[
                &format!("exp-log[dim-{dim}]"),
                &format!("pair-identity[dim-{dim}]"),
                &format!("limit-product[dim-{dim}]"),
            ],
        )?;
        let c = r.find(&format!("limit-product[dim-{dim}]")).unwrap();
        if c.cases < KERNEL_SAMPLES {
            return Err(format!("dim {dim}: only {} samples", c.cases));
        }
    }
    Ok(outcome(
        t < KERNEL_LIMIT,
        format!("exp/log, pair identity, limit product exact at dims 3,4 on {KERNEL_SAMPLES} samples; {} ms (limit {} ms)", t.as_millis(), KERNEL_LIMIT.as_millis()),
    ))
}

fn criterion_2() -> Result<Outcome, String> {
    let (r, t) = run("transported", 1, Mode::Symbolic)?;
    all_pass(&r, &["transported-closed-form[heisenberg-rb]"])?;
    zero_tolerance(&r)?;
    Ok(outcome(
        t < TRANSPORTED_LIMIT,
        format!("a ·∞ b = exp(log a + log b) as a polynomial identity on Heisenberg; {} ms (limit {} ms)", t.as_millis(), TRANSPORTED_LIMIT.as_millis()),
    ))
}

fn criterion_3() -> Result<Outcome, String> {
    let (r, _) = run("descent", DESCENT_SAMPLES, Mode::Random)?;
    for f in ["heisenberg-rb", "identity-pair-weight-one"] {
        let g = r
            .find(&format!("descent-group[{f}]"))
            .ok_or_else(|| format!("descent-group[{f}] missing"))?;
        for part in ["associativity", "unit", "inverse", "homomorphism"] {
            let c = g.find(part).ok_or_else(|| format!("{f}: {part} missing"))?;
            if !c.passed() || c.cases < DESCENT_SAMPLES {
                return Err(format!(
                    "{f}: {part} {:?} on {} cases {}",
                    c.status,
                    c.cases,
                    failure(c)
                ));
            }
        }
    }
    zero_tolerance(&r)?;
    Ok(outcome(true, format!("associativity, unit, inverse, homomorphism exact on {DESCENT_SAMPLES} triples for HB and the weight-one fixture")))
}

fn criterion_4() -> Result<Outcome, String> {
    let (r, _) = run("heisenberg-pregroup", 1, Mode::Symbolic)?;
    let post = r
        .find("post-group[heisenberg-rb]")
        .ok_or("post-group missing")?;
    for part in [
        "distributive",
        "weighted-associativity",
        "right-unit",
        "left-unit",
    ] {
        let c = post.find(part).ok_or_else(|| format!("{part} missing"))?;
        if !c.passed() {
            return Err(format!("{part}: {}", failure(c)));
        }
    }
    let pre = r
        .find("pre-group[heisenberg-rb]")
        .ok_or("pre-group missing")?;
    let abelian = pre.find("abelian").ok_or("abelian part missing")?;
    zero_tolerance(&r)?;
    Ok(outcome(
        abelian.passed(),
        "both post-group axioms, unit laws and limit-abelianness as polynomial identities on the HB triangle",
    ))
}

fn criterion_5() -> Result<Outcome, String> {
    let (r, _) = run("tangent", 1, Mode::Random)?;
    all_pass(
        &r,
        &[
            "triangle-tangent-closed-form[heisenberg-rb]",
            "lie-rrb[heisenberg-rb]",
            "tangent-coherence[heisenberg-rb]",
            "post-lie[heisenberg-rb]",
            "diff-group-tangent[heisenberg-diff]",
            "novikov-group-tangent[heisenberg-diff]",
        ],
    )?;
    let pairs = r
        .find("triangle-tangent-closed-form[heisenberg-rb]")
        .unwrap()
        .cases;
    if pairs != 9 {
        return Err(format!(
            "closed form compared on {pairs} basis pairs, expected 9"
        ));
    }
    let prelie = r.find("pre-lie").ok_or("pre-Lie part missing")?;
    let novikov = r
        .find("novikov-tangent-closed-form")
        .ok_or("novikov closed form missing")?;
    zero_tolerance(&r)?;
    Ok(outcome(
        prelie.passed() && novikov.passed(),
        "tangent triangle = [B0 u, v] on 9 basis pairs, pre-Lie, Rota-Baxter tangent, D0 recovered, Novikov tangent = [u, D0 v]",
    ))
}

fn criterion_6() -> Result<Outcome, String> {
    let mut lines = Vec::new();
    for (mode, samples) in [(Mode::Symbolic, 1), (Mode::Random, BRAID_SAMPLES)] {
        let (b, _) = run("brace", samples, mode)?;
        all_pass(&b, &["skew-brace[heisenberg-rb]"])?;
        let (y, _) = run("ybe-braid", samples, mode)?;
        all_pass(
            &y,
            &["ybe[heisenberg-rb]", "ybe-consistency[heisenberg-rb]"],
        )?;
        let ybe = y.find("ybe[heisenberg-rb]").unwrap();
        for part in [
            "braid",
            "invertible",
            "left-nondegenerate",
            "right-nondegenerate",
        ] {
            let c = ybe.find(part).ok_or_else(|| format!("{part} missing"))?;
            if !c.passed() || c.cases < samples {
                return Err(format!(
                    "{mode:?} {part}: {:?} on {} cases",
                    c.status, c.cases
                ));
            }
        }
        lines.push(format!("{mode:?} on {samples}"));
    }
    Ok(outcome(
        true,
        format!(
            "brace axiom, braid relation and constructed inverse of S exact ({})",
            lines.join(", ")
        ),
    ))
}

fn criterion_7() -> Result<Outcome, String> {
    let (r, _) = run("novikov", NOVIKOV_SAMPLES, Mode::Random)?;
    all_pass(
        &r,
        &[
            "group-rdiff[heisenberg-diff]",
            "novikov-group[heisenberg-diff]",
            "round-trip[heisenberg-diff]",
            "novikov-lie-random",
        ],
    )?;
    let lie = r.find("novikov-lie-random").unwrap();
    if lie.parts.len() < LIE_FIXTURES {
        return Err(format!(
            "{} derivation fixtures, expected {LIE_FIXTURES}",
            lie.parts.len()
        ));
    }
    let finding = r
        .find("novikov-closed-form-coefficient[heisenberg-diff]")
        .ok_or("closed-form finding missing")?;
    let one = finding.find("kappa-1").ok_or("kappa-1 missing")?;
    let recorded = finding.passed() && one.passed() && finding.witness.is_some();
    Ok(outcome(
        recorded,
        format!("HD Novikov axioms and round trip exact, {LIE_FIXTURES} random derivation fixtures pass; finding: {}", finding.detail),
    ))
}

fn criterion_8() -> Result<Outcome, String> {
    let t = Instant::now();
    let cfg = SuiteConfig::new("ode-rbivp");
    if cfg.tolerance("residual") != ODE_RESIDUAL || cfg.tolerance("step") != ODE_STEP {
        return Err("suite defaults drifted from the acceptance tolerances".into());
    }
    let r = run_suite(&cfg).map_err(|e| e.to_string())?;
    let g = run_suite(&SuiteConfig::new("ode-group")).map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    let res = r
        .metrics
        .get("max-residual")
        .copied()
        .unwrap_or(f64::INFINITY);
    let ratio = r
        .metrics
        .get("min-convergence-ratio")
        .copied()
        .unwrap_or(0.0);
    let assoc = g
        .metrics
        .get("max-associativity-residual")
        .copied()
        .unwrap_or(f64::INFINITY);
    let ok = r.passed()
        && g.passed()
        && res <= ODE_RESIDUAL
        && ratio >= ODE_CONVERGENCE
        && assoc <= ODE_RESIDUAL
        && elapsed < ODE_LIMIT;
    Ok(outcome(
        ok,
        format!(
            "max residual {res:.2e} (≤ {ODE_RESIDUAL:e}) at h = 2^-10, step-halving factor {ratio:.2} (≥ {ODE_CONVERGENCE}), associativity {assoc:.2e}; {} ms (limit {} ms)",
            elapsed.as_millis(),
            ODE_LIMIT.as_millis()
        ),
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Result<Outcome, String>); 8] = [
        ("exact kernel", criterion_1),
        ("transported multiplication", criterion_2),
        ("descent group", criterion_3),
        ("post-group and pre-group", criterion_4),
        ("tangent theorems", criterion_5),
        ("brace and Yang-Baxter", criterion_6),
        ("Novikov suite", criterion_7),
        ("ODE factorization", criterion_8),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let (ok, note) = match f() {
            Ok(o) => (o.ok, o.note),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {} {}: {name}: {note}",
            k + 1,
            if ok { "PASS" } else { "FAIL" }
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 8 criteria pass");
}
