//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines are printed whether or not a criterion passes;
//! the process exits nonzero if any criterion fails.

mod common;

use std::fmt::Write as _;
use std::path::Path;
use std::time::{Duration, Instant};

use opaque_plan::buchi::{accepts_lasso, translate};
use opaque_plan::cli::GridSpec;
use opaque_plan::ltl::{eval_lasso, parse, Formula};
use opaque_plan::model::{Alpha, Cost, Plan, Wts};
use opaque_plan::oracle::{is_secure, satisfies, witness_certifies, BruteForce};
use opaque_plan::planner::{plan, plan_with, Outcome, PlanOptions};
use opaque_plan::synthesis::{build_product, build_twin};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

const CASE_FORMULA: &str = "GF P1 && GF P2";
const RANDOM_MODELS: usize = 500;
const RANDOM_SEED: u64 = 7;
const CASE_BUDGET: Duration = Duration::from_secs(1);
const TRANSLATION_BUDGET: Duration = Duration::from_secs(60);
const GRID_BUDGET: Duration = Duration::from_secs(30);

struct Verdict {
    pass: bool,
    detail: String,
    /// Deterministic record of what was computed, compared across runs.
    artifact: String,
}

fn fixture() -> Wts {
    Wts::load(Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/factory.json"))
        .expect("fixture loads")
}

fn show(t: &Wts, p: &Plan) -> String {
    format!(
        "{}({})^w",
        p.prefix_names(t).concat(),
        p.cycle_names(t).concat()
    )
}

fn case_study(timed: bool) -> Verdict {
    let t = fixture();
    let f = parse(CASE_FORMULA).unwrap();
    let start = Instant::now();
    let out = plan(&t, &f, t.id("A").unwrap(), Alpha::half()).unwrap();
    let took = start.elapsed();
    let Some(r) = out.found() else {
        return Verdict {
            pass: false,
            detail: "no plan found".into(),
            artifact: String::new(),
        };
    };
    let (p, w) = (show(&t, &r.plan), show(&t, &r.witness));
    let valid = witness_certifies(&t, &r.plan, &r.witness);
    let fast = !timed || took < CASE_BUDGET;
    Verdict {
        pass: p == "AD(FE)^w" && w == "BD(FE)^w" && valid && fast,
        detail: format!("plan {p}, witness {w} (valid: {valid}), {took:.2?}"),
        artifact: format!("{p} {w} {}", r.cost.weighted),
    }
}

fn naive_optimum_insecure() -> Verdict {
    let t = fixture();
    let f = parse(CASE_FORMULA).unwrap();
    let a = t.id("A").unwrap();
    let open = plan_with(
        &t,
        &f,
        a,
        &PlanOptions {
            secure: false,
            ..Default::default()
        },
    )
    .unwrap();
    let secure = plan(&t, &f, a, Alpha::half()).unwrap();
    let (Some(open), Some(secure)) = (open.found(), secure.found()) else {
        return Verdict {
            pass: false,
            detail: "a plan is missing".into(),
            artifact: String::new(),
        };
    };
    let naive = show(&t, &open.plan);
    let rejected = !is_secure(&t, &open.plan).secure;
    let dearer = secure.cost.weighted > open.cost.weighted;
    Verdict {
        pass: naive == "AC(FE)^w" && rejected && dearer,
        detail: format!(
            "unsecured optimum {naive} cost {} rejected: {rejected}; secure cost {}",
            open.cost.weighted, secure.cost.weighted
        ),
        artifact: format!("{naive} {} {}", open.cost.weighted, secure.cost.weighted),
    }
}

fn translation(timed: bool) -> Verdict {
    let start = Instant::now();
    let lassos = common::all_lassos(&["a", "b"], 3, 3);
    let mut mismatches = Vec::new();
    let mut artifact = String::new();
    for src in common::FORMULAS {
        let f = parse(src).unwrap();
        let nba = translate(&f);
        let mut accepted = 0;
        for w in &lassos {
            let got = accepts_lasso(&nba, w);
            accepted += got as usize;
            if got != eval_lasso(&f, w) {
                mismatches.push(format!("{src} on {w:?}"));
            }
        }
        let _ = writeln!(
            artifact,
            "{src}: {} states, {accepted} accepted",
            nba.num_states
        );
    }
    let took = start.elapsed();
    Verdict {
        pass: mismatches.is_empty()
            && common::FORMULAS.len() >= 30
            && (!timed || took < TRANSLATION_BUDGET),
        detail: format!(
            "{} formulas x {} lassos, {} mismatches, {took:.2?}",
            common::FORMULAS.len(),
            lassos.len(),
            mismatches.len()
        ),
        artifact,
    }
}

/// One planner call on a random instance, with the oracle's answer.
struct Instance {
    planner: Option<(Plan, Plan, Cost)>,
    oracle: Result<Option<(Plan, Cost)>, String>,
    sound: bool,
    record: String,
}

fn random_suite() -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED);
    let alpha = Alpha::half();
    let mut out = Vec::new();
    for m in 0..RANDOM_MODELS {
        let t = common::random_model(&mut rng, 6, 3);
        for src in common::PLAN_FORMULAS {
            let f: Formula = parse(src).unwrap();
            // |Q|^2 |QB| bounds the product size from above.
            let bound = t.len() * t.len() * translate(&f).num_states;
            for &q0 in t.initial() {
                let found = match plan(&t, &f, q0, alpha).unwrap() {
                    Outcome::Found(r) => Some((r.plan.clone(), r.witness.clone(), r.cost.weighted)),
                    Outcome::Infeasible(_) => None,
                };
                let sound = found.as_ref().is_none_or(|(p, w, _)| {
                    satisfies(&t, p, &f) && is_secure(&t, p).secure && witness_certifies(&t, p, w)
                });
                let oracle = BruteForce::new(bound, bound)
                    .plan(&t, &f, q0, alpha)
                    .map(|o| {
                        o.map(|p| {
                            let c = p.weighted_cost(&t, alpha).unwrap();
                            (p, c)
                        })
                    })
                    .map_err(|e| e.to_string());
                let fmt = |p: &Plan, c: Cost| format!("{} {c}", show(&t, p));
                let record = format!(
                    "m{m} {src:?} {}: planner {} oracle {}",
                    t.name(q0),
                    found.as_ref().map_or("none".into(), |(p, _, c)| fmt(p, *c)),
                    match &oracle {
                        Ok(Some((p, c))) => fmt(p, *c),
                        Ok(None) => "none".into(),
                        Err(e) => format!("error {e}"),
                    }
                );
                out.push(Instance {
                    planner: found,
                    oracle,
                    sound,
                    record,
                });
            }
        }
    }
    out
}

fn soundness(suite: &[Instance]) -> Verdict {
    let violations = suite.iter().filter(|i| !i.sound).count();
    let plans = suite.iter().filter(|i| i.planner.is_some()).count();
    Verdict {
        pass: violations == 0,
        detail: format!(
            "{RANDOM_MODELS} models, {} formulas, {} instances, {plans} plans, {violations} violations",
            common::PLAN_FORMULAS.len(),
            suite.len()
        ),
        artifact: suite.iter().map(|i| format!("{} {}\n", i.record, i.sound)).collect(),
    }
}

fn optimality(suite: &[Instance]) -> Verdict {
    let (mut costlier, mut cheaper, mut verdict_mismatch, mut oracle_errors) = (0, 0, 0, 0);
    let mut first = None;
    for i in suite {
        match (&i.planner, &i.oracle) {
            (_, Err(_)) => oracle_errors += 1,
            (None, Ok(None)) => {}
            (Some((_, _, c)), Ok(Some((_, best)))) => {
                if c > best {
                    costlier += 1;
                    first.get_or_insert(&i.record);
                } else if c < best {
                    cheaper += 1;
                    first.get_or_insert(&i.record);
                }
            }
            _ => {
                verdict_mismatch += 1;
                first.get_or_insert(&i.record);
            }
        }
    }
    let mut detail = format!(
        "{} instances: {costlier} planner costlier than optimum, {cheaper} cheaper, \
         {verdict_mismatch} infeasibility disagreements, {oracle_errors} oracle aborts",
        suite.len()
    );
    if let Some(r) = first {
        let _ = write!(detail, "; first: {r}");
    }
    Verdict {
        pass: costlier + cheaper + verdict_mismatch + oracle_errors == 0,
        detail,
        artifact: suite.iter().map(|i| format!("{}\n", i.record)).collect(),
    }
}

fn grid_spec(n: usize) -> GridSpec {
    let mut obstacles: Vec<[usize; 2]> = (0..n * 3 / 4).map(|c| [n / 2, c]).collect();
    obstacles.extend((2..n / 2 - 1).map(|r| [r, n * 3 / 10]));
    let grass: Vec<[usize; 2]> = (0..n)
        .flat_map(|r| (n / 2..n).map(move |c| [r, c]))
        .filter(|c| !obstacles.contains(c))
        .collect();
    let spec = json!({
        "rows": n, "cols": n,
        "obstacles": obstacles,
        "default_output": "Sand",
        "outputs": [{"cells": grass, "output": "Grass"}],
        "labels": [{"cell": [n - 1, 0], "props": ["P1"]}, {"cell": [n - 1, n - 1], "props": ["P2"]}],
        "initial": [[0, 0], [0, n / 5], [n / 5, 0]],
        "secret": [[0, 0]],
    });
    GridSpec::from_json(&spec.to_string()).expect("grid spec is valid")
}

fn complexity_guard() -> Verdict {
    let f = parse(CASE_FORMULA).unwrap();
    let nba = translate(&f);
    let mut ok = true;
    let mut parts = Vec::new();
    let mut slow = Vec::new();
    for n in [5, 10, 15, 20] {
        let doc = grid_spec(n).to_model().expect("grid builds");
        let t = doc.build().expect("grid model is valid");
        let twin = build_twin(&t);
        let product = build_product(&twin, &nba);
        let bounded = product.len() <= t.len() * t.len() * nba.num_states;
        let start = Instant::now();
        let found = plan(&t, &f, t.id("r0c0").unwrap(), Alpha::half()).unwrap();
        let took = start.elapsed();
        ok &= bounded && found.found().is_some();
        if took >= GRID_BUDGET {
            slow.push(format!("{n}x{n}"));
        }
        parts.push(format!(
            "{n}x{n}: {} states, product {}, {took:.2?}",
            t.len(),
            product.len()
        ));
    }
    let mut detail = parts.join("; ");
    if !slow.is_empty() {
        let _ = write!(
            detail,
            "; FLAG soft budget {GRID_BUDGET:?} exceeded on {}",
            slow.join(", ")
        );
    }
    Verdict {
        pass: ok,
        detail,
        artifact: String::new(),
    }
}

fn report(n: usize, what: &str, v: &Verdict) -> bool {
    println!(
        "criterion {n} ({what}): {} - {}",
        if v.pass { "PASS" } else { "FAIL" },
        v.detail
    );
    v.pass
}

fn main() {
    let first = [
        case_study(true),
        naive_optimum_insecure(),
        translation(true),
    ];
    let suite = random_suite();
    let random = [soundness(&suite), optimality(&suite)];
    let names = [
        "case-study reproduction",
        "insecurity of the naive optimum",
        "translation correctness",
        "soundness on random models",
        "optimality and completeness against brute force",
    ];
    let mut all = true;
    for (i, v) in first.iter().chain(&random).enumerate() {
        all &= report(i + 1, names[i], v);
    }
    all &= report(6, "complexity guard", &complexity_guard());

    let again_suite = random_suite();
    let again = [
        case_study(false),
        naive_optimum_insecure(),
        translation(false),
        soundness(&again_suite),
        optimality(&again_suite),
    ];
    let same = first
        .iter()
        .chain(&random)
        .zip(&again)
        .all(|(a, b)| a.artifact == b.artifact);
    let bytes: usize = again.iter().map(|v| v.artifact.len()).sum();
    all &= report(
        7,
        "determinism",
        &Verdict {
            pass: same,
            detail: format!(
                "second run of criteria 1-5, {bytes} artifact bytes, identical: {same}"
            ),
            artifact: String::new(),
        },
    );
    if !all {
        std::process::exit(1);
    }
}
