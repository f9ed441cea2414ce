//! Acceptance criteria: one PASS/FAIL line per criterion.

use std::process::ExitCode;
use std::time::Instant;

use astro_float::RoundingMode;

use associator::dsl::evaluate;
use associator::holonomy::{compute_cached, ode_oracle_psi, AssociatorKind, HolonomyParams, OracleParams};
use associator::relations::{self, verify_by_name, verify_hexagon_psi4, Ingredients, Plan, VerificationReport, VerifyConfig};
use associator::scalar::{bigfloat_to_f64, ln2, pi};
use associator::Series;

const P: usize = relations::DEFAULT_PREC;
const M: usize = relations::DEFAULT_TERMS;
const RM: RoundingMode = RoundingMode::ToEven;

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn setup(config: &VerifyConfig) -> (Plan, Ingredients, f64) {
    let plan = relations::plan(&relations::default_catalogue(), config).expect("plan");
    let t0 = Instant::now();
    let ing = Ingredients::build(&plan.requirements, config.prec, config.terms, None, config.guard).expect("ingredients");
    (plan, ing, t0.elapsed().as_secs_f64())
}

/// Rows that must pass below `tol` at `degree`.
fn rows_below(report: &VerificationReport, names: &[(&str, usize, f64)]) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for &(name, degree, tol) in names {
        match report.row(name) {
            Some(r) => {
                let ok = r.pass && r.degree == degree && r.residual < tol;
                pass &= ok;
                parts.push(format!("{name} d{} {:.1e}", r.degree, r.residual));
            }
            None => {
                pass = false;
                parts.push(format!("{name} missing"));
            }
        }
    }
    outcome(pass, parts.join(", "))
}

/// Structural rows that must hold exactly.
fn exact(report: &VerificationReport, names: &[&str]) -> Outcome {
    let holds: Vec<bool> = names.iter().map(|n| report.row(n).is_some_and(|r| r.pass && r.residual == 0.0)).collect();
    let detail = names.iter().zip(&holds).map(|(n, h)| format!("{n} {}", if *h { "exact" } else { "broken" })).collect::<Vec<_>>();
    outcome(holds.iter().all(|h| *h), detail.join(", "))
}

fn timed_run(only: &[&str]) -> (VerificationReport, f64) {
    let config = VerifyConfig { only: only.iter().map(|s| s.to_string()).collect(), ..VerifyConfig::default() };
    let t0 = Instant::now();
    let report = relations::verify_all(&relations::default_catalogue(), &config).expect("verify");
    (report, t0.elapsed().as_secs_f64())
}

fn hexagon(report: &VerificationReport) -> Outcome {
    let (solo, secs) = timed_run(&["hexagon-psi4", "hexagon-psi4-d5"]);
    let rows = rows_below(report, &[("hexagon-psi4", 4, 1e-20), ("hexagon-psi4-d5", 5, 1e-15)]);
    let solo_ok = solo.passed() && !solo.rows.is_empty();
    outcome(rows.pass && solo_ok && secs < 300.0, format!("{}; standalone {secs:.1} s", rows.detail))
}

fn t4(report: &VerificationReport) -> Outcome {
    let (solo, secs) = timed_run(&["t4-relation"]);
    let rows = rows_below(report, &[("t4-relation", 4, 1e-15)]);
    let solo_ok = solo.row("t4-relation").is_some_and(|r| r.pass);
    outcome(rows.pass && solo_ok && secs < 600.0, format!("{}; standalone incl. table {secs:.1} s", rows.detail))
}

fn distributivity(report: &VerificationReport) -> Outcome {
    let delta = rows_below(report, &[("distrib-delta42", 5, 1e-20), ("distrib-delta41", 5, 1e-20)]);
    let mut pass = delta.pass;
    let mut parts = vec![delta.detail];
    for g in ["distrib-pi-1", "distrib-pi-2"] {
        match report.row(g) {
            Some(r) => {
                pass &= r.pass;
                parts.push(format!("{g}: {}", r.note.clone().unwrap_or_default()));
            }
            None => {
                pass = false;
                parts.push(format!("{g} missing"));
            }
        }
    }
    outcome(pass, parts.join("; "))
}

/// Degree-`d` Taylor and oracle coefficients of `word` agree in sign.
fn oracle_sign_agrees(taylor: &Series, n: usize, d: usize, word: &[u8]) -> bool {
    let oracle = ode_oracle_psi(n, &OracleParams::new(d)).expect("oracle");
    let (a, b) = (taylor.coeff(word), oracle.coeff(word));
    let (ar, br) = (bigfloat_to_f64(a.re()), bigfloat_to_f64(b.re()));
    ar.signum() == br.signum() && a.abs_f64() > 0.1
}

fn anchors(ing: &Ingredients) -> Outcome {
    let phi = ing.series_at("Phi", 2).expect("Phi");
    let psi2 = ing.series_at("Psi2", 1).expect("Psi2");
    let z2 = pi(P).mul(&pi(P), P, RM).div(&astro_float::BigFloat::from_u8(6, P), P, RM);
    let ab = phi.coeff(&[0, 1]);
    let e_phi = bigfloat_to_f64(&ab.abs(P).sub(&z2, P, RM)).abs();
    let bm1 = psi2.coeff_of("bm1").expect("bm1");
    let e_ln2 = bigfloat_to_f64(&bm1.abs(P).sub(&ln2(P), P, RM)).abs();
    let low = |n: usize, d: usize| {
        compute_cached(AssociatorKind::Psi(n), &HolonomyParams::new(d, 128, M), None).expect("taylor").series
    };
    let sign_phi = oracle_sign_agrees(&low(1, 2), 1, 2, &[0, 1]);
    let bm1_word = psi2.alphabet().parse_word("bm1").expect("word");
    let sign_ln2 = oracle_sign_agrees(&low(2, 1), 2, 1, &bm1_word);
    outcome(
        e_phi < 1e-25 && e_ln2 < 1e-25 && sign_phi && sign_ln2,
        format!(
            "|c_AB(Phi)| - zeta(2) {e_phi:.1e}, |c_bm1(Psi2)| - ln2 {e_ln2:.1e}, c_AB {:+.6}, c_bm1 {:+.6}, signs match oracle: {}",
            bigfloat_to_f64(ab.re()),
            bigfloat_to_f64(bm1.re()),
            sign_phi && sign_ln2
        ),
    )
}

fn t4_structure(report: &VerificationReport, ing: &Ingredients) -> Outcome {
    let Some(backend) = ing.t4() else { return outcome(false, "no U(t4) backend") };
    let dims = backend.table().dims();
    let central = backend.table().z_is_central();
    let rows = ["t4-dims", "t4-centrality"].iter().all(|n| report.row(n).is_some_and(|r| r.pass));
    outcome(dims == [1, 6, 25, 90, 301] && central && rows, format!("dims {dims:?}, Z central: {central}"))
}

fn oracle() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for n in [1, 2, 4] {
        let taylor = compute_cached(AssociatorKind::Psi(n), &HolonomyParams::new(2, 128, M), None).expect("taylor").series;
        let ode = ode_oracle_psi(n, &OracleParams::new(2)).expect("oracle");
        let d = taylor.distance(&ode).expect("distance");
        pass &= d < 1e-4;
        parts.push(format!("N={n} {d:.1e}"));
    }
    outcome(pass, parts.join(", "))
}

fn stability(report: &VerificationReport, plan: &Plan, ing: &Ingredients) -> Outcome {
    let config = VerifyConfig { terms: 140, ..VerifyConfig::default() };
    let (plan140, ing140, _) = setup(&config);
    let again = relations::run(&plan140, &ing140, &config);
    let mut worst = 0f64;
    let mut pass = again.rows.len() == report.rows.len();
    for r in &report.rows {
        match again.row(&r.name) {
            Some(o) => worst = worst.max((o.residual - r.residual).abs()),
            None => pass = false,
        }
    }
    let bound = 2f64.powi(-180);
    let mut agree = 0f64;
    for p in &plan.entries {
        let Some(hand) = verify_by_name(&p.entry.name, ing, p.degree, p.tolerance) else { continue };
        let hand = hand.expect("hand verifier");
        let ctx = ing.context(p.degree).expect("context");
        let dsl = evaluate(&ctx, &p.entry.relation).expect("dsl");
        agree = agree.max(dsl.residual.distance(&hand.residual).expect("distance"));
    }
    pass &= worst < 1e-30 && agree <= bound;
    outcome(pass, format!("max residual change M=120 vs 140 {worst:.1e}, DSL vs direct {agree:.1e}"))
}

fn fault_injection(ing: &Ingredients) -> Outcome {
    let mut broken = ing.clone();
    let mut psi = ing.associator("Psi4").expect("Psi4").series.clone();
    let (word, c) = psi
        .nonzero_terms()
        .filter(|(w, _)| w.len() == 3)
        .max_by(|a, b| a.1.abs_f64().total_cmp(&b.1.abs_f64()))
        .map(|(w, c)| (w, c.clone()))
        .expect("degree-3 term");
    psi.set_coeff(&word, c.neg()).expect("set");
    broken.replace_series("Psi4", psi).expect("replace");
    let res = verify_hexagon_psi4(&broken, 4, 1e-20).expect("hexagon").row.residual;
    let mag = c.abs_f64();
    outcome(res > 1e-5 && res >= mag, format!("|c| {mag:.3e} flipped, hexagon residual {res:.3e}"))
}

fn main() -> ExitCode {
    let config = VerifyConfig::default();
    let (plan, ing, setup_secs) = setup(&config);
    let report = relations::run(&plan, &ing, &config);
    println!("setup {setup_secs:.1} s, {} rows at P={P} M={M}", report.rows.len());

    let criteria: Vec<Criterion> = vec![
        ("hexagon for Psi4", Box::new(|| hexagon(&report))),
        (
            "Okuda and octogon for Psi4",
            Box::new(|| rows_below(&report, &[("okuda-psi4", 4, 1e-20), ("octogon-psi4", 4, 1e-20)])),
        ),
        ("Broadhurst for Psi2", Box::new(|| rows_below(&report, &[("broadhurst-psi2", 6, 1e-20)]))),
        ("N=2 against N=1", Box::new(|| rows_below(&report, &[("ns1", 6, 1e-20), ("ns2", 6, 1e-20)]))),
        (
            "Phi duality and Phi_1/2",
            Box::new(|| rows_below(&report, &[("phi-duality", 8, 1e-20), ("phi-half", 8, 1e-20)])),
        ),
        ("distribution relations", Box::new(|| distributivity(&report))),
        ("U(t4) relation", Box::new(|| t4(&report))),
        ("zeta(2) and ln 2 anchors", Box::new(|| anchors(&ing))),
        (
            "group-likeness",
            Box::new(|| rows_below(&report, &[("grouplike-phi", 8, 1e-20), ("grouplike-psi2", 6, 1e-20), ("grouplike-psi4", 5, 1e-20)])),
        ),
        ("U(t4) dimensions and centre", Box::new(|| t4_structure(&report, &ing))),
        (
            "symmetry group presentations",
            Box::new(|| exact(&report, &["presentation-f5", "composites-f5", "presentation-f3"])),
        ),
        ("Taylor against ODE oracle", Box::new(oracle)),
        ("stability and DSL agreement", Box::new(|| stability(&report, &plan, &ing))),
        ("fault injection", Box::new(|| fault_injection(&ing))),
    ];

    let mut failed = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let o = check();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        failed += usize::from(!o.pass);
        println!("criterion {:>2}: {tag}  {title}: {} ({:.1} s)", i + 1, o.detail, t0.elapsed().as_secs_f64());
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
