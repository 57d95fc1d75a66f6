//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails. All numeric checks are exact (tolerance 0); each
//! criterion also has a wall-clock budget.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hullcensus::brute::{brute_spectrum, Filters};
use hullcensus::census::{self, Method};
use hullcensus::classify::{self, canonical_form, classify, CodeType};
use hullcensus::gf::{Code, Field, Matrix};
use hullcensus::qcomb::{gaussian_binomial, gaussian_identity_suite, q_power};
use hullcensus::ratio::{self, Grid, MuPrediction};
use hullcensus::{Count, Ratio, Result};

/// Exact comparisons only.
const TOLERANCE: u32 = 0;

struct Outcome {
    pass: bool,
    detail: String,
}

fn ok(detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome {
        pass: true,
        detail: detail.into(),
    })
}

fn fail(detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome {
        pass: false,
        detail: detail.into(),
    })
}

fn c(v: u64) -> Count {
    Count::from(v)
}

/// Spectra printed in the worked examples, as (q, n, k, counts by hull dimension).
fn example_spectra() -> Vec<(u32, u32, u32, Vec<u64>)> {
    vec![
        (
            3,
            8,
            4,
            vec![48_958_182, 23_587_200, 3_276_000, 89_600, 2_240],
        ),
        (
            3,
            9,
            4,
            vec![3_965_612_742, 1_958_327_280, 241_768_800, 8_265_600, 91_840],
        ),
        (
            2,
            10,
            5,
            vec![46_792_704, 46_701_312, 13_708_800, 1_943_100, 73_440, 2_295],
        ),
        (2, 9, 4, vec![1_462_272, 1_370_880, 428_400, 45_900, 2_295]),
        (
            4,
            8,
            4,
            vec![4_598_071_296, 1_520_762_880, 101_359_440, 1_414_400, 5_525],
        ),
        (2, 4, 2, vec![20, 12, 3]),
    ]
}

/// Printed decimal ratios of consecutive counts, per example.
fn example_ratio_decimals() -> Vec<(u32, u32, u32, Vec<&'static str>)> {
    vec![
        (3, 8, 4, vec!["2.07563", "7.2", "36.5625", "40"]),
        (3, 9, 4, vec!["2.025", "8.1", "29.25", "90"]),
        (
            2,
            10,
            5,
            vec!["1.00196", "3.40667", "7.05512", "26.4583", "32"],
        ),
        (2, 9, 4, vec!["1.06667", "3.2", "9.33333", "20"]),
        (4, 8, 4, vec!["3.02353", "15.0037", "71.6625", "256"]),
    ]
}

fn criterion_1() -> Result<Outcome> {
    let mut checked = 0;
    for (q, n, k, want) in example_spectra() {
        for (l, &v) in want.iter().enumerate() {
            let l = l as u32;
            let s = census::sendrier_count(n, k, l, q)?;
            let p = census::product_count(n, k, l, q)?;
            if s != c(v) || p != c(v) {
                return fail(format!(
                    "A({n},{k},{l},{q}): expected {v}, sum {s}, product {p}"
                ));
            }
            checked += 1;
        }
    }
    for (q, n, k, want) in example_ratio_decimals() {
        for (l, &d) in want.iter().enumerate() {
            let got = ratio::count_ratio(n, k, l as u32, q)?.to_decimal(6);
            if got != d {
                return fail(format!(
                    "ratio at ({n},{k},{l},{q}): expected {d}, got {got}"
                ));
            }
        }
    }
    ok(format!(
        "{checked} counts equal by both routes; printed ratios reproduce"
    ))
}

fn criterion_2() -> Result<Outcome> {
    let mut checked = 0;
    for q in [2, 3, 4, 5] {
        for n in 1..=14 {
            for k in 0..=n / 2 {
                for l in 0..=k {
                    let s = census::sendrier_count(n, k, l, q)?;
                    let p = census::product_count(n, k, l, q)?;
                    if s != p {
                        return fail(format!("({n},{k},{l},{q}): sum {s}, product {p}"));
                    }
                    if q % 2 == 0 && census::product_count_even_q_separate(n, k, l, q)? != s {
                        return fail(format!("({n},{k},{l},{q}): separate even-q route differs"));
                    }
                    checked += 1;
                }
            }
        }
    }
    ok(format!("{checked} tuples, sum = product"))
}

fn criterion_3() -> Result<Outcome> {
    let mut checked = 0;
    for (q, max_n) in [(2, 9), (3, 6), (4, 5)] {
        for n in 1..=max_n {
            for k in 0..=n / 2 {
                let b = brute_spectrum(n, k, q)?;
                let s = census::spectrum(n, k, q, Method::Sendrier)?;
                let p = census::spectrum(n, k, q, Method::product_for(q))?;
                if b.counts != s.counts || b.counts != p.counts {
                    return fail(format!(
                        "[{n},{k}]_{q}: enumeration {:?}, formula {:?}",
                        b.counts, s.counts
                    ));
                }
                checked += 1;
            }
        }
    }
    ok(format!("{checked} spectra enumerated and matched"))
}

fn criterion_4() -> Result<Outcome> {
    let grid = Grid {
        qs: vec![2, 3, 4, 5, 7],
        min_n: 2,
        max_n: 14,
    };
    let check = ratio::verify_main_theorem(&grid)?;
    if let Some(v) = check.violations.first() {
        return fail(format!(
            "{} violations, first ({},{},{},{}): ratio {} < bound {}",
            check.violations.len(),
            v.q,
            v.n,
            v.k,
            v.l,
            v.ratio,
            v.bound
        ));
    }
    // tight half-bound cases: odd q, k = n/2, l = k-1, eta((-1)^(n/2)) = +1
    let mut tight = 0;
    for r in &check.reports {
        let eta_plus = r.q % 2 == 1 && r.n % 2 == 0 && !r.condition_star;
        if eta_plus && 2 * r.k == r.n && r.l + 1 == r.k {
            let want = Ratio::new((q_power(r.q as u64, r.k as u64).to_bigint()) - 1, 2)?;
            if r.ratio != want || !r.half_bound || !r.tight {
                return fail(format!(
                    "({},{},{},{}): ratio {} is not {want}",
                    r.q, r.n, r.k, r.l, r.ratio
                ));
            }
            tight += 1;
        }
    }
    let r = ratio::ratio_report(8, 4, 3, 3)?;
    if r.ratio != Ratio::integer(40) || !r.tight {
        return fail(format!("(8,4,3,3) ratio {} (expected 40, tight)", r.ratio));
    }
    let half = check.reports.iter().filter(|r| r.half_bound).count();
    ok(format!(
        "{} ratios, 0 violations, {half} under the half bound, {tight} tight half-bound cases, {} degenerate skipped",
        check.reports.len(),
        check.degenerate.len()
    ))
}

fn criterion_5() -> Result<Outcome> {
    for (n, k, l, q, want) in [
        (9, 4, 3, 2, 20u64),
        (9, 4, 2, 2, 9),
        (10, 5, 4, 2, 32),
        (8, 4, 3, 3, 40),
    ] {
        let m = ratio::mu(n, k, l, q)?;
        if m != c(want) {
            return fail(format!("mu({n},{k},{l},{q}) = {m}, expected {want}"));
        }
    }
    let (mut exact, mut lower) = (0, 0);
    for q in [2, 3, 4, 5] {
        for n in 2..=14 {
            for k in 1..=n / 2 {
                for l in 0..k {
                    let m = match ratio::mu(n, k, l, q) {
                        Ok(m) => m,
                        Err(hullcensus::Error::DegenerateRatio { .. }) => continue,
                        Err(e) => return Err(e),
                    };
                    match ratio::predicted_mu(n, k, l, q)? {
                        MuPrediction::Exact(p) if p != m => {
                            return fail(format!("({n},{k},{l},{q}): predicted {p}, mu {m}"));
                        }
                        MuPrediction::Exact(_) => exact += 1,
                        MuPrediction::LowerBound(p) if m < p => {
                            return fail(format!(
                                "({n},{k},{l},{q}): mu {m} below predicted bound {p}"
                            ));
                        }
                        MuPrediction::LowerBound(_) => lower += 1,
                        MuPrediction::NoPrediction => {}
                    }
                }
            }
        }
    }
    ok(format!(
        "4 printed values; {exact} exact predictions agree, {lower} lower bounds hold"
    ))
}

fn criterion_6() -> Result<Outcome> {
    let w = classify(4, 2, 2, &Filters::nondegenerate())?;
    let b: Vec<u64> = (0..=2)
        .map(|h| w.census_all.get(CodeType::Linear, h))
        .collect();
    if w.records.len() != 6 || b != [4, 1, 1] || w.census.total(CodeType::Linear) != 2 {
        return fail(format!(
            "[4,2]_2: {} classes, B = {b:?}, {} nondegenerate",
            w.records.len(),
            w.census.total(CodeType::Linear)
        ));
    }
    let t2 = classify(6, 3, 2, &Filters::nondegenerate())?;
    let got2 = CodeType::ALL.map(|t| t2.census.total(t));
    if got2 != [8, 3, 1, 2] {
        return fail(format!("binary (6,3) cell {got2:?}"));
    }
    let t3 = classify(6, 3, 3, &Filters::nondegenerate())?;
    let got3 =
        [CodeType::Linear, CodeType::SelfOrthogonal, CodeType::Lcd].map(|t| t3.census.total(t));
    if got3 != [14, 0, 7] {
        return fail(format!("ternary (6,3) cell {got3:?}"));
    }
    ok("[4,2]_2: 6 classes, B = 4/1/1, 2 nondegenerate; (6,3)_2 8/3/1/2; (6,3)_3 14/0/7")
}

fn criterion_7() -> Result<Outcome> {
    let mut checked = 0;
    for (q, max_n, max_k) in [(2, 8, 4), (3, 6, 3)] {
        for n in 1..=max_n {
            for k in 0..=max_k.min(n) {
                let cls = classify(n, k, q, &Filters::default())?;
                for l in 0..=k {
                    let m = classify::mass_formula_check(&cls.records, n, k, l, q)?;
                    if !m.holds {
                        return fail(format!(
                            "({n},{k},{l},{q}): mass {}, expected {}",
                            m.mass, m.expected
                        ));
                    }
                    checked += 1;
                }
            }
        }
    }
    ok(format!("{checked} (n,k,l,q) tuples"))
}

fn random_code(rng: &mut ChaCha8Rng, q: u32, n: usize, k: usize) -> Result<Code> {
    let f = Field::of_order(q)?;
    let data = (0..k * n).map(|_| rng.gen_range(0..q) as u8).collect();
    Ok(Code::from_generator(&Matrix::new(f, k, n, data)?))
}

fn transform(c: &Code, rng: &mut ChaCha8Rng) -> Result<Code> {
    let g = c.generator();
    let f = g.field();
    let (k, n) = (g.rows(), g.cols());
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let flip: Vec<bool> = (0..n).map(|_| f.order() == 3 && rng.gen()).collect();
    let mut data = vec![0u8; k * n];
    for r in 0..k {
        for j in 0..n {
            let x = g.get(r, j);
            data[r * n + perm[j]] = if flip[j] { f.neg(x) } else { x };
        }
    }
    Ok(Code::from_generator(&Matrix::new(f, k, n, data)?))
}

fn criterion_8() -> Result<Outcome> {
    // Gaussian identities
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        for n in 1..=14 {
            for k in 0..n {
                if !gaussian_identity_suite(n, k, q)? {
                    return fail(format!("Gaussian identity fails at ({n},{k},{q})"));
                }
            }
        }
    }
    // spectrum partition and duality
    for q in [2, 3, 4, 5, 7] {
        for n in 1..=14 {
            for k in 0..=n {
                let total: Count = (0..=k.min(n - k))
                    .map(|l| census::sendrier_count(n, k, l, q))
                    .collect::<Result<Vec<_>>>()?
                    .into_iter()
                    .sum();
                if total != gaussian_binomial(n as u64, k as u64, q as u64) {
                    return fail(format!(
                        "spectrum of ({n},{k},{q}) does not sum to the subspace count"
                    ));
                }
                for l in 0..=k.min(n - k) {
                    if census::sendrier_count(n, k, l, q)?
                        != census::sendrier_count(n, n - k, l, q)?
                    {
                        return fail(format!("duality fails at ({n},{k},{l},{q})"));
                    }
                }
            }
        }
    }
    // hull by Gram rank against explicit intersection
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    for q in [2, 3, 4, 5] {
        for _ in 0..1000 {
            let n = rng.gen_range(1..=10);
            let k = rng.gen_range(0..=n);
            let code = random_code(&mut rng, q, n, k)?;
            if code.hull_dimension() != code.hull_dimension_by_intersection()
                || code.dual().dual() != code
            {
                return fail(format!("hull or duality mismatch for {code:?}"));
            }
        }
    }
    // canonical form constant on classes
    let mut pairs = 0;
    for (q, n, k) in [
        (2u32, 5usize, 2usize),
        (2, 6, 3),
        (2, 7, 3),
        (2, 8, 4),
        (3, 4, 2),
        (3, 5, 2),
        (3, 6, 3),
    ] {
        for _ in 0..500 {
            let code = random_code(&mut rng, q, n, k)?;
            let a = canonical_form(&transform(&code, &mut rng)?)?;
            let b = canonical_form(&transform(&code, &mut rng)?)?;
            if a != b {
                return fail(format!(
                    "canonical forms differ within the class of {code:?}"
                ));
            }
            pairs += 1;
        }
    }
    ok(format!(
        "identities, partition, duality, 4000 hull checks, {pairs} transform pairs"
    ))
}

/// Reported, not asserted: the decreasing chain of class counts and the
/// LCD length recursion on the classified range.
fn report_extras() -> Result<()> {
    let mut lines = Vec::new();
    for (q, n, k) in [
        (2, 4, 2),
        (2, 6, 2),
        (2, 6, 3),
        (2, 8, 3),
        (2, 8, 4),
        (3, 6, 2),
        (3, 6, 3),
    ] {
        let r = classify::conjecture_check(n, k, q)?;
        lines.push(format!(
            "({q},{n},{k}) {:?} {}",
            r.counts,
            if r.holds { "holds" } else { "fails" }
        ));
    }
    println!("[INFO] class-count chain: {}", lines.join("; "));

    let mut agree = 0;
    let mut total = 0;
    for (q, max_n) in [(2, 8), (3, 6)] {
        let mut b_star = BTreeMap::new();
        let mut direct = BTreeMap::new();
        for n in 1..=max_n {
            for k in 0..=n {
                let cls = classify(n, k, q, &Filters::nondegenerate())?;
                b_star.insert((n, k), c(cls.census.get(CodeType::Lcd, 0)));
                direct.insert((n, k), c(cls.census_all.get(CodeType::Lcd, 0)));
            }
        }
        for (&(n, k), v) in &direct {
            total += 1;
            agree += usize::from(classify::lcd_length_recursion(n, k, &b_star)? == *v);
        }
    }
    println!(
        "[INFO] LCD length recursion matches direct classification on {agree}/{total} (n,k,q)"
    );
    Ok(())
}

fn main() -> ExitCode {
    type Criterion = (u32, &'static str, Duration, fn() -> Result<Outcome>);
    let criteria: [Criterion; 8] = [
        (
            1,
            "worked example values",
            Duration::from_secs(1),
            criterion_1,
        ),
        (
            2,
            "sum formula = product formula",
            Duration::from_secs(60),
            criterion_2,
        ),
        (
            3,
            "enumeration = closed forms",
            Duration::from_secs(600),
            criterion_3,
        ),
        (
            4,
            "ratio inequality over the grid",
            Duration::from_secs(60),
            criterion_4,
        ),
        (
            5,
            "mu values and predictions",
            Duration::from_secs(60),
            criterion_5,
        ),
        (
            6,
            "classification examples",
            Duration::from_secs(300),
            criterion_6,
        ),
        (7, "mass formula", Duration::from_secs(300), criterion_7),
        (8, "property suites", Duration::from_secs(300), criterion_8),
    ];
    println!("acceptance (tolerance {TOLERANCE}, exact arithmetic)");
    let mut failures = 0;
    for (id, name, budget, f) in criteria {
        let start = Instant::now();
        let outcome = f().unwrap_or_else(|e| Outcome {
            pass: false,
            detail: format!("error: {e}"),
        });
        let elapsed = start.elapsed();
        let in_time = elapsed <= budget;
        let pass = outcome.pass && in_time;
        failures += usize::from(!pass);
        println!(
            "[{}] {id}. {name}: {} ({:.2?}, budget {:?}{})",
            if pass { "PASS" } else { "FAIL" },
            outcome.detail,
            elapsed,
            budget,
            if in_time { "" } else { ", over budget" }
        );
    }
    if let Err(e) = report_extras() {
        println!("[INFO] extras failed: {e}");
    }
    if failures == 0 {
        println!("all 8 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
