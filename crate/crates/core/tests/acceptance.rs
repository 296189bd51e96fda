//! End-to-end acceptance checks at fixed scales. Each test prints a single
//! PASS/FAIL line (visible with --nocapture) and asserts the same condition,
//! so the suite doubles as a human-readable report.
//!
//! The three table searches are shared between tests through OnceLocks; the
//! first test to need a table computes it.

use std::sync::OnceLock;

use rayon::prelude::*;

use fqmzv::{
    check_tuple_restrictions, detect_rational, rational_to_series, run_search, splice_check,
    ClassificationRecord, CompositionTuple, Context, DetectOptions, DetectionStatus, Family,
    FamilyBounds, FieldConfig, LaurentSeries, Polynomial, RationalFunction, ResultSet,
    SearchConfig, TupleStatus,
};

fn ctx(q: u32) -> Context {
    Context::new(FieldConfig::new(q).unwrap())
}

fn report(label: &str, pass: bool, detail: &str) {
    println!(
        "acceptance [{label}]: {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "acceptance [{label}] failed: {detail}");
}

struct XorShift(u64);

impl XorShift {
    fn new(seed: u64) -> Self {
        XorShift(seed * 2 + 1)
    }
    fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }
    fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }
}

// ---------------------------------------------------------------- criterion 1

#[test]
fn closed_power_sums_match_brute_force_enumeration() {
    let mut total = 0usize;
    let mut pass = true;
    for q in [2u32, 3, 4, 5] {
        let c = ctx(q);
        let mut hits = 0usize;
        for d in 0..=3u32 {
            for s in 1..=40u32 {
                if let Some(closed) = c.power_sum_closed(d, s).unwrap() {
                    let expected = rational_to_series(c.field(), &closed, 40);
                    let brute = c.power_sum_bruteforce(d, s, 40).unwrap();
                    if !expected.agrees_with(c.field(), &brute) {
                        pass = false;
                        eprintln!("closed form disagrees: q={q} d={d} s={s}");
                    }
                    hits += 1;
                }
            }
        }
        // every field admits dozens of closed cases in this range; a collapse
        // here would make the comparison vacuous
        pass &= hits >= 25;
        total += hits;
    }
    report(
        "closed power sums",
        pass,
        &format!("{total} closed forms match brute-force sums at precision 40"),
    );
}

// ---------------------------------------------------------------- criterion 2

#[test]
fn proven_identity_families_hold_across_fields() {
    let bounds = FamilyBounds { max_n: 3, max_r: 4 };
    let mut cases = Vec::new();
    for q in [2u32, 3, 4, 5] {
        let c = ctx(q);
        for family in Family::ALL.into_iter().filter(Family::is_theorem) {
            if family == Family::Main6 && q == 2 {
                continue;
            }
            for case in c.enumerate_cases(family, &bounds).unwrap() {
                cases.push((q, case));
            }
        }
    }
    let failures: Vec<String> = cases
        .par_iter()
        .filter_map(|(q, case)| {
            let c = ctx(*q);
            let r = c.verify_case(case, 50).unwrap();
            (!r.pass || r.precision < 50).then(|| {
                format!(
                    "q={q} {} {:?}: residual valuation {} at precision {}",
                    case.family, case.params, r.residual_valuation, r.precision
                )
            })
        })
        .collect();
    for f in &failures {
        eprintln!("{f}");
    }
    report(
        "proven families",
        failures.is_empty(),
        &format!(
            "{} instances with n <= 3 vanish to precision 50 over q in {{2,3,4,5}}",
            cases.len()
        ),
    );
}

// ---------------------------------------------------------------- criterion 3

#[test]
fn degree_level_claim_behind_the_tower_family_holds() {
    let mut checked = 0usize;
    let mut pass = true;
    for q in [2u32, 3] {
        let c = ctx(q);
        for n in 0..=2u32 {
            for d in 0..=5u32 {
                let r = c.verify_sd_claim(n, d, 50).unwrap();
                if !r.pass || r.precision < 50 {
                    pass = false;
                    eprintln!("level claim fails: q={q} n={n} d={d}");
                }
                checked += 1;
            }
        }
    }
    report(
        "degree-level claim",
        pass,
        &format!("{checked} (q, n, d) instances vanish to precision 50"),
    );
}

// ---------------------------------------------------------------- criterion 4

#[test]
fn carlitz_log_satisfies_the_module_functional_equation() {
    let mut pass = true;
    for q in [2u32, 3] {
        let c = ctx(q);
        let cfg = c.field();
        let one = Polynomial::one();
        let t = Polynomial::t();
        let t2t = Polynomial::from_coeffs(vec![0, 1, 1]); // t^2 + t
        let cases = [
            (one.clone(), one.clone()),
            (one.clone(), t.clone()),
            (one.clone(), t2t),
        ];
        for (num, den) in cases {
            let z = RationalFunction::new(cfg, num.clone(), den.clone()).unwrap();
            let tz = RationalFunction::new(cfg, Polynomial::mul(cfg, &t, &num), den.clone()).unwrap();
            let zq = RationalFunction::new(
                cfg,
                num.pow(cfg, q as u64),
                den.pow(cfg, q as u64),
            )
            .unwrap();
            // one extra digit on log(z): multiplying by t costs a digit
            let log_z = c.carlitz_log(&z.to_series(cfg, 41), 41, None).unwrap();
            let lhs = LaurentSeries::mul(
                cfg,
                &LaurentSeries::from_polynomial(&t, 100),
                &log_z,
            );
            let rhs = LaurentSeries::add(
                cfg,
                &c.carlitz_log(&tz.to_series(cfg, 40), 40, None).unwrap(),
                &c.carlitz_log(&zq.to_series(cfg, 40), 40, None).unwrap(),
            );
            let residual = LaurentSeries::sub(cfg, &lhs, &rhs);
            if !residual.is_zero() || residual.precision() < 40 {
                pass = false;
                eprintln!(
                    "functional equation fails: q={q} z={} residual valuation {}",
                    z.render(),
                    residual.valuation_or_prec()
                );
            }
        }
        // zeta(1) is the logarithm of 1
        let zeta1 = c
            .zeta_value(&CompositionTuple::single(1).unwrap(), 40)
            .unwrap();
        let log1 = c
            .carlitz_log(&LaurentSeries::one(40), 40, None)
            .unwrap();
        if !LaurentSeries::sub(cfg, &zeta1.value, &log1).is_zero() {
            pass = false;
            eprintln!("zeta(1) != log(1) for q={q}");
        }
    }
    report(
        "log functional equation",
        pass,
        "t*log(z) = log(tz) + log(z^q) and zeta(1) = log(1) to precision 40 for q in {2,3}",
    );
}

// ------------------------------------------------------- shared table searches

fn search(q: u32, depth: usize, max_weight: u32) -> ResultSet {
    let config = SearchConfig {
        depth,
        max_weight,
        restricted: false,
        primitive_only: true,
        precision: 64,
    };
    run_search(&ctx(q), &config, None).unwrap()
}

fn table_q2_d2() -> &'static ResultSet {
    static T: OnceLock<ResultSet> = OnceLock::new();
    T.get_or_init(|| search(2, 2, 32))
}

fn table_q2_d3() -> &'static ResultSet {
    static T: OnceLock<ResultSet> = OnceLock::new();
    T.get_or_init(|| search(2, 3, 16))
}

fn table_q3_d2() -> &'static ResultSet {
    static T: OnceLock<ResultSet> = OnceLock::new();
    T.get_or_init(|| search(3, 2, 27))
}

fn detected_entries(records: &[ClassificationRecord]) -> Vec<Vec<u32>> {
    records
        .iter()
        .filter(|r| r.status.detected())
        .map(|r| r.tuple.entries().to_vec())
        .collect()
}

// ---------------------------------------------------------------- criterion 5

#[test]
fn small_searches_reproduce_the_known_tables() {
    // expected sets listed in enumeration order: by weight, then entry order
    let expected_q2_d2: Vec<Vec<u32>> = [
        [1, 1], [1, 2], [1, 3], [2, 5], [3, 4], [3, 5], [4, 11], [7, 8], [8, 23], [15, 16],
    ]
    .iter()
    .map(|t| t.to_vec())
    .collect();
    let expected_q2_d3: Vec<Vec<u32>> = [
        [1, 1, 2], [1, 2, 4], [1, 2, 5], [1, 3, 4], [3, 4, 8],
    ]
    .iter()
    .map(|t| t.to_vec())
    .collect();
    let expected_q3_d2: Vec<Vec<u32>> = [
        [1, 2], [1, 4], [2, 4], [1, 6], [2, 6], [1, 8], [3, 14], [5, 12], [3, 20], [5, 18],
        [3, 22], [5, 20], [7, 18], [6, 20], [8, 18], [5, 22], [7, 20],
    ]
    .iter()
    .map(|t| t.to_vec())
    .collect();

    let got_q2_d2 = detected_entries(&table_q2_d2().records);
    let got_q2_d3 = detected_entries(&table_q2_d3().records);
    let got_q3_d2 = detected_entries(&table_q3_d2().records);

    let pass =
        got_q2_d2 == expected_q2_d2 && got_q2_d3 == expected_q2_d3 && got_q3_d2 == expected_q3_d2;
    if !pass {
        eprintln!("q=2 depth 2: got {got_q2_d2:?}");
        eprintln!("q=2 depth 3: got {got_q2_d3:?}");
        eprintln!("q=3 depth 2: got {got_q3_d2:?}");
    }
    report(
        "table reproduction",
        pass,
        &format!(
            "{} + {} + {} detected tuples match the known tables exactly",
            expected_q2_d2.len(),
            expected_q2_d3.len(),
            expected_q3_d2.len()
        ),
    );
}

// ---------------------------------------------------------------- criterion 6

fn random_rational(q: u32, seed: u64) -> RationalFunction {
    let f = FieldConfig::new(q).unwrap();
    let mut rng = XorShift::new(seed);
    let den_deg = 1 + rng.below(10) as usize;
    let mut den = vec![0u8; den_deg + 1];
    for c in den.iter_mut() {
        *c = rng.below(q as u64) as u8;
    }
    den[den_deg] = 1;
    let num_deg = rng.below(den_deg as u64) as usize;
    let mut num = vec![0u8; num_deg + 1];
    for c in num.iter_mut() {
        *c = rng.below(q as u64) as u8;
    }
    if num.iter().all(|&c| c == 0) {
        num[0] = 1;
    } else if num[num_deg] == 0 {
        num[num_deg] = 1;
    }
    RationalFunction::new(&f, Polynomial::from_coeffs(num), Polynomial::from_coeffs(den)).unwrap()
}

#[test]
fn random_rationals_round_trip_through_continued_fractions() {
    let opts = DetectOptions::default();
    let mut failures = 0usize;
    let mut total = 0usize;
    for q in [2u32, 3, 4, 5] {
        let f = FieldConfig::new(q).unwrap();
        for seed in 0..200u64 {
            let r = random_rational(q, 7_000 + seed);
            let verdict =
                detect_rational(&f, 25, &opts, |p| Ok(r.to_series(&f, p))).unwrap();
            if verdict.status != DetectionStatus::Rational || verdict.ratio.as_ref() != Some(&r) {
                failures += 1;
                eprintln!("roundtrip failed: q={q} r={}", r.render());
            }
            total += 1;
        }
    }
    report(
        "rational roundtrip",
        failures == 0,
        &format!("{total} random rationals of degree <= 10 recovered exactly at precision 25"),
    );
}

// ---------------------------------------------------------------- criterion 7

#[test]
fn zeta_of_scaled_tuples_is_the_frobenius_power() {
    let mut pass = true;
    let mut total = 0usize;
    for q in [2u32, 3] {
        let c = ctx(q);
        let p = c.field().p();
        let mut rng = XorShift::new(11_000 + q as u64);
        for _ in 0..20 {
            let depth = 1 + rng.below(3) as usize;
            let entries: Vec<u32> = (0..depth).map(|_| 1 + rng.below(8) as u32).collect();
            let tuple = CompositionTuple::new(entries.clone()).unwrap();
            let scaled =
                CompositionTuple::new(entries.iter().map(|&s| s * p).collect()).unwrap();
            let base = c.zeta_value(&tuple, 40).unwrap();
            let lhs = c.zeta_value(&scaled, 40).unwrap();
            let rhs = base.value.pow(c.field(), p as u64).truncate(40);
            if !LaurentSeries::sub(c.field(), &lhs.value, &rhs).is_zero() {
                pass = false;
                eprintln!("frobenius scaling fails: q={q} tuple {tuple}");
            }
            total += 1;
        }
    }
    report(
        "frobenius scaling",
        pass,
        &format!("{total} random tuples satisfy zeta(p*s) = zeta(s)^p to precision 40"),
    );
}

// ---------------------------------------------------------------- criterion 8

#[test]
fn ratios_live_in_the_prime_subfield_and_ignore_the_modulus_choice() {
    let mut pass = true;

    // every ratio reconstructed in the table searches has prime-field coefficients
    let mut ratios = 0usize;
    for (q, table) in [
        (2, table_q2_d2()),
        (2, table_q2_d3()),
        (3, table_q3_d2()),
    ] {
        let f = FieldConfig::new(q).unwrap();
        for record in &table.records {
            if let Some(ratio) = &record.ratio {
                if !ratio.has_prime_subfield_coeffs(&f) {
                    pass = false;
                    eprintln!("ratio leaves F_p: q={q} tuple {}", record.tuple);
                }
                ratios += 1;
            }
        }
    }

    // the classification output is a function of q alone, not of the model
    // of F_q: compare runs under different irreducible moduli. F_4 admits a
    // single monic irreducible quadratic, so the spelled-out modulus can only
    // be checked against the default; F_9 admits genuinely different ones.
    let config4 = SearchConfig {
        depth: 2,
        max_weight: 20,
        restricted: true,
        primitive_only: true,
        precision: 48,
    };
    let runs4 = [
        run_search(&ctx(4), &config4, None).unwrap(),
        run_search(
            &Context::new(FieldConfig::with_modulus(4, &[1, 1, 1]).unwrap()),
            &config4,
            None,
        )
        .unwrap(),
    ];
    let config9 = SearchConfig {
        max_weight: 32,
        ..config4.clone()
    };
    let runs9 = [
        run_search(
            &Context::new(FieldConfig::with_modulus(9, &[1, 0, 1]).unwrap()),
            &config9,
            None,
        )
        .unwrap(),
        run_search(
            &Context::new(FieldConfig::with_modulus(9, &[2, 1, 1]).unwrap()),
            &config9,
            None,
        )
        .unwrap(),
    ];
    for (q, runs) in [(4, &runs4), (9, &runs9)] {
        if runs[0].records != runs[1].records {
            pass = false;
            eprintln!("classification depends on the modulus for q={q}");
        }
        let f = FieldConfig::new(q).unwrap();
        let detected = runs[0].records.iter().filter(|r| r.status.detected()).count();
        if detected == 0 {
            pass = false;
            eprintln!("no detections in the q={q} cross-modulus run");
        }
        for record in &runs[0].records {
            if let Some(ratio) = &record.ratio {
                if !ratio.has_prime_subfield_coeffs(&f) {
                    pass = false;
                    eprintln!("ratio leaves F_p: q={q} tuple {}", record.tuple);
                }
                ratios += 1;
            }
        }
    }

    report(
        "prime-subfield ratios",
        pass,
        &format!("{ratios} ratios lie in F_p; q=4 and q=9 runs are modulus-independent"),
    );
}

// ---------------------------------------------------------------- criterion 9

#[test]
fn restriction_and_splice_harnesses_agree_with_the_predictions() {
    let mut pass = true;

    let c2 = ctx(2);
    let c3 = ctx(3);
    for (c, table) in [
        (&c2, table_q2_d2()),
        (&c2, table_q2_d3()),
        (&c3, table_q3_d2()),
    ] {
        let violations = check_tuple_restrictions(c, table).unwrap();
        if !violations.is_empty() {
            pass = false;
            for v in &violations {
                eprintln!("restriction violated: {} {}", v.tuple, v.constraint);
            }
        }
    }

    // the one predicted failure of splicing: (1,1) with itself
    let one_one = CompositionTuple::new(vec![1, 1]).unwrap();
    let spliced = splice_check(&c2, &one_one, &one_one, 64).unwrap();
    if spliced.tuple.entries() != [1, 1, 1]
        || spliced.status != TupleStatus::NotDetected
        || !spliced.note.as_deref().unwrap_or("").contains("exception")
    {
        pass = false;
        eprintln!("splice exception not reproduced: {spliced:?}");
    }

    report(
        "restrictions and splicing",
        pass,
        "no restriction violations on the reproduced tables; (1,1)+(1,1) splice is the known exception",
    );
}
