use fqmzv::{
    monics_of_degree, Context, Error, FieldConfig, LaurentSeries, Polynomial, RationalFunction,
};

fn ctx(q: u32) -> Context {
    Context::new(FieldConfig::new(q).unwrap())
}

fn rf(cfg: &FieldConfig, num: Vec<u8>, den: Vec<u8>) -> RationalFunction {
    RationalFunction::new(
        cfg,
        Polynomial::from_coeffs(num),
        Polynomial::from_coeffs(den),
    )
    .unwrap()
}

#[test]
fn brackets_and_their_products() {
    let c = ctx(2);
    // [1] = t^2 + t, [2] = t^4 + t over F_2
    assert_eq!(c.bracket(1).unwrap(), Polynomial::from_coeffs(vec![0, 1, 1]));
    assert_eq!(
        c.bracket(2).unwrap(),
        Polynomial::from_coeffs(vec![0, 1, 0, 0, 1])
    );
    assert!(c.bracket(0).is_err());
    assert_eq!(c.ell(0).unwrap(), Polynomial::one());
    assert_eq!(c.big_l(0).unwrap(), Polynomial::one());

    let c3 = ctx(3);
    // [1] = t^3 - t = t^3 + 2t over F_3
    assert_eq!(
        c3.bracket(1).unwrap(),
        Polynomial::from_coeffs(vec![0, 2, 0, 1])
    );
    // ell(1) = t - t^3
    assert_eq!(c3.ell(1).unwrap(), Polynomial::from_coeffs(vec![0, 1, 0, 2]));
}

#[test]
fn ell_is_signed_big_l() {
    for &q in &[2u32, 3, 4] {
        let c = ctx(q);
        let cfg = c.field().clone();
        for n in 0..=5u32 {
            let ell = c.ell(n).unwrap();
            let big = c.big_l(n).unwrap();
            let expect = if n % 2 == 0 {
                big.clone()
            } else {
                Polynomial::neg(&cfg, &big)
            };
            assert_eq!(ell, expect, "q={q} n={n}");
            // deg ell(n) = q + q^2 + ... + q^n
            let deg: usize = (1..=n).map(|i| (q as usize).pow(i)).sum();
            assert_eq!(ell.degree(), Some(deg));
        }
    }
}

#[test]
fn first_power_sums_frozen() {
    // Values checked by direct summation over the monic polynomials by hand.
    let c = ctx(2);
    let cfg = c.field().clone();
    let n = 16;

    // S_1(1) = 1/t + 1/(t+1) = 1/(t^2+t)
    let s11 = c.power_sum(1, 1, n).unwrap();
    assert!(s11.agrees_with(&cfg, &rf(&cfg, vec![1], vec![0, 1, 1]).to_series(&cfg, n)));

    // S_1(3) = 1/t^3 + 1/(t+1)^3 = (t^2+t+1)/(t^2+t)^3
    let s13 = c.power_sum(1, 3, n).unwrap();
    let den = Polynomial::from_coeffs(vec![0, 1, 1]).pow(&cfg, 3);
    let expect = RationalFunction::new(&cfg, Polynomial::from_coeffs(vec![1, 1, 1]), den).unwrap();
    assert!(s13.agrees_with(&cfg, &expect.to_series(&cfg, n)));

    // S_2(1) = 1/ell(2); the four summands cancel down to the product rule
    let s21 = c.power_sum(2, 1, n).unwrap();
    let expect = RationalFunction::inverse_of(&cfg, &c.ell(2).unwrap()).unwrap();
    assert!(s21.agrees_with(&cfg, &expect.to_series(&cfg, n)));

    // S_{<2}(1) = 1 + 1/(t^2+t) = (t^2+t+1)/(t^2+t)
    let below = c.power_sum_below(2, 1, n).unwrap();
    let expect = rf(&cfg, vec![1, 1, 1], vec![0, 1, 1]);
    assert!(below.agrees_with(&cfg, &expect.to_series(&cfg, n)));

    let c3 = ctx(3);
    let cfg3 = c3.field().clone();
    // S_1(2) = 1/ell(1)^2 over F_3
    let s12 = c3.power_sum(1, 2, n).unwrap();
    let expect = RationalFunction::new(
        &cfg3,
        Polynomial::one(),
        c3.ell(1).unwrap().pow(&cfg3, 2),
    )
    .unwrap();
    assert!(s12.agrees_with(&cfg3, &expect.to_series(&cfg3, n)));
}

#[test]
fn chain_division_matches_bruteforce() {
    for &q in &[2u32, 3, 4] {
        let c = ctx(q);
        let cfg = c.field().clone();
        let n = 20;
        for d in 0..=2u32 {
            for s in 1..=7u32 {
                let fast = c.power_sum(d, s, n).unwrap();
                let slow = c.power_sum_bruteforce(d, s, n).unwrap();
                assert!(fast.agrees_with(&cfg, &slow), "q={q} d={d} s={s}");
                assert_eq!(fast.precision(), n);
            }
        }
    }
}

#[test]
fn power_sum_zero_exponent_counts_monics_mod_p() {
    let c = ctx(3);
    assert!(!c.power_sum(0, 0, 8).unwrap().is_zero());
    assert!(c.power_sum(2, 0, 8).unwrap().is_zero());
    assert!(c.power_sum(0, 5, 8).unwrap().agrees_with(
        c.field(),
        &LaurentSeries::one(8)
    ));
}

#[test]
fn closed_forms_match_series() {
    for &q in &[2u32, 3, 5] {
        let c = ctx(q);
        let cfg = c.field().clone();
        let n = 30;
        let mut found = 0u32;
        for d in 1..=3u32 {
            for s in 1..=20u32 {
                if let Some(r) = c.power_sum_closed(d, s).unwrap() {
                    found += 1;
                    let series = c.power_sum(d, s, n).unwrap();
                    assert!(
                        series.agrees_with(&cfg, &r.to_series(&cfg, n)),
                        "q={q} d={d} s={s} closed={}",
                        r.render()
                    );
                }
            }
        }
        assert!(found > 0, "no closed forms detected for q={q}");
    }
}

#[test]
fn closed_form_covers_the_expected_shapes() {
    let c = ctx(3);
    // s <= q always has a closed form
    for s in 1..=3 {
        assert!(c.power_sum_closed(2, s).unwrap().is_some());
    }
    // q^j - 1 shapes
    assert!(c.power_sum_closed(1, 8).unwrap().is_some());
    assert!(c.power_sum_closed(2, 26).unwrap().is_some());
    // twist of q^k - q^j - q^i shapes: 9 - 3 - 1 = 5
    assert!(c.power_sum_closed(1, 5).unwrap().is_some());
    // 7 = 9 - 1 - 1
    assert!(c.power_sum_closed(1, 7).unwrap().is_some());
    // 11 needs 16 digits... base 3: 27 - 11 = 16 = 121_3, digit sum 4 > q - 1
    assert!(c.power_sum_closed(1, 11).unwrap().is_none());
}

#[test]
fn frobenius_twist_of_power_sums() {
    for &q in &[2u32, 3] {
        let c = ctx(q);
        let cfg = c.field().clone();
        let n = 24;
        for d in 1..=2u32 {
            for s in 1..=5u32 {
                let twisted = c.power_sum(d, q * s, n).unwrap();
                let base = c.power_sum(d, s, n).unwrap().pow(&cfg, q as u64);
                let m = twisted.precision().min(base.precision());
                assert!(
                    twisted.truncate(m).agrees_with(&cfg, &base.truncate(m)),
                    "q={q} d={d} s={s}"
                );
            }
        }
    }
}

#[test]
fn below_closed_forms_match_accumulation() {
    for &q in &[2u32, 3] {
        let c = ctx(q);
        let cfg = c.field().clone();
        let n = 30;
        let mut found = 0u32;
        for d in 0..=3u32 {
            for s in 1..=20u32 {
                if let Some(r) = c.power_sum_below_closed(d, s).unwrap() {
                    found += 1;
                    let series = c.power_sum_below(d, s, n).unwrap();
                    assert!(
                        series.agrees_with(&cfg, &r.to_series(&cfg, n)),
                        "q={q} d={d} s={s} closed={}",
                        r.render()
                    );
                }
            }
        }
        assert!(found > 0);
    }
    // frozen: S_{<2}(1) over F_2 through the closed form
    let c = ctx(2);
    let cfg = c.field().clone();
    let r = c.power_sum_below_closed(2, 1).unwrap().unwrap();
    assert_eq!(r, rf(&cfg, vec![1, 1, 1], vec![0, 1, 1]));
}

#[test]
fn iterated_power_sum_examples() {
    let c = ctx(2);
    let cfg = c.field().clone();
    let n = 16;

    // depth exceeding available degrees is an empty sum
    assert!(c.iterated_power_sum(0, &[1, 1], n).unwrap().is_zero());
    assert!(c.iterated_power_sum(1, &[1, 1, 2], n).unwrap().is_zero());

    // S_1(1,1) = S_1(1) * S_0(1) = 1/(t^2+t)
    let s = c.iterated_power_sum(1, &[1, 1], n).unwrap();
    assert!(s.agrees_with(&cfg, &rf(&cfg, vec![1], vec![0, 1, 1]).to_series(&cfg, n)));

    // S_2(1,1) = S_2(1) (S_0(1) + S_1(1))
    let s = c.iterated_power_sum(2, &[1, 1], n).unwrap();
    let expect = LaurentSeries::mul(
        &cfg,
        &c.power_sum(2, 1, n).unwrap(),
        &c.power_sum_below(2, 1, n).unwrap(),
    );
    assert!(s.agrees_with(&cfg, &expect));

    // depth one reduces to the plain power sum
    let s = c.iterated_power_sum(2, &[3], n).unwrap();
    assert!(s.agrees_with(&cfg, &c.power_sum(2, 3, n).unwrap()));

    assert!(c.iterated_power_sum(1, &[], n).is_err());
    assert!(c.iterated_power_sum(1, &[1, 0], n).is_err());
}

#[test]
fn iterated_power_sum_matches_direct_triple_loop() {
    let c = ctx(2);
    let cfg = c.field().clone();
    let n = 14;
    for d in 2..=3u32 {
        let tuple = [2u32, 1, 1];
        let mut direct = LaurentSeries::zero(n);
        for a in monics_of_degree(&cfg, d) {
            let ia = LaurentSeries::one(n)
                .div_by_poly(&cfg, &a.pow(&cfg, 2), n)
                .unwrap();
            for d2 in 0..d {
                for b in monics_of_degree(&cfg, d2) {
                    let ib = LaurentSeries::one(n).div_by_poly(&cfg, &b, n).unwrap();
                    for d3 in 0..d2 {
                        for cpoly in monics_of_degree(&cfg, d3) {
                            let ic =
                                LaurentSeries::one(n).div_by_poly(&cfg, &cpoly, n).unwrap();
                            let prod = LaurentSeries::mul(&cfg, &ia, &LaurentSeries::mul(&cfg, &ib, &ic));
                            direct = LaurentSeries::add(&cfg, &direct, &prod.truncate(n));
                        }
                    }
                }
            }
        }
        let dp = c.iterated_power_sum(d, &tuple, n).unwrap();
        assert!(dp.agrees_with(&cfg, &direct), "d={d}");
    }
}

#[test]
fn budget_is_enforced() {
    let c = Context::with_budget(FieldConfig::new(2).unwrap(), 4);
    assert!(c.power_sum(2, 1, 10).is_ok());
    match c.power_sum(3, 1, 10) {
        Err(Error::BudgetExceeded { degree, needed, budget }) => {
            assert_eq!(degree, 3);
            assert_eq!(needed, 8);
            assert_eq!(budget, 4);
        }
        other => panic!("expected budget error, got {other:?}"),
    }
}

#[test]
fn log_of_one_frozen_coefficients() {
    // log(1) = sum 1/ell(d); over F_2 to precision 8 this is
    // 1 + t^-2 + t^-3 + t^-4 + t^-5 (the d=2 term cancels t^-6, t^-7)
    let c = ctx(2);
    let z = LaurentSeries::one(8);
    let l = c.carlitz_log(&z, 8, None).unwrap();
    assert_eq!(l.valuation(), Some(0));
    assert_eq!(l.dense_coeffs(), vec![1, 0, 1, 1, 1, 1, 0, 0]);
}

#[test]
fn log_domain_boundary() {
    let c = ctx(2);
    // valuation -1 converges
    let t = LaurentSeries::from_polynomial(&Polynomial::t(), 12);
    let lt = c.carlitz_log(&t, 12, None).unwrap();
    assert_eq!(lt.valuation(), Some(-1));
    // valuation -2 does not
    let t2 = LaurentSeries::from_polynomial(&Polynomial::from_coeffs(vec![0, 0, 1]), 12);
    match c.carlitz_log(&t2, 12, None) {
        Err(Error::NonconvergentLog { valuation }) => assert_eq!(valuation, -2),
        other => panic!("expected divergence, got {other:?}"),
    }
    // log 0 = 0, and inputs must carry enough precision
    assert!(c.carlitz_log(&LaurentSeries::zero(10), 10, None).unwrap().is_zero());
    assert!(matches!(
        c.carlitz_log(&LaurentSeries::one(4), 10, None),
        Err(Error::InsufficientPrecision)
    ));
}

#[test]
fn log_term_cap_reports_reduced_precision() {
    let c = ctx(2);
    let full = c.carlitz_log(&LaurentSeries::one(20), 20, None).unwrap();
    let capped = c.carlitz_log(&LaurentSeries::one(20), 20, Some(2)).unwrap();
    // omitting d >= 2 leaves the sum exact only below deg ell(2) = 6
    assert_eq!(capped.precision(), 6);
    assert!(capped.agrees_with(c.field(), &full.truncate(6)));
}

#[test]
fn log_functional_equation_small() {
    // t log(z) = log(t z) + log(z^q), an F_q-linear identity of the series
    for &q in &[2u32, 3] {
        let c = ctx(q);
        let cfg = c.field().clone();
        let n = 20;
        let t = LaurentSeries::from_polynomial(&Polynomial::t(), n + 1);
        for z in [
            LaurentSeries::one(n + 1),
            rf(&cfg, vec![1], vec![0, 1]).to_series(&cfg, n + 1),
        ] {
            let lhs = LaurentSeries::mul(&cfg, &t, &c.carlitz_log(&z, n + 1, None).unwrap());
            let tz = LaurentSeries::mul(&cfg, &t, &z);
            let zq = z.pow(&cfg, q as u64);
            let rhs = LaurentSeries::add(
                &cfg,
                &c.carlitz_log(&tz.truncate(n), n, None).unwrap(),
                &c.carlitz_log(&zq.truncate(n.min(zq.precision())), n, None).unwrap(),
            );
            assert!(
                lhs.truncate(n).agrees_with(&cfg, &rhs),
                "q={q} z val {:?}",
                z.valuation()
            );
        }
    }
}
