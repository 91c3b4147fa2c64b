use inhom_core::expansion::{gamma_value, m_star, m_value, reflect, TSequence};
use inhom_core::ncf::make_alpha;
use inhom_core::oracle::{brute_force_min, liminf_estimate, two_sided_min, OracleMode, DEFAULT_WINDOWS};
use inhom_core::spectrum::{class_tsequence, ClassId, Family};

#[test]
fn two_seven_largest_value_is_b_squared_minus_two_b() {
    // the direct search separates 1 - 1/35 from 1 - 1/42 by a wide margin
    let al = make_alpha(2, 7).unwrap();
    let g = gamma_value(&class_tsequence(&ClassId::zero_t(3), &al).unwrap(), &al);
    let (p, n) = two_sided_min(&al, &g, 1_000, 1_000_000, OracleMode::Hybrid).unwrap();
    let found = p.approx().min(n.approx());
    let m = |den: i64| m_value(&(al.eta() * (1 - al.frac(1, den))), &al).to_f64();
    assert!((found - m(35)).abs() < 2e-5, "{found} vs {}", m(35));
    assert!((found - m(42)).abs() > 1e-4);
}

#[test]
fn reflected_point_gives_the_same_minimum() {
    let al = make_alpha(4, 7).unwrap();
    let ts = TSequence::periodic(vec![-2, 1]).unwrap();
    let g = gamma_value(&ts, &al);
    let g2 = gamma_value(&reflect(&ts, &al), &al);
    let a = two_sided_min(&al, &g, 1_000, 200_000, OracleMode::Hybrid).unwrap();
    let b = two_sided_min(&al, &g2, 1_000, 200_000, OracleMode::Hybrid).unwrap();
    let lo = |r: &(inhom_core::OracleReport, inhom_core::OracleReport)| r.0.approx().min(r.1.approx());
    assert!((lo(&a) - lo(&b)).abs() < 1e-3);
}

#[test]
fn windows_stabilise_near_the_exact_value() {
    let al = make_alpha(5, 7).unwrap();
    let ts = class_tsequence(&ClassId::single(Family::Zero), &al).unwrap();
    let g = gamma_value(&ts, &al);
    let exact = m_value(&m_star(&ts, &al), &al).to_f64();
    let pos = liminf_estimate(&al, &g, &[(100, 1_000), (1_000, 10_000), (10_000, 100_000)], OracleMode::Hybrid).unwrap();
    let neg = liminf_estimate(&al, &-&g, &DEFAULT_WINDOWS, OracleMode::Hybrid).unwrap();
    assert_eq!(pos.rows.len(), 3);
    let est = pos.estimate.to_f64().min(neg.estimate.to_f64());
    assert!((est - exact).abs() / exact < 1e-2, "{est} vs {exact}");
    // every window minimum stays above the liminf up to the window effect
    for r in pos.rows.iter().chain(neg.rows.iter()) {
        assert!(r.approx() > exact * 0.99);
    }
}

#[test]
fn zero_pattern_goes_to_zero() {
    let al = make_alpha(3, 7).unwrap();
    let g = al.eta() * 3 + al.int(2);
    let r = brute_force_min(&al, &g, 1, 10).unwrap();
    assert!(r.window_min.is_zero());
    assert_eq!(r.argmin, 3);
}
