use inhom_core::expansion::{cuts, d_minus, d_plus, gamma_value, m_star, reflect, TSequence};
use inhom_core::ncf::{make_alpha, ncf_expand, PeriodTwoAlpha, DEFAULT_MAX_TERMS};
use inhom_core::quadfield::{rat, QuadNum};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

const FIELDS: [i128; 8] = [2, 3, 5, 6, 7, 14, 15, 138];

fn qnum() -> impl Strategy<Value = QuadNum> {
    (-40i64..40, 1i64..12, -40i64..40, 1i64..12, 0usize..FIELDS.len())
        .prop_map(|(a, b, c, d, f)| QuadNum::new(rat(a, b), rat(c, d), FIELDS[f]).unwrap())
}

fn same_field() -> impl Strategy<Value = (QuadNum, QuadNum, QuadNum)> {
    (0usize..FIELDS.len(), prop::array::uniform6(-30i64..30), prop::array::uniform3(1i64..9)).prop_map(|(f, v, d)| {
        let n = FIELDS[f];
        let mk = |p: i64, q: i64, den: i64| QuadNum::new(rat(p, den), rat(q, den), n).unwrap();
        (mk(v[0], v[1], d[0]), mk(v[2], v[3], d[1]), mk(v[4], v[5], d[2]))
    })
}

fn decimal_as_rational(text: &str) -> BigRational {
    let neg = text.starts_with('-');
    let body = text.trim_start_matches('-');
    let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
    let num: BigInt = format!("{ip}{fp}").parse().unwrap();
    let den = BigInt::from(10u32).pow(fp.len() as u32);
    let r = BigRational::new(num, den);
    if neg {
        -r
    } else {
        r
    }
}

/// A periodic t-sequence for some `(a, b)` with every `t_k < a_k`.
///
/// Sequences with full digits are exercised through the named classes; an
/// arbitrary pattern of them can encode a non-canonical expansion.
fn periodic_gamma() -> impl Strategy<Value = (PeriodTwoAlpha, TSequence)> {
    (2i64..9, 1i64..6, 1usize..4).prop_flat_map(|(a, gap, pairs)| {
        let b = (a + gap).max(5);
        let al = make_alpha(a, b).unwrap();
        let odd = (0..a - 1).prop_map(move |j| -(a - 2) + 2 * j);
        let even = (0..b - 1).prop_map(move |j| -(b - 2) + 2 * j);
        prop::collection::vec((odd, even), pairs).prop_map(move |v| {
            let period: Vec<i64> = v.iter().flat_map(|&(x, y)| [x, y]).collect();
            (al.clone(), TSequence::periodic(period).unwrap())
        })
    })
}

proptest! {
    #[test]
    fn field_axioms((x, y, z) in same_field()) {
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!((&x + &y) + &z, &x + (&y + &z));
        prop_assert_eq!((&x * &y) * &z, &x * (&y * &z));
        prop_assert_eq!(&x * (&y + &z), &x * &y + &x * &z);
        prop_assert!((&x - &x).is_zero());
        if !x.is_zero() {
            prop_assert_eq!(&x * x.inverse().unwrap(), x.with_int(1));
            prop_assert_eq!((&y / &x) * &x, y.clone());
        }
    }

    #[test]
    fn ordering_is_consistent((x, y, _z) in same_field()) {
        let lt = x < y;
        let gt = x > y;
        prop_assert!(!(lt && gt));
        prop_assert_eq!(lt, (&y - &x).is_positive());
        prop_assert_eq!(x == y, !lt && !gt);
    }

    #[test]
    fn decimal_is_within_bound(x in qnum(), digits in 0u32..25) {
        let d = x.decimal(digits);
        let approx = decimal_as_rational(&d.text);
        let exact = &x - QuadNum::from_rational(approx, x.radicand());
        prop_assert!(exact.abs() <= QuadNum::from_rational(d.error_bound(), x.radicand()));
    }

    #[test]
    fn sign_agrees_with_decimal(x in qnum()) {
        let v: f64 = x.decimal(30).text.parse().unwrap();
        if v.abs() > 1e-20 {
            prop_assert_eq!(x.sign(), if v > 0.0 { 1 } else { -1 });
        }
        prop_assert_eq!(x.sign() == 0, x.is_zero());
    }

    #[test]
    fn floor_brackets(x in qnum()) {
        let f = QuadNum::from_bigint(x.floor(), x.radicand());
        prop_assert!(f <= x);
        prop_assert!(x < &f + 1);
        let c = QuadNum::from_bigint(x.ceil(), x.radicand());
        prop_assert!(c >= x);
        prop_assert!(&c - 1 < x);
    }

    #[test]
    fn expansion_round_trip(p in -20i64..20, q in 1i64..4, den in 1i64..5, neg in any::<bool>(), f in 0usize..FIELDS.len()) {
        // small coefficients keep the period within the default term budget
        let q = if neg { -q } else { q };
        let x = QuadNum::new(rat(p, den), rat(q, den), FIELDS[f]).unwrap();
        let cf = ncf_expand(&x, DEFAULT_MAX_TERMS).unwrap();
        prop_assert_eq!(cf.value(x.radicand()), x);
    }

    #[test]
    fn shift_and_reflection_keep_m_star((al, ts) in periodic_gamma(), shift in 0usize..4) {
        let base = m_star(&ts, &al);
        prop_assert_eq!(&m_star(&ts.rotate_pairs(shift), &al), &base);
        let r = reflect(&ts, &al);
        prop_assert!(r.validate(&al).is_ok());
        prop_assert_eq!(&m_star(&r, &al), &base);
        prop_assert_eq!(reflect(&r, &al), ts.clone());
    }

    #[test]
    fn reflection_is_the_mirror_point((al, ts) in periodic_gamma()) {
        // gamma + gamma' + eta is an integer
        let s = gamma_value(&ts, &al) + gamma_value(&reflect(&ts, &al), &al) + al.eta();
        prop_assert!(s.is_rational());
        prop_assert!(s.p().is_integer());
    }

    #[test]
    fn tails_follow_the_recurrences((al, ts) in periodic_gamma()) {
        for c in cuts(&ts, &al) {
            prop_assert_eq!(&c.d_plus, &d_plus(&ts, c.index, &al).unwrap());
            prop_assert_eq!(&c.d_minus, &d_minus(&ts, c.index, &al).unwrap());
        }
    }

    #[test]
    fn m_star_is_positive_and_below_one((al, ts) in periodic_gamma()) {
        let m = m_star(&ts, &al);
        prop_assert!(m.sign() >= 0);
        prop_assert!(m < al.int(1));
    }
}
