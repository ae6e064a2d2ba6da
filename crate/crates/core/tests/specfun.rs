#![allow(clippy::excessive_precision)]

use neumann_core::specfun::{
    bessel_j, bessel_j_prime, bessel_prime_zero, bessel_prime_zeros, bessel_zero, bessel_zeros,
    mccann_bound, BesselOrder,
};
use proptest::prelude::*;

fn ord(n: u32) -> BesselOrder {
    BesselOrder::new(n).unwrap()
}

// (n, x, J_n(x), J_n'(x)) at 40 significant digits, rounded to 17.
const VALUES: &[(u32, f64, f64, f64)] = &[
    (0, 0.1, 0.99750156206604003, -0.049937526036242),
    (0, 1.0, 0.76519768655796655, -0.44005058574493352),
    (0, 2.5, -0.048383776468197996, -0.49709410246427404),
    (0, 10.0, -0.24593576445134834, -0.043472746168861437),
    (0, 100.0, 0.019985850304223122, 0.077145352014112158),
    (0, 999.0, 0.017369296355194132, 0.018309728474911622),
    (1, 0.5, 0.24226845767487389, 0.45393289189106513),
    (1, 3.0, 0.33905895852593646, -0.37307160774391226),
    (1, 50.0, -0.097511828125175138, 0.057762564231755318),
    (2, 1.0, 0.11490348493190048, 0.21024361588113256),
    (5, 2.0, 0.0070396297558716855, 0.01639664541788922),
    (5, 7.5, 0.28347390516255046, -0.16515792347067829),
    (10, 1.0, 2.6306151236874532e-10, 2.6186350562244218e-9),
    (10, 10.0, 0.20748610663335886, 0.084369578631761188),
    (10, 30.0, -0.12987689399858877, -0.068351103137354133),
    (30, 25.0, 0.011809026124269016, 0.0082819626485637303),
    (50, 60.0, -0.13798273148535212, -0.0011110876724694528),
    (100, 100.0, 0.09636667329586156, 0.018877252027176239),
    (150, 300.0, 0.0078824451643922292, -0.04233978877818897),
    (200, 150.0, 8.0577021983968538e-14, 7.1401020696162804e-14),
    (200, 1000.0, 0.0041835315250220756, -0.02463864943053019),
    (3, 500.0, -0.010199473891695385, 0.03420364417796366),
    (20, 5.0, 2.7703300521289417e-11, 1.0746938209840448e-10),
];

// (n, m, j_{n,m}, j'_{n,m}); for n = 0 the trivial zero of J_0' is not ranked.
const ZEROS: &[(u32, u32, f64, f64)] = &[
    (0, 1, 2.4048255576957728, 3.8317059702075123),
    (0, 2, 5.5200781102863106, 7.0155866698156188),
    (0, 10, 30.634606468431975, 32.189679910974404),
    (1, 1, 3.8317059702075123, 1.8411837813406593),
    (1, 5, 16.470630050877633, 14.863588633909033),
    (2, 3, 11.619841172149059, 9.9694678230875958),
    (5, 1, 8.771483815959954, 6.4156163757002403),
    (10, 4, 25.509450554182826, 23.760715860327448),
    (40, 2, 52.016146779428546, 49.38585711835219),
    (100, 1, 108.83616589840977, 103.76837768254227),
    (200, 1, 211.02916651055469, 204.74096027677123),
    (0, 200, 627.53333174690423, 629.10333279552104),
    (7, 150, 481.39843965136616, 479.82643505681693),
];

#[test]
fn values_match_reference_table() {
    for &(n, x, j, jd) in VALUES {
        let scale = j.abs().max(1e-300);
        let got = bessel_j(ord(n), x).unwrap();
        let err = (got - j).abs();
        assert!(err <= 1e-13 || err / scale <= 1e-11, "J_{n}({x}) = {got}, want {j}");
        let got = bessel_j_prime(ord(n), x).unwrap();
        let err = (got - jd).abs();
        assert!(err <= 1e-13 || err / jd.abs() <= 1e-11, "J_{n}'({x}) = {got}, want {jd}");
    }
}

#[test]
fn zeros_match_reference_table() {
    for &(n, m, z, zp) in ZEROS {
        let got = bessel_zero(ord(n), m).unwrap();
        assert_eq!((got.n, got.m), (n, m));
        assert!((got.value - z).abs() <= 1e-12 * z, "j_({n},{m}) = {}, want {z}", got.value);
        let got = bessel_prime_zero(ord(n), m).unwrap().value;
        assert!((got - zp).abs() <= 1e-12 * zp, "j'_({n},{m}) = {got}, want {zp}");
    }
}

/// Independent first zero of J_0: bisection on the ascending series summed
/// with exact term ratios.
#[test]
fn first_zero_of_j0_against_series_bisection() {
    fn j0(x: f64) -> f64 {
        let q = -(x * x) / 4.0;
        let (mut t, mut s) = (1.0f64, 1.0f64);
        for k in 1..60 {
            t *= q / (k * k) as f64;
            s += t;
        }
        s
    }
    let (mut lo, mut hi) = (2.0f64, 3.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if j0(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let z = bessel_zero(ord(0), 1).unwrap().value;
    assert!((z - lo).abs() < 1e-14);
    assert!((z - 2.404825557695773).abs() < 1e-12);
}

#[test]
fn zeros_are_roots_and_exceed_mccann_bound() {
    for n in [0u32, 1, 4, 17, 60, 200] {
        for z in bessel_zeros(ord(n), 12).unwrap() {
            assert!(bessel_j(ord(n), z.value).unwrap().abs() < 1e-11);
            assert!(z.value > mccann_bound(n, z.m));
        }
        for z in bessel_prime_zeros(ord(n), 12).unwrap() {
            assert!(bessel_j_prime(ord(n), z.value).unwrap().abs() < 1e-11);
        }
    }
}

#[test]
fn zeros_of_consecutive_orders_interlace() {
    for n in 0..30 {
        let a = bessel_zeros(ord(n), 20).unwrap();
        let b = bessel_zeros(ord(n + 1), 20).unwrap();
        for m in 0..19 {
            assert!(a[m].value < b[m].value && b[m].value < a[m + 1].value, "n={n} m={m}");
        }
    }
}

#[test]
fn prime_zeros_interlace_with_zeros() {
    for n in 1..25 {
        let z = bessel_zeros(ord(n), 15).unwrap();
        let zp = bessel_prime_zeros(ord(n), 15).unwrap();
        assert!((n as f64) <= zp[0].value);
        for m in 0..14 {
            assert!(zp[m].value < z[m].value && z[m].value < zp[m + 1].value);
        }
    }
}

proptest! {
    #[test]
    fn three_term_recurrence(n in 1u32..199, x in 0.05f64..1000.0) {
        let a = bessel_j(ord(n - 1), x).unwrap();
        let b = bessel_j(ord(n), x).unwrap();
        let c = bessel_j(ord(n + 1), x).unwrap();
        let resid = a + c - 2.0 * n as f64 / x * b;
        let scale = a.abs().max(b.abs() * n as f64 / x).max(c.abs()).max(1e-300);
        prop_assert!(resid.abs() <= 1e-10 * scale + 1e-14, "resid {resid}");
    }

    #[test]
    fn bounded_by_one(n in 0u32..=200, x in 0.0f64..1000.0) {
        prop_assert!(bessel_j(ord(n), x).unwrap().abs() <= 1.0);
    }

    #[test]
    fn zeros_increase_with_rank(n in 0u32..=200, m in 1u32..40) {
        let zs = bessel_zeros(ord(n), m + 1).unwrap();
        prop_assert!(zs[m as usize - 1].value < zs[m as usize].value);
    }
}
