use std::time::Instant;

use ballbound::bounds;
use ballbound::harness::{oracle_roots_1d, random_instance};
use ballbound::pipeline::{bounded_ball_certificate, Options};
use ballbound::univar::{isolate_real_roots, square_le};
use ballbound::{IntPoly, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

type QPoly = Vec<Rational>;

fn to_q(p: &IntPoly) -> QPoly {
    let d = p.total_degree() as usize;
    let mut out = vec![Rational::zero(); d + 1];
    for (e, c) in p.terms() {
        out[e.iter().sum::<u32>() as usize] = Rational::from_integer(c.clone());
    }
    out
}

fn trim(a: &mut QPoly) {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
}

fn rem(a: &QPoly, b: &QPoly) -> QPoly {
    let mut r = a.clone();
    trim(&mut r);
    let lb = b.last().expect("nonzero divisor").clone();
    while r.len() >= b.len() {
        let c = r.last().unwrap().clone() / &lb;
        let shift = r.len() - b.len();
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] = &r[shift + i] - &c * bi;
        }
        r.pop();
        trim(&mut r);
    }
    r
}

fn gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

fn deriv(a: &QPoly) -> QPoly {
    a.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
        .collect()
}

fn exact_div(a: &QPoly, b: &QPoly) -> QPoly {
    let mut r = a.clone();
    trim(&mut r);
    let mut q = vec![Rational::zero(); r.len().saturating_sub(b.len()) + 1];
    let lb = b.last().unwrap().clone();
    while r.len() >= b.len() && !r.is_empty() {
        let c = r.last().unwrap().clone() / &lb;
        let shift = r.len() - b.len();
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] = &r[shift + i] - &c * bi;
        }
        q[shift] = c;
        r.pop();
        trim(&mut r);
    }
    assert!(r.is_empty(), "division was not exact");
    q
}

fn eval(a: &QPoly, x: &Rational) -> Rational {
    a.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

/// Squarefree part of `gcd(q, f)`.
fn common_part(q: &QPoly, f: &QPoly) -> QPoly {
    let h = gcd(q, f);
    if h.len() <= 1 {
        return h;
    }
    exact_div(&h, &gcd(&h, &deriv(&h)))
}

/// True when `h` (squarefree, roots among those of the polynomial the
/// interval isolates a root of) vanishes at that root.
fn vanishes_in(h: &QPoly, lo: &Rational, hi: &Rational) -> bool {
    if h.len() <= 1 {
        return false;
    }
    let (a, b) = (eval(h, lo), eval(h, hi));
    a.is_zero() || b.is_zero() || a.signum() != b.signum()
}

fn x1(s: &str) -> IntPoly {
    IntPoly::parse(s, &["X1"]).unwrap()
}

fn extracted(cert: &ballbound::pipeline::BallCertificate) -> Vec<IntPoly> {
    cert.extracted_polys
        .iter()
        .map(|e| IntPoly::parse(&e.poly, &["T"]).unwrap())
        .collect()
}

#[test]
fn x1_squared_minus_four() {
    let c = bounded_ball_certificate(&x1("X1^2 - 4"), &Options::default()).unwrap();
    let fs = extracted(&c);
    assert_eq!(fs[0], IntPoly::parse("3*T^2 - 12", &["T"]).unwrap());
    assert_eq!(fs[1], IntPoly::parse("-3*T^2 + 12", &["T"]).unwrap());
    assert_eq!(c.per_coordinate_bounds, vec![Rational::from_integer(5.into())]);
    assert_eq!(c.radius_squared, Rational::from_integer(25.into()));
    assert!(c.valid);
    let closed = bounds::thm1_radius(1, 2, 3).unwrap().radius_squared.to_biguint();
    assert!(BigInt::from(closed) >= BigInt::from(25));
}

#[test]
fn random_univariate_roots_fit_the_certificate() {
    let start = Instant::now();
    let opts = Options::default();
    let mut checked_roots = 0;
    for seed in 0..200u64 {
        let d = 1 + (seed % 6) as u32;
        let tau = 1 + (seed / 6 % 8);
        let q = random_instance(1000 + seed, 1, d, tau, 1).unwrap().remove(0);
        let c = bounded_ball_certificate(&q, &opts).unwrap();
        assert!(c.valid, "seed {seed}: {q} downgraded: {:?}", c.failed_checks().collect::<Vec<_>>());
        let closed = Rational::from_integer(c.closed_form.radius_squared.to_biguint().into());
        assert!(c.radius_squared <= closed, "seed {seed}: certificate above the closed form");
        for root in oracle_roots_1d(&q).unwrap() {
            checked_roots += 1;
            assert!(
                square_le(&root.max_abs(), &c.radius_squared),
                "seed {seed}: root {root} of {q} outside radius^2 {}",
                c.radius_squared
            );
        }
    }
    assert!(checked_roots > 100);
    assert!(start.elapsed().as_secs() < 60, "took {:?}", start.elapsed());
}

#[test]
fn extreme_roots_are_roots_of_extracted_polys() {
    let opts = Options::default();
    for seed in 0..60u64 {
        let d = 1 + (seed % 5) as u32;
        let q = random_instance(5000 + seed, 1, d, 4, 1).unwrap().remove(0);
        let roots = isolate_real_roots(&q).unwrap();
        if roots.is_empty() {
            continue;
        }
        let c = bounded_ball_certificate(&q, &opts).unwrap();
        let qq = to_q(&q);
        let parts: Vec<QPoly> = extracted(&c).iter().map(|f| common_part(&qq, &to_q(f))).collect();
        for r in [roots.first().unwrap(), roots.last().unwrap()] {
            assert!(
                parts.iter().any(|h| vanishes_in(h, &r.lo, &r.hi)),
                "seed {seed}: extreme root {r} of {q} is missed by {:?}",
                c.extracted_polys
            );
        }
    }
}

#[test]
fn constant_zero_and_empty_inputs() {
    let opts = Options::default();
    let c = bounded_ball_certificate(&x1("7"), &opts).unwrap();
    assert!(c.radius_squared.is_zero());
    assert!(!c.degenerate_notes.is_empty());
    assert!(matches!(
        bounded_ball_certificate(&x1("0"), &opts),
        Err(ballbound::Error::ZeroInput)
    ));
    let c = bounded_ball_certificate(&x1("X1^2 + 1"), &opts).unwrap();
    assert!(c.degenerate_notes.iter().any(|n| n.contains("empty")));
    assert!(c.valid);
}

#[test]
fn expired_budget_downgrades_to_the_closed_form() {
    let q = IntPoly::parse("X1^2 + X2^2 - 4", &["X1", "X2"]).unwrap();
    let opts = Options {
        deadline: Some(Instant::now()),
        ..Options::default()
    };
    let c = bounded_ball_certificate(&q, &opts).unwrap();
    assert!(!c.valid);
    assert!(c.downgraded());
    assert!(c.failed_checks().any(|ch| ch.name.contains("budget")));
    assert_eq!(c.radius_squared, c.closed_form_radius_squared());
    assert!(c.radius_squared >= Rational::from_integer(4.into()));
}

#[test]
fn circle_certificate_covers_the_circle() {
    let q = IntPoly::parse("X1^2 + X2^2 - 4", &["X1", "X2"]).unwrap();
    let c = bounded_ball_certificate(&q, &Options::default()).unwrap();
    assert!(c.valid, "{:?}", c.failed_checks().collect::<Vec<_>>());
    assert!(c.radius_squared >= Rational::from_integer(4.into()));
    assert!(c.radius_squared <= c.closed_form_radius_squared());
    assert_eq!(c.per_coordinate_bounds.len(), 2);
    assert!(c.per_coordinate_bounds.iter().all(|b| b.abs() >= Rational::one() + Rational::one()));
}
