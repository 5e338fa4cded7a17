//! Golden examples checked by `ballbound selftest`.

use ballbound::bounds::{self, Pow2Int};
use ballbound::linalg;
use ballbound::pipeline::{self, Options, SaMode, SaOutcome};
use ballbound::sgb::{SgbShape, SpecialGroebnerBasis};
use ballbound::{Error, IntPoly, Rational};
use num_bigint::BigUint;

type Check = Result<(), String>;
type Fixture = (&'static str, fn() -> Check);

fn expect<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Check {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, expected {want:?}"))
    }
}

fn pow2(m: u64, e: u64) -> Pow2Int {
    Pow2Int::new(BigUint::from(m), e)
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn x1(s: &str) -> IntPoly {
    IntPoly::parse(s, &["X1"]).expect("fixture parses")
}

fn closed_forms() -> Check {
    let e = |r: ballbound::Result<bounds::BoundReport>| r.map_err(|e| e.to_string());
    expect("thm1(1,2,2)", e(bounds::thm1_radius(1, 2, 2))?.radius_squared, pow2(1, 148))?;
    expect("thm1(2,2,1)", e(bounds::thm1_radius(2, 2, 1))?.radius_squared, pow2(98, 432))?;
    let t2 = e(bounds::thm2_radius(1, 1, 1))?;
    expect("thm2(1,1,1)", t2.radius_squared, pow2(793, 11328))?;
    let i = &t2.intermediates;
    expect(
        "thm2(1,1,1) intermediates",
        (i.dprime, i.big_d, i.n, i.rho, i.rhoprime, i.tauprime),
        (Some(6), Some(6), 6, Some(142), Some(16), Some(1020)),
    )?;
    expect("thm3(1,1,2,1)", e(bounds::thm3_radius(1, 1, 2, 1))?.radius_squared, pow2(1, 244))?;
    expect("thm4(1,1,2,1)", e(bounds::thm4_radius(1, 1, 2, 1))?.radius_squared, pow2(793, 15288))
}

fn algorithm_fixture() -> Check {
    let g = IntPoly::parse("zeta*X1^3 + 3*X1^2 - 12", &["X1", "zeta"]).map_err(|e| e.to_string())?;
    let shape = SgbShape {
        x_vars: vec!["X1".into()],
        z: "zeta".into(),
        y: Vec::new(),
        degrees: vec![3],
        lambda: 0,
        tau_g: 5,
    };
    let run = || -> ballbound::Result<(String, IntPoly, u64, u64)> {
        let b = SpecialGroebnerBasis::new(shape, vec![g])?;
        let m = b.mult_matrix(1)?;
        let audit = b.audit_entries(std::slice::from_ref(&m))?;
        let chi = linalg::charpoly(&m, "T")?;
        Ok((m.to_string(), chi, audit.max_bitsize, audit.bitsize_bound))
    };
    let (m, chi, bits, bound) = run().map_err(|e| e.to_string())?;
    expect("M'_1", m.as_str(), "[[0, 0, 12*zeta^2], [1, 0, 0], [0, 1, -3]]")?;
    let want = IntPoly::parse("T^3 + 3*T^2 - 12*zeta^2", chi.vars()).map_err(|e| e.to_string())?;
    expect("charpoly", chi, want)?;
    expect("entry bitsize estimate", bound, 19)?;
    if bits > bound {
        return Err(format!("entry bitsize {bits} exceeds {bound}"));
    }
    Ok(())
}

fn bounded_certificate() -> Check {
    let c = pipeline::bounded_ball_certificate(&x1("X1^2 - 4"), &Options::default()).map_err(|e| e.to_string())?;
    let polys: Vec<&str> = c.extracted_polys.iter().map(|e| e.poly.as_str()).collect();
    expect("f+, f-", polys, vec!["3*T^2 - 12", "-3*T^2 + 12"])?;
    expect("C_1", c.per_coordinate_bounds.clone(), vec![int(5)])?;
    expect("radius^2", c.radius_squared.clone(), int(25))?;
    expect("valid", c.valid, true)?;
    let t1 = bounds::thm1_radius(1, 2, 3).map_err(|e| e.to_string())?;
    if t1.radius_squared.cmp_rational(&c.radius_squared).is_lt() {
        return Err("certificate exceeds thm1(1,2,3)".into());
    }
    Ok(())
}

fn semi_algebraic() -> Check {
    let fam = [x1("X1 - 1"), x1("X1 + 1")];
    let out = pipeline::sa_contain(&fam, SaMode::Certificate, &Options::default()).map_err(|e| e.to_string())?;
    let SaOutcome::Certificate(c) = out else {
        return Err("expected a certificate".into());
    };
    expect("subsets", c.subsets.len(), 3)?;
    let max = c.subsets.iter().map(|s| s.radius_squared.clone()).max().unwrap_or_default();
    expect("radius^2 is the subset maximum", c.radius_squared.clone(), max)?;
    if c.radius_squared < int(1) {
        return Err(format!("radius^2 {} does not cover +-1", c.radius_squared));
    }
    expect("valid", c.valid, true)
}

fn degenerate() -> Check {
    let opts = Options::default();
    let c = pipeline::bounded_ball_certificate(&x1("7"), &opts).map_err(|e| e.to_string())?;
    expect("constant radius^2", c.radius_squared.clone(), int(0))?;
    if c.degenerate_notes.is_empty() {
        return Err("constant input left no note".into());
    }
    match pipeline::bounded_ball_certificate(&x1("0"), &opts) {
        Err(Error::ZeroInput) => {}
        other => return Err(format!("zero input gave {:?}", other.map(|c| c.radius_squared))),
    }
    for run in [pipeline::bounded_ball_certificate, pipeline::meeting_ball_certificate] {
        let c = run(&x1("X1^2 + 1"), &opts).map_err(|e| e.to_string())?;
        if !c.degenerate_notes.iter().any(|n| n.contains("empty")) {
            return Err(format!("X1^2 + 1 ({:?}) has no emptiness note", c.mode));
        }
    }
    Ok(())
}

/// Prints one line per fixture; returns the exit code.
pub(crate) fn run() -> u8 {
    let fixtures: [Fixture; 5] = [
        ("closed_forms", closed_forms),
        ("algorithm1_fixture", algorithm_fixture),
        ("bounded_certificate_x1sq_minus_4", bounded_certificate),
        ("semi_algebraic_two_points", semi_algebraic),
        ("degenerate_inputs", degenerate),
    ];
    let mut failed = 0;
    for (name, f) in fixtures {
        match f() {
            Ok(()) => println!("ok       {name}"),
            Err(e) => {
                failed += 1;
                println!("MISMATCH {name}: {e}");
            }
        }
    }
    if failed == 0 {
        0
    } else {
        1
    }
}
