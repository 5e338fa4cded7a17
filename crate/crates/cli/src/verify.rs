//! `verify`: brute-force checks of a radius.

use ballbound::harness::{self, GridReport};
use ballbound::univar::{self, IsolatingInterval};
use ballbound::Rational;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::{load, print_json, usage, CliMode, Failure, VerifyArgs};

/// Largest automatic box half-width; beyond this the grid says nothing.
const MAX_AUTO_BOX: f64 = 1e6;

#[derive(Serialize)]
struct VerifyReport {
    mode: &'static str,
    k: usize,
    radius_squared: String,
    oracle: &'static str,
    passed: bool,
    failures: Vec<String>,
    notes: Vec<String>,
    roots: Option<Vec<IsolatingInterval>>,
    grid: Option<GridReport>,
}

fn rational_sqrt_f64(r: &Rational) -> f64 {
    let v = r.to_f64().unwrap_or(f64::INFINITY);
    v.sqrt()
}

pub(crate) fn run(a: &VerifyArgs) -> Result<u8, Failure> {
    let file = load(&a.input)?;
    let family = file.polys()?;
    let radius_sq: Rational = a
        .radius_sq
        .trim()
        .parse()
        .map_err(|_| usage(format!("--radius-sq {:?} is not NUM or NUM/DEN", a.radius_sq)))?;
    if radius_sq.is_negative() {
        return Err(usage("--radius-sq must be nonnegative"));
    }
    let mode = match a.mode {
        CliMode::Contain => "contain",
        CliMode::Meet => "meet",
    };
    let k = file.variables.len();
    let mut report = VerifyReport {
        mode,
        k,
        radius_squared: radius_sq.to_string(),
        oracle: "",
        passed: true,
        failures: Vec::new(),
        notes: Vec::new(),
        roots: None,
        grid: None,
    };
    match k {
        1 => {
            report.oracle = "roots_1d";
            let mut all = Vec::new();
            for (p, named) in family.iter().zip(&file.polynomials) {
                for iv in harness::oracle_roots_1d(p)? {
                    if !univar::square_le(&iv.max_abs(), &radius_sq) {
                        report
                            .failures
                            .push(format!("root {iv} of {} lies outside the ball", named.name));
                    }
                    all.push(iv);
                }
            }
            report
                .notes
                .push("components in one variable are points and intervals between roots".into());
            report.roots = Some(all);
        }
        2 => {
            report.oracle = "grid";
            let radius = rational_sqrt_f64(&radius_sq);
            let half = if a.box_half_width.eq_ignore_ascii_case("auto") {
                let mut b = 1.25 * radius;
                if b > MAX_AUTO_BOX {
                    report.notes.push(format!("box clamped to {MAX_AUTO_BOX}"));
                    b = MAX_AUTO_BOX;
                }
                if b < 1.0 {
                    report.notes.push("box widened to 1".into());
                    b = 1.0;
                }
                b
            } else {
                a.box_half_width
                    .parse::<f64>()
                    .map_err(|_| usage(format!("--box {:?} is not a number or AUTO", a.box_half_width)))?
            };
            let sign = file.sign_condition();
            let grid = harness::oracle_extent_grid(&family, sign.as_ref(), a.grid, half)?;
            match a.mode {
                CliMode::Contain => {
                    for c in grid.bounded() {
                        if c.max_distance > radius + grid.error_bound {
                            report.failures.push(format!(
                                "bounded component {} reaches distance {:.6} > {:.6}",
                                c.label, c.max_distance, radius
                            ));
                        }
                    }
                }
                CliMode::Meet => {
                    for c in &grid.components {
                        if c.min_distance > radius + grid.error_bound {
                            report.failures.push(format!(
                                "component {} stays at distance {:.6} > {:.6}",
                                c.label, c.min_distance, radius
                            ));
                        }
                    }
                    report
                        .notes
                        .push("components that do not enter the box are not seen".into());
                }
            }
            report.grid = Some(grid);
        }
        _ => return Err(usage("verification supports one or two variables")),
    }
    report.passed = report.failures.is_empty();
    print_json(&report);
    Ok(if report.passed { 0 } else { 1 })
}
