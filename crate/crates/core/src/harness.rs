//! Brute-force oracles for checking certificates on small instances, and a
//! reproducible random instance generator.
//!
//! The grid oracle is approximate. Callers compare its distances with the
//! reported error margin added, never as exact values.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{var_list, IntPoly};
use crate::univar::{self, IsolatingInterval};

/// Sorted isolating intervals of the real roots of a univariate polynomial.
/// For `k = 1` these are exactly the connected components of the zero set.
pub fn oracle_roots_1d(q: &IntPoly) -> Result<Vec<IsolatingInterval>> {
    if q.is_zero() {
        return Err(Error::ZeroInput);
    }
    univar::isolate_real_roots(q)
}

/// Signs imposed on the members of a family, by index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignCondition {
    assignment: BTreeMap<usize, i8>,
}

impl SignCondition {
    /// `signs[i]` is the sign of polynomial `i`; each must be -1, 0 or 1.
    pub fn new(signs: &[i8]) -> Result<Self> {
        if let Some(bad) = signs.iter().find(|s| !(-1..=1).contains(*s)) {
            return Err(Error::Precondition(format!("sign {bad} is not in {{-1, 0, 1}}")));
        }
        Ok(SignCondition {
            assignment: signs.iter().copied().enumerate().collect(),
        })
    }

    /// The all-zero condition, i.e. the common zero set.
    pub fn zeros(s: usize) -> Self {
        SignCondition {
            assignment: (0..s).map(|i| (i, 0)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn sign(&self, i: usize) -> Option<i8> {
        self.assignment.get(&i).copied()
    }

    /// Exact check at a rational or integer point, via the sign of the value.
    pub fn holds_at(&self, family: &[IntPoly], point: &[crate::poly::Rational]) -> bool {
        self.assignment.iter().all(|(&i, &s)| {
            let v = family[i].eval_rational(point);
            let sv = if v > num_traits::Zero::zero() {
                1
            } else if v < num_traits::Zero::zero() {
                -1
            } else {
                0
            };
            sv == s
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridComponent {
    pub label: usize,
    pub cells: usize,
    /// Centre of the member cell closest to the origin.
    pub representative: [f64; 2],
    /// False when some cell lies on the boundary of the box.
    pub bounded: bool,
    pub min_distance: f64,
    pub max_distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridReport {
    pub resolution: usize,
    pub box_half_width: f64,
    /// Bound on the distance between a cell centre and any point of the cell.
    pub error_bound: f64,
    pub components: Vec<GridComponent>,
}

impl GridReport {
    pub fn bounded(&self) -> impl Iterator<Item = &GridComponent> {
        self.components.iter().filter(|c| c.bounded)
    }

    /// True when every bounded component lies in the ball, up to the grid error.
    pub fn bounded_inside(&self, radius: f64) -> bool {
        self.bounded().all(|c| c.max_distance <= radius + self.error_bound)
    }

    /// True when every component comes within the ball, up to the grid error.
    pub fn all_met(&self, radius: f64) -> bool {
        self.components
            .iter()
            .all(|c| c.min_distance <= radius + self.error_bound)
    }
}

pub const MIN_GRID_RESOLUTION: usize = 64;

/// Labels the cells of a uniform `resolution x resolution` grid over
/// `[-half_width, half_width]^2` that realize `sign` (the common zero set when
/// `None`) and groups them into 8-connected components.
///
/// A cell realizes `P = 0` when the values of `P` at its corners do not all
/// share a strict sign, and `P > 0` (resp. `< 0`) when the value at its centre
/// does.
pub fn oracle_extent_grid(
    family: &[IntPoly],
    sign: Option<&SignCondition>,
    resolution: usize,
    half_width: f64,
) -> Result<GridReport> {
    if family.is_empty() {
        return Err(Error::Precondition("empty family".into()));
    }
    if family.iter().any(|p| p.nvars() != 2) {
        return Err(Error::Precondition("the grid oracle needs exactly two variables".into()));
    }
    if resolution < MIN_GRID_RESOLUTION {
        return Err(Error::Precondition(format!(
            "grid resolution {resolution} is below {MIN_GRID_RESOLUTION}"
        )));
    }
    if !(half_width.is_finite() && half_width > 0.0) {
        return Err(Error::Precondition("box half-width must be positive".into()));
    }
    let zeros;
    let sign = match sign {
        Some(s) => s,
        None => {
            zeros = SignCondition::zeros(family.len());
            &zeros
        }
    };
    if sign.len() != family.len() || (0..family.len()).any(|i| sign.sign(i).is_none()) {
        return Err(Error::Precondition("sign condition must assign every polynomial".into()));
    }

    let r = resolution;
    let h = 2.0 * half_width / r as f64;
    let coord = |i: usize| -half_width + i as f64 * h;
    let centre = |i: usize| -half_width + (i as f64 + 0.5) * h;

    // Corner values, one row of r+1 points per grid line, per polynomial.
    let corners: Vec<Vec<Vec<f64>>> = family
        .iter()
        .map(|p| {
            (0..=r)
                .into_par_iter()
                .map(|iy| (0..=r).map(|ix| p.eval_f64(&[coord(ix), coord(iy)])).collect())
                .collect()
        })
        .collect();

    let member: Vec<Vec<bool>> = (0..r)
        .into_par_iter()
        .map(|iy| {
            (0..r)
                .map(|ix| {
                    family.iter().enumerate().all(|(pi, p)| match sign.sign(pi) {
                        Some(0) => {
                            let c = &corners[pi];
                            let v = [c[iy][ix], c[iy][ix + 1], c[iy + 1][ix], c[iy + 1][ix + 1]];
                            !(v.iter().all(|x| *x > 0.0) || v.iter().all(|x| *x < 0.0))
                        }
                        Some(s) => {
                            let v = p.eval_f64(&[centre(ix), centre(iy)]);
                            if s > 0 {
                                v > 0.0
                            } else {
                                v < 0.0
                            }
                        }
                        None => unreachable!(),
                    })
                })
                .collect()
        })
        .collect();

    let mut label = vec![vec![usize::MAX; r]; r];
    let mut components = Vec::new();
    for sy in 0..r {
        for sx in 0..r {
            if !member[sy][sx] || label[sy][sx] != usize::MAX {
                continue;
            }
            let id = components.len();
            let mut comp = GridComponent {
                label: id,
                cells: 0,
                representative: [0.0, 0.0],
                bounded: true,
                min_distance: f64::INFINITY,
                max_distance: 0.0,
            };
            label[sy][sx] = id;
            let mut stack = vec![(sx, sy)];
            while let Some((x, y)) = stack.pop() {
                comp.cells += 1;
                if x == 0 || y == 0 || x + 1 == r || y + 1 == r {
                    comp.bounded = false;
                }
                let (cx, cy) = (centre(x), centre(y));
                let dist = cx.hypot(cy);
                if dist < comp.min_distance {
                    comp.min_distance = dist;
                    comp.representative = [cx, cy];
                }
                comp.max_distance = comp.max_distance.max(dist);
                for dy in -1i64..=1 {
                    for dx in -1i64..=1 {
                        let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                        if nx < 0 || ny < 0 || nx >= r as i64 || ny >= r as i64 {
                            continue;
                        }
                        let (nx, ny) = (nx as usize, ny as usize);
                        if member[ny][nx] && label[ny][nx] == usize::MAX {
                            label[ny][nx] = id;
                            stack.push((nx, ny));
                        }
                    }
                }
            }
            components.push(comp);
        }
    }
    Ok(GridReport {
        resolution,
        box_half_width: half_width,
        error_bound: half_width * 2f64.sqrt() / resolution as f64,
        components,
    })
}

/// `s` pseudo-random polynomials in `X1..Xk`, each of total degree exactly
/// `d`, with nonzero coefficients of bitsize at most `tau`. Deterministic in
/// all arguments.
pub fn random_instance(seed: u64, k: usize, d: u32, tau: u64, s: usize) -> Result<Vec<IntPoly>> {
    if k == 0 || d == 0 || tau == 0 || s == 0 {
        return Err(Error::Parameter("random_instance parameters must be positive".into()));
    }
    if tau > 62 {
        return Err(Error::Parameter("coefficient bitsize above 62 is not supported".into()));
    }
    let names: Vec<String> = (1..=k).map(|i| format!("X{i}")).collect();
    let vars = var_list(&names);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cmax = (1i64 << tau) - 1;
    let coeff = |rng: &mut ChaCha8Rng| {
        let c = rng.gen_range(1..=cmax);
        BigInt::from(if rng.gen_bool(0.5) { c } else { -c })
    };
    let random_exps = |rng: &mut ChaCha8Rng, total: u32| {
        let mut e = vec![0u32; k];
        for _ in 0..total {
            e[rng.gen_range(0..k)] += 1;
        }
        e
    };
    let mut out = Vec::with_capacity(s);
    for _ in 0..s {
        let mut terms = vec![(random_exps(&mut rng, d), coeff(&mut rng))];
        let extra = rng.gen_range(0..=d as usize + 1);
        for _ in 0..extra {
            let deg = rng.gen_range(0..d);
            terms.push((random_exps(&mut rng, deg), coeff(&mut rng)));
        }
        out.push(IntPoly::from_terms(vars.clone(), terms)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Rational;

    fn p2(s: &str) -> IntPoly {
        IntPoly::parse(s, &["X1", "X2"]).unwrap()
    }

    #[test]
    fn roots_1d() {
        let x = |s: &str| IntPoly::parse(s, &["X1"]).unwrap();
        let r = oracle_roots_1d(&x("X1^2 - 4")).unwrap();
        let pts: Vec<Rational> = r.iter().map(|i| i.lo.clone()).collect();
        assert_eq!(pts, [Rational::from_integer((-2).into()), Rational::from_integer(2.into())]);
        assert!(oracle_roots_1d(&x("X1^2 + 1")).unwrap().is_empty());
        let r = oracle_roots_1d(&x("X1^2 + 2*X1 - 15")).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r[0].lo, Rational::from_integer((-5).into()));
        assert_eq!(r[1].hi, Rational::from_integer(3.into()));
        assert!(oracle_roots_1d(&x("0")).is_err());
    }

    #[test]
    fn hyperbola_grid() {
        let g = oracle_extent_grid(&[p2("X1*X2 - 1")], None, 512, 4.0).unwrap();
        assert_eq!(g.components.len(), 2);
        assert!(g.components.iter().all(|c| !c.bounded));
        for c in &g.components {
            assert!((c.min_distance - 2f64.sqrt()).abs() <= g.error_bound + 1e-9, "{c:?}");
        }
    }

    #[test]
    fn circle_grid() {
        let g = oracle_extent_grid(&[p2("X1^2 + X2^2 - 1")], None, 256, 2.0).unwrap();
        assert_eq!(g.components.len(), 1);
        let c = &g.components[0];
        assert!(c.bounded);
        assert!((c.max_distance - 1.0).abs() <= g.error_bound);
        assert!(g.bounded_inside(1.0));
        assert!(!g.bounded_inside(0.5));
    }

    #[test]
    fn half_plane_grid() {
        let sigma = SignCondition::new(&[1]).unwrap();
        let g = oracle_extent_grid(&[p2("X1")], Some(&sigma), 64, 1.0).unwrap();
        assert_eq!(g.components.len(), 1);
        assert!(!g.components[0].bounded);
        assert_eq!(g.components[0].cells, 32 * 64);
    }

    #[test]
    fn grid_preconditions() {
        let x = IntPoly::parse("X1", &["X1"]).unwrap();
        assert!(oracle_extent_grid(&[x], None, 64, 1.0).is_err());
        assert!(oracle_extent_grid(&[p2("X1")], None, 32, 1.0).is_err());
        assert!(SignCondition::new(&[2]).is_err());
    }

    #[test]
    fn resolution_doubling_keeps_components() {
        for q in ["X1*X2 - 1", "X1^2 + X2^2 - 1", "X1^2 - 1", "X2 - X1^2"] {
            let a = oracle_extent_grid(&[p2(q)], None, 128, 3.0).unwrap();
            let b = oracle_extent_grid(&[p2(q)], None, 256, 3.0).unwrap();
            assert_eq!(a.components.len(), b.components.len(), "{q}");
        }
    }

    #[test]
    fn sign_condition_exact() {
        let fam = [p2("X1 - 1"), p2("X2")];
        let s = SignCondition::new(&[0, 1]).unwrap();
        let pt = |a: i64, b: i64| [Rational::from_integer(a.into()), Rational::from_integer(b.into())];
        assert!(s.holds_at(&fam, &pt(1, 3)));
        assert!(!s.holds_at(&fam, &pt(1, 0)));
    }

    #[test]
    fn random_instances_are_reproducible() {
        let a = random_instance(7, 2, 3, 5, 3).unwrap();
        assert_eq!(a, random_instance(7, 2, 3, 5, 3).unwrap());
        assert_ne!(a, random_instance(8, 2, 3, 5, 3).unwrap());
        for p in &a {
            assert!(p.bitsize() <= 5);
            assert_eq!(p.total_degree(), 3);
        }
        assert!(random_instance(1, 0, 3, 4, 2).is_err());
    }

    #[test]
    fn golden_fixture() {
        let fam: Vec<String> = random_instance(1, 1, 3, 4, 2)
            .unwrap()
            .iter()
            .map(ToString::to_string)
            .collect();
        assert_eq!(fam, ["-5*X1^3 - X1^2 + 7*X1", "X1^3 + 2"]);
    }
}
