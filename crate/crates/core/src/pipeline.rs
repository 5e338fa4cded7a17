//! Certified radii for individual inputs.
//!
//! Containing balls come from the extreme critical values of the deformed
//! hypersurfaces `(d+1)Q +- zeta*sum X_i^{d+1}`; meeting balls from a lower
//! bound on the parameter values at which the critical-point structure of
//! `Q^2 + (eps*|X|^2 - 1)^2` can change. Every certificate records audit
//! checks; if any fails, the certified radius is replaced by the closed form.

use std::sync::atomic::AtomicUsize;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::bounds::{self, BoundReport};
use crate::error::{Error, Result};
use crate::linalg::{self, CharpolyOptions};
use crate::matrix::PolyMatrix;
use crate::poly::{bit_u64, IntPoly, Rational, Vars};
use crate::sgb::{self, SgbShape, SpecialGroebnerBasis};
use crate::univar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Contain,
    Meet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Logged only; never causes a downgrade.
    Info,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
            detail: detail.into(),
        }
    }

    fn info(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: CheckStatus::Info,
            detail: detail.into(),
        }
    }

    fn prefixed(mut self, prefix: &str) -> Self {
        self.name = format!("{prefix}{}", self.name);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Extracted {
    pub label: String,
    pub poly: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubsetResult {
    /// Indices into the input family.
    pub members: Vec<usize>,
    pub radius_squared: Rational,
    pub valid: bool,
}

#[derive(Clone)]
pub struct Options {
    pub deadline: Option<Instant>,
    /// Random monomials per system for the rewrite-strategy comparison.
    pub confluence_samples: usize,
    pub seed: u64,
    /// Cap on the number of nonempty subsets in the semi-algebraic routes.
    pub max_subsets: usize,
    /// Counts completed characteristic-polynomial stages.
    pub progress: Option<Arc<AtomicUsize>>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            deadline: None,
            confluence_samples: 64,
            seed: 0,
            max_subsets: 4096,
            progress: None,
        }
    }
}

/// Subset enumeration is refused above this family size.
pub const MAX_FAMILY: usize = 12;

#[derive(Clone, Debug)]
pub struct BallCertificate {
    pub mode: Mode,
    pub k: u64,
    pub d: u64,
    pub tau: u64,
    pub s: u64,
    /// The certified value; equals the closed form after a downgrade.
    pub radius_squared: Rational,
    /// What the pipeline computed, before any downgrade.
    pub pipeline_radius_squared: Option<Rational>,
    pub per_coordinate_bounds: Vec<Rational>,
    pub extracted_polys: Vec<Extracted>,
    pub u0: Option<Rational>,
    pub closed_form: BoundReport,
    pub checks: Vec<Check>,
    pub degenerate_notes: Vec<String>,
    pub warnings: Vec<String>,
    pub subsets: Vec<SubsetResult>,
    pub valid: bool,
}

impl BallCertificate {
    pub fn closed_form_radius_squared(&self) -> Rational {
        self.closed_form.radius_squared.to_rational()
    }

    pub fn downgraded(&self) -> bool {
        !self.valid
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail)
    }
}

impl Serialize for BallCertificate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Subset<'a> {
            members: &'a [usize],
            radius_squared: String,
            valid: bool,
        }
        let mut st = s.serialize_struct("BallCertificate", 18)?;
        st.serialize_field("mode", &self.mode)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("d", &self.d)?;
        st.serialize_field("tau", &self.tau)?;
        st.serialize_field("s", &self.s)?;
        st.serialize_field("valid", &self.valid)?;
        st.serialize_field("downgraded", &self.downgraded())?;
        st.serialize_field("radius_squared", &self.radius_squared.to_string())?;
        st.serialize_field(
            "pipeline_radius_squared",
            &self.pipeline_radius_squared.as_ref().map(ToString::to_string),
        )?;
        st.serialize_field(
            "per_coordinate_bounds",
            &self.per_coordinate_bounds.iter().map(ToString::to_string).collect::<Vec<_>>(),
        )?;
        st.serialize_field("extracted_polys", &self.extracted_polys)?;
        st.serialize_field("u0", &self.u0.as_ref().map(ToString::to_string))?;
        st.serialize_field("closed_form", &self.closed_form)?;
        st.serialize_field(
            "closed_form_radius_squared",
            &self.closed_form.radius_squared.to_biguint().to_string(),
        )?;
        st.serialize_field("checks", &self.checks)?;
        st.serialize_field("degenerate_notes", &self.degenerate_notes)?;
        st.serialize_field("warnings", &self.warnings)?;
        let subsets: Vec<Subset<'_>> = self
            .subsets
            .iter()
            .map(|r| Subset {
                members: &r.members,
                radius_squared: r.radius_squared.to_string(),
                valid: r.valid,
            })
            .collect();
        st.serialize_field("subsets", &subsets)?;
        st.end()
    }
}

/// Result of one pipeline run before the closed-form comparison.
#[derive(Clone, Debug, Default)]
struct Raw {
    radius_squared: Rational,
    per_coordinate: Vec<Rational>,
    extracted: Vec<Extracted>,
    u0: Option<Rational>,
    checks: Vec<Check>,
    notes: Vec<String>,
}

impl Raw {
    fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    fn budget_failure(msg: &str) -> Raw {
        Raw {
            checks: vec![Check::new("budget", false, msg)],
            ..Raw::default()
        }
    }
}

fn fresh(base: &str, taken: &[String]) -> String {
    let mut s = base.to_string();
    while taken.contains(&s) {
        s.push('_');
    }
    s
}

fn extend_vars(vars: &Vars, extra: &[&str]) -> Vars {
    let mut v = vars.to_vec();
    for e in extra {
        v.push(e.to_string());
    }
    v.into()
}

fn power_sum(vars: &Vars, names: &[String], e: u32) -> Result<IntPoly> {
    let mut acc = IntPoly::zero(vars.clone());
    for n in names {
        acc = &acc + &IntPoly::variable(vars.clone(), n)?.pow(e);
    }
    Ok(acc)
}

fn int(n: u64) -> BigInt {
    BigInt::from(n)
}

/// `((d+1)Q + zeta*sum X_i^{d+1}, (d+1)Q - zeta*sum X_i^{d+1})` over the
/// variables of `q` plus `zeta`.
pub fn deform_bounded(q: &IntPoly, zeta: &str) -> Result<(IntPoly, IntPoly)> {
    if q.is_zero() {
        return Err(Error::ZeroInput);
    }
    if q.var_index(zeta).is_some() {
        return Err(Error::VariableInUse(zeta.into()));
    }
    let d = q.total_degree();
    let xs: Vec<String> = q.vars().to_vec();
    let vars = extend_vars(q.vars(), &[zeta]);
    let base = q.with_vars(vars.clone())?.scale(&int(d as u64 + 1));
    let z = IntPoly::variable(vars.clone(), zeta)?;
    let block = &z * &power_sum(&vars, &xs, d + 1)?;
    Ok((&base + &block, &base - &block))
}

/// Critical-point system of `p` for the first entry of `x_order`:
/// `{p - sum_{i>=2} X_i dp/dX_i / scale, dp/dX_2 / scale, ...}`, leading
/// signs normalized.
fn critical_system(
    p: &IntPoly,
    x_order: &[String],
    zeta: &str,
    scale: u64,
    degrees: &[u32],
) -> Result<Vec<IntPoly>> {
    let s = int(scale);
    let mut first = p.clone();
    let mut rest = Vec::with_capacity(x_order.len() - 1);
    for x in &x_order[1..] {
        let dp = p.derivative_in(x)?.div_exact_scalar(&s)?;
        let xv = IntPoly::variable(p.vars().clone(), x)?;
        first = &first - &(&xv * &dp);
        rest.push(dp);
    }
    let mut gens = vec![sgb::normalize_leading_sign(&first, &x_order[0], degrees[0], zeta)?];
    for (i, g) in rest.iter().enumerate() {
        gens.push(sgb::normalize_leading_sign(g, &x_order[i + 1], degrees[i + 1], zeta)?);
    }
    Ok(gens)
}

/// Special Groebner basis of the critical points of a deformed polynomial
/// from [`deform_bounded`] in the direction of `x_order[0]`.
pub fn cr_bounded(p: &IntPoly, x_order: &[String], zeta: &str, d: u32, tau: u64) -> Result<SpecialGroebnerBasis> {
    let k = x_order.len();
    let mut degrees = vec![d; k];
    degrees[0] = d + 1;
    let gens = critical_system(p, x_order, zeta, d as u64 + 1, &degrees)?;
    let shape = SgbShape {
        x_vars: x_order.to_vec(),
        z: zeta.into(),
        y: Vec::new(),
        degrees,
        lambda: 0,
        tau_g: tau + bit_u64(d as u64 + 1),
    };
    SpecialGroebnerBasis::new(shape, gens)
}

/// `d' = max(2(d+1), 6)`.
pub fn meeting_degree(d: u32) -> u32 {
    (2 * (d + 1)).max(6)
}

/// `(Q_eps, d' Q_eps - zeta (sum X^d' + d' sum X^2 + k (d'+1)))` with
/// `Q_eps = Q^2 + (eps |X|^2 - 1)^2`.
pub fn deform_meeting(q: &IntPoly, eps: &str, zeta: &str) -> Result<(IntPoly, IntPoly)> {
    if q.is_zero() {
        return Err(Error::ZeroInput);
    }
    deform_meeting_sum(&q.pow(2), q.total_degree(), eps, zeta)
}

/// Same as [`deform_meeting`] with a given nonnegative `sum` in place of
/// `Q^2` (no further squaring); `d` is the degree used for `d'`.
pub fn deform_meeting_sum(sum: &IntPoly, d: u32, eps: &str, zeta: &str) -> Result<(IntPoly, IntPoly)> {
    if sum.is_zero() {
        return Err(Error::ZeroInput);
    }
    for v in [eps, zeta] {
        if sum.var_index(v).is_some() {
            return Err(Error::VariableInUse(v.into()));
        }
    }
    let xs: Vec<String> = sum.vars().to_vec();
    let k = xs.len() as u64;
    let dp = meeting_degree(d);
    let vars = extend_vars(sum.vars(), &[zeta, eps]);
    let s = sum.with_vars(vars.clone())?;
    let e = IntPoly::variable(vars.clone(), eps)?;
    let z = IntPoly::variable(vars.clone(), zeta)?;
    let sq = power_sum(&vars, &xs, 2)?;
    let one = IntPoly::one(vars.clone());
    let qeps = &s + &(&(&e * &sq) - &one).pow(2);
    let block = &(&power_sum(&vars, &xs, dp)? + &sq.scale(&int(dp as u64)))
        + &IntPoly::constant(vars.clone(), int(k * (dp as u64 + 1)));
    let p = &qeps.scale(&int(dp as u64)) - &(&z * &block);
    Ok((qeps, p))
}

/// Special Groebner basis of the critical points of a deformed polynomial
/// from [`deform_meeting`]: `Z = zeta`, `Y = (zeta, eps)`,
/// degrees `(d', d'-1, ...)`, `lambda = 2`.
pub fn cr_meeting(
    p: &IntPoly,
    x_vars: &[String],
    zeta: &str,
    eps: &str,
    d: u32,
    tau_g: u64,
) -> Result<SpecialGroebnerBasis> {
    let dp = meeting_degree(d);
    let k = x_vars.len();
    let mut degrees = vec![dp - 1; k];
    degrees[0] = dp;
    let gens = critical_system(p, x_vars, zeta, dp as u64, &degrees)?;
    let shape = SgbShape {
        x_vars: x_vars.to_vec(),
        z: zeta.into(),
        y: vec![zeta.into(), eps.into()],
        degrees,
        lambda: 2,
        tau_g,
    };
    SpecialGroebnerBasis::new(shape, gens)
}

/// Validation, commutation, confluence and entry audits for one system.
fn audit_system(
    sgb: &SpecialGroebnerBasis,
    opts: &Options,
) -> Result<(Vec<Check>, Option<Vec<PolyMatrix>>)> {
    let mut checks = Vec::new();
    let rep = sgb.validate();
    let detail = if rep.failures.is_empty() {
        rep.warnings.join("; ")
    } else {
        rep.failures.join("; ")
    };
    checks.push(Check::new("sgb_validation", rep.is_valid(), detail));
    if !rep.is_valid() {
        return Ok((checks, None));
    }
    let mats = sgb.mult_matrices()?;
    let bad = sgb::commutation_failures(&mats)?;
    checks.push(Check::new(
        "commutation",
        bad.is_empty(),
        format!("{} pairs, {} non-commuting", mats.len() * (mats.len() - 1) / 2, bad.len()),
    ));
    let conf = sgb.confluence_probe(opts.confluence_samples, opts.seed)?;
    checks.push(Check::new(
        "confluence",
        conf.mismatches == 0,
        format!("{} monomials, {} mismatches", conf.checked, conf.mismatches),
    ));
    let audit = sgb.audit_entries(&mats)?;
    checks.push(Check::new(
        "entry_bounds",
        audit.passed(),
        format!(
            "max bitsize {} (bound {}), max parameter degree {}; {}",
            audit.max_bitsize,
            audit.bitsize_bound,
            audit.max_param_degree,
            audit.failures.join("; ")
        ),
    ));
    Ok((checks, Some(mats)))
}

struct CoordinateOutcome {
    checks: Vec<Check>,
    extracted: Option<Extracted>,
    bound: Option<Rational>,
    note: Option<String>,
}

fn contain_coordinate(
    p: &IntPoly,
    order: &[String],
    zeta: &str,
    t: &str,
    (k, d, tau): (u64, u32, u64),
    label: &str,
    opts: &Options,
) -> Result<CoordinateOutcome> {
    let sgb = cr_bounded(p, order, zeta, d, tau)?;
    let (mut checks, mats) = audit_system(&sgb, opts)?;
    let Some(mats) = mats else {
        return Ok(CoordinateOutcome {
            checks,
            extracted: None,
            bound: None,
            note: None,
        });
    };
    let chi = linalg::charpoly_with(
        &mats[0],
        t,
        CharpolyOptions {
            deadline: opts.deadline,
            progress: opts.progress.as_deref(),
            ..Default::default()
        },
    )?;
    let bit_bound = bounds::thm1_charpoly_bitsize(k, d as u64, tau)?;
    let deg_bound = bounds::thm1_charpoly_param_degree(k, d as u64)?;
    let zdeg = chi.degree_in_var(zeta) as u64;
    checks.push(Check::new(
        "charpoly_bounds",
        chi.bitsize() <= bit_bound && zdeg <= deg_bound,
        format!(
            "bitsize {} (bound {bit_bound}), degree in {zeta} {zdeg} (bound {deg_bound})",
            chi.bitsize()
        ),
    ));
    let f = chi.rescale_roots(t, zeta)?.specialize(zeta, &BigInt::zero())?;
    let extracted = Some(Extracted {
        label: label.into(),
        poly: f.to_string(),
    });
    if f.total_degree() == 0 {
        return Ok(CoordinateOutcome {
            checks,
            extracted,
            bound: None,
            note: Some(format!("{label} is constant")),
        });
    }
    if univar::count_real_roots(&f)? == 0 {
        return Ok(CoordinateOutcome {
            checks,
            extracted,
            bound: None,
            note: Some(format!("{label} has no real roots")),
        });
    }
    Ok(CoordinateOutcome {
        checks,
        extracted,
        bound: Some(univar::cauchy_bound(&f)?),
        note: None,
    })
}

fn contain_raw(q: &IntPoly, opts: &Options) -> Result<Raw> {
    let xs: Vec<String> = q.vars().to_vec();
    let k = xs.len() as u64;
    let d = q.total_degree();
    let tau = q.bitsize();
    let mut raw = Raw {
        radius_squared: Rational::zero(),
        per_coordinate: vec![Rational::zero(); xs.len()],
        ..Raw::default()
    };
    if d == 0 {
        raw.notes
            .push("constant nonzero polynomial: the zero set is empty".into());
        return Ok(raw);
    }
    let zeta = fresh("zeta", &xs);
    let t = fresh("T", &xs);
    let (pp, pm) = deform_bounded(q, &zeta)?;
    let jobs: Vec<(usize, bool)> = (0..xs.len()).flat_map(|i| [(i, true), (i, false)]).collect();
    let outcomes = jobs
        .par_iter()
        .map(|&(i, plus)| {
            let mut order = vec![xs[i].clone()];
            order.extend(xs.iter().filter(|x| **x != xs[i]).cloned());
            let label = format!("f{}_{}", if plus { '+' } else { '-' }, i + 1);
            let p = if plus { &pp } else { &pm };
            let out = contain_coordinate(p, &order, &zeta, &t, (k, d, tau), &label, opts)?;
            Ok((i, label, out))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut any_roots = false;
    for (i, label, out) in outcomes {
        raw.checks
            .extend(out.checks.into_iter().map(|c| c.prefixed(&format!("{label}."))));
        raw.extracted.extend(out.extracted);
        raw.notes.extend(out.note);
        if let Some(b) = out.bound {
            any_roots = true;
            if b > raw.per_coordinate[i] {
                raw.per_coordinate[i] = b;
            }
        }
    }
    for (i, c) in raw.per_coordinate.iter().enumerate() {
        if c.is_zero() {
            raw.notes.push(format!(
                "coordinate {}: no extracted polynomial has real roots, bound 0",
                i + 1
            ));
        }
    }
    if !any_roots {
        raw.notes
            .push("no bounded connected component detected".into());
    }
    raw.radius_squared = raw.per_coordinate.iter().map(|c| c * c).sum();
    Ok(raw)
}

/// Bitsize bounds feeding the meeting construction.
#[derive(Clone, Copy, Debug)]
struct MeetBounds {
    d: u32,
    big_d: u64,
    /// Generator coefficient bound.
    tau_g: u64,
    /// Characteristic polynomial bound.
    tau_chi: u64,
}

fn meet_raw(sum: &IntPoly, mb: MeetBounds, opts: &Options) -> Result<Raw> {
    let xs: Vec<String> = sum.vars().to_vec();
    let k = xs.len();
    let zeta = fresh("zeta", &xs);
    let eps = fresh("eps", &xs);
    let t = fresh("T", &xs);
    let (_, p) = deform_meeting_sum(sum, mb.d, &eps, &zeta)?;
    let sgb = cr_meeting(&p, &xs, &zeta, &eps, mb.d, mb.tau_g)?;
    let (mut checks, mats) = audit_system(&sgb, opts)?;
    let Some(mats) = mats else {
        return Ok(Raw {
            checks,
            ..Raw::default()
        });
    };
    let n = sgb.n();
    let jmax = (k as u64 - 1) * (n as u64) * (n as u64);
    let per_j = (0..=jmax)
        .into_par_iter()
        .map(|j| -> Result<(IntPoly, Vec<Check>, Vec<IntPoly>)> {
            let lj = sgb::linear_form(&mats, j)?;
            let chi = linalg::charpoly_with(
                &lj,
                &t,
                CharpolyOptions {
                    truncate: Some((&zeta, n as u32 + 1)),
                    deadline: opts.deadline,
                    progress: opts.progress.as_deref(),
                },
            )?;
            let mut checks = vec![Check::new(
                format!("j{j}.charpoly_bitsize"),
                chi.bitsize() <= mb.tau_chi,
                format!("{} (bound {})", chi.bitsize(), mb.tau_chi),
            )];
            let g = chi.rescale_roots(&t, &zeta)?.specialize(&zeta, &BigInt::zero())?;
            let family = if g.degree_in_var(&t) == 0 {
                Vec::new()
            } else {
                let (family, bits, degree) = control_family(&g, &t, opts)?;
                let n = n as u64;
                let bit_ref = (2 * n - 1) * mb.tau_chi + n * n * bit_u64(n + 1);
                let deg_ref = 2 * mb.big_d * n * (2 * n - 1);
                checks.push(Check::info(
                    format!("j{j}.subresultants"),
                    format!(
                        "bitsize {bits} (reference {bit_ref}), degree {degree} (reference {deg_ref})"
                    ),
                ));
                family
            };
            Ok((g, checks, family))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut family = Vec::new();
    let mut extracted = Vec::new();
    for (j, (g, cs, fam)) in per_j.into_iter().enumerate() {
        extracted.push(Extracted {
            label: format!("g_{j}"),
            poly: g.to_string(),
        });
        checks.extend(cs);
        family.extend(fam);
    }
    let u0 = univar::positive_root_lower_bound(&family)?;
    checks.push(Check::info(
        "control_family",
        format!("{} polynomials in {eps}", family.len()),
    ));
    Ok(Raw {
        radius_squared: u0.recip(),
        per_coordinate: Vec::new(),
        extracted,
        u0: Some(u0),
        checks,
        notes: Vec::new(),
    })
}

/// Leading coefficient of `g` in `t` and the principal subresultant
/// coefficients of `(g, d^l g / dt^l)`, `1 <= l < deg g`. Also returns the
/// largest bitsize and degree among them.
fn control_family(g: &IntPoly, t: &str, opts: &Options) -> Result<(Vec<IntPoly>, u64, u32)> {
    let ti = g.var_index(t).ok_or_else(|| Error::UnknownVariable(t.into()))?;
    let coeffs = g.coefficients_in(ti);
    let mut out = vec![coeffs.last().cloned().expect("nonempty")];
    let deg = coeffs.len() - 1;
    let mut der = g.clone();
    for _ in 1..deg.max(1) {
        if let Some(dl) = opts.deadline {
            if Instant::now() > dl {
                return Err(Error::BudgetExceeded("subresultants".into()));
            }
        }
        der = der.partial_derivative(ti);
        out.extend(
            univar::principal_subresultant_coefficients(g, &der, t)?
                .into_iter()
                .filter(|c| !c.is_zero()),
        );
    }
    let bits = out.iter().map(IntPoly::bitsize).max().unwrap_or(0);
    let degree = out.iter().map(IntPoly::total_degree).max().unwrap_or(0);
    Ok((out, bits, degree))
}

/// Unifies the variable lists of a family.
fn unify(family: &[IntPoly]) -> Result<Vec<IntPoly>> {
    let mut names: Vec<String> = Vec::new();
    for p in family {
        for v in p.vars().iter() {
            if !names.contains(v) {
                names.push(v.clone());
            }
        }
    }
    let vars: Vars = names.into();
    family.iter().map(|p| p.with_vars(vars.clone())).collect()
}

fn measure(family: &[IntPoly]) -> (u64, u64, u64, u64) {
    let k = family.first().map_or(0, |p| p.nvars() as u64);
    let d = family.iter().map(|p| p.total_degree() as u64).max().unwrap_or(0);
    let tau = family.iter().map(IntPoly::bitsize).max().unwrap_or(0);
    (k, d, tau, family.len() as u64)
}

fn finalize(mode: Mode, (k, d, tau, s): (u64, u64, u64, u64), closed: BoundReport, raw: Raw) -> BallCertificate {
    let mut checks = raw.checks;
    let dominated = closed.radius_squared.cmp_rational(&raw.radius_squared) != std::cmp::Ordering::Less;
    checks.push(Check::new(
        "closed_form_domination",
        dominated,
        format!("pipeline radius^2 {}", raw.radius_squared),
    ));
    let valid = checks.iter().all(|c| c.status != CheckStatus::Fail);
    let radius_squared = if valid {
        raw.radius_squared.clone()
    } else {
        closed.radius_squared.to_rational()
    };
    BallCertificate {
        mode,
        k,
        d,
        tau,
        s,
        radius_squared,
        pipeline_radius_squared: Some(raw.radius_squared),
        per_coordinate_bounds: raw.per_coordinate,
        extracted_polys: raw.extracted,
        u0: raw.u0,
        closed_form: closed,
        checks,
        degenerate_notes: raw.notes,
        warnings: Vec::new(),
        subsets: Vec::new(),
        valid,
    }
}

fn budget_guard(r: Result<Raw>) -> Result<Raw> {
    match r {
        Err(Error::BudgetExceeded(m)) => Ok(Raw::budget_failure(&format!("time budget exhausted in {m}"))),
        other => other,
    }
}

fn empty_note_1d(q: &IntPoly) -> Result<Option<String>> {
    if q.nvars() == 1 && q.total_degree() > 0 && univar::count_real_roots(q)? == 0 {
        return Ok(Some("the zero set is empty".into()));
    }
    Ok(None)
}

/// Ball containing every bounded connected component of `Zer(q)`.
pub fn bounded_ball_certificate(q: &IntPoly, opts: &Options) -> Result<BallCertificate> {
    if q.is_zero() {
        return Err(Error::ZeroInput);
    }
    let (k, d, tau, _) = measure(std::slice::from_ref(q));
    let closed = bounds::thm1_radius(k.max(1), d.max(1), tau.max(1))?;
    let mut raw = budget_guard(contain_raw(q, opts))?;
    raw.notes.extend(empty_note_1d(q)?);
    Ok(finalize(Mode::Contain, (k, d, tau, 1), closed, raw))
}

fn meet_bounds(k: u64, d: u64, tau: u64, s: Option<u64>) -> Result<(BoundReport, MeetBounds)> {
    let closed = match s {
        None => bounds::thm2_radius(k, d, tau)?,
        Some(s) => bounds::thm4_radius(k, d, s, tau)?,
    };
    let tau_sum = match s {
        None => 2 * tau + k * bit_u64(d + 1),
        Some(s) => bounds::sum_of_squares_bitsize(k, d, s, tau)?,
    };
    let dp = meeting_degree(d as u32) as u64;
    let mb = MeetBounds {
        d: d as u32,
        big_d: closed.intermediates.big_d.expect("meeting bounds carry D"),
        tau_g: tau_sum + bit_u64(dp) + 1,
        tau_chi: closed.intermediates.tauprime.expect("meeting bounds carry tau'"),
    };
    Ok((closed, mb))
}

/// Combines the meeting construction on `sum` with the containing
/// certificate of `bounded` (for bounded components).
fn meet_combined(sum: &IntPoly, bounded: &IntPoly, mb: MeetBounds, opts: &Options) -> Result<Raw> {
    let meet = budget_guard(meet_raw(sum, mb, opts))?;
    let contain = budget_guard(contain_raw(bounded, opts))?;
    let mut checks = meet.checks;
    checks.extend(contain.checks.into_iter().map(|c| c.prefixed("bounded.")));
    let mut notes = meet.notes;
    notes.extend(contain.notes.into_iter().map(|n| format!("bounded: {n}")));
    let mut extracted = meet.extracted;
    extracted.extend(contain.extracted);
    let radius_squared = meet.radius_squared.clone().max(contain.radius_squared.clone());
    Ok(Raw {
        radius_squared,
        per_coordinate: contain.per_coordinate,
        extracted,
        u0: meet.u0,
        checks,
        notes,
    })
}

/// Ball meeting every connected component of `Zer(q)`.
pub fn meeting_ball_certificate(q: &IntPoly, opts: &Options) -> Result<BallCertificate> {
    if q.is_zero() {
        return Err(Error::ZeroInput);
    }
    let (k, d, tau, _) = measure(std::slice::from_ref(q));
    if d == 0 {
        let closed = bounds::thm2_radius(k.max(1), 1, tau.max(1))?;
        let raw = Raw {
            per_coordinate: vec![Rational::zero(); k as usize],
            notes: vec!["constant nonzero polynomial: the zero set is empty".into()],
            ..Raw::default()
        };
        return Ok(finalize(Mode::Meet, (k, d, tau, 1), closed, raw));
    }
    let (closed, mb) = meet_bounds(k, d, tau, None)?;
    let mut raw = meet_combined(&q.pow(2), q, mb, opts)?;
    raw.notes.extend(empty_note_1d(q)?);
    Ok(finalize(Mode::Meet, (k, d, tau, 1), closed, raw))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SaMode {
    Closed,
    Certificate,
}

#[derive(Clone, Debug)]
pub enum SaOutcome {
    Closed(BoundReport),
    Certificate(Box<BallCertificate>),
}

fn check_family(family: &[IntPoly]) -> Result<Vec<IntPoly>> {
    if family.is_empty() {
        return Err(Error::Precondition("empty family".into()));
    }
    if family.iter().any(IntPoly::is_zero) {
        return Err(Error::ZeroInput);
    }
    unify(family)
}

fn subset_masks(s: usize, opts: &Options) -> std::result::Result<Vec<usize>, String> {
    if s > MAX_FAMILY {
        return Err(format!("{s} polynomials exceed the subset enumeration cap of {MAX_FAMILY}"));
    }
    let count = (1usize << s) - 1;
    if count > opts.max_subsets {
        return Err(format!("{count} subsets exceed max_subsets = {}", opts.max_subsets));
    }
    Ok((1..=count).collect())
}

fn sum_of_squares(family: &[IntPoly], mask: usize) -> IntPoly {
    let mut acc = family[0].zero_like();
    for (i, p) in family.iter().enumerate() {
        if mask >> i & 1 == 1 {
            acc = &acc + &p.pow(2);
        }
    }
    acc
}

fn members(mask: usize, s: usize) -> Vec<usize> {
    (0..s).filter(|i| mask >> i & 1 == 1).collect()
}

fn fallback(mode: Mode, params: (u64, u64, u64, u64), closed: BoundReport, warning: String) -> BallCertificate {
    let (k, d, tau, s) = params;
    BallCertificate {
        mode,
        k,
        d,
        tau,
        s,
        radius_squared: closed.radius_squared.to_rational(),
        pipeline_radius_squared: None,
        per_coordinate_bounds: Vec::new(),
        extracted_polys: Vec::new(),
        u0: None,
        closed_form: closed,
        checks: Vec::new(),
        degenerate_notes: Vec::new(),
        warnings: vec![warning],
        subsets: Vec::new(),
        valid: true,
    }
}

fn combine_subsets(
    mode: Mode,
    params: (u64, u64, u64, u64),
    closed: BoundReport,
    parts: Vec<(usize, Raw)>,
    s: usize,
) -> BallCertificate {
    let mut raw = Raw {
        per_coordinate: vec![Rational::zero(); params.0 as usize],
        ..Raw::default()
    };
    let mut subsets = Vec::new();
    for (mask, part) in parts {
        let tag = members(mask, s)
            .iter()
            .map(|i| (i + 1).to_string())
            .collect::<Vec<_>>()
            .join(",");
        let prefix = format!("subset{{{tag}}}.");
        subsets.push(SubsetResult {
            members: members(mask, s),
            radius_squared: part.radius_squared.clone(),
            valid: part.passed(),
        });
        if part.radius_squared > raw.radius_squared {
            raw.radius_squared = part.radius_squared.clone();
        }
        for (i, c) in part.per_coordinate.iter().enumerate() {
            if i < raw.per_coordinate.len() && *c > raw.per_coordinate[i] {
                raw.per_coordinate[i] = c.clone();
            }
        }
        if raw.u0.as_ref().map_or(part.u0.is_some(), |u| part.u0.as_ref().is_some_and(|v| v < u)) {
            raw.u0 = part.u0.clone();
        }
        raw.checks.extend(part.checks.into_iter().map(|c| c.prefixed(&prefix)));
        raw.notes.extend(part.notes.into_iter().map(|n| format!("{prefix} {n}")));
        raw.extracted.extend(part.extracted.into_iter().map(|e| Extracted {
            label: format!("{prefix}{}", e.label),
            poly: e.poly,
        }));
    }
    let mut cert = finalize(mode, params, closed, raw);
    cert.subsets = subsets;
    cert
}

/// Ball containing every bounded connected component of every realizable
/// sign condition on `family`.
pub fn sa_contain(family: &[IntPoly], mode: SaMode, opts: &Options) -> Result<SaOutcome> {
    let family = check_family(family)?;
    let params = measure(&family);
    let (k, d, tau, s) = params;
    let closed = bounds::thm3_radius(k.max(1), d.max(1), s, tau.max(1))?;
    if mode == SaMode::Closed {
        return Ok(SaOutcome::Closed(closed));
    }
    let masks = match subset_masks(family.len(), opts) {
        Ok(m) => m,
        Err(w) => {
            return Ok(SaOutcome::Certificate(Box::new(fallback(Mode::Contain, params, closed, w))));
        }
    };
    let parts = masks
        .par_iter()
        .map(|&mask| Ok((mask, budget_guard(contain_raw(&sum_of_squares(&family, mask), opts))?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SaOutcome::Certificate(Box::new(combine_subsets(
        Mode::Contain,
        params,
        closed,
        parts,
        family.len(),
    ))))
}

/// Ball meeting every connected component of every realizable sign
/// condition on `family`.
pub fn sa_meet(family: &[IntPoly], mode: SaMode, opts: &Options) -> Result<SaOutcome> {
    let family = check_family(family)?;
    let params = measure(&family);
    let (k, d, tau, s) = params;
    let (closed, mb) = meet_bounds(k.max(1), d.max(1), tau.max(1), Some(s))?;
    if mode == SaMode::Closed {
        return Ok(SaOutcome::Closed(closed));
    }
    let masks = match subset_masks(family.len(), opts) {
        Ok(m) => m,
        Err(w) => {
            return Ok(SaOutcome::Certificate(Box::new(fallback(Mode::Meet, params, closed, w))));
        }
    };
    let parts = masks
        .iter()
        .map(|&mask| {
            let sum = sum_of_squares(&family, mask);
            let raw = if sum.total_degree() == 0 {
                Raw {
                    notes: vec!["constant sum of squares: the zero set is empty".into()],
                    ..Raw::default()
                }
            } else {
                meet_combined(&sum, &sum, mb, opts)?
            };
            Ok((mask, raw))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SaOutcome::Certificate(Box::new(combine_subsets(
        Mode::Meet,
        params,
        closed,
        parts,
        family.len(),
    ))))
}

/// The closed-form bound for `family` packaged as a certificate, with no
/// pipeline run. `s = 1` uses the algebraic bounds.
pub fn closed_form_certificate(mode: Mode, family: &[IntPoly]) -> Result<BallCertificate> {
    let family = check_family(family)?;
    let params = measure(&family);
    let (k, d, tau, s) = params;
    let (k1, d1, t1) = (k.max(1), d.max(1), tau.max(1));
    let closed = match (mode, s) {
        (Mode::Contain, 1) => bounds::thm1_radius(k1, d1, t1)?,
        (Mode::Meet, 1) => bounds::thm2_radius(k1, d1, t1)?,
        (Mode::Contain, _) => bounds::thm3_radius(k1, d1, s, t1)?,
        (Mode::Meet, _) => bounds::thm4_radius(k1, d1, s, t1)?,
    };
    let mut cert = fallback(mode, params, closed, String::new());
    cert.warnings.clear();
    Ok(cert)
}
