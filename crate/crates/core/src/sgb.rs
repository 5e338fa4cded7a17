//! Parametrized special Groebner bases.
//!
//! A basis is a list of generators `Z*X_i^{d_i} + Q_i(Y, X)` whose tails
//! have total X-degree below `d_i`. The quotient then has the monomial basis
//! `Z^{|a|} X^a` with `a_i < d_i`, and multiplication by `Z*X_i` is computed
//! by plain rewriting.

use std::cmp::Reverse;
use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds;
use crate::error::{Error, Result};
use crate::matrix::PolyMatrix;
use crate::poly::{IntPoly, Monomial, Vars};

/// Shape data attached to a basis: variables, degrees and the declared
/// parameter-degree and bitsize bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SgbShape {
    pub x_vars: Vec<String>,
    pub z: String,
    /// Parameters other than the leading one. `z` may be listed here too.
    pub y: Vec<String>,
    pub degrees: Vec<u32>,
    pub lambda: u32,
    pub tau_g: u64,
}

#[derive(Clone, Debug)]
pub struct SpecialGroebnerBasis {
    shape: SgbShape,
    params: Vars,
    all_vars: Vars,
    generators: Vec<IntPoly>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ValidationStatus {
    Pass,
    PassWithWarning,
    Fail,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub failures: Vec<String>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn status(&self) -> ValidationStatus {
        if !self.failures.is_empty() {
            ValidationStatus::Fail
        } else if !self.warnings.is_empty() {
            ValidationStatus::PassWithWarning
        } else {
            ValidationStatus::Pass
        }
    }

    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Which violating term and variable a rewriting step picks.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RewriteStrategy {
    /// Highest term in graded-lex order, first variable over its degree.
    #[default]
    HighestTermLeftmostVar,
    /// Lowest violating term, variable with the largest excess.
    LowestTermLargestExcess,
}

/// Per-entry degree and bitsize audit of a set of multiplication matrices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntryAudit {
    pub max_z_degree: u32,
    pub max_y_degree: u32,
    pub max_param_degree: u32,
    pub max_bitsize: u64,
    pub bitsize_bound: u64,
    pub failures: Vec<String>,
}

impl EntryAudit {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfluenceReport {
    pub checked: usize,
    pub mismatches: usize,
}

impl SpecialGroebnerBasis {
    /// Embeds the generators over `X ++ [Z] ++ (Y \ {Z})`. Fails only on
    /// structural problems; degree constraints are reported by
    /// [`validate`](Self::validate).
    pub fn new(shape: SgbShape, generators: Vec<IntPoly>) -> Result<Self> {
        let k = shape.x_vars.len();
        if k == 0 {
            return Err(Error::Precondition("no X variables".into()));
        }
        if shape.degrees.len() != k || generators.len() != k {
            return Err(Error::Precondition(format!(
                "{k} variables, {} degrees, {} generators",
                shape.degrees.len(),
                generators.len()
            )));
        }
        let mut params = vec![shape.z.clone()];
        for y in &shape.y {
            if !params.contains(y) {
                params.push(y.clone());
            }
        }
        if params.iter().any(|p| shape.x_vars.contains(p)) {
            return Err(Error::Precondition("parameter named like an X variable".into()));
        }
        let mut all = shape.x_vars.clone();
        all.extend(params.iter().cloned());
        let all_vars: Vars = all.into();
        let generators = generators
            .into_iter()
            .map(|g| g.with_vars(all_vars.clone()))
            .collect::<Result<Vec<_>>>()?;
        Ok(SpecialGroebnerBasis {
            shape,
            params: params.into(),
            all_vars,
            generators,
        })
    }

    pub fn shape(&self) -> &SgbShape {
        &self.shape
    }

    pub fn k(&self) -> usize {
        self.shape.x_vars.len()
    }

    pub fn degrees(&self) -> &[u32] {
        &self.shape.degrees
    }

    /// Dimension of the quotient.
    pub fn n(&self) -> usize {
        self.shape.degrees.iter().map(|&d| d as usize).product()
    }

    pub fn big_d(&self) -> u32 {
        self.shape.degrees.iter().sum::<u32>() + 1 - self.k() as u32
    }

    pub fn generators(&self) -> &[IntPoly] {
        &self.generators
    }

    /// Variables of the matrix entries: `Z` first.
    pub fn params(&self) -> &Vars {
        &self.params
    }

    fn z_in_y(&self) -> bool {
        self.shape.y.contains(&self.shape.z)
    }

    /// Splits a generator into X-exponent -> parameter coefficient.
    fn split(&self, g: &IntPoly) -> BTreeMap<Monomial, IntPoly> {
        let k = self.k();
        let mut out: BTreeMap<Monomial, IntPoly> = BTreeMap::new();
        for (e, c) in g.terms() {
            let x = Monomial::new(e[..k].to_vec());
            let p = IntPoly::monomial(self.params.clone(), e[k..].to_vec(), c.clone());
            let slot = out
                .entry(x)
                .or_insert_with(|| IntPoly::zero(self.params.clone()));
            *slot = &*slot + &p;
        }
        out
    }

    fn z_poly(&self) -> IntPoly {
        IntPoly::variable(self.params.clone(), &self.shape.z).expect("z is a parameter")
    }

    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport::default();
        let k = self.k();
        let d = &self.shape.degrees;
        if d.contains(&0) {
            rep.failures.push("degrees must be positive".into());
        }
        if d.windows(2).any(|w| w[0] < w[1]) {
            rep.failures.push(format!("degrees {d:?} are not nonincreasing"));
        }
        let z = self.z_poly();
        let y_idx: Vec<usize> = (0..self.params.len())
            .filter(|&p| self.shape.y.contains(&self.params[p]))
            .collect();
        for (i, g) in self.generators.iter().enumerate() {
            let gi = i + 1;
            let mut parts = self.split(g);
            let mut lead = vec![0u32; k];
            lead[i] = d[i];
            match parts.remove(&Monomial::new(lead)) {
                Some(c) if c == z => {}
                Some(c) if c == -&z => rep
                    .failures
                    .push(format!("generator {gi}: leading coefficient is -{} (sign not normalized)", self.shape.z)),
                Some(c) => rep
                    .failures
                    .push(format!("generator {gi}: coefficient of X^{} is {c}, expected {}", d[i], self.shape.z)),
                None => rep
                    .failures
                    .push(format!("generator {gi}: no {}*{}^{} term", self.shape.z, self.shape.x_vars[i], d[i])),
            }
            let tail_deg = parts.keys().map(Monomial::degree).max().unwrap_or(0);
            if !parts.is_empty() && tail_deg >= d[i] {
                rep.failures
                    .push(format!("generator {gi}: deg(Q) = {tail_deg} >= {}", d[i]));
            }
            for j in (0..k).filter(|&j| j != i) {
                let dj = parts.keys().map(|m| m.exponents()[j]).max().unwrap_or(0);
                if dj > d[j] {
                    rep.failures.push(format!(
                        "generator {gi}: degree {dj} in {} exceeds {}",
                        self.shape.x_vars[j], d[j]
                    ));
                } else if dj == d[j] {
                    rep.warnings.push(format!(
                        "generator {gi}: degree in {} equals {}",
                        self.shape.x_vars[j], d[j]
                    ));
                }
            }
            for c in parts.values() {
                if !self.z_in_y() && c.degree_in(0) > 0 {
                    rep.failures.push(format!(
                        "generator {gi}: tail involves {} which is not a Y parameter",
                        self.shape.z
                    ));
                    break;
                }
            }
            let ydeg = parts.values().map(|c| c.degree_in_vars(&y_idx)).max().unwrap_or(0);
            if ydeg > self.shape.lambda {
                rep.failures.push(format!(
                    "generator {gi}: parameter degree {ydeg} exceeds {}",
                    self.shape.lambda
                ));
            }
            let b = g.bitsize();
            if b > self.shape.tau_g {
                rep.failures.push(format!(
                    "generator {gi}: bitsize {b} exceeds {}",
                    self.shape.tau_g
                ));
            }
        }
        rep
    }

    /// Exponent vectors `a` with `a_i < d_i`, by degree then descending lex.
    pub fn mon_basis(&self) -> Vec<Vec<u32>> {
        mon_basis(&self.shape.degrees)
    }

    /// The basis element `Z^{|a|} X^a` as a polynomial over `X ++ params`.
    pub fn basis_monomial(&self, alpha: &[u32]) -> IntPoly {
        let mut e = alpha.to_vec();
        e.resize(self.all_vars.len(), 0);
        e[self.k()] = alpha.iter().sum();
        IntPoly::monomial(self.all_vars.clone(), e, BigInt::one())
    }

    /// Coordinates of `Z^e X^beta` in the basis, entries over [`params`](Self::params).
    pub fn normal_form(&self, z_exp: u32, beta: &[u32], strategy: RewriteStrategy) -> Result<Vec<IntPoly>> {
        Rewriter::new(self)?.normal_form(z_exp, beta, strategy)
    }

    /// Matrix of multiplication by `Z*X_i` (`i` is 1-based).
    pub fn mult_matrix(&self, i: usize) -> Result<PolyMatrix> {
        let rw = Rewriter::new(self)?;
        rw.matrix(i)
    }

    pub fn mult_matrices(&self) -> Result<Vec<PolyMatrix>> {
        let rw = Rewriter::new(self)?;
        (1..=self.k()).map(|i| rw.matrix(i)).collect()
    }

    /// `sum_i j^{i-1} M'_i`.
    pub fn mult_matrix_linear_form(&self, j: u64) -> Result<PolyMatrix> {
        linear_form(&self.mult_matrices()?, j)
    }

    /// Compares both rewrite strategies on `samples` random monomials
    /// `Z^e X^b` with `e >= |b|` and `b_i <= 2 d_i`.
    pub fn confluence_probe(&self, samples: usize, seed: u64) -> Result<ConfluenceReport> {
        let rw = Rewriter::new(self)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let draws: Vec<(u32, Vec<u32>)> = (0..samples)
            .map(|_| {
                let beta: Vec<u32> = self
                    .shape
                    .degrees
                    .iter()
                    .map(|&d| rng.gen_range(0..=2 * d))
                    .collect();
                let e = beta.iter().sum::<u32>() + rng.gen_range(0..=2);
                (e, beta)
            })
            .collect();
        let mismatches = draws
            .par_iter()
            .map(|(e, b)| {
                let a = rw.normal_form(*e, b, RewriteStrategy::HighestTermLeftmostVar)?;
                let c = rw.normal_form(*e, b, RewriteStrategy::LowestTermLargestExcess)?;
                Ok(usize::from(a != c))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .sum();
        Ok(ConfluenceReport {
            checked: samples,
            mismatches,
        })
    }

    /// Checks entry degrees and bitsizes against the output bounds of the
    /// multiplication-matrix construction.
    pub fn audit_entries(&self, mats: &[PolyMatrix]) -> Result<EntryAudit> {
        let big_d = self.big_d();
        let lambda = self.shape.lambda;
        let degs: Vec<u64> = self.shape.degrees.iter().map(|&d| d as u64).collect();
        let bitsize_bound = bounds::entry_bitsize_estimate(
            &degs,
            self.shape.y.len() as u64,
            lambda as u64,
            self.shape.tau_g,
        )?;
        let z = self.shape.z.as_str();
        let y_only: Vec<&str> = self
            .shape
            .y
            .iter()
            .map(String::as_str)
            .filter(|y| *y != z)
            .collect();
        let all: Vec<&str> = self.params.iter().map(String::as_str).collect();
        let mut a = EntryAudit {
            max_z_degree: 0,
            max_y_degree: 0,
            max_param_degree: 0,
            max_bitsize: 0,
            bitsize_bound,
            failures: Vec::new(),
        };
        for m in mats {
            a.max_z_degree = a.max_z_degree.max(m.max_degree_in(&[z]));
            a.max_y_degree = a.max_y_degree.max(m.max_degree_in(&y_only));
            a.max_param_degree = a.max_param_degree.max(m.max_degree_in(&all));
            a.max_bitsize = a.max_bitsize.max(m.max_bitsize());
        }
        if !self.z_in_y() && a.max_z_degree > big_d {
            a.failures
                .push(format!("entry degree in {z} is {} > {big_d}", a.max_z_degree));
        }
        if a.max_y_degree > big_d * lambda {
            a.failures.push(format!(
                "entry degree in Y is {} > {}",
                a.max_y_degree,
                big_d * lambda
            ));
        }
        if a.max_param_degree > big_d * lambda.max(1) {
            a.failures.push(format!(
                "entry parameter degree is {} > {}",
                a.max_param_degree,
                big_d * lambda.max(1)
            ));
        }
        if a.max_bitsize > bitsize_bound {
            a.failures.push(format!(
                "entry bitsize {} > {bitsize_bound}",
                a.max_bitsize
            ));
        }
        Ok(a)
    }
}

pub fn mon_basis(degrees: &[u32]) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = vec![Vec::new()];
    for &d in degrees {
        out = out
            .into_iter()
            .flat_map(|a| {
                (0..d).map(move |e| {
                    let mut b = a.clone();
                    b.push(e);
                    b
                })
            })
            .collect();
    }
    out.sort_by_key(|a| (a.iter().sum::<u32>(), Reverse(a.clone())));
    out
}

/// Negates `g` when its `Z*X^d` coefficient is -1.
pub fn normalize_leading_sign(g: &IntPoly, x: &str, d: u32, z: &str) -> Result<IntPoly> {
    let xi = g.var_index(x).ok_or_else(|| Error::UnknownVariable(x.into()))?;
    let zi = g.var_index(z).ok_or_else(|| Error::UnknownVariable(z.into()))?;
    let mut e = vec![0u32; g.nvars()];
    e[xi] = d;
    e[zi] += 1;
    if g.coeff(&e) == BigInt::from(-1) {
        Ok(-g)
    } else {
        Ok(g.clone())
    }
}

/// `sum_i j^{i-1} mats[i-1]`.
pub fn linear_form(mats: &[PolyMatrix], j: u64) -> Result<PolyMatrix> {
    let first = mats
        .first()
        .ok_or_else(|| Error::Precondition("no matrices".into()))?;
    let mut acc = first.clone();
    let mut w = BigInt::one();
    for m in &mats[1..] {
        w *= j;
        if w.is_zero() {
            break;
        }
        acc = acc.add(&m.scale(&w))?;
    }
    Ok(acc)
}

/// Pairs `(i, j)` (1-based, `i < j`) whose matrices do not commute.
pub fn commutation_failures(mats: &[PolyMatrix]) -> Result<Vec<(usize, usize)>> {
    let mut bad = Vec::new();
    for i in 0..mats.len() {
        for j in i + 1..mats.len() {
            if mats[i].mul(&mats[j])? != mats[j].mul(&mats[i])? {
                bad.push((i + 1, j + 1));
            }
        }
    }
    Ok(bad)
}

struct Rewriter<'a> {
    basis: &'a SpecialGroebnerBasis,
    tails: Vec<Vec<(Vec<u32>, IntPoly)>>,
    index: HashMap<Vec<u32>, usize>,
    order: Vec<Vec<u32>>,
}

impl<'a> Rewriter<'a> {
    fn new(basis: &'a SpecialGroebnerBasis) -> Result<Self> {
        let z = basis.z_poly();
        let mut tails = Vec::with_capacity(basis.k());
        for (i, g) in basis.generators.iter().enumerate() {
            let d = basis.shape.degrees[i];
            let mut parts = basis.split(g);
            let mut lead = vec![0u32; basis.k()];
            lead[i] = d;
            if parts.remove(&Monomial::new(lead)).as_ref() != Some(&z) {
                return Err(Error::InvalidBasis(format!(
                    "generator {} has no leading {}*{}^{d}",
                    i + 1,
                    basis.shape.z,
                    basis.shape.x_vars[i]
                )));
            }
            if parts.keys().any(|m| m.degree() >= d) {
                return Err(Error::InvalidBasis(format!(
                    "generator {}: tail degree not below {d}",
                    i + 1
                )));
            }
            tails.push(
                parts
                    .into_iter()
                    .map(|(m, c)| (m.exponents().to_vec(), -c))
                    .collect(),
            );
        }
        let order = basis.mon_basis();
        let index = order.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();
        Ok(Rewriter {
            basis,
            tails,
            index,
            order,
        })
    }

    fn pick(&self, m: &Monomial, strategy: RewriteStrategy) -> Option<usize> {
        let d = &self.basis.shape.degrees;
        let e = m.exponents();
        match strategy {
            RewriteStrategy::HighestTermLeftmostVar => (0..e.len()).find(|&i| e[i] >= d[i]),
            RewriteStrategy::LowestTermLargestExcess => (0..e.len())
                .filter(|&i| e[i] >= d[i])
                .max_by_key(|&i| (e[i] - d[i], i)),
        }
    }

    fn normal_form(&self, z_exp: u32, beta: &[u32], strategy: RewriteStrategy) -> Result<Vec<IntPoly>> {
        let k = self.basis.k();
        if beta.len() != k {
            return Err(Error::ExponentLength {
                expected: k,
                got: beta.len(),
            });
        }
        let total: u32 = beta.iter().sum();
        if z_exp < total {
            return Err(Error::Precondition(format!(
                "Z exponent {z_exp} below X-degree {total}"
            )));
        }
        let params = self.basis.params.clone();
        let mut start = vec![0u32; params.len()];
        start[0] = z_exp;
        let mut terms: BTreeMap<Monomial, IntPoly> = BTreeMap::new();
        terms.insert(
            Monomial::new(beta.to_vec()),
            IntPoly::monomial(params.clone(), start, BigInt::one()),
        );
        loop {
            let found = match strategy {
                RewriteStrategy::HighestTermLeftmostVar => terms
                    .keys()
                    .rev()
                    .find_map(|m| self.pick(m, strategy).map(|i| (m.clone(), i))),
                RewriteStrategy::LowestTermLargestExcess => terms
                    .keys()
                    .find_map(|m| self.pick(m, strategy).map(|i| (m.clone(), i))),
            };
            let Some((m, i)) = found else { break };
            let c = terms.remove(&m).expect("picked term exists");
            let c = c.div_var_power(0, 1)?;
            let mut rest = m.exponents().to_vec();
            rest[i] -= self.basis.shape.degrees[i];
            for (delta, q) in &self.tails[i] {
                let e: Vec<u32> = rest.iter().zip(delta).map(|(a, b)| a + b).collect();
                let key = Monomial::new(e);
                let add = &c * q;
                match terms.get_mut(&key) {
                    Some(slot) => {
                        *slot = &*slot + &add;
                        if slot.is_zero() {
                            terms.remove(&key);
                        }
                    }
                    None => {
                        terms.insert(key, add);
                    }
                }
            }
        }
        let mut out = vec![IntPoly::zero(params); self.order.len()];
        for (m, c) in terms {
            let idx = self.index[m.exponents()];
            out[idx] = c.div_var_power(0, m.degree())?;
        }
        Ok(out)
    }

    fn matrix(&self, i: usize) -> Result<PolyMatrix> {
        let k = self.basis.k();
        if i == 0 || i > k {
            return Err(Error::Precondition(format!("coordinate {i} outside 1..={k}")));
        }
        let n = self.order.len();
        let cols = self
            .order
            .par_iter()
            .map(|a| {
                let mut b = a.clone();
                b[i - 1] += 1;
                let e = b.iter().sum();
                self.normal_form(e, &b, RewriteStrategy::default())
            })
            .collect::<Result<Vec<_>>>()?;
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            for col in &cols {
                entries.push(col[r].clone());
            }
        }
        PolyMatrix::with_vars(n, n, self.basis.params.clone(), entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(x: &[&str], z: &str, y: &[&str], degrees: &[u32], lambda: u32, tau_g: u64) -> SgbShape {
        SgbShape {
            x_vars: x.iter().map(|s| s.to_string()).collect(),
            z: z.into(),
            y: y.iter().map(|s| s.to_string()).collect(),
            degrees: degrees.to_vec(),
            lambda,
            tau_g,
        }
    }

    fn basis(x: &[&str], z: &str, y: &[&str], degrees: &[u32], lambda: u32, gens: &[&str]) -> SpecialGroebnerBasis {
        let mut vars: Vec<&str> = x.to_vec();
        vars.push(z);
        vars.extend(y.iter().filter(|v| **v != z));
        let gens = gens.iter().map(|g| IntPoly::parse(g, &vars).unwrap()).collect();
        SpecialGroebnerBasis::new(shape(x, z, y, degrees, lambda, 64), gens).unwrap()
    }

    fn cubic() -> SpecialGroebnerBasis {
        basis(&["X1"], "zeta", &[], &[3], 0, &["zeta*X1^3 + 3*X1^2 - 12"])
    }

    #[test]
    fn validation_examples() {
        assert_eq!(cubic().validate().status(), ValidationStatus::Pass);

        let bad = basis(&["X1"], "zeta", &[], &[2], 0, &["zeta*X1^2 + X1^3"]);
        let rep = bad.validate();
        assert_eq!(rep.status(), ValidationStatus::Fail);
        assert!(rep.failures.iter().any(|f| f.contains("deg(Q) = 3")));

        // deg(Q_1) = d_1 here, which the strict tail bound rejects; the
        // equality warning is still reported.
        let eq = basis(&["X1", "X2"], "zeta", &[], &[2, 2], 0, &["zeta*X1^2 + X2^2", "zeta*X2^2 + 1"]);
        let rep = eq.validate();
        assert!(rep.warnings.iter().any(|w| w.contains("degree in X2 equals 2")));
        assert_eq!(rep.status(), ValidationStatus::Fail);

        let warn = basis(&["X1", "X2"], "zeta", &[], &[3, 2], 0, &["zeta*X1^3 + X2^2", "zeta*X2^2 + 1"]);
        assert_eq!(warn.validate().status(), ValidationStatus::PassWithWarning);

        let neg = basis(&["X1"], "zeta", &[], &[3], 0, &["-zeta*X1^3 + 3*X1^2 - 12"]);
        assert!(neg.validate().failures[0].contains("sign"));
        assert!(neg.mult_matrix(1).is_err());
    }

    #[test]
    fn sign_normalization() {
        let g = IntPoly::parse("-zeta*X1^3 + 3*X1^2 - 12", &["X1", "zeta"]).unwrap();
        let n = normalize_leading_sign(&g, "X1", 3, "zeta").unwrap();
        assert_eq!(n.to_string(), "X1^3*zeta - 3*X1^2 + 12");
        assert_eq!(normalize_leading_sign(&n, "X1", 3, "zeta").unwrap(), n);
    }

    #[test]
    fn basis_enumeration() {
        assert_eq!(mon_basis(&[3]), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(mon_basis(&[1, 1]), vec![vec![0, 0]]);
        assert_eq!(
            mon_basis(&[2, 2]),
            vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]
        );
        let b = basis(&["X1", "X2"], "Z", &[], &[2, 2], 0, &["Z*X1^2 + 1", "Z*X2^2 + 1"]);
        let shown: Vec<String> = b.mon_basis().iter().map(|a| b.basis_monomial(a).to_string()).collect();
        assert_eq!(shown, ["1", "X1*Z", "X2*Z", "X1*X2*Z^2"]);
    }

    #[test]
    fn normal_form_examples() {
        let b = basis(&["X1"], "Z", &["Y"], &[2], 1, &["Z*X1^2 + Y*X1 + 1"]);
        let nf = b.normal_form(2, &[2], RewriteStrategy::default()).unwrap();
        let s: Vec<String> = nf.iter().map(ToString::to_string).collect();
        assert_eq!(s, ["-Z", "-Y"]);
        let nf = b.normal_form(1, &[1], RewriteStrategy::default()).unwrap();
        let s: Vec<String> = nf.iter().map(ToString::to_string).collect();
        assert_eq!(s, ["0", "1"]);
        assert!(b.normal_form(1, &[2], RewriteStrategy::default()).is_err());

        let nf = cubic().normal_form(3, &[3], RewriteStrategy::default()).unwrap();
        let s: Vec<String> = nf.iter().map(ToString::to_string).collect();
        assert_eq!(s, ["12*zeta^2", "0", "-3"]);
    }

    #[test]
    fn multiplication_matrix_examples() {
        let m = cubic().mult_matrix(1).unwrap();
        assert_eq!(m.to_string(), "[[0, 0, 12*zeta^2], [1, 0, 0], [0, 1, -3]]");

        let b = basis(&["X1"], "Z", &["Y"], &[2], 1, &["Z*X1^2 + Y*X1 + 1"]);
        assert_eq!(b.mult_matrix(1).unwrap().to_string(), "[[0, -Z], [1, -Y]]");

        let b = basis(&["X1", "X2"], "Z", &[], &[1, 1], 0, &["Z*X1 + 2", "Z*X2 + 3"]);
        let ms = b.mult_matrices().unwrap();
        assert_eq!(ms[0].to_string(), "[[-2]]");
        assert_eq!(ms[1].to_string(), "[[-3]]");
        assert_eq!(b.mult_matrix_linear_form(2).unwrap().to_string(), "[[-8]]");
        assert_eq!(b.mult_matrix_linear_form(0).unwrap(), ms[0]);
        assert_eq!(cubic().mult_matrix_linear_form(7).unwrap(), cubic().mult_matrix(1).unwrap());
    }

    #[test]
    fn entry_audit_on_cubic() {
        let mut b = cubic();
        b.shape.tau_g = 5;
        let ms = b.mult_matrices().unwrap();
        let a = b.audit_entries(&ms).unwrap();
        assert_eq!(a.bitsize_bound, 19);
        assert!(a.passed(), "{a:?}");
        assert_eq!(a.max_z_degree, 2);
    }

    #[test]
    fn commutation_and_confluence_on_two_variables() {
        let b = basis(
            &["X1", "X2"],
            "Z",
            &["Y"],
            &[3, 2],
            1,
            &["Z*X1^3 + Y*X1*X2 - X2 + 2", "Z*X2^2 + X1 - 3*Y*X2 + Y"],
        );
        assert!(b.validate().is_valid());
        let ms = b.mult_matrices().unwrap();
        assert!(commutation_failures(&ms).unwrap().is_empty());
        let c = b.confluence_probe(1000, 7).unwrap();
        assert_eq!(c.mismatches, 0);
        // columns agree with the normal form of Z*X_i*b
        for (col, a) in b.mon_basis().iter().enumerate() {
            let mut e = a.clone();
            e[1] += 1;
            let nf = b
                .normal_form(e.iter().sum(), &e, RewriteStrategy::LowestTermLargestExcess)
                .unwrap();
            assert_eq!(ms[1].column(col), nf);
        }
    }
}
