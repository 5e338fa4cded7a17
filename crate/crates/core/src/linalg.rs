//! Division-free characteristic polynomials (Berkowitz).

use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use crate::error::{Error, Result};
use crate::matrix::PolyMatrix;
use crate::poly::IntPoly;

/// Knobs for long-running characteristic polynomial computations.
#[derive(Clone, Copy, Default)]
pub struct CharpolyOptions<'a> {
    /// Reduce every intermediate modulo `var^prec`.
    pub truncate: Option<(&'a str, u32)>,
    pub deadline: Option<Instant>,
    /// Incremented once per completed leading principal submatrix.
    pub progress: Option<&'a AtomicUsize>,
}

/// `det(T*I - M)` as a polynomial over the matrix variables plus `t`.
pub fn charpoly(m: &PolyMatrix, t: &str) -> Result<IntPoly> {
    charpoly_with(m, t, CharpolyOptions::default())
}

pub fn charpoly_with(m: &PolyMatrix, t: &str, opts: CharpolyOptions<'_>) -> Result<IntPoly> {
    if m.vars().iter().any(|v| v == t) {
        return Err(Error::VariableInUse(t.to_string()));
    }
    let coeffs = charpoly_coefficients(m, opts)?;
    IntPoly::from_coefficients(&coeffs, t)
}

/// Coefficients `c_0, ..., c_N` of `det(T*I - M)` (ascending in `T`).
pub fn charpoly_coefficients(m: &PolyMatrix, opts: CharpolyOptions<'_>) -> Result<Vec<IntPoly>> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let vars = m.vars().clone();
    let trunc = match opts.truncate {
        Some((name, prec)) => vars.iter().position(|v| v == name).map(|idx| (idx, prec)),
        None => None,
    };
    let reduce = |p: IntPoly| match trunc {
        Some((idx, prec)) => p.truncate_in(idx, prec),
        None => p,
    };
    let check = || -> Result<()> {
        match opts.deadline {
            Some(d) if Instant::now() > d => {
                Err(Error::BudgetExceeded("characteristic polynomial".into()))
            }
            _ => Ok(()),
        }
    };
    let zero = IntPoly::zero(vars.clone());
    let one = IntPoly::one(vars.clone());
    let n = m.rows();
    // p holds det(T*I - A_r) for the leading r x r block, highest power first.
    let mut p: Vec<IntPoly> = vec![one.clone()];
    for r in 0..n {
        // A_{r+1} = [[A_r, C], [R, a]]
        let a = m.get(r, r);
        let mut toeplitz = Vec::with_capacity(r + 2);
        toeplitz.push(one.clone());
        toeplitz.push(-a);
        let mut v: Vec<IntPoly> = (0..r).map(|i| m.get(i, r).clone()).collect();
        for step in 0..r {
            check()?;
            let mut rv = zero.clone();
            for (j, x) in v.iter().enumerate() {
                let rj = m.get(r, j);
                if !rj.is_zero() && !x.is_zero() {
                    rv = &rv + &(rj * x);
                }
            }
            toeplitz.push(-reduce(rv));
            if step + 1 < r {
                v = (0..r)
                    .map(|i| {
                        let mut acc = zero.clone();
                        for (j, x) in v.iter().enumerate() {
                            let mij = m.get(i, j);
                            if !mij.is_zero() && !x.is_zero() {
                                acc = &acc + &(mij * x);
                            }
                        }
                        reduce(acc)
                    })
                    .collect();
            }
        }
        check()?;
        let next: Vec<IntPoly> = (0..r + 2)
            .map(|i| {
                let mut acc = zero.clone();
                for j in 0..=i.min(r) {
                    let t = &toeplitz[i - j];
                    if !t.is_zero() && !p[j].is_zero() {
                        acc = &acc + &(t * &p[j]);
                    }
                }
                reduce(acc)
            })
            .collect();
        p = next;
        if let Some(c) = opts.progress {
            c.fetch_add(1, Ordering::Relaxed);
        }
    }
    p.reverse();
    Ok(p)
}

pub fn determinant(m: &PolyMatrix) -> Result<IntPoly> {
    let c = charpoly_coefficients(m, CharpolyOptions::default())?;
    let c0 = c[0].clone();
    Ok(if m.rows() % 2 == 1 { -c0 } else { c0 })
}

/// `sum_e coeffs[e] * M^e`; zero exactly when `coeffs` annihilates `M`.
pub fn evaluate_at_matrix(coeffs: &[IntPoly], m: &PolyMatrix) -> Result<PolyMatrix> {
    let n = m.rows();
    let mut acc = PolyMatrix::zeros(n, n, m.vars().clone());
    for c in coeffs.iter().rev() {
        acc = acc.mul(m)?.add(&PolyMatrix::identity(n, m.vars().clone()).scale_poly(c)?)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn mat(rows: &[&[&str]], vars: &[&str]) -> PolyMatrix {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|s| IntPoly::parse(s, vars).unwrap()).collect())
            .collect();
        PolyMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn charpoly_examples() {
        let m = mat(&[&["0", "-Z"], &["1", "-Y"]], &["Y", "Z"]);
        assert_eq!(
            charpoly(&m, "T").unwrap(),
            IntPoly::parse("T^2 + Y*T + Z", &["Y", "Z", "T"]).unwrap()
        );
        let m = mat(&[&["a"]], &["a"]);
        assert_eq!(charpoly(&m, "T").unwrap(), IntPoly::parse("T - a", &["a", "T"]).unwrap());
        let m = mat(
            &[&["0", "0", "12*zeta^2"], &["1", "0", "0"], &["0", "1", "-3"]],
            &["zeta"],
        );
        let chi = charpoly(&m, "T").unwrap();
        assert_eq!(chi, IntPoly::parse("T^3 + 3*T^2 - 12*zeta^2", &["zeta", "T"]).unwrap());
        assert_eq!(determinant(&m).unwrap().to_string(), "12*zeta^2");
        assert!(charpoly(&m, "zeta").is_err());
        let rect = PolyMatrix::zeros(2, 3, m.vars().clone());
        assert!(matches!(charpoly(&rect, "T"), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn truncation_and_progress() {
        let m = mat(
            &[&["0", "0", "12*zeta^2"], &["1", "0", "0"], &["0", "1", "-3"]],
            &["zeta"],
        );
        let done = AtomicUsize::new(0);
        let opts = CharpolyOptions {
            truncate: Some(("zeta", 2)),
            deadline: None,
            progress: Some(&done),
        };
        let chi = charpoly_with(&m, "T", opts).unwrap();
        assert_eq!(chi.to_string(), "T^3 + 3*T^2");
        assert_eq!(done.load(Ordering::Relaxed), 3);
        let late = CharpolyOptions {
            deadline: Some(Instant::now() - std::time::Duration::from_secs(1)),
            ..Default::default()
        };
        assert!(matches!(
            charpoly_with(&m, "T", late),
            Err(Error::BudgetExceeded(_))
        ));
    }

    // Independent oracle: cofactor expansion over the integers.
    fn cofactor_det(a: &[Vec<BigInt>]) -> BigInt {
        let n = a.len();
        if n == 0 {
            return BigInt::from(1);
        }
        let mut total = BigInt::from(0);
        for j in 0..n {
            if a[0][j] == BigInt::from(0) {
                continue;
            }
            let minor: Vec<Vec<BigInt>> = a[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
                .collect();
            let term = &a[0][j] * cofactor_det(&minor);
            if j % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    fn small_poly() -> impl Strategy<Value = IntPoly> {
        prop::collection::vec((0u32..3, 0u32..3, -5i64..=5), 0..4).prop_map(|ts| {
            IntPoly::from_terms(
                crate::poly::var_list(&["Y", "Z"]),
                ts.into_iter().map(|(a, b, c)| (vec![a, b], BigInt::from(c))),
            )
            .unwrap()
        })
    }

    fn square(max: usize) -> impl Strategy<Value = PolyMatrix> {
        (1..=max).prop_flat_map(|n| {
            prop::collection::vec(small_poly(), n * n).prop_map(move |es| {
                PolyMatrix::with_vars(n, n, crate::poly::var_list(&["Y", "Z"]), es).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn specialization_commutes(m in square(6), y in -3i64..=3, z in -3i64..=3, t in -4i64..=4) {
            let chi = charpoly(&m, "T").unwrap();
            let value = chi
                .specialize("Y", &BigInt::from(y)).unwrap()
                .specialize("Z", &BigInt::from(z)).unwrap()
                .specialize("T", &BigInt::from(t)).unwrap()
                .constant_term();
            let n = m.rows();
            let a: Vec<Vec<BigInt>> = (0..n)
                .map(|i| (0..n).map(|j| {
                    let e = m.get(i, j)
                        .specialize("Y", &BigInt::from(y)).unwrap()
                        .specialize("Z", &BigInt::from(z)).unwrap()
                        .constant_term();
                    let diag = if i == j { BigInt::from(t) } else { BigInt::from(0) };
                    diag - e
                }).collect())
                .collect();
            prop_assert_eq!(value, cofactor_det(&a));
        }

        #[test]
        fn cayley_hamilton(m in square(4)) {
            let c = charpoly_coefficients(&m, CharpolyOptions::default()).unwrap();
            prop_assert!(evaluate_at_matrix(&c, &m).unwrap().is_zero());
            let trace = (0..m.rows()).fold(IntPoly::zero(m.vars().clone()), |acc, i| &acc + m.get(i, i));
            prop_assert_eq!(&c[m.rows() - 1], &-trace);
        }
    }
}
