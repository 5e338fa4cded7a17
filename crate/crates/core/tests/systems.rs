//! Critical-point systems built by the pipelines: commuting matrices, agreeing
//! rewrite strategies, and entry / characteristic polynomial sizes within the
//! published estimates (recomputed here from their formulas).

use ballbound::harness::random_instance;
use ballbound::linalg::{charpoly, charpoly_with, CharpolyOptions};
use ballbound::pipeline::{cr_bounded, cr_meeting, deform_bounded, deform_meeting, meeting_degree};
use ballbound::sgb::{linear_form, SpecialGroebnerBasis};
use ballbound::{bit_u64, IntPoly, PolyMatrix};

const SAMPLES: usize = 1000;

fn assert_commute(mats: &[PolyMatrix], what: &str) {
    for i in 0..mats.len() {
        for j in i + 1..mats.len() {
            let ab = mats[i].mul(&mats[j]).unwrap();
            let ba = mats[j].mul(&mats[i]).unwrap();
            assert!(ab == ba, "{what}: M{} and M{} do not commute", i + 1, j + 1);
        }
    }
}

fn assert_confluent(sgb: &SpecialGroebnerBasis, seed: u64, what: &str) {
    let r = sgb.confluence_probe(SAMPLES, seed).unwrap();
    assert_eq!(r.checked, SAMPLES, "{what}");
    assert_eq!(r.mismatches, 0, "{what}: rewrite strategies disagree");
}

fn max_entry_bits(mats: &[PolyMatrix]) -> u64 {
    mats.iter()
        .flat_map(|m| m.entries())
        .map(|e| e.bitsize())
        .max()
        .unwrap_or(0)
}

fn max_degree(p: &IntPoly, names: &[&str]) -> u32 {
    let idx: Vec<usize> = names.iter().filter_map(|n| p.var_index(n)).collect();
    p.terms()
        .map(|(e, _)| idx.iter().map(|&i| e[i]).sum::<u32>())
        .max()
        .unwrap_or(0)
}

fn order(q: &IntPoly, first: usize) -> Vec<String> {
    let mut xs: Vec<String> = q.vars().to_vec();
    let v = xs.remove(first);
    xs.insert(0, v);
    xs
}

#[test]
fn containing_systems() {
    let mut systems = 0;
    for k in 1..=2usize {
        for d in 1..=3u32 {
            for seed in 0..3u64 {
                let q = random_instance(100 * k as u64 + 10 * d as u64 + seed, k, d, 3, 1)
                    .unwrap()
                    .remove(0);
                let tau = q.bitsize();
                let (plus, minus) = deform_bounded(&q, "zeta").unwrap();
                let (kk, dd) = (k as u64, d as u64);
                let n = (dd + 1) * dd.pow(kk as u32 - 1);
                let entry_bound = (kk * (dd - 1) + 2) * (tau + bit_u64(dd + 1) + bit_u64(n)) - bit_u64(n);
                let chi_bound = n * (kk * dd + 2) * (tau + bit_u64(dd + 1) + bit_u64(n));
                let zeta_bound = (kk * (dd - 1) + 2) * n;
                for p in [&plus, &minus] {
                    for first in 0..k {
                        let what = format!("Q = {q}, direction {}, deformation {p}", first + 1);
                        let sgb = cr_bounded(p, &order(&q, first), "zeta", d, tau).unwrap();
                        let v = sgb.validate();
                        assert!(v.is_valid(), "{what}: {:?}", v.failures);
                        assert_eq!(sgb.n() as u64, n, "{what}");
                        let mats = sgb.mult_matrices().unwrap();
                        assert_commute(&mats, &what);
                        assert_confluent(&sgb, seed, &what);
                        let bits = max_entry_bits(&mats);
                        assert!(bits <= entry_bound, "{what}: entry bitsize {bits} > {entry_bound}");
                        let chi = charpoly(&mats[0], "T").unwrap();
                        assert!(chi.bitsize() <= chi_bound, "{what}: charpoly bitsize {} > {chi_bound}", chi.bitsize());
                        let zd = max_degree(&chi, &["zeta"]) as u64;
                        assert!(zd <= zeta_bound, "{what}: degree in zeta {zd} > {zeta_bound}");
                        systems += 1;
                    }
                }
            }
        }
    }
    assert_eq!(systems, 3 * 3 * 2 * 3);
}

struct MeetSizes {
    n: u64,
    big_d: u64,
    tau_g: u64,
    entry: u64,
    linear_entry: u64,
    chi: u64,
}

fn meet_sizes(k: u64, d: u64, tau: u64) -> MeetSizes {
    let dp = meeting_degree(d as u32) as u64;
    let n = dp * (dp - 1).pow(k as u32 - 1);
    let big_d = k * dp - 2 * (k - 1);
    let tau_g = 2 * tau + k * bit_u64(d + 1) + bit_u64(dp) + 1;
    let b2d = bit_u64(2 * big_d + 1);
    let entry = big_d * (tau_g + 4 * b2d + bit_u64(n)) - 2 * b2d - bit_u64(n);
    let rho = big_d * (k * bit_u64(d + 1) + bit_u64(dp) + 1 + 4 * b2d + bit_u64(n)) - 2 * b2d;
    let sigma = (2 * k).saturating_sub(3) * bit_u64(n) + k * bit_u64(k);
    let rho_p = (2 * k - 2) * bit_u64(n) + k * bit_u64(k) + 2 * bit_u64(2 * big_d * n + 1) + 1;
    MeetSizes {
        n,
        big_d,
        tau_g,
        entry,
        linear_entry: 2 * big_d * tau + rho + sigma,
        chi: 2 * n * big_d * tau + n * (rho + rho_p),
    }
}

#[test]
fn meeting_systems() {
    let curated = [
        ("X1 - 3", vec!["X1"]),
        ("2*X1 + 1", vec!["X1"]),
        ("X1 - X2", vec!["X1", "X2"]),
        ("X1 + X2 - 1", vec!["X1", "X2"]),
    ];
    for (i, (text, vars)) in curated.iter().enumerate() {
        let q = IntPoly::parse(text, vars).unwrap();
        let k = vars.len() as u64;
        let tau = q.bitsize();
        let s = meet_sizes(k, 1, tau);
        let (_, p) = deform_meeting(&q, "eps", "zeta").unwrap();
        let xs: Vec<String> = q.vars().to_vec();
        let sgb = cr_meeting(&p, &xs, "zeta", "eps", 1, s.tau_g).unwrap();
        let v = sgb.validate();
        assert!(v.is_valid(), "{text}: {:?}", v.failures);
        assert_eq!(sgb.n() as u64, s.n, "{text}");
        assert_eq!(sgb.big_d() as u64, s.big_d, "{text}");
        let mats = sgb.mult_matrices().unwrap();
        assert_commute(&mats, text);
        assert_confluent(&sgb, i as u64, text);
        let bits = max_entry_bits(&mats);
        assert!(bits <= s.entry, "{text}: entry bitsize {bits} > {}", s.entry);
        for m in &mats {
            for e in m.entries() {
                assert!(max_degree(e, &["zeta", "eps"]) as u64 <= 2 * s.big_d, "{text}: entry {e}");
            }
        }
        let js: Vec<u64> = if k == 1 { vec![0] } else { vec![0, 1, s.n * s.n] };
        for j in js {
            let l = linear_form(&mats, j).unwrap();
            let lb = max_entry_bits(std::slice::from_ref(&l));
            assert!(lb <= s.linear_entry, "{text}, j = {j}: entry bitsize {lb} > {}", s.linear_entry);
            // Full χ in one variable; for two variables only the part below
            // zeta^(N+1), which is what the pipeline uses.
            let chi = if k == 1 {
                charpoly(&l, "T").unwrap()
            } else {
                let opts = CharpolyOptions {
                    truncate: Some(("zeta", s.n as u32 + 1)),
                    ..Default::default()
                };
                charpoly_with(&l, "T", opts).unwrap()
            };
            assert!(chi.bitsize() <= s.chi, "{text}, j = {j}: charpoly bitsize {} > {}", chi.bitsize(), s.chi);
            assert!(max_degree(&chi, &["zeta", "eps"]) as u64 <= 2 * s.big_d * s.n, "{text}, j = {j}");
            assert!(max_degree(&chi, &["T"]) as u64 <= s.n, "{text}, j = {j}");
        }
    }
}
