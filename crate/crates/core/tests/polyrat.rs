use proptest::prelude::*;
use sisampling::poly::{poly_roots, support_gcd};
use sisampling::{ComplexPoly, Root, SymmetryOrder, C64};

fn root_strategy() -> impl Strategy<Value = Vec<(f64, f64, usize)>> {
    prop::collection::vec((0.2f64..3.0, 0.0f64..std::f64::consts::TAU, 1usize..=2), 1..=6)
}

fn separated(raw: &[(f64, f64, usize)]) -> Vec<Root> {
    let mut roots: Vec<Root> = Vec::new();
    let mut degree = 0;
    for &(r, th, m) in raw {
        let value = C64::from_polar(r, th);
        if degree + m > 12 || roots.iter().any(|x| (x.value - value).norm() < 0.1) {
            continue;
        }
        degree += m;
        roots.push(Root { value, multiplicity: m });
    }
    roots
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn roots_reconstruct_the_polynomial(raw in root_strategy(), lead_re in 0.5f64..2.0, lead_im in -1.0f64..1.0) {
        let lead = C64::new(lead_re, lead_im);
        let p = ComplexPoly::from_roots(&separated(&raw), lead).unwrap();
        let found = poly_roots(&p).unwrap();
        let q = ComplexPoly::from_roots(&found, p.leading()).unwrap();
        prop_assert_eq!(q.degree(), p.degree());
        let scale = p.max_coeff();
        for (a, b) in p.coeffs().iter().zip(q.coeffs()) {
            prop_assert!((a - b).norm() <= 1e-9 * scale, "{} vs {}", a, b);
        }
    }

    #[test]
    fn support_gcd_is_maximal(k in 1usize..=4, seed_coeffs in prop::collection::vec(0.3f64..2.0, 2..=3)) {
        // R(u) = u^k / (Σ c_j u^{jk}) with a nonzero constant term in Q
        let mut q = vec![C64::new(0.0, 0.0); k * (seed_coeffs.len() - 1) + 1];
        for (j, c) in seed_coeffs.iter().enumerate() {
            q[j * k] = C64::new(*c, 0.0);
        }
        let mut p = vec![C64::new(0.0, 0.0); k + 1];
        p[k] = C64::new(1.0, 0.0);
        let (p, q) = (ComplexPoly::new(p).unwrap(), ComplexPoly::new(q).unwrap());
        let g = match support_gcd(&p, &q) {
            SymmetryOrder::Finite(g) => g,
            SymmetryOrder::Unbounded => return Err(TestCaseError::fail("unbounded")),
        };
        prop_assert_eq!(g, k);
        let ratio = |kk: usize, z: C64| {
            let w = C64::from_polar(1.0, std::f64::consts::TAU / kk as f64);
            let r = |u: C64| p.eval(u) / q.eval(u);
            r(w * z) / r(z)
        };
        let pts: Vec<C64> = (0..20).map(|i| C64::from_polar(0.4 + 0.05 * i as f64, 0.3 + 0.7 * i as f64)).collect();
        let c0 = ratio(g, pts[0]);
        for z in &pts {
            prop_assert!((ratio(g, *z) - c0).norm() <= 1e-10 * c0.norm());
        }
        let deg_q = q.degree().unwrap();
        for kk in (g + 1)..=(2 * deg_q) {
            if g % kk == 0 {
                continue;
            }
            let vals: Vec<C64> = pts.iter().map(|z| ratio(kk, *z)).collect();
            let spread = vals.iter().map(|v| (v - vals[0]).norm()).fold(0.0, f64::max);
            prop_assert!(spread > 1e-6, "k' = {} looked like a symmetry", kk);
        }
    }
}

#[test]
fn degree_twelve_real_polynomial() {
    let roots: Vec<Root> = (0..12)
        .map(|j| Root {
            value: C64::from_polar(1.0 + 0.1 * j as f64, 0.5 * j as f64),
            multiplicity: 1,
        })
        .collect();
    let p = ComplexPoly::from_roots(&roots, C64::new(1.0, 0.0)).unwrap();
    assert_eq!(poly_roots(&p).unwrap().len(), 12);
}
