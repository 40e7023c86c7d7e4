use gntt_core::fast::{fast_forward, FastNttTables};
use gntt_core::matrix::{build_matrices_lut, matrix_forward};
use gntt_core::modarith::{find_psi, mod_add, mod_inv, mod_mul, mod_pow};
use gntt_core::{make_engine, nwc_schoolbook, EngineKind, NttEngine, NttParams, Polynomial};
use proptest::prelude::*;

fn rings() -> impl Strategy<Value = NttParams> {
    prop_oneof![
        Just((17u64, 8u64)),
        Just((7681, 64)),
        Just((12289, 512)),
        Just((8_380_417, 256)),
        Just((1_073_479_681, 128)),
    ]
    .prop_map(|(q, n)| NttParams::new(q, n).unwrap())
}

fn poly_in(p: NttParams) -> impl Strategy<Value = Polynomial> {
    proptest::collection::vec(0..p.q(), p.n()).prop_map(move |c| Polynomial::new(c, p).unwrap())
}

fn ring_with_pair() -> impl Strategy<Value = (NttParams, Polynomial, Polynomial, u32, u32)> {
    rings().prop_flat_map(|p| (Just(p), poly_in(p), poly_in(p), 0..p.q(), 0..p.q()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn convolution_theorem((p, a, b, _, _) in ring_with_pair()) {
        let t = FastNttTables::new(&p);
        let lhs = fast_forward(&nwc_schoolbook(&a, &b).unwrap(), &t).unwrap();
        let rhs = fast_forward(&a, &t).unwrap().pointwise(&fast_forward(&b, &t).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn forward_is_linear((p, a, b, alpha, beta) in ring_with_pair()) {
        let t = FastNttTables::new(&p);
        let q = p.q();
        let lhs = fast_forward(&a.scale(alpha).add(&b.scale(beta)).unwrap(), &t).unwrap();
        let fa = fast_forward(&a, &t).unwrap();
        let fb = fast_forward(&b, &t).unwrap();
        let rhs: Vec<u32> = fa.values().iter().zip(fb.values())
            .map(|(&x, &y)| mod_add(mod_mul(alpha, x, q), mod_mul(beta, y, q), q))
            .collect();
        prop_assert_eq!(lhs.values(), rhs.as_slice());
    }

    #[test]
    fn fast_and_matrix_forward_agree((p, a, _, _, _) in ring_with_pair()) {
        let m = build_matrices_lut(&p);
        prop_assert_eq!(fast_forward(&a, &FastNttTables::new(&p)).unwrap(), matrix_forward(&a, &m).unwrap());
    }

    #[test]
    fn inverse_is_two_sided(x in 1u32..1_073_479_681) {
        let q = 1_073_479_681;
        let y = mod_inv(x, q).unwrap();
        prop_assert_eq!(mod_mul(x, y, q), 1);
        prop_assert_eq!(mod_inv(y, q).unwrap(), x);
    }

    #[test]
    fn pow_adds_exponents(base in 0u32..12289, e1 in 0u64..100_000, e2 in 0u64..100_000) {
        let q = 12289;
        prop_assert_eq!(mod_pow(base, e1 + e2, q), mod_mul(mod_pow(base, e1, q), mod_pow(base, e2, q), q));
    }
}

#[test]
fn engine_quadrilateral() {
    use gntt_core::random_polynomial;
    for (q, n) in [(7681u64, 256u64), (12289, 1024), (1_073_479_681, 512)] {
        let p = NttParams::new(q, n).unwrap();
        let engines: Vec<_> = EngineKind::ALL
            .iter()
            .map(|&k| make_engine(k, &p))
            .collect();
        for s in 0..3 {
            let a = random_polynomial(&p, 10 * s);
            let b = random_polynomial(&p, 10 * s + 1);
            let oracle = nwc_schoolbook(&a, &b).unwrap();
            for e in &engines {
                assert_eq!(
                    e.polymul(&a, &b).unwrap(),
                    oracle,
                    "{} at ({q}, {n})",
                    e.kind()
                );
            }
        }
    }
}

#[test]
fn find_psi_golden_values() {
    // Frozen from an exhaustive scan: smallest x in [2, q) with x^n = q - 1.
    let golden = [
        (17u32, 2usize, 4u32),
        (7681, 64, 202),
        (7681, 128, 198),
        (7681, 256, 62),
        (12289, 512, 49),
        (12289, 1024, 7),
        (12289, 2048, 41),
        (8_380_417, 256, 1753),
        (8_380_417, 512, 10730),
        (8_380_417, 1024, 1306),
        (8_380_417, 2048, 2741),
        (1_073_479_681, 1024, 746_927),
        (1_073_479_681, 2048, 205_148),
    ];
    for (q, n, psi) in golden {
        assert_eq!(find_psi(q, n).unwrap(), psi, "({q}, {n})");
        assert_eq!(find_psi(q, n).unwrap(), find_psi(q, n).unwrap());
    }
}

#[test]
fn engines_primitivity_across_divisors() {
    for (q, n) in gntt_core::bench::ParamSuite::all().entries {
        let p = NttParams::new(q, n).unwrap();
        assert_eq!(mod_pow(p.psi(), 2 * n, p.q()), 1);
        // Proper divisors of 2n are the powers of two below 2n.
        let mut k = 1;
        while k < 2 * n {
            assert_ne!(mod_pow(p.psi(), k, p.q()), 1, "psi^{k} at ({q}, {n})");
            k *= 2;
        }
    }
}
