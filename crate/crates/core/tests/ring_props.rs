use difmod::{ChainRing, Ring};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn chain(desc: &str) -> ChainRing {
    let r = Ring::parse(desc).unwrap();
    assert!(r.is_local());
    r.component(0)
}

const CHAINS: [&str; 7] = ["Z/4", "Z/8", "Z/27", "F2[x]/(x^2)", "F3[x]/(x^3)", "F5[x]/(x^4)", "Q[x]/(x^3)"];

proptest! {
    #[test]
    fn valuation_of_product(seed in any::<u64>(), k in 0usize..CHAINS.len()) {
        let r = chain(CHAINS[k]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = r.random(&mut rng);
        let b = r.random(&mut rng);
        let expected = (r.valuation(&a) + r.valuation(&b)).min(r.m());
        prop_assert_eq!(r.valuation(&r.mul(&a, &b)), expected);
    }

    #[test]
    fn units_have_valuation_zero(seed in any::<u64>(), k in 0usize..CHAINS.len()) {
        let r = chain(CHAINS[k]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = r.random(&mut rng);
        prop_assert_eq!(r.is_unit(&a), r.valuation(&a) == 0);
        if let Some(inv) = r.inverse(&a) {
            prop_assert_eq!(r.mul(&a, &inv), r.one());
        }
    }
}

#[test]
fn crt_tables_match_direct_arithmetic() {
    for n in 2..=100i64 {
        let ring = Ring::parse(&format!("Z/{n}")).unwrap();
        let elems: Vec<_> = (0..n).map(|a| ring.from_int(a)).collect();
        for a in 0..n {
            for b in 0..n {
                let (x, y) = (&elems[a as usize], &elems[b as usize]);
                assert_eq!(ring.add(x, y), elems[((a + b) % n) as usize], "Z/{n}: {a} + {b}");
                assert_eq!(ring.mul(x, y), elems[((a * b) % n) as usize], "Z/{n}: {a} * {b}");
            }
        }
    }
}

#[test]
fn units_by_brute_force() {
    let mut descs: Vec<String> = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13] {
        let mut q = p;
        while q * p <= 256 {
            q *= p;
            descs.push(format!("Z/{q}"));
        }
        let mut m = 1;
        while p.pow(m + 1) <= 256 {
            m += 1;
            descs.push(format!("F{p}[x]/(x^{m})"));
        }
    }
    for d in descs {
        let r = chain(&d);
        let all = r.elements().unwrap();
        assert!(all.len() <= 256, "{d}");
        for a in &all {
            let brute = all.iter().any(|b| r.mul(a, b) == r.one());
            assert_eq!(r.is_unit(a), brute, "{d}: {}", r.format(a));
        }
    }
}
