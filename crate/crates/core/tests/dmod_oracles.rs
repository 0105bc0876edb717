use difmod::cplx::{bass_numbers, min_inj_resolution, Verdict};
use difmod::dmod::{contractible_all4, dm_minimal_check, is_contractible, strip_general};
use difmod::fpmod::HomSpace;
use difmod::verify::gen::{random_diffmod, random_module, GenStats};
use difmod::verify::GenConfig;
use difmod::{DiffMod, ModMap, Module, Ring};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small_stream(desc: &str, seed: u64, n: usize) -> Vec<DiffMod> {
    let ring = Ring::parse(desc).unwrap();
    let cfg = GenConfig { rings: vec![desc.into()], max_dim: 2, max_width: 2, ..GenConfig::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = GenStats::default();
    (0..n).map(|_| random_diffmod(&cfg, &ring, &mut rng, &mut stats)).collect()
}

/// Searches every endomorphism for `hd + dh = id`.
fn brute_force_contractible(dm: &DiffMod) -> Option<bool> {
    let h = HomSpace::new(dm.module(), dm.module()).unwrap();
    if h.module.cardinality()? > 4096 {
        return None;
    }
    let id = ModMap::identity(dm.module());
    Some(h.module.elements()?.iter().any(|v| {
        let f = h.to_map(v);
        f.compose(dm.d()).unwrap().add(&dm.d().compose(&f).unwrap()).unwrap() == id
    }))
}

#[test]
fn contractibility_matches_exhaustive_search() {
    let mut checked = 0;
    for (k, desc) in ["Z/4", "F2[x]/(x^2)", "Z/9", "Z/8"].iter().enumerate() {
        for dm in small_stream(desc, k as u64, 60) {
            if let Some(brute) = brute_force_contractible(&dm) {
                let c = contractible_all4(&dm).unwrap();
                assert_eq!(c.c1, brute, "{dm:?}");
                assert!(c.agree() && c.witnesses_verify(&dm));
                checked += 1;
            }
        }
    }
    assert!(checked > 100);
}

#[test]
fn cohomology_order_matches_enumeration() {
    for desc in ["Z/4", "Z/8", "F3[x]/(x^2)"] {
        for dm in small_stream(desc, 9, 40) {
            let x = dm.module();
            let Some(elems) = x.elements() else { continue };
            if elems.len() > 4096 {
                continue;
            }
            let ker = elems.iter().filter(|v| x.elem_is_zero(&dm.d().apply(v))).count() as u128;
            let im: std::collections::HashSet<_> = elems.iter().map(|v| dm.d().apply(v)).collect();
            let h = dm.cohomology().module.cardinality().unwrap();
            assert_eq!(h * im.len() as u128, ker, "{dm:?}");
        }
    }
}

#[test]
fn multiplication_by_p_on_z4_is_acyclic_but_not_contractible() {
    let ring = Ring::parse("Z/4").unwrap();
    let r = Module::free(&ring, 1);
    let dm = DiffMod::new(r.clone(), ModMap::from_ints(&r, &r, &[&[2]]).unwrap()).unwrap();
    assert!(dm.is_acyclic());
    assert!(!is_contractible(&dm));
    let c = contractible_all4(&dm).unwrap();
    assert!(!c.c1 && !c.c2 && !c.c3 && !c.c4 && c.acyclic);
    assert!(dm_minimal_check(&dm).unwrap());
}

#[test]
fn stripping_keeps_the_isomorphism_type() {
    for desc in ["Z/4", "Z/8", "F2[x]/(x^2)"] {
        for dm in small_stream(desc, 3, 40) {
            let dec = strip_general(&dm).unwrap();
            assert!(dec.verify(&dm));
            assert_eq!(dm.module().length(), dec.minimal_part.module().length() + 2 * dec.pairs.length());
        }
    }
}

#[test]
fn cyclic_modules_have_constant_bass_numbers() {
    // R/(pi^e) with 0 < e < m is not injective and its cosyzygies alternate
    // between R/(pi^e) and R/(pi^(m-e)), so every Bass number is 1.
    for (desc, m) in [("Z/8", 3u32), ("Z/27", 3), ("F2[x]/(x^4)", 4), ("Q[x]/(x^3)", 3)] {
        let ring = Ring::parse(desc).unwrap();
        for e in 1..m {
            let b = bass_numbers(&Module::local(&ring, &[e]).unwrap(), 6).unwrap();
            assert_eq!(b.mu, vec![1; 7], "{desc} e={e}");
            assert!(b.routes_agree);
            assert_eq!(b.verdict, Verdict::Infinite);
        }
        let free = bass_numbers(&Module::free(&ring, 2), 6).unwrap();
        assert_eq!(free.mu, vec![2, 0, 0, 0, 0, 0, 0]);
    }
}

#[test]
fn bass_numbers_add_over_summands() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for desc in ["Z/4", "Z/8", "F3[x]/(x^3)"] {
        let ring = Ring::parse(desc).unwrap();
        for _ in 0..10 {
            let m = random_module(&ring, &mut rng, 3);
            let summed: Vec<usize> = m.exps(0).iter().fold(vec![0; 6], |acc, &e| {
                let b = bass_numbers(&Module::local(&ring, &[e]).unwrap(), 5).unwrap();
                acc.iter().zip(&b.mu).map(|(x, y)| x + y).collect()
            });
            assert_eq!(bass_numbers(&m, 5).unwrap().mu, summed, "{m}");
        }
    }
}

#[test]
fn resolution_verdicts_follow_freeness() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for desc in ["Z/4", "Z/8", "F2[x]/(x^2)", "Z/12"] {
        let ring = Ring::parse(desc).unwrap();
        for _ in 0..15 {
            let m = random_module(&ring, &mut rng, 3);
            let res = min_inj_resolution(&m, 4);
            assert_eq!(matches!(res.verdict(), Verdict::Finite(_)), m.is_free(), "{m}");
            assert!(res.complex.is_minimal().unwrap());
        }
    }
}
