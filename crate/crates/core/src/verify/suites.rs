use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::gen::*;
use super::TrialCtx;
use crate::cplx::{bass_numbers, bass_numbers_per_component, min_inj_resolution, ChainMap, Complex, Verdict};
use crate::dmod::{
    contractible_all4, dm_is_injective_object, dm_minimal_check, mu_d, pair_homotopy_solve, strip_decompose, DiffMod,
    DmMap, Provenance,
};
use crate::error::Result;
use crate::fpmod::{socle, ModElem, ModMap, Module, Submodule};
use crate::functors::*;
use crate::linalg::Mat;
use crate::ring::{Elem, Ring};

type Rng8 = ChaCha8Rng;

pub(super) fn dispatch(prop: &str, cfg: &GenConfig, ring: &Ring, rng: &mut Rng8, ctx: &mut TrialCtx) -> Result<()> {
    match prop {
        "P3.2" => p3_2(cfg, ring, rng, ctx),
        "P3.3" => p3_3(cfg, ring, rng, ctx),
        "P3.4" => p3_4(cfg, ring, rng, ctx),
        "C3.5" => c3_5(cfg, ring, rng, ctx),
        "P3.6" => p3_6(cfg, ring, rng, ctx),
        "P3.7" => p3_7(cfg, ring, rng, ctx),
        "P4.1" => p4_1(cfg, ring, rng, ctx),
        "P4.3" => p4_3(cfg, ring, rng, ctx),
        "L4.4" => l4_4(cfg, ring, rng, ctx),
        "P4.5" => p4_5(cfg, ring, rng, ctx),
        "P5.1" => p5_1(cfg, ring, rng, ctx),
        "T5.2" => t5_2(cfg, ring, rng, ctx),
        "C5.3" => c5_3(cfg, ring, rng, ctx),
        "P6.1" => p6_1(cfg, ring, rng, ctx),
        "P6.2" => minimal_comp(cfg, ring, rng, ctx, Some(2)),
        "P6.3" => p6_3(cfg, ring, rng, ctx),
        _ => p6_4(cfg, ring, rng, ctx),
    }
}

/// `0 -> A -i-> B -p-> C -> 0` is exact.
fn is_exact(i: &ModMap, p: &ModMap) -> bool {
    let im = Submodule::image_of(i);
    let ker = Submodule::image_of(&p.kernel().inclusion);
    i.is_injective()
        && p.is_surjective()
        && i.cod().length() == i.dom().length() + p.cod().length()
        && im.contains_sub(&ker)
        && ker.contains_sub(&im)
}

fn total_cohomology(y: &Complex) -> Result<Module> {
    let hs: Vec<Module> = y.degrees().map(|i| y.cohomology(i)).collect();
    Ok(Module::direct_sum(y.ring(), &hs.iter().collect::<Vec<_>>())?.module)
}

fn p3_2(cfg: &GenConfig, ring: &Ring, rng: &mut Rng8, ctx: &mut TrialCtx) -> Result<()> {
    let s = random_cx_ses(cfg, ring, rng);
    ctx.record("ch_ses", &s);
    let lo = s.b.lo();
    let ci = comp_map(&ChainMap::new(&s.a, &s.b, lo, s.i.clone())?)?;
    let cp = comp_map(&ChainMap::new(&s.b, &s.c, lo, s.p.clone())?)?;
    let (ca, cb, cc) = (comp_cocomp_bounded(&s.a)?, comp_cocomp_bounded(&s.b)?, comp_cocomp_bounded(&s.c)?);
    ctx.check(DmMap::new(&ca, &cb, ci.clone()).is_ok() && DmMap::new(&cb, &cc, cp.clone()).is_ok(), "comp of a chain map is not a morphism");
    ctx.check(s.b.degrees().all(|k| is_exact(&s.i[(k - lo) as usize], &s.p[(k - lo) as usize])), "generated Ch sequence is not exact");
    let exact = is_exact(&ci, &cp);
    ctx.check(exact, "comp does not preserve exactness");
    ctx.count("ses_ch_exact", exact);

    let t = random_dm_ses(cfg, ring, rng, &mut ctx.stats);
    ctx.record("dif_ses", &t);
    let (a, b) = (rng.gen_range(-2..=0), rng.gen_range(0..=2));
    let (wa, wb, wc) = (exp_window(&t.a, a, b)?, exp_window(&t.b, a, b)?, exp_window(&t.c, a, b)?);
    let wi = ChainMap::new(&wa, &wb, a, vec![t.i.clone(); (b - a + 1) as usize]);
    let wp = ChainMap::new(&wb, &wc, a, vec![t.p.clone(); (b - a + 1) as usize]);
    ctx.check(wi.is_ok() && wp.is_ok(), "exp of a morphism is not a chain map");
    let exact = (a..=b).all(|k| {
        let (i, p) = (wi.as_ref().map(|f| f.at(k)), wp.as_ref().map(|f| f.at(k)));
        matches!((i, p), (Ok(i), Ok(p)) if is_exact(&i, &p))
    });
    ctx.check(exact, "exp does not preserve degreewise exactness");
    ctx.count("ses_dif_exact", exact);

    let w = random_diffmod(cfg, ring, rng, &mut ctx.stats);
    let z = random_complex(ring, rng, cfg.max_dim, cfg.max_width);
    ctx.record("adjunction", &(&w, &z));
    let rep = adjunction_exp_cocomp(&w, &z)?;
    ctx.check(rep.left_cardinality == rep.right_cardinality, "exp-cocomp hom-set cardinalities differ");
    ctx.check(rep.round_trip_ok && rep.bijection_verified, "exp-cocomp round trip failed");
    ctx.count("adjunction_checked", rep.round_trip_ok && rep.left_cardinality == rep.right_cardinality);
    Ok(())
}

fn non_gradable(dm: &DiffMod) -> bool {
    let m = dm.module();
    m.ring().is_local() && m.num_gens() == 1 && !dm.d().is_zero()
}

fn p3_3(cfg: &GenConfig, ring: &Ring, rng: &mut Rng8, ctx: &mut TrialCtx) -> Result<()> {
    let dm = random_diffmod(cfg, ring, rng, &mut ctx.stats);
    ctx.record("dm", &dm);
    let c = contractible_all4(&dm)?;
    ctx.check(c.agree(), "contractibility criteria disagree");
    ctx.check(c.witnesses_verify(&dm), "a witness does not verify");
    ctx.check(!c.c1 || c.acyclic, "contractible but not acyclic");
    if dm.module().is_free() {
        let dec = strip_decompose(&dm)?;
        ctx.check(dec.verify(&dm), "strip certificate does not reassemble");
        ctx.check(dm_minimal_check(&dec.minimal_part)?, "stripped part is not minimal");
        ctx.check(dm_is_injective_object(&dec.injective_part), "split part is not injective");
    }
    ctx.count("contractible", c.c1);
    ctx.count("acyclic_noncontractible", c.acyclic && !c.c1);
    ctx.count("non_gradable", non_gradable(&dm));
    Ok(())
}

fn p3_4(cfg: &GenConfig, ring: &Ring, rng: &mut Rng8, ctx: &mut TrialCtx) -> Result<()> {
    let y = random_complex(ring, rng, cfg.max_dim, cfg.max_width);
    ctx.record("complex", &y);
    let h = comp_cocomp_bounded(&y)?.cohomology().module;
    let same = h.is_isomorphic(&total_cohomology(&y)?);
    ctx.check(same, "H(comp Y) differs from the sum of H^i(Y)");
    ctx.count("complex_checked", same);

    let d1 = random_diffmod(cfg, ring, rng, &mut ctx.stats);
    let d2 = random_diffmod(cfg, ring, rng, &mut ctx.stats);
    ctx.record("dm", &(&d1, &d2));
    let h1 = d1.cohomology().module;
    let w = exp_window(&d1, -2, 2)?;
    let interior = (-1..=1).all(|i| w.cohomology(i).is_isomorphic(&h1));
    ctx.check(interior, "interior cohomology of exp differs from H");
    ctx.count("dm_checked", interior);
    let sum = DiffMod::direct_sum(&[&d1, &d2])?;
    let h2 = d2.cohomology().module;
    ctx.check(sum.cohomology().module.is_isomorphic(&h1.oplus(&h2)?), "cohomology is not additive");
    Ok(())
}

fn c3_5(cfg: &GenConfig, ring: &Ring, rng: &mut Rng8, ctx: &mut TrialCtx) -> Result<()> {
    let y = random_complex(ring, rng, cfg.max_dim, cfg.max_width);
    ctx.record("complex", &y);
    let acyclic = y.is_acyclic();
    ctx.check(acyclic == comp_cocomp_bounded(&y)?.is_acyclic(), "acyclicity not reflected by comp");
    ctx.count("acyclic", acyclic);

    let s = random_cx_ses(cfg, ring, rng);
    ctx.record("ses", &s);
    let lo = s.b.lo();
    let n = s.i.len();
    let ida: Vec<ModMap> = s.b.terms().iter().map(ModMap::identity).collect();
    let zero: Vec<ModMap> = s.a.terms().iter().zip(s.b.terms()).map(|(a, b)| ModMap::zero(a, b)).collect();
    let maps = [(&s.a, &s.b, s.i.clone()), (&s.b, &s.c, s.p.clone()), (&s.b, &s.b, ida), (&s.a, &s.b, zero)];
    for (src, tgt, f) in maps {
        debug_assert_eq!(f.len(), n);
        let cm = ChainMap::new(src, tgt, lo, f)?;
        let q = cm.is_quasi_iso()?;
        let cf = comp_map(&cm)?;
        let q2 = DmMap::new(&comp_cocomp_bounded(src)?, &comp_cocomp_bounded(tgt)?, cf)?.is_quasi_iso()?;
        ctx.check(q == q2, "quasi-isomorphism not reflected by comp");
        ctx.count("quasi_iso", q);
    }
    Ok(())
}

fn p3_6(cfg: &GenConfig, ring: &Ring, rng: &mut Rng8, ctx: &mut TrialCtx) -> Result<()> {
    let j = if rng.gen_bool(0.5) {
        random_disc_sum(ring, rng, cfg.max_dim)
    } else {
        random_injective_complex(ring, rng, cfg.max_dim, cfg.max_width)
    };
    ctx.record("complex", &j);
    let cj = comp_cocomp_bounded(&j)?;
    let contractible = j.is_contractible()?;
    ctx.check(!contractible || dm_is_injective_object(&cj), "comp of a contractible complex of injectives is not injective");
    ctx.check(contractible == dm_is_injective_object(&cj), "injectivity of comp J does not match contractibility of J");
    ctx.count("contractible", contractible);

    let d = random_free_diffmod(cfg, ring, rng);
    ctx.record("dm", &d);
    let inj = dm_is_injective_object(&d);
    ctx.check(inj == pair_homotopy_solve(&d)?.is_some(), "injective object test disagrees with the pair homotopy");
    ctx.count("injective_object", inj);
    Ok(())
}

fn p3_7(cfg: &GenConfig, ring: &Ring, rng: &mut Rng8, ctx: &mut TrialCtx) -> Result<()> {
    let j = random_injective_complex(ring, rng, cfg.max_dim, cfg.max_width);
    ctx.record("complex", &j);
    let d = comp_cocomp_bounded(&j)?;
    let dec = strip_decompose(&d)?;
    ctx.check(dec.verify(&d), "strip certificate does not reassemble");
    ctx.check(dm_minimal_check(&dec.minimal_part)?, "minimal part is not minimal");
    ctx.check(dm_is_injective_object(&dec.injective_part), "split part is not injective");
    ctx.check(
        dec.minimal_part.cohomology().module.is_isomorphic(&d.cohomology().module),
        "minimal part changes cohomology",
    );
    ctx.count("nonzero_injective_part", !dec.pairs.is_zero());
    Ok(())
}

fn p4_1(cfg: &GenConfig, ring: &Ring, rng: &mut Rng8, ctx: &mut TrialCtx) -> Result<()> {
    let small = GenConfig { max_dim: cfg.max_dim, ..cfg.clone() };
    let x = random_diffmod(&small, ring, rng, &mut ctx.stats);
    let m = random_module(ring, rng, 2);
    let y = random_diffmod(&small, ring, rng, &mut ctx.stats);
    ctx.record("instance", &(&x, &m, &y));
    let rep = adjunction_tensor_hom(&x, &m, &y)?;
    ctx.check(rep.left_cardinality == rep.right_cardinality, "tensor-hom hom-set cardinalities differ");
    ctx.check(rep.round_trip_ok && rep.bijection_verified, "currying round trip failed");
    ctx.count("adjunction_checked", rep.round_trip_ok && rep.left_cardinality == rep.right_cardinality);
    Ok(())
}

/// The map with the given images of the generators of `dom`, listed by
/// component then index.
fn map_from_images(dom: &Module, cod: &Module, images: &[ModElem]) -> Result<ModMap> {
    let ring = dom.ring();
    let mut k = 0;
    let mut blocks = Vec::new();
    for c in 0..ring.num_components() {
        let mut b = Mat::zeros(ring.component(c), cod.exps(c).len(), dom.exps(c).len());
        for j in 0..dom.exps(c).len() {
            for (i, x) in images[k].parts[c].iter().enumerate() {
                b.set(i, j, x.clone());
            }
            k += 1;
        }
        blocks.push(b);
    }
    ModMap::new(dom.clone(), cod.clone(), blocks)
}

/// `Dhom(R^n, D) -> D^n`, `φ -> (φ(e_j))_j`.
fn dhom_free_canonical(n: usize, d: &DiffMod) -> Result<(DiffMod, DiffMod, ModMap)> {
    let ring = d.module().ring();
    let rn = Module::free(ring, n);
    let left = dhom(&rn, d)?;
    let copies: Vec<&DiffMod> = (0..n).map(|_| d).collect();
    let right = if n == 0 { DiffMod::zero(ring) } else { DiffMod::direct_sum(&copies)? };
    let h = crate::fpmod::HomSpace::new(&rn, d.module())?;
    let sum = Module::direct_sum(ring, &(0..n).map(|_| d.module()).collect::<Vec<_>>())?;
    let mut images = Vec::new();
    for c in 0..ring.num_components() {
        for k in 0..h.module.exps(c).len() {
            let phi = h.to_map(&h.module.basis_elem(c, k));
            let mut v = sum.module.zero_elem();
            for j in 0..n {
                let y = phi.apply(&rn.basis_elem(c, j));
                v = sum.module.add_elems(&v, &sum.injections[j].apply(&y));
            }
            images.push(v);
        }
    }
    let can = map_from_images(left.module(), right.module(), &images)?;
    Ok((left, right, can))
}

fn p4_3(cfg: &GenConfig, ring: &Ring, rng: &mut Rng8, ctx: &mut TrialCtx) -> Result<()> {
    let n = rng.gen_range(0..=2);
    let pairs = DiffMod::pair(&Module::free(ring, rng.gen_range(0..=(cfg.max_dim / 2).max(1))));
    let inj = conjugate_randomly(&pairs, rng);
    let minimal = conjugate_randomly(
        &comp_cocomp_bounded(&random_minimal_complex(ring, rng, cfg.max_dim, cfg.max_width))?,
        rng,
    );
    ctx.record("instance", &(n, &inj, &minimal));
    ctx.check(dm_is_injective_object(&dhom(&Module::free(ring, n), &inj)?), "Dhom(R^n, I) is not injective");
    ctx.check(dm_minimal_check(&dhom(&Module::free(ring, n), &minimal)?)?, "Dhom(R^n, D) is not minimal");
    for d in [&inj, &minimal] {
        let (left, right, can) = dhom_free_canonical(n, d)?;
        ctx.check(can.is_iso() && DmMap::new(&left, &right, can).is_ok(), "Dhom(R^n, D) -> D^n is not an isomorphism");
    }
    Ok(())
}

fn l4_4(cfg: &GenConfig, ring: &Ring, rng: &mut Rng8, ctx: &mut TrialCtx) -> Result<()> {
    let m = random_module(ring, rng, 2);
    let z = random_complex(ring, rng, cfg.max_dim, cfg.max_width);
    ctx.record("instance", &(&m, &z));
    let rep = lemma44_check(&m, &z)?;
    ctx.check(rep.is_iso, "canonical map is not an isomorphism");
    ctx.check(rep.intertwines, "canonical map does not commute with differentials");
    Ok(())
}

fn p4_5(cfg: &GenConfig, ring: &Ring, rng: &mut Rng8, ctx: &mut TrialCtx) -> Result<()> {
    let j = random_minimal_complex(ring, rng, cfg.max_dim, cfg.max_width);
    ctx.record("complex", &j);
    let rep = prop45_check(&j)?;
    ctx.record("report", &rep);
    ctx.check(rep.holds(), "Hom(k, -) comparison failed");
    Ok(())
}

fn p5_1(cfg: &GenConfig, ring: &Ring, rng: &mut Rng8, ctx: &mut TrialCtx) -> Result<()> {
    let m = random_module(ring, rng, cfg.max_dim);
    ctx.record("module", &m);
    let reports = if ring.is_local() { vec![bass_numbers(&m, 8)?] } else { bass_numbers_per_component(&m, 8)? };
    let agree = reports.iter().all(|r| r.routes_agree);
    ctx.check(agree, "socle route and Ext route disagree");
    ctx.count("bass_routes_agree", agree);
    let res = min_inj_resolution(&m, 4);
    ctx.check(res.complex.is_minimal()?, "resolution is not minimal");
    ctx.check(res.augmentation.is_injective(), "augmentation is not injective");
    let aug_exact = Submodule::image_of(&res.augmentation).contains_sub(&Submodule::image_of(&res.complex.diff(0).kernel().inclusion));
    ctx.check(aug_exact && (1..4).all(|i| res.complex.cohomology(i).is_zero()), "augmented resolution is not exact");
    let k = Module::residue_field(ring);
    let hk = hom_stalk_complex(&k, &res.complex)?;
    ctx.check(hk.diffs().iter().all(ModMap::is_zero), "Hom(k, J) has a nonzero differential");

    let j = random_minimal_complex(ring, rng, cfg.max_dim, cfg.max_width);
    ctx.record("complex", &j);
    let d = comp_cocomp_bounded(&j)?;
    let dec = strip_decompose(&d)?;
    ctx.check(dec.pairs.is_zero(), "minimal complex has a nonzero injective part after compression");
    let mu = mu_d(&d, &Provenance::certified("comp(minimal complex)"));
    ctx.check(mu.total == j.mu_c(), "mu_D differs from mu_C");
    Ok(())
}

fn t5_2(_cfg: &GenConfig, ring: &Ring, rng: &mut Rng8, ctx: &mut TrialCtx) -> Result<()> {
    let m = if rng.gen_bool(0.2) { Module::residue_field(ring) } else { random_module(ring, rng, 3) };
    ctx.record("module", &m);
    let res = min_inj_resolution(&m, 10);
    let free = m.is_free();
    let finite = matches!(res.verdict(), Verdict::Finite(_));
    ctx.check(free == finite, "finite injective dimension does not match freeness");
    let mus: Vec<usize> = (0..=10).map(|l| cocomp_truncated_mu(&res, l).map(|x| x.total)).collect::<Result<_>>()?;
    ctx.record("mu_d", &mus);
    let stabilizes = mus.iter().all(|&x| x == mus[0]);
    let increasing = mus.windows(2).all(|w| w[0] < w[1]);
    ctx.check(stabilizes == free, "mu_D stabilization does not match freeness");
    if free {
        ctx.check(mus[0] == m.mu_total(), "mu_D at L = 0 differs from the rank");
    } else {
        ctx.check(increasing, "mu_D proxies are not strictly increasing");
    }
    ctx.count("free", free);
    ctx.count("infinite", res.verdict() == Verdict::Infinite);
    Ok(())
}

fn c5_3(cfg: &GenConfig, ring: &Ring, rng: &mut Rng8, ctx: &mut TrialCtx) -> Result<()> {
    let artinian = ring.components().iter().all(|c| c.m() >= 1);
    ctx.check(artinian, "ring is not Artinian");
    let n = rng.gen_range(1..=cfg.max_dim.max(1));
    let m = Module::free(ring, n);
    ctx.record("module", &m);
    let res = min_inj_resolution(&m, 2);
    ctx.check(res.verdict() == Verdict::Finite(0), "R^n does not have injective dimension 0");
    let mu = cocomp_truncated_mu(&res, 0)?;
    ctx.check(mu.certified, "mu_D of R^n is not certified");
    ctx.check(mu.total == n * ring.num_components(), "mu_D of R^n differs from its rank");
    ctx.count("witness", true);
    Ok(())
}

fn p6_1(cfg: &GenConfig, ring: &Ring, rng: &mut Rng8, ctx: &mut TrialCtx) -> Result<()> {
    let d = random_free_diffmod(cfg, ring, rng);
    ctx.record("dm", &d);
    let minimal = dm_minimal_check(&d)?;
    ctx.check(minimal == exp_window(&d, -1, 1)?.is_minimal()?, "minimality differs from that of exp");
    let x = d.module();
    if x.cardinality().is_some_and(|c| c <= 1 << 14) {
        let pi = Elem(ring.components().iter().map(|c| c.pi_pow(1)).collect());
        let brute = x
            .elements()
            .unwrap()
            .iter()
            .filter(|v| x.elem_is_zero(&x.scale_elem(&pi, v)))
            .all(|v| x.elem_is_zero(&d.d().apply(v)));
        ctx.check(minimal == brute, "minimality differs from the elementwise socle check");
    }
    ctx.count("minimal", minimal);
    Ok(())
}

/// `comp J` of a bounded minimal complex of injectives is minimal and has
/// nothing to strip.
fn minimal_comp(cfg: &GenConfig, ring: &Ring, rng: &mut Rng8, ctx: &mut TrialCtx, width: Option<usize>) -> Result<()> {
    let j = match width {
        Some(w) => minimal_complex_of_width(ring, rng, cfg.max_dim, w),
        None => random_minimal_complex(ring, rng, cfg.max_dim, cfg.max_width + 1),
    };
    ctx.record("complex", &j);
    check_minimal_comp(&j, ctx)
}

fn check_minimal_comp(j: &Complex, ctx: &mut TrialCtx) -> Result<()> {
    ctx.check(j.is_minimal()?, "generated complex is not minimal");
    let d = comp_cocomp_bounded(j)?;
    ctx.check(dm_minimal_check(&d)?, "comp J is not minimal");
    ctx.check(strip_decompose(&d)?.pairs.is_zero(), "comp J has a nonzero injective part");
    let soc = socle(d.module());
    ctx.check(soc.mu.iter().sum::<usize>() == j.mu_c(), "mu_D differs from mu_C");
    Ok(())
}

fn p6_3(cfg: &GenConfig, ring: &Ring, rng: &mut Rng8, ctx: &mut TrialCtx) -> Result<()> {
    minimal_comp(cfg, ring, rng, ctx, None)?;
    let j = random_injective_complex(ring, rng, cfg.max_dim, cfg.max_width + 1);
    ctx.record("any_complex", &j);
    let mj = j.is_minimal()?;
    ctx.check(mj == dm_minimal_check(&comp_cocomp_bounded(&j)?)?, "minimality of J and comp J differ");
    ctx.count("random_minimal", mj);
    Ok(())
}

fn p6_4(cfg: &GenConfig, ring: &Ring, rng: &mut Rng8, ctx: &mut TrialCtx) -> Result<()> {
    let m = random_module(ring, rng, cfg.max_dim.min(3));
    let l = rng.gen_range(0..=5);
    ctx.record("instance", &(&m, l));
    let res = min_inj_resolution(&m, l);
    check_minimal_comp(&res.complex, ctx)?;
    let t = cocomp_truncated(&res, l)?;
    ctx.check(dm_minimal_check(&t.value)?, "truncated cocompression is not minimal");
    Ok(())
}
