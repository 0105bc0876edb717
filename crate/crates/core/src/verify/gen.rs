//! Seeded random instances.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cplx::Complex;
use crate::dmod::DiffMod;
use crate::error::Result;
use crate::fpmod::{HomSpace, ModMap, Module, Submodule};
use crate::functors::comp_cocomp_bounded;
use crate::linalg::Mat;
use crate::ring::Ring;

pub const REJECTION_CAP: usize = 200;

/// Relative weights of the four DiffMod recipes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mix {
    pub comp: u32,
    pub rejection: u32,
    pub pair_padding: u32,
    pub conjugation: u32,
}

impl Default for Mix {
    fn default() -> Self {
        Mix { comp: 3, rejection: 3, pair_padding: 2, conjugation: 2 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenConfig {
    pub rings: Vec<String>,
    pub max_dim: usize,
    pub max_width: usize,
    pub mix: Mix,
    pub seed: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            rings: vec!["Z/4".into()],
            max_dim: 4,
            max_width: 3,
            mix: Mix::default(),
            seed: 0,
        }
    }
}

/// Counts of generator events that are reported alongside results.
#[derive(Clone, Debug, Default)]
pub struct GenStats {
    pub rejection_skips: u64,
}

pub fn random_module<R: Rng + ?Sized>(ring: &Ring, rng: &mut R, max_summands: usize) -> Module {
    let parts = ring
        .components()
        .iter()
        .map(|c| (0..rng.gen_range(0..=max_summands)).map(|_| rng.gen_range(1..=c.m())).collect())
        .collect();
    Module::new(ring.clone(), parts).expect("exponents in range")
}

pub fn random_nonzero_module<R: Rng + ?Sized>(ring: &Ring, rng: &mut R, max_summands: usize) -> Module {
    loop {
        let m = random_module(ring, rng, max_summands.max(1));
        if !m.is_zero() {
            return m;
        }
    }
}

pub fn random_free<R: Rng + ?Sized>(ring: &Ring, rng: &mut R, max_rank: usize) -> Module {
    Module::free(ring, rng.gen_range(0..=max_rank))
}

/// A random homomorphism; each entry is zero with probability `1 - density`.
pub fn random_map<R: Rng + ?Sized>(dom: &Module, cod: &Module, rng: &mut R, density: f64) -> ModMap {
    let ring = dom.ring();
    let blocks = (0..ring.num_components())
        .map(|c| {
            let cr = ring.component(c);
            Mat::from_fn(cr, cod.exps(c).len(), dom.exps(c).len(), |i, j| {
                if !rng.gen_bool(density) {
                    return cr.zero();
                }
                let need = cod.exps(c)[i].saturating_sub(dom.exps(c)[j]);
                cr.mul_pi_pow(&cr.random(rng), need)
            })
        })
        .collect();
    ModMap::new(dom.clone(), cod.clone(), blocks).expect("well-defined by construction")
}

/// Splits at most `budget` generators over `n` terms.
fn split_budget<R: Rng + ?Sized>(rng: &mut R, budget: usize, n: usize) -> Vec<usize> {
    let mut sizes = vec![0; n];
    let total = rng.gen_range(0..=budget);
    for _ in 0..total {
        sizes[rng.gen_range(0..n)] += 1;
    }
    sizes
}

fn module_of_size<R: Rng + ?Sized>(ring: &Ring, rng: &mut R, size: usize, free: bool) -> Module {
    let parts = ring
        .components()
        .iter()
        .map(|c| (0..size).map(|_| if free { c.m() } else { rng.gen_range(1..=c.m()) }).collect())
        .collect();
    Module::new(ring.clone(), parts).expect("exponents in range")
}

/// Builds differentials `d^(i+1) = r ∘ q`, where `q` projects onto
/// `coker d^i`, so that consecutive differentials compose to zero.
fn complex_on_terms<R: Rng + ?Sized>(ring: &Ring, rng: &mut R, lo: i64, terms: Vec<Module>) -> Complex {
    let mut diffs: Vec<ModMap> = Vec::new();
    for k in 0..terms.len().saturating_sub(1) {
        let d = match diffs.last() {
            None => random_map(&terms[0], &terms[1], rng, 0.7),
            Some(prev) => {
                let q = prev.cokernel();
                let r = random_map(&q.module, &terms[k + 1], rng, 0.7);
                r.compose(&q.projection).expect("composable")
            }
        };
        diffs.push(d);
    }
    Complex::new(ring, lo, terms, diffs).expect("square-zero by construction")
}

/// A bounded complex with at most `max_width` terms and `budget` generators
/// per ring component in total.
pub fn random_complex<R: Rng + ?Sized>(ring: &Ring, rng: &mut R, budget: usize, max_width: usize) -> Complex {
    let width = rng.gen_range(1..=max_width.max(1));
    let lo = rng.gen_range(-1..=1);
    let sizes = split_budget(rng, budget, width);
    let terms = sizes.iter().map(|&s| module_of_size(ring, rng, s, false)).collect();
    complex_on_terms(ring, rng, lo, terms)
}

/// A bounded complex of free modules.
pub fn random_injective_complex<R: Rng + ?Sized>(ring: &Ring, rng: &mut R, budget: usize, max_width: usize) -> Complex {
    let width = rng.gen_range(1..=max_width.max(1));
    let lo = rng.gen_range(-1..=1);
    let sizes = split_budget(rng, budget, width);
    let terms = sizes.iter().map(|&s| module_of_size(ring, rng, s, true)).collect();
    complex_on_terms(ring, rng, lo, terms)
}

/// A bounded minimal complex of injectives: either a truncated minimal
/// resolution, or a random complex of free modules with differentials
/// multiplied by `pi` (entries in `(pi)` annihilate the socle).
pub fn random_minimal_complex<R: Rng + ?Sized>(ring: &Ring, rng: &mut R, budget: usize, max_width: usize) -> Complex {
    let width = rng.gen_range(1..=max_width.max(1));
    minimal_complex_of_width(ring, rng, budget, width)
}

pub fn minimal_complex_of_width<R: Rng + ?Sized>(ring: &Ring, rng: &mut R, budget: usize, width: usize) -> Complex {
    if rng.gen_bool(0.5) {
        let m = random_module(ring, rng, budget.clamp(1, 3));
        return crate::cplx::min_inj_resolution(&m, width - 1).complex;
    }
    let lo = rng.gen_range(-1..=1);
    let sizes = split_budget(rng, budget, width);
    let terms = sizes.iter().map(|&s| module_of_size(ring, rng, s, true)).collect();
    let base = complex_on_terms(ring, rng, lo, terms);
    let pi = crate::ring::Elem(ring.components().iter().map(|c| c.pi_pow(1)).collect());
    let diffs = base.diffs().iter().map(|d| d.scale(&pi)).collect();
    Complex::new(ring, base.lo(), base.terms().to_vec(), diffs).expect("scaling keeps d^2 = 0")
}

/// A direct sum of discs `R^n -id-> R^n`, which is contractible.
pub fn random_disc_sum<R: Rng + ?Sized>(ring: &Ring, rng: &mut R, budget: usize) -> Complex {
    let discs: Vec<Complex> = (0..rng.gen_range(1..=2))
        .map(|_| Complex::disc(&Module::free(ring, rng.gen_range(0..=(budget / 2).max(1))), rng.gen_range(-1..=1)))
        .collect();
    Complex::direct_sum(&discs.iter().collect::<Vec<_>>()).expect("same ring")
}

/// Unit transvections and diagonal units; returns `u` with its inverse.
pub fn random_automorphism<R: Rng + ?Sized>(m: &Module, rng: &mut R) -> (ModMap, ModMap) {
    let ring = m.ring();
    let mut u = ModMap::identity(m);
    let mut inv = ModMap::identity(m);
    for c in 0..ring.num_components() {
        let cr = ring.component(c);
        let n = m.exps(c).len();
        if n == 0 {
            continue;
        }
        let steps = rng.gen_range(0..=2 * n);
        for _ in 0..steps {
            let mut blocks: Vec<Mat> = (0..ring.num_components())
                .map(|k| Mat::identity(ring.component(k), m.exps(k).len()))
                .collect();
            let mut inv_blocks = blocks.clone();
            if rng.gen_bool(0.3) {
                let i = rng.gen_range(0..n);
                let a = cr.random_unit(rng);
                let ai = cr.inverse(&a).expect("unit");
                blocks[c].set(i, i, a);
                inv_blocks[c].set(i, i, ai);
            } else if n > 1 {
                let i = rng.gen_range(0..n);
                let j = (i + rng.gen_range(1..n)) % n;
                let need = m.exps(c)[i].saturating_sub(m.exps(c)[j]);
                let t = cr.mul_pi_pow(&cr.random(rng), need);
                blocks[c].set(i, j, t.clone());
                inv_blocks[c].set(i, j, cr.neg(&t));
            }
            let e = ModMap::new(m.clone(), m.clone(), blocks).expect("well-defined transvection");
            let ei = ModMap::new(m.clone(), m.clone(), inv_blocks).expect("well-defined transvection");
            u = e.compose(&u).expect("endomorphisms");
            inv = inv.compose(&ei).expect("endomorphisms");
        }
    }
    (u, inv)
}

fn rejection_dm<R: Rng + ?Sized>(ring: &Ring, rng: &mut R, dim: usize) -> Option<DiffMod> {
    for _ in 0..REJECTION_CAP {
        let size = rng.gen_range(1..=dim.max(1));
        let x = module_of_size(ring, rng, size, false);
        let density = 1.0 / (x.num_gens() as f64).max(1.0);
        let d = random_map(&x, &x, rng, density.clamp(0.2, 1.0));
        if d.compose(&d).expect("endomorphism").is_zero() {
            return DiffMod::new(x, d).ok();
        }
    }
    None
}

/// A random differential module with at most `dim` generators per component.
pub fn random_diffmod<R: Rng + ?Sized>(cfg: &GenConfig, ring: &Ring, rng: &mut R, stats: &mut GenStats) -> DiffMod {
    let mix = cfg.mix;
    let weights = [mix.comp, mix.rejection, mix.pair_padding, mix.conjugation];
    let choices = [0usize, 1, 2, 3];
    let recipe = *choices.choose_weighted(rng, |&k| weights[k]).unwrap_or(&0);
    let dim = cfg.max_dim;
    let base = |rng: &mut R, stats: &mut GenStats, dim: usize, prefer_rejection: bool| -> DiffMod {
        if prefer_rejection {
            if let Some(d) = rejection_dm(ring, rng, dim) {
                return d;
            }
            stats.rejection_skips += 1;
        }
        let y = random_complex(ring, rng, dim, cfg.max_width);
        comp_cocomp_bounded(&y).expect("bounded")
    };
    match recipe {
        0 => base(rng, stats, dim, false),
        1 => base(rng, stats, dim, true),
        2 => {
            let pad = rng.gen_range(1..=(dim / 2).max(1));
            let rest = dim.saturating_sub(2 * pad);
            let core = if rest == 0 {
                DiffMod::zero(ring)
            } else {
                let pr = rng.gen_bool(0.5);
                base(rng, stats, rest, pr)
            };
            let n = module_of_size(ring, rng, pad, false);
            let parts = [&core, &DiffMod::pair(&n)];
            let order = if rng.gen_bool(0.5) { [0, 1] } else { [1, 0] };
            DiffMod::direct_sum(&[parts[order[0]], parts[order[1]]]).expect("same ring")
        }
        _ => {
            let pr = rng.gen_bool(0.5);
            let mut core = base(rng, stats, dim, pr);
            if rng.gen_bool(0.5) && core.module().num_gens() + 2 <= dim {
                let n = module_of_size(ring, rng, 1, false);
                core = DiffMod::direct_sum(&[&core, &DiffMod::pair(&n)]).expect("same ring");
            }
            conjugate_randomly(&core, rng)
        }
    }
}

/// A random element of `m` together with its `d`-closure.
fn closed_generators<R: Rng + ?Sized>(dm: &DiffMod, rng: &mut R) -> Vec<crate::fpmod::ModElem> {
    let mut gens = Vec::new();
    for _ in 0..rng.gen_range(0..=2) {
        let v = dm.module().random_elem(rng);
        gens.push(dm.d().apply(&v));
        gens.push(v);
    }
    gens
}

/// Finds `x` with `x ∘ p = g` for a surjection `p`.
pub fn descend(p: &ModMap, g: &ModMap) -> Result<Option<ModMap>> {
    let src = HomSpace::new(p.cod(), g.cod())?;
    let dst = HomSpace::new(p.dom(), g.cod())?;
    let t = src.transport(&dst, p, &ModMap::identity(g.cod()))?;
    Ok(t.preimage(&dst.coords(g)).map(|v| src.to_map(&v)))
}

/// `0 -> A -> B -> C -> 0` of differential modules.
#[derive(Clone, Debug, Serialize)]
pub struct DmSes {
    pub a: DiffMod,
    pub b: DiffMod,
    pub c: DiffMod,
    pub i: ModMap,
    pub p: ModMap,
}

pub fn random_dm_ses<R: Rng + ?Sized>(cfg: &GenConfig, ring: &Ring, rng: &mut R, stats: &mut GenStats) -> DmSes {
    let b = random_diffmod(cfg, ring, rng, stats);
    let gens = closed_generators(&b, rng);
    let sub = Submodule::new(b.module(), &gens).expect("elements of b").normal_form();
    let i = sub.inclusion;
    let da = i.factor_through(&b.d().compose(&i).unwrap()).unwrap().expect("span is d-stable");
    let a = DiffMod::new(sub.module, da).expect("restriction of a differential");
    let q = i.cokernel();
    let p = q.projection;
    let dc = descend(&p, &p.compose(b.d()).unwrap()).unwrap().expect("d descends to the quotient");
    let c = DiffMod::new(q.module, dc).expect("quotient differential");
    DmSes { a, b, c, i, p }
}

/// `0 -> A -> B -> C -> 0` of complexes, given degreewise.
#[derive(Clone, Debug, Serialize)]
pub struct CxSes {
    pub a: Complex,
    pub b: Complex,
    pub c: Complex,
    pub i: Vec<ModMap>,
    pub p: Vec<ModMap>,
}

pub fn random_cx_ses<R: Rng + ?Sized>(cfg: &GenConfig, ring: &Ring, rng: &mut R) -> CxSes {
    let b = random_complex(ring, rng, cfg.max_dim, cfg.max_width);
    let degs: Vec<i64> = b.degrees().collect();
    // A^i = span(v_i, d v_(i-1)) is closed under d
    let mut picks = Vec::new();
    for &i in &degs {
        let n = rng.gen_range(0..=2);
        picks.push((0..n).map(|_| b.term(i).random_elem(rng)).collect::<Vec<_>>());
    }
    let mut incl = Vec::new();
    let mut a_terms = Vec::new();
    for (k, &i) in degs.iter().enumerate() {
        let mut gens = picks[k].clone();
        if k > 0 {
            gens.extend(picks[k - 1].iter().map(|v| b.diff(i - 1).apply(v)));
        }
        let s = Submodule::new(&b.term(i), &gens).unwrap().normal_form();
        a_terms.push(s.module.clone());
        incl.push(s.inclusion);
    }
    let mut a_diffs = Vec::new();
    for (k, &i) in degs.iter().enumerate().take(degs.len() - 1) {
        let g = b.diff(i).compose(&incl[k]).unwrap();
        a_diffs.push(incl[k + 1].factor_through(&g).unwrap().expect("subcomplex"));
    }
    let a = Complex::new(ring, b.lo(), a_terms, a_diffs).expect("subcomplex");
    let quots: Vec<_> = incl.iter().map(|f| f.cokernel()).collect();
    let mut c_diffs = Vec::new();
    for (k, &i) in degs.iter().enumerate().take(degs.len() - 1) {
        let g = quots[k + 1].projection.compose(&b.diff(i)).unwrap();
        c_diffs.push(descend(&quots[k].projection, &g).unwrap().expect("quotient complex"));
    }
    let c = Complex::new(ring, b.lo(), quots.iter().map(|q| q.module.clone()).collect(), c_diffs).expect("quotient");
    let p = quots.into_iter().map(|q| q.projection).collect();
    CxSes { a, b, c, i: incl, p }
}

/// A random differential module whose underlying module is free.
pub fn random_free_diffmod<R: Rng + ?Sized>(cfg: &GenConfig, ring: &Ring, rng: &mut R) -> DiffMod {
    let dim = cfg.max_dim;
    let y = match rng.gen_range(0..3) {
        0 => random_injective_complex(ring, rng, dim, cfg.max_width),
        1 => random_minimal_complex(ring, rng, dim, cfg.max_width),
        _ => random_disc_sum(ring, rng, dim),
    };
    let mut dm = comp_cocomp_bounded(&y).expect("bounded");
    if rng.gen_bool(0.3) && dm.module().num_gens() + 2 <= dim.max(2) {
        dm = DiffMod::direct_sum(&[&dm, &DiffMod::pair(&Module::free(ring, 1))]).expect("same ring");
    }
    conjugate_randomly(&dm, rng)
}

pub fn conjugate_randomly<R: Rng + ?Sized>(dm: &DiffMod, rng: &mut R) -> DiffMod {
    let (u, inv) = random_automorphism(dm.module(), rng);
    let d = u.compose(&dm.d().compose(&inv).expect("composable")).expect("composable");
    DiffMod::new(dm.module().clone(), d).expect("conjugate of a differential")
}
