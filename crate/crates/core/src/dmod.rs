//! Differential modules `(X, d)` with `d ∘ d = 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fpmod::{homology, socle, HomSpace, Homology, ModMap, Module, Submodule};
use crate::linalg::Mat;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiffMod {
    module: Module,
    d: ModMap,
}

impl DiffMod {
    pub fn new(module: Module, d: ModMap) -> Result<Self> {
        if d.dom() != &module || d.cod() != &module {
            return Err(Error::DimensionMismatch("differential must be an endomorphism of the module".into()));
        }
        if !d.compose(&d)?.is_zero() {
            return Err(Error::NotSquareZero);
        }
        Ok(DiffMod { module, d })
    }

    pub fn from_map(d: ModMap) -> Result<Self> {
        DiffMod::new(d.dom().clone(), d)
    }

    pub fn module(&self) -> &Module {
        &self.module
    }

    pub fn d(&self) -> &ModMap {
        &self.d
    }

    pub fn zero(ring: &crate::Ring) -> Self {
        DiffMod::stalk(&Module::zero(ring))
    }

    /// `S_*(M) = (M, 0)`.
    pub fn stalk(m: &Module) -> Self {
        DiffMod { module: m.clone(), d: ModMap::zero(m, m) }
    }

    /// `F_*(M) = (M ⊕ M, [[0, 0], [id, 0]])`.
    pub fn pair(m: &Module) -> Self {
        let sum = Module::direct_sum(m.ring(), &[m, m]).expect("same ring");
        let d = sum.injections[1].compose(&sum.projections[0]).expect("composable");
        DiffMod { module: sum.module, d }
    }

    /// `E_*(X, d) = X`.
    pub fn evaluate(&self) -> &Module {
        &self.module
    }

    pub fn cohomology(&self) -> Homology {
        homology(&self.d, &self.d).expect("square-zero by construction")
    }

    pub fn is_acyclic(&self) -> bool {
        self.cohomology().module.is_zero()
    }

    pub fn direct_sum(parts: &[&DiffMod]) -> Result<DiffMod> {
        let ring = parts.first().map(|p| p.module.ring().clone()).ok_or_else(|| {
            Error::Precondition("direct sum of an empty family needs a ring".into())
        })?;
        let mods: Vec<&Module> = parts.iter().map(|p| &p.module).collect();
        let sum = Module::direct_sum(&ring, &mods)?;
        let mut d = ModMap::zero(&sum.module, &sum.module);
        for (k, p) in parts.iter().enumerate() {
            d = d.add(&sum.injections[k].compose(&p.d.compose(&sum.projections[k])?)?)?;
        }
        Ok(DiffMod { module: sum.module, d })
    }

    /// Transports the differential along an isomorphism `u : X -> X'`.
    pub fn conjugate(&self, u: &ModMap) -> Result<DiffMod> {
        let inv = u.inverse()?;
        let d = u.compose(&self.d.compose(&inv)?)?;
        DiffMod::new(u.cod().clone(), d)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

#[derive(Serialize, Deserialize)]
struct DiffModDoc {
    module: Module,
    d: ModMap,
}

impl Serialize for DiffMod {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DiffModDoc { module: self.module.clone(), d: self.d.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DiffMod {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = DiffModDoc::deserialize(d)?;
        DiffMod::new(doc.module, doc.d).map_err(D::Error::custom)
    }
}

/// A morphism of differential modules.
#[derive(Clone, Debug)]
pub struct DmMap {
    pub src: DiffMod,
    pub tgt: DiffMod,
    pub f: ModMap,
}

impl DmMap {
    pub fn new(src: &DiffMod, tgt: &DiffMod, f: ModMap) -> Result<Self> {
        if f.dom() != &src.module || f.cod() != &tgt.module {
            return Err(Error::DimensionMismatch("map does not match the differential modules".into()));
        }
        if f.compose(&src.d)? != tgt.d.compose(&f)? {
            return Err(Error::NotIntertwining);
        }
        Ok(DmMap { src: src.clone(), tgt: tgt.clone(), f })
    }

    pub fn on_cohomology(&self) -> Result<ModMap> {
        self.src.cohomology().induced(&self.tgt.cohomology(), &self.f)
    }

    pub fn is_quasi_iso(&self) -> Result<bool> {
        Ok(self.on_cohomology()?.is_iso())
    }
}

pub fn dm_is_quasi_iso(src: &DiffMod, tgt: &DiffMod, f: &ModMap) -> Result<bool> {
    DmMap::new(src, tgt, f.clone())?.is_quasi_iso()
}

/// `h` with `id = h ∘ d + d ∘ h`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Homotopy {
    pub h: ModMap,
}

impl Homotopy {
    pub fn verifies(&self, dm: &DiffMod) -> bool {
        if self.h.dom() != &dm.module || self.h.cod() != &dm.module {
            return false;
        }
        let lhs = self.h.compose(&dm.d).and_then(|a| a.add(&dm.d.compose(&self.h)?));
        lhs.is_ok_and(|x| x == ModMap::identity(&dm.module))
    }
}

/// `D ≅ minimal_part ⊕ injective_part`, where `injective_part = F_*(pairs)`
/// and `change_of_basis : minimal ⊕ injective -> X` is the conjugating
/// isomorphism.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DmDecomposition {
    pub minimal_part: DiffMod,
    pub injective_part: DiffMod,
    pub pairs: Module,
    pub change_of_basis: ModMap,
}

impl DmDecomposition {
    /// Checks that the certificate is invertible and conjugates `d` into the
    /// block form.
    pub fn verify(&self, dm: &DiffMod) -> bool {
        let Ok(block) = DiffMod::direct_sum(&[&self.minimal_part, &self.injective_part]) else {
            return false;
        };
        let u = &self.change_of_basis;
        u.dom() == block.module()
            && u.cod() == dm.module()
            && u.is_iso()
            && u.compose(&block.d).ok() == dm.d.compose(u).ok()
            && self.injective_part == DiffMod::pair(&self.pairs)
    }

    /// The contracting homotopy assembled from the pair blocks; meaningful
    /// when the minimal part is zero.
    pub fn homotopy(&self) -> Result<Homotopy> {
        let n = &self.pairs;
        let sum = Module::direct_sum(n.ring(), &[n, n])?;
        let h_pair = sum.injections[0].compose(&sum.projections[1])?;
        let full = Module::direct_sum(n.ring(), &[self.minimal_part.module(), &sum.module])?;
        let h_block = full.injections[1].compose(&h_pair.compose(&full.projections[1])?)?;
        let u = &self.change_of_basis;
        Ok(Homotopy { h: u.compose(&h_block.compose(&u.inverse()?)?)? })
    }
}

/// Splits off `F_*(R/(pi^e))` blocks at unit entries `d_ij` with `e_i = e_j`
/// until none are left. Works for any underlying module.
pub fn strip_general(dm: &DiffMod) -> Result<DmDecomposition> {
    let ring = dm.module.ring().clone();
    let nc = ring.num_components();
    let mut cur = dm.clone();
    let mut into_x = ModMap::identity(&dm.module);
    // per component: (e, x, y) with x, y in X coordinates
    let mut found: Vec<Vec<(u32, Vec<crate::ChainElem>, Vec<crate::ChainElem>)>> = vec![Vec::new(); nc];

    while let Some((c, i, j)) = find_unit_pivot(&cur) {
        let y_mod = &cur.module;
        let e = y_mod.exps(c)[j];
        let x = y_mod.basis_elem(c, j);
        let y = cur.d.apply(&x);
        let mut target_parts = vec![Vec::new(); nc];
        target_parts[c] = vec![e, e];
        let target = Module::new(ring.clone(), target_parts)?;
        // Phi = (phi ∘ d, phi) with phi the i-th coordinate functional
        let cr = ring.component(c);
        let mut blocks: Vec<Mat> = (0..nc).map(|k| Mat::zeros(ring.component(k), 0, y_mod.exps(k).len())).collect();
        let n = y_mod.exps(c).len();
        let mut phi = Mat::zeros(cr, 2, n);
        for col in 0..n {
            phi.set(0, col, cur.d.block(c).get(i, col).clone());
        }
        phi.set(1, i, cr.one());
        blocks[c] = phi;
        let big_phi = ModMap::new(y_mod.clone(), target, blocks)?;
        let ker = big_phi.kernel();
        let d_c = ker
            .inclusion
            .factor_through(&cur.d.compose(&ker.inclusion)?)?
            .ok_or_else(|| Error::Precondition("complement is not d-stable".into()))?;
        let xs = into_x.apply(&x);
        let ys = into_x.apply(&y);
        found[c].push((e, xs.parts[c].clone(), ys.parts[c].clone()));
        into_x = into_x.compose(&ker.inclusion)?;
        cur = DiffMod::new(ker.module.clone(), d_c)?;
    }

    let pairs = Module::new(ring.clone(), found.iter().map(|f| f.iter().map(|t| t.0).collect()).collect())?;
    let injective_part = DiffMod::pair(&pairs);
    let full = Module::direct_sum(&ring, &[&cur.module, &injective_part.module])?;
    let mut blocks = Vec::new();
    for (c, fc) in found.iter().enumerate() {
        let v = into_x.block(c);
        let cols: Vec<Vec<crate::ChainElem>> = (0..v.cols())
            .map(|j| v.column(j))
            .chain(fc.iter().map(|t| t.1.clone()))
            .chain(fc.iter().map(|t| t.2.clone()))
            .collect();
        let rows = dm.module.exps(c).len();
        blocks.push(Mat::from_fn(ring.component(c), rows, cols.len(), |i, j| cols[j][i].clone()));
    }
    let change_of_basis = ModMap::new(full.module.clone(), dm.module.clone(), blocks)?;
    Ok(DmDecomposition { minimal_part: cur, injective_part, pairs, change_of_basis })
}

fn find_unit_pivot(dm: &DiffMod) -> Option<(usize, usize, usize)> {
    let ring = dm.module.ring();
    for c in 0..ring.num_components() {
        let cr = ring.component(c);
        let exps = dm.module.exps(c);
        let b = dm.d.block(c);
        for j in 0..exps.len() {
            for i in 0..exps.len() {
                if exps[i] == exps[j] && cr.is_unit(b.get(i, j)) {
                    return Some((c, i, j));
                }
            }
        }
    }
    None
}

/// The decomposition for free underlying modules: the minimal part has all
/// differential entries in `(pi)` and the injective part is `F_*(R^t)`.
pub fn strip_decompose(dm: &DiffMod) -> Result<DmDecomposition> {
    if !dm.module.is_free() {
        return Err(Error::Precondition("strip decomposition needs a free underlying module".into()));
    }
    strip_general(dm)
}

/// Solves `id = h d + d h` over `Hom(X, X)`.
pub fn homotopy_solve(dm: &DiffMod) -> Result<Option<Homotopy>> {
    let x = &dm.module;
    let id = ModMap::identity(x);
    let s = HomSpace::new(x, x)?;
    let lhs = s.transport(&s, &dm.d, &id)?.add(&s.transport(&s, &id, &dm.d)?)?;
    Ok(lhs.preimage(&s.coords(&id)).map(|v| Homotopy { h: s.to_map(&v) }))
}

/// Solves `id = h1 d + d h0` for a pair of maps, the degreewise condition of
/// a contraction of the expansion, and returns `h1 d h0`.
pub fn pair_homotopy_solve(dm: &DiffMod) -> Result<Option<(ModMap, ModMap, Homotopy)>> {
    let x = &dm.module;
    let id = ModMap::identity(x);
    let s = HomSpace::new(x, x)?;
    let sum = Module::direct_sum(x.ring(), &[&s.module, &s.module])?;
    let left = s.transport(&s, &id, &dm.d)?.compose(&sum.projections[0])?;
    let right = s.transport(&s, &dm.d, &id)?.compose(&sum.projections[1])?;
    let lhs = left.add(&right)?;
    let Some(v) = lhs.preimage(&s.coords(&id)) else { return Ok(None) };
    let h0 = s.to_map(&sum.projections[0].apply(&v));
    let h1 = s.to_map(&sum.projections[1].apply(&v));
    let h = h1.compose(&dm.d)?.compose(&h0)?;
    Ok(Some((h0, h1, Homotopy { h })))
}

/// A retraction `r : X -> ker d` with `r ∘ incl = id`, if one exists.
pub fn kernel_retraction(dm: &DiffMod) -> Result<Option<ModMap>> {
    let ker = dm.d.kernel();
    let k = &ker.module;
    let src = HomSpace::new(&dm.module, k)?;
    let dst = HomSpace::new(k, k)?;
    let t = src.transport(&dst, &ker.inclusion, &ModMap::identity(k))?;
    Ok(t.preimage(&dst.coords(&ModMap::identity(k))).map(|v| src.to_map(&v)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Contractibility {
    pub c1: bool,
    pub c2: bool,
    pub c3: bool,
    pub c4: bool,
    pub acyclic: bool,
    pub homotopy: Option<Homotopy>,
    pub pair_homotopy: Option<Homotopy>,
    pub retraction: Option<ModMap>,
    pub decomposition: DmDecomposition,
}

impl Contractibility {
    pub fn agree(&self) -> bool {
        self.c1 == self.c2 && self.c2 == self.c3 && self.c3 == self.c4
    }

    /// Every returned witness checks out against `dm`.
    pub fn witnesses_verify(&self, dm: &DiffMod) -> bool {
        let h_ok = self.homotopy.as_ref().is_none_or(|h| h.verifies(dm));
        let p_ok = self.pair_homotopy.as_ref().is_none_or(|h| h.verifies(dm));
        let r_ok = self.retraction.as_ref().is_none_or(|r| {
            let ker = dm.d.kernel();
            r.compose(&ker.inclusion).is_ok_and(|x| x == ModMap::identity(&ker.module))
        });
        let s_ok = self.decomposition.verify(dm)
            && (!self.c3 || self.decomposition.homotopy().is_ok_and(|h| h.verifies(dm)));
        h_ok && p_ok && r_ok && s_ok
    }
}

pub fn contractible_all4(dm: &DiffMod) -> Result<Contractibility> {
    let homotopy = homotopy_solve(dm)?;
    let pair = pair_homotopy_solve(dm)?;
    let decomposition = strip_general(dm)?;
    let acyclic = dm.is_acyclic();
    let retraction = if acyclic { kernel_retraction(dm)? } else { None };
    Ok(Contractibility {
        c1: homotopy.is_some(),
        c2: pair.is_some(),
        c3: decomposition.minimal_part.module.is_zero(),
        c4: acyclic && retraction.is_some(),
        acyclic,
        homotopy,
        pair_homotopy: pair.map(|p| p.2),
        retraction,
        decomposition,
    })
}

pub fn is_contractible(dm: &DiffMod) -> bool {
    homotopy_solve(dm).is_ok_and(|h| h.is_some())
}

pub fn dm_is_injective_object(dm: &DiffMod) -> bool {
    dm.module.is_free() && dm.is_acyclic() && is_contractible(dm)
}

/// Minimality for free underlying modules: `Soc X ⊆ ker d`.
pub fn dm_minimal_check(dm: &DiffMod) -> Result<bool> {
    if !dm.module.is_free() {
        return Err(Error::Precondition("minimality is only defined for injective underlying modules".into()));
    }
    Ok(socle_in_kernel(dm))
}

pub(crate) fn socle_in_kernel(dm: &DiffMod) -> bool {
    let soc = socle(&dm.module);
    dm.d.compose(&soc.inclusion).is_ok_and(|x| x.is_zero())
}

/// Where a differential module came from, which decides whether its `mu_D`
/// is the genuine invariant of a semi-injective object.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub chain: String,
    pub certified: bool,
}

impl Provenance {
    pub fn input() -> Self {
        Provenance { chain: "input".into(), certified: false }
    }

    pub fn certified(chain: impl Into<String>) -> Self {
        Provenance { chain: chain.into(), certified: true }
    }

    pub fn proxy(chain: impl Into<String>) -> Self {
        Provenance { chain: chain.into(), certified: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuD {
    pub mu: Vec<usize>,
    pub total: usize,
    /// False when the object is only a proxy, not a certified semi-injective.
    pub certified: bool,
    pub provenance: String,
}

pub fn mu_d(dm: &DiffMod, prov: &Provenance) -> MuD {
    let mu = socle(&dm.module).mu;
    let certified = prov.certified || dm_is_injective_object(dm);
    MuD { total: mu.iter().sum(), mu, certified, provenance: prov.chain.clone() }
}

/// `ker d` as a submodule, for essentiality questions.
pub fn kernel_submodule(dm: &DiffMod) -> Submodule {
    Submodule::image_of(&dm.d.kernel().inclusion)
}
