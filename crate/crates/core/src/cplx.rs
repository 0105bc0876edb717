//! Bounded cochain complexes (degree +1 differentials), minimal injective
//! resolutions and Bass numbers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fpmod::{homology, injective_envelope, socle, HomSpace, Homology, ModMap, Module};
use crate::ring::Ring;

/// Terms in degrees `lo..=hi`; `diffs[k]` goes from degree `lo + k` to
/// `lo + k + 1`. Terms outside the support are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    ring: Ring,
    lo: i64,
    terms: Vec<Module>,
    diffs: Vec<ModMap>,
}

impl Complex {
    pub fn new(ring: &Ring, lo: i64, terms: Vec<Module>, diffs: Vec<ModMap>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::DimensionMismatch("a complex needs at least one term".into()));
        }
        if diffs.len() + 1 != terms.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} terms need {} differentials, got {}",
                terms.len(),
                terms.len() - 1,
                diffs.len()
            )));
        }
        if terms.iter().any(|t| t.ring() != ring) {
            return Err(Error::RingMismatch);
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.dom() != &terms[k] || d.cod() != &terms[k + 1] {
                return Err(Error::DimensionMismatch(format!("differential in degree {} has the wrong shape", lo + k as i64)));
            }
        }
        for w in diffs.windows(2) {
            if !w[1].compose(&w[0])?.is_zero() {
                return Err(Error::NotSquareZero);
            }
        }
        Ok(Complex { ring: ring.clone(), lo, terms, diffs })
    }

    /// `S_deg(M)`.
    pub fn stalk(m: &Module, deg: i64) -> Self {
        Complex { ring: m.ring().clone(), lo: deg, terms: vec![m.clone()], diffs: Vec::new() }
    }

    /// `F_i(M) = M --id--> M` in degrees `i, i + 1`.
    pub fn disc(m: &Module, i: i64) -> Self {
        Complex { ring: m.ring().clone(), lo: i, terms: vec![m.clone(), m.clone()], diffs: vec![ModMap::identity(m)] }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.terms.len() as i64 - 1
    }

    pub fn terms(&self) -> &[Module] {
        &self.terms
    }

    pub fn diffs(&self) -> &[ModMap] {
        &self.diffs
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi()
    }

    /// `E_i`.
    pub fn term(&self, i: i64) -> Module {
        if self.degrees().contains(&i) {
            self.terms[(i - self.lo) as usize].clone()
        } else {
            Module::zero(&self.ring)
        }
    }

    /// `d^i : term(i) -> term(i + 1)`.
    pub fn diff(&self, i: i64) -> ModMap {
        if i >= self.lo && i < self.hi() {
            self.diffs[(i - self.lo) as usize].clone()
        } else {
            ModMap::zero(&self.term(i), &self.term(i + 1))
        }
    }

    pub fn homology_at(&self, i: i64) -> Homology {
        homology(&self.diff(i - 1), &self.diff(i)).expect("square-zero by construction")
    }

    pub fn cohomology(&self, i: i64) -> Module {
        self.homology_at(i).module
    }

    pub fn is_acyclic(&self) -> bool {
        self.degrees().all(|i| self.cohomology(i).is_zero())
    }

    pub fn is_bounded_of_injectives(&self) -> bool {
        self.terms.iter().all(Module::is_free)
    }

    pub fn mu_per_degree(&self) -> Vec<usize> {
        self.terms.iter().map(Module::mu_total).collect()
    }

    /// `mu_C = Σ_i mu(E_i J)`.
    pub fn mu_c(&self) -> usize {
        self.mu_per_degree().iter().sum()
    }

    /// `Soc(J^i) ⊆ ker d^i` in every degree; needs injective terms.
    pub fn is_minimal(&self) -> Result<bool> {
        if !self.is_bounded_of_injectives() {
            return Err(Error::Precondition("minimality check needs injective terms".into()));
        }
        Ok(self.degrees().all(|i| {
            let soc = socle(&self.term(i));
            self.diff(i).compose(&soc.inclusion).is_ok_and(|x| x.is_zero())
        }))
    }

    pub fn direct_sum(parts: &[&Complex]) -> Result<Complex> {
        let first = parts.first().ok_or_else(|| Error::Precondition("empty direct sum".into()))?;
        let ring = first.ring.clone();
        let lo = parts.iter().map(|p| p.lo).min().unwrap();
        let hi = parts.iter().map(|p| p.hi()).max().unwrap();
        let mut terms = Vec::new();
        let mut sums = Vec::new();
        for i in lo..=hi {
            let ts: Vec<Module> = parts.iter().map(|p| p.term(i)).collect();
            let s = Module::direct_sum(&ring, &ts.iter().collect::<Vec<_>>())?;
            terms.push(s.module.clone());
            sums.push(s);
        }
        let mut diffs = Vec::new();
        for i in lo..hi {
            let k = (i - lo) as usize;
            let mut d = ModMap::zero(&terms[k], &terms[k + 1]);
            for (p, part) in parts.iter().enumerate() {
                let piece = sums[k + 1].injections[p].compose(&part.diff(i).compose(&sums[k].projections[p])?)?;
                d = d.add(&piece)?;
            }
            diffs.push(d);
        }
        Complex::new(&ring, lo, terms, diffs)
    }

    /// Solves for a contracting homotopy `id = h^(i+1) d^i + d^(i-1) h^i`.
    pub fn homotopy_solve(&self) -> Result<Option<Vec<ModMap>>> {
        let degs: Vec<i64> = self.degrees().collect();
        // unknown h^i : C^i -> C^(i-1) for i in lo+1..=hi
        let var_spaces: Vec<HomSpace> =
            degs[1..].iter().map(|&i| HomSpace::new(&self.term(i), &self.term(i - 1))).collect::<Result<_>>()?;
        let eq_spaces: Vec<HomSpace> =
            degs.iter().map(|&i| HomSpace::new(&self.term(i), &self.term(i))).collect::<Result<_>>()?;
        let vars = Module::direct_sum(&self.ring, &var_spaces.iter().map(|s| &s.module).collect::<Vec<_>>())?;
        let eqs = Module::direct_sum(&self.ring, &eq_spaces.iter().map(|s| &s.module).collect::<Vec<_>>())?;
        let mut lhs = ModMap::zero(&vars.module, &eqs.module);
        let mut rhs = eqs.module.zero_elem();
        for (k, &i) in degs.iter().enumerate() {
            let id = ModMap::identity(&self.term(i));
            if k > 0 {
                // d^(i-1) ∘ h^i
                let t = var_spaces[k - 1].transport(&eq_spaces[k], &id, &self.diff(i - 1))?;
                lhs = lhs.add(&eqs.injections[k].compose(&t.compose(&vars.projections[k - 1])?)?)?;
            }
            if k + 1 < degs.len() {
                // h^(i+1) ∘ d^i
                let t = var_spaces[k].transport(&eq_spaces[k], &self.diff(i), &ModMap::identity(&self.term(i)))?;
                lhs = lhs.add(&eqs.injections[k].compose(&t.compose(&vars.projections[k])?)?)?;
            }
            rhs = eqs.module.add_elems(&rhs, &eqs.injections[k].apply(&eq_spaces[k].coords(&id)));
        }
        Ok(lhs.preimage(&rhs).map(|v| {
            var_spaces.iter().enumerate().map(|(k, s)| s.to_map(&vars.projections[k].apply(&v))).collect()
        }))
    }

    pub fn is_contractible(&self) -> Result<bool> {
        Ok(self.homotopy_solve()?.is_some())
    }
}

#[derive(Serialize, Deserialize)]
struct ComplexDoc {
    lo: i64,
    hi: i64,
    terms: Vec<Module>,
    diffs: Vec<ModMap>,
}

impl Serialize for Complex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ComplexDoc { lo: self.lo, hi: self.hi(), terms: self.terms.clone(), diffs: self.diffs.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Complex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = ComplexDoc::deserialize(d)?;
        let ring = doc.terms.first().map(|t| t.ring().clone()).ok_or_else(|| D::Error::custom("complex without terms"))?;
        if doc.hi - doc.lo + 1 != doc.terms.len() as i64 {
            return Err(D::Error::custom("lo..hi does not match the number of terms"));
        }
        Complex::new(&ring, doc.lo, doc.terms, doc.diffs).map_err(D::Error::custom)
    }
}

/// A morphism of complexes, one map per degree of the union of supports.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub src: Complex,
    pub tgt: Complex,
    pub lo: i64,
    pub maps: Vec<ModMap>,
}

impl ChainMap {
    pub fn new(src: &Complex, tgt: &Complex, lo: i64, maps: Vec<ModMap>) -> Result<Self> {
        let hi = lo + maps.len() as i64 - 1;
        if lo > src.lo.min(tgt.lo) || hi < src.hi().max(tgt.hi()) {
            return Err(Error::DimensionMismatch("chain map must cover both supports".into()));
        }
        let cm = ChainMap { src: src.clone(), tgt: tgt.clone(), lo, maps };
        for i in lo..=hi {
            let f = cm.at(i);
            if f.dom() != &src.term(i) || f.cod() != &tgt.term(i) {
                return Err(Error::DimensionMismatch(format!("component in degree {i} has the wrong shape")));
            }
            if tgt.diff(i).compose(&f)? != cm.at(i + 1).compose(&src.diff(i))? {
                return Err(Error::NotIntertwining);
            }
        }
        Ok(cm)
    }

    pub fn at(&self, i: i64) -> ModMap {
        let k = i - self.lo;
        if k >= 0 && (k as usize) < self.maps.len() {
            self.maps[k as usize].clone()
        } else {
            ModMap::zero(&self.src.term(i), &self.tgt.term(i))
        }
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.lo + self.maps.len() as i64 - 1
    }

    pub fn is_quasi_iso(&self) -> Result<bool> {
        for i in self.degrees() {
            let induced = self.src.homology_at(i).induced(&self.tgt.homology_at(i), &self.at(i))?;
            if !induced.is_iso() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Period {
    pub start: usize,
    pub length: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Finite(usize),
    Infinite,
    Undetermined,
}

/// A minimal injective resolution `M -> J^0 -> J^1 -> ...` truncated at
/// degree `length`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Resolution {
    pub module: Module,
    pub augmentation: ModMap,
    /// `J^0 .. J^length` in degrees `0..=length`.
    pub complex: Complex,
    /// `d^length`, the differential leaving the truncation.
    pub next_diff: ModMap,
    pub period: Option<Period>,
    /// The last nonzero degree when the resolution stops.
    pub terminates_at: Option<usize>,
    pub length: usize,
}

impl Resolution {
    pub fn verdict(&self) -> Verdict {
        match (self.terminates_at, self.period) {
            (Some(n), _) => Verdict::Finite(n),
            (None, Some(_)) => Verdict::Infinite,
            _ => Verdict::Undetermined,
        }
    }

    pub fn terms(&self) -> &[Module] {
        self.complex.terms()
    }
}

/// Iterated injective envelopes of successive cokernels.
pub fn min_inj_resolution(m: &Module, length: usize) -> Resolution {
    let ring = m.ring();
    let mut cokernels: Vec<Module> = vec![m.clone()];
    let mut terms = Vec::new();
    let mut diffs = Vec::new();
    let mut augmentation = None;
    let mut prev_proj: Option<ModMap> = None;
    let mut period = None;
    let mut terminates_at = None;
    let mut i = 0usize;
    loop {
        let c_prev = cokernels.last().unwrap().clone();
        let (e, eps) = injective_envelope(&c_prev);
        match &prev_proj {
            None => augmentation = Some(eps.clone()),
            Some(q) => diffs.push(eps.compose(q).expect("composable")),
        }
        terms.push(e);
        let q = eps.cokernel();
        let c = q.module.clone();
        if terminates_at.is_none() && period.is_none() {
            if c.is_zero() {
                // J^(i+1) = 0 and every later term vanishes
                terminates_at = Some(if terms[i].is_zero() { 0 } else { i });
            } else if let Some(a) = cokernels.iter().position(|x| *x == c) {
                // cokernels are indexed from degree -1
                period = Some(Period { start: a, length: i + 1 - a });
            }
        }
        cokernels.push(c);
        prev_proj = Some(q.projection);
        if i > length && (terminates_at.is_some() || period.is_some()) {
            break;
        }
        i += 1;
    }
    let truncated_terms = terms[..=length].to_vec();
    let truncated_diffs = diffs[..length].to_vec();
    let complex = Complex::new(ring, 0, truncated_terms, truncated_diffs).expect("resolution is a complex");
    Resolution {
        module: m.clone(),
        augmentation: augmentation.expect("degree zero computed"),
        complex,
        next_diff: diffs[length].clone(),
        period,
        terminates_at,
        length,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BassReport {
    pub mu: Vec<usize>,
    pub partial_sums: Vec<usize>,
    pub ext_dims: Vec<usize>,
    pub routes_agree: bool,
    pub verdict: Verdict,
    pub period: Option<Period>,
    pub length: usize,
}

/// Free resolution `P_n -> ... -> P_0 -> k` built from projective covers of
/// successive kernels; returns the maps `P_(i+1) -> P_i`.
pub fn residue_free_resolution(ring: &Ring, n: usize) -> Result<(Vec<Module>, Vec<ModMap>)> {
    if !ring.is_local() {
        return Err(Error::Precondition("free resolution of k needs a local ring".into()));
    }
    let k = Module::residue_field(ring);
    let cover = |target: &Module| -> ModMap {
        let p = Module::free(ring, target.num_gens());
        let blocks = (0..ring.num_components())
            .map(|c| crate::linalg::Mat::identity(ring.component(c), target.exps(c).len()))
            .collect();
        ModMap::new(p, target.clone(), blocks).expect("free modules map anywhere")
    };
    let mut eps = cover(&k);
    let mut frees = vec![eps.dom().clone()];
    let mut maps = Vec::new();
    for _ in 0..n {
        let ker = eps.kernel();
        let c = cover(&ker.module);
        let dmap = ker.inclusion.compose(&c)?;
        frees.push(dmap.dom().clone());
        maps.push(dmap.clone());
        eps = dmap;
    }
    Ok((frees, maps))
}

/// `dim_k Ext^i(k, M)` for `i <= n` from the free resolution of `k`.
pub fn ext_dims_from_free_resolution(m: &Module, n: usize) -> Result<Vec<usize>> {
    let ring = m.ring();
    let (frees, maps) = residue_free_resolution(ring, n + 1)?;
    let spaces: Vec<HomSpace> = frees.iter().map(|p| HomSpace::new(p, m)).collect::<Result<_>>()?;
    let id = ModMap::identity(m);
    // delta^i : Hom(P_i, M) -> Hom(P_(i+1), M)
    let deltas: Vec<ModMap> =
        (0..=n).map(|i| spaces[i].transport(&spaces[i + 1], &maps[i], &id)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for i in 0..=n {
        let incoming = if i == 0 {
            ModMap::zero(&Module::zero(ring), &spaces[0].module)
        } else {
            deltas[i - 1].clone()
        };
        out.push(homology(&incoming, &deltas[i])?.module.length());
    }
    Ok(out)
}

pub fn bass_numbers(m: &Module, length: usize) -> Result<BassReport> {
    if !m.ring().is_local() {
        return Err(Error::Precondition("Bass numbers are reported per component over a product ring".into()));
    }
    let res = min_inj_resolution(m, length);
    let mu: Vec<usize> = res.terms().iter().map(Module::mu_total).collect();
    let ext_dims = ext_dims_from_free_resolution(m, length)?;
    let partial_sums = mu.iter().scan(0, |acc, &x| {
        *acc += x;
        Some(*acc)
    }).collect();
    Ok(BassReport {
        routes_agree: mu == ext_dims,
        mu,
        partial_sums,
        ext_dims,
        verdict: res.verdict(),
        period: res.period,
        length,
    })
}

/// One report per chain factor of the ring.
pub fn bass_numbers_per_component(m: &Module, length: usize) -> Result<Vec<BassReport>> {
    let ring = m.ring();
    (0..ring.num_components())
        .map(|c| {
            let local = Ring::local(ring.component(c));
            bass_numbers(&Module::new(local, vec![m.exps(c).to_vec()])?, length)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z4() -> Ring {
        Ring::parse("Z/4").unwrap()
    }

    fn two_complex(r: &Ring) -> Complex {
        let x = Module::local(r, &[2]).unwrap();
        Complex::new(r, 0, vec![x.clone(), x.clone()], vec![ModMap::from_ints(&x, &x, &[&[2]]).unwrap()]).unwrap()
    }

    #[test]
    fn cohomology_examples() {
        let r = z4();
        let c = two_complex(&r);
        let k = Module::local(&r, &[1]).unwrap();
        assert_eq!(c.cohomology(0), k);
        assert_eq!(c.cohomology(1), k);
        let m = Module::local(&r, &[2, 1]).unwrap();
        let s = Complex::stalk(&m, 0);
        assert_eq!(s.cohomology(0), m);
        assert!(s.cohomology(1).is_zero());
        assert!(Complex::disc(&m, 3).is_acyclic());
    }

    #[test]
    fn functor_examples() {
        let r = z4();
        let k = Module::local(&r, &[1]).unwrap();
        assert_eq!(Complex::disc(&k, 0).term(1), k);
        assert_eq!(Complex::stalk(&Module::local(&r, &[2]).unwrap(), 0).mu_c(), 1);
        assert_eq!(two_complex(&r).mu_c(), 2);
    }

    #[test]
    fn minimality_examples() {
        let r = z4();
        let free = Module::local(&r, &[2]).unwrap();
        assert!(two_complex(&r).is_minimal().unwrap());
        assert!(!Complex::disc(&free, 0).is_minimal().unwrap());
        assert!(Complex::stalk(&free, 0).is_minimal().unwrap());
        assert!(Complex::stalk(&Module::local(&r, &[1]).unwrap(), 0).is_minimal().is_err());
    }

    #[test]
    fn resolution_of_residue_field() {
        for desc in ["Z/4", "F2[x]/(x^2)"] {
            let r = Ring::parse(desc).unwrap();
            let res = min_inj_resolution(&Module::residue_field(&r), 5);
            let free = Module::free(&r, 1);
            assert!(res.terms().iter().all(|t| *t == free));
            let pi = ModMap::scalar(&free, &crate::Elem(vec![r.component(0).pi_pow(1)]));
            assert!(res.complex.diffs().iter().all(|d| *d == pi));
            assert_eq!(res.period, Some(Period { start: 0, length: 1 }));
            assert_eq!(res.verdict(), Verdict::Infinite);
        }
    }

    #[test]
    fn resolution_examples() {
        let r = z4();
        let res = min_inj_resolution(&Module::local(&r, &[2]).unwrap(), 3);
        assert_eq!(res.terminates_at, Some(0));
        assert!(res.terms()[1..].iter().all(Module::is_zero));

        let res = min_inj_resolution(&Module::local(&r, &[1, 2]).unwrap(), 4);
        assert_eq!(res.terms()[0], Module::free(&r, 2));
        assert!(res.terms()[1..].iter().all(|t| *t == Module::free(&r, 1)));
        let two = ModMap::from_ints(&Module::free(&r, 1), &Module::free(&r, 1), &[&[2]]).unwrap();
        assert!(res.complex.diffs()[1..].iter().all(|d| *d == two));
        assert!(res.complex.is_minimal().unwrap());
    }

    #[test]
    fn bass_examples() {
        let r = z4();
        let b = bass_numbers(&Module::local(&r, &[1]).unwrap(), 10).unwrap();
        assert_eq!(b.mu, vec![1; 11]);
        assert!(b.routes_agree);
        assert_eq!(b.verdict, Verdict::Infinite);

        let b = bass_numbers(&Module::local(&r, &[2]).unwrap(), 8).unwrap();
        assert_eq!(b.mu, [vec![1], vec![0; 8]].concat());
        assert_eq!(b.verdict, Verdict::Finite(0));
        assert!(b.routes_agree);

        let b = bass_numbers(&Module::zero(&r), 8).unwrap();
        assert_eq!(b.mu, vec![0; 9]);
        assert_eq!(b.verdict, Verdict::Finite(0));
        assert!(bass_numbers(&Module::zero(&Ring::parse("Z/12").unwrap()), 2).is_err());
    }

    #[test]
    fn contractible_complexes() {
        let r = z4();
        let m = Module::local(&r, &[2, 1]).unwrap();
        assert!(Complex::disc(&m, 0).is_contractible().unwrap());
        assert!(!two_complex(&r).is_contractible().unwrap());
        assert!(!Complex::stalk(&m, 0).is_contractible().unwrap());
    }

    #[test]
    fn verdict_json() {
        assert_eq!(serde_json::to_string(&Verdict::Finite(2)).unwrap(), r#"{"finite":2}"#);
        assert_eq!(serde_json::to_string(&Verdict::Infinite).unwrap(), r#""infinite""#);
    }
}
