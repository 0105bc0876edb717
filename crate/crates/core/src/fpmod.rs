//! Finitely generated modules over a [`Ring`] in invariant form
//! `⊕_j R/(pi^e_j)`, maps between them, and the linear algebra built on top:
//! kernels, images, cokernels, subquotients, socles, injective envelopes,
//! essentiality, `Hom` and `⊗`.
//!
//! Over a product ring everything is strictly componentwise: a module keeps
//! one exponent list per chain factor and a map keeps one matrix per factor.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::pid;
use crate::ring::{ChainElem, ChainRing, Elem, Ring};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Module {
    ring: Ring,
    parts: Vec<Vec<u32>>,
}

/// An element of a module, one coordinate vector per chain factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModElem {
    pub parts: Vec<Vec<ChainElem>>,
}

/// A homomorphism `dom -> cod`. Column `j` of block `c` is the image of
/// generator `j`; row `i` is reduced modulo `pi^(e_cod(i))`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModMap {
    dom: Module,
    cod: Module,
    blocks: Vec<Mat>,
}

impl fmt::Debug for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |e: &Vec<u32>| format!("[{}]", e.iter().map(u32::to_string).collect::<Vec<_>>().join(","));
        if self.parts.len() == 1 {
            write!(f, "{}", show(&self.parts[0]))
        } else {
            write!(f, "[{}]", self.parts.iter().map(show).collect::<Vec<_>>().join(","))
        }
    }
}

impl fmt::Debug for ModMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} {:?}", self.dom, self.cod, self.blocks)
    }
}

fn diag_pi(ring: ChainRing, exps: &[u32]) -> Mat {
    Mat::diag(ring, exps.iter().map(|&e| ring.pi_pow(e)).collect())
}

/// Generators of `{z : a z = 0 in ⊕ R/(pi^cod)}`.
fn kernel_in(cod: &[u32], a: &Mat) -> Mat {
    let ring = a.ring();
    let full = linalg::kernel(&a.hcat(&diag_pi(ring, cod)));
    full.block(0, 0, a.cols(), full.cols())
}

/// Some `z` with `a z = b` in `⊕ R/(pi^cod)`.
fn solve_in(cod: &[u32], a: &Mat, b: &[ChainElem]) -> Option<Vec<ChainElem>> {
    let ring = a.ring();
    let z = linalg::solve(&a.hcat(&diag_pi(ring, cod)), b)?;
    Some(z[..a.cols()].to_vec())
}

/// Normal form of the submodule of `⊕ R/(pi^amb)` spanned by the columns of
/// `gens`, with the inclusion matrix.
fn sub_nf(amb: &[u32], gens: &Mat) -> (Vec<u32>, Mat) {
    let ring = gens.ring();
    let rel = kernel_in(amb, gens);
    let snf = linalg::smith(&rel);
    let img = gens.mul(&snf.p_inv);
    let keep: Vec<usize> = (0..gens.cols()).rev().filter(|&i| snf.row_vals[i] > 0).collect();
    let exps = keep.iter().map(|&i| snf.row_vals[i]).collect();
    let incl = img.select_cols(&keep).reduce_rows(amb);
    debug_assert_eq!(incl.ring(), ring);
    (exps, incl)
}

/// Normal form of `(⊕ R/(pi^amb)) / <gens>`, the projection matrix and lifts
/// of the new generators.
fn quot_nf(amb: &[u32], gens: &Mat) -> (Vec<u32>, Mat, Mat) {
    let ring = gens.ring();
    let pres = gens.hcat(&diag_pi(ring, amb));
    let snf = linalg::smith(&pres);
    let keep: Vec<usize> = (0..amb.len()).rev().filter(|&i| snf.row_vals[i] > 0).collect();
    let exps: Vec<u32> = keep.iter().map(|&i| snf.row_vals[i]).collect();
    let proj = snf.p.select_rows(&keep).reduce_rows(&exps);
    let lifts = snf.p_inv.select_cols(&keep);
    (exps, proj, lifts)
}

impl Module {
    pub fn new(ring: Ring, parts: Vec<Vec<u32>>) -> Result<Self> {
        if parts.len() != ring.num_components() {
            return Err(Error::DimensionMismatch(format!(
                "{} exponent lists for a ring with {} components",
                parts.len(),
                ring.num_components()
            )));
        }
        for (c, exps) in ring.components().iter().zip(&parts) {
            if let Some(e) = exps.iter().find(|&&e| e == 0 || e > c.m()) {
                return Err(Error::DimensionMismatch(format!(
                    "exponent {e} outside 1..={} over {}",
                    c.m(),
                    c.descriptor()
                )));
            }
        }
        Ok(Module { ring, parts })
    }

    /// A module over a local ring given by its exponent list.
    pub fn local(ring: &Ring, exps: &[u32]) -> Result<Self> {
        if !ring.is_local() {
            return Err(Error::Precondition("exponent list needs a local ring".into()));
        }
        Module::new(ring.clone(), vec![exps.to_vec()])
    }

    pub fn zero(ring: &Ring) -> Self {
        Module { ring: ring.clone(), parts: vec![Vec::new(); ring.num_components()] }
    }

    /// `R^rank`.
    pub fn free(ring: &Ring, rank: usize) -> Self {
        let parts = ring.components().iter().map(|c| vec![c.m(); rank]).collect();
        Module { ring: ring.clone(), parts }
    }

    /// The semisimple module `⊕ R/(pi)` with one copy per chain factor.
    pub fn residue_field(ring: &Ring) -> Self {
        Module { ring: ring.clone(), parts: vec![vec![1]; ring.num_components()] }
    }

    /// Parses `[2,1]` (local ring) or `[[2,1],[1]]` (one list per factor).
    pub fn parse_literal(ring: &Ring, s: &str) -> Result<Self> {
        let bad = |e: serde_json::Error| Error::Parse(format!("bad module literal `{s}`: {e}"));
        let v: serde_json::Value = serde_json::from_str(s).map_err(bad)?;
        let nested = v.as_array().is_some_and(|a| a.iter().any(|x| x.is_array()));
        let parts: Vec<Vec<u32>> = if nested {
            serde_json::from_value(v).map_err(bad)?
        } else {
            vec![serde_json::from_value(v).map_err(bad)?]
        };
        if !nested && !ring.is_local() && !parts[0].is_empty() {
            return Err(Error::Parse("product rings need one exponent list per component".into()));
        }
        let parts = if !nested && parts[0].is_empty() { vec![Vec::new(); ring.num_components()] } else { parts };
        Module::new(ring.clone(), parts)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn parts(&self) -> &[Vec<u32>] {
        &self.parts
    }

    pub fn exps(&self, c: usize) -> &[u32] {
        &self.parts[c]
    }

    pub fn num_gens(&self) -> usize {
        self.parts.iter().map(Vec::len).sum()
    }

    /// Composition length, which is also the `k`-dimension over a field base.
    pub fn length(&self) -> usize {
        self.parts.iter().flatten().map(|&e| e as usize).sum()
    }

    pub fn length_per_component(&self) -> Vec<usize> {
        self.parts.iter().map(|p| p.iter().map(|&e| e as usize).sum()).collect()
    }

    /// Socle dimension per component: the number of cyclic summands.
    pub fn mu(&self) -> Vec<usize> {
        self.parts.iter().map(Vec::len).collect()
    }

    pub fn mu_total(&self) -> usize {
        self.num_gens()
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(Vec::is_empty)
    }

    /// Free, equivalently injective since chain rings are self-injective.
    pub fn is_free(&self) -> bool {
        self.ring.components().iter().zip(&self.parts).all(|(c, p)| p.iter().all(|&e| e == c.m()))
    }

    pub fn is_canonical(&self) -> bool {
        self.parts.iter().all(|p| p.windows(2).all(|w| w[0] >= w[1]))
    }

    /// Exponents sorted descending; two modules are isomorphic exactly when
    /// their canonical forms agree.
    pub fn canonical(&self) -> Module {
        let mut parts = self.parts.clone();
        parts.iter_mut().for_each(|p| p.sort_unstable_by(|a, b| b.cmp(a)));
        Module { ring: self.ring.clone(), parts }
    }

    pub fn is_isomorphic(&self, other: &Module) -> bool {
        self.ring == other.ring && self.canonical() == other.canonical()
    }

    pub fn cardinality(&self) -> Option<u128> {
        self.ring.components().iter().zip(&self.parts).try_fold(1u128, |acc, (c, p)| {
            let q = c.quotient_size(p.iter().sum())?;
            acc.checked_mul(q)
        })
    }

    pub fn zero_elem(&self) -> ModElem {
        ModElem {
            parts: self.ring.components().iter().zip(&self.parts).map(|(c, p)| vec![c.zero(); p.len()]).collect(),
        }
    }

    pub fn basis_elem(&self, c: usize, i: usize) -> ModElem {
        let mut v = self.zero_elem();
        v.parts[c][i] = self.ring.component(c).one();
        v
    }

    /// Reduces coordinates modulo the summand orders.
    pub fn reduce(&self, v: &ModElem) -> ModElem {
        ModElem {
            parts: self
                .ring
                .components()
                .iter()
                .zip(&self.parts)
                .zip(&v.parts)
                .map(|((c, p), x)| x.iter().zip(p).map(|(a, &e)| c.reduce(a, e)).collect())
                .collect(),
        }
    }

    pub fn elem_is_zero(&self, v: &ModElem) -> bool {
        let r = self.reduce(v);
        self.ring.components().iter().zip(&r.parts).all(|(c, x)| x.iter().all(|a| c.is_zero(a)))
    }

    pub fn add_elems(&self, a: &ModElem, b: &ModElem) -> ModElem {
        let parts = self
            .ring
            .components()
            .iter()
            .zip(a.parts.iter().zip(&b.parts))
            .map(|(c, (x, y))| x.iter().zip(y).map(|(s, t)| c.add(s, t)).collect())
            .collect();
        self.reduce(&ModElem { parts })
    }

    pub fn scale_elem(&self, r: &Elem, v: &ModElem) -> ModElem {
        let parts = self
            .ring
            .components()
            .iter()
            .zip(r.0.iter().zip(&v.parts))
            .map(|(c, (s, x))| x.iter().map(|t| c.mul(s, t)).collect())
            .collect();
        self.reduce(&ModElem { parts })
    }

    pub fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> ModElem {
        let parts = self
            .ring
            .components()
            .iter()
            .zip(&self.parts)
            .map(|(c, p)| p.iter().map(|&e| c.reduce(&c.random(rng), e)).collect())
            .collect();
        ModElem { parts }
    }

    /// All elements, for small finite modules.
    pub fn elements(&self) -> Option<Vec<ModElem>> {
        let mut acc: Vec<ModElem> = vec![ModElem { parts: vec![Vec::new(); self.parts.len()] }];
        for (c, (ring, p)) in self.ring.components().iter().zip(&self.parts).enumerate() {
            for &e in p {
                let res = ring.residues(e)?;
                let mut next = Vec::with_capacity(acc.len() * res.len());
                for v in &acc {
                    for r in &res {
                        let mut w = v.clone();
                        w.parts[c].push(r.clone());
                        next.push(w);
                    }
                }
                acc = next;
            }
        }
        Some(acc)
    }

    /// `⊕ mods`, with the canonical injections and projections.
    pub fn direct_sum(ring: &Ring, mods: &[&Module]) -> Result<DirectSum> {
        if mods.iter().any(|m| m.ring != *ring) {
            return Err(Error::RingMismatch);
        }
        let mut parts = vec![Vec::new(); ring.num_components()];
        let mut offsets = vec![vec![0usize; ring.num_components()]; mods.len()];
        for (k, m) in mods.iter().enumerate() {
            for c in 0..ring.num_components() {
                offsets[k][c] = parts[c].len();
                parts[c].extend_from_slice(&m.parts[c]);
            }
        }
        let module = Module { ring: ring.clone(), parts };
        let mut injections = Vec::new();
        let mut projections = Vec::new();
        for (k, m) in mods.iter().enumerate() {
            let inj: Vec<Mat> = (0..ring.num_components())
                .map(|c| {
                    let cr = ring.component(c);
                    let mut b = Mat::zeros(cr, module.parts[c].len(), m.parts[c].len());
                    b.set_block(offsets[k][c], 0, &Mat::identity(cr, m.parts[c].len()));
                    b
                })
                .collect();
            let proj: Vec<Mat> = inj.iter().map(Mat::transpose).collect();
            injections.push(ModMap::new((*m).clone(), module.clone(), inj)?);
            projections.push(ModMap::new(module.clone(), (*m).clone(), proj)?);
        }
        Ok(DirectSum { module, injections, projections })
    }

    /// `self ⊕ other`.
    pub fn oplus(&self, other: &Module) -> Result<Module> {
        Ok(Module::direct_sum(&self.ring, &[self, other])?.module)
    }
}

/// A finite direct sum with its structure maps.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub module: Module,
    pub injections: Vec<ModMap>,
    pub projections: Vec<ModMap>,
}

impl DirectSum {
    /// The map into `self` assembled from `(summand index, map into that
    /// summand)` pieces sharing a domain.
    pub fn gather(&self, dom: &Module, pieces: &[(usize, &ModMap)]) -> Result<ModMap> {
        let mut acc = ModMap::zero(dom, &self.module);
        for (k, f) in pieces {
            acc = acc.add(&self.injections[*k].compose(f)?)?;
        }
        Ok(acc)
    }
}

impl ModMap {
    /// Validates shapes and well-definedness, then reduces rows.
    pub fn new(dom: Module, cod: Module, blocks: Vec<Mat>) -> Result<Self> {
        if dom.ring != cod.ring {
            return Err(Error::RingMismatch);
        }
        if blocks.len() != dom.ring.num_components() {
            return Err(Error::DimensionMismatch("one matrix per ring component required".into()));
        }
        for (c, b) in blocks.iter().enumerate() {
            let (r, k) = (cod.parts[c].len(), dom.parts[c].len());
            if b.rows() != r || b.cols() != k || b.ring() != dom.ring.component(c) {
                return Err(Error::DimensionMismatch(format!(
                    "block {c} is {}x{}, expected {r}x{k}",
                    b.rows(),
                    b.cols()
                )));
            }
            let ring = b.ring();
            for i in 0..r {
                for j in 0..k {
                    let need = cod.parts[c][i].saturating_sub(dom.parts[c][j]);
                    let v = ring.valuation(&ring.reduce(b.get(i, j), cod.parts[c][i]));
                    if v < need {
                        return Err(Error::IllDefined(format!(
                            "entry ({i},{j}) = {} needs valuation >= {need}",
                            ring.format(b.get(i, j))
                        )));
                    }
                }
            }
        }
        let blocks = blocks.iter().zip(&cod.parts).map(|(b, e)| b.reduce_rows(e)).collect();
        Ok(ModMap { dom, cod, blocks })
    }

    /// Convenience constructor over a local ring from integer entries.
    pub fn from_ints(dom: &Module, cod: &Module, rows: &[&[i64]]) -> Result<Self> {
        if !dom.ring.is_local() {
            return Err(Error::Precondition("integer matrices need a local ring".into()));
        }
        let ring = dom.ring.component(0);
        let mat = if rows.is_empty() { Mat::zeros(ring, 0, dom.num_gens()) } else { Mat::from_ints(ring, rows) };
        ModMap::new(dom.clone(), cod.clone(), vec![mat])
    }

    pub fn zero(dom: &Module, cod: &Module) -> Self {
        let blocks = dom
            .ring
            .components()
            .iter()
            .enumerate()
            .map(|(c, r)| Mat::zeros(*r, cod.parts[c].len(), dom.parts[c].len()))
            .collect();
        ModMap { dom: dom.clone(), cod: cod.clone(), blocks }
    }

    pub fn identity(m: &Module) -> Self {
        let blocks = m.ring.components().iter().zip(&m.parts).map(|(r, p)| Mat::identity(*r, p.len())).collect();
        ModMap { dom: m.clone(), cod: m.clone(), blocks }
    }

    /// Multiplication by a ring element on `m`.
    pub fn scalar(m: &Module, r: &Elem) -> Self {
        let blocks = m
            .ring
            .components()
            .iter()
            .zip(&m.parts)
            .zip(&r.0)
            .map(|((c, p), s)| Mat::diag(*c, vec![s.clone(); p.len()]).reduce_rows(p))
            .collect();
        ModMap { dom: m.clone(), cod: m.clone(), blocks }
    }

    pub fn dom(&self) -> &Module {
        &self.dom
    }

    pub fn cod(&self) -> &Module {
        &self.cod
    }

    pub fn ring(&self) -> &Ring {
        &self.dom.ring
    }

    pub fn block(&self, c: usize) -> &Mat {
        &self.blocks[c]
    }

    pub fn blocks(&self) -> &[Mat] {
        &self.blocks
    }

    pub fn is_endo(&self) -> bool {
        self.dom == self.cod
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(Mat::is_zero)
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, rhs: &ModMap) -> Result<ModMap> {
        if rhs.cod != self.dom {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose {} -> {} after {} -> {}",
                self.dom, self.cod, rhs.dom, rhs.cod
            )));
        }
        let blocks = self
            .blocks
            .iter()
            .zip(&rhs.blocks)
            .zip(&self.cod.parts)
            .map(|((a, b), e)| a.mul(b).reduce_rows(e))
            .collect();
        Ok(ModMap { dom: rhs.dom.clone(), cod: self.cod.clone(), blocks })
    }

    fn check_parallel(&self, other: &ModMap) -> Result<()> {
        if self.dom != other.dom || self.cod != other.cod {
            return Err(Error::DimensionMismatch("maps are not parallel".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &ModMap) -> Result<ModMap> {
        self.check_parallel(other)?;
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .zip(&self.cod.parts)
            .map(|((a, b), e)| a.add(b).reduce_rows(e))
            .collect();
        Ok(ModMap { dom: self.dom.clone(), cod: self.cod.clone(), blocks })
    }

    pub fn sub(&self, other: &ModMap) -> Result<ModMap> {
        self.check_parallel(other)?;
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .zip(&self.cod.parts)
            .map(|((a, b), e)| a.sub(b).reduce_rows(e))
            .collect();
        Ok(ModMap { dom: self.dom.clone(), cod: self.cod.clone(), blocks })
    }

    pub fn scale(&self, r: &Elem) -> ModMap {
        let blocks = self
            .blocks
            .iter()
            .zip(&r.0)
            .zip(&self.cod.parts)
            .map(|((a, s), e)| a.scale(s).reduce_rows(e))
            .collect();
        ModMap { dom: self.dom.clone(), cod: self.cod.clone(), blocks }
    }

    pub fn apply(&self, v: &ModElem) -> ModElem {
        let parts = self.blocks.iter().zip(&v.parts).map(|(b, x)| b.apply(x)).collect();
        self.cod.reduce(&ModElem { parts })
    }

    /// Some `z` with `self(z) = b`.
    pub fn preimage(&self, b: &ModElem) -> Option<ModElem> {
        let parts = self
            .blocks
            .iter()
            .zip(&self.cod.parts)
            .zip(&b.parts)
            .map(|((a, e), y)| solve_in(e, a, y))
            .collect::<Option<Vec<_>>>()?;
        Some(self.dom.reduce(&ModElem { parts }))
    }

    /// Solves `self ∘ x = g` for `x : g.dom -> self.dom`, one column at a time.
    pub fn factor_through(&self, g: &ModMap) -> Result<Option<ModMap>> {
        if g.cod != self.cod {
            return Err(Error::DimensionMismatch("factor_through needs a common codomain".into()));
        }
        let mut blocks = Vec::new();
        for (c, ((a, e), gb)) in self.blocks.iter().zip(&self.cod.parts).zip(&g.blocks).enumerate() {
            let mut cols = Vec::new();
            for j in 0..gb.cols() {
                match solve_in(e, a, &gb.column(j)) {
                    Some(z) => cols.push(z),
                    None => return Ok(None),
                }
            }
            let ring = g.ring().component(c);
            let mut x = Mat::zeros(ring, self.dom.parts[c].len(), gb.cols());
            for (j, col) in cols.into_iter().enumerate() {
                for (i, v) in col.into_iter().enumerate() {
                    x.set(i, j, v);
                }
            }
            blocks.push(x.reduce_rows(&self.dom.parts[c]));
        }
        Ok(Some(ModMap::new(g.dom.clone(), self.dom.clone(), blocks)?))
    }

    pub fn kernel(&self) -> Sub {
        let per: Vec<(Vec<u32>, Mat)> = self
            .blocks
            .iter()
            .zip(&self.cod.parts)
            .zip(&self.dom.parts)
            .map(|((a, ce), de)| sub_nf(de, &kernel_in(ce, a)))
            .collect();
        Sub::assemble(&self.dom, per)
    }

    pub fn image(&self) -> Sub {
        let per: Vec<(Vec<u32>, Mat)> =
            self.blocks.iter().zip(&self.cod.parts).map(|(a, ce)| sub_nf(ce, a)).collect();
        Sub::assemble(&self.cod, per)
    }

    pub fn cokernel(&self) -> Quotient {
        let per = self.blocks.iter().zip(&self.cod.parts).map(|(a, ce)| quot_nf(ce, a)).collect();
        Quotient::assemble(&self.cod, per)
    }

    pub fn subquotients(&self) -> Subquotients {
        Subquotients { ker: self.kernel(), im: self.image(), coker: self.cokernel() }
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().module.is_zero()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().module.is_zero()
    }

    pub fn is_iso(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// The inverse of an isomorphism.
    pub fn inverse(&self) -> Result<ModMap> {
        if !self.is_iso() {
            return Err(Error::Precondition("map is not an isomorphism".into()));
        }
        let id = ModMap::identity(&self.cod);
        self.factor_through(&id)?
            .ok_or_else(|| Error::Precondition("isomorphism without a preimage".into()))
    }

    /// Entries of all blocks as one block-diagonal matrix of strings.
    pub fn global_matrix(&self) -> Vec<Vec<String>> {
        let ring = self.ring();
        let mut rows = Vec::new();
        let total_cols = self.dom.num_gens();
        let mut col_off = 0;
        for (c, b) in self.blocks.iter().enumerate() {
            let cr = ring.component(c);
            for i in 0..b.rows() {
                let mut row = vec!["0".to_string(); total_cols];
                for j in 0..b.cols() {
                    row[col_off + j] = cr.format(b.get(i, j));
                }
                rows.push(row);
            }
            col_off += b.cols();
        }
        rows
    }

    pub fn from_global_matrix(dom: &Module, cod: &Module, rows: &[Vec<String>]) -> Result<ModMap> {
        if dom.ring != cod.ring {
            return Err(Error::RingMismatch);
        }
        if rows.len() != cod.num_gens() || rows.iter().any(|r| r.len() != dom.num_gens()) {
            return Err(Error::DimensionMismatch(format!(
                "matrix must be {}x{}",
                cod.num_gens(),
                dom.num_gens()
            )));
        }
        let ring = &dom.ring;
        let mut blocks = Vec::new();
        let (mut r_off, mut c_off) = (0, 0);
        for c in 0..ring.num_components() {
            let cr = ring.component(c);
            let (nr, nc) = (cod.parts[c].len(), dom.parts[c].len());
            let mut b = Mat::zeros(cr, nr, nc);
            for (gi, row) in rows.iter().enumerate() {
                for (gj, s) in row.iter().enumerate() {
                    let inside_r = (r_off..r_off + nr).contains(&gi);
                    let inside_c = (c_off..c_off + nc).contains(&gj);
                    if inside_r && inside_c {
                        b.set(gi - r_off, gj - c_off, cr.parse_elem(s)?);
                    } else if inside_r != inside_c && s.trim() != "0" {
                        return Err(Error::IllDefined("maps cannot mix ring components".into()));
                    }
                }
            }
            blocks.push(b);
            r_off += nr;
            c_off += nc;
        }
        ModMap::new(dom.clone(), cod.clone(), blocks)
    }
}

/// A submodule in normal form together with its inclusion.
#[derive(Clone, Debug)]
pub struct Sub {
    pub module: Module,
    pub inclusion: ModMap,
}

impl Sub {
    fn assemble(ambient: &Module, per: Vec<(Vec<u32>, Mat)>) -> Sub {
        let (parts, blocks): (Vec<_>, Vec<_>) = per.into_iter().unzip();
        let module = Module { ring: ambient.ring.clone(), parts };
        let inclusion = ModMap { dom: module.clone(), cod: ambient.clone(), blocks };
        Sub { module, inclusion }
    }
}

/// A quotient in normal form with its projection and lifts of its generators.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub module: Module,
    pub projection: ModMap,
    /// Column `i` of block `c` lifts generator `i` of `module` to the ambient.
    pub lifts: Vec<Mat>,
}

impl Quotient {
    fn assemble(ambient: &Module, per: Vec<(Vec<u32>, Mat, Mat)>) -> Quotient {
        let mut parts = Vec::new();
        let mut proj = Vec::new();
        let mut lifts = Vec::new();
        for (e, p, l) in per {
            parts.push(e);
            proj.push(p);
            lifts.push(l);
        }
        let module = Module { ring: ambient.ring.clone(), parts };
        let projection = ModMap { dom: ambient.clone(), cod: module.clone(), blocks: proj };
        Quotient { module, projection, lifts }
    }

    pub fn lift(&self, c: usize, i: usize) -> ModElem {
        let mut v = self.projection.dom.zero_elem();
        v.parts[c] = self.lifts[c].column(i);
        self.projection.dom.reduce(&v)
    }
}

#[derive(Clone, Debug)]
pub struct Subquotients {
    pub ker: Sub,
    pub im: Sub,
    pub coker: Quotient,
}

/// A submodule given by generators inside an ambient module.
#[derive(Clone, Debug)]
pub struct Submodule {
    pub ambient: Module,
    gens: Vec<Mat>,
}

impl Submodule {
    pub fn new(ambient: &Module, gens: &[ModElem]) -> Result<Self> {
        let ring = &ambient.ring;
        let mut blocks = Vec::new();
        for c in 0..ring.num_components() {
            let n = ambient.parts[c].len();
            let mut b = Mat::zeros(ring.component(c), n, gens.len());
            for (j, g) in gens.iter().enumerate() {
                if g.parts.len() != ring.num_components() || g.parts[c].len() != n {
                    return Err(Error::DimensionMismatch("generator does not lie in the ambient module".into()));
                }
                for (i, x) in g.parts[c].iter().enumerate() {
                    b.set(i, j, x.clone());
                }
            }
            blocks.push(b.reduce_rows(&ambient.parts[c]));
        }
        Ok(Submodule { ambient: ambient.clone(), gens: blocks })
    }

    /// The image of `f` as a submodule of `f.cod()`.
    pub fn image_of(f: &ModMap) -> Self {
        Submodule { ambient: f.cod.clone(), gens: f.blocks.clone() }
    }

    pub fn whole(m: &Module) -> Self {
        Submodule::image_of(&ModMap::identity(m))
    }

    pub fn contains(&self, v: &ModElem) -> bool {
        self.gens
            .iter()
            .zip(&self.ambient.parts)
            .zip(&v.parts)
            .all(|((g, e), x)| solve_in(e, g, x).is_some())
    }

    pub fn contains_sub(&self, other: &Submodule) -> bool {
        self.ambient == other.ambient
            && (0..self.gens.len()).all(|c| {
                (0..other.gens[c].cols())
                    .all(|j| solve_in(&self.ambient.parts[c], &self.gens[c], &other.gens[c].column(j)).is_some())
            })
    }

    pub fn normal_form(&self) -> Sub {
        let per = self.gens.iter().zip(&self.ambient.parts).map(|(g, e)| sub_nf(e, g)).collect();
        Sub::assemble(&self.ambient, per)
    }

    /// Essential in the ambient module, decided by socle containment.
    pub fn is_essential(&self) -> bool {
        let soc = socle(&self.ambient);
        self.contains_sub(&Submodule::image_of(&soc.inclusion))
    }
}

/// `Soc(M) = ⊕ pi^(e_j - 1) R/(pi^e_j)` and its dimension per component.
#[derive(Clone, Debug)]
pub struct Socle {
    pub module: Module,
    pub inclusion: ModMap,
    pub mu: Vec<usize>,
}

pub fn socle(m: &Module) -> Socle {
    let ring = &m.ring;
    let blocks: Vec<Mat> = ring
        .components()
        .iter()
        .zip(&m.parts)
        .map(|(c, p)| Mat::diag(*c, p.iter().map(|&e| c.pi_pow(e - 1)).collect()))
        .collect();
    let module = Module { ring: ring.clone(), parts: m.parts.iter().map(|p| vec![1; p.len()]).collect() };
    let inclusion = ModMap { dom: module.clone(), cod: m.clone(), blocks };
    Socle { mu: m.mu(), module, inclusion }
}

/// `E(M)`: free of rank equal to the number of summands, via
/// `R/(pi^e) -> R, 1 -> pi^(m-e)`.
pub fn injective_envelope(m: &Module) -> (Module, ModMap) {
    let ring = &m.ring;
    let e = Module {
        ring: ring.clone(),
        parts: ring.components().iter().zip(&m.parts).map(|(c, p)| vec![c.m(); p.len()]).collect(),
    };
    let blocks = ring
        .components()
        .iter()
        .zip(&m.parts)
        .map(|(c, p)| Mat::diag(*c, p.iter().map(|&x| c.pi_pow(c.m() - x)).collect()))
        .collect();
    let emb = ModMap { dom: m.clone(), cod: e.clone(), blocks };
    (e, emb)
}

/// Classifies the cokernel of a presentation matrix (columns are relations)
/// by lifting to the ambient PID.
pub fn snf_classify(ring: &Ring, rows: usize, cols: usize, entries: &[Elem]) -> Result<Module> {
    if entries.len() != rows * cols {
        return Err(Error::DimensionMismatch(format!(
            "{} entries for a {rows}x{cols} presentation",
            entries.len()
        )));
    }
    let parts = ring
        .components()
        .iter()
        .enumerate()
        .map(|(c, cr)| {
            let mat = Mat::from_fn(*cr, rows, cols, |i, j| entries[i * cols + j].0[c].clone());
            pid::cokernel_invariants(&mat)
        })
        .collect();
    Module::new(ring.clone(), parts)
}

/// The same classification computed natively over the chain ring.
pub fn classify_presentation(ring: &Ring, rows: usize, cols: usize, entries: &[Elem]) -> Result<Module> {
    if entries.len() != rows * cols {
        return Err(Error::DimensionMismatch(format!(
            "{} entries for a {rows}x{cols} presentation",
            entries.len()
        )));
    }
    let parts = ring
        .components()
        .iter()
        .enumerate()
        .map(|(c, cr)| {
            let mat = Mat::from_fn(*cr, rows, cols, |i, j| entries[i * cols + j].0[c].clone());
            quot_nf(&vec![cr.m(); rows], &mat).0
        })
        .collect();
    Module::new(ring.clone(), parts)
}

/// `ker g / im f` for `A -f-> B -g-> C` with `g ∘ f = 0`.
#[derive(Clone, Debug)]
pub struct Homology {
    pub module: Module,
    /// `Z = ker g` and its inclusion into `B`.
    pub cycles: Sub,
    /// `Z -> H`.
    pub quotient: Quotient,
}

pub fn homology(f: &ModMap, g: &ModMap) -> Result<Homology> {
    if f.cod != g.dom {
        return Err(Error::DimensionMismatch("homology needs composable maps".into()));
    }
    if !g.compose(f)?.is_zero() {
        return Err(Error::NotSquareZero);
    }
    let cycles = g.kernel();
    let boundaries = cycles
        .inclusion
        .factor_through(f)?
        .expect("image of f lies in the kernel of g");
    let quotient = boundaries.cokernel();
    Ok(Homology { module: quotient.module.clone(), cycles, quotient })
}

impl Homology {
    /// The map `H -> H'` induced by `map : B -> B'`, where `self` and `other`
    /// are homology modules at `B` and `B'`.
    pub fn induced(&self, other: &Homology, map: &ModMap) -> Result<ModMap> {
        let ring = self.module.ring.clone();
        let mut blocks = Vec::new();
        for c in 0..ring.num_components() {
            let n = self.module.parts[c].len();
            let mut b = Mat::zeros(ring.component(c), other.module.parts[c].len(), n);
            for i in 0..n {
                let z = self.quotient.lift(c, i);
                let y = map.apply(&self.cycles.inclusion.apply(&z));
                let z2 = other
                    .cycles
                    .inclusion
                    .preimage(&y)
                    .ok_or(Error::NotIntertwining)?;
                let h = other.quotient.projection.apply(&z2);
                for (r, x) in h.parts[c].iter().enumerate() {
                    b.set(r, i, x.clone());
                }
            }
            blocks.push(b);
        }
        ModMap::new(self.module.clone(), other.module.clone(), blocks)
    }
}

/// `Hom(M, N) ≅ ⊕_{i,j} R/(pi^min(a_j, b_i))`, where basis element `(i, j)`
/// is the matrix unit scaled by `pi^max(b_i - a_j, 0)`.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub dom: Module,
    pub cod: Module,
    pub module: Module,
}

impl HomSpace {
    pub fn new(dom: &Module, cod: &Module) -> Result<Self> {
        if dom.ring != cod.ring {
            return Err(Error::RingMismatch);
        }
        let parts = dom
            .parts
            .iter()
            .zip(&cod.parts)
            .map(|(a, b)| b.iter().flat_map(|&bi| a.iter().map(move |&aj| aj.min(bi))).collect())
            .collect();
        Ok(HomSpace { dom: dom.clone(), cod: cod.clone(), module: Module { ring: dom.ring.clone(), parts } })
    }

    fn shift(&self, c: usize, i: usize, j: usize) -> u32 {
        self.cod.parts[c][i].saturating_sub(self.dom.parts[c][j])
    }

    pub fn to_map(&self, v: &ModElem) -> ModMap {
        let ring = &self.dom.ring;
        let blocks = (0..ring.num_components())
            .map(|c| {
                let cr = ring.component(c);
                let nd = self.dom.parts[c].len();
                Mat::from_fn(cr, self.cod.parts[c].len(), nd, |i, j| {
                    cr.mul_pi_pow(&v.parts[c][i * nd + j], self.shift(c, i, j))
                })
                .reduce_rows(&self.cod.parts[c])
            })
            .collect();
        ModMap { dom: self.dom.clone(), cod: self.cod.clone(), blocks }
    }

    pub fn coords(&self, f: &ModMap) -> ModElem {
        assert!(f.dom == self.dom && f.cod == self.cod, "map outside this Hom space");
        let ring = &self.dom.ring;
        let parts = (0..ring.num_components())
            .map(|c| {
                let cr = ring.component(c);
                let (nc, nd) = (self.cod.parts[c].len(), self.dom.parts[c].len());
                let mut out = Vec::with_capacity(nc * nd);
                for i in 0..nc {
                    for j in 0..nd {
                        let x = cr.shift_down(f.blocks[c].get(i, j), self.shift(c, i, j));
                        out.push(x);
                    }
                }
                out
            })
            .collect();
        self.module.reduce(&ModElem { parts })
    }

    pub fn generators(&self) -> Vec<ModMap> {
        let mut out = Vec::new();
        for c in 0..self.module.parts.len() {
            for k in 0..self.module.parts[c].len() {
                out.push(self.to_map(&self.module.basis_elem(c, k)));
            }
        }
        out
    }

    /// The linear map `Hom(M, N) -> Hom(M', N')`, `phi -> post ∘ phi ∘ pre`.
    pub fn transport(&self, target: &HomSpace, pre: &ModMap, post: &ModMap) -> Result<ModMap> {
        if pre.cod != self.dom || pre.dom != target.dom || post.dom != self.cod || post.cod != target.cod {
            return Err(Error::DimensionMismatch("transport maps do not match the Hom spaces".into()));
        }
        let ring = &self.dom.ring;
        let mut blocks = Vec::new();
        for c in 0..ring.num_components() {
            let cr = ring.component(c);
            let (nc, nd) = (self.cod.parts[c].len(), self.dom.parts[c].len());
            let (tc, td) = (target.cod.parts[c].len(), target.dom.parts[c].len());
            let mut b = Mat::zeros(cr, tc * td, nc * nd);
            for i in 0..nc {
                for j in 0..nd {
                    let t = cr.pi_pow(self.shift(c, i, j));
                    for k in 0..tc {
                        let left = cr.mul(post.blocks[c].get(k, i), &t);
                        if cr.is_zero(&left) {
                            continue;
                        }
                        for l in 0..td {
                            let entry = cr.reduce(&cr.mul(&left, pre.blocks[c].get(j, l)), target.cod.parts[c][k]);
                            let x = cr.shift_down(&entry, target.shift(c, k, l));
                            b.set(k * td + l, i * nd + j, x);
                        }
                    }
                }
            }
            blocks.push(b);
        }
        ModMap::new(self.module.clone(), target.module.clone(), blocks)
    }
}

/// `M ⊗ N ≅ ⊕_{i,j} R/(pi^min(a_i, b_j))` with basis `e_i ⊗ f_j` at index
/// `i * |N| + j`.
#[derive(Clone, Debug)]
pub struct TensorSpace {
    pub left: Module,
    pub right: Module,
    pub module: Module,
}

impl TensorSpace {
    pub fn new(left: &Module, right: &Module) -> Result<Self> {
        if left.ring != right.ring {
            return Err(Error::RingMismatch);
        }
        let parts = left
            .parts
            .iter()
            .zip(&right.parts)
            .map(|(a, b)| a.iter().flat_map(|&ai| b.iter().map(move |&bj| ai.min(bj))).collect())
            .collect();
        Ok(TensorSpace { left: left.clone(), right: right.clone(), module: Module { ring: left.ring.clone(), parts } })
    }

    /// `f ⊗ g`.
    pub fn map(&self, target: &TensorSpace, f: &ModMap, g: &ModMap) -> Result<ModMap> {
        if f.dom != self.left || g.dom != self.right || f.cod != target.left || g.cod != target.right {
            return Err(Error::DimensionMismatch("tensor factors do not match".into()));
        }
        let ring = &self.left.ring;
        let mut blocks = Vec::new();
        for c in 0..ring.num_components() {
            let cr = ring.component(c);
            let (na, nb) = (self.left.parts[c].len(), self.right.parts[c].len());
            let (ta, tb) = (target.left.parts[c].len(), target.right.parts[c].len());
            let b = Mat::from_fn(cr, ta * tb, na * nb, |row, col| {
                let (k, l) = (row / tb.max(1), row % tb.max(1));
                let (i, j) = (col / nb.max(1), col % nb.max(1));
                cr.mul(f.blocks[c].get(k, i), g.blocks[c].get(l, j))
            });
            blocks.push(b);
        }
        ModMap::new(self.module.clone(), target.module.clone(), blocks)
    }
}

/// `Hom(M, N)` as a module together with generating maps.
#[derive(Clone, Debug)]
pub struct HomBasis {
    pub module: Module,
    pub generators: Vec<ModMap>,
}

pub fn hom_basis(m: &Module, n: &Module) -> Result<HomBasis> {
    let h = HomSpace::new(m, n)?;
    Ok(HomBasis { generators: h.generators(), module: h.module })
}

/// Both module-level bifunctors with the structure needed to transport maps.
pub fn bifunctors_tensor_hom(m: &Module, n: &Module) -> Result<(TensorSpace, HomSpace)> {
    Ok((TensorSpace::new(m, n)?, HomSpace::new(m, n)?))
}

#[derive(Serialize, Deserialize)]
struct ModuleDoc {
    ring: Ring,
    invariants: Vec<Vec<u32>>,
}

impl Serialize for Module {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ModuleDoc { ring: self.ring.clone(), invariants: self.parts.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Module {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = ModuleDoc::deserialize(d)?;
        Module::new(doc.ring, doc.invariants).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct ModMapDoc {
    dom: Module,
    cod: Module,
    matrix: Vec<Vec<String>>,
}

impl Serialize for ModMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ModMapDoc { dom: self.dom.clone(), cod: self.cod.clone(), matrix: self.global_matrix() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ModMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = ModMapDoc::deserialize(d)?;
        ModMap::from_global_matrix(&doc.dom, &doc.cod, &doc.matrix).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z4() -> Ring {
        Ring::parse("Z/4").unwrap()
    }

    fn m(r: &Ring, e: &[u32]) -> Module {
        Module::local(r, e).unwrap()
    }

    #[test]
    fn snf_classify_examples() {
        let r = z4();
        let e = |xs: &[i64]| xs.iter().map(|&x| r.from_int(x)).collect::<Vec<_>>();
        assert_eq!(snf_classify(&r, 1, 1, &e(&[2])).unwrap(), m(&r, &[1]));
        assert_eq!(snf_classify(&r, 1, 1, &e(&[0])).unwrap(), m(&r, &[2]));
        assert_eq!(snf_classify(&r, 2, 2, &e(&[2, 0, 0, 1])).unwrap(), m(&r, &[1]));
        assert!(snf_classify(&r, 2, 2, &e(&[2, 0, 0])).is_err());
        assert_eq!(classify_presentation(&r, 2, 2, &e(&[2, 0, 0, 1])).unwrap(), m(&r, &[1]));
    }

    #[test]
    fn well_definedness_is_enforced() {
        let r = z4();
        let (a, b) = (m(&r, &[1]), m(&r, &[2]));
        assert!(ModMap::from_ints(&a, &b, &[&[1]]).is_err());
        assert!(ModMap::from_ints(&a, &b, &[&[2]]).is_ok());
        // reduction modulo the codomain order
        let f = ModMap::from_ints(&b, &a, &[&[3]]).unwrap();
        assert_eq!(f, ModMap::from_ints(&b, &a, &[&[1]]).unwrap());
    }

    #[test]
    fn hom_examples() {
        let r = z4();
        let h = hom_basis(&m(&r, &[1]), &m(&r, &[2])).unwrap();
        assert_eq!(h.module, m(&r, &[1]));
        assert_eq!(h.generators[0], ModMap::from_ints(&m(&r, &[1]), &m(&r, &[2]), &[&[2]]).unwrap());

        let h = hom_basis(&m(&r, &[2]), &m(&r, &[2])).unwrap();
        assert_eq!(h.module, m(&r, &[2]));
        assert_eq!(h.generators[0], ModMap::identity(&m(&r, &[2])));

        let h = hom_basis(&m(&r, &[1]), &m(&r, &[1, 2])).unwrap();
        assert_eq!(h.module.canonical(), m(&r, &[1, 1]));
    }

    #[test]
    fn subquotient_examples() {
        let r = z4();
        let x = m(&r, &[2]);
        let two = ModMap::from_ints(&x, &x, &[&[2]]).unwrap();
        let sq = two.subquotients();
        assert_eq!(sq.ker.module, m(&r, &[1]));
        assert_eq!(sq.im.module, m(&r, &[1]));
        assert_eq!(sq.coker.module, m(&r, &[1]));

        let big = m(&r, &[2, 1]);
        let id = ModMap::identity(&big).subquotients();
        assert!(id.ker.module.is_zero());
        assert_eq!(id.im.module, big);
        assert!(id.coker.module.is_zero());

        let n = m(&r, &[1]);
        let zero = ModMap::zero(&big, &n).subquotients();
        assert_eq!(zero.ker.module, big);
        assert!(zero.im.module.is_zero());
        assert_eq!(zero.coker.module, n);
    }

    #[test]
    fn socle_examples() {
        let r = z4();
        let s = socle(&m(&r, &[2]));
        assert_eq!(s.module, m(&r, &[1]));
        assert_eq!(s.mu, vec![1]);
        assert_eq!(s.inclusion.block(0).get(0, 0), &r.component(0).from_int(2));
        assert_eq!(socle(&m(&r, &[1, 2])).mu, vec![2]);
        assert_eq!(socle(&Module::zero(&r)).mu, vec![0]);
    }

    #[test]
    fn envelope_examples() {
        let r = z4();
        let (e, emb) = injective_envelope(&m(&r, &[1]));
        assert_eq!(e, m(&r, &[2]));
        assert_eq!(emb, ModMap::from_ints(&m(&r, &[1]), &e, &[&[2]]).unwrap());
        assert!(Submodule::image_of(&emb).is_essential());

        let (e, emb) = injective_envelope(&m(&r, &[2]));
        assert_eq!(emb, ModMap::identity(&e));

        let src = m(&r, &[1, 2]);
        let (e, emb) = injective_envelope(&src);
        assert_eq!(e, Module::free(&r, 2));
        assert_eq!(emb, ModMap::from_ints(&src, &e, &[&[2, 0], &[0, 1]]).unwrap());
        assert!(emb.is_injective());
        assert!(Submodule::image_of(&emb).is_essential());
    }

    #[test]
    fn essential_examples() {
        let r = z4();
        let x = m(&r, &[2]);
        let two = Submodule::new(&x, &[ModElem { parts: vec![vec![r.component(0).from_int(2)]] }]).unwrap();
        assert!(two.is_essential());
        let y = m(&r, &[1, 1]);
        assert!(!Submodule::new(&y, &[y.basis_elem(0, 0)]).unwrap().is_essential());
        assert!(Submodule::whole(&y).is_essential());
    }

    #[test]
    fn tensor_examples() {
        let r = z4();
        let (t, h) = bifunctors_tensor_hom(&m(&r, &[1]), &m(&r, &[1])).unwrap();
        assert_eq!(t.module, m(&r, &[1]));
        assert_eq!(h.module, m(&r, &[1]));
        let n = m(&r, &[2, 1]);
        let (t, h) = bifunctors_tensor_hom(&Module::free(&r, 1), &n).unwrap();
        assert_eq!(t.module, n);
        assert_eq!(h.module, n);
        let (_, h) = bifunctors_tensor_hom(&m(&r, &[1]), &m(&r, &[2])).unwrap();
        assert_eq!(h.module, m(&r, &[1]));
    }

    #[test]
    fn homology_of_two_on_z4() {
        let r = z4();
        let x = m(&r, &[2]);
        let two = ModMap::from_ints(&x, &x, &[&[2]]).unwrap();
        assert!(homology(&two, &two).unwrap().module.is_zero());
        let zero = ModMap::zero(&x, &x);
        assert_eq!(homology(&zero, &zero).unwrap().module, x);
        assert!(homology(&ModMap::identity(&x), &ModMap::identity(&x)).is_err());
    }

    #[test]
    fn product_ring_modules() {
        let r = Ring::parse("Z/12").unwrap();
        let mm = Module::parse_literal(&r, "[[2,1],[1]]").unwrap();
        assert_eq!(mm.cardinality(), Some(8 * 3));
        let six = ModMap::scalar(&mm, &r.from_int(6));
        let sq = six.subquotients();
        assert_eq!(sq.ker.module.length() + sq.im.module.length(), mm.length());
        let js = serde_json::to_string(&six).unwrap();
        let back: ModMap = serde_json::from_str(&js).unwrap();
        assert_eq!(back, six);
    }

    #[test]
    fn json_shapes() {
        let r = z4();
        let f = ModMap::from_ints(&m(&r, &[1]), &m(&r, &[2]), &[&[2]]).unwrap();
        let js = serde_json::to_value(&f).unwrap();
        assert_eq!(js["matrix"], serde_json::json!([["2"]]));
        assert_eq!(js["dom"]["invariants"], serde_json::json!([[1]]));
    }
}
