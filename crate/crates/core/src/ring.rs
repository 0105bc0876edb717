//! Arithmetic in commutative Artinian chain rings `Z/p^m`, `F_p[x]/(x^m)`,
//! `Q[x]/(x^m)` and finite products of them.
//!
//! Every element of a chain ring factors as `unit * pi^v`; the valuation `v`
//! of zero is reported as `m`. Representatives are always canonical (least
//! nonnegative residue, or a coefficient vector of length `m`), so equality
//! of elements is structural equality.

use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Moduli above this bound are rejected so that products fit in `u128`.
const MAX_MODULUS: u64 = 1 << 62;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Base {
    /// `Z/p^m`, uniformizer `p`.
    Integers { p: u64 },
    /// `F_p[x]/(x^m)`, uniformizer `x`.
    PrimeField { p: u64 },
    /// `Q[x]/(x^m)`, uniformizer `x`.
    Rationals,
}

/// One local factor: a commutative Artinian chain ring of length `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ChainRing {
    base: Base,
    m: u32,
    /// `p^m` for `Z/p^m`, unused otherwise.
    modulus: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChainElem {
    Int(u64),
    Fp(Vec<u64>),
    Q(Vec<BigRational>),
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn checked_pow(p: u64, e: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..e {
        acc = acc.checked_mul(p)?;
    }
    Some(acc)
}

fn inv_mod(a: u64, n: u64) -> Option<u64> {
    let (mut r0, mut r1) = (n as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(n as i128) as u64)
}

impl ChainRing {
    pub fn integers(p: u64, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidRing("length m must be positive".into()));
        }
        if !is_prime(p) {
            return Err(Error::InvalidRing(format!("{p} is not prime")));
        }
        let modulus = checked_pow(p, m)
            .filter(|&q| q <= MAX_MODULUS)
            .ok_or_else(|| Error::InvalidRing(format!("{p}^{m} is too large")))?;
        Ok(ChainRing { base: Base::Integers { p }, m, modulus })
    }

    pub fn prime_field_poly(p: u64, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidRing("length m must be positive".into()));
        }
        if !is_prime(p) || p > u32::MAX as u64 {
            return Err(Error::InvalidRing(format!("unsupported prime field F{p}")));
        }
        Ok(ChainRing { base: Base::PrimeField { p }, m, modulus: 0 })
    }

    pub fn rational_poly(m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidRing("length m must be positive".into()));
        }
        Ok(ChainRing { base: Base::Rationals, m, modulus: 0 })
    }

    pub fn base(&self) -> Base {
        self.base
    }

    /// Nilpotency index of the maximal ideal: `pi^m = 0`, `pi^(m-1) != 0`.
    pub fn m(&self) -> u32 {
        self.m
    }

    /// Characteristic prime of the residue field, `None` over `Q`.
    pub fn prime(&self) -> Option<u64> {
        match self.base {
            Base::Integers { p } | Base::PrimeField { p } => Some(p),
            Base::Rationals => None,
        }
    }

    /// Size of the residue field `k = R/(pi)`.
    pub fn residue_size(&self) -> Option<u64> {
        self.prime()
    }

    pub fn is_finite(&self) -> bool {
        self.prime().is_some()
    }

    /// `|R/(pi^e)|` for finite rings.
    pub fn quotient_size(&self, e: u32) -> Option<u128> {
        let p = self.prime()? as u128;
        let mut acc: u128 = 1;
        for _ in 0..e {
            acc = acc.checked_mul(p)?;
        }
        Some(acc)
    }

    pub fn uniformizer_symbol(&self) -> &'static str {
        match self.base {
            Base::Integers { .. } => "p",
            _ => "x",
        }
    }

    pub fn descriptor(&self) -> String {
        match self.base {
            Base::Integers { .. } => format!("Z/{}", self.modulus),
            Base::PrimeField { p } => format!("F{p}[x]/(x^{})", self.m),
            Base::Rationals => format!("Q[x]/(x^{})", self.m),
        }
    }

    pub fn zero(&self) -> ChainElem {
        match self.base {
            Base::Integers { .. } => ChainElem::Int(0),
            Base::PrimeField { .. } => ChainElem::Fp(vec![0; self.m as usize]),
            Base::Rationals => ChainElem::Q(vec![BigRational::zero(); self.m as usize]),
        }
    }

    pub fn one(&self) -> ChainElem {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> ChainElem {
        match self.base {
            Base::Integers { .. } => {
                ChainElem::Int((n as i128).rem_euclid(self.modulus as i128) as u64)
            }
            Base::PrimeField { p } => {
                let mut c = vec![0; self.m as usize];
                c[0] = (n as i128).rem_euclid(p as i128) as u64;
                ChainElem::Fp(c)
            }
            Base::Rationals => {
                let mut c = vec![BigRational::zero(); self.m as usize];
                c[0] = BigRational::from_integer(BigInt::from(n));
                ChainElem::Q(c)
            }
        }
    }

    /// `pi^v`, which is zero for `v >= m`.
    pub fn pi_pow(&self, v: u32) -> ChainElem {
        if v >= self.m {
            return self.zero();
        }
        match self.base {
            Base::Integers { p } => ChainElem::Int(p.pow(v)),
            Base::PrimeField { .. } => {
                let mut c = vec![0; self.m as usize];
                c[v as usize] = 1;
                ChainElem::Fp(c)
            }
            Base::Rationals => {
                let mut c = vec![BigRational::zero(); self.m as usize];
                c[v as usize] = BigRational::one();
                ChainElem::Q(c)
            }
        }
    }

    pub fn add(&self, a: &ChainElem, b: &ChainElem) -> ChainElem {
        match (a, b) {
            (ChainElem::Int(x), ChainElem::Int(y)) => {
                ChainElem::Int(((*x as u128 + *y as u128) % self.modulus as u128) as u64)
            }
            (ChainElem::Fp(x), ChainElem::Fp(y)) => {
                let p = self.prime().unwrap();
                ChainElem::Fp(x.iter().zip(y).map(|(s, t)| (s + t) % p).collect())
            }
            (ChainElem::Q(x), ChainElem::Q(y)) => {
                ChainElem::Q(x.iter().zip(y).map(|(s, t)| s + t).collect())
            }
            _ => panic!("mixed element kinds"),
        }
    }

    pub fn neg(&self, a: &ChainElem) -> ChainElem {
        match a {
            ChainElem::Int(x) => ChainElem::Int((self.modulus - x) % self.modulus),
            ChainElem::Fp(x) => {
                let p = self.prime().unwrap();
                ChainElem::Fp(x.iter().map(|s| (p - s) % p).collect())
            }
            ChainElem::Q(x) => ChainElem::Q(x.iter().map(|s| -s).collect()),
        }
    }

    pub fn sub(&self, a: &ChainElem, b: &ChainElem) -> ChainElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &ChainElem, b: &ChainElem) -> ChainElem {
        let m = self.m as usize;
        match (a, b) {
            (ChainElem::Int(x), ChainElem::Int(y)) => {
                ChainElem::Int(((*x as u128 * *y as u128) % self.modulus as u128) as u64)
            }
            (ChainElem::Fp(x), ChainElem::Fp(y)) => {
                let p = self.prime().unwrap() as u128;
                let mut out = vec![0u128; m];
                for (i, &s) in x.iter().enumerate().filter(|(_, s)| **s != 0) {
                    for (j, &t) in y.iter().enumerate().take(m - i) {
                        out[i + j] = (out[i + j] + s as u128 * t as u128) % p;
                    }
                }
                ChainElem::Fp(out.into_iter().map(|c| c as u64).collect())
            }
            (ChainElem::Q(x), ChainElem::Q(y)) => {
                let mut out = vec![BigRational::zero(); m];
                for (i, s) in x.iter().enumerate().filter(|(_, s)| !s.is_zero()) {
                    for (j, t) in y.iter().enumerate().take(m - i) {
                        out[i + j] += s * t;
                    }
                }
                ChainElem::Q(out)
            }
            _ => panic!("mixed element kinds"),
        }
    }

    pub fn is_zero(&self, a: &ChainElem) -> bool {
        match a {
            ChainElem::Int(x) => *x == 0,
            ChainElem::Fp(x) => x.iter().all(|c| *c == 0),
            ChainElem::Q(x) => x.iter().all(|c| c.is_zero()),
        }
    }

    /// Largest `v` with `a` in `(pi^v)`; `m` for zero.
    pub fn valuation(&self, a: &ChainElem) -> u32 {
        match a {
            ChainElem::Int(x) => {
                if *x == 0 {
                    return self.m;
                }
                let p = self.prime().unwrap();
                let (mut x, mut v) = (*x, 0);
                while x % p == 0 {
                    x /= p;
                    v += 1;
                }
                v
            }
            ChainElem::Fp(x) => x.iter().position(|c| *c != 0).map_or(self.m, |i| i as u32),
            ChainElem::Q(x) => x.iter().position(|c| !c.is_zero()).map_or(self.m, |i| i as u32),
        }
    }

    pub fn is_unit(&self, a: &ChainElem) -> bool {
        self.valuation(a) == 0
    }

    pub fn inverse(&self, a: &ChainElem) -> Option<ChainElem> {
        if !self.is_unit(a) {
            return None;
        }
        let m = self.m as usize;
        Some(match a {
            ChainElem::Int(x) => ChainElem::Int(inv_mod(*x, self.modulus)?),
            ChainElem::Fp(x) => {
                let p = self.prime().unwrap();
                let c0 = inv_mod(x[0], p)?;
                let mut out = vec![0u64; m];
                out[0] = c0;
                for k in 1..m {
                    let mut s: u128 = 0;
                    for i in 1..=k {
                        s = (s + x[i] as u128 * out[k - i] as u128) % p as u128;
                    }
                    let neg = (p as u128 - s) % p as u128;
                    out[k] = (neg * c0 as u128 % p as u128) as u64;
                }
                ChainElem::Fp(out)
            }
            ChainElem::Q(x) => {
                let c0 = x[0].recip();
                let mut out = vec![BigRational::zero(); m];
                out[0] = c0.clone();
                for k in 1..m {
                    let mut s = BigRational::zero();
                    for i in 1..=k {
                        s += &x[i] * &out[k - i];
                    }
                    out[k] = -(s * &c0);
                }
                ChainElem::Q(out)
            }
        })
    }

    /// Canonical representative of `a` modulo `pi^e`.
    pub fn reduce(&self, a: &ChainElem, e: u32) -> ChainElem {
        if e >= self.m {
            return a.clone();
        }
        match a {
            ChainElem::Int(x) => ChainElem::Int(x % self.prime().unwrap().pow(e)),
            ChainElem::Fp(x) => {
                let mut c = x.clone();
                c[e as usize..].iter_mut().for_each(|t| *t = 0);
                ChainElem::Fp(c)
            }
            ChainElem::Q(x) => {
                let mut c = x.clone();
                c[e as usize..].iter_mut().for_each(|t| *t = BigRational::zero());
                ChainElem::Q(c)
            }
        }
    }

    /// Some `b` with `pi^v * b = a`; requires `valuation(a) >= v`.
    pub fn shift_down(&self, a: &ChainElem, v: u32) -> ChainElem {
        debug_assert!(self.valuation(a) >= v);
        if v == 0 {
            return a.clone();
        }
        if v >= self.m {
            return self.zero();
        }
        let v = v as usize;
        match a {
            ChainElem::Int(x) => ChainElem::Int(x / self.prime().unwrap().pow(v as u32)),
            ChainElem::Fp(x) => {
                let mut c = x[v..].to_vec();
                c.resize(x.len(), 0);
                ChainElem::Fp(c)
            }
            ChainElem::Q(x) => {
                let mut c = x[v..].to_vec();
                c.resize(x.len(), BigRational::zero());
                ChainElem::Q(c)
            }
        }
    }

    pub fn mul_pi_pow(&self, a: &ChainElem, v: u32) -> ChainElem {
        self.mul(a, &self.pi_pow(v))
    }

    /// A solution `c` of `c * b = a`, when one exists.
    pub fn div_exact(&self, a: &ChainElem, b: &ChainElem) -> Option<ChainElem> {
        let (va, vb) = (self.valuation(a), self.valuation(b));
        if va < vb {
            return None;
        }
        if va >= self.m {
            return Some(self.zero());
        }
        let unit = self.shift_down(b, vb);
        let inv = self.inverse(&unit).expect("unit part is invertible");
        Some(self.mul(&self.shift_down(a, vb), &inv))
    }

    /// Every element of `R/(pi^e)` as canonical representatives; `None` over `Q`.
    pub fn residues(&self, e: u32) -> Option<Vec<ChainElem>> {
        let e = e.min(self.m);
        match self.base {
            Base::Integers { p } => Some((0..p.pow(e)).map(ChainElem::Int).collect()),
            Base::PrimeField { p } => {
                let total = p.checked_pow(e)?;
                Some(
                    (0..total)
                        .map(|mut idx| {
                            let mut c = vec![0u64; self.m as usize];
                            for slot in c.iter_mut().take(e as usize) {
                                *slot = idx % p;
                                idx /= p;
                            }
                            ChainElem::Fp(c)
                        })
                        .collect(),
                )
            }
            Base::Rationals => None,
        }
    }

    pub fn elements(&self) -> Option<Vec<ChainElem>> {
        self.residues(self.m)
    }

    /// Uniform over finite rings; small-height rationals over `Q`.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> ChainElem {
        match self.base {
            Base::Integers { .. } => ChainElem::Int(rng.gen_range(0..self.modulus)),
            Base::PrimeField { p } => {
                ChainElem::Fp((0..self.m).map(|_| rng.gen_range(0..p)).collect())
            }
            Base::Rationals => ChainElem::Q(
                (0..self.m)
                    .map(|_| {
                        let num: i64 = rng.gen_range(-3..=3);
                        let den: i64 = rng.gen_range(1..=2);
                        BigRational::new(num.into(), den.into())
                    })
                    .collect(),
            ),
        }
    }

    pub fn random_unit<R: Rng + ?Sized>(&self, rng: &mut R) -> ChainElem {
        loop {
            let a = self.random(rng);
            if self.is_unit(&a) {
                return a;
            }
        }
    }

    pub fn format(&self, a: &ChainElem) -> String {
        match a {
            ChainElem::Int(x) => x.to_string(),
            ChainElem::Fp(c) => format_poly(c.iter().map(|x| BigRational::from_integer((*x).into()))),
            ChainElem::Q(c) => format_poly(c.iter().cloned()),
        }
    }

    pub fn parse_elem(&self, s: &str) -> Result<ChainElem> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty element".into()));
        }
        match self.base {
            Base::Integers { .. } => {
                let n: i128 = s
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad integer element `{s}`")))?;
                Ok(ChainElem::Int(n.rem_euclid(self.modulus as i128) as u64))
            }
            Base::PrimeField { p } => {
                let mut c = vec![0u64; self.m as usize];
                for (deg, coef) in parse_poly(&s)? {
                    if !coef.is_integer() {
                        return Err(Error::Parse(format!("non-integral coefficient in `{s}`")));
                    }
                    if (deg as u32) < self.m {
                        let r = coef.to_integer() % BigInt::from(p);
                        let r = if r.is_negative() { r + BigInt::from(p) } else { r };
                        let r: u64 = r.try_into().unwrap();
                        c[deg] = (c[deg] + r) % p;
                    }
                }
                Ok(ChainElem::Fp(c))
            }
            Base::Rationals => {
                let mut c = vec![BigRational::zero(); self.m as usize];
                for (deg, coef) in parse_poly(&s)? {
                    if (deg as u32) < self.m {
                        c[deg] += coef;
                    }
                }
                Ok(ChainElem::Q(c))
            }
        }
    }
}

fn format_poly(coeffs: impl Iterator<Item = BigRational>) -> String {
    let mut terms = Vec::new();
    for (k, c) in coeffs.enumerate() {
        if c.is_zero() {
            continue;
        }
        let mono = match k {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{k}"),
        };
        if k == 0 {
            terms.push(c.to_string());
        } else if c.is_one() {
            terms.push(mono);
        } else if c.is_integer() && c.is_positive() {
            terms.push(format!("{c}{mono}"));
        } else {
            terms.push(format!("({c}){mono}"));
        }
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad coefficient `{s}`"));
    let s = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(s);
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().map_err(|_| bad())?;
            let d: BigInt = d.parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Splits `c0+c1x+(c2)x^2+...` into `(degree, coefficient)` terms.
fn parse_poly(s: &str) -> Result<Vec<(usize, BigRational)>> {
    let mut terms = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let bytes = s.as_bytes();
    let mut pieces = Vec::new();
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' if depth == 0 => {
                pieces.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    pieces.push(&s[start..]);
    for piece in pieces {
        if piece.is_empty() {
            return Err(Error::Parse(format!("empty term in `{s}`")));
        }
        match piece.rfind('x') {
            Some(pos) => {
                let (coef, rest) = (&piece[..pos], &piece[pos + 1..]);
                let deg = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^')
                        .and_then(|t| t.parse::<usize>().ok())
                        .ok_or_else(|| Error::Parse(format!("bad exponent in `{piece}`")))?
                };
                let coef = match coef {
                    "" => BigRational::one(),
                    "-" => -BigRational::one(),
                    c => parse_rational(c)?,
                };
                terms.push((deg, coef));
            }
            None => terms.push((0, parse_rational(piece)?)),
        }
    }
    Ok(terms)
}

/// Prime-power factorization of `n` as chain components `Z/p^e`.
pub fn crt_split(n: u64) -> Result<Vec<ChainRing>> {
    if n < 2 {
        return Err(Error::InvalidRing(format!("modulus {n} must be at least 2")));
    }
    let mut out = Vec::new();
    let mut rest = n;
    let mut p = 2u64;
    while p.saturating_mul(p) <= rest {
        if rest % p == 0 {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            out.push(ChainRing::integers(p, e)?);
        }
        p += 1;
    }
    if rest > 1 {
        out.push(ChainRing::integers(rest, 1)?);
    }
    Ok(out)
}

/// A finite product of chain rings. Products only arise from `Z/n` with
/// composite, non-prime-power `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    components: Vec<ChainRing>,
}

/// An element of a product ring, one canonical representative per factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Elem(pub Vec<ChainElem>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElemSummary {
    pub sum: Elem,
    pub product: Elem,
    pub is_unit: bool,
    pub valuation: Vec<u32>,
}

impl Ring {
    pub fn local(c: ChainRing) -> Self {
        Ring { components: vec![c] }
    }

    pub fn from_components(components: Vec<ChainRing>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidRing("a ring needs at least one component".into()));
        }
        Ok(Ring { components })
    }

    /// Parses `Z/<n>`, `F<p>[x]/(x^<m>)` or `Q[x]/(x^<m>)`, splitting
    /// composite moduli into chain factors.
    pub fn parse(desc: &str) -> Result<Self> {
        Self::parse_with(desc, true)
    }

    /// Like [`Ring::parse`], but only splits a non-prime-power modulus when
    /// `allow_crt` is set.
    pub fn parse_with(desc: &str, allow_crt: bool) -> Result<Self> {
        let parts: Vec<&str> = desc.split(" x ").flat_map(|p| p.split('×')).map(str::trim).collect();
        if parts.len() > 1 {
            let mut comps = Vec::new();
            for part in parts {
                comps.extend(Ring::parse_with(part, allow_crt)?.components);
            }
            return Ring::from_components(comps);
        }
        let d: String = desc.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("unrecognized ring descriptor `{desc}`"));
        if let Some(n) = d.strip_prefix("Z/") {
            let n: u64 = n.parse().map_err(|_| bad())?;
            let comps = crt_split(n)?;
            if comps.len() > 1 && !allow_crt {
                return Err(Error::InvalidRing(format!(
                    "{n} is not a prime power (enable CRT splitting)"
                )));
            }
            return Ring::from_components(comps);
        }
        let (head, tail) = d.split_once("[x]/(x^").ok_or_else(bad)?;
        let m: u32 = tail.strip_suffix(')').ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let c = if head == "Q" {
            ChainRing::rational_poly(m)?
        } else if let Some(p) = head.strip_prefix('F') {
            let p: u64 = p.parse().map_err(|_| bad())?;
            ChainRing::prime_field_poly(p, m)?
        } else {
            return Err(Error::InvalidRing(format!("unsupported base `{head}`")));
        };
        Ok(Ring::local(c))
    }

    pub fn components(&self) -> &[ChainRing] {
        &self.components
    }

    pub fn component(&self, i: usize) -> ChainRing {
        self.components[i]
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    pub fn is_local(&self) -> bool {
        self.components.len() == 1
    }

    pub fn is_finite(&self) -> bool {
        self.components.iter().all(ChainRing::is_finite)
    }

    pub fn order(&self) -> Option<u128> {
        self.components
            .iter()
            .try_fold(1u128, |acc, c| acc.checked_mul(c.quotient_size(c.m())?))
    }

    pub fn descriptor(&self) -> String {
        self.components.iter().map(ChainRing::descriptor).collect::<Vec<_>>().join(" x ")
    }

    pub fn zero(&self) -> Elem {
        Elem(self.components.iter().map(ChainRing::zero).collect())
    }

    pub fn one(&self) -> Elem {
        Elem(self.components.iter().map(ChainRing::one).collect())
    }

    pub fn from_int(&self, n: i64) -> Elem {
        Elem(self.components.iter().map(|c| c.from_int(n)).collect())
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        Elem(self.components.iter().zip(&a.0).zip(&b.0).map(|((c, x), y)| c.add(x, y)).collect())
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        Elem(self.components.iter().zip(&a.0).zip(&b.0).map(|((c, x), y)| c.mul(x, y)).collect())
    }

    pub fn valuation(&self, a: &Elem) -> Vec<u32> {
        self.components.iter().zip(&a.0).map(|(c, x)| c.valuation(x)).collect()
    }

    pub fn is_unit(&self, a: &Elem) -> bool {
        self.components.iter().zip(&a.0).all(|(c, x)| c.is_unit(x))
    }

    pub fn elem_ops(&self, a: &Elem, b: &Elem) -> ElemSummary {
        ElemSummary {
            sum: self.add(a, b),
            product: self.mul(a, b),
            is_unit: self.is_unit(a),
            valuation: self.valuation(a),
        }
    }

    pub fn format_elem(&self, a: &Elem) -> String {
        if self.is_local() {
            return self.components[0].format(&a.0[0]);
        }
        let parts: Vec<String> =
            self.components.iter().zip(&a.0).map(|(c, x)| c.format(x)).collect();
        format!("({})", parts.join(","))
    }

    pub fn parse_elem(&self, s: &str) -> Result<Elem> {
        if self.is_local() {
            return Ok(Elem(vec![self.components[0].parse_elem(s)?]));
        }
        let t = s.trim();
        // a bare integer is mapped diagonally
        if let Ok(n) = t.parse::<i64>() {
            return Ok(self.from_int(n));
        }
        let inner = t
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("bad product element `{s}`")))?;
        let parts: Vec<&str> = inner.split(',').collect();
        if parts.len() != self.components.len() {
            return Err(Error::Parse(format!("expected {} coordinates in `{s}`", self.components.len())));
        }
        Ok(Elem(
            self.components.iter().zip(parts).map(|(c, p)| c.parse_elem(p)).collect::<Result<_>>()?,
        ))
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor())
    }
}

#[derive(Serialize, Deserialize)]
struct ComponentDoc {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    p: Option<u64>,
    m: u32,
}

impl Serialize for ChainRing {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let (kind, p) = match self.base {
            Base::Integers { p } => ("Z/p^m", Some(p)),
            Base::PrimeField { p } => ("F_p[x]/(x^m)", Some(p)),
            Base::Rationals => ("Q[x]/(x^m)", None),
        };
        ComponentDoc { kind: kind.into(), p, m: self.m }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ChainRing {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = ComponentDoc::deserialize(d)?;
        let need_p = || doc.p.ok_or_else(|| D::Error::custom("missing prime `p`"));
        let r = match doc.kind.as_str() {
            "Z/p^m" => ChainRing::integers(need_p()?, doc.m),
            "F_p[x]/(x^m)" => ChainRing::prime_field_poly(need_p()?, doc.m),
            "Q[x]/(x^m)" => ChainRing::rational_poly(doc.m),
            other => return Err(D::Error::custom(format!("unknown ring kind `{other}`"))),
        };
        r.map_err(D::Error::custom)
    }
}

impl Serialize for Ring {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.components.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Ring {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let comps = Vec::<ChainRing>::deserialize(d)?;
        Ring::from_components(comps).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64) -> Ring {
        Ring::parse(&format!("Z/{n}")).unwrap()
    }

    #[test]
    fn parses_descriptors() {
        let r = z(4);
        assert!(r.is_local());
        let c = r.component(0);
        assert_eq!(c.base(), Base::Integers { p: 2 });
        assert_eq!(c.m(), 2);
        assert_eq!(c.format(&c.pi_pow(1)), "2");

        let dual = Ring::parse("F2[x]/(x^2)").unwrap().component(0);
        assert_eq!(dual.base(), Base::PrimeField { p: 2 });
        assert_eq!(dual.m(), 2);
        assert_eq!(dual.format(&dual.pi_pow(1)), "x");

        let q = Ring::parse("Q[x]/(x^3)").unwrap();
        assert_eq!(q.component(0).m(), 3);
    }

    #[test]
    fn rejects_bad_descriptors() {
        assert!(Ring::parse("F2[x]/(x^0)").is_err());
        assert!(Ring::parse("F4[x]/(x^2)").is_err());
        assert!(Ring::parse("R[x]/(x^2)").is_err());
        assert!(Ring::parse("Z/1").is_err());
        assert!(Ring::parse_with("Z/12", false).is_err());
        assert!(Ring::parse_with("Z/8", false).is_ok());
    }

    #[test]
    fn crt_split_factors() {
        let descs = |n| crt_split(n).unwrap().iter().map(|c| (c.prime().unwrap(), c.m())).collect::<Vec<_>>();
        assert_eq!(descs(4), vec![(2, 2)]);
        assert_eq!(descs(12), vec![(2, 2), (3, 1)]);
        assert_eq!(descs(30), vec![(2, 1), (3, 1), (5, 1)]);
        assert!(crt_split(1).is_err());
    }

    #[test]
    fn z12_arithmetic_matches_direct() {
        let r = z(12);
        assert_eq!(r.num_components(), 2);
        for a in 0..12i64 {
            for b in 0..12i64 {
                let (ea, eb) = (r.from_int(a), r.from_int(b));
                assert_eq!(r.add(&ea, &eb), r.from_int((a + b) % 12));
                assert_eq!(r.mul(&ea, &eb), r.from_int((a * b) % 12));
            }
        }
    }

    #[test]
    fn elem_examples() {
        let r = z(4);
        let two = r.from_int(2);
        let three = r.from_int(3);
        let s = r.elem_ops(&two, &three);
        assert_eq!(s.valuation, vec![1]);
        assert!(!s.is_unit);
        let s = r.elem_ops(&three, &two);
        assert_eq!(s.valuation, vec![0]);
        assert!(s.is_unit);

        let dual = Ring::parse("F2[x]/(x^2)").unwrap();
        let a = dual.parse_elem("1+x").unwrap();
        assert_eq!(dual.mul(&a, &a), dual.one());
        assert_eq!(dual.valuation(&dual.zero()), vec![2]);
    }

    #[test]
    fn element_strings_round_trip() {
        let q = ChainRing::rational_poly(4).unwrap();
        for s in ["0", "1+x", "-1/2+(3/4)x^2", "(-2)x^3", "x+2x^2", "7"] {
            let e = q.parse_elem(s).unwrap();
            assert_eq!(q.format(&e), s);
        }
        let f3 = ChainRing::prime_field_poly(3, 3).unwrap();
        let e = f3.parse_elem("2+x+2x^2").unwrap();
        assert_eq!(f3.format(&e), "2+x+2x^2");
        assert_eq!(f3.parse_elem("4x").unwrap(), f3.parse_elem("x").unwrap());
    }

    #[test]
    fn inverses_and_division() {
        for r in [
            ChainRing::integers(2, 3).unwrap(),
            ChainRing::integers(3, 2).unwrap(),
            ChainRing::prime_field_poly(3, 3).unwrap(),
        ] {
            let all = r.elements().unwrap();
            for a in &all {
                match r.inverse(a) {
                    Some(b) => assert_eq!(r.mul(a, &b), r.one()),
                    None => assert!(!all.iter().any(|b| r.mul(a, b) == r.one())),
                }
                for b in &all {
                    if let Some(c) = r.div_exact(a, b) {
                        assert_eq!(r.mul(&c, b), *a);
                    } else {
                        assert!(r.valuation(a) < r.valuation(b));
                    }
                }
            }
        }
    }

    #[test]
    fn rational_inverse() {
        let q = ChainRing::rational_poly(3).unwrap();
        let a = q.parse_elem("2+x+(1/3)x^2").unwrap();
        let b = q.inverse(&a).unwrap();
        assert_eq!(q.mul(&a, &b), q.one());
    }

    #[test]
    fn ring_json_round_trip() {
        for d in ["Z/12", "F3[x]/(x^3)", "Q[x]/(x^2)"] {
            let r = Ring::parse(d).unwrap();
            let js = serde_json::to_string(&r).unwrap();
            let back: Ring = serde_json::from_str(&js).unwrap();
            assert_eq!(back, r);
        }
        let js = serde_json::to_string(&Ring::parse("Z/4").unwrap()).unwrap();
        assert_eq!(js, r#"[{"kind":"Z/p^m","p":2,"m":2}]"#);
    }
}
