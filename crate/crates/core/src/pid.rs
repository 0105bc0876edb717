//! Smith normal form over the ambient principal ideal domains `Z`, `F_p[x]`
//! and `Q[x]`.
//!
//! A presentation matrix `A` over `R = D/(pi^m)` is lifted to `D` and padded
//! with `pi^m * I`, so that the cokernel over `D` is the cokernel over `R`.
//! The diagonal of the Euclidean Smith form then reads off the invariants.

use num::{BigInt, BigRational, BigUint, Integer, One, Signed, Zero};

use crate::linalg::Mat;
use crate::ring::{Base, ChainElem, ChainRing};

trait Euclid {
    type E: Clone;
    fn zero(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn norm(&self, a: &Self::E) -> BigUint;
    fn div_rem(&self, a: &Self::E, b: &Self::E) -> (Self::E, Self::E);
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// `a - q * b`
    fn mul_sub(&self, a: &Self::E, q: &Self::E, b: &Self::E) -> Self::E;
    /// Exponent of the uniformizer in `a`, capped at `cap` (`cap` for zero).
    fn pi_valuation(&self, a: &Self::E, cap: u32) -> u32;
}

struct Integers {
    p: BigInt,
}

impl Euclid for Integers {
    type E = BigInt;
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn norm(&self, a: &BigInt) -> BigUint {
        a.magnitude().clone()
    }
    fn div_rem(&self, a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
        a.div_rem(b)
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn mul_sub(&self, a: &BigInt, q: &BigInt, b: &BigInt) -> BigInt {
        a - q * b
    }
    fn pi_valuation(&self, a: &BigInt, cap: u32) -> u32 {
        if a.is_zero() {
            return cap;
        }
        let mut x = a.abs();
        let mut v = 0;
        while v < cap && (&x % &self.p).is_zero() {
            x /= &self.p;
            v += 1;
        }
        v
    }
}

/// Coefficient field for polynomial rings.
trait Field {
    type F: Clone + PartialEq;
    fn zero(&self) -> Self::F;
    fn is_zero(&self, a: &Self::F) -> bool;
    fn add(&self, a: &Self::F, b: &Self::F) -> Self::F;
    fn sub(&self, a: &Self::F, b: &Self::F) -> Self::F;
    fn mul(&self, a: &Self::F, b: &Self::F) -> Self::F;
    fn inv(&self, a: &Self::F) -> Self::F;
}

struct PrimeField(u64);

impl Field for PrimeField {
    type F = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.0
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.0 - b) % self.0
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.0 as u128) as u64
    }
    fn inv(&self, a: &u64) -> u64 {
        // Fermat
        let (mut base, mut e, mut acc) = (*a, self.0 - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

struct Rationals;

impl Field for Rationals {
    type F = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
}

/// `K[x]` with coefficients stored lowest degree first, no trailing zeros.
struct Poly<K: Field>(K);

impl<K: Field> Poly<K> {
    fn trim(&self, mut a: Vec<K::F>) -> Vec<K::F> {
        while a.last().is_some_and(|c| self.0.is_zero(c)) {
            a.pop();
        }
        a
    }

    fn mul(&self, a: &[K::F], b: &[K::F]) -> Vec<K::F> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![self.0.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = self.0.add(&out[i + j], &self.0.mul(x, y));
            }
        }
        self.trim(out)
    }

    fn sub(&self, a: &[K::F], b: &[K::F]) -> Vec<K::F> {
        let n = a.len().max(b.len());
        let z = self.0.zero();
        let out = (0..n)
            .map(|i| self.0.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
            .collect();
        self.trim(out)
    }
}

impl<K: Field> Euclid for Poly<K> {
    type E = Vec<K::F>;
    fn zero(&self) -> Self::E {
        Vec::new()
    }
    fn is_zero(&self, a: &Self::E) -> bool {
        a.is_empty()
    }
    fn norm(&self, a: &Self::E) -> BigUint {
        BigUint::from(a.len())
    }
    fn div_rem(&self, a: &Self::E, b: &Self::E) -> (Self::E, Self::E) {
        let lead_inv = self.0.inv(b.last().expect("nonzero divisor"));
        let mut rem = a.clone();
        if rem.len() < b.len() {
            return (Vec::new(), rem);
        }
        let mut quot = vec![self.0.zero(); rem.len() - b.len() + 1];
        while rem.len() >= b.len() {
            let shift = rem.len() - b.len();
            let c = self.0.mul(rem.last().unwrap(), &lead_inv);
            for (i, bc) in b.iter().enumerate() {
                rem[shift + i] = self.0.sub(&rem[shift + i], &self.0.mul(&c, bc));
            }
            quot[shift] = c;
            rem = self.trim(rem);
        }
        (self.trim(quot), rem)
    }
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E {
        let n = a.len().max(b.len());
        let z = self.0.zero();
        let out = (0..n)
            .map(|i| self.0.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
            .collect();
        self.trim(out)
    }
    fn mul_sub(&self, a: &Self::E, q: &Self::E, b: &Self::E) -> Self::E {
        self.sub(a, &self.mul(q, b))
    }
    fn pi_valuation(&self, a: &Self::E, cap: u32) -> u32 {
        a.iter().position(|c| !self.0.is_zero(c)).map_or(cap, |i| (i as u32).min(cap))
    }
}

/// Diagonal entries of the Smith form of `a` (rows x cols) over `d`.
fn smith_diagonal<D: Euclid>(d: &D, mut a: Vec<Vec<D::E>>) -> Vec<D::E> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = min_entry(d, &a, t..rows, t..cols) else { break };
        a.swap(t, pi);
        a.iter_mut().for_each(|row| row.swap(t, pj));
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if d.is_zero(&a[i][t]) {
                    continue;
                }
                let (q, r) = d.div_rem(&a[i][t], &a[t][t]);
                for j in t..cols {
                    a[i][j] = d.mul_sub(&a[i][j], &q, &a[t][j]);
                }
                clean &= d.is_zero(&r);
            }
            for j in t + 1..cols {
                if d.is_zero(&a[t][j]) {
                    continue;
                }
                let (q, r) = d.div_rem(&a[t][j], &a[t][t]);
                for i in t..rows {
                    a[i][j] = d.mul_sub(&a[i][j], &q, &a[i][t]);
                }
                clean &= d.is_zero(&r);
            }
            if !clean {
                // a remainder of smaller norm now sits in row or column t
                let (pi, pj) = min_entry(d, &a, t..rows, t..t + 1)
                    .into_iter()
                    .chain(min_entry(d, &a, t..t + 1, t..cols))
                    .min_by_key(|&(i, j)| d.norm(&a[i][j]))
                    .unwrap();
                a.swap(t, pi);
                a.iter_mut().for_each(|row| row.swap(t, pj));
                continue;
            }
            let bad = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !d.is_zero(&d.div_rem(&a[i][j], &a[t][t]).1))
            });
            match bad {
                Some(i) => {
                    for j in t..cols {
                        a[t][j] = d.add(&a[t][j], &a[i][j]);
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].clone());
    }
    diag
}

fn min_entry<D: Euclid>(
    d: &D,
    a: &[Vec<D::E>],
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(BigUint, usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            if d.is_zero(&a[i][j]) {
                continue;
            }
            let n = d.norm(&a[i][j]);
            if best.as_ref().map_or(true, |(bn, _, _)| n < *bn) {
                best = Some((n, i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

fn invariants_from<D: Euclid>(d: &D, lifted: Vec<Vec<D::E>>, pi_m: D::E, m: u32) -> Vec<u32> {
    let rows = lifted.len();
    let padded: Vec<Vec<D::E>> = lifted
        .into_iter()
        .enumerate()
        .map(|(i, mut row)| {
            row.extend((0..rows).map(|k| if k == i { pi_m.clone() } else { d.zero() }));
            row
        })
        .collect();
    let mut out: Vec<u32> = smith_diagonal(d, padded)
        .iter()
        .map(|e| d.pi_valuation(e, m))
        .filter(|&v| v > 0)
        .collect();
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// Invariant exponents of the cokernel of `a` (columns are relations), via
/// Smith normal form over the ambient PID.
pub fn cokernel_invariants(a: &Mat) -> Vec<u32> {
    let ring: ChainRing = a.ring();
    let m = ring.m();
    let rows: Vec<Vec<ChainElem>> = (0..a.rows()).map(|i| a.row(i)).collect();
    match ring.base() {
        Base::Integers { p } => {
            let d = Integers { p: BigInt::from(p) };
            let lifted = rows
                .into_iter()
                .map(|r| r.into_iter().map(|e| match e {
                    ChainElem::Int(x) => BigInt::from(x),
                    _ => unreachable!(),
                }).collect())
                .collect();
            invariants_from(&d, lifted, BigInt::from(p).pow(m), m)
        }
        Base::PrimeField { p } => {
            let d = Poly(PrimeField(p));
            let lifted = rows
                .into_iter()
                .map(|r| r.into_iter().map(|e| match e {
                    ChainElem::Fp(c) => d.trim(c),
                    _ => unreachable!(),
                }).collect())
                .collect();
            let mut xm = vec![0u64; m as usize];
            xm.push(1);
            invariants_from(&d, lifted, xm, m)
        }
        Base::Rationals => {
            let d = Poly(Rationals);
            let lifted = rows
                .into_iter()
                .map(|r| r.into_iter().map(|e| match e {
                    ChainElem::Q(c) => d.trim(c),
                    _ => unreachable!(),
                }).collect())
                .collect();
            let mut xm = vec![BigRational::zero(); m as usize];
            xm.push(BigRational::one());
            invariants_from(&d, lifted, xm, m)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_smith_diagonal() {
        let d = Integers { p: BigInt::from(2) };
        let a = vec![
            vec![BigInt::from(2), BigInt::from(4), BigInt::from(4)],
            vec![BigInt::from(-6), BigInt::from(6), BigInt::from(12)],
            vec![BigInt::from(10), BigInt::from(-4), BigInt::from(-16)],
        ];
        let diag: Vec<BigInt> = smith_diagonal(&d, a).into_iter().map(|x| x.abs()).collect();
        assert_eq!(diag, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
    }

    #[test]
    fn z4_presentations() {
        let r = ChainRing::integers(2, 2).unwrap();
        assert_eq!(cokernel_invariants(&Mat::from_ints(r, &[&[2]])), vec![1]);
        assert_eq!(cokernel_invariants(&Mat::from_ints(r, &[&[0]])), vec![2]);
        assert_eq!(cokernel_invariants(&Mat::from_ints(r, &[&[2, 0], &[0, 1]])), vec![1]);
    }

    #[test]
    fn poly_presentations() {
        let r = ChainRing::prime_field_poly(3, 3).unwrap();
        let x = r.pi_pow(1);
        let a = Mat::from_rows(r, vec![vec![x.clone(), r.zero()], vec![r.one(), r.mul(&x, &x)]]);
        // coker of [[x,0],[1,x^2]] over F3[x]/(x^3): det = x^3 = 0, one unit entry
        assert_eq!(cokernel_invariants(&a), vec![3]);
        let q = ChainRing::rational_poly(2).unwrap();
        let a = Mat::from_rows(q, vec![vec![q.pi_pow(1)]]);
        assert_eq!(cokernel_invariants(&a), vec![1]);
    }
}
