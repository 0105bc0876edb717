//! Dense matrices over a single chain ring and elimination with unimodular
//! transforms.
//!
//! A chain ring is a local principal ideal ring whose ideals form the chain
//! `R > (pi) > ... > (pi^m) = 0`, so an entry of least valuation divides every
//! other entry. Choosing such a pivot at each step diagonalizes any matrix
//! with invertible row and column operations.

use std::fmt;

use crate::ring::{ChainElem, ChainRing};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    ring: ChainRing,
    rows: usize,
    cols: usize,
    data: Vec<ChainElem>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.cols).map(|j| self.ring.format(self.get(i, j))).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl Mat {
    pub fn zeros(ring: ChainRing, rows: usize, cols: usize) -> Self {
        Mat { ring, rows, cols, data: vec![ring.zero(); rows * cols] }
    }

    pub fn identity(ring: ChainRing, n: usize) -> Self {
        let mut m = Mat::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn diag(ring: ChainRing, entries: Vec<ChainElem>) -> Self {
        let n = entries.len();
        let mut m = Mat::zeros(ring, n, n);
        for (i, e) in entries.into_iter().enumerate() {
            m.set(i, i, e);
        }
        m
    }

    pub fn from_fn(ring: ChainRing, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> ChainElem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { ring, rows, cols, data }
    }

    pub fn from_rows(ring: ChainRing, rows: Vec<Vec<ChainElem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat { ring, rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_ints(ring: ChainRing, rows: &[&[i64]]) -> Self {
        Mat::from_rows(ring, rows.iter().map(|r| r.iter().map(|&x| ring.from_int(x)).collect()).collect())
    }

    pub fn column_vector(ring: ChainRing, v: Vec<ChainElem>) -> Self {
        let n = v.len();
        Mat { ring, rows: n, cols: 1, data: v }
    }

    pub fn ring(&self) -> ChainRing {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &ChainElem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: ChainElem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<ChainElem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<ChainElem> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.ring.is_zero(x))
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.ring, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let r = self.ring;
        let mut out = Mat::zeros(r, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if r.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if r.is_zero(b) {
                        continue;
                    }
                    let t = r.add(out.get(i, j), &r.mul(a, b));
                    out.set(i, j, t);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::from_fn(self.ring, self.rows, self.cols, |i, j| self.ring.add(self.get(i, j), other.get(i, j)))
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::from_fn(self.ring, self.rows, self.cols, |i, j| self.ring.sub(self.get(i, j), other.get(i, j)))
    }

    pub fn scale(&self, c: &ChainElem) -> Mat {
        Mat::from_fn(self.ring, self.rows, self.cols, |i, j| self.ring.mul(c, self.get(i, j)))
    }

    pub fn apply(&self, v: &[ChainElem]) -> Vec<ChainElem> {
        assert_eq!(v.len(), self.cols);
        let r = self.ring;
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(r.zero(), |acc, j| r.add(&acc, &r.mul(self.get(i, j), &v[j])))
            })
            .collect()
    }

    pub fn hcat(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        Mat::from_fn(self.ring, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols { self.get(i, j).clone() } else { other.get(i, j - self.cols).clone() }
        })
    }

    pub fn vcat(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        Mat::from_fn(self.ring, self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows { self.get(i, j).clone() } else { other.get(i - self.rows, j).clone() }
        })
    }

    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        Mat::from_fn(self.ring, idx.len(), self.cols, |i, j| self.get(idx[i], j).clone())
    }

    pub fn select_cols(&self, idx: &[usize]) -> Mat {
        Mat::from_fn(self.ring, self.rows, idx.len(), |i, j| self.get(i, idx[j]).clone())
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat {
        Mat::from_fn(self.ring, rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Mat) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }

    /// Reduces row `i` modulo `pi^row_exps[i]`.
    pub fn reduce_rows(&self, row_exps: &[u32]) -> Mat {
        assert_eq!(row_exps.len(), self.rows);
        Mat::from_fn(self.ring, self.rows, self.cols, |i, j| self.ring.reduce(self.get(i, j), row_exps[i]))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += c * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, c: &ChainElem) {
        let r = self.ring;
        for j in 0..self.cols {
            let t = r.add(self.get(dst, j), &r.mul(c, self.get(src, j)));
            self.set(dst, j, t);
        }
    }

    /// col[dst] += c * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, c: &ChainElem) {
        let r = self.ring;
        for i in 0..self.rows {
            let t = r.add(self.get(i, dst), &r.mul(c, self.get(i, src)));
            self.set(i, dst, t);
        }
    }

    fn scale_row(&mut self, i: usize, c: &ChainElem) {
        for j in 0..self.cols {
            let t = self.ring.mul(c, self.get(i, j));
            self.set(i, j, t);
        }
    }

    fn scale_col(&mut self, j: usize, c: &ChainElem) {
        for i in 0..self.rows {
            let t = self.ring.mul(c, self.get(i, j));
            self.set(i, j, t);
        }
    }
}

/// `p * a * q = diag(pi^vals[0], pi^vals[1], ...)` with `vals` nondecreasing;
/// a value of `m` stands for a zero diagonal entry.
#[derive(Clone, Debug)]
pub struct Snf {
    pub p: Mat,
    pub p_inv: Mat,
    pub q: Mat,
    pub q_inv: Mat,
    /// One valuation per row of the input (rows past the rank get `m`).
    pub row_vals: Vec<u32>,
    /// One valuation per column of the input (columns past the rank get `m`).
    pub col_vals: Vec<u32>,
}

pub fn smith(a: &Mat) -> Snf {
    let ring = a.ring;
    let m = ring.m();
    let (rows, cols) = (a.rows, a.cols);
    let mut w = a.clone();
    let mut p = Mat::identity(ring, rows);
    let mut p_inv = Mat::identity(ring, rows);
    let mut q = Mat::identity(ring, cols);
    let mut q_inv = Mat::identity(ring, cols);
    let mut diag = Vec::new();

    for t in 0..rows.min(cols) {
        let mut best: Option<(u32, usize, usize)> = None;
        'search: for i in t..rows {
            for j in t..cols {
                let v = ring.valuation(w.get(i, j));
                if v < m && best.map_or(true, |(bv, _, _)| v < bv) {
                    best = Some((v, i, j));
                    if v == 0 {
                        break 'search;
                    }
                }
            }
        }
        let Some((v, pi, pj)) = best else { break };
        w.swap_rows(t, pi);
        p.swap_rows(t, pi);
        p_inv.swap_cols(t, pi);
        w.swap_cols(t, pj);
        q.swap_cols(t, pj);
        q_inv.swap_rows(t, pj);

        let unit = ring.shift_down(w.get(t, t), v);
        let uinv = ring.inverse(&unit).expect("pivot unit part invertible");
        w.scale_row(t, &uinv);
        p.scale_row(t, &uinv);
        p_inv.scale_col(t, &unit);

        let pivot = w.get(t, t).clone();
        for i in t + 1..rows {
            if ring.is_zero(w.get(i, t)) {
                continue;
            }
            let f = ring.div_exact(w.get(i, t), &pivot).expect("pivot divides column");
            let nf = ring.neg(&f);
            w.add_row_multiple(i, t, &nf);
            p.add_row_multiple(i, t, &nf);
            p_inv.add_col_multiple(t, i, &f);
        }
        for j in t + 1..cols {
            if ring.is_zero(w.get(t, j)) {
                continue;
            }
            let f = ring.div_exact(w.get(t, j), &pivot).expect("pivot divides row");
            let nf = ring.neg(&f);
            w.add_col_multiple(j, t, &nf);
            q.add_col_multiple(j, t, &nf);
            q_inv.add_row_multiple(t, j, &f);
        }
        diag.push(v);
    }
    let mut row_vals = diag.clone();
    row_vals.resize(rows, m);
    let mut col_vals = diag;
    col_vals.resize(cols, m);
    Snf { p, p_inv, q, q_inv, row_vals, col_vals }
}

/// Some `x` with `a x = b`, if the system is solvable.
pub fn solve(a: &Mat, b: &[ChainElem]) -> Option<Vec<ChainElem>> {
    let ring = a.ring;
    let snf = smith(a);
    let pb = snf.p.apply(b);
    let mut y = vec![ring.zero(); a.cols];
    for (i, c) in pb.iter().enumerate() {
        let s = snf.row_vals[i];
        if ring.valuation(c) < s {
            return None;
        }
        if i < a.cols && s < ring.m() {
            y[i] = ring.div_exact(c, &ring.pi_pow(s))?;
        }
    }
    Some(snf.q.apply(&y))
}

/// Columns generating `{x : a x = 0}`.
pub fn kernel(a: &Mat) -> Mat {
    let ring = a.ring;
    let m = ring.m();
    let snf = smith(a);
    let mut gens: Vec<Vec<ChainElem>> = Vec::new();
    for j in 0..a.cols {
        let s = snf.col_vals[j];
        if s == 0 {
            continue;
        }
        // y_j ranges over the annihilator of pi^s, which is (pi^(m-s))
        let scale = ring.pi_pow(m - s.min(m));
        let col: Vec<ChainElem> = snf.q.column(j).iter().map(|x| ring.mul(x, &scale)).collect();
        if col.iter().any(|x| !ring.is_zero(x)) {
            gens.push(col);
        }
    }
    let mut out = Mat::zeros(ring, a.cols, gens.len());
    for (j, g) in gens.into_iter().enumerate() {
        for (i, x) in g.into_iter().enumerate() {
            out.set(i, j, x);
        }
    }
    out
}
