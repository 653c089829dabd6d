use super::field::{FqElem, FqField};
use super::poly::Poly;

/// Dense row-major matrix over `GF(q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatFq {
    rows: usize,
    cols: usize,
    entries: Vec<FqElem>,
}

impl MatFq {
    pub fn zeros(rows: usize, cols: usize) -> MatFq {
        MatFq {
            rows,
            cols,
            entries: vec![FqElem::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize, f: &FqField) -> MatFq {
        let mut m = MatFq::zeros(n, n);
        for i in 0..n {
            m.set(i, i, f.one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<FqElem>>) -> MatFq {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        MatFq {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> FqElem {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FqElem) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FqElem] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<FqElem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, other: &MatFq, f: &FqField) -> MatFq {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = MatFq::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    out.entries[idx] = f.add(out.entries[idx], f.mul(a, other.get(l, j)));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[FqElem], f: &FqField) -> Vec<FqElem> {
        assert_eq!(self.cols, v.len(), "shape mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(FqElem::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    /// Reduced row echelon form and its pivot columns (strictly increasing).
    pub fn rref(&self, f: &FqField) -> (MatFq, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = f.inv(m.get(r, c)).expect("nonzero pivot");
            for j in c..m.cols {
                let v = f.mul(m.get(r, j), inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self, f: &FqField) -> usize {
        self.rref(f).1.len()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

/// Basis of the right null space, one vector per free column of the
/// reduced echelon form.
pub fn mat_kernel(m: &MatFq, f: &FqField) -> Vec<Vec<FqElem>> {
    let (r, pivots) = m.rref(f);
    let mut basis = Vec::new();
    let mut is_pivot = vec![false; m.cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    for free in (0..m.cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![FqElem::ZERO; m.cols];
        v[free] = f.one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(r.get(row, free));
        }
        basis.push(v);
    }
    basis
}

/// Incremental echelon basis for a sequence `v_0, v_1, ...` that reports
/// the first linear relation. Each stored row keeps its expression in
/// terms of the sequence so the relation can be read off directly.
#[derive(Clone, Debug)]
pub struct KrylovBasis {
    rows: Vec<KrylovRow>,
    pushed: usize,
}

#[derive(Clone, Debug)]
struct KrylovRow {
    pivot: usize,
    vec: Vec<FqElem>,
    combo: Vec<FqElem>,
}

impl KrylovBasis {
    pub fn new() -> KrylovBasis {
        KrylovBasis {
            rows: Vec::new(),
            pushed: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds the next vector. If it lies in the span of the earlier ones,
    /// returns `c_0..c_j` with `c_j = 1` and `sum c_i v_i = 0`.
    pub fn push(&mut self, v: &[FqElem], f: &FqField) -> Option<Vec<FqElem>> {
        let j = self.pushed;
        self.pushed += 1;
        let mut vec = v.to_vec();
        let mut combo = vec![FqElem::ZERO; j + 1];
        combo[j] = f.one();
        for row in &self.rows {
            let c = vec[row.pivot];
            if c.is_zero() {
                continue;
            }
            for (x, &y) in vec.iter_mut().zip(&row.vec).skip(row.pivot) {
                if !y.is_zero() {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
            for (x, &y) in combo.iter_mut().zip(&row.combo) {
                if !y.is_zero() {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
        }
        match vec.iter().position(|x| !x.is_zero()) {
            None => Some(combo),
            Some(pivot) => {
                let inv = f.inv(vec[pivot]).expect("nonzero pivot");
                for x in vec.iter_mut().skip(pivot) {
                    *x = f.mul(*x, inv);
                }
                for x in combo.iter_mut() {
                    *x = f.mul(*x, inv);
                }
                self.rows.push(KrylovRow { pivot, vec, combo });
                None
            }
        }
    }
}

impl Default for KrylovBasis {
    fn default() -> Self {
        KrylovBasis::new()
    }
}

/// Local minimal polynomial of `v` under `apply`: the monic generator of
/// the annihilator of `v` in `GF(q)[x]`.
pub fn krylov_min_poly<F>(v: &[FqElem], mut apply: F, f: &FqField) -> Poly
where
    F: FnMut(&[FqElem]) -> Vec<FqElem>,
{
    let mut basis = KrylovBasis::new();
    let mut cur = v.to_vec();
    loop {
        if let Some(rel) = basis.push(&cur, f) {
            return Poly::new(rel);
        }
        cur = apply(&cur);
    }
}

/// Minimal polynomial of a square matrix, as the lcm of the local minimal
/// polynomials of the standard basis vectors.
pub fn min_poly_matrix(m: &MatFq, f: &FqField) -> Poly {
    assert!(m.is_square(), "matrix must be square");
    let n = m.rows;
    let mut acc = Poly::one(f);
    for i in 0..n {
        if acc.degree() == Some(n) {
            break;
        }
        let mut e = vec![FqElem::ZERO; n];
        e[i] = f.one();
        // skip vectors already annihilated by the running lcm
        if is_annihilated(m, &acc, &e, f) {
            continue;
        }
        let local = krylov_min_poly(&e, |v| m.mul_vec(v, f), f);
        let g = acc.gcd(&local, f);
        acc = acc.mul(&local, f).div_exact(&g, f);
    }
    acc
}

fn is_annihilated(m: &MatFq, p: &Poly, v: &[FqElem], f: &FqField) -> bool {
    // Horner: p(M) v
    let mut acc = vec![FqElem::ZERO; v.len()];
    for &c in p.coeffs().iter().rev() {
        acc = m.mul_vec(&acc, f);
        for (a, &b) in acc.iter_mut().zip(v) {
            *a = f.add(*a, f.mul(c, b));
        }
    }
    acc.iter().all(FqElem::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> FqField {
        FqField::prime(p).unwrap()
    }

    fn mat(f: &FqField, rows: &[&[i64]]) -> MatFq {
        MatFq::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| f.from_i64(v)).collect())
                .collect(),
        )
    }

    #[test]
    fn kernel_examples() {
        let f = gf(2);
        assert!(mat_kernel(&MatFq::identity(3, &f), &f).is_empty());
        assert_eq!(mat_kernel(&MatFq::zeros(2, 2), &f).len(), 2);
        let k = mat_kernel(&mat(&f, &[&[1, 1]]), &f);
        assert_eq!(k, vec![vec![f.one(), f.one()]]);
    }

    #[test]
    fn kernel_vectors_vanish() {
        let f = gf(5);
        let m = mat(&f, &[&[1, 2, 3, 4], &[2, 4, 1, 3], &[3, 1, 4, 2]]);
        let k = mat_kernel(&m, &f);
        assert_eq!(k.len() + m.rank(&f), 4);
        for v in &k {
            assert!(m.mul_vec(v, &f).iter().all(FqElem::is_zero));
        }
    }

    #[test]
    fn rref_pivots_increase() {
        let f = gf(3);
        let m = mat(&f, &[&[0, 1, 2], &[0, 2, 1], &[1, 0, 0]]);
        let (_, piv) = m.rref(&f);
        assert!(piv.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(piv, vec![0, 1]);
    }

    #[test]
    fn min_poly_examples() {
        let f = gf(7);
        let x = Poly::x(&f);
        assert_eq!(min_poly_matrix(&MatFq::zeros(3, 3), &f), x);
        assert_eq!(
            min_poly_matrix(&MatFq::identity(3, &f), &f),
            x.sub(&Poly::one(&f), &f)
        );
        let j = mat(&f, &[&[0, 1], &[0, 0]]);
        assert_eq!(min_poly_matrix(&j, &f), x.mul(&x, &f));
    }

    #[test]
    fn min_poly_of_block_diagonal_is_lcm() {
        let f = gf(5);
        // diag(J_2(1), 2): min poly (x-1)^2 (x-2)
        let m = mat(&f, &[&[1, 1, 0], &[0, 1, 0], &[0, 0, 2]]);
        let x1 = Poly::linear(f.one(), &f);
        let x2 = Poly::linear(f.from_u64(2), &f);
        assert_eq!(min_poly_matrix(&m, &f), x1.mul(&x1, &f).mul(&x2, &f));
    }

    #[test]
    fn krylov_relation() {
        let f = gf(3);
        let mut b = KrylovBasis::new();
        let one = f.one();
        let z = FqElem::ZERO;
        assert!(b.push(&[one, z], &f).is_none());
        assert!(b.push(&[one, one], &f).is_none());
        let rel = b.push(&[z, one], &f).unwrap();
        // v2 = v1 - v0
        assert_eq!(rel, vec![one, f.neg(one), one]);
    }
}
