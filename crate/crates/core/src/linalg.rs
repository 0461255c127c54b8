//! Dense matrices over any [`Scalar`] with deterministic Gauss-Jordan
//! elimination (first nonzero pivot, columns scanned left to right).

use std::fmt;

use crate::coeff::{Backend, FieldElement, Fp, PrimeSpec, Scalar, DEFAULT_GUARD};
use crate::error::Result;

#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    pub fn scalar(n: usize, s: &S) -> Self {
        let mut m = Self::zeros(n, n);
        if !s.is_zero() {
            for i in 0..n {
                m.set(i, i, s.clone());
            }
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Matrix {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: &S) {
        let k = i * self.cols + j;
        self.data[k] = self.data[k].add(v);
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "shape mismatch in product");
        let ot = o.transpose();
        Self::from_fn(self.rows, o.cols, |i, j| {
            S::dot(self.row(i).iter().zip(ot.row(j)))
        })
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| S::dot(self.row(i).iter().zip(v)))
            .collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        if s.is_zero() {
            return Self::zeros(self.rows, self.cols);
        }
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|a| if a.is_zero() { S::zero() } else { a.mul(s) })
                .collect(),
        }
    }

    /// `self*o - o*self`
    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    /// Kronecker product.
    pub fn kron(&self, o: &Self) -> Self {
        Self::from_fn(self.rows * o.rows, self.cols * o.cols, |i, j| {
            let a = self.get(i / o.rows, j / o.cols);
            if a.is_zero() {
                S::zero()
            } else {
                a.mul(o.get(i % o.rows, j % o.cols))
            }
        })
    }

    pub fn vstack(blocks: &[&Self], cols: usize) -> Self {
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            assert_eq!(b.cols, cols);
            data.extend(b.data.iter().cloned());
            rows += b.rows;
        }
        Matrix { rows, cols, data }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend(self.row(i).iter().cloned());
        }
        Matrix {
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.rows, idx.len(), |i, j| self.get(i, idx[j]).clone())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self.get(r, c).inv().expect("nonzero pivot");
            for j in c..self.cols {
                let v = self.get(r, j);
                if !v.is_zero() {
                    let nv = v.mul(&inv);
                    self.set(r, j, nv);
                }
            }
            let prow: Vec<S> = self.row(r).to_vec();
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    if !prow[j].is_zero() {
                        let nv = self.get(i, j).sub(&f.mul(&prow[j]));
                        self.set(i, j, nv);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Columns forming the lexicographically earliest maximal independent set.
    pub fn independent_columns(&self) -> Vec<usize> {
        self.clone().rref()
    }

    /// Rows forming the lexicographically earliest maximal independent set.
    pub fn independent_rows(&self) -> Vec<usize> {
        self.transpose().rref()
    }

    /// Basis of the right kernel, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<S>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut out = Vec::new();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        for f in 0..self.cols {
            if is_pivot[f] {
                continue;
            }
            let mut v = vec![S::zero(); self.cols];
            v[f] = S::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = m.get(r, f).neg();
            }
            out.push(v);
        }
        out
    }

    /// Solves `self * x = b` for square invertible `self`.
    pub fn solve(&self, b: &[S]) -> Option<Vec<S>> {
        let n = self.rows;
        assert_eq!(self.cols, n);
        let mut aug = Self::from_fn(n, n + 1, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else {
                b[i].clone()
            }
        });
        let piv = aug.rref();
        if piv.len() != n || piv[n - 1] != n - 1 {
            return None;
        }
        Some((0..n).map(|i| aug.get(i, n).clone()).collect())
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.rows;
        assert_eq!(self.cols, n);
        if n == 0 {
            return Some(Self::zeros(0, 0));
        }
        let mut aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                S::one()
            } else {
                S::zero()
            }
        });
        let piv = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        Some(Self::from_fn(n, n, |i, j| aug.get(i, n + j).clone()))
    }
    /// Dimension of the unital associative algebra generated by square
    /// matrices of a common size (closure of the span under left
    /// multiplication by the generators).
    pub fn generated_algebra_dim(gens: &[Self]) -> usize {
        let Some(n) = gens.first().map(|g| g.rows) else {
            return 1;
        };
        let mut span = SpanBuilder::new(n * n);
        let mut queue = vec![Self::identity(n)];
        span.insert(&Self::identity(n).data);
        while let Some(x) = queue.pop() {
            for g in gens {
                let y = g.mul(&x);
                if span.insert(&y.data) {
                    queue.push(y);
                }
            }
        }
        span.dim()
    }
}

/// A basis of the column space made of the lexicographically earliest
/// independent columns, with everything needed to express vectors in it.
#[derive(Clone, Debug)]
pub struct ColumnBasis<S: Scalar> {
    /// Selected columns.
    pub sel: Vec<usize>,
    /// Rows on which the selected columns are independent.
    pub pivot_rows: Vec<usize>,
    /// Inverse of the `pivot_rows x sel` minor.
    pub minor_inv: Matrix<S>,
    /// Coordinates of every column in the selected ones.
    pub coords: Matrix<S>,
}

/// Fixed evaluation point for pivot searches; any point works since every
/// guess is certified exactly.
fn guide_spec() -> PrimeSpec {
    PrimeSpec::new(1_234_567_891_011, DEFAULT_GUARD).expect("valid guide point")
}

impl<S: Scalar> Matrix<S> {
    /// Earliest independent columns. Over exact fields the pivot pattern is
    /// found in a prime field and then certified (invertible minor, exact
    /// reconstruction of every column from earlier selected ones); if the
    /// certificate fails the plain elimination is used instead.
    pub fn column_basis(&self) -> ColumnBasis<S> {
        if S::wants_guide() {
            if let Some(b) = self.guided_column_basis(&guide_spec()) {
                return b;
            }
        }
        self.plain_column_basis()
    }

    fn plain_column_basis(&self) -> ColumnBasis<S> {
        let mut r = self.clone();
        let sel = r.rref();
        let k = sel.len();
        let coords = Matrix::from_fn(k, self.cols, |i, j| r.get(i, j).clone());
        let sub = self.select_cols(&sel);
        let pivot_rows = sub.independent_rows();
        let minor_inv = sub
            .select_rows(&pivot_rows)
            .inverse()
            .expect("independent minor");
        ColumnBasis {
            sel,
            pivot_rows,
            minor_inv,
            coords,
        }
    }

    fn guided_column_basis(&self, spec: &PrimeSpec) -> Option<ColumnBasis<S>> {
        let data = self
            .data
            .iter()
            .map(|x| x.to_prime(spec))
            .collect::<Option<Vec<Fp>>>()?;
        let fp = Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        };
        let sel = fp.independent_columns();
        let pivot_rows = fp.select_cols(&sel).independent_rows();
        let sub = self.select_cols(&sel);
        let minor_inv = sub.select_rows(&pivot_rows).inverse()?;
        let coords = minor_inv.mul(&self.select_rows(&pivot_rows));
        for (i, &c) in sel.iter().enumerate() {
            for j in 0..c {
                if !coords.get(i, j).is_zero() {
                    return None;
                }
            }
        }
        if sub.mul(&coords) != *self {
            return None;
        }
        Some(ColumnBasis {
            sel,
            pivot_rows,
            minor_inv,
            coords,
        })
    }

    pub fn guided_rank(&self) -> usize {
        self.column_basis().sel.len()
    }
}

/// Incrementally maintained echelon basis of a subspace of `S^n`.
#[derive(Clone, Debug)]
pub struct SpanBuilder<S> {
    n: usize,
    rows: Vec<(usize, Vec<S>)>,
}

impl<S: Scalar> SpanBuilder<S> {
    pub fn new(n: usize) -> Self {
        SpanBuilder {
            n,
            rows: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Residue of `v` after elimination against the current basis.
    pub fn reduce(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.n);
        let mut v = v.to_vec();
        for (p, r) in &self.rows {
            let f = v[*p].clone();
            if f.is_zero() {
                continue;
            }
            for (a, b) in v.iter_mut().zip(r) {
                if !b.is_zero() {
                    *a = a.sub(&f.mul(b));
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[S]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Adds `v`; returns whether the span grew.
    pub fn insert(&mut self, v: &[S]) -> bool {
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].inv().expect("nonzero pivot");
        for x in v.iter_mut() {
            if !x.is_zero() {
                *x = x.mul(&inv);
            }
        }
        for (_, r) in self.rows.iter_mut() {
            let f = r[p].clone();
            if !f.is_zero() {
                for (a, b) in r.iter_mut().zip(&v) {
                    if !b.is_zero() {
                        *a = a.sub(&f.mul(b));
                    }
                }
            }
        }
        self.rows.push((p, v));
        true
    }
}

impl Matrix<FieldElement> {
    pub fn lift<B: Backend>(&self, b: &B) -> Result<Matrix<B::S>> {
        let data = self
            .data
            .iter()
            .map(|x| b.lift(x))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_string()).collect())
            .collect()
    }
}

impl<S: Scalar> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Fp;

    fn fm(rows: Vec<Vec<i64>>) -> Matrix<FieldElement> {
        Matrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(FieldElement::from_int).collect())
                .collect(),
        )
    }

    #[test]
    fn rank_and_kernel() {
        let m = fm(vec![vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn earliest_independent_columns() {
        let m = fm(vec![vec![0, 1, 2, 0], vec![0, 1, 2, 1]]);
        assert_eq!(m.independent_columns(), vec![1, 3]);
    }

    #[test]
    fn inverse_roundtrip() {
        let q = FieldElement::q();
        let one = FieldElement::one();
        let m = Matrix::from_rows(vec![
            vec![q.clone(), one.clone()],
            vec![one.clone(), q.clone()],
        ]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
    }

    #[test]
    fn prime_field_rank() {
        let m: Matrix<Fp> = Matrix::from_rows(vec![
            vec![Fp::new(1), Fp::new(2)],
            vec![Fp::new(2), Fp::new(4)],
        ]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kron_dims() {
        let a = fm(vec![vec![1, 2], vec![3, 4]]);
        let i = Matrix::<FieldElement>::identity(3);
        let k = a.kron(&i);
        assert_eq!((k.rows(), k.cols()), (6, 6));
        assert_eq!(k.get(4, 1), &FieldElement::from_int(3));
    }
}
