//! Exact arithmetic and dense linear algebra over prime fields GF(q).
//!
//! Elements are stored as canonical residues in `[0, q)`. Moduli are capped at
//! 2^61 so every product fits in a `u128` before reduction.

use std::fmt;

use crate::error::{Error, Result};

/// Largest modulus accepted by [`PrimeField::new`].
pub const MAX_MODULUS: u64 = 1 << 61;

/// A prime field GF(q).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeField {
    modulus: u64,
}

impl PrimeField {
    /// Builds GF(q) after checking that `q` is a prime in `[2, 2^61]`.
    pub fn new(q: u64) -> Result<Self> {
        if !(2..=MAX_MODULUS).contains(&q) {
            return Err(Error::ModulusOutOfRange(q));
        }
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        Ok(PrimeField { modulus: q })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    #[inline]
    pub fn reduce(&self, v: u64) -> u64 {
        v % self.modulus
    }

    /// Maps a signed integer to its canonical residue.
    pub fn from_i64(&self, v: i64) -> u64 {
        let q = self.modulus as i128;
        (((v as i128) % q + q) % q) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.modulus as u128) as u64
    }

    pub fn pow(&self, base: u64, exp: u64) -> u64 {
        pow_mod(base, exp, self.modulus)
    }

    /// Multiplicative inverse via Fermat's little theorem.
    pub fn inv(&self, a: u64) -> Result<u64> {
        let a = self.reduce(a);
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.modulus - 2))
    }

    pub fn element(&self, v: u64) -> FieldElement {
        FieldElement {
            value: self.reduce(v),
            field: *self,
        }
    }

    pub fn zero_vector(&self, dim: usize) -> Vector {
        Vector {
            field: *self,
            entries: vec![0; dim],
        }
    }

    /// Dot product of two equally long slices of residues.
    pub fn dot(&self, a: &[u64], b: &[u64]) -> u64 {
        debug_assert_eq!(a.len(), b.len());
        let q = self.modulus as u128;
        let mut acc: u128 = 0;
        for (&x, &y) in a.iter().zip(b) {
            acc += x as u128 * y as u128;
            // Each product is < 2^122; reduce well before the accumulator can wrap.
            if acc >= 1u128 << 125 {
                acc %= q;
            }
        }
        (acc % q) as u64
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.modulus)
    }
}

/// A residue tagged with its field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    field: PrimeField,
}

impl FieldElement {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    fn same_field(&self, other: &FieldElement) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(
                self.field.modulus,
                other.field.modulus,
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(self.field.element(self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(self.field.element(self.field.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(self.field.element(self.field.mul(self.value, other.value)))
    }

    pub fn neg(&self) -> FieldElement {
        self.field.element(self.field.neg(self.value))
    }

    pub fn inv(&self) -> Result<FieldElement> {
        Ok(self.field.element(self.field.inv(self.value)?))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Inv,
    Neg,
}

/// Single dispatch point for the five field operations. Binary operations
/// require `b`; unary ones ignore it.
pub fn field_arith(op: ArithOp, a: FieldElement, b: Option<FieldElement>) -> Result<FieldElement> {
    let need_b = || b.ok_or_else(|| Error::InvalidArgument(format!("{op:?} needs two operands")));
    match op {
        ArithOp::Add => a.add(&need_b()?),
        ArithOp::Sub => a.sub(&need_b()?),
        ArithOp::Mul => a.mul(&need_b()?),
        ArithOp::Inv => a.inv(),
        ArithOp::Neg => Ok(a.neg()),
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Least prime `p >= b` (with `b < 2` treated as 2).
pub fn smallest_prime_at_least(b: u64) -> u64 {
    let mut p = b.max(2);
    while !is_prime(p) {
        p += 1;
    }
    p
}

/// A vector over GF(q).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vector {
    field: PrimeField,
    entries: Vec<u64>,
}

impl Vector {
    /// Reduces every entry into the field.
    pub fn new(field: PrimeField, entries: Vec<u64>) -> Self {
        let entries = entries.into_iter().map(|v| field.reduce(v)).collect();
        Vector { field, entries }
    }

    pub fn unit(field: PrimeField, dim: usize, index: usize) -> Self {
        let mut v = field.zero_vector(dim);
        v.entries[index] = 1;
        v
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<u64> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0)
    }

    pub fn dot(&self, other: &Vector) -> Result<u64> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.modulus, other.field.modulus));
        }
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "dot of lengths {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(self.field.dot(&self.entries, &other.entries))
    }
}

/// A dense row-major matrix over GF(q). Zero rows or columns are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl Matrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from rows of residues; every row must have `cols` entries.
    pub fn from_rows(field: PrimeField, cols: usize, rows: Vec<Vec<u64>>) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let n_rows = rows.len();
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row.into_iter().map(|v| field.reduce(v)));
        }
        Ok(Matrix {
            field,
            rows: n_rows,
            cols,
            data,
        })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = self.field.reduce(v);
    }

    pub fn push_row(&mut self, row: &[u64]) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "pushed row has {} entries, expected {}",
                row.len(),
                self.cols
            )));
        }
        self.data.extend(row.iter().map(|&v| self.field.reduce(v)));
        self.rows += 1;
        Ok(())
    }

    /// Submatrix made of the given rows, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(indices.len() * self.cols);
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        Matrix {
            field: self.field,
            rows: indices.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.get(l, j)));
                }
            }
        }
        Ok(out)
    }

    /// `M r`.
    pub fn mat_vec(&self, r: &Vector) -> Result<Vector> {
        if r.dim() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "matrix has {} columns, vector has {} entries",
                self.cols,
                r.dim()
            )));
        }
        let entries = (0..self.rows)
            .map(|i| self.field.dot(self.row(i), r.entries()))
            .collect();
        Ok(Vector {
            field: self.field,
            entries,
        })
    }

    /// `v M`.
    pub fn vec_mat(&self, v: &Vector) -> Result<Vector> {
        if v.dim() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "matrix has {} rows, vector has {} entries",
                self.rows,
                v.dim()
            )));
        }
        let f = self.field;
        let mut out = vec![0u64; self.cols];
        for (i, &c) in v.entries().iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (o, &m) in out.iter_mut().zip(self.row(i)) {
                *o = f.add(*o, f.mul(c, m));
            }
        }
        Ok(Vector {
            field: f,
            entries: out,
        })
    }

    pub fn rank(&self) -> usize {
        let mut data = self.data.clone();
        rref(self.field, &mut data, self.rows, self.cols, self.cols).len()
    }

    /// Some `v` with `v M = t`, or `None` when `t` is outside the row span.
    ///
    /// The returned solution is the one read off the reduced row echelon form
    /// of `[Mᵀ | tᵀ]` with every free variable set to zero.
    pub fn solve_left(&self, t: &Vector) -> Option<Vector> {
        if t.dim() != self.cols {
            return None;
        }
        let f = self.field;
        // Augmented system Mᵀ x = t: `cols` equations in `rows` unknowns.
        let width = self.rows + 1;
        let mut aug = vec![0u64; self.cols * width];
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[j * width + i] = self.data[i * self.cols + j];
            }
        }
        for j in 0..self.cols {
            aug[j * width + self.rows] = t.entries()[j];
        }
        let pivots = rref(f, &mut aug, self.cols, width, self.rows);
        // Inconsistent iff some zero row has a nonzero right-hand side.
        for r in pivots.len()..self.cols {
            if aug[r * width + self.rows] != 0 {
                return None;
            }
        }
        let mut v = vec![0u64; self.rows];
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = aug[r * width + self.rows];
        }
        Some(Vector { field: f, entries: v })
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let width = 2 * n;
        let mut aug = vec![0u64; n * width];
        for i in 0..n {
            aug[i * width..i * width + n].copy_from_slice(self.row(i));
            aug[i * width + n + i] = 1;
        }
        let pivots = rref(self.field, &mut aug, n, width, n);
        if pivots.len() < n {
            return None;
        }
        let mut inv = Matrix::zeros(self.field, n, n);
        for i in 0..n {
            inv.data[i * n..(i + 1) * n].copy_from_slice(&aug[i * width + n..(i + 1) * width]);
        }
        Some(inv)
    }

    /// Basis (as rows) of the right kernel `{x : M x = 0}`.
    pub fn right_kernel(&self) -> Matrix {
        let f = self.field;
        let mut data = self.data.clone();
        let pivots = rref(f, &mut data, self.rows, self.cols, self.cols);
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Matrix::zeros(f, 0, self.cols);
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut x = vec![0u64; self.cols];
            x[free] = 1;
            for (r, &c) in pivots.iter().enumerate() {
                x[c] = f.neg(data[r * self.cols + free]);
            }
            basis.data.extend_from_slice(&x);
            basis.rows += 1;
        }
        basis
    }
}

/// In-place Gauss–Jordan elimination over the first `pivot_cols` columns of a
/// `rows x width` row-major buffer. Returns the pivot column of each nonzero
/// row; rows past `pivots.len()` are zero in the pivot columns.
pub(crate) fn rref(
    f: PrimeField,
    data: &mut [u64],
    rows: usize,
    width: usize,
    pivot_cols: usize,
) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| data[i * width + c] != 0) else {
            continue;
        };
        if p != r {
            for j in 0..width {
                data.swap(p * width + j, r * width + j);
            }
        }
        let inv = f.inv(data[r * width + c]).expect("pivot is nonzero");
        for j in c..width {
            data[r * width + j] = f.mul(data[r * width + j], inv);
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = data[i * width + c];
            if factor == 0 {
                continue;
            }
            for j in c..width {
                let sub = f.mul(factor, data[r * width + j]);
                data[i * width + j] = f.sub(data[i * width + j], sub);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf(q: u64) -> PrimeField {
        PrimeField::new(q).unwrap()
    }

    fn sieve(limit: usize) -> Vec<bool> {
        let mut p = vec![true; limit + 1];
        p[0] = false;
        p[1] = false;
        let mut i = 2;
        while i * i <= limit {
            if p[i] {
                let mut j = i * i;
                while j <= limit {
                    p[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        p
    }

    #[test]
    fn make_field_examples() {
        assert_eq!(gf(5).modulus(), 5);
        assert_eq!(PrimeField::new(6), Err(Error::NotPrime(6)));
        assert_eq!(gf(10007).modulus(), 10007);
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new((1 << 61) + 1).is_err());
    }

    #[test]
    fn miller_rabin_agrees_with_sieve() {
        let s = sieve(20_000);
        for n in 0..=20_000u64 {
            assert_eq!(is_prime(n), s[n as usize], "n = {n}");
        }
        // Mersenne prime 2^61 - 1 and a strong pseudoprime to several bases.
        assert!(is_prime((1 << 61) - 1));
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn smallest_prime_examples() {
        assert_eq!(smallest_prime_at_least(2), 2);
        assert_eq!(smallest_prime_at_least(9), 11);
        let s = sieve(200);
        let expected = (90..).find(|&p| s[p]).unwrap() as u64;
        assert_eq!(expected, 97);
        assert_eq!(smallest_prime_at_least(90), expected);
    }

    #[test]
    fn arithmetic_examples() {
        let f5 = gf(5);
        let f7 = gf(7);
        let r = field_arith(ArithOp::Add, f5.element(3), Some(f5.element(4))).unwrap();
        assert_eq!(r.value(), 2);
        let r = field_arith(ArithOp::Inv, f7.element(3), None).unwrap();
        assert_eq!(r.value(), 5);
        assert_eq!(
            field_arith(ArithOp::Inv, f7.element(0), None),
            Err(Error::DivisionByZero)
        );
        assert_eq!(
            field_arith(ArithOp::Mul, f5.element(1), Some(f7.element(1))),
            Err(Error::FieldMismatch(5, 7))
        );
        assert_eq!(field_arith(ArithOp::Neg, f7.element(2), None).unwrap().value(), 5);
        assert_eq!(field_arith(ArithOp::Sub, f7.element(2), Some(f7.element(5))).unwrap().value(), 4);
    }

    #[test]
    fn rank_examples() {
        let f = gf(5);
        assert_eq!(Matrix::identity(f, 3).rank(), 3);
        assert_eq!(Matrix::zeros(f, 2, 4).rank(), 0);
        let m = Matrix::from_rows(f, 2, vec![vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn solve_left_examples() {
        let f = gf(7);
        let id = Matrix::identity(f, 2);
        let v = id.solve_left(&Vector::new(f, vec![1, 0])).unwrap();
        assert_eq!(v.entries(), &[1, 0]);
        let m = Matrix::from_rows(f, 2, vec![vec![1, 1]]).unwrap();
        assert!(m.solve_left(&Vector::new(f, vec![1, 0])).is_none());
    }

    #[test]
    fn solve_left_free_variables_are_zero() {
        let f = gf(7);
        // Duplicate rows: only the first copy is a pivot in the transposed system.
        let m = Matrix::from_rows(f, 2, vec![vec![1, 0], vec![1, 0], vec![0, 1]]).unwrap();
        let v = m.solve_left(&Vector::new(f, vec![3, 4])).unwrap();
        assert_eq!(v.entries(), &[3, 0, 4]);
    }

    #[test]
    fn mat_vec_examples() {
        let f = gf(5);
        let r = Vector::new(f, vec![3, 1, 4]);
        assert_eq!(Matrix::identity(f, 3).mat_vec(&r).unwrap(), r);
        assert!(Matrix::zeros(f, 2, 3).mat_vec(&r).unwrap().is_zero());
        let m = Matrix::from_rows(f, 2, vec![vec![1, 2], vec![3, 4]]).unwrap();
        let out = m.mat_vec(&Vector::new(f, vec![1, 1])).unwrap();
        assert_eq!(out.entries(), &[3, 2]);
    }

    #[test]
    fn inverse_and_kernel() {
        let f = gf(11);
        let m = Matrix::from_rows(f, 2, vec![vec![2, 3], vec![1, 4]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(f, 2));
        let singular = Matrix::from_rows(f, 3, vec![vec![1, 2, 3], vec![2, 4, 6]]).unwrap();
        assert!(Matrix::from_rows(f, 2, vec![vec![1, 2], vec![2, 4]]).unwrap().inverse().is_none());
        let ker = singular.right_kernel();
        assert_eq!(ker.rows(), 2);
        for i in 0..ker.rows() {
            let x = Vector::new(f, ker.row(i).to_vec());
            assert!(singular.mat_vec(&x).unwrap().is_zero());
        }
    }

    fn matrix_strategy(q: u64) -> impl Strategy<Value = (Vec<Vec<u64>>, usize)> {
        (1usize..5, 1usize..6).prop_flat_map(move |(r, c)| {
            (prop::collection::vec(prop::collection::vec(0..q, c), r), Just(c))
        })
    }

    proptest! {
        #[test]
        fn field_axioms(a in 0u64..10007, b in 0u64..10007, c in 0u64..10007) {
            let f = gf(10007);
            prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            prop_assert_eq!(f.add(a, b), f.add(b, a));
            prop_assert_eq!(f.mul(a, b), f.mul(b, a));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
        }

        #[test]
        fn solve_left_consistent_with_rank((rows, cols) in matrix_strategy(7), t in prop::collection::vec(0u64..7, 5)) {
            let f = gf(7);
            let m = Matrix::from_rows(f, cols, rows).unwrap();
            let t = Vector::new(f, t[..cols].to_vec());
            let mut ext = m.clone();
            ext.push_row(t.entries()).unwrap();
            let in_span = m.rank() == ext.rank();
            match m.solve_left(&t) {
                Some(v) => {
                    prop_assert!(in_span);
                    prop_assert_eq!(m.vec_mat(&v).unwrap(), t);
                }
                None => prop_assert!(!in_span),
            }
        }

        #[test]
        fn solve_left_recovers_combinations((rows, cols) in matrix_strategy(7), u in prop::collection::vec(0u64..7, 5)) {
            let f = gf(7);
            let m = Matrix::from_rows(f, cols, rows).unwrap();
            let u = Vector::new(f, u[..m.rows()].to_vec());
            let t = m.vec_mat(&u).unwrap();
            let v = m.solve_left(&t).expect("t is in the row span by construction");
            prop_assert_eq!(m.vec_mat(&v).unwrap(), t);
        }

        #[test]
        fn rank_invariances((rows, cols) in matrix_strategy(5), coeffs in prop::collection::vec(0u64..5, 5), seed in any::<u64>()) {
            let f = gf(5);
            let m = Matrix::from_rows(f, cols, rows).unwrap();
            let r = m.rank();
            let mut order: Vec<usize> = (0..m.rows()).collect();
            order.rotate_left((seed as usize) % m.rows().max(1));
            prop_assert_eq!(m.select_rows(&order).rank(), r);
            let combo = m.vec_mat(&Vector::new(f, coeffs[..m.rows()].to_vec())).unwrap();
            let mut ext = m.clone();
            ext.push_row(combo.entries()).unwrap();
            prop_assert_eq!(ext.rank(), r);
        }
    }
}
