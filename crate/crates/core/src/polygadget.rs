//! Polynomial gadget for the partite constructions.
//!
//! A vector in `F^((d+1)^(k−1))` is read as the coefficient vector of a
//! polynomial in `X_1..X_{k−1}` with every per-variable degree at most `d`.
//! Each vertex of part `j < k` owns the space of such polynomials that vanish
//! on the hyperplane `X_j = α`; each vertex of the last part owns the product
//! of linear factors at the points of its neighbours.

use crate::error::{Error, Result};
use crate::field::{Matrix, PrimeField, Vector};

/// Lexicographic bijection between exponent tuples in `[0, d]^vars` and
/// coordinates `0..(d+1)^vars`, first variable most significant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MonomialIndex {
    vars: usize,
    d: usize,
}

impl MonomialIndex {
    /// Index for a k-partite gadget: `k − 1` variables, degree bound `d`.
    pub fn new(k: usize, d: usize) -> Self {
        assert!(k >= 2, "need at least one variable");
        MonomialIndex { vars: k - 1, d }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn degree_bound(&self) -> usize {
        self.d
    }

    /// `(d+1)^vars`.
    pub fn len(&self) -> usize {
        (self.d + 1).pow(self.vars as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn position(&self, exps: &[usize]) -> usize {
        debug_assert_eq!(exps.len(), self.vars);
        exps.iter().fold(0, |acc, &e| {
            debug_assert!(e <= self.d);
            acc * (self.d + 1) + e
        })
    }

    pub fn exponents(&self, mut pos: usize) -> Vec<usize> {
        let mut exps = vec![0; self.vars];
        for slot in exps.iter_mut().rev() {
            *slot = pos % (self.d + 1);
            pos /= self.d + 1;
        }
        exps
    }
}

/// Distinct field points `α_{j,i}` for the vertices of parts `j < k`,
/// assigned `1, 2, 3, …` in part order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalPoints {
    alpha: Vec<Vec<u64>>,
}

impl EvalPoints {
    pub fn new(part_sizes: &[usize], field: PrimeField) -> Result<Self> {
        let total: usize = part_sizes.iter().sum();
        if total as u64 >= field.modulus() {
            return Err(Error::FieldTooSmall {
                modulus: field.modulus(),
                required: total as u64 + 1,
            });
        }
        let mut next = 1u64;
        let alpha = part_sizes
            .iter()
            .map(|&m| {
                let pts = (next..next + m as u64).collect();
                next += m as u64;
                pts
            })
            .collect();
        Ok(EvalPoints { alpha })
    }

    /// Point of the `i`-th vertex (0-based) of part `j` (0-based).
    pub fn point(&self, j: usize, i: usize) -> u64 {
        self.alpha[j][i]
    }

    pub fn part(&self, j: usize) -> &[u64] {
        &self.alpha[j]
    }
}

/// Polynomials (per-variable degree `<= d`) divisible by `X_j − α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishingSpace {
    pub var: usize,
    pub point: u64,
    pub basis: Matrix,
}

impl VanishingSpace {
    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn contains(&self, v: &Vector) -> bool {
        v.is_zero() || self.basis.solve_left(v).is_some()
    }
}

/// Basis `(X_j − α) · X_j^a · ∏_{i≠j} X_i^{b_i}` for `a < d`, `b_i <= d`,
/// listed in lexicographic order of the cofactor exponents. Dimension
/// `d · (d+1)^(vars−1)`.
pub fn vanishing_basis(var: usize, alpha: u64, idx: &MonomialIndex, field: PrimeField) -> VanishingSpace {
    assert!(var < idx.vars(), "variable out of range");
    let len = idx.len();
    let neg_alpha = field.neg(field.reduce(alpha));
    let mut basis = Matrix::zeros(field, 0, len);
    for pos in 0..len {
        let exps = idx.exponents(pos);
        if exps[var] == idx.degree_bound() {
            continue;
        }
        let mut row = vec![0u64; len];
        row[pos] = neg_alpha;
        let mut raised = exps.clone();
        raised[var] += 1;
        row[idx.position(&raised)] = 1;
        basis.push_row(&row).expect("row width matches index");
    }
    VanishingSpace {
        var,
        point: field.reduce(alpha),
        basis,
    }
}

/// Ascending coefficients of `∏ (X − r)`.
pub fn univariate_from_roots(roots: &[u64], field: PrimeField) -> Vec<u64> {
    let mut coeffs = vec![1u64];
    for &r in roots {
        let neg_r = field.neg(field.reduce(r));
        let mut next = vec![0u64; coeffs.len() + 1];
        for (i, &c) in coeffs.iter().enumerate() {
            next[i + 1] = field.add(next[i + 1], c);
            next[i] = field.add(next[i], field.mul(c, neg_r));
        }
        coeffs = next;
    }
    coeffs
}

/// Coefficient vector of `∏_j ∏_{r ∈ roots[j]} (X_j − r)`.
pub fn z_vector(roots: &[Vec<u64>], idx: &MonomialIndex, field: PrimeField) -> Result<Vector> {
    if roots.len() != idx.vars() {
        return Err(Error::DimensionMismatch(format!(
            "{} root lists for {} variables",
            roots.len(),
            idx.vars()
        )));
    }
    if let Some(r) = roots.iter().find(|r| r.len() > idx.degree_bound()) {
        return Err(Error::DegreeOverflow {
            degree: r.len(),
            bound: idx.degree_bound(),
        });
    }
    let factors: Vec<Vec<u64>> = roots.iter().map(|r| univariate_from_roots(r, field)).collect();
    let entries = (0..idx.len())
        .map(|pos| {
            idx.exponents(pos)
                .iter()
                .zip(&factors)
                .try_fold(1u64, |acc, (&e, f)| f.get(e).map(|&c| field.mul(acc, c)))
                .unwrap_or(0)
        })
        .collect();
    Ok(Vector::new(field, entries))
}

/// Evaluates a coefficient vector at a point (one value per variable).
pub fn evaluate(v: &Vector, idx: &MonomialIndex, point: &[u64]) -> u64 {
    let f = v.field();
    let mut acc = 0;
    for (pos, &c) in v.entries().iter().enumerate() {
        if c == 0 {
            continue;
        }
        let term = idx
            .exponents(pos)
            .iter()
            .zip(point)
            .fold(c, |t, (&e, &x)| f.mul(t, f.pow(x, e as u64)));
        acc = f.add(acc, term);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf(q: u64) -> PrimeField {
        PrimeField::new(q).unwrap()
    }

    #[test]
    fn index_is_lexicographic_bijection() {
        let idx = MonomialIndex::new(3, 2);
        assert_eq!(idx.len(), 9);
        for pos in 0..idx.len() {
            assert_eq!(idx.position(&idx.exponents(pos)), pos);
        }
        assert_eq!(idx.exponents(1), vec![0, 1]);
        assert_eq!(idx.exponents(3), vec![1, 0]);
    }

    #[test]
    fn univariate_basis_example() {
        let f = gf(5);
        let idx = MonomialIndex::new(2, 2);
        let v = vanishing_basis(0, 1, &idx, f);
        assert_eq!(v.dim(), 2);
        assert_eq!(v.basis.row(0), &[4, 1, 0]);
        assert_eq!(v.basis.row(1), &[0, 4, 1]);
        // Every basis polynomial vanishes at X = 1.
        for i in 0..v.dim() {
            assert_eq!(evaluate(&Vector::new(f, v.basis.row(i).to_vec()), &idx, &[1]), 0);
        }
        assert!(!v.contains(&Vector::unit(f, 3, 0)));
    }

    #[test]
    fn z_examples() {
        let f = gf(7);
        let idx = MonomialIndex::new(2, 2);
        let z = z_vector(&[vec![2, 3]], &idx, f).unwrap();
        assert_eq!(z.entries(), &[6, 2, 1]);
        let one = z_vector(&[vec![], vec![]], &MonomialIndex::new(3, 2), f).unwrap();
        assert_eq!(one, Vector::unit(f, 9, 0));
        assert_eq!(
            z_vector(&[vec![1, 2, 3]], &idx, f),
            Err(Error::DegreeOverflow { degree: 3, bound: 2 })
        );
    }

    #[test]
    fn eval_points_need_room() {
        assert!(EvalPoints::new(&[3, 3], gf(7)).is_ok());
        assert_eq!(
            EvalPoints::new(&[3, 4], gf(7)),
            Err(Error::FieldTooSmall { modulus: 7, required: 8 })
        );
        let p = EvalPoints::new(&[2, 3], gf(7)).unwrap();
        assert_eq!(p.part(1), &[3, 4, 5]);
    }

    proptest! {
        #[test]
        fn basis_dimension_and_independence(k in 2usize..5, d in 0usize..4, alpha in 0u64..11) {
            let f = gf(11);
            let idx = MonomialIndex::new(k, d);
            for var in 0..k - 1 {
                let v = vanishing_basis(var, alpha, &idx, f);
                prop_assert_eq!(v.dim(), d * (d + 1).pow(k as u32 - 2));
                prop_assert_eq!(v.basis.rank(), v.dim());
            }
        }

        #[test]
        fn multiples_lie_in_the_space(d in 1usize..4, alpha in 0u64..11, cof in prop::collection::vec(0u64..11, 4)) {
            let f = gf(11);
            let idx = MonomialIndex::new(2, d);
            let v = vanishing_basis(0, alpha, &idx, f);
            // (X − α) · Q with deg Q <= d − 1, expanded by hand.
            let q = &cof[..d];
            let mut p = vec![0u64; d + 1];
            for (i, &c) in q.iter().enumerate() {
                p[i + 1] = f.add(p[i + 1], c);
                p[i] = f.sub(p[i], f.mul(c, alpha));
            }
            prop_assert!(v.contains(&Vector::new(f, p)));
        }

        #[test]
        fn divisibility_characterization(
            k in 2usize..4,
            d in 1usize..3,
            roots in prop::collection::vec(prop::collection::vec(1u64..6, 0..3), 3),
            probe in 1u64..6,
        ) {
            let f = gf(7);
            let idx = MonomialIndex::new(k, d);
            let roots: Vec<Vec<u64>> = roots.into_iter().take(k - 1).map(|mut r| { r.truncate(d); r }).collect();
            let z = z_vector(&roots, &idx, f).unwrap();
            for var in 0..k - 1 {
                let space = vanishing_basis(var, probe, &idx, f);
                prop_assert_eq!(space.contains(&z), roots[var].contains(&probe));
            }
        }
    }
}
