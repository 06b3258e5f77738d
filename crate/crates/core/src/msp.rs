//! Monotone span programs and the linear secret-sharing scheme they induce.
//!
//! An MSP is a matrix `M` over GF(q) whose rows are labelled by participants,
//! together with a nonzero target vector `t`. A set `X` is accepted when the
//! rows labelled by `X` span `t`. Sharing a secret `σ` draws `r` uniformly
//! from `{r : ⟨t, r⟩ = σ}` and hands out `M r`; an accepted set recombines
//! its shares with any `v` satisfying `v M_X = t`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Matrix, PrimeField, Vector};
use crate::hypergraph::{content_lines, format_err};
use crate::rng::RandomTape;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneSpanProgram {
    matrix: Matrix,
    labels: Vec<usize>,
    target: Vector,
    sparse_rows: Vec<Vec<(usize, u64)>>,
    rows_of: BTreeMap<usize, Vec<usize>>,
}

/// Recombination coefficients: `(row index, coefficient)` pairs.
pub type Certificate = Vec<(usize, u64)>;

impl MonotoneSpanProgram {
    pub fn new(matrix: Matrix, labels: Vec<usize>, target: Vector) -> Result<Self> {
        if labels.len() != matrix.rows() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for {} rows",
                labels.len(),
                matrix.rows()
            )));
        }
        if target.dim() != matrix.cols() {
            return Err(Error::DimensionMismatch(format!(
                "target has {} entries, matrix has {} columns",
                target.dim(),
                matrix.cols()
            )));
        }
        if target.field() != matrix.field() {
            return Err(Error::FieldMismatch(
                target.field().modulus(),
                matrix.field().modulus(),
            ));
        }
        if target.is_zero() {
            return Err(Error::InvalidArgument("target vector must be nonzero".into()));
        }
        let sparse_rows = (0..matrix.rows())
            .map(|i| {
                matrix
                    .row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0)
                    .map(|(j, &v)| (j, v))
                    .collect()
            })
            .collect();
        let mut rows_of: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &p) in labels.iter().enumerate() {
            rows_of.entry(p).or_default().push(i);
        }
        Ok(MonotoneSpanProgram {
            matrix,
            labels,
            target,
            sparse_rows,
            rows_of,
        })
    }

    pub fn field(&self) -> PrimeField {
        self.matrix.field()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn target(&self) -> &Vector {
        &self.target
    }

    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }

    /// Participants owning at least one row, ascending.
    pub fn participants(&self) -> Vec<usize> {
        self.rows_of.keys().copied().collect()
    }

    pub fn row_count(&self, participant: usize) -> usize {
        self.rows_of.get(&participant).map_or(0, Vec::len)
    }

    /// Row indices owned by the members of `set`, ascending.
    pub fn rows_for(&self, set: &[usize]) -> Vec<usize> {
        let mut rows: Vec<usize> = set
            .iter()
            .filter_map(|p| self.rows_of.get(p))
            .flatten()
            .copied()
            .collect();
        rows.sort_unstable();
        rows.dedup();
        rows
    }

    /// Coefficients `v` with `Σ v_i M_i = target` over the rows of `set`, or
    /// `None` when the set is rejected.
    pub fn certificate(&self, set: &[usize]) -> Option<Certificate> {
        let rows = self.rows_for(set);
        let support: Vec<usize> = self
            .target
            .entries()
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(j, _)| j)
            .collect();
        if support.len() == 1 {
            self.certificate_by_components(&rows, support[0])
        } else {
            self.solve_on_support(&rows)
        }
    }

    /// With a target supported on a single column `c`, the rows split into
    /// groups that share no other column; the target is spanned iff one group
    /// spans it on its own.
    fn certificate_by_components(&self, rows: &[usize], c: usize) -> Option<Certificate> {
        let mut parent: Vec<usize> = (0..rows.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut owner: HashMap<usize, usize> = HashMap::new();
        for (local, &r) in rows.iter().enumerate() {
            for &(j, _) in &self.sparse_rows[r] {
                if j == c {
                    continue;
                }
                match owner.get(&j) {
                    Some(&other) => {
                        let (a, b) = (find(&mut parent, local), find(&mut parent, other));
                        if a != b {
                            parent[a.max(b)] = a.min(b);
                        }
                    }
                    None => {
                        owner.insert(j, local);
                    }
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for local in 0..rows.len() {
            let root = find(&mut parent, local);
            groups.entry(root).or_default().push(rows[local]);
        }
        groups
            .into_values()
            .filter(|g| g.iter().any(|&r| self.matrix.get(r, c) != 0))
            .find_map(|g| self.solve_on_support(&g))
    }

    /// Dense solve restricted to the columns touched by `rows` or the target.
    fn solve_on_support(&self, rows: &[usize]) -> Option<Certificate> {
        let f = self.field();
        let mut cols: Vec<usize> = rows
            .iter()
            .flat_map(|&r| self.sparse_rows[r].iter().map(|&(j, _)| j))
            .collect();
        cols.sort_unstable();
        cols.dedup();
        let t = self.target.entries();
        let outside = t
            .iter()
            .enumerate()
            .any(|(j, &v)| v != 0 && cols.binary_search(&j).is_err());
        if outside {
            return None;
        }
        let local: HashMap<usize, usize> = cols.iter().enumerate().map(|(i, &j)| (j, i)).collect();
        let mut sub = Matrix::zeros(f, rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for &(j, v) in &self.sparse_rows[r] {
                sub.set(i, local[&j], v);
            }
        }
        let sub_t = Vector::new(f, cols.iter().map(|&j| t[j]).collect());
        let v = sub.solve_left(&sub_t)?;
        Some(
            rows.iter()
                .zip(v.entries())
                .filter(|(_, &c)| c != 0)
                .map(|(&r, &c)| (r, c))
                .collect(),
        )
    }

    pub fn accepts(&self, set: &[usize]) -> bool {
        self.certificate(set).is_some()
    }

    /// True when the rows of `set` do not span the target, which certifies
    /// that the set learns nothing about the secret.
    pub fn privacy_rank_check(&self, set: &[usize]) -> bool {
        !self.accepts(set)
    }

    /// Randomness vector with `⟨target, r⟩ = secret`: every coordinate except
    /// the first nonzero target position is uniform, and that one is solved for.
    pub fn sample_randomness(&self, secret: u64, tape: &mut RandomTape) -> Vector {
        let f = self.field();
        let q = f.modulus();
        let t = self.target.entries();
        let pivot = t.iter().position(|&v| v != 0).expect("target is nonzero");
        let mut r: Vec<u64> = (0..t.len())
            .map(|i| if i == pivot { 0 } else { tape.gen_range(0..q) })
            .collect();
        let partial = f.dot(t, &r);
        let inv = f.inv(t[pivot]).expect("pivot is nonzero");
        r[pivot] = f.mul(f.sub(f.reduce(secret), partial), inv);
        Vector::new(f, r)
    }

    pub fn distribute(&self, secret: u64, tape: &mut RandomTape) -> ShareBundle {
        let r = self.sample_randomness(secret, tape);
        self.shares_for(&r)
    }

    /// Shares `M r` sliced by participant.
    pub fn shares_for(&self, r: &Vector) -> ShareBundle {
        let f = self.field();
        let row_value = |i: usize| {
            self.sparse_rows[i]
                .iter()
                .fold(0u64, |acc, &(j, v)| f.add(acc, f.mul(v, r.entries()[j])))
        };
        let shares = self
            .rows_of
            .iter()
            .map(|(&p, rows)| (p, Vector::new(f, rows.iter().map(|&i| row_value(i)).collect())))
            .collect();
        ShareBundle { field: f, shares }
    }

    pub fn reconstruct(&self, set: &[usize], shares: &ShareBundle) -> Result<u64> {
        if shares.field != self.field() {
            return Err(Error::FieldMismatch(shares.field.modulus(), self.field().modulus()));
        }
        let cert = self.certificate(set).ok_or(Error::NotQualified)?;
        let f = self.field();
        let mut acc = 0;
        for (row, coeff) in cert {
            let p = self.labels[row];
            let share = shares
                .shares
                .get(&p)
                .ok_or_else(|| Error::InvalidArgument(format!("missing share of participant {p}")))?;
            let pos = self.rows_of[&p].binary_search(&row).expect("row belongs to participant");
            let value = *share.entries().get(pos).ok_or_else(|| {
                Error::InvalidArgument(format!("share of participant {p} is too short"))
            })?;
            acc = f.add(acc, f.mul(coeff, value));
        }
        Ok(acc)
    }

    /// Equivalent program with target `e_1`: `M' = M Q` for an invertible `Q`
    /// with `target · Q = e_1`, so `v M = target ⇔ v M' = e_1`.
    pub fn normalize_target(&self) -> MonotoneSpanProgram {
        let f = self.field();
        let cols = self.cols();
        let e1 = Vector::unit(f, cols, 0);
        if self.target == e1 {
            return self.clone();
        }
        let t = self.target.entries();
        let pivot = t.iter().position(|&v| v != 0).expect("target is nonzero");
        // B has first row `target`; the other rows are unit vectors, with e_1
        // taking the pivot's place. Q = B⁻¹ then satisfies target · Q = e_1.
        let mut b = Matrix::identity(f, cols);
        for j in 0..cols {
            b.set(0, j, t[j]);
        }
        if pivot != 0 {
            b.set(pivot, pivot, 0);
            b.set(pivot, 0, 1);
        }
        let q = b.inverse().expect("B is invertible because target[pivot] != 0");
        let matrix = self.matrix.mul(&q).expect("square change of basis");
        MonotoneSpanProgram::new(matrix, self.labels.clone(), e1).expect("dimensions preserved")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("msp {} {} {}\n", self.field().modulus(), self.rows(), self.cols());
        out.push_str("target");
        for v in self.target.entries() {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
        for i in 0..self.rows() {
            let _ = write!(out, "row {}", self.labels[i]);
            for v in self.matrix.row(i) {
                let _ = write!(out, " {v}");
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let (line_no, header) = lines.next().ok_or_else(|| format_err(0, "missing `msp` header"))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 4 || h[0] != "msp" {
            return Err(format_err(line_no, "expected `msp <q> <rows> <cols>`"));
        }
        let q = parse_u64(line_no, h[1])?;
        let rows = parse_u64(line_no, h[2])? as usize;
        let cols = parse_u64(line_no, h[3])? as usize;
        let field = PrimeField::new(q).map_err(|e| format_err(line_no, &e.to_string()))?;
        let (line_no, tline) = lines.next().ok_or_else(|| format_err(0, "missing `target` line"))?;
        let t: Vec<&str> = tline.split_whitespace().collect();
        if t.first() != Some(&"target") || t.len() != cols + 1 {
            return Err(format_err(line_no, &format!("expected `target` with {cols} values")));
        }
        let target = t[1..].iter().map(|s| parse_residue(line_no, s, q)).collect::<Result<Vec<_>>>()?;
        let mut matrix = Matrix::zeros(field, 0, cols);
        let mut labels = Vec::with_capacity(rows);
        for (line_no, line) in lines {
            let r: Vec<&str> = line.split_whitespace().collect();
            if r.first() != Some(&"row") || r.len() != cols + 2 {
                return Err(format_err(line_no, &format!("expected `row <id>` with {cols} values")));
            }
            labels.push(parse_u64(line_no, r[1])? as usize);
            let vals = r[2..].iter().map(|s| parse_residue(line_no, s, q)).collect::<Result<Vec<_>>>()?;
            matrix.push_row(&vals)?;
        }
        if labels.len() != rows {
            return Err(format_err(0, &format!("declared {rows} rows, found {}", labels.len())));
        }
        MonotoneSpanProgram::new(matrix, labels, Vector::new(field, target))
    }
}

/// Shamir's `(t, n)` scheme as an MSP: participant `j` owns the row
/// `(1, j, j², …, j^(t−1))`, target `e_1`.
pub fn threshold_msp(t: usize, n: usize, field: PrimeField) -> Result<MonotoneSpanProgram> {
    if field.modulus() <= n as u64 {
        return Err(Error::FieldTooSmall {
            modulus: field.modulus(),
            required: n as u64 + 1,
        });
    }
    if t == 0 || t > n {
        return Err(Error::InvalidArgument(format!("threshold {t} outside [1, {n}]")));
    }
    let rows = (1..=n as u64)
        .map(|x| (0..t as u64).map(|e| field.pow(x, e)).collect())
        .collect();
    let matrix = Matrix::from_rows(field, t, rows)?;
    MonotoneSpanProgram::new(matrix, (1..=n).collect(), Vector::unit(field, t, 0))
}

/// Shares one secret under every program at once: the first column is
/// common, the remaining columns are laid out block-diagonally. Accepts
/// exactly the union of what the constituents accept. All inputs must use
/// one field and have target `e_1`.
pub fn or_compose(msps: &[MonotoneSpanProgram]) -> Result<MonotoneSpanProgram> {
    let first = msps
        .first()
        .ok_or_else(|| Error::InvalidArgument("nothing to compose".into()))?;
    let f = first.field();
    for m in msps {
        if m.field() != f {
            return Err(Error::FieldMismatch(f.modulus(), m.field().modulus()));
        }
        if m.target != Vector::unit(f, m.cols(), 0) {
            return Err(Error::InvalidArgument("normalize targets before composing".into()));
        }
    }
    let cols = 1 + msps.iter().map(|m| m.cols() - 1).sum::<usize>();
    let rows = msps.iter().map(|m| m.rows()).sum();
    let mut matrix = Matrix::zeros(f, rows, cols);
    let mut labels = Vec::with_capacity(rows);
    let (mut row_off, mut col_off) = (0, 1);
    for m in msps {
        for (i, sparse) in m.sparse_rows.iter().enumerate() {
            for &(j, v) in sparse {
                let dst = if j == 0 { 0 } else { col_off + j - 1 };
                matrix.set(row_off + i, dst, v);
            }
        }
        labels.extend_from_slice(&m.labels);
        row_off += m.rows();
        col_off += m.cols() - 1;
    }
    MonotoneSpanProgram::new(matrix, labels, Vector::unit(f, cols, 0))
}

/// Per-participant share vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShareBundle {
    pub field: PrimeField,
    pub shares: BTreeMap<usize, Vector>,
}

impl ShareBundle {
    /// Keeps only the listed participants.
    pub fn restrict(&self, set: &[usize]) -> ShareBundle {
        ShareBundle {
            field: self.field,
            shares: self
                .shares
                .iter()
                .filter(|(p, _)| set.contains(p))
                .map(|(&p, v)| (p, v.clone()))
                .collect(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("shares {}\n", self.field.modulus());
        for (p, v) in &self.shares {
            let _ = write!(out, "p {p}");
            for x in v.entries() {
                let _ = write!(out, " {x}");
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let (line_no, header) = lines.next().ok_or_else(|| format_err(0, "missing `shares` header"))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 2 || h[0] != "shares" {
            return Err(format_err(line_no, "expected `shares <q>`"));
        }
        let q = parse_u64(line_no, h[1])?;
        let field = PrimeField::new(q).map_err(|e| format_err(line_no, &e.to_string()))?;
        let mut shares = BTreeMap::new();
        for (line_no, line) in lines {
            let r: Vec<&str> = line.split_whitespace().collect();
            if r.len() < 2 || r[0] != "p" {
                return Err(format_err(line_no, "expected `p <id> <values...>`"));
            }
            let id = parse_u64(line_no, r[1])? as usize;
            let vals = r[2..].iter().map(|s| parse_residue(line_no, s, q)).collect::<Result<Vec<_>>>()?;
            if shares.insert(id, Vector::new(field, vals)).is_some() {
                return Err(format_err(line_no, &format!("participant {id} listed twice")));
            }
        }
        Ok(ShareBundle { field, shares })
    }
}

fn parse_u64(line: usize, s: &str) -> Result<u64> {
    s.parse()
        .map_err(|_| format_err(line, &format!("`{s}` is not a non-negative integer")))
}

fn parse_residue(line: usize, s: &str, q: u64) -> Result<u64> {
    let v = parse_u64(line, s)?;
    if v >= q {
        return Err(format_err(line, &format!("value {v} is not reduced modulo {q}")));
    }
    Ok(v)
}
