//! Scheme builders: the sparse and dense k-partite gadgets, the full
//! k-uniform pipelines, the `(k+1)`-threshold overlay and share-size reports.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rand::Rng;

use crate::decompose::{bucket_by_degree, plan_partition, random_block_partition, random_partite_cover};
use crate::error::{Error, Result};
use crate::field::{smallest_prime_at_least, Matrix, PrimeField, Vector};
use crate::hypergraph::{AccessStructure, Family, Hypergraph, PartiteHypergraph};
use crate::msp::{or_compose, threshold_msp, MonotoneSpanProgram};
use crate::polygadget::{vanishing_basis, z_vector, EvalPoints, MonomialIndex, VanishingSpace};
use crate::rng::RandomTape;

/// Uniform resamples of the dense target after the constant polynomial fails.
pub const TARGET_RESAMPLES: usize = 64;

/// How the field modulus is picked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldChoice {
    /// Smallest prime that fits the construction.
    Auto,
    Fixed(u64),
}

impl FieldChoice {
    fn resolve(self, required: u64) -> Result<PrimeField> {
        match self {
            FieldChoice::Auto => PrimeField::new(smallest_prime_at_least(required.max(2))),
            FieldChoice::Fixed(q) => {
                let f = PrimeField::new(q)?;
                if q < required {
                    return Err(Error::FieldTooSmall { modulus: q, required });
                }
                Ok(f)
            }
        }
    }
}

/// The access structure a scheme is meant to realize.
#[derive(Clone, Debug, PartialEq)]
pub enum Structure {
    /// Edges of a k-uniform hypergraph plus every set of size `>= k+1`.
    Uniform(AccessStructure),
    /// Sets containing an edge of a k-partite hypergraph, plus every set of
    /// size `>= k+1`. A partite scheme is a single gadget without the
    /// threshold overlay, so it only realizes this on sets of size `<= k`.
    Partite(PartiteHypergraph),
    /// Every set of size `>= t` among `1..=n`.
    Threshold { t: usize, n: usize },
}

impl Structure {
    pub fn universe(&self) -> Vec<usize> {
        match self {
            Structure::Uniform(a) => (1..=a.base().n()).collect(),
            Structure::Partite(h) => h.vertices(),
            Structure::Threshold { n, .. } => (1..=*n).collect(),
        }
    }

    /// Uniformity of the structure (the threshold for threshold schemes).
    pub fn k(&self) -> usize {
        match self {
            Structure::Uniform(a) => a.base().k(),
            Structure::Partite(h) => h.k(),
            Structure::Threshold { t, .. } => *t,
        }
    }

    /// `set` must be sorted ascending.
    pub fn is_qualified(&self, set: &[usize]) -> bool {
        match self {
            Structure::Uniform(a) => a.is_qualified(set),
            Structure::Partite(h) => h.is_qualified(set),
            Structure::Threshold { t, .. } => set.len() >= *t,
        }
    }
}

/// How a scheme was produced.
#[derive(Clone, Debug, PartialEq)]
pub struct Provenance {
    pub path: String,
    pub seed: Option<u64>,
    pub beta: Option<f64>,
}

/// Share sizes of a built scheme, with the reference bounds it is compared to.
#[derive(Clone, Debug, PartialEq)]
pub struct SchemeReport {
    pub per_participant: BTreeMap<usize, usize>,
    pub total: usize,
    pub modulus: u64,
    pub columns: usize,
    pub leaves: usize,
    pub bounds: Vec<(String, f64)>,
    pub flags: Vec<(String, bool)>,
    pub counts: Vec<(String, usize)>,
}

impl SchemeReport {
    fn measure(msp: &MonotoneSpanProgram, universe: &[usize]) -> SchemeReport {
        let mut per_participant: BTreeMap<usize, usize> = universe.iter().map(|&p| (p, 0)).collect();
        for p in msp.participants() {
            per_participant.insert(p, msp.row_count(p));
        }
        SchemeReport {
            total: per_participant.values().sum(),
            per_participant,
            modulus: msp.field().modulus(),
            columns: msp.cols(),
            leaves: 0,
            bounds: Vec::new(),
            flags: Vec::new(),
            counts: Vec::new(),
        }
    }

    pub fn bound(&self, name: &str) -> Option<f64> {
        self.bounds.iter().find(|(n, _)| n == name).map(|&(_, v)| v)
    }

    pub fn flag(&self, name: &str) -> Option<bool> {
        self.flags.iter().find(|(n, _)| n == name).map(|&(_, v)| v)
    }

    pub fn count(&self, name: &str) -> Option<usize> {
        self.counts.iter().find(|(n, _)| n == name).map(|&(_, v)| v)
    }

    /// `total / bound`.
    pub fn ratio(&self, name: &str) -> Option<f64> {
        self.bound(name).map(|b| self.total as f64 / b)
    }

    /// Plain-text table followed by a `key=value` section.
    pub fn to_text(&self) -> String {
        let mut out = String::from("participant rows\n");
        for (p, r) in &self.per_participant {
            let _ = writeln!(out, "{p} {r}");
        }
        out.push_str("[summary]\n");
        let _ = writeln!(out, "total={}", self.total);
        let _ = writeln!(out, "modulus={}", self.modulus);
        let _ = writeln!(out, "columns={}", self.columns);
        let _ = writeln!(out, "leaves={}", self.leaves);
        for (name, v) in &self.bounds {
            let _ = writeln!(out, "bound.{name}={v:.4}");
            let _ = writeln!(out, "ratio.{name}={:.6}", self.total as f64 / v);
        }
        for (name, v) in &self.flags {
            let _ = writeln!(out, "flag.{name}={v}");
        }
        for (name, v) in &self.counts {
            let _ = writeln!(out, "count.{name}={v}");
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BuiltScheme {
    pub msp: MonotoneSpanProgram,
    pub structure: Structure,
    pub report: SchemeReport,
    pub provenance: Provenance,
}

impl BuiltScheme {
    /// Program text preceded by a comment line describing its origin.
    pub fn to_text(&self) -> String {
        let mut out = format!("# path={}", self.provenance.path);
        if let Some(seed) = self.provenance.seed {
            let _ = write!(out, " seed={seed}");
        }
        if let Some(beta) = self.provenance.beta {
            let _ = write!(out, " beta={beta}");
        }
        out.push('\n');
        out.push_str(&self.msp.to_text());
        out
    }
}

/// Recomputes the counts from the program and carries over the bounds.
pub fn share_size_report(s: &BuiltScheme) -> SchemeReport {
    let mut r = SchemeReport::measure(&s.msp, &s.structure.universe());
    r.leaves = s.report.leaves;
    r.bounds = s.report.bounds.clone();
    r.flags = s.report.flags.clone();
    r.counts = s.report.counts.clone();
    r
}

/// `m_k + (d+1)^(k−1) Σ_{j<k} m_j`.
pub fn sparse_leaf_bound(part_sizes: &[usize], d: usize) -> u128 {
    let k = part_sizes.len();
    let head: u128 = part_sizes[..k - 1].iter().map(|&m| m as u128).sum();
    part_sizes[k - 1] as u128 + (d as u128 + 1).pow(k as u32 - 1) * head
}

/// `2 m_k + (d+1)^(k−1) Σ_{j<k} m_j`.
pub fn dense_leaf_bound(part_sizes: &[usize], d: usize) -> u128 {
    sparse_leaf_bound(part_sizes, d) + part_sizes[part_sizes.len() - 1] as u128
}

/// `n^((k²−3k+2)/(k²−2k+2) + ((k²−3k+3)/(k²−2k+2)) β) · log2^(k+1) n`.
pub fn asymptotic_bound(n: usize, k: usize, beta: f64) -> f64 {
    let k = k as f64;
    let denom = k * k - 2.0 * k + 2.0;
    let exp = (k * k - 3.0 * k + 2.0) / denom + (k * k - 3.0 * k + 3.0) / denom * beta;
    let nf = n as f64;
    nf.powf(exp) * nf.log2().powf(k + 1.0)
}

/// Smallest admissible modulus for a leaf: evaluation points `1..=Σ_{j<k} m_j`.
fn leaf_required(h: &PartiteHypergraph) -> u64 {
    let k = h.k();
    h.part_sizes()[..k - 1].iter().sum::<usize>() as u64 + 1
}

fn unit_row(cols: usize, at: usize) -> Vec<u64> {
    let mut row = vec![0u64; cols];
    row[at] = 1;
    row
}

fn padded(k: usize, poly: &[u64]) -> Vec<u64> {
    let mut row = vec![0u64; k];
    row.extend_from_slice(poly);
    row
}

/// Rows of every vertex in parts `1..k−1`: the vanishing basis padded by `k`
/// header zeros, then the header unit for its part.
fn head_rows(
    h: &PartiteHypergraph,
    idx: &MonomialIndex,
    pts: &EvalPoints,
    field: PrimeField,
    rows: &mut Vec<Vec<u64>>,
    labels: &mut Vec<usize>,
) -> Vec<VanishingSpace> {
    let k = h.k();
    let cols = k + idx.len();
    let mut spaces = Vec::new();
    for j in 0..k - 1 {
        for (i, &v) in h.parts()[j].iter().enumerate() {
            let space = vanishing_basis(j, pts.point(j, i), idx, field);
            for r in 0..space.dim() {
                rows.push(padded(k, space.basis.row(r)));
                labels.push(v);
            }
            rows.push(unit_row(cols, k - 1 - j));
            labels.push(v);
            spaces.push(space);
        }
    }
    spaces
}

/// For each last-part vertex, the evaluation points of its neighbours in
/// every other part under `edges`.
fn neighbour_roots(
    h: &PartiteHypergraph,
    edges: &BTreeSet<Vec<usize>>,
    pts: &EvalPoints,
) -> BTreeMap<usize, Vec<Vec<u64>>> {
    let k = h.k();
    let point_of: Vec<BTreeMap<usize, u64>> = (0..k - 1)
        .map(|j| h.parts()[j].iter().enumerate().map(|(i, &v)| (v, pts.point(j, i))).collect())
        .collect();
    let mut sets: BTreeMap<usize, Vec<BTreeSet<u64>>> = h.parts()[k - 1]
        .iter()
        .map(|&c| (c, vec![BTreeSet::new(); k - 1]))
        .collect();
    for e in edges {
        let entry = sets.get_mut(&e[k - 1]).expect("edge vertex in last part");
        for j in 0..k - 1 {
            entry[j].insert(point_of[j][&e[j]]);
        }
    }
    sets.into_iter()
        .map(|(c, s)| (c, s.into_iter().map(|r| r.into_iter().collect()).collect()))
        .collect()
}

/// Program for the sparse gadget over a fixed field, with its degree `d`.
pub fn sparse_leaf(h: &PartiteHypergraph, field: PrimeField) -> Result<(MonotoneSpanProgram, usize)> {
    let k = h.k();
    let d = h.last_part_degrees(Family::Edges).into_values().max().unwrap_or(0);
    let idx = MonomialIndex::new(k, d);
    let pts = EvalPoints::new(&h.part_sizes()[..k - 1], field)?;
    let cols = k + idx.len();
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    head_rows(h, &idx, &pts, field, &mut rows, &mut labels);
    for (c, roots) in neighbour_roots(h, h.edges(), &pts) {
        let z = z_vector(&roots, &idx, field)?;
        let mut row = unit_row(k, 0);
        row.extend_from_slice(z.entries());
        rows.push(row);
        labels.push(c);
    }
    let mut target = vec![1u64; k];
    target.resize(cols, 0);
    let msp = MonotoneSpanProgram::new(
        Matrix::from_rows(field, cols, rows)?,
        labels,
        Vector::new(field, target),
    )?;
    Ok((msp, d))
}

pub fn build_sparse_partite(h: &PartiteHypergraph, field: FieldChoice) -> Result<BuiltScheme> {
    let f = field.resolve(leaf_required(h))?;
    let (msp, d) = sparse_leaf(h, f)?;
    let structure = Structure::Partite(h.clone());
    let mut report = SchemeReport::measure(&msp, &structure.universe());
    report.leaves = 1;
    report.bounds.push(("leaf".into(), sparse_leaf_bound(&h.part_sizes(), d) as f64));
    report.counts.push(("degree".into(), d));
    Ok(BuiltScheme {
        msp,
        structure,
        report,
        provenance: Provenance {
            path: "sparse-partite".into(),
            seed: None,
            beta: None,
        },
    })
}

/// Rows of the dense gadget, assembled before the target is chosen.
#[derive(Clone, Debug)]
pub struct DenseGadget {
    field: PrimeField,
    k: usize,
    degree: usize,
    poly_len: usize,
    matrix: Matrix,
    labels: Vec<usize>,
    spaces: Vec<VanishingSpace>,
    edges: Vec<Vec<usize>>,
    part_sizes: Vec<usize>,
}

impl DenseGadget {
    /// Builds the rows from the complement of `h`: vanishing spaces for parts
    /// `1..k−1`, and for each last-part vertex the rows `(0,…,0,z)` and
    /// `(1,0,…,0)`.
    pub fn new(h: &PartiteHypergraph, field: PrimeField) -> Result<Self> {
        let k = h.k();
        let comp = h.complement()?;
        let d = comp.last_part_degrees(Family::Edges).into_values().max().unwrap_or(0);
        let idx = MonomialIndex::new(k, d);
        let pts = EvalPoints::new(&h.part_sizes()[..k - 1], field)?;
        let cols = k + idx.len();
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        let spaces = head_rows(h, &idx, &pts, field, &mut rows, &mut labels);
        for (c, roots) in neighbour_roots(h, comp.edges(), &pts) {
            let z = z_vector(&roots, &idx, field)?;
            rows.push(padded(k, z.entries()));
            labels.push(c);
            rows.push(unit_row(cols, 0));
            labels.push(c);
        }
        Ok(DenseGadget {
            field,
            k,
            degree: d,
            poly_len: idx.len(),
            matrix: Matrix::from_rows(field, cols, rows)?,
            labels,
            spaces,
            edges: h.edges().iter().cloned().collect(),
            part_sizes: h.part_sizes(),
        })
    }

    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    /// Maximum complement degree in the last part.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn bound(&self) -> u128 {
        dense_leaf_bound(&self.part_sizes, self.degree)
    }

    fn with_target(&self, w: &[u64]) -> Result<MonotoneSpanProgram> {
        let mut target = vec![1u64; self.k];
        target.extend_from_slice(w);
        MonotoneSpanProgram::new(self.matrix.clone(), self.labels.clone(), Vector::new(self.field, target))
    }

    fn admissible(&self, w: &[u64]) -> Result<Option<MonotoneSpanProgram>> {
        let wv = Vector::new(self.field, w.to_vec());
        if self.spaces.iter().any(|s| s.contains(&wv)) {
            return Ok(None);
        }
        let msp = self.with_target(w)?;
        Ok(self.edges.iter().all(|e| msp.accepts(e)).then_some(msp))
    }

    /// Target `(1,…,1,w)`: `w` is the constant polynomial 1 if that works,
    /// otherwise uniform draws from `tape`. A candidate is kept only if it
    /// lies outside every vanishing space and every edge is accepted.
    pub fn select_target(&self, tape: &mut RandomTape) -> Result<MonotoneSpanProgram> {
        let q = self.field.modulus();
        let mut w = vec![0u64; self.poly_len];
        w[0] = 1;
        if let Some(msp) = self.admissible(&w)? {
            return Ok(msp);
        }
        for _ in 0..TARGET_RESAMPLES {
            let w: Vec<u64> = (0..self.poly_len).map(|_| tape.gen_range(0..q)).collect();
            if let Some(msp) = self.admissible(&w)? {
                return Ok(msp);
            }
        }
        Err(Error::TargetSelectionFailure {
            attempts: TARGET_RESAMPLES + 1,
        })
    }
}

pub fn build_dense_partite(h: &PartiteHypergraph, field: FieldChoice, tape: &mut RandomTape) -> Result<BuiltScheme> {
    let f = field.resolve(leaf_required(h))?;
    let gadget = DenseGadget::new(h, f)?;
    let msp = gadget.select_target(tape)?;
    let structure = Structure::Partite(h.clone());
    let mut report = SchemeReport::measure(&msp, &structure.universe());
    report.leaves = 1;
    report.bounds.push(("leaf".into(), gadget.bound() as f64));
    report.counts.push(("degree".into(), gadget.degree()));
    Ok(BuiltScheme {
        msp,
        structure,
        report,
        provenance: Provenance {
            path: "dense-partite".into(),
            seed: Some(tape.seed()),
            beta: None,
        },
    })
}

/// ORs `base` with the `(k+1, n)` threshold program so that every set of at
/// least `k+1` participants is accepted. Returns `base` normalized when no
/// such set exists.
pub fn uniform_overlay(base: &MonotoneSpanProgram, k: usize, n: usize, field: PrimeField) -> Result<MonotoneSpanProgram> {
    let base = base.normalize_target();
    if k + 1 > n {
        return Ok(base);
    }
    let thr = threshold_msp(k + 1, n, field)?;
    or_compose(&[base, thr])
}

/// Program with no rows; accepts nothing.
fn empty_program(field: PrimeField) -> MonotoneSpanProgram {
    MonotoneSpanProgram::new(Matrix::zeros(field, 0, 1), Vec::new(), Vector::unit(field, 1, 0))
        .expect("well-formed empty program")
}

pub fn threshold_scheme(t: usize, n: usize, field: FieldChoice) -> Result<BuiltScheme> {
    let f = field.resolve(n as u64 + 1)?;
    let msp = threshold_msp(t, n, f)?;
    let structure = Structure::Threshold { t, n };
    let mut report = SchemeReport::measure(&msp, &structure.universe());
    report.leaves = 1;
    Ok(BuiltScheme {
        msp,
        structure,
        report,
        provenance: Provenance {
            path: "threshold".into(),
            seed: None,
            beta: None,
        },
    })
}

/// One leaf of a pipeline and the label of its randomness sub-stream.
#[derive(Clone, Debug)]
struct LeafPlan {
    hypergraph: PartiteHypergraph,
    label: String,
}

struct Plan {
    leaves: Vec<LeafPlan>,
    pieces: usize,
    groups: usize,
    partitioned: usize,
}

/// Cover, bucket the last part by degree in `family`, and split each bucket
/// into block combinations when the partition condition holds.
fn plan_leaves(h: &Hypergraph, family: Family, tape: &RandomTape) -> Result<Plan> {
    let n = h.n();
    let k = h.k();
    let mut cover_tape = tape.split("cover");
    let pieces = random_partite_cover(h, &mut cover_tape)?;
    let mut plan = Plan {
        leaves: Vec::new(),
        pieces: pieces.len(),
        groups: 0,
        partitioned: 0,
    };
    for (c, piece) in pieces.iter().enumerate() {
        let buckets = bucket_by_degree(piece, family, n);
        let mut groups: Vec<(String, Vec<usize>)> = Vec::new();
        if family == Family::Complement && !buckets.zero.is_empty() {
            groups.push(("zero".into(), buckets.zero.clone()));
        }
        for (s, b) in buckets.buckets.iter().enumerate() {
            if !b.is_empty() {
                groups.push((s.to_string(), b.clone()));
            }
        }
        for (label, group) in groups {
            let sub = piece.restrict_last_part(&group);
            if sub.edge_count() == 0 {
                continue;
            }
            plan.groups += 1;
            let d = sub.last_part_degrees(family).into_values().max().unwrap_or(0);
            let partition = plan_partition(n, d, group.len(), k);
            if partition.condition_met {
                plan.partitioned += 1;
                let mut block_tape = tape.split(&format!("blocks/{c}/{label}"));
                let blocks = random_block_partition(&sub, &partition, family, &mut block_tape)?;
                for (combo, leaf) in blocks.combinations(&sub) {
                    if leaf.edge_count() == 0 {
                        continue;
                    }
                    let combo: Vec<String> = combo.iter().map(usize::to_string).collect();
                    plan.leaves.push(LeafPlan {
                        hypergraph: leaf,
                        label: format!("{c}/{label}/{}", combo.join("-")),
                    });
                }
            } else {
                plan.leaves.push(LeafPlan {
                    hypergraph: sub,
                    label: format!("{c}/{label}/all"),
                });
            }
        }
    }
    Ok(plan)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Sparse,
    Dense,
}

fn build_uniform(h: &Hypergraph, beta: f64, tape: &RandomTape, field: FieldChoice, mode: Mode) -> Result<BuiltScheme> {
    if !(0.0..1.0).contains(&beta) {
        return Err(Error::InvalidArgument(format!("beta {beta} outside [0, 1)")));
    }
    let n = h.n();
    let k = h.k();
    let family = match mode {
        Mode::Sparse => Family::Edges,
        Mode::Dense => Family::Complement,
    };
    let plan = plan_leaves(h, family, tape)?;
    let required = plan
        .leaves
        .iter()
        .map(|l| leaf_required(&l.hypergraph))
        .max()
        .unwrap_or(2)
        .max(n as u64 + 2);
    let f = field.resolve(required)?;

    let mut programs = Vec::with_capacity(plan.leaves.len());
    let mut leaf_sum: u128 = 0;
    for leaf in &plan.leaves {
        let msp = match mode {
            Mode::Sparse => {
                let (msp, d) = sparse_leaf(&leaf.hypergraph, f)?;
                leaf_sum += sparse_leaf_bound(&leaf.hypergraph.part_sizes(), d);
                msp
            }
            Mode::Dense => {
                let gadget = DenseGadget::new(&leaf.hypergraph, f)?;
                leaf_sum += gadget.bound();
                let mut target_tape = tape.split(&format!("target/{}", leaf.label));
                gadget.select_target(&mut target_tape)?
            }
        };
        programs.push(msp.normalize_target());
    }
    let base = if programs.is_empty() {
        empty_program(f)
    } else {
        or_compose(&programs)?
    };
    let leaf_rows = base.rows();
    let msp = uniform_overlay(&base, k, n, f)?;

    let structure = Structure::Uniform(AccessStructure::new(h.clone()));
    let mut report = SchemeReport::measure(&msp, &structure.universe());
    report.leaves = plan.leaves.len();
    let overlay_rows = msp.rows() - leaf_rows;
    report.bounds.push(("construction".into(), (leaf_sum + overlay_rows as u128) as f64));
    report.bounds.push(("asymptotic".into(), asymptotic_bound(n, k, beta)));
    let regime = match mode {
        Mode::Sparse => h.is_sparse(beta),
        Mode::Dense => h.is_dense(beta),
    };
    report.flags.push(("regime".into(), regime));
    report.flags.push(("overlay".into(), k < n));
    report.counts.push(("pieces".into(), plan.pieces));
    report.counts.push(("groups".into(), plan.groups));
    report.counts.push(("partitioned_groups".into(), plan.partitioned));
    report.counts.push(("leaf_rows".into(), leaf_rows));
    let path = match mode {
        Mode::Sparse => "sparse-uniform",
        Mode::Dense => "dense-uniform",
    };
    Ok(BuiltScheme {
        msp,
        structure,
        report,
        provenance: Provenance {
            path: path.into(),
            seed: Some(tape.seed()),
            beta: Some(beta),
        },
    })
}

/// Scheme for a sparse k-uniform hypergraph: cover, degree buckets, optional
/// block partitions, sparse gadget per leaf, OR-composition, overlay.
pub fn build_sparse_uniform(h: &Hypergraph, beta: f64, tape: &RandomTape, field: FieldChoice) -> Result<BuiltScheme> {
    build_uniform(h, beta, tape, field, Mode::Sparse)
}

/// Scheme for a dense k-uniform hypergraph: same pipeline with degrees taken
/// in the complement and the dense gadget per leaf.
pub fn build_dense_uniform(h: &Hypergraph, beta: f64, tape: &RandomTape, field: FieldChoice) -> Result<BuiltScheme> {
    build_uniform(h, beta, tape, field, Mode::Dense)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::for_each_subset;

    /// Every one-per-part tuple.
    fn tuples(h: &PartiteHypergraph) -> Vec<Vec<usize>> {
        let comp = h.complement().unwrap();
        let mut all: Vec<Vec<usize>> = comp.edges().iter().chain(h.edges()).cloned().collect();
        all.sort();
        all
    }

    fn sorted(e: &[usize]) -> Vec<usize> {
        let mut s = e.to_vec();
        s.sort_unstable();
        s
    }

    #[test]
    fn sparse_leaf_size_matches_formula_for_regular_bipartite() {
        // m_1 = m_2 = 4, every right vertex of degree 2.
        let edges = vec![
            vec![1, 5], vec![2, 5], vec![2, 6], vec![3, 6],
            vec![3, 7], vec![4, 7], vec![4, 8], vec![1, 8],
        ];
        let h = PartiteHypergraph::new(vec![vec![1, 2, 3, 4], vec![5, 6, 7, 8]], edges).unwrap();
        let s = build_sparse_partite(&h, FieldChoice::Auto).unwrap();
        assert_eq!(s.report.total, 16);
        assert_eq!(s.report.bound("leaf"), Some(16.0));
        assert_eq!(s.msp.cols(), 2 + 3);
        for t in tuples(&h) {
            assert_eq!(s.msp.accepts(&t), h.edges().contains(&t), "{t:?}");
        }
    }

    #[test]
    fn sparse_leaf_three_partite_bound() {
        let parts = vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]];
        let edges = vec![vec![1, 4, 7], vec![2, 5, 8], vec![3, 6, 9]];
        let h = PartiteHypergraph::new(parts, edges).unwrap();
        assert_eq!(sparse_leaf_bound(&h.part_sizes(), 1), 27);
        let s = build_sparse_partite(&h, FieldChoice::Auto).unwrap();
        assert!(s.report.total <= 27);
        for e in h.edges() {
            assert!(s.msp.accepts(e));
        }
    }

    #[test]
    fn sparse_leaf_without_edges_accepts_no_k_set() {
        let h = PartiteHypergraph::new(vec![vec![1, 2], vec![3, 4]], Vec::<Vec<usize>>::new()).unwrap();
        let s = build_sparse_partite(&h, FieldChoice::Auto).unwrap();
        for_each_subset(&[1, 2, 3, 4], 2, |set| assert!(!s.msp.accepts(set)));
    }

    #[test]
    fn fixed_field_must_fit() {
        let h = PartiteHypergraph::new(vec![vec![1, 2, 3], vec![4]], vec![vec![1, 4]]).unwrap();
        assert_eq!(
            build_sparse_partite(&h, FieldChoice::Fixed(3)).unwrap_err(),
            Error::FieldTooSmall { modulus: 3, required: 4 }
        );
        assert!(build_sparse_partite(&h, FieldChoice::Fixed(5)).is_ok());
    }

    #[test]
    fn dense_leaf_size_example() {
        // n = 4 on the left, every right vertex misses exactly one left vertex.
        let left = vec![1, 2, 3, 4];
        let right = vec![5, 6, 7, 8];
        let mut edges = Vec::new();
        for (i, &c) in right.iter().enumerate() {
            for (j, &a) in left.iter().enumerate() {
                if i != j {
                    edges.push(vec![a, c]);
                }
            }
        }
        let h = PartiteHypergraph::new(vec![left, right], edges).unwrap();
        let mut tape = RandomTape::new(1);
        let s = build_dense_partite(&h, FieldChoice::Auto, &mut tape).unwrap();
        assert_eq!(s.report.bound("leaf"), Some(16.0));
        assert_eq!(s.report.total, 16);
        for t in tuples(&h) {
            assert_eq!(s.msp.accepts(&t), h.edges().contains(&t), "{t:?}");
        }
    }

    #[test]
    fn complete_partite_dense_accepts_all_tuples() {
        for k in 2..=3 {
            let parts: Vec<Vec<usize>> = (0..k).map(|j| vec![2 * j + 1, 2 * j + 2]).collect();
            let full = PartiteHypergraph::new(parts.clone(), Vec::<Vec<usize>>::new())
                .unwrap()
                .complement()
                .unwrap();
            let h = PartiteHypergraph::new(parts, full.edges().iter().cloned()).unwrap();
            let gadget = DenseGadget::new(&h, PrimeField::new(5).unwrap()).unwrap();
            assert_eq!(gadget.degree(), 0);
            // Empty complement: every z is the constant polynomial.
            let m = gadget.matrix.clone();
            let z_rows: Vec<usize> = (0..m.rows()).filter(|&i| m.get(i, k) == 1 && m.get(i, 0) == 0).collect();
            assert_eq!(z_rows.len(), 2);
            let msp = gadget.select_target(&mut RandomTape::new(0)).unwrap();
            for t in h.edges() {
                assert!(msp.accepts(t));
            }
        }
    }

    #[test]
    fn overlay_accepts_large_sets_and_keeps_small_ones() {
        let f = PrimeField::new(11).unwrap();
        let (n, k) = (6, 2);
        let empty = empty_program(f);
        let o = uniform_overlay(&empty, k, n, f).unwrap();
        assert_eq!(o.rows(), n);
        let items: Vec<usize> = (1..=n).collect();
        for_each_subset(&items, k + 1, |s| assert!(o.accepts(s)));
        for_each_subset(&items, k, |s| assert!(!o.accepts(s)));

        let base = threshold_msp(2, 3, f).unwrap();
        let o = uniform_overlay(&base, k, n, f).unwrap();
        assert_eq!(o.rows(), base.rows() + n);
        for size in 0..=k {
            for_each_subset(&items, size, |s| assert_eq!(o.accepts(s), base.accepts(s), "{s:?}"));
        }
        assert!(matches!(uniform_overlay(&base, 2, 12, f), Err(Error::FieldTooSmall { .. })));
    }

    #[test]
    fn sparse_pipeline_accepts_edges_and_overlay() {
        let h = Hypergraph::new(7, 2, vec![vec![1, 2], vec![2, 3], vec![4, 7], vec![5, 6], vec![1, 7]]).unwrap();
        let tape = RandomTape::new(11);
        let s = build_sparse_uniform(&h, 0.0, &tape, FieldChoice::Auto).unwrap();
        assert!(s.report.modulus >= 9);
        assert_eq!(s.report.total, s.msp.rows());
        assert!(s.report.ratio("construction").unwrap() <= 1.0);
        let items: Vec<usize> = (1..=7).collect();
        for size in 0..=3 {
            for_each_subset(&items, size, |set| {
                let q = s.structure.is_qualified(set);
                assert_eq!(s.msp.accepts(set), q, "{set:?}");
            });
        }
        let secret = 5;
        let shares = s.msp.distribute(secret, &mut RandomTape::new(2));
        for e in h.edges() {
            assert_eq!(s.msp.reconstruct(e, &shares).unwrap(), secret);
        }
        assert_eq!(share_size_report(&s), s.report);
    }

    #[test]
    fn dense_pipeline_complete_hypergraph() {
        for k in 2..=3 {
            let h = Hypergraph::complete(6, k).unwrap();
            let tape = RandomTape::new(3);
            let s = build_dense_uniform(&h, 0.0, &tape, FieldChoice::Auto).unwrap();
            let items: Vec<usize> = (1..=6).collect();
            for size in k..=6 {
                for_each_subset(&items, size, |set| assert!(s.msp.accepts(set), "{set:?}"));
            }
            for size in 0..k {
                for_each_subset(&items, size, |set| assert!(!s.msp.accepts(set), "{set:?}"));
            }
        }
    }

    #[test]
    fn dense_pipeline_k2_matches_structure() {
        let n = 7;
        let h = Hypergraph::complete(n, 2).unwrap();
        let edges: Vec<Vec<usize>> = h
            .edges()
            .iter()
            .filter(|e| !matches!(e.as_slice(), [1, 2] | [3, 5] | [2, 7] | [4, 6]))
            .cloned()
            .collect();
        let h = Hypergraph::new(n, 2, edges).unwrap();
        let s = build_dense_uniform(&h, 0.0, &RandomTape::new(9), FieldChoice::Auto).unwrap();
        let items: Vec<usize> = (1..=n).collect();
        for size in 0..=3 {
            for_each_subset(&items, size, |set| {
                assert_eq!(s.msp.accepts(set), s.structure.is_qualified(&sorted(set)), "{set:?}");
            });
        }
    }

    #[test]
    fn pipelines_are_seed_deterministic() {
        let h = Hypergraph::new(8, 2, vec![vec![1, 2], vec![3, 4], vec![5, 8], vec![2, 6], vec![6, 7]]).unwrap();
        let a = build_sparse_uniform(&h, 0.25, &RandomTape::new(5), FieldChoice::Auto).unwrap();
        let b = build_sparse_uniform(&h, 0.25, &RandomTape::new(5), FieldChoice::Auto).unwrap();
        assert_eq!(a.to_text(), b.to_text());
        assert_eq!(a.report.to_text(), b.report.to_text());
    }

    #[test]
    fn report_text_has_summary() {
        let s = threshold_scheme(2, 3, FieldChoice::Auto).unwrap();
        let text = s.report.to_text();
        assert!(text.starts_with("participant rows\n1 1\n2 1\n3 1\n[summary]\ntotal=3\nmodulus=5\n"));
        assert!(s.to_text().starts_with("# path=threshold\nmsp 5 3 2\n"));
    }

    #[test]
    fn asymptotic_bound_k2() {
        // k = 2: n^(β/2) · log2^3 n.
        let v = asymptotic_bound(16, 2, 0.0);
        assert!((v - 64.0).abs() < 1e-9);
        let v = asymptotic_bound(16, 2, 1.0);
        assert!((v - 16f64.powf(0.5) * 64.0).abs() < 1e-9);
    }
}
