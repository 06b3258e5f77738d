//! Randomized combinatorics used by the pipelines: covers of a k-uniform
//! hypergraph by k-partite pieces, bucketing of the last part by degree, and
//! random block partitions that cap per-block degrees.

use std::collections::{BTreeSet, HashMap};

use rand::seq::index;
use rand::Rng;

use crate::error::{Error, Result};
use crate::hypergraph::{Family, Hypergraph, PartiteHypergraph};
use crate::rng::RandomTape;

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// `⌈log2 n⌉` for `n >= 1`.
pub fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// Maximum number of colorings tried before giving up on a cover:
/// `⌈3 · (k^k / k!) · k · ln(n+1)⌉ + 16`.
pub fn cover_cap(n: usize, k: usize) -> usize {
    let kk = (k as f64).powi(k as i32);
    (3.0 * (kk / factorial(k)) * k as f64 * ((n + 1) as f64).ln()).ceil() as usize + 16
}

/// Probability that a fixed edge is rainbow under a uniform k-coloring, `k!/k^k`.
pub fn rainbow_probability(k: usize) -> f64 {
    factorial(k) / (k as f64).powi(k as i32)
}

/// Colours every vertex uniformly with one of `k` colours and returns the
/// k-partite sub-hypergraph of edges that received all `k` colours.
pub fn random_coloring_piece(h: &Hypergraph, tape: &mut RandomTape) -> PartiteHypergraph {
    let k = h.k();
    let mut color = vec![0usize; h.n() + 1];
    let mut parts = vec![Vec::new(); k];
    for v in 1..=h.n() {
        let c = tape.gen_range(0..k);
        color[v] = c;
        parts[c].push(v);
    }
    let mut edges = BTreeSet::new();
    'edges: for e in h.edges() {
        let mut tuple = vec![0usize; k];
        for &v in e {
            let c = color[v];
            if tuple[c] != 0 {
                continue 'edges;
            }
            tuple[c] = v;
        }
        edges.insert(tuple);
    }
    PartiteHypergraph::from_parts_unchecked(parts, edges)
}

/// Covers every edge of `h` by k-partite sub-hypergraphs induced by random
/// colourings. Colourings that add no new edge are dropped; each kept piece
/// carries all of its rainbow edges. Fails after [`cover_cap`] colourings.
pub fn random_partite_cover(h: &Hypergraph, tape: &mut RandomTape) -> Result<Vec<PartiteHypergraph>> {
    let mut uncovered: BTreeSet<&Vec<usize>> = h.edges().iter().collect();
    let mut pieces = Vec::new();
    let cap = cover_cap(h.n(), h.k());
    let mut drawn = 0;
    while !uncovered.is_empty() {
        if drawn == cap {
            return Err(Error::CoverFailure {
                colorings: cap,
                uncovered: uncovered.len(),
            });
        }
        drawn += 1;
        let piece = random_coloring_piece(h, tape);
        let before = uncovered.len();
        for e in piece.edges() {
            let mut sorted = e.clone();
            sorted.sort_unstable();
            uncovered.remove(&sorted);
        }
        if uncovered.len() < before {
            pieces.push(piece);
        }
    }
    Ok(pieces)
}

/// Vertices of the last part grouped by degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeBuckets {
    /// `buckets[s]` holds the vertices with `n/2^(s+1) <= deg < n/2^s`
    /// (bucket 0 closed above).
    pub buckets: Vec<Vec<usize>>,
    /// Vertices of degree 0.
    pub zero: Vec<usize>,
}

/// Bucket index of a positive degree: the smallest `s >= 0` with
/// `deg · 2^(s+1) >= n`, capped at `⌈log2 n⌉ − 1`.
pub fn bucket_index(n: usize, degree: usize) -> usize {
    debug_assert!(degree >= 1);
    let top = ceil_log2(n).saturating_sub(1);
    let mut s = 0;
    while s < top && (degree as u128) << (s + 1) < n as u128 {
        s += 1;
    }
    s
}

pub fn bucket_by_degree(h: &PartiteHypergraph, family: Family, n: usize) -> DegreeBuckets {
    let count = ceil_log2(n).max(1);
    let mut buckets = vec![Vec::new(); count];
    let mut zero = Vec::new();
    for (v, d) in h.last_part_degrees(family) {
        if d == 0 {
            zero.push(v);
        } else {
            buckets[bucket_index(n, d)].push(v);
        }
    }
    DegreeBuckets { buckets, zero }
}

/// Sizing for a random block partition.
#[derive(Clone, Debug, PartialEq)]
pub struct PartitionPlan {
    pub n: usize,
    pub k: usize,
    /// `log_n d`.
    pub tau: f64,
    /// `log_n |A_k|`.
    pub lambda: f64,
    pub alpha: f64,
    pub block_size: usize,
    pub block_count: usize,
    pub degree_cap: usize,
    /// Whether `d |A_k|^(k−1) >= n^(k−1) log^(k²−2k+2) n` holds (log base 2).
    pub condition_met: bool,
}

/// Block exponent `α = (λ − (k−1)τ + (k−1)²) / (k² − 2k + 2)`.
pub fn block_exponent(k: usize, tau: f64, lambda: f64) -> f64 {
    let k = k as f64;
    let denom = k * k - 2.0 * k + 2.0;
    (lambda - (k - 1.0) * tau + (k - 1.0) * (k - 1.0)) / denom
}

pub fn plan_partition(n: usize, d: usize, ak_size: usize, k: usize) -> PartitionPlan {
    let nf = n as f64;
    let ln_n = nf.ln();
    let (tau, lambda) = if n >= 2 {
        ((d.max(1) as f64).ln() / ln_n, (ak_size.max(1) as f64).ln() / ln_n)
    } else {
        (0.0, 0.0)
    };
    let alpha = block_exponent(k, tau, lambda).clamp(0.0, 1.0);
    let block_size = (nf.powf(alpha).ceil() as usize).max(1);
    let block_count = ((2.0 * nf.powf(1.0 - alpha) * ln_n).ceil() as usize).max(1);
    let cap_exp = (k as f64 - 1.0) * alpha + tau - k as f64 + 1.0;
    let degree_cap = ((2.0 * nf.powf(cap_exp)).ceil() as usize).max(1);
    let kf = k as i32;
    let lhs = d as f64 * (ak_size as f64).powi(kf - 1);
    let rhs = nf.powi(kf - 1) * nf.log2().max(0.0).powi(kf * kf - 2 * kf + 2);
    PartitionPlan {
        n,
        k,
        tau,
        lambda,
        alpha,
        block_size,
        block_count,
        degree_cap,
        condition_met: lhs >= rhs,
    }
}

/// Blocks `A_{i,1..l}` for every part `i < k`; the last part is never split.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockPartition {
    pub blocks: Vec<Vec<Vec<usize>>>,
}

impl BlockPartition {
    /// One sub-hypergraph per block combination `(i_1, .., i_{k−1})` in
    /// lexicographic order, each with the full last part.
    pub fn combinations(&self, h: &PartiteHypergraph) -> Vec<(Vec<usize>, PartiteHypergraph)> {
        let last = h.parts()[h.k() - 1].clone();
        odometer(&self.blocks.iter().map(Vec::len).collect::<Vec<_>>())
            .into_iter()
            .map(|combo| {
                let mut parts: Vec<Vec<usize>> = combo
                    .iter()
                    .enumerate()
                    .map(|(j, &b)| self.blocks[j][b].clone())
                    .collect();
                parts.push(last.clone());
                let sub = h.restrict(parts);
                (combo, sub)
            })
            .collect()
    }
}

/// All index tuples below `limits`, lexicographic.
fn odometer(limits: &[usize]) -> Vec<Vec<usize>> {
    if limits.contains(&0) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; limits.len()];
    loop {
        out.push(idx.clone());
        let Some(pos) = (0..limits.len()).rev().find(|&i| idx[i] + 1 < limits[i]) else {
            return out;
        };
        idx[pos] += 1;
        for j in pos + 1..limits.len() {
            idx[j] = 0;
        }
    }
}

/// Maximum over block combinations and last-part vertices of the number of
/// family members inside the combination.
pub fn max_block_degree(h: &PartiteHypergraph, blocks: &[Vec<Vec<usize>>], family: Family) -> usize {
    let k = h.k();
    // vertex -> indices of the blocks (of its part) containing it
    let mut member: HashMap<usize, Vec<usize>> = HashMap::new();
    for part_blocks in blocks {
        for (b, block) in part_blocks.iter().enumerate() {
            for &v in block {
                member.entry(v).or_default().push(b);
            }
        }
    }
    let mut counts: HashMap<(Vec<usize>, usize), usize> = HashMap::new();
    for e in h.edges() {
        let lists: Vec<&Vec<usize>> = e[..k - 1]
            .iter()
            .map(|v| member.get(v).expect("edge vertex lies in some block"))
            .collect();
        for combo in odometer(&lists.iter().map(|l| l.len()).collect::<Vec<_>>()) {
            let key: Vec<usize> = combo.iter().enumerate().map(|(j, &i)| lists[j][i]).collect();
            *counts.entry((key, e[k - 1])).or_default() += 1;
        }
    }
    match family {
        Family::Edges => counts.values().copied().max().unwrap_or(0),
        Family::Complement => {
            let mut worst = 0;
            for combo in odometer(&blocks.iter().map(Vec::len).collect::<Vec<_>>()) {
                let slots: usize = combo.iter().enumerate().map(|(j, &b)| blocks[j][b].len()).product();
                for &v in &h.parts()[k - 1] {
                    let inside = counts.get(&(combo.clone(), v)).copied().unwrap_or(0);
                    worst = worst.max(slots - inside);
                }
            }
            worst
        }
    }
}

/// Draws `block_count` blocks of `block_size` vertices (uniform, without
/// replacement inside a block, independent across blocks) for every part but
/// the last, resampling everything until the blocks cover each part and every
/// combination respects `plan.degree_cap`. Gives up after
/// `64 · ⌈log2 n⌉` attempts.
pub fn random_block_partition(
    h: &PartiteHypergraph,
    plan: &PartitionPlan,
    family: Family,
    tape: &mut RandomTape,
) -> Result<BlockPartition> {
    let k = h.k();
    let attempts = 64 * ceil_log2(plan.n).max(1);
    for _ in 0..attempts {
        let mut blocks = Vec::with_capacity(k - 1);
        let mut covered = true;
        for part in &h.parts()[..k - 1] {
            let size = plan.block_size.min(part.len());
            if size >= part.len() {
                blocks.push(vec![part.clone()]);
                continue;
            }
            let mut part_blocks = Vec::with_capacity(plan.block_count);
            let mut seen = BTreeSet::new();
            for _ in 0..plan.block_count {
                let mut block: Vec<usize> = index::sample(tape, part.len(), size)
                    .into_iter()
                    .map(|i| part[i])
                    .collect();
                block.sort_unstable();
                seen.extend(block.iter().copied());
                part_blocks.push(block);
            }
            covered &= seen.len() == part.len();
            blocks.push(part_blocks);
        }
        if covered && max_block_degree(h, &blocks, family) <= plan.degree_cap {
            return Ok(BlockPartition { blocks });
        }
    }
    Err(Error::PartitionFailure { attempts })
}
