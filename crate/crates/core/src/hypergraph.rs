//! k-uniform and k-partite hypergraphs, the k-uniform access-structure
//! predicate, and the plain-text formats for both hypergraph kinds.
//!
//! Vertices are 1-based. Edges of a [`Hypergraph`] are stored sorted
//! ascending; edges of a [`PartiteHypergraph`] are tuples ordered by part.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rand::seq::index;

use crate::error::{Error, Result};
use crate::rng::RandomTape;

/// Default cap on the number of tuples a complement may enumerate.
pub const COMPLEMENT_CAP: u128 = 1 << 24;

/// Binomial coefficient as `u128`, saturating on overflow.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Calls `f` on every `k`-subset of `items` in lexicographic order.
pub fn for_each_subset<F: FnMut(&[usize])>(items: &[usize], k: usize, mut f: F) {
    let n = items.len();
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    let mut buf: Vec<usize> = idx.iter().map(|&i| items[i]).collect();
    loop {
        f(&buf);
        let Some(pos) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return;
        };
        idx[pos] += 1;
        for j in pos + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
        for j in pos..k {
            buf[j] = items[idx[j]];
        }
    }
}

/// A k-uniform hypergraph on vertices `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    n: usize,
    k: usize,
    edges: BTreeSet<Vec<usize>>,
}

impl Hypergraph {
    /// Validates and canonicalizes (sorts) every edge. Duplicate edges are rejected.
    pub fn new(n: usize, k: usize, edges: impl IntoIterator<Item = Vec<usize>>) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidArgument(format!("uniformity k = {k} must be >= 2")));
        }
        let mut set = BTreeSet::new();
        for mut e in edges {
            e.sort_unstable();
            Self::check_edge(n, k, &e)?;
            if !set.insert(e.clone()) {
                return Err(Error::InvalidArgument(format!("duplicate edge {e:?}")));
            }
        }
        Ok(Hypergraph { n, k, edges: set })
    }

    fn check_edge(n: usize, k: usize, e: &[usize]) -> Result<()> {
        if e.len() != k {
            return Err(Error::InvalidArgument(format!("edge {e:?} does not have {k} vertices")));
        }
        if let Some(&v) = e.iter().find(|&&v| v == 0 || v > n) {
            return Err(Error::Range { line: 0, vertex: v });
        }
        if e.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument(format!("edge {e:?} repeats a vertex")));
        }
        Ok(())
    }

    /// Every k-subset of `1..=n`.
    pub fn complete(n: usize, k: usize) -> Result<Self> {
        let count = binomial(n as u64, k as u64);
        if count > COMPLEMENT_CAP {
            return Err(Error::SizeOverflow { required: count, cap: COMPLEMENT_CAP });
        }
        let vertices: Vec<usize> = (1..=n).collect();
        let mut edges = Vec::new();
        for_each_subset(&vertices, k, |s| edges.push(s.to_vec()));
        Hypergraph::new(n, k, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edges(&self) -> &BTreeSet<Vec<usize>> {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// `set` must be sorted ascending.
    pub fn contains_edge(&self, set: &[usize]) -> bool {
        self.edges.contains(set)
    }

    /// All k-subsets of `1..=n` that are not edges.
    pub fn complement(&self) -> Result<Hypergraph> {
        let full = Hypergraph::complete(self.n, self.k)?;
        let edges = full.edges.difference(&self.edges).cloned().collect();
        Ok(Hypergraph { n: self.n, k: self.k, edges })
    }

    /// `|E| <= n^(1+beta)`.
    pub fn is_sparse(&self, beta: f64) -> bool {
        (self.edge_count() as f64) <= (self.n as f64).powf(1.0 + beta) + 1e-9
    }

    /// `|E| >= C(n,k) - n^(1+beta)`.
    pub fn is_dense(&self, beta: f64) -> bool {
        let total = binomial(self.n as u64, self.k as u64) as f64;
        (self.edge_count() as f64) >= total - (self.n as f64).powf(1.0 + beta) - 1e-9
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let (line_no, header) = lines
            .next()
            .ok_or_else(|| format_err(0, "missing `kuniform` header"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 || fields[0] != "kuniform" {
            return Err(format_err(line_no, "expected `kuniform <k> <n> <m>`"));
        }
        let k = parse_num(line_no, fields[1])?;
        let n = parse_num(line_no, fields[2])?;
        let m = parse_num(line_no, fields[3])?;
        if k < 2 {
            return Err(format_err(line_no, "k must be at least 2"));
        }
        let mut edges = BTreeSet::new();
        for (line_no, line) in lines {
            if edges.len() == m {
                return Err(format_err(line_no, "more edge lines than declared"));
            }
            let e = parse_ids(line_no, line)?;
            if e.len() != k {
                return Err(format_err(line_no, &format!("edge must list exactly {k} vertices")));
            }
            if let Some(&v) = e.iter().find(|&&v| v == 0 || v > n) {
                return Err(Error::Range { line: line_no, vertex: v });
            }
            if e.windows(2).any(|w| w[0] >= w[1]) {
                return Err(format_err(line_no, "edge vertices must be strictly ascending"));
            }
            if !edges.insert(e) {
                return Err(format_err(line_no, "duplicate edge"));
            }
        }
        if edges.len() != m {
            return Err(format_err(0, &format!("declared {m} edges, found {}", edges.len())));
        }
        Ok(Hypergraph { n, k, edges })
    }

    pub fn serialize(&self) -> String {
        let mut out = format!("kuniform {} {} {}\n", self.k, self.n, self.edges.len());
        for e in &self.edges {
            out.push_str(&join(e));
            out.push('\n');
        }
        out
    }
}

/// The k-uniform (forbidden k-homogeneous) access structure of a hypergraph:
/// a set is qualified when it contains an edge or has at least `k+1` members.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AccessStructure {
    base: Hypergraph,
}

impl AccessStructure {
    pub fn new(base: Hypergraph) -> Self {
        AccessStructure { base }
    }

    pub fn base(&self) -> &Hypergraph {
        &self.base
    }

    /// `set` must be sorted ascending and lie in `1..=n`.
    pub fn is_qualified(&self, set: &[usize]) -> bool {
        let k = self.base.k;
        if set.len() > k {
            return true;
        }
        set.len() == k && self.base.contains_edge(set)
    }
}

/// Which family a degree is measured in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Edges,
    Complement,
}

/// A k-partite k-uniform hypergraph: parts `A_1..A_k` and edges that meet
/// every part in exactly one vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartiteHypergraph {
    parts: Vec<Vec<usize>>,
    edges: BTreeSet<Vec<usize>>,
}

impl PartiteHypergraph {
    /// Parts are sorted; each edge must be a tuple `(a_1, .., a_k)` with `a_i ∈ A_i`.
    pub fn new(parts: Vec<Vec<usize>>, edges: impl IntoIterator<Item = Vec<usize>>) -> Result<Self> {
        if parts.len() < 2 {
            return Err(Error::InvalidArgument("a partite hypergraph needs k >= 2 parts".into()));
        }
        let mut parts = parts;
        let mut seen = BTreeSet::new();
        for p in &mut parts {
            p.sort_unstable();
            for &v in p.iter() {
                if v == 0 {
                    return Err(Error::InvalidArgument("vertex ids are 1-based".into()));
                }
                if !seen.insert(v) {
                    return Err(Error::InvalidArgument(format!("vertex {v} appears in two parts")));
                }
            }
        }
        let mut set = BTreeSet::new();
        for e in edges {
            if e.len() != parts.len() {
                return Err(Error::InvalidArgument(format!(
                    "edge {e:?} does not have {} vertices",
                    parts.len()
                )));
            }
            if let Some((_, &v)) = e
                .iter()
                .enumerate()
                .find(|(i, v)| parts[*i].binary_search(v).is_err())
            {
                return Err(Error::Range { line: 0, vertex: v });
            }
            if !set.insert(e.clone()) {
                return Err(Error::InvalidArgument(format!("duplicate edge {e:?}")));
            }
        }
        Ok(PartiteHypergraph { parts, edges: set })
    }

    pub(crate) fn from_parts_unchecked(parts: Vec<Vec<usize>>, edges: BTreeSet<Vec<usize>>) -> Self {
        PartiteHypergraph { parts, edges }
    }

    pub fn k(&self) -> usize {
        self.parts.len()
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn part_sizes(&self) -> Vec<usize> {
        self.parts.iter().map(Vec::len).collect()
    }

    pub fn edges(&self) -> &BTreeSet<Vec<usize>> {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// All vertices, sorted.
    pub fn vertices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.parts.iter().flatten().copied().collect();
        v.sort_unstable();
        v
    }

    /// Index of the part containing `v`.
    pub fn part_of(&self, v: usize) -> Option<usize> {
        self.parts.iter().position(|p| p.binary_search(&v).is_ok())
    }

    /// Number of one-per-part tuples, `∏ m_i`.
    pub fn universe_size(&self) -> u128 {
        self.parts
            .iter()
            .try_fold(1u128, |acc, p| acc.checked_mul(p.len() as u128))
            .unwrap_or(u128::MAX)
    }

    /// Number of edges containing `v`.
    pub fn degree(&self, v: usize) -> usize {
        match self.part_of(v) {
            Some(i) => self.edges.iter().filter(|e| e[i] == v).count(),
            None => 0,
        }
    }

    /// Degrees of every vertex of the last part, in the requested family.
    pub fn last_part_degrees(&self, family: Family) -> BTreeMap<usize, usize> {
        let k = self.k();
        let mut deg: BTreeMap<usize, usize> = self.parts[k - 1].iter().map(|&v| (v, 0)).collect();
        for e in &self.edges {
            *deg.get_mut(&e[k - 1]).expect("edge vertex in last part") += 1;
        }
        if family == Family::Complement {
            let slots: usize = self.parts[..k - 1].iter().map(Vec::len).product();
            for d in deg.values_mut() {
                *d = slots - *d;
            }
        }
        deg
    }

    /// Every one-per-part tuple that is not an edge, over the same parts.
    pub fn complement(&self) -> Result<PartiteHypergraph> {
        self.complement_with_cap(COMPLEMENT_CAP)
    }

    pub fn complement_with_cap(&self, cap: u128) -> Result<PartiteHypergraph> {
        let total = self.universe_size();
        if total > cap {
            return Err(Error::SizeOverflow { required: total, cap });
        }
        let mut edges = BTreeSet::new();
        if self.parts.iter().all(|p| !p.is_empty()) {
            let k = self.k();
            let mut idx = vec![0usize; k];
            loop {
                let t: Vec<usize> = (0..k).map(|i| self.parts[i][idx[i]]).collect();
                if !self.edges.contains(&t) {
                    edges.insert(t);
                }
                let Some(pos) = (0..k).rev().find(|&i| idx[i] + 1 < self.parts[i].len()) else {
                    break;
                };
                idx[pos] += 1;
                for j in pos + 1..k {
                    idx[j] = 0;
                }
            }
        }
        Ok(PartiteHypergraph {
            parts: self.parts.clone(),
            edges,
        })
    }

    /// Keeps only the listed vertices in the last part, and the edges through them.
    pub fn restrict_last_part(&self, keep: &[usize]) -> PartiteHypergraph {
        let mut parts = self.parts.clone();
        let k = parts.len();
        let keep: BTreeSet<usize> = keep.iter().copied().collect();
        parts[k - 1].retain(|v| keep.contains(v));
        let edges = self
            .edges
            .iter()
            .filter(|e| keep.contains(&e[k - 1]))
            .cloned()
            .collect();
        PartiteHypergraph { parts, edges }
    }

    /// Sub-hypergraph on the given parts (each a subset of the original
    /// part); edges are the original edges lying inside them.
    pub fn restrict(&self, parts: Vec<Vec<usize>>) -> PartiteHypergraph {
        let mut parts = parts;
        for p in &mut parts {
            p.sort_unstable();
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| e.iter().zip(&parts).all(|(v, p)| p.binary_search(v).is_ok()))
            .cloned()
            .collect();
        PartiteHypergraph { parts, edges }
    }

    /// A set qualifies when it contains an edge or has at least `k+1` members.
    pub fn is_qualified(&self, set: &[usize]) -> bool {
        let k = self.k();
        if set.len() > k {
            return true;
        }
        if set.len() < k {
            return false;
        }
        let mut tuple = vec![0usize; k];
        for &v in set {
            match self.part_of(v) {
                Some(i) if tuple[i] == 0 => tuple[i] = v,
                _ => return false,
            }
        }
        self.edges.contains(&tuple)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let (line_no, header) = lines
            .next()
            .ok_or_else(|| format_err(0, "missing `kpartite` header"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 || fields[0] != "kpartite" {
            return Err(format_err(line_no, "expected `kpartite <k> <m>`"));
        }
        let k = parse_num(line_no, fields[1])?;
        let m = parse_num(line_no, fields[2])?;
        if k < 2 {
            return Err(format_err(line_no, "k must be at least 2"));
        }
        let mut parts = Vec::with_capacity(k);
        let mut seen = BTreeSet::new();
        for i in 1..=k {
            let (line_no, line) = lines
                .next()
                .ok_or_else(|| format_err(0, &format!("missing `part {i}` line")))?;
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() < 3 || fields[0] != "part" {
                return Err(format_err(line_no, "expected `part <i> <size> <ids...>`"));
            }
            if parse_num(line_no, fields[1])? != i {
                return Err(format_err(line_no, &format!("expected part {i}")));
            }
            let size = parse_num(line_no, fields[2])?;
            let ids = fields[3..]
                .iter()
                .map(|s| parse_num(line_no, s))
                .collect::<Result<Vec<_>>>()?;
            if ids.len() != size {
                return Err(format_err(line_no, &format!("part declares {size} ids, lists {}", ids.len())));
            }
            for &v in &ids {
                if v == 0 {
                    return Err(Error::Range { line: line_no, vertex: v });
                }
                if !seen.insert(v) {
                    return Err(format_err(line_no, &format!("vertex {v} listed twice")));
                }
            }
            let mut ids = ids;
            ids.sort_unstable();
            parts.push(ids);
        }
        let mut edges = BTreeSet::new();
        for (line_no, line) in lines {
            if edges.len() == m {
                return Err(format_err(line_no, "more edge lines than declared"));
            }
            let e = parse_ids(line_no, line)?;
            if e.len() != k {
                return Err(format_err(line_no, &format!("edge must list exactly {k} vertices")));
            }
            for (i, &v) in e.iter().enumerate() {
                if parts[i].binary_search(&v).is_err() {
                    return Err(Error::Range { line: line_no, vertex: v });
                }
            }
            if !edges.insert(e) {
                return Err(format_err(line_no, "duplicate edge"));
            }
        }
        if edges.len() != m {
            return Err(format_err(0, &format!("declared {m} edges, found {}", edges.len())));
        }
        Ok(PartiteHypergraph { parts, edges })
    }

    pub fn serialize(&self) -> String {
        let mut out = format!("kpartite {} {}\n", self.k(), self.edges.len());
        for (i, p) in self.parts.iter().enumerate() {
            let _ = write!(out, "part {} {}", i + 1, p.len());
            for v in p {
                let _ = write!(out, " {v}");
            }
            out.push('\n');
        }
        for e in &self.edges {
            out.push_str(&join(e));
            out.push('\n');
        }
        out
    }
}

fn join(ids: &[usize]) -> String {
    ids.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

pub(crate) fn format_err(line: usize, message: &str) -> Error {
    Error::Format {
        line,
        message: message.to_string(),
    }
}

/// Non-blank, non-comment lines with their 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub(crate) fn parse_num(line: usize, s: &str) -> Result<usize> {
    s.parse()
        .map_err(|_| format_err(line, &format!("`{s}` is not a non-negative integer")))
}

fn parse_ids(line: usize, s: &str) -> Result<Vec<usize>> {
    s.split_whitespace().map(|t| parse_num(line, t)).collect()
}

/// `⌊n^(1+β)⌋`, the edge budget of the sparse regime.
pub fn sparse_edge_count(n: usize, beta: f64) -> u128 {
    ((n as f64).powf(1.0 + beta) + 1e-9).floor() as u128
}

/// The `rank`-th k-subset of `1..=n` in lexicographic order.
fn unrank_subset(n: usize, k: usize, mut rank: u128) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut x = 1;
    while out.len() < k {
        let rest = binomial((n - x) as u64, (k - out.len() - 1) as u64);
        if rank < rest {
            out.push(x);
        } else {
            rank -= rest;
        }
        x += 1;
    }
    out
}

/// `m` distinct k-subsets of `1..=n`, uniform among all such families.
pub fn random_hypergraph(n: usize, k: usize, m: u128, tape: &mut RandomTape) -> Result<Hypergraph> {
    let available = binomial(n as u64, k as u64);
    if m > available {
        return Err(Error::InfeasibleCount { requested: m, available });
    }
    let len = usize::try_from(available).map_err(|_| Error::SizeOverflow {
        required: available,
        cap: usize::MAX as u128,
    })?;
    let edges = index::sample(tape, len, m as usize)
        .into_iter()
        .map(|r| unrank_subset(n, k, r as u128));
    Hypergraph::new(n, k, edges)
}

/// `⌊n^(1+β)⌋` uniform random edges.
pub fn random_sparse(n: usize, k: usize, beta: f64, tape: &mut RandomTape) -> Result<Hypergraph> {
    random_hypergraph(n, k, sparse_edge_count(n, beta), tape)
}

/// Complement of [`random_sparse`].
pub fn random_dense(n: usize, k: usize, beta: f64, tape: &mut RandomTape) -> Result<Hypergraph> {
    random_sparse(n, k, beta, tape)?.complement()
}
