//! Brute-force ground truth: exhaustive subset audits, exhaustive
//! enumeration of the dealer's randomness, and Lagrange interpolation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::hypergraph::{binomial, for_each_subset};
use crate::msp::MonotoneSpanProgram;
use crate::scheme::BuiltScheme;

/// Default cap on enumerated subsets and on enumerated randomness vectors.
pub const ENUMERATION_CAP: u128 = 1 << 22;

/// Outcome of comparing a program's acceptance with an access structure on
/// every subset up to a size bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditReport {
    pub universe: usize,
    pub max_size: usize,
    pub examined: u64,
    /// Qualified sets the program rejects.
    pub failures: Vec<Vec<usize>>,
    /// Unqualified sets the program accepts.
    pub violations: Vec<Vec<usize>>,
}

impl AuditReport {
    pub fn is_clean(&self) -> bool {
        self.failures.is_empty() && self.violations.is_empty()
    }

    pub fn disagreements(&self) -> usize {
        self.failures.len() + self.violations.len()
    }

    /// Header lines, then one witness set per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "universe={}", self.universe);
        let _ = writeln!(out, "max_size={}", self.max_size);
        let _ = writeln!(out, "examined={}", self.examined);
        let _ = writeln!(out, "failures={}", self.failures.len());
        let _ = writeln!(out, "violations={}", self.violations.len());
        for (tag, list) in [("failure", &self.failures), ("violation", &self.violations)] {
            for set in list {
                let ids: Vec<String> = set.iter().map(usize::to_string).collect();
                let _ = writeln!(out, "{tag} {}", ids.join(" "));
            }
        }
        out
    }
}

/// Number of subsets of size at most `max_size` of an `n`-set.
pub fn subsets_up_to(n: usize, max_size: usize) -> u128 {
    (0..=max_size.min(n)).map(|i| binomial(n as u64, i as u64)).sum()
}

/// Classifies every subset of `universe` up to `max_size` by `qualified` and
/// by the program's rank test. Subsets are visited by size, then
/// lexicographically.
pub fn audit_msp<F: Fn(&[usize]) -> bool>(
    msp: &MonotoneSpanProgram,
    universe: &[usize],
    qualified: F,
    max_size: usize,
) -> Result<AuditReport> {
    let required = subsets_up_to(universe.len(), max_size);
    if required > ENUMERATION_CAP {
        return Err(Error::EnumerationTooLarge {
            required,
            cap: ENUMERATION_CAP,
        });
    }
    let mut items = universe.to_vec();
    items.sort_unstable();
    let mut report = AuditReport {
        universe: items.len(),
        max_size,
        examined: 0,
        failures: Vec::new(),
        violations: Vec::new(),
    };
    for size in 0..=max_size.min(items.len()) {
        for_each_subset(&items, size, |set| {
            report.examined += 1;
            let q = qualified(set);
            let private = msp.privacy_rank_check(set);
            if q && private {
                report.failures.push(set.to_vec());
            } else if !q && !private {
                report.violations.push(set.to_vec());
            }
        });
    }
    Ok(report)
}

pub fn audit_acceptance(scheme: &BuiltScheme, max_size: usize) -> Result<AuditReport> {
    let structure = &scheme.structure;
    audit_msp(&scheme.msp, &structure.universe(), |s| structure.is_qualified(s), max_size)
}

/// Distribution of a set's shares for each secret.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrivacyTable {
    /// `distributions[s]` maps each share tuple of the set to the number of
    /// randomness vectors producing it under secret `s`.
    pub distributions: Vec<BTreeMap<Vec<u64>, u64>>,
}

impl PrivacyTable {
    /// True when every secret induces the same multiset of share tuples.
    pub fn passes(&self) -> bool {
        self.distributions.windows(2).all(|w| w[0] == w[1])
    }
}

/// Runs the dealer on every randomness vector `r ∈ F^cols`, groups the runs
/// by the secret `⟨target, r⟩` they share, and records the share tuples seen
/// by `set` (its rows in matrix order).
pub fn exhaustive_privacy_count(msp: &MonotoneSpanProgram, set: &[usize]) -> Result<PrivacyTable> {
    let f = msp.field();
    let q = f.modulus();
    let cols = msp.cols();
    let per_secret = (q as u128).checked_pow(cols as u32 - 1).unwrap_or(u128::MAX);
    if per_secret > ENUMERATION_CAP {
        return Err(Error::EnumerationTooLarge {
            required: per_secret,
            cap: ENUMERATION_CAP,
        });
    }
    let members: BTreeSet<usize> = set.iter().copied().collect();
    let rows: Vec<&[u64]> = (0..msp.rows())
        .filter(|&i| members.contains(&msp.labels()[i]))
        .map(|i| msp.matrix().row(i))
        .collect();
    let target = msp.target().entries();
    let mut distributions = vec![BTreeMap::new(); q as usize];
    let mut r = vec![0u64; cols];
    loop {
        let secret = f.dot(target, &r);
        let shares: Vec<u64> = rows.iter().map(|row| f.dot(row, &r)).collect();
        *distributions[secret as usize].entry(shares).or_insert(0) += 1;
        let Some(pos) = (0..cols).rev().find(|&i| r[i] + 1 < q) else {
            break;
        };
        r[pos] += 1;
        for x in &mut r[pos + 1..] {
            *x = 0;
        }
    }
    Ok(PrivacyTable { distributions })
}

/// `P(0)` for the polynomial through `points`:
/// `Σ_j y_j ∏_{l≠j} x_l / (x_l − x_j)`.
pub fn lagrange_reconstruct(points: &[(u64, u64)], field: PrimeField) -> Result<u64> {
    let xs: Vec<u64> = points.iter().map(|&(x, _)| field.reduce(x)).collect();
    let mut seen = BTreeSet::new();
    for &x in &xs {
        if x == 0 {
            return Err(Error::InvalidArgument("interpolation point x = 0".into()));
        }
        if !seen.insert(x) {
            return Err(Error::DuplicatePoint(x));
        }
    }
    let mut acc = 0;
    for (j, &(_, y)) in points.iter().enumerate() {
        let mut num = 1;
        let mut den = 1;
        for (l, &xl) in xs.iter().enumerate() {
            if l != j {
                num = field.mul(num, xl);
                den = field.mul(den, field.sub(xl, xs[j]));
            }
        }
        let coeff = field.mul(num, field.inv(den)?);
        acc = field.add(acc, field.mul(field.reduce(y), coeff));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Matrix, Vector};
    use crate::msp::threshold_msp;
    use crate::rng::RandomTape;
    use crate::scheme::{threshold_scheme, FieldChoice};

    fn gf(q: u64) -> PrimeField {
        PrimeField::new(q).unwrap()
    }

    #[test]
    fn lagrange_examples() {
        assert_eq!(lagrange_reconstruct(&[(1, 0), (2, 2)], gf(5)).unwrap(), 3);
        assert_eq!(lagrange_reconstruct(&[(4, 9)], gf(11)).unwrap(), 9);
        assert_eq!(lagrange_reconstruct(&[(1, 0), (1, 2)], gf(5)), Err(Error::DuplicatePoint(1)));
        assert!(lagrange_reconstruct(&[(0, 1)], gf(5)).is_err());
    }

    #[test]
    fn shamir_audits_clean() {
        for n in 1..=6 {
            for t in 1..=n {
                let s = threshold_scheme(t, n, FieldChoice::Auto).unwrap();
                let a = audit_acceptance(&s, n).unwrap();
                assert!(a.is_clean(), "t={t} n={n}");
                assert_eq!(a.examined, 1 << n);
            }
        }
    }

    #[test]
    fn audit_reports_witnesses() {
        let s = threshold_scheme(2, 4, FieldChoice::Auto).unwrap();
        // Claim the threshold is 3: every pair becomes a violation.
        let a = audit_msp(&s.msp, &[1, 2, 3, 4], |set| set.len() >= 3, 4).unwrap();
        assert!(a.failures.is_empty());
        assert_eq!(a.violations.len(), 6);
        assert_eq!(a.violations[0], vec![1, 2]);
        let text = a.to_text();
        assert!(text.contains("violations=6\nviolation 1 2\n"));
        // Claim the threshold is 1: every singleton is a failure.
        let b = audit_msp(&s.msp, &[1, 2, 3, 4], |set| !set.is_empty(), 4).unwrap();
        assert_eq!(b.failures.len(), 4);
    }

    #[test]
    fn audit_cap() {
        let s = threshold_scheme(2, 40, FieldChoice::Auto).unwrap();
        assert!(matches!(audit_acceptance(&s, 40), Err(Error::EnumerationTooLarge { .. })));
        assert!(audit_acceptance(&s, 2).is_ok());
    }

    #[test]
    fn shamir_singleton_is_uniform() {
        let m = threshold_msp(2, 3, gf(5)).unwrap();
        let table = exhaustive_privacy_count(&m, &[2]).unwrap();
        assert!(table.passes());
        for dist in &table.distributions {
            assert_eq!(dist.len(), 5);
            assert!(dist.values().all(|&c| c == 1));
        }
        assert!(exhaustive_privacy_count(&m, &[]).unwrap().passes());
        assert!(!exhaustive_privacy_count(&m, &[1, 3]).unwrap().passes());
    }

    #[test]
    fn privacy_count_matches_rank_check() {
        let f = gf(3);
        let m = MonotoneSpanProgram::new(
            Matrix::from_rows(f, 3, vec![vec![1, 1, 0], vec![0, 1, 0], vec![1, 0, 1], vec![0, 0, 1], vec![0, 1, 2]]).unwrap(),
            vec![1, 2, 3, 4, 4],
            Vector::new(f, vec![1, 0, 0]),
        )
        .unwrap();
        for mask in 0u32..16 {
            let set: Vec<usize> = (1..=4).filter(|v| mask & (1 << (v - 1)) != 0).collect();
            let table = exhaustive_privacy_count(&m, &set).unwrap();
            assert_eq!(table.passes(), m.privacy_rank_check(&set), "{set:?}");
        }
    }

    #[test]
    fn lagrange_agrees_with_program() {
        let f = gf(7);
        for n in 1..=6 {
            for t in 1..=n {
                let m = threshold_msp(t, n, f).unwrap();
                let shares = m.distribute(4, &mut RandomTape::new((n * 10 + t) as u64));
                for mask in 0u32..(1 << n) {
                    let set: Vec<usize> = (1..=n).filter(|v| mask & (1 << (v - 1)) != 0).collect();
                    if set.len() < t {
                        continue;
                    }
                    let pts: Vec<(u64, u64)> = set.iter().map(|&p| (p as u64, shares.shares[&p].entries()[0])).collect();
                    assert_eq!(lagrange_reconstruct(&pts, f).unwrap(), m.reconstruct(&set, &shares).unwrap());
                }
            }
        }
    }
}
