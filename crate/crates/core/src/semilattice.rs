//! Finite semilattices, their hereditary directed subsets, and the
//! semicharacter duality between the two.
//!
//! Elements are opaque `usize` identifiers with caller-supplied labels; the
//! join operation is stored as a dense table so that exhaustive verification
//! and the brute-force duality scans are O(1) per lookup.

use std::collections::BTreeSet;

use crate::batch::{filter_map_range, ExecMode};
use crate::error::{Error, Result};

/// Hard cap for the exhaustive subset scans (`2^n` subsets).
pub const EXHAUSTIVE_LIMIT: usize = 20;

/// A finite commutative idempotent semigroup, given by a total join table.
///
/// Construction validates only that the table is total and in range;
/// whether the axioms actually hold is reported by [`verify_axioms`], since
/// violations are data for this crate, not errors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSemilattice {
    labels: Vec<String>,
    join: Vec<usize>,
    unit: Option<usize>,
}

/// A non-empty, downward closed, join closed subset of a finite semilattice.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HereditarySet {
    members: BTreeSet<usize>,
}

impl HereditarySet {
    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(&x)
    }

    pub fn intersect(&self, other: &HereditarySet) -> BTreeSet<usize> {
        self.members.intersection(&other.members).copied().collect()
    }
}

/// Violations found by [`verify_axioms`]; empty iff the table is a
/// semilattice (and the unit, when present, is a unit).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub commutativity: Vec<(usize, usize)>,
    pub associativity: Vec<(usize, usize, usize)>,
    pub idempotency: Vec<usize>,
    pub unit_law: Vec<usize>,
}

impl AxiomReport {
    pub fn is_empty(&self) -> bool {
        self.commutativity.is_empty()
            && self.associativity.is_empty()
            && self.idempotency.is_empty()
            && self.unit_law.is_empty()
    }
}

impl FiniteSemilattice {
    pub fn new(labels: Vec<String>, join_table: Vec<usize>, unit: Option<usize>) -> Result<Self> {
        let n = labels.len();
        if join_table.len() != n * n {
            return Err(Error::Malformed(format!(
                "join table has {} entries, expected {}",
                join_table.len(),
                n * n
            )));
        }
        if let Some(bad) = join_table.iter().find(|&&v| v >= n) {
            return Err(Error::UnknownElement(*bad));
        }
        if let Some(u) = unit {
            if u >= n {
                return Err(Error::UnknownElement(u));
            }
        }
        Ok(Self {
            labels,
            join: join_table,
            unit,
        })
    }

    pub fn from_join_fn<F>(labels: Vec<String>, unit: Option<usize>, f: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> usize,
    {
        let n = labels.len();
        let mut table = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                table.push(f(x, y));
            }
        }
        Self::new(labels, table, unit)
    }

    /// Chain 0 < 1 < … < n-1 under max, with 0 as the unit.
    pub fn chain(labels: Vec<String>) -> Result<Self> {
        let unit = if labels.is_empty() { None } else { Some(0) };
        Self::from_join_fn(labels, unit, |x, y| x.max(y))
    }

    /// Free semilattice on `k` generators: all subsets of the generator set
    /// under union, indexed by bitmask; the empty set (index 0) is the unit.
    pub fn free(generator_labels: &[String]) -> Result<Self> {
        let k = generator_labels.len();
        if k > 16 {
            return Err(Error::SizeLimit {
                size: 1 << k,
                limit: 1 << 16,
            });
        }
        let n = 1usize << k;
        let labels = (0..n)
            .map(|mask| {
                let parts: Vec<&str> = (0..k)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| generator_labels[i].as_str())
                    .collect();
                format!("{{{}}}", parts.join(","))
            })
            .collect();
        Self::from_join_fn(labels, Some(0), |x, y| x | y)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> Result<&str> {
        self.labels
            .get(x)
            .map(String::as_str)
            .ok_or(Error::UnknownElement(x))
    }

    pub fn unit(&self) -> Option<usize> {
        self.unit
    }

    pub fn join(&self, x: usize, y: usize) -> Result<usize> {
        let n = self.len();
        if x >= n {
            return Err(Error::UnknownElement(x));
        }
        if y >= n {
            return Err(Error::UnknownElement(y));
        }
        Ok(self.join[x * n + y])
    }

    /// The order induced by the join: `x <= y` iff `x ∨ y = y`.
    pub fn leq(&self, x: usize, y: usize) -> Result<bool> {
        Ok(self.join(x, y)? == y)
    }

    /// Greatest lower bound, when one exists. Finite semilattices need not
    /// be lattices, so this is partial.
    pub fn meet(&self, x: usize, y: usize) -> Result<Option<usize>> {
        let lower: Vec<usize> = (0..self.len())
            .filter(|&z| self.leq(z, x).unwrap() && self.leq(z, y).unwrap())
            .collect();
        for &cand in &lower {
            if lower.iter().all(|&z| self.leq(z, cand).unwrap()) {
                return Ok(Some(cand));
            }
        }
        // sanity: arguments in range
        self.join(x, y)?;
        Ok(None)
    }

    /// Exhaustively checks commutativity, associativity, idempotency and the
    /// unit law, reporting every violating pair/triple.
    pub fn verify_axioms(&self) -> AxiomReport {
        self.verify_axioms_with_mode(ExecMode::auto())
    }

    pub fn verify_axioms_with_mode(&self, mode: ExecMode) -> AxiomReport {
        let n = self.len();
        let mut report = AxiomReport::default();
        for x in 0..n {
            if self.join(x, x).unwrap() != x {
                report.idempotency.push(x);
            }
            if let Some(u) = self.unit {
                if self.join(u, x).unwrap() != x {
                    report.unit_law.push(x);
                }
            }
        }
        for x in 0..n {
            for y in x + 1..n {
                if self.join(x, y).unwrap() != self.join(y, x).unwrap() {
                    report.commutativity.push((x, y));
                }
            }
        }
        let nn = (n * n * n) as u64;
        report.associativity = filter_map_range(nn, mode, |idx| {
            let idx = idx as usize;
            let (x, rest) = (idx / (n * n), idx % (n * n));
            let (y, z) = (rest / n, rest % n);
            let left = self.join(self.join(x, y).unwrap(), z).unwrap();
            let right = self.join(x, self.join(y, z).unwrap()).unwrap();
            (left != right).then_some((x, y, z))
        });
        report
    }

    /// The principal hereditary set `{y : y <= x}`.
    pub fn principal_set(&self, x: usize) -> Result<HereditarySet> {
        if x >= self.len() {
            return Err(Error::UnknownElement(x));
        }
        let members = (0..self.len())
            .filter(|&y| self.leq(y, x).unwrap())
            .collect();
        Ok(HereditarySet { members })
    }

    /// Validates the hereditary-set invariants for this semilattice:
    /// non-empty, downward closed, and closed under joins of members.
    pub fn validate_hereditary(&self, members: &BTreeSet<usize>) -> Result<HereditarySet> {
        if members.is_empty() {
            return Err(Error::InvalidHereditarySet("must be non-empty".into()));
        }
        for &x in members {
            if x >= self.len() {
                return Err(Error::UnknownElement(x));
            }
        }
        for &x in members {
            for y in 0..self.len() {
                if self.leq(y, x)? && !members.contains(&y) {
                    return Err(Error::InvalidHereditarySet(format!(
                        "{} is below {} but missing",
                        self.label(y)?,
                        self.label(x)?
                    )));
                }
            }
            for &y in members {
                let j = self.join(x, y)?;
                if !members.contains(&j) {
                    return Err(Error::InvalidHereditarySet(format!(
                        "join of {} and {} escapes the set",
                        self.label(x)?,
                        self.label(y)?
                    )));
                }
            }
        }
        Ok(HereditarySet {
            members: members.clone(),
        })
    }

    fn subset_is_hereditary(&self, mask: u64) -> bool {
        let n = self.len();
        if mask == 0 {
            return false;
        }
        for x in 0..n {
            if mask >> x & 1 == 0 {
                continue;
            }
            for y in 0..n {
                let below = self.leq(y, x).unwrap() && mask >> y & 1 == 0;
                if below {
                    return false;
                }
                if mask >> y & 1 == 1 {
                    let j = self.join(x, y).unwrap();
                    if mask >> j & 1 == 0 {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// All hereditary directed subsets, by brute force over the non-empty
    /// subsets. Refuses semilattices larger than [`EXHAUSTIVE_LIMIT`].
    pub fn enumerate_hereditary_sets(&self) -> Result<Vec<HereditarySet>> {
        self.enumerate_hereditary_sets_with_mode(ExecMode::auto())
    }

    pub fn enumerate_hereditary_sets_with_mode(&self, mode: ExecMode) -> Result<Vec<HereditarySet>> {
        let n = self.len();
        if n > EXHAUSTIVE_LIMIT {
            return Err(Error::SizeLimit {
                size: n,
                limit: EXHAUSTIVE_LIMIT,
            });
        }
        let sets = filter_map_range(1u64 << n, mode, |mask| {
            self.subset_is_hereditary(mask).then(|| HereditarySet {
                members: (0..n).filter(|&x| mask >> x & 1 == 1).collect(),
            })
        });
        Ok(sets)
    }

    fn function_is_semicharacter(&self, mask: u64) -> bool {
        if mask == 0 {
            return false; // non-zero by definition
        }
        let n = self.len();
        let val = |x: usize| mask >> x & 1;
        for x in 0..n {
            for y in 0..n {
                let j = self.join(x, y).unwrap();
                if val(j) != val(x) * val(y) {
                    return false;
                }
            }
        }
        true
    }

    /// All non-zero multiplicative {0,1}-valued functions, by brute force
    /// over all `2^n` functions. Each is the indicator of exactly one
    /// hereditary directed set.
    pub fn semicharacters(&self) -> Result<Vec<Semicharacter>> {
        self.semicharacters_with_mode(ExecMode::auto())
    }

    pub fn semicharacters_with_mode(&self, mode: ExecMode) -> Result<Vec<Semicharacter>> {
        let n = self.len();
        if n > EXHAUSTIVE_LIMIT {
            return Err(Error::SizeLimit {
                size: n,
                limit: EXHAUSTIVE_LIMIT,
            });
        }
        let found = filter_map_range(1u64 << n, mode, |mask| {
            self.function_is_semicharacter(mask).then(|| Semicharacter {
                values: (0..n).map(|x| mask >> x & 1 == 1).collect(),
            })
        });
        Ok(found)
    }

    /// Is `h` the principal set of some element? Returns the witness.
    /// In a finite semilattice every hereditary directed set is principal
    /// (its join is a member), so this returns `Some` for every valid input.
    pub fn is_principal(&self, h: &HereditarySet) -> Result<Option<usize>> {
        let h = self.validate_hereditary(&h.members)?;
        for &x in &h.members {
            if self.principal_set(x)? == h {
                return Ok(Some(x));
            }
        }
        Ok(None)
    }

    /// Covering relation of the order: pairs `(x, y)` with `x < y` and no
    /// element strictly between.
    pub fn covering_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut covers = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if x == y || !self.leq(x, y).unwrap() {
                    continue;
                }
                let strictly_between = (0..n).any(|z| {
                    z != x
                        && z != y
                        && self.leq(x, z).unwrap()
                        && self.leq(z, y).unwrap()
                });
                if !strictly_between {
                    covers.push((x, y));
                }
            }
        }
        covers
    }
}

/// A {0,1}-valued multiplicative function on a finite semilattice.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Semicharacter {
    values: Vec<bool>,
}

impl Semicharacter {
    pub fn value(&self, x: usize) -> bool {
        self.values[x]
    }

    /// The support, which is always a hereditary directed set.
    pub fn support(&self) -> BTreeSet<usize> {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(i, &v)| v.then_some(i))
            .collect()
    }

    /// The indicator of a subset, as a candidate semicharacter.
    pub fn indicator(n: usize, support: &BTreeSet<usize>) -> Self {
        Self {
            values: (0..n).map(|x| support.contains(&x)).collect(),
        }
    }

    pub fn is_multiplicative_on(&self, s: &FiniteSemilattice) -> bool {
        let val = |x: usize| u8::from(self.values[x]);
        for x in 0..s.len() {
            for y in 0..s.len() {
                if val(s.join(x, y).unwrap()) != val(x) * val(y) {
                    return false;
                }
            }
        }
        self.values.iter().any(|&v| v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain3() -> FiniteSemilattice {
        FiniteSemilattice::chain(vec!["ap".into(), "mid".into(), "top".into()]).unwrap()
    }

    #[test]
    fn two_chain_is_a_semilattice() {
        let s = FiniteSemilattice::chain(vec!["ap".into(), "full".into()]).unwrap();
        assert!(s.verify_axioms().is_empty());
    }

    #[test]
    fn broken_commutativity_is_reported() {
        // join(a,b) = a but join(b,a) = b
        let s = FiniteSemilattice::new(
            vec!["a".into(), "b".into()],
            vec![0, 0, 1, 1],
            None,
        )
        .unwrap();
        let report = s.verify_axioms();
        assert_eq!(report.commutativity, vec![(0, 1)]);
    }

    #[test]
    fn free_semilattice_axioms_hold_exhaustively() {
        let s = FiniteSemilattice::free(&["x".into(), "y".into(), "z".into()]).unwrap();
        assert_eq!(s.len(), 8);
        assert!(s.verify_axioms().is_empty());
    }

    #[test]
    fn leq_examples() {
        let s = chain3();
        assert!(s.leq(0, 2).unwrap());
        assert!(!s.leq(2, 1).unwrap());
        let f = FiniteSemilattice::free(&["R".into(), "2".into()]).unwrap();
        // {R} = 0b01 -> index 1; {R,2} = 0b11 -> index 3
        assert!(f.leq(1, 3).unwrap());
        assert!(s.leq(0, 5).is_err());
    }

    #[test]
    fn principal_sets() {
        let s = chain3();
        let h = s.principal_set(1).unwrap();
        assert_eq!(h.members().collect::<Vec<_>>(), vec![0, 1]);
        // the unit's principal set is a singleton
        let u = s.principal_set(0).unwrap();
        assert_eq!(u.len(), 1);
        let f = FiniteSemilattice::free(&["R".into(), "2".into(), "3".into()]).unwrap();
        // {R,2} = 0b011 = 3; below it: {}, {R}, {2}, {R,2}
        let h = f.principal_set(3).unwrap();
        assert_eq!(h.members().collect::<Vec<_>>(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn hereditary_enumeration_matches_oracle() {
        let s = chain3();
        let sets = s.enumerate_hereditary_sets().unwrap();
        assert_eq!(sets.len(), 3);
        // oracle: independent brute force over raw subsets
        let mut expected = Vec::new();
        for mask in 1u64..(1 << s.len()) {
            let members: BTreeSet<usize> =
                (0..s.len()).filter(|&x| mask >> x & 1 == 1).collect();
            if s.validate_hereditary(&members).is_ok() {
                expected.push(members);
            }
        }
        let got: Vec<BTreeSet<usize>> =
            sets.iter().map(|h| h.members().collect()).collect();
        assert_eq!(got, expected);

        let f = FiniteSemilattice::free(&["a".into(), "b".into()]).unwrap();
        assert_eq!(f.enumerate_hereditary_sets().unwrap().len(), 4);

        let one = FiniteSemilattice::chain(vec!["e".into()]).unwrap();
        assert_eq!(one.enumerate_hereditary_sets().unwrap().len(), 1);
    }

    #[test]
    fn semicharacters_biject_with_hereditary_sets() {
        for s in [
            chain3(),
            FiniteSemilattice::free(&["R".into(), "2".into()]).unwrap(),
            FiniteSemilattice::free(&["R".into(), "2".into(), "3".into()]).unwrap(),
        ] {
            let chars = s.semicharacters().unwrap();
            let sets = s.enumerate_hereditary_sets().unwrap();
            assert_eq!(chars.len(), sets.len());
            let supports: BTreeSet<BTreeSet<usize>> =
                chars.iter().map(|c| c.support()).collect();
            let members: BTreeSet<BTreeSet<usize>> =
                sets.iter().map(|h| h.members().collect()).collect();
            assert_eq!(supports, members);
        }
    }

    #[test]
    fn indicator_of_hereditary_set_is_multiplicative() {
        let s = chain3();
        let ind = Semicharacter::indicator(3, &[0usize, 1].into_iter().collect());
        assert!(ind.is_multiplicative_on(&s));
        let not_hereditary = Semicharacter::indicator(3, &[1usize].into_iter().collect());
        assert!(!not_hereditary.is_multiplicative_on(&s));
        let zero = Semicharacter::indicator(3, &BTreeSet::new());
        assert!(!zero.is_multiplicative_on(&s));
    }

    #[test]
    fn every_hereditary_set_is_principal() {
        for s in [
            chain3(),
            FiniteSemilattice::free(&["a".into(), "b".into(), "c".into()]).unwrap(),
        ] {
            for h in s.enumerate_hereditary_sets().unwrap() {
                let witness = s.is_principal(&h).unwrap();
                assert!(witness.is_some());
                let w = witness.unwrap();
                assert_eq!(s.principal_set(w).unwrap(), h);
            }
        }
        // explicit witnesses on the chain
        let s = chain3();
        let h = s.principal_set(1).unwrap();
        assert_eq!(s.is_principal(&h).unwrap(), Some(1));
    }

    #[test]
    fn leq_is_a_partial_order() {
        let s = FiniteSemilattice::free(&["a".into(), "b".into(), "c".into()]).unwrap();
        let n = s.len();
        for x in 0..n {
            assert!(s.leq(x, x).unwrap());
            for y in 0..n {
                if s.leq(x, y).unwrap() && s.leq(y, x).unwrap() {
                    assert_eq!(x, y);
                }
                for z in 0..n {
                    if s.leq(x, y).unwrap() && s.leq(y, z).unwrap() {
                        assert!(s.leq(x, z).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn principal_intersections_and_meets() {
        let s = FiniteSemilattice::free(&["a".into(), "b".into(), "c".into()]).unwrap();
        for x in 0..s.len() {
            for y in 0..s.len() {
                let px = s.principal_set(x).unwrap();
                let py = s.principal_set(y).unwrap();
                let inter = px.intersect(&py);
                // intersection of principal sets is hereditary and directed
                let h = s.validate_hereditary(&inter).unwrap();
                // in the free semilattice meets exist and match
                let m = s.meet(x, y).unwrap().unwrap();
                assert_eq!(s.principal_set(m).unwrap(), h);
            }
        }
    }

    #[test]
    fn size_limit_is_enforced() {
        let labels: Vec<String> = (0..21).map(|i| format!("e{i}")).collect();
        let s = FiniteSemilattice::from_join_fn(labels, Some(0), |x, y| x.max(y)).unwrap();
        assert!(matches!(
            s.enumerate_hereditary_sets(),
            Err(Error::SizeLimit { .. })
        ));
        assert!(matches!(s.semicharacters(), Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn covering_relation() {
        let s = chain3();
        assert_eq!(s.covering_pairs(), vec![(0, 1), (1, 2)]);
        let one = FiniteSemilattice::chain(vec!["e".into()]).unwrap();
        assert!(one.covering_pairs().is_empty());
        let d = FiniteSemilattice::free(&["a".into(), "b".into()]).unwrap();
        assert_eq!(d.covering_pairs().len(), 4);
    }
}
