//! Q-sets: carriers equipped with a quantale-valued similarity table δ.
//!
//! δ is symmetric, transitive under the tensor, and satisfies the extent law
//! `δ(x,x) ⊗ δ(x,y) = δ(x,y)`. The diagonal entry `E(x) = δ(x,x)` is the
//! extent of x. Validation also enforces the derived bound
//! `δ(x,y) ≤ E(x) ∧ E(y)`, which follows from the laws whenever the quantale
//! is semicartesian.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::quantale::Quantale;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QSetError {
    MalformedTable(String),
    NotSymmetric {
        x: String,
        y: String,
    },
    NotTransitive {
        x: String,
        y: String,
        z: String,
    },
    ExtentLawFails {
        x: String,
        y: String,
    },
    /// `δ(x,y) ≤ E(x) ∧ E(y)` fails; only reachable over non-semicartesian
    /// quantales.
    DeltaBoundFails {
        x: String,
        y: String,
    },
    /// A constructor needs a property flag the quantale lacks.
    PropertyRequired(&'static str),
    /// module_qset needs `m` to divide `n`.
    BadModuleArith {
        n: u64,
        m: u64,
    },
}

impl fmt::Display for QSetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QSetError::MalformedTable(msg) => write!(f, "malformed table: {msg}"),
            QSetError::NotSymmetric { x, y } => write!(f, "delta not symmetric at ({x}, {y})"),
            QSetError::NotTransitive { x, y, z } => {
                write!(f, "delta not transitive at ({x}, {y}, {z})")
            }
            QSetError::ExtentLawFails { x, y } => {
                write!(f, "extent law fails at ({x}, {y})")
            }
            QSetError::DeltaBoundFails { x, y } => {
                write!(f, "delta exceeds the extent meet at ({x}, {y})")
            }
            QSetError::PropertyRequired(p) => write!(f, "quantale must be {p}"),
            QSetError::BadModuleArith { n, m } => {
                write!(f, "module size {m} does not divide ring size {n}")
            }
        }
    }
}

impl core::error::Error for QSetError {}

/// A validated Q-set. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSet {
    quantale: Arc<Quantale>,
    carrier: Vec<String>,
    delta: Vec<usize>,
}

impl QSet {
    /// Validates all three laws plus the extent-meet bound. The empty carrier
    /// is legal.
    pub fn new(
        quantale: Arc<Quantale>,
        carrier: Vec<String>,
        delta: Vec<usize>,
    ) -> Result<Self, QSetError> {
        let k = carrier.len();
        let nq = quantale.len();
        if delta.len() != k * k {
            return Err(QSetError::MalformedTable(String::from(
                "delta table has the wrong size",
            )));
        }
        if let Some(&bad) = delta.iter().find(|&&v| v >= nq) {
            return Err(QSetError::MalformedTable(alloc::format!(
                "delta entry {bad} out of range"
            )));
        }
        for (i, a) in carrier.iter().enumerate() {
            for b in carrier.iter().skip(i + 1) {
                if a == b {
                    return Err(QSetError::MalformedTable(alloc::format!(
                        "duplicate carrier name {a:?}"
                    )));
                }
            }
        }
        let q = &quantale;
        let d = |x: usize, y: usize| delta[x * k + y];
        for x in 0..k {
            for y in 0..k {
                if d(x, y) != d(y, x) {
                    return Err(QSetError::NotSymmetric {
                        x: carrier[x].clone(),
                        y: carrier[y].clone(),
                    });
                }
            }
        }
        for x in 0..k {
            for y in 0..k {
                if q.tensor(d(x, x), d(x, y)) != d(x, y) {
                    return Err(QSetError::ExtentLawFails {
                        x: carrier[x].clone(),
                        y: carrier[y].clone(),
                    });
                }
                if !q.is_le(d(x, y), q.meet2(d(x, x), d(y, y))) {
                    return Err(QSetError::DeltaBoundFails {
                        x: carrier[x].clone(),
                        y: carrier[y].clone(),
                    });
                }
            }
        }
        for x in 0..k {
            for y in 0..k {
                for z in 0..k {
                    if !q.is_le(q.tensor(d(x, y), d(y, z)), d(x, z)) {
                        return Err(QSetError::NotTransitive {
                            x: carrier[x].clone(),
                            y: carrier[y].clone(),
                            z: carrier[z].clone(),
                        });
                    }
                }
            }
        }
        Ok(QSet {
            quantale,
            carrier,
            delta,
        })
    }

    pub fn quantale(&self) -> &Arc<Quantale> {
        &self.quantale
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn name(&self, x: usize) -> &str {
        &self.carrier[x]
    }

    pub fn carrier(&self) -> &[String] {
        &self.carrier
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.carrier.iter().position(|c| c == name)
    }

    pub fn delta(&self, x: usize, y: usize) -> usize {
        self.delta[x * self.carrier.len() + y]
    }

    pub fn delta_table(&self) -> &[usize] {
        &self.delta
    }

    /// E(x) = δ(x,x).
    pub fn extent(&self, x: usize) -> usize {
        self.delta(x, x)
    }

    /// δ(x,y) = E(x) = E(y).
    pub fn delta_equivalent(&self, x: usize, y: usize) -> bool {
        let e = self.extent(x);
        self.delta(x, y) == e && self.extent(y) == e
    }

    /// Groups the carrier by δ-equivalence. Also checks that the two stated
    /// characterizations of the relation coincide pointwise.
    pub fn delta_partition(&self) -> DeltaPartition {
        let k = self.len();
        for x in 0..k {
            for y in 0..k {
                let pointwise = (0..k).all(|z| self.delta(x, z) == self.delta(y, z));
                assert_eq!(
                    self.delta_equivalent(x, y),
                    pointwise,
                    "delta-equivalence characterizations disagree"
                );
            }
        }
        let mut block_of = alloc::vec![usize::MAX; k];
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for x in 0..k {
            if block_of[x] != usize::MAX {
                continue;
            }
            let id = blocks.len();
            let mut block = Vec::new();
            for (y, slot) in block_of.iter_mut().enumerate().skip(x) {
                if self.delta_equivalent(x, y) {
                    *slot = id;
                    block.push(y);
                }
            }
            blocks.push(block);
        }
        let representative = blocks.iter().map(|b| b[0]).collect();
        DeltaPartition {
            blocks,
            representative,
            block_of,
        }
    }

    /// Every δ-equivalence class is a singleton block.
    pub fn is_extensional(&self) -> bool {
        self.extensionality_witness().is_none()
    }

    /// A pair of distinct δ-equivalent points, when one exists.
    pub fn extensionality_witness(&self) -> Option<(usize, usize)> {
        let k = self.len();
        for x in 0..k {
            for y in (x + 1)..k {
                if self.delta_equivalent(x, y) {
                    return Some((x, y));
                }
            }
        }
        None
    }

    /// Injectivity of `x ↦ δ(−, x)`; always agrees with extensionality.
    pub fn is_separable(&self) -> bool {
        let k = self.len();
        let mut separable = true;
        'outer: for x in 0..k {
            for y in (x + 1)..k {
                if (0..k).all(|z| self.delta(z, x) == self.delta(z, y)) {
                    separable = false;
                    break 'outer;
                }
            }
        }
        assert_eq!(separable, self.is_extensional());
        separable
    }

    /// Restriction to a subset of the carrier, keeping names and δ.
    pub fn restrict(&self, points: &[usize]) -> Result<QSet, QSetError> {
        let carrier = points.iter().map(|&x| self.carrier[x].clone()).collect();
        let k = points.len();
        let mut delta = alloc::vec![0usize; k * k];
        for (i, &x) in points.iter().enumerate() {
            for (j, &y) in points.iter().enumerate() {
                delta[i * k + j] = self.delta(x, y);
            }
        }
        QSet::new(self.quantale.clone(), carrier, delta)
    }
}

/// The δ-equivalence partition of a carrier; block order follows the least
/// member index, which is also the block representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaPartition {
    pub blocks: Vec<Vec<usize>>,
    pub representative: Vec<usize>,
    pub block_of: Vec<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors;
    use crate::fixtures;
    use alloc::vec;

    #[test]
    fn empty_qset_is_valid_and_extensional() {
        let x = QSet::new(fixtures::b4(), vec![], vec![]).unwrap();
        assert!(x.is_empty());
        assert!(x.is_extensional());
        assert!(x.is_separable());
        assert_eq!(x.delta_partition().blocks.len(), 0);
    }

    #[test]
    fn rejects_asymmetric_delta() {
        let b4 = fixtures::b4();
        // δ(x,y)=a but δ(y,x)=⊥
        let err = QSet::new(b4, vec!["x".into(), "y".into()], vec![3, 1, 0, 3]).unwrap_err();
        assert!(matches!(err, QSetError::NotSymmetric { .. }));
    }

    #[test]
    fn terminal_is_valid_and_extensional() {
        let x = constructors::terminal(fixtures::b4());
        assert_eq!(x.len(), 4);
        assert!(x.is_extensional());
        for e in 0..4 {
            for f in 0..4 {
                assert_eq!(x.delta(e, f), x.quantale().meet2(e, f));
            }
        }
        // distinct idempotents are never δ-equivalent here
        for e in 0..4 {
            for f in 0..4 {
                assert_eq!(x.delta_equivalent(e, f), e == f);
            }
        }
    }

    #[test]
    fn twobot_points_are_equivalent_but_distinct() {
        let x = constructors::twobot(fixtures::b4());
        assert!(x.delta_equivalent(0, 1));
        assert!(!x.is_extensional());
        assert_eq!(x.extensionality_witness(), Some((0, 1)));
        assert!(!x.is_separable());
        let p = x.delta_partition();
        assert_eq!(p.blocks, vec![vec![0, 1]]);
        assert_eq!(p.representative, vec![0]);
    }

    #[test]
    fn delta_equivalence_is_an_equivalence_relation() {
        for x in [
            constructors::terminal(fixtures::b4()),
            constructors::twobot(fixtures::b4()),
            constructors::subset_locale_qset(fixtures::b4(), &[0, 1, 3]).unwrap(),
        ] {
            let k = x.len();
            for a in 0..k {
                assert!(x.delta_equivalent(a, a));
                for b in 0..k {
                    assert_eq!(x.delta_equivalent(a, b), x.delta_equivalent(b, a));
                    for c in 0..k {
                        if x.delta_equivalent(a, b) && x.delta_equivalent(b, c) {
                            assert!(x.delta_equivalent(a, c));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn delta_bounded_by_extent_meet() {
        for x in [
            constructors::terminal(fixtures::l3()),
            constructors::diagonal_qset(fixtures::l3()).unwrap(),
            constructors::q_extent_qset(fixtures::b4()).unwrap(),
        ] {
            let q = x.quantale().clone();
            for a in 0..x.len() {
                for b in 0..x.len() {
                    assert!(q.is_le(x.delta(a, b), q.meet2(x.extent(a), x.extent(b))));
                }
            }
        }
    }
}
