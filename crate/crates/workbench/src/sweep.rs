//! Exhaustive enumeration of the valid Q-sets over a quantale, with
//! canonicalization up to carrier relabelling for the pairwise suites.

use std::sync::Arc;

use rayon::prelude::*;

use qset_core::constructors;
use qset_core::{QSet, Quantale};

fn carrier_names(size: usize) -> Vec<String> {
    (0..size).map(|i| format!("x{i}")).collect()
}

/// Decodes `code` into an upper-triangular table and completes it
/// symmetrically.
fn decode_table(code: u64, nq: usize, size: usize) -> Vec<usize> {
    let mut table = vec![0usize; size * size];
    let mut c = code;
    for x in (0..size).rev() {
        for y in (x..size).rev() {
            let v = (c % nq as u64) as usize;
            c /= nq as u64;
            table[x * size + y] = v;
            table[y * size + x] = v;
        }
    }
    table
}

/// Every valid Q-set with the given carrier size, in lexicographic
/// upper-triangle order.
pub fn valid_qsets(q: &Arc<Quantale>, size: usize) -> Vec<Arc<QSet>> {
    let cells = size * (size + 1) / 2;
    let total = (q.len() as u64)
        .checked_pow(cells as u32)
        .expect("sweep size fits in u64");
    (0..total)
        .into_par_iter()
        .filter_map(|code| {
            let table = decode_table(code, q.len(), size);
            QSet::new(q.clone(), carrier_names(size), table)
                .ok()
                .map(Arc::new)
        })
        .collect()
}

/// All valid Q-sets with carrier size 0 through `max_size`.
pub fn valid_qsets_upto(q: &Arc<Quantale>, max_size: usize) -> Vec<Arc<QSet>> {
    let mut out = Vec::new();
    for size in 0..=max_size {
        out.extend(valid_qsets(q, size));
    }
    out
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut perms = vec![vec![]];
    for _ in 0..k {
        let mut next = Vec::new();
        for p in &perms {
            for slot in 0..=p.len() {
                let mut np = p.clone();
                np.insert(slot, p.len());
                next.push(np);
            }
        }
        perms = next;
    }
    perms.sort();
    perms
}

fn relabel(table: &[usize], perm: &[usize]) -> Vec<usize> {
    let k = perm.len();
    let mut out = vec![0usize; k * k];
    for x in 0..k {
        for y in 0..k {
            out[x * k + y] = table[perm[x] * k + perm[y]];
        }
    }
    out
}

/// Is this table the lexicographically least among its relabellings?
pub fn is_canonical_qset(x: &QSet) -> bool {
    let k = x.len();
    let table = x.delta_table();
    permutations(k)
        .iter()
        .all(|p| relabel(table, p).as_slice() >= table)
}

/// One representative per isomorphism class of valid Q-sets up to
/// `max_size`.
pub fn canonical_qsets_upto(q: &Arc<Quantale>, max_size: usize) -> Vec<Arc<QSet>> {
    valid_qsets_upto(q, max_size)
        .into_iter()
        .filter(|x| is_canonical_qset(x))
        .collect()
}

/// The fixed small object family used by the hom-level suites: the initial
/// object, a global point, the doubled bottom point, two disjoint global
/// points (whose endo hom-set has several relational morphisms), and a
/// three-point extensional carrier.
pub fn small_objects(q: &Arc<Quantale>) -> Vec<Arc<QSet>> {
    let top = q.top();
    let bot = q.bottom();
    let mut out = vec![
        Arc::new(QSet::new(q.clone(), vec![], vec![]).unwrap()),
        Arc::new(constructors::single_point(q.clone(), q.top()).unwrap()),
        Arc::new(constructors::twobot(q.clone())),
    ];
    if let Ok(two_tops) = QSet::new(
        q.clone(),
        vec!["t0".to_string(), "t1".to_string()],
        vec![top, bot, bot, top],
    ) {
        out.push(Arc::new(two_tops));
    }
    if q.props().locale && q.len() == 4 {
        out.push(Arc::new(
            constructors::subset_locale_qset(q.clone(), &[0, 1, 3]).unwrap(),
        ));
    } else {
        out.push(Arc::new(constructors::terminal(q.clone())));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use qset_core::fixtures;

    #[test]
    fn one_point_qsets_are_the_idempotent_extents() {
        let q = fixtures::b4();
        let xs = valid_qsets(&q, 1);
        assert_eq!(xs.len(), q.idempotents().len());
        let l3 = fixtures::l3();
        assert_eq!(valid_qsets(&l3, 1).len(), 2);
    }

    #[test]
    fn sweep_is_deterministic_and_contains_the_counterexample() {
        let q = fixtures::b4();
        let a = valid_qsets_upto(&q, 3);
        let b = valid_qsets_upto(&q, 3);
        assert_eq!(a.len(), b.len());
        assert!(a
            .iter()
            .zip(&b)
            .all(|(x, y)| x.delta_table() == y.delta_table()));
        let s = constructors::subset_locale_qset(q, &[0, 1, 3]).unwrap();
        assert!(a.iter().any(|x| x.delta_table() == s.delta_table()));
    }

    #[test]
    fn canonical_filter_keeps_one_per_class() {
        let q = fixtures::chain3();
        let all = valid_qsets(&q, 2);
        let canonical = canonical_qsets_upto(&q, 2);
        // every valid table is a relabelling of exactly one canonical one
        for x in &all {
            let hits = canonical
                .iter()
                .filter(|c| {
                    permutations(x.len())
                        .iter()
                        .any(|p| relabel(x.delta_table(), p) == c.delta_table())
                })
                .count();
            assert_eq!(hits, 1, "table {:?}", x.delta_table());
        }
    }
}
