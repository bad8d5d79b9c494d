//! Exhaustive and seeded-random counterexample search over small quantales
//! and Q-sets. Quantales are enumerated up to isomorphism (order and tensor
//! relabelling); findings are emitted in a canonical text encoding and
//! sorted, so output is independent of thread count.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use qset_core::gluing::is_gluing_complete;
use qset_core::limits::Limits;
use qset_core::morphism::enumerate_relational_homs;
use qset_core::scott::{is_scott_complete, singletons_qset};
use qset_core::{QSet, Quantale};

use crate::sweep;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Predicate {
    GluingNotScott,
    ScottNotGluing,
    NonStrongSingletonsBreak,
    NonextensionalComplete,
    DiscreteHomOrderViolation,
}

impl Predicate {
    pub fn name(self) -> &'static str {
        match self {
            Predicate::GluingNotScott => "gluing-not-scott",
            Predicate::ScottNotGluing => "scott-not-gluing",
            Predicate::NonStrongSingletonsBreak => "non-strong-singletons-break",
            Predicate::NonextensionalComplete => "nonextensional-complete",
            Predicate::DiscreteHomOrderViolation => "discrete-hom-order-violation",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "gluing-not-scott" => Some(Predicate::GluingNotScott),
            "scott-not-gluing" => Some(Predicate::ScottNotGluing),
            "non-strong-singletons-break" => Some(Predicate::NonStrongSingletonsBreak),
            "nonextensional-complete" => Some(Predicate::NonextensionalComplete),
            "discrete-hom-order-violation" => Some(Predicate::DiscreteHomOrderViolation),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    Random,
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub max_quantale: usize,
    pub max_carrier: usize,
    pub predicate: Predicate,
    pub mode: SearchMode,
    pub seed: u64,
    /// Random tables drawn per quantale in random mode.
    pub samples: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Finding {
    pub quantale: String,
    pub qset: String,
    pub predicate: &'static str,
}

impl Finding {
    pub fn render(&self) -> String {
        format!("{} :: {} :: {}", self.predicate, self.quantale, self.qset)
    }
}

pub fn encode_quantale(q: &Quantale) -> String {
    let n = q.len();
    let mut le = String::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            le.push(if q.is_le(i, j) { '1' } else { '0' });
        }
    }
    let mut tensor = String::with_capacity(n * n);
    for &v in q.tensor_table() {
        tensor.push(char::from_digit(v as u32, 16).unwrap());
    }
    format!("q{n}:{le}:{tensor}")
}

pub fn encode_qset(x: &QSet) -> String {
    let mut delta = String::with_capacity(x.len() * x.len());
    for &v in x.delta_table() {
        delta.push(char::from_digit(v as u32, 16).unwrap());
    }
    format!("x{}:{delta}", x.len())
}

fn is_partial_order(le: &[bool], n: usize) -> bool {
    for i in 0..n {
        for j in 0..n {
            if i != j && le[i * n + j] && le[j * n + i] {
                return false;
            }
            for k in 0..n {
                if le[i * n + j] && le[j * n + k] && !le[i * n + k] {
                    return false;
                }
            }
        }
    }
    true
}

fn has_binary_bounds(le: &[bool], n: usize) -> bool {
    let unique_bound = |a: usize, b: usize, upper: bool| -> bool {
        let bounds: Vec<usize> = (0..n)
            .filter(|&u| {
                if upper {
                    le[a * n + u] && le[b * n + u]
                } else {
                    le[u * n + a] && le[u * n + b]
                }
            })
            .collect();
        bounds
            .iter()
            .filter(|&&u| {
                bounds
                    .iter()
                    .all(|&v| if upper { le[u * n + v] } else { le[v * n + u] })
            })
            .count()
            == 1
    };
    (0..n).all(|a| (0..n).all(|b| unique_bound(a, b, true) && unique_bound(a, b, false)))
}

fn relabel_le(le: &[bool], perm: &[usize]) -> Vec<bool> {
    let n = perm.len();
    let mut out = vec![false; n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = le[perm[i] * n + perm[j]];
        }
    }
    out
}

fn relabel_tensor(tensor: &[usize], perm: &[usize]) -> Vec<usize> {
    let n = perm.len();
    let inverse = {
        let mut inv = vec![0usize; n];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        inv
    };
    let mut out = vec![0usize; n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = inverse[tensor[perm[i] * n + perm[j]]];
        }
    }
    out
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut perms: Vec<Vec<usize>> = vec![vec![]];
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
    perms
}

/// Lattice orders on n elements, one canonical representative per
/// isomorphism class.
fn canonical_lattices(n: usize) -> Vec<Vec<bool>> {
    assert!(n >= 1 && n * (n - 1) <= 24, "lattice enumeration cap");
    let strict_pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1 << strict_pairs.len()) {
        let mut le = vec![false; n * n];
        for i in 0..n {
            le[i * n + i] = true;
        }
        for (b, &(i, j)) in strict_pairs.iter().enumerate() {
            if mask >> b & 1 == 1 {
                le[i * n + j] = true;
            }
        }
        if !is_partial_order(&le, n) || !has_binary_bounds(&le, n) {
            continue;
        }
        let canonical = perms.iter().map(|p| relabel_le(&le, p)).min().unwrap();
        if canonical == le && seen.insert(le.clone()) {
            out.push(le);
        }
    }
    out
}

fn bottom_of(le: &[bool], n: usize) -> usize {
    (0..n)
        .find(|&b| (0..n).all(|x| le[b * n + x]))
        .expect("a finite lattice has a bottom")
}

/// Commutative tensors on a fixed lattice that pass full quantale
/// validation, canonical up to the lattice's automorphisms.
fn quantales_on_lattice(le: &[bool], n: usize) -> Vec<Arc<Quantale>> {
    let bottom = bottom_of(le, n);
    let cells: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i..n).map(move |j| (i, j)))
        .filter(|&(i, j)| i != bottom && j != bottom)
        .collect();
    let names: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
    let autos: Vec<Vec<usize>> = permutations(n)
        .into_iter()
        .filter(|p| relabel_le(le, p) == le)
        .collect();

    let mut out = Vec::new();
    let mut table = vec![bottom; n * n];
    dfs_tensors(le, n, &cells, 0, &mut table, &mut |table| {
        if let Ok(q) = Quantale::new(names.clone(), le.to_vec(), table.to_vec()) {
            let canonical = autos
                .iter()
                .all(|p| relabel_tensor(table, p).as_slice() >= table);
            if canonical {
                out.push(Arc::new(q));
            }
        }
    });
    out
}

fn dfs_tensors(
    le: &[bool],
    n: usize,
    cells: &[(usize, usize)],
    at: usize,
    table: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize]),
) {
    if at == cells.len() {
        emit(table);
        return;
    }
    let (i, j) = cells[at];
    'values: for v in 0..n {
        // monotonicity against the cells already fixed
        for &(a, b) in &cells[..at] {
            let w = table[a * n + b];
            for (x0, y0, x1, y1) in [(a, b, i, j), (a, b, j, i)] {
                if le[x0 * n + x1] && le[y0 * n + y1] && !le[w * n + v] {
                    continue 'values;
                }
                if le[x1 * n + x0] && le[y1 * n + y0] && !le[v * n + w] {
                    continue 'values;
                }
            }
        }
        table[i * n + j] = v;
        table[j * n + i] = v;
        dfs_tensors(le, n, cells, at + 1, table, emit);
    }
}

/// All commutative quantales up to isomorphism, sizes 1 through `max_n`.
pub fn enumerate_quantales(max_n: usize) -> Vec<Arc<Quantale>> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        for le in canonical_lattices(n) {
            out.extend(quantales_on_lattice(&le, n));
        }
    }
    out
}

fn predicate_hits(predicate: Predicate, q: &Arc<Quantale>, x: &Arc<QSet>, limits: &Limits) -> bool {
    match predicate {
        Predicate::GluingNotScott => {
            is_gluing_complete(x).unwrap().complete
                && !is_scott_complete(x, limits).unwrap().scott_complete
        }
        Predicate::ScottNotGluing => {
            is_scott_complete(x, limits).unwrap().scott_complete
                && !is_gluing_complete(x).unwrap().complete
        }
        Predicate::NonextensionalComplete => {
            !x.is_extensional() && is_gluing_complete(x).unwrap().complete
        }
        Predicate::NonStrongSingletonsBreak => {
            !q.props().strong
                && match singletons_qset(x, limits, true) {
                    Ok(sx) => !sx.anomalies.is_empty(),
                    Err(_) => true,
                }
        }
        Predicate::DiscreteHomOrderViolation => match enumerate_relational_homs(x, x, limits) {
            Ok(homs) => homs.iter().enumerate().any(|(i, phi)| {
                homs.iter()
                    .enumerate()
                    .any(|(j, psi)| i != j && phi.pointwise_le(psi))
            }),
            Err(_) => false,
        },
    }
}

/// Runs the search and returns the findings sorted by canonical encoding.
pub fn search(config: &SearchConfig, limits: &Limits) -> Vec<Finding> {
    let quantales = enumerate_quantales(config.max_quantale);
    let mut findings: Vec<Finding> = quantales
        .par_iter()
        .flat_map_iter(|q| {
            let qsets: Vec<Arc<QSet>> = match config.mode {
                SearchMode::Exhaustive => sweep::canonical_qsets_upto(q, config.max_carrier),
                SearchMode::Random => {
                    let mut rng =
                        ChaCha8Rng::seed_from_u64(config.seed ^ fxhash(&encode_quantale(q)));
                    let mut set = BTreeSet::new();
                    let mut sampled = Vec::new();
                    for _ in 0..config.samples {
                        let k = rng.gen_range(0..=config.max_carrier);
                        let carrier: Vec<String> = (0..k).map(|i| format!("x{i}")).collect();
                        let table: Vec<usize> = {
                            let mut t = vec![0usize; k * k];
                            for i in 0..k {
                                for j in i..k {
                                    let v = rng.gen_range(0..q.len());
                                    t[i * k + j] = v;
                                    t[j * k + i] = v;
                                }
                            }
                            t
                        };
                        if let Ok(x) = QSet::new(q.clone(), carrier, table) {
                            if set.insert(x.delta_table().to_vec()) {
                                sampled.push(Arc::new(x));
                            }
                        }
                    }
                    sampled
                }
            };
            let predicate = config.predicate;
            let q = q.clone();
            let limits = *limits;
            qsets.into_iter().filter_map(move |x| {
                predicate_hits(predicate, &q, &x, &limits).then(|| Finding {
                    quantale: encode_quantale(&q),
                    qset: encode_qset(&x),
                    predicate: predicate.name(),
                })
            })
        })
        .collect();
    findings.sort();
    findings.dedup();
    findings
}

fn fxhash(s: &str) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use qset_core::fixtures;
    use qset_core::Quantale;

    #[test]
    fn small_quantale_counts_are_stable() {
        // one-element and two-element chains admit exactly these tensors
        let qs = enumerate_quantales(2);
        let sizes: Vec<usize> = qs.iter().map(|q| q.len()).collect();
        assert_eq!(sizes.iter().filter(|&&n| n == 1).count(), 1);
        // on the 2-chain: ⊗ = ∧ and the constant-⊥ tensor
        assert_eq!(sizes.iter().filter(|&&n| n == 2).count(), 2);
    }

    #[test]
    fn exhaustive_search_finds_the_separation_instance() {
        use qset_core::constructors;
        use qset_core::QSet;

        let limits = Limits::default();
        let config = SearchConfig {
            max_quantale: 4,
            max_carrier: 3,
            predicate: Predicate::GluingNotScott,
            mode: SearchMode::Exhaustive,
            seed: 0,
            samples: 0,
        };
        let findings = search(&config, &limits);
        assert!(!findings.is_empty());

        // canonicalize (B4, S) the same way the enumerator does and look for
        // that exact encoding among the findings
        let b4 = fixtures::b4();
        let s = constructors::subset_locale_qset(b4.clone(), &[0, 1, 3]).unwrap();
        let perms = permutations(4);
        let le_min = perms
            .iter()
            .map(|p| relabel_le(b4.le_matrix(), p))
            .min()
            .unwrap();
        let best: Vec<&Vec<usize>> = perms
            .iter()
            .filter(|p| relabel_le(b4.le_matrix(), p) == le_min)
            .collect();
        let tensor_min = best
            .iter()
            .map(|p| relabel_tensor(b4.tensor_table(), p))
            .min()
            .unwrap();
        let p = best
            .iter()
            .find(|p| relabel_tensor(b4.tensor_table(), p) == tensor_min)
            .unwrap();
        let names: Vec<String> = (0..4).map(|i| format!("e{i}")).collect();
        let canonical_q = Arc::new(Quantale::new(names, le_min, tensor_min.clone()).unwrap());
        // reindex S's delta values through the same relabelling
        let inverse = {
            let mut inv = vec![0usize; 4];
            for (i, &v) in p.iter().enumerate() {
                inv[v] = i;
            }
            inv
        };
        let mapped: Vec<usize> = s.delta_table().iter().map(|&v| inverse[v]).collect();
        // carrier-canonical representative of the mapped table
        let carrier: Vec<String> = (0..3).map(|i| format!("x{i}")).collect();
        let canonical_x = sweep::canonical_qsets_upto(&canonical_q, 3)
            .into_iter()
            .find(|x| {
                permutations(3).iter().any(|cp| {
                    let mut relabeled = vec![0usize; 9];
                    for a in 0..3 {
                        for b in 0..3 {
                            relabeled[a * 3 + b] = mapped[cp[a] * 3 + cp[b]];
                        }
                    }
                    relabeled == x.delta_table()
                })
            })
            .expect("the separation carrier appears in the canonical sweep");
        let _ = QSet::new(
            canonical_q.clone(),
            carrier,
            canonical_x.delta_table().to_vec(),
        )
        .unwrap();
        let expected = Finding {
            quantale: encode_quantale(&canonical_q),
            qset: encode_qset(&canonical_x),
            predicate: Predicate::GluingNotScott.name(),
        };
        assert!(
            findings.contains(&expected),
            "expected {expected:?} among the findings"
        );
    }

    #[test]
    fn enumeration_reaches_the_boolean_locale() {
        let qs = enumerate_quantales(4);
        let b4 = fixtures::b4();
        let target = encode_quantale(&b4);
        let found = qs.iter().any(|q| {
            // compare up to relabelling by checking the canonical encodings
            // of both against every permutation
            let perms = permutations(4);
            q.len() == 4
                && perms.iter().any(|p| {
                    let le = relabel_le(q.le_matrix(), p);
                    let tensor = relabel_tensor(q.tensor_table(), p);
                    let mut enc_le = String::new();
                    for v in &le {
                        enc_le.push(if *v { '1' } else { '0' });
                    }
                    let mut enc_t = String::new();
                    for v in &tensor {
                        enc_t.push(char::from_digit(*v as u32, 16).unwrap());
                    }
                    format!("q4:{enc_le}:{enc_t}") == target
                })
        });
        assert!(found, "the Boolean locale must appear in the enumeration");
    }
}
