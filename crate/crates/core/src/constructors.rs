//! Standard Q-set constructions. Every constructor re-runs full validation,
//! so a successful return is always a lawful Q-set.
//!
//! Carrier names are generated deterministically (coproduct points are
//! `name@i`, pairs are `(x,e)`) so that emitted files and reports are stable.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::morphism::{FunctionalMorphism, MorphismError};
use crate::qset::{QSet, QSetError};
use crate::quantale::{close_order, Quantale};

/// The terminal object: carrier E(Q) with δ = ⊗ (= ∧ on idempotents).
pub fn terminal(q: Arc<Quantale>) -> QSet {
    let idems = q.idempotents();
    let k = idems.len();
    let carrier: Vec<String> = idems.iter().map(|&e| q.name(e).to_string()).collect();
    let mut delta = alloc::vec![0usize; k * k];
    for (i, &e) in idems.iter().enumerate() {
        for (j, &f) in idems.iter().enumerate() {
            delta[i * k + j] = q.tensor(e, f);
        }
    }
    QSet::new(q, carrier, delta).expect("terminal object must validate")
}

/// One point of the given idempotent extent.
pub fn single_point(q: Arc<Quantale>, extent: usize) -> Result<QSet, QSetError> {
    if !q.is_idempotent(extent) {
        return Err(QSetError::MalformedTable(alloc::format!(
            "extent {} is not idempotent",
            q.name(extent)
        )));
    }
    QSet::new(q, alloc::vec![String::from("p")], alloc::vec![extent])
}

/// Two copies of the single ⊥-extent point; the classic non-extensional
/// example.
pub fn twobot(q: Arc<Quantale>) -> QSet {
    let p = single_point(q.clone(), q.bottom()).expect("bottom is idempotent");
    coproduct(&p, &p).expect("coproduct of valid Q-sets must validate")
}

/// Disjoint union with δ = ⊥ across the two components.
pub fn coproduct(x: &QSet, y: &QSet) -> Result<QSet, QSetError> {
    if x.quantale() != y.quantale() {
        return Err(QSetError::MalformedTable(String::from(
            "coproduct components live over different quantales",
        )));
    }
    let q = x.quantale().clone();
    let bot = q.bottom();
    let kx = x.len();
    let k = kx + y.len();
    let mut carrier = Vec::with_capacity(k);
    for p in x.carrier() {
        carrier.push(alloc::format!("{p}@0"));
    }
    for p in y.carrier() {
        carrier.push(alloc::format!("{p}@1"));
    }
    let mut delta = alloc::vec![bot; k * k];
    for a in 0..kx {
        for b in 0..kx {
            delta[a * k + b] = x.delta(a, b);
        }
    }
    for a in 0..y.len() {
        for b in 0..y.len() {
            delta[(kx + a) * k + (kx + b)] = y.delta(a, b);
        }
    }
    QSet::new(q, carrier, delta)
}

/// `n` copies of the terminal object: points are pairs (e, i) with
/// δ((e,i),(e',i')) = e ∧ e' when i = i' and ⊥ otherwise.
pub fn coproduct_of_terminals(q: Arc<Quantale>, n: usize) -> QSet {
    let idems = q.idempotents();
    let per = idems.len();
    let k = per * n;
    let bot = q.bottom();
    let mut carrier = Vec::with_capacity(k);
    for i in 0..n {
        for &e in &idems {
            carrier.push(alloc::format!("{}@{i}", q.name(e)));
        }
    }
    let mut delta = alloc::vec![bot; k * k];
    for i in 0..n {
        for (a, &e) in idems.iter().enumerate() {
            for (b, &f) in idems.iter().enumerate() {
                delta[(i * per + a) * k + (i * per + b)] = q.tensor(e, f);
            }
        }
    }
    QSet::new(q, carrier, delta).expect("coproduct of terminals must validate")
}

/// Q itself with δ(x,y) = (x⊸y) ∧ (y⊸x); needs integrality so that the
/// extents come out as ⊤.
pub fn diagonal_qset(q: Arc<Quantale>) -> Result<QSet, QSetError> {
    if !q.props().integral {
        return Err(QSetError::PropertyRequired("integral"));
    }
    let n = q.len();
    let carrier: Vec<String> = q.names().to_vec();
    let mut delta = alloc::vec![0usize; n * n];
    for x in 0..n {
        for y in 0..n {
            delta[x * n + y] = q.meet2(q.residue(x, y), q.residue(y, x));
        }
    }
    QSet::new(q, carrier, delta)
}

/// The carrier Q × E(Q) with δ((x,e),(y,a)) = a ⊗ e ⊗ [(x⊸y) ∧ (y⊸x)].
pub fn q_extent_qset(q: Arc<Quantale>) -> Result<QSet, QSetError> {
    if !q.props().integral {
        return Err(QSetError::PropertyRequired("integral"));
    }
    let n = q.len();
    let idems = q.idempotents();
    let k = n * idems.len();
    let mut carrier = Vec::with_capacity(k);
    let mut points = Vec::with_capacity(k);
    for x in 0..n {
        for &e in &idems {
            carrier.push(alloc::format!("({},{})", q.name(x), q.name(e)));
            points.push((x, e));
        }
    }
    let mut delta = alloc::vec![0usize; k * k];
    for (i, &(x, e)) in points.iter().enumerate() {
        for (j, &(y, a)) in points.iter().enumerate() {
            let sym = q.meet2(q.residue(x, y), q.residue(y, x));
            delta[i * k + j] = q.tensor(q.tensor(a, e), sym);
        }
    }
    QSet::new(q, carrier, delta)
}

/// Q itself with δ(x,y) = x⊗y off the diagonal and x⁺ on it; needs every
/// upper idempotent approximation to exist.
pub fn upper_approx_qset(q: Arc<Quantale>) -> Result<QSet, QSetError> {
    let n = q.len();
    let mut upper = Vec::with_capacity(n);
    for x in 0..n {
        match q.upper_idem(x) {
            Ok(e) => upper.push(e),
            Err(_) => {
                return Err(QSetError::PropertyRequired(
                    "upper idempotent approximations",
                ))
            }
        }
    }
    let carrier: Vec<String> = q.names().to_vec();
    let mut delta = alloc::vec![0usize; n * n];
    for x in 0..n {
        for y in 0..n {
            delta[x * n + y] = if x == y { upper[x] } else { q.tensor(x, y) };
        }
    }
    QSet::new(q, carrier, delta)
}

/// A subset S of a locale with δ = ∧ restricted to S.
pub fn subset_locale_qset(q: Arc<Quantale>, points: &[usize]) -> Result<QSet, QSetError> {
    if !q.props().locale {
        return Err(QSetError::PropertyRequired("a locale"));
    }
    let k = points.len();
    let carrier: Vec<String> = points.iter().map(|&x| q.name(x).to_string()).collect();
    let mut delta = alloc::vec![0usize; k * k];
    for (i, &x) in points.iter().enumerate() {
        for (j, &y) in points.iter().enumerate() {
            delta[i * k + j] = q.meet2(x, y);
        }
    }
    QSet::new(q, carrier, delta)
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn divisors(n: u64) -> Vec<u64> {
    let mut ds: Vec<u64> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    ds.sort_unstable_by(|a, b| b.cmp(a));
    ds
}

/// The quantale of ideals of Z/n under ideal product. Ideals are named by
/// their canonical generator, `(0)` for the zero ideal up to `(1)` for the
/// whole ring, ordered from bottom to top.
pub fn ideals_quantale(n: u64) -> Result<Arc<Quantale>, QSetError> {
    if n == 0 {
        return Err(QSetError::BadModuleArith { n, m: 0 });
    }
    let gens = divisors(n);
    let k = gens.len();
    let name = |g: u64| {
        if g == n {
            String::from("(0)")
        } else {
            alloc::format!("({g})")
        }
    };
    let elements: Vec<String> = gens.iter().map(|&g| name(g)).collect();
    let idx = |g: u64| gens.iter().position(|&d| d == g).unwrap();
    // (g) ⊆ (g') iff g' divides g
    let mut pairs = Vec::new();
    for (i, &g) in gens.iter().enumerate() {
        for (j, &h) in gens.iter().enumerate() {
            if g % h == 0 {
                pairs.push((i, j));
            }
        }
    }
    let le = close_order(k, &pairs);
    let mut tensor = alloc::vec![0usize; k * k];
    for (i, &g) in gens.iter().enumerate() {
        for (j, &h) in gens.iter().enumerate() {
            tensor[i * k + j] = idx(gcd(g.saturating_mul(h), n));
        }
    }
    Quantale::new(elements, le, tensor)
        .map(Arc::new)
        .map_err(|e| QSetError::MalformedTable(alloc::format!("ideals quantale: {e}")))
}

/// The module Z/m over the ideals of Z/n, with δ(x,y) the join of the ideals
/// acting equally on x and y.
#[derive(Debug, Clone)]
pub struct ModuleQSet {
    pub qset: QSet,
    /// Pairs (x,y) whose δ join does not itself act equally on x and y;
    /// empty means the supremum is attained everywhere.
    pub unattained: Vec<(usize, usize)>,
}

pub fn module_qset(n: u64, m: u64) -> Result<ModuleQSet, QSetError> {
    if n == 0 || m == 0 || !n.is_multiple_of(m) {
        return Err(QSetError::BadModuleArith { n, m });
    }
    let q = ideals_quantale(n)?;
    let gens = divisors(n);
    // the subgroup of Z/m generated by g·x, as its canonical gcd generator
    let orbit = |g: u64, x: u64| gcd(g * x, m);
    let acts_equal = |g: u64, x: u64, y: u64| orbit(g, x) == orbit(g, y);
    let k = m as usize;
    let carrier: Vec<String> = (0..m).map(|x| x.to_string()).collect();
    let mut delta = alloc::vec![0usize; k * k];
    let mut unattained = Vec::new();
    for x in 0..m {
        for y in 0..m {
            let d = q.join_iter(
                gens.iter()
                    .enumerate()
                    .filter(|&(_, &g)| acts_equal(g, x, y))
                    .map(|(i, _)| i),
            );
            delta[(x as usize) * k + y as usize] = d;
            if !acts_equal(gens[d], x, y) {
                unattained.push((x as usize, y as usize));
            }
        }
    }
    let qset = QSet::new(q, carrier, delta)?;
    Ok(ModuleQSet { qset, unattained })
}

/// The largest subobject on which two parallel morphisms agree: the points
/// where f and g coincide, with δ restricted from the domain. The returned
/// inclusion preserves δ on the nose.
pub fn equalizer(
    f: &FunctionalMorphism,
    g: &FunctionalMorphism,
) -> Result<(Arc<QSet>, FunctionalMorphism), MorphismError> {
    if f.dom() != g.dom() || f.cod() != g.cod() {
        return Err(MorphismError::DomainMismatch);
    }
    let dom = f.dom();
    let points: Vec<usize> = (0..dom.len())
        .filter(|&x| f.apply(x) == g.apply(x))
        .collect();
    let sub = Arc::new(
        dom.restrict(&points)
            .expect("a restriction of a valid Q-set validates"),
    );
    let inclusion = FunctionalMorphism::new(sub.clone(), dom.clone(), points)?;
    Ok((sub, inclusion))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn terminal_examples() {
        let t = terminal(fixtures::b4());
        assert_eq!(t.carrier(), &["bot", "a", "na", "top"]);
        let l = terminal(fixtures::l3());
        assert_eq!(l.carrier(), &["0", "1"]);
    }

    #[test]
    fn coproduct_of_terminals_shape() {
        let x = coproduct_of_terminals(fixtures::chain3(), 2);
        assert_eq!(x.len(), 6);
        let q = x.quantale().clone();
        // same index: meet; across indices: bottom
        assert_eq!(x.delta(0, 1), q.meet2(0, 1));
        assert_eq!(x.delta(0, 3), q.bottom());
        assert!(!x.is_extensional());
    }

    #[test]
    fn diagonal_qset_has_top_extents() {
        let x = diagonal_qset(fixtures::l3()).unwrap();
        let q = x.quantale().clone();
        for p in 0..x.len() {
            assert_eq!(x.extent(p), q.top());
        }
        // roughly |x − y|: distance between 0 and 1 in the chain is 0
        assert_eq!(x.delta(0, 2), q.bottom());
    }

    #[test]
    fn q_extent_qset_extents_are_the_flags() {
        let x = q_extent_qset(fixtures::b4()).unwrap();
        let q = x.quantale().clone();
        assert_eq!(x.len(), 16);
        for (i, name) in x.carrier().iter().enumerate() {
            let e = name.rsplit(',').next().unwrap().trim_end_matches(')');
            assert_eq!(x.extent(i), q.index_of(e).unwrap());
        }
    }

    #[test]
    fn upper_approx_qset_is_extensional_over_l3() {
        let x = upper_approx_qset(fixtures::l3()).unwrap();
        assert!(x.is_extensional());
        // compatibility criterion: x ⊗ y = x⁺ ⊗ y⁺
        let q = x.quantale().clone();
        for a in 0..x.len() {
            for b in 0..x.len() {
                if a == b {
                    continue;
                }
                let compat = x.delta(a, b) == q.tensor(x.extent(a), x.extent(b));
                let crit =
                    q.tensor(a, b) == q.tensor(q.upper_idem(a).unwrap(), q.upper_idem(b).unwrap());
                assert_eq!(compat, crit);
            }
        }
    }

    #[test]
    fn subset_locale_needs_locale() {
        let err = subset_locale_qset(fixtures::l3(), &[0]).unwrap_err();
        assert!(matches!(err, QSetError::PropertyRequired("a locale")));
        let s = subset_locale_qset(fixtures::b4(), &[0, 1, 3]).unwrap();
        assert_eq!(s.carrier(), &["bot", "a", "top"]);
    }

    #[test]
    fn ideals_z4_matches_hand_table() {
        let q = ideals_quantale(4).unwrap();
        assert_eq!(q.names(), &["(0)", "(2)", "(1)"]);
        assert_eq!(q.tensor(1, 1), 0); // (2)·(2) = (0)
        assert_eq!(q.tensor(1, 2), 1);
        assert_eq!(q.join2(0, 1), 1);
    }

    #[test]
    fn module_z4_delta_matches_oracle() {
        // independent oracle: enumerate the three ideals of Z/4 and compare
        // the subgroups I·x and I·y elementwise
        let gens: [u64; 3] = [4, 2, 1];
        let subgroup = |g: u64, x: u64| -> Vec<u64> {
            let mut s: Vec<u64> = (0..4).map(|k| (g * x * k) % 4).collect();
            s.sort_unstable();
            s.dedup();
            s
        };
        let m = module_qset(4, 4).unwrap();
        assert!(m.unattained.is_empty());
        let x = &m.qset;
        let q = x.quantale().clone();
        for a in 0..4u64 {
            for b in 0..4u64 {
                let qualifying: Vec<usize> = gens
                    .iter()
                    .enumerate()
                    .filter(|&(_, &g)| subgroup(g, a) == subgroup(g, b))
                    .map(|(i, _)| i)
                    .collect();
                let expect = q.join_iter(qualifying);
                assert_eq!(x.delta(a as usize, b as usize), expect);
            }
        }
        // frozen spot checks
        assert_eq!(x.delta(1, 3), q.index_of("(1)").unwrap());
        assert_eq!(x.delta(0, 2), q.index_of("(2)").unwrap());
        assert_eq!(x.extent(2), q.index_of("(1)").unwrap());
        // 1 and 3 are δ-equivalent, so the module Q-set is not extensional
        assert!(x.delta_equivalent(1, 3));
        assert!(!x.is_extensional());
    }

    #[test]
    fn module_rejects_bad_arithmetic() {
        assert!(matches!(
            module_qset(4, 3),
            Err(QSetError::BadModuleArith { .. })
        ));
    }

    #[test]
    fn twobot_shape() {
        let x = twobot(fixtures::b4());
        assert_eq!(x.carrier(), &["p@0", "p@1"]);
        assert_eq!(x.delta_table(), &[0, 0, 0, 0]);
    }

    #[test]
    fn module_nonempty_compatible_families_are_glued_by_members() {
        // any member of a non-empty compatible family glues it here
        let m = module_qset(4, 4).unwrap().qset;
        let k = m.len();
        let q = m.quantale().clone();
        for mask in 1u32..(1 << k) {
            let members: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).collect();
            let compatible = members.iter().all(|&a| {
                members
                    .iter()
                    .all(|&b| m.delta(a, b) == q.tensor(m.extent(a), m.extent(b)))
            });
            if !compatible {
                continue;
            }
            for &g in &members {
                assert!(members.iter().all(|&a| m.delta(a, g) == m.extent(a)));
                let sup = q.join_iter(members.iter().map(|&a| m.extent(a)));
                assert_eq!(m.extent(g), sup);
            }
        }
    }
}
