//! Cross-module law suites: category axioms on enumerable homs, functor
//! laws for the graph and singleton functors, and property tests over
//! randomly generated δ-tables.

use std::sync::Arc;

use proptest::prelude::*;

use qset_core::constructors;
use qset_core::fixtures;
use qset_core::gluing::{gluing_completion, is_gluing_complete};
use qset_core::limits::Limits;
use qset_core::morphism::{
    enumerate_functional_homs, enumerate_relational_homs, functionalize, FunctionalMorphism,
    RelationalMorphism,
};
use qset_core::quantale::Quantale;
use qset_core::scott::{is_scott_complete, singletons_on_morphism, singletons_qset};
use qset_core::{QSet, QSetError};

fn objects(q: &Arc<Quantale>) -> Vec<Arc<QSet>> {
    let mut out = vec![
        Arc::new(QSet::new(q.clone(), vec![], vec![]).unwrap()),
        Arc::new(constructors::single_point(q.clone(), q.top()).unwrap()),
        Arc::new(constructors::twobot(q.clone())),
    ];
    if q.props().locale && q.len() == 4 {
        out.push(Arc::new(
            constructors::subset_locale_qset(q.clone(), &[0, 1, 3]).unwrap(),
        ));
    } else {
        out.push(Arc::new(constructors::terminal(q.clone())));
    }
    out
}

#[test]
fn relational_category_laws_on_all_enumerable_triples() {
    let limits = Limits::default();
    for q in [fixtures::b4(), fixtures::chain3()] {
        let objs = objects(&q);
        for x in &objs {
            for y in &objs {
                let homs_xy = enumerate_relational_homs(x, y, &limits).unwrap();
                for phi in &homs_xy {
                    let left =
                        RelationalMorphism::compose(&RelationalMorphism::identity(y.clone()), phi)
                            .unwrap();
                    let right =
                        RelationalMorphism::compose(phi, &RelationalMorphism::identity(x.clone()))
                            .unwrap();
                    assert_eq!(left.table(), phi.table());
                    assert_eq!(right.table(), phi.table());
                }
                for z in &objs {
                    let homs_yz = enumerate_relational_homs(y, z, &limits).unwrap();
                    for w in &objs {
                        let homs_wx = enumerate_relational_homs(w, x, &limits).unwrap();
                        for chi in &homs_wx {
                            for phi in &homs_xy {
                                for psi in &homs_yz {
                                    let a = RelationalMorphism::compose(
                                        psi,
                                        &RelationalMorphism::compose(phi, chi).unwrap(),
                                    )
                                    .unwrap();
                                    let b = RelationalMorphism::compose(
                                        &RelationalMorphism::compose(psi, phi).unwrap(),
                                        chi,
                                    )
                                    .unwrap();
                                    assert_eq!(a.table(), b.table());
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn functional_category_laws_and_graph_functoriality() {
    let limits = Limits::default();
    for q in [fixtures::b4(), fixtures::chain3()] {
        let objs = objects(&q);
        for x in &objs {
            let id = FunctionalMorphism::identity(x.clone());
            assert_eq!(id.graph().table(), x.delta_table());
            for y in &objs {
                for f in enumerate_functional_homs(x, y, &limits).unwrap() {
                    let lid =
                        FunctionalMorphism::compose(&FunctionalMorphism::identity(y.clone()), &f)
                            .unwrap();
                    let rid =
                        FunctionalMorphism::compose(&f, &FunctionalMorphism::identity(x.clone()))
                            .unwrap();
                    assert_eq!(lid.map(), f.map());
                    assert_eq!(rid.map(), f.map());
                    for z in &objs {
                        for g in enumerate_functional_homs(y, z, &limits).unwrap() {
                            let gf = FunctionalMorphism::compose(&g, &f).unwrap();
                            let via_graphs =
                                RelationalMorphism::compose(&g.graph(), &f.graph()).unwrap();
                            assert_eq!(gf.graph().table(), via_graphs.table());
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn discrete_hom_order_on_strong_fixtures() {
    let limits = Limits::default();
    for q in [fixtures::b4(), fixtures::chain3(), fixtures::l3()] {
        assert!(q.props().strong);
        let objs = objects(&q);
        for x in &objs {
            for y in &objs {
                let homs = enumerate_relational_homs(x, y, &limits).unwrap();
                for (i, phi) in homs.iter().enumerate() {
                    for (j, psi) in homs.iter().enumerate() {
                        if i != j && phi.pointwise_le(psi) {
                            panic!(
                                "distinct comparable relational morphisms over a strong quantale"
                            );
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn functionalize_and_graph_are_mutually_inverse_on_complete_objects() {
    let limits = Limits::default();
    let b4 = fixtures::b4();
    let complete: Vec<Arc<QSet>> = vec![
        Arc::new(constructors::terminal(b4.clone())),
        Arc::new(constructors::terminal(fixtures::chain3())),
        singletons_qset(
            &constructors::subset_locale_qset(b4.clone(), &[0, 1, 3]).unwrap(),
            &limits,
            false,
        )
        .unwrap()
        .qset,
    ];
    for k1 in &complete {
        for k2 in &complete {
            if k1.quantale() != k2.quantale() {
                continue;
            }
            assert!(is_scott_complete(k1, &limits).unwrap().scott_complete);
            for f in enumerate_functional_homs(k1, k2, &limits).unwrap() {
                let back = functionalize(&f.graph()).unwrap();
                assert_eq!(back.map(), f.map());
            }
            for phi in enumerate_relational_homs(k1, k2, &limits).unwrap() {
                let f = functionalize(&phi).unwrap();
                assert_eq!(f.graph().table(), phi.table());
            }
        }
    }
}

#[test]
fn functionalize_reports_the_separation_witness() {
    let b4 = fixtures::b4();
    let s = Arc::new(constructors::subset_locale_qset(b4.clone(), &[0, 1, 3]).unwrap());
    // φ into S sending the ⊤-extent point to the unrepresented singleton
    let point = Arc::new(constructors::single_point(b4, 2).unwrap());
    let phi = RelationalMorphism::new(point, s, vec![0, 0, 2]).unwrap();
    let err = functionalize(&phi).unwrap_err();
    match err {
        qset_core::morphism::MorphismError::NotScottComplete { singleton } => {
            assert_eq!(singleton, vec![0, 0, 2]);
        }
        other => panic!("unexpected error {other:?}"),
    }
}

#[test]
fn singleton_functor_laws_on_instances() {
    let limits = Limits::default();
    let b4 = fixtures::b4();
    let x = Arc::new(constructors::twobot(b4.clone()));
    let y = Arc::new(constructors::subset_locale_qset(b4.clone(), &[0, 1, 3]).unwrap());
    let z = Arc::new(constructors::terminal(b4));
    let sx = singletons_qset(&x, &limits, false).unwrap();
    let sy = singletons_qset(&y, &limits, false).unwrap();
    let sz = singletons_qset(&z, &limits, false).unwrap();
    let id = FunctionalMorphism::identity(x.clone());
    let sid = singletons_on_morphism(&id, &sx, &sx).unwrap();
    assert_eq!(
        sid.map(),
        FunctionalMorphism::identity(sx.qset.clone()).map()
    );
    for f in enumerate_functional_homs(&x, &y, &limits).unwrap() {
        for g in enumerate_functional_homs(&y, &z, &limits).unwrap() {
            let gf = FunctionalMorphism::compose(&g, &f).unwrap();
            let lhs = singletons_on_morphism(&gf, &sx, &sz).unwrap();
            let rhs = FunctionalMorphism::compose(
                &singletons_on_morphism(&g, &sy, &sz).unwrap(),
                &singletons_on_morphism(&f, &sx, &sy).unwrap(),
            )
            .unwrap();
            assert_eq!(lhs.map(), rhs.map());
        }
    }
}

#[test]
fn induced_singleton_maps() {
    let limits = Limits::default();
    let b4 = fixtures::b4();
    let x = Arc::new(constructors::subset_locale_qset(b4.clone(), &[0, 1, 3]).unwrap());
    let y = Arc::new(constructors::terminal(b4));
    // δ as a relation induces the representable-singleton map x ↦ σ_x
    let delta = RelationalMorphism::identity(x.clone());
    let induced = qset_core::morphism::induced_singleton_map(&delta, &limits).unwrap();
    let completion = qset_core::scott::scott_completion(&x, &limits).unwrap();
    assert_eq!(induced.map(), completion.unit.map());
    // the graph of f induces x ↦ σ_f(x)
    for f in enumerate_functional_homs(&x, &y, &limits).unwrap() {
        let induced = qset_core::morphism::induced_singleton_map(&f.graph(), &limits).unwrap();
        let sy = singletons_qset(&y, &limits, false).unwrap();
        for p in 0..x.len() {
            let expected = sy
                .index_of(&qset_core::scott::representable(&y, f.apply(p)))
                .unwrap();
            assert_eq!(induced.apply(p), expected);
        }
    }
}

#[test]
fn graph_commutes_with_the_singleton_functor_on_instances() {
    let limits = Limits::default();
    let b4 = fixtures::b4();
    let x = Arc::new(constructors::twobot(b4.clone()));
    let y = Arc::new(constructors::subset_locale_qset(b4, &[0, 1, 3]).unwrap());
    let alpha_x = qset_core::scott::relational_iso_to_completion(&x, &limits)
        .unwrap()
        .phi;
    let alpha_y = qset_core::scott::relational_iso_to_completion(&y, &limits)
        .unwrap()
        .phi;
    let sx = singletons_qset(&x, &limits, false).unwrap();
    let sy = singletons_qset(&y, &limits, false).unwrap();
    for f in enumerate_functional_homs(&x, &y, &limits).unwrap() {
        let sf = singletons_on_morphism(&f, &sx, &sy).unwrap();
        let left = RelationalMorphism::compose(&alpha_y, &f.graph()).unwrap();
        let right = RelationalMorphism::compose(&sf.graph(), &alpha_x).unwrap();
        assert_eq!(left.table(), right.table());
    }
}

#[test]
fn equalizer_of_the_glued_double_recovers_the_shared_subset() {
    // glue two copies of X along a subset A and equalize the two branch
    // inclusions
    let q = fixtures::chain3();
    let x = Arc::new(constructors::terminal(q.clone()));
    let shared: Vec<usize> = vec![0, 1];
    let outside: Vec<usize> = vec![2];
    let k = x.len() + outside.len();
    let mut carrier: Vec<String> = x.carrier().iter().map(|n| format!("{n}@0")).collect();
    carrier.extend(outside.iter().map(|&p| format!("{}@1", x.name(p))));
    let branch_point = |i: usize| -> (usize, usize) {
        if i < x.len() {
            (i, 0)
        } else {
            (outside[i - x.len()], 1)
        }
    };
    let mut delta = vec![0usize; k * k];
    for i in 0..k {
        for j in 0..k {
            let (p, bi) = branch_point(i);
            let (r, bj) = branch_point(j);
            delta[i * k + j] = if bi == bj {
                x.delta(p, r)
            } else {
                q.join_iter(
                    shared
                        .iter()
                        .map(|&a| q.tensor(x.delta(p, a), x.delta(a, r))),
                )
            };
        }
    }
    let glued = Arc::new(QSet::new(q.clone(), carrier, delta).unwrap());
    let upper: Vec<usize> = (0..x.len()).collect();
    let lower: Vec<usize> = (0..x.len())
        .map(|p| {
            if shared.contains(&p) {
                p
            } else {
                x.len() + outside.iter().position(|&o| o == p).unwrap()
            }
        })
        .collect();
    let i0 = FunctionalMorphism::new(x.clone(), glued.clone(), upper).unwrap();
    let i1 = FunctionalMorphism::new(x.clone(), glued, lower).unwrap();
    let (eq, inclusion) = constructors::equalizer(&i0, &i1).unwrap();
    assert_eq!(eq.carrier(), &["bot", "mid"]);
    // the inclusion preserves δ on the nose
    for a in 0..eq.len() {
        for b in 0..eq.len() {
            assert_eq!(
                eq.delta(a, b),
                x.delta(inclusion.apply(a), inclusion.apply(b))
            );
        }
    }
}

// Independent validity check for a δ-table, written against the raw axioms.
fn oracle_valid(q: &Quantale, k: usize, delta: &[usize]) -> Result<(), &'static str> {
    let d = |x: usize, y: usize| delta[x * k + y];
    for x in 0..k {
        for y in 0..k {
            if d(x, y) != d(y, x) {
                return Err("symmetry");
            }
            if q.tensor(d(x, x), d(x, y)) != d(x, y) {
                return Err("extent law");
            }
            if !q.is_le(d(x, y), q.meet2(d(x, x), d(y, y))) {
                return Err("bound");
            }
            for z in 0..k {
                if !q.is_le(q.tensor(d(x, y), d(y, z)), d(x, z)) {
                    return Err("transitivity");
                }
            }
        }
    }
    Ok(())
}

fn delta_strategy(nq: usize, k: usize) -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(0..nq, k * k)
}

proptest! {
    // Construction accepts exactly the tables the raw axioms accept.
    #[test]
    fn construction_agrees_with_the_raw_axioms(table in delta_strategy(4, 3)) {
        let q = fixtures::b4();
        let carrier = vec!["x".to_string(), "y".to_string(), "z".to_string()];
        let built = QSet::new(q.clone(), carrier, table.clone());
        let expected = oracle_valid(&q, 3, &table);
        prop_assert_eq!(built.is_ok(), expected.is_ok());
        if let Err(e) = built {
            prop_assert!(!matches!(e, QSetError::MalformedTable(_)));
        }
    }

    // Symmetrized tables that validate always complete to a gluing-complete
    // object whose unit preserves δ.
    #[test]
    fn completion_is_complete_on_random_qsets(upper in proptest::collection::vec(0..4usize, 6)) {
        let q = fixtures::b4();
        let mut table = vec![0usize; 9];
        let mut it = upper.iter();
        for x in 0..3 {
            for y in x..3 {
                let v = *it.next().unwrap();
                table[x * 3 + y] = v;
                table[y * 3 + x] = v;
            }
        }
        let carrier = vec!["x".to_string(), "y".to_string(), "z".to_string()];
        if let Ok(qset) = QSet::new(q, carrier, table) {
            let x = Arc::new(qset);
            let c = gluing_completion(&x).unwrap();
            prop_assert!(is_gluing_complete(c.qset()).unwrap().complete);
            for p in 0..x.len() {
                for r in 0..x.len() {
                    prop_assert_eq!(x.delta(p, r), c.qset().delta(c.unit.apply(p), c.unit.apply(r)));
                }
            }
        }
    }
}
