//! The verification suites behind `qsetw verify`: each suite sweeps concrete
//! finite instances and reports one line per check. Failures are violations
//! of proved statements; findings flag violations of statements accepted
//! without proof and only affect the exit code under --strict.

use std::sync::Arc;

use rayon::prelude::*;

use qset_core::constructors;
use qset_core::fixtures;
use qset_core::gluing::verify_gluing_adjunction;
use qset_core::gluing::{gluing_completion, is_gluing_complete};
use qset_core::limits::Limits;
use qset_core::morphism::{
    enumerate_functional_homs, enumerate_relational_homs, functionalize, FunctionalMorphism,
    RelationalMorphism,
};
use qset_core::scott::{
    enumerate_singletons, is_scott_complete, relational_iso_to_completion, singletons_qset,
    verify_connection_theorem, verify_scott_adjunction,
};
use qset_core::{QSet, Quantale};

use crate::report::Report;
use crate::search::{self, Predicate, SearchConfig, SearchMode};
use crate::sweep;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Finding,
}

impl Status {
    fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Finding => "FINDING",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Check {
    pub label: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct Suite {
    pub name: &'static str,
    pub checks: Vec<Check>,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Suite {
            name,
            checks: Vec::new(),
        }
    }

    fn check(&mut self, label: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            label: label.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            detail: detail.into(),
        });
    }

    fn finding(&mut self, label: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            label: label.into(),
            status: if ok { Status::Pass } else { Status::Finding },
            detail: detail.into(),
        });
    }

    pub fn failures(&self) -> usize {
        self.checks
            .iter()
            .filter(|c| c.status == Status::Fail)
            .count()
    }

    pub fn findings(&self) -> usize {
        self.checks
            .iter()
            .filter(|c| c.status == Status::Finding)
            .count()
    }

    pub fn to_report(&self) -> Report {
        let mut report = Report::new();
        for c in &self.checks {
            let value = if c.detail.is_empty() {
                c.status.label().to_string()
            } else {
                format!("{} ({})", c.status.label(), c.detail)
            };
            report.push(format!("{}.{}", self.name, c.label), value);
        }
        report.push(
            format!("{}.result", self.name),
            if self.failures() == 0 { "pass" } else { "FAIL" },
        );
        report
    }
}

/// The two sweep quantales named by the acceptance gates.
fn sweep_quantales() -> Vec<(&'static str, Arc<Quantale>)> {
    vec![("b4", fixtures::b4()), ("chain3", fixtures::chain3())]
}

fn s_counterexample() -> Arc<QSet> {
    Arc::new(constructors::subset_locale_qset(fixtures::b4(), &[0, 1, 3]).unwrap())
}

/// The B4 separation instance: gluing-complete, not Scott-complete, with
/// the unrepresented singleton (⊥, ⊥, ¬a).
pub fn suite_separation(limits: &Limits) -> Suite {
    let mut suite = Suite::new("separation");
    let x = s_counterexample();
    let gluing = is_gluing_complete(&x).unwrap();
    suite.check(
        "gluing_complete",
        gluing.complete,
        "every compatible family of S has exactly one gluing",
    );
    let scott = is_scott_complete(&x, limits).unwrap();
    suite.check(
        "scott_complete",
        !scott.scott_complete,
        "S admits an unrepresented singleton",
    );
    let witness: Vec<String> = scott
        .witness
        .clone()
        .unwrap_or_default()
        .iter()
        .map(|&v| x.quantale().name(v).to_string())
        .collect();
    suite.check(
        "witness_singleton",
        witness == ["bot", "bot", "na"],
        format!("witness = [{}]", witness.join(",")),
    );
    suite
}

/// No swept object is Scott-complete without being gluing-complete.
pub fn suite_scott_implies_gluing(limits: &Limits) -> Suite {
    let mut suite = Suite::new("scott-implies-gluing");
    for (name, q) in sweep_quantales() {
        let xs = sweep::valid_qsets_upto(&q, 3);
        let violations: usize = xs
            .par_iter()
            .map(|x| {
                let scott = is_scott_complete(x, limits).unwrap().scott_complete;
                let gluing = is_gluing_complete(x).unwrap().complete;
                usize::from(scott && !gluing)
            })
            .sum();
        suite.check(
            name,
            violations == 0,
            format!("{} objects swept, {} violations", xs.len(), violations),
        );
    }
    suite
}

/// Every completion lands complete: ℭ(X) is gluing-complete for every swept
/// X, and Singletons(X) is Scott-complete by double enumeration whenever it
/// is small enough.
pub fn suite_completion(limits: &Limits) -> Suite {
    let mut suite = Suite::new("completion");
    for (name, q) in sweep_quantales() {
        let xs = sweep::valid_qsets_upto(&q, 3);
        let results: Vec<(bool, Option<bool>)> = xs
            .par_iter()
            .map(|x| {
                let c = gluing_completion(x).unwrap();
                let gluing_ok = is_gluing_complete(c.qset()).unwrap().complete;
                let sx = singletons_qset(x, limits, false).unwrap();
                let scott_ok = if sx.qset.len() <= limits.double_completion_cap {
                    Some(is_scott_complete(&sx.qset, limits).unwrap().scott_complete)
                } else {
                    None
                };
                (gluing_ok, scott_ok)
            })
            .collect();
        let gluing_failures = results.iter().filter(|(g, _)| !g).count();
        let verified = results.iter().filter(|(_, s)| *s == Some(true)).count();
        let scott_failures = results.iter().filter(|(_, s)| *s == Some(false)).count();
        let certified = results.iter().filter(|(_, s)| s.is_none()).count();
        suite.check(
            format!("{name}.gluing"),
            gluing_failures == 0,
            format!(
                "{} completions checked, {} failures",
                results.len(),
                gluing_failures
            ),
        );
        suite.check(
            format!("{name}.scott"),
            scott_failures == 0,
            format!(
                "{verified} verified by double enumeration, {certified} certified by strength, {scott_failures} failures"
            ),
        );
    }
    suite
}

fn adjunction_objects(q: &Arc<Quantale>) -> (Vec<Arc<QSet>>, Vec<Arc<QSet>>) {
    let mut xs = sweep::canonical_qsets_upto(q, 2);
    xs.push(Arc::new(constructors::terminal(q.clone())));
    if q.props().locale && q.len() == 4 {
        xs.push(Arc::new(
            constructors::subset_locale_qset(q.clone(), &[0, 1, 3]).unwrap(),
        ));
    }
    let ks = xs.clone();
    (xs, ks)
}

/// Zig-zag identities and hom bijections for both completions, over every
/// swept pair with a complete codomain.
pub fn suite_adjunction(limits: &Limits) -> Suite {
    let mut suite = Suite::new("adjunction");
    for (name, q) in sweep_quantales() {
        let (xs, ks) = adjunction_objects(&q);
        let gluing_ks: Vec<Arc<QSet>> = ks
            .iter()
            .filter(|k| is_gluing_complete(k).unwrap().complete)
            .cloned()
            .collect();
        let scott_ks: Vec<Arc<QSet>> = ks
            .iter()
            .filter(|k| is_scott_complete(k, limits).unwrap().scott_complete)
            .cloned()
            .collect();

        let gluing_results: Vec<bool> = xs
            .par_iter()
            .flat_map(|x| {
                gluing_ks
                    .par_iter()
                    .map(|k| verify_gluing_adjunction(x, k, limits).unwrap().passes())
            })
            .collect();
        let failures = gluing_results.iter().filter(|ok| !**ok).count();
        suite.check(
            format!("{name}.gluing"),
            failures == 0,
            format!(
                "{} (X,K) pairs, {} failures",
                gluing_results.len(),
                failures
            ),
        );

        let scott_results: Vec<(bool, bool)> = xs
            .par_iter()
            .flat_map(|x| {
                scott_ks.par_iter().map(|k| {
                    let report = verify_scott_adjunction(x, k, limits).unwrap();
                    (report.passes(), report.zigzag_left.is_some())
                })
            })
            .collect();
        let failures = scott_results.iter().filter(|(ok, _)| !ok).count();
        let enumerated = scott_results.iter().filter(|(_, e)| *e).count();
        suite.check(
            format!("{name}.scott"),
            failures == 0 && enumerated > 0,
            format!(
                "{} (X,K) pairs, {} failures, {} left zig-zags enumerated",
                scott_results.len(),
                failures,
                enumerated
            ),
        );
    }
    suite
}

/// δ is a two-sided identity, relational composition is associative, and
/// the graph functor preserves identities and composition.
pub fn suite_category_laws(limits: &Limits) -> Suite {
    let mut suite = Suite::new("category-laws");
    for (name, q) in sweep_quantales() {
        let objs = sweep::small_objects(&q);
        let mut identity_checks = 0usize;
        let mut identity_failures = 0usize;
        for x in &objs {
            for y in &objs {
                for phi in enumerate_relational_homs(x, y, limits).unwrap() {
                    identity_checks += 1;
                    let left =
                        RelationalMorphism::compose(&RelationalMorphism::identity(y.clone()), &phi)
                            .unwrap();
                    let right =
                        RelationalMorphism::compose(&phi, &RelationalMorphism::identity(x.clone()))
                            .unwrap();
                    if left.table() != phi.table() || right.table() != phi.table() {
                        identity_failures += 1;
                    }
                }
            }
        }
        suite.check(
            format!("{name}.identity"),
            identity_failures == 0,
            format!("{identity_checks} morphisms, {identity_failures} failures"),
        );

        let mut triples = 0usize;
        let mut assoc_failures = 0usize;
        for w in &objs {
            for x in &objs {
                let homs_wx = enumerate_relational_homs(w, x, limits).unwrap();
                for y in &objs {
                    let homs_xy = enumerate_relational_homs(x, y, limits).unwrap();
                    for z in &objs {
                        let homs_yz = enumerate_relational_homs(y, z, limits).unwrap();
                        for chi in &homs_wx {
                            for phi in &homs_xy {
                                for psi in &homs_yz {
                                    triples += 1;
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
                                    if a.table() != b.table() {
                                        assoc_failures += 1;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        suite.check(
            format!("{name}.associativity"),
            assoc_failures == 0,
            format!("{triples} triples, {assoc_failures} failures"),
        );

        let mut graph_checks = 0usize;
        let mut graph_failures = 0usize;
        for x in &objs {
            let id = FunctionalMorphism::identity(x.clone());
            graph_checks += 1;
            if id.graph().table() != x.delta_table() {
                graph_failures += 1;
            }
            for y in &objs {
                for f in enumerate_functional_homs(x, y, limits).unwrap() {
                    for z in &objs {
                        for g in enumerate_functional_homs(y, z, limits).unwrap() {
                            graph_checks += 1;
                            let gf = FunctionalMorphism::compose(&g, &f).unwrap();
                            let via = RelationalMorphism::compose(&g.graph(), &f.graph()).unwrap();
                            if gf.graph().table() != via.table() {
                                graph_failures += 1;
                            }
                        }
                    }
                }
            }
        }
        suite.check(
            format!("{name}.graph"),
            graph_failures == 0,
            format!("{graph_checks} checks, {graph_failures} failures"),
        );
    }
    suite
}

/// φ(x,ξ) = ξ(x) and its transpose compose to δ on both sides for every
/// swept object, and functionalize/graph invert each other between
/// Scott-complete objects.
pub fn suite_equivalence(limits: &Limits) -> Suite {
    let mut suite = Suite::new("equivalence");
    for (name, q) in sweep_quantales() {
        let xs = sweep::valid_qsets_upto(&q, 3);
        let failures: usize = xs
            .par_iter()
            .map(|x| {
                let iso = relational_iso_to_completion(x, limits).unwrap();
                usize::from(!(iso.left_is_delta && iso.right_is_delta))
            })
            .sum();
        suite.check(
            format!("{name}.relational_iso"),
            failures == 0,
            format!("{} objects, {} failures", xs.len(), failures),
        );

        let complete: Vec<Arc<QSet>> = {
            let mut ks = sweep::canonical_qsets_upto(&q, 2);
            ks.push(Arc::new(constructors::terminal(q.clone())));
            ks.into_iter()
                .filter(|k| is_scott_complete(k, limits).unwrap().scott_complete)
                .collect()
        };
        let mut round_trips = 0usize;
        let mut failures = 0usize;
        for k1 in &complete {
            for k2 in &complete {
                for f in enumerate_functional_homs(k1, k2, limits).unwrap() {
                    round_trips += 1;
                    match functionalize(&f.graph()) {
                        Ok(back) if back.map() == f.map() => {}
                        _ => failures += 1,
                    }
                }
                for phi in enumerate_relational_homs(k1, k2, limits).unwrap() {
                    round_trips += 1;
                    match functionalize(&phi) {
                        Ok(f) if f.graph().table() == phi.table() => {}
                        _ => failures += 1,
                    }
                }
            }
        }
        suite.check(
            format!("{name}.functionalize_graph"),
            failures == 0,
            format!(
                "{round_trips} round trips over {} complete objects, {failures} failures",
                complete.len()
            ),
        );
    }
    suite
}

/// δ(σ_x, ξ) = ξ(x) for every point and singleton of every swept object.
pub fn suite_yoneda(limits: &Limits) -> Suite {
    let mut suite = Suite::new("yoneda");
    for (name, q) in sweep_quantales() {
        let xs = sweep::valid_qsets_upto(&q, 3);
        let failures: usize = xs
            .par_iter()
            .map(|x| {
                let singletons = enumerate_singletons(x, limits).unwrap();
                let q = x.quantale();
                let mut bad = 0usize;
                for p in 0..x.len() {
                    for xi in &singletons {
                        let lhs = q.join_iter((0..x.len()).map(|y| q.tensor(x.delta(y, p), xi[y])));
                        if lhs != xi[p] {
                            bad += 1;
                        }
                    }
                }
                bad
            })
            .sum();
        suite.check(
            name,
            failures == 0,
            format!("{} objects, {} failures", xs.len(), failures),
        );
    }
    suite
}

/// Idempotent semicartesian quantales have ⊗ equal to ∧, table for table.
pub fn suite_locale_collapse() -> Suite {
    let mut suite = Suite::new("locale-collapse");
    let named = [
        ("b4", fixtures::b4()),
        ("chain3", fixtures::chain3()),
        ("l3-mv", fixtures::l3()),
        ("ideals-z4", fixtures::ideals_z4()),
        ("one", fixtures::one()),
    ];
    for (name, q) in named {
        let p = q.props();
        if p.idempotent && p.semicartesian {
            let collapse =
                (0..q.len()).all(|a| (0..q.len()).all(|b| q.tensor(a, b) == q.meet2(a, b)));
            suite.check(name, collapse, "tensor table equals meet table");
        } else {
            suite.check(name, true, "not a locale; collapse does not apply");
        }
    }
    suite
}

/// No hom-set over a strong quantale contains two distinct pointwise
/// comparable relational morphisms; over non-strong quantales a violation is
/// a finding, not a failure.
pub fn suite_discrete_hom(limits: &Limits) -> Suite {
    let mut suite = Suite::new("discrete-hom");
    let named = [
        ("b4", fixtures::b4()),
        ("chain3", fixtures::chain3()),
        ("l3-mv", fixtures::l3()),
    ];
    for (name, q) in named {
        let strong = q.props().strong;
        let objs = sweep::small_objects(&q);
        let mut pairs = 0usize;
        let mut comparable = 0usize;
        for x in &objs {
            for y in &objs {
                let homs = enumerate_relational_homs(x, y, limits).unwrap();
                for (i, phi) in homs.iter().enumerate() {
                    for (j, psi) in homs.iter().enumerate() {
                        if i != j {
                            pairs += 1;
                            if phi.pointwise_le(psi) {
                                comparable += 1;
                            }
                        }
                    }
                }
            }
        }
        let detail = format!("{pairs} ordered pairs, {comparable} comparable");
        if strong {
            suite.check(name, comparable == 0, detail);
        } else {
            suite.finding(name, comparable == 0, detail);
        }
    }
    suite
}

/// Graph is injective on Hom(−, Y) for every swept domain exactly when Y is
/// extensional; non-extensional codomains are refuted with the one-point
/// witness of matching extent.
pub fn suite_graph_faithful(limits: &Limits) -> Suite {
    let mut suite = Suite::new("graph-faithful");
    for (name, q) in sweep_quantales() {
        let ys = adjunction_objects(&q).0;
        let xs = {
            let mut xs = sweep::canonical_qsets_upto(&q, 2);
            xs.push(Arc::new(QSet::new(q.clone(), vec![], vec![]).unwrap()));
            xs
        };
        let mut checked = 0usize;
        let mut failures = 0usize;
        for y in &ys {
            if y.is_extensional() {
                for x in &xs {
                    checked += 1;
                    if !qset_core::morphism::graph_faithful_on(x, y, limits).unwrap() {
                        failures += 1;
                    }
                }
            } else {
                checked += 1;
                let (p, _) = y.extensionality_witness().unwrap();
                let witness = Arc::new(constructors::single_point(q.clone(), y.extent(p)).unwrap());
                if qset_core::morphism::graph_faithful_on(&witness, y, limits).unwrap() {
                    failures += 1;
                }
            }
        }
        suite.check(
            name,
            failures == 0,
            format!("{checked} (X,Y) checks, {failures} failures"),
        );
    }
    suite
}

/// The stated equivalence between Scott-completeness and gluing-completeness
/// plus (*σ), evaluated on every extensional swept object. Violations are
/// findings.
pub fn suite_connection(limits: &Limits) -> Suite {
    let mut suite = Suite::new("connection");
    for (name, q) in sweep_quantales() {
        let xs = sweep::valid_qsets_upto(&q, 3);
        let outcomes: Vec<bool> = xs
            .par_iter()
            .filter(|x| x.is_extensional())
            .map(|x| {
                verify_connection_theorem(x, limits)
                    .unwrap()
                    .equivalence_holds
            })
            .collect();
        let violations = outcomes.iter().filter(|ok| !**ok).count();
        suite.finding(
            name,
            violations == 0,
            format!(
                "{} extensional objects, {} violations",
                outcomes.len(),
                violations
            ),
        );
    }
    suite
}

/// A bounded search pass: Scott-complete-but-not-gluing-complete instances
/// must not exist, and the non-extensional-complete predicate is empty by
/// definition.
pub fn suite_search_smoke(limits: &Limits) -> Suite {
    let mut suite = Suite::new("search-smoke");
    for predicate in [Predicate::ScottNotGluing, Predicate::NonextensionalComplete] {
        let config = SearchConfig {
            max_quantale: 3,
            max_carrier: 2,
            predicate,
            mode: SearchMode::Exhaustive,
            seed: 0,
            samples: 0,
        };
        let findings = search::search(&config, limits);
        suite.check(
            predicate.name(),
            findings.is_empty(),
            format!("{} findings at caps (3,2)", findings.len()),
        );
    }
    suite
}

pub fn run_suite(name: &str, limits: &Limits) -> Option<Vec<Suite>> {
    let suite = match name {
        "separation" => suite_separation(limits),
        "scott-implies-gluing" => suite_scott_implies_gluing(limits),
        "completion" => suite_completion(limits),
        "adjunction" => suite_adjunction(limits),
        "category-laws" => suite_category_laws(limits),
        "equivalence" => suite_equivalence(limits),
        "yoneda" => suite_yoneda(limits),
        "locale-collapse" => suite_locale_collapse(),
        "discrete-hom" => suite_discrete_hom(limits),
        "graph-faithful" => suite_graph_faithful(limits),
        "connection" => suite_connection(limits),
        "search-smoke" => suite_search_smoke(limits),
        "all" => {
            return Some(vec![
                suite_separation(limits),
                suite_scott_implies_gluing(limits),
                suite_completion(limits),
                suite_adjunction(limits),
                suite_category_laws(limits),
                suite_equivalence(limits),
                suite_yoneda(limits),
                suite_locale_collapse(),
                suite_discrete_hom(limits),
                suite_graph_faithful(limits),
                suite_connection(limits),
                suite_search_smoke(limits),
            ])
        }
        _ => return None,
    };
    Some(vec![suite])
}

pub const SUITE_NAMES: &[&str] = &[
    "separation",
    "scott-implies-gluing",
    "completion",
    "adjunction",
    "category-laws",
    "equivalence",
    "yoneda",
    "locale-collapse",
    "discrete-hom",
    "graph-faithful",
    "connection",
    "search-smoke",
    "all",
];
