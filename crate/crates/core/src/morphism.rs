//! Functional, relational, and e-morphisms between Q-sets, their category
//! structure, the graph functor, and exhaustive hom-set enumeration.
//!
//! Validity is checked at construction. Composition re-checks the result in
//! debug builds only, since the law suites compose heavily.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::limits::Limits;
use crate::qset::QSet;

/// Names the violated axiom and the witnessing tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomViolation {
    pub axiom: &'static str,
    pub witness: Vec<String>,
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails at (", self.axiom)?;
        for (k, w) in self.witness.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{w}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MorphismError {
    DomainMismatch,
    Invalid(AxiomViolation),
    MalformedTable(String),
    TooLarge(String),
    StrengthRequired,
    /// The codomain fails to uniquely represent the reported singleton
    /// vector (values indexed by the codomain carrier).
    NotScottComplete {
        singleton: Vec<usize>,
    },
    /// The declared error element of an e-morphism is not idempotent.
    ErrorNotIdempotent {
        e: String,
    },
}

impl fmt::Display for MorphismError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MorphismError::DomainMismatch => write!(f, "domain/codomain mismatch"),
            MorphismError::Invalid(v) => write!(f, "{v}"),
            MorphismError::MalformedTable(m) => write!(f, "malformed table: {m}"),
            MorphismError::TooLarge(m) => write!(f, "enumeration guard exceeded: {m}"),
            MorphismError::StrengthRequired => write!(f, "quantale must be strong"),
            MorphismError::NotScottComplete { .. } => {
                write!(f, "codomain is not Scott-complete")
            }
            MorphismError::ErrorNotIdempotent { e } => {
                write!(f, "error element {e} is not idempotent")
            }
        }
    }
}

impl core::error::Error for MorphismError {}

fn same_qset(a: &Arc<QSet>, b: &Arc<QSet>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A map that increases δ and preserves extents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionalMorphism {
    dom: Arc<QSet>,
    cod: Arc<QSet>,
    map: Vec<usize>,
}

/// Checks the two functional morphism axioms, returning the first violation.
pub fn functional_violation(dom: &QSet, cod: &QSet, map: &[usize]) -> Option<AxiomViolation> {
    let q = dom.quantale();
    for x in 0..dom.len() {
        if cod.extent(map[x]) != dom.extent(x) {
            return Some(AxiomViolation {
                axiom: "extent preservation",
                witness: alloc::vec![dom.name(x).to_string()],
            });
        }
        for y in 0..dom.len() {
            if !q.is_le(dom.delta(x, y), cod.delta(map[x], map[y])) {
                return Some(AxiomViolation {
                    axiom: "delta increase",
                    witness: alloc::vec![dom.name(x).to_string(), dom.name(y).to_string()],
                });
            }
        }
    }
    None
}

impl FunctionalMorphism {
    pub fn new(dom: Arc<QSet>, cod: Arc<QSet>, map: Vec<usize>) -> Result<Self, MorphismError> {
        if dom.quantale() != cod.quantale() {
            return Err(MorphismError::DomainMismatch);
        }
        if map.len() != dom.len() || map.iter().any(|&y| y >= cod.len()) {
            return Err(MorphismError::MalformedTable(String::from(
                "map does not cover the carrier",
            )));
        }
        match functional_violation(&dom, &cod, &map) {
            Some(v) => Err(MorphismError::Invalid(v)),
            None => Ok(FunctionalMorphism { dom, cod, map }),
        }
    }

    pub fn identity(x: Arc<QSet>) -> Self {
        let map = (0..x.len()).collect();
        FunctionalMorphism {
            dom: x.clone(),
            cod: x,
            map,
        }
    }

    pub fn dom(&self) -> &Arc<QSet> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<QSet> {
        &self.cod
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn compose(g: &Self, f: &Self) -> Result<Self, MorphismError> {
        if !same_qset(&f.cod, &g.dom) {
            return Err(MorphismError::DomainMismatch);
        }
        let map: Vec<usize> = f.map.iter().map(|&y| g.map[y]).collect();
        debug_assert!(functional_violation(&f.dom, &g.cod, &map).is_none());
        Ok(FunctionalMorphism {
            dom: f.dom.clone(),
            cod: g.cod.clone(),
            map,
        })
    }

    /// The graph relation δ(f(x), y).
    pub fn graph(&self) -> RelationalMorphism {
        let kx = self.dom.len();
        let ky = self.cod.len();
        let mut table = alloc::vec![0usize; kx * ky];
        for x in 0..kx {
            for y in 0..ky {
                table[x * ky + y] = self.cod.delta(self.map[x], y);
            }
        }
        debug_assert!(relational_violation(&self.dom, &self.cod, &table).is_none());
        RelationalMorphism {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            table,
        }
    }
}

/// A Q-valued relation satisfying the six relational morphism axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationalMorphism {
    dom: Arc<QSet>,
    cod: Arc<QSet>,
    table: Vec<usize>,
}

/// Checks the six relational morphism axioms, returning the first violation.
pub fn relational_violation(dom: &QSet, cod: &QSet, table: &[usize]) -> Option<AxiomViolation> {
    let q = dom.quantale();
    let kx = dom.len();
    let ky = cod.len();
    let phi = |x: usize, y: usize| table[x * ky + y];
    let wit2 = |x: usize, y: usize| alloc::vec![dom.name(x).to_string(), cod.name(y).to_string()];
    for x in 0..kx {
        for y in 0..ky {
            if q.tensor(dom.extent(x), phi(x, y)) != phi(x, y) {
                return Some(AxiomViolation {
                    axiom: "Ex ⊗ φ(x,y) = φ(x,y)",
                    witness: wit2(x, y),
                });
            }
            if q.tensor(phi(x, y), cod.extent(y)) != phi(x, y) {
                return Some(AxiomViolation {
                    axiom: "φ(x,y) ⊗ Ey = φ(x,y)",
                    witness: wit2(x, y),
                });
            }
            for x2 in 0..kx {
                if !q.is_le(q.tensor(dom.delta(x, x2), phi(x, y)), phi(x2, y)) {
                    return Some(AxiomViolation {
                        axiom: "δ(x,x') ⊗ φ(x,y) ≤ φ(x',y)",
                        witness: alloc::vec![
                            dom.name(x).to_string(),
                            dom.name(x2).to_string(),
                            cod.name(y).to_string(),
                        ],
                    });
                }
            }
            for y2 in 0..ky {
                if !q.is_le(q.tensor(phi(x, y), cod.delta(y, y2)), phi(x, y2)) {
                    return Some(AxiomViolation {
                        axiom: "φ(x,y) ⊗ δ(y,y') ≤ φ(x,y')",
                        witness: alloc::vec![
                            dom.name(x).to_string(),
                            cod.name(y).to_string(),
                            cod.name(y2).to_string(),
                        ],
                    });
                }
                if !q.is_le(q.tensor(phi(x, y), phi(x, y2)), cod.delta(y, y2)) {
                    return Some(AxiomViolation {
                        axiom: "φ(x,y) ⊗ φ(x,y') ≤ δ(y,y')",
                        witness: alloc::vec![
                            dom.name(x).to_string(),
                            cod.name(y).to_string(),
                            cod.name(y2).to_string(),
                        ],
                    });
                }
            }
        }
        let sum = q.join_iter((0..ky).map(|y| phi(x, y)));
        if sum != dom.extent(x) {
            return Some(AxiomViolation {
                axiom: "⋁_y φ(x,y) = Ex",
                witness: alloc::vec![dom.name(x).to_string()],
            });
        }
    }
    None
}

impl RelationalMorphism {
    pub fn new(dom: Arc<QSet>, cod: Arc<QSet>, table: Vec<usize>) -> Result<Self, MorphismError> {
        if dom.quantale() != cod.quantale() {
            return Err(MorphismError::DomainMismatch);
        }
        let nq = dom.quantale().len();
        if table.len() != dom.len() * cod.len() || table.iter().any(|&v| v >= nq) {
            return Err(MorphismError::MalformedTable(String::from(
                "relation table does not cover dom × cod",
            )));
        }
        match relational_violation(&dom, &cod, &table) {
            Some(v) => Err(MorphismError::Invalid(v)),
            None => Ok(RelationalMorphism { dom, cod, table }),
        }
    }

    /// δ as a relation; the identity of the relational category.
    pub fn identity(x: Arc<QSet>) -> Self {
        let table = x.delta_table().to_vec();
        RelationalMorphism {
            dom: x.clone(),
            cod: x,
            table,
        }
    }

    pub fn dom(&self) -> &Arc<QSet> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<QSet> {
        &self.cod
    }

    pub fn at(&self, x: usize, y: usize) -> usize {
        self.table[x * self.cod.len() + y]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    /// [ψ∘φ](x,z) = ⋁_y φ(x,y) ⊗ ψ(y,z).
    pub fn compose(psi: &Self, phi: &Self) -> Result<Self, MorphismError> {
        if !same_qset(&phi.cod, &psi.dom) {
            return Err(MorphismError::DomainMismatch);
        }
        let q = phi.dom.quantale().clone();
        let kx = phi.dom.len();
        let ky = phi.cod.len();
        let kz = psi.cod.len();
        let mut table = alloc::vec![0usize; kx * kz];
        for x in 0..kx {
            for z in 0..kz {
                table[x * kz + z] =
                    q.join_iter((0..ky).map(|y| q.tensor(phi.at(x, y), psi.at(y, z))));
            }
        }
        debug_assert!(relational_violation(&phi.dom, &psi.cod, &table).is_none());
        Ok(RelationalMorphism {
            dom: phi.dom.clone(),
            cod: psi.cod.clone(),
            table,
        })
    }

    /// Pointwise order on parallel relational morphisms.
    pub fn pointwise_le(&self, other: &Self) -> bool {
        let q = self.dom.quantale();
        self.table
            .iter()
            .zip(other.table.iter())
            .all(|(&a, &b)| q.is_le(a, b))
    }

    /// The singleton over the codomain obtained by fixing the first
    /// coordinate: φ(x, −).
    pub fn row(&self, x: usize) -> Vec<usize> {
        (0..self.cod.len()).map(|y| self.at(x, y)).collect()
    }
}

/// A functional morphism up to an idempotent error e: e ⊗ δ(x,x') ≤
/// δ(f(x),f(x')) and E(f(x)) = e ⊗ E(x).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EMorphism {
    error: usize,
    dom: Arc<QSet>,
    cod: Arc<QSet>,
    map: Vec<usize>,
}

pub fn e_violation(dom: &QSet, cod: &QSet, map: &[usize], e: usize) -> Option<AxiomViolation> {
    let q = dom.quantale();
    for x in 0..dom.len() {
        if cod.extent(map[x]) != q.tensor(e, dom.extent(x)) {
            return Some(AxiomViolation {
                axiom: "E(f x) = e ⊗ E(x)",
                witness: alloc::vec![dom.name(x).to_string()],
            });
        }
        for y in 0..dom.len() {
            if !q.is_le(q.tensor(e, dom.delta(x, y)), cod.delta(map[x], map[y])) {
                return Some(AxiomViolation {
                    axiom: "e ⊗ δ(x,x') ≤ δ(f x, f x')",
                    witness: alloc::vec![dom.name(x).to_string(), dom.name(y).to_string()],
                });
            }
        }
    }
    None
}

impl EMorphism {
    pub fn new(
        dom: Arc<QSet>,
        cod: Arc<QSet>,
        map: Vec<usize>,
        error: usize,
    ) -> Result<Self, MorphismError> {
        if dom.quantale() != cod.quantale() {
            return Err(MorphismError::DomainMismatch);
        }
        let q = dom.quantale();
        if !q.is_idempotent(error) {
            return Err(MorphismError::ErrorNotIdempotent {
                e: q.name(error).to_string(),
            });
        }
        if map.len() != dom.len() || map.iter().any(|&y| y >= cod.len()) {
            return Err(MorphismError::MalformedTable(String::from(
                "map does not cover the carrier",
            )));
        }
        match e_violation(&dom, &cod, &map, error) {
            Some(v) => Err(MorphismError::Invalid(v)),
            None => Ok(EMorphism {
                error,
                dom,
                cod,
                map,
            }),
        }
    }

    pub fn error(&self) -> usize {
        self.error
    }

    pub fn dom(&self) -> &Arc<QSet> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<QSet> {
        &self.cod
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// Composite carries the error e ⊗ e'.
    pub fn compose(g: &Self, f: &Self) -> Result<Self, MorphismError> {
        if !same_qset(&f.cod, &g.dom) {
            return Err(MorphismError::DomainMismatch);
        }
        let q = f.dom.quantale();
        let error = q.tensor(f.error, g.error);
        let map: Vec<usize> = f.map.iter().map(|&y| g.map[y]).collect();
        debug_assert!(e_violation(&f.dom, &g.cod, &map, error).is_none());
        Ok(EMorphism {
            error,
            dom: f.dom.clone(),
            cod: g.cod.clone(),
            map,
        })
    }
}

/// All functional morphisms X → Y in lexicographic map order.
pub fn enumerate_functional_homs(
    dom: &Arc<QSet>,
    cod: &Arc<QSet>,
    limits: &Limits,
) -> Result<Vec<FunctionalMorphism>, MorphismError> {
    let kx = dom.len();
    let ky = cod.len();
    if kx == 0 {
        return Ok(alloc::vec![FunctionalMorphism {
            dom: dom.clone(),
            cod: cod.clone(),
            map: Vec::new(),
        }]);
    }
    if ky == 0 {
        return Ok(Vec::new());
    }
    let candidates = (ky as u64).checked_pow(kx as u32);
    match candidates {
        Some(c) if c <= limits.max_candidates => {}
        _ => {
            return Err(MorphismError::TooLarge(alloc::format!(
                "|Y|^|X| = {ky}^{kx} exceeds the candidate cap {}",
                limits.max_candidates
            )))
        }
    }
    let mut out = Vec::new();
    let mut map = alloc::vec![0usize; kx];
    loop {
        if functional_violation(dom, cod, &map).is_none() {
            out.push(FunctionalMorphism {
                dom: dom.clone(),
                cod: cod.clone(),
                map: map.clone(),
            });
        }
        // lexicographic odometer
        let mut i = kx;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            map[i] += 1;
            if map[i] < ky {
                break;
            }
            map[i] = 0;
        }
    }
}

/// All relational morphisms X → Y, ordered lexicographically by the
/// flattened (dom, cod, element) table. The search prunes with the extent
/// axioms per cell and the pairwise axioms as cells fill in.
pub fn enumerate_relational_homs(
    dom: &Arc<QSet>,
    cod: &Arc<QSet>,
    limits: &Limits,
) -> Result<Vec<RelationalMorphism>, MorphismError> {
    let q = dom.quantale().clone();
    if dom.len() > limits.max_carrier || cod.len() > limits.max_carrier {
        return Err(MorphismError::TooLarge(alloc::format!(
            "carrier exceeds the relational enumeration bound {}",
            limits.max_carrier
        )));
    }
    if q.len() > limits.max_quantale {
        return Err(MorphismError::TooLarge(alloc::format!(
            "quantale exceeds the relational enumeration bound {}",
            limits.max_quantale
        )));
    }
    let kx = dom.len();
    let ky = cod.len();
    // per-cell domains from Ex ⊗ φ = φ and φ ⊗ Ey = φ
    let mut domains = alloc::vec![Vec::new(); kx * ky];
    for x in 0..kx {
        for y in 0..ky {
            domains[x * ky + y] = (0..q.len())
                .filter(|&v| q.tensor(dom.extent(x), v) == v && q.tensor(v, cod.extent(y)) == v)
                .collect();
        }
    }
    let mut out = Vec::new();
    let mut table = alloc::vec![0usize; kx * ky];

    fn admissible(
        q: &crate::quantale::Quantale,
        dom: &QSet,
        cod: &QSet,
        table: &[usize],
        x: usize,
        y: usize,
        v: usize,
    ) -> bool {
        let ky = cod.len();
        // within-row pairwise axioms against already filled cells
        for y2 in 0..y {
            let w = table[x * ky + y2];
            if !q.is_le(q.tensor(v, w), cod.delta(y, y2)) {
                return false;
            }
            if !q.is_le(q.tensor(w, cod.delta(y2, y)), v) {
                return false;
            }
            if !q.is_le(q.tensor(v, cod.delta(y, y2)), w) {
                return false;
            }
        }
        // cross-row axiom against earlier rows in the same column
        for x2 in 0..x {
            let w = table[x2 * ky + y];
            if !q.is_le(q.tensor(dom.delta(x2, x), w), v) {
                return false;
            }
            if !q.is_le(q.tensor(dom.delta(x, x2), v), w) {
                return false;
            }
        }
        true
    }

    fn dfs(
        q: &Arc<crate::quantale::Quantale>,
        dom: &Arc<QSet>,
        cod: &Arc<QSet>,
        domains: &[Vec<usize>],
        table: &mut [usize],
        cell: usize,
        out: &mut Vec<RelationalMorphism>,
    ) {
        let kx = dom.len();
        let ky = cod.len();
        if cell == kx * ky {
            debug_assert!(relational_violation(dom, cod, table).is_none());
            out.push(RelationalMorphism {
                dom: dom.clone(),
                cod: cod.clone(),
                table: table.to_vec(),
            });
            return;
        }
        let x = cell / ky;
        let y = cell % ky;
        for &v in &domains[cell] {
            if !admissible(q, dom, cod, table, x, y, v) {
                continue;
            }
            table[cell] = v;
            if y + 1 == ky {
                let sum = q.join_iter((0..ky).map(|yy| table[x * ky + yy]));
                if sum != dom.extent(x) {
                    continue;
                }
            }
            dfs(q, dom, cod, domains, table, cell + 1, out);
        }
    }

    if kx == 0 {
        out.push(RelationalMorphism {
            dom: dom.clone(),
            cod: cod.clone(),
            table: Vec::new(),
        });
    } else if ky == 0 {
        if (0..kx).all(|x| dom.extent(x) == q.bottom()) {
            out.push(RelationalMorphism {
                dom: dom.clone(),
                cod: cod.clone(),
                table: Vec::new(),
            });
        }
    } else {
        dfs(&q, dom, cod, &domains, &mut table, 0, &mut out);
    }
    Ok(out)
}

/// True iff the graph functor is injective on Hom(X, Y).
pub fn graph_faithful_on(
    dom: &Arc<QSet>,
    cod: &Arc<QSet>,
    limits: &Limits,
) -> Result<bool, MorphismError> {
    let homs = enumerate_functional_homs(dom, cod, limits)?;
    let graphs: Vec<Vec<usize>> = homs.iter().map(|f| f.graph().table).collect();
    for i in 0..graphs.len() {
        for j in (i + 1)..graphs.len() {
            if graphs[i] == graphs[j] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The functional morphism X → Singletons(Y) induced by a relational
/// morphism: x ↦ φ(x, −). Requires a strong quantale so that the singleton
/// Q-set exists.
pub fn induced_singleton_map(
    phi: &RelationalMorphism,
    limits: &Limits,
) -> Result<FunctionalMorphism, MorphismError> {
    if !phi.dom().quantale().props().strong {
        return Err(MorphismError::StrengthRequired);
    }
    let sing = crate::scott::singletons_qset(phi.cod(), limits, false).map_err(|e| match e {
        crate::scott::ScottError::TooLarge(m) => MorphismError::TooLarge(m),
        other => MorphismError::MalformedTable(alloc::format!("singleton object: {other}")),
    })?;
    let cod = sing.qset.clone();
    let mut map = Vec::with_capacity(phi.dom().len());
    for x in 0..phi.dom().len() {
        let row = phi.row(x);
        debug_assert!(crate::scott::singleton_violation(phi.cod(), &row).is_none());
        let idx = sing
            .singletons
            .iter()
            .position(|s| s.values == row)
            .expect("φ(x,−) is always a singleton");
        map.push(idx);
    }
    FunctionalMorphism::new(phi.dom().clone(), cod, map)
}

/// Collapses a relational morphism into the functional morphism it encodes,
/// sending x to the unique element representing φ(x, −). Fails with the
/// witness singleton when the codomain does not represent it uniquely.
pub fn functionalize(phi: &RelationalMorphism) -> Result<FunctionalMorphism, MorphismError> {
    let cod = phi.cod();
    let mut map = Vec::with_capacity(phi.dom().len());
    for x in 0..phi.dom().len() {
        let row = phi.row(x);
        let reps: Vec<usize> = (0..cod.len())
            .filter(|&y| (0..cod.len()).all(|z| cod.delta(z, y) == row[z]))
            .collect();
        if reps.len() != 1 {
            return Err(MorphismError::NotScottComplete { singleton: row });
        }
        map.push(reps[0]);
    }
    FunctionalMorphism::new(phi.dom().clone(), phi.cod().clone(), map)
}
