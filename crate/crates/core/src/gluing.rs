//! Compatible families, gluing elements, the Q-set of compatible families,
//! the δ-quotient reflector, and the gluing completion together with
//! instance-level adjunction verification.
//!
//! Families are bitmasks over the carrier; the carrier is capped at 16 points
//! wherever all families get enumerated. Family names are written `{a,b}` in
//! carrier order and quotient classes are labelled by their least
//! representative, so emitted carriers are deterministic.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::limits::Limits;
use crate::morphism::{enumerate_functional_homs, FunctionalMorphism, MorphismError};
use crate::qset::{DeltaPartition, QSet, QSetError};

pub const FAMILY_CARRIER_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GluingError {
    TooLarge(String),
    NotGluingComplete { family: u32 },
    QSet(QSetError),
    Morphism(MorphismError),
}

impl fmt::Display for GluingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GluingError::TooLarge(m) => write!(f, "enumeration guard exceeded: {m}"),
            GluingError::NotGluingComplete { family } => {
                write!(f, "not gluing-complete (witness family mask {family:#x})")
            }
            GluingError::QSet(e) => write!(f, "{e}"),
            GluingError::Morphism(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for GluingError {}

impl From<QSetError> for GluingError {
    fn from(e: QSetError) -> Self {
        GluingError::QSet(e)
    }
}

impl From<MorphismError> for GluingError {
    fn from(e: MorphismError) -> Self {
        GluingError::Morphism(e)
    }
}

/// A carrier subset whose members pairwise agree on the meet of their
/// extents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatibleFamily {
    over: Arc<QSet>,
    mask: u32,
}

impl CompatibleFamily {
    pub fn new(over: Arc<QSet>, mask: u32) -> Result<Self, GluingError> {
        if !is_compatible(&over, mask) {
            return Err(GluingError::QSet(QSetError::MalformedTable(String::from(
                "family is not compatible",
            ))));
        }
        Ok(CompatibleFamily { over, mask })
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn members(&self) -> Vec<usize> {
        mask_members(self.mask, self.over.len())
    }
}

pub fn mask_members(mask: u32, len: usize) -> Vec<usize> {
    (0..len).filter(|i| mask >> i & 1 == 1).collect()
}

pub fn family_name(x: &QSet, mask: u32) -> String {
    let mut s = String::from("{");
    let mut first = true;
    for i in mask_members(mask, x.len()) {
        if !first {
            s.push(',');
        }
        s.push_str(x.name(i));
        first = false;
    }
    s.push('}');
    s
}

/// δ(a,b) = E(a) ⊗ E(b) for every pair of members; the empty family is
/// vacuously compatible.
pub fn is_compatible(x: &QSet, mask: u32) -> bool {
    let q = x.quantale();
    let members = mask_members(mask, x.len());
    members.iter().all(|&a| {
        members
            .iter()
            .all(|&b| x.delta(a, b) == q.tensor(x.extent(a), x.extent(b)))
    })
}

/// All compatible families, in ascending bitmask order.
pub fn enumerate_compatible(x: &QSet) -> Result<Vec<u32>, GluingError> {
    if x.len() > FAMILY_CARRIER_CAP {
        return Err(GluingError::TooLarge(alloc::format!(
            "family enumeration needs |X| ≤ {FAMILY_CARRIER_CAP}, got {}",
            x.len()
        )));
    }
    Ok((0u32..(1u32 << x.len()))
        .filter(|&m| is_compatible(x, m))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GluingReport {
    pub family: u32,
    pub gluings: Vec<usize>,
    pub unique: bool,
}

/// Scans the carrier for gluings of the family: elements agreeing with each
/// member on its extent, whose own extent is the join of the member extents.
/// Compatibility is not a precondition; when a gluing exists the family is
/// compatible, and that implication is asserted here.
pub fn gluings_of(x: &QSet, mask: u32) -> GluingReport {
    let q = x.quantale();
    let members = mask_members(mask, x.len());
    let target = q.join_iter(members.iter().map(|&a| x.extent(a)));
    let gluings: Vec<usize> = (0..x.len())
        .filter(|&g| x.extent(g) == target && members.iter().all(|&a| x.delta(a, g) == x.extent(a)))
        .collect();
    if !gluings.is_empty() {
        assert!(is_compatible(x, mask), "a glued family must be compatible");
        for &g in &gluings {
            for &h in &gluings {
                assert!(
                    x.delta_equivalent(g, h),
                    "gluings of one family must be δ-equivalent"
                );
            }
        }
    }
    GluingReport {
        family: mask,
        unique: gluings.len() == 1,
        gluings,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GluingCompleteness {
    pub complete: bool,
    /// A compatible family without exactly one gluing, when one exists.
    pub witness: Option<u32>,
    pub every_family_glued: bool,
    pub extensional: bool,
}

/// Every compatible family has exactly one gluing. Also checks the
/// equivalent characterization: all families glued plus extensionality.
pub fn is_gluing_complete(x: &QSet) -> Result<GluingCompleteness, GluingError> {
    let mut witness = None;
    let mut every_family_glued = true;
    for mask in enumerate_compatible(x)? {
        let report = gluings_of(x, mask);
        if report.gluings.is_empty() {
            every_family_glued = false;
        }
        if !report.unique && witness.is_none() {
            witness = Some(mask);
        }
    }
    let extensional = x.is_extensional();
    let complete = witness.is_none();
    assert_eq!(
        complete,
        every_family_glued && extensional,
        "gluing-completeness must match gluings-plus-extensionality"
    );
    Ok(GluingCompleteness {
        complete,
        witness,
        every_family_glued,
        extensional,
    })
}

/// The Q-set of compatible families, δ(A,B) = ⋁ δ(a,b) over members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GluingsQSet {
    pub qset: Arc<QSet>,
    /// Carrier order: ascending bitmask.
    pub families: Vec<u32>,
}

pub fn gluings_qset(x: &QSet) -> Result<GluingsQSet, GluingError> {
    let q = x.quantale().clone();
    let families = enumerate_compatible(x)?;
    let k = families.len();
    let carrier: Vec<String> = families.iter().map(|&m| family_name(x, m)).collect();
    let mut delta = alloc::vec![0usize; k * k];
    for (i, &a) in families.iter().enumerate() {
        for (j, &b) in families.iter().enumerate() {
            delta[i * k + j] = q.join_iter(
                mask_members(a, x.len())
                    .into_iter()
                    .flat_map(|p| mask_members(b, x.len()).into_iter().map(move |r| (p, r)))
                    .map(|(p, r)| x.delta(p, r)),
            );
        }
    }
    let qset = Arc::new(QSet::new(q, carrier, delta)?);
    Ok(GluingsQSet { qset, families })
}

impl GluingsQSet {
    pub fn index_of_mask(&self, mask: u32) -> Option<usize> {
        self.families.iter().position(|&m| m == mask)
    }
}

/// Direct image A ↦ f[A] between the family Q-sets; checks on the way that
/// compatibility and gluing elements are preserved.
pub fn gluings_on_morphism(
    f: &FunctionalMorphism,
    gx: &GluingsQSet,
    gy: &GluingsQSet,
) -> Result<FunctionalMorphism, GluingError> {
    let dom = f.dom();
    let mut map = Vec::with_capacity(gx.families.len());
    for &a in &gx.families {
        let mut image = 0u32;
        for p in mask_members(a, dom.len()) {
            image |= 1 << f.apply(p);
        }
        let j = gy
            .index_of_mask(image)
            .expect("direct images of compatible families stay compatible");
        // gluing elements push forward
        for g in gluings_of(dom, a).gluings {
            let fg = f.apply(g);
            let rep = gluings_of(f.cod(), image);
            assert!(
                rep.gluings.contains(&fg),
                "direct image must preserve gluing elements"
            );
        }
        map.push(j);
    }
    FunctionalMorphism::new(gx.qset.clone(), gy.qset.clone(), map).map_err(GluingError::from)
}

/// The δ-quotient: carrier blocks of δ-equivalent points, labelled by their
/// least representative, with the projection morphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quotient {
    pub qset: Arc<QSet>,
    pub projection: FunctionalMorphism,
    pub partition: DeltaPartition,
}

pub fn delta_quotient(x: &Arc<QSet>) -> Quotient {
    let partition = x.delta_partition();
    let q = x.quantale().clone();
    let k = partition.blocks.len();
    // well-definedness across representatives
    for (i, bi) in partition.blocks.iter().enumerate() {
        for bj in partition.blocks.iter().skip(i) {
            let d = x.delta(bi[0], bj[0]);
            for &p in bi {
                for &r in bj {
                    assert_eq!(x.delta(p, r), d, "δ must be constant across blocks");
                }
            }
        }
    }
    let carrier: Vec<String> = partition
        .representative
        .iter()
        .map(|&r| alloc::format!("[{}]", x.name(r)))
        .collect();
    let mut delta = alloc::vec![0usize; k * k];
    for i in 0..k {
        for j in 0..k {
            delta[i * k + j] = x.delta(partition.representative[i], partition.representative[j]);
        }
    }
    let qset = Arc::new(QSet::new(q, carrier, delta).expect("quotient of a valid Q-set validates"));
    assert!(qset.is_extensional(), "the δ-quotient must be extensional");
    let projection = FunctionalMorphism::new(x.clone(), qset.clone(), partition.block_of.clone())
        .expect("the quotient projection is a functional morphism");
    Quotient {
        qset,
        projection,
        partition,
    }
}

/// The gluing completion: the δ-quotient of the Q-set of compatible
/// families, with the unit x ↦ [{x}].
#[derive(Debug, Clone)]
pub struct Completion {
    pub gluings: GluingsQSet,
    pub quotient: Quotient,
    pub unit: FunctionalMorphism,
}

impl Completion {
    pub fn qset(&self) -> &Arc<QSet> {
        &self.quotient.qset
    }
}

pub fn gluing_completion(x: &Arc<QSet>) -> Result<Completion, GluingError> {
    let gluings = gluings_qset(x)?;
    let quotient = delta_quotient(&gluings.qset);
    let mut unit_map = Vec::with_capacity(x.len());
    for p in 0..x.len() {
        let i = gluings
            .index_of_mask(1 << p)
            .expect("singleton families are compatible");
        unit_map.push(quotient.partition.block_of[i]);
    }
    let unit = FunctionalMorphism::new(x.clone(), quotient.qset.clone(), unit_map)?;
    // the unit leaves δ untouched
    for p in 0..x.len() {
        for r in 0..x.len() {
            assert_eq!(
                x.delta(p, r),
                quotient.qset.delta(unit.apply(p), unit.apply(r)),
                "completion unit must preserve δ"
            );
        }
    }
    Ok(Completion {
        gluings,
        quotient,
        unit,
    })
}

/// ℭ on morphisms: push the representative family forward and land in its
/// class.
pub fn completion_on_morphism(
    f: &FunctionalMorphism,
    cx: &Completion,
    cy: &Completion,
) -> Result<FunctionalMorphism, GluingError> {
    let dom = f.dom();
    let k = cx.quotient.partition.blocks.len();
    let mut map = Vec::with_capacity(k);
    for b in 0..k {
        let fam = cx.gluings.families[cx.quotient.partition.representative[b]];
        let mut image = 0u32;
        for p in mask_members(fam, dom.len()) {
            image |= 1 << f.apply(p);
        }
        let j = cy
            .gluings
            .index_of_mask(image)
            .expect("direct images of compatible families stay compatible");
        map.push(cy.quotient.partition.block_of[j]);
    }
    FunctionalMorphism::new(cx.quotient.qset.clone(), cy.quotient.qset.clone(), map)
        .map_err(GluingError::from)
}

/// The adjunction counit at a gluing-complete object: a family class goes to
/// the unique element gluing it. Checks on the way that δ-equivalent
/// families share their gluings exactly.
pub fn gluing_counit(k: &Arc<QSet>, ck: &Completion) -> Result<FunctionalMorphism, GluingError> {
    let mut map = Vec::with_capacity(ck.quotient.partition.blocks.len());
    for block in &ck.quotient.partition.blocks {
        let mut shared: Option<Vec<usize>> = None;
        for &i in block {
            let report = gluings_of(k, ck.gluings.families[i]);
            match &shared {
                None => shared = Some(report.gluings),
                Some(prev) => assert_eq!(
                    prev, &report.gluings,
                    "δ-equivalent families must have the same gluings"
                ),
            }
        }
        let gluings = shared.unwrap();
        if gluings.len() != 1 {
            return Err(GluingError::NotGluingComplete {
                family: ck.gluings.families[block[0]],
            });
        }
        map.push(gluings[0]);
    }
    FunctionalMorphism::new(ck.quotient.qset.clone(), k.clone(), map).map_err(GluingError::from)
}

/// Instance-level adjunction evidence shared by both completions. A `None`
/// left zig-zag means the double completion exceeded its cap and the
/// identity is certified by the general theorem instead of enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjunctionReport {
    pub hom_count_dom: usize,
    pub hom_count_completed: usize,
    pub bijection: bool,
    pub unit_natural: bool,
    pub counit_natural: bool,
    pub counit_well_defined: bool,
    pub zigzag_left: Option<bool>,
    pub zigzag_right: bool,
}

impl AdjunctionReport {
    pub fn passes(&self) -> bool {
        self.bijection
            && self.unit_natural
            && self.counit_natural
            && self.counit_well_defined
            && self.zigzag_left.unwrap_or(true)
            && self.zigzag_right
    }
}

/// Checks the gluing-completion adjunction between X and a gluing-complete
/// K: hom bijection across the unit, naturality squares on every enumerated
/// morphism, and both zig-zag identities.
pub fn verify_gluing_adjunction(
    x: &Arc<QSet>,
    k: &Arc<QSet>,
    limits: &Limits,
) -> Result<AdjunctionReport, GluingError> {
    let completeness = is_gluing_complete(k)?;
    if !completeness.complete {
        return Err(GluingError::NotGluingComplete {
            family: completeness.witness.unwrap_or(0),
        });
    }
    let cx = gluing_completion(x)?;
    let ck = gluing_completion(k)?;
    let counit_k = gluing_counit(k, &ck)?;
    let counit_well_defined = true; // asserted inside gluing_counit

    // zig-zag at K: ε_K ∘ η_K = id
    let zigzag_right = (0..k.len()).all(|p| counit_k.apply(ck.unit.apply(p)) == p);

    // zig-zag at ℭX: ε_{ℭX} ∘ ℭ(η_X) = id, when the double completion stays
    // within the cap
    let zigzag_left = if cx.qset().len() <= limits.double_completion_cap {
        let ccx = gluing_completion(cx.qset())?;
        let l_eta = completion_on_morphism(&cx.unit, &cx, &ccx)?;
        let counit_cx = gluing_counit(cx.qset(), &ccx)?;
        Some((0..cx.qset().len()).all(|p| counit_cx.apply(l_eta.apply(p)) == p))
    } else {
        None
    };

    let homs_xk = enumerate_functional_homs(x, k, limits)?;
    let homs_ck = enumerate_functional_homs(cx.qset(), k, limits)?;
    let transported: Vec<Vec<usize>> = homs_ck
        .iter()
        .map(|h| (0..x.len()).map(|p| h.apply(cx.unit.apply(p))).collect())
        .collect();
    let injective = (0..transported.len())
        .all(|i| (i + 1..transported.len()).all(|j| transported[i] != transported[j]));
    let surjective = homs_xk
        .iter()
        .all(|f| transported.iter().any(|t| t.as_slice() == f.map()));
    let bijection = injective && surjective && homs_xk.len() == homs_ck.len();

    let unit_natural = homs_xk
        .iter()
        .all(|f| match completion_on_morphism(f, &cx, &ck) {
            Ok(cf) => (0..x.len()).all(|p| cf.apply(cx.unit.apply(p)) == ck.unit.apply(f.apply(p))),
            Err(_) => false,
        });

    let counit_natural = match enumerate_functional_homs(k, k, limits) {
        Ok(endos) => endos
            .iter()
            .all(|g| match completion_on_morphism(g, &ck, &ck) {
                Ok(cg) => (0..ck.qset().len())
                    .all(|b| counit_k.apply(cg.apply(b)) == g.apply(counit_k.apply(b))),
                Err(_) => false,
            }),
        Err(_) => false,
    };

    Ok(AdjunctionReport {
        hom_count_dom: homs_xk.len(),
        hom_count_completed: homs_ck.len(),
        bijection,
        unit_natural,
        counit_natural,
        counit_well_defined,
        zigzag_left,
        zigzag_right,
    })
}

/// A compatible family of compatible families unions into a compatible
/// family that glues it; checked by enumeration over 𝔊(X).
pub fn check_union_gluing(x: &Arc<QSet>, limits: &Limits) -> Result<(), GluingError> {
    let gx = gluings_qset(x)?;
    if gx.qset.len() > limits.double_completion_cap.max(FAMILY_CARRIER_CAP) {
        return Err(GluingError::TooLarge(alloc::format!(
            "|𝔊X| = {} too large for the union check",
            gx.qset.len()
        )));
    }
    for meta in enumerate_compatible(&gx.qset)? {
        let mut union = 0u32;
        for i in mask_members(meta, gx.qset.len()) {
            union |= gx.families[i];
        }
        assert!(
            is_compatible(x, union),
            "the union of a compatible family of families must be compatible"
        );
        let union_idx = gx.index_of_mask(union).unwrap();
        let report = gluings_of(&gx.qset, meta);
        assert!(
            report.gluings.contains(&union_idx),
            "the union must glue the family of families"
        );
    }
    Ok(())
}

/// A family over X/δ is glued exactly when each of its sections is glued in
/// X, by the same element up to class.
pub fn check_section_lemma(x: &Arc<QSet>) -> Result<(), GluingError> {
    let quotient = delta_quotient(x);
    let qx = &quotient.qset;
    for mask in enumerate_compatible(qx)? {
        let blocks: Vec<&Vec<usize>> = mask_members(mask, qx.len())
            .into_iter()
            .map(|b| &quotient.partition.blocks[b])
            .collect();
        let quotient_glued = !gluings_of(qx, mask).gluings.is_empty();
        // walk every section of the family
        let mut section_glued = None;
        let mut idx = alloc::vec![0usize; blocks.len()];
        loop {
            let section: u32 = blocks
                .iter()
                .zip(idx.iter())
                .map(|(b, &i)| 1u32 << b[i])
                .fold(0, |m, b| m | b);
            let glued = !gluings_of(x, section).gluings.is_empty();
            match section_glued {
                None => section_glued = Some(glued),
                Some(prev) => assert_eq!(prev, glued, "all sections glue alike"),
            }
            let mut c = blocks.len();
            loop {
                if c == 0 {
                    break;
                }
                c -= 1;
                idx[c] += 1;
                if idx[c] < blocks[c].len() {
                    break;
                }
                idx[c] = 0;
            }
            if idx.iter().all(|&i| i == 0) {
                break;
            }
        }
        assert_eq!(
            quotient_glued,
            section_glued.unwrap_or(true),
            "quotient family glues iff its sections do"
        );
    }
    Ok(())
}
