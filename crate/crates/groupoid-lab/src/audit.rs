//! Almost-finiteness auditing: fibers of the twisted groupoid over a base
//! point, their orbit partition under the diagonal Γ-action, and the
//! boundary-deficiency quantity |C·F − F| / |F| computed both by direct
//! composition and through the per-class formula Σ|B·K_i − K_i|.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;

use crate::cantor::Word;
use crate::error::{Error, Result};
use crate::rational::{rat, Rational};
use crate::sft::{elementary_fiber, SftArrow};
use crate::twisted::{compose, twist_action, SupportedArrow, Truncation, UnitPoint};
use crate::words::{ball, translate_set, FiniteSubset, GroupElement, GroupSpec};

/// A finite set of arrows sharing one source point, containing the unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fiber {
    pub id: String,
    pub base: UnitPoint,
    pub arrows: BTreeSet<SupportedArrow>,
}

impl Fiber {
    pub fn new(
        id: impl Into<String>,
        base: UnitPoint,
        arrows: impl IntoIterator<Item = SupportedArrow>,
    ) -> Result<Self> {
        let arrows: BTreeSet<SupportedArrow> = arrows.into_iter().collect();
        let Some(first) = arrows.first() else {
            return Err(Error::invalid("fiber must be nonempty"));
        };
        let depth = first.depth();
        if !arrows.iter().any(|a| a.is_unit()) {
            return Err(Error::invalid("fiber must contain the unit arrow"));
        }
        for a in &arrows {
            if a.depth() != depth {
                return Err(Error::invalid("fiber arrows at mixed depths"));
            }
            if !a.source().consistent_with(&base) {
                return Err(Error::invalid(format!(
                    "arrow with twist {} has source inconsistent with the base point",
                    a.twist()
                )));
            }
        }
        Ok(Fiber {
            id: id.into(),
            base,
            arrows,
        })
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spec(&self) -> GroupSpec {
        self.arrows.first().expect("nonempty").twist().spec()
    }
}

/// The compact set C = unit-space × B: composing with it translates every
/// arrow by each element of B.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestSet(pub FiniteSubset);

impl TestSet {
    pub fn generators(spec: GroupSpec) -> Self {
        TestSet(spec.symmetric_generators().into_iter().collect())
    }
}

#[derive(Debug, Clone)]
pub struct OrbitClass {
    /// arrows of the class, in canonical order
    pub members: Vec<SupportedArrow>,
    /// left translators relative to the class representative (the member
    /// with shortlex-least twist); always contains e
    pub label: FiniteSubset,
}

/// Partitions a fiber under the relation (κ', γ') = γ₁·(κ, γ), i.e.
/// κ' = τ_{γ₁}(κ) and γ' = γ₁γ. The orbit key τ_{γ^{-1}}(κ) is a complete
/// invariant because left translation is free on the twist coordinate.
pub fn orbit_partition(f: &Fiber) -> Result<Vec<OrbitClass>> {
    let mut classes: BTreeMap<BTreeMap<GroupElement, SftArrow>, Vec<SupportedArrow>> =
        BTreeMap::new();
    for a in &f.arrows {
        let key = twist_action(&a.twist().invert(), a)?;
        classes
            .entry(key.support().clone())
            .or_default()
            .push(a.clone());
    }
    let mut out = Vec::new();
    for (_, members) in classes {
        let rep_twist = members
            .iter()
            .map(|m| m.twist().clone())
            .min()
            .expect("class nonempty");
        let label: FiniteSubset = members
            .iter()
            .map(|m| m.twist().multiply(&rep_twist.invert()))
            .collect::<Result<_>>()?;
        if label.len() != members.len() {
            return Err(Error::invalid(
                "orbit identification failed to be injective",
            ));
        }
        out.push(OrbitClass { members, label });
    }
    Ok(out)
}

/// |C·F − F| / |F| by brute-force composition through the twisted arrow
/// algebra, with C ranging over the purely twisted arrows (unit support,
/// twist in B).
pub fn deficiency_direct(b: &TestSet, f: &Fiber, trunc: &Truncation) -> Result<Rational> {
    let depth = f.arrows.first().expect("nonempty").depth();
    let mut translated: BTreeSet<SupportedArrow> = BTreeSet::new();
    for beta in &b.0 {
        let c = SupportedArrow::purely_twisted(beta.clone(), depth);
        for a in &f.arrows {
            translated.insert(compose(&c, a, trunc)?);
        }
    }
    let outside = translated.difference(&f.arrows).count();
    Ok(rat(outside as i64, f.len() as i64))
}

/// (Σ_i |B·K_i − K_i|) / (Σ_i |K_i|) over the orbit partition.
pub fn deficiency_formula(b: &TestSet, f: &Fiber) -> Result<Rational> {
    let classes = orbit_partition(f)?;
    let mut boundary = 0usize;
    let mut total = 0usize;
    for class in &classes {
        let bk = translate_set(&b.0, &class.label)?;
        boundary += bk.difference(&class.label).count();
        total += class.label.len();
    }
    debug_assert_eq!(total, f.len());
    Ok(rat(boundary as i64, total as i64))
}

#[derive(Debug, Clone)]
pub struct FiberRecord {
    pub id: String,
    pub size: usize,
    pub classes: usize,
    pub direct: Rational,
    pub formula: Rational,
}

#[derive(Debug, Clone)]
pub struct AfReport {
    pub records: Vec<FiberRecord>,
    pub min_deficiency: Option<Rational>,
    /// formula/direct mismatches, or fibers under the δ bound when one
    /// was supplied
    pub violations: Vec<String>,
}

impl AfReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn vacuous(&self) -> bool {
        self.records.is_empty()
    }
}

/// Audits a family of fibers: cross-checks the two deficiency routes
/// exactly and, when δ is supplied (a Følner lower bound for the acting
/// group), asserts every deficiency stays above it.
pub fn af_audit<I>(fibers: I, b: &TestSet, delta: Option<&Rational>, trunc: &Truncation) -> Result<AfReport>
where
    I: IntoIterator<Item = Fiber>,
{
    let mut records = Vec::new();
    let mut violations = Vec::new();
    let mut min: Option<Rational> = None;
    for fiber in fibers {
        let direct = deficiency_direct(b, &fiber, trunc)?;
        let formula = deficiency_formula(b, &fiber)?;
        if direct != formula {
            violations.push(format!(
                "fiber {}: direct {} != formula {}",
                fiber.id, direct, formula
            ));
        }
        if let Some(d) = delta {
            if &direct < d {
                violations.push(format!(
                    "fiber {}: deficiency {} below bound {}",
                    fiber.id, direct, d
                ));
            }
        }
        if min.as_ref().is_none_or(|m| &direct < m) {
            min = Some(direct.clone());
        }
        records.push(FiberRecord {
            id: fiber.id.clone(),
            size: fiber.len(),
            classes: orbit_partition(&fiber)?.len(),
            direct,
            formula,
        });
    }
    records.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(AfReport {
        records,
        min_deficiency: min,
        violations,
    })
}

/// Product of elementary fibers ℰₙ[k] at the given coordinates, twist e:
/// one arrow per choice of a tail-class move at each coordinate.
pub fn en_product_fiber(
    trunc: &Truncation,
    k: usize,
    indices: &[GroupElement],
    base: &UnitPoint,
) -> Result<Fiber> {
    let mut arrows: Vec<Vec<(GroupElement, SftArrow)>> = vec![Vec::new()];
    for t in indices {
        let x = base
            .get(t)
            .ok_or_else(|| Error::invalid(format!("base point unassigned at {t}")))?;
        let fiber_t = elementary_fiber(k, x)?;
        let mut extended = Vec::with_capacity(arrows.len() * fiber_t.len());
        for prefix in &arrows {
            for a in &fiber_t {
                let mut next = prefix.clone();
                next.push((t.clone(), a.clone()));
                extended.push(next);
            }
        }
        arrows = extended;
    }
    let identity = trunc.group.identity();
    Fiber::new(
        format!("en-product-k{k}-j{}", indices.len()),
        base.clone(),
        arrows
            .into_iter()
            .map(|entries| SupportedArrow::new(entries, identity.clone(), trunc.depth))
            .collect::<Result<Vec<_>>>()?,
    )
}

/// The ℤ shift-orbit fiber {(x̄, j) : j ∈ [0, m)} at a point left
/// unconstrained by the truncation window.
pub fn shift_orbit_fiber(m: i64, depth: usize) -> Result<Fiber> {
    if m < 1 {
        return Err(Error::invalid("orbit length must be >= 1"));
    }
    Fiber::new(
        format!("shift-orbit-m{m}"),
        UnitPoint::unconstrained(),
        (0..m).map(|j| {
            SupportedArrow::purely_twisted(
                GroupElement::Int(j),
                depth,
            )
        }),
    )
}

/// Seeded random fibers: unions of left-translated orbit segments whose
/// translator sets live in ball(1), so every orbit label is certified to
/// stay inside ball(2) with at most 2·|ball(1)| − ... elements; fibers
/// whose segments accidentally merge into larger labels are resampled.
pub fn random_fibers<R: Rng>(
    trunc: &Truncation,
    rng: &mut R,
    count: usize,
    max_label: usize,
) -> Result<Vec<Fiber>> {
    let gens = ball(trunc.group, 1);
    let words = Word::enumerate(trunc.alphabet, trunc.depth);
    let label_window: FiniteSubset = ball(trunc.group, 2).into_iter().collect();
    let mut fibers = Vec::with_capacity(count);
    let mut serial = 0usize;
    while fibers.len() < count {
        serial += 1;
        if serial > 100 * count + 100 {
            return Err(Error::invalid("random fiber generation failed to converge"));
        }
        let base = UnitPoint::new(ball(trunc.group, 3).into_iter().map(|t| {
            (t, words[rng.gen_range(0..words.len())].clone())
        }));
        let mut arrows: BTreeSet<SupportedArrow> = BTreeSet::new();
        // unit-orbit segment: purely twisted arrows, always including e
        let mut s0: FiniteSubset = FiniteSubset::new();
        s0.insert(trunc.group.identity());
        for g in &gens {
            if rng.gen_bool(0.4) {
                s0.insert(g.clone());
            }
        }
        for g in &s0 {
            arrows.insert(SupportedArrow::purely_twisted(g.clone(), trunc.depth));
        }
        // extra segments: translated copies of one supported arrow each
        for _ in 0..rng.gen_range(1..=2) {
            let gamma0 = gens[rng.gen_range(0..gens.len())].clone();
            let t = gens[rng.gen_range(0..gens.len())].clone();
            let src_index = gamma0.invert().multiply(&t)?;
            let x = base.get(&src_index).expect("base covers ball(3)").clone();
            let y = loop {
                let candidate = &words[rng.gen_range(0..words.len())];
                if *candidate != x {
                    break candidate.clone();
                }
            };
            let kappa0 = SupportedArrow::new(
                [(t.clone(), SftArrow::new(y, x)?)],
                gamma0,
                trunc.depth,
            )?;
            let mut translators: Vec<&GroupElement> = gens
                .iter()
                .filter(|_| rng.gen_bool(0.5))
                .collect();
            if translators.is_empty() {
                translators.push(&gens[0]);
            }
            for g1 in translators {
                let moved = twist_action(g1, &kappa0)?;
                let twisted = SupportedArrow::new(
                    moved.support().clone(),
                    g1.multiply(kappa0.twist())?,
                    trunc.depth,
                )?;
                arrows.insert(twisted);
            }
        }
        let fiber = Fiber::new(format!("random-{:03}", fibers.len()), base, arrows)?;
        // certify every label against the Følner family the δ bound was
        // derived from; merged segments can escape it, so resample
        let ok = orbit_partition(&fiber)?.iter().all(|class| {
            class.label.len() <= max_label && class.label.is_subset(&label_window)
        });
        if ok {
            fibers.push(fiber);
        }
    }
    Ok(fibers)
}
