//! The finite-support power of the shift groupoid over an index set T = Γ
//! and its semidirect product by Γ, at finite truncation: arrow algebra,
//! basis open sets with their source/range images, the product-measure
//! invariance audit, and the minimality/effectiveness witness
//! constructors.

use std::collections::BTreeMap;

use crate::cantor::{ClopenSet, ProductCylinder, Word};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::sft::{PrefixBisection, SftArrow};
use crate::words::{ball, GroupElement, GroupSpec};

/// The truncation triple threaded through every operation: word depth,
/// window radius for index enumeration, twist radius, plus the hard cap on
/// support growth under composition. Operations fail loudly rather than
/// silently extend any of these bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Truncation {
    pub alphabet: u8,
    pub depth: usize,
    pub window_radius: u32,
    pub twist_radius: u32,
    pub window_cap: u32,
    pub group: GroupSpec,
}

impl Truncation {
    pub fn new(
        alphabet: u8,
        depth: usize,
        window_radius: u32,
        twist_radius: u32,
        group: GroupSpec,
    ) -> Result<Self> {
        if alphabet < 2 {
            return Err(Error::invalid("alphabet size must be >= 2"));
        }
        if depth == 0 {
            return Err(Error::invalid("depth must be >= 1"));
        }
        Ok(Truncation {
            alphabet,
            depth,
            window_radius,
            twist_radius,
            window_cap: 3.max(window_radius),
            group,
        })
    }

    pub fn window(&self) -> Vec<GroupElement> {
        ball(self.group, self.window_radius)
    }

    pub fn twists(&self) -> Vec<GroupElement> {
        ball(self.group, self.twist_radius)
    }
}

/// Truncation of a point of the product unit space to a finite window:
/// coordinates outside the assignment are unconstrained.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct UnitPoint {
    assignment: BTreeMap<GroupElement, Word>,
}

impl UnitPoint {
    pub fn new(assignment: impl IntoIterator<Item = (GroupElement, Word)>) -> Self {
        UnitPoint {
            assignment: assignment.into_iter().collect(),
        }
    }

    pub fn unconstrained() -> Self {
        UnitPoint::default()
    }

    pub fn get(&self, t: &GroupElement) -> Option<&Word> {
        self.assignment.get(t)
    }

    pub fn assignment(&self) -> &BTreeMap<GroupElement, Word> {
        &self.assignment
    }

    pub fn insert(&mut self, t: GroupElement, w: Word) {
        self.assignment.insert(t, w);
    }

    /// Two truncated points are consistent when no coordinate is assigned
    /// different words by both.
    pub fn consistent_with(&self, other: &UnitPoint) -> bool {
        self.assignment
            .iter()
            .all(|(t, w)| other.get(t).is_none_or(|v| v == w))
    }

    pub fn in_product_cylinder(&self, p: &ProductCylinder) -> bool {
        p.assignment()
            .iter()
            .all(|(t, prefix)| self.get(t).is_some_and(|w| w.has_prefix(prefix)))
    }
}

/// A finitely supported map from Γ to shift-groupoid arrows together with
/// a twist γ in Γ. Unit-valued coordinates are never stored, so equality
/// of arrows is structural equality.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SupportedArrow {
    support: BTreeMap<GroupElement, SftArrow>,
    twist: GroupElement,
    depth: usize,
}

impl SupportedArrow {
    pub fn new(
        support: impl IntoIterator<Item = (GroupElement, SftArrow)>,
        twist: GroupElement,
        depth: usize,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (t, a) in support {
            if a.depth() != depth {
                return Err(Error::invalid(format!(
                    "support entry at {t} has depth {}, expected {depth}",
                    a.depth()
                )));
            }
            if t.spec() != twist.spec() {
                return Err(Error::invalid("support index and twist from different groups"));
            }
            if !a.is_unit() {
                map.insert(t, a);
            }
        }
        Ok(SupportedArrow {
            support: map,
            twist,
            depth,
        })
    }

    /// The unit-supported arrow (all coordinates units) with the given twist.
    pub fn purely_twisted(twist: GroupElement, depth: usize) -> Self {
        SupportedArrow {
            support: BTreeMap::new(),
            twist,
            depth,
        }
    }

    pub fn unit(spec: GroupSpec, depth: usize) -> Self {
        SupportedArrow::purely_twisted(spec.identity(), depth)
    }

    pub fn support(&self) -> &BTreeMap<GroupElement, SftArrow> {
        &self.support
    }

    pub fn twist(&self) -> &GroupElement {
        &self.twist
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn is_unit(&self) -> bool {
        self.support.is_empty() && self.twist.is_identity()
    }

    /// r(f, γ): constrains coordinate t to the target word of f(t).
    pub fn range(&self) -> UnitPoint {
        UnitPoint::new(
            self.support
                .iter()
                .map(|(t, a)| (t.clone(), a.target_word().clone())),
        )
    }

    /// s(f, γ) = γ^{-1}·s(f): constrains γ^{-1}t to the source word of f(t).
    pub fn source(&self) -> UnitPoint {
        let gi = self.twist.invert();
        UnitPoint::new(self.support.iter().map(|(t, a)| {
            (
                gi.multiply(t).expect("same spec"),
                a.source_word().clone(),
            )
        }))
    }

    /// (f, γ)^{-1} = (τ(γ^{-1})(f^{-1}), γ^{-1}).
    pub fn inverse(&self) -> SupportedArrow {
        let gi = self.twist.invert();
        SupportedArrow {
            support: self
                .support
                .iter()
                .map(|(t, a)| (gi.multiply(t).expect("same spec"), a.inverse()))
                .collect(),
            twist: gi,
            depth: self.depth,
        }
    }
}

/// τ_γ(f): support key t moves to γ·t; the twist field is untouched.
pub fn twist_action(gamma: &GroupElement, f: &SupportedArrow) -> Result<SupportedArrow> {
    if gamma.spec() != f.twist.spec() {
        return Err(Error::invalid("twist action from a different group"));
    }
    Ok(SupportedArrow {
        support: f
            .support
            .iter()
            .map(|(t, a)| (gamma.multiply(t).expect("same spec"), a.clone()))
            .collect(),
        twist: f.twist.clone(),
        depth: f.depth,
    })
}

/// compose((g, γ), (g', γ')) = (g · τ(γ)(g'), γγ'), coordinatewise.
/// Windows are aligned by taking the union and filling units; the result's
/// support must stay inside the configured window cap.
pub fn compose(p: &SupportedArrow, q: &SupportedArrow, trunc: &Truncation) -> Result<SupportedArrow> {
    if p.depth != q.depth {
        return Err(Error::invalid("composing arrows of different depths"));
    }
    let shifted_q = twist_action(&p.twist, q)?;
    let mut support: BTreeMap<GroupElement, SftArrow> = BTreeMap::new();
    let keys: std::collections::BTreeSet<&GroupElement> =
        p.support.keys().chain(shifted_q.support.keys()).collect();
    for t in keys {
        let entry = match (p.support.get(t), shifted_q.support.get(t)) {
            (Some(a), Some(b)) => a.compose(b).map_err(|_| {
                Error::NotComposable(format!(
                    "coordinate {t}: source {} != range {}",
                    a.source_word(),
                    b.target_word()
                ))
            })?,
            (Some(a), None) => a.clone(),
            (None, Some(b)) => b.clone(),
            (None, None) => unreachable!(),
        };
        if !entry.is_unit() {
            if t.len() > trunc.window_cap as usize {
                return Err(Error::WindowOverflow(format!(
                    "support key {t} outside ball({})",
                    trunc.window_cap
                )));
            }
            support.insert(t.clone(), entry);
        }
    }
    Ok(SupportedArrow {
        support,
        twist: p.twist.multiply(&q.twist)?,
        depth: p.depth,
    })
}

/// Evaluates source and range of `p` as total points over `window`,
/// reading unit coordinates off the ambient point `units`.
pub fn evaluate_at(
    p: &SupportedArrow,
    units: &UnitPoint,
    window: &[GroupElement],
) -> Result<(UnitPoint, UnitPoint)> {
    let mut source = UnitPoint::unconstrained();
    let mut range = UnitPoint::unconstrained();
    for u in window {
        let gu = p.twist.multiply(u)?;
        let src = match p.support.get(&gu) {
            Some(a) => a.source_word().clone(),
            None => units
                .get(&gu)
                .ok_or_else(|| Error::invalid(format!("ambient point unassigned at {gu}")))?
                .clone(),
        };
        let rng = match p.support.get(u) {
            Some(a) => a.target_word().clone(),
            None => units
                .get(u)
                .ok_or_else(|| Error::invalid(format!("ambient point unassigned at {u}")))?
                .clone(),
        };
        source.insert(u.clone(), src);
        range.insert(u.clone(), rng);
    }
    Ok((source, range))
}

/// Does (f, γ) lie in the isotropy bundle over the point described by
/// `units`, as far as `window` can see?
pub fn is_isotropy_at(
    p: &SupportedArrow,
    units: &UnitPoint,
    window: &[GroupElement],
) -> Result<bool> {
    let (s, r) = evaluate_at(p, units, window)?;
    Ok(s == r)
}

/// One coordinate constraint of a basis open set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BasisConstraint {
    Bisection(PrefixBisection),
    Clopen(ClopenSet),
}

/// A basis open set 𝒪(A_1,...,A_k; t_1,...,t_k) × {γ}. With all
/// constraints drawn from bisections or clopen unit sets this is a compact
/// open bisection of the twisted groupoid; coordinates outside the
/// constraint map carry units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisSet {
    constraints: BTreeMap<GroupElement, BasisConstraint>,
    twist: GroupElement,
}

impl BasisSet {
    pub fn new(
        constraints: impl IntoIterator<Item = (GroupElement, BasisConstraint)>,
        twist: GroupElement,
    ) -> Self {
        BasisSet {
            constraints: constraints.into_iter().collect(),
            twist,
        }
    }

    pub fn constraints(&self) -> &BTreeMap<GroupElement, BasisConstraint> {
        &self.constraints
    }

    pub fn twist(&self) -> &GroupElement {
        &self.twist
    }

    /// Membership of an arrow whose unit coordinates are read from `units`.
    pub fn contains(&self, p: &SupportedArrow, units: &UnitPoint) -> Result<bool> {
        if p.twist != self.twist {
            return Ok(false);
        }
        // all support must sit under some constraint: coordinates outside
        // the constrained set carry units
        if !p.support.keys().all(|t| self.constraints.contains_key(t)) {
            return Ok(false);
        }
        for (t, c) in &self.constraints {
            match (c, p.support.get(t)) {
                (BasisConstraint::Bisection(sigma), Some(a)) => {
                    if !sigma.contains(a) {
                        return Ok(false);
                    }
                }
                (BasisConstraint::Bisection(sigma), None) => {
                    // a unit lies in sigma_{u,v} only when u = v and the
                    // coordinate value sits in the cylinder
                    if !sigma.is_identity() {
                        return Ok(false);
                    }
                    let w = units
                        .get(t)
                        .ok_or_else(|| Error::invalid(format!("ambient point unassigned at {t}")))?;
                    if !w.has_prefix(sigma.from_prefix()) {
                        return Ok(false);
                    }
                }
                (BasisConstraint::Clopen(u), Some(_)) => {
                    // clopen constraints live in the unit space
                    let _ = u;
                    return Ok(false);
                }
                (BasisConstraint::Clopen(u), None) => {
                    let w = units
                        .get(t)
                        .ok_or_else(|| Error::invalid(format!("ambient point unassigned at {t}")))?;
                    if !u.contains_cylinder(w) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndpointMap {
    Source,
    Range,
}

/// Image of a basis bisection under the source or range map:
/// s_Γ(𝒪(σ_1,...,σ_k; t_1,...,t_k) × {γ}) constrains the word u_i at index
/// γ^{-1}·t_i, and r_Γ constrains v_i at t_i.
pub fn basis_source_range(s: &BasisSet, which: EndpointMap) -> Result<ProductCylinder> {
    let gi = s.twist.invert();
    let mut assignment = Vec::new();
    for (t, c) in &s.constraints {
        let sigma = match c {
            BasisConstraint::Bisection(sigma) => sigma,
            BasisConstraint::Clopen(_) => {
                return Err(Error::invalid(
                    "source/range image needs bisection constraints",
                ))
            }
        };
        match which {
            EndpointMap::Source => {
                assignment.push((gi.multiply(t)?, sigma.from_prefix().clone()));
            }
            EndpointMap::Range => {
                assignment.push((t.clone(), sigma.to_prefix().clone()));
            }
        }
    }
    Ok(ProductCylinder::new(assignment))
}

/// Outcome of the product-measure invariance enumeration.
#[derive(Debug, Clone)]
pub struct InvarianceReport {
    /// Orbit representatives actually evaluated.
    pub representatives_checked: u64,
    /// Size of the full enumeration the representatives cover. Two basis
    /// sets are in the same orbit when they differ by relabeling, at each
    /// constrained coordinate, the source-side and range-side words of
    /// equal length; the relabeling changes neither image measure.
    pub total_covered: u128,
    pub violations: Vec<String>,
}

impl InvarianceReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Enumerates basis bisections within the truncation bounds (word lengths
/// up to d, indices in ball(ρ), twists in ball(ρ_γ), at most
/// `max_constraints` constrained coordinates, up to word-relabeling
/// symmetry) and verifies that source and range images carry equal product
/// measure, exactly.
pub fn measure_invariance_check(trunc: &Truncation, max_constraints: usize) -> Result<InvarianceReport> {
    let window = trunc.window();
    let twists = trunc.twists();
    let n = trunc.alphabet;

    // representative bisection for each prefix length
    let rep_for_len = |len: usize| -> Result<PrefixBisection> {
        let u = Word::new(vec![0u8; len], n)?;
        let v = Word::new(vec![n - 1; len], n)?;
        PrefixBisection::new(u, v)
    };

    let mut checked = 0u64;
    let mut violations = Vec::new();

    // index subsets of size <= max_constraints with a length profile each
    let mut stack: Vec<(usize, Vec<(usize, usize)>)> = vec![(0, Vec::new())];
    let mut profiles: Vec<Vec<(usize, usize)>> = Vec::new();
    while let Some((start, chosen)) = stack.pop() {
        profiles.push(chosen.clone());
        if chosen.len() == max_constraints {
            continue;
        }
        for i in start..window.len() {
            for len in 1..=trunc.depth {
                let mut next = chosen.clone();
                next.push((i, len));
                stack.push((i + 1, next));
            }
        }
    }

    for gamma in &twists {
        for profile in &profiles {
            let constraints = profile
                .iter()
                .map(|&(i, len)| {
                    Ok((
                        window[i].clone(),
                        BasisConstraint::Bisection(rep_for_len(len)?),
                    ))
                })
                .collect::<Result<Vec<_>>>()?;
            let basis = BasisSet::new(constraints, gamma.clone());
            let src = basis_source_range(&basis, EndpointMap::Source)?;
            let rng = basis_source_range(&basis, EndpointMap::Range)?;
            checked += 1;
            if src.measure() != rng.measure() {
                violations.push(format!(
                    "gamma={gamma}, profile={profile:?}: source {} != range {}",
                    src.measure(),
                    rng.measure()
                ));
            }
        }
    }

    // full enumeration size covered by the representatives: each
    // coordinate independently picks any sigma_{u,v} with |u| = |v| <= d
    let per_coord: u128 = (1..=trunc.depth as u32)
        .map(|l| (n as u128).pow(2 * l))
        .sum();
    let mut total: u128 = 0;
    let mut binom: u128 = 1; // C(|window|, j)
    for j in 0..=max_constraints {
        if j > 0 {
            binom = binom * (window.len() as u128 - j as u128 + 1) / j as u128;
        }
        total += binom * per_coord.pow(j as u32);
    }
    total *= twists.len() as u128;

    Ok(InvarianceReport {
        representatives_checked: checked,
        total_covered: total,
        violations,
    })
}

/// Builds the arrow that carries the truncated point x into the target
/// product cylinder with the requested twist: each constrained coordinate
/// t gets the prefix swap from x's word at γ^{-1}t to the target prefix.
pub fn minimality_witness(
    x: &UnitPoint,
    target: &ProductCylinder,
    gamma: &GroupElement,
    trunc: &Truncation,
) -> Result<SupportedArrow> {
    let gi = gamma.invert();
    let mut support = Vec::new();
    for (t, prefix) in target.assignment() {
        if prefix.len() > trunc.depth {
            return Err(Error::DepthInsufficient {
                have: trunc.depth,
                need: prefix.len(),
            });
        }
        let src_index = gi.multiply(t)?;
        let src = match x.get(&src_index) {
            Some(w) => {
                if w.len() != trunc.depth {
                    return Err(Error::DepthInsufficient {
                        have: w.len(),
                        need: trunc.depth,
                    });
                }
                w.clone()
            }
            // extendable window: an unassigned source coordinate may take
            // any value; pick the target prefix padded with zeros so the
            // coordinate becomes a unit
            None => prefix.concat(&vec![0u8; trunc.depth - prefix.len()])?,
        };
        let tgt = prefix.concat(&src.symbols()[prefix.len()..])?;
        support.push((t.clone(), SftArrow::new(tgt, src)?));
    }
    SupportedArrow::new(support, gamma.clone(), trunc.depth)
}

/// Independent re-evaluation of a minimality witness: its source must be
/// consistent with x and its range must land in the target.
pub fn minimality_witness_verifies(
    witness: &SupportedArrow,
    x: &UnitPoint,
    target: &ProductCylinder,
) -> bool {
    if !witness.source().consistent_with(x) {
        return false;
    }
    let range = witness.range();
    let gi = witness.twist().invert();
    target.assignment().iter().all(|(t, prefix)| {
        match range.get(t) {
            Some(w) => w.has_prefix(prefix),
            // coordinate carried by a unit arrow that was dropped from the
            // support: the image reads x at the translated index
            None => gi
                .multiply(t)
                .ok()
                .and_then(|s| x.get(&s))
                .is_none_or(|w| w.has_prefix(prefix)),
        }
    })
}

/// Perturbs an arrow with nontrivial twist inside its basis neighborhood
/// so that source and range visibly disagree. Picks the shortlex-smallest
/// coordinate t_0 with γ·t_0 ≠ t_0 and the lexicographically smallest
/// alternative word, so the output is deterministic. Returns the perturbed
/// arrow together with the ambient point carrying any perturbed unit
/// coordinate.
pub fn effectiveness_witness(
    p: &SupportedArrow,
    units: &UnitPoint,
    neighborhood: &BasisSet,
    trunc: &Truncation,
) -> Result<(SupportedArrow, UnitPoint, GroupElement)> {
    let gamma = p.twist().clone();
    if gamma.is_identity() {
        return Err(Error::invalid(
            "effectiveness witness needs a nontrivial twist",
        ));
    }
    if !neighborhood.contains(p, units)? {
        return Err(Error::invalid("neighborhood does not contain the arrow"));
    }
    // left multiplication is free, so the smallest index already moves
    let t0 = trunc.group.identity();
    debug_assert_ne!(gamma.multiply(&t0)?, t0);

    // the value source and range must be separated from: s(p~)(t0) is read
    // at coordinate γ·t0, which the perturbation leaves untouched
    let gt0 = gamma.multiply(&t0)?;
    let s_value = match p.support().get(&gt0) {
        Some(a) => a.source_word().clone(),
        None => units
            .get(&gt0)
            .ok_or_else(|| Error::invalid(format!("ambient point unassigned at {gt0}")))?
            .clone(),
    };

    let mut support: BTreeMap<GroupElement, SftArrow> = p.support.clone();
    let mut new_units = units.clone();
    match neighborhood.constraints().get(&t0) {
        Some(BasisConstraint::Bisection(sigma)) => {
            // smallest arrow of sigma at this depth whose range differs
            let tail_len = trunc
                .depth
                .checked_sub(sigma.from_prefix().len())
                .ok_or(Error::DepthInsufficient {
                    have: trunc.depth,
                    need: sigma.from_prefix().len(),
                })?;
            let candidate = Word::enumerate(trunc.alphabet, tail_len)
                .into_iter()
                .map(|tail| sigma.from_prefix().concat(tail.symbols()))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .map(|x| sigma.apply(&x))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .find(|a| *a.target_word() != s_value)
                .ok_or(Error::DepthInsufficient {
                    have: trunc.depth,
                    need: sigma.to_prefix().len() + 1,
                })?;
            if candidate.is_unit() {
                support.remove(&t0);
                new_units.insert(t0.clone(), candidate.target_word().clone());
            } else {
                support.insert(t0.clone(), candidate);
            }
        }
        Some(BasisConstraint::Clopen(_)) | None => {
            // the coordinate must stay a unit; move it to the smallest
            // depth-d word in the constraint that differs from s_value
            let u = match neighborhood.constraints().get(&t0) {
                Some(BasisConstraint::Clopen(c)) => c.clone(),
                _ => ClopenSet::full(trunc.alphabet),
            };
            let candidate = Word::enumerate(trunc.alphabet, trunc.depth)
                .into_iter()
                .find(|w| u.contains_cylinder(w) && *w != s_value)
                .ok_or(Error::DepthInsufficient {
                    have: trunc.depth,
                    need: trunc.depth + 1,
                })?;
            support.remove(&t0);
            new_units.insert(t0.clone(), candidate);
        }
    }
    let perturbed = SupportedArrow {
        support,
        twist: gamma,
        depth: p.depth,
    };
    Ok((perturbed, new_units, t0))
}

/// Measure of the truncated diagonal: points whose coordinates at t and t'
/// share their depth-d prefix have mass n^{-d}.
pub fn diagonal_measure(
    t: &GroupElement,
    t_prime: &GroupElement,
    depth: usize,
    alphabet: u8,
) -> Result<Rational> {
    if t == t_prime {
        return Err(Error::invalid("diagonal requires two distinct indices"));
    }
    if depth == 0 {
        return Err(Error::invalid("depth must be >= 1"));
    }
    Ok(crate::rational::inv_pow(alphabet as u64, depth))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{one, rat};

    const F2: GroupSpec = GroupSpec::Free(2);

    fn g(token: &str) -> GroupElement {
        GroupElement::parse(F2, token).unwrap()
    }

    fn w(digits: &str) -> Word {
        Word::parse(digits, 2).unwrap()
    }

    fn arrow(y: &str, x: &str) -> SftArrow {
        SftArrow::new(w(y), w(x)).unwrap()
    }

    fn trunc(depth: usize) -> Truncation {
        Truncation::new(2, depth, 2, 2, F2).unwrap()
    }

    fn supported(entries: &[(&str, SftArrow)], twist: &str, depth: usize) -> SupportedArrow {
        SupportedArrow::new(
            entries.iter().map(|(t, a)| (g(t), a.clone())),
            g(twist),
            depth,
        )
        .unwrap()
    }

    #[test]
    fn identity_twist_action_fixes() {
        let f = supported(&[("e", arrow("10", "00"))], "a", 2);
        assert_eq!(twist_action(&g("e"), &f).unwrap(), f);
    }

    #[test]
    fn twist_action_moves_support() {
        let f = supported(&[("e", arrow("10", "00"))], "e", 2);
        let moved = twist_action(&g("a"), &f).unwrap();
        assert!(moved.support().contains_key(&g("a")));
        assert!(!moved.support().contains_key(&g("e")));
    }

    #[test]
    fn twist_action_is_group_action() {
        let f = supported(&[("e", arrow("10", "00")), ("b", arrow("01", "11"))], "a", 2);
        for (g1, g2) in [("a", "b"), ("ab", "B"), ("A", "ba")] {
            let lhs = twist_action(&g(g1).multiply(&g(g2)).unwrap(), &f).unwrap();
            let rhs = twist_action(&g(g1), &twist_action(&g(g2), &f).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn compose_with_inverse_is_unit_at_range() {
        let p = supported(&[("e", arrow("10", "00"))], "a", 2);
        let c = compose(&p, &p.inverse(), &trunc(2)).unwrap();
        assert!(c.support().is_empty());
        assert!(c.twist().is_identity());
    }

    #[test]
    fn purely_twisted_compose_multiplies_twists() {
        let p = SupportedArrow::purely_twisted(g("a"), 2);
        let q = SupportedArrow::purely_twisted(g("b"), 2);
        let c = compose(&p, &q, &trunc(2)).unwrap();
        assert_eq!(c.twist(), &g("ab"));
    }

    #[test]
    fn compose_aligns_windows_coordinatewise() {
        // coordinatewise oracle: support of (g·τ(γ)g') at t composes
        // g(t) with g'(γ^{-1} t)
        let p = supported(&[("a", arrow("110", "010"))], "a", 3);
        let q = supported(&[("e", arrow("010", "000")), ("b", arrow("001", "101"))], "b", 3);
        let c = compose(&p, &q, &trunc(3)).unwrap();
        // q's support at e moves to a, composing with p's entry there
        assert_eq!(c.support().get(&g("a")), Some(&arrow("110", "000")));
        // q's support at b moves to ab, surviving untouched
        assert_eq!(c.support().get(&g("ab")), Some(&arrow("001", "101")));
        assert_eq!(c.twist(), &g("ab"));
    }

    #[test]
    fn compose_rejects_mismatched_words() {
        let p = supported(&[("a", arrow("110", "010"))], "a", 3);
        let q = supported(&[("e", arrow("011", "000"))], "b", 3);
        // q's entry lands at coordinate a with range 011 != source 010
        assert!(matches!(
            compose(&p, &q, &trunc(3)),
            Err(Error::NotComposable(_))
        ));
    }

    #[test]
    fn window_cap_overflow_detected() {
        let far = supported(&[("e", arrow("10", "00"))], "e", 2);
        let shift = SupportedArrow::purely_twisted(g("abab"), 2);
        // composing moves the support key to abab, length 4 > cap 3
        assert!(matches!(
            compose(&shift, &far, &trunc(2)),
            Err(Error::WindowOverflow(_))
        ));
    }

    #[test]
    fn constant_point_twists_are_isotropy() {
        // (x̄, γ) lies in the isotropy bundle for every γ
        let window = ball(F2, 1);
        let units = UnitPoint::new(ball(F2, 3).into_iter().map(|t| (t, w("01"))));
        for gamma in ball(F2, 2) {
            let p = SupportedArrow::purely_twisted(gamma, 2);
            assert!(is_isotropy_at(&p, &units, &window).unwrap());
        }
    }

    #[test]
    fn nonconstant_point_breaks_isotropy() {
        let window = ball(F2, 1);
        let mut units = UnitPoint::new(ball(F2, 3).into_iter().map(|t| (t, w("01"))));
        units.insert(g("a"), w("10"));
        let p = SupportedArrow::purely_twisted(g("a"), 2);
        assert!(!is_isotropy_at(&p, &units, &window).unwrap());
    }

    #[test]
    fn basis_source_range_examples() {
        // γ = e, single identity constraint: source = range
        let sigma_id = PrefixBisection::new(w("0"), w("0")).unwrap();
        let s = BasisSet::new(
            [(g("e"), BasisConstraint::Bisection(sigma_id))],
            g("e"),
        );
        assert_eq!(
            basis_source_range(&s, EndpointMap::Source).unwrap(),
            basis_source_range(&s, EndpointMap::Range).unwrap()
        );

        // γ = a, constraint σ_{0,1} at e: source at a^{-1}, range at e
        let sigma = PrefixBisection::new(w("0"), w("1")).unwrap();
        let s = BasisSet::new([(g("e"), BasisConstraint::Bisection(sigma))], g("a"));
        let src = basis_source_range(&s, EndpointMap::Source).unwrap();
        let rng = basis_source_range(&s, EndpointMap::Range).unwrap();
        assert_eq!(src, ProductCylinder::new([(g("A"), w("0"))]));
        assert_eq!(rng, ProductCylinder::new([(g("e"), w("1"))]));
        assert_eq!(src.measure(), rng.measure());
    }

    #[test]
    fn basis_image_matches_pointwise_oracle() {
        // enumerate every depth-1 point over a two-index window and check
        // the image formula coordinate by coordinate
        let sigma1 = PrefixBisection::new(w("0"), w("1")).unwrap();
        let sigma2 = PrefixBisection::new(w("1"), w("0")).unwrap();
        let basis = BasisSet::new(
            [
                (g("e"), BasisConstraint::Bisection(sigma1.clone())),
                (g("a"), BasisConstraint::Bisection(sigma2.clone())),
            ],
            g("ab"),
        );
        let src = basis_source_range(&basis, EndpointMap::Source).unwrap();
        let rng = basis_source_range(&basis, EndpointMap::Range).unwrap();
        // every arrow in the basis: choice of point in each source cylinder
        for x1 in ["0"] {
            for x2 in ["1"] {
                let f = SupportedArrow::new(
                    [
                        (g("e"), sigma1.apply(&w(x1)).unwrap()),
                        (g("a"), sigma2.apply(&w(x2)).unwrap()),
                    ],
                    g("ab"),
                    1,
                )
                .unwrap();
                assert!(f.source().in_product_cylinder(&src));
                assert!(f.range().in_product_cylinder(&rng));
            }
        }
    }

    #[test]
    fn invariance_check_trivial_and_small() {
        let t = Truncation::new(2, 1, 1, 1, F2).unwrap();
        let report = measure_invariance_check(&t, 0).unwrap();
        assert!(report.passed());
        assert_eq!(report.representatives_checked, 5); // one per twist

        let report = measure_invariance_check(&t, 1).unwrap();
        assert!(report.passed());
        // total: |ball(1)| * (1 + |ball(1)| * n^2) = 5 * (1 + 5*4)
        assert_eq!(report.total_covered, 5 * 21);
    }

    #[test]
    fn minimality_witness_examples() {
        let t = trunc(3);
        // x = {e -> 000}, target {e -> 1}, γ = e
        let x = UnitPoint::new([(g("e"), w("000"))]);
        let target = ProductCylinder::new([(g("e"), w("1"))]);
        let witness = minimality_witness(&x, &target, &g("e"), &t).unwrap();
        assert_eq!(
            witness.support().get(&g("e")),
            Some(&arrow("100", "000"))
        );
        assert!(minimality_witness_verifies(&witness, &x, &target));

        // target already contains the point: unit-supported arrow
        let target = ProductCylinder::new([(g("e"), w("0"))]);
        let witness = minimality_witness(&x, &target, &g("e"), &t).unwrap();
        assert!(witness.support().is_empty());
        assert!(minimality_witness_verifies(&witness, &x, &target));

        // twisted: target at index a, γ = a, source read at e
        let target = ProductCylinder::new([(g("a"), w("11"))]);
        let witness = minimality_witness(&x, &target, &g("a"), &t).unwrap();
        assert!(minimality_witness_verifies(&witness, &x, &target));
        assert_eq!(
            witness.support().get(&g("a")),
            Some(&arrow("110", "000"))
        );
    }

    #[test]
    fn effectiveness_witness_breaks_constant_isotropy() {
        let t = trunc(2);
        let window = ball(F2, 1);
        let units = UnitPoint::new(
            ball(F2, 3)
                .into_iter()
                .map(|tt| (tt, w("00"))),
        );
        let p = SupportedArrow::purely_twisted(g("a"), 2);
        let neighborhood = BasisSet::new([], g("a"));
        assert!(is_isotropy_at(&p, &units, &window).unwrap());
        let (perturbed, new_units, t0) =
            effectiveness_witness(&p, &units, &neighborhood, &t).unwrap();
        assert_eq!(t0, g("e"));
        assert!(!is_isotropy_at(&perturbed, &new_units, &window).unwrap());
        let (s, r) = evaluate_at(&perturbed, &new_units, &window).unwrap();
        assert_ne!(s, r);
    }

    #[test]
    fn effectiveness_witness_respects_bisection_constraint() {
        let t = trunc(2);
        let sigma = PrefixBisection::new(w("0"), w("1")).unwrap();
        let p = SupportedArrow::new([(g("e"), arrow("10", "00"))], g("b"), 2).unwrap();
        let units = UnitPoint::new(ball(F2, 3).into_iter().map(|tt| (tt, w("10"))));
        let neighborhood = BasisSet::new(
            [(g("e"), BasisConstraint::Bisection(sigma))],
            g("b"),
        );
        assert!(neighborhood.contains(&p, &units).unwrap());
        let (perturbed, new_units, _) =
            effectiveness_witness(&p, &units, &neighborhood, &t).unwrap();
        assert!(neighborhood.contains(&perturbed, &new_units).unwrap());
        let window = ball(F2, 1);
        let (s, r) = evaluate_at(&perturbed, &new_units, &window).unwrap();
        assert_ne!(s, r);
    }

    #[test]
    fn effectiveness_witness_rejects_identity_twist() {
        let t = trunc(2);
        let p = SupportedArrow::unit(F2, 2);
        let units = UnitPoint::new(ball(F2, 3).into_iter().map(|tt| (tt, w("00"))));
        let neighborhood = BasisSet::new([], g("e"));
        assert!(effectiveness_witness(&p, &units, &neighborhood, &t).is_err());
    }

    #[test]
    fn diagonal_measure_values() {
        let t1 = g("e");
        let t2 = g("a");
        assert_eq!(diagonal_measure(&t1, &t2, 1, 2).unwrap(), rat(1, 2));
        assert_eq!(diagonal_measure(&t1, &t2, 3, 2).unwrap(), rat(1, 8));
        assert!(diagonal_measure(&t1, &t1, 3, 2).is_err());
    }

    #[test]
    fn diagonal_measure_matches_counting_oracle() {
        // count pairs of depth-d words sharing their prefix
        for d in 1..=6usize {
            let words = Word::enumerate(2, d);
            let agreeing = words.len(); // exactly the diagonal pairs
            let total = words.len() * words.len();
            let oracle = rat(agreeing as i64, total as i64);
            assert_eq!(
                diagonal_measure(&g("e"), &g("a"), d, 2).unwrap(),
                oracle
            );
        }
    }

    #[test]
    fn unit_point_product_membership() {
        let x = UnitPoint::new([(g("e"), w("010"))]);
        assert!(x.in_product_cylinder(&ProductCylinder::new([(g("e"), w("01"))])));
        assert!(!x.in_product_cylinder(&ProductCylinder::new([(g("e"), w("1"))])));
        assert!(ProductCylinder::unconstrained().measure() == one());
    }

    // Exhaustive groupoid axioms over a restricted window: all arrows with
    // support in two fixed coordinates, depth 1, twists in ball(1).
    #[test]
    fn twisted_groupoid_axioms_small_scale() {
        for spec in [F2, GroupSpec::Integers] {
            let tr = Truncation::new(2, 1, 2, 1, spec).unwrap();
            let keys: Vec<GroupElement> = ball(spec, 1).into_iter().take(2).collect();
            let words = Word::enumerate(2, 1);
            let mut coord_choices: Vec<Option<SftArrow>> = vec![None];
            for y in &words {
                for x in &words {
                    let a = SftArrow::new(y.clone(), x.clone()).unwrap();
                    if !a.is_unit() {
                        coord_choices.push(Some(a));
                    }
                }
            }
            let mut arrows = Vec::new();
            for twist in ball(spec, 1) {
                for c0 in &coord_choices {
                    for c1 in &coord_choices {
                        let mut entries = Vec::new();
                        if let Some(a) = c0 {
                            entries.push((keys[0].clone(), a.clone()));
                        }
                        if let Some(a) = c1 {
                            entries.push((keys[1].clone(), a.clone()));
                        }
                        arrows.push(SupportedArrow::new(entries, twist.clone(), 1).unwrap());
                    }
                }
            }
            // unit and inverse laws for every arrow
            for p in &arrows {
                let inv = p.inverse();
                assert_eq!(inv.inverse(), *p);
                let right = compose(p, &inv, &tr).unwrap();
                assert!(right.twist().is_identity());
                // p p^{-1} p = p
                assert_eq!(compose(&right, p, &tr).unwrap(), *p);
            }
            // associativity over composable triples: join on the middle
            // arrow to keep the search linear in composable pairs
            let composable: Vec<(usize, usize)> = (0..arrows.len())
                .flat_map(|i| (0..arrows.len()).map(move |j| (i, j)))
                .filter(|(i, j)| compose(&arrows[*i], &arrows[*j], &tr).is_ok())
                .collect();
            let mut by_left: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for (i, j) in &composable {
                by_left.entry(*i).or_default().push(*j);
            }
            for (i, j) in &composable {
                if let Some(ks) = by_left.get(j) {
                    for k in ks {
                        let ab = compose(&arrows[*i], &arrows[*j], &tr).unwrap();
                        let bc = compose(&arrows[*j], &arrows[*k], &tr).unwrap();
                        // pairwise composability does not force the triple
                        // product to exist at finite truncation (an unseen
                        // unit coordinate can be constrained incompatibly
                        // from both sides), but existence and value must
                        // not depend on the bracketing
                        let lhs = compose(&ab, &arrows[*k], &tr);
                        let rhs = compose(&arrows[*i], &bc, &tr);
                        match (lhs, rhs) {
                            (Ok(l), Ok(r)) => assert_eq!(l, r),
                            (Err(_), Err(_)) => {}
                            (l, r) => panic!("bracket-dependent definedness: {l:?} vs {r:?}"),
                        }
                    }
                }
            }
        }
    }
}
