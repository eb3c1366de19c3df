//! Invariant measures by exact linear algebra: constraint systems built
//! from bisection source/range pairs, rational Gaussian elimination with
//! infeasibility certificates, the conditional-measure induction step, the
//! pure-infiniteness obstruction, and the minimal covering bound.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::cantor::{ClopenSet, ProductCylinder, Word};
use crate::error::{Error, Result};
use crate::rational::{self, inv_pow, Rational};
use crate::sft::PrefixBisection;
use crate::words::{ball, GroupElement};

/// A cylinder measure at one fixed depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureVector {
    pub depth: usize,
    pub alphabet: u8,
    pub values: BTreeMap<Word, Rational>,
}

impl MeasureVector {
    pub fn new(depth: usize, alphabet: u8, values: BTreeMap<Word, Rational>) -> Result<Self> {
        if values.len() != (alphabet as usize).pow(depth as u32) {
            return Err(Error::invalid("measure vector must assign every word"));
        }
        let total: Rational = values.values().cloned().sum();
        if !total.is_one() {
            return Err(Error::invalid(format!(
                "measure vector sums to {}, not 1",
                rational::to_string(&total)
            )));
        }
        if values.values().any(|v| v < &Rational::zero()) {
            return Err(Error::invalid("measure vector has a negative entry"));
        }
        Ok(MeasureVector {
            depth,
            alphabet,
            values,
        })
    }

    pub fn uniform(depth: usize, alphabet: u8) -> Self {
        let mass = inv_pow(alphabet as u64, depth);
        MeasureVector {
            depth,
            alphabet,
            values: Word::enumerate(alphabet, depth)
                .into_iter()
                .map(|w| (w, mass.clone()))
                .collect(),
        }
    }

    /// Coarsens to a shorter depth by summing refinements; the result is
    /// the unique consistent restriction.
    pub fn coarsen(&self, depth: usize) -> Result<MeasureVector> {
        if depth > self.depth {
            return Err(Error::DepthInsufficient {
                have: self.depth,
                need: depth,
            });
        }
        let mut values: BTreeMap<Word, Rational> = Word::enumerate(self.alphabet, depth)
            .into_iter()
            .map(|w| (w, Rational::zero()))
            .collect();
        for (w, v) in &self.values {
            let prefix = Word::new(&w.symbols()[..depth], self.alphabet)?;
            *values.get_mut(&prefix).expect("prefix enumerated") += v;
        }
        MeasureVector::new(depth, self.alphabet, values)
    }

    pub fn mass_of(&self, set: &ClopenSet) -> Rational {
        self.values
            .iter()
            .filter(|(w, _)| set.contains_cylinder(w))
            .map(|(_, v)| v.clone())
            .sum()
    }
}

/// One linear equality Σ c_i x_i = rhs with a human-readable origin.
#[derive(Debug, Clone)]
pub struct LinearRow {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
    pub origin: String,
}

/// Outcome of exact elimination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<Rational>),
    Affine {
        dim: usize,
        particular: Vec<Rational>,
        basis: Vec<Vec<Rational>>,
    },
    /// Coefficients of a linear combination of the input rows that sums to
    /// the contradiction 0 = nonzero.
    Infeasible { combination: Vec<Rational> },
}

/// Exact Gaussian elimination over the rationals. Deterministic: pivots
/// are chosen as the first row with a nonzero entry in variable order.
pub fn solve_rows(nvars: usize, rows: &[LinearRow]) -> Result<Solution> {
    for row in rows {
        if row.coeffs.len() != nvars {
            return Err(Error::invalid("row width does not match variable count"));
        }
    }
    // augmented with provenance: combo[i] expresses the current row as a
    // combination of the original rows
    let mut work: Vec<(Vec<Rational>, Rational, Vec<Rational>)> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut combo = vec![Rational::zero(); rows.len()];
            combo[i] = Rational::one();
            (r.coeffs.clone(), r.rhs.clone(), combo)
        })
        .collect();

    let mut pivot_of_col: Vec<Option<usize>> = vec![None; nvars];
    let mut next_row = 0usize;
    for col in 0..nvars {
        let Some(pivot) = (next_row..work.len()).find(|&r| !work[r].0[col].is_zero()) else {
            continue;
        };
        work.swap(next_row, pivot);
        let inv = {
            let p = &work[next_row].0[col];
            Rational::one() / p.clone()
        };
        for c in work[next_row].0.iter_mut() {
            *c *= inv.clone();
        }
        work[next_row].1 *= inv.clone();
        for c in work[next_row].2.iter_mut() {
            *c *= inv.clone();
        }
        let pivot_row = work[next_row].clone();
        for (r, row) in work.iter_mut().enumerate() {
            if r == next_row || row.0[col].is_zero() {
                continue;
            }
            let factor = row.0[col].clone();
            for (a, b) in row.0.iter_mut().zip(&pivot_row.0) {
                *a -= factor.clone() * b;
            }
            row.1 -= factor.clone() * &pivot_row.1;
            for (a, b) in row.2.iter_mut().zip(&pivot_row.2) {
                *a -= factor.clone() * b;
            }
        }
        pivot_of_col[col] = Some(next_row);
        next_row += 1;
    }

    // contradiction rows
    for (coeffs, rhs, combo) in &work[next_row..] {
        debug_assert!(coeffs.iter().all(|c| c.is_zero()));
        if !rhs.is_zero() {
            return Ok(Solution::Infeasible {
                combination: combo.clone(),
            });
        }
    }

    let free: Vec<usize> = (0..nvars).filter(|c| pivot_of_col[*c].is_none()).collect();
    let mut particular = vec![Rational::zero(); nvars];
    for (col, pivot) in pivot_of_col.iter().enumerate() {
        if let Some(r) = pivot {
            particular[col] = work[*r].1.clone();
        }
    }
    if free.is_empty() {
        return Ok(Solution::Unique(particular));
    }
    let basis = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); nvars];
            v[f] = Rational::one();
            for (col, pivot) in pivot_of_col.iter().enumerate() {
                if let Some(r) = pivot {
                    v[col] = -work[*r].0[f].clone();
                }
            }
            v
        })
        .collect();
    Ok(Solution::Affine {
        dim: free.len(),
        particular,
        basis,
    })
}

/// Re-verifies an infeasibility certificate: the claimed combination of
/// the rows must cancel every coefficient while leaving a nonzero
/// right-hand side.
pub fn infeasibility_verifies(nvars: usize, rows: &[LinearRow], combination: &[Rational]) -> bool {
    if combination.len() != rows.len() {
        return false;
    }
    let mut coeffs = vec![Rational::zero(); nvars];
    let mut rhs = Rational::zero();
    for (c, row) in combination.iter().zip(rows) {
        for (a, b) in coeffs.iter_mut().zip(&row.coeffs) {
            *a += c.clone() * b;
        }
        rhs += c.clone() * &row.rhs;
    }
    coeffs.iter().all(|c| c.is_zero()) && !rhs.is_zero()
}

/// Constraint system over depth-k cylinder masses: normalization plus one
/// equality μ(s(σ)) = μ(r(σ)) per declared bisection.
#[derive(Debug, Clone)]
pub struct ConstraintSystem {
    alphabet: u8,
    depth: usize,
    words: Vec<Word>,
    rows: Vec<LinearRow>,
}

impl ConstraintSystem {
    pub fn new(alphabet: u8, depth: usize) -> Result<Self> {
        if alphabet < 2 || depth == 0 {
            return Err(Error::invalid("need alphabet >= 2 and depth >= 1"));
        }
        let words = Word::enumerate(alphabet, depth);
        let rows = vec![LinearRow {
            coeffs: vec![Rational::one(); words.len()],
            rhs: Rational::one(),
            origin: "normalization".to_string(),
        }];
        Ok(ConstraintSystem {
            alphabet,
            depth,
            words,
            rows,
        })
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn rows(&self) -> &[LinearRow] {
        &self.rows
    }

    /// μ(C_u) = μ(C_v) for σ_{u,v}, expanded over depth-k refinements.
    pub fn add_bisection(&mut self, sigma: &PrefixBisection) -> Result<()> {
        if sigma.from_prefix().len() > self.depth || sigma.to_prefix().len() > self.depth {
            return Err(Error::DepthInsufficient {
                have: self.depth,
                need: sigma.from_prefix().len().max(sigma.to_prefix().len()),
            });
        }
        let mut coeffs = vec![Rational::zero(); self.words.len()];
        for (i, w) in self.words.iter().enumerate() {
            if w.has_prefix(sigma.from_prefix()) {
                coeffs[i] += Rational::one();
            }
            if w.has_prefix(sigma.to_prefix()) {
                coeffs[i] -= Rational::one();
            }
        }
        self.rows.push(LinearRow {
            coeffs,
            rhs: Rational::zero(),
            origin: format!("sigma_{{{},{}}}", sigma.from_prefix(), sigma.to_prefix()),
        });
        Ok(())
    }

    /// Pins one cylinder mass; used by perturbation tests.
    pub fn pin_value(&mut self, w: &Word, value: Rational) -> Result<()> {
        let i = self
            .words
            .iter()
            .position(|x| x == w)
            .ok_or_else(|| Error::invalid("pinned word outside variable set"))?;
        let mut coeffs = vec![Rational::zero(); self.words.len()];
        coeffs[i] = Rational::one();
        self.rows.push(LinearRow {
            coeffs,
            rhs: value,
            origin: format!("pin {w}"),
        });
        Ok(())
    }

    pub fn solve(&self) -> Result<Solution> {
        solve_rows(self.words.len(), &self.rows)
    }

    pub fn solve_measure(&self) -> Result<MeasureSolution> {
        match self.solve()? {
            Solution::Unique(values) => Ok(MeasureSolution::Unique(MeasureVector::new(
                self.depth,
                self.alphabet,
                self.words.iter().cloned().zip(values).collect(),
            )?)),
            Solution::Affine {
                dim,
                particular,
                basis,
            } => Ok(MeasureSolution::Space {
                dim,
                particular,
                basis,
            }),
            Solution::Infeasible { combination } => {
                Ok(MeasureSolution::Infeasible { combination })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MeasureSolution {
    Unique(MeasureVector),
    Space {
        dim: usize,
        particular: Vec<Rational>,
        basis: Vec<Vec<Rational>>,
    },
    Infeasible { combination: Vec<Rational> },
}

/// Builds the full (symmetry-reduced) invariance system for the
/// tail-equivalence groupoid at one depth: consecutive-word chains at
/// every prefix length, which generate the same row space as all pairs.
pub fn en_constraint_system(alphabet: u8, depth: usize) -> Result<ConstraintSystem> {
    let mut sys = ConstraintSystem::new(alphabet, depth)?;
    for len in 1..=depth {
        let words = Word::enumerate(alphabet, len);
        for pair in words.windows(2) {
            sys.add_bisection(&PrefixBisection::new(pair[0].clone(), pair[1].clone())?)?;
        }
    }
    Ok(sys)
}

/// All σ_{u,v} with |u| = |v| = depth, unreduced; rank oracle for the
/// chain variant.
pub fn en_constraint_system_all_pairs(alphabet: u8, depth: usize) -> Result<ConstraintSystem> {
    let mut sys = ConstraintSystem::new(alphabet, depth)?;
    let words = Word::enumerate(alphabet, depth);
    for (i, u) in words.iter().enumerate() {
        for v in &words[i + 1..] {
            sys.add_bisection(&PrefixBisection::new(u.clone(), v.clone())?)?;
        }
    }
    Ok(sys)
}

pub fn unique_measure_solve(system: &ConstraintSystem) -> Result<MeasureSolution> {
    system.solve_measure()
}

/// A measure on product cells: one depth-d word per window coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellMeasure {
    pub window: Vec<GroupElement>,
    pub depth: usize,
    pub alphabet: u8,
    /// keyed by one word per window coordinate, in window order
    pub values: BTreeMap<Vec<Word>, Rational>,
}

impl CellMeasure {
    /// μ_T restricted to the window: every cell carries n^{-d·|W|}.
    pub fn product(window: Vec<GroupElement>, depth: usize, alphabet: u8) -> Self {
        let mass = inv_pow(alphabet as u64, depth * window.len());
        let values = enumerate_cells(alphabet, depth, window.len())
            .into_iter()
            .map(|cell| (cell, mass.clone()))
            .collect();
        CellMeasure {
            window,
            depth,
            alphabet,
            values,
        }
    }

    pub fn coordinate(&self, t: &GroupElement) -> Result<usize> {
        self.window
            .iter()
            .position(|x| x == t)
            .ok_or_else(|| Error::invalid(format!("coordinate {t} outside window")))
    }

    /// Mass of the set of cells matching the given prefix constraints.
    pub fn mass_where(&self, constraints: &[(usize, &Word)]) -> Rational {
        self.values
            .iter()
            .filter(|(cell, _)| constraints.iter().all(|(i, p)| cell[*i].has_prefix(p)))
            .map(|(_, v)| v.clone())
            .sum()
    }
}

fn enumerate_cells(alphabet: u8, depth: usize, coords: usize) -> Vec<Vec<Word>> {
    let words = Word::enumerate(alphabet, depth);
    let mut cells: Vec<Vec<Word>> = vec![Vec::new()];
    for _ in 0..coords {
        cells = cells
            .into_iter()
            .flat_map(|c| {
                words.iter().map(move |w| {
                    let mut next = c.clone();
                    next.push(w.clone());
                    next
                })
            })
            .collect();
    }
    cells
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CellSolution {
    Unique(CellMeasure),
    Space { dim: usize },
    Infeasible { combination: Vec<Rational> },
}

/// Solves for invariant measures on product cells over a window: variables
/// are cell masses; constraints come from every basis bisection whose
/// source indices stay inside the window, at full depth, for every twist
/// in ball(ρ_γ).
pub fn twisted_unique_measure_solve(
    alphabet: u8,
    depth: usize,
    window: &[GroupElement],
    twist_radius: u32,
) -> Result<CellSolution> {
    if window.is_empty() {
        return Err(Error::invalid("window must be nonempty"));
    }
    let spec = window[0].spec();
    let cells = enumerate_cells(alphabet, depth, window.len());
    let index: BTreeMap<&Vec<Word>, usize> =
        cells.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let words = Word::enumerate(alphabet, depth);

    let mut rows = vec![LinearRow {
        coeffs: vec![Rational::one(); cells.len()],
        rhs: Rational::one(),
        origin: "normalization".to_string(),
    }];

    // constrained coordinate subsets T with γ^{-1}T inside the window
    for gamma in ball(spec, twist_radius) {
        let gi = gamma.invert();
        let admissible: Vec<(usize, usize)> = window
            .iter()
            .enumerate()
            .filter_map(|(ti, t)| {
                let src = gi.multiply(t).ok()?;
                let si = window.iter().position(|x| *x == src)?;
                Some((ti, si))
            })
            .collect();
        // all nonempty subsets of admissible coordinates: pairwise
        // marginal equality alone leaves parity-type perturbations free
        let max_t = admissible.len();
        let mut subsets: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
        for &pair in &admissible {
            let mut extended: Vec<Vec<(usize, usize)>> = subsets
                .iter()
                .filter(|s| s.len() < max_t)
                .map(|s| {
                    let mut next = s.clone();
                    next.push(pair);
                    next
                })
                .collect();
            subsets.append(&mut extended);
        }
        for subset in subsets.iter().filter(|s| !s.is_empty()) {
            // every assignment of full-depth (u, v) per constrained coord
            let mut choices: Vec<Vec<(&Word, &Word)>> = vec![Vec::new()];
            for _ in subset {
                let mut extended = Vec::with_capacity(choices.len() * words.len() * words.len());
                for c in &choices {
                    for u in &words {
                        for v in &words {
                            let mut next = c.clone();
                            next.push((u, v));
                            extended.push(next);
                        }
                    }
                }
                choices = extended;
            }
            for choice in &choices {
                let mut coeffs = vec![Rational::zero(); cells.len()];
                for (ci, cell) in cells.iter().enumerate() {
                    let in_source = subset
                        .iter()
                        .zip(choice)
                        .all(|(&(_, si), &(u, _))| &cell[si] == u);
                    let in_range = subset
                        .iter()
                        .zip(choice)
                        .all(|(&(ti, _), &(_, v))| &cell[ti] == v);
                    if in_source {
                        coeffs[ci] += Rational::one();
                    }
                    if in_range {
                        coeffs[ci] -= Rational::one();
                    }
                }
                if coeffs.iter().any(|c| !c.is_zero()) {
                    rows.push(LinearRow {
                        coeffs,
                        rhs: Rational::zero(),
                        origin: format!("twist {gamma}, {} constraints", subset.len()),
                    });
                }
            }
        }
    }

    match solve_rows(cells.len(), &rows)? {
        Solution::Unique(values) => {
            let mut map = BTreeMap::new();
            for (cell, value) in cells.iter().zip(values) {
                map.insert(cell.clone(), value);
            }
            let _ = index;
            Ok(CellSolution::Unique(CellMeasure {
                window: window.to_vec(),
                depth,
                alphabet,
                values: map,
            }))
        }
        Solution::Affine { dim, .. } => Ok(CellSolution::Space { dim }),
        Solution::Infeasible { combination } => Ok(CellSolution::Infeasible { combination }),
    }
}

/// Result of the conditional-measure induction step.
#[derive(Debug, Clone)]
pub struct ConditionalReport {
    /// mass of the conditioning event
    pub conditioning_mass: Rational,
    pub conditional: MeasureVector,
    pub violations: Vec<String>,
}

impl ConditionalReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Conditions ν on prefix constraints at fixed coordinates, reads off the
/// induced measure at one further coordinate, and verifies it is invariant
/// under every depth-d bisection there and equal to the uniform base
/// measure.
pub fn conditional_invariance_check(
    nu: &CellMeasure,
    fixed: &[(GroupElement, Word)],
    coordinate: &GroupElement,
) -> Result<ConditionalReport> {
    let fixed_idx: Vec<(usize, &Word)> = fixed
        .iter()
        .map(|(t, w)| Ok((nu.coordinate(t)?, w)))
        .collect::<Result<Vec<_>>>()?;
    let target = nu.coordinate(coordinate)?;
    if fixed_idx.iter().any(|(i, _)| *i == target) {
        return Err(Error::invalid("target coordinate is among the fixed ones"));
    }
    let a = nu.mass_where(&fixed_idx);
    if a.is_zero() {
        return Err(Error::ConditioningOnNull(format!(
            "conditioning event at {} coordinates has mass 0",
            fixed.len()
        )));
    }

    let mut values: BTreeMap<Word, Rational> = Word::enumerate(nu.alphabet, nu.depth)
        .into_iter()
        .map(|w| (w, Rational::zero()))
        .collect();
    for (cell, v) in &nu.values {
        if fixed_idx.iter().all(|(i, p)| cell[*i].has_prefix(p)) {
            *values.get_mut(&cell[target]).expect("enumerated") += v;
        }
    }
    for v in values.values_mut() {
        *v /= a.clone();
    }
    let conditional = MeasureVector::new(nu.depth, nu.alphabet, values)?;

    let mut violations = Vec::new();
    let uniform = inv_pow(nu.alphabet as u64, nu.depth);
    for (w, v) in &conditional.values {
        if v != &uniform {
            violations.push(format!(
                "mu_n({w}) = {} != {}",
                rational::to_string(v),
                rational::to_string(&uniform)
            ));
        }
    }
    // invariance under every bisection at the target coordinate
    for len in 1..=nu.depth {
        let prefixes = Word::enumerate(nu.alphabet, len);
        for (i, u) in prefixes.iter().enumerate() {
            for v in &prefixes[i + 1..] {
                let mu_u: Rational = conditional
                    .values
                    .iter()
                    .filter(|(w, _)| w.has_prefix(u))
                    .map(|(_, m)| m.clone())
                    .sum();
                let mu_v: Rational = conditional
                    .values
                    .iter()
                    .filter(|(w, _)| w.has_prefix(v))
                    .map(|(_, m)| m.clone())
                    .sum();
                if mu_u != mu_v {
                    violations.push(format!(
                        "sigma_{{{u},{v}}}: {} != {}",
                        rational::to_string(&mu_u),
                        rational::to_string(&mu_v)
                    ));
                }
            }
        }
    }

    Ok(ConditionalReport {
        conditioning_mass: a,
        conditional,
        violations,
    })
}

/// A set with a canonical exact mass under the relevant unique invariant
/// measure.
#[derive(Debug, Clone)]
pub enum MeasuredSet {
    Clopen(ClopenSet),
    Product(ProductCylinder),
    /// e.g. a union of cosets at an odometer level, carrying its uniform
    /// mass directly
    Weighted { description: String, mass: Rational },
}

impl MeasuredSet {
    pub fn mass(&self) -> Rational {
        match self {
            MeasuredSet::Clopen(a) => a.measure(),
            MeasuredSet::Product(p) => p.measure(),
            MeasuredSet::Weighted { mass, .. } => mass.clone(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            MeasuredSet::Clopen(a) => format!("clopen[{}]", a.prefix_strings().join(",")),
            MeasuredSet::Product(p) => format!(
                "product[{}]",
                p.assignment()
                    .iter()
                    .map(|(t, w)| format!("{t}->{w}"))
                    .collect::<Vec<_>>()
                    .join(",")
            ),
            MeasuredSet::Weighted { description, .. } => description.clone(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PiObstruction {
    pub mass_u: Rational,
    pub mass_v: Rational,
    /// true: no measure-respecting bisection σ can have s(σ) = U and
    /// r(σ) ⊆ V, because it would force mass(U) = mass(r(σ)) ≤ mass(V)
    pub obstructed: bool,
}

/// The pure-infiniteness obstruction from an invariant measure: U cannot
/// embed into V through a bisection when U outweighs V.
pub fn pi_obstruction(u: &MeasuredSet, v: &MeasuredSet) -> Result<PiObstruction> {
    let mass_v = v.mass();
    if mass_v.is_zero() {
        return Err(Error::invalid("V must be nonempty"));
    }
    let mass_u = u.mass();
    Ok(PiObstruction {
        obstructed: mass_u > mass_v,
        mass_u,
        mass_v,
    })
}

/// Verifies that the cover's sources exhaust the unit space and its ranges
/// land in the target, then returns the measure lower bound 1/|cover|.
pub fn minimal_covering_bound(
    cover: &[PrefixBisection],
    target: &ClopenSet,
) -> Result<Rational> {
    if cover.is_empty() {
        return Err(Error::InvalidCover("empty cover".to_string()));
    }
    let alphabet = target.alphabet();
    let mut sources = ClopenSet::empty(alphabet);
    for sigma in cover {
        sources = sources.union(&ClopenSet::new([sigma.from_prefix().clone()], alphabet)?)?;
        let range = ClopenSet::new([sigma.to_prefix().clone()], alphabet)?;
        if !range.is_subset(target)? {
            return Err(Error::InvalidCover(format!(
                "range C_{} escapes the target",
                sigma.to_prefix()
            )));
        }
    }
    if !sources.is_full() {
        return Err(Error::InvalidCover(
            "sources do not exhaust the unit space".to_string(),
        ));
    }
    Ok(rational::rat(1, cover.len() as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use crate::words::GroupSpec;
    use proptest::prelude::*;

    const F2: GroupSpec = GroupSpec::Free(2);

    fn w(digits: &str) -> Word {
        Word::parse(digits, 2).unwrap()
    }

    fn g(token: &str) -> GroupElement {
        GroupElement::parse(F2, token).unwrap()
    }

    #[test]
    fn depth_one_pair_forces_uniform() {
        let mut sys = ConstraintSystem::new(2, 1).unwrap();
        sys.add_bisection(&PrefixBisection::new(w("0"), w("1")).unwrap())
            .unwrap();
        match sys.solve_measure().unwrap() {
            MeasureSolution::Unique(m) => {
                assert_eq!(m, MeasureVector::uniform(1, 2));
            }
            other => panic!("expected unique, got {other:?}"),
        }
    }

    #[test]
    fn chain_and_all_pairs_agree() {
        for (n, k) in [(2u8, 3usize), (3, 2)] {
            let chain = en_constraint_system(n, k).unwrap().solve_measure().unwrap();
            let full = en_constraint_system_all_pairs(n, k)
                .unwrap()
                .solve_measure()
                .unwrap();
            assert_eq!(chain, full);
            assert_eq!(
                chain,
                MeasureSolution::Unique(MeasureVector::uniform(k, n))
            );
        }
    }

    #[test]
    fn no_constraints_leaves_affine_space() {
        let sys = ConstraintSystem::new(2, 1).unwrap();
        match sys.solve_measure().unwrap() {
            MeasureSolution::Space { dim, .. } => assert_eq!(dim, 1),
            other => panic!("expected affine space, got {other:?}"),
        }
    }

    #[test]
    fn perturbed_pin_is_infeasible_with_verifiable_certificate() {
        let mut sys = en_constraint_system(2, 3).unwrap();
        sys.pin_value(&w("000"), rat(1, 4)).unwrap();
        match sys.solve_measure().unwrap() {
            MeasureSolution::Infeasible { combination } => {
                assert!(infeasibility_verifies(
                    sys.words().len(),
                    sys.rows(),
                    &combination
                ));
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn solutions_satisfy_all_rows() {
        let sys = en_constraint_system(3, 3).unwrap();
        let Solution::Unique(values) = sys.solve().unwrap() else {
            panic!("expected unique");
        };
        for row in sys.rows() {
            let lhs: Rational = row
                .coeffs
                .iter()
                .zip(&values)
                .map(|(c, v)| c.clone() * v)
                .sum();
            assert_eq!(lhs, row.rhs);
        }
    }

    #[test]
    fn coarsening_is_consistent() {
        let m = MeasureVector::uniform(3, 2);
        assert_eq!(m.coarsen(1).unwrap(), MeasureVector::uniform(1, 2));
        assert_eq!(m.coarsen(2).unwrap(), MeasureVector::uniform(2, 2));
    }

    #[test]
    fn twisted_solve_single_coordinate_reduces_to_en() {
        let window = vec![g("e")];
        match twisted_unique_measure_solve(2, 2, &window, 0).unwrap() {
            CellSolution::Unique(m) => {
                for v in m.values.values() {
                    assert_eq!(v, &rat(1, 4));
                }
            }
            other => panic!("expected unique, got {other:?}"),
        }
    }

    #[test]
    fn twisted_solve_two_coordinates_yields_product_measure() {
        let window = vec![g("e"), g("a")];
        match twisted_unique_measure_solve(2, 2, &window, 1).unwrap() {
            CellSolution::Unique(m) => {
                assert_eq!(m, CellMeasure::product(window, 2, 2));
            }
            other => panic!("expected unique, got {other:?}"),
        }
    }

    #[test]
    fn twisted_solve_three_coordinates_depth_one() {
        let window = vec![g("e"), g("a"), g("b")];
        match twisted_unique_measure_solve(2, 1, &window, 1).unwrap() {
            CellSolution::Unique(m) => {
                assert_eq!(m.values.len(), 8);
                for v in m.values.values() {
                    assert_eq!(v, &rat(1, 8));
                }
            }
            other => panic!("expected unique, got {other:?}"),
        }
    }

    #[test]
    fn conditional_of_product_is_uniform() {
        let window = vec![g("e"), g("a"), g("b")];
        let nu = CellMeasure::product(window, 2, 2);
        // two fixed constraints, marginal read at b
        let report = conditional_invariance_check(
            &nu,
            &[(g("e"), w("0")), (g("a"), w("11"))],
            &g("b"),
        )
        .unwrap();
        assert!(report.passed());
        assert_eq!(report.conditioning_mass, rat(1, 8));
        assert_eq!(report.conditional, MeasureVector::uniform(2, 2));

        // no fixed constraints: plain marginal
        let report = conditional_invariance_check(&nu, &[], &g("e")).unwrap();
        assert!(report.passed());
        assert_eq!(report.conditioning_mass, int(1));
    }

    #[test]
    fn conditional_detects_perturbation() {
        let window = vec![g("e"), g("a")];
        let mut nu = CellMeasure::product(window, 1, 2);
        // move mass between two cells sharing the conditioning event
        let from = vec![w("0"), w("0")];
        let to = vec![w("0"), w("1")];
        *nu.values.get_mut(&from).unwrap() += rat(1, 8);
        *nu.values.get_mut(&to).unwrap() -= rat(1, 8);
        let report = conditional_invariance_check(&nu, &[(g("e"), w("0"))], &g("a")).unwrap();
        assert!(!report.passed());
    }

    #[test]
    fn conditioning_on_null_event_errors() {
        let window = vec![g("e"), g("a")];
        let mut nu = CellMeasure::product(window, 1, 2);
        // zero out the event {cell(e) = 0}
        for (cell, v) in nu.values.iter_mut() {
            if cell[0] == w("0") {
                *v = Rational::zero();
            } else {
                *v = rat(1, 2);
            }
        }
        assert!(matches!(
            conditional_invariance_check(&nu, &[(g("e"), w("0"))], &g("a")),
            Err(Error::ConditioningOnNull(_))
        ));
    }

    #[test]
    fn pi_obstruction_examples() {
        let full = MeasuredSet::Clopen(ClopenSet::full(2));
        let half = MeasuredSet::Clopen(ClopenSet::new([w("0")], 2).unwrap());
        let r = pi_obstruction(&full, &half).unwrap();
        assert!(r.obstructed);
        assert_eq!(r.mass_u, int(1));
        assert_eq!(r.mass_v, rat(1, 2));
        assert!(!pi_obstruction(&half, &full).unwrap().obstructed);

        let cell = MeasuredSet::Product(ProductCylinder::new([
            (g("e"), w("0")),
            (g("a"), w("1")),
        ]));
        let unit = MeasuredSet::Product(ProductCylinder::unconstrained());
        assert!(pi_obstruction(&unit, &cell).unwrap().obstructed);
    }

    proptest! {
        // monotonicity: an obstruction for (U, V) persists for smaller V'
        #[test]
        fn pi_obstruction_monotone(prefixes in proptest::collection::btree_set("[01]{1,3}", 1..4)) {
            let v = ClopenSet::new(
                prefixes.iter().map(|p| Word::parse(p, 2).unwrap()),
                2,
            ).unwrap();
            prop_assume!(!v.is_empty() && !v.is_full());
            let u = MeasuredSet::Clopen(ClopenSet::full(2));
            let first = pi_obstruction(&u, &MeasuredSet::Clopen(v.clone())).unwrap();
            prop_assert!(first.obstructed);
            // shrink V by dropping to a single cylinder
            let smaller = ClopenSet::new([v.cylinders().next().unwrap()], 2).unwrap();
            let second = pi_obstruction(&u, &MeasuredSet::Clopen(smaller)).unwrap();
            prop_assert!(second.obstructed);
        }
    }

    #[test]
    fn covering_bound_examples() {
        let target = ClopenSet::new([w("0")], 2).unwrap();
        let cover = vec![
            PrefixBisection::new(w("0"), w("0")).unwrap(),
            PrefixBisection::new(w("1"), w("0")).unwrap(),
        ];
        assert_eq!(minimal_covering_bound(&cover, &target).unwrap(), rat(1, 2));
        assert_eq!(target.measure(), rat(1, 2));

        let full = ClopenSet::full(2);
        let identity = vec![PrefixBisection::new(Word::empty(2), Word::empty(2)).unwrap()];
        assert_eq!(minimal_covering_bound(&identity, &full).unwrap(), int(1));

        // depth-2 cover of C_00
        let target = ClopenSet::new([w("00")], 2).unwrap();
        let cover: Vec<PrefixBisection> = Word::enumerate(2, 2)
            .into_iter()
            .map(|u| PrefixBisection::new(u, w("00")).unwrap())
            .collect();
        let bound = minimal_covering_bound(&cover, &target).unwrap();
        assert_eq!(bound, rat(1, 4));
        assert_eq!(target.measure(), rat(1, 4));
    }

    #[test]
    fn covering_bound_rejects_bad_covers() {
        let target = ClopenSet::new([w("0")], 2).unwrap();
        // sources miss C_1
        let partial = vec![PrefixBisection::new(w("0"), w("0")).unwrap()];
        assert!(matches!(
            minimal_covering_bound(&partial, &target),
            Err(Error::InvalidCover(_))
        ));
        // range escapes the target
        let escaping = vec![
            PrefixBisection::new(w("0"), w("0")).unwrap(),
            PrefixBisection::new(w("1"), w("1")).unwrap(),
        ];
        assert!(matches!(
            minimal_covering_bound(&escaping, &target),
            Err(Error::InvalidCover(_))
        ));
    }

    #[test]
    fn covering_bound_never_exceeds_true_measure() {
        // for every clopen target C_u and the canonical n^{|u|}-element
        // cover, bound = measure exactly; adding redundant elements only
        // lowers the bound
        for u in Word::enumerate(2, 2) {
            let target = ClopenSet::new([u.clone()], 2).unwrap();
            let mut cover: Vec<PrefixBisection> = Word::enumerate(2, 2)
                .into_iter()
                .map(|s| PrefixBisection::new(s, u.clone()).unwrap())
                .collect();
            let bound = minimal_covering_bound(&cover, &target).unwrap();
            assert!(bound <= target.measure());
            cover.push(PrefixBisection::new(w("01"), u.clone()).unwrap());
            let padded = minimal_covering_bound(&cover, &target).unwrap();
            assert!(padded < bound);
        }
    }

    proptest! {
        // solver correctness on random small systems: any reported
        // solution satisfies every row; infeasibility certificates verify
        #[test]
        fn solver_outputs_verify(
            rows in proptest::collection::vec(
                (proptest::collection::vec(-3i64..4, 4), -2i64..3),
                1..8,
            )
        ) {
            let rows: Vec<LinearRow> = rows
                .into_iter()
                .map(|(cs, r)| LinearRow {
                    coeffs: cs.into_iter().map(int).collect(),
                    rhs: int(r),
                    origin: "random".to_string(),
                })
                .collect();
            match solve_rows(4, &rows).unwrap() {
                Solution::Unique(values) => {
                    for row in &rows {
                        let lhs: Rational = row.coeffs.iter().zip(&values)
                            .map(|(c, v)| c.clone() * v).sum();
                        prop_assert_eq!(lhs, row.rhs.clone());
                    }
                }
                Solution::Affine { particular, basis, dim } => {
                    prop_assert_eq!(basis.len(), dim);
                    for row in &rows {
                        let lhs: Rational = row.coeffs.iter().zip(&particular)
                            .map(|(c, v)| c.clone() * v).sum();
                        prop_assert_eq!(lhs, row.rhs.clone());
                        for b in &basis {
                            let dir: Rational = row.coeffs.iter().zip(b)
                                .map(|(c, v)| c.clone() * v).sum();
                            prop_assert_eq!(dir, Rational::zero());
                        }
                    }
                }
                Solution::Infeasible { combination } => {
                    prop_assert!(infeasibility_verifies(4, &rows, &combination));
                }
            }
        }
    }
}
