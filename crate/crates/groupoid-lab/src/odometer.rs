//! Odometers of residually finite groups at finite truncation: decreasing
//! chains of finite quotients given by generator permutation tables
//! (regular Cayley actions), the levelwise left-translation action, kernel
//! stabilizers, and exact uniform-measure invariance checks.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{GroupElement, GroupSpec};

pub const MAX_LEVELS: usize = 5;
pub const MAX_ORDER: usize = 120;

/// One finite quotient: its order and, per positive generator of Γ, the
/// left-translation permutation of {0, …, order−1} with 0 the identity
/// coset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelSpec {
    pub order: usize,
    pub gen_images: Vec<Vec<usize>>,
}

/// A validated decreasing chain of finite-index normal subgroups,
/// presented through their quotients and connecting surjections
/// (connecting[i] maps level i+1 onto level i).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientChain {
    spec: GroupSpec,
    levels: Vec<LevelSpec>,
    connecting: Vec<Vec<usize>>,
}

fn positive_generator_count(spec: GroupSpec) -> usize {
    match spec {
        GroupSpec::Free(r) => r as usize,
        GroupSpec::Integers => 1,
    }
}

fn is_permutation(table: &[usize], order: usize) -> bool {
    if table.len() != order {
        return false;
    }
    let mut seen = vec![false; order];
    for &v in table {
        if v >= order || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

fn invert_table(table: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; table.len()];
    for (i, &v) in table.iter().enumerate() {
        inv[v] = i;
    }
    inv
}

fn compose_tables(outer: &[usize], inner: &[usize]) -> Vec<usize> {
    inner.iter().map(|&x| outer[x]).collect()
}

/// Size of the permutation group generated by the tables, by closure.
fn generated_order(tables: &[Vec<usize>], order: usize) -> usize {
    let identity: Vec<usize> = (0..order).collect();
    let mut gens: Vec<Vec<usize>> = tables.to_vec();
    gens.extend(tables.iter().map(|t| invert_table(t)));
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    seen.insert(identity.clone());
    let mut queue = VecDeque::from([identity]);
    while let Some(p) = queue.pop_front() {
        for g in &gens {
            let q = compose_tables(g, &p);
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    seen.len()
}

impl QuotientChain {
    pub fn build(
        spec: GroupSpec,
        levels: Vec<LevelSpec>,
        connecting: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::ChainConstruction("no levels".to_string()));
        }
        if levels.len() > MAX_LEVELS {
            return Err(Error::ChainConstruction(format!(
                "level count {} exceeds cap {MAX_LEVELS}",
                levels.len()
            )));
        }
        if connecting.len() + 1 != levels.len() {
            return Err(Error::ChainConstruction(
                "need exactly one connecting map between consecutive levels".to_string(),
            ));
        }
        let gens = positive_generator_count(spec);
        for (i, level) in levels.iter().enumerate() {
            if level.order == 0 || level.order > MAX_ORDER {
                return Err(Error::ChainConstruction(format!(
                    "level {i} order {} outside 1..={MAX_ORDER}",
                    level.order
                )));
            }
            if level.gen_images.len() != gens {
                return Err(Error::ChainConstruction(format!(
                    "level {i} supplies {} generator images, group has {gens}",
                    level.gen_images.len()
                )));
            }
            for (j, table) in level.gen_images.iter().enumerate() {
                if !is_permutation(table, level.order) {
                    return Err(Error::ChainConstruction(format!(
                        "level {i} generator {j}: not a permutation of 0..{}",
                        level.order
                    )));
                }
            }
            // regularity: the generated translation group must have the
            // order of the quotient (kernel normality is then automatic,
            // the subgroup being a homomorphism kernel)
            let generated = generated_order(&level.gen_images, level.order);
            if generated != level.order {
                return Err(Error::ChainConstruction(format!(
                    "level {i}: generated group has order {generated}, expected {}",
                    level.order
                )));
            }
            if i > 0 && level.order <= levels[i - 1].order {
                return Err(Error::ChainConstruction(format!(
                    "indices must strictly increase: level {i} order {} after {}",
                    level.order,
                    levels[i - 1].order
                )));
            }
        }
        for (i, pi) in connecting.iter().enumerate() {
            let (lower, upper) = (&levels[i], &levels[i + 1]);
            if pi.len() != upper.order {
                return Err(Error::ChainConstruction(format!(
                    "connecting map {i} has wrong domain size {}",
                    pi.len()
                )));
            }
            if pi.iter().any(|&v| v >= lower.order) {
                return Err(Error::ChainConstruction(format!(
                    "connecting map {i} escapes codomain 0..{}",
                    lower.order
                )));
            }
            if pi[0] != 0 {
                return Err(Error::ChainConstruction(format!(
                    "connecting map {i} does not fix the identity coset"
                )));
            }
            let image: BTreeSet<usize> = pi.iter().copied().collect();
            if image.len() != lower.order {
                return Err(Error::ChainConstruction(format!(
                    "connecting map {i} is not surjective"
                )));
            }
            // equivariance pins the map as the induced quotient
            // homomorphism, which is exactly kernel containment
            for g in 0..gens {
                for x in 0..upper.order {
                    if pi[upper.gen_images[g][x]] != lower.gen_images[g][pi[x]] {
                        return Err(Error::ChainConstruction(format!(
                            "connecting map {i} not equivariant: generator {g} at coset {x}"
                        )));
                    }
                }
            }
        }
        Ok(QuotientChain {
            spec,
            levels,
            connecting,
        })
    }

    pub fn spec(&self) -> GroupSpec {
        self.spec
    }

    pub fn levels(&self) -> &[LevelSpec] {
        &self.levels
    }

    pub fn connecting(&self) -> &[Vec<usize>] {
        &self.connecting
    }

    /// Left-translation permutation of γ at one level.
    pub fn level_permutation(&self, level: usize, gamma: &GroupElement) -> Result<Vec<usize>> {
        let spec = self.spec;
        if gamma.spec() != spec {
            return Err(Error::invalid("group element from a different group"));
        }
        let lvl = self
            .levels
            .get(level)
            .ok_or_else(|| Error::invalid(format!("level {level} out of range")))?;
        let identity: Vec<usize> = (0..lvl.order).collect();
        match gamma {
            GroupElement::Int(j) => {
                let table = &lvl.gen_images[0];
                let step = if *j >= 0 {
                    table.clone()
                } else {
                    invert_table(table)
                };
                let mut acc = identity;
                for _ in 0..j.unsigned_abs() {
                    acc = compose_tables(&step, &acc);
                }
                Ok(acc)
            }
            GroupElement::Free { letters, .. } => {
                // γ = l_1 l_2 … l_m acts by the composite of the letter
                // translations, outermost letter first
                let mut acc = identity;
                for &l in letters.iter().rev() {
                    let idx = (l.unsigned_abs() as usize) - 1;
                    let table = &lvl.gen_images[idx];
                    let step = if l > 0 {
                        table.clone()
                    } else {
                        invert_table(table)
                    };
                    acc = compose_tables(&step, &acc);
                }
                Ok(acc)
            }
        }
    }

    /// Is γ in the level's kernel Γ_i (acts as the identity)?
    pub fn in_kernel(&self, level: usize, gamma: &GroupElement) -> Result<bool> {
        let perm = self.level_permutation(level, gamma)?;
        Ok(perm.iter().enumerate().all(|(i, &v)| i == v))
    }

    pub fn identity_point(&self) -> OdometerPoint {
        OdometerPoint {
            cosets: vec![0; self.levels.len()],
        }
    }

    pub fn point(&self, cosets: Vec<usize>) -> Result<OdometerPoint> {
        if cosets.len() != self.levels.len() {
            return Err(Error::invalid("coset sequence length mismatch"));
        }
        for (i, &c) in cosets.iter().enumerate() {
            if c >= self.levels[i].order {
                return Err(Error::invalid(format!("coset {c} out of range at level {i}")));
            }
        }
        for (i, pi) in self.connecting.iter().enumerate() {
            if pi[cosets[i + 1]] != cosets[i] {
                return Err(Error::invalid(format!(
                    "cosets incompatible across levels {i} and {}",
                    i + 1
                )));
            }
        }
        Ok(OdometerPoint { cosets })
    }
}

/// A point of the truncated inverse limit: a compatible coset at each
/// level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OdometerPoint {
    cosets: Vec<usize>,
}

impl OdometerPoint {
    pub fn cosets(&self) -> &[usize] {
        &self.cosets
    }
}

/// Levelwise left translation.
pub fn act(chain: &QuotientChain, gamma: &GroupElement, x: &OdometerPoint) -> Result<OdometerPoint> {
    let cosets = x
        .cosets
        .iter()
        .enumerate()
        .map(|(i, &c)| Ok(chain.level_permutation(i, gamma)?[c]))
        .collect::<Result<Vec<usize>>>()?;
    chain.point(cosets)
}

/// Descriptor of the stabilizer of a level-i truncation: by normality it
/// is the kernel Γ_i itself, independent of the point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerDescriptor {
    pub level: usize,
    pub index: usize,
}

pub fn stabilizer_level(chain: &QuotientChain, x: &OdometerPoint, level: usize) -> Result<StabilizerDescriptor> {
    if level >= chain.levels().len() || level >= x.cosets.len() {
        return Err(Error::invalid(format!("level {level} out of range")));
    }
    Ok(StabilizerDescriptor {
        level,
        index: chain.levels()[level].order,
    })
}

/// Result of checking that every generator translation preserves the
/// uniform measure on a level (equivalently, is a bijection: each coset
/// has exactly one preimage).
#[derive(Debug, Clone)]
pub struct UniformInvarianceReport {
    pub order: usize,
    pub violations: Vec<String>,
}

impl UniformInvarianceReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Raw-table variant, usable on unvalidated (possibly fault-injected)
/// inputs.
pub fn uniform_invariance_check_tables(
    tables: &[Vec<usize>],
    order: usize,
) -> UniformInvarianceReport {
    let mut violations = Vec::new();
    for (g, table) in tables.iter().enumerate() {
        if table.len() != order {
            violations.push(format!("generator {g}: table has length {}", table.len()));
            continue;
        }
        let mut preimages: BTreeMap<usize, usize> = BTreeMap::new();
        for &v in table {
            *preimages.entry(v).or_default() += 1;
        }
        for coset in 0..order {
            match preimages.get(&coset).copied().unwrap_or(0) {
                1 => {}
                k => violations.push(format!(
                    "generator {g}: coset {coset} has {k} preimages, \
                     translated mass {k}/{order} != 1/{order}"
                )),
            }
        }
    }
    UniformInvarianceReport { order, violations }
}

pub fn uniform_invariance_check(chain: &QuotientChain, level: usize) -> Result<UniformInvarianceReport> {
    let lvl = chain
        .levels()
        .get(level)
        .ok_or_else(|| Error::invalid(format!("level {level} out of range")))?;
    Ok(uniform_invariance_check_tables(&lvl.gen_images, lvl.order))
}

/// The classical ℤ odometer with the given moduli (each must divide the
/// next).
pub fn dyadic_style_chain(moduli: &[usize]) -> Result<QuotientChain> {
    let levels = moduli
        .iter()
        .map(|&m| LevelSpec {
            order: m,
            gen_images: vec![(0..m).map(|x| (x + 1) % m).collect()],
        })
        .collect();
    let connecting = moduli
        .windows(2)
        .map(|pair| {
            if pair[1] % pair[0] != 0 {
                return Err(Error::ChainConstruction(format!(
                    "modulus {} does not divide {}",
                    pair[0], pair[1]
                )));
            }
            Ok((0..pair[1]).map(|x| x % pair[0]).collect())
        })
        .collect::<Result<Vec<Vec<usize>>>>()?;
    QuotientChain::build(GroupSpec::Integers, levels, connecting)
}

/// S₃ as permutations of three points, with the left-regular translation
/// tables for a chosen indexing; element 0 is the identity.
fn s3_elements() -> Vec<[u8; 3]> {
    let mut out = vec![[0u8, 1, 2]];
    for p in [
        [0u8, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ] {
        out.push(p);
    }
    out
}

fn s3_multiply(a: [u8; 3], b: [u8; 3]) -> [u8; 3] {
    [a[b[0] as usize], a[b[1] as usize], a[b[2] as usize]]
}

fn s3_left_table(g: [u8; 3]) -> Vec<usize> {
    let elements = s3_elements();
    let index: BTreeMap<[u8; 3], usize> =
        elements.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    elements
        .iter()
        .map(|&h| index[&s3_multiply(g, h)])
        .collect()
}

/// An 𝔽₂ chain through S₃ and then S₃ × S₃: level one sends a to a
/// transposition and b to a 3-cycle; level two crosses the images so the
/// pair generates the full product (a graph of an isomorphism would have
/// to match element orders 2 and 3, which is impossible).
pub fn f2_s3_chain() -> Result<QuotientChain> {
    let t = [1u8, 0, 2]; // (0 1)
    let c = [1u8, 2, 0]; // (0 1 2)
    let level1 = LevelSpec {
        order: 6,
        gen_images: vec![s3_left_table(t), s3_left_table(c)],
    };
    // pairs (i, j) indexed i*6 + j; left translation componentwise
    let pair_table = |g1: [u8; 3], g2: [u8; 3]| -> Vec<usize> {
        let t1 = s3_left_table(g1);
        let t2 = s3_left_table(g2);
        (0..36).map(|x| t1[x / 6] * 6 + t2[x % 6]).collect()
    };
    let level2 = LevelSpec {
        order: 36,
        gen_images: vec![pair_table(t, c), pair_table(c, t)],
    };
    let connecting = vec![(0..36).map(|x| x / 6).collect()];
    QuotientChain::build(GroupSpec::Free(2), vec![level1, level2], connecting)
}
