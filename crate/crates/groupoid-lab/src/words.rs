//! Reduced-word arithmetic for finitely generated groups (free groups and
//! the integers), Cayley-ball enumeration, and the Følner boundary audit.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupSpec {
    /// Free group of the given rank (>= 1).
    Free(u8),
    /// The integers under addition.
    Integers,
}

impl GroupSpec {
    pub fn identity(self) -> GroupElement {
        match self {
            GroupSpec::Free(rank) => GroupElement::Free {
                rank,
                letters: Vec::new(),
            },
            GroupSpec::Integers => GroupElement::Int(0),
        }
    }

    /// Generators together with their inverses.
    pub fn symmetric_generators(self) -> Vec<GroupElement> {
        match self {
            GroupSpec::Free(rank) => (1..=rank as i8)
                .flat_map(|g| [g, -g])
                .map(|l| GroupElement::Free {
                    rank,
                    letters: vec![l],
                })
                .collect(),
            GroupSpec::Integers => vec![GroupElement::Int(1), GroupElement::Int(-1)],
        }
    }
}

/// A group element in canonical form: a freely reduced word for free
/// groups, a single exponent for the integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupElement {
    Free { rank: u8, letters: Vec<i8> },
    Int(i64),
}

fn reduce(letters: impl IntoIterator<Item = i8>) -> Vec<i8> {
    let mut out: Vec<i8> = Vec::new();
    for l in letters {
        if out.last().is_some_and(|p| *p == -l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Position of a signed letter in the shortlex alphabet a < A < b < B < ...
fn letter_key(l: i8) -> u16 {
    let g = l.unsigned_abs() as u16;
    2 * (g - 1) + u16::from(l < 0)
}

impl GroupElement {
    pub fn free(rank: u8, letters: impl IntoIterator<Item = i8>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::invalid("free group rank must be >= 1"));
        }
        let letters = reduce(letters);
        if let Some(&l) = letters.iter().find(|l| **l == 0 || l.unsigned_abs() > rank) {
            return Err(Error::invalid(format!(
                "letter {l} outside generator range 1..={rank}"
            )));
        }
        Ok(GroupElement::Free { rank, letters })
    }

    pub fn spec(&self) -> GroupSpec {
        match self {
            GroupElement::Free { rank, .. } => GroupSpec::Free(*rank),
            GroupElement::Int(_) => GroupSpec::Integers,
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            GroupElement::Free { letters, .. } => letters.is_empty(),
            GroupElement::Int(k) => *k == 0,
        }
    }

    /// Word length with respect to the standard generators.
    pub fn len(&self) -> usize {
        match self {
            GroupElement::Free { letters, .. } => letters.len(),
            GroupElement::Int(k) => k.unsigned_abs() as usize,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.is_identity()
    }

    pub fn multiply(&self, other: &GroupElement) -> Result<GroupElement> {
        match (self, other) {
            (
                GroupElement::Free { rank: r1, letters: a },
                GroupElement::Free { rank: r2, letters: b },
            ) => {
                if r1 != r2 {
                    return Err(Error::invalid("mismatched free group ranks"));
                }
                Ok(GroupElement::Free {
                    rank: *r1,
                    letters: reduce(a.iter().chain(b.iter()).copied()),
                })
            }
            (GroupElement::Int(a), GroupElement::Int(b)) => Ok(GroupElement::Int(a + b)),
            _ => Err(Error::invalid("mismatched group specs")),
        }
    }

    pub fn invert(&self) -> GroupElement {
        match self {
            GroupElement::Free { rank, letters } => GroupElement::Free {
                rank: *rank,
                letters: letters.iter().rev().map(|l| -l).collect(),
            },
            GroupElement::Int(k) => GroupElement::Int(-k),
        }
    }

    /// Serialized over {a,b,...,A,B,...} for free groups (capitals are
    /// inverses), signed decimal for the integers, "e" for the identity.
    pub fn to_token(&self) -> String {
        match self {
            GroupElement::Free { letters, .. } => {
                if letters.is_empty() {
                    "e".to_string()
                } else {
                    letters
                        .iter()
                        .map(|&l| {
                            let c = (b'a' + (l.unsigned_abs() - 1)) as char;
                            if l < 0 {
                                c.to_ascii_uppercase()
                            } else {
                                c
                            }
                        })
                        .collect()
                }
            }
            GroupElement::Int(k) => k.to_string(),
        }
    }

    pub fn parse(spec: GroupSpec, token: &str) -> Result<GroupElement> {
        match spec {
            GroupSpec::Integers => token
                .parse::<i64>()
                .map(GroupElement::Int)
                .map_err(|_| Error::invalid(format!("bad integer element {token:?}"))),
            GroupSpec::Free(rank) => {
                if token == "e" {
                    return Ok(spec.identity());
                }
                let letters = token
                    .chars()
                    .map(|c| {
                        let lower = c.to_ascii_lowercase();
                        if !lower.is_ascii_lowercase() {
                            return Err(Error::invalid(format!("bad letter {c:?}")));
                        }
                        let g = (lower as u8 - b'a' + 1) as i8;
                        Ok(if c.is_ascii_uppercase() { -g } else { g })
                    })
                    .collect::<Result<Vec<_>>>()?;
                GroupElement::free(rank, letters)
            }
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_token())
    }
}

// Shortlex: shorter words first, then letterwise a < A < b < B < ...
// For the integers the same order is induced by 0 < 1 < -1 < 2 < -2 < ...
impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (
                GroupElement::Free { letters: a, .. },
                GroupElement::Free { letters: b, .. },
            ) => a
                .len()
                .cmp(&b.len())
                .then_with(|| {
                    a.iter()
                        .map(|&l| letter_key(l))
                        .cmp(b.iter().map(|&l| letter_key(l)))
                }),
            (GroupElement::Int(a), GroupElement::Int(b)) => a
                .unsigned_abs()
                .cmp(&b.unsigned_abs())
                .then_with(|| (*a < 0).cmp(&(*b < 0))),
            (GroupElement::Free { .. }, GroupElement::Int(_)) => Ordering::Less,
            (GroupElement::Int(_), GroupElement::Free { .. }) => Ordering::Greater,
        }
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub type FiniteSubset = BTreeSet<GroupElement>;

/// All elements of word length <= `radius`, in shortlex order.
pub fn ball(spec: GroupSpec, radius: u32) -> Vec<GroupElement> {
    match spec {
        GroupSpec::Integers => {
            let r = radius as i64;
            let mut out = vec![GroupElement::Int(0)];
            for k in 1..=r {
                out.push(GroupElement::Int(k));
                out.push(GroupElement::Int(-k));
            }
            out
        }
        GroupSpec::Free(_) => {
            let mut out = vec![spec.identity()];
            let mut frontier = vec![spec.identity()];
            let gens = spec.symmetric_generators();
            for _ in 0..radius {
                let mut next = Vec::new();
                for w in &frontier {
                    for g in &gens {
                        let wg = w.multiply(g).expect("same spec");
                        if wg.len() > w.len() {
                            next.push(wg);
                        }
                    }
                }
                next.sort();
                next.dedup();
                out.extend(next.iter().cloned());
                frontier = next;
            }
            out
        }
    }
}

/// `BK = {b k : b in B, k in K}`.
pub fn translate_set(b: &FiniteSubset, k: &FiniteSubset) -> Result<FiniteSubset> {
    let mut out = FiniteSubset::new();
    for bb in b {
        for kk in k {
            out.insert(bb.multiply(kk)?);
        }
    }
    Ok(out)
}

/// `|BK - K| / |K|`, exactly.
pub fn boundary_deficiency(b: &FiniteSubset, k: &FiniteSubset) -> Result<Rational> {
    if k.is_empty() {
        return Err(Error::invalid("boundary deficiency of empty set"));
    }
    let bk = translate_set(b, k)?;
    let outside = bk.difference(k).count() as i64;
    Ok(rational::rat(outside, k.len() as i64))
}

/// Result of minimizing the boundary deficiency over a family of test sets.
#[derive(Debug, Clone)]
pub struct FolnerReport {
    pub min_deficiency: Rational,
    pub witness: FiniteSubset,
    pub sets_checked: u64,
}

/// Minimum of `boundary_deficiency(B, K)` over the family, with the
/// minimizing `K` as witness. Over an exhaustive family this is a certified
/// lower bound at that scale.
pub fn folner_audit<I>(b: &FiniteSubset, family: I) -> Result<FolnerReport>
where
    I: IntoIterator<Item = FiniteSubset>,
{
    let mut best: Option<(Rational, FiniteSubset)> = None;
    let mut count = 0u64;
    for k in family {
        let d = boundary_deficiency(b, &k)?;
        count += 1;
        let better = match &best {
            None => true,
            Some((cur, _)) => d < *cur,
        };
        if better {
            best = Some((d, k));
        }
    }
    let (min_deficiency, witness) =
        best.ok_or_else(|| Error::invalid("folner audit over empty family"))?;
    Ok(FolnerReport {
        min_deficiency,
        witness,
        sets_checked: count,
    })
}

/// All nonempty subsets of `ball(spec, radius)` of size at most `max_size`.
pub fn ball_subsets(spec: GroupSpec, radius: u32, max_size: usize) -> Vec<FiniteSubset> {
    let ball = ball(spec, radius);
    let mut out = Vec::new();
    let mut stack: Vec<(usize, Vec<usize>)> = vec![(0, Vec::new())];
    while let Some((start, chosen)) = stack.pop() {
        if !chosen.is_empty() {
            out.push(chosen.iter().map(|&i| ball[i].clone()).collect());
        }
        if chosen.len() == max_size {
            continue;
        }
        for i in start..ball.len() {
            let mut next = chosen.clone();
            next.push(i);
            stack.push((i + 1, next));
        }
    }
    out
}

/// Intervals [0, m) in the integers, for m = 1..=m_max.
pub fn integer_intervals(m_max: i64) -> Vec<FiniteSubset> {
    (1..=m_max)
        .map(|m| (0..m).map(GroupElement::Int).collect())
        .collect()
}
