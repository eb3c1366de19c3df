//! Exact boolean algebra of compact open subsets of the full shift
//! {0,...,n-1}^N: cylinders, their finite unions in canonical normal form,
//! and product cylinders over finite windows, all with exact rational
//! measures.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::words::GroupElement;

/// A finite word over the alphabet {0,...,n-1}. The empty word denotes the
/// full-space cylinder. Sequence positions are indexed from 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    symbols: Vec<u8>,
    alphabet: u8,
}

impl Word {
    pub fn new(symbols: impl Into<Vec<u8>>, alphabet: u8) -> Result<Self> {
        if alphabet < 2 {
            return Err(Error::invalid("alphabet size must be >= 2"));
        }
        let symbols = symbols.into();
        if let Some(&s) = symbols.iter().find(|s| **s >= alphabet) {
            return Err(Error::invalid(format!(
                "symbol {s} outside alphabet 0..{alphabet}"
            )));
        }
        Ok(Word { symbols, alphabet })
    }

    pub fn empty(alphabet: u8) -> Self {
        Word::new(Vec::new(), alphabet).expect("alphabet checked by caller")
    }

    pub fn parse(digits: &str, alphabet: u8) -> Result<Self> {
        let symbols = digits
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::invalid(format!("bad digit {c:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Word::new(symbols, alphabet)
    }

    pub fn alphabet(&self) -> u8 {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    /// 1-based symbol access, matching the sequence indexing convention.
    pub fn at(&self, pos: usize) -> u8 {
        self.symbols[pos - 1]
    }

    pub fn has_prefix(&self, prefix: &Word) -> bool {
        self.symbols.len() >= prefix.symbols.len()
            && self.symbols[..prefix.symbols.len()] == prefix.symbols[..]
    }

    pub fn concat(&self, tail: &[u8]) -> Result<Word> {
        let mut symbols = self.symbols.clone();
        symbols.extend_from_slice(tail);
        Word::new(symbols, self.alphabet)
    }

    /// All words of the given length, in lexicographic order.
    pub fn enumerate(alphabet: u8, len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty(alphabet)];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|w| (0..alphabet).map(move |a| w.concat(&[a]).expect("valid symbol")))
                .collect();
        }
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.symbols {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// The cylinder C_u of all infinite sequences with prefix u.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cylinder(pub Word);

impl Cylinder {
    /// mu(C_u) = n^{-|u|}.
    pub fn measure(&self) -> Rational {
        rational::inv_pow(self.0.alphabet() as u64, self.0.len())
    }
}

pub fn cylinder_measure(prefix: &Word) -> Rational {
    Cylinder(prefix.clone()).measure()
}

/// A finite disjoint union of cylinders in canonical normal form: no prefix
/// containments and no complete sibling families. Two clopen sets denote
/// the same subset of the shift iff their normal forms are equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClopenSet {
    alphabet: u8,
    prefixes: BTreeSet<Vec<u8>>,
}

impl ClopenSet {
    pub fn new(cylinders: impl IntoIterator<Item = Word>, alphabet: u8) -> Result<Self> {
        if alphabet < 2 {
            return Err(Error::invalid("alphabet size must be >= 2"));
        }
        let mut prefixes = BTreeSet::new();
        for w in cylinders {
            if w.alphabet() != alphabet {
                return Err(Error::invalid("mismatched alphabets in clopen set"));
            }
            prefixes.insert(w.symbols().to_vec());
        }
        let mut set = ClopenSet { alphabet, prefixes };
        set.normalize();
        Ok(set)
    }

    pub fn empty(alphabet: u8) -> Self {
        ClopenSet {
            alphabet,
            prefixes: BTreeSet::new(),
        }
    }

    pub fn full(alphabet: u8) -> Self {
        ClopenSet {
            alphabet,
            prefixes: [Vec::new()].into_iter().collect(),
        }
    }

    fn normalize(&mut self) {
        // Drop cylinders contained in another, then merge complete sibling
        // families, alternating to a fixed point.
        loop {
            let absorbed: Vec<Vec<u8>> = self
                .prefixes
                .iter()
                .filter(|p| {
                    (0..p.len()).any(|k| self.prefixes.contains(&p[..k].to_vec()))
                })
                .cloned()
                .collect();
            for p in absorbed {
                self.prefixes.remove(&p);
            }
            let mut merged = false;
            let parents: BTreeSet<Vec<u8>> = self
                .prefixes
                .iter()
                .filter(|p| !p.is_empty())
                .map(|p| p[..p.len() - 1].to_vec())
                .collect();
            for parent in parents {
                let all_children = (0..self.alphabet).all(|a| {
                    let mut child = parent.clone();
                    child.push(a);
                    self.prefixes.contains(&child)
                });
                if all_children {
                    for a in 0..self.alphabet {
                        let mut child = parent.clone();
                        child.push(a);
                        self.prefixes.remove(&child);
                    }
                    self.prefixes.insert(parent);
                    merged = true;
                }
            }
            if !merged {
                break;
            }
        }
    }

    pub fn alphabet(&self) -> u8 {
        self.alphabet
    }

    pub fn is_empty(&self) -> bool {
        self.prefixes.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.prefixes.len() == 1 && self.prefixes.contains(&Vec::new())
    }

    pub fn cylinders(&self) -> impl Iterator<Item = Word> + '_ {
        self.prefixes
            .iter()
            .map(|p| Word::new(p.clone(), self.alphabet).expect("normal form is valid"))
    }

    /// Serialized form: sorted list of prefix digit strings.
    pub fn prefix_strings(&self) -> Vec<String> {
        self.cylinders().map(|w| w.to_string()).collect()
    }

    /// Does the set contain every extension of this word?
    pub fn contains_cylinder(&self, w: &Word) -> bool {
        (0..=w.len()).any(|k| self.prefixes.contains(&w.symbols()[..k].to_vec()))
    }

    fn check_alphabet(&self, other: &ClopenSet) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::invalid("mismatched alphabets"));
        }
        Ok(())
    }

    pub fn union(&self, other: &ClopenSet) -> Result<ClopenSet> {
        self.check_alphabet(other)?;
        ClopenSet::new(self.cylinders().chain(other.cylinders()), self.alphabet)
    }

    pub fn intersect(&self, other: &ClopenSet) -> Result<ClopenSet> {
        self.check_alphabet(other)?;
        let mut parts = Vec::new();
        for a in self.cylinders() {
            for b in other.cylinders() {
                if a.has_prefix(&b) {
                    parts.push(a.clone());
                } else if b.has_prefix(&a) {
                    parts.push(b.clone());
                }
            }
        }
        ClopenSet::new(parts, self.alphabet)
    }

    pub fn complement(&self) -> ClopenSet {
        let mut parts = Vec::new();
        self.complement_under(&[], &mut parts);
        ClopenSet::new(
            parts
                .into_iter()
                .map(|p| Word::new(p, self.alphabet).expect("valid symbols")),
            self.alphabet,
        )
        .expect("alphabet already validated")
    }

    fn complement_under(&self, prefix: &[u8], out: &mut Vec<Vec<u8>>) {
        if (0..=prefix.len()).any(|k| self.prefixes.contains(&prefix[..k].to_vec())) {
            return; // fully inside
        }
        let intersects = self
            .prefixes
            .iter()
            .any(|p| p.len() > prefix.len() && p[..prefix.len()] == *prefix);
        if !intersects {
            out.push(prefix.to_vec());
            return;
        }
        for a in 0..self.alphabet {
            let mut child = prefix.to_vec();
            child.push(a);
            self.complement_under(&child, out);
        }
    }

    pub fn difference(&self, other: &ClopenSet) -> Result<ClopenSet> {
        self.check_alphabet(other)?;
        self.intersect(&other.complement())
    }

    pub fn is_subset(&self, other: &ClopenSet) -> Result<bool> {
        Ok(self.difference(other)?.is_empty())
    }

    /// Exact measure: sum of cylinder masses.
    pub fn measure(&self) -> Rational {
        self.cylinders().map(|w| cylinder_measure(&w)).sum()
    }

    /// Indicator over all depth-d words; brute-force oracle for the
    /// boolean algebra.
    pub fn indicator(&self, depth: usize) -> Vec<bool> {
        Word::enumerate(self.alphabet, depth)
            .iter()
            .map(|w| self.contains_cylinder(w))
            .collect()
    }
}

pub fn clopen_measure(a: &ClopenSet) -> Rational {
    a.measure()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoolOp {
    Union,
    Intersect,
    Difference,
}

pub fn boolean_algebra(a: &ClopenSet, b: &ClopenSet, op: BoolOp) -> Result<ClopenSet> {
    match op {
        BoolOp::Union => a.union(b),
        BoolOp::Intersect => a.intersect(b),
        BoolOp::Difference => a.difference(b),
    }
}

/// A product cylinder over a finite window of coordinates indexed by group
/// elements: coordinates outside the assignment are unconstrained.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProductCylinder {
    assignment: BTreeMap<GroupElement, Word>,
}

impl ProductCylinder {
    pub fn new(assignment: impl IntoIterator<Item = (GroupElement, Word)>) -> Self {
        ProductCylinder {
            assignment: assignment.into_iter().collect(),
        }
    }

    pub fn unconstrained() -> Self {
        ProductCylinder {
            assignment: BTreeMap::new(),
        }
    }

    pub fn assignment(&self) -> &BTreeMap<GroupElement, Word> {
        &self.assignment
    }

    pub fn window(&self) -> impl Iterator<Item = &GroupElement> {
        self.assignment.keys()
    }

    /// Product of the cylinder masses over assigned coordinates;
    /// unassigned coordinates contribute a factor of 1.
    pub fn measure(&self) -> Rational {
        self.assignment
            .values()
            .map(cylinder_measure)
            .product()
    }
}

pub fn product_measure(p: &ProductCylinder) -> Rational {
    p.measure()
}
