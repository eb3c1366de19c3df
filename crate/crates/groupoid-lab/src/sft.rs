//! The tail-equivalence groupoid of the full shift at finite truncation:
//! arrows with a canonical tail bound, prefix-swap bisections, tail classes
//! and the fibers of the elementary subgroupoids.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::cantor::Word;
use crate::error::{Error, Result};

/// An arrow (y, x) truncated to depth d, with the minimal tail bound k:
/// y_i = x_i for all positions i >= k (1-based). Denotes the arrow
/// (y.w, x.w) for every common infinite tail w; the truncation is faithful
/// for all operations at depth >= k.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SftArrow {
    target: Word,
    source: Word,
    tail_bound: usize,
}

impl SftArrow {
    pub fn new(target: Word, source: Word) -> Result<Self> {
        if target.alphabet() != source.alphabet() {
            return Err(Error::invalid("arrow endpoints over different alphabets"));
        }
        if target.len() != source.len() {
            return Err(Error::invalid("arrow endpoints of different depths"));
        }
        let tail_bound = minimal_tail_bound(&target, &source);
        Ok(SftArrow {
            target,
            source,
            tail_bound,
        })
    }

    pub fn unit(at: Word) -> Self {
        SftArrow {
            source: at.clone(),
            target: at,
            tail_bound: 1,
        }
    }

    pub fn target_word(&self) -> &Word {
        &self.target
    }

    pub fn source_word(&self) -> &Word {
        &self.source
    }

    /// The canonical minimal k with y_i = x_i for all i >= k.
    pub fn tail_bound(&self) -> usize {
        self.tail_bound
    }

    pub fn depth(&self) -> usize {
        self.source.len()
    }

    pub fn is_unit(&self) -> bool {
        self.tail_bound == 1
    }

    pub fn inverse(&self) -> SftArrow {
        SftArrow {
            target: self.source.clone(),
            source: self.target.clone(),
            tail_bound: self.tail_bound,
        }
    }

    pub fn source_unit(&self) -> SftArrow {
        SftArrow::unit(self.source.clone())
    }

    pub fn range_unit(&self) -> SftArrow {
        SftArrow::unit(self.target.clone())
    }

    /// compose((z, y), (y, x)) = (z, x), with the tail bound recomputed.
    pub fn compose(&self, other: &SftArrow) -> Result<SftArrow> {
        if self.source != other.target {
            return Err(Error::NotComposable(format!(
                "source {} != target {}",
                self.source, other.target
            )));
        }
        SftArrow::new(self.target.clone(), other.source.clone())
    }

    pub fn serialized(&self) -> SerializedArrow {
        SerializedArrow {
            y: self.target.to_string(),
            x: self.source.to_string(),
            k: self.tail_bound,
        }
    }
}

fn minimal_tail_bound(y: &Word, x: &Word) -> usize {
    // Smallest k >= 1 with agreement at every position >= k, so one past
    // the last disagreement.
    (1..=y.len())
        .rev()
        .find(|&i| y.at(i) != x.at(i))
        .map_or(1, |i| i + 1)
}

/// Wire format for arrows: {"y": "...", "x": "...", "k": int}.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SerializedArrow {
    pub y: String,
    pub x: String,
    pub k: usize,
}

/// The compact open bisection sigma_{u,v}: prefix replacement from C_u to
/// C_v, with |u| = |v|.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrefixBisection {
    from: Word,
    to: Word,
}

impl PrefixBisection {
    pub fn new(from: Word, to: Word) -> Result<Self> {
        if from.alphabet() != to.alphabet() {
            return Err(Error::invalid("bisection prefixes over different alphabets"));
        }
        if from.len() != to.len() {
            return Err(Error::invalid("bisection prefixes of different lengths"));
        }
        Ok(PrefixBisection { from, to })
    }

    /// s(sigma_{u,v}) = C_u.
    pub fn from_prefix(&self) -> &Word {
        &self.from
    }

    /// r(sigma_{u,v}) = C_v.
    pub fn to_prefix(&self) -> &Word {
        &self.to
    }

    pub fn is_identity(&self) -> bool {
        self.from == self.to
    }

    /// The arrow (v.tail(x), x) for x in C_u.
    pub fn apply(&self, x: &Word) -> Result<SftArrow> {
        if !x.has_prefix(&self.from) {
            return Err(Error::OutsideDomain(format!(
                "{} is not in the cylinder of {}",
                x, self.from
            )));
        }
        let y = self.to.concat(&x.symbols()[self.from.len()..])?;
        SftArrow::new(y, x.clone())
    }

    /// Does the arrow lie inside this bisection at its depth?
    pub fn contains(&self, arrow: &SftArrow) -> bool {
        arrow.source_word().has_prefix(&self.from)
            && arrow.target_word().has_prefix(&self.to)
            && arrow.source_word().symbols()[self.from.len()..]
                == arrow.target_word().symbols()[self.to.len()..]
    }
}

pub fn apply_bisection(sigma: &PrefixBisection, x: &Word) -> Result<SftArrow> {
    sigma.apply(x)
}

/// All depth-d words agreeing with x at positions >= k; cardinality n^{k-1}.
pub fn tail_class(x: &Word, k: usize) -> Result<BTreeSet<Word>> {
    if k < 1 || k > x.len() + 1 {
        return Err(Error::invalid(format!(
            "tail bound {k} out of range 1..={}",
            x.len() + 1
        )));
    }
    let n = x.alphabet();
    let mut out: BTreeSet<Word> = [Word::empty(n)].into_iter().collect();
    for pos in 1..=x.len() {
        out = out
            .into_iter()
            .flat_map(|w| {
                let choices: Vec<u8> = if pos < k { (0..n).collect() } else { vec![x.at(pos)] };
                choices
                    .into_iter()
                    .map(move |a| w.concat(&[a]).expect("valid symbol"))
            })
            .collect();
    }
    Ok(out)
}

/// The fiber of the level-k elementary subgroupoid at x: all arrows (y, x)
/// with y tail-equivalent to x at bound k. Contains the unit arrow.
pub fn elementary_fiber(k: usize, x: &Word) -> Result<BTreeSet<SftArrow>> {
    if x.len() + 1 < k {
        return Err(Error::invalid(format!(
            "depth {} too small for tail bound {k}",
            x.len()
        )));
    }
    Ok(tail_class(x, k)?
        .into_iter()
        .map(|y| SftArrow::new(y, x.clone()).expect("same depth"))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(digits: &str, n: u8) -> Word {
        Word::parse(digits, n).unwrap()
    }

    fn arrow(y: &str, x: &str, n: u8) -> SftArrow {
        SftArrow::new(w(y, n), w(x, n)).unwrap()
    }

    #[test]
    fn right_unit_law() {
        let a = arrow("100", "000", 2);
        assert_eq!(a.compose(&a.source_unit()).unwrap(), a);
        assert_eq!(a.range_unit().compose(&a).unwrap(), a);
    }

    #[test]
    fn inverse_is_involution() {
        let a = arrow("10", "01", 2);
        assert_eq!(a.inverse().inverse(), a);
    }

    #[test]
    fn compose_recomputes_minimal_tail_bound() {
        let a = arrow("100", "000", 2);
        let b = arrow("000", "010", 2);
        let c = a.compose(&b).unwrap();
        assert_eq!(c, arrow("100", "010", 2));
        assert_eq!(c.tail_bound(), 3);
    }

    #[test]
    fn non_composable_pair_rejected() {
        let a = arrow("10", "00", 2);
        let b = arrow("11", "01", 2);
        assert!(a.compose(&b).is_err());
    }

    #[test]
    fn identity_bisection_gives_units() {
        let sigma = PrefixBisection::new(w("0", 2), w("0", 2)).unwrap();
        let got = sigma.apply(&w("010", 2)).unwrap();
        assert!(got.is_unit());
    }

    #[test]
    fn prefix_swap_examples() {
        let sigma = PrefixBisection::new(w("0", 2), w("1", 2)).unwrap();
        assert_eq!(sigma.apply(&w("001", 2)).unwrap(), arrow("101", "001", 2));
        let sigma2 = PrefixBisection::new(w("01", 2), w("10", 2)).unwrap();
        assert_eq!(sigma2.apply(&w("011", 2)).unwrap(), arrow("101", "011", 2));
    }

    #[test]
    fn bisection_domain_checked() {
        let sigma = PrefixBisection::new(w("0", 2), w("1", 2)).unwrap();
        assert!(sigma.apply(&w("10", 2)).is_err());
    }

    #[test]
    fn bisection_is_bijection_on_prefix_words() {
        let sigma = PrefixBisection::new(w("01", 2), w("10", 2)).unwrap();
        for d in 2..=4usize {
            let domain: Vec<Word> = Word::enumerate(2, d)
                .into_iter()
                .filter(|x| x.has_prefix(&w("01", 2)))
                .collect();
            let images: BTreeSet<Word> = domain
                .iter()
                .map(|x| sigma.apply(x).unwrap().target_word().clone())
                .collect();
            assert_eq!(images.len(), domain.len());
            assert!(images.iter().all(|y| y.has_prefix(&w("10", 2))));
        }
    }

    #[test]
    fn tail_class_examples() {
        let x = w("000", 2);
        assert_eq!(tail_class(&x, 1).unwrap(), [x.clone()].into_iter().collect());
        assert_eq!(
            tail_class(&x, 2).unwrap(),
            [w("000", 2), w("100", 2)].into_iter().collect()
        );
        assert_eq!(tail_class(&x, 4).unwrap().len(), 8);
        assert!(tail_class(&x, 5).is_err());
        assert!(tail_class(&x, 0).is_err());
    }

    #[test]
    fn tail_class_symmetric() {
        for x in Word::enumerate(2, 3) {
            for k in 1..=4usize {
                for y in tail_class(&x, k).unwrap() {
                    assert!(tail_class(&y, k).unwrap().contains(&x));
                }
            }
        }
    }

    #[test]
    fn elementary_fiber_examples() {
        let x = w("000", 2);
        let f1 = elementary_fiber(1, &x).unwrap();
        assert_eq!(f1, [SftArrow::unit(x.clone())].into_iter().collect());
        assert_eq!(elementary_fiber(3, &x).unwrap().len(), 4);
        assert_eq!(elementary_fiber(2, &w("00", 3)).unwrap().len(), 3);
        assert!(elementary_fiber(4, &w("00", 2)).is_err());
        // unit arrow is always present
        assert!(elementary_fiber(3, &x).unwrap().contains(&SftArrow::unit(x)));
    }

    // Exhaustive groupoid axioms at depth <= 4, n <= 3: associativity over
    // all composable triples, unit and inverse laws over all arrows.
    #[test]
    fn groupoid_axioms_exhaustive() {
        for (n, d) in [(2u8, 4usize), (3, 3)] {
            let words = Word::enumerate(n, d);
            for z in &words {
                for y in &words {
                    let a = SftArrow::new(z.clone(), y.clone()).unwrap();
                    assert_eq!(a.compose(&a.inverse()).unwrap(), a.range_unit());
                    assert_eq!(a.inverse().compose(&a).unwrap(), a.source_unit());
                    for x in &words {
                        let b = SftArrow::new(y.clone(), x.clone()).unwrap();
                        let ab = a.compose(&b).unwrap();
                        for v in &words {
                            let c = SftArrow::new(x.clone(), v.clone()).unwrap();
                            let lhs = ab.compose(&c).unwrap();
                            let rhs = a.compose(&b.compose(&c).unwrap()).unwrap();
                            assert_eq!(lhs, rhs);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn equal_length_prefixes_have_equal_measure() {
        use crate::cantor::cylinder_measure;
        for len in 0..=3usize {
            let words = Word::enumerate(2, len);
            for u in &words {
                for v in &words {
                    assert_eq!(cylinder_measure(u), cylinder_measure(v));
                }
            }
        }
    }
}
