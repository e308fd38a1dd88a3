//! Word models: tensor algebra, half-shuffle, marked words, and `V ⊗ S(V)`.

use std::collections::BTreeSet;
use std::fmt;

use super::{LinComb, Model};
use crate::exactmath::{Permutation, Rational};

fn letter(f: &mut fmt::Formatter<'_>, x: u32) -> fmt::Result {
    if x < 26 {
        write!(f, "{}", (b'a' + x as u8) as char)
    } else {
        write!(f, "x{x}")
    }
}

/// All orderings of the letters `0..d`.
pub(crate) fn letter_orders(d: usize) -> Vec<Vec<u32>> {
    Permutation::all(d).into_iter().map(|p| p.images().iter().map(|&i| i as u32).collect()).collect()
}

pub(crate) fn identity_word(d: usize) -> Vec<u32> {
    (0..d as u32).collect()
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct TensorWord(pub Vec<u32>);

impl TensorWord {
    pub fn from_str_letters(s: &str) -> Self {
        TensorWord(s.bytes().map(|b| (b - b'a') as u32).collect())
    }
}

impl fmt::Display for TensorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &x in &self.0 {
            letter(f, x)?;
        }
        Ok(())
    }
}

pub fn as_concat(u: &TensorWord, v: &TensorWord) -> TensorWord {
    let mut w = u.0.clone();
    w.extend_from_slice(&v.0);
    TensorWord(w)
}

fn shuffles(a: &[u32], b: &[u32], prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if a.is_empty() || b.is_empty() {
        let mut w = prefix.clone();
        w.extend_from_slice(a);
        w.extend_from_slice(b);
        out.push(w);
        return;
    }
    prefix.push(a[0]);
    shuffles(&a[1..], b, prefix, out);
    prefix.pop();
    prefix.push(b[0]);
    shuffles(a, &b[1..], prefix, out);
    prefix.pop();
}

/// `u · v`: the first letter of `u`, then the rest of `u` shuffled with `v`.
pub fn zinb_halfshuffle(u: &TensorWord, v: &TensorWord) -> LinComb<TensorWord> {
    let Some((&first, rest)) = u.0.split_first() else {
        return LinComb::zero();
    };
    let mut out = Vec::new();
    shuffles(rest, &v.0, &mut vec![first], &mut out);
    LinComb::from_terms(out.into_iter().map(|w| (TensorWord(w), Rational::one())))
}

fn shift_word(w: &[u32], by: usize) -> Vec<u32> {
    w.iter().map(|&x| x + by as u32).collect()
}

/// The tensor algebra with concatenation `m`.
pub struct ConcatModel;

impl Model for ConcatModel {
    type Elem = TensorWord;

    fn id(&self) -> &'static str {
        "concat"
    }

    fn operations(&self) -> &'static [(&'static str, usize)] {
        &[("m", 2)]
    }

    fn degree(&self, e: &TensorWord) -> usize {
        e.0.len()
    }

    fn shift(&self, e: &TensorWord, by: usize) -> TensorWord {
        TensorWord(shift_word(&e.0, by))
    }

    fn basis(&self, d: usize) -> Vec<TensorWord> {
        letter_orders(d).into_iter().map(TensorWord).collect()
    }

    fn representatives(&self, d: usize) -> Vec<TensorWord> {
        vec![TensorWord(identity_word(d))]
    }

    fn apply(&self, _op: &str, args: &[&TensorWord]) -> LinComb<TensorWord> {
        LinComb::basis(as_concat(args[0], args[1]))
    }
}

/// The tensor algebra with the half-shuffle `m`.
pub struct ZinbModel;

impl Model for ZinbModel {
    type Elem = TensorWord;

    fn id(&self) -> &'static str {
        "zinbiel"
    }

    fn operations(&self) -> &'static [(&'static str, usize)] {
        &[("m", 2)]
    }

    fn degree(&self, e: &TensorWord) -> usize {
        e.0.len()
    }

    fn shift(&self, e: &TensorWord, by: usize) -> TensorWord {
        TensorWord(shift_word(&e.0, by))
    }

    fn basis(&self, d: usize) -> Vec<TensorWord> {
        letter_orders(d).into_iter().map(TensorWord).collect()
    }

    fn representatives(&self, d: usize) -> Vec<TensorWord> {
        vec![TensorWord(identity_word(d))]
    }

    fn apply(&self, _op: &str, args: &[&TensorWord]) -> LinComb<TensorWord> {
        zinb_halfshuffle(args[0], args[1])
    }
}

/// A word with one marked letter (`mark` is a 0-based position).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct MarkedWord {
    pub letters: Vec<u32>,
    pub mark: usize,
}

impl fmt::Display for MarkedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &x) in self.letters.iter().enumerate() {
            if i == self.mark {
                write!(f, "[")?;
                letter(f, x)?;
                write!(f, "]")?;
            } else {
                letter(f, x)?;
            }
        }
        Ok(())
    }
}

/// `u ⊣ v`: concatenate, keep the mark of `u`.
pub fn dias_left(u: &MarkedWord, v: &MarkedWord) -> MarkedWord {
    let mut letters = u.letters.clone();
    letters.extend_from_slice(&v.letters);
    MarkedWord { letters, mark: u.mark }
}

/// `u ⊢ v`: concatenate, keep the mark of `v`.
pub fn dias_right(u: &MarkedWord, v: &MarkedWord) -> MarkedWord {
    let mut letters = u.letters.clone();
    letters.extend_from_slice(&v.letters);
    MarkedWord { letters, mark: u.letters.len() + v.mark }
}

/// Marked words with `l = ⊣` and `r = ⊢`.
pub struct DiasModel;

impl Model for DiasModel {
    type Elem = MarkedWord;

    fn id(&self) -> &'static str {
        "diassociative"
    }

    fn operations(&self) -> &'static [(&'static str, usize)] {
        &[("l", 2), ("r", 2)]
    }

    fn degree(&self, e: &MarkedWord) -> usize {
        e.letters.len()
    }

    fn shift(&self, e: &MarkedWord, by: usize) -> MarkedWord {
        MarkedWord { letters: shift_word(&e.letters, by), mark: e.mark }
    }

    fn basis(&self, d: usize) -> Vec<MarkedWord> {
        letter_orders(d).into_iter().flat_map(|w| (0..d).map(move |mark| MarkedWord { letters: w.clone(), mark })).collect()
    }

    fn representatives(&self, d: usize) -> Vec<MarkedWord> {
        (0..d).map(|mark| MarkedWord { letters: identity_word(d), mark }).collect()
    }

    fn apply(&self, op: &str, args: &[&MarkedWord]) -> LinComb<MarkedWord> {
        match op {
            "l" => LinComb::basis(dias_left(args[0], args[1])),
            _ => LinComb::basis(dias_right(args[0], args[1])),
        }
    }
}

/// `x ⊗ u` in `V ⊗ S(V)`. Multilinear elements never repeat a letter, so the
/// tail multiset is stored as a set.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PermElement {
    pub head: u32,
    pub tail: BTreeSet<u32>,
}

impl fmt::Display for PermElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        letter(f, self.head)?;
        write!(f, ",{{")?;
        for (i, &x) in self.tail.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            letter(f, x)?;
        }
        write!(f, "}})")
    }
}

/// `(x,u)·(y,v) = (x, u ∪ {y} ∪ v)`.
pub fn perm_product(a: &PermElement, b: &PermElement) -> PermElement {
    let mut tail = a.tail.clone();
    tail.insert(b.head);
    tail.extend(b.tail.iter().copied());
    PermElement { head: a.head, tail }
}

pub struct PermModel;

impl Model for PermModel {
    type Elem = PermElement;

    fn id(&self) -> &'static str {
        "perm"
    }

    fn operations(&self) -> &'static [(&'static str, usize)] {
        &[("m", 2)]
    }

    fn degree(&self, e: &PermElement) -> usize {
        1 + e.tail.len()
    }

    /// Tail letters.
    fn size(&self, e: &PermElement) -> usize {
        e.tail.len()
    }

    fn shift(&self, e: &PermElement, by: usize) -> PermElement {
        PermElement { head: e.head + by as u32, tail: e.tail.iter().map(|&x| x + by as u32).collect() }
    }

    fn basis(&self, d: usize) -> Vec<PermElement> {
        (0..d as u32).map(|h| PermElement { head: h, tail: (0..d as u32).filter(|&x| x != h).collect() }).collect()
    }

    fn representatives(&self, d: usize) -> Vec<PermElement> {
        if d == 0 {
            return Vec::new();
        }
        vec![PermElement { head: 0, tail: (1..d as u32).collect() }]
    }

    fn apply(&self, _op: &str, args: &[&PermElement]) -> LinComb<PermElement> {
        LinComb::basis(perm_product(args[0], args[1]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> TensorWord {
        TensorWord::from_str_letters(s)
    }

    #[test]
    fn concatenation() {
        assert_eq!(as_concat(&w("a"), &w("b")), w("ab"));
        assert_eq!(as_concat(&w("ab"), &w("c")), w("abc"));
    }

    #[test]
    fn concatenation_is_associative_on_short_words() {
        let mut words = Vec::new();
        for len in 1..=3 {
            let mut cur = vec![String::new()];
            for _ in 0..len {
                cur = cur.iter().flat_map(|p| ["a", "b", "c"].iter().map(move |c| format!("{p}{c}"))).collect();
            }
            words.extend(cur.into_iter().map(|s| w(&s)));
        }
        for x in &words {
            for y in &words {
                for z in &words {
                    assert_eq!(as_concat(&as_concat(x, y), z), as_concat(x, &as_concat(y, z)));
                }
            }
        }
    }

    #[test]
    fn half_shuffle_examples() {
        assert_eq!(zinb_halfshuffle(&w("a"), &w("b")), LinComb::basis(w("ab")));
        let v = zinb_halfshuffle(&w("ab"), &w("c"));
        assert_eq!(v, LinComb::from_terms([(w("abc"), Rational::one()), (w("acb"), Rational::one())]));
        assert_eq!(zinb_halfshuffle(&w("ab"), &w("cd")).len(), 3);
    }

    #[test]
    fn dias_marks() {
        let a = MarkedWord { letters: vec![0], mark: 0 };
        let b = MarkedWord { letters: vec![1], mark: 0 };
        assert_eq!(dias_left(&a, &b).to_string(), "[a]b");
        assert_eq!(dias_right(&a, &b).to_string(), "a[b]");
    }

    #[test]
    fn perm_examples() {
        let e = |h| PermElement { head: h, tail: BTreeSet::new() };
        assert_eq!(perm_product(&e(0), &e(1)).to_string(), "(a,{b})");
        let abc = perm_product(&perm_product(&e(0), &e(1)), &e(2));
        assert_eq!(abc, perm_product(&e(0), &perm_product(&e(1), &e(2))));
        assert_eq!(abc, perm_product(&e(0), &perm_product(&e(2), &e(1))));
        assert_eq!(abc.to_string(), "(a,{b,c})");
    }

    #[test]
    fn multilinear_dimensions() {
        assert_eq!(ConcatModel.basis(4).len(), 24);
        assert_eq!(ZinbModel.basis(4).len(), 24);
        assert_eq!(DiasModel.basis(3).len(), 18);
        assert_eq!(PermModel.basis(5).len(), 5);
    }
}
