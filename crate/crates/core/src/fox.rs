//! Integer group rings and Fox free differential calculus.
//!
//! Derivatives use the left-derivation convention
//! `∂(uv)/∂x_i = ∂u/∂x_i + u·∂v/∂x_i`, `∂x_j/∂x_i = δ_ij`, which forces
//! `∂(x_i⁻¹)/∂x_i = -x_i⁻¹` and makes the fundamental formula
//! `a - ε(a)·1 = Σ_i ∂a/∂x_i · (x_i - 1)` hold.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::group::{Element, Group};
use crate::literal;
use crate::word::ReducedWord;

/// A finite `Z`-combination of group elements. Zero coefficients are never
/// stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RingElement {
    group: Group,
    terms: BTreeMap<Element, i64>,
}

impl RingElement {
    pub fn zero(group: &Group) -> Self {
        RingElement {
            group: group.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(group: &Group) -> Self {
        Self::monomial(group, group.identity(), 1)
    }

    pub fn monomial(group: &Group, e: Element, coeff: i64) -> Self {
        let mut out = Self::zero(group);
        out.add_term(e, coeff);
        out
    }

    /// `Σ c_k g_k`; repeated elements are collected.
    pub fn from_terms(group: &Group, terms: impl IntoIterator<Item = (Element, i64)>) -> Result<Self> {
        let mut out = Self::zero(group);
        for (e, c) in terms {
            group.check(&e)?;
            out.add_term(e, c);
        }
        Ok(out)
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Element, i64)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn coefficient(&self, e: &Element) -> i64 {
        self.terms.get(e).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn add_term(&mut self, e: Element, coeff: i64) {
        if coeff == 0 {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += coeff;
                if *slot.get() == 0 {
                    slot.remove();
                }
            }
        }
    }

    fn same_ring(&self, other: &RingElement) -> Result<()> {
        if self.group != other.group {
            return Err(Error::input(format!(
                "ring elements over {} and {} cannot be combined",
                self.group, other.group
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement> {
        self.same_ring(other)?;
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &RingElement) -> Result<RingElement> {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> RingElement {
        let mut out = Self::zero(&self.group);
        for (e, c) in self.terms() {
            out.add_term(e.clone(), c * k);
        }
        out
    }

    pub fn mul(&self, other: &RingElement) -> Result<RingElement> {
        self.same_ring(other)?;
        let mut out = Self::zero(&self.group);
        for (g, a) in self.terms() {
            for (h, b) in other.terms() {
                out.add_term(self.group.mul(g, h)?, a * b);
            }
        }
        Ok(out)
    }

    /// Left multiplication by a group element.
    pub fn left_mul(&self, g: &Element) -> Result<RingElement> {
        let mut out = Self::zero(&self.group);
        for (h, c) in self.terms() {
            out.add_term(self.group.mul(g, h)?, c);
        }
        Ok(out)
    }

    /// The augmentation `ε`: sum of coefficients.
    pub fn augmentation(&self) -> i64 {
        self.terms.values().sum()
    }

    /// Pushes every key through a group homomorphism and collects.
    pub fn push_forward(&self, target: &Group, hom: impl Fn(&Element) -> Result<Element>) -> Result<RingElement> {
        let mut out = Self::zero(target);
        for (e, c) in self.terms() {
            out.add_term(hom(e)?, c);
        }
        Ok(out)
    }
}

impl fmt::Display for RingElement {
    /// `±c·<element>` terms joined by spaces, sorted by canonical key.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(e, c)| format!("{c}·{}", literal::term_literal(&self.group, e)))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// The ring operation named by `kind`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingOp {
    Add,
    Subtract,
    Multiply,
}

pub enum RingOperand<'a> {
    Element(&'a RingElement),
    Integer(i64),
}

pub fn ring_combine(kind: RingOp, p: &RingElement, q: RingOperand<'_>) -> Result<RingElement> {
    let q = match q {
        RingOperand::Element(q) => q.clone(),
        RingOperand::Integer(k) => {
            if kind == RingOp::Multiply {
                return Ok(p.scale(k));
            }
            RingElement::one(p.group()).scale(k)
        }
    };
    match kind {
        RingOp::Add => p.add(&q),
        RingOp::Subtract => p.sub(&q),
        RingOp::Multiply => p.mul(&q),
    }
}

/// `∂w/∂x_i` in `Z(F)`.
pub fn fox_derive(w: &ReducedWord, i: usize) -> Result<RingElement> {
    let free = Group::Free(w.rank());
    if i == 0 || i > w.rank() {
        return Err(Error::input(format!(
            "generator index {i} out of range for rank {}",
            w.rank()
        )));
    }
    let i = i as i32;
    let mut out = RingElement::zero(&free);
    let mut prefix = ReducedWord::empty(w.rank());
    for &x in w.letters() {
        if x == i {
            out.add_term(Element::Word(prefix.clone()), 1);
        }
        prefix = prefix.push(x);
        if x == -i {
            out.add_term(Element::Word(prefix.clone()), -1);
        }
    }
    Ok(out)
}

/// Linear extension of [`fox_derive`] to `Z(F)`.
pub fn fox_derive_ring(a: &RingElement, i: usize) -> Result<RingElement> {
    let Group::Free(rank) = a.group() else {
        return Err(Error::input("Fox derivatives are taken in the free group ring"));
    };
    let mut out = RingElement::zero(&Group::Free(*rank));
    for (g, c) in a.terms() {
        let w = g.as_word().expect("free group ring keys are words");
        let d = fox_derive(&ReducedWord::reduce(*rank, w.letters())?, i)?;
        out = out.add(&d.scale(c))?;
    }
    Ok(out)
}

/// `∂*w/∂x_i`: the Fox derivative pushed into `Z(target)` along
/// `x_j ↦ x_j`. `target` must be a quotient of `F_r` of the same rank.
pub fn fox_star(w: &ReducedWord, i: usize, target: &Group) -> Result<RingElement> {
    let rank = target
        .word_rank()
        .ok_or_else(|| Error::input(format!("{target} is not a quotient of a free group")))?;
    if rank != w.rank() {
        return Err(Error::input(format!(
            "word of rank {} cannot be pushed into {target}",
            w.rank()
        )));
    }
    if i == 0 || i > rank {
        return Err(Error::input(format!("generator index {i} out of range for rank {rank}")));
    }
    let gens = target.positive_generators()?;
    let gens_inv: Vec<Element> = gens.iter().map(|g| target.inv(g)).collect::<Result<_>>()?;
    let i = i as i32;
    let mut out = RingElement::zero(target);
    let mut prefix = target.identity();
    for &x in w.letters() {
        let idx = x.unsigned_abs() as usize - 1;
        if x == i {
            out.add_term(prefix.clone(), 1);
        }
        let step = if x > 0 { &gens[idx] } else { &gens_inv[idx] };
        prefix = target.mul(&prefix, step)?;
        if x == -i {
            out.add_term(prefix.clone(), -1);
        }
    }
    Ok(out)
}

/// The natural map `source → target` between quotients of the same free
/// group (e.g. `S_{r,d+1} → S_{r,d}` or `F → Z^r`).
pub fn quotient_map(source: &Group, target: &Group, e: &Element) -> Result<Element> {
    let w = source
        .word_for(e)
        .ok_or_else(|| Error::input(format!("{source} elements carry no word representative")))?;
    target.project_word(&w)
}

/// Writes `a ∈ ker(ᾱ*)` as `Σ_j r_j (h_j - 1)` with every `h_j` in the
/// kernel of `ᾱ : source → quotient`. Terms are grouped by coset; within a
/// coset a negative-coefficient term `x` serves as base point and each other
/// term `g = x h` contributes `β_g` copies of `x (h - 1)` (or, when
/// `β_g < 0`, `|β_g|` copies of `g (h⁻¹ - 1)`).
pub fn kernel_decompose(a: &RingElement, quotient: &Group) -> Result<Vec<(Element, Element)>> {
    let source = a.group().clone();
    let mut cosets: BTreeMap<Element, Vec<(Element, i64)>> = BTreeMap::new();
    for (g, c) in a.terms() {
        cosets
            .entry(quotient_map(&source, quotient, g)?)
            .or_default()
            .push((g.clone(), c));
    }
    for (image, members) in &cosets {
        let total: i64 = members.iter().map(|(_, c)| c).sum();
        if total != 0 {
            return Err(Error::input(format!(
                "element is not in the kernel: coefficient {total} at {}",
                literal::format_element(quotient, image)
            )));
        }
    }
    let mut pairs = Vec::new();
    for members in cosets.values() {
        let (base_point, _) = members
            .iter()
            .filter(|(_, c)| *c < 0)
            .min_by(|a, b| a.0.cmp(&b.0))
            .expect("a coset with zero coefficient sum has a negative term");
        let base_inv = source.inv(base_point)?;
        for (g, c) in members {
            if g == base_point {
                continue;
            }
            let h = source.mul(&base_inv, g)?;
            let (r, h) = if *c > 0 {
                (base_point.clone(), h)
            } else {
                (g.clone(), source.inv(&h)?)
            };
            for _ in 0..c.unsigned_abs() {
                pairs.push((r.clone(), h.clone()));
            }
        }
    }
    Ok(pairs)
}

/// `Σ_j r_j (h_j - 1)`.
pub fn recombine(group: &Group, pairs: &[(Element, Element)]) -> Result<RingElement> {
    let mut out = RingElement::zero(group);
    for (r, h) in pairs {
        out.add_term(group.mul(r, h)?, 1);
        out.add_term(r.clone(), -1);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(text: &str) -> ReducedWord {
        ReducedWord::parse(2, text).unwrap()
    }

    fn free_el(text: &str) -> Element {
        Element::Word(word(text))
    }

    fn ring(terms: &[(&str, i64)]) -> RingElement {
        RingElement::from_terms(&Group::Free(2), terms.iter().map(|(w, c)| (free_el(w), *c))).unwrap()
    }

    #[test]
    fn ring_arithmetic() {
        let f2 = Group::Free(2);
        let p = ring(&[("x1", 2), ("X2", -1)]);
        assert_eq!(ring_combine(RingOp::Add, &p, RingOperand::Integer(0)).unwrap(), p);
        let g = ring(&[("x1 x2", 1)]);
        let g_inv = ring(&[("X2 X1", 1)]);
        assert_eq!(g.mul(&g_inv).unwrap(), RingElement::one(&f2));
        // (1 - g)(1 + g) = 1 - g²
        let one = RingElement::one(&f2);
        let lhs = one.sub(&g).unwrap().mul(&one.add(&g).unwrap()).unwrap();
        assert_eq!(lhs, ring(&[("e", 1), ("x1 x2 x1 x2", -1)]));
        assert!(p.add(&RingElement::zero(&Group::FreeAbelian(2))).is_err());
    }

    #[test]
    fn augmentation_examples() {
        assert_eq!(ring(&[("x1", 1)]).augmentation(), 1);
        assert_eq!(ring(&[("x1", 3), ("x2 x2", -2)]).augmentation(), 1);
        assert_eq!(ring(&[("x1 X2 x1", 1), ("e", -1)]).augmentation(), 0);
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(fox_derive(&word("x1"), 1).unwrap(), ring(&[("e", 1)]));
        assert_eq!(fox_derive(&word("x1 x2"), 2).unwrap(), ring(&[("x1", 1)]));
        assert_eq!(fox_derive(&word("X1"), 1).unwrap(), ring(&[("X1", -1)]));
        assert!(fox_derive(&word("x1"), 3).is_err());
    }

    #[test]
    fn fox_star_examples() {
        let z2 = Group::FreeAbelian(2);
        let v = |a, b| Element::Vector(vec![a, b]);
        // [x1,x2] = x1 x2 X1 X2; ∂/∂x1 = 1 - x1 x2 X1 ↦ 1 - α(x2).
        let comm = ReducedWord::commutator(&word("x1"), &word("x2"));
        let d1 = fox_star(&comm, 1, &z2).unwrap();
        assert_eq!(d1, RingElement::from_terms(&z2, [(v(0, 0), 1), (v(0, 1), -1)]).unwrap());
        let d2 = fox_star(&comm, 2, &z2).unwrap();
        assert_eq!(d2, RingElement::from_terms(&z2, [(v(1, 0), 1), (v(0, 0), -1)]).unwrap());

        let z1 = Group::FreeAbelian(1);
        let w = ReducedWord::parse(1, "x1 x1 x1 x1").unwrap();
        let expected = RingElement::from_terms(&z1, (0..4).map(|k| (Element::Vector(vec![k]), 1))).unwrap();
        assert_eq!(fox_star(&w, 1, &z1).unwrap(), expected);
        assert!(fox_star(&ReducedWord::empty(2), 1, &z2).unwrap().is_zero());
        assert!(fox_star(&word("x1"), 1, &Group::FreeAbelian(3)).is_err());
    }

    #[test]
    fn kernel_decomposition_examples() {
        let s3 = Group::free_solvable(2, 2);
        let s2 = Group::FreeAbelian(2);
        let el = |t: &str| s3.project_word(&word(t)).unwrap();
        let w = el("x1 x2 X1 X2");
        let a = RingElement::from_terms(&s3, [(w.clone(), 1), (s3.identity(), -1)]).unwrap();
        assert_eq!(kernel_decompose(&a, &s2).unwrap(), vec![(s3.identity(), w.clone())]);

        let g = el("x2 x2 x1");
        let ga = a.left_mul(&g).unwrap();
        assert_eq!(kernel_decompose(&ga, &s2).unwrap(), vec![(g, w)]);

        let not_kernel = RingElement::monomial(&s3, el("x1"), 1);
        assert!(matches!(kernel_decompose(&not_kernel, &s2), Err(Error::Input(_))));
    }

    #[test]
    fn text_form() {
        let p = ring(&[("x2", -1), ("e", 1)]);
        assert_eq!(p.to_string(), "1·e -1·x2");
        assert_eq!(RingElement::zero(&Group::Free(2)).to_string(), "0");
    }
}
