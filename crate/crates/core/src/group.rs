//! A uniform interface over the built-in groups.
//!
//! Every element is held in canonical form, so structural equality of
//! [`Element`] values is equality in the group.

use std::fmt;

use crate::error::{Error, Result};
use crate::magnus::SolvableElement;
use crate::perm3::Perm3;
use crate::word::ReducedWord;
use crate::wreath::{self, WreathElement};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Group {
    /// Free group of the given rank; elements are reduced words.
    Free(usize),
    /// `Z^r` with the standard basis as generators.
    FreeAbelian(usize),
    /// `Z_q` generated by `1`.
    Cyclic(u64),
    /// Symmetric group on three points, generated by `(1 2)` and `(2 3)`.
    Perm3,
    /// `S_{r,d} = F / F^{(d)}`.
    FreeSolvable { rank: usize, depth: usize },
    /// Restricted wreath product `top ≀ base`.
    Wreath { top: Box<Group>, base: Box<Group> },
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Element {
    Word(ReducedWord),
    Vector(Vec<i64>),
    Residue(u64),
    Perm(Perm3),
    Solvable(Box<SolvableElement>),
    Wreath(Box<WreathElement>),
}

impl Element {
    pub fn as_vector(&self) -> Option<&[i64]> {
        match self {
            Element::Vector(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_wreath(&self) -> Option<&WreathElement> {
        match self {
            Element::Wreath(w) => Some(w),
            _ => None,
        }
    }

    pub fn as_solvable(&self) -> Option<&SolvableElement> {
        match self {
            Element::Solvable(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_word(&self) -> Option<&ReducedWord> {
        match self {
            Element::Word(w) => Some(w),
            _ => None,
        }
    }

    pub fn wreath(w: WreathElement) -> Element {
        Element::Wreath(Box::new(w))
    }

    pub fn solvable(s: SolvableElement) -> Element {
        Element::Solvable(Box::new(s))
    }
}

fn mismatch(group: &Group, what: &Element) -> Error {
    Error::input(format!("element {what:?} does not belong to {group}"))
}

impl Group {
    pub fn wreath(top: Group, base: Group) -> Group {
        Group::Wreath {
            top: Box::new(top),
            base: Box::new(base),
        }
    }

    pub fn free_solvable(rank: usize, depth: usize) -> Group {
        Group::FreeSolvable { rank, depth }
    }

    /// Rank of the free group this group is a quotient of, for the groups
    /// presented as quotients of `F_r`.
    pub fn word_rank(&self) -> Option<usize> {
        match self {
            Group::Free(r) | Group::FreeAbelian(r) => Some(*r),
            Group::FreeSolvable { rank, .. } => Some(*rank),
            _ => None,
        }
    }

    pub fn identity(&self) -> Element {
        match self {
            Group::Free(r) => Element::Word(ReducedWord::empty(*r)),
            Group::FreeAbelian(r) => Element::Vector(vec![0; *r]),
            Group::Cyclic(_) => Element::Residue(0),
            Group::Perm3 => Element::Perm(Perm3::IDENTITY),
            Group::FreeSolvable { rank, depth } => {
                Element::solvable(SolvableElement::identity(*rank, *depth))
            }
            Group::Wreath { base, .. } => Element::wreath(WreathElement::identity(base)),
        }
    }

    pub fn is_identity(&self, e: &Element) -> bool {
        *e == self.identity()
    }

    /// Checks that `e` is a well-formed element of this group.
    pub fn check(&self, e: &Element) -> Result<()> {
        let ok = match (self, e) {
            (Group::Free(r), Element::Word(w)) => w.rank() <= *r,
            (Group::FreeAbelian(r), Element::Vector(v)) => v.len() == *r,
            (Group::Cyclic(q), Element::Residue(x)) => x < q,
            (Group::Perm3, Element::Perm(_)) => true,
            (Group::FreeSolvable { rank, depth }, Element::Solvable(s)) => {
                s.rank() == *rank && s.depth() == *depth
            }
            (Group::Wreath { .. }, Element::Wreath(_)) => true,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(mismatch(self, e))
        }
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Result<Element> {
        match (self, a, b) {
            (Group::Free(_), Element::Word(x), Element::Word(y)) => Ok(Element::Word(x.mul(y))),
            (Group::FreeAbelian(r), Element::Vector(x), Element::Vector(y))
                if x.len() == *r && y.len() == *r =>
            {
                Ok(Element::Vector(x.iter().zip(y).map(|(p, q)| p + q).collect()))
            }
            (Group::Cyclic(q), Element::Residue(x), Element::Residue(y)) => {
                Ok(Element::Residue((x + y) % q))
            }
            (Group::Perm3, Element::Perm(x), Element::Perm(y)) => Ok(Element::Perm(x.compose(y))),
            (Group::FreeSolvable { .. }, Element::Solvable(x), Element::Solvable(y)) => {
                self.check(a)?;
                self.check(b)?;
                Ok(Element::solvable(x.mul(y)?))
            }
            (Group::Wreath { top, base }, Element::Wreath(x), Element::Wreath(y)) => {
                Ok(Element::wreath(wreath::wreath_mul(top, base, x, y)?))
            }
            _ => Err(Error::input(format!(
                "cannot multiply {a:?} and {b:?} in {self}"
            ))),
        }
    }

    pub fn inv(&self, a: &Element) -> Result<Element> {
        match (self, a) {
            (Group::Free(_), Element::Word(x)) => Ok(Element::Word(x.inverse())),
            (Group::FreeAbelian(_), Element::Vector(x)) => {
                Ok(Element::Vector(x.iter().map(|p| -p).collect()))
            }
            (Group::Cyclic(q), Element::Residue(x)) => Ok(Element::Residue((q - x) % q)),
            (Group::Perm3, Element::Perm(x)) => Ok(Element::Perm(x.inverse())),
            (Group::FreeSolvable { .. }, Element::Solvable(x)) => {
                Ok(Element::solvable(x.inverse()?))
            }
            (Group::Wreath { top, base }, Element::Wreath(x)) => {
                Ok(Element::wreath(wreath::wreath_inv(top, base, x)?))
            }
            _ => Err(mismatch(self, a)),
        }
    }

    pub fn pow(&self, a: &Element, k: i64) -> Result<Element> {
        let base = if k < 0 { self.inv(a)? } else { a.clone() };
        let mut acc = self.identity();
        let mut sq = base;
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &sq)?;
            }
            e >>= 1;
            if e > 0 {
                sq = self.mul(&sq, &sq)?;
            }
        }
        Ok(acc)
    }

    /// `a⁻¹ b a`.
    pub fn conjugate(&self, b: &Element, a: &Element) -> Result<Element> {
        self.mul(&self.mul(&self.inv(a)?, b)?, a)
    }

    pub fn commutes(&self, a: &Element, b: &Element) -> Result<bool> {
        Ok(self.mul(a, b)? == self.mul(b, a)?)
    }

    /// The image of a free-group word under `x_i ↦ x_i`.
    pub fn project_word(&self, w: &ReducedWord) -> Result<Element> {
        let rank = self
            .word_rank()
            .ok_or_else(|| Error::input(format!("{self} is not presented on free generators")))?;
        if w.rank() > rank {
            return Err(Error::input(format!(
                "word of rank {} does not map into {self}",
                w.rank()
            )));
        }
        match self {
            Group::Free(_) => Ok(Element::Word(ReducedWord::reduce(rank, w.letters())?)),
            Group::FreeAbelian(_) => {
                let mut v = vec![0i64; rank];
                for &x in w.letters() {
                    v[x.unsigned_abs() as usize - 1] += x.signum() as i64;
                }
                Ok(Element::Vector(v))
            }
            Group::FreeSolvable { depth, .. } => {
                let w = ReducedWord::reduce(rank, w.letters())?;
                Ok(Element::solvable(SolvableElement::from_word(rank, *depth, w)?))
            }
            _ => unreachable!(),
        }
    }

    /// A word representing `e`, when the group is a quotient of a free group.
    pub fn word_for(&self, e: &Element) -> Option<ReducedWord> {
        match (self, e) {
            (Group::Free(_), Element::Word(w)) => Some(w.clone()),
            (Group::FreeAbelian(r), Element::Vector(v)) => {
                let mut raw = Vec::new();
                for (i, &c) in v.iter().enumerate() {
                    let letter = (i as i32 + 1) * c.signum() as i32;
                    raw.extend(std::iter::repeat_n(letter, c.unsigned_abs() as usize));
                }
                ReducedWord::reduce(*r, &raw).ok()
            }
            (Group::FreeSolvable { .. }, Element::Solvable(s)) => Some(s.word().clone()),
            _ => None,
        }
    }

    /// Symmetric generating set `S = X ∪ X⁻¹`, deduplicated.
    pub fn generators(&self) -> Vec<Element> {
        let mut out: Vec<Element> = Vec::new();
        let mut push = |e: Element| {
            if !out.contains(&e) {
                out.push(e);
            }
        };
        match self {
            Group::Free(r) | Group::FreeAbelian(r) | Group::FreeSolvable { rank: r, .. } => {
                for i in 1..=*r as i32 {
                    for x in [i, -i] {
                        let w = ReducedWord::reduce(*r, &[x]).expect("generator in range");
                        push(self.project_word(&w).expect("generator maps"));
                    }
                }
            }
            Group::Cyclic(q) => {
                if *q > 1 {
                    push(Element::Residue(1));
                    push(Element::Residue(q - 1));
                }
            }
            Group::Perm3 => {
                for g in Perm3::generators() {
                    push(Element::Perm(g));
                }
            }
            Group::Wreath { top, base } => {
                for s in base.generators() {
                    push(Element::wreath(WreathElement::from_cursor(s)));
                }
                for t in top.generators() {
                    push(Element::wreath(WreathElement::lamp_at_identity(base, t)));
                }
            }
        }
        out
    }

    /// The positive generators `x_1, …, x_r` for groups presented on free
    /// generators.
    pub fn positive_generators(&self) -> Result<Vec<Element>> {
        let rank = self
            .word_rank()
            .ok_or_else(|| Error::input(format!("{self} is not presented on free generators")))?;
        (1..=rank as i32)
            .map(|i| self.project_word(&ReducedWord::reduce(rank, &[i])?))
            .collect()
    }

    pub fn is_abelian(&self) -> bool {
        match self {
            Group::FreeAbelian(_) | Group::Cyclic(_) => true,
            Group::Free(r) => *r <= 1,
            Group::FreeSolvable { rank, depth } => *rank <= 1 || *depth <= 1,
            Group::Perm3 => false,
            Group::Wreath { top, base } => top.is_trivial() || base.is_trivial(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        match self {
            Group::Free(r) | Group::FreeAbelian(r) | Group::FreeSolvable { rank: r, .. } => *r == 0,
            Group::Cyclic(q) => *q <= 1,
            Group::Perm3 => false,
            Group::Wreath { top, base } => top.is_trivial() && base.is_trivial(),
        }
    }

    /// Number of elements, if finite.
    pub fn cardinality(&self) -> Option<u64> {
        match self {
            Group::Cyclic(q) => Some(*q),
            Group::Perm3 => Some(6),
            g if g.is_trivial() => Some(1),
            _ => None,
        }
    }

    /// Element order, `None` for infinite order.
    pub fn order(&self, a: &Element) -> Result<Option<u64>> {
        self.check(a)?;
        if self.is_identity(a) {
            return Ok(Some(1));
        }
        match (self, a) {
            (Group::Free(_), _) | (Group::FreeAbelian(_), _) | (Group::FreeSolvable { .. }, _) => {
                Ok(None)
            }
            (Group::Cyclic(q), Element::Residue(x)) => Ok(Some(q / gcd(*q, *x))),
            (Group::Perm3, Element::Perm(p)) => Ok(Some(p.order())),
            (Group::Wreath { top, base }, Element::Wreath(w)) => {
                let Some(n) = base.order(&w.cursor)? else {
                    return Ok(None);
                };
                let power = self.pow(a, n as i64)?;
                let lamps = &power.as_wreath().expect("wreath power").lamps;
                let mut total = 1u64;
                for value in lamps.values() {
                    match top.order(value)? {
                        Some(k) => total = lcm(total, k),
                        None => return Ok(None),
                    }
                }
                Ok(Some(n * total))
            }
            _ => Err(mismatch(self, a)),
        }
    }
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Group::Free(r) => write!(f, "F:{r}"),
            Group::FreeAbelian(r) => write!(f, "Zr:{r}"),
            Group::Cyclic(q) => write!(f, "C:{q}"),
            Group::Perm3 => write!(f, "P3"),
            Group::FreeSolvable { rank, depth } => write!(f, "S:{rank},{depth}"),
            Group::Wreath { top, base } => write!(f, "W:{}~{}", top.short_name(), base.short_name()),
        }
    }
}

impl Group {
    /// Component name inside a wreath spec, e.g. `Z2`, `Z`, `Z^2`.
    pub fn short_name(&self) -> String {
        match self {
            Group::FreeAbelian(1) => "Z".to_string(),
            Group::FreeAbelian(r) => format!("Z^{r}"),
            Group::Cyclic(q) => format!("Z{q}"),
            Group::FreeSolvable { rank, depth } => format!("S({rank},{depth})"),
            Group::Free(r) => format!("F({r})"),
            Group::Perm3 => "P3".to_string(),
            Group::Wreath { top, base } => format!("({}~{})", top.short_name(), base.short_name()),
        }
    }
}
