//! Elements of restricted wreath products `A ≀ B` and their word metric.
//!
//! An element is a pair `(f, b)` where `f : B → A` has finite support.
//! Multiplication is `(f, b)(g, c) = (f g^b, bc)` with `g^b(x) = g(b⁻¹x)`.
//! With the generating set `{(1, s)} ∪ {(δ_e·t, e)}` the word length is
//! `K(Supp f, b) + Σ |f(x)|`, where `K` is the shortest walk from `e` to `b`
//! through every support point.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::group::{Element, Group};
use crate::metric::{self, Caps};

/// Finitely supported map `B → A`. Keys are canonical `B`-elements and no
/// value is the identity of `A`.
pub type FinSuppMap = BTreeMap<Element, Element>;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct WreathElement {
    pub lamps: FinSuppMap,
    pub cursor: Element,
}

impl WreathElement {
    pub fn identity(base: &Group) -> Self {
        WreathElement {
            lamps: BTreeMap::new(),
            cursor: base.identity(),
        }
    }

    /// `(1, b)`.
    pub fn from_cursor(b: Element) -> Self {
        WreathElement {
            lamps: BTreeMap::new(),
            cursor: b,
        }
    }

    /// `(δ_e·t, e)`.
    pub fn lamp_at_identity(base: &Group, t: Element) -> Self {
        WreathElement {
            lamps: BTreeMap::from([(base.identity(), t)]),
            cursor: base.identity(),
        }
    }

    /// Builds an element from raw entries, dropping identity values.
    /// Repeated keys multiply in the given order.
    pub fn from_entries(
        top: &Group,
        base: &Group,
        entries: impl IntoIterator<Item = (Element, Element)>,
        cursor: Element,
    ) -> Result<Self> {
        base.check(&cursor)?;
        let mut lamps = BTreeMap::new();
        for (at, val) in entries {
            base.check(&at)?;
            top.check(&val)?;
            set_product(top, &mut lamps, at, &val)?;
        }
        Ok(WreathElement { lamps, cursor })
    }

    pub fn support(&self) -> impl Iterator<Item = &Element> {
        self.lamps.keys()
    }

    pub fn value_at(&self, top: &Group, at: &Element) -> Element {
        self.lamps.get(at).cloned().unwrap_or_else(|| top.identity())
    }
}

/// `map[at] <- map[at] * val`, removing the entry when it becomes trivial.
pub(crate) fn set_product(top: &Group, map: &mut FinSuppMap, at: Element, val: &Element) -> Result<()> {
    let current = map.remove(&at).unwrap_or_else(|| top.identity());
    let updated = top.mul(&current, val)?;
    if !top.is_identity(&updated) {
        map.insert(at, updated);
    }
    Ok(())
}

pub fn wreath_mul(top: &Group, base: &Group, u: &WreathElement, v: &WreathElement) -> Result<WreathElement> {
    let mut lamps = u.lamps.clone();
    for (at, val) in &v.lamps {
        let shifted = base.mul(&u.cursor, at)?;
        set_product(top, &mut lamps, shifted, val)?;
    }
    Ok(WreathElement {
        lamps,
        cursor: base.mul(&u.cursor, &v.cursor)?,
    })
}

/// `(f, b)⁻¹ = ((f⁻¹)^{b⁻¹}, b⁻¹)`.
pub fn wreath_inv(top: &Group, base: &Group, u: &WreathElement) -> Result<WreathElement> {
    let b_inv = base.inv(&u.cursor)?;
    let mut lamps = BTreeMap::new();
    for (at, val) in &u.lamps {
        lamps.insert(base.mul(&b_inv, at)?, top.inv(val)?);
    }
    Ok(WreathElement { lamps, cursor: b_inv })
}

/// Length of the shortest walk in `Cay(B)` from `e` to `endpoint` that
/// visits every point of `points`. Exact; exponential in the number of
/// points.
pub fn visiting_path_length(points: &[Element], endpoint: &Element, base: &Group, caps: &Caps) -> Result<u64> {
    let mut pts: Vec<&Element> = points.iter().collect();
    pts.sort();
    pts.dedup();
    let m = pts.len();
    if m > caps.visiting_points {
        return Err(Error::resource(
            "visiting_points",
            caps.visiting_points,
            format!("visiting path through {m} points"),
        ));
    }
    if m == 0 {
        return metric::word_length(base, endpoint, caps);
    }
    let from_start: Vec<u64> = pts
        .iter()
        .map(|p| metric::word_length(base, p, caps))
        .collect::<Result<_>>()?;
    let to_end: Vec<u64> = pts
        .iter()
        .map(|p| metric::distance(base, p, endpoint, caps))
        .collect::<Result<_>>()?;
    let mut between = vec![vec![0u64; m]; m];
    for i in 0..m {
        for j in (i + 1)..m {
            let d = metric::distance(base, pts[i], pts[j], caps)?;
            between[i][j] = d;
            between[j][i] = d;
        }
    }

    // best[mask][last]: shortest walk from e through exactly the points in
    // `mask`, ending at point `last`.
    let full = (1usize << m) - 1;
    let mut best = vec![u64::MAX; (full + 1) * m];
    for i in 0..m {
        best[(1 << i) * m + i] = from_start[i];
    }
    for mask in 1..=full {
        for last in 0..m {
            let cur = best[mask * m + last];
            if cur == u64::MAX || mask & (1 << last) == 0 {
                continue;
            }
            for next in 0..m {
                if mask & (1 << next) != 0 {
                    continue;
                }
                let slot = &mut best[(mask | (1 << next)) * m + next];
                let cand = cur + between[last][next];
                if cand < *slot {
                    *slot = cand;
                }
            }
        }
    }
    Ok((0..m)
        .map(|last| best[full * m + last] + to_end[last])
        .min()
        .expect("at least one point"))
}

/// `|(f, b)| = K(Supp f, b) + Σ_x |f(x)|_A`.
pub fn wreath_word_length(top: &Group, base: &Group, u: &WreathElement, caps: &Caps) -> Result<u64> {
    let support: Vec<Element> = u.lamps.keys().cloned().collect();
    let walk = visiting_path_length(&support, &u.cursor, base, caps)?;
    let mut lamp_cost = 0;
    for val in u.lamps.values() {
        lamp_cost += metric::word_length(top, val, caps)?;
    }
    Ok(walk + lamp_cost)
}

/// Cheap lower bound on `|(f, b)|` that needs no visiting-path search:
/// `Σ|f(x)|` plus the longest detour `|p| + d(p, b)` over support points.
pub fn wreath_length_lower_bound(top: &Group, base: &Group, u: &WreathElement, caps: &Caps) -> Result<u64> {
    let mut detour = metric::word_length(base, &u.cursor, caps)?;
    let mut lamp_cost = 0;
    for (at, val) in &u.lamps {
        lamp_cost += metric::word_length(top, val, caps)?;
        let d = metric::word_length(base, at, caps)? + metric::distance(base, at, &u.cursor, caps)?;
        detour = detour.max(d);
    }
    Ok(detour + lamp_cost)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(k: i64) -> Element {
        Element::Vector(vec![k])
    }

    fn lamplighter() -> (Group, Group) {
        (Group::Cyclic(2), Group::FreeAbelian(1))
    }

    fn lamps_on(points: &[i64], cursor: i64) -> WreathElement {
        let (top, base) = lamplighter();
        WreathElement::from_entries(
            &top,
            &base,
            points.iter().map(|&p| (z(p), Element::Residue(1))),
            z(cursor),
        )
        .unwrap()
    }

    #[test]
    fn product_by_hand() {
        let (top, base) = lamplighter();
        let u = lamps_on(&[0], 1);
        // (δ0, 1)(δ0, 1) = (δ0 + δ1, 2)
        assert_eq!(wreath_mul(&top, &base, &u, &u).unwrap(), lamps_on(&[0, 1], 2));
        let id = WreathElement::identity(&base);
        assert_eq!(wreath_mul(&top, &base, &id, &u).unwrap(), u);
        let inv = wreath_inv(&top, &base, &u).unwrap();
        assert_eq!(wreath_mul(&top, &base, &u, &inv).unwrap(), id);
    }

    #[test]
    fn inverses_by_hand() {
        let (top, base) = lamplighter();
        let plain = WreathElement::from_cursor(z(3));
        assert_eq!(wreath_inv(&top, &base, &plain).unwrap(), WreathElement::from_cursor(z(-3)));
        let lamp = lamps_on(&[0], 0);
        assert_eq!(wreath_inv(&top, &base, &lamp).unwrap(), lamp);
        // (δ0, 1)⁻¹ = (δ_{-1}, -1)
        assert_eq!(wreath_inv(&top, &base, &lamps_on(&[0], 1)).unwrap(), lamps_on(&[-1], -1));
    }

    #[test]
    fn visiting_paths() {
        let caps = Caps::default();
        let z1 = Group::FreeAbelian(1);
        assert_eq!(visiting_path_length(&[], &z(-4), &z1, &caps).unwrap(), 4);
        assert_eq!(visiting_path_length(&[z(1)], &z(0), &z1, &caps).unwrap(), 2);
        let z2 = Group::FreeAbelian(2);
        let p = |a, b| Element::Vector(vec![a, b]);
        // Both visit orders: e -> (1,0) -> (0,1) -> e costs 1 + 2 + 1.
        assert_eq!(
            visiting_path_length(&[p(1, 0), p(0, 1)], &p(0, 0), &z2, &caps).unwrap(),
            4
        );
    }

    #[test]
    fn visiting_cap() {
        let caps = Caps {
            visiting_points: 2,
            ..Caps::default()
        };
        let z1 = Group::FreeAbelian(1);
        let err = visiting_path_length(&[z(1), z(2), z(3)], &z(0), &z1, &caps).unwrap_err();
        assert!(matches!(err, Error::Resource { cap: "visiting_points", .. }));
    }

    #[test]
    fn word_lengths() {
        let caps = Caps::default();
        let (top, base) = lamplighter();
        assert_eq!(wreath_word_length(&top, &base, &lamps_on(&[1], 0), &caps).unwrap(), 3);
        assert_eq!(
            wreath_word_length(&top, &base, &WreathElement::from_cursor(z(-2)), &caps).unwrap(),
            2
        );
        let base2 = Group::FreeAbelian(2);
        let p = |a, b| Element::Vector(vec![a, b]);
        let u = WreathElement::from_entries(
            &top,
            &base2,
            [(p(1, 0), Element::Residue(1)), (p(0, 1), Element::Residue(1))],
            p(0, 0),
        )
        .unwrap();
        assert_eq!(wreath_word_length(&top, &base2, &u, &caps).unwrap(), 6);
    }

    #[test]
    fn identity_entries_are_dropped() {
        let (top, base) = lamplighter();
        let u = WreathElement::from_entries(
            &top,
            &base,
            [(z(2), Element::Residue(1)), (z(2), Element::Residue(1)), (z(3), Element::Residue(0))],
            z(0),
        )
        .unwrap();
        assert!(u.lamps.is_empty());
    }
}
