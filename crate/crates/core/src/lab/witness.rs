//! Families of conjugate pairs whose conjugators are provably long.

use std::collections::BTreeMap;

use crate::conjugacy::{self, verify_conjugator};
use crate::error::{Error, Result};
use crate::group::{Element, Group};
use crate::lab::distortion::measure_distortion;
use crate::lab::search::min_conjugator;
use crate::metric::{self, Caps};
use crate::wreath::{self, FinSuppMap, WreathElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyTag {
    /// Two lamps pushed apart along a distorted cyclic subgroup.
    Distorted,
    /// A diagonal of lamps in `Z²` forcing a triangular conjugator.
    Triangle,
    /// Pure cursor pairs `(1, b)`, `(1, c)`.
    BasePair,
}

impl FamilyTag {
    pub fn tag(self) -> &'static str {
        match self {
            FamilyTag::Distorted => "L111",
            FamilyTag::Triangle => "T112",
            FamilyTag::BasePair => "P19",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessFamily {
    pub tag: FamilyTag,
    pub n: u64,
    pub group: Group,
    pub u: Element,
    pub v: Element,
    pub conjugator: Element,
    /// Every conjugator of `u` and `v` has at least this length.
    pub lower_bound: u64,
    /// `(lower, upper)` bracket for the family's size measure.
    pub size_bounds: (u64, u64),
    /// A second upper bracket when the construction states two.
    pub alt_upper: Option<u64>,
}

fn hypothesis(msg: &str) -> Error {
    Error::input(format!("hypothesis violated: {msg}"))
}

fn lamps(top: &Group, base: &Group, entries: Vec<(Element, Element)>) -> Result<FinSuppMap> {
    Ok(WreathElement::from_entries(top, base, entries, base.identity())?.lamps)
}

fn check_generator(top: &Group, a: &Element) -> Result<()> {
    top.check(a)?;
    if !top.generators().contains(a) {
        return Err(hypothesis("a must be one of the generators of A"));
    }
    Ok(())
}

/// `y` commutes with `x` and `y² ∉ ⟨x⟩`.
fn centralizer_witness(base: &Group, x: &Element, y: &Element) -> Result<bool> {
    if !base.commutes(x, y)? {
        return Ok(false);
    }
    let y2 = base.mul(y, y)?;
    Ok(metric::cyclic_power_solve(base, x, &y2, u64::MAX)?.is_none())
}

/// `min{|y| : y ∈ Z_B(x), y² ∉ ⟨x⟩}`, searched up to `radius`.
pub fn centralizer_length(base: &Group, x: &Element, radius: u64, caps: &Caps) -> Result<Option<u64>> {
    let ball = metric::bfs_ball(base, radius as usize, caps)?;
    for (y, d) in ball.iter() {
        if centralizer_witness(base, x, y)? {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

/// `u_n = (f_n, x)`, `v_n = (g_n, x)` with `Supp f_n = {e, y}` and
/// `Supp g_n = {x^{-δ}, x^δ y}`, `δ = δ⟨x⟩(n)`. Every conjugator has length
/// at least `4δ`.
pub fn witness_distorted(
    top: &Group,
    base: &Group,
    x: &Element,
    y: &Element,
    a: &Element,
    n: u64,
    caps: &Caps,
) -> Result<WitnessFamily> {
    check_generator(top, a)?;
    base.check(x)?;
    base.check(y)?;
    if base.order(x)?.is_some() {
        return Err(hypothesis("x must have infinite order"));
    }
    if !centralizer_witness(base, x, y)? {
        return Err(hypothesis("y ∈ Z_B(x), y² ∉ ⟨x⟩"));
    }
    let delta = measure_distortion(base, x, n, caps)?.at(n).expect("sampled");
    let d = delta as i64;
    let e = base.identity();
    let f = lamps(top, base, vec![(e.clone(), a.clone()), (y.clone(), a.clone())])?;
    let g = lamps(
        top,
        base,
        vec![
            (base.pow(x, -d)?, a.clone()),
            (base.mul(&base.pow(x, d)?, y)?, a.clone()),
        ],
    )?;
    let a_inv = top.inv(a)?;
    let mut h_entries = Vec::new();
    for i in 0..d {
        h_entries.push((base.mul(&base.pow(x, i)?, y)?, a.clone()));
        h_entries.push((base.pow(x, -(i + 1))?, a_inv.clone()));
    }
    let h = lamps(top, base, h_entries)?;

    let group = Group::wreath(top.clone(), base.clone());
    let u = Element::wreath(WreathElement { lamps: f, cursor: x.clone() });
    let v = Element::wreath(WreathElement { lamps: g, cursor: x.clone() });
    let conjugator = Element::wreath(WreathElement { lamps: h, cursor: e });
    if !verify_conjugator(&group, &u, &v, &conjugator)? {
        return Err(Error::Internal("displayed conjugator failed verification".into()));
    }
    let y_len = metric::word_length(base, y, caps)?;
    let l_x = centralizer_length(base, x, y_len, caps)?.expect("y itself qualifies");
    let x_len = metric::word_length(base, x, caps)?;
    Ok(WitnessFamily {
        tag: FamilyTag::Distorted,
        n,
        group,
        u,
        v,
        conjugator,
        lower_bound: 4 * delta,
        size_bounds: (n, 4 * (n + l_x + 1) + 2 * x_len),
        alt_upper: Some(4 * n + 4 * l_x + 2 * x_len + 4),
    })
}

/// [`witness_distorted`] with `x = b³`, `y = b`, together with the figure
/// `⌈(4δ⟨b⟩(n) - 12)/3⌉` it certifies at size `4n + 4 + 10|b|`.
#[derive(Clone, Debug)]
pub struct PowerWitness {
    pub family: WitnessFamily,
    pub delta_b: u64,
    pub figure: u64,
    pub size: u64,
}

pub fn witness_power(top: &Group, base: &Group, b: &Element, a: &Element, n: u64, caps: &Caps) -> Result<PowerWitness> {
    let x = base.pow(b, 3)?;
    if !centralizer_witness(base, &x, b)? {
        return Err(hypothesis("b ∈ Z_B(b³), b² ∉ ⟨b³⟩"));
    }
    let family = witness_distorted(top, base, &x, b, a, n, caps)?;
    let delta_b = measure_distortion(base, b, n, caps)?.at(n).expect("sampled");
    let figure = (4 * delta_b).saturating_sub(12).div_ceil(3);
    let size = 4 * n + 4 + 10 * metric::word_length(base, b, caps)?;
    Ok(PowerWitness { family, delta_b, figure, size })
}

/// `u_n = (f_n, y)`, `v_n = (g_n, y)` with `Supp f_n = {x^i}` and
/// `Supp g_n = {x^i y^i}` for `|i| <= n`; the conjugator with trivial
/// cursor is solved for coset by coset.
pub fn witness_triangle(
    top: &Group,
    base: &Group,
    x: &Element,
    y: &Element,
    a: &Element,
    n: u64,
    caps: &Caps,
) -> Result<WitnessFamily> {
    check_generator(top, a)?;
    base.check(x)?;
    base.check(y)?;
    if !base.commutes(x, y)? || base.order(y)?.is_some() {
        return Err(hypothesis("x and y must generate a copy of Z²"));
    }
    for k in 1..=(2 * n as i64).max(1) {
        if metric::cyclic_power_solve(base, y, &base.pow(x, k)?, u64::MAX)?.is_some() {
            return Err(hypothesis("x and y must generate a copy of Z²"));
        }
    }
    let ni = n as i64;
    let mut f_entries = Vec::new();
    let mut g_entries = Vec::new();
    for i in -ni..=ni {
        let xi = base.pow(x, i)?;
        g_entries.push((base.mul(&xi, &base.pow(y, i)?)?, a.clone()));
        f_entries.push((xi, a.clone()));
    }
    let f = lamps(top, base, f_entries)?;
    let g = lamps(top, base, g_entries)?;
    let group = Group::wreath(top.clone(), base.clone());
    let h = structured_h(top, base, &f, &g, y, &base.identity(), caps)?;
    let u = Element::wreath(WreathElement { lamps: f, cursor: y.clone() });
    let v = Element::wreath(WreathElement { lamps: g, cursor: y.clone() });
    let conjugator = Element::wreath(WreathElement { lamps: h, cursor: base.identity() });
    if !verify_conjugator(&group, &u, &v, &conjugator)? {
        return Err(Error::Internal("solved conjugator failed verification".into()));
    }
    let (x_len, y_len) = (metric::word_length(base, x, caps)?, metric::word_length(base, y, caps)?);
    let xy_len = metric::word_length(base, &base.mul(x, y)?, caps)?;
    Ok(WitnessFamily {
        tag: FamilyTag::Triangle,
        n,
        group,
        u,
        v,
        conjugator,
        lower_bound: n * n + n,
        size_bounds: (4 * n + 2, 4 * n * x_len + y_len + 2 * n + 1),
        alt_upper: Some(4 * n * xy_len + y_len + 2 * n + 1),
    })
}

fn structured_h(
    top: &Group,
    base: &Group,
    f: &FinSuppMap,
    g: &FinSuppMap,
    b: &Element,
    z: &Element,
    caps: &Caps,
) -> Result<FinSuppMap> {
    let mut points: Vec<Element> = f.keys().cloned().collect();
    for s in g.keys() {
        points.push(base.mul(z, s)?);
    }
    let partition = conjugacy::coset_partition(&points, b, base, caps)?;
    conjugacy::build_conjugator_h(top, base, f, g, z, &partition, None)
}

/// The conjugator `(h, y^k)` of a triangle witness and a certified lower
/// bound on its length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuredConjugator {
    pub k: i64,
    pub conjugator: Element,
    pub support: u64,
    /// Exact length when `exact`, otherwise a lower bound.
    pub length: u64,
    pub exact: bool,
}

/// Builds `(h, y^k)` for every `k` in `ks` and certifies its length.
pub fn triangle_structured(family: &WitnessFamily, ks: impl IntoIterator<Item = i64>, caps: &Caps) -> Result<Vec<StructuredConjugator>> {
    let Group::Wreath { top, base } = &family.group else {
        return Err(Error::input("triangle witness must live in a wreath product"));
    };
    let (uw, vw) = (family.u.as_wreath().unwrap(), family.v.as_wreath().unwrap());
    let y = &uw.cursor;
    let mut out = Vec::new();
    for k in ks {
        let z = base.pow(y, k)?;
        let h = structured_h(top, base, &uw.lamps, &vw.lamps, y, &z, caps)?;
        let w = WreathElement { lamps: h, cursor: z };
        let conjugator = Element::wreath(w.clone());
        if !verify_conjugator(&family.group, &family.u, &family.v, &conjugator)? {
            return Err(Error::Internal(format!("structured conjugator for k = {k} failed verification")));
        }
        let support = w.lamps.len() as u64;
        let (length, exact) = if w.lamps.len() <= caps.visiting_points {
            (wreath::wreath_word_length(top, base, &w, caps)?, true)
        } else {
            (wreath::wreath_length_lower_bound(top, base, &w, caps)?, false)
        };
        out.push(StructuredConjugator { k, conjugator, support, length, exact });
    }
    Ok(out)
}

/// `u = (1, b)`, `v = (1, c)` for conjugate `b`, `c` of infinite order. The
/// recorded conjugator is `(1, z)` for a shortest `z` with `bz = zc`, and
/// `lower_bound = |z|`.
pub fn witness_base_pair(top: &Group, base: &Group, b: &Element, c: &Element, cap: u64, caps: &Caps) -> Result<WitnessFamily> {
    base.check(b)?;
    base.check(c)?;
    if base.order(b)?.is_some() {
        return Err(hypothesis("b must have infinite order"));
    }
    if conjugacy::base_conjugator(base, b, c, caps)?.is_none() {
        return Err(Error::input("b and c are not conjugate"));
    }
    let Some((z, len)) = min_conjugator(base, b, c, cap, caps)? else {
        return Err(Error::resource("bfs_radius", cap as usize, "no conjugator of b and c within the search radius"));
    };
    let group = Group::wreath(top.clone(), base.clone());
    let u = Element::wreath(WreathElement::from_cursor(b.clone()));
    let v = Element::wreath(WreathElement::from_cursor(c.clone()));
    let conjugator = Element::wreath(WreathElement::from_cursor(z));
    debug_assert!(verify_conjugator(&group, &u, &v, &conjugator)?);
    let n = metric::word_length(base, b, caps)? + metric::word_length(base, c, caps)?;
    Ok(WitnessFamily {
        tag: FamilyTag::BasePair,
        n,
        group,
        u,
        v,
        conjugator,
        lower_bound: len,
        size_bounds: (n, n),
        alt_upper: None,
    })
}

/// Support sizes of `h` per `y`-coset, keyed by the coset's `x`-index; used
/// to display the triangle.
pub fn support_profile(family: &WitnessFamily, x: &Element) -> Result<BTreeMap<i64, usize>> {
    let Group::Wreath { base, .. } = &family.group else {
        return Err(Error::input("not a wreath witness"));
    };
    let w = family.conjugator.as_wreath().unwrap();
    let y = &family.u.as_wreath().unwrap().cursor;
    let mut out = BTreeMap::new();
    for at in w.lamps.keys() {
        let mut found = None;
        for i in -(family.n as i64)..=(family.n as i64) {
            let q = base.mul(at, &base.pow(x, -i)?)?;
            if metric::cyclic_power_solve(base, y, &q, u64::MAX)?.is_some() {
                found = Some(i);
                break;
            }
        }
        *out.entry(found.unwrap_or(i64::MIN)).or_insert(0) += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::literal::parse_group;

    fn v(a: i64, b: i64) -> Element {
        Element::Vector(vec![a, b])
    }

    #[test]
    fn distorted_family_in_z2() {
        let caps = Caps::default();
        let (top, base) = (Group::Cyclic(2), Group::FreeAbelian(2));
        let a = Element::Residue(1);
        let fam = witness_distorted(&top, &base, &v(1, 0), &v(0, 1), &a, 2, &caps).unwrap();
        let g = &fam.v.as_wreath().unwrap().lamps;
        assert_eq!(g.keys().cloned().collect::<Vec<_>>(), vec![v(-2, 0), v(2, 1)]);
        assert_eq!(fam.lower_bound, 8);
        assert_eq!(fam.size_bounds.1, fam.alt_upper.unwrap());
        let zero = witness_distorted(&top, &base, &v(1, 0), &v(0, 1), &a, 0, &caps).unwrap();
        assert_eq!(zero.u, zero.v);
        assert!(witness_distorted(&top, &base, &v(1, 0), &v(2, 0), &a, 1, &caps).is_err());
    }

    #[test]
    fn triangle_family_small() {
        let caps = Caps::default();
        let (top, base) = (Group::Cyclic(2), Group::FreeAbelian(2));
        let fam = witness_triangle(&top, &base, &v(1, 0), &v(0, 1), &Element::Residue(1), 1, &caps).unwrap();
        assert!(!fam.conjugator.as_wreath().unwrap().lamps.is_empty());
        let structured = triangle_structured(&fam, -2..=2, &caps).unwrap();
        assert!(structured.iter().all(|s| s.length >= 2));
        let fam2 = witness_triangle(&top, &base, &v(1, 0), &v(0, 1), &Element::Residue(1), 2, &caps).unwrap();
        for s in triangle_structured(&fam2, -3..=3, &caps).unwrap() {
            assert!(s.support >= 3, "k = {}", s.k);
        }
    }

    #[test]
    fn base_pair_family() {
        let caps = Caps::default();
        let (top, base) = (Group::Cyclic(2), Group::FreeAbelian(2));
        let fam = witness_base_pair(&top, &base, &v(1, 0), &v(1, 0), 4, &caps).unwrap();
        assert_eq!(fam.lower_bound, 0);
        assert!(witness_base_pair(&top, &base, &v(1, 0), &v(0, 1), 4, &caps).is_err());
        let w = parse_group("W:Z2~Z^2").unwrap();
        assert_eq!(fam.group, w);
    }

    #[test]
    fn power_wrapper() {
        let caps = Caps::default();
        let (top, base) = (Group::Cyclic(2), Group::FreeAbelian(1));
        let pw = witness_power(&top, &base, &Element::Vector(vec![1]), &Element::Residue(1), 9, &caps).unwrap();
        assert_eq!(pw.delta_b, 9);
        assert_eq!(pw.figure, 8);
        assert!(pw.family.lower_bound >= pw.figure);
    }
}
