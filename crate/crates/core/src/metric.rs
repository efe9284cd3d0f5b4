//! Word metrics: BFS balls, word lengths and cyclic-power solving.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::group::{Element, Group};
use crate::magnus::solvable_quotient;
use crate::wreath;

/// Search limits. Exceeding any of them yields [`Error::Resource`]; searches
/// are never silently truncated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest radius any BFS ball may be grown to.
    pub bfs_radius: usize,
    /// Largest number of elements any BFS ball may hold.
    pub ball_size: usize,
    /// Largest support handled by the visiting-path dynamic program.
    pub visiting_points: usize,
    /// Radius of the kernel search used to lift wreath conjugators into a
    /// free solvable group.
    pub lift_radius: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            bfs_radius: 12,
            ball_size: 2_000_000,
            visiting_points: 12,
            lift_radius: 8,
        }
    }
}

/// A ball around the identity, grouped by exact distance.
#[derive(Clone, Debug)]
pub struct Ball {
    pub layers: Vec<Vec<Element>>,
    distances: HashMap<Element, u64>,
}

impl Ball {
    pub fn radius(&self) -> usize {
        self.layers.len().saturating_sub(1)
    }

    pub fn len(&self) -> usize {
        self.distances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.distances.is_empty()
    }

    pub fn distance(&self, e: &Element) -> Option<u64> {
        self.distances.get(e).copied()
    }

    /// Elements in increasing distance, canonical order within a layer.
    pub fn iter(&self) -> impl Iterator<Item = (&Element, u64)> {
        self.layers
            .iter()
            .enumerate()
            .flat_map(|(d, layer)| layer.iter().map(move |e| (e, d as u64)))
    }
}

/// All elements at distance at most `radius` from the identity.
///
/// Free abelian balls are enumerated in closed form and only the size cap
/// applies; elsewhere growing past `caps.bfs_radius` is an error unless the
/// group is already exhausted.
pub fn bfs_ball(group: &Group, radius: usize, caps: &Caps) -> Result<Ball> {
    let too_big = || {
        Error::resource(
            "ball_size",
            caps.ball_size,
            format!("ball of radius {radius} in {group}"),
        )
    };
    if let Group::FreeAbelian(rank) = group {
        let mut layers: Vec<Vec<Element>> = vec![Vec::new(); radius + 1];
        let mut count = 0usize;
        let mut current = vec![0i64; *rank];
        lattice_points(&mut current, 0, radius as i64, &mut |v| {
            count += 1;
            layers[l1(v) as usize].push(Element::Vector(v.to_vec()));
            count <= caps.ball_size
        });
        if count > caps.ball_size {
            return Err(too_big());
        }
        let mut distances = HashMap::with_capacity(count);
        for (d, layer) in layers.iter_mut().enumerate() {
            layer.sort();
            for e in layer.iter() {
                distances.insert(e.clone(), d as u64);
            }
        }
        return Ok(Ball { layers, distances });
    }
    let gens = group.generators();
    let id = group.identity();
    let mut distances = HashMap::from([(id.clone(), 0u64)]);
    let mut layers = vec![vec![id]];
    for d in 1..=radius {
        let mut next = Vec::new();
        for g in &layers[d - 1] {
            for s in &gens {
                let h = group.mul(g, s)?;
                if !distances.contains_key(&h) {
                    distances.insert(h.clone(), d as u64);
                    next.push(h);
                }
            }
            if distances.len() > caps.ball_size {
                return Err(too_big());
            }
        }
        if next.is_empty() {
            break;
        }
        if d > caps.bfs_radius {
            return Err(Error::resource(
                "bfs_radius",
                caps.bfs_radius,
                format!("ball of radius {radius} in {group}"),
            ));
        }
        next.sort();
        layers.push(next);
    }
    Ok(Ball { layers, distances })
}

/// Calls `visit` on every integer vector extending `prefix[..at]` with L1
/// norm at most `budget` over the remaining coordinates. Stops early when
/// `visit` returns false.
fn lattice_points(v: &mut Vec<i64>, at: usize, budget: i64, visit: &mut dyn FnMut(&[i64]) -> bool) -> bool {
    if at == v.len() {
        return visit(v);
    }
    for x in -budget..=budget {
        v[at] = x;
        if !lattice_points(v, at + 1, budget - x.abs(), visit) {
            v[at] = 0;
            return false;
        }
    }
    v[at] = 0;
    true
}

struct CachedBall {
    distances: HashMap<Element, u64>,
    frontier: Vec<Element>,
    radius: usize,
    exhausted: bool,
}

fn ball_cache() -> &'static Mutex<HashMap<Group, CachedBall>> {
    static CACHE: OnceLock<Mutex<HashMap<Group, CachedBall>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Exact length of `e` if it is at most `bound`, using a shared,
/// incrementally grown ball per group.
fn cached_length_at_most(group: &Group, e: &Element, bound: usize, caps: &Caps) -> Result<Option<u64>> {
    if bound > caps.bfs_radius {
        return Err(Error::resource(
            "bfs_radius",
            caps.bfs_radius,
            format!("word length search in {group} needs radius {bound}"),
        ));
    }
    let mut cache = ball_cache().lock().unwrap_or_else(|p| p.into_inner());
    let entry = cache.entry(group.clone()).or_insert_with(|| {
        let id = group.identity();
        CachedBall {
            distances: HashMap::from([(id.clone(), 0)]),
            frontier: vec![id],
            radius: 0,
            exhausted: false,
        }
    });
    if let Some(&d) = entry.distances.get(e) {
        return Ok((d as usize <= bound).then_some(d));
    }
    let gens = group.generators();
    while entry.radius < bound && !entry.exhausted {
        let d = entry.radius as u64 + 1;
        let mut next = Vec::new();
        for g in &entry.frontier {
            for s in &gens {
                let h = group.mul(g, s)?;
                if !entry.distances.contains_key(&h) {
                    entry.distances.insert(h.clone(), d);
                    next.push(h);
                }
            }
        }
        if entry.distances.len() > caps.ball_size {
            // Roll back the partial layer so the cache stays a union of
            // complete spheres.
            for h in &next {
                entry.distances.remove(h);
            }
            return Err(Error::resource(
                "ball_size",
                caps.ball_size,
                format!("word length search in {group} at radius {d}"),
            ));
        }
        entry.exhausted = next.is_empty();
        entry.frontier = next;
        entry.radius += 1;
        if let Some(&found) = entry.distances.get(e) {
            return Ok(Some(found));
        }
    }
    Ok(entry
        .distances
        .get(e)
        .copied()
        .filter(|&d| d as usize <= bound))
}

fn l1(v: &[i64]) -> u64 {
    v.iter().map(|x| x.unsigned_abs()).sum()
}

/// Exact word length with respect to [`Group::generators`].
pub fn word_length(group: &Group, e: &Element, caps: &Caps) -> Result<u64> {
    group.check(e)?;
    match (group, e) {
        (Group::Free(_), Element::Word(w)) => Ok(w.len() as u64),
        (Group::FreeAbelian(_), Element::Vector(v)) => Ok(l1(v)),
        (Group::Cyclic(q), Element::Residue(x)) => Ok((*x).min(q - x)),
        (Group::Perm3, Element::Perm(p)) => Ok(p.length()),
        (Group::FreeSolvable { depth: 1, .. }, Element::Solvable(s)) => {
            Ok(l1(s.normal_form().as_vector().expect("depth-1 normal form is a vector")))
        }
        (Group::FreeSolvable { .. }, Element::Solvable(s)) => {
            let upper = s.word().len();
            let bound = upper.min(caps.bfs_radius);
            match cached_length_at_most(group, e, bound, caps)? {
                Some(d) => Ok(d),
                None if upper <= bound => Err(Error::Internal(format!(
                    "{e:?} not found within the length of its own word"
                ))),
                None => Err(Error::resource(
                    "bfs_radius",
                    caps.bfs_radius,
                    format!("word length of an element of {group} with a word of length {upper}"),
                )),
            }
        }
        (Group::Wreath { top, base }, Element::Wreath(w)) => {
            wreath::wreath_word_length(top, base, w, caps)
        }
        _ => Err(Error::input(format!("{e:?} does not belong to {group}"))),
    }
}

/// `Some(|e|)` when `|e| <= bound`, else `None`. Avoids full searches for
/// long elements of groups without closed-form lengths.
pub fn word_length_at_most(group: &Group, e: &Element, bound: u64, caps: &Caps) -> Result<Option<u64>> {
    match group {
        Group::FreeSolvable { depth, .. } if *depth >= 2 => {
            let s = e
                .as_solvable()
                .ok_or_else(|| Error::input(format!("{e:?} does not belong to {group}")))?;
            let bound = (bound as usize).min(s.word().len());
            cached_length_at_most(group, e, bound, caps)
        }
        _ => {
            let d = word_length(group, e, caps)?;
            Ok((d <= bound).then_some(d))
        }
    }
}

/// `d(x, y) = |x⁻¹ y|`.
pub fn distance(group: &Group, x: &Element, y: &Element, caps: &Caps) -> Result<u64> {
    word_length(group, &group.mul(&group.inv(x)?, y)?, caps)
}

/// Finds `k` with `b^k = x` and `|k| <= search_bound`.
///
/// For free abelian and free solvable groups the exponent is solved for
/// exactly, so `None` proves non-membership whenever `search_bound` covers
/// the distortion bound for `|x|`. Finite-order `b` wraps at its order and
/// returns `k` in `0..order`.
pub fn cyclic_power_solve(group: &Group, b: &Element, x: &Element, search_bound: u64) -> Result<Option<i64>> {
    group.check(b)?;
    group.check(x)?;
    if let Some(n) = group.order(b)? {
        let mut acc = group.identity();
        for k in 0..n {
            if acc == *x {
                return Ok(Some(k as i64));
            }
            acc = group.mul(&acc, b)?;
        }
        return Ok(None);
    }
    let exact = match group {
        Group::FreeAbelian(_) => solve_vector(b.as_vector().unwrap(), x.as_vector().unwrap()),
        Group::FreeSolvable { rank, depth } => {
            let (bs, xs) = (b.as_solvable().unwrap(), x.as_solvable().unwrap());
            solve_normal_form(*rank, *depth, bs.normal_form(), xs.normal_form())?
        }
        _ => {
            let bound = search_bound as i64;
            let mut found = None;
            for m in 0..=bound {
                if group.pow(b, m)? == *x {
                    found = Some(m);
                    break;
                }
                if m > 0 && group.pow(b, -m)? == *x {
                    found = Some(-m);
                    break;
                }
            }
            found
        }
    };
    Ok(exact.filter(|k| k.unsigned_abs() <= search_bound))
}

fn solve_vector(b: &[i64], x: &[i64]) -> Option<i64> {
    let pivot = b.iter().position(|&c| c != 0)?;
    if x[pivot] % b[pivot] != 0 {
        return None;
    }
    let k = x[pivot] / b[pivot];
    b.iter().zip(x).all(|(p, q)| p * k == *q).then_some(k)
}

/// Solves `b^k = x` on Magnus normal forms of `S_{r,d}`, `b` nontrivial.
fn solve_normal_form(rank: usize, depth: usize, b: &Element, x: &Element) -> Result<Option<i64>> {
    if depth == 1 {
        return Ok(solve_vector(b.as_vector().unwrap(), x.as_vector().unwrap()));
    }
    let (wb, wx) = (b.as_wreath().unwrap(), x.as_wreath().unwrap());
    let base = solvable_quotient(rank, depth - 1);
    let k = if !base.is_identity(&wb.cursor) {
        let k = match &base {
            Group::FreeAbelian(_) => {
                solve_vector(wb.cursor.as_vector().unwrap(), wx.cursor.as_vector().unwrap())
            }
            _ => solve_normal_form(
                rank,
                depth - 1,
                wb.cursor.as_solvable().unwrap().normal_form(),
                wx.cursor.as_solvable().unwrap().normal_form(),
            )?,
        };
        match k {
            Some(k) => k,
            None => return Ok(None),
        }
    } else {
        if !base.is_identity(&wx.cursor) {
            return Ok(None);
        }
        // b = (f, e) so b^k = (k f, e).
        let Some((key, fb)) = wb.lamps.iter().next() else {
            return Ok(None);
        };
        let fx = wx.lamps.get(key).cloned().unwrap_or(Element::Vector(vec![0; rank]));
        match solve_vector(fb.as_vector().unwrap(), fx.as_vector().unwrap()) {
            Some(k) => k,
            None => return Ok(None),
        }
    };
    let nf_group = crate::magnus::normal_form_group(rank, depth);
    Ok((nf_group.pow(b, k)? == *x).then_some(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::ReducedWord;

    fn v(x: &[i64]) -> Element {
        Element::Vector(x.to_vec())
    }

    fn s22(text: &str) -> Element {
        let g = Group::free_solvable(2, 2);
        g.project_word(&ReducedWord::parse(2, text).unwrap()).unwrap()
    }

    #[test]
    fn ball_sizes() {
        let caps = Caps::default();
        assert_eq!(bfs_ball(&Group::FreeAbelian(2), 1, &caps).unwrap().len(), 5);
        assert_eq!(bfs_ball(&Group::Cyclic(3), 1, &caps).unwrap().len(), 3);
        // Lattice points with |a| + |b| <= 2.
        let count = (-2i64..=2)
            .flat_map(|a| (-2i64..=2).map(move |b| (a, b)))
            .filter(|(a, b)| a.abs() + b.abs() <= 2)
            .count();
        assert_eq!(bfs_ball(&Group::FreeAbelian(2), 2, &caps).unwrap().len(), count);
        assert_eq!(count, 13);
    }

    #[test]
    fn ball_cap_is_reported() {
        let caps = Caps {
            bfs_radius: 3,
            ..Caps::default()
        };
        let err = bfs_ball(&Group::free_solvable(2, 2), 4, &caps).unwrap_err();
        assert!(matches!(err, Error::Resource { cap: "bfs_radius", .. }));
        // Exhausted finite groups and closed-form lattices ignore the radius cap.
        assert_eq!(bfs_ball(&Group::Cyclic(3), 40, &caps).unwrap().len(), 3);
        assert_eq!(bfs_ball(&Group::FreeAbelian(2), 4, &caps).unwrap().len(), 41);
        let caps = Caps {
            ball_size: 10,
            ..Caps::default()
        };
        let err = bfs_ball(&Group::FreeAbelian(2), 4, &caps).unwrap_err();
        assert!(matches!(err, Error::Resource { cap: "ball_size", .. }));
    }

    #[test]
    fn closed_form_lengths() {
        let caps = Caps::default();
        assert_eq!(word_length(&Group::FreeAbelian(2), &v(&[3, -2]), &caps).unwrap(), 5);
        assert_eq!(word_length(&Group::Cyclic(5), &Element::Residue(4), &caps).unwrap(), 1);
    }

    #[test]
    fn free_solvable_lengths() {
        let caps = Caps::default();
        let g = Group::free_solvable(2, 2);
        assert_eq!(word_length(&g, &s22("x1 x2"), &caps).unwrap(), 2);
        // x1 x2 X1 X2 x2 x1 collapses to nothing shorter than 2 in S_{2,2}?
        // Its abelianization is (1, 1), so at least 2.
        let e = s22("x1 x2 X1 X2 x2 x1");
        assert!(word_length(&g, &e, &caps).unwrap() >= 2);
        assert_eq!(word_length(&g, &s22("x1 X1"), &caps).unwrap(), 0);
    }

    #[test]
    fn power_solving() {
        let z2 = Group::FreeAbelian(2);
        assert_eq!(cyclic_power_solve(&z2, &v(&[2, 0]), &v(&[6, 0]), 10).unwrap(), Some(3));
        assert_eq!(cyclic_power_solve(&z2, &v(&[2, 0]), &v(&[3, 0]), 10).unwrap(), None);
        assert_eq!(cyclic_power_solve(&z2, &v(&[2, 0]), &v(&[6, 0]), 2).unwrap(), None);
        let c5 = Group::Cyclic(5);
        assert_eq!(
            cyclic_power_solve(&c5, &Element::Residue(2), &Element::Residue(1), 0).unwrap(),
            Some(3)
        );
        let s = Group::free_solvable(2, 2);
        let b = s22("x1 x2");
        let b2 = s.mul(&b, &b).unwrap();
        assert_eq!(cyclic_power_solve(&s, &b, &b2, 10).unwrap(), Some(2));
        let binv3 = s.pow(&b, -3).unwrap();
        assert_eq!(cyclic_power_solve(&s, &b, &binv3, 10).unwrap(), Some(-3));
        assert_eq!(cyclic_power_solve(&s, &b, &s22("x2 x1"), 10).unwrap(), None);
        let c = s22("X1 X2 x1 x2");
        let c4 = s.pow(&c, 4).unwrap();
        assert_eq!(cyclic_power_solve(&s, &c, &c4, 10).unwrap(), Some(4));
        assert_eq!(cyclic_power_solve(&s, &c, &s22("X2 X1 x2 x1"), 10).unwrap(), Some(-1));
        assert_eq!(cyclic_power_solve(&s, &c, &s22("x1 x2 X1 X2"), 10).unwrap(), None);
    }
}
