//! Conjugacy in wreath products and free solvable groups.
//!
//! For `u = (f, b)`, `v = (g, c)` in `A ≀ B`, an element `(h, z)` is a
//! conjugator (`uγ = γv`) exactly when `bz = zc` and
//! `f(x) h(b⁻¹x) = h(x) g(z⁻¹x)` for every `x`. Along a right coset
//! `⟨b⟩t` the second condition is solved by partial products, which closes
//! up exactly when the π-products of `f` and of the shifted `g` agree.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::group::{Element, Group};
use crate::magnus::{self, solvable_quotient, SolvableElement};
use crate::metric::{self, Caps};
use crate::wreath::{self, FinSuppMap, WreathElement};

/// Right cosets `⟨b⟩t_i` meeting a finite point set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetPartition {
    pub b: Element,
    /// Order of `b`, `None` when infinite.
    pub order: Option<u64>,
    pub reps: Vec<Element>,
    /// `x ↦ (i, j)` with `x = b^j t_i`.
    pub assignment: BTreeMap<Element, (usize, i64)>,
}

impl CosetPartition {
    /// `b^j t_i`.
    pub fn element(&self, base: &Group, i: usize, j: i64) -> Result<Element> {
        base.mul(&base.pow(&self.b, j)?, &self.reps[i])
    }
}

fn ensure_supported_base(base: &Group) -> Result<()> {
    match base {
        Group::FreeAbelian(_) | Group::Cyclic(_) | Group::Perm3 | Group::FreeSolvable { .. } => Ok(()),
        _ => Err(Error::input(format!(
            "conjugacy is only decided over base groups Z^r, Zq, P3 and S(r,d), not {base}"
        ))),
    }
}

/// Sort key for choosing coset representatives: word length, then
/// canonical order. Lengths beyond the search caps sort last.
fn rep_key(base: &Group, x: &Element, caps: &Caps) -> Result<u64> {
    match metric::word_length(base, x, caps) {
        Ok(d) => Ok(d),
        Err(e) if e.is_resource() => Ok(u64::MAX),
        Err(e) => Err(e),
    }
}

/// Partitions `points` into right `⟨b⟩`-cosets. Each class is represented
/// by its shortest member (ties broken canonically).
pub fn coset_partition(points: &[Element], b: &Element, base: &Group, caps: &Caps) -> Result<CosetPartition> {
    ensure_supported_base(base)?;
    base.check(b)?;
    let mut sorted: Vec<(u64, Element)> = Vec::with_capacity(points.len());
    let distinct: BTreeSet<&Element> = points.iter().collect();
    for x in distinct {
        base.check(x)?;
        sorted.push((rep_key(base, x, caps)?, x.clone()));
    }
    sorted.sort();
    let mut partition = CosetPartition {
        b: b.clone(),
        order: base.order(b)?,
        reps: Vec::new(),
        assignment: BTreeMap::new(),
    };
    'points: for (_, x) in sorted {
        for (i, t) in partition.reps.iter().enumerate() {
            let quotient = base.mul(&x, &base.inv(t)?)?;
            if let Some(j) = metric::cyclic_power_solve(base, b, &quotient, u64::MAX)? {
                partition.assignment.insert(x, (i, j));
                continue 'points;
            }
        }
        partition.assignment.insert(x.clone(), (partition.reps.len(), 0));
        partition.reps.push(x);
    }
    Ok(partition)
}

/// Factor order inside a π-product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PiOrder {
    /// Higher powers of `b` to the left.
    Descending,
    Ascending,
}

/// `(j, f(z⁻¹ b^j t_i))` for every support point of `f` whose `z`-translate
/// lies in coset `i`, sorted by `j`.
fn coset_hits(
    base: &Group,
    f: &FinSuppMap,
    partition: &CosetPartition,
    i: usize,
    z: &Element,
) -> Result<Vec<(i64, Element)>> {
    let mut hits = Vec::new();
    for (s, val) in f {
        let x = base.mul(z, s)?;
        let &(k, j) = partition.assignment.get(&x).ok_or_else(|| {
            Error::Logic(format!("point {x:?} missing from the coset partition"))
        })?;
        if k == i {
            hits.push((j, val.clone()));
        }
    }
    hits.sort_by_key(|(j, _)| *j);
    Ok(hits)
}

/// `π^{(z)}_{t_i}(f) = Π_j f(z⁻¹ b^j t_i)` with larger `j` to the left.
/// With `z = e` this is `π_{t_i}(f)`.
pub fn pi_product(top: &Group, base: &Group, f: &FinSuppMap, partition: &CosetPartition, i: usize, z: &Element) -> Result<Element> {
    pi_product_with_order(top, base, f, partition, i, z, PiOrder::Descending)
}

pub fn pi_product_with_order(
    top: &Group,
    base: &Group,
    f: &FinSuppMap,
    partition: &CosetPartition,
    i: usize,
    z: &Element,
    order: PiOrder,
) -> Result<Element> {
    let mut hits = coset_hits(base, f, partition, i, z)?;
    if order == PiOrder::Descending {
        hits.reverse();
    }
    let mut acc = top.identity();
    for (_, val) in hits {
        acc = top.mul(&acc, &val)?;
    }
    Ok(acc)
}

/// Solves `f(x) h(b⁻¹x) = h(x) g(z⁻¹x)` coset by coset:
/// `h(b^k t) = F_k α_t G_k⁻¹` where `F_k`, `G_k` are the partial π-products
/// of `f` and of `g` shifted by `z` up to `j = k` (`α_t = e` for
/// infinite-order `b`).
#[allow(clippy::too_many_arguments)]
pub fn build_conjugator_h(
    top: &Group,
    base: &Group,
    f: &FinSuppMap,
    g: &FinSuppMap,
    z: &Element,
    partition: &CosetPartition,
    alphas: Option<&[Element]>,
) -> Result<FinSuppMap> {
    let mut h = FinSuppMap::new();
    for i in 0..partition.reps.len() {
        let fh: BTreeMap<i64, Element> = coset_hits(base, f, partition, i, &base.identity())?.into_iter().collect();
        let gh: BTreeMap<i64, Element> = coset_hits(base, g, partition, i, z)?.into_iter().collect();
        let alpha = alphas.map(|a| a[i].clone()).unwrap_or_else(|| top.identity());
        let (lo, hi) = match partition.order {
            Some(n) => (0, n as i64 - 1),
            None => {
                let keys = || fh.keys().chain(gh.keys());
                match (keys().min(), keys().max()) {
                    (Some(&lo), Some(&hi)) => (lo, hi),
                    _ => continue,
                }
            }
        };
        let pf = fh.values().rev().try_fold(top.identity(), |acc, x| top.mul(&acc, x))?;
        let pg = gh.values().rev().try_fold(top.identity(), |acc, x| top.mul(&acc, x))?;
        if top.mul(&pf, &alpha)? != top.mul(&alpha, &pg)? {
            return Err(Error::Logic(format!(
                "π-condition fails on the coset of {:?}",
                partition.reps[i]
            )));
        }
        let mut fk = top.identity();
        let mut gk = top.identity();
        for k in lo..=hi {
            if let Some(x) = fh.get(&k) {
                fk = top.mul(x, &fk)?;
            }
            if let Some(x) = gh.get(&k) {
                gk = top.mul(x, &gk)?;
            }
            let value = top.mul(&top.mul(&fk, &alpha)?, &top.inv(&gk)?)?;
            if !top.is_identity(&value) {
                h.insert(partition.element(base, i, k)?, value);
            }
        }
    }
    Ok(h)
}

/// `h` with `(f, b)(h, e) = (h, e)(1, b)`, when every `π_{t_i}(f)` is trivial.
pub fn trivialization_conjugator(
    top: &Group,
    base: &Group,
    f: &FinSuppMap,
    partition: &CosetPartition,
) -> Result<Option<FinSuppMap>> {
    for i in 0..partition.reps.len() {
        if !top.is_identity(&pi_product(top, base, f, partition, i, &base.identity())?) {
            return Ok(None);
        }
    }
    let h = build_conjugator_h(top, base, f, &FinSuppMap::new(), &base.identity(), partition, None)?;
    let w = Group::wreath(top.clone(), base.clone());
    let u = Element::wreath(WreathElement { lamps: f.clone(), cursor: partition.b.clone() });
    let gamma = Element::wreath(WreathElement { lamps: h.clone(), cursor: base.identity() });
    let target = Element::wreath(WreathElement::from_cursor(partition.b.clone()));
    if !verify_conjugator(&w, &u, &target, &gamma)? {
        return Err(Error::Internal("trivialization conjugator failed verification".into()));
    }
    Ok(Some(h))
}

/// Which part of the decision procedure produced an answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// Every π-product of `f` vanishes; reduced to conjugacy in `B`.
    Trivial,
    /// Search over `z` in the ball of radius `n`.
    Search,
}

impl Branch {
    pub fn tag(self) -> &'static str {
        match self {
            Branch::Trivial => "T",
            Branch::Search => "S",
        }
    }
}

/// One row of the π-table: representative, `π_{t}(f)`, `π^{(z)}_{t}(g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiRow {
    pub rep: Element,
    pub pi_f: Element,
    pub pi_g: Element,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyCertificate {
    pub conjugator: Element,
    pub z: Element,
    pub branch: Branch,
    pub pi_table: Vec<PiRow>,
    pub alphas: Option<Vec<Element>>,
    pub verified: bool,
    /// `|z|_B`, when within the length caps.
    pub z_length: Option<u64>,
    /// `n = |u| + |v|`, the radius of the `z` search.
    pub n: u64,
}

/// `u γ = γ v`.
pub fn verify_conjugator(group: &Group, u: &Element, v: &Element, gamma: &Element) -> Result<bool> {
    group.check(u)?;
    group.check(v)?;
    group.check(gamma)?;
    Ok(group.mul(u, gamma)? == group.mul(gamma, v)?)
}

/// Length of `|f| = Σ_x |f(x)|_A`.
fn lamp_mass(top: &Group, f: &FinSuppMap, caps: &Caps) -> Result<u64> {
    f.values().map(|x| metric::word_length(top, x, caps)).sum()
}

/// Conjugacy length bound used for the `α` search in `A`.
pub fn top_clf_bound(top: &Group) -> u64 {
    if top.is_abelian() {
        0
    } else {
        match top {
            Group::Perm3 => 3,
            _ => 0,
        }
    }
}

/// `α` with `p α = α q`, searched in the ball of radius `radius`.
fn top_conjugator(top: &Group, p: &Element, q: &Element, radius: u64, caps: &Caps) -> Result<Option<Element>> {
    if top.is_abelian() {
        return Ok((p == q).then(|| top.identity()));
    }
    let ball = metric::bfs_ball(top, radius as usize, caps)?;
    for (alpha, _) in ball.iter() {
        if top.mul(p, alpha)? == top.mul(alpha, q)? {
            return Ok(Some(alpha.clone()));
        }
    }
    Ok(None)
}

/// `z` with `bz = zc` in a base group.
pub fn base_conjugator(base: &Group, b: &Element, c: &Element, caps: &Caps) -> Result<Option<Element>> {
    base.check(b)?;
    base.check(c)?;
    if b == c {
        return Ok(Some(base.identity()));
    }
    match base {
        Group::FreeAbelian(_) | Group::Cyclic(_) => Ok(None),
        Group::FreeSolvable { depth: 1, .. } => Ok(None),
        Group::Perm3 => {
            let mut all = crate::perm3::Perm3::all();
            all.sort_by_key(|p| (p.length(), *p));
            for p in all {
                let z = Element::Perm(p);
                if base.mul(b, &z)? == base.mul(&z, c)? {
                    return Ok(Some(z));
                }
            }
            Ok(None)
        }
        Group::FreeSolvable { .. } => {
            Ok(solvable_conjugacy(base, b, c, caps)?.map(|cert| Element::solvable(cert.conjugator)))
        }
        Group::Wreath { .. } => Ok(wreath_conjugacy(base, b, c, caps)?.map(|cert| cert.conjugator)),
        Group::Free(_) => Err(Error::input("conjugacy in free groups is not supported")),
    }
}

fn pi_rows(
    top: &Group,
    base: &Group,
    f: &FinSuppMap,
    g: &FinSuppMap,
    partition: &CosetPartition,
    z: &Element,
) -> Result<Vec<PiRow>> {
    (0..partition.reps.len())
        .map(|i| {
            Ok(PiRow {
                rep: partition.reps[i].clone(),
                pi_f: pi_product(top, base, f, partition, i, &base.identity())?,
                pi_g: pi_product(top, base, g, partition, i, z)?,
            })
        })
        .collect()
}

fn length_if_known(base: &Group, z: &Element, caps: &Caps) -> Result<Option<u64>> {
    match metric::word_length(base, z, caps) {
        Ok(d) => Ok(Some(d)),
        Err(e) if e.is_resource() => Ok(None),
        Err(e) => Err(e),
    }
}

/// Decides whether `u` and `v` are conjugate in `group = A ≀ B` and, if so,
/// returns a verified conjugator. A resource error means the search was
/// inconclusive, never that the elements are not conjugate.
pub fn wreath_conjugacy(group: &Group, u: &Element, v: &Element, caps: &Caps) -> Result<Option<ConjugacyCertificate>> {
    let Group::Wreath { top, base } = group else {
        return Err(Error::input(format!("{group} is not a wreath product")));
    };
    ensure_supported_base(base)?;
    group.check(u)?;
    group.check(v)?;
    let (uw, vw) = (u.as_wreath().unwrap(), v.as_wreath().unwrap());
    let (f, b) = (&uw.lamps, &uw.cursor);
    let (g, c) = (&vw.lamps, &vw.cursor);
    let n = wreath::wreath_word_length(top, base, uw, caps)? + wreath::wreath_word_length(top, base, vw, caps)?;

    let f_points: Vec<Element> = f.keys().cloned().collect();
    let part_f = coset_partition(&f_points, b, base, caps)?;
    let e_b = base.identity();
    let all_vanish = (0..part_f.reps.len())
        .map(|i| pi_product(top, base, f, &part_f, i, &e_b))
        .collect::<Result<Vec<_>>>()?
        .iter()
        .all(|p| top.is_identity(p));

    if all_vanish {
        let g_points: Vec<Element> = g.keys().cloned().collect();
        let part_g = coset_partition(&g_points, c, base, caps)?;
        let Some(h2) = trivialization_conjugator(top, base, g, &part_g)? else {
            return Ok(None);
        };
        let Some(z) = base_conjugator(base, b, c, caps)? else {
            return Ok(None);
        };
        let h1 = trivialization_conjugator(top, base, f, &part_f)?.expect("π-products vanish");
        let left = Element::wreath(WreathElement { lamps: h1, cursor: e_b.clone() });
        let right = Element::wreath(WreathElement { lamps: h2, cursor: e_b.clone() });
        let mid = Element::wreath(WreathElement::from_cursor(z.clone()));
        let gamma = group.mul(&group.mul(&left, &mid)?, &group.inv(&right)?)?;
        if !verify_conjugator(group, u, v, &gamma)? {
            return Err(Error::Internal("branch T conjugator failed verification".into()));
        }
        let pi_table = pi_rows(top, base, f, &FinSuppMap::new(), &part_f, &e_b)?;
        return Ok(Some(ConjugacyCertificate {
            conjugator: gamma,
            z_length: length_if_known(base, &z, caps)?,
            z,
            branch: Branch::Trivial,
            pi_table,
            alphas: None,
            verified: true,
            n,
        }));
    }

    // Branch S. Conjugate elements have conjugate cursors; in an abelian base
    // that means equal ones, and then every z satisfies bz = zc.
    if base.is_abelian() && b != c {
        return Ok(None);
    }
    let alpha_radius = lamp_mass(top, f, caps)? + lamp_mass(top, g, caps)? + top_clf_bound(top);
    let ball = metric::bfs_ball(base, n as usize, caps)?;
    for (z, z_len) in ball.iter() {
        if base.mul(b, z)? != base.mul(z, c)? {
            continue;
        }
        let mut points = f_points.clone();
        for s in g.keys() {
            points.push(base.mul(z, s)?);
        }
        let partition = coset_partition(&points, b, base, caps)?;
        let rows = pi_rows(top, base, f, g, &partition, z)?;
        let alphas = if partition.order.is_some() {
            let mut alphas = Vec::with_capacity(rows.len());
            for row in &rows {
                match top_conjugator(top, &row.pi_f, &row.pi_g, alpha_radius, caps)? {
                    Some(a) => alphas.push(a),
                    None => break,
                }
            }
            if alphas.len() < rows.len() {
                continue;
            }
            Some(alphas)
        } else {
            if rows.iter().any(|r| r.pi_f != r.pi_g) {
                continue;
            }
            None
        };
        let h = build_conjugator_h(top, base, f, g, z, &partition, alphas.as_deref())?;
        let gamma = Element::wreath(WreathElement { lamps: h, cursor: z.clone() });
        if !verify_conjugator(group, u, v, &gamma)? {
            return Err(Error::Internal("branch S conjugator failed verification".into()));
        }
        return Ok(Some(ConjugacyCertificate {
            conjugator: gamma,
            z: z.clone(),
            branch: Branch::Search,
            pi_table: rows,
            alphas,
            verified: true,
            z_length: Some(z_len),
            n,
        }));
    }
    Ok(None)
}

/// How a wreath conjugator was turned into an element of `S_{r,d}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiftMethod {
    /// `d = 1`: abelian, the identity conjugates equal elements.
    Abelian,
    /// The wreath conjugator already lies in the image of the embedding.
    Image,
    /// Any lift of the cursor `γ` conjugates (`u` maps trivially to `S_{r,d-1}`).
    CursorLift,
    /// Found by searching `γ₀ y` over kernel elements `y`.
    KernelSearch,
}

#[derive(Clone, Debug)]
pub struct SolvableCertificate {
    pub conjugator: SolvableElement,
    pub method: LiftMethod,
    /// The certificate for the images in `Z^r ≀ S_{r,d-1}` (absent for `d = 1`).
    pub wreath: Option<ConjugacyCertificate>,
    pub verified: bool,
}

/// Decides conjugacy in `S_{r,d}` through the Magnus embedding and returns a
/// verified conjugator.
pub fn solvable_conjugacy(group: &Group, u: &Element, v: &Element, caps: &Caps) -> Result<Option<SolvableCertificate>> {
    let Group::FreeSolvable { rank, depth } = *group else {
        return Err(Error::input(format!("{group} is not a free solvable group")));
    };
    group.check(u)?;
    group.check(v)?;
    let (us, vs) = (u.as_solvable().unwrap(), v.as_solvable().unwrap());
    if depth == 1 {
        return Ok((us == vs).then(|| SolvableCertificate {
            conjugator: SolvableElement::identity(rank, 1),
            method: LiftMethod::Abelian,
            wreath: None,
            verified: true,
        }));
    }
    let nf_group = magnus::normal_form_group(rank, depth);
    let Some(cert) = wreath_conjugacy(&nf_group, us.normal_form(), vs.normal_form(), caps)? else {
        return Ok(None);
    };
    let quotient = solvable_quotient(rank, depth - 1);
    let wc = cert.conjugator.as_wreath().expect("wreath conjugator");
    let gamma = wc.cursor.clone();
    let accept = |w: SolvableElement, method: LiftMethod| -> Result<Option<SolvableCertificate>> {
        let e = Element::solvable(w.clone());
        Ok(verify_conjugator(group, u, v, &e)?.then(|| SolvableCertificate {
            conjugator: w,
            method,
            wreath: Some(cert.clone()),
            verified: true,
        }))
    };

    if let Ok(word) = magnus::word_from_image(rank, depth - 1, wc) {
        if let Some(found) = accept(SolvableElement::from_word(rank, depth, word)?, LiftMethod::Image)? {
            return Ok(Some(found));
        }
    }
    let gamma_word = quotient
        .word_for(&gamma)
        .ok_or_else(|| Error::Internal("no word for a quotient element".into()))?;
    let gamma0 = SolvableElement::from_word(rank, depth, gamma_word)?;
    if let Some(found) = accept(gamma0.clone(), LiftMethod::CursorLift)? {
        return Ok(Some(found));
    }
    let ball = metric::bfs_ball(group, caps.lift_radius, caps)?;
    for (y, _) in ball.iter() {
        let ys = y.as_solvable().expect("solvable ball");
        if !quotient.is_identity(&quotient.project_word(ys.word())?) {
            continue;
        }
        if let Some(found) = accept(gamma0.mul(ys)?, LiftMethod::KernelSearch)? {
            return Ok(Some(found));
        }
    }
    Err(Error::resource(
        "lift_radius",
        caps.lift_radius,
        "no lift of the wreath conjugator found among kernel elements",
    ))
}
