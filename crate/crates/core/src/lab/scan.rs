//! Seeded scans comparing exact minimal conjugator lengths with the
//! closed-form bounds.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::conjugacy::{self, top_clf_bound};
use crate::error::{Error, Result};
use crate::group::{Element, Group};
use crate::lab::bounds::{bound_evaluate, BoundId, BoundParams};
use crate::lab::distortion::measure_distortion;
use crate::lab::search::min_conjugator_length;
use crate::magnus::solvable_cyclic_distortion_bound;
use crate::lab::witness::{self, FamilyTag, WitnessFamily};
use crate::metric::{self, Caps};

pub const CSV_HEADER: [&str; 12] = [
    "family",
    "instance_id",
    "n",
    "u_len",
    "v_len",
    "min_conj_len",
    "bound_L15",
    "bound_L17",
    "bound_T18",
    "bound_T210",
    "bound_C211",
    "violation",
];

/// Where scan instances come from.
#[derive(Clone, Debug)]
pub enum InstanceSource {
    /// `count` pairs `(u, v)`: `u` a random product of at most `max_len`
    /// generators, `v` either `γ⁻¹uγ` with `|γ| <= conj_len` or an
    /// independent random element.
    RandomPairs { count: usize, max_len: usize, conj_len: usize },
    /// Witness families for `n = 0..=n_max` (`count` random pairs for base-pair witnesses).
    Family { tag: FamilyTag, n_max: u64, count: usize },
}

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub group: Group,
    pub source: InstanceSource,
    pub seed: u64,
    /// Radius of the exhaustive conjugator search.
    pub cap: u64,
    pub caps: Caps,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinLength {
    Exact(u64),
    AtLeast(u64),
    /// Not conjugate.
    NotConjugate,
    Unknown,
}

impl fmt::Display for MinLength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinLength::Exact(k) => write!(f, "{k}"),
            MinLength::AtLeast(k) => write!(f, ">={k}"),
            MinLength::NotConjugate => f.write_str("none"),
            MinLength::Unknown => f.write_str("?"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanRecord {
    pub family: String,
    pub instance_id: u64,
    pub n: Option<u64>,
    pub u_len: Option<u64>,
    pub v_len: Option<u64>,
    pub min_conj_len: MinLength,
    pub bounds: BTreeMap<BoundId, u64>,
    /// A measured length above an upper bound, or below a certified lower one.
    pub violation: bool,
    /// Certified lower bound from a witness family.
    pub lower_bound: Option<u64>,
    /// Size brackets from a witness family, kept side by side.
    pub size_upper: Option<u64>,
    pub size_upper_alt: Option<u64>,
    /// Resource or input error that stopped part of the instance.
    pub note: Option<String>,
}

impl ScanRecord {
    fn new(family: &str, instance_id: u64) -> Self {
        ScanRecord {
            family: family.to_string(),
            instance_id,
            n: None,
            u_len: None,
            v_len: None,
            min_conj_len: MinLength::Unknown,
            bounds: BTreeMap::new(),
            violation: false,
            lower_bound: None,
            size_upper: None,
            size_upper_alt: None,
            note: None,
        }
    }

    pub fn csv_row(&self) -> Vec<String> {
        let opt = |x: Option<u64>| x.map(|v| v.to_string()).unwrap_or_default();
        let mut row = vec![
            self.family.clone(),
            self.instance_id.to_string(),
            opt(self.n),
            opt(self.u_len),
            opt(self.v_len),
            self.min_conj_len.to_string(),
        ];
        for id in BoundId::ALL {
            row.push(opt(self.bounds.get(&id).copied()));
        }
        row.push(self.violation.to_string());
        row
    }
}

struct Instance {
    id: u64,
    family: String,
    u: Element,
    v: Element,
    witness: Option<WitnessFamily>,
    note: Option<String>,
}

fn random_element(group: &Group, rng: &mut ChaCha8Rng, max_len: usize) -> Result<Element> {
    let gens = group.generators();
    let len = rng.gen_range(0..=max_len);
    let mut e = group.identity();
    for _ in 0..len {
        e = group.mul(&e, gens.choose(rng).expect("nonempty generating set"))?;
    }
    Ok(e)
}

/// Known bound on `CLF_B(n)` for a base group, when one is available.
fn base_clf_bound(base: &Group, n: u64) -> Option<u64> {
    match base {
        _ if base.is_abelian() => Some(0),
        Group::Perm3 => Some(top_clf_bound(base)),
        Group::FreeSolvable { .. } => bound_evaluate(BoundId::FreeSolvable, &BoundParams { n, ..Default::default() }).ok(),
        _ => None,
    }
}

/// Every bound that applies to a pair with `n = |u| + |v|` in `group`.
pub fn applicable_bounds(group: &Group, u: &Element, n: u64, caps: &Caps) -> Result<BTreeMap<BoundId, u64>> {
    let mut out = BTreeMap::new();
    match group {
        Group::Wreath { top, base } => {
            let Some(clf_b) = base_clf_bound(base, n) else {
                return Ok(out);
            };
            let b = &u.as_wreath().expect("wreath element").cursor;
            let mut params = BoundParams { n, clf_a: top_clf_bound(top), clf_b, ..Default::default() };
            let p = params.conservative_p();
            params.p = Some(p);
            match base.order(b)? {
                Some(order) => {
                    params.order = Some(order);
                    out.insert(BoundId::FiniteOrder, bound_evaluate(BoundId::FiniteOrder, &params)?);
                }
                None => {
                    // The infinite-order bound grows with δ(P), so the ceiling 2P of free solvable
                    // groups may stand in when exact measurement is out of reach.
                    params.delta_p = match measure_distortion(base, b, p, caps) {
                        Ok(profile) => profile.at(p),
                        Err(e) if e.is_resource() && matches!(**base, Group::FreeSolvable { .. }) => {
                            Some(solvable_cyclic_distortion_bound(p))
                        }
                        Err(e) => return Err(e),
                    };
                    out.insert(BoundId::InfiniteOrder, bound_evaluate(BoundId::InfiniteOrder, &params)?);
                }
            }
            out.insert(BoundId::Wreath, bound_evaluate(BoundId::Wreath, &params)?);
        }
        Group::FreeSolvable { depth, .. } => {
            let delta_4n = if *depth == 1 { 4 * n } else { 8 * n };
            let params = BoundParams { n, delta_4n: Some(delta_4n), ..Default::default() };
            out.insert(BoundId::Metabelian, bound_evaluate(BoundId::Metabelian, &params)?);
            out.insert(BoundId::FreeSolvable, bound_evaluate(BoundId::FreeSolvable, &params)?);
        }
        _ => {}
    }
    Ok(out)
}

fn decide(group: &Group, u: &Element, v: &Element, caps: &Caps) -> Result<Option<bool>> {
    Ok(match group {
        Group::Wreath { .. } => Some(conjugacy::wreath_conjugacy(group, u, v, caps)?.is_some()),
        Group::FreeSolvable { .. } => Some(conjugacy::solvable_conjugacy(group, u, v, caps)?.is_some()),
        _ => None,
    })
}

fn default_pair(base: &Group) -> Result<(Element, Element)> {
    match base {
        Group::FreeAbelian(r) if *r >= 2 => {
            let mut x = vec![0; *r];
            let mut y = vec![0; *r];
            x[0] = 1;
            y[1] = 1;
            Ok((Element::Vector(x), Element::Vector(y)))
        }
        _ => Err(Error::input(format!("witness families need a base with a default commuting pair; {base} has none"))),
    }
}

fn generate(config: &ScanConfig) -> Result<Vec<Instance>> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let group = &config.group;
    let mut out = Vec::new();
    match &config.source {
        InstanceSource::RandomPairs { count, max_len, conj_len } => {
            for id in 0..*count as u64 {
                let u = random_element(group, &mut rng, *max_len)?;
                let v = if rng.gen_bool(0.5) {
                    let g = random_element(group, &mut rng, *conj_len)?;
                    group.mul(&group.mul(&group.inv(&g)?, &u)?, &g)?
                } else {
                    random_element(group, &mut rng, *max_len)?
                };
                out.push(Instance { id, family: "random".into(), u, v, witness: None, note: None });
            }
        }
        InstanceSource::Family { tag, n_max, count } => {
            let Group::Wreath { top, base } = group else {
                return Err(Error::input("witness families live in wreath products"));
            };
            let a = top.generators().into_iter().next().ok_or_else(|| Error::input("A has no generators"))?;
            let mut push = |id: u64, fam: Result<WitnessFamily>| match fam {
                Ok(w) => out.push(Instance {
                    id,
                    family: tag.tag().into(),
                    u: w.u.clone(),
                    v: w.v.clone(),
                    witness: Some(w),
                    note: None,
                }),
                Err(e) => out.push(Instance {
                    id,
                    family: tag.tag().into(),
                    u: group.identity(),
                    v: group.identity(),
                    witness: None,
                    note: Some(e.to_string()),
                }),
            };
            match tag {
                FamilyTag::Distorted | FamilyTag::Triangle => {
                    let (x, y) = default_pair(base)?;
                    for n in 0..=*n_max {
                        let fam = if *tag == FamilyTag::Distorted {
                            witness::witness_distorted(top, base, &x, &y, &a, n, &config.caps)
                        } else {
                            witness::witness_triangle(top, base, &x, &y, &a, n, &config.caps)
                        };
                        push(n, fam);
                    }
                }
                FamilyTag::BasePair => {
                    let mut id = 0;
                    let mut attempts = 0;
                    while (id as usize) < *count {
                        attempts += 1;
                        if attempts > 100 * count.max(&1) {
                            return Err(Error::input(format!("could not draw infinite-order elements of {base}")));
                        }
                        let b = random_element(base, &mut rng, 3)?;
                        if base.order(&b)?.is_some() {
                            continue;
                        }
                        let w = random_element(base, &mut rng, 2)?;
                        let c = base.mul(&base.mul(&base.inv(&w)?, &b)?, &w)?;
                        push(id, witness::witness_base_pair(top, base, &b, &c, config.cap, &config.caps));
                        id += 1;
                    }
                }
            }
        }
    }
    Ok(out)
}

fn evaluate(config: &ScanConfig, inst: &Instance) -> ScanRecord {
    let mut rec = ScanRecord::new(&inst.family, inst.id);
    rec.note = inst.note.clone();
    if inst.note.is_some() {
        return rec;
    }
    if let Err(e) = fill(config, inst, &mut rec) {
        rec.note = Some(e.to_string());
    }
    rec
}

fn fill(config: &ScanConfig, inst: &Instance, rec: &mut ScanRecord) -> Result<()> {
    let (group, caps) = (&config.group, &config.caps);
    if let Some(w) = &inst.witness {
        rec.lower_bound = Some(w.lower_bound);
        rec.size_upper = Some(w.size_bounds.1);
        rec.size_upper_alt = w.alt_upper;
    }
    let u_len = metric::word_length(group, &inst.u, caps)?;
    let v_len = metric::word_length(group, &inst.v, caps)?;
    let n = u_len + v_len;
    (rec.u_len, rec.v_len, rec.n) = (Some(u_len), Some(v_len), Some(n));
    match applicable_bounds(group, &inst.u, n, caps) {
        Ok(b) => rec.bounds = b,
        Err(e) if e.is_resource() => rec.note = Some(format!("bounds: {e}")),
        Err(e) => return Err(e),
    }

    rec.min_conj_len = match min_conjugator_length(group, &inst.u, &inst.v, config.cap, caps) {
        Ok(Some(k)) => MinLength::Exact(k),
        Ok(None) => match &inst.witness {
            Some(w) => MinLength::AtLeast(w.lower_bound.max(config.cap + 1)),
            None => match decide(group, &inst.u, &inst.v, caps)? {
                Some(false) => MinLength::NotConjugate,
                _ => MinLength::AtLeast(config.cap + 1),
            },
        },
        Err(e) if e.is_resource() => {
            rec.note = Some(e.to_string());
            match &inst.witness {
                Some(w) => MinLength::AtLeast(w.lower_bound),
                None => MinLength::Unknown,
            }
        }
        Err(e) => return Err(e),
    };
    if let MinLength::Exact(k) = rec.min_conj_len {
        rec.violation = rec.bounds.values().any(|&b| k > b) || rec.lower_bound.is_some_and(|lb| k < lb);
    }
    Ok(())
}

/// Runs a scan. Instances are evaluated in parallel and returned sorted by
/// instance id; per-instance errors are recorded, not propagated.
pub fn clf_scan(config: &ScanConfig) -> Result<Vec<ScanRecord>> {
    let instances = generate(config)?;
    let mut records: Vec<ScanRecord> = instances.par_iter().map(|inst| evaluate(config, inst)).collect();
    records.sort_by_key(|r| r.instance_id);
    Ok(records)
}

pub fn write_csv<W: Write>(records: &[ScanRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Internal(format!("csv output failed: {e}"));
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in records {
        w.write_record(r.csv_row()).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Internal(format!("csv output failed: {e}")))?;
    Ok(())
}
