use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::group::{Element, Group};
use crate::metric::Caps;

/// Least `|γ|` with `uγ = γv`, by breadth-first search in `group` up to
/// radius `cap`. `None` means no conjugator of length `<= cap`.
pub fn min_conjugator_length(group: &Group, u: &Element, v: &Element, cap: u64, caps: &Caps) -> Result<Option<u64>> {
    Ok(min_conjugator(group, u, v, cap, caps)?.map(|(_, d)| d))
}

/// As [`min_conjugator_length`], also returning the canonically least
/// conjugator of that length.
pub fn min_conjugator(group: &Group, u: &Element, v: &Element, cap: u64, caps: &Caps) -> Result<Option<(Element, u64)>> {
    group.check(u)?;
    group.check(v)?;
    let gens = group.generators();
    let id = group.identity();
    let mut seen: HashSet<Element> = HashSet::from([id.clone()]);
    let mut layer = vec![id];
    for d in 0..=cap {
        layer.sort();
        for g in &layer {
            if group.mul(u, g)? == group.mul(g, v)? {
                return Ok(Some((g.clone(), d)));
            }
        }
        if d == cap {
            break;
        }
        let mut next = Vec::new();
        for g in &layer {
            for s in &gens {
                let h = group.mul(g, s)?;
                if seen.insert(h.clone()) {
                    next.push(h);
                }
            }
        }
        if seen.len() > caps.ball_size {
            return Err(Error::resource(
                "ball_size",
                caps.ball_size,
                format!("conjugator search in {group} at radius {}", d + 1),
            ));
        }
        if next.is_empty() {
            break;
        }
        layer = next;
    }
    Ok(None)
}
