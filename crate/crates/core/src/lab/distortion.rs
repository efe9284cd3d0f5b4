use crate::error::{Error, Result};
use crate::group::{Element, Group};
use crate::magnus::solvable_cyclic_distortion_bound;
use crate::metric::{self, Caps};

/// `δ(n) = max{|m| : |b^m| <= n}` sampled for `n = 0..=n_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistortionProfile {
    pub group: Group,
    pub b: Element,
    pub samples: Vec<(u64, u64)>,
}

impl DistortionProfile {
    pub fn at(&self, n: u64) -> Option<u64> {
        self.samples.iter().find(|(k, _)| *k == n).map(|(_, d)| *d)
    }
}

/// Powers `b^m` can only be `n`-short for `|m| <= 2n` in the supported
/// groups, so scanning that far is exhaustive.
pub fn measure_distortion(group: &Group, b: &Element, n_max: u64, caps: &Caps) -> Result<DistortionProfile> {
    group.check(b)?;
    if group.order(b)?.is_some() {
        return Err(Error::input("distortion is measured for elements of infinite order"));
    }
    let m_max = match group {
        Group::FreeAbelian(_) | Group::FreeSolvable { .. } | Group::Free(_) => {
            solvable_cyclic_distortion_bound(n_max)
        }
        _ => {
            return Err(Error::input(format!(
                "no exhaustive distortion scan for {group}"
            )))
        }
    };
    // shortest[m] = min(|b^m|, |b^-m|) when at most n_max.
    let mut shortest: Vec<Option<u64>> = vec![Some(0)];
    let b_inv = group.inv(b)?;
    let (mut pos, mut neg) = (group.identity(), group.identity());
    for _ in 1..=m_max {
        pos = group.mul(&pos, b)?;
        neg = group.mul(&neg, &b_inv)?;
        let a = metric::word_length_at_most(group, &pos, n_max, caps)?;
        let c = metric::word_length_at_most(group, &neg, n_max, caps)?;
        shortest.push(match (a, c) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        });
    }
    let samples = (0..=n_max)
        .map(|n| {
            let d = shortest
                .iter()
                .enumerate()
                .filter(|(_, l)| l.is_some_and(|l| l <= n))
                .map(|(m, _)| m as u64)
                .max()
                .unwrap_or(0);
            (n, d)
        })
        .collect();
    Ok(DistortionProfile {
        group: group.clone(),
        b: b.clone(),
        samples,
    })
}
