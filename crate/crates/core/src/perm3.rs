//! The symmetric group on three points.

use std::fmt;

use crate::error::{Error, Result};

/// A permutation of `{1, 2, 3}` stored as the images of `1, 2, 3`.
///
/// Products compose right to left: `(p * q)(i) = p(q(i))`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Perm3([u8; 3]);

impl Perm3 {
    pub const IDENTITY: Perm3 = Perm3([1, 2, 3]);

    pub fn from_images(images: [u8; 3]) -> Result<Self> {
        let mut seen = [false; 3];
        for &i in &images {
            if !(1..=3).contains(&i) || seen[i as usize - 1] {
                return Err(Error::input(format!("{images:?} is not a permutation of 1..3")));
            }
            seen[i as usize - 1] = true;
        }
        Ok(Perm3(images))
    }

    pub fn apply(&self, i: u8) -> u8 {
        self.0[i as usize - 1]
    }

    pub fn compose(&self, other: &Perm3) -> Perm3 {
        Perm3([
            self.apply(other.apply(1)),
            self.apply(other.apply(2)),
            self.apply(other.apply(3)),
        ])
    }

    pub fn inverse(&self) -> Perm3 {
        let mut out = [0u8; 3];
        for i in 1..=3u8 {
            out[self.apply(i) as usize - 1] = i;
        }
        Perm3(out)
    }

    pub fn all() -> [Perm3; 6] {
        [
            Perm3([1, 2, 3]),
            Perm3([2, 1, 3]),
            Perm3([1, 3, 2]),
            Perm3([3, 2, 1]),
            Perm3([2, 3, 1]),
            Perm3([3, 1, 2]),
        ]
    }

    /// Generating set used for word lengths: the transpositions `(1 2)` and `(2 3)`.
    pub fn generators() -> [Perm3; 2] {
        [Perm3([2, 1, 3]), Perm3([1, 3, 2])]
    }

    /// Word length with respect to [`Perm3::generators`].
    pub fn length(&self) -> u64 {
        match self.0 {
            [1, 2, 3] => 0,
            [2, 1, 3] | [1, 3, 2] => 1,
            [2, 3, 1] | [3, 1, 2] => 2,
            _ => 3,
        }
    }

    pub fn order(&self) -> u64 {
        match self.length() {
            0 => 1,
            2 => 3,
            _ => 2,
        }
    }

    /// Parses cycle notation: `e`, `(1 2)`, `(1 2 3)`, or a product of cycles
    /// such as `(1 2)(2 3)`, composed right to left.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "e" || text == "()" || text.is_empty() {
            return Ok(Perm3::IDENTITY);
        }
        let mut result = Perm3::IDENTITY;
        let mut rest = text;
        while !rest.is_empty() {
            let open = rest
                .find('(')
                .ok_or_else(|| Error::input(format!("bad cycle notation `{text}`")))?;
            if !rest[..open].trim().is_empty() {
                return Err(Error::input(format!("bad cycle notation `{text}`")));
            }
            let close = rest
                .find(')')
                .ok_or_else(|| Error::input(format!("unclosed cycle in `{text}`")))?;
            let points: Vec<u8> = rest[open + 1..close]
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<u8>()
                        .map_err(|_| Error::input(format!("bad point `{s}` in `{text}`")))
                })
                .collect::<Result<_>>()?;
            let mut images = [1u8, 2, 3];
            for (k, &p) in points.iter().enumerate() {
                if !(1..=3).contains(&p) {
                    return Err(Error::input(format!("point {p} outside 1..3")));
                }
                images[p as usize - 1] = points[(k + 1) % points.len()];
            }
            result = result.compose(&Perm3::from_images(images)?);
            rest = rest[close + 1..].trim_start();
        }
        Ok(result)
    }
}

impl fmt::Display for Perm3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = [false; 3];
        let mut wrote = false;
        for start in 1..=3u8 {
            if seen[start as usize - 1] || self.apply(start) == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start as usize - 1] = true;
            let mut next = self.apply(start);
            while next != start {
                seen[next as usize - 1] = true;
                cycle.push(next);
                next = self.apply(next);
            }
            let body: Vec<String> = cycle.iter().map(|p| p.to_string()).collect();
            write!(f, "({})", body.join(" "))?;
            wrote = true;
        }
        if !wrote {
            write!(f, "e")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str) -> Perm3 {
        Perm3::parse(text).unwrap()
    }

    #[test]
    fn product_matches_table() {
        // (1 2)(1 3): 1 -> 3 -> 3, 3 -> 1 -> 2, 2 -> 2 -> 1.
        assert_eq!(p("(1 2)").compose(&p("(1 3)")), p("(1 3 2)"));
        assert_eq!(p("(1 2)(1 3)"), p("(1 3 2)"));
    }

    #[test]
    fn lengths_by_bfs() {
        let gens = Perm3::generators();
        let mut dist = std::collections::HashMap::from([(Perm3::IDENTITY, 0u64)]);
        let mut frontier = vec![Perm3::IDENTITY];
        let mut d = 0;
        while !frontier.is_empty() {
            d += 1;
            let mut next = Vec::new();
            for g in &frontier {
                for s in &gens {
                    let h = g.compose(s);
                    if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(h) {
                        e.insert(d);
                        next.push(h);
                    }
                }
            }
            frontier = next;
        }
        for g in Perm3::all() {
            assert_eq!(g.length(), dist[&g], "{g}");
        }
    }

    #[test]
    fn display_round_trip() {
        for g in Perm3::all() {
            assert_eq!(p(&g.to_string()), g);
            assert_eq!(g.compose(&g.inverse()), Perm3::IDENTITY);
        }
        assert_eq!(Perm3::IDENTITY.to_string(), "e");
        assert!(Perm3::parse("(1 4)").is_err());
    }
}
