//! Freely reduced words over `x1..xr` and their inverses.

use std::cmp::Ordering;
use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};

/// A freely reduced word. Letters are signed generator indices: `i` stands
/// for `x_i` and `-i` for its inverse.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ReducedWord {
    rank: usize,
    letters: Vec<i32>,
}

impl ReducedWord {
    pub fn empty(rank: usize) -> Self {
        ReducedWord {
            rank,
            letters: Vec::new(),
        }
    }

    /// Freely reduces `raw`, rejecting indices outside `1..=rank`.
    pub fn reduce(rank: usize, raw: &[i32]) -> Result<Self> {
        let mut letters: Vec<i32> = Vec::with_capacity(raw.len());
        for &x in raw {
            if x == 0 || x.unsigned_abs() as usize > rank {
                return Err(Error::input(format!(
                    "generator index {x} out of range for rank {rank}"
                )));
            }
            if letters.last() == Some(&-x) {
                letters.pop();
            } else {
                letters.push(x);
            }
        }
        Ok(ReducedWord { rank, letters })
    }

    pub fn generator(rank: usize, letter: i32) -> Result<Self> {
        Self::reduce(rank, &[letter])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        ReducedWord {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|x| -x).collect(),
        }
    }

    /// Product in the free group.
    pub fn mul(&self, other: &ReducedWord) -> ReducedWord {
        let mut letters = self.letters.clone();
        for &x in &other.letters {
            if letters.last() == Some(&-x) {
                letters.pop();
            } else {
                letters.push(x);
            }
        }
        ReducedWord {
            rank: self.rank.max(other.rank),
            letters,
        }
    }

    pub fn push(&self, letter: i32) -> ReducedWord {
        let mut out = self.clone();
        if out.letters.last() == Some(&-letter) {
            out.letters.pop();
        } else {
            out.letters.push(letter);
        }
        out
    }

    pub fn pow(&self, k: i64) -> ReducedWord {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = ReducedWord::empty(self.rank);
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `[a, b] = a b a⁻¹ b⁻¹`.
    pub fn commutator(a: &ReducedWord, b: &ReducedWord) -> ReducedWord {
        a.mul(b).mul(&a.inverse()).mul(&b.inverse())
    }

    /// Exponent sums, i.e. the image in the abelianization.
    pub fn exponent_sums(&self) -> Vec<i64> {
        let mut out = vec![0i64; self.rank];
        for &x in &self.letters {
            out[x.unsigned_abs() as usize - 1] += x.signum() as i64;
        }
        out
    }

    /// Parses `x1 X2 x1`, also accepting concatenated tokens (`x1X2x1`) and
    /// `e` / empty input for the identity.
    pub fn parse(rank: usize, text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() || text == "e" || text == "1" {
            return Ok(ReducedWord::empty(rank));
        }
        let mut raw = Vec::new();
        let chars: Vec<char> = text.chars().collect();
        let mut pos = 0;
        while pos < chars.len() {
            let c = chars[pos];
            if c.is_whitespace() {
                pos += 1;
                continue;
            }
            let sign = match c {
                'x' => 1,
                'X' => -1,
                _ => return Err(Error::input(format!("bad word token at `{}`", &text[pos..]))),
            };
            pos += 1;
            let start = pos;
            while pos < chars.len() && chars[pos].is_ascii_digit() {
                pos += 1;
            }
            if start == pos {
                return Err(Error::input(format!("missing generator index in `{text}`")));
            }
            let digits: String = chars[start..pos].iter().collect();
            let index: i32 = digits
                .parse()
                .map_err(|_| Error::input(format!("bad generator index `{digits}`")))?;
            raw.push(sign * index);
        }
        Self::reduce(rank, &raw)
    }

    /// Tokens without separators, e.g. `x1X2`; used inside ring terms.
    pub fn compact(&self) -> String {
        if self.letters.is_empty() {
            return "e".to_string();
        }
        self.letters.iter().map(|&x| token(x)).collect()
    }
}

fn token(x: i32) -> String {
    if x > 0 {
        format!("x{x}")
    } else {
        format!("X{}", -x)
    }
}

fn letter_key(x: i32) -> (u32, bool) {
    (x.unsigned_abs(), x < 0)
}

/// Shortlex: shorter words first, then letterwise with `x1 < X1 < x2 < ...`.
impl Ord for ReducedWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| {
                self.letters
                    .iter()
                    .map(|&x| letter_key(x))
                    .cmp(other.letters.iter().map(|&x| letter_key(x)))
            })
            .then_with(|| self.rank.cmp(&other.rank))
    }
}

impl PartialOrd for ReducedWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        let tokens: Vec<String> = self.letters.iter().map(|&x| token(x)).collect();
        write!(f, "{}", tokens.join(" "))
    }
}

/// Uniformly random length in `0..=max_len`, letters chosen so that no
/// cancellation occurs.
pub fn random_word<R: Rng + ?Sized>(rng: &mut R, rank: usize, max_len: usize) -> ReducedWord {
    let len = rng.gen_range(0..=max_len);
    random_word_of_length(rng, rank, len)
}

pub fn random_word_of_length<R: Rng + ?Sized>(rng: &mut R, rank: usize, len: usize) -> ReducedWord {
    let mut letters: Vec<i32> = Vec::with_capacity(len);
    while letters.len() < len {
        let index = rng.gen_range(1..=rank as i32);
        let x = if rng.gen_bool(0.5) { index } else { -index };
        if letters.last() == Some(&-x) {
            continue;
        }
        letters.push(x);
    }
    ReducedWord { rank, letters }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(text: &str) -> ReducedWord {
        ReducedWord::parse(2, text).unwrap()
    }

    // Independent reduction: delete one adjacent inverse pair at a time.
    fn reduce_by_pair_deletion(raw: &[i32]) -> Vec<i32> {
        let mut v = raw.to_vec();
        loop {
            let pos = v.windows(2).position(|p| p[0] == -p[1]);
            match pos {
                Some(i) => {
                    v.drain(i..i + 2);
                }
                None => return v,
            }
        }
    }

    #[test]
    fn cancellation_examples() {
        assert!(w("x1 X1").is_empty());
        assert!(w("x1 x2 X2 X1").is_empty());
        assert_eq!(w("x1 x2 X2 x1").letters(), &[1, 1]);
        assert_eq!(reduce_by_pair_deletion(&[1, 2, -2, 1]), vec![1, 1]);
    }

    #[test]
    fn out_of_range_index_is_input_error() {
        assert!(matches!(ReducedWord::reduce(2, &[3]), Err(Error::Input(_))));
        assert!(ReducedWord::parse(2, "x0").is_err());
        assert!(ReducedWord::parse(2, "y1").is_err());
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(w("x1X2x1").to_string(), "x1 X2 x1");
        assert_eq!(w("e").to_string(), "e");
        assert_eq!(w("x1 X2").compact(), "x1X2");
    }

    #[test]
    fn shortlex_order() {
        assert!(w("") < w("x1"));
        assert!(w("x1") < w("X1"));
        assert!(w("X1") < w("x2"));
        assert!(w("x2") < w("x1 x1"));
    }

    #[test]
    fn power_and_commutator() {
        assert_eq!(w("x1 x2").pow(-2), w("X2 X1 X2 X1"));
        let c = ReducedWord::commutator(&w("x1"), &w("x2"));
        assert_eq!(c, w("x1 x2 X1 X2"));
        assert_eq!(c.exponent_sums(), vec![0, 0]);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn raw_word() -> impl Strategy<Value = Vec<i32>> {
            proptest::collection::vec(prop_oneof![Just(1), Just(-1), Just(2), Just(-2), Just(3), Just(-3)], 0..16)
        }

        proptest! {
            #[test]
            fn reduce_matches_pair_deletion(raw in raw_word()) {
                let r = ReducedWord::reduce(3, &raw).unwrap();
                prop_assert_eq!(r.letters().to_vec(), reduce_by_pair_deletion(&raw));
                let again = ReducedWord::reduce(3, r.letters()).unwrap();
                prop_assert_eq!(again, r);
            }

            #[test]
            fn product_length_and_inverse(a in raw_word(), b in raw_word()) {
                let u = ReducedWord::reduce(3, &a).unwrap();
                let v = ReducedWord::reduce(3, &b).unwrap();
                prop_assert!(u.mul(&v).len() <= u.len() + v.len());
                prop_assert!(u.mul(&u.inverse()).is_empty());
            }
        }
    }
}
