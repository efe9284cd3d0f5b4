//! Identity suites run by `clf selftest` and the acceptance tests.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::fox::{self, RingElement};
use crate::group::{Element, Group};
use crate::magnus::{self, SolvableElement};
use crate::metric::{self, Caps};
use crate::word::{random_word, ReducedWord};
use crate::wreath;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `w - ε(w)·1 = Σ_i ∂w/∂x_i (x_i - 1)` in `Z(F_r)`.
pub fn fundamental_formula_holds(w: &ReducedWord) -> Result<bool> {
    let free = Group::Free(w.rank());
    let a = RingElement::monomial(&free, Element::Word(w.clone()), 1);
    let lhs = a.sub(&RingElement::one(&free).scale(a.augmentation()))?;
    let mut rhs = RingElement::zero(&free);
    for i in 1..=w.rank() {
        let x = Element::Word(ReducedWord::generator(w.rank(), i as i32)?);
        let x_minus_one = RingElement::monomial(&free, x, 1).sub(&RingElement::one(&free))?;
        rhs = rhs.add(&fox::fox_derive(w, i)?.mul(&x_minus_one)?)?;
    }
    Ok(lhs == rhs)
}

/// Seeded random words of rank `1..=max_rank` and length `<= max_len`.
pub fn fundamental_formula_suite(seed: u64, count: usize, max_rank: usize, max_len: usize) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for k in 0..count {
        let rank = 1 + k % max_rank;
        let w = random_word(&mut rng, rank, max_len);
        if !fundamental_formula_holds(&w)? {
            failures.push(format!("rank {rank}: {w}"));
        }
    }
    Ok(SuiteReport { name: "fundamental-formula", cases: count, failures })
}

/// Algebraic and geometric Magnus images agree on seeded words.
pub fn embedding_equivalence_suite(seed: u64, count: usize, rank: usize, depth: usize, max_len: usize) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for _ in 0..count {
        let w = random_word(&mut rng, rank, max_len);
        let algebraic = magnus::magnus_algebraic(&w, rank, depth)?.to_wreath();
        let geometric = magnus::magnus_geometric(&w, rank, depth)?;
        if algebraic != geometric {
            failures.push(w.to_string());
        }
    }
    Ok(SuiteReport { name: "embedding-equivalence", cases: count, failures })
}

/// `½|g| <= |φ(g)| <= 2|g|` for every `g` in the ball of radius `radius`
/// of `S_{rank,2}`, with `φ(g)` measured in `Z^r ≀ Z^r`.
pub fn bi_lipschitz_suite(rank: usize, radius: usize, caps: &Caps) -> Result<SuiteReport> {
    let group = Group::free_solvable(rank, 2);
    let (top, base) = (Group::FreeAbelian(rank), Group::FreeAbelian(rank));
    let ball = metric::bfs_ball(&group, radius, caps)?;
    let mut failures = Vec::new();
    let mut cases = 0;
    for (g, len) in ball.iter() {
        cases += 1;
        let s: &SolvableElement = g.as_solvable().expect("ball of S_{r,2}");
        let image = magnus::magnus_geometric(s.word(), rank, 1)?;
        let m = wreath::wreath_word_length(&top, &base, &image, caps)?;
        if 2 * m < len || m > 2 * len {
            failures.push(format!("{}: |g| = {len}, |φ(g)| = {m}", s.word()));
        }
    }
    Ok(SuiteReport { name: "bi-lipschitz", cases, failures })
}

/// The three suites at the sizes used by `clf selftest`.
pub fn run_all(seed: u64, caps: &Caps) -> Result<Vec<SuiteReport>> {
    Ok(vec![
        fundamental_formula_suite(seed, 1000, 3, 12)?,
        embedding_equivalence_suite(seed, 500, 2, 1, 10)?,
        bi_lipschitz_suite(2, 4, caps)?,
    ])
}
