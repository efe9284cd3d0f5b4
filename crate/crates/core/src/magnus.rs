//! Free solvable groups `S_{r,d} = F_r / F_r^{(d)}` through their Magnus
//! embeddings into `Z^r ≀ S_{r,d-1}`.
//!
//! The geometric form of a word is read off its path in `Cay(S_{r,d-1})`:
//! each positive edge `g → g x_i` adds `e_i` at `g`, each negative edge
//! subtracts it. The algebraic form collects the pushed-forward Fox
//! derivatives. Both agree, and two words are equal in `S_{r,d}` exactly
//! when their forms are.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::fox::{self, RingElement};
use crate::group::{Element, Group};
use crate::wreath::{self, WreathElement};
use crate::word::ReducedWord;

/// `Z^r` when `d = 1`, else `S_{r,d}`.
pub fn solvable_quotient(rank: usize, depth: usize) -> Group {
    if depth <= 1 {
        Group::FreeAbelian(rank)
    } else {
        Group::free_solvable(rank, depth)
    }
}

/// The group the normal forms of `S_{r,d}` live in: `Z^r` for `d = 1`,
/// otherwise `Z^r ≀ S_{r,d-1}`.
pub fn normal_form_group(rank: usize, depth: usize) -> Group {
    if depth <= 1 {
        Group::FreeAbelian(rank)
    } else {
        Group::wreath(Group::FreeAbelian(rank), solvable_quotient(rank, depth - 1))
    }
}

/// An element of `S_{r,d}`, `d >= 1`: a representative word together with
/// its normal form. Equality, ordering and hashing see only the normal form.
#[derive(Clone)]
pub struct SolvableElement {
    rank: usize,
    depth: usize,
    word: ReducedWord,
    nf: Element,
}

impl SolvableElement {
    pub fn identity(rank: usize, depth: usize) -> Self {
        SolvableElement {
            rank,
            depth,
            word: ReducedWord::empty(rank),
            nf: normal_form_group(rank, depth).identity(),
        }
    }

    pub fn from_word(rank: usize, depth: usize, word: ReducedWord) -> Result<Self> {
        if depth == 0 {
            return Err(Error::input("derived length must be at least 1"));
        }
        if word.rank() > rank {
            return Err(Error::input(format!("word of rank {} in S_{{{rank},{depth}}}", word.rank())));
        }
        let word = ReducedWord::reduce(rank, word.letters())?;
        let nf = solvable_normal_form(&word, depth)?;
        Ok(SolvableElement { rank, depth, word, nf })
    }

    /// Rebuilds an element from its normal form, recovering a word for it.
    /// Fails with an input error when `nf` is not in the image of the
    /// embedding.
    pub fn from_normal_form(rank: usize, depth: usize, nf: Element) -> Result<Self> {
        normal_form_group(rank, depth).check(&nf)?;
        let word = if depth == 1 {
            Group::FreeAbelian(rank).word_for(&nf).expect("vectors have words")
        } else {
            let w = nf.as_wreath().expect("checked above");
            word_from_image(rank, depth - 1, w)?
        };
        Ok(SolvableElement { rank, depth, word, nf })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn word(&self) -> &ReducedWord {
        &self.word
    }

    pub fn normal_form(&self) -> &Element {
        &self.nf
    }

    fn same_group(&self, other: &SolvableElement) -> Result<()> {
        if (self.rank, self.depth) != (other.rank, other.depth) {
            return Err(Error::input(format!(
                "elements of S_{{{},{}}} and S_{{{},{}}} cannot be combined",
                self.rank, self.depth, other.rank, other.depth
            )));
        }
        Ok(())
    }

    pub fn mul(&self, other: &SolvableElement) -> Result<Self> {
        self.same_group(other)?;
        let nf = normal_form_group(self.rank, self.depth).mul(&self.nf, &other.nf)?;
        Ok(SolvableElement {
            rank: self.rank,
            depth: self.depth,
            word: self.word.mul(&other.word),
            nf,
        })
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(SolvableElement {
            rank: self.rank,
            depth: self.depth,
            word: self.word.inverse(),
            nf: normal_form_group(self.rank, self.depth).inv(&self.nf)?,
        })
    }
}

impl PartialEq for SolvableElement {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for SolvableElement {}

impl Ord for SolvableElement {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.rank, self.depth, &self.nf).cmp(&(other.rank, other.depth, &other.nf))
    }
}

impl PartialOrd for SolvableElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Hash for SolvableElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rank.hash(state);
        self.depth.hash(state);
        self.nf.hash(state);
    }
}

impl fmt::Debug for SolvableElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S({},{})[{}]", self.rank, self.depth, self.word)
    }
}

/// Normal form of `w` in `S_{r,d}`.
pub fn solvable_normal_form(w: &ReducedWord, depth: usize) -> Result<Element> {
    match depth {
        0 => Err(Error::input("derived length must be at least 1")),
        1 => Ok(Element::Vector(w.exponent_sums())),
        _ => Ok(Element::wreath(magnus_geometric(w, w.rank(), depth - 1)?)),
    }
}

/// The Magnus image of `w` in `Z^r ≀ S_{r,d}` built from the path of `w`
/// in `Cay(S_{r,d})`.
pub fn magnus_geometric(w: &ReducedWord, rank: usize, depth: usize) -> Result<WreathElement> {
    if depth == 0 {
        return Err(Error::input("derived length must be at least 1"));
    }
    if w.rank() > rank {
        return Err(Error::input(format!("word of rank {} with r = {rank}", w.rank())));
    }
    let base = solvable_quotient(rank, depth);
    let gens = base.positive_generators()?;
    let gens_inv: Vec<Element> = gens.iter().map(|g| base.inv(g)).collect::<Result<_>>()?;
    let mut lamps: BTreeMap<Element, Vec<i64>> = BTreeMap::new();
    let mut cursor = base.identity();
    for &x in w.letters() {
        let i = x.unsigned_abs() as usize - 1;
        if x > 0 {
            lamps.entry(cursor.clone()).or_insert_with(|| vec![0; rank])[i] += 1;
            cursor = base.mul(&cursor, &gens[i])?;
        } else {
            cursor = base.mul(&cursor, &gens_inv[i])?;
            lamps.entry(cursor.clone()).or_insert_with(|| vec![0; rank])[i] -= 1;
        }
    }
    Ok(WreathElement {
        lamps: lamps
            .into_iter()
            .filter(|(_, v)| v.iter().any(|&c| c != 0))
            .map(|(k, v)| (k, Element::Vector(v)))
            .collect(),
        cursor,
    })
}

/// `(ᾱ(w), (∂*w/∂x_1, …, ∂*w/∂x_r))` over `S_{r,d}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MagnusImage {
    pub quotient: Element,
    pub coords: Vec<RingElement>,
}

impl MagnusImage {
    /// The same data as an element of `Z^r ≀ S_{r,d}`.
    pub fn to_wreath(&self) -> WreathElement {
        let rank = self.coords.len();
        let mut lamps: BTreeMap<Element, Vec<i64>> = BTreeMap::new();
        for (i, coord) in self.coords.iter().enumerate() {
            for (g, c) in coord.terms() {
                lamps.entry(g.clone()).or_insert_with(|| vec![0; rank])[i] = c;
            }
        }
        WreathElement {
            lamps: lamps.into_iter().map(|(k, v)| (k, Element::Vector(v))).collect(),
            cursor: self.quotient.clone(),
        }
    }
}

pub fn magnus_algebraic(w: &ReducedWord, rank: usize, depth: usize) -> Result<MagnusImage> {
    if depth == 0 {
        return Err(Error::input("derived length must be at least 1"));
    }
    let target = solvable_quotient(rank, depth);
    let w = ReducedWord::reduce(rank, w.letters())?;
    let coords = (1..=rank)
        .map(|i| fox::fox_star(&w, i, &target))
        .collect::<Result<Vec<_>>>()?;
    Ok(MagnusImage {
        quotient: target.project_word(&w)?,
        coords,
    })
}

/// `Σ_f(g) = Σ_i f_i(g) - Σ_i f_i(g x_i⁻¹)`. For the image of a word
/// this is `δ_e - δ_{ᾱ(w)}`.
pub fn divergence(u: &WreathElement, rank: usize, depth: usize) -> Result<BTreeMap<Element, i64>> {
    let base = solvable_quotient(rank, depth);
    let gens = base.positive_generators()?;
    let mut out: BTreeMap<Element, i64> = BTreeMap::new();
    for (g, val) in &u.lamps {
        let f = val
            .as_vector()
            .ok_or_else(|| Error::input("lamp values must lie in Z^r"))?;
        for (i, &c) in f.iter().enumerate() {
            *out.entry(g.clone()).or_insert(0) += c;
            *out.entry(base.mul(g, &gens[i])?).or_insert(0) -= c;
        }
    }
    out.retain(|_, c| *c != 0);
    Ok(out)
}

/// A distortion bound for cyclic subgroups of `S_{r,d}`: whenever
/// `|x^k| <= n` for nontrivial `x`, `|k| <= 2n`.
pub fn solvable_cyclic_distortion_bound(n: u64) -> u64 {
    2 * n
}

/// A word whose Magnus image in `Z^r ≀ S_{r,d}` is `u`, read off as an
/// Eulerian trail of the multigraph the lamps describe. Pieces not connected
/// to `e` are joined by back-and-forth edge pairs along a word for one of
/// their vertices, which leaves the image unchanged.
pub fn word_from_image(rank: usize, depth: usize, u: &WreathElement) -> Result<ReducedWord> {
    let base = solvable_quotient(rank, depth);
    base.check(&u.cursor)?;
    let end = u.cursor.clone();
    let start = base.identity();
    let mut expected = BTreeMap::new();
    if start != end {
        expected.insert(start.clone(), 1);
        expected.insert(end.clone(), -1);
    }
    if divergence(u, rank, depth)? != expected {
        return Err(Error::input(
            "lamp configuration is not the image of a word: divergence check failed",
        ));
    }

    let gens = base.positive_generators()?;
    let mut graph = Multigraph::default();
    graph.vertex(start.clone());
    graph.vertex(end.clone());
    for (g, val) in &u.lamps {
        let next = |i: usize| base.mul(g, &gens[i]);
        for (i, &c) in val.as_vector().expect("checked by divergence").iter().enumerate() {
            let letter = i as i32 + 1;
            for _ in 0..c.unsigned_abs() {
                if c > 0 {
                    graph.edge(g.clone(), next(i)?, letter);
                } else {
                    graph.edge(next(i)?, g.clone(), -letter);
                }
            }
        }
    }

    // Bridge every component not reachable from the start.
    loop {
        let comps = graph.components();
        let root = comps[graph.index[&start]];
        let stray = graph
            .names
            .iter()
            .enumerate()
            .filter(|(v, _)| comps[*v] != root)
            .map(|(_, name)| name.clone())
            .min();
        let Some(p) = stray else { break };
        let path = base
            .word_for(&p)
            .ok_or_else(|| Error::Internal("no word for a base element".into()))?;
        let mut at = start.clone();
        for &x in path.letters() {
            let step = if x > 0 {
                gens[x as usize - 1].clone()
            } else {
                base.inv(&gens[(-x) as usize - 1])?
            };
            let next = base.mul(&at, &step)?;
            graph.edge(at.clone(), next.clone(), x);
            graph.edge(next.clone(), at, -x);
            at = next;
        }
    }

    let letters = graph.euler_trail(graph.index[&start]);
    if letters.len() != graph.edges.len() {
        return Err(Error::Internal("Eulerian trail did not use every edge".into()));
    }
    let word = ReducedWord::reduce(rank, &letters)?;
    if magnus_geometric(&word, rank, depth)? != *u {
        return Err(Error::Internal("recovered word has a different image".into()));
    }
    Ok(word)
}

#[derive(Default)]
struct Multigraph {
    names: Vec<Element>,
    index: BTreeMap<Element, usize>,
    edges: Vec<(usize, usize, i32)>,
    out: Vec<Vec<usize>>,
}

impl Multigraph {
    fn vertex(&mut self, v: Element) -> usize {
        if let Some(&i) = self.index.get(&v) {
            return i;
        }
        let i = self.names.len();
        self.names.push(v.clone());
        self.index.insert(v, i);
        self.out.push(Vec::new());
        i
    }

    fn edge(&mut self, from: Element, to: Element, letter: i32) {
        let (a, b) = (self.vertex(from), self.vertex(to));
        self.out[a].push(self.edges.len());
        self.edges.push((a, b, letter));
    }

    /// Weakly connected component label of each vertex.
    fn components(&self) -> Vec<usize> {
        let n = self.names.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(a, b, _) in &self.edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
            }
        }
        (0..n).map(|v| find(&mut parent, v)).collect()
    }

    /// Hierholzer's algorithm; returns edge letters in trail order.
    fn euler_trail(&self, start: usize) -> Vec<i32> {
        let mut next = vec![0usize; self.names.len()];
        let mut stack: Vec<(usize, Option<i32>)> = vec![(start, None)];
        let mut trail = Vec::with_capacity(self.edges.len());
        while let Some(&(v, _)) = stack.last() {
            if next[v] < self.out[v].len() {
                let (_, to, letter) = self.edges[self.out[v][next[v]]];
                next[v] += 1;
                stack.push((to, Some(letter)));
            } else {
                let (_, letter) = stack.pop().expect("nonempty");
                if let Some(l) = letter {
                    trail.push(l);
                }
            }
        }
        trail.reverse();
        trail
    }
}

/// Multiplies two images as wreath elements.
pub fn image_mul(rank: usize, depth: usize, a: &WreathElement, b: &WreathElement) -> Result<WreathElement> {
    wreath::wreath_mul(&Group::FreeAbelian(rank), &solvable_quotient(rank, depth), a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::random_word;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn w(text: &str) -> ReducedWord {
        ReducedWord::parse(2, text).unwrap()
    }

    fn v(x: &[i64]) -> Element {
        Element::Vector(x.to_vec())
    }

    #[test]
    fn geometric_examples() {
        let img = magnus_geometric(&w("x1 x2 X1 X2"), 2, 1).unwrap();
        // Unit square traversed once: e_1 at (0,0), e_2 at (1,0), -e_1 at (0,1), -e_2 at (0,0).
        let expected = BTreeMap::from([
            (v(&[0, 0]), v(&[1, -1])),
            (v(&[1, 0]), v(&[0, 1])),
            (v(&[0, 1]), v(&[-1, 0])),
        ]);
        assert_eq!(img.lamps, expected);
        assert_eq!(img.cursor, v(&[0, 0]));
        assert_eq!(magnus_geometric(&ReducedWord::empty(2), 2, 1).unwrap(), WreathElement::identity(&Group::FreeAbelian(2)));
    }

    #[test]
    fn metabelian_identities() {
        let s22 = Group::free_solvable(2, 2);
        let e = |t: &str| s22.project_word(&w(t)).unwrap();
        // Commutators commute in S_{2,2}.
        let c1 = e("x1 x2 X1 X2");
        let c2 = e("x1 x1 x2 X1 X1 X2");
        assert!(s22.commutes(&c1, &c2).unwrap());
        assert_ne!(c1, s22.identity());
        // But not in S_{2,3}.
        let s23 = Group::free_solvable(2, 3);
        let f = |t: &str| s23.project_word(&w(t)).unwrap();
        assert!(!s23.commutes(&f("x1 x2 X1 X2"), &f("x1 x1 x2 X1 X1 X2")).unwrap());
        // Equal words give equal elements regardless of the representative.
        assert_eq!(e("x1 x2 X1 X2 x2 x1 X2 X1"), s22.identity());
    }

    #[test]
    fn from_normal_form_recovers_words() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for depth in 2..=3 {
            for _ in 0..40 {
                let word = random_word(&mut rng, 2, 10);
                let s = SolvableElement::from_word(2, depth, word).unwrap();
                let back = SolvableElement::from_normal_form(2, depth, s.normal_form().clone()).unwrap();
                assert_eq!(back, s);
            }
        }
    }

    #[test]
    fn rejects_non_images() {
        let bad = WreathElement {
            lamps: BTreeMap::from([(v(&[0, 0]), v(&[1, 0]))]),
            cursor: v(&[0, 0]),
        };
        assert!(matches!(word_from_image(2, 1, &bad), Err(Error::Input(_))));
    }

    #[test]
    fn disconnected_images_are_bridged() {
        // A loop around the square at (3,0) with the cursor at e.
        let u = magnus_geometric(&w("x1 x1 x1 x1 x2 X1 X2 X1 X1 X1"), 2, 1).unwrap();
        let word = word_from_image(2, 1, &u).unwrap();
        assert_eq!(magnus_geometric(&word, 2, 1).unwrap(), u);
    }

    #[test]
    fn divergence_of_images() {
        let u = magnus_geometric(&w("x1 x1 x2"), 2, 1).unwrap();
        let d = divergence(&u, 2, 1).unwrap();
        assert_eq!(d, BTreeMap::from([(v(&[0, 0]), 1), (v(&[2, 1]), -1)]));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn embeddings_agree(seed in any::<u64>(), depth in 1usize..=2, rank in 1usize..=3) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let word = random_word(&mut rng, rank, 12);
            let geo = magnus_geometric(&word, rank, depth).unwrap();
            let alg = magnus_algebraic(&word, rank, depth).unwrap();
            prop_assert_eq!(alg.to_wreath(), geo);
        }

        #[test]
        fn embedding_is_a_homomorphism(seed in any::<u64>(), depth in 1usize..=2) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_word(&mut rng, 2, 10);
            let b = random_word(&mut rng, 2, 10);
            let lhs = magnus_geometric(&a.mul(&b), 2, depth).unwrap();
            let rhs = image_mul(2, depth, &magnus_geometric(&a, 2, depth).unwrap(), &magnus_geometric(&b, 2, depth).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn divergence_identity(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let word = random_word(&mut rng, 2, 14);
            let u = magnus_geometric(&word, 2, 1).unwrap();
            let alpha = Element::Vector(word.exponent_sums());
            let mut expected = BTreeMap::new();
            if alpha != v(&[0, 0]) {
                expected.insert(v(&[0, 0]), 1);
                expected.insert(alpha, -1);
            }
            prop_assert_eq!(divergence(&u, 2, 1).unwrap(), expected);
        }
    }
}
