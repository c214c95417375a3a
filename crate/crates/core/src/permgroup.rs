//! Finite permutation groups on `{0..m-1}` and their action on chains of subsets.
//!
//! Groups are small (the largest in practice is the symmetric group on seven
//! points), so everything here is exhaustive: closure is a breadth-first
//! search over products of generators and orbit minima are found by sweeping
//! the full element list.

use std::cmp::Ordering;
use std::collections::{HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// Default bound on the number of elements a closure may produce.
pub const DEFAULT_GROUP_CAP: usize = 1_000_000;

/// A bijection of `{0..m-1}`, stored as its image list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    image: Vec<u16>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Self {
            image: (0..degree as u16).collect(),
        }
    }

    /// Builds a permutation from its image list, checking bijectivity.
    pub fn from_images(image: Vec<usize>) -> Result<Self> {
        let m = image.len();
        let mut seen = vec![false; m];
        for &x in &image {
            if x >= m || seen[x] {
                return Err(Error::Parse(format!("{image:?} is not a permutation")));
            }
            seen[x] = true;
        }
        Ok(Self {
            image: image.into_iter().map(|x| x as u16).collect(),
        })
    }

    /// Builds a permutation of `degree` points from disjoint cycles.
    pub fn from_cycles(cycles: &[Vec<usize>], degree: usize) -> Result<Self> {
        let mut image: Vec<usize> = (0..degree).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                if a >= degree {
                    return Err(Error::Parse(format!(
                        "point {a} out of range for degree {degree}"
                    )));
                }
                if touched[a] {
                    return Err(Error::Parse(format!("point {a} appears twice in cycles")));
                }
                touched[a] = true;
                image[a] = cycle[(k + 1) % cycle.len()];
            }
        }
        Self::from_images(image)
    }

    /// Parses a single permutation in cycle notation, e.g. `"(0 1)(2 3)"`.
    /// The identity is written `"()"`.
    pub fn parse(text: &str, degree: usize) -> Result<Self> {
        let cycles = parse_cycles(text)?;
        Self::from_cycles(&cycles, degree)
    }

    pub fn degree(&self) -> usize {
        self.image.len()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.image[i] as usize
    }

    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.image.iter().map(|&x| x as usize)
    }

    /// `self ∘ other`: first apply `other`, then `self`.
    pub fn compose(&self, other: &Self) -> Self {
        debug_assert_eq!(self.degree(), other.degree());
        Self {
            image: other.image.iter().map(|&i| self.image[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut image = vec![0u16; self.degree()];
        for (i, &x) in self.image.iter().enumerate() {
            image[x as usize] = i as u16;
        }
        Self { image }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// Number of points not fixed.
    pub fn support_size(&self) -> usize {
        self.image
            .iter()
            .enumerate()
            .filter(|&(i, &x)| i != x as usize)
            .count()
    }

    /// Image of a subset encoded as a bitmask.
    #[inline]
    pub fn apply_mask(&self, mut mask: u32) -> u32 {
        let mut out = 0u32;
        while mask != 0 {
            let i = mask.trailing_zeros() as usize;
            out |= 1 << self.image[i];
            mask &= mask - 1;
        }
        out
    }

    /// Disjoint cycles of length at least two.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            write!(f, "(")?;
            for (k, x) in cycle.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{}", self)
    }
}

fn parse_cycles(text: &str) -> Result<Vec<Vec<usize>>> {
    let mut cycles = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let Some(body) = rest.strip_prefix('(') else {
            return Err(Error::Parse(format!("expected '(' in {text:?}")));
        };
        let Some(close) = body.find(')') else {
            return Err(Error::Parse(format!("unclosed cycle in {text:?}")));
        };
        let points = body[..close]
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad point {t:?} in {text:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if !points.is_empty() {
            cycles.push(points);
        }
        rest = body[close + 1..].trim_start();
    }
    Ok(cycles)
}

/// Parses a generator list such as `"(0 1 2 3), (0 1)"`. Generators are
/// separated by `,` or `;` outside parentheses.
pub fn parse_generators(text: &str, degree: usize) -> Result<Vec<Permutation>> {
    let mut gens = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    let bytes = text.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth = depth.saturating_sub(1),
            b',' | b';' if depth == 0 => {
                gens.push(Permutation::parse(&text[start..i], degree)?);
                start = i + 1;
            }
            _ => {}
        }
    }
    let tail = text[start..].trim();
    if !tail.is_empty() || gens.is_empty() {
        gens.push(Permutation::parse(tail, degree)?);
    }
    Ok(gens)
}

/// A finite permutation group given by generators, with its full element list.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
}

impl PermGroup {
    pub fn trivial(degree: usize) -> Self {
        Self {
            degree,
            generators: Vec::new(),
            elements: vec![Permutation::identity(degree)],
        }
    }

    /// The full symmetric group on `degree` points.
    pub fn symmetric(degree: usize, cap: usize) -> Result<Self> {
        let mut gens = Vec::new();
        if degree >= 2 {
            gens.push(Permutation::from_cycles(&[vec![0, 1]], degree)?);
            gens.push(Permutation::from_cycles(&[(0..degree).collect()], degree)?);
        }
        closure(&gens, degree, cap)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// All elements, identity first, in breadth-first discovery order.
    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.elements.iter().any(|h| h == g)
    }
}

/// Generates the group spanned by `generators` on `degree` points.
///
/// Fails with [`Error::GroupTooLarge`] as soon as more than `cap` elements
/// have been found.
pub fn closure(generators: &[Permutation], degree: usize, cap: usize) -> Result<PermGroup> {
    for g in generators {
        if g.degree() != degree {
            return Err(Error::DegreeMismatch {
                expected: degree,
                found: g.degree(),
            });
        }
    }
    let gens: Vec<Permutation> = generators
        .iter()
        .filter(|g| !g.is_identity())
        .cloned()
        .collect();
    let identity = Permutation::identity(degree);
    let mut seen: HashSet<Permutation> = HashSet::new();
    let mut elements = vec![identity.clone()];
    seen.insert(identity.clone());
    let mut queue = VecDeque::from([identity]);
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let y = g.compose(&x);
            if seen.insert(y.clone()) {
                if elements.len() >= cap {
                    return Err(Error::GroupTooLarge { cap });
                }
                elements.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(PermGroup {
        degree,
        generators: generators.to_vec(),
        elements,
    })
}

/// True iff some element of `group` moves exactly two points.
pub fn contains_transposition(group: &PermGroup) -> bool {
    group.elements().iter().any(|g| g.support_size() == 2)
}

/// Compares two subsets by their sorted index lists, lexicographically.
pub fn cmp_subsets(a: u32, b: u32) -> Ordering {
    let (mut a, mut b) = (a, b);
    loop {
        match (a == 0, b == 0) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        let (x, y) = (a.trailing_zeros(), b.trailing_zeros());
        if x != y {
            return x.cmp(&y);
        }
        a &= a - 1;
        b &= b - 1;
    }
}

/// A strictly increasing chain `S_0 ⊂ S_1 ⊂ … ⊂ S_k` of nonempty proper
/// subsets of `{0..m-1}`, i.e. a `k`-simplex of the barycentric subdivision
/// of the boundary of the simplex on `m` vertices.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SubsetChain {
    degree: usize,
    sets: Vec<u32>,
}

impl SubsetChain {
    pub fn new(degree: usize, sets: Vec<u32>) -> Result<Self> {
        if degree > 31 {
            return Err(Error::TooLarge(format!("subset chains support degree <= 31, got {degree}")));
        }
        let full = (1u32 << degree) - 1;
        for (i, &s) in sets.iter().enumerate() {
            if s == 0 || s & !full != 0 || s == full {
                return Err(Error::Parse(format!(
                    "set {s:#b} is not a nonempty proper subset of {degree} points"
                )));
            }
            if i > 0 {
                let prev = sets[i - 1];
                if prev & !s != 0 || prev == s {
                    return Err(Error::Parse("chain is not strictly increasing".into()));
                }
            }
        }
        Ok(Self { degree, sets })
    }

    /// Convenience constructor from explicit index lists.
    pub fn from_index_sets(degree: usize, sets: &[&[usize]]) -> Result<Self> {
        let masks = sets
            .iter()
            .map(|s| s.iter().fold(0u32, |m, &i| m | (1 << i)))
            .collect();
        Self::new(degree, masks)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn sets(&self) -> &[u32] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Cardinalities of the sets, in chain order.
    pub fn profile(&self) -> Vec<u32> {
        self.sets.iter().map(|s| s.count_ones()).collect()
    }
}

impl Ord for SubsetChain {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sets.len().cmp(&other.sets.len()).then_with(|| {
            self.sets
                .iter()
                .zip(&other.sets)
                .map(|(&a, &b)| cmp_subsets(a, b))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }
}

impl PartialOrd for SubsetChain {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Applies `g` to every set of the chain.
pub fn act_chain(g: &Permutation, chain: &SubsetChain) -> SubsetChain {
    assert_eq!(g.degree(), chain.degree, "degree mismatch in act_chain");
    SubsetChain {
        degree: chain.degree,
        sets: chain.sets.iter().map(|&s| g.apply_mask(s)).collect(),
    }
}

/// The minimum of the orbit of `chain` under `group`.
pub fn canonical_rep(group: &PermGroup, chain: &SubsetChain) -> SubsetChain {
    group
        .elements()
        .iter()
        .map(|g| act_chain(g, chain))
        .min()
        .unwrap_or_else(|| chain.clone())
}
