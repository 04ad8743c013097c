//! The arrangement `A_n(K)` as a gain graph over `K`.
//!
//! Coordinates are 0-based internally (`x_0 .. x_{n-1}`); JSON output
//! shifts them to 1-based.
//!
//! `Edge { i, j, gain: ζ }` with `i < j` is the hyperplane `x_i = ζ x_j`.
//! Read from `j` to `i` the same edge carries `ζ⁻¹`.
//!
//! A flat is a partial `K`-partition: a zero block, and blocks `B` of the
//! remaining coordinates with gains `ξ` such that the flat is
//! `{ x : x_v = 0 (v in zero block), x_v = ξ(v) c_B (v in B) }`.
//! Replacing `ξ` by `v ↦ ξ(v) g` gives the same subspace, so gains are
//! normalized by `ξ(min B) = 1`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finite_groups::{Elem, FiniteGroup};
use crate::matroid::{RankOracle, Restriction};

/// Largest rank the fixed-size union-find supports.
pub const MAX_N: usize = 32;

const ZERO: u8 = u8::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HyperplaneLabel {
    Coord(usize),
    Edge { i: usize, j: usize, gain: Elem },
}

impl fmt::Display for HyperplaneLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            HyperplaneLabel::Coord(i) => write!(f, "x{}", i + 1),
            HyperplaneLabel::Edge { i, j, gain } => write!(f, "x{} - g{} x{}", i + 1, gain, j + 1),
        }
    }
}

/// Label of `x_i = ζ x_j` for any `i ≠ j`.
pub fn canonicalize(k: &FiniteGroup, i: usize, j: usize, gain: Elem) -> Result<HyperplaneLabel> {
    match i.cmp(&j) {
        std::cmp::Ordering::Less => Ok(HyperplaneLabel::Edge { i, j, gain }),
        std::cmp::Ordering::Greater => Ok(HyperplaneLabel::Edge { i: j, j: i, gain: k.inv(gain) }),
        std::cmp::Ordering::Equal => Err(Error::InvalidInput(format!(
            "edge label needs distinct coordinates, got {i} twice"
        ))),
    }
}

#[derive(Debug, Clone)]
pub struct Arrangement {
    k: Arc<FiniteGroup>,
    n: usize,
    include_coords: bool,
    labels: Vec<HyperplaneLabel>,
}

pub fn build_arrangement(k: Arc<FiniteGroup>, n: usize, include_coords: bool) -> Result<Arrangement> {
    if n == 0 || n > MAX_N {
        return Err(Error::InvalidInput(format!("rank n = {n} outside 1..={MAX_N}")));
    }
    let mut labels = Vec::new();
    if include_coords {
        labels.extend((0..n).map(HyperplaneLabel::Coord));
    }
    for i in 0..n {
        for j in i + 1..n {
            labels.extend(k.elements().map(|gain| HyperplaneLabel::Edge { i, j, gain }));
        }
    }
    Ok(Arrangement { k, n, include_coords, labels })
}

impl Arrangement {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn include_coords(&self) -> bool {
        self.include_coords
    }

    pub fn labels(&self) -> &[HyperplaneLabel] {
        &self.labels
    }

    pub fn label(&self, h: usize) -> HyperplaneLabel {
        self.labels[h]
    }

    pub fn num_hyperplanes(&self) -> usize {
        self.labels.len()
    }

    fn pair_offset(&self, i: usize, j: usize) -> usize {
        // pairs (i, j), i < j, in lexicographic order
        let before_i = i * self.n - i * (i + 1) / 2;
        before_i + (j - i - 1)
    }

    /// Position of a label in the fixed order.
    pub fn index_of(&self, label: HyperplaneLabel) -> Result<usize> {
        let coords = if self.include_coords { self.n } else { 0 };
        match label {
            HyperplaneLabel::Coord(i) if self.include_coords && i < self.n => Ok(i),
            HyperplaneLabel::Edge { i, j, gain }
                if i < j && j < self.n && (gain as usize) < self.k.order() =>
            {
                Ok(coords + self.pair_offset(i, j) * self.k.order() + gain as usize)
            }
            _ => Err(Error::InvalidInput(format!("{label} is not in the arrangement"))),
        }
    }

    fn gain_graph(&self, set: &[usize]) -> GainGraph<'_> {
        let mut g = GainGraph::new(&self.k, self.n);
        for &h in set {
            g.add(self.labels[h]);
        }
        g
    }

    /// Matroid rank: `n` minus the number of balanced components of the
    /// gain graph of `set` that carry no coordinate label.
    pub fn rank_of(&self, set: &[usize]) -> usize {
        self.gain_graph(set).rank()
    }

    /// The flat spanned by `set`.
    pub fn closure(&self, set: &[usize]) -> Flat {
        self.gain_graph(set).flat()
    }

    pub fn flat_contains(&self, flat: &Flat, h: usize) -> bool {
        flat.contains(&self.k, self.labels[h])
    }

    /// Indices of the hyperplanes containing the flat.
    pub fn hyperplanes_of(&self, flat: &Flat) -> Vec<usize> {
        (0..self.labels.len()).filter(|&h| self.flat_contains(flat, h)).collect()
    }

    /// Whether the flat is an intersection of hyperplanes of this
    /// arrangement.
    pub fn is_flat(&self, flat: &Flat) -> bool {
        flat.n() == self.n && self.closure(&self.hyperplanes_of(flat)) == *flat
    }

    fn zero_block_allowed(&self, size: usize) -> bool {
        if self.include_coords {
            true
        } else if self.k.order() >= 2 {
            // an unbalanced edge-only component spans at least two vertices
            size != 1
        } else {
            size == 0
        }
    }

    /// All flats, ordered by rank then by generation order.
    pub fn flats(&self) -> Vec<Flat> {
        let n = self.n;
        let mut out = Vec::new();
        for zmask in 0u32..(1 << n) {
            if !self.zero_block_allowed(zmask.count_ones() as usize) {
                continue;
            }
            let rest: Vec<usize> = (0..n).filter(|v| zmask & (1 << v) == 0).collect();
            for_each_set_partition(rest.len(), &mut |rgs: &[u8]| {
                let mut part = vec![ZERO; n];
                for (t, &v) in rest.iter().enumerate() {
                    part[v] = rgs[t];
                }
                // members that are not the first of their block get free gains
                let free: Vec<usize> = rest
                    .iter()
                    .enumerate()
                    .filter(|&(t, _)| rgs[..t].contains(&rgs[t]))
                    .map(|(_, &v)| v)
                    .collect();
                let kk = self.k.order();
                let total = kk.pow(free.len() as u32);
                for code in 0..total {
                    let mut gain = vec![0 as Elem; n];
                    let mut c = code;
                    for &v in free.iter().rev() {
                        gain[v] = (c % kk) as Elem;
                        c /= kk;
                    }
                    out.push(Flat { part: part.clone(), gain });
                }
            });
        }
        out.sort_by_key(Flat::rank);
        out
    }

    pub fn flats_of_rank(&self, rank: usize) -> Vec<Flat> {
        self.flats().into_iter().filter(|f| f.rank() == rank).collect()
    }

    /// `μ(0̂, X)` by recursion over the lower interval of `X`.
    pub fn mobius(&self, flat: &Flat) -> Result<i64> {
        if !self.is_flat(flat) {
            return Err(Error::InvalidInput("not a flat of the arrangement".into()));
        }
        let below: Vec<Flat> = self
            .flats()
            .into_iter()
            .filter(|y| y.is_below(flat, &self.k))
            .collect();
        Ok(*mobius_values(&below, &self.k).last().expect("interval contains X"))
    }

    /// Hyperplanes containing the flat, as an arrangement slice.
    pub fn localize(self: &Arc<Self>, flat: &Flat) -> Result<Localization> {
        if !self.is_flat(flat) {
            return Err(Error::InvalidInput("not a flat of the arrangement".into()));
        }
        let indices = self.hyperplanes_of(flat);
        Ok(Localization {
            flat: flat.clone(),
            oracle: Restriction::new(self.clone(), indices),
        })
    }
}

impl RankOracle for Arrangement {
    fn len(&self) -> usize {
        self.labels.len()
    }

    fn rank(&self, set: &[usize]) -> usize {
        self.rank_of(set)
    }

    fn closure_min(&self, set: &[usize]) -> Option<usize> {
        let flat = self.closure(set);
        let zero = flat.zero_block();
        if self.include_coords && !zero.is_empty() {
            return Some(zero[0]);
        }
        // smallest pair inside one block or inside the zero block; within a
        // zero pair every gain is present and the identity has id 0
        for i in 0..self.n {
            for j in i + 1..self.n {
                let (pi, pj) = (flat.part[i], flat.part[j]);
                if pi == pj {
                    let gain = if pi == ZERO {
                        0
                    } else {
                        self.k.mul(flat.gain[i], self.k.inv(flat.gain[j]))
                    };
                    return self.index_of(HyperplaneLabel::Edge { i, j, gain }).ok();
                }
            }
        }
        None
    }
}

/// Localization `A_X`: the hyperplanes containing `X`, renumbered in the
/// arrangement's order.
pub struct Localization {
    pub flat: Flat,
    pub oracle: Restriction,
}

impl Localization {
    pub fn indices(&self) -> &[usize] {
        self.oracle.indices()
    }
}

/// Union-find with `K`-potentials: `x_v = pot[v] x_{parent[v]}`.
struct GainGraph<'a> {
    k: &'a FiniteGroup,
    n: usize,
    parent: [u8; MAX_N],
    pot: [Elem; MAX_N],
    unbalanced: [bool; MAX_N],
}

impl<'a> GainGraph<'a> {
    fn new(k: &'a FiniteGroup, n: usize) -> Self {
        let mut parent = [0u8; MAX_N];
        for (v, p) in parent.iter_mut().enumerate() {
            *p = v as u8;
        }
        GainGraph { k, n, parent, pot: [0; MAX_N], unbalanced: [false; MAX_N] }
    }

    /// Root of `v` and `P` with `x_v = P x_root`.
    fn find(&self, mut v: usize) -> (usize, Elem) {
        let mut p = 0;
        while self.parent[v] as usize != v {
            p = self.k.mul(p, self.pot[v]);
            v = self.parent[v] as usize;
        }
        (v, p)
    }

    fn add(&mut self, label: HyperplaneLabel) {
        match label {
            HyperplaneLabel::Coord(i) => {
                let (r, _) = self.find(i);
                self.unbalanced[r] = true;
            }
            HyperplaneLabel::Edge { i, j, gain } => {
                let (ri, pi) = self.find(i);
                let (rj, pj) = self.find(j);
                // x_ri = pi⁻¹ ζ pj x_rj
                let link = self.k.mul(self.k.mul(self.k.inv(pi), gain), pj);
                if ri == rj {
                    if link != 0 {
                        self.unbalanced[ri] = true;
                    }
                } else {
                    self.parent[ri] = rj as u8;
                    self.pot[ri] = link;
                    self.unbalanced[rj] |= self.unbalanced[ri];
                }
            }
        }
    }

    fn rank(&self) -> usize {
        let balanced = (0..self.n)
            .filter(|&v| self.parent[v] as usize == v && !self.unbalanced[v])
            .count();
        self.n - balanced
    }

    fn flat(&self) -> Flat {
        let mut part = vec![0u8; self.n];
        let mut gain = vec![0 as Elem; self.n];
        for v in 0..self.n {
            let (r, p) = self.find(v);
            if self.unbalanced[r] {
                part[v] = ZERO;
            } else {
                part[v] = r as u8;
                gain[v] = p;
            }
        }
        Flat::normalized(self.k, part, gain)
    }
}

/// Calls `f` with every restricted growth string of length `len`.
fn for_each_set_partition(len: usize, f: &mut dyn FnMut(&[u8])) {
    fn rec(buf: &mut Vec<u8>, len: usize, max: u8, f: &mut dyn FnMut(&[u8])) {
        if buf.len() == len {
            f(buf);
            return;
        }
        let top = if buf.is_empty() { 0 } else { max + 1 };
        for b in 0..=top {
            buf.push(b);
            rec(buf, len, max.max(b), f);
            buf.pop();
        }
    }
    rec(&mut Vec::with_capacity(len), len, 0, f);
}

/// A partial `K`-partition in canonical form: `part[v]` is the block id
/// (blocks numbered by their smallest member) or the zero marker, and
/// `gain[v]` is `ξ(v)` with `ξ(min B) = 1`; zero coordinates carry gain 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flat {
    part: Vec<u8>,
    gain: Vec<Elem>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Block {
    pub members: Vec<usize>,
    pub gains: Vec<Elem>,
}

impl Flat {
    /// Canonical form of a raw partial `K`-partition. `block[v]` is `None`
    /// for zero coordinates, otherwise an arbitrary block tag.
    pub fn from_raw(k: &FiniteGroup, block: &[Option<usize>], gain: &[Elem]) -> Self {
        let part = block
            .iter()
            .map(|b| b.map_or(ZERO, |t| t as u8))
            .collect();
        Flat::normalized(k, part, gain.to_vec())
    }

    fn normalized(k: &FiniteGroup, part: Vec<u8>, mut gain: Vec<Elem>) -> Self {
        let n = part.len();
        let mut relabel: HashMap<u8, (u8, Elem)> = HashMap::new();
        let mut out = vec![ZERO; n];
        for v in 0..n {
            if part[v] == ZERO {
                gain[v] = 0;
                continue;
            }
            let next = relabel.len() as u8;
            let (id, shift) = *relabel.entry(part[v]).or_insert((next, k.inv(gain[v])));
            out[v] = id;
            gain[v] = k.mul(gain[v], shift);
        }
        Flat { part: out, gain }
    }

    /// The bottom flat: all singletons, nothing zero.
    pub fn bottom(n: usize) -> Self {
        Flat { part: (0..n as u8).collect(), gain: vec![0; n] }
    }

    pub fn n(&self) -> usize {
        self.part.len()
    }

    pub fn is_zero(&self, v: usize) -> bool {
        self.part[v] == ZERO
    }

    /// Block id of a non-zero coordinate.
    pub fn block_of(&self, v: usize) -> Option<usize> {
        (self.part[v] != ZERO).then_some(self.part[v] as usize)
    }

    pub fn gain(&self, v: usize) -> Elem {
        self.gain[v]
    }

    pub fn zero_block(&self) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.is_zero(v)).collect()
    }

    pub fn blocks(&self) -> Vec<Block> {
        let count = self.part.iter().filter(|&&p| p != ZERO).max().map_or(0, |&m| m as usize + 1);
        let mut blocks = vec![Block { members: Vec::new(), gains: Vec::new() }; count];
        for v in 0..self.n() {
            if let Some(b) = self.block_of(v) {
                blocks[b].members.push(v);
                blocks[b].gains.push(self.gain[v]);
            }
        }
        blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks().len()
    }

    /// `|zero block| + Σ (|B| - 1)`.
    pub fn rank(&self) -> usize {
        self.n() - self.num_blocks()
    }

    /// Sorted block sizes, largest first.
    pub fn block_shape(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.blocks().iter().map(|b| b.members.len()).collect();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    }

    pub fn contains(&self, k: &FiniteGroup, label: HyperplaneLabel) -> bool {
        match label {
            HyperplaneLabel::Coord(i) => self.is_zero(i),
            HyperplaneLabel::Edge { i, j, gain } => {
                if self.is_zero(i) && self.is_zero(j) {
                    true
                } else {
                    self.part[i] == self.part[j]
                        && self.part[i] != ZERO
                        && gain == k.mul(self.gain[i], k.inv(self.gain[j]))
                }
            }
        }
    }

    /// Lattice order: `self ≤ other` iff every hyperplane containing `self`
    /// contains `other`.
    pub fn is_below(&self, other: &Flat, k: &FiniteGroup) -> bool {
        let n = self.n();
        let mut first: [Option<usize>; MAX_N] = [None; MAX_N];
        for v in 0..n {
            if self.is_zero(v) {
                if !other.is_zero(v) {
                    return false;
                }
                continue;
            }
            let b = self.part[v] as usize;
            match first[b] {
                None => first[b] = Some(v),
                Some(u) => {
                    if other.is_zero(u) && other.is_zero(v) {
                        continue;
                    }
                    if other.part[u] != other.part[v] || other.is_zero(u) {
                        return false;
                    }
                    let here = k.mul(self.gain[u], k.inv(self.gain[v]));
                    let there = k.mul(other.gain[u], k.inv(other.gain[v]));
                    if here != there {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn to_json(&self, mobius: Option<i64>) -> FlatJson {
        FlatJson {
            zero_block: self.zero_block().iter().map(|v| v + 1).collect(),
            blocks: self
                .blocks()
                .into_iter()
                .map(|b| Block { members: b.members.iter().map(|v| v + 1).collect(), gains: b.gains })
                .collect(),
            rank: self.rank(),
            mobius,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FlatJson {
    #[serde(rename = "zeroBlock")]
    pub zero_block: Vec<usize>,
    pub blocks: Vec<Block>,
    pub rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mobius: Option<i64>,
}

/// Möbius values `μ(0̂, X)` for a rank-sorted, down-closed family of flats.
fn mobius_values(flats: &[Flat], k: &FiniteGroup) -> Vec<i64> {
    let mut mu = Vec::with_capacity(flats.len());
    for (x, fx) in flats.iter().enumerate() {
        if x == 0 {
            mu.push(1);
            continue;
        }
        let rx = fx.rank();
        let s: i64 = flats[..x]
            .iter()
            .zip(&mu)
            .filter(|(fy, _)| fy.rank() < rx && fy.is_below(fx, k))
            .map(|(_, &m)| m)
            .sum();
        mu.push(-s);
    }
    mu
}

/// All flats of an arrangement with their Möbius values.
pub struct Lattice {
    pub flats: Vec<Flat>,
    pub mobius: Vec<i64>,
    index: HashMap<Flat, usize>,
}

impl Lattice {
    pub fn new(arr: &Arrangement) -> Self {
        let flats = arr.flats();
        let mobius = mobius_values(&flats, arr.group());
        let index = flats.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
        Lattice { flats, mobius, index }
    }

    pub fn position(&self, flat: &Flat) -> Option<usize> {
        self.index.get(flat).copied()
    }

    pub fn mobius_of(&self, flat: &Flat) -> Option<i64> {
        self.position(flat).map(|i| self.mobius[i])
    }

    /// Σ_{X of rank k} |μ(X)|.
    pub fn whitney_abs(&self, rank: usize) -> i64 {
        self.flats
            .iter()
            .zip(&self.mobius)
            .filter(|(f, _)| f.rank() == rank)
            .map(|(_, m)| m.abs())
            .sum()
    }

    pub fn max_rank(&self) -> usize {
        self.flats.iter().map(Flat::rank).max().unwrap_or(0)
    }
}

/// Rough count of flats, used for size guards before enumeration.
pub fn estimated_flat_count(k_order: usize, n: usize) -> u128 {
    // every coordinate picks a zero marker or a block with a gain
    ((k_order as u128) + 2).saturating_pow(n as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_groups::build_group;

    fn arr(k: &str, n: usize, coords: bool) -> Arrangement {
        build_arrangement(Arc::new(build_group(k.parse().unwrap()).unwrap()), n, coords).unwrap()
    }

    #[test]
    fn hyperplane_counts() {
        assert_eq!(arr("C1", 3, false).num_hyperplanes(), 3);
        assert_eq!(arr("D2", 3, true).num_hyperplanes(), 27);
        assert_eq!(arr("C2", 2, true).num_hyperplanes(), 4);
        assert_eq!(arr("T", 3, true).num_hyperplanes(), 75);
    }

    #[test]
    fn index_matches_order() {
        let a = arr("D2", 3, true);
        for (h, &l) in a.labels().iter().enumerate() {
            assert_eq!(a.index_of(l).unwrap(), h);
        }
        let mut sorted = a.labels().to_vec();
        sorted.sort();
        assert_eq!(sorted, a.labels());
    }

    #[test]
    fn canonical_labels() {
        let k = build_group("D2".parse().unwrap()).unwrap();
        let z = 3;
        assert_eq!(canonicalize(&k, 0, 1, z).unwrap(), HyperplaneLabel::Edge { i: 0, j: 1, gain: z });
        assert_eq!(
            canonicalize(&k, 1, 0, z).unwrap(),
            HyperplaneLabel::Edge { i: 0, j: 1, gain: k.inv(z) }
        );
        assert_eq!(canonicalize(&k, 2, 0, 0).unwrap(), HyperplaneLabel::Edge { i: 0, j: 2, gain: 0 });
        assert!(canonicalize(&k, 1, 1, 0).is_err());
    }

    #[test]
    fn small_ranks() {
        let a = arr("D2", 2, true);
        let e = |g| a.index_of(HyperplaneLabel::Edge { i: 0, j: 1, gain: g }).unwrap();
        assert_eq!(a.rank(&[]), 0);
        assert_eq!(a.rank(&[e(1), e(2)]), 2);
        assert_eq!(a.rank(&[e(1)]), 1);
        assert_eq!(a.rank(&[0, e(5)]), 2);
        let b = arr("C1", 3, false);
        assert_eq!(b.rank(&[0, 1, 2]), 2);
    }

    #[test]
    fn closure_bottom_and_top() {
        let a = arr("C2", 2, true);
        assert_eq!(a.closure(&[]), Flat::bottom(2));
        assert_eq!(a.closure(&[]).rank(), 0);
        let top = a.closure(&[0, 1]);
        assert_eq!(top.zero_block(), vec![0, 1]);
        assert_eq!(a.hyperplanes_of(&top).len(), 4);
    }

    #[test]
    fn c2_lattice() {
        let a = arr("C2", 2, true);
        assert_eq!(a.flats_of_rank(1).len(), 4);
        assert_eq!(a.flats_of_rank(2).len(), 1);
        let lat = Lattice::new(&a);
        assert_eq!(lat.whitney_abs(2), 3);
        assert_eq!(lat.mobius_of(&Flat::bottom(2)), Some(1));
        let top = &a.flats_of_rank(2)[0];
        assert_eq!(a.mobius(top).unwrap(), 3);
    }

    #[test]
    fn dowling_whitney_numbers() {
        // characteristic polynomial of the Dowling lattice factors as
        // Π (t - 1 - i|K|), i = 0..n-1
        for (k, n) in [("C2", 3), ("D2", 3), ("C3", 2), ("D2", 4)] {
            let a = arr(k, n, true);
            let lat = Lattice::new(&a);
            let m = a.group().order() as i64;
            let mut poly = vec![1i64];
            for i in 0..n as i64 {
                let r = 1 + i * m;
                let mut next = vec![0; poly.len() + 1];
                for (d, &c) in poly.iter().enumerate() {
                    next[d] += c;
                    next[d + 1] += c * r;
                }
                poly = next;
            }
            for (rank, &w) in poly.iter().enumerate() {
                assert_eq!(lat.whitney_abs(rank), w, "{k} n={n} rank {rank}");
            }
        }
    }

    #[test]
    fn flats_are_closed_and_distinct() {
        for (k, n, c) in [("C2", 3, true), ("C3", 3, false), ("D2", 2, true), ("C1", 4, false)] {
            let a = arr(k, n, c);
            let flats = a.flats();
            let distinct: std::collections::HashSet<_> = flats.iter().collect();
            assert_eq!(distinct.len(), flats.len());
            for f in &flats {
                assert!(a.is_flat(f), "{k} {f:?}");
                assert_eq!(a.rank(&a.hyperplanes_of(f)), f.rank());
            }
        }
    }

    #[test]
    fn flat_count_double_count() {
        // closures of all subsets of size <= rank give exactly the flats
        let a = arr("C2", 3, true);
        let m = a.num_hyperplanes();
        let mut seen = std::collections::HashSet::new();
        seen.insert(a.closure(&[]));
        for x in 0..m {
            seen.insert(a.closure(&[x]));
            for y in x + 1..m {
                seen.insert(a.closure(&[x, y]));
                for z in y + 1..m {
                    seen.insert(a.closure(&[x, y, z]));
                }
            }
        }
        let flats: std::collections::HashSet<_> = a.flats().into_iter().collect();
        assert_eq!(seen, flats);
    }

    #[test]
    fn closure_min_matches_scan() {
        let a = arr("D2", 3, true);
        let generic = |set: &[usize]| {
            let r = a.rank(set);
            (0..a.len()).find(|&c| {
                let mut s = set.to_vec();
                s.push(c);
                a.rank(&s) == r
            })
        };
        for x in 0..a.len() {
            for y in (x + 1..a.len()).step_by(5) {
                assert_eq!(a.closure_min(&[x, y]), generic(&[x, y]));
            }
        }
        let b = arr("C3", 3, false);
        for x in 0..b.len() {
            for y in x + 1..b.len() {
                let r = b.rank(&[x, y]);
                let scan = (0..b.len()).find(|&c| b.rank(&[x, y, c]) == r);
                assert_eq!(b.closure_min(&[x, y]), scan);
            }
        }
    }

    #[test]
    fn localization() {
        let a = Arc::new(arr("D2", 3, true));
        let x = a.closure(&[0]);
        let loc = a.localize(&x).unwrap();
        assert_eq!(loc.indices(), &[0]);
        let top = a.closure(&[0, 1, 2]);
        assert_eq!(a.localize(&top).unwrap().indices().len(), 27);
        let bogus = Flat::from_raw(a.group(), &[None, Some(0), Some(1)], &[0, 0, 0]);
        let c = Arc::new(arr("C2", 3, false));
        assert!(c.localize(&bogus).is_err());
    }
}
