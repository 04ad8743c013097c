//! Rank oracles over a finite ground set `0..len`.
//!
//! The Orlik–Solomon machinery only talks to an arrangement through this
//! trait, so the gain-graph model and the matrix pipeline share it.

use std::sync::Arc;

use parking_lot::RwLock;
use rustc_hash::FxHashMap;

pub trait RankOracle: Send + Sync {
    fn len(&self) -> usize;

    fn rank(&self, set: &[usize]) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn total_rank(&self) -> usize {
        let all: Vec<usize> = (0..self.len()).collect();
        self.rank(&all)
    }

    fn is_independent(&self, set: &[usize]) -> bool {
        self.rank(set) == set.len()
    }

    /// Smallest element of the closure of `set`, or `None` when the
    /// closure is empty.
    fn closure_min(&self, set: &[usize]) -> Option<usize> {
        let r = self.rank(set);
        let mut buf = set.to_vec();
        buf.push(0);
        let last = buf.len() - 1;
        (0..self.len()).find(|&c| {
            buf[last] = c;
            self.rank(&buf) == r
        })
    }
}

/// The oracle restricted to a sub-ground-set, renumbered `0..indices.len()`
/// in the order given.
pub struct Restriction {
    inner: Arc<dyn RankOracle>,
    indices: Vec<usize>,
}

impl Restriction {
    pub fn new(inner: Arc<dyn RankOracle>, indices: Vec<usize>) -> Self {
        Restriction { inner, indices }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    fn lift(&self, set: &[usize]) -> Vec<usize> {
        set.iter().map(|&i| self.indices[i]).collect()
    }
}

impl RankOracle for Restriction {
    fn len(&self) -> usize {
        self.indices.len()
    }

    fn rank(&self, set: &[usize]) -> usize {
        self.inner.rank(&self.lift(set))
    }
}

/// Memoizes rank queries of an expensive oracle by sorted subset.
pub struct CachedOracle<O> {
    inner: O,
    cache: RwLock<FxHashMap<Vec<usize>, usize>>,
}

impl<O: RankOracle> CachedOracle<O> {
    pub fn new(inner: O) -> Self {
        CachedOracle { inner, cache: RwLock::new(FxHashMap::default()) }
    }

    pub fn inner(&self) -> &O {
        &self.inner
    }
}

impl<O: RankOracle> RankOracle for CachedOracle<O> {
    fn len(&self) -> usize {
        self.inner.len()
    }

    fn rank(&self, set: &[usize]) -> usize {
        let mut key = set.to_vec();
        key.sort_unstable();
        key.dedup();
        if let Some(&r) = self.cache.read().get(&key) {
            return r;
        }
        let r = self.inner.rank(&key);
        self.cache.write().insert(key, r);
        r
    }
}

/// The unique circuit inside `set ∪ {c}`, for independent `set` with
/// `c` in its closure. Returned sorted.
pub fn fundamental_circuit(
    oracle: &dyn RankOracle,
    set: &[usize],
    c: usize,
) -> crate::Result<Vec<usize>> {
    if set.contains(&c) || !oracle.is_independent(set) {
        return Err(crate::Error::Precondition(
            "fundamental circuit needs an independent set not containing c".into(),
        ));
    }
    let mut with_c = set.to_vec();
    with_c.push(c);
    if oracle.rank(&with_c) != set.len() {
        return Err(crate::Error::Precondition(
            "set ∪ {c} is independent".into(),
        ));
    }
    let mut circuit = vec![c];
    for (pos, &s) in set.iter().enumerate() {
        let mut t = with_c.clone();
        t.remove(pos);
        if oracle.rank(&t) == set.len() {
            circuit.push(s);
        }
    }
    circuit.sort_unstable();
    Ok(circuit)
}
