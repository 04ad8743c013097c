//! Closed forms: orbit representatives of parabolic subgroups, the flats
//! carrying top-degree invariants, and Poincaré polynomials of the
//! invariant cohomology.
//!
//! Polynomials are stored in the compressed variable: coefficient `k` is the
//! dimension of invariants in cohomological degree `3k`.

use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::finite_groups::{Elem, FiniteGroup, GroupSpec, KHPair};
use crate::gain_arrangement::Flat;

/// Partitions of `m` in reverse-lexicographic order, `(m)` first.
pub fn partitions(m: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            go(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(m, m, &mut Vec::new(), &mut out);
    out
}

/// Orbit representative `P_λ^α`: blocks of sizes `λ` on the first
/// `m = |λ|` coordinates, the rest zero, with coordinate 1 scaled by `α`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParabolicRep {
    pub lambda: Vec<usize>,
    pub alpha: Elem,
    pub rank: usize,
}

impl ParabolicRep {
    fn new(n: usize, lambda: Vec<usize>, alpha: Elem) -> Self {
        let rank = n - lambda.len();
        ParabolicRep { lambda, alpha, rank }
    }

    pub fn m(&self) -> usize {
        self.lambda.iter().sum()
    }

    /// The fixed flat `X_λ^α`: `x_1 = α c_1` and `x_v = c_B` otherwise.
    pub fn flat(&self, k: &FiniteGroup, n: usize) -> Flat {
        let mut block = vec![None; n];
        let mut gain = vec![k.identity(); n];
        let mut v = 0;
        for (b, &size) in self.lambda.iter().enumerate() {
            for _ in 0..size {
                block[v] = Some(b);
                v += 1;
            }
        }
        gain[0] = self.alpha;
        Flat::from_raw(k, &block, &gain)
    }
}

fn gcd_all(start: usize, parts: &[usize]) -> usize {
    parts.iter().fold(start, |g, &p| g.gcd(&p))
}

fn require_coords(pair: &KHPair) -> Result<()> {
    if pair.h_is_trivial() {
        return Err(Error::Precondition(format!(
            "H = {} is trivial: the arrangement has no coordinate hyperplanes",
            pair.token()
        )));
    }
    Ok(())
}

/// Representatives of the conjugacy classes of parabolic subgroups.
pub fn orbit_representatives(pair: &KHPair, n: usize) -> Result<Vec<ParabolicRep>> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    require_coords(pair)?;
    let k = pair.k();
    let mut reps = Vec::new();
    for m in 0..n {
        for lambda in partitions(m) {
            reps.push(ParabolicRep::new(n, lambda, k.identity()));
        }
    }
    if pair.quotient_is_cyclic() {
        let alpha = pair.quotient_generator().expect("cyclic quotient");
        for lambda in partitions(n) {
            let g = gcd_all(pair.index(), &lambda);
            let mut a = k.identity();
            for _ in 0..g {
                reps.push(ParabolicRep::new(n, lambda.clone(), a));
                a = k.mul(a, alpha);
            }
        }
    } else {
        if pair.quotient_invariants() != [2, 2] {
            return Err(Error::Unclassified(format!(
                "K/H with invariants {:?} is not covered",
                pair.quotient_invariants()
            )));
        }
        for lambda in partitions(n) {
            if gcd_all(0, &lambda) % 2 == 1 {
                reps.push(ParabolicRep::new(n, lambda, k.identity()));
            } else {
                for &a in pair.transversal() {
                    reps.push(ParabolicRep::new(n, lambda.clone(), a));
                }
            }
        }
    }
    Ok(reps)
}

/// Number of orbits of hyperplanes for `n = 2`.
pub fn rank1_orbit_count(pair: &KHPair) -> usize {
    if pair.h_is_trivial() {
        return if pair.k().order().is_multiple_of(2) { 2 } else { 1 };
    }
    match (pair.index().is_multiple_of(2), pair.quotient_is_cyclic()) {
        (true, true) => 3,
        (true, false) => 5,
        _ => 2,
    }
}

/// Types of flats carrying top-degree invariants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BasisType {
    /// `G_k(K,H)`: the first `k` coordinates vanish.
    G(usize),
    /// `G_{k-1}(K,H) A_1`: the first `k-1` coordinates vanish and `x_k = x_{k+1}`.
    GA1(usize),
}

impl BasisType {
    pub fn rank(&self) -> usize {
        match *self {
            BasisType::G(k) | BasisType::GA1(k) => k,
        }
    }

    pub fn flat(&self, k: &FiniteGroup, n: usize) -> Flat {
        let (zeros, pair) = match *self {
            BasisType::G(r) => (r, false),
            BasisType::GA1(r) => (r - 1, true),
        };
        let mut block: Vec<Option<usize>> = (0..n).map(Some).collect();
        for b in block.iter_mut().take(zeros) {
            *b = None;
        }
        if pair {
            block[zeros + 1] = Some(zeros);
        }
        Flat::from_raw(k, &block, &vec![k.identity(); n])
    }
}

impl fmt::Display for BasisType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            BasisType::G(0) => write!(f, "A0"),
            BasisType::GA1(1) => write!(f, "A1"),
            BasisType::G(k) => write!(f, "G{k}"),
            BasisType::GA1(k) => write!(f, "G{}A1", k - 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TdiRep {
    pub rank: usize,
    /// Block sizes of the non-zero coordinates.
    pub partition: Vec<usize>,
    #[serde(rename = "type")]
    pub kind: BasisType,
    pub dim: usize,
}

/// Dimension of the top-degree invariants of the full group:
/// 2 or 4 when `n` and `[K:H]` are even, 1 otherwise.
pub fn top_dimension(pair: &KHPair, n: usize) -> usize {
    if n.is_multiple_of(2) && pair.index().is_multiple_of(2) {
        if pair.quotient_is_cyclic() {
            2
        } else {
            4
        }
    } else {
        1
    }
}

/// Flats (up to conjugacy) with non-zero top-degree invariants, with the
/// dimension of those invariants.
pub fn tdi_representatives(pair: &KHPair, n: usize) -> Result<Vec<TdiRep>> {
    if n < 3 {
        return Err(Error::Precondition(format!("n = {n} < 3")));
    }
    require_coords(pair)?;
    let e = top_dimension(pair, n);
    let mut out = vec![TdiRep { rank: 0, partition: vec![1; n], kind: BasisType::G(0), dim: 1 }];
    for k in 1..n {
        let mut with_pair = vec![2];
        with_pair.extend(std::iter::repeat_n(1, n - k - 1));
        let dim_pair = if k == n - 1 { e } else { 1 };
        out.push(TdiRep { rank: k, partition: with_pair, kind: BasisType::GA1(k), dim: dim_pair });
        out.push(TdiRep { rank: k, partition: vec![1; n - k], kind: BasisType::G(k), dim: 1 });
    }
    out.push(TdiRep { rank: n, partition: Vec::new(), kind: BasisType::G(n), dim: e });
    Ok(out)
}

/// Invariant Poincaré polynomial in the compressed variable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PoincarePolynomial {
    pub coeffs: Vec<usize>,
}

impl PoincarePolynomial {
    pub fn new(coeffs: Vec<usize>) -> Self {
        PoincarePolynomial { coeffs }
    }

    /// Coefficients with trailing zeros removed.
    pub fn trimmed(&self) -> &[usize] {
        let end = self.coeffs.iter().rposition(|&c| c != 0).map_or(0, |p| p + 1);
        &self.coeffs[..end]
    }

    /// Equality up to trailing zeros.
    pub fn same_as(&self, other: &PoincarePolynomial) -> bool {
        self.trimmed() == other.trimmed()
    }

    pub fn euler_sum(&self) -> i64 {
        crate::equivariant::euler_sum(&self.coeffs)
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.coeffs.len()).map(|k| 3 * k).collect()
    }
}

impl fmt::Display for PoincarePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let var = match 3 * k {
                0 => String::new(),
                d => format!("t^{d}"),
            };
            match (c, k) {
                (_, 0) => write!(f, "{c}")?,
                (1, _) => write!(f, "{var}")?,
                _ => write!(f, "{c}{var}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `[1, 2, ..., 2, tail...]` of total length `n + 1`.
fn twos_then(n: usize, tail: &[usize]) -> Vec<usize> {
    let mut v = vec![1];
    v.extend(std::iter::repeat_n(2, n + 1 - 1 - tail.len()));
    v.extend_from_slice(tail);
    v
}

/// Closed-form Poincaré polynomial of the invariants.
pub fn closed_form_poincare(pair: &KHPair, n: usize) -> Result<PoincarePolynomial> {
    if n < 2 {
        return Err(Error::Precondition(format!("n = {n} < 2")));
    }
    let n_even = n.is_multiple_of(2);
    let coeffs = match pair.k().spec() {
        GroupSpec::Cyclic(r) => {
            let p = pair.index();
            if p == r {
                let rank = if r == 1 { n - 1 } else { n };
                let mut c = vec![0; rank + 1];
                c[0] = 1;
                c[1] += 1;
                if n_even && r % 2 == 0 {
                    c[n - 1] += 1;
                    c[n] += 1;
                }
                c
            } else if n_even && p.is_multiple_of(2) {
                twos_then(n, &[3, 2])
            } else {
                twos_then(n, &[1])
            }
        }
        _ => {
            require_coords(pair)?;
            if n == 2 {
                let a = rank1_orbit_count(pair);
                vec![1, a, a - 1]
            } else {
                match top_dimension(pair, n) {
                    2 => twos_then(n, &[3, 2]),
                    4 => twos_then(n, &[5, 4]),
                    _ => twos_then(n, &[1]),
                }
            }
        }
    };
    Ok(PoincarePolynomial::new(coeffs))
}
