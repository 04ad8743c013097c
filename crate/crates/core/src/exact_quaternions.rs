//! Exact quaternions with coefficients in the field Q(√2, √5).
//!
//! A [`FieldElem`] is stored as four rationals `(a, b, c, d)` standing for
//! `a + b√2 + c√5 + d√10`. This field contains every coordinate needed for
//! the binary polyhedral groups (T, O, I), the golden ratio and the
//! Hurwitz-type constants, so all arithmetic below is exact.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

// basis products e_i * e_j = factor * e_k over {1, √2, √5, √10}
const BASIS_MUL: [[(usize, i64); 4]; 4] = [
    [(0, 1), (1, 1), (2, 1), (3, 1)],
    [(1, 1), (0, 2), (3, 1), (2, 2)],
    [(2, 1), (3, 1), (0, 5), (1, 5)],
    [(3, 1), (2, 2), (1, 5), (0, 10)],
];

/// Element of Q(√2, √5) in the basis `{1, √2, √5, √10}`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FieldElem {
    c: [Rational; 4],
}

impl FieldElem {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        FieldElem { c: [a, b, c, d] }
    }

    pub fn from_rational(q: Rational) -> Self {
        FieldElem::new(q, Rational::zero(), Rational::zero(), Rational::zero())
    }

    pub fn int(n: i64) -> Self {
        Self::from_rational(rat(n, 1))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::from_rational(rat(n, d))
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn sqrt2() -> Self {
        FieldElem::new(Rational::zero(), Rational::one(), Rational::zero(), Rational::zero())
    }

    pub fn sqrt5() -> Self {
        FieldElem::new(Rational::zero(), Rational::zero(), Rational::one(), Rational::zero())
    }

    /// (1 + √5) / 2
    pub fn phi() -> Self {
        FieldElem::new(rat(1, 2), Rational::zero(), rat(1, 2), Rational::zero())
    }

    /// (1 - √5) / 2
    pub fn psi() -> Self {
        FieldElem::new(rat(1, 2), Rational::zero(), rat(-1, 2), Rational::zero())
    }

    pub fn coeffs(&self) -> &[Rational; 4] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(Zero::is_zero)
    }

    /// Rational value, if the element lies in Q.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.c[1..].iter().all(Zero::is_zero).then_some(&self.c[0])
    }

    fn conj_by(&self, flip: [bool; 4]) -> Self {
        let mut out = self.clone();
        for (x, f) in out.c.iter_mut().zip(flip) {
            if f {
                *x = -x.clone();
            }
        }
        out
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational(q.recip()));
        }
        // product of the three nontrivial Galois conjugates
        let s2 = self.conj_by([false, true, false, true]);
        let s5 = self.conj_by([false, false, true, true]);
        let s10 = self.conj_by([false, true, true, false]);
        let partner = &(&s2 * &s5) * &s10;
        let norm = self * &partner;
        let n = norm
            .as_rational()
            .expect("field norm is rational")
            .clone();
        Ok(partner.scale(&n.recip()))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        FieldElem {
            c: std::array::from_fn(|i| &self.c[i] * q),
        }
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; 4] = ["", "√2", "√5", "√10"];
        let mut first = true;
        for (q, name) in self.c.iter().zip(NAMES) {
            if q.is_zero() {
                continue;
            }
            let body = format_rational(&q.abs());
            let sign = if q.is_negative() { "-" } else if first { "" } else { "+" };
            if name.is_empty() {
                write!(f, "{sign}{body}")?;
            } else if q.abs().is_one() {
                write!(f, "{sign}{name}")?;
            } else {
                write!(f, "{sign}{body}{name}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: &FieldElem) -> FieldElem {
        FieldElem {
            c: std::array::from_fn(|i| &self.c[i] + &rhs.c[i]),
        }
    }
}

impl Sub for &FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: &FieldElem) -> FieldElem {
        FieldElem {
            c: std::array::from_fn(|i| &self.c[i] - &rhs.c[i]),
        }
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem {
            c: std::array::from_fn(|i| -&self.c[i]),
        }
    }
}

impl Mul for &FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: &FieldElem) -> FieldElem {
        let mut out = FieldElem::zero();
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let (k, factor) = BASIS_MUL[i][j];
                let term = a * b;
                out.c[k] += if factor == 1 { term } else { term * rat(factor, 1) };
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($Trait:ident, $method:ident, $T:ty) => {
        impl $Trait for $T {
            type Output = $T;
            fn $method(self, rhs: $T) -> $T {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add, FieldElem);
forward_owned!(Sub, sub, FieldElem);
forward_owned!(Mul, mul, FieldElem);

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

impl Serialize for FieldElem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let strs: Vec<String> = self.c.iter().map(format_rational).collect();
        strs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldElem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Rational(String),
            Coeffs(Vec<String>),
        }
        let strs = match Repr::deserialize(d)? {
            Repr::Rational(s) => vec![s, "0".into(), "0".into(), "0".into()],
            Repr::Coeffs(v) => v,
        };
        if strs.len() != 4 {
            return Err(D::Error::custom("field element needs 4 coefficients"));
        }
        let mut c: [Rational; 4] = Default::default();
        for (slot, s) in c.iter_mut().zip(&strs) {
            *slot = parse_rational(s).map_err(D::Error::custom)?;
        }
        Ok(FieldElem { c })
    }
}

/// Quaternion `w + x𝐢 + y𝐣 + z𝐤` over Q(√2, √5).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Quat {
    pub w: FieldElem,
    pub x: FieldElem,
    pub y: FieldElem,
    pub z: FieldElem,
}

impl Quat {
    pub fn new(w: FieldElem, x: FieldElem, y: FieldElem, z: FieldElem) -> Self {
        Quat { w, x, y, z }
    }

    /// Quaternion with rational components `n_i / d`.
    pub fn rational(w: i64, x: i64, y: i64, z: i64, d: i64) -> Self {
        Quat::new(
            FieldElem::ratio(w, d),
            FieldElem::ratio(x, d),
            FieldElem::ratio(y, d),
            FieldElem::ratio(z, d),
        )
    }

    pub fn scalar(a: FieldElem) -> Self {
        Quat::new(a, FieldElem::zero(), FieldElem::zero(), FieldElem::zero())
    }

    pub fn zero() -> Self {
        Quat::rational(0, 0, 0, 0, 1)
    }

    pub fn one() -> Self {
        Quat::rational(1, 0, 0, 0, 1)
    }

    pub fn i() -> Self {
        Quat::rational(0, 1, 0, 0, 1)
    }

    pub fn j() -> Self {
        Quat::rational(0, 0, 1, 0, 1)
    }

    pub fn k() -> Self {
        Quat::rational(0, 0, 0, 1, 1)
    }

    pub fn components(&self) -> [&FieldElem; 4] {
        [&self.w, &self.x, &self.y, &self.z]
    }

    pub fn is_zero(&self) -> bool {
        self.components().iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.w.is_one() && self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }

    pub fn conj(&self) -> Self {
        Quat::new(self.w.clone(), -&self.x, -&self.y, -&self.z)
    }

    pub fn norm(&self) -> FieldElem {
        let mut acc = FieldElem::zero();
        for c in self.components() {
            if !c.is_zero() {
                acc = &acc + &(c * c);
            }
        }
        acc
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let ninv = n.inverse()?;
        let c = self.conj();
        Ok(Quat::new(&c.w * &ninv, &c.x * &ninv, &c.y * &ninv, &c.z * &ninv))
    }

    pub fn scale(&self, a: &FieldElem) -> Self {
        Quat::new(&self.w * a, &self.x * a, &self.y * a, &self.z * a)
    }
}

/// Multiplication skipping zero components; matrices over these
/// quaternions are mostly sparse.
impl Mul for &Quat {
    type Output = Quat;
    fn mul(self, q: &Quat) -> Quat {
        let p = self;
        if p.is_zero() || q.is_zero() {
            return Quat::zero();
        }
        let pc = p.components();
        let qc = q.components();
        let mut out = [FieldElem::zero(), FieldElem::zero(), FieldElem::zero(), FieldElem::zero()];
        // e_a e_b = sign * e_c for the basis {1, i, j, k}
        const TABLE: [[(usize, i8); 4]; 4] = [
            [(0, 1), (1, 1), (2, 1), (3, 1)],
            [(1, 1), (0, -1), (3, 1), (2, -1)],
            [(2, 1), (3, -1), (0, -1), (1, 1)],
            [(3, 1), (2, 1), (1, -1), (0, -1)],
        ];
        for a in 0..4 {
            if pc[a].is_zero() {
                continue;
            }
            for b in 0..4 {
                if qc[b].is_zero() {
                    continue;
                }
                let (c, s) = TABLE[a][b];
                let t = pc[a] * qc[b];
                out[c] = if s > 0 { &out[c] + &t } else { &out[c] - &t };
            }
        }
        let [w, x, y, z] = out;
        Quat { w, x, y, z }
    }
}

impl Add for &Quat {
    type Output = Quat;
    fn add(self, q: &Quat) -> Quat {
        Quat::new(&self.w + &q.w, &self.x + &q.x, &self.y + &q.y, &self.z + &q.z)
    }
}

impl Sub for &Quat {
    type Output = Quat;
    fn sub(self, q: &Quat) -> Quat {
        Quat::new(&self.w - &q.w, &self.x - &q.x, &self.y - &q.y, &self.z - &q.z)
    }
}

impl Neg for &Quat {
    type Output = Quat;
    fn neg(self) -> Quat {
        Quat::new(-&self.w, -&self.x, -&self.y, -&self.z)
    }
}

forward_owned!(Add, add, Quat);
forward_owned!(Sub, sub, Quat);
forward_owned!(Mul, mul, Quat);

impl Neg for Quat {
    type Output = Quat;
    fn neg(self) -> Quat {
        -&self
    }
}

impl fmt::Debug for Quat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Quat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})+({})i+({})j+({})k", self.w, self.x, self.y, self.z)
    }
}

impl Serialize for Quat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [&self.w, &self.x, &self.y, &self.z].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Quat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<FieldElem>::deserialize(d)?;
        let [w, x, y, z]: [FieldElem; 4] = v
            .try_into()
            .map_err(|_| D::Error::custom("quaternion needs 4 field elements"))?;
        Ok(Quat { w, x, y, z })
    }
}

pub fn quat_mul(p: &Quat, q: &Quat) -> Quat {
    p * q
}

pub fn quat_inv(q: &Quat) -> Result<Quat> {
    q.inv()
}

pub fn quat_norm(q: &Quat) -> FieldElem {
    q.norm()
}

/// Matrix of the real-linear map attached to `alpha` in the sign argument
/// for the Orlik–Solomon relations.
pub fn left_mult_matrix(alpha: &Quat) -> [[FieldElem; 4]; 4] {
    let [a, b, c, d] = alpha.components().map(Clone::clone);
    [
        [a.clone(), b.clone(), c.clone(), d.clone()],
        [-&b, a.clone(), d.clone(), -&c],
        [-&c, -&d, a.clone(), b.clone()],
        [-&d, c, -&b, a],
    ]
}

/// Determinant of [`left_mult_matrix`], by the Leibniz expansion.
pub fn left_mult_det(alpha: &Quat) -> FieldElem {
    let m = left_mult_matrix(alpha);
    let mut det = FieldElem::zero();
    let mut perm = [0usize, 1, 2, 3];
    for_each_permutation(&mut perm, 0, &mut |p, sign| {
        let mut term = FieldElem::int(sign);
        for (row, &col) in p.iter().enumerate() {
            term = &term * &m[row][col];
        }
        det = &det + &term;
    });
    det
}

fn for_each_permutation(p: &mut [usize; 4], at: usize, f: &mut impl FnMut(&[usize; 4], i64)) {
    if at == p.len() {
        let mut inversions = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                if p[i] > p[j] {
                    inversions += 1;
                }
            }
        }
        f(p, if inversions % 2 == 0 { 1 } else { -1 });
        return;
    }
    for i in at..p.len() {
        p.swap(at, i);
        for_each_permutation(p, at + 1, f);
        p.swap(at, i);
    }
}

/// Closure of a set of unit quaternions under multiplication, in breadth
/// first discovery order starting from 1.
pub fn unit_group_closure(gens: &[Quat], cap: usize) -> Result<Vec<Quat>> {
    for g in gens {
        if !g.norm().is_one() {
            return Err(Error::Precondition(format!("generator {g} is not a unit quaternion")));
        }
    }
    let mut elems = vec![Quat::one()];
    let mut seen: std::collections::HashSet<Quat> = elems.iter().cloned().collect();
    let mut head = 0;
    while head < elems.len() {
        let x = elems[head].clone();
        head += 1;
        for g in gens {
            let y = &x * g;
            if seen.insert(y.clone()) {
                if elems.len() == cap {
                    return Err(Error::CapExceeded(cap));
                }
                elems.push(y);
            }
        }
    }
    Ok(elems)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ij_is_k() {
        assert_eq!(&Quat::i() * &Quat::j(), Quat::k());
        assert_eq!(&Quat::j() * &Quat::i(), -Quat::k());
        assert_eq!(&Quat::k() * &Quat::k(), -Quat::one());
    }

    #[test]
    fn hurwitz_unit_has_order_six() {
        let q = Quat::rational(1, 1, 1, 1, 2);
        assert!(q.norm().is_one());
        let mut p = q.clone();
        let mut order = 1;
        while !p.is_one() {
            p = &p * &q;
            order += 1;
        }
        assert_eq!(order, 6);
    }

    #[test]
    fn inverse_of_j() {
        assert_eq!(quat_inv(&Quat::j()).unwrap(), -Quat::j());
        assert_eq!(quat_inv(&Quat::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn field_inverse_irrational() {
        let x = &FieldElem::phi() + &FieldElem::sqrt2();
        let inv = x.inverse().unwrap();
        assert!((&x * &inv).is_one());
        assert_eq!(FieldElem::zero().inverse(), Err(Error::DivisionByZero));
    }

    #[test]
    fn golden_ratio_identity() {
        let phi = FieldElem::phi();
        assert_eq!(&phi * &phi, &phi + &FieldElem::one());
        assert_eq!(&FieldElem::phi() + &FieldElem::psi(), FieldElem::one());
    }

    #[test]
    fn left_mult_det_examples() {
        assert_eq!(left_mult_det(&Quat::one()), FieldElem::int(1));
        assert_eq!(left_mult_det(&Quat::rational(1, 1, 0, 0, 1)), FieldElem::int(4));
        assert_eq!(left_mult_det(&Quat::rational(0, 0, 2, 0, 1)), FieldElem::int(16));
    }

    #[test]
    fn closures() {
        assert_eq!(unit_group_closure(&[-Quat::one()], 10).unwrap().len(), 2);
        assert_eq!(unit_group_closure(&[Quat::i(), Quat::j()], 10).unwrap().len(), 8);
        let t = unit_group_closure(&[Quat::rational(1, 1, 1, 1, 2), Quat::i()], 200).unwrap();
        assert_eq!(t.len(), 24);
        assert_eq!(
            unit_group_closure(&[Quat::i(), Quat::j()], 5),
            Err(Error::CapExceeded(5))
        );
        assert!(unit_group_closure(&[Quat::rational(1, 1, 0, 0, 1)], 5).is_err());
    }

    #[test]
    fn json_encoding() {
        let q = Quat::new(FieldElem::phi(), FieldElem::ratio(-1, 2), FieldElem::zero(), FieldElem::sqrt5());
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(
            s,
            r#"[["1/2","0","1/2","0"],["-1/2","0","0","0"],["0","0","0","0"],["0","0","1","0"]]"#
        );
        let back: Quat = serde_json::from_str(&s).unwrap();
        assert_eq!(back, q);
        assert!(serde_json::from_str::<Quat>(r#"[["1","0","0"]]"#).is_err());
        let short: Quat = serde_json::from_str(r#"["1/2", "-1/2", ["0","0","0","0"], "0"]"#).unwrap();
        assert_eq!(short, Quat::rational(1, -1, 0, 0, 2));
    }
}
