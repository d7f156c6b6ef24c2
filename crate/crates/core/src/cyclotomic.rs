//! Arithmetic in the cyclotomic field Q(β), β a primitive p-th root of unity.
//!
//! Elements are stored in the basis {β, β², …, β^{p−1}}. This basis is
//! closed under the Galois action: σ: β ↦ β^r permutes it, and the normal
//! basis v_i = β^{r^{i−1}} is a reordering of it. Both σ and normal-basis
//! conversion are therefore coordinate permutations. The constant 1 is the
//! all-(−1) vector because 1 + β + ⋯ + β^{p−1} = 0.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::counter;
use crate::error::{Error, Result};
use crate::linalg::{self, Field};
use crate::transform::Orientation;
use crate::Rational;

/// Trial-division primality, adequate for the primes this crate targets.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn mul_order(a: u64, p: u64) -> u64 {
    let mut x = a % p;
    let mut k = 1;
    while x != 1 {
        x = x * a % p;
        k += 1;
    }
    k
}

/// Smallest primitive root of Z_p for an odd prime p.
pub fn find_primitive_root(p: u64) -> Result<u64> {
    if p < 3 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    (2..p)
        .find(|&r| mul_order(r, p) == p - 1)
        .ok_or(Error::NotOddPrime(p))
}

/// Per-prime tables: primitive root, its powers, and the permutations
/// `q` (r^{q(i)−1} ≡ i) and `s` (r^{s(i)−1} ≡ −i).
///
/// Immutable once built; share it through an `Arc`.
pub struct CycCtx {
    p: usize,
    r: usize,
    /// `r_pow[i] = r^i mod p` for `i` in `0..p-1`.
    r_pow: Vec<usize>,
    /// `q[i-1] = q(i)`, 1-based values.
    q: Vec<usize>,
    s: Vec<usize>,
    k_idx: usize,
    pub(crate) orientation: OnceLock<Orientation>,
}

impl fmt::Debug for CycCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CycCtx").field("p", &self.p).field("r", &self.r).finish()
    }
}

impl CycCtx {
    pub fn new(p: u64) -> Result<Arc<Self>> {
        let r = find_primitive_root(p)? as usize;
        let p = p as usize;
        let n = p - 1;
        let mut r_pow = Vec::with_capacity(n);
        let mut x = 1usize;
        for _ in 0..n {
            r_pow.push(x);
            x = x * r % p;
        }
        let mut q = vec![0usize; n];
        for (e, &val) in r_pow.iter().enumerate() {
            q[val - 1] = e + 1;
        }
        let s: Vec<usize> = (1..p).map(|i| q[p - i - 1]).collect();
        let k_idx = q[p - 2];
        Ok(Arc::new(Self {
            p,
            r,
            r_pow,
            q,
            s,
            k_idx,
            orientation: OnceLock::new(),
        }))
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Field degree p − 1; also the matrix dimension.
    pub fn n(&self) -> usize {
        self.p - 1
    }

    pub fn primitive_root(&self) -> usize {
        self.r
    }

    /// r^e mod p, for any integer e.
    pub fn r_pow(&self, e: i64) -> usize {
        self.r_pow[e.rem_euclid(self.n() as i64) as usize]
    }

    /// q(i): the 1-based index with r^{q(i)−1} ≡ i (mod p).
    pub fn q(&self, i: usize) -> usize {
        self.q[i - 1]
    }

    /// s(i): the 1-based index with r^{s(i)−1} ≡ −i (mod p).
    pub fn s(&self, i: usize) -> usize {
        self.s[i - 1]
    }

    pub fn q_perm(&self) -> &[usize] {
        &self.q
    }

    pub fn s_perm(&self) -> &[usize] {
        &self.s
    }

    /// The index k with r^{k−1} ≡ −1 (mod p).
    pub fn k_idx(&self) -> usize {
        self.k_idx
    }

    pub fn zero(&self) -> CycElem {
        CycElem::zero(self.p)
    }

    pub fn one(&self) -> CycElem {
        CycElem::one(self.p)
    }

    /// β^e.
    pub fn beta_pow(&self, e: i64) -> CycElem {
        CycElem::beta_pow(self.p, e)
    }

    /// Normal basis element v_i = β^{r^{i−1}}, 1-based `i` taken mod p − 1.
    pub fn v(&self, i: i64) -> CycElem {
        self.beta_pow(self.r_pow(i - 1) as i64)
    }

    /// v_1^i = β^i; the evaluation points of interpolation.
    pub fn power_of_v1(&self, i: u64) -> CycElem {
        self.beta_pow((i % self.p as u64) as i64)
    }

    /// Exponent of the β-power equal to v_i.
    pub fn v_exponent(&self, i: i64) -> usize {
        self.r_pow(i - 1)
    }

    fn check(&self, a: &CycElem) -> Result<()> {
        if a.p() != self.p {
            return Err(Error::ContextMismatch {
                left: self.p as u64,
                right: a.p() as u64,
            });
        }
        Ok(())
    }

    /// σ^k(a). σ maps β^i to β^{i·r}, so this is the coordinate permutation
    /// i ↦ i·r^k mod p.
    pub fn sigma(&self, a: &CycElem, k: i64) -> Result<CycElem> {
        self.check(a)?;
        let shift = self.r_pow(k);
        let mut out = vec![BigInt::zero(); self.n()];
        for (i, c) in a.num.iter().enumerate() {
            out[(i + 1) * shift % self.p - 1] = c.clone();
        }
        Ok(CycElem {
            num: out,
            den: a.den.clone(),
        })
    }

    /// Coordinates with respect to {v_1, …, v_{p−1}}.
    pub fn normal_coords(&self, a: &CycElem) -> Result<Vec<Rational>> {
        self.check(a)?;
        Ok(self.r_pow.iter().map(|&e| a.coeff(e - 1)).collect())
    }

    pub fn from_normal_coords(&self, coords: &[Rational]) -> Result<CycElem> {
        if coords.len() != self.n() {
            return Err(crate::error::dim_err(self.n(), coords.len()));
        }
        let mut out = vec![Rational::zero(); self.n()];
        for (c, &e) in coords.iter().zip(&self.r_pow) {
            out[e - 1] = c.clone();
        }
        Ok(CycElem::from_coeffs(out))
    }
}

/// An element of Q(β) in the basis {β, …, β^{p−1}}.
///
/// Stored as integer numerators over a single positive denominator, kept in
/// lowest terms so that equality is structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycElem {
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycElem {
    fn reduced(mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        if num.iter().all(Zero::is_zero) {
            return Self {
                num,
                den: BigInt::one(),
            };
        }
        if den.is_negative() {
            den = -den;
            for x in &mut num {
                *x = -std::mem::take(x);
            }
        }
        let mut g = den.clone();
        for x in &num {
            if g.is_one() {
                break;
            }
            if !x.is_zero() {
                g = g.gcd(x);
            }
        }
        if !g.is_one() {
            for x in &mut num {
                *x /= &g;
            }
            den /= &g;
        }
        Self { num, den }
    }

    /// `coeffs[i]` is the coefficient of β^{i+1}; the length fixes p.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(coeffs.len() >= 2, "need p - 1 >= 2 coordinates");
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs
            .into_iter()
            .map(|c| {
                let (n, d) = c.into_raw();
                n * (&den / d)
            })
            .collect();
        Self::reduced(num, den)
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        assert!(coeffs.len() >= 2, "need p - 1 >= 2 coordinates");
        Self::reduced(coeffs.iter().map(|&c| BigInt::from(c)).collect(), BigInt::one())
    }

    pub fn zero(p: usize) -> Self {
        Self {
            num: vec![BigInt::zero(); p - 1],
            den: BigInt::one(),
        }
    }

    pub fn one(p: usize) -> Self {
        Self::rational(p, &Rational::one())
    }

    /// The rational constant `c`, i.e. `c · 1`.
    pub fn rational(p: usize, c: &Rational) -> Self {
        Self::reduced(vec![-c.numer().clone(); p - 1], c.denom().clone())
    }

    pub fn beta_pow(p: usize, e: i64) -> Self {
        let e = e.rem_euclid(p as i64) as usize;
        if e == 0 {
            return Self::one(p);
        }
        let mut num = vec![BigInt::zero(); p - 1];
        num[e - 1] = BigInt::one();
        Self {
            num,
            den: BigInt::one(),
        }
    }

    pub fn p(&self) -> usize {
        self.num.len() + 1
    }

    /// Coefficient of β^{i+1}.
    pub fn coeff(&self, i: usize) -> Rational {
        Rational::new(self.num[i].clone(), self.den.clone())
    }

    pub fn coeffs(&self) -> Vec<Rational> {
        (0..self.num.len()).map(|i| self.coeff(i)).collect()
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs()
    }

    pub(crate) fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub(crate) fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    /// Sum of absolute values of the coordinates.
    pub fn l1_norm(&self) -> Rational {
        let total: BigInt = self.num.iter().map(Signed::abs).sum();
        Rational::new(total, self.den.clone())
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.p() != other.p() {
            return Err(Error::ContextMismatch {
                left: self.p() as u64,
                right: other.p() as u64,
            });
        }
        Ok(())
    }

    fn combine(&self, rhs: &Self, sub: bool) -> Result<Self> {
        self.check(rhs)?;
        let apply = |a: BigInt, b: BigInt| if sub { a - b } else { a + b };
        if self.den == rhs.den {
            let num = self
                .num
                .iter()
                .zip(&rhs.num)
                .map(|(a, b)| apply(a.clone(), b.clone()))
                .collect();
            return Ok(Self::reduced(num, self.den.clone()));
        }
        let num = self
            .num
            .iter()
            .zip(&rhs.num)
            .map(|(a, b)| apply(a * &rhs.den, b * &self.den))
            .collect();
        Ok(Self::reduced(num, &self.den * &rhs.den))
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.combine(rhs, false)
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.combine(rhs, true)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.p());
        }
        counter::tally(self.num.len() as u64);
        let num = self.num.iter().map(|a| a * c.numer()).collect();
        Self::reduced(num, &self.den * c.denom())
    }

    /// Product via cyclic convolution of exponents mod p, then folding the
    /// β^0 component back with 1 = −(β + ⋯ + β^{p−1}).
    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        self.check(rhs)?;
        let p = self.p();
        let mut acc = vec![BigInt::zero(); p];
        let mut muls = 0u64;
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.num.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                acc[(i + j + 2) % p] += a * b;
                muls += 1;
            }
        }
        counter::tally(muls);
        Ok(Self::reduced(Self::fold(acc), &self.den * &rhs.den))
    }

    /// Reduces a vector indexed by exponents 0..p−1 to the β-power basis.
    fn fold(mut acc: Vec<BigInt>) -> Vec<BigInt> {
        let c0 = std::mem::take(&mut acc[0]);
        let mut num = acc.split_off(1);
        if !c0.is_zero() {
            for c in &mut num {
                *c -= &c0;
            }
        }
        num
    }

    /// β^k · self; a coordinate rotation, no rational products.
    pub fn mul_beta_pow(&self, k: i64) -> Self {
        let p = self.p();
        let k = k.rem_euclid(p as i64) as usize;
        if k == 0 {
            return self.clone();
        }
        let mut acc = vec![BigInt::zero(); p];
        for (i, c) in self.num.iter().enumerate() {
            acc[(i + 1 + k) % p] = c.clone();
        }
        Self::reduced(Self::fold(acc), self.den.clone())
    }

    /// Multiplicative inverse, by solving (multiply-by-self) · x = 1 over Q.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.p();
        let n = p - 1;
        // work with the integer numerator vector; its inverse times den is ours
        let int_part = Self {
            num: self.num.clone(),
            den: BigInt::one(),
        };
        // column j holds numerator · β^{j+1}
        let cols: Vec<Self> = (1..p).map(|j| int_part.mul_beta_pow(j as i64)).collect();
        let m: Vec<Vec<Rational>> = (0..n)
            .map(|i| cols.iter().map(|c| Rational::from_integer(c.num[i].clone())).collect())
            .collect();
        let rhs = vec![-Rational::one(); n];
        let x = linalg::solve(&m, &rhs)?;
        let x = Self::from_coeffs(x);
        let num = x.num.iter().map(|a| a * &self.den).collect();
        Ok(Self::reduced(num, x.den))
    }
}

impl Field for CycElem {
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn zero_like(&self) -> Self {
        Self::zero(self.p())
    }
    fn one_like(&self) -> Self {
        Self::one(self.p())
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn inverse(&self) -> Option<Self> {
        self.inv().ok()
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $try:ident) => {
        impl $tr<&CycElem> for &CycElem {
            type Output = CycElem;
            /// Panics if the operands belong to different fields.
            fn $method(self, rhs: &CycElem) -> CycElem {
                self.$try(rhs).expect("operands from different cyclotomic fields")
            }
        }
        impl $tr for CycElem {
            type Output = CycElem;
            fn $method(self, rhs: CycElem) -> CycElem {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &CycElem {
    type Output = CycElem;
    fn neg(self) -> CycElem {
        CycElem {
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for CycElem {
    type Output = CycElem;
    fn neg(self) -> CycElem {
        -&self
    }
}

impl fmt::Display for CycElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})b^{}", i + 1)?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycElem[")?;
        for (i, c) in self.coeffs().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}
