//! Images of Q(β) in a prime field F_ℓ with ℓ ≡ 1 (mod p), where β maps to a
//! primitive p-th root of unity ω. Used to guess structure cheaply; anything
//! found here must be confirmed over Q(β) before it is trusted.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::cyclotomic::{is_prime, CycElem};
use crate::linalg::Field;

/// An element of F_ℓ. The modulus rides along so the generic linear algebra
/// can build zeros and ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Fl {
    pub v: u64,
    pub l: u64,
}

fn mul_mod(a: u64, b: u64, l: u64) -> u64 {
    ((a as u128 * b as u128) % l as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, l: u64) -> u64 {
    let mut acc = 1 % l;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, l);
        }
        a = mul_mod(a, a, l);
        e >>= 1;
    }
    acc
}

impl Field for Fl {
    fn is_zero_elem(&self) -> bool {
        self.v == 0
    }
    fn zero_like(&self) -> Self {
        Fl { v: 0, l: self.l }
    }
    fn one_like(&self) -> Self {
        Fl { v: 1, l: self.l }
    }
    fn plus(&self, rhs: &Self) -> Self {
        Fl {
            v: (self.v + rhs.v) % self.l,
            l: self.l,
        }
    }
    fn minus(&self, rhs: &Self) -> Self {
        Fl {
            v: (self.v + self.l - rhs.v) % self.l,
            l: self.l,
        }
    }
    fn times(&self, rhs: &Self) -> Self {
        Fl {
            v: mul_mod(self.v, rhs.v, self.l),
            l: self.l,
        }
    }
    fn inverse(&self) -> Option<Self> {
        (self.v != 0).then(|| Fl {
            v: pow_mod(self.v, self.l - 2, self.l),
            l: self.l,
        })
    }
}

/// The ring map Q(β) → F_ℓ, β ↦ ω.
pub(crate) struct Embedding {
    l: u64,
    /// `omega_pow[e] = ω^e` for `e` in `0..p`.
    omega_pow: Vec<u64>,
}

impl Embedding {
    /// The `index`-th prime ℓ ≡ 1 (mod p) above 2^31, with its ω.
    pub fn nth(p: usize, index: usize) -> Self {
        let p64 = p as u64;
        let mut l = (1u64 << 31) / p64 * p64 + 1;
        let mut found = 0;
        loop {
            if l > 1 << 31 && is_prime(l) {
                if found == index {
                    break;
                }
                found += 1;
            }
            l += p64;
        }
        let omega = (2..l)
            .map(|x| pow_mod(x, (l - 1) / p64, l))
            .find(|&w| w != 1)
            .expect("F_l* has elements of order p");
        let omega_pow = (0..p as u64).map(|e| pow_mod(omega, e, l)).collect();
        Self { l, omega_pow }
    }

    pub fn elem(&self, v: u64) -> Fl {
        Fl { v: v % self.l, l: self.l }
    }

    /// ω^e for any integer e.
    pub fn omega_pow(&self, e: i64) -> Fl {
        let p = self.omega_pow.len() as i64;
        self.elem(self.omega_pow[e.rem_euclid(p) as usize])
    }

    fn big(&self, x: &BigInt) -> u64 {
        let r = x % BigInt::from(self.l);
        let r = if r < BigInt::zero() { r + self.l } else { r };
        r.to_u64().expect("reduced below l")
    }

    /// Image of `a`, or `None` when ℓ divides its denominator.
    pub fn image(&self, a: &CycElem) -> Option<Fl> {
        let den = self.big(a.denominator());
        if den == 0 {
            return None;
        }
        let mut acc = 0u64;
        for (i, c) in a.numerators().iter().enumerate() {
            if !c.is_zero() {
                acc = (acc + mul_mod(self.big(c), self.omega_pow[i + 1], self.l)) % self.l;
            }
        }
        Some(self.elem(acc).times(&self.elem(den).inverse()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedding_is_a_ring_map() {
        for p in [3usize, 5, 13] {
            let emb = Embedding::nth(p, 0);
            assert!(emb.l > 1 << 31 && emb.l % p as u64 == 1);
            let a = CycElem::from_ints(&(1..p as i64).collect::<Vec<_>>());
            let b = CycElem::beta_pow(p, 2).scale(&crate::Rational::new(3.into(), 7.into()));
            let lhs = emb.image(&(&a * &b)).unwrap();
            assert_eq!(lhs, emb.image(&a).unwrap().times(&emb.image(&b).unwrap()));
            assert_eq!(emb.image(&CycElem::one(p)).unwrap().v, 1);
        }
        assert_ne!(Embedding::nth(7, 0).l, Embedding::nth(7, 1).l);
    }
}
