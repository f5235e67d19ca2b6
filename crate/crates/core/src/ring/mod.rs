//! Exact residue arithmetic over `Z/nZ` and the matrix normal forms built on it.
//!
//! Every other layer of the crate reduces its questions to linear algebra
//! over `Z/nZ`: membership in a row span, solving `x·A = b`, kernels and
//! invariant factors. Because `Z/nZ` has zero divisors, row echelon form is
//! not canonical; [`howell_form`] is used wherever a canonical span
//! representative is needed, and [`smith_form`] produces invariant factors.

mod howell;
mod matrix;
mod smith;
mod solve;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use howell::{howell_form, HowellBasis, HowellForm};
pub use matrix::Matrix;
pub use smith::{smith_form, SmithForm};
pub use solve::{left_kernel, solve_left, solve_linear, LeftSolver, LinearSolution};

/// Default upper bound on moduli.
pub const DEFAULT_MODULUS_CAP: u64 = 1 << 16;

/// Hard bound that keeps every product of two residues inside `u64`.
const HARD_MODULUS_CAP: u64 = 1 << 31;

const MAX_PRIMES: usize = 9;

/// The ring `Z/nZ` for `n >= 2`, with its prime factorization cached.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ring {
    modulus: u64,
    primes: [u32; MAX_PRIMES],
    exponents: [u8; MAX_PRIMES],
    nprimes: u8,
}

impl Ring {
    pub fn new(modulus: u64) -> Result<Ring> {
        Ring::with_cap(modulus, DEFAULT_MODULUS_CAP)
    }

    pub fn with_cap(modulus: u64, cap: u64) -> Result<Ring> {
        let cap = cap.min(HARD_MODULUS_CAP);
        if !(2..=cap).contains(&modulus) {
            return Err(Error::ModulusOutOfRange(modulus, cap));
        }
        let mut primes = [0u32; MAX_PRIMES];
        let mut exponents = [0u8; MAX_PRIMES];
        let mut nprimes = 0usize;
        let mut rest = modulus;
        let mut p = 2u64;
        while p * p <= rest {
            if rest.is_multiple_of(p) {
                let mut e = 0u8;
                while rest.is_multiple_of(p) {
                    rest /= p;
                    e += 1;
                }
                primes[nprimes] = p as u32;
                exponents[nprimes] = e;
                nprimes += 1;
            }
            p += 1;
        }
        if rest > 1 {
            primes[nprimes] = rest as u32;
            exponents[nprimes] = 1;
            nprimes += 1;
        }
        Ok(Ring {
            modulus,
            primes,
            exponents,
            nprimes: nprimes as u8,
        })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Prime factorization as `(p, e)` pairs in increasing order of `p`.
    pub fn factorization(&self) -> Vec<(u64, u32)> {
        (0..self.nprimes as usize)
            .map(|i| (self.primes[i] as u64, self.exponents[i] as u32))
            .collect()
    }

    /// All positive divisors of the modulus in increasing order.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for (p, e) in self.factorization() {
            let current = divs.clone();
            let mut pk = 1;
            for _ in 0..e {
                pk *= p;
                divs.extend(current.iter().map(|d| d * pk));
            }
        }
        divs.sort_unstable();
        divs
    }

    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        x % self.modulus
    }

    #[inline]
    pub fn reduce_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.modulus as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.modulus
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.modulus - b) % self.modulus
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (a * b) % self.modulus
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        (self.modulus - a) % self.modulus
    }

    /// The ideal generator `gcd(a, n)`; zero maps to `n` itself.
    #[inline]
    pub fn ideal_divisor(&self, a: u64) -> u64 {
        gcd(a % self.modulus, self.modulus)
    }

    #[inline]
    pub fn is_unit(&self, a: u64) -> bool {
        gcd(a % self.modulus, self.modulus) == 1
    }

    pub fn inverse(&self, a: u64) -> Option<u64> {
        let (g, s, _) = xgcd(a as i64 % self.modulus as i64, self.modulus as i64);
        (g == 1).then(|| self.reduce_i64(s))
    }

    /// Returns a unit `u` with `u·a ≡ gcd(a, n) (mod n)`.
    pub fn unit_normalizer(&self, a: u64) -> u64 {
        let n = self.modulus;
        let a = a % n;
        if a == 0 {
            return 1;
        }
        let g = gcd(a, n);
        let reduced_mod = n / g;
        if reduced_mod == 1 {
            return 1;
        }
        let base = Ring::inverse_mod(a / g, reduced_mod);
        let mut u = base;
        while gcd(u, n) != 1 {
            u += reduced_mod;
        }
        u % n
    }

    fn inverse_mod(a: u64, m: u64) -> u64 {
        let (_, s, _) = xgcd(a as i64, m as i64);
        s.rem_euclid(m as i64) as u64
    }

    /// Divisibility `d | x` inside `Z/nZ`.
    #[inline]
    pub fn divides(&self, d: u64, x: u64) -> bool {
        x.is_multiple_of(self.ideal_divisor(d))
    }

    pub fn residue(&self, value: u64) -> Residue {
        Residue {
            value: value % self.modulus,
            ring: *self,
        }
    }
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{}", self.modulus)
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{}", self.modulus)
    }
}

impl Serialize for Ring {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u64(self.modulus)
    }
}

impl<'de> Deserialize<'de> for Ring {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Ring, D::Error> {
        let n = u64::deserialize(d)?;
        Ring::new(n).map_err(serde::de::Error::custom)
    }
}

/// A single element of `Z/nZ`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Residue {
    value: u64,
    ring: Ring,
}

impl Residue {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn is_unit(&self) -> bool {
        self.ring.is_unit(self.value)
    }

    pub fn inverse(&self) -> Option<Residue> {
        self.ring.inverse(self.value).map(|v| self.ring.residue(v))
    }

    /// Additive order of the residue, i.e. `n / gcd(value, n)`.
    pub fn order(&self) -> u64 {
        self.ring.modulus / self.ring.ideal_divisor(self.value)
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Residue {
    type Output = Residue;
    fn add(self, rhs: Residue) -> Residue {
        assert_eq!(self.ring, rhs.ring, "residues from different rings");
        self.ring.residue(self.ring.add(self.value, rhs.value))
    }
}

impl Sub for Residue {
    type Output = Residue;
    fn sub(self, rhs: Residue) -> Residue {
        assert_eq!(self.ring, rhs.ring, "residues from different rings");
        self.ring.residue(self.ring.sub(self.value, rhs.value))
    }
}

impl Mul for Residue {
    type Output = Residue;
    fn mul(self, rhs: Residue) -> Residue {
        assert_eq!(self.ring, rhs.ring, "residues from different rings");
        self.ring.residue(self.ring.mul(self.value, rhs.value))
    }
}

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        self.ring.residue(self.ring.neg(self.value))
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Extended Euclid on integers: returns `(g, s, t)` with `s·a + t·b = g >= 0`.
pub fn xgcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}
