//! Table-backed arithmetic in a finite field F_q, q = p^f.
//!
//! Elements are stored as integers `0..q` whose base-p digits are the
//! coefficients of a polynomial in the generator `x` (low digit first).
//! For prime fields this is just the residue `0..p`. Multiplication and
//! inversion go through discrete log / exp tables built from a primitive
//! element; addition uses XOR in characteristic 2, a full table for
//! q ≤ 256 and digit-wise arithmetic above that.

use std::fmt;

use crate::error::{Error, Result};

/// Largest field size supported by [`FieldCtx::new`].
pub const MAX_FIELD_SIZE: u32 = 1 << 16;

const ADD_TABLE_LIMIT: u32 = 256;

/// An element of a finite field, valid only together with the
/// [`FieldCtx`] that produced it.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(pub u16);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An explicit finite field F_{p^f}.
#[derive(Clone)]
pub struct FieldCtx {
    p: u32,
    f: u32,
    q: u32,
    /// Monic modulus over F_p, low coefficient first, length f + 1.
    /// Empty for prime fields.
    modulus: Vec<u32>,
    add_table: Vec<u16>,
    neg_table: Vec<u16>,
    exp: Vec<u16>,
    log: Vec<u32>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("f", &self.f)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .finish()
    }
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2u32;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// Splits `q` as `p^f` if it is a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|k| q.is_multiple_of(*k))?;
    let mut rest = q;
    let mut f = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        f += 1;
    }
    (rest == 1).then_some((p, f))
}

// Dense polynomial helpers over F_p used only while bootstrapping the tables.
fn prime_poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    let lead_inv = mod_pow(m[dm], p - 2, p);
    while r.len() > dm {
        let top = *r.last().unwrap();
        if top != 0 {
            let c = top * lead_inv % p;
            let shift = r.len() - 1 - dm;
            for (i, &mi) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - c * mi % p) % p;
            }
        }
        r.pop();
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

fn mod_pow(b: u32, mut e: u32, p: u32) -> u32 {
    let mut acc = 1u64;
    let mut base = b as u64 % p as u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

fn monic_from_index(index: u64, deg: u32, p: u32) -> Vec<u32> {
    let mut c = Vec::with_capacity(deg as usize + 1);
    let mut k = index;
    for _ in 0..deg {
        c.push((k % p as u64) as u32);
        k /= p as u64;
    }
    c.push(1);
    c
}

/// Trial division against every monic polynomial of degree 1..=deg/2.
fn prime_poly_is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = (m.len() - 1) as u32;
    for k in 1..=deg / 2 {
        let count = (p as u64).pow(k);
        for idx in 0..count {
            let cand = monic_from_index(idx, k, p);
            if prime_poly_rem(m, &cand, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn distinct_prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            out.push(k);
            while n.is_multiple_of(k) {
                n /= k;
            }
        }
        k += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl FieldCtx {
    /// Builds F_{p^f}. The modulus is the first monic irreducible of
    /// degree `f` in the enumeration order of [`monic_from_index`]
    /// (constant coefficient varying fastest).
    pub fn new(p: u32, f: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if f == 0 {
            return Err(Error::InvalidArgument("extension degree must be ≥ 1".into()));
        }
        let q64 = (p as u64).checked_pow(f).unwrap_or(u64::MAX);
        if q64 > MAX_FIELD_SIZE as u64 {
            return Err(Error::FieldTooLarge(q64));
        }
        let q = q64 as u32;

        let modulus = if f == 1 {
            Vec::new()
        } else {
            let count = (p as u64).pow(f);
            (0..count)
                .map(|idx| monic_from_index(idx, f, p))
                .find(|m| prime_poly_is_irreducible(m, p))
                .ok_or(Error::Internal("no irreducible modulus found".into()))?
        };

        let digits = |a: u32| -> Vec<u32> {
            let mut v = Vec::with_capacity(f as usize);
            let mut k = a;
            for _ in 0..f {
                v.push(k % p);
                k /= p;
            }
            v
        };
        let from_digits = |v: &[u32]| -> u32 { v.iter().rev().fold(0, |acc, &d| acc * p + d) };
        let slow_mul = |a: u32, b: u32| -> u32 {
            if f == 1 {
                return (a as u64 * b as u64 % p as u64) as u32;
            }
            let (da, db) = (digits(a), digits(b));
            let mut prod = vec![0u32; 2 * f as usize - 1];
            for (i, &x) in da.iter().enumerate() {
                for (j, &y) in db.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x * y) % p;
                }
            }
            let mut r = prime_poly_rem(&prod, &modulus, p);
            r.resize(f as usize, 0);
            from_digits(&r)
        };

        // Primitive element: g^((q-1)/r) != 1 for each prime r | q-1.
        let order = q - 1;
        let factors = distinct_prime_factors(order);
        let slow_pow = |g: u32, mut e: u32| -> u32 {
            let mut acc = 1u32;
            let mut base = g;
            while e > 0 {
                if e & 1 == 1 {
                    acc = slow_mul(acc, base);
                }
                base = slow_mul(base, base);
                e >>= 1;
            }
            acc
        };
        let generator = if q == 2 {
            1
        } else {
            (2..q)
                .chain(std::iter::once(1))
                .find(|&g| factors.iter().all(|&r| slow_pow(g, order / r) != 1))
                .ok_or(Error::Internal("no primitive element".into()))?
        };

        let mut exp = vec![0u16; 2 * order as usize];
        let mut log = vec![0u32; q as usize];
        let mut cur = 1u32;
        for k in 0..order {
            exp[k as usize] = cur as u16;
            exp[(k + order) as usize] = cur as u16;
            log[cur as usize] = k;
            cur = slow_mul(cur, generator);
        }
        if cur != 1 {
            return Err(Error::Internal("generator order mismatch".into()));
        }

        let slow_add = |a: u32, b: u32| -> u32 {
            let (da, db) = (digits(a), digits(b));
            let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
            from_digits(&s)
        };
        let neg_table: Vec<u16> = (0..q)
            .map(|a| {
                let s: Vec<u32> = digits(a).iter().map(|&x| (p - x) % p).collect();
                from_digits(&s) as u16
            })
            .collect();
        let add_table = if p != 2 && q <= ADD_TABLE_LIMIT {
            let mut t = vec![0u16; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = slow_add(a, b) as u16;
                }
            }
            t
        } else {
            Vec::new()
        };

        Ok(FieldCtx {
            p,
            f,
            q,
            modulus,
            add_table,
            neg_table,
            exp,
            log,
        })
    }

    /// Builds the field with `q` elements, `q` a prime power.
    pub fn with_order(q: u32) -> Result<Self> {
        let (p, f) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        Self::new(p, f)
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.f
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The element `x` generating F_q over F_p (equal to 1 when f = 1).
    pub fn generator_over_prime(&self) -> Elem {
        if self.f == 1 {
            Elem::ONE
        } else {
            Elem(self.p as u16)
        }
    }

    /// Element with integer label `k` (must be `< q`).
    #[inline]
    pub fn elem(&self, k: u32) -> Elem {
        debug_assert!(k < self.q);
        Elem(k as u16)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.q).map(|k| Elem(k as u16))
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Elem> + '_ {
        (1..self.q).map(|k| Elem(k as u16))
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            Elem(a.0 ^ b.0)
        } else if self.f == 1 {
            let s = a.0 as u32 + b.0 as u32;
            Elem(if s >= self.p { s - self.p } else { s } as u16)
        } else if !self.add_table.is_empty() {
            Elem(self.add_table[a.index() * self.q as usize + b.index()])
        } else {
            self.add_digits(a, b)
        }
    }

    fn add_digits(&self, a: Elem, b: Elem) -> Elem {
        let (mut x, mut y) = (a.0 as u32, b.0 as u32);
        let mut out = 0u32;
        let mut scale = 1u32;
        for _ in 0..self.f {
            out += ((x % self.p + y % self.p) % self.p) * scale;
            x /= self.p;
            y /= self.p;
            scale *= self.p;
        }
        Elem(out as u16)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.neg_table[a.index()])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.is_zero() || b.is_zero() {
            return Elem::ZERO;
        }
        Elem(self.exp[(self.log[a.index()] + self.log[b.index()]) as usize])
    }

    /// Multiplicative inverse.
    ///
    /// Panics on zero; use [`FieldCtx::checked_inv`] when the argument may vanish.
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.checked_inv(a).expect("inverse of zero")
    }

    #[inline]
    pub fn checked_inv(&self, a: Elem) -> Option<Elem> {
        if a.is_zero() {
            None
        } else {
            let order = self.q - 1;
            Some(Elem(self.exp[((order - self.log[a.index()]) % order) as usize]))
        }
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        let order = (self.q - 1) as u64;
        let k = (self.log[a.index()] as u64 * (e % order)) % order;
        Elem(self.exp[k as usize])
    }
}
