//! Dense univariate polynomials with arbitrary-precision integer coefficients.
//!
//! The greatest common divisor uses the dense modular algorithm: images
//! modulo word-sized primes are combined by Chinese remaindering and the
//! candidate is confirmed by exact trial division.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Polynomial `c[0] + c[1] t + ...`, without trailing zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ZPoly {
    c: Vec<BigInt>,
}

impl ZPoly {
    pub fn zero() -> Self {
        ZPoly { c: Vec::new() }
    }

    pub fn one() -> Self {
        ZPoly { c: vec![BigInt::one()] }
    }

    pub fn constant(c: BigInt) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn from_coeffs(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        ZPoly { c }
    }

    /// `coef * t^k`.
    pub fn monomial(coef: BigInt, k: usize) -> Self {
        let mut c = vec![BigInt::zero(); k + 1];
        c[k] = coef;
        Self::from_coeffs(c)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn deg(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn lc(&self) -> &BigInt {
        self.c.last().expect("leading coefficient of zero polynomial")
    }

    /// Index of the lowest nonzero coefficient.
    pub fn low_order(&self) -> usize {
        self.c.iter().position(|x| !x.is_zero()).unwrap_or(0)
    }

    /// Divide by `t^k`; the caller guarantees divisibility.
    pub fn shift_down(&self, k: usize) -> Self {
        if k == 0 {
            return self.clone();
        }
        debug_assert!(self.c.iter().take(k).all(|x| x.is_zero()));
        ZPoly { c: self.c[k..].to_vec() }
    }

    pub fn shift_up(&self, k: usize) -> Self {
        if k == 0 || self.is_zero() {
            return self.clone();
        }
        let mut c = vec![BigInt::zero(); k];
        c.extend(self.c.iter().cloned());
        ZPoly { c }
    }

    pub fn add(&self, o: &ZPoly) -> ZPoly {
        let (long, short) = if self.c.len() >= o.c.len() { (self, o) } else { (o, self) };
        let mut c = long.c.clone();
        for (i, x) in short.c.iter().enumerate() {
            c[i] += x;
        }
        Self::from_coeffs(c)
    }

    pub fn neg(&self) -> ZPoly {
        ZPoly { c: self.c.iter().map(|x| -x).collect() }
    }

    pub fn sub(&self, o: &ZPoly) -> ZPoly {
        let mut c = self.c.clone();
        if c.len() < o.c.len() {
            c.resize(o.c.len(), BigInt::zero());
        }
        for (i, x) in o.c.iter().enumerate() {
            c[i] -= x;
        }
        Self::from_coeffs(c)
    }

    pub fn mul(&self, o: &ZPoly) -> ZPoly {
        if self.is_zero() || o.is_zero() {
            return ZPoly::zero();
        }
        if o.c.len() == 1 {
            return self.scale(&o.c[0]);
        }
        if self.c.len() == 1 {
            return o.scale(&self.c[0]);
        }
        let mut c = vec![BigInt::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] += a * b;
                }
            }
        }
        Self::from_coeffs(c)
    }

    pub fn scale(&self, s: &BigInt) -> ZPoly {
        if s.is_zero() {
            return ZPoly::zero();
        }
        if s.is_one() {
            return self.clone();
        }
        ZPoly { c: self.c.iter().map(|x| x * s).collect() }
    }

    /// Exact division of every coefficient by `s`.
    pub fn div_scalar(&self, s: &BigInt) -> ZPoly {
        if s.is_one() {
            return self.clone();
        }
        ZPoly { c: self.c.iter().map(|x| x / s).collect() }
    }

    /// Nonnegative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for x in &self.c {
            g = g.gcd(x);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(&self) -> ZPoly {
        if self.is_zero() {
            return ZPoly::zero();
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -g;
        }
        self.div_scalar(&g)
    }

    /// Exact quotient `self / d` in `Z[t]`, or `None` when `d` does not divide.
    pub fn div_exact(&self, d: &ZPoly) -> Option<ZPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(ZPoly::zero());
        }
        if self.c.len() < d.c.len() {
            return None;
        }
        if d.c.len() == 1 {
            let s = &d.c[0];
            let mut out = Vec::with_capacity(self.c.len());
            for x in &self.c {
                let (q, r) = x.div_rem(s);
                if !r.is_zero() {
                    return None;
                }
                out.push(q);
            }
            return Some(ZPoly { c: out });
        }
        let mut r = self.c.clone();
        let dl = d.c.len();
        let lc = d.lc();
        let mut q = vec![BigInt::zero(); r.len() - dl + 1];
        for k in (0..q.len()).rev() {
            let top = &r[k + dl - 1];
            if top.is_zero() {
                continue;
            }
            let (qk, rem) = top.div_rem(lc);
            if !rem.is_zero() {
                return None;
            }
            for (i, dc) in d.c.iter().enumerate() {
                if !dc.is_zero() {
                    r[k + i] -= &qk * dc;
                }
            }
            q[k] = qk;
        }
        if r.iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(Self::from_coeffs(q))
    }

    /// Substitute `t -> t^r` for `r >= 1`.
    pub fn stretch(&self, r: usize) -> ZPoly {
        if r == 1 || self.c.len() <= 1 {
            return self.clone();
        }
        let mut c = vec![BigInt::zero(); (self.c.len() - 1) * r + 1];
        for (i, x) in self.c.iter().enumerate() {
            c[i * r] = x.clone();
        }
        ZPoly { c }
    }

    /// Inverse of [`stretch`](Self::stretch); every exponent must be divisible by `g`.
    pub fn compress(&self, g: usize) -> ZPoly {
        if g == 1 {
            return self.clone();
        }
        ZPoly { c: self.c.iter().step_by(g).cloned().collect() }
    }

    /// `t^deg p(1/t)`.
    pub fn reverse(&self) -> ZPoly {
        let mut c = self.c.clone();
        c.reverse();
        Self::from_coeffs(c)
    }

    /// gcd of the exponents carrying nonzero coefficients (0 for constants).
    pub fn exponent_gcd(&self) -> usize {
        let mut g = 0usize;
        for (i, x) in self.c.iter().enumerate() {
            if !x.is_zero() {
                g = g.gcd(&i);
                if g == 1 {
                    break;
                }
            }
        }
        g
    }

    /// Greatest common divisor in `Q[t]`, returned primitive with positive
    /// leading coefficient. `gcd(0, 0) = 0`.
    pub fn gcd(a: &ZPoly, b: &ZPoly) -> ZPoly {
        if a.is_zero() {
            return b.primitive();
        }
        if b.is_zero() {
            return a.primitive();
        }
        if a.is_constant() || b.is_constant() {
            return ZPoly::one();
        }
        let pa = a.primitive();
        let pb = b.primitive();
        if pa == pb {
            return pa;
        }
        modular_gcd(&pa, &pb).unwrap_or_else(|| prs_gcd(&pa, &pb))
    }
}

// ---------------------------------------------------------------------------
// modular machinery

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(sp) {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

const PRIME_COUNT: usize = 192;

fn primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut out = Vec::with_capacity(PRIME_COUNT);
        let mut n = (1u64 << 62) - 1;
        while out.len() < PRIME_COUNT {
            if is_prime_u64(n) {
                out.push(n);
            }
            n -= 2;
        }
        out
    })
}

fn reduce(a: &ZPoly, p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    let mut v: Vec<u64> = a
        .c
        .iter()
        .map(|x| x.mod_floor(&pb).to_u64().expect("residue fits in u64"))
        .collect();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Monic gcd over `F_p`.
fn gcd_mod(a: Vec<u64>, b: Vec<u64>, p: u64) -> Vec<u64> {
    let (mut a, mut b) = (a, b);
    while !b.is_empty() {
        // a <- a mod b
        let inv = powmod(*b.last().unwrap(), p - 2, p);
        let bl = b.len();
        while a.len() >= bl {
            let coef = mulmod(*a.last().unwrap(), inv, p);
            let off = a.len() - bl;
            for i in 0..bl {
                let sub = mulmod(coef, b[i], p);
                a[off + i] = (a[off + i] + p - sub) % p;
            }
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    if let Some(&l) = a.last() {
        let inv = powmod(l, p - 2, p);
        for x in a.iter_mut() {
            *x = mulmod(*x, inv, p);
        }
    }
    a
}

fn modular_gcd(a: &ZPoly, b: &ZPoly) -> Option<ZPoly> {
    let gamma = a.lc().gcd(b.lc());
    let mut acc: Option<(Vec<BigInt>, BigInt)> = None; // (coefficients, modulus)
    let mut last_candidate: Option<Vec<BigInt>> = None;
    for &p in primes() {
        let pb = BigInt::from(p);
        if (a.lc() % &pb).is_zero() || (b.lc() % &pb).is_zero() {
            continue;
        }
        let g = gcd_mod(reduce(a, p), reduce(b, p), p);
        if g.len() <= 1 {
            return Some(ZPoly::one());
        }
        let gm = gamma.mod_floor(&pb).to_u64().unwrap();
        let g: Vec<u64> = g.iter().map(|&x| mulmod(x, gm, p)).collect();
        match &mut acc {
            None => {
                acc = Some((g.iter().map(|&x| BigInt::from(x)).collect(), pb));
            }
            Some((h, m)) => {
                if g.len() < h.len() {
                    acc = Some((g.iter().map(|&x| BigInt::from(x)).collect(), pb));
                    last_candidate = None;
                    continue;
                }
                if g.len() > h.len() {
                    continue;
                }
                let minv = {
                    let mm = m.mod_floor(&pb).to_u64().unwrap();
                    powmod(mm, p - 2, p)
                };
                for (hi, &gi) in h.iter_mut().zip(g.iter()) {
                    let hm = hi.mod_floor(&pb).to_u64().unwrap();
                    let diff = (gi + p - hm) % p;
                    let k = mulmod(diff, minv, p);
                    *hi += &*m * BigInt::from(k);
                }
                *m *= &pb;
            }
        }
        let (h, m) = acc.as_ref().unwrap();
        let half: BigInt = m / 2;
        let sym: Vec<BigInt> = h
            .iter()
            .map(|x| if x > &half { x - m } else { x.clone() })
            .collect();
        if last_candidate.as_ref() == Some(&sym) {
            let cand = ZPoly::from_coeffs(sym.clone()).primitive();
            if a.div_exact(&cand).is_some() && b.div_exact(&cand).is_some() {
                return Some(cand);
            }
        }
        last_candidate = Some(sym);
    }
    None
}

/// Primitive polynomial remainder sequence; slow fallback.
fn prs_gcd(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let (mut a, mut b) = if a.deg() >= b.deg() { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
    while !b.is_zero() {
        let r = pseudo_rem(&a, &b);
        a = b;
        b = r.primitive();
    }
    a.primitive()
}

fn pseudo_rem(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let mut r = a.c.clone();
    let bl = b.c.len();
    let lc = b.lc().clone();
    while r.len() >= bl && !r.is_empty() {
        let top = r.last().unwrap().clone();
        let off = r.len() - bl;
        for x in r.iter_mut() {
            *x *= &lc;
        }
        for (i, bc) in b.c.iter().enumerate() {
            r[off + i] -= &top * bc;
        }
        while r.last().is_some_and(|x| x.is_zero()) {
            r.pop();
        }
    }
    ZPoly::from_coeffs(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[i64]) -> ZPoly {
        ZPoly::from_coeffs(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    #[test]
    fn gcd_of_products() {
        let f = p(&[1, 1]); // 1 + t
        let g = p(&[1, 0, 1]); // 1 + t^2
        let h = p(&[-2, 3, 5]);
        let a = f.mul(&g).mul(&h);
        let b = f.mul(&h).mul(&p(&[7, 0, 0, 1]));
        assert_eq!(ZPoly::gcd(&a, &b), f.mul(&h).primitive());
        assert_eq!(ZPoly::gcd(&f, &g), ZPoly::one());
    }

    #[test]
    fn gcd_large_coefficients() {
        let big = p(&[123456789, -987654321, 555555555, 1]);
        let a = big.mul(&p(&[3, 1])).scale(&BigInt::from(6));
        let b = big.mul(&p(&[-3, 1])).scale(&BigInt::from(10));
        assert_eq!(ZPoly::gcd(&a, &b), big.primitive());
        assert_eq!(prs_gcd(&a.primitive(), &b.primitive()), big.primitive());
    }

    #[test]
    fn exact_division() {
        let a = p(&[1, 2, 1]);
        assert_eq!(a.div_exact(&p(&[1, 1])), Some(p(&[1, 1])));
        assert_eq!(a.div_exact(&p(&[1, 2])), None);
    }

    #[test]
    fn stretch_compress_roundtrip() {
        let a = p(&[1, -2, 3]);
        let s = a.stretch(3);
        assert_eq!(s.exponent_gcd(), 3);
        assert_eq!(s.compress(3), a);
    }
}
