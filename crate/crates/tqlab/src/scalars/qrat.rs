//! Exact rational functions of a formal `q` with rational exponents.
//!
//! A value is stored as `t^shift * num(t) / den(t)` where `t = q^(1/lat)`.
//! The canonical form has `num(0) != 0`, `den(0) != 0`, coprime `num` and
//! `den` over `Q[t]`, joint integer content 1, a positive leading
//! coefficient in `den`, and the smallest possible `lat`. Two values are
//! equal exactly when their representations are identical.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};

use super::zpoly::ZPoly;
use super::ScalarError;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QRat {
    num: ZPoly,
    den: ZPoly,
    shift: i64,
    lat: u32,
}

fn lcm_u32(a: u32, b: u32) -> u32 {
    a / a.gcd(&b) * b
}

impl QRat {
    pub fn zero() -> Self {
        QRat { num: ZPoly::zero(), den: ZPoly::one(), shift: 0, lat: 1 }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_bigint(BigInt::from(n))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        if n.is_zero() {
            return Self::zero();
        }
        QRat { num: ZPoly::constant(n), den: ZPoly::one(), shift: 0, lat: 1 }
    }

    /// The rational number `n / d`.
    pub fn from_ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Self::from_parts(ZPoly::constant(BigInt::from(n)), ZPoly::constant(BigInt::from(d)), 0, 1)
    }

    /// `q^e` for a rational exponent `e`.
    pub fn q_pow(e: Rational64) -> Self {
        let lat = *e.denom() as u32;
        QRat { num: ZPoly::one(), den: ZPoly::one(), shift: *e.numer(), lat }
    }

    pub fn q_pow_int(e: i64) -> Self {
        QRat { num: ZPoly::one(), den: ZPoly::one(), shift: e, lat: 1 }
    }

    pub fn q() -> Self {
        Self::q_pow_int(1)
    }

    /// Laurent polynomial `sum c_e q^e` from (exponent, coefficient) pairs.
    pub fn laurent<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Rational64, BigInt)>,
    {
        let terms: Vec<(Rational64, BigInt)> = terms.into_iter().collect();
        let lat = terms.iter().fold(1u32, |l, (e, _)| lcm_u32(l, *e.denom() as u32));
        let exps: Vec<i64> = terms.iter().map(|(e, _)| e.numer() * (lat as i64 / e.denom())).collect();
        let Some(&lo) = exps.iter().min() else {
            return Self::zero();
        };
        let hi = *exps.iter().max().unwrap();
        let mut c = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (k, (_, coef)) in exps.iter().zip(terms.iter()) {
            c[(k - lo) as usize] += coef;
        }
        Self::from_parts(ZPoly::from_coeffs(c), ZPoly::one(), lo, lat)
    }

    /// q-integer `[m]_q = (q^m - q^-m)/(q - q^-1)`.
    pub fn qint(m: i64) -> Self {
        Self::qint_base(m, 1)
    }

    /// `[m]_{q^d}`.
    pub fn qint_base(m: i64, d: i64) -> Self {
        if m == 0 {
            return Self::zero();
        }
        let sign = if m < 0 { -1 } else { 1 };
        let m = m.abs();
        let terms = (0..m).map(|k| (Rational64::from_integer(d * (2 * k - (m - 1))), BigInt::from(sign)));
        Self::laurent(terms)
    }

    /// `[n]_q!`.
    pub fn qfact(n: u64) -> Self {
        (1..=n as i64).fold(Self::one(), |acc, k| &acc * &Self::qint(k))
    }

    /// Gaussian binomial `[m; r]_q`, zero outside `0 <= r <= m`.
    pub fn qbinom(m: i64, r: i64) -> Self {
        if r < 0 || m < 0 || r > m {
            return Self::zero();
        }
        let mut acc = Self::one();
        for k in 0..r {
            acc = &acc * &Self::qint(m - k);
            acc = acc.checked_div(&Self::qint(k + 1)).expect("nonzero q-integer");
        }
        acc
    }

    fn from_parts(num: ZPoly, den: ZPoly, shift: i64, lat: u32) -> Self {
        Self::normalize(num, den, shift, lat, None)
    }

    /// Bring a raw fraction into canonical form. When `hint` is given the
    /// caller guarantees that `gcd(num, den)` divides `hint`.
    fn normalize(num: ZPoly, den: ZPoly, mut shift: i64, lat: u32, hint: Option<&ZPoly>) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let kn = num.low_order();
        let kd = den.low_order();
        let mut num = num.shift_down(kn);
        let mut den = den.shift_down(kd);
        shift += kn as i64 - kd as i64;
        if !num.is_constant() && !den.is_constant() {
            let g = match hint {
                Some(h) if h.is_constant() => ZPoly::one(),
                Some(h) => ZPoly::gcd(&num, h),
                None => ZPoly::gcd(&num, &den),
            };
            if !g.is_constant() {
                num = num.div_exact(&g).expect("gcd divides numerator");
                den = den.div_exact(&g).expect("gcd divides denominator");
            }
        }
        let mut c = num.content().gcd(&den.content());
        if den.lc().is_negative() {
            c = -c;
        }
        if !c.is_one() {
            num = num.div_scalar(&c);
            den = den.div_scalar(&c);
        }
        let mut g = (lat as usize).gcd(&(shift.unsigned_abs() as usize));
        g = g.gcd(&num.exponent_gcd()).gcd(&den.exponent_gcd());
        let (num, den, shift, lat) = if g > 1 {
            (num.compress(g), den.compress(g), shift / g as i64, lat / g as u32)
        } else {
            (num, den, shift, lat)
        };
        QRat { num, den, shift, lat }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.shift == 0 && self.num.is_constant() && self.den.is_constant() && self.num == self.den
    }

    /// Exponent-lattice denominator `L`.
    pub fn lattice(&self) -> u32 {
        self.lat
    }

    /// True when the value is `c q^e` for a rational `c` and exponent `e`.
    pub fn is_monomial(&self) -> bool {
        self.num.coeffs().iter().filter(|c| !c.is_zero()).count() <= 1 && self.den.is_constant()
    }

    /// For a monomial `q^e` with coefficient 1, return `e`.
    pub fn as_q_power(&self) -> Option<Rational64> {
        if self.num.is_constant() && self.den.is_constant() && self.num == self.den && !self.is_zero() {
            Some(Rational64::new(self.shift, self.lat as i64))
        } else {
            None
        }
    }

    /// For a value in `Q` (no `q` dependence), the numerator and denominator.
    pub fn as_rational(&self) -> Option<(BigInt, BigInt)> {
        if self.is_zero() {
            return Some((BigInt::zero(), BigInt::one()));
        }
        if self.shift == 0 && self.num.is_constant() && self.den.is_constant() {
            Some((self.num.coeffs()[0].clone(), self.den.coeffs()[0].clone()))
        } else {
            None
        }
    }

    pub(crate) fn parts(&self) -> (&ZPoly, &ZPoly, i64, u32) {
        (&self.num, &self.den, self.shift, self.lat)
    }

    fn lifted(&self, lat: u32) -> (ZPoly, ZPoly, i64) {
        let f = (lat / self.lat) as usize;
        (self.num.stretch(f), self.den.stretch(f), self.shift * f as i64)
    }

    pub fn neg(&self) -> Self {
        QRat { num: self.num.neg(), ..self.clone() }
    }

    fn add_signed(&self, o: &QRat, negate: bool) -> QRat {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { o.neg() } else { o.clone() };
        }
        let lat = lcm_u32(self.lat, o.lat);
        let (n1, d1, s1) = self.lifted(lat);
        let (mut n2, d2, s2) = o.lifted(lat);
        if negate {
            n2 = n2.neg();
        }
        let s = s1.min(s2);
        let n1 = n1.shift_up((s1 - s) as usize);
        let n2 = n2.shift_up((s2 - s) as usize);
        if d1 == d2 {
            let num = n1.add(&n2);
            return Self::normalize(num, d1.clone(), s, lat, Some(&d1));
        }
        let g = ZPoly::gcd(&d1, &d2);
        let (e1, e2) = if g.is_constant() {
            (d1.clone(), d2.clone())
        } else {
            (d1.div_exact(&g).unwrap(), d2.div_exact(&g).unwrap())
        };
        let num = n1.mul(&e2).add(&n2.mul(&e1));
        let den = d1.mul(&e2);
        Self::normalize(num, den, s, lat, Some(&g))
    }

    fn mul_impl(&self, o: &QRat) -> QRat {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let lat = lcm_u32(self.lat, o.lat);
        let (n1, d1, s1) = self.lifted(lat);
        let (n2, d2, s2) = o.lifted(lat);
        let g1 = ZPoly::gcd(&n1, &d2);
        let g2 = ZPoly::gcd(&n2, &d1);
        let cut = |p: &ZPoly, g: &ZPoly| if g.is_constant() { p.clone() } else { p.div_exact(g).unwrap() };
        let num = cut(&n1, &g1).mul(&cut(&n2, &g2));
        let den = cut(&d1, &g2).mul(&cut(&d2, &g1));
        Self::normalize(num, den, s1 + s2, lat, Some(&ZPoly::one()))
    }

    pub fn inv(&self) -> Result<QRat, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let (mut num, mut den) = (self.den.clone(), self.num.clone());
        if den.lc().is_negative() {
            num = num.neg();
            den = den.neg();
        }
        Ok(QRat { num, den, shift: -self.shift, lat: self.lat })
    }

    pub fn checked_div(&self, o: &QRat) -> Result<QRat, ScalarError> {
        Ok(self.mul_impl(&o.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<QRat, ScalarError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = QRat::one();
        let mut b = base;
        let mut n = e.unsigned_abs();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            n >>= 1;
        }
        Ok(acc)
    }

    /// Substitute `q -> q^r` for a nonzero rational `r`.
    pub fn subs_q_pow(&self, r: Rational64) -> QRat {
        assert!(!r.is_zero(), "q -> q^0 is not invertible");
        if self.is_zero() {
            return self.clone();
        }
        let p = r.numer().unsigned_abs() as usize;
        let lat = self.lat * *r.denom() as u32;
        let mut num = self.num.stretch(p);
        let mut den = self.den.stretch(p);
        let mut shift = self.shift * p as i64;
        if r.is_negative() {
            shift = -shift - num.deg() as i64 + den.deg() as i64;
            num = num.reverse();
            den = den.reverse();
        }
        Self::normalize(num, den, shift, lat, Some(&ZPoly::one()))
    }

    /// Value at `q = 1`, when finite. Used by the classical-limit checks.
    pub fn at_q_one(&self) -> Option<(BigInt, BigInt)> {
        let s = |p: &ZPoly| p.coeffs().iter().fold(BigInt::zero(), |a, c| a + c);
        let n = s(&self.num);
        let d = s(&self.den);
        if d.is_zero() {
            return None;
        }
        let g = n.gcd(&d);
        let (mut n, mut d) = (n / &g, d / &g);
        if d.is_negative() {
            n = -n;
            d = -d;
        }
        Some((n, d))
    }

    /// Ascending `(exponent of q, coefficient)` lists of numerator and denominator.
    pub fn exponent_lists(&self) -> (Vec<(Rational64, BigInt)>, Vec<(Rational64, BigInt)>) {
        let list = |p: &ZPoly, base: i64| -> Vec<(Rational64, BigInt)> {
            p.coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (Rational64::new(base + i as i64, self.lat as i64), c.clone()))
                .collect()
        };
        (list(&self.num, self.shift), list(&self.den, 0))
    }

    /// Rebuild from the lists produced by [`exponent_lists`](Self::exponent_lists).
    pub fn from_exponent_lists(
        num: &[(Rational64, BigInt)],
        den: &[(Rational64, BigInt)],
    ) -> Result<QRat, ScalarError> {
        let n = QRat::laurent(num.iter().cloned());
        let d = QRat::laurent(den.iter().cloned());
        n.checked_div(&d)
    }

    fn fmt_laurent(
        f: &mut fmt::Formatter<'_>,
        terms: &[(Rational64, BigInt)],
        latex: bool,
    ) -> fmt::Result {
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let unit = mag.is_one();
            if e.is_zero() {
                write!(f, "{}", mag)?;
                continue;
            }
            if !unit {
                write!(f, "{}", mag)?;
                if !latex {
                    write!(f, "*")?;
                }
            }
            write!(f, "{}", fmt_q_power(*e, latex))?;
        }
        Ok(())
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>, latex: bool) -> fmt::Result {
        let (n, d) = self.exponent_lists();
        let den_one = d.len() == 1 && d[0].0.is_zero() && d[0].1.is_one();
        if den_one {
            return Self::fmt_laurent(f, &n, latex);
        }
        if latex {
            write!(f, "\\frac{{")?;
            Self::fmt_laurent(f, &n, latex)?;
            write!(f, "}}{{")?;
            Self::fmt_laurent(f, &d, latex)?;
            write!(f, "}}")
        } else {
            write!(f, "(")?;
            Self::fmt_laurent(f, &n, latex)?;
            write!(f, ")/(")?;
            Self::fmt_laurent(f, &d, latex)?;
            write!(f, ")")
        }
    }

    /// LaTeX rendering, e.g. `\frac{1 - q^{-1}}{1 + q^{2}}`.
    pub fn to_latex(&self) -> String {
        struct L<'a>(&'a QRat);
        impl fmt::Display for L<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.fmt_with(f, true)
            }
        }
        L(self).to_string()
    }
}

/// `q`, `q^3`, `q^{-1}`, `q^{1/2}` in LaTeX, or `q^-1` style in plain text.
pub fn fmt_q_power(e: Rational64, latex: bool) -> String {
    if e.is_one() {
        return "q".into();
    }
    let body = if e.is_integer() { e.numer().to_string() } else { format!("{}/{}", e.numer(), e.denom()) };
    if latex {
        if e.is_integer() && (0..10).contains(e.numer()) {
            format!("q^{}", body)
        } else {
            format!("q^{{{}}}", body)
        }
    } else if e.is_integer() {
        format!("q^{}", body)
    } else {
        format!("q^({})", body)
    }
}

impl fmt::Display for QRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, false)
    }
}

impl fmt::Debug for QRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QRat({})", self)
    }
}

impl Default for QRat {
    fn default() -> Self {
        QRat::zero()
    }
}

impl From<i64> for QRat {
    fn from(n: i64) -> Self {
        QRat::from_int(n)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&QRat> for &QRat {
            type Output = QRat;
            fn $m(self, o: &QRat) -> QRat {
                let f: fn(&QRat, &QRat) -> QRat = $body;
                f(self, o)
            }
        }
        impl $tr<QRat> for QRat {
            type Output = QRat;
            fn $m(self, o: QRat) -> QRat {
                (&self).$m(&o)
            }
        }
        impl $tr<&QRat> for QRat {
            type Output = QRat;
            fn $m(self, o: &QRat) -> QRat {
                (&self).$m(o)
            }
        }
        impl $tr<QRat> for &QRat {
            type Output = QRat;
            fn $m(self, o: QRat) -> QRat {
                self.$m(&o)
            }
        }
    };
}

binop!(Add, add, |a, b| a.add_signed(b, false));
binop!(Sub, sub, |a, b| a.add_signed(b, true));
binop!(Mul, mul, |a, b| a.mul_impl(b));
binop!(Div, div, |a, b| a.checked_div(b).expect("QRat division by zero"));

impl Neg for QRat {
    type Output = QRat;
    fn neg(self) -> QRat {
        QRat::neg(&self)
    }
}

impl Neg for &QRat {
    type Output = QRat;
    fn neg(self) -> QRat {
        QRat::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn q_integer_two() {
        let q = QRat::q();
        assert_eq!(QRat::qint(2), &q + &q.inv().unwrap());
    }

    #[test]
    fn inverse_roundtrip() {
        let x = QRat::qint(2);
        assert!((&x * &x.inv().unwrap()).is_one());
    }

    #[test]
    fn half_powers_merge() {
        let h = QRat::q_pow(r(1, 2));
        assert_eq!(h.lattice(), 2);
        let p = &h * &h;
        assert_eq!(p, QRat::q());
        assert_eq!(p.lattice(), 1);
    }

    #[test]
    fn cancellation_is_structural() {
        // (q^2 - 1)/(q - 1) == q + 1
        let q = QRat::q();
        let a = (&(&q * &q) - &QRat::one()) / (&q - &QRat::one());
        assert_eq!(a, &q + &QRat::one());
    }

    #[test]
    fn qbinom_values() {
        assert_eq!(QRat::qbinom(4, 2), &(&QRat::qint(4) * &QRat::qint(3)) / &QRat::qint(2));
        assert!(QRat::qbinom(3, 5).is_zero());
        assert!(QRat::qbinom(7, 0).is_one());
    }

    #[test]
    fn substitution_negative_power() {
        let q = QRat::q();
        let x = (&q + &QRat::from_int(2)) / (&q * &q - &QRat::from_int(3));
        let y = x.subs_q_pow(r(-1, 1));
        let qi = q.inv().unwrap();
        let expect = (&qi + &QRat::from_int(2)) / (&qi * &qi - &QRat::from_int(3));
        assert_eq!(y, expect);
        assert_eq!(QRat::qint(3).subs_q_pow(r(2, 1)), QRat::qint_base(3, 2));
    }

    #[test]
    fn classical_limit() {
        assert_eq!(QRat::qint(5).at_q_one(), Some((BigInt::from(5), BigInt::from(1))));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(QRat::one().checked_div(&QRat::zero()), Err(ScalarError::DivisionByZero));
    }
}
