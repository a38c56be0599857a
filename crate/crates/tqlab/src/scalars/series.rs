//! Truncated power series in one formal variable with `QRat` coefficients.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::field::{Field, RatFn, UPoly};
use super::qrat::QRat;
use super::ScalarError;

/// Name of the formal expansion variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Var {
    Z,
    /// The twist variable `v_i` of node `i`.
    V(usize),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Z => write!(f, "z"),
            Var::V(i) => write!(f, "v_{}", i),
        }
    }
}

/// Coefficients `c_0..=c_K` of `sum c_n x^n`; `K` is the truncation order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QSeries {
    var: Var,
    coeffs: Vec<QRat>,
}

impl QSeries {
    pub fn new(var: Var, mut coeffs: Vec<QRat>, order: usize) -> Self {
        coeffs.resize(order + 1, QRat::zero());
        QSeries { var, coeffs }
    }

    pub fn zero(var: Var, order: usize) -> Self {
        Self::new(var, Vec::new(), order)
    }

    pub fn one(var: Var, order: usize) -> Self {
        Self::constant(var, QRat::one(), order)
    }

    pub fn constant(var: Var, c: QRat, order: usize) -> Self {
        Self::new(var, vec![c], order)
    }

    /// Expansion of a rational function with nonvanishing constant term in
    /// its denominator.
    pub fn from_ratfn(var: Var, r: &RatFn<QRat>, order: usize) -> Result<Self, ScalarError> {
        let n = Self::new(var, r.num().coeffs().iter().take(order + 1).cloned().collect(), order);
        let d = Self::new(var, r.den().coeffs().iter().take(order + 1).cloned().collect(), order);
        Ok(n.mul(&d.inv()?))
    }

    pub fn from_poly(var: Var, p: &UPoly<QRat>, order: usize) -> Self {
        Self::new(var, p.coeffs().iter().take(order + 1).cloned().collect(), order)
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[QRat] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &QRat {
        &self.coeffs[n]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Reduce the truncation order.
    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "truncation never extends a series");
        QSeries { var: self.var, coeffs: self.coeffs[..=order].to_vec() }
    }

    fn common(&self, o: &Self) -> usize {
        assert_eq!(self.var, o.var, "series in different variables");
        self.order().min(o.order())
    }

    pub fn add(&self, o: &Self) -> Self {
        let k = self.common(o);
        QSeries { var: self.var, coeffs: (0..=k).map(|n| &self.coeffs[n] + &o.coeffs[n]).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let k = self.common(o);
        QSeries { var: self.var, coeffs: (0..=k).map(|n| &self.coeffs[n] - &o.coeffs[n]).collect() }
    }

    pub fn neg(&self) -> Self {
        QSeries { var: self.var, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let k = self.common(o);
        let mut out = vec![QRat::zero(); k + 1];
        for i in 0..=k {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=k - i {
                if !o.coeffs[j].is_zero() {
                    out[i + j] = &out[i + j] + &(&self.coeffs[i] * &o.coeffs[j]);
                }
            }
        }
        QSeries { var: self.var, coeffs: out }
    }

    pub fn scale(&self, s: &QRat) -> Self {
        QSeries { var: self.var, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    /// Substitute `x -> s x`.
    pub fn scale_var(&self, s: &QRat) -> Self {
        let mut p = QRat::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c * &p);
            p = &p * s;
        }
        QSeries { var: self.var, coeffs: out }
    }

    /// Multiplicative inverse; requires an invertible constant term.
    pub fn inv(&self) -> Result<Self, ScalarError> {
        let c0 = self.coeffs[0].inv()?;
        let k = self.order();
        let mut b = vec![QRat::zero(); k + 1];
        b[0] = c0.clone();
        for n in 1..=k {
            let mut acc = QRat::zero();
            for j in 1..=n {
                if !self.coeffs[j].is_zero() {
                    acc = &acc + &(&self.coeffs[j] * &b[n - j]);
                }
            }
            b[n] = -(&acc * &c0);
        }
        Ok(QSeries { var: self.var, coeffs: b })
    }

    pub fn div(&self, o: &Self) -> Result<Self, ScalarError> {
        Ok(self.mul(&o.inv()?))
    }

    /// `exp(s)` by `n e_n = sum_k k s_k e_{n-k}`.
    pub fn exp(&self) -> Result<Self, ScalarError> {
        if !self.coeffs[0].is_zero() {
            return Err(ScalarError::NonzeroConstantTerm);
        }
        let k = self.order();
        let mut e = vec![QRat::zero(); k + 1];
        e[0] = QRat::one();
        for n in 1..=k {
            let mut acc = QRat::zero();
            for j in 1..=n {
                if !self.coeffs[j].is_zero() {
                    acc = &acc + &(&(&self.coeffs[j] * &QRat::from_int(j as i64)) * &e[n - j]);
                }
            }
            e[n] = &acc / &QRat::from_int(n as i64);
        }
        Ok(QSeries { var: self.var, coeffs: e })
    }

    /// `log(s)` for `s_0 = 1`.
    pub fn log(&self) -> Result<Self, ScalarError> {
        if !self.coeffs[0].is_one() {
            return Err(ScalarError::ConstantTermNotOne);
        }
        let k = self.order();
        let mut l = vec![QRat::zero(); k + 1];
        for n in 1..=k {
            let mut acc = QRat::zero();
            for j in 1..n {
                if !l[j].is_zero() && !self.coeffs[n - j].is_zero() {
                    acc = &acc + &(&(&l[j] * &QRat::from_int(j as i64)) * &self.coeffs[n - j]);
                }
            }
            l[n] = &self.coeffs[n] - &(&acc / &QRat::from_int(n as i64));
        }
        Ok(QSeries { var: self.var, coeffs: l })
    }

    /// Index of the last nonzero coefficient.
    pub fn last_nonzero(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QSeries[{}]", self.var)?;
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match n {
                0 => write!(f, "{}", c)?,
                1 => write!(f, "({}){}", c, self.var)?,
                _ => write!(f, "({}){}^{}", c, self.var, n)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O({}^{})", self.var, self.order() + 1)
    }
}

/// Find `P/Q` with `deg P, deg Q <= max_deg` and `Q(0) = 1` whose expansion
/// agrees with every available coefficient of `s`. The smallest working
/// degree bound is used; `Ok(None)` means no such fraction exists at this
/// bound, which says nothing about rationality beyond the checked order.
pub fn rational_reconstruct(s: &QSeries, max_deg: usize) -> Result<Option<RatFn<QRat>>, ScalarError> {
    let avail = s.order() + 1;
    if avail < 2 * max_deg + 2 {
        return Err(ScalarError::InsufficientOrder { have: avail, need: 2 * max_deg + 2 });
    }
    let c = s.coeffs();
    for d in 0..=max_deg {
        // Unknowns Q_1..Q_d: sum_{k=0}^{d} Q_k c_{n-k} = 0 for n = d+1..2d.
        let mut rows: Vec<Vec<QRat>> = Vec::with_capacity(d);
        for n in d + 1..=2 * d {
            let mut row: Vec<QRat> = (1..=d).map(|k| c[n - k].clone()).collect();
            row.push(-&c[n]);
            rows.push(row);
        }
        let Some(qs) = solve_particular(rows, d) else { continue };
        let mut qpoly = vec![QRat::one()];
        qpoly.extend(qs);
        let qpoly = UPoly::from_coeffs(qpoly);
        let prod = QSeries::from_poly(s.var(), &qpoly, s.order()).mul(s);
        let p = UPoly::from_coeffs(prod.coeffs()[..=d].to_vec());
        if prod.coeffs()[d + 1..].iter().all(|x| x.is_zero()) {
            return Ok(Some(RatFn::new(p, qpoly)?));
        }
    }
    Ok(None)
}

/// Particular solution (free variables zero) of an augmented linear system,
/// `None` if inconsistent.
pub(crate) fn solve_particular<F: Field>(mut rows: Vec<Vec<F>>, nvars: usize) -> Option<Vec<F>> {
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for col in 0..nvars {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][col].inv().ok()?;
        for x in rows[r].iter_mut() {
            *x = x.mul(&inv);
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                for j in 0..=nvars {
                    let t = rows[r][j].mul(&f);
                    rows[i][j] = rows[i][j].sub(&t);
                }
            }
        }
        pivots.push((r, col));
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[nvars].is_zero()) {
        return None;
    }
    let mut x = vec![F::zero(); nvars];
    for (row, col) in pivots {
        x[col] = rows[row][nvars].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> QRat {
        QRat::q()
    }

    #[test]
    fn exp_of_zero_is_one() {
        let s = QSeries::zero(Var::Z, 6);
        assert_eq!(s.exp().unwrap(), QSeries::one(Var::Z, 6));
    }

    #[test]
    fn exp_of_linear() {
        let c = QRat::qint(3);
        let s = QSeries::new(Var::Z, vec![QRat::zero(), c.clone()], 5);
        let e = s.exp().unwrap();
        let mut fact = QRat::one();
        let mut pow = QRat::one();
        for n in 0..=5 {
            assert_eq!(e.coeff(n), &(&pow / &fact));
            pow = &pow * &c;
            fact = &fact * &QRat::from_int(n as i64 + 1);
        }
    }

    #[test]
    fn exp_requires_zero_constant() {
        let s = QSeries::one(Var::Z, 3);
        assert_eq!(s.exp().unwrap_err(), ScalarError::NonzeroConstantTerm);
    }

    #[test]
    fn min_order_rule() {
        let a = QSeries::one(Var::Z, 5);
        let b = QSeries::one(Var::Z, 3);
        assert_eq!(a.mul(&b).order(), 3);
        assert_eq!(a.add(&b).order(), 3);
    }

    #[test]
    fn geometric_series_reconstructs() {
        let s = QSeries::new(Var::V(1), vec![QRat::one(); 10], 9);
        let r = rational_reconstruct(&s, 3).unwrap().unwrap();
        let expect = RatFn::new(UPoly::one(), UPoly::linear(QRat::one(), QRat::from_int(-1))).unwrap();
        assert_eq!(r, expect);
    }

    #[test]
    fn reconstruct_twisted_ratio() {
        // (1 - v q^-1)/(1 - v q)
        let qi = q().inv().unwrap();
        let f = RatFn::new(UPoly::linear(QRat::one(), -&qi), UPoly::linear(QRat::one(), -q())).unwrap();
        let s = QSeries::from_ratfn(Var::V(1), &f, 8).unwrap();
        assert_eq!(rational_reconstruct(&s, 2).unwrap().unwrap(), f);
    }

    #[test]
    fn reconstruct_needs_order() {
        let s = QSeries::one(Var::V(1), 3);
        assert!(matches!(rational_reconstruct(&s, 3), Err(ScalarError::InsufficientOrder { .. })));
    }
}
