//! Exact matrix models for `U_q(sl2-hat)` and its Borel subalgebras, the
//! Cartan-current operators `T_1(z)` they carry, the sl2 Baxter `Q`
//! operator on Kirillov-Reshetikhin modules, and numeric transfer matrices
//! of the fundamental module.

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::Mat;
use crate::scalars::{
    cseries_inv, cseries_mul, cseries_scale_var, eval_qrat, eval_series, rational_reconstruct, EvalPoint, Field, QRat,
    QSeries, RatFn, ScalarError, UPoly, Var,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Sl2Error {
    #[error("model has no {0} current data; supply h modes explicitly")]
    NonThinWithoutData(&'static str),
    #[error("coefficient of z^{power} at ({row}, {col}) is nonzero beyond degree {degree}")]
    PolynomialityViolation { power: usize, row: usize, col: usize, degree: usize },
    #[error("supplied h modes do not commute")]
    NonCommuting,
    #[error("truncation Kv = {kv} is too small, need at least {need}")]
    TruncationTooSmall { kv: usize, need: usize },
    #[error("mode index {0} is outside the subalgebra acting on this model")]
    ModeUnavailable(i64),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Which module a [`RepModel`] realizes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelKind {
    /// `W_{k, a q^{1-2k}}` with basis `w_0..w_k`.
    Kr { k: usize, a: QRat },
    /// Positive prefundamental `L^+_a`, truncated at level `trunc`.
    LPlus { a: QRat, trunc: usize },
    /// `R^+_a`, truncated at level `trunc`.
    RPlus { a: QRat, trunc: usize },
    /// `Lbar^+_a` over the opposite Borel, truncated at level `trunc`.
    LbarPlus { a: QRat, trunc: usize },
    /// One-dimensional module with trivial `ℓ`-weight.
    Trivial,
}

/// A thin model: basis vectors are common eigenvectors of `k` and of the
/// Cartan currents, whose eigenvalues are rational functions.
#[derive(Clone, Debug, PartialEq)]
pub struct RepModel {
    pub kind: ModelKind,
    pub dim: usize,
    /// Eigenvalues of `k_1`.
    pub k_diag: Vec<QRat>,
    /// Eigenvalues of `φ^+(z)` as rational functions of `z`.
    pub phi_plus: Option<Vec<RatFn<QRat>>>,
    /// Eigenvalues of `φ^-(z)` as rational functions of `w = 1/z`.
    pub phi_minus: Option<Vec<RatFn<QRat>>>,
}

fn q() -> QRat {
    QRat::q()
}

fn qp(e: i64) -> QRat {
    QRat::q_pow_int(e)
}

fn qdiff() -> QRat {
    &q() - &qp(-1)
}

fn lin(c0: QRat, c1: QRat) -> UPoly<QRat> {
    UPoly::linear(c0, c1)
}

/// `R(1/w)` as a rational function of `w`, for `R` with no pole at infinity.
fn at_infinity(r: &RatFn<QRat>) -> RatFn<QRat> {
    let rev = |p: &UPoly<QRat>, deg: usize| {
        let mut c: Vec<QRat> = (0..=deg).map(|k| p.coeff(k)).collect();
        c.reverse();
        UPoly::from_coeffs(c)
    };
    let n = r.num().degree().unwrap_or(0);
    let d = r.den().degree().unwrap_or(0);
    let top = n.max(d);
    RatFn::new(rev(r.num(), top), rev(r.den(), top)).expect("nonzero denominator")
}

/// Kirillov-Reshetikhin model with basis `w_0..w_k`.
pub fn kr_model(k: usize, a: QRat) -> RepModel {
    let kk = k as i64;
    let phi: Vec<RatFn<QRat>> = (0..=kk)
        .map(|j| {
            let num = lin(QRat::one(), (&qp(-2 * kk) * &a).neg()).mul(&lin(QRat::one(), (&qp(2) * &a).neg()));
            let den = lin(QRat::one(), (&qp(2 - 2 * j) * &a).neg()).mul(&lin(QRat::one(), (&qp(-2 * j) * &a).neg()));
            let r = RatFn::new(num, den).expect("nonzero");
            r.mul(&RatFn::constant(qp(kk - 2 * j)))
        })
        .collect();
    let phi_minus = phi.iter().map(at_infinity).collect();
    RepModel {
        kind: ModelKind::Kr { k, a },
        dim: k + 1,
        k_diag: (0..=kk).map(|j| qp(kk - 2 * j)).collect(),
        phi_plus: Some(phi),
        phi_minus: Some(phi_minus),
    }
}

/// Truncated prefundamental model with basis `v_0..v_M`.
pub fn prefund_model(kind: ModelKind) -> RepModel {
    let one_minus = |a: &QRat| RatFn::from_poly(lin(QRat::one(), a.neg()));
    match &kind {
        ModelKind::LPlus { a, trunc } => {
            let k_diag: Vec<QRat> = (0..=*trunc as i64).map(|j| qp(-2 * j)).collect();
            let phi = k_diag.iter().map(|kj| one_minus(a).mul(&RatFn::constant(kj.clone()))).collect();
            RepModel { dim: trunc + 1, k_diag, phi_plus: Some(phi), phi_minus: None, kind }
        }
        ModelKind::RPlus { a, trunc } => {
            let k_diag: Vec<QRat> = (0..=*trunc as i64).map(|j| qp(2 * j)).collect();
            let phi = k_diag.iter().map(|kj| one_minus(a).mul(&RatFn::constant(kj.clone()))).collect();
            RepModel { dim: trunc + 1, k_diag, phi_plus: Some(phi), phi_minus: None, kind }
        }
        ModelKind::LbarPlus { a, trunc } => {
            // φ^-(z) = q^{2j} (1 - (za)^{-1}) = q^{2j} (1 - w/a), so k = q^{-2j}
            let ainv = a.inv().expect("nonzero spectral parameter");
            let k_diag: Vec<QRat> = (0..=*trunc as i64).map(|j| qp(-2 * j)).collect();
            let phi = (0..=*trunc as i64).map(|j| one_minus(&ainv).mul(&RatFn::constant(qp(2 * j)))).collect();
            RepModel { dim: trunc + 1, k_diag, phi_plus: None, phi_minus: Some(phi), kind }
        }
        ModelKind::Kr { k, a } => kr_model(*k, a.clone()),
        ModelKind::Trivial => RepModel {
            kind,
            dim: 1,
            k_diag: vec![QRat::one()],
            phi_plus: Some(vec![RatFn::constant(QRat::one())]),
            phi_minus: Some(vec![RatFn::constant(QRat::one())]),
        },
    }
}

impl RepModel {
    pub fn k(&self) -> Mat<QRat> {
        Mat::from_fn(self.dim, self.dim, |i, j| if i == j { self.k_diag[i].clone() } else { QRat::zero() })
    }

    pub fn k_inv(&self) -> Mat<QRat> {
        Mat::from_fn(self.dim, self.dim, |i, j| if i == j { self.k_diag[i].inv().unwrap() } else { QRat::zero() })
    }

    /// Matrix of `x^+_{1,r}`.
    pub fn x_plus(&self, r: i64) -> Result<Mat<QRat>, Sl2Error> {
        let n = self.dim;
        let mut m = Mat::zeros(n, n);
        match &self.kind {
            ModelKind::Kr { a, .. } => {
                for j in 1..n {
                    let jj = j as i64;
                    m.set(j - 1, j, &a.pow(r)? * &qp(2 * r * (1 - jj)));
                }
            }
            ModelKind::LPlus { .. } => {
                if r < 0 {
                    return Err(Sl2Error::ModeUnavailable(r));
                }
                if r == 0 {
                    for j in 1..n {
                        m.set(j - 1, j, QRat::one());
                    }
                }
            }
            ModelKind::RPlus { .. } => {
                if r < 0 {
                    return Err(Sl2Error::ModeUnavailable(r));
                }
                if r == 0 {
                    for j in 0..n - 1 {
                        m.set(j + 1, j, qp(2 * j as i64));
                    }
                }
            }
            ModelKind::LbarPlus { a, .. } => {
                if r >= 0 {
                    return Err(Sl2Error::ModeUnavailable(r));
                }
                if r == -1 {
                    // sign chosen so that [x^+_{-1}, x^-_0] = -φ^-_{-1}/(q - q^{-1})
                    let c = a.inv()?.neg().checked_div(&qdiff())?;
                    for j in 1..n {
                        let jj = j as i64;
                        m.set(j - 1, j, &(&c * &qp(1 - jj)) * &QRat::qint(jj));
                    }
                }
            }
            ModelKind::Trivial => {}
        }
        Ok(m)
    }

    /// Matrix of `x^-_{1,r}`.
    pub fn x_minus(&self, r: i64) -> Result<Mat<QRat>, Sl2Error> {
        let n = self.dim;
        let mut m = Mat::zeros(n, n);
        match &self.kind {
            ModelKind::Kr { k, a } => {
                for j in 0..n - 1 {
                    let jj = j as i64;
                    let c = &(&a.pow(r)? * &qp(-2 * r * jj)) * &(&QRat::qint(jj + 1) * &QRat::qint(*k as i64 - jj));
                    m.set(j + 1, j, c);
                }
            }
            ModelKind::LPlus { a, .. } => {
                if r < 1 {
                    return Err(Sl2Error::ModeUnavailable(r));
                }
                if r == 1 {
                    let c = a.neg().checked_div(&qdiff())?;
                    for j in 0..n - 1 {
                        let jj = j as i64;
                        m.set(j + 1, j, &(&c * &qp(-jj)) * &QRat::qint(jj + 1));
                    }
                }
            }
            ModelKind::RPlus { a, .. } => {
                if r < 1 {
                    return Err(Sl2Error::ModeUnavailable(r));
                }
                if r == 1 {
                    // sign chosen so that [x^+_0, x^-_1] = φ^+_1/(q - q^{-1})
                    let c = a.checked_div(&qdiff())?;
                    for j in 1..n {
                        let jj = j as i64;
                        m.set(j - 1, j, &(&c * &qp(1 - jj)) * &QRat::qint(jj));
                    }
                }
            }
            ModelKind::LbarPlus { .. } => {
                if r > 0 {
                    return Err(Sl2Error::ModeUnavailable(r));
                }
                if r == 0 {
                    for j in 0..n - 1 {
                        m.set(j + 1, j, qp(2 * j as i64).neg());
                    }
                }
            }
            ModelKind::Trivial => {}
        }
        Ok(m)
    }

    fn truncated(&self) -> bool {
        matches!(self.kind, ModelKind::LPlus { .. } | ModelKind::RPlus { .. } | ModelKind::LbarPlus { .. })
    }

    /// Coefficient `φ^±_{n}` as a diagonal matrix (`n ≥ 0` for `+`, `n ≤ 0` for `-`).
    fn phi_mode(&self, n: i64) -> Option<Mat<QRat>> {
        let (data, idx) = if n > 0 {
            (self.phi_plus.as_ref()?, n as usize)
        } else if n < 0 {
            (self.phi_minus.as_ref()?, (-n) as usize)
        } else {
            return None;
        };
        let vals: Vec<QRat> = data
            .iter()
            .map(|r| QSeries::from_ratfn(Var::Z, r, idx).map(|s| s.coeff(idx).clone()))
            .collect::<Result<_, _>>()
            .ok()?;
        Some(Mat::from_fn(self.dim, self.dim, |i, j| if i == j { vals[i].clone() } else { QRat::zero() }))
    }

    /// Spot-check the defining relations on modes `r, p` in `-2..=2`
    /// that act on this model. Truncated models are compared on all but
    /// the last basis vector.
    pub fn relation_checks(&self) -> Vec<RelationCheck> {
        let mut out = Vec::new();
        let cols = if self.truncated() { self.dim - 1 } else { self.dim };
        let same = |a: &Mat<QRat>, b: &Mat<QRat>| (0..self.dim).all(|i| (0..cols).all(|j| a.get(i, j) == b.get(i, j)));
        let k = self.k();
        let kinv = self.k_inv();
        for r in -2..=2 {
            if let Ok(x) = self.x_plus(r) {
                let lhs = k.mul(&x).mul(&kinv);
                out.push(RelationCheck { name: format!("k x+({}) k^-1 = q^2 x+({})", r, r), passed: same(&lhs, &x.scale(&qp(2))) });
            }
            if let Ok(x) = self.x_minus(r) {
                let lhs = k.mul(&x).mul(&kinv);
                out.push(RelationCheck { name: format!("k x-({}) k^-1 = q^-2 x-({})", r, r), passed: same(&lhs, &x.scale(&qp(-2))) });
            }
        }
        for r in -2..=2 {
            for p in -2..=2 {
                let (Ok(xp), Ok(xm)) = (self.x_plus(r), self.x_minus(p)) else { continue };
                let lhs = xp.commutator(&xm);
                let n = r + p;
                let rhs = if n == 0 {
                    k.sub(&kinv)
                } else if n > 0 {
                    match self.phi_mode(n) {
                        Some(m) => m,
                        None => continue,
                    }
                } else {
                    match self.phi_mode(n) {
                        Some(m) => m.scale(&QRat::from_int(-1)),
                        None => continue,
                    }
                };
                let rhs = rhs.scale(&qdiff().inv().unwrap());
                out.push(RelationCheck { name: format!("[x+({}), x-({})]", r, p), passed: same(&lhs, &rhs) });
            }
        }
        if let Some(pp) = &self.phi_plus {
            let ok = pp.iter().zip(&self.k_diag).all(|(r, kj)| r.eval(&QRat::zero()).map(|x| &x == kj).unwrap_or(false));
            out.push(RelationCheck { name: "φ+(0) = k".into(), passed: ok });
        }
        if let Some(pm) = &self.phi_minus {
            let ok = pm.iter().zip(&self.k_diag).all(|(r, kj)| r.eval(&QRat::zero()).map(|x| x == kj.inv().unwrap()).unwrap_or(false));
            out.push(RelationCheck { name: "φ-(∞) = k^-1".into(), passed: ok });
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub name: String,
    pub passed: bool,
}

fn modes_from(data: &[RatFn<QRat>], k0: &[QRat], kmax: usize, sign: i64) -> Result<Vec<Vec<QRat>>, Sl2Error> {
    let mut per_vec = Vec::new();
    for (r, c0) in data.iter().zip(k0) {
        let s = QSeries::from_ratfn(Var::Z, r, kmax)?.scale(&c0.inv()?);
        let l = s.log()?;
        let f = &qdiff() * &QRat::from_int(sign);
        per_vec.push((1..=kmax).map(|m| l.coeff(m).checked_div(&f)).collect::<Result<Vec<_>, _>>()?);
    }
    Ok(per_vec)
}

fn diag(vals: Vec<QRat>) -> Mat<QRat> {
    let n = vals.len();
    Mat::from_fn(n, n, |i, j| if i == j { vals[i].clone() } else { QRat::zero() })
}

/// `h_{1,-m}`, `m = 1..=K`, read off `φ^-(z) = k^{-1} exp(-(q - q^{-1}) Σ h_{1,-m} z^{-m})`.
pub fn h_negative_modes(model: &RepModel, kmax: usize) -> Result<Vec<Mat<QRat>>, Sl2Error> {
    let pm = model.phi_minus.as_ref().ok_or(Sl2Error::NonThinWithoutData("φ-"))?;
    let kinv: Vec<QRat> = model.k_diag.iter().map(|x| x.inv()).collect::<Result<_, _>>()?;
    let per = modes_from(pm, &kinv, kmax, -1)?;
    Ok((0..kmax).map(|m| diag(per.iter().map(|v| v[m].clone()).collect())).collect())
}

/// `h_{1,m}`, `m = 1..=K`, read off `φ^+(z) = k exp((q - q^{-1}) Σ h_{1,m} z^m)`.
pub fn h_positive_modes(model: &RepModel, kmax: usize) -> Result<Vec<Mat<QRat>>, Sl2Error> {
    let pp = model.phi_plus.as_ref().ok_or(Sl2Error::NonThinWithoutData("φ+"))?;
    let per = modes_from(pp, &model.k_diag, kmax, 1)?;
    Ok((0..kmax).map(|m| diag(per.iter().map(|v| v[m].clone()).collect())).collect())
}

/// `[2m]_q = [m]_q (q^m + q^{-m})`.
fn q2m(m: usize) -> QRat {
    QRat::qint(2 * m as i64)
}

/// Exponential of `Σ_{m≥1} S_m z^m` for pairwise commuting `S_m`, to order `K`.
fn mat_series_exp(s: &[Mat<QRat>], dim: usize) -> Vec<Mat<QRat>> {
    let kmax = s.len();
    let mut e = vec![Mat::identity(dim)];
    for n in 1..=kmax {
        let mut acc = Mat::zeros(dim, dim);
        for k in 1..=n {
            acc = acc.add(&s[k - 1].mul(&e[n - k]).scale(&QRat::from_int(k as i64)));
        }
        e.push(acc.scale(&QRat::from_ratio(1, n as i64)));
    }
    e
}

/// Square matrix of polynomials in `z`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix(pub Vec<Vec<UPoly<QRat>>>);

impl PolyMatrix {
    pub fn degree(&self) -> usize {
        self.0.iter().flatten().filter_map(|p| p.degree()).max().unwrap_or(0)
    }

    pub fn eval(&self, z: &QRat) -> Mat<QRat> {
        let n = self.0.len();
        Mat::from_fn(n, n, |i, j| self.0[i][j].eval(z))
    }

    pub fn to_latex(&self) -> String {
        let rows: Vec<String> = self
            .0
            .iter()
            .map(|r| r.iter().map(|p| crate::scalars::poly_string(p, "z", true)).collect::<Vec<_>>().join(" & "))
            .collect();
        format!("\\begin{{pmatrix}}{}\\end{{pmatrix}}", rows.join(" \\\\ "))
    }
}

/// Check that `g(z)^{-1} T_1(z) = exp(Σ z^m (h_{1,-m} - g_m)/[2m]_q)` is a
/// polynomial of degree at most `degree`, where `g_m` is the eigenvalue
/// of `h_{1,-m}` on a highest weight vector. All coefficients up to `z^K`
/// are computed exactly; the polynomial part is returned.
pub fn ti_polynomial_check(h: &[Mat<QRat>], highest: &[QRat], degree: usize) -> Result<PolyMatrix, Sl2Error> {
    let dim = h.first().map_or(1, |m| m.rows());
    for a in h {
        for b in h {
            if !a.commutator(b).is_zero() {
                return Err(Sl2Error::NonCommuting);
            }
        }
    }
    let s: Vec<Mat<QRat>> = h
        .iter()
        .zip(highest)
        .enumerate()
        .map(|(idx, (hm, g))| hm.sub(&Mat::identity(dim).scale(g)).scale(&q2m(idx + 1).inv().unwrap()))
        .collect();
    let e = mat_series_exp(&s, dim);
    for (power, c) in e.iter().enumerate().skip(degree + 1) {
        for row in 0..dim {
            for col in 0..dim {
                if !c.get(row, col).is_zero() {
                    return Err(Sl2Error::PolynomialityViolation { power, row, col, degree });
                }
            }
        }
    }
    let polys = (0..dim)
        .map(|i| (0..dim).map(|j| UPoly::from_coeffs(e.iter().take(degree + 1).map(|c| c.get(i, j).clone()).collect())).collect())
        .collect();
    Ok(PolyMatrix(polys))
}

/// Supplied `h_{1,-m}` data on the zero weight space of
/// `L(Y_{1,1}) ⊗ L(Y_{1,1})`, with the eigenvalue `2[m]_q/m` on the
/// highest weight vector.
pub fn tensor_square_modes(kmax: usize) -> (Vec<Mat<QRat>>, Vec<QRat>) {
    let c = (&qp(-3) - &qp(2)).checked_div(&(&q() + &qp(-1))).unwrap();
    let mut h = Vec::new();
    let mut g = Vec::new();
    for m in 1..=kmax {
        let mi = m as i64;
        let d = (&QRat::qint(mi) * &(&QRat::one() - &qp(-2 * mi))) * QRat::from_ratio(1, mi);
        let am = (&(&QRat::qint(2 * mi) * &qp(-mi)) * &c).neg();
        let mut mat = Mat::zeros(2, 2);
        mat.set(0, 0, d.clone());
        mat.set(1, 1, d);
        mat.set(0, 1, am);
        h.push(mat);
        g.push(&QRat::qint(mi) * &QRat::from_ratio(2, mi));
    }
    (h, g)
}

/// Matrices at `z1` and `z2` commute exactly.
pub fn commutativity_check(a: &Mat<QRat>, b: &Mat<QRat>) -> bool {
    a.commutator(b).is_zero()
}

// ---------------------------------------------------------------------------
// Q operator on KR modules

/// Polynomial in `z` whose coefficients are truncated series in `v`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZVPoly {
    pub coeffs: Vec<QSeries>,
    pub kv: usize,
}

impl ZVPoly {
    pub fn zero(kv: usize) -> Self {
        ZVPoly { coeffs: Vec::new(), kv }
    }

    fn add_term(&mut self, p: &UPoly<QRat>, shift: usize, s: &QSeries) {
        for (n, c) in p.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let idx = n + shift;
            while self.coeffs.len() <= idx {
                self.coeffs.push(QSeries::zero(Var::V(1), self.kv));
            }
            self.coeffs[idx] = self.coeffs[idx].add(&s.scale(c));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|s| s.is_zero())
    }

    /// Largest power of `z` with a nonzero coefficient series.
    pub fn z_degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|s| !s.is_zero())
    }

    /// The `v = 0` specialization.
    pub fn at_v_zero(&self) -> UPoly<QRat> {
        UPoly::from_coeffs(self.coeffs.iter().map(|s| s.coeff(0).clone()).collect())
    }

    /// Rational reconstruction of each `z`-coefficient at degree bound `d`.
    pub fn reconstruct(&self, d: usize) -> Result<Vec<Option<RatFn<QRat>>>, Sl2Error> {
        self.coeffs.iter().map(|s| rational_reconstruct(s, d).map_err(Sl2Error::from)).collect()
    }

    /// Coefficients in `z` evaluated at numeric `(q, v)` by summing the
    /// truncated series.
    pub fn eval_coeffs(&self, point: &EvalPoint, v: Complex64) -> Result<Vec<Complex64>, Sl2Error> {
        self.coeffs
            .iter()
            .map(|s| Ok(eval_series(s, point)?.iter().rev().fold(Complex64::zero(), |acc, c| acc * v + c)))
            .collect()
    }
}

/// Output of [`transfer_sl2`].
#[derive(Clone, Debug, PartialEq)]
pub struct TransferResult {
    pub n: usize,
    pub kv: usize,
    /// Operator matrix in the basis `w_0..w_N`, divided by `f_1(z)`.
    pub matrix: Vec<Vec<ZVPoly>>,
    /// `f_1(z)`, the eigenvalue of `T_1(z)` on `w_0`.
    pub f1: QSeries,
}

impl TransferResult {
    /// `Q_1(z, v)` on `w_j`.
    pub fn q_poly(&self, j: usize) -> &ZVPoly {
        &self.matrix[j][j]
    }

    pub fn is_diagonal(&self) -> bool {
        self.matrix.iter().enumerate().all(|(i, row)| row.iter().enumerate().all(|(j, e)| i == j || e.is_zero()))
    }

    /// The diagonal entries as rational functions in `v` per `z`-coefficient.
    pub fn reconstruct(&self, d: usize) -> Result<Vec<Vec<Option<RatFn<QRat>>>>, Sl2Error> {
        (0..=self.n).map(|j| self.q_poly(j).reconstruct(d)).collect()
    }

    /// The matrix at `z = z0` as series in `v`.
    pub fn at_z(&self, z0: &QRat) -> Vec<Vec<QSeries>> {
        self.matrix
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| {
                        let mut acc = QSeries::zero(Var::V(1), self.kv);
                        let mut zp = QRat::one();
                        for c in &e.coeffs {
                            acc = acc.add(&c.scale(&zp));
                            zp = &zp * z0;
                        }
                        acc
                    })
                    .collect()
            })
            .collect()
    }
}

/// Eigenvalues of `T_1(z) = exp(Σ z^m h_{1,-m} / [2m]_q)` on a thin model,
/// to order `K`.
pub fn t1_eigenvalues(model: &RepModel, kmax: usize) -> Result<Vec<QSeries>, Sl2Error> {
    let h = h_negative_modes(model, kmax)?;
    (0..model.dim)
        .map(|j| {
            let mut c = vec![QRat::zero()];
            for (m, hm) in h.iter().enumerate() {
                c.push(hm.get(j, j).checked_div(&q2m(m + 1))?);
            }
            Ok(QSeries::new(Var::Z, c, kmax).exp()?)
        })
        .collect()
}

/// `f_1(z)` for `W_{N, q^{1-2N}}`: the `T_1` eigenvalue on its highest vector.
pub fn f1_series(n: usize, kmax: usize) -> Result<QSeries, Sl2Error> {
    Ok(t1_eigenvalues(&kr_model(n, QRat::one()), kmax)?.swap_remove(0))
}

/// The operator
/// `Σ_{r≤N} ((q - q^{-1}) z)^r / [r]_q! (x^-_0)^r T_1(z) (x^+_{-1} k)^r Σ_{m≥r} v^m [m;r]_q q^{r(3-r)/2 - rm} k^{-m}`
/// on `W_{N, q^{1-2N}}`, divided by `f_1(z)`, with the inner sums truncated at `v^{Kv}`.
pub fn transfer_sl2(n: usize, kv: usize) -> Result<TransferResult, Sl2Error> {
    if kv < n {
        return Err(Sl2Error::TruncationTooSmall { kv, need: n });
    }
    let model = kr_model(n, QRat::one());
    let dim = n + 1;
    let kz = n + 3;
    let t = t1_eigenvalues(&model, kz)?;
    let f1 = t[0].clone();
    let f1_inv = f1.inv()?;
    // T_1 / f_1 on each basis vector, exactly polynomial of degree j
    let mut tpoly = Vec::new();
    for (j, tj) in t.iter().enumerate() {
        let s = tj.mul(&f1_inv);
        if let Some(bad) = (j + 1..=kz).find(|&p| !s.coeff(p).is_zero()) {
            return Err(Sl2Error::PolynomialityViolation { power: bad, row: j, col: j, degree: j });
        }
        tpoly.push(UPoly::from_coeffs(s.coeffs()[..=j].to_vec()));
    }
    let xm = model.x_minus(0)?;
    let xpk = model.x_plus(-1)?.mul(&model.k());
    let mut matrix = vec![vec![ZVPoly::zero(kv); dim]; dim];
    let mut xm_r = Mat::identity(dim);
    let mut xpk_r = Mat::identity(dim);
    let mut rfact = QRat::one();
    for r in 0..=n {
        if r > 0 {
            xm_r = xm.mul(&xm_r);
            xpk_r = xpk_r.mul(&xpk);
            rfact = &rfact * &QRat::qint(r as i64);
        }
        let pref = qdiff().pow(r as i64)?.checked_div(&rfact)?;
        let ri = r as i64;
        for c in 0..dim {
            let kc = &model.k_diag[c];
            let coeffs: Vec<QRat> = (0..=kv as i64)
                .map(|m| {
                    if m < ri {
                        return Ok(QRat::zero());
                    }
                    let e = ri * (3 - ri) / 2 - ri * m;
                    Ok(&(&QRat::qbinom(m, ri) * &qp(e)) * &kc.pow(-m)?)
                })
                .collect::<Result<_, ScalarError>>()?;
            let inner = QSeries::new(Var::V(1), coeffs, kv);
            for a in 0..dim {
                for b in 0..dim {
                    let w = &(&pref * xm_r.get(a, b)) * xpk_r.get(b, c);
                    if w.is_zero() {
                        continue;
                    }
                    matrix[a][c].add_term(&tpoly[b].scale(&w), r, &inner);
                }
            }
        }
    }
    Ok(TransferResult { n, kv, matrix, f1 })
}

/// `Π_{i<j} (1 - z q^{2i})`.
pub fn u_zero_limit(j: usize) -> UPoly<QRat> {
    (0..j as i64).fold(UPoly::one(), |acc, i| acc.mul(&lin(QRat::one(), qp(2 * i).neg())))
}

/// Closed form of the `z`-coefficients of `Q_1` on `w_j`, with the inner
/// sums in `v` still as truncated series; used as an independent check.
pub fn q_closed_form(n: usize, j: usize, kv: usize) -> Result<ZVPoly, Sl2Error> {
    let (ni, ji) = (n as i64, j as i64);
    let mut out = ZVPoly::zero(kv);
    for r in 0..=ji {
        // q^{-r((r+1)/2 - N)} = q^{(2rN - r^2 - r)/2}
        let e = Rational64::new(2 * r * ni - r * r - r, 2);
        let pre = &(&(&qdiff().pow(r)? * &QRat::qfact((ni - ji + r) as u64)) * &QRat::qbinom(ji, r))
            * &QRat::q_pow(e).checked_div(&QRat::qfact((ni - ji) as u64))?;
        let inner: Vec<QRat> = (0..=kv as i64)
            .map(|m| if m < r { QRat::zero() } else { &QRat::qbinom(m, r) * &qp(-m * (r + ni - 2 * ji)) })
            .collect();
        let inner = QSeries::new(Var::V(1), inner, kv).scale(&pre);
        out.add_term(&u_zero_limit((ji - r) as usize), r as usize, &inner);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// numeric transfer matrix of the fundamental module

fn to_c(m: &Mat<QRat>, point: &EvalPoint) -> Result<Vec<Vec<Complex64>>, Sl2Error> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| Ok(eval_qrat(m.get(i, j), point)?)).collect()).collect()
}

fn cmatvec(m: &[Vec<Complex64>], x: &[Complex64]) -> Vec<Complex64> {
    m.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
}

fn cexp(s: &[Complex64]) -> Vec<Complex64> {
    let k = s.len() - 1;
    let mut e = vec![Complex64::zero(); k + 1];
    e[0] = Complex64::one();
    for n in 1..=k {
        let mut acc = Complex64::zero();
        for m in 1..=n {
            acc += s[m] * e[n - m] * m as f64;
        }
        e[n] = acc / n as f64;
    }
    e
}

/// Eigenvalues on `w_0..w_N` of the transfer matrix of `V = L(Y_{1,q^{-1}})`
/// acting on `W_{N, q^{1-2N}}`, as `z`-series to order `K` at numeric
/// `(q, u)`. The universal R-matrix is factored into its Cartan part
/// `exp(-(q - q^{-1}) Σ m/[2m]_q h^V_m ⊗ h^W_{-m} z^m)` and the single
/// root-vector correction that survives on the two-dimensional `V`.
pub fn transfer_fundamental_sl2(n: usize, point: &EvalPoint, u: Complex64, kmax: usize) -> Result<Vec<Vec<Complex64>>, Sl2Error> {
    let w = kr_model(n, QRat::one());
    let vmod = kr_model(1, QRat::one());
    let dim = n + 1;
    let hw = h_negative_modes(&w, kmax)?;
    let hv = h_positive_modes(&vmod, kmax)?;
    let qv = point.q;
    let qd = qv - 1.0 / qv;
    // Cartan part on v_s ⊗ w_j
    let cartan = |s: usize, j: usize| -> Result<Vec<Complex64>, Sl2Error> {
        let mut c = vec![Complex64::zero(); kmax + 1];
        for m in 1..=kmax {
            let coef = eval_qrat(&q2m(m), point)?;
            let hvm = eval_qrat(hv[m - 1].get(s, s), point)?;
            let hwm = eval_qrat(hw[m - 1].get(j, j), point)?;
            c[m] = -qd * m as f64 / coef * hvm * hwm;
        }
        Ok(cexp(&c))
    };
    let r0: Vec<Vec<Complex64>> = (0..dim).map(|j| cartan(0, j)).collect::<Result<_, _>>()?;
    let r1: Vec<Vec<Complex64>> = (0..dim).map(|j| cartan(1, j)).collect::<Result<_, _>>()?;
    let kw = to_c(&w.k(), point)?;
    let mut out = Vec::new();
    for j in 0..dim {
        let mut cross = vec![Complex64::zero(); kmax + 1];
        for m in 0..=kmax {
            let xmw = to_c(&w.x_minus(-(m as i64))?, point)?;
            let xmv = eval_qrat(vmod.x_minus(m as i64)?.get(1, 0), point)?;
            for mp in 1..=kmax - m {
                let xpw = to_c(&w.x_plus(-(mp as i64))?, point)?;
                let xpv = eval_qrat(vmod.x_plus(mp as i64)?.get(0, 1), point)?;
                let mut e = vec![Complex64::zero(); dim];
                e[j] = Complex64::one();
                let vec1 = cmatvec(&xpw, &cmatvec(&kw, &e));
                for d in 0..=kmax - m - mp {
                    let scaled: Vec<Complex64> = (0..dim).map(|i| r1[i][d] * vec1[i]).collect();
                    let back = cmatvec(&xmw, &scaled);
                    cross[m + mp + d] += qd * qd * qv * xmv * xpv * back[j];
                }
            }
        }
        let half = point.q_pow((n as f64 - 2.0 * j as f64) / 2.0);
        let t: Vec<Complex64> = (0..=kmax).map(|p| (r0[j][p] + cross[p]) * u / half + r1[j][p] * half / u).collect();
        out.push(t);
    }
    Ok(out)
}

/// Residual of the sl2 Baxter relation
/// `t(z) F(bqz) = q^j a u F(bz/q) + (q^j a u)^{-1} F(bq^3 z)`, with
/// `F = f_1 Q_1`, `b = q^{-1}` and `a = q^{-N/2}`, using numeric `Q_1`
/// coefficients on `w_j`. Returns the largest coefficient error relative
/// to the largest coefficient of the left side.
pub fn baxter_residual(
    n: usize,
    j: usize,
    t: &[Complex64],
    q_coeffs: &[Complex64],
    point: &EvalPoint,
    u: Complex64,
) -> Result<f64, Sl2Error> {
    let kmax = t.len() - 1;
    let f = eval_series(&f1_series(n, kmax)?, point)?;
    let mut qs = vec![Complex64::zero(); kmax + 1];
    for (i, c) in q_coeffs.iter().enumerate().take(kmax + 1) {
        qs[i] = *c;
    }
    let fq = cseries_mul(&f, &qs);
    let b = 1.0 / point.q;
    let big = |c: Complex64| cseries_scale_var(&fq, c);
    let a = point.q_pow(-(n as f64) / 2.0);
    let pref = point.q_pow(j as f64) * a * u;
    let lhs = cseries_mul(t, &big(b * point.q));
    let r1 = big(b / point.q);
    let r2 = big(b * point.q_pow(3.0));
    let scale = lhs.iter().map(|x| x.norm()).fold(1e-300, f64::max);
    let err = (0..=kmax).map(|p| (lhs[p] - pref * r1[p] - r2[p] / pref).norm()).fold(0.0, f64::max);
    Ok(err / scale)
}

/// Eigenvalue series `t(z) = [q^j a u F(bz/q) + (q^j a u)^{-1} F(bq^3 z)] / F(bqz)`.
pub fn baxter_eigenvalue(n: usize, j: usize, q_coeffs: &[Complex64], point: &EvalPoint, u: Complex64, kmax: usize) -> Result<Vec<Complex64>, Sl2Error> {
    let f = eval_series(&f1_series(n, kmax)?, point)?;
    let mut qs = vec![Complex64::zero(); kmax + 1];
    for (i, c) in q_coeffs.iter().enumerate().take(kmax + 1) {
        qs[i] = *c;
    }
    let fq = cseries_mul(&f, &qs);
    let b = 1.0 / point.q;
    let big = |c: Complex64| cseries_scale_var(&fq, c);
    let pref = point.q_pow(j as f64) * point.q_pow(-(n as f64) / 2.0) * u;
    let den = cseries_inv(&big(b * point.q))?;
    let r1 = big(b / point.q);
    let r2 = big(b * point.q_pow(3.0));
    let num: Vec<Complex64> = r1.iter().zip(&r2).map(|(x, y)| pref * x + y / pref).collect();
    Ok(cseries_mul(&num, &den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kr_entries() {
        let m = kr_model(1, QRat::one());
        assert!(m.x_minus(0).unwrap().get(1, 0).is_one());
        let m3 = kr_model(3, QRat::q());
        for c in m3.relation_checks() {
            assert!(c.passed, "{}", c.name);
        }
    }

    #[test]
    fn prefundamental_relations() {
        for kind in [
            ModelKind::LPlus { a: QRat::q(), trunc: 5 },
            ModelKind::RPlus { a: QRat::q_pow_int(-1), trunc: 5 },
            ModelKind::LbarPlus { a: QRat::q_pow_int(2), trunc: 5 },
            ModelKind::Trivial,
        ] {
            let m = prefund_model(kind);
            let checks = m.relation_checks();
            assert!(!checks.is_empty());
            for c in checks {
                assert!(c.passed, "{:?} {}", m.kind, c.name);
            }
        }
    }

    #[test]
    fn trivial_h_vanish() {
        let m = prefund_model(ModelKind::Trivial);
        assert!(h_negative_modes(&m, 5).unwrap().iter().all(|h| h.is_zero()));
    }

    #[test]
    fn tensor_square_polynomial() {
        let (h, g) = tensor_square_modes(10);
        let p = ti_polynomial_check(&h, &g, 1).unwrap();
        let one_minus = UPoly::linear(QRat::one(), QRat::q_pow_int(-1).neg());
        assert_eq!(p.0[0][0], one_minus);
        assert_eq!(p.0[1][1], one_minus);
        assert!(p.0[1][0].is_zero());
        let off = (&QRat::q() - &QRat::q_pow_int(-4)).checked_div(&(&QRat::q() + &QRat::q_pow_int(-1))).unwrap();
        assert_eq!(p.0[0][1], UPoly::linear(QRat::zero(), off));
        assert!(ti_polynomial_check(&h, &g, 0).is_err());
    }

    #[test]
    fn baxter_polynomial_n1() {
        let t = transfer_sl2(1, 8).unwrap();
        assert!(t.is_diagonal());
        let rec = t.reconstruct(2).unwrap();
        let q = QRat::q();
        let qi = q.inv().unwrap();
        let c0 = RatFn::new(UPoly::one(), UPoly::linear(QRat::one(), q.neg())).unwrap();
        let c1 = RatFn::new(UPoly::constant(QRat::from_int(-1)), UPoly::linear(QRat::one(), qi.neg())).unwrap();
        assert_eq!(rec[1][0].as_ref().unwrap(), &c0);
        assert_eq!(rec[1][1].as_ref().unwrap(), &c1);
    }

    #[test]
    fn degree_and_u_zero_limit() {
        for n in 0..=4 {
            let t = transfer_sl2(n, n + 2).unwrap();
            assert!(t.is_diagonal());
            for j in 0..=n {
                let qj = t.q_poly(j);
                assert_eq!(qj.z_degree(), Some(j));
                assert_eq!(qj.at_v_zero(), u_zero_limit(j));
                assert_eq!(qj, &q_closed_form(n, j, n + 2).unwrap());
            }
        }
    }

    #[test]
    fn baxter_numeric() {
        let point = EvalPoint::random(42);
        let u = Complex64::new(0.21, 0.07);
        let v = u * u;
        for n in 1..=3 {
            let tr = transfer_sl2(n, 40).unwrap();
            let tv = transfer_fundamental_sl2(n, &point, u, 8).unwrap();
            for j in 0..=n {
                let qc = tr.q_poly(j).eval_coeffs(&point, v).unwrap();
                let res = baxter_residual(n, j, &tv[j], &qc, &point, u).unwrap();
                assert!(res < 1e-9, "N={} j={} residual {}", n, j, res);
            }
        }
    }
}
