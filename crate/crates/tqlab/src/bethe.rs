//! Generalized Bethe equations for the roots `w^{(i)}_k` of the `Q_i`
//! polynomials, their exact single-root solution, and numeric solvers.
//!
//! For node `i` and root `k` the equation reads
//!
//! ```text
//! v_i prod_j q_i^{deg P_{j,i}} P_{j,i}(q_i^{-1}/w) / P_{j,i}(q_i/w)
//!   = prod_{s != k} q_i^2 (w_k - w_s q_i^{-2}) / (w_k - w_s q_i^2)
//!     * prod_{l != i} prod_s q^{C_{li}} (w_k - w^{(l)}_s q^{-C_{li}}) / (w_k - w^{(l)}_s q^{C_{li}})
//! ```
//!
//! with `P_{j,i}(z) = prod_b (1 - b z)` over the points `b` of the `j`-th
//! tensor factor, so each left factor becomes `(w - b q_i^{-1}) / (w - b q_i)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cartan::{CartanDatum, CartanError};
use crate::scalars::{eval_qrat, fmt_q_power, EvalPoint, Field, QRat, RatFn, ScalarError, UPoly};
use crate::spectra::{SpectraError, TargetModuleData};
use crate::ymono::{Monomial, SpectralPoint};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BetheError {
    #[error("expected {expected} root counts, got {got}")]
    CountMismatch { expected: usize, got: usize },
    #[error("closed-form solve needs exactly one root in total, the system has {0}")]
    NotSingleRoot(usize),
    #[error("after cancelling common factors the equation has degree ({num}, {den}) instead of (1, 1)")]
    NotLinear { num: usize, den: usize },
    #[error("equation is independent of the root")]
    DegenerateLinearSystem,
    #[error("exact verification of the closed-form root failed")]
    VerificationFailed,
    #[error("need {expected} twist values, got {got}")]
    TwistMismatch { expected: usize, got: usize },
    #[error("eigenvalue computation did not converge")]
    Eigen,
    #[error("the resultant oracle handles two-root systems only")]
    OracleArity,
    #[error(transparent)]
    Cartan(#[from] CartanError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// `(w - num X) / (w - den X)` with `X = 1` or `X = w_other`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ratio {
    pub other: Option<usize>,
    pub num: QRat,
    pub den: QRat,
}

/// One equation, for the variable with flat index `var`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetheEquation {
    pub node: usize,
    pub index: usize,
    pub var: usize,
    /// Exponent of `q` multiplying `v_i` on the left.
    pub lhs_qexp: i64,
    pub lhs: Vec<Ratio>,
    /// Exponent of `q` collected from the right-hand prefactors.
    pub rhs_qexp: i64,
    pub rhs: Vec<Ratio>,
}

/// Bethe system attached to a tensor product of modules and root counts
/// `m_i` per node.
#[derive(Clone, Debug)]
pub struct BetheSystem {
    cd: CartanDatum,
    factors: Vec<TargetModuleData>,
    counts: Vec<usize>,
    vars: Vec<(usize, usize)>,
}

impl BetheSystem {
    pub fn new(cd: &CartanDatum, factors: Vec<TargetModuleData>, counts: Vec<usize>) -> Result<Self, BetheError> {
        if counts.len() != cd.rank() {
            return Err(BetheError::CountMismatch { expected: cd.rank(), got: counts.len() });
        }
        let vars = cd.nodes().flat_map(|i| (1..=counts[i - 1]).map(move |k| (i, k))).collect();
        Ok(BetheSystem { cd: cd.clone(), factors, counts, vars })
    }

    /// sl2 system for `W_{R_1, b_1 q^{1-R_1}} x ... x W_{R_N, b_N q^{1-R_N}}`
    /// with `b_j = q^{e_j}`; `e_j` defaults to `-R_j`.
    pub fn sl2_kr(lengths: &[(usize, Option<i64>)], m: usize) -> Result<Self, BetheError> {
        let cd = CartanDatum::from_label("A1")?;
        let factors = lengths.iter().map(|&(r, e)| sl2_kr_module(r, e.unwrap_or(-(r as i64)))).collect();
        Self::new(&cd, factors, vec![m])
    }

    pub fn cartan(&self) -> &CartanDatum {
        &self.cd
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Flat variable list as `(node, index)` pairs, 1-based.
    pub fn variables(&self) -> &[(usize, usize)] {
        &self.vars
    }

    fn flat(&self, i: usize, k: usize) -> usize {
        self.vars.iter().position(|&v| v == (i, k)).expect("variable exists")
    }

    pub fn equations(&self) -> Vec<BetheEquation> {
        let cd = &self.cd;
        self.vars
            .iter()
            .enumerate()
            .map(|(var, &(i, k))| {
                let di = cd.d(i);
                let qi = cd.q_i(i);
                let qi_inv = qi.inv().expect("q_i is nonzero");
                let mut lhs_qexp = 0;
                let mut lhs = Vec::new();
                for f in &self.factors {
                    for (b, e) in f.drinfeld_points(i) {
                        let b = b.q_part();
                        lhs_qexp += di * e;
                        for _ in 0..e {
                            lhs.push(Ratio { other: None, num: &b * &qi_inv, den: &b * &qi });
                        }
                    }
                }
                let mut rhs_qexp = 0;
                let mut rhs = Vec::new();
                for s in 1..=self.counts[i - 1] {
                    if s != k {
                        rhs_qexp += 2 * di;
                        rhs.push(Ratio {
                            other: Some(self.flat(i, s)),
                            num: QRat::q_pow_int(-2 * di),
                            den: QRat::q_pow_int(2 * di),
                        });
                    }
                }
                for l in cd.nodes().filter(|&l| l != i) {
                    let c = cd.c(l, i);
                    if c == 0 {
                        continue;
                    }
                    for s in 1..=self.counts[l - 1] {
                        rhs_qexp += c;
                        rhs.push(Ratio {
                            other: Some(self.flat(l, s)),
                            num: QRat::q_pow_int(-c),
                            den: QRat::q_pow_int(c),
                        });
                    }
                }
                sort_ratios(&mut lhs);
                sort_ratios(&mut rhs);
                BetheEquation { node: i, index: k, var, lhs_qexp, lhs, rhs_qexp, rhs }
            })
            .collect()
    }

    fn var_latex(&self, var: usize) -> String {
        let (i, k) = self.vars[var];
        if self.cd.rank() == 1 {
            format!("w_{{{}}}", k)
        } else {
            format!("w^{{({})}}_{{{}}}", i, k)
        }
    }

    fn ratio_side_latex(&self, var: usize, r: &Ratio, c: &QRat) -> String {
        let w = self.var_latex(var);
        let x = r.other.map(|o| self.var_latex(o));
        if c.is_zero() {
            return w;
        }
        let cs = if c.is_monomial() { c.to_latex() } else { format!("({})", c.to_latex()) };
        match (x, c.is_one()) {
            (None, _) => format!("{} - {}", w, cs),
            (Some(x), true) => format!("{} - {}", w, x),
            (Some(x), false) => format!("{} - {} {}", w, cs, x),
        }
    }

    fn side_latex(&self, eq: &BetheEquation, lead: &str, qexp: i64, rs: &[Ratio]) -> String {
        let mut s = lead.to_string();
        if qexp != 0 {
            s.push_str(&fmt_q_power(qexp.into(), true));
        }
        for r in rs {
            s.push_str(&format!(
                " \\frac{{{}}}{{{}}}",
                self.ratio_side_latex(eq.var, r, &r.num),
                self.ratio_side_latex(eq.var, r, &r.den)
            ));
        }
        let s = s.trim().to_string();
        if s.is_empty() {
            "1".into()
        } else {
            s
        }
    }

    /// LaTeX for one equation, e.g. `v q \frac{w_{1} - q^{-2}}{w_{1} - 1} = 1`.
    pub fn equation_latex(&self, eq: &BetheEquation) -> String {
        let v = if self.cd.rank() == 1 { "v ".to_string() } else { format!("v_{{{}}} ", eq.node) };
        let lhs = self.side_latex(eq, &v, eq.lhs_qexp, &eq.lhs);
        let rhs = self.side_latex(eq, "", eq.rhs_qexp, &eq.rhs);
        format!("{} = {}", lhs, rhs)
    }

    /// Equations after renaming the roots of `node` by `perm` (0-based,
    /// indices `1..=m_i`), sorted into a canonical order for comparison.
    pub fn permuted_equations(&self, node: usize, perm: &[usize]) -> Vec<BetheEquation> {
        let rename = |v: usize| -> usize {
            let (i, k) = self.vars[v];
            if i == node {
                self.flat(i, perm[k - 1] + 1)
            } else {
                v
            }
        };
        let mut out: Vec<BetheEquation> = self
            .equations()
            .into_iter()
            .map(|mut e| {
                e.var = rename(e.var);
                e.index = self.vars[e.var].1;
                for r in e.rhs.iter_mut() {
                    r.other = r.other.map(rename);
                }
                sort_ratios(&mut e.rhs);
                e
            })
            .collect();
        out.sort_by_key(|e| e.var);
        out
    }

    fn twists(&self, v: &[Complex64]) -> Result<(), BetheError> {
        if v.len() != self.cd.rank() {
            return Err(BetheError::TwistMismatch { expected: self.cd.rank(), got: v.len() });
        }
        Ok(())
    }

    /// Numeric form: every equation as `A(w) = B(w)` with `A`, `B` products
    /// of linear factors after clearing denominators.
    pub fn numeric(&self, point: &EvalPoint, v: &[Complex64]) -> Result<NumericSystem, BetheError> {
        self.twists(v)?;
        let mut eqs = Vec::new();
        for e in self.equations() {
            let lin = |r: &Ratio, c: &QRat| -> Result<Lin, BetheError> {
                Ok(Lin { var: e.var, other: r.other, c: eval_qrat(c, point)? })
            };
            let mut lhs_num = Vec::new();
            let mut lhs_den = Vec::new();
            for r in &e.lhs {
                lhs_num.push(lin(r, &r.num)?);
                lhs_den.push(lin(r, &r.den)?);
            }
            let mut rhs_num = Vec::new();
            let mut rhs_den = Vec::new();
            for r in &e.rhs {
                rhs_num.push(lin(r, &r.num)?);
                rhs_den.push(lin(r, &r.den)?);
            }
            let lhs_const = v[e.node - 1] * point.q_pow(e.lhs_qexp as f64);
            let rhs_const = point.q_pow(e.rhs_qexp as f64);
            eqs.push(NumericEquation { lhs_const, lhs_num, lhs_den, rhs_const, rhs_num, rhs_den });
        }
        Ok(NumericSystem { nvars: self.vars.len(), nodes: self.vars.iter().map(|v| v.0).collect(), eqs })
    }

    /// Exact solution of a system with a single root `w` as a rational
    /// function of the twist `v` of its node.
    pub fn solve_closed_single(&self) -> Result<RatFn<QRat>, BetheError> {
        if self.vars.len() != 1 {
            return Err(BetheError::NotSingleRoot(self.vars.len()));
        }
        let eq = &self.equations()[0];
        let lin = |c: &QRat| UPoly::linear(c.neg(), QRat::one());
        let n = eq.lhs.iter().fold(UPoly::one(), |acc, r| acc.mul(&lin(&r.num)));
        let d = eq.lhs.iter().fold(UPoly::one(), |acc, r| acc.mul(&lin(&r.den)));
        let g = UPoly::gcd(&n, &d);
        let n = n.div_rem(&g)?.0;
        let d = d.div_rem(&g)?.0;
        let (nd, dd) = (n.degree().unwrap_or(0), d.degree().unwrap_or(0));
        if nd != 1 || dd != 1 {
            return Err(BetheError::NotLinear { num: nd, den: dd });
        }
        // roots of the reduced factors
        let n0 = n.coeff(0).neg().div(&n.coeff(1))?;
        let d0 = d.coeff(0).neg().div(&d.coeff(1))?;
        if n0 == d0 {
            return Err(BetheError::DegenerateLinearSystem);
        }
        // v c (w - n0) = (w - d0)  =>  w = (v c n0 - d0) / (v c - 1)
        let c = QRat::q_pow_int(eq.lhs_qexp);
        let w = RatFn::new(UPoly::linear(d0.neg(), &c * &n0), UPoly::linear(QRat::from_int(-1), c.clone()))?;
        self.verify_closed(eq, &w)?;
        Ok(w)
    }

    fn verify_closed(&self, eq: &BetheEquation, w: &RatFn<QRat>) -> Result<(), BetheError> {
        let v = RatFn::from_poly(UPoly::linear(QRat::zero(), QRat::one()));
        let mut lhs = v.mul(&RatFn::constant(QRat::q_pow_int(eq.lhs_qexp)));
        for r in &eq.lhs {
            let num = w.sub(&RatFn::constant(r.num.clone()));
            let den = w.sub(&RatFn::constant(r.den.clone()));
            lhs = lhs.mul(&num).div(&den).map_err(|_| BetheError::VerificationFailed)?;
        }
        if lhs.is_one() {
            Ok(())
        } else {
            Err(BetheError::VerificationFailed)
        }
    }

    /// Solve numerically. A single root uses the companion matrix of the
    /// cleared polynomial; larger systems use damped Newton from seeded
    /// random starts.
    pub fn solve_numeric(
        &self,
        point: &EvalPoint,
        v: &[Complex64],
        cfg: &NewtonConfig,
    ) -> Result<Vec<BetheSolution>, BetheError> {
        let sys = self.numeric(point, v)?;
        let candidates = if self.vars.len() == 1 {
            sys.single_roots()?.into_iter().map(|w| vec![w]).collect()
        } else {
            sys.newton_multistart(cfg)
        };
        let mut out: Vec<BetheSolution> = Vec::new();
        for w in candidates {
            if !sys.is_admissible(&w, cfg.separation) {
                continue;
            }
            let residual = sys.residual(&w);
            if residual > cfg.accept {
                continue;
            }
            let sol = BetheSolution { roots: self.group(&w), residual };
            if !out.iter().any(|o| o.same_as(&sol, cfg.separation)) {
                out.push(sol);
            }
        }
        Ok(out)
    }

    /// Group a flat root vector per node, each list sorted.
    pub fn group(&self, w: &[Complex64]) -> Vec<Vec<Complex64>> {
        let mut out = vec![Vec::new(); self.cd.rank()];
        for (x, &(i, _)) in w.iter().zip(&self.vars) {
            out[i - 1].push(*x);
        }
        for r in out.iter_mut() {
            sort_complex(r);
        }
        out
    }

    /// Independent oracle for two-root systems: eliminate the second root
    /// with a Sylvester resultant, find the roots of the resultant from a
    /// companion matrix, and back-substitute.
    pub fn resultant_oracle(&self, point: &EvalPoint, v: &[Complex64], separation: f64) -> Result<Vec<BetheSolution>, BetheError> {
        if self.vars.len() != 2 {
            return Err(BetheError::OracleArity);
        }
        let sys = self.numeric(point, v)?;
        let deg = sys.eqs.iter().map(|e| e.degree()).collect::<Vec<_>>();
        let n = deg[0] * deg[1] + 1;
        let samples: Vec<Complex64> = (0..n)
            .map(|t| {
                let x = Complex64::from_polar(1.0, std::f64::consts::TAU * t as f64 / n as f64);
                let p = sys.eqs[0].poly_in(1, 0, x);
                let r = sys.eqs[1].poly_in(1, 0, x);
                sylvester_det(&p, &r)
            })
            .collect();
        // inverse DFT on the unit circle
        let coeffs: Vec<Complex64> = (0..n)
            .map(|k| {
                samples
                    .iter()
                    .enumerate()
                    .map(|(t, s)| s * Complex64::from_polar(1.0, -std::f64::consts::TAU * (k * t) as f64 / n as f64))
                    .sum::<Complex64>()
                    / n as f64
            })
            .collect();
        let mut out: Vec<BetheSolution> = Vec::new();
        for x in poly_roots(&coeffs)? {
            let p = sys.eqs[0].poly_in(1, 0, x);
            for y in poly_roots(&p)? {
                let w = vec![x, y];
                let scale = sys.eqs[1].scale(&w);
                if sys.eqs[1].value(&w).norm() > 1e-6 * scale {
                    continue;
                }
                if !sys.is_admissible(&w, separation) {
                    continue;
                }
                let sol = BetheSolution { roots: self.group(&w), residual: sys.residual(&w) };
                if !out.iter().any(|o| o.same_as(&sol, separation)) {
                    out.push(sol);
                }
            }
        }
        Ok(out)
    }
}

/// `W_{R, b q^{1-R}}` with `b = q^e`: highest monomial
/// `Y_{b q^{R-1}} Y_{b q^{R-3}} ... Y_{b q^{1-R}}`.
pub fn sl2_kr_module(r: usize, e: i64) -> TargetModuleData {
    let m = Monomial::from_factors((0..r as i64).map(|s| (1, SpectralPoint::q_pow(e + r as i64 - 1 - 2 * s), 1)));
    TargetModuleData::new(m).expect("KR highest monomial is dominant on the unit anchor")
}

/// `w_var - c X` with `X = 1` or `X = w_other`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lin {
    pub var: usize,
    pub other: Option<usize>,
    pub c: Complex64,
}

impl Lin {
    fn value(&self, w: &[Complex64]) -> Complex64 {
        w[self.var] - self.c * self.other.map_or(Complex64::one(), |o| w[o])
    }

    fn grad(&self, x: usize) -> Complex64 {
        let mut g = Complex64::zero();
        if self.var == x {
            g += 1.0;
        }
        if self.other == Some(x) {
            g -= self.c;
        }
        g
    }

    /// This factor as a polynomial in `w_y` with `w_x` fixed.
    fn poly_in(&self, y: usize, x: usize, xv: Complex64) -> Vec<Complex64> {
        let mut p = [Complex64::zero(); 2];
        let mut add = |idx: Option<usize>, coef: Complex64| match idx {
            None => p[0] += coef,
            Some(i) if i == y => p[1] += coef,
            Some(i) if i == x => p[0] += coef * xv,
            _ => unreachable!("two-variable system"),
        };
        add(Some(self.var), Complex64::one());
        add(self.other, -self.c);
        p.to_vec()
    }
}

fn prod(fs: &[Lin], w: &[Complex64]) -> Complex64 {
    fs.iter().map(|f| f.value(w)).product()
}

fn prod_grad(fs: &[Lin], w: &[Complex64], x: usize) -> Complex64 {
    let vals: Vec<Complex64> = fs.iter().map(|f| f.value(w)).collect();
    (0..fs.len())
        .map(|t| {
            let g = fs[t].grad(x);
            if g == Complex64::zero() {
                return g;
            }
            vals.iter().enumerate().filter(|&(s, _)| s != t).map(|(_, v)| v).product::<Complex64>() * g
        })
        .sum()
}

fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct NumericEquation {
    pub lhs_const: Complex64,
    pub lhs_num: Vec<Lin>,
    pub lhs_den: Vec<Lin>,
    pub rhs_const: Complex64,
    pub rhs_num: Vec<Lin>,
    pub rhs_den: Vec<Lin>,
}

impl NumericEquation {
    fn parts(&self, w: &[Complex64]) -> (Complex64, Complex64) {
        let a = self.lhs_const * prod(&self.lhs_num, w) * prod(&self.rhs_den, w);
        let b = self.rhs_const * prod(&self.rhs_num, w) * prod(&self.lhs_den, w);
        (a, b)
    }

    /// Cleared form `A - B`.
    pub fn value(&self, w: &[Complex64]) -> Complex64 {
        let (a, b) = self.parts(w);
        a - b
    }

    fn scale(&self, w: &[Complex64]) -> f64 {
        let (a, b) = self.parts(w);
        a.norm().max(b.norm()).max(1e-300)
    }

    fn grad(&self, w: &[Complex64], x: usize) -> Complex64 {
        let (ln, rd, rn, ld) = (prod(&self.lhs_num, w), prod(&self.rhs_den, w), prod(&self.rhs_num, w), prod(&self.lhs_den, w));
        self.lhs_const * (prod_grad(&self.lhs_num, w, x) * rd + ln * prod_grad(&self.rhs_den, w, x))
            - self.rhs_const * (prod_grad(&self.rhs_num, w, x) * ld + rn * prod_grad(&self.lhs_den, w, x))
    }

    /// `|LHS / RHS - 1|` in the original ratio form.
    pub fn ratio_residual(&self, w: &[Complex64]) -> f64 {
        let lhs = self.lhs_const * prod(&self.lhs_num, w) / prod(&self.lhs_den, w);
        let rhs = self.rhs_const * prod(&self.rhs_num, w) / prod(&self.rhs_den, w);
        (lhs / rhs - 1.0).norm()
    }

    fn degree(&self) -> usize {
        (self.lhs_num.len() + self.rhs_den.len()).max(self.rhs_num.len() + self.lhs_den.len())
    }

    fn poly_in(&self, y: usize, x: usize, xv: Complex64) -> Vec<Complex64> {
        let side = |c: Complex64, fs: &[&Vec<Lin>]| {
            fs.iter().flat_map(|v| v.iter()).fold(vec![c], |acc, f| poly_mul(&acc, &f.poly_in(y, x, xv)))
        };
        let a = side(self.lhs_const, &[&self.lhs_num, &self.rhs_den]);
        let b = side(self.rhs_const, &[&self.rhs_num, &self.lhs_den]);
        let n = a.len().max(b.len());
        (0..n)
            .map(|k| a.get(k).copied().unwrap_or_default() - b.get(k).copied().unwrap_or_default())
            .collect()
    }

    fn denominators(&self) -> impl Iterator<Item = &Lin> {
        self.lhs_den.iter().chain(self.rhs_den.iter()).chain(self.lhs_num.iter()).chain(self.rhs_num.iter())
    }
}

#[derive(Clone, Debug)]
pub struct NumericSystem {
    pub nvars: usize,
    /// Node of each variable.
    pub nodes: Vec<usize>,
    pub eqs: Vec<NumericEquation>,
}

impl NumericSystem {
    /// Largest ratio residual over all equations.
    pub fn residual(&self, w: &[Complex64]) -> f64 {
        self.eqs.iter().map(|e| e.ratio_residual(w)).fold(0.0, f64::max)
    }

    /// Reject points where a linear factor vanishes or two roots of the
    /// same node coincide, since the ratio form is undefined there.
    pub fn is_admissible(&self, w: &[Complex64], sep: f64) -> bool {
        let scale = w.iter().map(|x| x.norm()).fold(1.0, f64::max);
        if w.iter().any(|x| !x.re.is_finite() || !x.im.is_finite() || x.norm() < sep) {
            return false;
        }
        for a in 0..self.nvars {
            for b in a + 1..self.nvars {
                if self.nodes[a] == self.nodes[b] && (w[a] - w[b]).norm() <= sep * scale {
                    return false;
                }
            }
        }
        self.eqs.iter().all(|e| e.denominators().all(|f| f.value(w).norm() > sep * scale))
    }

    fn single_roots(&self) -> Result<Vec<Complex64>, BetheError> {
        poly_roots(&self.eqs[0].poly_in(0, usize::MAX, Complex64::zero()))
    }

    fn norm(&self, w: &[Complex64]) -> f64 {
        self.eqs.iter().map(|e| e.value(w).norm_sqr()).sum::<f64>().sqrt()
    }

    fn newton_step(&self, w: &[Complex64]) -> Option<Vec<Complex64>> {
        let n = self.nvars;
        let jac = DMatrix::from_fn(n, n, |r, c| self.eqs[r].grad(w, c));
        let rhs = DMatrix::from_fn(n, 1, |r, _| -self.eqs[r].value(w));
        let dx = jac.lu().solve(&rhs)?;
        Some((0..n).map(|k| dx[(k, 0)]).collect())
    }

    /// Damped Newton from a single start; returns the converged point.
    pub fn newton(&self, start: Vec<Complex64>, cfg: &NewtonConfig) -> Option<Vec<Complex64>> {
        let mut w = start;
        let mut f = self.norm(&w);
        for _ in 0..cfg.max_iter {
            if self.residual(&w) < cfg.tol {
                return Some(w);
            }
            let dx = self.newton_step(&w)?;
            let mut t = 1.0;
            loop {
                let trial: Vec<Complex64> = w.iter().zip(&dx).map(|(a, d)| a + d * t).collect();
                let ft = self.norm(&trial);
                if ft.is_finite() && ft < f {
                    w = trial;
                    f = ft;
                    break;
                }
                t *= 0.5;
                if t < 1e-10 {
                    return None;
                }
            }
        }
        (self.residual(&w) < cfg.tol).then_some(w)
    }

    fn newton_multistart(&self, cfg: &NewtonConfig) -> Vec<Vec<Complex64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut found: Vec<Vec<Complex64>> = Vec::new();
        for _ in 0..cfg.starts {
            let start: Vec<Complex64> = (0..self.nvars)
                .map(|_| {
                    let r = 10f64.powf(rng.gen_range(-1.0..1.0));
                    Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
                })
                .collect();
            if let Some(w) = self.newton(start, cfg) {
                if self.is_admissible(&w, cfg.separation) {
                    found.push(w);
                }
            }
        }
        found
    }
}

/// Settings for the multistart Newton solver.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NewtonConfig {
    pub seed: u64,
    pub starts: usize,
    pub max_iter: usize,
    /// Convergence threshold on the ratio residual.
    pub tol: f64,
    /// Acceptance threshold on the final ratio residual.
    pub accept: f64,
    /// Distance below which roots, factors, or solutions count as equal.
    pub separation: f64,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        NewtonConfig { seed: 7, starts: 200, max_iter: 100, tol: 1e-12, accept: 1e-9, separation: 1e-6 }
    }
}

/// A numeric solution with roots grouped per node.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BetheSolution {
    pub roots: Vec<Vec<Complex64>>,
    pub residual: f64,
}

impl BetheSolution {
    pub fn same_as(&self, o: &BetheSolution, tol: f64) -> bool {
        self.roots.len() == o.roots.len()
            && self.roots.iter().zip(&o.roots).all(|(a, b)| {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol * x.norm().max(1.0))
            })
    }
}

/// Roots of `c_0 + c_1 x + ...` from the eigenvalues of the companion matrix.
pub fn poly_roots(c: &[Complex64]) -> Result<Vec<Complex64>, BetheError> {
    let big = c.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let mut c = c.to_vec();
    while c.len() > 1 && c.last().is_some_and(|x| x.norm() <= 1e-12 * big) {
        c.pop();
    }
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = c[n];
    let comp = DMatrix::from_fn(n, n, |r, col| {
        if col == n - 1 {
            -c[r] / lead
        } else if r == col + 1 {
            Complex64::one()
        } else {
            Complex64::zero()
        }
    });
    let ev = comp.schur().eigenvalues().ok_or(BetheError::Eigen)?;
    Ok(ev.iter().copied().collect())
}

fn sylvester_det(p: &[Complex64], r: &[Complex64]) -> Complex64 {
    let trim = |a: &[Complex64]| {
        let mut a = a.to_vec();
        while a.len() > 1 && a.last() == Some(&Complex64::zero()) {
            a.pop();
        }
        a
    };
    let (p, r) = (trim(p), trim(r));
    let (m, n) = (p.len() - 1, r.len() - 1);
    if m + n == 0 {
        return Complex64::one();
    }
    let size = m + n;
    let mat = DMatrix::from_fn(size, size, |row, col| {
        if row < n {
            // shifted copies of p, highest degree first
            col.checked_sub(row).and_then(|k| (k <= m).then(|| p[m - k])).unwrap_or_default()
        } else {
            let row = row - n;
            col.checked_sub(row).and_then(|k| (k <= n).then(|| r[n - k])).unwrap_or_default()
        }
    });
    mat.determinant()
}

fn sort_ratios(rs: &mut [Ratio]) {
    rs.sort_by_cached_key(|r| (r.other, r.num.to_string(), r.den.to_string()));
}

fn sort_complex(v: &mut [Complex64]) {
    v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap_or(std::cmp::Ordering::Equal).then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal)));
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> QRat {
        QRat::q()
    }

    #[test]
    fn sl2_example_equation_latex() {
        let s = BetheSystem::sl2_kr(&[(1, None)], 1).unwrap();
        let eqs = s.equations();
        assert_eq!(eqs.len(), 1);
        assert_eq!(s.equation_latex(&eqs[0]), "v q \\frac{w_{1} - q^{-2}}{w_{1} - 1} = 1");
    }

    #[test]
    fn closed_single_root() {
        let s = BetheSystem::sl2_kr(&[(1, None)], 1).unwrap();
        let w = s.solve_closed_single().unwrap();
        // (1 - v q^{-1}) / (1 - v q)
        let expect = RatFn::new(
            UPoly::linear(QRat::one(), q().inv().unwrap().neg()),
            UPoly::linear(QRat::one(), q().neg()),
        )
        .unwrap();
        assert_eq!(w, expect);
        let at = w.eval(&(&q() * &q())).unwrap();
        let one_q_q2 = &(&QRat::one() + &q()) + &(&q() * &q());
        assert_eq!(at, one_q_q2.inv().unwrap());
        assert!(w.eval(&QRat::zero()).unwrap().is_one());
    }

    #[test]
    fn longer_kr_single_root_telescopes() {
        let s = BetheSystem::sl2_kr(&[(3, None)], 1).unwrap();
        let w = s.solve_closed_single().unwrap();
        assert!(w.eval(&QRat::zero()).is_ok());
    }

    #[test]
    fn numeric_single_matches_closed() {
        let s = BetheSystem::sl2_kr(&[(2, None)], 1).unwrap();
        let w = s.solve_closed_single().unwrap();
        let pt = EvalPoint::random(3);
        let v0 = Complex64::new(0.3, 0.2);
        let sols = s.solve_numeric(&pt, &[v0], &NewtonConfig::default()).unwrap();
        assert_eq!(sols.len(), 1);
        let exact = crate::scalars::eval_ratfn(&w, &pt, v0).unwrap();
        assert!((sols[0].roots[0][0] - exact).norm() < 1e-9);
    }

    #[test]
    fn permutation_symmetry() {
        let s = BetheSystem::sl2_kr(&[(2, None), (1, Some(1))], 3).unwrap();
        let base = s.permuted_equations(1, &[0, 1, 2]);
        for perm in [[1, 0, 2], [2, 0, 1], [0, 2, 1]] {
            assert_eq!(s.permuted_equations(1, &perm), base);
        }
        let cd = CartanDatum::from_label("A2").unwrap();
        let f = TargetModuleData::new(Monomial::y(1, SpectralPoint::q_pow(0))).unwrap();
        let s = BetheSystem::new(&cd, vec![f], vec![2, 1]).unwrap();
        assert_eq!(s.permuted_equations(1, &[1, 0]), s.permuted_equations(1, &[0, 1]));
    }

    #[test]
    fn two_roots_newton_matches_resultant() {
        let s = BetheSystem::sl2_kr(&[(2, None)], 2).unwrap();
        let pt = EvalPoint::random(11);
        let v0 = Complex64::new(0.4, -0.1);
        let newton = s.solve_numeric(&pt, &[v0], &NewtonConfig::default()).unwrap();
        let oracle = s.resultant_oracle(&pt, &[v0], 1e-6).unwrap();
        assert_eq!(newton.len(), 1);
        assert_eq!(oracle.len(), 1);
        for sol in &newton {
            assert!(sol.residual < 1e-9);
            assert!(oracle.iter().any(|o| o.same_as(sol, 1e-6)), "{:?} not in {:?}", sol, oracle);
        }
    }

    #[test]
    fn rank_two_equations_shape() {
        let cd = CartanDatum::from_label("A2").unwrap();
        let f = TargetModuleData::new(Monomial::y(1, SpectralPoint::q_pow(0))).unwrap();
        let s = BetheSystem::new(&cd, vec![f], vec![1, 1]).unwrap();
        let eqs = s.equations();
        assert_eq!(eqs[0].lhs.len(), 1);
        assert_eq!(eqs[0].rhs_qexp, -1);
        assert_eq!(eqs[1].lhs.len(), 0);
        let pt = EvalPoint::random(5);
        let sols = s.solve_numeric(&pt, &[Complex64::new(0.5, 0.1), Complex64::new(-0.2, 0.3)], &NewtonConfig::default()).unwrap();
        assert!(!sols.is_empty());
        assert!(sols.iter().all(|x| x.residual < 1e-9));
    }
}
