//! Finite-type Cartan data in Kac's numbering, the quantum Cartan matrices
//! `C(q)`, `B(q) = D(q) C(q)` and their exact inverses, and integer weights
//! in the fundamental-weight basis.
//!
//! Nodes are numbered `1..=n` in every public function.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::Mat;
use crate::scalars::{Field, QRat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CartanError {
    #[error("invalid finite type {0}")]
    InvalidType(String),
    #[error("node {node} out of range 1..={rank}")]
    BadNode { node: usize, rank: usize },
    #[error("weight difference {0:?} is not a nonnegative integer combination of simple roots")]
    NotInRootCone(Vec<Rational64>),
    #[error("weight vectors of different rank")]
    RankMismatch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CartanType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}

/// Parse labels like `A2`, `b2`, `E6`.
pub fn parse_type_label(s: &str) -> Result<(CartanType, usize), CartanError> {
    let bad = || CartanError::InvalidType(s.to_string());
    let s = s.trim();
    let mut chars = s.chars();
    let t = match chars.next().map(|c| c.to_ascii_uppercase()) {
        Some('A') => CartanType::A,
        Some('B') => CartanType::B,
        Some('C') => CartanType::C,
        Some('D') => CartanType::D,
        Some('E') => CartanType::E,
        Some('F') => CartanType::F,
        Some('G') => CartanType::G,
        _ => return Err(bad()),
    };
    let n = usize::from_str(chars.as_str()).map_err(|_| bad())?;
    Ok((t, n))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanDatum {
    kind: CartanType,
    rank: usize,
    c: Vec<Vec<i64>>,
    d: Vec<i64>,
    kac_labels: Vec<i64>,
    dual_coxeter: i64,
    lacing: i64,
    dual_node: Vec<usize>,
}

/// Build the Cartan datum of a finite type. `C_ij = <alpha_i^vee, alpha_j>`.
pub fn build_cartan(kind: CartanType, rank: usize) -> Result<CartanDatum, CartanError> {
    use CartanType::*;
    let n = rank;
    let invalid = || CartanError::InvalidType(format!("{}{}", kind, rank));
    let valid = match kind {
        A => n >= 1,
        B | C => n >= 2,
        D => n >= 4,
        E => (6..=8).contains(&n),
        F => n == 4,
        G => n == 2,
    };
    if !valid {
        return Err(invalid());
    }
    // edges as 1-based pairs and symmetrizers
    let chain = |k: usize| -> Vec<(usize, usize)> { (1..k).map(|i| (i, i + 1)).collect() };
    let (edges, d): (Vec<(usize, usize)>, Vec<i64>) = match kind {
        A => (chain(n), vec![1; n]),
        B => (chain(n), (1..=n).map(|i| if i < n { 2 } else { 1 }).collect()),
        C => (chain(n), (1..=n).map(|i| if i < n { 1 } else { 2 }).collect()),
        D => {
            let mut e = chain(n - 1);
            e.push((n - 2, n));
            (e, vec![1; n])
        }
        E => {
            let mut e = match n {
                6 => chain(5),
                7 => chain(6),
                _ => chain(7),
            };
            e.push(match n {
                6 => (3, 6),
                7 => (3, 7),
                _ => (5, 8),
            });
            (e, vec![1; n])
        }
        F => (chain(4), vec![2, 2, 1, 1]),
        G => (chain(2), vec![3, 1]),
    };
    let mut c = vec![vec![0i64; n]; n];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    for &(a, b) in &edges {
        let (i, j) = (a - 1, b - 1);
        c[i][j] = -(d[j] / d[i]).max(1);
        c[j][i] = -(d[i] / d[j]).max(1);
    }
    let kac_labels: Vec<i64> = match (kind, n) {
        (A, _) => vec![1; n],
        (B, _) => (1..=n).map(|i| if i == 1 { 1 } else { 2 }).collect(),
        (C, _) => (1..=n).map(|i| if i < n { 2 } else { 1 }).collect(),
        (D, _) => (1..=n).map(|i| if i == 1 || i >= n - 1 { 1 } else { 2 }).collect(),
        (E, 6) => vec![1, 2, 3, 2, 1, 2],
        (E, 7) => vec![2, 3, 4, 3, 2, 1, 2],
        (E, _) => vec![2, 3, 4, 5, 6, 4, 2, 3],
        (F, _) => vec![2, 3, 4, 2],
        (G, _) => vec![2, 3],
    };
    let dual_coxeter = match (kind, n) {
        (A, _) => n as i64 + 1,
        (B, _) => 2 * n as i64 - 1,
        (C, _) => n as i64 + 1,
        (D, _) => 2 * n as i64 - 2,
        (E, 6) => 12,
        (E, 7) => 18,
        (E, _) => 30,
        (F, _) => 9,
        (G, _) => 4,
    };
    let lacing = *d.iter().max().unwrap();
    let dual_node: Vec<usize> = match (kind, n) {
        (A, _) => (1..=n).map(|i| n + 1 - i).collect(),
        (D, _) if n % 2 == 1 => (1..=n).map(|i| if i == n - 1 { n } else if i == n { n - 1 } else { i }).collect(),
        (E, 6) => vec![5, 4, 3, 2, 1, 6],
        _ => (1..=n).collect(),
    };
    let cd = CartanDatum { kind, rank: n, c, d, kac_labels, dual_coxeter, lacing, dual_node };
    debug_assert!(cd.check_invariants());
    Ok(cd)
}

impl CartanDatum {
    pub fn from_label(label: &str) -> Result<Self, CartanError> {
        let (t, n) = parse_type_label(label)?;
        build_cartan(t, n)
    }

    pub fn kind(&self) -> CartanType {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn label(&self) -> String {
        format!("{}{}", self.kind, self.rank)
    }

    pub fn nodes(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.rank
    }

    pub fn check_node(&self, i: usize) -> Result<(), CartanError> {
        if i == 0 || i > self.rank {
            Err(CartanError::BadNode { node: i, rank: self.rank })
        } else {
            Ok(())
        }
    }

    /// `C_ij` for 1-based nodes.
    pub fn c(&self, i: usize, j: usize) -> i64 {
        self.c[i - 1][j - 1]
    }

    /// Symmetrizer `d_i`; `q_i = q^{d_i}`.
    pub fn d(&self, i: usize) -> i64 {
        self.d[i - 1]
    }

    pub fn symmetrizers(&self) -> &[i64] {
        &self.d
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.c
    }

    /// `B = DC`.
    pub fn b(&self, i: usize, j: usize) -> i64 {
        self.d(i) * self.c(i, j)
    }

    pub fn kac_labels(&self) -> &[i64] {
        &self.kac_labels
    }

    pub fn dual_coxeter(&self) -> i64 {
        self.dual_coxeter
    }

    /// Lacing number `r^vee = max d_i`.
    pub fn lacing(&self) -> i64 {
        self.lacing
    }

    /// The involution `i -> i-bar` induced by `-w_0`.
    pub fn dual_node(&self, i: usize) -> usize {
        self.dual_node[i - 1]
    }

    /// `q_i` as an exact scalar.
    pub fn q_i(&self, i: usize) -> QRat {
        QRat::q_pow_int(self.d(i))
    }

    pub fn check_invariants(&self) -> bool {
        let n = self.rank;
        let diag = (1..=n).all(|i| self.c(i, i) == 2);
        let off = (1..=n).all(|i| (1..=n).all(|j| i == j || self.c(i, j) <= 0));
        let sym = (1..=n).all(|i| (1..=n).all(|j| self.b(i, j) == self.b(j, i)));
        let coprime = self.d.iter().fold(0i64, |g, x| g.gcd(x)) == 1;
        let inv = self.c_inverse().is_ok();
        diag && off && sym && coprime && inv
    }

    fn c_rational(&self) -> Mat<Rational64> {
        Mat::from_fn(self.rank, self.rank, |i, j| Rational64::from_integer(self.c[i][j]))
    }

    /// `C^{-1}` over the rationals (0-based indexing in the returned matrix).
    pub fn c_inverse(&self) -> Result<Mat<Rational64>, crate::scalars::ScalarError> {
        self.c_rational().inverse()
    }

    /// `(C^{-1})_{ij}` for 1-based nodes.
    pub fn c_inv(&self, i: usize, j: usize) -> Rational64 {
        *self.c_inverse().expect("finite-type Cartan matrix is invertible").get(i - 1, j - 1)
    }

    /// `alpha_i` in the fundamental-weight basis: column `i` of `C`.
    pub fn simple_root(&self, i: usize) -> WeightVector {
        WeightVector((1..=self.rank).map(|j| self.c(j, i)).collect())
    }

    pub fn fundamental_weight(&self, i: usize) -> WeightVector {
        WeightVector((1..=self.rank).map(|j| i64::from(j == i)).collect())
    }
}

// ---------------------------------------------------------------------------

/// Quantum Cartan matrices and their inverses. Entries use 0-based indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantumCartan {
    pub cq: Mat<QRat>,
    pub bq: Mat<QRat>,
    pub cq_inv: Mat<QRat>,
    pub bq_inv: Mat<QRat>,
}

/// `C(q)_ij = [C_ij]_q` off the diagonal and `[2]_{q_i}` on it;
/// `B(q)_ij = [d_i]_q C(q)_ij`.
pub fn quantum_cartan(cd: &CartanDatum) -> QuantumCartan {
    let n = cd.rank();
    let cq = Mat::from_fn(n, n, |i, j| {
        if i == j {
            QRat::qint_base(2, cd.d(i + 1))
        } else {
            QRat::qint(cd.c(i + 1, j + 1))
        }
    });
    let dq = Mat::from_fn(n, n, |i, j| if i == j { QRat::qint(cd.d(i + 1)) } else { QRat::zero() });
    let bq = dq.mul(&cq);
    let cq_inv = cq.inverse().expect("C(q) is invertible for formal q");
    let bq_inv = bq.inverse().expect("B(q) is invertible for formal q");
    QuantumCartan { cq, bq, cq_inv, bq_inv }
}

impl QuantumCartan {
    /// `tilde C_{ij}(q^r)` for 1-based nodes.
    pub fn c_tilde_at_power(&self, i: usize, j: usize, r: i64) -> QRat {
        self.cq_inv.get(i - 1, j - 1).subs_q_pow(Rational64::from_integer(r))
    }

    pub fn c_tilde(&self, i: usize, j: usize) -> &QRat {
        self.cq_inv.get(i - 1, j - 1)
    }
}

// ---------------------------------------------------------------------------

/// Integer weight in the basis of fundamental weights.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeightVector(pub Vec<i64>);

impl WeightVector {
    pub fn zero(rank: usize) -> Self {
        WeightVector(vec![0; rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    /// Coordinate `lambda(alpha_i^vee)` for 1-based `i`.
    pub fn coord(&self, i: usize) -> i64 {
        self.0[i - 1]
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.rank(), o.rank());
        WeightVector(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!(self.rank(), o.rank());
        WeightVector(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> Self {
        WeightVector(self.0.iter().map(|a| a * k).collect())
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// LaTeX such as `\omega_2 - \omega_1`, positive coefficients first.
    pub fn to_latex(&self) -> String {
        let mut pos: Vec<String> = Vec::new();
        let mut neg: Vec<String> = Vec::new();
        for (k, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let body = if c.abs() == 1 { format!("\\omega_{}", k + 1) } else { format!("{}\\omega_{}", c.abs(), k + 1) };
            if c > 0 {
                pos.push(body);
            } else {
                neg.push(body);
            }
        }
        if pos.is_empty() && neg.is_empty() {
            return "0".into();
        }
        let mut out = pos.join(" + ");
        for n in neg {
            if out.is_empty() {
                out = format!("-{}", n);
            } else {
                out = format!("{} - {}", out, n);
            }
        }
        out
    }
}

/// `ht_i(omega - lambda)`: the unique integers with
/// `omega - lambda = sum_i ht_i alpha_i`, required to be nonnegative.
pub fn ht_decompose(cd: &CartanDatum, omega: &WeightVector, lambda: &WeightVector) -> Result<Vec<i64>, CartanError> {
    if omega.rank() != cd.rank() || lambda.rank() != cd.rank() {
        return Err(CartanError::RankMismatch);
    }
    let diff = omega.sub(lambda);
    let cinv = cd.c_inverse().expect("invertible");
    let n = cd.rank();
    let h: Vec<Rational64> = (0..n)
        .map(|i| (0..n).fold(Rational64::zero(), |acc, j| acc.add(&cinv.get(i, j).mul(&Rational64::from_integer(diff.0[j])))))
        .collect();
    if h.iter().all(|x| x.is_integer() && *x.numer() >= 0) {
        Ok(h.iter().map(|x| x.to_integer()).collect())
    } else {
        Err(CartanError::NotInRootCone(h))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_types() -> Vec<CartanDatum> {
        use CartanType::*;
        let mut v = Vec::new();
        for n in 1..=5 {
            v.push(build_cartan(A, n).unwrap());
        }
        for n in 2..=4 {
            v.push(build_cartan(B, n).unwrap());
            v.push(build_cartan(C, n).unwrap());
        }
        for n in 4..=5 {
            v.push(build_cartan(D, n).unwrap());
        }
        for n in 6..=8 {
            v.push(build_cartan(E, n).unwrap());
        }
        v.push(build_cartan(F, 4).unwrap());
        v.push(build_cartan(G, 2).unwrap());
        v
    }

    #[test]
    fn small_types() {
        let a1 = build_cartan(CartanType::A, 1).unwrap();
        assert_eq!(a1.matrix(), &[vec![2]]);
        let a2 = build_cartan(CartanType::A, 2).unwrap();
        assert_eq!(a2.matrix(), &[vec![2, -1], vec![-1, 2]]);
        let b2 = build_cartan(CartanType::B, 2).unwrap();
        assert_eq!(b2.matrix(), &[vec![2, -1], vec![-2, 2]]);
        assert_eq!(b2.symmetrizers(), &[2, 1]);
    }

    #[test]
    fn invalid_types_rejected() {
        assert!(build_cartan(CartanType::E, 5).is_err());
        assert!(build_cartan(CartanType::D, 3).is_err());
        assert!(build_cartan(CartanType::G, 3).is_err());
        assert!(CartanDatum::from_label("Q3").is_err());
    }

    #[test]
    fn invariants_hold_everywhere() {
        for cd in all_types() {
            assert!(cd.check_invariants(), "{}", cd.label());
        }
    }

    #[test]
    fn quantum_inverse_identity_and_symmetry() {
        for cd in all_types().into_iter().filter(|c| c.rank() <= 6) {
            let qc = quantum_cartan(&cd);
            assert!(qc.cq.mul(&qc.cq_inv).is_identity(), "{}", cd.label());
            assert_eq!(qc.bq, qc.bq.transpose(), "{}", cd.label());
            for i in cd.nodes() {
                for j in cd.nodes() {
                    let lhs = qc.bq_inv.get(i - 1, j - 1) * &QRat::qint(cd.d(i));
                    assert_eq!(&lhs, qc.cq_inv.get(j - 1, i - 1));
                    let at1 = qc.cq.get(i - 1, j - 1).at_q_one().unwrap();
                    assert_eq!(at1, (cd.c(i, j).into(), 1.into()));
                }
            }
        }
    }

    #[test]
    fn a1_and_a2_inverses() {
        let qc = quantum_cartan(&build_cartan(CartanType::A, 1).unwrap());
        assert_eq!(qc.cq_inv.get(0, 0), &QRat::qint(2).inv().unwrap());
        let qc = quantum_cartan(&build_cartan(CartanType::A, 2).unwrap());
        let two = QRat::qint(2);
        let expect = &two / &(&(&two * &two) - &QRat::one());
        assert_eq!(qc.cq_inv.get(0, 0), &expect);
    }

    #[test]
    fn heights() {
        let a1 = build_cartan(CartanType::A, 1).unwrap();
        assert_eq!(ht_decompose(&a1, &WeightVector(vec![1]), &WeightVector(vec![-1])).unwrap(), vec![1]);
        assert_eq!(ht_decompose(&a1, &WeightVector(vec![1]), &WeightVector(vec![1])).unwrap(), vec![0]);
        let a2 = build_cartan(CartanType::A, 2).unwrap();
        let s = a2.simple_root(1).add(&a2.simple_root(2));
        assert_eq!(ht_decompose(&a2, &s, &WeightVector::zero(2)).unwrap(), vec![1, 1]);
        assert!(ht_decompose(&a2, &WeightVector(vec![1, 0]), &WeightVector::zero(2)).is_err());
    }
}
