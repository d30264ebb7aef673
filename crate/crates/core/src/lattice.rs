//! The numerical lattice `Num(S) = U ⊕ E8(-1)` of an Enriques surface and the
//! Picard group `Pic(S) = Num(S) ⊕ Z/2·K_S`.
//!
//! Basis order is fixed: coordinates 1-2 span the hyperbolic plane `U` with
//! Gram `[[0,1],[1,0]]` (we call these classes `f` and `g`), coordinates 3-10
//! are the simple roots of `E8` in Bourbaki numbering with the form negated.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::shortvec::{enumerate_short, PosDefForm};

/// Rank of the Enriques lattice.
pub const RANK: usize = 10;

/// Cartan matrix of `E8`, Bourbaki node order (chain 1-3-4-5-6-7-8, node 2 on node 4).
pub const E8_CARTAN: [[i64; 8]; 8] = [
    [2, 0, -1, 0, 0, 0, 0, 0],
    [0, 2, 0, -1, 0, 0, 0, 0],
    [-1, 0, 2, -1, 0, 0, 0, 0],
    [0, -1, -1, 2, -1, 0, 0, 0],
    [0, 0, 0, -1, 2, -1, 0, 0],
    [0, 0, 0, 0, -1, 2, -1, 0],
    [0, 0, 0, 0, 0, -1, 2, -1],
    [0, 0, 0, 0, 0, 0, -1, 2],
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("gram matrix is not square")]
    NotSquare,
    #[error("gram matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("gram matrix has odd diagonal entry at {0}")]
    NotEven(usize),
    #[error("the zero class has no content")]
    ZeroClass,
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),
    #[error("configuration not realized within the search bounds a <= {bound}, w² <= {EMBED_MAX_NORM}")]
    NotRealizable { bound: i64 },
}

/// An integral symmetric bilinear form on `Z^rank`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionForm {
    rank: usize,
    gram: Vec<i64>,
}

impl IntersectionForm {
    /// Builds a form from its Gram rows. Rejects non-symmetric and odd forms.
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self, LatticeError> {
        let rank = rows.len();
        if rank == 0 || rows.iter().any(|r| r.len() != rank) {
            return Err(LatticeError::NotSquare);
        }
        for i in 0..rank {
            if rows[i][i] % 2 != 0 {
                return Err(LatticeError::NotEven(i));
            }
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(LatticeError::NotSymmetric(i, j));
                }
            }
        }
        Ok(IntersectionForm {
            rank,
            gram: rows.into_iter().flatten().collect(),
        })
    }

    /// The fixed form `U ⊕ E8(-1)`.
    pub fn canonical() -> &'static IntersectionForm {
        static CANONICAL: OnceLock<IntersectionForm> = OnceLock::new();
        CANONICAL.get_or_init(|| {
            let mut rows = vec![vec![0i64; RANK]; RANK];
            rows[0][1] = 1;
            rows[1][0] = 1;
            for i in 0..8 {
                for j in 0..8 {
                    rows[i + 2][j + 2] = -E8_CARTAN[i][j];
                }
            }
            IntersectionForm::new(rows).expect("canonical form is valid")
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.gram[i * self.rank + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.gram.chunks(self.rank).map(|r| r.to_vec()).collect()
    }

    pub fn is_canonical(&self) -> bool {
        self == IntersectionForm::canonical()
    }

    /// `xᵀ·gram·y`.
    pub fn pair(&self, x: &NumClass, y: &NumClass) -> Result<i64, LatticeError> {
        if x.rank() != self.rank {
            return Err(LatticeError::RankMismatch { left: self.rank, right: x.rank() });
        }
        if y.rank() != self.rank {
            return Err(LatticeError::RankMismatch { left: self.rank, right: y.rank() });
        }
        Ok(self.pair_coords(&x.coords, &y.coords))
    }

    pub(crate) fn pair_coords(&self, x: &[i64], y: &[i64]) -> i64 {
        let n = self.rank;
        let mut acc = 0i64;
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            let row = &self.gram[i * n..(i + 1) * n];
            let s: i64 = row.iter().zip(y).map(|(g, v)| g * v).sum();
            acc += x[i] * s;
        }
        acc
    }

    /// Exact determinant (fraction-free elimination).
    pub fn determinant(&self) -> BigInt {
        let n = self.rank;
        let mut a: Vec<Vec<BigInt>> = self
            .rows()
            .into_iter()
            .map(|r| r.into_iter().map(BigInt::from).collect())
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    /// Congruence diagonalization over the rationals: returns `P` and `D` with
    /// `Pᵀ·G·P = diag(D)`.
    pub fn diagonalize(&self) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
        let n = self.rank;
        let mut a: Vec<Vec<BigRational>> = self
            .rows()
            .into_iter()
            .map(|r| r.into_iter().map(|v| BigRational::from_integer(v.into())).collect())
            .collect();
        // columns of p are the new basis vectors
        let mut p: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                    .collect()
            })
            .collect();
        let mut diag = Vec::with_capacity(n);
        for k in 0..n {
            if a[k][k].is_zero() {
                if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                    a.swap(k, j);
                    for row in a.iter_mut() {
                        row.swap(k, j);
                    }
                    for row in p.iter_mut() {
                        row.swap(k, j);
                    }
                } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                    // basis vector k <- k + j
                    for c in 0..n {
                        let v = a[j][c].clone();
                        a[k][c] += v;
                    }
                    for r in 0..n {
                        let v = a[r][j].clone();
                        a[r][k] += v;
                    }
                    for row in p.iter_mut() {
                        let v = row[j].clone();
                        row[k] += v;
                    }
                }
            }
            let pivot = a[k][k].clone();
            if !pivot.is_zero() {
                for i in k + 1..n {
                    let factor = &a[i][k] / &pivot;
                    if factor.is_zero() {
                        continue;
                    }
                    for c in 0..n {
                        let v = &factor * &a[k][c];
                        a[i][c] -= v;
                    }
                    for r in 0..n {
                        let v = &factor * &a[r][k];
                        a[r][i] -= v;
                    }
                    for row in p.iter_mut() {
                        let v = &factor * &row[k];
                        row[i] -= v;
                    }
                }
            }
            diag.push(pivot);
        }
        (p, diag)
    }

    /// `(positive, negative)` counts of the diagonalized form.
    pub fn signature(&self) -> (usize, usize) {
        let (_, d) = self.diagonalize();
        let pos = d.iter().filter(|v| v.is_positive()).count();
        let neg = d.iter().filter(|v| v.is_negative()).count();
        (pos, neg)
    }
}

/// A numerical class: integer coordinates in the fixed basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NumClass {
    coords: Vec<i64>,
}

impl NumClass {
    pub fn new(coords: Vec<i64>) -> Self {
        NumClass { coords }
    }

    pub fn zero(rank: usize) -> Self {
        NumClass { coords: vec![0; rank] }
    }

    pub fn basis(rank: usize, i: usize) -> Self {
        let mut coords = vec![0; rank];
        coords[i] = 1;
        NumClass { coords }
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// gcd of the coordinates and the primitive part.
    pub fn content(&self) -> Result<(i64, NumClass), LatticeError> {
        let c = self.coords.iter().fold(0i64, |acc, &v| acc.gcd(&v));
        if c == 0 {
            return Err(LatticeError::ZeroClass);
        }
        Ok((c, NumClass { coords: self.coords.iter().map(|v| v / c).collect() }))
    }

    pub fn is_primitive(&self) -> bool {
        matches!(self.content(), Ok((1, _)))
    }

    /// Exact division by `k`, if every coordinate is divisible.
    pub fn div_exact(&self, k: i64) -> Option<NumClass> {
        if k == 0 || self.coords.iter().any(|v| v % k != 0) {
            return None;
        }
        Some(NumClass { coords: self.coords.iter().map(|v| v / k).collect() })
    }

    fn zip_with(&self, other: &NumClass, f: impl Fn(i64, i64) -> i64) -> NumClass {
        assert_eq!(self.rank(), other.rank(), "rank mismatch in class arithmetic");
        NumClass {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| f(*a, *b)).collect(),
        }
    }
}

impl Add for &NumClass {
    type Output = NumClass;
    fn add(self, rhs: &NumClass) -> NumClass {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &NumClass {
    type Output = NumClass;
    fn sub(self, rhs: &NumClass) -> NumClass {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &NumClass {
    type Output = NumClass;
    fn neg(self) -> NumClass {
        NumClass { coords: self.coords.iter().map(|v| -v).collect() }
    }
}

impl Mul<&NumClass> for i64 {
    type Output = NumClass;
    fn mul(self, rhs: &NumClass) -> NumClass {
        NumClass { coords: rhs.coords.iter().map(|v| self * v).collect() }
    }
}

/// A class in `Pic(S) = Num(S) ⊕ Z/2·K_S` on the canonical lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClass {
    num: NumClass,
    torsion: bool,
}

impl DivisorClass {
    pub fn new(num: NumClass, torsion: bool) -> Result<Self, LatticeError> {
        if num.rank() != RANK {
            return Err(LatticeError::RankMismatch { left: RANK, right: num.rank() });
        }
        Ok(DivisorClass { num, torsion })
    }

    /// Torsion-free class from coordinates.
    pub fn from_coords(coords: [i64; RANK]) -> Self {
        DivisorClass { num: NumClass::new(coords.to_vec()), torsion: false }
    }

    pub(crate) fn from_num(num: NumClass) -> Self {
        debug_assert_eq!(num.rank(), RANK);
        DivisorClass { num, torsion: false }
    }

    pub fn zero() -> Self {
        DivisorClass { num: NumClass::zero(RANK), torsion: false }
    }

    /// The canonical class `K_S`: numerically trivial, torsion bit set.
    pub fn canonical_class() -> Self {
        DivisorClass { num: NumClass::zero(RANK), torsion: true }
    }

    pub fn num(&self) -> &NumClass {
        &self.num
    }

    pub fn torsion(&self) -> bool {
        self.torsion
    }

    pub fn coords(&self) -> &[i64] {
        self.num.coords()
    }

    /// `D + K_S`.
    pub fn plus_canonical(&self) -> Self {
        DivisorClass { num: self.num.clone(), torsion: !self.torsion }
    }

    pub fn with_torsion(&self, torsion: bool) -> Self {
        DivisorClass { num: self.num.clone(), torsion }
    }

    pub fn dot(&self, other: &DivisorClass) -> i64 {
        IntersectionForm::canonical().pair_coords(self.num.coords(), other.num.coords())
    }

    pub fn square(&self) -> i64 {
        self.dot(self)
    }

    pub fn is_numerically_trivial(&self) -> bool {
        self.num.is_zero()
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        DivisorClass { num: &self.num + &rhs.num, torsion: self.torsion ^ rhs.torsion }
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        DivisorClass { num: &self.num - &rhs.num, torsion: self.torsion ^ rhs.torsion }
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass { num: -&self.num, torsion: self.torsion }
    }
}

impl Mul<&DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, rhs: &DivisorClass) -> DivisorClass {
        DivisorClass { num: self * &rhs.num, torsion: rhs.torsion && self % 2 != 0 }
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.num.coords())?;
        if self.torsion {
            write!(f, "+K_S")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConfigLabel {
    #[serde(rename = "config-i")]
    ConfigI,
    #[serde(rename = "config-ii")]
    ConfigII,
    #[serde(rename = "config-iii")]
    ConfigIII,
    #[serde(rename = "custom")]
    Custom,
}

impl ConfigLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            ConfigLabel::ConfigI => "config-i",
            ConfigLabel::ConfigII => "config-ii",
            ConfigLabel::ConfigIII => "config-iii",
            ConfigLabel::Custom => "custom",
        }
    }
}

/// Intersection pattern of `n` isotropic classes `E1..En`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigurationPresentation {
    n: usize,
    gram: Vec<Vec<i64>>,
    label: ConfigLabel,
}

impl ConfigurationPresentation {
    fn pattern(n: usize, twos: &[(usize, usize)], label: ConfigLabel) -> Self {
        let mut gram = vec![vec![1i64; n]; n];
        for (i, row) in gram.iter_mut().enumerate() {
            row[i] = 0;
        }
        for &(i, j) in twos {
            gram[i][j] = 2;
            gram[j][i] = 2;
        }
        ConfigurationPresentation { n, gram, label }
    }

    /// All `Ei·Ej = 1`.
    pub fn config_i(n: usize) -> Result<Self, LatticeError> {
        check_n(n, 1)?;
        Ok(Self::pattern(n, &[], ConfigLabel::ConfigI))
    }

    /// `E1·E2 = 2`, all other pairs 1.
    pub fn config_ii(n: usize) -> Result<Self, LatticeError> {
        check_n(n, 2)?;
        Ok(Self::pattern(n, &[(0, 1)], ConfigLabel::ConfigII))
    }

    /// `E1·E2 = E1·E3 = 2`, all other pairs 1.
    pub fn config_iii(n: usize) -> Result<Self, LatticeError> {
        check_n(n, 3)?;
        Ok(Self::pattern(n, &[(0, 1), (0, 2)], ConfigLabel::ConfigIII))
    }

    /// Arbitrary Gram; isotropic generators force a zero diagonal.
    pub fn custom(gram: Vec<Vec<i64>>) -> Result<Self, LatticeError> {
        let n = gram.len();
        check_n(n, 1)?;
        if gram.iter().any(|r| r.len() != n) {
            return Err(LatticeError::NotSquare);
        }
        for i in 0..n {
            if gram[i][i] != 0 {
                return Err(LatticeError::InvalidConfiguration(format!(
                    "diagonal entry {} is {}, isotropic generators need 0",
                    i + 1,
                    gram[i][i]
                )));
            }
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(LatticeError::NotSymmetric(i, j));
                }
            }
        }
        Ok(ConfigurationPresentation { n, gram, label: ConfigLabel::Custom })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn label(&self) -> ConfigLabel {
        self.label
    }
}

fn check_n(n: usize, min: usize) -> Result<(), LatticeError> {
    if n < min || n > RANK {
        return Err(LatticeError::InvalidConfiguration(format!(
            "need {min} <= n <= {RANK}, got {n}"
        )));
    }
    Ok(())
}

/// Largest `a` (coefficient of `f`) tried for each generator by [`embed_configuration`].
pub const EMBED_SEARCH_BOUND: i64 = 2;

/// Largest E8 norm `w²` tried by [`embed_configuration`].
pub const EMBED_MAX_NORM: i64 = 16;

struct Candidate {
    a: i64,
    b: i64,
    w: Vec<i64>,
}

impl Candidate {
    fn class(&self) -> NumClass {
        let mut coords = Vec::with_capacity(RANK);
        coords.push(self.a);
        coords.push(self.b);
        coords.extend_from_slice(&self.w);
        NumClass::new(coords)
    }
}

/// E8 vectors (root coordinates) grouped by norm, for norms up to `max_norm`.
fn e8_vectors_by_norm(max_norm: i64) -> Vec<Vec<Vec<i64>>> {
    let form = PosDefForm::new(E8_CARTAN.iter().map(|r| r.to_vec()).collect(), 1)
        .expect("E8 Cartan matrix is positive definite");
    let mut by_norm = vec![Vec::new(); (max_norm + 1) as usize];
    by_norm[0].push(vec![0; 8]);
    if max_norm > 0 {
        let res = enumerate_short(&form, Ratio::from_integer(max_norm))
            .expect("non-negative bound");
        for v in res.vectors {
            let n = form.norm_numerator(&v) as usize;
            by_norm[n].push(v);
        }
    }
    by_norm
}

/// Finds primitive isotropic classes realizing the configuration.
///
/// `E1` is always `f`. Each later `Ej = a·f + b·g + w` has `b = E1·Ej` forced,
/// and `2ab = w²`; candidates are tried in order of increasing `a`, then
/// lexicographic `w`, with backtracking over earlier choices. Every returned
/// class pairs positively with `f + g`.
pub fn embed_configuration(
    p: &ConfigurationPresentation,
) -> Result<Vec<NumClass>, LatticeError> {
    let n = p.n();
    let gram = p.gram();
    for i in 0..n {
        for j in 0..n {
            if i != j && gram[i][j] < 0 {
                // isotropic classes in one cone component pair non-negatively
                return Err(LatticeError::InvalidConfiguration(format!(
                    "E{}.E{} = {} < 0",
                    i + 1,
                    j + 1,
                    gram[i][j]
                )));
            }
        }
    }
    let first = Candidate { a: 1, b: 0, w: vec![0; 8] };
    if n == 1 {
        return Ok(vec![first.class()]);
    }
    let max_b = (1..n).map(|j| gram[0][j]).max().unwrap_or(0);
    let max_norm = (2 * EMBED_SEARCH_BOUND * max_b).min(EMBED_MAX_NORM);
    let by_norm = e8_vectors_by_norm(max_norm);
    let e8 = |u: &[i64], v: &[i64]| -> i64 {
        let mut s = 0;
        for i in 0..8 {
            for j in 0..8 {
                s += u[i] * E8_CARTAN[i][j] * v[j];
            }
        }
        s
    };

    let mut chosen: Vec<Candidate> = vec![first];
    // per level, the position in the candidate stream to resume from
    let mut cursor: Vec<(i64, usize)> = vec![(0, 0); n];
    let mut level = 1;
    while level < n {
        let b = gram[0][level];
        let (mut a, mut idx) = cursor[level];
        let mut found = None;
        'scan: while a <= EMBED_SEARCH_BOUND {
            let norm = 2 * a * b;
            let pool: &[Vec<i64>] = if (norm as usize) < by_norm.len() {
                &by_norm[norm as usize]
            } else {
                &[]
            };
            while idx < pool.len() {
                let w = &pool[idx];
                idx += 1;
                if a + b <= 0 {
                    continue;
                }
                let g = w.iter().fold(a.gcd(&b), |acc, v| acc.gcd(v));
                if g != 1 {
                    continue;
                }
                let ok = chosen.iter().enumerate().skip(1).all(|(i, c)| {
                    c.a * b + c.b * a - e8(&c.w, w) == gram[i][level]
                });
                if ok {
                    found = Some(Candidate { a, b, w: w.clone() });
                    break 'scan;
                }
            }
            a += 1;
            idx = 0;
        }
        match found {
            Some(c) => {
                cursor[level] = (a, idx);
                chosen.push(c);
                level += 1;
                if level < n {
                    cursor[level] = (0, 0);
                }
            }
            None => {
                if level == 1 {
                    return Err(LatticeError::NotRealizable { bound: EMBED_SEARCH_BOUND });
                }
                chosen.pop();
                level -= 1;
            }
        }
    }
    Ok(chosen.iter().map(Candidate::class).collect())
}

/// Same as [`IntersectionForm::canonical`].
pub fn canonical_form() -> &'static IntersectionForm {
    IntersectionForm::canonical()
}

/// Handy accessors for the `U` summand.
pub fn class_f() -> DivisorClass {
    DivisorClass::from_num(NumClass::basis(RANK, 0))
}

pub fn class_g() -> DivisorClass {
    DivisorClass::from_num(NumClass::basis(RANK, 1))
}
