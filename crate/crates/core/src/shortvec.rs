//! Exact short-vector enumeration for positive-definite integral forms, and
//! the projection onto the orthogonal complement of a positive class.
//!
//! Enumeration is Fincke-Pohst style: write `q(z) = Σ dᵢ (zᵢ + Σ_{j>i} μᵢⱼ zⱼ)²`
//! over the rationals and bound one coordinate at a time, starting from the
//! last. Everything is exact, so the output is complete.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::lattice::{IntersectionForm, LatticeError, NumClass};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShortVecError {
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("form must be square and symmetric")]
    Malformed,
    #[error("bound must be non-negative")]
    NegativeBound,
    #[error("class must have positive square, got {0}")]
    NonPositiveSquare(i64),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// A positive-definite form `gram / denom`.
#[derive(Debug, Clone)]
pub struct PosDefForm {
    rank: usize,
    gram: Vec<i64>,
    denom: i64,
    // d[i] and mu[i][j] (j > i) of the LDL decomposition of gram (numerators)
    d: Vec<BigRational>,
    mu: Vec<Vec<BigRational>>,
}

impl PosDefForm {
    pub fn new(rows: Vec<Vec<i64>>, denom: i64) -> Result<Self, ShortVecError> {
        let n = rows.len();
        if n == 0 || denom <= 0 || rows.iter().any(|r| r.len() != n) {
            return Err(ShortVecError::Malformed);
        }
        for i in 0..n {
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(ShortVecError::Malformed);
                }
            }
        }
        let a: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| BigRational::from_integer(v.into())).collect())
            .collect();
        // q(z) = Σ d_i (z_i + Σ_{j>i} mu_ij z_j)^2, eliminating from index 0.
        let mut work = a;
        let mut d = Vec::with_capacity(n);
        let mut mu = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            let piv = work[i][i].clone();
            if !piv.is_positive() {
                return Err(ShortVecError::NotPositiveDefinite);
            }
            for j in i + 1..n {
                mu[i][j] = &work[i][j] / &piv;
            }
            for r in i + 1..n {
                for c in i + 1..n {
                    let v = &work[i][r] * &work[i][c] / &piv;
                    work[r][c] -= v;
                }
            }
            d.push(piv);
        }
        Ok(PosDefForm { rank: n, gram: rows.into_iter().flatten().collect(), denom, d, mu })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn denom(&self) -> i64 {
        self.denom
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.gram[i * self.rank + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.gram.chunks(self.rank).map(|r| r.to_vec()).collect()
    }

    /// `zᵀ·gram·z`, without the denominator.
    pub fn norm_numerator(&self, z: &[i64]) -> i128 {
        let n = self.rank;
        let mut acc = 0i128;
        for i in 0..n {
            for j in 0..n {
                acc += z[i] as i128 * self.gram[i * n + j] as i128 * z[j] as i128;
            }
        }
        acc
    }

    /// `q(z)` as an exact rational.
    pub fn value(&self, z: &[i64]) -> BigRational {
        BigRational::new(BigInt::from(self.norm_numerator(z)), BigInt::from(self.denom))
    }

    /// Exact leading principal minors of the numerator matrix.
    pub fn leading_minors(&self) -> Vec<BigRational> {
        let mut acc = BigRational::one();
        self.d
            .iter()
            .map(|di| {
                acc = &acc * di;
                acc.clone()
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortVectorResult {
    pub bound: Ratio<i64>,
    pub vectors: Vec<Vec<i64>>,
    pub includes_negatives: bool,
}

/// All nonzero `z` with `q(z) ≤ bound`, sorted lexicographically.
pub fn enumerate_short(q: &PosDefForm, bound: Ratio<i64>) -> Result<ShortVectorResult, ShortVecError> {
    if bound.is_negative() {
        return Err(ShortVecError::NegativeBound);
    }
    // compare numerators: zᵀGz ≤ bound·denom
    let budget = BigRational::new(
        BigInt::from(*bound.numer()) * BigInt::from(q.denom),
        BigInt::from(*bound.denom()),
    );
    let mut out = Vec::new();
    let mut z = vec![0i64; q.rank];
    search(q, q.rank, &budget, &mut z, &mut out);
    out.sort();
    Ok(ShortVectorResult { bound, vectors: out, includes_negatives: true })
}

fn search(q: &PosDefForm, level: usize, budget: &BigRational, z: &mut [i64], out: &mut Vec<Vec<i64>>) {
    if level == 0 {
        if z.iter().any(|&v| v != 0) {
            out.push(z.to_vec());
        }
        return;
    }
    let i = level - 1;
    let mut center = BigRational::zero();
    for j in i + 1..q.rank {
        if z[j] != 0 {
            center -= &q.mu[i][j] * BigInt::from(z[j]);
        }
    }
    let di = &q.d[i];
    let cost = |v: i64| -> BigRational {
        let t = BigRational::from_integer(v.into()) - &center;
        di * &t * &t
    };
    let base = center.floor().to_integer().to_i64().expect("coordinate fits in i64");
    let mut v = base;
    while cost(v) <= *budget {
        let rest = budget - cost(v);
        z[i] = v;
        search(q, i, &rest, z, out);
        v -= 1;
    }
    let mut v = base + 1;
    while cost(v) <= *budget {
        let rest = budget - cost(v);
        z[i] = v;
        search(q, i, &rest, z, out);
        v += 1;
    }
    z[i] = 0;
}

/// Orthogonal projection of `Z^10` along a class `L` with `L² > 0`.
///
/// A unimodular basis `v₁..v₁₀` is chosen with `v₁ = L/c` (`c` the content);
/// the projections of `v₂..v₁₀` form a basis of the projected lattice, on which
/// `−(x⊥)²` is the positive-definite form `qperp`. A vector `x` is recovered
/// from its projection and `x·L` because `x − y` is a multiple of `L/c`.
#[derive(Debug, Clone)]
pub struct ComplementProjection {
    form: IntersectionForm,
    l: NumClass,
    l_square: i64,
    content: i64,
    primitive: NumClass,
    basis: Vec<NumClass>,
    // inverse of the basis matrix: rows give coordinates in v₁..v₁₀
    dual: Vec<Vec<i64>>,
    qperp: PosDefForm,
}

pub fn project_complement(form: &IntersectionForm, l: &NumClass) -> Result<ComplementProjection, ShortVecError> {
    let l_square = form.pair(l, l)?;
    if l_square <= 0 {
        return Err(ShortVecError::NonPositiveSquare(l_square));
    }
    let (content, primitive) = l.content()?;
    let n = form.rank();
    let v = completion_basis(primitive.coords());
    let basis: Vec<NumClass> = (1..n)
        .map(|j| NumClass::new((0..n).map(|i| v[i][j]).collect()))
        .collect();
    let dots: Vec<i64> = basis.iter().map(|v| form.pair(v, l)).collect::<Result<_, _>>()?;
    let mut rows = vec![vec![0i64; n - 1]; n - 1];
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            rows[i][j] = dots[i] * dots[j] - l_square * form.pair(&basis[i], &basis[j])?;
        }
    }
    let qperp = PosDefForm::new(rows, l_square)?;
    let dual = invert_unimodular(&v);
    Ok(ComplementProjection {
        form: form.clone(),
        l: l.clone(),
        l_square,
        content,
        primitive,
        basis,
        dual,
        qperp,
    })
}

/// Returns `V` unimodular whose first column is the primitive vector `p`.
fn completion_basis(p: &[i64]) -> Vec<Vec<i64>> {
    let n = p.len();
    // Row-reduce p to e1 with unimodular W while keeping V = W⁻¹.
    let mut x = p.to_vec();
    let mut v: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    loop {
        let nz: Vec<usize> = (0..n).filter(|&i| x[i] != 0).collect();
        if nz.len() == 1 {
            let i = nz[0];
            if i != 0 {
                x.swap(0, i);
                for row in v.iter_mut() {
                    row.swap(0, i);
                }
            }
            if x[0] < 0 {
                x[0] = -x[0];
                for row in v.iter_mut() {
                    row[0] = -row[0];
                }
            }
            debug_assert_eq!(x[0], 1, "vector must be primitive");
            return v;
        }
        let piv = *nz.iter().min_by_key(|&&i| x[i].abs()).unwrap();
        for &j in &nz {
            if j == piv {
                continue;
            }
            let q = Integer::div_floor(&x[j], &x[piv]);
            // row_j -= q·row_piv on W  <=>  col_piv += q·col_j on V
            x[j] -= q * x[piv];
            for row in v.iter_mut() {
                row[piv] += q * row[j];
            }
        }
    }
}

impl ComplementProjection {
    pub fn qperp(&self) -> &PosDefForm {
        &self.qperp
    }

    pub fn l(&self) -> &NumClass {
        &self.l
    }

    pub fn l_square(&self) -> i64 {
        self.l_square
    }

    /// Images in the ambient lattice of the projected basis vectors.
    pub fn basis(&self) -> &[NumClass] {
        &self.basis
    }

    /// `−(x⊥)² = (x·L)²/L² − x²`, exactly.
    pub fn complement_norm(&self, x: &NumClass) -> Ratio<i64> {
        let t = self.form.pair_coords(x.coords(), self.l.coords());
        let xx = self.form.pair_coords(x.coords(), x.coords());
        Ratio::new(t * t, self.l_square) - Ratio::from_integer(xx)
    }

    /// Complement coordinates `z` of `x` in the projected basis.
    pub fn coordinates_of(&self, x: &NumClass) -> Vec<i64> {
        self.dual[1..]
            .iter()
            .map(|row| row.iter().zip(x.coords()).map(|(w, c)| w * c).sum())
            .collect()
    }

    /// The lift of complement coordinates `z` to a class of square `square` with
    /// non-negative pairing against `L`, if one exists.
    pub fn lift(&self, z: &[i64], square: i64) -> Option<NumClass> {
        let n = self.form.rank();
        let mut y = vec![0i64; n];
        for (zj, v) in z.iter().zip(&self.basis) {
            if *zj != 0 {
                for i in 0..n {
                    y[i] += zj * v.coords()[i];
                }
            }
        }
        let yl = self.form.pair_coords(&y, self.l.coords()) as i128;
        let yy = self.form.pair_coords(&y, &y) as i128;
        let ll = self.l_square as i128;
        let disc = yl * yl - ll * (yy - square as i128);
        if disc < 0 {
            return None;
        }
        let t = disc.sqrt();
        if t * t != disc {
            return None;
        }
        let step = ll / self.content as i128;
        let num = t - yl;
        if num % step != 0 {
            return None;
        }
        let m = (num / step) as i64;
        let p = self.primitive.coords();
        Some(NumClass::new((0..n).map(|i| y[i] + m * p[i]).collect()))
    }

    /// All classes `x` with `x² = square` and `1 ≤ x·L ≤ t_max`, sorted by
    /// `(x·L, coordinates)`.
    pub fn classes_with_square(&self, square: i64, t_max: i64) -> Vec<(i64, NumClass)> {
        if t_max < 1 {
            return Vec::new();
        }
        let bound = Ratio::new(t_max * t_max, self.l_square) - Ratio::from_integer(square);
        if bound.is_negative() {
            return Vec::new();
        }
        let mut zs = enumerate_short(&self.qperp, bound).expect("bound is non-negative").vectors;
        zs.push(vec![0; self.qperp.rank()]);
        let mut out = Vec::new();
        for z in zs {
            if let Some(x) = self.lift(&z, square) {
                let t = self.form.pair_coords(x.coords(), self.l.coords());
                if (1..=t_max).contains(&t) {
                    out.push((t, x));
                }
            }
        }
        out.sort();
        out
    }
}

fn invert_unimodular(v: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = v.len();
    let mut a: Vec<Vec<BigRational>> = v
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect();
    for c in 0..n {
        let r = (c..n).find(|&r| !a[r][c].is_zero()).expect("unimodular matrix");
        a.swap(c, r);
        inv.swap(c, r);
        let piv = a[c][c].clone();
        for j in 0..n {
            a[c][j] = &a[c][j] / &piv;
            inv[c][j] = &inv[c][j] / &piv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for j in 0..n {
                    let t = &f * &a[c][j];
                    a[r][j] -= t;
                    let t = &f * &inv[c][j];
                    inv[r][j] -= t;
                }
            }
        }
    }
    inv.into_iter()
        .map(|r| r.into_iter().map(|x| x.to_integer().to_i64().expect("integral inverse")).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::RANK;
    use proptest::prelude::*;

    fn diag2() -> PosDefForm {
        PosDefForm::new(vec![vec![2, 0], vec![0, 2]], 1).unwrap()
    }

    #[test]
    fn small_examples() {
        let r = enumerate_short(&diag2(), Ratio::from_integer(2)).unwrap();
        assert_eq!(r.vectors, vec![vec![-1, 0], vec![0, -1], vec![0, 1], vec![1, 0]]);
        let r = enumerate_short(&diag2(), Ratio::from_integer(4)).unwrap();
        assert_eq!(r.vectors.len(), 8);
        assert!(r.vectors.contains(&vec![1, -1]));
        let r = enumerate_short(&diag2(), Ratio::from_integer(0)).unwrap();
        assert!(r.vectors.is_empty());
    }

    #[test]
    fn rejects_indefinite_and_negative_bound() {
        assert!(matches!(
            PosDefForm::new(vec![vec![0, 1], vec![1, 0]], 1),
            Err(ShortVecError::NotPositiveDefinite)
        ));
        assert_eq!(
            enumerate_short(&diag2(), Ratio::from_integer(-1)),
            Err(ShortVecError::NegativeBound)
        );
    }

    #[test]
    fn e8_root_count() {
        let e8 = PosDefForm::new(
            crate::lattice::E8_CARTAN.iter().map(|r| r.to_vec()).collect(),
            1,
        )
        .unwrap();
        let r = enumerate_short(&e8, Ratio::from_integer(2)).unwrap();
        assert_eq!(r.vectors.len(), 240);
        let r = enumerate_short(&e8, Ratio::from_integer(4)).unwrap();
        assert_eq!(r.vectors.len(), 240 + 2160);
    }

    fn num(v: &[i64]) -> NumClass {
        let mut c = v.to_vec();
        c.resize(RANK, 0);
        NumClass::new(c)
    }

    #[test]
    fn projection_of_f_along_f_plus_g() {
        let form = IntersectionForm::canonical();
        let proj = project_complement(form, &num(&[1, 1])).unwrap();
        assert_eq!(proj.complement_norm(&num(&[1])), Ratio::new(1, 2));
        assert_eq!(proj.qperp().rank(), 9);
        assert_eq!(proj.qperp().denom(), 2);
    }

    #[test]
    fn isotropic_classes_have_norm_t_squared_over_l_squared() {
        let form = IntersectionForm::canonical();
        let l = num(&[2, 4]);
        let proj = project_complement(form, &l).unwrap();
        let hits = proj.classes_with_square(0, 4);
        assert!(!hits.is_empty());
        for (t, x) in hits {
            assert_eq!(form.pair(&x, &x).unwrap(), 0);
            assert_eq!(proj.complement_norm(&x), Ratio::new(t * t, 16));
        }
    }

    #[test]
    fn non_positive_square_rejected() {
        let form = IntersectionForm::canonical();
        assert!(matches!(
            project_complement(form, &num(&[1])),
            Err(ShortVecError::NonPositiveSquare(0))
        ));
    }

    #[test]
    fn coordinates_round_trip_through_lift() {
        let form = IntersectionForm::canonical();
        let l = num(&[3, 2, 1, 0, -1]);
        let proj = project_complement(form, &l).unwrap();
        let x = num(&[1, 0, 0, 1, 1, 0, 0, 0, 0, 2]);
        let xx = form.pair(&x, &x).unwrap();
        let z = proj.coordinates_of(&x);
        if form.pair(&x, &l).unwrap() >= 0 {
            assert_eq!(proj.lift(&z, xx), Some(x));
        }
    }

    fn box_scan(rows: &[Vec<i64>], bound: i64) -> Vec<Vec<i64>> {
        let n = rows.len();
        let form = PosDefForm::new(rows.to_vec(), 1).unwrap();
        // |z_i| ≤ sqrt(bound · (G⁻¹)_ii) ≤ sqrt(bound · adj_ii / det)
        let minors = form.leading_minors();
        let det = minors[n - 1].clone();
        let radius: Vec<i64> = (0..n)
            .map(|i| {
                let sub: Vec<Vec<i64>> = (0..n)
                    .filter(|&r| r != i)
                    .map(|r| (0..n).filter(|&c| c != i).map(|c| rows[r][c]).collect())
                    .collect();
                let adj = if sub.is_empty() {
                    BigRational::one()
                } else {
                    rational_det(&sub)
                };
                let r2 = BigRational::from_integer(bound.into()) * adj / &det;
                r2.floor().to_integer().to_i64().unwrap().sqrt() + 1
            })
            .collect();
        let mut out = Vec::new();
        let mut z = vec![0i64; n];
        fn rec(i: usize, radius: &[i64], z: &mut Vec<i64>, f: &mut dyn FnMut(&[i64])) {
            if i == z.len() {
                f(z);
                return;
            }
            for v in -radius[i]..=radius[i] {
                z[i] = v;
                rec(i + 1, radius, z, f);
            }
        }
        rec(0, &radius, &mut z, &mut |z| {
            let v = form.norm_numerator(z);
            if v > 0 && v <= bound as i128 {
                out.push(z.to_vec());
            }
        });
        out.sort();
        out
    }

    fn rational_det(m: &[Vec<i64>]) -> BigRational {
        let n = m.len();
        let mut a: Vec<Vec<BigRational>> = m
            .iter()
            .map(|r| r.iter().map(|&v| BigRational::from_integer(v.into())).collect())
            .collect();
        let mut det = BigRational::one();
        for c in 0..n {
            let Some(r) = (c..n).find(|&r| !a[r][c].is_zero()) else {
                return BigRational::zero();
            };
            if r != c {
                a.swap(r, c);
                det = -det;
            }
            det *= a[c][c].clone();
            for r in c + 1..n {
                let f = &a[r][c] / &a[c][c];
                for j in c..n {
                    let t = &f * &a[c][j];
                    a[r][j] -= t;
                }
            }
        }
        det
    }

    /// Random positive-definite matrix `AᵀA + I`.
    fn posdef(n: usize, entries: Vec<i64>) -> Vec<Vec<i64>> {
        let a: Vec<Vec<i64>> = entries.chunks(n).map(|r| r.to_vec()).collect();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| a[k][i] * a[k][j]).sum::<i64>() + (i == j) as i64)
                    .collect()
            })
            .collect()
    }

    fn posdef_strategy() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..=4).prop_flat_map(|n| {
            proptest::collection::vec(-2i64..=2, n * n).prop_map(move |e| posdef(n, e))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn matches_box_scan(rows in posdef_strategy(), bound in 0i64..=20) {
            let form = PosDefForm::new(rows.clone(), 1).unwrap();
            let got = enumerate_short(&form, Ratio::from_integer(bound)).unwrap().vectors;
            prop_assert_eq!(got, box_scan(&rows, bound));
        }

        #[test]
        fn closed_under_negation(rows in posdef_strategy(), bound in 0i64..=20) {
            let form = PosDefForm::new(rows, 1).unwrap();
            let got = enumerate_short(&form, Ratio::from_integer(bound)).unwrap().vectors;
            for v in &got {
                let neg: Vec<i64> = v.iter().map(|x| -x).collect();
                prop_assert!(got.binary_search(&neg).is_ok());
            }
        }

        #[test]
        fn monotone_in_bound(rows in posdef_strategy(), b1 in 0i64..=12, extra in 0i64..=8) {
            let form = PosDefForm::new(rows, 1).unwrap();
            let small = enumerate_short(&form, Ratio::from_integer(b1)).unwrap().vectors;
            let large = enumerate_short(&form, Ratio::from_integer(b1 + extra)).unwrap().vectors;
            for v in &small {
                prop_assert!(large.binary_search(v).is_ok());
            }
        }

        #[test]
        fn qperp_positive_definite_and_lifts_consistent(
            a in 1i64..=4, b in 1i64..=4, w in proptest::collection::vec(-1i64..=1, 8)
        ) {
            let form = IntersectionForm::canonical();
            let mut c = vec![a, b];
            c.extend(w);
            let l = NumClass::new(c);
            let ll = form.pair(&l, &l).unwrap();
            prop_assume!(ll > 0);
            let proj = project_complement(form, &l).unwrap();
            prop_assert!(proj.qperp().leading_minors().iter().all(|m| m.is_positive()));
            let t_max = (ll as f64).sqrt() as i64 + 1;
            for square in [0i64, 2, 4] {
                for (t, x) in proj.classes_with_square(square, t_max) {
                    prop_assert_eq!(form.pair(&x, &x).unwrap(), square);
                    prop_assert_eq!(form.pair(&x, &l).unwrap(), t);
                    let z = proj.coordinates_of(&x);
                    let via_form = proj.qperp().value(&z);
                    let direct = proj.complement_norm(&x);
                    prop_assert_eq!(
                        via_form,
                        BigRational::new((*direct.numer()).into(), (*direct.denom()).into())
                    );
                }
            }
        }
    }
}
