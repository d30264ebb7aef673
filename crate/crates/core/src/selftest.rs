//! Seeded randomized consistency checks, runnable from the command line.

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::brill_noether::{param_count, rho};
use crate::invariants::{decompose_isotropic, gonality, phi};
use crate::lattice::{DivisorClass, IntersectionForm, NumClass, RANK};
use crate::positivity::{classify_positivity, cohomology};
use crate::shortvec::{enumerate_short, PosDefForm};

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SelfTestReport {
    pub seed: u64,
    pub checks: Vec<CheckOutcome>,
    pub all_passed: bool,
}

pub fn random_class(rng: &mut impl Rng, max_abs: i64) -> DivisorClass {
    let coords = (0..RANK).map(|_| rng.gen_range(-max_abs..=max_abs)).collect();
    DivisorClass::new(NumClass::new(coords), rng.gen()).expect("rank 10")
}

/// An ample class with `L² ≤ max_square`: `af + bg + w` with small `w`.
pub fn random_ample(rng: &mut impl Rng, max_square: i64) -> DivisorClass {
    loop {
        let mut coords = vec![rng.gen_range(1..=6), rng.gen_range(1..=6)];
        coords.extend((0..8).map(|_| rng.gen_range(-1..=1)));
        let l = DivisorClass::new(NumClass::new(coords), false).expect("rank 10");
        if l.square() <= max_square && classify_positivity(&l).is_ample {
            return l;
        }
    }
}

fn check(name: &'static str, cases: usize, mut f: impl FnMut() -> bool) -> CheckOutcome {
    let failures = (0..cases).filter(|_| !f()).count();
    CheckOutcome { name, cases, failures }
}

/// Exhaustive scan of the box `|zᵢ| ≤ √bound`, complete for forms `AᵀA + I`
/// since then `q(z) ≥ |z|²`.
fn scan(rows: &[Vec<i64>], bound: i64) -> Vec<Vec<i64>> {
    let n = rows.len();
    let form = PosDefForm::new(rows.to_vec(), 1).expect("positive definite");
    let r = (bound as f64).sqrt() as i64 + 1;
    let mut out = Vec::new();
    let total = (2 * r + 1).pow(n as u32);
    for idx in 0..total {
        let mut rem = idx;
        let z: Vec<i64> = (0..n)
            .map(|_| {
                let v = rem % (2 * r + 1) - r;
                rem /= 2 * r + 1;
                v
            })
            .collect();
        let v = form.norm_numerator(&z);
        if v > 0 && v <= bound as i128 {
            out.push(z);
        }
    }
    out.sort();
    out
}

pub fn run_selftest(seed: u64) -> SelfTestReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let form = IntersectionForm::canonical();
    let mut checks = Vec::new();

    checks.push(check("pairing-bilinear-symmetric", 100, || {
        let (x, y, z) = (random_class(&mut rng, 5), random_class(&mut rng, 5), random_class(&mut rng, 5));
        let xy = &x + &y;
        xy.dot(&z) == x.dot(&z) + y.dot(&z)
            && x.dot(&y) == y.dot(&x)
            && form.pair(x.num(), x.num()).is_ok_and(|v| v % 2 == 0)
    }));

    checks.push(check("riemann-roch-serre", 200, || {
        let d = random_class(&mut rng, 5);
        let p = cohomology(&d);
        let dual = cohomology(&(&DivisorClass::canonical_class() - &d));
        p.h0 - p.h1 + p.h2 == d.square() / 2 + 1 && p.h0 == dual.h2
    }));

    checks.push(check("shortvec-box-scan", 40, || {
        let n = rng.gen_range(1..=4);
        let a: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-2..=2)).collect()).collect();
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| a[k][i] * a[k][j]).sum::<i64>() + (i == j) as i64).collect())
            .collect();
        let bound = rng.gen_range(0..=20);
        let form = PosDefForm::new(rows.clone(), 1).expect("positive definite");
        enumerate_short(&form, Ratio::from_integer(bound)).is_ok_and(|r| r.vectors == scan(&rows, bound))
    }));

    checks.push(check("phi-bound-and-witness", 20, || {
        let l = random_ample(&mut rng, 40);
        match phi(&l) {
            Ok(r) => {
                r.value * r.value <= l.square()
                    && r.witness.square() == 0
                    && r.witness.num().is_primitive()
                    && l.dot(&r.witness) == r.value
            }
            Err(_) => false,
        }
    }));

    checks.push(check("gonality-bound", 10, || {
        let l = random_ample(&mut rng, 40);
        gonality(&l).is_ok_and(|g| g.k <= (g.genus + 3) / 2)
    }));

    checks.push(check("decomposition-resums", 10, || {
        let l = random_ample(&mut rng, 30);
        decompose_isotropic(&l).is_ok_and(|d| {
            let sum = d
                .generators
                .iter()
                .zip(&d.coefficients)
                .fold(DivisorClass::zero(), |acc, (e, a)| &acc + &(*a * e));
            sum.num() == l.num()
        })
    }));

    checks.push(check("rho-and-parameter-chain", 100, || {
        let g = rng.gen_range(2..=40);
        let d = rng.gen_range(1..=g);
        let mn = rng.gen_range(0..=d);
        let k = rng.gen_range(2..=20);
        let i = rng.gen_range(0..=2);
        rho(g, 1, d) == 2 * d - g - 2
            && param_count(g, d, mn, i, d - mn, 0, 0, k).is_ok_and(|a| {
                a.total_bound == g - 2 + d - mn && (mn < k - 1 || a.total_bound <= a.theorem_bound)
            })
    }));

    let all_passed = checks.iter().all(|c| c.failures == 0);
    SelfTestReport { seed, checks, all_passed }
}
