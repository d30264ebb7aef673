//! φ(L), μ(L), generic gonality, generic Clifford index and isotropic
//! decompositions of an ample class.

use num_integer::Roots;
use serde::Serialize;
use thiserror::Error;

use crate::lattice::{ConfigLabel, DivisorClass, IntersectionForm, NumClass};
use crate::positivity::{classify_positivity, reference_ample};
use crate::shortvec::{project_complement, ShortVecError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantsError {
    #[error("class must be effective with positive square")]
    NotAmpleEnough,
    #[error("class is not ample")]
    NotAmple,
    #[error("class must be effective with non-negative square")]
    NotEffective,
    #[error("genus {genus} < 4; Clifford index by convention is {convention}")]
    GenusTooSmall { genus: i64, convention: i64 },
    #[error("search exhausted at bound {bound}")]
    SearchExhausted { bound: i64 },
    #[error(transparent)]
    ShortVec(#[from] ShortVecError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiResult {
    pub value: i64,
    pub witness: DivisorClass,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MuStatus {
    Exact,
    NotFoundBelowCap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MuResult {
    pub status: MuStatus,
    pub value: Option<i64>,
    pub witness: Option<DivisorClass>,
    /// Largest `L·B` searched.
    pub cap: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseLabel {
    #[serde(rename = "generic-2phi")]
    Generic2Phi,
    #[serde(rename = "mu-case-square")]
    MuCaseSquare,
    #[serde(rename = "mu-case-square-plus")]
    MuCaseSquarePlus,
    #[serde(rename = "floor-exceptional")]
    FloorExceptional,
    #[serde(rename = "floor-plain")]
    FloorPlain,
}

impl CaseLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            CaseLabel::Generic2Phi => "generic-2phi",
            CaseLabel::MuCaseSquare => "mu-case-square",
            CaseLabel::MuCaseSquarePlus => "mu-case-square-plus",
            CaseLabel::FloorExceptional => "floor-exceptional",
            CaseLabel::FloorPlain => "floor-plain",
        }
    }
}

/// `(L², φ)` pairs where the floor term wins with value `2φ − 1`.
pub const EXCEPTIONAL_PAIRS: [(i64, i64); 6] = [(30, 5), (22, 4), (20, 4), (14, 3), (12, 3), (6, 2)];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GonalityReport {
    pub k: i64,
    pub phi: PhiResult,
    pub mu: MuResult,
    pub floor_term: i64,
    pub case_label: CaseLabel,
    pub genus: i64,
    /// Value predicted by the case classification from `(L², φ)` alone.
    pub predicted_k: i64,
    pub classification_consistent: bool,
    /// `Some(_)` only when `(L², φ) = (40, 6)`, where `L ≡ 2D` with `D² = 10`,
    /// `φ(D) = 3` changes the prediction. Compared numerically.
    pub twice_d10: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsotropicDecomposition {
    pub generators: Vec<DivisorClass>,
    pub coefficients: Vec<i64>,
    pub configuration: ConfigLabel,
    /// Top-level bound on `E·L` for the first generator peeled.
    pub pairing_bound: i64,
}

fn form() -> &'static IntersectionForm {
    IntersectionForm::canonical()
}

fn require_ample(l: &DivisorClass, err: InvariantsError) -> Result<(), InvariantsError> {
    if classify_positivity(l).is_ample {
        Ok(())
    } else {
        Err(err)
    }
}

pub fn phi(l: &DivisorClass) -> Result<PhiResult, InvariantsError> {
    require_ample(l, InvariantsError::NotAmpleEnough)?;
    phi_num(l.num())
}

/// φ of a class already known to be in the positive cone.
fn phi_num(l: &NumClass) -> Result<PhiResult, InvariantsError> {
    let ll = form().pair_coords(l.coords(), l.coords());
    let t_max = ll.sqrt();
    let proj = project_complement(form(), l)?;
    let a0 = reference_ample();
    for (t, x) in proj.classes_with_square(0, t_max) {
        let e = DivisorClass::from_num(x);
        if e.num().is_primitive() && e.dot(&a0) > 0 {
            return Ok(PhiResult { value: t, witness: e });
        }
    }
    Err(InvariantsError::SearchExhausted { bound: t_max })
}

/// μ(L) with `L·B` searched up to `cap` (default `2φ(L) + 2`).
pub fn mu(l: &DivisorClass, cap: Option<i64>) -> Result<MuResult, InvariantsError> {
    require_ample(l, InvariantsError::NotAmpleEnough)?;
    let cap = match cap {
        Some(c) => c,
        None => 2 * phi_num(l.num())?.value + 2,
    };
    mu_num(l.num(), cap)
}

fn mu_num(l: &NumClass, cap: i64) -> Result<MuResult, InvariantsError> {
    let proj = project_complement(form(), l)?;
    let a0 = reference_ample();
    for (t, x) in proj.classes_with_square(4, cap) {
        if &x == l {
            continue;
        }
        let b = DivisorClass::from_num(x);
        if b.dot(&a0) <= 0 {
            continue;
        }
        if phi_num(b.num())?.value == 2 {
            return Ok(MuResult {
                status: MuStatus::Exact,
                value: Some(t - 2),
                witness: Some(b),
                cap,
            });
        }
    }
    Ok(MuResult { status: MuStatus::NotFoundBelowCap, value: None, witness: None, cap })
}

/// Whether `num(L) = 2D` with `D² = 10` and `φ(D) = 3`.
pub fn is_twice_d10(l: &DivisorClass) -> Result<bool, InvariantsError> {
    let Some(d) = l.num().div_exact(2) else {
        return Ok(false);
    };
    let dd = form().pair_coords(d.coords(), d.coords());
    if dd != 10 {
        return Ok(false);
    }
    Ok(phi_num(&d)?.value == 3)
}

/// The gonality the case classification predicts from `(L², φ)`.
pub fn classification_k(l_square: i64, phi: i64, twice_d10: bool) -> i64 {
    if l_square == phi * phi && phi >= 2 && phi % 2 == 0 {
        2 * phi - 2
    } else if l_square == phi * phi + phi - 2 && phi >= 3 && !twice_d10 {
        if phi >= 5 {
            2 * phi - 1
        } else {
            2 * phi - 2
        }
    } else if EXCEPTIONAL_PAIRS.contains(&(l_square, phi)) {
        2 * phi - 1
    } else {
        2 * phi
    }
}

pub fn gonality(l: &DivisorClass) -> Result<GonalityReport, InvariantsError> {
    gonality_with_cap(l, None)
}

/// As [`gonality`]; the μ search cap is never taken below `2φ + 2`, so `k` is exact.
pub fn gonality_with_cap(l: &DivisorClass, cap: Option<i64>) -> Result<GonalityReport, InvariantsError> {
    require_ample(l, InvariantsError::NotAmple)?;
    let ll = l.square();
    let phi = phi_num(l.num())?;
    let default_cap = 2 * phi.value + 2;
    let mu = mu_num(l.num(), cap.map_or(default_cap, |c| c.max(default_cap)))?;
    let floor_term = ll / 4 + 2;
    let two_phi = 2 * phi.value;
    let mut k = two_phi.min(floor_term);
    if let Some(m) = mu.value {
        k = k.min(m);
    }
    let case_label = if EXCEPTIONAL_PAIRS.contains(&(ll, phi.value)) {
        CaseLabel::FloorExceptional
    } else if mu.value == Some(k) && k < two_phi {
        if ll == phi.value * phi.value {
            CaseLabel::MuCaseSquare
        } else {
            CaseLabel::MuCaseSquarePlus
        }
    } else if floor_term == k && k < two_phi {
        CaseLabel::FloorPlain
    } else {
        CaseLabel::Generic2Phi
    };
    let twice_d10 = if ll == 40 && phi.value == 6 { Some(is_twice_d10(l)?) } else { None };
    let predicted_k = classification_k(ll, phi.value, twice_d10.unwrap_or(false));
    Ok(GonalityReport {
        k,
        floor_term,
        case_label,
        genus: ll / 2 + 1,
        predicted_k,
        classification_consistent: predicted_k == k,
        twice_d10,
        phi,
        mu,
    })
}

/// Generic Clifford index `k − 2` of curves in `|L|`.
pub fn clifford_generic(l: &DivisorClass) -> Result<i64, InvariantsError> {
    let rep = gonality(l)?;
    clifford_from_report(&rep)
}

pub fn clifford_from_report(rep: &GonalityReport) -> Result<i64, InvariantsError> {
    if rep.genus >= 4 {
        Ok(rep.k - 2)
    } else {
        let convention = if rep.k <= 2 { 0 } else { 1 };
        Err(InvariantsError::GenusTooSmall { genus: rep.genus, convention })
    }
}

/// Node budget for one decomposition search.
pub const DECOMPOSE_NODE_BUDGET: u64 = 200_000;

/// Indices of generator pairs meeting with multiplicity 2, if the pattern is admissible.
fn double_edges(gens: &[NumClass]) -> Option<Vec<(usize, usize)>> {
    let mut twos = Vec::new();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            match form().pair_coords(gens[i].coords(), gens[j].coords()) {
                1 => {}
                2 => twos.push((i, j)),
                _ => return None,
            }
        }
    }
    match twos.len() {
        0 | 1 => Some(twos),
        2 => {
            let (a, b) = (twos[0], twos[1]);
            if a.0 == b.0 || a.0 == b.1 || a.1 == b.0 || a.1 == b.1 {
                Some(twos)
            } else {
                None
            }
        }
        _ => None,
    }
}

struct Peeler {
    a0: DivisorClass,
    gens: Vec<NumClass>,
    coeffs: Vec<i64>,
    max_gens: usize,
    nodes: u64,
}

impl Peeler {
    fn admits(&mut self, e: &NumClass) -> bool {
        self.gens.push(e.clone());
        let ok = double_edges(&self.gens).is_some();
        self.gens.pop();
        ok
    }

    fn peel(&mut self, rem: &NumClass) -> Result<bool, InvariantsError> {
        self.nodes += 1;
        if self.nodes > DECOMPOSE_NODE_BUDGET {
            return Err(InvariantsError::SearchExhausted { bound: DECOMPOSE_NODE_BUDGET as i64 });
        }
        let r2 = form().pair_coords(rem.coords(), rem.coords());
        if r2 == 0 {
            let (c, p) = rem.content().expect("remainder is nonzero");
            if self.gens.len() < self.max_gens && self.admits(&p) {
                self.gens.push(p);
                self.coeffs.push(c);
                return Ok(true);
            }
            return Ok(false);
        }
        if self.gens.len() + 2 > self.max_gens {
            return Ok(false);
        }
        // the generator minimizing E·R has (E·R)² < 2R²
        let t_max = (2 * r2 - 1).sqrt();
        let proj = project_complement(form(), rem)?;
        for (t, e) in proj.classes_with_square(0, t_max) {
            if !e.is_primitive() || !self.admits(&e) {
                continue;
            }
            for a in 1..=r2 / (2 * t) {
                let next = rem - &(a * &e);
                if form().pair_coords(next.coords(), self.a0.coords()) <= 0 {
                    break;
                }
                self.gens.push(e.clone());
                self.coeffs.push(a);
                if self.peel(&next)? {
                    return Ok(true);
                }
                self.gens.pop();
                self.coeffs.pop();
            }
        }
        Ok(false)
    }
}

/// Writes `L ≡ Σ aᵢEᵢ` with primitive isotropic effective `Eᵢ` meeting pairwise
/// in 1 or 2, the 2's forming at most two edges through a common generator.
///
/// Generators are peeled one at a time, always trying the smallest `E·R` first;
/// the number of generators is deepened from 1, so the decomposition returned
/// has as few generators as possible.
pub fn decompose_isotropic(l: &DivisorClass) -> Result<IsotropicDecomposition, InvariantsError> {
    let status = classify_positivity(l);
    if !status.is_effective {
        return Err(InvariantsError::NotEffective);
    }
    let ll = l.square();
    let pairing_bound = if ll > 0 { (2 * ll - 1).sqrt() } else { 0 };
    let mut peeler = Peeler {
        a0: reference_ample(),
        gens: Vec::new(),
        coeffs: Vec::new(),
        max_gens: 0,
        nodes: 0,
    };
    for max_gens in 1..=crate::lattice::RANK {
        peeler.max_gens = max_gens;
        peeler.gens.clear();
        peeler.coeffs.clear();
        if peeler.peel(l.num())? {
            return Ok(canonical_order(&peeler.gens, &peeler.coeffs, pairing_bound));
        }
    }
    Err(InvariantsError::SearchExhausted { bound: pairing_bound })
}

fn canonical_order(gens: &[NumClass], coeffs: &[i64], pairing_bound: i64) -> IsotropicDecomposition {
    let twos = double_edges(gens).expect("pattern checked during search");
    let mut head: Vec<usize> = Vec::new();
    let configuration = match twos.len() {
        0 => ConfigLabel::ConfigI,
        1 => {
            let mut pair = [twos[0].0, twos[0].1];
            pair.sort_by(|&a, &b| gens[b].cmp(&gens[a]));
            head.extend(pair);
            ConfigLabel::ConfigII
        }
        _ => {
            let (a, b) = (twos[0], twos[1]);
            let center = if a.0 == b.0 || a.0 == b.1 { a.0 } else { a.1 };
            let mut leaves: Vec<usize> = [a.0, a.1, b.0, b.1].into_iter().filter(|&i| i != center).collect();
            leaves.sort_by(|&x, &y| gens[y].cmp(&gens[x]));
            head.push(center);
            head.extend(leaves);
            ConfigLabel::ConfigIII
        }
    };
    let mut rest: Vec<usize> = (0..gens.len()).filter(|i| !head.contains(i)).collect();
    rest.sort_by(|&x, &y| gens[y].cmp(&gens[x]));
    head.extend(rest);
    IsotropicDecomposition {
        generators: head.iter().map(|&i| DivisorClass::from_num(gens[i].clone())).collect(),
        coefficients: head.iter().map(|&i| coeffs[i]).collect(),
        configuration,
        pairing_bound,
    }
}
