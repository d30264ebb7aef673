//! Brill-Noether arithmetic for pencils on curves in `|L|`: the expected
//! dimension ρ, the predicted dimension of `W¹_d`, an exhaustive auditor of
//! destabilizing decompositions `L = M + N`, and the dimension counts that
//! bound the locus of non-stable Lazarsfeld-Mukai bundles.

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::invariants::{decompose_isotropic, gonality, GonalityReport, InvariantsError};
use crate::lattice::{
    embed_configuration, ConfigLabel, ConfigurationPresentation, DivisorClass, IntersectionForm, LatticeError,
};
use crate::positivity::{classify_positivity, cohomology};
use crate::shortvec::{enumerate_short, project_complement, ShortVecError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BnError {
    #[error("class is not ample")]
    NotAmple,
    #[error("degree {d} outside the range {lo}..={hi}")]
    RangeError { d: i64, lo: i64, hi: i64 },
    #[error("hypotheses do not apply: {0}")]
    HypothesisViolation(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Invariants(#[from] InvariantsError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    ShortVec(#[from] ShortVecError),
}

/// `ρ(g, r, d) = g − (r+1)(g − d + r)`.
pub fn rho(g: i64, r: i64, d: i64) -> i64 {
    g - (r + 1) * (g - d + r)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum HypothesisStatus {
    Applies,
    FailsHypothesis {
        reason: String,
        #[serde(rename = "infinitePencils")]
        infinite_pencils: bool,
    },
    EmptyRange,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BnRow {
    pub d: i64,
    pub rho: i64,
    pub predicted_dim: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BnPrediction {
    pub genus: i64,
    pub k: i64,
    pub rows: Vec<BnRow>,
    pub status: HypothesisStatus,
    pub gonality: GonalityReport,
}

/// `L ≡ n·B` with `n ≥ 3` and `B = E₁ + E₂`, `E₁·E₂ = 2`.
fn is_multiple_of_config_ii_pair(l: &DivisorClass) -> Result<bool, BnError> {
    let (c, b) = l.num().content()?;
    if c < 3 {
        return Ok(false);
    }
    let b = DivisorClass::new(b, false)?;
    if b.square() != 4 {
        return Ok(false);
    }
    let dec = decompose_isotropic(&b)?;
    Ok(dec.configuration == ConfigLabel::ConfigII && dec.coefficients == [1, 1])
}

pub fn predict_w1d(l: &DivisorClass) -> Result<BnPrediction, BnError> {
    if !classify_positivity(l).is_ample {
        return Err(BnError::NotAmple);
    }
    let rep = gonality(l)?;
    let (g, k, two_phi) = (rep.genus, rep.k, 2 * rep.phi.value);
    let fails = |reason: &str, infinite_pencils: bool| HypothesisStatus::FailsHypothesis {
        reason: reason.to_string(),
        infinite_pencils,
    };
    let status = if rep.mu.value == Some(k) && k < two_phi {
        fails("k = mu < 2phi", is_multiple_of_config_ii_pair(l)?)
    } else if k != two_phi {
        fails("k < 2phi", false)
    } else if rep.mu.value.is_some_and(|m| m <= two_phi) {
        fails("mu <= 2phi", false)
    } else if 2 * k > g {
        HypothesisStatus::EmptyRange
    } else {
        HypothesisStatus::Applies
    };
    let rows = if status == HypothesisStatus::Applies {
        (k..=g - k).map(|d| BnRow { d, rho: rho(g, 1, d), predicted_dim: d - k }).collect()
    } else {
        Vec::new()
    };
    Ok(BnPrediction { genus: g, k, rows, status, gonality: rep })
}

/// Numerical conditions on a decomposition `L = M + N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DestabChecklist {
    /// `h⁰(N) ≥ 2`
    pub a: bool,
    /// `M² > 0` and `h⁰(M) ≥ 2`
    pub b: bool,
    /// `h¹(M) = 0` and `h²(M) = 0`
    pub c: bool,
    /// Constrains the pencil, not `(M, N)`; not modeled.
    pub d: Option<bool>,
    /// `ℓ = 0`, or `h¹(N) = 0` and `N² > 0`
    pub e: bool,
    /// `h²(M − N) = 0` unless `M ∼ N + K_S`
    pub h2_m_minus_n: bool,
    /// `h⁰(N − M) = 0` unless `M ∼ N`
    pub h0_n_minus_m: bool,
    /// Only for `N² = 2`: `ℓ ≤ 2` and `N·L − ℓ ≥ k`, from the base points of
    /// the pencil `|N|` and the gonality of `C`. Informational, not a filter.
    pub pencil: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DestabCandidate {
    pub m: DivisorClass,
    pub n: DivisorClass,
    pub d: i64,
    pub ell: i64,
    pub mn: i64,
    pub checklist: DestabChecklist,
}

fn checklist(m: &DivisorClass, n: &DivisorClass, ell: i64, k: i64) -> DestabChecklist {
    let hm = cohomology(m);
    let hn = cohomology(n);
    let m_minus_n = m - n;
    let h2_m_minus_n = cohomology(&m_minus_n).h2 == 0 || *m == n.plus_canonical();
    let h0_n_minus_m = cohomology(&(n - m)).h0 == 0 || m == n;
    DestabChecklist {
        a: hn.h0 >= 2,
        b: m.square() > 0 && hm.h0 >= 2,
        c: hm.h1 == 0 && hm.h2 == 0,
        d: None,
        e: ell == 0 || (hn.h1 == 0 && n.square() > 0),
        h2_m_minus_n,
        h0_n_minus_m,
        pencil: (n.square() == 2).then(|| ell <= 2 && n.dot(&(m + n)) - ell >= k),
    }
}

/// Degree range `k..=g−k` for `L`, with its gonality report.
fn degree_range(l: &DivisorClass, d: i64) -> Result<GonalityReport, BnError> {
    if !classify_positivity(l).is_ample {
        return Err(BnError::NotAmple);
    }
    let rep = gonality(l)?;
    let (lo, hi) = (rep.k, rep.genus - rep.k);
    if d < lo || d > hi {
        return Err(BnError::RangeError { d, lo, hi });
    }
    Ok(rep)
}

/// Every `L = M + N` (both torsion decorations of `N`) passing the numerical
/// conditions (a), (b), (c), (e) with `M·N ≤ d` and `M·L ≥ N·L`.
///
/// Writing `N = aL + N⊥`, the conditions `N² ≥ 0`, `M·N ≤ d` and `a ≤ 1/2`
/// force `−(N⊥)² ≤ d²/L²`, so the search is a single short-vector enumeration
/// in the complement followed by lifting at every admissible `N²`.
pub fn enumerate_destab(l: &DivisorClass, d: i64) -> Result<Vec<DestabCandidate>, BnError> {
    let k = degree_range(l, d)?.k;
    let form = IntersectionForm::canonical();
    let ll = l.square();
    let proj = project_complement(form, l.num())?;
    let bound = Ratio::new(d * d, ll);
    let mut zs = enumerate_short(proj.qperp(), bound)?.vectors;
    zs.push(vec![0; proj.qperp().rank()]);
    let mut out = Vec::new();
    for z in &zs {
        for s in (0..=ll / 4).step_by(2) {
            let Some(x) = proj.lift(z, s) else { continue };
            let t = form.pair_coords(x.coords(), l.coords());
            if t < 1 || 2 * t > ll {
                continue;
            }
            for torsion in [false, true] {
                let n = DivisorClass::new(x.clone(), torsion)?;
                let m = l - &n;
                let mn = m.dot(&n);
                if mn > d || !classify_positivity(&n).is_effective {
                    continue;
                }
                if 2 * t == ll && m < n {
                    continue;
                }
                let ell = d - mn;
                let checklist = checklist(&m, &n, ell, k);
                if checklist.a && checklist.b && checklist.c && checklist.e {
                    out.push(DestabCandidate { m, n, d, ell, mn, checklist });
                }
            }
        }
    }
    out.sort_by(|p, q| (p.mn, &p.n, &p.m).cmp(&(q.mn, &q.n, &q.m)));
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MnBound {
    pub min_mn: Option<i64>,
    pub k: i64,
    pub holds: bool,
    pub candidates: usize,
    /// Minimum over candidates whose `pencil` check does not fail.
    pub min_mn_refined: Option<i64>,
    pub holds_refined: bool,
}

/// Smallest `M·N` over [`enumerate_destab`], compared with `k − 1`.
pub fn check_mn_bound(l: &DivisorClass, d: i64) -> Result<MnBound, BnError> {
    let pred = predict_w1d(l)?;
    if pred.status != HypothesisStatus::Applies {
        return Err(BnError::HypothesisViolation(format!("{:?}", pred.status)));
    }
    let list = enumerate_destab(l, d)?;
    let min_mn = list.iter().map(|c| c.mn).min();
    let min_mn_refined = list.iter().filter(|c| c.checklist.pencil != Some(false)).map(|c| c.mn).min();
    Ok(MnBound {
        min_mn,
        k: pred.k,
        holds: min_mn.is_none_or(|m| m >= pred.k - 1),
        candidates: list.len(),
        min_mn_refined,
        holds_refined: min_mn_refined.is_none_or(|m| m >= pred.k - 1),
    })
}

/// `M·N − E·(M − N)`, an upper bound for the Clifford index of `(M + E)|_C`.
pub fn cliff_chain_bound(m: &DivisorClass, n: &DivisorClass, e: &DivisorClass) -> Result<i64, BnError> {
    if e.square() != 0 || !e.num().is_primitive() || !classify_positivity(e).is_effective {
        return Err(BnError::HypothesisViolation("E must be primitive, isotropic and effective".into()));
    }
    let gap = e.dot(&(m - n));
    if gap < 1 {
        return Err(BnError::HypothesisViolation(format!("E.(M-N) = {gap} < 1")));
    }
    let bound = m.dot(n) - gap;
    debug_assert!(bound < m.dot(n));
    Ok(bound)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ParamCountAudit {
    pub g: i64,
    pub d: i64,
    pub mn: i64,
    pub i: i64,
    pub ell: i64,
    pub h1_mn: i64,
    pub h2_mn: i64,
    pub k: i64,
    /// Dimension of the extension space.
    pub ext_dim: i64,
    /// Bound on the dimension of the family of pairs (ξ, extension class).
    pub p_dim: i64,
    pub e: i64,
    pub gr_dim: i64,
    pub chi_mn: i64,
    pub h0_mn: i64,
    pub total_bound: i64,
    pub theorem_bound: i64,
}

/// The dimension count for pencils whose bundle destabilizes along `(M, N)`.
///
/// `h1_mn`, `h2_mn` are `h¹`, `h²` of `M − N`; `i = h¹` of the bundle.
#[allow(clippy::too_many_arguments)]
pub fn param_count(
    g: i64,
    d: i64,
    mn: i64,
    i: i64,
    ell: i64,
    h1_mn: i64,
    h2_mn: i64,
    k: i64,
) -> Result<ParamCountAudit, BnError> {
    if !(0..=2).contains(&i) {
        return Err(BnError::InvalidArgument(format!("i = {i} must lie in 0..=2")));
    }
    if ell < 0 || ell != d - mn {
        return Err(BnError::InvalidArgument(format!("ell = {ell} must equal d - MN = {} >= 0", d - mn)));
    }
    let ext_dim = ell + h1_mn - h2_mn - 1;
    let p_dim = 3 * d - 3 * mn - 2 * i + h1_mn - h2_mn - 1;
    let e = g + 1 - d + i;
    let gr_dim = 2 * e - 4;
    let chi_mn = g - 2 * mn;
    let h0_mn = chi_mn + h1_mn - h2_mn;
    let total_bound = p_dim + gr_dim - h0_mn + 1;
    Ok(ParamCountAudit {
        g,
        d,
        mn,
        i,
        ell,
        h1_mn,
        h2_mn,
        k,
        ext_dim,
        p_dim,
        e,
        gr_dim,
        chi_mn,
        h0_mn,
        total_bound,
        theorem_bound: g - 1 + d - k,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StableAudit {
    pub moduli_dim: i64,
    pub w_bound: i64,
}

/// Expected dimension `4d − 2g − 1` of the moduli space of stable bundles with
/// `c₁² = 2g − 2`, `c₂ = d`, and the resulting bound `2d − g` on `dim W¹_d`.
pub fn stable_case_audit(g: i64, d: i64) -> Result<StableAudit, BnError> {
    if d < 1 || g < 2 {
        return Err(BnError::InvalidArgument(format!("need d >= 1 and g >= 2, got g = {g}, d = {d}")));
    }
    Ok(StableAudit { moduli_dim: 4 * d - 2 * g - 1, w_bound: 2 * d - g })
}

/// `2d − g ≤ d − k` exactly when `d ≤ g − k`.
pub fn stable_bound_matches_range(g: i64, d: i64, k: i64) -> bool {
    (2 * d - g <= d - k) == (d <= g - k)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Example51Report {
    pub n: i64,
    pub lsq: i64,
    pub g: i64,
    pub phi: i64,
    pub k: i64,
    pub gon_special: i64,
    pub plane_genus: i64,
    pub cs_bound: i64,
    pub cs_holds: bool,
    pub pencil_family_dim: i64,
    /// `L·B − 2` for `B = E₁ + E₂`, an upper bound for μ.
    pub mu_witness: i64,
    pub case_label: &'static str,
}

/// `L = n(E₁ + E₂)` with `E₁·E₂ = 2`; φ and `k` come from the live search.
pub fn example_5_1(n: i64) -> Result<Example51Report, BnError> {
    if n < 3 {
        return Err(BnError::InvalidArgument(format!("n = {n}, need n >= 3")));
    }
    let gens = embed_configuration(&ConfigurationPresentation::config_ii(2)?)?;
    let b = DivisorClass::new(&gens[0] + &gens[1], false)?;
    let l = n * &b;
    let rep = gonality(&l)?;
    let lsq = l.square();
    let g = lsq / 2 + 1;
    let gon_special = l.dot(&b) - 4;
    let plane_genus = (n - 1) * (n - 2) / 2;
    let cs_bound = 4 * plane_genus + 3 * (gon_special - 1);
    Ok(Example51Report {
        n,
        lsq,
        g,
        phi: rep.phi.value,
        k: rep.k,
        gon_special,
        plane_genus,
        cs_bound,
        cs_holds: g <= cs_bound,
        pencil_family_dim: 1,
        mu_witness: l.dot(&b) - 2,
        case_label: rep.case_label.as_str(),
    })
}
