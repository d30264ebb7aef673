//! Effectivity, nefness, ampleness and cohomology of divisor classes on an
//! unnodal Enriques surface, decided from intersection numbers alone.

use serde::Serialize;

use crate::lattice::{class_f, class_g, DivisorClass};

/// Why a class got its positivity status.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PositivityWitness {
    NumericallyTrivial,
    PositiveCone,
    IsotropicRay,
    NegativeSquare,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PositivityStatus {
    pub is_zero: bool,
    pub is_effective: bool,
    pub is_anti_effective: bool,
    pub is_nef: bool,
    pub is_ample: bool,
    pub witness: Option<PositivityWitness>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CohomologyProfile {
    pub h0: i64,
    pub h1: i64,
    pub h2: i64,
    pub chi: i64,
}

/// The fixed ample class `A₀ = f + g`.
pub fn reference_ample() -> DivisorClass {
    &class_f() + &class_g()
}

fn positive_side(d: &DivisorClass) -> bool {
    d.square() >= 0 && d.dot(&reference_ample()) > 0
}

pub fn classify_positivity(d: &DivisorClass) -> PositivityStatus {
    let sq = d.square();
    if d.is_numerically_trivial() {
        return PositivityStatus {
            is_zero: true,
            is_effective: false,
            is_anti_effective: false,
            is_nef: false,
            is_ample: false,
            witness: Some(PositivityWitness::NumericallyTrivial),
        };
    }
    let effective = positive_side(d);
    let anti = positive_side(&-d);
    let witness = match sq {
        s if s > 0 => PositivityWitness::PositiveCone,
        0 => PositivityWitness::IsotropicRay,
        _ => PositivityWitness::NegativeSquare,
    };
    PositivityStatus {
        is_zero: false,
        is_effective: effective,
        is_anti_effective: anti,
        is_nef: effective,
        is_ample: effective && sq > 0,
        witness: Some(witness),
    }
}

pub fn is_ample(d: &DivisorClass) -> bool {
    classify_positivity(d).is_ample
}

pub fn is_effective(d: &DivisorClass) -> bool {
    classify_positivity(d).is_effective
}

fn chi(d: &DivisorClass) -> i64 {
    d.square() / 2 + 1
}

/// `h¹` of an effective class with non-negative square.
fn h1_effective(d: &DivisorClass) -> i64 {
    if d.square() > 0 {
        return 0;
    }
    let (n, _) = d.num().content().expect("effective class is nonzero");
    if d.torsion() {
        if n >= 3 {
            (n - 1) / 2
        } else {
            0
        }
    } else {
        n / 2
    }
}

pub fn cohomology(d: &DivisorClass) -> CohomologyProfile {
    let chi = chi(d);
    if d.is_numerically_trivial() {
        return if d.torsion() {
            CohomologyProfile { h0: 0, h1: 0, h2: 1, chi }
        } else {
            CohomologyProfile { h0: 1, h1: 0, h2: 0, chi }
        };
    }
    let status = classify_positivity(d);
    if status.is_effective {
        let h1 = h1_effective(d);
        CohomologyProfile { h0: chi + h1, h1, h2: 0, chi }
    } else if status.is_anti_effective {
        // Serre duality: h^i(D) = h^{2-i}(K_S - D)
        let dual = &DivisorClass::canonical_class() - d;
        let h1 = h1_effective(&dual);
        CohomologyProfile { h0: 0, h1, h2: chi + h1, chi }
    } else {
        CohomologyProfile { h0: 0, h1: -chi, h2: 0, chi }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{NumClass, RANK};
    use proptest::prelude::*;

    fn class(v: &[i64], torsion: bool) -> DivisorClass {
        let mut c = v.to_vec();
        c.resize(RANK, 0);
        DivisorClass::new(NumClass::new(c), torsion).unwrap()
    }

    #[test]
    fn reference_ample_properties() {
        let a0 = reference_ample();
        assert_eq!(a0.square(), 2);
        assert_eq!(a0.dot(&class_f()), 1);
        assert_eq!(a0.dot(&class_g()), 1);
        assert!(classify_positivity(&a0).is_ample);
    }

    #[test]
    fn zero_and_isotropic() {
        assert!(classify_positivity(&DivisorClass::zero()).is_zero);
        let s = classify_positivity(&class_f());
        assert!(s.is_effective && s.is_nef && !s.is_ample);
        assert!(classify_positivity(&class(&[2, 4], false)).is_ample);
    }

    #[test]
    fn documented_profiles() {
        assert_eq!(
            cohomology(&class(&[2], false)),
            CohomologyProfile { h0: 2, h1: 1, h2: 0, chi: 1 }
        );
        // two orthogonal roots
        let d = class(&[0, 0, 1, 0, 0, 0, 0, 0, 0, 1], false);
        assert_eq!(d.square(), -4);
        assert_eq!(cohomology(&d), CohomologyProfile { h0: 0, h1: 1, h2: 0, chi: -1 });
        assert_eq!(
            cohomology(&DivisorClass::canonical_class()),
            CohomologyProfile { h0: 0, h1: 0, h2: 1, chi: 1 }
        );
        assert_eq!(
            cohomology(&DivisorClass::zero()),
            CohomologyProfile { h0: 1, h1: 0, h2: 0, chi: 1 }
        );
    }

    #[test]
    fn half_pencil_multiples() {
        for n in 1..=7i64 {
            let d = class(&[n], false);
            assert_eq!(cohomology(&d).h1, n / 2, "n = {n}");
            let dk = d.plus_canonical();
            let expected = if n >= 3 { (n - 1) / 2 } else { 0 };
            assert_eq!(cohomology(&dk).h1, expected, "n = {n} + K");
        }
    }

    fn any_class() -> impl Strategy<Value = DivisorClass> {
        (proptest::collection::vec(-5i64..=5, RANK), any::<bool>())
            .prop_map(|(c, t)| DivisorClass::new(NumClass::new(c), t).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn riemann_roch(d in any_class()) {
            let p = cohomology(&d);
            prop_assert!(p.h0 >= 0 && p.h1 >= 0 && p.h2 >= 0);
            prop_assert_eq!(p.h0 - p.h1 + p.h2, d.square() / 2 + 1);
            prop_assert_eq!(p.chi, d.square() / 2 + 1);
        }

        #[test]
        fn serre_duality(d in any_class()) {
            let dual = &DivisorClass::canonical_class() - &d;
            prop_assert_eq!(cohomology(&d).h0, cohomology(&dual).h2);
            prop_assert_eq!(cohomology(&d).h1, cohomology(&dual).h1);
        }

        #[test]
        fn effective_iff_sections(d in any_class()) {
            prop_assume!(!d.is_numerically_trivial());
            prop_assert_eq!(classify_positivity(&d).is_effective, cohomology(&d).h0 > 0);
        }

        #[test]
        fn dichotomy_and_exclusivity(d in any_class()) {
            let s = classify_positivity(&d);
            let neither = !s.is_zero && !s.is_effective && !s.is_anti_effective;
            let count = [s.is_zero, s.is_effective, s.is_anti_effective, neither]
                .iter()
                .filter(|b| **b)
                .count();
            prop_assert_eq!(count, 1);
            if !s.is_zero && d.square() >= 0 {
                prop_assert!(s.is_effective != s.is_anti_effective);
            }
            if s.is_ample {
                prop_assert!(s.is_nef);
            }
            if s.is_nef {
                prop_assert!(s.is_effective);
            }
            prop_assert_eq!(s, classify_positivity(&d.plus_canonical()));
        }
    }
}
