mod common;

use common::{random_class, random_stratum};
use mumford_core::ops::{
    dilaton_factor, forget_pullback, forget_pushforward, glue_classes, multiply_lambda, psi_multiply, PushMode,
};
use mumford_core::{Rational, TautClass};
use proptest::prelude::*;

fn combine(a: &TautClass, x: i64, b: &TautClass, y: i64) -> TautClass {
    let mut out = a.scale(&Rational::from(x));
    out.add_class(b, &Rational::from(y)).unwrap();
    out
}

fn linear<F>(op: F, a: &TautClass, b: &TautClass, x: i64, y: i64) -> Result<(), TestCaseError>
where
    F: Fn(&TautClass) -> mumford_core::Result<TautClass>,
{
    let (Ok(fa), Ok(fb), Ok(fab)) = (op(a), op(b), op(&combine(a, x, b, y))) else {
        return Ok(());
    };
    prop_assert!(fab.same_class(&combine(&fa, x, &fb, y)));
    Ok(())
}

proptest! {
    #[test]
    fn operators_are_linear(s1 in any::<u64>(), s2 in any::<u64>(), x in -3i64..4, y in -3i64..4, g in 1u32..3) {
        let a = random_class(s1, g, 3, 3);
        let b = random_class(s2, g, 3, 3);
        linear(|c| psi_multiply(c, 1), &a, &b, x, y)?;
        linear(|c| multiply_lambda(c, 1), &a, &b, x, y)?;
        linear(|c| forget_pullback(c, 4), &a, &b, x, y)?;
        linear(|c| forget_pushforward(c, 3, PushMode::Direct), &a, &b, x, y)?;
        linear(|c| forget_pushforward(c, 3, PushMode::Corrected), &a, &b, x, y)?;
    }

    #[test]
    fn degree_laws(seed in any::<u64>(), other in any::<u64>()) {
        let Some(s) = random_stratum(seed, 3, 2, 3) else { return Ok(()) };
        let c = TautClass::from_stratum(s.clone(), Rational::one());
        let d = s.codimension();
        let p = psi_multiply(&c, 1).unwrap();
        prop_assert!(p.codimension().is_none_or(|k| k == d + 1));
        let up = forget_pullback(&c, 9).unwrap();
        prop_assert!(up.codimension().is_none_or(|k| k == d));
        if c.ambient().without(3).is_stable() {
            if let Ok(down) = forget_pushforward(&c, 3, PushMode::Direct) {
                prop_assert!(down.codimension().is_none_or(|k| k + 1 == d));
            }
        }
        if let Some(t) = random_stratum(other, 2, 2, 2) {
            let right = TautClass::from_stratum(t.rename_marking(1, 7).rename_marking(2, 8), Rational::one());
            let glued = glue_classes(&c, 1, &right, 7).unwrap();
            prop_assert!(glued.codimension().is_none_or(|k| k == d + right.codimension().unwrap() + 1));
        }
    }

    /// π_*(π^*α) = 0 and π_*(ψ_p π^*α) = (2g − 2 + n) α.
    #[test]
    fn projection_round_trips(seed in any::<u64>(), g in 1u32..4) {
        let a = random_class(seed, g, 2, 3);
        let up = forget_pullback(&a, 3).unwrap();
        for mode in [PushMode::Direct, PushMode::Corrected] {
            let back = forget_pushforward(&up, 3, mode).unwrap();
            prop_assert!(back.expanded().is_zero(), "{mode:?}: {back}");
            let dil = forget_pushforward(&psi_multiply(&up, 3).unwrap(), 3, mode).unwrap();
            let k = Rational::from(dilaton_factor(g, 2));
            prop_assert!(dil.same_class(&a.scale(&k)), "{mode:?}: {dil} vs {a}");
        }
    }
}
