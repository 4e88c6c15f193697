mod common;

use common::{random_class, random_permutation, random_stratum};
use mumford_core::strata::{build_stratum, canonical_form, canonical_form_exhaustive, ClassDoc};
use mumford_core::TautClass;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn canonical_form_ignores_vertex_order(seed in any::<u64>(), perm_seed in any::<u64>()) {
        let Some(s) = random_stratum(seed, 6, 2, 3) else { return Ok(()) };
        let perm = random_permutation(perm_seed, s.vertices().len());
        let t = s.relabel(&perm);
        let a = canonical_form(&s);
        let b = canonical_form(&t);
        prop_assert_eq!(&a.stratum, &b.stratum);
        prop_assert_eq!(a.automorphisms, b.automorphisms);
        // the exhaustive search picks its own representative; compare the
        // two through it
        let e = canonical_form_exhaustive(&s);
        let f = canonical_form_exhaustive(&t);
        prop_assert_eq!(&e.stratum, &f.stratum);
        prop_assert_eq!(&canonical_form_exhaustive(&a.stratum).stratum, &e.stratum);
        prop_assert_eq!(a.automorphisms, e.automorphisms);
    }
}

proptest! {
    #[test]
    fn spec_round_trip(seed in any::<u64>()) {
        let Some(s) = random_stratum(seed, 5, 2, 3) else { return Ok(()) };
        let back = build_stratum(&s.to_spec()).unwrap();
        prop_assert_eq!(canonical_form(&back).stratum, canonical_form(&s).stratum);
    }

    #[test]
    fn class_json_round_trip(seed in any::<u64>(), g in 1u32..3) {
        let c = random_class(seed, g, 2, 4);
        let text = serde_json::to_string(&c).unwrap();
        let back: TautClass = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }
}

#[test]
fn json_schema_shape() {
    let c = mumford_core::builders::theorem_rhs(2).unwrap();
    let v: serde_json::Value = serde_json::to_value(&c).unwrap();
    assert_eq!(v["ambient"]["genus"], 2);
    assert_eq!(v["ambient"]["markings"], serde_json::json!([1]));
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 2);
    for t in terms {
        assert!(t["coeff"].is_string());
        assert!(t["automorphisms"].is_u64());
        assert!(t["graph"]["vertices"].is_array());
        assert!(t["graph"]["edges"].is_array());
        assert!(t["graph"]["decorations"].is_array());
    }
    let doc: ClassDoc = serde_json::from_value(v).unwrap();
    assert_eq!(TautClass::try_from(doc).unwrap(), c);
}
