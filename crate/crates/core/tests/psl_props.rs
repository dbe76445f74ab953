use gsokit_core::model::project_observation;
use gsokit_core::observations::is_stratified;
use gsokit_core::psl::{translate, verify_interpretation};
use gsokit_core::random::random_psl;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn interpretation_is_correct(seed in any::<u64>()) {
        let p = random_psl(&mut ChaCha8Rng::seed_from_u64(seed), 4, 3, 6);
        prop_assert_eq!(p.validate(), Ok(()));
        let observers = p.observers();
        prop_assert!(observers.len() <= 3);
        let t = translate(&p).unwrap();
        prop_assert_eq!(t.model.universe.observations.clone(), observers.clone());
        prop_assert_eq!(t.observer_map.keys().cloned().collect::<std::collections::BTreeSet<_>>(), observers.clone());
        prop_assert!(t.model.universe.events.is_empty());
        prop_assert_eq!(translate(&p).unwrap(), t.clone());
        for o in t.model.observation_ids() {
            prop_assert!(is_stratified(project_observation(&t.model, o).unwrap().order()).is_empty());
        }
        let report = verify_interpretation(&p).unwrap();
        if observers.is_empty() && p.activities.len() > 1 {
            // Nothing observed at all: completeness has no witnesses.
            prop_assert!(!report.is_empty());
        } else {
            prop_assert!(report.is_empty(), "{}", report);
        }
    }
}
