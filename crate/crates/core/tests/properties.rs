mod common;

use common::{case, PROPERTIES};
use proptest::prelude::*;

fn check(name: &str, c: &common::Case) -> Result<(), TestCaseError> {
    let (_, f) = PROPERTIES.iter().find(|(n, _)| *n == name).unwrap();
    f(c).map_err(TestCaseError::fail)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn leibniz(c in case()) { check("leibniz", &c)?; }

    #[test]
    fn anticommutation(c in case()) { check("anticommutation", &c)?; }

    #[test]
    fn nilpotence(c in case()) { check("nilpotence", &c)?; }

    #[test]
    fn normal_form(c in case()) { check("normal-form", &c)?; }

    #[test]
    fn graded_commutativity(c in case()) { check("graded-commutativity", &c)?; }
}
