mod common;

use common::*;
use proptest::prelude::*;

fn check<T>(r: Result<T, String>) -> Result<(), TestCaseError> {
    match r {
        Ok(_) => Ok(()),
        Err(e) if is_overflow(&e) => Err(TestCaseError::reject(e)),
        Err(e) => Err(TestCaseError::fail(e)),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn three_definitions_agree(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = random_cat(&mut r);
        let m = chain(&c, &mut r, 3);
        check(definitions_agree(&c, &m))?;
        check(is_coset(&c, &m))?;
        check(suspension_law(&c, &m))?;
    }

    #[test]
    fn juggling_inclusions(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = random_cat(&mut r);
        let m = chain(&c, &mut r, 4);
        check(juggling(&c, &m))?;
    }

    #[test]
    fn op_view_is_self_dual(seed in any::<u64>(), n in 3usize..=4) {
        let mut r = rng(seed);
        let c = random_cat(&mut r);
        let m = chain(&c, &mut r, n);
        check(self_dual(&c, &m))?;
    }

    #[test]
    fn j_sequences_differ_by_sign(seed in any::<u64>(), n in 4usize..=5) {
        let mut r = rng(seed);
        let c = random_cat(&mut r);
        let m = chain(&c, &mut r, n);
        check(sign_law(&c, &m))?;
    }
}
