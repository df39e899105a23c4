mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: CASES, ..ProptestConfig::default() })]

    #[test]
    fn window_soundness_holds(a in window_args()) {
        window_soundness(a)?;
    }

    #[test]
    fn shift_group_law_holds(a in shift_args()) {
        shift_group_law(a)?;
    }

    #[test]
    fn log_exp_round_trip_holds(a in log_exp_args()) {
        log_exp_round_trip(a)?;
    }

    #[test]
    fn ye_k_independence_holds(a in ye_args()) {
        ye_k_independence(a)?;
    }

    #[test]
    fn rewrite_strategy_independence_holds(a in rewrite_args()) {
        rewrite_strategy_independence(a)?;
    }
}
