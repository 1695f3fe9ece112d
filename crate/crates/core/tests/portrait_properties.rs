use normchain_core::{Depth, Portrait};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

const CASES: u32 = 100_000;

fn seed() -> u64 {
    std::env::var("NORMCHAIN_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(0x2019_0601)
}

fn config() -> Config {
    Config { cases: CASES, rng_seed: RngSeed::Fixed(seed()), failure_persistence: None, ..Config::default() }
}

fn portrait(n: u32) -> impl Strategy<Value = Portrait> {
    let d = Depth::new(n).unwrap();
    proptest::collection::vec(any::<bool>(), d.node_count())
        .prop_map(move |bits| Portrait::from_nodes(d, bits.iter().enumerate().filter(|b| *b.1).map(|b| b.0 + 1)))
}

macro_rules! depth_suite {
    ($name:ident, $n:expr) => {
        proptest! {
            #![proptest_config(config())]
            #[test]
            fn $name((a, b, c) in (portrait($n), portrait($n), portrait($n))) {
                let ab = &a * &b;
                prop_assert_eq!(ab.to_permutation(), a.to_permutation().then(&b.to_permutation()).unwrap());
                prop_assert_eq!(&ab * &c, &a * &(&b * &c));
                let d = Depth::new($n).unwrap();
                prop_assert_eq!(&Portrait::from_permutation(&a.to_permutation(), d).unwrap(), &a);
                prop_assert_eq!(&Portrait::from_hex(&a.to_hex()).unwrap(), &a);
                prop_assert!((&a * &a.inverse()).is_identity());
                prop_assert_eq!(a.inverse().to_permutation(), a.to_permutation().inverse());
            }
        }
    };
}

depth_suite!(depth_1, 1);
depth_suite!(depth_2, 2);
depth_suite!(depth_3, 3);
depth_suite!(depth_4, 4);
depth_suite!(depth_5, 5);
depth_suite!(depth_6, 6);
depth_suite!(depth_7, 7);
depth_suite!(depth_8, 8);
