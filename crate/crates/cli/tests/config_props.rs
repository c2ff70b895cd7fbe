use proptest::prelude::*;

use skewlab_cli::config::{parse_config_text, parse_overrides};
use skewlab_cli::{ExperimentConfig, EXPERIMENTS};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn canonical_pairs_round_trip(
        exp in 0..EXPERIMENTS.len(),
        tau in 0.05f64..4.0,
        x0 in 0.0f64..1.0,
        y0 in -3.0f64..3.0,
        seed in any::<u64>(),
        limit in 10u64..10_000_000,
        m_max in 1usize..500,
    ) {
        let pairs: Vec<(String, String)> = vec![
            ("experiment".into(), EXPERIMENTS[exp].into()),
            ("tau".into(), format!("{tau:?}")),
            ("x0".into(), format!("{x0:?}")),
            ("y0".into(), format!("{y0:?}")),
            ("seed".into(), seed.to_string()),
            ("limit".into(), limit.to_string()),
            ("checkpoints".into(), limit.to_string()),
            ("m-max".into(), m_max.to_string()),
        ];
        let cfg = ExperimentConfig::from_pairs(&pairs).unwrap();
        prop_assert_eq!(cfg.tau, tau);
        prop_assert_eq!(cfg.x0, x0);
        prop_assert_eq!(cfg.y0, y0);
        let again = ExperimentConfig::from_pairs(&cfg.to_pairs()).unwrap();
        prop_assert_eq!(&again, &cfg);
        prop_assert_eq!(again.to_pairs(), cfg.to_pairs());
    }

    #[test]
    fn file_and_flags_agree(seed in any::<u64>(), b1 in 1u64..10, delta in 0.001f64..1.0) {
        let text = format!("# comment\nseed = {seed}\n\nb1 {b1}\ndelta = {delta:?}\n");
        let from_file = parse_config_text(&text).unwrap();
        let args: Vec<String> =
            ["--seed", &seed.to_string(), &format!("--b1={b1}"), "--delta", &format!("{delta:?}")].iter().map(|s| s.to_string()).collect();
        let from_flags = parse_overrides(&args).unwrap();
        prop_assert_eq!(from_file, from_flags);
    }
}
