use runnerlab::certificates::Effort;
use runnerlab::config::{RunConfig, CONFIG_ENV};

#[test]
fn config_path_from_environment() {
    let path = std::env::temp_dir().join(format!("runnerlab-env-{}.json", std::process::id()));
    std::fs::write(&path, r#"{"effort": "exhaustive", "rng_seed": 9}"#).unwrap();
    std::env::set_var(CONFIG_ENV, &path);
    let c = RunConfig::load(None).unwrap();
    assert_eq!((c.effort, c.rng_seed), (Effort::Exhaustive, 9));

    std::env::set_var(CONFIG_ENV, path.with_extension("missing"));
    assert!(RunConfig::load(None).is_err());
    std::env::remove_var(CONFIG_ENV);
    assert_eq!(RunConfig::load(None).unwrap(), RunConfig::default());
}
