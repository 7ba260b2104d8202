use std::path::PathBuf;

use fresnel_channel::experiments::{fig1a_scenario, fig1b_scenario, fig2c_scenario, fig3_scenario, figs8_scenario};
use fresnel_channel::scenario::{load_scenario_file, Scenario};

fn shipped(name: &str) -> Scenario {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(name);
    load_scenario_file(&path).unwrap().scenario
}

#[test]
fn shipped_documents_match_builders() {
    assert_eq!(shipped("fig1a.toml"), fig1a_scenario());
    assert_eq!(shipped("fig1b.toml"), fig1b_scenario());
    assert_eq!(shipped("fig2c.toml"), fig2c_scenario());
    assert_eq!(shipped("fig3.toml"), fig3_scenario());
    assert_eq!(shipped("figs8.toml"), figs8_scenario());
}

#[test]
fn hashes_differ_between_scenes() {
    let hashes = [
        fig1a_scenario(),
        fig1b_scenario(),
        fig2c_scenario(),
        fig3_scenario(),
        figs8_scenario(),
    ]
    .map(|s| s.hash_hex());
    for i in 0..hashes.len() {
        for j in i + 1..hashes.len() {
            assert_ne!(hashes[i], hashes[j]);
        }
    }
}
