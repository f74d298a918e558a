use std::path::PathBuf;

use frey::schema::{fixture_name, level_from_json_any, level_to_json, Space};
use frey_core::frey::Level;
use frey_core::heckedata::{BaseField, Provenance};

fn classical(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/classical").join(name)
}

#[test]
fn classical_fixtures_round_trip() {
    for (name, n) in [("S2_N196.json", 196), ("S2_N392.json", 392)] {
        let space = Space::load(&classical(name)).unwrap();
        assert_eq!(space.base, BaseField::Q);
        assert_eq!(space.level, Level::Rational(n));
        assert!(!space.records.is_empty());
        for r in &space.records {
            r.validate().unwrap();
            assert!(r.complete_below_norm >= 40, "{}", r.label);
        }
        let again = Space::parse(&space.render().unwrap(), Provenance::Fixture).unwrap();
        assert_eq!(again, space);
        assert_eq!(fixture_name(&space.level), name);
    }
}

#[test]
fn level_json_round_trip() {
    for level in [Level::Rational(196), Level::k(2, 1, 0), Level::k(3, 1, 1), Level::k(2, 1, 2), Level::k(2, 0, 2)] {
        assert_eq!(level_from_json_any(&level_to_json(&level)).unwrap(), level);
    }
}

#[test]
fn malformed_spaces_are_rejected() {
    let text = std::fs::read_to_string(classical("S2_N196.json")).unwrap();
    let wrong_field = text.replacen("\"field\": \"Q\"", "\"field\": \"K\"", 1);
    assert!(Space::parse(&wrong_field, Provenance::Fixture).is_err());
    let truncated = &text[..text.len() / 2];
    assert!(Space::parse(truncated, Provenance::Fixture).is_err());
}

#[test]
fn hilbert_file_names() {
    assert_eq!(fixture_name(&Level::k(1, 1, 0)), "S2_q2q3.json");
    assert_eq!(fixture_name(&Level::k(3, 1, 0)), "S2_q2cubed_q3.json");
    assert_eq!(fixture_name(&Level::k(1, 1, 1)), "S2_q2q3q7.json");
    assert_eq!(fixture_name(&Level::k(3, 1, 1)), "S2_q2cubed_q3q7.json");
    assert_eq!(fixture_name(&Level::k(2, 1, 2)), "S2_q2squared_q3q7squared.json");
    assert_eq!(fixture_name(&Level::k(2, 0, 2)), "S2_q2squared_q7squared.json");
}
