use patchmatch_wasm::{design_json, match_json, sweep_json};
use serde_json::Value;

const REF: &str = r#"{"epsilon_r": 4.32, "h_mm": 1.52, "tan_delta": 0.018, "sigma": 1.83e7,
    "f0_ghz": 2.45, "w_mm": 35, "l_mm": 28.95, "n_points": 51}"#;

#[test]
fn design_round_trip() {
    let v: Value = serde_json::from_str(&design_json(REF).unwrap()).unwrap();
    assert!((v["analyzed_w_mm"].as_f64().unwrap() - 35.0).abs() < 1e-9);
}

#[test]
fn bare_sweep_has_requested_points() {
    let v: Value = serde_json::from_str(&sweep_json(REF).unwrap()).unwrap();
    assert_eq!(v["curve"].as_array().unwrap().len(), 51);
}

#[test]
fn match_curve_equals_fixed_layout_sweep() {
    let v: Value = serde_json::from_str(&match_json(REF).unwrap()).unwrap();
    assert_eq!(v["report"]["achieved"], true);
    let n = v["report"]["n_fingers"].as_u64().unwrap();
    let l = v["report"]["finger_length_mm"].as_f64().unwrap();
    let fixed = REF.replace(
        "\"n_points\": 51",
        &format!("\"n_points\": 51, \"n_fingers\": {n}, \"finger_length_mm\": {l}"),
    );
    let s: Value = serde_json::from_str(&sweep_json(&fixed).unwrap()).unwrap();
    assert_eq!(s["curve"], v["sweep"]["curve"]);
}

#[test]
fn bad_inputs_are_reported() {
    assert!(design_json("{}").is_err());
    assert!(design_json(r#"{"epsilon_r": 0.5, "h_mm": 1.52, "f0_ghz": 2.45}"#).is_err());
}
