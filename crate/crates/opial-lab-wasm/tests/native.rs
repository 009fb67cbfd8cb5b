//! Host-side checks of the demo bindings: the wasm-bindgen exports are
//! ordinary functions off-wasm, so the JSON contract the front end parses
//! can be pinned here without a browser.

use opial_lab_wasm::{constant_comparison, ground_state, inequality_playground};

#[test]
fn ground_state_payload_shape() {
    let doc: serde_json::Value =
        serde_json::from_str(&ground_state(3.0, 1.0, 1.0, 512).unwrap()).unwrap();
    let x = doc["x"].as_array().unwrap();
    let u = doc["u"].as_array().unwrap();
    assert_eq!(x.len(), u.len());
    assert_eq!(x.len(), 513);
    assert!((doc["amplitude"].as_f64().unwrap() - 3.7081493546027438).abs() < 1e-6);
    assert!(doc["residuals"]["energy_identity"].as_f64().unwrap() < 1e-8);
    // Endpoints are hard zeros.
    assert_eq!(u.first().unwrap().as_f64().unwrap(), 0.0);
    assert_eq!(u.last().unwrap().as_f64().unwrap(), 0.0);
}

#[test]
fn ground_state_linear_case_requires_the_eigenvalue() {
    assert!(ground_state(1.0, 5.0, 1.0, 256).is_err());
    let doc: serde_json::Value = serde_json::from_str(
        &ground_state(1.0, std::f64::consts::PI.powi(2), 1.0, 256).unwrap(),
    )
    .unwrap();
    assert!((doc["amplitude"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn constant_comparison_payload_shape() {
    let doc: serde_json::Value =
        serde_json::from_str(&constant_comparison(1.0, 1.0, 256).unwrap()).unwrap();
    let c = doc["c_maximized"].as_f64().unwrap();
    assert!((c - 0.10132118364233777).abs() < 1e-4);
    assert!(doc["rel_diff_max_printed"].as_f64().unwrap() > 0.5);
    let values = doc["maximizer"]["values"].as_array().unwrap();
    assert_eq!(values.len(), 257);
    assert!(doc["converged"].as_bool().unwrap());
}

#[test]
fn playground_checks_all_hold_on_a_seeded_series() {
    let doc: serde_json::Value =
        serde_json::from_str(&inequality_playground(8, 1.0, 7, 1.0, 3.0).unwrap()).unwrap();
    let checks = doc["checks"].as_array().unwrap();
    // wirtinger, opial, three chain links, interpolation, mean-zero.
    assert_eq!(checks.len(), 7);
    for check in checks {
        assert_eq!(
            check["holds"],
            serde_json::Value::Bool(true),
            "check failed: {check}"
        );
        assert!(check["margin"].as_f64().unwrap() >= 0.0);
    }
    assert_eq!(doc["x"].as_array().unwrap().len(), 513);
    assert_eq!(
        doc["u"].as_array().unwrap().len(),
        doc["even_part"].as_array().unwrap().len()
    );
}
