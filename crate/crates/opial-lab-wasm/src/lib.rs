//! Browser bindings for the opial-lab toolkit.
//!
//! Three entry points back the demo page, each mirroring a CLI
//! subcommand and returning a JSON string (the JS side owns parsing and
//! plotting; numbers stay f64 end to end):
//!
//! * [`ground_state`] — Emden–Fowler profile with diagnostics;
//! * [`constant_comparison`] — maximized vs closed-form vs printed
//!   interpolation constants;
//! * [`inequality_playground`] — a seeded random trial function run
//!   through every inequality check.
//!
//! Library errors surface as rejected promises / thrown `Error`s with
//! the library's diagnostic message.

use opial_lab::emdenfowler;
use opial_lab::funcspace::SineSeries;
use opial_lab::inequalities;
use opial_lab::variational;
use serde_json::json;
use wasm_bindgen::prelude::*;

fn err(e: opial_lab::Error) -> String {
    e.to_string()
}

/// Computes the positive symmetric ground state of -u'' = mu * u^p on
/// [0, L] and returns its samples plus diagnostics.
///
/// Uses the first-integral construction (exact amplitude relation, no
/// iteration) for p > 1 and the closed-form sine arch at p = 1, where mu
/// must sit on the eigenvalue pi^2 / L^2.
#[wasm_bindgen]
pub fn ground_state(p: f64, mu: f64, l: f64, n: usize) -> Result<String, String> {
    let profile = if p == 1.0 {
        emdenfowler::shoot(p, mu, l, 1e-8, n.max(64)).map_err(err)?
    } else {
        let product = emdenfowler::mu_amplitude_product(p, l).map_err(err)?;
        let amplitude = (product / mu).powf(1.0 / (p - 1.0));
        emdenfowler::profile_from_first_integral(p, l, amplitude, n.max(64)).map_err(err)?
    };
    let values = profile.profile.values();
    let h = l / (values.len() - 1) as f64;
    let x: Vec<f64> = (0..values.len()).map(|i| i as f64 * h).collect();
    let doc = json!({
        "p": profile.p,
        "length": profile.length,
        "mu": profile.mu,
        "amplitude": profile.amplitude,
        "energy": profile.energy,
        "nonlinear_mass": profile.nonlinear_mass,
        "residuals": profile.residuals,
        "x": x,
        "u": values,
    });
    Ok(doc.to_string())
}

/// Runs the inverse-iteration maximizer and reports all three constants
/// with their relative differences and the discrete maximizer samples.
#[wasm_bindgen]
pub fn constant_comparison(p: f64, l: f64, n: usize) -> Result<String, String> {
    let report = variational::maximize(
        p,
        l,
        n.clamp(64, 1 << 14),
        variational::DEFAULT_TOL,
        variational::DEFAULT_MAX_ITER,
    )
    .map_err(err)?;
    serde_json::to_string(&report).map_err(|e| e.to_string())
}

/// Draws the seeded random sine series and evaluates every inequality
/// check on it.  The interpolation check uses the closed-form constant
/// for the requested exponent; the mean-zero check runs on the even-mode
/// part of the series (the part with exactly zero mean).
#[wasm_bindgen]
pub fn inequality_playground(
    modes: usize,
    decay: f64,
    seed: u32,
    l: f64,
    p: f64,
) -> Result<String, String> {
    let u = SineSeries::sample_random(modes.clamp(1, 64), decay, u64::from(seed), l)
        .map_err(err)?;
    let c = variational::closed_form_constant(p, l).map_err(err)?;

    let mut checks = vec![inequalities::wirtinger_check(&u)];
    checks.push(inequalities::opial_check(&u).map_err(err)?);
    checks.extend(inequalities::chain_check(&u));
    checks.push(inequalities::interpolation_check(&u, p, c).map_err(err)?);

    let even: Vec<f64> = u
        .coeffs()
        .iter()
        .enumerate()
        .map(|(idx, a)| if (idx + 1) % 2 == 0 { *a } else { 0.0 })
        .collect();
    let v = SineSeries::new(l, even).map_err(err)?;
    checks.push(inequalities::mean_zero_check(&v).map_err(err)?);

    let samples = 513usize;
    let x: Vec<f64> = (0..samples)
        .map(|i| l * i as f64 / (samples - 1) as f64)
        .collect();
    let mut uu = Vec::with_capacity(samples);
    let mut vv = Vec::with_capacity(samples);
    for &xi in &x {
        uu.push(u.eval(xi).map_err(err)?);
        vv.push(v.eval(xi).map_err(err)?);
    }

    let doc = json!({
        "coeffs": u.coeffs(),
        "x": x,
        "u": uu,
        "even_part": vv,
        "checks": checks,
    });
    Ok(doc.to_string())
}
