//! wasm-bindgen entry points for the static page in `www/`. Each returns the same JSON as the CLI.

use bhmirror::catalog::Case;
use bhmirror::symmetry::DEFAULT_GROUP_CAP;
use bhmirror_cli::{cmd_analyze, cmd_table, cmd_verify, error_output, Format, Options, Output, VerifyTarget};
use wasm_bindgen::prelude::*;

fn opts(weights: bool, diamonds: bool) -> Options {
    Options { format: Format::Json, weights, diamonds, cap: DEFAULT_GROUP_CAP }
}

fn text(r: bhmirror::Result<Output>) -> String {
    r.unwrap_or_else(|e| error_output(&e, Format::Json)).text
}

fn case(polynomial: &str, k: &str) -> Case {
    let group = if k.trim().is_empty() { "min" } else { k.trim() };
    Case { name: "input".into(), polynomial: polynomial.into(), group: group.into() }
}

/// Weights, degree, atoms and symmetry groups.
#[wasm_bindgen]
pub fn analyze(polynomial: &str) -> String {
    text(cmd_analyze(polynomial, None, &opts(false, false)))
}

/// Sector grid of `x0^k + f` with invariance group `k` (`min`, `trivial`, `SL`, ...).
#[wasm_bindgen]
pub fn table(polynomial: &str, k: &str, weights: bool, diamonds: bool) -> String {
    text(cmd_table(&case(polynomial, k), &opts(weights, diamonds)))
}

/// All mirror checks for `x0^k + f`, or Krawitz duality when the polynomial has no `x0^k` summand.
#[wasm_bindgen]
pub fn verify(polynomial: &str, k: &str) -> String {
    let target = match bhmirror::InvertiblePolynomial::parse(polynomial) {
        Ok(p) if p.split_cyclic().is_ok() => VerifyTarget::Cases(vec![case(polynomial, k)]),
        Ok(_) => VerifyTarget::Polynomial(polynomial.into()),
        Err(e) => return error_output(&e, Format::Json).text,
    };
    text(cmd_verify(&target, false, &opts(false, false)))
}
