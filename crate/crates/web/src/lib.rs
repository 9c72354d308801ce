//! Browser bindings for three operations: triple classification, limit-model
//! class counting, and blueprint construction with its replay check.
//!
//! Each binding delegates to a plain Rust function returning
//! `Result<String, String>` so the logic is testable off the browser.

use wasm_bindgen::prelude::*;

use rkbench::distribution::TheoryClass;
use rkbench::limitcount::{count_classes, IdentitySystem, PlateauReading};
use rkbench::{build_blueprint, check_blueprint, classify_triple, validate_f, Cardinal, Cm3Triple, DistributionSpec, Variant};

/// Largest word length the page will enumerate.
pub const MAX_LEN: usize = 8;

pub fn classify_text(triple: &str, tc: bool, ch: bool) -> Result<String, String> {
    let t = triple.parse::<Cm3Triple>().map_err(|e| e.to_string())?;
    let class = if tc { TheoryClass::Tc } else { TheoryClass::Small };
    let c = classify_triple(t, class, ch);
    let mut out = format!("{t} ({class}, CH {}): {}", if ch { "on" } else { "off" }, c.verdict);
    if !c.families.is_empty() {
        let fams: Vec<String> = c.families.iter().map(u8::to_string).collect();
        out.push_str(&format!("\nmatching families: {}", fams.join(", ")));
    }
    if c.outside_ch {
        out.push_str("\nuses w1 outside CH");
    }
    if c.unrealized {
        out.push_str("\nno realizing construction");
    }
    Ok(out)
}

pub fn limits_text(system: &str, n: &str, alphabet: u32, len: usize) -> Result<String, String> {
    if len > MAX_LEN {
        return Err(format!("length {len} exceeds {MAX_LEN}"));
    }
    let n = n.parse::<Cardinal>().map_err(|e| e.to_string())?;
    let sys = match system {
        "lmt" => IdentitySystem::limit_over_type(n),
        "lms" => IdentitySystem::limit_over_sequence(n, PlateauReading::StrictBound),
        "free" => Ok(IdentitySystem::empty()),
        other => return Err(format!("unknown system `{other}`")),
    }
    .map_err(|e| e.to_string())?;
    let mut out = format!("{} over {alphabet} letters, target {}\n", sys.name, sys.target);
    let mut prev = None;
    for l in 1..=len {
        let c = count_classes(&sys, alphabet, l).map_err(|e| e.to_string())?;
        let reps: Vec<String> = c.representatives.iter().take(12).map(|w| w.to_string()).collect();
        let more = if c.representatives.len() > 12 { " ..." } else { "" };
        out.push_str(&format!("L={l}: {} classes  {}{more}\n", c.count, reps.join(" ")));
        prev = Some(c.count);
    }
    if let Some(p) = prev {
        out.push_str(&format!("classes at L={len}: {p}"));
    }
    Ok(out)
}

pub fn blueprint_text(spec: &str, variant: &str) -> Result<String, String> {
    let spec = DistributionSpec::parse(spec).map_err(|e| e.to_string())?;
    let variant = variant.parse::<Variant>().map_err(|e| e.to_string())?;
    let validation = validate_f(&spec).map_err(|e| e.to_string())?;
    let mut out = validation.render_human();
    if !validation.all_passed() {
        out.push_str("not built\n");
        return Ok(out);
    }
    let bp = build_blueprint(&spec, variant).map_err(|e| e.to_string())?;
    out.push('\n');
    out.push_str(&bp.to_text());
    out.push('\n');
    let check = check_blueprint(&spec, &bp).map_err(|e| e.to_string())?;
    out.push_str(&check.render_human());
    Ok(out)
}

#[wasm_bindgen]
pub fn classify(triple: &str, tc: bool, ch: bool) -> Result<String, JsError> {
    classify_text(triple, tc, ch).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn limits(system: &str, n: &str, alphabet: u32, len: usize) -> Result<String, JsError> {
    limits_text(system, n, alphabet, len).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn blueprint(spec: &str, variant: &str) -> Result<String, JsError> {
    blueprint_text(spec, variant).map_err(|e| JsError::new(&e))
}
