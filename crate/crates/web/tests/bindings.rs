use rkbench_web::{blueprint_text, classify_text, limits_text, MAX_LEN};

#[test]
fn classifies_tc_triple() {
    let out = classify_text("0,0,c", true, true).unwrap();
    assert!(out.contains("AdmissibleTc family 2"), "{out}");
}

#[test]
fn rejects_malformed_triple() {
    assert!(classify_text("0,0", true, true).is_err());
}

#[test]
fn single_model_system_stays_at_one_class() {
    let out = limits_text("lmt", "1", 3, 4).unwrap();
    assert!(out.ends_with("classes at L=4: 1"), "{out}");
    assert!(limits_text("lmt", "1", 3, MAX_LEN + 1).is_err());
    assert!(limits_text("nope", "1", 3, 2).is_err());
}

#[test]
fn chain_blueprint_checks_clean() {
    let spec = "theory: tc\nmode: finite\nelements: 2\n0 <= 1\nf: 0 = 1\n";
    let out = blueprint_text(spec, "finite").unwrap();
    assert!(out.contains("carrier name=A0"), "{out}");
    assert!(out.trim_end().ends_with("0 violations"), "{out}");
}

#[test]
fn invalid_spec_is_not_built() {
    let spec = "theory: tc\nmode: finite\nelements: 1\nf: 0 = w1\n";
    assert!(blueprint_text(spec, "finite").unwrap().ends_with("not built\n"));
}
