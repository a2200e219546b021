mod common;

use std::collections::BTreeMap;

use num_bigint::BigUint;
use tlsf::ast::Section;
use tlsf::elaborate::{elaborate, ElabOptions};
use tlsf::formula::Formula;
use tlsf::parser::{parse_expression_str, parse_spec};

use common::elab;

fn formula(src: &str) -> Formula {
    Formula::from_expr(&parse_expression_str(src).unwrap()).unwrap()
}

fn widths(name: &str, overrides: &[(&str, u32)]) -> BTreeMap<String, usize> {
    let e = elab(name, overrides);
    let mut out = BTreeMap::new();
    for s in e.inputs.iter().chain(&e.outputs) {
        let bus = s.split('[').next().unwrap().to_string();
        *out.entry(bus).or_insert(0) += 1;
    }
    out
}

/// Wraps declarations and one guarantee into a Mealy specification.
fn spec_with(global: &str, main_extra: &str, guarantee: &str) -> String {
    format!(
        "INFO {{ TITLE: \"t\" DESCRIPTION: \"d\" SEMANTICS: Mealy,Finite TARGET: Mealy }}
         GLOBAL {{ {global} }}
         MAIN {{ INPUTS {{ r[2]; }} OUTPUTS {{ g[2]; }} {main_extra} GUARANTEE {{ {guarantee}; }} }}"
    )
}

fn elab_src(src: &str) -> Result<tlsf::elaborate::ElaboratedSpec, String> {
    let spec = parse_spec(src).map_err(|d| format!("{d:?}"))?;
    elaborate(&spec, &ElabOptions::default()).map_err(|e| e.to_string())
}

#[test]
fn set_arithmetic_drives_widths() {
    let w = widths("sets_and_sums", &[]);
    // |{0,4,8}| = 3, 6 - 6 + 1 = 1, 9 - 2 = 7, 2^2 = 4
    assert_eq!(w["a"], 3);
    assert_eq!(w["b"], 1);
    assert_eq!(w["c"], 7);
    assert_eq!(w["d"], 4);
}

#[test]
fn literal_log2_sizes_the_master_bus() {
    for (n, bits) in [(2, 1), (3, 2), (4, 2), (5, 3), (8, 3), (9, 4)] {
        assert_eq!(widths("amba_encode", &[("n", n)])["HMASTER"], bits, "n = {n}");
    }
}

#[test]
fn arbiter_scales_with_its_parameter() {
    let e = elab("arbiter", &[("n", 3)]);
    assert_eq!(e.outputs, ["g[0]", "g[1]", "g[2]"]);
    assert_eq!(
        e.phi_s(),
        formula("G (r[0] -> F g[0]) && G (r[1] -> F g[1]) && G (r[2] -> F g[2])")
    );
    // One client: the inner conjunction is empty.
    assert_eq!(elab("arbiter", &[("n", 1)]).psi_s(), Formula::True);
}

#[test]
fn enum_constraints_follow_user_entries() {
    let e = elab("enum_position", &[]);
    let require = e.buckets.get(Section::Require);
    let assert = e.buckets.get(Section::Assert);
    assert_eq!(require.len(), 1);
    assert_eq!(assert.len(), 1);
    assert_eq!(e.buckets.get(Section::Guarantee).len(), 3);
    let atoms = require[0].atoms();
    assert_eq!(atoms, ["b[0]", "b[1]", "b[2]"]);
    // Fully covered enums add nothing.
    assert!(elab("enum_partial", &[]).buckets.get(Section::Require).len() <= 1);
}

#[test]
fn overrides_replace_defaults() {
    let spec = common::load("arbiter");
    let mut options = ElabOptions::default();
    options.overrides.insert("n".into(), BigUint::from(5u32));
    assert_eq!(elaborate(&spec, &options).unwrap().inputs.len(), 5);
    options.overrides.insert("unknown".into(), BigUint::from(1u32));
    assert!(elaborate(&spec, &options).is_err());
}

#[test]
fn semantic_errors() {
    let cases = [
        ("", "", "r[2]"),
        ("", "", "undefined_name"),
        ("DEFINITIONS { f(x) = f(x + 1); }", "", "f(0) == 0"),
        ("PARAMETERS { k = 1 - 2; }", "", "true"),
        ("PARAMETERS { k = 3 / 0; }", "", "true"),
        ("DEFINITIONS { f(x) = x; }", "", "f(1, 2) == 1"),
        ("", "", "r[0] + 1"),
        ("", "", "G[3:1] r[0]"),
        ("PARAMETERS { s = {3, 1 .. 9}; }", "", "true"),
    ];
    for (global, extra, guarantee) in cases {
        let src = spec_with(global, extra, guarantee);
        assert!(elab_src(&src).is_err(), "accepted: {global} / {guarantee}");
    }
    assert!(elab_src(&spec_with("", "", "r[1] -> g[1]")).is_ok());
}

#[test]
fn strong_next_needs_finite_semantics() {
    let finite = spec_with("", "", "X[!] g[0]");
    assert!(elab_src(&finite).is_ok());
    let standard = finite.replace("Mealy,Finite", "Mealy");
    assert!(elab_src(&standard).is_err());
    assert!(elab_src(&spec_with("", "", "G[!1:2] g[0]").replace("Mealy,Finite", "Mealy")).is_err());
}

#[test]
fn recursion_limit_is_reported() {
    let src = spec_with(
        "DEFINITIONS { depth(k) = k == 0 : 0 otherwise : 1 + depth(k - 1); }",
        "",
        "depth(500) == 500",
    );
    let spec = parse_spec(&src).unwrap();
    assert!(elaborate(&spec, &ElabOptions::default()).is_ok());
    let tight = ElabOptions {
        recursion_limit: 100,
        ..ElabOptions::default()
    };
    let err = elaborate(&spec, &tight).unwrap_err().to_string();
    assert!(err.contains("recursion"), "{err}");
}

#[test]
fn every_fixture_elaborates() {
    for (name, _) in common::full_fixtures() {
        let e = elab(&name, &[]);
        assert!(!e.inputs.is_empty() || !e.outputs.is_empty(), "{name}");
    }
}
