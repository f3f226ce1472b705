use limitcoh_core::degeneration::{builtin_spec, validate_fiber};
use limitcoh_core::io::*;
use limitcoh_core::{Error, Field, Matrix, Scalar};

const TWO_GON: &str = r#"{
  "prime": 3,
  "relative_dimension": 1,
  "components": ["A", "B"],
  "strata": [
    {"J": ["A"], "cohomology": {"0": [{"weight": 0, "dim": 1}], "2": [{"weight": 2, "dim": 1}]}},
    {"J": ["B"], "cohomology": {"0": [{"weight": 0, "dim": 1}], "2": [{"weight": 2, "dim": 1}]}},
    {"J": ["A", "B"], "cohomology": {"0": [{"weight": 0, "dim": 2}]}}
  ],
  "restrictions": [
    {"from": ["A"], "to": ["A", "B"], "degree": 0, "matrix": [[1], [1]]},
    {"from": ["B"], "to": ["A", "B"], "degree": 0, "matrix": [["1"], ["2/2"]]}
  ]
}"#;

#[test]
fn two_gon_file_has_three_strata() {
    let spec = parse_fiber_spec(TWO_GON).unwrap();
    let fib = validate_fiber(&spec).unwrap();
    assert_eq!(fib.stratum_count(), 3);
}

#[test]
fn fiber_roundtrip() {
    for name in ["good-elliptic", "tate-3gon", "two-component-surface"] {
        let spec = builtin_spec(name, 5).unwrap();
        let text = serde_json::to_string_pretty(&fiber_spec_value(&spec)).unwrap();
        let back = parse_fiber_spec(&text).unwrap();
        assert_eq!(fiber_spec_value(&back), fiber_spec_value(&spec));
    }
}

#[test]
fn module_entries() {
    let f = Field::new(3).unwrap();
    let d = parse_module(r#"{"dim": 2, "phi": [[0, 3], [1, 0]], "n": [[0, 0], [0, 0]]}"#, &f).unwrap();
    assert_eq!(d.phi(), &Matrix::from_ints(&[&[0, 3], &[1, 0]]));

    let d = parse_module(r#"{"dim": 1, "phi": [[{"a": "1/2", "b": 1}]]}"#, &f).unwrap();
    assert_eq!(d.phi().get(0, 0), &Scalar::from_ratio(1, 2).add(&Scalar::sqrt_p()));
    let back = parse_module(&module_value(&d).to_string(), &f).unwrap();
    assert_eq!(back.phi(), d.phi());
}

#[test]
fn singular_phi_is_a_validation_error() {
    let f = Field::new(3).unwrap();
    let r = parse_module(r#"{"dim": 2, "phi": [[1, 2], [2, 4]]}"#, &f);
    assert!(matches!(r, Err(Error::NotInvertible(_))), "{r:?}");
}

#[test]
fn truncated_file_reports_position() {
    let text = &TWO_GON[..120];
    match parse_fiber_spec(text) {
        Err(Error::Parse { location, .. }) => assert!(location.contains("byte"), "{location}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn errors_cite_field_paths() {
    let bad = TWO_GON.replace(r#""2/2""#, r#""2/0""#);
    match parse_fiber_spec(&bad) {
        Err(Error::Parse { location, .. }) => assert_eq!(location, "restrictions[1].matrix[1][0]"),
        other => panic!("{other:?}"),
    }
    let bad = TWO_GON.replace(r#""weight": 2"#, r#""wieght": 2"#);
    match parse_fiber_spec(&bad) {
        Err(Error::Parse { location, .. }) => assert_eq!(location, "strata[0].cohomology.2[0].wieght"),
        other => panic!("{other:?}"),
    }
    let f = Field::new(3).unwrap();
    match parse_module(r#"{"dim": 2, "phi": [[1, 0]]}"#, &f) {
        Err(Error::Parse { location, .. }) => assert_eq!(location, "phi"),
        other => panic!("{other:?}"),
    }
    assert!(matches!(parse_module(r#"{"dim": 1, "phi": [[0.5]]}"#, &f), Err(Error::Parse { .. })));
}
