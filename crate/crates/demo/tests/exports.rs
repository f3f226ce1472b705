use limitcoh_demo::{clemens_schmid_json, limit_json, module_json};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn tate_curve_limit() {
    let v = parse(limit_json("tate-2gon", 3).unwrap());
    let h1 = &v["degrees"][1];
    assert_eq!(h1["dim"], 2);
    assert_eq!(h1["weights"]["0"], 1);
    assert_eq!(h1["weights"]["2"], 1);
    assert_eq!(h1["n_rank"], 1);
    assert_eq!(h1["n_matrix"], serde_json::json!([[0, 1], [0, 0]]));
    assert_eq!(v["e2_degenerates"], true);
}

#[test]
fn clemens_schmid_threads_are_exact() {
    for n in 2..=4 {
        let v = parse(clemens_schmid_json(&format!("tate-{n}gon"), 5).unwrap());
        assert_eq!(v["all_exact"], true);
        assert_eq!(v["threads"].as_array().unwrap().len(), 2);
    }
}

#[test]
fn module_weights_and_filtration() {
    let v = parse(module_json(r#"{"dim": 2, "phi": [[1, 0], [0, 3]], "n": [[0, 1], [0, 0]]}"#, 3, 1).unwrap());
    assert_eq!(v["weight_monodromy"]["pass"], true);
    let weights: Vec<i64> = v["pieces"].as_array().unwrap().iter().map(|p| p["weight"].as_i64().unwrap()).collect();
    assert_eq!(weights, vec![0, 2]);
}

#[test]
fn bad_input_is_reported() {
    assert!(limit_json("tate-1gon", 3).is_err());
    assert!(limit_json("tate-2gon", 4).is_err());
    assert!(module_json(r#"{"dim": 1, "phi": [[0]]}"#, 3, 0).is_err());
    assert!(module_json("{", 3, 0).is_err());
}
