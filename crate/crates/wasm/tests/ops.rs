use serde_json::Value;
use singcalc_wasm::ops;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn cusp_polynomial() {
    let v = parse(ops::thom_polynomial(2, 2, false).unwrap());
    assert_eq!(v["codim"], 6);
    let v = parse(ops::thom_polynomial(2, 3, false).unwrap());
    assert_eq!(v["text"], "w3*w5 + w4^2");
}

#[test]
fn integral_class_reduces() {
    let v = parse(ops::thom_polynomial(2, 3, true).unwrap());
    assert_eq!(v["mod2"], "w3*w5 + w4^2");
}

#[test]
fn out_of_range_parameters_are_rejected() {
    assert!(ops::thom_polynomial(0, 2, false).is_err());
    assert!(ops::thom_polynomial(2, 99, false).is_err());
    assert!(ops::stratify(12, 1, "-3,-2,-1,0,1,2,3").is_err());
    assert!(ops::sigma_at("1,2,oops,4", 1).is_err());
}

#[test]
fn sigma_agrees_with_the_oracle() {
    let v = parse(ops::sigma_at("-2,1,-3,1", 1).unwrap());
    assert_eq!(v["on_singular_set"], true);
    assert_eq!(v["oracle_agrees"], true);
    assert_eq!(v["sigma"][0], "-2/3");
}

#[test]
fn sigma_off_the_singular_set() {
    let v = parse(ops::sigma_at("1,1,1,1", 1).unwrap());
    assert_eq!(v["on_singular_set"], false);
    assert!(v["oracle_agrees"].is_null());
}

#[test]
fn stratify_small_grid() {
    let v = parse(ops::stratify(4, 1, "-1,0,1").unwrap());
    assert_eq!(v["points_scanned"], 81);
    assert_eq!(v["singular_points"].as_array().unwrap().len(), 3);
    assert_eq!(v["consistent"], true);
}
