#[path = "../examples/classify_fields.rs"]
mod classify_fields;
#[path = "../examples/decompose_module.rs"]
mod decompose_module;
#[path = "../examples/hat_j_filtration.rs"]
mod hat_j_filtration;
#[path = "../examples/hilbert_symbols.rs"]
mod hilbert_symbols;
#[path = "../examples/norm_factorization.rs"]
mod norm_factorization;
#[path = "../examples/sweep.rs"]
mod sweep;

#[test]
fn classify_fields_runs() {
    let shapes: Vec<String> = classify_fields::run_example().into_iter().map(|r| r.2).collect();
    assert_eq!(shapes[0], "Zero");
    assert_eq!(shapes[3], "F2 ⊕ F2");
}

#[test]
fn decompose_module_recovers_summands() {
    let (expected, found) = decompose_module::run_example();
    assert_eq!(expected, found);
}

#[test]
fn hat_j_filtration_runs() {
    let counts = hat_j_filtration::run_example();
    assert_eq!(counts.len(), 7);
}

#[test]
fn hilbert_symbols_satisfy_product_formula() {
    assert!(hilbert_symbols::run_example().iter().all(|r| r.2));
}

#[test]
fn norm_factorization_holds() {
    assert!(norm_factorization::run_example());
}

#[test]
fn sweep_runs() {
    let h = sweep::run_example(10);
    assert!(h.values().sum::<usize>() > 0);
}
