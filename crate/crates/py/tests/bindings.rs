use std::fs;
use std::path::Path;

use pyo3::prelude::*;
use pyo3::types::PyDict;

fn shipped(name: &str) -> String {
    fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../bundles").join(name)).unwrap()
}

fn get<'py>(d: &Bound<'py, PyDict>, key: &str) -> Bound<'py, PyAny> {
    d.get_item(key).unwrap().unwrap()
}

#[test]
fn canonical_form_and_input_errors() {
    assert_eq!(dgmf::canonical_poly("y*x - x*y + 3", vec!["x".into(), "y".into()], 101).unwrap(), "3");
    assert!(dgmf::canonical_poly("x +", vec!["x".into()], 101).is_err());
    assert!(dgmf::canonical_poly("x", vec!["x".into()], 4).is_err());
}

#[test]
fn demo_bundles_match_shipped_files() {
    assert_eq!(dgmf::demo_bundle("E1", 0).unwrap(), shipped("e1.json"));
    assert_eq!(dgmf::demo_bundle("e2", 0).unwrap(), shipped("e2.json"));
    assert!(dgmf::demo_bundle("E9", 0).is_err());
}

#[test]
fn validate_and_build_return_reports() {
    Python::attach(|py| {
        let rep = dgmf::validate(py, &shipped("e1.json")).unwrap();
        assert!(get(&rep, "passed").extract::<bool>().unwrap());
        let rep = dgmf::validate(py, &shipped("faulty_e1.json")).unwrap();
        assert!(!get(&rep, "passed").extract::<bool>().unwrap());

        let out = dgmf::build(py, &shipped("e1.json"), "reduced", Some("acute"), 10, false, 0).unwrap();
        assert_eq!(get(&out, "rank").extract::<usize>().unwrap(), 6);
        assert_eq!(get(&out, "resolution_ranks").extract::<Vec<usize>>().unwrap()[..3], [1, 4, 6]);

        let err = dgmf::build(py, &shipped("e2.json"), "reduced", None, 10, false, 0).unwrap_err();
        assert!(err.is_instance_of::<dgmf::PreconditionError>(py));
        let err = dgmf::build(py, &shipped("e1.json"), "sideways", None, 10, false, 0).unwrap_err();
        assert!(err.is_instance_of::<dgmf::InputError>(py));
    });
}
