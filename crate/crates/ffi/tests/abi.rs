use std::ffi::{c_void, CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use comax_ffi::*;

fn last_error() -> String {
    let p = comax_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn dirac(size: usize, point: usize) -> *mut ComaxCapacity {
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { comax_capacity_dirac(size, point, &mut c) }, ComaxStatus::Ok);
    c
}

#[test]
fn capacity_lifecycle() {
    let table = [0.0, 0.5, 0.25, 1.0];
    let mut c = ptr::null_mut();
    unsafe {
        assert_eq!(comax_capacity_new(2, table.as_ptr(), 4, &mut c), ComaxStatus::Ok);
        assert!(comax_last_error().is_null());
        assert_eq!(comax_capacity_size(c), 2);
        let mut v = 0.0;
        assert_eq!(comax_capacity_value(c, 0b01, &mut v), ComaxStatus::Ok);
        assert_eq!(v, 0.5);
        assert_eq!(comax_capacity_value(c, 0b100, &mut v), ComaxStatus::InvalidArgument);
        let mut possibility = true;
        assert_eq!(comax_capacity_is_possibility(c, &mut possibility), ComaxStatus::Ok);
        assert!(!possibility);

        let mut json = ptr::null_mut();
        assert_eq!(comax_capacity_to_json(c, &mut json), ComaxStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(comax_capacity_from_json(json, &mut back), ComaxStatus::Ok);
        comax_string_free(json);
        let mut w = 0.0;
        comax_capacity_value(back, 0b10, &mut w);
        assert_eq!(w, 0.25);
        comax_capacity_free(back);
        comax_capacity_free(c);
        comax_capacity_free(ptr::null_mut());
    }
}

#[test]
fn invalid_capacities_report_errors() {
    let mut c = ptr::null_mut();
    let broken = [0.0, 0.7, 0.3, 0.6];
    unsafe {
        assert_eq!(
            comax_capacity_new(2, broken.as_ptr(), 4, &mut c),
            ComaxStatus::InvalidCapacity
        );
        assert!(c.is_null());
        assert!(last_error().contains("monoton"), "{}", last_error());
        assert_eq!(
            comax_capacity_new(3, broken.as_ptr(), 4, &mut c),
            ComaxStatus::DomainMismatch
        );
        assert_eq!(comax_capacity_new(2, ptr::null(), 4, &mut c), ComaxStatus::NullPointer);
        let bad = CString::new("{\"size\": 2").unwrap();
        assert_eq!(comax_capacity_from_json(bad.as_ptr(), &mut c), ComaxStatus::Parse);
        let weights = [0.5, 0.2];
        assert_eq!(
            comax_capacity_from_density(weights.as_ptr(), 2, &mut c),
            ComaxStatus::InvalidCapacity
        );
        assert_eq!(comax_capacity_size(ptr::null()), 0);
    }
}

#[test]
fn integrals() {
    let c = dirac(2, 0);
    let phi = [3.0, -2.0];
    let mut v = 0.0;
    unsafe {
        assert_eq!(comax_maxplus_integral(c, phi.as_ptr(), 2, &mut v), ComaxStatus::Ok);
        assert_eq!(v, 3.0);
        assert_eq!(comax_choquet_integral(c, phi.as_ptr(), 2, &mut v), ComaxStatus::Ok);
        assert_eq!(v, 3.0);
        assert_eq!(
            comax_sugeno_integral(c, phi.as_ptr(), 2, &mut v),
            ComaxStatus::InvalidArgument
        );
        let unit = [0.25, 0.75];
        assert_eq!(comax_sugeno_integral(c, unit.as_ptr(), 2, &mut v), ComaxStatus::Ok);
        assert_eq!(v, 0.25);
        assert_eq!(
            comax_maxplus_integral(c, phi.as_ptr(), 1, &mut v),
            ComaxStatus::DomainMismatch
        );

        let weights = [1.0, 0.5];
        let mut d = ptr::null_mut();
        assert_eq!(
            comax_capacity_from_density(weights.as_ptr(), 2, &mut d),
            ComaxStatus::Ok
        );
        let psi = [0.0, 1.0];
        assert_eq!(comax_maxplus_integral(d, psi.as_ptr(), 2, &mut v), ComaxStatus::Ok);
        assert!((v - (1.0 + 0.5f64.ln())).abs() < 1e-15);
        comax_capacity_free(d);
        comax_capacity_free(c);
    }
}

#[test]
fn pushforward_of_dirac_is_dirac() {
    let c = dirac(3, 2);
    let image = [0usize, 0, 1];
    let mut pushed = ptr::null_mut();
    unsafe {
        assert_eq!(
            comax_capacity_pushforward(c, image.as_ptr(), 3, 2, &mut pushed),
            ComaxStatus::Ok
        );
        assert_eq!(comax_capacity_size(pushed), 2);
        let mut v = 0.0;
        comax_capacity_value(pushed, 0b10, &mut v);
        assert_eq!(v, 1.0);
        comax_capacity_value(pushed, 0b01, &mut v);
        assert_eq!(v, 0.0);
        let bad = [0usize, 5, 1];
        assert_eq!(
            comax_capacity_pushforward(c, bad.as_ptr(), 3, 2, &mut pushed),
            ComaxStatus::InvalidArgument
        );
        comax_capacity_free(pushed);
        comax_capacity_free(c);
    }
}

#[test]
fn reconstruction_round_trip() {
    let mut c = ptr::null_mut();
    let mut f = ptr::null_mut();
    let mut rebuilt = ptr::null_mut();
    unsafe {
        assert_eq!(comax_capacity_random(4, 7, &mut c), ComaxStatus::Ok);
        let mut gap = 1.0;
        assert_eq!(comax_roundtrip(c, 1e-9, &mut gap), ComaxStatus::Ok);
        assert!(gap < 1e-9);
        assert_eq!(comax_roundtrip(c, 0.0, &mut gap), ComaxStatus::InvalidArgument);
        assert_eq!(comax_functional_from_capacity(c, &mut f), ComaxStatus::Ok);
        assert_eq!(comax_reconstruct(f, 1e-9, &mut rebuilt), ComaxStatus::Ok);
        for bits in 0..16 {
            let (mut a, mut b) = (0.0, 0.0);
            comax_capacity_value(c, bits, &mut a);
            comax_capacity_value(rebuilt, bits, &mut b);
            assert!((a - b).abs() < 1e-9);
        }
        comax_capacity_free(rebuilt);
        comax_functional_free(f);
        comax_capacity_free(c);
    }
}

extern "C" fn shifted_max(values: *const f64, len: usize, user_data: *mut c_void) -> f64 {
    let values = unsafe { std::slice::from_raw_parts(values, len) };
    let offset = unsafe { *(user_data as *const f64) };
    values.iter().copied().fold(f64::NEG_INFINITY, f64::max) + offset
}

#[test]
fn callback_functionals() {
    let offset = Box::into_raw(Box::new(0.0f64));
    let data = offset as *mut c_void;
    let mut f = ptr::null_mut();
    unsafe {
        assert_eq!(
            comax_functional_from_callback(3, Some(shifted_max), data, &mut f),
            ComaxStatus::Ok
        );
        let phi = [1.0, -4.0, 2.5];
        let mut v = 0.0;
        assert_eq!(comax_functional_eval(f, phi.as_ptr(), 3, &mut v), ComaxStatus::Ok);
        assert_eq!(v, 2.5);

        let mut report = ptr::null_mut();
        assert_eq!(
            comax_property_report_json(f, 200, 3, 1e-9, &mut report),
            ComaxStatus::Ok
        );
        let parsed: serde_json::Value = serde_json::from_str(CStr::from_ptr(report).to_str().unwrap()).unwrap();
        comax_string_free(report);
        assert!(parsed["verdicts"]
            .as_array()
            .unwrap()
            .iter()
            .all(|v| v["passed"] == true));

        let mut rebuilt = ptr::null_mut();
        assert_eq!(comax_reconstruct(f, 1e-9, &mut rebuilt), ComaxStatus::Ok);
        let mut value = 0.0;
        comax_capacity_value(rebuilt, 0b001, &mut value);
        assert_eq!(value, 1.0);
        comax_capacity_free(rebuilt);

        // a nonzero offset breaks normalization, and the report says so
        *offset = 0.5;
        assert_eq!(
            comax_property_report_json(f, 200, 3, 1e-9, &mut report),
            ComaxStatus::Ok
        );
        let parsed: serde_json::Value = serde_json::from_str(CStr::from_ptr(report).to_str().unwrap()).unwrap();
        comax_string_free(report);
        let normalized = parsed["verdicts"]
            .as_array()
            .unwrap()
            .iter()
            .find(|v| v["property"] == "normalized")
            .unwrap();
        assert_eq!(normalized["passed"], false);

        assert_eq!(
            comax_functional_from_callback(3, None, data, &mut f),
            ComaxStatus::NullPointer
        );
        comax_functional_free(f);
        drop(Box::from_raw(offset));
    }
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/comax.h")).unwrap();
    for name in [
        "comax_last_error",
        "comax_string_free",
        "comax_capacity_new",
        "comax_capacity_from_json",
        "comax_capacity_to_json",
        "comax_capacity_from_density",
        "comax_capacity_dirac",
        "comax_capacity_random",
        "comax_capacity_free",
        "comax_capacity_size",
        "comax_capacity_value",
        "comax_capacity_is_possibility",
        "comax_capacity_pushforward",
        "comax_maxplus_integral",
        "comax_choquet_integral",
        "comax_sugeno_integral",
        "comax_functional_from_capacity",
        "comax_functional_from_callback",
        "comax_functional_eval",
        "comax_functional_free",
        "comax_reconstruct",
        "comax_roundtrip",
        "comax_property_report_json",
        "COMAX_STATUS_NOT_STABILIZED",
        "typedef struct ComaxCapacity ComaxCapacity",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}

#[test]
fn header_compiles_as_c() {
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = tempfile::tempdir().unwrap();
    let source = dir.path().join("probe.c");
    std::fs::write(
        &source,
        "#include \"comax.h\"\nint main(void) { ComaxCapacity *c = 0; return comax_capacity_size(c) == 0 ? 0 : 1; }\n",
    )
    .unwrap();
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-fsyntax-only")
        .arg("-I")
        .arg(&include)
        .arg(&source)
        .status()
        .expect("a C compiler on PATH");
    assert!(status.success());
}
