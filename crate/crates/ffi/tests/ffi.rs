use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use golden_ffi::*;

fn parse(s: &str) -> *mut GoldenNumber {
    let c = CString::new(s).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { golden_number_parse(c.as_ptr(), &mut out) }, GoldenStatus::Ok);
    out
}

fn text(x: *const GoldenNumber) -> String {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { golden_number_to_string(x, &mut out) }, GoldenStatus::Ok);
    let s = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_owned();
    unsafe { golden_string_free(out) };
    s
}

fn last_error() -> String {
    let p = golden_last_error();
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned();
    unsafe { golden_string_free(p) };
    s
}

#[test]
fn arithmetic_and_comparison() {
    let (x, y) = (parse("1/2 + 1/2*b"), parse("1"));
    let mut sum = ptr::null_mut();
    assert_eq!(unsafe { golden_number_arith(GoldenOp::Add, x, y, &mut sum) }, GoldenStatus::Ok);
    assert_eq!(text(sum), text(parse("3/2 + 1/2*b")));
    let mut ord = 9;
    assert_eq!(unsafe { golden_number_cmp(x, y, &mut ord) }, GoldenStatus::Ok);
    assert_eq!(ord, 1);
    assert!((unsafe { golden_number_to_f64(x) } - 1.309017).abs() < 1e-6);

    let zero = parse("0");
    let mut q = ptr::null_mut();
    assert_eq!(unsafe { golden_number_arith(GoldenOp::Div, x, zero, &mut q) }, GoldenStatus::DivisionByZero);
    assert!(q.is_null());
    for p in [x, y, sum, zero] {
        unsafe { golden_number_free(p) };
    }
}

#[test]
fn errors_are_reported() {
    let c = CString::new("1/0").unwrap();
    let mut out = ptr::null_mut();
    let s = unsafe { golden_number_parse(c.as_ptr(), &mut out) };
    assert_ne!(s, GoldenStatus::Ok);
    assert!(!last_error().is_empty());

    assert_eq!(unsafe { golden_number_parse(ptr::null(), &mut out) }, GoldenStatus::NullPointer);
    assert_eq!(unsafe { golden_atlas_len(ptr::null()) }, 0);
    unsafe { golden_number_free(ptr::null_mut()) };
}

#[test]
fn matching_and_frequencies_at_three_halves() {
    let a = parse("3/2");
    let (mut kind, mut m, mut word) = (-1, 0usize, ptr::null_mut());
    assert_eq!(unsafe { golden_matching_index(a, 1000, &mut kind, &mut m, &mut word) }, GoldenStatus::Ok);
    assert_eq!((kind, m), (0, 2));
    assert_eq!(unsafe { CStr::from_ptr(word) }.to_str().unwrap(), "10");
    unsafe { golden_string_free(word) };

    let (mut fs, mut ft) = (ptr::null_mut(), ptr::null_mut());
    assert_eq!(unsafe { golden_frequencies(a, &mut fs, &mut ft) }, GoldenStatus::Ok);
    let (fs_f, ft_f) = unsafe { (golden_number_to_f64(fs), golden_number_to_f64(ft)) };
    assert!((ft_f - (2.0 - 1.0 / fs_f)).abs() < 1e-12);

    let mut mc = 0.0;
    assert_eq!(unsafe { golden_simulate_zero_frequency(b'S' as _, 1.5, 400_000, 3, &mut mc) }, GoldenStatus::Ok);
    assert!((mc - fs_f).abs() < 5e-3, "{mc} vs {fs_f}");
    unsafe {
        golden_number_free(fs);
        golden_number_free(ft);
        golden_number_free(a);
    }
}

#[test]
fn atlas_entries() {
    let mut atlas = ptr::null_mut();
    assert_eq!(unsafe { golden_atlas_enumerate(8, &mut atlas) }, GoldenStatus::Ok);
    let n = unsafe { golden_atlas_len(atlas) };
    assert!(n > 0);
    let (mut lo, mut hi) = (ptr::null_mut(), ptr::null_mut());
    assert_eq!(unsafe { golden_atlas_entry(atlas, 0, ptr::null_mut(), &mut lo, &mut hi) }, GoldenStatus::Ok);
    assert!(unsafe { golden_number_to_f64(lo) < golden_number_to_f64(hi) });
    assert_eq!(
        unsafe { golden_atlas_entry(atlas, n, ptr::null_mut(), ptr::null_mut(), ptr::null_mut()) },
        GoldenStatus::OutOfRange
    );
    let mut csv = ptr::null_mut();
    assert_eq!(unsafe { golden_atlas_to_csv(atlas, &mut csv) }, GoldenStatus::Ok);
    let lines = unsafe { CStr::from_ptr(csv) }.to_str().unwrap().lines().count();
    assert_eq!(lines, n + 1);
    unsafe {
        golden_string_free(csv);
        golden_number_free(lo);
        golden_number_free(hi);
        golden_atlas_free(atlas);
    }
}

#[test]
fn density_at_one() {
    let a = parse("1");
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { golden_density(a, b'S' as _, &mut f) }, GoldenStatus::Ok);
    assert!(unsafe { golden_density_pieces(f) } >= 2);
    let mut mass = ptr::null_mut();
    assert_eq!(unsafe { golden_density_measure_j0(f, &mut mass) }, GoldenStatus::Ok);
    assert_eq!(text(mass), text(parse("2/5 + 1/5*b")));

    let mut g = ptr::null_mut();
    assert_eq!(unsafe { golden_density(a, b'T' as _, &mut g) }, GoldenStatus::Ok);
    let x = parse("0");
    let mut v = ptr::null_mut();
    assert_eq!(unsafe { golden_density_eval(g, x, &mut v) }, GoldenStatus::Ok);
    assert_eq!(text(v), text(parse("1/2")));

    let mut bad = ptr::null_mut();
    assert_eq!(unsafe { golden_density(a, b'Q' as _, &mut bad) }, GoldenStatus::InvalidConfig);
    unsafe {
        for p in [a, mass, x, v] {
            golden_number_free(p);
        }
        golden_density_free(f);
        golden_density_free(g);
    }
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_declares_the_interface() {
    let header = std::fs::read_to_string(crate_dir().join("include/golden.h")).unwrap();
    for name in [
        "GOLDEN_H",
        "typedef struct GoldenNumber GoldenNumber",
        "GOLDEN_STATUS_NULL_POINTER",
        "golden_number_parse",
        "golden_last_error",
        "golden_string_free",
        "golden_atlas_enumerate",
        "golden_density_measure_j0",
        "golden_frequencies",
        "golden_simulate_zero_frequency",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}

fn artifact_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_static_library() {
    let lib = artifact_dir().join("libgolden_ffi.a");
    if !lib.exists() {
        eprintln!("skipping: {} not built", lib.display());
        return;
    }
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let out = std::env::temp_dir().join(format!("golden_smoke_{}", std::process::id()));
    let status = Command::new(&cc)
        .arg(crate_dir().join("tests/c/smoke.c"))
        .arg("-I")
        .arg(crate_dir().join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status();
    let Ok(status) = status else {
        eprintln!("skipping: no C compiler");
        return;
    };
    assert!(status.success(), "C smoke program failed to compile");
    let run = Command::new(&out).output().unwrap();
    let _ = std::fs::remove_file(&out);
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(run.status.success(), "{stdout}{}", String::from_utf8_lossy(&run.stderr));
    assert!(stdout.contains("ok "), "{stdout}");
}
