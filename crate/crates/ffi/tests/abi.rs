use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use deltakit_ffi::*;

const ORDER_TWO: &str = r#"{"group": [2], "components": [
    {"rank": 2, "prime_classes": [[1], [1]]},
    {"rank": 2, "prime_classes": [[1], [1]]}
], "scan": {"seq_len_cap": 4, "exp_cap": 4}}"#;

fn last_error() -> String {
    unsafe { CStr::from_ptr(dk_last_error_message()) }
        .to_string_lossy()
        .into_owned()
}

#[test]
fn group_queries() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(dk_group_new([2u32, 4].as_ptr(), 2, &mut g), DkStatus::Ok);
        let (mut order, mut exp, mut ds, mut d) = (0u64, 0u32, 0u32, 0u32);
        assert_eq!(dk_group_order(g, &mut order), DkStatus::Ok);
        assert_eq!(dk_group_exponent(g, &mut exp), DkStatus::Ok);
        assert_eq!(dk_group_d_star(g, &mut ds), DkStatus::Ok);
        assert_eq!(dk_group_davenport(g, &mut d), DkStatus::Ok);
        assert_eq!((order, exp, ds, d), (8, 4, 5, 5));
        dk_group_free(g);

        let mut g = ptr::null_mut();
        assert_eq!(
            dk_group_canonicalize([6u64, 4].as_ptr(), 2, &mut g),
            DkStatus::Ok
        );
        assert_eq!(dk_group_order(g, &mut order), DkStatus::Ok);
        assert_eq!(order, 24);
        dk_group_free(g);

        let mut g = ptr::null_mut();
        assert_eq!(dk_group_new(ptr::null(), 0, &mut g), DkStatus::Ok);
        assert_eq!(dk_group_order(g, &mut order), DkStatus::Ok);
        assert_eq!(order, 1);
        dk_group_free(g);
    }
}

#[test]
fn group_errors() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(
            dk_group_new([4u32, 2].as_ptr(), 2, &mut g),
            DkStatus::InvalidArgument
        );
        assert!(!last_error().is_empty());
        assert!(g.is_null());
        assert_eq!(dk_group_new(ptr::null(), 3, &mut g), DkStatus::NullPointer);
        assert_eq!(
            dk_group_new([2u32].as_ptr(), 1, ptr::null_mut()),
            DkStatus::NullPointer
        );
        assert_eq!(
            dk_group_new([1u32 << 20].as_ptr(), 1, &mut g),
            DkStatus::LimitExceeded
        );
        let mut order = 0u64;
        assert_eq!(
            dk_group_order(ptr::null(), &mut order),
            DkStatus::NullPointer
        );
        dk_group_free(ptr::null_mut());
    }
}

#[test]
fn tblock_prediction_and_scan() {
    unsafe {
        let json = CString::new(ORDER_TWO).unwrap();
        let mut t = ptr::null_mut();
        assert_eq!(dk_tblock_from_json(json.as_ptr(), &mut t), DkStatus::Ok);
        let mut m = 0u32;
        assert_eq!(dk_tblock_max_delta_prediction(t, &mut m), DkStatus::Ok);
        assert_eq!(m, 4);

        let mut out = ptr::null_mut();
        assert_eq!(dk_tblock_scan_json(t, ptr::null(), &mut out), DkStatus::Ok);
        let text = CStr::from_ptr(out).to_str().unwrap().to_owned();
        dk_string_free(out);
        let reports: serde_json::Value = serde_json::from_str(&text).unwrap();
        let md = reports
            .as_array()
            .unwrap()
            .iter()
            .find(|r| r["invariant"] == "max_delta")
            .unwrap();
        assert_eq!(md["value"]["integer"], 4);
        assert_eq!(md["certified"], true);
        assert_eq!(md["region"]["seq_len_cap"], 4);

        let caps = DkCaps {
            seq_len_cap: 2,
            exp_cap: 0,
        };
        let mut out = ptr::null_mut();
        assert_eq!(dk_tblock_scan_json(t, &caps, &mut out), DkStatus::Ok);
        assert!(CStr::from_ptr(out)
            .to_str()
            .unwrap()
            .contains("\"seq_len_cap\":2"));
        dk_string_free(out);
        dk_tblock_free(t);
    }
}

#[test]
fn tblock_errors() {
    unsafe {
        let mut t = ptr::null_mut();
        let bad = CString::new("{\"group\": [2],\n \"components\": [}").unwrap();
        assert_eq!(
            dk_tblock_from_json(bad.as_ptr(), &mut t),
            DkStatus::ParseError
        );
        assert!(last_error().contains("line 2"), "{}", last_error());

        let c3 = CString::new(
            r#"{"group": [3], "components": [{"rank": 3, "prime_classes": [[1], [1], [1]]}]}"#,
        )
        .unwrap();
        assert_eq!(dk_tblock_from_json(c3.as_ptr(), &mut t), DkStatus::Ok);
        let mut m = 0u32;
        assert_eq!(
            dk_tblock_max_delta_prediction(t, &mut m),
            DkStatus::Unsupported
        );
        let caps = DkCaps {
            seq_len_cap: 40,
            exp_cap: 40,
        };
        let mut out = ptr::null_mut();
        assert_eq!(
            dk_tblock_scan_json(t, &caps, &mut out),
            DkStatus::LimitExceeded
        );
        assert!(out.is_null());
        dk_tblock_free(t);
        assert_eq!(
            dk_tblock_from_json(ptr::null(), &mut t),
            DkStatus::NullPointer
        );
    }
}

fn target_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_compiles_and_links_from_c() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header_dir = manifest.join("include");
    assert!(header_dir.join("deltakit.h").exists());
    let lib = target_dir().join("libdeltakit_ffi.a");
    if Command::new("cc").arg("--version").output().is_err() || !lib.exists() {
        eprintln!(
            "skipping C build: no cc or no static library at {}",
            lib.display()
        );
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include <string.h>
#include "deltakit.h"

int main(void) {
    uint32_t factors[] = {3, 3};
    DkGroup *g = NULL;
    uint32_t d = 0;
    if (dk_group_new(factors, 2, &g) != DK_STATUS_OK) return 1;
    if (dk_group_davenport(g, &d) != DK_STATUS_OK || d != 5) return 2;
    dk_group_free(g);
    if (dk_group_new(NULL, 1, &g) != DK_STATUS_NULL_POINTER) return 3;
    if (strlen(dk_last_error_message()) == 0) return 4;
    printf("ok %u\n", d);
    return 0;
}
"#,
    )
    .unwrap();
    let exe = dir.path().join("main");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&header_dir)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{:?}", out);
    assert_eq!(String::from_utf8_lossy(&out.stdout), "ok 5\n");
}
