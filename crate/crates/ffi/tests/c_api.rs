use std::ffi::CStr;
use std::ptr;

use trajgreen_ffi::*;

fn last_error() -> String {
    let p = tg_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn cubic_oscillator_roundtrip() {
    let mut report = ptr::null_mut();
    let status = unsafe {
        tg_solve1d(
            TgPotential::OddPower,
            1,
            2,
            4,
            TgEngine::Revised,
            &mut report,
        )
    };
    assert_eq!(status, TgStatus::Ok);
    unsafe {
        assert_eq!(tg_report_steps(report), 3);
        let mut fixed = false;
        assert_eq!(tg_report_fixed_point(report, &mut fixed), TgStatus::Ok);
        assert!(fixed);

        let mut value = 0.0;
        assert_eq!(
            tg_report_delta_eval(report, 2, 0.1, 1.0, &mut value),
            TgStatus::Ok
        );
        assert!((value + 11.0 / 8.0 * 0.01).abs() < 1e-15);

        let s = tg_report_delta_string(report, 2);
        assert_eq!(
            CStr::from_ptr(s).to_str().unwrap(),
            "ε^2·(-11/8·g^-4) + O(ε^3)"
        );
        tg_string_free(s);

        let json = tg_report_json(report);
        let text = CStr::from_ptr(json).to_str().unwrap();
        assert!(text.contains("\"schema_version\": 1"));
        assert!(text.contains("\"num\": \"-11\""));
        tg_string_free(json);

        assert_eq!(
            tg_report_delta_eval(report, 9, 0.1, 1.0, &mut value),
            TgStatus::OutOfRange
        );
        assert!(last_error().contains("step 9"));
        assert!(tg_report_delta_string(report, 0).is_null());
        tg_report_free(report);
    }
}

#[test]
fn stark_fourth_order() {
    let mut report = ptr::null_mut();
    let status = unsafe { tg_stark(4, 4, TgEngine::Revised, &mut report) };
    assert_eq!(status, TgStatus::Ok);
    unsafe {
        let s = tg_report_delta_string(report, 4);
        let text = CStr::from_ptr(s).to_str().unwrap().to_owned();
        tg_string_free(s);
        assert!(text.contains("-3555/64·g^-20"), "{text}");
        tg_report_free(report);
    }
}

#[test]
fn argument_errors() {
    let mut report = ptr::null_mut();
    unsafe {
        assert_eq!(
            tg_stark(1, 3, TgEngine::Revised, &mut report),
            TgStatus::InvalidArgument
        );
        assert!(last_error().contains("order cap"));
        assert_eq!(
            tg_solve1d(TgPotential::EvenPower, 0, 2, 2, TgEngine::Old, &mut report),
            TgStatus::InvalidArgument
        );
        assert_eq!(
            tg_solve1d(
                TgPotential::EvenPower,
                1,
                2,
                2,
                TgEngine::Old,
                ptr::null_mut()
            ),
            TgStatus::NullPointer
        );
        assert_eq!(tg_report_steps(ptr::null()), 0);
        let mut fixed = false;
        assert_eq!(
            tg_report_fixed_point(ptr::null(), &mut fixed),
            TgStatus::NullPointer
        );
        tg_report_free(ptr::null_mut());
        tg_string_free(ptr::null_mut());
    }
}

#[test]
fn numeric_entry_points() {
    let harmonic = [0.0, 0.0, 0.5];
    let mut e = 0.0;
    unsafe {
        assert_eq!(
            tg_ground_energy_fd(harmonic.as_ptr(), 3, 12.0, 4801, &mut e),
            TgStatus::Ok
        );
        assert!((e - 0.5).abs() < 1e-6);
        assert_eq!(
            tg_ground_energy_fd(harmonic.as_ptr(), 3, 12.0, 4800, &mut e),
            TgStatus::InvalidArgument
        );
        assert_eq!(
            tg_ground_energy_fd(ptr::null(), 3, 12.0, 11, &mut e),
            TgStatus::NullPointer
        );

        let cubic = [0.0, 0.0, 0.0, 1.0];
        let mut v = 0.0;
        assert_eq!(
            tg_numeric_dbar_1d(cubic.as_ptr(), 4, 1.0, 1.0, &mut v),
            TgStatus::Ok
        );
        assert!((v - 4.0 / 3.0).abs() < 1e-9);
        assert_eq!(
            tg_numeric_dbar_1d(cubic.as_ptr(), 4, 1.0, -1.0, &mut v),
            TgStatus::InvalidArgument
        );
    }
}
