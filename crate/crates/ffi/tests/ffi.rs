use std::ffi::CStr;
use std::ptr;

use capped_proj_ffi::*;

#[test]
fn project_through_handle() {
    let y = [0.3, -0.2, 1.5];
    let mut h: *mut CpProjection = ptr::null_mut();
    unsafe {
        assert_eq!(
            cp_project(y.as_ptr(), y.len(), 2.0, 1.0, 0.0, &mut h),
            CpStatus::Ok
        );
        assert!(!h.is_null());
        assert_eq!(cp_projection_len(h), 3);

        let mut x = [0.0; 3];
        assert_eq!(cp_projection_copy_x(h, x.as_mut_ptr(), 3), CpStatus::Ok);
        for (u, v) in x.iter().zip([0.75, 0.25, 1.0]) {
            assert!((u - v).abs() < 1e-12);
        }
        let mut small = [0.0; 2];
        assert_eq!(
            cp_projection_copy_x(h, small.as_mut_ptr(), 2),
            CpStatus::BufferTooSmall
        );

        let mut g = 0.0;
        assert_eq!(cp_projection_gamma(h, &mut g), CpStatus::Ok);
        assert!((g - 0.45).abs() < 1e-12);
        let (mut a, mut b) = (9usize, 9usize);
        assert_eq!(cp_projection_partition(h, &mut a, &mut b), CpStatus::Ok);
        assert_eq!((a, b), (0, 2));
        assert!(!cp_projection_fallback(h));

        let mut rep = CpKktReport::default();
        assert_eq!(
            cp_verify(y.as_ptr(), x.as_ptr(), 3, 2.0, 1.0, 1e-10, &mut rep),
            CpStatus::Ok
        );
        assert!(rep.passed);

        cp_projection_free(h);
        cp_projection_free(ptr::null_mut());
    }
}

#[test]
fn error_codes() {
    let y = [0.1, 0.2];
    let mut h: *mut CpProjection = ptr::null_mut();
    unsafe {
        assert_eq!(
            cp_project(y.as_ptr(), 2, 3.0, 1.0, 0.0, &mut h),
            CpStatus::Infeasible
        );
        assert!(h.is_null());
        assert_eq!(
            cp_project(ptr::null(), 2, 1.0, 1.0, 0.0, &mut h),
            CpStatus::NullPointer
        );
        assert_eq!(
            cp_project(y.as_ptr(), 0, 0.0, 1.0, 0.0, &mut h),
            CpStatus::InvalidInput
        );
        assert_eq!(
            cp_project(y.as_ptr(), 2, 1.0, -1.0, 0.0, &mut h),
            CpStatus::InvalidInput
        );
        assert_eq!(
            cp_project(y.as_ptr(), 2, 1.0, 1.0, 0.0, ptr::null_mut()),
            CpStatus::NullPointer
        );
        assert_eq!(cp_projection_len(ptr::null()), 0);

        let big = [0.0; 15];
        let mut out = [0.0; 15];
        assert_eq!(
            cp_enumerate_oracle(big.as_ptr(), 15, 1.0, out.as_mut_ptr()),
            CpStatus::Capacity
        );

        let msg = CStr::from_ptr(cp_status_message(CpStatus::Infeasible))
            .to_str()
            .unwrap();
        assert!(msg.contains("infeasible"));
    }
}

#[test]
fn baselines_agree() {
    let y = [0.41, -0.13, 0.92, 0.07, 0.66, -0.48, 0.3];
    let s = 4.0;
    let mut h: *mut CpProjection = ptr::null_mut();
    let mut exact = [0.0; 7];
    unsafe {
        assert_eq!(cp_project(y.as_ptr(), 7, s, 1.0, 0.0, &mut h), CpStatus::Ok);
        cp_projection_copy_x(h, exact.as_mut_ptr(), 7);
        cp_projection_free(h);

        let mut oracle = [0.0; 7];
        assert_eq!(
            cp_enumerate_oracle(y.as_ptr(), 7, s, oracle.as_mut_ptr()),
            CpStatus::Ok
        );

        let cfg = CpSolverConfig {
            tol: 1e-10,
            max_iters: 0,
            rho: 0.0,
        };
        let (mut dy, mut ad) = ([0.0; 7], [0.0; 7]);
        let mut iters = 0usize;
        assert_eq!(
            cp_dykstra(y.as_ptr(), 7, s, 1.0, &cfg, dy.as_mut_ptr(), &mut iters),
            CpStatus::Ok
        );
        assert!(iters > 0);
        assert_eq!(
            cp_admm(
                y.as_ptr(),
                7,
                s,
                1.0,
                ptr::null(),
                ad.as_mut_ptr(),
                ptr::null_mut()
            ),
            CpStatus::Ok
        );

        for k in 0..7 {
            assert!((oracle[k] - exact[k]).abs() < 1e-12);
            assert!((dy[k] - exact[k]).abs() < 1e-7);
            assert!((ad[k] - exact[k]).abs() < 1e-6);
        }

        let cfg = CpSolverConfig {
            tol: 1e-15,
            max_iters: 2,
            rho: 1.0,
        };
        assert_eq!(
            cp_admm(y.as_ptr(), 7, s, 1.0, &cfg, ad.as_mut_ptr(), ptr::null_mut()),
            CpStatus::NotConverged
        );

        let mut simplex = [0.0; 2];
        assert_eq!(
            cp_project_simplex([0.6, 0.6].as_ptr(), 2, 1.0, simplex.as_mut_ptr()),
            CpStatus::Ok
        );
        assert!((simplex[0] - 0.5).abs() < 1e-15);
    }
}

#[test]
fn header_declares_the_api() {
    let header = include_str!("../include/capped_proj.h");
    for name in [
        "cp_project(",
        "cp_projection_free(",
        "cp_projection_copy_x(",
        "cp_projection_gamma(",
        "cp_projection_partition(",
        "cp_verify(",
        "cp_dykstra(",
        "cp_admm(",
        "cp_status_message(",
        "typedef struct CpProjection CpProjection;",
        "CP_STATUS_INFEASIBLE = 3",
    ] {
        assert!(header.contains(name), "header is missing {name}");
    }
}
