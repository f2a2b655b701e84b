use num_bigint::BigUint;
use twinsub_core::asymptotics::*;
use twinsub_core::hp::{HpComplex, HpContext, HpReal};
use twinsub_core::profile_enum::{twin_profile_count_series, DegreeCap};

fn exact_ln(c: &mut HpContext, k: usize, cap: DegreeCap) -> HpReal {
    let n = twin_profile_count_series(k, cap).unwrap();
    let bits = c.bits();
    c.ln_biguint(n.value(), bits)
}

#[test]
fn threshold_pins() {
    let mut c = HpContext::new(256).unwrap();
    let d01 = c.parse("0.1").unwrap();
    let d05 = c.parse("0.5").unwrap();
    assert_eq!(threshold_upper(&mut c, 1_000_000, &d01).unwrap(), BigUint::from(311_240u32));
    assert_eq!(threshold_lower(&mut c, 1_000_000, &d05).unwrap(), BigUint::from(8_387u32));
    assert_eq!(threshold_upper(&mut c, 1_000, &d05).unwrap(), BigUint::from(9_269u32));
    assert_eq!(threshold_lower(&mut c, 1_000_000_000_000, &d05).unwrap(), BigUint::from(1_731_436u32));
    let two = c.parse("2").unwrap();
    assert!(threshold_lower(&mut c, 1000, &two).is_err());
    assert!(threshold_upper(&mut c, 2, &d05).is_err());
}

#[test]
fn envelope_trends() {
    let mut c = HpContext::new(256).unwrap();
    let d = c.parse("0.5").unwrap();
    let e = c.parse("0.49").unwrap();
    let (mut last_a, mut last_b) = (f64::INFINITY, f64::NEG_INFINITY);
    for n in [1_000u64, 1_000_000, 1_000_000_000, 1_000_000_000_000] {
        let (upper, lower) = (threshold_upper(&mut c, n, &d).unwrap(), threshold_lower(&mut c, n, &d).unwrap());
        let a = part_a_envelope_log(&mut c, n, &upper, &e).unwrap().log_value.to_f64();
        let b = part_b_estimate_log(&mut c, n, &lower).unwrap().log_value.to_f64();
        assert!(a < last_a && b > last_b, "n={n}");
        assert!(b < 2.0 * (n as f64).ln());
        (last_a, last_b) = (a, b);
    }
    // Decreasing in k at fixed n.
    let mut prev = f64::INFINITY;
    for k in [16u32, 100, 1000, 10_000] {
        let v = part_b_estimate_log(&mut c, 1_000_000, &BigUint::from(k)).unwrap().log_value.to_f64();
        assert!(v < prev);
        prev = v;
    }
    assert!(part_b_estimate_log(&mut c, 1000, &BigUint::from(15u32)).is_err());
    let half = c.parse("0.5").unwrap();
    assert!(part_a_envelope_log(&mut c, 1000, &BigUint::from(100u32), &half).is_err());
}

#[test]
fn exp_form_pin_and_dominance() {
    let mut c = HpContext::new(256).unwrap();
    let v = chernoff_exp_form_logN(&mut c, 2, DegreeCap::Unbounded).unwrap();
    assert!((&v - 6.0).abs().to_f64() < 1e-60);
    for k in [2, 7, 15, 30] {
        for cap in [DegreeCap::Unbounded, DegreeCap::Below(3)] {
            let exact = exact_ln(&mut c, k, cap);
            let b = chernoff_bound_logN(&mut c, k, cap, false).unwrap();
            let e = chernoff_exp_form_logN(&mut c, k, cap).unwrap();
            assert!(b >= exact && e >= b, "k={k} {cap}");
        }
    }
    assert!(chernoff_bound_logN(&mut c, 1, DegreeCap::Unbounded, false).is_err());
}

#[test]
fn doubling_precision_is_stable() {
    let mut lo = HpContext::new(192).unwrap();
    let mut hi = HpContext::new(384).unwrap();
    let tol = 1e-40;
    for k in [3usize, 12] {
        let a = chernoff_bound_logN(&mut lo, k, DegreeCap::Unbounded, false).unwrap().to_f64();
        let b = chernoff_bound_logN(&mut hi, k, DegreeCap::Unbounded, false).unwrap().to_f64();
        assert!((a - b).abs() <= tol * b.abs());
        let s = |bits| saddle_integral_logN(k, DegreeCap::Unbounded, &QuadratureSpec { precision_bits: bits, ..QuadratureSpec::default() });
        let (x, y) = (s(192).unwrap().log_n, s(384).unwrap().log_n);
        assert!(((&x.with_precision(384) - &y).abs() / y.abs()).to_f64() < 1e-12);
    }
    for (re, im) in [(3.0, 4.0), (-900.0, 10.0), (1e5, -1e5)] {
        let oa = HOptions::for_precision(192);
        let ob = HOptions::for_precision(384);
        let a = eval_H(&mut lo, &HpComplex::from_f64(re, im, 192), &oa).unwrap();
        let b = eval_H(&mut hi, &HpComplex::from_f64(re, im, 384), &ob).unwrap();
        let a = twinsub_core::hp::LogComplex { log_mag: a.log_mag.with_precision(384), phase: a.phase.with_precision(384) };
        assert!(log_relative_difference(&mut hi, &a, &b) < oa.relative_tolerance * 10.0, "{re}+{im}i");
    }
}

#[test]
fn saddle_with_caps() {
    let spec = QuadratureSpec::default();
    let mut c = HpContext::new(256).unwrap();
    for (k, cap) in [(10, DegreeCap::Below(3)), (20, DegreeCap::Below(4)), (6, DegreeCap::Unbounded)] {
        let r = saddle_integral_logN(k, cap, &spec).unwrap();
        let exact = exact_ln(&mut c, k, cap);
        assert!(((&r.log_n - &exact).abs() / exact.abs()).to_f64() < 1e-30, "k={k} {cap}");
        assert!(r.imag_ratio < 1e-10);
    }
    assert!(QuadratureSpec { nodes_per_axis: 3, ..spec }.validate().is_err());
}

#[test]
fn landscape_small() {
    let mut c = HpContext::new(128).unwrap();
    let x = HpReal::from_f64(0.5, 128);
    let scan = W_grid_scan(&mut c, &x, 41).unwrap();
    assert!(scan.unique_max_at_origin());
    let h = W_hessian_check(&mut c, &x, 1e-5).unwrap();
    assert!(h.max_rel_error < 1e-6 && h.det_rel_error < 1e-6);
    assert!(W_grid_scan(&mut c, &x, 40).is_err());
}

#[test]
fn lemma1_small_grid() {
    let mut c = HpContext::new(128).unwrap();
    let grid = Lemma1Grid::polar(&mut c, 6, 8, 1e-2, 1e4, true).unwrap();
    assert_eq!(grid.points.len(), 49);
    let opts = HOptions::for_precision(128);
    let one = HpReal::one(128);
    let r = lemma1_validate(&mut c, &grid, &one, &opts).unwrap();
    assert!(r.passed());
    let hat = r.alpha_hat.unwrap();
    let r2 = lemma1_validate(&mut c, &grid, &(&hat * 1.01), &opts).unwrap();
    assert!(!r2.passed());
    let r3 = lemma1_validate(&mut c, &grid, &(&hat * 0.999999), &opts).unwrap();
    assert!(r3.passed());
}
