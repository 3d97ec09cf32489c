//! Values computed independently (numpy / scipy, closed forms) and frozen here.

use cohering::coherence::{c_l1, c_r, dephase, CoherenceMeasure, DensityMatrix};
use cohering::matcore::{hermitian_eigenvalues, nearest_unitary, ComplexMatrix};
use cohering::power::{cohering_power, counterexample, unitary_power_l1, unitary_power_relent};
use cohering::QuantumOperation;
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
}

#[test]
fn polar_factor_of_printed_unitary() {
    let expected = ComplexMatrix::from_rows(&[
        vec![c(0.5827908701888196, -0.8124868758868181), c(-0.0148109864753096, 7.161116291266831e-4)],
        vec![c(-0.01249781816074229, -7.980142696606371e-3), c(-0.10209607491178012, -0.9946640203361995)],
    ])
    .unwrap();
    let u = counterexample::unitary();
    assert!(u.max_abs_diff(&expected) <= 1e-12);
    assert!(u.unitarity_defect() <= 1e-14);
    let shift = u.max_abs_diff(&counterexample::printed_unitary());
    assert!(shift <= 1e-3 && shift > 1e-5, "polar shift {shift}");
}

#[test]
fn printed_state_spectrum() {
    let ev = hermitian_eigenvalues(&counterexample::printed_state()).unwrap();
    close(ev[0], 0.9846261342519613, 1e-12);
    close(ev[1], 0.01537386574803867, 1e-12);
    // already positive with unit trace, so sanitizing changes nothing
    let rho = counterexample::state();
    assert!(rho.matrix().max_abs_diff(&counterexample::printed_state()) <= 1e-12);
}

#[test]
fn counterexample_values() {
    let u = counterexample::unitary();
    let rho = counterexample::state();
    close(unitary_power_relent(&u).unwrap(), 0.002988923261289709, 1e-12);
    close(unitary_power_l1(&u).unwrap(), 0.029653316161427412, 1e-12);
    close(c_r(&rho), 0.4411793816705861, 1e-12);
    close(c_l1(&rho), 0.6245578596095003, 1e-12);
    let out = DensityMatrix::sanitize(&u.conjugate(rho.matrix())).unwrap();
    close(c_r(&out) - c_r(&rho), 0.019099729300309953, 1e-12);
}

#[test]
fn counterexample_matches_reported_values() {
    let u = counterexample::unitary();
    let rho = counterexample::state();
    let s = unitary_power_relent(&u).unwrap();
    let out = DensityMatrix::sanitize(&u.conjugate(rho.matrix())).unwrap();
    let gain = c_r(&out) - c_r(&rho);
    close(s, counterexample::REPORTED_POWER, counterexample::REPRODUCTION_TOL);
    close(gain, counterexample::REPORTED_GAIN, counterexample::REPRODUCTION_TOL);
    assert!(gain > s);
}

#[test]
fn nearest_unitary_stays_near_printed() {
    let u = nearest_unitary(&counterexample::printed_unitary()).unwrap();
    assert!(u.max_abs_diff(&counterexample::printed_unitary()) <= 1e-3);
}

#[test]
fn dephased_state_keeps_diagonal() {
    let d = dephase(&counterexample::state());
    let expected = ComplexMatrix::from_real_diagonal(&[0.8706, 0.1294]);
    assert!(d.matrix().max_abs_diff(&expected) <= 1e-12);
}

/// `C_r` of a qubit state from the closed-form eigenvalues `(1 +- r) / 2`.
fn qubit_relent_closed_form(p: f64, off: Complex64) -> f64 {
    let h = |x: f64| if x <= 0.0 { 0.0 } else { -x * x.log2() };
    let r = ((2.0 * p - 1.0).powi(2) + 4.0 * off.norm_sqr()).sqrt();
    let (l0, l1) = ((1.0 + r) / 2.0, (1.0 - r) / 2.0);
    (h(p) + h(1.0 - p)) - (h(l0) + h(l1))
}

#[test]
fn qubit_relent_against_closed_form() {
    for &(p, re, im) in &[(0.5, 0.5, 0.0), (0.8706, 0.3078, 0.0527), (0.3, 0.1, -0.2), (0.9, 0.0, 0.0), (0.25, 0.0, 0.4)] {
        let off = c(re, im);
        let rho = DensityMatrix::new(
            ComplexMatrix::from_rows(&[vec![c(p, 0.0), off], vec![off.conj(), c(1.0 - p, 0.0)]]).unwrap(),
        )
        .unwrap();
        close(c_r(&rho), qubit_relent_closed_form(p, off), 1e-12);
    }
}

#[test]
fn qutrit_state_values() {
    let rho = DensityMatrix::new(
        ComplexMatrix::from_rows(&[
            vec![c(0.5, 0.0), c(0.2, 0.1), c(0.05, 0.0)],
            vec![c(0.2, -0.1), c(0.3, 0.0), c(0.0, -0.1)],
            vec![c(0.05, 0.0), c(0.0, 0.1), c(0.2, 0.0)],
        ])
        .unwrap(),
    )
    .unwrap();
    let ev = rho.eigenvalues();
    close(ev[0], 0.6600170709108295, 1e-12);
    close(ev[1], 0.24609425710262184, 1e-12);
    close(ev[2], 0.09388867198654861, 1e-12);
    close(c_l1(&rho), 0.7472135954999579, 1e-12);
    close(c_r(&rho), 0.27163253655332475, 1e-12);
}

#[test]
fn hadamard_has_unit_power() {
    let op = QuantumOperation::unitary(ComplexMatrix::hadamard()).unwrap();
    close(cohering_power(&op, CoherenceMeasure::L1).unwrap().s_value, 1.0, 1e-12);
    close(cohering_power(&op, CoherenceMeasure::RelativeEntropy).unwrap().s_value, 1.0, 1e-12);
}

#[test]
fn qutrit_fourier_is_maximal() {
    let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let s = 1.0 / 3f64.sqrt();
    let rows: Vec<Vec<Complex64>> = (0..3).map(|i| (0..3).map(|j| w.powu(i * j) * s).collect()).collect();
    let f = ComplexMatrix::from_rows(&rows).unwrap();
    close(unitary_power_l1(&f).unwrap(), 2.0, 1e-12);
    close(unitary_power_relent(&f).unwrap(), 3f64.log2(), 1e-12);
}

#[test]
fn diagonal_and_permutation_unitaries_are_free() {
    let k = ComplexMatrix::from_diagonal(&[c(1.0, 0.0), c(0.0, 1.0)]);
    let x = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
    for u in [k, x] {
        assert_eq!(unitary_power_l1(&u).unwrap(), 0.0);
        assert_eq!(unitary_power_relent(&u).unwrap(), 0.0);
    }
}

#[test]
fn append_plus_state_and_dismissal() {
    let plus = DensityMatrix::maximally_coherent(2);
    let append = QuantumOperation::append(plus, 2).unwrap();
    close(cohering_power(&append, CoherenceMeasure::L1).unwrap().s_value, 1.0, 1e-12);
    close(cohering_power(&append, CoherenceMeasure::RelativeEntropy).unwrap().s_value, 1.0, 1e-12);
    let dismiss =
        QuantumOperation::dismiss(cohering::SubsystemShape::new(vec![2, 3]).unwrap(), vec![1]).unwrap();
    assert_eq!(cohering_power(&dismiss, CoherenceMeasure::L1).unwrap().s_value, 0.0);
}
