use cohering::channels::{compose, tensor_ops, QuantumOperation};
use cohering::coherence::{c_l1, c_r, dephase, CoherenceMeasure, DensityMatrix};
use cohering::matcore::{
    hermitian_eigenvalues, one_to_one_norm, partial_trace, tensor, ComplexMatrix, SubsystemShape,
};
use cohering::optimize::{random_channel_with, random_density, random_unitary, stream_rng};
use cohering::power::{cohering_power, unitary_power_l1, unitary_power_relent};
use num_complex::Complex64;
use proptest::prelude::*;

fn ginibre(seed: u64, rows: usize, cols: usize) -> ComplexMatrix {
    cohering::optimize::ginibre_with(&mut stream_rng(seed, 0), rows, cols)
}

fn diag_phases(seed: u64, d: usize) -> ComplexMatrix {
    let u = random_unitary(seed, d);
    ComplexMatrix::from_diagonal(&(0..d).map(|i| u[(i, 0)] / u[(i, 0)].norm()).collect::<Vec<_>>())
}

fn matrix_units(d: usize) -> impl Iterator<Item = ComplexMatrix> {
    (0..d * d).map(move |k| {
        let mut m = ComplexMatrix::zeros(d, d);
        m[(k / d, k % d)] = Complex64::new(1.0, 0.0);
        m
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tensor_is_associative(s in any::<u64>(), a in 1usize..4, b in 1usize..4, c in 1usize..4) {
        let (x, y, z) = (ginibre(s, a, b), ginibre(s ^ 1, b, c), ginibre(s ^ 2, c, a));
        let left = tensor(&tensor(&x, &y), &z);
        let right = tensor(&x, &tensor(&y, &z));
        prop_assert!(left.max_abs_diff(&right) <= 1e-14);
    }

    #[test]
    fn tensor_mixed_product(s in any::<u64>(), a in 1usize..4, b in 1usize..4) {
        let (x1, x2) = (ginibre(s, a, a), ginibre(s ^ 1, a, a));
        let (y1, y2) = (ginibre(s ^ 2, b, b), ginibre(s ^ 3, b, b));
        let lhs = &tensor(&x1, &y1) * &tensor(&x2, &y2);
        let rhs = tensor(&(&x1 * &x2), &(&y1 * &y2));
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
    }

    #[test]
    fn one_to_one_norm_laws(s in any::<u64>(), d in 1usize..5, e in 1usize..4) {
        let (x, y) = (ginibre(s, d, d), ginibre(s ^ 1, d, d));
        prop_assert!(one_to_one_norm(&(&x * &y)) <= one_to_one_norm(&x) * one_to_one_norm(&y) + 1e-12);
        let z = ginibre(s ^ 2, e, e);
        let lhs = one_to_one_norm(&tensor(&x, &z));
        prop_assert!((lhs - one_to_one_norm(&x) * one_to_one_norm(&z)).abs() <= 1e-12 * lhs.max(1.0));
    }

    #[test]
    fn partial_traces_compose(s in any::<u64>(), a in 1usize..4, b in 1usize..4, c in 1usize..4) {
        let shape = SubsystemShape::new(vec![a, b, c]).unwrap();
        let rho = random_density(s, a * b * c);
        let direct = partial_trace(rho.matrix(), &shape, &[0]).unwrap();
        let staged = partial_trace(rho.matrix(), &shape, &[0, 1]).unwrap();
        let staged = partial_trace(&staged, &SubsystemShape::new(vec![a, b]).unwrap(), &[0]).unwrap();
        prop_assert!(direct.max_abs_diff(&staged) <= 1e-13);
        // the trace of the reduced state of a product is the factor
        let x = random_density(s ^ 1, a);
        let y = random_density(s ^ 2, b);
        let xy = x.tensor(&y);
        let ab = SubsystemShape::new(vec![a, b]).unwrap();
        prop_assert!(partial_trace(xy.matrix(), &ab, &[1]).unwrap().max_abs_diff(y.matrix()) <= 1e-13);
    }

    #[test]
    fn eigenvalues_of_rotated_diagonal(s in any::<u64>(), d in 1usize..7) {
        let mut values: Vec<f64> = (0..d).map(|i| ((s >> (i * 7)) % 1000) as f64 / 100.0 - 5.0).collect();
        let u = random_unitary(s, d);
        let m = u.conjugate(&ComplexMatrix::from_real_diagonal(&values));
        values.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let found = hermitian_eigenvalues(&m).unwrap();
        for (x, y) in found.iter().zip(&values) {
            prop_assert!((x - y).abs() <= 1e-10);
        }
    }

    #[test]
    fn coherence_tensor_identities(s in any::<u64>(), a in 2usize..4, b in 2usize..4) {
        let (x, y) = (random_density(s, a), random_density(s ^ 1, b));
        let xy = x.tensor(&y);
        prop_assert!((c_l1(&xy) + 1.0 - (c_l1(&x) + 1.0) * (c_l1(&y) + 1.0)).abs() <= 1e-10);
        prop_assert!((c_r(&xy) - c_r(&x) - c_r(&y)).abs() <= 1e-9);
    }

    #[test]
    fn diagonal_phases_leave_coherence_unchanged(s in any::<u64>(), d in 2usize..5) {
        let rho = random_density(s, d);
        let p = diag_phases(s ^ 1, d);
        let rotated = DensityMatrix::sanitize(&p.conjugate(rho.matrix())).unwrap();
        prop_assert!((c_l1(&rotated) - c_l1(&rho)).abs() <= 1e-12);
        prop_assert!((c_r(&rotated) - c_r(&rho)).abs() <= 1e-9);
    }

    #[test]
    fn measures_are_nonnegative_and_vanish_on_dephased(s in any::<u64>(), d in 2usize..5) {
        let rho = random_density(s, d);
        prop_assert!(c_l1(&rho) >= 0.0 && c_r(&rho) >= 0.0);
        let diag = dephase(&rho);
        prop_assert_eq!(c_l1(&diag), 0.0);
        prop_assert!(c_r(&diag) <= 1e-12);
    }

    #[test]
    fn measures_are_convex(s in any::<u64>(), d in 2usize..5, lambda in 0.0f64..1.0) {
        let (x, y) = (random_density(s, d), random_density(s ^ 1, d));
        let mix = x.mix(lambda, &y).unwrap();
        prop_assert!(c_l1(&mix) <= lambda * c_l1(&x) + (1.0 - lambda) * c_l1(&y) + 1e-12);
        prop_assert!(c_r(&mix) <= lambda * c_r(&x) + (1.0 - lambda) * c_r(&y) + 1e-9);
    }

    #[test]
    fn kraus_form_agrees_on_matrix_units(s in any::<u64>(), d in 2usize..4) {
        let mut rng = stream_rng(s, 1);
        let op = compose(vec![
            random_channel_with(&mut rng, d, 2, 2),
            QuantumOperation::append(random_density(s, 2), 2).unwrap(),
            QuantumOperation::dismiss(SubsystemShape::new(vec![2, 2]).unwrap(), vec![0]).unwrap(),
        ]).unwrap();
        let kraus = op.to_kraus();
        prop_assert!(kraus.validate().passed);
        for unit in matrix_units(d) {
            prop_assert!(op.apply_matrix(&unit).max_abs_diff(&kraus.apply_matrix(&unit)) <= 1e-12);
        }
    }

    #[test]
    fn channel_outputs_are_states(s in any::<u64>(), din in 2usize..4, dout in 2usize..4, k in 1usize..4) {
        let mut rng = stream_rng(s, 2);
        let k = k.max(din.div_ceil(dout));
        let op = random_channel_with(&mut rng, din, dout, k);
        prop_assert!(op.apply(&random_density(s, din)).is_ok());
    }

    #[test]
    fn closed_forms_match_enumeration(s in any::<u64>(), d in 2usize..6) {
        let u = random_unitary(s, d);
        let op = QuantumOperation::unitary(u.clone()).unwrap();
        let l1 = cohering_power(&op, CoherenceMeasure::L1).unwrap().s_value;
        let re = cohering_power(&op, CoherenceMeasure::RelativeEntropy).unwrap().s_value;
        prop_assert!((l1 - unitary_power_l1(&u).unwrap()).abs() <= 1e-9);
        prop_assert!((re - unitary_power_relent(&u).unwrap()).abs() <= 1e-9);
        prop_assert!(l1 <= d as f64 - 1.0 + 1e-9);
        prop_assert!(re <= (d as f64).log2() + 1e-9);
    }

    #[test]
    fn tensor_of_unitary_channels_is_unitary_kron(s in any::<u64>(), a in 2usize..4, b in 2usize..4) {
        let (u, v) = (random_unitary(s, a), random_unitary(s ^ 1, b));
        let joint = tensor_ops(vec![
            QuantumOperation::unitary(u.clone()).unwrap(),
            QuantumOperation::unitary(v.clone()).unwrap(),
        ]).unwrap();
        let kron = QuantumOperation::unitary(tensor(&u, &v)).unwrap();
        let rho = random_density(s ^ 2, a * b);
        prop_assert!(joint.apply_matrix(rho.matrix()).max_abs_diff(&kron.apply_matrix(rho.matrix())) <= 1e-12);
    }

    #[test]
    fn dilation_reconstructs_and_is_sensitive(s in any::<u64>(), d in 2usize..4, k in 1usize..5) {
        let mut rng = stream_rng(s, 3);
        let op = random_channel_with(&mut rng, d, d, k);
        let dil = op.stinespring_dilate_checked(8, s).unwrap();
        prop_assert_eq!(dil.ancilla_dim, d * d);
        prop_assert!(dil.big_unitary.is_unitary(1e-10));
        prop_assert!(dil.reconstruction_error <= 1e-8);
        // a different channel is not reproduced by this dilation
        let other = random_channel_with(&mut rng, d, d, k);
        let rho = random_density(s ^ 5, d);
        let miss = other.apply_matrix(rho.matrix()).max_abs_diff(&dil.reconstruct(rho.matrix()));
        prop_assert!(miss > 1e-6);
    }
}
