//! Quantum dimensions of the sectors of `A*` (Rem:ExamplBic).
//!
//! For a biconnected C*-weak Hopf algebra the pulling-through element Ω is a
//! weighted sum of the irreducible characters `x_a ∈ A** ≅ A` of `A*`:
//! `Ω = D⁻² Σ_a d_a x_a` with `D² = Σ_a d_a²`, and the weights — the
//! Frobenius–Perron (quantum) dimensions — are the unique positive reals with
//! `Ω x_a = x_a Ω = d_a Ω` (Eq:OmegaEigBiconn).

use std::sync::Arc;

use ndarray::Array1;

use crate::algebra::WeakHopfAlgebra;
use crate::canonical::bundle::canonical_bundle_auto;
use crate::linalg::{rel_diff, rel_diff_vec};
use crate::report::{CheckResult, CheckSuite};
use crate::C64;

use super::{decompose, gns_representation, is_biconnected, RepError};

/// Quantum dimensions of the sectors of `A*`, with the characters and the
/// verification trail.
#[derive(Debug)]
pub struct QuantumDimensions {
    /// `d_a`, one per sector of `A*`, sorted ascending.
    pub dims: Vec<f64>,
    /// `D² = Σ_a d_a²`.
    pub total_sq: f64,
    /// Irreducible characters `x_a ∈ A` (coefficients on the basis of `A`),
    /// ordered like `dims`.
    pub characters: Vec<Array1<C64>>,
    pub checks: CheckSuite,
}

/// Computes the quantum dimensions of the sectors of `A*` and verifies
/// Eq:OmegaEigBiconn and the reconstruction `Ω = D⁻² Σ_a d_a x_a`.
///
/// The sectors are found by decomposing the GNS representation of `A*` with
/// respect to the Haar integral `h` of `A` (a faithful positive functional on
/// `A*`), and each character is pulled back to `A` through the canonical
/// pairing: `x_a = Σ_i Tr(Ψ_a(e^i)) e_i`.
pub fn quantum_dimensions(
    a: &Arc<WeakHopfAlgebra>,
    tol: f64,
) -> Result<QuantumDimensions, RepError> {
    let evidence = is_biconnected(a)?;
    if !evidence.biconnected {
        return Err(RepError::NotBiconnected(
            evidence.commutant_dim_primal,
            evidence.commutant_dim_dual,
        ));
    }

    let dual = crate::algebra::dual::dual_algebra(a)?;
    let h = crate::canonical::haar_integral(a, 1e-9).map_err(Box::new)?;
    let psi = gns_representation(&dual, &h, "GNS(A*, h)")?;
    if let kd @ 1.. = psi.kernel_dim()? {
        return Err(RepError::GnsNotFaithful(psi.name, kd));
    }
    let dec = decompose(&psi, 0xD1A1)?;

    // Characters pulled back through the pairing ⟨e_j, e^i⟩ = δ_ij.
    let mut pairs: Vec<(f64, Array1<C64>)> = Vec::with_capacity(dec.sectors.len());
    let bundle = canonical_bundle_auto(a, tol).map_err(Box::new)?;
    let omega = &bundle.primal.omega;
    let omega_norm_sq: f64 = omega.iter().map(|z| z.norm_sqr()).sum();
    let mut checks = CheckSuite::new("quantum_dimensions");
    let mut push = |name: String, anchor: &str, ratio: f64| {
        checks.push(CheckResult::new(name, anchor, ratio, tol));
    };
    for (a_idx, sector) in dec.sectors.iter().enumerate() {
        let x: Array1<C64> =
            Array1::from_iter(sector.matrices.iter().map(|m| m.diag().sum()));
        // Least-squares d from Ω x_a = d Ω, then both-sided residuals.
        let left = a.product(omega, &x);
        let d_est: C64 = omega
            .iter()
            .zip(left.iter())
            .map(|(o, v)| o.conj() * v)
            .sum::<C64>()
            / C64::new(omega_norm_sq, 0.0);
        push(
            format!("sector_{a_idx}_eig_left"),
            "Eq:OmegaEigBiconn",
            rel_diff_vec(&left, &omega.mapv(|z| z * d_est)),
        );
        let right = a.product(&x, omega);
        push(
            format!("sector_{a_idx}_eig_right"),
            "Eq:OmegaEigBiconn",
            rel_diff_vec(&right, &omega.mapv(|z| z * d_est)),
        );
        push(
            format!("sector_{a_idx}_d_real_positive"),
            "Rem:ExamplBic",
            if d_est.re > 0.0 { d_est.im.abs() / d_est.re } else { 1.0 },
        );
        pairs.push((d_est.re, x));
    }

    // Ω = D⁻² Σ_a d_a x_a.
    let total_sq: f64 = pairs.iter().map(|(d, _)| d * d).sum();
    let mut rec = Array1::<C64>::zeros(a.dim);
    for (d, x) in &pairs {
        rec.scaled_add(C64::new(d / total_sq, 0.0), x);
    }
    push(
        "omega_reconstruction".to_string(),
        "Rem:ExamplBic",
        rel_diff_vec(&rec, omega),
    );
    // With S² = Id the paper further identifies Ω with the Haar integral.
    if rel_diff(&a.antipode.dot(&a.antipode), &crate::linalg::eye(a.dim)) < 1e-12 {
        push(
            "omega_is_haar_when_s2_id".to_string(),
            "Rem:ExamplBic",
            rel_diff_vec(omega, &h),
        );
    }

    pairs.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap());
    let (dims, characters) = pairs.into_iter().unzip();
    Ok(QuantumDimensions { dims, total_sq, characters, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builders;

    fn dims_of(a: &Arc<WeakHopfAlgebra>) -> QuantumDimensions {
        let qd = quantum_dimensions(a, 1e-9).unwrap();
        assert!(qd.checks.all_pass(), "{:?}", qd.checks.failures());
        qd
    }

    #[test]
    fn group_algebra_z2_has_two_trivial_sectors() {
        let qd = dims_of(&builders::group_algebra_z(2).unwrap());
        assert_eq!(qd.dims.len(), 2);
        for d in &qd.dims {
            assert!((d - 1.0).abs() < 1e-10);
        }
        assert!((qd.total_sq - 2.0).abs() < 1e-9);
    }

    #[test]
    fn function_algebra_s3_sees_the_two_dimensional_irrep() {
        // Sectors of (C^S3)* ≅ C[S3]: dims 1, 1, 2, D² = 6.
        let qd = dims_of(&builders::function_algebra_s3().unwrap());
        let expected = [1.0, 1.0, 2.0];
        assert_eq!(qd.dims.len(), 3);
        for (d, e) in qd.dims.iter().zip(expected) {
            assert!((d - e).abs() < 1e-9, "dims {:?}", qd.dims);
        }
        assert!((qd.total_sq - 6.0).abs() < 1e-8);
        // The d = 2 character is the class function 2δ_e − δ_{(01)…} + …; its
        // unit coefficient is its dimension.
        let x2 = &qd.characters[2];
        assert!((x2[0].re - 2.0).abs() < 1e-9);
    }

    #[test]
    fn group_algebra_s3_is_dual_commutative_so_all_sectors_are_lines() {
        // Sectors of C[S3]* = C^S3 (commutative): six one-dimensional
        // sectors, each d_a = 1, D² = 6 — the x_a are the group elements and
        // Ω = |G|⁻¹ Σ g reweights them uniformly.
        let qd = dims_of(&builders::group_algebra_s3().unwrap());
        assert_eq!(qd.dims.len(), 6);
        for d in &qd.dims {
            assert!((d - 1.0).abs() < 1e-9, "dims {:?}", qd.dims);
        }
        assert!((qd.total_sq - 6.0).abs() < 1e-8);
    }

    #[test]
    fn function_algebra_z2_matches_its_group_dual() {
        let qd = dims_of(&builders::function_algebra_z(2).unwrap());
        assert_eq!(qd.dims.len(), 2);
        assert!((qd.total_sq - 2.0).abs() < 1e-9);
    }

    #[test]
    fn direct_sum_is_rejected_as_not_biconnected() {
        let a = builders::group_algebra_z(2).unwrap();
        let sum = builders::direct_sum(&a, &a).unwrap();
        match quantum_dimensions(&sum, 1e-9) {
            Err(RepError::NotBiconnected(p, d)) => assert!(p > 1 || d > 1),
            other => panic!("expected NotBiconnected, got {other:?}"),
        }
    }
}
