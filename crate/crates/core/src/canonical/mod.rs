//! Canonical elements and maps of a C*-weak Hopf algebra.
//!
//! This module computes, in dependency order:
//!
//! * the counital maps `ε^L(x) = x₍₁₎S(x₍₂₎)`, `ε^R(x) = S(x₍₁₎)x₍₂₎` and
//!   their images `A^L`, `A^R`,
//! * the Haar integral `h` (unique two-sided integral with `ε^L(h) = 1`),
//! * the Haar conditional expectations `E^L(x) = ⟨ĥ, x₍₂₎⟩x₍₁₎`,
//!   `E^R(x) = ⟨ĥ, x₍₁₎⟩x₍₂₎` driven by the dual Haar integral `ĥ`,
//! * functional calculus (inverses, square roots, arbitrary powers) of
//!   algebra elements through a faithful ∗-representation ([`bundle`]),
//! * the full canonical bundle `g_L, g_R, g, ı, ȷ, Ω, ξ_L, ξ_R, ξ` and its
//!   dual side ([`bundle`]), the conjugations `J, J^L, J^R`, and
//! * the pulling-through identity suite ([`pt`]).
//!
//! All maps act on coefficient column vectors: `M·x` is the coefficient
//! vector of the image.

pub mod bundle;
pub mod pt;

use ndarray::{Array1, Array2};
use thiserror::Error;

use crate::algebra::{apply_on_leg, pair_leg, WeakHopfAlgebra};
use crate::C64;

#[derive(Debug, Error)]
pub enum CanonicalError {
    #[error("no two-sided integral with ε^L(h)=1 exists (residual {0:.3e})")]
    NoIntegral(f64),
    #[error("two-sided integral is not unique (free directions {0})")]
    NonUniqueIntegral(usize),
    #[error("haar integral fails {what}: residual {residual:.3e}")]
    BadIntegral { what: &'static str, residual: f64 },
    #[error("element is not in the algebra image: pull-back residual {0:.3e}")]
    NotInAlgebra(f64),
    #[error("representation is not faithful (kernel dimension {0})")]
    NotFaithful(usize),
    #[error("ı fails hypercentrality: {what} residual {residual:.3e}")]
    HypercenterViolation { what: &'static str, residual: f64 },
    #[error(transparent)]
    Linalg(#[from] crate::linalg::LinalgError),
    #[error(transparent)]
    Algebra(#[from] crate::algebra::AlgebraError),
    #[error("representation failure: {0}")]
    Rep(String),
    #[error("{0}")]
    Invalid(String),
}

/// The counital maps and their images.
#[derive(Debug, Clone)]
pub struct CounitalMaps {
    /// Matrix of `ε^L` on coefficient columns.
    pub eps_l: Array2<C64>,
    /// Matrix of `ε^R` on coefficient columns.
    pub eps_r: Array2<C64>,
    /// Orthonormal coefficient basis of `A^L = Im ε^L` (columns).
    pub a_l_basis: Array2<C64>,
    /// Orthonormal coefficient basis of `A^R = Im ε^R` (columns).
    pub a_r_basis: Array2<C64>,
}

/// Compute `ε^L`, `ε^R` and bases of their images.
pub fn counital_maps(a: &WeakHopfAlgebra) -> Result<CounitalMaps, CanonicalError> {
    let d = a.dim;
    let mut eps_l = Array2::<C64>::zeros((d, d));
    let mut eps_r = Array2::<C64>::zeros((d, d));
    for i in 0..d {
        let di = a.coproduct(&a.basis_vec(i)).into_dyn();
        // ε^L(x) = x₍₁₎ S(x₍₂₎)
        let el = a.mult_legs(&apply_on_leg(&di, 1, &a.antipode), 0, 1);
        // ε^R(x) = S(x₍₁₎) x₍₂₎
        let er = a.mult_legs(&apply_on_leg(&di, 0, &a.antipode), 0, 1);
        for k in 0..d {
            eps_l[(k, i)] = el[[k]];
            eps_r[(k, i)] = er[[k]];
        }
    }
    let a_l_basis = crate::linalg::column_space(&eps_l, crate::tol::RANK_CUTOFF)?;
    let a_r_basis = crate::linalg::column_space(&eps_r, crate::tol::RANK_CUTOFF)?;
    Ok(CounitalMaps { eps_l, eps_r, a_l_basis, a_r_basis })
}

/// Solve for the Haar integral: the unique two-sided integral normalized by
/// `ε^L(h) = 1`, then verify `h² = h = h* = S(h)`.
pub fn haar_integral(a: &WeakHopfAlgebra, tol: f64) -> Result<Array1<C64>, CanonicalError> {
    let d = a.dim;
    let maps = counital_maps(a)?;

    // Stack the homogeneous constraints over all basis x:
    //   x h = ε^L(x) h   ⟺  (L(x) − L(ε^L(x))) h = 0,
    //   h x = h ε^R(x)   ⟺  (R(x) − R(ε^R(x))) h = 0.
    let mut k = Array2::<C64>::zeros((2 * d * d, d));
    for i in 0..d {
        let x = a.basis_vec(i);
        let el = maps.eps_l.dot(&x);
        let er = maps.eps_r.dot(&x);
        let row_l = a.left_mult_matrix(&x) - a.left_mult_matrix(&el);
        let row_r = a.right_mult_matrix(&x) - a.right_mult_matrix(&er);
        for r in 0..d {
            for c in 0..d {
                k[(i * d + r, c)] = row_l[(r, c)];
                k[(d * d + i * d + r, c)] = row_r[(r, c)];
            }
        }
    }
    let null = crate::linalg::nullspace(&k, crate::tol::RANK_CUTOFF)?;
    let free = null.ncols();
    if free == 0 {
        return Err(CanonicalError::NoIntegral(f64::INFINITY));
    }

    // Impose ε^L(h) = 1 inside the integral space: (ε^L·N) c = unit.
    let constraint = maps.eps_l.dot(&null);
    let (coeffs, resid) = crate::linalg::lstsq(&constraint, &a.unit, crate::tol::RANK_CUTOFF)?;
    let unit_scale = a.unit.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if resid > tol * unit_scale.max(1.0) {
        return Err(CanonicalError::NoIntegral(resid));
    }
    // Uniqueness: no integral direction may be ε^L-null.
    let rank = crate::linalg::rank(&constraint, crate::tol::RANK_CUTOFF)?;
    if rank < free {
        return Err(CanonicalError::NonUniqueIntegral(free - rank));
    }
    let h = null.dot(&coeffs);

    // Verify h² = h = h* = S(h).
    let checks: [(&'static str, Array1<C64>); 3] = [
        ("h² = h", a.product(&h, &h)),
        ("h* = h", a.apply_star(&h)),
        ("S(h) = h", a.apply_antipode(&h)),
    ];
    for (what, got) in checks {
        let residual = crate::linalg::rel_diff_vec(&got, &h);
        if residual > tol {
            return Err(CanonicalError::BadIntegral { what, residual });
        }
    }
    Ok(h)
}

/// The Haar conditional expectations, driven by the dual Haar integral.
pub struct HaarExpectations {
    /// Matrix of `E^L(x) = ⟨ĥ, x₍₂₎⟩ x₍₁₎` on coefficient columns.
    pub e_l: Array2<C64>,
    /// Matrix of `E^R(x) = ⟨ĥ, x₍₁₎⟩ x₍₂₎` on coefficient columns.
    pub e_r: Array2<C64>,
    /// The dual Haar integral `ĥ` as a coefficient vector on the dual basis.
    pub hhat: Array1<C64>,
}

/// Compute `E^L`, `E^R` from `ĥ = haar_integral(dual(A))`.
pub fn haar_expectations(a: &WeakHopfAlgebra, tol: f64) -> Result<HaarExpectations, CanonicalError> {
    let dual = crate::algebra::dual::dual_algebra(a)?;
    let hhat = haar_integral(&dual, tol)?;
    Ok(HaarExpectations {
        e_l: expectation_matrix(a, &hhat, true),
        e_r: expectation_matrix(a, &hhat, false),
        hhat,
    })
}

/// Matrix of `x ↦ ⟨φ, x₍₂₎⟩x₍₁₎` (keep-first) or `x ↦ ⟨φ, x₍₁₎⟩x₍₂₎`
/// (keep-second) on coefficient columns.
pub fn expectation_matrix(a: &WeakHopfAlgebra, phi: &Array1<C64>, keep_first: bool) -> Array2<C64> {
    let d = a.dim;
    let mut m = Array2::<C64>::zeros((d, d));
    for i in 0..d {
        let di = a.coproduct(&a.basis_vec(i)).into_dyn();
        let img = if keep_first { pair_leg(&di, 1, phi) } else { pair_leg(&di, 0, phi) };
        for k in 0..d {
            m[(k, i)] = img[[k]];
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builders::{
        direct_sum, function_algebra_z, group_algebra_s3, group_algebra_z, pair_groupoid_algebra,
        standard_fixtures,
    };
    use crate::linalg::{rel_diff, rel_diff_vec};

    #[test]
    fn counital_maps_are_idempotent_with_expected_images() {
        for alg in standard_fixtures() {
            let maps = counital_maps(&alg).unwrap();
            let ll = maps.eps_l.dot(&maps.eps_l);
            let rr = maps.eps_r.dot(&maps.eps_r);
            assert!(rel_diff(&ll, &maps.eps_l) < 1e-12, "{}", alg.name);
            assert!(rel_diff(&rr, &maps.eps_r) < 1e-12, "{}", alg.name);
        }
        // Hopf case: ε^L(x) = ε(x)·1, so dim A^L = 1.
        let z2 = group_algebra_z(2).unwrap();
        let maps = counital_maps(&z2).unwrap();
        assert_eq!(maps.a_l_basis.ncols(), 1);
        let eps_g = z2.apply_counit(&z2.basis_vec(1));
        let el_g = maps.eps_l.dot(&z2.basis_vec(1));
        let expected = z2.unit.mapv(|u| u * eps_g);
        assert!(rel_diff_vec(&el_g, &expected) < 1e-14);
        // Pair groupoid on 2 objects: dim A^L = 2.
        let pg = pair_groupoid_algebra(2).unwrap();
        let maps = counital_maps(&pg).unwrap();
        assert_eq!(maps.a_l_basis.ncols(), 2);
        assert_eq!(maps.a_r_basis.ncols(), 2);
    }

    #[test]
    fn haar_integral_of_group_algebra_is_uniform() {
        // [PAPER anchor Rem:ExamplBic]: C[G] has h = |G|⁻¹ Σ_g g.
        for alg in [group_algebra_z(2).unwrap(), group_algebra_s3().unwrap()] {
            let h = haar_integral(&alg, 1e-10).unwrap();
            let expected =
                Array1::from_elem(alg.dim, C64::new(1.0 / alg.dim as f64, 0.0));
            assert!(rel_diff_vec(&h, &expected) < 1e-12, "{}", alg.name);
        }
    }

    #[test]
    fn haar_integral_of_function_algebra_is_delta_e() {
        // [PAPER anchor Rem:ExamplBic]: C^G has h = δ_e.
        let f2 = function_algebra_z(2).unwrap();
        let h = haar_integral(&f2, 1e-10).unwrap();
        let mut expected = Array1::<C64>::zeros(2);
        expected[0] = C64::new(1.0, 0.0);
        assert!(rel_diff_vec(&h, &expected) < 1e-12);
    }

    #[test]
    fn haar_integral_of_pair_groupoid_passes_substitution() {
        let pg = pair_groupoid_algebra(2).unwrap();
        let h = haar_integral(&pg, 1e-10).unwrap();
        // Independent oracle: substitute back into the defining property over
        // 20 random elements.
        let mut rng = crate::linalg::seeded_rng(7);
        let maps = counital_maps(&pg).unwrap();
        for _ in 0..20 {
            let x = crate::linalg::random_complex_vec(pg.dim, &mut rng);
            let lhs = pg.product(&x, &h);
            let rhs = pg.product(&maps.eps_l.dot(&x), &h);
            assert!(rel_diff_vec(&lhs, &rhs) < 1e-12);
            let lhs = pg.product(&h, &x);
            let rhs = pg.product(&h, &maps.eps_r.dot(&x));
            assert!(rel_diff_vec(&lhs, &rhs) < 1e-12);
        }
        let hh = pg.product(&h, &h);
        assert!(rel_diff_vec(&hh, &h) < 1e-12);
    }

    #[test]
    fn haar_exists_and_is_unique_even_for_direct_sums() {
        let z2 = group_algebra_z(2).unwrap();
        let sum = direct_sum(&z2, &z2).unwrap();
        // The integral space is 2-dimensional but the normalization pins a
        // unique h = h₁ ⊕ h₂.
        let h = haar_integral(&sum, 1e-10).unwrap();
        let expected = Array1::from_elem(4, C64::new(0.5, 0.0));
        assert!(rel_diff_vec(&h, &expected) < 1e-12);
    }

    #[test]
    fn haar_expectations_match_hand_computation_on_z2() {
        // C[Z2]: ĥ = δ_e, Δh = (e⊗e + g⊗g)/2, so E^L(h) = e/2.
        let z2 = group_algebra_z(2).unwrap();
        let exp = haar_expectations(&z2, 1e-10).unwrap();
        let h = haar_integral(&z2, 1e-10).unwrap();
        let elh = exp.e_l.dot(&h);
        let mut expected = Array1::<C64>::zeros(2);
        expected[0] = C64::new(0.5, 0.0);
        assert!(rel_diff_vec(&elh, &expected) < 1e-13);
        // ĥ = δ_e on the dual basis.
        assert!((exp.hhat[0] - C64::new(1.0, 0.0)).norm() < 1e-13);
        assert!(exp.hhat[1].norm() < 1e-13);
    }

    #[test]
    fn expectations_are_conditional_expectations() {
        for alg in standard_fixtures() {
            let exp = haar_expectations(&alg, 1e-10).unwrap();
            let maps = counital_maps(&alg).unwrap();
            // Unital.
            assert!(
                rel_diff_vec(&exp.e_l.dot(&alg.unit), &alg.unit) < 1e-11,
                "{}: E^L(1) ≠ 1",
                alg.name
            );
            // Idempotent.
            assert!(rel_diff(&exp.e_l.dot(&exp.e_l), &exp.e_l) < 1e-11, "{}", alg.name);
            assert!(rel_diff(&exp.e_r.dot(&exp.e_r), &exp.e_r) < 1e-11, "{}", alg.name);
            // E^R = S⁻¹∘E^L∘S (here S is invertible; use solve via antipode
            // matrix application on coefficient columns: x.dot(S) acts on
            // rows, so the column-action matrix is Sᵀ).
            let st = alg.antipode.t().to_owned();
            let s_inv_t = crate::linalg::pinv(&st, crate::tol::RANK_CUTOFF).unwrap();
            let comp = s_inv_t.dot(&exp.e_l).dot(&st);
            assert!(rel_diff(&comp, &exp.e_r) < 1e-10, "{}: E^R ≠ S⁻¹E^LS", alg.name);
            // Bimodularity: E^L(a x) = a E^L(x) for a ∈ A^L.
            let mut rng = crate::linalg::seeded_rng(11);
            for _ in 0..10 {
                let x = crate::linalg::random_complex_vec(alg.dim, &mut rng);
                let raw = crate::linalg::random_complex_vec(alg.dim, &mut rng);
                let a_el = maps.eps_l.dot(&raw);
                let lhs = exp.e_l.dot(&alg.product(&a_el, &x));
                let rhs = alg.product(&a_el, &exp.e_l.dot(&x));
                assert!(rel_diff_vec(&lhs, &rhs) < 1e-10, "{}: bimodularity", alg.name);
            }
            // Images: E^L projects onto A^L (fixed by ε^L-image membership).
            let proj = exp.e_l.dot(&maps.eps_l);
            assert!(rel_diff(&proj, &maps.eps_l) < 1e-10, "{}: Im E^L ⊇ fix", alg.name);
        }
    }
}
