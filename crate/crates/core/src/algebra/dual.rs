//! The dual weak Hopf ∗-algebra Â on the dual basis.
//!
//! With `⟨·,·⟩ : Â ⊗ A → ℂ` the canonical pairing and `{e^i}` dual to
//! `{e_i}`, the dual structure constants follow by transposing the pairing
//! through each operation:
//!
//! * `(φψ)(x) = ⟨φ, x₍₁₎⟩⟨ψ, x₍₂₎⟩`        ⟹ `m̂[i][j][k] = c[k][i][j]`,
//! * `Δ̂(φ)(x⊗y) = ⟨φ, xy⟩`               ⟹ `ĉ[i][j][k] = m[j][k][i]`,
//! * `1̂ = ε`, `ε̂ = ⟨·, 1⟩`,
//! * `⟨Ŝ(φ), x⟩ = ⟨φ, S(x)⟩`              ⟹ `Ŝ = Sᵀ`,
//! * `⟨φ*, x⟩ = conj ⟨φ, S(x*)⟩`          ⟹ `σ̂ = conj((σ·S)ᵀ)`.
//!
//! The star formula is the standard one making Â a weak Hopf ∗-algebra; it
//! is an involution because `(S∘∗)² = Id`.  Taking the dual twice reproduces
//! the original structure constants exactly (tested below), which pins down
//! the sign/transpose conventions.

use std::sync::Arc;

use ndarray::{Array1, Array2, Array3};

use super::{AlgebraError, WeakHopfAlgebra};
use crate::C64;

/// Build the dual weak Hopf ∗-algebra on the dual basis `{e^i}`.
pub fn dual_algebra(a: &WeakHopfAlgebra) -> Result<Arc<WeakHopfAlgebra>, AlgebraError> {
    let d = a.dim;
    let mut mult = Array3::<C64>::zeros((d, d, d));
    let mut comult = Array3::<C64>::zeros((d, d, d));
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                mult[(i, j, k)] = a.comult[(k, i, j)];
                comult[(i, j, k)] = a.mult[(j, k, i)];
            }
        }
    }
    let unit: Array1<C64> = a.counit.clone();
    let counit: Array1<C64> = a.unit.clone();
    let antipode: Array2<C64> = a.antipode.t().to_owned();
    // σ̂ = conj(σ·S)ᵀ: row i holds the coefficients of (e^i)* on {e^j}.
    let star: Array2<C64> = a.star.dot(&a.antipode).t().mapv(|z| z.conj());

    let basis_names = a.basis_names.iter().map(|n| format!("{n}^*")).collect();
    WeakHopfAlgebra::new(
        format!("dual({})", a.name),
        basis_names,
        mult,
        comult,
        unit,
        counit,
        antipode,
        star,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::axioms::check_axioms;
    use crate::algebra::builders::{
        function_algebra_z, group_algebra_s3, group_algebra_z, pair_groupoid_algebra,
        standard_fixtures,
    };
    use crate::linalg::{rel_diff, rel_diff_vec};

    fn tensor3_rel_diff(a: &Array3<C64>, b: &Array3<C64>) -> f64 {
        let num = (a - b).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let den = b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if den == 0.0 {
            num
        } else {
            num / den
        }
    }

    #[test]
    fn duals_of_standard_fixtures_pass_axioms() {
        for alg in standard_fixtures() {
            let dual = dual_algebra(&alg).unwrap();
            let suite = check_axioms(&dual, 1e-10);
            assert!(suite.all_pass(), "{} failed: {:?}", dual.name, suite.failures());
        }
    }

    #[test]
    fn double_dual_is_the_identity_on_structure_constants() {
        for alg in [
            group_algebra_z(3).unwrap(),
            group_algebra_s3().unwrap(),
            pair_groupoid_algebra(2).unwrap(),
        ] {
            let dd = dual_algebra(&dual_algebra(&alg).unwrap()).unwrap();
            assert!(tensor3_rel_diff(&dd.mult, &alg.mult) < 1e-15);
            assert!(tensor3_rel_diff(&dd.comult, &alg.comult) < 1e-15);
            assert!(rel_diff_vec(&dd.unit, &alg.unit) < 1e-15);
            assert!(rel_diff_vec(&dd.counit, &alg.counit) < 1e-15);
            assert!(rel_diff(&dd.antipode, &alg.antipode) < 1e-15);
            assert!(rel_diff(&dd.star, &alg.star) < 1e-15);
        }
    }

    #[test]
    fn dual_of_group_algebra_is_function_algebra() {
        // For C[Z_n] with the group-element basis, the dual basis {e^g} is
        // exactly the δ-function basis of C^{Z_n}: same structure constants.
        for n in [2usize, 3, 5] {
            let grp = group_algebra_z(n).unwrap();
            let dual = dual_algebra(&grp).unwrap();
            let fun = function_algebra_z(n).unwrap();
            assert!(tensor3_rel_diff(&dual.mult, &fun.mult) < 1e-15);
            assert!(tensor3_rel_diff(&dual.comult, &fun.comult) < 1e-15);
            assert!(rel_diff_vec(&dual.unit, &fun.unit) < 1e-15);
            assert!(rel_diff_vec(&dual.counit, &fun.counit) < 1e-15);
            assert!(rel_diff(&dual.antipode, &fun.antipode) < 1e-15);
            assert!(rel_diff(&dual.star, &fun.star) < 1e-15);
        }
    }

    #[test]
    fn pairing_respects_products_and_coproducts() {
        // ⟨φψ, x⟩ = ⟨φ, x₍₁₎⟩⟨ψ, x₍₂₎⟩ and ⟨Δ̂(φ), x⊗y⟩ = ⟨φ, xy⟩,
        // spot-checked on the pair groupoid where both sides are nontrivial.
        let a = pair_groupoid_algebra(2).unwrap();
        let ahat = dual_algebra(&a).unwrap();
        let d = a.dim;
        for i in 0..d {
            for j in 0..d {
                let prod = ahat.product(&ahat.basis_vec(i), &ahat.basis_vec(j));
                for x in 0..d {
                    // lhs = ⟨e^i e^j, e_x⟩ = prod[x] on the dual basis.
                    let lhs = prod[x];
                    let dx = a.coproduct(&a.basis_vec(x));
                    let rhs = dx[(i, j)];
                    assert!((lhs - rhs).norm() < 1e-14);
                }
            }
        }
    }
}
