//! The weak Hopf ∗-algebra axiom suite.
//!
//! [`check_axioms`] evaluates every defining identity as a dense tensor
//! equation over the whole basis and reports one relative Frobenius residual
//! per identity:
//!
//! 1. algebra and coalgebra axioms (associativity, unit, coassociativity,
//!    counit),
//! 2. Δ multiplicative,
//! 3. ∗ comultiplicative,
//! 4. the unit weakly comultiplicative (both orderings),
//! 5. the counit weakly multiplicative (both orderings),
//! 6. the antipode axioms `x₍₁₎S(x₍₂₎) = ε(1₍₁₎x)1₍₂₎`,
//!    `S(x₍₁₎)x₍₂₎ = 1₍₁₎ε(x1₍₂₎)`, anti(co)multiplicativity, unitality and
//!    counitality,
//! 7. the ∗-structure: antilinear involution, anti-automorphism, `1* = 1`,
//!    and `S∘∗∘S∘∗ = Id`.
//!
//! Everything is written against the structure constants with the leg helpers
//! from the parent module, so each check line reads like the identity it
//! verifies.

use ndarray::{Array2, ArrayD, IxDyn};

use super::{apply_on_leg, outer, tensor_rel_diff, WeakHopfAlgebra};
use crate::report::{CheckResult, CheckSuite};
use crate::C64;

/// ε(e_i e_j) for all pairs.
fn product_counit_matrix(a: &WeakHopfAlgebra) -> Array2<C64> {
    let d = a.dim;
    let mut e = Array2::<C64>::zeros((d, d));
    for i in 0..d {
        for j in 0..d {
            let mut acc = C64::new(0.0, 0.0);
            for l in 0..d {
                acc += a.mult[(i, j, l)] * a.counit[l];
            }
            e[(i, j)] = acc;
        }
    }
    e
}

/// Is `Δ(x) = Δ^op(x)` (cocentrality / cocommutativity of one element)?
/// Returns the relative residual.
pub fn cocentrality_residual(a: &WeakHopfAlgebra, x: &ndarray::Array1<C64>) -> f64 {
    let dxy = a.coproduct(x);
    let swapped = dxy.t().to_owned();
    crate::linalg::rel_diff(&dxy, &swapped)
}

/// Is the linear map `F` (convention `f(e_i) = Σ_j F[i][j] e_j`)
/// comultiplicative, i.e. `Δ∘f = (f⊗f)∘Δ`?  Returns the relative residual.
pub fn comultiplicativity_residual(a: &WeakHopfAlgebra, f: &Array2<C64>) -> f64 {
    let d = a.dim;
    let mut lhs = ArrayD::<C64>::zeros(IxDyn(&[d, d, d]));
    let mut rhs = ArrayD::<C64>::zeros(IxDyn(&[d, d, d]));
    for i in 0..d {
        let fi = a.basis_vec(i).dot(f);
        let dfi = a.coproduct(&fi);
        let di = a.coproduct(&a.basis_vec(i)).into_dyn();
        let ffdi = apply_on_leg(&apply_on_leg(&di, 0, f), 1, f);
        for j in 0..d {
            for k in 0..d {
                lhs[[i, j, k]] = dfi[(j, k)];
                rhs[[i, j, k]] = ffdi[[j, k]];
            }
        }
    }
    tensor_rel_diff(&lhs, &rhs)
}

/// Run the full axiom suite at tolerance `tol`.
pub fn check_axioms(a: &WeakHopfAlgebra, tol: f64) -> CheckSuite {
    let d = a.dim;
    let mut suite = CheckSuite::new(format!("axioms[{}]", a.name));
    let push = |suite: &mut CheckSuite, name: &str, anchor: &str, residual: f64| {
        suite.push(CheckResult::new(name, anchor, residual, tol));
    };

    // --- associativity: Σ_p m[i,j,p]m[p,k,l] = Σ_p m[j,k,p]m[i,p,l]
    {
        let mut t1 = ArrayD::<C64>::zeros(IxDyn(&[d, d, d, d]));
        let mut t2 = ArrayD::<C64>::zeros(IxDyn(&[d, d, d, d]));
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for p in 0..d {
                        let m_ijp = a.mult[(i, j, p)];
                        let m_jkp = a.mult[(j, k, p)];
                        if m_ijp != C64::new(0.0, 0.0) {
                            for l in 0..d {
                                t1[[i, j, k, l]] += m_ijp * a.mult[(p, k, l)];
                            }
                        }
                        if m_jkp != C64::new(0.0, 0.0) {
                            for l in 0..d {
                                t2[[i, j, k, l]] += m_jkp * a.mult[(i, p, l)];
                            }
                        }
                    }
                }
            }
        }
        push(&mut suite, "associativity", "Def:CWHA(alg)", tensor_rel_diff(&t1, &t2));
    }

    // --- unit laws
    {
        let mut left = Array2::<C64>::zeros((d, d));
        let mut right = Array2::<C64>::zeros((d, d));
        for j in 0..d {
            for k in 0..d {
                for i in 0..d {
                    left[(j, k)] += a.unit[i] * a.mult[(i, j, k)];
                    right[(j, k)] += a.unit[i] * a.mult[(j, i, k)];
                }
            }
        }
        let id = crate::linalg::eye(d);
        push(&mut suite, "unit_left", "Def:CWHA(alg)", crate::linalg::rel_diff(&left, &id));
        push(&mut suite, "unit_right", "Def:CWHA(alg)", crate::linalg::rel_diff(&right, &id));
    }

    // --- coassociativity: expand first leg vs second leg of Δ
    {
        let mut t1 = ArrayD::<C64>::zeros(IxDyn(&[d, d, d, d]));
        let mut t2 = ArrayD::<C64>::zeros(IxDyn(&[d, d, d, d]));
        for i in 0..d {
            let di = a.coproduct(&a.basis_vec(i)).into_dyn();
            let e1 = a.coproduct_on_leg(&di, 0);
            let e2 = a.coproduct_on_leg(&di, 1);
            for x in 0..d {
                for y in 0..d {
                    for z in 0..d {
                        t1[[i, x, y, z]] = e1[[x, y, z]];
                        t2[[i, x, y, z]] = e2[[x, y, z]];
                    }
                }
            }
        }
        push(&mut suite, "coassociativity", "Def:CWHA(coalg)", tensor_rel_diff(&t1, &t2));
    }

    // --- counit laws: (ε⊗Id)Δ = Id = (Id⊗ε)Δ
    {
        let mut left = Array2::<C64>::zeros((d, d));
        let mut right = Array2::<C64>::zeros((d, d));
        for i in 0..d {
            for k in 0..d {
                for j in 0..d {
                    left[(i, k)] += a.counit[j] * a.comult[(i, j, k)];
                    right[(i, k)] += a.comult[(i, k, j)] * a.counit[j];
                }
            }
        }
        let id = crate::linalg::eye(d);
        push(&mut suite, "counit_left", "Def:CWHA(coalg)", crate::linalg::rel_diff(&left, &id));
        push(&mut suite, "counit_right", "Def:CWHA(coalg)", crate::linalg::rel_diff(&right, &id));
    }

    // --- Δ multiplicative: Δ(xy) = Δ(x)Δ(y)
    {
        let mut worst: f64 = 0.0;
        for i in 0..d {
            let di = a.coproduct(&a.basis_vec(i)).into_dyn();
            for j in 0..d {
                let dj = a.coproduct(&a.basis_vec(j)).into_dyn();
                let lhs = a.coproduct(&a.product(&a.basis_vec(i), &a.basis_vec(j))).into_dyn();
                // (x₍₁₎⊗x₍₂₎)(y₍₁₎⊗y₍₂₎) = x₍₁₎y₍₁₎ ⊗ x₍₂₎y₍₂₎
                let pair = outer(&di, &dj); // legs [x1, x2, y1, y2]
                let m1 = a.mult_legs(&pair, 0, 2); // [x1·y1, x2, y2]
                let rhs = a.mult_legs(&m1, 1, 2); // [x1·y1, x2·y2]
                worst = worst.max(tensor_rel_diff(&lhs, &rhs));
            }
        }
        push(&mut suite, "delta_multiplicative", "Def:CWHA(1)", worst);
    }

    // --- ∗ comultiplicative: Δ(x*) = x₍₁₎* ⊗ x₍₂₎*
    {
        let mut worst: f64 = 0.0;
        for i in 0..d {
            let lhs = a.coproduct(&a.apply_star(&a.basis_vec(i)));
            let mut rhs = Array2::<C64>::zeros((d, d));
            for j in 0..d {
                for k in 0..d {
                    let cjk = a.comult[(i, j, k)].conj();
                    if cjk == C64::new(0.0, 0.0) {
                        continue;
                    }
                    for p in 0..d {
                        for q in 0..d {
                            rhs[(p, q)] += cjk * a.star[(j, p)] * a.star[(k, q)];
                        }
                    }
                }
            }
            worst = worst.max(crate::linalg::rel_diff(&lhs, &rhs));
        }
        push(&mut suite, "star_comultiplicative", "Def:CWHA(2)", worst);
    }

    // --- unit weakly comultiplicative (both orderings)
    {
        let du = a.coproduct(&a.unit).into_dyn();
        let d2u = a.coproduct_n(&a.unit, 3);
        let pair = outer(&du, &du); // [1₁, 1₂, 1₁', 1₂']
        let r1 = a.mult_legs(&pair, 1, 2); // 1₁ ⊗ 1₂1₁' ⊗ 1₂'
        let r2 = a.mult_legs(&pair, 2, 1); // 1₁ ⊗ 1₁'1₂ ⊗ 1₂'
        push(&mut suite, "unit_weak_comult_1", "Def:CWHA(3)", tensor_rel_diff(&d2u, &r1));
        push(&mut suite, "unit_weak_comult_2", "Def:CWHA(3)", tensor_rel_diff(&d2u, &r2));
    }

    // --- counit weakly multiplicative (both orderings)
    {
        let e = product_counit_matrix(a);
        let mut lhs = ArrayD::<C64>::zeros(IxDyn(&[d, d, d]));
        let mut m1 = ArrayD::<C64>::zeros(IxDyn(&[d, d, d]));
        let mut m2 = ArrayD::<C64>::zeros(IxDyn(&[d, d, d]));
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let mut acc = C64::new(0.0, 0.0);
                    for l in 0..d {
                        acc += a.mult[(i, j, l)] * e[(l, k)];
                    }
                    lhs[[i, j, k]] = acc;
                    let mut acc1 = C64::new(0.0, 0.0);
                    let mut acc2 = C64::new(0.0, 0.0);
                    for p in 0..d {
                        for q in 0..d {
                            let c = a.comult[(j, p, q)];
                            if c == C64::new(0.0, 0.0) {
                                continue;
                            }
                            acc1 += c * e[(i, p)] * e[(q, k)];
                            acc2 += c * e[(i, q)] * e[(p, k)];
                        }
                    }
                    m1[[i, j, k]] = acc1;
                    m2[[i, j, k]] = acc2;
                }
            }
        }
        push(&mut suite, "counit_weak_mult_1", "Def:CWHA(4)", tensor_rel_diff(&lhs, &m1));
        push(&mut suite, "counit_weak_mult_2", "Def:CWHA(4)", tensor_rel_diff(&lhs, &m2));
    }

    // --- antipode axioms
    {
        let e = product_counit_matrix(a);
        let du = a.coproduct(&a.unit);
        let mut lhs_l = Array2::<C64>::zeros((d, d)); // [i, result]
        let mut lhs_r = Array2::<C64>::zeros((d, d));
        let mut rhs_l = Array2::<C64>::zeros((d, d));
        let mut rhs_r = Array2::<C64>::zeros((d, d));
        for i in 0..d {
            let di = a.coproduct(&a.basis_vec(i)).into_dyn();
            // x₍₁₎ S(x₍₂₎)
            let v = a.mult_legs(&apply_on_leg(&di, 1, &a.antipode), 0, 1);
            // S(x₍₁₎) x₍₂₎
            let w = a.mult_legs(&apply_on_leg(&di, 0, &a.antipode), 0, 1);
            for k in 0..d {
                lhs_l[(i, k)] = v[[k]];
                lhs_r[(i, k)] = w[[k]];
            }
            // ε(1₍₁₎ x) 1₍₂₎  and  1₍₁₎ ε(x 1₍₂₎)
            for aa in 0..d {
                for bb in 0..d {
                    let duab = du[(aa, bb)];
                    if duab == C64::new(0.0, 0.0) {
                        continue;
                    }
                    for k in 0..d {
                        if k == bb {
                            rhs_l[(i, k)] += duab * e[(aa, i)];
                        }
                        if k == aa {
                            rhs_r[(i, k)] += duab * e[(i, bb)];
                        }
                    }
                }
            }
        }
        push(&mut suite, "antipode_left", "Def:CWHA(5)", crate::linalg::rel_diff(&lhs_l, &rhs_l));
        push(&mut suite, "antipode_right", "Def:CWHA(5)", crate::linalg::rel_diff(&lhs_r, &rhs_r));

        // S(xy) = S(y)S(x)
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let lhs = a.apply_antipode(&a.product(&a.basis_vec(i), &a.basis_vec(j)));
                let rhs = a.product(
                    &a.apply_antipode(&a.basis_vec(j)),
                    &a.apply_antipode(&a.basis_vec(i)),
                );
                worst = worst.max(crate::linalg::rel_diff_vec(&lhs, &rhs));
            }
        }
        push(&mut suite, "antipode_antimult", "Def:CWHA(5)", worst);

        // Δ(S(x)) = (S⊗S)(Δ^op(x))
        let mut worst: f64 = 0.0;
        for i in 0..d {
            let lhs = a.coproduct(&a.apply_antipode(&a.basis_vec(i))).into_dyn();
            let dop = a.coproduct(&a.basis_vec(i)).t().to_owned().into_dyn();
            let rhs = apply_on_leg(&apply_on_leg(&dop, 0, &a.antipode), 1, &a.antipode);
            worst = worst.max(tensor_rel_diff(&lhs, &rhs));
        }
        push(&mut suite, "antipode_anticomult", "Def:CWHA(5)", worst);

        push(
            &mut suite,
            "antipode_unital",
            "Def:CWHA(5)",
            crate::linalg::rel_diff_vec(&a.apply_antipode(&a.unit), &a.unit),
        );
        let eps_s = a.antipode.dot(&a.counit);
        push(
            &mut suite,
            "antipode_counital",
            "Def:CWHA(5)",
            crate::linalg::rel_diff_vec(&eps_s, &a.counit),
        );
    }

    // --- ∗ structure
    {
        let id = crate::linalg::eye(d);
        let invol = a.star.mapv(|z| z.conj()).dot(&a.star);
        push(&mut suite, "star_involution", "Def:CWHA(∗)", crate::linalg::rel_diff(&invol, &id));

        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let lhs = a.apply_star(&a.product(&a.basis_vec(i), &a.basis_vec(j)));
                let rhs = a.product(&a.apply_star(&a.basis_vec(j)), &a.apply_star(&a.basis_vec(i)));
                worst = worst.max(crate::linalg::rel_diff_vec(&lhs, &rhs));
            }
        }
        push(&mut suite, "star_antimult", "Def:CWHA(∗)", worst);

        push(
            &mut suite,
            "star_unit",
            "Def:CWHA(∗)",
            crate::linalg::rel_diff_vec(&a.apply_star(&a.unit), &a.unit),
        );

        // (S∘∗)² = Id  ⟺  conj(σS)·(σS) = Id
        let ss = a.star.dot(&a.antipode);
        let comp = ss.mapv(|z| z.conj()).dot(&ss);
        push(&mut suite, "s_star_s_star", "Rem:CWHA(S∗S∗)", crate::linalg::rel_diff(&comp, &id));
    }

    suite
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builders::{
        direct_sum, function_algebra_s3, function_algebra_z, group_algebra_s3, group_algebra_z,
        pair_groupoid_algebra, standard_fixtures,
    };

    #[test]
    fn all_standard_fixtures_pass_axioms() {
        for alg in standard_fixtures() {
            let suite = check_axioms(&alg, 1e-10);
            assert!(
                suite.all_pass(),
                "{} failed: {:?}",
                alg.name,
                suite.failures()
            );
        }
    }

    #[test]
    fn perturbed_structure_constant_fails_loudly() {
        let alg = group_algebra_z(2).unwrap();
        let mut bad = (*alg).clone();
        bad.mult[(1, 1, 0)] += C64::new(0.05, 0.0);
        let suite = check_axioms(&bad, 1e-10);
        assert!(!suite.all_pass());
        // The perturbation must show up at macroscopic size.
        assert!(suite.worst_ratio() > 1e6);
    }

    #[test]
    fn group_algebra_unit_coproduct_is_rank_one_but_groupoid_is_not() {
        let z3 = group_algebra_z(3).unwrap();
        let du = z3.coproduct(&z3.unit);
        // For C[G]: Δ(1) = 1⊗1.
        let outer_uu = {
            let mut m = Array2::<C64>::zeros((3, 3));
            for i in 0..3 {
                for j in 0..3 {
                    m[(i, j)] = z3.unit[i] * z3.unit[j];
                }
            }
            m
        };
        assert!(crate::linalg::rel_diff(&du, &outer_uu) < 1e-15);

        let pg = pair_groupoid_algebra(2).unwrap();
        let du = pg.coproduct(&pg.unit);
        let outer_uu = {
            let mut m = Array2::<C64>::zeros((4, 4));
            for i in 0..4 {
                for j in 0..4 {
                    m[(i, j)] = pg.unit[i] * pg.unit[j];
                }
            }
            m
        };
        // Genuinely weak: Δ(1) ≠ 1⊗1.
        assert!(crate::linalg::rel_diff(&du, &outer_uu) > 0.4);
    }

    #[test]
    fn predicates_detect_cocentral_elements() {
        let s3 = group_algebra_s3().unwrap();
        // Sum over a conjugacy class is cocentral in C[G] (Δ(x)=Σ g⊗g symmetric
        // only for symmetric coefficient sets): the class {(01),(02),(12)}.
        let mut x = ndarray::Array1::<C64>::zeros(6);
        for i in [1usize, 2, 5] {
            x[i] = C64::new(1.0, 0.0);
        }
        // For group algebras Δ(x) = Σ_i x_i e_i⊗e_i is always symmetric.
        assert!(cocentrality_residual(&s3, &x) < 1e-15);

        // C^G for abelian G is cocommutative, so a counterexample needs a
        // nonabelian base: in C^S3, Δ(δ_{(012)}) = Σ_{bc=(012)} δ_b⊗δ_c is
        // not symmetric because (01)(12) = (012) but (12)(01) = (021).
        let fs3 = function_algebra_s3().unwrap();
        let mut y = ndarray::Array1::<C64>::zeros(6);
        y[3] = C64::new(1.0, 0.0); // δ_{(012)}
        assert!(cocentrality_residual(&fs3, &y) > 0.5);
    }

    #[test]
    fn antipode_is_comultiplicative_only_when_it_should_be() {
        // For C[Z2] (S=Id) the antipode is comultiplicative.
        let z2 = group_algebra_z(2).unwrap();
        assert!(comultiplicativity_residual(&z2, &z2.antipode) < 1e-15);
        // For C^Z3, S(δ_a) = δ_{a⁻¹} is also comultiplicative; sanity-check a
        // genuinely non-comultiplicative map instead: the rank-1 projector
        // onto δ_e.
        let f3 = function_algebra_z(3).unwrap();
        let mut p = Array2::<C64>::zeros((3, 3));
        p[(0, 0)] = C64::new(1.0, 0.0);
        assert!(comultiplicativity_residual(&f3, &p) > 0.4);
    }

    #[test]
    fn direct_sum_passes_and_keeps_blocks() {
        let z2 = group_algebra_z(2).unwrap();
        let z3 = group_algebra_z(3).unwrap();
        let s = direct_sum(&z2, &z3).unwrap();
        assert_eq!(s.dim, 5);
        let suite = check_axioms(&s, 1e-10);
        assert!(suite.all_pass(), "{:?}", suite.failures());
        // Cross-block products vanish.
        let p = s.product(&s.basis_vec(0), &s.basis_vec(3));
        assert!(p.iter().all(|v| v.norm() < 1e-15));
    }
}
