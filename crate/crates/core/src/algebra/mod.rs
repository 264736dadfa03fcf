//! Weak Hopf algebras presented by structure constants.
//!
//! A finite-dimensional weak Hopf ∗-algebra is stored concretely: on the
//! fixed basis `e_0 … e_{d−1}`,
//!
//! * `mult[i][j][k]`     — `e_i e_j = Σ_k mult[i][j][k] e_k`,
//! * `comult[i][j][k]`   — `Δ(e_i) = Σ_{jk} comult[i][j][k] e_j ⊗ e_k`,
//! * `unit[i]`           — coefficients of 1,
//! * `counit[i]`         — `ε(e_i)`,
//! * `antipode[i][j]`    — `S(e_i) = Σ_j antipode[i][j] e_j`,
//! * `star[i][j]`        — `(Σ_i c_i e_i)* = Σ_{ij} conj(c_i) star[i][j] e_j`.
//!
//! Elements are coefficient vectors; multi-leg tensors (iterated coproducts,
//! two-sided identities) are dense `ArrayD` with one axis per tensor factor.
//! The free functions [`apply_on_leg`], [`pair_leg`] and the method
//! [`WeakHopfAlgebra::mult_legs`] manipulate single legs of such tensors and
//! are the vocabulary in which the axiom and canonical-element identities are
//! written.
//!
//! Submodules: [`axioms`] (the verification suite), [`builders`] (group,
//! function, groupoid algebras and direct sums), [`dual`] (the dual weak Hopf
//! algebra), [`json`] (file interchange).

pub mod axioms;
pub mod builders;
pub mod dual;
pub mod json;

use std::sync::Arc;

use ndarray::{Array1, Array2, Array3, ArrayD, IxDyn};
use thiserror::Error;

use crate::tol::DENOM_FLOOR;
use crate::C64;

/// Errors from algebra construction and element arithmetic.
#[derive(Debug, Error)]
pub enum AlgebraError {
    /// A claimed group multiplication table fails a group axiom.
    #[error("not a group: {0}")]
    NotAGroup(String),
    /// A claimed groupoid fails a groupoid axiom.
    #[error("not a groupoid: {0}")]
    NotAGroupoid(String),
    /// Two elements (or an element and a map) belong to different algebras.
    #[error("algebra mismatch: operands belong to different algebras")]
    AlgebraMismatch,
    /// Structure-constant data has the wrong shape or is inconsistent.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// An element is not invertible (left/right inverse solve failed).
    #[error("element is not invertible (residual {0:.3e})")]
    NotInvertible(f64),
    /// File or JSON interchange problem.
    #[error("interchange error: {0}")]
    Interchange(String),
}

/// A finite-dimensional weak Hopf ∗-algebra given by structure constants.
#[derive(Debug, Clone)]
pub struct WeakHopfAlgebra {
    /// Human-readable name, e.g. `"C[Z2]"`.
    pub name: String,
    pub dim: usize,
    pub basis_names: Vec<String>,
    pub mult: Array3<C64>,
    pub comult: Array3<C64>,
    pub unit: Array1<C64>,
    pub counit: Array1<C64>,
    pub antipode: Array2<C64>,
    pub star: Array2<C64>,
}

impl WeakHopfAlgebra {
    /// Validate shapes and wrap in an `Arc` (elements hold a reference).
    pub fn new(
        name: impl Into<String>,
        basis_names: Vec<String>,
        mult: Array3<C64>,
        comult: Array3<C64>,
        unit: Array1<C64>,
        counit: Array1<C64>,
        antipode: Array2<C64>,
        star: Array2<C64>,
    ) -> Result<Arc<Self>, AlgebraError> {
        let d = basis_names.len();
        let want3 = (d, d, d);
        let want2 = (d, d);
        if mult.dim() != want3 || comult.dim() != want3 {
            return Err(AlgebraError::InvalidInput(format!(
                "mult/comult must be {d}x{d}x{d}"
            )));
        }
        if unit.len() != d || counit.len() != d {
            return Err(AlgebraError::InvalidInput(format!("unit/counit must have length {d}")));
        }
        if antipode.dim() != want2 || star.dim() != want2 {
            return Err(AlgebraError::InvalidInput(format!("antipode/star must be {d}x{d}")));
        }
        for (i, n) in basis_names.iter().enumerate() {
            if basis_names[..i].contains(n) {
                return Err(AlgebraError::InvalidInput(format!("duplicate basis name `{n}`")));
            }
        }
        Ok(Arc::new(Self { name: name.into(), dim: d, basis_names, mult, comult, unit, counit, antipode, star }))
    }

    /// Coefficient vector of the `i`-th basis element.
    pub fn basis_vec(&self, i: usize) -> Array1<C64> {
        let mut v = Array1::zeros(self.dim);
        v[i] = C64::new(1.0, 0.0);
        v
    }

    /// Product of two coefficient vectors.
    pub fn product(&self, x: &Array1<C64>, y: &Array1<C64>) -> Array1<C64> {
        // (xy)_k = Σ_{ij} x_i y_j mult[i][j][k]
        let d = self.dim;
        let m = self.mult.view().into_shape((d, d * d)).expect("contiguous");
        let xm = x.dot(&m); // (d*d) over (j,k)
        let xm = xm.into_shape((d, d)).expect("shape");
        y.dot(&xm)
    }

    /// Coproduct as a (leg1, leg2) matrix of coefficients.
    pub fn coproduct(&self, x: &Array1<C64>) -> Array2<C64> {
        let d = self.dim;
        let c = self.comult.view().into_shape((d, d * d)).expect("contiguous");
        x.dot(&c).into_shape((d, d)).expect("shape")
    }

    /// Iterated coproduct with `legs ≥ 1` tensor factors
    /// (`legs = 1` returns `x`, `legs = 2` returns `Δ(x)`, …), expanding the
    /// first factor each time; coassociativity makes the choice immaterial.
    pub fn coproduct_n(&self, x: &Array1<C64>, legs: usize) -> ArrayD<C64> {
        assert!(legs >= 1, "coproduct_n needs at least one leg");
        let d = self.dim;
        let mut t = x.clone().into_dyn();
        while t.ndim() < legs {
            // out[(a0,a1), rest] = Σ_i comult[i][a0][a1] t[i, rest]
            let rest: usize = t.shape()[1..].iter().product();
            let flat = t.view().into_shape((d, rest)).expect("contiguous");
            let c = self.comult.view().into_shape((d, d * d)).expect("contiguous");
            let out = c.t().dot(&flat); // (d², rest)
            let mut shape = vec![d, d];
            shape.extend(t.shape()[1..].iter());
            t = out.into_shape(IxDyn(&shape)).expect("shape");
        }
        t
    }

    /// Antipode applied to a coefficient vector.
    pub fn apply_antipode(&self, x: &Array1<C64>) -> Array1<C64> {
        x.dot(&self.antipode)
    }

    /// Inverse antipode (dense solve of the antipode matrix).
    pub fn apply_antipode_inv(&self, x: &Array1<C64>) -> Result<Array1<C64>, AlgebraError> {
        // S^{-1}(x) = y with y S = x  ⟺  Sᵀ yᵀ = xᵀ.
        let sinv = crate::linalg::pinv(&self.antipode, crate::tol::RANK_CUTOFF)
            .map_err(|e| AlgebraError::InvalidInput(format!("antipode not invertible: {e}")))?;
        let y = x.dot(&sinv);
        let back = self.apply_antipode(&y);
        let resid = crate::linalg::rel_diff_vec(&back, x);
        if resid > 1e-8 {
            return Err(AlgebraError::InvalidInput(format!(
                "antipode not invertible (round-trip residual {resid:.3e})"
            )));
        }
        Ok(y)
    }

    /// Star (antilinear involution) applied to a coefficient vector.
    pub fn apply_star(&self, x: &Array1<C64>) -> Array1<C64> {
        x.mapv(|z| z.conj()).dot(&self.star)
    }

    /// Counit of a coefficient vector.
    pub fn apply_counit(&self, x: &Array1<C64>) -> C64 {
        x.dot(&self.counit)
    }

    /// Matrix of left multiplication: `L(x) y = x·y`.
    pub fn left_mult_matrix(&self, x: &Array1<C64>) -> Array2<C64> {
        // L[k][j] = Σ_i x_i mult[i][j][k]
        let d = self.dim;
        let m = self.mult.view().into_shape((d, d * d)).expect("contiguous");
        x.dot(&m).into_shape((d, d)).expect("shape").t().to_owned()
    }

    /// Matrix of right multiplication: `R(y) x = x·y`.
    pub fn right_mult_matrix(&self, y: &Array1<C64>) -> Array2<C64> {
        // R[k][i] = Σ_j y_j mult[i][j][k]
        let d = self.dim;
        let mut r = Array2::zeros((d, d));
        for i in 0..d {
            for j in 0..d {
                let yj = y[j];
                if yj == C64::new(0.0, 0.0) {
                    continue;
                }
                for k in 0..d {
                    r[(k, i)] += yj * self.mult[(i, j, k)];
                }
            }
        }
        r
    }

    /// Two-sided inverse of `x`, if it exists.
    pub fn inverse(&self, x: &Array1<C64>) -> Result<Array1<C64>, AlgebraError> {
        let l = self.left_mult_matrix(x);
        let (u, resid) = crate::linalg::lstsq(&l, &self.unit, crate::tol::RANK_CUTOFF)
            .map_err(|e| AlgebraError::InvalidInput(e.to_string()))?;
        let scale = self.unit.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if resid > 1e-9 * scale.max(1.0) {
            return Err(AlgebraError::NotInvertible(resid));
        }
        // Check it is also a left inverse.
        let left = self.product(&u, x);
        let back = crate::linalg::rel_diff_vec(&left, &self.unit);
        if back > 1e-9 {
            return Err(AlgebraError::NotInvertible(back));
        }
        Ok(u)
    }

    /// Expand one leg of a multi-leg coefficient tensor by the coproduct;
    /// the two new legs sit at positions `leg` and `leg + 1`.
    pub fn coproduct_on_leg(&self, t: &ArrayD<C64>, leg: usize) -> ArrayD<C64> {
        let d = self.dim;
        let n = t.ndim();
        assert_eq!(t.shape()[leg], d, "leg does not carry algebra coefficients");
        let mut perm: Vec<usize> = (0..n).filter(|&ax| ax != leg).collect();
        perm.push(leg);
        let tp = t.view().permuted_axes(IxDyn(&perm)).as_standard_layout().to_owned();
        let rest: usize = tp.shape()[..n - 1].iter().product();
        let flat = tp.view().into_shape((rest, d)).expect("contiguous");
        let c = self.comult.view().into_shape((d, d * d)).expect("contiguous");
        let out = flat.dot(&c); // (rest, d²)
        let mut shape: Vec<usize> = perm[..n - 1].iter().map(|&ax| t.shape()[ax]).collect();
        shape.push(d);
        shape.push(d);
        let out = out.into_shape(IxDyn(&shape)).expect("shape");
        // Move the two last axes to (leg, leg+1).
        let m = out.ndim();
        let mut final_perm: Vec<usize> = Vec::with_capacity(m);
        for ax in 0..m - 2 {
            if ax == leg {
                final_perm.push(m - 2);
                final_perm.push(m - 1);
            }
            final_perm.push(ax);
        }
        if leg == m - 2 {
            final_perm.push(m - 2);
            final_perm.push(m - 1);
        }
        out.view().permuted_axes(IxDyn(&final_perm)).as_standard_layout().to_owned()
    }

    /// Multiply two legs of a multi-leg coefficient tensor; the product lands
    /// where `leg_a` was (after `leg_b` is removed).  `leg_a` is the left
    /// factor.
    pub fn mult_legs(&self, t: &ArrayD<C64>, leg_a: usize, leg_b: usize) -> ArrayD<C64> {
        assert!(leg_a != leg_b, "mult_legs needs two distinct legs");
        let d = self.dim;
        let n = t.ndim();
        // Permute to (rest…, leg_a, leg_b).
        let mut perm: Vec<usize> = (0..n).filter(|&ax| ax != leg_a && ax != leg_b).collect();
        let rest_axes = perm.clone();
        perm.push(leg_a);
        perm.push(leg_b);
        let tp = t.view().permuted_axes(IxDyn(&perm)).as_standard_layout().to_owned();
        let rest: usize = tp.shape()[..n - 2].iter().product();
        let flat = tp.view().into_shape((rest, d * d)).expect("contiguous");
        let m = self.mult.view().into_shape((d * d, d)).expect("contiguous");
        let out = flat.dot(&m); // (rest, d)
        // Rebuild shape: rest axes in their original relative order, then the
        // product leg, then move it to leg_a's post-removal position.
        let mut shape: Vec<usize> = rest_axes.iter().map(|&ax| t.shape()[ax]).collect();
        shape.push(d);
        let out = out.into_shape(IxDyn(&shape)).expect("shape");
        let target = leg_a - usize::from(leg_b < leg_a);
        move_last_axis_to(&out, target)
    }
}

/// Apply a linear map (convention `f(e_i) = Σ_j F[i][j] e_j`, acting on
/// coefficients as `x ↦ x·F`) to one leg of a multi-leg tensor.
pub fn apply_on_leg(t: &ArrayD<C64>, leg: usize, f: &Array2<C64>) -> ArrayD<C64> {
    let n = t.ndim();
    let d = t.shape()[leg];
    assert_eq!(f.nrows(), d, "map does not fit leg");
    let mut perm: Vec<usize> = (0..n).filter(|&ax| ax != leg).collect();
    perm.push(leg);
    let tp = t.view().permuted_axes(IxDyn(&perm)).as_standard_layout().to_owned();
    let rest: usize = tp.shape()[..n - 1].iter().product();
    let flat = tp.view().into_shape((rest, d)).expect("contiguous");
    let out = flat.dot(f); // (rest, d')
    let mut shape: Vec<usize> = perm[..n - 1].iter().map(|&ax| t.shape()[ax]).collect();
    shape.push(f.ncols());
    let out = out.into_shape(IxDyn(&shape)).expect("shape");
    move_last_axis_to(&out, leg)
}

/// Pair one leg with a functional's coefficient vector (`Σ_i t[..,i,..] φ_i`),
/// removing the leg.
pub fn pair_leg(t: &ArrayD<C64>, leg: usize, phi: &Array1<C64>) -> ArrayD<C64> {
    let n = t.ndim();
    let d = t.shape()[leg];
    assert_eq!(phi.len(), d, "functional does not fit leg");
    let mut perm: Vec<usize> = (0..n).filter(|&ax| ax != leg).collect();
    perm.push(leg);
    let tp = t.view().permuted_axes(IxDyn(&perm)).as_standard_layout().to_owned();
    let rest: usize = tp.shape()[..n - 1].iter().product();
    let flat = tp.view().into_shape((rest, d)).expect("contiguous");
    let out = flat.dot(phi); // (rest,)
    let shape: Vec<usize> = perm[..n - 1].iter().map(|&ax| t.shape()[ax]).collect();
    out.into_shape(IxDyn(&shape)).expect("shape")
}

/// Outer product of two multi-leg tensors (legs of `a` first).
pub fn outer(a: &ArrayD<C64>, b: &ArrayD<C64>) -> ArrayD<C64> {
    let la: usize = a.len();
    let lb: usize = b.len();
    let af = a.view().into_shape((la, 1)).expect("contiguous");
    let bf = b.view().into_shape((1, lb)).expect("contiguous");
    let out = af.dot(&bf);
    let mut shape: Vec<usize> = a.shape().to_vec();
    shape.extend(b.shape());
    out.into_shape(IxDyn(&shape)).expect("shape")
}

/// Move the last axis of `t` to position `target` (other axes keep order).
fn move_last_axis_to(t: &ArrayD<C64>, target: usize) -> ArrayD<C64> {
    let n = t.ndim();
    if target == n - 1 {
        return t.clone();
    }
    let mut perm: Vec<usize> = Vec::with_capacity(n);
    for ax in 0..n - 1 {
        if ax == target {
            perm.push(n - 1);
        }
        perm.push(ax);
    }
    t.view().permuted_axes(IxDyn(&perm)).as_standard_layout().to_owned()
}

/// Relative Frobenius difference of two multi-leg coefficient tensors.
pub fn tensor_rel_diff(a: &ArrayD<C64>, b: &ArrayD<C64>) -> f64 {
    let na = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let nb = b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let d = (a - b).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    d / na.max(nb).max(DENOM_FLOOR)
}

/// An element of a weak Hopf algebra: coefficients plus a handle to the
/// algebra they are coefficients in.
#[derive(Debug, Clone)]
pub struct AlgebraElement {
    pub algebra: Arc<WeakHopfAlgebra>,
    pub coeffs: Array1<C64>,
}

impl AlgebraElement {
    pub fn new(algebra: Arc<WeakHopfAlgebra>, coeffs: Array1<C64>) -> Result<Self, AlgebraError> {
        if coeffs.len() != algebra.dim {
            return Err(AlgebraError::InvalidInput(format!(
                "element has {} coefficients in a dim-{} algebra",
                coeffs.len(),
                algebra.dim
            )));
        }
        Ok(Self { algebra, coeffs })
    }

    fn same_algebra(&self, other: &Self) -> Result<(), AlgebraError> {
        if Arc::ptr_eq(&self.algebra, &other.algebra) {
            Ok(())
        } else {
            Err(AlgebraError::AlgebraMismatch)
        }
    }

    pub fn product(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_algebra(other)?;
        Ok(Self { algebra: self.algebra.clone(), coeffs: self.algebra.product(&self.coeffs, &other.coeffs) })
    }

    pub fn star(&self) -> Self {
        Self { algebra: self.algebra.clone(), coeffs: self.algebra.apply_star(&self.coeffs) }
    }

    pub fn antipode(&self) -> Self {
        Self { algebra: self.algebra.clone(), coeffs: self.algebra.apply_antipode(&self.coeffs) }
    }

    pub fn counit(&self) -> C64 {
        self.algebra.apply_counit(&self.coeffs)
    }

    pub fn coproduct(&self) -> Array2<C64> {
        self.algebra.coproduct(&self.coeffs)
    }
}

/// A functional on a weak Hopf algebra, stored in the dual basis
/// (`⟨φ, e_i⟩ = coeffs[i]`); equivalently an element of the dual algebra.
#[derive(Debug, Clone)]
pub struct DualElement {
    /// The algebra the functional acts on.
    pub algebra: Arc<WeakHopfAlgebra>,
    pub coeffs: Array1<C64>,
}

impl DualElement {
    pub fn new(algebra: Arc<WeakHopfAlgebra>, coeffs: Array1<C64>) -> Result<Self, AlgebraError> {
        if coeffs.len() != algebra.dim {
            return Err(AlgebraError::InvalidInput(format!(
                "functional has {} coefficients on a dim-{} algebra",
                coeffs.len(),
                algebra.dim
            )));
        }
        Ok(Self { algebra, coeffs })
    }

    /// Bilinear pairing `⟨φ, x⟩ = Σ_i φ_i x_i` (no conjugation).
    pub fn pair(&self, x: &AlgebraElement) -> Result<C64, AlgebraError> {
        if !Arc::ptr_eq(&self.algebra, &x.algebra) {
            return Err(AlgebraError::AlgebraMismatch);
        }
        Ok(self.coeffs.dot(&x.coeffs))
    }
}
