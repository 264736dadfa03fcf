//! Labeled dense tensors.
//!
//! A [`LabeledTensor`] is a dense complex tensor whose axes carry [`Label`]s:
//! a globally meaningful name, the axis dimension, whether the leg is
//! physical or virtual, an arrow (in/out), and a color tag (black/white) used
//! by the PEPS layer to distinguish the two tensor species.  Conjugation
//! flips arrows and swaps colors, so a network and its conjugate can be glued
//! leg-by-leg without bookkeeping at the call site.
//!
//! Networks of labeled tensors live in [`network`].

pub mod network;

pub use network::{ContractOpts, TensorNetwork};

use ndarray::{ArrayD, Axis, Ix0, Ix2, IxDyn};
use thiserror::Error;

use crate::C64;

/// Whether a leg carries a physical or a virtual index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LegKind {
    Physical,
    Virtual,
}

/// Leg orientation.  Bonds always connect an `Out` leg to an `In` leg.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arrow {
    In,
    Out,
}

impl Arrow {
    pub fn flipped(self) -> Self {
        match self {
            Arrow::In => Arrow::Out,
            Arrow::Out => Arrow::In,
        }
    }
}

/// Color tag distinguishing the two PEPS tensor species.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Color {
    Black,
    White,
    None,
}

impl Color {
    pub fn swapped(self) -> Self {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
            Color::None => Color::None,
        }
    }
}

/// Metadata of one tensor axis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Label {
    pub name: String,
    pub dim: usize,
    pub kind: LegKind,
    pub arrow: Arrow,
    pub color: Color,
}

impl Label {
    pub fn new(name: impl Into<String>, dim: usize, kind: LegKind, arrow: Arrow, color: Color) -> Self {
        Self { name: name.into(), dim, kind, arrow, color }
    }

    /// Virtual leg with no color.
    pub fn virt(name: impl Into<String>, dim: usize, arrow: Arrow) -> Self {
        Self::new(name, dim, LegKind::Virtual, arrow, Color::None)
    }

    /// Physical leg with no color.
    pub fn phys(name: impl Into<String>, dim: usize, arrow: Arrow) -> Self {
        Self::new(name, dim, LegKind::Physical, arrow, Color::None)
    }

    pub fn with_color(mut self, color: Color) -> Self {
        self.color = color;
        self
    }
}

/// Errors from tensor and network operations.
#[derive(Debug, Error)]
pub enum TensorError {
    /// Axis dimensions disagree with the data shape or with a bonded partner.
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    /// A label name was not found on the tensor it was looked up on.
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    /// Two axes of one tensor (or two tensors of one network) share a name.
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    /// A bond connects two legs whose arrows do not oppose or whose kinds differ.
    #[error("incompatible bond between `{0}` and `{1}`")]
    ArrowClash(String, String),
    /// A contraction intermediate would exceed the configured element budget.
    #[error("contraction intermediate of {elements} elements exceeds budget {budget}")]
    BudgetExceeded { elements: u128, budget: u128 },
    /// The network is malformed (e.g. a leg used by two bonds).
    #[error("malformed network: {0}")]
    Malformed(String),
}

/// A dense complex tensor with labeled axes.
#[derive(Debug, Clone)]
pub struct LabeledTensor {
    pub data: ArrayD<C64>,
    pub labels: Vec<Label>,
}

impl LabeledTensor {
    /// Build a tensor, checking that the labels match the data shape and have
    /// unique names.
    pub fn new(data: ArrayD<C64>, labels: Vec<Label>) -> Result<Self, TensorError> {
        if data.ndim() != labels.len() {
            return Err(TensorError::DimMismatch(format!(
                "tensor has {} axes but {} labels",
                data.ndim(),
                labels.len()
            )));
        }
        for (ax, l) in labels.iter().enumerate() {
            if data.shape()[ax] != l.dim {
                return Err(TensorError::DimMismatch(format!(
                    "axis {} has dimension {} but label `{}` says {}",
                    ax,
                    data.shape()[ax],
                    l.name,
                    l.dim
                )));
            }
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].iter().any(|m| m.name == l.name) {
                return Err(TensorError::DuplicateLabel(l.name.clone()));
            }
        }
        Ok(Self { data, labels })
    }

    /// Rank-0 (scalar) tensor.
    pub fn scalar(value: C64) -> Self {
        Self { data: ArrayD::from_elem(IxDyn(&[]), value), labels: Vec::new() }
    }

    /// Rank-1 tensor from a vector.
    pub fn from_vec(v: ndarray::Array1<C64>, label: Label) -> Result<Self, TensorError> {
        Self::new(v.into_dyn(), vec![label])
    }

    /// Rank-2 tensor from a matrix; axis 0 gets `row`, axis 1 gets `col`.
    pub fn from_matrix(m: ndarray::Array2<C64>, row: Label, col: Label) -> Result<Self, TensorError> {
        Self::new(m.into_dyn(), vec![row, col])
    }

    /// Identity δ tensor between two legs of equal dimension.
    pub fn delta(row: Label, col: Label) -> Result<Self, TensorError> {
        if row.dim != col.dim {
            return Err(TensorError::DimMismatch(format!(
                "delta legs `{}` ({}) and `{}` ({}) differ",
                row.name, row.dim, col.name, col.dim
            )));
        }
        Self::from_matrix(ndarray::Array2::eye(row.dim), row, col)
    }

    /// Number of axes.
    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    /// Total number of elements.
    pub fn elements(&self) -> usize {
        self.data.len()
    }

    /// Position of the axis labeled `name`.
    pub fn axis_of(&self, name: &str) -> Result<usize, TensorError> {
        self.labels
            .iter()
            .position(|l| l.name == name)
            .ok_or_else(|| TensorError::UnknownLabel(name.to_string()))
    }

    /// Extract the scalar value of a rank-0 tensor.
    pub fn into_scalar(self) -> Result<C64, TensorError> {
        self.data
            .into_dimensionality::<Ix0>()
            .map(|a| a.into_scalar())
            .map_err(|_| TensorError::DimMismatch("tensor is not rank 0".into()))
    }

    /// Frobenius norm.
    pub fn fro_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Complex conjugate: conjugates entries, flips every arrow, swaps colors.
    pub fn conj(&self) -> Self {
        let labels = self
            .labels
            .iter()
            .map(|l| Label {
                name: l.name.clone(),
                dim: l.dim,
                kind: l.kind,
                arrow: l.arrow.flipped(),
                color: l.color.swapped(),
            })
            .collect();
        Self { data: self.data.mapv(|z| z.conj()), labels }
    }

    /// Rename a label in place.
    pub fn rename(&mut self, from: &str, to: impl Into<String>) -> Result<(), TensorError> {
        let to = to.into();
        if self.labels.iter().any(|l| l.name == to) {
            return Err(TensorError::DuplicateLabel(to));
        }
        let ax = self.axis_of(from)?;
        self.labels[ax].name = to;
        Ok(())
    }

    /// Add a prefix to every label name.
    pub fn prefix_labels(&mut self, prefix: &str) {
        for l in &mut self.labels {
            l.name = format!("{prefix}{}", l.name);
        }
    }

    /// Return a copy permuted so its axes appear in the order of `names`.
    pub fn permuted(&self, names: &[&str]) -> Result<Self, TensorError> {
        if names.len() != self.rank() {
            return Err(TensorError::DimMismatch(format!(
                "permutation lists {} names for a rank-{} tensor",
                names.len(),
                self.rank()
            )));
        }
        let perm: Vec<usize> = names.iter().map(|n| self.axis_of(n)).collect::<Result<_, _>>()?;
        {
            let mut seen = vec![false; perm.len()];
            for &p in &perm {
                if seen[p] {
                    return Err(TensorError::DuplicateLabel(names[p].to_string()));
                }
                seen[p] = true;
            }
        }
        let data = self
            .data
            .view()
            .permuted_axes(IxDyn(&perm))
            .as_standard_layout()
            .to_owned();
        let labels = perm.iter().map(|&p| self.labels[p].clone()).collect();
        Ok(Self { data, labels })
    }

    /// Fuse the axes named in `parts` (in the given order) into one new leg.
    /// The fused leg inherits kind/arrow/color from the first part.
    pub fn fuse(&self, parts: &[&str], fused: impl Into<String>) -> Result<Self, TensorError> {
        if parts.is_empty() {
            return Err(TensorError::Malformed("fuse of zero legs".into()));
        }
        let rest: Vec<&str> = self
            .labels
            .iter()
            .map(|l| l.name.as_str())
            .filter(|n| !parts.contains(n))
            .collect();
        let order: Vec<&str> = parts.iter().chain(rest.iter()).copied().collect();
        let permuted = self.permuted(&order)?;
        let fused_dim: usize = parts
            .iter()
            .map(|n| permuted.labels[permuted.axis_of(n).unwrap()].dim)
            .product();
        let mut new_shape = vec![fused_dim];
        new_shape.extend(permuted.data.shape()[parts.len()..].iter());
        let first = permuted.labels[0].clone();
        let mut labels = vec![Label { name: fused.into(), dim: fused_dim, ..first }];
        labels.extend(permuted.labels[parts.len()..].iter().cloned());
        let data = permuted
            .data
            .into_shape(IxDyn(&new_shape))
            .map_err(|e| TensorError::DimMismatch(e.to_string()))?;
        Self::new(data, labels)
    }

    /// Matricize: rows fuse `row_names` (in order), columns fuse `col_names`.
    /// Every axis must appear exactly once.
    pub fn to_matrix(
        &self,
        row_names: &[&str],
        col_names: &[&str],
    ) -> Result<ndarray::Array2<C64>, TensorError> {
        if row_names.len() + col_names.len() != self.rank() {
            return Err(TensorError::DimMismatch(format!(
                "to_matrix covers {} of {} axes",
                row_names.len() + col_names.len(),
                self.rank()
            )));
        }
        let order: Vec<&str> = row_names.iter().chain(col_names.iter()).copied().collect();
        let permuted = self.permuted(&order)?;
        let rdim: usize = permuted.data.shape()[..row_names.len()].iter().product();
        let cdim: usize = permuted.data.shape()[row_names.len()..].iter().product();
        permuted
            .data
            .into_shape(IxDyn(&[rdim, cdim]))
            .map_err(|e| TensorError::DimMismatch(e.to_string()))?
            .into_dimensionality::<Ix2>()
            .map_err(|e| TensorError::DimMismatch(e.to_string()))
    }

    /// Partial trace over the pair of axes named `a` and `b` (equal dims).
    pub fn trace_pair(&self, a: &str, b: &str) -> Result<Self, TensorError> {
        let ax_a = self.axis_of(a)?;
        let ax_b = self.axis_of(b)?;
        if ax_a == ax_b {
            return Err(TensorError::Malformed(format!("trace of axis `{a}` with itself")));
        }
        let da = self.labels[ax_a].dim;
        if da != self.labels[ax_b].dim {
            return Err(TensorError::DimMismatch(format!(
                "trace legs `{a}` ({da}) and `{b}` ({}) differ",
                self.labels[ax_b].dim
            )));
        }
        let rest: Vec<&str> = self
            .labels
            .iter()
            .map(|l| l.name.as_str())
            .filter(|n| *n != a && *n != b)
            .collect();
        let mut order = rest.clone();
        order.push(a);
        order.push(b);
        let permuted = self.permuted(&order)?;
        let rest_dims: Vec<usize> = permuted.data.shape()[..rest.len()].to_vec();
        let rest_len: usize = rest_dims.iter().product();
        let flat = permuted
            .data
            .into_shape(IxDyn(&[rest_len, da, da]))
            .map_err(|e| TensorError::DimMismatch(e.to_string()))?;
        let mut out = ndarray::Array1::<C64>::zeros(rest_len);
        for i in 0..da {
            out += &flat.index_axis(Axis(2), i).index_axis(Axis(1), i);
        }
        let data = out
            .into_shape(IxDyn(&rest_dims))
            .map_err(|e| TensorError::DimMismatch(e.to_string()))?;
        let labels = permuted.labels[..rest.len()].to_vec();
        Self::new(data, labels)
    }

    /// Contract `self` with `other` over the given `(self_label, other_label)`
    /// pairs (empty pairs = outer product).  Result labels: uncontracted axes
    /// of `self` in order, then uncontracted axes of `other` in order.
    pub fn contract_with(
        &self,
        other: &Self,
        pairs: &[(&str, &str)],
    ) -> Result<Self, TensorError> {
        for (a, b) in pairs {
            let la = &self.labels[self.axis_of(a)?];
            let lb = &other.labels[other.axis_of(b)?];
            if la.dim != lb.dim {
                return Err(TensorError::DimMismatch(format!(
                    "bond `{a}`~`{b}`: dims {} vs {}",
                    la.dim, lb.dim
                )));
            }
        }
        let a_contr: Vec<&str> = pairs.iter().map(|p| p.0).collect();
        let b_contr: Vec<&str> = pairs.iter().map(|p| p.1).collect();
        let a_free: Vec<&str> = self
            .labels
            .iter()
            .map(|l| l.name.as_str())
            .filter(|n| !a_contr.contains(n))
            .collect();
        let b_free: Vec<&str> = other
            .labels
            .iter()
            .map(|l| l.name.as_str())
            .filter(|n| !b_contr.contains(n))
            .collect();

        let a_order: Vec<&str> = a_free.iter().chain(a_contr.iter()).copied().collect();
        let b_order: Vec<&str> = b_contr.iter().chain(b_free.iter()).copied().collect();
        let ap = self.permuted(&a_order)?;
        let bp = other.permuted(&b_order)?;

        let m: usize = ap.data.shape()[..a_free.len()].iter().product();
        let k: usize = ap.data.shape()[a_free.len()..].iter().product();
        let n: usize = bp.data.shape()[b_contr.len()..].iter().product();

        let a_mat = ap
            .data
            .view()
            .into_shape((m, k))
            .map_err(|e| TensorError::DimMismatch(e.to_string()))?;
        let b_mat = bp
            .data
            .view()
            .into_shape((k, n))
            .map_err(|e| TensorError::DimMismatch(e.to_string()))?;
        let c = a_mat.dot(&b_mat);

        let mut out_dims: Vec<usize> = ap.data.shape()[..a_free.len()].to_vec();
        out_dims.extend(bp.data.shape()[b_contr.len()..].iter());
        let mut labels: Vec<Label> = ap.labels[..a_free.len()].to_vec();
        labels.extend(bp.labels[b_contr.len()..].iter().cloned());
        let data = c
            .into_shape(IxDyn(&out_dims))
            .map_err(|e| TensorError::DimMismatch(e.to_string()))?;
        Self::new(data, labels)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn permute_and_matricize_round_trip() {
        let m = array![[c(1.0, 0.0), c(2.0, 0.0)], [c(3.0, 0.0), c(4.0, 1.0)]];
        let t = LabeledTensor::from_matrix(
            m.clone(),
            Label::virt("r", 2, Arrow::Out),
            Label::virt("c", 2, Arrow::In),
        )
        .unwrap();
        let back = t.permuted(&["c", "r"]).unwrap().to_matrix(&["r"], &["c"]).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn contract_matches_matrix_product() {
        let a = array![[c(1.0, 0.0), c(0.0, 2.0)], [c(-1.0, 0.5), c(3.0, 0.0)]];
        let b = array![[c(0.0, 1.0), c(1.0, 0.0)], [c(2.0, 0.0), c(0.0, -1.0)]];
        let ta = LabeledTensor::from_matrix(
            a.clone(),
            Label::virt("i", 2, Arrow::Out),
            Label::virt("k", 2, Arrow::In),
        )
        .unwrap();
        let tb = LabeledTensor::from_matrix(
            b.clone(),
            Label::virt("k2", 2, Arrow::Out),
            Label::virt("j", 2, Arrow::In),
        )
        .unwrap();
        let tc = ta.contract_with(&tb, &[("k", "k2")]).unwrap();
        let prod = tc.to_matrix(&["i"], &["j"]).unwrap();
        assert!(crate::linalg::rel_diff(&prod, &a.dot(&b)) < 1e-15);
    }

    #[test]
    fn trace_pair_matches_matrix_trace() {
        let a = array![[c(1.0, 0.0), c(0.0, 2.0)], [c(-1.0, 0.5), c(3.0, 0.0)]];
        let t = LabeledTensor::from_matrix(
            a.clone(),
            Label::virt("i", 2, Arrow::Out),
            Label::virt("j", 2, Arrow::In),
        )
        .unwrap();
        let tr = t.trace_pair("i", "j").unwrap().into_scalar().unwrap();
        assert!((tr - (a[(0, 0)] + a[(1, 1)])).norm() < 1e-15);
    }

    #[test]
    fn conj_flips_arrows_and_colors() {
        let t = LabeledTensor::from_matrix(
            array![[c(1.0, 2.0)]],
            Label::phys("p", 1, Arrow::Out).with_color(Color::Black),
            Label::virt("v", 1, Arrow::In),
        )
        .unwrap();
        let tc = t.conj();
        assert_eq!(tc.labels[0].arrow, Arrow::In);
        assert_eq!(tc.labels[0].color, Color::White);
        assert_eq!(tc.labels[1].arrow, Arrow::Out);
        assert_eq!(tc.data[[0, 0]], c(1.0, -2.0));
        // Involutive.
        let tcc = tc.conj();
        assert_eq!(tcc.labels[0].color, Color::Black);
        assert_eq!(tcc.data[[0, 0]], c(1.0, 2.0));
    }

    #[test]
    fn fuse_orders_indices_row_major() {
        // t[i,j] with i slow, j fast when fused as (i,j).
        let mut data = ArrayD::<C64>::zeros(IxDyn(&[2, 3]));
        for i in 0..2 {
            for j in 0..3 {
                data[[i, j]] = c((3 * i + j) as f64, 0.0);
            }
        }
        let t = LabeledTensor::new(
            data,
            vec![Label::virt("i", 2, Arrow::Out), Label::virt("j", 3, Arrow::Out)],
        )
        .unwrap();
        let f = t.fuse(&["i", "j"], "ij").unwrap();
        assert_eq!(f.labels[0].dim, 6);
        for k in 0..6 {
            assert_eq!(f.data[[k]], c(k as f64, 0.0));
        }
    }
}
