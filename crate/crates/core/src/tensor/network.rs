//! Tensor networks and deterministic greedy contraction.
//!
//! A [`TensorNetwork`] is a list of labeled tensors plus a bond list; label
//! names are globally unique across the network, so a bond is just a pair of
//! label names (with opposite arrows and equal dimensions).  Contraction
//! picks, at every step, the pair of tensors whose pairwise contraction has
//! the smallest result size, breaking ties lexicographically on the smallest
//! bond name between them — a deterministic plan that is cheap to compute
//! and adequate at desk scale.
//!
//! [`network_norm_difference`] compares two networks with the same open-leg
//! signature.  When both sides fit the materialization budget it contracts
//! them to dense tensors and takes an exact Frobenius difference (floor
//! ~1e-14 relative).  Otherwise it falls back to the double-layer evaluation
//! `‖A−B‖² = ⟨A,A⟩+⟨B,B⟩−2Re⟨A,B⟩`, whose cancellation floor is ~√ε ≈ 1e-7
//! relative; callers needing tighter comparisons on huge networks should use
//! probe matrix elements instead.

use std::collections::BTreeMap;

use super::{Label, LabeledTensor, TensorError};
use crate::tol::DENOM_FLOOR;
use crate::C64;

/// Options controlling contraction.
#[derive(Debug, Clone, Copy)]
pub struct ContractOpts {
    /// Maximum number of elements allowed in any intermediate tensor.
    pub max_intermediate: u128,
}

impl Default for ContractOpts {
    fn default() -> Self {
        // 2^25 complex doubles = 512 MiB; transiently affordable at desk scale.
        Self { max_intermediate: 1 << 25 }
    }
}

/// Budget below which `network_norm_difference` materializes open tensors.
pub const MATERIALIZE_CAP: u128 = 1 << 24;

/// A bond: two label names that are contracted against each other.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bond {
    pub a: String,
    pub b: String,
}

/// A network of labeled tensors with globally unique label names.
#[derive(Debug, Clone, Default)]
pub struct TensorNetwork {
    tensors: Vec<LabeledTensor>,
    bonds: Vec<Bond>,
    /// Open legs in output order; filled by `finalize` or set explicitly.
    open_order: Vec<String>,
}

impl TensorNetwork {
    pub fn new() -> Self {
        Self::default()
    }

    /// Add a tensor; all of its label names must be new to the network.
    pub fn add(&mut self, t: LabeledTensor) -> Result<usize, TensorError> {
        for l in &t.labels {
            if self.find_label(&l.name).is_some() {
                return Err(TensorError::DuplicateLabel(l.name.clone()));
            }
        }
        self.tensors.push(t);
        Ok(self.tensors.len() - 1)
    }

    /// Declare a bond between two labels (checks existence, dims, arrows, kind).
    pub fn bond(&mut self, a: &str, b: &str) -> Result<(), TensorError> {
        let (ta, la) = self
            .find_label(a)
            .ok_or_else(|| TensorError::UnknownLabel(a.to_string()))?;
        let (tb, lb) = self
            .find_label(b)
            .ok_or_else(|| TensorError::UnknownLabel(b.to_string()))?;
        let la = &self.tensors[ta].labels[la];
        let lb = &self.tensors[tb].labels[lb];
        if la.dim != lb.dim {
            return Err(TensorError::DimMismatch(format!(
                "bond `{a}`~`{b}`: dims {} vs {}",
                la.dim, lb.dim
            )));
        }
        if la.arrow == lb.arrow {
            return Err(TensorError::ArrowClash(a.to_string(), b.to_string()));
        }
        if la.kind != lb.kind {
            return Err(TensorError::ArrowClash(a.to_string(), b.to_string()));
        }
        for bond in &self.bonds {
            for end in [a, b] {
                if bond.a == end || bond.b == end {
                    return Err(TensorError::Malformed(format!("label `{end}` used by two bonds")));
                }
            }
        }
        self.bonds.push(Bond { a: a.to_string(), b: b.to_string() });
        Ok(())
    }

    /// Set the output order of the open legs (must be exactly the open legs).
    pub fn set_open_order(&mut self, names: &[&str]) -> Result<(), TensorError> {
        let mut open = self.open_legs();
        open.sort();
        let mut given: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        given.sort();
        if open != given {
            return Err(TensorError::Malformed(format!(
                "open order {:?} does not match open legs {:?}",
                names, open
            )));
        }
        self.open_order = names.iter().map(|s| s.to_string()).collect();
        Ok(())
    }

    /// The open legs (not in any bond) in deterministic (tensor, axis) order.
    pub fn open_legs(&self) -> Vec<String> {
        let mut bonded: Vec<&str> = Vec::with_capacity(2 * self.bonds.len());
        for b in &self.bonds {
            bonded.push(&b.a);
            bonded.push(&b.b);
        }
        let mut out = Vec::new();
        for t in &self.tensors {
            for l in &t.labels {
                if !bonded.contains(&l.name.as_str()) {
                    out.push(l.name.clone());
                }
            }
        }
        out
    }

    /// Open-leg labels (metadata) in output order.
    pub fn open_signature(&self) -> Vec<Label> {
        let order = if self.open_order.is_empty() { self.open_legs() } else { self.open_order.clone() };
        order
            .iter()
            .map(|n| {
                let (t, a) = self.find_label(n).expect("open label exists");
                self.tensors[t].labels[a].clone()
            })
            .collect()
    }

    pub fn tensors(&self) -> &[LabeledTensor] {
        &self.tensors
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    fn find_label(&self, name: &str) -> Option<(usize, usize)> {
        for (ti, t) in self.tensors.iter().enumerate() {
            if let Some(ax) = t.labels.iter().position(|l| l.name == name) {
                return Some((ti, ax));
            }
        }
        None
    }

    /// Total elements if the open legs were materialized as one tensor.
    pub fn open_elements(&self) -> u128 {
        self.open_signature().iter().map(|l| l.dim as u128).product()
    }

    /// Contract the network to a single tensor with the open legs in output
    /// order, using the deterministic greedy plan.
    pub fn contract(&self, opts: &ContractOpts) -> Result<LabeledTensor, TensorError> {
        self.contract_with_plan(opts, false)
    }

    /// Contract with the tie-break (and pair preference) reversed — used by
    /// tests to confirm plan independence of the result.
    pub fn contract_reversed_greedy(&self, opts: &ContractOpts) -> Result<LabeledTensor, TensorError> {
        self.contract_with_plan(opts, true)
    }

    fn contract_with_plan(&self, opts: &ContractOpts, reversed: bool) -> Result<LabeledTensor, TensorError> {
        let open_order = if self.open_order.is_empty() { self.open_legs() } else { self.open_order.clone() };

        // Working state: slots of tensors and a map label name -> slot.
        let mut slots: Vec<Option<LabeledTensor>> = self.tensors.iter().cloned().map(Some).collect();
        let mut owner: BTreeMap<String, usize> = BTreeMap::new();
        for (ti, t) in self.tensors.iter().enumerate() {
            for l in &t.labels {
                owner.insert(l.name.clone(), ti);
            }
        }
        let mut bonds: Vec<Bond> = self.bonds.clone();

        // Resolve self-bonds by partial trace.
        let trace_self_bonds =
            |slots: &mut Vec<Option<LabeledTensor>>, owner: &mut BTreeMap<String, usize>, bonds: &mut Vec<Bond>| -> Result<(), TensorError> {
                loop {
                    let pos = bonds.iter().position(|b| owner[&b.a] == owner[&b.b]);
                    let Some(pos) = pos else { return Ok(()) };
                    let bond = bonds.remove(pos);
                    let ti = owner[&bond.a];
                    let t = slots[ti].take().expect("live slot");
                    let traced = t.trace_pair(&bond.a, &bond.b)?;
                    owner.remove(&bond.a);
                    owner.remove(&bond.b);
                    slots[ti] = Some(traced);
                }
            };

        trace_self_bonds(&mut slots, &mut owner, &mut bonds)?;

        while !bonds.is_empty() {
            // Enumerate candidate tensor pairs that share at least one bond.
            let mut best: Option<(u128, String, usize, usize)> = None;
            for b in &bonds {
                let (ti, tj) = (owner[&b.a], owner[&b.b]);
                let (ti, tj) = if ti < tj { (ti, tj) } else { (tj, ti) };
                // Result size = product of dims of all labels of ti and tj that
                // are not contracted between them.
                let shared: Vec<&Bond> = bonds
                    .iter()
                    .filter(|bb| {
                        let (x, y) = (owner[&bb.a], owner[&bb.b]);
                        (x.min(y), x.max(y)) == (ti, tj)
                    })
                    .collect();
                let shared_names: Vec<&str> = shared
                    .iter()
                    .flat_map(|bb| [bb.a.as_str(), bb.b.as_str()])
                    .collect();
                let size_of = |t: &LabeledTensor| -> u128 {
                    t.labels
                        .iter()
                        .filter(|l| !shared_names.contains(&l.name.as_str()))
                        .map(|l| l.dim as u128)
                        .product()
                };
                let result_size = size_of(slots[ti].as_ref().unwrap()) * size_of(slots[tj].as_ref().unwrap());
                let min_bond_name = shared
                    .iter()
                    .map(|bb| bb.a.as_str().min(bb.b.as_str()))
                    .min()
                    .unwrap()
                    .to_string();
                let key_better = |best: &Option<(u128, String, usize, usize)>| -> bool {
                    match best {
                        None => true,
                        Some((bs, bn, _, _)) => {
                            if reversed {
                                (result_size, &min_bond_name) > (*bs, bn)
                            } else {
                                (result_size, &min_bond_name) < (*bs, bn)
                            }
                        }
                    }
                };
                if key_better(&best) {
                    best = Some((result_size, min_bond_name, ti, tj));
                }
            }
            let (result_size, _, ti, tj) = best.expect("bonds nonempty");
            if result_size > opts.max_intermediate {
                return Err(TensorError::BudgetExceeded {
                    elements: result_size,
                    budget: opts.max_intermediate,
                });
            }

            let shared: Vec<Bond> = bonds
                .iter()
                .filter(|bb| {
                    let (x, y) = (owner[&bb.a], owner[&bb.b]);
                    (x.min(y), x.max(y)) == (ti, tj)
                })
                .cloned()
                .collect();
            bonds.retain(|bb| {
                let (x, y) = (owner[&bb.a], owner[&bb.b]);
                (x.min(y), x.max(y)) != (ti, tj)
            });

            let ta = slots[ti].take().expect("live slot");
            let tb = slots[tj].take().expect("live slot");
            // Orient each shared bond as (label on ta, label on tb).
            let pairs: Vec<(String, String)> = shared
                .iter()
                .map(|b| {
                    if owner[&b.a] == ti {
                        (b.a.clone(), b.b.clone())
                    } else {
                        (b.b.clone(), b.a.clone())
                    }
                })
                .collect();
            let pair_refs: Vec<(&str, &str)> = pairs.iter().map(|(x, y)| (x.as_str(), y.as_str())).collect();
            let merged = ta.contract_with(&tb, &pair_refs)?;
            for (x, y) in &pairs {
                owner.remove(x);
                owner.remove(y);
            }
            for l in &merged.labels {
                owner.insert(l.name.clone(), ti);
            }
            slots[ti] = Some(merged);
            slots[tj] = None;

            trace_self_bonds(&mut slots, &mut owner, &mut bonds)?;
        }

        // Outer-product any disconnected remnants in slot order.
        let mut live: Vec<LabeledTensor> = slots.into_iter().flatten().collect();
        if live.is_empty() {
            return Ok(LabeledTensor::scalar(C64::new(1.0, 0.0)));
        }
        let mut acc = live.remove(0);
        for t in live {
            let elements = (acc.elements() as u128) * (t.elements() as u128);
            if elements > opts.max_intermediate {
                return Err(TensorError::BudgetExceeded { elements, budget: opts.max_intermediate });
            }
            acc = acc.contract_with(&t, &[])?;
        }

        let refs: Vec<&str> = open_order.iter().map(|s| s.as_str()).collect();
        acc.permuted(&refs)
    }
}

/// `⟨A, B⟩ = Σ conj(A[idx]) B[idx]` over the shared open signature, evaluated
/// as one closed network (conjugate of `a` glued leg-by-leg onto `b`).
pub fn network_inner(
    a: &TensorNetwork,
    b: &TensorNetwork,
    opts: &ContractOpts,
) -> Result<C64, TensorError> {
    let sig_a = a.open_signature();
    let sig_b = b.open_signature();
    if sig_a.len() != sig_b.len()
        || sig_a.iter().zip(&sig_b).any(|(x, y)| x.dim != y.dim)
    {
        return Err(TensorError::DimMismatch(
            "network_inner: open signatures differ".into(),
        ));
    }
    let mut net = TensorNetwork::new();
    // Conjugated copy of a with prefixed labels.
    let mut a_names = Vec::new();
    for t in a.tensors() {
        let mut tc = t.conj();
        tc.prefix_labels("conjA\u{1}:");
        net.add(tc)?;
    }
    for l in &sig_a {
        a_names.push(format!("conjA\u{1}:{}", l.name));
    }
    for bond in a.bonds() {
        net.bond(&format!("conjA\u{1}:{}", bond.a), &format!("conjA\u{1}:{}", bond.b))?;
    }
    // Plain copy of b.
    let mut b_names = Vec::new();
    for t in b.tensors() {
        let mut tb = t.clone();
        tb.prefix_labels("netB\u{1}:");
        net.add(tb)?;
    }
    for l in &sig_b {
        b_names.push(format!("netB\u{1}:{}", l.name));
    }
    for bond in b.bonds() {
        net.bond(&format!("netB\u{1}:{}", bond.a), &format!("netB\u{1}:{}", bond.b))?;
    }
    // Glue the open legs pairwise.
    for (an, bn) in a_names.iter().zip(&b_names) {
        net.bond(an, bn)?;
    }
    net.contract(opts)?.into_scalar()
}

/// Relative Frobenius difference of two networks with the same open-leg
/// signature: `‖A−B‖ / max(‖A‖, ‖B‖, floor)`.
///
/// Materializes both sides and subtracts exactly when the open tensor fits
/// [`MATERIALIZE_CAP`] (and contraction stays within budget); otherwise uses
/// the double-layer inner-product evaluation, which has a relative floor of
/// roughly √(machine ε) ≈ 1e-7 when A ≈ B.
pub fn network_norm_difference(
    a: &TensorNetwork,
    b: &TensorNetwork,
    opts: &ContractOpts,
) -> Result<f64, TensorError> {
    let sig_a = a.open_signature();
    let sig_b = b.open_signature();
    if sig_a.len() != sig_b.len() || sig_a.iter().zip(&sig_b).any(|(x, y)| x.dim != y.dim) {
        return Err(TensorError::DimMismatch(
            "network_norm_difference: open signatures differ".into(),
        ));
    }
    if a.open_elements() <= MATERIALIZE_CAP {
        let ta = a.contract(opts);
        let tb = b.contract(opts);
        if let (Ok(ta), Ok(mut tb)) = (ta, tb) {
            // Align b's open legs with a's by position.
            for (la, lb) in sig_a.iter().zip(&sig_b) {
                if la.name != lb.name {
                    // Renaming to a's names; positions correspond.
                    let unique = format!("{}\u{2}", la.name);
                    tb.rename(&lb.name, unique)?;
                }
            }
            for la in &sig_a {
                let unique = format!("{}\u{2}", la.name);
                if tb.labels.iter().any(|l| l.name == unique) {
                    tb.rename(&unique.clone(), la.name.clone())?;
                }
            }
            let order: Vec<&str> = sig_a.iter().map(|l| l.name.as_str()).collect();
            let tb = tb.permuted(&order)?;
            let ta = ta.permuted(&order)?;
            let na = ta.fro_norm();
            let nb = tb.fro_norm();
            let diff = (&ta.data - &tb.data).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            return Ok(diff / na.max(nb).max(DENOM_FLOOR));
        }
        // Fall through to double-layer if materialization exceeded budget.
    }
    let naa = network_inner(a, a, opts)?.re;
    let nbb = network_inner(b, b, opts)?.re;
    let nab = network_inner(a, b, opts)?.re;
    let diff2 = (naa + nbb - 2.0 * nab).max(0.0);
    Ok(diff2.sqrt() / naa.max(0.0).sqrt().max(nbb.max(0.0).sqrt()).max(DENOM_FLOOR))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{Arrow, Label, LegKind};
    use ndarray::{ArrayD, IxDyn};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_tensor(rng: &mut impl Rng, labels: Vec<Label>) -> LabeledTensor {
        let shape: Vec<usize> = labels.iter().map(|l| l.dim).collect();
        let mut data = ArrayD::<C64>::zeros(IxDyn(&shape));
        for v in data.iter_mut() {
            *v = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
        LabeledTensor::new(data, labels).unwrap()
    }

    /// Brute-force oracle: sum over all bond index assignments elementwise.
    fn brute_force(net: &TensorNetwork) -> LabeledTensor {
        let open = net.open_signature();
        let bonds = net.bonds().to_vec();
        let open_dims: Vec<usize> = open.iter().map(|l| l.dim).collect();
        let bond_dims: Vec<usize> = bonds
            .iter()
            .map(|b| {
                net.tensors()
                    .iter()
                    .find_map(|t| t.labels.iter().find(|l| l.name == b.a).map(|l| l.dim))
                    .unwrap()
            })
            .collect();
        let mut out = ArrayD::<C64>::zeros(IxDyn(&open_dims));
        let mut open_idx = vec![0usize; open.len()];
        loop {
            // Sum over bond assignments.
            let mut bond_idx = vec![0usize; bonds.len()];
            let mut acc = C64::new(0.0, 0.0);
            loop {
                // Product over tensors with indices looked up by label.
                let mut prod = C64::new(1.0, 0.0);
                for t in net.tensors() {
                    let mut idx = Vec::with_capacity(t.rank());
                    for l in &t.labels {
                        if let Some(p) = open.iter().position(|o| o.name == l.name) {
                            idx.push(open_idx[p]);
                        } else {
                            let bpos = bonds
                                .iter()
                                .position(|b| b.a == l.name || b.b == l.name)
                                .unwrap();
                            idx.push(bond_idx[bpos]);
                        }
                    }
                    prod *= t.data[IxDyn(&idx)];
                }
                acc += prod;
                // Increment bond multi-index.
                let mut k = 0;
                loop {
                    if k == bonds.len() {
                        break;
                    }
                    bond_idx[k] += 1;
                    if bond_idx[k] < bond_dims[k] {
                        break;
                    }
                    bond_idx[k] = 0;
                    k += 1;
                }
                if k == bonds.len() {
                    break;
                }
            }
            if open.is_empty() {
                out[IxDyn(&[])] = acc;
                break;
            }
            out[IxDyn(&open_idx)] = acc;
            let mut k = 0;
            loop {
                if k == open.len() {
                    break;
                }
                open_idx[k] += 1;
                if open_idx[k] < open_dims[k] {
                    break;
                }
                open_idx[k] = 0;
                k += 1;
            }
            if k == open.len() {
                break;
            }
        }
        let labels = open.clone();
        LabeledTensor::new(out, labels).unwrap()
    }

    fn small_test_network(seed: u64) -> TensorNetwork {
        // A ring of three tensors with one open leg each and one dangling
        // internal trace bond on tensor 0.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut net = TensorNetwork::new();
        let t0 = random_tensor(
            &mut rng,
            vec![
                Label::virt("a_out", 2, Arrow::Out),
                Label::virt("c_in", 3, Arrow::In),
                Label::phys("p0", 2, Arrow::Out),
                Label::virt("s1", 2, Arrow::Out),
                Label::virt("s2", 2, Arrow::In),
            ],
        );
        let t1 = random_tensor(
            &mut rng,
            vec![
                Label::virt("a_in", 2, Arrow::In),
                Label::virt("b_out", 3, Arrow::Out),
                Label::phys("p1", 2, Arrow::Out),
            ],
        );
        let t2 = random_tensor(
            &mut rng,
            vec![
                Label::virt("b_in", 3, Arrow::In),
                Label::virt("c_out", 3, Arrow::Out),
                Label::phys("p2", 2, Arrow::Out),
            ],
        );
        net.add(t0).unwrap();
        net.add(t1).unwrap();
        net.add(t2).unwrap();
        net.bond("a_out", "a_in").unwrap();
        net.bond("b_out", "b_in").unwrap();
        net.bond("c_out", "c_in").unwrap();
        net.bond("s1", "s2").unwrap();
        net.set_open_order(&["p0", "p1", "p2"]).unwrap();
        net
    }

    #[test]
    fn greedy_contraction_matches_brute_force() {
        let net = small_test_network(42);
        let fast = net.contract(&ContractOpts::default()).unwrap();
        let slow = brute_force(&net);
        let diff = (&fast.data - &slow.data).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!(diff / slow.fro_norm() < 1e-13, "diff {}", diff);
    }

    #[test]
    fn reversed_greedy_agrees() {
        let net = small_test_network(43);
        let a = net.contract(&ContractOpts::default()).unwrap();
        let b = net.contract_reversed_greedy(&ContractOpts::default()).unwrap();
        let diff = (&a.data - &b.data).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!(diff / a.fro_norm() < 1e-11);
    }

    #[test]
    fn identical_networks_have_zero_difference() {
        let net = small_test_network(44);
        let d = network_norm_difference(&net, &net, &ContractOpts::default()).unwrap();
        assert!(d < 1e-14, "difference {d}");
    }

    #[test]
    fn inner_product_matches_materialized() {
        let a = small_test_network(45);
        let b = small_test_network(46);
        let ip = network_inner(&a, &b, &ContractOpts::default()).unwrap();
        let ta = a.contract(&ContractOpts::default()).unwrap();
        let tb = b.contract(&ContractOpts::default()).unwrap();
        let direct: C64 = ta
            .data
            .iter()
            .zip(tb.data.iter())
            .map(|(x, y)| x.conj() * y)
            .sum();
        assert!((ip - direct).norm() < 1e-12 * direct.norm().max(1.0));
    }

    #[test]
    fn norm_difference_detects_perturbation() {
        let a = small_test_network(47);
        let mut b = small_test_network(47);
        // Perturb one entry of tensor 1.
        let mut t = b.tensors()[1].clone();
        t.data[IxDyn(&[0, 0, 0])] += C64::new(0.05, 0.0);
        let mut nb = TensorNetwork::new();
        nb.add(b.tensors()[0].clone()).unwrap();
        nb.add(t).unwrap();
        nb.add(b.tensors()[2].clone()).unwrap();
        for bond in b.bonds() {
            nb.bond(&bond.a, &bond.b).unwrap();
        }
        nb.set_open_order(&["p0", "p1", "p2"]).unwrap();
        b = nb;
        let d = network_norm_difference(&a, &b, &ContractOpts::default()).unwrap();
        assert!(d > 1e-4, "difference {d}");
    }

    #[test]
    fn budget_is_enforced() {
        let mut rng = ChaCha8Rng::seed_from_u64(48);
        let mut net = TensorNetwork::new();
        let t0 = random_tensor(
            &mut rng,
            vec![Label::virt("x", 64, Arrow::Out), Label::virt("k1", 2, Arrow::Out)],
        );
        let t1 = random_tensor(
            &mut rng,
            vec![Label::virt("y", 64, Arrow::Out), Label::virt("k2", 2, Arrow::In)],
        );
        net.add(t0).unwrap();
        net.add(t1).unwrap();
        net.bond("k1", "k2").unwrap();
        let opts = ContractOpts { max_intermediate: 1024 };
        assert!(matches!(
            net.contract(&opts),
            Err(TensorError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn open_legs_respect_declared_order() {
        let net = small_test_network(49);
        let t = net.contract(&ContractOpts::default()).unwrap();
        let names: Vec<&str> = t.labels.iter().map(|l| l.name.as_str()).collect();
        assert_eq!(names, vec!["p0", "p1", "p2"]);
        let kinds: Vec<LegKind> = t.labels.iter().map(|l| l.kind).collect();
        assert!(kinds.iter().all(|k| *k == LegKind::Physical));
    }
}
