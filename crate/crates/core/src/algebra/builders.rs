//! Constructors for the standard weak Hopf algebra fixtures: group algebras
//! C[G], function algebras C^G, groupoid algebras, and direct sums.
//!
//! Group and groupoid input data are validated (closure, identity, inverses,
//! associativity) before any structure constants are emitted, so a bad table
//! fails loudly as [`AlgebraError::NotAGroup`] / [`AlgebraError::NotAGroupoid`]
//! rather than as a mysterious axiom residual downstream.

use std::sync::Arc;

use ndarray::{Array1, Array2, Array3};

use super::{AlgebraError, WeakHopfAlgebra};
use crate::C64;

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

/// Validate a group multiplication table `t[i][j] = index of g_i g_j` and
/// return the identity index and the inverse permutation.
fn validate_group(table: &[Vec<usize>]) -> Result<(usize, Vec<usize>), AlgebraError> {
    let n = table.len();
    if n == 0 {
        return Err(AlgebraError::NotAGroup("empty table".into()));
    }
    for (i, row) in table.iter().enumerate() {
        if row.len() != n {
            return Err(AlgebraError::NotAGroup(format!("row {i} has length {}", row.len())));
        }
        for (j, &v) in row.iter().enumerate() {
            if v >= n {
                return Err(AlgebraError::NotAGroup(format!("entry ({i},{j}) = {v} out of range")));
            }
        }
    }
    // Identity.
    let e = (0..n)
        .find(|&e| (0..n).all(|i| table[e][i] == i && table[i][e] == i))
        .ok_or_else(|| AlgebraError::NotAGroup("no identity element".into()))?;
    // Inverses.
    let mut inv = vec![usize::MAX; n];
    for i in 0..n {
        let j = (0..n)
            .find(|&j| table[i][j] == e && table[j][i] == e)
            .ok_or_else(|| AlgebraError::NotAGroup(format!("element {i} has no inverse")))?;
        inv[i] = j;
    }
    // Associativity.
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if table[table[i][j]][k] != table[i][table[j][k]] {
                    return Err(AlgebraError::NotAGroup(format!(
                        "associativity fails at ({i},{j},{k})"
                    )));
                }
            }
        }
    }
    Ok((e, inv))
}

/// Group algebra C[G] from a multiplication table: Δ(g) = g⊗g, ε(g) = 1,
/// S(g) = g⁻¹, g* = g⁻¹.
pub fn build_group_algebra(
    name: impl Into<String>,
    basis_names: Vec<String>,
    table: &[Vec<usize>],
) -> Result<Arc<WeakHopfAlgebra>, AlgebraError> {
    let (_, inv) = validate_group(table)?;
    let n = table.len();
    if basis_names.len() != n {
        return Err(AlgebraError::InvalidInput("basis_names length differs from table".into()));
    }
    let mut mult = Array3::<C64>::zeros((n, n, n));
    let mut comult = Array3::<C64>::zeros((n, n, n));
    let mut antipode = Array2::<C64>::zeros((n, n));
    let mut star = Array2::<C64>::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            mult[(i, j, table[i][j])] = one();
        }
        comult[(i, i, i)] = one();
        antipode[(i, inv[i])] = one();
        star[(i, inv[i])] = one();
    }
    let (e, _) = validate_group(table)?;
    let mut unit = Array1::<C64>::zeros(n);
    unit[e] = one();
    let counit = Array1::<C64>::from_elem(n, one());
    WeakHopfAlgebra::new(name, basis_names, mult, comult, unit, counit, antipode, star)
}

/// Function algebra C^G (the dual of C[G]): pointwise product,
/// Δ(δ_a) = Σ_{bc=a} δ_b ⊗ δ_c, ε(δ_a) = δ_{a,e}, S(δ_a) = δ_{a⁻¹},
/// (δ_a)* = δ_a.
pub fn build_function_algebra(
    name: impl Into<String>,
    basis_names: Vec<String>,
    table: &[Vec<usize>],
) -> Result<Arc<WeakHopfAlgebra>, AlgebraError> {
    let (e, inv) = validate_group(table)?;
    let n = table.len();
    if basis_names.len() != n {
        return Err(AlgebraError::InvalidInput("basis_names length differs from table".into()));
    }
    let mut mult = Array3::<C64>::zeros((n, n, n));
    let mut comult = Array3::<C64>::zeros((n, n, n));
    let mut antipode = Array2::<C64>::zeros((n, n));
    let mut star = Array2::<C64>::zeros((n, n));
    for a in 0..n {
        mult[(a, a, a)] = one();
        antipode[(a, inv[a])] = one();
        star[(a, a)] = one();
        for b in 0..n {
            for c in 0..n {
                if table[b][c] == a {
                    comult[(a, b, c)] = one();
                }
            }
        }
    }
    let unit = Array1::<C64>::from_elem(n, one());
    let mut counit = Array1::<C64>::zeros(n);
    counit[e] = one();
    WeakHopfAlgebra::new(name, basis_names, mult, comult, unit, counit, antipode, star)
}

/// A finite groupoid: morphisms with domain/codomain objects and a partial
/// composition `comp[i][j] = i ∘ j`, defined exactly when `dom(i) = cod(j)`
/// (composition written like matrix products: `i ∘ j` acts by `j` first).
#[derive(Debug, Clone)]
pub struct GroupoidData {
    pub n_objects: usize,
    pub dom: Vec<usize>,
    pub cod: Vec<usize>,
    pub comp: Vec<Vec<Option<usize>>>,
}

fn validate_groupoid(g: &GroupoidData) -> Result<Vec<usize>, AlgebraError> {
    let n = g.dom.len();
    if g.cod.len() != n || g.comp.len() != n || g.comp.iter().any(|r| r.len() != n) {
        return Err(AlgebraError::NotAGroupoid("inconsistent table sizes".into()));
    }
    if g.dom.iter().chain(g.cod.iter()).any(|&o| o >= g.n_objects) {
        return Err(AlgebraError::NotAGroupoid("object index out of range".into()));
    }
    // Composability pattern and typing.
    for i in 0..n {
        for j in 0..n {
            match g.comp[i][j] {
                Some(k) => {
                    if g.dom[i] != g.cod[j] {
                        return Err(AlgebraError::NotAGroupoid(format!(
                            "comp[{i}][{j}] defined but dom({i}) ≠ cod({j})"
                        )));
                    }
                    if k >= n || g.cod[k] != g.cod[i] || g.dom[k] != g.dom[j] {
                        return Err(AlgebraError::NotAGroupoid(format!(
                            "comp[{i}][{j}] = {k} has wrong type"
                        )));
                    }
                }
                None => {
                    if g.dom[i] == g.cod[j] {
                        return Err(AlgebraError::NotAGroupoid(format!(
                            "comp[{i}][{j}] undefined despite dom({i}) = cod({j})"
                        )));
                    }
                }
            }
        }
    }
    // Identities: one per object.
    let mut ids = vec![usize::MAX; g.n_objects];
    for o in 0..g.n_objects {
        let id = (0..n)
            .find(|&m| {
                g.dom[m] == o
                    && g.cod[m] == o
                    && (0..n).all(|f| {
                        (g.dom[f] != o || g.comp[f][m] == Some(f))
                            && (g.cod[f] != o || g.comp[m][f] == Some(f))
                    })
            })
            .ok_or_else(|| AlgebraError::NotAGroupoid(format!("object {o} has no identity")))?;
        ids[o] = id;
    }
    // Inverses.
    for f in 0..n {
        let ok = (0..n).any(|ginv| {
            g.comp[f][ginv] == Some(ids[g.cod[f]]) && g.comp[ginv][f] == Some(ids[g.dom[f]])
        });
        if !ok {
            return Err(AlgebraError::NotAGroupoid(format!("morphism {f} has no inverse")));
        }
    }
    // Associativity where defined.
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let lhs = g.comp[i][j].and_then(|ij| g.comp[ij][k]);
                let rhs = g.comp[j][k].and_then(|jk| g.comp[i][jk]);
                if lhs != rhs {
                    return Err(AlgebraError::NotAGroupoid(format!(
                        "associativity fails at ({i},{j},{k})"
                    )));
                }
            }
        }
    }
    Ok(ids)
}

/// Groupoid algebra C[𝒢]: morphisms as basis, undefined compositions
/// multiply to zero, Δ(f) = f⊗f, ε(f) = 1, S(f) = f⁻¹ = f*.  The unit is the
/// sum of the object identities, so Δ(1) ≠ 1⊗1 as soon as there is more than
/// one object — the genuinely weak case.
pub fn build_groupoid_algebra(
    name: impl Into<String>,
    basis_names: Vec<String>,
    data: &GroupoidData,
) -> Result<Arc<WeakHopfAlgebra>, AlgebraError> {
    let ids = validate_groupoid(data)?;
    let n = data.dom.len();
    if basis_names.len() != n {
        return Err(AlgebraError::InvalidInput("basis_names length differs from morphisms".into()));
    }
    let mut mult = Array3::<C64>::zeros((n, n, n));
    let mut comult = Array3::<C64>::zeros((n, n, n));
    let mut antipode = Array2::<C64>::zeros((n, n));
    let mut star = Array2::<C64>::zeros((n, n));
    for i in 0..n {
        comult[(i, i, i)] = one();
        for j in 0..n {
            if let Some(k) = data.comp[i][j] {
                mult[(i, j, k)] = one();
            }
        }
        let inv = (0..n)
            .find(|&ginv| {
                data.comp[i][ginv] == Some(ids[data.cod[i]])
                    && data.comp[ginv][i] == Some(ids[data.dom[i]])
            })
            .expect("validated");
        antipode[(i, inv)] = one();
        star[(i, inv)] = one();
    }
    let mut unit = Array1::<C64>::zeros(n);
    for &id in &ids {
        unit[id] = one();
    }
    let counit = Array1::<C64>::from_elem(n, one());
    WeakHopfAlgebra::new(name, basis_names, mult, comult, unit, counit, antipode, star)
}

/// The pair groupoid on `n` objects: morphisms (a,b) ~ |a⟩⟨b| with
/// (a,b)∘(b,c) = (a,c).  Its groupoid algebra is the full matrix algebra
/// M_n as a weak Hopf algebra.
pub fn pair_groupoid_algebra(n: usize) -> Result<Arc<WeakHopfAlgebra>, AlgebraError> {
    if n == 0 {
        return Err(AlgebraError::NotAGroupoid("pair groupoid needs at least one object".into()));
    }
    let m = n * n;
    let idx = |a: usize, b: usize| a * n + b;
    let mut dom = vec![0; m];
    let mut cod = vec![0; m];
    let mut comp = vec![vec![None; m]; m];
    for a in 0..n {
        for b in 0..n {
            dom[idx(a, b)] = b;
            cod[idx(a, b)] = a;
            for c in 0..n {
                for d in 0..n {
                    if b == c {
                        comp[idx(a, b)][idx(c, d)] = Some(idx(a, d));
                    }
                }
            }
        }
    }
    let names = (0..n)
        .flat_map(|a| (0..n).map(move |b| format!("e{a}{b}")))
        .collect();
    build_groupoid_algebra(
        format!("C[Pair({n})]"),
        names,
        &GroupoidData { n_objects: n, dom, cod, comp },
    )
}

/// Direct sum of two weak Hopf algebras (all structure maps block-diagonal,
/// unit and counit concatenated).
pub fn direct_sum(
    a: &WeakHopfAlgebra,
    b: &WeakHopfAlgebra,
) -> Result<Arc<WeakHopfAlgebra>, AlgebraError> {
    let (da, db) = (a.dim, b.dim);
    let d = da + db;
    let mut mult = Array3::<C64>::zeros((d, d, d));
    let mut comult = Array3::<C64>::zeros((d, d, d));
    let mut antipode = Array2::<C64>::zeros((d, d));
    let mut star = Array2::<C64>::zeros((d, d));
    let mut unit = Array1::<C64>::zeros(d);
    let mut counit = Array1::<C64>::zeros(d);
    for i in 0..da {
        for j in 0..da {
            for k in 0..da {
                mult[(i, j, k)] = a.mult[(i, j, k)];
                comult[(i, j, k)] = a.comult[(i, j, k)];
            }
        }
        for j in 0..da {
            antipode[(i, j)] = a.antipode[(i, j)];
            star[(i, j)] = a.star[(i, j)];
        }
        unit[i] = a.unit[i];
        counit[i] = a.counit[i];
    }
    for i in 0..db {
        for j in 0..db {
            for k in 0..db {
                mult[(da + i, da + j, da + k)] = b.mult[(i, j, k)];
                comult[(da + i, da + j, da + k)] = b.comult[(i, j, k)];
            }
        }
        for j in 0..db {
            antipode[(da + i, da + j)] = b.antipode[(i, j)];
            star[(da + i, da + j)] = b.star[(i, j)];
        }
        unit[da + i] = b.unit[i];
        counit[da + i] = b.counit[i];
    }
    let names = a
        .basis_names
        .iter()
        .map(|n| format!("0:{n}"))
        .chain(b.basis_names.iter().map(|n| format!("1:{n}")))
        .collect();
    WeakHopfAlgebra::new(format!("{}⊕{}", a.name, b.name), names, mult, comult, unit, counit, antipode, star)
}

/// Multiplication table of the cyclic group Z_n.
pub fn cyclic_table(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect()
}

/// Names for Z_n basis elements: `e, g, g^2, …`.
pub fn cyclic_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|k| match k {
            0 => "e".to_string(),
            1 => "g".to_string(),
            _ => format!("g^{k}"),
        })
        .collect()
}

/// C[Z_n].
pub fn group_algebra_z(n: usize) -> Result<Arc<WeakHopfAlgebra>, AlgebraError> {
    build_group_algebra(format!("C[Z{n}]"), cyclic_names(n), &cyclic_table(n))
}

/// C^{Z_n}.
pub fn function_algebra_z(n: usize) -> Result<Arc<WeakHopfAlgebra>, AlgebraError> {
    let names = cyclic_names(n).into_iter().map(|s| format!("δ_{s}")).collect();
    build_function_algebra(format!("C^Z{n}"), names, &cyclic_table(n))
}

/// The symmetric group S3 as permutations of {0,1,2} in lexicographic
/// one-line order; the table is generated from actual permutation
/// composition so it cannot drift from the group law.
pub fn s3_table_and_names() -> (Vec<Vec<usize>>, Vec<String>) {
    // All 6 permutations in lexicographic order of one-line notation.
    let perms: Vec<[usize; 3]> = vec![
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let compose = |p: &[usize; 3], q: &[usize; 3]| -> [usize; 3] {
        // (p∘q)(x) = p(q(x))
        [p[q[0]], p[q[1]], p[q[2]]]
    };
    let index_of = |r: &[usize; 3]| perms.iter().position(|p| p == r).expect("closure");
    let table: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| perms.iter().map(|q| index_of(&compose(p, q))).collect())
        .collect();
    let names = perms
        .iter()
        .map(|p| {
            if *p == [0, 1, 2] {
                "e".to_string()
            } else if *p == [1, 0, 2] {
                "(01)".to_string()
            } else if *p == [2, 1, 0] {
                "(02)".to_string()
            } else if *p == [0, 2, 1] {
                "(12)".to_string()
            } else if *p == [1, 2, 0] {
                "(012)".to_string()
            } else {
                "(021)".to_string()
            }
        })
        .collect();
    (table, names)
}

/// C[S3].
pub fn group_algebra_s3() -> Result<Arc<WeakHopfAlgebra>, AlgebraError> {
    let (table, names) = s3_table_and_names();
    build_group_algebra("C[S3]", names, &table)
}

/// C^{S3}.
pub fn function_algebra_s3() -> Result<Arc<WeakHopfAlgebra>, AlgebraError> {
    let (table, names) = s3_table_and_names();
    let names = names.into_iter().map(|s| format!("δ_{s}")).collect();
    build_function_algebra("C^S3", names, &table)
}

/// Build an algebra from a `NAME:ARGS` spec string.  Supported:
///
/// * `group:Z<n>` and `group:S3` — group algebras,
/// * `function:Z<n>` and `function:S3` — function algebras,
/// * `pair_groupoid:<n>` — pair groupoid algebra on n objects,
/// * `sum:<specA>|<specB>` — direct sum (specs recursively parsed).
pub fn builder_from_spec(spec: &str) -> Result<Arc<WeakHopfAlgebra>, AlgebraError> {
    let (kind, args) = spec
        .split_once(':')
        .ok_or_else(|| AlgebraError::InvalidInput(format!("builder spec `{spec}` lacks `NAME:ARGS`")))?;
    match kind {
        "group" | "function" => {
            let make_z = |n: usize| -> Result<Arc<WeakHopfAlgebra>, AlgebraError> {
                if n < 1 {
                    return Err(AlgebraError::InvalidInput("cyclic order must be ≥ 1".into()));
                }
                if kind == "group" {
                    group_algebra_z(n)
                } else {
                    function_algebra_z(n)
                }
            };
            if let Some(ns) = args.strip_prefix('Z') {
                let n: usize = ns
                    .parse()
                    .map_err(|_| AlgebraError::InvalidInput(format!("bad cyclic order `{ns}`")))?;
                make_z(n)
            } else if args == "S3" {
                if kind == "group" {
                    group_algebra_s3()
                } else {
                    function_algebra_s3()
                }
            } else {
                Err(AlgebraError::InvalidInput(format!("unknown group `{args}`")))
            }
        }
        "pair_groupoid" => {
            let n: usize = args
                .parse()
                .map_err(|_| AlgebraError::InvalidInput(format!("bad object count `{args}`")))?;
            pair_groupoid_algebra(n)
        }
        "sum" => {
            let (sa, sb) = args.split_once('|').ok_or_else(|| {
                AlgebraError::InvalidInput("sum needs `sum:<specA>|<specB>`".into())
            })?;
            let a = builder_from_spec(sa)?;
            let b = builder_from_spec(sb)?;
            direct_sum(&a, &b)
        }
        other => Err(AlgebraError::InvalidInput(format!("unknown builder `{other}`"))),
    }
}

/// The standard fixture list used by the verification suites.
pub fn standard_fixtures() -> Vec<Arc<WeakHopfAlgebra>> {
    vec![
        group_algebra_z(2).expect("Z2"),
        group_algebra_z(3).expect("Z3"),
        group_algebra_s3().expect("S3"),
        function_algebra_z(2).expect("C^Z2"),
        function_algebra_z(3).expect("C^Z3"),
        pair_groupoid_algebra(2).expect("pair groupoid"),
        {
            let z2a = group_algebra_z(2).expect("Z2");
            let z2b = group_algebra_z(2).expect("Z2");
            direct_sum(&z2a, &z2b).expect("Z2⊕Z2")
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_table_is_a_group_and_nonabelian() {
        let (table, _) = s3_table_and_names();
        let (e, inv) = validate_group(&table).unwrap();
        assert_eq!(e, 0);
        // (01)⁻¹ = (01)
        assert_eq!(inv[2], 2);
        // Non-abelian witness.
        assert_ne!(table[1][2], table[2][1]);
    }

    #[test]
    fn broken_table_is_rejected() {
        let mut t = cyclic_table(3);
        t[1][1] = 1; // breaks the group law
        assert!(matches!(
            build_group_algebra("bad", cyclic_names(3), &t),
            Err(AlgebraError::NotAGroup(_))
        ));
    }

    #[test]
    fn pair_groupoid_acts_like_matrix_units() {
        let a = pair_groupoid_algebra(2).unwrap();
        // e01 · e11 = e01 ; e01 · e01 = 0.
        let e01 = a.basis_vec(1);
        let e11 = a.basis_vec(3);
        let p = a.product(&e01, &e11);
        assert!((p[1] - C64::new(1.0, 0.0)).norm() < 1e-15);
        let z = a.product(&e01, &e01);
        assert!(z.iter().all(|v| v.norm() < 1e-15));
        // Unit is e00 + e11.
        assert!((a.unit[0] - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((a.unit[3] - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(a.unit[1].norm() < 1e-15 && a.unit[2].norm() < 1e-15);
    }

    #[test]
    fn spec_parser_builds_expected_dims() {
        assert_eq!(builder_from_spec("group:Z2").unwrap().dim, 2);
        assert_eq!(builder_from_spec("function:Z3").unwrap().dim, 3);
        assert_eq!(builder_from_spec("group:S3").unwrap().dim, 6);
        assert_eq!(builder_from_spec("pair_groupoid:2").unwrap().dim, 4);
        assert_eq!(builder_from_spec("sum:group:Z2|group:Z2").unwrap().dim, 4);
        assert!(builder_from_spec("nonsense").is_err());
    }
}
