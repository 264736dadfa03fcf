//! JSON import/export of weak Hopf algebra structure constants.
//!
//! The on-disk format is a plain object with complex numbers as `[re, im]`
//! pairs and all tensors nested row-major (`mult[i][j][k]`, outer index
//! first), so files are readable and diffable:
//!
//! ```json
//! {
//!   "name": "C[Z2]",
//!   "dim": 2,
//!   "basis_names": ["e", "g"],
//!   "mult": [[[..],[..]],[[..],[..]]],
//!   "comult": [...],
//!   "unit": [[1.0, 0.0], [0.0, 0.0]],
//!   "counit": [[1.0, 0.0], [1.0, 0.0]],
//!   "antipode": [[..],[..]],
//!   "star": [[..],[..]]
//! }
//! ```
//!
//! [`load_algebra`] validates shapes via [`WeakHopfAlgebra::new`]; it does
//! not re-verify the axioms (callers decide when to pay for that).

use std::path::Path;
use std::sync::Arc;

use ndarray::{Array1, Array2, Array3};
use serde::{Deserialize, Serialize};

use super::{AlgebraError, WeakHopfAlgebra};
use crate::C64;

/// One complex number as `[re, im]`.
type Cpx = [f64; 2];

/// Serde image of a [`WeakHopfAlgebra`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub name: String,
    pub dim: usize,
    pub basis_names: Vec<String>,
    /// `mult[i][j][k]`: coefficient of `e_k` in `e_i e_j`.
    pub mult: Vec<Vec<Vec<Cpx>>>,
    /// `comult[i][j][k]`: coefficient of `e_j ⊗ e_k` in `Δ(e_i)`.
    pub comult: Vec<Vec<Vec<Cpx>>>,
    pub unit: Vec<Cpx>,
    pub counit: Vec<Cpx>,
    /// `antipode[i][j]`: coefficient of `e_j` in `S(e_i)`.
    pub antipode: Vec<Vec<Cpx>>,
    /// `star[i][j]`: coefficient of `e_j` in `(e_i)*`.
    pub star: Vec<Vec<Cpx>>,
}

fn c(z: &C64) -> Cpx {
    [z.re, z.im]
}

fn vec1(a: &Array1<C64>) -> Vec<Cpx> {
    a.iter().map(c).collect()
}

fn vec2(a: &Array2<C64>) -> Vec<Vec<Cpx>> {
    a.outer_iter().map(|row| row.iter().map(c).collect()).collect()
}

fn vec3(a: &Array3<C64>) -> Vec<Vec<Vec<Cpx>>> {
    a.outer_iter()
        .map(|m| m.outer_iter().map(|row| row.iter().map(c).collect()).collect())
        .collect()
}

fn arr1(v: &[Cpx], what: &str, d: usize) -> Result<Array1<C64>, AlgebraError> {
    if v.len() != d {
        return Err(AlgebraError::InvalidInput(format!(
            "{what}: expected length {d}, got {}",
            v.len()
        )));
    }
    Ok(Array1::from_iter(v.iter().map(|p| C64::new(p[0], p[1]))))
}

fn arr2(v: &[Vec<Cpx>], what: &str, d: usize) -> Result<Array2<C64>, AlgebraError> {
    let mut out = Array2::<C64>::zeros((d, d));
    if v.len() != d {
        return Err(AlgebraError::InvalidInput(format!(
            "{what}: expected {d} rows, got {}",
            v.len()
        )));
    }
    for (i, row) in v.iter().enumerate() {
        if row.len() != d {
            return Err(AlgebraError::InvalidInput(format!(
                "{what}[{i}]: expected {d} entries, got {}",
                row.len()
            )));
        }
        for (j, p) in row.iter().enumerate() {
            out[(i, j)] = C64::new(p[0], p[1]);
        }
    }
    Ok(out)
}

fn arr3(v: &[Vec<Vec<Cpx>>], what: &str, d: usize) -> Result<Array3<C64>, AlgebraError> {
    let mut out = Array3::<C64>::zeros((d, d, d));
    if v.len() != d {
        return Err(AlgebraError::InvalidInput(format!(
            "{what}: expected {d} slabs, got {}",
            v.len()
        )));
    }
    for (i, m) in v.iter().enumerate() {
        if m.len() != d {
            return Err(AlgebraError::InvalidInput(format!(
                "{what}[{i}]: expected {d} rows, got {}",
                m.len()
            )));
        }
        for (j, row) in m.iter().enumerate() {
            if row.len() != d {
                return Err(AlgebraError::InvalidInput(format!(
                    "{what}[{i}][{j}]: expected {d} entries, got {}",
                    row.len()
                )));
            }
            for (k, p) in row.iter().enumerate() {
                out[(i, j, k)] = C64::new(p[0], p[1]);
            }
        }
    }
    Ok(out)
}

impl AlgebraJson {
    pub fn from_algebra(a: &WeakHopfAlgebra) -> Self {
        AlgebraJson {
            name: a.name.clone(),
            dim: a.dim,
            basis_names: a.basis_names.clone(),
            mult: vec3(&a.mult),
            comult: vec3(&a.comult),
            unit: vec1(&a.unit),
            counit: vec1(&a.counit),
            antipode: vec2(&a.antipode),
            star: vec2(&a.star),
        }
    }

    pub fn into_algebra(&self) -> Result<Arc<WeakHopfAlgebra>, AlgebraError> {
        let d = self.dim;
        WeakHopfAlgebra::new(
            self.name.clone(),
            self.basis_names.clone(),
            arr3(&self.mult, "mult", d)?,
            arr3(&self.comult, "comult", d)?,
            arr1(&self.unit, "unit", d)?,
            arr1(&self.counit, "counit", d)?,
            arr2(&self.antipode, "antipode", d)?,
            arr2(&self.star, "star", d)?,
        )
    }
}

/// Read an algebra from a JSON file.
pub fn load_algebra(path: &Path) -> Result<Arc<WeakHopfAlgebra>, AlgebraError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AlgebraError::InvalidInput(format!("read {}: {e}", path.display())))?;
    let json: AlgebraJson = serde_json::from_str(&text)
        .map_err(|e| AlgebraError::InvalidInput(format!("parse {}: {e}", path.display())))?;
    json.into_algebra()
}

/// Write an algebra to a JSON file (pretty-printed).
pub fn save_algebra(a: &WeakHopfAlgebra, path: &Path) -> Result<(), AlgebraError> {
    let json = AlgebraJson::from_algebra(a);
    let text = serde_json::to_string_pretty(&json)
        .map_err(|e| AlgebraError::InvalidInput(format!("serialize: {e}")))?;
    std::fs::write(path, text)
        .map_err(|e| AlgebraError::InvalidInput(format!("write {}: {e}", path.display())))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builders::group_algebra_s3;

    #[test]
    fn round_trip_preserves_structure_constants() {
        let alg = group_algebra_s3().unwrap();
        let dir = std::env::temp_dir().join("whoptn-json-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("s3.json");
        save_algebra(&alg, &path).unwrap();
        let back = load_algebra(&path).unwrap();
        assert_eq!(back.name, alg.name);
        assert_eq!(back.basis_names, alg.basis_names);
        assert_eq!(back.mult, alg.mult);
        assert_eq!(back.comult, alg.comult);
        assert_eq!(back.unit, alg.unit);
        assert_eq!(back.counit, alg.counit);
        assert_eq!(back.antipode, alg.antipode);
        assert_eq!(back.star, alg.star);
    }

    #[test]
    fn malformed_shapes_are_rejected() {
        let alg = group_algebra_s3().unwrap();
        let mut json = AlgebraJson::from_algebra(&alg);
        json.unit.pop();
        assert!(json.into_algebra().is_err());
    }
}
