//! Fixed-point localization for torus actions on toric varieties.
//!
//! The equivariant cohomology of the universal fibration is the face ring on
//! the generators `F_i` (one per facet); the base cohomology is the
//! polynomial ring on `T_1, ..., T_n`. Fiber integration is computed as the
//! sum over vertices of the restriction divided by the equivariant Euler
//! class, combined over the product of all Euler classes and finished with a
//! single exact division. That division doubles as a consistency check: a
//! nonzero remainder means the input was not a valid Delzant polytope or the
//! engine has a bug.

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::exactalg::{MPoly, QMatrix, Rat, RatFun, VarId};
use crate::polytope::{DelzantPolytope, ValidationIssue, Vertex};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LocError {
    #[error("variable {var} is out of range (max index {max})")]
    IndexOutOfRange { var: String, max: usize },
    #[error("invalid polytope: {0}")]
    InvalidPolytope(ValidationIssue),
    #[error("localization sum is not a polynomial")]
    NotPolynomial,
}

impl From<ValidationIssue> for LocError {
    fn from(issue: ValidationIssue) -> Self {
        LocError::InvalidPolytope(issue)
    }
}

/// Localization data of one fixed point (vertex).
#[derive(Debug, Clone)]
pub struct FixedPointData {
    pub vertex: Vertex,
    /// n x k matrix of the restriction on degree-2 classes: column j gives
    /// the image of `F_{j+1}` in the `T` basis; columns of inactive facets
    /// are zero. Satisfies restriction * [u_ij] = identity.
    pub restriction: QMatrix,
    /// The n isotropy weights, as linear forms in the `T` variables, in
    /// ascending order of the active facet index.
    pub weights: Vec<MPoly>,
    /// Equivariant Euler class of the vertex: the product of the weights.
    pub euler: MPoly,
}

impl FixedPointData {
    /// Restriction homomorphism: substitutes every face variable by its
    /// column, passing `T` variables and `y` through unchanged.
    pub fn restrict(&self, a: &MPoly) -> Result<MPoly, LocError> {
        let k = self.restriction.cols();
        let n = self.restriction.rows();
        check_face_indices(a, k)?;
        let mut map: BTreeMap<VarId, MPoly> = BTreeMap::new();
        for j in 0..k {
            let mut image = MPoly::zero();
            for i in 0..n {
                let c = self.restriction.get(i, j);
                if !c.is_zero() {
                    image = &image + &MPoly::var(VarId::Base(i as u32 + 1)).scale(c);
                }
            }
            map.insert(VarId::Face(j as u32 + 1), image);
        }
        Ok(a.substitute(&map))
    }
}

fn check_face_indices(a: &MPoly, k: usize) -> Result<(), LocError> {
    for v in a.variables() {
        if let VarId::Face(i) = v {
            if i == 0 || i as usize > k {
                return Err(LocError::IndexOutOfRange {
                    var: v.display_name(),
                    max: k,
                });
            }
        }
    }
    Ok(())
}

fn check_base_indices(a: &MPoly, n: usize) -> Result<(), LocError> {
    for v in a.variables() {
        match v {
            VarId::Base(i) => {
                if i == 0 || i as usize > n {
                    return Err(LocError::IndexOutOfRange {
                        var: v.display_name(),
                        max: n,
                    });
                }
            }
            VarId::Face(_) => {
                return Err(LocError::IndexOutOfRange {
                    var: v.display_name(),
                    max: 0,
                })
            }
            VarId::Param => {}
        }
    }
    Ok(())
}

/// Pullback to the face ring: the ring map `T_j -> sum_i u_ij F_i`.
pub fn pullback_base(p: &DelzantPolytope, b: &MPoly) -> Result<MPoly, LocError> {
    let n = p.dim();
    check_base_indices(b, n)?;
    let mut map: BTreeMap<VarId, MPoly> = BTreeMap::new();
    for j in 0..n {
        let mut image = MPoly::zero();
        for (i, facet) in p.facets().iter().enumerate() {
            let u = facet.normal[j];
            if u != 0 {
                image = &image
                    + &MPoly::var(VarId::Face(i as u32 + 1)).scale(&Rat::from_integer(u.into()));
            }
        }
        map.insert(VarId::Base(j as u32 + 1), image);
    }
    Ok(b.substitute(&map))
}

/// Per-vertex restriction matrices, weights, and Euler classes. The
/// restriction is the exact inverse of the active-normal submatrix placed in
/// the active columns.
pub fn fixed_point_data(p: &DelzantPolytope) -> Result<Vec<FixedPointData>, LocError> {
    let n = p.dim();
    let k = p.num_facets();
    let vertices = p.enumerate_vertices()?;
    let mut out = Vec::with_capacity(vertices.len());
    for vertex in vertices {
        let rows: Vec<Vec<i64>> = vertex
            .active
            .iter()
            .map(|&i| p.facets()[i].normal.clone())
            .collect();
        let inv = QMatrix::from_int_rows(&rows)
            .inverse()
            .map_err(|_| LocError::InvalidPolytope(ValidationIssue::NonSimpleVertex {
                point: vertex.point.clone(),
            }))?;
        let mut restriction = QMatrix::zero(n, k);
        let mut weights = Vec::with_capacity(n);
        for (pos, &facet_index) in vertex.active.iter().enumerate() {
            let mut weight = MPoly::zero();
            for i in 0..n {
                let c = inv.get(i, pos);
                restriction.set(i, facet_index, c.clone());
                if !c.is_zero() {
                    weight = &weight + &MPoly::var(VarId::Base(i as u32 + 1)).scale(c);
                }
            }
            weights.push(weight);
        }
        let euler = weights.iter().fold(MPoly::one(), |acc, w| &acc * w);
        debug_assert!(!euler.is_zero());
        out.push(FixedPointData {
            vertex,
            restriction,
            weights,
            euler,
        });
    }
    Ok(out)
}

/// Restriction at a single fixed point.
pub fn restrict_at(fp: &FixedPointData, a: &MPoly) -> Result<MPoly, LocError> {
    fp.restrict(a)
}

/// Cached localization engine for one polytope.
pub struct Localizer {
    dim: usize,
    num_facets: usize,
    fps: Vec<FixedPointData>,
}

impl Localizer {
    pub fn new(p: &DelzantPolytope) -> Result<Self, LocError> {
        Ok(Localizer {
            dim: p.dim(),
            num_facets: p.num_facets(),
            fps: fixed_point_data(p)?,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn fixed_points(&self) -> &[FixedPointData] {
        &self.fps
    }

    /// Fiber integration: drops cohomological degree by `2 * dim`; inputs of
    /// lower degree integrate to zero.
    pub fn integrate(&self, a: &MPoly) -> Result<MPoly, LocError> {
        check_face_indices(a, self.num_facets)?;
        let mut acc = RatFun::from_poly(MPoly::zero());
        for fp in &self.fps {
            let term = RatFun::new(fp.restrict(a)?, fp.euler.clone()).expect("nonzero euler");
            acc = acc.add(&term);
        }
        acc.into_poly().map_err(|_| LocError::NotPolynomial)
    }
}

/// One-shot fiber integration over the base of the universal fibration.
pub fn fiber_integrate(p: &DelzantPolytope, a: &MPoly) -> Result<MPoly, LocError> {
    Localizer::new(p)?.integrate(a)
}

/// Checks that fiber integration is a module homomorphism over the base
/// ring: integrating `pullback(b) * a` equals `b * integral(a)`.
pub fn module_property_check(
    p: &DelzantPolytope,
    b: &MPoly,
    a: &MPoly,
) -> Result<bool, LocError> {
    let localizer = Localizer::new(p)?;
    let lhs = localizer.integrate(&(&pullback_base(p, b)? * a))?;
    let rhs = b * &localizer.integrate(a)?;
    Ok(lhs == rhs)
}

/// Stanley-Reisner test: true when no vertex is active on every facet in the
/// support (1-based face indices), so the face monomial is zero in the face
/// ring and restricts to zero everywhere.
pub fn face_monomial_vanishes(p: &DelzantPolytope, support: &[u32]) -> Result<bool, LocError> {
    let k = p.num_facets();
    for &i in support {
        if i == 0 || i as usize > k {
            return Err(LocError::IndexOutOfRange {
                var: VarId::Face(i).display_name(),
                max: k,
            });
        }
    }
    let vertices = p.enumerate_vertices()?;
    Ok(!vertices.iter().any(|v| {
        support
            .iter()
            .all(|&i| v.active.contains(&(i as usize - 1)))
    }))
}
