//! Delzant polytopes: facet presentation, vertex enumeration, validation,
//! exact Euclidean volume, and the JSON file format.
//!
//! A polytope is the set `{ x : <x, u_i> >= lambda_i }` with inward primitive
//! integer normals `u_i` and rational offsets. Facet order is significant: it
//! fixes the face-variable indices `F_i` used in every output.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exactalg::{parse_rat, rat_to_string, ExactAlgError, QMatrix, Rat};

/// One facet inequality `<x, u> >= lambda`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    /// Inward normal; must be a primitive integer vector.
    pub normal: Vec<i64>,
    /// Offset of the supporting hyperplane.
    pub offset: Rat,
}

/// A polytope given by facet data, candidate for the Delzant conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DelzantPolytope {
    name: String,
    dim: usize,
    facets: Vec<Facet>,
}

/// A vertex together with the facets active at it (0-based indices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub point: Vec<Rat>,
    pub active: Vec<usize>,
}

/// First failing Delzant condition, with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidationIssue {
    WrongNormalLength { facet: usize },
    ZeroNormal { facet: usize },
    NonPrimitiveNormal { facet: usize },
    TooFewFacets,
    NonSimpleVertex { point: Vec<Rat> },
    Unbounded,
    EmptyOrLowerDimensional,
    RedundantFacet { facet: usize },
    NonUnimodularVertex { point: Vec<Rat>, det: Rat },
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationIssue::WrongNormalLength { facet } => {
                write!(f, "facet F{} has a normal of the wrong length", facet + 1)
            }
            ValidationIssue::ZeroNormal { facet } => {
                write!(f, "facet F{} has a zero normal", facet + 1)
            }
            ValidationIssue::NonPrimitiveNormal { facet } => {
                write!(f, "facet F{} has a non-primitive normal", facet + 1)
            }
            ValidationIssue::TooFewFacets => write!(f, "fewer than dim+1 facets"),
            ValidationIssue::NonSimpleVertex { point } => {
                write!(
                    f,
                    "more than dim facets active at {}",
                    point_string(point)
                )
            }
            ValidationIssue::Unbounded => write!(f, "polytope is unbounded"),
            ValidationIssue::EmptyOrLowerDimensional => {
                write!(f, "polytope is empty or not full-dimensional")
            }
            ValidationIssue::RedundantFacet { facet } => {
                write!(f, "facet F{} is redundant (active at no vertex)", facet + 1)
            }
            ValidationIssue::NonUnimodularVertex { point, det } => write!(
                f,
                "active normals at {} have determinant {}",
                point_string(point),
                rat_to_string(det)
            ),
        }
    }
}

impl std::error::Error for ValidationIssue {}

pub fn point_string(p: &[Rat]) -> String {
    let coords: Vec<String> = p.iter().map(rat_to_string).collect();
    format!("({})", coords.join(", "))
}

/// Rational dot product of an integer normal with a rational point.
pub fn dot(u: &[i64], x: &[Rat]) -> Rat {
    u.iter()
        .zip(x)
        .map(|(&a, b)| b * Rat::from_integer(a.into()))
        .fold(Rat::zero(), |acc, v| acc + v)
}

impl DelzantPolytope {
    /// Construct from facet data; checks only that the shape is consistent.
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        facets: Vec<Facet>,
    ) -> Result<Self, ValidationIssue> {
        assert!(dim >= 1, "dimension must be at least 1");
        for (i, facet) in facets.iter().enumerate() {
            if facet.normal.len() != dim {
                return Err(ValidationIssue::WrongNormalLength { facet: i });
            }
        }
        Ok(DelzantPolytope {
            name: name.into(),
            dim,
            facets,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn num_facets(&self) -> usize {
        self.facets.len()
    }

    /// All vertices with their active sets, ordered lexicographically by
    /// point. Fails on non-simple, unbounded, or empty inputs.
    pub fn enumerate_vertices(&self) -> Result<Vec<Vertex>, ValidationIssue> {
        let n = self.dim;
        let k = self.facets.len();
        if k < n + 1 {
            return Err(ValidationIssue::TooFewFacets);
        }
        let mut found: BTreeMap<Vec<Rat>, Vec<usize>> = BTreeMap::new();
        for subset in subsets_of_size(k, n) {
            let rows: Vec<Vec<i64>> = subset
                .iter()
                .map(|&i| self.facets[i].normal.clone())
                .collect();
            let mat = QMatrix::from_int_rows(&rows);
            let rhs: Vec<Rat> = subset.iter().map(|&i| self.facets[i].offset.clone()).collect();
            let point = match mat.solve(&rhs) {
                Ok(p) => p,
                Err(ExactAlgError::Singular) => continue,
                Err(e) => unreachable!("square solve: {e}"),
            };
            let mut active = Vec::new();
            let mut feasible = true;
            for (i, facet) in self.facets.iter().enumerate() {
                let value = dot(&facet.normal, &point);
                if value < facet.offset {
                    feasible = false;
                    break;
                }
                if value == facet.offset {
                    active.push(i);
                }
            }
            if !feasible {
                continue;
            }
            if active.len() > n {
                return Err(ValidationIssue::NonSimpleVertex { point });
            }
            found.insert(point, active);
        }
        if found.is_empty() {
            return Err(ValidationIssue::EmptyOrLowerDimensional);
        }
        // Bounded iff every edge leaving every vertex is blocked by some
        // facet. The edge directions at a vertex are the columns of the
        // inverse of its active-normal matrix.
        for active in found.values() {
            let rows: Vec<Vec<i64>> = active
                .iter()
                .map(|&i| self.facets[i].normal.clone())
                .collect();
            let inv = QMatrix::from_int_rows(&rows)
                .inverse()
                .expect("active normals are independent");
            for m in 0..n {
                let dir: Vec<Rat> = (0..n).map(|r| inv.get(r, m).clone()).collect();
                let blocked = self
                    .facets
                    .iter()
                    .any(|facet| dot(&facet.normal, &dir).is_negative());
                if !blocked {
                    return Err(ValidationIssue::Unbounded);
                }
            }
        }
        Ok(found
            .into_iter()
            .map(|(point, active)| Vertex { point, active })
            .collect())
    }

    /// Check the Delzant conditions; reports the first failure with a witness.
    pub fn validate_delzant(&self) -> Result<(), ValidationIssue> {
        for (i, facet) in self.facets.iter().enumerate() {
            if facet.normal.iter().all(|&x| x == 0) {
                return Err(ValidationIssue::ZeroNormal { facet: i });
            }
            let g = facet
                .normal
                .iter()
                .fold(0i64, |acc, &x| acc.gcd(&x.abs()));
            if g != 1 {
                return Err(ValidationIssue::NonPrimitiveNormal { facet: i });
            }
        }
        let vertices = self.enumerate_vertices()?;
        let mut touched = vec![false; self.facets.len()];
        for v in &vertices {
            for &i in &v.active {
                touched[i] = true;
            }
        }
        if let Some(i) = touched.iter().position(|t| !t) {
            return Err(ValidationIssue::RedundantFacet { facet: i });
        }
        for v in &vertices {
            let rows: Vec<Vec<i64>> = v
                .active
                .iter()
                .map(|&i| self.facets[i].normal.clone())
                .collect();
            let det = QMatrix::from_int_rows(&rows)
                .determinant()
                .expect("square active matrix");
            if det.abs() != Rat::from_integer(1.into()) {
                return Err(ValidationIssue::NonUnimodularVertex {
                    point: v.point.clone(),
                    det,
                });
            }
        }
        Ok(())
    }

    /// Exact Euclidean volume via recursive triangulation: fan out from a
    /// base vertex over the faces avoiding it, recursing on dimension.
    /// Independent of the localization engine.
    pub fn euclidean_volume(&self) -> Result<Rat, ValidationIssue> {
        let vertices = self.enumerate_vertices()?;
        let n = self.dim;
        let simplices = triangulate_face(self, &vertices, &BTreeSet::new(), n);
        let mut total = Rat::zero();
        let factorial: Rat = Rat::from_integer((1..=n as i64).product::<i64>().into());
        for simplex in simplices {
            let base = &vertices[simplex[0]].point;
            let rows: Vec<Vec<Rat>> = simplex[1..]
                .iter()
                .map(|&vi| {
                    vertices[vi]
                        .point
                        .iter()
                        .zip(base)
                        .map(|(a, b)| a - b)
                        .collect()
                })
                .collect();
            let det = QMatrix::from_rows(rows)
                .determinant()
                .expect("square edge matrix");
            total += det.abs();
        }
        Ok(total / factorial)
    }

    /// Copy with every normal divided by its gcd and the offset rescaled.
    pub fn normalized(&self) -> DelzantPolytope {
        let facets = self
            .facets
            .iter()
            .map(|f| {
                let g = f.normal.iter().fold(0i64, |acc, &x| acc.gcd(&x.abs()));
                if g <= 1 {
                    f.clone()
                } else {
                    Facet {
                        normal: f.normal.iter().map(|&x| x / g).collect(),
                        offset: &f.offset / Rat::from_integer(g.into()),
                    }
                }
            })
            .collect();
        DelzantPolytope {
            name: self.name.clone(),
            dim: self.dim,
            facets,
        }
    }

    /// Lattice translation: the polytope shifted by `t`, realized on offsets.
    pub fn translated(&self, t: &[i64]) -> DelzantPolytope {
        assert_eq!(t.len(), self.dim);
        let facets = self
            .facets
            .iter()
            .map(|f| Facet {
                normal: f.normal.clone(),
                offset: &f.offset
                    + f.normal
                        .iter()
                        .zip(t)
                        .map(|(&u, &ti)| Rat::from_integer((u * ti).into()))
                        .fold(Rat::zero(), |acc, v| acc + v),
            })
            .collect();
        DelzantPolytope {
            name: format!("{}+t", self.name),
            dim: self.dim,
            facets,
        }
    }

    pub fn to_json(&self) -> String {
        let dto = PolytopeDto {
            name: self.name.clone(),
            dim: self.dim,
            facets: self
                .facets
                .iter()
                .map(|f| FacetDto {
                    u: f.normal.clone(),
                    lambda: rat_to_string(&f.offset),
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&dto).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self, String> {
        let dto: PolytopeDto = serde_json::from_str(s).map_err(|e| e.to_string())?;
        if dto.dim == 0 {
            return Err("dim must be at least 1".into());
        }
        let mut facets = Vec::new();
        for (i, f) in dto.facets.iter().enumerate() {
            let offset =
                parse_rat(&f.lambda).map_err(|e| format!("facet {}: lambda: {e}", i + 1))?;
            facets.push(Facet {
                normal: f.u.clone(),
                offset,
            });
        }
        DelzantPolytope::new(dto.name, dto.dim, facets).map_err(|e| e.to_string())
    }
}

#[derive(Serialize, Deserialize)]
struct FacetDto {
    u: Vec<i64>,
    lambda: String,
}

#[derive(Serialize, Deserialize)]
struct PolytopeDto {
    name: String,
    dim: usize,
    facets: Vec<FacetDto>,
}

/// All size-`m` subsets of `0..k` in lexicographic order.
fn subsets_of_size(k: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(start: usize, k: usize, m: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == m {
            out.push(current.clone());
            return;
        }
        let needed = m - current.len();
        for i in start..=k.saturating_sub(needed) {
            current.push(i);
            rec(i + 1, k, m, current, out);
            current.pop();
        }
    }
    rec(0, k, m, &mut current, &mut out);
    out
}

/// Triangulate the face cut out by the facet set `s` (the whole polytope for
/// the empty set) into `d`-simplices given as vertex-index lists.
fn triangulate_face(
    polytope: &DelzantPolytope,
    vertices: &[Vertex],
    s: &BTreeSet<usize>,
    d: usize,
) -> Vec<Vec<usize>> {
    let members: Vec<usize> = (0..vertices.len())
        .filter(|&vi| s.iter().all(|fi| vertices[vi].active.contains(fi)))
        .collect();
    if members.len() == d + 1 {
        return vec![members];
    }
    let base = members[0];
    let mut out = Vec::new();
    for j in 0..polytope.facets.len() {
        if s.contains(&j) || vertices[base].active.contains(&j) {
            continue;
        }
        let nonempty = members
            .iter()
            .any(|&vi| vertices[vi].active.contains(&j));
        if !nonempty {
            continue;
        }
        let mut sub = s.clone();
        sub.insert(j);
        for mut simplex in triangulate_face(polytope, vertices, &sub, d - 1) {
            simplex.insert(0, base);
            out.push(simplex);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat, rat_int};

    fn simplex2() -> DelzantPolytope {
        DelzantPolytope::new(
            "simplex",
            2,
            vec![
                Facet {
                    normal: vec![1, 0],
                    offset: rat_int(0),
                },
                Facet {
                    normal: vec![0, 1],
                    offset: rat_int(0),
                },
                Facet {
                    normal: vec![-1, -1],
                    offset: rat_int(-1),
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn simplex_vertices() {
        let verts = simplex2().enumerate_vertices().unwrap();
        let points: Vec<Vec<Rat>> = verts.iter().map(|v| v.point.clone()).collect();
        assert_eq!(
            points,
            vec![
                vec![rat_int(0), rat_int(0)],
                vec![rat_int(0), rat_int(1)],
                vec![rat_int(1), rat_int(0)],
            ]
        );
        assert_eq!(verts[0].active, vec![0, 1]);
        assert_eq!(verts[1].active, vec![0, 2]);
        assert_eq!(verts[2].active, vec![1, 2]);
    }

    #[test]
    fn octahedron_is_not_simple() {
        let mut facets = Vec::new();
        for sx in [1i64, -1] {
            for sy in [1i64, -1] {
                for sz in [1i64, -1] {
                    facets.push(Facet {
                        normal: vec![sx, sy, sz],
                        offset: rat_int(-1),
                    });
                }
            }
        }
        let p = DelzantPolytope::new("octahedron", 3, facets).unwrap();
        match p.enumerate_vertices() {
            Err(ValidationIssue::NonSimpleVertex { .. }) => {}
            other => panic!("expected NonSimpleVertex, got {other:?}"),
        }
    }

    #[test]
    fn unbounded_and_empty_inputs() {
        // half strip: x >= 0, y >= 0, y <= 1
        let p = DelzantPolytope::new(
            "strip",
            2,
            vec![
                Facet {
                    normal: vec![1, 0],
                    offset: rat_int(0),
                },
                Facet {
                    normal: vec![0, 1],
                    offset: rat_int(0),
                },
                Facet {
                    normal: vec![0, -1],
                    offset: rat_int(-1),
                },
            ],
        )
        .unwrap();
        assert_eq!(p.enumerate_vertices().unwrap_err(), ValidationIssue::Unbounded);

        // x >= 1 and x <= 0
        let q = DelzantPolytope::new(
            "empty",
            1,
            vec![
                Facet {
                    normal: vec![1],
                    offset: rat_int(1),
                },
                Facet {
                    normal: vec![-1],
                    offset: rat_int(0),
                },
            ],
        )
        .unwrap();
        assert_eq!(
            q.enumerate_vertices().unwrap_err(),
            ValidationIssue::EmptyOrLowerDimensional
        );
    }

    #[test]
    fn validation_witnesses() {
        assert_eq!(simplex2().validate_delzant(), Ok(()));

        let mut bad = simplex2();
        bad.facets[0].normal = vec![2, 0];
        assert_eq!(
            bad.validate_delzant().unwrap_err(),
            ValidationIssue::NonPrimitiveNormal { facet: 0 }
        );

        // unit square plus the redundant inequality x1 >= -1
        let square = DelzantPolytope::new(
            "square",
            2,
            vec![
                Facet {
                    normal: vec![1, 0],
                    offset: rat_int(0),
                },
                Facet {
                    normal: vec![0, 1],
                    offset: rat_int(0),
                },
                Facet {
                    normal: vec![-1, 0],
                    offset: rat_int(-1),
                },
                Facet {
                    normal: vec![0, -1],
                    offset: rat_int(-1),
                },
                Facet {
                    normal: vec![1, 0],
                    offset: rat_int(-1),
                },
            ],
        )
        .unwrap();
        assert_eq!(
            square.validate_delzant().unwrap_err(),
            ValidationIssue::RedundantFacet { facet: 4 }
        );
    }

    #[test]
    fn smoothness_check() {
        // triangle with a vertex where the normals have determinant 2
        let p = DelzantPolytope::new(
            "nonsmooth",
            2,
            vec![
                Facet {
                    normal: vec![1, 0],
                    offset: rat_int(0),
                },
                Facet {
                    normal: vec![0, 1],
                    offset: rat_int(0),
                },
                Facet {
                    normal: vec![-1, -2],
                    offset: rat_int(-2),
                },
            ],
        )
        .unwrap();
        match p.validate_delzant() {
            Err(ValidationIssue::NonUnimodularVertex { det, .. }) => {
                assert_eq!(det.abs(), rat_int(2));
            }
            other => panic!("expected NonUnimodularVertex, got {other:?}"),
        }
    }

    #[test]
    fn simplex_volume() {
        assert_eq!(simplex2().euclidean_volume().unwrap(), rat(1, 2));
    }

    #[test]
    fn normalize_divides_by_gcd() {
        let mut p = simplex2();
        p.facets[2] = Facet {
            normal: vec![-2, -2],
            offset: rat_int(-2),
        };
        let q = p.normalized();
        assert_eq!(q.facets()[2].normal, vec![-1, -1]);
        assert_eq!(q.facets()[2].offset, rat_int(-1));
        assert_eq!(q.validate_delzant(), Ok(()));
    }

    #[test]
    fn json_round_trip() {
        let p = simplex2();
        let s = p.to_json();
        let q = DelzantPolytope::from_json(&s).unwrap();
        assert_eq!(p, q);
        assert_eq!(s, q.to_json());
        assert!(s.contains("\"lambda\": \"-1\""));
    }

    #[test]
    fn translation_shifts_vertices() {
        let p = simplex2().translated(&[3, -2]);
        let verts = p.enumerate_vertices().unwrap();
        assert_eq!(
            verts[0].point,
            vec![rat_int(3), rat_int(-2)]
        );
        assert_eq!(p.euclidean_volume().unwrap(), rat(1, 2));
    }
}
