//! Builders for the polytope families under study, each behind the
//! [`PolytopeFamily`] trait so the CLI can select them by name.

use std::collections::BTreeMap;

use num_traits::Signed;
use thiserror::Error;

use crate::exactalg::{rat, rat_int, rat_to_string, Rat};
use crate::polytope::{DelzantPolytope, Facet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("missing parameter --{0}")]
    MissingParameter(&'static str),
    #[error("unknown parameter --{0}")]
    UnknownParameter(String),
    #[error("parameter --{name} expects {expected}")]
    WrongKind {
        name: &'static str,
        expected: &'static str,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKind {
    Int,
    Rational,
}

/// Declared parameter of a family, used by the CLI for dispatch.
#[derive(Debug, Clone, Copy)]
pub struct ParamSpec {
    pub name: &'static str,
    pub kind: ParamKind,
    pub help: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParamValue {
    Int(i64),
    Rational(Rat),
}

pub type ParamMap = BTreeMap<String, ParamValue>;

/// A named polytope construction selectable at runtime.
pub trait PolytopeFamily: Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn params(&self) -> &'static [ParamSpec];
    fn build(&self, values: &ParamMap) -> Result<DelzantPolytope, FamilyError>;
}

/// All registered families, in CLI listing order.
pub fn families() -> &'static [&'static dyn PolytopeFamily] {
    static REGISTRY: [&dyn PolytopeFamily; 4] = [&Ruled, &Blowup, &ProjBundle, &Simplex];
    &REGISTRY
}

pub fn lookup(name: &str) -> Option<&'static dyn PolytopeFamily> {
    families().iter().copied().find(|f| f.name() == name)
}

fn get_int(values: &ParamMap, name: &'static str) -> Result<i64, FamilyError> {
    match values.get(name) {
        Some(ParamValue::Int(v)) => Ok(*v),
        Some(ParamValue::Rational(_)) => Err(FamilyError::WrongKind {
            name,
            expected: "an integer",
        }),
        None => Err(FamilyError::MissingParameter(name)),
    }
}

fn get_rat(values: &ParamMap, name: &'static str) -> Result<Rat, FamilyError> {
    match values.get(name) {
        Some(ParamValue::Rational(v)) => Ok(v.clone()),
        Some(ParamValue::Int(v)) => Ok(rat_int(*v)),
        None => Err(FamilyError::MissingParameter(name)),
    }
}

fn check_known(values: &ParamMap, specs: &[ParamSpec]) -> Result<(), FamilyError> {
    for key in values.keys() {
        if !specs.iter().any(|s| s.name == key) {
            return Err(FamilyError::UnknownParameter(key.clone()));
        }
    }
    Ok(())
}

struct Ruled;

impl PolytopeFamily for Ruled {
    fn name(&self) -> &'static str {
        "ruled"
    }
    fn summary(&self) -> &'static str {
        "height-1 trapezoid: a sphere bundle over the sphere"
    }
    fn params(&self) -> &'static [ParamSpec] {
        &[
            ParamSpec {
                name: "k",
                kind: ParamKind::Int,
                help: "twist of the bundle (nonnegative integer)",
            },
            ParamSpec {
                name: "lambda",
                kind: ParamKind::Rational,
                help: "size parameter of the base sphere",
            },
        ]
    }
    fn build(&self, values: &ParamMap) -> Result<DelzantPolytope, FamilyError> {
        check_known(values, self.params())?;
        build_ruled(get_int(values, "k")?, get_rat(values, "lambda")?)
    }
}

struct Blowup;

impl PolytopeFamily for Blowup {
    fn name(&self) -> &'static str {
        "blowup"
    }
    fn summary(&self) -> &'static str {
        "pentagon: blow-up of a ruled surface (two-point blow-up of the projective plane)"
    }
    fn params(&self) -> &'static [ParamSpec] {
        &[
            ParamSpec {
                name: "nu",
                kind: ParamKind::Rational,
                help: "size parameter (positive rational)",
            },
            ParamSpec {
                name: "k",
                kind: ParamKind::Int,
                help: "action index, 0 <= k < ceil(nu/2)",
            },
        ]
    }
    fn build(&self, values: &ParamMap) -> Result<DelzantPolytope, FamilyError> {
        check_known(values, self.params())?;
        build_blowup(get_rat(values, "nu")?, get_int(values, "k")?)
    }
}

struct ProjBundle;

impl PolytopeFamily for ProjBundle {
    fn name(&self) -> &'static str {
        "projbundle"
    }
    fn summary(&self) -> &'static str {
        "projectivization of a sum of three line bundles over the sphere"
    }
    fn params(&self) -> &'static [ParamSpec] {
        &[
            ParamSpec {
                name: "mu",
                kind: ParamKind::Rational,
                help: "size parameter, mu > max(k, l, 0)",
            },
            ParamSpec {
                name: "k",
                kind: ParamKind::Int,
                help: "first twisting degree",
            },
            ParamSpec {
                name: "l",
                kind: ParamKind::Int,
                help: "second twisting degree",
            },
        ]
    }
    fn build(&self, values: &ParamMap) -> Result<DelzantPolytope, FamilyError> {
        check_known(values, self.params())?;
        build_projbundle(
            get_rat(values, "mu")?,
            get_int(values, "k")?,
            get_int(values, "l")?,
        )
    }
}

struct Simplex;

impl PolytopeFamily for Simplex {
    fn name(&self) -> &'static str {
        "simplex"
    }
    fn summary(&self) -> &'static str {
        "scaled standard simplex: complex projective space"
    }
    fn params(&self) -> &'static [ParamSpec] {
        &[
            ParamSpec {
                name: "n",
                kind: ParamKind::Int,
                help: "dimension (positive integer)",
            },
            ParamSpec {
                name: "size",
                kind: ParamKind::Rational,
                help: "edge scale (positive rational)",
            },
        ]
    }
    fn build(&self, values: &ParamMap) -> Result<DelzantPolytope, FamilyError> {
        check_known(values, self.params())?;
        let n = get_int(values, "n")?;
        if n < 1 {
            return Err(FamilyError::ParameterOutOfRange(
                "simplex requires n >= 1".into(),
            ));
        }
        build_simplex(n as usize, get_rat(values, "size")?)
    }
}

/// Trapezoid of height 1 with facets `x1 >= 0`, `x2 >= 0`, `x2 <= 1`,
/// `x1 + k*x2 <= b`, where the bottom edge is longer than the top by `k`.
pub fn build_ruled(k: i64, lambda: Rat) -> Result<DelzantPolytope, FamilyError> {
    if k < 0 {
        return Err(FamilyError::ParameterOutOfRange("k must be >= 0".into()));
    }
    let two = rat_int(2);
    let ok = if k % 2 == 1 {
        lambda > rat_int(-1) && &two * (rat_int(1) + &lambda) > rat_int(k - 1)
    } else {
        !lambda.is_negative() && &two * (rat_int(1) + &lambda) > rat_int(k)
    };
    if !ok {
        return Err(FamilyError::ParameterOutOfRange(format!(
            "ruled requires lambda {} and 2(1+lambda) > {} for k = {k}",
            if k % 2 == 1 { "> -1" } else { ">= 0" },
            if k % 2 == 1 { k - 1 } else { k },
        )));
    }
    let b = if k % 2 == 1 {
        rat_int(2) + &lambda + rat(k - 1, 2)
    } else {
        rat_int(1) + &lambda + rat(k, 2)
    };
    let p = DelzantPolytope::new(
        format!("ruled(k={k}, lambda={})", rat_to_string(&lambda)),
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
            Facet {
                normal: vec![-1, -k],
                offset: -b,
            },
        ],
    )
    .expect("consistent facet data");
    debug_assert_eq!(p.validate_delzant(), Ok(()));
    Ok(p)
}

/// Pentagon with vertices (0,0), (0,1), (1,2), (nu+1-2k,2), (nu+3+2k,0).
pub fn build_blowup(nu: Rat, k: i64) -> Result<DelzantPolytope, FamilyError> {
    if !nu.is_positive() {
        return Err(FamilyError::ParameterOutOfRange("nu must be > 0".into()));
    }
    let half_nu_ceil = (&nu / rat_int(2)).ceil();
    if k < 0 || rat_int(k) >= half_nu_ceil {
        return Err(FamilyError::ParameterOutOfRange(format!(
            "blowup requires 0 <= k < ceil(nu/2) = {}",
            rat_to_string(&half_nu_ceil)
        )));
    }
    let p = DelzantPolytope::new(
        format!("blowup(nu={}, k={k})", rat_to_string(&nu)),
        2,
        vec![
            Facet {
                normal: vec![1, 0],
                offset: rat_int(0),
            },
            Facet {
                normal: vec![1, -1],
                offset: rat_int(-1),
            },
            Facet {
                normal: vec![0, -1],
                offset: rat_int(-2),
            },
            Facet {
                normal: vec![-1, -(2 * k + 1)],
                offset: -(&nu + rat_int(3 + 2 * k)),
            },
            Facet {
                normal: vec![0, 1],
                offset: rat_int(0),
            },
        ],
    )
    .expect("consistent facet data");
    debug_assert_eq!(p.validate_delzant(), Ok(()));
    Ok(p)
}

/// Three-dimensional polytope `{x2, x3 >= 0, x2+x3 <= 1, 0 <= x1 <= mu - k*x2 - l*x3}`.
pub fn build_projbundle(mu: Rat, k: i64, l: i64) -> Result<DelzantPolytope, FamilyError> {
    let bound = rat_int(k.max(l).max(0));
    if mu <= bound {
        return Err(FamilyError::ParameterOutOfRange(format!(
            "projbundle requires mu > max(k, l, 0) = {}",
            rat_to_string(&bound)
        )));
    }
    let p = DelzantPolytope::new(
        format!("projbundle(mu={}, k={k}, l={l})", rat_to_string(&mu)),
        3,
        vec![
            Facet {
                normal: vec![0, 1, 0],
                offset: rat_int(0),
            },
            Facet {
                normal: vec![0, 0, 1],
                offset: rat_int(0),
            },
            Facet {
                normal: vec![0, -1, -1],
                offset: rat_int(-1),
            },
            Facet {
                normal: vec![1, 0, 0],
                offset: rat_int(0),
            },
            Facet {
                normal: vec![-1, -k, -l],
                offset: -mu,
            },
        ],
    )
    .expect("consistent facet data");
    debug_assert_eq!(p.validate_delzant(), Ok(()));
    Ok(p)
}

/// Scaled standard simplex with normals `e_1, ..., e_n, -(e_1+...+e_n)`.
pub fn build_simplex(n: usize, size: Rat) -> Result<DelzantPolytope, FamilyError> {
    if n < 1 {
        return Err(FamilyError::ParameterOutOfRange("n must be >= 1".into()));
    }
    if !size.is_positive() {
        return Err(FamilyError::ParameterOutOfRange("size must be > 0".into()));
    }
    let mut facets = Vec::new();
    for i in 0..n {
        let mut normal = vec![0i64; n];
        normal[i] = 1;
        facets.push(Facet {
            normal,
            offset: rat_int(0),
        });
    }
    facets.push(Facet {
        normal: vec![-1; n],
        offset: -size.clone(),
    });
    let p = DelzantPolytope::new(
        format!("simplex(n={n}, size={})", rat_to_string(&size)),
        n,
        facets,
    )
    .expect("consistent facet data");
    debug_assert_eq!(p.validate_delzant(), Ok(()));
    Ok(p)
}

/// Symplectomorphism invariants of the projective-bundle family: two
/// parameter triples give symplectomorphic manifolds exactly when both the
/// residue `(k+l) mod 3` and the coupling value `3*mu - (k+l)` agree.
pub fn projbundle_invariants(mu: &Rat, k: i64, l: i64) -> (i64, Rat) {
    ((k + l).rem_euclid(3), rat_int(3) * mu - rat_int(k + l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Rat;

    fn points(p: &DelzantPolytope) -> Vec<Vec<Rat>> {
        p.enumerate_vertices()
            .unwrap()
            .iter()
            .map(|v| v.point.clone())
            .collect()
    }

    fn pt(coords: &[(i64, i64)]) -> Vec<Rat> {
        coords.iter().map(|&(p, q)| rat(p, q)).collect()
    }

    #[test]
    fn ruled_examples() {
        let p = build_ruled(1, rat(1, 2)).unwrap();
        assert_eq!(
            points(&p),
            vec![
                pt(&[(0, 1), (0, 1)]),
                pt(&[(0, 1), (1, 1)]),
                pt(&[(3, 2), (1, 1)]),
                pt(&[(5, 2), (0, 1)]),
            ]
        );
        assert_eq!(p.euclidean_volume().unwrap(), rat_int(2));

        let p = build_ruled(2, rat(3, 2)).unwrap();
        assert_eq!(
            points(&p),
            vec![
                pt(&[(0, 1), (0, 1)]),
                pt(&[(0, 1), (1, 1)]),
                pt(&[(3, 2), (1, 1)]),
                pt(&[(7, 2), (0, 1)]),
            ]
        );

        let p = build_ruled(0, rat_int(1)).unwrap();
        assert_eq!(
            points(&p),
            vec![
                pt(&[(0, 1), (0, 1)]),
                pt(&[(0, 1), (1, 1)]),
                pt(&[(2, 1), (0, 1)]),
                pt(&[(2, 1), (1, 1)]),
            ]
        );

        assert!(matches!(
            build_ruled(2, rat(-1, 2)),
            Err(FamilyError::ParameterOutOfRange(_))
        ));
        assert!(matches!(
            build_ruled(1, rat_int(-1)),
            Err(FamilyError::ParameterOutOfRange(_))
        ));
        assert!(matches!(
            build_ruled(4, rat_int(1)),
            Err(FamilyError::ParameterOutOfRange(_))
        ));
    }

    #[test]
    fn blowup_examples() {
        let p = build_blowup(rat_int(3), 0).unwrap();
        assert_eq!(
            points(&p),
            vec![
                pt(&[(0, 1), (0, 1)]),
                pt(&[(0, 1), (1, 1)]),
                pt(&[(1, 1), (2, 1)]),
                pt(&[(4, 1), (2, 1)]),
                pt(&[(6, 1), (0, 1)]),
            ]
        );

        let p = build_blowup(rat_int(3), 1).unwrap();
        assert_eq!(
            points(&p),
            vec![
                pt(&[(0, 1), (0, 1)]),
                pt(&[(0, 1), (1, 1)]),
                pt(&[(1, 1), (2, 1)]),
                pt(&[(2, 1), (2, 1)]),
                pt(&[(8, 1), (0, 1)]),
            ]
        );

        assert!(matches!(
            build_blowup(rat_int(1), 1),
            Err(FamilyError::ParameterOutOfRange(_))
        ));
    }

    #[test]
    fn projbundle_examples() {
        let p = build_projbundle(rat_int(3), 0, 0).unwrap();
        assert_eq!(points(&p).len(), 6);
        assert_eq!(p.euclidean_volume().unwrap(), rat(3, 2));

        let p = build_projbundle(rat_int(3), 1, 2).unwrap();
        let expect: Vec<Vec<Rat>> = vec![
            vec![rat_int(0), rat_int(0), rat_int(0)],
            vec![rat_int(0), rat_int(0), rat_int(1)],
            vec![rat_int(0), rat_int(1), rat_int(0)],
            vec![rat_int(1), rat_int(0), rat_int(1)],
            vec![rat_int(2), rat_int(1), rat_int(0)],
            vec![rat_int(3), rat_int(0), rat_int(0)],
        ];
        assert_eq!(points(&p), expect);
        // volume identity shared with the symplectomorphism invariant
        assert_eq!(p.euclidean_volume().unwrap(), rat(3 * 3 - 3, 6));

        assert!(matches!(
            build_projbundle(rat_int(1), 1, 0),
            Err(FamilyError::ParameterOutOfRange(_))
        ));
    }

    #[test]
    fn simplex_examples() {
        let p = build_simplex(2, rat_int(1)).unwrap();
        assert_eq!(points(&p).len(), 3);
        let p = build_simplex(1, rat_int(1)).unwrap();
        assert_eq!(points(&p).len(), 2);
        let p = build_simplex(3, rat_int(2)).unwrap();
        assert_eq!(p.euclidean_volume().unwrap(), rat(4, 3));
    }

    #[test]
    fn vertex_counts() {
        assert_eq!(points(&build_ruled(3, rat(3, 2)).unwrap()).len(), 4);
        assert_eq!(points(&build_blowup(rat(7, 2), 1).unwrap()).len(), 5);
        assert_eq!(points(&build_projbundle(rat(9, 2), -1, 2).unwrap()).len(), 6);
        assert_eq!(points(&build_simplex(4, rat_int(1)).unwrap()).len(), 5);
    }

    #[test]
    fn volumes_match_shoelace_values() {
        // pentagon area (7 + 4nu)/2, trapezoid area (top + bottom)/2
        assert_eq!(
            build_blowup(rat_int(3), 1).unwrap().euclidean_volume().unwrap(),
            rat(19, 2)
        );
        assert_eq!(
            build_ruled(2, rat(3, 2)).unwrap().euclidean_volume().unwrap(),
            rat(5, 2)
        );
        // prism-with-slant volume (3mu - (k+l))/6, negative twist included
        assert_eq!(
            build_projbundle(rat(9, 2), -1, 2)
                .unwrap()
                .euclidean_volume()
                .unwrap(),
            rat(25, 12)
        );
    }

    #[test]
    fn invariants_examples() {
        assert_eq!(projbundle_invariants(&rat_int(3), 0, 0), (0, rat_int(9)));
        assert_eq!(projbundle_invariants(&rat_int(4), 1, 2), (0, rat_int(9)));
        assert_eq!(projbundle_invariants(&rat_int(3), 1, 0), (1, rat_int(8)));
    }

    #[test]
    fn registry_dispatch() {
        let family = lookup("ruled").unwrap();
        let mut values = ParamMap::new();
        values.insert("k".into(), ParamValue::Int(1));
        values.insert("lambda".into(), ParamValue::Rational(rat(1, 2)));
        let p = family.build(&values).unwrap();
        assert_eq!(p.name(), "ruled(k=1, lambda=1/2)");

        values.insert("bogus".into(), ParamValue::Int(3));
        assert!(matches!(
            family.build(&values),
            Err(FamilyError::UnknownParameter(_))
        ));
        assert!(lookup("torus").is_none());
    }
}
