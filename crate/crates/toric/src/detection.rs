//! The detection function: evaluate polynomial combinations of fiber
//! integrals across several torus actions, assemble the exact coefficient
//! matrix, and report its rank as a lower bound for Betti numbers of the
//! relevant classifying space.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::charclass::{evaluate_class_expr, ClassError, ClassSymbol};
use crate::exactalg::{MPoly, Monomial, QMatrix, Rat, RowInsertion, RowSpace, VarId};
use crate::expr::ClassExpr;
use crate::localization::{LocError, Localizer};
use crate::polytope::DelzantPolytope;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DetError {
    #[error("not a detection class: {0}")]
    NotDetectionClass(String),
    #[error("class is not homogeneous")]
    InhomogeneousClass,
    #[error("classes have mixed degrees ({0} and {1})")]
    MixedDegrees(i64, i64),
    #[error("actions have mixed dimensions")]
    DimensionMismatch,
    #[error(transparent)]
    Class(#[from] ClassError),
    #[error(transparent)]
    Localization(#[from] LocError),
}

/// A polynomial over Q in fiber-integral atoms, homogeneous in the base
/// cohomology.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionClass {
    expr: ClassExpr,
    source: String,
}

impl DetectionClass {
    /// Wrap a parsed expression; class symbols may appear only inside
    /// integral atoms.
    pub fn new(expr: ClassExpr) -> Result<Self, DetError> {
        if expr.has_bare_symbol() {
            return Err(DetError::NotDetectionClass(
                "class symbols must sit inside I[...] atoms".into(),
            ));
        }
        let source = expr.to_string();
        Ok(DetectionClass { expr, source })
    }

    pub fn parse(src: &str) -> Result<Self, DetError> {
        let expr = crate::expr::parse_class_expr(src)
            .map_err(|e| DetError::NotDetectionClass(e.to_string()))?;
        DetectionClass::new(expr)
    }

    pub fn expr(&self) -> &ClassExpr {
        &self.expr
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Homogeneous degree in the base cohomology for fiber dimension n; an
    /// integral of a degree-d monomial contributes d - 2n.
    pub fn degree(&self, n: usize) -> Option<i64> {
        self.expr.coh_degree(n)
    }

    pub fn symbols(&self) -> BTreeSet<ClassSymbol> {
        let mut out = BTreeSet::new();
        self.expr.symbols(&mut out);
        out
    }

    /// Integral atoms whose inner degree is at most 2n, so their value is a
    /// constant (or zero). Legal, but usually worth flagging to the caller.
    pub fn constant_atoms(&self, n: usize) -> Vec<String> {
        let mut atoms = Vec::new();
        self.expr.integral_atoms(&mut atoms);
        atoms
            .into_iter()
            .filter(|a| matches!(a.coh_degree(n), Some(d) if d <= 2 * n as i64))
            .map(|a| a.to_string())
            .collect()
    }
}

/// Replace each integral atom by its fiber integral over the given action and
/// evaluate the outer polynomial exactly.
pub fn evaluate_detection_class(
    p: &DelzantPolytope,
    class: &DetectionClass,
) -> Result<MPoly, DetError> {
    if class.degree(p.dim()).is_none() {
        return Err(DetError::InhomogeneousClass);
    }
    let localizer = Localizer::new(p)?;
    class.expr.eval(
        &mut |_| {
            Err(DetError::NotDetectionClass(
                "bare class symbol in a detection class".into(),
            ))
        },
        &mut |inner| {
            let face_poly = evaluate_class_expr(p, inner)?;
            Ok(localizer.integrate(&face_poly)?)
        },
    )
}

/// The classifying space a set of class symbols detects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupAttribution {
    /// Coupling-class symbols present: Hamiltonian symplectomorphisms.
    Ham,
    /// Chern classes only: the symplectomorphism group.
    Symp,
    /// Pontryagin and Euler classes only: the diffeomorphism group.
    Diff,
    /// Chern classes mixed with Pontryagin or Euler classes.
    Mixed,
}

impl GroupAttribution {
    pub fn cohomology_name(&self) -> &'static str {
        match self {
            GroupAttribution::Ham => "B_Ham",
            GroupAttribution::Symp => "B_Symp",
            GroupAttribution::Diff => "B_Diff",
            GroupAttribution::Mixed => "B_Symp and B_Diff",
        }
    }
}

pub fn group_attribution(symbols: &BTreeSet<ClassSymbol>) -> GroupAttribution {
    let has_coupling = symbols
        .iter()
        .any(|s| matches!(s, ClassSymbol::Omega | ClassSymbol::OmegaTilde));
    if has_coupling {
        return GroupAttribution::Ham;
    }
    let has_chern = symbols.iter().any(|s| matches!(s, ClassSymbol::Chern(_)));
    let has_smooth = symbols
        .iter()
        .any(|s| matches!(s, ClassSymbol::Pontryagin(_) | ClassSymbol::EulerClass));
    match (has_chern, has_smooth) {
        (true, false) => GroupAttribution::Symp,
        (true, true) => GroupAttribution::Mixed,
        (false, _) => GroupAttribution::Diff,
    }
}

/// Evaluated detection data: one row per class, columns running over the
/// degree-d monomial basis of each action in turn.
#[derive(Debug, Clone)]
pub struct DetectionVectorSet {
    pub dim: usize,
    /// Common homogeneous degree of the classes in the base cohomology.
    pub degree: i64,
    pub action_names: Vec<String>,
    pub class_sources: Vec<String>,
    pub symbols: BTreeSet<ClassSymbol>,
    pub matrix: QMatrix,
}

/// Monomials of the given polynomial degree in T_1..T_n, in descending
/// canonical order.
fn monomial_basis(n: usize, degree: u32) -> Vec<Monomial> {
    fn rec(n: usize, var: u32, remaining: u32, current: &mut Vec<(VarId, u32)>, out: &mut Vec<Monomial>) {
        if var as usize == n {
            if remaining == 0 {
                out.push(Monomial::from_pairs(current));
            }
            return;
        }
        if var as usize == n - 1 {
            current.push((VarId::Base(var + 1), remaining));
            out.push(Monomial::from_pairs(current));
            current.pop();
            return;
        }
        for e in (0..=remaining).rev() {
            current.push((VarId::Base(var + 1), e));
            rec(n, var + 1, remaining - e, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, 0, degree, &mut Vec::new(), &mut out);
    out.sort();
    out.reverse();
    out
}

/// Evaluate all classes on all actions and assemble the coefficient matrix.
pub fn detection_matrix(
    actions: &[DelzantPolytope],
    classes: &[DetectionClass],
) -> Result<DetectionVectorSet, DetError> {
    assert!(!actions.is_empty() && !classes.is_empty());
    let dim = actions[0].dim();
    if actions.iter().any(|a| a.dim() != dim) {
        return Err(DetError::DimensionMismatch);
    }
    let mut degree: Option<i64> = None;
    for class in classes {
        let d = class.degree(dim).ok_or(DetError::InhomogeneousClass)?;
        match degree {
            None => degree = Some(d),
            Some(existing) if existing == d => {}
            Some(existing) => return Err(DetError::MixedDegrees(existing, d)),
        }
    }
    let degree = degree.expect("nonempty classes");
    // negative-degree classes evaluate to zero; keep one slot per action
    let basis = if degree >= 0 && degree % 2 == 0 {
        monomial_basis(dim, degree as u32 / 2)
    } else {
        vec![Monomial::one()]
    };
    let mut rows = Vec::with_capacity(classes.len());
    let mut symbols = BTreeSet::new();
    for class in classes {
        symbols.extend(class.symbols());
        let mut row = Vec::with_capacity(actions.len() * basis.len());
        for action in actions {
            let value = evaluate_detection_class(action, class)?;
            debug_assert!(
                value.is_zero() || value.homogeneous_coh_degree() == Some(degree.max(0) as u32)
            );
            for m in &basis {
                row.push(value.coefficient_of(m));
            }
        }
        rows.push(row);
    }
    Ok(DetectionVectorSet {
        dim,
        degree,
        action_names: actions.iter().map(|a| a.name().to_string()).collect(),
        class_sources: classes.iter().map(|c| c.source().to_string()).collect(),
        symbols,
        matrix: QMatrix::from_rows(rows),
    })
}

/// Rank report with a basis of independent classes and exact dependency
/// certificates for the rest.
#[derive(Debug, Clone)]
pub struct BettiReport {
    pub rank: usize,
    pub degree: i64,
    pub group: GroupAttribution,
    /// Indices of classes forming a basis of the row space.
    pub basis: Vec<usize>,
    /// For each dependent class, the combination of basis classes equal to it.
    pub dependencies: Vec<(usize, Vec<(usize, Rat)>)>,
}

pub fn betti_lower_bound(set: &DetectionVectorSet) -> BettiReport {
    let mut space = RowSpace::new(set.matrix.cols());
    let mut basis = Vec::new();
    let mut dependencies = Vec::new();
    for r in 0..set.matrix.rows() {
        match space.insert(set.matrix.row(r)) {
            RowInsertion::Independent => basis.push(r),
            RowInsertion::DependentOn(combo) => dependencies.push((r, combo)),
        }
    }
    BettiReport {
        rank: space.rank(),
        degree: set.degree,
        group: group_attribution(&set.symbols),
        basis,
        dependencies,
    }
}
