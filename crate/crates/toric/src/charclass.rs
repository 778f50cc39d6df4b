//! Characteristic classes of the vertical bundle in the face ring: Chern,
//! Pontryagin, and Euler classes, the symplectic-form lift, the symplectic
//! volume, and the coupling class.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;
use thiserror::Error;

use crate::exactalg::{rat_int, MPoly, Rat, VarId};
use crate::expr::ClassExpr;
use crate::localization::{fiber_integrate, pullback_base, LocError, Localizer};
use crate::polytope::DelzantPolytope;

/// Symbol of one characteristic class of the vertical bundle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassSymbol {
    Chern(u32),
    Pontryagin(u32),
    EulerClass,
    Omega,
    OmegaTilde,
}

impl ClassSymbol {
    /// Cohomological degree on a fiber of complex dimension `n`.
    pub fn coh_degree(self, n: usize) -> u32 {
        match self {
            ClassSymbol::Chern(i) => 2 * i,
            ClassSymbol::Pontryagin(i) => 4 * i,
            ClassSymbol::EulerClass => 2 * n as u32,
            ClassSymbol::Omega | ClassSymbol::OmegaTilde => 2,
        }
    }
}

impl fmt::Display for ClassSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassSymbol::Chern(i) => write!(f, "c{i}"),
            ClassSymbol::Pontryagin(i) => write!(f, "p{i}"),
            ClassSymbol::EulerClass => write!(f, "eu"),
            ClassSymbol::Omega => write!(f, "Omega"),
            ClassSymbol::OmegaTilde => write!(f, "omegatilde"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassError {
    #[error("class index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("malformed expression: {0}")]
    MalformedExpression(String),
    #[error(transparent)]
    Localization(#[from] LocError),
}

/// Elementary symmetric polynomial `e_i(F_1, ..., F_k)`.
pub fn elementary_symmetric(k: usize, i: usize) -> MPoly {
    if i > k {
        return MPoly::zero();
    }
    // e[j] after processing F_1..F_m is e_j of the first m faces
    let mut e: Vec<MPoly> = vec![MPoly::zero(); i + 1];
    e[0] = MPoly::one();
    for m in 1..=k {
        let face = MPoly::var(VarId::Face(m as u32));
        for j in (1..=i.min(m)).rev() {
            e[j] = &e[j] + &(&e[j - 1] * &face);
        }
    }
    e.pop().unwrap()
}

/// Chern class `c_i` of the vertical bundle: the i-th elementary symmetric
/// polynomial in all face variables (stable splitting into line bundles).
pub fn chern_class(p: &DelzantPolytope, i: u32) -> Result<MPoly, ClassError> {
    if i < 1 || i as usize > p.dim() {
        return Err(ClassError::IndexOutOfRange(format!(
            "c{i} requires 1 <= i <= {}",
            p.dim()
        )));
    }
    Ok(elementary_symmetric(p.num_facets(), i as usize))
}

/// Pontryagin class `p_j = (-1)^j sum_{a+b=2j} (-1)^a c_a c_b`, with
/// `c_0 = 1` and `c_m = 0` for `m > dim`. In particular `p_1 = c_1^2 - 2c_2`.
pub fn pontryagin_class(p: &DelzantPolytope, j: u32) -> Result<MPoly, ClassError> {
    if j < 1 || j as usize > p.dim() {
        return Err(ClassError::IndexOutOfRange(format!(
            "p{j} requires 1 <= j <= {}",
            p.dim()
        )));
    }
    let n = p.dim();
    let k = p.num_facets();
    let chern = |m: usize| -> MPoly {
        if m > n {
            MPoly::zero()
        } else {
            elementary_symmetric(k, m)
        }
    };
    let mut acc = MPoly::zero();
    for a in 0..=(2 * j as usize) {
        let b = 2 * j as usize - a;
        let product = &chern(a) * &chern(b);
        acc = if a % 2 == 0 {
            &acc + &product
        } else {
            &acc - &product
        };
    }
    if j % 2 == 1 {
        acc = -&acc;
    }
    Ok(acc)
}

/// Euler class of the oriented vertical bundle: the top Chern class `c_n`.
pub fn euler_class(p: &DelzantPolytope) -> MPoly {
    elementary_symmetric(p.num_facets(), p.dim())
}

/// The lift of the symplectic class determined by the facet offsets:
/// `-sum_i lambda_i F_i`.
pub fn omega_tilde(p: &DelzantPolytope) -> MPoly {
    let mut acc = MPoly::zero();
    for (i, facet) in p.facets().iter().enumerate() {
        acc = &acc - &MPoly::var(VarId::Face(i as u32 + 1)).scale(&facet.offset);
    }
    acc
}

/// Symplectic volume: the fiber integral of the n-th power of the lifted
/// symplectic class divided by n!. Agrees with the Euclidean volume of the
/// polytope, which is computed by an independent triangulation.
pub fn symplectic_volume(p: &DelzantPolytope) -> Result<Rat, ClassError> {
    let n = p.dim();
    let value = fiber_integrate(p, &omega_tilde(p).pow(n as u32))?;
    let constant = value
        .as_constant()
        .expect("degree-0 fiber integral is constant");
    let factorial: Rat = Rat::from_integer((1..=n as i64).product::<i64>().into());
    Ok(constant / factorial)
}

/// The coupling class: the unique degree-2 class restricting to the fiber
/// symplectic class whose (n+1)-st power integrates to zero.
///
/// Writing `I = integral(omega_tilde^{n+1})` and `V = integral(omega_tilde^n)`,
/// the class is `omega_tilde - pullback(I) / ((n+1) V)`; expanding the
/// (n+1)-st power shows this constant is the one killing the integral.
pub fn coupling_class(p: &DelzantPolytope) -> Result<MPoly, ClassError> {
    let n = p.dim() as u32;
    let lift = omega_tilde(p);
    let localizer = Localizer::new(p)?;
    let top_integral = localizer.integrate(&lift.pow(n + 1))?;
    let volume_integral = localizer
        .integrate(&lift.pow(n))?
        .as_constant()
        .expect("degree-0 fiber integral is constant");
    let scale = Rat::one() / (rat_int(n as i64 + 1) * volume_integral);
    Ok(&lift - &pullback_base(p, &top_integral)?.scale(&scale))
}

/// Substitute every class symbol by its face-ring polynomial and evaluate the
/// expression; integral atoms are rejected here.
pub fn evaluate_class_expr(p: &DelzantPolytope, e: &ClassExpr) -> Result<MPoly, ClassError> {
    let mut cache: BTreeMap<ClassSymbol, MPoly> = BTreeMap::new();
    e.eval(
        &mut |sym| {
            if let Some(hit) = cache.get(&sym) {
                return Ok(hit.clone());
            }
            let value = match sym {
                ClassSymbol::Chern(i) => chern_class(p, i)?,
                ClassSymbol::Pontryagin(i) => pontryagin_class(p, i)?,
                ClassSymbol::EulerClass => euler_class(p),
                ClassSymbol::Omega => coupling_class(p)?,
                ClassSymbol::OmegaTilde => omega_tilde(p),
            };
            cache.insert(sym, value.clone());
            Ok(value)
        },
        &mut |_| {
            Err(ClassError::MalformedExpression(
                "integral atoms are not allowed in a class expression".into(),
            ))
        },
    )
}
