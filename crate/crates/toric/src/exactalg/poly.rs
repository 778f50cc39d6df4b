//! Sparse multivariate polynomials over the exact rationals.
//!
//! Variables are tagged: base variables `T_i` and face variables `F_i` carry
//! cohomological degree 2, the formal parameter `y` carries degree 0. Terms
//! are kept in a canonical graded-lexicographic order with
//! `T1 < T2 < ... < F1 < F2 < ... < y`, so two equal polynomials always have
//! the identical stored form.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{ExactAlgError, Rat};

/// Identifier of a polynomial variable.
///
/// The derived `Ord` realizes the canonical variable order
/// `T1 < T2 < ... < F1 < F2 < ... < y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarId {
    /// Generator `T_i` of the base cohomology, index `i >= 1`, degree 2.
    Base(u32),
    /// Face-ring generator `F_i`, index `i >= 1`, degree 2.
    Face(u32),
    /// The formal genus parameter `y`, degree 0.
    Param,
}

impl VarId {
    /// Cohomological degree contributed by one power of this variable.
    pub fn degree(self) -> u32 {
        match self {
            VarId::Base(_) | VarId::Face(_) => 2,
            VarId::Param => 0,
        }
    }

    pub fn display_name(self) -> String {
        match self {
            VarId::Base(i) => format!("T{i}"),
            VarId::Face(i) => format!("F{i}"),
            VarId::Param => "y".to_string(),
        }
    }
}

/// Monomial: exponent vector stored sparsely, sorted by variable, all
/// exponents nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<(VarId, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: VarId) -> Self {
        Monomial(vec![(v, 1)])
    }

    /// Build from (variable, exponent) pairs; duplicates are merged and zero
    /// exponents dropped.
    pub fn from_pairs(pairs: &[(VarId, u32)]) -> Self {
        let mut map: BTreeMap<VarId, u32> = BTreeMap::new();
        for &(v, e) in pairs {
            if e > 0 {
                *map.entry(v).or_insert(0) += e;
            }
        }
        Monomial(map.into_iter().collect())
    }

    pub fn exponents(&self) -> &[(VarId, u32)] {
        &self.0
    }

    pub fn exponent_of(&self, v: VarId) -> u32 {
        self.0
            .iter()
            .find(|(w, _)| *w == v)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Total degree: sum of all exponents (grading for the term order).
    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    /// Cohomological degree: twice the sum of base and face exponents.
    pub fn coh_degree(&self) -> u32 {
        self.0.iter().map(|(v, e)| v.degree() * e).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0, self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// Exact quotient self / other, or None when some exponent would go
    /// negative.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in &self.0 {
            let mut rem = e;
            if j < other.0.len() && other.0[j].0 < v {
                return None; // divisor has a variable absent from self
            }
            if j < other.0.len() && other.0[j].0 == v {
                if other.0[j].1 > e {
                    return None;
                }
                rem = e - other.0[j].1;
                j += 1;
            }
            if rem > 0 {
                out.push((v, rem));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }
}

/// Graded lexicographic order: compare total degree first, then the first
/// variable (in `VarId` order) with differing exponent, larger exponent wins.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (va, ea) = self.0[i];
            let (vb, eb) = other.0[j];
            match va.cmp(&vb) {
                // self has a power of an earlier variable: self is larger
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => match ea.cmp(&eb) {
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                    }
                    ord => return ord,
                },
            }
        }
        if i < self.0.len() {
            Ordering::Greater
        } else if j < other.0.len() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial over the rationals.
///
/// Invariant: no stored zero coefficients; the term map is keyed by the
/// canonical monomial order, so equality is structural.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MPoly {
    terms: BTreeMap<Monomial, Rat>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        MPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = MPoly::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn from_int(n: i64) -> Self {
        MPoly::constant(super::rat_int(n))
    }

    pub fn var(v: VarId) -> Self {
        let mut p = MPoly::zero();
        p.terms.insert(Monomial::var(v), Rat::one());
        p
    }

    /// Single term `c * m`.
    pub fn term(c: Rat, m: Monomial) -> Self {
        let mut p = MPoly::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coefficient_of(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &Rat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Leading term in the canonical order (largest monomial).
    pub fn leading_term(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    /// Largest cohomological degree among the terms (0 for the zero
    /// polynomial).
    pub fn coh_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.coh_degree()).max().unwrap_or(0)
    }

    /// Some(d) when every term has cohomological degree d (zero counts as
    /// homogeneous of any degree and reports None).
    pub fn homogeneous_coh_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|m| m.coh_degree());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// Sum of the terms of the given cohomological degree (`y` exponents are
    /// unconstrained since `y` has degree 0).
    pub fn homogeneous_component(&self, degree: u32) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.coh_degree() == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Drop every term of cohomological degree above the bound. Used to
    /// truncate products cheaply.
    pub fn truncate_coh_degree(&self, max_degree: u32) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.coh_degree() <= max_degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// All variables occurring in the polynomial.
    pub fn variables(&self) -> BTreeSet<VarId> {
        self.terms
            .keys()
            .flat_map(|m| m.exponents().iter().map(|(v, _)| *v))
            .collect()
    }

    /// The constant value when the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Rat> {
        if self.terms.is_empty() {
            return Some(Rat::zero());
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.is_one() {
                return Some(c.clone());
            }
        }
        None
    }

    /// Ring-homomorphic substitution: every variable with an entry in the
    /// assignment is replaced by its image, all others map to themselves.
    pub fn substitute(&self, assignment: &BTreeMap<VarId, MPoly>) -> MPoly {
        // cache successive powers of each image polynomial
        let mut powers: BTreeMap<VarId, Vec<MPoly>> = BTreeMap::new();
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let mut image = MPoly::constant(c.clone());
            for &(v, e) in m.exponents() {
                match assignment.get(&v) {
                    None => image = &image * &MPoly::term(Rat::one(), Monomial::from_pairs(&[(v, e)])),
                    Some(img) => {
                        let cache = powers.entry(v).or_insert_with(|| vec![MPoly::one()]);
                        while cache.len() <= e as usize {
                            let next = &cache[cache.len() - 1] * img;
                            cache.push(next);
                        }
                        image = &image * &cache[e as usize];
                    }
                }
                if image.is_zero() {
                    break;
                }
            }
            out = &out + &image;
        }
        out
    }

    /// Exact quotient: returns q with `q * den == self`, or `NotDivisible`.
    pub fn exact_divide(&self, den: &MPoly) -> Result<MPoly, ExactAlgError> {
        if den.is_zero() {
            return Err(ExactAlgError::DivisionByZero);
        }
        let (lm_d, lc_d) = den.leading_term().expect("nonzero divisor");
        let mut rem = self.clone();
        let mut quot = MPoly::zero();
        while let Some((lm_r, lc_r)) = rem.leading_term() {
            let m = match lm_r.checked_div(lm_d) {
                Some(m) => m,
                None => return Err(ExactAlgError::NotDivisible),
            };
            let c = lc_r / lc_d;
            let t = MPoly::term(c, m);
            rem = &rem - &(&t * den);
            quot = &quot + &t;
        }
        Ok(quot)
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

/// Formal quotient of polynomials, never auto-reduced. Sums are combined over
/// the product denominator so that a localization fold ends with exactly one
/// divisibility check.
#[derive(Debug, Clone)]
pub struct RatFun {
    pub num: MPoly,
    pub den: MPoly,
}

impl RatFun {
    pub fn new(num: MPoly, den: MPoly) -> Result<Self, ExactAlgError> {
        if den.is_zero() {
            return Err(ExactAlgError::DivisionByZero);
        }
        Ok(RatFun { num, den })
    }

    pub fn from_poly(p: MPoly) -> Self {
        RatFun {
            num: p,
            den: MPoly::one(),
        }
    }

    pub fn add(&self, rhs: &RatFun) -> RatFun {
        RatFun {
            num: &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            den: &self.den * &rhs.den,
        }
    }

    pub fn mul(&self, rhs: &RatFun) -> RatFun {
        RatFun {
            num: &self.num * &rhs.num,
            den: &self.den * &rhs.den,
        }
    }

    /// Equality via cross-multiplication; representations need not match.
    pub fn eq_cross(&self, rhs: &RatFun) -> bool {
        &self.num * &rhs.den == &rhs.num * &self.den
    }

    /// Collapse to a polynomial when the denominator divides the numerator.
    pub fn into_poly(self) -> Result<MPoly, ExactAlgError> {
        self.num.exact_divide(&self.den)
    }
}

/// Convenience constructors used throughout the crate and in tests.
pub fn base_var(i: u32) -> MPoly {
    MPoly::var(VarId::Base(i))
}

pub fn face_var(i: u32) -> MPoly {
    MPoly::var(VarId::Face(i))
}

pub fn param_y() -> MPoly {
    MPoly::var(VarId::Param)
}

#[cfg(test)]
mod tests {
    use super::super::{rat, rat_int};
    use super::*;

    fn t(i: u32) -> MPoly {
        base_var(i)
    }
    fn f(i: u32) -> MPoly {
        face_var(i)
    }

    #[test]
    fn difference_of_squares() {
        let lhs = &(&t(1) + &t(2)) * &(&t(1) - &t(2));
        let rhs = &t(1).pow(2) - &t(2).pow(2);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn zeroth_power_is_one() {
        assert_eq!((&f(1) + &f(2)).pow(0), MPoly::one());
    }

    #[test]
    fn ruled_weight_square_sum() {
        // (x+y)^2 + (x-y)^2 + y^2 + (2x-y)^2 = 6x^2 - 4xy + 4y^2
        let (x, y) = (t(1), t(2));
        let sum = &(&(&(&x + &y).pow(2) + &(&x - &y).pow(2)) + &y.pow(2))
            + &(&x.scale(&rat_int(2)) - &y).pow(2);
        let mut expect = MPoly::zero();
        expect.add_term(Monomial::from_pairs(&[(VarId::Base(1), 2)]), rat_int(6));
        expect.add_term(
            Monomial::from_pairs(&[(VarId::Base(1), 1), (VarId::Base(2), 1)]),
            rat_int(-4),
        );
        expect.add_term(Monomial::from_pairs(&[(VarId::Base(2), 2)]), rat_int(4));
        assert_eq!(sum, expect);
    }

    #[test]
    fn exact_division() {
        let num = &t(1).pow(2) - &t(2).pow(2);
        let den = &t(1) - &t(2);
        assert_eq!(num.exact_divide(&den).unwrap(), &t(1) + &t(2));

        let bad = &t(1).pow(2) + &t(2).pow(2);
        assert_eq!(
            bad.exact_divide(&den).unwrap_err(),
            ExactAlgError::NotDivisible
        );

        let prod = &t(1) * &t(2);
        assert_eq!(MPoly::zero().exact_divide(&prod).unwrap(), MPoly::zero());
        assert_eq!(
            num.exact_divide(&MPoly::zero()).unwrap_err(),
            ExactAlgError::DivisionByZero
        );
    }

    #[test]
    fn substitution_examples() {
        // F1*F2 with F1 -> T1, F2 -> T2
        let p = &f(1) * &f(2);
        let mut map = BTreeMap::new();
        map.insert(VarId::Face(1), t(1));
        map.insert(VarId::Face(2), t(2));
        assert_eq!(p.substitute(&map), &t(1) * &t(2));

        // F3^2 with F3 -> 0
        let mut map = BTreeMap::new();
        map.insert(VarId::Face(3), MPoly::zero());
        assert_eq!(f(3).pow(2).substitute(&map), MPoly::zero());

        // T1 -> F1 - F3 (pullback of T1 on the standard 2-simplex)
        let mut map = BTreeMap::new();
        map.insert(VarId::Base(1), &f(1) - &f(3));
        assert_eq!(t(1).substitute(&map), &f(1) - &f(3));
    }

    #[test]
    fn homogeneous_components() {
        let p = &(&MPoly::one() + &t(1)) + &t(1).pow(2);
        assert_eq!(p.homogeneous_component(2), t(1));

        let yp = &(&param_y() * &t(1)) + &param_y().pow(2);
        assert_eq!(yp.homogeneous_component(2), &param_y() * &t(1));
        assert_eq!(yp.homogeneous_component(0), param_y().pow(2));

        assert_eq!(MPoly::zero().homogeneous_component(4), MPoly::zero());
    }

    #[test]
    fn canonical_term_order() {
        // T1^2 > T1*T2 > T2^2 > T1 in graded lex
        let m_t1sq = Monomial::from_pairs(&[(VarId::Base(1), 2)]);
        let m_t1t2 = Monomial::from_pairs(&[(VarId::Base(1), 1), (VarId::Base(2), 1)]);
        let m_t2sq = Monomial::from_pairs(&[(VarId::Base(2), 2)]);
        let m_t1 = Monomial::from_pairs(&[(VarId::Base(1), 1)]);
        assert!(m_t1sq > m_t1t2);
        assert!(m_t1t2 > m_t2sq);
        assert!(m_t2sq > m_t1);
        // T variables precede F variables precede y
        assert!(Monomial::var(VarId::Base(5)) > Monomial::var(VarId::Face(1)));
        assert!(Monomial::var(VarId::Face(9)) > Monomial::var(VarId::Param));
    }

    #[test]
    fn ratfun_fold_keeps_product_denominator() {
        let a = RatFun::new(MPoly::one(), t(1).clone()).unwrap();
        let b = RatFun::new(MPoly::one(), t(2).clone()).unwrap();
        let s = a.add(&b);
        assert_eq!(s.den, &t(1) * &t(2));
        assert_eq!(s.num, &t(1) + &t(2));
        let half = RatFun::new(MPoly::one(), MPoly::constant(rat(2, 1))).unwrap();
        assert!(half.eq_cross(&RatFun::from_poly(MPoly::constant(rat(1, 2)))));
    }
}
