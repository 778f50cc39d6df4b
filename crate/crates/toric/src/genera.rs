//! Multiplicative genera: truncated characteristic power series, sequence
//! classes of the vertical bundle, genus values by localization and by the
//! fixed-point count, and the strict-multiplicativity vanishing check.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactalg::{param_y, rat_int, MPoly, Rat, VarId};
use crate::localization::{fixed_point_data, LocError, Localizer};
use crate::polytope::DelzantPolytope;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenusError {
    #[error("series truncated at order {available}, need {needed}")]
    TruncationTooLow { needed: usize, available: usize },
    #[error("direction pairs to zero against a fixed-point weight")]
    NonGenericDirection,
    #[error(transparent)]
    Localization(#[from] LocError),
}

/// Truncated characteristic power series `Q(x) = 1 + q_1 x + ... + q_R x^R`
/// with coefficients in Q[y], generating a genus.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicativeSequence {
    name: String,
    /// q_0..q_R; q_0 = 1; polynomials in `y` only.
    coeffs: Vec<MPoly>,
}

impl MultiplicativeSequence {
    pub fn new(name: impl Into<String>, coeffs: Vec<MPoly>) -> Self {
        assert!(!coeffs.is_empty() && coeffs[0] == MPoly::one(), "q_0 must be 1");
        MultiplicativeSequence {
            name: name.into(),
            coeffs,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, m: usize) -> &MPoly {
        &self.coeffs[m]
    }

    /// Substitute a rational value for `y`, producing a parameter-free series.
    pub fn specialize_y(&self, name: impl Into<String>, value: Rat) -> MultiplicativeSequence {
        let mut map = BTreeMap::new();
        map.insert(VarId::Param, MPoly::constant(value));
        MultiplicativeSequence {
            name: name.into(),
            coeffs: self.coeffs.iter().map(|q| q.substitute(&map)).collect(),
        }
    }
}

/// The Hirzebruch series `Q_y(x) = x(1+y) / (1 - e^{-x(1+y)}) - xy`,
/// truncated at the given order. Specializes to the Todd series at `y = 0`,
/// to `x/tanh(x)` at `y = 1`, and to `1 + x` at `y = -1`.
pub fn chi_y_series(order: usize) -> MultiplicativeSequence {
    // invert g(u) = (1 - e^{-u})/u, whose coefficients are (-1)^m/(m+1)!
    let mut g: Vec<Rat> = Vec::with_capacity(order + 1);
    let mut factorial = BigInt::one();
    for m in 0..=order {
        factorial *= BigInt::from(m as i64 + 1);
        let sign = if m % 2 == 0 { 1 } else { -1 };
        g.push(Rat::new(BigInt::from(sign), factorial.clone()));
    }
    let mut f: Vec<Rat> = vec![Rat::zero(); order + 1];
    f[0] = Rat::one();
    for m in 1..=order {
        let mut acc = Rat::zero();
        for i in 1..=m {
            acc += &g[i] * &f[m - i];
        }
        f[m] = -acc;
    }
    let one_plus_y = &MPoly::one() + &param_y();
    let mut coeffs: Vec<MPoly> = (0..=order)
        .map(|m| one_plus_y.pow(m as u32).scale(&f[m]))
        .collect();
    if order >= 1 {
        coeffs[1] = &coeffs[1] - &param_y();
    }
    MultiplicativeSequence::new("chi-y", coeffs)
}

/// The series with every coefficient 1, `Q(x) = 1/(1-x)`. Not strictly
/// multiplicative: its degree-3 polynomial contains `c_1^3`, whose fiber
/// integral is nonzero on ruled surfaces. Used as a negative control.
pub fn segre_series(order: usize) -> MultiplicativeSequence {
    MultiplicativeSequence::new("segre", vec![MPoly::one(); order + 1])
}

/// The series `Q(x) = 1 + x`, whose sequence polynomials are the Chern
/// classes themselves.
pub fn total_chern_series(order: usize) -> MultiplicativeSequence {
    let mut coeffs = vec![MPoly::zero(); order + 1];
    coeffs[0] = MPoly::one();
    if order >= 1 {
        coeffs[1] = MPoly::one();
    }
    MultiplicativeSequence::new("total-chern", coeffs)
}

/// Series names accepted by the CLI.
pub const SERIES_NAMES: [&str; 4] = ["todd", "signature", "chi-y", "euler"];

/// Look up a series by CLI name: the generic `chi-y` form or one of its
/// specializations `todd` (y=0), `signature` (y=1), `euler` (y=-1).
pub fn named_series(name: &str, order: usize) -> Option<MultiplicativeSequence> {
    let chi = chi_y_series(order);
    match name {
        "chi-y" => Some(chi),
        "todd" => Some(chi.specialize_y("todd", Rat::zero())),
        "signature" => Some(chi.specialize_y("signature", Rat::one())),
        "euler" => Some(chi.specialize_y("euler", rat_int(-1))),
        _ => None,
    }
}

/// The degree-2r part of the sequence class of the vertical bundle, built
/// through the stable splitting into one line bundle per facet:
/// the 2r-homogeneous component of `prod_i Q(F_i)`.
pub fn sequence_class(
    p: &DelzantPolytope,
    s: &MultiplicativeSequence,
    r: usize,
) -> Result<MPoly, GenusError> {
    if r > s.truncation() {
        return Err(GenusError::TruncationTooLow {
            needed: r,
            available: s.truncation(),
        });
    }
    let max_degree = 2 * r as u32;
    let mut product = MPoly::one();
    for i in 1..=p.num_facets() {
        let face = MPoly::var(VarId::Face(i as u32));
        let mut q_of_face = MPoly::zero();
        for m in 0..=r {
            q_of_face = &q_of_face + &(s.coeff(m) * &face.pow(m as u32));
        }
        product = (&product * &q_of_face).truncate_coh_degree(max_degree);
    }
    Ok(product.homogeneous_component(max_degree))
}

/// Genus of the toric variety: the fiber integral of the top sequence class,
/// a constant polynomial in Q[y].
pub fn genus_value(
    p: &DelzantPolytope,
    s: &MultiplicativeSequence,
) -> Result<MPoly, GenusError> {
    let class = sequence_class(p, s, p.dim())?;
    Ok(Localizer::new(p)?.integrate(&class)?)
}

/// The chi_y genus from the fixed points alone: `sum_P (-y)^{s_P}` where
/// `s_P` counts the weights pairing positively with the direction `xi`.
pub fn chi_y_fixed_points(p: &DelzantPolytope, xi: &[i64]) -> Result<MPoly, GenusError> {
    assert_eq!(xi.len(), p.dim());
    let fps = fixed_point_data(p)?;
    let mut total = MPoly::zero();
    for fp in &fps {
        let mut positive = 0u32;
        for w in &fp.weights {
            let pairing = weight_pairing(w, xi);
            if pairing.is_zero() {
                return Err(GenusError::NonGenericDirection);
            }
            if pairing.is_positive() {
                positive += 1;
            }
        }
        let minus_y = -&param_y();
        total = &total + &minus_y.pow(positive);
    }
    Ok(total)
}

fn weight_pairing(w: &MPoly, xi: &[i64]) -> Rat {
    let mut acc = Rat::zero();
    for (m, c) in w.terms() {
        let exps = m.exponents();
        assert!(exps.len() == 1 && exps[0].1 == 1, "weights are linear forms");
        match exps[0].0 {
            VarId::Base(i) => acc += c * Rat::from_integer(xi[i as usize - 1].into()),
            v => panic!("weight contains non-base variable {}", v.display_name()),
        }
    }
    acc
}

/// First direction of the form `(1, N, N^2, ...)` pairing nonzero against
/// every weight of every fixed point.
pub fn generic_direction(p: &DelzantPolytope) -> Result<Vec<i64>, GenusError> {
    for n in 2i64.. {
        let mut xi = Vec::with_capacity(p.dim());
        let mut power = 1i64;
        for _ in 0..p.dim() {
            xi.push(power);
            power *= n;
        }
        match chi_y_fixed_points(p, &xi) {
            Ok(_) => return Ok(xi),
            Err(GenusError::NonGenericDirection) => continue,
            Err(e) => return Err(e),
        }
    }
    unreachable!("weights are finitely many nonzero integer forms")
}

/// Fiber integrals of the sequence classes above the fiber dimension: the
/// entries for r in (n, r_max]. A strictly multiplicative sequence yields the
/// zero polynomial in every slot.
pub fn strict_mult_check(
    p: &DelzantPolytope,
    s: &MultiplicativeSequence,
    r_max: usize,
) -> Result<Vec<(usize, MPoly)>, GenusError> {
    let n = p.dim();
    if r_max > s.truncation() {
        return Err(GenusError::TruncationTooLow {
            needed: r_max,
            available: s.truncation(),
        });
    }
    let localizer = Localizer::new(p)?;
    let mut out = Vec::new();
    for r in (n + 1)..=r_max {
        let class = sequence_class(p, s, r)?;
        out.push((r, localizer.integrate(&class)?));
    }
    Ok(out)
}

/// The degree-r polynomial of the sequence expressed in Chern-class
/// variables, computed by expanding `prod Q(x_i)` in r formal roots and
/// eliminating leading terms against elementary symmetric products.
///
/// In the returned polynomial the face variable `F_i` stands for the i-th
/// Chern class `c_i`; substituting `F_i -> e_i(F_1..F_k)` recovers the
/// sequence class of a polytope with k facets.
pub fn k_poly_in_chern(
    s: &MultiplicativeSequence,
    r: usize,
) -> Result<MPoly, GenusError> {
    if r > s.truncation() {
        return Err(GenusError::TruncationTooLow {
            needed: r,
            available: s.truncation(),
        });
    }
    if r == 0 {
        return Ok(MPoly::one());
    }
    // prod_{i=1}^{r} Q(x_i) with roots x_i = T_i, degree-2r part
    let max_degree = 2 * r as u32;
    let mut product = MPoly::one();
    for i in 1..=r {
        let root = MPoly::var(VarId::Base(i as u32));
        let mut q_of_root = MPoly::zero();
        for m in 0..=r {
            q_of_root = &q_of_root + &(s.coeff(m) * &root.pow(m as u32));
        }
        product = (&product * &q_of_root).truncate_coh_degree(max_degree);
    }
    let mut rest = product.homogeneous_component(max_degree);

    // precompute e_1..e_r in the roots
    let elementary: Vec<MPoly> = (0..=r)
        .map(|i| crate::charclass::elementary_symmetric(r, i))
        .map(|e_in_faces| {
            // reuse the face-variable expansion, renaming F_j -> T_j
            let mut map = BTreeMap::new();
            for j in 1..=r as u32 {
                map.insert(VarId::Face(j), MPoly::var(VarId::Base(j)));
            }
            e_in_faces.substitute(&map)
        })
        .collect();

    let mut out = MPoly::zero();
    while !rest.is_zero() {
        let (alpha, coeff_y) = leading_root_exponents(&rest, r);
        for w in alpha.windows(2) {
            assert!(w[0] >= w[1], "leading exponents of a symmetric polynomial form a partition");
        }
        let mut e_product = MPoly::one();
        let mut c_monomial = MPoly::one();
        for i in 0..r {
            let next = if i + 1 < r { alpha[i + 1] } else { 0 };
            let mult = alpha[i] - next;
            if mult > 0 {
                e_product = &e_product * &elementary[i + 1].pow(mult);
                c_monomial = &c_monomial * &MPoly::var(VarId::Face(i as u32 + 1)).pow(mult);
            }
        }
        rest = &rest - &(&coeff_y * &e_product);
        out = &out + &(&coeff_y * &c_monomial);
    }
    Ok(out)
}

/// Largest monomial in the root variables together with its coefficient in
/// Q[y] (summing over the attached powers of y).
fn leading_root_exponents(p: &MPoly, r: usize) -> (Vec<u32>, MPoly) {
    use crate::exactalg::Monomial;
    let mut best: Option<Monomial> = None;
    for (m, _) in p.terms() {
        let root_part = Monomial::from_pairs(
            &m.exponents()
                .iter()
                .filter(|(v, _)| matches!(v, VarId::Base(_)))
                .copied()
                .collect::<Vec<_>>(),
        );
        if best.as_ref().is_none_or(|b| root_part > *b) {
            best = Some(root_part);
        }
    }
    let lead = best.expect("nonzero polynomial");
    let mut coeff = MPoly::zero();
    for (m, c) in p.terms() {
        let root_part: Vec<(VarId, u32)> = m
            .exponents()
            .iter()
            .filter(|(v, _)| matches!(v, VarId::Base(_)))
            .copied()
            .collect();
        if Monomial::from_pairs(&root_part) == lead {
            let y_exp = m.exponent_of(VarId::Param);
            coeff = &coeff + &MPoly::term(c.clone(), Monomial::from_pairs(&[(VarId::Param, y_exp)]));
        }
    }
    let mut alpha = vec![0u32; r];
    for &(v, e) in lead.exponents() {
        if let VarId::Base(i) = v {
            alpha[i as usize - 1] = e;
        }
    }
    (alpha, coeff)
}

/// Multiplicativity for a bundle: the genus of the total space must equal
/// the product of the genera of fiber and base.
pub fn genus_product_check(
    fiber: &DelzantPolytope,
    base: &DelzantPolytope,
    total: &DelzantPolytope,
    s: &MultiplicativeSequence,
) -> Result<bool, GenusError> {
    let fiber_genus = genus_value(fiber, s)?;
    let base_genus = genus_value(base, s)?;
    let total_genus = genus_value(total, s)?;
    Ok(total_genus == &fiber_genus * &base_genus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;
    use crate::families::{build_blowup, build_projbundle, build_ruled, build_simplex};

    fn y() -> MPoly {
        param_y()
    }

    fn chi_cp1() -> MPoly {
        &MPoly::one() - &y()
    }

    fn chi_cp2() -> MPoly {
        &(&MPoly::one() - &y()) + &y().pow(2)
    }

    #[test]
    fn series_specializations() {
        let chi = chi_y_series(4);
        let todd = chi.specialize_y("todd", Rat::zero());
        let expect_todd = [rat(1, 1), rat(1, 2), rat(1, 12), rat(0, 1), rat(-1, 720)];
        for (m, e) in expect_todd.iter().enumerate() {
            assert_eq!(todd.coeff(m), &MPoly::constant(e.clone()), "todd q_{m}");
        }

        let sig = chi.specialize_y("signature", Rat::one());
        let expect_sig = [rat(1, 1), rat(0, 1), rat(1, 3), rat(0, 1), rat(-1, 45)];
        for (m, e) in expect_sig.iter().enumerate() {
            assert_eq!(sig.coeff(m), &MPoly::constant(e.clone()), "signature q_{m}");
        }

        let euler = chi.specialize_y("euler", rat_int(-1));
        assert_eq!(euler.coeff(0), &MPoly::one());
        assert_eq!(euler.coeff(1), &MPoly::one());
        for m in 2..=4 {
            assert_eq!(euler.coeff(m), &MPoly::zero(), "euler q_{m}");
        }

        // q_1 = (1-y)/2
        let q1 = (&MPoly::one() - &y()).scale(&rat(1, 2));
        assert_eq!(chi.coeff(1), &q1);
    }

    #[test]
    fn sequence_class_examples() {
        let p = build_simplex(2, rat_int(1)).unwrap();
        let todd = named_series("todd", 5).unwrap();

        let r1 = sequence_class(&p, &todd, 1).unwrap();
        let c1 = crate::charclass::chern_class(&p, 1).unwrap();
        assert_eq!(r1, c1.scale(&rat(1, 2)));

        let r2 = sequence_class(&p, &todd, 2).unwrap();
        let c2 = crate::charclass::chern_class(&p, 2).unwrap();
        let expect = (&c1.pow(2) + &c2).scale(&rat(1, 12));
        assert_eq!(r2, expect);

        assert_eq!(sequence_class(&p, &todd, 0).unwrap(), MPoly::one());
        assert!(matches!(
            sequence_class(&p, &todd, 9),
            Err(GenusError::TruncationTooLow { .. })
        ));
    }

    #[test]
    fn genus_values() {
        let chi = chi_y_series(5);
        let cp2 = build_simplex(2, rat_int(1)).unwrap();
        assert_eq!(genus_value(&cp2, &chi).unwrap(), chi_cp2());

        let todd = named_series("todd", 5).unwrap();
        assert_eq!(genus_value(&cp2, &todd).unwrap(), MPoly::one());

        // signature of the two-point blow-up is -1
        let blowup = build_blowup(rat_int(3), 0).unwrap();
        let chi_blowup = genus_value(&blowup, &chi).unwrap();
        let mut at_one = BTreeMap::new();
        at_one.insert(VarId::Param, MPoly::one());
        assert_eq!(chi_blowup.substitute(&at_one), MPoly::from_int(-1));
        // 1 - 3y + y^2
        let expect = &(&MPoly::one() - &y().scale(&rat_int(3))) + &y().pow(2);
        assert_eq!(chi_blowup, expect);
    }

    #[test]
    fn fixed_point_count_examples() {
        let cp2 = build_simplex(2, rat_int(1)).unwrap();
        assert_eq!(chi_y_fixed_points(&cp2, &[1, 2]).unwrap(), chi_cp2());
        // (1,1) pairs to zero against the weight T1 - T2
        assert!(matches!(
            chi_y_fixed_points(&cp2, &[1, 1]),
            Err(GenusError::NonGenericDirection)
        ));

        let ruled = build_ruled(2, rat(3, 2)).unwrap();
        let xi = generic_direction(&ruled).unwrap();
        assert_eq!(
            chi_y_fixed_points(&ruled, &xi).unwrap(),
            chi_cp1().pow(2)
        );

        let pb = build_projbundle(rat_int(3), 1, 2).unwrap();
        let xi = generic_direction(&pb).unwrap();
        assert_eq!(
            chi_y_fixed_points(&pb, &xi).unwrap(),
            &chi_cp2() * &chi_cp1()
        );
    }

    #[test]
    fn two_path_agreement() {
        let chi = chi_y_series(6);
        for p in [
            build_simplex(2, rat_int(1)).unwrap(),
            build_ruled(1, rat(1, 2)).unwrap(),
            build_blowup(rat_int(3), 1).unwrap(),
            build_projbundle(rat_int(3), 0, 0).unwrap(),
        ] {
            let by_localization = genus_value(&p, &chi).unwrap();
            let xi = generic_direction(&p).unwrap();
            let by_count = chi_y_fixed_points(&p, &xi).unwrap();
            assert_eq!(by_localization, by_count, "two paths differ on {}", p.name());
        }
    }

    #[test]
    fn strict_multiplicativity() {
        let ruled = build_ruled(1, rat(1, 2)).unwrap();
        let chi = chi_y_series(5);
        for (r, value) in strict_mult_check(&ruled, &chi, 5).unwrap() {
            assert_eq!(value, MPoly::zero(), "chi-y entry at r = {r}");
        }

        let cp2 = build_simplex(2, rat_int(1)).unwrap();
        let todd = named_series("todd", 5).unwrap();
        let entries = strict_mult_check(&cp2, &todd, 3).unwrap();
        assert_eq!(entries, vec![(3, MPoly::zero())]);

        // negative control: the all-ones series fails at r = 3
        let segre = segre_series(5);
        let entries = strict_mult_check(&ruled, &segre, 3).unwrap();
        assert_eq!(entries.len(), 1);
        assert!(!entries[0].1.is_zero(), "segre control must be nonzero");

        // while the total Chern class is multiplicative outright
        let chern = total_chern_series(5);
        for (r, value) in strict_mult_check(&ruled, &chern, 5).unwrap() {
            assert_eq!(value, MPoly::zero(), "total chern entry at r = {r}");
        }
    }

    #[test]
    fn chern_polynomials_of_series() {
        let todd = named_series("todd", 4).unwrap();
        // r = 2: (c_1^2 + c_2)/12, with F_i standing for c_i
        let k2 = k_poly_in_chern(&todd, 2).unwrap();
        let c1 = MPoly::var(VarId::Face(1));
        let c2 = MPoly::var(VarId::Face(2));
        assert_eq!(k2, (&c1.pow(2) + &c2).scale(&rat(1, 12)));

        let k1 = k_poly_in_chern(&todd, 1).unwrap();
        assert_eq!(k1, c1.scale(&rat(1, 2)));

        let chi = chi_y_series(4);
        let k1 = k_poly_in_chern(&chi, 1).unwrap();
        let half_one_minus_y = (&MPoly::one() - &y()).scale(&rat(1, 2));
        assert_eq!(k1, &half_one_minus_y * &c1);

        // the classical order-3 and order-4 polynomials
        let c3 = MPoly::var(VarId::Face(3));
        let c4 = MPoly::var(VarId::Face(4));
        assert_eq!(
            k_poly_in_chern(&todd, 3).unwrap(),
            (&c1 * &c2).scale(&rat(1, 24))
        );
        let t4 = &(&(&(&(-&c1.pow(4)) + &(&c1.pow(2) * &c2).scale(&rat(4, 1)))
            + &c2.pow(2).scale(&rat(3, 1)))
            + &(&c1 * &c3))
            - &c4;
        assert_eq!(k_poly_in_chern(&todd, 4).unwrap(), t4.scale(&rat(1, 720)));
    }

    #[test]
    fn chern_polynomial_matches_sequence_class() {
        let chi = chi_y_series(4);
        for p in [
            build_simplex(2, rat_int(1)).unwrap(),
            build_ruled(1, rat(1, 2)).unwrap(),
        ] {
            let k = p.num_facets();
            for r in 0..=3usize {
                let in_chern = k_poly_in_chern(&chi, r).unwrap();
                let mut map = BTreeMap::new();
                for i in 1..=r as u32 {
                    map.insert(
                        VarId::Face(i),
                        crate::charclass::elementary_symmetric(k, i as usize),
                    );
                }
                assert_eq!(
                    in_chern.substitute(&map),
                    sequence_class(&p, &chi, r).unwrap(),
                    "mismatch at r = {r} on {}",
                    p.name()
                );
            }
        }
    }

    #[test]
    fn product_formula() {
        let chi = chi_y_series(6);
        let cp1 = build_simplex(1, rat_int(1)).unwrap();
        let cp2 = build_simplex(2, rat_int(1)).unwrap();

        let pb = build_projbundle(rat_int(3), 1, 2).unwrap();
        assert!(genus_product_check(&cp2, &cp1, &pb, &chi).unwrap());

        let ruled = build_ruled(2, rat(3, 2)).unwrap();
        assert!(genus_product_check(&cp1, &cp1, &ruled, &chi).unwrap());
    }
}
