//! The coefficient ideal of a monic polynomial, and the order equivalence it
//! satisfies.
//!
//! For `f = z^k + a_1 z^{k-1} + … + a_k` with the `a_i` free of `z`, the
//! auxiliary ideal `⟨a_1^{k!}, a_2^{k!/2}, …, a_k^{(k-1)!}⟩` carries the
//! order condition one dimension down: `f` has order `k` at the origin
//! exactly when every `a_i^{k!/i}` has order at least `k!` there. The two
//! sides are computed by unrelated code paths, so checking them against each
//! other is a genuine consistency test.

use num_traits::One;

use crate::arith::checked_factorial;
use crate::error::{Error, Result};
use crate::poly::{Order, Polynomial};

/// The powered-coefficient list of a monic polynomial in `z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientIdealData {
    /// Degree of `f` in the main variable.
    pub k: u32,
    /// `k!`, the reference order.
    pub factorial: u64,
    /// `a_i^{k!/i}` for `i = 1..=k` (index `i-1`); zero coefficients stay zero.
    pub powered: Vec<Polynomial>,
}

/// Extract `k` and the powered coefficients `a_i^{k!/i}` of `f` with respect
/// to the variable at index `z`. `f` must be monic in `z` (leading
/// coefficient the constant 1) of degree `k ≥ 1`.
pub fn coefficient_ideal(f: &Polynomial, z: usize) -> Result<CoefficientIdealData> {
    let ring = f.ring();
    if z >= ring.num_vars() {
        return Err(Error::VariableNotInRing {
            name: format!("#{z}"),
        });
    }
    let k = match f.degree_in(z) {
        Some(k) if k >= 1 => k,
        _ => {
            return Err(Error::NotMonic {
                var: ring.name(z).to_string(),
            })
        }
    };
    let lead = f.coefficient_of_power(z, k);
    if !(lead.is_constant() && lead.coefficient(&crate::poly::Monomial::one(ring.num_vars())).is_one())
    {
        return Err(Error::NotMonic {
            var: ring.name(z).to_string(),
        });
    }
    // k!/1 is the largest exponent we will raise a polynomial to; keep it in
    // a range where exact exponentiation stays sane.
    if k > 8 {
        return Err(Error::DegreeTooLarge(k));
    }
    let factorial = checked_factorial(k)?;
    let mut powered = Vec::with_capacity(k as usize);
    for i in 1..=k {
        let a_i = f.coefficient_of_power(z, k - i);
        let e = (factorial / i as u64) as u32;
        powered.push(a_i.pow(e)?);
    }
    Ok(CoefficientIdealData {
        k,
        factorial,
        powered,
    })
}

/// Evaluate both sides of the order equivalence independently and report
/// whether they agree. A `false` here means the implementation is broken —
/// the equivalence is a theorem.
pub fn check_order_equivalence(f: &Polynomial, z: usize) -> Result<bool> {
    let data = coefficient_ideal(f, z)?;
    let lhs = f.order_at_origin() == Order::Finite(data.k as u64);
    let rhs = data.powered.iter().all(|p| match p.order_at_origin() {
        Order::Infinite => true,
        Order::Finite(o) => o >= data.factorial,
    });
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::parse::parse_polynomials;

    fn check(src: &str) -> bool {
        let (_, polys) = parse_polynomials(FieldSpec::Rational, &[src]).unwrap();
        check_order_equivalence(&polys[0], 0).unwrap()
    }

    #[test]
    fn z2_minus_xy2() {
        let (_, polys) =
            parse_polynomials(FieldSpec::Rational, &["z^2 - x*y^2"]).unwrap();
        let data = coefficient_ideal(&polys[0], 0).unwrap();
        assert_eq!(data.k, 2);
        assert_eq!(data.factorial, 2);
        assert!(data.powered[0].is_zero()); // a_1 = 0
        assert_eq!(data.powered[1].to_string(), "-x*y^2"); // a_2^{2!/2}
        assert_eq!(data.powered[1].order_at_origin(), Order::Finite(3));
        assert!(check("z^2 - x*y^2"));
    }

    #[test]
    fn pure_power() {
        let (_, polys) = parse_polynomials(FieldSpec::Rational, &["z^3"]).unwrap();
        let data = coefficient_ideal(&polys[0], 0).unwrap();
        assert_eq!(data.k, 3);
        assert!(data.powered.iter().all(|p| p.is_zero()));
        assert!(check("z^3"));
    }

    #[test]
    fn linear_coefficient() {
        // f = z^2 + x z: a_1 = x, powered a_1^2 = x^2 of order 2 = k!,
        // and ord(f) = 2 as well — both sides hold.
        let (_, polys) = parse_polynomials(FieldSpec::Rational, &["z^2 + x*z"]).unwrap();
        let data = coefficient_ideal(&polys[0], 0).unwrap();
        assert_eq!(data.powered[0].to_string(), "x^2");
        assert!(data.powered[1].is_zero());
        assert!(check("z^2 + x*z"));
    }

    #[test]
    fn failing_order_side() {
        // f = z^2 + x: ord(f) = 1 ≠ 2 and a_2 = x gives a_2^1 of order
        // 1 < 2 — both sides false, equivalence still true.
        assert!(check("z^2 + x"));
    }

    #[test]
    fn rejects_non_monic() {
        // leading coefficient 2
        let (_, polys) = parse_polynomials(FieldSpec::Rational, &["2*z^2 + x"]).unwrap();
        assert!(matches!(
            coefficient_ideal(&polys[0], 0),
            Err(Error::NotMonic { .. })
        ));
        // leading coefficient x (not constant)
        let (ring, polys) = parse_polynomials(FieldSpec::Rational, &["x*z + 1"]).unwrap();
        let z = ring.var_index("z").unwrap();
        assert!(matches!(
            coefficient_ideal(&polys[0], z),
            Err(Error::NotMonic { .. })
        ));
        // constant input: degree 0 in every variable
        let (_, polys) = parse_polynomials(FieldSpec::Rational, &["5"]).unwrap();
        assert!(matches!(
            coefficient_ideal(&polys[0], 0),
            Err(Error::NotMonic { .. })
        ));
    }
}
